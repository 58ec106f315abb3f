//! Affine lattices in ℤⁿ stored in Hermite normal form.
//!
//! A lattice is an origin plus the integer row span of an echelon basis whose
//! pivots are positive and whose entries above each pivot are reduced into
//! `[0, pivot)`. That form is canonical, so equality of lattices is equality
//! of the stored data.

use crate::arith::{
    dot_i, is_zero_i, rat_int, rational_inverse, sub_i, to_int, to_q, IVec, Int, QVec, Rat,
};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLattice {
    pub ambient_dim: usize,
    pub origin: IVec,
    /// HNF rows; `basis.len()` is the rank.
    pub basis: Vec<IVec>,
}

/// Row Hermite normal form of the integer span of `rows`.
pub fn hnf(rows: &[IVec], ncols: usize) -> Vec<IVec> {
    let mut m: Vec<IVec> = rows.iter().filter(|r| !is_zero_i(r)).cloned().collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let best = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(best) = best else { break };
            m.swap(r, best);
            let mut done = true;
            for i in r + 1..m.len() {
                if !m[i][c].is_zero() {
                    let q = m[i][c].div_floor(&m[r][c]);
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                    if !m[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if !q.is_zero() {
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| !is_zero_i(row));
    m
}

fn pivot_col(row: &[Int]) -> usize {
    row.iter().position(|x| !x.is_zero()).expect("zero HNF row")
}

/// Reduces `v` modulo the lattice spanned by the HNF `basis`, bringing each
/// pivot coordinate into `[0, pivot)`. Returns the multipliers and the remainder.
fn reduce(basis: &[IVec], v: &[Int]) -> (Vec<Int>, IVec) {
    let mut w = v.to_vec();
    let mut coeffs = Vec::with_capacity(basis.len());
    for b in basis {
        let c = pivot_col(b);
        let q = w[c].div_floor(&b[c]);
        if !q.is_zero() {
            for (x, y) in w.iter_mut().zip(b) {
                *x -= &q * y;
            }
        }
        coeffs.push(q);
    }
    (coeffs, w)
}

impl AffineLattice {
    pub fn new(origin: IVec, generators: &[IVec]) -> Self {
        let n = origin.len();
        AffineLattice { ambient_dim: n, basis: hnf(generators, n), origin }
    }

    /// The affine lattice generated by a finite point set: first point plus
    /// the integer span of all differences.
    pub fn of_points(points: &[IVec]) -> Self {
        assert!(!points.is_empty(), "affine lattice of an empty set");
        let o = points[0].clone();
        let diffs: Vec<IVec> = points[1..].iter().map(|p| sub_i(p, &o)).collect();
        AffineLattice::new(o, &diffs)
    }

    /// Affine lattice of the Minkowski sum of several point sets.
    pub fn of_sum(sets: &[&[IVec]]) -> Self {
        let n = sets[0][0].len();
        let mut origin = vec![Int::zero(); n];
        let mut diffs = Vec::new();
        for s in sets {
            origin = crate::arith::add_i(&origin, &s[0]);
            diffs.extend(s[1..].iter().map(|p| sub_i(p, &s[0])));
        }
        AffineLattice::new(origin, &diffs)
    }

    pub fn standard(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        AffineLattice { ambient_dim: n, origin: vec![Int::zero(); n], basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// The linear lattice of differences (origin moved to zero).
    pub fn linear(&self) -> Self {
        AffineLattice {
            ambient_dim: self.ambient_dim,
            origin: vec![Int::zero(); self.ambient_dim],
            basis: self.basis.clone(),
        }
    }

    pub fn translate(&self, t: &[Int]) -> Self {
        let o = crate::arith::add_i(&self.origin, t);
        let (_, rem) = reduce(&self.basis, &o);
        AffineLattice { ambient_dim: self.ambient_dim, origin: rem, basis: self.basis.clone() }
    }

    /// Canonical origin, so two equal lattices compare equal.
    pub fn canonical(&self) -> Self {
        self.translate(&vec![Int::zero(); self.ambient_dim])
    }

    pub fn contains_vector(&self, v: &[Int]) -> bool {
        is_zero_i(&reduce(&self.basis, v).1)
    }

    pub fn contains_point(&self, p: &[Int]) -> bool {
        self.contains_vector(&sub_i(p, &self.origin))
    }

    /// Canonical representative of `v + L` where `L` is the linear part.
    pub fn coset_rep(&self, v: &[Int]) -> IVec {
        reduce(&self.basis, v).1
    }

    /// Coordinates `y` with `v = y · basis`, when `v` is in the linear part.
    pub fn coords_of_vector(&self, v: &[Int]) -> Option<IVec> {
        let (c, rem) = reduce_exact(&self.basis, v);
        if is_zero_i(&rem) {
            Some(c)
        } else {
            None
        }
    }

    /// Rational coordinates of a rational vector lying in the real span.
    pub fn coords_of_rational(&self, v: &[Rat]) -> Option<QVec> {
        let mut w = v.to_vec();
        let mut y = Vec::with_capacity(self.rank());
        for b in &self.basis {
            let c = pivot_col(b);
            let q = &w[c] / rat_int(&b[c]);
            for (x, bi) in w.iter_mut().zip(b) {
                *x -= &q * rat_int(bi);
            }
            y.push(q);
        }
        if w.iter().all(Zero::is_zero) {
            Some(y)
        } else {
            None
        }
    }

    pub fn vector_from_coords(&self, y: &[Int]) -> IVec {
        let mut v = vec![Int::zero(); self.ambient_dim];
        for (c, b) in y.iter().zip(&self.basis) {
            for (x, bi) in v.iter_mut().zip(b) {
                *x += c * bi;
            }
        }
        v
    }

    pub fn rational_from_coords(&self, y: &[Rat]) -> QVec {
        let mut v = vec![Rat::zero(); self.ambient_dim];
        for (c, b) in y.iter().zip(&self.basis) {
            for (x, bi) in v.iter_mut().zip(b) {
                *x += c * rat_int(bi);
            }
        }
        v
    }
}

/// Exact coordinate extraction against echelon rows; stops dividing when a
/// pivot does not divide, leaving a nonzero remainder.
fn reduce_exact(basis: &[IVec], v: &[Int]) -> (IVec, IVec) {
    let mut w = v.to_vec();
    let mut coeffs = Vec::with_capacity(basis.len());
    for b in basis {
        let c = pivot_col(b);
        let (q, r) = w[c].div_rem(&b[c]);
        if !r.is_zero() {
            coeffs.push(Int::zero());
            continue;
        }
        for (x, y) in w.iter_mut().zip(b) {
            *x -= &q * y;
        }
        coeffs.push(q);
    }
    (coeffs, w)
}

pub fn affine_lattice_of(points: &[IVec]) -> AffineLattice {
    AffineLattice::of_points(points)
}

pub fn rank_of(l: &AffineLattice) -> usize {
    l.rank()
}

/// Whether `sub ⊆ sup` as affine lattices.
pub fn contains_lattice(sub: &AffineLattice, sup: &AffineLattice) -> bool {
    sup.contains_point(&sub.origin) && sub.basis.iter().all(|b| sup.contains_vector(b))
}

/// Coordinates of the linear part of `sub` in the basis of `sup`.
fn relative_basis(sub: &AffineLattice, sup: &AffineLattice) -> Vec<IVec> {
    sub.basis
        .iter()
        .map(|b| sup.coords_of_vector(b).expect("sublattice not contained"))
        .collect()
}

/// `[sup : sub]` for lattices of equal rank with `sub ⊆ sup` (linear parts).
pub fn lattice_index(sub: &AffineLattice, sup: &AffineLattice) -> Result<Int, String> {
    if sub.rank() != sup.rank() {
        return Err(format!("rank mismatch: {} vs {}", sub.rank(), sup.rank()));
    }
    if !sub.basis.iter().all(|b| sup.contains_vector(b)) {
        return Err("not a sublattice".into());
    }
    let y = relative_basis(sub, sup);
    let h = hnf(&y, sup.rank());
    Ok(h.iter().enumerate().fold(Int::one(), |acc, (i, r)| acc * &r[i]))
}

/// Complete set of representatives of `sup / sub` (as translation vectors in
/// the ambient space), in mixed-radix order of the HNF pivots.
pub fn coset_representatives(sub: &AffineLattice, sup: &AffineLattice) -> Result<Vec<IVec>, String> {
    lattice_index(sub, sup)?;
    let h = hnf(&relative_basis(sub, sup), sup.rank());
    let radices: Vec<usize> = h
        .iter()
        .enumerate()
        .map(|(i, r)| usize::try_from(&r[i]).map_err(|_| "index too large".to_string()))
        .collect::<Result<_, _>>()?;
    let total: usize = radices.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; radices.len()];
    for _ in 0..total {
        let y: IVec = digits.iter().map(|&d| Int::from(d)).collect();
        out.push(sup.vector_from_coords(&y));
        for k in (0..digits.len()).rev() {
            digits[k] += 1;
            if digits[k] < radices[k] {
                break;
            }
            digits[k] = 0;
        }
    }
    Ok(out)
}

/// Integer kernel {z ∈ ℤᶜ : A z = 0} of an `m × c` integer matrix. The
/// returned basis spans a saturated lattice.
pub fn integer_kernel(a: &[IVec], ncols: usize) -> Vec<IVec> {
    let (h, u) = column_hnf_with_transform(a, ncols);
    let rank = (0..ncols).filter(|&j| h.iter().any(|row| !row[j].is_zero())).count();
    (rank..ncols).map(|j| u.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Column operations `A · U = [H | 0]` with `U` unimodular. Returns `(A·U, U)`.
pub fn column_hnf_with_transform(a: &[IVec], ncols: usize) -> (Vec<IVec>, Vec<IVec>) {
    // Work on the transpose with row operations, tracking the transform.
    let m = a.len();
    let mut t: Vec<IVec> = (0..ncols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect();
    let mut u: Vec<IVec> = (0..ncols)
        .map(|i| (0..ncols).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    let mut r = 0;
    for c in 0..m {
        if r == ncols {
            break;
        }
        loop {
            let best = (r..ncols)
                .filter(|&i| !t[i][c].is_zero())
                .min_by(|&x, &y| t[x][c].abs().cmp(&t[y][c].abs()));
            let Some(best) = best else { break };
            t.swap(r, best);
            u.swap(r, best);
            let mut done = true;
            for i in r + 1..ncols {
                if !t[i][c].is_zero() {
                    let q = t[i][c].div_floor(&t[r][c]);
                    let (tr, ur) = (t[r].clone(), u[r].clone());
                    for (x, y) in t[i].iter_mut().zip(&tr) {
                        *x -= &q * y;
                    }
                    for (x, y) in u[i].iter_mut().zip(&ur) {
                        *x -= &q * y;
                    }
                    if !t[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !t[r][c].is_zero() {
            r += 1;
        }
    }
    // Transpose back: columns of A·U are rows of t; U's columns are rows of u.
    let h: Vec<IVec> = (0..m).map(|i| (0..ncols).map(|j| t[j][i].clone()).collect()).collect();
    let ucols: Vec<IVec> = (0..ncols).map(|i| (0..ncols).map(|j| u[j][i].clone()).collect()).collect();
    (h, ucols)
}

/// `ambient ∩ span_ℚ(sub)`, with the origin of `sub`.
pub fn saturation(sub: &AffineLattice, ambient: &AffineLattice) -> Result<AffineLattice, String> {
    if !sub.basis.iter().all(|b| ambient.contains_vector(b)) {
        return Err("not a sublattice".into());
    }
    let r = ambient.rank();
    if sub.rank() == 0 {
        return Ok(AffineLattice::new(sub.origin.clone(), &[]));
    }
    let y = relative_basis(sub, ambient);
    let kernel = integer_kernel(&y, r);
    let sat_coords = if kernel.is_empty() {
        AffineLattice::standard(r).basis
    } else {
        integer_kernel(&kernel, r)
    };
    let gens: Vec<IVec> = sat_coords.iter().map(|c| ambient.vector_from_coords(c)).collect();
    Ok(AffineLattice::new(sub.origin.clone(), &gens))
}

/// Splitting `ambient = s(sub) ⊕ complement` with the projection along the
/// saturation `s(sub)`.
#[derive(Clone, Debug)]
pub struct OrthogonalDecomposition {
    pub saturated: AffineLattice,
    pub complement: AffineLattice,
    ambient: AffineLattice,
    /// Unimodular transform in ambient coordinates.
    u: Vec<IVec>,
    s: usize,
}

impl OrthogonalDecomposition {
    /// Projects a vector of the linear part of `ambient` to ℤ^{r−s}.
    pub fn project(&self, v: &[Int]) -> Option<IVec> {
        let y = self.ambient.coords_of_vector(v)?;
        let r = y.len();
        Some((self.s..r).map(|j| (0..r).fold(Int::zero(), |acc, i| acc + &y[i] * &self.u[i][j])).collect())
    }

    pub fn project_rational(&self, v: &[Rat]) -> Option<QVec> {
        let y = self.ambient.coords_of_rational(v)?;
        let r = y.len();
        Some(
            (self.s..r)
                .map(|j| (0..r).fold(Rat::zero(), |acc, i| acc + &y[i] * rat_int(&self.u[i][j])))
                .collect(),
        )
    }

    pub fn quotient_rank(&self) -> usize {
        self.ambient.rank() - self.s
    }
}

pub fn orthogonal_decomposition(
    sub: &AffineLattice,
    ambient: &AffineLattice,
) -> Result<OrthogonalDecomposition, String> {
    let sat = saturation(sub, ambient)?;
    let r = ambient.rank();
    let s = sat.rank();
    let sy = relative_basis(&sat, ambient);
    let (_, u) = column_hnf_with_transform(&sy, r);
    let uq: Vec<QVec> = u.iter().map(|row| to_q(row)).collect();
    let v = rational_inverse(&uq).ok_or("singular transform")?;
    let comp: Vec<IVec> = v[s..]
        .iter()
        .map(|row| ambient.vector_from_coords(&to_int(row).expect("unimodular inverse")))
        .collect();
    let complement = AffineLattice::new(ambient.origin.clone(), &comp);
    Ok(OrthogonalDecomposition { saturated: sat, complement, ambient: ambient.clone(), u, s })
}

/// Coordinates identifying an affine lattice of rank `r` with ℤʳ.
#[derive(Clone, Debug)]
pub struct FullRankCoords {
    pub lattice: AffineLattice,
}

impl FullRankCoords {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn forward(&self, p: &[Int]) -> Option<IVec> {
        self.lattice.coords_of_vector(&sub_i(p, &self.lattice.origin))
    }

    pub fn forward_rational(&self, x: &[Rat]) -> Option<QVec> {
        let o = to_q(&self.lattice.origin);
        self.lattice.coords_of_rational(&crate::arith::sub_q(x, &o))
    }

    /// Maps a direction (no origin shift).
    pub fn forward_vector(&self, v: &[Int]) -> Option<IVec> {
        self.lattice.coords_of_vector(v)
    }

    pub fn forward_vector_rational(&self, v: &[Rat]) -> Option<QVec> {
        self.lattice.coords_of_rational(v)
    }

    pub fn inverse(&self, y: &[Int]) -> IVec {
        crate::arith::add_i(&self.lattice.origin, &self.lattice.vector_from_coords(y))
    }

    pub fn inverse_rational(&self, y: &[Rat]) -> QVec {
        crate::arith::add_q(&to_q(&self.lattice.origin), &self.lattice.rational_from_coords(y))
    }

    pub fn inverse_vector(&self, y: &[Int]) -> IVec {
        self.lattice.vector_from_coords(y)
    }

    /// Pulls a linear functional `w` on coordinates back to the ambient space:
    /// the unique `u` in the real span with `⟨x, u⟩ = ⟨y, w⟩`, scaled primitive.
    pub fn pullback_functional(&self, w: &[Int]) -> IVec {
        let b: Vec<QVec> = self.lattice.basis.iter().map(|r| to_q(r)).collect();
        let k = b.len();
        let n = self.lattice.ambient_dim;
        // u = Bᵀ (B Bᵀ)⁻¹ w
        let gram: Vec<QVec> = (0..k)
            .map(|i| (0..k).map(|j| crate::arith::dot_q(&b[i], &b[j])).collect())
            .collect();
        let gi = rational_inverse(&gram).expect("independent basis");
        let wq = to_q(w);
        let coef: QVec = (0..k).map(|i| crate::arith::dot_q(&gi[i], &wq)).collect();
        let u: QVec = (0..n).map(|c| (0..k).fold(Rat::zero(), |acc, i| acc + &coef[i] * &b[i][c])).collect();
        crate::arith::primitive_direction(&u)
    }

    /// Volume of the fundamental cell relative to the standard lattice when
    /// the lattice is full rank.
    pub fn covolume(&self) -> Option<Int> {
        if self.rank() != self.lattice.ambient_dim {
            return None;
        }
        Some(self.lattice.basis.iter().enumerate().fold(Int::one(), |acc, (i, r)| acc * &r[i]))
    }
}

pub fn to_full_rank_coordinates(l: &AffineLattice) -> FullRankCoords {
    FullRankCoords { lattice: l.clone() }
}

/// The lattice `{x ∈ ℤⁿ : ⟨x, v⟩ = 0}`.
pub fn orthogonal_lattice(v: &[Int]) -> AffineLattice {
    let n = v.len();
    let k = integer_kernel(&[v.to_vec()], n);
    AffineLattice::new(vec![Int::zero(); n], &k)
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    dot_i(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ivec;
    use proptest::prelude::*;

    #[test]
    fn hnf_is_canonical() {
        let a = hnf(&[ivec(&[2, 4]), ivec(&[4, 2])], 2);
        let b = hnf(&[ivec(&[2, -2]), ivec(&[2, 4]), ivec(&[6, 6])], 2);
        assert_eq!(a, b);
        assert_eq!(a, vec![ivec(&[2, 4]), ivec(&[0, 6])]);
    }

    #[test]
    fn rank_and_index() {
        let l = affine_lattice_of(&[ivec(&[0, 0]), ivec(&[1, 1]), ivec(&[-1, 1])]);
        assert_eq!(rank_of(&l), 2);
        assert_eq!(lattice_index(&l, &AffineLattice::standard(2)).unwrap(), Int::from(2));
        let reps = coset_representatives(&l, &AffineLattice::standard(2)).unwrap();
        assert_eq!(reps.len(), 2);
        assert!(!l.contains_vector(&sub_i(&reps[0], &reps[1])));
    }

    #[test]
    fn cosets_of_even_integers() {
        let even = AffineLattice::new(ivec(&[0]), &[ivec(&[2])]);
        let reps = coset_representatives(&even, &AffineLattice::standard(1)).unwrap();
        assert_eq!(reps, vec![ivec(&[0]), ivec(&[1])]);
    }

    #[test]
    fn saturation_of_scaled_line() {
        let sub = AffineLattice::new(ivec(&[0, 0]), &[ivec(&[2, 2])]);
        let sat = saturation(&sub, &AffineLattice::standard(2)).unwrap();
        assert_eq!(sat.basis, vec![ivec(&[1, 1])]);
        let od = orthogonal_decomposition(&sub, &AffineLattice::standard(2)).unwrap();
        assert_eq!(od.quotient_rank(), 1);
        assert_eq!(od.project(&ivec(&[3, 3])).unwrap(), ivec(&[0]));
        assert_eq!(od.project(&ivec(&[1, 0])).unwrap().iter().map(|x| x.abs()).collect::<Vec<_>>(), ivec(&[1]));
    }

    #[test]
    fn full_rank_coordinates_round_trip() {
        let l = AffineLattice::new(ivec(&[1, 0]), &[ivec(&[1, 1]), ivec(&[0, 3])]);
        let f = to_full_rank_coordinates(&l);
        assert_eq!(f.covolume().unwrap(), Int::from(3));
        let p = ivec(&[3, 5]);
        let y = f.forward(&p).unwrap();
        assert_eq!(f.inverse(&y), p);
        assert!(f.forward(&ivec(&[2, 0])).is_none());
    }

    #[test]
    fn orthogonal_lattice_of_normal() {
        let l = orthogonal_lattice(&ivec(&[2, 3]));
        assert_eq!(l.rank(), 1);
        assert!(l.contains_vector(&ivec(&[3, -2])));
        assert!(!l.contains_vector(&ivec(&[1, 0])));
    }

    fn small_vecs(n: usize, k: usize) -> impl Strategy<Value = Vec<IVec>> {
        prop::collection::vec(prop::collection::vec(-6i64..7, n), 1..=k)
            .prop_map(|vs| vs.into_iter().map(|v| ivec(&v)).collect())
    }

    proptest! {
        #[test]
        fn hnf_spans_generators(gens in small_vecs(3, 4)) {
            let l = AffineLattice::new(ivec(&[0, 0, 0]), &gens);
            for g in &gens {
                prop_assert!(l.contains_vector(g));
            }
            for b in &l.basis {
                let back = hnf(&gens, 3);
                prop_assert!(AffineLattice::new(ivec(&[0,0,0]), &back).contains_vector(b));
            }
        }

        #[test]
        fn coset_count_matches_index(gens in small_vecs(2, 3)) {
            let sub = AffineLattice::new(ivec(&[0, 0]), &gens);
            prop_assume!(sub.rank() == 2);
            let idx = lattice_index(&sub, &AffineLattice::standard(2)).unwrap();
            let reps = coset_representatives(&sub, &AffineLattice::standard(2)).unwrap();
            prop_assert_eq!(Int::from(reps.len()), idx);
            for i in 0..reps.len() {
                for j in 0..i {
                    prop_assert!(!sub.contains_vector(&sub_i(&reps[i], &reps[j])));
                }
            }
        }

        #[test]
        fn saturation_contains_sub(gens in small_vecs(3, 2)) {
            let sub = AffineLattice::new(ivec(&[0, 0, 0]), &gens);
            let sat = saturation(&sub, &AffineLattice::standard(3)).unwrap();
            prop_assert_eq!(sat.rank(), sub.rank());
            prop_assert!(contains_lattice(&sub, &sat));
        }
    }
}
