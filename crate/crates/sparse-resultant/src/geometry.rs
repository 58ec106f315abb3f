//! Exact rational polytopes.
//!
//! Hulls are computed with the double description method on the cone of valid
//! inequalities. Polytopes that are not full dimensional are handled inside
//! their affine hull; facet normals then live in the direction space of that
//! hull and are scaled to primitive integer vectors.

use crate::arith::{
    add_q, dot_q, dot_qi, factorial, lex_cmp_q, primitive_direction, rat_int, rational_echelon,
    rational_nullspace, scale_q, solve_in_span, sub_q, to_q, IVec, Int, QVec, Rat,
};
use crate::lattice::{to_full_rank_coordinates, AffineLattice};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    /// Primitive integer inward normal.
    pub normal: IVec,
    /// `⟨x, normal⟩ ≥ offset` on the polytope, with equality on the facet.
    pub offset: Rat,
}

#[derive(Clone, Debug)]
pub struct RationalPolytope {
    pub ambient_dim: usize,
    /// Vertices in lexicographic order.
    pub vertices: Vec<QVec>,
    pub facets: Vec<Facet>,
    /// Affine hull equations `⟨x, e⟩ = c`.
    pub equations: Vec<(IVec, Rat)>,
    pub dim: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error("empty point set")]
    Empty,
    #[error("point is not in the lattice span")]
    OutsideLattice,
}

// ---------------------------------------------------------------------------
// Double description

fn scale_to_integers(v: &[Rat]) -> IVec {
    let l = v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| (x * rat_int(&l)).to_integer()).collect()
}

fn prim(v: IVec) -> IVec {
    crate::arith::primitive_int(&v)
}

fn idot(a: &[Int], b: &[Int]) -> Int {
    crate::arith::dot_i(a, b)
}

#[derive(Clone)]
struct Ray {
    v: IVec,
    zeros: Vec<u64>,
}

fn bit_set(z: &mut [u64], i: usize) {
    z[i / 64] |= 1 << (i % 64);
}

fn bit_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bit_count(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

fn bit_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Extreme rays of the pointed cone `{y : ⟨a_j, y⟩ ≥ 0}`.
pub fn extreme_rays(constraints: &[IVec], d: usize) -> Vec<IVec> {
    if d == 0 {
        return Vec::new();
    }
    let words = constraints.len().div_ceil(64).max(1);
    // Initial simplicial cone from d independent constraints.
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis_rows: Vec<QVec> = Vec::new();
    for (j, a) in constraints.iter().enumerate() {
        let mut trial = basis_rows.clone();
        trial.push(to_q(a));
        if rational_echelon(&trial, d).1.len() > basis_rows.len() {
            basis_rows = trial;
            chosen.push(j);
            if chosen.len() == d {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), d, "cone is not pointed");
    let inv = crate::arith::rational_inverse(&basis_rows).expect("independent rows");
    let mut rays: Vec<Ray> = (0..d)
        .map(|i| {
            let col: QVec = (0..d).map(|r| inv[r][i].clone()).collect();
            let v = prim(scale_to_integers(&col));
            let mut zeros = vec![0u64; words];
            for (k, &j) in chosen.iter().enumerate() {
                if k != i {
                    bit_set(&mut zeros, j);
                }
            }
            Ray { v, zeros }
        })
        .collect();
    let mut processed: Vec<bool> = vec![false; constraints.len()];
    for &j in &chosen {
        processed[j] = true;
    }
    for (j, a) in constraints.iter().enumerate() {
        if processed[j] {
            continue;
        }
        processed[j] = true;
        let vals: Vec<Int> = rays.iter().map(|r| idot(a, &r.v)).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        for (i, r) in rays.iter_mut().enumerate() {
            if vals[i].is_zero() {
                bit_set(&mut r.zeros, j);
            }
        }
        if neg.is_empty() {
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let mut new_rays = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = bit_and(&rays[p].zeros, &rays[n].zeros);
                if bit_count(&common) + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == n || !bit_subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                let v: IVec = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| &vals[p] * x - &vals[n] * y)
                    .collect();
                let mut zeros = common;
                bit_set(&mut zeros, j);
                new_rays.push(Ray { v: prim(v), zeros });
            }
        }
        let mut keep: Vec<Ray> = (0..rays.len())
            .filter(|i| !vals[*i].is_negative())
            .map(|i| rays[i].clone())
            .collect();
        keep.extend(new_rays);
        rays = keep;
    }
    rays.into_iter().map(|r| r.v).collect()
}

// ---------------------------------------------------------------------------
// Affine hull bookkeeping

struct AffineFrame {
    origin: QVec,
    /// Direction basis (rows), reduced echelon.
    dirs: Vec<QVec>,
}

impl AffineFrame {
    fn of(points: &[QVec]) -> Self {
        let o = points[0].clone();
        let n = o.len();
        let diffs: Vec<QVec> = points.iter().map(|p| sub_q(p, &o)).collect();
        let (dirs, _) = rational_echelon(&diffs, n);
        AffineFrame { origin: o, dirs }
    }

    fn coords(&self, p: &[Rat]) -> QVec {
        solve_in_span(&self.dirs, &sub_q(p, &self.origin)).expect("point in affine hull")
    }

    /// Ambient normal `w` in the direction space with `⟨x − o, w⟩ = ⟨y, c⟩`.
    fn lift_functional(&self, c: &[Rat]) -> QVec {
        let k = self.dirs.len();
        let n = self.origin.len();
        let gram: Vec<QVec> = (0..k)
            .map(|i| (0..k).map(|j| dot_q(&self.dirs[i], &self.dirs[j])).collect())
            .collect();
        let gi = crate::arith::rational_inverse(&gram).expect("independent directions");
        let coef: QVec = (0..k).map(|i| dot_q(&gi[i], c)).collect();
        (0..n)
            .map(|col| (0..k).fold(Rat::zero(), |acc, i| acc + &coef[i] * &self.dirs[i][col]))
            .collect()
    }
}

fn dedup_sorted(mut pts: Vec<QVec>) -> Vec<QVec> {
    pts.sort_by(|a, b| lex_cmp_q(a, b));
    pts.dedup();
    pts
}

/// Facets of a full-dimensional point configuration in ℝᵏ, as `(c, b)` with
/// `⟨c, y⟩ ≥ b`, `c` integral.
fn full_dim_facets(coords: &[QVec], k: usize) -> Vec<(IVec, Rat)> {
    // Cone of (c, β) with ⟨c, y⟩ + β ≥ 0 for every point.
    let cons: Vec<IVec> = coords
        .iter()
        .map(|y| {
            let mut row = y.clone();
            row.push(Rat::one());
            scale_to_integers(&row)
        })
        .collect();
    extreme_rays(&cons, k + 1)
        .into_iter()
        .filter(|r| r[..k].iter().any(|x| !x.is_zero()))
        .map(|r| (r[..k].to_vec(), -rat_int(&r[k])))
        .collect()
}

pub fn convex_hull(points: &[QVec]) -> Result<RationalPolytope, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::Empty);
    }
    let pts = dedup_sorted(points.to_vec());
    let n = pts[0].len();
    let frame = AffineFrame::of(&pts);
    let k = frame.dirs.len();
    let eqs: Vec<(IVec, Rat)> = rational_nullspace(&frame.dirs, n)
        .into_iter()
        .map(|e| {
            let e = primitive_direction(&e);
            let c = dot_qi(&frame.origin, &e);
            (e, c)
        })
        .collect();
    if k == 0 {
        return Ok(RationalPolytope { ambient_dim: n, vertices: pts, facets: vec![], equations: eqs, dim: 0 });
    }
    let coords: Vec<QVec> = pts.iter().map(|p| frame.coords(p)).collect();
    let raw = full_dim_facets(&coords, k);
    let mut facets = Vec::new();
    let mut tight: Vec<Vec<usize>> = vec![Vec::new(); pts.len()];
    for (fi, (c, b)) in raw.iter().enumerate() {
        let cq = to_q(c);
        for (pi, y) in coords.iter().enumerate() {
            if dot_q(&cq, y) == *b {
                tight[pi].push(fi);
            }
        }
        let w = frame.lift_functional(&cq);
        let wi = primitive_direction(&w);
        // Scale b by the same factor that turned w into wi.
        let idx = wi.iter().position(|x| !x.is_zero()).unwrap();
        let factor = rat_int(&wi[idx]) / &w[idx];
        let offset = dot_qi(&frame.origin, &wi) + b * &factor;
        facets.push(Facet { normal: wi, offset });
    }
    let vertices: Vec<QVec> = pts
        .iter()
        .enumerate()
        .filter(|(pi, _)| {
            let rows: Vec<QVec> = tight[*pi].iter().map(|&f| to_q(&raw[f].0)).collect();
            rational_echelon(&rows, k).1.len() == k
        })
        .map(|(_, p)| p.clone())
        .collect();
    facets.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.offset.cmp(&b.offset)));
    facets.dedup();
    Ok(RationalPolytope { ambient_dim: n, vertices, facets, equations: eqs, dim: k })
}

/// Vertices of `{x : ⟨x, a_j⟩ ≥ b_j, ⟨x, e⟩ = c}`; `None` if empty.
pub fn from_inequalities(
    ambient_dim: usize,
    ineqs: &[(QVec, Rat)],
    eqs: &[(QVec, Rat)],
) -> Option<RationalPolytope> {
    let n = ambient_dim;
    // Homogenize: (x, s) with ⟨a, x⟩ − b s ≥ 0, s ≥ 0; equations as two inequalities.
    let mut cons: Vec<IVec> = Vec::new();
    for (a, b) in ineqs {
        let mut row = a.clone();
        row.push(-b.clone());
        cons.push(scale_to_integers(&row));
    }
    for (e, c) in eqs {
        let mut row = e.clone();
        row.push(-c.clone());
        let r = scale_to_integers(&row);
        cons.push(crate::arith::neg_i(&r));
        cons.push(r);
    }
    let mut s = vec![Int::zero(); n + 1];
    s[n] = Int::one();
    cons.push(s);
    let rank = rational_echelon(&cons.iter().map(|r| to_q(r)).collect::<Vec<_>>(), n + 1).1.len();
    if rank < n + 1 {
        panic!("unbounded inequality system");
    }
    let rays = extreme_rays(&cons, n + 1);
    let pts: Vec<QVec> = rays
        .into_iter()
        .filter(|r| r[n].is_positive())
        .map(|r| {
            let s = rat_int(&r[n]);
            r[..n].iter().map(|x| rat_int(x) / &s).collect()
        })
        .collect();
    if pts.is_empty() {
        return None;
    }
    Some(convex_hull(&pts).expect("nonempty"))
}

impl RationalPolytope {
    pub fn from_int_points(points: &[IVec]) -> Result<Self, GeometryError> {
        let q: Vec<QVec> = points.iter().map(|p| to_q(p)).collect();
        convex_hull(&q)
    }

    pub fn point(p: QVec) -> Self {
        convex_hull(&[p]).expect("single point")
    }

    /// Closed membership.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|(e, c)| dot_qi(x, e) == *c)
            && self.facets.iter().all(|f| dot_qi(x, &f.normal) >= f.offset)
    }

    /// Membership in the relative interior.
    pub fn contains_strictly(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|(e, c)| dot_qi(x, e) == *c)
            && self.facets.iter().all(|f| dot_qi(x, &f.normal) > f.offset)
    }

    pub fn contains_int(&self, x: &[Int]) -> bool {
        self.contains(&to_q(x))
    }

    /// Minimum of `⟨·, v⟩` over the polytope.
    pub fn support_min(&self, v: &[Int]) -> Rat {
        self.vertices.iter().map(|p| dot_qi(p, v)).min().expect("nonempty")
    }

    pub fn support_max(&self, v: &[Int]) -> Rat {
        self.vertices.iter().map(|p| dot_qi(p, v)).max().expect("nonempty")
    }

    pub fn translate(&self, t: &[Rat]) -> Self {
        let pts: Vec<QVec> = self.vertices.iter().map(|p| add_q(p, t)).collect();
        convex_hull(&pts).expect("nonempty")
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let pts: Vec<QVec> = self.vertices.iter().map(|p| scale_q(p, s)).collect();
        convex_hull(&pts).expect("nonempty")
    }

    /// The closed inequality description, for slicing.
    pub fn h_description(&self) -> (Vec<(QVec, Rat)>, Vec<(QVec, Rat)>) {
        let ineqs = self.facets.iter().map(|f| (to_q(&f.normal), f.offset.clone())).collect();
        let eqs = self.equations.iter().map(|(e, c)| (to_q(e), c.clone())).collect();
        (ineqs, eqs)
    }
}

/// The face minimizing `⟨·, v⟩`.
pub fn face(q: &RationalPolytope, v: &[Int]) -> RationalPolytope {
    let m = q.support_min(v);
    let pts: Vec<QVec> = q.vertices.iter().filter(|p| dot_qi(p, v) == m).cloned().collect();
    convex_hull(&pts).expect("nonempty face")
}

pub fn minkowski_sum(polys: &[&RationalPolytope]) -> RationalPolytope {
    let mut acc: Vec<QVec> = polys[0].vertices.clone();
    for p in &polys[1..] {
        let mut next = Vec::with_capacity(acc.len() * p.vertices.len());
        for a in &acc {
            for b in &p.vertices {
                next.push(add_q(a, b));
            }
        }
        acc = convex_hull(&next).expect("nonempty").vertices;
    }
    convex_hull(&acc).expect("nonempty")
}

/// Lattice points of `q` lying in `lat`, sorted lexicographically.
pub fn lattice_points(q: &RationalPolytope, lat: &AffineLattice) -> Result<Vec<IVec>, GeometryError> {
    let f = to_full_rank_coordinates(lat);
    let r = f.rank();
    let cverts: Vec<QVec> = q
        .vertices
        .iter()
        .map(|v| f.forward_rational(v).ok_or(GeometryError::OutsideLattice))
        .collect::<Result<_, _>>()?;
    let cq = convex_hull(&cverts)?;
    let lo: Vec<Int> = (0..r)
        .map(|i| cverts.iter().map(|v| v[i].ceil().to_integer()).min().unwrap())
        .collect();
    let hi: Vec<Int> = (0..r)
        .map(|i| cverts.iter().map(|v| v[i].floor().to_integer()).max().unwrap())
        .collect();
    let mut out = Vec::new();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Ok(out);
    }
    let mut cur = lo.clone();
    loop {
        if cq.contains_int(&cur) {
            out.push(f.inverse(&cur));
        }
        let mut k = r;
        loop {
            if k == 0 {
                out.sort();
                return Ok(out);
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] <= hi[k] {
                break;
            }
            cur[k] = lo[k].clone();
        }
    }
}

/// Lattice points of `q` in ℤⁿ.
pub fn integer_points(q: &RationalPolytope) -> Vec<IVec> {
    lattice_points(q, &AffineLattice::standard(q.ambient_dim)).expect("standard lattice")
}

fn simplex_det(pts: &[QVec]) -> Rat {
    let k = pts.len() - 1;
    let mut rows: Vec<QVec> = pts[1..].iter().map(|p| sub_q(p, &pts[0])).collect();
    let mut det = Rat::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&i| !rows[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            rows.swap(p, c);
            det = -det;
        }
        det *= rows[c][c].clone();
        for i in c + 1..k {
            let f = &rows[i][c] / &rows[c][c];
            let rc = rows[c].clone();
            for (x, y) in rows[i].iter_mut().zip(&rc) {
                *x -= &f * y;
            }
        }
    }
    det.abs()
}

/// Σ |det| over a pulling triangulation of a full-dimensional polytope in ℝᵏ.
fn triangulated_det_sum(coords: &[QVec], k: usize) -> Rat {
    if k == 0 {
        return Rat::one();
    }
    let poly = convex_hull(coords).expect("nonempty");
    if poly.dim < k {
        return Rat::zero();
    }
    let apex = poly.vertices[0].clone();
    let mut total = Rat::zero();
    for f in &poly.facets {
        if dot_qi(&apex, &f.normal) == f.offset {
            continue;
        }
        let fverts: Vec<QVec> =
            poly.vertices.iter().filter(|v| dot_qi(v, &f.normal) == f.offset).cloned().collect();
        for simplex in pulling_simplices(&fverts) {
            let mut s = vec![apex.clone()];
            s.extend(simplex);
            total += simplex_det(&s);
        }
    }
    total
}

/// Simplices of a pulling triangulation of the hull of `pts`, each given by
/// `dim + 1` vertices.
fn pulling_simplices(pts: &[QVec]) -> Vec<Vec<QVec>> {
    let poly = convex_hull(pts).expect("nonempty");
    if poly.dim == 0 {
        return vec![vec![poly.vertices[0].clone()]];
    }
    let apex = poly.vertices[0].clone();
    let mut out = Vec::new();
    for f in &poly.facets {
        if dot_qi(&apex, &f.normal) == f.offset {
            continue;
        }
        let fverts: Vec<QVec> =
            poly.vertices.iter().filter(|v| dot_qi(v, &f.normal) == f.offset).cloned().collect();
        for mut s in pulling_simplices(&fverts) {
            s.insert(0, apex.clone());
            out.push(s);
        }
    }
    out
}

/// Volume normalized so a fundamental cell of `lat` has volume 1. Zero when
/// `q` is lower dimensional than `lat`.
pub fn normalized_volume(q: &RationalPolytope, lat: &AffineLattice) -> Result<Rat, GeometryError> {
    let f = to_full_rank_coordinates(lat);
    let r = f.rank();
    let base = q.vertices[0].clone();
    let coords: Vec<QVec> = q
        .vertices
        .iter()
        .map(|v| f.forward_vector_rational(&sub_q(v, &base)).ok_or(GeometryError::OutsideLattice))
        .collect::<Result<_, _>>()?;
    if r == 0 {
        return Ok(Rat::one());
    }
    let sum = triangulated_det_sum(&coords, r);
    Ok(sum / rat_int(&factorial(r)))
}

/// Mixed volume by inclusion–exclusion over nonempty subsets, normalized so
/// `MV(Q, …, Q) = r! vol(Q)`.
pub fn mixed_volume(polys: &[&RationalPolytope], lat: &AffineLattice) -> Result<Int, GeometryError> {
    let r = polys.len();
    if r == 0 {
        return Ok(Int::one());
    }
    let mut total = Rat::zero();
    for mask in 1u32..(1 << r) {
        let members: Vec<&RationalPolytope> =
            (0..r).filter(|i| mask & (1 << i) != 0).map(|i| polys[i]).collect();
        let sum = minkowski_sum(&members);
        let v = normalized_volume(&sum, lat)?;
        let sign = if (r - members.len()).is_multiple_of(2) { Rat::one() } else { -Rat::one() };
        total += sign * v;
    }
    assert!(total.is_integer(), "mixed volume must be an integer");
    Ok(total.to_integer())
}

/// Mixed volume of lattice polytopes given by their points, in the lattice
/// generated by all of their differences (full-rank coordinates).
pub fn mixed_volume_of_supports(supports: &[&[IVec]]) -> Int {
    let lat = crate::lattice::AffineLattice::of_sum(supports).linear();
    let polys: Vec<RationalPolytope> =
        supports.iter().map(|s| RationalPolytope::from_int_points(s).expect("nonempty")).collect();
    let refs: Vec<&RationalPolytope> = polys.iter().collect();
    // The differences span the lattice; translate polytopes into it.
    let shifted: Vec<RationalPolytope> = refs
        .iter()
        .zip(supports)
        .map(|(p, s)| p.translate(&to_q(&crate::arith::neg_i(&s[0]))))
        .collect();
    let srefs: Vec<&RationalPolytope> = shifted.iter().collect();
    mixed_volume(&srefs, &lat).expect("supports lie in their own lattice")
}

/// `a_F(v) + a_F(−v)`: the lattice width of `F` in direction `v`.
pub fn support_width(f: &RationalPolytope, v: &[Int]) -> Rat {
    f.support_max(v) - f.support_min(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ivec, qvec, rat};
    use proptest::prelude::*;

    fn poly(pts: &[&[i64]]) -> RationalPolytope {
        convex_hull(&pts.iter().map(|p| qvec(p)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn square_hull() {
        let q = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[0, 0]]);
        assert_eq!(q.vertices.len(), 4);
        assert_eq!(q.facets.len(), 4);
        assert_eq!(q.dim, 2);
        let q2 = poly(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1]]);
        assert_eq!(q2.vertices.len(), 4);
        assert!(q2.contains_strictly(&qvec(&[1, 1])));
        assert!(!q2.contains_strictly(&qvec(&[1, 0])));
    }

    #[test]
    fn lower_dimensional_hull() {
        let seg = poly(&[&[0, 0, 0], &[1, 1, 0], &[2, 2, 0]]);
        assert_eq!(seg.dim, 1);
        assert_eq!(seg.vertices, vec![qvec(&[0, 0, 0]), qvec(&[2, 2, 0])]);
        assert_eq!(seg.equations.len(), 2);
        assert!(seg.contains_strictly(&qvec(&[1, 1, 0])));
        assert!(!seg.contains(&qvec(&[1, 0, 0])));
    }

    #[test]
    fn volumes() {
        let std = AffineLattice::standard(2);
        let tri = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(normalized_volume(&tri, &std).unwrap(), rat(1, 2));
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(mixed_volume(&[&sq, &sq], &std).unwrap(), Int::from(2));
        let seg = poly(&[&[0, 0], &[1, 0]]);
        assert_eq!(normalized_volume(&seg, &std).unwrap(), rat(0, 1));
        let cube = poly(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[2, 2, 0], &[2, 0, 2], &[0, 2, 2], &[2, 2, 2]]);
        assert_eq!(normalized_volume(&cube, &AffineLattice::standard(3)).unwrap(), rat(8, 1));
    }

    #[test]
    fn points_and_faces() {
        let tri = poly(&[&[0, 0], &[3, 0], &[0, 3]]);
        assert_eq!(integer_points(&tri).len(), 10);
        let f = face(&tri, &ivec(&[0, 1]));
        assert_eq!(f.vertices, vec![qvec(&[0, 0]), qvec(&[3, 0])]);
        let sparse = AffineLattice::new(ivec(&[0, 0]), &[ivec(&[1, 1]), ivec(&[0, 2])]);
        assert_eq!(lattice_points(&tri, &sparse).unwrap().len(), 4);
    }

    #[test]
    fn inequalities_to_vertices() {
        let ineqs = vec![
            (qvec(&[1, 0]), rat(0, 1)),
            (qvec(&[0, 1]), rat(0, 1)),
            (qvec(&[-1, -1]), rat(-2, 1)),
        ];
        let p = from_inequalities(2, &ineqs, &[]).unwrap();
        assert_eq!(p.vertices, vec![qvec(&[0, 0]), qvec(&[0, 2]), qvec(&[2, 0])]);
        let line = from_inequalities(2, &ineqs, &[(qvec(&[1, -1]), rat(0, 1))]).unwrap();
        assert_eq!(line.vertices, vec![qvec(&[0, 0]), qvec(&[1, 1])]);
        let empty = from_inequalities(2, &ineqs, &[(qvec(&[1, 1]), rat(3, 1))]);
        assert!(empty.is_none());
    }

    fn pts_strategy(n: usize) -> impl Strategy<Value = Vec<QVec>> {
        prop::collection::vec(prop::collection::vec(-4i64..5, n), 1..8)
            .prop_map(|vs| vs.into_iter().map(|v| qvec(&v)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn hull_contains_inputs(pts in pts_strategy(3)) {
            let q = convex_hull(&pts).unwrap();
            for p in &pts {
                prop_assert!(q.contains(p));
            }
            for v in &q.vertices {
                prop_assert!(pts.contains(v));
            }
        }

        #[test]
        fn mixed_volume_is_symmetric_and_multilinear(a in pts_strategy(2), b in pts_strategy(2)) {
            let std = AffineLattice::standard(2);
            let pa = convex_hull(&a).unwrap();
            let pb = convex_hull(&b).unwrap();
            let ab = mixed_volume(&[&pa, &pb], &std).unwrap();
            let ba = mixed_volume(&[&pb, &pa], &std).unwrap();
            prop_assert_eq!(&ab, &ba);
            let pa2 = pa.scale(&rat(2, 1));
            prop_assert_eq!(mixed_volume(&[&pa2, &pb], &std).unwrap(), ab * Int::from(2));
            prop_assert!(mixed_volume(&[&pa, &pa], &std).unwrap() >= Int::zero());
        }
    }
}
