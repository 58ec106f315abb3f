//! Ground-truth computations that share no code path with the recursive
//! construction: classical Sylvester and Dixon determinants, Macaulay's
//! homogeneous matrix, planted common roots and mixed volumes read off
//! mixed cells.

use crate::arith::{int, rat, rat_int, to_q, Int, IVec, QVec, Rat};
use crate::geometry::{normalized_volume, RationalPolytope};
use crate::lattice::AffineLattice;
use crate::resultant::System;
use crate::subdivision::{generic_tight_lifting, SubdivisionError};
use crate::symbolic::{symbolic_determinant, SparsePoly, SymbolMatrix, SymbolicError};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("t = {t} must exceed sum(m_i - 1) = {bound}")]
    DegreeTooLow { t: u32, bound: u32 },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
}

/// One term of a univariate sparse polynomial: exponent and coefficient symbol.
pub type Term = (Int, usize);

/// Resultant of two univariate sparse polynomials via the classical Sylvester
/// matrix, written in the coordinates of the lattice spanned by the
/// differences of both supports.
///
/// A single-term polynomial is a monomial with no roots in the torus; its
/// resultant with anything nonconstant is its own coefficient.
pub fn sylvester_resultant(f: &[Term], g: &[Term], nvars: usize) -> Result<SparsePoly, OracleError> {
    if f.is_empty() || g.is_empty() {
        return Err(OracleError::InvalidInput("empty support".into()));
    }
    let fmin = f.iter().map(|t| &t.0).min().unwrap().clone();
    let gmin = g.iter().map(|t| &t.0).min().unwrap().clone();
    let step = f
        .iter()
        .map(|t| &t.0 - &fmin)
        .chain(g.iter().map(|t| &t.0 - &gmin))
        .fold(Int::zero(), |acc, d| acc.gcd(&d));
    match (f.len(), g.len()) {
        (1, 1) => return Err(OracleError::InvalidInput("both supports are single points".into())),
        (1, _) => return Ok(SparsePoly::var(nvars, f[0].1)),
        (_, 1) => return Ok(SparsePoly::var(nvars, g[0].1)),
        _ => {}
    }
    let coords = |t: &[Term], m: &Int| -> Vec<(usize, usize)> {
        t.iter().map(|(e, s)| (((e - m) / &step).to_usize().expect("small degree"), *s)).collect()
    };
    let fc = coords(f, &fmin);
    let gc = coords(g, &gmin);
    let df = fc.iter().map(|t| t.0).max().unwrap();
    let dg = gc.iter().map(|t| t.0).max().unwrap();
    let n = df + dg;
    let mut m = SymbolMatrix::new(n, nvars);
    for r in 0..dg {
        for &(k, s) in &fc {
            m.set(r, r + k, s);
        }
    }
    for r in 0..df {
        for &(k, s) in &gc {
            m.set(dg + r, r + k, s);
        }
    }
    Ok(symbolic_determinant(&m, n.max(1))?)
}

/// Dixon's 6×6 matrix for three bilinear polynomials. `coeffs[i]` holds the
/// symbols of `c_{i,(0,0)}, c_{i,(1,0)}, c_{i,(0,1)}, c_{i,(1,1)}`.
pub fn dixon_matrix(coeffs: &[[usize; 4]; 3], nvars: usize) -> SymbolMatrix {
    let mut m = SymbolMatrix::new(6, nvars);
    for (i, c) in coeffs.iter().enumerate() {
        for (col, &s) in c.iter().enumerate() {
            m.set(i, col, s);
        }
        m.set(3 + i, 1, c[0]);
        m.set(3 + i, 3, c[2]);
        m.set(3 + i, 4, c[1]);
        m.set(3 + i, 5, c[3]);
    }
    m
}

pub fn dixon_bilinear(coeffs: &[[usize; 4]; 3], nvars: usize) -> Result<SparsePoly, OracleError> {
    Ok(symbolic_determinant(&dixon_matrix(coeffs, nvars), 6)?)
}

/// Dixon symbols of a system whose three supports are the unit square.
pub fn dixon_symbols(system: &System) -> Result<[[usize; 4]; 3], OracleError> {
    let square: Vec<IVec> = vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(0), int(1)], vec![int(1), int(1)]];
    if system.n != 2 || system.supports.len() != 3 {
        return Err(OracleError::InvalidInput("Dixon needs three bivariate polynomials".into()));
    }
    let mut out = [[0usize; 4]; 3];
    for i in 0..3 {
        if system.supports[i].len() != 4 {
            return Err(OracleError::InvalidInput("Dixon needs unit-square supports".into()));
        }
        for (k, a) in square.iter().enumerate() {
            let j = system
                .point_index(i, a)
                .ok_or_else(|| OracleError::InvalidInput("Dixon needs unit-square supports".into()))?;
            out[i][k] = system.var_index(i, j);
        }
    }
    Ok(out)
}

/// Macaulay's matrix `D(n, t)` of `n` homogeneous forms in `n` variables and
/// the minor on the monomials that are not reduced.
#[derive(Clone, Debug)]
pub struct ClassicalMacaulay {
    /// Homogeneous exponents of degree `t`, graded lexicographic order.
    pub monomials: Vec<Vec<u32>>,
    /// For each monomial, the index of the form whose multiple fills its row.
    pub row_form: Vec<usize>,
    pub matrix: SymbolMatrix,
    /// Indices of monomials divisible by `x_i^{m_i}` for at least two `i`.
    pub nonreduced: Vec<usize>,
}

impl ClassicalMacaulay {
    pub fn minor(&self) -> SymbolMatrix {
        self.matrix.submatrix(&self.nonreduced, &self.nonreduced)
    }
}

fn homogeneous_monomials(n: usize, t: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, t: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n - 1 {
            prefix.push(t);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=t).rev() {
            prefix.push(e);
            rec(n, t - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, t, &mut Vec::new(), &mut out);
    out
}

/// Builds `D(n, t)` for forms of degrees `degrees[0..n]`. The form `i` is the
/// homogenization with respect to the last variable of an affine polynomial
/// whose coefficient of `x^α` (with `|α| ≤ m_i`) is the symbol `symbol(i, α)`.
/// Each row is `x^β / x_i^{m_i} · F_i` for the smallest `i` dividing.
pub fn classical_macaulay(
    degrees: &[u32],
    t: u32,
    nvars: usize,
    symbol: impl Fn(usize, &[u32]) -> usize,
) -> Result<ClassicalMacaulay, OracleError> {
    let n = degrees.len();
    if n == 0 || degrees.contains(&0) {
        return Err(OracleError::InvalidInput("degrees must be positive".into()));
    }
    let bound: u32 = degrees.iter().map(|m| m - 1).sum();
    if t <= bound {
        return Err(OracleError::DegreeTooLow { t, bound });
    }
    let monomials = homogeneous_monomials(n, t);
    let index: std::collections::HashMap<Vec<u32>, usize> =
        monomials.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
    let forms: Vec<Vec<Vec<u32>>> = degrees.iter().map(|&m| homogeneous_monomials(n, m)).collect();
    let mut matrix = SymbolMatrix::new(monomials.len(), nvars);
    let mut row_form = Vec::with_capacity(monomials.len());
    let mut nonreduced = Vec::new();
    for (r, beta) in monomials.iter().enumerate() {
        let dividing: Vec<usize> = (0..n).filter(|&i| beta[i] >= degrees[i]).collect();
        let i = dividing[0];
        if dividing.len() > 1 {
            nonreduced.push(r);
        }
        row_form.push(i);
        let mut shift = beta.clone();
        shift[i] -= degrees[i];
        for g in &forms[i] {
            let target: Vec<u32> = shift.iter().zip(g).map(|(a, b)| a + b).collect();
            matrix.set(r, index[&target], symbol(i, &g[..n - 1]));
        }
    }
    Ok(ClassicalMacaulay { monomials, row_form, matrix, nonreduced })
}

/// `D(n, t)` divided by its non-reduced minor.
pub fn classical_resultant(c: &ClassicalMacaulay, size_cap: usize) -> Result<SparsePoly, OracleError> {
    let d = symbolic_determinant(&c.matrix, size_cap)?;
    let e = symbolic_determinant(&c.minor(), size_cap)?;
    Ok(d.exact_div(&e)?)
}

/// A common root in the torus and the coefficients it forces.
#[derive(Clone, Debug)]
pub struct PlantedRoot {
    pub root: QVec,
    /// Integer value of every coefficient symbol, indexed like the system.
    pub values: Vec<Int>,
}

fn monomial_value(x: &[Rat], a: &[Int]) -> Rat {
    x.iter().zip(a).fold(Rat::one(), |acc, (xi, e)| {
        let k = e.to_i32().expect("small exponent");
        acc * num_traits::pow::Pow::pow(xi, k)
    })
}

/// Draws `x* ∈ (ℚ*)ⁿ` with small numerators and denominators, random integer
/// coefficients for all but one point per polynomial, solves for the last
/// coefficient so that every `f_i(x*) = 0`, and clears denominators per
/// polynomial.
pub fn planted_root_system(system: &System, seed: u64) -> Result<PlantedRoot, OracleError> {
    if system.supports.iter().any(|s| s.len() < 2) {
        return Err(OracleError::InvalidInput("every support needs at least two points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let root: QVec = (0..system.n)
            .map(|_| {
                let num = rng.gen_range(1..=3i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
                rat(num, rng.gen_range(1..=3i64))
            })
            .collect();
        let mut values = vec![Int::zero(); system.nvars()];
        let mut ok = true;
        for (i, sup) in system.supports.iter().enumerate() {
            let pivot = rng.gen_range(0..sup.len());
            let mut coeffs: Vec<Rat> = (0..sup.len()).map(|_| rat(rng.gen_range(-9..=9i64), 1)).collect();
            coeffs[pivot] = Rat::zero();
            let rest: Rat = sup.iter().zip(&coeffs).map(|(a, c)| c * monomial_value(&root, a)).sum();
            coeffs[pivot] = -rest / monomial_value(&root, &sup[pivot]);
            if coeffs.iter().all(Zero::is_zero) {
                ok = false;
                break;
            }
            let den = coeffs.iter().fold(Int::one(), |acc, c| acc.lcm(c.denom()));
            for (j, c) in coeffs.iter().enumerate() {
                values[system.var_index(i, j)] = (c * rat_int(&den)).to_integer();
            }
        }
        if ok {
            return Ok(PlantedRoot { root, values });
        }
    }
}

/// Mixed volume as the total normalized volume of the fully mixed cells of a
/// random tight coherent decomposition of `Q_1 + … + Q_n`.
pub fn mixed_volume_by_cells(polys: &[&RationalPolytope], lat: &AffineLattice, seed: u64) -> Result<Int, OracleError> {
    let n = polys.len();
    if lat.rank() != n {
        return Err(OracleError::InvalidInput("lattice rank must equal the number of polytopes".into()));
    }
    if n == 0 {
        return Ok(Int::one());
    }
    let pts: Vec<Vec<QVec>> = polys.iter().map(|p| p.vertices.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dec = generic_tight_lifting(&pts, None, &mut rng, 64)?;
    let linear = lat.linear();
    let mut total = Rat::zero();
    for &k in &dec.mixed_cells() {
        let cell = &dec.cells[k].polytope;
        let shifted = cell.translate(&cell.vertices[0].iter().map(|x| -x).collect::<Vec<_>>());
        total += normalized_volume(&shifted, &linear)
            .map_err(|e| OracleError::InvalidInput(format!("cell outside the lattice: {e}")))?;
    }
    if !total.is_integer() {
        return Err(OracleError::InvalidInput("mixed cells have fractional volume".into()));
    }
    Ok(total.to_integer())
}

/// Integer points of a support as rational vectors.
pub fn support_polytope(points: &[IVec]) -> RationalPolytope {
    crate::geometry::convex_hull(&points.iter().map(|p| to_q(p)).collect::<Vec<_>>()).expect("nonempty support")
}

/// `|Res|` divides the gcd of the rotated determinants at every integer
/// specialization; returns that gcd.
pub fn gcd_of(values: &[Int]) -> Int {
    values.iter().fold(Int::zero(), |acc, v| acc.gcd(v)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ivec, qvec};
    use crate::geometry::{convex_hull, mixed_volume};

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("s{i}")).collect()
    }

    #[test]
    fn sylvester_of_two_linear_forms() {
        let r = sylvester_resultant(&[(int(0), 0), (int(1), 1)], &[(int(0), 2), (int(1), 3)], 4).unwrap();
        assert_eq!(r.render(&names(4)), "s0*s3 - s1*s2");
    }

    #[test]
    fn sylvester_works_in_the_difference_lattice() {
        // a + b x^2 + c x^4 and d x^4 + e x^8 are handled on 2Z.
        let f = [(int(0), 0), (int(2), 1), (int(4), 2)];
        let g = [(int(4), 3), (int(8), 4)];
        let r = sylvester_resultant(&f, &g, 5).unwrap();
        assert_eq!(r.total_degree(), Some(4));
        assert_eq!(r.group_degrees(&[0, 0, 0, 1, 1], 2), vec![Some(2), Some(2)]);
    }

    #[test]
    fn sylvester_vanishes_on_shared_root() {
        // (x - 2)(x + 1) and (x - 2)(3x + 5): plug symbols then evaluate.
        let f = [(int(0), 0), (int(1), 1), (int(2), 2)];
        let g = [(int(0), 3), (int(1), 4), (int(2), 5)];
        let r = sylvester_resultant(&f, &g, 6).unwrap();
        let vals = [int(-2), int(-1), int(1), int(-10), int(-1), int(3)];
        assert!(r.evaluate(&vals).is_zero());
        let vals = [int(-2), int(-1), int(1), int(-10), int(0), int(3)];
        assert!(!r.evaluate(&vals).is_zero());
    }

    #[test]
    fn dixon_degree_and_repeated_polynomial() {
        let coeffs = [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11]];
        let d = dixon_bilinear(&coeffs, 12).unwrap();
        let groups: Vec<usize> = (0..12).map(|k| k / 4).collect();
        assert_eq!(d.group_degrees(&groups, 3), vec![Some(2), Some(2), Some(2)]);
        let same = [[0, 1, 2, 3], [0, 1, 2, 3], [8, 9, 10, 11]];
        assert!(dixon_bilinear(&same, 12).unwrap().is_zero());
    }

    #[test]
    fn macaulay_of_linear_forms_is_the_coefficient_determinant() {
        // Three linear forms in three variables; symbols 3i + k.
        let sym = |i: usize, a: &[u32]| {
            let k = if a[0] == 1 { 1 } else if a[1] == 1 { 2 } else { 0 };
            3 * i + k
        };
        let c = classical_macaulay(&[1, 1, 1], 1, 9, sym).unwrap();
        assert_eq!(c.monomials.len(), 3);
        assert!(c.nonreduced.is_empty());
        let r = classical_resultant(&c, 20).unwrap();
        let mut m = SymbolMatrix::new(3, 9);
        for i in 0..3 {
            for k in 0..3 {
                m.set(i, k, 3 * i + k);
            }
        }
        assert!(r.equal_up_to_sign(&symbolic_determinant(&m, 3).unwrap()));
    }

    #[test]
    fn macaulay_of_two_forms_matches_sylvester() {
        // Degrees (2, 3) in two variables: affine a0 + a1 x + a2 x^2 and
        // b0 + b1 x + b2 x^2 + b3 x^3.
        let sym = |i: usize, a: &[u32]| if i == 0 { a[0] as usize } else { 3 + a[0] as usize };
        let c = classical_macaulay(&[2, 3], 4, 7, sym).unwrap();
        let r = classical_resultant(&c, 20).unwrap();
        let f = [(int(0), 0), (int(1), 1), (int(2), 2)];
        let g = [(int(0), 3), (int(1), 4), (int(2), 5), (int(3), 6)];
        assert!(r.equal_up_to_sign(&sylvester_resultant(&f, &g, 7).unwrap()));
    }

    #[test]
    fn macaulay_rejects_low_degree() {
        assert!(matches!(
            classical_macaulay(&[2, 3], 3, 7, |_, _| 0),
            Err(OracleError::DegreeTooLow { .. })
        ));
    }

    #[test]
    fn planted_root_is_a_root() {
        let s = System::new(vec![
            vec![ivec(&[0, 0]), ivec(&[2, 2]), ivec(&[1, 3])],
            vec![ivec(&[0, 0]), ivec(&[2, 0]), ivec(&[1, 2])],
            vec![ivec(&[3, 0]), ivec(&[1, 1])],
        ])
        .unwrap();
        for seed in 0..10 {
            let p = planted_root_system(&s, seed).unwrap();
            for (i, sup) in s.supports.iter().enumerate() {
                let v: Rat = sup
                    .iter()
                    .enumerate()
                    .map(|(j, a)| rat_int(&p.values[s.var_index(i, j)]) * monomial_value(&p.root, a))
                    .sum();
                assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn mixed_cells_agree_with_inclusion_exclusion() {
        let std2 = AffineLattice::standard(2);
        let sq = convex_hull(&[qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[1, 1])]).unwrap();
        assert_eq!(mixed_volume_by_cells(&[&sq, &sq], &std2, 1).unwrap(), int(2));
        let a = convex_hull(&[qvec(&[0, 0]), qvec(&[1, 0])]).unwrap();
        let b = convex_hull(&[qvec(&[0, 0]), qvec(&[0, 1])]).unwrap();
        assert_eq!(mixed_volume_by_cells(&[&a, &b], &std2, 2).unwrap(), int(1));
        let tri = convex_hull(&[qvec(&[0, 0]), qvec(&[3, 0]), qvec(&[1, 2])]).unwrap();
        assert_eq!(
            mixed_volume_by_cells(&[&tri, &sq], &std2, 3).unwrap(),
            mixed_volume(&[&tri, &sq], &std2).unwrap()
        );
    }
}
