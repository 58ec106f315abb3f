//! Sparse integer polynomials in the coefficient symbols, and exact
//! determinants of matrices whose entries are single symbols or zero.

use crate::arith::Int;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

/// Exponent vector ordered by total degree, then lexicographically with the
/// first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    pub nvars: usize,
    pub terms: BTreeMap<Mono, Int>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SymbolicError {
    #[error("matrix of size {size} exceeds the symbolic size cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("exact division failed")]
    NotDivisible,
    #[error("division by zero polynomial")]
    DivisionByZero,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Int) -> Self {
        let mut p = SparsePoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono(vec![0; nvars]), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        SparsePoly::constant(nvars, Int::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = SparsePoly::zero(nvars);
        p.terms.insert(Mono(e), Int::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Mono, c: Int) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &SparsePoly, s: &Int) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut r = self.clone();
        r.add_assign_scaled(other, &Int::one());
        r
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        let mut r = self.clone();
        r.add_assign_scaled(other, &-Int::one());
        r
    }

    pub fn neg(&self) -> SparsePoly {
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut r = SparsePoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                r.add_term(Mono(e), ca * cb);
            }
        }
        r
    }

    /// Multiplication by a single variable.
    pub fn mul_var(&self, i: usize) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[i] += 1;
                    (Mono(e), c.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> SparsePoly {
        (0..k).fold(SparsePoly::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn leading(&self) -> Option<(&Mono, &Int)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d`; fails unless `d` divides `self`.
    pub fn exact_div(&self, d: &SparsePoly) -> Result<SparsePoly, SymbolicError> {
        let (lm, lc) = d.leading().ok_or(SymbolicError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut q = SparsePoly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading() {
            if rm.0.iter().zip(&lm.0).any(|(a, b)| a < b) {
                return Err(SymbolicError::NotDivisible);
            }
            let (qc, r) = rc.div_rem(lc);
            if !r.is_zero() {
                return Err(SymbolicError::NotDivisible);
            }
            let qm = Mono(rm.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect());
            let mut t = SparsePoly::zero(self.nvars);
            t.terms.insert(qm.clone(), qc.clone());
            rem = rem.sub(&t.mul(d));
            q.add_term(qm, qc);
        }
        Ok(q)
    }

    pub fn evaluate(&self, vals: &[Int]) -> Int {
        let mut total = Int::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, v) in m.0.iter().zip(vals) {
                if *e > 0 {
                    t *= num_traits::pow(v.clone(), *e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Degree in each group of variables when the polynomial is homogeneous
    /// in that group; `None` for a group in which it is not.
    pub fn group_degrees(&self, group_of: &[usize], ngroups: usize) -> Vec<Option<u32>> {
        let mut out: Vec<Option<Option<u32>>> = vec![None; ngroups];
        for m in self.terms.keys() {
            let mut d = vec![0u32; ngroups];
            for (i, e) in m.0.iter().enumerate() {
                d[group_of[i]] += e;
            }
            for g in 0..ngroups {
                out[g] = match out[g] {
                    None => Some(Some(d[g])),
                    Some(Some(x)) if x == d[g] => Some(Some(x)),
                    _ => Some(None),
                };
            }
        }
        out.into_iter().map(|x| x.unwrap_or(Some(0))).collect()
    }

    /// Sign normalization: the leading term gets a positive coefficient.
    pub fn canonical_sign(&self) -> SparsePoly {
        match self.leading() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn equal_up_to_sign(&self, other: &SparsePoly) -> bool {
        self == other || *self == other.neg()
    }

    /// Terms of maximal weight `⟨e, weights⟩`.
    pub fn initial_form(&self, weights: &[i64]) -> SparsePoly {
        let w = |m: &Mono| m.0.iter().zip(weights).map(|(e, x)| *e as i64 * x).sum::<i64>();
        let Some(top) = self.terms.keys().map(w).max() else {
            return self.clone();
        };
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| w(m) == top).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    /// Terms listed from the leading one down.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for (i, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            if factors.is_empty() || !a.is_one() {
                let _ = write!(s, "{a}");
                if !factors.is_empty() {
                    s.push('*');
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

/// Sparse matrix whose nonzero entries are single symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolMatrix {
    pub dim: usize,
    pub nvars: usize,
    /// Per row: `(column, symbol)` pairs.
    pub rows: Vec<Vec<(usize, usize)>>,
}

impl SymbolMatrix {
    pub fn new(dim: usize, nvars: usize) -> Self {
        SymbolMatrix { dim, nvars, rows: vec![Vec::new(); dim] }
    }

    pub fn set(&mut self, r: usize, c: usize, sym: usize) {
        self.rows[r].retain(|(cc, _)| *cc != c);
        self.rows[r].push((c, sym));
        self.rows[r].sort();
    }

    pub fn get(&self, r: usize, c: usize) -> Option<usize> {
        self.rows[r].iter().find(|(cc, _)| *cc == c).map(|(_, s)| *s)
    }

    /// Principal-style submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SymbolMatrix {
        let pos: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut m = SymbolMatrix::new(rows.len(), self.nvars);
        for (ri, &r) in rows.iter().enumerate() {
            for &(c, s) in &self.rows[r] {
                if let Some(&cj) = pos.get(&c) {
                    m.rows[ri].push((cj, s));
                }
            }
            m.rows[ri].sort();
        }
        m
    }

    pub fn specialize(&self, vals: &[Int]) -> Vec<Vec<Int>> {
        let mut out = vec![vec![Int::zero(); self.dim]; self.dim];
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, s) in row {
                out[r][c] = vals[s].clone();
            }
        }
        out
    }
}

pub const DEFAULT_SIZE_CAP: usize = 20;

/// Expansion over column subsets (Gentleman–Johnson), memoized by bitmask.
pub fn symbolic_determinant(m: &SymbolMatrix, size_cap: usize) -> Result<SparsePoly, SymbolicError> {
    let n = m.dim;
    if n > size_cap || n > 64 {
        return Err(SymbolicError::SizeCapExceeded { size: n, cap: size_cap.min(64) });
    }
    if n == 0 {
        return Ok(SparsePoly::one(m.nvars));
    }
    // Order rows so that columns are retired early.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&r| {
        let cols: Vec<usize> = m.rows[r].iter().map(|(c, _)| *c).collect();
        (cols.iter().max().copied().unwrap_or(0), cols.iter().min().copied().unwrap_or(0), r)
    });
    let parity = permutation_parity(&order);
    let mut states: HashMap<u64, SparsePoly> = HashMap::new();
    states.insert(0, SparsePoly::one(m.nvars));
    for &r in &order {
        let mut next: HashMap<u64, SparsePoly> = HashMap::with_capacity(states.len() * 2);
        for (mask, poly) in &states {
            for &(c, sym) in &m.rows[r] {
                let bit = 1u64 << c;
                if mask & bit != 0 {
                    continue;
                }
                let above = (mask >> c >> 1).count_ones();
                let term = poly.mul_var(sym);
                let entry = next.entry(mask | bit).or_insert_with(|| SparsePoly::zero(m.nvars));
                let s = if above % 2 == 0 { Int::one() } else { -Int::one() };
                entry.add_assign_scaled(&term, &s);
            }
        }
        next.retain(|_, p| !p.is_zero());
        states = next;
        if states.is_empty() {
            return Ok(SparsePoly::zero(m.nvars));
        }
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let det = states.remove(&full).unwrap_or_else(|| SparsePoly::zero(m.nvars));
    Ok(if parity { det.neg() } else { det })
}

/// True when the permutation is odd.
fn permutation_parity(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut odd = false;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

/// Fraction-free Gaussian elimination (Bareiss).
pub fn integer_determinant(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_by_two() {
        let mut m = SymbolMatrix::new(2, 4);
        m.set(0, 0, 0);
        m.set(0, 1, 1);
        m.set(1, 0, 2);
        m.set(1, 1, 3);
        let d = symbolic_determinant(&m, DEFAULT_SIZE_CAP).unwrap();
        let expect = SparsePoly::var(4, 0).mul(&SparsePoly::var(4, 3)).sub(&SparsePoly::var(4, 1).mul(&SparsePoly::var(4, 2)));
        assert_eq!(d, expect);
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        assert_eq!(d.render(&names), "a*d - b*c");
    }

    #[test]
    fn exact_division() {
        let x = SparsePoly::var(2, 0);
        let y = SparsePoly::var(2, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        assert_eq!(p.exact_div(&x.add(&y)).unwrap(), x.sub(&y));
        assert_eq!(p.exact_div(&x.mul(&x).add(&y)), Err(SymbolicError::NotDivisible));
    }

    #[test]
    fn cap_is_enforced() {
        let m = SymbolMatrix::new(25, 1);
        assert!(matches!(symbolic_determinant(&m, 20), Err(SymbolicError::SizeCapExceeded { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn symbolic_matches_bareiss(
            n in 1usize..6,
            mask in prop::collection::vec(any::<bool>(), 36),
            vals in prop::collection::vec(-5i64..6, 36),
        ) {
            let mut m = SymbolMatrix::new(n, n * n);
            for r in 0..n {
                for c in 0..n {
                    if mask[r * 6 + c] {
                        m.set(r, c, r * n + c);
                    }
                }
            }
            let v: Vec<Int> = (0..n * n).map(|i| Int::from(vals[i])).collect();
            let d = symbolic_determinant(&m, DEFAULT_SIZE_CAP).unwrap();
            prop_assert_eq!(d.evaluate(&v), integer_determinant(&m.specialize(&v)));
        }
    }
}
