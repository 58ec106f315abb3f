//! Exact scalar helpers shared by every module: integer and rational vectors,
//! parsing of `"p/q"` strings, and small linear-algebra routines over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IVec = Vec<BigInt>;
pub type QVec = Vec<BigRational>;

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(v: &Int) -> Rat {
    BigRational::from_integer(v.clone())
}

pub fn ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn qvec(v: &[i64]) -> QVec {
    v.iter().map(|&x| rat(x, 1)).collect()
}

pub fn to_q(v: &[Int]) -> QVec {
    v.iter().map(rat_int).collect()
}

/// Returns the integer vector if every entry of `v` is integral.
pub fn to_int(v: &[Rat]) -> Option<IVec> {
    v.iter()
        .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
        .collect()
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. Decimal points and exponents are rejected.
pub fn parse_rational(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational".into());
    }
    if t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(format!("`{t}` is not an exact rational (floats are rejected)"));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| format!("bad numerator in `{t}`"))?;
    let d: BigInt = den.parse().map_err(|_| format!("bad denominator in `{t}`"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in `{t}`"));
    }
    Ok(BigRational::new(n, d))
}

pub fn fmt_rational(q: &Rat) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn dot_q(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_i(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_qi(a: &[Rat], b: &[Int]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * rat_int(y))
}

pub fn add_q(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_q(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_q(a: &[Rat], s: &Rat) -> QVec {
    a.iter().map(|x| x * s).collect()
}

pub fn add_i(a: &[Int], b: &[Int]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_i(a: &[Int], b: &[Int]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg_i(a: &[Int]) -> IVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_i(a: &[Int]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Multiplies a rational vector by the lcm of its denominators and divides by
/// the gcd of the result, giving the primitive integer vector on the same ray.
pub fn primitive_direction(v: &[Rat]) -> IVec {
    let l = v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let iv: IVec = v.iter().map(|x| (x * rat_int(&l)).to_integer()).collect();
    primitive_int(&iv)
}

pub fn primitive_int(v: &[Int]) -> IVec {
    let g = v.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Lexicographic comparison of rational vectors.
pub fn lex_cmp_q(a: &[Rat], b: &[Rat]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Colexicographic comparison: the last coordinate is most significant.
pub fn colex_cmp_i(a: &[Int], b: &[Int]) -> Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Row echelon form over ℚ; returns the nonzero rows and their pivot columns.
pub fn rational_echelon(rows: &[QVec], ncols: usize) -> (Vec<QVec>, Vec<usize>) {
    let mut m: Vec<QVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        m[r] = scale_q(&m[r], &inv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rational_rank(rows: &[QVec], ncols: usize) -> usize {
    rational_echelon(rows, ncols).1.len()
}

/// Basis of the right nullspace {x : rows · x = 0} over ℚ.
pub fn rational_nullspace(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    let (rref, pivots) = rational_echelon(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); ncols];
            x[f] = Rat::one();
            for (row, &pc) in rref.iter().zip(&pivots) {
                x[pc] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Solves `y · basis = target` for `y` when `basis` rows are independent.
/// Returns `None` when the target is outside the row span.
pub fn solve_in_span(basis: &[QVec], target: &[Rat]) -> Option<QVec> {
    let k = basis.len();
    let n = target.len();
    // Columns of the augmented system: unknown y (k entries); equations: n.
    let mut rows: Vec<QVec> = (0..n)
        .map(|c| {
            let mut r: QVec = basis.iter().map(|b| b[c].clone()).collect();
            r.push(target[c].clone());
            r
        })
        .collect();
    let (rref, pivots) = rational_echelon(&rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    rows.clear();
    let mut y = vec![Rat::zero(); k];
    for (row, &pc) in rref.iter().zip(&pivots) {
        y[pc] = row[k].clone();
    }
    Some(y)
}

/// Inverse of a square rational matrix, or `None` when singular.
pub fn rational_inverse(m: &[QVec]) -> Option<Vec<QVec>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let aug: Vec<QVec> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let (rref, pivots) = rational_echelon(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(rref.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn abs_int(x: &Int) -> Int {
    x.abs()
}

pub fn factorial(k: usize) -> Int {
    (1..=k).fold(Int::one(), |acc, i| acc * Int::from(i))
}
