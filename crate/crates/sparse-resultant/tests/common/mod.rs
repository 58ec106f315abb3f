#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sparse_resultant::arith::{int, rat, sub_i, to_q, IVec, Int, QVec};
use sparse_resultant::cli::{self, monomial, Extra, Problem};
use sparse_resultant::oracles::support_polytope;
use sparse_resultant::resultant::{analyze_essential, CellTag, ResultantMatrix, System};
use sparse_resultant::symbolic::SparsePoly;

pub const ONE_DIM: &str = include_str!("../../fixtures/one_dim.json");
pub const BILINEAR: &str = include_str!("../../fixtures/bilinear.json");
pub const DEGREE_123: &str = include_str!("../../fixtures/degree_123.json");
pub const SQUARE_AND_SEGMENTS: &str = include_str!("../../fixtures/square_and_segments.json");
pub const TRINOMIALS: &str = include_str!("../../fixtures/trinomials.json");

pub const ALL: [(&str, &str); 5] = [
    ("one_dim", ONE_DIM),
    ("bilinear", BILINEAR),
    ("degree_123", DEGREE_123),
    ("square_and_segments", SQUARE_AND_SEGMENTS),
    ("trinomials", TRINOMIALS),
];

pub fn fixture(text: &str) -> Problem {
    cli::parse_problem(text).expect("fixture parses")
}

pub fn var(system: &System, name: &str) -> SparsePoly {
    let k = system.symbol_names().iter().position(|s| s == name).unwrap_or_else(|| panic!("no symbol {name}"));
    SparsePoly::var(system.nvars(), k)
}

/// Product of powers written as `a1^2 c2`.
pub fn mono(system: &System, text: &str) -> SparsePoly {
    let mut p = SparsePoly::one(system.nvars());
    for tok in text.split_whitespace() {
        let (name, e) = match tok.split_once('^') {
            Some((n, e)) => (n, e.parse::<u32>().expect("exponent")),
            None => (tok, 1),
        };
        p = p.mul(&var(system, name).pow(e));
    }
    p
}

/// Integer combination of monomials.
pub fn poly(system: &System, terms: &[(i64, &str)]) -> SparsePoly {
    let mut p = SparsePoly::zero(system.nvars());
    for (c, m) in terms {
        p.add_assign_scaled(&mono(system, m), &int(*c));
    }
    p
}

/// The (row, coefficients of, cell, type) table of a build.
pub fn table(m: &ResultantMatrix) -> Vec<[String; 4]> {
    m.points
        .iter()
        .zip(&m.rows)
        .map(|(p, r)| {
            let shift = sub_i(p, &r.exponent);
            let coeff = format!("{} f{}", monomial(&shift), r.poly);
            let cell = match &r.cell {
                CellTag::Primary => "primary".to_string(),
                CellTag::Secondary(v) => {
                    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    format!("({}) secondary", parts.join(", "))
                }
            };
            let ty = if r.mixed { "mixed" } else { "non-mixed" };
            [monomial(p), coeff, cell, ty.to_string()]
        })
        .collect()
}

pub fn row(cols: [&str; 4]) -> [String; 4] {
    cols.map(String::from)
}

/// Indices in the sorted support `A_i` of the vertices of its hull.
pub fn vertex_indices(system: &System, i: usize) -> Vec<usize> {
    let hull = support_polytope(&system.supports[i]);
    (0..system.supports[i].len()).filter(|&j| hull.vertices.contains(&to_q(&system.supports[i][j]))).collect()
}

/// Variant `k` of a problem: a different vertex `b0`, perturbation and
/// lifting seed. Variant 0 is the problem itself.
pub fn variant(problem: &Problem, k: usize) -> Problem {
    if k == 0 {
        return problem.clone();
    }
    let mut p = problem.clone();
    let verts = vertex_indices(&p.system, 0);
    p.opts.b0 = Some(verts[k % verts.len()]);
    p.opts.liftings = None;
    p.opts.seed = 17 * k as u64 + 3;
    let n = p.system.n;
    p.extra = match &p.extra {
        Extra::Unmixed { lambda, .. } if k == 1 => Extra::Unmixed { lambda: lambda.clone(), delta: None },
        Extra::Unmixed { lambda, .. } => {
            let d: QVec = (0..n).map(|j| rat(1, 53 + 6 * j as i64)).collect();
            Extra::Unmixed { lambda: lambda.clone(), delta: Some(d) }
        }
        Extra::General { q } => {
            let t: QVec = (0..n).map(|j| rat(k as i64, 29 + 10 * j as i64)).collect();
            Extra::General { q: q.translate(&t) }
        }
    };
    p
}

pub fn random_values(n: usize, rng: &mut ChaCha8Rng) -> Vec<Int> {
    (0..n).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect()
}

/// Random family with two or three points per support, coordinates in a
/// small box, and the whole family as its unique essential subfamily.
pub fn random_essential_system(rng: &mut ChaCha8Rng, n: usize) -> System {
    let hi = if n == 1 { 4 } else { 2 };
    loop {
        let supports: Vec<Vec<IVec>> = (0..=n)
            .map(|_| {
                let k = rng.gen_range(2..=3);
                let mut pts: Vec<IVec> = Vec::new();
                while pts.len() < k {
                    let p: IVec = (0..n).map(|_| int(rng.gen_range(0..=hi))).collect();
                    if !pts.contains(&p) {
                        pts.push(p);
                    }
                }
                pts
            })
            .collect();
        let Ok(sys) = System::new(supports) else { continue };
        let ea = analyze_essential(&sys);
        if ea.codim == 1 && ea.essential == vec![(0..=n).collect::<Vec<_>>()] {
            return sys;
        }
    }
}
