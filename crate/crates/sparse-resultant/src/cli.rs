//! Problem files, command implementations and report formatting for the
//! `resolve` binary.
//!
//! A problem file is UTF-8 JSON. Rationals are strings such as `"2/3"`;
//! JSON numbers are accepted only for integer exponents.

use crate::arith::{fmt_rational, int, parse_rational, sub_i, IVec, Int, QVec, Rat};
use crate::geometry::{convex_hull, RationalPolytope};
use crate::oracles::{classical_macaulay, classical_resultant, gcd_of, planted_root_system, OracleError};
use crate::resultant::{
    analyze_essential, build_general, build_unmixed, build_unmixed_random, detect_unmixed, extract_resultant,
    leading_blocks, resultant_degrees, rotate_distinguished, BuildOptions, CellReport, CellTag, ResultantError,
    ResultantMatrix, RowContent, System, UserLifting,
};
use crate::symbolic::{integer_determinant, symbolic_determinant, SymbolMatrix, SymbolicError};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("genericity retries exhausted: {0}")]
    Retry(String),
    #[error("verification failed")]
    Verification(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Retry(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl From<ResultantError> for CliError {
    fn from(e: ResultantError) -> Self {
        match e {
            ResultantError::BoundaryPoint(_) | ResultantError::NotTight => CliError::Retry(e.to_string()),
            ResultantError::InvalidInput(s) => CliError::Parse(s),
            ResultantError::Symbolic(SymbolicError::SizeCapExceeded { size, cap }) => CliError::Other(format!(
                "matrix of size {size} exceeds the symbolic cap {cap}; raise --cap or run `resolve verify`"
            )),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::DegreeTooLow { .. } | OracleError::InvalidInput(_) => CliError::Parse(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Unmixed,
    General,
    #[default]
    Auto,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum DeltaSpec {
    Keyword(String),
    Vector(Vec<String>),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum B0Spec {
    Keyword(String),
    Point(Vec<i64>),
}

/// User liftings: one array per support `A_1..A_n` in file order, and one
/// value per vertex of the extra polytope in lexicographic vertex order.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LiftingSpec {
    pub supports: Vec<Vec<String>>,
    pub q: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub supports: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<DeltaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_polytope: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<B0Spec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub liftings: Option<LiftingSpec>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub enum Extra {
    Unmixed { lambda: Rat, delta: Option<QVec> },
    General { q: RationalPolytope },
}

/// A validated problem, ready to build.
#[derive(Clone, Debug)]
pub struct Problem {
    pub system: System,
    pub extra: Extra,
    pub opts: BuildOptions,
}

fn rational(s: &str) -> CliResult<Rat> {
    parse_rational(s).map_err(CliError::Parse)
}

fn rationals(v: &[String]) -> CliResult<QVec> {
    v.iter().map(|s| rational(s)).collect()
}

pub fn parse_problem(text: &str) -> CliResult<Problem> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    problem_from_file(&file)
}

pub fn problem_from_file(file: &ProblemFile) -> CliResult<Problem> {
    let supports: Vec<Vec<IVec>> =
        file.supports.iter().map(|s| s.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()).collect();
    if supports.is_empty() {
        return Err(CliError::Parse("no supports".into()));
    }
    let n = supports.len() - 1;
    let system = match &file.names {
        Some(names) => {
            let flat: Vec<&String> = names.iter().flatten().collect();
            let mut uniq = flat.clone();
            uniq.sort();
            uniq.dedup();
            if uniq.len() != flat.len() {
                return Err(CliError::Parse("coefficient names must be distinct".into()));
            }
            System::with_names(supports.clone(), names.clone())?
        }
        None => System::new(supports.clone())?,
    };
    let mut opts = BuildOptions { seed: file.seed, ..BuildOptions::default() };
    match &file.b0 {
        None => {}
        Some(B0Spec::Keyword(k)) if k == "auto" => {}
        Some(B0Spec::Keyword(k)) => return Err(CliError::Parse(format!("b0: expected a point or \"auto\", got {k:?}"))),
        Some(B0Spec::Point(p)) => {
            let a: IVec = p.iter().map(|&x| int(x)).collect();
            let idx = system
                .point_index(0, &a)
                .ok_or_else(|| CliError::Parse("b0 must be a point of the first support".into()))?;
            opts.b0 = Some(idx);
        }
    }
    if let Some(l) = &file.liftings {
        if l.supports.len() != n {
            return Err(CliError::Parse(format!("liftings: expected {n} support arrays")));
        }
        let mut sorted = Vec::with_capacity(n);
        for (k, vals) in l.supports.iter().enumerate() {
            let pts = &supports[k + 1];
            if vals.len() != pts.len() {
                return Err(CliError::Parse(format!("liftings: support {} has {} points", k + 1, pts.len())));
            }
            let vals = rationals(vals)?;
            let mut order: Vec<usize> = (0..pts.len()).collect();
            order.sort_by(|&a, &b| pts[a].cmp(&pts[b]));
            sorted.push(order.into_iter().map(|j| vals[j].clone()).collect());
        }
        opts.liftings = Some(UserLifting { supports: sorted, q: rationals(&l.q)? });
    }
    let general = |file: &ProblemFile| -> CliResult<Extra> {
        let verts = file.q_polytope.as_ref().ok_or_else(|| CliError::Parse("general mode needs q_polytope".into()))?;
        let pts: Vec<QVec> = verts.iter().map(|v| rationals(v)).collect::<CliResult<_>>()?;
        if pts.is_empty() || pts.iter().any(|p| p.len() != n) {
            return Err(CliError::Parse(format!("q_polytope vertices must have length {n}")));
        }
        Ok(Extra::General { q: convex_hull(&pts).map_err(|e| CliError::Parse(e.to_string()))? })
    };
    let unmixed = |file: &ProblemFile| -> CliResult<Extra> {
        let lambda = rational(file.lambda.as_deref().unwrap_or("1"))?;
        let delta = match &file.delta {
            None => None,
            Some(DeltaSpec::Keyword(k)) if k == "random" => None,
            Some(DeltaSpec::Keyword(k)) => {
                return Err(CliError::Parse(format!("delta: expected a vector or \"random\", got {k:?}")))
            }
            Some(DeltaSpec::Vector(v)) => {
                let d = rationals(v)?;
                if d.len() != n {
                    return Err(CliError::Parse(format!("delta must have length {n}")));
                }
                Some(d)
            }
        };
        Ok(Extra::Unmixed { lambda, delta })
    };
    let extra = match file.mode {
        Mode::Unmixed => unmixed(file)?,
        Mode::General => general(file)?,
        Mode::Auto if file.q_polytope.is_some() => general(file)?,
        Mode::Auto if detect_unmixed(&system).is_some() => unmixed(file)?,
        Mode::Auto => return Err(CliError::Parse("supports are not unmixed; give q_polytope".into())),
    };
    Ok(Problem { system, extra, opts })
}

/// Builds the matrix; returns the perturbation actually used in the unmixed case.
pub fn build(problem: &Problem) -> CliResult<(ResultantMatrix, Option<QVec>)> {
    build_system(&problem.system, problem)
}

fn build_system(system: &System, problem: &Problem) -> CliResult<(ResultantMatrix, Option<QVec>)> {
    match &problem.extra {
        Extra::Unmixed { lambda, delta: Some(d) } => Ok((build_unmixed(system, lambda, d, &problem.opts)?, Some(d.clone()))),
        Extra::Unmixed { lambda, delta: None } => {
            let (m, d) = build_unmixed_random(system, lambda, &problem.opts, 32)?;
            Ok((m, Some(d)))
        }
        Extra::General { q } => Ok((build_general(system, q, &problem.opts)?, None)),
    }
}

// ---------------------------------------------------------------------------
// Formatting helpers

/// `x1^2x2` style monomial; `1` for the zero exponent.
pub fn monomial(e: &[Int]) -> String {
    let mut s = String::new();
    for (k, x) in e.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let _ = write!(s, "x{}", k + 1);
        if *x != int(1) {
            let _ = write!(s, "^{x}");
        }
    }
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

fn fmt_vec(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn to_i64s(v: &[Int]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).expect("coordinate fits in i64")).collect()
}

fn to_ints(v: &[i64]) -> IVec {
    v.iter().map(|&x| int(x)).collect()
}

// ---------------------------------------------------------------------------
// essential

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EssentialReport {
    pub codimension: usize,
    pub essential: Vec<Vec<usize>>,
    pub degrees: Vec<String>,
    pub trivial: bool,
}

pub fn cmd_essential(system: &System) -> EssentialReport {
    let ea = analyze_essential(system);
    let trivial = ea.codim != 1;
    EssentialReport {
        codimension: ea.codim,
        essential: ea.essential,
        degrees: resultant_degrees(system).iter().map(|d| d.to_string()).collect(),
        trivial,
    }
}

pub fn essential_table(r: &EssentialReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "codimension: {}", r.codimension);
    if r.trivial {
        let _ = writeln!(s, "resultant trivial (constant 1)");
    }
    let sets: Vec<String> = r
        .essential
        .iter()
        .map(|e| format!("{{{}}}", e.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    let _ = writeln!(s, "essential: {}", if sets.is_empty() { "none".into() } else { sets.join(" ") });
    if !r.trivial {
        let _ = writeln!(s, "degrees {}", r.degrees.join(","));
    }
    s
}

// ---------------------------------------------------------------------------
// build

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum CellLabel {
    Primary(String),
    Secondary(Vec<i64>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RowArtifact {
    pub point: Vec<i64>,
    pub poly: usize,
    pub exponent: Vec<i64>,
    pub mixed: bool,
    pub cell: CellLabel,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EntryArtifact {
    pub row: Vec<i64>,
    pub col: Vec<i64>,
    pub symbol: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CellArtifact {
    pub v: Vec<i64>,
    pub admissible: bool,
    pub essential: Vec<usize>,
    pub multiplicity: String,
    pub slices: usize,
    pub points: usize,
    pub mixed_points: usize,
}

/// Serializable form of a `ResultantMatrix`, keyed by lattice points.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixArtifact {
    pub supports: Vec<Vec<Vec<i64>>>,
    pub names: Vec<Vec<String>>,
    pub b0: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<String>>,
    pub dim: usize,
    pub rows: Vec<RowArtifact>,
    pub entries: Vec<EntryArtifact>,
    pub nonmixed: Vec<Vec<i64>>,
    pub mixed_counts: Vec<usize>,
    pub cells: Vec<CellArtifact>,
    pub heights: Vec<String>,
    pub diagnostics: Vec<String>,
}

pub fn to_artifact(m: &ResultantMatrix, delta: Option<&[Rat]>) -> MatrixArtifact {
    let names = m.system.symbol_names();
    let rows = m
        .rows
        .iter()
        .zip(&m.points)
        .map(|(r, p)| RowArtifact {
            point: to_i64s(p),
            poly: r.poly,
            exponent: to_i64s(&r.exponent),
            mixed: r.mixed,
            cell: match &r.cell {
                CellTag::Primary => CellLabel::Primary("primary".into()),
                CellTag::Secondary(v) => CellLabel::Secondary(to_i64s(v)),
            },
        })
        .collect();
    let mut entries = Vec::new();
    for (r, row) in m.matrix.rows.iter().enumerate() {
        for &(c, s) in row {
            entries.push(EntryArtifact {
                row: to_i64s(&m.points[r]),
                col: to_i64s(&m.points[c]),
                symbol: names[s].clone(),
            });
        }
    }
    MatrixArtifact {
        supports: m.system.supports.iter().map(|s| s.iter().map(|p| to_i64s(p)).collect()).collect(),
        names: m.system.names.clone(),
        b0: to_i64s(&m.b0),
        delta: delta.map(|d| d.iter().map(fmt_rational).collect()),
        dim: m.dim(),
        rows,
        entries,
        nonmixed: m.nonmixed_indices().iter().map(|&k| to_i64s(&m.points[k])).collect(),
        mixed_counts: m.mixed_counts(),
        cells: m
            .cells
            .iter()
            .map(|c| CellArtifact {
                v: to_i64s(&c.v),
                admissible: c.admissible,
                essential: c.essential.clone(),
                multiplicity: c.multiplicity.to_string(),
                slices: c.slices,
                points: c.points,
                mixed_points: c.mixed_points,
            })
            .collect(),
        heights: m.heights.iter().map(fmt_rational).collect(),
        diagnostics: m.diagnostics.clone(),
    }
}

/// Rebuilds the matrix from its artifact.
pub fn from_artifact(a: &MatrixArtifact) -> CliResult<ResultantMatrix> {
    let supports: Vec<Vec<IVec>> = a.supports.iter().map(|s| s.iter().map(|p| to_ints(p)).collect()).collect();
    let system = System::with_names(supports, a.names.clone())?;
    let points: Vec<IVec> = a.rows.iter().map(|r| to_ints(&r.point)).collect();
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Parse("rows must be sorted by point".into()));
    }
    let index: HashMap<IVec, usize> = points.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();
    let symbols: HashMap<String, usize> =
        system.symbol_names().into_iter().enumerate().map(|(k, s)| (s, k)).collect();
    let lookup = |p: &[i64]| index.get(&to_ints(p)).copied().ok_or_else(|| CliError::Parse(format!("unknown point {p:?}")));
    let mut rows = Vec::with_capacity(a.rows.len());
    for r in &a.rows {
        let exponent = to_ints(&r.exponent);
        let point = system
            .point_index(r.poly, &exponent)
            .ok_or_else(|| CliError::Parse(format!("exponent {:?} is not in support {}", r.exponent, r.poly)))?;
        rows.push(RowContent {
            poly: r.poly,
            point,
            exponent,
            mixed: r.mixed,
            cell: match &r.cell {
                CellLabel::Primary(_) => CellTag::Primary,
                CellLabel::Secondary(v) => CellTag::Secondary(to_ints(v)),
            },
        });
    }
    let mut matrix = SymbolMatrix::new(points.len(), system.nvars());
    for e in &a.entries {
        let s = *symbols.get(&e.symbol).ok_or_else(|| CliError::Parse(format!("unknown symbol {}", e.symbol)))?;
        matrix.set(lookup(&e.row)?, lookup(&e.col)?, s);
    }
    let cells = a
        .cells
        .iter()
        .map(|c| {
            Ok(CellReport {
                v: to_ints(&c.v),
                admissible: c.admissible,
                essential: c.essential.clone(),
                multiplicity: c.multiplicity.parse::<Int>().map_err(|e| CliError::Parse(e.to_string()))?,
                slices: c.slices,
                points: c.points,
                mixed_points: c.mixed_points,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(ResultantMatrix {
        system,
        points,
        rows,
        matrix,
        b0: to_ints(&a.b0),
        cells,
        heights: a.heights.iter().map(|h| rational(h)).collect::<CliResult<_>>()?,
        diagnostics: a.diagnostics.clone(),
    })
}

/// The (row, coefficients of, cell, type) table.
pub fn build_table(m: &ResultantMatrix) -> String {
    let mut lines: Vec<[String; 4]> = vec![["row".into(), "coefficients of".into(), "cell".into(), "type".into()]];
    for (p, r) in m.points.iter().zip(&m.rows) {
        let shift = sub_i(p, &r.exponent);
        let coeff = if shift.iter().all(Zero::is_zero) {
            format!("f{}", r.poly)
        } else {
            format!("{} f{}", monomial(&shift), r.poly)
        };
        let cell = match &r.cell {
            CellTag::Primary => "primary".to_string(),
            CellTag::Secondary(v) => format!("{} secondary", fmt_vec(v)),
        };
        let ty = if r.mixed { "mixed" } else { "non-mixed" };
        lines.push([monomial(p), coeff, cell, ty.into()]);
    }
    let widths: Vec<usize> = (0..4).map(|c| lines.iter().map(|l| l[c].chars().count()).max().unwrap_or(0)).collect();
    let mut s = String::new();
    for l in &lines {
        let cols: Vec<String> = (0..4).map(|c| format!("{:<w$}", l[c], w = widths[c])).collect();
        let _ = writeln!(s, "{}", cols.join("  ").trim_end());
    }
    let _ = writeln!(s, "size: {}", m.dim());
    let _ = writeln!(
        s,
        "mixed rows per polynomial: {}",
        m.mixed_counts().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    );
    let nm: Vec<String> = m.nonmixed_indices().iter().map(|&k| monomial(&m.points[k])).collect();
    let _ = writeln!(s, "extraneous minor on: {}", nm.join(" "));
    for d in &m.diagnostics {
        let _ = writeln!(s, "note: {d}");
    }
    s
}

// ---------------------------------------------------------------------------
// resultant

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResultantReport {
    pub dim: usize,
    pub resultant: String,
    pub extraneous: String,
    pub degrees: Vec<Option<u32>>,
    pub terms: usize,
}

pub fn cmd_resultant(m: &ResultantMatrix, size_cap: usize) -> CliResult<ResultantReport> {
    let names = m.system.symbol_names();
    let res = extract_resultant(m, size_cap)?;
    let ext = symbolic_determinant(&m.minor(), size_cap).map_err(ResultantError::from)?.canonical_sign();
    Ok(ResultantReport {
        dim: m.dim(),
        resultant: res.render(&names),
        extraneous: ext.render(&names),
        degrees: res.group_degrees(&m.system.group_of(), m.system.n + 1),
        terms: res.num_terms(),
    })
}

pub fn resultant_table(r: &ResultantReport) -> String {
    let degs: Vec<String> = r.degrees.iter().map(|d| d.map_or("-".into(), |d| d.to_string())).collect();
    format!(
        "size: {}\nresultant ({} terms, degrees {}):\n{}\nextraneous factor:\n{}\n",
        r.dim,
        r.terms,
        degs.join(","),
        r.resultant,
        r.extraneous
    )
}

// ---------------------------------------------------------------------------
// verify

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { name: name.into(), passed, detail });
    }
}

pub fn verify_table(r: &VerifyReport) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let _ = writeln!(s, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    s
}

/// Every row `p` holds the coefficients of `x^{p-a} f_i` and nothing else.
pub fn check_sylvester_shape(m: &ResultantMatrix) -> Result<(), String> {
    for (r, (p, rc)) in m.points.iter().zip(&m.rows).enumerate() {
        let shift = sub_i(p, &rc.exponent);
        let mut expected: Vec<(usize, usize)> = Vec::new();
        for (j, b) in m.system.supports[rc.poly].iter().enumerate() {
            let target = crate::arith::add_i(&shift, b);
            let c = m.index_of(&target).ok_or_else(|| format!("row {} leaves the point set", fmt_vec(p)))?;
            expected.push((c, m.system.var_index(rc.poly, j)));
        }
        expected.sort();
        if m.matrix.rows[r] != expected {
            return Err(format!("row {} is not x^(p-a) f{}", fmt_vec(p), rc.poly));
        }
    }
    Ok(())
}

fn random_values(nvars: usize, rng: &mut ChaCha8Rng) -> Vec<Int> {
    (0..nvars)
        .map(|_| {
            let v: i64 = rng.gen_range(1..=30);
            int(if rng.gen_bool(0.5) { v } else { -v })
        })
        .collect()
}

/// Runs the property battery on a built matrix. `rotations[k]` is the build
/// with polynomial `k` distinguished (entry 0 may be `m` itself).
pub fn verify_matrix(m: &ResultantMatrix, rotations: &[ResultantMatrix], seed: u64, trials: usize) -> VerifyReport {
    let mut rep = VerifyReport { checks: Vec::new() };
    let system = &m.system;
    match check_sylvester_shape(m) {
        Ok(()) => rep.push("sylvester-shape", true, format!("{} rows", m.dim())),
        Err(e) => rep.push("sylvester-shape", false, e),
    }
    let degrees = resultant_degrees(system);
    let counts = m.mixed_counts();
    let ok = counts.iter().zip(&degrees).all(|(c, d)| int(*c as i64) == *d);
    rep.push(
        "mixed-counts",
        ok,
        format!(
            "mixed {:?}, mixed volumes {:?}",
            counts,
            degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>()
        ),
    );
    rep.push(
        "block-structure",
        leading_blocks(m).is_some(),
        match leading_blocks(m) {
            Some((sizes, _, _)) => format!("blocks {sizes:?}"),
            None => "leading matrix is not block triangular by cell".into(),
        },
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut divisible = true;
    let mut gcd_ok = true;
    let mut nonsingular = 0usize;
    let mut detail = String::new();
    for t in 0..trials {
        let vals = random_values(system.nvars(), &mut rng);
        let dense = m.matrix.specialize(&vals);
        let dm = integer_determinant(&dense);
        let de = integer_determinant(&m.minor().specialize(&vals));
        if de.is_zero() {
            continue;
        }
        nonsingular += 1;
        let (res, rem) = dm.div_rem(&de);
        if !rem.is_zero() {
            divisible = false;
            let _ = write!(detail, "trial {t}: det E does not divide det M; ");
            continue;
        }
        if rotations.len() == system.n + 1 && !res.is_zero() {
            let dets: Vec<Int> = rotations
                .iter()
                .enumerate()
                .map(|(k, r)| integer_determinant(&r.matrix.specialize(&rotate_values(system, k, &vals))))
                .collect();
            let g = gcd_of(&dets);
            if !(g.clone() % res.abs()).is_zero() {
                gcd_ok = false;
                let _ = write!(detail, "trial {t}: gcd {g} not divisible by {res}; ");
            }
        }
    }
    rep.push("nonsingular", nonsingular > 0, format!("{nonsingular}/{trials} specializations with det E != 0"));
    rep.push("divisibility", divisible, if divisible { "det E | det M".into() } else { detail.clone() });
    if rotations.len() == system.n + 1 {
        rep.push("gcd", gcd_ok, if gcd_ok { "Res divides the gcd of rotated determinants".into() } else { detail });
    }
    let mut vanish = true;
    let mut vdetail = String::new();
    for t in 0..trials {
        match planted_root_system(system, seed.wrapping_add(1000 + t as u64)) {
            Ok(p) => {
                let dm = integer_determinant(&m.matrix.specialize(&p.values));
                if !dm.is_zero() {
                    vanish = false;
                    let _ = write!(vdetail, "trial {t}: det M = {dm}; ");
                }
            }
            Err(e) => {
                vdetail = e.to_string();
                break;
            }
        }
    }
    rep.push("planted-root", vanish, if vanish { format!("{trials} planted roots") } else { vdetail });
    rep
}

/// Builds with each polynomial in turn distinguished; entry `k` has
/// polynomial `k` first. User liftings and `b0` apply to entry 0 only.
pub fn rotated_builds(problem: &Problem) -> CliResult<Vec<ResultantMatrix>> {
    let mut out = vec![build(problem)?.0];
    for k in 1..=problem.system.n {
        let rotated = rotate_distinguished(&problem.system, k);
        let mut p = problem.clone();
        p.opts.b0 = None;
        p.opts.liftings = None;
        out.push(build_system(&rotated, &p)?.0);
    }
    Ok(out)
}

/// Values of the rotated system's symbols, read from an assignment of the
/// original system's symbols.
pub fn rotate_values(system: &System, k: usize, vals: &[Int]) -> Vec<Int> {
    let mut order = vec![k];
    order.extend((0..=system.n).filter(|&i| i != k));
    order
        .iter()
        .flat_map(|&i| (0..system.supports[i].len()).map(move |j| (i, j)))
        .map(|(i, j)| vals[system.var_index(i, j)].clone())
        .collect()
}

pub fn cmd_verify(problem: &Problem, seed: u64, trials: usize) -> CliResult<VerifyReport> {
    let rotations = rotated_builds(problem)?;
    Ok(verify_matrix(&rotations[0], &rotations, seed, trials))
}

// ---------------------------------------------------------------------------
// classical

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassicalReport {
    pub degrees: Vec<u32>,
    pub t: u32,
    pub size: usize,
    pub minor_size: usize,
    pub sparse_size: usize,
    pub agree: bool,
    pub resultant: String,
}

/// Dense system of `n - 1` affine variables whose polynomial `i` has all
/// monomials of degree at most `degrees[i]`.
pub fn dense_system(degrees: &[u32]) -> CliResult<System> {
    let n = degrees.len();
    if n < 2 {
        return Err(CliError::Parse("need at least two forms".into()));
    }
    let mut supports = Vec::with_capacity(n);
    for &m in degrees {
        let mut pts = Vec::new();
        let mut stack = vec![Vec::<i64>::new()];
        while let Some(v) = stack.pop() {
            if v.len() == n - 1 {
                pts.push(to_ints(&v));
                continue;
            }
            let used: i64 = v.iter().sum();
            for e in 0..=(m as i64 - used) {
                let mut w = v.clone();
                w.push(e);
                stack.push(w);
            }
        }
        supports.push(pts);
    }
    Ok(System::new(supports)?)
}

pub fn cmd_classical(degrees: &[u32], t: u32, seed: u64, size_cap: usize) -> CliResult<ClassicalReport> {
    let system = dense_system(degrees)?;
    let sym = |i: usize, a: &[u32]| {
        let p: IVec = a.iter().map(|&x| int(x as i64)).collect();
        system.var_index(i, system.point_index(i, &p).expect("dense support"))
    };
    let c = classical_macaulay(degrees, t, system.nvars(), sym)?;
    let classical = classical_resultant(&c, size_cap)?;
    let tn: u32 = degrees.iter().map(|m| m - 1).sum();
    let lambda = Rat::from_integer(int((t - tn - 1) as i64));
    let delta: QVec = (0..system.n).map(|k| crate::arith::rat(1, 97 + 4 * k as i64)).collect();
    let opts = BuildOptions { seed, ..BuildOptions::default() };
    let m = build_unmixed(&system, &lambda, &delta, &opts)?;
    let sparse = extract_resultant(&m, size_cap)?;
    Ok(ClassicalReport {
        degrees: degrees.to_vec(),
        t,
        size: c.monomials.len(),
        minor_size: c.nonreduced.len(),
        sparse_size: m.dim(),
        agree: sparse.equal_up_to_sign(&classical),
        resultant: sparse.render(&system.symbol_names()),
    })
}

pub fn classical_table(r: &ClassicalReport) -> String {
    format!(
        "D(n,t) for degrees {:?}, t = {}: {}x{}, non-reduced minor {}x{}\nsparse build: {}x{}\nquotients agree: {}\nresultant: {}\n",
        r.degrees, r.t, r.size, r.size, r.minor_size, r.minor_size, r.sparse_size, r.sparse_size, r.agree, r.resultant
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = r#"{
        "supports": [[[0,0],[1,0],[0,1],[1,1]], [[0,0],[1,0],[0,1],[1,1]], [[0,0],[1,0],[0,1],[1,1]]],
        "mode": "unmixed", "lambda": "1", "delta": ["2/3", "1/2"]
    }"#;

    #[test]
    fn floats_are_rejected() {
        let bad = SQUARE.replace("\"1\"", "1.0");
        assert!(matches!(parse_problem(&bad), Err(CliError::Parse(_))));
        let bad = SQUARE.replace("[0,0],[1,0],[0,1],[1,1]]]", "[0,0],[1,0],[0,1],[1.5,1]]]");
        assert!(matches!(parse_problem(&bad), Err(CliError::Parse(_))));
    }

    #[test]
    fn unknown_fields_and_bad_keywords_are_parse_errors() {
        let bad = SQUARE.replace("\"mode\"", "\"colour\": 1, \"mode\"");
        assert_eq!(parse_problem(&bad).unwrap_err().exit_code(), 2);
        let bad = SQUARE.replace("[\"2/3\", \"1/2\"]", "\"sometimes\"");
        assert_eq!(parse_problem(&bad).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn artifact_reparses_to_the_same_matrix() {
        let p = parse_problem(SQUARE).unwrap();
        let (m, d) = build(&p).unwrap();
        let a = to_artifact(&m, d.as_deref());
        let text = serde_json::to_string(&a).unwrap();
        let back: MatrixArtifact = serde_json::from_str(&text).unwrap();
        let m2 = from_artifact(&back).unwrap();
        assert_eq!(m2.points, m.points);
        assert_eq!(m2.rows, m.rows);
        assert_eq!(m2.matrix, m.matrix);
        assert_eq!(m2.heights, m.heights);
    }

    #[test]
    fn monomials_print_like_the_tables() {
        assert_eq!(monomial(&[int(1), int(1)]), "x1x2");
        assert_eq!(monomial(&[int(2), int(0)]), "x1^2");
        assert_eq!(monomial(&[int(0), int(0)]), "1");
    }

    #[test]
    fn trivial_family_is_reported() {
        let s = System::new(vec![vec![vec![int(0)]], vec![vec![int(0)]]]).unwrap();
        let r = cmd_essential(&s);
        assert!(r.trivial);
        assert!(essential_table(&r).contains("resultant trivial (constant 1)"));
    }

    #[test]
    fn corrupted_entry_fails_verification() {
        let p = parse_problem(SQUARE).unwrap();
        let (mut m, _) = build(&p).unwrap();
        let (c, s) = m.matrix.rows[0][0];
        m.matrix.set(0, c, (s + 1) % m.matrix.nvars);
        let rep = verify_matrix(&m, &[], 1, 3);
        assert!(!rep.passed());
        assert!(!rep.checks.iter().find(|c| c.name == "sylvester-shape").unwrap().passed);
    }
}
