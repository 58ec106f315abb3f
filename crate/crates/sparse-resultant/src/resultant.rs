//! Essential subfamilies, resultant degrees, and the recursive construction of
//! the Sylvester-type matrix.
//!
//! The unmixed case (`Q_i = k_i P`, extra polytope `λP + δ`) and the general
//! case (arbitrary extra polytope `Q`) share one engine. At every level the
//! distinguished support `S_0` is lifted by the Macaulay lifting; lattice
//! points in the primary cell get their row content from a generic tight
//! lifting of the remaining summands, and lattice points in a secondary cell
//! are sliced along the lattice of its essential facet subfamily and handled
//! by a lower-dimensional instance of the same construction.

use crate::arith::{
    add_i, colex_cmp_i, dot_qi, primitive_direction, rat, rat_int, sub_i, sub_q, to_q, IVec, Int, QVec, Rat,
};
use crate::geometry::{
    convex_hull, from_inequalities, integer_points, minkowski_sum, mixed_volume, support_width, GeometryError,
    RationalPolytope,
};
use crate::lattice::{
    lattice_index, orthogonal_decomposition, orthogonal_lattice, to_full_rank_coordinates, AffineLattice,
    FullRankCoords,
};
use crate::subdivision::{
    coherent_decomposition, generic_tight_lifting, macaulay_lifting, Decomposition, SubdivisionError, Summand,
};
use crate::symbolic::{symbolic_determinant, SparsePoly, SymbolMatrix, SymbolicError};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Debug, thiserror::Error)]
pub enum ResultantError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("family is not essential (codimension {codim}, essential subfamilies {essential:?})")]
    NotEssential { codim: usize, essential: Vec<Vec<usize>> },
    #[error("lattice point {0:?} lies on a cell boundary; choose a different perturbation")]
    BoundaryPoint(Vec<String>),
    #[error("row shift leaves the point set: {0}")]
    SylvesterViolation(String),
    #[error("lifting is not tight")]
    NotTight,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

impl From<SubdivisionError> for ResultantError {
    fn from(e: SubdivisionError) -> Self {
        match e {
            SubdivisionError::BoundaryPoint(p) => ResultantError::BoundaryPoint(p),
            SubdivisionError::NotTight | SubdivisionError::RetriesExhausted(_) => ResultantError::NotTight,
            SubdivisionError::NotFullDimensional => ResultantError::Internal("degenerate Minkowski sum".into()),
        }
    }
}

type Result<T> = std::result::Result<T, ResultantError>;

// ---------------------------------------------------------------------------
// Systems

/// `n + 1` supports in ℤⁿ, each sorted lexicographically. Coefficient symbols
/// are numbered by `(i, position of a in A_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    pub n: usize,
    pub supports: Vec<Vec<IVec>>,
    pub names: Vec<Vec<String>>,
}

fn default_name(i: usize, a: &[Int]) -> String {
    let coords: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    format!("c{}[{}]", i, coords.join(","))
}

impl System {
    pub fn new(supports: Vec<Vec<IVec>>) -> Result<Self> {
        let names = supports
            .iter()
            .enumerate()
            .map(|(i, s)| s.iter().map(|a| default_name(i, a)).collect())
            .collect();
        System::with_names(supports, names)
    }

    /// Supports with one symbol name per point; both are reordered together.
    pub fn with_names(supports: Vec<Vec<IVec>>, names: Vec<Vec<String>>) -> Result<Self> {
        if supports.is_empty() {
            return Err(ResultantError::InvalidInput("no supports".into()));
        }
        let n = supports.len() - 1;
        let mut out_s = Vec::with_capacity(n + 1);
        let mut out_n = Vec::with_capacity(n + 1);
        for (i, (s, nm)) in supports.into_iter().zip(names).enumerate() {
            if s.is_empty() {
                return Err(ResultantError::InvalidInput(format!("support {i} is empty")));
            }
            if s.len() != nm.len() {
                return Err(ResultantError::InvalidInput(format!("support {i}: names do not match points")));
            }
            if s.iter().any(|a| a.len() != n) {
                return Err(ResultantError::InvalidInput(format!(
                    "support {i}: exponents must have length {n} for {} polynomials",
                    n + 1
                )));
            }
            let mut pairs: Vec<(IVec, String)> = s.into_iter().zip(nm).collect();
            pairs.sort();
            if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(ResultantError::InvalidInput(format!("support {i} has a repeated exponent")));
            }
            out_s.push(pairs.iter().map(|p| p.0.clone()).collect());
            out_n.push(pairs.into_iter().map(|p| p.1).collect());
        }
        Ok(System { n, supports: out_s, names: out_n })
    }

    pub fn nvars(&self) -> usize {
        self.supports.iter().map(Vec::len).sum()
    }

    pub fn var_index(&self, i: usize, j: usize) -> usize {
        self.supports[..i].iter().map(Vec::len).sum::<usize>() + j
    }

    pub fn symbol_names(&self) -> Vec<String> {
        self.names.iter().flatten().cloned().collect()
    }

    /// Polynomial index of every symbol.
    pub fn group_of(&self) -> Vec<usize> {
        self.supports.iter().enumerate().flat_map(|(i, s)| std::iter::repeat_n(i, s.len())).collect()
    }

    pub fn point_index(&self, i: usize, a: &[Int]) -> Option<usize> {
        self.supports[i].binary_search_by(|p| p.as_slice().cmp(a)).ok()
    }
}

/// Moves polynomial `k` to the front, keeping the others in order.
pub fn rotate_distinguished(system: &System, k: usize) -> System {
    let mut order = vec![k];
    order.extend((0..=system.n).filter(|&i| i != k));
    System {
        n: system.n,
        supports: order.iter().map(|&i| system.supports[i].clone()).collect(),
        names: order.iter().map(|&i| system.names[i].clone()).collect(),
    }
}

// ---------------------------------------------------------------------------
// Essential subfamilies

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialAnalysis {
    pub codim: usize,
    /// Essential subfamilies, ordered by size and then lexicographically.
    pub essential: Vec<Vec<usize>>,
}

fn family_rank(sets: &[&[IVec]]) -> usize {
    if sets.is_empty() {
        0
    } else {
        AffineLattice::of_sum(sets).rank()
    }
}

/// Codimension and essential subfamilies of an arbitrary family of point sets.
pub fn essential_of_family(sets: &[&[IVec]]) -> EssentialAnalysis {
    let m = sets.len();
    let mut ranks = vec![0usize; 1 << m];
    for mask in 1..(1usize << m) {
        let sel: Vec<&[IVec]> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| sets[i]).collect();
        ranks[mask] = family_rank(&sel);
    }
    let size = |mask: usize| mask.count_ones() as usize;
    let codim = (0..(1usize << m)).map(|mask| size(mask).saturating_sub(ranks[mask])).max().unwrap_or(0);
    let mut essential: Vec<Vec<usize>> = (1..(1usize << m))
        .filter(|&mask| {
            ranks[mask] + 1 == size(mask)
                && (1..mask).filter(|sub| sub & mask == *sub).all(|sub| ranks[sub] >= size(sub))
        })
        .map(|mask| (0..m).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    essential.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    EssentialAnalysis { codim, essential }
}

pub fn analyze_essential(system: &System) -> EssentialAnalysis {
    let sets: Vec<&[IVec]> = system.supports.iter().map(Vec::as_slice).collect();
    essential_of_family(&sets)
}

/// The essential subsystem expressed in full-rank coordinates of its own
/// lattice, together with the original polynomial indices.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub system: System,
    pub original_indices: Vec<usize>,
}

pub fn reduce_to_essential(system: &System) -> Result<ReducedSystem> {
    let ea = analyze_essential(system);
    if ea.codim != 1 || ea.essential.len() != 1 {
        return Err(ResultantError::NotEssential { codim: ea.codim, essential: ea.essential });
    }
    let idx = ea.essential[0].clone();
    let sets: Vec<&[IVec]> = idx.iter().map(|&i| system.supports[i].as_slice()).collect();
    let lat = AffineLattice::of_sum(&sets).linear();
    let coords = to_full_rank_coordinates(&lat);
    let supports: Vec<Vec<IVec>> = idx
        .iter()
        .map(|&i| {
            let s = &system.supports[i];
            s.iter().map(|a| coords.forward_vector(&sub_i(a, &s[0])).expect("in lattice")).collect()
        })
        .collect();
    let names = idx.iter().map(|&i| system.names[i].clone()).collect();
    Ok(ReducedSystem { system: System::with_names(supports, names)?, original_indices: idx })
}

/// Mixed volume of polytopes given by point sets, in the lattice spanned by
/// the differences of `lattice_sets`.
fn mixed_volume_in(polys: &[&[IVec]], lattice_sets: &[&[IVec]]) -> Int {
    let lat = AffineLattice::of_sum(lattice_sets).linear();
    let shifted: Vec<RationalPolytope> = polys
        .iter()
        .map(|s| {
            let pts: Vec<IVec> = s.iter().map(|a| sub_i(a, &s[0])).collect();
            RationalPolytope::from_int_points(&pts).expect("nonempty")
        })
        .collect();
    let refs: Vec<&RationalPolytope> = shifted.iter().collect();
    mixed_volume(&refs, &lat).expect("points lie in their lattice")
}

/// Degree of the sparse resultant in the coefficients of each polynomial.
pub fn resultant_degrees(system: &System) -> Vec<Int> {
    let ea = analyze_essential(system);
    let mut out = vec![Int::zero(); system.n + 1];
    if ea.codim != 1 {
        return out;
    }
    let idx = &ea.essential[0];
    let all: Vec<&[IVec]> = idx.iter().map(|&i| system.supports[i].as_slice()).collect();
    for (pos, &i) in idx.iter().enumerate() {
        let others: Vec<&[IVec]> =
            idx.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, &j)| system.supports[j].as_slice()).collect();
        out[i] = if others.is_empty() { Int::one() } else { mixed_volume_in(&others, &all) };
    }
    out
}

// ---------------------------------------------------------------------------
// Build options and results

/// Which slices of an admissible secondary cell keep their mixed points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SliceChoice {
    /// Slices closest to the boundary facet.
    #[default]
    Lowest,
    /// Slices closest to the distinguished vertex.
    Highest,
}

/// Liftings for the primary cell at the top level: one array per support
/// `A_1..A_n` (aligned with the sorted support order) and one for the
/// vertices of `Q` in lexicographic order.
#[derive(Clone, Debug)]
pub struct UserLifting {
    pub supports: Vec<Vec<Rat>>,
    pub q: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub seed: u64,
    pub liftings: Option<UserLifting>,
    pub slice_choice: SliceChoice,
    pub max_retries: usize,
    /// Index of `b0` in the sorted support `A_0`.
    pub b0: Option<usize>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { seed: 0, liftings: None, slice_choice: SliceChoice::Lowest, max_retries: 32, b0: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellTag {
    Primary,
    /// Inward normal in the original coordinates.
    Secondary(IVec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowContent {
    pub poly: usize,
    pub point: usize,
    pub exponent: IVec,
    pub mixed: bool,
    pub cell: CellTag,
}

#[derive(Clone, Debug)]
pub struct CellReport {
    pub v: IVec,
    pub admissible: bool,
    /// Essential facet subfamily (original polynomial indices) used for slicing.
    pub essential: Vec<usize>,
    pub multiplicity: Int,
    pub slices: usize,
    pub points: usize,
    pub mixed_points: usize,
}

#[derive(Clone, Debug)]
pub struct ResultantMatrix {
    pub system: System,
    /// The lattice points of the Minkowski sum, lexicographically sorted; they
    /// index both rows and columns.
    pub points: Vec<IVec>,
    pub rows: Vec<RowContent>,
    pub matrix: SymbolMatrix,
    pub b0: IVec,
    pub cells: Vec<CellReport>,
    /// Heights of the points under the Macaulay lifting of the distinguished support.
    pub heights: Vec<Rat>,
    pub diagnostics: Vec<String>,
}

impl ResultantMatrix {
    pub fn dim(&self) -> usize {
        self.points.len()
    }

    /// Indices of the non-mixed rows (equivalently columns).
    pub fn nonmixed_indices(&self) -> Vec<usize> {
        (0..self.rows.len()).filter(|&k| !self.rows[k].mixed).collect()
    }

    pub fn minor(&self) -> SymbolMatrix {
        let idx = self.nonmixed_indices();
        self.matrix.submatrix(&idx, &idx)
    }

    /// Number of mixed rows of each polynomial.
    pub fn mixed_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.system.n + 1];
        for r in &self.rows {
            if r.mixed {
                c[r.poly] += 1;
            }
        }
        c
    }

    pub fn cell(&self, v: &[Int]) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.v.as_slice() == v)
    }

    pub fn index_of(&self, p: &[Int]) -> Option<usize> {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).ok()
    }
}

/// `e_v` of the secondary cell with inward normal `v` (original coordinates).
pub fn secondary_multiplicity(m: &ResultantMatrix, v: &[Int]) -> Option<Int> {
    m.cell(v).map(|c| c.multiplicity.clone())
}

pub fn admissible(m: &ResultantMatrix, v: &[Int]) -> Option<bool> {
    m.cell(v).map(|c| c.admissible)
}

// ---------------------------------------------------------------------------
// Unmixed detection

/// If every `conv(A_i)` is a translate of `k_i P` for one lattice polytope `P`,
/// returns `P` (with its lexicographically smallest vertex at the origin) and
/// the factors `k_i`.
pub fn detect_unmixed(system: &System) -> Option<(RationalPolytope, Vec<Rat>)> {
    let hulls: Vec<RationalPolytope> =
        system.supports.iter().map(|s| RationalPolytope::from_int_points(s).expect("nonempty")).collect();
    let normalized: Vec<Vec<QVec>> = hulls
        .iter()
        .map(|h| {
            let v0 = h.vertices[0].clone();
            h.vertices.iter().map(|v| sub_q(v, &v0)).collect()
        })
        .collect();
    if hulls[0].dim != system.n {
        return None;
    }
    let g = normalized[0].iter().flatten().fold(Int::zero(), |acc, x| acc.gcd(&x.to_integer()));
    if g.is_zero() {
        return None;
    }
    let g = rat_int(&g);
    let p: Vec<QVec> = normalized[0].iter().map(|v| v.iter().map(|x| x / &g).collect()).collect();
    let pmax = p.iter().flatten().map(|x| x.abs()).max()?;
    let mut ks = Vec::new();
    for nv in &normalized {
        let m = nv.iter().flatten().map(|x| x.abs()).max()?;
        let k = &m / &pmax;
        if k.is_zero() {
            return None;
        }
        let scaled: Vec<QVec> = p.iter().map(|v| v.iter().map(|x| x * &k).collect()).collect();
        if scaled != *nv {
            return None;
        }
        ks.push(k);
    }
    Some((convex_hull(&p).expect("nonempty"), ks))
}

pub fn build_unmixed(system: &System, lambda: &Rat, delta: &[Rat], opts: &BuildOptions) -> Result<ResultantMatrix> {
    let (p, _) = detect_unmixed(system)
        .ok_or_else(|| ResultantError::InvalidInput("supports are not scaled copies of one polytope".into()))?;
    if delta.len() != system.n {
        return Err(ResultantError::InvalidInput("delta has the wrong length".into()));
    }
    if lambda.is_negative() {
        return Err(ResultantError::InvalidInput("lambda must be nonnegative".into()));
    }
    let q = p.scale(lambda).translate(delta);
    build_general(system, &q, opts)
}

// ---------------------------------------------------------------------------
// Engine

#[derive(Clone, Debug)]
struct LevelSupport {
    poly: usize,
    ids: Vec<usize>,
    pts: Vec<IVec>,
}

struct Level {
    dim: usize,
    supports: Vec<LevelSupport>,
    q: RationalPolytope,
}

#[derive(Clone, Debug)]
struct Assign {
    poly: usize,
    id: usize,
    mixed: bool,
}

#[derive(Clone, Debug)]
enum LevelCell {
    Primary,
    Secondary(IVec),
}

struct LevelOut {
    points: Vec<IVec>,
    assign: Vec<Assign>,
    cell_of: Vec<LevelCell>,
    reports: Vec<(IVec, CellReport)>,
    heights: Vec<Rat>,
    b0: (usize, usize),
}

struct Ctx<'a> {
    system: &'a System,
    opts: &'a BuildOptions,
    rng: ChaCha8Rng,
    diagnostics: Vec<String>,
}

fn hull_of(pts: &[IVec]) -> RationalPolytope {
    RationalPolytope::from_int_points(pts).expect("nonempty support")
}

fn q_points(pts: &[IVec]) -> Vec<QVec> {
    pts.iter().map(|p| to_q(p)).collect()
}

fn centroid(pts: &[QVec]) -> QVec {
    let n = pts[0].len();
    let k = rat(pts.len() as i64, 1);
    (0..n).map(|c| pts.iter().map(|p| p[c].clone()).sum::<Rat>() / &k).collect()
}

impl Ctx<'_> {
    fn original(&self, poly: usize, id: usize) -> &IVec {
        &self.system.supports[poly][id]
    }

    fn choose_b0(&self, s0: &LevelSupport, hull0: &RationalPolytope, depth: usize) -> Result<usize> {
        let is_vertex = |j: usize| hull0.vertices.contains(&to_q(&s0.pts[j]));
        if depth == 0 {
            if let Some(b) = self.opts.b0 {
                if b >= s0.pts.len() || !is_vertex(b) {
                    return Err(ResultantError::InvalidInput(format!("b0 index {b} is not a vertex of conv(A_0)")));
                }
                return Ok(b);
            }
            let best = (0..s0.pts.len())
                .filter(|&j| is_vertex(j))
                .min_by(|&a, &b| self.original(s0.poly, s0.ids[a]).cmp(self.original(s0.poly, s0.ids[b])))
                .expect("a vertex exists");
            return Ok(best);
        }
        let best = (0..s0.pts.len())
            .filter(|&j| is_vertex(j))
            .max_by(|&a, &b| colex_cmp_i(self.original(s0.poly, s0.ids[a]), self.original(s0.poly, s0.ids[b])))
            .expect("a vertex exists");
        Ok(best)
    }

    fn primary_decomposition(&mut self, lvl: &Level, b0: &[Int], depth: usize) -> Result<Decomposition> {
        let mut inputs: Vec<Vec<QVec>> = lvl.supports[1..].iter().map(|s| q_points(&s.pts)).collect();
        inputs.push(lvl.q.vertices.clone());
        if depth == 0 {
            if let Some(user) = &self.opts.liftings {
                if user.supports.len() != lvl.supports.len() - 1 {
                    return Err(ResultantError::InvalidInput("one lifting per support A_1..A_n is required".into()));
                }
                if user.q.len() != lvl.q.vertices.len() {
                    return Err(ResultantError::InvalidInput(format!(
                        "the lifting of Q needs {} values",
                        lvl.q.vertices.len()
                    )));
                }
                let mut summands = Vec::with_capacity(inputs.len());
                for (k, pts) in inputs.iter().enumerate() {
                    let lifts = if k < user.supports.len() {
                        let s = &lvl.supports[k + 1];
                        let vals = &user.supports[k];
                        if vals.len() != self.system.supports[s.poly].len() {
                            return Err(ResultantError::InvalidInput(format!(
                                "lifting {} has the wrong length",
                                k + 1
                            )));
                        }
                        s.ids.iter().map(|&id| vals[id].clone()).collect()
                    } else {
                        user.q.clone()
                    };
                    summands.push(Summand { points: pts.clone(), lifts });
                }
                let dec = coherent_decomposition(&summands)?;
                if !dec.is_tight() {
                    return Err(ResultantError::NotTight);
                }
                return Ok(dec);
            }
        }
        let verts0 = hull_of(&lvl.supports[0].pts).vertices;
        let tilt = sub_q(&to_q(b0), &centroid(&verts0));
        Ok(generic_tight_lifting(&inputs, Some(&tilt), &mut self.rng, self.opts.max_retries)?)
    }

    fn solve(&mut self, lvl: &Level, depth: usize) -> Result<LevelOut> {
        let r = lvl.dim;
        if r == 0 {
            let s = &lvl.supports[0];
            if s.pts.len() != 1 {
                return Err(ResultantError::Internal("zero-dimensional level with several points".into()));
            }
            return Ok(LevelOut {
                points: vec![vec![]],
                assign: vec![Assign { poly: s.poly, id: s.ids[0], mixed: true }],
                cell_of: vec![LevelCell::Primary],
                reports: vec![],
                heights: vec![Rat::one()],
                b0: (s.poly, s.ids[0]),
            });
        }
        let hulls: Vec<RationalPolytope> = lvl.supports.iter().map(|s| hull_of(&s.pts)).collect();
        let mut parts: Vec<&RationalPolytope> = hulls.iter().collect();
        parts.push(&lvl.q);
        let big = minkowski_sum(&parts);
        if big.dim != r {
            return Err(ResultantError::Internal("Minkowski sum is not full dimensional".into()));
        }
        let points = integer_points(&big);
        let s0 = lvl.supports[0].clone();
        let b0_idx = self.choose_b0(&s0, &hulls[0], depth)?;
        let b0 = s0.pts[b0_idx].clone();

        let mut mac_inputs: Vec<Vec<QVec>> = lvl.supports.iter().map(|s| q_points(&s.pts)).collect();
        mac_inputs.push(lvl.q.vertices.clone());
        let mac = coherent_decomposition(&macaulay_lifting(&mac_inputs, b0_idx))?;

        let primary = mac
            .cells
            .iter()
            .position(|c| c.faces[0] == vec![b0_idx] && c.w.iter().all(Zero::is_zero))
            .ok_or_else(|| ResultantError::Internal("no primary cell".into()))?;
        let mut secondary_dirs: BTreeSet<IVec> = BTreeSet::new();
        for (ci, c) in mac.cells.iter().enumerate() {
            if ci != primary {
                secondary_dirs.insert(primitive_direction(&c.w));
            }
        }
        let bq = to_q(&b0);
        let expected: BTreeSet<IVec> = big
            .facets
            .iter()
            .filter(|f| dot_qi(&bq, &f.normal) > hulls[0].support_min(&f.normal))
            .map(|f| f.normal.clone())
            .collect();
        if expected != secondary_dirs {
            return Err(ResultantError::Internal(format!(
                "secondary cells {secondary_dirs:?} disagree with facet normals {expected:?}"
            )));
        }

        let located: Vec<usize> = points.iter().map(|p| mac.locate(&to_q(p))).collect::<std::result::Result<_, _>>()?;
        let heights: Vec<Rat> = points.iter().map(|p| mac.height(&to_q(p))).collect();
        let mut assign: Vec<Option<Assign>> = vec![None; points.len()];
        let mut cell_of: Vec<LevelCell> = vec![LevelCell::Primary; points.len()];

        let prim_pts: Vec<usize> = (0..points.len()).filter(|&k| located[k] == primary).collect();
        if !prim_pts.is_empty() {
            let dec = self.primary_decomposition(lvl, &b0, depth)?;
            for &k in &prim_pts {
                let x = sub_q(&to_q(&points[k]), &bq);
                let c = &dec.cells[dec.locate(&x)?];
                let point_face = (1..=r).rev().find(|&j| c.faces[j - 1].len() == 1);
                assign[k] = Some(match point_face {
                    Some(j) => {
                        let s = &lvl.supports[j];
                        Assign { poly: s.poly, id: s.ids[c.faces[j - 1][0]], mixed: false }
                    }
                    None => Assign { poly: s0.poly, id: s0.ids[b0_idx], mixed: true },
                });
            }
        }

        let mut reports = Vec::new();
        for (ci, cell) in mac.cells.iter().enumerate() {
            if ci == primary {
                continue;
            }
            let members: Vec<usize> = (0..points.len()).filter(|&k| located[k] == ci).collect();
            let v = primitive_direction(&cell.w);
            for &k in &members {
                cell_of[k] = LevelCell::Secondary(v.clone());
            }
            let report = self.secondary(lvl, &hulls, cell, &v, &b0, &points, &members, &mut assign, depth)?;
            reports.push((v, report));
        }

        let assign: Vec<Assign> = assign
            .into_iter()
            .map(|a| a.ok_or_else(|| ResultantError::Internal("unassigned point".into())))
            .collect::<Result<_>>()?;
        Ok(LevelOut { points, assign, cell_of, reports, heights, b0: (s0.poly, s0.ids[b0_idx]) })
    }

    #[allow(clippy::too_many_arguments)]
    fn secondary(
        &mut self,
        lvl: &Level,
        hulls: &[RationalPolytope],
        cell: &crate::subdivision::MixedCell,
        v: &IVec,
        b0: &IVec,
        points: &[IVec],
        members: &[usize],
        assign: &mut [Option<Assign>],
        depth: usize,
    ) -> Result<CellReport> {
        let r = lvl.dim;
        let facet_sets: Vec<LevelSupport> = (1..=r)
            .map(|j| {
                let s = &lvl.supports[j];
                LevelSupport {
                    poly: s.poly,
                    ids: cell.faces[j].iter().map(|&i| s.ids[i]).collect(),
                    pts: cell.faces[j].iter().map(|&i| s.pts[i].clone()).collect(),
                }
            })
            .collect();
        let family: Vec<&[IVec]> = facet_sets.iter().map(|s| s.pts.as_slice()).collect();
        let ea = essential_of_family(&family);
        let admissible = ea.essential.len() == 1;
        let chosen = ea
            .essential
            .first()
            .cloned()
            .ok_or_else(|| ResultantError::Internal("facet family without essential subfamily".into()))?;
        let orig_chosen: Vec<usize> = chosen.iter().map(|&j| facet_sets[j].poly).collect();
        if !admissible {
            self.diagnostics.push(format!(
                "secondary cell with normal {:?} at depth {depth} has {} essential facet subfamilies; using {:?} and marking its rows non-mixed",
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                ea.essential.len(),
                orig_chosen
            ));
        }
        let k = chosen.len();
        let sub_sets: Vec<&[IVec]> = chosen.iter().map(|&j| facet_sets[j].pts.as_slice()).collect();
        let dprime = AffineLattice::of_sum(&sub_sets).linear();
        if dprime.rank() + 1 != k {
            return Err(ResultantError::Internal("essential subfamily has unexpected rank".into()));
        }
        let oprime = sub_sets.iter().fold(vec![Int::zero(); r], |acc, s| add_i(&acc, &s[0]));

        // Q̃_v: the face of S_0 with b0, the non-chosen facets, and the face of Q.
        let face0: Vec<IVec> = cell.faces[0].iter().map(|&i| lvl.supports[0].pts[i].clone()).collect();
        let mut qt_parts: Vec<RationalPolytope> = vec![hull_of(&face0)];
        for j in 0..r {
            if !chosen.contains(&j) {
                qt_parts.push(hull_of(&facet_sets[j].pts));
            }
        }
        let qface: Vec<QVec> = cell.faces[r + 1].iter().map(|&i| lvl.q.vertices[i].clone()).collect();
        qt_parts.push(convex_hull(&qface)?);
        let refs: Vec<&RationalPolytope> = qt_parts.iter().collect();
        let qtilde = minkowski_sum(&refs);
        let (ineqs, eqs) = qtilde.h_description();

        // Slices.
        let mut classes: BTreeMap<IVec, Vec<usize>> = BTreeMap::new();
        for &m in members {
            let t = dprime.coset_rep(&sub_i(&points[m], &oprime));
            classes.entry(t).or_default().push(m);
        }
        let sub_coords = FullRankCoords { lattice: dprime.clone() };
        let sub_supports: Vec<LevelSupport> = chosen
            .iter()
            .map(|&j| {
                let s = &facet_sets[j];
                LevelSupport {
                    poly: s.poly,
                    ids: s.ids.clone(),
                    pts: s.pts.iter().map(|a| sub_coords.forward_vector(&sub_i(a, &s.pts[0])).expect("in D'")).collect(),
                }
            })
            .collect();

        let mut slice_results: Vec<(Rat, IVec, Vec<(usize, Assign)>)> = Vec::new();
        for (t, cls) in &classes {
            let tq = to_q(t);
            let sub_q_poly = if k == 1 {
                if !qtilde.contains(&tq) {
                    return Err(ResultantError::Internal("slice misses the cell".into()));
                }
                RationalPolytope::point(vec![])
            } else {
                let basis: Vec<IVec> = dprime.basis.clone();
                let project = |a: &QVec| -> QVec { basis.iter().map(|b| dot_qi(a, b)).collect() };
                let sub_ineqs: Vec<(QVec, Rat)> =
                    ineqs.iter().map(|(a, b)| (project(a), b - crate::arith::dot_q(&tq, a))).collect();
                let sub_eqs: Vec<(QVec, Rat)> =
                    eqs.iter().map(|(a, b)| (project(a), b - crate::arith::dot_q(&tq, a))).collect();
                from_inequalities(k - 1, &sub_ineqs, &sub_eqs)
                    .ok_or_else(|| ResultantError::Internal("empty slice".into()))?
            };
            let sub = Level { dim: k - 1, supports: sub_supports.clone(), q: sub_q_poly };
            let out = self.solve(&sub, depth + 1)?;
            let base = add_i(&oprime, t);
            let mut got: Vec<(IVec, Assign)> = out
                .points
                .iter()
                .zip(out.assign)
                .map(|(y, a)| (add_i(&base, &sub_coords.inverse_vector(y)), a))
                .collect();
            got.sort_by(|a, b| a.0.cmp(&b.0));
            let mut want: Vec<usize> = cls.clone();
            want.sort_by(|&a, &b| points[a].cmp(&points[b]));
            if got.len() != want.len() || got.iter().zip(&want).any(|(g, &w)| g.0 != points[w]) {
                return Err(ResultantError::Internal(format!(
                    "slice at {t:?} has {} sub-problem points but {} cell points",
                    got.len(),
                    want.len()
                )));
            }
            let level = dot_qi(&to_q(&points[want[0]]), v);
            slice_results.push((level, t.clone(), want.into_iter().zip(got.into_iter().map(|g| g.1)).collect()));
        }

        let multiplicity = if admissible { self.multiplicity(&facet_sets, &chosen, &face0, b0, v, r)? } else { Int::zero() };
        if Int::from(slice_results.len()) < multiplicity {
            return Err(ResultantError::Internal(format!(
                "secondary cell has {} slices but multiplicity {multiplicity}",
                slice_results.len()
            )));
        }
        slice_results.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        if self.opts.slice_choice == SliceChoice::Highest {
            slice_results.reverse();
        }
        let keep: usize = usize::try_from(&multiplicity).unwrap_or(usize::MAX);
        let mut mixed_points = 0;
        for (si, (_, _, pts)) in slice_results.iter().enumerate() {
            for (m, a) in pts {
                let mut a = a.clone();
                a.mixed = a.mixed && si < keep;
                if a.mixed {
                    mixed_points += 1;
                }
                assign[*m] = Some(a);
            }
        }
        let _ = hulls;
        Ok(CellReport {
            v: v.clone(),
            admissible,
            essential: orig_chosen,
            multiplicity,
            slices: slice_results.len(),
            points: members.len(),
            mixed_points,
        })
    }

    /// Width of `conv(b0 ∪ face of A_0)` along `v`, times the index of the
    /// facet lattice in `v^⊥`, times the mixed volume of the projected
    /// non-essential facets.
    fn multiplicity(
        &self,
        facet_sets: &[LevelSupport],
        chosen: &[usize],
        face0: &[IVec],
        b0: &IVec,
        v: &IVec,
        r: usize,
    ) -> Result<Int> {
        let mut f0 = face0.to_vec();
        if !f0.contains(b0) {
            f0.push(b0.clone());
        }
        let width = support_width(&hull_of(&f0), v);
        if !width.is_integer() {
            return Err(ResultantError::Internal("fractional width".into()));
        }
        let all_sets: Vec<&[IVec]> = facet_sets.iter().map(|s| s.pts.as_slice()).collect();
        let l_all = AffineLattice::of_sum(&all_sets).linear();
        let l_v = orthogonal_lattice(v);
        let index = lattice_index(&l_all, &l_v).map_err(ResultantError::Internal)?;
        let k = chosen.len();
        let eprime = if k == r {
            Int::one()
        } else {
            let sub_sets: Vec<&[IVec]> = chosen.iter().map(|&j| facet_sets[j].pts.as_slice()).collect();
            let dprime = AffineLattice::of_sum(&sub_sets).linear();
            let od = orthogonal_decomposition(&dprime, &l_all).map_err(ResultantError::Internal)?;
            let projected: Vec<RationalPolytope> = (0..r)
                .filter(|j| !chosen.contains(j))
                .map(|j| {
                    let s = &facet_sets[j].pts;
                    let pts: Vec<IVec> =
                        s.iter().map(|a| od.project(&sub_i(a, &s[0])).expect("in facet lattice")).collect();
                    hull_of(&pts)
                })
                .collect();
            let refs: Vec<&RationalPolytope> = projected.iter().collect();
            mixed_volume(&refs, &AffineLattice::standard(od.quotient_rank()))?
        };
        Ok(width.to_integer() * index * eprime)
    }
}

/// Sylvester-type matrix for an essential family with extra polytope `Q`.
pub fn build_general(system: &System, q: &RationalPolytope, opts: &BuildOptions) -> Result<ResultantMatrix> {
    let ea = analyze_essential(system);
    if ea.codim != 1 || ea.essential != vec![(0..=system.n).collect::<Vec<_>>()] {
        return Err(ResultantError::NotEssential { codim: ea.codim, essential: ea.essential });
    }
    if q.ambient_dim != system.n {
        return Err(ResultantError::InvalidInput("Q has the wrong dimension".into()));
    }
    let n = system.n;
    let sets: Vec<&[IVec]> = system.supports.iter().map(Vec::as_slice).collect();
    let diff = AffineLattice::of_sum(&sets).linear();
    let coords = FullRankCoords { lattice: diff };
    let shift = system.supports.iter().fold(vec![Int::zero(); n], |acc, s| add_i(&acc, &s[0]));
    let supports: Vec<LevelSupport> = system
        .supports
        .iter()
        .enumerate()
        .map(|(i, s)| LevelSupport {
            poly: i,
            ids: (0..s.len()).collect(),
            pts: s.iter().map(|a| coords.forward_vector(&sub_i(a, &s[0])).expect("in lattice")).collect(),
        })
        .collect();
    let qverts: Vec<QVec> = q
        .vertices
        .iter()
        .map(|x| coords.forward_vector_rational(x).ok_or(ResultantError::Internal("Q outside span".into())))
        .collect::<Result<_>>()?;
    let level = Level { dim: n, supports, q: convex_hull(&qverts)? };
    if let Some(user) = &opts.liftings {
        // Q's lifting is aligned with the lexicographic vertex order in the
        // original coordinates; reorder it to the level's vertex order.
        let mut pairs: Vec<(QVec, Rat)> = Vec::new();
        if user.q.len() != q.vertices.len() {
            return Err(ResultantError::InvalidInput(format!("the lifting of Q needs {} values", q.vertices.len())));
        }
        for (x, h) in q.vertices.iter().zip(&user.q) {
            pairs.push((coords.forward_vector_rational(x).expect("in span"), h.clone()));
        }
        let reordered: Vec<Rat> = level
            .q
            .vertices
            .iter()
            .map(|y| pairs.iter().find(|(p, _)| p == y).map(|p| p.1.clone()).expect("vertex"))
            .collect();
        let mut o = opts.clone();
        o.liftings = Some(UserLifting { supports: user.supports.clone(), q: reordered });
        return run(system, &level, &o, &coords, &shift);
    }
    run(system, &level, opts, &coords, &shift)
}

fn run(
    system: &System,
    level: &Level,
    opts: &BuildOptions,
    coords: &FullRankCoords,
    shift: &IVec,
) -> Result<ResultantMatrix> {
    let mut ctx = Ctx { system, opts, rng: ChaCha8Rng::seed_from_u64(opts.seed), diagnostics: Vec::new() };
    let out = ctx.solve(level, 0)?;
    let to_orig = |y: &IVec| add_i(shift, &coords.inverse_vector(y));
    let normal_orig = |v: &IVec| coords.pullback_functional(v);
    let mut order: Vec<usize> = (0..out.points.len()).collect();
    let orig_pts: Vec<IVec> = out.points.iter().map(to_orig).collect();
    order.sort_by(|&a, &b| orig_pts[a].cmp(&orig_pts[b]));
    let points: Vec<IVec> = order.iter().map(|&k| orig_pts[k].clone()).collect();
    let rows: Vec<RowContent> = order
        .iter()
        .map(|&k| {
            let a = &out.assign[k];
            RowContent {
                poly: a.poly,
                point: a.id,
                exponent: system.supports[a.poly][a.id].clone(),
                mixed: a.mixed,
                cell: match &out.cell_of[k] {
                    LevelCell::Primary => CellTag::Primary,
                    LevelCell::Secondary(v) => CellTag::Secondary(normal_orig(v)),
                },
            }
        })
        .collect();
    let heights: Vec<Rat> = order.iter().map(|&k| out.heights[k].clone()).collect();
    let matrix = fill_matrix(system, &points, &rows)?;
    let cells = out
        .reports
        .into_iter()
        .map(|(v, mut rep)| {
            rep.v = normal_orig(&v);
            rep
        })
        .collect();
    Ok(ResultantMatrix {
        system: system.clone(),
        points,
        rows,
        matrix,
        b0: system.supports[out.b0.0][out.b0.1].clone(),
        cells,
        heights,
        diagnostics: ctx.diagnostics,
    })
}

/// Row `p` holds the coefficients of `x^{p−a} f_i`.
fn fill_matrix(system: &System, points: &[IVec], rows: &[RowContent]) -> Result<SymbolMatrix> {
    let index: HashMap<&IVec, usize> = points.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let mut m = SymbolMatrix::new(points.len(), system.nvars());
    for (r, (p, rc)) in points.iter().zip(rows).enumerate() {
        let base = sub_i(p, &rc.exponent);
        for (j, b) in system.supports[rc.poly].iter().enumerate() {
            let col = add_i(&base, b);
            let c = *index.get(&col).ok_or_else(|| {
                ResultantError::SylvesterViolation(format!("row {p:?} of f{} reaches {col:?}", rc.poly))
            })?;
            m.set(r, c, system.var_index(rc.poly, j));
        }
    }
    Ok(m)
}

/// A random perturbation vector with small denominators.
pub fn random_delta(n: usize, rng: &mut ChaCha8Rng) -> QVec {
    const PRIMES: [i64; 8] = [97, 101, 103, 107, 109, 113, 127, 131];
    (0..n)
        .map(|_| {
            let d = PRIMES[rng.gen_range(0..PRIMES.len())];
            rat(rng.gen_range(1..d), d)
        })
        .collect()
}

/// Builds in the unmixed case with a random `δ`, drawing a fresh `δ` when a
/// lattice point lands on a cell boundary.
pub fn build_unmixed_random(system: &System, lambda: &Rat, opts: &BuildOptions, attempts: usize) -> Result<(ResultantMatrix, QVec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let mut last = None;
    for _ in 0..attempts.max(1) {
        let delta = random_delta(system.n, &mut rng);
        match build_unmixed(system, lambda, &delta, opts) {
            Ok(m) => return Ok((m, delta)),
            Err(ResultantError::BoundaryPoint(p)) => last = Some(ResultantError::BoundaryPoint(p)),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `det 𝕄 / det 𝔼`, normalized so the leading term is positive.
pub fn extract_resultant(m: &ResultantMatrix, size_cap: usize) -> Result<SparsePoly> {
    let dm = symbolic_determinant(&m.matrix, size_cap)?;
    let de = symbolic_determinant(&m.minor(), size_cap)?;
    if de.is_zero() {
        return Err(ResultantError::Internal("the extraneous minor vanishes".into()));
    }
    Ok(dm.exact_div(&de)?.canonical_sign())
}

/// Leading-term structure of `det 𝕄(t)` under the Macaulay lifting.
///
/// Keeps the entries whose exponent equals the height of their column and
/// groups the points by cell, the primary cell first and then the secondary
/// cells in report order. Returns the block sizes, the filtered matrix and
/// the point order, or `None` when the filtered matrix is not block
/// triangular in that grouping.
pub fn leading_blocks(m: &ResultantMatrix) -> Option<(Vec<usize>, SymbolMatrix, Vec<usize>)> {
    let b0_id = m.system.point_index(0, &m.b0)?;
    let omega = |i: usize, j: usize| if i == 0 && j == b0_id { Rat::one() } else { Rat::zero() };
    let n = m.dim();
    let mut filtered = SymbolMatrix::new(n, m.matrix.nvars);
    for (r, rc) in m.rows.iter().enumerate() {
        let a_id = rc.point;
        for &(c, sym) in &m.matrix.rows[r] {
            let b_id = sym - m.system.var_index(rc.poly, 0);
            let e = omega(rc.poly, b_id) + &m.heights[r] - omega(rc.poly, a_id);
            if e == m.heights[c] {
                filtered.set(r, c, sym);
            }
        }
    }
    let group_key = |k: usize| match &m.rows[k].cell {
        CellTag::Primary => 0,
        CellTag::Secondary(v) => 1 + m.cells.iter().position(|c| &c.v == v).unwrap_or(m.cells.len()),
    };
    let group_of: Vec<usize> = (0..n).map(group_key).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| group_of[a].cmp(&group_of[b]).then(m.heights[a].cmp(&m.heights[b])).then(a.cmp(&b)));
    let mut groups: Vec<usize> = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        if k == 0 || group_of[i] != group_of[order[k - 1]] {
            groups.push(0);
        }
        *groups.last_mut().unwrap() += 1;
    }
    let upper = (0..n).all(|r| filtered.rows[r].iter().all(|&(c, _)| group_of[c] >= group_of[r]));
    let lower = (0..n).all(|r| filtered.rows[r].iter().all(|&(c, _)| group_of[c] <= group_of[r]));
    if !upper && !lower {
        return None;
    }
    Some((groups, filtered, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ivec;

    fn sys(s: &[&[&[i64]]]) -> System {
        System::new(s.iter().map(|a| a.iter().map(|p| ivec(p)).collect()).collect()).unwrap()
    }

    #[test]
    fn essential_family_of_degenerate_system() {
        // Two polynomials in x only, one in y.
        let s = sys(&[&[&[0, 0], &[1, 0]], &[&[0, 0], &[2, 0]], &[&[0, 0], &[0, 1]]]);
        let ea = analyze_essential(&s);
        assert_eq!(ea.codim, 1);
        assert_eq!(ea.essential, vec![vec![0, 1]]);
        let red = reduce_to_essential(&s).unwrap();
        assert_eq!(red.original_indices, vec![0, 1]);
        assert_eq!(red.system.n, 1);
        assert_eq!(resultant_degrees(&s), vec![Int::from(2), Int::from(1), Int::zero()]);
    }

    #[test]
    fn trivial_resultant_has_high_codimension() {
        let s = sys(&[&[&[0, 0], &[1, 0]], &[&[0, 0], &[1, 0]], &[&[0, 0], &[1, 0]]]);
        assert_eq!(analyze_essential(&s).codim, 2);
        assert_eq!(resultant_degrees(&s), vec![Int::zero(); 3]);
    }

    #[test]
    fn unmixed_detection() {
        let s = sys(&[&[&[0], &[2], &[4]], &[&[4], &[8]]]);
        let (p, ks) = detect_unmixed(&s).unwrap();
        assert_eq!(p.vertices, vec![vec![rat(0, 1)], vec![rat(1, 1)]]);
        assert_eq!(ks, vec![rat(4, 1), rat(4, 1)]);
        let t = sys(&[&[&[0, 0], &[1, 0], &[0, 1]], &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], &[&[0, 0], &[1, 0], &[0, 1]]]);
        assert!(detect_unmixed(&t).is_none());
    }

    #[test]
    fn rotation_moves_polynomial_to_front() {
        let s = sys(&[&[&[0], &[1]], &[&[0], &[2]]]);
        let r = rotate_distinguished(&s, 1);
        assert_eq!(r.supports[0], vec![ivec(&[0]), ivec(&[2])]);
    }
}
