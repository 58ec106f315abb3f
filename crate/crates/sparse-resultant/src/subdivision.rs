//! Coherent mixed decompositions from liftings.
//!
//! Every summand is a finite point set with a rational height per point. The
//! cells are the projections of the upper facets of the lifted Minkowski sum,
//! each recorded together with the subset of points of every summand that
//! spans its face.

use crate::arith::{add_q, dot_q, lex_cmp_q, primitive_direction, rat, rat_int, sub_q, IVec, QVec, Rat};
use crate::geometry::{convex_hull, minkowski_sum, RationalPolytope};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct Summand {
    pub points: Vec<QVec>,
    pub lifts: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct MixedCell {
    /// Indices of the points of each summand spanning the face.
    pub faces: Vec<Vec<usize>>,
    pub polytope: RationalPolytope,
    /// Upper facet `⟨x, w⟩ + β h ≥ offset` of the lifted sum, `β < 0`.
    pub w: QVec,
    pub beta: Rat,
    pub offset: Rat,
}

impl MixedCell {
    /// The primitive integer direction of `w`, zero for a horizontal facet.
    pub fn direction(&self) -> IVec {
        primitive_direction(&self.w)
    }

    pub fn face_dims(&self, summands: &[Summand]) -> Vec<usize> {
        self.faces
            .iter()
            .zip(summands)
            .map(|(f, s)| {
                let pts: Vec<QVec> = f.iter().map(|&i| s.points[i].clone()).collect();
                convex_hull(&pts).expect("nonempty face").dim
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub dim: usize,
    pub summands: Vec<Summand>,
    pub cells: Vec<MixedCell>,
}

#[derive(Debug, thiserror::Error)]
pub enum SubdivisionError {
    #[error("Minkowski sum is not full dimensional")]
    NotFullDimensional,
    #[error("lifting is not tight")]
    NotTight,
    #[error("no tight lifting found after {0} attempts")]
    RetriesExhausted(usize),
    #[error("point {0:?} lies on the boundary of a cell")]
    BoundaryPoint(Vec<String>),
}

fn lifted(s: &Summand) -> Vec<QVec> {
    s.points
        .iter()
        .zip(&s.lifts)
        .map(|(p, h)| {
            let mut v = p.clone();
            v.push(h.clone());
            v
        })
        .collect()
}

pub fn coherent_decomposition(summands: &[Summand]) -> Result<Decomposition, SubdivisionError> {
    let d = summands[0].points[0].len();
    let mut acc: Vec<QVec> = convex_hull(&lifted(&summands[0])).expect("nonempty").vertices;
    for s in &summands[1..] {
        let ls = convex_hull(&lifted(s)).expect("nonempty").vertices;
        let mut next = Vec::with_capacity(acc.len() * ls.len());
        for a in &acc {
            for b in &ls {
                next.push(add_q(a, b));
            }
        }
        acc = convex_hull(&next).expect("nonempty").vertices;
    }
    let hull = convex_hull(&acc).expect("nonempty");
    let mut uppers: Vec<(QVec, Rat, Rat)> = Vec::new();
    if hull.dim == d + 1 {
        for f in &hull.facets {
            if f.normal[d].is_negative() {
                let wq: QVec = f.normal.iter().map(rat_int).collect();
                uppers.push((wq[..d].to_vec(), wq[d].clone(), f.offset.clone()));
            }
        }
    } else if hull.dim == d {
        let (e, c) = hull
            .equations
            .iter()
            .find(|(e, _)| !e[d].is_zero())
            .ok_or(SubdivisionError::NotFullDimensional)?;
        let sign = if e[d].is_negative() { rat(1, 1) } else { rat(-1, 1) };
        let wq: QVec = e.iter().map(|x| rat_int(x) * &sign).collect();
        uppers.push((wq[..d].to_vec(), wq[d].clone(), c * &sign));
    } else {
        return Err(SubdivisionError::NotFullDimensional);
    }
    let mut cells = Vec::with_capacity(uppers.len());
    for (w, beta, offset) in uppers {
        let mut faces = Vec::with_capacity(summands.len());
        let mut polys = Vec::with_capacity(summands.len());
        for s in summands {
            let vals: Vec<Rat> =
                s.points.iter().zip(&s.lifts).map(|(p, h)| dot_q(p, &w) + &beta * h).collect();
            let m = vals.iter().min().expect("nonempty").clone();
            let idx: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] == m).collect();
            let pts: Vec<QVec> = idx.iter().map(|&i| s.points[i].clone()).collect();
            polys.push(convex_hull(&pts).expect("nonempty"));
            faces.push(idx);
        }
        let refs: Vec<&RationalPolytope> = polys.iter().collect();
        let polytope = minkowski_sum(&refs);
        cells.push(MixedCell { faces, polytope, w, beta, offset });
    }
    Ok(Decomposition { dim: d, summands: summands.to_vec(), cells })
}

impl Decomposition {
    /// Every cell has face dimensions summing to the ambient dimension.
    pub fn is_tight(&self) -> bool {
        self.cells.iter().all(|c| c.face_dims(&self.summands).iter().sum::<usize>() == self.dim)
    }

    /// Index of the unique cell whose interior contains `x`.
    pub fn locate(&self, x: &[Rat]) -> Result<usize, SubdivisionError> {
        self.cells
            .iter()
            .position(|c| c.polytope.contains_strictly(x))
            .ok_or_else(|| SubdivisionError::BoundaryPoint(x.iter().map(crate::arith::fmt_rational).collect()))
    }

    /// Upper envelope height at `x` (which must lie in the sum).
    pub fn height(&self, x: &[Rat]) -> Rat {
        self.cells
            .iter()
            .map(|c| (&c.offset - dot_q(x, &c.w)) / &c.beta)
            .min()
            .expect("at least one cell")
    }

    /// Mixed volume of the first `dim` summands read off the cells whose faces
    /// are all edges. Only meaningful when exactly `dim` summands are present.
    pub fn mixed_cells(&self) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].face_dims(&self.summands).iter().all(|&k| k == 1))
            .collect()
    }
}

/// The lifting that raises `b0` to height one and keeps every other point of
/// every summand at zero.
pub fn macaulay_lifting(summands: &[Vec<QVec>], b0_index: usize) -> Vec<Summand> {
    summands
        .iter()
        .enumerate()
        .map(|(j, pts)| Summand {
            points: pts.clone(),
            lifts: (0..pts.len())
                .map(|i| if j == 0 && i == b0_index { rat(1, 1) } else { Rat::zero() })
                .collect(),
        })
        .collect()
}

/// Draws seeded integer liftings in `[0, 64 m²]` until the decomposition is
/// tight. When `tilt` is given, the final summand additionally receives the
/// linear function `W·⟨q, tilt⟩` with `W` dominating the noise.
pub fn generic_tight_lifting(
    supports: &[Vec<QVec>],
    tilt: Option<&[Rat]>,
    rng: &mut ChaCha8Rng,
    max_retries: usize,
) -> Result<Decomposition, SubdivisionError> {
    let m: usize = supports.iter().map(Vec::len).sum();
    let bound = 64 * (m as i64) * (m as i64);
    for _ in 0..max_retries {
        let last = supports.len() - 1;
        let summands: Vec<Summand> = supports
            .iter()
            .enumerate()
            .map(|(j, pts)| {
                let lifts = pts
                    .iter()
                    .map(|p| {
                        let noise = rat(rng.gen_range(0..=bound), 1);
                        match tilt {
                            Some(t) if j == last => rat(16 * bound, 1) * dot_q(p, t) + noise,
                            _ => noise,
                        }
                    })
                    .collect();
                Summand { points: pts.clone(), lifts }
            })
            .collect();
        let dec = coherent_decomposition(&summands)?;
        if dec.is_tight() {
            return Ok(dec);
        }
    }
    Err(SubdivisionError::RetriesExhausted(max_retries))
}

/// Lexicographically sorted copy, for deterministic reporting.
pub fn sorted_points(pts: &[QVec]) -> Vec<QVec> {
    let mut v = pts.to_vec();
    v.sort_by(|a, b| lex_cmp_q(a, b));
    v
}

/// Translation of every point of a summand.
pub fn shift_points(pts: &[QVec], t: &[Rat]) -> Vec<QVec> {
    pts.iter().map(|p| sub_q(p, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qvec;
    use rand::SeedableRng;

    fn square() -> Vec<QVec> {
        vec![qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[1, 1])]
    }

    #[test]
    fn macaulay_lifting_has_primary_cell() {
        let sums = macaulay_lifting(&[square(), square(), square()], 0);
        let dec = coherent_decomposition(&sums).unwrap();
        let primary: Vec<&MixedCell> = dec.cells.iter().filter(|c| c.faces[0] == vec![0]).collect();
        assert_eq!(primary.len(), 1);
        assert_eq!(primary[0].polytope.vertices.len(), 4);
        let x = qvec(&[1, 1]);
        assert_eq!(dec.height(&x), rat(1, 1));
    }

    #[test]
    fn random_lifting_gives_mixed_volume() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dec = generic_tight_lifting(&[square(), square()], None, &mut rng, 32).unwrap();
        assert!(dec.is_tight());
        let total: Rat = dec
            .mixed_cells()
            .iter()
            .map(|&i| crate::geometry::normalized_volume(&dec.cells[i].polytope, &crate::lattice::AffineLattice::standard(2)).unwrap())
            .sum();
        assert_eq!(total, rat(2, 1));
    }

    #[test]
    fn cells_tile_the_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tri = vec![qvec(&[0, 0]), qvec(&[2, 0]), qvec(&[0, 2]), qvec(&[1, 1])];
        let dec = generic_tight_lifting(&[tri.clone(), square()], None, &mut rng, 32).unwrap();
        let std = crate::lattice::AffineLattice::standard(2);
        let total: Rat = dec
            .cells
            .iter()
            .map(|c| crate::geometry::normalized_volume(&c.polytope, &std).unwrap())
            .sum();
        let sum = minkowski_sum(&[&convex_hull(&tri).unwrap(), &convex_hull(&square()).unwrap()]);
        assert_eq!(total, crate::geometry::normalized_volume(&sum, &std).unwrap());
    }
}
