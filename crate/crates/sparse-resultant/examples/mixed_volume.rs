//! Mixed volumes of lattice polygons, by inclusion-exclusion and by the
//! fully mixed cells of a random tight subdivision.

use sparse_resultant::arith::ivec;
use sparse_resultant::geometry::mixed_volume;
use sparse_resultant::lattice::AffineLattice;
use sparse_resultant::oracles::{mixed_volume_by_cells, support_polytope};

fn main() {
    let z2 = AffineLattice::standard(2);
    let square = support_polytope(&[ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, 1])]);
    let q0 = support_polytope(&[ivec(&[0, 0]), ivec(&[2, 2]), ivec(&[1, 3])]);
    let q1 = support_polytope(&[ivec(&[0, 0]), ivec(&[2, 0]), ivec(&[1, 2])]);
    let q2 = support_polytope(&[ivec(&[3, 0]), ivec(&[1, 1])]);
    for (label, a, b) in [("square, square", &square, &square), ("Q0, Q1", &q0, &q1), ("Q0, Q2", &q0, &q2), ("Q1, Q2", &q1, &q2)] {
        let ie = mixed_volume(&[a, b], &z2).unwrap();
        let cells = mixed_volume_by_cells(&[a, b], &z2, 1).unwrap();
        println!("MV({label}) = {ie} (mixed cells: {cells})");
    }
}
