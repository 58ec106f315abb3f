//! Sylvester-type matrices whose determinant is a nonzero multiple of the
//! sparse resultant, built from a coherent mixed decomposition of the
//! Minkowski sum of the Newton polytopes.

pub mod arith;
pub mod cli;
pub mod geometry;
pub mod lattice;
pub mod oracles;
pub mod resultant;
pub mod subdivision;
pub mod symbolic;
