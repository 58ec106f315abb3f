//! Invariants of the construction on random essential families.

mod common;

use common::{random_essential_system, random_values, variant};
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sparse_resultant::arith::{int, rat, Int, IVec};
use sparse_resultant::cli::{check_sylvester_shape, Extra, Problem};
use sparse_resultant::geometry::{mixed_volume, RationalPolytope};
use sparse_resultant::lattice::AffineLattice;
use sparse_resultant::oracles::{mixed_volume_by_cells, planted_root_system, support_polytope};
use sparse_resultant::resultant::{
    build_general, build_unmixed_random, extract_resultant, resultant_degrees, BuildOptions, ResultantMatrix, System,
};
use sparse_resultant::symbolic::integer_determinant;

fn general_problem(system: System, seed: u64) -> Problem {
    let n = system.n;
    let q = RationalPolytope::point((0..n).map(|j| rat(1, 97 + 4 * j as i64)).collect());
    Problem { system, extra: Extra::General { q }, opts: BuildOptions { seed, ..BuildOptions::default() } }
}

fn build(p: &Problem) -> ResultantMatrix {
    match &p.extra {
        Extra::General { q } => build_general(&p.system, q, &p.opts).expect("build"),
        Extra::Unmixed { .. } => unreachable!(),
    }
}

fn counts_match(m: &ResultantMatrix) -> bool {
    let counts: Vec<Int> = m.mixed_counts().iter().map(|&c| int(c as i64)).collect();
    counts == resultant_degrees(&m.system)
}

fn square_system(k: i64) -> System {
    let sq: Vec<IVec> = [[0, 0], [k, 0], [0, k], [k, k]].iter().map(|p| vec![int(p[0]), int(p[1])]).collect();
    System::new(vec![sq.clone(), sq.clone(), sq]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rows_are_shifted_supports_and_mixed_rows_count_mixed_volumes(seed in any::<u64>(), two in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let system = random_essential_system(&mut rng, if two { 2 } else { 1 });
        let m = build(&general_problem(system, seed));
        prop_assert!(check_sylvester_shape(&m).is_ok());
        prop_assert!(counts_match(&m));
    }

    #[test]
    fn extraneous_minor_divides_the_determinant(seed in any::<u64>(), two in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let system = random_essential_system(&mut rng, if two { 2 } else { 1 });
        let m = build(&general_problem(system.clone(), seed));
        let mut nonsingular = 0;
        for _ in 0..6 {
            let vals = random_values(system.nvars(), &mut rng);
            let de = integer_determinant(&m.minor().specialize(&vals));
            if de.is_zero() {
                continue;
            }
            nonsingular += 1;
            let dm = integer_determinant(&m.matrix.specialize(&vals));
            prop_assert!(dm.is_multiple_of(&de));
        }
        prop_assert!(nonsingular > 0);
    }

    #[test]
    fn determinant_vanishes_at_planted_roots(seed in any::<u64>(), two in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let system = random_essential_system(&mut rng, if two { 2 } else { 1 });
        let m = build(&general_problem(system.clone(), seed));
        let root = planted_root_system(&system, seed).unwrap();
        prop_assert!(integer_determinant(&m.matrix.specialize(&root.values)).is_zero());
    }

    #[test]
    fn resultant_is_independent_of_the_build_choices(seed in any::<u64>(), two in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let system = random_essential_system(&mut rng, if two { 2 } else { 1 });
        let p = general_problem(system, seed);
        let r0 = extract_resultant(&build(&p), 30).unwrap();
        let r1 = extract_resultant(&build(&variant(&p, 1)), 30).unwrap();
        prop_assert_eq!(r0, r1);
    }

    #[test]
    fn unmixed_builds_satisfy_the_counting_law(k in 1i64..=2, lambda in 0i64..=2, seed in any::<u64>()) {
        let system = square_system(k);
        let opts = BuildOptions { seed, ..BuildOptions::default() };
        let (m, _) = build_unmixed_random(&system, &rat(lambda, 1), &opts, 32).unwrap();
        prop_assert!(counts_match(&m));
        prop_assert!(check_sylvester_shape(&m).is_ok());
    }

    #[test]
    fn mixed_cells_agree_with_inclusion_exclusion(
        a in prop::collection::vec((0i64..4, 0i64..4), 3..6),
        b in prop::collection::vec((0i64..4, 0i64..4), 3..6),
        seed in any::<u64>(),
    ) {
        let pts = |v: &[(i64, i64)]| -> Vec<IVec> { v.iter().map(|&(x, y)| vec![int(x), int(y)]).collect() };
        let (pa, pb) = (support_polytope(&pts(&a)), support_polytope(&pts(&b)));
        prop_assume!(pa.dim == 2 && pb.dim == 2);
        let z2 = AffineLattice::standard(2);
        let ie = mixed_volume(&[&pa, &pb], &z2).unwrap();
        let cells = mixed_volume_by_cells(&[&pa, &pb], &z2, seed).unwrap();
        prop_assert_eq!(ie, cells);
    }
}
