//! Two univariate polynomials on the lattice 2Z: the matrix, its extraneous
//! minor, and a comparison with the Sylvester resultant.

use sparse_resultant::arith::{int, rat};
use sparse_resultant::cli::build_table;
use sparse_resultant::oracles::sylvester_resultant;
use sparse_resultant::resultant::{build_unmixed, extract_resultant, BuildOptions, System};

fn main() {
    let pts = |v: &[i64]| v.iter().map(|&x| vec![int(x)]).collect::<Vec<_>>();
    let names = vec![vec!["a", "b", "c"], vec!["d", "e"]];
    let names = names.into_iter().map(|v| v.into_iter().map(String::from).collect()).collect();
    let system = System::with_names(vec![pts(&[0, 2, 4]), pts(&[4, 8])], names).unwrap();
    let m = build_unmixed(&system, &rat(5, 2), &[rat(1, 3)], &BuildOptions::default()).unwrap();
    print!("{}", build_table(&m));

    let res = extract_resultant(&m, 20).unwrap();
    let v = |i, j| system.var_index(i, j);
    let syl = sylvester_resultant(
        &[(int(0), v(0, 0)), (int(2), v(0, 1)), (int(4), v(0, 2))],
        &[(int(4), v(1, 0)), (int(8), v(1, 1))],
        system.nvars(),
    )
    .unwrap();
    println!("Res = {}", res.render(&system.symbol_names()));
    println!("agrees with Sylvester: {}", res.equal_up_to_sign(&syl));
}
