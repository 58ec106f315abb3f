//! Dense polynomials of degrees 1, 2 and 3 in two variables: the sparse
//! build against Macaulay's matrix for homogeneous forms.

use sparse_resultant::cli::{build, build_table, cmd_classical, parse_problem};
use sparse_resultant::resultant::extract_resultant;
use sparse_resultant::symbolic::symbolic_determinant;

fn main() {
    let problem = parse_problem(include_str!("../fixtures/degree_123.json")).unwrap();
    let (m, _) = build(&problem).unwrap();
    print!("{}", build_table(&m));
    let names = m.system.symbol_names();
    println!("det E = {}", symbolic_determinant(&m.minor(), 20).unwrap().render(&names));
    println!("Res has {} terms", extract_resultant(&m, 20).unwrap().num_terms());

    let report = cmd_classical(&[1, 2, 3], 4, 0, 20).unwrap();
    println!("Macaulay matrix {0}x{0}, quotients agree: {1}", report.size, report.agree);
}
