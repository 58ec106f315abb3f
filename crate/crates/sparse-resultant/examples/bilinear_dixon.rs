//! Three bilinear polynomials: the 16x16 matrix with explicit liftings, and
//! the resultant compared with Dixon's 6x6 determinant.

use sparse_resultant::cli::{build, build_table, parse_problem};
use sparse_resultant::oracles::{dixon_bilinear, dixon_symbols};
use sparse_resultant::resultant::extract_resultant;
use sparse_resultant::symbolic::symbolic_determinant;

fn main() {
    let problem = parse_problem(include_str!("../fixtures/bilinear.json")).unwrap();
    let (m, _) = build(&problem).unwrap();
    print!("{}", build_table(&m));

    let names = m.system.symbol_names();
    let de = symbolic_determinant(&m.minor(), 20).unwrap();
    println!("det E = {}", de.render(&names));
    let res = extract_resultant(&m, 20).unwrap();
    let dixon = dixon_bilinear(&dixon_symbols(&m.system).unwrap(), m.system.nvars()).unwrap();
    println!("Res has {} terms; agrees with Dixon: {}", res.num_terms(), res.equal_up_to_sign(&dixon));
}
