//! A family with distinct Newton polytopes: essential subfamilies, resultant
//! degrees, and the resultant of three trinomial-like polynomials.

use sparse_resultant::cli::{build, cmd_essential, essential_table, parse_problem};
use sparse_resultant::resultant::extract_resultant;

fn main() {
    let problem = parse_problem(include_str!("../fixtures/trinomials.json")).unwrap();
    print!("{}", essential_table(&cmd_essential(&problem.system)));
    let (m, _) = build(&problem).unwrap();
    println!("matrix {0}x{0}, mixed rows {1:?}", m.dim(), m.mixed_counts());
    for c in &m.cells {
        println!("secondary cell {:?}: {} points, admissible {}", c.v, c.points, c.admissible);
    }
    let res = extract_resultant(&m, 30).unwrap();
    println!("Res ({} terms) = {}", res.num_terms(), res.render(&m.system.symbol_names()));
}
