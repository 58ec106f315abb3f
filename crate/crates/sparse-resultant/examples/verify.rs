//! The property battery of `resolve verify` on every bundled fixture.

use sparse_resultant::cli::{cmd_verify, parse_problem, verify_table};

const FIXTURES: [(&str, &str); 5] = [
    ("one_dim", include_str!("../fixtures/one_dim.json")),
    ("bilinear", include_str!("../fixtures/bilinear.json")),
    ("degree_123", include_str!("../fixtures/degree_123.json")),
    ("square_and_segments", include_str!("../fixtures/square_and_segments.json")),
    ("trinomials", include_str!("../fixtures/trinomials.json")),
];

fn main() {
    for (name, text) in FIXTURES {
        let problem = parse_problem(text).unwrap();
        let report = cmd_verify(&problem, 1, 5).unwrap();
        println!("== {name}");
        print!("{}", verify_table(&report));
    }
}
