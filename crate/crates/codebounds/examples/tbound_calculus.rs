//! The recursive bound calculus for multiply constant-weight codes.
//!
//! Evaluates block-structured specifications `w1:n1,w2:n2,...@d` and prints
//! the derivation chain. The default spec is the two-block shape whose cap
//! of 26 feeds the worked sphere-cap example at (27,8,13).
//!
//! ```sh
//! cargo run --release --example tbound_calculus [SPEC]
//! ```

use codebounds::tbounds::{BoundEngine, McwSpec};

fn main() {
    let spec: McwSpec = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "2:13,3:14@8".to_string())
        .parse()
        .expect("spec syntax: w1:n1,w2:n2@d");

    let engine = BoundEngine::default();
    let record = engine.upper_bound(&spec);
    println!(
        "T({spec}) <= {}   [rule {}, {}]",
        record.upper, record.rule, record.provenance
    );
    println!("derivation:");
    for line in engine.derivation_chain(&spec) {
        println!("  {line}");
    }

    // The five caps quoted for the worked (27,8,13) example.
    println!("\nsphere caps at (27,8,13):");
    for (label, s) in [
        ("Q_i ", "11:13,11:14@8"),
        ("Q_j ", "12:13,12:14@8"),
        ("Q_ij", "2:12,3:12@8"),
        ("Q_ji", "1:11,2:11@8"),
        ("Q_k ", "13:13,13:14@8"),
    ] {
        let spec: McwSpec = s.parse().unwrap();
        let r = engine.upper_bound(&spec);
        println!("  {label} = {:<3} from T({})", r.upper.to_string(), spec);
    }
    println!("({} memoised cells)", engine.memo_len());
}
