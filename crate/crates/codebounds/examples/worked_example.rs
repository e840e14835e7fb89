//! Constraint generation for the worked (27,8,13) instance.
//!
//! Derives the index families, fills the sphere-cap table from the bound
//! calculus, and prints the resulting rows over the distance distribution.
//! With the self-derived caps (which agree with the quoted values 26, 1,
//! 20, 1, 1) the two collision rows come out as
//! `B24 + B26 <= 1` and `B22 + 6 B24 + 26 B26 <= 26`.
//!
//! ```sh
//! cargo run --release --example worked_example
//! ```

use codebounds::lp::{build_q_table, h1_families, theorem11_constraint, theorem13_constraints, Bridge};
use codebounds::tbounds::BoundEngine;

fn main() {
    let (n, d, w) = (27usize, 8usize, 13usize);
    let engine = BoundEngine::default();
    let families = h1_families(n, d, w);
    let q = build_q_table(n, d, w, &families, &engine);
    let bridge = Bridge::Cw { w, v: n - w };

    println!("index families at ({n},{d},{w}):");
    for fam in &families {
        println!("  H1 = {:?}, colliding pair: {:?}", fam.set, fam.pair);
    }
    println!("sphere caps:");
    for (i, v) in &q.q {
        println!("  Q_{i} = {v}");
    }
    for ((a, b), v) in &q.pair {
        println!("  Q_({a},{b}) = {v}");
    }
    println!("rows:");
    for fam in &families {
        match fam.pair {
            None => {
                let row = theorem11_constraint(&fam.set, &q, n, d, w).unwrap();
                println!("  {}", bridge.b_space(&row));
            }
            Some((i, j)) => {
                for row in theorem13_constraints(&fam.set, i, j, &q, n, d, w).unwrap() {
                    println!("  {}", bridge.b_space(&row));
                }
            }
        }
    }
}
