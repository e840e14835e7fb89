//! Soundness spot-check against exhaustive search.
//!
//! For every (n,d) and (n,d,w) up to a small length, computes the exact
//! optimum by branch and bound and checks that both programming bounds
//! dominate it, and that the semidefinite bound never exceeds the linear
//! programming bound.
//!
//! ```sh
//! cargo run --release --example verify_dominance [MAX_N]
//! ```

use codebounds::bounds::oracle_dominance_sweep;
use codebounds::sdp::SolveOptions;
use std::time::Instant;

fn main() {
    let max_n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6);
    let start = Instant::now();
    let failures = oracle_dominance_sweep(max_n, max_n, 20_000_000, &SolveOptions::default())
        .expect("sweep runs");
    if failures.is_empty() {
        println!("all bounds dominate the exact optima up to n = {max_n} ({:?})", start.elapsed());
    } else {
        println!("violations found:");
        for f in failures {
            println!("  {f}");
        }
        std::process::exit(1);
    }
}
