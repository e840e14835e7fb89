//! Refining bounds through size-parity feasibility sweeps.
//!
//! An odd candidate size (or one that is 2 mod 4) satisfies sharpened
//! Krawtchouk inequalities; sweeping candidate sizes downward discards the
//! values those inequalities refute. Each check is an exact rational
//! feasibility program, so a refuted size is refuted rigorously.
//!
//! ```sh
//! cargo run --release --example parity_sweep [N D]
//! ```

use codebounds::bounds::{sweep_unrestricted_bound, unrestricted_bound, Method};
use codebounds::sdp::SolveOptions;
use codebounds::tbounds::BoundEngine;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(13);
    let d: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);

    let engine = BoundEngine::default();
    let base = unrestricted_bound(n, d, Method::Sdp, &engine, &SolveOptions::default()).unwrap();
    println!(
        "A({n},{d}) base bound {} (certified value {:.4})",
        base.bound, base.value
    );
    let swept = sweep_unrestricted_bound(n, d, &base.bound);
    if swept < base.bound {
        println!("parity sweep refutes sizes {}..={}", &swept + 1u32, base.bound);
    }
    println!("A({n},{d}) <= {swept}");
}
