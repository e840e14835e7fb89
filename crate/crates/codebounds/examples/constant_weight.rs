//! Semidefinite bounds for constant-weight codes.
//!
//! The default instance (23,10,9) reproduces the published base value
//! A(23,10,9) <= 82; enabling the constraint families tightens the model
//! with coefficient bounds from the recursive calculus.
//!
//! ```sh
//! cargo run --release --example constant_weight [N D W]
//! ```

use codebounds::bounds::{cw_bound, Method};
use codebounds::sdp::SolveOptions;
use codebounds::tbounds::BoundEngine;
use std::time::Instant;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(23);
    let d: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let w: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(9);

    let engine = BoundEngine::default();
    let opts = SolveOptions::default();
    for method in [Method::Lp, Method::Sdp, Method::SdpPlus] {
        let start = Instant::now();
        let r = cw_bound(n, d, w, method, &engine, &opts).expect("valid parameters");
        println!(
            "A({n},{d},{w}) <= {:<6} [{}<= {:.4}, {:?}, families: {}]",
            r.bound.to_string(),
            if r.solver.is_some() { "certified " } else { "exact " },
            r.value,
            start.elapsed(),
            r.families.join(", ")
        );
    }
}
