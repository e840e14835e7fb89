//! Linear programming bounds from Krawtchouk inequalities.
//!
//! Solves the distance-distribution linear program exactly (rational
//! simplex) for a run of parameters and prints the optimum both as an exact
//! rational and as the floored integer bound.
//!
//! ```sh
//! cargo run --release --example delsarte_lp
//! ```

use codebounds::lp::{lp_bound_cw, lp_bound_unrestricted};

fn main() {
    println!("binary codes:");
    for (n, d) in [(7usize, 3usize), (8, 4), (10, 4), (13, 5), (16, 6)] {
        let r = lp_bound_unrestricted(n, d, false, None);
        println!(
            "  A({n},{d}) <= {}   (LP optimum {} = {:.4})",
            r.bound,
            r.value,
            rational_to_f64(&r.value)
        );
    }

    println!("constant-weight codes:");
    for (n, d, w) in [(8usize, 4usize, 3usize), (10, 4, 5), (12, 6, 5), (14, 6, 7)] {
        let r = lp_bound_cw(n, d, w, false, None);
        println!(
            "  A({n},{d},{w}) <= {}   (LP optimum {} = {:.4})",
            r.bound,
            r.value,
            rational_to_f64(&r.value)
        );
    }
}

fn rational_to_f64(r: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
