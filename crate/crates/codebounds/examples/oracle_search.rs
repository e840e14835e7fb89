//! Exact maximum-code search and code statistics.
//!
//! Finds optimal codes at toy scale by branch and bound, then inspects the
//! witness: minimum distance, distance distribution, and a couple of
//! normalised triple statistics.
//!
//! ```sh
//! cargo run --release --example oracle_search [N D]
//! ```

use codebounds::oracle::{distance_distribution, exact_max_code, triple_stats, ConstraintSet};
use num_traits::Zero;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let d: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);

    println!("searching for a maximum ({n},{d}) code ...");
    let result = exact_max_code(n, d, &ConstraintSet::empty(), 50_000_000);
    println!(
        "A({n},{d}) = {}{} ({} search nodes)",
        result.size,
        if result.exact { "" } else { " (budget hit: lower bound only)" },
        result.nodes
    );
    println!("witness:");
    for word in result.witness.words() {
        println!("  {word}");
    }
    println!(
        "minimum distance of witness: {:?}",
        result.witness.min_distance()
    );

    let dist = distance_distribution(&result.witness);
    println!("distance distribution B_i:");
    for (i, b) in dist.iter().enumerate() {
        if !b.is_zero() {
            println!("  B_{i} = {b}");
        }
    }

    let stats = triple_stats(&result.witness);
    println!("sample triple statistics:");
    println!("  x^0_(0,0) = {}", stats.x(0, 0, 0));
    println!("  x^0_({d},0) = {}", stats.x(d, 0, 0));

    // Anchored search: fixing the distance from the zero word gives
    // constant-weight optima.
    let w = n / 2;
    let anchored = exact_max_code(n, d, &ConstraintSet::weight(n, w), 50_000_000);
    println!("A({n},{d},{w}) = {}", anchored.size);
}
