//! SDPA sparse-format export and re-parse.
//!
//! Writes a model to the standard `.dat-s` interchange layout (for
//! cross-checking with external semidefinite solvers) and re-parses it to
//! demonstrate the round trip. Note the objective is negated on export
//! because SDPA solvers minimise.
//!
//! ```sh
//! cargo run --release --example sdpa_export [N D [PATH]]
//! ```

use codebounds::sdp::{build_unrestricted, parse_sdpa, render_sdpa, UnrestrictedOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let d: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let path = args
        .next()
        .unwrap_or_else(|| std::env::temp_dir().join("codebounds_model.dat-s").display().to_string());

    let inst = build_unrestricted(n, d, UnrestrictedOptions::default(), None).unwrap();
    let text = render_sdpa(&inst);
    std::fs::write(&path, &text).expect("write SDPA file");
    println!("wrote {} bytes to {path}", text.len());

    let parsed = parse_sdpa(&text).unwrap();
    println!(
        "parsed back: {} variables, {} blocks (sizes {:?}), {} entries",
        parsed.num_vars,
        parsed.block_sizes.len(),
        parsed.block_sizes,
        parsed.entries.len()
    );
    assert_eq!(parsed.num_vars, inst.variables.len());
    println!("round trip consistent");
}
