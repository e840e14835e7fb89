//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them).
//!
//! Criterion 5b (the table-assisted constant-weight target at (23,10,9))
//! asserts a bound the self-derived coefficient tables cannot reach; see
//! the failure message for the analysis. Every other criterion is green.

mod common;

use codebounds::bounds;
use codebounds::cli::dispatch;
use codebounds::combin::{beta, binomial, krawtchouk};
use codebounds::lp::{
    delsarte_constraints_unrestricted, theorem13_constraints, theorem8_constraints, Bridge,
    ParityMode, QTable,
};
use codebounds::oracle::{cw_triple_stats, triple_stats};
use codebounds::sdp::{
    build_cw, build_unrestricted, min_eigenvalue, parse_sdpa, render_sdpa, CwOptions,
    SolveOptions, UnrestrictedOptions,
};
use codebounds::tbounds::BoundEngine;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::time::Instant;

fn pass(criterion: &str, detail: String) {
    println!("acceptance {criterion}: PASS - {detail}");
}

#[test]
fn criterion_1_oracle_dominance_sweep() {
    let start = Instant::now();
    let failures = bounds::oracle_dominance_sweep(8, 8, 30_000_000, &SolveOptions::default())
        .expect("sweep must run");
    assert!(
        failures.is_empty(),
        "criterion 1: FAIL - dominance violations:\n{}",
        failures.join("\n")
    );
    pass(
        "1 (oracle dominance, n <= 8)",
        format!("all (n,d) and (n,d,w) cases in {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_2_feasibility_of_real_codes() {
    let start = Instant::now();
    let engine = BoundEngine::default();
    let mut rng = common::rng(42);

    // Unrestricted class: conditions, Krawtchouk and parity rows, tail
    // rows, coefficient rows, and the algebra blocks.
    let mut checked = 0;
    while checked < 200 {
        let n = 4 + (checked % 9);
        let code = common::random_code(&mut rng, n, 1 + (checked % 4), 36);
        if code.len() < 2 {
            continue;
        }
        let d = code.min_distance().unwrap();
        let stats = triple_stats(&code);
        let assign = common::stats_fn(&stats);
        let inst = build_unrestricted(
            n,
            d,
            UnrestrictedOptions {
                even_reduction: Some(false),
                t1: true,
                cor2: true,
                delsarte: true,
                mel: d % 2 == 0,
            },
            Some(&engine),
        )
        .unwrap();
        for row in &inst.linear_constraints {
            assert!(
                row.satisfied_by(&assign),
                "criterion 2: FAIL - [{}] violated by ({n},{d}) code of size {}",
                row.tag,
                code.len()
            );
        }
        for block in &inst.psd_blocks {
            let m = block.evaluate(|ix| assign(&inst.variables[ix]));
            let eig = min_eigenvalue(&m).unwrap();
            assert!(
                eig >= -1e-8,
                "criterion 2: FAIL - block {:?} eigenvalue {eig}",
                block.label
            );
        }
        // Size-parity refinements at the code's own size.
        let m_size = code.len() as u64;
        let fam = match m_size % 4 {
            1 | 3 => delsarte_constraints_unrestricted(n, d, ParityMode::OddM(m_size)),
            2 => delsarte_constraints_unrestricted(n, d, ParityMode::Mod4M(m_size)),
            _ => delsarte_constraints_unrestricted(n, d, ParityMode::Plain),
        };
        for row in &fam.rows {
            assert!(
                row.satisfied_by(&assign),
                "criterion 2: FAIL - parity row [{}] violated (M = {m_size})",
                row.tag
            );
        }
        if !fam.alternatives.is_empty() {
            let ok = fam
                .alternatives
                .iter()
                .any(|alt| alt.iter().all(|row| row.satisfied_by(&assign)));
            assert!(
                ok,
                "criterion 2: FAIL - no hidden-weight alternative satisfiable (M = {m_size})"
            );
        }
        checked += 1;
    }

    // Constant-weight class: T6/T7/T11/T13/T14 families, the size rows,
    // and both block families.
    let mut checked = 0;
    while checked < 200 {
        let n = 8 + (checked % 6);
        let w = 3 + (checked % 3);
        if 2 * w > n {
            continue;
        }
        let code = common::random_cw_code(&mut rng, n, 4, w, 30);
        if code.len() < 2 {
            continue;
        }
        let d = code.min_distance().unwrap();
        if d % 2 != 0 || !(4..2 * w).contains(&d) {
            continue;
        }
        let stats = cw_triple_stats(&code, w).unwrap();
        let assign = common::cw_stats_fn(&stats);
        let inst = build_cw(n, d, w, CwOptions::plus(), Some(&engine)).unwrap();
        for row in &inst.linear_constraints {
            assert!(
                row.satisfied_by(&assign),
                "criterion 2: FAIL - [{}] violated by ({n},{d},{w}) code of size {}",
                row.tag,
                code.len()
            );
        }
        for block in &inst.psd_blocks {
            let m = block.evaluate(|ix| assign(&inst.variables[ix]));
            let eig = min_eigenvalue(&m).unwrap();
            assert!(
                eig >= -1e-8,
                "criterion 2: FAIL - cw block {:?} eigenvalue {eig}",
                block.label
            );
        }
        for row in theorem8_constraints(n, d, w, code.len() as u64) {
            // rows reference only B-variables, all declared in core regime
            assert!(
                row.satisfied_by(&assign),
                "criterion 2: FAIL - size row [{}] violated at ({n},{d},{w}), M = {}",
                row.tag,
                code.len()
            );
        }
        checked += 1;
    }
    pass(
        "2 (feasibility of real codes)",
        format!("200 codes per class in {:?}", start.elapsed()),
    );
}

fn cli_bound_json(args: &[&str]) -> serde_json::Value {
    let mut argv = vec!["codebounds"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--format", "json"]);
    let (code, text) = dispatch(argv);
    assert_eq!(code, 0, "CLI failed: {text}");
    serde_json::from_str(&text).expect("JSON output")
}

#[test]
fn criterion_3_base_reproduction() {
    let start = Instant::now();
    let v = cli_bound_json(&["bound", "unrestricted", "18", "8", "--method", "sdp"]);
    let dual = v["solver"]["dual"].as_f64().unwrap();
    assert_eq!(v["bound"], "80", "criterion 3: FAIL - A(18,8) bound {v}");
    assert!(
        (79.5..80.5).contains(&dual),
        "criterion 3: FAIL - dual {dual} outside (79.5, 80.5)"
    );
    let v = cli_bound_json(&["bound", "unrestricted", "19", "8", "--method", "sdp"]);
    let dual = v["solver"]["dual"].as_f64().unwrap();
    assert_eq!(v["bound"], "142", "criterion 3: FAIL - A(19,8) bound {v}");
    assert!(
        (141.5..142.5).contains(&dual),
        "criterion 3: FAIL - dual {dual} outside (141.5, 142.5)"
    );
    pass(
        "3 (base reproduction)",
        format!("A(18,8) <= 80 and A(19,8) <= 142 in {:?}", start.elapsed()),
    );
}

/// Curated table: every one- and two-block cell the engine derives for the
/// (18,8) coefficient rows, plus the four cells quoted alongside the worked
/// example.
fn curated_dcw_csv() -> String {
    let engine = BoundEngine::default();
    let inst = build_unrestricted(18, 8, UnrestrictedOptions::plus(), Some(&engine)).unwrap();
    drop(inst);
    let mut csv = engine.export_dcw_csv();
    csv.push_str("1,13,2,14,8,1\n2,12,3,12,8,20\n2,13,3,14,8,26\n1,11,2,11,8,1\n");
    csv
}

#[test]
fn criterion_4_table_assisted_reproduction() {
    let start = Instant::now();
    let dir = std::env::temp_dir().join("codebounds-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let table_path = dir.join("dcw-18-8.csv");
    std::fs::write(&table_path, curated_dcw_csv()).unwrap();
    let cache_path = dir.join("c4.cache.json");

    let v = cli_bound_json(&[
        "bound",
        "unrestricted",
        "18",
        "8",
        "--method",
        "sdp-plus",
        "--tables",
        table_path.to_str().unwrap(),
        "--cache",
        cache_path.to_str().unwrap(),
    ]);
    let bound: i64 = v["bound"].as_str().unwrap().parse().unwrap();
    let _ = std::fs::remove_file(&cache_path);
    assert!(
        (64..=79).contains(&bound),
        "criterion 4: FAIL - table-assisted A(18,8) bound {bound} outside [64, 79]"
    );
    pass(
        "4 (table-assisted reproduction)",
        format!(
            "A(18,8) <= {bound} with curated tables in {:?} (published stretch value 71 needs stronger tables)",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_5a_constant_weight_base() {
    let start = Instant::now();
    let v = cli_bound_json(&["bound", "cw", "23", "10", "9", "--method", "sdp"]);
    assert_eq!(v["bound"], "82", "criterion 5a: FAIL - {v}");
    pass(
        "5a (constant-weight base)",
        format!("A(23,10,9) <= 82 in {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_5b_constant_weight_families() {
    // The published improvement to 79 relies on externally tabulated
    // doubly-constant/bounded-weight values. Everything derivable in this
    // workspace (the recursive calculus, its linear-programming and
    // size-parity leaves, weight-splitting for bounded blocks, and
    // bootstrapped semidefinite bounds fed back as table rows) leaves the
    // binding cells unchanged, and the certified optimum of the
    // family-extended model sits just above 82, so the gate of 81 is not
    // reachable from self-derived data. The assertion is kept as stated.
    let start = Instant::now();
    let engine = BoundEngine::default().with_bounded_split();
    let inst = build_cw(23, 10, 9, CwOptions::plus(), Some(&engine)).unwrap();
    drop(inst);
    let dir = std::env::temp_dir().join("codebounds-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let table_path = dir.join("dcw-23-10.csv");
    std::fs::write(&table_path, engine.export_dcw_csv()).unwrap();
    let cache_path = dir.join("c5.cache.json");

    let v = cli_bound_json(&[
        "bound",
        "cw",
        "23",
        "10",
        "9",
        "--method",
        "sdp-plus",
        "--tables",
        table_path.to_str().unwrap(),
        "--cache",
        cache_path.to_str().unwrap(),
    ]);
    let bound: i64 = v["bound"].as_str().unwrap().parse().unwrap();
    let _ = std::fs::remove_file(&cache_path);
    assert!(
        bound <= 81,
        "criterion 5b: FAIL - family-extended A(23,10,9) bound is {bound}, gate is 81 \
         (stretch 79); unreachable without externally tabulated block-code values"
    );
    pass(
        "5b (constant-weight families)",
        format!("A(23,10,9) <= {bound} in {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_6_worked_example_golden() {
    let start = Instant::now();
    let (n, d, w) = (27usize, 8usize, 13usize);
    let mut q = QTable::default();
    q.q.insert(11, BigInt::from(26));
    q.q.insert(12, BigInt::one());
    q.q.insert(13, BigInt::one());
    q.pair.insert((11, 12), BigInt::from(20));
    q.pair.insert((12, 11), BigInt::one());
    let rows = theorem13_constraints(&[11, 12, 13], 11, 12, &q, n, d, w).unwrap();
    let bridge = Bridge::Cw { w, v: n - w };
    let rendered: Vec<String> = rows.iter().map(|r| bridge.b_space(r).to_string()).collect();
    assert_eq!(
        rendered,
        vec![
            "B24 + B26 <= 1  [t13-a]".to_string(),
            "B22 + 6 B24 + 26 B26 <= 26  [t13-b]".to_string(),
        ],
        "criterion 6: FAIL - generated rows differ"
    );
    pass(
        "6 (worked-example golden)",
        format!("both collision rows exact in {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_7_combinatorial_identities() {
    let start = Instant::now();
    for n in 0..=12i64 {
        for k in 0..=n {
            for l in 0..=n {
                let mut acc = BigInt::zero();
                for x in 0..=n {
                    acc += binomial(n, x) * krawtchouk(k, n, x) * krawtchouk(l, n, x);
                }
                let expect = if k == l {
                    BigInt::from(2).pow(n as u32) * binomial(n, k)
                } else {
                    BigInt::zero()
                };
                assert_eq!(acc, expect, "criterion 7: FAIL - orthogonality at n={n} k={k} l={l}");
            }
        }
    }
    for n in 0..=8i64 {
        for k in 0..=n / 2 {
            for t in 0..=n {
                for i in 0..=n {
                    for j in 0..=n {
                        assert_eq!(
                            beta(t, i, j, k, n),
                            beta(t, j, i, k, n),
                            "criterion 7: FAIL - block coefficient symmetry"
                        );
                    }
                }
            }
        }
    }
    pass(
        "7 (combinatorial identities)",
        format!("orthogonality to n = 12, symmetry to n = 8 in {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_8_calculus_soundness() {
    let start = Instant::now();
    let engine = BoundEngine::default();
    let specs = common::enumerate_specs(4, 12);
    for spec in &specs {
        let record = engine.upper_bound(spec);
        let (value, _exact) = common::oracle_value(spec, 2_000_000);
        assert!(
            record.upper >= BigInt::from(value as u64),
            "criterion 8: FAIL - {spec} bound {} below search value {value}",
            record.upper
        );
    }
    // complement invariance on random specs
    use rand::Rng;
    let mut rng = common::rng(77);
    for _ in 0..500 {
        let blocks = 1 + rng.gen_range(0..4);
        let pairs: Vec<(usize, usize)> = (0..blocks)
            .map(|_| {
                let n = 2 + rng.gen_range(0..10);
                (rng.gen_range(0..=n), n)
            })
            .collect();
        let complemented: Vec<(usize, usize)> = pairs.iter().map(|&(w, n)| (n - w, n)).collect();
        let d = 1 + rng.gen_range(0..10);
        let a = engine.upper_bound(&codebounds::tbounds::McwSpec::new(pairs, d));
        let b = engine.upper_bound(&codebounds::tbounds::McwSpec::new(complemented, d));
        assert_eq!(a.upper, b.upper, "criterion 8: FAIL - complement invariance");
    }
    pass(
        "8 (calculus soundness)",
        format!("{} exhaustive specs + 500 random complements in {:?}", specs.len(), start.elapsed()),
    );
}

#[test]
fn criterion_9_sdpa_round_trip() {
    let start = Instant::now();
    let engine = BoundEngine::default();
    let mut instances = Vec::new();
    for (n, d) in [(5usize, 3usize), (6, 4), (8, 4), (10, 4), (12, 6), (18, 8)] {
        instances.push(build_unrestricted(n, d, UnrestrictedOptions::default(), None).unwrap());
    }
    instances.push(build_unrestricted(10, 4, UnrestrictedOptions::plus(), Some(&engine)).unwrap());
    for (n, d, w) in [(8usize, 4usize, 3usize), (12, 6, 5), (23, 10, 9)] {
        instances.push(build_cw(n, d, w, CwOptions::default(), None).unwrap());
    }
    assert_eq!(instances.len(), 10);
    for inst in &instances {
        let text = render_sdpa(inst);
        let parsed = parse_sdpa(&text).unwrap();
        assert_eq!(parsed.num_vars, inst.variables.len());
        let expected_sizes: Vec<i64> = inst
            .psd_blocks
            .iter()
            .map(|b| b.dim() as i64)
            .chain(std::iter::once(*parsed.block_sizes.last().unwrap()))
            .collect();
        assert_eq!(parsed.block_sizes, expected_sizes, "criterion 9: FAIL - sizes");
        // bit-exact: a second render parses to the identical digest
        let again = parse_sdpa(&render_sdpa(inst)).unwrap();
        assert_eq!(parsed.digest(), again.digest(), "criterion 9: FAIL - digest");
        assert_eq!(text, render_sdpa(inst), "criterion 9: FAIL - bytes");
    }
    pass(
        "9 (SDPA round trip)",
        format!("10 instances bit-exact in {:?}", start.elapsed()),
    );
}
