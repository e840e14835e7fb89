//! SDPA sparse-format interchange (`.dat-s`).
//!
//! The exported problem follows the de-facto layout: `m` scalar variables,
//! block count, block sizes (negative size marks the diagonal block
//! carrying the scalarised linear rows), objective coefficients, then
//! `var block row col value` entries with `var 0` for the constant matrix.
//! SDPA solvers minimise, so the maximisation objective is written negated;
//! an external run therefore reports the negated bound.
//!
//! Comments (`"` or `*`) are accepted on read and never written. Two
//! exports of the same instance are byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::lp::Relation;

use super::model::SdpInstance;

#[derive(Debug, Error)]
pub enum SdpaError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A parsed SDPA sparse file, kept close to the wire format.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpaFile {
    pub num_vars: usize,
    /// Positive sizes are dense symmetric blocks; negative sizes diagonal.
    pub block_sizes: Vec<i64>,
    pub objective: Vec<f64>,
    /// `(var, block, row, col, value)`, `var = 0` for the constant matrix,
    /// 1-based block/row/col indices, `row <= col`.
    pub entries: Vec<(usize, usize, usize, usize, f64)>,
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render an instance in SDPA sparse format.
pub fn render_sdpa(instance: &SdpInstance) -> String {
    let m = instance.variables.len();
    let key_index: std::collections::BTreeMap<_, _> = instance
        .variables
        .iter()
        .enumerate()
        .map(|(ix, k)| (*k, ix))
        .collect();

    // Scalarise the linear rows: every row becomes diagonal entries of one
    // LP block; equalities take two opposed entries.
    struct DiagEntry {
        var: usize, // 0 = constant
        value: f64,
    }
    let mut diag: Vec<Vec<DiagEntry>> = Vec::new();
    let mut push_ineq = |coeffs: Vec<(usize, BigRational)>, rhs: &BigRational, flip: bool| {
        // a x <= b  =>  diagonal slot  b - a x >= 0
        // SDPA convention: sum_i x_i F_i - F_0 >= 0, so F_i = -a_i, F_0 = -b.
        let sgn = if flip { -1.0 } else { 1.0 };
        let mut slot = Vec::new();
        slot.push(DiagEntry {
            var: 0,
            value: -sgn * rhs.to_f64().unwrap_or(f64::NAN),
        });
        for (ix, coeff) in coeffs {
            slot.push(DiagEntry {
                var: ix + 1,
                value: -sgn * coeff.to_f64().unwrap_or(f64::NAN),
            });
        }
        diag.push(slot);
    };
    for row in &instance.linear_constraints {
        let coeffs: Vec<(usize, BigRational)> = row
            .coeffs
            .iter()
            .map(|(k, v)| (key_index[k], v.clone()))
            .collect();
        match row.relation {
            Relation::Le => push_ineq(coeffs, &row.rhs, false),
            Relation::Ge => push_ineq(coeffs, &row.rhs, true),
            Relation::Eq => {
                push_ineq(coeffs.clone(), &row.rhs, false);
                push_ineq(coeffs, &row.rhs, true);
            }
        }
    }
    let lp_dim: usize = diag.len();

    let mut out = String::new();
    writeln!(out, "{m}").unwrap();
    let psd_count = instance.psd_blocks.len();
    let nblocks = psd_count + usize::from(lp_dim > 0);
    writeln!(out, "{nblocks}").unwrap();
    let mut sizes: Vec<String> = instance
        .psd_blocks
        .iter()
        .map(|b| b.dim().to_string())
        .collect();
    if lp_dim > 0 {
        sizes.push(format!("-{lp_dim}"));
    }
    writeln!(out, "{}", sizes.join(" ")).unwrap();

    // Objective, negated for the minimising convention.
    let obj: Vec<String> = (0..m)
        .map(|ix| {
            let coeff = instance
                .objective
                .get(&ix)
                .map(|c| c.to_f64().unwrap_or(f64::NAN))
                .unwrap_or(0.0);
            fmt_f64(-coeff)
        })
        .collect();
    writeln!(out, "{}", obj.join(" ")).unwrap();

    for (bi, block) in instance.psd_blocks.iter().enumerate() {
        for r in 0..block.dim() {
            for c in r..block.dim() {
                for (ix, coeff) in &block.entries[r][c] {
                    if coeff.is_zero() {
                        continue;
                    }
                    writeln!(
                        out,
                        "{} {} {} {} {}",
                        ix + 1,
                        bi + 1,
                        r + 1,
                        c + 1,
                        fmt_f64(coeff.to_f64().unwrap_or(f64::NAN))
                    )
                    .unwrap();
                }
            }
        }
    }
    for (slot, entries) in diag.iter().enumerate() {
        for e in entries {
            if e.value == 0.0 {
                continue;
            }
            writeln!(
                out,
                "{} {} {} {} {}",
                e.var,
                psd_count + 1,
                slot + 1,
                slot + 1,
                fmt_f64(e.value)
            )
            .unwrap();
        }
    }
    out
}

/// Write an instance to `path` in SDPA sparse format.
pub fn export_sdpa(instance: &SdpInstance, path: &Path) -> Result<(), SdpaError> {
    std::fs::write(path, render_sdpa(instance))?;
    Ok(())
}

/// Parse SDPA sparse text (comments and blank lines permitted).
pub fn parse_sdpa(text: &str) -> Result<SdpaFile, SdpaError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('"') && !t.starts_with('*')
        });
    let mut next = |what: &str| -> Result<(usize, &str), SdpaError> {
        lines.next().ok_or_else(|| SdpaError::Parse {
            line: 0,
            msg: format!("missing {what}"),
        })
    };
    let (no, l) = next("variable count")?;
    let num_vars: usize = l.trim().split_whitespace().next().unwrap_or("").parse().map_err(|_| {
        SdpaError::Parse {
            line: no + 1,
            msg: "bad variable count".into(),
        }
    })?;
    let (no, l) = next("block count")?;
    let nblocks: usize = l.trim().split_whitespace().next().unwrap_or("").parse().map_err(|_| {
        SdpaError::Parse {
            line: no + 1,
            msg: "bad block count".into(),
        }
    })?;
    let (no, l) = next("block sizes")?;
    let block_sizes: Vec<i64> = l
        .split(|c: char| c.is_whitespace() || c == ',' || c == '(' || c == ')' || c == '{' || c == '}')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse().map_err(|_| SdpaError::Parse {
                line: no + 1,
                msg: format!("bad block size {t:?}"),
            })
        })
        .collect::<Result<_, _>>()?;
    if block_sizes.len() != nblocks {
        return Err(SdpaError::Parse {
            line: no + 1,
            msg: format!("expected {nblocks} block sizes, found {}", block_sizes.len()),
        });
    }
    let (no, l) = next("objective")?;
    let objective: Vec<f64> = l
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse().map_err(|_| SdpaError::Parse {
                line: no + 1,
                msg: format!("bad objective entry {t:?}"),
            })
        })
        .collect::<Result<_, _>>()?;
    if objective.len() != num_vars {
        return Err(SdpaError::Parse {
            line: no + 1,
            msg: format!("expected {num_vars} objective entries"),
        });
    }
    let mut entries = Vec::new();
    for (no, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(SdpaError::Parse {
                line: no + 1,
                msg: format!("expected 5 fields, found {}", fields.len()),
            });
        }
        let var: usize = fields[0].parse().map_err(|_| SdpaError::Parse {
            line: no + 1,
            msg: "bad var index".into(),
        })?;
        let block: usize = fields[1].parse().map_err(|_| SdpaError::Parse {
            line: no + 1,
            msg: "bad block index".into(),
        })?;
        let row: usize = fields[2].parse().map_err(|_| SdpaError::Parse {
            line: no + 1,
            msg: "bad row index".into(),
        })?;
        let col: usize = fields[3].parse().map_err(|_| SdpaError::Parse {
            line: no + 1,
            msg: "bad col index".into(),
        })?;
        let value: f64 = fields[4].parse().map_err(|_| SdpaError::Parse {
            line: no + 1,
            msg: "bad value".into(),
        })?;
        if var > num_vars || block == 0 || block > nblocks || row > col {
            return Err(SdpaError::Parse {
                line: no + 1,
                msg: "entry indices out of range".into(),
            });
        }
        entries.push((var, block, row, col, value));
    }
    Ok(SdpaFile {
        num_vars,
        block_sizes,
        objective,
        entries,
    })
}

/// Parse an SDPA file from disk.
pub fn read_sdpa(path: &Path) -> Result<SdpaFile, SdpaError> {
    let text = std::fs::read_to_string(path)?;
    parse_sdpa(&text)
}

impl SdpaFile {
    /// Structural digest for round-trip comparisons: dimensions plus every
    /// entry, bit-exact.
    pub fn digest(&self) -> (usize, Vec<i64>, Vec<u64>, Vec<(usize, usize, usize, usize, u64)>) {
        (
            self.num_vars,
            self.block_sizes.clone(),
            self.objective.iter().map(|v| v.to_bits()).collect(),
            self.entries
                .iter()
                .map(|&(v, b, r, c, x)| (v, b, r, c, x.to_bits()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::model::{build_unrestricted, UnrestrictedOptions};

    #[test]
    fn round_trip_is_exact() {
        let inst = build_unrestricted(6, 4, UnrestrictedOptions::default(), None).unwrap();
        let text = render_sdpa(&inst);
        let parsed = parse_sdpa(&text).unwrap();
        assert_eq!(parsed.num_vars, inst.variables.len());
        // Re-render from the same instance: byte identical.
        assert_eq!(text, render_sdpa(&inst));
        // Block sizes: declared PSD dims then the diagonal block.
        let psd: Vec<i64> = inst.psd_blocks.iter().map(|b| b.dim() as i64).collect();
        assert_eq!(&parsed.block_sizes[..psd.len()], &psd[..]);
        assert!(parsed.block_sizes.last().unwrap() < &0);
    }

    #[test]
    fn comments_are_accepted_on_read() {
        let inst = build_unrestricted(5, 3, UnrestrictedOptions::default(), None).unwrap();
        let text = render_sdpa(&inst);
        let with_comments = format!("\"generated for a test\n* another note\n{text}");
        let a = parse_sdpa(&text).unwrap();
        let b = parse_sdpa(&with_comments).unwrap();
        assert_eq!(a.digest(), b.digest());
    }

    #[test]
    fn malformed_reports_line() {
        let err = parse_sdpa("2\n1\n2\n1.0 2.0\n1 1 2 1 0.5\n").unwrap_err();
        match err {
            SdpaError::Parse { line, msg } => {
                assert_eq!(line, 5);
                assert!(msg.contains("out of range"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
