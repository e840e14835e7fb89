//! Upper bounds for binary codes and binary constant-weight codes.
//!
//! The crate computes upper bounds on `A(n,d)` (the maximum size of a binary
//! code of length `n` and minimum Hamming distance `d`) and on `A(n,d,w)`
//! (the constant-weight variant) by three cooperating engines:
//!
//! * [`lp`] — Delsarte-style linear programming bounds over distance
//!   distributions, with parity refinements and several families of extra
//!   linear constraints, solved by an exact rational simplex.
//! * [`sdp`] — block-diagonalised semidefinite programming bounds built from
//!   triple statistics of codes, solved by a dense primal-dual interior-point
//!   method, with SDPA sparse-format export for external cross-checks.
//! * [`tbounds`] — a recursive calculus of upper bounds for multiply
//!   constant-weight codes (`T`-numbers), with CSV table ingestion and a
//!   persistent cache. These `T` values feed coefficient bounds into both
//!   programs above.
//!
//! Everything is validated against [`oracle`], an exact branch-and-bound
//! search that computes true optima at small scale.
//!
//! Start with the runnable programs in `examples/`; the `codebounds` binary
//! wraps the same entry points behind a small CLI.

pub mod combin;
pub mod oracle;
pub mod tbounds;
pub mod lp;
pub mod sdp;
pub mod bounds;
pub mod cli;
