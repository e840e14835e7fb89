//! Semidefinite programming bounds: model construction, a dense primal-dual
//! interior-point solver, and SDPA sparse-format interchange.

pub mod key;

pub use key::{canonical_key_cw, canonical_key_unrestricted, VariableKey};
pub mod model;

pub use model::{
    build_cw, build_unrestricted, BlockLabel, BuildError, CwOptions, InstanceMeta, SdpBlock,
    SdpInstance, UnrestrictedOptions,
};

pub mod psd;

pub use model::{stats_value, stats_value_cw};
pub use psd::{check_psd, min_eigenvalue};

pub mod solve;

pub use solve::{solve, SolveOptions, SolveReport, SolveStatus};

pub mod sdpa;

pub use sdpa::{export_sdpa, parse_sdpa, read_sdpa, render_sdpa, SdpaError, SdpaFile};
