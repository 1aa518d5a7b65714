//! Exact-arithmetic computations around semisimple Lie algebras of rank ≤ 4:
//! root systems with Bourbaki numbering, Chevalley bases with machine-checked
//! structure constants, PBW normal ordering, depth-truncated Verma and simple
//! highest-weight modules, p-adic integrality analysis of lowering-operator
//! relations, and exponentials of nilpotent elements (BCH, reduction steps).
//!
//! Every computation is over `BigRational`; there is no floating point
//! anywhere. Weights are given in coroot coordinates, roots in simple-root
//! coordinates. Truncation depths are capped (default 10, override with the
//! `CATO_DEPTH_CAP` environment variable).

pub mod chevalley;
pub mod error;
pub mod integrality;
pub mod linalg;
pub mod modules_o;
pub mod nilexp;
pub mod pbw;
pub mod rootsys;

pub use error::Error;

/// Largest rank for which Weyl groups are materialized.
pub const MAX_RANK: usize = 4;

/// Default truncation depth for highest-weight modules.
pub const DEFAULT_DEPTH: u32 = 8;

/// Hard cap on truncation depth, unless overridden via `CATO_DEPTH_CAP`.
pub const DEPTH_CAP_DEFAULT: u32 = 10;

/// Effective depth cap: `CATO_DEPTH_CAP` if set and parseable, else 10.
pub fn depth_cap() -> u32 {
    std::env::var("CATO_DEPTH_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEPTH_CAP_DEFAULT)
}
