//! Numerical verification of higher-order mean curvature identities on
//! closed hypersurfaces of warped-product spaces `dr² + h(r)² g_N`.
//!
//! The crate is `no_std` and only needs an allocator. File formats, the
//! command line and parallel drivers live in the `curvlab` crate.
//!
//! Module map:
//!
//! - [`symfun`]: elementary symmetric functions, normalized mean curvatures,
//!   Newton transformations and the Newton–Maclaurin inequality family.
//! - [`ambient`]: warping-function catalog, Ricci coefficients and the
//!   H1–H4 condition checker.
//! - [`surfaces`]: closed-form surface families and a metric-aware immersion
//!   engine producing quadrature-ready sample clouds.
//! - [`verify`]: Hsiung–Minkowski residuals, the Ricci sign lemma and the
//!   Heintze–Karcher gap.
//! - [`rigidity`]: hypothesis residuals for the radial rigidity theorems and
//!   the soliton suite.

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;


pub mod ambient;
mod error;
pub mod linalg;
pub mod quadrature;
pub mod radial;
pub mod rigidity;
pub mod surfaces;
pub mod symfun;
pub mod verify;

pub use error::{Error, Result};

/// Relative tolerance used to call two O(1) quantities equal.
pub const EQUALITY_TOL: f64 = 1e-10;
