//! Exact computer algebra for quadratic Weyl group multiple Dirichlet series.
//!
//! The crate builds, for any simply-laced root system, the W-invariant
//! rational function whose Taylor coefficients are the prime-power
//! coefficients of the associated quadratic multiple Dirichlet series over
//! the rationals, assembles global coefficients by twisted multiplicativity,
//! and mechanically verifies the finitely checkable identities the
//! construction satisfies (cocycle closed form, functional equations of the
//! coefficient generating functions, the rank-3 convolution identity,
//! Siegel's minimum rule, and the q = 1 degeneration).
//!
//! Everything is exact: coefficients are arbitrary-precision integers and
//! `sqrt(q)` is an honest variable `t` with `q = t^2`.

pub mod action;
pub mod checks;
pub mod error;
pub mod invariant;
pub mod io;
pub mod poly;
pub mod qcoeffs;
pub mod ratfunc;
pub mod rootsys;
pub mod series;

pub use error::{Error, Result};
pub use invariant::{BuildOptions, InvariantFunction};
pub use rootsys::{Family, RootSystem, WeylGroup};
