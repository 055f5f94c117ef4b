//! Volumes of moduli spaces of bordered-cusp boundary components ("fool's
//! crowns") and cusped discs, together with the geometric, Poisson and
//! continuum-limit identities they rest on.
//!
//! The crate is `no_std` and needs only `alloc`. Everything that touches
//! files, threads or the command line lives in the `moduli-cli` crate.
//!
//! Module map:
//!
//! * [`specfun`] - dilogarithm, its real part past the branch point, Rogers L.
//! * [`geometry`] - crown and disc coordinates, kissing horocycles, actions.
//! * [`poisson`] - bracket matrices, Pfaffians, log-canonical forms, Casimirs.
//! * [`volumes`] - crown and disc volumes by quadrature and simplex Monte Carlo.
//! * [`continuum`] - Schwarzian derivative and the ε-expansions of the
//!   discrete action and symplectic form.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > y)` rejects NaN along with the ordinary failures.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod numeric;

pub mod continuum;
pub mod geometry;
pub mod montecarlo;
pub mod poisson;
pub mod quadrature;
pub mod specfun;
pub mod volumes;

pub use crate::error::{Error, Result};
pub use crate::montecarlo::{McEstimate, Proposal};
pub use crate::quadrature::QuadratureResult;
