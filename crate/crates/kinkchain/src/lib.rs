//! Multi-engine simulator for quench dynamics of an open Ising chain with
//! transverse field, longitudinal (confining) field, and a three-body
//! kink-kinetic term.
//!
//! Four engines compute the same physics at different scales and validate
//! one another:
//!
//! - [`exact`]: dense 2^L state-vector evolution, the ground truth at small L;
//! - [`twokink`]: Trotter-error-free evolution in the two-kink subspace,
//!   scaling to chains of a few hundred sites;
//! - [`fermion`]: the free-fermion picture valid at h = 0 with j3 = -g;
//! - [`mps`]: MPS/TEBD evolution with a charged-moment integral for
//!   entanglement asymmetry.
//!
//! Observables are the Renyi-2 entanglement entropy at arbitrary cuts and
//! the entanglement asymmetry for local (magnetization) and quasi-local
//! (kink) charges, in the original or the Kramers-Wannier basis.

pub mod error;
pub mod exact;
pub mod fermion;
pub mod linalg;
pub mod model;
pub mod mps;
pub mod runner;
pub mod twokink;

pub use error::{Error, Result};
pub use model::{ChargeKind, ChargeSpec, ModelParams, SpinPattern};
