//! Frobenius and Cartier-operator computations for graded hypersurfaces over 𝔽_p.
//!
//! The crate is organised bottom-up: polynomial arithmetic, a Buchberger
//! engine for ideals and submodules of free modules, graded module algebra
//! (kernels, Hom, reflexive hulls, resolutions, Ext), Frobenius pushforwards
//! with two F-injectivity oracles, de Rham and Cartier machinery, the
//! k-F-injectivity decision procedure, SNC form computations and a reporting
//! layer used by the command-line tool.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod cli;
pub mod error;
pub mod fincheck;
pub mod frob;
pub mod derham;
pub mod groebner;
pub mod modalg;
pub mod sncforms;

pub use error::{Error, Result};
