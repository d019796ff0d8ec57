//! Six-vertex model with domain-wall boundary conditions.
//!
//! The partition function is computed three independent ways (exhaustive
//! enumeration of states, the Izergin–Korepin determinant, and Fourier
//! reconstruction at `η = 2π/3`), and the alternating-sign-matrix counting
//! formulas that follow from the root-of-unity functional equation are
//! implemented in exact arithmetic.
//!
//! The crate is `no_std` and only needs `alloc`. Parallel drivers, IO and the
//! command line live in `sixvertex-cli`.
#![no_std]

extern crate alloc;

pub mod closedform;
pub mod enumerate;
pub mod error;
pub mod ikdet;
pub mod linalg;
pub mod model;
pub mod rootuni;

pub use error::{Error, Result};
pub use model::{Asm, SixVertexState, SpectralConfig, WeightConvention};
