//! Sparse generalized eigenvalue solvers built around a successive
//! two-stage scheme: a gradient-based ascent stage (truncated power method,
//! rifle, or PGSA with backtracking) followed by a support-alteration stage
//! that swaps coordinates in and out of the support using an exact
//! one-dimensional solve.
//!
//! Everything is generic over the scalar type ([`Scalar`], implemented for
//! `f32` and `f64`); the `*32`/`*64` aliases at the crate root pin concrete
//! types.

pub mod alteration;
pub mod core;
pub mod datagen;
pub mod driver;
pub mod error;
pub mod gba;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod scalar;

pub use crate::core::{
    l0_distance, l0_norm, rayleigh, support, truncate, zero_set, MatrixPair, SGepInstance,
    SparseIterate,
};
pub use crate::driver::{sa_gba, select_step_size, DriverConfig, OuterTrace, SaVariant};
pub use crate::error::{Result, SgepError};
pub use crate::gba::{pgsa_ml, rifle, tpm, GbaConfig, GbaTrace, GbaVariant};
pub use crate::linalg::Mat;
pub use crate::oracle::{dense_gev, exact_sgep, OracleResult};
pub use crate::scalar::Scalar;

pub type Mat64 = Mat<f64>;
pub type Mat32 = Mat<f32>;
pub type MatrixPair64 = MatrixPair<f64>;
pub type MatrixPair32 = MatrixPair<f32>;
pub type Instance64 = SGepInstance<f64>;
pub type Instance32 = SGepInstance<f32>;
