//! Smoothed aggregation algebraic multigrid with pluggable strength-of-connection
//! measures, including a material-weighted distance Laplacian that keeps
//! aggregates from straddling coefficient jumps and follows anisotropy.
//!
//! The crate is organised bottom-up:
//!
//! * [`sparse`] - CSR storage, products, MatrixMarket I/O
//! * [`fem`] - structured Q1 finite element problems with material tensors
//! * [`soc`] - strength-of-connection measures
//! * [`filter`] - dropping criteria, filtered matrix, 1-norm diagonal
//! * [`aggregation`] - aggregates, tentative prolongator, auxiliary transfer
//! * [`hierarchy`] - prolongator smoothing and the multilevel setup
//! * [`solvers`] - smoothers, coarse solve, V-cycle and PCG
//! * [`demo`] - Jacobi error-smoothing illustration
//!
//! Row-wise kernels run on rayon when the `parallel` feature is enabled
//! (the default); every kernel also has a sequential path selected through
//! [`Execution`].

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod aggregation;
pub mod demo;
pub mod error;
pub mod exec;
pub mod fem;
pub mod filter;
pub mod hierarchy;
pub mod soc;
pub mod solvers;
pub mod sparse;

pub use error::{AmgError, Result};
pub use exec::Execution;
pub use sparse::CsrMatrix;
