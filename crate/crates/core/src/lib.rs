//! Pre-bialgebras of matrix product operator symmetries: fusion tensors, associators,
//! representation theory and MPDO renormalization fixed points.

pub mod error;
pub mod io;
pub mod linalg;
pub mod models;
pub mod mpo_algebra;
pub mod prebialgebra;
pub mod report;
pub mod rep_theory;
pub mod rfp;
pub mod tensor_core;

pub use error::{Error, Result};
pub use linalg::{CMat, CVec, C64};
pub use tensor_core::{Cap, MpoTensor, Operator};
