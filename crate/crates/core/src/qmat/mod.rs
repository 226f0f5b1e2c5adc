//! Exact-shape complex matrix algebra for small dense operators: Hermitian
//! eigendecomposition, trace norm, partial trace, tensor products, and
//! Gram-matrix factorization into unit vectors.

mod eig;
mod gram;
mod matrix;

pub use eig::{
    eig_hermitian, eigvals_hermitian, matrix_sqrt, pseudo_inverse_sqrt, trace_norm, Eigen,
};
pub use gram::{gram_of_vectors, gram_to_vectors};
pub use matrix::{partial_trace, CMatrix, HermitianMatrix, Keep, C64};
