//! Dense kernels: LU solves, one-sided Jacobi SVD, Hessenberg/QR
//! eigendecomposition, matrix exponential and subspace utilities.

pub mod eigen;
pub mod expm;
pub mod lu;
pub mod subspace;
pub mod svd;

pub use eigen::{eigen, EigenDecomposition};
pub use expm::{matrix_exp, MAX_SCALED_NORM};
pub use lu::{lu_solve, LuFactors};
pub use subspace::{kernel, orthonormal_basis, principal_angles, Subspace};
pub use svd::{jacobi_svd, Svd};
