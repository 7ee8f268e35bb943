//! Dense complex linear algebra: Schur factorization, eigenpairs, singular
//! values and unitary completion.

mod eigen;
mod io;
mod matrix;
pub mod random;
mod schur;
mod svd;

pub use eigen::{
    eigenpair_from_schur, find_cluster, normalize_phase, right_left_eigenpair,
    unitary_with_first_column, Eigenpair,
};
pub use io::{read_matrix, read_matrix_file, write_matrix, write_matrix_file};
pub use matrix::{inner, vector_norm, ComplexMatrix};
pub use schur::{schur, sweep_budget, SchurForm};
pub use svd::{
    frobenius_norm, operator_norm, singular_values, smallest_right_singular_vector,
    smallest_singular_value, svd, Svd,
};

/// Numerical tolerances, each relative to `‖A‖_F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest `σ_min(A − λI)` accepted for an eigenvalue `λ`.
    pub eig: f64,
    /// Eigenvalues closer than this are treated as a cluster.
    pub cluster: f64,
    /// Largest admissible norm of the subdiagonal column of `Qᴴ·A·Q`.
    pub block: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eig: 1e-8, cluster: 1e-8, block: 1e-8 }
    }
}
