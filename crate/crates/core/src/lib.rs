//! Updating symmetric eigendecompositions under signed low-rank changes.
//!
//! Given `A = Q diag(lambda) Q^T` and an update `K J K^T` with `J` a diagonal
//! sign matrix, the new eigenvalues are the roots of a multi-rank secular
//! function. They are located interval by interval (coefficient signs for
//! rank two, a Sturm chain in secular form in general), solved by a
//! divide-and-conquer zero finder, and each eigenvector is rebuilt from a
//! small null-space problem.
//!
//! ```
//! use nalgebra::DMatrix;
//! use rkeig_core::{update_decomposition, LowRankUpdate, SpectralDecomposition};
//!
//! let d = SpectralDecomposition::new(DMatrix::identity(2, 2), vec![0.0, 1.0]).unwrap();
//! let k = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
//! let r = update_decomposition(&d, &LowRankUpdate::positive(k).unwrap(), 1e-14).unwrap();
//! let s = 2f64.sqrt();
//! assert!((r.decomposition.eigenvalues()[0] - (2.0 - s)).abs() < 1e-14);
//! assert!(r.residual_fro < 1e-13);
//! ```

pub mod baseline;
pub mod decomp;
pub mod dense;
pub mod eigvec;
pub mod error;
pub mod io;
pub mod locate;
mod prep;
pub mod rootfind;
pub mod secular;
pub mod sturm;

pub use baseline::{jacobi_evd, perturbation_update, JacobiConfig};
pub use decomp::{
    apply_update, eigenvalue_error, orthonormality_error, parse_signs, random_instance,
    random_instance_with_signs, random_update_matrix, reconstruction_error, LowRankUpdate, Sign,
    SpectralDecomposition, UpdateResult,
};
pub use dense::SymmetricDense;
pub use eigvec::{
    null_direction, update_decomposition, update_decomposition_with, update_eigenvector,
    updated_pairs, NullProblem,
};
pub use error::{Error, Result, Stage};
pub use locate::{
    interlacing_bounds, locate_by_inertia, locate_rank2, locate_rank2_confirmed, locate_rank_k,
    LocationVector, ShiftKind,
};
pub use prep::{MERGE_GAP, WEIGHT_DEFLATION};
pub use rootfind::{
    default_tol, dnc_solve, locate_update, solve_rank1, timed_update_eigenvalues,
    update_eigenvalues, update_eigenvalues_with, Locator, Root, RootBracket, UpdateOptions,
};
pub use secular::{
    rank2_split, secular_coefficients, transform_update, SecularCoefficients, TransformedUpdate,
};
pub use sturm::{
    build_chain, chain_start, count_all_roots, count_roots, deflate, deflate_with, long_division,
    DeflationPairing, RootCensus, RootCount, SturmChain, SturmStep,
};
