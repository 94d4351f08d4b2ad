//! Dense complex linear algebra: Hermitian eigensolver, PSD functions,
//! spectral norm and classical numerical radius.

mod eigen;
mod io;
mod matrix;
mod psd;
mod radius;

pub use eigen::{
    check_hermitian, herm_eig, herm_eigvals, EigenDecomposition, HERMITIAN_REL_TOL, MAX_SWEEPS,
    OFF_DIAG_REL_TOL,
};
pub(crate) use eigen::{herm_eig_unchecked, herm_eigvals_unchecked};
pub use io::{matrix_to_json, parse_matrix, read_matrix, write_matrix, MatrixFile};
pub use matrix::{CMatrix, C64};
pub use psd::{pinv_psd, proj_range, psd_sqrt, rank_tol, PsdFactors, PSD_CLAMP_REL};
pub use radius::{
    hermitian_abs_max, numerical_radius, spectral_norm, GRID_POINTS, REFINE_CANDIDATES,
    REFINE_WIDTH,
};
