//! Real Hamiltonian matrices: construction with a prescribed spectrum,
//! structure-preserving low-rank eigenvalue replacement, and stability-radius
//! bounds via the H(alpha) imaginary-axis test.
//!
//! A 2n x 2n real matrix A is Hamiltonian when A^T J + J A = 0 for the
//! symplectic form J = [[0, I_n], [-I_n, 0]]; equivalently A = A^H with the
//! H-transpose A^H = J A^T J defined blockwise for rectangular matrices. Its
//! spectrum is closed under negation and (being real) conjugation.
//!
//! The crate provides three pillars on top of a small dense-matrix core:
//!
//! - [`realize`]: build a Hamiltonian matrix whose spectrum is a prescribed
//!   negation-and-conjugation-closed multiset, from per-family blocks
//!   (real pairs, imaginary pairs, quadruples) glued by a shuffle
//!   permutation.
//! - [`perturb`]: the rank-r update A + X C X^H that stays Hamiltonian and
//!   replaces the r targeted eigenvalues with the spectrum of
//!   Omega + C X^H X while retaining the rest.
//! - [`stability`]: the test matrix H(alpha) = [[A, -alpha I], [alpha I,
//!   -A^T]], whose imaginary-axis eigenvalues characterize the stability
//!   radius; bisection brackets it, and a rank-2 forced update certifies the
//!   upper bound alpha + 2 ||C||_F.
//!
//! Eigenvalues flow through two independent routes: a QR/Schur path for
//! production use and a characteristic-polynomial oracle
//! (Faddeev-LeVerrier coefficients + Durand-Kerner roots) kept deliberately
//! separate for cross-checking. Binary entry points live in the `hamspec`
//! CLI; C callers get a stable ABI from the companion `hamspec-ffi` crate.

pub mod eig;
pub mod error;
pub mod io;
pub mod matrix;
pub mod perturb;
pub mod realize;
pub mod spectrum;
pub mod stability;
pub mod symplectic;
pub mod testkit;

pub use error::{Error, Result};
pub use matrix::Mat;
pub use symplectic::{
    build_j, default_ham_tol, h_transpose, hamiltonian_residual, is_hamiltonian, HamMatrix,
};

pub use eig::{
    charpoly_coefficients, eigenvalues, eigenvalues_via_oracle, eigenvectors_for, EigBackend,
    EigenPair, SpectrumResult,
};
pub use perturb::{
    apply_rado, predict_core, select_targets, PerturbationReport, PerturbationSpec, TargetSelection,
};
pub use realize::{
    direct_sum, realize_imag_pair, realize_quadruple, realize_real_list, realize_spectrum,
    validate_h_realizable, RealizationPlan, Spectrum,
};
pub use spectrum::{format_complex, pairing_error, parse_complex};
pub use stability::{
    beta_eigvectors, build_h_alpha, eigvec_structure, force_imaginary_axis,
    has_imaginary_axis_eigenvalue, is_normal, spectrum_normal_closed_form,
    stability_radius_bisection, AxisTest, BisectionResult, Certificate, Coupling,
    ForcedPerturbation, HAlphaSystem,
};
