//! Structure-preserving eigenvalue replacement for Hamiltonian matrices.
//!
//! Given r eigenpairs of a Hamiltonian A assembled as columns of X with
//! block-diagonal Omega (A X = X Omega) and an r x r Hamiltonian core C, the
//! update `A + X C X^H` is again Hamiltonian; it replaces the r targeted
//! eigenvalues with the spectrum of `B = Omega + C X^H X` and leaves the
//! remaining eigenvalues in place.
//!
//! Everything here stays over the reals: a conjugate pair of targets
//! contributes the real and imaginary parts of one complex eigenvector as two
//! columns of X, and Omega carries the matching 2x2 rotation block, so the
//! update never leaves real arithmetic.

use crate::eig::{eigenvalues, eigenvalues_via_oracle, eigenvectors_for, CHARPOLY_DIM_CAP};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::spectrum::{format_complex, pairing_error, remove_closest};
use crate::symplectic::{h_transpose, HamMatrix};
use num_complex::Complex64;

/// Matching tolerance for conjugate partners inside a target list.
const TARGET_CLOSURE_TOL: f64 = 1e-9;

/// Relative factor for the `A X = X Omega` residual gate.
const EIGENPAIR_TOL_FACTOR: f64 = 1e-8;

/// Tolerance on `sigma(updated)` vs `replaced + retained`.
const SPLIT_TOL: f64 = 1e-7;

/// Columns-and-core bundle describing one Rado update.
#[derive(Debug, Clone)]
pub struct PerturbationSpec {
    x: Mat,
    omega: Mat,
    c: HamMatrix,
}

impl PerturbationSpec {
    /// Validate shapes: X is 2n x r, Omega and C are r x r, r even.
    /// The eigenpair property of (X, Omega) is checked against a concrete A
    /// in [`apply_rado`].
    pub fn new(x: Mat, omega: Mat, c: HamMatrix) -> Result<PerturbationSpec> {
        if !x.all_finite() || !omega.all_finite() {
            return Err(Error::Domain("perturbation inputs must be finite".into()));
        }
        let r = c.dim();
        if x.cols() != r || omega.rows() != r || omega.cols() != r {
            return Err(Error::Dimension(format!(
                "inconsistent perturbation shapes: X is {}x{}, Omega is {}x{}, C is {r}x{r}",
                x.rows(),
                x.cols(),
                omega.rows(),
                omega.cols()
            )));
        }
        if !x.rows().is_multiple_of(2) {
            return Err(Error::Dimension(format!(
                "X must have an even number of rows, got {}",
                x.rows()
            )));
        }
        Ok(PerturbationSpec { x, omega, c })
    }

    pub fn x(&self) -> &Mat {
        &self.x
    }

    pub fn omega(&self) -> &Mat {
        &self.omega
    }

    pub fn core(&self) -> &HamMatrix {
        &self.c
    }

    /// Eigenvalues the update will replace: the spectrum of Omega.
    pub fn targets(&self) -> Result<Vec<Complex64>> {
        Ok(eigenvalues(&self.omega)?.values)
    }
}

/// Eigenvector/eigenvalue selection produced by [`select_targets`], awaiting
/// a core matrix C.
#[derive(Debug, Clone)]
pub struct TargetSelection {
    pub x: Mat,
    pub omega: Mat,
    /// Computed eigenvalues matched to the requested targets, in target order.
    pub matched: Vec<Complex64>,
}

impl TargetSelection {
    pub fn with_core(self, c: HamMatrix) -> Result<PerturbationSpec> {
        PerturbationSpec::new(self.x, self.omega, c)
    }
}

/// Outcome of one structure-preserving update.
#[derive(Debug, Clone)]
pub struct PerturbationReport {
    pub updated: HamMatrix,
    /// Spectrum of the core matrix B: the eigenvalues written in.
    pub replaced: Vec<Complex64>,
    /// Untargeted eigenvalues of A, which the update leaves in place.
    pub retained: Vec<Complex64>,
    /// B = Omega + C X^H X.
    pub core_matrix: Mat,
    /// Pairing distance between sigma(updated) and replaced + retained.
    pub predicted_vs_achieved: f64,
}

/// Assemble X and Omega for the requested eigenvalues of A.
///
/// Complex targets must come with their conjugates; each pair occupies two
/// real columns (Re v, Im v) and a 2x2 rotation block in Omega. Real targets
/// occupy one column each. The target count must be even so a Hamiltonian
/// core C can exist.
pub fn select_targets(a: &HamMatrix, targets: &[Complex64]) -> Result<TargetSelection> {
    if targets.is_empty() || !targets.len().is_multiple_of(2) {
        return Err(Error::Parity(format!(
            "target count must be even and positive, got {}",
            targets.len()
        )));
    }
    let dim = a.dim();
    if targets.len() > dim {
        return Err(Error::Dimension(format!(
            "{} targets exceed the matrix dimension {dim}",
            targets.len()
        )));
    }

    // Reduce to one representative per conjugate pair, keeping real targets.
    enum Slot {
        Real { reduced: usize },
        Pair { reduced: usize },
    }
    let mut consumed = vec![false; targets.len()];
    let mut reduced: Vec<Complex64> = Vec::new();
    let mut slots: Vec<Slot> = Vec::new();
    for i in 0..targets.len() {
        if consumed[i] {
            continue;
        }
        let t = targets[i];
        consumed[i] = true;
        if t.im.abs() <= TARGET_CLOSURE_TOL {
            reduced.push(Complex64::new(t.re, 0.0));
            slots.push(Slot::Real {
                reduced: reduced.len() - 1,
            });
        } else {
            let want = t.conj();
            let partner = (i + 1..targets.len())
                .find(|&j| !consumed[j] && (targets[j] - want).norm() <= TARGET_CLOSURE_TOL);
            match partner {
                Some(j) => consumed[j] = true,
                None => {
                    return Err(Error::Closure(format!(
                        "complex target {} lacks its conjugate {}",
                        format_complex(t),
                        format_complex(want)
                    )));
                }
            }
            reduced.push(if t.im > 0.0 { t } else { want });
            slots.push(Slot::Pair {
                reduced: reduced.len() - 1,
            });
        }
    }

    let tol = EIGENPAIR_TOL_FACTOR * (1.0 + a.body().frobenius_norm());
    let pairs = eigenvectors_for(a.body(), &reduced, tol)?;

    // Assemble real columns and Omega blocks in slot order.
    let r = targets.len();
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(r);
    let mut omega = Mat::zeros(r, r);
    let mut matched: Vec<Complex64> = Vec::new();
    for slot in &slots {
        match *slot {
            Slot::Real { reduced } => {
                let pair = &pairs[reduced];
                let imag_norm = pair.vector.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
                if imag_norm > tol {
                    return Err(Error::Inconsistency(format!(
                        "eigenvector for real target {} has imaginary mass {imag_norm:.3e}",
                        format_complex(pair.value)
                    )));
                }
                let k = columns.len();
                omega[(k, k)] = pair.value.re;
                columns.push(pair.vector.iter().map(|z| z.re).collect());
                matched.push(Complex64::new(pair.value.re, 0.0));
            }
            Slot::Pair { reduced } => {
                let pair = &pairs[reduced];
                let (av, bv) = (pair.value.re, pair.value.im);
                let k = columns.len();
                omega[(k, k)] = av;
                omega[(k, k + 1)] = bv;
                omega[(k + 1, k)] = -bv;
                omega[(k + 1, k + 1)] = av;
                columns.push(pair.vector.iter().map(|z| z.re).collect());
                columns.push(pair.vector.iter().map(|z| z.im).collect());
                matched.push(pair.value);
                matched.push(pair.value.conj());
            }
        }
    }
    let x = Mat::from_cols(&columns);
    if x.column_rank(1e-8) < r {
        return Err(Error::Rank(
            "selected eigenvector columns are numerically dependent".into(),
        ));
    }
    Ok(TargetSelection { x, omega, matched })
}

/// The core matrix `B = Omega + C X^H X` and its eigenvalues.
///
/// For core sizes within the polynomial oracle's cap, the eigenvalues are
/// cross-checked against the independent oracle route.
pub fn predict_core(spec: &PerturbationSpec) -> Result<(Mat, Vec<Complex64>)> {
    let r = spec.c.dim();
    if spec.x.column_rank(1e-8) < r {
        return Err(Error::Rank("X does not have full column rank".into()));
    }
    let xh = h_transpose(&spec.x)?;
    let b = &spec.omega + &(spec.c.body() * &(&xh * &spec.x));
    let primary = eigenvalues(&b)?;
    if r <= CHARPOLY_DIM_CAP {
        let oracle = eigenvalues_via_oracle(&b)?;
        let gap = pairing_error(&primary.values, &oracle.values);
        if gap > 1e-6 {
            return Err(Error::Inconsistency(format!(
                "QR and polynomial-oracle spectra of the core matrix disagree by {gap:.3e}"
            )));
        }
    }
    Ok((b, primary.values))
}

/// Apply the update `A + X C X^H`, verifying every hypothesis numerically.
pub fn apply_rado(a: &HamMatrix, spec: &PerturbationSpec) -> Result<PerturbationReport> {
    if spec.x.rows() != a.dim() {
        return Err(Error::Dimension(format!(
            "X has {} rows but A has dimension {}",
            spec.x.rows(),
            a.dim()
        )));
    }

    // Eigenpair hypothesis: A X = X Omega.
    let residual = (&(a.body() * &spec.x) - &(&spec.x * &spec.omega)).frobenius_norm();
    let pair_tol =
        EIGENPAIR_TOL_FACTOR * (1.0 + a.body().frobenius_norm()) * spec.x.frobenius_norm().max(1.0);
    if residual > pair_tol {
        return Err(Error::EigenResidual(format!(
            "X columns are not eigenvectors of A: ||AX - X Omega|| = {residual:.3e} \
             exceeds {pair_tol:.3e}"
        )));
    }

    let (core_matrix, replaced) = predict_core(spec)?;

    let xh = h_transpose(&spec.x)?;
    let update = &(&spec.x * spec.c.body()) * &xh;
    let updated_body = a.body() + &update;
    let updated = HamMatrix::certify_with_tol(
        updated_body,
        1e-9 * a
            .body()
            .frobenius_norm()
            .max(1.0)
            .max(update.frobenius_norm()),
    )?;

    // Split the original spectrum into targeted and untargeted parts.
    let targets = spec.targets()?;
    let original = eigenvalues(a.body())?;
    let mut pool = original.values.clone();
    let matched = remove_closest(&mut pool, &targets);
    for (ti, value, dist) in &matched {
        if *dist > SPLIT_TOL {
            return Err(Error::NotAnEigenvalue(format!(
                "Omega eigenvalue {} is {dist:.3e} away from the nearest eigenvalue of A \
                 (closest: {})",
                format_complex(targets[*ti]),
                format_complex(*value)
            )));
        }
    }
    let retained = pool;

    // The promised split (replaced + retained) is checked, not assumed.
    let achieved = eigenvalues(updated.body())?;
    let mut predicted: Vec<Complex64> = replaced.clone();
    predicted.extend_from_slice(&retained);
    let predicted_vs_achieved = pairing_error(&achieved.values, &predicted);
    if predicted_vs_achieved > SPLIT_TOL {
        return Err(Error::Inconsistency(format!(
            "updated spectrum deviates from the predicted split by {predicted_vs_achieved:.3e}"
        )));
    }

    Ok(PerturbationReport {
        updated,
        replaced,
        retained,
        core_matrix,
        predicted_vs_achieved,
    })
}
