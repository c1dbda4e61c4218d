//! Stability-radius bounds through the Hamiltonian test matrix H(alpha).
//!
//! For a real n x n matrix A and alpha >= 0,
//!
//! ```text
//! H(alpha) = [ A         -alpha I ]
//!            [ alpha I   -A^T     ]
//! ```
//!
//! is Hamiltonian, and it has an eigenvalue on the imaginary axis exactly
//! when alpha is at least the stability radius gamma(A), the distance from A
//! to the nearest matrix with an imaginary-axis eigenvalue. Bisecting on that
//! predicate brackets gamma(A). For normal A the spectrum of H(alpha) is
//! available in closed form, {+-sqrt(lambda_k^2 - alpha^2)}, which this
//! module uses whenever a normality test passes.
//!
//! When H(alpha) has only real eigenvalues, a rank-2 structured update built
//! from the eigenvectors of the leading eigenvalue forces a conjugate pair
//! onto the imaginary axis, certifying the upper bound
//! gamma(A) <= alpha + 2 ||C||_F.

use crate::eig::{eigenvalues, eigenvectors_for, phase_normalize, smallest_singular_directions};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::perturb::{apply_rado, PerturbationSpec};
use crate::spectrum::format_complex;
use crate::symplectic::{h_transpose, HamMatrix};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Relative factor for the imaginary-axis membership tolerance:
/// an eigenvalue counts as on-axis when |Re| <= 1e-8 * (1 + ||H||_F).
/// An absolute cutoff would misclassify at large norms.
const AXIS_TOL_FACTOR: f64 = 1e-8;

/// Normality gate: closed-form spectra are used only when
/// ||A^T A - A A^T||_F <= 1e-8 * ||A||_F^2.
const NORMALITY_TOL: f64 = 1e-8;

/// Cap on automatic doubling when searching for an upper bisection endpoint.
const MAX_DOUBLINGS: u32 = 10;

/// Residual gate for the analytic eigenvectors of the diagonal coupled system.
const BETA_RESIDUAL_TOL: f64 = 1e-9;

/// Residual gate for eigenvectors reconstructed from the n x n reduced system.
const EIGVEC_RESIDUAL_TOL: f64 = 1e-7;

/// |Re| gate (scaled by 1 + ||K||_F) for the pair the forcing update injects.
const FORCED_AXIS_TOL: f64 = 1e-7;

/// A matrix A together with its assembled test matrix H(alpha).
#[derive(Debug, Clone)]
pub struct HAlphaSystem {
    a: Mat,
    alpha: f64,
    h: HamMatrix,
}

impl HAlphaSystem {
    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn h(&self) -> &HamMatrix {
        &self.h
    }
}

/// One imaginary-axis probe: the minimizing eigenvalue and its |Re|.
#[derive(Debug, Clone, Copy)]
pub struct AxisTest {
    pub on_axis: bool,
    /// Eigenvalue minimizing |Re| over the tested spectrum.
    pub witness: Complex64,
    pub min_abs_real: f64,
}

/// Per-probe record justifying a bracket update.
#[derive(Debug, Clone, Copy)]
pub struct Certificate {
    pub alpha: f64,
    pub min_abs_real: f64,
}

/// Bracketing interval for the stability radius.
///
/// Invariants on success: `lower < upper`, the axis test is false at `lower`
/// (or `lower` is 0, covered by the input stability check) and true at
/// `upper`, and `upper - lower <= tol`. The degenerate case of an input that
/// already touches the axis returns `[0, 0]` with a `diagnostic` instead.
#[derive(Debug, Clone)]
pub struct BisectionResult {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub certificates: Vec<Certificate>,
    pub diagnostic: Option<String>,
}

/// Coupling block for the analytic eigenvector construction: a uniform
/// alpha I or a general nonsingular diagonal D.
#[derive(Debug, Clone)]
pub enum Coupling {
    Alpha(f64),
    Diagonal(Vec<f64>),
}

/// Rank-2 update that forces an imaginary-axis eigenvalue pair onto H(alpha),
/// with the certified bound gamma(A) <= alpha + 2 ||C||_F.
#[derive(Debug, Clone)]
pub struct ForcedPerturbation {
    /// K = H(alpha) + X C X^H.
    pub k: HamMatrix,
    /// The 2 x 2 Hamiltonian core [[a, b], [c, -a]].
    pub c: HamMatrix,
    /// The conjugate pair the update injects (|Re| within tolerance of 0).
    pub injected: [Complex64; 2],
    /// Eigenvalues of H(alpha) the update leaves in place.
    pub retained: Vec<Complex64>,
    /// alpha + 2 ||C||_F.
    pub bound: f64,
    /// ||X C X^H||_F with X as constructed (not orthonormal).
    pub raw_update_norm: f64,
    /// ||Q C Q^H||_F with Q an orthonormal basis of col(X); norm preservation
    /// holds only in this form, so both norms are reported and the
    /// discrepancy is left visible.
    pub orthonormal_update_norm: f64,
}

/// Assemble H(alpha) = [[A, -alpha I], [alpha I, -A^T]].
pub fn build_h_alpha(a: &Mat, alpha: f64) -> Result<HAlphaSystem> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "H(alpha) needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.all_finite() || !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::Domain(
            "H(alpha) needs finite entries and a nonnegative alpha".into(),
        ));
    }
    let n = a.rows();
    let at = a.transpose();
    let mut h = Mat::zeros(2 * n, 2 * n);
    h.set_block(0, 0, a);
    h.set_block(n, n, &-&at);
    for i in 0..n {
        h[(i, n + i)] = -alpha;
        h[(n + i, i)] = alpha;
    }
    // The off-diagonal blocks are exact multiples of I, so the structure
    // residual is exactly zero.
    let h = HamMatrix::certify(h).expect("H(alpha) is Hamiltonian by construction");
    Ok(HAlphaSystem {
        a: a.clone(),
        alpha,
        h,
    })
}

/// Default on-axis tolerance for a given test matrix.
pub fn default_axis_tol(h: &HamMatrix) -> f64 {
    AXIS_TOL_FACTOR * (1.0 + h.body().frobenius_norm())
}

/// Commutator test ||A^T A - A A^T||_F <= 1e-8 ||A||_F^2.
pub fn is_normal(a: &Mat) -> bool {
    if !a.is_square() {
        return false;
    }
    let at = a.transpose();
    let commutator = &(&at * a) - &(a * &at);
    let scale = a.frobenius_norm();
    commutator.frobenius_norm() <= NORMALITY_TOL * scale * scale
}

/// Closed-form spectrum of H(alpha) for a normal A with the given
/// eigenvalues: the 2n values +-sqrt(lambda_k^2 - alpha^2) under the
/// principal square root, multiplicities preserved, sorted by (re, im).
pub fn spectrum_normal_closed_form(eigs: &[Complex64], alpha: f64) -> Vec<Complex64> {
    let mut values = Vec::with_capacity(2 * eigs.len());
    for lambda in eigs {
        let root = (lambda * lambda - alpha * alpha).sqrt();
        values.push(root);
        values.push(-root);
    }
    values.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
    values
}

/// Spectrum of H(alpha), using the closed form when A passes the normality
/// test and the generic eigenvalue path otherwise.
pub fn h_alpha_spectrum(sys: &HAlphaSystem) -> Result<Vec<Complex64>> {
    if is_normal(&sys.a) {
        let eigs = eigenvalues(&sys.a)?.values;
        Ok(spectrum_normal_closed_form(&eigs, sys.alpha))
    } else {
        Ok(eigenvalues(sys.h.body())?.values)
    }
}

fn axis_test_of(values: &[Complex64], tol: f64) -> AxisTest {
    debug_assert!(!values.is_empty());
    let witness = values
        .iter()
        .copied()
        .min_by(|p, q| p.re.abs().total_cmp(&q.re.abs()))
        .expect("spectrum is nonempty");
    let min_abs_real = witness.re.abs();
    AxisTest {
        on_axis: min_abs_real <= tol,
        witness,
        min_abs_real,
    }
}

/// Does H have an eigenvalue with |Re| <= tol? Returns the minimizing
/// eigenvalue as witness either way.
pub fn has_imaginary_axis_eigenvalue(h: &HamMatrix, tol: f64) -> Result<AxisTest> {
    if !tol.is_finite() || tol < 0.0 {
        return Err(Error::Domain("axis tolerance must be nonnegative".into()));
    }
    let values = eigenvalues(h.body())?.values;
    Ok(axis_test_of(&values, tol))
}

/// Axis probe for one assembled system, at the default scaled tolerance.
pub fn axis_probe(sys: &HAlphaSystem) -> Result<AxisTest> {
    let values = h_alpha_spectrum(sys)?;
    Ok(axis_test_of(&values, default_axis_tol(&sys.h)))
}

fn probe_at(a: &Mat, alpha: f64, certificates: &mut Vec<Certificate>) -> Result<bool> {
    let sys = build_h_alpha(a, alpha)?;
    let test = axis_probe(&sys)?;
    certificates.push(Certificate {
        alpha,
        min_abs_real: test.min_abs_real,
    });
    Ok(test.on_axis)
}

/// Bracket the stability radius gamma(A) by bisection on the imaginary-axis
/// test.
///
/// `alpha_max`, when given, must already test true; otherwise the search
/// starts at ||A||_F + 1 and doubles (at most 2^10 times) until the test
/// flips. Every probe, including the endpoint search, is recorded as a
/// certificate; `iterations` counts only the bisection steps, so it is at
/// most ceil(log2(span / tol)).
pub fn stability_radius_bisection(
    a: &Mat,
    tol: f64,
    alpha_max: Option<f64>,
) -> Result<BisectionResult> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "stability radius needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.all_finite() {
        return Err(Error::Domain("matrix entries must be finite".into()));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "bisection tolerance must be positive, got {tol}"
        )));
    }

    // Degenerate input: an eigenvalue already on the axis means gamma(A) = 0.
    let input_spectrum = eigenvalues(a)?.values;
    let input_tol = AXIS_TOL_FACTOR * (1.0 + a.frobenius_norm());
    let closest = axis_test_of(&input_spectrum, input_tol);
    if closest.on_axis {
        return Ok(BisectionResult {
            lower: 0.0,
            upper: 0.0,
            iterations: 0,
            certificates: Vec::new(),
            diagnostic: Some(format!(
                "input already has the imaginary-axis eigenvalue {}; the stability radius is 0",
                format_complex(closest.witness)
            )),
        });
    }

    let mut certificates = Vec::new();
    let mut lower = 0.0_f64;
    let upper;
    match alpha_max {
        Some(am) => {
            if !am.is_finite() || am <= 0.0 {
                return Err(Error::Domain(format!(
                    "alpha_max must be positive, got {am}"
                )));
            }
            if !probe_at(a, am, &mut certificates)? {
                return Err(Error::Bracket(format!(
                    "H(alpha) has no imaginary-axis eigenvalue at alpha_max = {am}; \
                     choose a larger endpoint"
                )));
            }
            upper = am;
        }
        None => {
            let mut candidate = a.frobenius_norm() + 1.0;
            let mut found = None;
            for _ in 0..=MAX_DOUBLINGS {
                if probe_at(a, candidate, &mut certificates)? {
                    found = Some(candidate);
                    break;
                }
                lower = candidate;
                candidate *= 2.0;
            }
            match found {
                Some(am) => upper = am,
                None => {
                    return Err(Error::Bracket(format!(
                        "no imaginary-axis eigenvalue found up to alpha = {}",
                        candidate / 2.0
                    )));
                }
            }
        }
    }

    let mut upper = upper;
    let mut iterations = 0;
    while upper - lower > tol {
        let mid = 0.5 * (lower + upper);
        if mid <= lower || mid >= upper {
            // Floating-point resolution exhausted before reaching tol.
            break;
        }
        iterations += 1;
        if probe_at(a, mid, &mut certificates)? {
            upper = mid;
        } else {
            lower = mid;
        }
    }

    Ok(BisectionResult {
        lower,
        upper,
        iterations,
        certificates,
        diagnostic: None,
    })
}

/// Force an imaginary-axis pair onto H(alpha) by a rank-2 structured update.
///
/// Requires alpha > 0, a core triple with a^2 + bc < 0, the first canonical
/// vector an eigenvector of A for lambda_1 = A[0,0] with |lambda_1| > alpha,
/// and a real spectrum of H(alpha). X takes the two analytic eigenvectors
/// [beta+- e1; e1] for +-s, s = sqrt(lambda_1^2 - alpha^2), and the update
/// X C X^H runs through the general eigenvalue-replacement machinery. The
/// injected pair is the spectrum of Omega + C X^H X; because of the Omega
/// term it lands on the axis for a = 0 exactly when bc < -alpha^2 / 4, and
/// an off-axis outcome is reported as an error rather than glossed over.
pub fn force_imaginary_axis(
    sys: &HAlphaSystem,
    c_entries: (f64, f64, f64),
) -> Result<ForcedPerturbation> {
    let (ca, cb, cc) = c_entries;
    if !(ca.is_finite() && cb.is_finite() && cc.is_finite()) {
        return Err(Error::Domain("core entries must be finite".into()));
    }
    if ca * ca + cb * cc >= 0.0 {
        return Err(Error::Domain(format!(
            "core entries must satisfy a^2 + bc < 0, got {}",
            ca * ca + cb * cc
        )));
    }
    if sys.alpha <= 0.0 {
        return Err(Error::Domain(
            "forcing requires alpha > 0; at alpha = 0 the eigenvector pair degenerates".into(),
        ));
    }

    let a = &sys.a;
    let n = a.rows();
    let lambda1 = a[(0, 0)];
    let e1_residual = (0..n)
        .map(|i| {
            let want = if i == 0 { lambda1 } else { 0.0 };
            (a[(i, 0)] - want).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    if e1_residual > 1e-10 * (1.0 + a.frobenius_norm()) {
        return Err(Error::Structure(format!(
            "the first canonical vector must be an eigenvector of A \
             (residual {e1_residual:.3e}); the analytic columns [beta e1; e1] require it"
        )));
    }
    if lambda1.abs() <= sys.alpha {
        return Err(Error::Structure(format!(
            "|A[0,0]| = {} must exceed alpha = {} so that beta+- are real",
            lambda1.abs(),
            sys.alpha
        )));
    }
    let h_values = h_alpha_spectrum(sys)?;
    let real_tol = default_axis_tol(&sys.h);
    if let Some(bad) = h_values.iter().find(|z| z.im.abs() > real_tol) {
        return Err(Error::Structure(format!(
            "H(alpha) must have an all-real spectrum; found {}",
            format_complex(*bad)
        )));
    }

    let s = (lambda1 * lambda1 - sys.alpha * sys.alpha).sqrt();
    let beta_plus = (lambda1 + s) / sys.alpha;
    let beta_minus = (lambda1 - s) / sys.alpha;
    // H(alpha) [beta e1; e1] = (alpha beta - lambda_1) [beta e1; e1], so
    // beta+ pairs with +s and beta- with -s.
    let mut x = Mat::zeros(2 * n, 2);
    x[(0, 0)] = beta_plus;
    x[(n, 0)] = 1.0;
    x[(0, 1)] = beta_minus;
    x[(n, 1)] = 1.0;
    let omega = Mat::from_row_slice(2, 2, &[s, 0.0, 0.0, -s]);
    let c = HamMatrix::certify(Mat::from_row_slice(2, 2, &[ca, cb, cc, -ca]))?;

    let spec = PerturbationSpec::new(x.clone(), omega, c.clone())?;
    let report = apply_rado(&sys.h, &spec)?;
    let injected = [report.replaced[0], report.replaced[1]];
    let k_norm = report.updated.body().frobenius_norm();
    for mu in &injected {
        if mu.re.abs() > FORCED_AXIS_TOL * (1.0 + k_norm) {
            return Err(Error::Inconsistency(format!(
                "the update reaches {} instead of the imaginary axis; the Omega term \
                 diag(s, -s) in the core matrix shifts the injected pair off-axis for \
                 these core entries",
                format_complex(*mu)
            )));
        }
    }

    let xh = h_transpose(&x)?;
    let raw_update_norm = (&(&x * c.body()) * &xh).frobenius_norm();
    let q = x
        .orthonormal_columns(1e-10)
        .ok_or_else(|| Error::Rank("analytic eigenvector columns are dependent".into()))?;
    let qh = h_transpose(&q)?;
    let orthonormal_update_norm = (&(&q * c.body()) * &qh).frobenius_norm();

    Ok(ForcedPerturbation {
        k: report.updated,
        c: c.clone(),
        injected,
        retained: report.retained,
        bound: sys.alpha + 2.0 * c.body().frobenius_norm(),
        raw_update_norm,
        orthonormal_update_norm,
    })
}

/// Analytic eigenpairs of the diagonal coupled system
/// [[diag(lambda), -D], [D, -diag(lambda)]]: for each k the pair
/// (+-sqrt(lambda_k^2 - d_k^2), [beta_k e_k; e_k]) with
/// beta_k = (lambda_k +- sqrt(lambda_k^2 - d_k^2)) / d_k, each residual
/// checked against the assembled block matrix.
pub fn beta_eigvectors(
    eigs: &[f64],
    coupling: &Coupling,
) -> Result<Vec<(Complex64, Vec<Complex64>)>> {
    let n = eigs.len();
    if n == 0 {
        return Err(Error::Dimension("need at least one eigenvalue".into()));
    }
    if eigs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("eigenvalues must be finite".into()));
    }
    let d: Vec<f64> = match coupling {
        Coupling::Alpha(alpha) => {
            if !alpha.is_finite() || *alpha <= 0.0 {
                return Err(Error::Domain(format!(
                    "uniform coupling needs alpha > 0, got {alpha}"
                )));
            }
            vec![*alpha; n]
        }
        Coupling::Diagonal(entries) => {
            if entries.len() != n {
                return Err(Error::Dimension(format!(
                    "coupling has {} entries for {n} eigenvalues",
                    entries.len()
                )));
            }
            if entries.iter().any(|v| !v.is_finite() || *v == 0.0) {
                return Err(Error::Domain(
                    "diagonal coupling entries must be finite and nonzero".into(),
                ));
            }
            entries.clone()
        }
    };

    // Assembled system for the residual check.
    let mut h = Mat::zeros(2 * n, 2 * n);
    for k in 0..n {
        h[(k, k)] = eigs[k];
        h[(n + k, n + k)] = -eigs[k];
        h[(k, n + k)] = -d[k];
        h[(n + k, k)] = d[k];
    }

    let mut pairs = Vec::with_capacity(2 * n);
    for k in 0..n {
        let root = Complex64::new(eigs[k] * eigs[k] - d[k] * d[k], 0.0).sqrt();
        for value in [root, -root] {
            let beta = (eigs[k] + value) / d[k];
            let mut z = vec![Complex64::new(0.0, 0.0); 2 * n];
            z[k] = beta;
            z[n + k] = Complex64::new(1.0, 0.0);
            let hz = h.mul_cvec(&z);
            let norm = z.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
            let residual = hz
                .iter()
                .zip(&z)
                .map(|(p, q)| (p - value * q).norm_sqr())
                .sum::<f64>()
                .sqrt()
                / norm;
            if residual > BETA_RESIDUAL_TOL * (1.0 + h.frobenius_norm()) {
                return Err(Error::Inconsistency(format!(
                    "analytic eigenpair for lambda = {} fails its residual check ({residual:.3e})",
                    eigs[k]
                )));
            }
            pairs.push((value, z));
        }
    }
    Ok(pairs)
}

/// Reconstruct an eigenvector of H(alpha) for a given eigenvalue lambda from
/// the n x n reduced system
/// [(alpha^2 + lambda^2) I - A^T A + lambda (A^T - A)] x = 0,
/// returning z = [alpha x; (A - lambda I) x] (unit norm, phase-normalized).
/// At alpha = 0 the z-form degenerates, so the direct eigenvector of
/// diag(A, -A^T) is returned instead.
pub fn eigvec_structure(a: &Mat, alpha: f64, lambda: Complex64) -> Result<Vec<Complex64>> {
    let sys = build_h_alpha(a, alpha)?;
    let n = a.rows();
    let match_tol = 1e-8 * (1.0 + sys.h.body().frobenius_norm());
    let h_values = h_alpha_spectrum(&sys)?;
    let distance = h_values
        .iter()
        .map(|z| (z - lambda).norm())
        .fold(f64::INFINITY, f64::min);
    if distance > match_tol {
        return Err(Error::NotAnEigenvalue(format!(
            "{} is {distance:.3e} away from the spectrum of H(alpha)",
            format_complex(lambda)
        )));
    }

    let mut z;
    if alpha == 0.0 {
        // Uncoupled case: H(0) = diag(A, -A^T). Take the direct eigenvector
        // from whichever diagonal block owns lambda.
        let a_values = eigenvalues(a)?.values;
        let in_a = a_values.iter().any(|v| (v - lambda).norm() <= match_tol);
        z = vec![Complex64::new(0.0, 0.0); 2 * n];
        if in_a {
            let pair = eigenvectors_for(a, &[lambda], match_tol)?;
            z[..n].copy_from_slice(&pair[0].vector);
        } else {
            // A^T w = -lambda w makes [0; w] an eigenvector for lambda.
            let pair = eigenvectors_for(&a.transpose(), &[-lambda], match_tol)?;
            z[n..].copy_from_slice(&pair[0].vector);
        }
    } else {
        let at = a.transpose();
        let ata = &at * a;
        let skew = &at - a;
        let shift = Complex64::new(alpha * alpha, 0.0) + lambda * lambda;
        let m = DMatrix::from_fn(n, n, |i, j| {
            let mut v = Complex64::new(-ata[(i, j)], 0.0) + lambda * skew[(i, j)];
            if i == j {
                v += shift;
            }
            v
        });
        let m_scale = m.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
        // When lambda is an exact eigenvalue the assembled M can cancel to
        // round-off entirely (n = 1 gives a 1 x 1 zero), leaving ||M|| itself
        // at noise level; the relative gate then needs an absolute floor at
        // the natural scale of the ingredients.
        let natural_scale = alpha * alpha + lambda.norm_sqr() + a.frobenius_norm().powi(2);
        let gate = 1e-6 * m_scale + 1e-12 * natural_scale;
        let (sigma_min, x) = smallest_singular_directions(&m, 1).swap_remove(0);
        if sigma_min > gate {
            return Err(Error::Inconsistency(format!(
                "the reduced system has no numerical null vector \
                 (smallest singular value {sigma_min:.3e} vs scale {m_scale:.3e})"
            )));
        }
        let ax = a.mul_cvec(&x);
        z = Vec::with_capacity(2 * n);
        for xi in &x {
            z.push(alpha * xi);
        }
        for i in 0..n {
            z.push(ax[i] - lambda * x[i]);
        }
    }

    phase_normalize(&mut z);
    let hz = sys.h.body().mul_cvec(&z);
    let residual = hz
        .iter()
        .zip(&z)
        .map(|(p, q)| (p - lambda * q).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > EIGVEC_RESIDUAL_TOL * (1.0 + sys.h.body().frobenius_norm()) {
        return Err(Error::Inconsistency(format!(
            "reconstructed vector has residual {residual:.3e} against H(alpha)"
        )));
    }
    Ok(z)
}
