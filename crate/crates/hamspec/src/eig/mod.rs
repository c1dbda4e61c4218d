//! Eigenvalues and selected eigenvectors of dense real matrices.
//!
//! The primary backend is the real Schur decomposition (QR iteration) from
//! nalgebra. A characteristic-polynomial oracle ([`charpoly_coefficients`] +
//! [`roots_oracle`]) provides an independent second route for cross-checks;
//! it shares no code with the QR path.

mod charpoly;
mod roots;

pub use charpoly::{charpoly_coefficients, CHARPOLY_DIM_CAP};
pub use roots::{roots_oracle, ROOTS_DEGREE_CAP};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Which route produced a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigBackend {
    /// Real Schur decomposition (QR iteration).
    QrSolver,
    /// Faddeev-LeVerrier characteristic polynomial + Durand-Kerner roots.
    CharpolyOracle,
}

/// A full spectrum with multiplicity, tagged with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Eigenvalues sorted by (re, im); conjugate-pair symmetric for real input.
    pub values: Vec<Complex64>,
    pub backend: EigBackend,
}

/// One eigenvalue with a unit eigenvector and its verified residual.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: Complex64,
    /// Unit 2-norm; first significant component rotated real-positive.
    pub vector: Vec<Complex64>,
    /// `||Av - lambda v||_2 / ||v||_2`.
    pub residual: f64,
}

const QR_MAX_ITERATIONS: usize = 10_000;

/// All eigenvalues of a square real matrix.
///
/// Conjugate symmetry is enforced on near-pairs and the result is sorted by
/// (re, im) so identical inputs always produce identical output. If the QR
/// iteration fails to converge, the polynomial oracle takes over for
/// dimensions within its cap (the `backend` tag records this).
pub fn eigenvalues(a: &Mat) -> Result<SpectrumResult> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.all_finite() {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let na = to_na(a);
    match nalgebra::linalg::Schur::try_new(na, f64::EPSILON, QR_MAX_ITERATIONS) {
        Some(schur) => {
            let mut values: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
            enforce_conjugate_pairs(&mut values);
            sort_values(&mut values);
            Ok(SpectrumResult {
                values,
                backend: EigBackend::QrSolver,
            })
        }
        None => {
            if a.rows() <= CHARPOLY_DIM_CAP {
                eigenvalues_via_oracle(a)
            } else {
                Err(Error::NonConvergence(format!(
                    "QR iteration exceeded {QR_MAX_ITERATIONS} sweeps on a {n}x{n} matrix \
                     and the polynomial oracle is capped below that size",
                    n = a.rows()
                )))
            }
        }
    }
}

/// Spectrum via the independent polynomial route (dimension-capped).
pub fn eigenvalues_via_oracle(a: &Mat) -> Result<SpectrumResult> {
    let coeffs = charpoly_coefficients(a)?;
    let mut values = roots_oracle(&coeffs)?;
    enforce_conjugate_pairs(&mut values);
    sort_values(&mut values);
    Ok(SpectrumResult {
        values,
        backend: EigBackend::CharpolyOracle,
    })
}

/// Eigenvectors for the requested eigenvalues, in target order.
///
/// Targets closer than `tol` to each other are treated as one eigenvalue of
/// higher multiplicity and receive orthonormal basis vectors of the
/// corresponding null space. The assembled columns are verified to have full
/// rank.
pub fn eigenvectors_for(a: &Mat, targets: &[Complex64], tol: f64) -> Result<Vec<EigenPair>> {
    // NaN must fail this gate too, so the comparison accepts rather than rejects.
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if targets.is_empty() {
        return Ok(Vec::new());
    }
    if targets
        .iter()
        .any(|t| !t.re.is_finite() || !t.im.is_finite())
    {
        return Err(Error::Domain("non-finite target eigenvalue".into()));
    }
    let spectrum = eigenvalues(a)?;

    // Match each target against the computed spectrum.
    let mut matched = Vec::with_capacity(targets.len());
    for t in targets {
        let (value, dist) = spectrum
            .values
            .iter()
            .map(|v| (*v, (t - v).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("spectrum is nonempty");
        if dist > tol {
            return Err(Error::NotAnEigenvalue(format!(
                "target {t} is {dist:.3e} away from the nearest eigenvalue {value}"
            )));
        }
        matched.push(value);
    }

    // Cluster matched values within tol: one group per geometric eigenvalue.
    struct Group {
        rep: Complex64,
        target_slots: Vec<usize>,
    }
    let mut groups: Vec<Group> = Vec::new();
    for (slot, value) in matched.iter().enumerate() {
        match groups.iter_mut().find(|g| (g.rep - value).norm() <= tol) {
            Some(g) => g.target_slots.push(slot),
            None => groups.push(Group {
                rep: *value,
                target_slots: vec![slot],
            }),
        }
    }

    let mut pairs: Vec<Option<EigenPair>> = vec![None; targets.len()];
    for group in &groups {
        let m = group.target_slots.len();
        let shifted = shifted_complex(a, group.rep);
        let directions = smallest_singular_directions(&shifted, m);
        for (k, &slot) in group.target_slots.iter().enumerate() {
            let mut vector = directions[k].1.clone();
            let av = a.mul_cvec(&vector);
            let residual = av
                .iter()
                .zip(&vector)
                .map(|(avi, vi)| (avi - group.rep * vi).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if residual > tol {
                if m > 1 {
                    return Err(Error::Rank(format!(
                        "eigenvalue {} has geometric multiplicity below the requested {m} \
                         (vector {k} has residual {residual:.3e})",
                        group.rep
                    )));
                }
                return Err(Error::EigenResidual(format!(
                    "eigenvector for {} has residual {residual:.3e}, above tolerance {tol:.3e}",
                    group.rep
                )));
            }
            phase_normalize(&mut vector);
            pairs[slot] = Some(EigenPair {
                value: group.rep,
                vector,
                residual,
            });
        }
    }

    let pairs: Vec<EigenPair> = pairs
        .into_iter()
        .map(|p| p.expect("all slots filled"))
        .collect();

    // The assembled column matrix must have full rank.
    let cols: Vec<Vec<Complex64>> = pairs.iter().map(|p| p.vector.clone()).collect();
    if complex_column_rank(&cols, 1e-8) < cols.len() {
        return Err(Error::Rank(
            "assembled eigenvector columns are numerically dependent".into(),
        ));
    }
    Ok(pairs)
}

pub(crate) fn to_na(a: &Mat) -> DMatrix<f64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

/// Complex matrix `A - lambda I`.
pub(crate) fn shifted_complex(a: &Mat, lambda: Complex64) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        let shift = if i == j {
            lambda
        } else {
            Complex64::new(0.0, 0.0)
        };
        Complex64::new(a[(i, j)], 0.0) - shift
    })
}

/// The `count` right singular directions with smallest singular values,
/// ascending, as (sigma, unit vector) pairs.
///
/// # Panics
/// Panics if `count` exceeds the matrix dimension.
pub(crate) fn smallest_singular_directions(
    m: &DMatrix<Complex64>,
    count: usize,
) -> Vec<(f64, Vec<Complex64>)> {
    let n = m.ncols();
    assert!(count <= n, "cannot extract more directions than columns");
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    order
        .into_iter()
        .take(count)
        .map(|i| {
            // Row i of V^H is the conjugate transpose of the i-th right
            // singular vector.
            let v: Vec<Complex64> = (0..n).map(|j| vt[(i, j)].conj()).collect();
            (svd.singular_values[i], v)
        })
        .collect()
}

/// Scale to unit 2-norm and rotate so the first significant component is
/// real and positive.
pub(crate) fn phase_normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    for z in v.iter_mut() {
        *z /= norm;
    }
    let max = v.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    if let Some(lead) = v.iter().find(|z| z.norm() >= 1e-6 * max).copied() {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Numerical rank of a set of complex columns via modified Gram-Schmidt.
pub(crate) fn complex_column_rank(cols: &[Vec<Complex64>], rel_tol: f64) -> usize {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for c in cols {
        let mut v = c.clone();
        let orig = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if orig == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &basis {
                let proj: Complex64 = q.iter().zip(&v).map(|(qi, vi)| qi.conj() * vi).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let rem = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if rem > rel_tol * orig {
            for z in &mut v {
                *z /= rem;
            }
            basis.push(v);
        }
    }
    basis.len()
}

/// Snap near-conjugate pairs (lambda, mu) with |lambda - conj(mu)| <= 1e-8 to
/// exact conjugates, so spectral symmetry survives round-off.
fn enforce_conjugate_pairs(values: &mut [Complex64]) {
    let n = values.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || values[i].im == 0.0 {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if j == i || used[j] {
                continue;
            }
            let d = (values[i] - values[j].conj()).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        if let Some((j, d)) = best {
            if d <= 1e-8 {
                let mean = (values[i] + values[j].conj()) * 0.5;
                values[i] = mean;
                values[j] = mean.conj();
                used[i] = true;
                used[j] = true;
            }
        }
    }
}

fn sort_values(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::pairing_error;
    use crate::symplectic::build_j;
    use crate::testkit::TestRng;

    fn circulant_0101() -> Mat {
        Mat::from_row_slice(
            4,
            4,
            &[
                0.0, 1.0, 0.0, 1.0, //
                1.0, 0.0, 1.0, 0.0, //
                0.0, 1.0, 0.0, 1.0, //
                1.0, 0.0, 1.0, 0.0,
            ],
        )
    }

    fn example_4x4() -> Mat {
        Mat::from_row_slice(
            4,
            4,
            &[
                1.0, 2.0, 0.0, 1.0, //
                0.0, 2.0, 1.0, 0.0, //
                1.0, 2.0, -1.0, 0.0, //
                2.0, 0.0, -2.0, -2.0,
            ],
        )
    }

    #[test]
    fn circulant_spectrum() {
        let s = eigenvalues(&circulant_0101()).unwrap();
        assert_eq!(s.backend, EigBackend::QrSolver);
        let expected = [
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 0.0),
        ];
        assert!(pairing_error(&s.values, &expected) < 1e-10);
    }

    #[test]
    fn identity_spectrum() {
        let s = eigenvalues(&Mat::identity(3)).unwrap();
        for v in &s.values {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn hamiltonian_example_spectrum() {
        let s = eigenvalues(&example_4x4()).unwrap();
        let r8 = 8.0_f64.sqrt();
        let expected = [
            Complex64::new(-r8, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(r8, 0.0),
        ];
        assert!(pairing_error(&s.values, &expected) < 1e-9);
    }

    #[test]
    fn symplectic_form_has_exact_conjugate_pair() {
        let s = eigenvalues(&build_j(1)).unwrap();
        assert_eq!(s.values[0], Complex64::new(0.0, -1.0));
        assert_eq!(s.values[1], Complex64::new(0.0, 1.0));
        // Enforced symmetry: values are exact conjugates.
        assert_eq!(s.values[0], s.values[1].conj());
    }

    #[test]
    fn sorted_deterministically() {
        let a = Mat::from_row_slice(2, 2, &[0.0, 4.0, -1.0, 0.0]);
        let s1 = eigenvalues(&a).unwrap();
        let s2 = eigenvalues(&a).unwrap();
        assert_eq!(s1.values, s2.values);
        assert!(s1.values[0].im <= s1.values[1].im);
    }

    #[test]
    fn oracle_matches_qr_on_random_matrices() {
        let mut rng = TestRng::new(7);
        for _ in 0..25 {
            let n = 2 + (rng.next_index(5));
            let a = Mat::from_fn(n, n, |_, _| rng.uniform(-1.0, 1.0));
            let qr = eigenvalues(&a).unwrap();
            let oracle = eigenvalues_via_oracle(&a).unwrap();
            assert_eq!(oracle.backend, EigBackend::CharpolyOracle);
            let err = pairing_error(&qr.values, &oracle.values);
            assert!(err < 1e-6, "pairing error {err:.3e} at n={n}");
        }
    }

    #[test]
    fn trace_and_determinant_consistency() {
        let mut rng = TestRng::new(11);
        for _ in 0..20 {
            let n = 2 + rng.next_index(6);
            let a = Mat::from_fn(n, n, |_, _| rng.uniform(-1.0, 1.0));
            let s = eigenvalues(&a).unwrap();
            let sum: Complex64 = s.values.iter().sum();
            assert!((sum.re - a.trace()).abs() < 1e-8);
            assert!(sum.im.abs() < 1e-8);
            let prod: Complex64 = s.values.iter().product();
            assert!((prod.re - a.determinant()).abs() < 1e-8 * a.determinant().abs().max(1.0));
        }
    }

    #[test]
    fn eigenvector_for_diagonal() {
        let a = Mat::from_row_slice(2, 2, &[3.0, 0.0, 0.0, -3.0]);
        let pairs = eigenvectors_for(&a, &[Complex64::new(3.0, 0.0)], 1e-8).unwrap();
        assert_eq!(pairs.len(), 1);
        let v = &pairs[0].vector;
        assert!((v[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(v[1].norm() < 1e-12);
        assert!(pairs[0].residual <= 1e-12);
    }

    #[test]
    fn eigenvector_for_rotation() {
        // J x = i x has solution (1, i) up to scale.
        let pairs = eigenvectors_for(&build_j(1), &[Complex64::new(0.0, 1.0)], 1e-8).unwrap();
        let v = &pairs[0].vector;
        let ratio = v[1] / v[0];
        assert!((ratio - Complex64::new(0.0, 1.0)).norm() < 1e-10);
        // Normalization contract: unit norm, leading component real-positive.
        assert!(v[0].im.abs() < 1e-12 && v[0].re > 0.0);
    }

    #[test]
    fn eigenvectors_for_repeated_eigenvalue_are_orthogonal() {
        let a = Mat::identity(4);
        let t = Complex64::new(1.0, 0.0);
        let pairs = eigenvectors_for(&a, &[t, t], 1e-8).unwrap();
        let dot: Complex64 = pairs[0]
            .vector
            .iter()
            .zip(&pairs[1].vector)
            .map(|(x, y)| x.conj() * y)
            .sum();
        assert!(dot.norm() < 1e-10);
    }

    #[test]
    fn defective_matrix_yields_rank_error() {
        // Jordan block: algebraic multiplicity 2, geometric 1.
        let a = Mat::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let t = Complex64::new(1.0, 0.0);
        let err = eigenvectors_for(&a, &[t, t], 1e-8).unwrap_err();
        assert!(matches!(err, Error::Rank(_)), "{err}");
    }

    #[test]
    fn not_an_eigenvalue_is_reported() {
        let a = Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let err = eigenvectors_for(&a, &[Complex64::new(5.0, 0.0)], 1e-8).unwrap_err();
        assert!(matches!(err, Error::NotAnEigenvalue(_)), "{err}");
    }

    #[test]
    fn example_4x4_eigenvectors_match_known_spans() {
        // Hand-derived eigenvector for -2sqrt(2): (4-3√2, 7/2-(5/2)√2, 3-2√2, 1).
        let a = example_4x4();
        let r2 = 2.0_f64.sqrt();
        let target = Complex64::new(-2.0 * r2, 0.0);
        let pairs = eigenvectors_for(&a, &[target], 1e-8).unwrap();
        let v = &pairs[0].vector;
        let reference = [4.0 - 3.0 * r2, 3.5 - 2.5 * r2, 3.0 - 2.0 * r2, 1.0];
        // Compare directions: v and reference must be parallel.
        let scale = v[3] / Complex64::new(reference[3], 0.0);
        for (vi, ri) in v.iter().zip(reference) {
            assert!((vi - scale * Complex64::new(ri, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn smallest_directions_are_ascending() {
        let m = shifted_complex(&Mat::identity(3), Complex64::new(0.0, 0.0));
        let dirs = smallest_singular_directions(&m, 3);
        assert!(dirs[0].0 <= dirs[1].0 && dirs[1].0 <= dirs[2].0);
    }
}
