//! The symplectic form J, the H-transpose, and Hamiltonian structure checks.
//!
//! A real 2n x 2n matrix A is Hamiltonian when `A^T J + J A = 0` for the
//! symplectic form J = [[0, I], [-I, 0]]. Equivalently A = [[C, G], [F, -C^T]]
//! with G and F symmetric, and equivalently `h_transpose(A) == A`.

use crate::error::{Error, Result};
use crate::matrix::Mat;

/// The 2n x 2n symplectic form [[0, I_n], [-I_n, 0]].
///
/// # Panics
/// Panics if `n == 0`.
pub fn build_j(n: usize) -> Mat {
    assert!(n >= 1, "symplectic form needs half-dimension >= 1");
    let mut j = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

fn even_half(value: usize, what: &str) -> Result<usize> {
    if value == 0 || !value.is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "{what} must be even and positive, got {value}"
        )));
    }
    Ok(value / 2)
}

/// H-transpose `A^H = J_n A^T J_m` of a 2m x 2n real matrix; the result is
/// 2n x 2m. For square A, `A` is Hamiltonian exactly when `A^H == A`.
pub fn h_transpose(a: &Mat) -> Result<Mat> {
    let m = even_half(a.rows(), "row count")?;
    let n = even_half(a.cols(), "column count")?;
    let jn = build_j(n);
    let jm = build_j(m);
    Ok(&(&jn * &a.transpose()) * &jm)
}

/// Frobenius norm of `A^T J + J A`; zero exactly for Hamiltonian matrices.
pub fn hamiltonian_residual(a: &Mat) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "Hamiltonian residual needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = even_half(a.rows(), "dimension")?;
    let j = build_j(n);
    let r = &(&a.transpose() * &j) + &(&j * a);
    Ok(r.frobenius_norm())
}

/// Whether `A` is Hamiltonian within `tol`, along with the exact residual.
pub fn is_hamiltonian(a: &Mat, tol: f64) -> Result<(bool, f64)> {
    let res = hamiltonian_residual(a)?;
    Ok((res <= tol, res))
}

/// Scale-aware default residual tolerance: `1e-10 * max(1, ||A||_F)`.
pub fn default_ham_tol(a: &Mat) -> f64 {
    1e-10 * a.frobenius_norm().max(1.0)
}

/// A matrix certified Hamiltonian at construction time.
///
/// The wrapper stores the verified residual, so downstream code can rely on
/// the structure without rechecking.
#[derive(Debug, Clone, PartialEq)]
pub struct HamMatrix {
    body: Mat,
    residual: f64,
}

impl HamMatrix {
    /// Certify with the scale-aware default tolerance.
    pub fn certify(body: Mat) -> Result<HamMatrix> {
        let tol = default_ham_tol(&body);
        HamMatrix::certify_with_tol(body, tol)
    }

    /// Certify with an explicit residual tolerance.
    pub fn certify_with_tol(body: Mat, tol: f64) -> Result<HamMatrix> {
        if !body.all_finite() {
            return Err(Error::Domain("matrix has non-finite entries".into()));
        }
        let residual = hamiltonian_residual(&body)?;
        if residual > tol {
            return Err(Error::Structure(format!(
                "matrix is not Hamiltonian: residual {residual:.3e} exceeds tolerance {tol:.3e}"
            )));
        }
        Ok(HamMatrix { body, residual })
    }

    pub fn body(&self) -> &Mat {
        &self.body
    }

    pub fn into_body(self) -> Mat {
        self.body
    }

    /// Verified Frobenius norm of `A^T J + J A`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Full dimension 2n.
    pub fn dim(&self) -> usize {
        self.body.rows()
    }

    /// Half dimension n.
    pub fn half_dim(&self) -> usize {
        self.body.rows() / 2
    }
}

/// Permutation P interleaving a block-diagonal stack of Hamiltonian blocks
/// diag{H_1, ..., H_k} (half-dimensions `half_dims`) into the global form
/// [[A, E], [F, -A^T]] with block-diagonal A, E, F: the result satisfies
/// `P * diag{H_i} * P^T = global form`. P is orthogonal.
///
/// Row `i` of block k sits at stack position `2*prefix_k + i`; the first
/// `n_k` rows map to global positions `prefix_k + i` (top half) and the rest
/// to `N + prefix_k + i` (bottom half), where `prefix_k` counts half-dims
/// before block k and N is the total half-dimension.
///
/// # Panics
/// Panics if `half_dims` is empty or contains a zero.
pub fn shuffle_permutation(half_dims: &[usize]) -> Mat {
    assert!(!half_dims.is_empty(), "need at least one block");
    assert!(
        half_dims.iter().all(|&n| n > 0),
        "half-dimensions must be positive"
    );
    let total: usize = half_dims.iter().sum();
    let mut p = Mat::zeros(2 * total, 2 * total);
    let mut prefix = 0usize;
    for &nk in half_dims {
        let offset = 2 * prefix;
        for i in 0..nk {
            p[(prefix + i, offset + i)] = 1.0;
            p[(total + prefix + i, offset + nk + i)] = 1.0;
        }
        prefix += nk;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat2(a: f64, b: f64, c: f64, d: f64) -> Mat {
        Mat::from_row_slice(2, 2, &[a, b, c, d])
    }

    #[test]
    fn build_j_small_case() {
        let j = build_j(1);
        assert_eq!(j, mat2(0.0, 1.0, -1.0, 0.0));
    }

    #[test]
    fn j_squares_to_minus_identity() {
        for n in 1..=4 {
            let j = build_j(n);
            let jj = &j * &j;
            let minus_i = Mat::identity(2 * n).scale(-1.0);
            assert_eq!(jj, minus_i);
        }
    }

    #[test]
    fn j_is_antisymmetric() {
        let j = build_j(2);
        assert_eq!(j.transpose(), -&j);
    }

    #[test]
    fn h_transpose_two_by_two_formula() {
        // [[a,b],[c,d]]^H = [[-d,b],[c,-a]], by direct multiplication of J A^T J.
        let a = mat2(1.0, 2.0, 3.0, 4.0);
        let h = h_transpose(&a).unwrap();
        assert_eq!(h, mat2(-4.0, 2.0, 3.0, -1.0));
    }

    #[test]
    fn h_transpose_is_an_involution() {
        let a = Mat::from_fn(4, 4, |i, j| ((3 * i + 5 * j + 1) % 7) as f64 - 3.0);
        let hh = h_transpose(&h_transpose(&a).unwrap()).unwrap();
        assert!(hh.max_abs_diff(&a) == 0.0);
    }

    #[test]
    fn h_transpose_fixes_j() {
        for n in 1..=3 {
            let j = build_j(n);
            assert_eq!(h_transpose(&j).unwrap(), j);
        }
    }

    #[test]
    fn h_transpose_rectangular_shape() {
        // 4x2 input (m=2, n=1) produces a 2x4 result.
        let x = Mat::from_fn(4, 2, |i, j| (i * 2 + j) as f64);
        let h = h_transpose(&x).unwrap();
        assert_eq!((h.rows(), h.cols()), (2, 4));
    }

    #[test]
    fn h_transpose_rejects_odd_dims() {
        let a = Mat::zeros(3, 4);
        assert!(matches!(h_transpose(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn hamiltonian_detection_on_known_matrices() {
        // Hand-checkable 4x4 Hamiltonian matrix: blocks C, G, F with G, F symmetric.
        let a = Mat::from_row_slice(
            4,
            4,
            &[
                1.0, 2.0, 0.0, 1.0, //
                0.0, 2.0, 1.0, 0.0, //
                1.0, 2.0, -1.0, 0.0, //
                2.0, 0.0, -2.0, -2.0,
            ],
        );
        let (ok, res) = is_hamiltonian(&a, 0.0).unwrap();
        assert!(ok);
        assert_eq!(res, 0.0);
        // h_transpose fixes Hamiltonian matrices.
        assert_eq!(h_transpose(&a).unwrap(), a);

        // I^T J + J I = 2J, whose Frobenius norm for n=2 is 2*2 = 4.
        let (ok, res) = is_hamiltonian(&Mat::identity(4), 1e-10).unwrap();
        assert!(!ok);
        assert!((res - 4.0).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_hamiltonian_iff_trace_zero() {
        let traceless = mat2(3.0, 5.0, -2.0, -3.0);
        assert!(is_hamiltonian(&traceless, 1e-12).unwrap().0);
        let traced = mat2(3.0, 5.0, -2.0, -2.9);
        assert!(!is_hamiltonian(&traced, 1e-12).unwrap().0);
    }

    #[test]
    fn certify_accepts_and_rejects() {
        let j = build_j(2);
        let h = HamMatrix::certify(j.clone()).unwrap();
        assert_eq!(h.residual(), 0.0);
        assert_eq!(h.half_dim(), 2);
        assert_eq!(h.body(), &j);

        let e = HamMatrix::certify(Mat::identity(4));
        assert!(matches!(e, Err(Error::Structure(_))));
    }

    #[test]
    fn shuffle_single_block_is_identity() {
        assert_eq!(shuffle_permutation(&[3]), Mat::identity(6));
    }

    #[test]
    fn shuffle_two_scalar_blocks() {
        // Two 2x2 Hamiltonian blocks with distinct entries; the permuted stack
        // must interleave into [[A, E], [F, -A^T]] with diagonal A, E, F.
        let p = shuffle_permutation(&[1, 1]);
        let mut stack = Mat::zeros(4, 4);
        stack.set_block(0, 0, &mat2(1.0, 2.0, 3.0, -1.0));
        stack.set_block(2, 2, &mat2(4.0, 5.0, 6.0, -4.0));
        let global = &(&p * &stack) * &p.transpose();
        let expected = Mat::from_row_slice(
            4,
            4,
            &[
                1.0, 0.0, 2.0, 0.0, //
                0.0, 4.0, 0.0, 5.0, //
                3.0, 0.0, -1.0, 0.0, //
                0.0, 6.0, 0.0, -4.0,
            ],
        );
        assert_eq!(global, expected);
    }

    #[test]
    fn shuffle_is_orthogonal() {
        for dims in [vec![1, 2], vec![2, 1, 3], vec![1, 1, 1, 1]] {
            let p = shuffle_permutation(&dims);
            let ppt = &p * &p.transpose();
            assert_eq!(ppt, Mat::identity(p.rows()));
        }
    }

    #[test]
    fn default_tolerance_tracks_scale() {
        let a = Mat::identity(2);
        assert!((default_ham_tol(&a) - 1e-10 * 2.0_f64.sqrt()).abs() < 1e-25);
        let small = Mat::from_row_slice(2, 2, &[1e-3, 0.0, 0.0, 1e-3]);
        assert_eq!(default_ham_tol(&small), 1e-10);
    }
}
