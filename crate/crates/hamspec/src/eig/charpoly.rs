//! Characteristic polynomial by the Faddeev-LeVerrier recurrence.
//!
//! This path is deliberately independent of the QR eigensolver so the two can
//! cross-check each other. Cost grows as n^4, so it is capped at small sizes.

use crate::error::{Error, Result};
use crate::matrix::Mat;

/// Largest dimension accepted by the polynomial oracle.
pub const CHARPOLY_DIM_CAP: usize = 16;

/// Coefficients of det(xI - A) in descending powers: `c[0] = 1` multiplies
/// x^n and `c[n]` is the constant term.
pub fn charpoly_coefficients(a: &Mat) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "characteristic polynomial needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.all_finite() {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let n = a.rows();
    if n > CHARPOLY_DIM_CAP {
        return Err(Error::SizeCap(format!(
            "polynomial oracle is capped at dimension {CHARPOLY_DIM_CAP}, got {n}"
        )));
    }
    // M_1 = I, c_{n-1} = -tr(A M_1); M_k = A M_{k-1} + c_{n-k+1} I,
    // c_{n-k} = -tr(A M_k)/k. Descending storage: c_{n-k} lives at index k.
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    let mut m = Mat::zeros(n, n);
    for k in 1..=n {
        let mut next = a * &m;
        for i in 0..n {
            next[(i, i)] += coeffs[k - 1];
        }
        coeffs[k] = -(a * &next).trace() / k as f64;
        m = next;
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::build_j;

    #[test]
    fn symplectic_form_gives_x_squared_plus_one() {
        // det(xI - J) = x^2 + 1 by hand.
        let c = charpoly_coefficients(&build_j(1)).unwrap();
        assert_eq!(c, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn diagonal_two_by_two() {
        // (x-1)(x-2) = x^2 - 3x + 2.
        let a = Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let c = charpoly_coefficients(&a).unwrap();
        assert_eq!(c, vec![1.0, -3.0, 2.0]);
    }

    #[test]
    fn circulant_0101() {
        // Eigenvalues {2, 0, 0, -2}, so p(x) = x^4 - 4x^2.
        let a = Mat::from_row_slice(
            4,
            4,
            &[
                0.0, 1.0, 0.0, 1.0, //
                1.0, 0.0, 1.0, 0.0, //
                0.0, 1.0, 0.0, 1.0, //
                1.0, 0.0, 1.0, 0.0,
            ],
        );
        let c = charpoly_coefficients(&a).unwrap();
        let expected = [1.0, 0.0, -4.0, 0.0, 0.0];
        for (got, want) in c.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "got {c:?}");
        }
    }

    #[test]
    fn hamiltonian_4x4_has_even_polynomial() {
        // Spectrum {±1, ±2√2}, so p(x) = (x^2-1)(x^2-8) = x^4 - 9x^2 + 8.
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
        let c = charpoly_coefficients(&a).unwrap();
        let expected = [1.0, 0.0, -9.0, 0.0, 8.0];
        for (got, want) in c.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "got {c:?}");
        }
    }

    #[test]
    fn constant_term_is_signed_determinant() {
        // c_n = (-1)^n det(A).
        let a = Mat::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 0.0, 3.0, 1.0, 1.0, 0.0, 4.0]);
        let c = charpoly_coefficients(&a).unwrap();
        let det = a.determinant();
        assert!((c[3] - (-1.0f64).powi(3) * det).abs() < 1e-12);
    }

    #[test]
    fn dimension_cap_enforced() {
        let a = Mat::zeros(CHARPOLY_DIM_CAP + 1, CHARPOLY_DIM_CAP + 1);
        assert!(matches!(charpoly_coefficients(&a), Err(Error::SizeCap(_))));
    }

    #[test]
    fn rejects_non_square() {
        let a = Mat::zeros(2, 3);
        assert!(matches!(
            charpoly_coefficients(&a),
            Err(Error::Dimension(_))
        ));
    }
}
