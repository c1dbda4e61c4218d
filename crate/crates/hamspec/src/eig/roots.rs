//! Polynomial roots by Durand-Kerner simultaneous iteration.
//!
//! All roots are refined at once from asymmetric complex starting points.
//! Convergence is certified by the per-root residual |p(r)|, not by the
//! iteration count alone: multiple roots stagnate at ~sqrt(eps) in value
//! while their residuals sit at the evaluation noise floor.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Degree cap, matching the characteristic-polynomial oracle.
pub const ROOTS_DEGREE_CAP: usize = 16;

const MAX_ITERATIONS: usize = 600;
const RESIDUAL_BOUND: f64 = 1e-8;

/// All complex roots of a monic real polynomial given in descending powers
/// (`coeffs[0]` must be 1). Roots are sorted by (re, im).
pub fn roots_oracle(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    if coeffs.is_empty() {
        return Err(Error::Domain("empty coefficient list".into()));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("non-finite polynomial coefficient".into()));
    }
    if (coeffs[0] - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "leading coefficient must be 1, got {}",
            coeffs[0]
        )));
    }
    let degree = coeffs.len() - 1;
    if degree > ROOTS_DEGREE_CAP {
        return Err(Error::SizeCap(format!(
            "root oracle is capped at degree {ROOTS_DEGREE_CAP}, got {degree}"
        )));
    }
    if degree == 0 {
        return Ok(Vec::new());
    }

    let eval = |x: Complex64| -> Complex64 {
        coeffs[1..]
            .iter()
            .fold(Complex64::new(coeffs[0], 0.0), |p, &c| p * x + c)
    };

    // Cauchy bound keeps the start circle outside no root.
    let radius = 1.0 + coeffs[1..].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut w: Vec<Complex64> = (0..degree).map(|k| seed.powu(k as u32) * radius).collect();

    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0_f64;
        for j in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for k in 0..degree {
                if k != j {
                    denom *= w[j] - w[k];
                }
            }
            if denom.norm() < 1e-280 {
                // Coincident iterates: nudge and retry next sweep.
                w[j] += Complex64::new(1e-6 * (j as f64 + 1.0), 1e-6);
                max_step = f64::MAX;
                continue;
            }
            let step = eval(w[j]) / denom;
            w[j] -= step;
            max_step = max_step.max(step.norm());
        }
        let scale = w.iter().fold(1.0_f64, |m, v| m.max(v.norm()));
        if max_step <= 1e-14 * scale {
            break;
        }
    }

    for root in &w {
        let res = eval(*root).norm();
        if res > RESIDUAL_BOUND {
            return Err(Error::NonConvergence(format!(
                "root {root} has residual {res:.3e} after {MAX_ITERATIONS} iterations"
            )));
        }
    }

    w.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(w)
}
