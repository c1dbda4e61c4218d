//! Complex-number text format and multiset comparison utilities.
//!
//! Spectra cross the CLI boundary as strings like `"2"`, `"-1.5i"`, or
//! `"1+2i"`; internally they are multisets of `Complex64` compared by greedy
//! minimal-distance pairing.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Parse one complex literal: `a`, `bi`, or `a+bi` / `a-bi` forms, with
/// optional exponents (`1e-3+2.5e2i`). A bare `i` means `1i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let malformed = || Error::Parse(format!("malformed complex literal {text:?}"));

    let parse_real = |part: &str| -> Result<f64> {
        let v: f64 = part.parse().map_err(|_| malformed())?;
        if !v.is_finite() {
            return Err(Error::Parse(format!("non-finite value in {text:?}")));
        }
        Ok(v)
    };

    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Sign characters open an imaginary part unless they belong to an
        // exponent; a literal has at most one such split point.
        let bytes = body.as_bytes();
        let mut splits = Vec::new();
        for k in 1..bytes.len() {
            if (bytes[k] == b'+' || bytes[k] == b'-')
                && bytes[k - 1] != b'e'
                && bytes[k - 1] != b'E'
            {
                splits.push(k);
            }
        }
        match splits.len() {
            0 => {
                // Pure imaginary: "i", "-i", "2i", "1.5e-3i".
                let im = match body {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    _ => parse_real(body)?,
                };
                Ok(Complex64::new(0.0, im))
            }
            1 => {
                let k = splits[0];
                let re = parse_real(&body[..k])?;
                let imag_part = &body[k..];
                let im = match imag_part {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => parse_real(imag_part)?,
                };
                Ok(Complex64::new(re, im))
            }
            _ => Err(malformed()),
        }
    } else {
        Ok(Complex64::new(parse_real(s)?, 0.0))
    }
}

/// Render a complex number in the same textual format `parse_complex` reads.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Worst matched distance under greedy minimal-distance pairing: repeatedly
/// match the globally closest unmatched pair. Infinite when the lengths
/// differ.
pub fn pairing_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let n = a.len();
    let mut used_a = vec![false; n];
    let mut used_b = vec![false; n];
    let mut worst = 0.0_f64;
    for _ in 0..n {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            if used_a[i] {
                continue;
            }
            for j in 0..n {
                if used_b[j] {
                    continue;
                }
                let d = (a[i] - b[j]).norm();
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((i, j, d));
                }
            }
        }
        let (i, j, d) = best.expect("counts match");
        used_a[i] = true;
        used_b[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Remove, via greedy minimal-distance pairing, one pool element per target;
/// returns the matched (target index, pool value, distance) triples sorted by
/// target index. The pool keeps the unmatched values.
///
/// # Panics
/// Panics if there are more targets than pool elements.
pub fn remove_closest(
    pool: &mut Vec<Complex64>,
    targets: &[Complex64],
) -> Vec<(usize, Complex64, f64)> {
    assert!(targets.len() <= pool.len(), "more targets than pool values");
    let mut used_t = vec![false; targets.len()];
    let mut used_p = vec![false; pool.len()];
    let mut matched = Vec::with_capacity(targets.len());
    for _ in 0..targets.len() {
        let mut best: Option<(usize, usize, f64)> = None;
        for (ti, t) in targets.iter().enumerate() {
            if used_t[ti] {
                continue;
            }
            for (pi, p) in pool.iter().enumerate() {
                if used_p[pi] {
                    continue;
                }
                let d = (t - p).norm();
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((ti, pi, d));
                }
            }
        }
        let (ti, pi, d) = best.expect("pool large enough");
        used_t[ti] = true;
        used_p[pi] = true;
        matched.push((ti, pool[pi], d));
    }
    let mut keep = used_p.iter();
    pool.retain(|_| !*keep.next().expect("one flag per element"));
    matched.sort_by_key(|(ti, _, _)| *ti);
    matched
}
