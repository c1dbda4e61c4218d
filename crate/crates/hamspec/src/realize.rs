//! Inverse eigenvalue construction: build a real Hamiltonian matrix with a
//! prescribed spectrum.
//!
//! A multiset of complex numbers is realizable as the spectrum of a real
//! Hamiltonian matrix exactly when it has even size and is closed under both
//! negation and conjugation. The construction decomposes it into real pairs
//! {l, -l}, pure-imaginary pairs {ib, -ib}, and quadruples {a+-ib, -a+-ib},
//! builds a Hamiltonian block for each part, and interleaves the blocks into
//! the canonical [[A, E], [F, -A^T]] layout.

use crate::eig::eigenvalues;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::spectrum::{format_complex, pairing_error};
use crate::symplectic::{shuffle_permutation, HamMatrix};
use num_complex::Complex64;

/// Tolerance for matching members of a closure family against each other.
const CLOSURE_TOL: f64 = 1e-9;

/// Self-check tolerance: realized spectrum vs requested multiset.
const ROUNDTRIP_TOL: f64 = 1e-8;

/// A finite multiset of complex numbers intended as a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    entries: Vec<Complex64>,
}

impl Spectrum {
    /// Wrap a list of prospective eigenvalues. Rejects non-finite entries;
    /// evenness and closure are checked by [`validate_h_realizable`].
    pub fn from_values(entries: Vec<Complex64>) -> Result<Spectrum> {
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Domain("spectrum contains a non-finite value".into()));
        }
        Ok(Spectrum { entries })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Decomposition of a realizable spectrum into constructible parts.
///
/// `real_pairs` lists one canonical representative `l >= 0` per {l, -l} pair.
/// `real_layers` partitions those representatives into layers of distinct
/// values; each layer becomes one companion-based block. Repeated values must
/// not share a companion block: a companion matrix is defective at repeated
/// roots, which would destroy eigenvalue accuracy downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationPlan {
    pub real_pairs: Vec<f64>,
    pub imag_pairs: Vec<f64>,
    pub quadruples: Vec<(f64, f64)>,
    pub real_layers: Vec<Vec<f64>>,
}

impl RealizationPlan {
    /// The multiset this plan denotes, in deterministic order.
    pub fn denoted_multiset(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        for &l in &self.real_pairs {
            out.push(Complex64::new(l, 0.0));
            out.push(Complex64::new(-l, 0.0));
        }
        for &b in &self.imag_pairs {
            out.push(Complex64::new(0.0, b));
            out.push(Complex64::new(0.0, -b));
        }
        for &(a, b) in &self.quadruples {
            out.push(Complex64::new(a, b));
            out.push(Complex64::new(a, -b));
            out.push(Complex64::new(-a, -b));
            out.push(Complex64::new(-a, b));
        }
        out
    }

    /// Half-dimension of the matrix the plan will produce.
    pub fn half_dim(&self) -> usize {
        self.real_pairs.len() + self.imag_pairs.len() + 2 * self.quadruples.len()
    }
}

/// Check closure under negation and conjugation and produce a construction
/// plan. Fails with a parity error on odd size and a closure error naming
/// the first missing value otherwise.
pub fn validate_h_realizable(s: &Spectrum) -> Result<RealizationPlan> {
    if !s.len().is_multiple_of(2) {
        return Err(Error::Parity(format!(
            "spectrum size must be even, got {}",
            s.len()
        )));
    }
    let mut pool = s.entries.clone();
    pool.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let mut real_pairs: Vec<f64> = Vec::new();
    let mut imag_pairs: Vec<f64> = Vec::new();
    let mut quadruples: Vec<(f64, f64)> = Vec::new();

    while let Some(&z) = pool.first() {
        // Canonical family representative: (|re|, |im|).
        let a = z.re.abs();
        let b = z.im.abs();
        let family: Vec<Complex64> = if a <= CLOSURE_TOL && b <= CLOSURE_TOL {
            vec![z, z]
        } else if b <= CLOSURE_TOL {
            vec![Complex64::new(a, 0.0), Complex64::new(-a, 0.0)]
        } else if a <= CLOSURE_TOL {
            vec![Complex64::new(0.0, b), Complex64::new(0.0, -b)]
        } else {
            vec![
                Complex64::new(a, b),
                Complex64::new(a, -b),
                Complex64::new(-a, -b),
                Complex64::new(-a, b),
            ]
        };
        for member in &family {
            let found = pool
                .iter()
                .enumerate()
                .min_by(|(_, x), (_, y)| (member - *x).norm().total_cmp(&(member - *y).norm()))
                .map(|(k, v)| (k, (member - v).norm()));
            match found {
                Some((k, d)) if d <= CLOSURE_TOL => {
                    pool.remove(k);
                }
                _ => {
                    return Err(Error::Closure(format!(
                        "spectrum is missing {}",
                        format_complex(*member)
                    )));
                }
            }
        }
        if a <= CLOSURE_TOL && b <= CLOSURE_TOL {
            real_pairs.push(0.0);
        } else if b <= CLOSURE_TOL {
            real_pairs.push(a);
        } else if a <= CLOSURE_TOL {
            imag_pairs.push(b);
        } else {
            quadruples.push((a, b));
        }
    }

    // Canonical presentation independent of input order: families are
    // consumed in pool order above, then sorted.
    real_pairs.sort_by(f64::total_cmp);
    imag_pairs.sort_by(f64::total_cmp);
    quadruples.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    let real_layers = layer_real_pairs(&real_pairs);
    Ok(RealizationPlan {
        real_pairs,
        imag_pairs,
        quadruples,
        real_layers,
    })
}

/// Group near-equal representatives and spread multiplicity across layers:
/// layer j holds the j-th copy of every value, so each layer has distinct
/// entries.
fn layer_real_pairs(real_pairs: &[f64]) -> Vec<Vec<f64>> {
    let mut sorted = real_pairs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for v in sorted {
        match groups.last_mut() {
            Some((rep, count)) if (v - *rep).abs() <= CLOSURE_TOL => *count += 1,
            _ => groups.push((v, 1)),
        }
    }
    let depth = groups.iter().map(|(_, c)| *c).max().unwrap_or(0);
    (0..depth)
        .map(|layer| {
            groups
                .iter()
                .filter(|(_, count)| *count > layer)
                .map(|(rep, _)| *rep)
                .collect()
        })
        .collect()
}

/// The 2x2 block [[0, b], [-b, 0]] with spectrum {ib, -ib}.
pub fn realize_imag_pair(b: f64) -> Result<HamMatrix> {
    // NaN must fail this gate too, so the comparison accepts rather than rejects.
    if b.is_nan() || b <= 0.0 {
        return Err(Error::Domain(format!(
            "imaginary pair needs b > 0, got {b}"
        )));
    }
    let m = Mat::from_row_slice(2, 2, &[0.0, b, -b, 0.0]);
    HamMatrix::certify(m)
}

/// The 4x4 block with spectrum {a+ib, a-ib, -a-ib, -a+ib}.
pub fn realize_quadruple(a: f64, b: f64) -> HamMatrix {
    let m = Mat::from_row_slice(
        4,
        4,
        &[
            a, b, 0.0, 0.0, //
            -b, a, 0.0, 0.0, //
            0.0, 0.0, -a, b, //
            0.0, 0.0, -b, -a,
        ],
    );
    HamMatrix::certify(m).expect("quadruple block is Hamiltonian by construction")
}

/// Hamiltonian matrix with spectrum `lambdas` union `-lambdas`: the companion
/// matrix A of the product polynomial is split into its antisymmetric and
/// symmetric halves A11, A12, and [[A11, A12], [A12, A11]] has spectrum
/// `sigma(A11+A12) union sigma(A11-A12) = sigma(A) union sigma(-A^T)`.
///
/// Callers must keep repeated values out of a single call: the companion
/// matrix is defective at repeated roots (see [`RealizationPlan`]).
pub fn realize_real_list(lambdas: &[f64]) -> Result<HamMatrix> {
    if lambdas.is_empty() {
        return Err(Error::Domain("real eigenvalue list is empty".into()));
    }
    if lambdas.iter().any(|l| !l.is_finite()) {
        return Err(Error::Domain("non-finite real eigenvalue".into()));
    }
    let n = lambdas.len();
    let coeffs = poly_from_roots(lambdas);
    let mut companion = Mat::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -coeffs[i];
    }
    let a11 = Mat::from_fn(n, n, |i, j| (companion[(i, j)] - companion[(j, i)]) / 2.0);
    let a12 = Mat::from_fn(n, n, |i, j| (companion[(i, j)] + companion[(j, i)]) / 2.0);
    let mut h = Mat::zeros(2 * n, 2 * n);
    h.set_block(0, 0, &a11);
    h.set_block(0, n, &a12);
    h.set_block(n, 0, &a12);
    h.set_block(n, n, &a11);
    HamMatrix::certify(h)
}

/// Ascending coefficients [c_0, ..., c_{n-1}] of the monic polynomial with
/// the given roots (the leading 1 is implicit).
fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    for &r in roots {
        // Multiply by (x - r).
        let mut next = vec![0.0; coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= r * c;
        }
        coeffs = next;
    }
    coeffs.truncate(roots.len());
    coeffs
}

/// Interleave Hamiltonian blocks into one Hamiltonian matrix in canonical
/// [[A, E], [F, -A^T]] form; the spectrum is the union of the block spectra.
pub fn direct_sum(blocks: &[HamMatrix]) -> Result<HamMatrix> {
    if blocks.is_empty() {
        return Err(Error::Domain("direct sum of zero blocks".into()));
    }
    let half_dims: Vec<usize> = blocks.iter().map(HamMatrix::half_dim).collect();
    let total: usize = half_dims.iter().sum();
    let mut stack = Mat::zeros(2 * total, 2 * total);
    let mut offset = 0;
    for b in blocks {
        stack.set_block(offset, offset, b.body());
        offset += b.dim();
    }
    let p = shuffle_permutation(&half_dims);
    let h = &(&p * &stack) * &p.transpose();
    // Permutation conjugation rearranges entries without arithmetic, so the
    // residual is exactly the stacked block residuals.
    let carried: f64 = blocks
        .iter()
        .map(|b| b.residual() * b.residual())
        .sum::<f64>()
        .sqrt();
    let tol = (1e-12 * h.frobenius_norm().max(1.0)).max(carried * (1.0 + 1e-12));
    HamMatrix::certify_with_tol(h, tol)
}

/// Full pipeline: validate, build per-part blocks, interleave, and verify the
/// realized spectrum against the request.
pub fn realize_spectrum(s: &Spectrum) -> Result<HamMatrix> {
    if s.is_empty() {
        return Err(Error::Parity("cannot realize an empty spectrum".into()));
    }
    let plan = validate_h_realizable(s)?;
    let mut blocks: Vec<HamMatrix> = Vec::new();
    for layer in &plan.real_layers {
        blocks.push(realize_real_list(layer)?);
    }
    for &b in &plan.imag_pairs {
        blocks.push(realize_imag_pair(b)?);
    }
    for &(a, b) in &plan.quadruples {
        blocks.push(realize_quadruple(a, b));
    }
    let h = direct_sum(&blocks)?;

    let achieved = eigenvalues(h.body())?;
    let err = pairing_error(&achieved.values, s.values());
    if err > ROUNDTRIP_TOL {
        return Err(Error::Inconsistency(format!(
            "realized spectrum deviates from the request by {err:.3e}; \
             the input may contain pathologically clustered distinct values"
        )));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::parse_complex;
    use crate::symplectic::is_hamiltonian;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spectrum_of(texts: &[&str]) -> Spectrum {
        let vals = texts.iter().map(|t| parse_complex(t).unwrap()).collect();
        Spectrum::from_values(vals).unwrap()
    }

    #[test]
    fn validate_real_pairs() {
        let plan = validate_h_realizable(&spectrum_of(&["1", "-1", "2", "-2"])).unwrap();
        assert_eq!(plan.real_pairs, vec![1.0, 2.0]);
        assert!(plan.imag_pairs.is_empty());
        assert!(plan.quadruples.is_empty());
        assert_eq!(plan.real_layers, vec![vec![1.0, 2.0]]);
    }

    #[test]
    fn validate_quadruples() {
        let s = spectrum_of(&[
            "1+1i", "1-1i", "-1-1i", "-1+1i", "1+2i", "1-2i", "-1-2i", "-1+2i",
        ]);
        let plan = validate_h_realizable(&s).unwrap();
        assert!(plan.real_pairs.is_empty());
        assert_eq!(plan.quadruples, vec![(1.0, 1.0), (1.0, 2.0)]);
    }

    #[test]
    fn validate_names_missing_value() {
        let err = validate_h_realizable(&spectrum_of(&["1+1i", "1-1i", "2", "-2"])).unwrap_err();
        match err {
            Error::Closure(msg) => assert!(msg.contains("-1-1i"), "{msg}"),
            other => panic!("expected closure error, got {other}"),
        }
    }

    #[test]
    fn validate_rejects_odd_size() {
        let err = validate_h_realizable(&spectrum_of(&["1", "-1", "2"])).unwrap_err();
        assert!(matches!(err, Error::Parity(_)));
    }

    #[test]
    fn repeated_values_split_into_layers() {
        let plan = validate_h_realizable(&spectrum_of(&["1", "-1", "1", "-1", "2", "-2"])).unwrap();
        assert_eq!(plan.real_pairs.len(), 3);
        assert_eq!(plan.real_layers, vec![vec![1.0, 2.0], vec![1.0]]);
    }

    #[test]
    fn zeros_pair_with_zeros() {
        let plan = validate_h_realizable(&spectrum_of(&["0", "0"])).unwrap();
        assert_eq!(plan.real_pairs, vec![0.0]);
    }

    #[test]
    fn imag_pair_block() {
        let h = realize_imag_pair(1.0).unwrap();
        assert_eq!(h.body(), &crate::symplectic::build_j(1));
        let s = eigenvalues(h.body()).unwrap();
        assert!(pairing_error(&s.values, &[c(0.0, 1.0), c(0.0, -1.0)]) < 1e-12);

        let h3 = realize_imag_pair(3.0).unwrap();
        let s3 = eigenvalues(h3.body()).unwrap();
        assert!(pairing_error(&s3.values, &[c(0.0, 3.0), c(0.0, -3.0)]) < 1e-12);

        assert!(matches!(realize_imag_pair(0.0), Err(Error::Domain(_))));
        assert!(matches!(realize_imag_pair(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn quadruple_block_spectrum() {
        for (a, b) in [(1.0, 1.0), (1.0, 2.0), (0.5, 0.25)] {
            let h = realize_quadruple(a, b);
            let s = eigenvalues(h.body()).unwrap();
            let expected = [c(a, b), c(a, -b), c(-a, -b), c(-a, b)];
            assert!(pairing_error(&s.values, &expected) < 1e-12, "a={a}, b={b}");
        }
    }

    #[test]
    fn quadruple_degenerate_axis_cases() {
        let h = realize_quadruple(0.0, 2.0);
        let s = eigenvalues(h.body()).unwrap();
        let expected = [c(0.0, 2.0), c(0.0, -2.0), c(0.0, 2.0), c(0.0, -2.0)];
        assert!(pairing_error(&s.values, &expected) < 1e-12);
    }

    #[test]
    fn real_singleton_block() {
        let h = realize_real_list(&[5.0]).unwrap();
        assert_eq!(h.body(), &Mat::from_row_slice(2, 2, &[0.0, 5.0, 5.0, 0.0]));
    }

    #[test]
    fn real_list_spectrum_is_plus_minus() {
        let h = realize_real_list(&[1.0, 2.0]).unwrap();
        assert_eq!(h.dim(), 4);
        assert_eq!(h.residual(), 0.0);
        let s = eigenvalues(h.body()).unwrap();
        let expected = [c(1.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0), c(-2.0, 0.0)];
        assert!(pairing_error(&s.values, &expected) < 1e-10);
    }

    #[test]
    fn direct_sum_single_block_unchanged() {
        let b = realize_quadruple(1.0, 1.0);
        let h = direct_sum(std::slice::from_ref(&b)).unwrap();
        assert_eq!(h.body(), b.body());
    }

    #[test]
    fn direct_sum_matches_hand_interleaving() {
        // Two quadruple blocks produce this exact 8x8 interleaved layout.
        let h = direct_sum(&[realize_quadruple(1.0, 1.0), realize_quadruple(1.0, 2.0)]).unwrap();
        let expected = Mat::from_row_slice(
            8,
            8,
            &[
                1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, //
                -1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, -2.0, 1.0, 0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, -1.0, -1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 2.0, //
                0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -2.0, -1.0,
            ],
        );
        assert_eq!(h.body(), &expected);
    }

    #[test]
    fn direct_sum_of_imag_pairs() {
        let blocks: Vec<HamMatrix> = [1.0, 2.0, 3.0]
            .iter()
            .map(|&b| realize_imag_pair(b).unwrap())
            .collect();
        let h = direct_sum(&blocks).unwrap();
        assert_eq!(h.dim(), 6);
        let s = eigenvalues(h.body()).unwrap();
        let expected = [
            c(0.0, 1.0),
            c(0.0, -1.0),
            c(0.0, 2.0),
            c(0.0, -2.0),
            c(0.0, 3.0),
            c(0.0, -3.0),
        ];
        assert!(pairing_error(&s.values, &expected) < 1e-10);
    }

    #[test]
    fn realize_two_element_spectrum() {
        let h = realize_spectrum(&spectrum_of(&["2", "-2"])).unwrap();
        assert_eq!(h.body(), &Mat::from_row_slice(2, 2, &[0.0, 2.0, 2.0, 0.0]));
    }

    #[test]
    fn realize_quadruple_union() {
        let s = spectrum_of(&[
            "1+1i", "1-1i", "-1-1i", "-1+1i", "1+2i", "1-2i", "-1-2i", "-1+2i",
        ]);
        let h = realize_spectrum(&s).unwrap();
        assert_eq!(h.dim(), 8);
        assert!(is_hamiltonian(h.body(), 1e-12).unwrap().0);
        let achieved = eigenvalues(h.body()).unwrap();
        assert!(pairing_error(&achieved.values, s.values()) < 1e-8);
    }

    #[test]
    fn realize_with_repeated_real_values() {
        // Repeated +-1 forces the layered construction; a single companion
        // block would be defective here.
        let s = spectrum_of(&["1", "-1", "1", "-1", "0.5", "-0.5"]);
        let h = realize_spectrum(&s).unwrap();
        assert_eq!(h.dim(), 6);
        let achieved = eigenvalues(h.body()).unwrap();
        assert!(pairing_error(&achieved.values, s.values()) < 1e-8);
    }

    #[test]
    fn realize_empty_is_rejected() {
        let s = Spectrum::from_values(vec![]).unwrap();
        assert!(matches!(realize_spectrum(&s), Err(Error::Parity(_))));
    }
}
