//! Deterministic generators for the property-test suites.
//!
//! A tiny self-contained SplitMix64 generator keeps test inputs reproducible
//! across platforms and toolchains without external dependencies. These
//! helpers are exported so integration tests can share them.

use crate::matrix::Mat;
use crate::symplectic::HamMatrix;

/// Deterministic pseudo-random generator (SplitMix64).
#[derive(Debug, Clone)]
pub struct TestRng {
    state: u64,
}

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform index in [0, n).
    ///
    /// # Panics
    /// Panics if `n == 0`.
    pub fn next_index(&mut self, n: usize) -> usize {
        assert!(n > 0, "cannot sample an empty range");
        (self.next_u64() % n as u64) as usize
    }
}

/// Random matrix with entries uniform in [-1, 1).
pub fn random_matrix(rng: &mut TestRng, rows: usize, cols: usize) -> Mat {
    let data: Vec<f64> = (0..rows * cols).map(|_| rng.uniform(-1.0, 1.0)).collect();
    Mat::from_row_slice(rows, cols, &data)
}

/// Random Hamiltonian matrix of half-dimension `n`: blocks [[C, G], [F, -C^T]]
/// with G and F exactly symmetric, so the structural residual is exactly zero.
pub fn random_hamiltonian(rng: &mut TestRng, n: usize) -> HamMatrix {
    let c = random_matrix(rng, n, n);
    let g = symmetrize(&random_matrix(rng, n, n));
    let f = symmetrize(&random_matrix(rng, n, n));
    let mut h = Mat::zeros(2 * n, 2 * n);
    h.set_block(0, 0, &c);
    h.set_block(0, n, &g);
    h.set_block(n, 0, &f);
    h.set_block(n, n, &(-&c.transpose()));
    HamMatrix::certify(h).expect("construction is exactly Hamiltonian")
}

/// Random matrix with exactly orthonormal-to-working-precision columns,
/// produced by Gram-Schmidt on a random full-rank draw.
pub fn random_orthonormal(rng: &mut TestRng, rows: usize, cols: usize) -> Mat {
    assert!(
        cols <= rows,
        "cannot have more orthonormal columns than rows"
    );
    loop {
        let a = random_matrix(rng, rows, cols);
        if let Some(q) = a.orthonormal_columns(1e-6) {
            return q;
        }
    }
}

fn symmetrize(a: &Mat) -> Mat {
    // (a_ij + a_ji)/2 evaluates identically for both triangles.
    Mat::from_fn(a.rows(), a.cols(), |i, j| (a[(i, j)] + a[(j, i)]) / 2.0)
}
