//! Seeded random samplers for property checks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::ComplexMatrix;
use crate::states::{BlochVector, DensityMatrix, PureState, Vec3};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// Uniform on the unit sphere.
pub fn unit_vector(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(normal(rng), normal(rng), normal(rng));
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Uniform in the Bloch ball.
pub fn bloch_vector(rng: &mut impl Rng) -> BlochVector {
    let r = rng.random::<f64>().cbrt();
    BlochVector::new(unit_vector(rng) * r).expect("inside the ball")
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
pub fn unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
        for q in &cols {
            let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

pub fn pure_state(rng: &mut impl Rng, dim: usize) -> PureState {
    loop {
        let amps: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
        if let Ok(psi) = PureState::normalized(amps) {
            return psi;
        }
    }
}

/// `G G† / tr(G G†)` for a complex Ginibre `G` (Hilbert–Schmidt measure).
pub fn density(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| complex_normal(rng));
    let m = g.mul_unchecked(&g.dagger());
    let tr = m.trace().re;
    DensityMatrix::from_matrix_unchecked(m.scale_real(1.0 / tr))
}

/// Probability vector with exponential weights (flat Dirichlet).
pub fn probabilities(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}
