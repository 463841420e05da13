//! Density matrices, pure states and qubit Bloch vectors.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::coherence::Observable;
use crate::linalg::{self, pauli, ComplexMatrix};
use crate::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Below this length a Bloch vector has no usable direction.
pub const DIRECTION_EPS: f64 = 1e-12;
/// Tolerance on Hermiticity, trace and negativity of a density matrix.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance on the norm of a pure state.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on the length of vectors that must be unit.
pub const UNIT_TOL: f64 = 1e-10;

pub(crate) fn check_unit(v: &Vec3) -> Result<()> {
    let n = v.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnitVector(n));
    }
    Ok(())
}

/// Trace-one positive-semidefinite Hermitian operator.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let dev = mat.hermitian_deviation();
        if dev > STATE_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let eig = linalg::herm_eig(&mat)?;
        if eig.eigenvalues[0] < -STATE_TOL {
            return Err(Error::NotPsd(eig.eigenvalues[0]));
        }
        Ok(Self {
            mat: mat.hermitian_part(),
        })
    }

    /// Wraps a matrix known to be a state by construction (e.g. the output
    /// of a validated CPTP map); only the Hermitian part is kept.
    pub(crate) fn from_matrix_unchecked(mat: ComplexMatrix) -> Self {
        Self {
            mat: mat.hermitian_part(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Diagonal state `Σ p_i |i⟩⟨i|` in the computational basis.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let diag: Vec<Complex64> = probs.iter().map(|&p| p.into()).collect();
        Self::new(ComplexMatrix::from_diagonal(&diag))
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.mat.mul_unchecked(&self.mat).trace().re
    }

    /// `λ·self + (1−λ)·other`.
    pub fn mix(&self, lambda: f64, other: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
            });
        }
        let m = self
            .mat
            .scale_real(lambda)
            .add(&other.mat.scale_real(1.0 - lambda))?;
        Ok(Self::from_matrix_unchecked(m))
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        Self {
            mat: ComplexMatrix::outer(&psi.amps),
        }
    }
}

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<Complex64>,
}

impl PureState {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if amps.is_empty() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if amps.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![linalg::ZERO; dim];
        amps[index] = linalg::ONE;
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from(self)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Self { amps }
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }
}

/// Qubit Bloch vector with `|r| ≤ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector(Vec3);

impl BlochVector {
    pub fn new(r: Vec3) -> Result<Self> {
        let n = r.norm();
        if !n.is_finite() || n > 1.0 + STATE_TOL {
            return Err(Error::OutsideBlochBall(n));
        }
        Ok(Self(r))
    }

    pub fn from_components(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Vec3::new(x, y, z))
    }

    pub fn vector(&self) -> Vec3 {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `r/|r|`, or `None` when `|r| ≤ DIRECTION_EPS`.
    pub fn unit_direction(&self) -> Option<Vec3> {
        let n = self.norm();
        (n > DIRECTION_EPS).then(|| self.0 / n)
    }
}

/// `½(I + r·σ)`.
pub fn density_from_bloch(r: &BlochVector) -> DensityMatrix {
    let m = ComplexMatrix::identity(2)
        .add(&pauli::dot(&r.0))
        .expect("2x2")
        .scale_real(0.5);
    DensityMatrix::from_matrix_unchecked(m)
}

/// `r_i = tr(ρ σ_i)`.
pub fn bloch_from_density(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::NotQubit(rho.dim()));
    }
    Ok(BlochVector(bloch_components(rho.matrix())))
}

/// Bloch components of any 2×2 matrix, `tr(m σ_i)` (real parts).
pub(crate) fn bloch_components(m: &ComplexMatrix) -> Vec3 {
    let (a01, a10) = (m.get(0, 1), m.get(1, 0));
    Vec3::new(
        (a01 + a10).re,
        (a10 - a01).im,
        (m.get(0, 0) - m.get(1, 1)).re,
    )
}

/// Uniform superposition `d^{-1/2} Σ_j e^{iφ_j} |k_j⟩` over the eigenbasis of
/// `basis`, with `φ_0 = 0` and `phases = (φ_1, …, φ_{d−1})`.
pub fn max_coherent_state(basis: &Observable, phases: &[f64]) -> Result<PureState> {
    let d = basis.dim();
    if phases.len() + 1 != d {
        return Err(Error::PhaseCount {
            expected: d - 1,
            count: phases.len(),
        });
    }
    let amp = 1.0 / (d as f64).sqrt();
    let vectors = &basis.eigen().eigenvectors;
    let mut psi = vec![linalg::ZERO; d];
    for j in 0..d {
        let phi = if j == 0 { 0.0 } else { phases[j - 1] };
        let w = Complex64::from_polar(amp, phi);
        for (i, a) in psi.iter_mut().enumerate() {
            *a += w * vectors.get(i, j);
        }
    }
    Ok(PureState { amps: psi })
}

/// `(|k̂+⟩ + e^{iΩ}|k̂−⟩)/√2`, a pure state on the great circle orthogonal to `k̂`.
pub fn equatorial_state(k_hat: &Vec3, omega: f64) -> Result<PureState> {
    check_unit(k_hat)?;
    let eig = linalg::herm_eig(&pauli::dot(k_hat))?;
    // ascending: column 0 is the −1 eigenvector, column 1 the +1 eigenvector
    let minus = eig.vector(0);
    let plus = eig.vector(1);
    let w = Complex64::from_polar(1.0, omega);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let amps = plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| (p + w * m) * s)
        .collect();
    Ok(PureState { amps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn bloch_of(psi: &PureState) -> Vec3 {
        bloch_from_density(&psi.density()).unwrap().vector()
    }

    #[test]
    fn density_from_bloch_examples() {
        let mixed = density_from_bloch(&BlochVector::from_components(0.0, 0.0, 0.0).unwrap());
        assert!(mixed.matrix().distance(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);

        let zero = density_from_bloch(&BlochVector::from_components(0.0, 0.0, 1.0).unwrap());
        assert!(zero.matrix().distance(&ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]).unwrap()) < 1e-15);

        let plus = density_from_bloch(&BlochVector::from_components(1.0, 0.0, 0.0).unwrap());
        for z in plus.matrix().entries() {
            assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn bloch_outside_ball_rejected() {
        assert!(matches!(
            BlochVector::from_components(1.0, 0.1, 0.0),
            Err(Error::OutsideBlochBall(_))
        ));
    }

    #[test]
    fn bloch_from_density_examples() {
        let r = bloch_from_density(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert!(r.norm() < 1e-15);
        let r = bloch_from_density(&PureState::basis(2, 0).density()).unwrap();
        assert!((r.vector() - Vec3::z()).norm() < 1e-15);
        let rho = density_from_bloch(&BlochVector::from_components(0.6, 0.0, 0.0).unwrap());
        let r = bloch_from_density(&rho).unwrap();
        assert!((r.vector() - Vec3::new(0.6, 0.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            bloch_from_density(&DensityMatrix::maximally_mixed(4)),
            Err(Error::NotQubit(4))
        ));
    }

    #[test]
    fn density_validation() {
        let bad_trace = ComplexMatrix::identity(2);
        assert!(matches!(DensityMatrix::new(bad_trace), Err(Error::InvalidTrace(_))));
        let negative = ComplexMatrix::from_real(2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(matches!(DensityMatrix::new(negative), Err(Error::NotPsd(_))));
        assert!(DensityMatrix::diagonal(&[0.25, 0.75]).is_ok());
    }

    #[test]
    fn pure_state_norm_checked() {
        assert!(PureState::new(vec![linalg::ONE, linalg::ONE]).is_err());
        let psi = PureState::normalized(vec![linalg::ONE, linalg::ONE]).unwrap();
        assert!((psi.amplitudes()[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn max_coherent_qubit() {
        let z = Observable::pauli_axis(&Vec3::z()).unwrap();
        // z eigenbasis ascending is (|1⟩, |0⟩), so phase 0 gives |+⟩ up to order
        let plus = max_coherent_state(&z, &[0.0]).unwrap();
        assert!((bloch_of(&plus) - Vec3::x()).norm() < 1e-14);
        let minus = max_coherent_state(&z, &[PI]).unwrap();
        assert!((bloch_of(&minus) + Vec3::x()).norm() < 1e-14);
        assert!(matches!(
            max_coherent_state(&z, &[0.0, 1.0]),
            Err(Error::PhaseCount { .. })
        ));
    }

    #[test]
    fn max_coherent_two_qubit_matches_product_form() {
        let computational = Observable::from_matrix(
            ComplexMatrix::from_real(4, &[
                0.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 2.0, 0.0, //
                0.0, 0.0, 0.0, 3.0,
            ])
            .unwrap(),
            "diag(0,1,2,3)",
        )
        .unwrap();
        let (a, b, g) = (0.3, 1.1, -2.0);
        let psi = max_coherent_state(&computational, &[a, b, g]).unwrap();
        let expected = [0.0, a, b, g].map(|p| Complex64::from_polar(0.5, p));
        for (x, y) in psi.amplitudes().iter().zip(&expected) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn equatorial_examples() {
        let s = equatorial_state(&Vec3::z(), 0.0).unwrap();
        assert!((bloch_of(&s) - Vec3::x()).norm() < 1e-14);
        let s = equatorial_state(&Vec3::z(), FRAC_PI_2).unwrap();
        assert!((bloch_of(&s) - Vec3::y()).norm() < 1e-14);
        let s = equatorial_state(&Vec3::x(), 0.0).unwrap();
        assert!((bloch_of(&s) - Vec3::z()).norm() < 1e-14);
        assert!(matches!(
            equatorial_state(&Vec3::new(1.0, 1.0, 0.0), 0.0),
            Err(Error::NotUnitVector(_))
        ));
    }

    #[test]
    fn equatorial_bloch_is_orthogonal_unit() {
        let k = Vec3::new(0.3, -0.5, 0.8).normalize();
        for i in 0..16 {
            let m = bloch_of(&equatorial_state(&k, i as f64 * 0.4).unwrap());
            assert!(m.dot(&k).abs() < 1e-10);
            assert!((m.norm() - 1.0).abs() < 1e-10);
        }
    }
}
