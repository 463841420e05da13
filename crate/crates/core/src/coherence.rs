//! Coherence of states with respect to an observable: the l1-norm of
//! off-diagonal elements and the skew information.
//!
//! The l1 measure only looks at the eigenbasis of the observable. The skew
//! information `−½ tr([√ρ, K]²)` also depends on its eigenvalues. For a
//! degenerate observable the eigenbasis is not unique; [`Observable`] keeps
//! whichever basis it was built with (the Jacobi basis for
//! [`Observable::from_matrix`], product vectors for [`Observable::product`]).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, pauli, ComplexMatrix, EigenDecomposition};
use crate::states::{check_unit, BlochVector, DensityMatrix, PureState, Vec3};
use crate::{Error, Result};

/// Computed values in `[-CLAMP_TOL, 0)` are reported as 0.
pub const CLAMP_TOL: f64 = 1e-12;
/// Minimum eigenvalue gap for an observable to count as nondegenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    L1,
    Skew,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::L1 => "l1",
            Measure::Skew => "skew",
        })
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Measure::L1),
            "skew" => Ok(Measure::Skew),
            other => Err(format!("unknown measure `{other}` (expected l1 or skew)")),
        }
    }
}

/// Hermitian operator together with its eigenbasis.
#[derive(Clone, Debug)]
pub struct Observable {
    matrix: ComplexMatrix,
    eig: EigenDecomposition,
    label: String,
}

impl Observable {
    pub fn from_matrix(matrix: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let eig = linalg::herm_eig(&matrix)?;
        Ok(Self {
            matrix: matrix.hermitian_part(),
            eig,
            label: label.into(),
        })
    }

    /// `σ·k̂` for a unit direction.
    pub fn pauli_axis(k_hat: &Vec3) -> Result<Self> {
        check_unit(k_hat)?;
        Self::from_matrix(pauli::dot(k_hat), axis_label(k_hat))
    }

    /// General qubit observable `αI + β σ·k̂`.
    pub fn qubit(alpha: f64, beta: f64, k_hat: &Vec3) -> Result<Self> {
        check_unit(k_hat)?;
        let m = ComplexMatrix::identity(2)
            .scale_real(alpha)
            .add(&pauli::dot(k_hat).scale_real(beta))?;
        Self::from_matrix(m, format!("{alpha}I+{beta}{}", axis_label(k_hat)))
    }

    /// Tensor product of observables, keeping the product eigenbasis even
    /// when the product operator is degenerate.
    pub fn product(factors: &[Observable]) -> Result<Self> {
        let (first, rest) = factors.split_first().ok_or(Error::EmptyTensor)?;
        let mut matrix = first.matrix.clone();
        let mut vectors = first.eig.eigenvectors.clone();
        let mut values = first.eig.eigenvalues.clone();
        let mut label = first.label.clone();
        for f in rest {
            matrix = matrix.kron(&f.matrix);
            vectors = vectors.kron(&f.eig.eigenvectors);
            values = values
                .iter()
                .flat_map(|a| f.eig.eigenvalues.iter().map(move |b| a * b))
                .collect();
            label = format!("{label}⊗{}", f.label);
        }
        Ok(Self {
            matrix,
            eig: EigenDecomposition::canonical(values, vectors),
            label,
        })
    }

    /// Observable with a prescribed orthonormal eigenbasis (columns of
    /// `vectors`) and eigenvalues.
    pub fn from_basis(
        vectors: ComplexMatrix,
        eigenvalues: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if eigenvalues.len() != vectors.dim() {
            return Err(Error::DimensionMismatch {
                expected: vectors.dim(),
                found: eigenvalues.len(),
            });
        }
        let dev = vectors.unitarity_deviation();
        if dev > 1e-10 {
            return Err(Error::NotUnitary(dev));
        }
        let eig = EigenDecomposition::canonical(eigenvalues, vectors);
        Ok(Self {
            matrix: eig.reconstruct(),
            eig,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Basis vector `|k_i⟩`.
    pub fn basis_state(&self, i: usize) -> PureState {
        PureState::new(self.eig.vector(i)).expect("eigenvectors are normalized")
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.eig
            .eigenvalues
            .windows(2)
            .all(|w| w[1] - w[0] > DEGENERACY_TOL)
    }

    /// Matrix elements `⟨k_i|m|k_j⟩`.
    pub fn in_basis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.eig.eigenvectors;
        v.dagger().mul_unchecked(m).mul_unchecked(v)
    }

    /// Amplitudes `⟨k_i|ψ⟩`.
    pub fn amplitudes_in_basis(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let v = &self.eig.eigenvectors;
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|r| v.get(r, i).conj() * psi[r]).sum())
            .collect()
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: d,
            });
        }
        Ok(())
    }
}

fn axis_label(k: &Vec3) -> String {
    if (k - Vec3::x()).norm() < 1e-12 {
        "x".into()
    } else if (k - Vec3::y()).norm() < 1e-12 {
        "y".into()
    } else if (k - Vec3::z()).norm() < 1e-12 {
        "z".into()
    } else {
        format!("({:.6},{:.6},{:.6})", k[0], k[1], k[2])
    }
}

/// A coherence value tagged with how it was measured.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherenceValue {
    pub value: f64,
    pub measure: Measure,
    pub basis_label: String,
}

impl CoherenceValue {
    fn new(value: f64, measure: Measure, basis_label: impl Into<String>) -> Self {
        Self {
            value: clamp_roundoff(value),
            measure,
            basis_label: basis_label.into(),
        }
    }
}

pub(crate) fn clamp_roundoff(v: f64) -> f64 {
    if (-CLAMP_TOL..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// `Σ_{i≠j} |⟨k_i|ρ|k_j⟩|`.
pub fn c_l1(rho: &DensityMatrix, k: &Observable) -> Result<CoherenceValue> {
    k.check_dim(rho.dim())?;
    let m = k.in_basis(rho.matrix());
    let n = m.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += m.get(i, j).norm();
            }
        }
    }
    Ok(CoherenceValue::new(sum, Measure::L1, k.label()))
}

/// l1 coherence of a pure state, `(Σ_i |⟨k_i|ψ⟩|)² − 1`.
pub fn c_l1_pure(psi: &PureState, k: &Observable) -> Result<CoherenceValue> {
    k.check_dim(psi.dim())?;
    let s: f64 = k
        .amplitudes_in_basis(psi.amplitudes())
        .iter()
        .map(|a| a.norm())
        .sum();
    Ok(CoherenceValue::new(s * s - 1.0, Measure::L1, k.label()))
}

/// `r √(1 − (r̂·k̂)²)`.
pub fn c_l1_qubit(r: &BlochVector, k_hat: &Vec3) -> CoherenceValue {
    let value = match r.unit_direction() {
        Some(dir) => r.norm() * (1.0 - dir.dot(k_hat).powi(2)).max(0.0).sqrt(),
        None => 0.0,
    };
    CoherenceValue::new(value, Measure::L1, axis_label(k_hat))
}

/// Skew information `−½ tr([√ρ, K]²)`.
pub fn c_skew(rho: &DensityMatrix, k: &Observable) -> Result<CoherenceValue> {
    k.check_dim(rho.dim())?;
    let root = linalg::sqrt_psd(rho.matrix())?;
    let comm = ComplexMatrix::commutator(&root, k.matrix())?;
    let value = -0.5 * comm.mul_unchecked(&comm).trace().re;
    Ok(CoherenceValue::new(value, Measure::Skew, k.label()))
}

/// Variance `⟨ψ|K²|ψ⟩ − ⟨ψ|K|ψ⟩²`, the skew information of a pure state.
pub fn c_skew_pure(psi: &PureState, k: &Observable) -> Result<CoherenceValue> {
    k.check_dim(psi.dim())?;
    let kpsi = k.matrix().mul_vec(psi.amplitudes())?;
    let amps = psi.amplitudes();
    let mean: f64 = amps.iter().zip(&kpsi).map(|(a, b)| a.conj() * b).sum::<Complex64>().re;
    let second: f64 = kpsi.iter().map(|b| b.norm_sqr()).sum();
    Ok(CoherenceValue::new(second - mean * mean, Measure::Skew, k.label()))
}

/// `√(1 − r²)` for a Bloch radius `r`, zero when `1 − r²` is at the
/// eigenvalue floor of [`linalg::sqrt_psd`] (the small eigenvalue of the
/// qubit state is `(1 − r²)/4`).
pub(crate) fn mixedness_root(r: f64) -> f64 {
    let r = r.min(1.0);
    let deficit = (1.0 - r) * (1.0 + r);
    if deficit <= 4.0 * linalg::EIGEN_ZERO_FLOOR {
        0.0
    } else {
        deficit.sqrt()
    }
}

/// `(1 − √(1 − r²)) (1 − (r̂·k̂)²)`.
pub fn c_skew_qubit(r: &BlochVector, k_hat: &Vec3) -> CoherenceValue {
    let value = match r.unit_direction() {
        Some(dir) => (1.0 - mixedness_root(r.norm())) * (1.0 - dir.dot(k_hat).powi(2)).max(0.0),
        None => 0.0,
    };
    CoherenceValue::new(value, Measure::Skew, axis_label(k_hat))
}

pub fn coherence(rho: &DensityMatrix, k: &Observable, measure: Measure) -> Result<CoherenceValue> {
    match measure {
        Measure::L1 => c_l1(rho, k),
        Measure::Skew => c_skew(rho, k),
    }
}
