//! Dense complex matrices for small Hilbert spaces.
//!
//! Everything here is O(d³) or worse and meant for `d ≤ 16`. The
//! Hermitian eigensolver is a cyclic complex Jacobi iteration, which is
//! slow for large matrices but accurate to working precision on the
//! 2×2 and 4×4 operators this crate deals with.

use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// Off-diagonal Frobenius threshold at which the Jacobi sweep stops.
pub const JACOBI_TOL: f64 = 1e-12;
/// Hard cap on Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Largest tolerated `max |a - a†|` for inputs that must be Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are clipped to zero before rooting.
pub const PSD_TOL: f64 = 1e-10;
/// Relative floor under which a computed eigenvalue is treated as zero when
/// rooting. Round-off in a rank-deficient matrix leaves eigenvalues of order
/// 1e-17; their square roots would otherwise leak ~1e-8 into `√ρ`.
pub const EIGEN_ZERO_FLOOR: f64 = 1e-14;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    /// Builds a `dim × dim` matrix from row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::MalformedMatrix {
                dim,
                len: entries.len(),
            });
        }
        Ok(Self { dim, data: entries })
    }

    /// Infers the dimension from the entry count, which must be a perfect square.
    pub fn from_entries(entries: Vec<Complex64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        Self::new(dim, entries)
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { ZERO })
    }

    /// Projector `|ψ⟩⟨ψ|`.
    pub fn outer(psi: &[Complex64]) -> Self {
        Self::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.dim + j] = z;
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// `self · other · self†`, the conjugation used for every Kraus term.
    pub(crate) fn sandwich(&self, other: &Self) -> Self {
        self.mul_unchecked(other).mul_unchecked(&self.dagger())
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Kronecker product; entry `(i·db + k, j·db + l)` is `a[i,j]·b[k,l]`.
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let n = da * db;
        let mut data = vec![ZERO; n * n];
        for i in 0..da {
            for j in 0..da {
                let a = self.get(i, j);
                for k in 0..db {
                    for l in 0..db {
                        data[(i * db + k) * n + j * db + l] = a * other.get(k, l);
                    }
                }
            }
        }
        Self { dim: n, data }
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `ab − ba`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self> {
        a.check_same_dim(b)?;
        a.mul_unchecked(b).sub(&b.mul_unchecked(a))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance `‖self − other‖_F`; infinite on dimension mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `max_ij |a_ij − conj(a_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `½(A + A†)`; scrubs round-off asymmetry from products that are
    /// Hermitian in exact arithmetic.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5)
    }

    /// `‖A†A − I‖_F`.
    pub fn unitarity_deviation(&self) -> f64 {
        self.dagger()
            .mul_unchecked(self)
            .distance(&Self::identity(self.dim))
    }
}

/// Pauli matrices and the `σ·v` combination.
pub mod pauli {
    use super::{ComplexMatrix, I, ONE, ZERO};
    use nalgebra::Vector3;

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![ZERO, -I, I, ZERO]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![ONE, ZERO, ZERO, -ONE]).unwrap()
    }

    /// `[σx, σy, σz]`.
    pub fn all() -> [ComplexMatrix; 3] {
        [x(), y(), z()]
    }

    /// `v·σ`.
    pub fn dot(v: &Vector3<f64>) -> ComplexMatrix {
        let (a, b, c) = (v[0], v[1], v[2]);
        ComplexMatrix::new(
            2,
            vec![
                (c).into(),
                num_complex::Complex64::new(a, -b),
                num_complex::Complex64::new(a, b),
                (-c).into(),
            ],
        )
        .unwrap()
    }
}

/// Spectrum of a Hermitian matrix: ascending eigenvalues and the matching
/// orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Sorts the pairs by ascending eigenvalue (stable) and fixes each
    /// column's phase so its first non-negligible component is real positive.
    pub fn canonical(eigenvalues: Vec<f64>, eigenvectors: ComplexMatrix) -> Self {
        let n = eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));

        let mut vecs = ComplexMatrix::zeros(n);
        for (new_col, &old_col) in order.iter().enumerate() {
            let col = eigenvectors.column(old_col);
            let phase = col
                .iter()
                .find(|z| z.norm() > 1e-10)
                .map(|z| z.conj() / z.norm())
                .unwrap_or(ONE);
            for (i, z) in col.into_iter().enumerate() {
                vecs.set(i, new_col, z * phase);
            }
        }
        Self {
            eigenvalues: order.iter().map(|&i| eigenvalues[i]).collect(),
            eigenvectors: vecs,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvector `i` (column `i`).
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.eigenvectors.column(i)
    }

    /// `V diag(f(λ)) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .filter(|&k| weights[k] != 0.0)
                .map(|k| v.get(i, k) * v.get(j, k).conj() * weights[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn herm_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let deviation = a.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian(deviation));
    }
    let n = a.dim;
    let mut m = a.hermitian_part().data;
    let mut v = ComplexMatrix::identity(n).data;
    let scale = a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, n, p, q);
            }
        }
    }

    let eigenvalues = (0..n).map(|i| m[i * n + i].re).collect();
    let vecs = ComplexMatrix { dim: n, data: v };
    Ok(EigenDecomposition::canonical(eigenvalues, vecs))
}

/// One Jacobi rotation annihilating `m[p,q]`.
///
/// With `m[p,q] = r·e^{iφ}` the unitary `W = diag(1, e^{-iφ})·R(θ)` on the
/// `(p,q)` plane reduces the block to the real symmetric case, where `R` is
/// the classical Jacobi rotation.
fn rotate(m: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m[p * n + p].re;
    let aqq = m[q * n + q].re;
    let phase_conj = apq.conj() / r;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let w00 = Complex64::new(c, 0.0);
    let w01 = Complex64::new(s, 0.0);
    let w10 = phase_conj * (-s);
    let w11 = phase_conj * c;

    // m ← m·W
    for k in 0..n {
        let (akp, akq) = (m[k * n + p], m[k * n + q]);
        m[k * n + p] = akp * w00 + akq * w10;
        m[k * n + q] = akp * w01 + akq * w11;
    }
    // m ← W†·m
    for k in 0..n {
        let (apk, aqk) = (m[p * n + k], m[q * n + k]);
        m[p * n + k] = w00.conj() * apk + w10.conj() * aqk;
        m[q * n + k] = w01.conj() * apk + w11.conj() * aqk;
    }
    m[p * n + q] = ZERO;
    m[q * n + p] = ZERO;
    m[p * n + p] = Complex64::new(app - t * r, 0.0);
    m[q * n + q] = Complex64::new(aqq + t * r, 0.0);

    // v ← v·W
    for k in 0..n {
        let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
        v[k * n + p] = vkp * w00 + vkq * w10;
        v[k * n + q] = vkp * w01 + vkq * w11;
    }
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
pub fn sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    sqrt_from_eig(&eig)
}

pub(crate) fn sqrt_from_eig(eig: &EigenDecomposition) -> Result<ComplexMatrix> {
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -PSD_TOL {
        return Err(Error::NotPsd(min));
    }
    let top = eig
        .eigenvalues
        .last()
        .copied()
        .unwrap_or(0.0)
        .abs()
        .max(1.0);
    let floor = EIGEN_ZERO_FLOOR * top;
    Ok(eig.map_spectrum(|l| if l <= floor { 0.0 } else { l.sqrt() }))
}
