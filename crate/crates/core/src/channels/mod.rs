//! Quantum channels in Kraus form.

mod spec;

pub use spec::{ChannelSpec, SpecType};

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::linalg::{pauli, ComplexMatrix};
use crate::states::{bloch_components, check_unit, DensityMatrix, Vec3};
use crate::{Error, Result};

/// Largest tolerated `‖Σ K†K − I‖_F`.
pub const TP_TOL: f64 = 1e-10;

/// Which named family a channel was built from.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelKind {
    Identity,
    /// `U = e^{i(θ/2) n̂·σ}`.
    Rotation { axis: Vec3, theta: f64 },
    Depolarizing { p: f64 },
    BitFlip { p: f64 },
    PhaseFlip { p: f64 },
    Cnot,
    /// Single-Kraus channel from an arbitrary unitary matrix.
    Unitary,
    Tensor(Vec<ChannelKind>),
    Composed,
    Kraus,
}

impl ChannelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ChannelKind::Identity => "identity",
            ChannelKind::Rotation { .. } => "rotation",
            ChannelKind::Depolarizing { .. } => "depolarizing",
            ChannelKind::BitFlip { .. } => "bitflip",
            ChannelKind::PhaseFlip { .. } => "phaseflip",
            ChannelKind::Cnot => "cnot",
            ChannelKind::Unitary => "unitary",
            ChannelKind::Tensor(_) => "tensor",
            ChannelKind::Composed => "composed",
            ChannelKind::Kraus => "kraus",
        }
    }
}

/// Completely positive trace-preserving map `ρ ↦ Σ K_n ρ K_n†`.
#[derive(Clone, Debug)]
pub struct Channel {
    kraus: Vec<ComplexMatrix>,
    kind: ChannelKind,
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange { name: "p", value: p });
    }
    Ok(())
}

impl Channel {
    /// Validates that the operators share a dimension and are trace preserving.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::checked(kraus, ChannelKind::Kraus)
    }

    fn checked(kraus: Vec<ComplexMatrix>, kind: ChannelKind) -> Result<Self> {
        let first = kraus.first().ok_or(Error::Spec {
            field: "kraus".into(),
            reason: "no Kraus operators".into(),
        })?;
        let d = first.dim();
        if let Some(bad) = kraus.iter().find(|k| k.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        let ch = Self { kraus, kind };
        let dev = ch.tp_deviation();
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(dim)],
            kind: ChannelKind::Identity,
        }
    }

    /// `ρ ↦ UρU†` for a unitary matrix.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let dev = u.unitarity_deviation();
        if dev > TP_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self {
            kraus: vec![u],
            kind: ChannelKind::Unitary,
        })
    }

    /// `U = cos(θ/2) I + i sin(θ/2) n̂·σ`, which rotates Bloch vectors by
    /// `−θ` about `n̂`.
    pub fn unitary_rotation(n_hat: &Vec3, theta: f64) -> Result<Self> {
        check_unit(n_hat)?;
        let (s, c) = (theta / 2.0).sin_cos();
        let u = ComplexMatrix::identity(2)
            .scale_real(c)
            .add(&pauli::dot(n_hat).scale(Complex64::new(0.0, s)))?;
        Ok(Self {
            kraus: vec![u],
            kind: ChannelKind::Rotation {
                axis: *n_hat,
                theta,
            },
        })
    }

    /// `H = (I + iσy)/√2`, the Hadamard gate up to a phase and a sign
    /// convention: matrix `(1, 1; −1, 1)/√2`.
    pub fn hadamard() -> Self {
        Self::unitary_rotation(&Vec3::y(), std::f64::consts::FRAC_PI_2).expect("unit axis")
    }

    /// `ρ ↦ (1−p)ρ + p I/2` with the four-Pauli Kraus set.
    pub fn depolarizing(p: f64) -> Result<Self> {
        check_probability(p)?;
        let id = ComplexMatrix::identity(2).scale_real((1.0 - 0.75 * p).max(0.0).sqrt());
        let w = p.sqrt() / 2.0;
        let mut kraus = vec![id];
        kraus.extend(pauli::all().iter().map(|s| s.scale_real(w)));
        Ok(Self {
            kraus,
            kind: ChannelKind::Depolarizing { p },
        })
    }

    /// `ρ ↦ (1−p)ρ + p σx ρ σx`.
    pub fn bit_flip(p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(Self {
            kraus: vec![
                ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
                pauli::x().scale_real(p.sqrt()),
            ],
            kind: ChannelKind::BitFlip { p },
        })
    }

    /// `ρ ↦ (1−p)ρ + p σz ρ σz`.
    pub fn phase_flip(p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(Self {
            kraus: vec![
                ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
                pauli::z().scale_real(p.sqrt()),
            ],
            kind: ChannelKind::PhaseFlip { p },
        })
    }

    /// `|i, j⟩ ↦ |i, i ⊕ j⟩`.
    pub fn cnot() -> Self {
        let perm = [0usize, 1, 3, 2];
        let u = ComplexMatrix::from_fn(4, |i, j| {
            if perm[j] == i {
                crate::linalg::ONE
            } else {
                crate::linalg::ZERO
            }
        });
        Self {
            kraus: vec![u],
            kind: ChannelKind::Cnot,
        }
    }

    /// Tensor product; the Kraus set is every Kronecker product of factor
    /// operators, first factor outermost.
    pub fn tensor(channels: &[Channel]) -> Result<Self> {
        let (first, rest) = channels.split_first().ok_or(Error::EmptyTensor)?;
        let mut kraus = first.kraus.clone();
        for ch in rest {
            kraus = kraus
                .iter()
                .flat_map(|a| ch.kraus.iter().map(move |b| a.kron(b)))
                .collect();
        }
        Ok(Self {
            kraus,
            kind: ChannelKind::Tensor(channels.iter().map(|c| c.kind.clone()).collect()),
        })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Channel) -> Result<Self> {
        if self.dim() != next.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: next.dim(),
            });
        }
        let kraus = next
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| b.mul_unchecked(a)))
            .collect();
        Ok(Self {
            kraus,
            kind: ChannelKind::Composed,
        })
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn kind(&self) -> &ChannelKind {
        &self.kind
    }

    pub fn label(&self) -> &'static str {
        self.kind.label()
    }

    /// Named real parameters of the channel family.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match &self.kind {
            ChannelKind::Rotation { axis, theta } => vec![
                ("nx", axis[0]),
                ("ny", axis[1]),
                ("nz", axis[2]),
                ("theta", *theta),
            ],
            ChannelKind::Depolarizing { p }
            | ChannelKind::BitFlip { p }
            | ChannelKind::PhaseFlip { p } => vec![("p", *p)],
            _ => Vec::new(),
        }
    }

    /// The single Kraus operator of a unitary channel.
    pub fn as_unitary(&self) -> Option<&ComplexMatrix> {
        match self.kraus.as_slice() {
            [u] if u.unitarity_deviation() < TP_TOL => Some(u),
            _ => None,
        }
    }

    /// `‖Σ K†K − I‖_F`.
    pub fn tp_deviation(&self) -> f64 {
        let d = self.dim();
        let sum = self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(d), |acc, k| {
                acc.add(&k.dagger().mul_unchecked(k)).expect("same dim")
            });
        sum.distance(&ComplexMatrix::identity(d))
    }

    /// `Σ K m K†` for an arbitrary operator `m`.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.dim(),
            });
        }
        Ok(self
            .kraus
            .iter()
            .map(|k| k.sandwich(m))
            .reduce(|a, b| a.add(&b).expect("same dim"))
            .expect("nonempty Kraus set"))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.apply_matrix(rho.matrix())
            .map(DensityMatrix::from_matrix_unchecked)
    }

    /// Affine action `m ↦ L m + t` on Bloch vectors of a qubit channel.
    pub fn bloch_map(&self) -> Result<BlochAffineMap> {
        if self.dim() != 2 {
            return Err(Error::NotQubit(self.dim()));
        }
        let half_id = ComplexMatrix::identity(2).scale_real(0.5);
        let shift = bloch_components(&self.apply_matrix(&half_id)?);
        let mut linear = Matrix3::zeros();
        for (j, s) in pauli::all().iter().enumerate() {
            // E(σ_j/2) has Bloch components L[:, j]
            let col = bloch_components(&self.apply_matrix(&s.scale_real(0.5))?);
            linear.set_column(j, &col);
        }
        Ok(BlochAffineMap { linear, shift })
    }
}

/// Action of a qubit channel on the Bloch ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAffineMap {
    pub linear: Matrix3<f64>,
    pub shift: Vec3,
}

impl BlochAffineMap {
    pub fn apply(&self, m: &Vec3) -> Vec3 {
        self.linear * m + self.shift
    }
}

/// Rotation of Bloch vectors by `θ` about `n̂` in the sense
/// `m ↦ cos θ m + sin θ (m × n̂) + (1 − cos θ)(m·n̂) n̂`.
pub fn rotation_matrix(n_hat: &Vec3, theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    let mut r = Matrix3::zeros();
    for j in 0..3 {
        let e = Vec3::ith(j, 1.0);
        r.set_column(j, &(c * e + s * e.cross(n_hat) + (1.0 - c) * e.dot(n_hat) * n_hat));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bloch_from_density, density_from_bloch, BlochVector, PureState};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn bloch(v: Vec3) -> DensityMatrix {
        density_from_bloch(&BlochVector::new(v).unwrap())
    }

    fn same_action(a: &Channel, b: &Channel) -> f64 {
        let probes = [Vec3::x(), Vec3::y(), Vec3::z(), Vec3::new(0.3, -0.4, 0.5)];
        probes
            .iter()
            .map(|v| {
                let rho = bloch(*v);
                a.apply(&rho).unwrap().matrix().distance(b.apply(&rho).unwrap().matrix())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_leaves_state() {
        let rho = bloch(Vec3::new(0.1, 0.2, -0.3));
        let out = Channel::identity(2).apply(&rho).unwrap();
        assert!(out.matrix().distance(rho.matrix()) < 1e-15);
    }

    #[test]
    fn depolarizing_examples() {
        let rho = bloch(Vec3::new(0.5, -0.5, 0.5));
        let out = Channel::depolarizing(1.0).unwrap().apply(&rho).unwrap();
        assert!(out.matrix().distance(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
        assert!(same_action(&Channel::depolarizing(0.0).unwrap(), &Channel::identity(2)) < 1e-15);

        let p = 0.37;
        let map = Channel::depolarizing(p).unwrap().bloch_map().unwrap();
        assert!((map.linear - Matrix3::identity() * (1.0 - p)).norm() < 1e-14);
        assert!(map.shift.norm() < 1e-15);
        assert!(matches!(Channel::depolarizing(1.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn bit_flip_examples() {
        let p = 0.3;
        let out = Channel::bit_flip(p).unwrap().apply(&PureState::basis(2, 0).density()).unwrap();
        let expected = DensityMatrix::diagonal(&[1.0 - p, p]).unwrap();
        assert!(out.matrix().distance(expected.matrix()) < 1e-15);

        assert!(same_action(&Channel::bit_flip(0.0).unwrap(), &Channel::identity(2)) < 1e-15);

        let half = Channel::bit_flip(0.5).unwrap().apply(&bloch(Vec3::y())).unwrap();
        assert!(bloch_from_density(&half).unwrap().norm() < 1e-15);

        let sx = Channel::unitary(pauli::x()).unwrap();
        assert!(same_action(&Channel::bit_flip(1.0).unwrap(), &sx) < 1e-15);
        assert!(Channel::phase_flip(-0.1).is_err());
    }

    #[test]
    fn bit_flip_bloch_map_formula() {
        for &p in &[0.0, 0.2, 0.5, 0.9] {
            let map = Channel::bit_flip(p).unwrap().bloch_map().unwrap();
            let m = Vec3::new(0.48, 0.6, 0.64);
            let expected = (1.0 - 2.0 * p) * m + 2.0 * p * m.dot(&Vec3::x()) * Vec3::x();
            assert!((map.apply(&m) - expected).norm() < 1e-12);
            let pf = Channel::phase_flip(p).unwrap().bloch_map().unwrap();
            let expected = (1.0 - 2.0 * p) * m + 2.0 * p * m.dot(&Vec3::z()) * Vec3::z();
            assert!((pf.apply(&m) - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn rotation_examples() {
        let id = Channel::unitary_rotation(&Vec3::z(), 0.0).unwrap();
        assert!(same_action(&id, &Channel::identity(2)) < 1e-15);

        // θ = π about ŷ: U = iσy
        let u = Channel::unitary_rotation(&Vec3::y(), PI).unwrap();
        let iy = pauli::y().scale(crate::linalg::I);
        assert!(u.kraus()[0].distance(&iy) < 1e-15);

        let h = Channel::hadamard();
        let hm = &h.kraus()[0];
        let expected = ComplexMatrix::from_real(2, &[1.0, 1.0, -1.0, 1.0]).unwrap().scale_real(FRAC_1_SQRT_2);
        assert!(hm.distance(&expected) < 1e-15);
        assert!(hm.unitarity_deviation() < 1e-15);
        // H σz H† = −σx
        let conj = hm.mul(&pauli::z()).unwrap().mul(&hm.dagger()).unwrap();
        assert!(conj.distance(&pauli::x().scale_real(-1.0)) < 1e-15);
        assert!(Channel::unitary_rotation(&Vec3::new(1.0, 1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn rotation_bloch_map_matches_rodrigues_form() {
        let n = Vec3::new(1.0, -2.0, 0.5).normalize();
        for &theta in &[0.0, 0.4, FRAC_PI_2, 2.5, PI] {
            let map = Channel::unitary_rotation(&n, theta).unwrap().bloch_map().unwrap();
            assert!((map.linear - rotation_matrix(&n, theta)).norm() < 1e-14);
            assert!(map.shift.norm() < 1e-15);
        }
    }

    #[test]
    fn cnot_action() {
        let cnot = Channel::cnot();
        let u = &cnot.kraus()[0];
        let on = |i: usize| u.mul_vec(PureState::basis(4, i).amplitudes()).unwrap();
        assert_eq!(on(0), PureState::basis(4, 0).amplitudes());
        assert_eq!(on(2), PureState::basis(4, 3).amplitudes());
        let plus0 = PureState::normalized(vec![1.0.into(), 0.0.into(), 1.0.into(), 0.0.into()]).unwrap();
        let out = u.mul_vec(plus0.amplitudes()).unwrap();
        let bell = PureState::normalized(vec![1.0.into(), 0.0.into(), 0.0.into(), 1.0.into()]).unwrap();
        assert!(PureState::new(out).unwrap().overlap(&bell) > 1.0 - 1e-15);
    }

    #[test]
    fn tensor_examples() {
        let id2 = Channel::identity(2);
        let id4 = Channel::tensor(&[id2.clone(), id2.clone()]).unwrap();
        assert_eq!(id4.kraus()[0], ComplexMatrix::identity(4));

        let hh = Channel::tensor(&[Channel::hadamard(), Channel::hadamard()]).unwrap();
        let out = hh.kraus()[0].mul_vec(PureState::basis(4, 0).amplitudes()).unwrap();
        for a in out {
            assert!((a.norm() - 0.5).abs() < 1e-15);
        }

        let bi = Channel::tensor(&[Channel::bit_flip(0.2).unwrap(), id2]).unwrap();
        assert_eq!(bi.kraus().len(), 2);
        assert!(bi.tp_deviation() < 1e-14);
        assert!(matches!(Channel::tensor(&[]), Err(Error::EmptyTensor)));
    }

    #[test]
    fn composition_order() {
        // bit flip then Hadamard differs from Hadamard then bit flip
        let bf = Channel::bit_flip(0.3).unwrap();
        let h = Channel::hadamard();
        let a = bf.then(&h).unwrap();
        let rho = bloch(Vec3::z());
        let expected = h.apply(&bf.apply(&rho).unwrap()).unwrap();
        assert!(a.apply(&rho).unwrap().matrix().distance(expected.matrix()) < 1e-15);
        assert!(a.tp_deviation() < 1e-14);
    }

    #[test]
    fn from_kraus_validates() {
        let bad = vec![pauli::x().scale_real(0.5)];
        assert!(matches!(Channel::from_kraus(bad), Err(Error::NotTracePreserving(_))));
        let mixed = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(4)];
        assert!(matches!(Channel::from_kraus(mixed), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn bloch_map_needs_qubit() {
        assert!(matches!(Channel::cnot().bloch_map(), Err(Error::NotQubit(4))));
        let map = Channel::identity(2).bloch_map().unwrap();
        assert_eq!(map.linear, Matrix3::identity());
        assert_eq!(map.shift, Vec3::zeros());
    }
}
