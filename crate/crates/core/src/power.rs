//! Cohering and decohering power of channels.
//!
//! The generic routines work for any Kraus channel: cohering power is a
//! maximum over the reference basis states, decohering power a minimum over
//! the torus of maximally coherent phases. Qubit channels additionally get
//! the Bloch-ball reduction through [`f_function`], and every analysed
//! channel family has a closed form here.

use serde::Serialize;

use crate::channels::{rotation_matrix, Channel};
use crate::coherence::{clamp_roundoff, coherence, mixedness_root, Measure, Observable};
use crate::oracle::{minimize_circle, minimize_torus, SearchConfig};
use crate::states::{bloch_from_density, check_unit, equatorial_state, max_coherent_state, Vec3, DIRECTION_EPS};
use crate::{Error, Result};

/// Half-width of the band around the bit-flip threshold in which both
/// branches are evaluated.
pub const THRESHOLD_BAND: f64 = 1e-12;

/// Guard on the bit-flip cohering denominator.
pub const DENOMINATOR_GUARD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    DiscreteMax,
    NumericMin,
}

/// The input achieving a power.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Index of the reference basis state (ascending eigenvalue order).
    BasisIndex(usize),
    /// Relative phases of the maximally coherent input.
    Phases(Vec<f64>),
    /// Bloch vector of a pure qubit input.
    InputBloch([f64; 3]),
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerResult {
    pub value: f64,
    pub witness: Witness,
    pub measure: Measure,
    pub method: Method,
}

impl PowerResult {
    /// A skew-measure value from a closed form.
    pub fn closed_form(value: f64) -> Self {
        Self {
            value,
            witness: Witness::None,
            measure: Measure::Skew,
            method: Method::ClosedForm,
        }
    }
}

fn check_dims(ch: &Channel, k: &Observable) -> Result<()> {
    if ch.dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim(),
            found: k.dim(),
        });
    }
    Ok(())
}

fn check_prob(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange { name, value });
    }
    Ok(())
}

/// `max_i C_K(E(|k_i⟩⟨k_i|))`; ties go to the lowest index.
pub fn cohering_power(ch: &Channel, k: &Observable, measure: Measure) -> Result<PowerResult> {
    check_dims(ch, k)?;
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..k.dim() {
        let out = ch.apply(&k.basis_state(i).density())?;
        let c = coherence(&out, k, measure)?.value;
        if c > best.1 {
            best = (i, c);
        }
    }
    Ok(PowerResult {
        value: best.1,
        witness: Witness::BasisIndex(best.0),
        measure,
        method: Method::DiscreteMax,
    })
}

/// `C_K(max coherent) − min_φ C_K(E(|ψ_φ⟩⟨ψ_φ|))` over the `d − 1` phase torus.
///
/// Skew information is supported for qubits with nondegenerate `K` only.
pub fn decohering_power(
    ch: &Channel,
    k: &Observable,
    measure: Measure,
    search: &SearchConfig,
) -> Result<PowerResult> {
    check_dims(ch, k)?;
    let d = k.dim();
    if measure == Measure::Skew {
        if d > 2 {
            return Err(Error::Unsupported(format!(
                "skew decohering power needs a qubit, got dimension {d}"
            )));
        }
        if !k.is_nondegenerate() {
            return Err(Error::Unsupported("skew decohering power needs a nondegenerate observable".into()));
        }
    }
    let zero_phases = vec![0.0; d - 1];
    let c_max = coherence(&max_coherent_state(k, &zero_phases)?.density(), k, measure)?.value;
    let output = |phases: &[f64]| -> f64 {
        max_coherent_state(k, phases)
            .and_then(|psi| ch.apply(&psi.density()))
            .and_then(|out| coherence(&out, k, measure))
            .map(|c| c.value)
            .unwrap_or(f64::NAN)
    };
    let (phases, min) = minimize_torus(output, d - 1, search)?;
    if min.is_nan() {
        return Err(Error::Unsupported("output coherence undefined on the phase torus".into()));
    }
    Ok(PowerResult {
        value: clamp_roundoff(c_max - min),
        witness: Witness::Phases(phases),
        measure,
        method: Method::NumericMin,
    })
}

/// `(1 − √(1 − |m′|²))(1 − (m̂′·k̂)²)` for an output Bloch vector `m′`;
/// zero when `m′` vanishes.
pub fn f_of_output(m_prime: &Vec3, k_hat: &Vec3) -> f64 {
    let r = m_prime.norm();
    if r < DIRECTION_EPS {
        return 0.0;
    }
    let cos = (m_prime.dot(k_hat) / r).clamp(-1.0, 1.0);
    ((1.0 - mixedness_root(r)) * (1.0 - cos * cos)).max(0.0)
}

/// Skew coherence along `k̂` of the output for pure input `m̂`.
pub fn f_function(ch: &Channel, m_hat: &Vec3, k_hat: &Vec3) -> Result<f64> {
    check_unit(m_hat)?;
    check_unit(k_hat)?;
    let map = ch.bloch_map()?;
    Ok(f_of_output(&map.apply(m_hat), k_hat))
}

/// `max{F(k̂), F(−k̂)}`; basis index 0 is `−k̂` (eigenvalue −1).
pub fn cohering_power_qubit(ch: &Channel, k_hat: &Vec3) -> Result<PowerResult> {
    check_unit(k_hat)?;
    let map = ch.bloch_map()?;
    let minus = f_of_output(&map.apply(&-k_hat), k_hat);
    let plus = f_of_output(&map.apply(k_hat), k_hat);
    let (index, value) = if minus >= plus { (0, minus) } else { (1, plus) };
    Ok(PowerResult {
        value,
        witness: Witness::BasisIndex(index),
        measure: Measure::Skew,
        method: Method::DiscreteMax,
    })
}

/// Orthonormal pair spanning the plane perpendicular to `k̂`, taken from
/// the Bloch vectors of the equatorial states at `Ω = 0` and `Ω = π/2`.
fn equator_frame(k_hat: &Vec3) -> Result<(Vec3, Vec3)> {
    let at = |omega: f64| -> Result<Vec3> {
        Ok(bloch_from_density(&equatorial_state(k_hat, omega)?.density())?.vector())
    };
    Ok((at(0.0)?, at(std::f64::consts::FRAC_PI_2)?))
}

/// `1 − min_{m̂ ⊥ k̂} F(m̂)` by a circle search over the equator.
pub fn decohering_power_qubit(ch: &Channel, k_hat: &Vec3, search: &SearchConfig) -> Result<PowerResult> {
    check_unit(k_hat)?;
    let map = ch.bloch_map()?;
    let (e1, e2) = equator_frame(k_hat)?;
    let m_at = |omega: f64| omega.cos() * e1 + omega.sin() * e2;
    let (omega, min) = minimize_circle(|w| f_of_output(&map.apply(&m_at(w)), k_hat), search)?;
    let m = m_at(omega);
    Ok(PowerResult {
        value: clamp_roundoff(1.0 - min),
        witness: Witness::InputBloch([m[0], m[1], m[2]]),
        measure: Measure::Skew,
        method: Method::NumericMin,
    })
}

/// Cohering power of `unitary_rotation(n̂, θ)` along `k̂`:
/// `1 − [cos θ + (1 − cos θ)(k̂·n̂)²]²`.
pub fn unitary_cohering_closed(n_hat: &Vec3, theta: f64, k_hat: &Vec3) -> Result<f64> {
    check_unit(n_hat)?;
    check_unit(k_hat)?;
    let kn = k_hat.dot(n_hat);
    // 1 − inner = (1 − cos θ)(1 − (k̂·n̂)²), exact zero on the rotation axis
    let gap = (1.0 - theta.cos()) * (1.0 - kn * kn).max(0.0);
    Ok((gap * (2.0 - gap)).clamp(0.0, 1.0))
}

/// `sin²β`, with `β` the angle between `k̂` and its rotated image.
pub fn unitary_sin2_beta(n_hat: &Vec3, theta: f64, k_hat: &Vec3) -> Result<f64> {
    check_unit(n_hat)?;
    check_unit(k_hat)?;
    let image = rotation_matrix(n_hat, theta) * k_hat;
    let cos_beta = image.dot(k_hat).clamp(-1.0, 1.0);
    Ok(1.0 - cos_beta * cos_beta)
}

/// Closed-form cohering power, numeric decohering power and their gap.
pub fn unitary_power_equality(
    n_hat: &Vec3,
    theta: f64,
    k_hat: &Vec3,
    search: &SearchConfig,
) -> Result<(f64, f64, f64)> {
    let c = unitary_cohering_closed(n_hat, theta, k_hat)?;
    let ch = Channel::unitary_rotation(n_hat, theta)?;
    let d = decohering_power_qubit(&ch, k_hat, search)?.value;
    Ok((c, d, (c - d).abs()))
}

/// `√(1 − (1 − p)²)`.
pub fn depolarizing_decohering_closed(p: f64) -> Result<f64> {
    check_prob("p", p)?;
    Ok((1.0 - (1.0 - p).powi(2)).max(0.0).sqrt())
}

/// Bit-flip cohering power with `η = (k̂·x̂)²`:
/// `(1 − √(4p(1−p)(1−η))) · 4p²η(1−η) / (1 − 4p(1−p)(1−η))`.
pub fn bitflip_cohering_closed(p: f64, eta: f64) -> Result<f64> {
    check_prob("p", p)?;
    check_prob("eta", eta)?;
    let a = 4.0 * p * (1.0 - p) * (1.0 - eta);
    let denom = 1.0 - a;
    let numer = 4.0 * p * p * eta * (1.0 - eta);
    if numer == 0.0 || denom < DENOMINATOR_GUARD {
        return Ok(0.0);
    }
    Ok((1.0 - a.sqrt()) * numer / denom)
}

/// Parameters of the reduced bit-flip decohering problem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BitFlipParams {
    pub p: f64,
    /// `4p(1 − p)`
    pub alpha: f64,
    /// `4p²(k̂·x̂)²`
    pub beta: f64,
    /// `(k̂·x̂)²`
    pub eta: f64,
    /// Branch threshold on `(k̂·x̂)²`; absent at `p = 0`.
    pub threshold: Option<f64>,
}

impl BitFlipParams {
    pub fn new(p: f64, kx2: f64) -> Result<Self> {
        check_prob("p", p)?;
        check_prob("kx2", kx2)?;
        let alpha = 4.0 * p * (1.0 - p);
        let threshold = (p > 0.0).then(|| 0.5 * ((1.0 - p) / p + alpha.sqrt() / (4.0 * p * p)));
        Ok(Self {
            p,
            alpha,
            beta: 4.0 * p * p * kx2,
            eta: kx2,
            threshold,
        })
    }

    /// Upper end of the `ξ = (m̂·x̂)²` range for `m̂ ⊥ k̂`.
    pub fn xi_max(&self) -> f64 {
        1.0 - self.eta
    }
}

/// `F_{α,β}(ξ) = (1 − √(α(1−ξ)))(1 − βξ/(1 − α + αξ))`.
pub fn bitflip_f_xi(alpha: f64, beta: f64, xi: f64) -> Result<f64> {
    check_prob("alpha", alpha)?;
    check_prob("xi", xi)?;
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::OutOfRange { name: "beta", value: beta });
    }
    let first = 1.0 - (alpha * (1.0 - xi)).sqrt();
    let denom = 1.0 - alpha + alpha * xi;
    if denom <= 0.0 {
        // only at α = 1, ξ = 0, where the first factor vanishes
        return Ok(0.0);
    }
    Ok(first * (1.0 - beta * xi / denom))
}

/// Stationary points of `F_{α,β}` as printed in the closed-form derivation
/// (`ξ₂,₃` are absent when their radicand is negative or `α = β`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XiCritical {
    pub xi1: Option<f64>,
    pub xi2: Option<f64>,
    pub xi3: Option<f64>,
    pub xi_max: f64,
    pub threshold: Option<f64>,
}

pub fn bitflip_xi_critical(params: &BitFlipParams) -> XiCritical {
    let (a, b) = (params.alpha, params.beta);
    let xi1 = (a > 0.0).then(|| -(1.0 - a) / a);
    let radicand = -(1.0 - a) * (a - b).powi(3) * b;
    let denom = a * (a - b).powi(2);
    let (xi2, xi3) = if denom != 0.0 && radicand >= 0.0 {
        let base = -(1.0 - a) * (a - b) * (a - 2.0 * b);
        let root = radicand.sqrt();
        (Some((base + root) / denom), Some((base - root) / denom))
    } else {
        (None, None)
    };
    XiCritical {
        xi1,
        xi2,
        xi3,
        xi_max: params.xi_max(),
        threshold: params.threshold,
    }
}

/// Interior stationary point of `F_{α,β}` on `[0, ξ_max]`, if any.
///
/// With `u = √(α(1−ξ))`, `F = [α(1−β) − (α−β)u²] / (α(1+u))`, whose
/// derivative vanishes at `u = −1 + √(1 − α(1−β)/(α−β))`.
pub fn bitflip_stationary_xi(params: &BitFlipParams) -> Option<f64> {
    let (a, b) = (params.alpha, params.beta);
    if a <= 0.0 || a == b {
        return None;
    }
    let c = a * (1.0 - b) / (a - b);
    if c > 1.0 {
        return None;
    }
    let u = -1.0 + (1.0 - c).sqrt();
    if u <= 0.0 {
        return None;
    }
    let xi = 1.0 - u * u / a;
    (xi > 0.0 && xi < params.xi_max()).then_some(xi)
}

/// Bit-flip decohering power along `k̂`, with `kx2 = (k̂·x̂)²`, as the
/// two-branch formula split at the threshold `A`.
pub fn bitflip_decohering_closed(p: f64, kx2: f64) -> Result<f64> {
    let params = BitFlipParams::new(p, kx2)?;
    let Some(a) = params.threshold else {
        return Ok(0.0);
    };
    let low = 2.0 * (p * (1.0 - p)).sqrt();
    let high = || {
        let s = (4.0 * p * (1.0 - p) * kx2).sqrt();
        (4.0 * p * kx2 * (1.0 - p * kx2) + s) / (1.0 + s)
    };
    Ok(if kx2 < a - THRESHOLD_BAND {
        low
    } else if kx2 > a + THRESHOLD_BAND {
        high()
    } else {
        low.max(high())
    })
}

/// Bit-flip decohering power from the exact minimum of `F_{α,β}` over the
/// endpoints and the interior stationary point.
pub fn bitflip_decohering_exact(p: f64, kx2: f64) -> Result<f64> {
    let params = BitFlipParams::new(p, kx2)?;
    let f = |xi: f64| bitflip_f_xi(params.alpha, params.beta, xi);
    let mut min = f(0.0)?.min(f(params.xi_max())?);
    if let Some(xi) = bitflip_stationary_xi(&params) {
        min = min.min(f(xi)?);
    }
    Ok(clamp_roundoff(1.0 - min))
}

fn check_count(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange { name: "n", value: 0.0 });
    }
    Ok(())
}

fn check_nonnegative(name: &'static str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| v.is_nan() || **v < 0.0) {
        Some(&value) => Err(Error::OutOfRange { name, value }),
        None => Ok(()),
    }
}

/// l1 cohering power of `u^{⊗n}` in the product basis: `(c + 1)^n − 1`.
pub fn tensor_cohering_theorem(c_single: f64, n: u32) -> Result<f64> {
    check_count(n)?;
    check_nonnegative("c", &[c_single])?;
    Ok((c_single + 1.0).powi(n as i32) - 1.0)
}

/// `Π(cᵢ + 1) − 1` for heterogeneous factors.
pub fn tensor_cohering_product(c_singles: &[f64]) -> Result<f64> {
    if c_singles.is_empty() {
        return Err(Error::EmptyTensor);
    }
    check_nonnegative("c", c_singles)?;
    Ok(c_singles.iter().map(|c| c + 1.0).product::<f64>() - 1.0)
}

fn check_decohering(values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        Some(&value) => Err(Error::OutOfRange { name: "d", value }),
        None => Ok(()),
    }
}

/// Lower bound `2^n − (2 − d)^n` on the l1 decohering power of `u^{⊗n}`.
pub fn tensor_decohering_bound(d_single: f64, n: u32) -> Result<f64> {
    check_count(n)?;
    check_decohering(&[d_single])?;
    Ok(2f64.powi(n as i32) - (2.0 - d_single).powi(n as i32))
}

/// `2^n − Π(2 − dᵢ)` for heterogeneous factors.
pub fn tensor_decohering_bound_product(d_singles: &[f64]) -> Result<f64> {
    if d_singles.is_empty() {
        return Err(Error::EmptyTensor);
    }
    check_decohering(d_singles)?;
    let n = d_singles.len() as i32;
    Ok(2f64.powi(n) - d_singles.iter().map(|d| 2.0 - d).product::<f64>())
}

/// Bound-to-maximum ratios `(2^n − Π_{i≤n}(2 − dᵢ)) / (2^n − 1)` for
/// `n = 1..=len`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticRatio {
    pub ratios: Vec<f64>,
    /// Some factor has `dᵢ = 0`, so the ratios stay below 1.
    pub capped: bool,
}

pub fn asymptotic_ratio(d_singles: &[f64]) -> Result<AsymptoticRatio> {
    if d_singles.is_empty() {
        return Err(Error::EmptyTensor);
    }
    check_decohering(d_singles)?;
    let mut prod = 1.0;
    let mut pow = 1.0;
    let ratios = d_singles
        .iter()
        .map(|d| {
            prod *= 2.0 - d;
            pow *= 2.0;
            (pow - prod) / (pow - 1.0)
        })
        .collect();
    Ok(AsymptoticRatio {
        ratios,
        capped: d_singles.contains(&0.0),
    })
}

/// Skew cohering power of CNOT for a two-qubit observable.
pub fn cnot_power_report(k: &Observable) -> Result<PowerResult> {
    if k.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: k.dim(),
        });
    }
    cohering_power(&Channel::cnot(), k, Measure::Skew)
}

/// CNOT skew cohering power for `σz⊗σz`, `σx⊗σz` and `σx⊗σx`, each with
/// its product eigenbasis.
pub fn cnot_basis_survey() -> Result<Vec<(String, PowerResult)>> {
    let pauli = |v: Vec3| Observable::pauli_axis(&v);
    let pairs = [(Vec3::z(), Vec3::z()), (Vec3::x(), Vec3::z()), (Vec3::x(), Vec3::x())];
    pairs
        .iter()
        .map(|(a, b)| {
            let k = Observable::product(&[pauli(*a)?, pauli(*b)?])?;
            Ok((k.label().to_string(), cnot_power_report(&k)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{density_from_bloch, BlochVector};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn axis(v: Vec3) -> Observable {
        Observable::pauli_axis(&v).unwrap()
    }

    fn circle() -> SearchConfig {
        SearchConfig::circle()
    }

    #[test]
    fn hadamard_powers() {
        let h = Channel::hadamard();
        for (k, want) in [(Vec3::x(), 1.0), (Vec3::y(), 0.0), (Vec3::z(), 1.0)] {
            let c = cohering_power(&h, &axis(k), Measure::Skew).unwrap();
            assert!((c.value - want).abs() < 1e-12, "{k:?}");
            let d = decohering_power(&h, &axis(k), Measure::Skew, &circle()).unwrap();
            assert!((d.value - want).abs() < 1e-9, "{k:?}");
        }
    }

    #[test]
    fn identity_has_no_power() {
        let id = Channel::identity(2);
        let k = axis(Vec3::new(0.6, 0.0, 0.8));
        for m in [Measure::L1, Measure::Skew] {
            assert!(cohering_power(&id, &k, m).unwrap().value.abs() < 1e-12);
            assert!(decohering_power(&id, &k, m, &circle()).unwrap().value.abs() < 1e-12);
        }
    }

    #[test]
    fn depolarizing_powers() {
        let k = axis(Vec3::new(0.0, 0.6, 0.8));
        let full = Channel::depolarizing(1.0).unwrap();
        assert!((decohering_power(&full, &k, Measure::Skew, &circle()).unwrap().value - 1.0).abs() < 1e-12);
        for &p in &[0.0, 0.3, 0.5, 0.8] {
            let ch = Channel::depolarizing(p).unwrap();
            assert!(cohering_power(&ch, &k, Measure::Skew).unwrap().value.abs() < 1e-12);
            let d = decohering_power(&ch, &k, Measure::Skew, &circle()).unwrap().value;
            assert!((d - depolarizing_decohering_closed(p).unwrap()).abs() < 1e-9);
        }
        assert!((depolarizing_decohering_closed(0.5).unwrap() - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn skew_decohering_refuses_two_qubits() {
        let k = Observable::product(&[axis(Vec3::z()), axis(Vec3::z())]).unwrap();
        let err = decohering_power(&Channel::cnot(), &k, Measure::Skew, &SearchConfig::torus()).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
        assert!(decohering_power(&Channel::cnot(), &k, Measure::L1, &SearchConfig::torus()).is_ok());
    }

    #[test]
    fn skew_decohering_refuses_degenerate_observable() {
        let k = Observable::from_matrix(crate::linalg::ComplexMatrix::identity(2), "I").unwrap();
        let err = decohering_power(&Channel::identity(2), &k, Measure::Skew, &circle()).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn f_function_cases() {
        let k = Vec3::new(0.0, 0.6, 0.8);
        let dep = Channel::depolarizing(0.4).unwrap();
        assert!(f_function(&dep, &k, &k).unwrap().abs() < 1e-15);
        assert!(f_function(&dep, &-k, &k).unwrap().abs() < 1e-15);
        let bf = Channel::bit_flip(0.5).unwrap();
        assert_eq!(f_function(&bf, &Vec3::y(), &k).unwrap(), 0.0);
        // isometry: the first factor is 1
        let u = Channel::unitary_rotation(&Vec3::x(), 0.9).unwrap();
        let m = Vec3::new(0.48, 0.6, 0.64);
        let out = u.bloch_map().unwrap().apply(&m);
        let cos = out.dot(&k) / out.norm();
        assert!((f_function(&u, &m, &k).unwrap() - (1.0 - cos * cos)).abs() < 1e-12);
        assert!(f_function(&Channel::cnot(), &m, &k).is_err());
    }

    #[test]
    fn f_function_is_output_skew_coherence() {
        let ch = Channel::bit_flip(0.3).unwrap();
        let k = Vec3::new(0.48, 0.6, 0.64);
        let m = Vec3::new(0.0, 0.8, -0.6);
        let out = ch.apply(&density_from_bloch(&BlochVector::new(m).unwrap())).unwrap();
        let skew = coherence(&out, &axis(k), Measure::Skew).unwrap().value;
        assert!((f_function(&ch, &m, &k).unwrap() - skew).abs() < 1e-12);
    }

    #[test]
    fn qubit_cohering_matches_generic() {
        let k = Vec3::new(1.0, 0.0, 1.0).normalize();
        for ch in [
            Channel::bit_flip(1.0).unwrap(),
            Channel::bit_flip(0.3).unwrap(),
            Channel::hadamard(),
            Channel::unitary_rotation(&Vec3::new(0.0, 0.6, 0.8), 1.1).unwrap(),
        ] {
            let q = cohering_power_qubit(&ch, &k).unwrap();
            let g = cohering_power(&ch, &axis(k), Measure::Skew).unwrap();
            assert!((q.value - g.value).abs() < 1e-9);
        }
        let q = cohering_power_qubit(&Channel::bit_flip(1.0).unwrap(), &k).unwrap();
        assert!((q.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bitflip_cohering_vanishes_on_x_and_z() {
        for &p in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            let ch = Channel::bit_flip(p).unwrap();
            for k in [Vec3::x(), Vec3::z()] {
                assert!(cohering_power_qubit(&ch, &k).unwrap().value.abs() < 1e-12);
            }
            assert_eq!(bitflip_cohering_closed(p, 0.0).unwrap(), 0.0);
            assert_eq!(bitflip_cohering_closed(p, 1.0).unwrap(), 0.0);
        }
        assert!((bitflip_cohering_closed(1.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(bitflip_cohering_closed(1.2, 0.5).is_err());
    }

    #[test]
    fn bitflip_cohering_closed_matches_f_max() {
        for &p in &[0.1, 0.2, 0.5, 0.6, 0.77, 1.0] {
            for &t in &[0.1, 0.4, FRAC_PI_4, 1.2] {
                let k = Vec3::new(t.cos(), 0.0, t.sin());
                let numeric = cohering_power_qubit(&Channel::bit_flip(p).unwrap(), &k).unwrap().value;
                let closed = bitflip_cohering_closed(p, t.cos().powi(2)).unwrap();
                assert!((numeric - closed).abs() < 1e-12, "p={p} t={t}");
            }
        }
    }

    #[test]
    fn unitary_closed_form_cases() {
        let n = Vec3::new(0.0, 0.6, 0.8);
        let perp = Vec3::x();
        assert!(unitary_cohering_closed(&n, 1.3, &n).unwrap().abs() < 1e-15);
        assert!((unitary_cohering_closed(&n, FRAC_PI_2, &perp).unwrap() - 1.0).abs() < 1e-15);
        assert!(unitary_cohering_closed(&n, PI, &perp).unwrap().abs() < 1e-15);
        let k = Vec3::new(0.48, 0.6, 0.64);
        for &theta in &[0.0, 0.5, 2.0, PI] {
            let closed = unitary_cohering_closed(&n, theta, &k).unwrap();
            let beta = unitary_sin2_beta(&n, theta, &k).unwrap();
            let ch = Channel::unitary_rotation(&n, theta).unwrap();
            let q = cohering_power_qubit(&ch, &k).unwrap().value;
            assert!((closed - beta).abs() < 1e-12 && (closed - q).abs() < 1e-12);
        }
        assert!(unitary_cohering_closed(&Vec3::new(1.0, 1.0, 0.0), 0.1, &k).is_err());
    }

    #[test]
    fn unitary_equality_examples() {
        let (c, d, gap) = unitary_power_equality(&Vec3::y(), FRAC_PI_2, &Vec3::z(), &circle()).unwrap();
        assert!((c - 1.0).abs() < 1e-12 && (d - 1.0).abs() < 1e-9 && gap < 1e-6);
        let (c, d, gap) = unitary_power_equality(&Vec3::x(), 0.0, &Vec3::z(), &circle()).unwrap();
        assert_eq!((c, d, gap), (0.0, 0.0, 0.0));
    }

    #[test]
    fn bitflip_params() {
        let bp = BitFlipParams::new(0.5, 0.25).unwrap();
        assert_eq!(bp.alpha, 1.0);
        assert_eq!(bp.beta, 0.25);
        assert_eq!(bp.threshold, Some(1.0));
        assert_eq!(BitFlipParams::new(0.0, 0.3).unwrap().threshold, None);
        assert!(BitFlipParams::new(0.5, 1.5).is_err());
    }

    #[test]
    fn f_xi_cases() {
        let (a, b) = (0.64, 0.3);
        assert!((bitflip_f_xi(a, b, 0.0).unwrap() - (1.0 - a.sqrt())).abs() < 1e-15);
        assert_eq!(bitflip_f_xi(1.0, 0.5, 0.0).unwrap(), 0.0);
        // the upper endpoint reproduces the above-threshold minimum
        let (p, kx2) = (0.9, 0.6);
        let bp = BitFlipParams::new(p, kx2).unwrap();
        let at_max = bitflip_f_xi(bp.alpha, bp.beta, bp.xi_max()).unwrap();
        let s = (4.0 * p * (1.0 - p) * kx2).sqrt();
        let expected = (1.0 - 4.0 * p * kx2 * (1.0 - p * kx2)) / (1.0 + s);
        assert!((at_max - expected).abs() < 1e-14);
        assert!(bitflip_f_xi(0.5, -0.1, 0.2).is_err());
    }

    #[test]
    fn xi_critical_arithmetic() {
        let bp = BitFlipParams::new(0.8, 0.9).unwrap();
        let crit = bitflip_xi_critical(&bp);
        let (a, b) = (bp.alpha, bp.beta);
        assert!((crit.xi1.unwrap() + (1.0 - a) / a).abs() < 1e-15);
        let base = -(1.0 - a) * (a - b) * (a - 2.0 * b);
        let root = (-(1.0 - a) * (a - b).powi(3) * b).sqrt();
        let denom = a * (a - b).powi(2);
        assert!((crit.xi2.unwrap() - (base + root) / denom).abs() < 1e-15);
        assert!((crit.xi3.unwrap() - (base - root) / denom).abs() < 1e-15);
        assert!((crit.xi_max - 0.1).abs() < 1e-15);
        // α > β makes the radicand negative
        let low = bitflip_xi_critical(&BitFlipParams::new(0.3, 0.2).unwrap());
        assert_eq!((low.xi2, low.xi3), (None, None));
        assert_eq!(bitflip_xi_critical(&BitFlipParams::new(0.0, 0.2).unwrap()).xi1, None);
    }

    #[test]
    fn stationary_point_is_stationary() {
        let bp = BitFlipParams::new(0.9, 0.16).unwrap();
        let xi = bitflip_stationary_xi(&bp).unwrap();
        assert!((xi - 0.4444).abs() < 1e-3);
        let f = |x: f64| bitflip_f_xi(bp.alpha, bp.beta, x).unwrap();
        let h = 1e-5;
        let slope = (f(xi + h) - f(xi - h)) / (2.0 * h);
        assert!(slope.abs() < 1e-8, "{slope}");
        assert!(f(xi) < f(0.0) && f(xi) < f(bp.xi_max()));
    }

    #[test]
    fn bitflip_decohering_special_cases() {
        for &p in &[0.05f64, 0.3, 0.5, 0.7, 0.95] {
            let want = 2.0 * (p * (1.0 - p)).sqrt();
            assert!((bitflip_decohering_closed(p, 1.0).unwrap() - want).abs() < 1e-12);
            assert!((bitflip_decohering_closed(p, 0.0).unwrap() - want).abs() < 1e-12);
            assert!((bitflip_decohering_exact(p, 1.0).unwrap() - want).abs() < 1e-12);
            if p <= 0.5 {
                for &kx2 in &[0.2, 0.5, 0.9] {
                    assert!((bitflip_decohering_closed(p, kx2).unwrap() - want).abs() < 1e-12);
                }
            }
        }
        assert_eq!(bitflip_decohering_closed(0.0, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn bitflip_exact_matches_numeric() {
        for &p in &[0.2, 0.6, 0.9, 1.0] {
            for &t in &[0.0f64, 0.3, 0.9, 1.3] {
                let k = Vec3::new(t.cos(), t.sin() * 0.6, t.sin() * 0.8);
                let numeric = decohering_power_qubit(&Channel::bit_flip(p).unwrap(), &k, &circle()).unwrap().value;
                let exact = bitflip_decohering_exact(p, t.cos().powi(2)).unwrap();
                assert!((numeric - exact).abs() < 1e-9, "p={p} t={t}: {numeric} vs {exact}");
            }
        }
    }

    #[test]
    fn piecewise_form_misses_interior_minimum() {
        // just above the threshold the minimum is interior, not at ξ_max
        let (p, kx2) = (0.9, 0.16);
        assert!(kx2 > BitFlipParams::new(p, kx2).unwrap().threshold.unwrap());
        let gap = bitflip_decohering_exact(p, kx2).unwrap() - bitflip_decohering_closed(p, kx2).unwrap();
        assert!(gap > 1e-3, "{gap}");
    }

    #[test]
    fn tensor_formulas() {
        assert_eq!(tensor_cohering_theorem(1.0, 3).unwrap(), 7.0);
        assert_eq!(tensor_cohering_theorem(0.0, 5).unwrap(), 0.0);
        assert!((tensor_cohering_theorem(0.5, 2).unwrap() - 1.25).abs() < 1e-15);
        assert!((tensor_cohering_product(&[0.5, 1.0]).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(tensor_decohering_bound(1.0, 2).unwrap(), 3.0);
        assert_eq!(tensor_decohering_bound(0.0, 4).unwrap(), 0.0);
        assert!((tensor_decohering_bound_product(&[1.0, 0.5]).unwrap() - 2.5).abs() < 1e-15);
        assert!(tensor_cohering_theorem(1.0, 0).is_err());
        assert!(tensor_decohering_bound(1.5, 2).is_err());
        assert!(tensor_cohering_product(&[]).is_err());
    }

    #[test]
    fn asymptotic_ratios() {
        let ones = asymptotic_ratio(&[1.0; 6]).unwrap();
        assert!(ones.ratios.iter().all(|r| (r - 1.0).abs() < 1e-15));
        let half = asymptotic_ratio(&[0.5; 10]).unwrap();
        let expected = 1.0 - (1.5f64.powi(10) - 1.0) / 1023.0;
        assert!((half.ratios[9] - expected).abs() < 1e-15);
        assert!((half.ratios[9] - 0.944_609).abs() < 1e-6);
        let slow = asymptotic_ratio(&[0.1; 30]).unwrap();
        assert!(slow.ratios.windows(2).all(|w| w[1] > w[0]));
        assert!(!slow.capped);
        let idle = asymptotic_ratio(&[0.0, 0.5]).unwrap();
        assert!(idle.capped && idle.ratios[0] == 0.0);
    }

    #[test]
    fn cnot_survey() {
        let survey = cnot_basis_survey().unwrap();
        let values: Vec<f64> = survey.iter().map(|(_, r)| r.value).collect();
        assert!(values[0].abs() < 1e-12);
        assert!((values[1] - 1.0).abs() < 1e-12);
        assert!(values[2].abs() < 1e-12);
        assert!(cnot_power_report(&axis(Vec3::z())).is_err());
    }
}
