//! Seeded invariant suites comparing closed forms, reductions and
//! brute-force searches.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::Channel;
use crate::coherence::{c_l1_qubit, c_skew_qubit, coherence, Measure, Observable};
use crate::figures::{self, FIG3_P};
use crate::linalg::{herm_eig, sqrt_psd, ComplexMatrix};
use crate::oracle::{minimize_circle, minimize_interval, minimize_torus, SearchConfig};
use crate::power::*;
use crate::random;
use crate::states::{bloch_from_density, density_from_bloch, max_coherent_state, DensityMatrix, PureState, Vec3};
use crate::{Error, Result};

/// Outcome of one invariant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn within(name: impl Into<String>, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_deviation,
            tolerance,
            passed: max_deviation <= tolerance,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: max deviation {:.3e} (tol {:.0e}) {}",
            self.name,
            self.max_deviation,
            self.tolerance,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// Largest value, with NaN treated as an infinite deviation.
fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .fold(0.0, |acc, v| if v.is_nan() { f64::INFINITY } else { acc.max(v) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Linalg,
    States,
    Axioms,
    Channels,
    Oracle,
    Unitary,
    Depolarizing,
    Bitflip,
    Appendix,
    Tensor,
    Cnot,
    Power,
    All,
}

impl Suite {
    pub const EACH: [Suite; 12] = [
        Suite::Linalg,
        Suite::States,
        Suite::Axioms,
        Suite::Channels,
        Suite::Oracle,
        Suite::Unitary,
        Suite::Depolarizing,
        Suite::Bitflip,
        Suite::Appendix,
        Suite::Tensor,
        Suite::Cnot,
        Suite::Power,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Linalg => "linalg",
            Suite::States => "states",
            Suite::Axioms => "axioms",
            Suite::Channels => "channels",
            Suite::Oracle => "oracle",
            Suite::Unitary => "unitary",
            Suite::Depolarizing => "depolarizing",
            Suite::Bitflip => "bitflip",
            Suite::Appendix => "appendix",
            Suite::Tensor => "tensor",
            Suite::Cnot => "cnot",
            Suite::Power => "power",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(&[Suite::All])
            .find(|suite| suite.name() == s)
            .copied()
            .ok_or_else(|| Error::Spec {
                field: "suite".into(),
                reason: format!("unknown suite {s:?}"),
            })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Runs a suite; `All` runs every suite in [`Suite::EACH`] order.
pub fn run(suite: Suite, seed: u64) -> Result<Vec<Check>> {
    // each suite gets its own stream so results do not depend on which
    // other suites ran
    let rng = |k: u64| random::seeded(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k));
    match suite {
        Suite::Linalg => linalg(&mut rng(1)),
        Suite::States => states(&mut rng(2)),
        Suite::Axioms => axioms(&mut rng(3)),
        Suite::Channels => channels(&mut rng(4)),
        Suite::Oracle => oracle(&mut rng(5)),
        Suite::Unitary => unitary(&mut rng(6)),
        Suite::Depolarizing => depolarizing(),
        Suite::Bitflip => bitflip(),
        Suite::Appendix => appendix(),
        Suite::Tensor => tensor(&mut rng(10)),
        Suite::Cnot => cnot(),
        Suite::Power => power(&mut rng(12)),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(run(s, seed)?);
            }
            Ok(all)
        }
    }
}

fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = random::unitary(rng, dim);
    let d: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
    let diag = ComplexMatrix::from_diagonal(&d.iter().map(|x| (*x).into()).collect::<Vec<_>>());
    g.mul_unchecked(&diag).mul_unchecked(&g.dagger()).hermitian_part()
}

/// A nondegenerate observable with a random eigenbasis.
fn random_observable(rng: &mut impl Rng, dim: usize) -> Result<Observable> {
    let u = random::unitary(rng, dim);
    let values = (0..dim).map(|i| i as f64 - 0.5 * (dim - 1) as f64).collect();
    Observable::from_basis(u, values, "random")
}

fn random_qubit_channel(rng: &mut impl Rng) -> Result<Channel> {
    let p = rng.random::<f64>();
    let rot = Channel::unitary_rotation(&random::unit_vector(rng), rng.random_range(0.0..PI))?;
    Ok(match rng.random_range(0..4) {
        0 => rot,
        1 => Channel::bit_flip(p)?.then(&rot)?,
        2 => Channel::depolarizing(p)?.then(&rot)?,
        _ => rot.then(&Channel::phase_flip(p)?)?.then(&Channel::unitary(random::unitary(rng, 2))?)?,
    })
}

fn linalg(rng: &mut impl Rng) -> Result<Vec<Check>> {
    let mut recon = Vec::new();
    let mut ortho = Vec::new();
    let mut sqrt_err = Vec::new();
    for dim in 1..=4 {
        for _ in 0..50 {
            let a = random_hermitian(rng, dim);
            let eig = herm_eig(&a)?;
            recon.push(eig.reconstruct().distance(&a));
            let v = &eig.eigenvectors;
            ortho.push(v.dagger().mul(v)?.distance(&ComplexMatrix::identity(dim)));
            let rho = random::density(rng, dim);
            let s = sqrt_psd(rho.matrix())?;
            sqrt_err.push(s.mul(&s)?.distance(rho.matrix()));
        }
    }
    Ok(vec![
        Check::within("herm_eig reconstruction", worst(recon), 1e-10),
        Check::within("eigenvector orthonormality", worst(ortho), 1e-10),
        Check::within("sqrt_psd squares back", worst(sqrt_err), 1e-10),
    ])
}

fn states(rng: &mut impl Rng) -> Result<Vec<Check>> {
    let mut round = Vec::new();
    for _ in 0..1000 {
        let r = random::bloch_vector(rng);
        let back = bloch_from_density(&density_from_bloch(&r))?;
        round.push((back.vector() - r.vector()).norm());
    }
    let mut uniform = Vec::new();
    for dim in 2..=4 {
        let k = random_observable(rng, dim)?;
        let phases: Vec<f64> = (1..dim).map(|_| rng.random_range(0.0..TAU)).collect();
        let psi = max_coherent_state(&k, &phases)?;
        for a in k.amplitudes_in_basis(psi.amplitudes()) {
            uniform.push((a.norm_sqr() - 1.0 / dim as f64).abs());
        }
    }
    Ok(vec![
        Check::within("bloch round trip", worst(round), 1e-12),
        Check::within("maximally coherent amplitudes uniform", worst(uniform), 1e-12),
    ])
}

fn axioms(rng: &mut impl Rng) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for measure in [Measure::L1, Measure::Skew] {
        let mut zero = Vec::new();
        let mut convex = Vec::new();
        for i in 0..1000 {
            let dim = 2 + i % 3;
            let k = random_observable(rng, dim)?;
            let probs = random::probabilities(rng, dim);
            let diag = k
                .eigen()
                .eigenvectors
                .mul_unchecked(&ComplexMatrix::from_diagonal(
                    &probs.iter().map(|p| (*p).into()).collect::<Vec<_>>(),
                ))
                .mul_unchecked(&k.eigen().eigenvectors.dagger());
            let incoherent = DensityMatrix::new(diag.hermitian_part())?;
            zero.push(coherence(&incoherent, &k, measure)?.value.abs());

            let rho = random::density(rng, dim);
            let sigma = random::density(rng, dim);
            let lambda = rng.random::<f64>();
            let mixed = rho.mix(lambda, &sigma)?;
            let lhs = coherence(&mixed, &k, measure)?.value;
            let rhs = lambda * coherence(&rho, &k, measure)?.value
                + (1.0 - lambda) * coherence(&sigma, &k, measure)?.value;
            convex.push(lhs - rhs);
        }
        checks.push(Check::within(format!("{measure} vanishes on incoherent states"), worst(zero), 1e-9));
        checks.push(Check::within(format!("{measure} convexity"), worst(convex), 1e-9));
    }
    let mut bridge = Vec::new();
    let mut generic = Vec::new();
    for _ in 0..1000 {
        let k = random::unit_vector(rng);
        let r = crate::states::BlochVector::new(random::unit_vector(rng))?;
        let l1 = c_l1_qubit(&r, &k).value;
        bridge.push((c_skew_qubit(&r, &k).value - l1 * l1).abs());
        let obs = Observable::pauli_axis(&k)?;
        let rho = density_from_bloch(&r);
        generic.push((coherence(&rho, &obs, Measure::Skew)?.value - l1 * l1).abs());
    }
    checks.push(Check::within("pure qubit skew = l1 squared", worst(bridge), 1e-9));
    checks.push(Check::within("pure qubit skew (matrix route) = l1 squared", worst(generic), 1e-9));
    Ok(checks)
}

fn channels(rng: &mut impl Rng) -> Result<Vec<Check>> {
    let mut tp = Vec::new();
    let mut trace = Vec::new();
    let mut herm = Vec::new();
    let mut purity = Vec::new();
    let mut round = Vec::new();
    let mut ball = Vec::new();
    for _ in 0..100 {
        let p = rng.random::<f64>();
        let constructed = [
            Channel::unitary_rotation(&random::unit_vector(rng), rng.random_range(0.0..TAU))?,
            Channel::depolarizing(p)?,
            Channel::bit_flip(p)?,
            Channel::phase_flip(p)?,
            Channel::cnot(),
            Channel::tensor(&[Channel::bit_flip(p)?, Channel::hadamard()])?,
        ];
        for ch in &constructed {
            tp.push(ch.tp_deviation());
            let rho = random::density(rng, ch.dim());
            let out = ch.apply(&rho)?;
            trace.push((out.matrix().trace() - 1.0).norm());
            herm.push(out.matrix().hermitian_deviation());
        }
        let u = Channel::unitary(random::unitary(rng, 3))?;
        let rho = random::density(rng, 3);
        purity.push((u.apply(&rho)?.purity() - rho.purity()).abs());

        let ch = random_qubit_channel(rng)?;
        let map = ch.bloch_map()?;
        let r = random::bloch_vector(rng);
        let direct = bloch_from_density(&ch.apply(&density_from_bloch(&r))?)?;
        round.push((direct.vector() - map.apply(&r.vector())).norm());
        let m = random::unit_vector(rng);
        ball.push(map.apply(&m).norm() - 1.0);
    }
    Ok(vec![
        Check::within("trace preservation of constructors", worst(tp), 1e-10),
        Check::within("apply preserves trace", worst(trace), 1e-12),
        Check::within("apply preserves hermiticity", worst(herm), 1e-12),
        Check::within("unitary channels preserve purity", worst(purity), 1e-10),
        Check::within("bloch map matches apply", worst(round), 1e-10),
        Check::within("bloch map keeps the unit ball", worst(ball), 1e-9),
    ])
}

/// Random trigonometric polynomial of degree ≤ 4 evaluated from tables.
struct TrigPoly {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TrigPoly {
    fn random(rng: &mut impl Rng) -> Self {
        let degree = rng.random_range(1..=4);
        Self {
            a: (0..degree).map(|_| rng.random_range(-1.0..1.0)).collect(),
            b: (0..degree).map(|_| rng.random_range(-1.0..1.0)).collect(),
        }
    }

    fn eval(&self, t: f64) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .enumerate()
            .map(|(j, (a, b))| {
                let (s, c) = ((j + 1) as f64 * t).sin_cos();
                a * c + b * s
            })
            .sum()
    }
}

fn oracle(rng: &mut impl Rng) -> Result<Vec<Check>> {
    const SCAN: usize = 100_000;
    let cfg = SearchConfig::circle();
    // sin/cos of j·t on the dense scan, shared by every polynomial
    let table: Vec<[(f64, f64); 4]> = (0..SCAN)
        .into_par_iter()
        .map(|i| {
            let t = TAU * i as f64 / SCAN as f64;
            std::array::from_fn(|j| ((j + 1) as f64 * t).sin_cos())
        })
        .collect();
    let polys: Vec<TrigPoly> = (0..1000).map(|_| TrigPoly::random(rng)).collect();
    let results: Vec<Result<(f64, f64)>> = polys
        .par_iter()
        .map(|poly| {
            let (_, found) = minimize_circle(|t| poly.eval(t), &cfg)?;
            let scan = table
                .iter()
                .map(|row| {
                    poly.a
                        .iter()
                        .zip(&poly.b)
                        .zip(row)
                        .map(|((a, b), (s, c))| a * c + b * s)
                        .sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min);
            let grid = (0..cfg.coarse_points)
                .map(|i| poly.eval(TAU * i as f64 / cfg.coarse_points as f64))
                .fold(f64::INFINITY, f64::min);
            Ok((found - scan, found - grid))
        })
        .collect();
    let mut vs_scan = Vec::new();
    let mut vs_grid = Vec::new();
    for r in results {
        let (a, b) = r?;
        vs_scan.push(a);
        vs_grid.push(b);
    }

    let torus_cfg = SearchConfig::torus();
    let mut frozen = Vec::new();
    for poly in polys.iter().take(20) {
        let (_, circle) = minimize_circle(|t| poly.eval(t), &torus_cfg)?;
        for dims in 2..=3 {
            let (_, torus) = minimize_torus(|x| poly.eval(x[0]), dims, &torus_cfg)?;
            frozen.push((torus - circle).abs());
        }
    }
    Ok(vec![
        Check::within("circle search vs 1e5-point scan", worst(vs_scan), 1e-6),
        Check::within("refinement never above coarse grid", worst(vs_grid), 0.0),
        Check::within("torus with frozen coordinates vs circle", worst(frozen), 1e-9),
    ])
}

fn hadamard_checks() -> Result<Vec<Check>> {
    let h = Channel::hadamard();
    let mut c_dev = Vec::new();
    let mut d_dev = Vec::new();
    for (k, want) in [(Vec3::x(), 1.0), (Vec3::y(), 0.0), (Vec3::z(), 1.0)] {
        let obs = Observable::pauli_axis(&k)?;
        c_dev.push((cohering_power(&h, &obs, Measure::Skew)?.value - want).abs());
        d_dev.push((decohering_power(&h, &obs, Measure::Skew, &SearchConfig::circle())?.value - want).abs());
    }
    Ok(vec![
        Check::within("hadamard cohering (x, y, z) = (1, 0, 1)", worst(c_dev), 1e-9),
        Check::within("hadamard decohering (x, y, z) = (1, 0, 1)", worst(d_dev), 1e-9),
    ])
}

fn unitary(rng: &mut impl Rng) -> Result<Vec<Check>> {
    let mut checks = hadamard_checks()?;
    let samples: Vec<(Vec3, f64, Vec3)> = (0..100)
        .map(|_| (random::unit_vector(rng), rng.random_range(0.0..PI), random::unit_vector(rng)))
        .collect();
    let rows = samples
        .par_iter()
        .map(|(n, theta, k)| {
            let (c, _, gap) = unitary_power_equality(n, *theta, k, &SearchConfig::circle())?;
            Ok((gap, (c - unitary_sin2_beta(n, *theta, k)?).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::within("unitary C = D gap", worst(rows.iter().map(|r| r.0)), 1e-6));
    checks.push(Check::within("unitary C = sin^2 beta", worst(rows.iter().map(|r| r.1)), 1e-9));
    Ok(checks)
}

fn depolarizing() -> Result<Vec<Check>> {
    let dirs = sphere_net();
    let rows = (0..=10)
        .into_par_iter()
        .map(|i| {
            let p = i as f64 / 10.0;
            let ch = Channel::depolarizing(p)?;
            let closed = depolarizing_decohering_closed(p)?;
            let mut coh: f64 = 0.0;
            let mut gap: f64 = 0.0;
            for k in &dirs {
                let obs = Observable::pauli_axis(k)?;
                coh = coh.max(cohering_power(&ch, &obs, Measure::Skew)?.value.abs());
                let d = decohering_power(&ch, &obs, Measure::Skew, &SearchConfig::circle())?.value;
                gap = gap.max((d - closed).abs());
            }
            Ok((coh, gap))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        Check::within("depolarizing cohering power is zero", worst(rows.iter().map(|r| r.0)), 1e-10),
        Check::within("depolarizing decohering closed vs numeric", worst(rows.iter().map(|r| r.1)), 1e-6),
    ])
}

fn bitflip() -> Result<Vec<Check>> {
    let table = figures::fig3()?;
    let mut gap = Vec::new();
    let mut ends = Vec::new();
    for row in &table.rows {
        let [theta, p, closed] = *row;
        let k = Vec3::new(theta.cos(), 0.0, theta.sin());
        let numeric = cohering_power_qubit(&Channel::bit_flip(p)?, &k)?.value;
        gap.push((closed - numeric).abs());
        if theta == 0.0 || theta == FRAC_PI_2 {
            ends.push(closed.abs().max(numeric.abs()));
        }
    }
    let k = Vec3::new(FRAC_PI_4.cos(), 0.0, FRAC_PI_4.sin());
    let peak_closed = bitflip_cohering_closed(1.0, FRAC_PI_4.cos().powi(2))?;
    let peak_numeric = cohering_power_qubit(&Channel::bit_flip(1.0)?, &k)?.value;
    let mut generic = Vec::new();
    for &p in &FIG3_P {
        for theta in [0.2f64, 0.7, 1.1] {
            let k = Vec3::new(theta.cos(), 0.0, theta.sin());
            let obs = Observable::pauli_axis(&k)?;
            let full = cohering_power(&Channel::bit_flip(p)?, &obs, Measure::Skew)?.value;
            generic.push((full - bitflip_cohering_closed(p, theta.cos().powi(2))?).abs());
        }
    }
    Ok(vec![
        Check::within("bitflip cohering closed vs F max (fig3 grid)", worst(gap), 1e-9),
        Check::within("bitflip cohering zero at theta in {0, pi/2}", worst(ends), 1e-12),
        Check::within(
            "bitflip cohering at p = 1, theta = pi/4 is 1",
            (peak_closed - 1.0).abs().max((peak_numeric - 1.0).abs()),
            1e-12,
        ),
        Check::within("bitflip cohering closed vs density-matrix route", worst(generic), 1e-9),
    ])
}

/// `(p, kx2)` pairs for the appendix comparison: a 0.05 grid plus points
/// 1e-3 either side of the threshold.
pub fn appendix_grid() -> Vec<(f64, f64)> {
    let mut points = Vec::new();
    for i in 1..=19 {
        let p = i as f64 * 0.05;
        for j in 0..=20 {
            points.push((p, j as f64 * 0.05));
        }
        if let Ok(BitFlipParams { threshold: Some(a), .. }) = BitFlipParams::new(p, 0.0) {
            for kx2 in [a - 1e-3, a + 1e-3] {
                if (0.0..=1.0).contains(&kx2) {
                    points.push((p, kx2));
                }
            }
        }
    }
    points
}

/// Decohering power from a `10⁴`-point interval search of `F_{α,β}`.
pub fn appendix_oracle(p: f64, kx2: f64) -> Result<f64> {
    let bp = BitFlipParams::new(p, kx2)?;
    let cfg = SearchConfig {
        coarse_points: 10_000,
        refine_tol: 1e-12,
        max_refine_iters: 200,
    };
    let f = |xi: f64| bitflip_f_xi(bp.alpha, bp.beta, xi.clamp(0.0, 1.0)).unwrap_or(f64::NAN);
    let (_, min) = minimize_interval(f, 0.0, bp.xi_max(), &cfg)?;
    Ok(1.0 - min)
}

fn appendix() -> Result<Vec<Check>> {
    let rows = appendix_grid()
        .into_par_iter()
        .map(|(p, kx2)| {
            let oracle = appendix_oracle(p, kx2)?;
            let piecewise = bitflip_decohering_closed(p, kx2)?;
            let exact = bitflip_decohering_exact(p, kx2)?;
            Ok(((piecewise - oracle).abs(), (exact - oracle).abs()))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut special = Vec::new();
    for i in 1..=19 {
        let p = i as f64 * 0.05;
        let want = 2.0 * (p * (1.0 - p)).sqrt();
        special.push((bitflip_decohering_closed(p, 1.0)? - want).abs());
        special.push((bitflip_decohering_closed(p, 0.0)? - want).abs());
        if p <= 0.5 {
            for j in 0..=20 {
                special.push((bitflip_decohering_closed(p, j as f64 * 0.05)? - want).abs());
            }
        }
    }

    // the ξ reduction itself against a search over the sphere
    let mut reduction = Vec::new();
    for &(p, t) in &[(0.3, 0.4), (0.7, 0.9), (0.9, 1.16), (0.95, 1.25), (1.0, 0.6)] {
        let k = Vec3::new(f64::cos(t), 0.6 * f64::sin(t), 0.8 * f64::sin(t));
        let sphere = decohering_power_qubit(&Channel::bit_flip(p)?, &k, &SearchConfig::circle())?.value;
        reduction.push((sphere - appendix_oracle(p, f64::cos(t).powi(2))?).abs());
    }

    Ok(vec![
        Check::within("bitflip decohering piecewise vs interval oracle", worst(rows.iter().map(|r| r.0)), 1e-7),
        Check::within("bitflip decohering special cases", worst(special), 1e-9),
        Check::within("bitflip decohering stationary-point form vs interval oracle", worst(rows.iter().map(|r| r.1)), 1e-7),
        Check::within("xi reduction vs sphere search", worst(reduction), 1e-7),
    ])
}

fn l1_power_pair(u: &ComplexMatrix, z: &Observable) -> Result<(f64, f64)> {
    let ch = Channel::unitary(u.clone())?;
    Ok((
        cohering_power(&ch, z, Measure::L1)?.value,
        decohering_power(&ch, z, Measure::L1, &SearchConfig::circle())?.value,
    ))
}

fn tensor(rng: &mut impl Rng) -> Result<Vec<Check>> {
    let z = Observable::pauli_axis(&Vec3::z())?;
    let zz = Observable::product(&[z.clone(), z.clone()])?;
    let zzz = Observable::product(&[z.clone(), z.clone(), z.clone()])?;
    let gates: Vec<ComplexMatrix> = (0..20).map(|_| random::unitary(rng, 2)).collect();
    let pairs: Vec<(ComplexMatrix, ComplexMatrix)> =
        (0..10).map(|_| (random::unitary(rng, 2), random::unitary(rng, 2))).collect();

    let rows = gates
        .par_iter()
        .map(|u| {
            let (c1, d1) = l1_power_pair(u, &z)?;
            let ch = Channel::unitary(u.clone())?;
            let two = Channel::tensor(&[ch.clone(), ch.clone()])?;
            let three = Channel::tensor(&[ch.clone(), ch.clone(), ch])?;
            let c2 = cohering_power(&two, &zz, Measure::L1)?.value;
            let c3 = cohering_power(&three, &zzz, Measure::L1)?.value;
            let t1 = (c2 - tensor_cohering_theorem(c1, 2)?)
                .abs()
                .max((c3 - tensor_cohering_theorem(c1, 3)?).abs());
            let d2 = decohering_power(&two, &zz, Measure::L1, &SearchConfig::torus())?.value;
            let t2 = tensor_decohering_bound(d1.min(1.0), 2)? - d2;
            Ok((t1, t2))
        })
        .collect::<Result<Vec<_>>>()?;

    let hetero = pairs
        .iter()
        .map(|(a, b)| {
            let (ca, _) = l1_power_pair(a, &z)?;
            let (cb, _) = l1_power_pair(b, &z)?;
            let ch = Channel::tensor(&[Channel::unitary(a.clone())?, Channel::unitary(b.clone())?])?;
            let c = cohering_power(&ch, &zz, Measure::L1)?.value;
            Ok((c - tensor_cohering_product(&[ca, cb])?).abs())
        })
        .collect::<Result<Vec<_>>>()?;

    let h = Channel::hadamard();
    let hh = Channel::tensor(&[h.clone(), h.clone()])?;
    let d_h = decohering_power(&h, &z, Measure::L1, &SearchConfig::circle())?.value;
    let d_hh = decohering_power(&hh, &zz, Measure::L1, &SearchConfig::torus())?.value;
    let saturation = (d_hh - 3.0).abs().max((tensor_decohering_bound(d_h, 2)? - 3.0).abs());

    let phase = ComplexMatrix::from_diagonal(&[1.0.into(), num_complex::Complex64::from_polar(1.0, 0.7)]);
    let (_, d_phase) = l1_power_pair(&phase, &z)?;
    let pp = Channel::tensor(&[Channel::unitary(phase.clone())?, Channel::unitary(phase)?])?;
    let d_pp = decohering_power(&pp, &zz, Measure::L1, &SearchConfig::torus())?.value;

    Ok(vec![
        Check::within("C1(u^n) = (C1(u)+1)^n - 1, n = 2, 3", worst(rows.iter().map(|r| r.0)), 1e-7),
        Check::within("C1(u (x) v) = (C1(u)+1)(C1(v)+1) - 1", worst(hetero), 1e-7),
        Check::within("D1(u^2) >= 4 - (2 - D1(u))^2", worst(rows.iter().map(|r| r.1)), 1e-6),
        Check::within("D1(H (x) H) saturates at 3", saturation, 1e-6),
        Check::within("D1(u) = 0 gives D1(u (x) u) = 0", d_phase.max(d_pp), 1e-9),
    ])
}

fn cnot() -> Result<Vec<Check>> {
    let survey = cnot_basis_survey()?;
    let value = |i: usize| survey[i].1.value;
    let x = Observable::pauli_axis(&Vec3::x())?;
    let z = Observable::pauli_axis(&Vec3::z())?;
    let xz = Observable::product(&[x, z])?;
    let plus = PureState::normalized(vec![1.0.into(), 1.0.into()])?;
    let input = plus.kron(&PureState::basis(2, 0));
    let out = Channel::cnot().apply(&input.density())?;
    let variance = coherence(&out, &xz, Measure::Skew)?.value;
    Ok(vec![
        Check::within("cnot cohering power, K = sz (x) sz", value(0).abs(), 1e-10),
        Check::within("variance of sx (x) sz on CNOT|+,0> is 1", (variance - 1.0).abs(), 1e-10),
        Check::within("cnot cohering power, K = sx (x) sz, is 1", (value(1) - 1.0).abs(), 1e-10),
        Check::within("cnot cohering power, K = sx (x) sx", value(2).abs(), 1e-10),
    ])
}

/// The 26 directions `(a, b, c)/|·|` with `a, b, c ∈ {−1, 0, 1}`, not all 0.
pub fn sphere_net() -> Vec<Vec3> {
    let mut dirs = Vec::with_capacity(26);
    for a in -1..=1 {
        for b in -1..=1 {
            for c in -1..=1 {
                if (a, b, c) != (0, 0, 0) {
                    dirs.push(Vec3::new(a as f64, b as f64, c as f64).normalize());
                }
            }
        }
    }
    dirs
}

fn power(rng: &mut impl Rng) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    // discrete maximum bounds every incoherent input
    let mut excess = Vec::new();
    let mut bounds = Vec::new();
    for i in 0..200 {
        let (ch, k) = if i % 2 == 0 {
            (random_qubit_channel(rng)?, Observable::pauli_axis(&random::unit_vector(rng))?)
        } else {
            let ch = match i % 3 {
                0 => Channel::cnot(),
                1 => Channel::unitary(random::unitary(rng, 4))?,
                _ => Channel::tensor(&[random_qubit_channel(rng)?, random_qubit_channel(rng)?])?,
            };
            let k = Observable::product(&[
                Observable::pauli_axis(&random::unit_vector(rng))?,
                Observable::pauli_axis(&random::unit_vector(rng))?,
            ])?;
            (ch, k)
        };
        let d = k.dim();
        let probs = random::probabilities(rng, d);
        let v = &k.eigen().eigenvectors;
        let diag = ComplexMatrix::from_diagonal(&probs.iter().map(|p| (*p).into()).collect::<Vec<_>>());
        let rho = DensityMatrix::new(v.mul_unchecked(&diag).mul_unchecked(&v.dagger()).hermitian_part())?;
        for measure in [Measure::L1, Measure::Skew] {
            let pw = cohering_power(&ch, &k, measure)?;
            let c = coherence(&ch.apply(&rho)?, &k, measure)?.value;
            excess.push(c - pw.value);
            let cap = match measure {
                Measure::L1 => (d - 1) as f64,
                // ±1 spectrum: the variance is at most 1
                Measure::Skew => 1.0,
            };
            bounds.push((pw.value - cap).max(-pw.value));
        }
    }
    checks.push(Check::within("discrete max bounds incoherent mixtures", worst(excess), 1e-9));

    // closed forms against the generic numeric path
    let net = sphere_net();
    let thetas: Vec<f64> = (0..=12).map(|i| PI * i as f64 / 12.0).collect();
    let ps: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let circle = SearchConfig::circle();

    let unitary_rows = net
        .par_iter()
        .map(|n| {
            let mut dev: f64 = 0.0;
            let mut bound: f64 = 0.0;
            for &theta in &thetas {
                let ch = Channel::unitary_rotation(n, theta)?;
                for k in &net {
                    let closed = unitary_cohering_closed(n, theta, k)?;
                    let c = cohering_power_qubit(&ch, k)?.value;
                    let d = decohering_power_qubit(&ch, k, &circle)?.value;
                    dev = dev.max((closed - c).abs()).max((closed - d).abs());
                    bound = bound.max(c - 1.0).max(d - 1.0).max(-c).max(-d);
                }
            }
            Ok((dev, bound))
        })
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::within(
        "unitary closed form vs numeric (grid)",
        worst(unitary_rows.iter().map(|r| r.0)),
        1e-6,
    ));
    bounds.extend(unitary_rows.iter().map(|r| r.1));

    let noise_rows = ps
        .par_iter()
        .map(|&p| {
            let dep = Channel::depolarizing(p)?;
            let bf = Channel::bit_flip(p)?;
            let mut dev = [0.0f64; 4];
            let mut bound: f64 = 0.0;
            for k in &net {
                let kx2 = k[0] * k[0];
                let d_dep = decohering_power_qubit(&dep, k, &circle)?.value;
                let c_bf = cohering_power_qubit(&bf, k)?.value;
                let d_bf = decohering_power_qubit(&bf, k, &circle)?.value;
                dev[0] = dev[0].max((d_dep - depolarizing_decohering_closed(p)?).abs());
                dev[1] = dev[1].max((c_bf - bitflip_cohering_closed(p, kx2)?).abs());
                dev[2] = dev[2].max((d_bf - bitflip_decohering_closed(p, kx2)?).abs());
                dev[3] = dev[3].max((d_bf - bitflip_decohering_exact(p, kx2)?).abs());
                for v in [d_dep, c_bf, d_bf] {
                    bound = bound.max(v - 1.0).max(-v);
                }
            }
            Ok((dev, bound))
        })
        .collect::<Result<Vec<_>>>()?;
    let col = |i: usize| worst(noise_rows.iter().map(|r| r.0[i]));
    checks.push(Check::within("depolarizing decohering closed form vs numeric (grid)", col(0), 1e-6));
    checks.push(Check::within("bitflip cohering closed form vs numeric (grid)", col(1), 1e-6));
    checks.push(Check::within("bitflip decohering piecewise form vs numeric (grid)", col(2), 1e-6));
    checks.push(Check::within("bitflip decohering stationary-point form vs numeric (grid)", col(3), 1e-6));
    bounds.extend(noise_rows.iter().map(|r| r.1));
    checks.push(Check::within("power values within their bounds", worst(bounds), 1e-9));
    Ok(checks)
}
