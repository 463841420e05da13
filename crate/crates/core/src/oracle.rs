//! Brute-force minimizers: a coarse grid followed by golden-section
//! refinement of the best local minima.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::{Error, Result};

/// Largest torus dimension accepted by [`minimize_torus`].
pub const MAX_TORUS_DIM: usize = 3;

/// Number of grid local minima refined per search.
const REFINE_CANDIDATES: usize = 8;

/// Grid local minima used as starting points for torus coordinate descent.
const TORUS_STARTS: usize = 4;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    /// Grid points per dimension.
    pub coarse_points: usize,
    /// Target bracket width on the parameter.
    pub refine_tol: f64,
    /// Cap on golden-section steps and on coordinate-descent sweeps.
    pub max_refine_iters: usize,
}

impl SearchConfig {
    pub fn circle() -> Self {
        Self {
            coarse_points: 360,
            refine_tol: 1e-9,
            max_refine_iters: 200,
        }
    }

    pub fn torus() -> Self {
        Self {
            coarse_points: 24,
            ..Self::circle()
        }
    }

    pub fn with_points(self, coarse_points: usize) -> Self {
        Self {
            coarse_points,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.coarse_points < 8 {
            return Err(Error::SearchConfig(format!(
                "coarse_points must be at least 8, got {}",
                self.coarse_points
            )));
        }
        if self.refine_tol.is_nan() || self.refine_tol <= 0.0 {
            return Err(Error::SearchConfig(format!(
                "refine_tol must be positive, got {}",
                self.refine_tol
            )));
        }
        Ok(())
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self::circle()
    }
}

/// Golden-section search on `[a, b]`; returns the best point seen.
pub fn golden_section(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_iters: usize,
) -> (f64, f64) {
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iters = 0;
    while b - a > tol && iters < max_iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Indices of grid local minima, best first, ties to the lower index.
fn local_minima(values: &[f64], cyclic: bool) -> Vec<usize> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n)
        .filter(|&i| {
            let left = match (i, cyclic) {
                (0, true) => Some(values[n - 1]),
                (0, false) => None,
                _ => Some(values[i - 1]),
            };
            let right = match (i + 1 == n, cyclic) {
                (true, true) => Some(values[0]),
                (true, false) => None,
                _ => Some(values[i + 1]),
            };
            left.is_none_or(|l| values[i] <= l) && right.is_none_or(|r| values[i] <= r)
        })
        .collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    idx.truncate(REFINE_CANDIDATES);
    idx
}

fn grid_argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v < values[best] { i } else { best })
}

/// Minimizes a function of an angle over `[0, 2π)`.
pub fn minimize_circle<F>(f: F, cfg: &SearchConfig) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync,
{
    cfg.validate()?;
    let n = cfg.coarse_points;
    let h = TAU / n as f64;
    let values: Vec<f64> = (0..n).into_par_iter().map(|i| f(i as f64 * h)).collect();
    let best = grid_argmin(&values);
    let mut result = (best as f64 * h, values[best]);
    for i in local_minima(&values, true) {
        let centre = i as f64 * h;
        let (x, v) = golden_section(&f, centre - h, centre + h, cfg.refine_tol, cfg.max_refine_iters);
        if v < result.1 {
            result = (x.rem_euclid(TAU), v);
        }
    }
    Ok(result)
}

/// Minimizes `f` on `[lo, hi]` with a grid of `coarse_points + 1` points
/// that includes both endpoints.
pub fn minimize_interval<F>(f: F, lo: f64, hi: f64, cfg: &SearchConfig) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync,
{
    cfg.validate()?;
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::InvalidInterval { lo, hi });
    }
    if lo == hi {
        return Ok((lo, f(lo)));
    }
    let n = cfg.coarse_points;
    let h = (hi - lo) / n as f64;
    let grid = |i: usize| if i == n { hi } else { lo + i as f64 * h };
    let values: Vec<f64> = (0..=n).into_par_iter().map(|i| f(grid(i))).collect();
    let best = grid_argmin(&values);
    let mut result = (grid(best), values[best]);
    for i in local_minima(&values, false) {
        let a = grid(i.saturating_sub(1));
        let b = grid((i + 1).min(n));
        let (x, v) = golden_section(&f, a, b, cfg.refine_tol, cfg.max_refine_iters);
        if v < result.1 {
            result = (x, v);
        }
    }
    Ok(result)
}

/// Minimizes a function of `dims` phases over the torus `[0, 2π)^dims`.
pub fn minimize_torus<F>(f: F, dims: usize, cfg: &SearchConfig) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    match dims {
        0 => return Ok((Vec::new(), f(&[]))),
        1 => return minimize_circle(|x| f(&[x]), cfg).map(|(x, v)| (vec![x], v)),
        d if d > MAX_TORUS_DIM => return Err(Error::SearchDimension(d)),
        _ => {}
    }
    let n = cfg.coarse_points;
    let h = TAU / n as f64;
    let total = n.pow(dims as u32);
    let point = |mut flat: usize| -> Vec<f64> {
        let mut x = vec![0.0; dims];
        for c in (0..dims).rev() {
            x[c] = (flat % n) as f64 * h;
            flat /= n;
        }
        x
    };
    let values: Vec<f64> = (0..total).into_par_iter().map(|i| f(&point(i))).collect();
    let best = grid_argmin(&values);
    let mut result = (point(best), values[best]);

    let strides: Vec<usize> = (0..dims).map(|c| n.pow((dims - 1 - c) as u32)).collect();
    let is_local_min = |i: usize| {
        strides.iter().all(|&s| {
            let digit = (i / s) % n;
            let up = i - digit * s + ((digit + 1) % n) * s;
            let down = i - digit * s + ((digit + n - 1) % n) * s;
            values[i] <= values[up] && values[i] <= values[down]
        })
    };
    let mut starts: Vec<usize> = (0..total).filter(|&i| is_local_min(i)).collect();
    starts.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    for &start in starts.iter().take(TORUS_STARTS) {
        let (x, v) = coordinate_descent(&f, point(start), values[start], h, cfg);
        if v < result.1 {
            result = (x.iter().map(|t| t.rem_euclid(TAU)).collect(), v);
        }
    }
    Ok(result)
}

fn coordinate_descent<F>(f: &F, mut x: Vec<f64>, mut fx: f64, h: f64, cfg: &SearchConfig) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let mut widths = vec![h; x.len()];
    for _ in 0..cfg.max_refine_iters {
        let mut max_move: f64 = 0.0;
        for c in 0..x.len() {
            let centre = x[c];
            let mut probe = x.clone();
            let (t, v) = golden_section(
                |t| {
                    probe[c] = t;
                    f(&probe)
                },
                centre - widths[c],
                centre + widths[c],
                cfg.refine_tol,
                cfg.max_refine_iters,
            );
            if v < fx {
                let step = (t - centre).abs();
                max_move = max_move.max(step);
                x[c] = t;
                fx = v;
                // shrink the bracket around a settling coordinate, regrow it
                // when the optimum runs into the edge
                widths[c] = (4.0 * step).clamp(1e3 * cfg.refine_tol, h);
            }
        }
        if max_move < cfg.refine_tol {
            break;
        }
    }
    (x, fx)
}
