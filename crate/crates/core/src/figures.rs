//! Tabulated curves for the unitary and bit-flip cohering power plots.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::power::{bitflip_cohering_closed, unitary_cohering_closed};
use crate::states::Vec3;
use crate::{Error, Result};

/// Samples per curve, endpoints included.
pub const CURVE_POINTS: usize = 181;

pub const FIG1_KDOTN: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
pub const FIG3_P: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    /// Unitary cohering power against rotation angle, one curve per `k̂·n̂`.
    Fig1,
    /// Bit-flip cohering power against the angle of `k̂` from `x̂`, one
    /// curve per `p`.
    Fig3,
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig3" => Ok(Figure::Fig3),
            other => Err(Error::Spec {
                field: "figure".into(),
                reason: format!("unknown figure {other:?}, expected fig1 or fig3"),
            }),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig1 => "fig1",
            Figure::Fig3 => "fig3",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureTable {
    pub header: [&'static str; 3],
    pub rows: Vec<[f64; 3]>,
}

/// Nine significant digits, dot decimal separator.
pub fn format_value(x: f64) -> String {
    // fold -0 into 0
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

impl FigureTable {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn angles(max: f64) -> impl Iterator<Item = f64> {
    let last = CURVE_POINTS - 1;
    (0..CURVE_POINTS).map(move |i| if i == last { max } else { max * i as f64 / last as f64 })
}

/// Rotation about `ẑ`, with `k̂` in the x–z plane at the given `k̂·n̂`.
pub fn fig1() -> Result<FigureTable> {
    let n = Vec3::z();
    let mut rows = Vec::with_capacity(FIG1_KDOTN.len() * CURVE_POINTS);
    for &kn in &FIG1_KDOTN {
        let k = Vec3::new((1.0 - kn * kn).sqrt(), 0.0, kn);
        for theta in angles(PI) {
            rows.push([theta, kn, unitary_cohering_closed(&n, theta, &k)?]);
        }
    }
    Ok(FigureTable {
        header: ["theta_rad", "kdotn", "cohering_power"],
        rows,
    })
}

/// `θ` is the angle between `k̂` and `x̂`, so `η = cos²θ`.
pub fn fig3() -> Result<FigureTable> {
    let mut rows = Vec::with_capacity(FIG3_P.len() * CURVE_POINTS);
    for &p in &FIG3_P {
        for theta in angles(FRAC_PI_2) {
            let eta = theta.cos().powi(2).min(1.0);
            rows.push([theta, p, bitflip_cohering_closed(p, eta)?]);
        }
    }
    Ok(FigureTable {
        header: ["theta_rad", "p", "cohering_power"],
        rows,
    })
}

pub fn table(fig: Figure) -> Result<FigureTable> {
    match fig {
        Figure::Fig1 => fig1(),
        Figure::Fig3 => fig3(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig1_spot_values() {
        let t = fig1().unwrap();
        assert_eq!(t.rows.len(), 5 * CURVE_POINTS);
        let mid = t.rows.iter().find(|r| r[1] == 0.0 && (r[0] - FRAC_PI_2).abs() < 1e-12).unwrap();
        assert!((mid[2] - 1.0).abs() < 1e-12);
        assert!(t.rows.iter().filter(|r| r[1] == 1.0).all(|r| r[2].abs() < 1e-12));
        assert_eq!(t.rows[CURVE_POINTS - 1][0], PI);
    }

    #[test]
    fn fig3_spot_values() {
        let t = fig3().unwrap();
        for r in &t.rows {
            if r[0] == 0.0 || r[0] == FRAC_PI_2 {
                assert!(r[2].abs() < 1e-12, "{r:?}");
            }
        }
    }

    #[test]
    fn csv_layout() {
        let csv = fig3().unwrap().to_csv();
        assert!(csv.starts_with("theta_rad,p,cohering_power\n"));
        assert!(csv.ends_with('\n'));
        assert_eq!(csv.lines().count(), 1 + 5 * CURVE_POINTS);
        assert_eq!(format_value(0.5), "5.00000000e-1");
        assert_eq!(format_value(1.0 / 3.0).parse::<f64>().unwrap(), 0.333333333);
    }

    #[test]
    fn parse_names() {
        assert_eq!("fig1".parse::<Figure>().unwrap(), Figure::Fig1);
        assert!("fig2".parse::<Figure>().is_err());
    }
}
