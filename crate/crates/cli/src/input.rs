//! Parsers for the short state, observable and channel notations.

use std::path::Path;

use cohpower::states::density_from_bloch;
use cohpower::{BlochVector, Channel, ChannelSpec, ComplexMatrix, DensityMatrix, Observable, PureState, Vec3};
use num_complex::Complex64;

use crate::CliError;

/// Slack allowed on hand-typed unit vectors before they are renormalized.
pub const TYPED_UNIT_TOL: f64 = 1e-3;

fn spec_error(field: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Spec(format!("{field}: {reason}"))
}

fn parse_triple(field: &str, text: &str) -> Result<Vec3, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(spec_error(field, format!("expected three comma-separated numbers, got {text:?}")));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .parse::<f64>()
            .map_err(|_| spec_error(field, format!("{part:?} is not a number")))?;
    }
    Ok(Vec3::new(v[0], v[1], v[2]))
}

/// `x`, `y`, `z` (optionally signed) or `kx,ky,kz`; near-unit vectors are
/// renormalized.
pub fn parse_direction(field: &str, text: &str) -> Result<Vec3, CliError> {
    let text = text.trim();
    let (sign, name) = match text.strip_prefix('-') {
        Some(rest) if !rest.contains(',') => (-1.0, rest),
        _ => (1.0, text.strip_prefix('+').unwrap_or(text)),
    };
    let v = match name {
        "x" => Vec3::x() * sign,
        "y" => Vec3::y() * sign,
        "z" => Vec3::z() * sign,
        _ => parse_triple(field, text)?,
    };
    let n = v.norm();
    if !n.is_finite() || (n - 1.0).abs() > TYPED_UNIT_TOL {
        return Err(spec_error(field, format!("{text:?} is not a unit vector (norm {n})")));
    }
    Ok(v / n)
}

fn parse_complex_list(field: &str, json: &str) -> Result<Vec<Complex64>, CliError> {
    let pairs: Vec<[f64; 2]> =
        serde_json::from_str(json).map_err(|e| spec_error(field, format!("expected [[re, im], ...]: {e}")))?;
    Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}

/// `plus`, `minus`, `zero`, `one`, `bloch:x,y,z`, `mixed:x,y,z` (any
/// point of the ball) or `ket:[[re,im],...]` (normalized).
pub fn parse_state(text: &str) -> Result<DensityMatrix, CliError> {
    let text = text.trim();
    let named = match text {
        "zero" => Some(Vec3::z()),
        "one" => Some(-Vec3::z()),
        "plus" => Some(Vec3::x()),
        "minus" => Some(-Vec3::x()),
        _ => None,
    };
    if let Some(r) = named {
        return Ok(density_from_bloch(&BlochVector::new(r)?));
    }
    if let Some(rest) = text.strip_prefix("bloch:").or_else(|| text.strip_prefix("mixed:")) {
        let r = BlochVector::new(parse_triple("state", rest)?).map_err(|e| spec_error("state", e))?;
        return Ok(density_from_bloch(&r));
    }
    if let Some(rest) = text.strip_prefix("ket:") {
        let amps = parse_complex_list("state", rest)?;
        let psi = PureState::normalized(amps).map_err(|e| spec_error("state", e))?;
        return Ok(psi.density());
    }
    Err(spec_error(
        "state",
        format!("unknown state {text:?}; use plus, minus, zero, one, bloch:x,y,z, mixed:x,y,z or ket:[[re,im],...]"),
    ))
}

/// An observable and, for Pauli directions, the unit vector `k̂`.
pub struct ParsedObservable {
    pub observable: Observable,
    pub direction: Option<Vec3>,
}

/// A direction (`z`, `0.6,0,0.8`), a product of directions (`x*z`), or
/// `matrix:[[re,im],...]` with `d²` row-major entries.
pub fn parse_observable(text: &str) -> Result<ParsedObservable, CliError> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("matrix:") {
        let entries = parse_complex_list("obs", rest)?;
        let m = ComplexMatrix::from_entries(entries).map_err(|e| spec_error("obs", e))?;
        let observable = Observable::from_matrix(m, "matrix").map_err(|e| spec_error("obs", e))?;
        return Ok(ParsedObservable {
            observable,
            direction: None,
        });
    }
    if text.contains('*') {
        let factors = text
            .split('*')
            .map(|f| Ok(Observable::pauli_axis(&parse_direction("obs", f)?)?))
            .collect::<Result<Vec<_>, CliError>>()?;
        return Ok(ParsedObservable {
            observable: Observable::product(&factors)?,
            direction: None,
        });
    }
    let k = parse_direction("obs", text)?;
    Ok(ParsedObservable {
        observable: Observable::pauli_axis(&k)?,
        direction: Some(k),
    })
}

/// Canonical spec for a named shortcut.
pub fn named_channel(name: &str) -> Option<ChannelSpec> {
    match name {
        "hadamard" => Some(ChannelSpec::unitary([0.0, 1.0, 0.0], std::f64::consts::FRAC_PI_2)),
        "identity" => Some(ChannelSpec::unitary([0.0, 0.0, 1.0], 0.0)),
        "cnot" => Some(ChannelSpec::cnot()),
        _ => None,
    }
}

/// A named shortcut, an inline JSON object, or a path to a JSON file.
pub fn load_channel_spec(text: &str) -> Result<ChannelSpec, CliError> {
    let text = text.trim();
    if let Some(spec) = named_channel(text) {
        return Ok(spec);
    }
    let json = if text.starts_with('{') {
        text.to_string()
    } else {
        std::fs::read_to_string(Path::new(text))
            .map_err(|e| CliError::Io(format!("cannot read channel spec {text:?}: {e}")))?
    };
    ChannelSpec::from_json(&json).map_err(|e| spec_error("channel", e))
}

pub fn build_channel(spec: &ChannelSpec) -> Result<Channel, CliError> {
    spec.build().map_err(|e| match e {
        cohpower::Error::Spec { field, reason } => spec_error(&format!("channel.{field}"), reason),
        other => spec_error("channel", other),
    })
}
