//! JSON channel descriptions.

use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use super::Channel;
use crate::linalg::ComplexMatrix;
use crate::states::Vec3;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecType {
    Unitary,
    Depolarizing,
    Bitflip,
    Phaseflip,
    Cnot,
    Tensor,
    Kraus,
}

/// A channel as a JSON object, e.g. `{"type": "bitflip", "p": 0.2}`.
///
/// Kraus operators are flat row-major lists of `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    #[serde(rename = "type")]
    pub kind: SpecType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<ChannelSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<Vec<[f64; 2]>>>,
}

fn spec_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Spec {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn required<T: Clone>(value: &Option<T>, field: &str) -> Result<T> {
    value.clone().ok_or_else(|| spec_err(field, "missing"))
}

impl ChannelSpec {
    fn bare(kind: SpecType) -> Self {
        Self {
            kind,
            axis: None,
            theta: None,
            p: None,
            factors: None,
            kraus: None,
        }
    }

    pub fn unitary(axis: [f64; 3], theta: f64) -> Self {
        Self {
            axis: Some(axis),
            theta: Some(theta),
            ..Self::bare(SpecType::Unitary)
        }
    }

    pub fn noise(kind: SpecType, p: f64) -> Self {
        Self {
            p: Some(p),
            ..Self::bare(kind)
        }
    }

    pub fn cnot() -> Self {
        Self::bare(SpecType::Cnot)
    }

    pub fn tensor(factors: Vec<ChannelSpec>) -> Self {
        Self {
            factors: Some(factors),
            ..Self::bare(SpecType::Tensor)
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| spec_err("<document>", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    fn allow_only(&self, allowed: &[&str]) -> Result<()> {
        let present = [
            ("axis", self.axis.is_some()),
            ("theta", self.theta.is_some()),
            ("p", self.p.is_some()),
            ("factors", self.factors.is_some()),
            ("kraus", self.kraus.is_some()),
        ];
        for (name, set) in present {
            if set && !allowed.contains(&name) {
                return Err(spec_err(name, format!("not used by type {:?}", self.kind)));
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Channel> {
        match self.kind {
            SpecType::Unitary => {
                self.allow_only(&["axis", "theta"])?;
                let a = required(&self.axis, "axis")?;
                let theta = required(&self.theta, "theta")?;
                let axis = Vec3::new(a[0], a[1], a[2]);
                let norm = axis.norm();
                if !norm.is_finite() || norm < 1e-12 {
                    return Err(spec_err("axis", "must be a nonzero vector"));
                }
                // near-unit axes typed with few digits are renormalized
                if (norm - 1.0).abs() > 1e-3 {
                    return Err(spec_err("axis", format!("not a unit vector (norm {norm})")));
                }
                Channel::unitary_rotation(&(axis / norm), theta)
            }
            SpecType::Depolarizing | SpecType::Bitflip | SpecType::Phaseflip => {
                self.allow_only(&["p"])?;
                let p = required(&self.p, "p")?;
                match self.kind {
                    SpecType::Depolarizing => Channel::depolarizing(p),
                    SpecType::Bitflip => Channel::bit_flip(p),
                    _ => Channel::phase_flip(p),
                }
            }
            SpecType::Cnot => {
                self.allow_only(&[])?;
                Ok(Channel::cnot())
            }
            SpecType::Tensor => {
                self.allow_only(&["factors"])?;
                let factors = required(&self.factors, "factors")?;
                let built = factors
                    .iter()
                    .map(ChannelSpec::build)
                    .collect::<Result<Vec<_>>>()?;
                Channel::tensor(&built)
            }
            SpecType::Kraus => {
                self.allow_only(&["kraus"])?;
                let ops = required(&self.kraus, "kraus")?;
                if ops.is_empty() {
                    return Err(spec_err("kraus", "empty operator list"));
                }
                let mats = ops
                    .iter()
                    .map(|entries| {
                        let n = entries.len();
                        let d = (n as f64).sqrt().round() as usize;
                        let values = entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                        ComplexMatrix::new(d, values).map_err(|_| {
                            spec_err("kraus", format!("{n} entries is not a square matrix"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Channel::from_kraus(mats)
            }
        }
    }
}

impl std::str::FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_json(s)
    }
}
