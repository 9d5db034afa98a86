//! JSON map documents and named gallery maps.

use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::harmonic::{
    AffineHarmonicMap, BoundaryPhase, HarmonicMap, PoissonHarmonicMap, SeriesHarmonicMap,
};
use crate::scalar::{lit, Real};

/// Default truncation for series maps read from documents.
pub const SERIES_TRUNCATION: usize = 64;

/// A complex number written either as a bare real or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexValue {
    fn to<T: Real>(self) -> Complex<T> {
        match self {
            ComplexValue::Real(x) => Complex::new(lit(x), T::zero()),
            ComplexValue::Pair([re, im]) => Complex::new(lit(re), lit(im)),
        }
    }
}

impl Default for ComplexValue {
    fn default() -> Self {
        ComplexValue::Real(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum PhaseSpec {
    Linear,
    Sine { eps: f64 },
}

/// `{"kind": "series" | "poisson" | "affine" | "gallery", ...}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapSpec {
    /// `h = Σ aₙzⁿ`, `g = Σ_{n≥1} bₙzⁿ`; `b[0]` is the coefficient of `z`.
    Series {
        a: Vec<ComplexValue>,
        #[serde(default)]
        b: Vec<ComplexValue>,
    },
    Poisson {
        #[serde(default = "unit")]
        scale: f64,
        #[serde(default = "linear")]
        phase: PhaseSpec,
    },
    Affine {
        #[serde(default)]
        c0: ComplexValue,
        a: ComplexValue,
        b: ComplexValue,
    },
    Gallery {
        name: String,
    },
}

fn unit() -> f64 {
    1.0
}

fn linear() -> PhaseSpec {
    PhaseSpec::Linear
}

/// Built-in maps, by name.
pub const GALLERY: [(&str, &str); 5] = [
    ("identity", "f(z) = z"),
    ("scaled:2", "f(z) = 2z"),
    ("affine:1,0.5", "f(z) = z + 0.5 conj(z)"),
    ("poly:z+0.3*zbar^2", "f(z) = z + 0.3 conj(z)^2"),
    (
        "poisson:phi=t+0.2*sin(t)",
        "Poisson integral of exp(i(t + 0.2 sin t))",
    ),
];

impl MapSpec {
    /// Parses a document; errors name the offending field and its line.
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        let Value::Object(obj) = value else {
            return Err(Error::Spec("expected a JSON object at line 1".into()));
        };
        let kind = match obj.get("kind") {
            Some(Value::String(k)) => k.as_str(),
            Some(_) => return Err(field_error(text, "kind", "expected a string")),
            None => return Err(Error::Spec("missing field `kind`".into())),
        };
        let allowed: &[&str] = match kind {
            "series" => &["a", "b"],
            "poisson" => &["scale", "phase"],
            "affine" => &["c0", "a", "b"],
            "gallery" => &["name"],
            other => {
                return Err(field_error(
                    text,
                    "kind",
                    &format!("unknown kind {other:?}, expected series, poisson, affine or gallery"),
                ))
            }
        };
        if let Some(extra) = obj
            .keys()
            .find(|k| *k != "kind" && !allowed.contains(&k.as_str()))
        {
            return Err(field_error(
                text,
                extra,
                &format!("unknown field for kind {kind:?}"),
            ));
        }
        let get = |name: &str| obj.get(name).cloned();
        Ok(match kind {
            "series" => MapSpec::Series {
                a: required(text, "a", get("a"))?,
                b: optional(text, "b", get("b"))?.unwrap_or_default(),
            },
            "poisson" => MapSpec::Poisson {
                scale: optional(text, "scale", get("scale"))?.unwrap_or_else(unit),
                phase: optional(text, "phase", get("phase"))?.unwrap_or_else(linear),
            },
            "affine" => MapSpec::Affine {
                c0: optional(text, "c0", get("c0"))?.unwrap_or_default(),
                a: required(text, "a", get("a"))?,
                b: required(text, "b", get("b"))?,
            },
            _ => MapSpec::Gallery {
                name: required(text, "name", get("name"))?,
            },
        })
    }

    pub fn gallery(name: &str) -> Self {
        MapSpec::Gallery {
            name: name.to_string(),
        }
    }

    pub fn build<T: Real>(&self) -> Result<HarmonicMap<T>> {
        match self {
            MapSpec::Series { a, b } => {
                if a.len() > SERIES_TRUNCATION + 1 || b.len() > SERIES_TRUNCATION {
                    return Err(Error::Spec(format!(
                        "series longer than the truncation {SERIES_TRUNCATION}"
                    )));
                }
                finite(a.iter().chain(b))?;
                let a = a.iter().map(|c| c.to()).collect();
                let b = b.iter().map(|c| c.to()).collect();
                Ok(SeriesHarmonicMap::new(a, b).into())
            }
            MapSpec::Poisson { scale, phase } => {
                let phase = match phase {
                    PhaseSpec::Linear => BoundaryPhase::Linear,
                    PhaseSpec::Sine { eps } => BoundaryPhase::Sine { eps: lit(*eps) },
                };
                Ok(PoissonHarmonicMap::new(lit(*scale), phase)?.into())
            }
            MapSpec::Affine { c0, a, b } => {
                finite([c0, a, b])?;
                Ok(AffineHarmonicMap::new(c0.to(), a.to(), b.to()).into())
            }
            MapSpec::Gallery { name } => gallery_map(name),
        }
    }
}

/// Line of the first occurrence of the key `name` in `text`.
fn key_line(text: &str, name: &str) -> Option<usize> {
    let needle = format!("\"{name}\"");
    text.lines()
        .position(|l| l.contains(&needle))
        .map(|i| i + 1)
}

fn field_error(text: &str, name: &str, reason: &str) -> Error {
    match key_line(text, name) {
        Some(line) => Error::Spec(format!("field `{name}` (line {line}): {reason}")),
        None => Error::Spec(format!("field `{name}`: {reason}")),
    }
}

fn optional<V: DeserializeOwned>(
    text: &str,
    name: &str,
    value: Option<Value>,
) -> Result<Option<V>> {
    value
        .map(|v| {
            serde_json::from_value(v).map_err(|e| {
                let msg = e.to_string();
                let msg = if msg.contains("untagged enum ComplexValue") {
                    "expected a number or an [re, im] pair".to_string()
                } else {
                    msg
                };
                field_error(text, name, &msg)
            })
        })
        .transpose()
}

fn required<V: DeserializeOwned>(text: &str, name: &str, value: Option<Value>) -> Result<V> {
    optional(text, name, value)?.ok_or_else(|| Error::Spec(format!("missing field `{name}`")))
}

fn finite<'a>(values: impl IntoIterator<Item = &'a ComplexValue>) -> Result<()> {
    for v in values {
        let ok = match v {
            ComplexValue::Real(x) => x.is_finite(),
            ComplexValue::Pair([x, y]) => x.is_finite() && y.is_finite(),
        };
        if !ok {
            return Err(Error::Spec("non-finite coefficient".into()));
        }
    }
    Ok(())
}

fn number(name: &str, text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| {
            Error::Spec(format!(
                "gallery map {name:?}: cannot read {text:?} as a number"
            ))
        })
}

/// Resolves `identity`, `scaled:M`, `affine:a,b`, `poly:z+c*zbar^n` and
/// `poisson:phi=t+eps*sin(t)`.
pub fn gallery_map<T: Real>(name: &str) -> Result<HarmonicMap<T>> {
    let unknown = || Error::Spec(format!("unknown gallery map {name:?}"));
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "identity" {
        return Ok(HarmonicMap::identity());
    }
    let (head, rest) = compact.split_once(':').ok_or_else(unknown)?;
    match head {
        "scaled" => {
            let m = number(name, rest)?;
            if m <= 0.0 {
                return Err(Error::Spec(format!(
                    "gallery map {name:?}: scale must be positive"
                )));
            }
            Ok(HarmonicMap::scaled_identity(lit(m)))
        }
        "affine" => {
            let (a, b) = rest.split_once(',').ok_or_else(unknown)?;
            let (a, b) = (number(name, a)?, number(name, b)?);
            Ok(HarmonicMap::affine(
                Complex::new(lit(a), T::zero()),
                Complex::new(lit(b), T::zero()),
            ))
        }
        "poly" => {
            let body = rest.strip_prefix("z+").ok_or_else(unknown)?;
            let (c, n) = body.split_once("*zbar^").ok_or_else(unknown)?;
            let n: usize = n.parse().ok().filter(|&n| n >= 1).ok_or_else(unknown)?;
            Ok(HarmonicMap::polynomial(lit(number(name, c)?), n))
        }
        "poisson" => {
            let body = rest.strip_prefix("phi=").ok_or_else(unknown)?;
            let phase = if body == "t" {
                BoundaryPhase::Linear
            } else {
                let eps = body
                    .strip_prefix("t+")
                    .and_then(|s| s.strip_suffix("*sin(t)"))
                    .ok_or_else(unknown)?;
                BoundaryPhase::Sine {
                    eps: lit(number(name, eps)?),
                }
            };
            Ok(PoissonHarmonicMap::new(T::one(), phase)?.into())
        }
        _ => Err(unknown()),
    }
}
