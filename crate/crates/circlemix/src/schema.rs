//! Measure spec files.
//!
//! A spec is a JSON object tagged by `"family"`. Nested measures (mixture
//! parts, power bases, convolution factors) are specs themselves. Errors carry
//! the JSON path of the offending field, e.g. `parts[1].measure.theta`.
//!
//! ```json
//! {"family": "haar"}
//! {"family": "atomic", "atoms": [{"angle": "golden", "weight": 0.5}, {"angle": "-golden", "weight": 0.5}]}
//! {"family": "grid", "density": [2.0, 0.0, 1.0, 1.0]}
//! {"family": "cantor", "theta": 3}
//! {"family": "riesz",
//!  "coefficients": {"prefix": [], "tail": {"kind": "geometric", "scale": 1.0, "ratio": 0.5}},
//!  "frequencies": {"kind": "geometric", "first": 4, "ratio": 4}}
//! {"family": "gapped", "factors": [{"fejer": 2}, {"coefficients": [0.5]}], "ratio": 2.0}
//! {"family": "mixture", "parts": [{"weight": 0.5, "measure": {"family": "haar"}},
//!                                 {"weight": 0.5, "measure": {"family": "atomic", "atoms": [{"angle": "1/4", "weight": 1}]}}]}
//! {"family": "power", "base": {"family": "cantor", "theta": 3}, "exponent": 2}
//! {"family": "reversed", "base": {"family": "atomic", "atoms": [{"angle": "1/3", "weight": 1}]}}
//! {"family": "convolution", "factors": [{"family": "cantor", "theta": 3}, {"family": "atomic", "atoms": [{"angle": "sqrt2", "weight": 1}]}]}
//! ```
//!
//! Angles are strings (`"1/4"`, `"0.25"`, `"golden"`, `"2*sqrt2+1/3"`,
//! `"custom(0.1234)"`) or plain numbers, which are read as exact decimals.

use std::fmt;

use circlemix_core::measure::{
    AtomicMeasure, CantorLebesgue, CoefficientSeq, CoefficientTail, CosinePolynomial, FrequencySeq, GappedProduct,
    GridDensity, RieszProduct,
};
use circlemix_core::{Angle, CircleMeasure};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};

/// A schema violation at a JSON path.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

fn join(path: &str, field: &str) -> String {
    match (path.is_empty(), field.starts_with('[')) {
        (true, _) => field.to_string(),
        (false, true) => format!("{path}{field}"),
        (false, false) => format!("{path}.{field}"),
    }
}

fn at(path: &str, msg: impl fmt::Display) -> SchemaError {
    SchemaError { path: if path.is_empty() { "$".into() } else { path.into() }, message: msg.to_string() }
}

/// Deserializes `v` into `T`, reporting the field path below `path`.
fn typed<T: DeserializeOwned>(v: Value, path: &str) -> Result<T, SchemaError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let inner = e.path().to_string();
        let p = if inner == "." { path.to_string() } else { join(path, &inner) };
        at(&p, e.into_inner())
    })
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum AngleSpec {
    Text(String),
    Number(serde_json::Number),
}

impl AngleSpec {
    fn resolve(&self, path: &str) -> Result<Angle, SchemaError> {
        let s = match self {
            AngleSpec::Text(s) => s.clone(),
            AngleSpec::Number(n) => n.to_string(),
        };
        s.parse::<Angle>().map_err(|e| at(path, e))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomSpec {
    angle: AngleSpec,
    weight: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomicSpec {
    atoms: Vec<AtomSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpec {
    density: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CantorSpec {
    theta: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum TailSpec {
    None,
    Geometric {
        #[serde(default = "one")]
        scale: f64,
        ratio: f64,
    },
    Power {
        #[serde(default = "one")]
        scale: f64,
        alpha: f64,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientsSpec {
    #[serde(default)]
    prefix: Vec<f64>,
    tail: TailSpec,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum FrequenciesSpec {
    Explicit { values: Vec<u64> },
    Geometric { first: u64, ratio: u64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RieszSpec {
    coefficients: CoefficientsSpec,
    frequencies: FrequenciesSpec,
}

#[derive(Debug, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum FactorSpec {
    Fejer { fejer: usize },
    Coefficients { coefficients: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GappedSpec {
    factors: Vec<FactorSpec>,
    #[serde(default)]
    scales: Option<Vec<u64>>,
    #[serde(default)]
    ratio: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartSpec {
    weight: f64,
    measure: Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MixtureSpec {
    parts: Vec<PartSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerSpec {
    base: Value,
    exponent: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReversedSpec {
    base: Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConvolutionSpec {
    factors: Vec<Value>,
}

pub const FAMILIES: [&str; 10] =
    ["haar", "atomic", "grid", "cantor", "riesz", "gapped", "mixture", "power", "reversed", "convolution"];

/// Parses spec text into a measure.
pub fn parse_spec(text: &str) -> Result<CircleMeasure, SchemaError> {
    let value: Value = serde_json::from_str(text).map_err(|e| at("", e))?;
    measure_from_value(&value, "")
}

/// Builds a measure from an already parsed JSON value rooted at `path`.
pub fn measure_from_value(value: &Value, path: &str) -> Result<CircleMeasure, SchemaError> {
    let obj = value.as_object().ok_or_else(|| at(path, "expected an object with a \"family\" field"))?;
    let family = match obj.get("family") {
        Some(Value::String(s)) => s.as_str(),
        Some(_) => return Err(at(&join(path, "family"), "expected a string")),
        None => return Err(at(path, "missing field `family`")),
    };
    let mut rest: Map<String, Value> = obj.clone();
    rest.remove("family");
    let body = Value::Object(rest);
    let invalid = |e: circlemix_core::Error| at(path, e);
    match family {
        "haar" => {
            typed::<Empty>(body, path)?;
            Ok(CircleMeasure::Haar)
        }
        "atomic" => {
            let s: AtomicSpec = typed(body, path)?;
            let atoms = s
                .atoms
                .iter()
                .enumerate()
                .map(|(i, a)| Ok((a.angle.resolve(&join(path, &format!("atoms[{i}].angle")))?, a.weight)))
                .collect::<Result<Vec<_>, SchemaError>>()?;
            AtomicMeasure::new(atoms).map(CircleMeasure::Atomic).map_err(invalid)
        }
        "grid" => {
            let s: GridSpec = typed(body, path)?;
            GridDensity::new(s.density).map(CircleMeasure::Grid).map_err(|e| at(&join(path, "density"), e))
        }
        "cantor" => {
            let s: CantorSpec = typed(body, path)?;
            CantorLebesgue::new(s.theta).map(CircleMeasure::Cantor).map_err(|e| at(&join(path, "theta"), e))
        }
        "riesz" => {
            let s: RieszSpec = typed(body, path)?;
            let tail = match s.coefficients.tail {
                TailSpec::None => CoefficientTail::None,
                TailSpec::Geometric { scale, ratio } => CoefficientTail::Geometric { scale, ratio },
                TailSpec::Power { scale, alpha } => CoefficientTail::Power { scale, alpha },
            };
            let freqs = match s.frequencies {
                FrequenciesSpec::Explicit { values } => FrequencySeq::Explicit(values),
                FrequenciesSpec::Geometric { first, ratio } => FrequencySeq::Geometric { first, ratio },
            };
            RieszProduct::new(CoefficientSeq { prefix: s.coefficients.prefix, tail }, freqs)
                .map(CircleMeasure::Riesz)
                .map_err(invalid)
        }
        "gapped" => {
            let s: GappedSpec = typed(body, path)?;
            let factors = s
                .factors
                .into_iter()
                .enumerate()
                .map(|(i, f)| {
                    match f {
                        FactorSpec::Fejer { fejer } => CosinePolynomial::fejer(fejer),
                        FactorSpec::Coefficients { coefficients } => CosinePolynomial::new(coefficients),
                    }
                    .map_err(|e| at(&join(path, &format!("factors[{i}]")), e))
                })
                .collect::<Result<Vec<_>, SchemaError>>()?;
            GappedProduct::new(factors, s.scales, s.ratio.unwrap_or(GappedProduct::DEFAULT_RATIO))
                .map(CircleMeasure::Gapped)
                .map_err(invalid)
        }
        "mixture" => {
            let s: MixtureSpec = typed(body, path)?;
            let parts = s
                .parts
                .iter()
                .enumerate()
                .map(|(i, p)| Ok((p.weight, measure_from_value(&p.measure, &join(path, &format!("parts[{i}].measure")))?)))
                .collect::<Result<Vec<_>, SchemaError>>()?;
            CircleMeasure::mixture(parts).map_err(|e| at(&join(path, "parts"), e))
        }
        "power" => {
            let s: PowerSpec = typed(body, path)?;
            let base = measure_from_value(&s.base, &join(path, "base"))?;
            CircleMeasure::power(base, s.exponent).map_err(|e| at(&join(path, "exponent"), e))
        }
        "reversed" => {
            let s: ReversedSpec = typed(body, path)?;
            Ok(CircleMeasure::reversed(measure_from_value(&s.base, &join(path, "base"))?))
        }
        "convolution" => {
            let s: ConvolutionSpec = typed(body, path)?;
            if s.factors.is_empty() {
                return Err(at(&join(path, "factors"), "at least one factor is required"));
            }
            let mut factors = s
                .factors
                .iter()
                .enumerate()
                .map(|(i, f)| measure_from_value(f, &join(path, &format!("factors[{i}]"))));
            let first = factors.next().expect("non-empty")?;
            factors.try_fold(first, |acc, f| circlemix_core::convolve(&acc, &f?).map_err(invalid))
        }
        other => Err(at(
            &join(path, "family"),
            format!("unknown family `{other}`, expected one of {}", FAMILIES.join(", ")),
        )),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}
