//! JSON run configuration: base field, ramification data and an optional
//! hereditary order.

use std::collections::BTreeMap;

use hcn_core::{AlgebraSpec, BaseField, BaseKind, OrderSpec, Place, INFINITY_LABEL};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    /// The text is not JSON of the expected shape.
    #[error("schema error: {0}")]
    Schema(String),
    /// Well-formed, but the data do not describe a definite algebra and order.
    #[error("validation error: {}", .0.join("; "))]
    Validation(Vec<String>),
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(tag = "type", deny_unknown_fields)]
enum RawBase {
    #[serde(rename = "rational_function_field")]
    Rational {
        q: u64,
        #[serde(default = "one")]
        infinity_degree: u32,
    },
    #[serde(rename = "custom")]
    Custom {
        q: u64,
        l_polynomial: Vec<i64>,
        #[serde(default = "one")]
        infinity_degree: u32,
        #[serde(default)]
        pic_order: Option<u64>,
    },
}

fn one() -> u32 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    base: RawBase,
    degree: u32,
    ramification: Vec<RawRamification>,
    #[serde(default)]
    order: Option<RawOrder>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRamification {
    place: String,
    #[serde(default)]
    degree: Option<u32>,
    invariant: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrder {
    #[serde(default)]
    invariants: BTreeMap<String, RawInvariant>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawInvariant {
    Vector(Vec<u32>),
    /// An unramified place that is only mentioned by the order.
    Place { degree: u32, invariant: Vec<u32> },
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub order: OrderSpec,
    /// Non-fatal remarks, e.g. about the `#Pic(A)` convention.
    pub warnings: Vec<String>,
}

/// Parses `"a/b"`, `"a"` or `"-a/b"` into a reduced `(κ, d)` with `d > 0`.
fn parse_invariant(text: &str) -> Option<(i64, u32)> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
        None => (text.parse::<i64>().ok()?, 1),
    };
    if den <= 0 {
        return None;
    }
    let g = gcd(num.unsigned_abs(), den as u64) as i64;
    let (num, den) = if g == 0 { (0, 1) } else { (num / g, den / g) };
    // an integral invariant is the unramified class
    if den == 1 {
        return Some((0, 1));
    }
    Some((num, den.to_u32()?))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Schema(e.to_string()))?;
    let mut errors = Vec::new();

    let base = match raw.base {
        RawBase::Rational { q, infinity_degree } => BaseField::rational(q, infinity_degree),
        RawBase::Custom { q, l_polynomial, infinity_degree, pic_order } => {
            BaseField::custom(q, l_polynomial, infinity_degree, pic_order)
        }
    };
    let base = match base {
        Ok(b) => b,
        Err(hcn_core::Error::InvalidSpec(v)) => return Err(ConfigError::Validation(v)),
        Err(e) => return Err(ConfigError::Validation(vec![e.to_string()])),
    };
    let n = raw.degree;
    if n == 0 {
        return Err(ConfigError::Validation(vec!["degree: must be positive".into()]));
    }

    let mut infinity = None;
    let mut places = Vec::new();
    for (k, r) in raw.ramification.iter().enumerate() {
        let at = format!("ramification[{k}]");
        let Some((kappa, d)) = parse_invariant(&r.invariant) else {
            errors.push(format!("{at}.invariant: `{}` is not a fraction a/b", r.invariant));
            continue;
        };
        if r.place == INFINITY_LABEL {
            if let Some(deg) = r.degree {
                if deg != base.infinity_degree() {
                    errors.push(format!(
                        "{at}.degree: {deg} differs from base.infinity_degree {}",
                        base.infinity_degree()
                    ));
                }
            }
            if infinity.is_some() {
                errors.push(format!("{at}.place: `{INFINITY_LABEL}` listed twice"));
            }
            infinity = Some(Place::with_invariant(INFINITY_LABEL, base.infinity_degree(), kappa, d));
        } else {
            let Some(deg) = r.degree else {
                errors.push(format!("{at}.degree: required for place `{}`", r.place));
                continue;
            };
            places.push(Place::with_invariant(r.place.clone(), deg, kappa, d));
        }
    }
    let Some(infinity) = infinity else {
        errors.push(format!("ramification: missing an entry for `{INFINITY_LABEL}`"));
        return Err(ConfigError::Validation(errors));
    };

    let mut invariants = Vec::new();
    for (label, inv) in raw.order.map(|o| o.invariants).unwrap_or_default() {
        let at = format!("order.invariants.{label}");
        let declared = places.iter().any(|p| p.label == label);
        match inv {
            RawInvariant::Vector(f) => {
                if !declared && label != INFINITY_LABEL {
                    errors.push(format!(
                        "{at}: place is not in `ramification`; give {{\"degree\": .., \"invariant\": [..]}}"
                    ));
                    continue;
                }
                invariants.push((label, f));
            }
            RawInvariant::Place { degree, invariant } => {
                if declared {
                    if places.iter().any(|p| p.label == label && p.degree != degree) {
                        errors.push(format!("{at}.degree: {degree} contradicts `ramification`"));
                    }
                } else if label != INFINITY_LABEL {
                    places.push(Place::with_invariant(label.clone(), degree, 0, 1));
                }
                invariants.push((label, invariant));
            }
        }
    }
    if !errors.is_empty() {
        return Err(ConfigError::Validation(errors));
    }

    let algebra = AlgebraSpec::new(base, n, places, infinity);
    let order = match OrderSpec::new(algebra, invariants) {
        Ok(o) => o,
        Err(hcn_core::Error::InvalidSpec(v)) => return Err(ConfigError::Validation(v)),
        Err(e) => return Err(ConfigError::Validation(vec![e.to_string()])),
    };
    let warnings = order.base().warnings();
    Ok(RunConfig { order, warnings })
}

/// Serializes a configuration so that [`parse_config`] reproduces it.
pub fn config_to_json(config: &RunConfig) -> Value {
    let order = &config.order;
    let algebra = order.algebra();
    let base = algebra.base.clone();
    let q = base.q().to_u64().expect("q fits in u64");
    let base_json = match base.kind() {
        BaseKind::Rational => serde_json::to_value(RawBase::Rational {
            q,
            infinity_degree: base.infinity_degree(),
        }),
        BaseKind::Custom => serde_json::to_value(RawBase::Custom {
            q,
            l_polynomial: base.l_poly().iter().map(|c| c.to_i64().expect("small coefficient")).collect(),
            infinity_degree: base.infinity_degree(),
            pic_order: base.pic_override().map(|p| p.to_u64().expect("small Pic")),
        }),
    }
    .expect("base serializes");

    let invariant = |p: &Place| match p.invariant_num {
        Some(k) if p.local_index > 1 => format!("{k}/{}", p.local_index),
        _ => "0".to_string(),
    };
    let mut ramification = vec![json!({"place": INFINITY_LABEL, "invariant": invariant(&algebra.infinity)})];
    for p in &algebra.finite_places {
        ramification.push(json!({"place": p.label, "degree": p.degree, "invariant": invariant(p)}));
    }
    let invariants: serde_json::Map<String, Value> = order
        .invariants()
        .iter()
        .map(|(l, f)| (l.clone(), json!(f)))
        .collect();
    json!({
        "base": base_json,
        "degree": algebra.degree,
        "ramification": ramification,
        "order": {"invariants": invariants},
    })
}
