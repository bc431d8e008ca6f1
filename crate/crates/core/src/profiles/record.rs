//! JSON profile records.
//!
//! ```json
//! {"n": 400, "lattice_spacing": 1.0, "family": {"kind": "rainbow", "h": 1.0}}
//! {"n": 100, "lattice_spacing": 0.01, "expressions": {"hopping": "exp(x)", "field": "2*exp(x)"}}
//! {"lattice_spacing": 1.0, "arrays": {"hopping": [1, 2], "field": [0, 0, 0]}}
//! ```
//!
//! Expressions are functions of the position `x ∈ [0, N·a]`.

use serde::{Deserialize, Serialize};

use super::{discretize, make_builtin, ContinuumProfile, Expr, FamilyParameters, LatticeProfile};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpressionSpec {
    pub hopping: String,
    #[serde(default = "zero_expr")]
    pub field: String,
}

fn zero_expr() -> String {
    "0".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArraySpec {
    pub hopping: Vec<f64>,
    pub field: Vec<f64>,
}

/// Exactly one way of specifying the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSource {
    Family(FamilyParameters),
    Expressions(ExpressionSpec),
    Arrays(ArraySpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRecord {
    /// Number of sites; optional for explicit arrays.
    #[serde(default, alias = "N")]
    pub n: Option<usize>,
    #[serde(default = "unit_spacing")]
    pub lattice_spacing: f64,
    #[serde(flatten)]
    pub source: ProfileSource,
}

fn unit_spacing() -> f64 {
    1.0
}

impl ProfileRecord {
    pub fn builtin(family: FamilyParameters, n: usize, lattice_spacing: f64) -> Self {
        Self {
            n: Some(n),
            lattice_spacing,
            source: ProfileSource::Family(family),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Record(e.to_string()))
    }

    fn sites(&self) -> Result<usize> {
        self.n
            .ok_or_else(|| Error::Record("field `n` (number of sites) is required".into()))
    }
}

/// Builds the lattice profile described by a record, plus its continuum
/// profile when one is known.
pub fn load_custom(record: &ProfileRecord) -> Result<(LatticeProfile, Option<ContinuumProfile>)> {
    let a = record.lattice_spacing;
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Record(format!(
            "lattice_spacing must be positive, got {a}"
        )));
    }
    match &record.source {
        ProfileSource::Family(fam) => {
            let (p, c) = make_builtin(fam, record.sites()?, a)?;
            Ok((p, Some(c)))
        }
        ProfileSource::Expressions(spec) => {
            let n = record.sites()?;
            if n < 2 {
                return Err(Error::Record(format!(
                    "expression profiles need n >= 2, got {n}"
                )));
            }
            let j = Expr::parse(&spec.hopping)?;
            let b = Expr::parse(&spec.field)?;
            let c =
                ContinuumProfile::custom(move |x| j.eval(x), move |x| b.eval(x), n as f64 * a, a)?;
            let p = discretize(&c, n)?;
            Ok((p, Some(c)))
        }
        ProfileSource::Arrays(arr) => {
            if let Some(n) = record.n {
                if n != arr.field.len() {
                    return Err(Error::Record(format!(
                        "n = {n} but {} field values were given",
                        arr.field.len()
                    )));
                }
            }
            let p = LatticeProfile::new(arr.hopping.clone(), arr.field.clone(), a)
                .map_err(|e| Error::Record(e.to_string()))?;
            Ok((p, None))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn explicit_arrays() {
        let r = ProfileRecord::from_json(r#"{"n":3,"arrays":{"hopping":[1,2],"field":[0,0,0]}}"#)
            .unwrap();
        let (p, c) = load_custom(&r).unwrap();
        assert_eq!(p.n(), 3);
        assert_eq!(p.hoppings(), &[1.0, 2.0]);
        assert!(c.is_none());
    }

    #[test]
    fn array_length_mismatch() {
        let r =
            ProfileRecord::from_json(r#"{"arrays":{"hopping":[1,2,3],"field":[0,0,0]}}"#).unwrap();
        assert!(matches!(load_custom(&r), Err(Error::Record(_))));
        let r = ProfileRecord::from_json(r#"{"n":4,"arrays":{"hopping":[1,2],"field":[0,0,0]}}"#)
            .unwrap();
        assert!(load_custom(&r).is_err());
    }

    #[test]
    fn saturation_only_expression_chain() {
        let r = ProfileRecord::from_json(
            r#"{"n":100,"lattice_spacing":0.01,"expressions":{"hopping":"exp(x)","field":"2*exp(x)"}}"#,
        )
        .unwrap();
        let (p, c) = load_custom(&r).unwrap();
        let c = c.unwrap();
        assert_abs_diff_eq!(c.length(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.hoppings()[10], (0.1f64).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(p.fields()[10], 2.0 * (0.1f64).exp(), epsilon = 1e-14);
    }

    #[test]
    fn family_record() {
        let r =
            ProfileRecord::from_json(r#"{"n":10,"family":{"kind":"homogeneous","J":1}}"#).unwrap();
        let (p, c) = load_custom(&r).unwrap();
        assert_eq!(p.hoppings(), &[1.0; 9]);
        assert!(c.is_some());
    }

    #[test]
    fn malformed_records() {
        assert!(ProfileRecord::from_json(r#"{"n":10}"#).is_err());
        assert!(ProfileRecord::from_json("not json").is_err());
        let r = ProfileRecord::from_json(r#"{"expressions":{"hopping":"1"}}"#).unwrap();
        assert!(matches!(load_custom(&r), Err(Error::Record(_))));
        let r = ProfileRecord::from_json(r#"{"n":10,"expressions":{"hopping":"1 +"}}"#).unwrap();
        assert!(matches!(load_custom(&r), Err(Error::Expression { .. })));
        let r =
            ProfileRecord::from_json(r#"{"n":3,"arrays":{"hopping":[1,null],"field":[0,0,0]}}"#);
        assert!(r.is_err());
    }
}
