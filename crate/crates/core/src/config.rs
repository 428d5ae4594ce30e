//! TOML configuration for schemes and rate sweeps.
//!
//! ```toml
//! seed = 7
//! X = 1
//! T = 1
//! L = 3          # optional; maximized when absent
//! M = 2          # default 4
//! genus0 = false # true selects the projective line instead of [curve]
//!
//! [field]
//! p = 11
//! m = 1
//! modulus = []   # low-degree-first, required when m > 1
//!
//! [curve]
//! F = [3, 1, 0, 1]
//! H = []
//! g = 1
//!
//! [lsss]         # optional Chen–Cramer code audited alongside the scheme
//! T = 4
//! ```

use serde::{Deserialize, Serialize};

use crate::curve::{CurveSpec, HyperellipticCurve};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::funcspace::{FunctionElement, Geometry};
use crate::pir::PlanRequest;
use crate::poly::Poly;

fn default_m() -> usize {
    4
}

/// Function `(a + b·y)/(d·yᵉ)` given by coefficient lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    #[serde(default)]
    pub a: Vec<u32>,
    #[serde(default)]
    pub b: Vec<u32>,
    #[serde(default = "one_poly")]
    pub d: Vec<u32>,
    #[serde(default)]
    pub e: u8,
}

fn one_poly() -> Vec<u32> {
    vec![1]
}

impl FunctionSpec {
    pub fn build(&self, field: &Field) -> Result<FunctionElement> {
        FunctionElement::new(
            Poly::from_u32s(field, &self.a)?,
            Poly::from_u32s(field, &self.b)?,
            Poly::from_u32s(field, &self.d)?,
            self.e,
            field,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LsssSpec {
    #[serde(rename = "T")]
    pub t: usize,
    /// Defaults to `y`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<FunctionSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(rename = "X")]
    pub x: usize,
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(rename = "M", default = "default_m")]
    pub m: usize,
    #[serde(default)]
    pub genus0: bool,
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lsss: Option<LsssSpec>,
}

impl SchemeConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn geometry(&self) -> Result<Geometry> {
        let field = Field::new(&self.field)?;
        match (&self.curve, self.genus0) {
            (Some(_), true) => Err(Error::Config(
                "genus0 = true conflicts with a [curve] block".into(),
            )),
            (None, false) => Err(Error::Config(
                "give either genus0 = true or a [curve] block".into(),
            )),
            (None, true) => Ok(Geometry::Line(field)),
            (Some(c), false) => Ok(Geometry::Curve(HyperellipticCurve::from_spec(field, c)?)),
        }
    }

    pub fn plan_request(&self) -> Result<PlanRequest> {
        Ok(PlanRequest {
            geometry: self.geometry()?,
            x: self.x,
            t: self.t,
            l: self.l,
            m: self.m,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub field: FieldSpec,
    /// Inclusive range of `X = T` values.
    pub xt: [usize; 2],
    #[serde(default)]
    pub curves: Vec<CurveSpec>,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Validated curves, named by their `name` key or by position.
    pub fn curves(&self) -> Result<Vec<(String, HyperellipticCurve)>> {
        let field = Field::new(&self.field)?;
        self.curves
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let name = c.name.clone().unwrap_or_else(|| format!("curve{}", i + 1));
                Ok((name, HyperellipticCurve::from_spec(field, c)?))
            })
            .collect()
    }
}
