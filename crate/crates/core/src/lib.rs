//! Finite fields, hyperelliptic curves, algebraic-geometry codes, linear secret
//! sharing and X-secure T-private information retrieval built on them.

pub mod config;
pub mod curve;
pub mod error;
pub mod field;
pub mod funcspace;
pub mod lincode;
pub mod lsss;
pub mod matrix;
pub mod pir;
pub mod poly;
pub mod rng;
pub mod sweep;

pub use curve::{CurvePoint, CurveSpec, HyperellipticCurve};
pub use error::{Error, Result};
pub use field::{Fe, Field, FieldSpec};
pub use funcspace::{FunctionElement, Geometry};
pub use lincode::LinearCode;
pub use matrix::Matrix;
pub use pir::{PirScheme, PlanRequest};
pub use poly::Poly;
pub use rng::SeededRng;
