//! Browser bindings: rate tables, curve point plots and a full retrieval round.
//!
//! Each export takes plain strings and numbers and returns JSON. The `*_json`
//! functions do the work and are callable natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use agpir::config::{SchemeConfig, SweepConfig};
use agpir::pir::plan_scheme;
use agpir::sweep;
use agpir::{CurvePoint, Field, FieldSpec, HyperellipticCurve, Poly, SeededRng};

#[derive(Serialize)]
struct SweepPoint {
    xt: usize,
    construction: String,
    genus: usize,
    l: usize,
    n: usize,
    rate: f64,
}

#[derive(Serialize)]
struct CurvePlot {
    description: String,
    q: u32,
    genus: usize,
    valid: bool,
    reason: Option<String>,
    points: Vec<[u32; 2]>,
    count: usize,
    bound: usize,
}

#[derive(Serialize)]
struct RoundTrip {
    geometry: String,
    servers: usize,
    l: usize,
    m: usize,
    rate: String,
    points: Vec<[u32; 2]>,
    files: Vec<Vec<u32>>,
    queries: Vec<u32>,
    responses: Vec<u32>,
    decoded: Vec<u32>,
    mu: usize,
    ok: bool,
}

fn parse_list(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u32>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn coords(p: &CurvePoint) -> [u32; 2] {
    p.coords().map(|(x, y)| [x.0, y.0]).unwrap_or([0, 0])
}

/// Sweep rows for a TOML sweep config.
pub fn rate_sweep_json(config: &str) -> Result<String, String> {
    let cfg = SweepConfig::parse(config).map_err(|e| e.to_string())?;
    let field = Field::new(&cfg.field).map_err(|e| e.to_string())?;
    let curves = cfg.curves().map_err(|e| e.to_string())?;
    if cfg.xt[1] > 2000 {
        return Err("xt range too large for the page".into());
    }
    let rows: Vec<SweepPoint> = sweep::rate_sweep(&field, &curves, cfg.xt[0]..=cfg.xt[1])
        .into_iter()
        .map(|r| SweepPoint {
            rate: r.rate().value(),
            xt: r.xt,
            construction: r.construction,
            genus: r.genus,
            l: r.l,
            n: r.n,
        })
        .collect();
    to_json(&rows)
}

/// Affine points of `y² + H·y = F` over `F_p`, with validity and the point bound.
pub fn curve_points_json(p: u32, f: &str, h: &str, genus: usize) -> Result<String, String> {
    let field = Field::new(&FieldSpec::prime(p)).map_err(|e| e.to_string())?;
    if field.order() > 1024 {
        return Err("plots are limited to q ≤ 1024".into());
    }
    let fp = Poly::from_u32s(&field, &parse_list(f)?).map_err(|e| e.to_string())?;
    let hp = Poly::from_u32s(&field, &parse_list(h)?).map_err(|e| e.to_string())?;
    let c = HyperellipticCurve::from_parts(field, genus, fp, hp);
    let report = c.validate();
    let points: Vec<[u32; 2]> = if report.valid {
        c.points()
            .iter()
            .filter(|p| p.coords().is_some())
            .map(coords)
            .collect()
    } else {
        Vec::new()
    };
    to_json(&CurvePlot {
        description: c.describe(),
        q: p,
        genus,
        valid: report.valid,
        reason: report.reason,
        count: if report.valid { c.point_count() } else { 0 },
        bound: c.point_bound(),
        points,
    })
}

/// Plans the scheme in `config`, stores random files and retrieves file `mu` (1-based).
pub fn pir_round_trip_json(config: &str, mu: usize, seed: u64) -> Result<String, String> {
    let cfg = SchemeConfig::parse(config).map_err(|e| e.to_string())?;
    let scheme =
        plan_scheme(&cfg.plan_request().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let p = scheme.params();
    if mu == 0 || mu > p.m {
        return Err(format!("file index must be in 1..={}", p.m));
    }
    let f = *scheme.field();
    let mut rng = SeededRng::new(seed);
    let files: Vec<Vec<_>> = (0..p.m).map(|_| rng.elements(&f, p.l)).collect();
    let tr = scheme
        .round_trip(&files, mu - 1, &mut rng)
        .map_err(|e| e.to_string())?;
    let geometry = match &p.geometry {
        agpir::Geometry::Line(_) => format!("projective line over F_{}", f.order()),
        agpir::Geometry::Curve(c) => format!("genus {} curve {}", c.genus(), c.describe()),
    };
    let vals = |v: &[agpir::Fe]| v.iter().map(|a| a.0).collect::<Vec<_>>();
    to_json(&RoundTrip {
        geometry,
        servers: p.n,
        l: p.l,
        m: p.m,
        rate: scheme.rate().to_string(),
        points: scheme.points().iter().map(coords).collect(),
        files: files.iter().map(|v| vals(v)).collect(),
        // First file's first fragment: what each server sees of the query.
        queries: vals(&tr.queries.queries[0][0]),
        responses: vals(&tr.responses),
        decoded: vals(&tr.decoded),
        ok: tr.decoded == files[mu - 1],
        mu,
    })
}

#[wasm_bindgen]
pub fn rate_sweep(config: &str) -> Result<String, JsError> {
    rate_sweep_json(config).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn curve_points(p: u32, f: &str, h: &str, genus: usize) -> Result<String, JsError> {
    curve_points_json(p, f, h, genus).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn pir_round_trip(config: &str, mu: usize, seed: u64) -> Result<String, JsError> {
    pir_round_trip_json(config, mu, seed).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_json_rows() {
        let cfg =
            "xt = [1, 3]\n[field]\np = 11\n[[curves]]\nname = \"e18\"\nF = [3,1,0,1]\ng = 1\n";
        let v: serde_json::Value = serde_json::from_str(&rate_sweep_json(cfg).unwrap()).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[1]["construction"], "e18");
        assert_eq!(
            (rows[1]["l"].as_u64(), rows[1]["n"].as_u64()),
            (Some(3), Some(13))
        );
    }

    #[test]
    fn curve_plot() {
        let v: serde_json::Value =
            serde_json::from_str(&curve_points_json(11, "3,1,0,1", "", 1).unwrap()).unwrap();
        assert_eq!(v["count"], 18);
        assert_eq!(v["points"].as_array().unwrap().len(), 17);
        let bad: serde_json::Value =
            serde_json::from_str(&curve_points_json(11, "0,0,0,1", "", 1).unwrap()).unwrap();
        assert_eq!(bad["valid"], false);
        assert!(curve_points_json(11, "1,x", "", 1).is_err());
    }

    #[test]
    fn round_trip() {
        let cfg = "seed = 1\nX = 1\nT = 1\nM = 2\n[field]\np = 11\n[curve]\nF = [4,2,0,1]\ng = 1\n";
        let v: serde_json::Value =
            serde_json::from_str(&pir_round_trip_json(cfg, 2, 7).unwrap()).unwrap();
        assert_eq!(v["ok"], true);
        assert_eq!(v["servers"], 15);
        assert_eq!(v["decoded"], v["files"][1]);
        assert!(pir_round_trip_json(cfg, 3, 7).is_err());
    }
}
