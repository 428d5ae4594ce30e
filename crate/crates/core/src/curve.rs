//! Hyperelliptic curves `y² + H(x)·y = F(x)` with a single point at infinity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::Poly;
use crate::rng::SeededRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvePoint {
    /// `P∞ = [0:1:0]`; orders before every affine point.
    Infinity,
    Affine {
        x: Fe,
        y: Fe,
    },
}

impl CurvePoint {
    pub fn affine(x: Fe, y: Fe) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn x(&self) -> Option<Fe> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(*x),
        }
    }

    pub fn coords(&self) -> Option<(Fe, Fe)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, y } => Some((*x, *y)),
        }
    }
}

impl std::fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "P∞"),
            CurvePoint::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

/// Curve coefficients as they appear in configuration files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    #[serde(rename = "F")]
    pub f: Vec<u32>,
    #[serde(rename = "H", default)]
    pub h: Vec<u32>,
    pub g: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub genus: usize,
    pub reason: Option<String>,
    /// Set when `deg H = g + 1`, which is tolerated but outside the usual model.
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperellipticCurve {
    field: Field,
    genus: usize,
    f: Poly,
    h: Poly,
}

impl HyperellipticCurve {
    /// Builds a curve without validating it; see [`HyperellipticCurve::validate`].
    pub fn from_parts(field: Field, genus: usize, f: Poly, h: Poly) -> Self {
        HyperellipticCurve { field, genus, f, h }
    }

    /// Builds and validates.
    pub fn new(field: Field, genus: usize, f: Poly, h: Poly) -> Result<Self> {
        let c = HyperellipticCurve::from_parts(field, genus, f, h);
        let report = c.validate();
        if report.valid {
            Ok(c)
        } else {
            Err(Error::InvalidCurve(report.reason.unwrap_or_default()))
        }
    }

    pub fn from_spec(field: Field, spec: &CurveSpec) -> Result<Self> {
        let f = Poly::from_u32s(&field, &spec.f)?;
        let h = Poly::from_u32s(&field, &spec.h)?;
        HyperellipticCurve::new(field, spec.g, f, h)
    }

    pub fn to_spec(&self) -> CurveSpec {
        CurveSpec {
            f: self.f.to_u32s(),
            h: self.h.to_u32s(),
            g: self.genus,
            name: None,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn validate(&self) -> ValidationReport {
        let g = self.genus;
        let fld = &self.field;
        let mut warnings = Vec::new();
        let fail = |reason: String, warnings: Vec<String>| ValidationReport {
            valid: false,
            genus: g,
            reason: Some(reason),
            warnings,
        };
        if g == 0 {
            return fail("genus must be at least 1".into(), warnings);
        }
        if self.f.degree() != Some(2 * g + 1) || !self.f.is_monic() {
            return fail(format!("F must be monic of degree {}", 2 * g + 1), warnings);
        }
        match self.h.degree() {
            Some(d) if d == g + 1 => warnings.push(format!("deg H = {d} exceeds g = {g}")),
            Some(d) if d > g + 1 => {
                return fail(format!("deg H = {d} exceeds g + 1 = {}", g + 1), warnings)
            }
            _ => {}
        }
        if fld.is_binary() {
            if self.h.is_zero() {
                return fail(
                    "H = 0 gives a singular curve in characteristic 2".into(),
                    warnings,
                );
            }
            // A singular affine point has H(x0) = 0, y0² = F(x0) and
            // H'(x0)·y0 = F'(x0). Squaring is injective in characteristic 2, so
            // this happens iff H and H'²·F + F'² share a root.
            let hd = self.h.derivative(fld);
            let fd = self.f.derivative(fld);
            let test = hd
                .mul(&hd, fld)
                .mul(&self.f, fld)
                .add(&fd.mul(&fd, fld), fld);
            let common = self.h.gcd(&test, fld);
            if common.degree().is_some_and(|d| d > 0) {
                return fail(
                    format!("singular point over a root of {}", common.display(fld)),
                    warnings,
                );
            }
        } else {
            if !self.h.is_zero() {
                return fail("odd characteristic requires H = 0".into(), warnings);
            }
            let common = self.f.gcd(&self.f.derivative(fld), fld);
            if common.degree().is_some_and(|d| d > 0) {
                return fail("F is not squarefree".into(), warnings);
            }
        }
        ValidationReport {
            valid: true,
            genus: g,
            reason: None,
            warnings,
        }
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match *p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                let fld = &self.field;
                let lhs = fld.add(fld.mul(y, y), fld.mul(self.h.eval(x, fld), y));
                lhs == self.f.eval(x, fld)
            }
        }
    }

    /// All rational points: `P∞` first, then affine points by `(x, y)`.
    pub fn points(&self) -> Vec<CurvePoint> {
        let fld = &self.field;
        let mut out = vec![CurvePoint::Infinity];
        for x in fld.elements() {
            let hx = self.h.eval(x, fld);
            let fx = self.f.eval(x, fld);
            for y in fld.elements() {
                if fld.add(fld.mul(y, y), fld.mul(hx, y)) == fx {
                    out.push(CurvePoint::affine(x, y));
                }
            }
        }
        out
    }

    pub fn point_count(&self) -> usize {
        self.points().len()
    }

    /// `ι(x, y) = (x, −y − H(x))`.
    pub fn involution(&self, p: &CurvePoint) -> Result<CurvePoint> {
        if !self.contains(p) {
            return Err(Error::PointNotOnCurve);
        }
        Ok(match *p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let fld = &self.field;
                CurvePoint::affine(x, fld.sub(fld.neg(y), self.h.eval(x, fld)))
            }
        })
    }

    /// Rational zeros of the function `y`.
    pub fn y_zero_points(&self) -> Vec<CurvePoint> {
        let fld = &self.field;
        fld.elements()
            .filter(|&x| self.f.eval(x, fld).is_zero())
            .map(|x| CurvePoint::affine(x, Fe::ZERO))
            .collect()
    }

    /// Degree of the zero divisor of `y`, counted over the algebraic closure.
    pub fn y_zero_divisor_degree(&self) -> usize {
        2 * self.genus + 1
    }

    /// x-coordinates of rational points (`Γ̄`), ascending.
    pub fn occupied_x(&self) -> Vec<Fe> {
        let mut xs: Vec<Fe> = self.points().iter().filter_map(|p| p.x()).collect();
        xs.dedup();
        xs
    }

    /// x-coordinates with no rational point above them (`Γ`), ascending.
    pub fn free_x(&self) -> Vec<Fe> {
        let occupied = self.occupied_x();
        self.field
            .elements()
            .filter(|x| occupied.binary_search(x).is_err())
            .collect()
    }

    /// `min(q + 1 + ⌊2g√q⌋, 2q + 1)`.
    pub fn point_bound(&self) -> usize {
        point_bound(self.field.order(), self.genus)
    }

    pub fn describe(&self) -> String {
        let fld = &self.field;
        if self.h.is_zero() {
            format!("y^2 = {}", self.f.display(fld))
        } else {
            format!(
                "y^2 + ({})*y = {}",
                self.h.display(fld),
                self.f.display(fld)
            )
        }
    }
}

/// Hasse–Weil bound `q + 1 + ⌊2g√q⌋`.
pub fn hasse_weil_bound(q: u32, g: usize) -> usize {
    let q = q as u64;
    let s = (4 * (g as u64) * (g as u64) * q).isqrt();
    (q + 1 + s) as usize
}

pub fn point_bound(q: u32, g: usize) -> usize {
    hasse_weil_bound(q, g).min(2 * q as usize + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchHit {
    pub curve: HyperellipticCurve,
    pub num_points: usize,
    pub num_y_zeros: usize,
}

/// Number of `y` with `y² + h·y = v`, tabulated once per field.
struct RootCounts {
    q: usize,
    counts: Vec<u8>,
}

impl RootCounts {
    fn new(fld: &Field, with_h: bool) -> Self {
        let q = fld.order() as usize;
        let hs = if with_h { q } else { 1 };
        let mut counts = vec![0u8; hs * q];
        for h in 0..hs {
            for y in fld.elements() {
                let v = fld.add(fld.mul(y, y), fld.mul(Fe(h as u32), y));
                counts[h * q + v.0 as usize] += 1;
            }
        }
        RootCounts { q, counts }
    }

    fn get(&self, h: Fe, v: Fe) -> usize {
        self.counts[h.0 as usize * self.q + v.0 as usize] as usize
    }
}

fn count_points_fast(c: &HyperellipticCurve, table: &RootCounts) -> (usize, usize) {
    let fld = &c.field;
    let mut n = 1;
    let mut zeros = 0;
    for x in fld.elements() {
        let fx = c.f.eval(x, fld);
        if fx.is_zero() {
            zeros += 1;
        }
        n += table.get(c.h.eval(x, fld), fx);
    }
    (n, zeros)
}

fn decode_index(mut idx: u64, q: u64, len: usize) -> Vec<Fe> {
    (0..len)
        .map(|_| {
            let d = idx % q;
            idx /= q;
            Fe(d as u32)
        })
        .collect()
}

/// Searches for valid genus-`g` curves with at least `min_points` rational points.
///
/// Odd characteristic uses `H = 0`; characteristic 2 ranges over nonzero `H`
/// with `deg H ≤ g`. `budget` bounds the number of candidate curves examined.
/// Results are sorted by point count descending, then by coefficients.
pub fn curve_search(
    field: &Field,
    g: usize,
    min_points: usize,
    budget: u64,
    mode: SearchMode,
    seed: u64,
) -> Result<Vec<SearchHit>> {
    if g == 0 {
        return Err(Error::InvalidParams("genus must be at least 1".into()));
    }
    if min_points > point_bound(field.order(), g) {
        return Ok(Vec::new());
    }
    let q = field.order() as u64;
    let binary = field.is_binary();
    let f_free = 2 * g + 1;
    let h_len = if binary { g + 1 } else { 0 };
    let total = (q as u128)
        .checked_pow((f_free + h_len) as u32)
        .unwrap_or(u128::MAX);
    let table = RootCounts::new(field, binary);

    let build = |coeffs: &[Fe]| -> Option<SearchHit> {
        let mut fc = coeffs[..f_free].to_vec();
        fc.push(Fe::ONE);
        let f = Poly::new(fc);
        let h = Poly::new(coeffs[f_free..].to_vec());
        let c = HyperellipticCurve::from_parts(*field, g, f, h);
        let (n, zeros) = count_points_fast(&c, &table);
        if n < min_points || !c.validate().valid {
            return None;
        }
        Some(SearchHit {
            curve: c,
            num_points: n,
            num_y_zeros: zeros,
        })
    };

    let candidates: Vec<Vec<Fe>> = match mode {
        SearchMode::Exhaustive => {
            if total > budget as u128 {
                return Err(Error::Guard {
                    what: "exhaustive curve search",
                    size: total,
                    limit: budget as u128,
                });
            }
            Vec::new()
        }
        SearchMode::Random => {
            let mut rng = SeededRng::new(seed);
            (0..budget)
                .map(|_| rng.elements(field, f_free + h_len))
                .collect()
        }
    };

    let mut hits: Vec<SearchHit> = match mode {
        SearchMode::Exhaustive => {
            let total = total as u64;
            let run = |i: u64| build(&decode_index(i, q, f_free + h_len));
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                (0..total).into_par_iter().filter_map(run).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..total).filter_map(run).collect()
            }
        }
        SearchMode::Random => {
            let mut v: Vec<SearchHit> = candidates.iter().filter_map(|c| build(c)).collect();
            v.dedup_by(|a, b| a.curve == b.curve);
            v
        }
    };
    hits.sort_by(|a, b| {
        b.num_points
            .cmp(&a.num_points)
            .then_with(|| a.curve.f.cmp(&b.curve.f))
            .then_with(|| a.curve.h.cmp(&b.curve.h))
    });
    hits.dedup_by(|a, b| a.curve == b.curve);
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn curve(p: u32, f: &[u32]) -> HyperellipticCurve {
        let fld = Field::prime(p).unwrap();
        let g = (f.len() - 2) / 2;
        HyperellipticCurve::from_parts(fld, g, Poly::from_u32s(&fld, f).unwrap(), Poly::zero())
    }

    pub(crate) fn ex3() -> HyperellipticCurve {
        curve(13, &[1, 2, 4, 0, 1, 1])
    }

    fn gf256() -> Field {
        Field::new(&FieldSpec::binary(8, vec![1, 0, 1, 1, 1, 0, 0, 0, 1])).unwrap()
    }

    pub(crate) fn curve_7_1() -> HyperellipticCurve {
        let f = gf256();
        let a = f.alpha();
        let c0 = f.add(f.pow(a, 6), f.pow(a, 4));
        HyperellipticCurve::new(f, 1, Poly::monomial(Fe::ONE, 3), Poly::new(vec![c0, a])).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ex3().validate().valid);
        let bad = curve(11, &[0, 0, 0, 1]);
        let r = bad.validate();
        assert!(!r.valid);
        assert!(r.reason.unwrap().contains("squarefree"));
        assert!(curve_7_1().validate().valid);
        // H = 0 in characteristic 2 is singular.
        let f = gf256();
        let c = HyperellipticCurve::from_parts(f, 1, Poly::monomial(Fe::ONE, 3), Poly::zero());
        assert!(!c.validate().valid);
        // y² + x·y = x³ + x² is singular at the origin.
        let f2 = Field::new(&FieldSpec::binary(3, vec![1, 1, 0, 1])).unwrap();
        let c = HyperellipticCurve::from_parts(
            f2,
            1,
            Poly::new(vec![Fe(0), Fe(0), Fe(1), Fe(1)]),
            Poly::x(),
        );
        assert!(!c.validate().valid);
    }

    #[test]
    fn degree_g_plus_one_h_is_flagged() {
        let f = gf256();
        let c = HyperellipticCurve::from_parts(
            f,
            1,
            Poly::new(vec![Fe(1), Fe(0), Fe(0), Fe(1)]),
            Poly::new(vec![Fe(1), Fe(0), Fe(1)]),
        );
        let r = c.validate();
        assert_eq!(r.warnings.len(), 1, "{r:?}");
    }

    #[test]
    fn point_counts() {
        assert_eq!(curve(11, &[3, 1, 0, 1]).point_count(), 18);
        assert_eq!(curve(11, &[4, 2, 0, 1]).point_count(), 17);
        assert_eq!(ex3().point_count(), 26);
        assert_eq!(curve_7_1().point_count(), 288);
    }

    #[test]
    fn y_zeros() {
        assert_eq!(
            ex3().y_zero_points(),
            vec![CurvePoint::affine(Fe(5), Fe(0))]
        );
        assert!(curve(11, &[4, 2, 0, 1]).y_zero_points().is_empty());
        assert_eq!(curve(11, &[3, 1, 0, 1]).y_zero_points().len(), 1);
        assert_eq!(ex3().y_zero_divisor_degree(), 5);
    }

    #[test]
    fn involution_properties() {
        let c = ex3();
        let q = CurvePoint::affine(Fe(5), Fe(0));
        assert_eq!(c.involution(&q).unwrap(), q);
        assert_eq!(
            c.involution(&CurvePoint::Infinity).unwrap(),
            CurvePoint::Infinity
        );
        assert_eq!(
            c.involution(&CurvePoint::affine(Fe(5), Fe(1))),
            Err(Error::PointNotOnCurve)
        );
        for c in [
            curve(11, &[3, 1, 0, 1]),
            curve(11, &[4, 2, 0, 1]),
            curve_7_1(),
        ] {
            let pts = c.points();
            for p in &pts {
                let ip = c.involution(p).unwrap();
                assert!(pts.contains(&ip));
                assert_eq!(c.involution(&ip).unwrap(), *p);
                assert_eq!(ip.x(), p.x());
            }
            let mut xs: Vec<Fe> = pts.iter().filter_map(|p| p.x()).collect();
            xs.sort();
            for w in xs.windows(3) {
                assert!(!(w[0] == w[1] && w[1] == w[2]), "fiber larger than 2");
            }
        }
    }

    #[test]
    fn canonical_order() {
        let pts = ex3().points();
        assert_eq!(pts[0], CurvePoint::Infinity);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let c = ex3();
        assert!(pts.iter().all(|p| c.contains(p)));
    }

    #[test]
    fn bounds() {
        assert_eq!(hasse_weil_bound(11, 1), 18);
        assert_eq!(hasse_weil_bound(13, 2), 28);
        assert_eq!(point_bound(2, 5), 5);
    }

    #[test]
    fn search_f11_genus1() {
        let f = Field::prime(11).unwrap();
        let hits = curve_search(&f, 1, 18, 1 << 20, SearchMode::Exhaustive, 0).unwrap();
        assert!(!hits.is_empty());
        assert!(hits.iter().all(|h| h.num_points == 18));
        assert!(hits
            .iter()
            .any(|h| h.curve.f().to_u32s() == vec![3, 1, 0, 1]));
        let none = curve_search(&f, 1, 2 * 11 + 2, 1 << 20, SearchMode::Exhaustive, 0).unwrap();
        assert!(none.is_empty());
        let guarded = curve_search(&f, 1, 1, 100, SearchMode::Exhaustive, 0);
        assert!(matches!(guarded, Err(Error::Guard { .. })));
    }

    #[test]
    fn search_counts_agree_with_enumeration() {
        let f = Field::prime(7).unwrap();
        let hits = curve_search(&f, 1, 0, 1 << 20, SearchMode::Exhaustive, 0).unwrap();
        for h in hits.iter().take(40) {
            assert_eq!(h.curve.point_count(), h.num_points);
            assert_eq!(h.curve.y_zero_points().len(), h.num_y_zeros);
        }
    }

    #[test]
    fn random_search_is_deterministic() {
        let f = Field::prime(61).unwrap();
        let a = curve_search(&f, 1, 60, 500, SearchMode::Random, 42).unwrap();
        let b = curve_search(&f, 1, 60, 500, SearchMode::Random, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].num_points >= w[1].num_points));
    }
}
