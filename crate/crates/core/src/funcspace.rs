//! Functions `(a(x) + b(x)·y) / (d(x)·yᵉ)` on the projective line or a
//! hyperelliptic curve, Riemann–Roch monomial bases, and the bases used by the
//! retrieval schemes.

use crate::curve::{CurvePoint, HyperellipticCurve};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::matrix::Matrix;
use crate::poly::Poly;

/// Where functions live: the projective line (genus 0) or a hyperelliptic curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Geometry {
    Line(Field),
    Curve(HyperellipticCurve),
}

impl Geometry {
    pub fn field(&self) -> &Field {
        match self {
            Geometry::Line(f) => f,
            Geometry::Curve(c) => c.field(),
        }
    }

    pub fn genus(&self) -> usize {
        match self {
            Geometry::Line(_) => 0,
            Geometry::Curve(c) => c.genus(),
        }
    }

    pub fn curve(&self) -> Option<&HyperellipticCurve> {
        match self {
            Geometry::Line(_) => None,
            Geometry::Curve(c) => Some(c),
        }
    }

    /// Affine rational points. On the line these are `(x, 0)` for every `x`.
    pub fn affine_points(&self) -> Vec<CurvePoint> {
        match self {
            Geometry::Line(f) => f
                .elements()
                .map(|x| CurvePoint::affine(x, Fe::ZERO))
                .collect(),
            Geometry::Curve(c) => c.points().into_iter().skip(1).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionElement {
    a: Poly,
    b: Poly,
    d: Poly,
    e: u8,
}

impl FunctionElement {
    pub fn poly(p: Poly) -> Self {
        FunctionElement {
            a: p,
            b: Poly::zero(),
            d: Poly::one(),
            e: 0,
        }
    }

    pub fn one() -> Self {
        Self::poly(Poly::one())
    }

    pub fn x() -> Self {
        Self::poly(Poly::x())
    }

    pub fn y() -> Self {
        FunctionElement {
            a: Poly::zero(),
            b: Poly::one(),
            d: Poly::one(),
            e: 0,
        }
    }

    pub fn inv_y() -> Self {
        FunctionElement {
            a: Poly::one(),
            b: Poly::zero(),
            d: Poly::one(),
            e: 1,
        }
    }

    /// Builds and normalizes; `d` must be nonzero and `e ≤ 1`.
    pub fn new(a: Poly, b: Poly, d: Poly, e: u8, f: &Field) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if e > 1 {
            return Err(Error::InvalidParams(
                "denominator power of y must be 0 or 1".into(),
            ));
        }
        Ok(FunctionElement { a, b, d, e }.reduced(f))
    }

    pub fn numerator(&self) -> (&Poly, &Poly) {
        (&self.a, &self.b)
    }

    pub fn denominator(&self) -> &Poly {
        &self.d
    }

    pub fn y_power(&self) -> u8 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, c: Fe, f: &Field) -> Self {
        FunctionElement {
            a: self.a.scale(c, f),
            b: self.b.scale(c, f),
            d: self.d.clone(),
            e: self.e,
        }
        .reduced(f)
    }

    fn reduced(mut self, f: &Field) -> Self {
        if self.is_zero() {
            return FunctionElement::poly(Poly::zero());
        }
        let g = self.a.gcd(&self.b, f).gcd(&self.d, f);
        if g.degree().is_some_and(|d| d > 0) {
            self.a = self.a.divrem(&g, f).expect("gcd divides").0;
            self.b = self.b.divrem(&g, f).expect("gcd divides").0;
            self.d = self.d.divrem(&g, f).expect("gcd divides").0;
        }
        let lead = f.inv(self.d.leading()).expect("nonzero denominator");
        if lead != Fe::ONE {
            self.a = self.a.scale(lead, f);
            self.b = self.b.scale(lead, f);
            self.d = self.d.scale(lead, f);
        }
        self
    }

    /// Product, with `y² = F − H·y` and `1/y = (y + H)/F`.
    pub fn mul(&self, other: &Self, geom: &Geometry) -> Self {
        let f = geom.field();
        let Some(curve) = geom.curve() else {
            return FunctionElement {
                a: self.a.mul(&other.a, f),
                b: Poly::zero(),
                d: self.d.mul(&other.d, f),
                e: 0,
            }
            .reduced(f);
        };
        let (cf, ch) = (curve.f(), curve.h());
        let (a, b, d) = mul_numerators(&self.a, &self.b, &other.a, &other.b, cf, ch, f);
        let mut d = d.mul(&self.d, f).mul(&other.d, f);
        let (mut a, mut b) = (a, b);
        let mut e = self.e + other.e;
        if e == 2 {
            let (na, nb, _) = mul_numerators(&a, &b, ch, &Poly::one(), cf, ch, f);
            a = na;
            b = nb;
            d = d.mul(cf, f);
            e = 1;
        }
        if e == 1 {
            // (a + b·y)/y = b + (a/F)·(y + H) when F divides a.
            let (c, r) = a.divrem(cf, f).expect("F is nonzero");
            if r.is_zero() {
                a = b.add(&c.mul(ch, f), f);
                b = c;
                e = 0;
            }
        }
        FunctionElement { a, b, d, e }.reduced(f)
    }

    pub fn add(&self, other: &Self, geom: &Geometry) -> Self {
        let f = geom.field();
        // Lift both to denominator d1·d2·y^max(e).
        let lift = |u: &Self, other_d: &Poly, target_e: u8| -> (Poly, Poly) {
            let (mut a, mut b) = (u.a.mul(other_d, f), u.b.mul(other_d, f));
            if u.e < target_e {
                let curve = geom.curve().expect("y only occurs on a curve");
                let (na, nb, _) =
                    mul_numerators(&a, &b, &Poly::zero(), &Poly::one(), curve.f(), curve.h(), f);
                a = na;
                b = nb;
            }
            (a, b)
        };
        let e = self.e.max(other.e);
        let (a1, b1) = lift(self, &other.d, e);
        let (a2, b2) = lift(other, &self.d, e);
        FunctionElement {
            a: a1.add(&a2, f),
            b: b1.add(&b2, f),
            d: self.d.mul(&other.d, f),
            e,
        }
        .reduced(f)
    }

    /// Value at an affine point; errors if the point is a pole.
    pub fn eval(&self, p: &CurvePoint, f: &Field) -> Result<Fe> {
        let (x, y) = p
            .coords()
            .ok_or_else(|| Error::Pole("evaluation at the point at infinity".into()))?;
        let den = self.d.eval(x, f);
        let den = if self.e == 1 { f.mul(den, y) } else { den };
        if den.is_zero() {
            return Err(Error::Pole(format!("denominator vanishes at {p}")));
        }
        let num = if self.b.is_zero() {
            self.a.eval(x, f)
        } else {
            f.add(self.a.eval(x, f), f.mul(self.b.eval(x, f), y))
        };
        f.div(num, den)
    }

    /// `a;b;d;e` with comma-separated low-degree-first coefficients.
    pub fn to_csv_row(&self) -> String {
        let join = |p: &Poly| {
            p.to_u32s()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "{};{};{};{}",
            join(&self.a),
            join(&self.b),
            join(&self.d),
            self.e
        )
    }

    pub fn display(&self, f: &Field) -> String {
        let num = match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => self.a.display(f),
            (true, false) => format!("({})*y", self.b.display(f)),
            (false, false) => format!("{} + ({})*y", self.a.display(f), self.b.display(f)),
        };
        let mut den = if self.d == Poly::one() {
            String::new()
        } else {
            format!("({})", self.d.display(f))
        };
        if self.e == 1 {
            den = if den.is_empty() {
                "y".into()
            } else {
                format!("{den}*y")
            };
        }
        if den.is_empty() {
            num
        } else {
            format!("({num})/{den}")
        }
    }
}

/// `(a1 + b1·y)(a2 + b2·y)` reduced to `a + b·y`; third value is the unit denominator.
fn mul_numerators(
    a1: &Poly,
    b1: &Poly,
    a2: &Poly,
    b2: &Poly,
    cf: &Poly,
    ch: &Poly,
    f: &Field,
) -> (Poly, Poly, Poly) {
    let bb = b1.mul(b2, f);
    let a = a1.mul(a2, f).add(&bb.mul(cf, f), f);
    let b = a1.mul(b2, f).add(&a2.mul(b1, f), f).sub(&bb.mul(ch, f), f);
    (a, b, Poly::one())
}

pub fn ff_mul(u: &FunctionElement, v: &FunctionElement, geom: &Geometry) -> FunctionElement {
    u.mul(v, geom)
}

pub fn ff_eval(u: &FunctionElement, p: &CurvePoint, f: &Field) -> Result<Fe> {
    u.eval(p, f)
}

/// Evaluation matrix: one row per function, one column per point.
pub fn eval_matrix(funcs: &[FunctionElement], points: &[CurvePoint], f: &Field) -> Result<Matrix> {
    let rows = funcs
        .iter()
        .map(|u| {
            points
                .iter()
                .map(|p| u.eval(p, f))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows, points.len()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RRBasis {
    pub m: usize,
    pub elements: Vec<FunctionElement>,
}

impl RRBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// Monomial basis of `L(m·P∞)`: `x^i y^j` with `2i + (2g+1)j ≤ m`, `j` first.
/// On the line this is `{x^i : i ≤ m}`.
pub fn rr_basis(geom: &Geometry, m: usize) -> RRBasis {
    let mut elements = Vec::new();
    match geom {
        Geometry::Line(_) => {
            elements.extend((0..=m).map(|i| FunctionElement::poly(Poly::monomial(Fe::ONE, i))));
        }
        Geometry::Curve(c) => {
            let g = c.genus();
            for j in 0..=1usize {
                let used = (2 * g + 1) * j;
                if used > m {
                    break;
                }
                for i in 0..=(m - used) / 2 {
                    let mono = Poly::monomial(Fe::ONE, i);
                    elements.push(if j == 0 {
                        FunctionElement::poly(mono)
                    } else {
                        FunctionElement {
                            a: Poly::zero(),
                            b: mono,
                            d: Poly::one(),
                            e: 0,
                        }
                    });
                }
            }
        }
    }
    RRBasis { m, elements }
}

/// Information-space basis `h_ℓ`, alignment polynomial `h`, and the quotients
/// `h/h_ℓ` that multiply storage noise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsaBasis {
    pub h_list: Vec<FunctionElement>,
    pub h: Poly,
    pub f_noise_list: Vec<FunctionElement>,
    pub gammas: Vec<Fe>,
    pub delta: usize,
}

impl CsaBasis {
    pub fn len(&self) -> usize {
        self.h_list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h_list.is_empty()
    }
}

fn check_distinct(gammas: &[Fe]) -> Result<()> {
    let mut s = gammas.to_vec();
    s.sort();
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParams(
            "evaluation anchors must be distinct".into(),
        ));
    }
    Ok(())
}

fn linear(g: Fe, f: &Field) -> Poly {
    Poly::new(vec![f.neg(g), Fe::ONE])
}

pub fn csa_basis_genus0(field: &Field, l: usize, gammas: &[Fe]) -> Result<CsaBasis> {
    if gammas.len() != l || l == 0 {
        return Err(Error::InvalidParams(format!(
            "need exactly L = {l} anchors, got {}",
            gammas.len()
        )));
    }
    check_distinct(gammas)?;
    let h = Poly::from_roots(gammas, field);
    let h_list = (0..l)
        .map(|i| {
            let others: Vec<Fe> = gammas
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &g)| g)
                .collect();
            FunctionElement::poly(Poly::from_roots(&others, field))
        })
        .collect();
    let f_noise_list = gammas
        .iter()
        .map(|&g| FunctionElement::poly(linear(g, field)))
        .collect();
    Ok(CsaBasis {
        h_list,
        h,
        f_noise_list,
        gammas: gammas.to_vec(),
        delta: 1,
    })
}

pub fn csa_basis_hyper(curve: &HyperellipticCurve, l: usize, gammas: &[Fe]) -> Result<CsaBasis> {
    let f = curve.field();
    let g = curve.genus();
    if l < g || !(l - g).is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "L = {l} must satisfy L ≥ g and L ≡ g (mod 2) for g = {g}"
        )));
    }
    let jn = (l + g) / 2;
    if gammas.len() != jn {
        return Err(Error::InvalidParams(format!(
            "need J = {jn} anchors for L = {l}, got {}",
            gammas.len()
        )));
    }
    check_distinct(gammas)?;
    if let Some(bad) = gammas.iter().find(|&&x| curve.f().eval(x, f).is_zero()) {
        return Err(Error::InvalidParams(format!("F vanishes at anchor {bad}")));
    }
    let h = Poly::from_roots(gammas, f);
    let prod_except = |range: std::ops::Range<usize>, skip: usize| {
        let roots: Vec<Fe> = range.filter(|&k| k != skip).map(|k| gammas[k]).collect();
        Poly::from_roots(&roots, f)
    };
    let tail = Poly::from_roots(&gammas[jn - g..], f);
    let mut h_list = Vec::with_capacity(l);
    let mut f_noise_list = Vec::with_capacity(l);
    for j in 0..jn {
        h_list.push(FunctionElement::poly(prod_except(0..jn, j)));
        f_noise_list.push(FunctionElement::poly(linear(gammas[j], f)));
    }
    for j in 0..jn - g {
        h_list.push(FunctionElement {
            a: Poly::zero(),
            b: prod_except(0..jn - g, j),
            d: Poly::one(),
            e: 0,
        });
        f_noise_list.push(FunctionElement {
            a: linear(gammas[j], f).mul(&tail, f),
            b: Poly::zero(),
            d: Poly::one(),
            e: 1,
        });
    }
    Ok(CsaBasis {
        h_list,
        h,
        f_noise_list,
        gammas: gammas.to_vec(),
        delta: 2 * g + 3,
    })
}

/// Noise-space basis: `{h·xⁱ : i < X+T}` on the line, otherwise
/// `{h·u/y : u ∈ L((X+T+6g+1)P∞)}` of size `X+T+5g+2`.
pub fn noise_basis(geom: &Geometry, x: usize, t: usize, csa: &CsaBasis) -> Vec<FunctionElement> {
    let f = geom.field();
    let h = FunctionElement::poly(csa.h.clone());
    match geom {
        Geometry::Line(_) => (0..x + t)
            .map(|i| FunctionElement::poly(csa.h.mul(&Poly::monomial(Fe::ONE, i), f)))
            .collect(),
        Geometry::Curve(c) => {
            let hy = h.mul(&FunctionElement::inv_y(), geom);
            rr_basis(geom, x + t + 6 * c.genus() + 1)
                .elements
                .iter()
                .map(|u| hy.mul(u, geom))
                .collect()
        }
    }
}

/// One function per line in `a;b;d;e` form, preceded by a header.
pub fn basis_csv(funcs: &[FunctionElement]) -> String {
    let mut s = String::from("a;b;d;e\n");
    for u in funcs {
        s.push_str(&u.to_csv_row());
        s.push('\n');
    }
    s
}
