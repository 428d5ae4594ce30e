//! Dense univariate polynomials over F_q, low-degree-first.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// Polynomial with no trailing zero coefficients; the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(Vec<Fe>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Fe::ONE])
    }

    pub fn constant(c: Fe) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly(vec![Fe::ZERO, Fe::ONE])
    }

    pub fn monomial(c: Fe, deg: usize) -> Self {
        let mut v = vec![Fe::ZERO; deg + 1];
        v[deg] = c;
        Poly::new(v)
    }

    pub fn new(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    /// Builds from canonical integers, checking each against the field.
    pub fn from_u32s(field: &Field, coeffs: &[u32]) -> Result<Self> {
        let v = coeffs
            .iter()
            .map(|&c| field.elem(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(v))
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.0
    }

    pub fn to_u32s(&self) -> Vec<u32> {
        self.0.iter().map(|c| c.0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or `None` for the zero polynomial (degree −∞).
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fe {
        self.0.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.0.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fe::ONE
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new(
            (0..n)
                .map(|i| f.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new(
            (0..n)
                .map(|i| f.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly(self.0.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Fe, f: &Field) -> Poly {
        Poly::new(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Division with remainder: `self = quo * divisor + rem`, `deg rem < deg divisor`.
    pub fn divrem(&self, divisor: &Poly, f: &Field) -> Result<(Poly, Poly)> {
        let db = divisor.degree().ok_or(Error::ZeroDivisor)?;
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.0.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![Fe::ZERO; rem.len() - db];
        for i in (0..quo.len()).rev() {
            let c = f.mul(rem[i + db], lead_inv);
            if c.is_zero() {
                continue;
            }
            quo[i] = c;
            for (j, &d) in divisor.0.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, d));
            }
        }
        rem.truncate(db);
        Ok((Poly::new(quo), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Poly, f: &Field) -> Result<Poly> {
        Ok(self.divrem(divisor, f)?.1)
    }

    /// Horner evaluation.
    pub fn eval(&self, a: Fe, f: &Field) -> Fe {
        self.0
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, a), c))
    }

    /// Monic polynomial `∏ (x − r)` over the given multiset of roots.
    pub fn from_roots(roots: &[Fe], f: &Field) -> Poly {
        let mut acc = Poly::one();
        for &r in roots {
            acc = acc.mul(&Poly::new(vec![f.neg(r), Fe::ONE]), f);
        }
        acc
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
                .collect(),
        )
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = f.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv, f)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn pow(&self, e: usize, f: &Field) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self, f);
        }
        acc
    }

    pub fn display(&self, f: &Field) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coef = f.pretty(c);
            let coef = if f.degree() > 1 && coef.contains('+') {
                format!("({coef})")
            } else {
                coef
            };
            terms.push(match (i, c == Fe::ONE) {
                (0, _) => coef,
                (1, true) => "x".into(),
                (1, false) => format!("{coef}*x"),
                (_, true) => format!("x^{i}"),
                (_, false) => format!("{coef}*x^{i}"),
            });
        }
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::rng::SeededRng;

    fn f13() -> Field {
        Field::prime(13).unwrap()
    }

    fn p(f: &Field, c: &[u32]) -> Poly {
        Poly::from_u32s(f, c).unwrap()
    }

    #[test]
    fn long_division_step() {
        let f = f13();
        let (q, r) = p(&f, &[0, 0, 0, 1]).divrem(&p(&f, &[1, 0, 1]), &f).unwrap();
        assert_eq!(q, p(&f, &[0, 1]));
        assert_eq!(r, p(&f, &[0, 12]));
        let b = p(&f, &[3, 4, 5]);
        assert_eq!(b.divrem(&b, &f).unwrap(), (Poly::one(), Poly::zero()));
        assert_eq!(b.divrem(&Poly::zero(), &f), Err(Error::ZeroDivisor));
    }

    #[test]
    fn divrem_recomposes_random() {
        let f = f13();
        let mut rng = SeededRng::new(11);
        for _ in 0..200 {
            let a = Poly::new((0..=rng.below(11)).map(|_| rng.element(&f)).collect());
            let mut b = Poly::new((0..=rng.below(11)).map(|_| rng.element(&f)).collect());
            if b.is_zero() {
                b = Poly::one();
            }
            let (q, r) = a.divrem(&b, &f).unwrap();
            assert_eq!(q.mul(&b, &f).add(&r, &f), a);
            assert!(r.degree() < b.degree());
        }
    }

    #[test]
    fn roots_expand() {
        let f = f13();
        assert_eq!(Poly::from_roots(&[Fe(2), Fe(3)], &f), p(&f, &[6, 8, 1]));
        assert_eq!(Poly::from_roots(&[], &f), Poly::one());
        assert_eq!(Poly::from_roots(&[Fe(0)], &f), Poly::x());
        assert_eq!(p(&f, &[6, 8, 1]).eval(Fe(2), &f), Fe::ZERO);
        assert_eq!(Poly::one().eval(Fe(7), &f), Fe::ONE);
    }

    #[test]
    fn roots_vanish_exactly_gf256() {
        let f = Field::new(&FieldSpec::binary(8, vec![1, 0, 1, 1, 1, 0, 0, 0, 1])).unwrap();
        let roots = [Fe(3), Fe(17), Fe(200), Fe(0)];
        let h = Poly::from_roots(&roots, &f);
        assert_eq!(h.degree(), Some(4));
        for a in f.elements() {
            assert_eq!(h.eval(a, &f).is_zero(), roots.contains(&a));
        }
    }

    #[test]
    fn evaluation_is_multiplicative_gf256() {
        let f = Field::new(&FieldSpec::binary(8, vec![1, 0, 1, 1, 1, 0, 0, 0, 1])).unwrap();
        let mut rng = SeededRng::new(5);
        for _ in 0..100 {
            let a = Poly::new((0..6).map(|_| rng.element(&f)).collect());
            let b = Poly::new((0..4).map(|_| rng.element(&f)).collect());
            let x = rng.element(&f);
            assert_eq!(
                a.mul(&b, &f).eval(x, &f),
                f.mul(a.eval(x, &f), b.eval(x, &f))
            );
            if !a.is_zero() && !b.is_zero() {
                assert_eq!(
                    a.mul(&b, &f).degree().unwrap(),
                    a.degree().unwrap() + b.degree().unwrap()
                );
            }
        }
    }

    #[test]
    fn gcd_and_derivative() {
        let f = Field::prime(11).unwrap();
        let x3 = p(&f, &[0, 0, 0, 1]);
        assert_eq!(x3.derivative(&f), p(&f, &[0, 0, 3]));
        assert_eq!(x3.gcd(&x3.derivative(&f), &f), p(&f, &[0, 0, 1]));
        let a = Poly::from_roots(&[Fe(1), Fe(2)], &f);
        let b = Poly::from_roots(&[Fe(2), Fe(5)], &f);
        assert_eq!(a.gcd(&b, &f), Poly::from_roots(&[Fe(2)], &f));
    }
}
