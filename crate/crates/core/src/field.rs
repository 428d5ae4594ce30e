//! Exact arithmetic in F_q for q = p prime or q = 2^m.
//!
//! Elements are canonical integers in `[0, q)`. For prime fields this is the
//! residue; for binary extensions bit `i` holds the coefficient of `α^i` in the
//! residue polynomial modulo the configured modulus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_Q: u64 = 1 << 20;

/// Canonical representative of a field element.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for Fe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Field description as it appears in configuration files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(rename = "p")]
    pub characteristic: u32,
    #[serde(rename = "m", default = "one")]
    pub extension_degree: u32,
    /// Coefficients low-degree-first, length `m + 1`. Required iff `m > 1`.
    #[serde(default)]
    pub modulus: Vec<u32>,
}

fn one() -> u32 {
    1
}

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        FieldSpec {
            characteristic: p,
            extension_degree: 1,
            modulus: Vec::new(),
        }
    }

    pub fn binary(m: u32, modulus: Vec<u32>) -> Self {
        FieldSpec {
            characteristic: 2,
            extension_degree: m,
            modulus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow(u64),
}

/// Immutable handle for F_q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    /// Modulus bitmask including the leading term (binary extensions only).
    modulus: u32,
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn gf2_degree(a: u32) -> i32 {
    31 - a.leading_zeros() as i32
}

/// Remainder of carry-less division of `a` by `b` (both GF(2)[x] bitmasks).
fn gf2_rem(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros() as i32;
    while a != 0 {
        let da = 63 - a.leading_zeros() as i32;
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

fn gf2_irreducible(modulus: u32, m: u32) -> bool {
    // Trial division by every polynomial of degree 1..=m/2.
    for d in 1..=m / 2 {
        for low in 0..(1u32 << d) {
            let divisor = (1u32 << d) | low;
            if gf2_rem(modulus as u64, divisor as u64) == 0 {
                return false;
            }
        }
    }
    true
}

impl Field {
    pub fn new(spec: &FieldSpec) -> Result<Self> {
        let p = spec.characteristic;
        let m = spec.extension_degree;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidModulus(
                "extension degree must be positive".into(),
            ));
        }
        let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q > MAX_Q {
            return Err(Error::FieldSize(q));
        }
        if m == 1 {
            return Ok(Field {
                p,
                m,
                q: q as u32,
                modulus: 0,
            });
        }
        if p != 2 {
            return Err(Error::UnsupportedExtension(p));
        }
        if spec.modulus.len() != m as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                m + 1,
                spec.modulus.len()
            )));
        }
        let mut mask = 0u32;
        for (i, &c) in spec.modulus.iter().enumerate() {
            if c > 1 {
                return Err(Error::InvalidModulus(format!(
                    "coefficient {c} is not in F_2"
                )));
            }
            mask |= c << i;
        }
        if mask >> m != 1 {
            return Err(Error::InvalidModulus(
                "modulus must be monic of degree m".into(),
            ));
        }
        if !gf2_irreducible(mask, m) {
            return Err(Error::ReducibleModulus);
        }
        Ok(Field {
            p,
            m,
            q: q as u32,
            modulus: mask,
        })
    }

    pub fn prime(p: u32) -> Result<Self> {
        Field::new(&FieldSpec::prime(p))
    }

    pub fn spec(&self) -> FieldSpec {
        let modulus = if self.m > 1 {
            (0..=self.m).map(|i| (self.modulus >> i) & 1).collect()
        } else {
            Vec::new()
        };
        FieldSpec {
            characteristic: self.p,
            extension_degree: self.m,
            modulus,
        }
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn is_binary(&self) -> bool {
        self.p == 2
    }

    /// Checked conversion from a canonical integer.
    pub fn elem(&self, v: u32) -> Result<Fe> {
        if v < self.q {
            Ok(Fe(v))
        } else {
            Err(Error::ForeignElement {
                value: v,
                q: self.q,
            })
        }
    }

    /// Image of an integer under Z -> F_q.
    pub fn from_int(&self, v: i64) -> Fe {
        let p = self.p as i64;
        Fe(v.rem_euclid(p) as u32)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    /// The generator `α` of a binary extension (the class of `x`).
    pub fn alpha(&self) -> Fe {
        if self.m > 1 {
            Fe(2)
        } else {
            Fe(1)
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            Fe(a.0 ^ b.0)
        } else {
            let s = a.0 + b.0;
            Fe(if s >= self.p { s - self.p } else { s })
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 || a.0 == 0 {
            a
        } else {
            Fe(self.p - a.0)
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if self.m == 1 {
            Fe(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
        } else {
            let mut x = a.0;
            let mut y = b.0;
            let mut acc = 0u32;
            let top = 1u32 << (self.m - 1);
            while y != 0 {
                if y & 1 == 1 {
                    acc ^= x;
                }
                y >>= 1;
                let carry = x & top != 0;
                x <<= 1;
                if carry {
                    x ^= self.modulus;
                }
            }
            Fe(acc)
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        if self.m == 1 {
            let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
            let (mut t0, mut t1) = (0i64, 1i64);
            while r1 != 0 {
                let quo = r0 / r1;
                (r0, r1) = (r1, r0 - quo * r1);
                (t0, t1) = (t1, t0 - quo * t1);
            }
            Ok(self.from_int(t0))
        } else {
            // Extended Euclid over GF(2)[x] on bitmasks.
            let (mut r0, mut r1) = (self.modulus, a.0);
            let (mut t0, mut t1) = (0u32, 1u32);
            while r1 != 0 {
                let mut quo = 0u32;
                let mut rem = r0;
                let d1 = gf2_degree(r1);
                while rem != 0 && gf2_degree(rem) >= d1 {
                    let shift = gf2_degree(rem) - d1;
                    quo ^= 1 << shift;
                    rem ^= r1 << shift;
                }
                (r0, r1) = (r1, rem);
                let prod = self.clmul_mod(quo, t1);
                (t0, t1) = (t1, t0 ^ prod);
            }
            Ok(Fe(gf2_rem(t0 as u64, self.modulus as u64) as u32))
        }
    }

    fn clmul_mod(&self, a: u32, b: u32) -> u32 {
        // Bezout coefficients only matter modulo the field modulus.
        let mut acc = 0u64;
        for i in 0..32 {
            if (b >> i) & 1 == 1 {
                acc ^= (a as u64) << i;
            }
        }
        gf2_rem(acc, self.modulus as u64) as u32
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Checked binary/unary operation on canonical representatives.
    pub fn arith(&self, a: Fe, b: Fe, op: FieldOp) -> Result<Fe> {
        self.elem(a.0)?;
        if matches!(op, FieldOp::Add | FieldOp::Sub | FieldOp::Mul) {
            self.elem(b.0)?;
        }
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Inv => self.inv(a)?,
            FieldOp::Pow(e) => self.pow(a, e),
        })
    }

    /// Renders an element; binary-extension elements as polynomials in α.
    pub fn pretty(&self, a: Fe) -> String {
        if self.m == 1 {
            return a.0.to_string();
        }
        if a.0 == 0 {
            return "0".into();
        }
        let mut terms = Vec::new();
        for i in (0..self.m).rev() {
            if (a.0 >> i) & 1 == 1 {
                terms.push(match i {
                    0 => "1".to_string(),
                    1 => "α".to_string(),
                    _ => format!("α^{i}"),
                });
            }
        }
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf256() -> Field {
        Field::new(&FieldSpec::binary(8, vec![1, 0, 1, 1, 1, 0, 0, 0, 1])).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(gf256().order(), 256);
        assert_eq!(Field::prime(13).unwrap().order(), 13);
        assert_eq!(
            Field::new(&FieldSpec::binary(8, vec![1, 0, 0, 0, 0, 0, 0, 0, 1])),
            Err(Error::ReducibleModulus)
        );
        assert_eq!(Field::prime(15), Err(Error::NotPrime(15)));
        assert!(matches!(
            Field::new(&FieldSpec {
                characteristic: 3,
                extension_degree: 2,
                modulus: vec![1, 0, 1]
            }),
            Err(Error::UnsupportedExtension(3))
        ));
        assert!(matches!(
            Field::new(&FieldSpec::binary(21, vec![0; 22])),
            Err(Error::FieldSize(_))
        ));
    }

    #[test]
    fn alpha_times_alpha7() {
        let f = gf256();
        let a = f.alpha();
        let a7 = f.pow(a, 7);
        // α^8 = α^4 + α^3 + α^2 + 1
        assert_eq!(f.mul(a, a7), Fe(0b0001_1101));
    }

    #[test]
    fn inverses_match_brute_force_f13() {
        let f = Field::prime(13).unwrap();
        assert_eq!(f.inv(Fe::ONE).unwrap(), Fe::ONE);
        for a in 1..13 {
            let brute = (1..13).find(|&b| (a * b) % 13 == 1).unwrap();
            assert_eq!(f.inv(Fe(a)).unwrap(), Fe(brute));
        }
        assert_eq!(f.inv(Fe::ZERO), Err(Error::ZeroInverse));
    }

    #[test]
    fn axioms_small_fields_exhaustive() {
        let fields = [
            Field::prime(2).unwrap(),
            Field::prime(5).unwrap(),
            Field::prime(13).unwrap(),
            Field::new(&FieldSpec::binary(4, vec![1, 1, 0, 0, 1])).unwrap(),
        ];
        for f in fields {
            let els: Vec<Fe> = f.elements().collect();
            for &a in &els {
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for &c in &els {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn fermat_and_inverse_all_elements_gf256() {
        let f = gf256();
        for a in f.elements().skip(1) {
            assert_eq!(f.pow(a, 255), Fe::ONE);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
        }
        let p = Field::prime(251).unwrap();
        for a in p.elements().skip(1) {
            assert_eq!(p.pow(a, 250), Fe::ONE);
        }
    }

    #[test]
    fn checked_arith_rejects_foreign() {
        let f = Field::prime(13).unwrap();
        assert!(matches!(
            f.arith(Fe(13), Fe(1), FieldOp::Add),
            Err(Error::ForeignElement { value: 13, q: 13 })
        ));
        assert_eq!(f.arith(Fe(3), Fe(0), FieldOp::Inv).unwrap(), Fe(9));
        assert_eq!(f.arith(Fe(2), Fe(0), FieldOp::Pow(12)).unwrap(), Fe::ONE);
    }

    #[test]
    fn pretty_rendering() {
        let f = gf256();
        assert_eq!(f.pretty(Fe(0b1_0101)), "α^4+α^2+1");
        assert_eq!(f.pretty(f.alpha()), "α");
        assert_eq!(f.spec().modulus, vec![1, 0, 1, 1, 1, 0, 0, 0, 1]);
    }
}
