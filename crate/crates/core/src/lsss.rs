//! Linear secret sharing as a pair of evaluation codes: the secret code and
//! the noise code, with trivially intersecting spans.

use crate::curve::{CurvePoint, HyperellipticCurve};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::funcspace::{eval_matrix, rr_basis, FunctionElement, Geometry};
use crate::lincode::{binomial, dual_distance, LinearCode, SUBSET_LIMIT};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::rng::SeededRng;

#[derive(Clone, Debug)]
pub struct Lsss {
    geometry: Geometry,
    secret_functions: Vec<FunctionElement>,
    noise_functions: Vec<FunctionElement>,
    points: Vec<CurvePoint>,
    secret_rows: Matrix,
    noise_rows: Matrix,
    stacked: Matrix,
}

impl Lsss {
    pub fn new(
        geometry: Geometry,
        secret_functions: Vec<FunctionElement>,
        noise_functions: Vec<FunctionElement>,
        points: Vec<CurvePoint>,
    ) -> Result<Self> {
        let f = *geometry.field();
        let secret_rows = eval_matrix(&secret_functions, &points, &f)?;
        let noise_rows = eval_matrix(&noise_functions, &points, &f)?;
        let stacked = secret_rows.stack(&noise_rows);
        let rank = stacked.rank(&f);
        if rank != stacked.rows() {
            return Err(Error::RankDeficient {
                rank,
                expected: stacked.rows(),
            });
        }
        Ok(Lsss {
            geometry,
            secret_functions,
            noise_functions,
            points,
            secret_rows,
            noise_rows,
            stacked,
        })
    }

    pub fn field(&self) -> &Field {
        self.geometry.field()
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn parties(&self) -> usize {
        self.points.len()
    }

    pub fn secret_functions(&self) -> &[FunctionElement] {
        &self.secret_functions
    }

    pub fn noise_functions(&self) -> &[FunctionElement] {
        &self.noise_functions
    }

    pub fn noise_code(&self) -> Result<LinearCode> {
        LinearCode::new(*self.field(), self.noise_rows.clone(), self.points.clone())
    }

    pub fn noise_dim(&self) -> usize {
        self.noise_rows.rows()
    }

    /// Shares with explicit noise coefficients.
    pub fn share_with_noise(&self, secret: &[Fe], noise: &[Fe]) -> Result<Vec<Fe>> {
        if secret.len() != self.secret_rows.rows() {
            return Err(Error::LengthMismatch {
                expected: self.secret_rows.rows(),
                got: secret.len(),
            });
        }
        if noise.len() != self.noise_rows.rows() {
            return Err(Error::LengthMismatch {
                expected: self.noise_rows.rows(),
                got: noise.len(),
            });
        }
        let coeffs: Vec<Fe> = secret.iter().chain(noise).copied().collect();
        Ok(self.stacked.left_mul(&coeffs, self.field()))
    }

    /// Shares a vector of secrets (one per secret function) with uniform noise.
    pub fn share_vec(&self, secret: &[Fe], rng: &mut SeededRng) -> Result<Vec<Fe>> {
        let noise = rng.elements(self.field(), self.noise_dim());
        self.share_with_noise(secret, &noise)
    }

    pub fn share(&self, secret: Fe, seed: u64) -> Result<Vec<Fe>> {
        self.share_vec(&[secret], &mut SeededRng::new(seed))
    }

    /// Secret coefficients of a consistent share vector.
    pub fn reconstruct_vec(&self, shares: &[Fe]) -> Result<Vec<Fe>> {
        if shares.len() != self.parties() {
            return Err(Error::LengthMismatch {
                expected: self.parties(),
                got: shares.len(),
            });
        }
        let c = self
            .stacked
            .solve_left(shares, self.field())
            .ok_or(Error::InconsistentShares)?;
        Ok(c[..self.secret_rows.rows()].to_vec())
    }

    pub fn reconstruct(&self, shares: &[Fe]) -> Result<Fe> {
        Ok(self.reconstruct_vec(shares)?[0])
    }

    pub fn verify_security(&self, t_claim: usize, mode: SecurityMode) -> Result<SecurityReport> {
        verify_noise_security(&self.noise_rows, t_claim, mode, self.field())
    }
}

/// `C = constants`, `C^noise` spanned by `x, …, x^T` at the given nonzero points.
pub fn lsss_shamir(field: &Field, n: usize, t: usize, alphas: &[Fe]) -> Result<Lsss> {
    if alphas.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: alphas.len(),
        });
    }
    if alphas.iter().any(|a| a.is_zero()) {
        return Err(Error::InvalidParams(
            "Shamir evaluation points must be nonzero".into(),
        ));
    }
    let mut sorted = alphas.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParams(
            "Shamir evaluation points must be distinct".into(),
        ));
    }
    let noise = (1..=t)
        .map(|i| FunctionElement::poly(Poly::monomial(Fe::ONE, i)))
        .collect();
    let points = alphas
        .iter()
        .map(|&a| CurvePoint::affine(a, Fe::ZERO))
        .collect();
    Lsss::new(
        Geometry::Line(*field),
        vec![FunctionElement::one()],
        noise,
        points,
    )
}

/// `C = constants`, `C^noise = h·L((T+2g−1)P∞)`, T-secure when `h` has no
/// zeros or poles among the points.
pub fn lsss_chen_cramer(
    geometry: &Geometry,
    t: usize,
    h: &FunctionElement,
    points: &[CurvePoint],
) -> Result<Lsss> {
    let f = *geometry.field();
    let g = geometry.genus();
    if t == 0 {
        return Lsss::new(
            geometry.clone(),
            vec![FunctionElement::one()],
            Vec::new(),
            points.to_vec(),
        );
    }
    if points.len() < t + 2 * g {
        return Err(Error::InvalidParams(format!(
            "need at least T + 2g = {} points, got {}",
            t + 2 * g,
            points.len()
        )));
    }
    for p in points {
        match p {
            CurvePoint::Infinity => {
                return Err(Error::InvalidParams(
                    "the point at infinity cannot hold a share".into(),
                ))
            }
            _ => {
                if h.eval(p, &f)?.is_zero() {
                    return Err(Error::InvalidParams(format!("h vanishes at {p}")));
                }
            }
        }
    }
    let noise = rr_basis(geometry, t + 2 * g - 1)
        .elements
        .iter()
        .map(|u| h.mul(u, geometry))
        .collect();
    Lsss::new(
        geometry.clone(),
        vec![FunctionElement::one()],
        noise,
        points.to_vec(),
    )
}

/// Chen–Cramer on a curve with `h = y` at every point where `y ≠ 0`.
pub fn lsss_chen_cramer_y(curve: &HyperellipticCurve, t: usize) -> Result<Lsss> {
    let points: Vec<CurvePoint> = curve
        .points()
        .into_iter()
        .filter(|p| matches!(p, CurvePoint::Affine { y, .. } if !y.is_zero()))
        .collect();
    lsss_chen_cramer(
        &Geometry::Curve(curve.clone()),
        t,
        &FunctionElement::y(),
        &points,
    )
}

/// Coordinatewise `Σ λ_i · shares_i`.
pub fn lsss_combine(shares: &[Vec<Fe>], coefficients: &[Fe], field: &Field) -> Result<Vec<Fe>> {
    if shares.len() != coefficients.len() {
        return Err(Error::LengthMismatch {
            expected: shares.len(),
            got: coefficients.len(),
        });
    }
    let n = shares.first().map_or(0, |s| s.len());
    let mut out = vec![Fe::ZERO; n];
    for (s, &c) in shares.iter().zip(coefficients) {
        if s.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: s.len(),
            });
        }
        for (o, &v) in out.iter_mut().zip(s) {
            *o = field.add(*o, field.mul(c, v));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecurityMode {
    DualDistance,
    ExhaustiveRank,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecurityReport {
    pub mode: SecurityMode,
    pub t_claim: usize,
    pub passed: bool,
    /// `d⊥ − 1` in dual-distance mode.
    pub threshold: Option<usize>,
    /// First subset of size `t_claim` with deficient rank, in exhaustive mode.
    pub witness: Option<Vec<usize>>,
}

/// Checks that every `t_claim` columns of the noise generator are independent.
pub fn verify_noise_security(
    noise_rows: &Matrix,
    t_claim: usize,
    mode: SecurityMode,
    field: &Field,
) -> Result<SecurityReport> {
    let n = noise_rows.cols();
    if t_claim > noise_rows.rows() || t_claim > n {
        return Ok(SecurityReport {
            mode,
            t_claim,
            passed: false,
            threshold: None,
            witness: None,
        });
    }
    match mode {
        SecurityMode::DualDistance => {
            let code = LinearCode::from_spanning(*field, noise_rows, dummy_points(n))?;
            let d = dual_distance(&code)?;
            Ok(SecurityReport {
                mode,
                t_claim,
                passed: d > t_claim,
                threshold: Some(d - 1),
                witness: None,
            })
        }
        SecurityMode::ExhaustiveRank => {
            let total = binomial(n, t_claim);
            if total > SUBSET_LIMIT {
                return Err(Error::Guard {
                    what: "exhaustive security check",
                    size: total,
                    limit: SUBSET_LIMIT,
                });
            }
            let witness = first_deficient_subset(noise_rows, t_claim, field);
            Ok(SecurityReport {
                mode,
                t_claim,
                passed: witness.is_none(),
                threshold: None,
                witness,
            })
        }
    }
}

fn dummy_points(n: usize) -> Vec<CurvePoint> {
    (0..n)
        .map(|i| CurvePoint::affine(Fe(i as u32), Fe::ZERO))
        .collect()
}

/// Lexicographically first `k`-subset of columns with rank below `k`.
pub fn first_deficient_subset(m: &Matrix, k: usize, f: &Field) -> Option<Vec<usize>> {
    let n = m.cols();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 {
        return None;
    }
    loop {
        if m.select_columns(&idx).rank(f) < k {
            return Some(idx);
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return None;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincode::min_distance;

    fn f13() -> Field {
        Field::prime(13).unwrap()
    }

    fn shamir_5_2() -> Lsss {
        let alphas: Vec<Fe> = (1..=5).map(Fe).collect();
        lsss_shamir(&f13(), 5, 2, &alphas).unwrap()
    }

    fn ex3_curve() -> HyperellipticCurve {
        let f = f13();
        HyperellipticCurve::new(
            f,
            2,
            Poly::from_u32s(&f, &[1, 2, 4, 0, 1, 1]).unwrap(),
            Poly::zero(),
        )
        .unwrap()
    }

    #[test]
    fn shamir_basics() {
        let s = shamir_5_2();
        assert_eq!(s.noise_code().unwrap().dual_distance().unwrap(), 3);
        assert!(
            s.verify_security(2, SecurityMode::DualDistance)
                .unwrap()
                .passed
        );
        assert!(
            !s.verify_security(3, SecurityMode::DualDistance)
                .unwrap()
                .passed
        );
        assert!(
            !s.verify_security(3, SecurityMode::ExhaustiveRank)
                .unwrap()
                .passed
        );
        let f = f13();
        assert!(lsss_shamir(&f, 2, 1, &[Fe(0), Fe(1)]).is_err());
        assert!(lsss_shamir(&f, 2, 1, &[Fe(2), Fe(2)]).is_err());

        let t0 = lsss_shamir(&f, 4, 0, &[Fe(1), Fe(2), Fe(3), Fe(4)]).unwrap();
        assert_eq!(t0.noise_dim(), 0);
        assert_eq!(t0.share(Fe(9), 1).unwrap(), vec![Fe(9); 4]);
    }

    #[test]
    fn round_trips_and_invariance() {
        let s = shamir_5_2();
        let f = f13();
        let mut rng = SeededRng::new(77);
        for _ in 0..100 {
            let secret = rng.element(&f);
            let shares = s.share_vec(&[secret], &mut rng).unwrap();
            assert_eq!(s.reconstruct(&shares).unwrap(), secret);
            let extra = s
                .share_with_noise(&[Fe::ZERO], &rng.elements(&f, 2))
                .unwrap();
            let shifted = lsss_combine(&[shares, extra], &[Fe::ONE, Fe::ONE], &f).unwrap();
            assert_eq!(s.reconstruct(&shifted).unwrap(), secret);
        }
        assert_eq!(s.reconstruct(&[Fe::ZERO; 5]).unwrap(), Fe::ZERO);
        assert_eq!(
            s.share_with_noise(&[Fe(6)], &[Fe::ZERO, Fe::ZERO]).unwrap(),
            vec![Fe(6); 5]
        );
        let bad = vec![Fe(1), Fe(0), Fe(0), Fe(0), Fe(0)];
        let s3 = lsss_shamir(&f, 5, 1, &[Fe(1), Fe(2), Fe(3), Fe(4), Fe(5)]).unwrap();
        assert_eq!(s3.reconstruct(&bad), Err(Error::InconsistentShares));
        let differs =
            (0..100u64).any(|seed| s.share(Fe(3), seed).unwrap() != s.share(Fe(3), 0).unwrap());
        assert!(differs);
    }

    #[test]
    fn reconstruction_is_linear() {
        let s = shamir_5_2();
        let f = f13();
        let mut rng = SeededRng::new(5);
        for _ in 0..20 {
            let u = s.share_vec(&[rng.element(&f)], &mut rng).unwrap();
            let v = s.share_vec(&[rng.element(&f)], &mut rng).unwrap();
            let (a, b) = (rng.element(&f), rng.element(&f));
            let w = lsss_combine(&[u.clone(), v.clone()], &[a, b], &f).unwrap();
            let expect = f.add(
                f.mul(a, s.reconstruct(&u).unwrap()),
                f.mul(b, s.reconstruct(&v).unwrap()),
            );
            assert_eq!(s.reconstruct(&w).unwrap(), expect);
        }
        assert!(lsss_combine(&[vec![Fe(1)], vec![Fe(1), Fe(2)]], &[Fe(1), Fe(1)], &f).is_err());
    }

    #[test]
    fn combined_secrets() {
        let f = f13();
        let s = shamir_5_2();
        let s1 = s.share(Fe(4), 1).unwrap();
        let s2 = s.share(Fe(11), 2).unwrap();
        let sum = lsss_combine(&[s1.clone(), s2], &[Fe::ONE, Fe::ONE], &f).unwrap();
        assert_eq!(s.reconstruct(&sum).unwrap(), Fe(2));
        let only = lsss_combine(&[s1.clone(), s1.clone()], &[Fe::ONE, Fe::ZERO], &f).unwrap();
        assert_eq!(s.reconstruct(&only).unwrap(), Fe(4));

        // Offsetting the noise to start at x² leaves room for two secrets.
        let t = 2;
        let geom = Geometry::Line(f);
        let pts: Vec<CurvePoint> = (1..=6)
            .map(|a| CurvePoint::affine(Fe(a), Fe::ZERO))
            .collect();
        let noise: Vec<FunctionElement> = (2..2 + t)
            .map(|i| FunctionElement::poly(Poly::monomial(Fe::ONE, i)))
            .collect();
        let first = Lsss::new(
            geom.clone(),
            vec![FunctionElement::one()],
            noise.clone(),
            pts.clone(),
        )
        .unwrap();
        let second = Lsss::new(
            geom.clone(),
            vec![FunctionElement::x()],
            noise.clone(),
            pts.clone(),
        )
        .unwrap();
        let both = Lsss::new(
            geom,
            vec![FunctionElement::one(), FunctionElement::x()],
            noise,
            pts,
        )
        .unwrap();
        let a = first.share(Fe(7), 3).unwrap();
        let b = second.share(Fe(9), 4).unwrap();
        let sum = lsss_combine(&[a, b], &[Fe::ONE, Fe::ONE], &f).unwrap();
        assert_eq!(both.reconstruct_vec(&sum).unwrap(), vec![Fe(7), Fe(9)]);
    }

    #[test]
    fn chen_cramer_example() {
        let c = ex3_curve();
        let s = lsss_chen_cramer_y(&c, 4).unwrap();
        let code = s.noise_code().unwrap();
        assert_eq!((code.len(), code.dim()), (24, 6));
        assert_eq!(min_distance(&code).unwrap(), 17);
        assert!(
            s.verify_security(4, SecurityMode::DualDistance)
                .unwrap()
                .passed
        );
        assert!(
            s.verify_security(4, SecurityMode::ExhaustiveRank)
                .unwrap()
                .passed
        );
        let mut rng = SeededRng::new(1);
        for _ in 0..20 {
            let secret = rng.element(c.field());
            let sh = s.share_vec(&[secret], &mut rng).unwrap();
            assert_eq!(s.reconstruct(&sh).unwrap(), secret);
        }
        assert_eq!(
            s.share_with_noise(&[Fe(5)], &[Fe::ZERO; 6]).unwrap(),
            vec![Fe(5); 24]
        );
        // Too few points, and a point where h vanishes.
        let geom = Geometry::Curve(c.clone());
        let pts = s.points()[..7].to_vec();
        assert!(lsss_chen_cramer(&geom, 4, &FunctionElement::y(), &pts).is_err());
        let zero = vec![CurvePoint::affine(Fe(5), Fe(0))];
        assert!(lsss_chen_cramer(&geom, 0, &FunctionElement::y(), &zero).is_ok());
        let mut with_zero = s.points().to_vec();
        with_zero.push(zero[0]);
        assert!(lsss_chen_cramer(&geom, 4, &FunctionElement::y(), &with_zero).is_err());
    }

    #[test]
    fn chen_cramer_on_the_line_is_scaled_shamir() {
        let f = f13();
        let alphas: Vec<Fe> = (1..=8).map(Fe).collect();
        let pts: Vec<CurvePoint> = alphas
            .iter()
            .map(|&a| CurvePoint::affine(a, Fe::ZERO))
            .collect();
        let cc = lsss_chen_cramer(&Geometry::Line(f), 3, &FunctionElement::x(), &pts).unwrap();
        let sh = lsss_shamir(&f, 8, 3, &alphas).unwrap();
        assert_eq!(cc.noise_rows, sh.noise_rows);
    }

    #[test]
    fn security_modes_agree_on_shamir() {
        let f = f13();
        for n in 2..=8usize {
            let alphas: Vec<Fe> = (1..=n as u32).map(Fe).collect();
            for t in 0..n {
                let s = lsss_shamir(&f, n, t, &alphas).unwrap();
                for claim in 1..=n {
                    let a = s
                        .verify_security(claim, SecurityMode::DualDistance)
                        .unwrap();
                    let b = s
                        .verify_security(claim, SecurityMode::ExhaustiveRank)
                        .unwrap();
                    assert_eq!(a.passed, b.passed, "n={n} t={t} claim={claim}");
                }
            }
        }
    }

    /// Restricted to any T parties, the shares of a fixed secret hit every
    /// vector in F_q^T equally often as the noise ranges over all values.
    #[test]
    fn restricted_shares_are_uniform() {
        let f = Field::prime(5).unwrap();
        let alphas: Vec<Fe> = (1..=4).map(Fe).collect();
        let t = 2;
        let s = lsss_shamir(&f, 4, t, &alphas).unwrap();
        for secret in [Fe(0), Fe(3)] {
            for a in 0..4 {
                for b in a + 1..4 {
                    let mut hist = [0u32; 25];
                    for n0 in 0..5 {
                        for n1 in 0..5 {
                            let sh = s.share_with_noise(&[secret], &[Fe(n0), Fe(n1)]).unwrap();
                            hist[(sh[a].0 * 5 + sh[b].0) as usize] += 1;
                        }
                    }
                    assert!(hist.iter().all(|&c| c == 1));
                }
            }
        }
    }
}
