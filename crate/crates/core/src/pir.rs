//! X-secure, T-private information retrieval with cross-subspace alignment,
//! on the projective line or a hyperelliptic curve.

use crate::curve::{CurvePoint, HyperellipticCurve};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::funcspace::{
    csa_basis_genus0, csa_basis_hyper, eval_matrix, noise_basis, rr_basis, CsaBasis,
    FunctionElement, Geometry,
};
use crate::lincode::{information_set_of, sigma_profile, LinearCode, SigmaEntry};
use crate::lsss::{verify_noise_security, SecurityMode};
use crate::matrix::{Echelon, Matrix};
use crate::poly::Poly;
use crate::rng::SeededRng;

/// Download rate `L/N`, kept both raw and in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rate {
    pub l: usize,
    pub n: usize,
}

impl Rate {
    pub fn reduced(&self) -> (usize, usize) {
        if self.n == 0 {
            return (0, 1);
        }
        let g = gcd(self.l, self.n);
        (self.l / g, self.n / g)
    }

    pub fn value(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.l as f64 / self.n as f64
        }
    }
}

impl std::fmt::Display for Rate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{} ≈ {:.3}", self.l, self.n, self.value())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PirParams {
    pub geometry: Geometry,
    pub l: usize,
    pub x: usize,
    pub t: usize,
    pub m: usize,
    pub n: usize,
    pub gammas: Vec<Fe>,
    pub delta: usize,
}

impl PirParams {
    pub fn field(&self) -> &Field {
        self.geometry.field()
    }

    pub fn genus(&self) -> usize {
        self.geometry.genus()
    }

    pub fn rate(&self) -> Rate {
        Rate {
            l: self.l,
            n: self.n,
        }
    }

    /// Number of anchors `J` (equals `L` on the line).
    pub fn j(&self) -> usize {
        self.gammas.len()
    }
}

pub fn rate(params: &PirParams) -> Rate {
    params.rate()
}

/// Servers needed for `L` fragments: `L + X + T`, or `L + X + T + 6g + 2`.
pub fn servers_needed(genus: usize, l: usize, x: usize, t: usize) -> usize {
    if genus == 0 {
        l + x + t
    } else {
        l + x + t + 6 * genus + 2
    }
}

#[derive(Clone, Debug)]
pub struct PlanRequest {
    pub geometry: Geometry,
    pub x: usize,
    pub t: usize,
    pub l: Option<usize>,
    pub m: usize,
}

/// Anchor candidates: x-values with no rational point, then occupied x-values
/// where `F` does not vanish, each ascending.
pub fn gamma_candidates(curve: &HyperellipticCurve) -> Vec<Fe> {
    let f = curve.field();
    let mut c = curve.free_x();
    c.extend(
        curve
            .occupied_x()
            .into_iter()
            .filter(|&x| !curve.f().eval(x, f).is_zero()),
    );
    c
}

/// Affine points usable for evaluation: `y ≠ 0` and `x` not an anchor.
fn usable_points(curve: &HyperellipticCurve, gammas: &[Fe]) -> Vec<CurvePoint> {
    curve
        .points()
        .into_iter()
        .filter(|p| match p {
            CurvePoint::Infinity => false,
            CurvePoint::Affine { x, y } => !y.is_zero() && !gammas.contains(x),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSelection {
    pub gammas: Vec<Fe>,
    pub l: usize,
    pub n: usize,
    /// x-values carrying no rational point.
    pub free_x: usize,
    pub usable_points: usize,
}

fn selection_for(
    curve: &HyperellipticCurve,
    free_x: usize,
    cands: &[Fe],
    usable_all: &[CurvePoint],
    j: usize,
    x: usize,
    t: usize,
) -> Option<GammaSelection> {
    let g = curve.genus();
    if j > cands.len() || j < g {
        return None;
    }
    let gammas = &cands[..j];
    let usable = usable_all
        .iter()
        .filter(|p| !gammas.contains(&p.x().unwrap()))
        .count();
    let l = 2 * j - g;
    let n = servers_needed(g, l, x, t);
    (usable >= n + g).then(|| GammaSelection {
        gammas: gammas.to_vec(),
        l,
        n,
        free_x,
        usable_points: usable,
    })
}

/// Largest `J` (hence `L = 2J − g`) whose anchors leave at least `N + g` usable points.
pub fn select_gammas(curve: &HyperellipticCurve, x: usize, t: usize) -> Result<GammaSelection> {
    let cands = gamma_candidates(curve);
    let usable_all = usable_points(curve, &[]);
    let free_x = curve.free_x().len();
    let g = curve.genus();
    let mut best = None;
    for j in g.max(1)..=cands.len() {
        match selection_for(curve, free_x, &cands, &usable_all, j, x, t) {
            Some(s) => best = Some(s),
            None => break,
        }
    }
    best.ok_or_else(|| {
        Error::Infeasible(format!(
            "no L ≥ g fits: curve has {} usable points for X = {x}, T = {t}",
            usable_all.len()
        ))
    })
}

/// Largest genus-0 `L` with `2L + X + T ≤ q`, if any.
pub fn genus0_max_l(q: u32, x: usize, t: usize) -> Option<usize> {
    let l = (q as usize).checked_sub(x + t)? / 2;
    (l >= 1).then_some(l)
}

#[derive(Clone, Debug)]
pub struct PirScheme {
    params: PirParams,
    csa: CsaBasis,
    noise: Vec<FunctionElement>,
    storage_noise: Vec<FunctionElement>,
    query_noise: Vec<FunctionElement>,
    points: Vec<CurvePoint>,
    info_rows: Matrix,
    noise_rows: Matrix,
    storage_rows: Vec<Matrix>,
    query_rows: Matrix,
    decoder: Matrix,
    decoder_inverse: Option<Matrix>,
    warnings: Vec<String>,
}

/// Basis of the storage (resp. query) randomness: `L((k+2g−1)P∞)`, or
/// polynomials of degree below `k` on the line; empty when `k = 0`.
fn randomness_basis(geom: &Geometry, k: usize) -> Vec<FunctionElement> {
    if k == 0 {
        return Vec::new();
    }
    match geom {
        Geometry::Line(_) => (0..k)
            .map(|i| FunctionElement::poly(Poly::monomial(Fe::ONE, i)))
            .collect(),
        Geometry::Curve(c) => rr_basis(geom, k + 2 * c.genus() - 1).elements,
    }
}

pub fn plan_scheme(req: &PlanRequest) -> Result<PirScheme> {
    let mut warnings = Vec::new();
    if req.x == 0 || req.t == 0 {
        warnings.push(format!(
            "X = {} and T = {}: the scheme is {}",
            req.x,
            req.t,
            match (req.x, req.t) {
                (0, 0) => "neither secure nor private",
                (0, _) => "not secure against colluding servers",
                _ => "not private",
            }
        ));
    }
    if req.m == 0 {
        return Err(Error::InvalidParams("M must be at least 1".into()));
    }
    let geom = &req.geometry;
    let f = *geom.field();
    let (gammas, l, points) = match geom {
        Geometry::Line(_) => {
            let q = f.order() as usize;
            let l = match req.l {
                Some(l) => l,
                None => genus0_max_l(f.order(), req.x, req.t).ok_or_else(|| {
                    Error::Infeasible(format!("q = {q} too small for X + T = {}", req.x + req.t))
                })?,
            };
            if l == 0 {
                return Err(Error::InvalidParams("L must be at least 1".into()));
            }
            let n = servers_needed(0, l, req.x, req.t);
            if q < n + l {
                return Err(Error::Infeasible(format!(
                    "genus 0 needs q ≥ N + L = {}, field has {q}",
                    n + l
                )));
            }
            let elems: Vec<Fe> = f.elements().collect();
            let pts = elems[l..l + n]
                .iter()
                .map(|&x| CurvePoint::affine(x, Fe::ZERO))
                .collect();
            (elems[..l].to_vec(), l, pts)
        }
        Geometry::Curve(c) => {
            warnings.extend(c.validate().warnings);
            let g = c.genus();
            let sel = match req.l {
                None => select_gammas(c, req.x, req.t)?,
                Some(l) => {
                    if l < g || (l - g) % 2 != 0 {
                        return Err(Error::InvalidParams(format!(
                            "L = {l} must satisfy L ≥ g and L ≡ g (mod 2) for g = {g}"
                        )));
                    }
                    let cands = gamma_candidates(c);
                    let usable_all = usable_points(c, &[]);
                    selection_for(
                        c,
                        c.free_x().len(),
                        &cands,
                        &usable_all,
                        (l + g) / 2,
                        req.x,
                        req.t,
                    )
                    .ok_or_else(|| {
                        Error::Infeasible(format!(
                            "L = {l} needs N + g = {} usable points",
                            servers_needed(g, l, req.x, req.t) + g
                        ))
                    })?
                }
            };
            let usable = usable_points(c, &sel.gammas);
            let candidates = usable[..sel.n + g].to_vec();
            // Ambient space y⁻¹·L((L+X+T+7g+1)P∞) has dimension N; restrict to
            // an information set of it.
            let ambient = ambient_basis(geom, sel.l, req.x, req.t);
            let amb = eval_matrix(&ambient, &candidates, &f)?;
            let cols = information_set_of(&amb, sel.n, &f)?;
            let pts = cols.iter().map(|&j| candidates[j]).collect();
            (sel.gammas, sel.l, pts)
        }
    };
    let n = servers_needed(geom.genus(), l, req.x, req.t);
    let params = PirParams {
        geometry: geom.clone(),
        l,
        x: req.x,
        t: req.t,
        m: req.m,
        n,
        gammas,
        delta: 0,
    };
    let mut scheme = PirScheme::from_parts(params, points)?;
    scheme.warnings.splice(0..0, warnings);
    if scheme.decoder_inverse.is_none() {
        return Err(Error::Internal("decoder matrix is singular".into()));
    }
    Ok(scheme)
}

fn ambient_basis(geom: &Geometry, l: usize, x: usize, t: usize) -> Vec<FunctionElement> {
    match geom {
        Geometry::Line(_) => rr_basis(geom, l + x + t - 1).elements,
        Geometry::Curve(c) => {
            let inv_y = FunctionElement::inv_y();
            rr_basis(geom, l + x + t + 7 * c.genus() + 1)
                .elements
                .iter()
                .map(|u| u.mul(&inv_y, geom))
                .collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StorageState {
    /// `shares[m][ℓ][n]`.
    pub shares: Vec<Vec<Vec<Fe>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuerySet {
    /// `queries[m][ℓ][n]`.
    pub queries: Vec<Vec<Vec<Fe>>>,
}

impl PirScheme {
    /// Assembles a scheme at explicit evaluation points. The decoder may be
    /// singular, in which case decoding fails and verification reports it.
    pub fn from_parts(mut params: PirParams, points: Vec<CurvePoint>) -> Result<Self> {
        let geom = params.geometry.clone();
        let f = *geom.field();
        if points.len() != params.n {
            return Err(Error::LengthMismatch {
                expected: params.n,
                got: points.len(),
            });
        }
        let csa = match &geom {
            Geometry::Line(_) => csa_basis_genus0(&f, params.l, &params.gammas)?,
            Geometry::Curve(c) => csa_basis_hyper(c, params.l, &params.gammas)?,
        };
        params.delta = csa.delta;
        let noise = noise_basis(&geom, params.x, params.t, &csa);
        let storage_noise = randomness_basis(&geom, params.x);
        let hq = FunctionElement::poly(csa.h.clone());
        let query_noise: Vec<FunctionElement> = randomness_basis(&geom, params.t)
            .iter()
            .map(|u| hq.mul(u, &geom))
            .collect();
        let info_rows = eval_matrix(&csa.h_list, &points, &f)?;
        let noise_rows = eval_matrix(&noise, &points, &f)?;
        let storage_rows = csa
            .f_noise_list
            .iter()
            .map(|fl| {
                let funcs: Vec<FunctionElement> =
                    storage_noise.iter().map(|u| fl.mul(u, &geom)).collect();
                eval_matrix(&funcs, &points, &f)
            })
            .collect::<Result<Vec<_>>>()?;
        let query_rows = eval_matrix(&query_noise, &points, &f)?;

        // Protocol rows first, then completion rows from the ambient space.
        let mut decoder_rows = info_rows.stack(&noise_rows).row_vecs();
        if geom.genus() > 0 {
            let mut ech = Echelon::new();
            for r in &decoder_rows {
                ech.insert(r, &f);
            }
            let amb = eval_matrix(
                &ambient_basis(&geom, params.l, params.x, params.t),
                &points,
                &f,
            )?;
            for r in amb.row_vecs() {
                if decoder_rows.len() == params.n {
                    break;
                }
                if ech.insert(&r, &f) {
                    decoder_rows.push(r);
                }
            }
        }
        let decoder = Matrix::from_rows(decoder_rows, points.len());
        let decoder_inverse = if decoder.rows() == decoder.cols() {
            decoder.inverse(&f).ok()
        } else {
            None
        };
        Ok(PirScheme {
            params,
            csa,
            noise,
            storage_noise,
            query_noise,
            points,
            info_rows,
            noise_rows,
            storage_rows,
            query_rows,
            decoder,
            decoder_inverse,
            warnings: Vec::new(),
        })
    }

    pub fn params(&self) -> &PirParams {
        &self.params
    }

    pub fn field(&self) -> &Field {
        self.params.field()
    }

    pub fn csa(&self) -> &CsaBasis {
        &self.csa
    }

    pub fn noise_functions(&self) -> &[FunctionElement] {
        &self.noise
    }

    pub fn storage_noise_functions(&self) -> &[FunctionElement] {
        &self.storage_noise
    }

    pub fn query_noise_functions(&self) -> &[FunctionElement] {
        &self.query_noise
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn decoder(&self) -> &Matrix {
        &self.decoder
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn rate(&self) -> Rate {
        self.params.rate()
    }

    /// Generator of the storage-noise code for fragment `ℓ`.
    pub fn storage_noise_rows(&self, l: usize) -> &Matrix {
        &self.storage_rows[l]
    }

    /// Generator of the query-noise code (the same for every fragment).
    pub fn query_noise_rows(&self) -> &Matrix {
        &self.query_rows
    }

    pub fn noise_rows(&self) -> &Matrix {
        &self.noise_rows
    }

    pub fn info_rows(&self) -> &Matrix {
        &self.info_rows
    }

    fn check_files(&self, files: &[Vec<Fe>]) -> Result<()> {
        if files.len() != self.params.m {
            return Err(Error::LengthMismatch {
                expected: self.params.m,
                got: files.len(),
            });
        }
        for file in files {
            if file.len() != self.params.l {
                return Err(Error::LengthMismatch {
                    expected: self.params.l,
                    got: file.len(),
                });
            }
        }
        Ok(())
    }

    /// Storage shares with explicit noise coefficients `noise[m][ℓ]`.
    pub fn encode_storage_with_noise(
        &self,
        files: &[Vec<Fe>],
        noise: &[Vec<Vec<Fe>>],
    ) -> Result<StorageState> {
        self.check_files(files)?;
        let f = self.field();
        let shares = files
            .iter()
            .zip(noise)
            .map(|(file, nm)| {
                file.iter()
                    .enumerate()
                    .map(|(l, &s)| {
                        let mut row = self.storage_rows[l].left_mul(&nm[l], f);
                        for v in row.iter_mut() {
                            *v = f.add(*v, s);
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        Ok(StorageState { shares })
    }

    pub fn encode_storage(&self, files: &[Vec<Fe>], rng: &mut SeededRng) -> Result<StorageState> {
        let k = self.storage_noise.len();
        let noise: Vec<Vec<Vec<Fe>>> = (0..self.params.m)
            .map(|_| {
                (0..self.params.l)
                    .map(|_| rng.elements(self.field(), k))
                    .collect()
            })
            .collect();
        self.encode_storage_with_noise(files, &noise)
    }

    /// Queries for arbitrary constants `coeffs[m][ℓ]` with explicit noise.
    pub fn make_queries_with_noise(
        &self,
        coeffs: &[Vec<Fe>],
        noise: &[Vec<Vec<Fe>>],
    ) -> Result<QuerySet> {
        self.check_files(coeffs)?;
        let f = self.field();
        let queries = coeffs
            .iter()
            .zip(noise)
            .map(|(cm, nm)| {
                cm.iter()
                    .enumerate()
                    .map(|(l, &c)| {
                        let mut row = self.query_rows.left_mul(&nm[l], f);
                        for (v, &h) in row.iter_mut().zip(self.info_rows.row(l)) {
                            *v = f.add(*v, f.mul(c, h));
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        Ok(QuerySet { queries })
    }

    pub fn make_queries_general(
        &self,
        coeffs: &[Vec<Fe>],
        rng: &mut SeededRng,
    ) -> Result<QuerySet> {
        let k = self.query_noise.len();
        let noise: Vec<Vec<Vec<Fe>>> = (0..self.params.m)
            .map(|_| {
                (0..self.params.l)
                    .map(|_| rng.elements(self.field(), k))
                    .collect()
            })
            .collect();
        self.make_queries_with_noise(coeffs, &noise)
    }

    /// Kronecker-delta constants selecting file `mu` (0-based).
    pub fn selection(&self, mu: usize) -> Result<Vec<Vec<Fe>>> {
        if mu >= self.params.m {
            return Err(Error::InvalidParams(format!(
                "file index {} out of range 1..={}",
                mu + 1,
                self.params.m
            )));
        }
        Ok((0..self.params.m)
            .map(|m| vec![if m == mu { Fe::ONE } else { Fe::ZERO }; self.params.l])
            .collect())
    }

    /// Queries for file `mu` (0-based).
    pub fn make_queries(&self, mu: usize, rng: &mut SeededRng) -> Result<QuerySet> {
        let coeffs = self.selection(mu)?;
        self.make_queries_general(&coeffs, rng)
    }

    /// `r(n) = Σ_{m,ℓ} ŝ_{m,ℓ}(n)·q̂_{m,ℓ}(n)`.
    pub fn server_respond(&self, n: usize, storage: &StorageState, queries: &QuerySet) -> Fe {
        let f = self.field();
        let mut acc = Fe::ZERO;
        for (sm, qm) in storage.shares.iter().zip(&queries.queries) {
            for (s, q) in sm.iter().zip(qm) {
                acc = f.add(acc, f.mul(s[n], q[n]));
            }
        }
        acc
    }

    pub fn respond_all(&self, storage: &StorageState, queries: &QuerySet) -> Vec<Fe> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..self.params.n)
                .into_par_iter()
                .map(|n| self.server_respond(n, storage, queries))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..self.params.n)
                .map(|n| self.server_respond(n, storage, queries))
                .collect()
        }
    }

    /// Coefficients of `h_1..h_L` in the response.
    pub fn decode(&self, responses: &[Fe]) -> Result<Vec<Fe>> {
        if responses.len() != self.params.n {
            return Err(Error::LengthMismatch {
                expected: self.params.n,
                got: responses.len(),
            });
        }
        let inv = self.decoder_inverse.as_ref().ok_or(Error::RankDeficient {
            rank: self.decoder.rank(self.field()),
            expected: self.params.n,
        })?;
        let c = inv.left_mul(responses, self.field());
        Ok(c[..self.params.l].to_vec())
    }

    /// Runs encode, query, respond and decode once; returns the decoded file.
    pub fn round_trip(
        &self,
        files: &[Vec<Fe>],
        mu: usize,
        rng: &mut SeededRng,
    ) -> Result<Transcript> {
        let storage = self.encode_storage(files, rng)?;
        let queries = self.make_queries(mu, rng)?;
        let responses = self.respond_all(&storage, &queries);
        let decoded = self.decode(&responses)?;
        Ok(Transcript {
            storage,
            queries,
            responses,
            decoded,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub storage: StorageState,
    pub queries: QuerySet,
    pub responses: Vec<Fe>,
    pub decoded: Vec<Fe>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub decoder_rank: usize,
    pub n: usize,
    /// Rank of the information rows together with the noise rows.
    pub protocol_rank: usize,
    pub protocol_rows: usize,
    /// Guaranteed security level `min_ℓ d⊥(storage noise) − 1`, or the claim
    /// if every subset passed in exhaustive mode.
    pub x_achieved: usize,
    pub t_achieved: usize,
    pub x_claim: usize,
    pub t_claim: usize,
    pub storage_witness: Option<(usize, Vec<usize>)>,
    pub query_witness: Option<Vec<usize>>,
    pub sigma_query: Vec<SigmaEntry>,
    pub sigma_storage: Vec<SigmaEntry>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.decoder_rank == self.n
            && self.protocol_rank == self.protocol_rows
            && self.x_achieved >= self.x_claim
            && self.t_achieved >= self.t_claim
    }
}

/// Checks decodability and the security and privacy thresholds. `sigma_extra`
/// adds σ(U) for `U` up to `T + sigma_extra` (and `X + sigma_extra`).
pub fn verify_scheme(
    scheme: &PirScheme,
    mode: SecurityMode,
    sigma_extra: usize,
) -> Result<VerifyReport> {
    let p = &scheme.params;
    verify_claims(scheme, mode, sigma_extra, p.x, p.t)
}

/// As [`verify_scheme`], checking the given thresholds instead of the design ones.
pub fn verify_claims(
    scheme: &PirScheme,
    mode: SecurityMode,
    sigma_extra: usize,
    x_claim: usize,
    t_claim: usize,
) -> Result<VerifyReport> {
    let f = *scheme.field();
    let p = &scheme.params;
    let protocol = scheme.info_rows.stack(&scheme.noise_rows);
    let mut report = VerifyReport {
        decoder_rank: scheme.decoder.rank(&f),
        n: p.n,
        protocol_rank: protocol.rank(&f),
        protocol_rows: protocol.rows(),
        x_achieved: 0,
        t_achieved: 0,
        x_claim,
        t_claim,
        storage_witness: None,
        query_witness: None,
        sigma_query: Vec::new(),
        sigma_storage: Vec::new(),
    };
    let achieved = |rows: &Matrix, claim: usize| -> Result<(usize, Option<Vec<usize>>)> {
        if claim == 0 {
            return Ok((0, None));
        }
        let r = verify_noise_security(rows, claim, mode, &f)?;
        Ok(match mode {
            SecurityMode::DualDistance => (r.threshold.unwrap_or(0), None),
            SecurityMode::ExhaustiveRank => {
                if r.passed {
                    (claim, None)
                } else {
                    (0, Some(r.witness.unwrap_or_default()))
                }
            }
        })
    };
    let mut x_min = usize::MAX;
    for (l, rows) in scheme.storage_rows.iter().enumerate() {
        let (a, w) = achieved(rows, x_claim)?;
        x_min = x_min.min(a);
        if let (Some(w), None) = (w, &report.storage_witness) {
            report.storage_witness = Some((l, w));
        }
    }
    report.x_achieved = if x_claim == 0 { 0 } else { x_min };
    let (t, w) = achieved(&scheme.query_rows, t_claim)?;
    report.t_achieved = t;
    report.query_witness = w;
    if sigma_extra > 0 {
        let pts = scheme.points.clone();
        if p.t > 0 {
            let qc = LinearCode::from_spanning(f, &scheme.query_rows, pts.clone())?;
            for u in p.t..=p.t + sigma_extra {
                report.sigma_query.push(sigma_profile(&qc, u)?);
            }
        }
        if p.x > 0 {
            let sc = LinearCode::from_spanning(f, &scheme.storage_rows[0], pts)?;
            for u in p.x..=p.x + sigma_extra {
                report.sigma_storage.push(sigma_profile(&sc, u)?);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::lsss::first_deficient_subset;

    fn curve(p: u32, f: &[u32]) -> HyperellipticCurve {
        let fld = Field::prime(p).unwrap();
        let g = (f.len() - 2) / 2;
        HyperellipticCurve::new(fld, g, Poly::from_u32s(&fld, f).unwrap(), Poly::zero()).unwrap()
    }

    fn req(geometry: Geometry, x: usize, t: usize, l: Option<usize>, m: usize) -> PlanRequest {
        PlanRequest {
            geometry,
            x,
            t,
            l,
            m,
        }
    }

    fn random_files(s: &PirScheme, rng: &mut SeededRng) -> Vec<Vec<Fe>> {
        (0..s.params.m)
            .map(|_| rng.elements(s.field(), s.params.l))
            .collect()
    }

    #[test]
    fn small_curves_plan() {
        let c1 = curve(11, &[3, 1, 0, 1]);
        let s = select_gammas(&c1, 1, 1).unwrap();
        assert_eq!((s.gammas.len(), s.l, s.n), (2, 3, 13));
        let c2 = curve(11, &[4, 2, 0, 1]);
        assert_eq!(c2.free_x().len(), 3);
        let s = select_gammas(&c2, 1, 1).unwrap();
        assert_eq!((s.gammas.len(), s.l, s.n), (3, 5, 15));
        assert!(matches!(
            select_gammas(&c2, 10, 10),
            Err(Error::Infeasible(_))
        ));
        let sch = plan_scheme(&req(Geometry::Curve(c1), 1, 1, None, 2)).unwrap();
        assert_eq!(sch.rate().reduced(), (3, 13));
        assert!(verify_scheme(&sch, SecurityMode::DualDistance, 0)
            .unwrap()
            .passed());
    }

    #[test]
    fn genus0_round_trips() {
        let f = Field::prime(13).unwrap();
        let s = plan_scheme(&req(Geometry::Line(f), 2, 2, Some(4), 3)).unwrap();
        assert_eq!(s.params.n, 8);
        let mut rng = SeededRng::new(1);
        for _ in 0..30 {
            let files = random_files(&s, &mut rng);
            let mu = rng.below(3) as usize;
            let tr = s.round_trip(&files, mu, &mut rng).unwrap();
            assert_eq!(tr.decoded, files[mu]);
        }
        let r = verify_scheme(&s, SecurityMode::DualDistance, 0).unwrap();
        assert!(r.passed());
        assert_eq!((r.x_achieved, r.t_achieved), (2, 2));
        assert!(plan_scheme(&req(Geometry::Line(f), 2, 2, Some(5), 3)).is_err());
        assert_eq!(s.decode(&[Fe::ZERO; 8]).unwrap(), vec![Fe::ZERO; 4]);
    }

    #[test]
    fn hyperelliptic_round_trips() {
        let c = curve(13, &[1, 2, 4, 0, 1, 1]);
        let s = plan_scheme(&req(Geometry::Curve(c), 1, 1, Some(2), 2)).unwrap();
        assert_eq!(s.params.n, 18);
        assert_eq!(s.noise.len(), 14);
        let mut rng = SeededRng::new(2);
        for _ in 0..30 {
            let files = random_files(&s, &mut rng);
            let mu = rng.below(2) as usize;
            assert_eq!(
                s.round_trip(&files, mu, &mut rng).unwrap().decoded,
                files[mu]
            );
        }
        let r = verify_scheme(&s, SecurityMode::ExhaustiveRank, 0).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn binary_field_round_trip() {
        let f = Field::new(&FieldSpec::binary(4, vec![1, 1, 0, 0, 1])).unwrap();
        let hits =
            crate::curve::curve_search(&f, 1, 0, 1 << 20, crate::curve::SearchMode::Exhaustive, 0)
                .unwrap();
        let c = hits[0].curve.clone();
        let s = plan_scheme(&req(Geometry::Curve(c), 1, 1, None, 2)).unwrap();
        let mut rng = SeededRng::new(3);
        for _ in 0..10 {
            let files = random_files(&s, &mut rng);
            assert_eq!(s.round_trip(&files, 1, &mut rng).unwrap().decoded, files[1]);
        }
    }

    #[test]
    fn degenerate_noise_warns() {
        let f = Field::prime(13).unwrap();
        let s = plan_scheme(&req(Geometry::Line(f), 0, 2, Some(3), 2)).unwrap();
        assert_eq!(s.warnings().len(), 1);
        let mut rng = SeededRng::new(4);
        let files = random_files(&s, &mut rng);
        assert_eq!(s.round_trip(&files, 0, &mut rng).unwrap().decoded, files[0]);
        let c = curve(13, &[1, 2, 4, 0, 1, 1]);
        let s = plan_scheme(&req(Geometry::Curve(c), 1, 0, Some(2), 2)).unwrap();
        assert!(!s.warnings().is_empty());
        let files = random_files(&s, &mut rng);
        assert_eq!(s.round_trip(&files, 1, &mut rng).unwrap().decoded, files[1]);
    }

    #[test]
    fn query_modes_and_ranges() {
        let f = Field::prime(13).unwrap();
        let s = plan_scheme(&req(Geometry::Line(f), 1, 1, Some(2), 3)).unwrap();
        let a = s.make_queries(0, &mut SeededRng::new(9)).unwrap();
        let b = s
            .make_queries_general(&s.selection(0).unwrap(), &mut SeededRng::new(9))
            .unwrap();
        assert_eq!(a, b);
        assert!(s.make_queries(3, &mut SeededRng::new(9)).is_err());
        let zero = vec![vec![vec![Fe::ZERO; 1]; 2]; 3];
        let q0 = s
            .make_queries_with_noise(&s.selection(0).unwrap(), &zero)
            .unwrap();
        let q1 = s
            .make_queries_with_noise(&s.selection(1).unwrap(), &zero)
            .unwrap();
        assert_eq!(q0.queries[0], s.info_rows.row_vecs());
        assert_eq!(q1.queries[1], s.info_rows.row_vecs());
        assert!(q0.queries[1].iter().flatten().all(|v| v.is_zero()));
    }

    #[test]
    fn responses_are_bilinear_and_in_span() {
        let c = curve(11, &[3, 1, 0, 1]);
        let s = plan_scheme(&req(Geometry::Curve(c), 1, 1, None, 2)).unwrap();
        let f = *s.field();
        let mut rng = SeededRng::new(6);
        let q = s.make_queries(1, &mut rng).unwrap();
        let a = s
            .encode_storage(&random_files(&s, &mut rng), &mut rng)
            .unwrap();
        let b = s
            .encode_storage(&random_files(&s, &mut rng), &mut rng)
            .unwrap();
        let sum = StorageState {
            shares: a
                .shares
                .iter()
                .zip(&b.shares)
                .map(|(x, y)| {
                    x.iter()
                        .zip(y)
                        .map(|(u, v)| u.iter().zip(v).map(|(&p, &r)| f.add(p, r)).collect())
                        .collect()
                })
                .collect(),
        };
        let ra = s.respond_all(&a, &q);
        let rb = s.respond_all(&b, &q);
        let rs = s.respond_all(&sum, &q);
        for i in 0..s.params.n {
            assert_eq!(rs[i], f.add(ra[i], rb[i]));
        }
        let protocol = s.info_rows.stack(&s.noise_rows);
        assert!(protocol.solve_left(&ra, &f).is_some());
    }

    #[test]
    fn storage_lies_in_fragment_codes() {
        let c = curve(13, &[1, 2, 4, 0, 1, 1]);
        let s = plan_scheme(&req(Geometry::Curve(c), 1, 1, Some(2), 1)).unwrap();
        let f = *s.field();
        let mut rng = SeededRng::new(8);
        let files = random_files(&s, &mut rng);
        let st = s.encode_storage(&files, &mut rng).unwrap();
        for l in 0..s.params.l {
            let ones = Matrix::from_rows(vec![vec![Fe::ONE; s.params.n]], s.params.n);
            let code = ones.stack(&s.storage_rows[l]);
            assert!(code.solve_left(&st.shares[0][l], &f).is_some());
        }
        let zero = vec![vec![vec![Fe::ZERO; s.storage_noise.len()]; s.params.l]];
        let plain = s.encode_storage_with_noise(&files, &zero).unwrap();
        for l in 0..s.params.l {
            assert!(plain.shares[0][l].iter().all(|&v| v == files[0][l]));
        }
    }

    #[test]
    fn duplicated_point_fails_verification() {
        let f = Field::prime(13).unwrap();
        let s = plan_scheme(&req(Geometry::Line(f), 1, 1, Some(2), 1)).unwrap();
        let mut pts = s.points.clone();
        pts[1] = pts[0];
        let bad = PirScheme::from_parts(s.params.clone(), pts).unwrap();
        let r = verify_scheme(&bad, SecurityMode::DualDistance, 0).unwrap();
        assert!(!r.passed());
        assert!(bad.decode(&[Fe::ZERO; 4]).is_err());
    }

    #[test]
    fn mds_thresholds_are_exact() {
        let f = Field::prime(13).unwrap();
        let s = plan_scheme(&req(Geometry::Line(f), 2, 3, Some(3), 1)).unwrap();
        let r = verify_scheme(&s, SecurityMode::DualDistance, 1).unwrap();
        assert_eq!((r.x_achieved, r.t_achieved), (2, 3));
        assert_eq!(r.sigma_query[1].insecure, r.sigma_query[1].total);
        assert_eq!(r.sigma_query[0].insecure, 0);
    }

    /// For q = 5, T = 1: over all noise draws, a single server sees the same
    /// multiset of queries whichever file is requested.
    #[test]
    fn query_distribution_independent_of_index() {
        let f = Field::prime(5).unwrap();
        let s = plan_scheme(&req(Geometry::Line(f), 1, 1, Some(1), 2)).unwrap();
        assert_eq!(s.params.n, 3);
        for server in 0..3 {
            let hist = |mu: usize| {
                let mut h = vec![0u32; 25];
                for a in 0..5 {
                    for b in 0..5 {
                        let noise = vec![vec![vec![Fe(a)]], vec![vec![Fe(b)]]];
                        let q = s
                            .make_queries_with_noise(&s.selection(mu).unwrap(), &noise)
                            .unwrap();
                        let (u, v) = (q.queries[0][0][server], q.queries[1][0][server]);
                        h[(u.0 * 5 + v.0) as usize] += 1;
                    }
                }
                h
            };
            assert_eq!(hist(0), hist(1));
        }
    }

    #[test]
    fn rank_suite_small() {
        let c = curve(11, &[4, 2, 0, 1]);
        let s = plan_scheme(&req(Geometry::Curve(c), 2, 2, None, 1)).unwrap();
        let f = *s.field();
        assert!(first_deficient_subset(&s.query_rows, 2, &f).is_none());
        for l in 0..s.params.l {
            assert!(first_deficient_subset(&s.storage_rows[l], 2, &f).is_none());
        }
    }
}
