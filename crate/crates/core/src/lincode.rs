//! Linear codes given by evaluation of functions at ordered point lists.

use crate::curve::CurvePoint;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::funcspace::{eval_matrix, FunctionElement};
use crate::matrix::{Echelon, Matrix};

pub const MIN_DISTANCE_LIMIT: u128 = 1 << 26;
pub const SUBSET_LIMIT: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    field: Field,
    generator: Matrix,
    points: Vec<CurvePoint>,
}

impl LinearCode {
    /// Code spanned by the rows of `generator`, which must be independent.
    pub fn new(field: Field, generator: Matrix, points: Vec<CurvePoint>) -> Result<Self> {
        if points.len() != generator.cols() {
            return Err(Error::LengthMismatch {
                expected: generator.cols(),
                got: points.len(),
            });
        }
        let rank = generator.rank(&field);
        if rank != generator.rows() {
            return Err(Error::RankDeficient {
                rank,
                expected: generator.rows(),
            });
        }
        Ok(LinearCode {
            field,
            generator,
            points,
        })
    }

    /// Code spanned by the rows of `m`, reduced to a basis first.
    pub fn from_spanning(field: Field, m: &Matrix, points: Vec<CurvePoint>) -> Result<Self> {
        LinearCode::new(field, m.row_basis(&field), points)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.generator.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn encode(&self, msg: &[Fe]) -> Vec<Fe> {
        self.generator.left_mul(msg, &self.field)
    }

    pub fn contains(&self, word: &[Fe]) -> bool {
        self.generator.solve_left(word, &self.field).is_some()
    }

    /// Whether every codeword of `other` is a codeword of `self`.
    pub fn contains_code(&self, other: &LinearCode) -> bool {
        self.len() == other.len()
            && self
                .generator
                .row_space_contains(&other.generator, &self.field)
    }

    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.len() == other.len() && self.generator.same_row_space(&other.generator, &self.field)
    }

    /// Restriction to a subset of coordinates (not necessarily of full rank).
    pub fn column_rank(&self, cols: &[usize]) -> usize {
        self.generator.select_columns(cols).rank(&self.field)
    }

    pub fn dual(&self) -> LinearCode {
        let k = self.generator.kernel(&self.field);
        LinearCode {
            field: self.field,
            generator: k,
            points: self.points.clone(),
        }
    }

    pub fn min_distance(&self) -> Result<usize> {
        min_distance(self)
    }

    pub fn dual_distance(&self) -> Result<usize> {
        dual_distance(self)
    }
}

pub fn code_from_functions(
    functions: &[FunctionElement],
    points: &[CurvePoint],
    field: &Field,
) -> Result<LinearCode> {
    let m = eval_matrix(functions, points, field)?;
    LinearCode::new(*field, m, points.to_vec())
}

/// Minimum Hamming weight over nonzero codewords, by exhaustive enumeration of
/// codewords up to scalars.
pub fn min_distance(code: &LinearCode) -> Result<usize> {
    let f = code.field;
    let q = f.order() as u128;
    let k = code.dim();
    let n = code.len();
    if k == 0 {
        return Ok(n + 1);
    }
    let size = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > MIN_DISTANCE_LIMIT {
        return Err(Error::Guard {
            what: "minimum distance enumeration",
            size,
            limit: MIN_DISTANCE_LIMIT,
        });
    }
    let rows = code.generator.row_vecs();
    // Messages whose first nonzero coordinate is `lead` and equals 1.
    let best_for = |lead: usize, chunk: u64| -> usize {
        let free = k - lead - 1;
        let q64 = q as u64;
        let span = q64.pow(free as u32);
        let per = span.div_ceil(CHUNKS);
        let (lo, hi) = (chunk * per, ((chunk + 1) * per).min(span));
        let mut best = n;
        let mut word = vec![Fe::ZERO; n];
        for idx in lo..hi {
            word.copy_from_slice(&rows[lead]);
            let mut r = idx;
            for row in &rows[lead + 1..] {
                let c = Fe((r % q64) as u32);
                r /= q64;
                if !c.is_zero() {
                    for (w, &g) in word.iter_mut().zip(row) {
                        *w = f.add(*w, f.mul(c, g));
                    }
                }
            }
            let wt = word.iter().filter(|c| !c.is_zero()).count();
            best = best.min(wt);
        }
        best
    };
    const CHUNKS: u64 = 64;
    let jobs: Vec<(usize, u64)> = (0..k)
        .flat_map(|lead| (0..CHUNKS).map(move |c| (lead, c)))
        .collect();
    #[cfg(feature = "parallel")]
    let best = {
        use rayon::prelude::*;
        jobs.par_iter().map(|&(l, c)| best_for(l, c)).min()
    };
    #[cfg(not(feature = "parallel"))]
    let best = jobs.iter().map(|&(l, c)| best_for(l, c)).min();
    Ok(best.unwrap_or(n))
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Smallest number of generator columns that are linearly dependent, or
/// `k + 1` if no dependency exists among at most `k` columns.
pub fn dual_distance(code: &LinearCode) -> Result<usize> {
    let k = code.dim();
    let n = code.len();
    let cols: Vec<Vec<Fe>> = (0..n).map(|j| code.generator.column(j)).collect();
    let f = code.field;
    let mut best = k + 1;
    let mut visited: u128 = 0;
    // Depth-first over independent column sets; a column that fails to extend
    // the current set closes a dependent set of size depth + 1.
    fn dfs(
        start: usize,
        depth: usize,
        ech: &Echelon,
        cols: &[Vec<Fe>],
        f: &Field,
        best: &mut usize,
        visited: &mut u128,
    ) -> Result<()> {
        if depth + 1 >= *best {
            return Ok(());
        }
        for j in start..cols.len() {
            *visited += 1;
            if *visited > SUBSET_LIMIT {
                return Err(Error::Guard {
                    what: "dual distance subset search",
                    size: *visited,
                    limit: SUBSET_LIMIT,
                });
            }
            let mut next = ech.clone();
            if !next.insert(&cols[j], f) {
                *best = depth + 1;
                return Ok(());
            }
            dfs(j + 1, depth + 1, &next, cols, f, best, visited)?;
            if depth + 1 >= *best {
                return Ok(());
            }
        }
        Ok(())
    }
    dfs(0, 0, &Echelon::new(), &cols, &f, &mut best, &mut visited)?;
    Ok(best)
}

/// Coordinatewise products of all generator-row pairs, reduced to a basis.
pub fn star_product(c1: &LinearCode, c2: &LinearCode) -> Result<LinearCode> {
    if c1.len() != c2.len() {
        return Err(Error::LengthMismatch {
            expected: c1.len(),
            got: c2.len(),
        });
    }
    if c1.points != c2.points {
        return Err(Error::InvalidParams(
            "codes are evaluated at different points".into(),
        ));
    }
    let f = c1.field;
    let mut rows = Vec::with_capacity(c1.dim() * c2.dim());
    for r1 in c1.generator.row_vecs() {
        for r2 in c2.generator.row_vecs() {
            rows.push(r1.iter().zip(&r2).map(|(&a, &b)| f.mul(a, b)).collect());
        }
    }
    let m = Matrix::from_rows(rows, c1.len());
    LinearCode::from_spanning(f, &m, c1.points.clone())
}

/// Lexicographically first set of `size` independent columns.
pub fn information_set(code: &LinearCode, size: usize) -> Result<Vec<usize>> {
    information_set_of(&code.generator, size, &code.field)
}

pub(crate) fn information_set_of(m: &Matrix, size: usize, f: &Field) -> Result<Vec<usize>> {
    let mut ech = Echelon::new();
    let mut out = Vec::with_capacity(size);
    for j in 0..m.cols() {
        if out.len() == size {
            break;
        }
        if ech.insert(&m.column(j), f) {
            out.push(j);
        }
    }
    if out.len() < size {
        return Err(Error::RankDeficient {
            rank: out.len(),
            expected: size,
        });
    }
    Ok(out)
}

/// Count of `U`-subsets of coordinates on which the code has rank below `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaEntry {
    pub u: usize,
    pub insecure: u128,
    pub total: u128,
}

impl SigmaEntry {
    pub fn value(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.insecure as f64 / self.total as f64
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.10}",
            self.u,
            self.insecure,
            self.total,
            self.value()
        )
    }
}

pub const SIGMA_CSV_HEADER: &str = "U,insecure,total,sigma";

pub fn sigma_profile(code: &LinearCode, u: usize) -> Result<SigmaEntry> {
    let n = code.len();
    let k = code.dim();
    let total = binom(n, u);
    if u > k {
        return Ok(SigmaEntry {
            u,
            insecure: total,
            total,
        });
    }
    if total > SUBSET_LIMIT {
        return Err(Error::Guard {
            what: "sigma subset enumeration",
            size: total,
            limit: SUBSET_LIMIT,
        });
    }
    if u == 0 {
        return Ok(SigmaEntry {
            u,
            insecure: 0,
            total,
        });
    }
    let f = code.field;
    let cols: Vec<Vec<Fe>> = (0..n).map(|j| code.generator.column(j)).collect();
    // Once a prefix is dependent, every completion is too.
    fn count(start: usize, need: usize, ech: &Echelon, cols: &[Vec<Fe>], f: &Field) -> u128 {
        if need == 0 {
            return 0;
        }
        let mut acc = 0;
        for j in start..cols.len() {
            if cols.len() - j < need {
                break;
            }
            let mut next = ech.clone();
            if next.insert(&cols[j], f) {
                acc += count(j + 1, need - 1, &next, cols, f);
            } else {
                acc += binom(cols.len() - j - 1, need - 1);
            }
        }
        acc
    }
    let first = |j: usize| -> u128 {
        let mut e = Echelon::new();
        if e.insert(&cols[j], &f) {
            count(j + 1, u - 1, &e, &cols, &f)
        } else {
            binom(n - j - 1, u - 1)
        }
    };
    let last = n + 1 - u;
    #[cfg(feature = "parallel")]
    let insecure: u128 = {
        use rayon::prelude::*;
        (0..last).into_par_iter().map(first).sum()
    };
    #[cfg(not(feature = "parallel"))]
    let insecure: u128 = (0..last).map(first).sum();
    Ok(SigmaEntry { u, insecure, total })
}

/// Generalized Reed–Solomon generator: rows `ν_j·α_j^i` for `i < k`.
pub fn grs(field: &Field, alphas: &[Fe], multipliers: &[Fe], k: usize) -> Result<LinearCode> {
    let rows = (0..k)
        .map(|i| {
            alphas
                .iter()
                .zip(multipliers)
                .map(|(&a, &v)| field.mul(v, field.pow(a, i as u64)))
                .collect()
        })
        .collect();
    let points = alphas
        .iter()
        .map(|&a| CurvePoint::affine(a, Fe::ZERO))
        .collect();
    LinearCode::new(*field, Matrix::from_rows(rows, alphas.len()), points)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    binom(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn f13() -> Field {
        Field::prime(13).unwrap()
    }

    fn repetition(f: &Field, n: usize) -> LinearCode {
        let pts: Vec<CurvePoint> = f
            .elements()
            .take(n)
            .map(|x| CurvePoint::affine(x, Fe::ZERO))
            .collect();
        code_from_functions(&[FunctionElement::one()], &pts, f).unwrap()
    }

    fn rs(f: &Field, n: usize, k: usize) -> LinearCode {
        let alphas: Vec<Fe> = f.elements().take(n).collect();
        grs(f, &alphas, &vec![Fe::ONE; n], k).unwrap()
    }

    #[test]
    fn repetition_code() {
        let f = f13();
        let c = repetition(&f, 7);
        assert_eq!(c.min_distance().unwrap(), 7);
        assert_eq!(c.dual_distance().unwrap(), 2);
    }

    #[test]
    fn mds_distances() {
        let f = f13();
        let c = rs(&f, 10, 4);
        assert_eq!(c.min_distance().unwrap(), 7);
        assert_eq!(c.dual_distance().unwrap(), 5);
        assert_eq!(information_set(&c, 4).unwrap(), vec![0, 1, 2, 3]);
        let s = sigma_profile(&c, 4).unwrap();
        assert_eq!((s.insecure, s.total), (0, 210));
        assert_eq!(sigma_profile(&c, 5).unwrap().insecure, binomial(10, 5));
    }

    #[test]
    fn vandermonde_matches_monomials() {
        let f = f13();
        let pts: Vec<CurvePoint> = f
            .elements()
            .skip(2)
            .take(9)
            .map(|x| CurvePoint::affine(x, Fe::ZERO))
            .collect();
        let monos: Vec<FunctionElement> = (0..4)
            .map(|i| FunctionElement::poly(crate::poly::Poly::monomial(Fe::ONE, i)))
            .collect();
        let c = code_from_functions(&monos, &pts, &f).unwrap();
        let alphas: Vec<Fe> = pts.iter().map(|p| p.x().unwrap()).collect();
        let v = grs(&f, &alphas, &[Fe::ONE; 9], 4).unwrap();
        assert_eq!(c.generator(), v.generator());
    }

    #[test]
    fn dual_is_orthogonal_and_distances_agree() {
        let f = Field::prime(7).unwrap();
        let mut rng = SeededRng::new(8);
        for _ in 0..15 {
            let (k, n) = (2 + rng.below(3) as usize, 8);
            let m = Matrix::from_rows((0..k).map(|_| rng.elements(&f, n)).collect(), n);
            let pts = (0..n)
                .map(|i| CurvePoint::affine(Fe(i as u32 % 7), Fe(i as u32 / 7)))
                .collect();
            let Ok(c) = LinearCode::new(f, m, pts) else {
                continue;
            };
            let d = c.dual();
            assert_eq!(d.dim(), n - k);
            let prod = c.generator().mul(&d.generator().transpose(), &f);
            assert!(prod.row_vecs().iter().flatten().all(|x| x.is_zero()));
            let dd = c.dual_distance().unwrap();
            let md = d.min_distance().unwrap();
            assert_eq!(dd, md.min(k + 1));
            let cd = c.min_distance().unwrap();
            assert!(cd <= n - k + 1);
        }
    }

    #[test]
    fn star_products_of_rs() {
        let f = f13();
        let mut rng = SeededRng::new(21);
        for _ in 0..20 {
            let n = 3 + rng.below(10) as usize;
            let k = 1 + rng.below(n as u32) as usize;
            let l = 1 + rng.below(n as u32) as usize;
            let prod = star_product(&rs(&f, n, k), &rs(&f, n, l)).unwrap();
            assert!(prod.same_code(&rs(&f, n, (k + l - 1).min(n))));
        }
        let c = rs(&f, 8, 3);
        let rep = repetition(&f, 8);
        assert!(star_product(&rep, &c).unwrap().same_code(&c));
        assert!(star_product(&rs(&f, 8, 2), &rs(&f, 7, 2)).is_err());
    }

    #[test]
    fn guards() {
        let f = Field::prime(251).unwrap();
        let c = rs(&f, 20, 5);
        assert!(matches!(c.min_distance(), Err(Error::Guard { .. })));
        let c = rs(&f, 200, 20);
        assert!(matches!(sigma_profile(&c, 10), Err(Error::Guard { .. })));
    }

    #[test]
    fn sigma_matches_brute_force() {
        let f = Field::prime(5).unwrap();
        let mut rng = SeededRng::new(3);
        let n = 9;
        let m = Matrix::from_rows((0..4).map(|_| rng.elements(&f, n)).collect(), n);
        let pts = (0..n)
            .map(|i| CurvePoint::affine(Fe(i as u32 % 5), Fe(i as u32 / 5)))
            .collect();
        let c = LinearCode::new(f, m, pts).unwrap();
        for u in 1..=4 {
            let mut brute = 0u128;
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != u {
                    continue;
                }
                let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
                if c.column_rank(&cols) < u {
                    brute += 1;
                }
            }
            let s = sigma_profile(&c, u).unwrap();
            assert_eq!(s.insecure, brute, "U={u}");
            assert_eq!(s.total, binomial(n, u));
        }
    }
}
