//! Brute-force ground truth for the closed-form and fast-path computations.
//!
//! Nothing here calls into the row-reduction, kernel, image or Jordan-type
//! routines of the library. Matrices are copied into plain `u64` arrays and
//! handled with a separate textbook elimination that inverts by Fermat's
//! little theorem. Everything is exponential in the dimension on purpose.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analyzer::{AnalyzerError, NormFiltrationModel};
use crate::linalg::{FpMatrix, Prime, Subspace};
use crate::module::{GModule, JordanType, ModuleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Analyzer(#[from] AnalyzerError),
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("level {level} is outside 0..={n}")]
    LevelOutOfRange { level: u32, n: u32 },
    #[error("fixed submodule has dimension {dim}; chain enumeration is capped at {max}")]
    FixedSpaceTooLarge { dim: usize, max: usize },
}

/// Largest fixed-space dimension for which W-chains are enumerated.
pub const MAX_CHAIN_FIXED_DIM: usize = 4;

/// Cap on `p^dim` for exhaustive vector enumeration, plus the seed used when
/// the cap is exceeded and checks fall back to sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_elements: u64,
    pub seed: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_elements: 729,
            seed: 0,
        }
    }
}

/// Vectors a property should be checked on, and whether that list is exhaustive.
pub struct VectorSample {
    pub vectors: Vec<Vec<u16>>,
    pub exhaustive: bool,
}

impl EnumerationBudget {
    pub fn allows(&self, p: u32, dim: usize) -> bool {
        (p as u64)
            .checked_pow(dim as u32)
            .is_some_and(|total| total <= self.max_elements)
    }

    /// All of `𝔽p^dim` when within budget, otherwise `samples` seeded random vectors.
    pub fn vectors(&self, p: u32, dim: usize, samples: usize) -> VectorSample {
        if self.allows(p, dim) {
            VectorSample {
                vectors: all_vectors(p, dim),
                exhaustive: true,
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ ((p as u64) << 32) ^ dim as u64);
            let vectors = (0..samples)
                .map(|_| (0..dim).map(|_| rng.gen_range(0..p) as u16).collect())
                .collect();
            VectorSample {
                vectors,
                exhaustive: false,
            }
        }
    }
}

/// Every vector of `𝔽p^dim`, little-endian counting order.
pub fn all_vectors(p: u32, dim: usize) -> Vec<Vec<u16>> {
    let total = (p as usize).pow(dim as u32);
    (0..total)
        .map(|mut code| {
            (0..dim)
                .map(|_| {
                    let digit = (code % p as usize) as u16;
                    code /= p as usize;
                    digit
                })
                .collect()
        })
        .collect()
}

type Mat = Vec<Vec<u64>>;

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn copy_matrix(m: &FpMatrix) -> Mat {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c) as u64).collect())
        .collect()
}

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &Mat, b: &Mat, p: u64) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).map(|k| row[k] * b[k][c] % p).sum::<u64>() % p)
                .collect()
        })
        .collect()
}

fn mat_vec(a: &Mat, v: &[u64], p: u64) -> Vec<u64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y % p).sum::<u64>() % p)
        .collect()
}

fn minus_identity(a: &Mat, p: u64) -> Mat {
    a.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| if i == j { (x + p - 1) % p } else { x })
                .collect()
        })
        .collect()
}

/// Rank of a list of vectors by plain Gaussian elimination.
fn rank(mut rows: Mat, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][c], p);
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&x| x * inv % p).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[c] % p;
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

fn transpose(a: &Mat) -> Mat {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|c| a.iter().map(|row| row[c]).collect()).collect()
}

/// Gauss–Jordan inverse; `None` when singular.
fn invert(a: &Mat, p: u64) -> Option<Mat> {
    let n = a.len();
    let mut aug: Mat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n).find(|&r| aug[r][c] != 0)?;
        aug.swap(c, pivot);
        let inv = inv_mod(aug[c][c], p);
        for x in aug[c].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = aug[c].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            let f = row[c];
            if r != c && f != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Null space of `a` by exhaustive search over all vectors.
fn null_space_by_search(a: &Mat, dim: usize, p: u64) -> Mat {
    let mut basis: Mat = Vec::new();
    for v in all_vectors(p as u32, dim) {
        let v: Vec<u64> = v.into_iter().map(u64::from).collect();
        if mat_vec(a, &v, p).iter().all(|&x| x == 0) {
            let mut candidate = basis.clone();
            candidate.push(v.clone());
            if rank(candidate, p) > basis.len() {
                basis.push(v);
            }
        }
    }
    basis
}

fn to_u16(v: &[u64]) -> Vec<u16> {
    v.iter().map(|&x| x as u16).collect()
}

/// Dimension of the span of the orbit `{σ^j u : j < pⁿ}`.
pub fn brute_length(module: &GModule, u: &[u16]) -> usize {
    let p = module.group().p() as u64;
    let sigma = copy_matrix(module.sigma());
    let start: Vec<u64> = u.iter().map(|&x| x as u64).collect();
    let mut orbit = vec![start.clone()];
    let mut v = start.clone();
    for _ in 1..module.group().order() {
        v = mat_vec(&sigma, &v, p);
        if v == start {
            break;
        }
        orbit.push(v.clone());
    }
    rank(orbit, p)
}

/// Jordan type of `σ^{p^k}` from the ranks of the powers of `σ^{p^k} - 1`.
///
/// The number of blocks of size at least `i` is `r_{i-1} - r_i`; the type is
/// the conjugate of that sequence.
pub fn brute_restriction(module: &GModule, k: u32) -> Result<JordanType, OracleError> {
    let group = module.group();
    if k > group.n() {
        return Err(OracleError::LevelOutOfRange { level: k, n: group.n() });
    }
    let p = group.p() as u64;
    let dim = module.dim();
    let sigma = copy_matrix(module.sigma());
    let mut tau = identity(dim);
    for _ in 0..(group.p() as usize).pow(k) {
        tau = mat_mul(&tau, &sigma, p);
    }
    let nil = minus_identity(&tau, p);
    let mut ranks = vec![dim];
    let mut power = identity(dim);
    while *ranks.last().expect("nonempty") > 0 {
        power = mat_mul(&power, &nil, p);
        ranks.push(rank(power.clone(), p));
        if ranks.len() > dim + 2 {
            return Err(ModuleError::NotUnipotent { order: group.order() }.into());
        }
    }
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let blocks = at_least.first().copied().unwrap_or(0);
    let parts = (0..blocks)
        .map(|b| at_least.iter().filter(|&&c| c > b).count())
        .collect();
    Ok(JordanType::new(parts)?)
}

/// Whether the subspaces are independent: the span has the summed dimension.
pub fn brute_directness(parts: &[Subspace]) -> Result<bool, OracleError> {
    let Some(first) = parts.first() else {
        return Ok(true);
    };
    if parts
        .iter()
        .any(|s| s.ambient_dim() != first.ambient_dim() || s.prime() != first.prime())
    {
        return Err(OracleError::AmbientMismatch);
    }
    let p = first.prime().value() as u64;
    let rows: Mat = parts
        .iter()
        .flat_map(|s| s.vectors())
        .map(|v| v.into_iter().map(u64::from).collect())
        .collect();
    let total: usize = parts.iter().map(Subspace::dim).sum();
    Ok(rank(rows, p) == total)
}

/// Gaussian binomial coefficient `[n choose k]_q`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Number of chains `V = W_0 ⊇ W_1 ⊇ … ⊇ W_levels ⊇ B` when `dim V/B = quotient_dim`.
pub fn expected_chain_count(quotient_dim: usize, levels: u32, q: u64) -> u128 {
    fn rec(top: usize, left: u32, q: u64) -> u128 {
        if left == 0 {
            return 1;
        }
        (0..=top).map(|d| gaussian_binomial(top, d, q) * rec(d, left - 1, q)).sum()
    }
    rec(quotient_dim, levels, q)
}

/// All coefficient matrices in reduced row echelon form with `k` rows and `q` columns.
fn rref_patterns(k: usize, q: usize, p: u64) -> Vec<Mat> {
    fn choose(start: usize, q: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..q {
            cur.push(c);
            choose(c + 1, q, k, cur, out);
            cur.pop();
        }
    }
    let mut pivot_sets = Vec::new();
    choose(0, q, k, &mut Vec::new(), &mut pivot_sets);
    let mut out = Vec::new();
    for pivots in pivot_sets {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pivots = pivots.clone();
                ((pivots[r] + 1)..q)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        for fill in all_vectors(p as u32, free.len()) {
            let mut m = vec![vec![0u64; q]; k];
            for (r, &c) in pivots.iter().enumerate() {
                m[r][c] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(&fill) {
                m[r][c] = v as u64;
            }
            out.push(m);
        }
    }
    out
}

/// Every subspace of `span(basis)` (basis assumed independent), as ambient vectors.
fn all_subspaces_of(basis: &Mat, p: u64) -> Vec<Mat> {
    let q = basis.len();
    (0..=q)
        .flat_map(|k| rref_patterns(k, q, p))
        .map(|coeffs| {
            if coeffs.is_empty() {
                Vec::new()
            } else {
                mat_mul(&coeffs, basis, p)
            }
        })
        .collect()
}

fn spans_contain(big: &Mat, small: &Mat, p: u64) -> bool {
    let mut both = big.clone();
    both.extend(small.iter().cloned());
    rank(both, p) == rank(big.clone(), p)
}

/// Every chain `X^G = W_0 ⊇ W_1 ⊇ … ⊇ W_n ⊇ ρ^{pⁿ-1}X`, packaged as a model.
pub fn enumerate_w_chains(module: &GModule) -> Result<Vec<NormFiltrationModel>, OracleError> {
    let group = module.group();
    let p = group.p() as u64;
    let dim = module.dim();
    let rho = minus_identity(&copy_matrix(module.sigma()), p);
    let fixed_dim = dim - rank(rho.clone(), p);
    if fixed_dim > MAX_CHAIN_FIXED_DIM {
        return Err(OracleError::FixedSpaceTooLarge {
            dim: fixed_dim,
            max: MAX_CHAIN_FIXED_DIM,
        });
    }
    let fixed = null_space_by_search(&rho, dim, p);
    let mut norm = identity(dim);
    for _ in 0..group.order() - 1 {
        norm = mat_mul(&norm, &rho, p);
    }
    let floor = transpose(&norm);

    let candidates: Vec<Mat> = all_subspaces_of(&fixed, p)
        .into_iter()
        .filter(|s| spans_contain(s, &floor, p))
        .collect();

    let prime = Prime::new(group.p()).expect("group prime");
    let to_subspace = |rows: &Mat| {
        let rows: Vec<Vec<u16>> = rows.iter().map(|r| to_u16(r)).collect();
        Subspace::span(&prime, dim, &rows).expect("module dimension")
    };

    let n = group.n() as usize;
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(chain) = stack.pop() {
        if chain.len() == n {
            chains.push(chain);
            continue;
        }
        let above: &Mat = chain.last().map_or(&fixed, |&i| &candidates[i]);
        for (i, c) in candidates.iter().enumerate().rev() {
            if spans_contain(above, c, p) {
                let mut next = chain.clone();
                next.push(i);
                stack.push(next);
            }
        }
    }

    let top = to_subspace(&fixed);
    chains
        .into_iter()
        .map(|chain| {
            let mut levels = vec![top.clone()];
            levels.extend(chain.iter().map(|&i| to_subspace(&candidates[i])));
            NormFiltrationModel::new(module.clone(), levels, 1).map_err(OracleError::from)
        })
        .collect()
}

/// `T σ T⁻¹` for a seeded random invertible `T`.
pub fn random_conjugate(module: &GModule, seed: u64) -> Result<GModule, OracleError> {
    let p = module.group().p() as u64;
    let dim = module.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (t, t_inv) = loop {
        let t: Mat = (0..dim)
            .map(|_| (0..dim).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        if let Some(inv) = invert(&t, p) {
            break (t, inv);
        }
    };
    let conj = mat_mul(&mat_mul(&t, &copy_matrix(module.sigma()), p), &t_inv, p);
    let data: Vec<u16> = conj.iter().flat_map(|r| to_u16(r)).collect();
    let sigma = FpMatrix::new(module.prime(), dim, dim, data).map_err(ModuleError::from)?;
    Ok(GModule::new(module.group(), sigma)?)
}
