use std::fmt;

use super::gf2;
use super::{LinalgError, Prime, Subspace};

/// Dense row-major matrix over 𝔽p.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    prime: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

/// Result of row reduction: the reduced matrix (zero rows last), its pivot
/// columns in increasing order, and the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl FpMatrix {
    pub fn new(prime: &Prime, rows: usize, cols: usize, data: Vec<u16>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(&v) = data.iter().find(|&&v| v as u32 >= prime.value()) {
            return Err(LinalgError::NotReduced {
                value: v as u64,
                p: prime.value(),
            });
        }
        Ok(FpMatrix {
            prime: prime.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from row vectors of equal length `cols`.
    pub fn from_rows(prime: &Prime, cols: usize, rows: &[Vec<u16>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(prime, rows.len(), cols, data)
    }

    /// Reduces arbitrary integers mod p.
    pub fn from_i64(prime: &Prime, rows: usize, cols: usize, entries: &[i64]) -> Result<Self, LinalgError> {
        let data = entries.iter().map(|&v| prime.reduce(v)).collect();
        Self::new(prime, rows, cols, data)
    }

    pub fn zeros(prime: &Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            prime: prime.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(prime: &Prime, n: usize) -> Self {
        let mut m = Self::zeros(prime, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Block-diagonal matrix with the given square or rectangular blocks.
    pub fn block_diagonal(prime: &Prime, blocks: &[&FpMatrix]) -> Result<Self, LinalgError> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(prime, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            prime.same_as(&b.prime)?;
            for r in 0..b.rows {
                let dst = (r0 + r) * cols + c0;
                m.data[dst..dst + b.cols].copy_from_slice(b.row(r));
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(m)
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[u16] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        assert!((v as u32) < self.prime.value());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u16>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(&self.prime, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    fn same_shape(&self, other: &FpMatrix) -> Result<(), LinalgError> {
        self.prime.same_as(&other.prime)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix, LinalgError> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.prime.add(a, b))
            .collect();
        Ok(FpMatrix { data, ..self.clone() })
    }

    pub fn sub(&self, other: &FpMatrix) -> Result<FpMatrix, LinalgError> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.prime.sub(a, b))
            .collect();
        Ok(FpMatrix { data, ..self.clone() })
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix, LinalgError> {
        self.prime.same_as(&other.prime)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let (n, m, k) = (self.rows, self.cols, other.cols);
        let data = if self.prime.value() == 2 {
            gf2::mul(n, m, k, &self.data, &other.data)
        } else {
            let p = self.prime.value() as u64;
            let mut acc = vec![0u64; n * k];
            for i in 0..n {
                let out = &mut acc[i * k..(i + 1) * k];
                for j in 0..m {
                    let a = self.data[i * m + j] as u64;
                    if a == 0 {
                        continue;
                    }
                    for (o, &b) in out.iter_mut().zip(other.row(j)) {
                        *o = (*o + a * b as u64) % p;
                    }
                }
            }
            acc.into_iter().map(|v| v as u16).collect()
        };
        Ok(FpMatrix {
            prime: self.prime.clone(),
            rows: n,
            cols: k,
            data,
        })
    }

    /// `M·v` for a column vector `v`.
    pub fn apply(&self, v: &[u16]) -> Result<Vec<u16>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let p = self.prime.value() as u64;
        Ok((0..self.rows)
            .map(|r| {
                let s = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |s, (&a, &b)| (s + a as u64 * b as u64) % p);
                s as u16
            })
            .collect())
    }

    /// `M^e` by repeated squaring; `M^0 = I`.
    pub fn pow(&self, mut e: u64) -> Result<FpMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut result = Self::identity(&self.prime, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Reduced row echelon form. Pivots are chosen leftmost column first,
    /// topmost candidate row first.
    pub fn rref(&self) -> Rref {
        let mut matrix = self.clone();
        let pivots = if self.prime.value() == 2 {
            let mut bits = gf2::BitRows::pack(self.rows, self.cols, &self.data);
            let pivots = bits.rref(self.cols);
            matrix.data = bits.unpack(self.cols);
            pivots
        } else {
            matrix.rref_dense_in_place()
        };
        let rank = pivots.len();
        Rref {
            matrix,
            pivots,
            rank,
        }
    }

    pub(crate) fn rref_dense_in_place(&mut self) -> Vec<usize> {
        let prime = self.prime.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(i) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if i != r {
                for j in 0..cols {
                    self.data.swap(i * cols + j, r * cols + j);
                }
            }
            let inv = prime.inv(self.data[r * cols + c]).expect("nonzero pivot");
            for j in c..cols {
                self.data[r * cols + j] = prime.mul(self.data[r * cols + j], inv);
            }
            let pivot_row: Vec<u16> = self.data[r * cols..(r + 1) * cols].to_vec();
            for k in 0..self.rows {
                let f = self.data[k * cols + c];
                if k == r || f == 0 {
                    continue;
                }
                let nf = prime.neg(f);
                for j in c..cols {
                    let v = self.data[k * cols + j];
                    self.data[k * cols + j] = prime.add(v, prime.mul(nf, pivot_row[j]));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// `{ v : M v = 0 }`.
    pub fn kernel_basis(&self) -> Subspace {
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let vectors: Vec<Vec<u16>> = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0u16; self.cols];
                v[f] = 1;
                for (i, &c) in pivots.iter().enumerate() {
                    v[c] = self.prime.neg(matrix.get(i, f));
                }
                v
            })
            .collect();
        Subspace::span(&self.prime, self.cols, &vectors).expect("kernel vectors have the right length")
    }

    /// Column space of `M`.
    pub fn image_basis(&self) -> Subspace {
        Subspace::row_space(&self.transpose())
    }

    /// Canonical solution of `M x = b`: the free variables are set to zero.
    pub fn solve(&self, b: &[u16]) -> Result<Option<Vec<u16>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let cols = self.cols + 1;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.push(b[r]);
        }
        let aug = FpMatrix {
            prime: self.prime.clone(),
            rows: self.rows,
            cols,
            data,
        };
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u16; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = matrix.get(i, self.cols);
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.prime, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}
