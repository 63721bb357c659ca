use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{FpMatrix, LinalgError, Prime};

/// A subspace of 𝔽p^ambient_dim, stored as the nonzero rows of its reduced
/// row echelon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(prime: &Prime, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: FpMatrix::zeros(prime, 0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(prime: &Prime, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: FpMatrix::identity(prime, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Row space of `m`.
    pub fn row_space(m: &FpMatrix) -> Self {
        let rref = m.rref();
        let rows: Vec<Vec<u16>> = (0..rref.rank).map(|r| rref.matrix.row(r).to_vec()).collect();
        Subspace {
            ambient_dim: m.cols(),
            basis: FpMatrix::from_rows(m.prime(), m.cols(), &rows).expect("rref rows"),
            pivots: rref.pivots,
        }
    }

    pub fn span(prime: &Prime, ambient_dim: usize, vectors: &[Vec<u16>]) -> Result<Self, LinalgError> {
        Ok(Self::row_space(&FpMatrix::from_rows(prime, ambient_dim, vectors)?))
    }

    pub fn prime(&self) -> &Prime {
        self.basis.prime()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Canonical basis rows (reduced row echelon form).
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> Vec<Vec<u16>> {
        self.basis.row_vecs()
    }

    fn compatible(&self, other: &Subspace) -> Result<(), LinalgError> {
        self.prime().same_as(other.prime())?;
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` lies in the subspace.
    fn residual(&self, v: &[u16]) -> Vec<u16> {
        let prime = self.prime();
        let mut v = v.to_vec();
        for (i, &c) in self.pivots.iter().enumerate() {
            let f = v[c];
            if f == 0 {
                continue;
            }
            let nf = prime.neg(f);
            for (x, &b) in v.iter_mut().zip(self.basis.row(i)).skip(c) {
                *x = prime.add(*x, prime.mul(nf, b));
            }
        }
        v
    }

    pub fn contains(&self, v: &[u16]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        Ok(self.residual(v).iter().all(|&x| x == 0))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.compatible(other)?;
        Ok((0..self.dim()).all(|r| other.residual(self.basis.row(r)).iter().all(|&x| x == 0)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.compatible(other)?;
        let mut rows = self.vectors();
        rows.extend(other.vectors());
        Subspace::span(self.prime(), self.ambient_dim, &rows)
    }

    /// `U ∩ W`, read off the kernel of `[Uᵀ | Wᵀ]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.compatible(other)?;
        let prime = self.prime();
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Ok(Subspace::zero(prime, self.ambient_dim));
        }
        let mut stacked = self.vectors();
        stacked.extend(other.vectors());
        let system = FpMatrix::from_rows(prime, self.ambient_dim, &stacked)?.transpose();
        let kernel = system.kernel_basis();
        let vectors: Vec<Vec<u16>> = kernel
            .vectors()
            .iter()
            .map(|coeffs| {
                let mut v = vec![0u16; self.ambient_dim];
                for (i, &c) in coeffs[..a].iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for (x, &u) in v.iter_mut().zip(self.basis.row(i)) {
                        *x = prime.add(*x, prime.mul(c, u));
                    }
                }
                v
            })
            .collect();
        Subspace::span(prime, self.ambient_dim, &vectors)
    }

    /// A complement `C` of `sub` inside `self`, so that `C ⊕ sub = self`.
    ///
    /// Starting from the basis of `sub`, the basis rows of `self` are taken
    /// in order and kept whenever they raise the rank.
    pub fn complement(&self, sub: &Subspace) -> Result<Subspace, LinalgError> {
        if !sub.is_subspace_of(self)? {
            return Err(LinalgError::NotContained);
        }
        let mut echelon = Echelon::new(self.prime(), self.ambient_dim);
        for v in sub.vectors() {
            echelon.insert(&v);
        }
        let chosen: Vec<Vec<u16>> = self.vectors().into_iter().filter(|v| echelon.insert(v)).collect();
        Subspace::span(self.prime(), self.ambient_dim, &chosen)
    }

    /// Image of the subspace under `m` acting on column vectors.
    pub fn map(&self, m: &FpMatrix) -> Result<Subspace, LinalgError> {
        self.prime().same_as(m.prime())?;
        let images = self
            .vectors()
            .iter()
            .map(|v| m.apply(v))
            .collect::<Result<Vec<_>, _>>()?;
        Subspace::span(self.prime(), m.rows(), &images)
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Subspace", 3)?;
        st.serialize_field("ambient_dim", &self.ambient_dim)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("basis", &self.vectors())?;
        st.end()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: {:?})", self.dim(), self.ambient_dim, self.vectors())
    }
}

/// Incremental echelon basis; `insert` reports whether a vector raised the rank.
pub(crate) struct Echelon {
    prime: Prime,
    dim: usize,
    rows: Vec<(usize, Vec<u16>)>,
}

impl Echelon {
    pub(crate) fn new(prime: &Prime, dim: usize) -> Self {
        Echelon {
            prime: prime.clone(),
            dim,
            rows: Vec::new(),
        }
    }

    pub(crate) fn insert(&mut self, v: &[u16]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let prime = &self.prime;
        let mut v = v.to_vec();
        for (c, row) in &self.rows {
            let f = v[*c];
            if f == 0 {
                continue;
            }
            let nf = prime.neg(f);
            for (x, &b) in v.iter_mut().zip(row) {
                *x = prime.add(*x, prime.mul(nf, b));
            }
        }
        let Some(lead) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = prime.inv(v[lead]).expect("nonzero");
        for x in v.iter_mut() {
            *x = prime.mul(*x, inv);
        }
        self.rows.push((lead, v));
        true
    }
}
