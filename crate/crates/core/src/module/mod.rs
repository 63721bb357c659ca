//! Modules over 𝔽p[G] for a cyclic group `G = ⟨σ⟩` of order pⁿ.
//!
//! A module is a dimension together with the matrix of σ. Everything else is
//! read off the nilpotent operator `ρ = σ - 1`.

mod decompose;
mod exclusion;
mod jordan;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{FpMatrix, LinalgError, Prime, Subspace};

pub use decompose::Decomposition;
pub use exclusion::ExclusionReport;
pub use jordan::{restrict_cyclic_type, JordanType};

/// Upper bound on the group order pⁿ.
pub const MAX_GROUP_ORDER: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("group order {p}^{n} exceeds the supported maximum {max}", max = MAX_GROUP_ORDER)]
    GroupTooLarge { p: u32, n: u32 },
    #[error("sigma is not unipotent: (sigma - 1)^{order} != 0")]
    NotUnipotent { order: usize },
    #[error("module characteristic {found} does not match group characteristic {expected}")]
    CharacteristicMismatch { expected: u32, found: u32 },
    #[error("vector of length {found} does not live in a module of dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("block of size {size} exceeds the group order {order}")]
    BlockTooLarge { size: usize, order: usize },
    #[error("level {level} is outside 0..={n}")]
    LevelOutOfRange { level: u32, n: u32 },
    #[error("length {length} is outside 1..={order}")]
    LengthOutOfRange { length: usize, order: usize },
    #[error("modules are over different groups")]
    GroupMismatch,
    #[error("part {index} is not stable under sigma")]
    NotInvariant { index: usize },
    #[error("invalid Jordan type: {0}")]
    InvalidJordanType(String),
    #[error("internal consistency check failed: {0}")]
    InternalCheckFailed(String),
}

/// The cyclic group of order pⁿ, together with its tower of subgroups
/// `H_k = ⟨σ^{p^k}⟩` (order p^{n-k}) and quotients `G_i` (order p^i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    prime: Prime,
    n: u32,
    order: usize,
}

impl GroupSpec {
    pub fn new(p: u32, n: u32) -> Result<Self, ModuleError> {
        Self::from_prime(&Prime::new(p)?, n)
    }

    pub fn from_prime(prime: &Prime, n: u32) -> Result<Self, ModuleError> {
        let order = prime
            .checked_pow(n)
            .filter(|&o| o <= MAX_GROUP_ORDER as u64)
            .ok_or(ModuleError::GroupTooLarge { p: prime.value(), n })?;
        Ok(GroupSpec {
            prime: prime.clone(),
            n,
            order: order as usize,
        })
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    pub fn p(&self) -> u32 {
        self.prime.value()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// pⁿ.
    pub fn order(&self) -> usize {
        self.order
    }

    /// p^i for `i ≤ n`.
    pub fn power(&self, i: u32) -> usize {
        assert!(i <= self.n, "exponent {i} above n = {}", self.n);
        (self.prime.value() as usize).pow(i)
    }

    pub fn is_power_of_p(&self, x: usize) -> bool {
        let p = self.prime.value() as usize;
        let mut q = 1;
        while q < x {
            q *= p;
        }
        q == x
    }

    /// The subgroup `H_k`, as a group of order p^{n-k}.
    pub fn subgroup(&self, k: u32) -> Result<GroupSpec, ModuleError> {
        if k > self.n {
            return Err(ModuleError::LevelOutOfRange { level: k, n: self.n });
        }
        GroupSpec::from_prime(&self.prime, self.n - k)
    }

    /// The quotient `G_i = G / H_i`, of order p^i.
    pub fn quotient(&self, i: u32) -> Result<GroupSpec, ModuleError> {
        if i > self.n {
            return Err(ModuleError::LevelOutOfRange { level: i, n: self.n });
        }
        GroupSpec::from_prime(&self.prime, i)
    }
}

/// Unipotent Jordan block of the given size: `I + N` with `N` the upper shift.
/// The last basis vector generates the block.
pub fn jordan_block(prime: &Prime, size: usize) -> FpMatrix {
    let mut m = FpMatrix::identity(prime, size);
    for i in 1..size {
        m.set(i - 1, i, 1);
    }
    m
}

/// A finite-dimensional 𝔽p[G]-module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    group: GroupSpec,
    sigma: FpMatrix,
    rho: FpMatrix,
}

impl GModule {
    /// Validates that `sigma` is square over the group's field and that
    /// `(sigma - 1)^{pⁿ} = 0`.
    pub fn new(group: &GroupSpec, sigma: FpMatrix) -> Result<Self, ModuleError> {
        if sigma.prime() != group.prime() {
            return Err(ModuleError::CharacteristicMismatch {
                expected: group.p(),
                found: sigma.prime().value(),
            });
        }
        if !sigma.is_square() {
            return Err(LinalgError::NotSquare {
                rows: sigma.rows(),
                cols: sigma.cols(),
            }
            .into());
        }
        let dim = sigma.rows();
        let rho = sigma.sub(&FpMatrix::identity(group.prime(), dim))?;
        // ρ is nilpotent iff ρ^dim = 0, so checking min(pⁿ, dim) suffices
        if !rho.pow(group.order().min(dim) as u64)?.is_zero() {
            return Err(ModuleError::NotUnipotent { order: group.order() });
        }
        Ok(GModule {
            group: group.clone(),
            sigma,
            rho,
        })
    }

    pub fn trivial(group: &GroupSpec, dim: usize) -> Self {
        GModule::new(group, FpMatrix::identity(group.prime(), dim)).expect("identity is unipotent")
    }

    /// Block-diagonal unipotent Jordan matrix realizing `jordan_type`.
    pub fn from_jordan_type(group: &GroupSpec, jordan_type: &JordanType) -> Result<Self, ModuleError> {
        if let Some(&size) = jordan_type.parts().iter().find(|&&s| s > group.order()) {
            return Err(ModuleError::BlockTooLarge {
                size,
                order: group.order(),
            });
        }
        let blocks: Vec<FpMatrix> = jordan_type
            .parts()
            .iter()
            .map(|&s| jordan_block(group.prime(), s))
            .collect();
        let refs: Vec<&FpMatrix> = blocks.iter().collect();
        let sigma = FpMatrix::block_diagonal(group.prime(), &refs)?;
        GModule::new(group, sigma)
    }

    /// Free module of the given rank over 𝔽p[G].
    pub fn free(group: &GroupSpec, rank: usize) -> Self {
        GModule::from_jordan_type(group, &JordanType::new(vec![group.order(); rank]).expect("positive"))
            .expect("blocks of size pⁿ fit")
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn prime(&self) -> &Prime {
        self.group.prime()
    }

    pub fn dim(&self) -> usize {
        self.sigma.rows()
    }

    pub fn sigma(&self) -> &FpMatrix {
        &self.sigma
    }

    /// `ρ = σ - 1`.
    pub fn rho(&self) -> &FpMatrix {
        &self.rho
    }

    pub fn rho_power(&self, e: usize) -> FpMatrix {
        self.rho.pow(e as u64).expect("square")
    }

    /// `ρ^0, ρ^1, …, ρ^s` where `ρ^s` is the first zero power.
    pub(crate) fn rho_powers(&self) -> Vec<FpMatrix> {
        let mut powers = vec![FpMatrix::identity(self.prime(), self.dim())];
        while !powers.last().expect("nonempty").is_zero() {
            let next = powers.last().expect("nonempty").mul(&self.rho).expect("square");
            powers.push(next);
        }
        powers
    }

    fn check_vector(&self, u: &[u16]) -> Result<(), ModuleError> {
        if u.len() != self.dim() {
            return Err(ModuleError::DimensionMismatch {
                expected: self.dim(),
                found: u.len(),
            });
        }
        if let Some(&v) = u.iter().find(|&&v| v as u32 >= self.group.p()) {
            return Err(LinalgError::NotReduced {
                value: v as u64,
                p: self.group.p(),
            }
            .into());
        }
        Ok(())
    }

    /// `X^G = ker ρ`.
    pub fn fixed_submodule(&self) -> Subspace {
        self.rho.kernel_basis()
    }

    /// `[u, ρu, …, ρ^{l-1}u]` where `l` is the length of `u`.
    pub fn cyclic_basis(&self, u: &[u16]) -> Result<Vec<Vec<u16>>, ModuleError> {
        self.check_vector(u)?;
        let mut out = Vec::new();
        let mut v = u.to_vec();
        while v.iter().any(|&x| x != 0) {
            let next = self.rho.apply(&v)?;
            out.push(v);
            v = next;
        }
        Ok(out)
    }

    /// Dimension of the submodule generated by `u`; zero for `u = 0`.
    pub fn length(&self, u: &[u16]) -> Result<usize, ModuleError> {
        Ok(self.cyclic_basis(u)?.len())
    }

    /// The submodule `⟨u⟩`, spanned by `u, ρu, …, ρ^{l(u)-1}u`.
    pub fn cyclic_submodule(&self, u: &[u16]) -> Result<Subspace, ModuleError> {
        let basis = self.cyclic_basis(u)?;
        Ok(Subspace::span(self.prime(), self.dim(), &basis)?)
    }

    /// `rank ρ^i` for `i = 0, 1, …` up to and including the first zero.
    pub fn rank_sequence(&self) -> Vec<usize> {
        self.rho_powers().iter().map(FpMatrix::rank).collect()
    }

    pub fn jordan_type(&self) -> JordanType {
        JordanType::from_rank_sequence(&self.rank_sequence())
    }

    pub fn is_isomorphic(&self, other: &GModule) -> Result<bool, ModuleError> {
        if self.group != other.group {
            return Err(ModuleError::GroupMismatch);
        }
        Ok(self.dim() == other.dim() && self.jordan_type() == other.jordan_type())
    }

    pub fn direct_sum(&self, other: &GModule) -> Result<GModule, ModuleError> {
        if self.group != other.group {
            return Err(ModuleError::GroupMismatch);
        }
        let sigma = FpMatrix::block_diagonal(self.prime(), &[&self.sigma, &other.sigma])?;
        GModule::new(&self.group, sigma)
    }

    /// Restriction to `H_k = ⟨σ^{p^k}⟩`.
    pub fn restrict(&self, k: u32) -> Result<GModule, ModuleError> {
        let subgroup = self.group.subgroup(k)?;
        let mut sigma = self.sigma.clone();
        for _ in 0..k {
            sigma = sigma.pow(self.group.p() as u64)?;
        }
        GModule::new(&subgroup, sigma)
    }

    /// `N = ρ^{pⁿ-1}`.
    pub fn norm_operator(&self) -> FpMatrix {
        let norm = self.rho_power(self.group.order() - 1);
        debug_assert!(
            self.group.order() > 4096 || self.trace_operator() == norm,
            "norm operator differs from the sum of group elements"
        );
        norm
    }

    /// `Σ_{j < pⁿ} σ^j`, summed term by term.
    pub fn trace_operator(&self) -> FpMatrix {
        let dim = self.dim();
        let mut term = FpMatrix::identity(self.prime(), dim);
        let mut sum = FpMatrix::zeros(self.prime(), dim, dim);
        for _ in 0..self.group.order() {
            sum = sum.add(&term).expect("same shape");
            term = term.mul(&self.sigma).expect("square");
        }
        sum
    }

    /// Checks the group-ring identity `ρ^{pⁿ-1} = 1 + σ + … + σ^{pⁿ-1}` on this module.
    pub fn group_ring_identity_holds(&self) -> bool {
        self.rho_power(self.group.order() - 1) == self.trace_operator()
    }

    pub fn is_invariant(&self, sub: &Subspace) -> Result<bool, ModuleError> {
        if sub.ambient_dim() != self.dim() {
            return Err(ModuleError::DimensionMismatch {
                expected: self.dim(),
                found: sub.ambient_dim(),
            });
        }
        Ok(sub.map(&self.sigma)?.is_subspace_of(sub)?)
    }

    /// `U^G = U ∩ ker ρ`.
    pub fn fixed_part(&self, sub: &Subspace) -> Result<Subspace, ModuleError> {
        Ok(sub.intersect(&self.fixed_submodule())?)
    }

    pub fn decompose(&self) -> Result<Decomposition, ModuleError> {
        decompose::decompose(self)
    }

    pub fn exclusion_check(&self, parts: &[Subspace]) -> Result<ExclusionReport, ModuleError> {
        exclusion::exclusion_check(self, parts)
    }
}

/// Summary of a module used in reports.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ModuleSummary {
    pub p: u32,
    pub n: u32,
    pub dim: usize,
    pub jordan_type: JordanType,
}

impl From<&GModule> for ModuleSummary {
    fn from(m: &GModule) -> Self {
        ModuleSummary {
            p: m.group.p(),
            n: m.group.n(),
            dim: m.dim(),
            jordan_type: m.jordan_type(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(p: u32, n: u32) -> GroupSpec {
        GroupSpec::new(p, n).unwrap()
    }

    fn jt(parts: &[usize]) -> JordanType {
        JordanType::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn group_tower() {
        let g = group(3, 2);
        assert_eq!(g.order(), 9);
        assert_eq!(g.subgroup(0).unwrap(), g);
        assert_eq!(g.subgroup(2).unwrap().order(), 1);
        assert_eq!(g.quotient(1).unwrap().order(), 3);
        assert!(g.subgroup(3).is_err());
        assert!(g.is_power_of_p(1) && g.is_power_of_p(27) && !g.is_power_of_p(6));
        assert!(matches!(GroupSpec::new(2, 40), Err(ModuleError::GroupTooLarge { .. })));
        assert!(matches!(GroupSpec::new(4, 1), Err(ModuleError::Linalg(LinalgError::NotPrime(4)))));
    }

    #[test]
    fn construction() {
        let g = group(3, 1);
        let t = GModule::trivial(&g, 4);
        assert_eq!(t.jordan_type(), JordanType::trivial(4));
        let f = GModule::from_jordan_type(&g, &jt(&[3])).unwrap();
        assert_eq!(f.jordan_type(), jt(&[3]));

        // eigenvalue 2 over p = 3: σ³ = 8 = 2 ≠ 1
        let p3 = Prime::new(3).unwrap();
        let bad = FpMatrix::from_i64(&p3, 1, 1, &[2]).unwrap();
        assert_eq!(bad.pow(3).unwrap().get(0, 0), 2);
        assert!(matches!(GModule::new(&g, bad), Err(ModuleError::NotUnipotent { order: 3 })));

        let p5 = Prime::new(5).unwrap();
        assert!(matches!(
            GModule::new(&g, FpMatrix::identity(&p5, 2)),
            Err(ModuleError::CharacteristicMismatch { expected: 3, found: 5 })
        ));
        assert!(matches!(
            GModule::from_jordan_type(&g, &jt(&[4])),
            Err(ModuleError::BlockTooLarge { size: 4, order: 3 })
        ));
        // a single block of size 3 is not annihilated by ρ² alone, so it needs order ≥ 3
        assert!(matches!(
            GModule::new(&group(2, 1), jordan_block(&Prime::new(2).unwrap(), 3)),
            Err(ModuleError::NotUnipotent { order: 2 })
        ));
    }

    #[test]
    fn single_block_of_size_four_over_c4_is_valid() {
        let g = group(2, 2);
        let m = GModule::new(&g, jordan_block(g.prime(), 4)).unwrap();
        assert_eq!(m.jordan_type(), jt(&[4]));
    }

    #[test]
    fn fixed_submodule_examples() {
        let g = group(2, 2);
        assert_eq!(GModule::trivial(&g, 3).fixed_submodule().dim(), 3);
        assert_eq!(GModule::free(&g, 1).fixed_submodule().dim(), 1);
        let m = GModule::from_jordan_type(&g, &jt(&[3, 2])).unwrap();
        assert_eq!(m.fixed_submodule().dim(), 2);
    }

    #[test]
    fn length_examples() {
        let g = group(2, 2);
        let m = GModule::free(&g, 1);
        assert_eq!(m.length(&[0, 0, 0, 0]).unwrap(), 0);
        assert_eq!(m.length(&[1, 0, 0, 0]).unwrap(), 1);
        // iterate ρ by hand on the generator e_3: e_3 → e_2 → e_1 → e_0 → 0
        let mut v = vec![0u16, 0, 0, 1];
        let mut steps = 0;
        while v.iter().any(|&x| x != 0) {
            v = m.rho().apply(&v).unwrap();
            steps += 1;
        }
        assert_eq!(steps, 4);
        assert_eq!(m.length(&[0, 0, 0, 1]).unwrap(), 4);
        assert!(matches!(m.length(&[1, 0]), Err(ModuleError::DimensionMismatch { expected: 4, found: 2 })));
    }

    #[test]
    fn cyclic_submodule_examples() {
        let g = group(3, 1);
        let m = GModule::free(&g, 1);
        assert!(m.cyclic_submodule(&[0, 0, 0]).unwrap().is_zero());
        assert_eq!(m.cyclic_submodule(&[2, 0, 0]).unwrap().dim(), 1);
        let full = m.cyclic_submodule(&[0, 0, 1]).unwrap();
        // oracle: the orbit {σ^j u} spans everything
        let orbit: Vec<Vec<u16>> = (0..3)
            .map(|j| m.sigma().pow(j).unwrap().apply(&[0, 0, 1]).unwrap())
            .collect();
        assert_eq!(Subspace::span(m.prime(), 3, &orbit).unwrap(), full);
        assert_eq!(full.dim(), 3);
    }

    #[test]
    fn jordan_type_examples() {
        let g = group(2, 3);
        assert_eq!(GModule::trivial(&g, 5).jordan_type(), JordanType::trivial(5));
        assert_eq!(GModule::free(&g, 1).jordan_type(), jt(&[8]));
    }

    #[test]
    fn restrict_examples() {
        let g = group(2, 2);
        let m = GModule::from_jordan_type(&g, &jt(&[4, 1])).unwrap();
        assert_eq!(m.restrict(0).unwrap(), m);
        let top = m.restrict(2).unwrap();
        assert_eq!(top.group().order(), 1);
        assert_eq!(top.jordan_type(), JordanType::trivial(5));
        let block = GModule::free(&g, 1);
        // σ² on J_4: (σ² - 1) has rank 2 and squares to zero
        let s2 = block.sigma().pow(2).unwrap();
        let r = s2.sub(&FpMatrix::identity(g.prime(), 4)).unwrap();
        assert_eq!(r.rank(), 2);
        assert!(r.pow(2).unwrap().is_zero());
        assert_eq!(block.restrict(1).unwrap().jordan_type(), jt(&[2, 2]));
        assert!(matches!(block.restrict(3), Err(ModuleError::LevelOutOfRange { level: 3, n: 2 })));
    }

    #[test]
    fn direct_sum_and_isomorphism() {
        let g = group(3, 1);
        let a = GModule::from_jordan_type(&g, &jt(&[2])).unwrap();
        let b = GModule::trivial(&g, 1);
        let zero = GModule::trivial(&g, 0);
        assert_eq!(a.direct_sum(&zero).unwrap(), a);
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.jordan_type(), jt(&[2, 1]));
        let three = GModule::from_jordan_type(&g, &jt(&[3])).unwrap();
        assert_eq!(s.rho().rank(), 1);
        assert_eq!(three.rho().rank(), 2);
        assert!(!s.is_isomorphic(&three).unwrap());
        assert!(s.is_isomorphic(&s).unwrap());
        let other = GModule::trivial(&group(3, 2), 1);
        assert_eq!(b.direct_sum(&other).unwrap_err(), ModuleError::GroupMismatch);
        assert_eq!(b.is_isomorphic(&other).unwrap_err(), ModuleError::GroupMismatch);
    }

    #[test]
    fn norm_operator_examples() {
        let g = group(2, 1);
        // 1 + σ = 1 + 1 = 0 on the trivial module
        assert!(GModule::trivial(&g, 3).norm_operator().is_zero());
        let free = GModule::free(&g, 1);
        assert_eq!(free.norm_operator().rank(), 1);
        for m in [GModule::trivial(&g, 2), free, GModule::free(&group(3, 2), 2)] {
            assert!(m.norm_operator().mul(m.rho()).unwrap().is_zero());
            assert!(m.group_ring_identity_holds());
        }
    }
}
