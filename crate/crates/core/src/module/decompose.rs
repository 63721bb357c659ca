use std::collections::BTreeMap;

use serde::Serialize;

use super::{GModule, GroupSpec, JordanType, ModuleError};
use crate::linalg::{Echelon, Subspace};

/// A splitting of a module into cyclic summands, grouped by length.
///
/// For each length `i`, `generators(i)` lists vectors `y` with `ρ^{i-1}y`
/// running over a basis of `L_i`, where `L_i` is a complement of
/// `F_{i+1}` in `F_i` and `F_i = ρ^{i-1}X ∩ X^G`. The summand `X_i` is
/// spanned by the cyclic bases of those generators, and `X_i^G = L_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    group: GroupSpec,
    dim: usize,
    filtration: Vec<Subspace>,
    socles: BTreeMap<usize, Subspace>,
    generators: BTreeMap<usize, Vec<Vec<u16>>>,
    cyclic_bases: BTreeMap<usize, Vec<Vec<Vec<u16>>>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SummandSummary {
    pub length: usize,
    pub count: usize,
    pub generators: Vec<Vec<u16>>,
}

pub(super) fn decompose(module: &GModule) -> Result<Decomposition, ModuleError> {
    let dim = module.dim();
    let prime = module.prime().clone();
    let order = module.group().order();
    let powers = module.rho_powers();
    // ρ^s = 0 with s ≤ pⁿ
    let s = powers.len() - 1;
    let fixed = module.fixed_submodule();

    // filtration[i - 1] = F_i for i = 1..=s+1, with F_{s+1} = 0
    let mut filtration: Vec<Subspace> = powers[..s]
        .iter()
        .map(|pw| pw.image_basis().intersect(&fixed))
        .collect::<Result<_, _>>()?;
    filtration.push(Subspace::zero(&prime, dim));

    let mut socles = BTreeMap::new();
    let mut generators = BTreeMap::new();
    let mut cyclic_bases = BTreeMap::new();
    for i in 1..=s {
        let socle = if i == order {
            powers[order - 1].image_basis()
        } else {
            filtration[i - 1].complement(&filtration[i])?
        };
        if socle.is_zero() {
            continue;
        }
        let lift = &powers[i - 1];
        let mut gens = Vec::with_capacity(socle.dim());
        let mut bases = Vec::with_capacity(socle.dim());
        for v in socle.vectors() {
            let y = lift.solve(&v)?.ok_or_else(|| {
                ModuleError::InternalCheckFailed(format!("socle vector {v:?} is not in the image of rho^{}", i - 1))
            })?;
            let basis = module.cyclic_basis(&y)?;
            if basis.len() != i {
                return Err(ModuleError::InternalCheckFailed(format!(
                    "lift of a length-{i} socle vector has length {}",
                    basis.len()
                )));
            }
            gens.push(y);
            bases.push(basis);
        }
        socles.insert(i, socle);
        generators.insert(i, gens);
        cyclic_bases.insert(i, bases);
    }

    let covered: usize = generators.iter().map(|(i, g)| i * g.len()).sum();
    if covered != dim {
        return Err(ModuleError::InternalCheckFailed(format!(
            "summand dimensions add up to {covered}, module has dimension {dim}"
        )));
    }
    let mut echelon = Echelon::new(&prime, dim);
    for bases in cyclic_bases.values() {
        for v in bases.iter().flatten() {
            if !echelon.insert(v) {
                return Err(ModuleError::InternalCheckFailed(
                    "cyclic bases are linearly dependent".into(),
                ));
            }
        }
    }

    Ok(Decomposition {
        group: module.group().clone(),
        dim,
        filtration,
        socles,
        generators,
        cyclic_bases,
    })
}

impl Decomposition {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The generator list `Y_i` (empty when no summand has length `i`).
    pub fn generators(&self, length: usize) -> &[Vec<u16>] {
        self.generators.get(&length).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn multiplicity(&self, length: usize) -> usize {
        self.generators(length).len()
    }

    /// Lengths with at least one summand, ascending.
    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.generators.keys().copied()
    }

    /// `F_i = ρ^{i-1}X ∩ X^G` for `i ≥ 1`; zero past the nilpotency index.
    pub fn filtration(&self, i: usize) -> Subspace {
        assert!(i >= 1);
        self.filtration
            .get(i - 1)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.group.prime(), self.dim))
    }

    /// `L_i`, the fixed part of the summand `X_i`.
    pub fn socle(&self, length: usize) -> Subspace {
        self.socles
            .get(&length)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.group.prime(), self.dim))
    }

    /// Cyclic bases `[y, ρy, …]` of the generators of length `i`.
    pub fn cyclic_bases(&self, length: usize) -> &[Vec<Vec<u16>>] {
        self.cyclic_bases.get(&length).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Every cyclic summand `𝔽pG·y` as a subspace, ordered by length then generator.
    pub fn cyclic_summands(&self) -> Vec<Subspace> {
        self.cyclic_bases
            .values()
            .flatten()
            .map(|b| Subspace::span(self.group.prime(), self.dim, b).expect("basis vectors have module dimension"))
            .collect()
    }

    /// `X_i = 𝔽pG·Y_i`.
    pub fn summand(&self, length: usize) -> Subspace {
        let vectors: Vec<Vec<u16>> = self.cyclic_bases(length).iter().flatten().cloned().collect();
        Subspace::span(self.group.prime(), self.dim, &vectors).expect("basis vectors have module dimension")
    }

    pub fn jordan_type(&self) -> JordanType {
        let parts = self
            .generators
            .iter()
            .flat_map(|(&i, g)| std::iter::repeat_n(i, g.len()))
            .collect();
        JordanType::new(parts).expect("lengths are positive")
    }

    pub fn summaries(&self) -> Vec<SummandSummary> {
        self.generators
            .iter()
            .rev()
            .map(|(&length, g)| SummandSummary {
                length,
                count: g.len(),
                generators: g.clone(),
            })
            .collect()
    }
}
