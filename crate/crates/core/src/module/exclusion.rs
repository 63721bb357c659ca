use serde::Serialize;

use super::{GModule, ModuleError};
use crate::linalg::Subspace;

/// Outcome of checking whether a family of submodules sums directly, given
/// whether their fixed parts do.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExclusionReport {
    pub part_dims: Vec<usize>,
    pub fixed_dims: Vec<usize>,
    /// Dimension of the span of all fixed parts.
    pub fixed_span_dim: usize,
    /// Dimension of the span of all parts.
    pub span_dim: usize,
    /// The fixed parts sum directly.
    pub hypothesis: bool,
    /// The parts themselves sum directly.
    pub conclusion: bool,
}

impl ExclusionReport {
    /// False only when the fixed parts are independent but the parts are not.
    pub fn consistent(&self) -> bool {
        !self.hypothesis || self.conclusion
    }
}

pub(super) fn exclusion_check(module: &GModule, parts: &[Subspace]) -> Result<ExclusionReport, ModuleError> {
    let prime = module.prime();
    let dim = module.dim();
    let mut fixed_parts = Vec::with_capacity(parts.len());
    for (index, part) in parts.iter().enumerate() {
        if !module.is_invariant(part)? {
            return Err(ModuleError::NotInvariant { index });
        }
        fixed_parts.push(module.fixed_part(part)?);
    }
    let span_of = |subs: &[Subspace]| -> Result<Subspace, ModuleError> {
        let mut acc = Subspace::zero(prime, dim);
        for s in subs {
            acc = acc.sum(s)?;
        }
        Ok(acc)
    };
    let part_dims: Vec<usize> = parts.iter().map(Subspace::dim).collect();
    let fixed_dims: Vec<usize> = fixed_parts.iter().map(Subspace::dim).collect();
    let fixed_span_dim = span_of(&fixed_parts)?.dim();
    let span_dim = span_of(parts)?.dim();
    Ok(ExclusionReport {
        hypothesis: fixed_dims.iter().sum::<usize>() == fixed_span_dim,
        conclusion: part_dims.iter().sum::<usize>() == span_dim,
        part_dims,
        fixed_dims,
        fixed_span_dim,
        span_dim,
    })
}
