//! Norm-filtration models and the rank formulas relating them to module structure.
//!
//! A model is a module `X` together with a chain `X^G = W_0 ⊇ W_1 ⊇ … ⊇ W_n`
//! of subspaces standing in for the images of the norm maps from the
//! intermediate levels. The filtration property asks that
//! `ρ^{j-1}X ∩ X^G = W_i` for every `1 ≤ j ≤ pⁿ`, where `i` is the least
//! level with `j ≤ p^i`. When it holds, `X` is a sum of free modules over
//! the quotients `G_i` whose ranks are the successive quotients `dim W_i - dim W_{i+1}`.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{LinalgError, Subspace};
use crate::module::{GModule, GroupSpec, JordanType, ModuleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyzerError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("j = {j} is outside 1..={order}")]
    JOutOfRange { j: usize, order: usize },
    #[error("norm dimensions {0:?} are not weakly decreasing")]
    NotNested(Vec<usize>),
    #[error("expected {expected} levels, found {found}")]
    LevelCount { expected: usize, found: usize },
    #[error("Milnor degree must be positive")]
    InvalidDegree,
    #[error("invalid model: {0}")]
    ModelInvalid(String),
}

/// Least `i` with `j ≤ p^i`.
pub fn minimal_level(j: usize, group: &GroupSpec) -> Result<u32, AnalyzerError> {
    if j < 1 || j > group.order() {
        return Err(AnalyzerError::JOutOfRange { j, order: group.order() });
    }
    let p = group.p() as usize;
    let (mut level, mut q) = (0u32, 1usize);
    while q < j {
        q *= p;
        level += 1;
    }
    Ok(level)
}

/// Dimensions `d_i` of the norm images at each level, `d_0 = dim k_m F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormData {
    #[serde(skip)]
    group: GroupSpec,
    pub p: u32,
    pub n: u32,
    /// Milnor degree; carried as a label only.
    pub m: u32,
    pub d: Vec<usize>,
}

impl NormData {
    pub fn new(group: &GroupSpec, m: u32, d: Vec<usize>) -> Result<Self, AnalyzerError> {
        if m == 0 {
            return Err(AnalyzerError::InvalidDegree);
        }
        let expected = group.n() as usize + 1;
        if d.len() != expected {
            return Err(AnalyzerError::LevelCount { expected, found: d.len() });
        }
        Ok(NormData {
            group: group.clone(),
            p: group.p(),
            n: group.n(),
            m,
            d,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }
}

/// Multiplicities of the free `𝔽pG_i`-summands, `i = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ranks {
    #[serde(skip)]
    group: GroupSpec,
    pub ranks: Vec<usize>,
}

impl Ranks {
    pub fn new(group: &GroupSpec, ranks: Vec<usize>) -> Result<Self, AnalyzerError> {
        let expected = group.n() as usize + 1;
        if ranks.len() != expected {
            return Err(AnalyzerError::LevelCount {
                expected,
                found: ranks.len(),
            });
        }
        Ok(Ranks {
            group: group.clone(),
            ranks,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// `Σ rank_i · p^i`, saturating.
    pub fn total_dim(&self) -> usize {
        self.ranks
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &r)| acc.saturating_add(r.saturating_mul(self.group.power(i as u32))))
    }

    /// The Jordan type `⊕ (p^i)^{rank_i}`.
    pub fn jordan_type(&self) -> JordanType {
        let parts = self
            .ranks
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| std::iter::repeat_n(self.group.power(i as u32), r))
            .collect();
        JordanType::new(parts).expect("powers of p are positive")
    }

    /// Every rank vector over `group` with `Σ rank_i p^i ≤ max_dim`.
    pub fn all_up_to(group: &GroupSpec, max_dim: usize) -> Vec<Ranks> {
        fn rec(group: &GroupSpec, level: u32, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Ranks>) {
            if level > group.n() {
                out.push(Ranks {
                    group: group.clone(),
                    ranks: cur.clone(),
                });
                return;
            }
            let size = group.power(level);
            for r in 0..=budget / size {
                cur.push(r);
                rec(group, level + 1, budget - r * size, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(group, 0, max_dim, &mut Vec::new(), &mut out);
        out
    }
}

/// `rank_n = d_n`, `rank_i = d_i - d_{i+1}` below.
pub fn theorem_ranks(data: &NormData) -> Result<Ranks, AnalyzerError> {
    if data.d.windows(2).any(|w| w[0] < w[1]) {
        return Err(AnalyzerError::NotNested(data.d.clone()));
    }
    let n = data.d.len() - 1;
    let ranks = (0..=n)
        .map(|i| if i == n { data.d[n] } else { data.d[i] - data.d[i + 1] })
        .collect();
    Ranks::new(&data.group, ranks)
}

/// A module with designated norm-image subspaces `W_0 ⊇ … ⊇ W_n` of `X^G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormFiltrationModel {
    module: GModule,
    levels: Vec<Subspace>,
    m: u32,
}

impl NormFiltrationModel {
    /// Checks `W_0 = X^G`, the nesting `W_{i-1} ⊇ W_i`, and `W_n ⊇ ρ^{pⁿ-1}X`.
    pub fn new(module: GModule, levels: Vec<Subspace>, m: u32) -> Result<Self, AnalyzerError> {
        if m == 0 {
            return Err(AnalyzerError::InvalidDegree);
        }
        let n = module.group().n() as usize;
        if levels.len() != n + 1 {
            return Err(AnalyzerError::LevelCount {
                expected: n + 1,
                found: levels.len(),
            });
        }
        for (i, w) in levels.iter().enumerate() {
            if w.ambient_dim() != module.dim() || w.prime() != module.prime() {
                return Err(AnalyzerError::ModelInvalid(format!(
                    "W_{i} does not live in the module's vector space"
                )));
            }
        }
        if levels[0] != module.fixed_submodule() {
            return Err(AnalyzerError::ModelInvalid("W_0 differs from the fixed submodule".into()));
        }
        for i in 1..=n {
            if !levels[i].is_subspace_of(&levels[i - 1])? {
                return Err(AnalyzerError::ModelInvalid(format!("W_{i} is not contained in W_{}", i - 1)));
            }
        }
        if !module.norm_operator().image_basis().is_subspace_of(&levels[n])? {
            return Err(AnalyzerError::ModelInvalid(format!(
                "W_{n} does not contain the image of the norm operator"
            )));
        }
        Ok(NormFiltrationModel { module, levels, m })
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn levels(&self) -> &[Subspace] {
        &self.levels
    }

    pub fn level(&self, i: u32) -> &Subspace {
        &self.levels[i as usize]
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

/// Canonical witness: `⊕_i (𝔽pG_i)^{rank_i}` with `W_i = ρ^{p^i-1}X ∩ X^G`.
pub fn synthesize(ranks: &Ranks, m: u32) -> Result<NormFiltrationModel, AnalyzerError> {
    let group = ranks.group();
    let module = GModule::from_jordan_type(group, &ranks.jordan_type())?;
    let fixed = module.fixed_submodule();
    let levels = (0..=group.n())
        .map(|i| {
            let q = group.power(i);
            module.rho_power(q - 1).image_basis().intersect(&fixed)
        })
        .collect::<Result<Vec<_>, _>>()?;
    NormFiltrationModel::new(module, levels, m)
}

/// `d_i = dim W_i`. Models are validated at construction, so this cannot fail.
pub fn derive_norm_data(model: &NormFiltrationModel) -> NormData {
    let d = model.levels.iter().map(Subspace::dim).collect();
    NormData::new(model.module.group(), model.m, d).expect("validated model")
}

/// One row of the filtration check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationCheck {
    pub j: usize,
    pub level: u32,
    /// `ρ^{j-1}X ∩ X^G`.
    pub filtration: Subspace,
    /// `W_level`.
    pub designated: Subspace,
    pub equal: bool,
    /// `W_level ⊆ ρ^{j-1}X ∩ X^G`.
    pub designated_contained: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub checks: Vec<FiltrationCheck>,
}

impl FiltrationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.equal)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FiltrationCheck> {
        self.checks.iter().filter(|c| !c.equal)
    }

    pub fn failing_js(&self) -> Vec<usize> {
        self.failures().map(|c| c.j).collect()
    }
}

/// Compares `ρ^{j-1}X ∩ X^G` with the designated level for every `1 ≤ j ≤ pⁿ`.
pub fn verify_norm_filtration(model: &NormFiltrationModel) -> FiltrationReport {
    let module = &model.module;
    let group = module.group();
    let fixed = module.fixed_submodule();
    let zero = Subspace::zero(module.prime(), module.dim());
    let mut power = crate::linalg::FpMatrix::identity(module.prime(), module.dim());
    let mut vanished = power.is_zero();
    let mut checks = Vec::with_capacity(group.order());
    for j in 1..=group.order() {
        let level = minimal_level(j, group).expect("j in range");
        let filtration = if vanished {
            zero.clone()
        } else {
            let f = power.image_basis().intersect(&fixed).expect("same ambient");
            power = power.mul(module.rho()).expect("square");
            vanished = power.is_zero();
            f
        };
        let designated = model.levels[level as usize].clone();
        checks.push(FiltrationCheck {
            j,
            level,
            equal: filtration == designated,
            designated_contained: designated.is_subspace_of(&filtration).expect("same ambient"),
            filtration,
            designated,
        });
    }
    FiltrationReport { checks }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PPowerReport {
    pub holds: bool,
    /// Distinct block sizes that are not powers of p, ascending.
    pub offenders: Vec<usize>,
    pub jordan_type: JordanType,
}

/// Whether every indecomposable summand has dimension a power of p.
pub fn check_p_power_lengths(module: &GModule) -> PPowerReport {
    let jordan_type = module.jordan_type();
    let mut offenders: Vec<usize> = jordan_type
        .parts()
        .iter()
        .copied()
        .filter(|&s| !module.group().is_power_of_p(s))
        .collect();
    offenders.sort_unstable();
    offenders.dedup();
    PPowerReport {
        holds: offenders.is_empty(),
        offenders,
        jordan_type,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCertificate {
    /// `(length, multiplicity)` of the summands found by `decompose`, ascending.
    pub summands: Vec<(usize, usize)>,
    pub non_p_power_lengths: Vec<usize>,
    /// Ranks predicted from the norm dimensions.
    pub expected_ranks: Vec<usize>,
    /// `|Y_{p^i}|` from the decomposition.
    pub observed_ranks: Vec<usize>,
    pub p_power_only: bool,
    pub ranks_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub lemma: FiltrationReport,
    /// Present only when the filtration check passed.
    pub theorem: Option<TheoremCertificate>,
}

impl StructureReport {
    pub fn lemma_holds(&self) -> bool {
        self.lemma.passed()
    }

    pub fn certified(&self) -> bool {
        self.lemma_holds() && self.theorem.as_ref().is_some_and(|t| t.p_power_only && t.ranks_match)
    }
}

/// If the filtration property holds, decomposes the module and checks that
/// only p-power lengths occur with the multiplicities the rank formulas give.
pub fn structure_theorem_check(model: &NormFiltrationModel) -> Result<StructureReport, AnalyzerError> {
    let lemma = verify_norm_filtration(model);
    if !lemma.passed() {
        return Ok(StructureReport { lemma, theorem: None });
    }
    let group = model.module.group();
    let decomposition = model.module.decompose()?;
    let summands: Vec<(usize, usize)> = decomposition
        .lengths()
        .map(|l| (l, decomposition.multiplicity(l)))
        .collect();
    let non_p_power_lengths: Vec<usize> = summands
        .iter()
        .map(|&(l, _)| l)
        .filter(|&l| !group.is_power_of_p(l))
        .collect();
    let expected_ranks = theorem_ranks(&derive_norm_data(model))?.ranks;
    let observed_ranks: Vec<usize> = (0..=group.n())
        .map(|i| decomposition.multiplicity(group.power(i)))
        .collect();
    Ok(StructureReport {
        lemma,
        theorem: Some(TheoremCertificate {
            p_power_only: non_p_power_lengths.is_empty(),
            ranks_match: expected_ranks == observed_ranks,
            summands,
            non_p_power_lengths,
            expected_ranks,
            observed_ranks,
        }),
    })
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
    fn minimal_level_examples() {
        let g = group(2, 2);
        assert_eq!(minimal_level(1, &g).unwrap(), 0);
        assert_eq!(minimal_level(2, &g).unwrap(), 1);
        assert_eq!(minimal_level(3, &g).unwrap(), 2);
        assert_eq!(minimal_level(4, &g).unwrap(), 2);
        let g = group(3, 3);
        assert_eq!(minimal_level(27, &g).unwrap(), 3);
        assert_eq!(minimal_level(10, &g).unwrap(), 3);
        assert_eq!(minimal_level(9, &g).unwrap(), 2);
        assert_eq!(minimal_level(0, &g).unwrap_err(), AnalyzerError::JOutOfRange { j: 0, order: 27 });
        assert!(minimal_level(28, &g).is_err());
    }

    #[test]
    fn theorem_ranks_examples() {
        let g = group(3, 2);
        let all_free = theorem_ranks(&NormData::new(&g, 1, vec![4, 4, 4]).unwrap()).unwrap();
        assert_eq!(all_free.ranks, vec![0, 0, 4]);
        assert_eq!(all_free.total_dim(), 36);

        let g1 = group(5, 1);
        let r = theorem_ranks(&NormData::new(&g1, 2, vec![3, 1]).unwrap()).unwrap();
        assert_eq!(r.ranks, vec![2, 1]);
        assert_eq!(r.total_dim(), 5 + 2);

        let g2 = group(2, 2);
        let r = theorem_ranks(&NormData::new(&g2, 1, vec![5, 3, 2]).unwrap()).unwrap();
        assert_eq!(r.ranks, vec![2, 1, 2]);
        assert_eq!(r.total_dim(), 12);

        let degenerate = theorem_ranks(&NormData::new(&g2, 1, vec![2, 0, 0]).unwrap()).unwrap();
        assert_eq!(degenerate.ranks, vec![2, 0, 0]);

        assert_eq!(
            theorem_ranks(&NormData::new(&g2, 1, vec![1, 2, 0]).unwrap()).unwrap_err(),
            AnalyzerError::NotNested(vec![1, 2, 0])
        );
        assert!(matches!(
            NormData::new(&g2, 1, vec![1, 1]),
            Err(AnalyzerError::LevelCount { expected: 3, found: 2 })
        ));
        assert_eq!(NormData::new(&g2, 0, vec![1, 1, 1]).unwrap_err(), AnalyzerError::InvalidDegree);
    }

    #[test]
    fn synthesize_examples() {
        let g = group(2, 2);
        let empty = synthesize(&Ranks::new(&g, vec![0, 0, 0]).unwrap(), 1).unwrap();
        assert_eq!(empty.module().dim(), 0);
        assert!(empty.levels().iter().all(Subspace::is_zero));

        let free = synthesize(&Ranks::new(&g, vec![0, 0, 1]).unwrap(), 1).unwrap();
        let line = free.module().fixed_submodule();
        assert_eq!(line.dim(), 1);
        assert!(free.levels().iter().all(|w| *w == line));

        let ranks = Ranks::new(&g, vec![2, 1, 2]).unwrap();
        let model = synthesize(&ranks, 1).unwrap();
        assert_eq!(model.module().dim(), 12);
        let d = derive_norm_data(&model);
        assert_eq!(d.d, vec![5, 3, 2]);
        assert_eq!(theorem_ranks(&d).unwrap(), ranks);
    }

    #[test]
    fn verify_passes_on_witnesses() {
        for (p, n) in [(2, 2), (3, 1), (3, 2), (2, 3)] {
            let g = group(p, n);
            for ranks in Ranks::all_up_to(&g, 10) {
                let report = verify_norm_filtration(&synthesize(&ranks, 1).unwrap());
                assert!(report.passed(), "{p}^{n} {:?}", ranks.ranks);
                assert!(report.checks.iter().all(|c| c.designated_contained));
                assert_eq!(report.checks.len(), g.order());
            }
        }
    }

    fn model_from_dims(module: GModule, dims: &[usize]) -> NormFiltrationModel {
        // W_i = first dims[i] vectors of the fixed basis; nested by construction
        let fixed = module.fixed_submodule().vectors();
        let levels = dims
            .iter()
            .map(|&d| Subspace::span(module.prime(), module.dim(), &fixed[..d]).unwrap())
            .collect();
        NormFiltrationModel::new(module, levels, 1).unwrap()
    }

    #[test]
    fn block_of_length_three_over_c4_fails_at_three() {
        let g = group(2, 2);
        let j3 = GModule::from_jordan_type(&g, &jt(&[3])).unwrap();
        // ρ² on J_3 has rank 1 and its image is the fixed line
        assert_eq!(j3.rho_power(2).rank(), 1);
        let model = model_from_dims(j3, &[1, 1, 0]);
        let report = verify_norm_filtration(&model);
        assert_eq!(report.failing_js(), vec![3]);
        let bad = &report.checks[2];
        assert_eq!((bad.filtration.dim(), bad.designated.dim()), (1, 0));
        assert!(bad.designated_contained);

        let s = structure_theorem_check(&model).unwrap();
        assert!(!s.lemma_holds());
        assert!(s.theorem.is_none());
        assert!(!s.certified());
    }

    #[test]
    fn trivial_module_filtration() {
        // ρX = 0, so ρ^{j-1}X ∩ X^G = 0 for every j ≥ 2
        let g1 = group(2, 1);
        let t = GModule::trivial(&g1, 2);
        assert_eq!(verify_norm_filtration(&model_from_dims(t.clone(), &[2, 2])).failing_js(), vec![2]);
        assert!(verify_norm_filtration(&model_from_dims(t, &[2, 0])).passed());

        let g2 = group(2, 2);
        let t = GModule::trivial(&g2, 2);
        assert_eq!(verify_norm_filtration(&model_from_dims(t.clone(), &[2, 2, 2])).failing_js(), vec![2, 3, 4]);
        assert_eq!(verify_norm_filtration(&model_from_dims(t.clone(), &[2, 2, 0])).failing_js(), vec![2]);
        assert!(verify_norm_filtration(&model_from_dims(t, &[2, 0, 0])).passed());

        let g0 = group(3, 0);
        assert!(verify_norm_filtration(&model_from_dims(GModule::trivial(&g0, 2), &[2])).passed());
    }

    #[test]
    fn model_validation() {
        let g = group(2, 1);
        let m = GModule::free(&g, 1);
        let p = m.prime().clone();
        let fixed = m.fixed_submodule();
        let zero = Subspace::zero(&p, 2);
        // W_1 must contain ρ X
        assert!(matches!(
            NormFiltrationModel::new(m.clone(), vec![fixed.clone(), zero.clone()], 1),
            Err(AnalyzerError::ModelInvalid(_))
        ));
        assert!(matches!(
            NormFiltrationModel::new(m.clone(), vec![Subspace::full(&p, 2), fixed.clone()], 1),
            Err(AnalyzerError::ModelInvalid(_))
        ));
        assert!(matches!(
            NormFiltrationModel::new(m.clone(), vec![fixed.clone()], 1),
            Err(AnalyzerError::LevelCount { expected: 2, found: 1 })
        ));
        let t = GModule::trivial(&g, 2);
        let line = Subspace::span(&p, 2, &[vec![1, 0]]).unwrap();
        let other = Subspace::span(&p, 2, &[vec![0, 1]]).unwrap();
        let t_fixed = t.fixed_submodule();
        assert!(NormFiltrationModel::new(t.clone(), vec![t_fixed.clone(), line.clone()], 1).is_ok());
        // nesting is required between consecutive levels
        let g2 = group(2, 2);
        let t2 = GModule::trivial(&g2, 2);
        assert!(matches!(
            NormFiltrationModel::new(t2, vec![t_fixed, line, other], 1),
            Err(AnalyzerError::ModelInvalid(_))
        ));
        assert!(NormFiltrationModel::new(m, vec![fixed.clone(), fixed], 1).is_ok());
    }

    #[test]
    fn p_power_examples() {
        let g = group(2, 2);
        assert!(check_p_power_lengths(&GModule::free(&g, 3)).holds);
        let r = check_p_power_lengths(&GModule::from_jordan_type(&g, &jt(&[3, 2, 3])).unwrap());
        assert!(!r.holds);
        assert_eq!(r.offenders, vec![3]);
        for ranks in Ranks::all_up_to(&g, 9) {
            assert!(check_p_power_lengths(synthesize(&ranks, 1).unwrap().module()).holds);
        }
    }

    #[test]
    fn structure_check_on_witness() {
        let g = group(2, 2);
        let s = structure_theorem_check(&synthesize(&Ranks::new(&g, vec![2, 1, 2]).unwrap(), 1).unwrap()).unwrap();
        assert!(s.certified());
        let t = s.theorem.unwrap();
        assert_eq!(t.summands, vec![(1, 2), (2, 1), (4, 2)]);
        assert_eq!(t.observed_ranks, vec![2, 1, 2]);

        let free = structure_theorem_check(&synthesize(&Ranks::new(&g, vec![0, 0, 3]).unwrap(), 1).unwrap()).unwrap();
        assert_eq!(free.theorem.unwrap().summands, vec![(4, 3)]);
    }

    #[test]
    fn rank_enumeration_counts() {
        // over C_2: r0 + 2 r1 ≤ 3 → (0..=3,0), (0..=1,1) = 6 vectors
        assert_eq!(Ranks::all_up_to(&group(2, 1), 3).len(), 6);
    }
}
