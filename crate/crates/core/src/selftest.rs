//! Exhaustive and sampled property sweeps, cross-checking the library against
//! the brute-force oracles.
//!
//! Every family returns a [`FamilyReport`]. Output depends only on the
//! configuration, so two runs with the same configuration print the same report.

use std::fmt;

use serde::Serialize;

use crate::analyzer::{derive_norm_data, structure_theorem_check, synthesize, theorem_ranks, verify_norm_filtration, Ranks};
use crate::module::{restrict_cyclic_type, GModule, GroupSpec, JordanType};
use crate::oracle::{
    brute_directness, brute_length, brute_restriction, enumerate_w_chains, random_conjugate, EnumerationBudget,
    MAX_CHAIN_FIXED_DIM,
};

/// Failure descriptions kept per family.
const MAX_EXAMPLES: usize = 5;

/// Vectors drawn per module when a length sweep exceeds the budget.
const LENGTH_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub name: &'static str,
    pub instances: u64,
    pub failures: u64,
    /// Instances left out because they exceed the enumeration budget.
    pub skipped: u64,
    /// False when some instances were sampled rather than enumerated.
    pub certified: bool,
    pub examples: Vec<String>,
}

impl FamilyReport {
    fn new(name: &'static str) -> Self {
        FamilyReport {
            name,
            instances: 0,
            failures: 0,
            skipped: 0,
            certified: true,
            examples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<20} instances={:<8} failures={:<4} skipped={:<6} {}",
            self.name,
            self.instances,
            self.failures,
            self.skipped,
            if self.certified { "certified" } else { "sampled" }
        )?;
        for e in &self.examples {
            write!(f, "\n  fail: {e}")?;
        }
        Ok(())
    }
}

/// Checks `ρ^{pⁿ-1} = Σ σ^j` on every module handed to it.
pub struct GroupRingTally(FamilyReport);

impl GroupRingTally {
    pub fn new() -> Self {
        GroupRingTally(FamilyReport::new("group-ring"))
    }

    pub fn check(&mut self, module: &GModule) {
        let ok = module.group_ring_identity_holds();
        self.0.record(ok, || describe(module));
    }

    pub fn report(self) -> FamilyReport {
        self.0
    }
}

impl Default for GroupRingTally {
    fn default() -> Self {
        Self::new()
    }
}

fn describe(module: &GModule) -> String {
    let g = module.group();
    format!("p={} n={} type {}", g.p(), g.n(), module.jordan_type())
}

fn label(g: &GroupSpec, t: &JordanType) -> String {
    format!("p={} n={} type {}", g.p(), g.n(), t)
}

/// Every `(p, n)` with `n ≥ 1`, `p` in `primes` and `pⁿ ≤ max_order`.
pub fn groups(primes: &[u32], max_order: usize) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for &p in primes {
        let mut n = 1;
        while let Ok(g) = GroupSpec::new(p, n) {
            if g.order() > max_order {
                break;
            }
            out.push(g);
            n += 1;
        }
    }
    out
}

/// All Jordan types of dimension `1..=max_dim` realizable over `group`.
pub fn jordan_types(group: &GroupSpec, max_dim: usize) -> Vec<JordanType> {
    (1..=max_dim)
        .flat_map(|d| JordanType::all_of_dim(d, group.order()))
        .collect()
}

/// Closed-form restriction of a single block against the oracle and against `restrict`.
pub fn restriction_family(groups: &[GroupSpec], tally: &mut GroupRingTally) -> FamilyReport {
    let mut report = FamilyReport::new("restriction");
    for g in groups {
        for l in 1..=g.order() {
            let t = JordanType::new(vec![l]).expect("positive");
            let block = GModule::from_jordan_type(g, &t).expect("block fits");
            tally.check(&block);
            for k in 0..=g.n() {
                let formula = restrict_cyclic_type(l, g, k);
                let brute = brute_restriction(&block, k);
                let fast = block.restrict(k);
                if let Ok(r) = &fast {
                    tally.check(r);
                }
                let ok = matches!((&formula, &brute, &fast), (Ok(a), Ok(b), Ok(c)) if a == b && *a == c.jordan_type());
                report.record(ok, || {
                    format!("p={} n={} l={l} k={k}: formula {formula:?}, oracle {brute:?}", g.p(), g.n())
                });
            }
        }
    }
    report
}

/// `decompose` on every Jordan type: recovered multiplicities and oracle-certified directness.
pub fn decomposition_family(groups: &[GroupSpec], max_dim: usize, tally: &mut GroupRingTally) -> FamilyReport {
    let mut report = FamilyReport::new("decomposition");
    for g in groups {
        for t in jordan_types(g, max_dim) {
            let module = GModule::from_jordan_type(g, &t).expect("blocks fit");
            tally.check(&module);
            let ok = module.decompose().is_ok_and(|d| {
                let summands = d.cyclic_summands();
                d.jordan_type() == t
                    && (1..=g.order()).all(|l| d.multiplicity(l) == t.multiplicity(l))
                    && summands.iter().map(|s| s.dim()).sum::<usize>() == module.dim()
                    && brute_directness(&summands) == Ok(true)
            });
            report.record(ok, || label(g, &t));
        }
    }
    report
}

fn length_identities_hold(module: &GModule, u: &[u16]) -> bool {
    let Ok(l) = module.length(u) else {
        return false;
    };
    if brute_length(module, u) != l {
        return false;
    }
    if l == 0 {
        return u.iter().all(|&x| x == 0);
    }
    let Ok(c) = module.cyclic_submodule(u) else {
        return false;
    };
    let Ok(fixed) = module.fixed_part(&c) else {
        return false;
    };
    let top = c.map(&module.rho_power(l - 1));
    let beyond = c.map(&module.rho_power(l));
    c.dim() == l && !fixed.is_zero() && top.as_ref() == Ok(&fixed) && beyond.is_ok_and(|b| b.is_zero())
}

/// `ρ^{l(u)-1}⟨u⟩ = ⟨u⟩^G ≠ 0`, `ρ^{l(u)}⟨u⟩ = 0` and `brute_length = length`,
/// on every vector when `p^dim` is within budget and on a seeded sample otherwise.
pub fn length_family(groups: &[GroupSpec], max_dim: usize, budget: &EnumerationBudget) -> FamilyReport {
    let mut report = FamilyReport::new("length");
    for g in groups {
        for t in jordan_types(g, max_dim) {
            let module = GModule::from_jordan_type(g, &t).expect("blocks fit");
            let sample = budget.vectors(g.p(), module.dim(), LENGTH_SAMPLES);
            report.certified &= sample.exhaustive;
            for u in &sample.vectors {
                let ok = length_identities_hold(&module, u);
                report.record(ok, || format!("{} u={u:?}", label(g, &t)));
            }
        }
    }
    report
}

/// Synthesize a witness for every rank vector of total dimension at most
/// `max_dim` and certify it with the structure check.
pub fn theorem_family(groups: &[GroupSpec], max_dim: usize, tally: &mut GroupRingTally) -> FamilyReport {
    let mut report = FamilyReport::new("theorem-round-trip");
    for g in groups {
        for ranks in Ranks::all_up_to(g, max_dim) {
            let ok = synthesize(&ranks, 1).is_ok_and(|model| {
                tally.check(model.module());
                let certified = structure_theorem_check(&model).is_ok_and(|r| r.certified());
                let recovered = theorem_ranks(&derive_norm_data(&model)).is_ok_and(|r| r == ranks);
                certified && recovered && model.module().jordan_type() == ranks.jordan_type()
            });
            report.record(ok, || format!("p={} n={} ranks {:?}", g.p(), g.n(), ranks.ranks));
        }
    }
    report
}

/// No W-chain passes the filtration check on a module with a block whose size
/// is not a power of p. Modules whose fixed space is too large to enumerate
/// (dimension above the chain cap, or `p^dim X^G` above the budget) are skipped.
pub fn p_power_family(
    groups: &[GroupSpec],
    max_dim: usize,
    budget: &EnumerationBudget,
    tally: &mut GroupRingTally,
) -> FamilyReport {
    let mut report = FamilyReport::new("p-power-necessity");
    for g in groups {
        for t in jordan_types(g, max_dim) {
            if t.parts().iter().all(|&s| g.is_power_of_p(s)) {
                continue;
            }
            let blocks = t.num_blocks();
            if blocks > MAX_CHAIN_FIXED_DIM || !budget.allows(g.p(), blocks) {
                report.skipped += 1;
                continue;
            }
            let module = GModule::from_jordan_type(g, &t).expect("blocks fit");
            tally.check(&module);
            match enumerate_w_chains(&module) {
                Ok(chains) => {
                    for chain in &chains {
                        let ok = !verify_norm_filtration(chain).passed();
                        report.record(ok, || {
                            let dims: Vec<usize> = chain.levels().iter().map(|w| w.dim()).collect();
                            format!("{} passes with W dims {dims:?}", label(g, &t))
                        });
                    }
                }
                Err(e) => report.record(false, || format!("{}: {e}", label(g, &t))),
            }
        }
    }
    report
}

/// Seeded conjugations leave the Jordan type unchanged.
pub fn conjugation_family(
    groups: &[GroupSpec],
    max_dim: usize,
    seeds: u64,
    tally: &mut GroupRingTally,
) -> FamilyReport {
    let mut report = FamilyReport::new("krull-schmidt");
    for g in groups {
        for t in jordan_types(g, max_dim) {
            let module = GModule::from_jordan_type(g, &t).expect("blocks fit");
            for seed in 0..seeds {
                let ok = random_conjugate(&module, seed).is_ok_and(|c| {
                    tally.check(&c);
                    c.jordan_type() == t && module.is_isomorphic(&c) == Ok(true)
                });
                report.record(ok, || format!("{} seed {seed}", label(g, &t)));
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestConfig {
    pub primes: Vec<u32>,
    pub max_order: usize,
    /// Largest module dimension for the decomposition, length and conjugation sweeps.
    pub max_dim: usize,
    /// Largest `Σ rank_i p^i` in the round-trip sweep.
    pub theorem_max_dim: usize,
    /// Largest module dimension in the chain sweep.
    pub chain_max_dim: usize,
    pub seeds: u64,
    pub budget: EnumerationBudget,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            primes: vec![2, 3, 5, 7],
            max_order: 9,
            max_dim: 8,
            theorem_max_dim: 16,
            chain_max_dim: 6,
            seeds: 100,
            budget: EnumerationBudget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub families: Vec<FamilyReport>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(FamilyReport::passed)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for family in &self.families {
            writeln!(f, "{family}")?;
        }
        write!(f, "{}", if self.passed() { "all families passed" } else { "FAILED" })
    }
}

pub fn run(config: &SelftestConfig) -> SelftestReport {
    let groups = groups(&config.primes, config.max_order);
    let mut tally = GroupRingTally::new();
    let mut families = vec![
        restriction_family(&groups, &mut tally),
        decomposition_family(&groups, config.max_dim, &mut tally),
        length_family(&groups, config.max_dim, &config.budget),
        theorem_family(&groups, config.theorem_max_dim, &mut tally),
        p_power_family(&groups, config.chain_max_dim, &config.budget, &mut tally),
        conjugation_family(&groups, config.max_dim, config.seeds, &mut tally),
    ];
    families.push(tally.report());
    SelftestReport { families }
}
