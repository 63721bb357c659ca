use fpg::analyzer::{derive_norm_data, synthesize, theorem_ranks, verify_norm_filtration, Ranks};
use fpg::linalg::Subspace;
use fpg::module::{restrict_cyclic_type, GModule, GroupSpec, JordanType};
use fpg::oracle::random_conjugate;
use proptest::prelude::*;

fn group() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![Just((2, 1)), Just((2, 2)), Just((2, 3)), Just((3, 1)), Just((3, 2)), Just((5, 1))]
        .prop_map(|(p, n)| GroupSpec::new(p, n).unwrap())
}

/// A conjugated module of a random Jordan type, so the basis is not adapted to the blocks.
fn module() -> impl Strategy<Value = (GModule, JordanType)> {
    (group(), proptest::collection::vec(1usize..=9, 1..4), any::<u64>()).prop_map(|(g, parts, seed)| {
        let parts: Vec<usize> = parts.into_iter().map(|s| s.min(g.order())).collect();
        let t = JordanType::new(parts).unwrap();
        let m = GModule::from_jordan_type(&g, &t).unwrap();
        (random_conjugate(&m, seed).unwrap(), t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn filtration_is_monotone((m, _) in module()) {
        let fixed = m.fixed_submodule();
        let mut prev: Option<Subspace> = None;
        for j in 1..=m.group().order() {
            let f = m.rho_power(j - 1).image_basis().intersect(&fixed).unwrap();
            if let Some(prev) = &prev {
                prop_assert!(f.is_subspace_of(prev).unwrap());
            }
            prev = Some(f);
        }
    }

    #[test]
    fn decomposition_of_conjugates((m, t) in module()) {
        let d = m.decompose().unwrap();
        prop_assert_eq!(d.jordan_type(), t.clone());
        let mut span = Subspace::zero(m.prime(), m.dim());
        for s in d.cyclic_summands() {
            prop_assert!(m.is_invariant(&s).unwrap());
            span = span.sum(&s).unwrap();
        }
        prop_assert_eq!(span.dim(), m.dim());
        for l in d.lengths() {
            for g in d.generators(l) {
                prop_assert_eq!(m.length(g).unwrap(), l);
            }
        }
    }

    #[test]
    fn restriction_is_additive((m, t) in module(), k in 0u32..4) {
        let k = k.min(m.group().n());
        let mut expected = JordanType::new(vec![]).unwrap();
        for &l in t.parts() {
            expected = expected.union(&restrict_cyclic_type(l, m.group(), k).unwrap());
        }
        prop_assert_eq!(m.restrict(k).unwrap().jordan_type(), expected);
    }

    #[test]
    fn synthesized_witnesses_round_trip(g in group(), raw in proptest::collection::vec(0usize..3, 4)) {
        let ranks = Ranks::new(&g, raw[..=g.n() as usize].to_vec()).unwrap();
        let model = synthesize(&ranks, 2).unwrap();
        let norm = Subspace::row_space(&model.module().norm_operator().transpose());
        prop_assert!(norm.is_subspace_of(model.level(g.n())).unwrap());
        prop_assert!(verify_norm_filtration(&model).passed());
        prop_assert_eq!(theorem_ranks(&derive_norm_data(&model)).unwrap(), ranks);
    }
}
