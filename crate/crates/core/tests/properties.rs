use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use semiab::algebra::{enumerate_homs, kernel, pullback, quotient, Algebra, HomKind, Morphism};
use semiab::birkhoff::birkhoff_radical;
use semiab::corpus::{Corpus, NAMES};
use semiab::factorisation::{condition_n, em_factorize, in_e, in_m, NCube};
use semiab::format::{
    algebra_from_json, algebra_to_json, cube_from_json, cube_to_json, morphism_from_json, morphism_to_json, parse,
    to_pretty,
};
use semiab::reflectors::Reflector;
use semiab::report::Report;
use semiab::verification::{verify_suite, Suite};

/// Every builtin corpus member of order at most 16.
fn pool() -> &'static [Arc<Algebra>] {
    static POOL: OnceLock<Vec<Arc<Algebra>>> = OnceLock::new();
    POOL.get_or_init(|| {
        NAMES.iter().flat_map(|n| Corpus::builtin(n).unwrap().algebras).filter(|a| a.order() <= 16).collect()
    })
}

fn reflectors() -> Vec<Reflector> {
    ["ab", "burnside:2", "burnside:3", "exponent:2", "reduced", "zerorng", "boole", "pi0", "id", "burnside:2∘ab"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn algebra() -> impl Strategy<Value = Arc<Algebra>> {
    (0..pool().len()).prop_map(|i| pool()[i].clone())
}

/// An algebra with a reflector that applies to it.
fn algebra_and_reflector() -> impl Strategy<Value = (Arc<Algebra>, Reflector)> {
    algebra().prop_flat_map(|a| {
        let rs: Vec<Reflector> = reflectors().into_iter().filter(|r| r.applies_to(a.variety())).collect();
        (Just(a), proptest::sample::select(rs))
    })
}

/// A surjection out of a pool member, with a reflector that applies.
fn surjection_and_reflector() -> impl Strategy<Value = (Morphism, Reflector)> {
    algebra_and_reflector().prop_flat_map(|(a, r)| {
        let qs = semiab::corpus::quotients(&a);
        (proptest::sample::select(qs), Just(r))
    })
}

/// Pairs of small algebras of one variety, with a reflector for it.
fn hom_set_and_reflector() -> impl Strategy<Value = (Arc<Algebra>, Arc<Algebra>, Reflector)> {
    let small: Vec<&Arc<Algebra>> = pool().iter().filter(|a| a.order() <= 8).collect();
    let pairs: Vec<(Arc<Algebra>, Arc<Algebra>)> = small
        .iter()
        .flat_map(|a| small.iter().filter(|b| b.variety() == a.variety()).map(|b| ((*a).clone(), (*b).clone())))
        .collect();
    proptest::sample::select(pairs).prop_flat_map(|(a, b)| {
        let rs: Vec<Reflector> = reflectors().into_iter().filter(|r| r.applies_to(a.variety())).collect();
        (Just(a), Just(b), proptest::sample::select(rs))
    })
}

fn members(a: &Algebra, s: &[usize]) -> BTreeSet<usize> {
    s.iter().copied().filter(|&x| x < a.order()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn radical_is_normal_with_torsion_free_quotient((a, r) in algebra_and_reflector()) {
        let t = r.radical(&a).unwrap();
        prop_assert!(a.is_normal(t.as_subobject()));
        let d = r.reflect(&a).unwrap();
        prop_assert_eq!(d.reflection().order() * t.len(), a.order());
        prop_assert!(r.is_torsion_free(d.reflection()).unwrap());
    }

    #[test]
    fn morphisms_carry_radicals_into_radicals((a, b, r) in hom_set_and_reflector()) {
        let homs = enumerate_homs(&a, &b, HomKind::All).unwrap();
        let (ta, tb) = (r.radical(&a).unwrap(), r.radical(&b).unwrap());
        let tb = members(&b, tb.members());
        for f in homs {
            prop_assert!(ta.members().iter().all(|&x| tb.contains(&f.apply(x))));
        }
    }

    #[test]
    fn factorisation_recovers_the_map((f, r) in surjection_and_reflector()) {
        prop_assume!(r.is_idempotent_at(f.dom()).unwrap());
        prop_assume!(condition_n(&r, &f).unwrap());
        let fz = em_factorize(&r, &f).unwrap();
        let composite = fz.e.then(&fz.m).unwrap();
        prop_assert_eq!(composite.map(), f.map());
        prop_assert!(in_e(&r, &fz.e).unwrap());
        prop_assert!(in_m(&r, &fz.m).unwrap());
    }

    #[test]
    fn relative_commutator_lies_in_the_kernel((f, r) in surjection_and_reflector()) {
        let t = birkhoff_radical(&r, &f).unwrap();
        prop_assert!(t.is_subset_of(&kernel(&f)));
        prop_assert!(f.dom().is_normal(t.as_subobject()));
        // and is zero on isomorphisms
        let id = Morphism::identity(f.dom());
        prop_assert!(birkhoff_radical(&r, &id).unwrap().is_zero());
    }

    #[test]
    fn pullbacks_match_pair_enumeration(a in algebra(), i in 0usize..32, j in 0usize..32) {
        let qs = semiab::corpus::quotients(&a);
        let (f, g) = (&qs[i % qs.len()], &qs[j % qs.len()]);
        // both into a common quotient
        let m = semiab::algebra::join_normal(&a, kernel(f).as_subobject(), kernel(g).as_subobject());
        let q = quotient(&a, &m).unwrap();
        let bf = semiab::algebra::factor_through(f, &q).unwrap();
        let bg = semiab::algebra::factor_through(g, &q).unwrap();
        let pb = pullback(&bf, &bg).unwrap();
        let pairs = bf.dom().elements()
            .flat_map(|x| bg.dom().elements().map(move |y| (x, y)))
            .filter(|&(x, y)| bf.apply(x) == bg.apply(y))
            .count();
        prop_assert_eq!(pb.object.order(), pairs);
        for z in pb.object.elements() {
            prop_assert_eq!(bf.apply(pb.p1.apply(z)), bg.apply(pb.p2.apply(z)));
        }
        let seen: BTreeSet<(usize, usize)> = pb.object.elements().map(|z| (pb.p1.apply(z), pb.p2.apply(z))).collect();
        prop_assert_eq!(seen.len(), pairs);
    }

    #[test]
    fn algebras_and_morphisms_round_trip(a in algebra()) {
        let j = algebra_to_json(&a);
        let back = algebra_from_json(&parse(&to_pretty(&j)).unwrap()).unwrap();
        prop_assert!(back == *a);
        for q in semiab::corpus::quotients(&a).into_iter().take(4) {
            let again = morphism_from_json(&parse(&to_pretty(&morphism_to_json(&q))).unwrap()).unwrap();
            prop_assert_eq!(again.map(), q.map());
            prop_assert!(**again.cod() == **q.cod());
        }
    }

    #[test]
    fn squares_round_trip(a in algebra(), i in 0usize..16, j in 0usize..16) {
        let ns = semiab::algebra::normal_subobjects(&a);
        let (ni, nj) = (&ns[i % ns.len()], &ns[j % ns.len()]);
        let m = semiab::algebra::join_normal(&a, ni, nj);
        let sq = semiab::corpus::quotient_square(&a, ni, nj, &m).unwrap();
        let back = cube_from_json(&parse(&to_pretty(&cube_to_json(&sq))).unwrap()).unwrap();
        prop_assert_eq!(back.dim(), 2);
        for v in 0..4 {
            prop_assert!(**back.vertex(v) == **sq.vertex(v));
        }
        prop_assert_eq!(back.edge(3, 0).map(), sq.edge(3, 0).map());
        prop_assert_eq!(back.edge(3, 1).map(), sq.edge(3, 1).map());
    }
}

#[test]
fn reports_round_trip_and_ignore_thread_count() {
    let rings = Corpus::builtin("rings").unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| verify_suite(Suite::Orthogonality, &Reflector::Reduced, &rings, 7).unwrap())
    };
    let (one, many) = (run(1), run(4));
    assert_eq!(one, many);
    let text = to_pretty(&one);
    let back: Report = parse(&text).unwrap();
    assert_eq!(back, one);
}

#[test]
fn seeds_change_samples_not_verdicts() {
    let groupoids = Corpus::builtin("groupoids").unwrap();
    for seed in [0, 1, 2] {
        let rep = verify_suite(Suite::StableFactorisation, &Reflector::Pi0, &groupoids, seed).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn arrows_of_isomorphisms_are_trivially_normal() {
    for a in pool().iter().filter(|a| a.order() <= 8) {
        let id = NCube::arrow(Morphism::identity(a));
        for r in reflectors().iter().filter(|r| r.applies_to(a.variety())) {
            assert!(semiab::factorisation::is_normal_extension(r, id.edge(1, 0)).unwrap(), "{r} at {}", a.name());
        }
    }
}
