use semiab::corpus::Corpus;
use semiab::reflectors::Reflector;
use semiab::verification::{replay_report, verify_all, verify_suite, Suite};

fn all(r: &str, corpus: &str) -> Vec<(Suite, bool)> {
    let r: Reflector = r.parse().unwrap();
    let c = Corpus::builtin(corpus).unwrap();
    let (reports, _) = verify_all(&r, &c, 0).unwrap();
    for rep in &reports {
        // every kept counterexample must reproduce from its serialised form
        assert!(replay_report(rep).unwrap().iter().all(|&v| v), "{rep}");
    }
    reports.iter().map(|rep| (rep.suite.parse().unwrap(), rep.passed())).collect()
}

fn failing(results: &[(Suite, bool)]) -> Vec<Suite> {
    results.iter().filter(|(_, ok)| !ok).map(|(s, _)| *s).collect()
}

#[test]
fn torsion_theories_pass_everything() {
    for (r, corpus) in [("reduced", "rings"), ("pi0", "groupoids"), ("zerorng", "rngstar"), ("boole", "rngstar")] {
        let res = all(r, corpus);
        assert!(res.len() >= 14, "{r} on {corpus}: only {} suites ran", res.len());
        assert_eq!(failing(&res), vec![], "{r} on {corpus}");
    }
}

#[test]
fn abelianisation_fails_where_expected() {
    let res = all("ab", "groups");
    assert_eq!(failing(&res), vec![Suite::IdempotentRadical, Suite::ExtensionClosure, Suite::NormalComposition]);
    assert!(res.contains(&(Suite::BirkhoffNormalKernel, true)));
}

#[test]
fn boolean_rings_fail_on_nonassociative_rings() {
    let res = all("boole", "nonassoc");
    assert_eq!(failing(&res), vec![Suite::IdempotentRadical, Suite::ExtensionClosure]);
}

#[test]
fn burnside_reflectors() {
    let res = all("burnside:2", "abelian");
    assert_eq!(failing(&res), vec![Suite::IdempotentRadical, Suite::NormalComposition]);
    assert!(res.contains(&(Suite::IntersectionJoin, true)));
    let res = all("burnside:2", "zmod4");
    assert!(res.contains(&(Suite::HopfIndependence, true)));
}

#[test]
fn composite_suites_on_groups() {
    let r: Reflector = "burnside:2∘ab".parse().unwrap();
    let groups = Corpus::builtin("groups").unwrap();
    for s in [Suite::CompositeNormal, Suite::CompositeJoin] {
        let rep = verify_suite(s, &r, &groups, 0).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(rep.sample_size > groups.len());
    }
}

#[test]
fn larger_modules_are_skipped_not_failed() {
    let rep =
        verify_suite(Suite::HopfIndependence, &Reflector::Burnside(2), &Corpus::builtin("zmod8").unwrap(), 0).unwrap();
    assert!(rep.passed(), "{rep}");
    assert!(rep.notes.iter().any(|n| n.contains("skipped")));
}
