//! Named suites that sweep a corpus for counterexamples to one result each.
//!
//! Every suite checks a per-instance condition in parallel and aggregates in
//! corpus order, so reports are identical across thread counts. Witnesses are
//! serialised inputs; [`replay`] re-runs the same per-instance check on them.

mod checks;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::reflectors::Reflector;
use crate::report::{Instance, Report, Witness};

pub use checks::Check;

/// At most this many witnesses are kept in a report; the summary still
/// counts all of them.
pub const MAX_WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    IdempotentRadical,
    SplitPullbacks,
    ProtosplitMonos,
    ProtosplitHereditary,
    ExtensionClosure,
    NormalExtensionKernel,
    Orthogonality,
    StableFactorisation,
    UniqueFactorisation,
    NormalComposition,
    DoubleExtensionPushout,
    HigherNormalKernel,
    BirkhoffNormalKernel,
    BirkhoffCertificate,
    CompositeNormal,
    CompositeJoin,
    IntersectionJoin,
    HopfIndependence,
}

impl Suite {
    pub const ALL: [Suite; 18] = [
        Suite::IdempotentRadical,
        Suite::SplitPullbacks,
        Suite::ProtosplitMonos,
        Suite::ProtosplitHereditary,
        Suite::ExtensionClosure,
        Suite::NormalExtensionKernel,
        Suite::Orthogonality,
        Suite::StableFactorisation,
        Suite::UniqueFactorisation,
        Suite::NormalComposition,
        Suite::DoubleExtensionPushout,
        Suite::HigherNormalKernel,
        Suite::BirkhoffNormalKernel,
        Suite::BirkhoffCertificate,
        Suite::CompositeNormal,
        Suite::CompositeJoin,
        Suite::IntersectionJoin,
        Suite::HopfIndependence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::IdempotentRadical => "idempotent-radical",
            Suite::SplitPullbacks => "split-pullbacks",
            Suite::ProtosplitMonos => "protosplit-monos",
            Suite::ProtosplitHereditary => "protosplit-hereditary",
            Suite::ExtensionClosure => "extension-closure",
            Suite::NormalExtensionKernel => "normal-extension-kernel",
            Suite::Orthogonality => "orthogonality",
            Suite::StableFactorisation => "stable-factorisation",
            Suite::UniqueFactorisation => "unique-factorisation",
            Suite::NormalComposition => "normal-composition",
            Suite::DoubleExtensionPushout => "double-extension-pushout",
            Suite::HigherNormalKernel => "higher-normal-kernel",
            Suite::BirkhoffNormalKernel => "birkhoff-normal-kernel",
            Suite::BirkhoffCertificate => "birkhoff-certificate",
            Suite::CompositeNormal => "composite-normal",
            Suite::CompositeJoin => "composite-join",
            Suite::IntersectionJoin => "intersection-join",
            Suite::HopfIndependence => "hopf-independence",
        }
    }

    /// The statement a pass fails to refute.
    pub fn statement(self) -> &'static str {
        match self {
            Suite::IdempotentRadical => {
                "torsion-free reflector: the radical is idempotent, units are stable and the reflector is semi-left-exact"
            }
            Suite::SplitPullbacks => "protoadditive iff pullbacks along split epimorphisms are preserved",
            Suite::ProtosplitMonos => "protoadditive iff protosplit monomorphisms go to normal monomorphisms",
            Suite::ProtosplitHereditary => "protoadditive iff the torsion part is hereditary for protosplit monos",
            Suite::ExtensionClosure => "the torsion-free part is closed under (split) extensions",
            Suite::NormalExtensionKernel => "for protoadditive reflectors, f is a normal extension iff K[f] is torsion-free",
            Suite::Orthogonality => "every Ē-morphism is orthogonal to every M̄-morphism",
            Suite::StableFactorisation => "Ē is pullback-stable and its pullbacks are inverted by the reflector",
            Suite::UniqueFactorisation => {
                "under (N), f factors uniquely up to iso as m∘e with e ∈ Ē, m ∈ M̄; normal extensions compose"
            }
            Suite::NormalComposition => "composites of normal extensions are normal extensions",
            Suite::DoubleExtensionPushout => "a square of surjections is a double extension iff it is a pushout",
            Suite::HigherNormalKernel => "an n-fold extension is normal iff ⋂ K[a_i] is torsion-free",
            Suite::BirkhoffNormalKernel => "central extensions are the surjections with [f]_{1,B} = 0",
            Suite::BirkhoffCertificate => "unit squares of surjections are double extensions",
            Suite::CompositeNormal => "f is C-normal iff it is B-normal and K[f] lies in C",
            Suite::CompositeJoin => "[A]_{n,C} = [A]_{n,B} ∨ C(⋂ K[a_i])",
            Suite::IntersectionJoin => "[A]_{B∩B′} = [A]_B ∨ B′(A), and normality for B∩B′ is normality for both",
            Suite::HopfIndependence => "Hopf formula homology does not depend on the presentation",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::Format(format!("unknown suite `{s}` (known: {})", names.join(", ")))
        })
    }
}

/// Per-instance outcomes folded in corpus order.
#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    violations: Vec<Witness>,
    illustrations: Vec<Witness>,
}

fn sweep<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Check> + Sync + Send) -> Result<Tally> {
    let outcomes: Vec<Check> = items.par_iter().map(f).collect::<Result<_>>()?;
    let mut t = Tally::default();
    for c in outcomes {
        match c {
            Check::Holds => t.checked += 1,
            Check::Skip => t.skipped += 1,
            Check::Illustrates(w) => {
                t.checked += 1;
                t.illustrations.push(w);
            }
            Check::Violated(w) => {
                t.checked += 1;
                t.violations.push(w);
            }
        }
    }
    Ok(t)
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.violations.extend(other.violations);
        self.illustrations.extend(other.illustrations);
        self
    }

    fn into_report(self, suite: Suite, r: &Reflector, corpus: &Corpus, seed: u64) -> Report {
        let total = self.violations.len();
        let mut witnesses = self.violations;
        witnesses.truncate(MAX_WITNESSES);
        let mut rep = Report::new(suite.name(), r, &corpus.name, seed).finish(self.checked, witnesses);
        if total > MAX_WITNESSES {
            rep.summary =
                format!("{total} counterexample(s) in {} instances, first {MAX_WITNESSES} kept", self.checked);
        }
        if self.skipped > 0 {
            rep = rep.with_note(format!("{} instance(s) outside the hypotheses were skipped", self.skipped));
        }
        rep.illustrations = self.illustrations.into_iter().take(MAX_WITNESSES).collect();
        rep
    }
}

/// Whether `suite` can run on `r` over `corpus`; the error says why not.
pub fn compatible(suite: Suite, r: &Reflector, corpus: &Corpus) -> Result<()> {
    let v = corpus.variety().ok_or_else(|| Error::Precondition(format!("corpus `{}` is empty", corpus.name)))?;
    if !r.applies_to(v) {
        return Err(Error::Precondition(format!("{r} does not apply to {v} corpus `{}`", corpus.name)));
    }
    checks::requirements(suite, r, corpus)
}

/// Runs one suite. Deterministic in `(suite, r, corpus, seed)`.
pub fn verify_suite(suite: Suite, r: &Reflector, corpus: &Corpus, seed: u64) -> Result<Report> {
    compatible(suite, r, corpus)?;
    let (tally, notes) = checks::run(suite, r, corpus, seed)?;
    let mut rep = tally.into_report(suite, r, corpus, seed);
    rep.notes.extend(notes);
    // the statement goes last; the CLI prints it as such
    Ok(rep.with_note(suite.statement()))
}

/// A suite left out of a run, with the reason.
pub type Skipped = (Suite, String);

/// Runs every suite compatible with `r` and `corpus`, in parallel, returning
/// reports in [`Suite::ALL`] order together with the suites that were skipped.
pub fn verify_all(r: &Reflector, corpus: &Corpus, seed: u64) -> Result<(Vec<Report>, Vec<Skipped>)> {
    let runs: Vec<(Suite, Result<Report>)> =
        Suite::ALL.par_iter().map(|&s| (s, verify_suite(s, r, corpus, seed))).collect();
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for (s, res) in runs {
        match res {
            Ok(rep) => reports.push(rep),
            Err(Error::Precondition(why)) => skipped.push((s, why)),
            Err(e) => return Err(e),
        }
    }
    Ok((reports, skipped))
}

/// Re-runs the per-instance check of `suite` on a serialised instance;
/// `true` means the violation is reproduced.
pub fn replay(suite: Suite, r: &Reflector, seed: u64, instance: &Instance) -> Result<bool> {
    Ok(matches!(checks::recheck(suite, r, seed, instance)?, Check::Violated(_)))
}

/// Replays every witness of a report.
pub fn replay_report(rep: &Report) -> Result<Vec<bool>> {
    let suite: Suite = rep.suite.parse()?;
    let r: Reflector = rep.reflector.parse()?;
    rep.witnesses.iter().map(|w| replay(suite, &r, rep.seed, &w.instance)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn incompatible_pairs_are_refused() {
        let rings = Corpus::builtin("rings").unwrap();
        assert!(verify_suite(Suite::IdempotentRadical, &Reflector::Abelianisation, &rings, 0).is_err());
        assert!(verify_suite(Suite::CompositeJoin, &Reflector::Reduced, &rings, 0).is_err());
    }
}
