//! Preservation of split short exact sequences, checked three ways, and the
//! torsion-theory consequences that depend on it.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::Reflector;
use crate::algebra::{
    classify_sequence, enumerate_homs, factor_through, image, kernel, normal_subobjects, pullback, quotient, section,
    subalgebra, zero_algebra, Algebra, HomKind, Morphism, SequenceClass,
};
use crate::error::{Error, Result};
use crate::report::{Instance, Report, Witness};

/// `0 → K --kernel--> A --quotient--> B → 0` with `quotient ∘ section = 1`.
#[derive(Clone, Debug)]
pub struct SplitSequence {
    pub kernel: Morphism,
    pub quotient: Morphism,
    pub section: Morphism,
}

impl SplitSequence {
    pub fn new(kernel: Morphism, quotient: Morphism, section: Morphism) -> Result<Self> {
        if classify_sequence(&kernel, &quotient)? == SequenceClass::NotExact {
            return Err(Error::Precondition("sequence is not exact".into()));
        }
        if section.then(&quotient)? != Morphism::identity(quotient.cod()) {
            return Err(Error::Precondition("section is not a splitting".into()));
        }
        Ok(SplitSequence { kernel, quotient, section })
    }

    pub fn middle(&self) -> &Arc<Algebra> {
        self.quotient.dom()
    }

    pub fn instance(&self) -> Instance {
        Instance::split_sequence(&self.kernel, &self.quotient, &self.section)
    }
}

impl fmt::Display for SplitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0 → {} → {} ⇄ {} → 0", self.kernel.dom().name(), self.middle().name(), self.quotient.cod().name())
    }
}

/// One split sequence per normal subobject whose quotient map splits.
pub fn split_sequences(a: &Arc<Algebra>) -> Result<Vec<SplitSequence>> {
    let mut out = Vec::new();
    for n in normal_subobjects(a) {
        let q = quotient(a, &n)?;
        if let Some(s) = section(&q)? {
            out.push(SplitSequence { kernel: subalgebra(a, &n)?, quotient: q, section: s });
        }
    }
    Ok(out)
}

/// `F(K) → F(A) → F(B)` is again short exact: `F(k)` is injective with image
/// the kernel of `F(f)`.
pub fn preserves_sequence(r: &Reflector, seq: &SplitSequence) -> Result<bool> {
    let (fk, ..) = r.reflect_morphism(&seq.kernel)?;
    let (ff, ..) = r.reflect_morphism(&seq.quotient)?;
    Ok(fk.is_injective() && image(&fk) == *kernel(&ff).as_subobject())
}

/// Whether `F` sends the pullback of `f` along `g` to a pullback.
fn preserves_pullback(r: &Reflector, f: &Morphism, g: &Morphism) -> Result<bool> {
    let pb = pullback(f, g)?;
    let (ff, da, _) = r.reflect_morphism(f)?;
    let (fg, dc, _) = r.reflect_morphism(g)?;
    let target = pullback(&ff, &fg)?;
    let dp = r.reflect(&pb.object)?;
    let cone = target.mediate(&pb.p1.then(&da.unit)?, &pb.p2.then(&dc.unit)?)?;
    Ok(factor_through(&dp.unit, &cone)?.is_iso())
}

/// Pullbacks of the split epimorphism along `0 → B`, `1_B` and itself.
pub fn preserves_split_pullbacks(r: &Reflector, seq: &SplitSequence) -> Result<bool> {
    let f = &seq.quotient;
    let b = f.cod();
    let zero = zero_algebra(b.variety());
    for g in [Morphism::zero(&zero, b), Morphism::identity(b), f.clone()] {
        if !preserves_pullback(r, f, &g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `F(k)` is a monomorphism whose image is normal in `F(A)`.
pub fn protosplit_image_is_normal_mono(r: &Reflector, seq: &SplitSequence) -> Result<bool> {
    let (fk, ..) = r.reflect_morphism(&seq.kernel)?;
    Ok(fk.is_injective() && fk.cod().is_normal(&image(&fk)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Split short exact sequences are preserved.
    Definition,
    /// Pullbacks along split epimorphisms are preserved.
    SplitPullbacks,
    /// Protosplit monomorphisms go to normal monomorphisms.
    ProtosplitMonos,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::Definition, Route::SplitPullbacks, Route::ProtosplitMonos];

    pub fn check(self, r: &Reflector, seq: &SplitSequence) -> Result<bool> {
        match self {
            Route::Definition => preserves_sequence(r, seq),
            Route::SplitPullbacks => preserves_split_pullbacks(r, seq),
            Route::ProtosplitMonos => protosplit_image_is_normal_mono(r, seq),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Definition => "split-sequences",
            Route::SplitPullbacks => "split-pullbacks",
            Route::ProtosplitMonos => "protosplit-monos",
        })
    }
}

/// Checks every sequence along one route; failures become witnesses.
pub fn is_protoadditive(r: &Reflector, seqs: &[SplitSequence], route: Route, corpus: &str) -> Result<Report> {
    let verdicts: Vec<bool> = seqs.par_iter().map(|s| route.check(r, s)).collect::<Result<_>>()?;
    let witnesses = seqs
        .iter()
        .zip(&verdicts)
        .filter(|(_, ok)| !**ok)
        .map(|(s, _)| Witness::new(format!("{s} is not preserved"), s.instance()))
        .collect();
    Ok(Report::new(&route.to_string(), r, corpus, 0)
        .finish(seqs.len(), witnesses)
        .with_note(format!("protoadditive on {} split sequences", seqs.len())))
}

/// For every torsion object, the kernels of its split epimorphisms are torsion.
pub fn protosplit_hereditary(r: &Reflector, corpus: &[Arc<Algebra>]) -> Result<(usize, Vec<Witness>)> {
    let per: Vec<(usize, Vec<Witness>)> = corpus
        .par_iter()
        .map(|a| {
            if !r.is_torsion(a)? {
                return Ok((0, Vec::new()));
            }
            let seqs = split_sequences(a)?;
            let mut bad = Vec::new();
            for s in &seqs {
                if !r.is_torsion(s.kernel.dom())? {
                    bad.push(Witness::new(
                        format!(
                            "{} is torsion but its protosplit subobject {} is not",
                            a.name(),
                            s.kernel.dom().name()
                        ),
                        s.instance(),
                    ));
                }
            }
            Ok((seqs.len(), bad))
        })
        .collect::<Result<_>>()?;
    Ok(fold(per))
}

fn fold(per: Vec<(usize, Vec<Witness>)>) -> (usize, Vec<Witness>) {
    per.into_iter().fold((0, Vec::new()), |(n, mut w), (k, v)| {
        w.extend(v);
        (n + k, w)
    })
}

/// Split sequences with torsion-free ends must have torsion-free middle.
pub fn split_extension_closure(r: &Reflector, seqs: &[SplitSequence]) -> Result<(usize, Vec<Witness>)> {
    let per: Vec<(usize, Vec<Witness>)> = seqs
        .par_iter()
        .map(|s| {
            if !r.is_torsion_free(s.kernel.dom())? || !r.is_torsion_free(s.quotient.cod())? {
                return Ok((0, Vec::new()));
            }
            let bad = if r.is_torsion_free(s.middle())? {
                Vec::new()
            } else {
                vec![Witness::new(
                    format!("{s}: both ends lie in the subcategory, {} does not", s.middle().name()),
                    s.instance(),
                )]
            };
            Ok((1, bad))
        })
        .collect::<Result<_>>()?;
    Ok(fold(per))
}

/// Every short exact sequence `N → A → A/N` with `N` and `A/N` torsion-free
/// has `A` torsion-free.
pub fn extension_closure(r: &Reflector, corpus: &[Arc<Algebra>]) -> Result<(usize, Vec<Witness>)> {
    let per: Vec<(usize, Vec<Witness>)> = corpus
        .par_iter()
        .map(|a| {
            let free = r.is_torsion_free(a)?;
            let mut n_checked = 0;
            let mut bad = Vec::new();
            for n in normal_subobjects(a) {
                let k = subalgebra(a, &n)?;
                let q = quotient(a, &n)?;
                if r.is_torsion_free(k.dom())? && r.is_torsion_free(q.cod())? {
                    n_checked += 1;
                    if !free && bad.is_empty() {
                        bad.push(Witness::new(
                            format!(
                                "{} is an extension of {} by {} yet not torsion-free",
                                a.name(),
                                q.cod().name(),
                                k.dom().name()
                            ),
                            Instance::morphism(&q),
                        ));
                    }
                }
            }
            Ok((n_checked, bad))
        })
        .collect::<Result<_>>()?;
    Ok(fold(per))
}

/// Idempotence of the radical plus `hom(T, F) = 0` between torsion and
/// torsion-free corpus members; extension closure is reported as a note.
pub fn torsion_theory_report(r: &Reflector, corpus: &[Arc<Algebra>], corpus_name: &str) -> Result<Report> {
    let idempotent: Vec<bool> = corpus.par_iter().map(|a| r.is_idempotent_at(a)).collect::<Result<_>>()?;
    let mut witnesses: Vec<Witness> = corpus
        .iter()
        .zip(&idempotent)
        .filter(|(_, ok)| !**ok)
        .map(|(a, _)| Witness::new(format!("T(T({0})) ≠ T({0})", a.name()), Instance::object(a)))
        .collect();
    let mut torsion = Vec::new();
    let mut free = Vec::new();
    for a in corpus {
        if r.is_torsion(a)? {
            torsion.push(a.clone());
        }
        if r.is_torsion_free(a)? {
            free.push(a.clone());
        }
    }
    let pairs: Vec<(Arc<Algebra>, Arc<Algebra>)> =
        torsion.iter().flat_map(|t| free.iter().map(move |f| (t.clone(), f.clone()))).collect();
    let homs: Vec<Option<Morphism>> = pairs
        .par_iter()
        .map(|(t, f)| Ok(enumerate_homs(t, f, HomKind::All)?.into_iter().find(|h| !h.is_zero())))
        .collect::<Result<_>>()?;
    for h in homs.into_iter().flatten() {
        witnesses.push(Witness::new(
            format!("nonzero map from torsion {} to torsion-free {}", h.dom().name(), h.cod().name()),
            Instance::morphism(&h),
        ));
    }
    let (ext_n, ext_bad) = extension_closure(r, corpus)?;
    let note = if ext_bad.is_empty() {
        format!("torsion-free part closed under the {ext_n} corpus extensions with torsion-free ends")
    } else {
        format!("torsion-free part not closed under extensions: {}", ext_bad[0].note)
    };
    Ok(Report::new("torsion-theory", r, corpus_name, 0).finish(corpus.len() + pairs.len(), witnesses).with_note(note))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::*;

    fn arc(a: Algebra) -> Arc<Algebra> {
        Arc::new(a)
    }

    fn s3_sequence() -> SplitSequence {
        let s3 = arc(symmetric(3));
        split_sequences(&s3).unwrap().into_iter().find(|s| s.kernel.dom().order() == 3).unwrap()
    }

    #[test]
    fn split_sequences_of_small_groups() {
        // S3 splits over 1, A3 and S3
        assert_eq!(split_sequences(&arc(symmetric(3))).unwrap().len(), 3);
        // C4 → C2 does not split
        assert_eq!(split_sequences(&arc(cyclic(4))).unwrap().len(), 2);
        // Q8 only splits trivially
        assert_eq!(split_sequences(&arc(quaternion8())).unwrap().len(), 2);
    }

    #[test]
    fn abelianisation_breaks_the_s3_sequence_on_every_route() {
        let s = s3_sequence();
        for route in Route::ALL {
            assert!(!route.check(&Reflector::Abelianisation, &s).unwrap(), "{route}");
        }
    }

    #[test]
    fn the_split_square_ring_breaks_boole() {
        let a = arc(split_square_ring());
        let seqs = split_sequences(&a).unwrap();
        let bad: Vec<_> = seqs.iter().filter(|s| !preserves_sequence(&Reflector::Boolean, s).unwrap()).collect();
        assert!(!bad.is_empty());
        let (n, w) = split_extension_closure(&Reflector::Boolean, &seqs).unwrap();
        assert!(n >= 1);
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn reduced_preserves_ring_sequences() {
        for n in [2, 4, 6, 12] {
            let a = arc(zring(n));
            for s in split_sequences(&a).unwrap() {
                for route in Route::ALL {
                    assert!(route.check(&Reflector::Reduced, &s).unwrap());
                }
            }
        }
    }

    #[test]
    fn identity_is_a_torsion_theory() {
        let corpus = vec![arc(cyclic(4)), arc(symmetric(3))];
        let rep = torsion_theory_report(&Reflector::Identity, &corpus, "tiny").unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn burnside_two_is_not_idempotent_on_c4() {
        let corpus = vec![arc(cyclic(2)), arc(cyclic(4))];
        let rep = torsion_theory_report(&Reflector::Burnside(2), &corpus, "tiny").unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.first_witness().unwrap().instance.object_name().as_deref(), Some("C4"));
    }

    #[test]
    fn sequences_are_validated() {
        let c4 = arc(cyclic(4));
        let c2 = arc(cyclic(2));
        let q = Morphism::new(c4.clone(), c2.clone(), vec![0, 1, 0, 1]).unwrap();
        let k = subalgebra(&c4, &kernel(&q)).unwrap();
        let not_section = Morphism::zero(&c2, &c4);
        assert!(SplitSequence::new(k, q, not_section).is_err());
    }
}
