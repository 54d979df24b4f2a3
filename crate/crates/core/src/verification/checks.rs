//! Per-instance conditions, the instances each suite sweeps, and decoding of
//! serialised witnesses back into inputs.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{sweep, Suite, Tally};
use crate::algebra::{
    enumerate_homs, factor_through, huq_commutator, join_normal, kernel, normal_subobjects, power_subobject, pullback,
    quotient, subalgebra, Algebra, HomKind, Morphism, NormalSubobject, Subobject, Variety,
};
use crate::birkhoff::{
    birkhoff_radical, comparison_is_protoadditive, composite_radical, hopf_homology, is_birkhoff_normal, meet_radical,
    radical_by_quotients, relative_commutator, tower_peak, unit_square, Mode, RECURSION_BUDGET,
};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::factorisation::{
    check_orthogonal, condition_n, em_factorize, in_e, in_m, is_nfold_extension, is_nfold_normal, is_normal_by_galois,
    is_normal_extension, nfold_factorize, Diagonal, NCube,
};
use crate::format::{cube_from_json, morphism_from_json, resolve, MorphismJson};
use crate::reflectors::{split_sequences, Reflector, Route, SplitSequence};
use crate::report::{Instance, Witness};

/// Outcome of one instance.
#[derive(Clone, Debug)]
pub enum Check {
    Holds,
    /// Outside the hypotheses of the statement.
    Skip,
    /// Holds, but worth showing: e.g. both sides of an equivalence fail.
    Illustrates(Witness),
    Violated(Witness),
}

/// Sampled suites draw at most this many instances.
pub const SAMPLE: usize = 256;
/// Square sweeps enumerate everything up to this many squares, then sample.
pub const SQUARE_LIMIT: usize = 2000;
/// Hom-set sampling only uses algebras up to this order.
const SMALL: usize = 8;

fn holds_or(ok: bool, w: impl FnOnce() -> Witness) -> Check {
    if ok {
        Check::Holds
    } else {
        Check::Violated(w())
    }
}

fn arrow_name(f: &Morphism) -> String {
    format!("{} → {}", f.dom().name(), f.cod().name())
}

/// `s ⊆ dom(inc)` pushed along the inclusion.
fn push(inc: &Morphism, s: &Subobject) -> Subobject {
    Subobject::from_members(inc.cod().order(), s.members().iter().map(|&x| inc.apply(x)))
}

fn kernel_object(f: &Morphism) -> Result<Morphism> {
    subalgebra(f.dom(), &kernel(f))
}

fn split_sequences_of(corpus: &Corpus) -> Result<Vec<SplitSequence>> {
    let per: Vec<Vec<SplitSequence>> = corpus.algebras.par_iter().map(split_sequences).collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

fn idempotent_on(r: &Reflector, corpus: &Corpus) -> Result<Option<String>> {
    for a in &corpus.algebras {
        if !r.is_idempotent_at(a)? {
            return Ok(Some(a.name().to_string()));
        }
    }
    Ok(None)
}

fn protoadditive_on(r: &Reflector, seqs: &[SplitSequence]) -> Result<bool> {
    let v: Vec<bool> = seqs.par_iter().map(|s| Route::Definition.check(r, s)).collect::<Result<_>>()?;
    Ok(v.into_iter().all(|x| x))
}

fn require_torsion_theory(r: &Reflector, corpus: &Corpus) -> Result<()> {
    match idempotent_on(r, corpus)? {
        None => Ok(()),
        Some(a) => Err(Error::Precondition(format!(
            "the radical of {r} is not idempotent at {a}, so it does not come from a torsion theory"
        ))),
    }
}

fn require_protoadditive(r: &Reflector, corpus: &Corpus) -> Result<()> {
    if protoadditive_on(r, &split_sequences_of(corpus)?)? {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{r} is not protoadditive on corpus `{}`", corpus.name)))
    }
}

fn composite_parts(r: &Reflector) -> Result<&Reflector> {
    match r {
        Reflector::Composite(_, inner) => Ok(inner),
        _ => Err(Error::Precondition(format!("{r} is not a composite outer∘inner"))),
    }
}

pub(super) fn requirements(suite: Suite, r: &Reflector, corpus: &Corpus) -> Result<()> {
    let v = corpus.variety().expect("checked non-empty");
    match suite {
        Suite::ProtosplitHereditary
        | Suite::Orthogonality
        | Suite::StableFactorisation
        | Suite::UniqueFactorisation => require_torsion_theory(r, corpus),
        Suite::NormalExtensionKernel | Suite::HigherNormalKernel => {
            require_torsion_theory(r, corpus)?;
            require_protoadditive(r, corpus)
        }
        Suite::CompositeNormal | Suite::CompositeJoin => composite_parts(r).map(|_| ()),
        Suite::IntersectionJoin => match (r, v) {
            (Reflector::Burnside(_), Variety::Group) => Ok(()),
            _ => Err(Error::Precondition("the intersection formula is checked for burnside:k on groups".into())),
        },
        Suite::HopfIndependence => match v {
            Variety::ZmodModule(_) => Ok(()),
            _ => Err(Error::Precondition("homology is computed for Z/m-modules only".into())),
        },
        _ => Ok(()),
    }
}

pub(super) fn run(suite: Suite, r: &Reflector, corpus: &Corpus, seed: u64) -> Result<(Tally, Vec<String>)> {
    let mut notes = Vec::new();
    let tally = match suite {
        Suite::IdempotentRadical => {
            let idem = sweep(&corpus.algebras, |a| idempotence(r, a))?;
            let (free_x, any_x) = unit_cospans(r, corpus, seed)?;
            let sle = sweep(&free_x, |(eta, x)| unit_pullback(r, eta, x))?;
            let stable = sweep(&any_x, |(eta, x)| unit_pullback(r, eta, x))?;
            notes.push(format!(
                "semi-left-exact on {} sampled pullbacks with X torsion-free: {}; stable units on {} further samples: {}",
                sle.checked,
                sle.violations.is_empty(),
                stable.checked,
                stable.violations.is_empty()
            ));
            let conditions = [idem.violations.is_empty(), sle.violations.is_empty(), stable.violations.is_empty()];
            if conditions.iter().any(|&c| c != conditions[0]) {
                notes.push("the conditions disagree on this corpus".into());
            }
            idem.merge(sle).merge(stable)
        }
        Suite::SplitPullbacks | Suite::ProtosplitMonos => {
            let route = if suite == Suite::SplitPullbacks { Route::SplitPullbacks } else { Route::ProtosplitMonos };
            let seqs = split_sequences_of(corpus)?;
            let t = sweep(&seqs, |s| route_agreement(r, route, s))?;
            notes.push(if t.illustrations.is_empty() {
                format!("protoadditive on {} split sequences", seqs.len())
            } else {
                format!(
                    "not protoadditive: {} of {} split sequences are not preserved",
                    t.illustrations.len(),
                    seqs.len()
                )
            });
            t
        }
        Suite::ProtosplitHereditary => {
            let seqs = split_sequences_of(corpus)?;
            let sides: Vec<(bool, bool)> = seqs
                .par_iter()
                .map(|s| Ok((Route::Definition.check(r, s)?, hereditary_at(r, s)?)))
                .collect::<Result<_>>()?;
            let proto = sides.iter().all(|x| x.0);
            let hered = sides.iter().all(|x| x.1);
            notes.push(format!("protoadditive: {proto}; torsion part hereditary: {hered}"));
            let mut t = Tally { checked: seqs.len(), ..Tally::default() };
            let offending = seqs.iter().zip(&sides).filter(|(_, (p, h))| !p || !h);
            for (s, (p, h)) in offending {
                let w = Witness::new(
                    format!("{s}: preserved {p}, torsion kernel when the middle is torsion {h}"),
                    s.instance(),
                );
                if proto == hered {
                    t.illustrations.push(w);
                } else {
                    t.violations.push(w);
                }
            }
            t
        }
        Suite::ExtensionClosure => {
            let seqs = split_sequences_of(corpus)?;
            let split = sweep(&seqs, |s| split_closure(r, s))?;
            let proto = protoadditive_on(r, &seqs)?;
            if proto && !split.violations.is_empty() {
                notes.push("protoadditive yet not closed under split extensions: an implementation fault".into());
            } else if !split.violations.is_empty() {
                notes.push(format!("not closed under split extensions, hence {r} is not protoadditive"));
            }
            let full = if idempotent_on(r, corpus)?.is_none() {
                sweep(&corpus.surjections(), |q| extension(r, q))?
            } else {
                notes.push("closure under all extensions is only asked of torsion theories; not checked".into());
                Tally::default()
            };
            split.merge(full)
        }
        Suite::NormalExtensionKernel => sweep(&corpus.surjections(), |f| normal_kernel(r, f))?,
        Suite::Orthogonality => {
            let squares = orthogonality_squares(r, corpus, seed)?;
            sweep(&squares, |(e, m, a, b)| orthogonal(r, e, m, a, b))?
        }
        Suite::StableFactorisation => {
            notes.push("only the torsion theory → stable factorisation system direction is checked".into());
            let spans = e_cospans(r, corpus, seed)?;
            sweep(&spans, |(e, g)| stable(r, e, g))?
        }
        Suite::UniqueFactorisation => sweep(&corpus.surjections(), |f| unique_factorisation(r, f))?,
        Suite::NormalComposition => sweep(&corpus.composable_surjections(), |(f, g)| composition(r, f, g))?,
        Suite::DoubleExtensionPushout => {
            let (squares, total) = quotient_squares(corpus, seed)?;
            if squares.len() < total {
                notes.push(format!("{} of {total} squares sampled", squares.len()));
            }
            sweep(&squares, pushout)?
        }
        Suite::HigherNormalKernel => {
            let arrows: Vec<NCube> = corpus.surjections().into_iter().map(NCube::arrow).collect();
            let (squares, total) = quotient_squares(corpus, seed)?;
            if squares.len() < total {
                notes.push(format!("{} of {total} squares sampled", squares.len()));
            }
            sweep(&arrows, |c| higher_normal(r, c))?.merge(sweep(&squares, |c| higher_normal(r, c))?)
        }
        Suite::BirkhoffNormalKernel => sweep(&corpus.surjections(), |f| birkhoff_kernel(r, f))?,
        Suite::BirkhoffCertificate => sweep(&corpus.surjections(), |f| certificate(r, f))?,
        Suite::CompositeNormal => sweep(&corpus.surjections(), |f| composite_normal(r, f))?,
        Suite::CompositeJoin => {
            notes.push("the normal closure in the join is taken in the top vertex".into());
            let mut cubes: Vec<NCube> = corpus.algebras.iter().cloned().map(NCube::object).collect();
            cubes.extend(corpus.surjections().into_iter().map(NCube::arrow));
            let (squares, _) = quotient_squares(corpus, seed)?;
            let mut squares: Vec<NCube> = squares
                .into_iter()
                .filter(|c| tower_peak(c) <= RECURSION_BUDGET && is_nfold_extension(c).unwrap_or(false))
                .collect();
            squares.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            squares.truncate(SAMPLE);
            cubes.extend(squares);
            sweep(&cubes, |c| composite_join(r, c))?
        }
        Suite::IntersectionJoin => {
            let objects = sweep(&corpus.algebras, |a| intersection_object(r, a))?;
            objects.merge(sweep(&corpus.surjections(), |f| intersection_arrow(r, f))?)
        }
        Suite::HopfIndependence => {
            let t = sweep(&corpus.algebras, |a| hopf(r, a, seed))?;
            if t.skipped > 0 {
                notes.push(format!(
                    "degree-3 presentations over {} elements are out of budget",
                    crate::birkhoff::MAX_PRESENTATION_ORDER
                ));
            }
            t
        }
    };
    Ok((tally, notes))
}

fn idempotence(r: &Reflector, a: &Arc<Algebra>) -> Result<Check> {
    Ok(holds_or(r.is_idempotent_at(a)?, || {
        let t = r.radical(a).map(|t| t.len()).unwrap_or(0);
        Witness::new(format!("T(T({0})) ≠ T({0}) (|T({0})| = {t})", a.name()), Instance::object(a))
    }))
}

type Cospan = (Morphism, Morphism);

/// Cospans `A → F(A) ← X` with `X` torsion-free, and with `X` arbitrary but
/// not torsion-free, sampled from the small corpus members.
fn unit_cospans(r: &Reflector, corpus: &Corpus, seed: u64) -> Result<(Vec<Cospan>, Vec<Cospan>)> {
    let small: Vec<&Arc<Algebra>> = corpus.algebras.iter().filter(|a| a.order() <= SMALL).collect();
    let mut free = Vec::new();
    let mut other = Vec::new();
    for a in &corpus.algebras {
        let eta = r.reflect(a)?.unit;
        for x in &small {
            let into_free = r.is_torsion_free(x)?;
            for h in enumerate_homs(x, eta.cod(), HomKind::All)? {
                let target = if into_free { &mut free } else { &mut other };
                target.push((eta.clone(), h));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    free.shuffle(&mut rng);
    other.shuffle(&mut rng);
    free.truncate(SAMPLE);
    other.truncate(SAMPLE);
    Ok((free, other))
}

/// The pullback of `eta` along `x` is inverted by the reflector.
fn unit_pullback(r: &Reflector, eta: &Morphism, x: &Morphism) -> Result<Check> {
    let pb = pullback(eta, x)?;
    let (fp, ..) = r.reflect_morphism(&pb.p2)?;
    Ok(holds_or(fp.is_iso(), || {
        Witness::new(
            format!("F does not invert the pullback of the unit of {} along {}", eta.dom().name(), arrow_name(x)),
            Instance::cospan(eta, x),
        )
    }))
}

fn route_agreement(r: &Reflector, route: Route, s: &SplitSequence) -> Result<Check> {
    let by_def = Route::Definition.check(r, s)?;
    let other = route.check(r, s)?;
    Ok(if by_def != other {
        Check::Violated(Witness::new(format!("{s}: split-sequences says {by_def}, {route} says {other}"), s.instance()))
    } else if !by_def {
        Check::Illustrates(Witness::new(format!("{s} is not preserved, and {route} fails too"), s.instance()))
    } else {
        Check::Holds
    })
}

/// If the middle is torsion, so is the kernel.
fn hereditary_at(r: &Reflector, s: &SplitSequence) -> Result<bool> {
    Ok(!r.is_torsion(s.middle())? || r.is_torsion(s.kernel.dom())?)
}

fn split_closure(r: &Reflector, s: &SplitSequence) -> Result<Check> {
    if !r.is_torsion_free(s.kernel.dom())? || !r.is_torsion_free(s.quotient.cod())? {
        return Ok(Check::Skip);
    }
    Ok(holds_or(r.is_torsion_free(s.middle())?, || {
        Witness::new(format!("{s}: both ends are torsion-free, {} is not", s.middle().name()), s.instance())
    }))
}

fn extension(r: &Reflector, q: &Morphism) -> Result<Check> {
    let k = kernel_object(q)?;
    if !r.is_torsion_free(k.dom())? || !r.is_torsion_free(q.cod())? {
        return Ok(Check::Skip);
    }
    Ok(holds_or(r.is_torsion_free(q.dom())?, || {
        Witness::new(
            format!(
                "{} extends torsion-free {} by torsion-free {} but is not torsion-free",
                q.dom().name(),
                q.cod().name(),
                k.dom().name()
            ),
            Instance::morphism(q),
        )
    }))
}

fn normal_kernel(r: &Reflector, f: &Morphism) -> Result<Check> {
    let direct = is_normal_extension(r, f)?;
    let by_kernel = r.is_torsion_free(kernel_object(f)?.dom())?;
    Ok(holds_or(direct == by_kernel, || {
        Witness::new(
            format!("{}: normal extension {direct}, torsion-free kernel {by_kernel}", arrow_name(f)),
            Instance::morphism(f),
        )
    }))
}

type Square = (Morphism, Morphism, Morphism, Morphism);

/// Commuting squares `b ∘ e = m ∘ a` with `e ∈ Ē` and `m ∈ M̄` quotient maps
/// of small corpus members and `a` any morphism.
fn orthogonality_squares(r: &Reflector, corpus: &Corpus, seed: u64) -> Result<Vec<Square>> {
    let small: Vec<&Arc<Algebra>> = corpus.algebras.iter().filter(|a| a.order() <= SMALL).collect();
    let mut es = Vec::new();
    let mut ms = Vec::new();
    for a in &small {
        let mut e_here = Vec::new();
        let mut m_here = Vec::new();
        for q in crate::corpus::quotients(a) {
            if in_e(r, &q)? {
                e_here.push(q.clone());
            }
            if in_m(r, &q)? {
                m_here.push(q);
            }
        }
        es.push(e_here);
        ms.push(m_here);
    }
    let mut candidates = Vec::new();
    for (i, a) in small.iter().enumerate() {
        for (j, c) in small.iter().enumerate() {
            if es[i].is_empty() || ms[j].is_empty() {
                continue;
            }
            for h in enumerate_homs(a, c, HomKind::All)? {
                for e in &es[i] {
                    for m in &ms[j] {
                        candidates.push((e.clone(), m.clone(), h.clone()));
                    }
                }
            }
        }
    }
    candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut out = Vec::new();
    for (e, m, a) in candidates {
        if out.len() == SAMPLE {
            break;
        }
        // `b` exists exactly when `m ∘ a` kills `K[e]`
        if let Ok(b) = factor_through(&e, &a.then(&m)?) {
            out.push((e, m, a, b));
        }
    }
    Ok(out)
}

fn orthogonal(r: &Reflector, e: &Morphism, m: &Morphism, a: &Morphism, b: &Morphism) -> Result<Check> {
    if !in_e(r, e)? || !in_m(r, m)? {
        return Ok(Check::Skip);
    }
    let d = check_orthogonal(e, m, a, b)?;
    Ok(holds_or(matches!(d, Diagonal::Unique(_)), || {
        Witness::new(
            format!("square {} / {} has {:?} diagonal(s)", arrow_name(e), arrow_name(m), d),
            Instance::square(e, m, a, b),
        )
    }))
}

/// Cospans `A → A/N ← X` with `A → A/N` in Ē, sampled.
fn e_cospans(r: &Reflector, corpus: &Corpus, seed: u64) -> Result<Vec<(Morphism, Morphism)>> {
    let small: Vec<&Arc<Algebra>> = corpus.algebras.iter().filter(|a| a.order() <= SMALL).collect();
    let mut out = Vec::new();
    for a in &corpus.algebras {
        for e in crate::corpus::quotients(a) {
            if !in_e(r, &e)? {
                continue;
            }
            for x in &small {
                for g in enumerate_homs(x, e.cod(), HomKind::All)? {
                    out.push((e.clone(), g));
                }
            }
        }
    }
    out.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    out.truncate(SAMPLE);
    Ok(out)
}

fn stable(r: &Reflector, e: &Morphism, g: &Morphism) -> Result<Check> {
    if !in_e(r, e)? {
        return Ok(Check::Skip);
    }
    let pb = pullback(e, g)?;
    let stays = in_e(r, &pb.p2)?;
    let inverted = r.reflect_morphism(&pb.p2)?.0.is_iso();
    Ok(holds_or(stays && inverted, || {
        Witness::new(
            format!("pullback of {} along {}: in Ē {stays}, inverted {inverted}", arrow_name(e), arrow_name(g)),
            Instance::cospan(e, g),
        )
    }))
}

fn unique_factorisation(r: &Reflector, f: &Morphism) -> Result<Check> {
    if !condition_n(r, f)? {
        return Ok(Check::Skip);
    }
    let fz = em_factorize(r, f)?;
    let bad =
        |why: String| Ok(Check::Violated(Witness::new(format!("{}: {why}", arrow_name(f)), Instance::morphism(f))));
    if fz.e.then(&fz.m)?.map() != f.map() {
        return bad("m ∘ e ≠ f".into());
    }
    if !in_e(r, &fz.e)? || !in_m(r, &fz.m)? {
        return bad("factors are not in Ē and M̄".into());
    }
    let k = kernel(f);
    for n in normal_subobjects(f.dom()).into_iter().filter(|n| n.is_subset_of(&k)) {
        let e2 = quotient(f.dom(), &n)?;
        let m2 = factor_through(&e2, f)?;
        if !in_e(r, &e2)? || !in_m(r, &m2)? {
            continue;
        }
        let same = factor_through(&fz.e, &e2)
            .ok()
            .filter(|i| i.is_iso())
            .map(|i| i.then(&m2).map(|x| x.map() == fz.m.map()))
            .transpose()?
            .unwrap_or(false);
        if !same {
            return bad(format!("a second factorisation through {} is not isomorphic", e2.cod().name()));
        }
    }
    Ok(Check::Holds)
}

fn composition(r: &Reflector, f: &Morphism, g: &Morphism) -> Result<Check> {
    if !is_normal_extension(r, f)? || !is_normal_extension(r, g)? {
        return Ok(Check::Skip);
    }
    let gf = f.then(g)?;
    Ok(holds_or(is_normal_extension(r, &gf)?, || {
        Witness::new(
            format!("{} → {} → {}: both normal, the composite is not", f.dom().name(), f.cod().name(), g.cod().name()),
            Instance::composable(f, g),
        )
    }))
}

/// Squares of quotient maps of corpus members, all of them when there are at
/// most [`SQUARE_LIMIT`], a seeded sample otherwise; with the total count.
fn quotient_squares(corpus: &Corpus, seed: u64) -> Result<(Vec<NCube>, usize)> {
    let subs: Vec<Vec<NormalSubobject>> = corpus.algebras.par_iter().map(|a| normal_subobjects(a)).collect();
    let mut idx = Vec::new();
    for (ai, ns) in subs.iter().enumerate() {
        for i in 0..ns.len() {
            for j in i..ns.len() {
                for (m, nm) in ns.iter().enumerate() {
                    if ns[i].is_subset_of(nm) && ns[j].is_subset_of(nm) {
                        idx.push((ai, i, j, m));
                    }
                }
            }
        }
    }
    let total = idx.len();
    if total > SQUARE_LIMIT {
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        idx.truncate(SQUARE_LIMIT);
        idx.sort_unstable();
    }
    let squares = idx
        .par_iter()
        .map(|&(a, i, j, m)| crate::corpus::quotient_square(&corpus.algebras[a], &subs[a][i], &subs[a][j], &subs[a][m]))
        .collect::<Result<_>>()?;
    Ok((squares, total))
}

/// A square of surjections is a pushout exactly when `K[a0] ∨ K[a1]` is the
/// kernel of the diagonal.
fn is_pushout(c: &NCube) -> Result<bool> {
    let top = c.top();
    let joined = join_normal(top, &kernel(c.edge(3, 0)), &kernel(c.edge(3, 1)));
    Ok(joined == kernel(&c.path(3, 0)))
}

fn pushout(c: &NCube) -> Result<Check> {
    let ext = is_nfold_extension(c)?;
    let po = is_pushout(c)?;
    Ok(holds_or(ext == po, || Witness::new(format!("{c}: double extension {ext}, pushout {po}"), Instance::cube(c))))
}

fn higher_normal(r: &Reflector, c: &NCube) -> Result<Check> {
    if !is_nfold_extension(c)? {
        return Ok(Check::Skip);
    }
    let by_kernel = is_nfold_normal(r, c)?;
    let by_galois = is_normal_by_galois(r, c)?;
    let bad = |why: String| Ok(Check::Violated(Witness::new(format!("{c}: {why}"), Instance::cube(c))));
    if by_kernel != by_galois {
        return bad(format!("kernel criterion {by_kernel}, Galois structure {by_galois}"));
    }
    let (_, m) = nfold_factorize(r, c)?;
    if !is_nfold_extension(&m)? || !is_nfold_normal(r, &m)? {
        return bad("the normal part of its factorisation is not a normal extension".into());
    }
    Ok(Check::Holds)
}

/// An independent description of `[f]_{1,B}` where one is known.
fn birkhoff_oracle(r: &Reflector, f: &Morphism) -> Result<Option<Subobject>> {
    let a = f.dom();
    let k = kernel(f);
    let inc = subalgebra(a, &k)?;
    Ok(match (r, a.variety()) {
        (Reflector::Abelianisation, Variety::Group) => Some(huq_commutator(a, &k, &a.whole())?.into_subobject()),
        (Reflector::Burnside(n), Variety::Group) => {
            let powers = push(&inc, &power_subobject(inc.dom(), *n));
            Some(join_normal(a, &*huq_commutator(a, &k, &a.whole())?, &powers).into_subobject())
        }
        (Reflector::Burnside(n) | Reflector::Exponent(n), Variety::ZmodModule(_)) => {
            Some(push(&inc, &power_subobject(inc.dom(), *n)))
        }
        (Reflector::Reduced | Reflector::Pi0 | Reflector::Identity, _) | (Reflector::ZeroRing, Variety::RngStar) => {
            Some(meet_radical(r, &NCube::arrow(f.clone()))?)
        }
        _ => None,
    })
}

fn birkhoff_kernel(r: &Reflector, f: &Morphism) -> Result<Check> {
    let t = birkhoff_radical(r, f)?;
    let normal = is_normal_extension(r, f)?;
    let bad =
        |why: String| Ok(Check::Violated(Witness::new(format!("{}: {why}", arrow_name(f)), Instance::morphism(f))));
    if t.is_zero() != normal {
        return bad(format!("[f] = 0 is {} but normal extension is {normal}", t.is_zero()));
    }
    if let Some(o) = birkhoff_oracle(r, f)? {
        if *t.as_subobject() != o {
            return bad(format!("kernel-pair construction has order {}, the oracle {}", t.len(), o.len()));
        }
    }
    Ok(Check::Holds)
}

fn certificate(r: &Reflector, f: &Morphism) -> Result<Check> {
    let sq = unit_square(r, f)?;
    Ok(holds_or(is_nfold_extension(&sq)?, || {
        Witness::new(format!("unit square of {} is not a double extension", arrow_name(f)), Instance::morphism(f))
    }))
}

fn composite_normal(r: &Reflector, f: &Morphism) -> Result<Check> {
    let b = composite_parts(r)?;
    let direct = is_normal_extension(r, f)?;
    let by_parts = is_birkhoff_normal(b, &NCube::arrow(f.clone()))? && r.is_torsion_free(kernel_object(f)?.dom())?;
    let via_join = match composite_radical(b, r, &NCube::arrow(f.clone()), Mode::Join) {
        Ok(t) => Some(t.is_zero()),
        Err(Error::Precondition(_)) => None,
        Err(e) => return Err(e),
    };
    let ok = direct == by_parts && via_join.is_none_or(|v| v == direct);
    Ok(holds_or(ok, || {
        Witness::new(
            format!(
                "{}: C-normal {direct}, B-normal with kernel in C {by_parts}, join formula {via_join:?}",
                arrow_name(f)
            ),
            Instance::morphism(f),
        )
    }))
}

fn composite_join(r: &Reflector, c: &NCube) -> Result<Check> {
    let b = composite_parts(r)?;
    if c.dim() > 0 && !is_nfold_extension(c)? {
        return Ok(Check::Skip);
    }
    if !comparison_is_protoadditive(b, r, c)? {
        return Ok(Check::Skip);
    }
    let joined = composite_radical(b, r, c, Mode::Join)?;
    let direct = relative_commutator(r, c)?;
    Ok(holds_or(joined == direct, || {
        Witness::new(
            format!("{c}: join formula gives order {}, kernel-pair construction {}", joined.len(), direct.len()),
            Instance::cube(c),
        )
    }))
}

fn intersection_object(r: &Reflector, a: &Arc<Algebra>) -> Result<Check> {
    let k = match r {
        Reflector::Burnside(k) => *k,
        _ => return Err(Error::Precondition("the intersection formula is checked for burnside:k".into())),
    };
    let joined = composite_radical(
        &Reflector::Abelianisation,
        &Reflector::Exponent(k),
        &NCube::object(a.clone()),
        Mode::Intersection,
    )?;
    let oracle = radical_by_quotients(a, |q| q.is_commutative_base() && (k as usize).is_multiple_of(q.exponent()))?;
    let direct = r.radical(a)?;
    Ok(holds_or(*joined.as_subobject() == oracle && joined == direct, || {
        Witness::new(
            format!("{}: join {}, quotient oracle {}, radical {}", a.name(), joined.len(), oracle.len(), direct.len()),
            Instance::object(a),
        )
    }))
}

fn intersection_arrow(r: &Reflector, f: &Morphism) -> Result<Check> {
    let k = match r {
        Reflector::Burnside(k) => *k,
        _ => return Err(Error::Precondition("the intersection formula is checked for burnside:k".into())),
    };
    let both = birkhoff_radical(&Reflector::Abelianisation, f)?.is_zero()
        && birkhoff_radical(&Reflector::Exponent(k), f)?.is_zero();
    let meet = birkhoff_radical(r, f)?.is_zero();
    Ok(holds_or(both == meet, || {
        Witness::new(
            format!("{}: {r}-normal {meet}, ab- and exponent:{k}-normal {both}", arrow_name(f)),
            Instance::morphism(f),
        )
    }))
}

fn hopf(r: &Reflector, a: &Arc<Algebra>, seed: u64) -> Result<Check> {
    let mut skipped = false;
    for degree in [2, 3] {
        match hopf_homology(r, a, degree, seed) {
            Ok(_) => {}
            Err(Error::Budget(_)) => skipped = true,
            Err(Error::Precondition(why)) => {
                return Ok(Check::Violated(Witness::new(
                    format!("H{degree}({}): {why}", a.name()),
                    Instance::object(a),
                )))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(if skipped { Check::Skip } else { Check::Holds })
}

fn morphism(j: &MorphismJson) -> Result<Morphism> {
    morphism_from_json(j)
}

/// Same codomain object for both legs, so that pullbacks can be formed.
fn cospan(left: &MorphismJson, right: &MorphismJson) -> Result<(Morphism, Morphism)> {
    let l = morphism(left)?;
    let r = morphism(right)?.with_cod(l.cod().clone())?;
    Ok((l, r))
}

fn wrong_kind(suite: Suite, instance: &Instance) -> Error {
    let kind = serde_json::to_value(instance)
        .ok()
        .and_then(|v| v.get("kind").and_then(|k| k.as_str().map(String::from)))
        .unwrap_or_default();
    Error::Format(format!("suite {suite} has no witnesses of kind `{kind}`"))
}

pub(super) fn recheck(suite: Suite, r: &Reflector, seed: u64, instance: &Instance) -> Result<Check> {
    use Instance as I;
    let seq = |kernel: &MorphismJson, quotient: &MorphismJson, section: &MorphismJson| -> Result<SplitSequence> {
        let q = morphism(quotient)?;
        let k = morphism(kernel)?.with_cod(q.dom().clone())?;
        let s = morphism(section)?.with_dom(q.cod().clone())?.with_cod(q.dom().clone())?;
        SplitSequence::new(k, q, s)
    };
    match (suite, instance) {
        (Suite::IdempotentRadical, I::Object { object }) => idempotence(r, &Arc::new(resolve(object)?)),
        (Suite::IdempotentRadical, I::Cospan { left, right }) => {
            let (eta, x) = cospan(left, right)?;
            unit_pullback(r, &eta, &x)
        }
        (Suite::SplitPullbacks, I::SplitSequence { kernel, quotient, section }) => {
            route_agreement(r, Route::SplitPullbacks, &seq(kernel, quotient, section)?)
        }
        (Suite::ProtosplitMonos, I::SplitSequence { kernel, quotient, section }) => {
            route_agreement(r, Route::ProtosplitMonos, &seq(kernel, quotient, section)?)
        }
        (Suite::ProtosplitHereditary, I::SplitSequence { kernel, quotient, section }) => {
            let s = seq(kernel, quotient, section)?;
            let ok = Route::Definition.check(r, &s)? && hereditary_at(r, &s)?;
            Ok(holds_or(ok, || Witness::new(format!("{s} fails one side"), s.instance())))
        }
        (Suite::ExtensionClosure, I::SplitSequence { kernel, quotient, section }) => {
            split_closure(r, &seq(kernel, quotient, section)?)
        }
        (Suite::ExtensionClosure, I::Morphism { morphism: m }) => extension(r, &morphism(m)?),
        (Suite::NormalExtensionKernel, I::Morphism { morphism: m }) => normal_kernel(r, &morphism(m)?),
        (Suite::Orthogonality, I::Square { e, m, a, b }) => {
            let e = morphism(e)?;
            let m = morphism(m)?;
            let a = morphism(a)?.with_dom(e.dom().clone())?.with_cod(m.dom().clone())?;
            let b = morphism(b)?.with_dom(e.cod().clone())?.with_cod(m.cod().clone())?;
            orthogonal(r, &e, &m, &a, &b)
        }
        (Suite::StableFactorisation, I::Cospan { left, right }) => {
            let (e, g) = cospan(left, right)?;
            stable(r, &e, &g)
        }
        (Suite::UniqueFactorisation, I::Morphism { morphism: m }) => unique_factorisation(r, &morphism(m)?),
        (Suite::NormalComposition, I::Composable { first, second }) => {
            let f = morphism(first)?;
            let g = morphism(second)?.with_dom(f.cod().clone())?;
            composition(r, &f, &g)
        }
        (Suite::DoubleExtensionPushout, I::Cube { cube }) => pushout(&cube_from_json(cube)?),
        (Suite::HigherNormalKernel, I::Cube { cube }) => higher_normal(r, &cube_from_json(cube)?),
        (Suite::BirkhoffNormalKernel, I::Morphism { morphism: m }) => birkhoff_kernel(r, &morphism(m)?),
        (Suite::BirkhoffCertificate, I::Morphism { morphism: m }) => certificate(r, &morphism(m)?),
        (Suite::CompositeNormal, I::Morphism { morphism: m }) => composite_normal(r, &morphism(m)?),
        (Suite::CompositeJoin, I::Cube { cube }) => composite_join(r, &cube_from_json(cube)?),
        (Suite::IntersectionJoin, I::Object { object }) => intersection_object(r, &Arc::new(resolve(object)?)),
        (Suite::IntersectionJoin, I::Morphism { morphism: m }) => intersection_arrow(r, &morphism(m)?),
        (Suite::HopfIndependence, I::Object { object }) => hopf(r, &Arc::new(resolve(object)?), seed),
        _ => Err(wrong_kind(suite, instance)),
    }
}
