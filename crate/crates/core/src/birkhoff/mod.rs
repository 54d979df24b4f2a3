//! Relative commutators `[A]_{n,B}` of extension cubes for a Birkhoff
//! reflector `B`, computed by the kernel-pair recursion, and the join
//! formulas for composite and intersected subvarieties.

mod homology;

use std::sync::Arc;

use crate::algebra::{join_normal, quotient, subalgebra, Algebra, Morphism, NormalSubobject, Subobject};
use crate::error::{Error, Result};
use crate::factorisation::{is_nfold_extension, pullback_cubes, rib_kernel_meet, NCube};
use crate::reflectors::{split_sequences, Reflector, Route};
use crate::report::{Instance, Report, Witness};

pub use homology::{
    build_presentation, hopf_homology, tower_peak, Homology, Presentation, MAX_PRESENTATION_ORDER, RECURSION_BUDGET,
};

/// `[c]_{n,B}` inside the top vertex. For an object it is the radical; for an
/// n-cube, read as a morphism `X → Y` along its last direction, it is the
/// image under the second projection of those elements of `[R]_{n−1,B}`
/// whose first projection vanishes, where `R` is the pointwise kernel pair.
pub fn relative_commutator(b: &Reflector, c: &NCube) -> Result<NormalSubobject> {
    if c.dim() == 0 {
        return b.radical(c.top());
    }
    let (r, p1, p2) = pullback_cubes(c, c)?;
    let inner = relative_commutator(b, &r)?;
    let k = r.dim();
    let top = (1usize << k) - 1;
    let pi1 = p1.edge(top | 1 << k, k);
    let pi2 = p2.edge(top | 1 << k, k);
    let members = inner.members().iter().filter(|&&x| pi1.apply(x) == 0).map(|&x| pi2.apply(x));
    let s = Subobject::from_members(c.top().order(), members);
    c.top().certify_normal(s)
}

/// `[f]_{1,B}` for a surjection `f`.
pub fn birkhoff_radical(b: &Reflector, f: &Morphism) -> Result<NormalSubobject> {
    if !f.is_surjective() {
        return Err(Error::Precondition("the Birkhoff radical needs a surjection".into()));
    }
    relative_commutator(b, &NCube::arrow(f.clone()))
}

/// Quotient of the top vertex by `[c]_{n,B}`, with the other vertices kept.
pub fn centralize(b: &Reflector, c: &NCube) -> Result<NCube> {
    let t = relative_commutator(b, c)?;
    c.with_top_quotient(&quotient(c.top(), &t)?)
}

pub fn is_birkhoff_normal(b: &Reflector, c: &NCube) -> Result<bool> {
    if !is_nfold_extension(c)? {
        return Err(Error::Precondition(format!("{c} is not an extension of its dimension")));
    }
    Ok(relative_commutator(b, c)?.is_zero())
}

/// `B(⋂ K[a_i])` pushed into the top vertex.
pub fn meet_radical(b: &Reflector, c: &NCube) -> Result<Subobject> {
    let inc = subalgebra(c.top(), &rib_kernel_meet(c))?;
    let t = b.radical(inc.dom())?;
    Ok(Subobject::from_members(c.top().order(), t.members().iter().map(|&x| inc.apply(x))))
}

/// The unit square `A → F(A)`, `A → B` over `F(B)` of a surjection.
pub fn unit_square(b: &Reflector, f: &Morphism) -> Result<NCube> {
    let (ff, da, db) = b.reflect_morphism(f)?;
    NCube::square(da.unit, f.clone(), ff, db.unit)
}

/// Birkhoff certificate: every unit square of a corpus surjection is a
/// double extension.
pub fn birkhoff_certificate(b: &Reflector, surjections: &[Morphism], corpus: &str) -> Result<Report> {
    let mut witnesses = Vec::new();
    for f in surjections {
        if !is_nfold_extension(&unit_square(b, f)?)? {
            witnesses.push(Witness::new(
                format!("unit square of {} → {} is not a double extension", f.dom().name(), f.cod().name()),
                Instance::morphism(f),
            ));
        }
    }
    Ok(Report::new("birkhoff-certificate", b, corpus, 0).finish(surjections.len(), witnesses))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// `[A]_{n,C} = [A]_{n,B} ∨ C(⋂ K[a_i])` for `C ⊆ B`.
    Join,
    /// `[A]_{n,B∩B′} = [A]_{n,B} ∨ B′(⋂ K[a_i])`.
    Intersection,
}

/// Whether `other` preserves split sequences between `B`-reflections of the
/// cube's vertices, the hypothesis of both join formulas.
pub fn comparison_is_protoadditive(b: &Reflector, other: &Reflector, c: &NCube) -> Result<bool> {
    for v in 0..=c.top_index() {
        let fb = b.reflect(c.vertex(v))?;
        for s in split_sequences(fb.reflection())? {
            if !Route::Definition.check(other, &s)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The radical for a composite (`Join`, `other = C ⊆ B`) or intersected
/// (`Intersection`, `other = B′`) subvariety by the join formula. The normal
/// closure is taken in the top vertex.
pub fn composite_radical(b: &Reflector, other: &Reflector, c: &NCube, mode: Mode) -> Result<NormalSubobject> {
    if mode == Mode::Join && !comparison_is_protoadditive(b, other, c)? {
        return Err(Error::Precondition(format!("{other} is not protoadditive on the {b}-reflections")));
    }
    let base = relative_commutator(b, c)?;
    let extra = meet_radical(other, c)?;
    Ok(join_normal(c.top(), &base, &extra))
}

/// Every normal subobject `N` of `a` with `a/N` in the subvariety cut out by
/// `accept`, intersected: the radical computed from its definition.
pub fn radical_by_quotients(a: &Arc<Algebra>, accept: impl Fn(&Algebra) -> bool) -> Result<Subobject> {
    let mut acc = a.whole().into_subobject();
    for n in crate::algebra::normal_subobjects(a) {
        let q = quotient(a, &n)?;
        if accept(q.cod()) {
            acc = crate::algebra::meet(&acc, &n);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::*;
    use crate::algebra::{enumerate_homs, huq_commutator, kernel, HomKind};

    fn arc(a: Algebra) -> Arc<Algebra> {
        Arc::new(a)
    }

    fn onto(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Morphism {
        enumerate_homs(a, b, HomKind::All).unwrap().into_iter().find(|f| f.is_surjective()).unwrap()
    }

    #[test]
    fn abelianisation_radical_of_sign() {
        let s3 = arc(symmetric(3));
        let sign = onto(&s3, &arc(cyclic(2)));
        let t = birkhoff_radical(&Reflector::Abelianisation, &sign).unwrap();
        assert_eq!(t.len(), 3);
        assert!(!is_birkhoff_normal(&Reflector::Abelianisation, &NCube::arrow(sign.clone())).unwrap());
        let c = centralize(&Reflector::Abelianisation, &NCube::arrow(sign)).unwrap();
        assert!(c.edge(1, 0).is_iso());
    }

    #[test]
    fn quaternion_quotient_is_central() {
        let q8 = arc(quaternion8());
        let z = q8.normal_closure(&[q8.elements().find(|&x| q8.element_order(x) == 2).unwrap()]);
        let f = quotient(&q8, &z).unwrap();
        assert!(birkhoff_radical(&Reflector::Abelianisation, &f).unwrap().is_zero());
    }

    #[test]
    fn isomorphisms_have_zero_radical() {
        for a in [arc(symmetric(3)), arc(dihedral(4))] {
            let id = Morphism::identity(&a);
            for b in [Reflector::Abelianisation, Reflector::Burnside(2)] {
                assert!(birkhoff_radical(&b, &id).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn kernel_pair_radical_matches_commutator_on_d4() {
        let d4 = arc(dihedral(4));
        for n in crate::algebra::normal_subobjects(&d4) {
            let f = quotient(&d4, &n).unwrap();
            let t = birkhoff_radical(&Reflector::Abelianisation, &f).unwrap();
            let oracle = huq_commutator(&d4, &kernel(&f), &d4.whole()).unwrap();
            assert_eq!(t, oracle);
        }
    }

    #[test]
    fn join_formula_on_d4() {
        let d4 = arc(dihedral(4));
        // kernel ⟨r⟩: the rotations are 0..4
        let rot = Subobject::from_members(8, 0..4);
        let f = quotient(&d4, &rot).unwrap();
        let cube = NCube::arrow(f.clone());
        let c: Reflector = "burnside:2∘ab".parse().unwrap();
        let joined = composite_radical(&Reflector::Abelianisation, &c, &cube, Mode::Join).unwrap();
        assert_eq!(joined.members(), &[0, 2]);
        assert_eq!(birkhoff_radical(&c, &f).unwrap(), joined);
    }

    #[test]
    fn object_level_intersection_formula() {
        let d4 = arc(dihedral(4));
        let cube = NCube::object(d4.clone());
        let t =
            composite_radical(&Reflector::Abelianisation, &Reflector::Exponent(2), &cube, Mode::Intersection).unwrap();
        assert_eq!(t.members(), &[0, 2]);
        let oracle = radical_by_quotients(&d4, |q| q.is_commutative_base() && q.exponent() <= 2).unwrap();
        assert_eq!(*t.as_subobject(), oracle);
    }

    #[test]
    fn burnside_normality_does_not_compose() {
        let b = Reflector::Burnside(2);
        let (c4, c2) = (arc(cyclic(4)), arc(cyclic(2)));
        let z = crate::algebra::zero_algebra(crate::algebra::Variety::Group);
        let f = onto(&c4, &c2);
        let g = Morphism::zero(&c2, &z);
        assert!(is_birkhoff_normal(&b, &NCube::arrow(f.clone())).unwrap());
        assert!(is_birkhoff_normal(&b, &NCube::arrow(g.clone())).unwrap());
        assert!(!is_birkhoff_normal(&b, &NCube::arrow(f.then(&g).unwrap())).unwrap());
    }

    #[test]
    fn unit_squares_are_double_extensions() {
        let s3 = arc(symmetric(3));
        let f = onto(&s3, &arc(cyclic(2)));
        let rep = birkhoff_certificate(&Reflector::Abelianisation, &[f], "tiny").unwrap();
        assert!(rep.passed());
    }
}
