//! Factorisations induced by a torsion theory, trivial and normal
//! extensions, and their higher-dimensional versions on cubes.

mod cube;

use std::fmt;
use std::sync::Arc;

use crate::algebra::{
    enumerate_homs, factor_through, kernel, kernel_pair, meet, pullback, quotient, subalgebra, Algebra, HomKind,
    Morphism, NormalSubobject, Subobject,
};
use crate::error::{Error, Result};
use crate::reflectors::Reflector;

pub use cube::{is_nfold_extension, pullback_cubes, NCube};

/// `T(K[f])` as a subset of `dom f`.
pub fn kernel_radical(r: &Reflector, f: &Morphism) -> Result<Subobject> {
    let k = subalgebra(f.dom(), &kernel(f))?;
    let t = r.radical(k.dom())?;
    Ok(Subobject::from_members(f.dom().order(), t.members().iter().map(|&x| k.apply(x))))
}

/// Whether `T(K[f])` is normal in the domain of `f`.
pub fn condition_n(r: &Reflector, f: &Morphism) -> Result<bool> {
    let t = kernel_radical(r, f)?;
    Ok(f.dom().is_normal(&t))
}

#[derive(Clone, Debug)]
pub struct EmFactorisation {
    pub input: Morphism,
    /// Quotient by `T(K[f])`.
    pub e: Morphism,
    pub m: Morphism,
}

impl EmFactorisation {
    pub fn middle(&self) -> &Arc<Algebra> {
        self.e.cod()
    }
}

/// `f = m ∘ e` with `K[e]` torsion and `K[m]` torsion-free.
pub fn em_factorize(r: &Reflector, f: &Morphism) -> Result<EmFactorisation> {
    let t = kernel_radical(r, f)?;
    if !f.dom().is_normal(&t) {
        return Err(Error::Precondition(format!(
            "the radical of the kernel of {} → {} is not normal in the domain",
            f.dom().name(),
            f.cod().name()
        )));
    }
    let e = quotient(f.dom(), &t)?;
    let m = factor_through(&e, f)?;
    Ok(EmFactorisation { input: f.clone(), e, m })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmClass {
    /// Surjective with torsion kernel.
    E,
    /// Torsion-free kernel.
    M,
    Both,
    Neither,
}

impl fmt::Display for EmClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmClass::E => "Ē",
            EmClass::M => "M̄",
            EmClass::Both => "Ē and M̄",
            EmClass::Neither => "neither",
        })
    }
}

pub fn classify_em(r: &Reflector, f: &Morphism) -> Result<EmClass> {
    let k = subalgebra(f.dom(), &kernel(f))?;
    let t = r.radical(k.dom())?;
    let in_e = f.is_surjective() && t.is_whole();
    let in_m = t.is_zero();
    Ok(match (in_e, in_m) {
        (true, true) => EmClass::Both,
        (true, false) => EmClass::E,
        (false, true) => EmClass::M,
        (false, false) => EmClass::Neither,
    })
}

pub fn in_e(r: &Reflector, f: &Morphism) -> Result<bool> {
    Ok(matches!(classify_em(r, f)?, EmClass::E | EmClass::Both))
}

pub fn in_m(r: &Reflector, f: &Morphism) -> Result<bool> {
    Ok(matches!(classify_em(r, f)?, EmClass::M | EmClass::Both))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagonal {
    Unique(Morphism),
    None,
    Multiple(usize),
}

/// Diagonal fillers `d` with `d ∘ e = a` and `m ∘ d = b` for the square
/// `b ∘ e = m ∘ a`.
pub fn check_orthogonal(e: &Morphism, m: &Morphism, a: &Morphism, b: &Morphism) -> Result<Diagonal> {
    if e.then(b)?.map() != a.then(m)?.map() {
        return Err(Error::Precondition("square does not commute".into()));
    }
    let mut found: Vec<Morphism> = enumerate_homs(e.cod(), m.dom(), HomKind::All)?
        .into_iter()
        .filter(|d| {
            e.then(d).map(|x| x.map() == a.map()).unwrap_or(false)
                && d.then(m).map(|x| x.map() == b.map()).unwrap_or(false)
        })
        .collect();
    Ok(match found.len() {
        0 => Diagonal::None,
        1 => Diagonal::Unique(found.pop().unwrap()),
        n => Diagonal::Multiple(n),
    })
}

fn require_surjective(f: &Morphism) -> Result<()> {
    if f.is_surjective() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{} → {} is not surjective", f.dom().name(), f.cod().name())))
    }
}

/// The unit square of `f` is a pullback: `a ↦ (η(a), f(a))` is bijective
/// onto `F(A) ×_{F(B)} B`.
pub fn is_trivial_extension(r: &Reflector, f: &Morphism) -> Result<bool> {
    require_surjective(f)?;
    let (ff, da, db) = r.reflect_morphism(f)?;
    let pb = pullback(&ff, &db.unit)?;
    let cmp = pb.mediate(&da.unit, f)?;
    Ok(cmp.is_iso())
}

/// Pulling `f` back along itself gives a trivial extension.
pub fn is_normal_extension(r: &Reflector, f: &Morphism) -> Result<bool> {
    require_surjective(f)?;
    let kp = kernel_pair(f);
    is_trivial_extension(r, &kp.p1)
}

/// The reflection of `f` into extensions with torsion-free kernel.
pub fn derived_reflect(r: &Reflector, f: &Morphism) -> Result<Morphism> {
    require_surjective(f)?;
    Ok(em_factorize(r, f)?.m)
}

/// `⋂ K[a_i]` over the initial ribs, inside the top vertex.
pub fn rib_kernel_meet(c: &NCube) -> NormalSubobject {
    let top = c.top();
    let mut acc = top.whole().into_subobject();
    for rib in c.ribs() {
        acc = meet(&acc, &kernel(&rib));
    }
    top.certify_normal(acc).expect("intersection of kernels is normal")
}

fn require_extension(c: &NCube) -> Result<()> {
    if is_nfold_extension(c)? {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{c} is not an extension of its dimension")))
    }
}

/// Normality through the kernel criterion: `T(⋂ K[a_i]) = 0`.
pub fn is_nfold_normal(r: &Reflector, c: &NCube) -> Result<bool> {
    require_extension(c)?;
    let k = subalgebra(c.top(), &rib_kernel_meet(c))?;
    r.is_torsion_free(k.dom())
}

/// Normality through the Galois structure of the derived reflection, for
/// arrows and squares. A square is read as a morphism of extensions from
/// `a: A → A′` (direction 0) to `b: B → B′`, with `f: A → B` along direction
/// 1; it is normal when the first projection of its kernel pair is a trivial
/// extension for the derived reflection. Since that reflection leaves the
/// codomain level alone, only the domain-level square can fail to be a
/// pullback.
pub fn is_normal_by_galois(r: &Reflector, c: &NCube) -> Result<bool> {
    require_extension(c)?;
    match c.dim() {
        1 => is_normal_extension(r, c.edge(1, 0)),
        2 => {
            let a = c.edge(3, 0);
            let f = c.edge(3, 1);
            let kp = kernel_pair(f);
            // a × a restricted to R[f], landing in R[f′] ⊆ A′ × A′
            let rel = &kp.object;
            let ka = kernel(a);
            let k_rel = Subobject::from_members(
                rel.order(),
                rel.elements().filter(|&i| {
                    let (x, y) = kp.pair(i);
                    ka.contains(x) && ka.contains(y)
                }),
            );
            let k_rel_inc = subalgebra(rel, &k_rel)?;
            let t_rel = r.radical(k_rel_inc.dom())?;
            let t_rel = Subobject::from_members(rel.order(), t_rel.members().iter().map(|&x| k_rel_inc.apply(x)));
            let unit_rel = quotient(rel, &t_rel)?;
            let t_a = kernel_radical(r, a)?;
            let unit_a = quotient(c.top(), &t_a)?;
            let f1_pi1 = factor_through(&unit_rel, &kp.p1.then(&unit_a)?)?;
            let pb = pullback(&f1_pi1, &unit_a)?;
            Ok(pb.mediate(&unit_rel, &kp.p1)?.is_iso())
        }
        n => Err(Error::Precondition(format!("Galois normality is only computed up to squares, got dimension {n}"))),
    }
}

/// Splits an extension cube as `m ∘ e` where `e` quotients the top by
/// `T(⋂ K[a_i])` and `m` is the resulting normal extension.
pub fn nfold_factorize(r: &Reflector, c: &NCube) -> Result<(NCube, NCube)> {
    require_extension(c)?;
    let meet = subalgebra(c.top(), &rib_kernel_meet(c))?;
    let t = r.radical(meet.dom())?;
    let t = Subobject::from_members(c.top().order(), t.members().iter().map(|&x| meet.apply(x)));
    let q = quotient(c.top(), &t)?;
    let m = c.with_top_quotient(&q)?;
    let e = c.top_map(&m, &q)?;
    Ok((e, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::*;
    use crate::algebra::{is_isomorphic, zero_algebra, Variety};

    fn arc(a: Algebra) -> Arc<Algebra> {
        Arc::new(a)
    }

    fn mod_map(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Morphism {
        Morphism::new(a.clone(), b.clone(), a.elements().map(|x| x % b.order()).collect()).unwrap()
    }

    fn zmap(n: usize, m: usize) -> Morphism {
        mod_map(&arc(zring(n)), &arc(zring(m)))
    }

    #[test]
    fn condition_n_examples() {
        assert!(condition_n(&Reflector::Reduced, &zmap(12, 2)).unwrap());
        assert!(condition_n(&Reflector::Reduced, &zmap(5, 5)).unwrap());
        let s4 = arc(symmetric(4));
        let c2 = arc(cyclic(2));
        for f in enumerate_homs(&s4, &c2, HomKind::All).unwrap() {
            assert!(condition_n(&Reflector::Abelianisation, &f).unwrap());
        }
    }

    #[test]
    fn factorisations_through_the_nilradical() {
        let fz = em_factorize(&Reflector::Reduced, &zmap(12, 2)).unwrap();
        assert_eq!(fz.middle().order(), 6);
        assert_eq!(kernel(&fz.m).len(), 3);
        assert!(in_m(&Reflector::Reduced, &fz.m).unwrap());
        assert!(in_e(&Reflector::Reduced, &fz.e).unwrap());
        assert_eq!(fz.e.then(&fz.m).unwrap(), zmap(12, 2));

        let f8 = em_factorize(&Reflector::Reduced, &zmap(8, 2)).unwrap();
        assert_eq!(f8.middle().order(), 2);
        assert!(f8.m.is_iso());

        let free = zmap(6, 2);
        let ff = em_factorize(&Reflector::Reduced, &free).unwrap();
        assert!(ff.e.is_iso());
        assert_eq!(ff.m.map(), free.map());
    }

    #[test]
    fn em_classes() {
        let r = Reflector::Reduced;
        assert_eq!(classify_em(&r, &zmap(4, 2)).unwrap(), EmClass::E);
        assert_eq!(classify_em(&r, &Morphism::identity(&arc(zring(4)))).unwrap(), EmClass::Both);
        let z8 = arc(zring(8));
        let to_zero = Morphism::zero(&z8, &zero_algebra(Variety::CommRing));
        assert_eq!(classify_em(&r, &to_zero).unwrap(), EmClass::Neither);
    }

    #[test]
    fn orthogonality_examples() {
        let e = zmap(4, 2);
        let m = zmap(4, 2);
        let id4 = Morphism::identity(e.dom());
        let id2 = Morphism::identity(e.cod());
        assert_eq!(check_orthogonal(&e, &m, &id4, &id2).unwrap(), Diagonal::None);
        let idm = Morphism::identity(m.dom());
        let d = check_orthogonal(&idm, &m, &id4, &m).unwrap();
        assert_eq!(d, Diagonal::Unique(id4.clone()));
        assert!(check_orthogonal(&e, &m, &Morphism::zero(e.dom(), m.dom()), &id2).is_err());
    }

    #[test]
    fn trivial_and_normal_extensions() {
        let r = Reflector::Reduced;
        assert!(is_trivial_extension(&r, &zmap(6, 2)).unwrap());
        assert!(!is_trivial_extension(&r, &zmap(4, 2)).unwrap());
        assert!(is_normal_extension(&r, &zmap(6, 2)).unwrap());
        assert!(!is_normal_extension(&r, &zmap(4, 2)).unwrap());
        let iso = Morphism::identity(&arc(zring(9)));
        assert!(is_trivial_extension(&r, &iso).unwrap());
        assert!(is_normal_extension(&r, &iso).unwrap());
        assert!(is_trivial_extension(&r, &Morphism::zero(&arc(zring(2)), &arc(zring(2)))).is_err());
    }

    #[test]
    fn derived_reflection_examples() {
        let m = derived_reflect(&Reflector::Reduced, &zmap(8, 4)).unwrap();
        assert_eq!(m.dom().order(), 4);
        assert!(m.is_iso());
        let g = arc(gpd_indiscrete(&symmetric(3)).unwrap());
        let z = zero_algebra(Variety::GpdInGroup);
        let m = derived_reflect(&Reflector::Pi0, &Morphism::zero(&g, &z)).unwrap();
        assert!(m.dom().is_trivial());
    }

    #[test]
    fn higher_normality_on_squares() {
        let r = Reflector::Reduced;
        let (z12, z6, z4, z2) = (arc(zring(12)), arc(zring(6)), arc(zring(4)), arc(zring(2)));
        let crt = NCube::square(mod_map(&z12, &z6), mod_map(&z12, &z4), mod_map(&z6, &z2), mod_map(&z4, &z2)).unwrap();
        assert!(rib_kernel_meet(&crt).is_zero());
        assert!(is_nfold_normal(&r, &crt).unwrap());
        assert!(is_normal_by_galois(&r, &crt).unwrap());

        let z8 = arc(zring(8));
        let q = mod_map(&z8, &z4);
        let id = Morphism::identity(&z4);
        let diag = NCube::square(q.clone(), q, id.clone(), id).unwrap();
        assert!(is_nfold_extension(&diag).unwrap());
        assert_eq!(rib_kernel_meet(&diag).members(), &[0, 4]);
        assert!(!is_nfold_normal(&r, &diag).unwrap());
        assert!(!is_normal_by_galois(&r, &diag).unwrap());

        let (e, m) = nfold_factorize(&r, &diag).unwrap();
        assert_eq!(m.top().order(), 4);
        assert!(is_nfold_extension(&m).unwrap());
        assert!(is_nfold_normal(&r, &m).unwrap());
        assert_eq!(e.dim(), 3);
    }

    #[test]
    fn one_dimensional_factorisation_matches_em() {
        let f = zmap(8, 2);
        let (_, m) = nfold_factorize(&Reflector::Reduced, &NCube::arrow(f.clone())).unwrap();
        let em = em_factorize(&Reflector::Reduced, &f).unwrap();
        assert!(is_isomorphic(m.top(), em.middle()));
        assert_eq!(m.edge(1, 0).map(), em.m.map());
    }
}
