//! Named reflections onto subvarieties (or torsion-free parts), each given by
//! its radical: the kernel of the unit.

mod protoadditive;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::algebra::{
    factor_through, huq_commutator, join_normal, power_subobject, quotient, subalgebra, Algebra, Morphism,
    NormalSubobject, Subobject, Variety,
};
use crate::error::{unsupported, Error, Result};

pub use protoadditive::{
    extension_closure, is_protoadditive, preserves_sequence, preserves_split_pullbacks, protosplit_hereditary,
    protosplit_image_is_normal_mono, split_extension_closure, split_sequences, torsion_theory_report, Route,
    SplitSequence,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Reflector {
    /// `A/[A,A]` on groups.
    Abelianisation,
    /// Abelian groups of exponent dividing `k`; `kA` on modules.
    Burnside(u64),
    /// Groups of exponent dividing `k`: the radical is generated by `k`-th powers.
    Exponent(u64),
    /// Commutative rings modulo their nilradical.
    Reduced,
    /// Zero rings: the radical is spanned by products.
    ZeroRing,
    /// Boolean rings: the radical is the ideal generated by `x² − x`.
    Boolean,
    /// Discrete groupoids (connected components).
    Pi0,
    Identity,
    /// Reflect with `inner`, then with `outer`.
    Composite(Box<Reflector>, Box<Reflector>),
}

impl fmt::Display for Reflector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reflector::Abelianisation => f.write_str("ab"),
            Reflector::Burnside(k) => write!(f, "burnside:{k}"),
            Reflector::Exponent(k) => write!(f, "exponent:{k}"),
            Reflector::Reduced => f.write_str("reduced"),
            Reflector::ZeroRing => f.write_str("zerorng"),
            Reflector::Boolean => f.write_str("boole"),
            Reflector::Pi0 => f.write_str("pi0"),
            Reflector::Identity => f.write_str("id"),
            Reflector::Composite(outer, inner) => write!(f, "composite:{outer}∘{inner}"),
        }
    }
}

fn parse_k(s: &str, family: &str) -> Result<u64> {
    match s.parse::<u64>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err(Error::Format(format!("{family} needs a positive integer, got `{s}`"))),
    }
}

impl FromStr for Reflector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s.strip_prefix("composite:").unwrap_or(s);
        if let Some(i) = body.find(['∘', '.']) {
            let sep = body[i..].chars().next().unwrap().len_utf8();
            let outer: Reflector = body[..i].parse()?;
            let inner: Reflector = body[i + sep..].parse()?;
            return Ok(Reflector::Composite(Box::new(outer), Box::new(inner)));
        }
        if s.starts_with("composite:") {
            return Err(Error::Format(format!("composite needs `outer∘inner`, got `{s}`")));
        }
        Ok(match s {
            "ab" | "abelianisation" => Reflector::Abelianisation,
            "reduced" => Reflector::Reduced,
            "zerorng" | "zero-ring" => Reflector::ZeroRing,
            "boole" | "boolean" => Reflector::Boolean,
            "pi0" => Reflector::Pi0,
            "id" | "identity" => Reflector::Identity,
            _ => {
                if let Some(k) = s.strip_prefix("burnside:") {
                    Reflector::Burnside(parse_k(k, "burnside")?)
                } else if let Some(k) = s.strip_prefix("exponent:") {
                    Reflector::Exponent(parse_k(k, "exponent")?)
                } else {
                    return Err(Error::Format(format!("unknown reflector `{s}`")));
                }
            }
        })
    }
}

/// The sequence `0 → T(A) → A → F(A) → 0` of a reflector at `A`.
#[derive(Clone, Debug)]
pub struct TorsionDecomposition {
    pub radical: NormalSubobject,
    /// `t_A: T(A) → A`.
    pub inclusion: Morphism,
    /// `η_A: A → F(A)`.
    pub unit: Morphism,
}

impl TorsionDecomposition {
    pub fn reflection(&self) -> &Arc<Algebra> {
        self.unit.cod()
    }

    pub fn torsion_part(&self) -> &Arc<Algebra> {
        self.inclusion.dom()
    }
}

fn ring_power(a: &Algebra, x: usize, k: usize) -> usize {
    let mut acc = x;
    for _ in 1..k {
        acc = a.mul(acc, x);
    }
    acc
}

impl Reflector {
    pub fn applies_to(&self, v: Variety) -> bool {
        match self {
            Reflector::Abelianisation => v == Variety::Group,
            Reflector::Burnside(_) | Reflector::Exponent(_) => matches!(v, Variety::Group | Variety::ZmodModule(_)),
            Reflector::Reduced => v == Variety::CommRing,
            Reflector::ZeroRing | Reflector::Boolean => v.is_ring(),
            Reflector::Pi0 => v == Variety::GpdInGroup,
            Reflector::Identity => true,
            Reflector::Composite(outer, inner) => outer.applies_to(v) && inner.applies_to(v),
        }
    }

    fn check(&self, a: &Algebra) -> Result<()> {
        if self.applies_to(a.variety()) {
            Ok(())
        } else {
            Err(unsupported(&format!("reflector {self}"), a.variety()))
        }
    }

    /// `T(A)`, the kernel of the unit.
    pub fn radical(&self, a: &Algebra) -> Result<NormalSubobject> {
        self.check(a)?;
        let whole = a.whole();
        Ok(match self {
            Reflector::Abelianisation => huq_commutator(a, &whole, &whole)?,
            Reflector::Burnside(k) => {
                let p = power_subobject(a, *k);
                if a.variety() == Variety::Group {
                    join_normal(a, &*huq_commutator(a, &whole, &whole)?, &p)
                } else {
                    p
                }
            }
            Reflector::Exponent(k) => power_subobject(a, *k),
            Reflector::Reduced => {
                // nilpotency index is bounded by the order
                let n = a.order();
                let nil: Vec<usize> = a.elements().filter(|&x| ring_power(a, x, n) == 0).collect();
                a.certify_normal(Subobject::from_members(n, nil))?
            }
            Reflector::ZeroRing => {
                let products: Vec<usize> =
                    a.elements().flat_map(|x| a.elements().map(move |y| (x, y))).map(|(x, y)| a.mul(x, y)).collect();
                let span = a.base_span(&products);
                match a.certify_normal(span) {
                    Ok(n) => n,
                    // outside rng-star the span of products need not be an ideal
                    Err(_) => a.normal_closure(&products),
                }
            }
            Reflector::Boolean => {
                let gens: Vec<usize> = a.elements().map(|x| a.sub(a.mul(x, x), x)).collect();
                a.normal_closure(&gens)
            }
            Reflector::Pi0 => {
                let gens: Vec<usize> =
                    a.elements().flat_map(|x| [a.sub(x, a.source(x)), a.sub(x, a.target(x))]).collect();
                a.normal_closure(&gens)
            }
            Reflector::Identity => a.zero_subobject(),
            Reflector::Composite(outer, inner) => {
                let a = Arc::new(a.clone());
                let eta = quotient(&a, &*inner.radical(&a)?)?;
                let t = outer.radical(eta.cod())?;
                let pre = Subobject::from_members(a.order(), a.elements().filter(|&x| t.contains(eta.apply(x))));
                a.certify_normal(pre)?
            }
        })
    }

    pub fn reflect(&self, a: &Arc<Algebra>) -> Result<TorsionDecomposition> {
        let radical = self.radical(a)?;
        let inclusion = subalgebra(a, &radical)?;
        let unit = quotient(a, &radical)?;
        Ok(TorsionDecomposition { radical, inclusion, unit })
    }

    /// `F(f)` together with the units of its domain and codomain.
    pub fn reflect_morphism(&self, f: &Morphism) -> Result<(Morphism, TorsionDecomposition, TorsionDecomposition)> {
        let da = self.reflect(f.dom())?;
        let db = self.reflect(f.cod())?;
        let ff = factor_through(&da.unit, &f.then(&db.unit)?)?;
        Ok((ff, da, db))
    }

    pub fn is_torsion_free(&self, a: &Algebra) -> Result<bool> {
        Ok(self.radical(a)?.is_zero())
    }

    /// `F(A) = 0`.
    pub fn is_torsion(&self, a: &Algebra) -> Result<bool> {
        Ok(self.radical(a)?.is_whole())
    }

    /// Whether `T(T(A)) = T(A)`.
    pub fn is_idempotent_at(&self, a: &Arc<Algebra>) -> Result<bool> {
        let t = self.reflect(a)?;
        self.is_torsion(t.torsion_part())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::*;
    use crate::algebra::{describe, is_isomorphic, normal_subobjects};

    fn arc(a: Algebra) -> Arc<Algebra> {
        Arc::new(a)
    }

    #[test]
    fn names_round_trip() {
        for s in
            ["ab", "burnside:2", "exponent:3", "reduced", "zerorng", "boole", "pi0", "id", "composite:burnside:2∘ab"]
        {
            let r: Reflector = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("burnside:2.ab".parse::<Reflector>().unwrap(), "composite:burnside:2∘ab".parse().unwrap());
        assert_eq!("zero-ring".parse::<Reflector>().unwrap(), Reflector::ZeroRing);
        assert!("burnside:0".parse::<Reflector>().is_err());
        assert!("frobnicate".parse::<Reflector>().is_err());
    }

    #[test]
    fn abelianisation_of_s3() {
        let s3 = arc(symmetric(3));
        let d = Reflector::Abelianisation.reflect(&s3).unwrap();
        assert_eq!(d.radical.len(), 3);
        assert!(is_isomorphic(d.reflection(), &arc(cyclic(2))));
    }

    #[test]
    fn nilradicals() {
        let t4 = Reflector::Reduced.radical(&zring(4)).unwrap();
        assert_eq!(t4.members(), &[0, 2]);
        let t8 = Reflector::Reduced.radical(&zring(8)).unwrap();
        assert_eq!(t8.members(), &[0, 2, 4, 6]);
        let d = Reflector::Reduced.reflect(&arc(zring(4))).unwrap();
        assert_eq!(*d.reflection().as_ref(), zring(2));
    }

    #[test]
    fn members_of_the_subcategory_have_zero_radical() {
        assert!(Reflector::Reduced.is_torsion_free(&zring(6)).unwrap());
        assert!(Reflector::Abelianisation.is_torsion_free(&cyclic(12)).unwrap());
        assert!(Reflector::Boolean.is_torsion_free(&zring(2)).unwrap());
        assert!(Reflector::Pi0.is_torsion_free(&gpd_discrete(&symmetric(3)).unwrap()).unwrap());
        assert!(Reflector::Identity.is_torsion_free(&quaternion8()).unwrap());
    }

    #[test]
    fn burnside_radicals() {
        let b2 = Reflector::Burnside(2);
        assert_eq!(b2.radical(&cyclic(4)).unwrap().members(), &[0, 2]);
        assert!(b2.radical(&cyclic(2)).unwrap().is_zero());
        // C3 has no nonzero map to an elementary abelian 2-group
        assert!(b2.radical(&cyclic(3)).unwrap().is_whole());
        let d4 = dihedral(4);
        let t = b2.radical(&d4).unwrap();
        assert_eq!(t.members(), &[0, 2]);
        let m = zmod_cyclic(4, 4).unwrap();
        assert_eq!(b2.radical(&m).unwrap().len(), 2);
    }

    #[test]
    fn exponent_radical_keeps_nonabelian_quotients() {
        let s3 = symmetric(3);
        assert!(Reflector::Exponent(6).radical(&s3).unwrap().is_zero());
        assert_eq!(Reflector::Exponent(3).radical(&s3).unwrap().len(), 6);
        assert_eq!(Reflector::Exponent(2).radical(&s3).unwrap().len(), 3);
    }

    #[test]
    fn zero_ring_radical_is_spanned_by_products() {
        let z2 = as_variety(&zring(2), Variety::RngStar).unwrap();
        assert!(Reflector::ZeroRing.radical(&z2).unwrap().is_whole());
        let zc = zero_ring(&cyclic(4), Variety::RngStar).unwrap();
        assert!(Reflector::ZeroRing.radical(&zc).unwrap().is_zero());
    }

    #[test]
    fn boolean_radical_of_the_split_square_ring() {
        let r = split_square_ring();
        // (1,1)² − (1,1) = (0,1), element 2
        assert_eq!(r.mul(3, 3), 1);
        let t = Reflector::Boolean.radical(&r).unwrap();
        assert_eq!(t.members(), &[0, 2]);
    }

    #[test]
    fn pi0_of_groupoids() {
        let ind = gpd_indiscrete(&symmetric(3)).unwrap();
        assert!(Reflector::Pi0.is_torsion(&ind).unwrap());
        let one = gpd_one_object(&cyclic(3)).unwrap();
        let d = Reflector::Pi0.reflect(&arc(one)).unwrap();
        assert!(d.reflection().is_trivial());
        let disc = arc(gpd_discrete(&cyclic(2)).unwrap());
        assert!(Reflector::Pi0.reflect(&disc).unwrap().radical.is_zero());
    }

    #[test]
    fn composite_is_the_preimage_of_the_outer_radical() {
        let c = Reflector::Composite(Box::new(Reflector::Burnside(2)), Box::new(Reflector::Abelianisation));
        let d4 = dihedral(4);
        assert_eq!(c.radical(&d4).unwrap(), Reflector::Burnside(2).radical(&d4).unwrap());
        let q8 = arc(quaternion8());
        let d = c.reflect(&q8).unwrap();
        assert_eq!(describe(d.reflection()), "C2×C2");
    }

    #[test]
    fn reflection_is_idempotent_up_to_iso() {
        let samples = [arc(symmetric(3)), arc(dihedral(4)), arc(alternating4()), arc(quaternion8())];
        for r in [Reflector::Abelianisation, Reflector::Burnside(2), Reflector::Exponent(3)] {
            for a in &samples {
                let fa = r.reflect(a).unwrap();
                let ffa = r.reflect(fa.reflection()).unwrap();
                assert!(ffa.unit.is_iso(), "{r} on {a}");
            }
        }
    }

    #[test]
    fn radicals_are_normal_and_units_natural() {
        let a = arc(symmetric(3));
        let b = arc(cyclic(2));
        for f in crate::algebra::enumerate_homs(&a, &b, crate::algebra::HomKind::All).unwrap() {
            let (ff, da, db) = Reflector::Abelianisation.reflect_morphism(&f).unwrap();
            assert_eq!(da.unit.then(&ff).unwrap(), f.then(&db.unit).unwrap());
        }
        for n in normal_subobjects(&a) {
            assert!(a.is_normal(&n));
        }
    }

    #[test]
    fn variety_mismatch() {
        assert!(Reflector::Reduced.radical(&cyclic(2)).is_err());
        assert!(Reflector::Pi0.radical(&zring(2)).is_err());
    }
}
