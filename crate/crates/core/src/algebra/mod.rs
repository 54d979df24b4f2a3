//! Finite pointed algebras with dense element indices.
//!
//! Every supported variety is a variety of groups with extra operations: the
//! base operation is the group law (written multiplicatively for groups and
//! additively for rings and modules), rings add a second binary operation and
//! internal groupoids add two idempotent endomorphisms. Element `0` is always
//! the constant.

mod abelian;
pub mod builders;
mod constructions;
mod homs;
mod morphism;
mod subobject;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use abelian::{abelian_invariants, describe};
pub use constructions::{
    classify_sequence, factor_through, huq_commutator, image, join_normal, kernel, kernel_pair, meet,
    normal_subobjects, power_subobject, product, pullback, quotient, restrict, section, subalgebra, zero_algebra,
    Pullback, SequenceClass,
};
pub use homs::{count_homs, enumerate_homs, find_hom, find_isomorphism, is_isomorphic, HomKind};
pub use morphism::Morphism;
pub use subobject::{NormalSubobject, Subobject};

/// The equational class an algebra belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variety {
    Group,
    CommRing,
    NonassocRing,
    /// Associative rings satisfying `xyxy = xy`.
    RngStar,
    ZmodModule(u32),
    /// Internal groupoids in groups.
    GpdInGroup,
}

impl Variety {
    pub fn is_ring(self) -> bool {
        matches!(self, Variety::CommRing | Variety::NonassocRing | Variety::RngStar)
    }

    /// Whether the base operation is written additively.
    pub fn is_additive(self) -> bool {
        self.is_ring() || matches!(self, Variety::ZmodModule(_))
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variety::Group => f.write_str("group"),
            Variety::CommRing => f.write_str("comm-ring"),
            Variety::NonassocRing => f.write_str("nonassoc-ring"),
            Variety::RngStar => f.write_str("rng-star"),
            Variety::ZmodModule(m) => write!(f, "zmod:{m}"),
            Variety::GpdInGroup => f.write_str("gpd-in-group"),
        }
    }
}

impl FromStr for Variety {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "group" => Ok(Variety::Group),
            "comm-ring" => Ok(Variety::CommRing),
            "nonassoc-ring" => Ok(Variety::NonassocRing),
            "rng-star" => Ok(Variety::RngStar),
            "gpd-in-group" => Ok(Variety::GpdInGroup),
            _ => {
                let m = s
                    .strip_prefix("zmod:")
                    .and_then(|m| m.parse::<u32>().ok())
                    .filter(|m| *m >= 1)
                    .ok_or_else(|| Error::Format(format!("unknown variety `{s}`")))?;
                Ok(Variety::ZmodModule(m))
            }
        }
    }
}

/// A finite algebra stored as full operation tables over `0..order`.
#[derive(Clone, Debug)]
pub struct Algebra {
    variety: Variety,
    name: String,
    n: usize,
    op: Vec<usize>,
    inv: Vec<usize>,
    mul: Option<Vec<usize>>,
    ends: Option<[Vec<usize>; 2]>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.variety == other.variety
            && self.n == other.n
            && self.op == other.op
            && self.mul == other.mul
            && self.ends == other.ends
    }
}

impl Eq for Algebra {}

impl Algebra {
    /// Builds an algebra from raw tables and checks every identity of its variety.
    ///
    /// `mul` must be present exactly for ring varieties and `ends` (the
    /// idempotents `i∘d` and `i∘c` on arrows) exactly for groupoids.
    pub fn new(
        variety: Variety,
        name: impl Into<String>,
        op: Vec<usize>,
        inv: Vec<usize>,
        mul: Option<Vec<usize>>,
        ends: Option<[Vec<usize>; 2]>,
    ) -> Result<Self> {
        let a = Self::from_parts(variety, name.into(), op, inv, mul, ends)?;
        a.check_identities()?;
        Ok(a)
    }

    pub(crate) fn from_parts(
        variety: Variety,
        name: String,
        op: Vec<usize>,
        inv: Vec<usize>,
        mul: Option<Vec<usize>>,
        ends: Option<[Vec<usize>; 2]>,
    ) -> Result<Self> {
        let n = inv.len();
        let bad = |msg: &str| Err(Error::InvalidStructure(format!("{name}: {msg}")));
        if n == 0 {
            return bad("empty carrier");
        }
        if op.len() != n * n {
            return bad("operation table has the wrong size");
        }
        if op.iter().chain(inv.iter()).any(|&x| x >= n) {
            return bad("table entry out of range");
        }
        if mul.is_some() != variety.is_ring() {
            return bad("ring product present exactly for ring varieties");
        }
        if let Some(m) = &mul {
            if m.len() != n * n || m.iter().any(|&x| x >= n) {
                return bad("ring product table malformed");
            }
        }
        if ends.is_some() != (variety == Variety::GpdInGroup) {
            return bad("source/target idempotents present exactly for groupoids");
        }
        if let Some([s, t]) = &ends {
            if s.len() != n || t.len() != n || s.iter().chain(t.iter()).any(|&x| x >= n) {
                return bad("source/target table malformed");
            }
        }
        Ok(Algebra { variety, name, n, op, inv, mul, ends })
    }

    pub fn variety(&self) -> Variety {
        self.variety
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// The base group law.
    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.op[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `a · b⁻¹` (or `a − b`).
    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.op(a, self.inv[b])
    }

    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.op(self.op(g, x), self.inv[g])
    }

    #[inline]
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.op(self.op(x, y), self.op(self.inv[x], self.inv[y]))
    }

    pub fn has_mul(&self) -> bool {
        self.mul.is_some()
    }

    /// Ring product; panics outside ring varieties.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul.as_ref().expect("ring product")[a * self.n + b]
    }

    pub fn is_groupoid(&self) -> bool {
        self.ends.is_some()
    }

    /// `i(d(a))` for a groupoid arrow.
    #[inline]
    pub fn source(&self, a: usize) -> usize {
        self.ends.as_ref().expect("groupoid")[0][a]
    }

    /// `i(c(a))` for a groupoid arrow.
    #[inline]
    pub fn target(&self, a: usize) -> usize {
        self.ends.as_ref().expect("groupoid")[1][a]
    }

    pub(crate) fn op_table(&self) -> &[usize] {
        &self.op
    }

    pub(crate) fn inv_table(&self) -> &[usize] {
        &self.inv
    }

    pub(crate) fn mul_table(&self) -> Option<&[usize]> {
        self.mul.as_deref()
    }

    pub(crate) fn ends_tables(&self) -> Option<&[Vec<usize>; 2]> {
        self.ends.as_ref()
    }

    /// `k`-fold iterate of the base operation.
    pub fn power(&self, x: usize, k: u64) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.op(acc, x);
        }
        acc
    }

    /// Order of `x` in the base group.
    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.op(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements().map(|x| self.element_order(x)).fold(1, lcm)
    }

    pub fn is_trivial(&self) -> bool {
        self.n == 1
    }

    pub fn is_commutative_base(&self) -> bool {
        self.elements().all(|a| (0..a).all(|b| self.op(a, b) == self.op(b, a)))
    }

    /// For a groupoid, the object group as the set of identity arrows.
    pub fn objects(&self) -> Vec<usize> {
        let [s, _] = self.ends.as_ref().expect("groupoid");
        self.elements().filter(|&x| s[x] == x).collect()
    }

    /// Exhaustively checks every identity of the variety.
    pub fn check_identities(&self) -> Result<()> {
        let n = self.n;
        let fail = |msg: String| Err(Error::InvalidStructure(format!("{}: {msg}", self.name)));
        for x in 0..n {
            if self.op(0, x) != x || self.op(x, 0) != x {
                return fail(format!("0 is not neutral for {x}"));
            }
            if self.op(x, self.inv[x]) != 0 || self.op(self.inv[x], x) != 0 {
                return fail(format!("bad inverse of {x}"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.op(a, b);
                for c in 0..n {
                    if self.op(ab, c) != self.op(a, self.op(b, c)) {
                        return fail(format!("base operation not associative at ({a},{b},{c})"));
                    }
                }
            }
        }
        if self.variety.is_additive() && !self.is_commutative_base() {
            return fail("addition is not commutative".into());
        }
        if let Variety::ZmodModule(m) = self.variety {
            if let Some(x) = self.elements().find(|&x| self.power(x, m as u64) != 0) {
                return fail(format!("{m}·{x} ≠ 0"));
            }
        }
        if self.mul.is_some() {
            self.check_ring()?;
        }
        if self.ends.is_some() {
            self.check_groupoid()?;
        }
        Ok(())
    }

    fn check_ring(&self) -> Result<()> {
        let n = self.n;
        let fail = |msg: String| Err(Error::InvalidStructure(format!("{}: {msg}", self.name)));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(a, self.op(b, c)) != self.op(self.mul(a, b), self.mul(a, c)) {
                        return fail(format!("not left distributive at ({a},{b},{c})"));
                    }
                    if self.mul(self.op(a, b), c) != self.op(self.mul(a, c), self.mul(b, c)) {
                        return fail(format!("not right distributive at ({a},{b},{c})"));
                    }
                }
            }
        }
        let assoc = matches!(self.variety, Variety::CommRing | Variety::RngStar);
        if assoc {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return fail(format!("product not associative at ({a},{b},{c})"));
                        }
                    }
                }
            }
        }
        if self.variety == Variety::CommRing {
            for a in 0..n {
                for b in 0..a {
                    if self.mul(a, b) != self.mul(b, a) {
                        return fail(format!("product not commutative at ({a},{b})"));
                    }
                }
            }
        }
        if self.variety == Variety::RngStar {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    if self.mul(ab, ab) != ab {
                        return fail(format!("xyxy ≠ xy at ({a},{b})"));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_groupoid(&self) -> Result<()> {
        let n = self.n;
        let fail = |msg: String| Err(Error::InvalidStructure(format!("{}: {msg}", self.name)));
        let [s, t] = self.ends.as_ref().unwrap();
        for e in [s, t] {
            for a in 0..n {
                for b in 0..n {
                    if e[self.op(a, b)] != self.op(e[a], e[b]) {
                        return fail("source/target idempotent is not a homomorphism".into());
                    }
                }
            }
        }
        for x in 0..n {
            if s[s[x]] != s[x] || t[t[x]] != t[x] || s[t[x]] != t[x] || t[s[x]] != s[x] {
                return fail(format!("reflexive graph identities fail at {x}"));
            }
        }
        for x in (0..n).filter(|&x| s[x] == 0) {
            for y in (0..n).filter(|&y| t[y] == 0) {
                if self.op(x, y) != self.op(y, x) {
                    return fail(format!("kernels of source and target do not commute at ({x},{y})"));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}, order {}]", self.name, self.variety, self.n)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variety_names_round_trip() {
        for v in [
            Variety::Group,
            Variety::CommRing,
            Variety::NonassocRing,
            Variety::RngStar,
            Variety::ZmodModule(8),
            Variety::GpdInGroup,
        ] {
            assert_eq!(v.to_string().parse::<Variety>().unwrap(), v);
        }
        assert!("zmod:0".parse::<Variety>().is_err());
        assert!("monoid".parse::<Variety>().is_err());
    }

    #[test]
    fn rejects_non_associative_group_table() {
        // a Latin square with identity 0 that is not associative
        let op = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        let inv = vec![0, 1, 2, 3, 4];
        assert!(Algebra::new(Variety::Group, "bad", op, inv, None, None).is_err());
    }

    #[test]
    fn rejects_module_with_wrong_exponent() {
        let c4 = builders::cyclic(4);
        let r = Algebra::new(Variety::ZmodModule(2), "c4", c4.op_table().to_vec(), c4.inv_table().to_vec(), None, None);
        assert!(r.is_err());
    }
}
