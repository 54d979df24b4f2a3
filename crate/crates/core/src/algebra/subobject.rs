use std::ops::Deref;

use super::Algebra;
use crate::error::{Error, Result};

/// A subset of an algebra's carrier, kept both as a sorted list and a mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subobject {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Subobject {
    pub fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        Subobject { members, mask }
    }

    pub fn from_members(parent_order: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; parent_order];
        for x in members {
            mask[x] = true;
        }
        Self::from_mask(mask)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn parent_order(&self) -> usize {
        self.mask.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    /// True when the subobject is `{0}`.
    pub fn is_zero(&self) -> bool {
        self.members == [0]
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.mask.len()
    }

    pub fn is_subset_of(&self, other: &Subobject) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }
}

/// A subobject certified to be normal (a kernel) in its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalSubobject(Subobject);

impl Deref for NormalSubobject {
    type Target = Subobject;

    fn deref(&self) -> &Subobject {
        &self.0
    }
}

impl NormalSubobject {
    pub fn as_subobject(&self) -> &Subobject {
        &self.0
    }

    pub fn into_subobject(self) -> Subobject {
        self.0
    }
}

impl Algebra {
    /// Closure of `seeds ∪ {0}` under all operations; with `normal`, also
    /// under conjugation, two-sided ring multiplication by arbitrary elements
    /// and the groupoid idempotents.
    fn close(&self, seeds: &[usize], normal: bool) -> Subobject {
        let n = self.order();
        let mut mask = vec![false; n];
        let mut list = Vec::with_capacity(n);
        let push = |x: usize, mask: &mut Vec<bool>, list: &mut Vec<usize>| {
            if !mask[x] {
                mask[x] = true;
                list.push(x);
            }
        };
        push(0, &mut mask, &mut list);
        for &s in seeds {
            push(s, &mut mask, &mut list);
        }
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            push(self.inv(x), &mut mask, &mut list);
            for j in 0..=i {
                let y = list[j];
                push(self.op(x, y), &mut mask, &mut list);
                push(self.op(y, x), &mut mask, &mut list);
                if self.has_mul() {
                    push(self.mul(x, y), &mut mask, &mut list);
                    push(self.mul(y, x), &mut mask, &mut list);
                }
            }
            if self.is_groupoid() {
                push(self.source(x), &mut mask, &mut list);
                push(self.target(x), &mut mask, &mut list);
            }
            if normal {
                for a in 0..n {
                    push(self.conj(a, x), &mut mask, &mut list);
                    if self.has_mul() {
                        push(self.mul(a, x), &mut mask, &mut list);
                        push(self.mul(x, a), &mut mask, &mut list);
                    }
                }
            }
            i += 1;
        }
        Subobject::from_mask(mask)
    }

    pub fn zero_subobject(&self) -> NormalSubobject {
        NormalSubobject(Subobject::from_members(self.order(), [0]))
    }

    pub fn whole(&self) -> NormalSubobject {
        NormalSubobject(Subobject::from_mask(vec![true; self.order()]))
    }

    /// Smallest subalgebra containing `gens`.
    pub fn generated(&self, gens: &[usize]) -> Subobject {
        self.close(gens, false)
    }

    /// Smallest normal subobject containing `gens`.
    pub fn normal_closure(&self, gens: &[usize]) -> NormalSubobject {
        NormalSubobject(self.close(gens, true))
    }

    /// Additive (base-group) span of `gens`, ignoring any other operation.
    pub fn base_span(&self, gens: &[usize]) -> Subobject {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut list = vec![0];
        for &g in gens {
            if !mask[g] {
                mask[g] = true;
                list.push(g);
            }
        }
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for j in 0..=i {
                for z in [self.op(x, list[j]), self.op(list[j], x)] {
                    if !mask[z] {
                        mask[z] = true;
                        list.push(z);
                    }
                }
            }
            i += 1;
        }
        Subobject::from_mask(mask)
    }

    pub fn is_subalgebra(&self, s: &Subobject) -> bool {
        s.parent_order() == self.order() && s.contains(0) && self.generated(s.members()).len() == s.len()
    }

    pub fn is_normal(&self, s: &Subobject) -> bool {
        s.parent_order() == self.order() && s.contains(0) && self.normal_closure(s.members()).len() == s.len()
    }

    /// Certifies `s` as a normal subobject.
    pub fn certify_normal(&self, s: Subobject) -> Result<NormalSubobject> {
        if !self.is_subalgebra(&s) {
            return Err(Error::NotSubalgebra);
        }
        if !self.is_normal(&s) {
            return Err(Error::NotNormal);
        }
        Ok(NormalSubobject(s))
    }

    pub(crate) fn assume_normal(&self, s: Subobject) -> NormalSubobject {
        debug_assert!(self.is_normal(&s), "{} is not normal in {}", s.len(), self.name());
        NormalSubobject(s)
    }

    /// A small generating set, chosen greedily among elements of largest order.
    pub fn generators(&self) -> Vec<usize> {
        let mut cands: Vec<usize> = (1..self.order()).collect();
        let orders: Vec<usize> = self.elements().map(|x| self.element_order(x)).collect();
        cands.sort_by_key(|&x| (std::cmp::Reverse(orders[x]), x));
        let mut gens = Vec::new();
        let mut span = self.generated(&[]);
        for c in cands {
            if !span.contains(c) {
                gens.push(c);
                span = self.generated(&gens);
                if span.is_whole() {
                    break;
                }
            }
        }
        gens
    }
}

#[cfg(test)]
mod tests {
    use super::super::builders::*;

    #[test]
    fn normal_closure_examples() {
        let s3 = symmetric(3);
        let t = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        assert!(s3.normal_closure(&[t]).is_whole());
        assert!(s3.normal_closure(&[]).is_zero());
        let d4 = dihedral(4);
        let r2 = (1..8).find(|&x| d4.element_order(x) == 2 && (0..8).all(|g| d4.conj(g, x) == x)).unwrap();
        assert_eq!(d4.normal_closure(&[r2]).len(), 2);
    }

    #[test]
    fn transposition_subgroup_is_not_normal() {
        let s3 = symmetric(3);
        let t = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let h = s3.generated(&[t]);
        assert_eq!(h.len(), 2);
        assert!(s3.is_subalgebra(&h));
        assert!(!s3.is_normal(&h));
        assert!(s3.certify_normal(h).is_err());
    }

    #[test]
    fn ideal_closure_absorbs_products() {
        let z12 = zring(12);
        let i = z12.normal_closure(&[8]);
        assert_eq!(i.members(), &[0, 4, 8]);
        assert_eq!(z12.generated(&[8]).members(), &[0, 4, 8]);
    }

    #[test]
    fn generators_generate() {
        for a in [symmetric(3), dihedral(4), quaternion8(), zmod_free(4, 2), zring(12)] {
            let g = a.generators();
            assert!(a.generated(&g).is_whole());
        }
    }
}
