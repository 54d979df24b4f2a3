use std::fmt;
use std::sync::Arc;

use super::Algebra;
use crate::error::{Error, Result};

/// A homomorphism between two algebras of the same variety.
#[derive(Clone, Debug)]
pub struct Morphism {
    dom: Arc<Algebra>,
    cod: Arc<Algebra>,
    map: Vec<usize>,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && *self.dom == *other.dom && *self.cod == *other.cod
    }
}

impl Eq for Morphism {}

impl Morphism {
    /// Checks that `map` preserves every operation.
    pub fn new(dom: Arc<Algebra>, cod: Arc<Algebra>, map: Vec<usize>) -> Result<Self> {
        if dom.variety() != cod.variety() {
            return Err(Error::VarietyMismatch(dom.variety(), cod.variety()));
        }
        if map.len() != dom.order() || map.iter().any(|&y| y >= cod.order()) {
            return Err(Error::NotHomomorphism("map has the wrong shape".into()));
        }
        let m = Morphism { dom, cod, map };
        if let Some(why) = m.violation() {
            return Err(Error::NotHomomorphism(why));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(dom: Arc<Algebra>, cod: Arc<Algebra>, map: Vec<usize>) -> Self {
        debug_assert_eq!(map.len(), dom.order());
        let m = Morphism { dom, cod, map };
        debug_assert!(m.violation().is_none(), "{:?}", m.violation());
        m
    }

    fn violation(&self) -> Option<String> {
        let (a, b, f) = (&*self.dom, &*self.cod, &self.map);
        if f[0] != 0 {
            return Some("0 is not preserved".into());
        }
        for x in a.elements() {
            if f[a.inv(x)] != b.inv(f[x]) {
                return Some(format!("inverse not preserved at {x}"));
            }
            if a.is_groupoid() && (f[a.source(x)] != b.source(f[x]) || f[a.target(x)] != b.target(f[x])) {
                return Some(format!("source/target not preserved at {x}"));
            }
            for y in a.elements() {
                if f[a.op(x, y)] != b.op(f[x], f[y]) {
                    return Some(format!("operation not preserved at ({x},{y})"));
                }
                if a.has_mul() && f[a.mul(x, y)] != b.mul(f[x], f[y]) {
                    return Some(format!("product not preserved at ({x},{y})"));
                }
            }
        }
        None
    }

    pub fn identity(a: &Arc<Algebra>) -> Self {
        Morphism { dom: a.clone(), cod: a.clone(), map: a.elements().collect() }
    }

    pub fn zero(dom: &Arc<Algebra>, cod: &Arc<Algebra>) -> Self {
        Morphism { dom: dom.clone(), cod: cod.clone(), map: vec![0; dom.order()] }
    }

    pub fn dom(&self) -> &Arc<Algebra> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Algebra> {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Morphism) -> Result<Morphism> {
        if *self.cod != *g.dom {
            return Err(Error::Precondition(format!(
                "cannot compose: codomain {} differs from domain {}",
                self.cod.name(),
                g.dom.name()
            )));
        }
        Ok(Morphism { dom: self.dom.clone(), cod: g.cod.clone(), map: self.map.iter().map(|&x| g.map[x]).collect() })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.order()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.order()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_iso(&self) -> bool {
        self.dom.order() == self.cod.order() && self.is_injective()
    }

    pub fn is_zero(&self) -> bool {
        self.map.iter().all(|&y| y == 0)
    }

    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_iso() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(Morphism { dom: self.cod.clone(), cod: self.dom.clone(), map: inv })
    }

    /// Same map with the codomain replaced by an equal algebra (for instance
    /// one with a different name).
    pub fn with_cod(&self, cod: Arc<Algebra>) -> Result<Morphism> {
        if *cod != *self.cod {
            return Err(Error::Precondition("replacement codomain differs".into()));
        }
        Ok(Morphism { dom: self.dom.clone(), cod, map: self.map.clone() })
    }

    pub fn with_dom(&self, dom: Arc<Algebra>) -> Result<Morphism> {
        if *dom != *self.dom {
            return Err(Error::Precondition("replacement domain differs".into()));
        }
        Ok(Morphism { dom, cod: self.cod.clone(), map: self.map.clone() })
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {} {:?}", self.dom.name(), self.cod.name(), self.map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::*;

    #[test]
    fn rejects_non_homomorphism() {
        let c4 = Arc::new(cyclic(4));
        let c2 = Arc::new(cyclic(2));
        assert!(Morphism::new(c4.clone(), c2.clone(), vec![0, 1, 1, 0]).is_err());
        assert!(Morphism::new(c4, c2, vec![0, 1, 0, 1]).is_ok());
    }

    #[test]
    fn composition_and_inverse() {
        let z4 = Arc::new(zring(4));
        let z2 = Arc::new(zring(2));
        let f = Morphism::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let id = Morphism::identity(&z4);
        assert_eq!(id.then(&f).unwrap(), f);
        assert!(f.then(&id).is_err());
        assert!(f.is_surjective() && !f.is_injective());
        let neg = Morphism::new(Arc::new(cyclic(4)), Arc::new(cyclic(4)), vec![0, 3, 2, 1]).unwrap();
        assert_eq!(neg.inverse().unwrap(), neg);
    }
}
