use std::collections::HashSet;
use std::sync::Arc;

use super::homs::{find_hom, HomKind};
use super::{Algebra, Morphism, NormalSubobject, Subobject, Variety};
use crate::error::{unsupported, Error, Result};

pub fn kernel(f: &Morphism) -> NormalSubobject {
    let s = Subobject::from_members(f.dom().order(), f.dom().elements().filter(|&x| f.apply(x) == 0));
    f.dom().assume_normal(s)
}

pub fn image(f: &Morphism) -> Subobject {
    Subobject::from_members(f.cod().order(), f.map().iter().copied())
}

/// Operation, inverse, ring product and source/target tables.
type RawTables = (Vec<usize>, Vec<usize>, Option<Vec<usize>>, Option<[Vec<usize>; 2]>);

fn tables_on(a: &Algebra, elems: &[usize], index: &dyn Fn(usize) -> usize) -> RawTables {
    let k = elems.len();
    let mut op = Vec::with_capacity(k * k);
    let mut mul = a.has_mul().then(|| Vec::with_capacity(k * k));
    for &x in elems {
        for &y in elems {
            op.push(index(a.op(x, y)));
            if let Some(m) = mul.as_mut() {
                m.push(index(a.mul(x, y)));
            }
        }
    }
    let inv = elems.iter().map(|&x| index(a.inv(x))).collect();
    let ends = a.is_groupoid().then(|| {
        [elems.iter().map(|&x| index(a.source(x))).collect(), elems.iter().map(|&x| index(a.target(x))).collect()]
    });
    (op, inv, mul, ends)
}

/// The subalgebra on `s` with its inclusion into `a`.
pub fn subalgebra(a: &Arc<Algebra>, s: &Subobject) -> Result<Morphism> {
    if !a.is_subalgebra(s) {
        return Err(Error::NotSubalgebra);
    }
    let elems = s.members();
    let mut pos = vec![usize::MAX; a.order()];
    for (i, &x) in elems.iter().enumerate() {
        pos[x] = i;
    }
    let (op, inv, mul, ends) = tables_on(a, elems, &|x| pos[x]);
    let name = if s.is_whole() { a.name().to_string() } else { format!("{}≤{}", elems.len(), a.name()) };
    let sub = Arc::new(Algebra::from_parts(a.variety(), name, op, inv, mul, ends)?);
    Ok(Morphism::new_unchecked(sub, a.clone(), elems.to_vec()))
}

/// The projection `a → a/n`; cosets are numbered by first appearance.
pub fn quotient(a: &Arc<Algebra>, n: &Subobject) -> Result<Morphism> {
    if !a.is_subalgebra(n) {
        return Err(Error::NotSubalgebra);
    }
    if !a.is_normal(n) {
        return Err(Error::NotNormal);
    }
    let mut class = vec![usize::MAX; a.order()];
    let mut reps = Vec::new();
    for x in a.elements() {
        if class[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &m in n.members() {
            class[a.op(x, m)] = c;
        }
    }
    let (op, inv, mul, ends) = tables_on(a, &reps, &|x| class[x]);
    let name = if n.is_zero() { a.name().to_string() } else { format!("{}/{}", a.name(), n.len()) };
    let q = Arc::new(Algebra::from_parts(a.variety(), name, op, inv, mul, ends)?);
    Ok(Morphism::new_unchecked(a.clone(), q, class))
}

/// Given a surjection `q: A → Q` and `f: A → B` with `ker q ⊆ ker f`, the
/// unique `g: Q → B` with `g ∘ q = f`.
pub fn factor_through(q: &Morphism, f: &Morphism) -> Result<Morphism> {
    if *q.dom() != *f.dom() || !q.is_surjective() {
        return Err(Error::Precondition("factor_through needs a surjection with the same domain".into()));
    }
    let mut g = vec![usize::MAX; q.cod().order()];
    for x in q.dom().elements() {
        let c = q.apply(x);
        if g[c] == usize::MAX {
            g[c] = f.apply(x);
        } else if g[c] != f.apply(x) {
            return Err(Error::Precondition("kernel of q is not contained in kernel of f".into()));
        }
    }
    Ok(Morphism::new_unchecked(q.cod().clone(), f.cod().clone(), g))
}

/// Restriction of `f` to subalgebras `s ≤ dom f` and `t ≤ cod f`, given as
/// inclusions, when `f(s) ⊆ t`.
pub fn restrict(f: &Morphism, s: &Morphism, t: &Morphism) -> Result<Morphism> {
    let mut pos = vec![usize::MAX; t.cod().order()];
    for (i, &y) in t.map().iter().enumerate() {
        pos[y] = i;
    }
    let map: Option<Vec<usize>> = s.map().iter().map(|&x| Some(pos[f.apply(x)]).filter(|&p| p != usize::MAX)).collect();
    let map = map.ok_or_else(|| Error::Precondition("image not contained in target subobject".into()))?;
    Ok(Morphism::new_unchecked(s.dom().clone(), t.dom().clone(), map))
}

/// Pullback object with its two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub object: Arc<Algebra>,
    pub p1: Morphism,
    pub p2: Morphism,
}

impl Pullback {
    /// The pair `(x, y)` carried by element `i`.
    pub fn pair(&self, i: usize) -> (usize, usize) {
        (self.p1.apply(i), self.p2.apply(i))
    }

    /// Index of the pair `(x, y)`, if it lies in the pullback.
    pub fn index_of(&self, x: usize, y: usize) -> Option<usize> {
        self.object.elements().find(|&i| self.pair(i) == (x, y))
    }

    /// Mediating map `(u, v): X → P` for `u: X → A`, `v: X → B`.
    pub fn mediate(&self, u: &Morphism, v: &Morphism) -> Result<Morphism> {
        let a = self.p1.cod().order();
        let mut pos = vec![usize::MAX; a * self.p2.cod().order()];
        for i in self.object.elements() {
            let (x, y) = self.pair(i);
            pos[x + a * y] = i;
        }
        let map: Option<Vec<usize>> =
            u.dom().elements().map(|t| Some(pos[u.apply(t) + a * v.apply(t)]).filter(|&p| p != usize::MAX)).collect();
        let map = map.ok_or_else(|| Error::Precondition("maps do not form a cone".into()))?;
        Ok(Morphism::new_unchecked(u.dom().clone(), self.object.clone(), map))
    }
}

/// Pullback of `f: A → C` and `g: B → C`, pairs in lexicographic order.
pub fn pullback(f: &Morphism, g: &Morphism) -> Result<Pullback> {
    if *f.cod() != *g.cod() {
        return Err(Error::Precondition("pullback needs a common codomain".into()));
    }
    let (a, b) = (f.dom(), g.dom());
    let pairs: Vec<(usize, usize)> = a
        .elements()
        .flat_map(|x| b.elements().filter(move |&y| f.apply(x) == g.apply(y)).map(move |y| (x, y)))
        .collect();
    let nb = b.order();
    let mut pos = vec![usize::MAX; a.order() * nb];
    for (i, &(x, y)) in pairs.iter().enumerate() {
        pos[x * nb + y] = i;
    }
    let k = pairs.len();
    let idx = |x: usize, y: usize| pos[x * nb + y];
    let mut op = Vec::with_capacity(k * k);
    let mut mul = a.has_mul().then(|| Vec::with_capacity(k * k));
    for &(x1, y1) in &pairs {
        for &(x2, y2) in &pairs {
            op.push(idx(a.op(x1, x2), b.op(y1, y2)));
            if let Some(m) = mul.as_mut() {
                m.push(idx(a.mul(x1, x2), b.mul(y1, y2)));
            }
        }
    }
    let inv = pairs.iter().map(|&(x, y)| idx(a.inv(x), b.inv(y))).collect();
    let ends = a.is_groupoid().then(|| {
        [
            pairs.iter().map(|&(x, y)| idx(a.source(x), b.source(y))).collect(),
            pairs.iter().map(|&(x, y)| idx(a.target(x), b.target(y))).collect(),
        ]
    });
    let name = if f.cod().is_trivial() {
        format!("{}×{}", a.name(), b.name())
    } else {
        format!("{}×_{}{}", a.name(), f.cod().name(), b.name())
    };
    let object = Arc::new(Algebra::from_parts(a.variety(), name, op, inv, mul, ends)?);
    let p1 = Morphism::new_unchecked(object.clone(), a.clone(), pairs.iter().map(|p| p.0).collect());
    let p2 = Morphism::new_unchecked(object.clone(), b.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(Pullback { object, p1, p2 })
}

fn terminal(v: Variety) -> Arc<Algebra> {
    let ends = (v == Variety::GpdInGroup).then(|| [vec![0], vec![0]]);
    let mul = v.is_ring().then(|| vec![0]);
    Arc::new(Algebra::from_parts(v, "0".into(), vec![0], vec![0], mul, ends).expect("zero algebra"))
}

/// The zero algebra of a variety.
pub fn zero_algebra(v: Variety) -> Arc<Algebra> {
    terminal(v)
}

pub fn product(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<Pullback> {
    if a.variety() != b.variety() {
        return Err(Error::VarietyMismatch(a.variety(), b.variety()));
    }
    let z = terminal(a.variety());
    pullback(&Morphism::zero(a, &z), &Morphism::zero(b, &z))
}

pub fn kernel_pair(f: &Morphism) -> Pullback {
    pullback(f, f).expect("kernel pair")
}

pub fn join_normal(a: &Algebra, n1: &Subobject, n2: &Subobject) -> NormalSubobject {
    let gens: Vec<usize> = n1.members().iter().chain(n2.members()).copied().collect();
    a.normal_closure(&gens)
}

pub fn meet(s1: &Subobject, s2: &Subobject) -> Subobject {
    Subobject::from_mask(s1.mask().iter().zip(s2.mask()).map(|(&x, &y)| x && y).collect())
}

/// Huq commutator of two subobjects: the normal closure of group
/// commutators, the ideal generated by `HK + KH` in rings, zero for modules.
pub fn huq_commutator(a: &Algebra, h: &Subobject, k: &Subobject) -> Result<NormalSubobject> {
    let mut gens = Vec::new();
    match a.variety() {
        Variety::Group => {
            for &x in h.members() {
                for &y in k.members() {
                    gens.push(a.commutator(x, y));
                }
            }
        }
        v if v.is_ring() => {
            for &x in h.members() {
                for &y in k.members() {
                    gens.push(a.mul(x, y));
                    gens.push(a.mul(y, x));
                }
            }
        }
        Variety::ZmodModule(_) => {}
        v => return Err(unsupported("huq_commutator", v)),
    }
    gens.sort_unstable();
    gens.dedup();
    Ok(a.normal_closure(&gens))
}

/// Subobject generated by `k`-th powers (`kA` in additive notation).
pub fn power_subobject(a: &Algebra, k: u64) -> NormalSubobject {
    let mut gens: Vec<usize> = a.elements().map(|x| a.power(x, k)).collect();
    gens.sort_unstable();
    gens.dedup();
    let s = a.generated(&gens);
    a.assume_normal(s)
}

/// Every normal subobject, ordered by size and then by members.
pub fn normal_subobjects(a: &Algebra) -> Vec<NormalSubobject> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut all: Vec<NormalSubobject> = Vec::new();
    let mut principal = Vec::new();
    for x in a.elements() {
        let n = a.normal_closure(&[x]);
        if seen.insert(n.members().to_vec()) {
            principal.push(n.clone());
            all.push(n);
        }
    }
    let mut i = 0;
    while i < all.len() {
        for p in &principal {
            if p.is_subset_of(&all[i]) {
                continue;
            }
            let j = join_normal(a, &all[i], p);
            if seen.insert(j.members().to_vec()) {
                all.push(j);
            }
        }
        i += 1;
    }
    all.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.members().cmp(y.members())));
    all
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceClass {
    NotExact,
    Exact,
    /// Exact with the given section of the epimorphism.
    SplitExact(Morphism),
}

/// Classifies `K --k--> A --f--> B` as not exact, exact or split exact.
pub fn classify_sequence(k: &Morphism, f: &Morphism) -> Result<SequenceClass> {
    if *k.cod() != *f.dom() {
        return Err(Error::Precondition("sequence maps are not composable".into()));
    }
    if !k.is_injective() || !f.is_surjective() || image(k) != *kernel(f).as_subobject() {
        return Ok(SequenceClass::NotExact);
    }
    Ok(match section(f)? {
        Some(s) => SequenceClass::SplitExact(s),
        None => SequenceClass::Exact,
    })
}

/// A homomorphism `s` with `f ∘ s = 1`, if any.
pub fn section(f: &Morphism) -> Result<Option<Morphism>> {
    find_hom(
        f.cod(),
        f.dom(),
        HomKind::All,
        |g, y| f.apply(y) == g,
        |s| s.iter().enumerate().all(|(x, &y)| f.apply(y) == x),
    )
}
