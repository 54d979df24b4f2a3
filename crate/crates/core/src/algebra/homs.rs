//! Homomorphism search by backtracking over images of a generating set.
//!
//! A partial assignment is propagated to the whole subalgebra it generates
//! by closing its graph inside `A × B`; a clash means no homomorphism extends
//! it. Once every generator is placed the graph covers `A`.

use std::sync::Arc;

use super::{Algebra, Morphism};
use crate::error::{Error, Result};

const UNSET: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomKind {
    All,
    Monos,
    Isos,
}

#[derive(Clone)]
struct State {
    map: Vec<usize>,
    known: Vec<usize>,
    used: Vec<bool>,
}

fn extend(a: &Algebra, b: &Algebra, st: &mut State, x: usize, y: usize, injective: bool) -> bool {
    let mut stack = vec![(x, y)];
    while let Some((x, y)) = stack.pop() {
        if st.map[x] != UNSET {
            if st.map[x] != y {
                return false;
            }
            continue;
        }
        if injective && st.used[y] {
            return false;
        }
        st.map[x] = y;
        st.used[y] = true;
        let idx = st.known.len();
        st.known.push(x);
        stack.push((a.inv(x), b.inv(y)));
        if a.is_groupoid() {
            stack.push((a.source(x), b.source(y)));
            stack.push((a.target(x), b.target(y)));
        }
        for j in 0..=idx {
            let x2 = st.known[j];
            let y2 = st.map[x2];
            stack.push((a.op(x, x2), b.op(y, y2)));
            stack.push((a.op(x2, x), b.op(y2, y)));
            if a.has_mul() {
                stack.push((a.mul(x, x2), b.mul(y, y2)));
                stack.push((a.mul(x2, x), b.mul(y2, y)));
            }
        }
    }
    true
}

/// Visits every homomorphism `a → b` of the given kind whose generator
/// images satisfy `allowed(generator, image)`. The visitor returns `false`
/// to stop the search.
pub(crate) fn search(
    a: &Algebra,
    b: &Algebra,
    kind: HomKind,
    allowed: &dyn Fn(usize, usize) -> bool,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<()> {
    if a.variety() != b.variety() {
        return Err(Error::VarietyMismatch(a.variety(), b.variety()));
    }
    let injective = kind != HomKind::All;
    if injective && a.order() > b.order() || kind == HomKind::Isos && a.order() != b.order() {
        return Ok(());
    }
    let gens = a.generators();
    let gen_orders: Vec<usize> = gens.iter().map(|&g| a.element_order(g)).collect();
    let b_orders: Vec<usize> = b.elements().map(|y| b.element_order(y)).collect();
    let mut st = State { map: vec![UNSET; a.order()], known: Vec::new(), used: vec![false; b.order()] };
    extend(a, b, &mut st, 0, 0, injective);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        a: &Algebra,
        b: &Algebra,
        gens: &[usize],
        gen_orders: &[usize],
        b_orders: &[usize],
        injective: bool,
        allowed: &dyn Fn(usize, usize) -> bool,
        st: &State,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let Some((&g, rest)) = gens.split_first() else {
            return visit(&st.map);
        };
        let og = gen_orders[0];
        for y in b.elements() {
            let oy = b_orders[y];
            if !og.is_multiple_of(oy) || (injective && oy != og) || !allowed(g, y) {
                continue;
            }
            let mut next = st.clone();
            if extend(a, b, &mut next, g, y, injective)
                && !rec(a, b, rest, &gen_orders[1..], b_orders, injective, allowed, &next, visit)
            {
                return false;
            }
        }
        true
    }
    rec(a, b, &gens, &gen_orders, &b_orders, injective, allowed, &st, visit);
    Ok(())
}

/// All homomorphisms `a → b` of the given kind.
pub fn enumerate_homs(a: &Arc<Algebra>, b: &Arc<Algebra>, kind: HomKind) -> Result<Vec<Morphism>> {
    let mut out = Vec::new();
    search(a, b, kind, &|_, _| true, &mut |m| {
        out.push(Morphism::new_unchecked(a.clone(), b.clone(), m.to_vec()));
        true
    })?;
    Ok(out)
}

pub fn count_homs(a: &Algebra, b: &Algebra, kind: HomKind) -> Result<usize> {
    let mut count = 0;
    search(a, b, kind, &|_, _| true, &mut |_| {
        count += 1;
        true
    })?;
    Ok(count)
}

/// First homomorphism whose generator images satisfy `allowed` and which
/// passes `accept`.
pub fn find_hom(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    kind: HomKind,
    allowed: impl Fn(usize, usize) -> bool,
    mut accept: impl FnMut(&[usize]) -> bool,
) -> Result<Option<Morphism>> {
    let mut found = None;
    search(a, b, kind, &allowed, &mut |m| {
        if accept(m) {
            found = Some(m.to_vec());
            false
        } else {
            true
        }
    })?;
    Ok(found.map(|m| Morphism::new_unchecked(a.clone(), b.clone(), m)))
}

fn order_profile(a: &Algebra) -> Vec<usize> {
    let mut p = vec![0; a.order() + 1];
    for x in a.elements() {
        p[a.element_order(x)] += 1;
    }
    p
}

pub fn find_isomorphism(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Option<Morphism> {
    if a.variety() != b.variety() || a.order() != b.order() || order_profile(a) != order_profile(b) {
        return None;
    }
    find_hom(a, b, HomKind::Isos, |_, _| true, |_| true).ok().flatten()
}

pub fn is_isomorphic(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    find_isomorphism(a, b).is_some()
}
