//! Commutative n-cubes of morphisms.
//!
//! Vertices are indexed by bitmasks over `0..n`: bit `i` set means the vertex
//! sits on the domain side in direction `i`. The top vertex is all ones and
//! the edge `(v, i)` for `i ∈ v` goes from `v` to `v` with bit `i` cleared.
//! An n-cube is also a morphism between two (n−1)-cubes along its last
//! direction, which is how cubes are built and serialised.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{pullback, Algebra, Morphism, Pullback};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct NCube {
    dim: usize,
    vertices: Vec<Arc<Algebra>>,
    edges: Vec<Vec<Option<Morphism>>>,
}

fn drop_bit(v: usize, bit: usize) -> usize {
    (v & ((1 << bit) - 1)) | ((v >> (bit + 1)) << bit)
}

impl NCube {
    pub fn object(a: Arc<Algebra>) -> Self {
        NCube { dim: 0, vertices: vec![a], edges: vec![vec![]] }
    }

    pub fn arrow(f: Morphism) -> Self {
        NCube { dim: 1, vertices: vec![f.cod().clone(), f.dom().clone()], edges: vec![vec![None], vec![Some(f)]] }
    }

    /// The square with top `X`, ribs `a0: X → B` and `a1: X → C`, and
    /// `b: B → D`, `c: C → D`; requires `b ∘ a0 = c ∘ a1`.
    pub fn square(a0: Morphism, a1: Morphism, b: Morphism, c: Morphism) -> Result<Self> {
        let dom = NCube::arrow(a0);
        let cod = NCube::arrow(c);
        NCube::from_components(&dom, &cod, vec![b, a1])
    }

    /// The (n+1)-cube given by a morphism of n-cubes, `comps[v]: dom_v → cod_v`.
    pub fn from_components(dom: &NCube, cod: &NCube, comps: Vec<Morphism>) -> Result<Self> {
        let n = dom.dim;
        if cod.dim != n || comps.len() != 1 << n {
            return Err(Error::Precondition("cube morphism has mismatched dimensions".into()));
        }
        for (v, c) in comps.iter().enumerate() {
            if **c.dom() != *dom.vertices[v] || **c.cod() != *cod.vertices[v] {
                return Err(Error::Precondition(format!("component {v} has the wrong domain or codomain")));
            }
            for i in (0..n).filter(|i| v >> i & 1 == 1) {
                let w = v ^ (1 << i);
                let lhs = dom.edge(v, i).then(&comps[w])?;
                let rhs = c.then(cod.edge(v, i))?;
                if lhs.map() != rhs.map() {
                    return Err(Error::Precondition(format!("face at vertex {v}, direction {i} does not commute")));
                }
            }
        }
        let hi = 1 << n;
        let mut vertices = cod.vertices.clone();
        vertices.extend(dom.vertices.iter().cloned());
        let mut edges = Vec::with_capacity(2 * hi);
        for v in 0..hi {
            let mut e = cod.edges[v].clone();
            e.push(None);
            edges.push(e);
        }
        for (v, c) in comps.into_iter().enumerate() {
            let mut e = dom.edges[v].clone();
            // re-anchor components on the shared vertex objects
            e.push(Some(c.with_dom(vertices[hi + v].clone())?.with_cod(vertices[v].clone())?));
            edges.push(e);
        }
        Ok(NCube { dim: n + 1, vertices, edges })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn top_index(&self) -> usize {
        (1 << self.dim) - 1
    }

    pub fn top(&self) -> &Arc<Algebra> {
        &self.vertices[self.top_index()]
    }

    pub fn vertex(&self, v: usize) -> &Arc<Algebra> {
        &self.vertices[v]
    }

    /// The edge leaving `v` in direction `i`; `i` must be set in `v`.
    pub fn edge(&self, v: usize, i: usize) -> &Morphism {
        self.edges[v][i].as_ref().expect("edge leaves its vertex only when the bit is set")
    }

    /// The initial ribs `a_i: A_top → A_{top − i}`.
    pub fn ribs(&self) -> Vec<Morphism> {
        (0..self.dim).map(|i| self.edge(self.top_index(), i).clone()).collect()
    }

    /// The composite map from `v` down to `w ⊆ v`.
    pub fn path(&self, v: usize, w: usize) -> Morphism {
        assert_eq!(v & w, w, "target vertex must lie below the source");
        let mut f = Morphism::identity(&self.vertices[v]);
        let mut cur = v;
        for i in 0..self.dim {
            if (v ^ w) >> i & 1 == 1 {
                f = f.then(self.edge(cur, i)).expect("cube edges compose");
                cur ^= 1 << i;
            }
        }
        f
    }

    /// The (n−1)-cube of vertices with bit `dir` equal to `side`.
    pub fn face(&self, dir: usize, side: bool) -> NCube {
        let n = self.dim;
        let mut vertices = Vec::with_capacity(1 << (n - 1));
        let mut edges = Vec::with_capacity(1 << (n - 1));
        for v in (0..1usize << n).filter(|v| (v >> dir & 1 == 1) == side) {
            debug_assert_eq!(drop_bit(v, dir), vertices.len());
            vertices.push(self.vertices[v].clone());
            let e: Vec<Option<Morphism>> = (0..n).filter(|&i| i != dir).map(|i| self.edges[v][i].clone()).collect();
            edges.push(e);
        }
        NCube { dim: n - 1, vertices, edges }
    }

    /// Domain face, codomain face and components along the last direction.
    pub fn split_last(&self) -> (NCube, NCube, Vec<Morphism>) {
        let last = self.dim - 1;
        let comps = (0..1usize << last).map(|v| self.edge(v | 1 << last, last).clone()).collect();
        (self.face(last, true), self.face(last, false), comps)
    }

    /// The same cube with the top vertex replaced along a surjection
    /// `q: A_top → Q` through which every rib factors.
    pub fn with_top_quotient(&self, q: &Morphism) -> Result<NCube> {
        let top = self.top_index();
        if **q.dom() != **self.top() {
            return Err(Error::Precondition("quotient must start at the top vertex".into()));
        }
        let mut c = self.clone();
        c.vertices[top] = q.cod().clone();
        for i in 0..self.dim {
            let rib = crate::algebra::factor_through(q, self.edge(top, i))?;
            c.edges[top][i] = Some(rib.with_cod(c.vertices[top ^ (1 << i)].clone())?);
        }
        Ok(c)
    }

    /// The morphism of cubes `self → other` that is `q` at the top and the
    /// identity elsewhere, as an (n+1)-cube.
    pub fn top_map(&self, other: &NCube, q: &Morphism) -> Result<NCube> {
        let top = self.top_index();
        let comps =
            (0..=top).map(|v| if v == top { q.clone() } else { Morphism::identity(&self.vertices[v]) }).collect();
        NCube::from_components(self, other, comps)
    }

    /// Whether every face commutes, recomputed from the edges.
    pub fn commutes(&self) -> bool {
        let top = self.top_index();
        (0..=top).all(|v| {
            (0..self.dim).filter(|i| v >> i & 1 == 1).all(|i| {
                (0..self.dim).filter(|&j| j != i && v >> j & 1 == 1).all(|j| {
                    let a = self.edge(v, i).then(self.edge(v ^ (1 << i), j)).unwrap();
                    let b = self.edge(v, j).then(self.edge(v ^ (1 << j), i)).unwrap();
                    a.map() == b.map()
                })
            })
        })
    }
}

impl PartialEq for NCube {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.vertices.iter().zip(&other.vertices).all(|(a, b)| **a == **b)
            && self.edges.iter().zip(&other.edges).all(|(x, y)| {
                x.iter().zip(y).all(|(f, g)| f.as_ref().map(Morphism::map) == g.as_ref().map(Morphism::map))
            })
    }
}

impl fmt::Display for NCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-cube over {}", self.dim, self.top().name())?;
        for r in self.ribs() {
            write!(f, ", {} → {}", r.dom().name(), r.cod().name())?;
        }
        Ok(())
    }
}

/// Pointwise pullback of two cube morphisms with a common codomain face,
/// given as cubes whose last direction is the morphism. Returns the pullback
/// cube and its two projections as cube morphisms.
pub fn pullback_cubes(f: &NCube, g: &NCube) -> Result<(NCube, NCube, NCube)> {
    let (fd, fc, fcomps) = f.split_last();
    let (gd, gc, gcomps) = g.split_last();
    if fc != gc {
        return Err(Error::Precondition("cube morphisms do not share a codomain".into()));
    }
    let k = fd.dim;
    let pbs: Vec<Pullback> = fcomps.iter().zip(&gcomps).map(|(a, b)| pullback(a, b)).collect::<Result<_>>()?;
    let mut vertices = Vec::with_capacity(1 << k);
    let mut edges = Vec::with_capacity(1 << k);
    for (v, pb) in pbs.iter().enumerate() {
        vertices.push(pb.object.clone());
        let mut e = vec![None; k];
        for i in (0..k).filter(|i| v >> i & 1 == 1) {
            let w = v ^ (1 << i);
            let u = pb.p1.then(fd.edge(v, i))?;
            let t = pb.p2.then(gd.edge(v, i))?;
            e[i] = Some(pbs[w].mediate(&u, &t)?);
        }
        edges.push(e);
    }
    let p = NCube { dim: k, vertices, edges };
    let p1 = NCube::from_components(&p, &fd, pbs.iter().map(|pb| pb.p1.clone()).collect())?;
    let p2 = NCube::from_components(&p, &gd, pbs.iter().map(|pb| pb.p2.clone()).collect())?;
    Ok((p, p1, p2))
}

/// Recursive extension test: surjective arrows in dimension one; in higher
/// dimension, viewed as a square of (n−2)-cubes over the last two directions,
/// all four sides and the comparison to the pullback are (n−1)-extensions.
pub fn is_nfold_extension(c: &NCube) -> Result<bool> {
    match c.dim {
        0 => Ok(true),
        1 => Ok(c.edge(1, 0).is_surjective()),
        n => {
            let x = c.face(n - 1, true);
            let y = c.face(n - 1, false);
            let a1 = c.face(n - 2, true);
            let a0 = c.face(n - 2, false);
            for side in [&x, &y, &a1, &a0] {
                if !is_nfold_extension(side)? {
                    return Ok(false);
                }
            }
            // x: X1 → X0 along direction n−2; pull the codomain side y back along a0
            let (p, p1, p2) = pullback_cubes(&a0, &y)?;
            let (x1, _, _) = x.split_last();
            let (_, _, x_comps) = x.split_last();
            let (_, _, a1_comps) = a1.split_last();
            let k = p.dim;
            let comps = (0..1usize << k)
                .map(|v| {
                    let pb = Pullback {
                        object: p.vertex(v).clone(),
                        p1: p1.edge(v | 1 << k, k).clone(),
                        p2: p2.edge(v | 1 << k, k).clone(),
                    };
                    pb.mediate(&x_comps[v], &a1_comps[v])
                })
                .collect::<Result<Vec<_>>>()?;
            let comparison = NCube::from_components(&x1, &p, comps)?;
            is_nfold_extension(&comparison)
        }
    }
}
