//! Hopf-formula homology of `Z/m`-modules, where free modules are finite and
//! so presentations can be built and evaluated exactly.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{meet_radical, relative_commutator};
use crate::algebra::{
    builders::zmod_free, describe, is_isomorphic, kernel_pair, meet, quotient, subalgebra, Algebra, Morphism,
    Subobject, Variety,
};
use crate::error::{unsupported, Error, Result};
use crate::factorisation::{is_nfold_extension, rib_kernel_meet, NCube};
use crate::reflectors::Reflector;

/// Largest free module a presentation may use.
pub const MAX_PRESENTATION_ORDER: usize = 1024;

/// Largest algebra the kernel-pair recursion may build when cross-checking
/// the denominator; beyond it only the kernel-intersection form is used.
pub const RECURSION_BUDGET: usize = 1024;

/// An extension cube whose bottom vertex is the presented module and whose
/// other vertices are free.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub cube: NCube,
}

impl Presentation {
    pub fn dim(&self) -> usize {
        self.cube.dim()
    }

    pub fn top_rank(&self) -> usize {
        rank_of(self.cube.top())
    }
}

fn modulus(a: &Algebra) -> Result<u32> {
    match a.variety() {
        Variety::ZmodModule(m) => Ok(m),
        v => Err(unsupported("presentations", v)),
    }
}

fn rank_of(a: &Algebra) -> usize {
    let m = match a.variety() {
        Variety::ZmodModule(m) => m as usize,
        _ => return 0,
    };
    let (mut r, mut n) = (0, 1);
    while n < a.order() {
        n *= m;
        r += 1;
    }
    r
}

/// The free module on `gens` mapping onto `a`.
fn free_cover(a: &Arc<Algebra>, gens: &[usize]) -> Result<Morphism> {
    let m = modulus(a)? as usize;
    let size = (0..gens.len()).try_fold(1usize, |acc, _| acc.checked_mul(m).filter(|&n| n <= MAX_PRESENTATION_ORDER));
    if size.is_none() {
        return Err(Error::Budget(format!(
            "a presentation of {} needs (Z/{m})^{}, over {MAX_PRESENTATION_ORDER} elements",
            a.name(),
            gens.len()
        )));
    }
    let free = Arc::new(zmod_free(m as u32, gens.len()));
    let map = free
        .elements()
        .map(|x| {
            let mut acc = 0;
            let mut rest = x;
            for &g in gens {
                acc = a.op(acc, a.power(g, (rest % m) as u64));
                rest /= m;
            }
            acc
        })
        .collect();
    Morphism::new(free, a.clone(), map)
}

/// A generating set of minimal greedy size drawn at random, plus `extra`
/// redundant elements. Falls back to the greedy set after a few misses.
fn generating_set(a: &Algebra, extra: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let greedy = a.generators();
    let mut gens = (0..64)
        .map(|_| (0..greedy.len()).map(|_| rng.gen_range(0..a.order())).collect::<Vec<_>>())
        .find(|g| a.generated(g).is_whole())
        .unwrap_or(greedy);
    for _ in 0..extra {
        gens.push(rng.gen_range(0..a.order()));
    }
    gens
}

/// A presentation of dimension `n ∈ {1, 2}` with generators drawn from
/// `seed`. The first free cover gets `extra` redundant generators; later
/// covers stay minimal, since each extra rank multiplies the size of the
/// kernel-pair tower.
pub fn build_presentation(a: &Arc<Algebra>, n: usize, extra: usize, seed: u64) -> Result<Presentation> {
    modulus(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = free_cover(a, &generating_set(a, extra, &mut rng))?;
    let cube = match n {
        1 => NCube::arrow(p),
        2 => {
            let kp = kernel_pair(&p);
            let s = free_cover(&kp.object, &generating_set(&kp.object, 0, &mut rng))?;
            NCube::square(s.then(&kp.p1)?, s.then(&kp.p2)?, p.clone(), p)?
        }
        _ => return Err(Error::Precondition(format!("presentations of dimension {n} are not built"))),
    };
    debug_assert!(is_nfold_extension(&cube).unwrap_or(false));
    Ok(Presentation { cube })
}

#[derive(Clone, Debug)]
pub struct Homology {
    pub degree: usize,
    pub module: Arc<Algebra>,
    pub description: String,
    /// The two presentations the result was computed from.
    pub presentations: [Presentation; 2],
    /// Whether the kernel-pair recursion was run and matched, per presentation.
    pub cross_checked: [bool; 2],
}

/// Largest vertex order the kernel-pair recursion meets on `c`, from the
/// vertex orders alone: pullbacks of surjections have order `|X|²/|Y|`.
pub fn tower_peak(c: &NCube) -> usize {
    fn peak(orders: &[usize]) -> usize {
        let here = orders.iter().copied().max().unwrap_or(0);
        if orders.len() == 1 {
            return here;
        }
        let half = orders.len() / 2;
        let next: Vec<usize> =
            (0..half).map(|v| orders[v | half].saturating_mul(orders[v | half]) / orders[v]).collect();
        here.max(peak(&next))
    }
    let orders: Vec<usize> = (0..=c.top_index()).map(|v| c.vertex(v).order()).collect();
    peak(&orders)
}

/// `([P_top]_B ∩ ⋂ K[p_i]) / [P]_{n,B}` for one presentation. The
/// denominator is `B(⋂ K[p_i])`, which for protoadditive `B` equals the
/// kernel-pair commutator; the latter is recomputed and compared whenever
/// the recursion fits in [`RECURSION_BUDGET`].
fn hopf_quotient(b: &Reflector, p: &Presentation) -> Result<(Arc<Algebra>, bool)> {
    let c = &p.cube;
    let top = c.top();
    let numerator = meet(&*b.radical(top)?, &rib_kernel_meet(c));
    let denominator = meet_radical(b, c)?;
    let checked = tower_peak(c) <= RECURSION_BUDGET;
    if checked && *relative_commutator(b, c)?.as_subobject() != denominator {
        return Err(Error::Precondition(format!(
            "kernel-pair commutator and kernel-intersection radical differ for {b}"
        )));
    }
    if !denominator.is_subset_of(&numerator) {
        return Err(Error::Precondition("denominator is not contained in the numerator".into()));
    }
    let num = subalgebra(top, &numerator)?;
    let pos: Vec<usize> =
        denominator.members().iter().map(|&x| num.map().iter().position(|&y| y == x).expect("contained")).collect();
    let den = Subobject::from_members(num.dom().order(), pos);
    Ok((quotient(num.dom(), &den)?.cod().clone(), checked))
}

/// `H_degree(A, B)` for `degree ∈ {2, 3}`, computed from two independent
/// presentations which must give isomorphic modules. In degree 2 the second
/// presentation has one redundant generator; in degree 3 it only differs in
/// the generators drawn, because a redundant one already pushes the
/// kernel-pair tower past 10^5 elements.
pub fn hopf_homology(b: &Reflector, a: &Arc<Algebra>, degree: usize, seed: u64) -> Result<Homology> {
    if !(2..=3).contains(&degree) {
        return Err(Error::Precondition(format!("homology is computed in degrees 2 and 3, not {degree}")));
    }
    let n = degree - 1;
    let (p1, p2) = rayon::join(
        || build_presentation(a, n, 0, seed),
        || build_presentation(a, n, if n == 1 { 1 } else { 0 }, seed.wrapping_add(1)),
    );
    let (p1, p2) = (p1?, p2?);
    let (h1, h2) = rayon::join(|| hopf_quotient(b, &p1), || hopf_quotient(b, &p2));
    let ((h1, c1), (h2, c2)) = (h1?, h2?);
    if !is_isomorphic(&h1, &h2) {
        return Err(Error::Precondition(format!("presentations disagree: {} vs {}", describe(&h1), describe(&h2))));
    }
    Ok(Homology { degree, description: describe(&h1), module: h1, presentations: [p1, p2], cross_checked: [c1, c2] })
}
