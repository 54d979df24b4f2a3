//! Constructors for the algebra families used throughout the crate.
//!
//! Every builder validates the identities of its variety; the panicking
//! variants are only used where the construction is known to be valid.

use super::{Algebra, Variety};
use crate::error::{Error, Result};

fn table(n: usize, f: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut t = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            t.push(f(a, b));
        }
    }
    t
}

fn inverses(n: usize, op: &[usize]) -> Result<Vec<usize>> {
    (0..n)
        .map(|a| {
            (0..n).find(|&b| op[a * n + b] == 0).ok_or_else(|| Error::InvalidStructure(format!("{a} has no inverse")))
        })
        .collect()
}

/// Group from a multiplication function on `0..n` with identity `0`.
pub fn group_from_fn(name: impl Into<String>, n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Algebra> {
    let op = table(n, f);
    let inv = inverses(n, &op)?;
    Algebra::new(Variety::Group, name, op, inv, None, None)
}

pub fn cyclic(n: usize) -> Algebra {
    group_from_fn(format!("C{n}"), n, |a, b| (a + b) % n).expect("cyclic group")
}

/// Dihedral group of order `2n`; element `i + n·j` is `rⁱsʲ`.
pub fn dihedral(n: usize) -> Algebra {
    group_from_fn(format!("D{n}"), 2 * n, |x, y| {
        let (i, j, k, l) = (x % n, x / n, y % n, y / n);
        let r = if j == 0 { (i + k) % n } else { (i + n - k) % n };
        r + n * ((j + l) % 2)
    })
    .expect("dihedral group")
}

/// Dicyclic group of order `4m`; `dicyclic(2)` is the quaternion group.
/// Element `i + 2m·j` is `aⁱxʲ` with `x² = aᵐ` and `xax⁻¹ = a⁻¹`.
pub fn dicyclic(m: usize) -> Algebra {
    let n = 2 * m;
    let name = if m == 2 { "Q8".to_string() } else { format!("Dic{m}") };
    group_from_fn(name, 2 * n, |x, y| {
        let (i, j, k, l) = (x % n, x / n, y % n, y / n);
        if j == 0 {
            (i + k) % n + n * l
        } else if l == 0 {
            (i + n - k) % n + n
        } else {
            (i + n - k + m) % n
        }
    })
    .expect("dicyclic group")
}

pub fn quaternion8() -> Algebra {
    dicyclic(2)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Symmetric group on `n ≤ 5` points, permutations in lexicographic order.
pub fn symmetric(n: usize) -> Algebra {
    assert!((1..=5).contains(&n), "symmetric group degree out of range");
    let perms = permutations(n);
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
    group_from_fn(format!("S{n}"), perms.len(), |a, b| {
        let c: Vec<usize> = (0..n).map(|i| perms[a][perms[b][i]]).collect();
        index(&c)
    })
    .expect("symmetric group")
}

/// `N ⋊ H` for groups, with `action(h, x)` the automorphism of `N` by `h`.
/// Element `x + |N|·h` is the pair `(x, h)`.
pub fn semidirect(
    name: impl Into<String>,
    n: &Algebra,
    h: &Algebra,
    action: impl Fn(usize, usize) -> usize,
) -> Result<Algebra> {
    if n.variety() != Variety::Group || h.variety() != Variety::Group {
        return Err(crate::error::unsupported("semidirect", "non-group factors"));
    }
    let k = n.order();
    for g in h.elements() {
        for x in n.elements() {
            for y in n.elements() {
                if action(g, n.op(x, y)) != n.op(action(g, x), action(g, y)) {
                    return Err(Error::InvalidStructure("action is not by endomorphisms".into()));
                }
            }
        }
    }
    group_from_fn(name, k * h.order(), |p, q| {
        let (x, g, y, g2) = (p % k, p / k, q % k, q / k);
        n.op(x, action(g, y)) + k * h.op(g, g2)
    })
}

/// `(C2 × C2) ⋊ C3`, the alternating group of degree four.
pub fn alternating4() -> Algebra {
    let v = direct_product(&cyclic(2), &cyclic(2)).expect("Klein group");
    let rot = |g: usize, x: usize| {
        let mut x = x;
        for _ in 0..g {
            x = [0, 2, 3, 1][x];
        }
        x
    };
    semidirect("A4", &v, &cyclic(3), rot).expect("A4")
}

/// Direct product, element `a + |A|·b` is `(a, b)`.
pub fn direct_product(a: &Algebra, b: &Algebra) -> Result<Algebra> {
    if a.variety() != b.variety() {
        return Err(Error::VarietyMismatch(a.variety(), b.variety()));
    }
    let k = a.order();
    let n = k * b.order();
    let split = |x: usize| (x % k, x / k);
    let op = table(n, |x, y| {
        let ((a1, b1), (a2, b2)) = (split(x), split(y));
        a.op(a1, a2) + k * b.op(b1, b2)
    });
    let inv = (0..n).map(|x| a.inv(x % k) + k * b.inv(x / k)).collect();
    let mul = a.has_mul().then(|| {
        table(n, |x, y| {
            let ((a1, b1), (a2, b2)) = (split(x), split(y));
            a.mul(a1, a2) + k * b.mul(b1, b2)
        })
    });
    let ends = a.is_groupoid().then(|| {
        [
            (0..n).map(|x| a.source(x % k) + k * b.source(x / k)).collect(),
            (0..n).map(|x| a.target(x % k) + k * b.target(x / k)).collect(),
        ]
    });
    Algebra::from_parts(a.variety(), format!("{}×{}", a.name(), b.name()), op, inv, mul, ends)
}

/// The ring `Z/n`.
pub fn zring(n: usize) -> Algebra {
    ring_from_fn(Variety::CommRing, format!("Z/{n}"), n, |a, b| (a + b) % n, |a, b| (a * b) % n).expect("Z/n")
}

pub fn ring_from_fn(
    variety: Variety,
    name: impl Into<String>,
    n: usize,
    add: impl Fn(usize, usize) -> usize,
    mul: impl Fn(usize, usize) -> usize,
) -> Result<Algebra> {
    ring_from_tables(variety, name, table(n, add), table(n, mul))
}

/// Ring of the given variety from addition and multiplication tables.
pub fn ring_from_tables(
    variety: Variety,
    name: impl Into<String>,
    add: Vec<usize>,
    mul: Vec<usize>,
) -> Result<Algebra> {
    if !variety.is_ring() {
        return Err(crate::error::unsupported("ring-from-table", variety));
    }
    let n = (add.len() as f64).sqrt() as usize;
    if n * n != add.len() {
        return Err(Error::InvalidStructure("addition table is not square".into()));
    }
    let neg = inverses(n, &add)?;
    Algebra::new(variety, name, add, neg, Some(mul), None)
}

/// The abelian group `a` with identically zero multiplication.
pub fn zero_ring(a: &Algebra, variety: Variety) -> Result<Algebra> {
    let n = a.order();
    ring_from_tables(variety, format!("0·{}", a.name()), a.op_table().to_vec(), vec![0; n * n])
}

/// The order-4 ring on `C2 × C2` with `(a,b)(c,d) = (ac, bc + bd)`; element
/// `a + 2b` is `(a, b)`.
pub fn split_square_ring() -> Algebra {
    ring_from_fn(
        Variety::NonassocRing,
        "C2⋉C2",
        4,
        |x, y| x ^ y,
        |x, y| {
            let (a, b, c, d) = (x & 1, x >> 1, y & 1, y >> 1);
            (a * c) | ((b * c + b * d) % 2) << 1
        },
    )
    .expect("split square ring")
}

/// `F2[x]/(x²)`; element `a + 2b` is `a + bx`.
pub fn dual_numbers() -> Algebra {
    ring_from_fn(
        Variety::CommRing,
        "F2[x]/(x²)",
        4,
        |x, y| x ^ y,
        |x, y| {
            let (a, b, c, d) = (x & 1, x >> 1, y & 1, y >> 1);
            (a * c) | ((a * d + b * c) % 2) << 1
        },
    )
    .expect("dual numbers")
}

/// The field with four elements; element `a + 2b` is `a + bw` with `w² = w + 1`.
pub fn field4() -> Algebra {
    ring_from_fn(
        Variety::CommRing,
        "F4",
        4,
        |x, y| x ^ y,
        |x, y| {
            let (a, b, c, d) = (x & 1, x >> 1, y & 1, y >> 1);
            let (e0, e1, e2) = (a * c, a * d + b * c, b * d);
            ((e0 + e2) % 2) | ((e1 + e2) % 2) << 1
        },
    )
    .expect("F4")
}

/// Reinterprets `a` in another variety, dropping or zero-filling structure
/// as needed and rechecking every identity.
pub fn as_variety(a: &Algebra, variety: Variety) -> Result<Algebra> {
    let mul = if variety.is_ring() {
        Some(a.mul_table().map(|m| m.to_vec()).unwrap_or_else(|| vec![0; a.order() * a.order()]))
    } else {
        None
    };
    let ends = if variety == Variety::GpdInGroup {
        Some(a.ends_tables().cloned().unwrap_or_else(|| {
            let id: Vec<usize> = a.elements().collect();
            [id.clone(), id]
        }))
    } else {
        None
    };
    Algebra::new(variety, a.name(), a.op_table().to_vec(), a.inv_table().to_vec(), mul, ends)
}

/// `Z/d` as a `Z/m`-module; requires `d | m`.
pub fn zmod_cyclic(m: u32, d: usize) -> Result<Algebra> {
    if d == 0 || !(m as usize).is_multiple_of(d) {
        return Err(Error::Precondition(format!("{d} does not divide {m}")));
    }
    as_variety(&cyclic(d), Variety::ZmodModule(m)).map(|a| a.with_name(format!("C{d}")))
}

/// `Z/d1 × … × Z/dk` as a `Z/m`-module.
pub fn zmod_module(m: u32, ds: &[usize]) -> Result<Algebra> {
    let mut acc = zmod_cyclic(m, 1)?.with_name("0");
    for (i, &d) in ds.iter().enumerate() {
        let c = zmod_cyclic(m, d)?;
        acc = if i == 0 { c } else { direct_product(&acc, &c)? };
    }
    Ok(acc)
}

/// The free `Z/m`-module of rank `r`; element `Σ xᵢ mⁱ` is `(x₀, …)`.
pub fn zmod_free(m: u32, r: usize) -> Algebra {
    zmod_module(m, &vec![m as usize; r]).expect("free module")
}

/// Discrete groupoid: every arrow is an identity.
pub fn gpd_discrete(g: &Algebra) -> Result<Algebra> {
    if g.variety() != Variety::Group {
        return Err(crate::error::unsupported("gpd-discrete", g.variety()));
    }
    as_variety(g, Variety::GpdInGroup).map(|a| a.with_name(format!("Disc({})", g.name())))
}

/// Indiscrete groupoid on `G`: arrows `G × G`, source and target the projections.
pub fn gpd_indiscrete(g: &Algebra) -> Result<Algebra> {
    if g.variety() != Variety::Group {
        return Err(crate::error::unsupported("gpd-indiscrete", g.variety()));
    }
    let p = direct_product(g, g)?;
    let k = g.order();
    let s = p.elements().map(|x| x % k + k * (x % k)).collect();
    let t = p.elements().map(|x| x / k + k * (x / k)).collect();
    Algebra::new(
        Variety::GpdInGroup,
        format!("Indisc({})", g.name()),
        p.op_table().to_vec(),
        p.inv_table().to_vec(),
        None,
        Some([s, t]),
    )
}

/// One-object groupoid on an abelian group `H`.
pub fn gpd_one_object(h: &Algebra) -> Result<Algebra> {
    if h.variety() != Variety::Group {
        return Err(crate::error::unsupported("gpd-one-object", h.variety()));
    }
    let zero = vec![0; h.order()];
    Algebra::new(
        Variety::GpdInGroup,
        format!("B({})", h.name()),
        h.op_table().to_vec(),
        h.inv_table().to_vec(),
        None,
        Some([zero.clone(), zero]),
    )
}

/// Parses a family string such as `cyclic:4`, `dihedral:4`, `zring:12`,
/// `module:4:2x4`, `free:4:2`, `product:cyclic:2*cyclic:2` or
/// `gpd-indiscrete:symmetric:3`.
pub fn from_spec(spec: &str) -> Result<Algebra> {
    let bad = || Error::Format(format!("unknown algebra `{spec}`"));
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let a = match head {
        "cyclic" => cyclic(num(rest)?.max(1)),
        "dihedral" => dihedral(num(rest)?.max(1)),
        "dicyclic" => dicyclic(num(rest)?.max(1)),
        "quaternion" => quaternion8(),
        "symmetric" => {
            let n = num(rest)?;
            if !(1..=5).contains(&n) {
                return Err(bad());
            }
            symmetric(n)
        }
        "alternating" if rest == "4" => alternating4(),
        "zring" => zring(num(rest)?.max(1)),
        "zero-ring" => zero_ring(&cyclic(num(rest)?.max(1)), Variety::CommRing)?,
        "split-square-ring" => split_square_ring(),
        "dual-numbers" => dual_numbers(),
        "field4" => field4(),
        "module" => {
            let (m, ds) = rest.split_once(':').ok_or_else(bad)?;
            let ds = ds.split('x').map(num).collect::<Result<Vec<_>>>()?;
            zmod_module(num(m)? as u32, &ds)?
        }
        "free" => {
            let (m, r) = rest.split_once(':').ok_or_else(bad)?;
            zmod_free(num(m)? as u32, num(r)?)
        }
        "product" => {
            let mut parts = rest.split('*');
            let mut acc = from_spec(parts.next().ok_or_else(bad)?)?;
            for p in parts {
                acc = direct_product(&acc, &from_spec(p)?)?;
            }
            acc
        }
        "gpd-discrete" => gpd_discrete(&from_spec(rest)?)?,
        "gpd-indiscrete" => gpd_indiscrete(&from_spec(rest)?)?,
        "gpd-one-object" => gpd_one_object(&from_spec(rest)?)?,
        "as" => {
            let (v, inner) = rest.split_once('/').ok_or_else(bad)?;
            as_variety(&from_spec(inner)?, v.parse()?)?
        }
        _ => return Err(bad()),
    };
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_orders() {
        assert_eq!(cyclic(7).order(), 7);
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(symmetric(3).order(), 6);
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(quaternion8().order(), 8);
        assert_eq!(dicyclic(3).order(), 12);
        assert_eq!(alternating4().order(), 12);
        assert_eq!(zmod_free(4, 2).order(), 16);
        assert_eq!(gpd_indiscrete(&symmetric(3)).unwrap().order(), 36);
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = quaternion8();
        let invol = q.elements().filter(|&x| q.element_order(x) == 2).count();
        assert_eq!(invol, 1);
        assert!(!q.is_commutative_base());
    }

    #[test]
    fn split_square_ring_is_nonassociative_and_not_boolean() {
        let r = split_square_ring();
        // (1,1)·(1,1) = (1,0)
        assert_eq!(r.mul(3, 3), 1);
        let assoc = (0..4).all(|a| (0..4).all(|b| (0..4).all(|c| r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c)))));
        assert!(!assoc);
        assert!(as_variety(&r, Variety::CommRing).is_err());
    }

    #[test]
    fn one_object_groupoid_needs_abelian_group() {
        assert!(gpd_one_object(&cyclic(3)).is_ok());
        assert!(gpd_one_object(&symmetric(3)).is_err());
    }

    #[test]
    fn zero_rings_satisfy_rng_star() {
        assert!(zero_ring(&cyclic(4), Variety::RngStar).is_ok());
        assert!(as_variety(&zring(2), Variety::RngStar).is_ok());
        assert!(as_variety(&zring(3), Variety::RngStar).is_err());
    }

    #[test]
    fn family_strings_parse() {
        assert_eq!(from_spec("module:4:2x4").unwrap().order(), 8);
        assert_eq!(from_spec("product:cyclic:2*cyclic:2*cyclic:2").unwrap().order(), 8);
        assert_eq!(from_spec("gpd-discrete:symmetric:3").unwrap().variety(), Variety::GpdInGroup);
        assert_eq!(from_spec("as:rng-star/zring:2").unwrap().variety(), Variety::RngStar);
        assert!(from_spec("nonsense:3").is_err());
    }
}
