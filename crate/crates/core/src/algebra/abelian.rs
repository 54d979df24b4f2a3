use super::Algebra;

/// Primary invariants of an abelian base group: the prime powers `pᵉ` of its
/// cyclic factors, sorted ascending. Empty for the trivial group.
pub fn abelian_invariants(a: &Algebra) -> Option<Vec<usize>> {
    if !a.is_commutative_base() {
        return None;
    }
    let n = a.order();
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m.is_multiple_of(p) {
            primes.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    let mut out = Vec::new();
    for p in primes {
        // r[k] = log_p |{x : pᵏx = 0}|
        let mut r = vec![0u32];
        let mut k = 1u32;
        loop {
            let pk = (p as u64).pow(k);
            let count = a.elements().filter(|&x| a.power(x, pk) == 0).count();
            let mut e = 0;
            let mut c = count;
            while c % p == 0 && c > 1 {
                c /= p;
                e += 1;
            }
            r.push(e);
            if r[k as usize] == r[k as usize - 1] {
                break;
            }
            k += 1;
        }
        // number of factors of order ≥ pᵏ is r[k] − r[k−1]
        let at_least: Vec<u32> = (1..r.len()).map(|k| r[k] - r[k - 1]).collect();
        for k in 0..at_least.len() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..(at_least[k] - next) {
                out.push(p.pow(k as u32 + 1));
            }
        }
    }
    out.sort_unstable();
    Some(out)
}

/// Isomorphism type of an abelian base group such as `C2×C4`, or the
/// algebra's own name otherwise.
pub fn describe(a: &Algebra) -> String {
    match abelian_invariants(a) {
        Some(inv) if inv.is_empty() => "0".to_string(),
        Some(inv) => inv.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join("×"),
        None => format!("{} (order {})", a.name(), a.order()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::*;

    #[test]
    fn invariants_of_small_groups() {
        assert_eq!(describe(&cyclic(1)), "0");
        assert_eq!(describe(&cyclic(12)), "C3×C4");
        assert_eq!(describe(&zmod_module(8, &[2, 4]).unwrap()), "C2×C4");
        assert_eq!(describe(&zmod_free(4, 2)), "C4×C4");
        let v = direct_product(&cyclic(2), &cyclic(2)).unwrap();
        assert_eq!(describe(&direct_product(&v, &cyclic(8)).unwrap()), "C2×C2×C8");
        assert!(abelian_invariants(&symmetric(3)).is_none());
    }
}
