//! Integer-side combinatorics: the characteristic-part split n = p^k·m and
//! the q-cyclotomic cosets modulo m.

use crate::arith::{gcd, is_prime, mul_mod};
use crate::error::{Error, Result};

/// n written as p^k·m with gcd(m, p) = 1.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PPartSplit {
    pub n: u64,
    pub p: u64,
    pub k: u32,
    pub m: u64,
}

/// One q-orbit {k·q^i mod m}: its minimal representative, sorted members,
/// size d_t, and the order m_t = m/gcd(m, k_t) of θ^(k_t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicCoset {
    pub representative: u64,
    pub members: Vec<u64>,
    pub size: u64,
    pub subgroup_order: u64,
}

/// Writes q as p^e for a prime p, or fails with `InvalidQ`.
pub fn prime_power_split(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::InvalidQ(q));
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        // q itself is prime
        return Ok((q, 1));
    }
    let mut e = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::InvalidQ(q));
    }
    Ok((p, e))
}

/// Maximal k with p^k | n, and the cofactor m = n / p^k.
pub fn p_part_split(n: u64, p: u64) -> Result<PPartSplit> {
    if !is_prime(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let mut k = 0;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    Ok(PPartSplit { n, p, k, m })
}

/// The smallest d ≥ 1 with q^d ≡ 1 (mod m); 1 when m = 1.
pub fn multiplicative_order(q: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if m == 1 {
        return Ok(1);
    }
    if gcd(q % m, m) != 1 {
        return Err(Error::NotCoprime { m, q });
    }
    let q0 = q % m;
    let mut cur = q0;
    let mut d = 1u64;
    while cur != 1 {
        cur = mul_mod(cur, q0, m);
        d += 1;
    }
    Ok(d)
}

/// The q-cyclotomic cosets modulo m, sorted by (minimal) representative.
/// They partition {0, …, m−1}; the first is always {0}.
pub fn cyclotomic_cosets(q: u64, m: u64) -> Result<Vec<CyclotomicCoset>> {
    if m == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if m > 1 && gcd(q % m, m) != 1 {
        return Err(Error::NotCoprime { m, q });
    }
    let mut seen = vec![false; m as usize];
    let mut cosets = Vec::new();
    for start in 0..m {
        if seen[start as usize] {
            continue;
        }
        // ascending sweep: the first unvisited element of an orbit is its minimum
        let mut members = Vec::new();
        let mut cur = start;
        loop {
            seen[cur as usize] = true;
            members.push(cur);
            cur = mul_mod(cur, q % m, m);
            if cur == start {
                break;
            }
        }
        members.sort_unstable();
        let size = members.len() as u64;
        let subgroup_order = m / gcd(m, start);
        cosets.push(CyclotomicCoset { representative: start, members, size, subgroup_order });
    }
    Ok(cosets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_examples() {
        assert_eq!(p_part_split(12, 2).unwrap(), PPartSplit { n: 12, p: 2, k: 2, m: 3 });
        assert_eq!(p_part_split(7, 2).unwrap(), PPartSplit { n: 7, p: 2, k: 0, m: 7 });
        assert_eq!(p_part_split(8, 2).unwrap(), PPartSplit { n: 8, p: 2, k: 3, m: 1 });
    }

    #[test]
    fn split_recombines() {
        for n in 1..300u64 {
            for p in [2u64, 3, 5, 7] {
                let s = p_part_split(n, p).unwrap();
                assert_eq!(s.p.pow(s.k) * s.m, n);
                assert_eq!(crate::arith::gcd(s.m, p), 1);
            }
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(2, 1).unwrap(), 1);
        assert_eq!(multiplicative_order(2, 5).unwrap(), 4);
        assert!(matches!(multiplicative_order(2, 4), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn coset_examples() {
        let c = cyclotomic_cosets(2, 7).unwrap();
        let members: Vec<Vec<u64>> = c.iter().map(|x| x.members.clone()).collect();
        assert_eq!(members, vec![vec![0], vec![1, 2, 4], vec![3, 5, 6]]);

        let c = cyclotomic_cosets(2, 1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].members, vec![0]);
        assert_eq!(c[0].subgroup_order, 1);
        assert_eq!(c[0].size, 1);

        let c = cyclotomic_cosets(3, 4).unwrap();
        let members: Vec<Vec<u64>> = c.iter().map(|x| x.members.clone()).collect();
        assert_eq!(members, vec![vec![0], vec![1, 3], vec![2]]);
    }

    #[test]
    fn cosets_partition_and_sizes_match_orders() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for m in 1..=60u64 {
                if m > 1 && crate::arith::gcd(m, q) != 1 {
                    continue;
                }
                let cosets = cyclotomic_cosets(q, m).unwrap();
                let total: u64 = cosets.iter().map(|c| c.size).sum();
                assert_eq!(total, m);
                let mut all: Vec<u64> = cosets.iter().flat_map(|c| c.members.clone()).collect();
                all.sort_unstable();
                assert_eq!(all, (0..m).collect::<Vec<_>>());
                assert_eq!(cosets[0].members, vec![0]);
                for c in &cosets {
                    assert_eq!(c.representative, c.members[0]);
                    assert_eq!(c.size, multiplicative_order(q, c.subgroup_order).unwrap());
                }
            }
        }
    }

    #[test]
    fn prime_power_recognition() {
        assert_eq!(prime_power_split(2).unwrap(), (2, 1));
        assert_eq!(prime_power_split(9).unwrap(), (3, 2));
        assert_eq!(prime_power_split(8).unwrap(), (2, 3));
        assert_eq!(prime_power_split(7).unwrap(), (7, 1));
        assert!(matches!(prime_power_split(6), Err(Error::InvalidQ(6))));
        assert!(matches!(prime_power_split(12), Err(Error::InvalidQ(12))));
        assert!(matches!(prime_power_split(1), Err(Error::InvalidQ(1))));
        assert!(matches!(prime_power_split(0), Err(Error::InvalidQ(0))));
    }
}
