//! Property tests for the algebraic layers: field axioms on sampled triples,
//! trace facts checked exhaustively on small fields, coset combinatorics
//! across a modulus sweep, and cross-checks between the decision procedure
//! and the brute-force oracle at small sizes.

use proptest::prelude::*;

use cyclocover::criterion::h_zero;
use cyclocover::cyclotomic::{cyclotomic_cosets, multiplicative_order, p_part_split};
use cyclocover::finite_field::{
    build_field, element_of_order, extension_of, multiplicative_generator, BaseField, Field,
    FieldElement, DEFAULT_FIELD_ORDER_BOUND,
};
use cyclocover::oracle::{exists_covering_hyperplane, OracleBudget};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Fields of order ≤ 2^16 exercised by the axiom tests, including towers
/// with a non-prime base field.
fn axiom_pool() -> Vec<Field> {
    let mut pool = vec![
        build_field(2, 1, 1).unwrap(),
        build_field(2, 1, 4).unwrap(),
        build_field(2, 1, 8).unwrap(),
        build_field(2, 1, 16).unwrap(),
        build_field(3, 1, 2).unwrap(),
        build_field(3, 1, 4).unwrap(),
        build_field(5, 1, 2).unwrap(),
        build_field(7, 1, 2).unwrap(),
        build_field(13, 1, 1).unwrap(),
    ];
    let f4 = BaseField::new(2, 2).unwrap();
    pool.push(extension_of(&f4, 2, DEFAULT_FIELD_ORDER_BOUND).unwrap());
    pool.push(extension_of(&f4, 3, DEFAULT_FIELD_ORDER_BOUND).unwrap());
    let f9 = BaseField::new(3, 2).unwrap();
    pool.push(extension_of(&f9, 2, DEFAULT_FIELD_ORDER_BOUND).unwrap());
    let f8 = BaseField::new(2, 3).unwrap();
    pool.push(extension_of(&f8, 2, DEFAULT_FIELD_ORDER_BOUND).unwrap());
    pool
}

fn element_at(field: &Field, rank: u64) -> FieldElement {
    let q = field.base().q();
    let d = field.ext_degree() as usize;
    let mut rank = rank % field.order();
    let mut coeffs = vec![0u64; d];
    for slot in coeffs.iter_mut() {
        *slot = rank % q;
        rank /= q;
    }
    field.element(coeffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(idx in 0usize..13, ra in any::<u64>(), rb in any::<u64>(), rc in any::<u64>()) {
        let pool = axiom_pool();
        let field = &pool[idx % pool.len()];
        let a = element_at(field, ra);
        let b = element_at(field, rb);
        let c = element_at(field, rc);

        // additive group
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&field.zero()).unwrap(), a.clone());
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());

        // multiplicative structure
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&field.one()).unwrap(), a.clone());

        // distributivity
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );

        // inverses and the group order
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
            prop_assert!(a.pow(field.order() - 1).is_one());
        }

        // subtraction is addition of the negation
        prop_assert_eq!(a.sub(&b).unwrap(), a.add(&b.neg()).unwrap());
    }

    #[test]
    fn trace_is_linear(idx in 0usize..13, ra in any::<u64>(), rb in any::<u64>(), s in any::<u64>()) {
        let pool = axiom_pool();
        let field = &pool[idx % pool.len()];
        let base = field.base();
        let a = element_at(field, ra);
        let b = element_at(field, rb);
        let code = s % base.q();
        prop_assert_eq!(
            a.add(&b).unwrap().trace_to_base(),
            base.add(a.trace_to_base(), b.trace_to_base())
        );
        prop_assert_eq!(a.scale(code).trace_to_base(), base.mul(code, a.trace_to_base()));
        // the trace lies in the base field: Tr(x)^q = Tr(x)
        let t = a.trace_to_base();
        prop_assert_eq!(base.pow(t, base.q()), t);
    }
}

/// Exhaustive trace facts on every field of order ≤ 2^12 in a mixed pool.
#[test]
fn trace_frobenius_invariance_and_surjectivity() {
    let mut pool = vec![
        build_field(2, 1, 2).unwrap(),
        build_field(2, 1, 6).unwrap(),
        build_field(2, 1, 10).unwrap(),
        build_field(2, 1, 12).unwrap(),
        build_field(3, 1, 6).unwrap(),
        build_field(5, 1, 4).unwrap(),
        build_field(7, 1, 3).unwrap(),
        build_field(11, 1, 2).unwrap(),
    ];
    let f4 = BaseField::new(2, 2).unwrap();
    pool.push(extension_of(&f4, 5, DEFAULT_FIELD_ORDER_BOUND).unwrap());
    let f9 = BaseField::new(3, 2).unwrap();
    pool.push(extension_of(&f9, 3, DEFAULT_FIELD_ORDER_BOUND).unwrap());

    for field in &pool {
        assert!(field.order() <= 1 << 12);
        let q = field.base().q();
        let mut attained = std::collections::BTreeSet::new();
        for rank in 0..field.order() {
            let x = element_at(field, rank);
            let t = x.trace_to_base();
            attained.insert(t);
            assert_eq!(x.pow(q).trace_to_base(), t, "Frobenius moves the trace");
        }
        assert_eq!(attained.len() as u64, q, "trace is onto the base field");
    }
}

#[test]
fn elements_of_every_available_order() {
    for field in [
        build_field(2, 1, 6).unwrap(),
        build_field(3, 1, 4).unwrap(),
        build_field(5, 1, 2).unwrap(),
        extension_of(&BaseField::new(2, 2).unwrap(), 3, DEFAULT_FIELD_ORDER_BOUND).unwrap(),
    ] {
        let group = field.order() - 1;
        for m in 1..=group {
            if group % m != 0 {
                assert!(element_of_order(&field, m).is_err());
                continue;
            }
            let e = element_of_order(&field, m).unwrap();
            assert!(e.pow(m).is_one());
            let mut mm = m;
            let mut l = 2;
            while l * l <= mm {
                if mm % l == 0 {
                    assert!(!e.pow(m / l).is_one(), "order divides {m}/{l}");
                    while mm % l == 0 {
                        mm /= l;
                    }
                }
                l += 1;
            }
            if mm > 1 {
                assert!(!e.pow(m / mm).is_one());
            }
        }
    }
}

#[test]
fn generator_is_first_in_lex_order() {
    // the canonical generator precedes every other generator lexicographically
    for field in [build_field(2, 1, 4).unwrap(), build_field(3, 1, 2).unwrap(), build_field(5, 1, 2).unwrap()] {
        let g = multiplicative_generator(&field);
        let group = field.order() - 1;
        let mut best: Option<Vec<u64>> = None;
        // lex enumeration: compare (c_0, c_1, ...) positionally
        let d = field.ext_degree() as usize;
        let q = field.base().q();
        let mut all: Vec<Vec<u64>> = (0..field.order())
            .map(|r| {
                let mut v = vec![0u64; d];
                let mut r = r;
                for slot in v.iter_mut() {
                    *slot = r % q;
                    r /= q;
                }
                v
            })
            .collect();
        all.sort();
        for coeffs in all {
            let e = field.element(coeffs.clone()).unwrap();
            if e.is_zero() {
                continue;
            }
            if e.multiplicative_order().unwrap() == group {
                best = Some(coeffs);
                break;
            }
        }
        assert_eq!(g.coeffs(), best.unwrap().as_slice());
    }
}

#[test]
fn coset_partition_across_modulus_sweep() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for m in 1..=200u64 {
            if m > 1 && gcd(m, q) != 1 {
                continue;
            }
            let cosets = cyclotomic_cosets(q, m).unwrap();
            let total: u64 = cosets.iter().map(|c| c.size).sum();
            assert_eq!(total, m, "sizes sum to m (q={q} m={m})");
            let mut seen = vec![false; m as usize];
            for c in &cosets {
                assert_eq!(c.representative, c.members[0]);
                assert_eq!(c.subgroup_order, m / gcd(m, c.representative));
                for &x in &c.members {
                    assert!(!seen[x as usize], "disjointness (q={q} m={m})");
                    seen[x as usize] = true;
                }
                assert_eq!(c.size, multiplicative_order(q, c.subgroup_order).unwrap());
            }
            assert!(seen.into_iter().all(|b| b), "union covers Z_m");
        }
    }
}

#[test]
fn split_recombines_exactly() {
    for p in [2u64, 3, 5, 7] {
        for n in 1..=500u64 {
            let s = p_part_split(n, p).unwrap();
            assert_eq!(s.p.pow(s.k) * s.m, n);
            assert_eq!(gcd(s.m, p), 1);
        }
    }
}

/// The deformation map is a bijective algebra homomorphism for every small
/// (q, n), including the coprime cases where the nilpotent part is trivial.
#[test]
fn psi_isomorphism_everywhere_small() {
    for q in [2u64, 3, 4, 5] {
        for n in 1..=32u64 {
            let rep = cyclocover::group_algebra::verify_psi_iso(q, n).unwrap();
            assert!(rep.homomorphism_ok, "q={q} n={n}");
            assert!(rep.bijective, "q={q} n={n}");
        }
    }
}

/// Primitive idempotents are orthogonal, idempotent, and sum to 1 across a
/// modulus sweep (skipping moduli whose splitting field exceeds the bound).
#[test]
fn idempotent_relations_modulus_sweep() {
    for q in [2u64, 3, 4, 5] {
        let field = BaseField::from_order(q).unwrap();
        for m in 1..=30u64 {
            if m > 1 && gcd(m, q) != 1 {
                continue;
            }
            let comps = match cyclocover::group_algebra::decompose_semisimple(&field, m) {
                Ok(c) => c,
                Err(cyclocover::Error::ResourceExceeded { .. }) => continue,
                Err(e) => panic!("q={q} m={m}: {e}"),
            };
            let ga = cyclocover::group_algebra::GroupAlgebra::new(field.clone(), m).unwrap();
            let es: Vec<_> =
                comps.iter().map(|c| ga.element(c.idempotent.clone()).unwrap()).collect();
            let mut sum = ga.zero();
            for (s, e_s) in es.iter().enumerate() {
                sum = ga.add(&sum, e_s);
                assert_eq!(&ga.mul(e_s, e_s), e_s, "q={q} m={m} t={s}");
                for (t, e_t) in es.iter().enumerate() {
                    if s != t {
                        assert_eq!(ga.mul(e_s, e_t), ga.zero(), "q={q} m={m} {s},{t}");
                    }
                }
            }
            assert_eq!(sum, ga.one(), "q={q} m={m}");
        }
    }
}

/// Small-instance agreement between the trace criterion and the oracle;
/// the full-size sweep lives in the acceptance suite.
#[test]
fn criterion_matches_oracle_small() {
    let budget = OracleBudget::default();
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let mut n = 1u64;
        while (q as u128).pow(n as u32) <= 1 << 10 {
            let crit = h_zero(q, n).unwrap();
            let sweep = exists_covering_hyperplane(q, n, &budget).unwrap();
            assert_eq!(crit.verdict, sweep.is_none(), "q={q} n={n}");
            n += 1;
        }
    }
}
