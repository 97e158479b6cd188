//! The decision core: h_q(n) = 0 if and only if h_q(m) = 0 for the
//! characteristic-free part m of n, decided per q-cyclotomic coset by a
//! trace-nonvanishing scan.
//!
//! For each coset with subgroup order m_t the scan works in F_{q^{d_t}},
//! d_t = ord_{m_t}(q), fixes θ of exact order m_t, and asks whether some coset
//! β⟨θ⟩ of the order-m_t subgroup of F_{q^{d_t}}^× has Tr(β·θ^i) ≠ 0 for all
//! 0 ≤ i < m_t. Representatives β = γ^j for j < (q^{d_t}−1)/m_t hit every
//! coset exactly once; the i-range stops at m_t because θ^i is periodic with
//! period m_t. Several cosets mod m can share one m_t, so scans are cached per
//! distinct subgroup order.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cyclotomic::{self, CyclotomicCoset, PPartSplit};
use crate::error::{Error, Result};
use crate::finite_field::{
    build_field_bounded, multiplicative_generator, Field, FieldElement, DEFAULT_FIELD_ORDER_BOUND,
};

/// Knobs for the decision procedure.
#[derive(Debug, Clone)]
pub struct CriterionConfig {
    /// Hard cap on the order of any field the per-coset scan constructs.
    pub field_order_bound: u64,
}

impl Default for CriterionConfig {
    fn default() -> Self {
        CriterionConfig { field_order_bound: DEFAULT_FIELD_ORDER_BOUND }
    }
}

/// Outcome of one trace-nonvanishing scan for a given subgroup order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceScan {
    pub passes: bool,
    /// A coset representative β with Tr(β·θ^i) ≠ 0 for all i, when passing.
    pub witness: Option<FieldElement>,
    /// Some (β, i) with Tr(β·θ^i) = 0, when failing.
    pub counterexample: Option<(FieldElement, u64)>,
}

/// Per-coset verdict: the coset, the field the scan ran in, and the outcome.
#[derive(Debug, Clone)]
pub struct CosetVerdict {
    pub coset: CyclotomicCoset,
    pub field: Field,
    pub passes: bool,
    pub witness: Option<FieldElement>,
    pub counterexample: Option<(FieldElement, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionMethod {
    Criterion,
    Oracle,
}

/// Full decision: the verdict h_q(n) = 0 true/false, the split n = p^k·m,
/// and one verdict per q-cyclotomic coset mod m.
#[derive(Debug, Clone)]
pub struct DecisionRecord {
    pub q: u64,
    pub n: u64,
    pub split: PPartSplit,
    pub verdict: bool,
    pub coset_verdicts: Vec<CosetVerdict>,
    pub method: DecisionMethod,
}

impl DecisionRecord {
    /// Representative of the first failing coset, if any.
    pub fn failing_coset_rep(&self) -> Option<u64> {
        self.coset_verdicts.iter().find(|v| !v.passes).map(|v| v.coset.representative)
    }
}

/// Scans the cosets of the order-`m_t` subgroup of F_{q^{d_t}}^× for one on
/// which the trace to F_q never vanishes. Default configuration.
pub fn coset_trace_nonvanishing(q: u64, m_t: u64) -> Result<CosetVerdict> {
    coset_trace_nonvanishing_with(q, m_t, &CriterionConfig::default())
}

pub fn coset_trace_nonvanishing_with(
    q: u64,
    m_t: u64,
    config: &CriterionConfig,
) -> Result<CosetVerdict> {
    let (field, scan) = scan_for_subgroup(q, m_t, config)?;
    // the normalized coset carrying this check is the q-orbit of 1 mod m_t
    let coset = cyclotomic::cyclotomic_cosets(q, m_t)?
        .into_iter()
        .find(|c| c.subgroup_order == m_t)
        .expect("the orbit of 1 mod m_t has subgroup order m_t");
    Ok(CosetVerdict {
        coset,
        field,
        passes: scan.passes,
        witness: scan.witness,
        counterexample: scan.counterexample,
    })
}

fn scan_for_subgroup(q: u64, m_t: u64, config: &CriterionConfig) -> Result<(Field, TraceScan)> {
    let (p, e) = cyclotomic::prime_power_split(q)?;
    if m_t == 0 {
        return Err(Error::InvalidInput("subgroup order must be positive".into()));
    }
    if m_t > 1 && crate::arith::gcd(m_t, q) != 1 {
        return Err(Error::NotCoprime { m: m_t, q });
    }
    let d_t = cyclotomic::multiplicative_order(q, m_t)?;
    let field = build_field_bounded(p, e, d_t as u32, config.field_order_bound)?;
    let generator = multiplicative_generator(&field);
    let scan = scan_with_generator(&field, m_t, &generator)?;
    Ok((field, scan))
}

/// The scan itself, parameterized by the generator used to enumerate coset
/// representatives. The pass/fail outcome cannot depend on this choice (the
/// order-m_t subgroup of a cyclic group is unique, so the coset partition is
/// canonical); witnesses are first-found and do depend on it.
pub fn scan_with_generator(
    field: &Field,
    m_t: u64,
    generator: &FieldElement,
) -> Result<TraceScan> {
    let order = field.order();
    if !(order - 1).is_multiple_of(m_t) {
        return Err(Error::OrderUnavailable { order: m_t, group_order: order - 1 });
    }
    let reps = (order - 1) / m_t;
    let theta = generator.pow(reps);

    if field.packed().is_some() && generator == &multiplicative_generator(field) {
        return Ok(scan_packed(field, m_t, reps));
    }

    let d = field.ext_degree() as usize;
    let gamma_raw = generator.coeffs().to_vec();
    let theta_raw = theta.coeffs().to_vec();
    let mut scratch = vec![0u64; 2 * d - 1];
    let mut rep = vec![0u64; d];
    rep[0] = 1;
    let mut x = vec![0u64; d];
    let mut tmp = vec![0u64; d];
    let mut counterexample: Option<(Vec<u64>, u64)> = None;

    for _j in 0..reps {
        x.copy_from_slice(&rep);
        let mut all_nonzero = true;
        for i in 0..m_t {
            if field.raw_trace(&x) == 0 {
                if counterexample.is_none() {
                    counterexample = Some((rep.clone(), i));
                }
                all_nonzero = false;
                break;
            }
            if i + 1 < m_t {
                field.raw_mul(&x, &theta_raw, &mut tmp, &mut scratch);
                std::mem::swap(&mut x, &mut tmp);
            }
        }
        if all_nonzero {
            let witness = field.element(rep).expect("coefficients are in range");
            return Ok(TraceScan { passes: true, witness: Some(witness), counterexample: None });
        }
        field.raw_mul(&rep, &gamma_raw, &mut tmp, &mut scratch);
        std::mem::swap(&mut rep, &mut tmp);
    }

    let counterexample = counterexample.map(|(c, i)| {
        (field.element(c).expect("coefficients are in range"), i)
    });
    Ok(TraceScan { passes: false, witness: None, counterexample })
}

/// Bit-packed scan for F_{2^d} over the prime field; same loop as the generic
/// path on u64 masks.
fn scan_packed(field: &Field, m_t: u64, reps: u64) -> TraceScan {
    let pk = field.packed().expect("caller checked");
    let tmask = field.packed_trace_mask().expect("caller checked");
    let gamma = pk.pack(multiplicative_generator(field).coeffs());
    let theta = pk.pow(gamma, reps);
    let d = field.ext_degree() as usize;

    let unpack = |bits: u64| -> FieldElement {
        let mut coeffs = vec![0u64; d];
        pk.unpack(bits, &mut coeffs);
        field.element(coeffs).expect("coefficients are bits")
    };

    let mut rep = 1u64;
    let mut counterexample: Option<(u64, u64)> = None;
    for _j in 0..reps {
        let mut x = rep;
        let mut all_nonzero = true;
        for i in 0..m_t {
            if (x & tmask).count_ones() & 1 == 0 {
                if counterexample.is_none() {
                    counterexample = Some((rep, i));
                }
                all_nonzero = false;
                break;
            }
            if i + 1 < m_t {
                x = pk.mul(x, theta);
            }
        }
        if all_nonzero {
            return TraceScan { passes: true, witness: Some(unpack(rep)), counterexample: None };
        }
        rep = pk.mul(rep, gamma);
    }
    TraceScan {
        passes: false,
        witness: None,
        counterexample: counterexample.map(|(c, i)| (unpack(c), i)),
    }
}

/// Decides h_q(m) = 0 for gcd(m, q) = 1: true iff every q-cyclotomic coset
/// mod m admits a trace-nonvanishing subgroup coset.
pub fn h_zero_coprime(q: u64, m: u64) -> Result<DecisionRecord> {
    h_zero_coprime_with(q, m, &CriterionConfig::default())
}

pub fn h_zero_coprime_with(q: u64, m: u64, config: &CriterionConfig) -> Result<DecisionRecord> {
    let (p, _) = cyclotomic::prime_power_split(q)?;
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    if m > 1 && crate::arith::gcd(m, q) != 1 {
        return Err(Error::NotCoprime { m, q });
    }
    let cosets = cyclotomic::cyclotomic_cosets(q, m)?;

    // several cosets share a subgroup order; scan once per distinct order
    let mut orders: Vec<u64> = cosets.iter().map(|c| c.subgroup_order).collect();
    orders.sort_unstable();
    orders.dedup();
    let scans = crate::par::map_ordered(orders.clone(), |m_t| scan_for_subgroup(q, m_t, config));
    let mut by_order: BTreeMap<u64, (Field, TraceScan)> = BTreeMap::new();
    for (m_t, result) in orders.into_iter().zip(scans) {
        by_order.insert(m_t, result?);
    }

    let coset_verdicts: Vec<CosetVerdict> = cosets
        .into_iter()
        .map(|coset| {
            let (field, scan) = &by_order[&coset.subgroup_order];
            CosetVerdict {
                coset,
                field: Arc::clone(field),
                passes: scan.passes,
                witness: scan.witness.clone(),
                counterexample: scan.counterexample.clone(),
            }
        })
        .collect();

    let verdict = coset_verdicts.iter().all(|v| v.passes);
    Ok(DecisionRecord {
        q,
        n: m,
        split: PPartSplit { n: m, p, k: 0, m },
        verdict,
        coset_verdicts,
        method: DecisionMethod::Criterion,
    })
}

/// Decides h_q(n) = 0 for arbitrary n ≥ 1 by removing the characteristic
/// part: with n = p^k·m, gcd(m, p) = 1, the verdict equals that of h_q(m).
pub fn h_zero(q: u64, n: u64) -> Result<DecisionRecord> {
    h_zero_with(q, n, &CriterionConfig::default())
}

pub fn h_zero_with(q: u64, n: u64, config: &CriterionConfig) -> Result<DecisionRecord> {
    let (p, _) = cyclotomic::prime_power_split(q)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let split = cyclotomic::p_part_split(n, p)?;
    let mut record = h_zero_coprime_with(q, split.m, config)?;
    record.n = n;
    record.split = split;
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::smallest_generators;

    #[test]
    fn trivial_subgroup_always_passes() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let v = coset_trace_nonvanishing(q, 1).unwrap();
            assert!(v.passes);
            assert!(v.witness.unwrap().is_one());
        }
    }

    #[test]
    fn q2_m3_fails_via_zero_trace_of_one() {
        let v = coset_trace_nonvanishing(2, 3).unwrap();
        assert!(!v.passes);
        assert_eq!(v.field.order(), 4); // d_t = 2
        assert!(v.witness.is_none());
        // the very first representative β = 1 already has Tr(1) = 0
        let (beta, i) = v.counterexample.unwrap();
        assert!(beta.is_one());
        assert_eq!(i, 0);
    }

    #[test]
    fn q4_m3_passes_with_identity_trace() {
        let v = coset_trace_nonvanishing(4, 3).unwrap();
        assert!(v.passes);
        assert_eq!(v.field.ext_degree(), 1); // 4 ≡ 1 mod 3
        assert!(v.witness.unwrap().is_one());
    }

    #[test]
    fn coprime_decision_examples() {
        assert!(h_zero_coprime(2, 1).unwrap().verdict);
        assert!(!h_zero_coprime(2, 3).unwrap().verdict);
        assert!(h_zero_coprime(3, 4).unwrap().verdict);
    }

    #[test]
    fn full_decision_examples() {
        assert!(h_zero(2, 16).unwrap().verdict);
        let r = h_zero(2, 6).unwrap();
        assert!(!r.verdict);
        assert_eq!((r.split.k, r.split.m), (1, 3));
        assert_eq!(r.failing_coset_rep(), Some(1));
        assert!(!h_zero(2, 5).unwrap().verdict);
        let r = h_zero(3, 12).unwrap();
        assert!(r.verdict);
        assert_eq!(r.split.m, 4);
    }

    #[test]
    fn reduction_consistency() {
        for q in [2u64, 3, 4, 5] {
            for n in 1..=16u64 {
                // a few coprime parts need fields beyond the default bound
                let full = match h_zero(q, n) {
                    Ok(r) => r,
                    Err(Error::ResourceExceeded { .. }) => continue,
                    Err(e) => panic!("q={q} n={n}: {e}"),
                };
                let coprime = h_zero_coprime(q, full.split.m).unwrap();
                assert_eq!(full.verdict, coprime.verdict, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn zero_coset_always_passes() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for m in [1u64, 3, 5, 7, 9, 11] {
                if m > 1 && crate::arith::gcd(m, q) != 1 {
                    continue;
                }
                let rec = match h_zero_coprime(q, m) {
                    Ok(r) => r,
                    // e.g. q=7, m=11 needs F_{7^10} beyond the default bound
                    Err(Error::ResourceExceeded { .. }) => continue,
                    Err(e) => panic!("q={q} m={m}: {e}"),
                };
                let zero_coset = &rec.coset_verdicts[0];
                assert_eq!(zero_coset.coset.representative, 0);
                assert!(zero_coset.passes, "q={q} m={m}");
            }
        }
    }

    #[test]
    fn verdict_independent_of_generator_choice() {
        for (q, m_t) in [(2u64, 5u64), (2, 7), (3, 4), (3, 5), (5, 3), (2, 9), (4, 5)] {
            let config = CriterionConfig::default();
            let (field, canonical) = scan_for_subgroup(q, m_t, &config).unwrap();
            for g in smallest_generators(&field, 3) {
                let scan = scan_with_generator(&field, m_t, &g).unwrap();
                assert_eq!(scan.passes, canonical.passes, "q={q} m_t={m_t}");
            }
        }
    }

    /// A reported witness β really has Tr(β·θ^i) ≠ 0 for every i < m_t, and
    /// a reported counterexample really hits zero — re-verified through the
    /// public element API.
    #[test]
    fn witnesses_and_counterexamples_check_out() {
        for (q, m_t) in [(2u64, 1u64), (2, 3), (2, 5), (2, 7), (3, 4), (3, 5), (4, 3), (5, 4), (9, 5)] {
            let v = coset_trace_nonvanishing(q, m_t).unwrap();
            let theta = crate::finite_field::element_of_order(&v.field, m_t).unwrap();
            if v.passes {
                let w = v.witness.expect("passing verdicts carry a witness");
                let mut x = w.clone();
                for _ in 0..m_t {
                    assert_ne!(x.trace_to_base(), 0, "q={q} m_t={m_t}");
                    x = x.mul(&theta).unwrap();
                }
            } else {
                let (beta, i) = v.counterexample.expect("failing verdicts carry a counterexample");
                assert_eq!(beta.mul(&theta.pow(i)).unwrap().trace_to_base(), 0, "q={q} m_t={m_t}");
            }
        }
    }

    /// The packed GF(2) scan and a plain-element reference scan must agree.
    #[test]
    fn packed_and_generic_scans_agree() {
        for m_t in [1u64, 3, 5, 7, 9, 11, 13, 15, 17, 21, 23, 31, 33] {
            let config = CriterionConfig::default();
            let (field, fast) = scan_for_subgroup(2, m_t, &config).unwrap();
            assert!(field.packed().is_some());
            let g = multiplicative_generator(&field);
            let slow = generic_reference_scan(&field, m_t, &g);
            assert_eq!(fast.passes, slow.passes, "m_t={m_t}");
            assert_eq!(fast.witness, slow.witness, "m_t={m_t}");
            assert_eq!(fast.counterexample, slow.counterexample, "m_t={m_t}");
        }
    }

    /// Plain-element reimplementation of the scan used as a cross-check.
    fn generic_reference_scan(field: &Field, m_t: u64, generator: &FieldElement) -> TraceScan {
        let reps = (field.order() - 1) / m_t;
        let theta = generator.pow(reps);
        let mut rep = field.one();
        let mut counterexample = None;
        for _ in 0..reps {
            let mut x = rep.clone();
            let mut ok = true;
            for i in 0..m_t {
                if x.trace_to_base() == 0 {
                    if counterexample.is_none() {
                        counterexample = Some((rep.clone(), i));
                    }
                    ok = false;
                    break;
                }
                x = x.mul(&theta).unwrap();
            }
            if ok {
                return TraceScan { passes: true, witness: Some(rep), counterexample: None };
            }
            rep = rep.mul(generator).unwrap();
        }
        TraceScan { passes: false, witness: None, counterexample }
    }
}
