//! Definition-level brute force: ground truth the criterion is checked
//! against. No algebraic shortcuts on purpose — the value of this module is
//! its independence from the trace machinery.
//!
//! A hyperplane suffices to witness h_q(n) > 0: if a proper subspace U
//! covers, then any hyperplane W ⊇ U also covers, because σ^i(U) ⊆ σ^i(W)
//! for every shift. So the default sweep enumerates the (q^n−1)/(q−1)
//! normalized dual vectors instead of all subspaces.

use crate::error::{Error, Result};
use crate::finite_field::BaseField;

/// Work limits for oracle scans. Exceeding a budget is a hard error, never a
/// silent truncation: a partial sweep must not masquerade as a verdict.
#[derive(Debug, Clone)]
pub struct OracleBudget {
    /// Max vector evaluations (q^n) for a single hyperplane check.
    pub per_hyperplane_evals: u64,
    /// Max duals × vectors × shifts for whole sweeps.
    pub total_ops: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { per_hyperplane_evals: 1 << 20, total_ops: 1 << 36 }
    }
}

impl OracleBudget {
    /// One knob for everything, as exposed by the CLI `--budget` flag.
    pub fn uniform(limit: u64) -> Self {
        OracleBudget { per_hyperplane_evals: limit, total_ops: limit }
    }
}

/// A nonzero dual vector, normalized so its first nonzero coordinate is 1;
/// the hyperplane {x : ⟨c, x⟩ = 0} is uniquely represented this way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualVector {
    coords: Vec<u64>,
}

impl DualVector {
    pub fn new(field: &BaseField, coords: Vec<u64>) -> Result<DualVector> {
        if coords.iter().any(|&c| c >= field.q()) {
            return Err(Error::InvalidInput("coordinate code out of range".into()));
        }
        let Some(first) = coords.iter().position(|&c| c != 0) else {
            return Err(Error::InvalidInput("dual vector must be nonzero".into()));
        };
        let inv = field.inv(coords[first])?;
        let coords = coords.iter().map(|&c| field.mul(c, inv)).collect();
        Ok(DualVector { coords })
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

/// Basis of the annihilator of a codimension-c subspace: a full-rank c×n
/// matrix in reduced row echelon form, the unique representation per subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    rows: Vec<Vec<u64>>,
}

impl SubspaceBasis {
    /// Canonicalizes arbitrary spanning rows; fails if they are dependent.
    pub fn from_rows(field: &BaseField, mut rows: Vec<Vec<u64>>) -> Result<SubspaceBasis> {
        let want = rows.len();
        let got = crate::linalg::rref(field, &mut rows);
        if got != want {
            return Err(Error::InvalidInput("rows are linearly dependent".into()));
        }
        Ok(SubspaceBasis { rows })
    }

    fn from_rref_unchecked(rows: Vec<Vec<u64>>) -> SubspaceBasis {
        SubspaceBasis { rows }
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn codim(&self) -> usize {
        self.rows.len()
    }
}

/// Coordinates rotated right by i (mod n): index j receives the old entry at
/// j − i. Negative i rotates left; the identity at i ≡ 0.
pub fn cyclic_shift(x: &[u64], i: i64) -> Vec<u64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let shift = i.rem_euclid(n as i64) as usize;
    let mut out = vec![0u64; n];
    for (j, &v) in x.iter().enumerate() {
        out[(j + shift) % n] = v;
    }
    out
}

/// All n rotations of each dual row, flattened as `[i * c + j]`; row (i, j)
/// is σ^i(R_j), whose inner product with x equals ⟨R_j, σ^{-i}(x)⟩.
fn shifted_rows(rows: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(n * rows.len());
    for i in 0..n {
        for row in rows {
            out.push(cyclic_shift(row, i as i64));
        }
    }
    out
}

/// Core scan: does every x ∈ F_q^n fall inside some shifted copy of the
/// subspace annihilated by `rows`? Returns the first surviving x (in base-q
/// odometer order) as a witness of non-covering, or None when covering.
///
/// Vectors are enumerated as integer ranks in base q; the inner products
/// against all shifted rows are maintained incrementally per digit change.
fn first_uncovered(field: &BaseField, n: usize, rows: &[Vec<u64>]) -> Option<Vec<u64>> {
    let q = field.q();
    let c = rows.len();
    let srows = shifted_rows(rows, n);
    let nrows = n * c;

    let mut ip = vec![0u64; nrows];
    // zc[i] = how many of the c inner products of shift i are zero
    let mut zc = vec![c as u64; n];
    // number of shifts i with all c inner products zero; x is covered iff > 0
    let mut covered_shifts = n as u64;

    let total: u128 = crate::arith::pow_u128_saturating(q, n as u32);
    let mut digits = vec![0u64; n];

    let apply = |ip: &mut [u64],
                     zc: &mut [u64],
                     covered_shifts: &mut u64,
                     pos: usize,
                     old: u64,
                     new: u64| {
        let delta = field.sub(new, old);
        for i in 0..n {
            for j in 0..c {
                let r = srows[i * c + j][pos];
                if r == 0 {
                    continue;
                }
                let cell = &mut ip[i * c + j];
                let was_zero = *cell == 0;
                *cell = field.add(*cell, field.mul(r, delta));
                let is_zero = *cell == 0;
                if was_zero != is_zero {
                    let before_full = zc[i] == c as u64;
                    zc[i] = if is_zero { zc[i] + 1 } else { zc[i] - 1 };
                    let after_full = zc[i] == c as u64;
                    match (before_full, after_full) {
                        (true, false) => *covered_shifts -= 1,
                        (false, true) => *covered_shifts += 1,
                        _ => {}
                    }
                }
            }
        }
    };

    // x = 0 is covered by every shift; start stepping from rank 1
    let mut step: u128 = 1;
    while step < total {
        let mut pos = 0;
        loop {
            let old = digits[pos];
            if old + 1 == q {
                digits[pos] = 0;
                apply(&mut ip, &mut zc, &mut covered_shifts, pos, old, 0);
                pos += 1;
            } else {
                digits[pos] = old + 1;
                apply(&mut ip, &mut zc, &mut covered_shifts, pos, old, old + 1);
                break;
            }
        }
        if covered_shifts == 0 {
            return Some(digits);
        }
        step += 1;
    }
    None
}

/// True iff for every x in F_q^n some cyclic shift of x lands on the
/// hyperplane {y : ⟨c, y⟩ = 0}; equivalently, false iff some x has all n
/// cyclic inner products nonzero.
pub fn hyperplane_covers(q: u64, n: u64, c: &DualVector, budget: &OracleBudget) -> Result<bool> {
    let field = BaseField::from_order(q)?;
    if c.coords.len() != n as usize {
        return Err(Error::ParameterMismatch(format!(
            "dual vector has length {}, expected {n}",
            c.coords.len()
        )));
    }
    let evals = crate::arith::pow_u128_saturating(q, n as u32);
    if evals > budget.per_hyperplane_evals as u128 {
        return Err(Error::ResourceExceeded {
            what: "hyperplane check vector evaluations",
            required: evals,
            bound: budget.per_hyperplane_evals as u128,
        });
    }
    Ok(first_uncovered(&field, n as usize, std::slice::from_ref(&c.coords)).is_none())
}

fn dual_from_rank(q: u64, n: usize, rank: u128) -> Vec<u64> {
    // big-endian digits so ascending rank is ascending lexicographic order
    let mut coords = vec![0u64; n];
    let mut r = rank;
    for slot in coords.iter_mut().rev() {
        *slot = (r % q as u128) as u64;
        r /= q as u128;
    }
    coords
}

fn normalized(coords: &[u64]) -> bool {
    coords.iter().find(|&&c| c != 0).is_some_and(|&c| c == 1)
}

fn sweep_budget_check(q: u64, n: u64, budget: &OracleBudget) -> Result<()> {
    let vectors = crate::arith::pow_u128_saturating(q, n as u32);
    let duals = (vectors - 1) / (q as u128 - 1);
    let ops = duals.saturating_mul(vectors).saturating_mul(n as u128);
    if ops > budget.total_ops as u128 {
        return Err(Error::ResourceExceeded {
            what: "covering-hyperplane sweep",
            required: ops,
            bound: budget.total_ops as u128,
        });
    }
    Ok(())
}

/// The lexicographically first normalized dual whose hyperplane covers, or
/// None. Absence is equivalent to h_q(n) = 0: any proper covering subspace
/// extends to a covering hyperplane (σ^i(U) ⊆ σ^i(W) whenever U ⊆ W).
pub fn exists_covering_hyperplane(
    q: u64,
    n: u64,
    budget: &OracleBudget,
) -> Result<Option<DualVector>> {
    let field = prepare_sweep(q, n, budget)?;
    let total = field.q().checked_pow(n as u32).expect("within budget, so within u64");
    Ok(crate::par::find_map_first(1..total, |rank| {
        covering_dual_at_rank(&field, n as usize, rank)
    }))
}

/// Sequential fallback with identical results; the parallel path reduces with
/// find-first semantics, so witnesses match exactly.
pub fn exists_covering_hyperplane_seq(
    q: u64,
    n: u64,
    budget: &OracleBudget,
) -> Result<Option<DualVector>> {
    let field = prepare_sweep(q, n, budget)?;
    let total = field.q().checked_pow(n as u32).expect("within budget, so within u64");
    Ok((1..total).find_map(|rank| covering_dual_at_rank(&field, n as usize, rank)))
}

fn prepare_sweep(q: u64, n: u64, budget: &OracleBudget) -> Result<BaseField> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let field = BaseField::from_order(q)?;
    sweep_budget_check(q, n, budget)?;
    Ok(field)
}

fn covering_dual_at_rank(field: &BaseField, n: usize, rank: u64) -> Option<DualVector> {
    let coords = dual_from_rank(field.q(), n, rank as u128);
    if !normalized(&coords) {
        return None;
    }
    if first_uncovered(field, n, std::slice::from_ref(&coords)).is_none() {
        Some(DualVector { coords })
    } else {
        None
    }
}

/// Result of the bounded-codimension exact search.
#[derive(Debug, Clone)]
pub struct ExactH {
    /// Largest codimension ≤ max_codim admitting a cyclically covering
    /// subspace; 0 when only the full space covers within the bound.
    pub h: u32,
    /// Dual basis of a covering subspace realizing `h`, when h > 0.
    pub witness: Option<SubspaceBasis>,
}

/// Exhaustive search over codimension-c subspaces, c ≤ max_codim, enumerated
/// once each via RREF dual bases. When max_codim ≥ ⌊log_q n⌋ the result is
/// exactly h_q(n), by the general upper bound on covering codimension.
pub fn exact_h_bruteforce(
    q: u64,
    n: u64,
    max_codim: u32,
    budget: &OracleBudget,
) -> Result<ExactH> {
    exact_h_impl(q, n, max_codim, budget, true)
}

/// Sequential fallback of [`exact_h_bruteforce`] with identical results.
pub fn exact_h_bruteforce_seq(
    q: u64,
    n: u64,
    max_codim: u32,
    budget: &OracleBudget,
) -> Result<ExactH> {
    exact_h_impl(q, n, max_codim, budget, false)
}

fn exact_h_impl(
    q: u64,
    n: u64,
    max_codim: u32,
    budget: &OracleBudget,
    parallel: bool,
) -> Result<ExactH> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let field = BaseField::from_order(q)?;
    let n = n as usize;
    let vectors = crate::arith::pow_u128_saturating(q, n as u32);

    for c in (1..=max_codim.min(n as u32)).rev() {
        let pivots_list = combinations(n, c as usize);
        let subspaces: u128 = pivots_list
            .iter()
            .map(|piv| crate::arith::pow_u128_saturating(q, free_cells(n, piv) as u32))
            .sum();
        let ops = subspaces.saturating_mul(vectors).saturating_mul(n as u128);
        if ops > budget.total_ops as u128 {
            return Err(Error::ResourceExceeded {
                what: "exact-h subspace sweep",
                required: ops,
                bound: budget.total_ops as u128,
            });
        }
        // combinations in lex order; fillings in odometer order within each
        for piv in &pivots_list {
            let fillings = crate::arith::pow_u128_saturating(q, free_cells(n, piv) as u32) as u64;
            let pred = |filling: u64| {
                let rows = rref_rows(q, n, piv, filling);
                if first_uncovered(&field, n, &rows).is_none() {
                    Some(rows)
                } else {
                    None
                }
            };
            let found = if parallel {
                crate::par::find_map_first(0..fillings, pred)
            } else {
                (0..fillings).find_map(pred)
            };
            if let Some(rows) = found {
                return Ok(ExactH { h: c, witness: Some(SubspaceBasis::from_rref_unchecked(rows)) });
            }
        }
    }
    Ok(ExactH { h: 0, witness: None })
}

/// c-subsets of 0..n in lexicographic order.
fn combinations(n: usize, c: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(c);
    fn rec(start: usize, n: usize, c: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == c {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < c - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, c, cur, out);
            cur.pop();
        }
    }
    rec(0, n, c, &mut cur, &mut out);
    out
}

/// Number of free entries of an RREF matrix with the given pivot columns:
/// row i can be filled at non-pivot columns right of its pivot.
fn free_cells(n: usize, pivots: &[usize]) -> usize {
    let c = pivots.len();
    pivots
        .iter()
        .enumerate()
        .map(|(i, &p)| (n - p - 1) - (c - 1 - i))
        .sum()
}

/// Reconstructs the RREF matrix for a pivot set and a base-q filling index,
/// assigning free cells row-major.
fn rref_rows(q: u64, n: usize, pivots: &[usize], mut filling: u64) -> Vec<Vec<u64>> {
    let c = pivots.len();
    let mut rows = vec![vec![0u64; n]; c];
    for (i, &p) in pivots.iter().enumerate() {
        rows[i][p] = 1;
    }
    for (i, row) in rows.iter_mut().enumerate() {
        for (col, slot) in row.iter_mut().enumerate().skip(pivots[i] + 1) {
            if pivots.contains(&col) {
                continue;
            }
            *slot = filling % q;
            filling /= q;
        }
    }
    rows
}
