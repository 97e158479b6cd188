//! Executable structure theory for the cyclic group algebra F_q[C_n].
//!
//! With n = p^k·m, gcd(m, p) = 1, the algebra F_q[C_n] ≅ F_q[x]/(x^n − 1)
//! is isomorphic to F_q[C_m][u]/(u^{p^k}) via g ↦ h(1+u), because
//! (g^m − 1)^{p^k} = g^n − 1 = 0 in characteristic p. Factoring x^m − 1 into
//! distinct irreducibles f_t then splits everything into components
//! A_t = F_{q^{d_t}}[u]/(u^{p^k}), where the shift generator acts on A_t as
//! multiplication by X_t = θ^{k_t}(1+u).
//!
//! This module realizes each step concretely — the bigraded image of Ψ, the
//! component fields F_q[x]/(f_t), the primitive idempotents, the residue
//! trace ResTr(a) = Tr(a_{p^k−1}) and its bilinear form — so the identities
//! the decision procedure relies on can be executed and checked rather than
//! trusted.

use crate::cyclotomic::{self, CyclotomicCoset, PPartSplit};
use crate::error::{Error, Result};
use crate::finite_field::{
    build_field_bounded, element_of_order, field_with_modulus, poly, BaseField, Field,
    FieldElement, DEFAULT_FIELD_ORDER_BOUND,
};

/// Rank computations on the residue-trace Gram matrix are capped at this
/// dimension (the matrix is dim² entries over F_q).
pub const DEFAULT_GRAM_DIM_BOUND: u64 = 64;

// ---------------------------------------------------------------------------
// F_q[C_n] and the bigraded quotient F_q[C_m][u]/(u^{p^k})
// ---------------------------------------------------------------------------

/// The cyclic group algebra F_q[C_n] ≅ F_q[x]/(x^n − 1); elements are
/// length-n coefficient vectors, multiplication is cyclic convolution.
#[derive(Debug, Clone)]
pub struct GroupAlgebra {
    field: BaseField,
    n: usize,
}

/// Element of [`GroupAlgebra`]: coefficient of g^i at index i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    pub coeffs: Vec<u64>,
}

impl GroupAlgebra {
    pub fn new(field: BaseField, n: u64) -> Result<GroupAlgebra> {
        if n == 0 {
            return Err(Error::InvalidInput("group order must be positive".into()));
        }
        Ok(GroupAlgebra { field, n: n as usize })
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<GroupAlgebraElement> {
        if coeffs.len() != self.n {
            return Err(Error::ParameterMismatch(format!(
                "expected {} coefficients, got {}",
                self.n,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.field.q()) {
            return Err(Error::InvalidInput("coefficient code out of range".into()));
        }
        Ok(GroupAlgebraElement { coeffs })
    }

    pub fn zero(&self) -> GroupAlgebraElement {
        GroupAlgebraElement { coeffs: vec![0; self.n] }
    }

    pub fn one(&self) -> GroupAlgebraElement {
        self.basis(0)
    }

    /// g^i as an element.
    pub fn basis(&self, i: usize) -> GroupAlgebraElement {
        let mut coeffs = vec![0; self.n];
        coeffs[i % self.n] = 1;
        GroupAlgebraElement { coeffs }
    }

    pub fn add(&self, a: &GroupAlgebraElement, b: &GroupAlgebraElement) -> GroupAlgebraElement {
        let coeffs =
            a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.field.add(x, y)).collect();
        GroupAlgebraElement { coeffs }
    }

    /// Cyclic convolution: indices reduce mod n.
    pub fn mul(&self, a: &GroupAlgebraElement, b: &GroupAlgebraElement) -> GroupAlgebraElement {
        let n = self.n;
        let mut coeffs = vec![0u64; n];
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                if bj != 0 {
                    let k = (i + j) % n;
                    coeffs[k] = self.field.add(coeffs[k], self.field.mul(ai, bj));
                }
            }
        }
        GroupAlgebraElement { coeffs }
    }
}

/// The quotient F_q[C_m][u]/(u^{p^k}) with basis {h^i u^j}.
#[derive(Debug, Clone)]
pub struct BiGradedAlgebra {
    field: BaseField,
    m: usize,
    pk: usize,
}

/// Element of [`BiGradedAlgebra`]: entry (i, j) at index i·p^k + j is the
/// coefficient of h^i u^j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiGradedElement {
    pub coeffs: Vec<u64>,
}

impl BiGradedAlgebra {
    pub fn new(field: BaseField, m: u64, pk: u64) -> Result<BiGradedAlgebra> {
        if m == 0 || pk == 0 {
            return Err(Error::InvalidInput("m and p^k must be positive".into()));
        }
        Ok(BiGradedAlgebra { field, m: m as usize, pk: pk as usize })
    }

    pub fn dim(&self) -> usize {
        self.m * self.pk
    }

    pub fn zero(&self) -> BiGradedElement {
        BiGradedElement { coeffs: vec![0; self.dim()] }
    }

    pub fn one(&self) -> BiGradedElement {
        let mut z = self.zero();
        z.coeffs[0] = 1;
        z
    }

    pub fn get(&self, a: &BiGradedElement, i: usize, j: usize) -> u64 {
        a.coeffs[i * self.pk + j]
    }

    /// Multiplication reduces h-exponents mod m and drops u-exponents ≥ p^k.
    pub fn mul(&self, a: &BiGradedElement, b: &BiGradedElement) -> BiGradedElement {
        let mut out = self.zero();
        for i1 in 0..self.m {
            for j1 in 0..self.pk {
                let ca = a.coeffs[i1 * self.pk + j1];
                if ca == 0 {
                    continue;
                }
                for i2 in 0..self.m {
                    let i = (i1 + i2) % self.m;
                    for j2 in 0..self.pk - j1 {
                        let cb = b.coeffs[i2 * self.pk + j2];
                        if cb != 0 {
                            let idx = i * self.pk + (j1 + j2);
                            out.coeffs[idx] = self.field.add(out.coeffs[idx], self.field.mul(ca, cb));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Binomial coefficient mod p by Lucas' digit rule.
fn binom_mod_p(n: u64, k: u64, p: u64) -> u64 {
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = acc * binom_small(nd, kd) % p;
        n /= p;
        k /= p;
    }
    acc
}

fn binom_small(n: u64, k: u64) -> u64 {
    // n, k < p ≤ small; exact integer arithmetic suffices in u128
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for t in 0..k {
        num *= (n - t) as u128;
        den *= (t + 1) as u128;
    }
    (num / den) as u64
}

/// The deformation map on F_q[C_n]: linear extension of
/// g^i ↦ h^(i mod m)·(1+u)^i with the binomial expansion truncated at u^{p^k}.
pub fn psi(
    algebra: &GroupAlgebra,
    split: &PPartSplit,
    a: &GroupAlgebraElement,
) -> Result<BiGradedElement> {
    let p = split.p;
    let pk = p.pow(split.k);
    if pk * split.m != split.n || split.n as usize != algebra.n {
        return Err(Error::ParameterMismatch(format!(
            "split {}^{}·{} does not produce n = {}",
            split.p,
            split.k,
            split.m,
            algebra.n
        )));
    }
    if algebra.field.p() != p {
        return Err(Error::ParameterMismatch(
            "split characteristic differs from the coefficient field".into(),
        ));
    }
    if a.coeffs.len() != algebra.n {
        return Err(Error::ParameterMismatch("element has wrong length".into()));
    }
    let target = BiGradedAlgebra::new(algebra.field.clone(), split.m, pk)?;
    let mut out = target.zero();
    let f = &algebra.field;
    for (i, &ai) in a.coeffs.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let row = i % split.m as usize;
        for j in 0..pk.min(i as u64 + 1) {
            let b = binom_mod_p(i as u64, j, p);
            if b != 0 {
                // binomials land in the prime subfield: code b < p
                let idx = row * pk as usize + j as usize;
                out.coeffs[idx] = f.add(out.coeffs[idx], f.mul(ai, b));
            }
        }
    }
    Ok(out)
}

/// Report of the isomorphism check for [`psi`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PsiReport {
    /// ψ(g^a·g^b) = ψ(g^a)·ψ(g^b) on all n² basis pairs.
    pub homomorphism_ok: bool,
    /// The n×n matrix of ψ on the monomial basis has rank n.
    pub bijective: bool,
}

/// Checks multiplicativity of [`psi`] on all basis pairs and bijectivity by
/// exact rank computation over F_q.
pub fn verify_psi_iso(q: u64, n: u64) -> Result<PsiReport> {
    // n² basis pairs, each with an O(n²) product: keep n small enough to run
    const PSI_CHECK_DIM_BOUND: u64 = 256;
    if n > PSI_CHECK_DIM_BOUND {
        return Err(Error::ResourceExceeded {
            what: "isomorphism check dimension",
            required: n as u128,
            bound: PSI_CHECK_DIM_BOUND as u128,
        });
    }
    let field = BaseField::from_order(q)?;
    let split = cyclotomic::p_part_split(n, field.p())?;
    let algebra = GroupAlgebra::new(field.clone(), n)?;
    let target = BiGradedAlgebra::new(field.clone(), split.m, split.p.pow(split.k))?;

    let images: Vec<BiGradedElement> =
        (0..n as usize).map(|i| psi(&algebra, &split, &algebra.basis(i))).collect::<Result<_>>()?;

    let mut homomorphism_ok = true;
    'pairs: for a in 0..n as usize {
        for b in 0..n as usize {
            let lhs = &images[(a + b) % n as usize];
            let rhs = target.mul(&images[a], &images[b]);
            if lhs != &rhs {
                homomorphism_ok = false;
                break 'pairs;
            }
        }
    }

    let matrix: Vec<Vec<u64>> = images.iter().map(|e| e.coeffs.clone()).collect();
    let bijective = crate::linalg::rank(&field, matrix) == n as usize;

    Ok(PsiReport { homomorphism_ok, bijective })
}

// ---------------------------------------------------------------------------
// Semisimple decomposition of F_q[C_m]
// ---------------------------------------------------------------------------

/// One irreducible factor of x^m − 1 with its primitive idempotent and the
/// component field F_q[x]/(f_t) ≅ F_{q^{d_t}}, where the class of x is
/// θ^{k_t} for the canonical primitive m-th root θ.
#[derive(Debug, Clone)]
pub struct Component {
    pub coset: CyclotomicCoset,
    /// Minimal polynomial f_t of θ^{k_t} over F_q.
    pub min_poly: Vec<u64>,
    /// Primitive idempotent e_t in F_q[x]/(x^m − 1), length-m coefficients.
    pub idempotent: Vec<u64>,
    /// F_q[x]/(f_t); the class of the extension generator is θ^{k_t}.
    pub field: Field,
    /// θ^{k_t} inside `field` (the class of x); multiplicative order m_t.
    pub theta: FieldElement,
}

/// Factors x^m − 1 over F_q into the minimal polynomials of θ^{k_t}, one per
/// q-cyclotomic coset, together with the orthogonal idempotent decomposition
/// of 1, ordered by coset representative.
pub fn decompose_semisimple(field: &BaseField, m: u64) -> Result<Vec<Component>> {
    decompose_semisimple_bounded(field, m, DEFAULT_FIELD_ORDER_BOUND)
}

pub fn decompose_semisimple_bounded(
    field: &BaseField,
    m: u64,
    bound: u64,
) -> Result<Vec<Component>> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    if m > 1 && crate::arith::gcd(m, field.q()) != 1 {
        return Err(Error::NotCoprime { m, q: field.q() });
    }
    let cosets = cyclotomic::cyclotomic_cosets(field.q(), m)?;

    // splitting field F_{q^D} containing a primitive m-th root of unity
    let big_d = cyclotomic::multiplicative_order(field.q(), m)?;
    let splitting = build_field_bounded(field.p(), field.e(), big_d as u32, bound)?;
    let theta = element_of_order(&splitting, m)?;

    // f_t(x) = prod_{j in coset} (x − θ^j), coefficients descend to F_q
    let mut components = Vec::with_capacity(cosets.len());
    for coset in cosets {
        let mut fpoly: Vec<FieldElement> = vec![splitting.one()];
        for &j in &coset.members {
            let root = theta.pow(j);
            // multiply fpoly by (x − root)
            let mut next: Vec<FieldElement> = vec![splitting.zero(); fpoly.len() + 1];
            for (i, c) in fpoly.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c).expect("same field");
                next[i] = next[i].sub(&c.mul(&root).expect("same field")).expect("same field");
            }
            fpoly = next;
        }
        let min_poly: Vec<u64> = fpoly
            .iter()
            .map(|c| {
                assert!(
                    c.coeffs()[1..].iter().all(|&x| x == 0),
                    "factor coefficients must lie in F_q"
                );
                c.coeffs()[0]
            })
            .collect();
        let comp_field = field_with_modulus(field, &min_poly, bound)?;
        let theta_t = if comp_field.ext_degree() == 1 {
            // class of x in F_q[x]/(x + c) is -c
            comp_field.from_base(field.neg(min_poly[0]))?
        } else {
            comp_field.basis_power(1)
        };
        components.push(Component {
            coset,
            min_poly,
            idempotent: Vec::new(),
            field: comp_field,
            theta: theta_t,
        });
    }

    // the factors multiply back to x^m − 1
    let mut xm1 = vec![0u64; m as usize + 1];
    xm1[0] = field.neg(1);
    xm1[m as usize] = 1;
    let product = components
        .iter()
        .fold(vec![1u64], |acc, c| poly::mul(field, &acc, &c.min_poly));
    assert_eq!(poly::trim(product), poly::trim(xm1.clone()), "factorization must reconstruct x^m - 1");

    // e_t = b_t.(x^m−1)/f_t where b_t inverts the cofactor mod f_t
    for comp in &mut components {
        let (cofactor, rem) = poly::divrem(field, &xm1, &comp.min_poly);
        assert!(poly::is_zero(&rem), "minimal polynomial divides x^m - 1");
        let (g, _, b) = poly::ext_gcd(field, &comp.min_poly, &cofactor);
        assert_eq!(poly::degree(&g), Some(0), "factors of a squarefree polynomial are coprime");
        let ginv = field.inv(g[0]).expect("gcd is a nonzero constant");
        let mut e = poly::mul(field, &poly::scale(field, &b, ginv), &cofactor);
        e.resize(m as usize, 0);
        comp.idempotent = e;
    }

    Ok(components)
}

// ---------------------------------------------------------------------------
// Component algebras A_t = F_{q^{d_t}}[u]/(u^{p^k})
// ---------------------------------------------------------------------------

/// The truncated polynomial algebra A_t over one component field; u is
/// nilpotent of index p^k.
#[derive(Debug, Clone)]
pub struct TruncatedAlgebra {
    pub component: Component,
    pub pk: u64,
}

/// Element of A_t: coefficient of u^ℓ at index ℓ, entries in F_{q^{d_t}}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPoly {
    pub coeffs: Vec<FieldElement>,
}

/// All component algebras for n = p^k·m over F_q, ordered by coset
/// representative.
pub fn truncated_algebras(field: &BaseField, split: &PPartSplit) -> Result<Vec<TruncatedAlgebra>> {
    truncated_algebras_bounded(field, split, DEFAULT_FIELD_ORDER_BOUND)
}

pub fn truncated_algebras_bounded(
    field: &BaseField,
    split: &PPartSplit,
    bound: u64,
) -> Result<Vec<TruncatedAlgebra>> {
    if field.p() != split.p {
        return Err(Error::ParameterMismatch(
            "split characteristic differs from the coefficient field".into(),
        ));
    }
    let pk = split.p.pow(split.k);
    Ok(decompose_semisimple_bounded(field, split.m, bound)?
        .into_iter()
        .map(|component| TruncatedAlgebra { component, pk })
        .collect())
}

impl TruncatedAlgebra {
    pub fn field(&self) -> &Field {
        &self.component.field
    }

    /// d_t·p^k, the F_q-dimension.
    pub fn dim(&self) -> u64 {
        self.component.field.ext_degree() as u64 * self.pk
    }

    pub fn element(&self, coeffs: Vec<FieldElement>) -> Result<TruncatedPoly> {
        if coeffs.len() != self.pk as usize {
            return Err(Error::ParameterMismatch(format!(
                "expected {} u-coefficients, got {}",
                self.pk,
                coeffs.len()
            )));
        }
        if !coeffs.iter().all(|c| c.field().same_field(self.field())) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(TruncatedPoly { coeffs })
    }

    pub fn zero(&self) -> TruncatedPoly {
        TruncatedPoly { coeffs: vec![self.field().zero(); self.pk as usize] }
    }

    pub fn one(&self) -> TruncatedPoly {
        self.u_power(0)
    }

    /// u^ℓ.
    pub fn u_power(&self, l: u64) -> TruncatedPoly {
        assert!(l < self.pk, "u exponent out of range");
        let mut z = self.zero();
        z.coeffs[l as usize] = self.field().one();
        z
    }

    pub fn add(&self, a: &TruncatedPoly, b: &TruncatedPoly) -> TruncatedPoly {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x.add(y).expect("same component field"))
            .collect();
        TruncatedPoly { coeffs }
    }

    /// Truncated convolution: terms of u-degree ≥ p^k vanish.
    pub fn mul(&self, a: &TruncatedPoly, b: &TruncatedPoly) -> TruncatedPoly {
        let pk = self.pk as usize;
        let mut out = self.zero();
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate().take(pk - i) {
                if !bj.is_zero() {
                    let term = ai.mul(bj).expect("same component field");
                    out.coeffs[i + j] = out.coeffs[i + j].add(&term).expect("same component field");
                }
            }
        }
        out
    }

    pub fn scale(&self, a: &TruncatedPoly, c: &FieldElement) -> TruncatedPoly {
        let coeffs = a.coeffs.iter().map(|x| x.mul(c).expect("same component field")).collect();
        TruncatedPoly { coeffs }
    }

    /// Residue trace: the field trace of the u^{p^k−1} coefficient, an
    /// F_q-linear functional A_t → F_q.
    pub fn res_tr(&self, a: &TruncatedPoly) -> u64 {
        a.coeffs[self.pk as usize - 1].trace_to_base()
    }

    /// For nonzero c with u-valuation r and lowest coefficient a_r, the
    /// element v = a_r^{−1}·u^{p^k−1−r} satisfies c·v = u^{p^k−1}: every
    /// other term of the product lands in u-degree ≥ p^k and vanishes.
    pub fn universal_inverse(&self, c: &TruncatedPoly) -> Result<TruncatedPoly> {
        let r = c.coeffs.iter().position(|x| !x.is_zero()).ok_or(Error::ZeroElement)?;
        let mut v = self.zero();
        v.coeffs[self.pk as usize - 1 - r] = c.coeffs[r].inv()?;
        let check = self.mul(c, &v);
        assert_eq!(
            check,
            self.u_power(self.pk - 1),
            "annihilator inverse identity must hold"
        );
        Ok(v)
    }

    /// X_t = θ^{k_t}(1+u), the image of the shift generator on this component.
    pub fn shift_generator(&self) -> TruncatedPoly {
        let mut x = self.zero();
        x.coeffs[0] = self.component.theta.clone();
        if self.pk > 1 {
            x.coeffs[1] = self.component.theta.clone();
        }
        x
    }

    /// X_t^i · a, the i-fold shift action, X_t^i by square-and-multiply.
    pub fn shift_multiply(&self, a: &TruncatedPoly, i: u64) -> TruncatedPoly {
        let mut base = self.shift_generator();
        let mut exp = i;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        self.mul(&acc, a)
    }

    /// Rank over F_q of the Gram matrix of (a, b) ↦ ResTr(a·b) on the basis
    /// {y^r·u^ℓ}. Full rank d_t·p^k means the form is nondegenerate.
    pub fn gram_rank(&self) -> Result<usize> {
        let d = self.field().ext_degree() as u64;
        let dim = d * self.pk;
        if dim > DEFAULT_GRAM_DIM_BOUND {
            return Err(Error::ResourceExceeded {
                what: "gram matrix dimension",
                required: dim as u128,
                bound: DEFAULT_GRAM_DIM_BOUND as u128,
            });
        }
        let basis: Vec<TruncatedPoly> = (0..self.pk)
            .flat_map(|l| {
                (0..d).map(move |r| {
                    let mut e = self.zero();
                    e.coeffs[l as usize] = self.field().basis_power(r as usize);
                    e
                })
            })
            .collect();
        let matrix: Vec<Vec<u64>> = basis
            .iter()
            .map(|a| basis.iter().map(|b| self.res_tr(&self.mul(a, b))).collect())
            .collect();
        Ok(crate::linalg::rank(self.field().base(), matrix))
    }
}
