//! Exact arithmetic for F_p, F_q = F_{p^e}, and extensions F_{q^d}.
//!
//! Two layers:
//!
//! * [`BaseField`] is F_q presented as F_p[x]/(base_modulus). Its elements are
//!   integer codes below q whose base-p digits are the polynomial coefficients
//!   (digit i is the coefficient of x^i), the same encoding small GF libraries
//!   use for GF(2^k) bit masks and GF(3^k) trit packs. Small fields get full
//!   multiplication tables.
//! * [`FieldDescriptor`] is F_{q^d} presented as F_q[y]/(ext_modulus), with
//!   [`FieldElement`] holding a length-d coefficient vector of codes.
//!
//! Moduli default to the lexicographically smallest monic irreducibles
//! (coefficients compared low-degree first), so every constructed field, every
//! generator, and every reported witness is reproducible bit for bit.
//! Construction over an explicitly supplied modulus is also possible, which is
//! how quotients F_q[x]/(f) for a prescribed irreducible f are realized.
//!
//! For p = 2, e = 1 the descriptor additionally keeps a bit-packed form of the
//! modulus; multiplication and trace on u64 masks make exhaustive scans over
//! fields as large as 2^28 elements practical.

use std::sync::{Arc, OnceLock};

use crate::arith::{factorize, is_prime, pow_u128_saturating};
use crate::error::{Error, Result};

pub(crate) mod poly;

/// Default cap on the order of any constructed field. Criterion scans touch
/// every nonzero element, so this bounds their running time; override it when
/// a larger instance is genuinely wanted.
pub const DEFAULT_FIELD_ORDER_BOUND: u64 = 1 << 28;

const BASE_ORDER_LIMIT: u64 = 1 << 28;
const TABLE_LIMIT: u64 = 512;

// ---------------------------------------------------------------------------
// Base field F_q
// ---------------------------------------------------------------------------

/// How codes are combined; picked once at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Repr {
    /// F_2: xor and and.
    PrimeTwo,
    /// Prime field, branchless add and one u64 reduction per product.
    Prime,
    /// Extension with full lookup tables (q ≤ TABLE_LIMIT).
    Tabled,
    /// Extension without tables; decode, convolve, reduce.
    Poly,
}

struct BaseInner {
    p: u64,
    e: u32,
    q: u64,
    repr: Repr,
    /// Monic irreducible of degree e over F_p; `[0, 1]` (the polynomial x)
    /// for prime fields.
    modulus: Vec<u64>,
    mul_table: Option<Vec<u64>>,
    add_table: Option<Vec<u64>>,
    inv_table: Option<Vec<u64>>,
}

/// Shared handle to an F_q = F_{p^e} arithmetic context. Elements are integer
/// codes in `0..q` (base-p digits are the coefficients over F_p). Cloning is
/// cheap; all state is immutable after construction.
#[derive(Clone)]
pub struct BaseField {
    inner: Arc<BaseInner>,
}

impl std::fmt::Debug for BaseField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BaseField")
            .field("p", &self.inner.p)
            .field("e", &self.inner.e)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.e == other.inner.e
                && self.inner.modulus == other.inner.modulus)
    }
}
impl Eq for BaseField {}

impl BaseField {
    /// F_{p^e} with the canonical (lexicographically smallest) modulus.
    pub fn new(p: u64, e: u32) -> Result<BaseField> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if e == 0 {
            return Err(Error::ParameterMismatch("base degree must be at least 1".into()));
        }
        let q128 = pow_u128_saturating(p, e);
        if q128 > BASE_ORDER_LIMIT as u128 {
            return Err(Error::ResourceExceeded {
                what: "base field order",
                required: q128,
                bound: BASE_ORDER_LIMIT as u128,
            });
        }
        let q = q128 as u64;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            let prime = BaseField::prime_unchecked(p);
            poly::smallest_irreducible(&prime, e)
        };
        let repr = if e == 1 && p == 2 {
            Repr::PrimeTwo
        } else if e == 1 {
            Repr::Prime
        } else if q <= TABLE_LIMIT {
            Repr::Tabled
        } else {
            Repr::Poly
        };
        let mut inner = BaseInner {
            p,
            e,
            q,
            repr,
            modulus,
            mul_table: None,
            add_table: None,
            inv_table: None,
        };
        if repr == Repr::Tabled {
            let tmp = BaseField {
                inner: Arc::new(BaseInner {
                    p,
                    e,
                    q,
                    repr: Repr::Poly,
                    modulus: inner.modulus.clone(),
                    mul_table: None,
                    add_table: None,
                    inv_table: None,
                }),
            };
            let mut mul = vec![0u64; (q * q) as usize];
            let mut add = vec![0u64; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    mul[(a * q + b) as usize] = tmp.mul_generic(a, b);
                    add[(a * q + b) as usize] = tmp.add_generic(a, b);
                }
            }
            let mut inv = vec![0u64; q as usize];
            for a in 1..q {
                inv[a as usize] = tmp.pow(a, q - 2);
            }
            inner.mul_table = Some(mul);
            inner.add_table = Some(add);
            inner.inv_table = Some(inv);
        }
        Ok(BaseField { inner: Arc::new(inner) })
    }

    /// F_q for a prime power q.
    pub fn from_order(q: u64) -> Result<BaseField> {
        let (p, e) = crate::cyclotomic::prime_power_split(q)?;
        BaseField::new(p, e)
    }

    fn prime_unchecked(p: u64) -> BaseField {
        BaseField {
            inner: Arc::new(BaseInner {
                p,
                e: 1,
                q: p,
                repr: if p == 2 { Repr::PrimeTwo } else { Repr::Prime },
                modulus: vec![0, 1],
                mul_table: None,
                add_table: None,
                inv_table: None,
            }),
        }
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn e(&self) -> u32 {
        self.inner.e
    }

    pub fn q(&self) -> u64 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    fn decode(&self, mut code: u64) -> Vec<u64> {
        let p = self.inner.p;
        (0..self.inner.e)
            .map(|_| {
                let d = code % p;
                code /= p;
                d
            })
            .collect()
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.inner.p + d)
    }

    fn add_generic(&self, a: u64, b: u64) -> u64 {
        let p = self.inner.p;
        if self.inner.e == 1 {
            return (a + b) % p;
        }
        let da = self.decode(a);
        let db = self.decode(b);
        let sum: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
        self.encode(&sum)
    }

    fn mul_generic(&self, a: u64, b: u64) -> u64 {
        let p = self.inner.p;
        if self.inner.e == 1 {
            return crate::arith::mul_mod(a, b, p);
        }
        let e = self.inner.e as usize;
        let da = self.decode(a);
        let db = self.decode(b);
        let mut prod = vec![0u64; 2 * e - 1];
        for i in 0..e {
            if da[i] == 0 {
                continue;
            }
            for j in 0..e {
                if db[j] != 0 {
                    prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                }
            }
        }
        // reduce by the monic base modulus
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..e {
                let m = self.inner.modulus[j];
                if m != 0 {
                    let cell = &mut prod[k - e + j];
                    *cell = (*cell + p - crate::arith::mul_mod(c, m, p) % p) % p;
                }
            }
        }
        self.encode(&prod[..e])
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self.inner.repr {
            Repr::PrimeTwo => a ^ b,
            Repr::Prime => {
                let s = a + b;
                if s >= self.inner.p {
                    s - self.inner.p
                } else {
                    s
                }
            }
            Repr::Tabled => self.inner.add_table.as_ref().expect("tabled repr")
                [(a * self.inner.q + b) as usize],
            Repr::Poly => self.add_generic(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        match self.inner.repr {
            Repr::PrimeTwo => a,
            Repr::Prime => {
                if a == 0 {
                    0
                } else {
                    self.inner.p - a
                }
            }
            _ => {
                let p = self.inner.p;
                let digits: Vec<u64> = self.decode(a).iter().map(|&d| (p - d) % p).collect();
                self.encode(&digits)
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.inner.repr {
            Repr::PrimeTwo => a & b,
            Repr::Prime => (a * b) % self.inner.p,
            Repr::Tabled => self.inner.mul_table.as_ref().expect("tabled repr")
                [(a * self.inner.q + b) as usize],
            Repr::Poly => self.mul_generic(a, b),
        }
    }

    pub fn pow(&self, a: u64, mut exp: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.inner.inv_table {
            return Ok(t[a as usize]);
        }
        Ok(self.pow(a, self.inner.q - 2))
    }

    /// Irreducibility over F_q by the Frobenius power test: f of degree n is
    /// irreducible iff x^(q^n) ≡ x (mod f) and gcd(x^(q^(n/ℓ)) − x, f) = 1
    /// for every prime ℓ dividing n. Input must be monic in trimmed form.
    pub fn is_irreducible(&self, f: &[u64]) -> Result<bool> {
        let d = match poly::degree(f) {
            Some(d) => d,
            None => return Err(Error::NonMonic),
        };
        if d + 1 != f.len() || f[d] != 1 {
            return Err(Error::NonMonic);
        }
        if d == 0 {
            return Err(Error::NonMonic);
        }
        if f.iter().any(|&c| c >= self.inner.q) {
            return Err(Error::InvalidInput("polynomial coefficient out of range".into()));
        }
        if d == 1 {
            return Ok(true);
        }
        // cheap reject for small fields: scan for roots (linear factors)
        if self.inner.q <= 64 {
            for x0 in 0..self.inner.q {
                let mut acc = 0u64;
                for &c in f.iter().rev() {
                    acc = self.add(self.mul(acc, x0), c);
                }
                if acc == 0 {
                    return Ok(false);
                }
            }
        }
        let x = vec![0u64, 1];
        // chain[j] = x^(q^(j+1)) mod f
        let mut chain = Vec::with_capacity(d);
        let mut cur = x.clone();
        for _ in 0..d {
            cur = poly::powmod(self, &cur, self.inner.q, f);
            chain.push(cur.clone());
        }
        if !poly::is_zero(&poly::sub(self, &chain[d - 1], &x)) {
            return Ok(false);
        }
        for (l, _) in factorize(d as u64) {
            let j = d / l as usize;
            let diff = poly::sub(self, &chain[j - 1], &x);
            let g = poly::gcd(self, &diff, f);
            if poly::degree(&g) != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

// ---------------------------------------------------------------------------
// Bit-packed GF(2^d)
// ---------------------------------------------------------------------------

/// Carry-less arithmetic on u64 masks for F_{2^d}, d ≤ 63, over the prime
/// field. Bit i of a mask is the coefficient of y^i.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PackedGf2 {
    /// Modulus mask including the leading bit d.
    modulus: u64,
    degree: u32,
}

impl PackedGf2 {
    pub(crate) fn pack(&self, coeffs: &[u64]) -> u64 {
        coeffs
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | ((c & 1) << i))
    }

    pub(crate) fn unpack(&self, bits: u64, out: &mut [u64]) {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = (bits >> i) & 1;
        }
    }

    #[inline]
    pub(crate) fn mul(&self, a: u64, mut b: u64) -> u64 {
        let d = self.degree;
        let mut a = a;
        let mut acc = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if (a >> d) & 1 == 1 {
                a ^= self.modulus;
            }
        }
        acc
    }

    pub(crate) fn pow(&self, a: u64, mut exp: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Extension field F_{q^d}
// ---------------------------------------------------------------------------

/// Immutable description of F_{q^d} = F_q[y]/(ext_modulus): the characteristic
/// p, the base degree e (q = p^e), the extension degree d, and both moduli.
/// All element operations go through the descriptor; shared behind an [`Arc`]
/// (the [`Field`] alias) it is safe for unrestricted concurrent use.
pub struct FieldDescriptor {
    base: BaseField,
    ext_degree: u32,
    ext_modulus: Vec<u64>,
    order: u64,
    packed: Option<PackedGf2>,
    /// Prime base field small enough for schoolbook products to accumulate
    /// in u64 with one reduction per output coefficient.
    deferred_prime: bool,
    trace_fn: OnceLock<Vec<u64>>,
    generator: OnceLock<Vec<u64>>,
}

/// Shared handle to a [`FieldDescriptor`].
pub type Field = Arc<FieldDescriptor>;

impl std::fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldDescriptor")
            .field("p", &self.base.p())
            .field("base_degree", &self.base.e())
            .field("ext_degree", &self.ext_degree)
            .field("base_modulus", &self.base.modulus())
            .field("ext_modulus", &self.ext_modulus)
            .field("order", &self.order)
            .finish()
    }
}

/// F_{q^d} with q = p^e, both moduli canonical (lexicographically smallest
/// monic irreducibles), order capped by [`DEFAULT_FIELD_ORDER_BOUND`].
pub fn build_field(p: u64, e: u32, d: u32) -> Result<Field> {
    build_field_bounded(p, e, d, DEFAULT_FIELD_ORDER_BOUND)
}

/// Same as [`build_field`] with an explicit order bound.
pub fn build_field_bounded(p: u64, e: u32, d: u32, bound: u64) -> Result<Field> {
    let base = BaseField::new(p, e)?;
    extension_of(&base, d, bound)
}

/// F_{q^d} over an existing base field, canonical extension modulus.
pub fn extension_of(base: &BaseField, d: u32, bound: u64) -> Result<Field> {
    if d == 0 {
        return Err(Error::ParameterMismatch("extension degree must be at least 1".into()));
    }
    let order = check_order(base, d, bound)?;
    let ext_modulus = poly::smallest_irreducible(base, d);
    Ok(Arc::new(FieldDescriptor::from_parts(base.clone(), ext_modulus, order)))
}

/// F_q[y]/(f) for a caller-supplied monic irreducible f. Used to realize a
/// quotient by a prescribed minimal polynomial, where the class of y is a
/// chosen root rather than an arbitrary one.
pub fn field_with_modulus(base: &BaseField, ext_modulus: &[u64], bound: u64) -> Result<Field> {
    match base.is_irreducible(ext_modulus) {
        Ok(true) => {}
        Ok(false) => {
            return Err(Error::InvalidInput("extension modulus is reducible".into()));
        }
        Err(e) => return Err(e),
    }
    let d = (ext_modulus.len() - 1) as u32;
    let order = check_order(base, d, DEFAULT_FIELD_ORDER_BOUND.max(bound))?;
    Ok(Arc::new(FieldDescriptor::from_parts(base.clone(), ext_modulus.to_vec(), order)))
}

fn check_order(base: &BaseField, d: u32, bound: u64) -> Result<u64> {
    let order = pow_u128_saturating(base.q(), d);
    if order > bound as u128 {
        return Err(Error::ResourceExceeded {
            what: "field order",
            required: order,
            bound: bound as u128,
        });
    }
    Ok(order as u64)
}

impl FieldDescriptor {
    fn from_parts(base: BaseField, ext_modulus: Vec<u64>, order: u64) -> FieldDescriptor {
        let d = (ext_modulus.len() - 1) as u32;
        let packed = (base.p() == 2 && base.e() == 1 && d <= 63).then(|| PackedGf2 {
            modulus: ext_modulus
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | ((c & 1) << i)),
            degree: d,
        });
        // convolution plus reduction accumulate at most 2d products of size
        // (p−1)² each; require that to stay inside u64
        let psq = (base.p() as u128 - 1) * (base.p() as u128 - 1);
        let deferred_prime =
            base.e() == 1 && packed.is_none() && 2 * d as u128 * psq < u64::MAX as u128;
        FieldDescriptor {
            base,
            ext_degree: d,
            ext_modulus,
            order,
            packed,
            deferred_prime,
            trace_fn: OnceLock::new(),
            generator: OnceLock::new(),
        }
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn base_degree(&self) -> u32 {
        self.base.e()
    }

    pub fn ext_degree(&self) -> u32 {
        self.ext_degree
    }

    pub fn base_modulus(&self) -> &[u64] {
        self.base.modulus()
    }

    pub fn ext_modulus(&self) -> &[u64] {
        &self.ext_modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub(crate) fn packed(&self) -> Option<&PackedGf2> {
        self.packed.as_ref()
    }

    pub(crate) fn same_field(&self, other: &FieldDescriptor) -> bool {
        std::ptr::eq(self, other)
            || (self.base == other.base
                && self.ext_degree == other.ext_degree
                && self.ext_modulus == other.ext_modulus)
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: vec![0; self.ext_degree as usize],
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        let mut coeffs = vec![0; self.ext_degree as usize];
        coeffs[0] = 1;
        FieldElement { field: self.clone(), coeffs }
    }

    /// Element from a little-endian coefficient vector of F_q codes.
    pub fn element(self: &Arc<Self>, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.ext_degree as usize {
            return Err(Error::ParameterMismatch(format!(
                "expected {} coefficients, got {}",
                self.ext_degree,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.base.q()) {
            return Err(Error::InvalidInput("coefficient code out of range".into()));
        }
        Ok(FieldElement { field: self.clone(), coeffs })
    }

    /// Embedding of the base field: constant polynomials.
    pub fn from_base(self: &Arc<Self>, code: u64) -> Result<FieldElement> {
        if code >= self.base.q() {
            return Err(Error::InvalidInput("coefficient code out of range".into()));
        }
        let mut coeffs = vec![0; self.ext_degree as usize];
        coeffs[0] = code;
        Ok(FieldElement { field: self.clone(), coeffs })
    }

    /// The power basis element y^i, i < d.
    pub fn basis_power(self: &Arc<Self>, i: usize) -> FieldElement {
        let d = self.ext_degree as usize;
        assert!(i < d, "basis index out of range");
        let mut coeffs = vec![0; d];
        coeffs[i] = 1;
        FieldElement { field: self.clone(), coeffs }
    }

    // -- raw slice operations (no descriptor checks, no allocation churn) --

    pub(crate) fn raw_add(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..out.len() {
            out[i] = self.base.add(a[i], b[i]);
        }
    }

    pub(crate) fn raw_sub(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..out.len() {
            out[i] = self.base.sub(a[i], b[i]);
        }
    }

    /// Schoolbook multiply-and-reduce; `scratch` must have length 2d−1.
    pub(crate) fn raw_mul(&self, a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut [u64]) {
        if let Some(pk) = &self.packed {
            let r = pk.mul(pk.pack(a), pk.pack(b));
            pk.unpack(r, out);
            return;
        }
        let d = self.ext_degree as usize;
        if self.deferred_prime {
            // accumulate raw products in u64, reduce once per read
            let p = self.base.p();
            scratch[..2 * d - 1].fill(0);
            for i in 0..d {
                let ai = a[i];
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in b.iter().enumerate() {
                    scratch[i + j] += ai * bj;
                }
            }
            for k in (d..2 * d - 1).rev() {
                let c = scratch[k] % p;
                if c == 0 {
                    continue;
                }
                for (j, &m) in self.ext_modulus.iter().enumerate().take(d) {
                    if m != 0 {
                        scratch[k - d + j] += (p - m) * c;
                    }
                }
            }
            for (slot, &acc) in out.iter_mut().zip(scratch.iter()).take(d) {
                *slot = acc % p;
            }
            return;
        }
        scratch[..2 * d - 1].fill(0);
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d {
                if b[j] != 0 {
                    scratch[i + j] = self.base.add(scratch[i + j], self.base.mul(a[i], b[j]));
                }
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = scratch[k];
            if c == 0 {
                continue;
            }
            scratch[k] = 0;
            for j in 0..d {
                let m = self.ext_modulus[j];
                if m != 0 {
                    scratch[k - d + j] = self.base.sub(scratch[k - d + j], self.base.mul(c, m));
                }
            }
        }
        out.copy_from_slice(&scratch[..d]);
    }

    pub(crate) fn raw_mul_alloc(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.ext_degree as usize;
        let mut out = vec![0u64; d];
        let mut scratch = vec![0u64; 2 * d - 1];
        self.raw_mul(a, b, &mut out, &mut scratch);
        out
    }

    pub(crate) fn raw_pow(&self, a: &[u64], mut exp: u64) -> Vec<u64> {
        let d = self.ext_degree as usize;
        if let Some(pk) = &self.packed {
            let mut out = vec![0u64; d];
            pk.unpack(pk.pow(pk.pack(a), exp), &mut out);
            return out;
        }
        let mut scratch = vec![0u64; 2 * d - 1];
        let mut base = a.to_vec();
        let mut acc = vec![0u64; d];
        acc[0] = 1;
        let mut tmp = vec![0u64; d];
        while exp > 0 {
            if exp & 1 == 1 {
                self.raw_mul(&acc, &base, &mut tmp, &mut scratch);
                std::mem::swap(&mut acc, &mut tmp);
            }
            exp >>= 1;
            if exp > 0 {
                self.raw_mul(&base.clone(), &base, &mut tmp, &mut scratch);
                std::mem::swap(&mut base, &mut tmp);
            }
        }
        acc
    }

    pub(crate) fn raw_inv(&self, a: &[u64]) -> Result<Vec<u64>> {
        if a.iter().all(|&c| c == 0) {
            return Err(Error::DivisionByZero);
        }
        let d = self.ext_degree as usize;
        let (g, s, _) = poly::ext_gcd(&self.base, a, &self.ext_modulus);
        debug_assert_eq!(poly::degree(&g), Some(0), "modulus is irreducible");
        let ginv = self.base.inv(g[0])?;
        let mut out = poly::scale(&self.base, &s, ginv);
        out.resize(d, 0);
        Ok(out)
    }

    /// Coefficients of the trace functional: `trace_coeffs()[i] = Tr(y^i)`,
    /// each an element of the base field. Tr(x) is then the dot product of
    /// x's coefficients with these.
    pub(crate) fn trace_coeffs(&self) -> &[u64] {
        self.trace_fn.get_or_init(|| {
            let d = self.ext_degree as usize;
            let q = self.base.q();
            let y: Vec<u64> = if d == 1 {
                vec![self.base.neg(self.ext_modulus[0])]
            } else {
                let mut v = vec![0u64; d];
                v[1] = 1;
                v
            };
            // Frobenius conjugates y^(q^j), j = 0..d
            let mut conj = vec![y];
            for j in 1..d {
                let prev = conj[j - 1].clone();
                conj.push(self.raw_pow(&prev, q));
            }
            // t_i = sum_j conj[j]^i
            let mut acc = vec![vec![0u64; d]; d];
            for z in &conj {
                let mut w = vec![0u64; d];
                w[0] = 1;
                for (i, slot) in acc.iter_mut().enumerate() {
                    let mut sum = vec![0u64; d];
                    self.raw_add(slot, &w, &mut sum);
                    *slot = sum;
                    if i + 1 < d {
                        w = self.raw_mul_alloc(&w, z);
                    }
                }
            }
            acc.into_iter()
                .map(|t| {
                    assert!(
                        t[1..].iter().all(|&c| c == 0),
                        "trace of a basis element must lie in the base field"
                    );
                    t[0]
                })
                .collect()
        })
    }

    pub(crate) fn raw_trace(&self, a: &[u64]) -> u64 {
        let tf = self.trace_coeffs();
        if self.deferred_prime {
            let mut acc = 0u64;
            for (&c, &t) in a.iter().zip(tf.iter()) {
                acc += c * t;
            }
            return acc % self.base.p();
        }
        let mut acc = 0u64;
        for (i, &c) in a.iter().enumerate() {
            if c != 0 && tf[i] != 0 {
                acc = self.base.add(acc, self.base.mul(c, tf[i]));
            }
        }
        acc
    }

    /// Trace functional as a GF(2) bit mask, when the packed form exists.
    pub(crate) fn packed_trace_mask(&self) -> Option<u64> {
        let pk = self.packed.as_ref()?;
        Some(pk.pack(self.trace_coeffs()))
    }

    fn lex_coeffs(&self, mut rank: u64) -> Vec<u64> {
        let d = self.ext_degree as usize;
        let q = self.base.q();
        let mut c = vec![0u64; d];
        for slot in c.iter_mut().rev() {
            *slot = rank % q;
            rank /= q;
        }
        c
    }

    fn find_generators(&self, count: usize) -> Vec<Vec<u64>> {
        let n = self.order - 1;
        let prime_divisors: Vec<u64> = factorize(n).into_iter().map(|(l, _)| l).collect();
        let mut found = Vec::new();
        for rank in 1..self.order {
            let cand = self.lex_coeffs(rank);
            let is_gen = prime_divisors
                .iter()
                .all(|&l| self.raw_pow(&cand, n / l).iter().enumerate().any(|(i, &c)| c != u64::from(i == 0)));
            if is_gen {
                debug_assert!(self
                    .raw_pow(&cand, n)
                    .iter()
                    .enumerate()
                    .all(|(i, &c)| c == u64::from(i == 0)));
                found.push(cand);
                if found.len() == count {
                    break;
                }
            }
        }
        found
    }
}

/// The smallest generator of F_{q^d}^× in coefficient-lexicographic order.
/// Deterministic, and cached on the descriptor.
pub fn multiplicative_generator(field: &Field) -> FieldElement {
    let coeffs = field
        .generator
        .get_or_init(|| field.find_generators(1).pop().expect("cyclic group has a generator"));
    FieldElement { field: field.clone(), coeffs: coeffs.clone() }
}

/// The `count` smallest generators in coefficient-lexicographic order.
pub fn smallest_generators(field: &Field, count: usize) -> Vec<FieldElement> {
    field
        .find_generators(count)
        .into_iter()
        .map(|coeffs| FieldElement { field: field.clone(), coeffs })
        .collect()
}

/// γ^((q^d−1)/m) for the canonical generator γ; has exact multiplicative
/// order m. Errors unless m divides q^d − 1.
pub fn element_of_order(field: &Field, m: u64) -> Result<FieldElement> {
    let n = field.order - 1;
    if m == 0 || !n.is_multiple_of(m) {
        return Err(Error::OrderUnavailable { order: m, group_order: n });
    }
    let g = multiplicative_generator(field);
    Ok(g.pow(n / m))
}

// ---------------------------------------------------------------------------
// Field elements
// ---------------------------------------------------------------------------

/// One element of F_{q^d}: a length-d coefficient vector over F_q,
/// little-endian in the extension generator, plus a handle to its field.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u64>,
}

impl std::fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldElement({:?} over F_{})", self.coeffs, self.field.order())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.coeffs == other.coeffs
    }
}
impl Eq for FieldElement {}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check_same(&self, rhs: &FieldElement) -> Result<()> {
        if self.field.same_field(&rhs.field) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn add(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.check_same(rhs)?;
        let mut out = vec![0u64; self.coeffs.len()];
        self.field.raw_add(&self.coeffs, &rhs.coeffs, &mut out);
        Ok(FieldElement { field: self.field.clone(), coeffs: out })
    }

    pub fn sub(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.check_same(rhs)?;
        let mut out = vec![0u64; self.coeffs.len()];
        self.field.raw_sub(&self.coeffs, &rhs.coeffs, &mut out);
        Ok(FieldElement { field: self.field.clone(), coeffs: out })
    }

    pub fn neg(&self) -> FieldElement {
        let coeffs = self.coeffs.iter().map(|&c| self.field.base.neg(c)).collect();
        FieldElement { field: self.field.clone(), coeffs }
    }

    pub fn mul(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.check_same(rhs)?;
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs: self.field.raw_mul_alloc(&self.coeffs, &rhs.coeffs),
        })
    }

    /// Scale by a base-field code.
    pub fn scale(&self, c: u64) -> FieldElement {
        let coeffs = self.coeffs.iter().map(|&x| self.field.base.mul(x, c)).collect();
        FieldElement { field: self.field.clone(), coeffs }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs: self.field.raw_inv(&self.coeffs)?,
        })
    }

    pub fn pow(&self, exp: u64) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coeffs: self.field.raw_pow(&self.coeffs, exp),
        }
    }

    /// Field trace down to F_q: Tr(x) = Σ_{i<d} x^(q^i), returned as a base
    /// field code. The result satisfies r^q = r.
    pub fn trace_to_base(&self) -> u64 {
        self.field.raw_trace(&self.coeffs)
    }

    /// Multiplicative order; the element must be nonzero.
    pub fn multiplicative_order(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.order - 1;
        let mut ord = n;
        for (l, _) in factorize(n) {
            while ord.is_multiple_of(l) {
                let cand = self.pow(ord / l);
                if cand.is_one() {
                    ord /= l;
                } else {
                    break;
                }
            }
        }
        Ok(ord)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_is_trivial_prime_field() {
        let f = build_field(2, 1, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.ext_modulus(), &[0, 1]);
        assert_eq!(f.base_modulus(), &[0, 1]);
        assert!(f.one().add(&f.one()).unwrap().is_zero());
    }

    #[test]
    fn f4_has_unique_quadratic_modulus() {
        let f = build_field(2, 1, 2).unwrap();
        assert_eq!(f.ext_modulus(), &[1, 1, 1]); // x^2 + x + 1
    }

    #[test]
    fn f9_modulus_is_lex_smallest() {
        // enumerate monic quadratics over F_3 by exhaustive root search
        let f3 = BaseField::new(3, 1).unwrap();
        let mut first = None;
        'outer: for c0 in 0..3u64 {
            for c1 in 0..3u64 {
                let has_root = (0..3u64).any(|x| (x * x + c1 * x + c0) % 3 == 0);
                if !has_root {
                    first = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        let f9 = build_field(3, 1, 2).unwrap();
        assert_eq!(f9.ext_modulus(), first.unwrap().as_slice());
        assert_eq!(f9.ext_modulus(), &[1, 0, 1]); // x^2 + 1
        assert!(f3.is_irreducible(&[1, 0, 1]).unwrap());
    }

    #[test]
    fn composite_characteristic_rejected() {
        assert_eq!(build_field(6, 1, 1).unwrap_err(), Error::NonPrimeCharacteristic(6));
    }

    #[test]
    fn order_bound_enforced() {
        let err = build_field_bounded(2, 1, 40, 1 << 20).unwrap_err();
        assert!(matches!(err, Error::ResourceExceeded { .. }));
    }

    #[test]
    fn f4_defining_relation() {
        let f4 = build_field(2, 1, 2).unwrap();
        let omega = f4.element(vec![0, 1]).unwrap();
        let omega_sq = omega.mul(&omega).unwrap();
        assert_eq!(omega_sq, f4.element(vec![1, 1]).unwrap()); // ω² = ω + 1
    }

    #[test]
    fn inv_of_one_is_one() {
        for field in [build_field(2, 1, 3).unwrap(), build_field(3, 1, 2).unwrap(), build_field(5, 1, 1).unwrap()] {
            assert_eq!(field.one().inv().unwrap(), field.one());
        }
    }

    #[test]
    fn lagrange_in_f9() {
        let f9 = build_field(3, 1, 2).unwrap();
        for rank in 1..9u64 {
            let g = f9.element(vec![rank % 3, rank / 3]).unwrap();
            assert!(g.pow(8).is_one());
        }
    }

    #[test]
    fn inv_zero_fails() {
        let f4 = build_field(2, 1, 2).unwrap();
        assert_eq!(f4.zero().inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn descriptor_mismatch_detected() {
        let f4 = build_field(2, 1, 2).unwrap();
        let f8 = build_field(2, 1, 3).unwrap();
        let a = f4.one();
        let b = f8.one();
        assert_eq!(a.add(&b).unwrap_err(), Error::DescriptorMismatch);
    }

    #[test]
    fn trace_examples() {
        let f4 = build_field(2, 1, 2).unwrap();
        assert_eq!(f4.zero().trace_to_base(), 0);
        let omega = f4.element(vec![0, 1]).unwrap();
        // ω + ω² = ω + (ω+1) = 1
        assert_eq!(omega.trace_to_base(), 1);

        // d = 1: the trace is the identity
        let f5 = build_field(5, 1, 1).unwrap();
        for c in 0..5 {
            assert_eq!(f5.from_base(c).unwrap().trace_to_base(), c);
        }
    }

    #[test]
    fn trace_is_additive_and_frobenius_invariant() {
        let f8 = build_field(2, 1, 3).unwrap();
        let elems: Vec<FieldElement> =
            (0..8u64).map(|r| f8.element(vec![r & 1, (r >> 1) & 1, (r >> 2) & 1]).unwrap()).collect();
        for a in &elems {
            assert_eq!(a.pow(2).trace_to_base(), a.trace_to_base());
            for b in &elems {
                let sum = a.add(b).unwrap();
                let f = f8.base();
                assert_eq!(sum.trace_to_base(), f.add(a.trace_to_base(), b.trace_to_base()));
            }
        }
    }

    #[test]
    fn generator_of_f2_is_one() {
        let f2 = build_field(2, 1, 1).unwrap();
        assert!(multiplicative_generator(&f2).is_one());
    }

    #[test]
    fn generator_of_f4_is_omega() {
        let f4 = build_field(2, 1, 2).unwrap();
        let g = multiplicative_generator(&f4);
        assert_eq!(g.coeffs(), &[0, 1]);
        assert!(!g.is_one());
        assert!(!g.pow(2).is_one());
        assert!(g.pow(3).is_one());
    }

    #[test]
    fn generator_of_f9_is_lex_smallest_order_8() {
        let f9 = build_field(3, 1, 2).unwrap();
        let g = multiplicative_generator(&f9);
        // exhaustive order check over all 8 nonzero elements, in lex order
        let mut expected = None;
        for c0 in 0..3u64 {
            for c1 in 0..3u64 {
                if (c0, c1) == (0, 0) {
                    continue;
                }
                let e = f9.element(vec![c0, c1]).unwrap();
                if e.multiplicative_order().unwrap() == 8 {
                    expected = Some(e);
                    break;
                }
            }
            if expected.is_some() {
                break;
            }
        }
        assert_eq!(g, expected.unwrap());
        assert_eq!(g.coeffs(), &[1, 1]);
    }

    #[test]
    fn element_of_order_examples() {
        let f4 = build_field(2, 1, 2).unwrap();
        let t = element_of_order(&f4, 3).unwrap();
        assert_eq!(t, multiplicative_generator(&f4)); // (4−1)/3 = 1

        let f9 = build_field(3, 1, 2).unwrap();
        assert!(element_of_order(&f9, 1).unwrap().is_one());
        let t4 = element_of_order(&f9, 4).unwrap();
        assert_eq!(t4.coeffs(), &[0, 2]); // γ² for γ = 1 + y
        assert!(t4.pow(4).is_one());
        assert!(!t4.pow(2).is_one());

        assert!(matches!(element_of_order(&f9, 3), Err(Error::OrderUnavailable { .. })));
    }

    #[test]
    fn order_of_generator_spans_group() {
        for (p, e, d) in [(2, 1, 4), (3, 1, 3), (2, 2, 2), (5, 1, 2)] {
            let f = build_field(p, e, d).unwrap();
            let g = multiplicative_generator(&f);
            assert_eq!(g.multiplicative_order().unwrap(), f.order() - 1);
        }
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = BaseField::new(2, 1).unwrap();
        assert!(f2.is_irreducible(&[1, 1, 1]).unwrap()); // x²+x+1
        assert!(!f2.is_irreducible(&[1, 0, 1]).unwrap()); // x²+1 = (x+1)²
        let f3 = BaseField::new(3, 1).unwrap();
        assert!(f3.is_irreducible(&[1, 0, 1]).unwrap()); // x²+1 over F_3
        assert_eq!(f2.is_irreducible(&[1, 1, 2]).unwrap_err(), Error::NonMonic);
        assert_eq!(f2.is_irreducible(&[]).unwrap_err(), Error::NonMonic);
    }

    /// The Frobenius power test must agree with exhaustive factor search.
    #[test]
    fn irreducibility_matches_exhaustive_search() {
        for q in [2u64, 3, 4] {
            let f = BaseField::from_order(q).unwrap();
            for deg in 2..=4u32 {
                for cand in poly::monic_lex_iter(q, deg) {
                    let fast = f.is_irreducible(&cand).unwrap();
                    let slow = (1..=deg / 2).all(|dd| {
                        poly::monic_lex_iter(q, dd)
                            .all(|div| !poly::is_zero(&cand) && !poly::is_zero(&poly::rem(&f, &cand, &div)))
                    });
                    assert_eq!(fast, slow, "q={q} cand={cand:?}");
                }
            }
        }
    }

    #[test]
    fn tower_base_field_arithmetic() {
        // F_4 as a base field: codes 0..4 with ω = 2, ω+1 = 3
        let f4 = BaseField::new(2, 2).unwrap();
        assert_eq!(f4.mul(2, 2), 3); // ω² = ω + 1
        assert_eq!(f4.mul(2, 3), 1); // ω·ω² = 1
        assert_eq!(f4.add(2, 3), 1); // ω + ω + 1 = 1
        assert_eq!(f4.inv(2).unwrap(), 3);

        // and an extension over it: F_{4^2} = F_16
        let f16 = extension_of(&f4, 2, DEFAULT_FIELD_ORDER_BOUND).unwrap();
        assert_eq!(f16.order(), 16);
        let g = multiplicative_generator(&f16);
        assert_eq!(g.multiplicative_order().unwrap(), 15);
        // trace lands in F_4 and is surjective
        let mut seen = std::collections::BTreeSet::new();
        for r in 0..16u64 {
            let e = f16.element(vec![r % 4, r / 4]).unwrap();
            seen.insert(e.trace_to_base());
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn packed_path_matches_generic() {
        // same field with and without the packed accelerator
        let f = build_field(2, 1, 6).unwrap();
        let pk = f.packed().unwrap();
        let mut scratch = [0u64; 11];
        for a in 0..64u64 {
            for b in 0..64u64 {
                let av: Vec<u64> = (0..6).map(|i| (a >> i) & 1).collect();
                let bv: Vec<u64> = (0..6).map(|i| (b >> i) & 1).collect();
                // generic path, forced by going through the schoolbook code
                let d = 6usize;
                let mut out = vec![0u64; d];
                scratch.fill(0);
                let mut prod = vec![0u64; 2 * d - 1];
                for i in 0..d {
                    for j in 0..d {
                        prod[i + j] ^= av[i] & bv[j];
                    }
                }
                for k in (d..2 * d - 1).rev() {
                    if prod[k] == 1 {
                        prod[k] = 0;
                        for j in 0..d {
                            prod[k - d + j] ^= f.ext_modulus()[j];
                        }
                    }
                }
                out.copy_from_slice(&prod[..d]);
                // packed path
                let packed = pk.mul(a, b);
                assert_eq!(pk.pack(&out), packed, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn field_with_modulus_validates() {
        let f2 = BaseField::new(2, 1).unwrap();
        assert!(field_with_modulus(&f2, &[1, 0, 1], 1 << 10).is_err()); // reducible
        let f = field_with_modulus(&f2, &[1, 1, 1], 1 << 10).unwrap();
        assert_eq!(f.order(), 4);
    }

    /// Base fields too large for lookup tables fall back to the decode/
    /// convolve/reduce representation; check it against digit arithmetic.
    #[test]
    fn untabled_base_field_matches_digit_arithmetic() {
        let f = BaseField::new(31, 2).unwrap(); // q = 961 > TABLE_LIMIT
        assert_eq!(f.q(), 961);
        let decode = |c: u64| (c % 31, c / 31);
        let encode = |a: u64, b: u64| a + 31 * b;
        // modulus is x² + c1·x + c0; x² ≡ −c1·x − c0
        let (c0, c1) = (f.modulus()[0], f.modulus()[1]);
        let mut state = 0xabcdefu64;
        for _ in 0..200 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let a = (state >> 16) % 961;
            let b = (state >> 40) % 961;
            let (a0, a1) = decode(a);
            let (b0, b1) = decode(b);
            assert_eq!(f.add(a, b), encode((a0 + b0) % 31, (a1 + b1) % 31));
            // (a0 + a1·x)(b0 + b1·x) with x² ≡ −c1·x − c0
            let lo = a0 * b0;
            let mid = a0 * b1 + a1 * b0;
            let hi = a1 * b1;
            let w0 = (lo + hi * ((31 - c0) % 31)) % 31;
            let w1 = (mid + hi * ((31 - c1) % 31)) % 31;
            assert_eq!(f.mul(a, b), encode(w0, w1), "a={a} b={b}");
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            assert_eq!(f.add(a, f.neg(a)), 0);
        }
        // and an extension over it exercises the generic schoolbook path
        let ext = extension_of(&f, 2, DEFAULT_FIELD_ORDER_BOUND).unwrap();
        assert_eq!(ext.order(), 961 * 961);
        let g = multiplicative_generator(&ext);
        assert_eq!(g.multiplicative_order().unwrap(), 961 * 961 - 1);
        let x = ext.element(vec![900, 73]).unwrap();
        assert!(x.mul(&x.inv().unwrap()).unwrap().is_one());
        let t = x.trace_to_base();
        assert_eq!(f.pow(t, 961), t); // trace lands in the base field
    }
}
