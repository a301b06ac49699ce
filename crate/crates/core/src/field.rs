//! Exact arithmetic in GF(q = p^t) and extensions GF(q^e).
//!
//! Fields are presented as a two-level tower GF(p) -> GF(q) -> GF(q^e) so
//! that every extension element has canonical coordinates over GF(q)
//! (see [`ExtFieldSpec::expand`]). An element is stored as its integer code
//! in `[0, q^e)` under base-q positional encoding of its coefficient vector;
//! the code of a sum is the digit-wise sum of codes, and multiplication goes
//! through lookup tables (log/antilog tables for extensions up to 2^16
//! elements, schoolbook polynomial arithmetic above that).
//!
//! Desk-scale caps: q <= 16 and q^e <= 2^20. Larger parameters are rejected
//! at construction time.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported base-field order.
pub const MAX_BASE_ORDER: u32 = 16;
/// Largest supported extension-field order.
pub const MAX_EXT_ORDER: u64 = 1 << 20;
/// Extensions up to this order multiply through log/antilog tables.
const LOG_TABLE_LIMIT: u64 = 1 << 16;

/// A field element, stored as its integer code in `[0, order)`.
///
/// Codes are positional: an element `sum c_i * alpha^i` of an extension with
/// subfield order `r` has code `sum code(c_i) * r^i`. The zero element is
/// code 0 and the one element is code 1 in every field of the tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The base field GF(q) with q = p^t, presented over GF(p) by a monic
/// irreducible modulus polynomial of degree t.
///
/// All four arithmetic tables are materialized at construction (q <= 16, so
/// at most 256 entries each); operations are single lookups and the value is
/// immutable afterwards, safe to share across threads behind an [`Arc`].
///
/// For t = 1 the modulus is the identity convention `x`, and arithmetic is
/// plain arithmetic mod p.
pub struct FieldSpec {
    p: u32,
    t: usize,
    q: u32,
    /// Monic irreducible modulus over GF(p); constant term first, length t+1.
    modulus: Vec<FieldElem>,
    add_t: Vec<u32>,
    mul_t: Vec<u32>,
    neg_t: Vec<u32>,
    inv_t: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.t == other.t && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}

impl FieldSpec {
    /// GF(p^t) with the deterministic default modulus: the lexicographically
    /// smallest monic irreducible polynomial of degree t over GF(p).
    pub fn new(p: u32, t: usize) -> Result<Arc<FieldSpec>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p as u64));
        }
        if t == 0 {
            return Err(Error::InvalidParameter("field degree must be >= 1".into()));
        }
        let prime = Self::prime_field(p)?;
        if t == 1 {
            return Ok(prime);
        }
        let q = (p as u64).checked_pow(t as u32).unwrap_or(u64::MAX);
        if q > MAX_BASE_ORDER as u64 {
            return Err(Error::FieldTooLarge(format!(
                "GF({p}^{t}) exceeds the base-field cap {MAX_BASE_ORDER}"
            )));
        }
        let modulus = find_irreducible(&prime, t);
        Self::tower(&prime, t, modulus)
    }

    /// GF(p^t) with an explicit modulus (validated: monic, degree t,
    /// irreducible over GF(p)).
    pub fn with_modulus(p: u32, t: usize, modulus: Vec<FieldElem>) -> Result<Arc<FieldSpec>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p as u64));
        }
        if t == 0 {
            return Err(Error::InvalidParameter("field degree must be >= 1".into()));
        }
        let prime = Self::prime_field(p)?;
        if t == 1 {
            if modulus != vec![FieldElem(0), FieldElem(1)] {
                return Err(Error::BadModulus(
                    "degree-1 fields use the identity convention x".into(),
                ));
            }
            return Ok(prime);
        }
        let q = (p as u64).checked_pow(t as u32).unwrap_or(u64::MAX);
        if q > MAX_BASE_ORDER as u64 {
            return Err(Error::FieldTooLarge(format!(
                "GF({p}^{t}) exceeds the base-field cap {MAX_BASE_ORDER}"
            )));
        }
        validate_modulus(&prime, &modulus, t)?;
        Self::tower(&prime, t, modulus)
    }

    /// GF(q) for a prime power q, factored internally into (p, t).
    pub fn from_order(q: u64) -> Result<Arc<FieldSpec>> {
        let (p, t) = factor_prime_power(q)?;
        FieldSpec::new(p, t)
    }

    fn prime_field(p: u32) -> Result<Arc<FieldSpec>> {
        if p > MAX_BASE_ORDER {
            return Err(Error::FieldTooLarge(format!(
                "GF({p}) exceeds the base-field cap {MAX_BASE_ORDER}"
            )));
        }
        let q = p as usize;
        let mut add_t = vec![0u32; q * q];
        let mut mul_t = vec![0u32; q * q];
        let mut neg_t = vec![0u32; q];
        let mut inv_t = vec![0u32; q];
        for a in 0..p {
            neg_t[a as usize] = (p - a) % p;
            for b in 0..p {
                add_t[(a * p + b) as usize] = (a + b) % p;
                let m = (a * b) % p;
                mul_t[(a * p + b) as usize] = m;
                if m == 1 {
                    inv_t[a as usize] = b;
                }
            }
        }
        Ok(Arc::new(FieldSpec {
            p,
            t: 1,
            q: p,
            modulus: vec![FieldElem(0), FieldElem(1)],
            add_t,
            mul_t,
            neg_t,
            inv_t,
        }))
    }

    /// Build GF(p^t) tables from a validated modulus over the prime field.
    fn tower(prime: &Arc<FieldSpec>, t: usize, modulus: Vec<FieldElem>) -> Result<Arc<FieldSpec>> {
        let p = prime.q;
        let q = p.pow(t as u32);
        let qu = q as usize;
        let decompose = |code: u32| -> Vec<FieldElem> {
            let mut c = code;
            (0..t)
                .map(|_| {
                    let d = FieldElem(c % p);
                    c /= p;
                    d
                })
                .collect()
        };
        let recompose = |coeffs: &[FieldElem]| -> u32 {
            coeffs.iter().rev().fold(0u32, |acc, c| acc * p + c.0)
        };
        let mut add_t = vec![0u32; qu * qu];
        let mut mul_t = vec![0u32; qu * qu];
        let mut neg_t = vec![0u32; qu];
        let mut inv_t = vec![0u32; qu];
        for a in 0..q {
            let ca = decompose(a);
            neg_t[a as usize] = recompose(
                &ca.iter()
                    .map(|&x| prime.neg(x))
                    .collect::<Vec<_>>(),
            );
            for b in 0..q {
                let cb = decompose(b);
                let sum: Vec<FieldElem> =
                    ca.iter().zip(&cb).map(|(&x, &y)| prime.add(x, y)).collect();
                add_t[(a * q + b) as usize] = recompose(&sum);
                let prod = poly_rem(prime, &poly_mul(prime, &ca, &cb), &modulus);
                let mut padded = prod;
                padded.resize(t, FieldElem::ZERO);
                let m = recompose(&padded);
                mul_t[(a * q + b) as usize] = m;
                if m == 1 {
                    inv_t[a as usize] = b;
                }
            }
        }
        Ok(Arc::new(FieldSpec {
            p,
            t,
            q,
            modulus,
            add_t,
            mul_t,
            neg_t,
            inv_t,
        }))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.t
    }

    /// Field order q = p^t.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[FieldElem] {
        &self.modulus
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add_t[(a.0 * self.q + b.0) as usize])
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg_t[a.0 as usize])
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul_t[(a.0 * self.q + b.0) as usize])
    }

    /// Multiplicative inverse; zero is a domain error.
    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero(self.q as u64));
        }
        Ok(FieldElem(self.inv_t[a.0 as usize]))
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        if a.is_zero() {
            return if e == 0 { FieldElem::ONE } else { FieldElem::ZERO };
        }
        e %= (self.q - 1) as u64;
        let mut acc = FieldElem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// All elements in code order.
    pub fn elems(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    /// Coefficient vector over GF(p) (length t, constant coordinate first).
    pub fn coeffs(&self, a: FieldElem) -> Vec<FieldElem> {
        let mut c = a.0;
        (0..self.t)
            .map(|_| {
                let d = FieldElem(c % self.p);
                c /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[FieldElem]) -> FieldElem {
        debug_assert_eq!(coeffs.len(), self.t);
        FieldElem(coeffs.iter().rev().fold(0u32, |acc, c| acc * self.p + c.0))
    }
}

/// Factor a prime power q = p^t; anything else is rejected.
pub fn factor_prime_power(q: u64) -> Result<(u32, usize)> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut rest = q;
            let mut t = 0usize;
            while rest.is_multiple_of(p) {
                rest /= p;
                t += 1;
            }
            if rest != 1 {
                return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
            }
            return Ok((p as u32, t));
        }
        p += 1;
    }
    Ok((q as u32, 1))
}

// --- polynomial helpers over a FieldSpec (constant term first) ---

fn poly_trim(f: &mut Vec<FieldElem>) {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
}

pub(crate) fn poly_mul(field: &FieldSpec, f: &[FieldElem], g: &[FieldElem]) -> Vec<FieldElem> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElem::ZERO; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(a, b));
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of f mod g, with g monic.
pub(crate) fn poly_rem(field: &FieldSpec, f: &[FieldElem], g: &[FieldElem]) -> Vec<FieldElem> {
    let mut r = f.to_vec();
    poly_trim(&mut r);
    let dg = g.len() - 1;
    debug_assert_eq!(g[dg], FieldElem::ONE, "modulus must be monic");
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if !lead.is_zero() {
            for (j, &gc) in g.iter().enumerate() {
                r[shift + j] = field.sub(r[shift + j], field.mul(lead, gc));
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

/// Monic degree-d polynomials in lexicographic coefficient order, the
/// constant term most significant.
fn monic_polys(field: &FieldSpec, d: usize) -> impl Iterator<Item = Vec<FieldElem>> + '_ {
    let q = field.order() as u64;
    let total = q.pow(d as u32);
    (0..total).map(move |v| {
        let mut coeffs = Vec::with_capacity(d + 1);
        for j in 0..d {
            let digit = (v / q.pow((d - 1 - j) as u32)) % q;
            coeffs.push(FieldElem(digit as u32));
        }
        coeffs.push(FieldElem::ONE);
        coeffs
    })
}

/// Irreducibility by exhaustive trial division over all monic divisors of
/// degree up to deg(f)/2.
pub fn is_irreducible(field: &FieldSpec, f: &[FieldElem]) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    for dd in 1..=d / 2 {
        for g in monic_polys(field, dd) {
            if poly_rem(field, f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The lexicographically smallest monic irreducible polynomial of the given
/// degree over the base field, under coefficient order with the constant
/// term most significant and field elements ordered by integer code.
pub fn find_irreducible(field: &FieldSpec, degree: usize) -> Vec<FieldElem> {
    assert!(degree >= 1, "degree must be >= 1");
    monic_polys(field, degree)
        .find(|f| is_irreducible(field, f))
        .expect("irreducible polynomials exist over every finite field in every degree")
}

fn validate_modulus(field: &FieldSpec, modulus: &[FieldElem], degree: usize) -> Result<()> {
    if modulus.len() != degree + 1 {
        return Err(Error::BadModulus(format!(
            "expected degree {degree}, got {}",
            modulus.len().saturating_sub(1)
        )));
    }
    if modulus[degree] != FieldElem::ONE {
        return Err(Error::BadModulus("modulus must be monic".into()));
    }
    if modulus.iter().any(|c| c.0 >= field.order()) {
        return Err(Error::BadModulus("coefficient out of field range".into()));
    }
    if !is_irreducible(field, modulus) {
        return Err(Error::BadModulus("modulus is reducible".into()));
    }
    Ok(())
}

/// The extension GF(q^e) over a base GF(q), elements encoded base q.
///
/// Multiplication uses log/antilog tables when q^e <= 2^16 (verification
/// loops are multiplication-bound) and schoolbook polynomial arithmetic
/// otherwise.
pub struct ExtFieldSpec {
    base: Arc<FieldSpec>,
    e: usize,
    size: u64,
    /// Monic irreducible modulus over GF(q); constant term first, length e+1.
    modulus: Vec<FieldElem>,
    exp_t: Vec<u32>,
    log_t: Vec<u32>,
}

impl fmt::Debug for ExtFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.base.order(), self.e)
    }
}

impl PartialEq for ExtFieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for ExtFieldSpec {}

impl ExtFieldSpec {
    /// GF(q^e) with the deterministic default modulus over GF(q).
    pub fn new(base: Arc<FieldSpec>, e: usize) -> Result<ExtFieldSpec> {
        if e == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        let size = (base.order() as u64)
            .checked_pow(e as u32)
            .filter(|&s| s <= MAX_EXT_ORDER)
            .ok_or_else(|| {
                Error::FieldTooLarge(format!(
                    "GF({}^{e}) exceeds the extension cap 2^20",
                    base.order()
                ))
            })?;
        let modulus = find_irreducible(&base, e);
        Ok(Self::build(base, e, size, modulus))
    }

    /// GF(q^e) with an explicit modulus (validated over GF(q)).
    pub fn with_modulus(
        base: Arc<FieldSpec>,
        e: usize,
        modulus: Vec<FieldElem>,
    ) -> Result<ExtFieldSpec> {
        if e == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        let size = (base.order() as u64)
            .checked_pow(e as u32)
            .filter(|&s| s <= MAX_EXT_ORDER)
            .ok_or_else(|| {
                Error::FieldTooLarge(format!(
                    "GF({}^{e}) exceeds the extension cap 2^20",
                    base.order()
                ))
            })?;
        validate_modulus(&base, &modulus, e)?;
        Ok(Self::build(base, e, size, modulus))
    }

    fn build(base: Arc<FieldSpec>, e: usize, size: u64, modulus: Vec<FieldElem>) -> ExtFieldSpec {
        let mut ext = ExtFieldSpec {
            base,
            e,
            size,
            modulus,
            exp_t: Vec::new(),
            log_t: Vec::new(),
        };
        if size <= LOG_TABLE_LIMIT {
            ext.build_log_tables();
        }
        ext
    }

    fn build_log_tables(&mut self) {
        let n = self.size - 1;
        if n == 1 {
            self.exp_t = vec![1];
            self.log_t = vec![0, 0];
            return;
        }
        let mut factors = Vec::new();
        let mut rest = n;
        let mut d = 2u64;
        while d * d <= rest {
            if rest.is_multiple_of(d) {
                factors.push(d);
                while rest.is_multiple_of(d) {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 {
            factors.push(rest);
        }
        let gen = (2..self.size)
            .map(|c| FieldElem(c as u32))
            .find(|&g| {
                factors
                    .iter()
                    .all(|&f| self.pow_schoolbook(g, n / f) != FieldElem::ONE)
            })
            .expect("the multiplicative group of a finite field is cyclic");
        let mut exp_t = Vec::with_capacity(n as usize);
        let mut log_t = vec![0u32; self.size as usize];
        let mut acc = FieldElem::ONE;
        for i in 0..n {
            exp_t.push(acc.0);
            log_t[acc.0 as usize] = i as u32;
            acc = self.mul_schoolbook(acc, gen);
        }
        debug_assert_eq!(acc, FieldElem::ONE);
        self.exp_t = exp_t;
        self.log_t = log_t;
    }

    pub fn base(&self) -> &Arc<FieldSpec> {
        &self.base
    }

    pub fn ext_degree(&self) -> usize {
        self.e
    }

    /// Field order q^e.
    pub fn order(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[FieldElem] {
        &self.modulus
    }

    /// The residue of x, i.e. the generator of the polynomial basis.
    pub fn alpha(&self) -> FieldElem {
        if self.e == 1 {
            // x mod (x + c) is -c
            self.base.neg(self.modulus[0])
        } else {
            FieldElem(self.base.order())
        }
    }

    /// Coordinates over GF(q) with respect to the polynomial basis
    /// 1, alpha, ..., alpha^(e-1). GF(q)-linear and bijective.
    pub fn expand(&self, a: FieldElem) -> Vec<FieldElem> {
        let q = self.base.order();
        let mut c = a.0;
        (0..self.e)
            .map(|_| {
                let d = FieldElem(c % q);
                c /= q;
                d
            })
            .collect()
    }

    /// Inverse of [`expand`](Self::expand).
    pub fn from_vector(&self, coords: &[FieldElem]) -> FieldElem {
        debug_assert_eq!(coords.len(), self.e);
        let q = self.base.order();
        FieldElem(coords.iter().rev().fold(0u32, |acc, c| acc * q + c.0))
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.base.characteristic() == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        let ca = self.expand(a);
        let cb = self.expand(b);
        let sum: Vec<FieldElem> = ca
            .iter()
            .zip(&cb)
            .map(|(&x, &y)| self.base.add(x, y))
            .collect();
        self.from_vector(&sum)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.base.characteristic() == 2 {
            return a;
        }
        let ca = self.expand(a);
        let n: Vec<FieldElem> = ca.iter().map(|&x| self.base.neg(x)).collect();
        self.from_vector(&n)
    }

    fn mul_schoolbook(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let ca = self.expand(a);
        let cb = self.expand(b);
        let prod = poly_rem(&self.base, &poly_mul(&self.base, &ca, &cb), &self.modulus);
        let mut padded = prod;
        padded.resize(self.e, FieldElem::ZERO);
        self.from_vector(&padded)
    }

    fn pow_schoolbook(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut acc = FieldElem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_schoolbook(acc, base);
            }
            base = self.mul_schoolbook(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        if self.exp_t.is_empty() {
            return self.mul_schoolbook(a, b);
        }
        let n = self.size - 1;
        let idx = (self.log_t[a.0 as usize] as u64 + self.log_t[b.0 as usize] as u64) % n;
        FieldElem(self.exp_t[idx as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero(self.size));
        }
        let n = self.size - 1;
        if self.exp_t.is_empty() {
            return Ok(self.pow_schoolbook(a, n - 1));
        }
        let idx = (n - self.log_t[a.0 as usize] as u64) % n;
        Ok(FieldElem(self.exp_t[idx as usize]))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if a.is_zero() {
            return if e == 0 { FieldElem::ONE } else { FieldElem::ZERO };
        }
        let n = self.size - 1;
        let e = e % n;
        if self.exp_t.is_empty() {
            return self.pow_schoolbook(a, e);
        }
        let idx = (self.log_t[a.0 as usize] as u64 * e) % n;
        FieldElem(self.exp_t[idx as usize])
    }

    /// a^(q^i): the i-th power of the Frobenius over GF(q). GF(q)-linear,
    /// and the identity for i = e.
    pub fn frobenius(&self, a: FieldElem, i: usize) -> FieldElem {
        if a.is_zero() {
            return FieldElem::ZERO;
        }
        let n = self.size - 1;
        let q = self.base.order() as u64;
        let mut e = 1u64;
        for _ in 0..i {
            e = (e * q) % n;
        }
        self.pow(a, e)
    }

    /// All elements in code order.
    pub fn elems(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.size).map(|c| FieldElem(c as u32))
    }
}
