//! Finite field arithmetic for GF(p^k) with an explicit, deterministic modulus.
//!
//! A [`FieldCtx`] owns everything needed for exact arithmetic: the prime `p`,
//! the extension degree `k`, the monic irreducible modulus, and (for fields of
//! order at most 2^16) exp/log tables over a primitive element.  Elements are
//! stored as a canonical index `sum(c_i * p^i)` encoding the coordinates
//! `c_0..c_{k-1}` of the element in the power basis of the generator `g`
//! (the class of `t` modulo the modulus).  Index equality is coefficient-wise
//! equality, so `FieldElement` is `Copy + Eq + Ord + Hash` for free and every
//! enumeration over a field is deterministic.
//!
//! When no modulus is supplied, [`FieldCtx::new`] selects the lexicographically
//! least monic irreducible of degree `k` (comparing coefficient tuples from the
//! highest degree down, equivalently the smallest base-`p` integer encoding)
//! and verifies irreducibility by exhaustive trial division.  Supplied moduli
//! are verified the same way, so two contexts agree iff `(p, k, modulus)` agree.

use serde::Serialize;
use thiserror::Error;

/// Largest field order this crate will construct.  The census machinery stops
/// well below this; the cap keeps element indexes in `u32` and table sizes sane.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Largest field order for which exp/log tables are precomputed.
pub const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {q} exceeds the supported maximum {max}")]
    FieldTooLarge { q: u64, max: u64 },
    #[error("modulus has degree {got}, expected {expected}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus coefficient {0} is not reduced mod {1}")]
    CoefficientOutOfRange(u32, u32),
    #[error("modulus is reducible: divisible by a degree-{0} factor")]
    ReducibleModulus(u32),
    #[error("no embedding: GF({src_p}^{src_k}) does not embed into GF({dst_p}^{dst_k})")]
    NoEmbedding {
        src_p: u32,
        src_k: u32,
        dst_p: u32,
        dst_k: u32,
    },
    #[error("malformed field spec {0:?}: {1}")]
    BadFieldSpec(String, String),
    #[error("malformed element digits {0:?}")]
    BadElementDigits(String),
}

/// Compact identity of a field context: two contexts with equal `FieldId` have
/// identical arithmetic.  The modulus is encoded as `sum(c_i * p^i)` including
/// the leading monic coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FieldId {
    pub p: u32,
    pub k: u32,
    pub modulus_code: u64,
}

/// An element of GF(p^k), stored as the canonical base-`p` digit encoding of
/// its power-basis coordinates.  All arithmetic goes through a [`FieldCtx`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    /// The multiplicative identity: digit encoding `1` in every field.
    pub const ONE: FieldElement = FieldElement(1);

    /// Canonical index of this element (`sum(c_i * p^i)`).
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Arithmetic context for GF(p^k).
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, length `k + 1`, constant term first.
    modulus: Vec<u32>,
    id: FieldId,
    /// `exp[i]` = index of `w^i` for a primitive element `w`; length `2(q-1)`
    /// so that `exp[log a + log b]` needs no reduction.  Empty above
    /// [`TABLE_LIMIT`].
    exp: Vec<u32>,
    /// `log[idx]` = discrete log of the element with that index; `log[0]` unused.
    log: Vec<u32>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for FieldCtx {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Dense polynomial arithmetic over GF(p), used for modulus selection and the
/// non-table multiplication path.  Coefficient vectors are little-endian
/// (constant term first) and always trimmed.
mod poly {
    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] += ai as u64 * bj as u64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| (c % p as u64) as u32).collect();
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        debug_assert_eq!(*m.last().unwrap(), 1, "modulus must be monic");
        let deg_m = m.len() - 1;
        let mut r: Vec<u32> = a.to_vec();
        trim(&mut r);
        while r.len() > deg_m {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - deg_m;
            if lead != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let idx = i + shift;
                    let sub = (lead as u64 * mi as u64) % p as u64;
                    let cur = r[idx] as u64;
                    r[idx] = ((cur + p as u64 - sub) % p as u64) as u32;
                }
            }
            trim(&mut r);
            if r.len() > deg_m && *r.last().unwrap() == 0 {
                r.pop();
            }
        }
        r
    }
}

impl FieldCtx {
    /// Build GF(p^k).  With `modulus: None` the lexicographically least monic
    /// irreducible of degree `k` is selected; a supplied modulus (constant term
    /// first, length `k+1`, monic) is verified for irreducibility.
    pub fn new(p: u64, k: u32, modulus: Option<&[u32]>) -> Result<FieldCtx, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if k == 0 {
            return Err(GfError::ZeroDegree);
        }
        let mut q: u64 = 1;
        for _ in 0..k {
            q = q.saturating_mul(p);
            if q > MAX_FIELD_ORDER {
                return Err(GfError::FieldTooLarge {
                    q,
                    max: MAX_FIELD_ORDER,
                });
            }
        }
        let p = p as u32;
        let modulus = match modulus {
            Some(m) => {
                let mut m = m.to_vec();
                // Tolerate trailing zeros only above the stated degree? No:
                // the degree must be exactly k and the leading coefficient 1.
                if m.len() != k as usize + 1 {
                    return Err(GfError::DegreeMismatch {
                        expected: k,
                        got: m.len().saturating_sub(1) as u32,
                    });
                }
                if *m.last().unwrap() != 1 {
                    return Err(GfError::NotMonic);
                }
                for &c in &m {
                    if c >= p {
                        return Err(GfError::CoefficientOutOfRange(c, p));
                    }
                }
                if k > 1 {
                    if let Some(deg) = reducible_witness(&m, p) {
                        return Err(GfError::ReducibleModulus(deg));
                    }
                }
                poly::trim(&mut m);
                m.resize(k as usize + 1, 0);
                m[k as usize] = 1;
                m
            }
            None => least_irreducible(p, k),
        };
        let modulus_code = {
            let mut code: u64 = 0;
            for &c in modulus.iter().rev() {
                code = code * p as u64 + c as u64;
            }
            code
        };
        let mut ctx = FieldCtx {
            p,
            k,
            q: q as u32,
            id: FieldId { p, k, modulus_code },
            modulus,
            exp: vec![],
            log: vec![],
        };
        if q <= TABLE_LIMIT {
            ctx.build_tables();
        }
        Ok(ctx)
    }

    /// Parse a field spec string: `p^k` or `p^k/c0,c1,...,ck` (modulus digits
    /// constant term first, `ck = 1`).  A bare prime `p` is accepted for `p^1`.
    pub fn parse_spec(spec: &str) -> Result<FieldCtx, GfError> {
        let bad = |msg: &str| GfError::BadFieldSpec(spec.to_string(), msg.to_string());
        let (head, modulus) = match spec.split_once('/') {
            Some((h, m)) => (h.trim(), Some(m.trim())),
            None => (spec.trim(), None),
        };
        let (p_str, k_str) = match head.split_once('^') {
            Some((p, k)) => (p.trim(), k.trim()),
            None => (head, "1"),
        };
        let p: u64 = p_str
            .parse()
            .map_err(|_| bad("characteristic is not an integer"))?;
        let k: u32 = k_str
            .parse()
            .map_err(|_| bad("extension degree is not an integer"))?;
        let digits: Option<Vec<u32>> = match modulus {
            None => None,
            Some(m) => Some(
                m.split(',')
                    .map(|d| d.trim().parse::<u32>())
                    .collect::<Result<Vec<u32>, _>>()
                    .map_err(|_| bad("modulus digits must be integers"))?,
            ),
        };
        FieldCtx::new(p, k, digits.as_deref())
    }

    /// Canonical spec string for this context, always including the modulus
    /// for extension fields: `p` for prime fields, `p^k/c0,...,ck` otherwise.
    pub fn spec_string(&self) -> String {
        if self.k == 1 {
            format!("{}", self.p)
        } else {
            let digits: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
            format!("{}^{}/{}", self.p, self.k, digits.join(","))
        }
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let g = self.primitive_element_by_search();
        let mut exp = Vec::with_capacity(2 * (q - 1));
        let mut log = vec![0u32; q];
        let mut acc = FieldElement::ONE;
        for i in 0..q - 1 {
            exp.push(acc.0);
            log[acc.0 as usize] = i as u32;
            acc = self.mul_poly(acc, g);
        }
        debug_assert_eq!(acc, FieldElement::ONE, "primitive element order mismatch");
        for i in 0..q - 1 {
            let v = exp[i];
            exp.push(v);
        }
        self.exp = exp;
        self.log = log;
    }

    fn primitive_element_by_search(&self) -> FieldElement {
        let order = self.q as u64 - 1;
        let mut prime_factors = vec![];
        let mut n = order;
        let mut d = 2u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                prime_factors.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            prime_factors.push(n);
        }
        for idx in 1..self.q {
            let cand = FieldElement(idx);
            let primitive = prime_factors
                .iter()
                .all(|&r| self.pow_via(cand, order / r, Self::mul_poly) != FieldElement::ONE);
            if primitive {
                return cand;
            }
        }
        unreachable!("every finite field has a primitive element")
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn id(&self) -> FieldId {
        self.id
    }
    /// Monic modulus digits, constant term first, length `k + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The power-basis generator `g` (the class of `t`); equals the element
    /// with index `p`.  For prime fields (`k = 1`) there is no extension
    /// generator; `g` is defined as `1` so `g`-literals still parse.
    pub fn generator(&self) -> FieldElement {
        if self.k == 1 {
            FieldElement::ONE
        } else {
            FieldElement(self.p)
        }
    }

    /// Iterate over all field elements in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn element_from_index(&self, idx: u32) -> FieldElement {
        assert!(
            idx < self.q,
            "element index {} out of range for q={}",
            idx,
            self.q
        );
        FieldElement(idx)
    }

    /// Reduce an integer into the prime subfield.
    pub fn from_int(&self, n: u64) -> FieldElement {
        FieldElement((n % self.p as u64) as u32)
    }

    /// Power-basis coordinates `c_0..c_{k-1}` of an element.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.k as usize);
        let mut n = a.0;
        for _ in 0..self.k {
            v.push(n % self.p);
            n /= self.p;
        }
        v
    }

    fn encode(&self, digits: &[u32]) -> FieldElement {
        let mut idx: u64 = 0;
        for &d in digits.iter().rev() {
            idx = idx * self.p as u64 + d as u64;
        }
        FieldElement(idx as u32)
    }

    /// Canonical digit string: the power-basis coordinates most-significant
    /// first.  Digits are concatenated for `p <= 10` and `:`-separated above.
    pub fn element_digits(&self, a: FieldElement) -> String {
        let coeffs = self.coeffs(a);
        let parts: Vec<String> = coeffs.iter().rev().map(|c| c.to_string()).collect();
        if self.p <= 10 {
            parts.join("")
        } else {
            parts.join(":")
        }
    }

    /// Parse the digit-string form produced by [`element_digits`](Self::element_digits).
    pub fn element_from_digits(&self, s: &str) -> Result<FieldElement, GfError> {
        let bad = || GfError::BadElementDigits(s.to_string());
        let digits: Vec<u32> = if self.p <= 10 {
            s.trim()
                .chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        } else {
            s.trim()
                .split(':')
                .map(|d| d.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        };
        if digits.is_empty() || digits.len() > self.k as usize {
            return Err(bad());
        }
        if digits.iter().any(|&d| d >= self.p) {
            return Err(bad());
        }
        let le: Vec<u32> = digits.into_iter().rev().collect();
        Ok(self.encode(&le))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.k == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let mut out: u64 = 0;
        let (mut na, mut nb) = (a.0, b.0);
        let mut place: u64 = 1;
        for _ in 0..self.k {
            let s = (na % self.p + nb % self.p) % self.p;
            out += s as u64 * place;
            place *= self.p as u64;
            na /= self.p;
            nb /= self.p;
        }
        FieldElement(out as u32)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        if self.k == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut out: u64 = 0;
        let mut n = a.0;
        let mut place: u64 = 1;
        for _ in 0..self.k {
            let d = n % self.p;
            out += if d == 0 { 0 } else { (self.p - d) as u64 } * place;
            place *= self.p as u64;
            n /= self.p;
        }
        FieldElement(out as u32)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// Multiplication through the exp/log tables when available, otherwise via
    /// polynomial multiply-and-reduce.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if !self.exp.is_empty() {
            let la = self.log[a.0 as usize] as usize;
            let lb = self.log[b.0 as usize] as usize;
            return FieldElement(self.exp[la + lb]);
        }
        self.mul_poly(a, b)
    }

    /// Table-free multiplication; also used to build and cross-check the tables.
    pub fn mul_poly(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if self.k == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let pa = self.coeffs(a);
        let pb = self.coeffs(b);
        let prod = poly::mul(&pa, &pb, self.p);
        let red = poly::rem(&prod, &self.modulus, self.p);
        self.encode(&red)
    }

    /// Multiplicative inverse.  Panics on zero: callers guard explicitly, a
    /// zero inverse is always a logic error in this crate.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(!a.is_zero(), "inverse of zero");
        if !self.exp.is_empty() {
            let la = self.log[a.0 as usize] as usize;
            return FieldElement(self.exp[(self.q as usize - 1) - la]);
        }
        self.pow(a, self.q as u64 - 2)
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        self.pow_via(a, e, Self::mul)
    }

    fn pow_via(
        &self,
        a: FieldElement,
        mut e: u64,
        mul: fn(&Self, FieldElement, FieldElement) -> FieldElement,
    ) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(self, acc, base);
            }
            base = mul(self, base, base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius power `x -> x^(p^e)`.  `e` is reduced mod `k` since the
    /// Frobenius has order `k` on GF(p^k).
    pub fn frobenius(&self, a: FieldElement, e: u32) -> FieldElement {
        let e = e % self.k;
        let mut out = a;
        for _ in 0..e {
            out = self.pow(out, self.p as u64);
        }
        out
    }
}

/// Return the degree of a proper factor if one exists (`m` monic, degree >= 2).
fn reducible_witness(m: &[u32], p: u32) -> Option<u32> {
    let deg = m.len() - 1;
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                div.push((c % p as u64) as u32);
                c /= p as u64;
            }
            div.push(1);
            if poly::rem(m, &div, p).is_empty() {
                return Some(d as u32);
            }
        }
    }
    None
}

/// The monic irreducible of degree `k` over GF(p) with the lexicographically
/// least coefficient tuple `(c_{k-1}, ..., c_0)`, i.e. the smallest base-`p`
/// integer encoding.  Deterministic, so every run of the toolkit picks the
/// same field presentation.
fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1]; // t itself; prime fields never reduce by it.
    }
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut m = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            m.push((c % p as u64) as u32);
            c /= p as u64;
        }
        m.push(1);
        if reducible_witness(&m, p).is_none() {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// A recorded embedding GF(p^k) -> GF(p^K) with k | K, determined by the image
/// of the source generator: the least root (in canonical index order) of the
/// source modulus inside the target field.
#[derive(Debug, Clone)]
pub struct Embedding {
    src: FieldId,
    dst: FieldId,
    /// Images of `g^0, g^1, ..., g^(k-1)` in the target field.
    powers: Vec<FieldElement>,
}

impl Embedding {
    pub fn new(src: &FieldCtx, dst: &FieldCtx) -> Result<Embedding, GfError> {
        let incompatible = || GfError::NoEmbedding {
            src_p: src.p,
            src_k: src.k,
            dst_p: dst.p,
            dst_k: dst.k,
        };
        if src.p != dst.p || !dst.k.is_multiple_of(src.k) {
            return Err(incompatible());
        }
        // Find the least root of the source modulus in the target field.
        let mod_in_dst: Vec<FieldElement> = src
            .modulus
            .iter()
            .map(|&c| dst.from_int(c as u64))
            .collect();
        let mut root = None;
        'search: for cand in dst.elements() {
            let mut acc = FieldElement::ZERO;
            let mut pw = FieldElement::ONE;
            for &c in &mod_in_dst {
                acc = dst.add(acc, dst.mul(c, pw));
                pw = dst.mul(pw, cand);
            }
            if acc.is_zero() {
                root = Some(cand);
                break 'search;
            }
        }
        let root = root.ok_or_else(incompatible)?;
        let mut powers = Vec::with_capacity(src.k as usize);
        let mut pw = FieldElement::ONE;
        for _ in 0..src.k {
            powers.push(pw);
            pw = dst.mul(pw, root);
        }
        Ok(Embedding {
            src: src.id,
            dst: dst.id,
            powers,
        })
    }

    pub fn src(&self) -> FieldId {
        self.src
    }
    pub fn dst(&self) -> FieldId {
        self.dst
    }

    /// Image of a source element in the target field.
    pub fn apply(&self, src: &FieldCtx, dst: &FieldCtx, a: FieldElement) -> FieldElement {
        assert_eq!(
            src.id, self.src,
            "embedding applied with wrong source field"
        );
        assert_eq!(
            dst.id, self.dst,
            "embedding applied with wrong target field"
        );
        let coeffs = src.coeffs(a);
        let mut acc = FieldElement::ZERO;
        for (c, &pw) in coeffs.iter().zip(&self.powers) {
            if *c != 0 {
                acc = dst.add(acc, dst.mul(dst.from_int(*c as u64), pw));
            }
        }
        acc
    }
}

/// Convenience wrapper: build the embedding and apply it to one element.
pub fn embed(src: &FieldCtx, dst: &FieldCtx, a: FieldElement) -> Result<FieldElement, GfError> {
    Ok(Embedding::new(src, dst)?.apply(src, dst, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, k: u32) -> FieldCtx {
        FieldCtx::new(p, k, None).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldCtx::new(6, 1, None).unwrap_err(), GfError::NotPrime(6));
        assert_eq!(FieldCtx::new(1, 1, None).unwrap_err(), GfError::NotPrime(1));
        assert_eq!(FieldCtx::new(2, 0, None).unwrap_err(), GfError::ZeroDegree);
        assert!(matches!(
            FieldCtx::new(2, 21, None).unwrap_err(),
            GfError::FieldTooLarge { .. }
        ));
        // t^2 + 1 is reducible over GF(2): (t+1)^2.
        assert_eq!(
            FieldCtx::new(2, 2, Some(&[1, 0, 1])).unwrap_err(),
            GfError::ReducibleModulus(1)
        );
        assert_eq!(
            FieldCtx::new(3, 2, Some(&[1, 0, 2])).unwrap_err(),
            GfError::NotMonic
        );
        assert!(matches!(
            FieldCtx::new(3, 2, Some(&[1, 1])).unwrap_err(),
            GfError::DegreeMismatch { .. }
        ));
    }

    #[test]
    fn default_moduli_are_the_least_irreducibles() {
        // Classical minimal presentations, constant term first.
        assert_eq!(gf(2, 2).modulus(), &[1, 1, 1]); // t^2+t+1
        assert_eq!(gf(2, 3).modulus(), &[1, 1, 0, 1]); // t^3+t+1
        assert_eq!(gf(2, 4).modulus(), &[1, 1, 0, 0, 1]); // t^4+t+1
        assert_eq!(gf(3, 2).modulus(), &[1, 0, 1]); // t^2+1
        assert_eq!(gf(5, 2).modulus(), &[2, 0, 1]); // t^2+2
    }

    #[test]
    fn spec_string_round_trip() {
        for ctx in [gf(2, 1), gf(2, 4), gf(3, 2), gf(5, 2), gf(7, 1)] {
            let respun = FieldCtx::parse_spec(&ctx.spec_string()).unwrap();
            assert_eq!(respun.id(), ctx.id());
        }
        assert_eq!(FieldCtx::parse_spec("3^2").unwrap().id(), gf(3, 2).id());
        assert_eq!(FieldCtx::parse_spec("5").unwrap().id(), gf(5, 1).id());
        assert_eq!(
            FieldCtx::parse_spec("3^2/1,0,1").unwrap().id(),
            gf(3, 2).id()
        );
        assert!(FieldCtx::parse_spec("3^2/2,0,1,0").is_err());
        assert!(FieldCtx::parse_spec("nope").is_err());
    }

    /// Exhaustive field-axiom check: closure of the tables against the
    /// polynomial route, inverses, commutativity on all pairs, and
    /// associativity/distributivity on all triples.
    fn assert_axioms_exhaustive(ctx: &FieldCtx) {
        let q = ctx.q();
        for a in ctx.elements() {
            assert_eq!(ctx.add(a, FieldElement::ZERO), a);
            assert_eq!(ctx.mul(a, FieldElement::ONE), a);
            assert_eq!(ctx.add(a, ctx.neg(a)), FieldElement::ZERO);
            if !a.is_zero() {
                assert_eq!(ctx.mul(a, ctx.inv(a)), FieldElement::ONE);
                assert_eq!(ctx.pow(a, q as u64 - 1), FieldElement::ONE);
            }
        }
        for a in ctx.elements() {
            for b in ctx.elements() {
                assert_eq!(ctx.mul(a, b), ctx.mul_poly(a, b), "table/poly mismatch");
                assert_eq!(ctx.add(a, b), ctx.add(b, a));
                assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
            }
        }
        for a in ctx.elements() {
            for b in ctx.elements() {
                for c in ctx.elements() {
                    assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                    assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
                    assert_eq!(
                        ctx.mul(a, ctx.add(b, c)),
                        ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn field_axioms_small_fields() {
        for (p, k) in [
            (2, 1),
            (2, 2),
            (2, 3),
            (3, 1),
            (3, 2),
            (5, 1),
            (5, 2),
            (7, 1),
        ] {
            assert_axioms_exhaustive(&gf(p, k));
        }
    }

    #[test]
    fn field_axioms_gf16_gf27_gf49() {
        for (p, k) in [(2, 4), (3, 3), (7, 2)] {
            assert_axioms_exhaustive(&gf(p, k));
        }
    }

    #[test]
    fn field_axioms_gf64_gf81() {
        assert_axioms_exhaustive(&gf(2, 6));
        assert_axioms_exhaustive(&gf(3, 4));
    }

    #[test]
    fn field_axioms_gf256() {
        assert_axioms_exhaustive(&gf(2, 8));
    }

    /// Above the exhaustive range, spot-check triples and the full pair grid.
    #[test]
    fn field_axioms_sampled_large() {
        use rand::{Rng, SeedableRng};
        for (p, k) in [(2, 10), (3, 7), (31, 3), (1021, 1), (2, 17)] {
            let ctx = gf(p, k);
            let q = ctx.q();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..20_000 {
                let a = FieldElement(rng.gen_range(0..q));
                let b = FieldElement(rng.gen_range(0..q));
                let c = FieldElement(rng.gen_range(0..q));
                assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
                assert_eq!(
                    ctx.mul(a, ctx.add(b, c)),
                    ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                );
                assert_eq!(ctx.mul(a, b), ctx.mul_poly(a, b));
                if !a.is_zero() {
                    assert_eq!(ctx.mul(a, ctx.inv(a)), FieldElement::ONE);
                    assert_eq!(ctx.pow(a, q as u64 - 1), FieldElement::ONE);
                }
            }
        }
    }

    #[test]
    fn frobenius_is_the_p_power_map() {
        // Derived by hand in GF(4) = GF(2)[t]/(t^2+t+1): g^2 = g + 1.
        let f4 = gf(2, 2);
        let g = f4.generator();
        assert_eq!(f4.frobenius(g, 1), f4.add(g, FieldElement::ONE));
        // Frobenius is additive and multiplicative, order k.
        for (p, k) in [(2, 4), (3, 2), (5, 2)] {
            let ctx = gf(p, k);
            for a in ctx.elements() {
                assert_eq!(ctx.frobenius(a, 1), ctx.pow(a, p));
                assert_eq!(ctx.frobenius(a, k), a);
                for b in ctx.elements() {
                    assert_eq!(
                        ctx.frobenius(ctx.add(a, b), 1),
                        ctx.add(ctx.frobenius(a, 1), ctx.frobenius(b, 1))
                    );
                    assert_eq!(
                        ctx.frobenius(ctx.mul(a, b), 1),
                        ctx.mul(ctx.frobenius(a, 1), ctx.frobenius(b, 1))
                    );
                }
            }
        }
    }

    #[test]
    fn embedding_gf3_into_gf9_hits_frobenius_fixed_points() {
        let f3 = gf(3, 1);
        let f9 = gf(3, 2);
        let emb = Embedding::new(&f3, &f9).unwrap();
        let image: Vec<FieldElement> = f3.elements().map(|a| emb.apply(&f3, &f9, a)).collect();
        // The image must be exactly the fixed field of x -> x^3, computed
        // independently by exhaustion.
        let fixed: Vec<FieldElement> = f9.elements().filter(|&x| f9.pow(x, 3) == x).collect();
        let mut sorted = image.clone();
        sorted.sort();
        assert_eq!(sorted, fixed);
        // Ring homomorphism on all pairs.
        for a in f3.elements() {
            for b in f3.elements() {
                assert_eq!(
                    emb.apply(&f3, &f9, f3.add(a, b)),
                    f9.add(emb.apply(&f3, &f9, a), emb.apply(&f3, &f9, b))
                );
                assert_eq!(
                    emb.apply(&f3, &f9, f3.mul(a, b)),
                    f9.mul(emb.apply(&f3, &f9, a), emb.apply(&f3, &f9, b))
                );
            }
        }
    }

    #[test]
    fn embedding_tower_gf4_into_gf16() {
        let f4 = gf(2, 2);
        let f16 = gf(2, 4);
        let emb = Embedding::new(&f4, &f16).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(
                    emb.apply(&f4, &f16, f4.mul(a, b)),
                    f16.mul(emb.apply(&f4, &f16, a), emb.apply(&f4, &f16, b))
                );
                assert_eq!(
                    emb.apply(&f4, &f16, f4.add(a, b)),
                    f16.add(emb.apply(&f4, &f16, a), emb.apply(&f4, &f16, b))
                );
            }
        }
        // Frobenius compatibility: embed(x^2) = embed(x)^2.
        for a in f4.elements() {
            assert_eq!(
                emb.apply(&f4, &f16, f4.frobenius(a, 1)),
                f16.pow(emb.apply(&f4, &f16, a), 2)
            );
        }
        // Injectivity.
        let mut images: Vec<FieldElement> =
            f4.elements().map(|a| emb.apply(&f4, &f16, a)).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 4);
    }

    #[test]
    fn no_embedding_when_degree_does_not_divide() {
        let f4 = gf(2, 2);
        let f8 = gf(2, 3);
        assert!(matches!(
            Embedding::new(&f4, &f8).unwrap_err(),
            GfError::NoEmbedding { .. }
        ));
        let f3 = gf(3, 1);
        assert!(matches!(
            Embedding::new(&f3, &f4).unwrap_err(),
            GfError::NoEmbedding { .. }
        ));
    }

    #[test]
    fn element_digit_strings_round_trip() {
        for ctx in [gf(2, 4), gf(3, 2), gf(5, 2), gf(11, 1), gf(13, 2)] {
            for a in ctx.elements() {
                let s = ctx.element_digits(a);
                assert_eq!(ctx.element_from_digits(&s).unwrap(), a, "digits {s:?}");
            }
        }
        let f9 = gf(3, 2);
        // g = t has digits "10", g+2 has digits "12".
        assert_eq!(f9.element_digits(f9.generator()), "10");
        let g2 = f9.add(f9.generator(), f9.from_int(2));
        assert_eq!(f9.element_digits(g2), "12");
    }
}
