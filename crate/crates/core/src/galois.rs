//! Exact arithmetic in prime fields and in GF(p^h).
//!
//! Elements of GF(p^h) are handled internally as integers in `[0, p^h)`: the
//! base-`p` digits of the integer are the coefficients of the element in the
//! polynomial basis `1, x, ..., x^(h-1)`. [`FieldElement`] is the explicit
//! coefficient-vector view used at API boundaries.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order `make_field` accepts unless a larger limit is passed.
pub const DEFAULT_FIELD_LIMIT: u64 = 1 << 20;

/// Orders up to this size get log/antilog tables.
const TABLE_LIMIT: u32 = 1 << 16;

/// Orders up to this size also get a full addition table.
const ADD_TABLE_LIMIT: u32 = 256;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The prime field F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + (self.p - b % self.p) as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        (self.p - a % self.p) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }
}

// Polynomials over F_p, coefficient lists low-to-high.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem_monic(fp: &PrimeField, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = fp.sub(r[shift + i], fp.mul(lead, c));
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mul(fp: &PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fp.add(out[i + j], fp.mul(x, y));
        }
    }
    out
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `index`.
fn monic_from_index(p: u32, deg: u32, mut index: u64) -> Vec<u32> {
    let mut c = Vec::with_capacity(deg as usize + 1);
    for _ in 0..deg {
        c.push((index % p as u64) as u32);
        index /= p as u64;
    }
    c.push(1);
    c
}

/// Irreducibility by trial division with every monic polynomial of degree at
/// most `deg(f)/2`.
pub fn is_irreducible(fp: &PrimeField, f: &[u32]) -> bool {
    let deg = f.len() as u32 - 1;
    if deg == 0 {
        return false;
    }
    let p = fp.p();
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d);
        for idx in 0..count {
            let g = monic_from_index(p, d, idx);
            if poly_rem_monic(fp, f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible polynomial of degree `h`, ordering candidates by
/// the integer whose base-`p` digits are the lower coefficients.
pub fn least_irreducible(fp: &PrimeField, h: u32) -> Vec<u32> {
    let count = (fp.p() as u64).pow(h);
    (0..count)
        .map(|idx| monic_from_index(fp.p(), h, idx))
        .find(|f| is_irreducible(fp, f))
        .expect("an irreducible polynomial exists for every degree")
}

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// GF(p^h) with a fixed monic irreducible modulus.
#[derive(Clone)]
pub struct ExtensionField {
    prime: PrimeField,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    tables: Option<Arc<Tables>>,
}

impl fmt::Debug for ExtensionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtensionField")
            .field("p", &self.prime.p())
            .field("h", &self.h)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for ExtensionField {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime && self.h == other.h && self.modulus == other.modulus
    }
}

impl Eq for ExtensionField {}

/// Builds GF(p^h) with the lexicographically least monic irreducible modulus.
pub fn make_field(p: u32, h: u32) -> Result<ExtensionField> {
    make_field_with_limit(p, h, DEFAULT_FIELD_LIMIT)
}

pub fn make_field_with_limit(p: u32, h: u32, limit: u64) -> Result<ExtensionField> {
    let prime = PrimeField::new(p)?;
    if h < 1 {
        return Err(Error::InvalidDegree(h));
    }
    let q = (p as u64).checked_pow(h).filter(|&q| q <= limit && q <= u32::MAX as u64);
    let q = match q {
        Some(q) => q as u32,
        None => return Err(Error::FieldTooLarge { p, h, limit }),
    };
    let modulus = least_irreducible(&prime, h);
    let mut field = ExtensionField {
        prime,
        h,
        q,
        modulus,
        generator: 0,
        tables: None,
    };
    field.generator = field.find_generator();
    if q <= TABLE_LIMIT {
        field.tables = Some(Arc::new(field.build_tables()));
    }
    Ok(field)
}

impl ExtensionField {
    #[inline]
    pub fn p(&self) -> u32 {
        self.prime.p()
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.h
    }

    /// Field order p^h.
    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn prime_field(&self) -> &PrimeField {
        &self.prime
    }

    /// Monic modulus, coefficients low-to-high (length h+1).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A primitive element (generator of the multiplicative group).
    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn is_prime_field(&self) -> bool {
        self.h == 1
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let p = self.p();
        (0..self.h)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    fn join_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p() + c)
    }

    fn add_digitwise(&self, a: u32, b: u32) -> u32 {
        let p = self.p();
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.h {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale = scale.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.h == 1 {
            return self.prime.add(a, b);
        }
        match &self.tables {
            Some(t) if t.add.is_some() => t.add.as_ref().unwrap()[(a * self.q + b) as usize],
            _ => self.add_digitwise(a, b),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.h == 1 {
            return self.prime.neg(a);
        }
        let d: Vec<u32> = self.digits(a).into_iter().map(|c| self.prime.neg(c)).collect();
        self.join_digits(&d)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if self.h == 1 {
            return self.prime.sub(a, b);
        }
        self.add(a, self.neg(b))
    }

    /// Multiplication by polynomial arithmetic, independent of the tables.
    pub fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let prod = poly_mul(&self.prime, &self.digits(a), &self.digits(b));
        let mut r = poly_rem_monic(&self.prime, &prod, &self.modulus);
        r.resize(self.h as usize, 0);
        self.join_digits(&r)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.h == 1 {
            return self.prime.mul(a, b);
        }
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_poly(a, b),
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.h == 1 {
            return self.prime.inv(a);
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a as usize];
                Some(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
            }
            None => Some(self.pow(a, self.q as u64 - 2)),
        }
    }

    /// Frobenius automorphism x -> x^p.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p() as u64)
    }

    /// The class of `x` modulo the modulus (equals 0 when h = 1 with modulus x).
    pub fn x(&self) -> u32 {
        if self.h == 1 {
            // modulus x makes x congruent to 0
            0
        } else {
            self.p()
        }
    }

    fn find_generator(&self) -> u32 {
        if self.q == 2 {
            return 1;
        }
        let order = self.q as u64 - 1;
        let factors = prime_factors(order);
        let pow_poly = |a: u32, mut e: u64| {
            let mut base = a;
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul_poly(acc, base);
                }
                base = self.mul_poly(base, base);
                e >>= 1;
            }
            acc
        };
        (2..self.q)
            .find(|&g| factors.iter().all(|&r| pow_poly(g, order / r) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> Tables {
        let n = self.q as usize - 1;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp[i] = cur;
            exp[i + n] = cur;
            log[cur as usize] = i as u32;
            cur = self.mul_poly(cur, self.generator);
        }
        let add = (self.h > 1 && self.q <= ADD_TABLE_LIMIT).then(|| {
            let q = self.q;
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = self.add_digitwise(a, b);
                }
            }
            t
        });
        Tables { exp, log, add }
    }

    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        let e = FieldElement { p: self.p(), coeffs: coeffs.to_vec() };
        self.encode(&e)?;
        Ok(e)
    }

    /// Coefficient view of an encoded element.
    pub fn to_element(&self, a: u32) -> FieldElement {
        FieldElement { p: self.p(), coeffs: self.digits(a) }
    }

    /// Integer encoding of an element; rejects elements of other fields.
    pub fn encode(&self, e: &FieldElement) -> Result<u32> {
        if e.p != self.p() || e.coeffs.len() != self.h as usize || e.coeffs.iter().any(|&c| c >= self.p()) {
            return Err(Error::MixedField { p: self.p(), h: self.h });
        }
        Ok(self.join_digits(&e.coeffs))
    }

    /// Field reduction GF(p^h)^(m) -> F_p^(m h): concatenated coefficient
    /// vectors.
    pub fn reduce_vector(&self, v: &[FieldElement]) -> Result<Vec<u32>> {
        let mut out = Vec::with_capacity(v.len() * self.h as usize);
        for e in v {
            self.encode(e)?;
            out.extend_from_slice(&e.coeffs);
        }
        Ok(out)
    }

    /// [`reduce_vector`](Self::reduce_vector) on integer-encoded entries.
    pub fn reduce_encoded(&self, v: &[u32]) -> Vec<u32> {
        let mut out = Vec::with_capacity(v.len() * self.h as usize);
        for &a in v {
            debug_assert!(a < self.q);
            out.extend(self.digits(a));
        }
        out
    }

    /// Reduced images of all nonzero GF(p^h)-multiples of `v`.
    pub fn scalar_orbit(&self, v: &[u32]) -> Result<Vec<Vec<u32>>> {
        if v.iter().all(|&a| a == 0) {
            return Err(Error::ZeroVector);
        }
        if v.iter().any(|&a| a >= self.q) {
            return Err(Error::MixedField { p: self.p(), h: self.h });
        }
        Ok((1..self.q)
            .map(|lambda| {
                let scaled: Vec<u32> = v.iter().map(|&a| self.mul(lambda, a)).collect();
                self.reduce_encoded(&scaled)
            })
            .collect())
    }
}

/// An element of GF(p^h) as its coefficient vector over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    p: u32,
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}
