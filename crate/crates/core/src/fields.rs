//! Exact arithmetic in F_p, F_q = F_{p^a} and extensions F_{q^m}.
//!
//! Every field is realized as F_p[y]/(h) for a single irreducible `h` of
//! degree `a*m`; towers are never built. Elements are packed into a `u32`
//! index `sum c_i p^i`, so enumeration in index order is lexicographic in the
//! coordinate vector read from the top coefficient down, and starts at 0.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fields up to this order get log/exp tables for multiplication.
const TABLE_LIMIT: u64 = 1 << 16;

/// `p`, `a` and (for `a > 1`) the modulus defining F_q over F_p.
///
/// The modulus is a coefficient list, constant term first, of a monic
/// irreducible polynomial of degree `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub a: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// Validates primality of `p` and irreducibility of the modulus. A
    /// non-monic modulus is normalized to monic.
    pub fn new(p: u32, a: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if a == 0 {
            return Err(Error::InvalidField("a must be positive".into()));
        }
        let modulus = match (a, modulus) {
            (1, None) => None,
            (1, Some(m)) => {
                let m = normalize_monic(&m, p)?;
                if m.len() != 2 {
                    return Err(Error::InvalidField("a = 1 admits only a linear modulus".into()));
                }
                None
            }
            (_, None) => {
                return Err(Error::InvalidField(format!("a = {a} requires a modulus")));
            }
            (_, Some(m)) => {
                let m = normalize_monic(&m, p)?;
                if m.len() != a as usize + 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus has degree {}, expected {a}",
                        m.len() - 1
                    )));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(m, p));
                }
                Some(m)
            }
        };
        Ok(FieldSpec { p, a, modulus })
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.a)
    }

    /// The defining polynomial of F_q over F_p; `y` when `a = 1`.
    pub fn base_modulus(&self) -> Vec<u32> {
        self.modulus.clone().unwrap_or_else(|| vec![0, 1])
    }
}

/// An element of some [`FiniteField`], packed as `sum c_i p^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn from_index(i: u32) -> Self {
        FieldElement(i)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug)]
struct Tables {
    log: Vec<u32>,
    // Length 2(q-1) so that log sums never need a reduction.
    exp: Vec<u32>,
}

/// F_{q^m} as F_p[y]/(h), with the embedding of F_q.
#[derive(Clone, Debug)]
pub struct FiniteField {
    base: FieldSpec,
    m: u32,
    p: u32,
    degree: u32,
    order: u64,
    modulus: Vec<u32>,
    embedding: FieldElement,
    pows: Vec<u32>,
    trace_basis: Vec<u32>,
    tables: Option<Tables>,
}

/// Builds F_{q^m}. For `m = 1` the base modulus is reused so coordinates
/// agree with the system file; otherwise the modulus is the smallest monic
/// irreducible of degree `a*m`, ordered by packed index of its lower
/// coefficients.
pub fn make_extension(spec: &FieldSpec, m: u32, cap: u64) -> Result<FiniteField> {
    if m == 0 {
        return Err(Error::InvalidField("extension degree must be positive".into()));
    }
    let p = spec.p;
    let degree = spec.a * m;
    let order = (p as u128).pow(degree);
    let hard_cap = cap.min(u32::MAX as u64);
    if order > hard_cap as u128 {
        return Err(Error::CapExceeded { size: order, cap: hard_cap });
    }
    let order = order as u64;
    let modulus = if m == 1 {
        spec.base_modulus()
    } else {
        smallest_irreducible(p, degree)
    };
    let mut pows = Vec::with_capacity(degree as usize + 1);
    let mut acc = 1u64;
    for _ in 0..=degree {
        pows.push(acc.min(u32::MAX as u64) as u32);
        acc *= p as u64;
    }
    let mut field = FiniteField {
        base: spec.clone(),
        m,
        p,
        degree,
        order,
        modulus,
        embedding: FieldElement::ZERO,
        pows,
        trace_basis: Vec::new(),
        tables: None,
    };
    if order <= TABLE_LIMIT {
        field.tables = Some(field.build_tables());
    }
    field.trace_basis = (0..degree)
        .map(|i| {
            let basis = FieldElement(field.pows[i as usize]);
            let t = field.trace_by_frobenius(basis);
            debug_assert!(t.0 < p);
            t.0
        })
        .collect();
    field.embedding = if m == 1 {
        if degree == 1 {
            FieldElement::ZERO
        } else {
            FieldElement(p)
        }
    } else {
        let base_mod = spec.base_modulus();
        field
            .elements()
            .find(|&x| field.eval_fp_poly(&base_mod, x).is_zero())
            .ok_or_else(|| Error::InvalidField("base modulus has no root in extension".into()))?
    };
    Ok(field)
}

impl FiniteField {
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Degree over F_p.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Degree over the base field F_q.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Image of the generator of F_q (a root of the base modulus).
    pub fn embedding(&self) -> FieldElement {
        self.embedding
    }

    /// This field viewed as a base field in its own right.
    pub fn as_spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            a: self.degree,
            modulus: if self.degree == 1 {
                None
            } else {
                Some(self.modulus.clone())
            },
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    /// The element with packed index `i mod order`.
    pub fn from_index(&self, i: u32) -> FieldElement {
        FieldElement((i as u64 % self.order) as u32)
    }

    pub fn from_coords(&self, coords: &[u32]) -> FieldElement {
        let mut idx = 0u32;
        for (i, &c) in coords.iter().enumerate().take(self.degree as usize) {
            idx += (c % self.p) * self.pows[i];
        }
        FieldElement(idx)
    }

    pub fn coords(&self, x: FieldElement) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.degree as usize);
        let mut v = x.0;
        for _ in 0..self.degree {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    /// All elements in index order, starting with 0.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order as u32).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.order as u32).map(FieldElement)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.order as u32))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(1..self.order as u32))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.degree == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while x != 0 || y != 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            x /= self.p;
            y /= self.p;
            place = place.wrapping_mul(self.p);
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        if self.degree == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while x != 0 {
            let d = x % self.p;
            if d != 0 {
                out += (self.p - d) * place;
            }
            x /= self.p;
            place = place.wrapping_mul(self.p);
        }
        FieldElement(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if let Some(t) = &self.tables {
            let s = t.log[a.0 as usize] + t.log[b.0 as usize];
            return FieldElement(t.exp[s as usize]);
        }
        self.mul_slow(a, b)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        if let Some(t) = &self.tables {
            if a.0 == 0 {
                return if e == 0 { self.one() } else { self.zero() };
            }
            let l = (t.log[a.0 as usize] as u64 * (e % (self.order - 1))) % (self.order - 1);
            return FieldElement(t.exp[l as usize]);
        }
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, self.order - 2))
    }

    /// x -> x^p.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.p as u64)
    }

    /// Absolute trace to F_p, returned as an integer in `0..p`.
    #[inline]
    pub fn trace(&self, a: FieldElement) -> u32 {
        let mut v = a.0;
        let mut acc = 0u64;
        for &t in &self.trace_basis {
            acc += (v % self.p) as u64 * t as u64;
            v /= self.p;
        }
        (acc % self.p as u64) as u32
    }

    /// `sum_{i < deg} x^{p^i}`, computed directly.
    pub fn trace_by_frobenius(&self, a: FieldElement) -> FieldElement {
        let mut acc = self.zero();
        let mut x = a;
        for _ in 0..self.degree {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        acc
    }

    /// Maps an element of F_q, given by its packed index in the base power
    /// basis, into this field.
    pub fn embed_base(&self, base_index: u32) -> FieldElement {
        if self.base.a == 1 {
            return FieldElement(base_index % self.p);
        }
        let mut v = base_index;
        let mut acc = self.zero();
        let mut power = self.one();
        for _ in 0..self.base.a {
            let d = v % self.p;
            if d != 0 {
                acc = self.add(acc, self.mul(self.from_int(d as i64), power));
            }
            power = self.mul(power, self.embedding);
            v /= self.p;
        }
        acc
    }

    /// Evaluates an F_p-coefficient polynomial (constant term first) at `x`.
    pub fn eval_fp_poly(&self, coeffs: &[u32], x: FieldElement) -> FieldElement {
        coeffs.iter().rev().fold(self.zero(), |acc, &c| {
            self.add(self.mul(acc, x), self.from_int(c as i64))
        })
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let k = self.degree as usize;
        let p = self.p as u64;
        let ca = self.coords(a);
        let cb = self.coords(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i] % p;
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let sub = c * self.modulus[j] as u64 % p;
                prod[i - k + j] = (prod[i - k + j] + p - sub) % p;
            }
            prod[i] = 0;
        }
        let mut idx = 0u32;
        for i in 0..k {
            idx += (prod[i] % p) as u32 * self.pows[i];
        }
        FieldElement(idx)
    }

    fn build_tables(&self) -> Tables {
        let q1 = self.order - 1;
        let factors = prime_factors(q1);
        let generator = (1..self.order as u32)
            .map(FieldElement)
            .find(|&g| {
                factors.iter().all(|&l| {
                    let mut base = g;
                    let mut acc = FieldElement(1);
                    let mut e = q1 / l;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = self.mul_slow(acc, base);
                        }
                        base = self.mul_slow(base, base);
                        e >>= 1;
                    }
                    acc != FieldElement(1)
                })
            })
            .expect("finite field has a primitive element");
        let mut log = vec![0u32; self.order as usize];
        let mut exp = vec![0u32; 2 * q1 as usize];
        let mut x = FieldElement(1);
        for i in 0..q1 as usize {
            exp[i] = x.0;
            exp[i + q1 as usize] = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul_slow(x, generator);
        }
        Tables { log, exp }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

fn normalize_monic(m: &[u32], p: u32) -> Result<Vec<u32>> {
    let mut m: Vec<u32> = m.iter().map(|&c| c % p).collect();
    while m.last() == Some(&0) {
        m.pop();
    }
    if m.len() < 2 {
        return Err(Error::InvalidField("modulus must have positive degree".into()));
    }
    let lead = *m.last().unwrap();
    let inv = inv_mod(lead, p);
    Ok(m.iter().map(|&c| (c as u64 * inv as u64 % p as u64) as u32).collect())
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

// Dense F_p[y] helpers; coefficient vectors are constant term first and
// trimmed of trailing zeros.

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let inv_lead = inv_mod(f[df], p) as u64;
    while r.len() > df {
        let dr = r.len() - 1;
        let c = r[dr] as u64 * inv_lead % p as u64;
        for j in 0..=df {
            let sub = c * f[j] as u64 % p as u64;
            r[dr - df + j] = ((r[dr - df + j] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem(&prod, f, p)
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or test: `f` (monic, degree k) is irreducible iff
/// `gcd(y^{p^i} - y, f) = 1` for every `i <= k/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    if f[0] % p == 0 {
        return false;
    }
    let mut ypow = poly_rem(&[0, 1], f, p);
    for _ in 1..=k / 2 {
        // ypow <- ypow^p mod f
        let mut acc = vec![1u32];
        let mut base = ypow.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, f, p);
            }
            base = poly_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        ypow = acc;
        let mut diff = ypow.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = poly_gcd(&diff, f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree `k`, enumerating the lower
/// coefficients by packed index `sum c_i p^i`.
pub fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for idx in 0..count {
        let mut f = Vec::with_capacity(k as usize + 1);
        let mut v = idx;
        for _ in 0..k {
            f.push((v % p as u64) as u32);
            v /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
