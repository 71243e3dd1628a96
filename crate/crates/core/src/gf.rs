//! Exact arithmetic in GF(p) and GF(p^k).
//!
//! Elements are plain `u32` indices: the element `c_0 + c_1 x + ... + c_{k-1} x^{k-1}`
//! (a residue modulo the field's modulus) is stored as `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
//! The prime subfield therefore occupies indices `0..p` in every field of
//! characteristic `p`, and "smallest element" always means smallest index.
//!
//! Fields are canonical: the modulus is the smallest monic irreducible of
//! degree `k` (coefficient tuple read as a base-`p` integer, constant term as
//! the lowest digit) and the generator is the smallest element of full
//! multiplicative order. Two fields with the same `(p, k)` are identical, and
//! [`Field::new`] hands out shared instances from a process-wide cache.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::arith;

/// A field element, meaningful only together with its [`Field`].
pub type Fe = u32;

/// Default cap on field size, `p^k <= 2^32`.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 32;

/// Extension fields up to this size get exp/log tables.
const TABLE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field GF({p}^{k}) exceeds the size cap {cap}")]
    TooLarge { p: u32, k: u32, cap: u64 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("operands belong to different fields ({0} vs {1})")]
    ContextMismatch(String, String),
    #[error("no primitive {n}-th root of unity in GF({q}): {n} does not divide {q} - 1")]
    NoRootOfUnity { n: u64, q: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("GF({src}) does not embed in GF({dst})")]
    NoEmbedding { src: u64, dst: u64 },
    #[error("GF({0}) has no involutive automorphism (odd extension degree)")]
    NoInvolution(u64),
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct FieldInner {
    p: u32,
    k: u32,
    q: u64,
    /// Monic modulus, ascending, length `k + 1`; empty for prime fields.
    modulus: Vec<u32>,
    generator: Fe,
    tables: Option<Tables>,
}

/// A finite field GF(p^k) with its canonical modulus and generator.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.k)
        }
    }
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// GF(p^k) under the default size cap.
    pub fn new(p: u32, k: u32) -> Result<Field, GfError> {
        Self::with_cap(p, k, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u32, k: u32, cap: u64) -> Result<Field, GfError> {
        if !arith::is_prime(p as u64) {
            return Err(GfError::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= cap.min(DEFAULT_FIELD_CAP))
            .ok_or(GfError::TooLarge { p, k, cap })?;
        if let Some(f) = cache().lock().unwrap().get(&(p, k)) {
            return Ok(f.clone());
        }
        let field = Field(Arc::new(build(p, k, q)));
        cache()
            .lock()
            .unwrap()
            .entry((p, k))
            .or_insert(field.clone());
        Ok(field)
    }

    pub fn prime(p: u32) -> Result<Field, GfError> {
        Self::new(p, 1)
    }

    /// The field with `q` elements.
    pub fn of_order(q: u64) -> Result<Field, GfError> {
        let (p, k) = arith::prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Self::new(p, k)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }

    /// Monic modulus in ascending order, `None` for a prime field.
    pub fn modulus(&self) -> Option<&[u32]> {
        (self.0.k > 1).then_some(self.0.modulus.as_slice())
    }

    pub fn generator(&self) -> Fe {
        self.0.generator
    }

    pub fn zero(&self) -> Fe {
        0
    }

    pub fn one(&self) -> Fe {
        1
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        n.rem_euclid(self.0.p as i64) as Fe
    }

    pub fn contains(&self, e: Fe) -> bool {
        (e as u64) < self.0.q
    }

    /// Coefficients of `e` in the polynomial basis, ascending.
    pub fn coeffs(&self, e: Fe) -> Vec<u32> {
        let p = self.0.p;
        let mut v = e;
        (0..self.0.k)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Fe {
        let p = self.0.p as u64;
        coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * p + (c as u64 % p)) as Fe
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.0.q as u32
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p as u64;
        if self.0.k == 1 {
            return ((a as u64 + b as u64) % p) as Fe;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let (mut r, mut pw) = (0u64, 1u64);
        for _ in 0..self.0.k {
            r += ((a % p + b % p) % p) * pw;
            a /= p;
            b /= p;
            pw *= p;
        }
        r as Fe
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p as u64;
        if self.0.k == 1 {
            return ((p - a as u64 % p) % p) as Fe;
        }
        let mut a = a as u64;
        let (mut r, mut pw) = (0u64, 1u64);
        for _ in 0..self.0.k {
            r += ((p - a % p) % p) * pw;
            a /= p;
            pw *= p;
        }
        r as Fe
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.0.k == 1 {
            return ((a as u64 * b as u64) % self.0.p as u64) as Fe;
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let s = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % n;
            return t.exp[s as usize];
        }
        slow_mul(&self.0, a, b)
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let s = (t.log[a as usize] as u128 * (e % n) as u128 % n as u128) as usize;
            return t.exp[s];
        }
        let mut acc = 1;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        if self.0.k == 1 {
            let r = arith::mod_inverse(a as u64, self.0.p as u64).expect("nonzero mod prime");
            return Ok(r as Fe);
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let s = (n - t.log[a as usize] as u64) % n;
            return Ok(t.exp[s as usize]);
        }
        Ok(self.pow(a, self.0.q - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Fe) -> Result<u64, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        let mut ord = self.0.q - 1;
        for r in arith::prime_factors(ord) {
            while ord % r == 0 && self.pow(a, ord / r) == 1 {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// The element `g^((q-1)/n)` of order exactly `n`, `g` the canonical generator.
    pub fn root_of_unity(&self, n: u64) -> Result<Fe, GfError> {
        let qm1 = self.0.q - 1;
        if n == 0 || qm1 % n != 0 {
            return Err(GfError::NoRootOfUnity { n, q: self.0.q });
        }
        Ok(self.pow(self.0.generator, qm1 / n))
    }

    pub fn is_square(&self, a: Fe) -> bool {
        if a == 0 || self.0.p == 2 {
            return true;
        }
        self.pow(a, (self.0.q - 1) / 2) == 1
    }

    /// `x^((p^base_degree)^e)`, a power of Frobenius relative to the subfield
    /// GF(p^base_degree).
    pub fn frobenius_power(&self, x: Fe, base_degree: u32, e: u32) -> Fe {
        let steps = (base_degree as u64 * e as u64) % self.0.k as u64;
        (0..steps).fold(x, |acc, _| self.pow(acc, self.0.p as u64))
    }

    /// The involution `x -> x^(sqrt |F|)`; only defined for even degree.
    pub fn conjugate(&self, x: Fe) -> Result<Fe, GfError> {
        if self.0.k % 2 != 0 {
            return Err(GfError::NoInvolution(self.0.q));
        }
        Ok(self.frobenius_power(x, 1, self.0.k / 2))
    }

    /// Discrete logarithm to the canonical generator.
    pub fn log(&self, a: Fe) -> Result<u64, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        if let Some(t) = &self.0.tables {
            return Ok(t.log[a as usize] as u64);
        }
        if self.0.k == 1 {
            let mut x = 1;
            for i in 0..self.0.q - 1 {
                if x == a {
                    return Ok(i);
                }
                x = self.mul(x, self.0.generator);
            }
        } else {
            let mut x = 1;
            for i in 0..self.0.q - 1 {
                if x == a {
                    return Ok(i);
                }
                x = slow_mul(&self.0, x, self.0.generator);
            }
        }
        unreachable!("generator has full order")
    }

    /// Binds an element to this field.
    pub fn elem(&self, value: Fe) -> FieldElement {
        assert!(self.contains(value), "{value} is not an element of {self}");
        FieldElement {
            field: self.clone(),
            value,
        }
    }
}

fn slow_mul(f: &FieldInner, a: Fe, b: Fe) -> Fe {
    let p = f.p as u64;
    let k = f.k as usize;
    let da = digits(a, f.p, k);
    let db = digits(b, f.p, k);
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let m: Vec<u64> = f.modulus.iter().map(|&c| c as u64).collect();
    fp::reduce(&mut prod, &m, p);
    prod.iter().rev().fold(0u64, |acc, &c| acc * p + c) as Fe
}

fn digits(e: Fe, p: u32, k: usize) -> Vec<u64> {
    let mut v = e as u64;
    let p = p as u64;
    (0..k)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn build(p: u32, k: u32, q: u64) -> FieldInner {
    if k == 1 {
        let mut inner = FieldInner {
            p,
            k,
            q,
            modulus: Vec::new(),
            generator: 1,
            tables: None,
        };
        let factors = arith::prime_factors(q - 1);
        inner.generator = (1..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| arith::pow_mod(g, (q - 1) / r, q) != 1)
            })
            .expect("prime field has a generator") as Fe;
        return inner;
    }
    let modulus = smallest_irreducible(p as u64, k as usize);
    let mut inner = FieldInner {
        p,
        k,
        q,
        modulus: modulus.iter().map(|&c| c as u32).collect(),
        generator: 0,
        tables: None,
    };
    let factors = arith::prime_factors(q - 1);
    let slow_pow = |inner: &FieldInner, a: Fe, mut e: u64| {
        let (mut acc, mut base) = (1, a);
        while e > 0 {
            if e & 1 == 1 {
                acc = slow_mul(inner, acc, base);
            }
            base = slow_mul(inner, base, base);
            e >>= 1;
        }
        acc
    };
    inner.generator = (1..q as u32)
        .find(|&g| {
            factors
                .iter()
                .all(|&r| slow_pow(&inner, g, (q - 1) / r) != 1)
        })
        .expect("finite field has a generator");
    if q <= TABLE_LIMIT {
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![0u32; q as usize];
        let mut x: Fe = 1;
        for i in 0..(q - 1) as u32 {
            exp.push(x);
            log[x as usize] = i;
            x = slow_mul(&inner, x, inner.generator);
        }
        inner.tables = Some(Tables { exp, log });
    }
    inner
}

/// Smallest monic irreducible of degree `k` over GF(p), ascending coefficients.
fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    let count = p.pow(k as u32);
    for rank in 0..count {
        let mut f: Vec<u64> = digits(rank as Fe, p as u32, k);
        f.push(1);
        if f[0] != 0 && fp::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

/// Dense polynomials over GF(p) on raw `u64` coefficients, used only while
/// constructing extension fields.
pub(crate) mod fp {
    use crate::arith;

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    /// Reduces `a` modulo the monic polynomial `m` in place.
    pub fn reduce(a: &mut Vec<u64>, m: &[u64], p: u64) {
        let dm = m.len() - 1;
        trim(a);
        while a.len() > dm {
            let lead = *a.last().unwrap();
            let shift = a.len() - 1 - dm;
            for (i, &c) in m.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - lead * c % p) % p;
            }
            trim(a);
        }
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        reduce(&mut prod, m, p);
        prod
    }

    pub fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut base = a.to_vec();
        reduce(&mut base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let inv = arith::mod_inverse(*b.last().unwrap(), p).unwrap();
            let monic: Vec<u64> = b.iter().map(|&c| c * inv % p).collect();
            reduce(&mut a, &monic, p);
            std::mem::swap(&mut a, &mut b);
        }
        a
    }

    /// Rabin's test for a monic `f` of degree `k >= 1`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let k = f.len() - 1;
        if k == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        // frob[j] = x^(p^j) mod f
        let mut frob = vec![{
            let mut t = x.clone();
            reduce(&mut t, f, p);
            t
        }];
        for j in 0..k {
            let next = powmod(&frob[j], p, f, p);
            frob.push(next);
        }
        let mut xr = x.clone();
        reduce(&mut xr, f, p);
        if frob[k] != xr {
            return false;
        }
        for r in arith::prime_factors(k as u64) {
            let mut h = frob[k / r as usize].clone();
            h.resize(h.len().max(2), 0);
            h[1] = (h[1] + p - 1) % p;
            trim(&mut h);
            let g = gcd(f, &h, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// An element bound to its field; mixing fields is an error.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Fe,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.value, self.field)
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    fn check(&self, other: &FieldElement) -> Result<(), GfError> {
        if self.field != other.field {
            return Err(GfError::ContextMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    fn wrap(&self, value: Fe) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<FieldElement, GfError> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.wrap(self.field.pow(self.value, e))
    }
}

/// A field embedding GF(p^a) -> GF(p^b), `a | b`, sending the residue class
/// of `x` to the smallest root of the source modulus in the target.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: Field,
    dst: Field,
    image: Vec<Fe>,
    preimage: HashMap<Fe, Fe>,
}

impl Embedding {
    pub fn new(src: &Field, dst: &Field) -> Result<Embedding, GfError> {
        if src.characteristic() != dst.characteristic() || dst.degree() % src.degree() != 0 {
            return Err(GfError::NoEmbedding {
                src: src.order(),
                dst: dst.order(),
            });
        }
        let image: Vec<Fe> = if src.degree() == 1 || src == dst {
            src.elements().collect()
        } else {
            let m = src.modulus().expect("extension has a modulus");
            // roots lie in the subfield, whose nonzero part is generated by h
            let h = dst.pow(dst.generator(), (dst.order() - 1) / (src.order() - 1));
            let mut x = 1;
            let mut root = None;
            for _ in 0..src.order() - 1 {
                let v = m
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| dst.add(dst.mul(acc, x), c as Fe));
                if v == 0 && root.is_none_or(|r| x < r) {
                    root = Some(x);
                }
                x = dst.mul(x, h);
            }
            let root = root.expect("subfield modulus splits in the extension");
            src.elements()
                .map(|e| {
                    src.coeffs(e)
                        .iter()
                        .rev()
                        .fold(0, |acc, &c| dst.add(dst.mul(acc, root), c as Fe))
                })
                .collect()
        };
        let preimage = image
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as Fe))
            .collect();
        Ok(Embedding {
            src: src.clone(),
            dst: dst.clone(),
            image,
            preimage,
        })
    }

    pub fn source(&self) -> &Field {
        &self.src
    }

    pub fn target(&self) -> &Field {
        &self.dst
    }

    pub fn apply(&self, e: Fe) -> Fe {
        self.image[e as usize]
    }

    /// Inverse image, if `e` lies in the embedded subfield.
    pub fn preimage(&self, e: Fe) -> Option<Fe> {
        self.preimage.get(&e).copied()
    }
}
