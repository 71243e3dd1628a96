//! Dense univariate polynomials over a [`Field`] and the factorization of
//! `x^m - 1` into self-reciprocal factors and reciprocal pairs.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::arith;
use crate::gf::{Embedding, Fe, Field, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("reciprocal needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error("gcd({a}, {n}) != 1")]
    NotCoprime { a: u64, n: u64 },
    #[error("x^{m} - 1 has repeated roots in characteristic {p}")]
    RepeatedRoots { m: u64, p: u32 },
    #[error("scaling by zero")]
    ZeroScale,
    #[error("polynomial is not invertible modulo the given modulus")]
    NotInvertible,
    #[error("polynomials over different fields ({0} vs {1})")]
    ContextMismatch(String, String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("x"))
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> Poly {
        debug_assert!(coeffs.iter().all(|&c| field.contains(c)));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Coefficients given as integers, reduced into the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::new(field, vec![1])
    }

    pub fn monomial(field: &Field, c: Fe, d: usize) -> Poly {
        let mut v = vec![0; d + 1];
        v[d] = c;
        Poly::new(field, v)
    }

    /// `x^n - 1`.
    pub fn x_n_minus_1(field: &Field, n: usize) -> Poly {
        let mut v = vec![0; n + 1];
        v[0] = field.neg(1);
        v[n] = field.add(v[n], 1);
        Poly::new(field, v)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn check(&self, other: &Poly) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::ContextMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            f,
            (0..n)
                .map(|i| f.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn scale(&self, c: Fe) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.check(divisor)?;
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let f = &self.field;
        let inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![0; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], inv);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        Ok(self.divmod(divisor)?.1)
    }

    pub fn divides(&self, other: &Poly) -> Result<bool, PolyError> {
        Ok(other.rem(self)?.is_zero())
    }

    pub fn make_monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading()).expect("nonzero leading");
        self.scale(inv)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.make_monic())
    }

    /// Inverse modulo `m`, when `gcd(self, m) = 1`.
    pub fn inverse_mod(&self, m: &Poly) -> Result<Poly, PolyError> {
        self.check(m)?;
        let (mut r0, mut r1) = (m.clone(), self.rem(m)?);
        let (mut t0, mut t1) = (Poly::zero(&self.field), Poly::one(&self.field));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let t = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (t0, t1) = (t1, t);
        }
        if r0.degree() != Some(0) {
            return Err(PolyError::NotInvertible);
        }
        let c = self.field.inv(r0.leading())?;
        t0.scale(c).rem(m)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluates at an element of an extension field.
    pub fn eval_embedded(&self, emb: &Embedding, x: Fe) -> Fe {
        let big = emb.target();
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| big.add(big.mul(acc, x), emb.apply(c)))
    }

    /// All roots lying in the target field of `emb`, ascending.
    pub fn roots_in(&self, emb: &Embedding) -> Vec<Fe> {
        emb.target()
            .elements()
            .filter(|&r| self.eval_embedded(emb, r) == 0)
            .collect()
    }

    /// The monic reciprocal `f(0)^{-1} x^deg f(1/x)`.
    pub fn reciprocal(&self) -> Result<Poly, PolyError> {
        if self.coeff(0) == 0 {
            return Err(PolyError::ZeroConstantTerm);
        }
        let inv = self.field.inv(self.coeffs[0])?;
        let rev: Vec<Fe> = self.coeffs.iter().rev().copied().collect();
        Ok(Poly::new(&self.field, rev).scale(inv))
    }

    pub fn is_self_reciprocal(&self) -> Result<bool, PolyError> {
        Ok(self.reciprocal()? == self.make_monic())
    }

    /// Monic normalization of `f(lambda x)`.
    pub fn scale_substitute(&self, lambda: Fe) -> Result<Poly, PolyError> {
        if lambda == 0 {
            return Err(PolyError::ZeroScale);
        }
        let f = &self.field;
        let mut pw = 1;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            out.push(f.mul(c, pw));
            pw = f.mul(pw, lambda);
        }
        Ok(Poly::new(f, out).make_monic())
    }

    /// `f(x^a) mod (x^n - 1)`, requiring `gcd(a, n) = 1`.
    pub fn power_substitute_mod(&self, a: u64, n: usize) -> Result<Poly, PolyError> {
        if arith::gcd(a, n as u64) != 1 {
            return Err(PolyError::NotCoprime { a, n: n as u64 });
        }
        let f = &self.field;
        let mut out = vec![0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = ((i as u128 * a as u128) % n as u128) as usize;
            out[j] = f.add(out[j], c);
        }
        Ok(Poly::new(f, out))
    }

    /// Reduction modulo `x^n - 1` by folding exponents.
    pub fn reduce_cyclic(&self, n: usize) -> Poly {
        let f = &self.field;
        let mut out = vec![0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i % n] = f.add(out[i % n], c);
        }
        Poly::new(f, out)
    }

    /// Ordering by the coefficient tuple read as a base-|F| integer, the
    /// leading coefficient most significant.
    pub fn cmp_canonical(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    pub fn display_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        terms.join(" + ")
    }
}

/// A q-cyclotomic coset modulo n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicCoset {
    pub modulus: u64,
    pub representative: u64,
    pub members: Vec<u64>,
}

impl CyclotomicCoset {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.binary_search(&(x % self.modulus)).is_ok()
    }
}

/// All q-cyclotomic cosets modulo `n`, ordered by representative.
pub fn cyclotomic_cosets(q: u64, n: u64) -> Result<Vec<CyclotomicCoset>, PolyError> {
    if n == 0 || arith::gcd(q, n) != 1 {
        return Err(PolyError::NotCoprime { a: q, n });
    }
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for r in 0..n {
        if seen[r as usize] {
            continue;
        }
        let mut members = Vec::new();
        let mut x = r;
        while !seen[x as usize] {
            seen[x as usize] = true;
            members.push(x);
            x = ((x as u128 * q as u128) % n as u128) as u64;
        }
        members.sort_unstable();
        out.push(CyclotomicCoset {
            modulus: n,
            representative: r,
            members,
        });
    }
    Ok(out)
}

/// The extension GF(q^ord_m(q)) holding all m-th roots of unity, with the
/// canonical primitive m-th root.
#[derive(Clone, Debug)]
pub struct SplittingField {
    pub embedding: Embedding,
    pub alpha: Fe,
    pub m: u64,
}

impl SplittingField {
    pub fn new(base: &Field, m: u64) -> Result<SplittingField, PolyError> {
        if arith::gcd(m, base.characteristic() as u64) != 1 {
            return Err(PolyError::RepeatedRoots {
                m,
                p: base.characteristic(),
            });
        }
        let ord = arith::multiplicative_order(base.order() % m.max(1), m) as u32;
        let big = Field::new(base.characteristic(), base.degree() * ord)?;
        let embedding = Embedding::new(base, &big)?;
        let alpha = big.root_of_unity(m)?;
        Ok(SplittingField {
            embedding,
            alpha,
            m,
        })
    }

    pub fn field(&self) -> &Field {
        self.embedding.target()
    }

    /// `alpha^e`.
    pub fn root(&self, e: u64) -> Fe {
        self.field().pow(self.alpha, e % self.m)
    }

    /// Exponent `e` with `alpha^e = x`, if `x` is an m-th root of unity.
    pub fn exponent_of(&self, x: Fe) -> Option<u64> {
        let big = self.field();
        let mut y = 1;
        for e in 0..self.m {
            if y == x {
                return Some(e);
            }
            y = big.mul(y, self.alpha);
        }
        None
    }

    /// Monic polynomial over the base with roots `alpha^i`, `i` in `exps`.
    /// The set must be closed under multiplication by q.
    pub fn poly_from_exponents(&self, exps: &[u64]) -> Poly {
        let big = self.field();
        let mut acc = vec![1];
        for &e in exps {
            let r = big.neg(self.root(e));
            let mut next = vec![0; acc.len() + 1];
            for (i, &c) in acc.iter().enumerate() {
                next[i + 1] = big.add(next[i + 1], c);
                next[i] = big.add(next[i], big.mul(c, r));
            }
            acc = next;
        }
        let base = self.embedding.source();
        Poly::new(
            base,
            acc.iter()
                .map(|&c| {
                    self.embedding
                        .preimage(c)
                        .expect("coset product has coefficients in the base field")
                })
                .collect(),
        )
    }

    /// Exponents `i` with `f(alpha^i) = 0`, ascending.
    pub fn zero_exponents(&self, f: &Poly) -> Vec<u64> {
        (0..self.m)
            .filter(|&e| f.eval_embedded(&self.embedding, self.root(e)) == 0)
            .collect()
    }
}

/// Monic minimal polynomial over `emb.source()` of `beta` in `emb.target()`.
pub fn minimal_polynomial(emb: &Embedding, beta: Fe) -> Poly {
    let big = emb.target();
    let k0 = emb.source().degree();
    let mut orbit = vec![beta];
    let mut x = big.frobenius_power(beta, k0, 1);
    while x != beta {
        orbit.push(x);
        x = big.frobenius_power(x, k0, 1);
    }
    let mut acc = vec![1];
    for r in orbit {
        let r = big.neg(r);
        let mut next = vec![0; acc.len() + 1];
        for (i, &c) in acc.iter().enumerate() {
            next[i + 1] = big.add(next[i + 1], c);
            next[i] = big.add(next[i], big.mul(c, r));
        }
        acc = next;
    }
    Poly::new(
        emb.source(),
        acc.iter()
            .map(|&c| emb.preimage(c).expect("Frobenius-stable coefficients"))
            .collect(),
    )
}

/// One irreducible factor of `x^m - 1` with the coset of its root exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub poly: Poly,
    pub coset: CyclotomicCoset,
}

impl Factor {
    pub fn degree(&self) -> usize {
        self.coset.len()
    }
}

/// `x^m - 1 = delta * g_1 ... g_s * h_1 h_1^* ... h_t h_t^*`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub m: u64,
    pub field: Field,
    pub self_reciprocal: Vec<Factor>,
    pub pairs: Vec<(Factor, Factor)>,
    pub unit: Fe,
}

impl Factorization {
    /// All factors in component order: self-reciprocal, then each pair.
    pub fn factors(&self) -> Vec<&Factor> {
        let mut out: Vec<&Factor> = self.self_reciprocal.iter().collect();
        for (h, hs) in &self.pairs {
            out.push(h);
            out.push(hs);
        }
        out
    }

    pub fn product(&self) -> Poly {
        self.factors()
            .iter()
            .fold(Poly::one(&self.field), |acc, f| acc.mul(&f.poly))
            .scale(self.unit)
    }

    pub fn len(&self) -> usize {
        self.self_reciprocal.len() + 2 * self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn factor_xm_minus_1(field: &Field, m: u64) -> Result<Factorization, PolyError> {
    let (fac, _) = factor_with_splitting(field, m)?;
    Ok(fac)
}

/// Factorization together with the splitting field used to compute it.
pub fn factor_with_splitting(
    field: &Field,
    m: u64,
) -> Result<(Factorization, SplittingField), PolyError> {
    let q = field.order();
    if m == 0 || arith::gcd(m, field.characteristic() as u64) != 1 {
        return Err(PolyError::RepeatedRoots {
            m,
            p: field.characteristic(),
        });
    }
    let sf = SplittingField::new(field, m)?;
    let cosets = cyclotomic_cosets(q % m, m)?;
    let factors: Vec<Factor> = cosets
        .into_iter()
        .map(|c| Factor {
            poly: sf.poly_from_exponents(&c.members),
            coset: c,
        })
        .collect();
    let mut self_reciprocal = Vec::new();
    let mut pairs = Vec::new();
    let mut used = vec![false; factors.len()];
    for i in 0..factors.len() {
        if used[i] {
            continue;
        }
        let neg = (m - factors[i].coset.representative) % m;
        let j = factors
            .iter()
            .position(|f| f.coset.contains(neg))
            .expect("cosets partition Z_m");
        used[i] = true;
        used[j] = true;
        if i == j {
            self_reciprocal.push(factors[i].clone());
        } else {
            let (a, b) = (factors[i].clone(), factors[j].clone());
            if a.poly.cmp_canonical(&b.poly) == Ordering::Greater {
                pairs.push((b, a));
            } else {
                pairs.push((a, b));
            }
        }
    }
    Ok((
        Factorization {
            m,
            field: field.clone(),
            self_reciprocal,
            pairs,
            unit: 1,
        },
        sf,
    ))
}
