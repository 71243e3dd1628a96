//! Cyclic codes via defining sets, the multiplier and scaling maps, isodual
//! witnesses, duadic splittings and the isodual cyclic constructions.
//!
//! Conventions: the multiplier `mu_a` moves coordinate `i` to `a i mod n`,
//! which on polynomials is `c(x) -> c(x^a)` and on defining sets is
//! `S -> a^{-1} S`. Scaling by an n-th root of unity `lambda = alpha^t` is
//! `c(x) -> c(lambda x)` (coordinate `i` multiplied by `lambda^i`) and sends
//! `S -> S - t`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::gf::{Fe, Field, GfError};
use crate::lincode::{
    equivalence_search, CodeError, EquivalenceKind, EquivalenceWitness, LinearCode,
    EQUIVALENCE_LENGTH_CAP,
};
use crate::polyring::{cyclotomic_cosets, Poly, PolyError, SplittingField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclicError {
    #[error("generator does not divide x^{0} - 1")]
    NotDivisor(usize),
    #[error("defining set is not a union of cyclotomic cosets")]
    NotClosed,
    #[error("gcd({a}, {n}) != 1")]
    NotCoprime { a: u64, n: u64 },
    #[error("scale factor is not an {0}-th root of unity")]
    NotRootOfUnity(usize),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A cyclic code of length `n` coprime to the characteristic.
#[derive(Clone)]
pub struct CyclicCode {
    field: Field,
    n: usize,
    defining_set: Vec<u64>,
    gpoly: Poly,
    sf: SplittingField,
}

impl PartialEq for CyclicCode {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.defining_set == other.defining_set
    }
}
impl Eq for CyclicCode {}

impl fmt::Debug for CyclicCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CyclicCode(n={}, k={}, g={}, over {})",
            self.n,
            self.dim(),
            self.gpoly,
            self.field
        )
    }
}

impl CyclicCode {
    pub fn from_gpoly(field: &Field, n: usize, g: &Poly) -> Result<CyclicCode, CyclicError> {
        let xn = Poly::x_n_minus_1(field, n);
        if g.is_zero() || !g.divides(&xn)? {
            return Err(CyclicError::NotDivisor(n));
        }
        let sf = SplittingField::new(field, n as u64)?;
        let defining_set = sf.zero_exponents(g);
        Ok(CyclicCode {
            field: field.clone(),
            n,
            defining_set,
            gpoly: g.make_monic(),
            sf,
        })
    }

    pub fn from_defining_set(
        field: &Field,
        n: usize,
        set: &[u64],
    ) -> Result<CyclicCode, CyclicError> {
        let sf = SplittingField::new(field, n as u64)?;
        Self::with_splitting(field, n, set, sf)
    }

    fn with_splitting(
        field: &Field,
        n: usize,
        set: &[u64],
        sf: SplittingField,
    ) -> Result<CyclicCode, CyclicError> {
        let s: BTreeSet<u64> = set.iter().map(|&e| e % n as u64).collect();
        let q = field.order() % n as u64;
        if s.iter()
            .any(|&e| !s.contains(&((e as u128 * q as u128 % n as u128) as u64)))
        {
            return Err(CyclicError::NotClosed);
        }
        let defining_set: Vec<u64> = s.into_iter().collect();
        let gpoly = sf.poly_from_exponents(&defining_set);
        Ok(CyclicCode {
            field: field.clone(),
            n,
            defining_set,
            gpoly,
            sf,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.n - self.defining_set.len()
    }

    pub fn defining_set(&self) -> &[u64] {
        &self.defining_set
    }

    pub fn gpoly(&self) -> &Poly {
        &self.gpoly
    }

    pub fn splitting_field(&self) -> &SplittingField {
        &self.sf
    }

    /// Rows `x^i g(x)`, `0 <= i < k`.
    pub fn generator_matrix(&self) -> Vec<Vec<Fe>> {
        shift_rows(&self.gpoly, self.n)
    }

    pub fn to_linear(&self) -> LinearCode {
        LinearCode::from_rows(&self.field, self.n, self.generator_matrix())
            .expect("shift rows have length n")
    }

    fn derived(&self, set: Vec<u64>) -> CyclicCode {
        Self::with_splitting(&self.field, self.n, &set, self.sf.clone())
            .expect("image of a coset union is a coset union")
    }

    /// Euclidean dual: defining set `Z_n \ (-S)`.
    pub fn dual(&self) -> CyclicCode {
        let n = self.n as u64;
        let neg: BTreeSet<u64> = self.defining_set.iter().map(|&e| (n - e) % n).collect();
        self.derived((0..n).filter(|e| !neg.contains(e)).collect())
    }

    /// `mu_a(C)`.
    pub fn multiplier(&self, a: u64) -> Result<CyclicCode, CyclicError> {
        let n = self.n as u64;
        let inv = arith::mod_inverse(a % n, n).ok_or(CyclicError::NotCoprime { a, n })?;
        Ok(self.derived(
            self.defining_set
                .iter()
                .map(|&e| (e as u128 * inv as u128 % n as u128) as u64)
                .collect(),
        ))
    }

    /// `{c(lambda x) : c in C}` for an n-th root of unity `lambda` in the base field.
    pub fn scale(&self, lambda: Fe) -> Result<CyclicCode, CyclicError> {
        let t = self.root_exponent(lambda)?;
        let n = self.n as u64;
        Ok(self.derived(self.defining_set.iter().map(|&e| (e + n - t) % n).collect()))
    }

    fn root_exponent(&self, lambda: Fe) -> Result<u64, CyclicError> {
        if lambda == 0 || self.field.pow(lambda, self.n as u64) != 1 {
            return Err(CyclicError::NotRootOfUnity(self.n));
        }
        let big = self.sf.embedding.apply(lambda);
        Ok(self.sf.exponent_of(big).expect("n-th root of unity"))
    }

    /// `<g*>`.
    pub fn reciprocal_code(&self) -> CyclicCode {
        let n = self.n as u64;
        self.derived(self.defining_set.iter().map(|&e| (n - e) % n).collect())
    }

    /// Image under the monomial map `y_{a i} = lambda^i c_i`.
    pub fn apply_multiplier_scale(&self, a: u64, lambda: Fe) -> Result<CyclicCode, CyclicError> {
        self.scale(lambda)?.multiplier(a)
    }

    /// Searches `mu_a o scale_lambda` for a map onto `target`, `a` over units
    /// ascending, then `lambda` over the base field's n-th roots of unity.
    pub fn structured_witness(&self, target: &CyclicCode) -> Option<(u64, Fe)> {
        if self.n != target.n || self.field != target.field || self.dim() != target.dim() {
            return None;
        }
        let n = self.n as u64;
        let lambdas = roots_of_unity_in(&self.field, self.n);
        let shifts: Vec<u64> = lambdas
            .iter()
            .map(|&l| self.root_exponent(l).expect("root of unity"))
            .collect();
        for a in arith::units(n) {
            let inv = arith::mod_inverse(a, n).unwrap_or(0);
            for (&lambda, &t) in lambdas.iter().zip(&shifts) {
                let img: BTreeSet<u64> = self
                    .defining_set
                    .iter()
                    .map(|&e| ((e + n - t) % n) as u128 * inv as u128 % n as u128)
                    .map(|e| e as u64)
                    .collect();
                if img.iter().eq(target.defining_set.iter()) {
                    return Some((a, lambda));
                }
            }
        }
        None
    }

    /// Isoduality check with a witness carrying `C` onto its dual.
    pub fn is_isodual(&self, budget: u64) -> Result<EquivalenceWitness, CyclicError> {
        if 2 * self.dim() != self.n {
            return Ok(EquivalenceWitness::NoneFound {
                reason: format!("dimension {} is not half of {}", self.dim(), self.n),
            });
        }
        let lin = self.to_linear();
        let dual = self.dual();
        let dual_lin = dual.to_linear();
        debug_assert_eq!(dual_lin, lin.dual());
        if lin.size() <= budget as u128 {
            let a = lin.weight_enumerator(budget)?;
            let b = dual_lin.weight_enumerator(budget)?;
            if a != b {
                return Ok(EquivalenceWitness::NoneFound {
                    reason: "weight enumerators of the code and its dual differ".into(),
                });
            }
        }
        if let Some((a, lambda)) = self.structured_witness(&dual) {
            let w = EquivalenceWitness::Multiplier { a, lambda };
            assert!(
                w.verify(&lin, &dual_lin),
                "structured witness failed replay"
            );
            return Ok(w);
        }
        Ok(general_equivalence(&lin, &dual_lin, budget)?)
    }
}

fn shift_rows(g: &Poly, n: usize) -> Vec<Vec<Fe>> {
    let deg = g.degree().expect("nonzero generator");
    (0..n - deg)
        .map(|i| {
            let mut r = vec![0; n];
            for (j, &c) in g.coeffs().iter().enumerate() {
                r[i + j] = c;
            }
            r
        })
        .collect()
}

/// n-th roots of unity of `field`, ascending.
pub fn roots_of_unity_in(field: &Field, n: usize) -> Vec<Fe> {
    let d = arith::gcd(n as u64, field.order() - 1);
    let mut out: Vec<Fe> = (0..d)
        .map(|i| field.pow(field.root_of_unity(d).expect("d | q - 1"), i))
        .collect();
    out.sort_unstable();
    out
}

fn general_equivalence(
    c: &LinearCode,
    d: &LinearCode,
    budget: u64,
) -> Result<EquivalenceWitness, CodeError> {
    if c.len() > EQUIVALENCE_LENGTH_CAP {
        return Ok(EquivalenceWitness::BudgetExhausted {
            reason: format!(
                "no structured witness and length {} exceeds the search cap",
                c.len()
            ),
        });
    }
    let w = equivalence_search(c, d, EquivalenceKind::Permutation, budget)?;
    if w.is_found() || matches!(w, EquivalenceWitness::BudgetExhausted { .. }) {
        return Ok(w);
    }
    if let EquivalenceWitness::NoneFound { reason } = &w {
        if reason != "exhaustive search" {
            return Ok(w);
        }
    }
    equivalence_search(c, d, EquivalenceKind::Monomial, budget)
}

/// The generator polynomial of `code` if it is cyclic.
pub fn cyclic_generator(code: &LinearCode) -> Option<Poly> {
    let f = code.field();
    let n = code.len();
    if n == 0 {
        return None;
    }
    let mut g = Poly::x_n_minus_1(f, n);
    for r in code.generator() {
        g = g.gcd(&Poly::new(f, r.clone())).ok()?;
    }
    if g.degree()? + code.k() != n {
        return None;
    }
    let lin = LinearCode::from_rows(f, n, shift_rows(&g, n)).ok()?;
    (lin == *code).then_some(g)
}

/// Polynomial-level search for `y_{a i} = lambda^i c_i` carrying `<g>` onto
/// `<h>`; needs no splitting field.
pub fn structured_search_poly(field: &Field, n: usize, g: &Poly, h: &Poly) -> Option<(u64, Fe)> {
    if g.degree() != h.degree() {
        return None;
    }
    let xn = Poly::x_n_minus_1(field, n);
    let target = h.make_monic();
    let lambdas = roots_of_unity_in(field, n);
    for a in arith::units(n as u64) {
        for &lambda in &lambdas {
            let scaled = g.scale_substitute(lambda).ok()?;
            let img = if n == 1 {
                scaled.clone()
            } else {
                scaled.power_substitute_mod(a, n).ok()?
            };
            if img.gcd(&xn).ok()? == target {
                return Some((a, lambda));
            }
        }
    }
    None
}

/// Decides equivalence of two codes of equal length: dimension and weight
/// enumerator prefilters, structured multiplier search when both are cyclic,
/// then backtracking for short codes.
pub fn decide_equivalence(
    c: &LinearCode,
    d: &LinearCode,
    budget: u64,
) -> Result<EquivalenceWitness, CodeError> {
    if c.field() != d.field() {
        return Err(CodeError::ContextMismatch(
            c.field().to_string(),
            d.field().to_string(),
        ));
    }
    if c.len() != d.len() {
        return Err(CodeError::LengthMismatch(c.len(), d.len()));
    }
    if c.k() != d.k() {
        return Ok(EquivalenceWitness::NoneFound {
            reason: format!("dimensions differ ({} vs {})", c.k(), d.k()),
        });
    }
    if c == d {
        return Ok(EquivalenceWitness::Permutation {
            perm: (0..c.len()).collect(),
        });
    }
    if let (Ok(a), Ok(b)) = (c.weight_enumerator(budget), d.weight_enumerator(budget)) {
        if a != b {
            return Ok(EquivalenceWitness::NoneFound {
                reason: "weight enumerators differ".into(),
            });
        }
    }
    if let (Some(g), Some(h)) = (cyclic_generator(c), cyclic_generator(d)) {
        if let Some((a, lambda)) = structured_search_poly(c.field(), c.len(), &g, &h) {
            let w = EquivalenceWitness::Multiplier { a, lambda };
            assert!(w.verify(c, d), "structured witness failed replay");
            return Ok(w);
        }
    }
    general_equivalence(c, d, budget)
}

/// A partition of the nonzero q-cosets mod `m'` into two halves swapped by
/// a multiplier `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DuadicSplitting {
    pub m_prime: u64,
    pub s1: Vec<u64>,
    pub s2: Vec<u64>,
    /// Smallest multiplier with `b S1 = S2`.
    pub b: u64,
    /// Whether `-1` swaps the halves.
    pub mu_minus_one: bool,
}

impl DuadicSplitting {
    /// `(f_1, f_2)` with `x^{m'} - 1 = (x - 1) f_1 f_2`, roots `alpha^{S_i}`.
    pub fn polys(&self, field: &Field) -> Result<(Poly, Poly), CyclicError> {
        let sf = SplittingField::new(field, self.m_prime)?;
        Ok((
            sf.poly_from_exponents(&self.s1),
            sf.poly_from_exponents(&self.s2),
        ))
    }
}

/// Largest number of nonzero cosets handled by the splitting search.
const MAX_SPLIT_COSETS: usize = 24;

pub fn find_duadic_splittings(
    field: &Field,
    m_prime: u64,
) -> Result<Vec<DuadicSplitting>, CyclicError> {
    if m_prime % 2 == 0 {
        return Err(CyclicError::Hypothesis(format!("m' = {m_prime} is even")));
    }
    if arith::gcd(m_prime, field.characteristic() as u64) != 1 {
        return Err(CyclicError::NotCoprime {
            a: field.characteristic() as u64,
            n: m_prime,
        });
    }
    if m_prime == 1 {
        return Ok(Vec::new());
    }
    let cosets: Vec<_> = cyclotomic_cosets(field.order() % m_prime, m_prime)?
        .into_iter()
        .filter(|c| c.representative != 0)
        .collect();
    let r = cosets.len();
    if r > MAX_SPLIT_COSETS {
        return Err(CyclicError::Hypothesis(format!(
            "{r} nonzero cosets exceed the splitting search limit"
        )));
    }
    let units = arith::units(m_prime);
    let mut out = Vec::new();
    // S1 always contains the coset of 1 (index 0 among nonzero cosets)
    for mask in 0..(1u64 << r) {
        if mask & 1 == 0 {
            continue;
        }
        let mut s1: Vec<u64> = Vec::new();
        let mut s2: Vec<u64> = Vec::new();
        for (i, c) in cosets.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s1.extend(&c.members);
            } else {
                s2.extend(&c.members);
            }
        }
        if s1.len() != s2.len() {
            continue;
        }
        s1.sort_unstable();
        s2.sort_unstable();
        let swaps = |b: u64| {
            let mut img: Vec<u64> = s1.iter().map(|&e| e * b % m_prime).collect();
            img.sort_unstable();
            img == s2
        };
        if let Some(&b) = units.iter().find(|&&b| swaps(b)) {
            let mu_minus_one = swaps(m_prime - 1);
            out.push(DuadicSplitting {
                m_prime,
                s1,
                s2,
                b,
                mu_minus_one,
            });
        }
    }
    Ok(out)
}

/// Parameters shared by the constructions: `alpha` a primitive `2^a`-th root.
fn construction_setup(field: &Field, a: u32, m_prime: u64) -> Result<(Fe, usize), CyclicError> {
    if field.characteristic() == 2 {
        return Err(CyclicError::Hypothesis("characteristic must be odd".into()));
    }
    if a == 0 {
        return Err(CyclicError::Hypothesis("a must be at least 1".into()));
    }
    if m_prime % 2 == 0 || arith::gcd(m_prime, field.order()) != 1 {
        return Err(CyclicError::Hypothesis(format!(
            "m' = {m_prime} must be odd and coprime to q"
        )));
    }
    let two_a = 1u64 << a;
    if (field.order() - 1) % two_a != 0 {
        return Err(CyclicError::Hypothesis(format!(
            "q = {} is not 1 mod 2^{a}",
            field.order()
        )));
    }
    let alpha = field.root_of_unity(two_a)?;
    Ok((alpha, (two_a * m_prime) as usize))
}

/// `prod f(alpha^e x)` over the given exponents.
fn scaled_product(
    f: &Poly,
    alpha: Fe,
    exps: impl Iterator<Item = i64>,
) -> Result<Poly, CyclicError> {
    let field = f.field();
    let ainv = field.inv(alpha)?;
    let mut acc = Poly::one(field);
    for e in exps {
        let lambda = if e >= 0 {
            field.pow(alpha, e as u64)
        } else {
            field.pow(ainv, (-e) as u64)
        };
        acc = acc.mul(&f.scale_substitute(lambda)?);
    }
    Ok(acc)
}

/// `x^h - 1` and `x^h + 1`.
fn binomials(field: &Field, h: usize) -> (Poly, Poly) {
    let mut minus = vec![0; h + 1];
    minus[0] = field.neg(1);
    minus[h] = 1;
    let mut plus = vec![0; h + 1];
    plus[0] = 1;
    plus[h] = field.add(plus[h], 1);
    (Poly::new(field, minus), Poly::new(field, plus))
}

fn f_of(field: &Field, m_prime: u64) -> Poly {
    let (q, r) = Poly::x_n_minus_1(field, m_prime as usize)
        .divmod(&Poly::from_ints(field, &[-1, 1]))
        .expect("nonzero divisor");
    debug_assert!(r.is_zero());
    q
}

/// Item 1: `(x^h - 1) prod_{k<h} f(alpha^{-2k-1} x)` and
/// `(x^h + 1) prod_{k=1..h} f(alpha^{-2k} x)`, `h = 2^{a-1}`.
pub fn construct_1(
    field: &Field,
    a: u32,
    m_prime: u64,
) -> Result<(CyclicCode, CyclicCode), CyclicError> {
    let (alpha, n) = construction_setup(field, a, m_prime)?;
    let h = 1i64 << (a - 1);
    let f = f_of(field, m_prime);
    let (minus, plus) = binomials(field, h as usize);
    let g_a = minus.mul(&scaled_product(&f, alpha, (0..h).map(|k| -2 * k - 1))?);
    let g_b = plus.mul(&scaled_product(&f, alpha, (1..=h).map(|k| -2 * k))?);
    Ok((
        CyclicCode::from_gpoly(field, n, &g_a)?,
        CyclicCode::from_gpoly(field, n, &g_b)?,
    ))
}

/// Items 2 and 3i: `(x^h -+ 1) prod_{k=1..h} f_i(alpha^{-2k} x) prod_{k<h} f_j(alpha^{-2k-1} x)`.
pub fn construct_split(
    field: &Field,
    a: u32,
    m_prime: u64,
    fi: &Poly,
    fj: &Poly,
) -> Result<(CyclicCode, CyclicCode), CyclicError> {
    let (alpha, n) = construction_setup(field, a, m_prime)?;
    let f = f_of(field, m_prime);
    if fi.mul(fj).make_monic() != f {
        return Err(CyclicError::Hypothesis(
            "f_i f_j is not (x^m' - 1)/(x - 1)".into(),
        ));
    }
    let h = 1i64 << (a - 1);
    let (minus, plus) = binomials(field, h as usize);
    let body = scaled_product(fi, alpha, (1..=h).map(|k| -2 * k))?.mul(&scaled_product(
        fj,
        alpha,
        (0..h).map(|k| -2 * k - 1),
    )?);
    Ok((
        CyclicCode::from_gpoly(field, n, &minus.mul(&body))?,
        CyclicCode::from_gpoly(field, n, &plus.mul(&body))?,
    ))
}

/// Default split for item 2: `f_1` collects the first member of every
/// reciprocal pair, `f_2` everything else.
pub fn default_split(field: &Field, m_prime: u64) -> Result<(Poly, Poly), CyclicError> {
    let fac = crate::polyring::factor_xm_minus_1(field, m_prime)?;
    let mut f1 = Poly::one(field);
    let mut f2 = Poly::one(field);
    for g in &fac.self_reciprocal {
        if g.coset.representative != 0 {
            f2 = f2.mul(&g.poly);
        }
    }
    for (h, hs) in &fac.pairs {
        f1 = f1.mul(&h.poly);
        f2 = f2.mul(&hs.poly);
    }
    Ok((f1, f2))
}

/// Item 2 with `which = (i, j)`, `{i, j} = {1, 2}`.
pub fn construct_2(
    field: &Field,
    a: u32,
    m_prime: u64,
    split: Option<(Poly, Poly)>,
    which: (u8, u8),
) -> Result<(CyclicCode, CyclicCode), CyclicError> {
    let (f1, f2) = match split {
        Some(s) => s,
        None => default_split(field, m_prime)?,
    };
    match which {
        (1, 2) => construct_split(field, a, m_prime, &f1, &f2),
        (2, 1) => construct_split(field, a, m_prime, &f2, &f1),
        _ => Err(CyclicError::Hypothesis(
            "(i, j) must be (1, 2) or (2, 1)".into(),
        )),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DuadicVariant {
    /// Item 3i with the given `i`.
    Mixed(u8),
    /// Item 3ii with the given `i`; needs a splitting given by `mu_{-1}`.
    Negation(u8),
}

/// Item 3 from a duadic splitting.
pub fn construct_3(
    field: &Field,
    a: u32,
    splitting: &DuadicSplitting,
    variant: DuadicVariant,
) -> Result<(CyclicCode, CyclicCode), CyclicError> {
    let (f1, f2) = splitting.polys(field)?;
    let m_prime = splitting.m_prime;
    match variant {
        DuadicVariant::Mixed(1) => construct_split(field, a, m_prime, &f1, &f2),
        DuadicVariant::Mixed(2) => construct_split(field, a, m_prime, &f2, &f1),
        DuadicVariant::Negation(i @ (1 | 2)) => {
            if !splitting.mu_minus_one {
                return Err(CyclicError::Hypothesis(
                    "the splitting is not given by mu_{-1}".into(),
                ));
            }
            let (alpha, n) = construction_setup(field, a, m_prime)?;
            let fi = if i == 1 { f1 } else { f2 };
            let h = 1usize << (a - 1);
            let (minus, plus) = binomials(field, h);
            let body = scaled_product(&fi, alpha, (1..=(1i64 << a)).map(|k| -k))?;
            Ok((
                CyclicCode::from_gpoly(field, n, &minus.mul(&body))?,
                CyclicCode::from_gpoly(field, n, &plus.mul(&body))?,
            ))
        }
        _ => Err(CyclicError::Hypothesis("i must be 1 or 2".into())),
    }
}
