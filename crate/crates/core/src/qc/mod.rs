//! Quasi-cyclic codes, the interleaving map `Phi` and the CRT decomposition
//! into constituent codes.
//!
//! A codeword of length `l m` is read as an `m x l` array with
//! `c_{i,j} = c[j + i l]`; column `j` becomes `c_j(Y) = sum_i c_{i,j} Y^i`.
//! For an irreducible factor `f` of `Y^m - 1` the constituent is the span of
//! `(c_0(rho), ..., c_{l-1}(rho))` for a fixed root `rho` of `f` in
//! GF(q^deg f). The root is the smallest one, except for the second member
//! `h*` of a reciprocal pair, which uses the inverse of the root chosen for
//! `h`. With that choice the dual's pair constituents are exactly the
//! swapped Euclidean duals.

mod counting;
mod isodual;

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::gf::{Embedding, Fe, Field, GfError};
use crate::lincode::{CodeError, Conjugation, LinearCode};
use crate::polyring::{factor_xm_minus_1, Factor, Factorization, Poly, PolyError};

pub use counting::{
    count_equivalent_qc, count_qc_cyclic_constituents, distinct_multiplier_variants,
    isodual_qc_existence, multiplier_equivalent_qc, self_dual_exists, EquivalentCount,
    ExistenceVerdict, MultiplierReport,
};
pub use isodual::{
    is_isodual_qc, is_self_dual_qc, lifted_equivalence, Basis, ComponentCheck, IsodualReport,
    SelfDualReport, Verdict,
};

/// Largest `q^K` for which an element-to-polynomial table is built.
const TABLE_CAP: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QcError {
    #[error("index {l} does not divide length {n}")]
    IndexMismatch { l: usize, n: usize },
    #[error("the code is not invariant under a shift by {0} positions")]
    NotQuasiCyclic(usize),
    #[error("co-index {m} is not coprime to q = {q}")]
    NotCoprime { m: usize, q: u64 },
    #[error("vector length {found} is not l*m = {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("decomposition shape mismatch: {0}")]
    Shape(String),
    #[error("duality proposition violated: {0}")]
    PropositionViolated(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// An `l`-quasi-cyclic code of length `l m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCCode {
    code: LinearCode,
    l: usize,
    m: usize,
}

/// True iff the row space is invariant under the shift by `l` positions.
pub fn is_quasi_cyclic(code: &LinearCode, l: usize) -> Result<bool, QcError> {
    let n = code.len();
    if l == 0 || n % l != 0 {
        return Err(QcError::IndexMismatch { l, n });
    }
    Ok(code.generator().iter().all(|r| {
        let shifted: Vec<Fe> = (0..n).map(|t| r[(t + n - l) % n]).collect();
        code.contains(&shifted)
    }))
}

impl QCCode {
    pub fn new(code: LinearCode, l: usize) -> Result<QCCode, QcError> {
        if !is_quasi_cyclic(&code, l)? {
            return Err(QcError::NotQuasiCyclic(l));
        }
        let m = code.len() / l;
        let q = code.field().order();
        if arith::gcd(m as u64, q) != 1 {
            return Err(QcError::NotCoprime { m, q });
        }
        Ok(QCCode { code, l, m })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn field(&self) -> &Field {
        self.code.field()
    }

    pub fn index(&self) -> usize {
        self.l
    }

    pub fn co_index(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.l * self.m
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.code.k()
    }

    pub fn decompose(&self) -> Result<Decomposition, QcError> {
        let (factorization, frames) = frames(self.field(), self.m)?;
        let components = frames
            .into_iter()
            .map(|fr| {
                let big = fr.embedding.target();
                let rows: Vec<Vec<Fe>> = self
                    .code
                    .generator()
                    .iter()
                    .map(|row| {
                        (0..self.l)
                            .map(|j| {
                                (0..self.m).rev().fold(0, |acc, i| {
                                    big.add(
                                        big.mul(acc, fr.root),
                                        fr.embedding.apply(row[j + i * self.l]),
                                    )
                                })
                            })
                            .collect()
                    })
                    .collect();
                let code = LinearCode::from_rows(big, self.l, rows)?;
                Ok(Component { frame: fr, code })
            })
            .collect::<Result<Vec<_>, QcError>>()?;
        Ok(Decomposition {
            base: self.field().clone(),
            l: self.l,
            m: self.m,
            factorization,
            components,
        })
    }

    /// The Euclidean dual, with the constituent-side prediction checked
    /// against the nullspace computation.
    pub fn dual(&self) -> Result<QCCode, QcError> {
        let d = QCCode {
            code: self.code.dual(),
            l: self.l,
            m: self.m,
        };
        let mine = self.decompose()?;
        let theirs = d.decompose()?;
        let predicted = mine.dual()?;
        for (i, (p, t)) in predicted
            .components
            .iter()
            .zip(&theirs.components)
            .enumerate()
        {
            if p.code != t.code {
                return Err(QcError::PropositionViolated(format!(
                    "component {i} ({}) of the dual is not the predicted code",
                    t.frame.factor.poly.display_var("Y")
                )));
            }
        }
        Ok(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    SelfReciprocal,
    PairFirst,
    PairSecond,
}

/// The field and root fixing `F_q[Y]/<f> = GF(q^K)` for one factor.
#[derive(Clone, Debug)]
pub struct Frame {
    pub factor: Factor,
    pub kind: ComponentKind,
    pub embedding: Embedding,
    pub root: Fe,
}

impl Frame {
    pub fn field(&self) -> &Field {
        self.embedding.target()
    }

    pub fn degree(&self) -> usize {
        self.factor.degree()
    }

    /// `c(Y) -> c(1/Y)` on this component: identity for degree 1, otherwise
    /// the involution `r -> r^(q^(K/2))`.
    pub fn conjugation(&self) -> Conjugation {
        match self.kind {
            ComponentKind::SelfReciprocal if self.degree() > 1 => Conjugation::Involution,
            _ => Conjugation::Identity,
        }
    }
}

/// Fields and roots for every factor of `Y^m - 1`, in component order.
pub fn frames(base: &Field, m: usize) -> Result<(Factorization, Vec<Frame>), QcError> {
    if m == 0 || arith::gcd(m as u64, base.order()) != 1 {
        return Err(QcError::NotCoprime { m, q: base.order() });
    }
    let fac = factor_xm_minus_1(base, m as u64)?;
    let mut frames = Vec::with_capacity(fac.len());
    let mk = |f: &Factor| -> Result<Embedding, QcError> {
        let big = Field::new(base.characteristic(), base.degree() * f.degree() as u32)?;
        Ok(Embedding::new(base, &big)?)
    };
    let smallest_root = |f: &Factor, emb: &Embedding| -> Fe {
        *f.poly
            .roots_in(emb)
            .first()
            .expect("irreducible factor splits in its own extension")
    };
    for g in &fac.self_reciprocal {
        let emb = mk(g)?;
        let root = smallest_root(g, &emb);
        frames.push(Frame {
            factor: g.clone(),
            kind: ComponentKind::SelfReciprocal,
            embedding: emb,
            root,
        });
    }
    for (h, hs) in &fac.pairs {
        let emb = mk(h)?;
        let root = smallest_root(h, &emb);
        let inv = emb.target().inv(root)?;
        debug_assert_eq!(hs.poly.eval_embedded(&emb, inv), 0);
        frames.push(Frame {
            factor: h.clone(),
            kind: ComponentKind::PairFirst,
            embedding: emb.clone(),
            root,
        });
        frames.push(Frame {
            factor: hs.clone(),
            kind: ComponentKind::PairSecond,
            embedding: emb,
            root: inv,
        });
    }
    Ok((fac, frames))
}

/// One constituent code with its frame.
#[derive(Clone, Debug)]
pub struct Component {
    pub frame: Frame,
    pub code: LinearCode,
}

/// Constituents of an `l`-QC code of co-index `m`, in component order:
/// self-reciprocal factors, then each pair `(h, h*)`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub base: Field,
    pub l: usize,
    pub m: usize,
    pub factorization: Factorization,
    pub components: Vec<Component>,
}

impl PartialEq for Decomposition {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.l == other.l
            && self.m == other.m
            && self.components.len() == other.components.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.code == b.code)
    }
}

impl Decomposition {
    /// Builds a decomposition from constituent codes given in component order.
    pub fn from_codes(
        base: &Field,
        l: usize,
        m: usize,
        codes: Vec<LinearCode>,
    ) -> Result<Decomposition, QcError> {
        let (factorization, frames) = frames(base, m)?;
        if codes.len() != frames.len() {
            return Err(QcError::Shape(format!(
                "{} components given, Y^{m} - 1 has {} factors",
                codes.len(),
                frames.len()
            )));
        }
        let mut components = Vec::with_capacity(codes.len());
        for (i, (frame, code)) in frames.into_iter().zip(codes).enumerate() {
            if code.field() != frame.field() || code.len() != l {
                return Err(QcError::Shape(format!(
                    "component {i} must be a length-{l} code over {}, got length {} over {}",
                    frame.field(),
                    code.len(),
                    code.field()
                )));
            }
            components.push(Component { frame, code });
        }
        Ok(Decomposition {
            base: base.clone(),
            l,
            m,
            factorization,
            components,
        })
    }

    pub fn codes(&self) -> Vec<&LinearCode> {
        self.components.iter().map(|c| &c.code).collect()
    }

    /// `(index of h, index of h*)` for every reciprocal pair.
    pub fn pair_indices(&self) -> Vec<(usize, usize)> {
        let s = self.factorization.self_reciprocal.len();
        (0..self.factorization.pairs.len())
            .map(|j| (s + 2 * j, s + 2 * j + 1))
            .collect()
    }

    /// Sum of `deg f * dim C_f`, the GF(q)-dimension of the QC code.
    pub fn total_dim(&self) -> usize {
        self.components
            .iter()
            .map(|c| c.frame.degree() * c.code.k())
            .sum()
    }

    /// Constituents of the dual code: Hermitian duals on self-reciprocal
    /// factors, swapped Euclidean duals on pairs.
    pub fn dual(&self) -> Result<Decomposition, QcError> {
        let mut codes: Vec<LinearCode> = Vec::with_capacity(self.components.len());
        for c in &self.components {
            codes.push(match c.frame.kind {
                ComponentKind::SelfReciprocal => c.code.hermitian_dual(c.frame.conjugation())?,
                _ => c.code.clone(),
            });
        }
        for (a, b) in self.pair_indices() {
            let da = self.components[a].code.dual();
            let db = self.components[b].code.dual();
            codes[a] = db;
            codes[b] = da;
        }
        let mut out = self.clone();
        for (c, code) in out.components.iter_mut().zip(codes) {
            c.code = code;
        }
        Ok(out)
    }

    /// The QC code with these constituents (CRT recombination).
    pub fn recombine(&self) -> Result<QCCode, QcError> {
        let (l, m) = (self.l, self.m);
        let base = &self.base;
        let ym1 = Poly::x_n_minus_1(base, m);
        let mut rows = Vec::new();
        for comp in &self.components {
            let fr = &comp.frame;
            let f = &fr.factor.poly;
            let k = fr.degree();
            let big = fr.field();
            let cofactor = ym1.divmod(f)?.0;
            let idem = cofactor.mul(&cofactor.inverse_mod(f)?).rem(&ym1)?;
            let table = poly_table(base, fr)?;
            for v in comp.code.generator() {
                let mut w = v.clone();
                for _ in 0..k {
                    let mut cols = Vec::with_capacity(l);
                    for &x in &w {
                        let p = table.get(&x).ok_or_else(|| {
                            QcError::Invalid("entry outside the component field".into())
                        })?;
                        cols.push(idem.mul(p).rem(&ym1)?);
                    }
                    rows.push(phi_inverse(&cols, l, m)?);
                    for x in w.iter_mut() {
                        *x = big.mul(*x, fr.root);
                    }
                }
            }
        }
        let code = LinearCode::from_rows(base, l * m, rows)?;
        debug_assert!(is_quasi_cyclic(&code, l).unwrap_or(false));
        Ok(QCCode { code, l, m })
    }
}

/// Map from `P(rho)` to `P`, `deg P < K`, over the base field.
fn poly_table(base: &Field, fr: &Frame) -> Result<HashMap<Fe, Poly>, QcError> {
    let k = fr.degree();
    let q = base.order();
    let size = (q as u128).pow(k as u32);
    if size > TABLE_CAP as u128 {
        return Err(QcError::Invalid(format!(
            "component field of size {size} is too large to recombine"
        )));
    }
    let big = fr.field();
    let mut table = HashMap::with_capacity(size as usize);
    for idx in 0..size as u64 {
        let mut rest = idx;
        let coeffs: Vec<Fe> = (0..k)
            .map(|_| {
                let d = (rest % q) as Fe;
                rest /= q;
                d
            })
            .collect();
        let value = coeffs.iter().rev().fold(0, |acc, &c| {
            big.add(big.mul(acc, fr.root), fr.embedding.apply(c))
        });
        table.insert(value, Poly::new(base, coeffs));
    }
    Ok(table)
}

/// `Phi(v) = (c_0(Y), ..., c_{l-1}(Y))`.
pub fn phi_forward(field: &Field, v: &[Fe], l: usize, m: usize) -> Result<Vec<Poly>, QcError> {
    if v.len() != l * m {
        return Err(QcError::LengthMismatch {
            expected: l * m,
            found: v.len(),
        });
    }
    Ok((0..l)
        .map(|j| Poly::new(field, (0..m).map(|i| v[j + i * l]).collect()))
        .collect())
}

/// Inverse of [`phi_forward`]; each polynomial must have degree below `m`.
pub fn phi_inverse(polys: &[Poly], l: usize, m: usize) -> Result<Vec<Fe>, QcError> {
    if polys.len() != l || polys.iter().any(|p| p.coeffs().len() > m) {
        return Err(QcError::LengthMismatch {
            expected: l,
            found: polys.len(),
        });
    }
    let mut v = vec![0; l * m];
    for (j, p) in polys.iter().enumerate() {
        for (i, &c) in p.coeffs().iter().enumerate() {
            v[j + i * l] = c;
        }
    }
    Ok(v)
}
