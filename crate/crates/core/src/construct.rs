//! Matrix-product (Vandermonde) and cubic constructions of QC codes.

use serde::Serialize;
use thiserror::Error;

use crate::cyclic::decide_equivalence;
use crate::gf::{Embedding, Fe, Field, GfError};
use crate::lincode::{CodeError, Conjugation, LinearCode};
use crate::qc::{is_isodual_qc, Decomposition, IsodualReport, QCCode, QcError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("2^{a} does not divide q - 1 = {}", .q - 1)]
    NoRootOfUnity { a: u32, q: u64 },
    #[error("{0}")]
    Shape(String),
    #[error("input {index} is not isodual: {reason}")]
    NotIsodual { index: usize, reason: String },
    #[error("the cubic construction needs q = 2 mod 3, got q = {0}")]
    BadCubicField(u64),
    #[error("construction disagrees with recombination: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Qc(#[from] QcError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// `V = (alpha^(ij))` and its inverse `2^-a (alpha^(-ij))` for a primitive
/// `2^a`-th root of unity.
#[derive(Clone, Debug, Serialize)]
pub struct VandermondeContext {
    #[serde(skip)]
    pub field: Field,
    pub a: u32,
    pub alpha: Fe,
    pub v: Vec<Vec<Fe>>,
    pub vinv: Vec<Vec<Fe>>,
}

impl VandermondeContext {
    pub fn size(&self) -> usize {
        1 << self.a
    }

    /// The product matrix `A = (alpha^(-ij))`, i.e. `Vinv` without `2^-a`.
    pub fn product_matrix(&self) -> Vec<Vec<Fe>> {
        let f = &self.field;
        let k = self.size();
        let ainv = f.inv(self.alpha).expect("root of unity");
        (0..k)
            .map(|i| (0..k).map(|j| f.pow(ainv, (i * j) as u64)).collect())
            .collect()
    }
}

pub fn mat_mul(f: &Field, x: &[Vec<Fe>], y: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    x.iter()
        .map(|row| {
            (0..y[0].len())
                .map(|j| {
                    row.iter()
                        .zip(y)
                        .fold(0, |acc, (&a, yr)| f.add(acc, f.mul(a, yr[j])))
                })
                .collect()
        })
        .collect()
}

pub fn vandermonde(field: &Field, a: u32) -> Result<VandermondeContext, ConstructError> {
    let k = 1u64 << a;
    let q = field.order();
    if (q - 1) % k != 0 {
        return Err(ConstructError::NoRootOfUnity { a, q });
    }
    let alpha = field.root_of_unity(k)?;
    let ainv = field.inv(alpha)?;
    let scale = field.inv(field.from_int(k as i64))?;
    let n = k as usize;
    let v: Vec<Vec<Fe>> = (0..n)
        .map(|i| (0..n).map(|j| field.pow(alpha, (i * j) as u64)).collect())
        .collect();
    let vinv: Vec<Vec<Fe>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| field.mul(scale, field.pow(ainv, (i * j) as u64)))
                .collect()
        })
        .collect();
    let prod = mat_mul(field, &v, &vinv);
    for (i, row) in prod.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            assert_eq!(x, (i == j) as Fe, "Vandermonde inverse formula failed");
        }
    }
    Ok(VandermondeContext {
        field: field.clone(),
        a,
        alpha,
        v,
        vinv,
    })
}

/// `[C_0, ..., C_{k-1}] A`: row `i` of the generator is
/// `(A_{i,0} G_i | ... | A_{i,k-1} G_i)`.
pub fn matrix_product(codes: &[LinearCode], a: &[Vec<Fe>]) -> Result<LinearCode, ConstructError> {
    let k = codes.len();
    if k == 0 || a.len() != k || a.iter().any(|r| r.len() != k) {
        return Err(ConstructError::Shape(format!(
            "{k} codes need a {k}x{k} matrix"
        )));
    }
    let f = codes[0].field();
    let n = codes[0].len();
    if codes.iter().any(|c| c.field() != f || c.len() != n) {
        return Err(ConstructError::Shape(
            "codes must share field and length".into(),
        ));
    }
    let mut rows = Vec::new();
    for (i, c) in codes.iter().enumerate() {
        for g in c.generator() {
            rows.push(
                a[i].iter()
                    .flat_map(|&s| g.iter().map(move |&x| f.mul(s, x)))
                    .collect(),
            );
        }
    }
    Ok(LinearCode::from_rows(f, k * n, rows)?)
}

/// The matrix-product code with `A = (alpha^(-ij))`. Shifting by one block
/// multiplies row `i` of `A` by `alpha^i`, so the result is quasi-cyclic
/// with index equal to the input length and co-index `2^a`.
pub fn vandermonde_product(
    codes: &[LinearCode],
    vc: &VandermondeContext,
) -> Result<QCCode, ConstructError> {
    if codes.len() != vc.size() {
        return Err(ConstructError::Shape(format!(
            "{} inputs for a product of size {}",
            codes.len(),
            vc.size()
        )));
    }
    if codes.iter().any(|c| c.field() != &vc.field) {
        return Err(ConstructError::Shape(
            "inputs must be over the Vandermonde field".into(),
        ));
    }
    let code = matrix_product(codes, &vc.product_matrix())?;
    let l = codes[0].len();
    Ok(QCCode::new(code, l)?)
}

/// The product, after checking every input is isodual, with its report.
pub fn isodual_by_vandermonde(
    codes: &[LinearCode],
    vc: &VandermondeContext,
    budget: u64,
) -> Result<(QCCode, IsodualReport), ConstructError> {
    for (index, c) in codes.iter().enumerate() {
        let w = decide_equivalence(c, &c.dual(), budget)?;
        if w.is_refutation() {
            let reason = match w {
                crate::lincode::EquivalenceWitness::NoneFound { reason } => reason,
                _ => unreachable!(),
            };
            return Err(ConstructError::NotIsodual { index, reason });
        }
    }
    let code = vandermonde_product(codes, vc)?;
    let report = is_isodual_qc(&code, budget)?;
    Ok((code, report))
}

/// The smallest root of `Y^2 + Y + 1` in `GF(q^2)`.
pub fn cubic_beta(big: &Field) -> Fe {
    big.elements()
        .find(|&b| big.add(big.add(big.mul(b, b), b), 1) == 0)
        .expect("Y^2 + Y + 1 splits in GF(q^2)")
}

/// `{(x + 2a - b | x - a + 2b | x - a - b) : x in C1, a + beta b in C2}`,
/// a QC code of index `l` and co-index 3 over GF(q), `q = 2 mod 3`.
pub fn cubic(c1: &LinearCode, c2: &LinearCode) -> Result<QCCode, ConstructError> {
    let base = c1.field();
    let q = base.order();
    if q % 3 != 2 {
        return Err(ConstructError::BadCubicField(q));
    }
    let big = Field::new(base.characteristic(), 2 * base.degree())?;
    let emb = Embedding::new(base, &big)?;
    if c2.field() != &big || c2.len() != c1.len() {
        return Err(ConstructError::Shape(format!(
            "C2 must be a length-{} code over {big}",
            c1.len()
        )));
    }
    let l = c1.len();
    let beta = cubic_beta(&big);
    let denom = big.inv(big.sub(beta, big.mul(beta, beta)))?;
    let down = |x: Fe| emb.preimage(x).expect("component lies in the base field");
    let (two, minus) = (base.from_int(2), |x: Fe| base.neg(x));
    let mut rows: Vec<Vec<Fe>> = Vec::new();
    for x in c1.generator() {
        rows.push(x.iter().chain(x).chain(x).copied().collect());
    }
    for v in c2.generator() {
        for w in [v.clone(), v.iter().map(|&t| big.mul(beta, t)).collect()] {
            let mut r = vec![0; 3 * l];
            for (j, &t) in w.iter().enumerate() {
                let nu = Conjugation::Involution.apply(&big, t)?;
                let b = big.mul(big.sub(t, nu), denom);
                let a = down(big.sub(t, big.mul(beta, b)));
                let b = down(b);
                r[j] = base.sub(base.mul(two, a), b);
                r[l + j] = base.add(minus(a), base.mul(two, b));
                r[2 * l + j] = base.sub(minus(a), b);
            }
            rows.push(r);
        }
    }
    let code = QCCode::new(LinearCode::from_rows(base, 3 * l, rows)?, l)?;
    let expected = Decomposition::from_codes(base, l, 3, vec![c1.clone(), c2.clone()])?;
    if expected.recombine()? != code {
        return Err(ConstructError::Mismatch("recombined code differs".into()));
    }
    if code.decompose()? != expected {
        return Err(ConstructError::Mismatch(
            "constituents differ from the inputs".into(),
        ));
    }
    Ok(code)
}

pub fn isodual_by_cubic(
    c1: &LinearCode,
    c2: &LinearCode,
    budget: u64,
) -> Result<(QCCode, IsodualReport), ConstructError> {
    let code = cubic(c1, c2)?;
    let report = is_isodual_qc(&code, budget)?;
    Ok((code, report))
}
