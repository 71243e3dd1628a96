//! Linear codes over a [`Field`] in canonical reduced row-echelon form.

mod distance;
mod enumerate;
mod equiv;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Embedding, Fe, Field, GfError};

pub use distance::Distance;
pub use equiv::{equivalence_search, EquivalenceKind, EquivalenceWitness};

/// Default resource limit: 2^26 enumerated codewords or search nodes.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Cap on the length accepted by the general equivalence search.
pub const EQUIVALENCE_LENGTH_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("row {row} has length {found}, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("codes over different fields ({0} vs {1})")]
    ContextMismatch(String, String),
    #[error("not a permutation of {0} positions")]
    InvalidPermutation(usize),
    #[error("the zero code has no minimum distance")]
    ZeroCode,
    #[error("enumeration needs {required} items, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("{0} does not admit an involutive conjugation")]
    InvalidConjugation(String),
    #[error("entry {0} is not an element of {1}")]
    InvalidEntry(Fe, String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// The automorphism used by a Hermitian form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conjugation {
    Identity,
    /// `x -> x^(sqrt |F|)`, defined for even extension degree.
    Involution,
}

impl Conjugation {
    pub fn apply(self, field: &Field, x: Fe) -> Result<Fe, GfError> {
        match self {
            Conjugation::Identity => Ok(x),
            Conjugation::Involution => field.conjugate(x),
        }
    }
}

/// Weight distribution `A_0..A_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    pub counts: Vec<BigUint>,
}

impl WeightEnumerator {
    pub fn from_u64(counts: &[u64]) -> WeightEnumerator {
        WeightEnumerator {
            counts: counts.iter().map(|&c| BigUint::from(c)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Smallest nonzero weight with a codeword.
    pub fn min_weight(&self) -> Option<usize> {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, c)| **c != BigUint::from(0u32))
            .map(|(i, _)| i)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.counts.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != BigUint::from(0u32))
            .map(|(i, c)| format!("A{i}={c}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// A linear code given by its unique RREF generator matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Field,
    n: usize,
    gen: Vec<Vec<Fe>>,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}, {}] code over {}", self.n, self.k(), self.field)?;
        for r in &self.gen {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Row-reduces in place; returns pivot columns. Pivots are taken
/// leftmost-first and the matrix is truncated to its rank.
pub(crate) fn rref(field: &Field, rows: &mut Vec<Vec<Fe>>, n: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        if inv != 1 {
            for x in rows[r].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if y != 0 {
                    *x = field.sub(*x, field.mul(f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

impl LinearCode {
    pub fn from_rows(field: &Field, n: usize, rows: Vec<Vec<Fe>>) -> Result<LinearCode, CodeError> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(CodeError::RaggedRows {
                    row: i,
                    expected: n,
                    found: r.len(),
                });
            }
            if let Some(&bad) = r.iter().find(|&&x| !field.contains(x)) {
                return Err(CodeError::InvalidEntry(bad, field.to_string()));
            }
        }
        let mut gen = rows;
        rref(field, &mut gen, n);
        Ok(LinearCode {
            field: field.clone(),
            n,
            gen,
        })
    }

    pub fn zero(field: &Field, n: usize) -> LinearCode {
        LinearCode {
            field: field.clone(),
            n,
            gen: Vec::new(),
        }
    }

    pub fn full(field: &Field, n: usize) -> LinearCode {
        let gen = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect();
        LinearCode {
            field: field.clone(),
            n,
            gen,
        }
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
        self.gen.len()
    }

    pub fn k(&self) -> usize {
        self.gen.len()
    }

    pub fn generator(&self) -> &[Vec<Fe>] {
        &self.gen
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.gen
            .iter()
            .map(|r| {
                r.iter()
                    .position(|&x| x != 0)
                    .expect("RREF rows are nonzero")
            })
            .collect()
    }

    fn check(&self, other: &LinearCode) -> Result<(), CodeError> {
        if self.field != other.field {
            return Err(CodeError::ContextMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn encode(&self, msg: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let mut out = vec![0; self.n];
        for (&m, row) in msg.iter().zip(&self.gen) {
            if m == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(m, g));
            }
        }
        out
    }

    /// Membership test by reduction against the RREF rows.
    pub fn contains(&self, v: &[Fe]) -> bool {
        if v.len() != self.n {
            return false;
        }
        let f = &self.field;
        let mut r = v.to_vec();
        for (row, piv) in self.gen.iter().zip(self.pivots()) {
            let c = r[piv];
            if c == 0 {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        r.iter().all(|&x| x == 0)
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.field == other.field && self.gen.iter().all(|r| other.contains(r))
    }

    /// Euclidean dual.
    pub fn dual(&self) -> LinearCode {
        let f = &self.field;
        let pivots = self.pivots();
        let mut is_pivot = vec![false; self.n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let rows: Vec<Vec<Fe>> = (0..self.n)
            .filter(|&j| !is_pivot[j])
            .map(|j| {
                let mut v = vec![0; self.n];
                v[j] = 1;
                for (row, &p) in self.gen.iter().zip(&pivots) {
                    v[p] = f.neg(row[j]);
                }
                v
            })
            .collect();
        LinearCode::from_rows(f, self.n, rows).expect("well-formed rows")
    }

    /// Entrywise image under a field automorphism.
    pub fn conjugate(&self, conj: Conjugation) -> Result<LinearCode, CodeError> {
        if conj == Conjugation::Identity {
            return Ok(self.clone());
        }
        if self.field.degree() % 2 != 0 {
            return Err(CodeError::InvalidConjugation(self.field.to_string()));
        }
        let f = &self.field;
        let rows = self
            .gen
            .iter()
            .map(|r| r.iter().map(|&x| conj.apply(f, x)).collect())
            .collect::<Result<Vec<Vec<Fe>>, GfError>>()?;
        LinearCode::from_rows(f, self.n, rows)
    }

    /// Dual under `<a, b> = sum a_i conj(b_i)`.
    pub fn hermitian_dual(&self, conj: Conjugation) -> Result<LinearCode, CodeError> {
        self.dual().conjugate(conj)
    }

    pub fn direct_sum(&self, other: &LinearCode) -> Result<LinearCode, CodeError> {
        self.check(other)?;
        let n = self.n + other.n;
        let mut rows = Vec::with_capacity(self.k() + other.k());
        for r in &self.gen {
            let mut v = r.clone();
            v.resize(n, 0);
            rows.push(v);
        }
        for r in &other.gen {
            let mut v = vec![0; self.n];
            v.extend_from_slice(r);
            rows.push(v);
        }
        LinearCode::from_rows(&self.field, n, rows)
    }

    /// Span of both codes.
    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode, CodeError> {
        self.check(other)?;
        if self.n != other.n {
            return Err(CodeError::LengthMismatch(self.n, other.n));
        }
        let rows = self.gen.iter().chain(&other.gen).cloned().collect();
        LinearCode::from_rows(&self.field, self.n, rows)
    }

    /// `sigma(C)`: coordinate `i` moves to position `perm[i]`.
    pub fn apply_permutation(&self, perm: &[usize]) -> Result<LinearCode, CodeError> {
        self.apply_monomial(perm, &vec![1; self.n])
    }

    /// Moves coordinate `i` to `perm[i]` and multiplies it by `scales[i]`.
    pub fn apply_monomial(&self, perm: &[usize], scales: &[Fe]) -> Result<LinearCode, CodeError> {
        check_permutation(perm, self.n)?;
        if scales.len() != self.n || scales.iter().any(|&s| s == 0 || !self.field.contains(s)) {
            return Err(CodeError::InvalidPermutation(self.n));
        }
        let f = &self.field;
        let rows = self
            .gen
            .iter()
            .map(|r| {
                let mut v = vec![0; self.n];
                for i in 0..self.n {
                    v[perm[i]] = f.mul(r[i], scales[i]);
                }
                v
            })
            .collect();
        LinearCode::from_rows(f, self.n, rows)
    }

    /// The code restricted to the listed coordinates, in that order.
    pub fn project(&self, cols: &[usize]) -> LinearCode {
        let rows = self
            .gen
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        LinearCode::from_rows(&self.field, cols.len(), rows).expect("well-formed rows")
    }

    /// Same generator viewed over an extension field.
    pub fn extend_scalars(&self, emb: &Embedding) -> Result<LinearCode, CodeError> {
        if emb.source() != &self.field {
            return Err(CodeError::ContextMismatch(
                self.field.to_string(),
                emb.source().to_string(),
            ));
        }
        let rows = self
            .gen
            .iter()
            .map(|r| r.iter().map(|&x| emb.apply(x)).collect())
            .collect();
        LinearCode::from_rows(emb.target(), self.n, rows)
    }

    /// `q^k` as a wide integer.
    pub fn size(&self) -> u128 {
        (self.field.order() as u128)
            .checked_pow(self.k() as u32)
            .unwrap_or(u128::MAX)
    }

    /// Every codeword, in message order. Intended for small codes only.
    pub fn codewords(&self, budget: u64) -> Result<Vec<Vec<Fe>>, CodeError> {
        let size = self.size();
        if size > budget as u128 {
            return Err(CodeError::BudgetExceeded {
                required: size,
                budget,
            });
        }
        let q = self.field.order() as u32;
        let k = self.k();
        let mut msg = vec![0u32; k];
        let mut out = Vec::with_capacity(size as usize);
        loop {
            out.push(self.encode(&msg));
            let mut t = 0;
            loop {
                if t == k {
                    return Ok(out);
                }
                msg[t] += 1;
                if msg[t] == q {
                    msg[t] = 0;
                    t += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// Weight distribution, by direct enumeration of whichever of the code
    /// and its dual is smaller (the other side via MacWilliams).
    pub fn weight_enumerator(&self, budget: u64) -> Result<WeightEnumerator, CodeError> {
        if self.size() <= budget as u128 {
            return Ok(WeightEnumerator::from_u64(&enumerate::weight_distribution(
                self,
            )));
        }
        let d = self.dual();
        if d.size() <= budget as u128 {
            let wd = WeightEnumerator::from_u64(&enumerate::weight_distribution(&d));
            return Ok(distance::macwilliams(&wd, self.field.order(), d.k()));
        }
        Err(CodeError::BudgetExceeded {
            required: self.size().min(d.size()),
            budget,
        })
    }

    /// Weight distribution by enumerating this code only.
    pub fn weight_enumerator_direct(&self, budget: u64) -> Result<WeightEnumerator, CodeError> {
        if self.size() > budget as u128 {
            return Err(CodeError::BudgetExceeded {
                required: self.size(),
                budget,
            });
        }
        Ok(WeightEnumerator::from_u64(&enumerate::weight_distribution(
            self,
        )))
    }

    pub fn min_distance(&self, budget: u64) -> Result<Distance, CodeError> {
        distance::min_distance(self, budget)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<(), CodeError> {
    if perm.len() != n {
        return Err(CodeError::InvalidPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(CodeError::InvalidPermutation(n));
        }
        seen[p] = true;
    }
    Ok(())
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

pub use distance::macwilliams;

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn from_rows_canonical() {
        let c = LinearCode::from_rows(&f3(), 2, vec![vec![1, 1], vec![2, 2]]).unwrap();
        assert_eq!(c.k(), 1);
        assert_eq!(c.generator(), &[vec![1, 1]]);
        let z = LinearCode::from_rows(&f3(), 4, vec![]).unwrap();
        assert_eq!(z.k(), 0);
        assert!(matches!(
            LinearCode::from_rows(&f3(), 2, vec![vec![1]]),
            Err(CodeError::RaggedRows { .. })
        ));
    }

    #[test]
    fn duals() {
        let f = f3();
        assert_eq!(LinearCode::full(&f, 2).dual(), LinearCode::zero(&f, 2));
        let c = LinearCode::from_rows(&f, 2, vec![vec![1, 1]]).unwrap();
        assert_eq!(
            c.dual(),
            LinearCode::from_rows(&f, 2, vec![vec![1, 2]]).unwrap()
        );
        assert_eq!(c.hermitian_dual(Conjugation::Identity).unwrap(), c.dual());
        assert!(c.hermitian_dual(Conjugation::Involution).is_err());
    }

    #[test]
    fn hermitian_self_dual_gf9() {
        let f9 = Field::new(3, 2).unwrap();
        // gamma with gamma^4 = -1: the canonical generator
        let g = f9.generator();
        assert_eq!(f9.pow(g, 4), f9.from_int(-1));
        let c = LinearCode::from_rows(&f9, 2, vec![vec![1, g]]).unwrap();
        let h = c.hermitian_dual(Conjugation::Involution).unwrap();
        assert_eq!(h, c);
        assert_eq!(h.hermitian_dual(Conjugation::Involution).unwrap(), c);
        // brute force: every pair of codewords is Hermitian-orthogonal
        for a in f9.elements() {
            for b in f9.elements() {
                let u = [a, f9.mul(a, g)];
                let v = [b, f9.mul(b, g)];
                let s = (0..2).fold(0, |acc, i| {
                    f9.add(acc, f9.mul(u[i], f9.conjugate(v[i]).unwrap()))
                });
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn permutations() {
        let f = f3();
        let c = LinearCode::from_rows(&f, 3, vec![vec![1, 2, 0]]).unwrap();
        assert_eq!(c.apply_permutation(&[0, 1, 2]).unwrap(), c);
        assert_eq!(
            c.apply_permutation(&[1, 0, 2]).unwrap(),
            LinearCode::from_rows(&f, 3, vec![vec![2, 1, 0]]).unwrap()
        );
        assert!(c.apply_permutation(&[0, 0, 1]).is_err());
    }

    #[test]
    fn direct_sums() {
        let f = f3();
        let a = LinearCode::from_rows(&f, 3, vec![vec![1, 1, 1], vec![0, 1, 2]]).unwrap();
        let b = LinearCode::full(&f, 3);
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.k(), 5);
        assert_eq!(s.len(), 6);
        let z = a.direct_sum(&LinearCode::zero(&f, 2)).unwrap();
        assert_eq!(z.k(), 2);
        let f5 = Field::prime(5).unwrap();
        assert!(a.direct_sum(&LinearCode::zero(&f5, 1)).is_err());
    }

    #[test]
    fn membership() {
        let f = f3();
        let c = LinearCode::from_rows(&f, 3, vec![vec![1, 1, 1]]).unwrap();
        assert!(c.contains(&[2, 2, 2]));
        assert!(!c.contains(&[1, 2, 0]));
    }
}
