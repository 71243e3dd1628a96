#![allow(dead_code)]

use isodual_core::gf::{Fe, Field};
use isodual_core::lincode::LinearCode;
use isodual_core::polyring::Poly;
use isodual_core::qc::QCCode;
use rand::Rng;

/// Every `k`-dimensional subspace of `F^n`, one per reduced echelon form.
pub fn subspaces(field: &Field, n: usize, k: usize) -> Vec<LinearCode> {
    let q = field.order() as Fe;
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    choose(n, k, 0, &mut pivots, &mut |piv: &[usize]| {
        // free positions: (row r, column c) with c > piv[r] and c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                (piv[r] + 1..n)
                    .filter(|c| !piv.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let total = (q as u64).pow(free.len() as u32);
        for idx in 0..total {
            let mut rows = vec![vec![0; n]; k];
            for (r, &p) in piv.iter().enumerate() {
                rows[r][p] = 1;
            }
            let mut rest = idx;
            for &(r, c) in &free {
                rows[r][c] = (rest % q as u64) as Fe;
                rest /= q as u64;
            }
            out.push(LinearCode::from_rows(field, n, rows).unwrap());
        }
    });
    out
}

fn choose(n: usize, k: usize, start: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if acc.len() == k {
        f(acc);
        return;
    }
    for i in start..n {
        acc.push(i);
        choose(n, k, i + 1, acc, f);
        acc.pop();
    }
}

pub fn all_subspaces(field: &Field, n: usize) -> Vec<LinearCode> {
    (0..=n).flat_map(|k| subspaces(field, n, k)).collect()
}

/// `f(lambda x)` made monic, computed coefficientwise.
pub fn substitute(f: &Poly, lambda: Fe) -> Poly {
    let k = f.field();
    let c: Vec<Fe> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &a)| k.mul(a, k.pow(lambda, i as u64)))
        .collect();
    Poly::new(k, c).make_monic()
}

pub fn random_code(field: &Field, n: usize, max_rows: usize, rng: &mut impl Rng) -> LinearCode {
    let q = field.order() as Fe;
    let rows = (0..rng.gen_range(0..=max_rows))
        .map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect())
        .collect();
    LinearCode::from_rows(field, n, rows).unwrap()
}

/// A random `l`-QC code: random rows closed under the shift by `l`.
pub fn random_qc(field: &Field, l: usize, m: usize, rng: &mut impl Rng) -> QCCode {
    let q = field.order() as Fe;
    let n = l * m;
    let mut rows = Vec::new();
    for _ in 0..rng.gen_range(0..=l) {
        let r: Vec<Fe> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        for s in 0..m {
            rows.push((0..n).map(|t| r[(t + n - s * l) % n]).collect());
        }
    }
    QCCode::new(LinearCode::from_rows(field, n, rows).unwrap(), l).unwrap()
}
