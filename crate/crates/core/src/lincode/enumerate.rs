//! Codeword enumeration over the prime subfield.
//!
//! A code over GF(p^K) is treated as a GF(p)-space: each coordinate expands
//! into K digits, and every message is a GF(p)-combination of the expanded
//! rows `x^t * g_i`. Only messages whose first nonzero GF(q) symbol is 1 are
//! visited; each nonzero weight count is then multiplied by `q - 1`.
//!
//! The inner loop is an odometer over GF(p) digits. Incrementing digit `t`
//! always adds expanded row `t` once (wrapping `p - 1 -> 0` adds it a p-th
//! time, which cancels), so the running codeword and its weight are updated
//! only over that row's support.

use rayon::prelude::*;

use super::LinearCode;

type SparseRow = Vec<(u32, u8)>;

struct Expanded {
    p: u8,
    ext: usize,
    n: usize,
    /// `rows[i * ext + t]` is the expansion of `x^t * g_i`.
    rows: Vec<SparseRow>,
}

fn expand(code: &LinearCode) -> Expanded {
    let f = code.field();
    let p = f.characteristic();
    assert!(p < 256, "enumeration kernel needs p < 256");
    let ext = f.degree() as usize;
    let mut rows = Vec::with_capacity(code.k() * ext);
    for g in code.generator() {
        for t in 0..ext {
            let basis = (p as u64).pow(t as u32) as u32;
            let mut sparse = Vec::new();
            for (c, &x) in g.iter().enumerate() {
                let y = f.mul(basis, x);
                if y == 0 {
                    continue;
                }
                for (s, d) in f.coeffs(y).into_iter().enumerate() {
                    if d != 0 {
                        sparse.push(((c * ext + s) as u32, d as u8));
                    }
                }
            }
            rows.push(sparse);
        }
    }
    Expanded {
        p: p as u8,
        ext,
        n: code.len(),
        rows,
    }
}

struct State<'a> {
    e: &'a Expanded,
    digits: Vec<u8>,
    nonzero: Vec<u8>,
    weight: usize,
}

impl<'a> State<'a> {
    fn new(e: &'a Expanded) -> Self {
        State {
            e,
            digits: vec![0; e.n * e.ext],
            nonzero: vec![0; e.n],
            weight: 0,
        }
    }

    #[inline]
    fn add_row(&mut self, row: &[(u32, u8)], times: u8) {
        let p = self.e.p as u16;
        for &(pos, val) in row {
            let pos = pos as usize;
            let old = self.digits[pos];
            let new = ((old as u16 + val as u16 * times as u16) % p) as u8;
            self.digits[pos] = new;
            if self.e.ext == 1 {
                if old == 0 && new != 0 {
                    self.weight += 1;
                } else if old != 0 && new == 0 {
                    self.weight -= 1;
                }
            } else {
                let c = pos / self.e.ext;
                if old == 0 && new != 0 {
                    self.nonzero[c] += 1;
                    if self.nonzero[c] == 1 {
                        self.weight += 1;
                    }
                } else if old != 0 && new == 0 {
                    self.nonzero[c] -= 1;
                    if self.nonzero[c] == 0 {
                        self.weight -= 1;
                    }
                }
            }
        }
    }

    #[inline]
    fn add_row_once(&mut self, row: &[(u32, u8)]) {
        let p = self.e.p;
        for &(pos, val) in row {
            let pos = pos as usize;
            let old = self.digits[pos];
            let mut new = old + val;
            if new >= p {
                new -= p;
            }
            self.digits[pos] = new;
            if self.e.ext == 1 {
                self.weight = self.weight + (new != 0) as usize - (old != 0) as usize;
            } else if (old == 0) != (new == 0) {
                let c = pos / self.e.ext;
                if new != 0 {
                    self.nonzero[c] += 1;
                    if self.nonzero[c] == 1 {
                        self.weight += 1;
                    }
                } else {
                    self.nonzero[c] -= 1;
                    if self.nonzero[c] == 0 {
                        self.weight -= 1;
                    }
                }
            }
        }
    }

    /// Visits all GF(p)-combinations of `rows` added to the current state.
    fn odometer(&mut self, rows: &[&SparseRow], hist: &mut [u64]) {
        let p = self.e.p;
        let mut ctr = vec![0u8; rows.len()];
        hist[self.weight] += 1;
        loop {
            let mut t = 0;
            loop {
                if t == rows.len() {
                    return;
                }
                self.add_row_once(rows[t]);
                ctr[t] += 1;
                if ctr[t] == p {
                    ctr[t] = 0;
                    t += 1;
                } else {
                    break;
                }
            }
            hist[self.weight] += 1;
        }
    }
}

/// Number of leading digits fixed per parallel task.
fn split_digits(p: u64, free: usize) -> usize {
    let mut s = 0;
    let mut chunks = 1u64;
    while s < free && chunks < 512 && free - s > 4 {
        chunks *= p;
        s += 1;
    }
    s
}

/// Exact weight distribution `A_0..A_n` by enumerating all `q^k` codewords.
pub(crate) fn weight_distribution(code: &LinearCode) -> Vec<u64> {
    let n = code.len();
    let k = code.k();
    let mut hist = vec![0u64; n + 1];
    hist[0] = 1;
    if k == 0 {
        return hist;
    }
    let e = expand(code);
    let q = code.field().order();
    let ext = e.ext;
    let p = e.p as u64;

    // (lead row, fixed top digits) pairs
    let mut tasks = Vec::new();
    for lead in 0..k {
        let free = (k - lead - 1) * ext;
        let s = split_digits(p, free);
        for chunk in 0..p.pow(s as u32) {
            tasks.push((lead, s, chunk));
        }
    }
    let projective = tasks
        .par_iter()
        .map(|&(lead, s, chunk)| {
            let mut st = State::new(&e);
            let mut local = vec![0u64; n + 1];
            st.add_row(&e.rows[lead * ext], 1);
            let free: Vec<&SparseRow> = e.rows[(lead + 1) * ext..].iter().collect();
            let split = free.len() - s;
            let mut c = chunk;
            for row in &free[split..] {
                let d = (c % p) as u8;
                c /= p;
                if d != 0 {
                    st.add_row(row, d);
                }
            }
            st.odometer(&free[..split], &mut local);
            local
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    for (h, c) in hist.iter_mut().zip(projective).skip(1) {
        *h = c * (q - 1);
    }
    hist
}
