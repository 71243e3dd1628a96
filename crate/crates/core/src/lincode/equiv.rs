//! Permutation and monomial equivalence by backtracking over column
//! assignments, with invariant prefilters.

use serde::{Deserialize, Serialize};

use super::{CodeError, LinearCode, EQUIVALENCE_LENGTH_CAP};
use crate::gf::{Fe, Field};

/// Largest code enumerated for per-column profiles.
const PROFILE_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivalenceKind {
    Permutation,
    /// Permutation combined with nonzero column scalings.
    Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquivalenceWitness {
    /// Coordinate `i` of the source goes to `perm[i]`.
    Permutation {
        perm: Vec<usize>,
    },
    /// Coordinate `i` goes to `perm[i]`, multiplied by `scales[i]`.
    Monomial {
        perm: Vec<usize>,
        scales: Vec<Fe>,
    },
    /// Coordinate `i` goes to `a * i mod n`, multiplied by `lambda^i`.
    Multiplier {
        a: u64,
        lambda: Fe,
    },
    NoneFound {
        reason: String,
    },
    BudgetExhausted {
        reason: String,
    },
}

impl EquivalenceWitness {
    pub fn is_found(&self) -> bool {
        matches!(
            self,
            EquivalenceWitness::Permutation { .. }
                | EquivalenceWitness::Monomial { .. }
                | EquivalenceWitness::Multiplier { .. }
        )
    }

    pub fn is_refutation(&self) -> bool {
        matches!(self, EquivalenceWitness::NoneFound { .. })
    }

    /// The witness as an explicit monomial map on `n` coordinates.
    pub fn as_monomial(&self, field: &Field, n: usize) -> Option<(Vec<usize>, Vec<Fe>)> {
        match self {
            EquivalenceWitness::Permutation { perm } => Some((perm.clone(), vec![1; perm.len()])),
            EquivalenceWitness::Monomial { perm, scales } => Some((perm.clone(), scales.clone())),
            EquivalenceWitness::Multiplier { a, lambda } => {
                let perm = (0..n).map(|i| (i as u64 * a % n as u64) as usize).collect();
                let scales = (0..n).map(|i| field.pow(*lambda, i as u64)).collect();
                Some((perm, scales))
            }
            _ => None,
        }
    }

    /// Applies the witness to `code`.
    pub fn replay(&self, code: &LinearCode) -> Option<LinearCode> {
        let (perm, scales) = self.as_monomial(code.field(), code.len())?;
        code.apply_monomial(&perm, &scales).ok()
    }

    /// True when replaying on `from` yields exactly `to`.
    pub fn verify(&self, from: &LinearCode, to: &LinearCode) -> bool {
        self.replay(from).as_ref() == Some(to)
    }
}

/// For each column, the number of codewords of each weight that are nonzero
/// there.
fn column_profiles(code: &LinearCode) -> Option<Vec<Vec<u64>>> {
    let words = code.codewords(PROFILE_LIMIT).ok()?;
    let n = code.len();
    let mut prof = vec![vec![0u64; n + 1]; n];
    for w in words {
        let wt = w.iter().filter(|&&x| x != 0).count();
        for (i, &x) in w.iter().enumerate() {
            if x != 0 {
                prof[i][wt] += 1;
            }
        }
    }
    Some(prof)
}

struct Search<'a> {
    c: &'a LinearCode,
    d: &'a LinearCode,
    kind: EquivalenceKind,
    allowed: Vec<Vec<bool>>,
    nodes: u64,
    budget: u64,
    assigned: Vec<(usize, usize, Fe)>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn consistent(&self) -> bool {
        let f = self.c.field();
        let cols_c: Vec<usize> = self.assigned.iter().map(|a| a.0).collect();
        let cols_d: Vec<usize> = self.assigned.iter().map(|a| a.1).collect();
        let rows = self
            .c
            .generator()
            .iter()
            .map(|r| {
                self.assigned
                    .iter()
                    .map(|&(i, _, s)| f.mul(r[i], s))
                    .collect()
            })
            .collect();
        let pc = LinearCode::from_rows(f, cols_c.len(), rows).expect("well-formed");
        pc == self.d.project(&cols_d)
    }

    /// Ok(true) found, Ok(false) exhausted subtree, Err on budget.
    fn run(&mut self) -> Result<bool, ()> {
        let n = self.c.len();
        let t = self.assigned.len();
        if t == n {
            return Ok(true);
        }
        let q = self.c.field().order() as Fe;
        let scales: Vec<Fe> = match self.kind {
            EquivalenceKind::Permutation => vec![1],
            EquivalenceKind::Monomial if t == 0 => vec![1],
            EquivalenceKind::Monomial => (1..q).collect(),
        };
        for j in 0..n {
            if self.used[j] || !self.allowed[t][j] {
                continue;
            }
            for &s in &scales {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(());
                }
                self.assigned.push((t, j, s));
                self.used[j] = true;
                if self.consistent() && self.run()? {
                    return Ok(true);
                }
                self.assigned.pop();
                self.used[j] = false;
            }
        }
        Ok(false)
    }
}

/// Looks for a map of the requested kind carrying `c` onto `d`.
pub fn equivalence_search(
    c: &LinearCode,
    d: &LinearCode,
    kind: EquivalenceKind,
    budget: u64,
) -> Result<EquivalenceWitness, CodeError> {
    if c.field() != d.field() {
        return Err(CodeError::ContextMismatch(
            c.field().to_string(),
            d.field().to_string(),
        ));
    }
    let n = c.len();
    if n != d.len() {
        return Err(CodeError::LengthMismatch(n, d.len()));
    }
    if c.k() != d.k() {
        return Ok(EquivalenceWitness::NoneFound {
            reason: format!("dimensions differ ({} vs {})", c.k(), d.k()),
        });
    }
    if c == d {
        return Ok(EquivalenceWitness::Permutation {
            perm: (0..n).collect(),
        });
    }
    if let (Ok(a), Ok(b)) = (c.weight_enumerator(budget), d.weight_enumerator(budget)) {
        if a != b {
            return Ok(EquivalenceWitness::NoneFound {
                reason: "weight enumerators differ".into(),
            });
        }
    }
    let (cd, dd) = (c.dual(), d.dual());
    if let (Ok(a), Ok(b)) = (cd.weight_enumerator(budget), dd.weight_enumerator(budget)) {
        if a != b {
            return Ok(EquivalenceWitness::NoneFound {
                reason: "dual weight enumerators differ".into(),
            });
        }
    }
    if n > EQUIVALENCE_LENGTH_CAP {
        return Ok(EquivalenceWitness::BudgetExhausted {
            reason: format!("length {n} exceeds the search cap {EQUIVALENCE_LENGTH_CAP}"),
        });
    }
    let mut allowed = vec![vec![true; n]; n];
    if let (Some(pc), Some(pd)) = (column_profiles(c), column_profiles(d)) {
        let mut sc = pc.clone();
        let mut sd = pd.clone();
        sc.sort();
        sd.sort();
        if sc != sd {
            return Ok(EquivalenceWitness::NoneFound {
                reason: "column weight profiles differ".into(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                allowed[i][j] = pc[i] == pd[j];
            }
        }
    }
    let mut s = Search {
        c,
        d,
        kind,
        allowed,
        nodes: 0,
        budget,
        assigned: Vec::with_capacity(n),
        used: vec![false; n],
    };
    match s.run() {
        Ok(true) => {
            let mut perm = vec![0; n];
            let mut scales = vec![1; n];
            for &(i, j, sc) in &s.assigned {
                perm[i] = j;
                scales[i] = sc;
            }
            Ok(match kind {
                EquivalenceKind::Permutation => EquivalenceWitness::Permutation { perm },
                EquivalenceKind::Monomial => EquivalenceWitness::Monomial { perm, scales },
            })
        }
        Ok(false) => Ok(EquivalenceWitness::NoneFound {
            reason: "exhaustive search".into(),
        }),
        Err(()) => Ok(EquivalenceWitness::BudgetExhausted {
            reason: format!("node budget {budget} exhausted"),
        }),
    }
}
