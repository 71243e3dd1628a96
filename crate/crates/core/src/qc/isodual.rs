//! Isoduality and self-duality of QC codes through their constituents.

use rayon::prelude::*;
use serde::Serialize;

use super::{ComponentKind, Decomposition, QCCode, QcError};
use crate::cyclic::decide_equivalence;
use crate::gf::Fe;
use crate::lincode::{EquivalenceWitness, LinearCode, EQUIVALENCE_LENGTH_CAP};

/// Node limit for the whole-code witness search on short codes.
const GLOBAL_SEARCH_NODES: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Refuted,
    Unknown,
}

impl Verdict {
    /// Process exit code: 0 verified, 1 refuted, 3 unknown.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Refuted => 1,
            Verdict::Unknown => 3,
        }
    }

    fn of_witness(w: &EquivalenceWitness) -> Verdict {
        if w.is_found() {
            Verdict::Verified
        } else if w.is_refutation() {
            Verdict::Refuted
        } else {
            Verdict::Unknown
        }
    }

    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Refuted, _) | (_, Verdict::Refuted) => Verdict::Refuted,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Verified,
        }
    }
}

/// What decided an isoduality verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Dimension,
    WeightEnumerator,
    /// A map of the whole code onto its dual, or an exhaustive refutation.
    Direct,
    /// The constituent condition, used when the code is too long for a
    /// direct decision.
    Constituents,
}

/// The outcome for one constituent: `C_i` against its Hermitian dual, or
/// `C_j'` against the dual of its partner.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentCheck {
    pub index: usize,
    pub factor: String,
    pub kind: ComponentKind,
    pub field_order: u64,
    pub dim: usize,
    pub target: String,
    pub verdict: Verdict,
    pub witness: EquivalenceWitness,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsodualReport {
    pub verdict: Verdict,
    pub basis: Basis,
    /// The verdict of the constituent condition alone.
    pub constituent_verdict: Option<Verdict>,
    pub length: usize,
    pub index: usize,
    pub dim: usize,
    /// `None` when neither the code nor its dual could be enumerated.
    pub weight_enumerators_equal: Option<bool>,
    pub components: Vec<ComponentCheck>,
    /// A map carrying the whole code onto its dual: a component witness
    /// applied blockwise, or found directly on short codes.
    pub global_witness: Option<EquivalenceWitness>,
    pub reason: Option<String>,
}

/// Decides isoduality from the constituents: each self-reciprocal component
/// must be equivalent to its Hermitian dual and each `C_j'` to the dual of
/// `C_j''`.
pub fn is_isodual_qc(code: &QCCode, budget: u64) -> Result<IsodualReport, QcError> {
    let n = code.len();
    let mut report = IsodualReport {
        verdict: Verdict::Unknown,
        basis: Basis::Dimension,
        constituent_verdict: None,
        length: n,
        index: code.index(),
        dim: code.dim(),
        weight_enumerators_equal: None,
        components: Vec::new(),
        global_witness: None,
        reason: None,
    };
    if 2 * code.dim() != n {
        report.verdict = Verdict::Refuted;
        report.reason = Some(format!("dimension {} is not half of {n}", code.dim()));
        return Ok(report);
    }
    let dual = code.code().dual();
    if let (Ok(a), Ok(b)) = (
        code.code().weight_enumerator(budget),
        dual.weight_enumerator(budget),
    ) {
        report.weight_enumerators_equal = Some(a == b);
        if a != b {
            report.verdict = Verdict::Refuted;
            report.basis = Basis::WeightEnumerator;
            report.reason = Some("weight enumerators of the code and its dual differ".into());
            return Ok(report);
        }
    }
    let dec = code.decompose()?;
    let targets = dec.dual()?;
    let partner = partners(&dec);
    let checks = dec
        .components
        .par_iter()
        .enumerate()
        .map(|(i, comp)| {
            let target = &targets.components[i].code;
            let witness = decide_equivalence(&comp.code, target, budget)?;
            let desc = match comp.frame.kind {
                ComponentKind::SelfReciprocal if comp.frame.factor.poly.degree() > Some(1) => {
                    "hermitian dual".to_string()
                }
                ComponentKind::SelfReciprocal => "dual".to_string(),
                _ => format!("dual of component {}", partner[i]),
            };
            Ok(ComponentCheck {
                index: i,
                factor: comp.frame.factor.poly.display_var("Y"),
                kind: comp.frame.kind,
                field_order: comp.frame.field().order(),
                dim: comp.code.k(),
                target: desc,
                verdict: Verdict::of_witness(&witness),
                witness,
            })
        })
        .collect::<Result<Vec<_>, QcError>>()?;
    let constituent = checks
        .iter()
        .fold(Verdict::Verified, |v, c| v.and(c.verdict));
    let global = match lift_witness(code, &dec, &checks, &dual) {
        Some(w) => Some(w),
        None if n <= EQUIVALENCE_LENGTH_CAP => Some(decide_equivalence(
            code.code(),
            &dual,
            budget.min(GLOBAL_SEARCH_NODES),
        )?),
        None => None,
    };
    report.constituent_verdict = Some(constituent);
    match global {
        Some(w) if w.is_found() => {
            report.verdict = Verdict::Verified;
            report.basis = Basis::Direct;
            report.global_witness = Some(w);
            if constituent != Verdict::Verified {
                report.reason =
                    Some("a direct witness exists although the constituent condition fails".into());
            }
        }
        Some(EquivalenceWitness::NoneFound { reason }) => {
            report.verdict = Verdict::Refuted;
            report.basis = Basis::Direct;
            report.reason = Some(format!("no map onto the dual: {reason}"));
        }
        _ => {
            report.verdict = constituent;
            report.basis = Basis::Constituents;
            if constituent == Verdict::Refuted {
                let bad: Vec<String> = checks
                    .iter()
                    .filter(|c| c.verdict == Verdict::Refuted)
                    .map(|c| c.index.to_string())
                    .collect();
                report.reason = Some(format!("constituent condition fails at {}", bad.join(", ")));
            }
        }
    }
    report.components = checks;
    Ok(report)
}

fn partners(dec: &Decomposition) -> Vec<usize> {
    let mut p: Vec<usize> = (0..dec.components.len()).collect();
    for (a, b) in dec.pair_indices() {
        p[a] = b;
        p[b] = a;
    }
    p
}

/// Tries each component witness as a map applied inside every block of
/// length `l`; kept only if it replays onto `target` exactly.
fn lift_witness(
    code: &QCCode,
    dec: &Decomposition,
    checks: &[ComponentCheck],
    target: &LinearCode,
) -> Option<EquivalenceWitness> {
    let (l, m) = (code.index(), code.co_index());
    let mut tried: Vec<(Vec<usize>, Vec<Fe>)> = Vec::new();
    for c in checks {
        let comp = &dec.components[c.index];
        let Some((perm, scales)) = c.witness.as_monomial(comp.frame.field(), l) else {
            continue;
        };
        let Some(base_scales) = scales
            .iter()
            .map(|&s| comp.frame.embedding.preimage(s))
            .collect::<Option<Vec<Fe>>>()
        else {
            continue;
        };
        if tried.contains(&(perm.clone(), base_scales.clone())) {
            continue;
        }
        let full_perm: Vec<usize> = (0..l * m).map(|t| perm[t % l] + (t / l) * l).collect();
        let full_scales: Vec<Fe> = (0..l * m).map(|t| base_scales[t % l]).collect();
        let w = if full_scales.iter().all(|&s| s == 1) {
            EquivalenceWitness::Permutation { perm: full_perm }
        } else {
            EquivalenceWitness::Monomial {
                perm: full_perm,
                scales: full_scales,
            }
        };
        if w.verify(code.code(), target) {
            return Some(w);
        }
        tried.push((perm, base_scales));
    }
    None
}

/// A monomial map from `c` onto `d` built from the equivalences of their
/// constituents, applied blockwise. `None` when no component map lifts.
pub fn lifted_equivalence(
    c: &QCCode,
    d: &QCCode,
    budget: u64,
) -> Result<Option<EquivalenceWitness>, QcError> {
    if c.field() != d.field() || c.index() != d.index() || c.co_index() != d.co_index() {
        return Err(QcError::Shape(
            "codes differ in field, index or co-index".into(),
        ));
    }
    let (dc, dd) = (c.decompose()?, d.decompose()?);
    let checks = dc
        .components
        .iter()
        .zip(&dd.components)
        .enumerate()
        .map(|(i, (x, y))| {
            let witness = decide_equivalence(&x.code, &y.code, budget)?;
            Ok(ComponentCheck {
                index: i,
                factor: x.frame.factor.poly.display_var("Y"),
                kind: x.frame.kind,
                field_order: x.frame.field().order(),
                dim: x.code.k(),
                target: format!("component {i}"),
                verdict: Verdict::of_witness(&witness),
                witness,
            })
        })
        .collect::<Result<Vec<_>, QcError>>()?;
    Ok(lift_witness(c, &dc, &checks, d.code()))
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfDualReport {
    pub self_dual: bool,
    /// Per component: Hermitian self-duality, or `C_j'' = C_j'^perp` on pairs.
    pub components: Vec<bool>,
    /// Direct comparison of the code with its nullspace dual.
    pub direct: bool,
}

pub fn is_self_dual_qc(code: &QCCode) -> Result<SelfDualReport, QcError> {
    let dec = code.decompose()?;
    let targets = dec.dual()?;
    let components: Vec<bool> = dec
        .components
        .iter()
        .zip(&targets.components)
        .map(|(c, t)| c.code == t.code)
        .collect();
    let direct = code.code().dual() == *code.code();
    let self_dual = components.iter().all(|&b| b);
    if self_dual != direct {
        return Err(QcError::PropositionViolated(
            "constituent self-duality disagrees with the direct check".into(),
        ));
    }
    Ok(SelfDualReport {
        self_dual,
        components,
        direct,
    })
}
