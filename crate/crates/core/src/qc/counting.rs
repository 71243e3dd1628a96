//! Existence criteria and counting formulas for QC codes.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::{frames, is_isodual_qc, Decomposition, IsodualReport, QCCode, QcError, Verdict};
use crate::arith;
use crate::cyclic::cyclic_generator;
use crate::gf::Field;
use crate::lincode::LinearCode;
use crate::polyring::cyclotomic_cosets;

/// Whether self-dual `l`-QC codes exist over GF(q) (any admissible `m`):
/// exactly when `(-1)^(l/2)` is a square.
pub fn self_dual_exists(q: u64, l: usize) -> Result<bool, QcError> {
    if l % 2 != 0 {
        return Err(QcError::Invalid(format!("index {l} is odd")));
    }
    let f = Field::of_order(q)?;
    let minus_one = f.neg(f.one());
    let x = if (l / 2) % 2 == 0 { f.one() } else { minus_one };
    Ok(f.is_square(x))
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExistenceVerdict {
    /// No isodual QC code of this index exists.
    Impossible { reason: String },
    /// A verified isodual code of index 2.
    Witness {
        #[serde(skip)]
        code: Box<QCCode>,
        report: Box<IsodualReport>,
    },
    /// Even index is necessary; no construction is attempted.
    EvenNecessary { reason: String },
}

/// Existence of isodual `l`-QC codes of co-index `m` over GF(q). For `l = 2`
/// the witness has every constituent equal to `<x - 1>` of length 2.
pub fn isodual_qc_existence(
    q: u64,
    l: usize,
    m: usize,
    budget: u64,
) -> Result<ExistenceVerdict, QcError> {
    let base = Field::of_order(q)?;
    if l % 2 == 1 {
        return Ok(ExistenceVerdict::Impossible {
            reason: format!("index {l} is odd; isodual QC codes need an even index"),
        });
    }
    if l != 2 {
        return Ok(ExistenceVerdict::EvenNecessary {
            reason: format!("index {l} is even; constructions are provided for index 2 only"),
        });
    }
    let (_, fr) = frames(&base, m)?;
    let codes = fr
        .iter()
        .map(|f| {
            let g = f.field();
            LinearCode::from_rows(g, 2, vec![vec![g.one(), g.neg(g.one())]])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let code = Decomposition::from_codes(&base, 2, m, codes)?.recombine()?;
    let report = is_isodual_qc(&code, budget)?;
    Ok(ExistenceVerdict::Witness {
        code: Box::new(code),
        report: Box::new(report),
    })
}

/// Number of `l`-QC codes of length `lm` over GF(q) whose constituents are
/// all cyclic: a factor of degree `K` contributes `2^(number of
/// q^K-cyclotomic cosets mod l)`.
pub fn count_qc_cyclic_constituents(q: u64, m: usize, l: usize) -> Result<BigUint, QcError> {
    if arith::gcd(l as u64, q) != 1 || l == 0 {
        return Err(QcError::Invalid(format!("gcd(l = {l}, q = {q}) must be 1")));
    }
    let base = Field::of_order(q)?;
    let (_, fr) = frames(&base, m)?;
    let mut total = BigUint::one();
    for f in &fr {
        let qk = f.field().order();
        let cosets = if l == 1 {
            1
        } else {
            cyclotomic_cosets(qk % l as u64, l as u64)?.len()
        };
        total <<= cosets;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalentCount {
    #[serde(serialize_with = "decimal")]
    pub count: BigUint,
    /// Whether `gcd(l, phi(l)) = 1`, the hypothesis under which the count
    /// applies.
    pub hypothesis_holds: bool,
}

/// `(phi(l) + 1)^alpha`.
pub fn count_equivalent_qc(l: u64, alpha: u32) -> EquivalentCount {
    let phi = arith::euler_phi(l);
    EquivalentCount {
        count: BigUint::from(phi + 1).pow(alpha),
        hypothesis_holds: arith::gcd(l, phi) == 1,
    }
}

fn decimal<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn multiplier_perm(a: u64, l: usize) -> Vec<usize> {
    (0..l).map(|i| (i as u64 * a % l as u64) as usize).collect()
}

/// For each constituent, the number of distinct codes `mu_a(C_k)` over the
/// units `a` mod `l`. Their product is the number of distinct QC codes
/// reachable by per-component multipliers.
pub fn distinct_multiplier_variants(code: &QCCode) -> Result<Vec<usize>, QcError> {
    let dec = code.decompose()?;
    let l = code.index();
    dec.components
        .iter()
        .map(|c| {
            let mut seen: Vec<LinearCode> = Vec::new();
            for a in arith::units(l as u64) {
                let img = c.code.apply_permutation(&multiplier_perm(a, l))?;
                if !seen.contains(&img) {
                    seen.push(img);
                }
            }
            Ok(seen.len())
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplierReport {
    pub verdict: Verdict,
    pub applicable: bool,
    /// Per component, a unit `a` with `mu_a(C_k) = D_k`.
    pub witnesses: Vec<Option<u64>>,
    pub hypothesis_holds: bool,
    pub reason: Option<String>,
}

/// Componentwise multiplier equivalence of two QC codes with cyclic
/// constituents.
pub fn multiplier_equivalent_qc(c: &QCCode, d: &QCCode) -> Result<MultiplierReport, QcError> {
    if c.field() != d.field() || c.index() != d.index() || c.co_index() != d.co_index() {
        return Err(QcError::Shape(
            "codes differ in field, index or co-index".into(),
        ));
    }
    let l = c.index();
    let phi = arith::euler_phi(l as u64);
    let mut report = MultiplierReport {
        verdict: Verdict::Unknown,
        applicable: true,
        witnesses: Vec::new(),
        hypothesis_holds: arith::gcd(l as u64, phi) == 1,
        reason: None,
    };
    let (dc, dd) = (c.decompose()?, d.decompose()?);
    let cyclic = |dec: &Decomposition| {
        dec.components
            .iter()
            .all(|x| cyclic_generator(&x.code).is_some())
    };
    if !cyclic(&dc) || !cyclic(&dd) {
        report.applicable = false;
        report.reason = Some("not all constituents are cyclic".into());
        return Ok(report);
    }
    for (x, y) in dc.components.iter().zip(&dd.components) {
        let mut found = None;
        if x.code.k() == y.code.k() {
            for a in arith::units(l as u64) {
                if x.code.apply_permutation(&multiplier_perm(a, l))? == y.code {
                    found = Some(a);
                    break;
                }
            }
        }
        report.witnesses.push(found);
    }
    if report.witnesses.iter().all(Option::is_some) {
        report.verdict = Verdict::Verified;
    } else {
        report.verdict = Verdict::Refuted;
        report.reason = Some("some component has no multiplier image".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::CyclicCode;
    use crate::polyring::{factor_xm_minus_1, Poly};

    fn qc_from(q: u64, l: usize, m: usize, codes: Vec<LinearCode>) -> QCCode {
        let f = Field::of_order(q).unwrap();
        Decomposition::from_codes(&f, l, m, codes).unwrap().recombine().unwrap()
    }

    #[test]
    fn self_dual_existence() {
        assert!(self_dual_exists(9, 2).unwrap());
        assert!(!self_dual_exists(3, 2).unwrap());
        assert!(self_dual_exists(5, 2).unwrap());
        assert!(self_dual_exists(5, 4).unwrap());
        assert!(self_dual_exists(3, 4).unwrap());
        assert!(self_dual_exists(3, 3).is_err());
    }

    #[test]
    fn isodual_existence() {
        assert!(matches!(
            isodual_qc_existence(3, 3, 7, 1 << 20).unwrap(),
            ExistenceVerdict::Impossible { .. }
        ));
        assert!(matches!(
            isodual_qc_existence(3, 4, 7, 1 << 20).unwrap(),
            ExistenceVerdict::EvenNecessary { .. }
        ));
        for (q, m) in [(3, 7), (5, 11)] {
            match isodual_qc_existence(q, 2, m, 1 << 24).unwrap() {
                ExistenceVerdict::Witness { code, report } => {
                    assert_eq!((code.len(), code.dim()), (2 * m, m));
                    assert_eq!(report.verdict, Verdict::Verified, "{report:?}");
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn cyclic_constituent_counts() {
        assert_eq!(count_qc_cyclic_constituents(3, 2, 2).unwrap(), BigUint::from(16u32));
        assert_eq!(count_qc_cyclic_constituents(5, 3, 2).unwrap(), BigUint::from(16u32));
        // each component of degree K contributes the number of divisors of
        // x^l - 1 over GF(q^K)
        for (q, m, l) in [(2u64, 3usize, 7usize), (3, 4, 5), (5, 1, 4), (4, 3, 5), (7, 3, 2)] {
            let base = Field::of_order(q).unwrap();
            let (_, fr) = frames(&base, m).unwrap();
            let mut want = BigUint::one();
            for f in &fr {
                want <<= factor_xm_minus_1(f.field(), l as u64).unwrap().len();
            }
            assert_eq!(count_qc_cyclic_constituents(q, m, l).unwrap(), want, "{q} {m} {l}");
        }
        assert!(count_qc_cyclic_constituents(3, 2, 3).is_err());
    }

    #[test]
    fn equivalent_counts() {
        let c = |l, a| count_equivalent_qc(l, a);
        assert_eq!(c(2, 1).count, BigUint::from(2u32));
        assert_eq!(c(3, 2).count, BigUint::from(9u32));
        assert_eq!(c(5, 3).count, BigUint::from(125u32));
        assert!(c(3, 2).hypothesis_holds && c(5, 1).hypothesis_holds);
        assert!(!c(4, 1).hypothesis_holds);
        assert_eq!(
            serde_json::to_value(c(3, 2)).unwrap(),
            serde_json::json!({"count": "9", "hypothesis_holds": true})
        );
    }

    #[test]
    fn multiplier_variants_follow_coset_orbits() {
        // over GF(4), x^5 - 1 = (x - 1) g h with mu_2 swapping g and h
        let f4 = Field::of_order(4).unwrap();
        let fac = factor_xm_minus_1(&f4, 5).unwrap();
        let quad = fac.factors().into_iter().find(|x| x.degree() == 2).unwrap().poly.clone();
        let lin = Poly::from_ints(&f4, &[-1, 1]);
        for (g, want) in [(quad, 2), (lin, 1)] {
            let c = CyclicCode::from_gpoly(&f4, 5, &g).unwrap().to_linear();
            let code = qc_from(4, 5, 1, vec![c]);
            assert_eq!(distinct_multiplier_variants(&code).unwrap(), vec![want]);
        }
        // the closed formula counts phi(5) + 1 = 5 codes for one component
        assert_eq!(count_equivalent_qc(5, 1).count, BigUint::from(5u32));
    }

    #[test]
    fn multiplier_equivalence_recovers_the_multiplier() {
        // x^7 - 1 over GF(2): the two cubic factors are swapped by mu_3
        let f2 = Field::of_order(2).unwrap();
        let f4 = Field::of_order(4).unwrap();
        let g2 = CyclicCode::from_gpoly(&f2, 7, &Poly::from_ints(&f2, &[1, 1, 0, 1])).unwrap();
        let g4 = CyclicCode::from_gpoly(&f4, 7, &Poly::from_ints(&f4, &[1, 1, 0, 1])).unwrap();
        let c = qc_from(2, 7, 3, vec![g2.to_linear(), g4.to_linear()]);
        let same = multiplier_equivalent_qc(&c, &c).unwrap();
        assert_eq!(same.verdict, Verdict::Verified);
        assert_eq!(same.witnesses, vec![Some(1), Some(1)]);

        let moved = g2.multiplier(3).unwrap();
        assert_ne!(moved, g2);
        let d = qc_from(2, 7, 3, vec![moved.to_linear(), g4.to_linear()]);
        let r = multiplier_equivalent_qc(&c, &d).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let a = r.witnesses[0].unwrap();
        assert_eq!(g2.multiplier(a).unwrap(), moved);
        assert_eq!(r.witnesses[1], Some(1));

        let full = LinearCode::full(&f4, 7);
        let e = qc_from(2, 7, 3, vec![g2.to_linear(), full]);
        assert_eq!(multiplier_equivalent_qc(&c, &e).unwrap().verdict, Verdict::Refuted);

        let odd = LinearCode::from_rows(&f2, 7, vec![vec![1, 1, 0, 0, 0, 0, 0]]).unwrap();
        let n = qc_from(2, 7, 3, vec![odd, g4.to_linear()]);
        let r = multiplier_equivalent_qc(&c, &n).unwrap();
        assert!(!r.applicable);
        assert_eq!(r.verdict, Verdict::Unknown);
    }
}
