//! Human-readable report text.

use isodual_core::lincode::EquivalenceWitness;
use isodual_core::polyring::Factorization;
use isodual_core::qc::IsodualReport;

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn witness(w: &EquivalenceWitness) -> String {
    match w {
        EquivalenceWitness::Permutation { perm } => format!("permutation [{}]", list(perm)),
        EquivalenceWitness::Monomial { perm, scales } => {
            format!("monomial [{}] scales [{}]", list(perm), list(scales))
        }
        EquivalenceWitness::Multiplier { a, lambda } => {
            format!("multiplier i -> {a}i with scale {lambda}^i")
        }
        EquivalenceWitness::NoneFound { reason } => format!("no map: {reason}"),
        EquivalenceWitness::BudgetExhausted { reason } => format!("undecided: {reason}"),
    }
}

pub fn factorization(fac: &Factorization) -> String {
    let factors: Vec<String> = fac
        .factors()
        .iter()
        .map(|f| format!("({})", f.poly))
        .collect();
    let unit = if fac.unit == 1 {
        String::new()
    } else {
        format!("{} ", fac.unit)
    };
    let mut s = format!("x^{} - 1 = {unit}{}\n", fac.m, factors.concat());
    for g in &fac.self_reciprocal {
        s += &format!("  {}  self-reciprocal\n", g.poly);
    }
    for (h, hs) in &fac.pairs {
        s += &format!("  {}  reciprocal pair with {}\n", h.poly, hs.poly);
    }
    s
}

pub fn isodual(r: &IsodualReport) -> String {
    let mut s = format!(
        "isodual: {:?} by {:?} ([{}, {}], index {})\n",
        r.verdict, r.basis, r.length, r.dim, r.index
    );
    if let Some(reason) = &r.reason {
        s += &format!("  {reason}\n");
    }
    if let Some(eq) = r.weight_enumerators_equal {
        s += &format!("  weight enumerators equal: {eq}\n");
    }
    for c in &r.components {
        s += &format!(
            "  component {} ({}) over GF({}), dim {}, vs {}: {:?}, {}\n",
            c.index,
            c.factor,
            c.field_order,
            c.dim,
            c.target,
            c.verdict,
            witness(&c.witness)
        );
    }
    if let Some(w) = &r.global_witness {
        s += &format!("  whole code: {}\n", witness(w));
    }
    s
}
