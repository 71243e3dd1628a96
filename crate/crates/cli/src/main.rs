use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use isodual_core::codefile::{Code, CodeFile};
use isodual_core::construct::{
    isodual_by_cubic, isodual_by_vandermonde, vandermonde, ConstructError,
};
use isodual_core::cyclic::{
    construct_1, construct_2, construct_3, decide_equivalence, find_duadic_splittings, CyclicCode,
    CyclicError, DuadicVariant,
};
use isodual_core::gf::Field;
use isodual_core::lincode::{CodeError, Distance, EquivalenceWitness};
use isodual_core::polyring::{factor_xm_minus_1, Factor};
use isodual_core::qc::{
    count_equivalent_qc, count_qc_cyclic_constituents, is_isodual_qc, is_quasi_cyclic,
    is_self_dual_qc, isodual_qc_existence, lifted_equivalence, multiplier_equivalent_qc,
    self_dual_exists, ExistenceVerdict, IsodualReport, QCCode, QcError, Verdict,
};

mod text;

/// Exit code for malformed input or a violated precondition.
const EXIT_INVALID: u8 = 2;
/// Exit code when a search ran out of budget.
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(
    name = "isodual",
    version,
    about = "Isodual and self-dual quasi-cyclic codes"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Search budget in millions of enumerated items.
    #[arg(long, global = true, default_value_t = 64)]
    budget: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor x^m - 1 over GF(q).
    Factor {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u64,
    },
    /// Build a code and verify it is isodual.
    #[command(subcommand)]
    Construct(Construct),
    /// Verify a property of code files.
    #[command(subcommand)]
    Check(Check),
    /// Minimum distance of a code.
    Minweight { file: PathBuf },
    /// Counting and existence results.
    #[command(subcommand)]
    Count(Count),
}

#[derive(Args)]
struct Out {
    /// Output files; without them the code files go to stdout, one per line.
    #[arg(long, short, num_args = 1..)]
    out: Vec<PathBuf>,
}

#[derive(Args)]
struct CyclicParams {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    a: u32,
    #[arg(long)]
    mprime: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Mixed,
    Negation,
}

#[derive(Subcommand)]
enum Construct {
    /// Two isodual cyclic codes of length 2^a m' from f = (x^m' - 1)/(x - 1).
    Cyclic1 {
        #[command(flatten)]
        p: CyclicParams,
        #[command(flatten)]
        out: Out,
    },
    /// Two isodual cyclic codes from the split f = f1 f2.
    Cyclic2 {
        #[command(flatten)]
        p: CyclicParams,
        /// Which factor takes the even scalings: 1 or 2.
        #[arg(long, default_value_t = 1)]
        i: u8,
        #[command(flatten)]
        out: Out,
    },
    /// Two isodual cyclic codes from a duadic splitting.
    Cyclic3 {
        #[command(flatten)]
        p: CyclicParams,
        #[arg(long, value_enum, default_value = "mixed")]
        variant: Variant,
        #[arg(long, default_value_t = 1)]
        i: u8,
        /// Index into the list of splittings.
        #[arg(long, default_value_t = 0)]
        splitting: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Vandermonde matrix product of 2^a equal-length codes.
    Vandermonde {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Cubic construction from C1 over GF(q) and C2 over GF(q^2).
    Cubic {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        c1: PathBuf,
        #[arg(long)]
        c2: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// An isodual QC code of index 2 and co-index m.
    L2Qc {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Is the code equivalent to its dual?
    Isodual { file: PathBuf },
    /// Is the code equal to its dual?
    Selfdual { file: PathBuf },
    /// Write the dual code.
    Dual {
        file: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Is the code quasi-cyclic of index l? Without --l, list every index.
    QcIndex {
        file: PathBuf,
        #[arg(long)]
        l: Option<usize>,
    },
    /// Are two codes equivalent?
    Equiv { a: PathBuf, b: PathBuf },
}

#[derive(Subcommand)]
enum Count {
    /// Number of l-QC codes of co-index m with cyclic constituents.
    QcCyclic {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
    },
    /// (phi(l) + 1)^alpha.
    Equivalent {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        alpha: u32,
    },
    /// Does a self-dual l-QC code exist over GF(q)?
    SelfdualExists {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        l: usize,
    },
    /// Does an isodual l-QC code of co-index m exist over GF(q)?
    IsodualExists {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
    },
}

struct Ctx {
    json: bool,
    budget: u64,
}

impl Ctx {
    fn emit(&self, value: &impl Serialize, text: impl FnOnce() -> String) {
        if self.json {
            println!(
                "{}",
                serde_json::to_string_pretty(value).expect("reports serialize")
            );
        } else {
            print!("{}", text());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    }
    let ctx = Ctx {
        json: cli.json,
        budget: cli.budget.saturating_mul(1_000_000),
    };
    match run(&ctx, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if out_of_budget(&e) {
                EXIT_UNKNOWN
            } else {
                EXIT_INVALID
            })
        }
    }
}

fn out_of_budget(e: &anyhow::Error) -> bool {
    fn code(c: &CodeError) -> bool {
        matches!(c, CodeError::BudgetExceeded { .. })
    }
    fn qc(q: &QcError) -> bool {
        matches!(q, QcError::Code(c) if code(c))
    }
    e.chain().any(|c| {
        c.downcast_ref::<CodeError>().is_some_and(code)
            || c.downcast_ref::<QcError>().is_some_and(qc)
            || matches!(c.downcast_ref(), Some(CyclicError::Code(x)) if code(x))
            || match c.downcast_ref::<ConstructError>() {
                Some(ConstructError::Code(x)) => code(x),
                Some(ConstructError::Qc(x)) => qc(x),
                _ => false,
            }
    })
}

fn run(ctx: &Ctx, command: Command) -> Result<u8> {
    match command {
        Command::Factor { q, m } => factor(ctx, q, m),
        Command::Construct(c) => construct(ctx, c),
        Command::Check(c) => check(ctx, c),
        Command::Minweight { file } => minweight(ctx, &file),
        Command::Count(c) => count(ctx, c),
    }
}

fn exit(v: Verdict) -> u8 {
    v.exit_code() as u8
}

fn verdict_of(w: &EquivalenceWitness) -> Verdict {
    if w.is_found() {
        Verdict::Verified
    } else if w.is_refutation() {
        Verdict::Refuted
    } else {
        Verdict::Unknown
    }
}

fn read_code(path: &Path) -> Result<(Code, CodeFile)> {
    let mut s = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut s)?;
    } else {
        s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    let file = CodeFile::parse(&s).with_context(|| format!("parsing {}", path.display()))?;
    Ok(file
        .load()
        .with_context(|| format!("loading {}", path.display()))?)
}

fn field_of(q: u64) -> Result<Field> {
    Field::of_order(q).map_err(|e| anyhow!("GF({q}): {e}"))
}

// ---- factor ----

fn factor_json(f: &Factor, kind: &str) -> Value {
    json!({
        "poly": f.poly.coeffs(),
        "display": f.poly.to_string(),
        "degree": f.degree(),
        "coset": f.coset.members,
        "kind": kind,
    })
}

fn factor(ctx: &Ctx, q: u64, m: u64) -> Result<u8> {
    let field = field_of(q)?;
    let fac = factor_xm_minus_1(&field, m)?;
    let mut factors = Vec::new();
    for g in &fac.self_reciprocal {
        factors.push(factor_json(g, "self_reciprocal"));
    }
    for (h, hs) in &fac.pairs {
        factors.push(factor_json(h, "pair_first"));
        factors.push(factor_json(hs, "pair_second"));
    }
    let value = json!({ "q": q, "m": m, "unit": fac.unit, "factors": factors });
    ctx.emit(&value, || text::factorization(&fac));
    Ok(0)
}

// ---- construct ----

fn write_codes(
    ctx: &Ctx,
    out: &Out,
    files: &[CodeFile],
    summary: Value,
    text: String,
) -> Result<()> {
    if out.out.is_empty() {
        for f in files {
            println!("{}", f.to_json());
        }
        return Ok(());
    }
    if out.out.len() != files.len() {
        bail!(
            "this construction writes {} files, {} paths given",
            files.len(),
            out.out.len()
        );
    }
    for (path, f) in out.out.iter().zip(files) {
        fs::write(path, f.to_json() + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    ctx.emit(&summary, || text);
    Ok(())
}

fn cyclic_pair(
    ctx: &Ctx,
    out: &Out,
    name: &str,
    params: Value,
    codes: (CyclicCode, CyclicCode),
) -> Result<u8> {
    let mut files = Vec::new();
    let mut worst = Verdict::Verified;
    let mut text = String::new();
    for (i, c) in [codes.0, codes.1].iter().enumerate() {
        let w = c.is_isodual(ctx.budget)?;
        let v = verdict_of(&w);
        if v != Verdict::Verified {
            worst = if worst == Verdict::Refuted { worst } else { v };
        }
        text += &format!(
            "{name}[{i}]: [{}, {}] g = {}\n  isodual: {v:?} ({})\n",
            c.len(),
            c.dim(),
            c.gpoly(),
            text::witness(&w)
        );
        files.push(
            CodeFile::from_cyclic(c)
                .with_meta("name", json!(format!("{name}[{i}]")))
                .with_meta("construction", json!({ "name": name, "params": params }))
                .with_meta("isodual", json!({ "verdict": v, "witness": w })),
        );
    }
    let summary = json!({ "codes": files.iter().map(|f| &f.meta).collect::<Vec<_>>() });
    write_codes(ctx, out, &files, summary, text)?;
    Ok(exit(worst))
}

fn qc_output(
    ctx: &Ctx,
    out: &Out,
    name: &str,
    params: Value,
    code: &QCCode,
    report: &IsodualReport,
) -> Result<u8> {
    let file = CodeFile::from_qc(code)
        .with_meta("name", json!(name))
        .with_meta("construction", json!({ "name": name, "params": params }))
        .with_meta("isodual", serde_json::to_value(report)?);
    let text = format!(
        "{name}: [{}, {}] index {} co-index {}\n{}",
        code.len(),
        code.dim(),
        code.index(),
        code.co_index(),
        text::isodual(report)
    );
    write_codes(ctx, out, &[file], serde_json::to_value(report)?, text)?;
    Ok(exit(report.verdict))
}

fn construct(ctx: &Ctx, c: Construct) -> Result<u8> {
    match c {
        Construct::Cyclic1 { p, out } => {
            let field = field_of(p.q)?;
            let codes = construct_1(&field, p.a, p.mprime)?;
            let params = json!({ "q": p.q, "a": p.a, "mprime": p.mprime });
            cyclic_pair(ctx, &out, "cyclic1", params, codes)
        }
        Construct::Cyclic2 { p, i, out } => {
            let field = field_of(p.q)?;
            let which = match i {
                1 => (1, 2),
                2 => (2, 1),
                _ => bail!("--i must be 1 or 2"),
            };
            let codes = construct_2(&field, p.a, p.mprime, None, which)?;
            let params = json!({ "q": p.q, "a": p.a, "mprime": p.mprime, "i": i });
            cyclic_pair(ctx, &out, "cyclic2", params, codes)
        }
        Construct::Cyclic3 {
            p,
            variant,
            i,
            splitting,
            out,
        } => {
            let field = field_of(p.q)?;
            let all = find_duadic_splittings(&field, p.mprime)?;
            let s = all.get(splitting).ok_or_else(|| {
                anyhow!("splitting {splitting} requested, {} available", all.len())
            })?;
            let v = match variant {
                Variant::Mixed => DuadicVariant::Mixed(i),
                Variant::Negation => DuadicVariant::Negation(i),
            };
            let codes = construct_3(&field, p.a, s, v)?;
            let vname = match variant {
                Variant::Mixed => "mixed",
                Variant::Negation => "negation",
            };
            let params = json!({
                "q": p.q, "a": p.a, "mprime": p.mprime, "variant": vname, "i": i,
                "splitting": s,
            });
            cyclic_pair(ctx, &out, "cyclic3", params, codes)
        }
        Construct::Vandermonde { inputs, out } => {
            let codes = inputs
                .iter()
                .map(|p| read_code(p).map(|(c, _)| c.linear()))
                .collect::<Result<Vec<_>>>()?;
            let k = codes.len();
            if !k.is_power_of_two() || k < 2 {
                bail!("{k} inputs; the product needs 2^a inputs with a >= 1");
            }
            let vc = vandermonde(codes[0].field(), k.trailing_zeros())?;
            let (code, report) = isodual_by_vandermonde(&codes, &vc, ctx.budget)?;
            let names: Vec<String> = inputs.iter().map(|p| p.display().to_string()).collect();
            let params = json!({ "a": vc.a, "alpha": vc.alpha, "inputs": names });
            qc_output(ctx, &out, "vandermonde", params, &code, &report)
        }
        Construct::Cubic { q, c1, c2, out } => {
            let (a, _) = read_code(&c1)?;
            let (b, _) = read_code(&c2)?;
            if let Some(q) = q {
                if a.field().order() != q {
                    bail!("C1 is over {}, not GF({q})", a.field());
                }
            }
            let (code, report) = isodual_by_cubic(&a.linear(), &b.linear(), ctx.budget)?;
            let params = json!({ "q": a.field().order() });
            qc_output(ctx, &out, "cubic", params, &code, &report)
        }
        Construct::L2Qc { q, m, out } => match isodual_qc_existence(q, 2, m, ctx.budget)? {
            ExistenceVerdict::Witness { code, report } => qc_output(
                ctx,
                &out,
                "l2-qc",
                json!({ "q": q, "m": m }),
                &code,
                &report,
            ),
            other => bail!("no construction: {}", serde_json::to_string(&other)?),
        },
    }
}

// ---- check ----

fn check(ctx: &Ctx, c: Check) -> Result<u8> {
    match c {
        Check::Isodual { file } => {
            let (code, _) = read_code(&file)?;
            match code {
                Code::Qc(qc) => {
                    let r = is_isodual_qc(&qc, ctx.budget)?;
                    ctx.emit(&r, || text::isodual(&r));
                    Ok(exit(r.verdict))
                }
                Code::Cyclic(cc) => {
                    let w = cc.is_isodual(ctx.budget)?;
                    Ok(witness_report(ctx, "isodual", &w))
                }
                Code::Linear(lc) => {
                    let w = decide_equivalence(&lc, &lc.dual(), ctx.budget)?;
                    Ok(witness_report(ctx, "isodual", &w))
                }
            }
        }
        Check::Selfdual { file } => {
            let (code, _) = read_code(&file)?;
            let (self_dual, value) = match &code {
                Code::Qc(qc) => {
                    let r = is_self_dual_qc(qc)?;
                    let mut v = serde_json::to_value(&r)?;
                    if qc.index() % 2 == 1 {
                        v["reason"] = json!(format!("index {} is odd", qc.index()));
                    }
                    (r.self_dual, v)
                }
                _ => {
                    let lc = code.linear();
                    let sd = lc.dual() == lc;
                    (sd, json!({ "self_dual": sd }))
                }
            };
            let v = if self_dual {
                Verdict::Verified
            } else {
                Verdict::Refuted
            };
            let mut value = value;
            value["verdict"] = json!(v);
            ctx.emit(&value, || {
                let mut s = format!("self-dual: {v:?}\n");
                if let Some(r) = value.get("reason").and_then(Value::as_str) {
                    s += &format!("  {r}\n");
                }
                if let Some(cs) = value.get("components").and_then(Value::as_array) {
                    for (i, c) in cs.iter().enumerate() {
                        s += &format!("  component {i}: {c}\n");
                    }
                }
                s
            });
            Ok(exit(v))
        }
        Check::Dual { file, out } => {
            let (code, canon) = read_code(&file)?;
            let mut dual = match &code {
                Code::Qc(qc) => CodeFile::from_qc(&qc.dual()?),
                Code::Cyclic(cc) => CodeFile::from_cyclic(&cc.dual()),
                Code::Linear(lc) => CodeFile::from_linear(&lc.dual()),
            };
            if let Some(name) = canon.meta.get("name").and_then(Value::as_str) {
                dual = dual.with_meta("name", json!(format!("dual of {name}")));
            }
            let lc = code.linear().dual();
            let text = format!("dual: [{}, {}]\n", lc.len(), lc.k());
            write_codes(
                ctx,
                &out,
                &[dual],
                json!({ "length": lc.len(), "dim": lc.k() }),
                text,
            )?;
            Ok(0)
        }
        Check::QcIndex { file, l } => {
            let (code, _) = read_code(&file)?;
            let lc = code.linear();
            let n = lc.len();
            match l {
                Some(l) => {
                    if l == 0 || n % l != 0 {
                        bail!("index {l} does not divide the length {n}");
                    }
                    let ok = is_quasi_cyclic(&lc, l)?;
                    let v = if ok {
                        Verdict::Verified
                    } else {
                        Verdict::Refuted
                    };
                    let value =
                        json!({ "length": n, "index": l, "quasi_cyclic": ok, "verdict": v });
                    ctx.emit(&value, || format!("quasi-cyclic of index {l}: {v:?}\n"));
                    Ok(exit(v))
                }
                None => {
                    let mut idx = Vec::new();
                    for l in (1..=n).filter(|l| n % l == 0) {
                        if is_quasi_cyclic(&lc, l)? {
                            idx.push(l);
                        }
                    }
                    let value = json!({ "length": n, "indices": idx });
                    ctx.emit(&value, || {
                        let s: Vec<String> = idx.iter().map(usize::to_string).collect();
                        format!("quasi-cyclic indices: {}\n", s.join(" "))
                    });
                    Ok(0)
                }
            }
        }
        Check::Equiv { a, b } => {
            let (x, _) = read_code(&a)?;
            let (y, _) = read_code(&b)?;
            let mut w = decide_equivalence(&x.linear(), &y.linear(), ctx.budget)?;
            if let (Code::Qc(cx), Code::Qc(cy)) = (&x, &y) {
                if cx.index() == cy.index()
                    && cx.co_index() == cy.co_index()
                    && cx.field() == cy.field()
                {
                    if !w.is_found() && !w.is_refutation() {
                        if let Some(lifted) = lifted_equivalence(cx, cy, ctx.budget)? {
                            w = lifted;
                        }
                    }
                    let m = multiplier_equivalent_qc(cx, cy)?;
                    let v = verdict_of(&w);
                    let v = if v == Verdict::Unknown && m.verdict == Verdict::Verified {
                        m.verdict
                    } else {
                        v
                    };
                    let value = json!({ "verdict": v, "witness": w, "multiplier": m });
                    ctx.emit(&value, || {
                        format!(
                            "equivalent: {v:?}\n  {}\n  componentwise multipliers: {:?}\n",
                            text::witness(&w),
                            m.verdict
                        )
                    });
                    return Ok(exit(v));
                }
            }
            Ok(witness_report(ctx, "equivalent", &w))
        }
    }
}

fn witness_report(ctx: &Ctx, what: &str, w: &EquivalenceWitness) -> u8 {
    let v = verdict_of(w);
    ctx.emit(&json!({ "verdict": v, "witness": w }), || {
        format!("{what}: {v:?}\n  {}\n", text::witness(w))
    });
    exit(v)
}

// ---- minweight ----

fn minweight(ctx: &Ctx, file: &Path) -> Result<u8> {
    let (code, _) = read_code(file)?;
    let lc = code.linear();
    let d = lc.min_distance(ctx.budget)?;
    let value =
        json!({ "length": lc.len(), "dim": lc.k(), "distance": d, "certified": d.is_certified() });
    ctx.emit(&value, || match d {
        Distance::Exact { value } => format!("{value} certified\n"),
        Distance::Bounded { lower, upper } => {
            format!("between {lower} and {upper}, not certified\n")
        }
    });
    Ok(if d.is_certified() { 0 } else { EXIT_UNKNOWN })
}

// ---- count ----

fn count(ctx: &Ctx, c: Count) -> Result<u8> {
    match c {
        Count::QcCyclic { q, m, l } => {
            let n = count_qc_cyclic_constituents(q, m, l)?;
            ctx.emit(
                &json!({ "q": q, "m": m, "l": l, "count": n.to_string() }),
                || format!("{n}\n"),
            );
            Ok(0)
        }
        Count::Equivalent { l, alpha } => {
            let r = count_equivalent_qc(l, alpha);
            ctx.emit(&r, || {
                let mut s = format!("{}\n", r.count);
                if !r.hypothesis_holds {
                    s += &format!("note: gcd({l}, phi({l})) != 1\n");
                }
                s
            });
            Ok(0)
        }
        Count::SelfdualExists { q, l } => {
            let yes = self_dual_exists(q, l)?;
            ctx.emit(&json!({ "q": q, "l": l, "exists": yes }), || {
                format!("{}\n", if yes { "yes" } else { "no" })
            });
            Ok(0)
        }
        Count::IsodualExists { q, l, m } => {
            let r = isodual_qc_existence(q, l, m, ctx.budget)?;
            let (answer, code) = match &r {
                ExistenceVerdict::Impossible { .. } => ("no", 0),
                ExistenceVerdict::Witness { report, .. } => ("yes", exit(report.verdict)),
                ExistenceVerdict::EvenNecessary { .. } => ("unknown", EXIT_UNKNOWN),
            };
            ctx.emit(&r, || match &r {
                ExistenceVerdict::Impossible { reason }
                | ExistenceVerdict::EvenNecessary { reason } => {
                    format!("{answer}\n  {reason}\n")
                }
                ExistenceVerdict::Witness { code, report } => format!(
                    "{answer}\n  witness of length {} and dimension {}: {:?}\n",
                    code.len(),
                    code.dim(),
                    report.verdict
                ),
            });
            Ok(code)
        }
    }
}
