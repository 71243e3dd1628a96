use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use isodual_core::codefile::CodeFile;
use isodual_core::cyclic::CyclicCode;
use isodual_core::gf::Field;
use isodual_core::polyring::Poly;

fn isodual(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isodual"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn status(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn read(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn factor_set(v: &Value) -> Vec<Vec<u64>> {
    let mut f: Vec<Vec<u64>> = v["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| serde_json::from_value(f["poly"].clone()).unwrap())
        .collect();
    f.sort();
    f
}

#[test]
fn factor_matches_known_factorizations() {
    let d = TempDir::new().unwrap();
    let o = isodual(d.path(), &["--json", "factor", "--q", "3", "--m", "14"]);
    assert_eq!(status(&o), 0);
    let mut want = vec![
        vec![2, 1],
        vec![1, 1],
        vec![1, 1, 1, 1, 1, 1, 1],
        vec![1, 2, 1, 2, 1, 2, 1],
    ];
    want.sort();
    assert_eq!(factor_set(&json(&o)), want);

    let o = isodual(d.path(), &["--json", "factor", "--q", "5", "--m", "11"]);
    let mut want = vec![vec![4, 1], vec![4, 1, 1, 4, 2, 1], vec![4, 3, 1, 4, 4, 1]];
    want.sort();
    assert_eq!(factor_set(&json(&o)), want);

    let o = isodual(d.path(), &["factor", "--q", "3", "--m", "3"]);
    assert_eq!(status(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn length_28_pipeline() {
    let d = TempDir::new().unwrap();
    let p = d.path();
    let o = isodual(
        p,
        &[
            "construct",
            "cyclic1",
            "--q",
            "3",
            "--a",
            "1",
            "--mprime",
            "7",
            "-o",
            "g0.code",
            "g1.code",
        ],
    );
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for g in ["g0.code", "g1.code"] {
        let f = read(p, g);
        assert_eq!(f["n"], 14);
        assert_eq!(f["meta"]["isodual"]["verdict"], "verified");
        let o = isodual(p, &["--json", "minweight", g]);
        assert_eq!(status(&o), 0);
        let v = json(&o);
        assert_eq!(
            (v["distance"]["value"].as_u64(), v["certified"].as_bool()),
            (Some(4), Some(true))
        );
    }
    let o = isodual(
        p,
        &[
            "construct",
            "vandermonde",
            "--inputs",
            "g0.code",
            "g1.code",
            "-o",
            "qc28.code",
        ],
    );
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let f = read(p, "qc28.code");
    assert_eq!(
        (f["kind"].as_str(), f["l"].as_u64(), f["m"].as_u64()),
        (Some("qc"), Some(14), Some(2))
    );

    let o = isodual(p, &["--json", "check", "isodual", "qc28.code"]);
    assert_eq!(status(&o), 0);
    let r = json(&o);
    assert_eq!(r["verdict"], "verified");
    assert_eq!(r["components"].as_array().unwrap().len(), 2);
    assert!(
        stdout(&isodual(p, &["check", "isodual", "qc28.code"])).starts_with("isodual: Verified")
    );

    assert_eq!(
        status(&isodual(
            p,
            &["check", "qc-index", "qc28.code", "--l", "14"]
        )),
        0
    );
    let o = isodual(p, &["--json", "check", "qc-index", "qc28.code"]);
    let idx: Vec<u64> = serde_json::from_value(json(&o)["indices"].clone()).unwrap();
    assert!(idx.contains(&14) && idx.contains(&28));

    // the dual written by one command is read back by the others
    let o = isodual(p, &["check", "dual", "qc28.code", "-o", "dual.code"]);
    assert_eq!(status(&o), 0);
    assert_eq!(status(&isodual(p, &["check", "isodual", "dual.code"])), 0);
    let o = isodual(p, &["--json", "check", "equiv", "qc28.code", "dual.code"]);
    assert_eq!(json(&o)["verdict"], "verified");
}

#[test]
fn deterministic_output() {
    let d = TempDir::new().unwrap();
    let args = [
        "construct",
        "cyclic1",
        "--q",
        "3",
        "--a",
        "1",
        "--mprime",
        "7",
    ];
    let a = isodual(d.path(), &args);
    let b = isodual(d.path(), &args);
    assert_eq!(status(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    // stdout holds the canonical code files, one per line
    for line in stdout(&a).lines() {
        let f = CodeFile::parse(line).unwrap();
        let (_, canon) = f.load().unwrap();
        assert_eq!(canon.to_json(), line);
    }
}

#[test]
fn selfdual_and_equivalence() {
    let d = TempDir::new().unwrap();
    let p = d.path();
    // full code of F5^6 as a 3-QC code: odd index, cannot be self-dual
    let full = r#"{"field":{"p":5,"k":1},"kind":"qc","l":3,"m":2,"gen":[[1,0,0,0,0,0],[0,1,0,0,0,0],[0,0,1,0,0,0],[0,0,0,1,0,0],[0,0,0,0,1,0],[0,0,0,0,0,1]]}"#;
    std::fs::write(p.join("odd.code"), full).unwrap();
    let o = isodual(p, &["--json", "check", "selfdual", "odd.code"]);
    assert_eq!(status(&o), 1);
    assert_eq!(json(&o)["verdict"], "refuted");

    let sd = r#"{"field":{"p":5,"k":1},"kind":"linear","n":2,"gen":[[1,2]]}"#;
    std::fs::write(p.join("sd.code"), sd).unwrap();
    assert_eq!(status(&isodual(p, &["check", "selfdual", "sd.code"])), 0);

    let a = r#"{"field":{"p":3,"k":1},"kind":"linear","n":3,"gen":[[1,1,0]]}"#;
    let b = r#"{"field":{"p":3,"k":1},"kind":"linear","n":3,"gen":[[0,1,1]]}"#;
    let c = r#"{"field":{"p":3,"k":1},"kind":"linear","n":3,"gen":[[1,1,1]]}"#;
    std::fs::write(p.join("a.code"), a).unwrap();
    std::fs::write(p.join("b.code"), b).unwrap();
    std::fs::write(p.join("c.code"), c).unwrap();
    let o = isodual(p, &["--json", "check", "equiv", "a.code", "b.code"]);
    assert_eq!(status(&o), 0);
    assert_eq!(json(&o)["witness"]["kind"], "permutation");
    assert_eq!(
        status(&isodual(p, &["check", "equiv", "a.code", "c.code"])),
        1
    );
}

#[test]
fn counts() {
    let d = TempDir::new().unwrap();
    let line = |args: &[&str]| {
        let o = isodual(d.path(), args);
        assert_eq!(status(&o), 0, "{args:?}");
        stdout(&o).lines().next().unwrap().to_string()
    };
    assert_eq!(
        line(&["count", "qc-cyclic", "--q", "3", "--m", "2", "--l", "2"]),
        "16"
    );
    assert_eq!(
        line(&["count", "equivalent", "--l", "3", "--alpha", "2"]),
        "9"
    );
    assert_eq!(
        line(&["count", "selfdual-exists", "--q", "3", "--l", "2"]),
        "no"
    );
    assert_eq!(
        line(&["count", "selfdual-exists", "--q", "5", "--l", "2"]),
        "yes"
    );
    assert_eq!(
        line(&[
            "count",
            "isodual-exists",
            "--q",
            "5",
            "--l",
            "2",
            "--m",
            "11"
        ]),
        "yes"
    );
    assert_eq!(
        line(&[
            "count",
            "isodual-exists",
            "--q",
            "5",
            "--l",
            "3",
            "--m",
            "2"
        ]),
        "no"
    );
    assert_eq!(
        status(&isodual(
            d.path(),
            &["count", "selfdual-exists", "--q", "5", "--l", "3"]
        )),
        2
    );
}

#[test]
fn l2_qc_construction() {
    let d = TempDir::new().unwrap();
    let p = d.path();
    let o = isodual(
        p,
        &[
            "construct",
            "l2-qc",
            "--q",
            "3",
            "--m",
            "7",
            "-o",
            "l2.code",
        ],
    );
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let f = read(p, "l2.code");
    assert_eq!((f["l"].as_u64(), f["m"].as_u64()), (Some(2), Some(7)));
    assert_eq!(status(&isodual(p, &["check", "isodual", "l2.code"])), 0);
}

#[test]
fn cubic_length_66() {
    let d = TempDir::new().unwrap();
    let p = d.path();
    let f5 = Field::prime(5).unwrap();
    let f1 = Poly::from_ints(&f5, &[4, 1, 1, 4, 2, 1]);
    let f2_neg = Poly::from_ints(&f5, &[4, -3, 1, -4, 4, -1]).make_monic();
    let g = Poly::from_ints(&f5, &[-1, 1]).mul(&f1).mul(&f2_neg);
    let c1 = CyclicCode::from_gpoly(&f5, 22, &g).unwrap();
    let f25 = Field::new(5, 2).unwrap();
    let c2 = CyclicCode::from_gpoly(&f25, 22, &Poly::new(&f25, g.coeffs().to_vec())).unwrap();
    std::fs::write(p.join("c1.code"), CodeFile::from_cyclic(&c1).to_json()).unwrap();
    std::fs::write(p.join("c2.code"), CodeFile::from_cyclic(&c2).to_json()).unwrap();
    let o = isodual(
        p,
        &[
            "construct",
            "cubic",
            "--q",
            "5",
            "--c1",
            "c1.code",
            "--c2",
            "c2.code",
            "-o",
            "c66.code",
        ],
    );
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let f = read(p, "c66.code");
    assert_eq!(
        (f["n"].as_u64(), f["l"].as_u64(), f["m"].as_u64()),
        (Some(66), Some(22), Some(3))
    );
    assert_eq!(f["meta"]["isodual"]["verdict"], "verified");
    let o = isodual(
        p,
        &[
            "construct",
            "cubic",
            "--q",
            "7",
            "--c1",
            "c1.code",
            "--c2",
            "c2.code",
        ],
    );
    assert_eq!(status(&o), 2);
}

#[test]
fn invalid_input_and_budget() {
    let d = TempDir::new().unwrap();
    let p = d.path();
    std::fs::write(p.join("bad.code"), "{").unwrap();
    assert_eq!(status(&isodual(p, &["check", "isodual", "bad.code"])), 2);
    assert_eq!(
        status(&isodual(p, &["check", "isodual", "missing.code"])),
        2
    );
    let modulus = r#"{"field":{"p":5,"k":2,"modulus":[2,4,1]},"kind":"linear","n":1,"gen":[[1]]}"#;
    std::fs::write(p.join("mod.code"), modulus).unwrap();
    assert_eq!(status(&isodual(p, &["check", "dual", "mod.code"])), 2);
    let zero = r#"{"field":{"p":3,"k":1},"kind":"linear","n":4,"gen":[]}"#;
    std::fs::write(p.join("zero.code"), zero).unwrap();
    assert_eq!(status(&isodual(p, &["minweight", "zero.code"])), 2);

    let f3 = Field::prime(3).unwrap();
    let g = Poly::from_ints(&f3, &[2, 1]).mul(&Poly::from_ints(&f3, &[1, -1, 1, -1, 1, -1, 1]));
    let c = CyclicCode::from_gpoly(&f3, 14, &g).unwrap();
    std::fs::write(p.join("g0.code"), CodeFile::from_cyclic(&c).to_json()).unwrap();
    assert_eq!(
        status(&isodual(p, &["--budget", "0", "minweight", "g0.code"])),
        3
    );
    assert_eq!(
        status(&isodual(
            p,
            &["construct", "l2-qc", "--q", "3", "--m", "7", "-o", "a", "b"]
        )),
        2
    );
}
