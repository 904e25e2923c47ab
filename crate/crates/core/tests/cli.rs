mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::data;

fn sdepth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdepth"))
        .args(args)
        .env_remove("SDEPTH_THREADS")
        .output()
        .expect("binary runs")
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn sdepth_of_m2_writes_a_certificate_next_to_the_module() {
    let dir = tempfile::tempdir().unwrap();
    let module = dir.path().join("m2.json");
    std::fs::copy(data("m2.json"), &module).unwrap();
    let out = sdepth(&["sdepth", arg(&module)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("sdepth = 1\n"), "{}", stdout(&out));
    let cert = dir.path().join("m2.cert.json");
    assert!(stdout(&out).contains(arg(&cert)));
    let v = sdepth(&["verify-cert", arg(&module), arg(&cert)]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn not_induced_exits_with_one() {
    let out = sdepth(&[
        "check",
        arg(&data("ideal_sum.json")),
        arg(&data("ideal_sum_dec.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(
        text.contains("verdict: not_induced") && text.contains("failing degree: (1,1)"),
        "{text}"
    );
}

#[test]
fn field_flag_flips_the_verdict() {
    let m = data("twisted.json");
    let d = data("twisted_dec.json");
    let f2 = sdepth(&["check", arg(&m), arg(&d), "--field", "F2"]);
    assert_eq!(f2.status.code(), Some(1), "{}", stdout(&f2));
    assert!(stdout(&f2).contains("reduced product zero: true"));
    let q = sdepth(&["check", arg(&m), arg(&d), "--field", "Q"]);
    assert_eq!(q.status.code(), Some(0), "{}", stdout(&q));
    let f5 = sdepth(&["--field", "F5", "check", arg(&m), arg(&d)]);
    assert_eq!(f5.status.code(), Some(0), "{}", stdout(&f5));
}

#[test]
fn certify_and_verify_in_separate_processes() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("f5.cert.json");
    let m = data("twisted.json");
    let c = sdepth(&[
        "certify",
        arg(&m),
        arg(&data("twisted_dec.json")),
        "--field",
        "F5",
        "--out",
        arg(&cert),
    ]);
    assert_eq!(c.status.code(), Some(0), "{}", stderr(&c));
    let v = sdepth(&["verify-cert", arg(&m), arg(&cert), "--field", "F5"]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));

    // zero every witness value
    let text = std::fs::read_to_string(&cert).unwrap();
    let zeroed: String = text
        .lines()
        .map(|l| match l.split_once("\": \"") {
            Some((k, _)) if l.trim_start().starts_with("\"Y[") => {
                let comma = if l.ends_with(',') { "," } else { "" };
                format!("{k}\": \"0\"{comma}")
            }
            _ => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n");
    let bad = dir.path().join("bad.cert.json");
    std::fs::write(&bad, zeroed).unwrap();
    let r = sdepth(&["verify-cert", arg(&m), arg(&bad), "--field", "F5"]);
    assert_eq!(r.status.code(), Some(1), "{}", stdout(&r));
    assert!(stdout(&r).contains("singular"));

    // a certificate over F5 does not apply over Q
    let q = sdepth(&["verify-cert", arg(&m), arg(&cert)]);
    assert_eq!(q.status.code(), Some(2));
}

#[test]
fn certify_refuses_over_f2() {
    let dir = tempfile::tempdir().unwrap();
    let out = sdepth(&[
        "certify",
        arg(&data("twisted.json")),
        arg(&data("twisted_dec.json")),
        "--field",
        "F2",
        "--out",
        arg(&dir.path().join("c.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("c.json").exists());
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let m = data("ideal_sum.json");
    let mut outputs = Vec::new();
    for (k, threads) in ["1", "1", "3"].iter().enumerate() {
        let cert = dir.path().join(format!("c{k}.json"));
        let out = sdepth(&[
            "sdepth",
            arg(&m),
            "--cert",
            arg(&cert),
            "--threads",
            threads,
            "--seed",
            "7",
        ]);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out).replace(arg(&cert), "CERT");
        outputs.push((text, std::fs::read(&cert).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn info_hseries_hdepth() {
    let info = sdepth(&["info", arg(&data("m6r9.json"))]);
    let text = stdout(&info);
    assert!(text.contains("ring: n = 6, field = Q"), "{text}");
    assert!(text.contains("total dimension on [0,g]: 639"), "{text}");
    assert!(text.contains("g-determined: yes"), "{text}");

    let hs = sdepth(&["hseries", arg(&data("m2.json"))]);
    assert_eq!(stdout(&hs), "t^(1,0) + t^(0,1) + t^(1,1)\n");
    let hd = sdepth(&["hdepth", arg(&data("m2.json"))]);
    assert!(stdout(&hd).starts_with("hdepth = 1\n"));

    // g too small for R/(X1^2): the presentation lies outside the box
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("q.json");
    std::fs::write(
        &m,
        r#"{"ring":{"n":1,"field":"Q"},"module":{"kind":"quotient_by_monomial_ideal","generators":[[2]]}}"#,
    )
    .unwrap();
    assert!(stdout(&sdepth(&["info", arg(&m)])).contains("g-determined: yes"));
    assert_eq!(
        sdepth(&["info", arg(&m), "--g", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn malformed_input_names_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("broken.json");
    std::fs::write(&m, "{\n  \"ring\": {\"n\": 2, \"field\": \"Q\"},\n  \"module\": {\"kind\": \"monomial_ideal\", \"generators\": [[1, 0],]}\n}\n")
        .unwrap();
    let out = sdepth(&["info", arg(&m)]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.contains("broken.json") && err.contains("line 3"),
        "{err}"
    );

    let missing = sdepth(&["info", arg(&dir.path().join("nope.json"))]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("nope.json"));
}

#[test]
fn polytope_export_and_solution_import() {
    let dir = tempfile::tempdir().unwrap();
    let m = data("m2.json");
    let sip = sdepth(&["export-polytope", arg(&m)]);
    assert_eq!(sip.status.code(), Some(0));
    let text = stdout(&sip);
    assert!(text.contains("var u[1,0;1] >= 0 integer"), "{text}");
    assert!(text.contains("relaxation: no"));

    let lp = dir.path().join("m2.lp");
    let out = sdepth(&[
        "export-polytope",
        arg(&m),
        "--max-subset",
        "1",
        "--out",
        arg(&lp),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lp_text = std::fs::read_to_string(&lp).unwrap();
    assert!(
        lp_text.contains("Minimize")
            && lp_text.contains("General")
            && lp_text.contains("relaxation: yes")
    );

    let depth2 = stdout(&sdepth(&[
        "export-polytope",
        arg(&m),
        "--depth",
        "2",
        "--hilbert-only",
    ]));
    assert!(!depth2.contains("u[1,0;1]") && depth2.contains("u[1,0;1,2]"));

    let sol = dir.path().join("m2.sol");
    std::fs::write(&sol, "u_1_0__1\t1\nu[0,1;1,2]\t1.0\n").unwrap();
    let dec = dir.path().join("m2_dec.json");
    let imp = sdepth(&["import-solution", arg(&m), arg(&sol), "--out", arg(&dec)]);
    assert_eq!(imp.status.code(), Some(0), "{}", stderr(&imp));
    let chk = sdepth(&["check", arg(&m), arg(&dec)]);
    assert_eq!(chk.status.code(), Some(0));

    // a Hilbert decomposition that is not induced
    let sol_sum = dir.path().join("ideal_sum.sol");
    std::fs::write(&sol_sum, "u[1,0;1,2]\t1\nu[0,1;1,2]\t1\n").unwrap();
    let imp_sum = sdepth(&[
        "import-solution",
        arg(&data("ideal_sum.json")),
        arg(&sol_sum),
    ]);
    assert_eq!(imp_sum.status.code(), Some(1));
    assert!(stderr(&imp_sum).contains("verdict: not_induced"));

    for bad in ["u[1,0;1]\t0.5\n", "u[7,7;1]\t1\n", "u[1,0;1]\t1\n"] {
        std::fs::write(&sol, bad).unwrap();
        let out = sdepth(&["import-solution", arg(&m), arg(&sol)]);
        assert_eq!(out.status.code(), Some(2), "{bad:?}: {}", stderr(&out));
    }
}

#[test]
fn zero_module_has_infinite_depth() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("zero.json");
    std::fs::write(
        &m,
        r#"{"ring":{"n":2,"field":"Q"},"g":[1,1],"module":{"kind":"direct_sum","summands":[]}}"#,
    )
    .unwrap();
    let out = sdepth(&["sdepth", arg(&m), "--cert", arg(&dir.path().join("z.json"))]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("sdepth = inf\n"));
    assert!(stdout(&sdepth(&["hdepth", arg(&m)])).starts_with("hdepth = inf\n"));
    let v = sdepth(&["verify-cert", arg(&m), arg(&dir.path().join("z.json"))]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}
