//! End-to-end runs of the `scoh` binary: reports and exit codes.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn scoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scoh"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn descriptor_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scoh-e2e-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::File::create(&path)
        .unwrap()
        .write_all(text.as_bytes())
        .unwrap();
    path
}

fn machine_lines(out: &str) -> Vec<&str> {
    out.split("# machine\n")
        .nth(1)
        .unwrap_or("")
        .lines()
        .collect()
}

#[test]
fn chain_on_z8() {
    let f = descriptor_file("z8", "torsion p=2 exps=3 tail=zero\n");
    let o = scoh(&["chain", f.to_str().unwrap(), "--matrix", "[[2]]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(machine_lines(&stdout(&o)), ["chain=8,4,2,1,1", "stab=3"]);
}

#[test]
fn chain_rejects_bad_matrix() {
    let f = descriptor_file("z4z2", "torsion p=2 exps=2,1 tail=zero\n");
    let o = scoh(&["chain", f.to_str().unwrap(), "--matrix", "[[2,1],[0,0]]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_exit_codes() {
    let yes = descriptor_file(
        "yes",
        "sum { torsion p=3 exps=1,1 tail=zero } { divisible r0=1 rp=const:0 }\n",
    );
    let o = scoh(&["classify", yes.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let m = machine_lines(&stdout(&o)).join("\n");
    assert!(m.contains("verdict.group=yes"), "{m}");
    assert!(m.contains("rule.0="), "{m}");

    let no = descriptor_file("no", "torsion tail=linear\n");
    let o = scoh(&["classify", no.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict.group=no"));

    let open = descriptor_file(
        "open",
        "sum { spring primes=all exps=linear }\n    { spring primes=all exps=linear }\n",
    );
    let o = scoh(&["classify", open.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("verdict.group=unknown"));
}

#[test]
fn parse_errors_carry_location() {
    let bad = descriptor_file("bad", "torsion\n  p=6 exps=1 tail=zero\n");
    let o = scoh(&["classify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":2:3: 6 is not prime"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(scoh(&["bogus"]).status.code(), Some(2));
    assert_eq!(scoh(&["classify"]).status.code(), Some(2));
    assert_eq!(
        scoh(&["oracle", "--max-card", "8", "--primes", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(scoh(&["example", "ex9"]).status.code(), Some(2));
}

#[test]
fn examples_match() {
    for id in ["ex0", "ex1", "ex3"] {
        let o = scoh(&["example", id]);
        assert_eq!(o.status.code(), Some(0), "{id}");
        let out = stdout(&o);
        assert!(out.contains("match=true"), "{out}");
        assert!(!out.contains("MISMATCH"));
    }
}

#[test]
fn spstab_reports_closed_form() {
    let f = descriptor_file("ex1", "spring primes=all exps=linear\n");
    let o = scoh(&["spstab", f.to_str().unwrap(), "--alpha", "q=13"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        machine_lines(&stdout(&o)),
        ["case=eventual-automorphism", "index=6", "step.6=6"]
    );
    let o = scoh(&["spstab", f.to_str().unwrap(), "--alpha", "q=0 c3=25"]);
    assert_eq!(
        machine_lines(&stdout(&o)),
        ["case=torsion-image", "index=2", "step.3=2"]
    );
}

#[test]
fn oracle_sweep_up_to_32() {
    let o = scoh(&["oracle", "--max-card", "32", "--primes", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("groups=18 violations=0 failures=0"));
}

#[test]
fn reports_are_deterministic() {
    let a = scoh(&[
        "oracle",
        "--max-card",
        "16",
        "--primes",
        "2,3",
        "--sequential",
    ]);
    let b = scoh(&[
        "oracle",
        "--max-card",
        "16",
        "--primes",
        "2,3",
        "--workers",
        "3",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let f = descriptor_file(
        "det",
        "sum { product-sp tail=const:1x1 } { torsion primes=odd-positions tail=const:2x1 }",
    );
    assert_eq!(
        scoh(&["classify", f.to_str().unwrap()]).stdout,
        scoh(&["classify", f.to_str().unwrap()]).stdout
    );
}
