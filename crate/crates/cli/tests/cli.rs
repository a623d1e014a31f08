use std::io::Write;
use std::process::{Command, Output};

use prio_args::fixtures;
use prio_args::format::serialise_pdt;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prio-args"))
}

fn theory_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str], file: Option<&tempfile::NamedTempFile>) -> Output {
    let mut c = bin();
    c.args(args);
    if let Some(f) = file {
        c.arg(f.path());
    }
    c.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_passes_on_penguin() {
    let f = theory_file(&serialise_pdt(&fixtures::penguin()));
    let o = run(&["check"], Some(&f));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("ok ")));
}

#[test]
fn input_errors_exit_2() {
    let reflexive = theory_file("atoms a\ndefault d1: true => a\nprio d1 < d1\n");
    let o = run(&["check"], Some(&reflexive));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("reflexive"));

    let syntax = theory_file("atoms a\nfact a &\n");
    let o = run(&["extensions"], Some(&syntax));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 9"));

    let unknown_atom = theory_file("atoms a\nfact b\n");
    assert_eq!(run(&["export"], Some(&unknown_atom)).status.code(), Some(2));

    let o = bin().args(["check", "/nonexistent/theory.pdt"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn capacity_exits_3() {
    let f = theory_file(&serialise_pdt(&fixtures::penguin()));
    let o = run(&["--max-arguments", "2", "check"], Some(&f));
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap of 2"));

    let o = run(&["--max-linearisations", "1", "extensions"], Some(&f));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn extensions_answer_queries() {
    let mut text = serialise_pdt(&fixtures::penguin());
    text.push_str("query a\nquery b\n");
    let f = theory_file(&text);
    let o = run(&["extensions"], Some(&f));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("default-logic extensions: 2"), "{out}");
    assert!(out.contains("stable extensions (3 arguments in total): 2"), "{out}");
    assert!(out.contains("query a: sceptical default logic yes, all stable extensions yes"));
    assert!(out.contains("query b: sceptical default logic no, all stable extensions no"));

    let o = run(&["extensions", "--semantics", "grounded"], Some(&f));
    assert!(stdout(&o).contains("grounded extensions (3 arguments in total): 1"));
}

#[test]
fn export_dot_four_arguments() {
    let f = theory_file(&serialise_pdt(&fixtures::four_arguments()));
    let out = stdout(&run(&["export"], Some(&f)));
    let solid = out.lines().filter(|l| l.contains("->") && !l.contains("dashed")).count();
    let dashed = out.lines().filter(|l| l.contains("dashed")).count();
    // Three arguments for b, two for ~b, each pair attacking both ways.
    assert_eq!((solid, dashed), (4, 4), "{out}");
    assert!(out.contains("a0 -> a3;"));
    assert!(out.contains("a3 -> a0 [style=dashed];"));
    assert!(out.contains("[label=\"a5: ~b | {r4, r5}\"]"));
}

#[test]
fn export_json() {
    let f = theory_file(&serialise_pdt(&fixtures::penguin()));
    let out = stdout(&run(&["export", "--format", "json"], Some(&f)));
    assert!(out.ends_with("}\n"));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["arguments"].as_array().unwrap().len(), 3);
    assert_eq!(v["attacks"].as_array().unwrap().len(), 2);
    assert_eq!(v["defeats"].as_array().unwrap().len(), 2);
    assert_eq!(v["arguments"][2]["children"], serde_json::json!(["a0"]));
    assert_eq!(v["structure_order"], serde_json::json!([["d2", "d1"]]));

    let empty = theory_file("atoms: a\n");
    let v: serde_json::Value = serde_json::from_str(&stdout(&run(&["export", "--format", "json"], Some(&empty)))).unwrap();
    assert_eq!(v["attacks"], serde_json::json!([]));
    assert_eq!(v["defeats"], serde_json::json!([]));
    let dot = stdout(&run(&["export"], Some(&empty)));
    assert!(!dot.contains("->"));
}

#[test]
fn random_is_deterministic_and_valid() {
    let gen = |seed: &str| stdout(&bin().args(["--seed", seed, "random", "--defaults", "5", "--atoms", "3"]).output().unwrap());
    assert_eq!(gen("7"), gen("7"));
    assert_ne!(gen("7"), gen("8"));
    let total = stdout(&bin().args(["random", "--defaults", "4", "--total"]).output().unwrap());
    assert_eq!(total.lines().filter(|l| l.starts_with("prio ")).count(), 3);
    let f = theory_file(&gen("7"));
    assert_eq!(run(&["extensions"], Some(&f)).status.code(), Some(0));
    assert_eq!(bin().args(["random", "--density", "2"]).output().unwrap().status.code(), Some(2));
}

#[test]
fn random_partial_theories_pass_check() {
    for seed in 0..100 {
        let text = stdout(&bin().args(["--seed", &seed.to_string(), "random", "--defaults", "5", "--atoms", "5"]).output().unwrap());
        let f = theory_file(&text);
        let o = run(&["check"], Some(&f));
        assert_eq!(o.status.code(), Some(0), "seed {seed}\n{text}\n{}", stdout(&o));
    }
}

#[test]
fn sp_table_covers_all_penguin_priorities() {
    let out = stdout(&bin().args(["sp", "--table"]).output().unwrap());
    assert!(out.starts_with("19 priorities, 6 distinct structure orders\n"), "{out}");
    assert!(out.contains("d3 < d2 < d1  <=  {d3 < d1, d3 < d2}; d3 < d1 < d2; d3 < d2 < d1"));
    let four = theory_file(&serialise_pdt(&fixtures::four_arguments()));
    let o = run(&["sp", "--table"], Some(&four));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sp_lists_sequences() {
    let f = theory_file(&serialise_pdt(&fixtures::penguin()));
    let out = stdout(&run(&["sp"], Some(&f)));
    assert!(out.contains("  d2 d1 d3\n  d3 d2 d1\n"), "{out}");
    assert!(out.ends_with("structure order: {d2 < d1}\n"));
}
