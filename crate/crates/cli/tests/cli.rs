use std::process::{Command, Output};

use trimgraph::Graph;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trimgraph")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn temp_graph(name: &str, text: &str) -> std::path::PathBuf {
    let p = std::env::temp_dir().join(format!("trimgraph-{}-{name}.graph", std::process::id()));
    std::fs::write(&p, text).expect("temp dir is writable");
    p
}

#[test]
fn k_of_sphere_two() {
    let o = run(&["k", "catalog:sphere", "--param", "n=2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "K₀ = ℤ\nK₁ = ℤ\n");
}

#[test]
fn verify_cuntz_ext_passes() {
    assert_eq!(run(&["verify", "cuntz-ext"]).status.code(), Some(0));
}

#[test]
fn cuntz_fails_t1_with_witness() {
    let p = temp_graph("o2", "vertex w\nedge a w w\nedge b w w\n");
    let o = run(&["check-trim", p.to_str().unwrap(), "--vertex", "w"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(T1)"), "{}", stdout(&o));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["k", "catalog:nothing"]).status.code(), Some(2));
    assert_eq!(run(&["k", "catalog:sphere", "--param", "n"]).status.code(), Some(2));
    assert_eq!(run(&["trim", "catalog:cuntz"]).status.code(), Some(2));
    let p = temp_graph("bad", "vertex v\nedge e v nowhere\n");
    assert_eq!(run(&["k", p.to_str().unwrap()]).status.code(), Some(2));
    let p = temp_graph("junk", "{ not json");
    assert_eq!(run(&["k", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn trim_output_reparses() {
    let o = run(&["trim", "catalog:sphere", "--param", "n=3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let e_prime = Graph::from_json(&v["e_prime"].to_string()).unwrap();
    let e_dprime = Graph::from_json(&v["e_dprime"].to_string()).unwrap();
    assert_eq!(e_prime, trimgraph::catalog::ball(3));
    assert_eq!(e_dprime, trimgraph::catalog::sphere(2));

    let text = stdout(&run(&["trim", "catalog:cuntz-ext"]));
    let (first, second) = text.split_once("# E″\n").unwrap();
    assert_eq!(Graph::parse(first).unwrap(), trimgraph::catalog::catalog_graph("cuntz-sink", &Default::default()).unwrap());
    assert_eq!(Graph::parse(second).unwrap(), trimgraph::catalog::cuntz());
}

#[test]
fn json_is_deterministic() {
    for args in [
        &["verify", "toeplitz-ext", "--json"][..],
        &["pullback", "catalog:lens", "--param", "l=2", "--json"],
        &["milnor", "catalog:sphere", "--param", "n=2", "--json"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn extension_then_trim_round_trip() {
    let p = temp_graph("toeplitz", &trimgraph::catalog::toeplitz().to_text());
    let o = run(&["extend-loop", p.to_str().unwrap(), "--vertex", "v1_1", "--attach", "v0_0"]);
    assert_eq!(o.status.code(), Some(0));
    let ext = temp_graph("toeplitz-ext", &stdout(&o));
    let o = run(&["check-trim", ext.to_str().unwrap(), "--vertex", "v1_1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn catalog_verbs() {
    let o = run(&["catalog", "list"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), trimgraph::catalog::ENTRIES.len());
    let o = run(&["catalog", "show", "lens", "--param", "l=2"]);
    assert_eq!(Graph::parse(&stdout(&o)).unwrap(), trimgraph::catalog::lens(2));
}

#[test]
fn fixed_k0_and_qlpb() {
    let o = run(&["fixed-k0", "catalog:projective", "--param", "n=3"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "K₀(fixed) = ℤ^4\n".to_string()));
    assert_eq!(run(&["verify-qlpb", "4"]).status.code(), Some(0));
    assert_eq!(run(&["verify-qlpb", "1"]).status.code(), Some(1));
}
