//! `trimgraph`: command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or parse error.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use trimgraph::catalog::{self, Params, ENTRIES};
use trimgraph::ktheory::{bratteli_k0_colimit, fixed_point_bratteli, k_groups};
use trimgraph::lpa::canonical::kernel_inclusion_check;
use trimgraph::mv::{self, AData, FixedK0};
use trimgraph::trim::{one_loop_extension, one_sink_extension};
use trimgraph::{check_trimmable, trim, Graph};

#[derive(Parser)]
#[command(name = "trimgraph", version, about = "Trimmable graph algebras: trims, K-theory, pullbacks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// A graph file or `catalog:<name>`.
    input: String,
    #[arg(long)]
    vertex: Option<String>,
    /// Catalog parameter `k=v`; repeatable.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    #[arg(long, default_value_t = 8)]
    levels: usize,
    #[arg(long = "max-len", default_value_t = 3)]
    max_len: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Clone)]
struct Extend {
    #[command(flatten)]
    common: Common,
    /// Vertices emitting a new edge into the new vertex; repeats give parallel edges.
    #[arg(long, value_delimiter = ',', required = true)]
    attach: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check (T1) and (T2) at `--vertex`.
    CheckTrim(Common),
    /// Print E′ and E″.
    Trim(Common),
    /// Add `--vertex` with a loop and edges from `--attach`.
    ExtendLoop(Extend),
    /// Add `--vertex` as a sink with edges from `--attach`.
    ExtendSink(Extend),
    /// K₀ and K₁ of the graph algebra.
    K(Common),
    /// K₀ of the gauge-invariant subalgebra.
    FixedK0(Common),
    /// Assemble and check the pullback square at `--vertex`.
    Pullback(Common),
    /// Milnor idempotent and boundary for `catalog:sphere` or `catalog:lens`.
    Milnor(Common),
    /// Pullback lemma evidence for the lens section `Q_l`.
    VerifyQlpb {
        l: usize,
        #[arg(long = "max-len", default_value_t = 3)]
        max_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Browse the named graphs.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Run every applicable check on catalog entries (all when none named).
    Verify {
        names: Vec<String>,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[arg(long, default_value_t = 8)]
        levels: usize,
        #[arg(long = "max-len", default_value_t = 3)]
        max_len: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List {
        #[arg(long)]
        json: bool,
    },
    Show {
        name: String,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[arg(long)]
        json: bool,
    },
}

/// A usage or input error; exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

struct Outcome {
    text: String,
    ok: bool,
}

fn parse_params(raw: &[String]) -> Result<Params, Usage> {
    raw.iter()
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| Usage(format!("`{p}`: expected k=v")))?;
            let v = v.parse().map_err(|_| Usage(format!("`{p}`: value must be a nonnegative integer")))?;
            Ok((k.to_string(), v))
        })
        .collect()
}

struct Input {
    graph: Graph,
    /// Catalog name and parameters, for catalog inputs.
    entry: Option<(String, Params)>,
    vertex: Option<String>,
}

fn load(c: &Common) -> Result<Input, Usage> {
    let params = parse_params(&c.params)?;
    if let Some(name) = c.input.strip_prefix("catalog:") {
        let params = if params.is_empty() { catalog::default_params(name)? } else { params };
        let graph = catalog::catalog_graph(name, &params)?;
        let vertex = c.vertex.clone().or(catalog::trim_vertex(name, &params)?);
        return Ok(Input { graph, entry: Some((name.to_string(), params)), vertex });
    }
    if !params.is_empty() {
        return Err(Usage("--param applies to catalog inputs only".into()));
    }
    let text = std::fs::read_to_string(&c.input).map_err(|e| Usage(format!("{}: {e}", c.input)))?;
    Ok(Input { graph: Graph::parse(&text)?, entry: None, vertex: c.vertex.clone() })
}

fn need_vertex(i: &Input) -> Result<&str, Usage> {
    i.vertex.as_deref().ok_or_else(|| Usage("--vertex is required".into()))
}

fn emit(json: bool, value: Value, human: String, ok: bool) -> Outcome {
    let text = if json { serde_json::to_string_pretty(&value).expect("values serialize") } else { human };
    Outcome { text, ok }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn run(cmd: Cmd) -> Result<Outcome, Usage> {
    match cmd {
        Cmd::CheckTrim(c) => {
            let i = load(&c)?;
            let cert = check_trimmable(&i.graph, need_vertex(&i)?)?;
            let mut h = format!("vertex {}: {}\n", cert.vbar, if cert.trimmable() { "trimmable" } else { "not trimmable" });
            for w in &cert.witnesses {
                let _ = writeln!(h, "  {w}");
            }
            Ok(emit(c.json, to_value(&cert), h, cert.trimmable()))
        }
        Cmd::Trim(c) => {
            let i = load(&c)?;
            let v = need_vertex(&i)?;
            let cert = check_trimmable(&i.graph, v)?;
            if !cert.trimmable() {
                let w: Vec<String> = cert.witnesses.iter().map(ToString::to_string).collect();
                let h = format!("not trimmable at {v}\n  {}\n", w.join("\n  "));
                return Ok(emit(c.json, json!({ "certificate": cert }), h, false));
            }
            let t = trim(&i.graph, v)?;
            let value = json!({
                "certificate": cert,
                "e_prime": t.e_prime.to_object(),
                "e_dprime": t.e_dprime.to_object(),
            });
            let h = format!("# E′\n{}# E″\n{}", t.e_prime.to_text(), t.e_dprime.to_text());
            Ok(emit(c.json, value, h, true))
        }
        Cmd::ExtendLoop(x) | Cmd::ExtendSink(x) if x.attach.iter().any(String::is_empty) => {
            Err(Usage("empty vertex in --attach".into()))
        }
        Cmd::ExtendLoop(x) => extend(x, true),
        Cmd::ExtendSink(x) => extend(x, false),
        Cmd::K(c) => {
            let i = load(&c)?;
            let r = k_groups(&i.graph).report();
            let h = format!("K₀ = {}\nK₁ = {}\n", r.k0.pretty, r.k1.pretty);
            let ok = match &i.entry {
                Some((name, p)) => {
                    let e = catalog::expected(name, p)?;
                    e.k0 == r.k0.pretty && e.k1 == r.k1.pretty
                }
                None => true,
            };
            Ok(emit(c.json, to_value(&r), h, ok))
        }
        Cmd::FixedK0(c) => fixed_k0(&c),
        Cmd::Pullback(c) => {
            let i = load(&c)?;
            let v = need_vertex(&i)?;
            let d = mv::assemble_pullback(&i.graph, v).map_err(|e| Usage(e.to_string()))?;
            let kernel = kernel_inclusion_check(&i.graph, v, c.max_len, 2)?;
            let report = d.report();
            let ok = report.commutes && report.legs_surjective && kernel.passed();
            let mut h = format!("{} → {}, {} → {}\n", report.corners[0], report.corners[1], report.corners[2], report.corners[3]);
            for r in &report.table {
                let _ = writeln!(h, "  {}: {} | {}", r.generator, r.via_quotient, r.via_f);
            }
            let _ = writeln!(h, "commutes: {}", report.commutes);
            let _ = writeln!(h, "kernel inclusion (max_len {}, max_u_deg 2): {}", c.max_len, kernel.passed());
            Ok(emit(c.json, json!({ "pullback": report, "kernel": kernel }), h, ok))
        }
        Cmd::Milnor(c) => {
            let i = load(&c)?;
            let Some((name, p)) = &i.entry else {
                return Err(Usage("milnor needs catalog:sphere or catalog:lens".into()));
            };
            let (r, expected) = match name.as_str() {
                "sphere" | "projective" => {
                    let n = p["n"];
                    (mv::sphere_milnor(n), format!("[P_v{n}]"))
                }
                "lens" | "teardrop" => {
                    let l = p["l"];
                    (mv::teardrop_milnor(l), format!("[P_v1_{}]", l - 1))
                }
                _ => return Err(Usage(format!("no Milnor data for `{name}`"))),
            };
            match r {
                Ok(o) => {
                    let label = o.neg_boundary_label();
                    let mut h = String::new();
                    for row in &o.entries {
                        let cells: Vec<String> = row.iter().map(|(a, b)| format!("({a}, {b})")).collect();
                        let _ = writeln!(h, "  {}", cells.join("  "));
                    }
                    let _ = writeln!(h, "−∂[U] = {label}");
                    Ok(emit(c.json, to_value(&o), h, label == expected))
                }
                Err(e) => Ok(emit(c.json, json!({ "error": e.to_string() }), format!("{e}\n"), false)),
            }
        }
        Cmd::VerifyQlpb { l, max_len, json } => {
            let r = mv::verify_qlpb(l, max_len);
            let mut h = String::new();
            for c in &r.checks {
                let _ = writeln!(h, "{} {}  {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let ok = r.passed();
            Ok(emit(json, to_value(&r), h, ok))
        }
        Cmd::Catalog { cmd: CatalogCmd::List { json } } => {
            let rows: Vec<Value> = ENTRIES
                .iter()
                .map(|e| json!({ "name": e.name, "param": e.param.map(|(p, min)| json!({ "name": p, "min": min })), "summary": e.summary }))
                .collect();
            let mut h = String::new();
            for e in ENTRIES {
                let p = e.param.map(|(p, min)| format!("{p}≥{min}")).unwrap_or_default();
                let _ = writeln!(h, "{:<14} {:<5} {}", e.name, p, e.summary);
            }
            Ok(emit(json, Value::Array(rows), h, true))
        }
        Cmd::Catalog { cmd: CatalogCmd::Show { name, params, json } } => {
            let p = parse_params(&params)?;
            let p = if p.is_empty() { catalog::default_params(&name)? } else { p };
            let g = catalog::catalog_graph(&name, &p)?;
            let e = catalog::expected(&name, &p)?;
            let v = catalog::trim_vertex(&name, &p)?;
            let value = json!({ "name": name, "params": p, "graph": g.to_object(), "trim_vertex": v, "expected": e });
            let h = format!(
                "{}\n# K₀ = {}, K₁ = {}, fixed K₀ = {}\n# trim vertex: {}\n",
                g.to_text().trim_end(),
                e.k0,
                e.k1,
                e.fixed_k0,
                v.as_deref().unwrap_or("none")
            );
            Ok(emit(json, value, h, true))
        }
        Cmd::Verify { names, params, levels, max_len, json } => {
            let p = parse_params(&params)?;
            if !p.is_empty() && names.len() != 1 {
                return Err(Usage("--param needs exactly one entry name".into()));
            }
            let names: Vec<String> =
                if names.is_empty() { ENTRIES.iter().map(|e| e.name.to_string()).collect() } else { names };
            let mut reports = Vec::new();
            for n in &names {
                let p = if p.is_empty() { catalog::default_params(n)? } else { p.clone() };
                reports.push(catalog::run_example(n, &p, max_len, levels)?);
            }
            let mut h = String::new();
            for r in &reports {
                let ps: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(h, "{} {}: {}", r.name, ps.join(" "), if r.passed() { "PASS" } else { "FAIL" });
                for v in &r.verdicts {
                    let mark = if v.pass { "ok  " } else { "FAIL" };
                    let _ = writeln!(h, "  {mark} {:<36} expected {}, got {}", v.check, v.expected, v.actual);
                }
            }
            let ok = reports.iter().all(|r| r.passed());
            Ok(emit(json, to_value(&reports), h, ok))
        }
    }
}

fn extend(x: Extend, with_loop: bool) -> Result<Outcome, Usage> {
    let i = load(&x.common)?;
    let v = need_vertex(&i)?;
    let attach: Vec<&str> = x.attach.iter().map(String::as_str).collect();
    let g = if with_loop {
        one_loop_extension(&i.graph, v, &attach)?
    } else {
        one_sink_extension(&i.graph, v, &attach)?
    };
    Ok(emit(x.common.json, to_value(&g.to_object()), g.to_text(), true))
}

fn fixed_k0(c: &Common) -> Result<Outcome, Usage> {
    let i = load(c)?;
    let chain = |steps: Result<Vec<mv::ChainStep>, mv::MvError>| -> Result<Value, Usage> {
        let steps = steps.map_err(|e| Usage(e.to_string()))?;
        let last = steps.last().map(|s| s.k0.pretty()).unwrap_or_else(|| "ℤ".into());
        let gens: Vec<String> = steps.last().map(|s| s.k0.generator_classes().into_iter().map(|(l, _)| l).collect()).unwrap_or_default();
        Ok(json!({ "method": "chain", "label": last, "generators": gens }))
    };
    let value = match (&i.entry, &i.vertex) {
        (Some((name, p)), _) if name == "projective" => chain(mv::projective_chain(p["n"]))?,
        (Some((name, p)), _) if name == "teardrop" => chain(mv::teardrop_chain(p["l"]))?,
        (_, Some(v)) => {
            let seq = mv::assemble_fixed_sequence(&i.graph, v, AData::Auto { levels: c.levels }).map_err(|e| Usage(e.to_string()))?;
            match mv::solve_fixed_k0(&seq) {
                Ok(FixedK0::Group { group, sub, ker }) => json!({
                    "method": "sequence", "vbar": v, "label": group.pretty(), "sub": sub.pretty(), "ker": ker.pretty(),
                }),
                Ok(FixedK0::Colimit(l)) => json!({ "method": "sequence", "vbar": v, "label": l.pretty() }),
                Err(e) => json!({ "method": "sequence", "vbar": v, "error": e.to_string() }),
            }
        }
        (_, None) => {
            let b = fixed_point_bratteli(&i.graph, c.levels);
            json!({ "method": "bratteli", "levels": c.levels, "label": bratteli_k0_colimit(&b).report().label })
        }
    };
    let label = value.get("label").and_then(Value::as_str).map(str::to_string);
    let ok = match (&label, &i.entry) {
        (None, _) => false,
        (Some(l), Some((name, p))) => *l == catalog::expected(name, p)?.fixed_k0,
        (Some(_), None) => true,
    };
    let h = match &label {
        Some(l) => format!("K₀(fixed) = {l}\n"),
        None => format!("{}\n", value["error"].as_str().unwrap_or("no label")),
    };
    Ok(emit(c.json, value, h, ok))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(o) => {
            print!("{}", o.text);
            if !o.text.ends_with('\n') {
                println!();
            }
            ExitCode::from(if o.ok { 0 } else { 1 })
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
