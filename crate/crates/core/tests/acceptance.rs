//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::cell::Cell;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed};
use trimgraph::catalog::{self, ball, cuntz, lens, lens_section, sphere, Params};
use trimgraph::ktheory::{
    bratteli_k0_colimit, distinguished_k1_unitary, fixed_point_bratteli, k_groups, one_minus_a_transpose,
    stationary_oracle_contains, ColimitData, ColimitLabel,
};
use trimgraph::lpa::canonical::canonical_homs;
use trimgraph::lpa::parse_element;
use trimgraph::mv::{self, AData, FixedK0};
use trimgraph::{trim, Graph, Lpa};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn named(name: &str, params: &[(&str, usize)]) -> Graph {
    let p: Params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    catalog::catalog_graph(name, &p).expect("catalog entry")
}

fn is_unit(v: &[BigInt]) -> bool {
    v.len() == 1 && v[0].abs().is_one()
}

fn k_pretty(g: &Graph) -> (String, String) {
    let k = k_groups(g);
    (k.k0.pretty(), k.k1.pretty())
}

fn unit_class(g: &Graph) -> Vec<BigInt> {
    let k = k_groups(g);
    (0..g.vertex_count()).fold(k.k0.zero(), |acc, v| {
        let c = k.vertex_class(v);
        k.k0.reduce(&acc.iter().zip(&c).map(|(a, b)| a + b).collect::<Vec<_>>())
    })
}

fn criterion_1() -> Outcome {
    let pair = |a: &str, b: &str| (a.to_string(), b.to_string());
    ensure(k_pretty(&cuntz()) == pair("0", "0"), || "O₂".into())?;
    ensure(k_pretty(&catalog::toeplitz()) == pair("ℤ", "0"), || "Toeplitz".into())?;
    ensure(k_pretty(&named("toeplitz-sink", &[])) == pair("ℤ^2", "0"), || "Q₂′".into())?;

    let g = named("cuntz-sink", &[]);
    ensure(k_pretty(&g) == pair("ℤ", "0"), || format!("Λ′: {:?}", k_pretty(&g)))?;
    let k = k_groups(&g);
    let (w, vbar) = (g.vertex("w").unwrap(), g.vertex("vbar").unwrap());
    let (cw, cv) = (k.vertex_class(w), k.vertex_class(vbar));
    ensure(is_unit(&cv), || format!("[P_vbar] = {cv:?} does not generate"))?;
    ensure(cw == vec![-&cv[0]], || format!("[P_w] = {cw:?}, expected −[P_vbar]"))?;

    for n in 0..=6 {
        ensure(k_pretty(&sphere(n)) == pair("ℤ", "ℤ"), || format!("sphere {n}: {:?}", k_pretty(&sphere(n))))?;
        ensure(is_unit(&unit_class(&sphere(n))), || format!("sphere {n}: [1] is not a generator"))?;
        ensure(k_pretty(&ball(n)) == pair("ℤ", "0"), || format!("ball {n}: {:?}", k_pretty(&ball(n))))?;
        ensure(is_unit(&unit_class(&ball(n))), || format!("ball {n}: [1] is not a generator"))?;
    }
    Ok("O₂, Toeplitz, Λ′, Q₂′, L_{2n+1} and Γ_{2n} for n ≤ 6".into())
}

fn criterion_2() -> Outcome {
    let check = |g: &Graph, v: &str, ep: &Graph, edp: &Graph, what: &str| {
        let t = trim(g, v).map_err(|e| format!("{what}: {e}"))?;
        ensure(&t.e_prime == ep && &t.e_dprime == edp, || format!("{what}: components differ"))
    };
    for n in 1..=6 {
        check(&sphere(n), &format!("v{n}"), &ball(n), &sphere(n - 1), &format!("sphere {n}"))?;
    }
    check(&named("cuntz-ext", &[]), "vbar", &named("cuntz-sink", &[]), &cuntz(), "Λ")?;
    for l in 1..=6 {
        check(&lens(l), &format!("v1_{}", l - 1), &lens_section(l), &lens(l - 1), &format!("lens {l}"))?;
    }
    Ok("13 trims, identifier-preserving equality".into())
}

fn trimmables() -> Vec<(&'static str, Vec<(&'static str, usize)>)> {
    let mut out = vec![("cuntz-ext", vec![]), ("toeplitz-ext", vec![])];
    for k in 1..=3 {
        out.extend([("sphere", vec![("n", k)]), ("projective", vec![("n", k)])]);
        out.extend([("lens", vec![("l", k)]), ("teardrop", vec![("l", k)])]);
    }
    out
}

fn params(p: &[(&str, usize)]) -> Params {
    p.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn criterion_3() -> Outcome {
    let list = trimmables();
    for (name, p) in &list {
        let p = params(p);
        let g = catalog::catalog_graph(name, &p).map_err(|e| e.to_string())?;
        let v = catalog::trim_vertex(name, &p).map_err(|e| e.to_string())?.ok_or("no trim vertex")?;
        let h = canonical_homs(&g, &v).map_err(|e| format!("{name}: {e}"))?;
        ensure(h.commutation_table().iter().all(|r| r.equal), || format!("{name} {p:?}: square"))?;
        ensure(h.f.check_well_defined(), || format!("{name} {p:?}: f"))?;
        let r = h.kernel_inclusion_check(3, 2).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{name} {p:?}: kernel inclusion"))?;
    }
    Ok(format!("{} entries (n, l ≤ 3), max_len 3, max_u_deg 2", list.len()))
}

/// Every `q ∈ ((1/d)ℤ)^r` with numerators in `[−k, k]`, `d ≤ 12`, as `(numerators, denom)`.
fn grid(r: usize, k: i64) -> Vec<(Vec<BigInt>, BigInt)> {
    let nums: Vec<Vec<i64>> = (0..r).fold(vec![vec![]], |acc, _| {
        acc.into_iter().flat_map(|p| (-k..=k).map(move |x| [p.clone(), vec![x]].concat())).collect()
    });
    let mut out = Vec::new();
    for d in 1..=12i64 {
        for n in &nums {
            let q: Vec<Ratio<BigInt>> = n.iter().map(|&x| Ratio::new(BigInt::from(x), BigInt::from(d))).collect();
            let denom = q.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            out.push((q.iter().map(|x| x.numer() * (&denom / x.denom())).collect(), denom));
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let solve = |name: &str, v: &str| -> Result<String, String> {
        let seq = mv::assemble_fixed_sequence(&named(name, &[]), v, AData::Auto { levels: 8 }).map_err(|e| e.to_string())?;
        match mv::solve_fixed_k0(&seq).map_err(|e| e.to_string())? {
            FixedK0::Colimit(l) => Ok(l.pretty()),
            FixedK0::Group { group, .. } => Ok(group.pretty()),
        }
    };
    let lambda = solve("cuntz-ext", "vbar")?;
    ensure(lambda == "ℤ ⊕ ℤ[1/2]", || format!("cuntz-ext: {lambda}"))?;
    let q2 = solve("toeplitz-ext", "v1_1")?;
    ensure(q2 == ColimitLabel::FreeCountable.pretty(), || format!("toeplitz-ext: {q2}"))?;

    let mut points = 0;
    for g in [cuntz(), named("cuntz-ext", &[])] {
        let c = bratteli_k0_colimit(&fixed_point_bratteli(&g, 8));
        let ColimitData::Stationary { rank, matrix } = &c.data else {
            return Err("expected a stationary diagram".into());
        };
        for (nums, d) in grid(*rank, 4) {
            let oracle = stationary_oracle_contains(matrix, &nums, &d, 12);
            let label = c.label_contains(&nums, &d).ok_or("no localized label")?;
            ensure(oracle == label, || format!("{} at {nums:?}/{d}: oracle {oracle}, label {label}", c.label))?;
            points += 1;
        }
    }
    Ok(format!("Λ ↦ ℤ ⊕ ℤ[1/2], Q₂ ↦ ⊕_ℕ ℤ; {points} grid points agree with ∪ B⁻ⁿℤ^r"))
}

fn criterion_5() -> Outcome {
    let check = |steps: Vec<mv::ChainStep>, name: &str, labels: &dyn Fn(usize) -> Vec<String>| {
        for s in &steps {
            let gens: Vec<String> = s.k0.generator_classes().into_iter().map(|(l, _)| l).collect();
            ensure(s.k0.is_free() && s.k0.rank() == s.param + 1, || format!("{name} {}: {}", s.param, s.k0.pretty()))?;
            ensure(gens == labels(s.param), || format!("{name} {}: generators {gens:?}", s.param))?;
            ensure(s.exact.iter().all(|&b| b), || format!("{name} {}: not exact", s.param))?;
        }
        Ok::<_, String>(())
    };
    let p = mv::projective_chain(6).map_err(|e| e.to_string())?;
    check(p, "projective", &|n| (0..=n).map(|i| format!("[P_v{i}]")).collect())?;
    let t = mv::teardrop_chain(6).map_err(|e| e.to_string())?;
    check(t, "teardrop", &|l| {
        std::iter::once("[P_v0_0]".to_string()).chain((0..l).map(|i| format!("[P_v1_{i}]"))).collect()
    })?;
    Ok("ℤ^{n+1} and ℤ^{l+1} on the [P_v] for n, l ≤ 6".into())
}

fn criterion_6() -> Outcome {
    let rest_zero = |o: &mv::MilnorOutcome| o.entries.iter().flatten().skip(1).all(|(_, b)| b == "0");
    for n in 1..=6 {
        let o = mv::sphere_milnor(n).map_err(|e| format!("sphere {n}: {e}"))?;
        let q = parse_element(&Lpa::new(ball(n)), &format!("1 - P[v{n}]")).unwrap().to_string();
        ensure(o.entries[0][0].1 == q, || format!("sphere {n}: top-left {}", o.entries[0][0].1))?;
        ensure(rest_zero(&o), || format!("sphere {n}: nonzero off-entries"))?;
        let want = format!("[P_v{n}]");
        ensure(o.neg_boundary_label() == want, || format!("sphere {n}: −∂[U] = {}", o.neg_boundary_label()))?;
    }
    for l in 1..=6 {
        let o = mv::teardrop_milnor(l).map_err(|e| format!("teardrop {l}: {e}"))?;
        let q = lens_section(l);
        let h = q.vertex_set((0..l - 1).map(|i| format!("v1_{i}")).collect::<Vec<_>>().iter().map(String::as_str)).unwrap();
        let t = Lpa::new(q.quotient_graph(&h).unwrap());
        let top = parse_element(&t, "P[v0_0]").unwrap().to_string();
        ensure(o.entries[0][0].1 == top, || format!("teardrop {l}: top-left {}", o.entries[0][0].1))?;
        ensure(rest_zero(&o), || format!("teardrop {l}: nonzero off-entries"))?;
        let want = format!("[P_v1_{}]", l - 1);
        ensure(o.neg_boundary_label() == want, || format!("teardrop {l}: −∂[u] = {}", o.neg_boundary_label()))?;
    }
    Ok("p_U entries and −∂[U] for n, l ≤ 6".into())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    for l in 2..=5 {
        let r = mv::verify_qlpb(l, 4);
        ensure(r.passed(), || format!("l = {l}: {}", r.failures().join("; ")))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!("l = 2..5 at max_len 4 in {t:.2?}"))
}

fn criterion_8() -> Outcome {
    use common::*;
    run(graph_and_words(1), |(g, ws)| prop_confluence(&g, &ws[0])).map_err(|e| format!("confluence: {e}"))?;
    run(lpa_input(), |(g, ws, cs)| prop_associative(&g, &ws, &cs)).map_err(|e| format!("associativity: {e}"))?;
    run(lpa_input(), |(g, ws, cs)| prop_involution(&g, &ws, &cs)).map_err(|e| format!("involution: {e}"))?;
    run(lpa_input(), |(g, ws, cs)| prop_gauge_additive(&g, &ws, &cs)).map_err(|e| format!("gauge: {e}"))?;
    run(matrix(), |m| prop_snf(&m)).map_err(|e| format!("SNF: {e}"))?;
    let exact = Cell::new(0u32);
    run(triple(), |t| {
        exact.set(exact.get() + u32::from(oracle_exact(&t)));
        prop_exactness(&t)
    })
    .map_err(|e| format!("exactness: {e}"))?;
    Ok(format!("6 properties × {CASES} cases; {} exact triples sampled", exact.get()))
}

fn criterion_9() -> Outcome {
    let mut count = 0;
    for (name, p) in trimmables().into_iter().chain((4..=6).flat_map(|k| [("sphere", vec![("n", k)]), ("lens", vec![("l", k)])])) {
        let p = params(&p);
        let g = catalog::catalog_graph(name, &p).map_err(|e| e.to_string())?;
        if !g.sinks().is_empty() {
            continue;
        }
        let v = catalog::trim_vertex(name, &p).map_err(|e| e.to_string())?.ok_or("no trim vertex")?;
        let gen = distinguished_k1_unitary(&g, &v).map_err(|e| format!("{name} {p:?}: {e}"))?;
        ensure(gen.unitary.is_unitary(), || format!("{name} {p:?}: U not unitary"))?;
        let mut e = vec![BigInt::from(0); g.vertex_count()];
        e[g.vertex(&v).unwrap()] = BigInt::one();
        let image = one_minus_a_transpose(&g).mul_vec(&e);
        ensure(image.iter().all(|x| x == &BigInt::from(0)), || format!("{name} {p:?}: e_v̄ ∉ ker(1 − Aᵗ)"))?;
        count += 1;
    }
    Ok(format!("{count} sink-free trimmables"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("K-group tables", criterion_1),
        ("trim pipeline", criterion_2),
        ("pullback verification", criterion_3),
        ("fixed-point K₀", criterion_4),
        ("projective and teardrop recursion", criterion_5),
        ("Milnor idempotents", criterion_6),
        ("Q_l pullback lemma", criterion_7),
        ("property suites", criterion_8),
        ("distinguished K₁ generator", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match r {
            Ok(detail) => println!("PASS {}  {name}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}  {name}: {why} [{t:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
