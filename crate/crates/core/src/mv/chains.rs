//! Inductive computations along the sphere and teardrop families.
//!
//! Each step feeds the previous step's `K₀` of the fixed-point algebra into
//! the collapsed sequence of the next square, and cross-checks the answer
//! against the sequence with `K₀(P) = ℤ^{E⁰}` and `∂[U] = −[P_v̄]`, whose
//! boundary is confirmed by the Milnor idempotent.

use std::sync::Arc;

use serde::Serialize;

use super::milnor::{boundary_class, milnor_idempotent, MilnorOutcome};
use super::sequence::{
    fix_labels, fixed_sequence_from_maps, identified_sequence, solve_fixed_k0, vertex_basis_k0, FixedK0,
    IdentifiedInput, SixTermSequence,
};
use super::MvError;
use crate::catalog::{lens, lens_section, sphere};
use crate::graph::{Graph, VertexSet};
use crate::intlin::FGAbelianGroup;
use crate::ktheory::at_u_one;
use crate::lpa::canonical::{canonical_homs, ideal_monomials_in, CanonicalHoms};
use crate::lpa::{parse_element, GenHom, Lpa, LpaElement};

#[derive(Clone, Debug)]
pub struct ChainStep {
    pub param: usize,
    pub graph: Graph,
    pub fixed: FixedK0,
    pub identified: SixTermSequence,
    pub exact: Vec<bool>,
    /// `K₀(C*(E)^{U(1)})` on the generators `[P_v]`, `v ∈ E⁰`.
    pub k0: FGAbelianGroup,
    pub milnor: MilnorOutcome,
}

/// The four maps of a square together with the pullback's two legs.
struct Square {
    rho1: GenHom,
    rho2: GenHom,
    sigma1: GenHom,
    sigma2: GenHom,
}

fn quotient(name: &str, src: &Arc<Lpa>, ids: &[String]) -> Result<GenHom, MvError> {
    let g = src.graph();
    let h = g.vertex_set(ids.iter().map(String::as_str)).map_err(|e| MvError::Trim(e.to_string()))?;
    let q = g.quotient_graph(&h).map_err(|e| MvError::Trim(e.to_string()))?;
    Ok(GenHom::by_identifiers(name, src, &Lpa::new(q), 1).verify()?)
}

fn step(
    param: usize,
    vbar: &str,
    prev: &FGAbelianGroup,
    sq: &Square,
    unitary_vertex: &str,
    milnor: MilnorOutcome,
) -> Result<ChainStep, MvError> {
    let a_graph = sq.sigma1.source().graph();
    if !prev.is_free() || prev.rank() != a_graph.vertex_count() {
        return Err(MvError::Refused(format!("previous K₀ {} is not free on the vertices of A", prev.pretty())));
    }
    let a = FGAbelianGroup::free_labeled(fix_labels(a_graph));
    let fixed = solve_fixed_k0(&fixed_sequence_from_maps(a, &sq.sigma1, &sq.sigma2)?)?;
    let FixedK0::Group { group, .. } = &fixed else {
        return Err(MvError::Refused("expected a finitely generated K₀".into()));
    };
    let identified = identified_sequence(&IdentifiedInput {
        vbar: vbar.to_string(),
        rho1: sq.rho1.clone(),
        rho2: sq.rho2.clone(),
        sigma1: sq.sigma1.clone(),
        sigma2: sq.sigma2.clone(),
        unitary_vertex: unitary_vertex.to_string(),
    })?;
    let exact = identified.exactness()?;
    if let Some(i) = exact.iter().position(|&b| !b) {
        return Err(MvError::Refused(format!("identified sequence is not exact at {}", identified.labels[i])));
    }
    let k0 = identified.groups[0].clone();
    if !group.is_isomorphic(&k0) {
        return Err(MvError::Refused(format!("solved K₀ {} differs from {}", group.pretty(), k0.pretty())));
    }
    let expected = format!("[P_{vbar}]");
    if milnor.neg_boundary_label() != expected {
        return Err(MvError::Milnor(format!("−∂[U] = {}, expected {expected}", milnor.neg_boundary_label())));
    }
    let graph = sq.rho1.source().graph().clone();
    Ok(ChainStep { param, graph, fixed, identified, exact, k0, milnor })
}

fn seed(g: &Graph) -> Result<FGAbelianGroup, MvError> {
    vertex_basis_k0(g, 4).map_err(|c| MvError::Refused(format!("seed K₀ is {}", c.label.pretty())))
}

fn sphere_square(n: usize) -> Result<(CanonicalHoms, Square), MvError> {
    let h = canonical_homs(&sphere(n), &format!("v{n}"))?;
    let sq = Square {
        rho1: h.pi1.clone(),
        rho2: at_u_one(&h.f, "f")?,
        sigma1: GenHom::by_identifiers("ι", &h.e_dprime, &h.e_dprime, 1).verify()?,
        sigma2: h.pi2.clone(),
    };
    Ok((h, sq))
}

fn milnor_on(sq: &Square, u: &LpaElement, c: &LpaElement) -> Result<MilnorOutcome, MvError> {
    let p = milnor_idempotent(&sq.sigma1, &sq.sigma2, u, c, &c.star())?;
    boundary_class(&p, &sq.rho1, &sq.rho2)
}

fn sphere_milnor_on(n: usize, h: &CanonicalHoms, sq: &Square) -> Result<MilnorOutcome, MvError> {
    let m = n - 1;
    let u = parse_element(&h.e_dprime, &format!("S[e{m}] + 1 - P[v{m}]"))?;
    let c = parse_element(&h.e_prime, &format!("S[e{m}] + S[e{m}_{n}] + 1 - P[v{m}] - P[v{n}]"))?;
    milnor_on(sq, &u, &c)
}

/// `−∂[U]` for the square of `sphere n` trimmed at `v{n}`, `n ≥ 1`.
pub fn sphere_milnor(n: usize) -> Result<MilnorOutcome, MvError> {
    if n == 0 {
        return Err(MvError::Missing("sphere 0 has no trim vertex".into()));
    }
    let (h, sq) = sphere_square(n)?;
    sphere_milnor_on(n, &h, &sq)
}

/// `K₀` of the fixed-point algebras of `sphere 1..=n`.
pub fn projective_chain(n: usize) -> Result<Vec<ChainStep>, MvError> {
    let mut prev = seed(&sphere(0))?;
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let (h, sq) = sphere_square(k)?;
        let milnor = sphere_milnor_on(k, &h, &sq)?;
        let s = step(k, &format!("v{k}"), &prev, &sq, &format!("v{}", k - 1), milnor)?;
        prev = s.k0.clone();
        out.push(s);
    }
    Ok(out)
}

/// The maps around `Q_l`: `χ₁: Q_l → lens(l−1)`, `χ₂: Q_l → T = Q_l/H`,
/// `g: lens(l−1) → circle`, `σ: T → circle`, with `H = {v1_0..v1_{l−2}}`.
struct TeardropMaps {
    q: Arc<Lpa>,
    chi1: GenHom,
    chi2: GenHom,
    g: GenHom,
    sigma: GenHom,
}

fn h_ids(l: usize) -> Vec<String> {
    (0..l - 1).map(|i| format!("v1_{i}")).collect()
}

fn teardrop_maps(l: usize) -> Result<TeardropMaps, MvError> {
    let q = Lpa::new(lens_section(l));
    let last = vec![format!("v1_{}", l - 1)];
    let chi1 = quotient("χ₁", &q, &last)?;
    let chi2 = quotient("χ₂", &q, &h_ids(l))?;
    let g = quotient("g", chi1.target(), &h_ids(l))?;
    let sigma = quotient("σ", chi2.target(), &last)?;
    if chi1.target().graph() != &lens(l - 1) {
        return Err(MvError::Refused("Q_l/{v1_{l−1}} differs from lens(l−1)".into()));
    }
    if g.target().graph() != &lens(0) || sigma.target().graph() != &lens(0) {
        return Err(MvError::Refused("the two quotients do not reach the circle".into()));
    }
    Ok(TeardropMaps { q, chi1, chi2, g, sigma })
}

fn teardrop_square(l: usize) -> Result<(TeardropMaps, Square), MvError> {
    let h = canonical_homs(&lens(l), &format!("v1_{}", l - 1))?;
    let t = teardrop_maps(l)?;
    if !Lpa::same_algebra(&h.e_prime, &t.q) {
        return Err(MvError::Refused("E′ differs from Q_l".into()));
    }
    let sq = Square {
        rho1: h.pi1.clone(),
        rho2: at_u_one(&h.f, "f")?.then(&t.chi2)?,
        sigma1: t.g.clone(),
        sigma2: t.sigma.clone(),
    };
    Ok((t, sq))
}

fn teardrop_milnor_on(l: usize, t: &TeardropMaps, sq: &Square) -> Result<MilnorOutcome, MvError> {
    let u = parse_element(t.sigma.target(), "S[e0_0]")?;
    let c = parse_element(t.chi2.target(), &format!("S[e0_0] + S[e01_{}]", l - 1))?;
    milnor_on(sq, &u, &c)
}

/// `−∂[U]` for the square of `lens l` over the circle, `l ≥ 1`.
pub fn teardrop_milnor(l: usize) -> Result<MilnorOutcome, MvError> {
    if l == 0 {
        return Err(MvError::Missing("lens 0 has no trim vertex".into()));
    }
    let (t, sq) = teardrop_square(l)?;
    teardrop_milnor_on(l, &t, &sq)
}

/// `K₀` of the fixed-point algebras of `lens 1..=l`.
pub fn teardrop_chain(l: usize) -> Result<Vec<ChainStep>, MvError> {
    let mut prev = seed(&lens(0))?;
    let mut out = Vec::with_capacity(l);
    for k in 1..=l {
        let (t, sq) = teardrop_square(k)?;
        let milnor = teardrop_milnor_on(k, &t, &sq)?;
        let s = step(k, &format!("v1_{}", k - 1), &prev, &sq, "v0_0", milnor)?;
        prev = s.k0.clone();
        out.push(s);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct QlpbCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Finite evidence that `C*(Q_l)` is the pullback of `lens(l−1)` and `T`
/// over the circle.
#[derive(Clone, Debug, Serialize)]
pub struct QlpbReport {
    pub l: usize,
    pub max_len: usize,
    pub checks: Vec<QlpbCheck>,
}

impl QlpbReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)).collect()
    }

    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(QlpbCheck { name: name.into(), pass, detail: detail.into() });
    }
}

pub fn verify_qlpb(l: usize, max_len: usize) -> QlpbReport {
    let mut r = QlpbReport { l, max_len, checks: Vec::new() };
    if l < 2 {
        r.push("parameter", false, "needs l ≥ 2");
        return r;
    }
    match teardrop_maps(l) {
        Ok(t) => {
            r.push("maps well defined", true, "χ₁, χ₂, g, σ");
            if let Err(e) = qlpb_checks(l, max_len, &t, &mut r) {
                r.push("evaluation", false, e.to_string());
            }
        }
        Err(e) => r.push("maps well defined", false, e.to_string()),
    }
    r
}

fn qlpb_checks(l: usize, max_len: usize, t: &TeardropMaps, r: &mut QlpbReport) -> Result<(), MvError> {
    let g = t.q.graph();
    let vl = format!("v1_{}", l - 1);
    let set = |ids: &[String]| -> Result<VertexSet, MvError> {
        g.vertex_set(ids.iter().map(String::as_str)).map_err(|e| MvError::Trim(e.to_string()))
    };
    let i_last = ideal_monomials_in(&t.q, &set(std::slice::from_ref(&vl))?, max_len)?;
    let i_h = ideal_monomials_in(&t.q, &set(&h_ids(l))?, max_len)?;

    // The two ideals are orthogonal, so they intersect trivially.
    let mut bad = None;
    'outer: for x in &i_last {
        let x = LpaElement::monomial(&t.q, x.clone());
        for y in &i_h {
            let y = LpaElement::monomial(&t.q, y.clone());
            if !(&x * &y).is_zero() || !(&y * &x).is_zero() {
                bad = Some(format!("{x} · {y}"));
                break 'outer;
            }
        }
    }
    let pairs = i_last.len() * i_h.len();
    r.push("I(v1_{l−1}) · I(H) = 0", bad.is_none(), bad.unwrap_or_else(|| format!("{pairs} pairs")));

    // χ₂ is injective on I(v1_{l−1}) and lands in the ideal of the same vertex.
    let tg = t.chi2.target().graph();
    let target_set = tg.vertex_set([vl.as_str()]).map_err(|e| MvError::Trim(e.to_string()))?;
    let mut bad = None;
    for m in &i_last {
        let x = LpaElement::monomial(&t.q, m.clone());
        let img = t.chi2.apply(&x)?;
        let in_ideal = img.terms().all(|(n, _)| target_set.contains(n.range(tg)));
        if img != x.reinterpret(t.chi2.target())? || !in_ideal {
            bad = Some(format!("{x} ↦ {img}"));
            break;
        }
    }
    r.push("χ₂ maps I(v1_{l−1}) onto its copy in T", bad.is_none(), bad.unwrap_or_else(|| format!("{} monomials", i_last.len())));

    // The square commutes on generators.
    let left = t.chi1.then(&t.g)?;
    let right = t.chi2.then(&t.sigma)?;
    let bad = (0..g.vertex_count())
        .map(|v| LpaElement::vertex(&t.q, v))
        .chain((0..g.edge_count()).map(|e| LpaElement::edge(&t.q, e)))
        .find_map(|x| match (left.apply(&x), right.apply(&x)) {
            (Ok(a), Ok(b)) if a == b => None,
            _ => Some(x.to_string()),
        });
    r.push("g∘χ₁ = σ∘χ₂", bad.is_none(), bad.unwrap_or_default());

    // The Toeplitz isometry lives in T, where v0_0 emits exactly two edges;
    // its lift to Q_l is the same sum.
    let text = format!("S[e0_0] + S[e01_{}]", l - 1);
    let s = parse_element(t.chi2.target(), &text)?;
    let lift = parse_element(&t.q, &text)?;
    let defect = &LpaElement::one(t.chi2.target()) - &(&s * &s.star());
    let p_last = parse_element(t.chi2.target(), &format!("P[{vl}]"))?;
    r.push("s isometry in T", s.is_isometry(), s.to_string());
    r.push("χ₂ lifts s", t.chi2.apply(&lift)? == s, lift.to_string());
    r.push("1 − ss* = P[v1_{l−1}]", defect == p_last, defect.to_string());
    let symbol = t.sigma.apply(&s)?;
    let ok = symbol == parse_element(t.sigma.target(), "S[e0_0]")?;
    r.push("σ(s) = S[e0_0]", ok, symbol.to_string());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_ranks_grow_by_one() {
        let c = projective_chain(3).unwrap();
        let ranks: Vec<String> = c.iter().map(|s| s.k0.pretty()).collect();
        assert_eq!(ranks, ["ℤ^2", "ℤ^3", "ℤ^4"]);
        assert!(c.iter().all(|s| s.exact.iter().all(|&b| b)));
    }

    #[test]
    fn teardrop_chain_matches_rank() {
        let c = teardrop_chain(3).unwrap();
        assert_eq!(c.last().unwrap().k0.pretty(), "ℤ^4");
    }

    #[test]
    fn milnor_boundaries() {
        assert_eq!(sphere_milnor(2).unwrap().neg_boundary_label(), "[P_v2]");
        assert_eq!(teardrop_milnor(2).unwrap().neg_boundary_label(), "[P_v1_1]");
        assert!(sphere_milnor(0).is_err());
    }

    #[test]
    fn qlpb_small() {
        let r = verify_qlpb(3, 3);
        assert!(r.passed(), "{:?}", r.failures());
        assert!(!verify_qlpb(1, 3).passed());
    }
}
