//! The homomorphisms of the trim pullback square
//!
//! ```text
//!            C*(E)
//!       π₁ ↙       ↘ f
//!   C*(E″)          C*(E′)⊗C(S¹)
//!       δ ↘       ↙ π₂⊗id
//!        C*(E″)⊗C(S¹)
//! ```
//!
//! and the bounded checks that it commutes and that `ker(π₂⊗id) ⊆ f(ker π₁)`.

use std::sync::Arc;

use serde::Serialize;

use super::algebra::{generators, Lpa, LpaElement, Monomial};
use super::hom::GenHom;
use super::laurent::Laurent;
use super::LpaError;
use crate::graph::{Graph, VertexSet};
use crate::trim::{trim, trim_data, TrimCertificate};

/// Normal monomials `S_x S_y*` with `|x|, |y| ≤ max_len` whose common range
/// lies in the saturation of `h`, sorted.
pub fn ideal_monomials(g: &Graph, h: &VertexSet, max_len: usize) -> Result<Vec<Monomial>, LpaError> {
    let lpa = Lpa::new(g.clone());
    ideal_monomials_in(&lpa, h, max_len)
}

pub fn ideal_monomials_in(lpa: &Arc<Lpa>, h: &VertexSet, max_len: usize) -> Result<Vec<Monomial>, LpaError> {
    let g = lpa.graph();
    let sat = g.saturate(h).map_err(|e| LpaError::Hom(e.to_string()))?;
    let paths = g.enumerate_paths(max_len, Some(&sat));
    let mut out = Vec::new();
    for x in &paths {
        for y in &paths {
            let m = Monomial { x: x.clone(), y: y.clone() };
            if x.range(g) == y.range(g) && lpa.is_normal(&m) {
                out.push(m);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `δ`: `S_e ↦ u S_e`, vertices fixed.
pub fn gauge_coaction(name: &str, lpa: &Arc<Lpa>) -> GenHom {
    let g = lpa.graph();
    let vertices = (0..g.vertex_count()).map(|v| LpaElement::vertex(lpa, v)).collect();
    let edges = (0..g.edge_count())
        .map(|e| LpaElement::edge(lpa, e).scale(&Laurent::u_pow(1)))
        .collect();
    GenHom::new(name, lpa, lpa, vertices, edges, 1).expect("images live in the same algebra")
}

/// `S_ē ↦ t·P_v̄` and `S_e ↦ t·S_e` otherwise, from `C*(E)` into `C*(E′)`,
/// where `t = u` for `f` and `t = 1` for its fixed-point restriction.
pub fn loop_collapse(name: &str, e: &Arc<Lpa>, e_prime: &Arc<Lpa>, vbar: usize, ebar: usize, with_u: bool) -> GenHom {
    let g = e.graph();
    let t = if with_u { Laurent::u_pow(1) } else { Laurent::one() };
    let target = e_prime.graph();
    let vertices = (0..g.vertex_count()).map(|v| LpaElement::vertex(e_prime, v)).collect();
    let edges = (0..g.edge_count())
        .map(|i| {
            if i == ebar {
                LpaElement::vertex(e_prime, vbar).scale(&t)
            } else {
                let j = target.find_edge(g.edge_id(i)).expect("E′ keeps every edge but ē");
                LpaElement::edge(e_prime, j).scale(&t)
            }
        })
        .collect();
    GenHom::new(name, e, e_prime, vertices, edges, 1).expect("images live in E′")
}

/// All maps of the square, verified.
#[derive(Clone, Debug)]
pub struct CanonicalHoms {
    pub certificate: TrimCertificate,
    pub e: Arc<Lpa>,
    pub e_prime: Arc<Lpa>,
    pub e_dprime: Arc<Lpa>,
    pub vbar: usize,
    pub ebar: usize,
    pub pi1: GenHom,
    pub pi2: GenHom,
    pub delta_e: GenHom,
    pub delta_edd: GenHom,
    pub f: GenHom,
    pub pi2_tensor_id: GenHom,
}

pub fn canonical_homs(g: &Graph, vbar: &str) -> Result<CanonicalHoms, LpaError> {
    let (certificate, v, ebar) = trim_data(g, vbar).map_err(|e| LpaError::Hom(e.to_string()))?;
    let t = trim(g, vbar).map_err(|e| LpaError::Hom(e.to_string()))?;
    let e = Lpa::new(g.clone());
    let e_prime = Lpa::new(t.e_prime);
    let e_dprime = Lpa::new(t.e_dprime);
    let pi1 = GenHom::by_identifiers("π₁", &e, &e_dprime, 1).verify()?;
    // π₂ and π₂⊗id agree at the polynomial level; both keep u.
    let pi2 = GenHom::by_identifiers("π₂", &e_prime, &e_dprime, 1).verify()?;
    let pi2_tensor_id = GenHom::by_identifiers("π₂⊗id", &e_prime, &e_dprime, 1).verify()?;
    let delta_e = gauge_coaction("δ_E", &e).verify()?;
    let delta_edd = gauge_coaction("δ", &e_dprime).verify()?;
    let f = loop_collapse("f", &e, &e_prime, v, ebar, true).verify()?;
    Ok(CanonicalHoms { certificate, e, e_prime, e_dprime, vbar: v, ebar, pi1, pi2, delta_e, delta_edd, f, pi2_tensor_id })
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutationRow {
    pub generator: String,
    pub via_quotient: String,
    pub via_f: String,
    pub equal: bool,
}

impl CanonicalHoms {
    /// `δ∘π₁` against `(π₂⊗id)∘f` on every generator of `C*(E)`.
    pub fn commutation_table(&self) -> Vec<CommutationRow> {
        generators(&self.e)
            .into_iter()
            .map(|(name, x)| {
                let left = self.delta_edd.apply_unchecked(&self.pi1.apply_unchecked(&x));
                let right = self.pi2_tensor_id.apply_unchecked(&self.f.apply_unchecked(&x));
                CommutationRow {
                    generator: name,
                    via_quotient: left.to_string(),
                    via_f: right.to_string(),
                    equal: left == right,
                }
            })
            .collect()
    }

    /// The preimage `S_x S_ē^k S_y*` of `u^m S_x S_y*`, `k = m − (|x| − |y|)`;
    /// negative `k` uses `(S_ē*)^{−k}`.
    pub fn kernel_lift(&self, m: &Monomial, u_exp: i64) -> Result<LpaElement, LpaError> {
        let k = u_exp - m.degree();
        let sx = LpaElement::path(&self.e_prime, &m.x).reinterpret(&self.e)?;
        let sy = LpaElement::path(&self.e_prime, &m.y).reinterpret(&self.e)?;
        let s = LpaElement::edge(&self.e, self.ebar);
        let power = if k >= 0 { s.pow(k as u32) } else { s.star().pow((-k) as u32) };
        Ok(&(&sx * &power) * &sy.star())
    }

    pub fn kernel_inclusion_check(&self, max_len: usize, max_u_deg: i64) -> Result<KernelReport, LpaError> {
        let h: VertexSet = [self.vbar].into_iter().collect();
        let monomials = ideal_monomials_in(&self.e_prime, &h, max_len)?;
        let g = self.e_prime.graph();
        let mut rows = Vec::new();
        for m in &monomials {
            for u_exp in -max_u_deg..=max_u_deg {
                let lift = self.kernel_lift(m, u_exp)?;
                let image = self.f.apply(&lift)?;
                let expected = LpaElement::monomial(&self.e_prime, m.clone()).scale(&Laurent::u_pow(u_exp));
                let in_kernel_of_pi1 = self.pi1.apply(&lift)?.is_zero();
                rows.push(KernelRow {
                    monomial: m.display(g),
                    u_exp,
                    lift: lift.to_string(),
                    ok: image == expected && in_kernel_of_pi1,
                });
            }
        }
        Ok(KernelReport { max_len, max_u_deg, rows })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelRow {
    pub monomial: String,
    pub u_exp: i64,
    pub lift: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub max_len: usize,
    pub max_u_deg: i64,
    pub rows: Vec<KernelRow>,
}

impl KernelReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }
}

pub fn diagram_commutes(g: &Graph, vbar: &str) -> Result<bool, LpaError> {
    Ok(canonical_homs(g, vbar)?.commutation_table().iter().all(|r| r.equal))
}

pub fn kernel_inclusion_check(g: &Graph, vbar: &str, max_len: usize, max_u_deg: i64) -> Result<KernelReport, LpaError> {
    canonical_homs(g, vbar)?.kernel_inclusion_check(max_len, max_u_deg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpa::parse_element;

    fn lambda() -> Graph {
        Graph::new(
            ["w", "vbar"],
            [("a", "w", "w"), ("b", "w", "w"), ("f", "w", "vbar"), ("ebar", "vbar", "vbar")],
        )
        .unwrap()
    }

    #[test]
    fn ideal_monomials_of_lambda() {
        let g = lambda();
        let h = g.vertex_set(["vbar"]).unwrap();
        let zero = ideal_monomials(&g, &h, 0).unwrap();
        assert_eq!(zero, vec![Monomial::vertex(1)]);
        // Three legs ranging at vbar (vbar, ebar, f) give nine pairs; (ebar, ebar) is
        // rewritten by (CK2) at vbar.
        assert_eq!(ideal_monomials(&g, &h, 1).unwrap().len(), 8);
        assert!(ideal_monomials(&g, &VertexSet::new(), 3).unwrap().is_empty());
    }

    #[test]
    fn f_sends_loop_to_u_times_vertex() {
        let homs = canonical_homs(&lambda(), "vbar").unwrap();
        let s = parse_element(&homs.e, "S[ebar]").unwrap();
        assert_eq!(homs.f.apply(&s).unwrap(), parse_element(&homs.e_prime, "u*P[vbar]").unwrap());
        let p = parse_element(&homs.e, "P[vbar]").unwrap();
        assert!(homs.pi1.apply(&p).unwrap().is_zero());
    }

    #[test]
    fn delta_scales_by_degree() {
        let homs = canonical_homs(&lambda(), "vbar").unwrap();
        let x = parse_element(&homs.e, "S[a,a,f]*S*[ebar]").unwrap();
        let expected = x.scale(&Laurent::u_pow(2));
        assert_eq!(homs.delta_e.apply(&x).unwrap(), expected);
    }

    #[test]
    fn square_commutes_and_kernel_lifts() {
        let homs = canonical_homs(&lambda(), "vbar").unwrap();
        assert!(homs.commutation_table().iter().all(|r| r.equal));
        let report = homs.kernel_inclusion_check(1, 1).unwrap();
        assert!(report.passed());
        // In E′ the legs ranging at vbar are vbar and f: four monomials, three u-degrees.
        assert_eq!(report.rows.len(), 4 * 3);
    }
}
