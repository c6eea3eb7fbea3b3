//! K-theory of finite graph algebras.
//!
//! With `M = 1 − Aᵗ` restricted to the columns of regular vertices,
//! `K₀ = coker(M: ℤ^reg → ℤ^{E⁰})` with generators `[P_v]` and `K₁ = ker M`.
//! Gauge-invariant subalgebras are AF; their `K₀` is the colimit of a
//! Bratteli diagram (see [`bratteli`] and [`colimit`]).

pub mod bratteli;
pub mod colimit;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::intlin::{kernel_basis, solve, FGAbelianGroup, GroupError, GroupHom, IntMatrix};
use crate::lpa::{GenHom, Laurent, Lpa, LpaElement, LpaError};
use crate::trim::check_trimmable;

pub use bratteli::{fixed_point_bratteli, BlockKey, BratteliDiagram};
pub use colimit::{bratteli_k0_colimit, stationary_oracle_contains, ColimitData, ColimitGroup, ColimitLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KError {
    #[error("not a projection: {0}")]
    NotProjection(String),
    #[error("unsupported projection shape (expected a diagonal integer combination): {0}")]
    NotDiagonal(String),
    #[error("graph has sinks: {0}")]
    HasSinks(String),
    #[error("`{0}` does not emit exactly one loop")]
    NotLoopVertex(String),
    #[error("not trimmable at `{0}`")]
    NotTrimmable(String),
    #[error("induced map is not well defined on K₀")]
    IllDefined,
    #[error("K₁ map unavailable: {0}")]
    K1Map(String),
    #[error(transparent)]
    Lpa(#[from] LpaError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug)]
pub struct KGroups {
    pub k0: FGAbelianGroup,
    pub k1: FGAbelianGroup,
    /// Basis of `ker M` in regular-vertex coordinates; `k1` coordinate `i` is `k1_basis[i]`.
    pub k1_basis: Vec<Vec<BigInt>>,
    pub regular_vertices: Vec<usize>,
    /// `1 − Aᵗ` restricted to regular columns.
    pub matrix: IntMatrix,
    pub vertex_labels: Vec<String>,
}

pub fn vertex_label(g: &Graph, v: usize) -> String {
    format!("[P_{}]", g.vertex_id(v))
}

/// The full square `1 − Aᵗ`.
pub fn one_minus_a_transpose(g: &Graph) -> IntMatrix {
    let n = g.vertex_count();
    let a = g.adjacency_matrix().transpose();
    &IntMatrix::identity(n) - &a
}

pub fn k_groups(g: &Graph) -> KGroups {
    let regular = g.regular_vertices();
    let matrix = one_minus_a_transpose(g).select_columns(&regular);
    let labels: Vec<String> = (0..g.vertex_count()).map(|v| vertex_label(g, v)).collect();
    let k0 = FGAbelianGroup::cokernel(&matrix, Some(labels.clone()));
    let k1_basis = kernel_basis(&matrix);
    let k1 = FGAbelianGroup::free(k1_basis.len());
    KGroups { k0, k1, k1_basis, regular_vertices: regular, matrix, vertex_labels: labels }
}

impl KGroups {
    pub fn vertex_class(&self, v: usize) -> Vec<BigInt> {
        self.k0.class_of_label(&self.vertex_labels[v]).expect("every vertex is labeled")
    }

    /// Class of `Σ c_v [P_v]`.
    pub fn class_of_ambient(&self, ambient: &[BigInt]) -> Vec<BigInt> {
        self.k0.class_of(ambient).expect("K₀ carries its vertex presentation")
    }

    /// `K₁` coordinates of a kernel vector given in regular-vertex coordinates.
    pub fn k1_coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if self.k1_basis.is_empty() {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        let b = IntMatrix::from_columns(self.regular_vertices.len(), &self.k1_basis);
        solve(&b, v)
    }

    /// Regular-vertex coordinates of the vertex `v`, if it is regular.
    pub fn regular_unit(&self, v: usize) -> Option<Vec<BigInt>> {
        let i = self.regular_vertices.iter().position(|&r| r == v)?;
        let mut e = vec![BigInt::zero(); self.regular_vertices.len()];
        e[i] = BigInt::one();
        Some(e)
    }

    pub fn report(&self) -> KReport {
        let generators = self
            .k0
            .generator_classes()
            .into_iter()
            .map(|(l, v)| (l, v.iter().map(ToString::to_string).collect()))
            .collect();
        let k1_generators = self
            .k1_basis
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("k1_{i}"), v.iter().map(ToString::to_string).collect()))
            .collect();
        let s0 = self.k0.summary();
        let s1 = self.k1.summary();
        KReport {
            k0: GroupReport { rank: s0.rank, torsion: s0.torsion, generators, pretty: self.k0.pretty() },
            k1: GroupReport { rank: s1.rank, torsion: s1.torsion, generators: k1_generators, pretty: self.k1.pretty() },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub rank: usize,
    pub torsion: Vec<String>,
    pub generators: BTreeMap<String, Vec<String>>,
    pub pretty: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct KReport {
    pub k0: GroupReport,
    pub k1: GroupReport,
}

/// Ambient vertex vector `Σ c [P_{r(x)}]` of a diagonal projection with
/// constant integer coefficients. `u`-powers must already be evaluated.
pub fn projection_vector(p: &LpaElement) -> Result<Vec<BigInt>, KError> {
    if !p.is_projection() {
        return Err(KError::NotProjection(p.to_string()));
    }
    let g = p.graph();
    let mut v = vec![BigInt::zero(); g.vertex_count()];
    for (m, c) in p.terms() {
        let k = c.as_constant().filter(|_| m.is_diagonal()).ok_or_else(|| KError::NotDiagonal(p.to_string()))?;
        v[m.range(g)] += k;
    }
    Ok(v)
}

pub fn class_of_projection(k: &KGroups, p: &LpaElement) -> Result<Vec<BigInt>, KError> {
    Ok(k.class_of_ambient(&projection_vector(p)?))
}

/// Ambient vertex vectors of the images of all vertex projections, evaluated at `u = 1`.
pub fn vertex_image_vectors(h: &GenHom) -> Result<Vec<Vec<BigInt>>, KError> {
    let src = h.source().graph();
    (0..src.vertex_count())
        .map(|v| {
            let img = h.apply(&LpaElement::vertex(h.source(), v))?;
            projection_vector(&img.map_coefficients(|c| c.substitute_power(0)))
        })
        .collect()
}

/// `K₀` map of a homomorphism, read off from the images of the `[P_v]`.
pub fn induced_k0_map(h: &GenHom, src: &KGroups, tgt: &KGroups) -> Result<GroupHom, KError> {
    let n_tgt = h.target().graph().vertex_count();
    let images = IntMatrix::from_columns(n_tgt, &vertex_image_vectors(h)?);
    // Relations of the source must land in the relations of the target.
    let on_relations = images.checked_mul(&src.matrix).expect("shapes agree");
    if on_relations.columns().iter().any(|c| !tgt.k0.is_zero_element(&tgt.class_of_ambient(c))) {
        return Err(KError::IllDefined);
    }
    let lifts = &src.k0.presentation().expect("vertex presentation").lifts;
    let ambient = images.checked_mul(lifts).expect("shapes agree");
    let cols: Vec<Vec<BigInt>> = ambient.columns().iter().map(|c| tgt.class_of_ambient(c)).collect();
    Ok(GroupHom::new(src.k0.clone(), tgt.k0.clone(), IntMatrix::from_columns(tgt.k0.dim(), &cols))?)
}

/// `K₀` map out of a free group whose `i`-th generator is the class of the
/// vertex `i` of `h`'s source; used for gauge-invariant subalgebras where
/// `[P_v]^fix ↦ [h(P_v)]`.
pub fn vertex_generator_map(h: &GenHom, src: FGAbelianGroup, tgt: &KGroups) -> Result<GroupHom, KError> {
    let cols: Vec<Vec<BigInt>> = vertex_image_vectors(h)?.iter().map(|c| tgt.class_of_ambient(c)).collect();
    Ok(GroupHom::new(src, tgt.k0.clone(), IntMatrix::from_columns(tgt.k0.dim(), &cols))?)
}

/// `K₁` map of a quotient by sinks. Both graphs must have the same regular
/// vertices (by identifier); a kernel vector then maps to itself.
pub fn quotient_k1_map(src_g: &Graph, src: &KGroups, tgt_g: &Graph, tgt: &KGroups) -> Result<GroupHom, KError> {
    let ids = |g: &Graph, k: &KGroups| k.regular_vertices.iter().map(|&v| g.vertex_id(v).to_string()).collect::<Vec<_>>();
    if ids(src_g, src) != ids(tgt_g, tgt) {
        return Err(KError::K1Map("regular vertices differ".into()));
    }
    for v in 0..src_g.vertex_count() {
        if !tgt_g.has_vertex(src_g.vertex_id(v)) && !src_g.is_sink(v) {
            return Err(KError::K1Map(format!("removed vertex `{}` is not a sink", src_g.vertex_id(v))));
        }
    }
    let cols = src
        .k1_basis
        .iter()
        .map(|b| tgt.k1_coordinates(b).ok_or_else(|| KError::K1Map("kernel vector leaves the target kernel".into())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupHom::new(src.k1.clone(), tgt.k1.clone(), IntMatrix::from_columns(tgt.k1.dim(), &cols))?)
}

/// `U = S_ē + 1 − S_ē S_ē*` for a vertex whose only outgoing edge is the loop `ē`.
pub fn loop_unitary(lpa: &std::sync::Arc<Lpa>, v: usize) -> Result<LpaElement, KError> {
    let g = lpa.graph();
    match g.out_edges(v) {
        [e] if g.range(*e) == v => {
            let s = LpaElement::edge(lpa, *e);
            Ok(&(&s + &LpaElement::one(lpa)) - &(&s * &s.star()))
        }
        _ => Err(KError::NotLoopVertex(g.vertex_id(v).to_string())),
    }
}

#[derive(Clone, Debug)]
pub struct K1Generator {
    pub unitary: LpaElement,
    /// `e_{v̄}` in regular-vertex coordinates.
    pub vector: Vec<BigInt>,
    pub k1_class: Vec<BigInt>,
}

/// The unitary of a loop vertex and its `K₁` vector, both verified.
pub fn loop_k1_generator(g: &Graph, vbar: &str) -> Result<K1Generator, KError> {
    let lpa = Lpa::new(g.clone());
    let v = g.vertex(vbar).map_err(|e| LpaError::Hom(e.to_string()))?;
    let unitary = loop_unitary(&lpa, v)?;
    assert!(unitary.is_unitary(), "S_ē + 1 − S_ēS_ē* is unitary by (CK1)");
    let k = k_groups(g);
    let vector = k.regular_unit(v).expect("a loop vertex is regular");
    let mut full = vec![BigInt::zero(); g.vertex_count()];
    full[v] = BigInt::one();
    assert!(one_minus_a_transpose(g).mul_vec(&full).iter().all(Zero::is_zero));
    let k1_class = k.k1_coordinates(&vector).expect("e_v̄ lies in ker(1 − Aᵗ)");
    Ok(K1Generator { unitary, vector, k1_class })
}

pub fn distinguished_k1_unitary(g: &Graph, vbar: &str) -> Result<K1Generator, KError> {
    let sinks = g.sinks();
    if !sinks.is_empty() {
        return Err(KError::HasSinks(sinks.names(g).join(", ")));
    }
    let cert = check_trimmable(g, vbar).map_err(|e| LpaError::Hom(e.to_string()))?;
    if !cert.trimmable() {
        return Err(KError::NotTrimmable(vbar.to_string()));
    }
    loop_k1_generator(g, vbar)
}

/// The `u = 1` specialization of a homomorphism, for maps between
/// gauge-invariant or ungraded corners.
pub fn at_u_one(h: &GenHom, name: &str) -> Result<GenHom, LpaError> {
    let eval = |x: &LpaElement| x.map_coefficients(|c: &Laurent| c.substitute_power(0));
    let src = h.source().graph();
    let vertices = (0..src.vertex_count()).map(|v| eval(h.vertex_image(v))).collect();
    let edges = (0..src.edge_count()).map(|e| eval(h.edge_image(e))).collect();
    GenHom::new(name, h.source(), h.target(), vertices, edges, 0)?.verify()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpa::parse_element;
    use num_traits::Signed;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn lambda_prime() -> Graph {
        Graph::new(["w", "vbar"], [("a", "w", "w"), ("b", "w", "w"), ("f", "w", "vbar")]).unwrap()
    }

    #[test]
    fn cuntz_sink_extension() {
        let g = lambda_prime();
        let k = k_groups(&g);
        assert_eq!(k.k0.pretty(), "ℤ");
        assert!(k.k1.is_trivial());
        // [P_w] = 2[P_w] + [P_vbar], so [P_w] = −[P_vbar].
        let w = k.vertex_class(0);
        let vbar = k.vertex_class(1);
        assert_eq!(w, vbar.iter().map(|x| -x).collect::<Vec<_>>());
        assert!(!k.k0.is_zero_element(&vbar));
    }

    #[test]
    fn projection_classes() {
        let g = Graph::new(["v0", "v1"], [("e0", "v0", "v0"), ("e0_1", "v0", "v1"), ("e1", "v1", "v1")]).unwrap();
        let k = k_groups(&g);
        let lpa = Lpa::new(g);
        let one = LpaElement::one(&lpa);
        assert_eq!(class_of_projection(&k, &one).unwrap(), k.vertex_class(0));
        let range = parse_element(&lpa, "S[e0_1]*S*[e0_1]").unwrap();
        assert_eq!(class_of_projection(&k, &range).unwrap(), k.vertex_class(1));
        let s = parse_element(&lpa, "S[e0]").unwrap();
        assert!(matches!(class_of_projection(&k, &s), Err(KError::NotProjection(_))));
    }

    #[test]
    fn distinguished_unitary_of_sphere() {
        let g = Graph::new(["v0", "v1"], [("e0", "v0", "v0"), ("e0_1", "v0", "v1"), ("e1", "v1", "v1")]).unwrap();
        let gen = distinguished_k1_unitary(&g, "v1").unwrap();
        assert_eq!(gen.vector, big(&[0, 1]));
        assert_eq!(gen.k1_class.len(), 1);
        assert!(gen.k1_class[0].abs().is_one());
        assert!(matches!(distinguished_k1_unitary(&lambda_prime(), "vbar"), Err(KError::HasSinks(_))));
    }

    #[test]
    fn quotient_kills_vbar_on_k0() {
        let lambda = Graph::new(
            ["w", "vbar"],
            [("a", "w", "w"), ("b", "w", "w"), ("f", "w", "vbar"), ("ebar", "vbar", "vbar")],
        )
        .unwrap();
        let o2 = Graph::new(["w"], [("a", "w", "w"), ("b", "w", "w")]).unwrap();
        let (e, q) = (Lpa::new(lambda.clone()), Lpa::new(o2.clone()));
        let pi = GenHom::by_identifiers("π₁", &e, &q, 1).verify().unwrap();
        let m = induced_k0_map(&pi, &k_groups(&lambda), &k_groups(&o2)).unwrap();
        assert!(m.target().is_trivial());
        let id = GenHom::by_identifiers("id", &e, &e, 1).verify().unwrap();
        let k = k_groups(&lambda);
        assert!(induced_k0_map(&id, &k, &k).unwrap().matrix().is_identity());
    }
}
