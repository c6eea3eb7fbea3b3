use std::collections::BTreeMap;
use std::sync::Arc;

use super::algebra::{Lpa, LpaElement, Monomial};
use super::parse::parse_element;
use super::LpaError;
use crate::graph::Path;

/// A *-homomorphism given on generators: an image for every `P_v` and `S_e`
/// of the source, and `u ↦ u^u_power` on the Laurent tensorand.
///
/// `apply` is refused until `verify` has confirmed the Cuntz–Krieger
/// relations on the images.
#[derive(Clone, Debug)]
pub struct GenHom {
    name: String,
    source: Arc<Lpa>,
    target: Arc<Lpa>,
    vertex_images: Vec<LpaElement>,
    edge_images: Vec<LpaElement>,
    u_power: i64,
    verified: bool,
}

impl GenHom {
    pub fn new(
        name: impl Into<String>,
        source: &Arc<Lpa>,
        target: &Arc<Lpa>,
        vertex_images: Vec<LpaElement>,
        edge_images: Vec<LpaElement>,
        u_power: i64,
    ) -> Result<Self, LpaError> {
        let g = source.graph();
        if vertex_images.len() != g.vertex_count() || edge_images.len() != g.edge_count() {
            return Err(LpaError::Hom("one image per generator is required".into()));
        }
        if vertex_images.iter().chain(&edge_images).any(|x| !Lpa::same_algebra(x.lpa(), target)) {
            return Err(LpaError::GraphMismatch);
        }
        Ok(GenHom {
            name: name.into(),
            source: source.clone(),
            target: target.clone(),
            vertex_images,
            edge_images,
            u_power,
            verified: false,
        })
    }

    /// Images keyed by `P[v]` / `S[e]`. Every generator needs an image and
    /// every key must name a generator of the source.
    pub fn from_images(
        name: impl Into<String>,
        source: &Arc<Lpa>,
        target: &Arc<Lpa>,
        images: &BTreeMap<String, LpaElement>,
        u_power: i64,
    ) -> Result<Self, LpaError> {
        let g = source.graph();
        let vkeys: Vec<String> = g.vertices().iter().map(|v| format!("P[{v}]")).collect();
        let ekeys: Vec<String> = g.edges().iter().map(|e| format!("S[{}]", e.id)).collect();
        if let Some(k) = images.keys().find(|k| !vkeys.contains(k) && !ekeys.contains(k)) {
            return Err(LpaError::UndefinedGenerator(k.clone()));
        }
        let pick = |k: &String| images.get(k).cloned().ok_or_else(|| LpaError::MissingImage(k.clone()));
        let vertex_images = vkeys.iter().map(pick).collect::<Result<Vec<_>, _>>()?;
        let edge_images = ekeys.iter().map(pick).collect::<Result<Vec<_>, _>>()?;
        Self::new(name, source, target, vertex_images, edge_images, u_power)
    }

    /// As `from_images`, with images written in the element syntax of the target.
    pub fn from_text(
        name: impl Into<String>,
        source: &Arc<Lpa>,
        target: &Arc<Lpa>,
        images: &[(&str, &str)],
        u_power: i64,
    ) -> Result<Self, LpaError> {
        let mut map = BTreeMap::new();
        for (k, v) in images {
            map.insert(k.to_string(), parse_element(target, v)?);
        }
        Self::from_images(name, source, target, &map, u_power)
    }

    /// Sends every generator whose identifier survives in `target` to its
    /// namesake and everything else to zero.
    pub fn by_identifiers(name: impl Into<String>, source: &Arc<Lpa>, target: &Arc<Lpa>, u_power: i64) -> Self {
        let (s, t) = (source.graph(), target.graph());
        let vertex_images = s
            .vertices()
            .iter()
            .map(|v| match t.vertex(v) {
                Ok(w) => LpaElement::vertex(target, w),
                Err(_) => LpaElement::zero(target),
            })
            .collect();
        let edge_images = s
            .edges()
            .iter()
            .map(|e| match t.find_edge(&e.id) {
                Ok(f) => LpaElement::edge(target, f),
                Err(_) => LpaElement::zero(target),
            })
            .collect();
        GenHom {
            name: name.into(),
            source: source.clone(),
            target: target.clone(),
            vertex_images,
            edge_images,
            u_power,
            verified: false,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<Lpa> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Lpa> {
        &self.target
    }

    pub fn u_power(&self) -> i64 {
        self.u_power
    }

    pub fn vertex_image(&self, v: usize) -> &LpaElement {
        &self.vertex_images[v]
    }

    pub fn edge_image(&self, e: usize) -> &LpaElement {
        &self.edge_images[e]
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Relations violated by the images; empty iff the assignment extends
    /// to a unital *-homomorphism.
    pub fn violations(&self) -> Vec<String> {
        let g = self.source.graph();
        let mut out = Vec::new();
        let vid = |v: usize| g.vertex_id(v);
        for (v, p) in self.vertex_images.iter().enumerate() {
            if !p.is_projection() {
                out.push(format!("image of P[{}] is not a projection", vid(v)));
            }
            for (w, q) in self.vertex_images.iter().enumerate().skip(v + 1) {
                if !(p * q).is_zero() {
                    out.push(format!("images of P[{}] and P[{}] are not orthogonal", vid(v), vid(w)));
                }
            }
        }
        let sum = self
            .vertex_images
            .iter()
            .fold(LpaElement::zero(&self.target), |acc, p| &acc + p);
        if sum != LpaElement::one(&self.target) {
            out.push("unit is not mapped to the unit".into());
        }
        for (e, s) in self.edge_images.iter().enumerate() {
            let edge = g.edge(e);
            let (ps, pr) = (&self.vertex_images[edge.source], &self.vertex_images[edge.range]);
            if &(&s.star() * s) != pr {
                out.push(format!("(CK1) fails for S[{}]", edge.id));
            }
            if &(ps * s) != s || &(s * pr) != s {
                out.push(format!("S[{}] is not supported between its endpoints", edge.id));
            }
        }
        for v in 0..g.vertex_count() {
            if g.is_sink(v) {
                continue;
            }
            let sum = g
                .out_edges(v)
                .iter()
                .map(|&e| &self.edge_images[e] * &self.edge_images[e].star())
                .fold(LpaElement::zero(&self.target), |acc, x| &acc + &x);
            if sum != self.vertex_images[v] {
                out.push(format!("(CK2) fails at {}", vid(v)));
            }
        }
        out
    }

    pub fn check_well_defined(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn verify(mut self) -> Result<Self, LpaError> {
        let v = self.violations();
        if v.is_empty() {
            self.verified = true;
            Ok(self)
        } else {
            Err(LpaError::IllDefinedHom(self.name.clone(), v.join("; ")))
        }
    }

    pub fn apply(&self, a: &LpaElement) -> Result<LpaElement, LpaError> {
        if !self.verified {
            return Err(LpaError::Unverified(self.name.clone()));
        }
        if !Lpa::same_algebra(a.lpa(), &self.source) {
            return Err(LpaError::GraphMismatch);
        }
        Ok(self.apply_unchecked(a))
    }

    fn path_image(&self, p: &Path) -> LpaElement {
        match p.edges.split_first() {
            None => self.vertex_images[p.start].clone(),
            Some((&first, rest)) => rest
                .iter()
                .fold(self.edge_images[first].clone(), |acc, &e| &acc * &self.edge_images[e]),
        }
    }

    fn monomial_image(&self, m: &Monomial) -> LpaElement {
        if m.x.is_empty() && m.y.is_empty() {
            return self.vertex_images[m.x.start].clone();
        }
        &self.path_image(&m.x) * &self.path_image(&m.y).star()
    }

    pub(crate) fn apply_unchecked(&self, a: &LpaElement) -> LpaElement {
        let mut acc = LpaElement::zero(&self.target);
        for (m, c) in a.terms() {
            let img = self.monomial_image(m).scale(&c.substitute_power(self.u_power));
            acc = &acc + &img;
        }
        acc
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GenHom) -> Result<GenHom, LpaError> {
        if !Lpa::same_algebra(&self.target, &next.source) {
            return Err(LpaError::GraphMismatch);
        }
        let vertex_images = self.vertex_images.iter().map(|x| next.apply_unchecked(x)).collect();
        let edge_images = self.edge_images.iter().map(|x| next.apply_unchecked(x)).collect();
        Ok(GenHom {
            name: format!("{}∘{}", next.name, self.name),
            source: self.source.clone(),
            target: next.target.clone(),
            vertex_images,
            edge_images,
            u_power: self.u_power * next.u_power,
            verified: self.verified && next.verified,
        })
    }

    /// Is every generator of the target, and `u` when `with_u`, the image
    /// of some generator of the source (or of `u`)?
    pub fn surjective_on_generators(&self, with_u: bool) -> bool {
        let images: Vec<&LpaElement> = self.vertex_images.iter().chain(&self.edge_images).collect();
        let t = self.target.graph();
        let hit = |x: &LpaElement| images.contains(&x);
        let vertices = (0..t.vertex_count()).all(|v| hit(&LpaElement::vertex(&self.target, v)));
        let edges = (0..t.edge_count()).all(|e| hit(&LpaElement::edge(&self.target, e)));
        vertices && edges && (!with_u || self.u_power.abs() == 1)
    }

    /// Image assignment as `(generator, image)` strings.
    pub fn table(&self) -> Vec<(String, String)> {
        let g = self.source.graph();
        let mut rows: Vec<(String, String)> = self
            .vertex_images
            .iter()
            .enumerate()
            .map(|(v, x)| (format!("P[{}]", g.vertex_id(v)), x.to_string()))
            .collect();
        rows.extend(
            self.edge_images
                .iter()
                .enumerate()
                .map(|(e, x)| (format!("S[{}]", g.edge_id(e)), x.to_string())),
        );
        rows.push(("u".into(), format!("u^{}", self.u_power)));
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn lambda_pair() -> (Arc<Lpa>, Arc<Lpa>) {
        let e = Graph::new(
            ["w", "vbar"],
            [("a", "w", "w"), ("b", "w", "w"), ("f", "w", "vbar"), ("ebar", "vbar", "vbar")],
        )
        .unwrap();
        let q = Graph::new(["w"], [("a", "w", "w"), ("b", "w", "w")]).unwrap();
        (Lpa::new(e), Lpa::new(q))
    }

    #[test]
    fn identity_is_well_defined() {
        let (e, _) = lambda_pair();
        let id = GenHom::by_identifiers("id", &e, &e, 1).verify().unwrap();
        let x = parse_element(&e, "S[a,f]*S*[f] + u*P[vbar]").unwrap();
        assert_eq!(id.apply(&x).unwrap(), x);
    }

    #[test]
    fn quotient_kills_vbar() {
        let (e, q) = lambda_pair();
        let pi = GenHom::by_identifiers("pi1", &e, &q, 1).verify().unwrap();
        let vbar = parse_element(&e, "P[vbar]").unwrap();
        assert!(pi.apply(&vbar).unwrap().is_zero());
        assert_eq!(pi.apply(&parse_element(&e, "P[w]").unwrap()).unwrap(), LpaElement::one(&q));
    }

    #[test]
    fn unverified_homs_refuse_to_apply() {
        let (e, _) = lambda_pair();
        let id = GenHom::by_identifiers("id", &e, &e, 1);
        assert!(matches!(id.apply(&LpaElement::one(&e)), Err(LpaError::Unverified(_))));
    }

    #[test]
    fn bad_assignments_are_rejected() {
        let (e, q) = lambda_pair();
        let err = GenHom::from_text("bad", &q, &e, &[("P[w]", "P[w]"), ("S[a]", "S[a]"), ("S[zz]", "S[b]")], 1);
        assert!(matches!(err, Err(LpaError::UndefinedGenerator(_))));
        let err = GenHom::from_text("bad", &q, &q, &[("P[w]", "P[w]"), ("S[a]", "S[ebar]")], 1);
        assert!(matches!(err, Err(LpaError::UndefinedGenerator(_))));
        let swapped = GenHom::from_text("bad", &q, &q, &[("P[w]", "P[w]"), ("S[a]", "S[a]"), ("S[b]", "S[a]")], 1)
            .unwrap();
        assert!(!swapped.check_well_defined());
    }
}
