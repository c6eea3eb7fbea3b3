use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::laurent::Laurent;
use super::LpaError;
use crate::graph::{Graph, Path};

/// Leavitt path algebra of a finite graph, tensored with integer Laurent
/// polynomials in `u`. Holds the special edge `γ_v` of every non-sink `v`:
/// its declaration-first outgoing edge.
#[derive(Debug)]
pub struct Lpa {
    graph: Graph,
    special: Vec<Option<usize>>,
}

impl Lpa {
    pub fn new(graph: Graph) -> Arc<Lpa> {
        let special = (0..graph.vertex_count()).map(|v| graph.out_edges(v).first().copied()).collect();
        Arc::new(Lpa { graph, special })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn special_edge(&self, v: usize) -> Option<usize> {
        self.special[v]
    }

    pub fn same_algebra(a: &Arc<Lpa>, b: &Arc<Lpa>) -> bool {
        Arc::ptr_eq(a, b) || a.graph == b.graph
    }

    /// Not both legs ending in the same special edge.
    pub fn is_normal(&self, m: &Monomial) -> bool {
        match (m.x.edges.last(), m.y.edges.last()) {
            (Some(&a), Some(&b)) => a != b || self.special[self.graph.source(a)] != Some(a),
            _ => true,
        }
    }

    /// Raw product of two monomials, before normalization.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        let (left, inner_star, inner, right) = (&a.x, &a.y, &b.x, &b.y);
        if inner_star.start != inner.start {
            return None;
        }
        let (ls, li) = (&inner_star.edges, &inner.edges);
        if li.starts_with(ls) {
            let rest = Path { edges: li[ls.len()..].to_vec(), start: inner_star.range(&self.graph) };
            Some(Monomial { x: left.concat(&rest), y: right.clone() })
        } else if ls.starts_with(li) {
            let rest = Path { edges: ls[li.len()..].to_vec(), start: inner.range(&self.graph) };
            Some(Monomial { x: left.clone(), y: right.concat(&rest) })
        } else {
            None
        }
    }

    /// Adds `c · m` to `terms`, rewriting with (CK2) until every monomial is normal.
    pub(crate) fn insert_normalized(&self, terms: &mut BTreeMap<Monomial, Laurent>, m: Monomial, c: Laurent) {
        let mut stack = vec![(m, c)];
        while let Some((m, c)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            if self.is_normal(&m) {
                let vanished = {
                    let entry = terms.entry(m.clone()).or_default();
                    *entry = &*entry + &c;
                    entry.is_zero()
                };
                if vanished {
                    terms.remove(&m);
                }
                continue;
            }
            let gamma = *m.x.edges.last().expect("non-normal monomials have nonempty legs");
            let v = self.graph.source(gamma);
            let (x, y) = (m.x.pop(), m.y.pop());
            for &e in self.graph.out_edges(v) {
                if e != gamma {
                    stack.push((Monomial { x: x.push(e), y: y.push(e) }, -&c));
                }
            }
            stack.push((Monomial { x, y }, c));
        }
    }
}

/// `S_x S_y*` with `r(x) = r(y)`; `x = y = v` is `P_v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub x: Path,
    pub y: Path,
}

impl Monomial {
    pub fn vertex(v: usize) -> Self {
        Monomial { x: Path::vertex(v), y: Path::vertex(v) }
    }

    pub fn new(g: &Graph, x: Path, y: Path) -> Result<Self, LpaError> {
        if x.range(g) != y.range(g) {
            return Err(LpaError::RangeMismatch(x.display(g), y.display(g)));
        }
        Ok(Monomial { x, y })
    }

    /// `|x| − |y|`.
    pub fn degree(&self) -> i64 {
        self.x.len() as i64 - self.y.len() as i64
    }

    pub fn range(&self, g: &Graph) -> usize {
        self.x.range(g)
    }

    pub fn star(&self) -> Monomial {
        Monomial { x: self.y.clone(), y: self.x.clone() }
    }

    pub fn is_diagonal(&self) -> bool {
        self.x == self.y
    }

    pub fn display(&self, g: &Graph) -> String {
        match (self.x.is_empty(), self.y.is_empty()) {
            (true, true) => format!("P[{}]", g.vertex_id(self.x.start)),
            (false, true) => format!("S[{}]", self.x.display(g)),
            (true, false) => format!("S*[{}]", self.y.display(g)),
            (false, false) => format!("S[{}]*S*[{}]", self.x.display(g), self.y.display(g)),
        }
    }
}

/// A finite combination of normal monomials with Laurent coefficients.
#[derive(Clone)]
pub struct LpaElement {
    lpa: Arc<Lpa>,
    terms: BTreeMap<Monomial, Laurent>,
}

impl PartialEq for LpaElement {
    fn eq(&self, other: &Self) -> bool {
        Lpa::same_algebra(&self.lpa, &other.lpa) && self.terms == other.terms
    }
}

impl Eq for LpaElement {}

impl fmt::Debug for LpaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LpaElement({self})")
    }
}

impl LpaElement {
    pub fn zero(lpa: &Arc<Lpa>) -> Self {
        LpaElement { lpa: lpa.clone(), terms: BTreeMap::new() }
    }

    /// `Σ_v P_v`; zero for the empty graph.
    pub fn one(lpa: &Arc<Lpa>) -> Self {
        let mut terms = BTreeMap::new();
        for v in 0..lpa.graph.vertex_count() {
            terms.insert(Monomial::vertex(v), Laurent::one());
        }
        LpaElement { lpa: lpa.clone(), terms }
    }

    pub fn vertex(lpa: &Arc<Lpa>, v: usize) -> Self {
        Self::monomial(lpa, Monomial::vertex(v))
    }

    pub fn edge(lpa: &Arc<Lpa>, e: usize) -> Self {
        let g = &lpa.graph;
        let m = Monomial { x: Path { edges: vec![e], start: g.source(e) }, y: Path::vertex(g.range(e)) };
        Self::monomial(lpa, m)
    }

    pub fn edge_star(lpa: &Arc<Lpa>, e: usize) -> Self {
        Self::edge(lpa, e).star()
    }

    /// `S_x`, or `P_v` for a vertex path.
    pub fn path(lpa: &Arc<Lpa>, x: &Path) -> Self {
        let r = x.range(&lpa.graph);
        Self::monomial(lpa, Monomial { x: x.clone(), y: Path::vertex(r) })
    }

    pub fn monomial(lpa: &Arc<Lpa>, m: Monomial) -> Self {
        Self::from_terms(lpa, [(m, Laurent::one())])
    }

    /// Normalizes an arbitrary combination of (possibly non-normal) monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Laurent)>>(lpa: &Arc<Lpa>, terms: I) -> Self {
        let mut out = BTreeMap::new();
        for (m, c) in terms {
            lpa.insert_normalized(&mut out, m, c);
        }
        LpaElement { lpa: lpa.clone(), terms: out }
    }

    pub fn constant(lpa: &Arc<Lpa>, c: impl Into<BigInt>) -> Self {
        Self::one(lpa).scale(&Laurent::constant(c))
    }

    pub fn u(lpa: &Arc<Lpa>) -> Self {
        Self::one(lpa).scale(&Laurent::u_pow(1))
    }

    pub fn lpa(&self) -> &Arc<Lpa> {
        &self.lpa
    }

    pub fn graph(&self) -> &Graph {
        &self.lpa.graph
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Laurent)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same(&self, other: &LpaElement) -> Result<(), LpaError> {
        if Lpa::same_algebra(&self.lpa, &other.lpa) {
            Ok(())
        } else {
            Err(LpaError::GraphMismatch)
        }
    }

    pub fn checked_add(&self, other: &LpaElement) -> Result<LpaElement, LpaError> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_default();
            *entry = &*entry + c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        Ok(LpaElement { lpa: self.lpa.clone(), terms })
    }

    pub fn checked_sub(&self, other: &LpaElement) -> Result<LpaElement, LpaError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &LpaElement) -> Result<LpaElement, LpaError> {
        self.check_same(other)?;
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(m) = self.lpa.mul_monomials(a, b) {
                    self.lpa.insert_normalized(&mut terms, m, ca * cb);
                }
            }
        }
        Ok(LpaElement { lpa: self.lpa.clone(), terms })
    }

    pub fn pow(&self, k: u32) -> LpaElement {
        let mut out = LpaElement::one(&self.lpa);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Formal involution: reverses products and conjugates `u ↦ u⁻¹`.
    pub fn star(&self) -> LpaElement {
        let terms = self.terms.iter().map(|(m, c)| (m.star(), c.conj())).collect();
        LpaElement { lpa: self.lpa.clone(), terms }
    }

    pub fn scale(&self, c: &Laurent) -> LpaElement {
        let terms: BTreeMap<_, _> = self
            .terms
            .iter()
            .map(|(m, x)| (m.clone(), x * c))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        LpaElement { lpa: self.lpa.clone(), terms }
    }

    pub fn scale_int(&self, c: impl Into<BigInt>) -> LpaElement {
        self.scale(&Laurent::constant(c))
    }

    /// Applies `f` to every coefficient; the monomials stay normal.
    pub fn map_coefficients(&self, f: impl Fn(&Laurent) -> Laurent) -> LpaElement {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        LpaElement { lpa: self.lpa.clone(), terms }
    }

    /// Total degrees `|x| − |y| + k` over all terms `u^k S_x S_y*`.
    pub fn gauge_degrees(&self) -> BTreeSet<i64> {
        self.terms
            .iter()
            .flat_map(|(m, c)| c.exponents().map(move |k| m.degree() + k))
            .collect()
    }

    pub fn gauge_invariant_part(&self) -> LpaElement {
        self.homogeneous_part(0)
    }

    pub fn homogeneous_part(&self, d: i64) -> LpaElement {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), Laurent::term(c.coefficient(d - m.degree()), d - m.degree())))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        LpaElement { lpa: self.lpa.clone(), terms }
    }

    pub fn is_projection(&self) -> bool {
        self.star() == *self && &(self * self) == self
    }

    pub fn is_isometry(&self) -> bool {
        self.star() * self.clone() == LpaElement::one(&self.lpa)
    }

    pub fn is_unitary(&self) -> bool {
        let one = LpaElement::one(&self.lpa);
        self.star() * self.clone() == one && self.clone() * self.star() == one
    }

    /// Moves the element into another algebra by identifiers; every path
    /// must exist there with the same shape.
    pub fn reinterpret(&self, target: &Arc<Lpa>) -> Result<LpaElement, LpaError> {
        let (src, dst) = (&self.lpa.graph, &target.graph);
        let map_path = |p: &Path| -> Result<Path, LpaError> {
            let start = dst
                .vertex(src.vertex_id(p.start))
                .map_err(|_| LpaError::UndefinedGenerator(format!("P[{}]", src.vertex_id(p.start))))?;
            let edges = p
                .edges
                .iter()
                .map(|&e| {
                    dst.find_edge(src.edge_id(e))
                        .map_err(|_| LpaError::UndefinedGenerator(format!("S[{}]", src.edge_id(e))))
                })
                .collect::<Result<Vec<_>, _>>()?;
            dst.path_from_edges(start, edges).map_err(|e| LpaError::UndefinedGenerator(e.to_string()))
        };
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let x = map_path(&m.x)?;
            let y = map_path(&m.y)?;
            terms.push((Monomial::new(dst, x, y)?, c.clone()));
        }
        Ok(LpaElement::from_terms(target, terms))
    }

    /// `Σ c_v P_v` with constant integer coefficients, if the element has that shape.
    pub fn vertex_combination(&self) -> Option<Vec<(usize, BigInt)>> {
        self.terms
            .iter()
            .map(|(m, c)| {
                if m.x.is_empty() && m.is_diagonal() {
                    c.as_constant().map(|k| (m.x.start, k))
                } else {
                    None
                }
            })
            .collect()
    }
}

impl fmt::Display for LpaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let g = &self.lpa.graph;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono = m.display(g);
            let single = c.terms().count() == 1;
            let (neg, body) = if single {
                let (k, x) = c.terms().next().expect("nonzero coefficient");
                let neg = x < &BigInt::zero();
                let mag = if neg { -x } else { x.clone() };
                let coef = Laurent::term(mag, k);
                if coef == Laurent::one() {
                    (neg, mono)
                } else {
                    (neg, format!("{coef}*{mono}"))
                }
            } else {
                (false, format!("({c})*{mono}"))
            };
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

// The operator impls panic on mixed algebras; use the `checked_*` forms for
// untrusted operands.

impl Add for &LpaElement {
    type Output = LpaElement;

    fn add(self, rhs: &LpaElement) -> LpaElement {
        self.checked_add(rhs).expect("elements of different algebras")
    }
}

impl Sub for &LpaElement {
    type Output = LpaElement;

    fn sub(self, rhs: &LpaElement) -> LpaElement {
        self.checked_sub(rhs).expect("elements of different algebras")
    }
}

impl Mul for &LpaElement {
    type Output = LpaElement;

    fn mul(self, rhs: &LpaElement) -> LpaElement {
        self.checked_mul(rhs).expect("elements of different algebras")
    }
}

impl Neg for &LpaElement {
    type Output = LpaElement;

    fn neg(self) -> LpaElement {
        self.map_coefficients(|c| -c)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for LpaElement {
            type Output = LpaElement;

            fn $f(self, rhs: LpaElement) -> LpaElement {
                (&self).$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LpaElement {
    type Output = LpaElement;

    fn neg(self) -> LpaElement {
        -&self
    }
}

/// Named generators: `P[v]` per vertex, `S[e]` per edge, and `1`.
pub fn generators(lpa: &Arc<Lpa>) -> Vec<(String, LpaElement)> {
    let g = &lpa.graph;
    let mut out: Vec<(String, LpaElement)> = (0..g.vertex_count())
        .map(|v| (format!("P[{}]", g.vertex_id(v)), LpaElement::vertex(lpa, v)))
        .collect();
    out.extend((0..g.edge_count()).map(|e| (format!("S[{}]", g.edge_id(e)), LpaElement::edge(lpa, e))));
    out.push(("1".into(), LpaElement::one(lpa)));
    out
}
