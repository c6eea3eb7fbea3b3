//! Finite directed multigraphs with named vertices and edges.
//!
//! Vertices and edges are addressed by their declaration index; identifiers
//! are kept for input/output and for identifier-preserving comparisons.
//! Vertex and edge identifiers live in separate namespaces.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlin::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("duplicate vertex identifier `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge identifier `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` references undeclared vertex `{vertex}`")]
    UndeclaredVertex { edge: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("vertex set is not hereditary: edge `{0}` leaves it")]
    NotHereditary(String),
    #[error("vertex set is not saturated: `{0}` feeds only into it")]
    NotSaturated(String),
    #[error("edges `{0}` and `{1}` are not composable")]
    NotComposable(String, String),
    #[error("malformed graph object: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub source: usize,
    pub range: usize,
}

/// A finite directed multigraph. Declaration order is significant: it fixes
/// matrix indexing and the special edge of every vertex.
#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

/// Wire form of a graph: `{"vertices": [...], "edges": [{"id", "src", "rng"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphObject {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeObject>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeObject {
    pub id: String,
    pub src: String,
    pub rng: String,
}

/// A path: a start vertex plus a (possibly empty) composable edge sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub edges: Vec<usize>,
    pub start: usize,
}

impl Path {
    pub fn vertex(v: usize) -> Self {
        Path { edges: Vec::new(), start: v }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn range(&self, g: &Graph) -> usize {
        match self.edges.last() {
            Some(&e) => g.edges[e].range,
            None => self.start,
        }
    }

    /// Concatenation; the caller guarantees `r(self) = s(other)`.
    pub fn concat(&self, other: &Path) -> Path {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Path { edges, start: self.start }
    }

    pub fn push(&self, e: usize) -> Path {
        let mut edges = self.edges.clone();
        edges.push(e);
        Path { edges, start: self.start }
    }

    /// Drops the last edge. The start vertex stays put, which is the source
    /// of the dropped edge when the path had length one.
    pub fn pop(&self) -> Path {
        let mut edges = self.edges.clone();
        edges.pop();
        Path { edges, start: self.start }
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.edges.is_empty() {
            g.vertex_id(self.start).to_string()
        } else {
            self.edges
                .iter()
                .map(|&e| g.edge_id(e))
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

/// A subset of the vertices of some graph, by index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub BTreeSet<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(BTreeSet::new())
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self, g: &Graph) -> Vec<String> {
        self.iter().map(|v| g.vertex_id(v).to_string()).collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl Graph {
    pub fn empty() -> Self {
        Graph {
            vertices: Vec::new(),
            edges: Vec::new(),
            vertex_index: HashMap::new(),
            edge_index: HashMap::new(),
            out_edges: Vec::new(),
            in_edges: Vec::new(),
        }
    }

    /// Builds and validates a graph from identifier lists.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = S>,
        S: Into<String>,
        E: IntoIterator<Item = (S, S, S)>,
    {
        let mut g = Graph::empty();
        for v in vertices {
            g.add_vertex(v.into())?;
        }
        for (id, s, r) in edges {
            g.add_edge(id.into(), &s.into(), &r.into())?;
        }
        Ok(g)
    }

    pub(crate) fn add_vertex(&mut self, id: String) -> Result<usize, GraphError> {
        if self.vertex_index.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        let idx = self.vertices.len();
        self.vertex_index.insert(id.clone(), idx);
        self.vertices.push(id);
        self.out_edges.push(Vec::new());
        self.in_edges.push(Vec::new());
        Ok(idx)
    }

    pub(crate) fn add_edge(&mut self, id: String, src: &str, rng: &str) -> Result<usize, GraphError> {
        if self.edge_index.contains_key(&id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        let lookup = |v: &str| {
            self.vertex_index
                .get(v)
                .copied()
                .ok_or_else(|| GraphError::UndeclaredVertex { edge: id.clone(), vertex: v.to_string() })
        };
        let source = lookup(src)?;
        let range = lookup(rng)?;
        let idx = self.edges.len();
        self.edge_index.insert(id.clone(), idx);
        self.edges.push(Edge { id, source, range });
        self.out_edges[source].push(idx);
        self.in_edges[range].push(idx);
        Ok(idx)
    }

    /// Parses the line-oriented format (`vertex <id>`, `edge <id> <src> <rng>`,
    /// `#` comments) or, when the text starts with `{`, the JSON object form.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut g = Graph::empty();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens.as_slice() {
                [] => {}
                ["vertex", id] => {
                    g.add_vertex(id.to_string())?;
                }
                ["edge", id, s, r] => {
                    g.add_edge(id.to_string(), s, r)?;
                }
                ["vertex", ..] => {
                    return Err(GraphError::Syntax { line, msg: "expected `vertex <id>`".into() })
                }
                ["edge", ..] => {
                    return Err(GraphError::Syntax {
                        line,
                        msg: "expected `edge <id> <source> <range>`".into(),
                    })
                }
                [kw, ..] => {
                    return Err(GraphError::Syntax { line, msg: format!("unknown declaration `{kw}`") })
                }
            }
        }
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let obj: GraphObject =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::from_object(&obj)
    }

    pub fn from_object(obj: &GraphObject) -> Result<Self, GraphError> {
        Graph::new(
            obj.vertices.iter().cloned(),
            obj.edges.iter().map(|e| (e.id.clone(), e.src.clone(), e.rng.clone())),
        )
    }

    pub fn to_object(&self) -> GraphObject {
        GraphObject {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeObject {
                    id: e.id.clone(),
                    src: self.vertices[e.source].clone(),
                    rng: self.vertices[e.range].clone(),
                })
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("vertex {v}\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {} {}\n",
                e.id, self.vertices[e.source], self.vertices[e.range]
            ));
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edges[e].id
    }

    pub fn vertex(&self, id: &str) -> Result<usize, GraphError> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn find_edge(&self, id: &str) -> Result<usize, GraphError> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(id.to_string()))
    }

    pub fn has_vertex(&self, id: &str) -> bool {
        self.vertex_index.contains_key(id)
    }

    pub fn has_edge(&self, id: &str) -> bool {
        self.edge_index.contains_key(id)
    }

    pub fn source(&self, e: usize) -> usize {
        self.edges[e].source
    }

    pub fn range(&self, e: usize) -> usize {
        self.edges[e].range
    }

    /// `s⁻¹(v)` in declaration order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    /// `r⁻¹(v)` in declaration order.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.out_edges[v].is_empty()
    }

    pub fn vertex_set<'a, I: IntoIterator<Item = &'a str>>(&self, ids: I) -> Result<VertexSet, GraphError> {
        ids.into_iter().map(|id| self.vertex(id)).collect::<Result<_, _>>()
    }

    /// Path from a start vertex id and a list of edge ids; an empty edge list
    /// gives the vertex path.
    pub fn path(&self, start: &str, edge_ids: &[&str]) -> Result<Path, GraphError> {
        let start = self.vertex(start)?;
        let edges = edge_ids.iter().map(|id| self.find_edge(id)).collect::<Result<Vec<_>, _>>()?;
        self.path_from_edges(start, edges)
    }

    /// Validates composability; `start` is only consulted for empty paths.
    pub fn path_from_edges(&self, start: usize, edges: Vec<usize>) -> Result<Path, GraphError> {
        for w in edges.windows(2) {
            if self.range(w[0]) != self.source(w[1]) {
                return Err(GraphError::NotComposable(
                    self.edge_id(w[0]).to_string(),
                    self.edge_id(w[1]).to_string(),
                ));
            }
        }
        let start = edges.first().map_or(start, |&e| self.source(e));
        Ok(Path { edges, start })
    }

    pub fn sinks(&self) -> VertexSet {
        (0..self.vertex_count()).filter(|&v| self.is_sink(v)).collect()
    }

    pub fn regular_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| !self.is_sink(v)).collect()
    }

    /// Entry `(v, w)` counts edges from `v` to `w`.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut a = IntMatrix::zeros(n, n);
        for e in &self.edges {
            a.add_at(e.source, e.range, 1);
        }
        a
    }

    /// All paths of length at most `max_len`, optionally filtered by range,
    /// sorted lexicographically by edge sequence (vertex paths first).
    pub fn enumerate_paths(&self, max_len: usize, end: Option<&VertexSet>) -> Vec<Path> {
        let mut all: Vec<Path> = Vec::new();
        let mut frontier: Vec<Path> = (0..self.vertex_count()).map(Path::vertex).collect();
        for len in 0..=max_len {
            all.extend(frontier.iter().cloned());
            if len == max_len {
                break;
            }
            frontier = frontier
                .iter()
                .flat_map(|p| self.out_edges(p.range(self)).iter().map(move |&e| p.push(e)))
                .collect();
        }
        if let Some(end) = end {
            all.retain(|p| end.contains(p.range(self)));
        }
        all.sort();
        all
    }

    pub fn is_hereditary(&self, h: &VertexSet) -> bool {
        self.hereditary_violation(h).is_none()
    }

    fn hereditary_violation(&self, h: &VertexSet) -> Option<usize> {
        h.iter()
            .flat_map(|v| self.out_edges(v).iter().copied())
            .find(|&e| !h.contains(self.range(e)))
    }

    /// Least saturated superset of a hereditary set.
    pub fn saturate(&self, h: &VertexSet) -> Result<VertexSet, GraphError> {
        if let Some(e) = self.hereditary_violation(h) {
            return Err(GraphError::NotHereditary(self.edge_id(e).to_string()));
        }
        let mut set = h.clone();
        loop {
            let feeding: Vec<usize> = (0..self.vertex_count())
                .filter(|&v| {
                    !set.contains(v)
                        && !self.is_sink(v)
                        && self.out_edges(v).iter().all(|&e| set.contains(self.range(e)))
                })
                .collect();
            if feeding.is_empty() {
                return Ok(set);
            }
            set.0.extend(feeding);
        }
    }

    pub fn is_saturated_hereditary(&self, h: &VertexSet) -> bool {
        matches!(self.saturate(h), Ok(s) if &s == h)
    }

    /// `E/H`: drops the vertices of `H` and every edge ranging in `H`.
    pub fn quotient_graph(&self, h: &VertexSet) -> Result<Graph, GraphError> {
        let sat = self.saturate(h)?;
        if let Some(v) = sat.iter().find(|&v| !h.contains(v)) {
            return Err(GraphError::NotSaturated(self.vertex_id(v).to_string()));
        }
        let mut q = Graph::empty();
        for (v, id) in self.vertices.iter().enumerate() {
            if !h.contains(v) {
                q.add_vertex(id.clone())?;
            }
        }
        for e in &self.edges {
            if !h.contains(e.range) {
                q.add_edge(e.id.clone(), &self.vertices[e.source], &self.vertices[e.range])?;
            }
        }
        Ok(q)
    }

    /// The subgraph with the given edge removed (identifiers preserved).
    pub fn without_edge(&self, e: usize) -> Graph {
        let mut g = Graph::empty();
        for v in &self.vertices {
            g.add_vertex(v.clone()).expect("identifiers already unique");
        }
        for (i, edge) in self.edges.iter().enumerate() {
            if i != e {
                g.add_edge(edge.id.clone(), &self.vertices[edge.source], &self.vertices[edge.range])
                    .expect("endpoints already declared");
            }
        }
        g
    }

    /// Searches for a vertex bijection `self → other` preserving edge
    /// multiplicities. Backtracking; meant for the small graphs of the catalog.
    pub fn find_isomorphism(&self, other: &Graph) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        if n != other.vertex_count() || self.edge_count() != other.edge_count() {
            return None;
        }
        let a = self.adjacency_counts();
        let b = other.adjacency_counts();
        let signature = |g: &Graph, m: &Vec<Vec<usize>>, v: usize| {
            (g.out_edges(v).len(), g.in_edges(v).len(), m[v][v])
        };
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];

        fn extend(
            v: usize,
            n: usize,
            a: &[Vec<usize>],
            b: &[Vec<usize>],
            sig_ok: &dyn Fn(usize, usize) -> bool,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if v == n {
                return true;
            }
            for w in 0..n {
                if used[w] || !sig_ok(v, w) {
                    continue;
                }
                let consistent = (0..v).all(|u| a[u][v] == b[map[u]][w] && a[v][u] == b[w][map[u]]);
                if !consistent {
                    continue;
                }
                map[v] = w;
                used[w] = true;
                if extend(v + 1, n, a, b, sig_ok, map, used) {
                    return true;
                }
                used[w] = false;
            }
            false
        }

        let sig_ok = |v: usize, w: usize| signature(self, &a, v) == signature(other, &b, w);
        if extend(0, n, &a, &b, &sig_ok, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        self.find_isomorphism(other).is_some()
    }

    fn adjacency_counts(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0usize; n]; n];
        for e in &self.edges {
            m[e.source][e.range] += 1;
        }
        m
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cuntz() -> Graph {
        Graph::parse("vertex w\nedge a w w\nedge b w w\n").unwrap()
    }

    fn lambda() -> Graph {
        Graph::new(
            ["w", "vbar"],
            [("a", "w", "w"), ("b", "w", "w"), ("f", "w", "vbar"), ("ebar", "vbar", "vbar")],
        )
        .unwrap()
    }

    #[test]
    fn parses_two_loop_graph() {
        let g = cuntz();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 2);
        assert!(g.sinks().is_empty());
    }

    #[test]
    fn empty_spec_is_empty_graph() {
        let g = Graph::parse("# nothing here\n\n").unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.adjacency_matrix().rows(), 0);
    }

    #[test]
    fn undeclared_range_is_rejected() {
        let err = Graph::parse("vertex a\nedge e a b\n").unwrap_err();
        assert_eq!(err, GraphError::UndeclaredVertex { edge: "e".into(), vertex: "b".into() });
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = Graph::parse("vertex a\n\nedge e a\n").unwrap_err();
        assert!(matches!(err, GraphError::Syntax { line: 3, .. }));
        let err = Graph::parse("vertex a\nnode b\n").unwrap_err();
        assert!(matches!(err, GraphError::Syntax { line: 2, .. }));
    }

    #[test]
    fn duplicate_identifiers_are_rejected() {
        assert_eq!(
            Graph::parse("vertex a\nvertex a\n").unwrap_err(),
            GraphError::DuplicateVertex("a".into())
        );
        assert_eq!(
            Graph::parse("vertex a\nedge e a a\nedge e a a\n").unwrap_err(),
            GraphError::DuplicateEdge("e".into())
        );
    }

    #[test]
    fn json_and_text_forms_agree() {
        let g = lambda();
        let json = serde_json::to_string(&g.to_object()).unwrap();
        assert_eq!(Graph::parse(&json).unwrap(), g);
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn adjacency_of_two_loops_is_two() {
        let a = cuntz().adjacency_matrix();
        assert_eq!(a.to_i64_rows(), vec![vec![2]]);
        let g = Graph::new(["x", "y"], Vec::<(&str, &str, &str)>::new()).unwrap();
        assert!(g.adjacency_matrix().is_zero());
    }

    #[test]
    fn adjacency_block_form_with_vbar_first() {
        let g = Graph::new(
            ["vbar", "w"],
            [("ebar", "vbar", "vbar"), ("a", "w", "w"), ("b", "w", "w"), ("f", "w", "vbar")],
        )
        .unwrap();
        assert_eq!(g.adjacency_matrix().to_i64_rows(), vec![vec![1, 0], vec![1, 2]]);
    }

    #[test]
    fn path_counts_in_two_loop_graph() {
        let g = cuntz();
        assert_eq!(g.enumerate_paths(2, None).len(), 1 + 2 + 4);
        let zero = g.enumerate_paths(0, None);
        assert!(zero.iter().all(|p| p.is_empty()));
        assert_eq!(zero.len(), 1);
    }

    #[test]
    fn hereditary_sets_in_lambda() {
        let g = lambda();
        let vbar = g.vertex_set(["vbar"]).unwrap();
        assert!(g.is_hereditary(&vbar));
        assert!(g.is_hereditary(&VertexSet::new()));
        assert!(!g.is_hereditary(&g.vertex_set(["w"]).unwrap()));
        assert_eq!(g.saturate(&vbar).unwrap(), vbar);
    }

    #[test]
    fn saturation_adds_feeding_vertices() {
        let g = Graph::new(
            ["v0", "v1", "x"],
            [("e0", "v0", "v0"), ("e0_1", "v0", "v1"), ("g", "x", "v1")],
        )
        .unwrap();
        let h = g.vertex_set(["v1"]).unwrap();
        assert_eq!(g.saturate(&h).unwrap(), g.vertex_set(["v1", "x"]).unwrap());
        assert!(matches!(
            g.saturate(&g.vertex_set(["x"]).unwrap()),
            Err(GraphError::NotHereditary(_))
        ));
        assert!(matches!(g.quotient_graph(&h), Err(GraphError::NotSaturated(_))));
    }

    #[test]
    fn quotient_by_empty_set_is_identity() {
        let g = lambda();
        assert_eq!(g.quotient_graph(&VertexSet::new()).unwrap(), g);
        let q = g.quotient_graph(&g.vertex_set(["vbar"]).unwrap()).unwrap();
        assert_eq!(q, cuntz());
    }

    #[test]
    fn isomorphism_detects_relabelling() {
        let g = Graph::new(["p", "q"], [("x", "p", "p"), ("y", "p", "q")]).unwrap();
        let h = Graph::new(["s", "t"], [("u", "t", "s"), ("w", "t", "t")]).unwrap();
        assert_eq!(g.find_isomorphism(&h), Some(vec![1, 0]));
        let k = Graph::new(["s", "t"], [("u", "t", "s"), ("w", "s", "s")]).unwrap();
        assert!(!g.is_isomorphic(&k));
    }
}
