//! Trimmability of a graph at a vertex `v̄`, the decomposition
//! `E ↦ (E′, E″)`, and one-loop / one-sink extensions.
//!
//! (T1): `s⁻¹(v̄) = {ē}` with `ē` a loop, and some edge other than `ē` enters `v̄`.
//! (T2): every `v ≠ v̄` emitting an edge into `v̄` also emits an edge elsewhere.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrimError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("not trimmable at `{vertex}`: {reasons}")]
    NotTrimmable { vertex: String, reasons: String },
    #[error("attachment multiset is empty")]
    EmptyAttach,
    #[error("cannot attach to `{0}`: it is a sink")]
    AttachToSink(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// (T1): `v̄` does not emit exactly one edge.
    OutDegree { count: usize },
    /// (T1): the unique outgoing edge is not a loop.
    NotLoop { edge: String },
    /// (T1): nothing but `ē` enters `v̄`.
    NoEntry,
    /// (T2): `vertex` emits only into `v̄`.
    OnlyIntoVbar { vertex: String },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::OutDegree { count } => write!(f, "(T1) vbar emits {count} edges, expected one loop"),
            Witness::NotLoop { edge } => write!(f, "(T1) the outgoing edge `{edge}` is not a loop"),
            Witness::NoEntry => write!(f, "(T1) no edge other than the loop enters vbar"),
            Witness::OnlyIntoVbar { vertex } => write!(f, "(T2) `{vertex}` emits edges only into vbar"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrimCertificate {
    pub vbar: String,
    pub ebar: Option<String>,
    pub t1_holds: bool,
    pub t2_holds: bool,
    pub witnesses: Vec<Witness>,
}

impl TrimCertificate {
    pub fn trimmable(&self) -> bool {
        self.t1_holds && self.t2_holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrimResult {
    pub e_prime: Graph,
    pub e_dprime: Graph,
}

pub fn check_trimmable(g: &Graph, vbar: &str) -> Result<TrimCertificate, TrimError> {
    let v = g.vertex(vbar)?;
    let out = g.out_edges(v);
    let mut witnesses = Vec::new();
    let ebar = match out {
        [e] if g.range(*e) == v => Some(*e),
        [e] => {
            witnesses.push(Witness::NotLoop { edge: g.edge_id(*e).to_string() });
            None
        }
        _ => {
            witnesses.push(Witness::OutDegree { count: out.len() });
            None
        }
    };
    let entering: Vec<usize> = g.in_edges(v).iter().copied().filter(|&e| Some(e) != ebar).collect();
    if entering.is_empty() {
        witnesses.push(Witness::NoEntry);
    }
    let t1_holds = witnesses.is_empty();

    // v̄ itself is excluded; under (T1) it cannot occur anyway.
    let mut feeders: Vec<usize> = entering.iter().map(|&e| g.source(e)).filter(|&s| s != v).collect();
    feeders.dedup();
    feeders.sort_unstable();
    feeders.dedup();
    let starved: Vec<usize> = feeders
        .into_iter()
        .filter(|&s| g.out_edges(s).iter().all(|&e| g.range(e) == v))
        .collect();
    let t2_holds = starved.is_empty();
    witnesses.extend(starved.into_iter().map(|s| Witness::OnlyIntoVbar { vertex: g.vertex_id(s).to_string() }));

    Ok(TrimCertificate {
        vbar: vbar.to_string(),
        ebar: ebar.map(|e| g.edge_id(e).to_string()),
        t1_holds,
        t2_holds,
        witnesses,
    })
}

pub fn trimmable_vertices(g: &Graph) -> VertexSet {
    (0..g.vertex_count())
        .filter(|&v| check_trimmable(g, g.vertex_id(v)).is_ok_and(|c| c.trimmable()))
        .collect()
}

fn require_trimmable(g: &Graph, vbar: &str) -> Result<(TrimCertificate, usize, usize), TrimError> {
    let cert = check_trimmable(g, vbar)?;
    if !cert.trimmable() {
        let reasons = cert.witnesses.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        return Err(TrimError::NotTrimmable { vertex: vbar.to_string(), reasons });
    }
    let v = g.vertex(vbar)?;
    let e = g.find_edge(cert.ebar.as_deref().expect("trimmable certificates name the loop"))?;
    Ok((cert, v, e))
}

/// `E′ = E ∖ {ē}` and `E″ = E/{v̄}`, identifiers preserved.
pub fn trim(g: &Graph, vbar: &str) -> Result<TrimResult, TrimError> {
    let (_, v, e) = require_trimmable(g, vbar)?;
    let e_prime = g.without_edge(e);
    let e_dprime = g.quotient_graph(&[v].into_iter().collect())?;
    Ok(TrimResult { e_prime, e_dprime })
}

/// The vertex and loop indices of a trimmable pair, with its certificate.
pub fn trim_data(g: &Graph, vbar: &str) -> Result<(TrimCertificate, usize, usize), TrimError> {
    require_trimmable(g, vbar)
}

fn extend(g: &Graph, vbar: &str, attach: &[&str], with_loop: bool) -> Result<Graph, TrimError> {
    if attach.is_empty() {
        return Err(TrimError::EmptyAttach);
    }
    for a in attach {
        let v = g.vertex(a)?;
        if g.is_sink(v) {
            return Err(TrimError::AttachToSink(a.to_string()));
        }
    }
    let mut out = g.clone();
    out.add_vertex(vbar.to_string())?;
    let mut seen: Vec<&str> = Vec::new();
    for a in attach {
        let k = seen.iter().filter(|s| *s == a).count();
        seen.push(a);
        out.add_edge(format!("{a}_to_{vbar}_{k}"), a, vbar)?;
    }
    if with_loop {
        out.add_edge(format!("{vbar}_loop"), vbar, vbar)?;
    }
    Ok(out)
}

/// Adds `v̄`, one edge `a → v̄` per occurrence in `attach`, and the loop at `v̄`.
pub fn one_loop_extension(g: &Graph, vbar: &str, attach: &[&str]) -> Result<Graph, TrimError> {
    extend(g, vbar, attach, true)
}

/// As `one_loop_extension`, without the loop.
pub fn one_sink_extension(g: &Graph, vbar: &str, attach: &[&str]) -> Result<Graph, TrimError> {
    extend(g, vbar, attach, false)
}
