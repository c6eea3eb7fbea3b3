//! Bratteli diagram of the gauge-invariant subalgebra.
//!
//! Level `n` is spanned by `S_x S_y*` with `|x| = |y| = n` ending at a
//! non-sink, plus `|x| = |y| = k ≤ n` ending at a sink. A block is indexed by
//! the common range (and `k` for sinks); its dimension is the number of
//! paths of that length into it. The embedding into level `n + 1` expands
//! non-sink blocks by (CK2) and carries sink blocks along unchanged.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::graph::Graph;
use crate::intlin::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BlockKey {
    Vertex(usize),
    /// Sink `w` reached by paths of length `k`.
    Sink(usize, usize),
}

#[derive(Clone, Debug)]
pub struct BratteliDiagram {
    /// Block labels per level, sorted.
    pub blocks: Vec<Vec<BlockKey>>,
    /// Block dimensions per level, aligned with `blocks`.
    pub dims: Vec<Vec<BigInt>>,
    /// `maps[n]` has one column per block of level `n` and one row per block of level `n + 1`.
    pub maps: Vec<IntMatrix>,
    names: Vec<String>,
}

impl BratteliDiagram {
    pub fn levels(&self) -> usize {
        self.blocks.len()
    }

    pub fn has_sink_blocks(&self) -> bool {
        self.blocks.iter().flatten().any(|b| matches!(b, BlockKey::Sink(..)))
    }

    pub fn block_name(&self, b: BlockKey) -> String {
        match b {
            BlockKey::Vertex(v) => self.names[v].clone(),
            BlockKey::Sink(w, k) => format!("({},{k})", self.names[w]),
        }
    }

    /// Constant block set from level 1 on and no sinks.
    pub fn is_stationary(&self) -> bool {
        !self.has_sink_blocks() && self.blocks.len() >= 2 && self.blocks[1..].windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for BratteliDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (bs, ds)) in self.blocks.iter().zip(&self.dims).enumerate() {
            let parts: Vec<String> = bs.iter().zip(ds).map(|(b, d)| format!("{}:{d}", self.block_name(*b))).collect();
            writeln!(f, "level {n}: {}", parts.join(" "))?;
        }
        Ok(())
    }
}

fn path_counts_step(g: &Graph, c: &[BigInt]) -> Vec<BigInt> {
    let mut next = vec![BigInt::zero(); g.vertex_count()];
    for e in 0..g.edge_count() {
        next[g.range(e)] += &c[g.source(e)];
    }
    next
}

/// Levels `0..=levels`; a graph without edges has level 0 only.
pub fn fixed_point_bratteli(g: &Graph, levels: usize) -> BratteliDiagram {
    let top = if g.edge_count() == 0 { 0 } else { levels };
    let n_v = g.vertex_count();
    // counts[n][v]: paths of length n ending at v.
    let mut counts = vec![vec![BigInt::from(1); n_v]];
    for _ in 0..top {
        let next = path_counts_step(g, counts.last().expect("nonempty"));
        counts.push(next);
    }
    let mut blocks = Vec::new();
    let mut dims = Vec::new();
    for n in 0..=top {
        let mut level: Vec<(BlockKey, BigInt)> = Vec::new();
        for v in 0..n_v {
            if g.is_sink(v) {
                for (k, c) in counts.iter().enumerate().take(n + 1) {
                    if !c[v].is_zero() {
                        level.push((BlockKey::Sink(v, k), c[v].clone()));
                    }
                }
            } else if !counts[n][v].is_zero() {
                level.push((BlockKey::Vertex(v), counts[n][v].clone()));
            }
        }
        level.sort();
        blocks.push(level.iter().map(|(b, _)| *b).collect::<Vec<_>>());
        dims.push(level.into_iter().map(|(_, d)| d).collect());
    }
    let mut maps = Vec::new();
    for n in 0..top {
        let (src, dst) = (&blocks[n], &blocks[n + 1]);
        let mut m = IntMatrix::zeros(dst.len(), src.len());
        let row = |b: BlockKey| dst.binary_search(&b).expect("targets of nonempty blocks are nonempty");
        for (j, &b) in src.iter().enumerate() {
            match b {
                BlockKey::Sink(..) => m.add_at(row(b), j, 1),
                BlockKey::Vertex(v) => {
                    for &e in g.out_edges(v) {
                        let w = g.range(e);
                        let t = if g.is_sink(w) { BlockKey::Sink(w, n + 1) } else { BlockKey::Vertex(w) };
                        m.add_at(row(t), j, 1);
                    }
                }
            }
        }
        maps.push(m);
    }
    BratteliDiagram { blocks, dims, maps, names: g.vertices().to_vec() }
}
