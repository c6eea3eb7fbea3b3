//! Pullback squares of trimmed graphs and their Mayer–Vietoris sequences.
//!
//! For a pullback `P = A ×_base B` with `A` AF (so `K₁(A) = 0`) and `P` AF,
//! the six-term sequence collapses to
//!
//! ```text
//! 0 → K₁(B) → K₁(base) →∂ K₀(P) →ρ K₀(A) ⊕ K₀(B) →σ₁*−σ₂* K₀(base) → 0
//! ```
//!
//! so `K₀(P)` is an extension of `ker(σ₁* − σ₂*)` by `coker(K₁(B) → K₁(base))`.

mod chains;
mod milnor;
mod sequence;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::intlin::GroupError;
use crate::ktheory::KError;
use crate::lpa::canonical::{canonical_homs, CanonicalHoms, CommutationRow};
use crate::lpa::LpaError;

pub use chains::{
    projective_chain, sphere_milnor, teardrop_chain, teardrop_milnor, verify_qlpb, ChainStep, QlpbReport,
};
pub use milnor::{boundary_class, milnor_idempotent, MilnorIdempotent, MilnorOutcome, PairElement};
pub use sequence::{
    assemble_fixed_sequence, fix_labels, fixed_sequence_from_maps, identified_sequence, solve_fixed_k0, AData, FixedK0, FixedSequence, FixedSlot,
    IdentifiedInput, SixTermSequence,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MvError {
    #[error("{0}")]
    Trim(String),
    #[error(transparent)]
    Lpa(#[from] LpaError),
    #[error(transparent)]
    K(#[from] KError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("missing data: {0}")]
    Missing(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("Milnor construction failed: {0}")]
    Milnor(String),
}

/// The square `C*(E) → C*(E″), C*(E′)⊗C(S¹) → C*(E″)⊗C(S¹)`.
#[derive(Clone, Debug)]
pub struct PullbackDiagram {
    pub homs: CanonicalHoms,
    /// Top, left, right, bottom.
    pub corners: [String; 4],
    pub table: Vec<CommutationRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackReport {
    pub corners: [String; 4],
    pub vbar: String,
    pub ebar: String,
    pub commutes: bool,
    pub legs_surjective: bool,
    pub table: Vec<CommutationRow>,
}

pub fn assemble_pullback(g: &Graph, vbar: &str) -> Result<PullbackDiagram, MvError> {
    let homs = canonical_homs(g, vbar)?;
    let table = homs.commutation_table();
    if let Some(row) = table.iter().find(|r| !r.equal) {
        return Err(MvError::Refused(format!("square does not commute on {}", row.generator)));
    }
    if !homs.pi1.surjective_on_generators(false) || !homs.pi2_tensor_id.surjective_on_generators(true) {
        return Err(MvError::Refused("a leg into the base is not surjective".into()));
    }
    let corners = [
        "C*(E)".to_string(),
        "C*(E″)".to_string(),
        "C*(E′)⊗C(S¹)".to_string(),
        "C*(E″)⊗C(S¹)".to_string(),
    ];
    Ok(PullbackDiagram { homs, corners, table })
}

impl PullbackDiagram {
    pub fn report(&self) -> PullbackReport {
        let g = self.homs.e.graph();
        PullbackReport {
            corners: self.corners.clone(),
            vbar: g.vertex_id(self.homs.vbar).to_string(),
            ebar: g.edge_id(self.homs.ebar).to_string(),
            commutes: self.table.iter().all(|r| r.equal),
            legs_surjective: true,
            table: self.table.clone(),
        }
    }
}
