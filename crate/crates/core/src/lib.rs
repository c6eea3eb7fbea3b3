//! Trimmable graph C*-algebras at the combinatorial level.
//!
//! A finite directed graph is modelled together with its Leavitt path
//! algebra over integer Laurent polynomials. On top of that sit the
//! trim decomposition `E ↦ (E′, E″)`, K-theory of graph algebras and of
//! their gauge-invariant subalgebras, and the Mayer–Vietoris machinery that
//! assembles K₀ of fixed-point algebras from pullback diagrams.

pub mod catalog;
pub mod graph;
pub mod intlin;
pub mod ktheory;
pub mod lpa;
pub mod mv;
pub mod trim;

pub use graph::{Graph, GraphError, Path, VertexSet};
pub use intlin::{FGAbelianGroup, GroupHom, IntMatrix};
pub use lpa::{GenHom, Laurent, Lpa, LpaElement, Monomial};
pub use trim::{check_trimmable, trim, TrimCertificate, TrimResult};
