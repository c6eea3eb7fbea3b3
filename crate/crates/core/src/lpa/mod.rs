//! Leavitt path algebras over `ℤ[u, u⁻¹]` with a normal form, a text syntax,
//! generator-level homomorphisms and the canonical maps attached to a trim.

mod algebra;
pub mod canonical;
mod hom;
mod laurent;
mod parse;
pub mod word;

use thiserror::Error;

pub use algebra::{generators, Lpa, LpaElement, Monomial};
pub use hom::GenHom;
pub use laurent::Laurent;
pub use parse::parse_element;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpaError {
    #[error("elements belong to different graph algebras")]
    GraphMismatch,
    #[error("legs `{0}` and `{1}` end at different vertices")]
    RangeMismatch(String, String),
    #[error("undefined generator `{0}`")]
    UndefinedGenerator(String),
    #[error("no image given for `{0}`")]
    MissingImage(String),
    #[error("{0}")]
    Hom(String),
    #[error("homomorphism `{0}` is not well defined: {1}")]
    IllDefinedHom(String, String),
    #[error("homomorphism `{0}` has not been verified")]
    Unverified(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
