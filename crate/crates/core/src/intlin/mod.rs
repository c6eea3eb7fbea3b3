//! Exact integer linear algebra over arbitrary-precision integers: Smith
//! normal form, finitely generated abelian groups and their homomorphisms.

mod group;
mod matrix;
mod snf;

pub use group::{exactness_check, solve_split_extension, FGAbelianGroup, GroupError, GroupHom, GroupSummary, Presentation};
pub use matrix::{to_big, vec_is_zero, IntMatrix};
pub use snf::{kernel_basis, lattice_basis, smith_normal_form, solve, SmithForm};
