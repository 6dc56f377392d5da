//! Exact linear algebra over the integers: Smith normal form, kernels,
//! cokernels and sublattice operations.

mod matrix;
mod smith;
mod sublattice;

pub use matrix::IntMatrix;
pub use smith::{smith_normal_form, SmithForm};
pub use sublattice::{
    cokernel_invariants, kernel_basis, lattice_intersection, lattice_membership, project_lattice,
    rank, CokernelInvariants, Sublattice,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("malformed matrix: {0}")]
    Shape(String),
}
