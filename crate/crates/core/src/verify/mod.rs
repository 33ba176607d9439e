//! Bounded discharge of verification conditions and the matrix view of a
//! program.

mod domain;
mod matrix;
mod vc;

pub use domain::{Domain, Enumeration, Mode, StateSpace, DEFAULT_CAP, DEFAULT_SAMPLES};
pub use matrix::{
    all_states, apply_matrix, extensionally_equal, fixpoint_check, matrix_of, matrix_product,
    relation, AssertionVector, CodeMatrix, FixpointReport, FixpointWitness, MatrixCell,
    MatrixError, RowImage, RowSummary, WitnessKind,
};
pub use vc::{
    check_vc, extract_vcs, refute, relevant_vars, verify_program, Status, VcReport, VcResult,
    Witness,
};
