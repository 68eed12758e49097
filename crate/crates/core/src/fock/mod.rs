//! Dense truncated-Fock-space linear algebra: the brute-force reference for
//! every closed-form result in the crate.

pub mod evolve;
pub mod operator;
pub mod sparse;
pub mod space;
pub mod state;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use evolve::{connected_blocks, evolve, evolve_sparse, matrix_exp, propagator};
pub use operator::Operator;
pub use space::{Mode, TruncatedSpace, DENSE_ENTRY_CAP};
pub use sparse::SparseOperator;
pub use state::{
    coherent_state, coherent_state_with_tail, fidelity, CoherentState, Conditioned, DensityMatrix, StateVector,
};

/// Default cutoff of the mechanical mode.
pub const DEFAULT_NEMS_DIM: usize = 30;

pub(crate) fn dump_matrix_csv(m: &DMatrix<Complex64>) -> String {
    use crate::format::c_exp;
    let mut out = String::new();
    for i in 0..m.nrows() {
        let cells: Vec<String> = (0..m.ncols())
            .flat_map(|j| [c_exp(m[(i, j)].re), c_exp(m[(i, j)].im)])
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
