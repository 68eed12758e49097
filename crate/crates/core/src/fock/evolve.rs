//! Unitary evolution exp(−iHt)ψ (ħ = 1) by Hermitian eigendecomposition.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::operator::Operator;
use super::sparse::SparseOperator;
use super::state::StateVector;
use crate::error::{input, Result};

/// Largest tolerated max |H − H†|, relative to max(1, max |H|).
pub const HERMITIAN_TOL: f64 = 1e-10;

fn check_hermitian(defect: f64, scale: f64) -> Result<()> {
    if defect > HERMITIAN_TOL * scale.max(1.0) {
        return input(format!("Hamiltonian is not Hermitian (defect {defect:.3e})"));
    }
    Ok(())
}

fn apply_block_propagator(block: DMatrix<Complex64>, t: f64, v: &DVector<Complex64>) -> DVector<Complex64> {
    // Symmetrize so roundoff in the input cannot leak into the eigensolver.
    let h = (&block + block.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let u = &eig.eigenvectors;
    let mut coeffs = u.adjoint() * v;
    for (c, &e) in coeffs.iter_mut().zip(eig.eigenvalues.iter()) {
        *c *= Complex64::from_polar(1.0, -e * t);
    }
    u * coeffs
}

/// exp(−iHt) as a dense matrix.
pub fn propagator(h: &Operator, t: f64) -> Result<Operator> {
    check_hermitian(h.hermiticity_defect(), h.max_abs())?;
    let m = h.matrix();
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t)));
    let u = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
    Operator::from_matrix(h.space().clone(), u)
}

/// exp(−iHt)·ψ₀ for a dense Hermitian H.
pub fn evolve(h: &Operator, t: f64, psi0: &StateVector) -> Result<StateVector> {
    if h.space() != psi0.space() {
        return input("Hamiltonian and state live on different spaces");
    }
    check_hermitian(h.hermiticity_defect(), h.max_abs())?;
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    let out = apply_block_propagator(h.matrix().clone(), t, psi0.data());
    StateVector::normalized(psi0.space().clone(), out)
}

/// exp(−iHt)·ψ₀ for a sparse Hermitian H.
///
/// H is split into the connected components of its nonzero pattern; each
/// block is diagonalized on its own, which keeps the evolution exact while
/// never forming the full matrix.
pub fn evolve_sparse(h: &SparseOperator, t: f64, psi0: &StateVector) -> Result<StateVector> {
    if h.space() != psi0.space() {
        return input("Hamiltonian and state live on different spaces");
    }
    check_hermitian(h.hermiticity_defect(), h.max_abs())?;
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    let blocks = connected_blocks(h);
    let d = h.dim();
    let mut local = vec![usize::MAX; d];
    let mut block_of = vec![0usize; d];
    for (b, idx) in blocks.iter().enumerate() {
        for (k, &i) in idx.iter().enumerate() {
            local[i] = k;
            block_of[i] = b;
        }
    }
    let mut mats: Vec<DMatrix<Complex64>> = blocks.iter().map(|idx| DMatrix::zeros(idx.len(), idx.len())).collect();
    for &(r, c, v) in h.entries() {
        mats[block_of[r]][(local[r], local[c])] += v;
    }

    let psi = psi0.data();
    let mut out = DVector::zeros(d);
    for (idx, block) in blocks.iter().zip(mats) {
        if idx.len() == 1 {
            let i = idx[0];
            out[i] = psi[i] * Complex64::from_polar(1.0, -block[(0, 0)].re * t);
            continue;
        }
        let v = DVector::from_iterator(idx.len(), idx.iter().map(|&i| psi[i]));
        if v.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
            continue;
        }
        let w = apply_block_propagator(block, t, &v);
        for (k, &i) in idx.iter().enumerate() {
            out[i] = w[k];
        }
    }
    StateVector::normalized(psi0.space().clone(), out)
}

/// Index sets of the connected components of H's nonzero pattern.
pub fn connected_blocks(h: &SparseOperator) -> Vec<Vec<usize>> {
    let d = h.dim();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(r, c, _) in h.entries() {
        let (a, b) = (find(&mut parent, r), find(&mut parent, c));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut slot = vec![usize::MAX; d];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..d {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

/// General matrix exponential exp(A) for inputs that need not be Hermitian.
pub fn matrix_exp(a: &Operator) -> Result<Operator> {
    Operator::from_matrix(a.space().clone(), a.matrix().clone().exp())
}
