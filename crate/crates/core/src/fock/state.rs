use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::operator::{Operator, ZERO};
use super::space::{Mode, TruncatedSpace};
use super::sparse::SparseOperator;
use crate::error::{input, Error, Result};
use crate::poisson;

/// Tolerance on ‖ψ‖ − 1 for a valid state vector.
pub const NORM_TOL: f64 = 1e-12;
/// Default bound on the discarded coherent-state tail.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: TruncatedSpace,
    data: DVector<Complex64>,
}

impl StateVector {
    /// Wraps `data`, which must already have unit norm.
    pub fn new(space: TruncatedSpace, data: DVector<Complex64>) -> Result<Self> {
        if data.len() != space.dim() {
            return input(format!("vector length {} does not match dimension {}", data.len(), space.dim()));
        }
        let norm = data.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return input(format!("state norm {norm} differs from 1 by more than {NORM_TOL:e}"));
        }
        Ok(Self { space, data })
    }

    /// Rescales `data` to unit norm.
    pub fn normalized(space: TruncatedSpace, data: DVector<Complex64>) -> Result<Self> {
        if data.len() != space.dim() {
            return input(format!("vector length {} does not match dimension {}", data.len(), space.dim()));
        }
        let norm = data.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return input("cannot normalize a zero or non-finite vector");
        }
        Ok(Self {
            space,
            data: data.unscale(norm),
        })
    }

    pub fn basis(space: &TruncatedSpace, index: usize) -> Result<Self> {
        if index >= space.dim() {
            return input(format!("basis index {index} out of range"));
        }
        let mut data = DVector::zeros(space.dim());
        data[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            space: space.clone(),
            data,
        })
    }

    /// Fock state |n⟩ of a single mode.
    pub fn fock(mode: Mode, dim: usize, n: usize) -> Result<Self> {
        Self::basis(&TruncatedSpace::single(mode, dim)?, n)
    }

    pub fn space(&self) -> &TruncatedSpace {
        &self.space
    }

    pub fn data(&self) -> &DVector<Complex64> {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.space != other.space {
            return input("states live on different spaces");
        }
        Ok(self.data.dotc(&other.data))
    }

    /// Tensor product; the modes of `other` follow those of `self`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let space = self.space.concat(&other.space)?;
        let data = self.data.kronecker(&other.data);
        Ok(Self { space, data })
    }

    pub fn product(factors: &[&StateVector]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::Input("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, f| acc.tensor(f))
    }

    pub fn expectation(&self, op: &Operator) -> Result<Complex64> {
        if op.space() != &self.space {
            return input("operator and state live on different spaces");
        }
        Ok(self.data.dotc(&(op.matrix() * &self.data)))
    }

    pub fn expectation_sparse(&self, op: &SparseOperator) -> Result<Complex64> {
        if op.space() != &self.space {
            return input("operator and state live on different spaces");
        }
        Ok(self.data.dotc(&op.apply(&self.data)))
    }

    /// Reduced state on `keep` of the pure state |ψ⟩⟨ψ|, computed without
    /// forming the full density matrix.
    pub fn reduced_density(&self, keep: &[Mode]) -> Result<DensityMatrix> {
        let sub = self.space.subspace(keep)?;
        sub.check_dense()?;
        let (kept, rest) = self.space.split_indices(keep);
        let dk = sub.dim();
        let dr = self.space.dim() / dk;
        let mut m = DMatrix::zeros(dk, dr);
        for (i, v) in self.data.iter().enumerate() {
            m[(kept[i], rest[i])] = *v;
        }
        let rho = &m * m.adjoint();
        Ok(DensityMatrix { space: sub, data: rho })
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        self.space.check_dense()?;
        Ok(DensityMatrix {
            space: self.space.clone(),
            data: &self.data * self.data.adjoint(),
        })
    }

    /// Projects the modes of `outcome` onto that state. Returns the
    /// probability of the outcome and, when it is non-zero, the normalized
    /// state of the remaining modes.
    pub fn condition_on(&self, outcome: &StateVector) -> Result<Conditioned> {
        let measured = outcome.space.modes().to_vec();
        let sub = self.space.subspace(&measured)?;
        if sub != outcome.space {
            return input("outcome space must match the measured modes and cutoffs");
        }
        let remaining_modes = self.space.complement(&measured);
        if remaining_modes.is_empty() {
            return input("conditioning on every mode leaves nothing behind");
        }
        let remaining = self.space.subspace(&remaining_modes)?;
        let (kept, rest) = self.space.split_indices(&remaining_modes);
        let mut v = DVector::zeros(remaining.dim());
        for (i, a) in self.data.iter().enumerate() {
            v[kept[i]] += outcome.data[rest[i]].conj() * a;
        }
        let probability = v.norm_squared();
        let state = if probability > 0.0 {
            Some(StateVector::normalized(remaining, v)?)
        } else {
            None
        };
        Ok(Conditioned { probability, state })
    }

    /// Row-major `re,im` pairs.
    pub fn dump_csv(&self) -> String {
        super::dump_matrix_csv(&DMatrix::from_column_slice(1, self.data.len(), self.data.as_slice()))
    }
}

#[derive(Debug, Clone)]
pub struct Conditioned {
    pub probability: f64,
    pub state: Option<StateVector>,
}

/// A truncated coherent state together with the mass discarded by the cutoff.
#[derive(Debug, Clone)]
pub struct CoherentState {
    pub state: StateVector,
    /// Σ_{n ≥ dim} |Cₙ|² before renormalization.
    pub tail_mass: f64,
}

/// Coherent state |α⟩ truncated to `dim` levels, with the default tail tolerance.
pub fn coherent_state(mode: Mode, amplitude: Complex64, dim: usize) -> Result<StateVector> {
    Ok(coherent_state_with_tail(mode, amplitude, dim, DEFAULT_TAIL_TOL)?.state)
}

/// Coherent state |α⟩ with amplitudes Cₙ = e^{−|α|²/2} αⁿ/√n!, renormalized
/// after truncation. Fails when the discarded tail exceeds `tail_tol`.
pub fn coherent_state_with_tail(mode: Mode, amplitude: Complex64, dim: usize, tail_tol: f64) -> Result<CoherentState> {
    let space = TruncatedSpace::single(mode, dim)?;
    if !(amplitude.re.is_finite() && amplitude.im.is_finite()) {
        return input("coherent amplitude must be finite");
    }
    let lambda = amplitude.norm_sqr();
    let tail_mass = poisson::tail(lambda, dim);
    if tail_mass > tail_tol {
        return Err(Error::Truncation {
            tail: tail_mass,
            tolerance: tail_tol,
            required_dim: poisson::required_cutoff(lambda, tail_tol),
        });
    }
    let mut data = DVector::from_element(dim, ZERO);
    let mut c = Complex64::new((-lambda / 2.0).exp(), 0.0);
    data[0] = c;
    for n in 1..dim {
        c = c * amplitude / (n as f64).sqrt();
        data[n] = c;
    }
    Ok(CoherentState {
        state: StateVector::normalized(space, data)?,
        tail_mass,
    })
}

/// |⟨ψ|φ⟩|².
pub fn fidelity(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    Ok(psi.inner(phi)?.norm_sqr().min(1.0))
}

/// Tolerances a density matrix must meet.
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const EIGEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: TruncatedSpace,
    data: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(space: TruncatedSpace, data: DMatrix<Complex64>) -> Result<Self> {
        space.check_dense()?;
        let d = space.dim();
        if data.nrows() != d || data.ncols() != d {
            return input("density matrix shape does not match the space");
        }
        let herm = (&data - data.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if herm > HERMITIAN_TOL {
            return input(format!("density matrix not Hermitian (defect {herm:.3e})"));
        }
        let tr = data.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return input(format!("density matrix trace {tr} is not 1"));
        }
        let sym = (&data + data.adjoint()) * Complex64::new(0.5, 0.0);
        let min_eig = sym.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < -EIGEN_TOL {
            return input(format!("density matrix has eigenvalue {min_eig:.3e}"));
        }
        Ok(Self { space, data })
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        psi.to_density()
    }

    /// Convex combination Σ wₖ |ψₖ⟩⟨ψₖ| without validation of the weights.
    pub fn mixture(space: &TruncatedSpace, terms: &[(f64, &StateVector)]) -> Result<Self> {
        space.check_dense()?;
        let d = space.dim();
        let mut data = DMatrix::zeros(d, d);
        for (w, psi) in terms {
            if psi.space() != space {
                return input("mixture component lives on a different space");
            }
            data += psi.data() * psi.data().adjoint() * Complex64::new(*w, 0.0);
        }
        Ok(Self {
            space: space.clone(),
            data,
        })
    }

    pub fn maximally_mixed(space: &TruncatedSpace) -> Result<Self> {
        space.check_dense()?;
        let d = space.dim();
        Ok(Self {
            space: space.clone(),
            data: DMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0),
        })
    }

    pub fn space(&self) -> &TruncatedSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// Tr ρ² = Σᵢⱼ |ρᵢⱼ|² for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// 1 − Tr ρ², clamped to [0, 1 − 1/D].
    pub fn linear_entropy(&self) -> f64 {
        let d = self.space.dim() as f64;
        (1.0 - self.purity()).clamp(0.0, 1.0 - 1.0 / d)
    }

    /// Partial trace over every mode not in `keep`.
    pub fn partial_trace(&self, keep: &[Mode]) -> Result<Self> {
        let sub = self.space.subspace(keep)?;
        let (kept, rest) = self.space.split_indices(keep);
        let dk = sub.dim();
        let mut out = DMatrix::zeros(dk, dk);
        let d = self.space.dim();
        for i in 0..d {
            for j in 0..d {
                if rest[i] == rest[j] {
                    out[(kept[i], kept[j])] += self.data[(i, j)];
                }
            }
        }
        Ok(Self { space: sub, data: out })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.space != other.space {
            return input("density matrices live on different spaces");
        }
        Ok((&self.data - &other.data).iter().map(|c| c.norm()).fold(0.0, f64::max))
    }

    pub fn dump_csv(&self) -> String {
        super::dump_matrix_csv(&self.data)
    }
}
