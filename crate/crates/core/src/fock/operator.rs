use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::space::{Mode, TruncatedSpace};
use crate::error::{input, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense operator on a truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: TruncatedSpace,
    matrix: DMatrix<Complex64>,
}

impl Operator {
    pub fn from_matrix(space: TruncatedSpace, matrix: DMatrix<Complex64>) -> Result<Self> {
        space.check_dense()?;
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return input(format!(
                "matrix is {}×{}, space has dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: &TruncatedSpace) -> Result<Self> {
        space.check_dense()?;
        let d = space.dim();
        Ok(Self {
            space: space.clone(),
            matrix: DMatrix::identity(d, d),
        })
    }

    pub fn zeros(space: &TruncatedSpace) -> Result<Self> {
        space.check_dense()?;
        let d = space.dim();
        Ok(Self {
            space: space.clone(),
            matrix: DMatrix::zeros(d, d),
        })
    }

    /// Ladder operator with ⟨n−1|a|n⟩ = √n.
    pub fn annihilation(mode: Mode, dim: usize) -> Result<Self> {
        let space = TruncatedSpace::single(mode, dim)?;
        let mut m = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        Ok(Self { space, matrix: m })
    }

    pub fn creation(mode: Mode, dim: usize) -> Result<Self> {
        Ok(Self::annihilation(mode, dim)?.adjoint())
    }

    /// a†a, exactly diag(0, 1, …, dim − 1).
    pub fn number(mode: Mode, dim: usize) -> Result<Self> {
        let space = TruncatedSpace::single(mode, dim)?;
        let mut m = DMatrix::zeros(dim, dim);
        for n in 0..dim {
            m[(n, n)] = Complex64::new(n as f64, 0.0);
        }
        Ok(Self { space, matrix: m })
    }

    pub fn space(&self) -> &TruncatedSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * c,
        }
    }

    /// Kronecker product; the modes of `other` follow those of `self`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let space = self.space.concat(&other.space)?;
        space.check_dense()?;
        Ok(Self {
            space,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// Lifts a single-mode operator into `space`, acting as the identity on
    /// every other mode.
    pub fn embed(&self, space: &TruncatedSpace) -> Result<Self> {
        if self.space.modes().len() != 1 {
            return input("only single-mode operators can be embedded");
        }
        let mode = self.space.modes()[0];
        if space.dim_of(mode)? != self.dim() {
            return input(format!(
                "mode {mode} has cutoff {} here but {} in the target space",
                self.dim(),
                space.dim_of(mode)?
            ));
        }
        space.check_dense()?;
        let mut m = DMatrix::from_element(1, 1, ONE);
        for (&md, &d) in space.modes().iter().zip(space.dims()) {
            let factor = if md == mode { self.matrix.clone() } else { DMatrix::identity(d, d) };
            m = m.kronecker(&factor);
        }
        Ok(Self {
            space: space.clone(),
            matrix: m,
        })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok((self * other)? - (other * self)?)
    }

    /// max |A − A†| over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Row-major `re,im` pairs, one matrix row per line.
    pub fn dump_csv(&self) -> String {
        super::dump_matrix_csv(&self.matrix)
    }

    fn check_same_space(&self, other: &Self) {
        assert_eq!(self.space, other.space, "operators live on different spaces");
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        self.check_same_space(&rhs);
        Operator {
            space: self.space,
            matrix: self.matrix + rhs.matrix,
        }
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        self.check_same_space(&rhs);
        Operator {
            space: self.space,
            matrix: self.matrix - rhs.matrix,
        }
    }
}

impl Mul for &Operator {
    type Output = Result<Operator>;
    fn mul(self, rhs: &Operator) -> Result<Operator> {
        if self.space != rhs.space {
            return input("operators live on different spaces");
        }
        Ok(Operator {
            space: self.space.clone(),
            matrix: &self.matrix * &rhs.matrix,
        })
    }
}
