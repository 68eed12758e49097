use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::operator::{Operator, ONE};
use super::space::TruncatedSpace;
use crate::error::{input, Result};

/// Coordinate-format operator for spaces too large to hold densely.
///
/// Entries are sorted by (row, column) with duplicates merged and exact
/// zeros dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    space: TruncatedSpace,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseOperator {
    pub fn zeros(space: &TruncatedSpace) -> Self {
        Self {
            space: space.clone(),
            entries: Vec::new(),
        }
    }

    fn from_entries(space: TruncatedSpace, raw: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Self {
        let mut map: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (r, c, v) in raw {
            *map.entry((r, c)).or_default() += v;
        }
        let entries = map
            .into_iter()
            .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Self { space, entries }
    }

    pub fn from_dense(op: &Operator) -> Self {
        let m = op.matrix();
        let mut raw = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if m[(i, j)] != Complex64::new(0.0, 0.0) {
                    raw.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_entries(op.space().clone(), raw)
    }

    /// Kronecker product of single-mode factors, with the identity on modes
    /// that have no factor.
    pub fn product_term(space: &TruncatedSpace, factors: &[&Operator]) -> Result<Self> {
        let mut per_mode: Vec<Option<&DMatrix<Complex64>>> = vec![None; space.modes().len()];
        for f in factors {
            if f.space().modes().len() != 1 {
                return input("product terms take single-mode factors");
            }
            let mode = f.space().modes()[0];
            let pos = space.position(mode)?;
            if space.dims()[pos] != f.dim() {
                return input(format!("cutoff mismatch on mode {mode}"));
            }
            if per_mode[pos].is_some() {
                return input(format!("two factors act on mode {mode}"));
            }
            per_mode[pos] = Some(f.matrix());
        }
        let mut acc: Vec<(usize, usize, Complex64)> = vec![(0, 0, ONE)];
        for (pos, &d) in space.dims().iter().enumerate() {
            let local: Vec<(usize, usize, Complex64)> = match per_mode[pos] {
                Some(m) => {
                    let mut v = Vec::new();
                    for i in 0..d {
                        for j in 0..d {
                            if m[(i, j)] != Complex64::new(0.0, 0.0) {
                                v.push((i, j, m[(i, j)]));
                            }
                        }
                    }
                    v
                }
                None => (0..d).map(|i| (i, i, ONE)).collect(),
            };
            let mut next = Vec::with_capacity(acc.len() * local.len());
            for &(r, c, v) in &acc {
                for &(lr, lc, lv) in &local {
                    next.push((r * d + lr, c * d + lc, v * lv));
                }
            }
            acc = next;
        }
        Ok(Self::from_entries(space.clone(), acc))
    }

    pub fn space(&self) -> &TruncatedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_entries(self.space.clone(), self.entries.iter().map(|&(r, col, v)| (r, col, v * c)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return input("operators live on different spaces");
        }
        Ok(Self::from_entries(
            self.space.clone(),
            self.entries.iter().chain(&other.entries).copied(),
        ))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_entries(self.space.clone(), self.entries.iter().map(|&(r, c, v)| (c, r, v.conj())))
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(self.dim());
        for &(r, c, a) in &self.entries {
            out[r] += a * v[c];
        }
        out
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.adjoint();
        let diff = self.add(&adj.scale(Complex64::new(-1.0, 0.0))).expect("same space");
        diff.entries.iter().map(|e| e.2.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.2.norm()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Result<Operator> {
        self.space.check_dense()?;
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        Operator::from_matrix(self.space.clone(), m)
    }
}
