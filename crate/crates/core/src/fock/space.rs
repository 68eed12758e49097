use std::fmt;

use crate::error::{input, Result};

/// Largest number of complex entries a dense operator or density matrix may hold.
pub const DENSE_ENTRY_CAP: usize = 1 << 20;

/// The three bosonic modes of the device.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Mechanical mode of the beam.
    Nems,
    /// Resonator 1.
    Tlr1,
    /// Resonator 2.
    Tlr2,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Nems => "N",
            Mode::Tlr1 => "1",
            Mode::Tlr2 => "2",
        })
    }
}

/// Ordered tensor product of truncated Fock spaces. The first mode is the
/// most significant digit of the flat basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSpace {
    modes: Vec<Mode>,
    dims: Vec<usize>,
}

impl TruncatedSpace {
    pub fn new(factors: &[(Mode, usize)]) -> Result<Self> {
        if factors.is_empty() {
            return input("a space needs at least one mode");
        }
        let mut modes = Vec::with_capacity(factors.len());
        let mut dims = Vec::with_capacity(factors.len());
        for &(mode, dim) in factors {
            if dim < 2 {
                return input(format!("mode {mode} needs a cutoff of at least 2, got {dim}"));
            }
            if modes.contains(&mode) {
                return input(format!("mode {mode} listed twice"));
            }
            modes.push(mode);
            dims.push(dim);
        }
        let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        if total.is_none() {
            return input("total dimension overflows");
        }
        Ok(Self { modes, dims })
    }

    pub fn single(mode: Mode, dim: usize) -> Result<Self> {
        Self::new(&[(mode, dim)])
    }

    /// Mechanical mode followed by both resonators.
    pub fn tripartite(n_dim: usize, dim1: usize, dim2: usize) -> Result<Self> {
        Self::new(&[(Mode::Nems, n_dim), (Mode::Tlr1, dim1), (Mode::Tlr2, dim2)])
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn position(&self, mode: Mode) -> Result<usize> {
        match self.modes.iter().position(|&m| m == mode) {
            Some(i) => Ok(i),
            None => input(format!("mode {mode} is not part of this space")),
        }
    }

    pub fn dim_of(&self, mode: Mode) -> Result<usize> {
        Ok(self.dims[self.position(mode)?])
    }

    /// Row-major strides of the flat index.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.dims[i + 1];
        }
        s
    }

    /// Per-mode occupation numbers of flat index `i`.
    pub fn digits(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = i % self.dims[k];
            i /= self.dims[k];
        }
        out
    }

    /// Subspace of the listed modes, in this space's order.
    pub fn subspace(&self, keep: &[Mode]) -> Result<Self> {
        if keep.is_empty() {
            return input("empty mode subset");
        }
        for &m in keep {
            self.position(m)?;
        }
        let factors: Vec<(Mode, usize)> = self
            .modes
            .iter()
            .zip(&self.dims)
            .filter(|(m, _)| keep.contains(m))
            .map(|(&m, &d)| (m, d))
            .collect();
        Self::new(&factors)
    }

    /// Modes of this space not in `keep`.
    pub fn complement(&self, keep: &[Mode]) -> Vec<Mode> {
        self.modes.iter().copied().filter(|m| !keep.contains(m)).collect()
    }

    /// Concatenation of two spaces with disjoint modes.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut factors: Vec<(Mode, usize)> = self.modes.iter().copied().zip(self.dims.iter().copied()).collect();
        factors.extend(other.modes.iter().copied().zip(other.dims.iter().copied()));
        Self::new(&factors)
    }

    /// Fails if a dense matrix over this space would exceed [`DENSE_ENTRY_CAP`].
    pub fn check_dense(&self) -> Result<()> {
        let d = self.dim();
        match d.checked_mul(d) {
            Some(n) if n <= DENSE_ENTRY_CAP => Ok(()),
            _ => input(format!(
                "dense {d}×{d} matrix exceeds the cap of {DENSE_ENTRY_CAP} entries"
            )),
        }
    }

    /// For every flat index, its (kept, traced) flat indices in the two subspaces.
    pub(crate) fn split_indices(&self, keep: &[Mode]) -> (Vec<usize>, Vec<usize>) {
        let keep_pos: Vec<bool> = self.modes.iter().map(|m| keep.contains(m)).collect();
        let d = self.dim();
        let mut kept = Vec::with_capacity(d);
        let mut rest = Vec::with_capacity(d);
        for i in 0..d {
            let digits = self.digits(i);
            let (mut k, mut r) = (0usize, 0usize);
            for (j, &dig) in digits.iter().enumerate() {
                if keep_pos[j] {
                    k = k * self.dims[j] + dig;
                } else {
                    r = r * self.dims[j] + dig;
                }
            }
            kept.push(k);
            rest.push(r);
        }
        (kept, rest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_and_strides_agree() {
        let s = TruncatedSpace::tripartite(3, 4, 5).unwrap();
        assert_eq!(s.dim(), 60);
        assert_eq!(s.strides(), vec![20, 5, 1]);
        let st = s.strides();
        for i in 0..s.dim() {
            let d = s.digits(i);
            assert_eq!(d.iter().zip(&st).map(|(a, b)| a * b).sum::<usize>(), i);
        }
    }

    #[test]
    fn rejects_bad_factors() {
        assert!(TruncatedSpace::single(Mode::Nems, 1).is_err());
        assert!(TruncatedSpace::new(&[(Mode::Tlr1, 3), (Mode::Tlr1, 3)]).is_err());
        assert!(TruncatedSpace::new(&[]).is_err());
    }

    #[test]
    fn subspace_keeps_order() {
        let s = TruncatedSpace::tripartite(3, 4, 5).unwrap();
        let sub = s.subspace(&[Mode::Tlr2, Mode::Nems]).unwrap();
        assert_eq!(sub.modes(), &[Mode::Nems, Mode::Tlr2]);
        assert_eq!(sub.dim(), 15);
        assert!(s.subspace(&[]).is_err());
        assert_eq!(s.complement(&[Mode::Tlr1]), vec![Mode::Nems, Mode::Tlr2]);
    }

    #[test]
    fn dense_cap() {
        assert!(TruncatedSpace::tripartite(10, 10, 10).unwrap().check_dense().is_ok());
        assert!(TruncatedSpace::tripartite(30, 30, 30).unwrap().check_dense().is_err());
    }
}
