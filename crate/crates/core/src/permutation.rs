//! Permutations acting by simultaneous row/column reordering.

use serde::{Serialize, Serializer};

use crate::dense::{DenseMatrix, Scalar};
use crate::error::{Error, Result};

/// A bijection of `{0, .., n-1}`; `sigma[i]` is the source index of position `i`.
///
/// Conjugating `M` gives `B[i][j] = M[sigma[i]][sigma[j]]`, i.e. `P M P^T` with
/// `P[i][sigma[i]] = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    sigma: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            sigma: (0..n).collect(),
        }
    }

    pub fn from_zero_based(sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        let mut seen = vec![false; n];
        for &s in &sigma {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidInput(format!(
                    "not a permutation of 0..{n}: {sigma:?}"
                )));
            }
        }
        Ok(Self { sigma })
    }

    pub fn from_one_based(sigma: &[usize]) -> Result<Self> {
        if sigma.contains(&0) {
            return Err(Error::InvalidInput("one-based permutation contains 0".into()));
        }
        Self::from_zero_based(sigma.iter().map(|s| s - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.sigma
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.sigma.iter().map(|s| s + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.sigma.len()];
        for (i, &s) in self.sigma.iter().enumerate() {
            inv[s] = i;
        }
        Self { sigma: inv }
    }

    /// Applying `self` then `other` by conjugation equals conjugating by the result.
    pub fn then(&self, other: &Self) -> Self {
        Self {
            sigma: other.sigma.iter().map(|&i| self.sigma[i]).collect(),
        }
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

/// `result[i][j] = m[sigma[i]][sigma[j]]`.
pub fn conjugate<T: Scalar>(perm: &Permutation, m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let n = m.ensure_square()?;
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: perm.len(),
        });
    }
    Ok(m.select(perm.as_slice(), perm.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DenseMatrix<f64> {
        DenseMatrix::from_vec(3, 3, (1..=9).map(f64::from).collect()).unwrap()
    }

    #[test]
    fn identity_conjugation_is_noop() {
        let m = sample();
        assert_eq!(conjugate(&Permutation::identity(3), &m).unwrap(), m);
    }

    #[test]
    fn inverse_round_trip() {
        let m = sample();
        let s = Permutation::from_one_based(&[3, 1, 2]).unwrap();
        let back = conjugate(&s, &conjugate(&s.inverse(), &m).unwrap()).unwrap();
        assert_eq!(back, m);
        let twice = conjugate(&s, &conjugate(&s, &m).unwrap()).unwrap();
        assert_eq!(twice, conjugate(&s.then(&s), &m).unwrap());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_one_based(&[1, 1, 2]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert!(Permutation::from_zero_based(vec![0, 3]).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let err = conjugate(&Permutation::identity(2), &sample()).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, actual: 2 });
    }
}
