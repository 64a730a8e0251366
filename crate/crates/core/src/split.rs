//! Reduction to relatively prime offsets: a two-band matrix with
//! `g = gcd(b, k) > 1` is permutation-similar to a direct sum of `g` two-band
//! matrices with offsets `(b / g, k / g)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::band::{band_len, gcd, BandMatrix};
use crate::dense::{DenseMatrix, Scalar};
use crate::error::Result;
use crate::permutation::Permutation;

/// Orders of the `g` diagonal blocks: `n_i = floor((n - i) / g) + 1`, `i = 1..g`.
pub fn block_sizes(n: usize, g: usize) -> Vec<usize> {
    (1..=g)
        .map(|i| ((n as i64 - i as i64).div_euclid(g as i64) + 1) as usize)
        .collect()
}

/// Permutation grouping the indices of each residue class mod `g`, classes in
/// order and each class in increasing order.
pub fn gcd_permutation(n: usize, b: usize, k: usize) -> Permutation {
    let g = gcd(b, k);
    let mut sigma = Vec::with_capacity(n);
    for (i, &size) in block_sizes(n, g).iter().enumerate() {
        sigma.extend((0..size).map(|j| i + j * g));
    }
    Permutation::from_zero_based(sigma).expect("residue classes partition 0..n")
}

#[derive(Debug, Clone, Serialize)]
pub struct DirectSumDecomposition {
    pub perm: Permutation,
    pub block_sizes: Vec<usize>,
    /// One block per nonzero entry of `block_sizes`. Sizes are nonincreasing,
    /// so `blocks[i]` has order `block_sizes[i]`; when `n < g` the trailing
    /// classes are empty and carry no block.
    #[serde(skip)]
    pub blocks: Vec<BandMatrix>,
}

impl DirectSumDecomposition {
    pub fn g(&self) -> usize {
        self.block_sizes.len()
    }

    /// Dense direct sum of the blocks, in block order.
    pub fn to_dense(&self) -> DenseMatrix<Complex64> {
        let n = self.block_sizes.iter().sum();
        let mut out = DenseMatrix::zeros(n, n);
        let mut offset = 0;
        for block in &self.blocks {
            out.set_block(offset, offset, &block.to_dense());
            offset += block.n();
        }
        out
    }

    /// Block index (0-based) and offset of each block's first row.
    pub fn offsets(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .scan(0, |acc, &s| {
                let start = *acc;
                *acc += s;
                Some(start)
            })
            .collect()
    }
}

/// Splits `bm` into `gcd(b, k)` coprime two-band blocks.
pub fn split(bm: &BandMatrix) -> Result<DirectSumDecomposition> {
    let (n, b, k) = (bm.n(), bm.b(), bm.k());
    let g = gcd(b, k);
    let perm = gcd_permutation(n, b, k);
    let sizes = block_sizes(n, g);
    let (nb, nk) = (b / g, k / g);
    let mut blocks = Vec::with_capacity(g);
    for (i, &size) in sizes.iter().enumerate().filter(|(_, &s)| s > 0) {
        // local index t is global index i + t*g
        let lower = (0..band_len(size, nb))
            .map(|t| bm.lower()[i + t * g])
            .collect();
        let upper = (0..band_len(size, nk))
            .map(|t| bm.upper()[i + t * g])
            .collect();
        blocks.push(BandMatrix::new(size, nb, nk, lower, upper, bm.mode())?);
    }
    Ok(DirectSumDecomposition {
        perm,
        block_sizes: sizes,
        blocks,
    })
}

/// `true` iff every nonzero of `m` sits inside the square diagonal blocks of
/// the given sizes.
pub fn is_block_diagonal<T: Scalar>(m: &DenseMatrix<T>, sizes: &[usize]) -> bool {
    let mut owner = Vec::with_capacity(m.rows());
    for (blk, &s) in sizes.iter().enumerate() {
        owner.extend(std::iter::repeat_n(blk, s));
    }
    owner.len() == m.rows() && m.nonzeros().all(|(i, j)| owner[i] == owner[j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::{zero_pattern_matches, Mode};
    use crate::permutation::conjugate;

    #[test]
    fn permutation_examples() {
        assert_eq!(gcd_permutation(7, 2, 4).one_based(), vec![1, 3, 5, 7, 2, 4, 6]);
        assert_eq!(gcd_permutation(5, 1, 2).one_based(), vec![1, 2, 3, 4, 5]);
        assert_eq!(gcd_permutation(6, 3, 3).one_based(), vec![1, 4, 2, 5, 3, 6]);
    }

    #[test]
    fn sizes_sum_to_n() {
        for n in 1..40 {
            for g in 1..9 {
                let s = block_sizes(n, g);
                assert_eq!(s.iter().sum::<usize>(), n, "n={n} g={g}");
            }
        }
        assert_eq!(block_sizes(2, 3), vec![1, 1, 0]);
    }

    #[test]
    fn conjugation_gives_two_blocks() {
        let bm = BandMatrix::ones(7, 2, 4).unwrap();
        let c = conjugate(&gcd_permutation(7, 2, 4), &bm.to_dense()).unwrap();
        assert!(is_block_diagonal(&c, &[4, 3]));
        assert!(zero_pattern_matches(&c.block(0, 0, 4, 4), &[1, -2]).unwrap());
        assert!(zero_pattern_matches(&c.block(4, 4, 3, 3), &[1, -2]).unwrap());
    }

    #[test]
    fn split_seven_two_four() {
        let bm = BandMatrix::ones(7, 2, 4).unwrap();
        let d = split(&bm).unwrap();
        assert_eq!(d.block_sizes, vec![4, 3]);
        for blk in &d.blocks {
            assert_eq!((blk.b(), blk.k()), (1, 2));
        }
        assert_eq!(conjugate(&d.perm, &bm.to_dense()).unwrap(), d.to_dense());
    }

    #[test]
    fn coprime_split_is_identity() {
        let bm = BandMatrix::ones(5, 1, 3).unwrap();
        let d = split(&bm).unwrap();
        assert_eq!(d.blocks, vec![bm]);
        assert_eq!(d.perm, Permutation::identity(5));
    }

    #[test]
    fn split_preserves_entries() {
        let bm = BandMatrix::from_real(4, 2, 2, &[5.0, 7.0], &[2.0, 3.0], Mode::PositiveReal)
            .unwrap();
        let d = split(&bm).unwrap();
        assert_eq!(d.block_sizes, vec![2, 2]);
        let mut got: Vec<f64> = d
            .blocks
            .iter()
            .flat_map(|b| b.band_entries().map(|z| z.re).collect::<Vec<_>>())
            .collect();
        got.sort_by(f64::total_cmp);
        assert_eq!(got, vec![2.0, 3.0, 5.0, 7.0]);
        for blk in &d.blocks {
            assert_eq!((blk.b(), blk.k()), (1, 1));
        }
        assert_eq!(conjugate(&d.perm, &bm.to_dense()).unwrap(), d.to_dense());
    }

    #[test]
    fn fewer_indices_than_classes() {
        let bm = BandMatrix::from_real(2, 3, 3, &[], &[], crate::band::Mode::PositiveReal).unwrap();
        let dec = split(&bm).unwrap();
        assert_eq!(dec.block_sizes, vec![1, 1, 0]);
        assert_eq!((dec.g(), dec.blocks.len()), (3, 2));
        assert_eq!(dec.to_dense().rows(), 2);
    }
}
