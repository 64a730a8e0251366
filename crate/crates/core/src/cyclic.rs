//! Superdiagonal block form of an irreducible two-band matrix.
//!
//! For coprime `(b, k)` with period `p = b + k`, the indices are grouped into
//! the residue classes `gamma_i = (i*k mod p) + 1` (1-based), `i = 0..p-1`, each
//! class listed in increasing order. Conjugating by that grouping puts the
//! matrix into block-cyclic form with blocks `C_1, .., C_p`, where `C_i` maps
//! class `i` onto class `i - 1` (and `C_p` maps class 0 onto class `p - 1`).
//! Every `C_i` is bidiagonal: lower when `gamma_i - gamma_{i-1} = k`, upper
//! when it is `-b`.
//!
//! Nothing here requires `b <= k`; the class step is `+k` or `-b` for any
//! coprime pair.

use num_complex::Complex64;
use serde::Serialize;

use crate::band::{gcd, BandMatrix};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::permutation::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicIndexData {
    pub n: usize,
    pub b: usize,
    pub k: usize,
    pub p: usize,
    /// Class representatives `gamma_0..gamma_{p-1}`, 1-based, a permutation of `1..=p`.
    pub gammas: Vec<usize>,
    /// `gamma_i = (i*k + 1) + z_i * p`.
    pub zs: Vec<i64>,
    /// Class sizes `n_i = floor((n - gamma_i) / p) + 1`.
    pub sizes: Vec<usize>,
    /// Partial sums `N_i = n_0 + .. + n_i`.
    pub partials: Vec<usize>,
}

impl CyclicIndexData {
    /// 0-based position of the first member of class `i`.
    pub fn class_start(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.partials[i - 1]
        }
    }

    /// Smallest class size, `floor(n / p)`.
    pub fn m(&self) -> usize {
        self.sizes.iter().copied().min().unwrap_or(0)
    }
}

pub fn cyclic_index_data(n: usize, b: usize, k: usize) -> Result<CyclicIndexData> {
    if n == 0 || b == 0 || k == 0 {
        return Err(Error::BadOffset { n, b, k });
    }
    if gcd(b, k) != 1 {
        return Err(Error::NotCoprime { b, k });
    }
    let p = b + k;
    let (n_i, p_i, k_i) = (n as i64, p as i64, k as i64);
    let mut gammas = Vec::with_capacity(p);
    let mut zs = Vec::with_capacity(p);
    let mut sizes = Vec::with_capacity(p);
    for i in 0..p_i {
        let gamma = (i * k_i).rem_euclid(p_i) + 1;
        let shifted = gamma - (i * k_i + 1);
        debug_assert_eq!(shifted % p_i, 0);
        gammas.push(gamma as usize);
        zs.push(shifted / p_i);
        sizes.push(((n_i - gamma).div_euclid(p_i) + 1) as usize);
    }
    let partials = sizes
        .iter()
        .scan(0, |acc, &s| {
            *acc += s;
            Some(*acc)
        })
        .collect();
    Ok(CyclicIndexData {
        n,
        b,
        k,
        p,
        gammas,
        zs,
        sizes,
        partials,
    })
}

/// Position `N_{i-1} + j` receives index `gamma_i + (j - 1) p` (1-based).
pub fn cyclic_permutation(idx: &CyclicIndexData) -> Permutation {
    let mut sigma = Vec::with_capacity(idx.n);
    for (&gamma, &size) in idx.gammas.iter().zip(&idx.sizes) {
        sigma.extend((0..size).map(|j| gamma - 1 + j * idx.p));
    }
    Permutation::from_zero_based(sigma).expect("residue classes partition 0..n")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Lower,
    Upper,
}

/// Rectangular bidiagonal block. `main[t]` sits at `(t, t)`; `off[t]` at
/// `(t + 1, t)` for `Lower` or `(t, t + 1)` for `Upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct BidiagonalBlock {
    pub rows: usize,
    pub cols: usize,
    pub orientation: Orientation,
    pub main: Vec<Complex64>,
    pub off: Vec<Complex64>,
}

impl BidiagonalBlock {
    pub fn main_len(rows: usize, cols: usize) -> usize {
        rows.min(cols)
    }

    pub fn off_len(rows: usize, cols: usize, orientation: Orientation) -> usize {
        match orientation {
            Orientation::Lower => rows.saturating_sub(1).min(cols),
            Orientation::Upper => rows.min(cols.saturating_sub(1)),
        }
    }

    /// Whether `(r, c)` is one of the block's two stored diagonals.
    pub fn in_pattern(&self, r: usize, c: usize) -> bool {
        if r >= self.rows || c >= self.cols {
            return false;
        }
        match self.orientation {
            Orientation::Lower => r == c || r == c + 1,
            Orientation::Upper => r == c || c == r + 1,
        }
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        if !self.in_pattern(r, c) {
            Complex64::new(0.0, 0.0)
        } else if r == c {
            self.main[r]
        } else {
            self.off[r.min(c)]
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<Complex64> {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for (t, &v) in self.main.iter().enumerate() {
            m[(t, t)] = v;
        }
        for (t, &v) in self.off.iter().enumerate() {
            match self.orientation {
                Orientation::Lower => m[(t + 1, t)] = v,
                Orientation::Upper => m[(t, t + 1)] = v,
            }
        }
        m
    }

    pub fn entries(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.main.iter().chain(self.off.iter()).copied()
    }
}

#[derive(Debug, Clone)]
pub struct CyclicDecomposition {
    pub index_data: CyclicIndexData,
    pub perm: Permutation,
    /// `C_1..C_p`; `blocks[i - 1]` is `C_i`.
    pub blocks: Vec<BidiagonalBlock>,
}

impl CyclicDecomposition {
    pub fn p(&self) -> usize {
        self.index_data.p
    }

    /// Block `C_i`, 1-based and taken cyclically.
    pub fn block(&self, i: usize) -> &BidiagonalBlock {
        let p = self.p();
        &self.blocks[(i + p - 1) % p]
    }

    /// The `n x n` superdiagonal block matrix assembled from the blocks.
    pub fn layout(&self) -> DenseMatrix<Complex64> {
        let idx = &self.index_data;
        let mut out = DenseMatrix::zeros(idx.n, idx.n);
        for i in 1..=idx.p {
            let (row_class, col_class) = (i - 1, i % idx.p);
            out.set_block(
                idx.class_start(row_class),
                idx.class_start(col_class),
                &self.blocks[i - 1].to_dense(),
            );
        }
        out
    }
}

/// Conjugates `bm` (coprime offsets, both bands nonempty) into superdiagonal
/// block form and reads off the bidiagonal blocks.
pub fn extract_cyclic(bm: &BandMatrix) -> Result<CyclicDecomposition> {
    let idx = cyclic_index_data(bm.n(), bm.b(), bm.k())?;
    if bm.has_empty_band() {
        return Err(Error::EmptyBand);
    }
    let perm = cyclic_permutation(&idx);
    let sigma = perm.as_slice();
    let p = idx.p;

    let mut blocks = Vec::with_capacity(p);
    for i in 1..=p {
        let (row_class, col_class) = (i - 1, i % p);
        let orientation = if i == p || idx.zs[i - 1] - idx.zs[i] == 1 {
            Orientation::Upper
        } else {
            Orientation::Lower
        };
        let (rows, cols) = (idx.sizes[row_class], idx.sizes[col_class]);
        let (r0, c0) = (idx.class_start(row_class), idx.class_start(col_class));
        let main = (0..BidiagonalBlock::main_len(rows, cols))
            .map(|t| bm.entry(sigma[r0 + t], sigma[c0 + t]))
            .collect();
        let off = (0..BidiagonalBlock::off_len(rows, cols, orientation))
            .map(|t| match orientation {
                Orientation::Lower => bm.entry(sigma[r0 + t + 1], sigma[c0 + t]),
                Orientation::Upper => bm.entry(sigma[r0 + t], sigma[c0 + t + 1]),
            })
            .collect();
        blocks.push(BidiagonalBlock {
            rows,
            cols,
            orientation,
            main,
            off,
        });
    }
    let dec = CyclicDecomposition {
        index_data: idx,
        perm,
        blocks,
    };
    check_layout(bm, &dec)?;
    Ok(dec)
}

/// Every band position of `bm` must land on a stored position of some block.
/// The stored positions number `(n - b) + (n - k)` in total, so this pins
/// the conjugated matrix to the block layout exactly.
fn check_layout(bm: &BandMatrix, dec: &CyclicDecomposition) -> Result<()> {
    let idx = &dec.index_data;
    let p = idx.p;
    let inv = dec.perm.inverse();
    let mut class_of = Vec::with_capacity(idx.n);
    for (c, &s) in idx.sizes.iter().enumerate() {
        class_of.extend(std::iter::repeat_n(c, s));
    }
    let lower = (0..bm.lower().len()).map(|j| (bm.b() + j, j));
    let upper = (0..bm.upper().len()).map(|i| (i, bm.k() + i));
    let mut stored = 0usize;
    for (row, col) in lower.chain(upper) {
        let (r, c) = (inv.as_slice()[row], inv.as_slice()[col]);
        let (rc, cc) = (class_of[r], class_of[c]);
        let ok = (rc + 1) % p == cc && {
            let blk = &dec.blocks[rc];
            blk.in_pattern(r - idx.class_start(rc), c - idx.class_start(cc))
        };
        if !ok {
            return Err(Error::LayoutViolation { row: r, col: c });
        }
        stored += 1;
    }
    let capacity: usize = dec
        .blocks
        .iter()
        .map(|b| b.main.len() + b.off.len())
        .sum();
    if capacity != stored {
        return Err(Error::ShapeMismatch(format!(
            "blocks hold {capacity} positions for {stored} band entries"
        )));
    }
    Ok(())
}
