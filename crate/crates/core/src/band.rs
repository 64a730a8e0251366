//! The two-band matrix type, its period invariants and dense realization.
//!
//! A two-band matrix of order `n` has nonzeros only at `(b + j, j)` (the lower
//! band) and `(i, k + i)` (the upper band). Storage is 0-based: `lower[j]` sits
//! at row `b + j`, column `j`, and `upper[i]` at row `i`, column `k + i`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Which sign regime the band entries live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "positive")]
    PositiveReal,
    #[serde(rename = "nonnegative")]
    NonnegativeReal,
    #[serde(rename = "complex")]
    Complex,
}

impl Mode {
    pub fn is_real(self) -> bool {
        !matches!(self, Mode::Complex)
    }

    fn admits(self, z: Complex64) -> bool {
        match self {
            Mode::PositiveReal => z.im == 0.0 && z.re > 0.0,
            Mode::NonnegativeReal => z.im == 0.0 && z.re >= 0.0,
            Mode::Complex => true,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::PositiveReal => "positive",
            Mode::NonnegativeReal => "nonnegative",
            Mode::Complex => "complex",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" => Ok(Mode::PositiveReal),
            "nonnegative" => Ok(Mode::NonnegativeReal),
            "complex" => Ok(Mode::Complex),
            other => Err(Error::InvalidInput(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Band length for offset `d` in an `n x n` matrix.
pub fn band_len(n: usize, d: usize) -> usize {
    n.saturating_sub(d)
}

/// Period data derived from `(n, b, k)` alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PeriodInfo {
    pub g: usize,
    pub p: usize,
    /// `n / p` for `g = 1`; for `g > 1` the same quantity for the smallest
    /// diagonal block of the gcd split, which has order `n / g`.
    pub m: usize,
    pub q: usize,
}

impl PeriodInfo {
    pub fn new(n: usize, b: usize, k: usize) -> Self {
        let g = gcd(b, k);
        let p = (b + k) / g;
        let base = n / g;
        Self {
            g,
            p,
            m: base / p,
            q: base % p,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    b: usize,
    k: usize,
    lower: Vec<Complex64>,
    upper: Vec<Complex64>,
    mode: Mode,
}

impl BandMatrix {
    pub fn new(
        n: usize,
        b: usize,
        k: usize,
        lower: Vec<Complex64>,
        upper: Vec<Complex64>,
        mode: Mode,
    ) -> Result<Self> {
        if n == 0 || b == 0 || k == 0 {
            return Err(Error::BadOffset { n, b, k });
        }
        for (side, band, d) in [(Side::Lower, &lower, b), (Side::Upper, &upper, k)] {
            let expected = band_len(n, d);
            if band.len() != expected {
                return Err(Error::LengthMismatch {
                    side,
                    expected,
                    actual: band.len(),
                });
            }
            for (index, z) in band.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { side, index });
                }
                if !mode.admits(*z) {
                    return Err(Error::SignViolation { side, index, mode });
                }
            }
        }
        Ok(Self {
            n,
            b,
            k,
            lower,
            upper,
            mode,
        })
    }

    pub fn from_real(
        n: usize,
        b: usize,
        k: usize,
        lower: &[f64],
        upper: &[f64],
        mode: Mode,
    ) -> Result<Self> {
        let lift = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(n, b, k, lift(lower), lift(upper), mode)
    }

    /// Instance with every band entry equal to one.
    pub fn ones(n: usize, b: usize, k: usize) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        Self::new(
            n,
            b,
            k,
            vec![one; band_len(n, b)],
            vec![one; band_len(n, k)],
            Mode::PositiveReal,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn lower(&self) -> &[Complex64] {
        &self.lower
    }

    pub fn upper(&self) -> &[Complex64] {
        &self.upper
    }

    pub fn has_empty_band(&self) -> bool {
        self.lower.is_empty() || self.upper.is_empty()
    }

    pub fn period_info(&self) -> PeriodInfo {
        PeriodInfo::new(self.n, self.b, self.k)
    }

    /// Entry at 0-based `(row, col)`; zero off the two bands.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        if row >= self.n || col >= self.n {
            return Complex64::new(0.0, 0.0);
        }
        if row == col + self.b {
            self.lower[col]
        } else if col == row + self.k {
            self.upper[row]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// `true` if `(row, col)` lies on one of the two bands.
    pub fn on_band(&self, row: usize, col: usize) -> bool {
        row < self.n && col < self.n && (row == col + self.b || col == row + self.k)
    }

    pub fn to_dense(&self) -> DenseMatrix<Complex64> {
        let mut m = DenseMatrix::zeros(self.n, self.n);
        for (j, &v) in self.lower.iter().enumerate() {
            m[(self.b + j, j)] = v;
        }
        for (i, &v) in self.upper.iter().enumerate() {
            m[(i, self.k + i)] = v;
        }
        m
    }

    /// All band entries, lower band first.
    pub fn band_entries(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.lower.iter().chain(self.upper.iter()).copied()
    }

    /// Band entries scaled by `factor` (keeps the mode when the scaling preserves it).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let s = |v: &[Complex64]| v.iter().map(|z| z * factor).collect();
        Self::new(
            self.n,
            self.b,
            self.k,
            s(&self.lower),
            s(&self.upper),
            self.mode,
        )
    }
}

/// `true` iff every nonzero of `m` lies on a diagonal `i - j` in `offsets`.
pub fn zero_pattern_matches<T: crate::dense::Scalar>(
    m: &DenseMatrix<T>,
    offsets: &[isize],
) -> Result<bool> {
    m.ensure_square()?;
    Ok(m
        .nonzeros()
        .all(|(i, j)| offsets.contains(&(i as isize - j as isize))))
}
