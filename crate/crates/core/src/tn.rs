//! Total nonnegativity by exhaustive minors, the oscillatory criterion, and
//! minors of the cyclic products through the Cauchy-Binet expansion.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::cyclic::CyclicDecomposition;
use crate::dense::{determinant, DenseMatrix, Scalar};
use crate::error::{Error, Result};

/// Default dimension cap for exhaustive minor enumeration.
pub const DEFAULT_MAX_DIM: usize = 8;

/// Cap on the number of ordered subsets tracked per step of the
/// Cauchy-Binet recursion.
const MAX_CHAIN_STATES: usize = 1 << 16;

/// Lexicographic `r`-subsets of `0..n`.
pub fn combinations(n: usize, r: usize) -> Combinations {
    Combinations {
        n,
        next: (r <= n).then(|| (0..r).collect()),
    }
}

pub struct Combinations {
    n: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let r = current.len();
        let mut succ = current.clone();
        let mut i = r;
        while i > 0 {
            i -= 1;
            if succ[i] < self.n - r + i {
                succ[i] += 1;
                for t in i + 1..r {
                    succ[t] = succ[t - 1] + 1;
                }
                self.next = Some(succ);
                break;
            }
        }
        Some(current)
    }
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

pub fn minor<T: Scalar>(m: &DenseMatrix<T>, rows: &[usize], cols: &[usize]) -> Result<T> {
    determinant(&m.select(rows, cols))
}

/// Product over the selected rows of the largest selected entry magnitude:
/// an upper bound on the minor, used to scale the rounding tolerance.
fn magnitude_scale(m: &DenseMatrix<f64>, rows: &[usize], cols: &[usize]) -> f64 {
    rows.iter()
        .map(|&r| cols.iter().map(|&c| m[(r, c)].abs()).fold(0.0, f64::max))
        .product()
}

/// Whether every minor of order `1..=max_order` is `>= -tol * scale`, where
/// `scale` bounds the minor's magnitude. Rectangular input is accepted.
pub fn all_minors_nonnegative<T: Scalar>(
    m: &DenseMatrix<T>,
    max_order: usize,
    tol: f64,
) -> Result<bool> {
    Ok(first_negative_minor(m, max_order, tol, DEFAULT_MAX_DIM)?.is_none())
}

/// First minor (in order, then lexicographic rows, then columns) violating
/// nonnegativity, as `(rows, cols, value)`.
pub fn first_negative_minor<T: Scalar>(
    m: &DenseMatrix<T>,
    max_order: usize,
    tol: f64,
    max_dim: usize,
) -> Result<Option<(Vec<usize>, Vec<usize>, f64)>> {
    let (rows, cols) = (m.rows(), m.cols());
    let dim = rows.max(cols);
    if dim > max_dim {
        return Err(Error::TooLarge { dim, cap: max_dim });
    }
    let real = m.to_complex().to_real()?;
    for r in 1..=max_order.min(rows).min(cols) {
        for rs in combinations(rows, r) {
            for cs in combinations(cols, r) {
                let value = minor(&real, &rs, &cs)?;
                if value < -tol * magnitude_scale(&real, &rs, &cs) {
                    return Ok(Some((rs, cs, value)));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillatoryReport {
    pub tn_ok: bool,
    pub nonsingular_ok: bool,
    pub determinant: f64,
    pub band_positive_ok: bool,
    pub max_checked_minor_order: usize,
}

impl OscillatoryReport {
    pub fn is_oscillatory(&self) -> bool {
        self.tn_ok && self.nonsingular_ok && self.band_positive_ok
    }
}

/// Totally nonnegative, nonsingular, and positive on the first sub- and
/// superdiagonal. `tol` applies to the minors; the determinant only has to
/// clear its own rounding error.
pub fn oscillatory_check<T: Scalar>(m: &DenseMatrix<T>, tol: f64) -> Result<OscillatoryReport> {
    oscillatory_check_capped(m, tol, DEFAULT_MAX_DIM)
}

pub fn oscillatory_check_capped<T: Scalar>(
    m: &DenseMatrix<T>,
    tol: f64,
    max_dim: usize,
) -> Result<OscillatoryReport> {
    let n = m.ensure_square()?;
    let tn_ok = first_negative_minor(m, n, tol, max_dim)?.is_none();
    let real = m.to_complex().to_real()?;
    let all: Vec<usize> = (0..n).collect();
    let det = determinant(&real)?;
    // nonsingular beyond the rounding error of the elimination
    let floor = 64.0 * n as f64 * f64::EPSILON * magnitude_scale(&real, &all, &all);
    let nonsingular_ok = n == 0 || det.abs() > floor;
    let band_positive_ok = (1..n).all(|i| real[(i - 1, i)] > 0.0 && real[(i, i - 1)] > 0.0);
    Ok(OscillatoryReport {
        tn_ok,
        nonsingular_ok,
        determinant: det,
        band_positive_ok,
        max_checked_minor_order: n,
    })
}

fn check_index_set(set: &[usize], dim: usize, name: &str) -> Result<()> {
    if set.windows(2).any(|w| w[0] >= w[1]) || set.last().is_some_and(|&i| i >= dim) {
        return Err(Error::BadIndexSet(format!(
            "{name} = {set:?} is not an increasing subset of 0..{dim}"
        )));
    }
    Ok(())
}

/// Minor `D_j(alpha, beta)` as the sum over all chains of intermediate
/// subsets `theta` of the products of bidiagonal-block minors
/// `det C_j(alpha, theta_1) det C_{j+1}(theta_1, theta_2) .. det C_{j-1}(theta_{p-1}, beta)`.
/// Index sets are 0-based and increasing.
pub fn cauchy_binet_minor(
    dec: &CyclicDecomposition,
    j: usize,
    alpha: &[usize],
    beta: &[usize],
) -> Result<Complex64> {
    let p = dec.p();
    if j == 0 || j > p {
        return Err(Error::InvalidInput(format!("product index {j} outside 1..={p}")));
    }
    let dim = dec.block(j).rows;
    if alpha.len() != beta.len() {
        return Err(Error::BadIndexSet(format!(
            "|alpha| = {} but |beta| = {}",
            alpha.len(),
            beta.len()
        )));
    }
    check_index_set(alpha, dim, "alpha")?;
    check_index_set(beta, dim, "beta")?;
    let r = alpha.len();
    for step in 0..p {
        let c = dec.block(j + step);
        let states = binomial(c.cols, r);
        if states > MAX_CHAIN_STATES {
            return Err(Error::TooLarge {
                dim: c.cols,
                cap: MAX_CHAIN_STATES,
            });
        }
    }

    // Sum over all chains ending in theta, per theta.
    let mut acc: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
    acc.insert(alpha.to_vec(), Complex64::new(1.0, 0.0));
    for step in 0..p {
        let c = dec.block(j + step).to_dense();
        let mut next = BTreeMap::new();
        let targets: Vec<Vec<usize>> = if step + 1 == p {
            vec![beta.to_vec()]
        } else {
            combinations(c.cols(), r).collect()
        };
        for (theta, &weight) in &acc {
            for target in &targets {
                let d = minor(&c, theta, target)?;
                if d != Complex64::new(0.0, 0.0) {
                    *next.entry(target.clone()).or_insert(Complex64::new(0.0, 0.0)) += weight * d;
                }
            }
        }
        acc = next;
    }
    Ok(acc.remove(beta).unwrap_or_default())
}

/// The chain through leading principal subsets `{0..r-1}` in every class:
/// `prod_i det C_i(lead, lead)`, the first term of the determinant
/// expansion of `D_j` when `D_j` has order `r`.
pub fn leading_chain_term(dec: &CyclicDecomposition, j: usize) -> Result<Complex64> {
    let p = dec.p();
    if j == 0 || j > p {
        return Err(Error::InvalidInput(format!("product index {j} outside 1..={p}")));
    }
    let r = dec.block(j).rows;
    let lead: Vec<usize> = (0..r).collect();
    let mut prod = Complex64::new(1.0, 0.0);
    for step in 0..p {
        let c = dec.block(j + step);
        if c.rows < r || c.cols < r {
            return Err(Error::BadIndexSet(format!(
                "class of size {} cannot hold a leading set of size {r}",
                c.rows.min(c.cols)
            )));
        }
        prod *= minor(&c.to_dense(), &lead, &lead)?;
    }
    Ok(prod)
}
