//! Independent dense eigensolver used to check the structured results, plus
//! multiset comparison utilities.
//!
//! The solver knows nothing about band structure: it balances, reduces to
//! Hessenberg form and runs shifted QR. By default the iteration runs in
//! 256-bit floating point. Two-band matrices typically carry a defective zero
//! eigenvalue with Jordan blocks as long as `p - 1`, and a backward-stable
//! double-precision solve only resolves such an eigenvalue to about
//! `eps^(1/(p-1))`; the wide backend pushes that below `1e-8` for the sizes
//! handled here.

mod qr;
mod real;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::dense::{DenseMatrix, Scalar};
use crate::error::{Error, Result};
use qr::{complex_hessenberg_eigenvalues, hessenberg, real_hessenberg_eigenvalues, Work};
use real::{Cx, Real, Wide};

/// Arithmetic used inside the QR iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// IEEE double.
    Double,
    /// 256-bit binary floating point.
    #[default]
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub precision: Precision,
    /// Largest accepted matrix order.
    pub max_dim: usize,
    /// QR sweeps allowed per deflated eigenvalue.
    pub max_iterations: usize,
    /// `|lambda| < zero_tol * max(1, rho)` counts as zero.
    pub zero_tol: f64,
    /// Imaginary parts up to `snap_tol * (1 + |lambda|)` are rounding.
    pub snap_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            precision: Precision::Extended,
            max_dim: 128,
            max_iterations: 200,
            zero_tol: 1e-5,
            snap_tol: 1e-7,
        }
    }
}

/// A multiset of complex numbers (a spectrum).
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct ComplexMultiset {
    #[serde(serialize_with = "crate::io::serialize_pairs")]
    pub values: Vec<Complex64>,
}

impl ComplexMultiset {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest modulus, 0 for an empty set.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Zero threshold `tol * max(1, rho)`.
    pub fn zero_threshold(&self, tol: f64) -> f64 {
        tol * self.spectral_radius().max(1.0)
    }

    /// Number of entries below the relative zero threshold.
    pub fn count_zeros(&self, tol: f64) -> usize {
        let t = self.zero_threshold(tol);
        self.values.iter().filter(|z| z.norm() < t).count()
    }

    /// Entries at or above the relative zero threshold.
    pub fn nonzero(&self, tol: f64) -> ComplexMultiset {
        let t = self.zero_threshold(tol);
        Self::new(self.values.iter().copied().filter(|z| z.norm() >= t).collect())
    }

    pub fn rotated(&self, angle: f64) -> ComplexMultiset {
        let r = Complex64::from_polar(1.0, angle);
        Self::new(self.values.iter().map(|z| z * r).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub matched: bool,
    /// `pairing[i]` is the index in the second set paired with entry `i` of the first.
    pub pairing: Vec<usize>,
    pub max_residual: f64,
}

/// All eigenvalues of a square matrix.
pub fn dense_eigenvalues<T: Scalar>(m: &DenseMatrix<T>, cfg: &OracleConfig) -> Result<ComplexMultiset> {
    let n = m.ensure_square()?;
    if n > cfg.max_dim {
        return Err(Error::TooLarge {
            dim: n,
            cap: cfg.max_dim,
        });
    }
    if n == 0 {
        return Ok(ComplexMultiset::default());
    }
    let mut a = m.to_complex();
    if a.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    balance(&mut a);
    let values = match cfg.precision {
        Precision::Double => solve::<f64>(&a, cfg.max_iterations)?,
        Precision::Extended => solve::<Wide>(&a, cfg.max_iterations)?,
    };
    Ok(ComplexMultiset::new(values))
}

fn solve<R: Real>(a: &DenseMatrix<Complex64>, max_iter: usize) -> Result<Vec<Complex64>> {
    let n = a.rows();
    if a.as_slice().iter().all(|z| z.im == 0.0) {
        let mut w = Work {
            n,
            a: a.as_slice().iter().map(|z| R::from_f64(z.re)).collect(),
        };
        hessenberg::<R, R>(&mut w);
        let ev = real_hessenberg_eigenvalues(&mut w, max_iter)?;
        Ok(ev
            .into_iter()
            .map(|(re, im)| Complex64::new(re.to_f64(), im.to_f64()))
            .collect())
    } else {
        let mut w = Work {
            n,
            a: a.as_slice()
                .iter()
                .map(|z| Cx::new(R::from_f64(z.re), R::from_f64(z.im)))
                .collect(),
        };
        hessenberg::<R, Cx<R>>(&mut w);
        let ev = complex_hessenberg_eigenvalues(&mut w, max_iter)?;
        Ok(ev
            .into_iter()
            .map(|z| Complex64::new(z.re.to_f64(), z.im.to_f64()))
            .collect())
    }
}

/// Diagonal similarity by powers of two equalising row and column norms.
/// Power-of-two scaling is exact, so the spectrum is unchanged bit for bit.
fn balance(a: &mut DenseMatrix<Complex64>) {
    let n = a.rows();
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].l1_norm();
                    r += a[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut cc, mut rr) = (c, r);
            while cc < rr / 2.0 {
                cc *= 2.0;
                rr /= 2.0;
                f *= 2.0;
            }
            while cc >= rr * 2.0 {
                cc /= 2.0;
                rr *= 2.0;
                f /= 2.0;
            }
            if cc + rr < 0.95 * s {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Eigenvalues of a matrix whose spectrum must be real, positive and simple
/// (an oscillatory matrix), sorted strictly decreasing.
pub fn real_distinct_eigenvalues<T: Scalar>(
    m: &DenseMatrix<T>,
    cfg: &OracleConfig,
) -> Result<Vec<f64>> {
    let spectrum = dense_eigenvalues(m, cfg)?;
    let mut out = Vec::with_capacity(spectrum.len());
    for z in &spectrum.values {
        if z.im.abs() > cfg.snap_tol * (1.0 + z.norm()) {
            return Err(Error::RealityViolation { re: z.re, im: z.im });
        }
        if z.re <= 0.0 {
            return Err(Error::NegativeOmega { value: z.re });
        }
        out.push(z.re);
    }
    out.sort_by(|a, b| b.total_cmp(a));
    for w in out.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::DistinctnessViolation {
                left: w[0],
                right: w[1],
            });
        }
    }
    Ok(out)
}

/// Greedy nearest-neighbour pairing after sorting by (modulus, argument).
pub fn spectra_match(
    s1: &ComplexMultiset,
    s2: &ComplexMultiset,
    tol: f64,
) -> Result<MatchReport> {
    if s1.len() != s2.len() {
        return Err(Error::SizeMismatch {
            left: s1.len(),
            right: s2.len(),
        });
    }
    let key = |z: &Complex64| (z.norm(), z.arg());
    let mut order: Vec<usize> = (0..s1.len()).collect();
    order.sort_by(|&a, &b| {
        let (ka, kb) = (key(&s1.values[a]), key(&s1.values[b]));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
    let mut used = vec![false; s2.len()];
    let mut pairing = vec![0; s1.len()];
    let mut max_residual: f64 = 0.0;
    for i in order {
        let z = s1.values[i];
        let (best, dist) = s2
            .values
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (z - w).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("sizes are equal");
        used[best] = true;
        pairing[i] = best;
        max_residual = max_residual.max(dist);
    }
    Ok(MatchReport {
        matched: max_residual <= tol,
        pairing,
        max_residual,
    })
}

/// Whether `s` is mapped onto itself by rotation through `2 pi / p`.
pub fn rotation_invariance(s: &ComplexMultiset, p: usize, tol: f64) -> bool {
    if p <= 1 {
        return true;
    }
    spectra_match(s, &s.rotated(TAU / p as f64), tol).is_ok_and(|r| r.matched)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_re(s: &ComplexMultiset) -> Vec<f64> {
        let mut v: Vec<f64> = s.values.iter().map(|z| z.re).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn diagonal_matrix() {
        for precision in [Precision::Double, Precision::Extended] {
            let cfg = OracleConfig {
                precision,
                ..Default::default()
            };
            let m = DenseMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
            let ev = dense_eigenvalues(&m, &cfg).unwrap();
            assert_eq!(sorted_re(&ev), vec![1.0, 2.0, 3.0]);
        }
    }

    #[test]
    fn antidiagonal_two_by_two() {
        let (u, v) = (2.0, 4.5);
        let m = DenseMatrix::from_rows(&[vec![0.0, v], vec![u, 0.0]]).unwrap();
        let ev = dense_eigenvalues(&m, &OracleConfig::default()).unwrap();
        let r = (u * v as f64).sqrt();
        let expect = ComplexMultiset::new(vec![c(r, 0.0), c(-r, 0.0)]);
        assert!(spectra_match(&ev, &expect, 1e-14).unwrap().matched);
    }

    #[test]
    fn rotation_generator_has_unit_circle_spectrum() {
        let m = DenseMatrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let ev = dense_eigenvalues(&m, &OracleConfig::default()).unwrap();
        let expect = ComplexMultiset::new(vec![c(0.0, 1.0), c(0.0, -1.0)]);
        assert!(spectra_match(&ev, &expect, 1e-14).unwrap().matched);
    }

    #[test]
    fn complex_triangular() {
        let m = DenseMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, 3.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.5), c(1.0, 1.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.25, -2.0)],
        ])
        .unwrap();
        let ev = dense_eigenvalues(&m, &OracleConfig::default()).unwrap();
        let expect =
            ComplexMultiset::new(vec![c(1.0, 1.0), c(-1.0, 0.5), c(0.25, -2.0)]);
        assert!(spectra_match(&ev, &expect, 1e-14).unwrap().matched);
    }

    #[test]
    fn defective_zero_of_a_two_band_matrix() {
        // n = 20, b = 5, k = 6: period 11, zero has a Jordan block of order 9
        let bm = crate::band::BandMatrix::from_real(
            20,
            5,
            6,
            &(0..15).map(|i| 0.5 + (i as f64 * 0.37) % 1.5).collect::<Vec<_>>(),
            &(0..14).map(|i| 0.5 + (i as f64 * 0.61) % 1.5).collect::<Vec<_>>(),
            crate::band::Mode::PositiveReal,
        )
        .unwrap();
        let dense = bm.to_dense();
        let wide = dense_eigenvalues(&dense, &OracleConfig::default()).unwrap();
        let mut mods: Vec<f64> = wide.values.iter().map(|z| z.norm()).collect();
        mods.sort_by(f64::total_cmp);
        assert!(mods[8] < 1e-8, "{mods:?}");
        assert!(mods[9] > 0.1);
    }

    #[test]
    fn too_large_is_rejected() {
        let cfg = OracleConfig {
            max_dim: 2,
            ..Default::default()
        };
        let m = DenseMatrix::<f64>::identity(3);
        assert_eq!(
            dense_eigenvalues(&m, &cfg).unwrap_err(),
            Error::TooLarge { dim: 3, cap: 2 }
        );
    }

    #[test]
    fn real_distinct_examples() {
        let cfg = OracleConfig::default();
        assert_eq!(
            real_distinct_eigenvalues(&DenseMatrix::from_diagonal(&[2.0]), &cfg).unwrap(),
            vec![2.0]
        );
        let err = real_distinct_eigenvalues(&DenseMatrix::<f64>::identity(3), &cfg).unwrap_err();
        assert!(matches!(err, Error::DistinctnessViolation { .. }));
        let rot = DenseMatrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            real_distinct_eigenvalues(&rot, &cfg),
            Err(Error::RealityViolation { .. })
        ));
        let neg = DenseMatrix::from_diagonal(&[2.0, -1.0]);
        assert!(matches!(
            real_distinct_eigenvalues(&neg, &cfg),
            Err(Error::NegativeOmega { .. })
        ));
    }

    #[test]
    fn matching_basics() {
        let s = ComplexMultiset::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 2.0)]);
        let r = spectra_match(&s, &s, 0.0).unwrap();
        assert!(r.matched);
        assert_eq!(r.max_residual, 0.0);
        let a = ComplexMultiset::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let b = ComplexMultiset::new(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let r = spectra_match(&a, &b, 1e-15).unwrap();
        assert!(r.matched);
        assert_eq!(r.pairing, vec![1, 0]);
        let short = ComplexMultiset::new(vec![c(1.0, 0.0)]);
        assert_eq!(
            spectra_match(&a, &short, 1.0).unwrap_err(),
            Error::SizeMismatch { left: 2, right: 1 }
        );
        let off = ComplexMultiset::new(vec![c(0.0, 0.0), c(1.5, 0.0)]);
        let r = spectra_match(&a, &off, 0.1).unwrap();
        assert!(!r.matched);
        assert!((r.max_residual - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rotation_examples() {
        let s = ComplexMultiset::new(vec![c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(rotation_invariance(&s, 1, 1e-12));
        assert!(!rotation_invariance(&s, 2, 1e-6));
        let cube: Vec<Complex64> = (0..3)
            .map(|j| Complex64::from_polar(1.5, TAU * j as f64 / 3.0))
            .chain(std::iter::once(c(0.0, 0.0)))
            .collect();
        assert!(rotation_invariance(&ComplexMultiset::new(cube), 3, 1e-12));
    }

    #[test]
    fn zero_counting_is_relative() {
        let s = ComplexMultiset::new(vec![c(1e-7, 0.0), c(100.0, 0.0), c(1e-4, 0.0)]);
        assert_eq!(s.count_zeros(1e-5), 2);
        assert_eq!(s.nonzero(1e-5).len(), 1);
    }
}
