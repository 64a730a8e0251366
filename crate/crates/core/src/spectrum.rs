//! Structured spectrum: cyclic block products, closed-form eigenvalue counts
//! and the eigenvalues assembled from the `p`-th roots of the products.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::band::{gcd, BandMatrix, Mode};
use crate::cyclic::{extract_cyclic, CyclicDecomposition};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::oracle::{dense_eigenvalues, real_distinct_eigenvalues, ComplexMultiset, OracleConfig};
use crate::split::split;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    pub oracle: OracleConfig,
    /// Outside positive mode, an eigenvalue `w` of `D_j` is dropped as zero
    /// when `|w| <= omega_zero_tol * max |w|`.
    pub omega_zero_tol: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            oracle: OracleConfig::default(),
            omega_zero_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Structured,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ray {
    pub j: usize,
    pub phase: f64,
    /// Descending.
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub p: usize,
    pub g: usize,
    pub zero_multiplicity: usize,
    pub rays: Vec<Ray>,
    pub eigenvalues: ComplexMultiset,
    pub source: Source,
}

impl SpectrumReport {
    /// Buckets an oracle spectrum: entries below `zero_tol * max(1, rho)` are
    /// zeros, the rest go to the ray nearest their argument.
    pub fn from_oracle(n: usize, b: usize, k: usize, spectrum: &ComplexMultiset, zero_tol: f64) -> Self {
        let g = gcd(b, k);
        let p = (b + k) / g;
        let threshold = spectrum.zero_threshold(zero_tol);
        let mut rays = empty_rays(p);
        let mut zeros = 0;
        for z in &spectrum.values {
            let r = z.norm();
            if r < threshold {
                zeros += 1;
                continue;
            }
            let j = (z.arg().rem_euclid(TAU) / (TAU / p as f64)).round() as usize % p;
            rays[j].radii.push(r);
        }
        for ray in &mut rays {
            ray.radii.sort_by(|a, b| b.total_cmp(a));
        }
        debug_assert_eq!(zeros + rays.iter().map(|r| r.radii.len()).sum::<usize>(), n);
        Self {
            p,
            g,
            zero_multiplicity: zeros,
            rays,
            eigenvalues: spectrum.clone(),
            source: Source::Oracle,
        }
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }
}

fn empty_rays(p: usize) -> Vec<Ray> {
    (0..p)
        .map(|j| Ray {
            j,
            phase: TAU * j as f64 / p as f64,
            radii: Vec::new(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountPrediction {
    pub zero_multiplicity: usize,
    pub nonzero_per_ray: usize,
    /// `s_max(t)` for `t = 1..g`: block `t` contributes radii `s = 1..s_max(t)`.
    pub per_t_counts: Vec<usize>,
}

/// `D_j = C_j C_{j+1} .. C_{j+p-1}` (indices cyclic), of order `n_{j-1}`.
pub fn block_product(dec: &CyclicDecomposition, j: usize) -> Result<DenseMatrix<Complex64>> {
    let p = dec.p();
    if j == 0 || j > p {
        return Err(Error::InvalidInput(format!("product index {j} outside 1..={p}")));
    }
    let mut acc = dec.block(j).to_dense();
    for step in 1..p {
        acc = acc.matmul(&dec.block(j + step).to_dense())?;
    }
    Ok(acc)
}

/// Smallest `j` in `1..=p` with `n_{j-1} = m`, so that `D_j` is `m x m`.
pub fn base_index(dec: &CyclicDecomposition) -> usize {
    let sizes = &dec.index_data.sizes;
    let m = dec.index_data.m();
    sizes.iter().position(|&s| s == m).map_or(1, |i| i + 1)
}

/// Closed-form zero multiplicity and nonzero counts.
pub fn predicted_counts(n: usize, b: usize, k: usize) -> Result<CountPrediction> {
    if n == 0 || b == 0 || k == 0 {
        return Err(Error::BadOffset { n, b, k });
    }
    let g = gcd(b, k) as i64;
    let p = ((b + k) as i64) / g;
    let n = n as i64;
    let big_n = n / g;
    let zeros = g * (big_n % p) + (n % g) * ((big_n + 1) % p - big_n % p);
    let per_t: Vec<i64> = (1..=g)
        .map(|t| ((n - t).div_euclid(g) + 1).div_euclid(p))
        .collect();
    let per_ray: i64 = per_t.iter().sum();
    if zeros < 0 || per_t.iter().any(|&s| s < 0) || p * per_ray + zeros != n {
        return Err(Error::InconsistentCounts(format!(
            "n={n}, zeros={zeros}, per-ray={per_ray}, p={p}"
        )));
    }
    Ok(CountPrediction {
        zero_multiplicity: zeros as usize,
        nonzero_per_ray: per_ray as usize,
        per_t_counts: per_t.into_iter().map(|s| s as usize).collect(),
    })
}

/// Nonzero eigenvalues `w` of the base product of one coprime block.
fn block_omegas(block: &BandMatrix, cfg: &SpectralConfig) -> Result<Vec<Complex64>> {
    let p = block.b() + block.k();
    if block.n() / p == 0 {
        return Ok(Vec::new());
    }
    let dec = extract_cyclic(block)?;
    let d = block_product(&dec, base_index(&dec))?;
    match block.mode() {
        Mode::PositiveReal => Ok(real_distinct_eigenvalues(&d, &cfg.oracle)?
            .into_iter()
            .map(|w| Complex64::new(w, 0.0))
            .collect()),
        Mode::NonnegativeReal | Mode::Complex => {
            let spectrum = dense_eigenvalues(&d, &cfg.oracle)?;
            let cut = cfg.omega_zero_tol * spectrum.spectral_radius();
            let mut out: Vec<Complex64> = spectrum
                .values
                .into_iter()
                .filter(|w| w.norm() > cut)
                .collect();
            out.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(a.arg().total_cmp(&b.arg())));
            Ok(out)
        }
    }
}

/// Eigenvalues of `bm` from the block products: each nonzero eigenvalue `w`
/// of a base product contributes `w^(1/p) e^(2 pi i j / p)`, `j = 0..p-1`;
/// the rest are zeros.
pub fn structured_eigenvalues(bm: &BandMatrix, cfg: &SpectralConfig) -> Result<SpectrumReport> {
    let (n, b, k) = (bm.n(), bm.b(), bm.k());
    let dec = split(bm)?;
    let g = dec.g();
    let p = (b + k) / g;
    let omegas: Vec<Vec<Complex64>> = dec
        .blocks
        .par_iter()
        .map(|block| block_omegas(block, cfg))
        .collect::<Result<_>>()?;

    let fan: Vec<Complex64> = (0..p)
        .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / p as f64))
        .collect();
    let mut rays = empty_rays(p);
    let mut values = Vec::with_capacity(n);
    for w in omegas.iter().flatten() {
        let root = if bm.mode() == Mode::PositiveReal {
            Complex64::new(w.re.powf(1.0 / p as f64), 0.0)
        } else {
            w.powf(1.0 / p as f64)
        };
        for (ray, unit) in rays.iter_mut().zip(&fan) {
            ray.radii.push(root.norm());
            values.push(root * unit);
        }
    }
    for ray in &mut rays {
        ray.radii.sort_by(|a, b| b.total_cmp(a));
    }
    let nonzero = values.len();
    let zero_multiplicity = n - nonzero;
    if bm.mode() == Mode::PositiveReal {
        let predicted = predicted_counts(n, b, k)?;
        if predicted.zero_multiplicity != zero_multiplicity {
            return Err(Error::InconsistentCounts(format!(
                "structured spectrum has {zero_multiplicity} zeros, formula gives {}",
                predicted.zero_multiplicity
            )));
        }
    }
    values.resize(n, Complex64::new(0.0, 0.0));
    Ok(SpectrumReport {
        p,
        g,
        zero_multiplicity,
        rays,
        eigenvalues: ComplexMultiset::new(values),
        source: Source::Structured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::extract_cyclic;
    use crate::oracle::spectra_match;
    use crate::permutation::conjugate;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn d2_of_the_ones_example() {
        let bm = BandMatrix::ones(4, 1, 2).unwrap();
        let dec = extract_cyclic(&bm).unwrap();
        assert_eq!(base_index(&dec), 2);
        let d = block_product(&dec, 2).unwrap();
        assert_eq!((d.rows(), d.cols()), (1, 1));
        assert_eq!(d[(0, 0)], c(2.0));
        assert_eq!(block_product(&dec, 1).unwrap().rows(), 2);
    }

    #[test]
    fn three_by_three_product_is_the_band_product() {
        let bm = BandMatrix::from_real(3, 1, 2, &[2.0, 3.0], &[5.0], Mode::PositiveReal).unwrap();
        let dec = extract_cyclic(&bm).unwrap();
        for j in 1..=3 {
            assert_eq!(block_product(&dec, j).unwrap()[(0, 0)], c(30.0));
        }
    }

    #[test]
    fn products_are_diagonal_blocks_of_the_power() {
        let bm = BandMatrix::from_real(
            9,
            2,
            3,
            &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0],
            &[1.5, 2.5, 0.5, 1.0, 2.0, 3.0],
            Mode::PositiveReal,
        )
        .unwrap();
        let dec = extract_cyclic(&bm).unwrap();
        let a = conjugate(&dec.perm, &bm.to_dense()).unwrap();
        let mut power = a.clone();
        for _ in 1..dec.p() {
            power = power.matmul(&a).unwrap();
        }
        let idx = &dec.index_data;
        for j in 1..=dec.p() {
            let cls = j - 1;
            let s = idx.sizes[cls];
            let diag = power.block(idx.class_start(cls), idx.class_start(cls), s, s);
            assert_eq!(block_product(&dec, j).unwrap(), diag);
        }
    }

    #[test]
    fn base_index_examples() {
        // sizes (2,1,1): n=4, b=1, k=2
        let dec = extract_cyclic(&BandMatrix::ones(4, 1, 2).unwrap()).unwrap();
        assert_eq!(dec.index_data.sizes, vec![2, 1, 1]);
        assert_eq!(base_index(&dec), 2);
        // sizes (1,1,1)
        let dec = extract_cyclic(&BandMatrix::ones(3, 1, 2).unwrap()).unwrap();
        assert_eq!(base_index(&dec), 1);
        // p = 5, n = 11: sizes (3,2,2,2,2)
        let dec = extract_cyclic(&BandMatrix::ones(11, 2, 3).unwrap()).unwrap();
        assert_eq!(dec.index_data.sizes, vec![3, 2, 2, 2, 2]);
        assert_eq!(base_index(&dec), 2);
    }

    #[test]
    fn count_examples() {
        let c = predicted_counts(4, 1, 2).unwrap();
        assert_eq!((c.zero_multiplicity, c.nonzero_per_ray), (1, 1));
        let c = predicted_counts(7, 2, 4).unwrap();
        assert_eq!(c.zero_multiplicity, 1);
        assert_eq!(c.per_t_counts, vec![1, 1]);
        let c = predicted_counts(6, 3, 3).unwrap();
        assert_eq!((c.zero_multiplicity, c.nonzero_per_ray), (0, 3));
        let c = predicted_counts(2, 3, 3).unwrap();
        assert_eq!((c.zero_multiplicity, c.nonzero_per_ray), (2, 0));
    }

    #[test]
    fn count_formula_matches_per_block_remainders() {
        for n in 1..40 {
            for b in 1..8 {
                for k in 1..8 {
                    let pred = predicted_counts(n, b, k).unwrap();
                    let g = gcd(b, k);
                    let p = (b + k) / g;
                    let by_blocks: usize = crate::split::block_sizes(n, g).iter().map(|s| s % p).sum();
                    assert_eq!(pred.zero_multiplicity, by_blocks, "{n} {b} {k}");
                }
            }
        }
    }

    #[test]
    fn ones_example_structured() {
        let bm = BandMatrix::ones(4, 1, 2).unwrap();
        let rep = structured_eigenvalues(&bm, &SpectralConfig::default()).unwrap();
        assert_eq!((rep.p, rep.g, rep.zero_multiplicity), (3, 1, 1));
        let r = 2f64.powf(1.0 / 3.0);
        for ray in &rep.rays {
            assert_eq!(ray.radii.len(), 1);
            assert!((ray.radii[0] - r).abs() < 1e-14);
        }
        let expected = ComplexMultiset::new(vec![
            c(0.0),
            Complex64::from_polar(r, 0.0),
            Complex64::from_polar(r, TAU / 3.0),
            Complex64::from_polar(r, 2.0 * TAU / 3.0),
        ]);
        assert!(spectra_match(&rep.eigenvalues, &expected, 1e-12).unwrap().matched);
    }

    #[test]
    fn antidiagonal_pair() {
        let bm = BandMatrix::from_real(2, 1, 1, &[3.0], &[12.0], Mode::PositiveReal).unwrap();
        let rep = structured_eigenvalues(&bm, &SpectralConfig::default()).unwrap();
        assert_eq!(rep.p, 2);
        assert_eq!(rep.rays[1].phase, TAU / 2.0);
        assert!((rep.rays[0].radii[0] - 6.0).abs() < 1e-13);
        assert!((rep.rays[1].radii[0] - 6.0).abs() < 1e-13);
    }

    #[test]
    fn empty_bands_give_zeros() {
        let bm = BandMatrix::from_real(2, 3, 3, &[], &[], Mode::PositiveReal).unwrap();
        let rep = structured_eigenvalues(&bm, &SpectralConfig::default()).unwrap();
        assert_eq!((rep.p, rep.g, rep.zero_multiplicity), (2, 3, 2));
        assert!(rep.eigenvalues.values.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn report_json_shape() {
        let bm = BandMatrix::ones(4, 1, 2).unwrap();
        let rep = structured_eigenvalues(&bm, &SpectralConfig::default()).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["source"], "structured");
        assert_eq!(v["zero_multiplicity"], 1);
        assert_eq!(v["rays"][0]["j"], 0);
        assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 4);
        assert_eq!(v["eigenvalues"][0].as_array().unwrap().len(), 2);
    }

    #[test]
    fn complex_mode_fans_the_principal_root() {
        let i = Complex64::new(0.0, 1.0);
        let bm = BandMatrix::new(3, 1, 2, vec![i, c(1.0)], vec![c(2.0)], Mode::Complex).unwrap();
        let rep = structured_eigenvalues(&bm, &SpectralConfig::default()).unwrap();
        let w: Complex64 = Complex64::new(0.0, 2.0);
        let expected: Vec<_> = (0..3)
            .map(|j| w.powf(1.0 / 3.0) * Complex64::from_polar(1.0, TAU * j as f64 / 3.0))
            .collect();
        let m = spectra_match(&rep.eigenvalues, &ComplexMultiset::new(expected), 1e-12).unwrap();
        assert!(m.matched);
    }

    #[test]
    fn oracle_report_buckets_rays() {
        let r = 2f64.powf(1.0 / 3.0);
        let s = ComplexMultiset::new(vec![
            c(1e-9),
            Complex64::from_polar(r, 0.0),
            Complex64::from_polar(r, TAU / 3.0),
            Complex64::from_polar(r, -TAU / 3.0),
        ]);
        let rep = SpectrumReport::from_oracle(4, 1, 2, &s, 1e-5);
        assert_eq!(rep.zero_multiplicity, 1);
        assert!(rep.rays.iter().all(|ray| ray.radii.len() == 1));
        assert_eq!(rep.source, Source::Oracle);
    }
}
