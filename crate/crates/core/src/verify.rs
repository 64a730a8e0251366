//! Cross-check of the structured spectrum against the dense oracle.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::band::BandMatrix;
use crate::error::Result;
use crate::oracle::{dense_eigenvalues, rotation_invariance, spectra_match, ComplexMultiset, MatchReport};
use crate::spectrum::{predicted_counts, structured_eigenvalues, CountPrediction, SpectralConfig, SpectrumReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub spectral: SpectralConfig,
    /// Matching tolerance, relative to `max(1, rho)`.
    pub tol: f64,
    /// Relative zero threshold applied to the oracle spectrum.
    pub zero_tol: f64,
    /// Largest allowed distance of a nonzero eigenvalue's argument from a
    /// multiple of `2 pi / p` (real modes only).
    pub phase_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            spectral: SpectralConfig::default(),
            tol: 1e-6,
            zero_tol: 1e-5,
            phase_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub b: usize,
    pub k: usize,
    pub p: usize,
    pub g: usize,
    pub predicted: CountPrediction,
    pub structured_zeros: usize,
    pub oracle_zeros: usize,
    /// Structured counts against the closed form. Only asserted in positive
    /// mode, where zero entries cannot add zeros.
    pub counts_ok: Option<bool>,
    pub oracle_zeros_ok: bool,
    pub spectral_radius: f64,
    pub match_tol: f64,
    pub matching: MatchReport,
    pub rotation_ok: bool,
    /// `None` in complex mode, where eigenvalues need not lie on the rays.
    pub phases_ok: Option<bool>,
    pub max_phase_error: Option<f64>,
    pub passed: bool,
}

/// Distance of `arg` from the nearest multiple of `2 pi / p`.
pub fn phase_error(arg: f64, p: usize) -> f64 {
    let step = TAU / p as f64;
    let r = arg.rem_euclid(step);
    r.min(step - r)
}

/// Largest ray phase error among entries at or above the zero threshold.
pub fn max_phase_error(spectrum: &ComplexMultiset, p: usize, zero_tol: f64) -> f64 {
    spectrum
        .nonzero(zero_tol)
        .values
        .iter()
        .map(|z| phase_error(z.arg(), p))
        .fold(0.0, f64::max)
}

pub struct Verification {
    pub report: VerifyReport,
    pub structured: SpectrumReport,
    pub oracle: ComplexMultiset,
}

pub fn verify(bm: &BandMatrix, cfg: &VerifyConfig) -> Result<VerifyReport> {
    verify_full(bm, cfg).map(|v| v.report)
}

pub fn verify_full(bm: &BandMatrix, cfg: &VerifyConfig) -> Result<Verification> {
    let (n, b, k) = (bm.n(), bm.b(), bm.k());
    let predicted = predicted_counts(n, b, k)?;
    let structured = structured_eigenvalues(bm, &cfg.spectral)?;
    let oracle = dense_eigenvalues(&bm.to_dense(), &cfg.spectral.oracle)?;
    let p = structured.p;

    let counts_ok = (bm.mode() == crate::band::Mode::PositiveReal).then(|| {
        structured.zero_multiplicity == predicted.zero_multiplicity
            && structured
                .rays
                .iter()
                .all(|r| r.radii.len() == predicted.nonzero_per_ray)
    });
    let oracle_zeros = oracle.count_zeros(cfg.zero_tol);
    let rho = oracle.spectral_radius();
    let match_tol = cfg.tol * rho.max(1.0);
    let matching = spectra_match(&structured.eigenvalues, &oracle, match_tol)?;
    let rotation_ok = rotation_invariance(&oracle, p, match_tol);
    let phase = bm
        .mode()
        .is_real()
        .then(|| max_phase_error(&oracle, p, cfg.zero_tol));
    let phases_ok = phase.map(|e| e <= cfg.phase_tol);

    let oracle_zeros_ok = oracle_zeros == structured.zero_multiplicity;
    let passed = counts_ok.unwrap_or(true)
        && oracle_zeros_ok
        && matching.matched
        && rotation_ok
        && phases_ok.unwrap_or(true);
    let report = VerifyReport {
        n,
        b,
        k,
        p,
        g: structured.g,
        predicted,
        structured_zeros: structured.zero_multiplicity,
        oracle_zeros,
        counts_ok,
        oracle_zeros_ok,
        spectral_radius: rho,
        match_tol,
        matching,
        rotation_ok,
        phases_ok,
        max_phase_error: phase,
        passed,
    };
    Ok(Verification {
        report,
        structured,
        oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::Mode;
    use crate::io::GeneratorSpec;

    #[test]
    fn phase_error_wraps() {
        assert!(phase_error(0.0, 3) < 1e-15);
        assert!(phase_error(TAU / 3.0 + 1e-3, 3) - 1e-3 < 1e-12);
        assert!((phase_error(-1e-3, 3) - 1e-3).abs() < 1e-12);
        assert!((phase_error(TAU / 6.0, 3) - TAU / 6.0).abs() < 1e-12);
    }

    #[test]
    fn ones_example_passes() {
        let bm = BandMatrix::ones(4, 1, 2).unwrap();
        let cfg = VerifyConfig {
            tol: 1e-8,
            ..Default::default()
        };
        let rep = verify(&bm, &cfg).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!((rep.structured_zeros, rep.oracle_zeros), (1, 1));
    }

    #[test]
    fn random_positive_instance_passes() {
        let bm = GeneratorSpec {
            n: 30,
            b: 2,
            k: 3,
            mode: Mode::PositiveReal,
            seed: 11,
            low: 0.5,
            high: 2.0,
        }
        .generate()
        .unwrap();
        let rep = verify(&bm, &VerifyConfig::default()).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn zero_tolerance_fails_with_residual() {
        let bm = GeneratorSpec {
            n: 13,
            b: 2,
            k: 3,
            mode: Mode::PositiveReal,
            seed: 5,
            low: 0.5,
            high: 2.0,
        }
        .generate()
        .unwrap();
        let cfg = VerifyConfig {
            tol: 0.0,
            ..Default::default()
        };
        let rep = verify(&bm, &cfg).unwrap();
        assert!(!rep.matching.matched);
        assert!(rep.matching.max_residual > 0.0);
    }
}
