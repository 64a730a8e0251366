//! Spectral structure of two-band matrices.
//!
//! A two-band matrix has nonzeros only on the diagonals `(b + j, j)` and
//! `(i, k + i)`. Its period is `p = (b + k) / gcd(b, k)`, and every eigenvalue
//! lies on one of the `p` rays through the `p`-th roots of unity. This crate
//! computes that spectrum constructively:
//!
//! 1. [`split`] conjugates the matrix into a direct sum of `gcd(b, k)`
//!    two-band blocks with coprime offsets;
//! 2. [`cyclic`] conjugates each block into superdiagonal block form with
//!    bidiagonal blocks `C_1, .., C_p`;
//! 3. [`spectrum`] forms the cyclic products `D_j = C_j C_{j+1} .. C_{j-1}`,
//!    whose eigenvalues are the `p`-th powers of the nonzero eigenvalues;
//! 4. [`tn`] certifies that `D_j` is oscillatory (totally nonnegative,
//!    nonsingular, positive off-diagonals) via exhaustive minors and the
//!    Cauchy-Binet expansion over the bidiagonal factors.
//!
//! [`oracle`] is an independent dense eigensolver used to check all of it.

pub mod band;
pub mod cli;
pub mod cyclic;
pub mod dense;
pub mod error;
pub mod io;
pub mod oracle;
pub mod permutation;
pub mod spectrum;
pub mod split;
pub mod sweep;
pub mod tn;
pub mod verify;

pub use band::{zero_pattern_matches, BandMatrix, Mode, PeriodInfo};
pub use cyclic::{
    cyclic_index_data, cyclic_permutation, extract_cyclic, BidiagonalBlock, CyclicDecomposition,
    CyclicIndexData, Orientation,
};
pub use dense::{DenseMatrix, Scalar};
pub use error::{Error, Result};
pub use oracle::{
    dense_eigenvalues, real_distinct_eigenvalues, rotation_invariance, spectra_match,
    ComplexMultiset, MatchReport, OracleConfig, Precision,
};
pub use permutation::{conjugate, Permutation};
pub use spectrum::{
    base_index, block_product, predicted_counts, structured_eigenvalues, CountPrediction,
    SpectralConfig, SpectrumReport,
};
pub use split::{gcd_permutation, split, DirectSumDecomposition};
pub use tn::{all_minors_nonnegative, cauchy_binet_minor, oscillatory_check, OscillatoryReport};
