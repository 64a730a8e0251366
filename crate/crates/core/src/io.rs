//! JSON instance format, seeded instance generation and serde helpers.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::band::{band_len, BandMatrix, Mode};
use crate::error::{Error, Result};

/// A band entry on the wire: a bare number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// `{"n", "b", "k", "mode", "lower", "upper"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub b: usize,
    pub k: usize,
    pub mode: Mode,
    pub lower: Vec<Entry>,
    pub upper: Vec<Entry>,
}

impl InstanceFile {
    pub fn to_band_matrix(&self) -> Result<BandMatrix> {
        let lift = |v: &[Entry]| v.iter().map(|&e| Complex64::from(e)).collect();
        BandMatrix::new(
            self.n,
            self.b,
            self.k,
            lift(&self.lower),
            lift(&self.upper),
            self.mode,
        )
    }
}

impl From<&BandMatrix> for InstanceFile {
    fn from(bm: &BandMatrix) -> Self {
        let wire = |v: &[Complex64]| {
            v.iter()
                .map(|z| match bm.mode() {
                    Mode::Complex => Entry::Pair([z.re, z.im]),
                    _ => Entry::Real(z.re),
                })
                .collect()
        };
        Self {
            n: bm.n(),
            b: bm.b(),
            k: bm.k(),
            mode: bm.mode(),
            lower: wire(bm.lower()),
            upper: wire(bm.upper()),
        }
    }
}

/// Random instance description: entries uniform in `[low, high]`. In complex
/// mode the modulus is uniform in `[low, high]` and the phase uniform on the
/// circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub n: usize,
    pub b: usize,
    pub k: usize,
    pub mode: Mode,
    pub seed: u64,
    #[serde(default = "default_low")]
    pub low: f64,
    #[serde(default = "default_high")]
    pub high: f64,
}

fn default_low() -> f64 {
    0.5
}

fn default_high() -> f64 {
    2.0
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.low.is_finite() && self.high.is_finite()) || self.low > self.high {
            return Err(Error::InvalidInput(format!(
                "bad entry range [{}, {}]",
                self.low, self.high
            )));
        }
        let ok = match self.mode {
            Mode::PositiveReal => self.low > 0.0,
            Mode::NonnegativeReal | Mode::Complex => self.low >= 0.0,
        };
        if !ok {
            return Err(Error::InvalidInput(format!(
                "range [{}, {}] is not admissible in {} mode",
                self.low, self.high, self.mode
            )));
        }
        if self.n == 0 || self.b == 0 || self.k == 0 {
            return Err(Error::BadOffset {
                n: self.n,
                b: self.b,
                k: self.k,
            });
        }
        Ok(())
    }

    /// Deterministic per seed (ChaCha8 stream seeded from `seed`).
    pub fn generate(&self) -> Result<BandMatrix> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut draw = |len: usize| -> Vec<Complex64> {
            (0..len)
                .map(|_| {
                    let r = if self.low == self.high {
                        self.low
                    } else {
                        rng.random_range(self.low..=self.high)
                    };
                    match self.mode {
                        Mode::Complex => Complex64::from_polar(r, rng.random_range(0.0..TAU)),
                        _ => Complex64::new(r, 0.0),
                    }
                })
                .collect()
        };
        let lower = draw(band_len(self.n, self.b));
        let upper = draw(band_len(self.n, self.k));
        BandMatrix::new(self.n, self.b, self.k, lower, upper, self.mode)
    }
}

/// Either an explicit instance or a generator description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSpec {
    Explicit(InstanceFile),
    Generator(GeneratorSpec),
}

impl InstanceSpec {
    pub fn to_band_matrix(&self) -> Result<BandMatrix> {
        match self {
            InstanceSpec::Explicit(f) => f.to_band_matrix(),
            InstanceSpec::Generator(g) => g.generate(),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<BandMatrix> {
    let spec: InstanceSpec =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    spec.to_band_matrix()
}

/// SplitMix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sweep cell `(n, b, k)` under a master seed: SplitMix64 chained
/// over the four words. Independent of evaluation order.
pub fn cell_seed(master: u64, n: usize, b: usize, k: usize) -> u64 {
    [n as u64, b as u64, k as u64]
        .iter()
        .fold(mix64(master), |h, &w| mix64(h ^ w))
}

pub(crate) fn serialize_pairs<S: Serializer>(
    values: &[Complex64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for z in values {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}
