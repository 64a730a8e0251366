//! Arithmetic backends for the oracle: `f64` and a 256-bit binary float.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, RoundingMode, Sign};

pub(crate) trait Real:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    /// Unit roundoff.
    fn epsilon() -> Self;
    fn is_zero(&self) -> bool;
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn epsilon() -> Self {
        f64::EPSILON / 2.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

/// `x * 2^e` without intermediate overflow or underflow.
fn ldexp(mut x: f64, mut e: i32) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e)
}

pub(crate) const WIDE_BITS: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

/// Fixed 256-bit binary floating point.
#[derive(Clone, Debug)]
pub(crate) struct Wide(BigFloat);

impl Real for Wide {
    fn from_f64(x: f64) -> Self {
        Wide(BigFloat::from_f64(x, WIDE_BITS))
    }

    fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _, sign, exp, _)) = self.0.as_raw_parts() else {
            return f64::NAN;
        };
        // value = 0.mantissa * 2^exp, most significant word last
        let Some((&top, rest)) = words.split_last() else {
            return 0.0;
        };
        if top == 0 {
            return 0.0;
        }
        // round the leading 64 bits to 53, ties to even
        let mut m = top >> 11;
        let low = top & 0x7ff;
        let sticky = rest.iter().any(|&w| w != 0);
        if low > 0x400 || (low == 0x400 && (sticky || m & 1 == 1)) {
            m += 1;
        }
        let mag = ldexp(m as f64, exp - 53);
        match sign {
            Sign::Neg => -mag,
            Sign::Pos => mag,
        }
    }

    fn abs(&self) -> Self {
        Wide(self.0.abs())
    }

    fn sqrt(&self) -> Self {
        Wide(self.0.sqrt(WIDE_BITS, RM))
    }

    fn epsilon() -> Self {
        Wide::from_f64(2f64.powi(-(WIDE_BITS as i32 - 1)))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl PartialEq for Wide {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for Wide {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

impl Add for Wide {
    type Output = Wide;
    fn add(self, rhs: Wide) -> Wide {
        Wide(self.0.add(&rhs.0, WIDE_BITS, RM))
    }
}

impl Sub for Wide {
    type Output = Wide;
    fn sub(self, rhs: Wide) -> Wide {
        Wide(self.0.sub(&rhs.0, WIDE_BITS, RM))
    }
}

impl Mul for Wide {
    type Output = Wide;
    fn mul(self, rhs: Wide) -> Wide {
        Wide(self.0.mul(&rhs.0, WIDE_BITS, RM))
    }
}

impl Div for Wide {
    type Output = Wide;
    fn div(self, rhs: Wide) -> Wide {
        Wide(self.0.div(&rhs.0, WIDE_BITS, RM))
    }
}

impl Neg for Wide {
    type Output = Wide;
    fn neg(self) -> Wide {
        Wide(self.0.neg())
    }
}

/// Complex number over a [`Real`] backend.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cx<R> {
    pub fn new(re: R, im: R) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(R::zero(), R::zero())
    }

    pub fn from_real(re: R) -> Self {
        Self::new(re, R::zero())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> R {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn abs(&self) -> R {
        self.norm_sqr().sqrt()
    }

    /// `|re| + |im|`, the cheap magnitude used in convergence tests.
    pub fn abs1(&self) -> R {
        self.re.abs() + self.im.abs()
    }

    pub fn scale(&self, r: &R) -> Self {
        Self::new(self.re.clone() * r.clone(), self.im.clone() * r.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn sqrt(&self) -> Self {
        // principal branch
        let r = self.abs();
        if r.is_zero() {
            return Self::zero();
        }
        let half = R::from_f64(0.5);
        let a = ((r.clone() + self.re.clone()) * half.clone()).sqrt();
        let b = ((r - self.re.clone()) * half).sqrt();
        if self.im < R::zero() {
            Self::new(a, -b)
        } else {
            Self::new(a, b)
        }
    }
}

impl<R: Real> Add for Cx<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<R: Real> Sub for Cx<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<R: Real> Mul for Cx<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl<R: Real> Div for Cx<R> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let d = rhs.norm_sqr();
        let num = self * rhs.conj();
        Self::new(num.re / d.clone(), num.im / d)
    }
}

impl<R: Real> Neg for Cx<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}
