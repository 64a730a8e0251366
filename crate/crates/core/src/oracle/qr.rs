//! Hessenberg reduction and shifted QR iteration, eigenvalues only.

use std::ops::{Add, Mul, Neg, Sub};

use super::real::{Cx, Real};
use crate::error::{Error, Result};

/// Entries the Givens-based reduction can act on.
pub(crate) trait Elem<R: Real>:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn conj(&self) -> Self;
    fn modulus(&self) -> R;
    fn scale(&self, r: &R) -> Self;
    fn is_zero(&self) -> bool;
    fn lift(r: R) -> Self;
}

impl<R: Real> Elem<R> for R {
    fn conj(&self) -> Self {
        self.clone()
    }
    fn modulus(&self) -> R {
        self.abs()
    }
    fn scale(&self, r: &R) -> Self {
        self.clone() * r.clone()
    }
    fn is_zero(&self) -> bool {
        Real::is_zero(self)
    }
    fn lift(r: R) -> Self {
        r
    }
}

impl<R: Real> Elem<R> for Cx<R> {
    fn conj(&self) -> Self {
        Cx::conj(self)
    }
    fn modulus(&self) -> R {
        self.abs()
    }
    fn scale(&self, r: &R) -> Self {
        Cx::scale(self, r)
    }
    fn is_zero(&self) -> bool {
        Cx::is_zero(self)
    }
    fn lift(r: R) -> Self {
        Cx::from_real(r)
    }
}

/// Square row-major work matrix.
pub(crate) struct Work<E> {
    pub n: usize,
    pub a: Vec<E>,
}

impl<E: Clone> Work<E> {
    #[inline]
    fn at(&self, i: usize, j: usize) -> &E {
        &self.a[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: E) {
        self.a[i * self.n + j] = v;
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> E {
        self.a[i * self.n + j].clone()
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(x, y)` to `(r, 0)`.
fn givens<R: Real, E: Elem<R>>(x: &E, y: &E) -> (R, E) {
    let ax = x.modulus();
    let ay = y.modulus();
    if ax.is_zero() {
        return (R::zero(), E::lift(R::from_f64(1.0)));
    }
    let norm = (ax.clone() * ax.clone() + ay.clone() * ay).sqrt();
    let c = ax.clone() / norm.clone();
    let unit = x.scale(&(R::from_f64(1.0) / ax));
    let s = (unit * y.conj()).scale(&(R::from_f64(1.0) / norm));
    (c, s)
}

/// Reduces `w` to upper Hessenberg form by Givens similarity transforms.
/// Exact zeros below the subdiagonal are skipped.
pub(crate) fn hessenberg<R: Real, E: Elem<R>>(w: &mut Work<E>) {
    let n = w.n;
    for j in 0..n.saturating_sub(2) {
        for i in (j + 2..n).rev() {
            let y = w.get(i, j);
            if y.is_zero() {
                continue;
            }
            let x = w.get(i - 1, j);
            let (c, s) = givens::<R, E>(&x, &y);
            let sc = s.conj();
            for col in j..n {
                let a = w.get(i - 1, col);
                let b = w.get(i, col);
                w.set(i - 1, col, a.scale(&c) + s.clone() * b.clone());
                w.set(i, col, b.scale(&c) - sc.clone() * a);
            }
            w.set(i, j, E::lift(R::zero()));
            for row in 0..n {
                let a = w.get(row, i - 1);
                let b = w.get(row, i);
                w.set(row, i - 1, a.scale(&c) + sc.clone() * b.clone());
                w.set(row, i, b.scale(&c) - s.clone() * a);
            }
        }
    }
}

fn sign_of<R: Real>(magnitude: R, like: &R) -> R {
    if *like >= R::zero() {
        magnitude.abs()
    } else {
        -magnitude.abs()
    }
}

/// Francis double-shift QR on a real upper Hessenberg matrix.
/// Returns eigenvalues as `(re, im)` pairs.
pub(crate) fn real_hessenberg_eigenvalues<R: Real>(
    w: &mut Work<R>,
    max_iter: usize,
) -> Result<Vec<(R, R)>> {
    let n = w.n;
    let eps = R::epsilon();
    let mut wr = vec![R::zero(); n];
    let mut wi = vec![R::zero(); n];
    let mut anorm = R::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm = anorm + w.at(i, j).abs();
        }
    }
    let mut shift_total = R::zero();
    let mut nn = n as isize - 1;
    let mut its = 0usize;
    let mut total = 0usize;
    while nn >= 0 {
        let hi = nn as usize;
        let mut l = hi;
        while l > 0 {
            let mut s = w.at(l - 1, l - 1).abs() + w.at(l, l).abs();
            if s.is_zero() {
                s = anorm.clone();
            }
            // relative to the neighbouring diagonal, or normwise; the latter
            // lets clusters of tiny eigenvalues (a perturbed defective zero)
            // deflate without waiting for linear convergence
            let h = w.at(l, l - 1).abs();
            if h <= eps.clone() * s || h <= eps.clone() * anorm.clone() {
                w.set(l, l - 1, R::zero());
                break;
            }
            l -= 1;
        }
        let mut x = w.get(hi, hi);
        if l == hi {
            wr[hi] = x + shift_total.clone();
            wi[hi] = R::zero();
            nn -= 1;
            its = 0;
            continue;
        }
        let mut y = w.get(hi - 1, hi - 1);
        let mut ww = w.get(hi, hi - 1) * w.get(hi - 1, hi);
        if l == hi - 1 {
            let p = R::from_f64(0.5) * (y - x.clone());
            let q = p.clone() * p.clone() + ww.clone();
            let z = q.abs().sqrt();
            let x = x + shift_total.clone();
            if q >= R::zero() {
                let z = p.clone() + sign_of(z, &p);
                wr[hi - 1] = x.clone() + z.clone();
                wr[hi] = if z.is_zero() {
                    x.clone() + z.clone()
                } else {
                    x.clone() - ww / z
                };
                wi[hi - 1] = R::zero();
                wi[hi] = R::zero();
            } else {
                wr[hi - 1] = x.clone() + p.clone();
                wr[hi] = x + p;
                wi[hi - 1] = -z.clone();
                wi[hi] = z;
            }
            nn -= 2;
            its = 0;
            continue;
        }
        if its >= max_iter {
            return Err(Error::NoConvergence { iterations: total });
        }
        if its > 0 && its % 10 == 0 {
            // exceptional shift
            shift_total = shift_total + x.clone();
            for i in 0..=hi {
                let d = w.get(i, i) - x.clone();
                w.set(i, i, d);
            }
            let s = w.at(hi, hi - 1).abs() + w.at(hi - 1, hi - 2).abs();
            x = R::from_f64(0.75) * s.clone();
            y = x.clone();
            ww = R::from_f64(-0.4375) * s.clone() * s;
        }
        its += 1;
        total += 1;

        let mut m = hi - 2;
        let (mut p, mut q, mut r);
        loop {
            let z = w.get(m, m);
            let rr = x.clone() - z.clone();
            let ss = y.clone() - z.clone();
            p = (rr.clone() * ss.clone() - ww.clone()) / w.get(m + 1, m) + w.get(m, m + 1);
            q = w.get(m + 1, m + 1) - z.clone() - rr - ss;
            r = w.get(m + 2, m + 1);
            let s = p.abs() + q.abs() + r.abs();
            p = p / s.clone();
            q = q / s.clone();
            r = r / s;
            if m == l {
                break;
            }
            let u = w.at(m, m - 1).abs() * (q.abs() + r.abs());
            let v = p.abs() * (w.at(m - 1, m - 1).abs() + z.abs() + w.at(m + 1, m + 1).abs());
            if u <= eps.clone() * v {
                break;
            }
            m -= 1;
        }
        for i in m + 2..=hi {
            w.set(i, i - 2, R::zero());
            if i != m + 2 {
                w.set(i, i - 3, R::zero());
            }
        }
        let mut k = m;
        while k < hi {
            let mut xk = R::zero();
            if k != m {
                p = w.get(k, k - 1);
                q = w.get(k + 1, k - 1);
                r = if k != hi - 1 {
                    w.get(k + 2, k - 1)
                } else {
                    R::zero()
                };
                xk = p.abs() + q.abs() + r.abs();
                if !xk.is_zero() {
                    p = p / xk.clone();
                    q = q / xk.clone();
                    r = r / xk.clone();
                }
            }
            let s = sign_of(
                (p.clone() * p.clone() + q.clone() * q.clone() + r.clone() * r.clone()).sqrt(),
                &p,
            );
            if !s.is_zero() {
                if k == m {
                    if l != m {
                        let v = -w.get(k, k - 1);
                        w.set(k, k - 1, v);
                    }
                } else {
                    w.set(k, k - 1, -s.clone() * xk);
                }
                p = p + s.clone();
                let xh = p.clone() / s.clone();
                let yh = q.clone() / s.clone();
                let zh = r.clone() / s;
                q = q / p.clone();
                r = r / p.clone();
                for j in k..=hi {
                    let mut pp = w.get(k, j) + q.clone() * w.get(k + 1, j);
                    if k != hi - 1 {
                        pp = pp + r.clone() * w.get(k + 2, j);
                        let v = w.get(k + 2, j) - pp.clone() * zh.clone();
                        w.set(k + 2, j, v);
                    }
                    let v = w.get(k + 1, j) - pp.clone() * yh.clone();
                    w.set(k + 1, j, v);
                    let v = w.get(k, j) - pp * xh.clone();
                    w.set(k, j, v);
                }
                let mmin = hi.min(k + 3);
                for i in l..=mmin {
                    let mut pp = xh.clone() * w.get(i, k) + yh.clone() * w.get(i, k + 1);
                    if k != hi - 1 {
                        pp = pp + zh.clone() * w.get(i, k + 2);
                        let v = w.get(i, k + 2) - pp.clone() * r.clone();
                        w.set(i, k + 2, v);
                    }
                    let v = w.get(i, k + 1) - pp.clone() * q.clone();
                    w.set(i, k + 1, v);
                    let v = w.get(i, k) - pp;
                    w.set(i, k, v);
                }
            }
            k += 1;
        }
    }
    Ok(wr.into_iter().zip(wi).collect())
}

/// Single-shift QR with Wilkinson shifts on a complex upper Hessenberg matrix.
pub(crate) fn complex_hessenberg_eigenvalues<R: Real>(
    w: &mut Work<Cx<R>>,
    max_iter: usize,
) -> Result<Vec<Cx<R>>> {
    let n = w.n;
    let eps = R::epsilon();
    let mut out = vec![Cx::zero(); n];
    let mut anorm = R::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm = anorm + w.at(i, j).abs1();
        }
    }
    let mut nn = n as isize - 1;
    let mut its = 0usize;
    let mut total = 0usize;
    while nn >= 0 {
        let hi = nn as usize;
        let mut l = hi;
        while l > 0 {
            let mut s = w.at(l - 1, l - 1).abs1() + w.at(l, l).abs1();
            if s.is_zero() {
                s = anorm.clone();
            }
            let h = w.at(l, l - 1).abs1();
            if h <= eps.clone() * s || h <= eps.clone() * anorm.clone() {
                w.set(l, l - 1, Cx::zero());
                break;
            }
            l -= 1;
        }
        if l == hi {
            out[hi] = w.get(hi, hi);
            nn -= 1;
            its = 0;
            continue;
        }
        if its >= max_iter {
            return Err(Error::NoConvergence { iterations: total });
        }
        let mu = if its > 0 && its % 10 == 0 {
            let s = if hi >= l + 2 {
                w.at(hi, hi - 1).re.abs() + w.at(hi - 1, hi - 2).re.abs()
            } else {
                w.at(hi, hi - 1).re.abs()
            };
            w.get(hi, hi) + Cx::from_real(R::from_f64(0.75) * s)
        } else {
            wilkinson_shift(
                w.get(hi - 1, hi - 1),
                w.get(hi - 1, hi),
                w.get(hi, hi - 1),
                w.get(hi, hi),
            )
        };
        its += 1;
        total += 1;

        for i in l..=hi {
            let d = w.get(i, i) - mu.clone();
            w.set(i, i, d);
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens::<R, Cx<R>>(w.at(k, k), w.at(k + 1, k));
            let sc = s.conj();
            for col in k..=hi {
                let a = w.get(k, col);
                let b = w.get(k + 1, col);
                w.set(k, col, a.scale(&c) + s.clone() * b.clone());
                w.set(k + 1, col, b.scale(&c) - sc.clone() * a);
            }
            w.set(k + 1, k, Cx::zero());
            rots.push((c, s));
        }
        for (k, (c, s)) in (l..hi).zip(rots) {
            let sc = s.conj();
            for row in l..=(k + 1).min(hi) {
                let a = w.get(row, k);
                let b = w.get(row, k + 1);
                w.set(row, k, a.scale(&c) + sc.clone() * b.clone());
                w.set(row, k + 1, b.scale(&c) - s.clone() * a);
            }
        }
        for i in l..=hi {
            let d = w.get(i, i) + mu.clone();
            w.set(i, i, d);
        }
    }
    Ok(out)
}

/// Eigenvalue of `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift<R: Real>(a: Cx<R>, b: Cx<R>, c: Cx<R>, d: Cx<R>) -> Cx<R> {
    let half = R::from_f64(0.5);
    let mean = (a.clone() + d.clone()).scale(&half);
    let diff = (a - d.clone()).scale(&half);
    let disc = (diff.clone() * diff + b * c).sqrt();
    let l1 = mean.clone() + disc.clone();
    let l2 = mean - disc;
    if (l1.clone() - d.clone()).abs1() <= (l2.clone() - d).abs1() {
        l1
    } else {
        l2
    }
}
