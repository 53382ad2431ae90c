//! Complex scalar and 2x2 complex matrix arithmetic in closed form.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CNum = Complex64;

/// Absolute tolerance for generic equality tests.
pub const TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> CNum {
    CNum::new(re, im)
}

pub fn r(re: f64) -> CNum {
    CNum::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub v1: CNum,
    pub v2: CNum,
}

impl Vec2 {
    pub fn new(v1: CNum, v2: CNum) -> Self {
        Self { v1, v2 }
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.v1.norm_sqr() + self.v2.norm_sqr()
    }

    /// Inner product <self, other> (conjugate-linear in `other`).
    pub fn dot(&self, other: &Vec2) -> CNum {
        self.v1 * other.v1.conj() + self.v2 * other.v2.conj()
    }

    pub fn conj(&self) -> Vec2 {
        Vec2::new(self.v1.conj(), self.v2.conj())
    }

    pub fn scale(&self, s: CNum) -> Vec2 {
        Vec2::new(self.v1 * s, self.v2 * s)
    }

    /// Outer product self * other^*.
    pub fn outer(&self, other: &Vec2) -> Mat2 {
        Mat2::new(
            self.v1 * other.v1.conj(),
            self.v1 * other.v2.conj(),
            self.v2 * other.v1.conj(),
            self.v2 * other.v2.conj(),
        )
    }

    /// A unit vector orthogonal to self (assumed unit).
    pub fn perp(&self) -> Vec2 {
        Vec2::new(-self.v2.conj(), self.v1.conj())
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.v1 + o.v1, self.v2 + o.v2)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.v1 - o.v1, self.v2 - o.v2)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.v1, -self.v2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a11: CNum,
    pub a12: CNum,
    pub a21: CNum,
    pub a22: CNum,
}

impl Mat2 {
    pub fn new(a11: CNum, a12: CNum, a21: CNum, a22: CNum) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        Self::diag(r(1.0), r(1.0))
    }

    pub fn zero() -> Self {
        Self::diag(r(0.0), r(0.0))
    }

    pub fn diag(d1: CNum, d2: CNum) -> Self {
        Self::new(d1, r(0.0), r(0.0), d2)
    }

    /// Matrix with columns c1, c2.
    pub fn from_columns(c1: Vec2, c2: Vec2) -> Self {
        Self::new(c1.v1, c2.v1, c1.v2, c2.v2)
    }

    pub fn col1(&self) -> Vec2 {
        Vec2::new(self.a11, self.a21)
    }

    pub fn col2(&self) -> Vec2 {
        Vec2::new(self.a12, self.a22)
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.a11.conj(), self.a21.conj(), self.a12.conj(), self.a22.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn trace(&self) -> CNum {
        self.a11 + self.a22
    }

    pub fn det(&self) -> CNum {
        det2(self)
    }

    pub fn scale(&self, s: CNum) -> Self {
        Self::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(
            self.a11 * v.v1 + self.a12 * v.v2,
            self.a21 * v.v1 + self.a22 * v.v2,
        )
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        let scale = self.frobenius_sqr();
        if d.norm() <= 1e-300 || d.norm() <= f64::EPSILON * 1e-4 * scale {
            return None;
        }
        let inv = d.inv();
        Some(Self::new(self.a22 * inv, -self.a12 * inv, -self.a21 * inv, self.a11 * inv))
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr()
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        [
            (self.a11 - o.a11).norm(),
            (self.a12 - o.a12).norm(),
            (self.a21 - o.a21).norm(),
            (self.a22 - o.a22).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(r(0.5))
    }

    pub fn is_finite(&self) -> bool {
        [self.a11, self.a12, self.a21, self.a22].iter().all(|z| z.is_finite())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(r(-1.0))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

/// Largest singular value.
pub fn op_norm(m: &Mat2) -> f64 {
    let f = m.frobenius_sqr();
    let d = det2(m).norm();
    let disc = (f * f - 4.0 * d * d).max(0.0);
    ((f + disc.sqrt()) / 2.0).sqrt()
}

/// Smallest singular value.
pub fn min_singular(m: &Mat2) -> f64 {
    let s = op_norm(m);
    if s == 0.0 {
        0.0
    } else {
        det2(m).norm() / s
    }
}

pub fn det2(m: &Mat2) -> CNum {
    m.a11 * m.a22 - m.a12 * m.a21
}

/// Roots of the characteristic polynomial, ordered by descending modulus and
/// then ascending principal argument.
pub fn eigen2(m: &Mat2) -> (CNum, CNum) {
    let t = m.trace();
    let d = det2(m);
    let s = (t * t - 4.0 * d).sqrt();
    // pick the sign that avoids cancellation, then use the product of roots
    let big = if (t + s).norm() >= (t - s).norm() { (t + s) / 2.0 } else { (t - s) / 2.0 };
    let small = if big.norm() > 0.0 { d / big } else { r(0.0) };
    let (e1, e2) = (big, small);
    let key = |z: CNum| (z.norm(), z.arg());
    let (k1, k2) = (key(e1), key(e2));
    let tie = (k1.0 - k2.0).abs() <= 1e-12 * k1.0.max(1.0);
    if (tie && k1.1 > k2.1) || (!tie && k1.0 < k2.0) {
        (e2, e1)
    } else {
        (e1, e2)
    }
}

/// Unit eigenvector of a Hermitian matrix for eigenvalue `lambda`.
pub fn herm_eigvec(m: &Mat2, lambda: f64) -> Vec2 {
    let a = m.a11 - lambda;
    let d = m.a22 - lambda;
    // rows of (m - lambda) are (a, b) and (c, d); a null vector is (-b, a) or (-d, c)
    let v1 = Vec2::new(-m.a12, a);
    let v2 = Vec2::new(d, -m.a21);
    let v = if v1.norm() >= v2.norm() { v1 } else { v2 };
    let n = v.norm();
    if n <= 1e-300 {
        Vec2::new(r(1.0), r(0.0))
    } else {
        v.scale(r(1.0 / n))
    }
}

/// Real eigenvalues (descending) of the Hermitian part of `m`.
pub fn herm_eigenvalues(m: &Mat2) -> (f64, f64) {
    let h = m.hermitian_part();
    let a = h.a11.re;
    let d = h.a22.re;
    let b = h.a12.norm();
    let mid = (a + d) / 2.0;
    let rad = (((a - d) / 2.0).powi(2) + b * b).sqrt();
    (mid + rad, mid - rad)
}

/// Positive semidefinite square root of a Hermitian PSD matrix.
pub fn herm_sqrt(m: &Mat2) -> Result<Mat2> {
    let scale = m.frobenius_sqr().sqrt().max(1.0);
    let asym = m.max_abs_diff(&m.adjoint());
    if asym > 1e-9 * scale {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let h = m.hermitian_part();
    let (_, lmin) = herm_eigenvalues(&h);
    if lmin < -1e-12 {
        return Err(Error::NotPsd { min_eigenvalue: lmin });
    }
    let det = det2(&h).re.max(0.0);
    let sd = det.sqrt();
    let t = h.trace().re + 2.0 * sd;
    if t <= 0.0 {
        return Ok(Mat2::zero());
    }
    Ok((h + Mat2::identity().scale(r(sd))).scale(r(1.0 / t.sqrt())))
}

/// Matricial Mobius map M_Z(X) = (1-ZZ*)^{-1/2} (X-Z)(1-Z*X)^{-1} (1-Z*Z)^{1/2}.
pub fn mobius_matrix(z: &Mat2, x: &Mat2) -> Result<Mat2> {
    let nz = op_norm(z);
    if nz >= 1.0 - 1e-12 {
        return Err(Error::ContractionViolation { norm: nz });
    }
    let nx = op_norm(x);
    if nx > 1.0 + TOL {
        return Err(Error::ContractionViolation { norm: nx });
    }
    let id = Mat2::identity();
    let left = herm_sqrt(&(id - *z * z.adjoint()))?
        .inverse()
        .ok_or(Error::ContractionViolation { norm: nz })?;
    let right = herm_sqrt(&(id - z.adjoint() * *z))?;
    let mid = (id - z.adjoint() * *x)
        .inverse()
        .ok_or(Error::ContractionViolation { norm: nx })?;
    Ok(left * (*x - *z) * mid * right)
}

/// Exact binomial coefficient for n <= 62.
pub fn binom(n: usize, j: usize) -> Result<u64> {
    if n > 62 || j > n {
        return Err(Error::OutOfRange { n, j });
    }
    let k = j.min(n - j) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    Ok(acc as u64)
}

/// Binomial coefficient as f64; callers guarantee the range.
pub(crate) fn binom_f(n: usize, j: usize) -> f64 {
    binom(n, j).expect("binomial index in range") as f64
}

/// Scalar disc automorphism m_a(w) = (a + w)/(1 + conj(a) w).
pub fn mobius_scalar(a: CNum, w: CNum) -> CNum {
    (a + w) / (r(1.0) + a.conj() * w)
}

/// Pseudo-hyperbolic distance |a - b| / |1 - conj(a) b|.
pub fn pseudo_hyperbolic(a: CNum, b: CNum) -> f64 {
    (a - b).norm() / (r(1.0) - a.conj() * b).norm()
}

/// Blaschke factor B(l) = (l0 - l)/(1 - conj(l0) l), swapping 0 and l0.
pub fn blaschke(lambda0: CNum, lambda: CNum) -> CNum {
    (lambda0 - lambda) / (r(1.0) - lambda0.conj() * lambda)
}
