//! Quaternion values, sphere coordinates and uniform sampling on 3-spheres.
//!
//! A quaternion `q = w + xi + yj + zk` is stored by its four real
//! coordinates. Every nonreal `q` lies in exactly one 2-sphere
//! `S_q = Re(q) + |Im(q)| S`, where `S` is the sphere of unit imaginary
//! quaternions; [`SliceComplex`] is the canonical key of that sphere.

mod sampler;

pub use sampler::{SphereSampler, CHUNK_SAMPLES};

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real quaternion `w + xi + yj + zk`.
///
/// Serializes as the array `[w, x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Quaternion::real(r)
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// Real part `Re q`.
    #[inline]
    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part `Im q` as a purely imaginary quaternion.
    #[inline]
    pub fn im(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn im_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    #[inline]
    pub fn conj(self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `conj(q) / |q|^2`.
    pub fn inverse(self) -> Result<Quaternion> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj() / n2)
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn is_real(self) -> bool {
        self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }

    /// `Im q / |Im q|`, or `None` on the real axis.
    pub fn imaginary_unit(self) -> Option<Quaternion> {
        let n = self.im_norm();
        if n == 0.0 {
            None
        } else {
            Some(self.im() / n)
        }
    }

    /// Checks `Re I = 0` and `|I| = 1` to within `1e-12`.
    pub fn is_unit_imaginary(self) -> bool {
        self.w.abs() <= 1e-12 && (self.norm() - 1.0).abs() <= 1e-12
    }

    pub fn dot(self, other: Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Canonical sphere `S_q` containing this point.
    pub fn sphere(self) -> SliceComplex {
        SliceComplex {
            re: self.w,
            im: self.im_norm(),
        }
    }

    pub fn max_abs_component(self) -> f64 {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

/// The 2-sphere `S_{re + im I} = re + im S`, keyed by `im >= 0`.
///
/// When `im == 0` the sphere degenerates to the real point `re`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceComplex {
    pub re: f64,
    pub im: f64,
}

impl SliceComplex {
    /// Builds the canonical key; the sign of `im` is dropped since
    /// `S_z` and `S_{conj z}` coincide.
    pub fn new(re: f64, im: f64) -> Self {
        SliceComplex { re, im: im.abs() }
    }

    pub fn from_complex(z: Complex64) -> Self {
        SliceComplex::new(z.re, z.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_real(self) -> bool {
        self.im == 0.0
    }

    /// The point `re + im I` of this sphere on the slice of `I`.
    pub fn embed(self, unit: Quaternion) -> Result<Quaternion> {
        if !unit.is_unit_imaginary() {
            return Err(Error::NotUnitImaginary(unit.to_string()));
        }
        Ok(Quaternion::real(self.re) + unit * self.im)
    }
}

/// Canonical sphere of `q`.
pub fn sphere_of(q: Quaternion) -> SliceComplex {
    q.sphere()
}

/// `Phi_I(re + i im) = re + I im`.
pub fn embed(s: SliceComplex, unit: Quaternion) -> Result<Quaternion> {
    s.embed(unit)
}
