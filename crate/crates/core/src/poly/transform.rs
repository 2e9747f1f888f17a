//! Spherical Blaschke factors and quaternionic linear fractional maps.

use serde::{Deserialize, Serialize};

use super::{LeftPoly, Rational, RealPoly};
use crate::error::{Error, Result};
use crate::quat::{Quaternion, SliceComplex};

/// `B(x) = (rho^2 (x - zeta)^s)^{-1} (x - rho^2 zeta^{-1})^s |zeta|^2`.
///
/// Both symmetrized factors are real polynomials, so their values at `x`
/// commute; `|B| = 1` on `dB_rho`.
pub fn blaschke(zeta: SliceComplex, rho: f64, q: Quaternion) -> Result<Quaternion> {
    let m2 = zeta.re * zeta.re + zeta.im * zeta.im;
    if m2 == 0.0 {
        return Err(Error::ZeroCenter);
    }
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
    }
    let near = RealPoly::new(vec![m2, -2.0 * zeta.re, 1.0]);
    // rho^2 zeta^{-1} has real part rho^2 re / |zeta|^2 and modulus rho^2 / |zeta|.
    let far = RealPoly::new(vec![
        rho.powi(4) / m2,
        -2.0 * rho * rho * zeta.re / m2,
        1.0,
    ]);
    let den = near.eval_quat(q) * (rho * rho);
    let tol = 1e-14 * (1.0 + q.norm_sqr()) * rho * rho;
    if den.norm() <= tol {
        return Err(Error::EvalAtPole {
            modulus: den.norm(),
        });
    }
    Ok(den.inverse()? * far.eval_quat(q) * m2)
}

/// The matrix `[[A, B], [C, D]]` acting by `f -> (A f + B) * (C f + D)^{-*}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gl2H {
    pub a: Quaternion,
    pub b: Quaternion,
    pub c: Quaternion,
    pub d: Quaternion,
}

impl Gl2H {
    pub fn new(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Self {
        Gl2H { a, b, c, d }
    }

    pub fn identity() -> Self {
        Gl2H::new(Quaternion::ONE, Quaternion::ZERO, Quaternion::ZERO, Quaternion::ONE)
    }

    /// Modulus of the Dieudonne determinant.
    pub fn dieudonne(&self) -> f64 {
        match self.a.inverse() {
            Ok(ainv) => self.a.norm() * (self.d - self.c * ainv * self.b).norm(),
            Err(_) => self.b.norm() * self.c.norm(),
        }
    }

    pub fn scale(&self) -> f64 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|q| q.norm())
            .fold(0.0, f64::max)
    }

    /// Matrix product `self * other`; the map of the product is the
    /// composition `self o other`.
    pub fn compose(&self, o: &Gl2H) -> Gl2H {
        Gl2H::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// `Phi(f)`. With `f = P * S^{-*}`, `Phi(f) = U * V^{-*}` where
    /// `U = A P + B S` and `V = C P + D S`. Common factors are not cancelled.
    pub fn apply(&self, f: &Rational) -> Result<Rational> {
        let det = self.dieudonne();
        let sc = self.scale();
        if det <= 1e-12 * sc * sc {
            return Err(Error::DegenerateTransform(det));
        }
        let p = f.reduced_num();
        let s: LeftPoly = f.reduced_den().to_left();
        let u = &p.scale_left(self.a) + &s.scale_left(self.b);
        let v = &p.scale_left(self.c) + &s.scale_left(self.d);
        Rational::new(u, v)
    }
}

/// `Phi(f) = (A f + B) * (C f + D)^{-*}`.
pub fn linear_fractional(t: &Gl2H, f: &Rational) -> Result<Rational> {
    t.apply(f)
}
