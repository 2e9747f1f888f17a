//! Left polynomials `f(q) = sum q^k a_k` and their real-coefficient subclass.
//!
//! Evaluation goes through the stem representation: for `q = x + I y`,
//! `f(q) = F1(x, y) + I y D(x, y)` where `F1` is the spherical value and `D`
//! the spherical derivative. Both are computed by one Horner pass over
//! `H (x) C` that never divides by `y`, so the spherical derivative stays
//! accurate next to the real axis and `|f(q)|` only depends on `S_q` for
//! real coefficients.

mod rational;
mod spherical;
mod transform;

pub use rational::Rational;
pub use spherical::{
    abs_on_sphere, corollary_decomposition_check, spherical_conjugate, spherical_derivative,
    spherical_value, star_eval_identity_check, DEG_TOL,
};
pub use transform::{blaschke, linear_fractional, Gl2H};

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Common interface of the function model used by the integrator and the
/// Nevanlinna layer.
pub trait SliceFunction: Sync {
    /// `(f°_s, f'_s)` on the sphere `x + y S`; `y >= 0`.
    fn stem_parts(&self, x: f64, y: f64) -> Result<(Quaternion, Quaternion)>;

    /// True when all coefficients are real (the function maps slices into
    /// themselves).
    fn is_slice_preserving(&self) -> bool;

    /// Degree used by the scale-aware tolerances: numerator minus
    /// denominator degree, clamped at 0.
    fn growth_degree(&self) -> usize;

    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        let (a, d) = self.stem_parts(q.w, q.im_norm())?;
        Ok(a + q.im() * d)
    }

    /// `|f(q)|`. For slice-preserving functions this is evaluated from the
    /// sphere coordinates alone, so every point of `S_q` gets the same bits.
    fn abs_at(&self, q: Quaternion) -> Result<f64> {
        if self.is_slice_preserving() {
            abs_on_sphere(self, q.sphere())
        } else {
            Ok(self.eval(q)?.norm())
        }
    }
}

/// `f(q) = sum_k q^k a_k` with trailing zeros trimmed.
///
/// The zero polynomial has no coefficients and `degree() == None`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Quaternion>", into = "Vec<Quaternion>")]
pub struct LeftPoly {
    coeffs: Vec<Quaternion>,
}

impl From<Vec<Quaternion>> for LeftPoly {
    fn from(c: Vec<Quaternion>) -> Self {
        LeftPoly::new(c)
    }
}

impl From<LeftPoly> for Vec<Quaternion> {
    fn from(p: LeftPoly) -> Self {
        p.coeffs
    }
}

impl LeftPoly {
    pub fn new(mut coeffs: Vec<Quaternion>) -> Self {
        while coeffs.last() == Some(&Quaternion::ZERO) {
            coeffs.pop();
        }
        LeftPoly { coeffs }
    }

    pub fn zero() -> Self {
        LeftPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Quaternion) -> Self {
        LeftPoly::new(vec![c])
    }

    /// `q`.
    pub fn identity() -> Self {
        LeftPoly::new(vec![Quaternion::ZERO, Quaternion::ONE])
    }

    /// `q - a`.
    pub fn linear(a: Quaternion) -> Self {
        LeftPoly::new(vec![-a, Quaternion::ONE])
    }

    /// `q^n c`.
    pub fn monomial(n: usize, c: Quaternion) -> Self {
        let mut v = vec![Quaternion::ZERO; n + 1];
        v[n] = c;
        LeftPoly::new(v)
    }

    pub fn from_real(c: &[f64]) -> Self {
        LeftPoly::new(c.iter().map(|&r| Quaternion::real(r)).collect())
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Quaternion {
        self.coeffs.get(k).copied().unwrap_or(Quaternion::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    /// The same polynomial as a [`RealPoly`] if every coefficient is real.
    pub fn to_real(&self) -> Option<RealPoly> {
        if self.is_real() {
            Some(RealPoly::new(self.coeffs.iter().map(|c| c.w).collect()))
        } else {
            None
        }
    }

    /// Plain left Horner `acc <- q acc + a_k`. Used as an independent check
    /// of the stem route.
    pub fn horner(&self, q: Quaternion) -> Quaternion {
        let mut acc = Quaternion::ZERO;
        for &a in self.coeffs.iter().rev() {
            acc = q * acc + a;
        }
        acc
    }

    /// Stem Horner pass: returns `(f°_s, f'_s)` at `x + y S`.
    pub fn stem(&self, x: f64, y: f64) -> (Quaternion, Quaternion) {
        let y2 = y * y;
        let mut a = Quaternion::ZERO;
        let mut d = Quaternion::ZERO;
        for &c in self.coeffs.iter().rev() {
            let na = a * x - d * y2 + c;
            d = a + d * x;
            a = na;
        }
        (a, d)
    }

    pub fn eval(&self, q: Quaternion) -> Quaternion {
        let (a, d) = self.stem(q.w, q.im_norm());
        a + q.im() * d
    }

    /// `c * f`, i.e. coefficients `c a_k`.
    pub fn scale_left(&self, c: Quaternion) -> LeftPoly {
        LeftPoly::new(self.coeffs.iter().map(|&a| c * a).collect())
    }

    /// `f * c`, i.e. coefficients `a_k c`.
    pub fn scale_right(&self, c: Quaternion) -> LeftPoly {
        LeftPoly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Regular product: `c_n = sum_{i+j=n} a_i b_j`.
    pub fn star_mul(&self, other: &LeftPoly) -> LeftPoly {
        if self.is_zero() || other.is_zero() {
            return LeftPoly::zero();
        }
        let mut c = vec![Quaternion::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        LeftPoly::new(c)
    }

    pub fn star_pow(&self, n: u32) -> LeftPoly {
        let mut out = LeftPoly::constant(Quaternion::ONE);
        for _ in 0..n {
            out = out.star_mul(self);
        }
        out
    }

    /// `f^c`: coefficientwise conjugation.
    pub fn conjugate(&self) -> LeftPoly {
        LeftPoly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// `f^s = f * f^c`, projected to real coefficients.
    ///
    /// The imaginary parts vanish in exact arithmetic; a residue above
    /// `1e-9` relative to the coefficient scale is reported as an error.
    pub fn symmetrize(&self) -> Result<RealPoly> {
        let full = self.star_mul(&self.conjugate());
        let scale = full.scale().max(f64::MIN_POSITIVE);
        let residue = full.coeffs.iter().map(|c| c.im_norm()).fold(0.0, f64::max);
        if residue > 1e-9 * scale {
            return Err(Error::SymmetrizationNotReal { residue });
        }
        Ok(RealPoly::new(full.coeffs.iter().map(|c| c.w).collect()))
    }

    /// Formal slice derivative of the given order.
    pub fn slice_derivative(&self, order: u32) -> LeftPoly {
        let mut p = self.clone();
        for _ in 0..order {
            if p.coeffs.len() <= 1 {
                return LeftPoly::zero();
            }
            p = LeftPoly::new(
                p.coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, &a)| a * k as f64)
                    .collect(),
            );
        }
        p
    }

    /// Division by a real polynomial, `self = quot * d + rem` with
    /// `deg rem < deg d`.
    pub fn div_rem_real(&self, d: &RealPoly) -> Result<(LeftPoly, LeftPoly)> {
        let dd = d.degree().ok_or(Error::ZeroDenominator)?;
        let lead = d.coeffs()[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((LeftPoly::zero(), self.clone()));
        }
        let mut quot = vec![Quaternion::ZERO; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (j, &dj) in d.coeffs().iter().enumerate() {
                rem[k + j] -= c * dj;
            }
            rem[k + dd] = Quaternion::ZERO;
        }
        rem.truncate(dd);
        Ok((LeftPoly::new(quot), LeftPoly::new(rem)))
    }

    /// Splits coefficients as `a_k = alpha_k + beta_k j` with
    /// `alpha_k, beta_k` in `R + R i`, so that on the slice of `i`
    /// `f(z) = A(z) + B(z) j`.
    pub fn complex_split(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        self.coeffs
            .iter()
            .map(|c| (Complex64::new(c.w, c.x), Complex64::new(c.y, c.z)))
            .unzip()
    }

    /// Number of exactly vanishing low-order coefficients.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == Quaternion::ZERO).count()
    }

    /// Drops `k` low-order coefficients (division by `q^k`).
    pub fn shift_down(&self, k: usize) -> LeftPoly {
        LeftPoly::new(self.coeffs.iter().skip(k).copied().collect())
    }
}

impl Add for &LeftPoly {
    type Output = LeftPoly;
    fn add(self, o: &LeftPoly) -> LeftPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        LeftPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &LeftPoly {
    type Output = LeftPoly;
    fn sub(self, o: &LeftPoly) -> LeftPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        LeftPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Neg for &LeftPoly {
    type Output = LeftPoly;
    fn neg(self) -> LeftPoly {
        LeftPoly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &LeftPoly {
    type Output = LeftPoly;
    fn mul(self, o: &LeftPoly) -> LeftPoly {
        self.star_mul(o)
    }
}

impl SliceFunction for LeftPoly {
    fn stem_parts(&self, x: f64, y: f64) -> Result<(Quaternion, Quaternion)> {
        Ok(self.stem(x, y))
    }

    fn is_slice_preserving(&self) -> bool {
        self.is_real()
    }

    fn growth_degree(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(LeftPoly::eval(self, q))
    }
}

/// A polynomial with real coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl From<Vec<f64>> for RealPoly {
    fn from(c: Vec<f64>) -> Self {
        RealPoly::new(c)
    }
}

impl From<RealPoly> for Vec<f64> {
    fn from(p: RealPoly) -> Self {
        p.coeffs
    }
}

impl RealPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        RealPoly { coeffs }
    }

    pub fn one() -> Self {
        RealPoly::new(vec![1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn to_left(&self) -> LeftPoly {
        LeftPoly::from_real(&self.coeffs)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Real stem pass; see [`LeftPoly::stem`].
    pub fn stem(&self, x: f64, y: f64) -> (f64, f64) {
        let y2 = y * y;
        let mut a = 0.0;
        let mut d = 0.0;
        for &c in self.coeffs.iter().rev() {
            let na = a * x - d * y2 + c;
            d = a + d * x;
            a = na;
        }
        (a, d)
    }

    pub fn eval_quat(&self, q: Quaternion) -> Quaternion {
        let (a, d) = self.stem(q.w, q.im_norm());
        Quaternion::real(a) + q.im() * d
    }

    /// `|p(q)|` from the sphere coordinates of `q`.
    pub fn abs_on_sphere(&self, x: f64, y: f64) -> f64 {
        let (a, d) = self.stem(x, y);
        a.hypot(y * d)
    }

    pub fn mul(&self, o: &RealPoly) -> RealPoly {
        if self.is_zero() || o.is_zero() {
            return RealPoly::new(Vec::new());
        }
        let mut c = vec![0.0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RealPoly::new(c)
    }

    pub fn add(&self, o: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |p: &RealPoly, k: usize| p.coeffs.get(k).copied().unwrap_or(0.0);
        RealPoly::new((0..n).map(|k| get(self, k) + get(o, k)).collect())
    }

    pub fn pow(&self, n: u32) -> RealPoly {
        let mut out = RealPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self) -> RealPoly {
        RealPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &a)| a * k as f64)
                .collect(),
        )
    }

    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == 0.0).count()
    }

    pub fn shift_down(&self, k: usize) -> RealPoly {
        RealPoly::new(self.coeffs.iter().skip(k).copied().collect())
    }
}

impl SliceFunction for RealPoly {
    fn stem_parts(&self, x: f64, y: f64) -> Result<(Quaternion, Quaternion)> {
        let (a, d) = self.stem(x, y);
        Ok((Quaternion::real(a), Quaternion::real(d)))
    }

    fn is_slice_preserving(&self) -> bool {
        true
    }

    fn growth_degree(&self) -> usize {
        self.degree().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    fn a() -> Quaternion {
        Quaternion::new(0.5, 0.7, 0.0, 0.0)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(LeftPoly::linear(a()).eval(Quaternion::ZERO), -a());
        let p = LeftPoly::from_real(&[1.0, 0.0, 1.0]);
        assert!(p.eval(J).norm() < 1e-15);
        // (q - i)*(q - j) = q^2 - q(i + j) + k vanishes at i.
        let f = LeftPoly::new(vec![K, -(I + J), Quaternion::ONE]);
        assert!(f.eval(I).norm() < 1e-15);
        assert!(f.horner(I).norm() < 1e-15);
    }

    #[test]
    fn stem_matches_horner() {
        let f = LeftPoly::new(vec![
            Quaternion::new(0.3, -1.0, 0.2, 0.1),
            Quaternion::new(-0.4, 0.5, 0.9, -0.3),
            Quaternion::new(1.1, 0.0, -0.6, 0.7),
            Quaternion::new(0.2, 0.3, 0.4, 0.5),
        ]);
        for q in [
            Quaternion::new(0.7, -0.2, 1.3, 0.4),
            Quaternion::new(-2.0, 0.1, 0.0, 0.0),
            Quaternion::real(1.5),
        ] {
            assert!((f.eval(q) - f.horner(q)).norm() < 1e-13);
        }
    }

    #[test]
    fn star_products() {
        let qmi = LeftPoly::linear(I);
        let qpi = LeftPoly::linear(-I);
        assert_eq!(qmi.star_mul(&qpi), LeftPoly::from_real(&[1.0, 0.0, 1.0]));
        let qmj = LeftPoly::linear(J);
        assert_eq!(
            qmi.star_mul(&qmj),
            LeftPoly::new(vec![K, -(I + J), Quaternion::ONE])
        );
        let one = LeftPoly::constant(Quaternion::ONE);
        assert_eq!(qmi.star_mul(&one), qmi);
    }

    #[test]
    fn symmetrization_examples() {
        let s = LeftPoly::linear(a()).symmetrize().unwrap();
        let want = [0.74, -1.0, 1.0];
        for (c, w) in s.coeffs().iter().zip(want) {
            assert!((c - w).abs() < 1e-15);
        }
        let r = LeftPoly::linear(Quaternion::real(0.3)).symmetrize().unwrap();
        assert_eq!(r, RealPoly::new(vec![0.09, -0.6, 1.0]));
        let f = LeftPoly::linear(I).star_mul(&LeftPoly::linear(J));
        let fs = f.symmetrize().unwrap();
        assert_eq!(fs, RealPoly::new(vec![1.0, 0.0, 1.0]).pow(2));
    }

    #[test]
    fn derivatives() {
        let f = LeftPoly::linear(a());
        assert_eq!(f.slice_derivative(1), LeftPoly::constant(Quaternion::ONE));
        assert!(f.slice_derivative(2).is_zero());
        let g = LeftPoly::from_real(&[1.0, 0.0, 1.0]);
        assert_eq!(g.slice_derivative(1), LeftPoly::from_real(&[0.0, 2.0]));
    }

    #[test]
    fn real_division() {
        let t = RealPoly::new(vec![1.0, 0.0, 1.0]);
        let f = LeftPoly::linear(I).star_mul(&LeftPoly::linear(J));
        let g = f.star_mul(&t.to_left());
        let (quot, rem) = g.div_rem_real(&t).unwrap();
        assert!(rem.scale() < 1e-15);
        assert_eq!(quot, f);
    }

    #[test]
    fn serde_roundtrip() {
        let f = LeftPoly::linear(a());
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[[-0.5,-0.7,-0.0,-0.0],[1.0,0.0,0.0,0.0]]");
        let back: LeftPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
