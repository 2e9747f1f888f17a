//! The harmonic remainder `H(f, a, r)`.
//!
//! `H(f, a, r)` is the Jensen Laplacian term of `h = f - a` at the origin,
//! `-(r^2/16) Lap4 log|h^s|` at 0. With `h(q) = c0 + q c1 + q^2 c2 + ...`
//! the coefficients of `h^s` are `|c0|^2`, `2 Re(c0 conj c1)` and
//! `2 Re(c0 conj c2) + |c1|^2`, which gives
//! `-(r^2/4) Re((c0^{-1} c1)^2) + (r^2/4) Re(c0^{-1} h''(0))`.
//! Conjugating `c1` inside the square changes the value unless `c0` and
//! `c1` commute. [`laplacian_from_roots`] evaluates the same quantity
//! independently from the roots of `h^s`.

use super::Target;
use crate::divisor::complex_roots;
use crate::error::{Error, Result};
use crate::poly::{Rational, RealPoly};
use crate::quat::Quaternion;

/// Jensen Laplacian term of `h` at 0 for radius `r`.
pub fn jensen_harmonic_terms(h: &Rational, r: f64) -> Result<f64> {
    let (m, _) = h.deflate_origin();
    if m != 0 {
        return Err(Error::CenterIsZeroOrPole { order: m });
    }
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let c = h.taylor(3)?;
    let inv = c[0].inverse()?;
    let t = inv * c[1];
    let r2 = r * r;
    Ok(-r2 / 4.0 * (t * t).w + r2 / 4.0 * (inv * (c[2] * 2.0)).w)
}

/// `H(f, a, r)`; identically 0 for `a = inf`. Fails with
/// [`Error::CenterIsZeroOrPole`] if `f(0) = a` or `f` has a pole at 0.
pub fn harmonic_remainder(f: &Rational, a: Target, r: f64) -> Result<f64> {
    match a {
        Target::Infinity => Ok(0.0),
        Target::Finite(a) => jensen_harmonic_terms(&f.sub_const(a), r),
    }
}

/// As [`harmonic_remainder`], but writes `f - a = q^m g` and uses `g`.
pub fn harmonic_remainder_deflated(f: &Rational, a: Target, r: f64) -> Result<f64> {
    match a {
        Target::Infinity => Ok(0.0),
        Target::Finite(a) => {
            let (_, g) = f.sub_const(a).deflate_origin();
            jensen_harmonic_terms(&g, r)
        }
    }
}

/// `Lap4 log|num/den|` at 0 for real polynomials, as
/// `2 sum Re(1/z^2)` over the roots of `num` minus those of `den`.
pub fn laplacian_from_roots(num: &RealPoly, den: &RealPoly) -> Result<f64> {
    let side = |p: &RealPoly| -> Result<f64> {
        if p.coeffs().first().copied().unwrap_or(0.0) == 0.0 {
            return Err(Error::CenterIsZeroOrPole {
                order: p.low_order() as i32,
            });
        }
        Ok(complex_roots(p)?
            .iter()
            .map(|(z, m)| *m as f64 * 2.0 * (z * z).inv().re)
            .sum())
    };
    Ok(side(num)? - side(den)?)
}

/// `-(r^2/16) Lap4 log|(f - a)^s|` at 0 from the roots of the symmetrized
/// numerator and denominator.
pub fn harmonic_from_roots(f: &Rational, a: Quaternion, r: f64) -> Result<f64> {
    let (ps, s2) = f.sub_const(a).symmetrized_parts()?;
    Ok(-r * r / 16.0 * laplacian_from_roots(&ps, &s2)?)
}
