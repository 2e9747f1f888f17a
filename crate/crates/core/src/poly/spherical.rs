//! Spherical value, spherical derivative and the spherical conjugate `S_f`.

use super::{LeftPoly, SliceFunction};
use crate::error::{Error, Result};
use crate::quat::{Quaternion, SliceComplex};

/// Relative band for the degenerate branch `f'_s(q) = 0` of `S_f`.
pub const DEG_TOL: f64 = 1e-10;

/// `f°_s(q) = (f(q) + f(conj q)) / 2`.
pub fn spherical_value<F: SliceFunction + ?Sized>(f: &F, q: Quaternion) -> Result<Quaternion> {
    Ok(f.stem_parts(q.w, q.im_norm())?.0)
}

/// `f'_s(q) = Im(q)^{-1} (f(q) - f(conj q)) / 2`; undefined on the real axis.
pub fn spherical_derivative<F: SliceFunction + ?Sized>(
    f: &F,
    q: Quaternion,
) -> Result<Quaternion> {
    let y = q.im_norm();
    if y == 0.0 {
        return Err(Error::RealPointDegenerate);
    }
    Ok(f.stem_parts(q.w, y)?.1)
}

/// `|f|` on the sphere `s`, valid for slice-preserving `f` (where it does
/// not depend on the imaginary unit).
pub fn abs_on_sphere<F: SliceFunction + ?Sized>(f: &F, s: SliceComplex) -> Result<f64> {
    let (a, d) = f.stem_parts(s.re, s.im)?;
    Ok((a.norm_sqr() + s.im * s.im * d.norm_sqr()).sqrt())
}

/// `S_f(q) = c conj(q) c^{-1}` with `c = f'_s(q) f(q)^{-1}`, or `conj(q)` when
/// `f'_s(q)` vanishes.
///
/// The rotated point is snapped back onto `S_q` (same real part and same
/// `|Im|`), which it lies on in exact arithmetic.
pub fn spherical_conjugate<F: SliceFunction + ?Sized>(f: &F, q: Quaternion) -> Result<Quaternion> {
    let y = q.im_norm();
    if y == 0.0 {
        return Ok(q);
    }
    let (a, d) = f.stem_parts(q.w, y).map_err(|e| match e {
        Error::EvalAtPole { .. } => Error::UndefinedAtZeroPole,
        other => other,
    })?;
    let fq = a + q.im() * d;
    let deg = f.growth_degree().max(1) as i32;
    if d.norm() < DEG_TOL * (1.0 + q.norm()).powi(deg - 1) {
        return Ok(q.conj());
    }
    if fq.norm_sqr() == 0.0 || !fq.is_finite() {
        return Err(Error::UndefinedAtZeroPole);
    }
    let c = d * fq.inverse()?;
    let r = c * q.conj() * c.inverse()?;
    match r.imaginary_unit() {
        Some(u) => Ok(Quaternion::real(q.w) + u * y),
        None => Err(Error::UndefinedAtZeroPole),
    }
}

/// `| log|f^s(q)| - log|f(q)| - log|f(S_f(q))| |`.
pub fn corollary_decomposition_check(f: &super::Rational, q: Quaternion) -> Result<f64> {
    let (ps, s2) = f.symmetrized_parts()?;
    let fs = ps.eval_quat(q).norm() / s2.eval_quat(q).norm();
    let fq = f.eval(q)?.norm();
    let fsq = f.eval(spherical_conjugate(f, q)?)?.norm();
    Ok((fs.ln() - fq.ln() - fsq.ln()).abs())
}

/// `|(f*g)(q) - f(q) g(f(q)^{-1} q f(q))|`, or `|(f*g)(q)|` where `f(q) = 0`.
pub fn star_eval_identity_check(f: &LeftPoly, g: &LeftPoly, q: Quaternion) -> f64 {
    let fg = f.star_mul(g).eval(q);
    let fq = f.eval(q);
    match fq.inverse() {
        Err(_) => fg.norm(),
        Ok(inv) => (fg - fq * g.eval(inv * q * fq)).norm(),
    }
}
