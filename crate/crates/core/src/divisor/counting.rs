//! Jensen kernel, counting functions and their integral representations.
//!
//! Every integral over a counting function is evaluated exactly: the
//! divisor moduli cut `(0, r]` into intervals on which `n(t)` is constant,
//! so each piece has an elementary antiderivative.

use serde::{Deserialize, Serialize};

use super::{Side, SphereDivisor};
use crate::error::{Error, Result};
use crate::quat::SliceComplex;

/// `J(z, R) = log(R/|z|) + (|z|^4 - R^4) / (4 R^2 |z|^4) (2 Re(z)^2 - |z|^2)`.
pub fn jensen_kernel(z: SliceComplex, r: f64) -> Result<f64> {
    let m2 = z.re * z.re + z.im * z.im;
    if m2 == 0.0 {
        return Err(Error::ZeroCenter);
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let m4 = m2 * m2;
    let r2 = r * r;
    Ok((r / m2.sqrt()).ln() + (m4 - r2 * r2) / (4.0 * r2 * m4) * (2.0 * z.re * z.re - m2))
}

/// Kernel specialised to a real point `x != 0`:
/// `log(R/|x|) + (x^4 - R^4) / (4 R^2 x^2)`.
pub fn real_kernel(x: f64, r: f64) -> f64 {
    let x2 = x * x;
    (r / x.abs()).ln() + (x2 * x2 - r.powi(4)) / (4.0 * r * r * x2)
}

/// Fails if a divisor sphere lies on `dB_r` within `1e-12 r`.
pub fn check_boundary(d: &SphereDivisor, r: f64) -> Result<()> {
    for e in &d.entries {
        if (e.modulus() - r).abs() <= 1e-12 * r {
            return Err(Error::BoundaryDivisor {
                modulus: e.modulus(),
                radius: r,
            });
        }
    }
    Ok(())
}

/// Counted spheres `(|z|, count, Re z)` with `0 < |z| <= r`, by modulus.
fn counted(d: &SphereDivisor, side: Side, r: f64) -> Vec<(f64, f64, f64)> {
    let mut v: Vec<(f64, f64, f64)> = d
        .entries
        .iter()
        .filter(|e| e.modulus() <= r)
        .filter_map(|e| {
            let c = side.count(e.order);
            (c > 0).then(|| (e.modulus(), c as f64, e.re))
        })
        .collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

/// Step structure of `n(t) - n(0)` on `(0, r]`: `(t_i, t_{i+1}, level)`.
fn steps(d: &SphereDivisor, side: Side, r: f64) -> Vec<(f64, f64, f64)> {
    let pts = counted(d, side, r);
    let mut out = Vec::with_capacity(pts.len());
    let mut level = 0.0;
    for (i, &(s, c, _)) in pts.iter().enumerate() {
        level += c;
        let next = pts.get(i + 1).map_or(r, |p| p.0);
        if next > s {
            out.push((s, next, level));
        }
    }
    out
}

/// `n(r)`: counted order in the closed ball, origin included.
pub fn n_count(d: &SphereDivisor, side: Side, r: f64) -> i64 {
    let spheres: i64 = d
        .entries
        .iter()
        .filter(|e| e.modulus() <= r)
        .map(|e| side.count(e.order))
        .sum();
    spheres + side.count(d.origin_order)
}

/// `N(r) = n(0) log r + sum_{0 < |z| < r} count * J(z, r)`.
pub fn n_integrated(d: &SphereDivisor, side: Side, r: f64) -> Result<f64> {
    check_boundary(d, r)?;
    let mut acc = side.count(d.origin_order) as f64 * r.ln();
    for e in d.entries.iter().filter(|e| e.modulus() < r) {
        let c = side.count(e.order);
        if c > 0 {
            acc += c as f64 * jensen_kernel(e.sphere(), r)?;
        }
    }
    Ok(acc)
}

/// `N` as `n(0) log r + int_0^r (n(t) - n(0)) dt/t` plus the nonradial
/// remainder `sum count (|z|^4 - r^4)/(4 r^2 |z|^4) (2 Re z^2 - |z|^2)`.
pub fn n_via_unintegrated(d: &SphereDivisor, side: Side, r: f64) -> Result<f64> {
    check_boundary(d, r)?;
    let base = radial_base(d, side, r);
    let r2 = r * r;
    let rem: f64 = counted(d, side, r)
        .iter()
        .map(|&(s, c, re)| {
            let s2 = s * s;
            c * (s2 * s2 - r2 * r2) / (4.0 * r2 * s2 * s2) * (2.0 * re * re - s2)
        })
        .sum();
    Ok(base + rem)
}

/// `n(0) log r + int_0^r (n(t) - n(0)) dt / t`.
fn radial_base(d: &SphereDivisor, side: Side, r: f64) -> f64 {
    let log_int: f64 = steps(d, side, r)
        .iter()
        .map(|&(a, b, lvl)| lvl * (b / a).ln())
        .sum();
    side.count(d.origin_order) as f64 * r.ln() + log_int
}

/// `int_0^r (t^4 + r^4) / (2 r^2 t^3) (n(t) - n(0)) dt`.
fn radial_correction(d: &SphereDivisor, side: Side, r: f64) -> f64 {
    let r2 = r * r;
    let g = |t: f64| t * t / (4.0 * r2) - r2 / (4.0 * t * t);
    steps(d, side, r)
        .iter()
        .map(|&(a, b, lvl)| lvl * (g(b) - g(a)))
        .sum()
}

/// `int_0^r 2 r^2 t^{-3} (n(t) - n(0)) dt`.
fn inverse_cube_term(d: &SphereDivisor, side: Side, r: f64) -> f64 {
    let r2 = r * r;
    steps(d, side, r)
        .iter()
        .map(|&(a, b, lvl)| lvl * r2 * (1.0 / (a * a) - 1.0 / (b * b)))
        .sum()
}

/// Angular counting term
/// `A(r) = sum count (|z|^4 - r^4) / (2 r^2 |z|^4) Re(z)^2`.
pub fn angular_term(d: &SphereDivisor, side: Side, r: f64) -> f64 {
    let r2 = r * r;
    counted(d, side, r)
        .iter()
        .map(|&(s, c, re)| {
            let s4 = s.powi(4);
            c * (s4 - r2 * r2) / (2.0 * r2 * s4) * re * re
        })
        .sum()
}

/// `a_r(t)`: count over `0 < |z| <= r` with `|Re z| <= t`.
pub fn a_count(d: &SphereDivisor, side: Side, r: f64, t: f64) -> i64 {
    counted(d, side, r)
        .iter()
        .filter(|&&(_, _, re)| re.abs() <= t)
        .map(|&(_, c, _)| c as i64)
        .sum()
}

/// `a_r^Re(t)`: as [`a_count`] but weighted by `Re(z)^2`.
pub fn a_re_count(d: &SphereDivisor, side: Side, r: f64, t: f64) -> f64 {
    counted(d, side, r)
        .iter()
        .filter(|&&(_, _, re)| re.abs() <= t)
        .map(|&(_, c, re)| c * re * re)
        .sum()
}

/// `int_0^t h a_t(h) dh` as `C0 + C1 t^2`, integrating the step function
/// `h -> a_t(h)` over its jumps at `|Re z|`. Valid while the set of spheres
/// in `B_t` is `pts`.
fn inner_coefficients(pts: &[(f64, f64, f64)]) -> (f64, f64) {
    let mut jumps: Vec<(f64, f64)> = pts.iter().map(|&(_, c, re)| (re.abs(), c)).collect();
    jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut c0 = 0.0;
    let mut level = 0.0;
    for (i, &(h, c)) in jumps.iter().enumerate() {
        level += c;
        if let Some(&(next, _)) = jumps.get(i + 1) {
            c0 += level * (next * next - h * h) / 2.0;
        } else {
            c0 -= level * h * h / 2.0;
        }
    }
    (c0, level / 2.0)
}

/// `(iint h t^{-5} a_t(h) dh dt, int t^{-5} W(t) dt)` over `(0, r]`.
fn angular_integrals(pts: &[(f64, f64, f64)], r: f64) -> (f64, f64) {
    let mut double = 0.0;
    let mut weighted = 0.0;
    for (i, &(a, _, _)) in pts.iter().enumerate() {
        let b = pts.get(i + 1).map_or(r, |p| p.0);
        if b <= a {
            continue;
        }
        let inside = &pts[..=i];
        let (c0, c1) = inner_coefficients(inside);
        let int5 = (a.powi(-4) - b.powi(-4)) / 4.0;
        let int3 = (a.powi(-2) - b.powi(-2)) / 2.0;
        double += c0 * int5 + c1 * int3;
        let w: f64 = inside.iter().map(|&(_, c, re)| c * re * re).sum();
        weighted += w * int5;
    }
    (double, weighted)
}

/// Residuals of the two integral representations of the angular term
/// against [`angular_term`]:
///
/// 1. `4 r^2 iint_{0<=h<=t<=r} h t^{-5} a_t(h) dh dt - int_0^r 2 r^2 t^{-3} (n(t)-n(0)) dt`
/// 2. `-2 r^2 int_0^r t^{-5} W(t) dt`, `W(t) = sum_{0<|z|<=t} count Re(z)^2`.
pub fn angular_identity_check(d: &SphereDivisor, side: Side, r: f64) -> (f64, f64) {
    let target = angular_term(d, side, r);
    let pts = counted(d, side, r);
    let r2 = r * r;
    let (double, weighted) = angular_integrals(&pts, r);
    let rep1 = 4.0 * r2 * double - inverse_cube_term(d, side, r);
    let rep2 = -2.0 * r2 * weighted;
    ((rep1 - target).abs(), (rep2 - target).abs())
}

/// Integral forms of `N` compared with the direct kernel sum, plus the
/// radial bounds implied by `0 <= Re(z)^2 <= |z|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticCharacterization {
    pub n_direct: f64,
    /// Residual of the double-integral form.
    pub residual_double: f64,
    /// Residual of the weighted-count form.
    pub residual_weighted: f64,
    /// `base - I - N`, where `base = n(0) log r + int (n - n(0)) dt/t` and
    /// `I = int (t^4 + r^4)/(2 r^2 t^3) (n - n(0)) dt`. This is the slack of
    /// the upper bound `N <= base - I`; it is zero for divisors on the real
    /// axis and negative as soon as a nonreal sphere is counted.
    pub printed_slack: f64,
    /// `N - (base - I)`, nonnegative since `A >= -2I`.
    pub lower_slack: f64,
    /// `(base + I) - N`, nonnegative since `A <= 0`.
    pub upper_slack: f64,
}

pub fn analytic_characterization_check(
    d: &SphereDivisor,
    side: Side,
    r: f64,
) -> Result<AnalyticCharacterization> {
    let n = n_integrated(d, side, r)?;
    let base = radial_base(d, side, r);
    let radial = radial_correction(d, side, r);
    let r2 = r * r;
    let pts = counted(d, side, r);
    let (double, weighted) = angular_integrals(&pts, r);
    let eq1 = base + radial + 4.0 * r2 * double - inverse_cube_term(d, side, r);
    let eq2 = base + radial - 2.0 * r2 * weighted;
    Ok(AnalyticCharacterization {
        n_direct: n,
        residual_double: (eq1 - n).abs(),
        residual_weighted: (eq2 - n).abs(),
        printed_slack: base - radial - n,
        lower_slack: n - (base - radial),
        upper_slack: base + radial - n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Unintegrated,
    Integrated,
    Angular,
}

/// A counting function sampled on a radius grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingCurve {
    pub kind: CurveKind,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn counting_curve(
    d: &SphereDivisor,
    side: Side,
    kind: CurveKind,
    radii: &[f64],
) -> Result<CountingCurve> {
    let mut sorted = radii.to_vec();
    sorted.sort_by(f64::total_cmp);
    let values = sorted
        .iter()
        .map(|&r| match kind {
            CurveKind::Unintegrated => Ok(n_count(d, side, r) as f64),
            CurveKind::Integrated => n_integrated(d, side, r),
            CurveKind::Angular => Ok(angular_term(d, side, r)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CountingCurve {
        kind,
        radii: sorted,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::super::DivisorEntry;
    use super::*;

    fn single(re: f64, im: f64, order: i32) -> SphereDivisor {
        SphereDivisor::new(vec![DivisorEntry::new(SliceComplex::new(re, im), order)], 0)
    }

    #[test]
    fn kernel_golden() {
        let j = jensen_kernel(SliceComplex::new(0.5, 0.7), 2.0).unwrap();
        assert!((j - 1.266_975_840_904).abs() < 1e-12);
        let z = SliceComplex::new(-0.3, 1.1);
        assert!(jensen_kernel(z, z.modulus()).unwrap().abs() < 1e-15);
        assert_eq!(
            jensen_kernel(SliceComplex::new(0.0, 0.0), 1.0),
            Err(Error::ZeroCenter)
        );
    }

    #[test]
    fn counting_examples() {
        let d = single(0.5, 0.7, 1);
        assert_eq!(n_count(&d, Side::Zero, 1.0), 1);
        assert_eq!(n_count(&d, Side::Zero, 0.5), 0);
        assert_eq!(n_count(&SphereDivisor::empty(), Side::Zero, 3.0), 0);
        let n = n_integrated(&d, Side::Zero, 2.0).unwrap();
        assert!((n - 1.266_975_840_904).abs() < 1e-12);
        let o = SphereDivisor::new(vec![], 1);
        assert!((n_integrated(&o, Side::Zero, std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        let near = n_integrated(&d, Side::Zero, 0.74f64.sqrt() * (1.0 + 1e-9)).unwrap();
        assert!(near.abs() < 1e-8);
    }

    #[test]
    fn boundary_rejected() {
        let d = single(0.6, 0.8, 1);
        assert!(matches!(
            n_integrated(&d, Side::Zero, 1.0),
            Err(Error::BoundaryDivisor { .. })
        ));
    }

    #[test]
    fn angular_golden() {
        // (0.74^2 - 16) / (2 * 4 * 0.74^2) * 0.25
        let a = angular_term(&single(0.5, 0.7, 1), Side::Zero, 2.0);
        let want = (0.74f64 * 0.74 - 16.0) / (8.0 * 0.74 * 0.74) * 0.25;
        assert!((a - want).abs() < 1e-15);
        assert!((a - (-0.881_825_237_400)).abs() < 1e-12);
        assert_eq!(angular_term(&single(0.0, 0.9, 3), Side::Zero, 2.0), 0.0);
    }

    #[test]
    fn pole_side_counts_negative_orders() {
        let d = SphereDivisor::new(
            vec![
                DivisorEntry::new(SliceComplex::new(0.5, 0.7), 2),
                DivisorEntry::new(SliceComplex::new(-0.2, 0.3), -1),
            ],
            -1,
        );
        assert_eq!(n_count(&d, Side::Zero, 5.0), 2);
        assert_eq!(n_count(&d, Side::Pole, 5.0), 2);
        assert_eq!(n_count(&d, Side::Pole, 0.1), 1);
    }
}
