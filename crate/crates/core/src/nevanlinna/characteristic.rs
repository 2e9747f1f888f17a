//! Counting, proximity and characteristic functions, and radius profiles.

use serde::{Deserialize, Serialize};

use super::harmonic::harmonic_remainder_deflated;
use super::weil::{log_plus, WeilFunction};
use super::Target;
use crate::divisor::{angular_term, n_count, n_integrated, total_order_divisor, Side, SphereDivisor};
use crate::error::{Error, Result};
use crate::integral::{abs_or_pole, estimate, mean_weil, Eval, IntegratorConfig, SphericalMean};
use crate::poly::{Rational, SliceFunction};

/// Divisor whose `side` counts the `a`-points of `f`: zeros of `f - a`, or
/// poles of `f` for `a = inf`.
pub fn divisor_for(f: &Rational, a: Target) -> Result<(SphereDivisor, Side)> {
    match a {
        Target::Finite(a) => Ok((total_order_divisor(&f.sub_const(a))?, Side::Zero)),
        Target::Infinity => Ok((total_order_divisor(f)?, Side::Pole)),
    }
}

/// `N(f, a, r)`.
pub fn counting_n(f: &Rational, a: Target, r: f64) -> Result<f64> {
    let (d, side) = divisor_for(f, a)?;
    n_integrated(&d, side, r)
}

/// `m(f, lambda, r)`.
pub fn proximity(f: &Rational, weil: &WeilFunction, r: f64, cfg: &IntegratorConfig) -> Result<SphericalMean> {
    mean_weil(f, weil, r, cfg)
}

/// `m((f - a)^s, 0, r)`, or `m(f^s, inf, r)` for `a = inf`.
pub fn proximity_symmetrized(
    f: &Rational,
    a: Target,
    r: f64,
    cfg: &IntegratorConfig,
) -> Result<SphericalMean> {
    let (h, toward_zero) = match a {
        Target::Finite(a) => (f.sub_const(a).symmetrize()?, true),
        Target::Infinity => (f.symmetrize()?, false),
    };
    let tol = cfg.reject_threshold(r, h.growth_degree());
    let v = estimate(r, cfg, 1, |w, out| {
        let Some(m) = abs_or_pole(&h, w)? else {
            return Ok(Eval::Reject);
        };
        if m < tol || !m.is_finite() {
            return Ok(Eval::Reject);
        }
        out[0] = if toward_zero { log_plus(1.0 / m) } else { log_plus(m) };
        Ok(Eval::Accept)
    })?;
    Ok(v[0])
}

/// `T(f, a, r) = N(f, a, r) + m((f - a)^s, 0, r)/2 - H(f, a, r)`, and
/// `T(f, r) = N(f, inf, r) + m(f^s, inf, r)/2`. The standard error is that
/// of the proximity part.
pub fn characteristic(f: &Rational, a: Target, r: f64, cfg: &IntegratorConfig) -> Result<SphericalMean> {
    let n = counting_n(f, a, r)?;
    let m = proximity_symmetrized(f, a, r, cfg)?;
    let h = harmonic_remainder_deflated(f, a, r)?;
    Ok(SphericalMean {
        value: n + 0.5 * m.value - h,
        std_error: 0.5 * m.std_error,
        ..m
    })
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

/// Moves every radius within `1e-6 r` of a divisor modulus outward until
/// it clears all of them.
pub fn admissible_radii(radii: &[f64], divisors: &[&SphereDivisor]) -> Vec<f64> {
    let moduli: Vec<f64> = divisors
        .iter()
        .flat_map(|d| d.entries.iter().map(|e| e.modulus()))
        .collect();
    radii
        .iter()
        .map(|&r0| {
            let mut r = r0;
            while moduli.iter().any(|&s| (s - r).abs() <= 1e-6 * r) {
                r *= 1.0 + 1e-5;
            }
            r
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub r: f64,
    /// Unintegrated count `n(f, a, r)`.
    pub n: i64,
    #[serde(rename = "N")]
    pub big_n: f64,
    /// `m(f, a, r)` with the analytic Weil function.
    pub m: f64,
    pub m_se: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub t_se: f64,
    /// Angular counting term.
    #[serde(rename = "A")]
    pub angular: f64,
    /// `T(f, r)`.
    pub t_inf: f64,
    pub t_inf_se: f64,
    /// `N + m - H - T(f, r)`.
    pub fmt3: f64,
    pub fmt3_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NevanlinnaProfile {
    pub function: Rational,
    pub target: Target,
    pub config: IntegratorConfig,
    pub rows: Vec<ProfileRow>,
}

impl NevanlinnaProfile {
    pub const CSV_HEADER: [&'static str; 13] = [
        "r", "n", "N", "m", "m_se", "H", "T", "T_se", "A", "T_inf", "T_inf_se", "fmt3", "fmt3_se",
    ];
}

/// `N, m, H, T, A` and the form-3 residual at each radius.
pub fn nevanlinna_profile(
    f: &Rational,
    a: Target,
    radii: &[f64],
    cfg: &IntegratorConfig,
) -> Result<NevanlinnaProfile> {
    if radii.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("radii must be strictly increasing".into()));
    }
    let (d, side) = divisor_for(f, a)?;
    let weil = WeilFunction::analytic(a);
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let big_n = n_integrated(&d, side, r)?;
        let t = characteristic(f, a, r, cfg)?;
        let t_inf = characteristic(f, Target::Infinity, r, cfg)?;
        let h = harmonic_remainder_deflated(f, a, r)?;
        let (m, fmt3) = proximity_and_fmt3(f, &weil, r, cfg)?;
        rows.push(ProfileRow {
            r,
            n: n_count(&d, side, r),
            big_n,
            m: m.value,
            m_se: m.std_error,
            h,
            t: t.value,
            t_se: t.std_error,
            angular: angular_term(&d, side, r),
            t_inf: t_inf.value,
            t_inf_se: t_inf.std_error,
            fmt3: big_n - h - counting_n(f, Target::Infinity, r)? + fmt3.value,
            fmt3_se: fmt3.std_error,
        });
    }
    Ok(NevanlinnaProfile {
        function: f.clone(),
        target: a,
        config: *cfg,
        rows,
    })
}

/// `m(f, a, r)` and the sampled part `lambda_a(f) - log+|f^s| / 2` of the
/// form-3 residual, on shared nodes.
fn proximity_and_fmt3(
    f: &Rational,
    weil: &WeilFunction,
    r: f64,
    cfg: &IntegratorConfig,
) -> Result<(SphericalMean, SphericalMean)> {
    let fs = f.symmetrize()?;
    let tol = cfg.reject_threshold(r, f.growth_degree());
    let tol_s = cfg.reject_threshold(r, fs.growth_degree());
    let v = estimate(r, cfg, 2, |w, out| {
        let value = crate::integral::eval_or_pole(f, w)?;
        let (Some(lam), Some(s)) = (weil.eval_at(value, tol), abs_or_pole(&fs, w)?) else {
            return Ok(Eval::Reject);
        };
        if s < tol_s || !s.is_finite() {
            return Ok(Eval::Reject);
        }
        out[0] = lam;
        out[1] = lam - 0.5 * log_plus(s);
        Ok(Eval::Accept)
    })?;
    Ok((v[0], v[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::LeftPoly;
    use crate::quat::Quaternion;

    fn cfg() -> IntegratorConfig {
        IntegratorConfig::new(20_000, 5)
    }

    #[test]
    fn constant_small_has_zero_characteristic() {
        let f = Rational::from_poly(LeftPoly::constant(Quaternion::new(0.3, 0.2, 0.0, -0.4)));
        for r in [0.5, 2.0, 10.0] {
            let t = characteristic(&f, Target::Infinity, r, &cfg()).unwrap();
            assert_eq!(t.value, 0.0);
        }
    }

    #[test]
    fn identity_grows_like_log() {
        let f = Rational::from_poly(LeftPoly::identity());
        for r in [1.5, std::f64::consts::E, 20.0] {
            let t = characteristic(&f, Target::Infinity, r, &cfg()).unwrap();
            assert!((t.value - r.ln()).abs() < 1e-12);
        }
        let w = WeilFunction::analytic(Target::Infinity);
        let m = proximity(&f, &w, std::f64::consts::E, &cfg()).unwrap();
        assert!((m.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn far_target_has_no_proximity() {
        let a = Quaternion::new(0.1, 0.2, 0.0, 0.0);
        let f = Rational::from_poly(LeftPoly::linear(a));
        let w = WeilFunction::analytic(Target::Finite(Quaternion::ZERO));
        assert_eq!(proximity(&f, &w, 10.0, &cfg()).unwrap().value, 0.0);
        let c = Rational::from_poly(LeftPoly::constant(Quaternion::real(3.0)));
        let w = WeilFunction::analytic(Target::Finite(Quaternion::real(0.5)));
        assert_eq!(proximity(&c, &w, 1.0, &cfg()).unwrap().value, 0.0);
    }

    #[test]
    fn grid_helpers() {
        let g = log_spaced(2.0, 50.0, 12);
        assert_eq!(g.len(), 12);
        assert!((g[0] - 2.0).abs() < 1e-14 && (g[11] - 50.0).abs() < 1e-12);
        let d = SphereDivisor::new(
            vec![crate::divisor::DivisorEntry::new(crate::quat::SliceComplex::new(0.0, 2.0), 1)],
            0,
        );
        let r = admissible_radii(&[2.0, 3.0], &[&d]);
        assert!(r[0] > 2.0 && (r[0] - 2.0) > 2e-6 && r[1] == 3.0);
    }

    #[test]
    fn profile_columns_consistent() {
        let f = Rational::from_poly(LeftPoly::from_real(&[1.0, 0.0, 1.0]));
        let a = Target::Finite(Quaternion::ONE);
        let p = nevanlinna_profile(&f, a, &[2.0, 5.0, 20.0], &cfg()).unwrap();
        for row in &p.rows {
            assert_eq!(row.n, 2);
            let m_sym = (row.t - row.big_n + row.h) * 2.0;
            assert!(m_sym >= 0.0);
            assert!((row.big_n - 2.0 * row.r.ln()).abs() < 1e-12);
            assert!(row.t_inf > 0.0);
        }
        assert!(p.rows.windows(2).all(|w| w[0].big_n < w[1].big_n && w[0].t_inf < w[1].t_inf));
    }
}
