//! First Main Theorem residuals and mean proximity balance diagnostics.
//!
//! Boundedness in `r` cannot be decided numerically, so O(1) claims are
//! reported as the spread of the residual over a radius grid and the slope
//! of its least-squares fit against `log r`.

use serde::{Deserialize, Serialize};

use super::characteristic::{characteristic, counting_n};
use super::harmonic::harmonic_remainder_deflated;
use super::weil::{log_plus, WeilFunction};
use super::Target;
use crate::error::{Error, Result};
use crate::integral::{
    abs_after_conjugate, abs_or_pole, conjugate_or_none, estimate, eval_or_pole, Eval,
    IntegratorConfig, SphericalMean,
};
use crate::poly::{Rational, SliceFunction};
use crate::quat::Quaternion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum FmtForm {
    /// `T(f, a, r) = T(f, r) + O(m(f f^c, inf, r)) + O(1)`.
    One,
    /// The split form with `f o S_{f-a}` and `f o S_f` corrections.
    Two,
    /// `N + m - H = T(f, r) + O(1)` for mean proximity balanced `f`.
    Three,
}

impl TryFrom<u8> for FmtForm {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(FmtForm::One),
            2 => Ok(FmtForm::Two),
            3 => Ok(FmtForm::Three),
            _ => Err(format!("form must be 1, 2 or 3, got {v}")),
        }
    }
}

impl From<FmtForm> for u8 {
    fn from(f: FmtForm) -> u8 {
        match f {
            FmtForm::One => 1,
            FmtForm::Two => 2,
            FmtForm::Three => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FmtRow {
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`.
    pub residual: f64,
    pub std_error: f64,
    /// `m(f f^c, inf, r)`, form 1 only.
    pub envelope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmtTable {
    pub form: FmtForm,
    pub target: Target,
    pub rows: Vec<FmtRow>,
    /// Slope of the residual against `log r`.
    pub slope: f64,
    /// `max - min` of the residual over the grid.
    pub spread: f64,
    /// Form 1: `k` in the fit `residual = k * envelope + C`.
    pub envelope_coefficient: Option<f64>,
    /// Form 1: `max(|residual| - envelope)`.
    pub envelope_constant: Option<f64>,
}

impl FmtTable {
    /// `|slope| <= max_slope` and `spread <= max_spread`.
    pub fn bounded(&self, max_slope: f64, max_spread: f64) -> bool {
        self.slope.abs() <= max_slope && self.spread <= max_spread
    }
}

/// Least-squares `(slope, intercept)` of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    if x.len() < 2 {
        return (0.0, y.first().copied().unwrap_or(0.0));
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return (0.0, my);
    }
    let k = sxy / sxx;
    (k, my - k * mx)
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    if v.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// Sampled parts `(lhs, rhs, lhs - rhs, envelope)` of one FMT form.
fn sampled_parts(
    f: &Rational,
    a: Target,
    form: FmtForm,
    r: f64,
    cfg: &IntegratorConfig,
) -> Result<Vec<SphericalMean>> {
    let fs = f.symmetrize()?;
    let h = match a {
        Target::Finite(a) => f.sub_const(a),
        Target::Infinity => f.clone(),
    };
    let hs = h.symmetrize()?;
    let fc = f.conjugate();
    let weil = WeilFunction::analytic(a);
    let inf = WeilFunction::analytic(Target::Infinity);
    let tol = cfg.reject_threshold(r, f.growth_degree());
    let tol_s = cfg.reject_threshold(r, fs.growth_degree());
    estimate(r, cfg, 4, |w, out| {
        let Some(s) = abs_or_pole(&fs, w)? else {
            return Ok(Eval::Reject);
        };
        if s < tol_s || !s.is_finite() {
            return Ok(Eval::Reject);
        }
        let t_mc = 0.5 * log_plus(s);
        let (lhs, rhs, env) = match form {
            FmtForm::Three => {
                let Some(lam) = weil.eval_at(eval_or_pole(f, w)?, tol) else {
                    return Ok(Eval::Reject);
                };
                (lam, t_mc, 0.0)
            }
            FmtForm::One => {
                let lhs = match a {
                    Target::Infinity => t_mc,
                    Target::Finite(_) => {
                        let Some(x) = abs_or_pole(&hs, w)? else {
                            return Ok(Eval::Reject);
                        };
                        if x < tol_s {
                            return Ok(Eval::Reject);
                        }
                        0.5 * log_plus(1.0 / x)
                    }
                };
                let (Some(x), Some(y)) = (abs_or_pole(f, w)?, abs_or_pole(&fc, w)?) else {
                    return Ok(Eval::Reject);
                };
                (lhs, t_mc, log_plus(x * y))
            }
            FmtForm::Two => {
                let (Some(sh), Some(_)) = (conjugate_or_none(&h, w)?, conjugate_or_none(f, w)?) else {
                    return Ok(Eval::Reject);
                };
                let (Some(l1), Some(l2)) = (
                    weil.eval_at(eval_or_pole(f, w)?, tol),
                    weil.eval_at(eval_or_pole(f, sh)?, tol),
                ) else {
                    return Ok(Eval::Reject);
                };
                let (Some(fsf), Some(fsh)) = (abs_after_conjugate(f, f, w)?, abs_or_pole(f, sh)?) else {
                    return Ok(Eval::Reject);
                };
                let (Some(i1), Some(i2)) = (
                    inf.eval_at(Some(Quaternion::real(fsf)), tol),
                    inf.eval_at(Some(Quaternion::real(fsh)), tol),
                ) else {
                    return Ok(Eval::Reject);
                };
                (0.5 * (l1 + l2), t_mc - 0.5 * i1 + 0.5 * i2, 0.0)
            }
        };
        out[0] = lhs;
        out[1] = rhs;
        out[2] = lhs - rhs;
        out[3] = env;
        Ok(Eval::Accept)
    })
}

/// Residual table of the chosen FMT form over `radii`.
pub fn verify_fmt(
    f: &Rational,
    a: Target,
    radii: &[f64],
    cfg: &IntegratorConfig,
    form: FmtForm,
) -> Result<FmtTable> {
    if radii.is_empty() {
        return Err(Error::InvalidArgument("empty radius grid".into()));
    }
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let n_a = counting_n(f, a, r)?;
        let n_inf = counting_n(f, Target::Infinity, r)?;
        let h = harmonic_remainder_deflated(f, a, r)?;
        let s = sampled_parts(f, a, form, r, cfg)?;
        let lhs = n_a - h + s[0].value;
        let rhs = n_inf + s[1].value;
        rows.push(FmtRow {
            r,
            lhs,
            rhs,
            residual: n_a - h - n_inf + s[2].value,
            std_error: s[2].std_error,
            envelope: (form == FmtForm::One).then_some(s[3].value),
        });
    }
    let x: Vec<f64> = rows.iter().map(|w| w.r.ln()).collect();
    let y: Vec<f64> = rows.iter().map(|w| w.residual).collect();
    let (slope, _) = linear_fit(&x, &y);
    let (coef, constant) = if form == FmtForm::One {
        let env: Vec<f64> = rows.iter().map(|w| w.envelope.unwrap_or(0.0)).collect();
        let c = rows
            .iter()
            .zip(&env)
            .map(|(w, e)| w.residual.abs() - e)
            .fold(f64::NEG_INFINITY, f64::max);
        let k = (spread(&env) > 0.0).then(|| linear_fit(&env, &y).0);
        (k, Some(c))
    } else {
        (None, None)
    };
    Ok(FmtTable {
        form,
        target: a,
        spread: spread(&y),
        slope,
        rows,
        envelope_coefficient: coef,
        envelope_constant: constant,
    })
}

/// Mean of `log|f(w)| - log|f(S_{f-a}(w))|` over `dB_r`.
pub fn mpb_defect(f: &Rational, a: Quaternion, r: f64, cfg: &IntegratorConfig) -> Result<SphericalMean> {
    let h = f.sub_const(a);
    let tol = cfg.reject_threshold(r, f.growth_degree());
    let v = estimate(r, cfg, 1, |w, out| {
        let (Some(x), Some(y)) = (abs_or_pole(f, w)?, abs_after_conjugate(f, &h, w)?) else {
            return Ok(Eval::Reject);
        };
        if x < tol || y < tol || !x.is_finite() || !y.is_finite() {
            return Ok(Eval::Reject);
        }
        out[0] = x.ln() - y.ln();
        Ok(Eval::Accept)
    })?;
    Ok(v[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NBoundRow {
    pub r: f64,
    #[serde(rename = "N")]
    pub n: f64,
    /// `T(f, r)`.
    #[serde(rename = "T")]
    pub t: f64,
    pub t_se: f64,
    #[serde(rename = "H")]
    pub h: f64,
    /// `N - T - H`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NBoundReport {
    pub target: Target,
    pub rows: Vec<NBoundRow>,
    pub sup_gap: f64,
    pub slope: f64,
}

/// `N(f, a, r) - T(f, r) - H(f, a, r)` over `radii`.
pub fn n_bound_check(f: &Rational, a: Target, radii: &[f64], cfg: &IntegratorConfig) -> Result<NBoundReport> {
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let n = counting_n(f, a, r)?;
        let t = characteristic(f, Target::Infinity, r, cfg)?;
        let h = harmonic_remainder_deflated(f, a, r)?;
        rows.push(NBoundRow {
            r,
            n,
            t: t.value,
            t_se: t.std_error,
            h,
            gap: n - t.value - h,
        });
    }
    let x: Vec<f64> = rows.iter().map(|w| w.r.ln()).collect();
    let y: Vec<f64> = rows.iter().map(|w| w.gap).collect();
    Ok(NBoundReport {
        target: a,
        sup_gap: y.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        slope: linear_fit(&x, &y).0,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integral::Scheme;
    use crate::nevanlinna::log_spaced;
    use crate::poly::LeftPoly;

    fn cfg() -> IntegratorConfig {
        IntegratorConfig::new(20_000, 3)
    }

    fn sph() -> Rational {
        Rational::from_poly(LeftPoly::from_real(&[1.0, 0.0, 1.0]))
    }

    #[test]
    fn form3_at_infinity_vanishes() {
        let t = verify_fmt(&sph(), Target::Infinity, &log_spaced(2.0, 50.0, 5), &cfg(), FmtForm::Three)
            .unwrap();
        for row in &t.rows {
            assert!(row.residual.abs() < 1e-12, "{row:?}");
        }
    }

    #[test]
    fn form3_bounded_for_slice_preserving() {
        let t = verify_fmt(
            &sph(),
            Target::Finite(Quaternion::ONE),
            &log_spaced(2.0, 50.0, 6),
            &cfg(),
            FmtForm::Three,
        )
        .unwrap();
        assert!(t.slope.abs() < 0.05, "{t:?}");
    }

    #[test]
    fn form1_at_infinity_is_exact() {
        let t = verify_fmt(&sph(), Target::Infinity, &[3.0], &cfg(), FmtForm::One).unwrap();
        assert_eq!(t.rows[0].residual, 0.0);
    }

    #[test]
    fn slice_preserving_defect_is_zero() {
        let c = cfg().with_scheme(Scheme::AntitheticPair);
        for a in [Quaternion::ONE, Quaternion::new(0.3, -0.2, 0.9, 0.1)] {
            for r in [0.5, 3.0, 40.0] {
                let d = mpb_defect(&sph(), a, r, &c).unwrap();
                assert_eq!(d.value.to_bits(), 0f64.to_bits());
            }
        }
    }

    #[test]
    fn fit_and_spread() {
        let (k, c) = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((k - 2.0).abs() < 1e-15 && (c - 1.0).abs() < 1e-15);
        assert_eq!(spread(&[1.0, -2.0, 0.5]), 3.0);
    }

    #[test]
    fn n_bound_linear() {
        let c = Quaternion::new(0.2, 0.0, 0.3, 0.0);
        let f = Rational::from_poly(LeftPoly::linear(c));
        let rep = n_bound_check(&f, Target::Finite(c), &log_spaced(2.0, 100.0, 5), &cfg()).unwrap();
        assert!(rep.slope.abs() < 0.05, "{rep:?}");
    }
}
