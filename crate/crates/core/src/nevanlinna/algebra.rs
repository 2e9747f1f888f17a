//! Algebraic identities of the characteristic function.

use serde::{Deserialize, Serialize};

use super::characteristic::{characteristic, counting_n};
use super::fmt::linear_fit;
use super::weil::log_plus;
use super::Target;
use crate::error::Result;
use crate::integral::{abs_after_conjugate, abs_or_pole, estimate, Eval, IntegratorConfig, SphericalMean};
use crate::poly::{Gl2H, Rational, SliceFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `|value| <= tolerance` at every radius.
    Equality,
    /// `value >= -3 sigma - tolerance` at every radius (`value` is a slack).
    Inequality,
    /// An O(1) claim: reported as spread and slope, not gated.
    Bounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraCheck {
    pub name: String,
    pub kind: CheckKind,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub tolerance: f64,
    pub slope: f64,
    pub spread: f64,
    /// `None` for [`CheckKind::Bounded`].
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub target: Target,
    pub checks: Vec<AlgebraCheck>,
}

impl AlgebraReport {
    /// All gated checks pass.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass != Some(false))
    }

    pub fn get(&self, name: &str) -> Option<&AlgebraCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Shared-stream tolerance for identities that hold exactly.
pub const EXACT_TOL: f64 = 1e-9;

fn check(name: &str, kind: CheckKind, radii: &[f64], vals: Vec<(f64, f64)>, tolerance: f64) -> AlgebraCheck {
    let values: Vec<f64> = vals.iter().map(|v| v.0).collect();
    let sigmas: Vec<f64> = vals.iter().map(|v| v.1).collect();
    let x: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let slope = linear_fit(&x, &values).0;
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let pass = match kind {
        CheckKind::Equality => Some(values.iter().all(|v| v.abs() <= tolerance)),
        CheckKind::Inequality => Some(
            values
                .iter()
                .zip(&sigmas)
                .all(|(v, s)| *v >= -3.0 * s - tolerance),
        ),
        CheckKind::Bounded => None,
    };
    AlgebraCheck {
        name: name.to_string(),
        kind,
        radii: radii.to_vec(),
        values,
        sigmas,
        tolerance,
        slope,
        spread: hi - lo,
        pass,
    }
}

/// `m(f^s), m(f) + m(f o S_f), log+` sandwich slacks on shared nodes:
/// `(m(f) + m(f o S_f) - m(f^s), m(f^s) + log 2 - m(f) - m(f o S_f))`.
fn sandwich(f: &Rational, r: f64, cfg: &IntegratorConfig) -> Result<(SphericalMean, SphericalMean)> {
    let fs = f.symmetrize()?;
    let tol = cfg.reject_threshold(r, f.growth_degree());
    let v = estimate(r, cfg, 2, |w, out| {
        let (Some(x), Some(y), Some(s)) = (
            abs_or_pole(f, w)?,
            abs_after_conjugate(f, f, w)?,
            abs_or_pole(&fs, w)?,
        ) else {
            return Ok(Eval::Reject);
        };
        if x < tol || y < tol {
            return Ok(Eval::Reject);
        }
        let mid = log_plus(x) + log_plus(y);
        out[0] = mid - log_plus(s);
        out[1] = log_plus(s) + std::f64::consts::LN_2 - mid;
        Ok(Eval::Accept)
    })?;
    Ok((v[0], v[1]))
}

/// `m(f * g^c + g * f^c, inf, r)`.
fn mixed_proximity(f: &Rational, g: &Rational, r: f64, cfg: &IntegratorConfig) -> Result<SphericalMean> {
    let mixed = f.star_mul(&g.conjugate())?.add(&g.star_mul(&f.conjugate())?)?;
    let v = estimate(r, cfg, 1, |w, out| {
        let Some(x) = abs_or_pole(&mixed, w)? else {
            return Ok(Eval::Reject);
        };
        out[0] = log_plus(x);
        Ok(Eval::Accept)
    })?;
    Ok(v[0])
}

/// Identities and inequalities for `T` at `a = inf` (gated), their
/// transport to the finite target `a` (reported), and the proximity
/// sandwich. Every characteristic value at a radius uses the same nodes.
pub fn characteristic_algebra_suite(
    f: &Rational,
    g: &Rational,
    a: Target,
    t: &Gl2H,
    radii: &[f64],
    cfg: &IntegratorConfig,
) -> Result<AlgebraReport> {
    let inf = Target::Infinity;
    let tc = |h: &Rational, at: Target, r: f64| characteristic(h, at, r, cfg);
    let f2 = f.star_pow(2)?;
    let f3 = f.star_pow(3)?;
    let fg = f.star_mul(g)?;
    let sum = f.add(g)?;
    let fc = f.conjugate();
    let fs = f.symmetrize()?;
    let recip = f.star_reciprocal()?;
    let phi = t.apply(f)?;

    let mut pow2 = Vec::new();
    let mut pow3 = Vec::new();
    let mut prod = Vec::new();
    let mut add = Vec::new();
    let mut conj_inf = Vec::new();
    let mut half_sym = Vec::new();
    let mut conj_sym = Vec::new();
    let mut conj_a = Vec::new();
    let mut conj_sym_a = Vec::new();
    let mut sand_lo = Vec::new();
    let mut sand_hi = Vec::new();
    let mut transport = Vec::new();
    let mut pow2_a = Vec::new();
    let mut prod_a = Vec::new();
    let mut add_a = Vec::new();
    let mut recip_a = Vec::new();
    let mut phi_a = Vec::new();

    for &r in radii {
        let t_f = tc(f, inf, r)?;
        let t_g = tc(g, inf, r)?;
        let se = |xs: &[&SphericalMean]| xs.iter().map(|x| x.std_error).sum::<f64>();

        let t2 = tc(&f2, inf, r)?;
        pow2.push((t2.value - 2.0 * t_f.value, se(&[&t2, &t_f])));
        let t3 = tc(&f3, inf, r)?;
        pow3.push((t3.value - 3.0 * t_f.value, se(&[&t3, &t_f])));

        let t_fg = tc(&fg, inf, r)?;
        prod.push((t_f.value + t_g.value - t_fg.value, se(&[&t_f, &t_g, &t_fg])));

        let t_sum = tc(&sum, inf, r)?;
        let mixed = mixed_proximity(f, g, r, cfg)?;
        add.push((
            t_f.value + t_g.value + 3f64.ln() + 0.5 * mixed.value - t_sum.value,
            se(&[&t_f, &t_g, &t_sum]) + 0.5 * mixed.std_error,
        ));

        let t_fc = tc(&fc, inf, r)?;
        conj_inf.push((t_fc.value - t_f.value, se(&[&t_fc, &t_f])));
        let t_fs = tc(&fs, inf, r)?;
        half_sym.push((t_f.value - 0.5 * t_fs.value, se(&[&t_f, &t_fs])));
        conj_sym.push((t_fc.value - 0.5 * t_fs.value, se(&[&t_fc, &t_fs])));

        let (lo, hi) = sandwich(f, r, cfg)?;
        sand_lo.push((lo.value, lo.std_error));
        sand_hi.push((hi.value, hi.std_error));

        if let Target::Finite(q) = a {
            let t_fa = tc(f, a, r)?;
            let t_fca = tc(&fc, a, r)?;
            let t_f_bar = tc(f, Target::Finite(q.conj()), r)?;
            conj_a.push((t_fca.value - t_f_bar.value, se(&[&t_fca, &t_f_bar])));
            conj_sym_a.push((t_fca.value - 0.5 * t_fs.value, se(&[&t_fca, &t_fs])));
            transport.push((t_fa.value - t_f.value, se(&[&t_fa, &t_f])));
            let t2a = tc(&f2, a, r)?;
            pow2_a.push((t2a.value - 2.0 * t_fa.value, se(&[&t2a, &t_fa])));
            let t_ga = tc(g, a, r)?;
            let t_fga = tc(&fg, a, r)?;
            prod_a.push((t_fa.value + t_ga.value - t_fga.value, se(&[&t_fa, &t_ga, &t_fga])));
            let t_suma = tc(&sum, a, r)?;
            add_a.push((t_suma.value - t_fa.value - t_ga.value, se(&[&t_suma, &t_fa, &t_ga])));
            let t_ra = tc(&recip, a, r)?;
            recip_a.push((t_ra.value - t_fa.value, se(&[&t_ra, &t_fa])));
            let t_pa = tc(&phi, a, r)?;
            phi_a.push((t_pa.value - t_fa.value, se(&[&t_pa, &t_fa])));
        }
        // Keep the counting side honest: f + g has no poles beyond those of f and g.
        debug_assert!(counting_n(&sum, inf, r)? <= counting_n(f, inf, r)? + counting_n(g, inf, r)? + 1e-9);
    }

    use CheckKind::*;
    let mut checks = vec![
        check("T(f^2*,inf) = 2 T(f,inf)", Equality, radii, pow2, EXACT_TOL),
        check("T(f^3*,inf) = 3 T(f,inf)", Equality, radii, pow3, EXACT_TOL),
        check("T(f*g,inf) <= T(f,inf) + T(g,inf)", Inequality, radii, prod, 1e-12),
        check(
            "T(f+g,inf) <= T(f,inf) + T(g,inf) + log 3 + m(f*g^c+g*f^c,inf)/2",
            Inequality,
            radii,
            add,
            1e-12,
        ),
        check("T(f^c,inf) = T(f,inf)", Equality, radii, conj_inf, EXACT_TOL),
        check("T(f,inf) = T(f^s,inf)/2", Equality, radii, half_sym, EXACT_TOL),
        check("T(f^c,inf) = T(f^s,inf)/2", Equality, radii, conj_sym, EXACT_TOL),
        check("m(f) + m(f o S_f) >= m(f^s)", Inequality, radii, sand_lo, 1e-12),
        check("m(f) + m(f o S_f) <= m(f^s) + log 2", Inequality, radii, sand_hi, 1e-12),
    ];
    if a.finite().is_some() {
        checks.extend([
            check("T(f^c,a) = T(f,conj a)", Equality, radii, conj_a, EXACT_TOL),
            check("T(f^c,a) - T(f^s,inf)/2", Bounded, radii, conj_sym_a, 0.0),
            check("T(f,a) - T(f,inf)", Bounded, radii, transport, 0.0),
            check("T(f^2*,a) - 2 T(f,a)", Bounded, radii, pow2_a, 0.0),
            check("T(f,a) + T(g,a) - T(f*g,a)", Bounded, radii, prod_a, 0.0),
            check("T(f+g,a) - T(f,a) - T(g,a)", Bounded, radii, add_a, 0.0),
            check("T(f^-*,a) - T(f,a)", Bounded, radii, recip_a, 0.0),
            check("T(Phi(f),a) - T(f,a)", Bounded, radii, phi_a, 0.0),
        ]);
    }
    Ok(AlgebraReport { target: a, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::LeftPoly;
    use crate::quat::Quaternion;

    #[test]
    fn suite_on_small_example() {
        let f = Rational::from_poly(LeftPoly::new(vec![
            Quaternion::new(0.4, 0.1, 0.0, 0.0),
            Quaternion::ZERO,
            Quaternion::ONE,
        ]));
        let g = Rational::new(
            LeftPoly::linear(Quaternion::new(0.0, 0.3, 0.2, 0.0)),
            LeftPoly::from_real(&[0.5, 0.0, 1.0]),
        )
        .unwrap();
        let t = Gl2H::new(Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::real(2.0));
        let rep = characteristic_algebra_suite(
            &f,
            &g,
            Target::Finite(Quaternion::new(0.2, 0.0, 0.0, 0.5)),
            &t,
            &[1.5, 4.0],
            &IntegratorConfig::new(10_000, 9),
        )
        .unwrap();
        for c in &rep.checks {
            assert_ne!(c.pass, Some(false), "{c:?}");
        }
        assert_eq!(rep.checks.len(), 17);
    }
}
