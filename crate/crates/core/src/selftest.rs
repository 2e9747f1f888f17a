//! Deterministic checks of exact identities, with no sampling involved.
//!
//! Each check reports a residual that vanishes in exact arithmetic; the
//! suite passes when every residual is at most [`SELFTEST_TOL`].

use serde::{Deserialize, Serialize};

use crate::divisor::{
    angular_identity_check, jensen_kernel, n_integrated, n_via_unintegrated, total_order_divisor,
    Side,
};
use crate::error::Result;
use crate::nevanlinna::{harmonic_from_roots, harmonic_remainder, Target};
use crate::poly::{blaschke, corollary_decomposition_check, star_eval_identity_check};
use crate::poly::{LeftPoly, Rational};
use crate::quat::{embed, Quaternion, SliceComplex};

pub const SELFTEST_TOL: f64 = 1e-9;

/// Worked example: `f(q) = q`, target `0.5 + 0.7i`, radius 2.
pub const GOLDEN_KERNEL: f64 = 1.266_975_840_904;
pub const GOLDEN_HARMONIC: f64 = 0.438_276_113_952;
pub const GOLDEN_LOG_ABS_CENTER: f64 = -0.150_552_546_392;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfCheck {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfTestReport {
    pub tolerance: f64,
    pub checks: Vec<SelfCheck>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn probe_points() -> Vec<Quaternion> {
    vec![
        Quaternion::new(0.3, -0.8, 0.2, 0.5),
        Quaternion::new(-1.2, 0.1, 0.9, -0.4),
        Quaternion::new(0.0, 0.0, 1.5, 0.0),
        Quaternion::new(2.1, 0.6, -0.3, 1.1),
        Quaternion::real(-0.7),
    ]
}

fn sample_poly() -> LeftPoly {
    LeftPoly::new(vec![
        Quaternion::new(0.3, -0.2, 0.5, 0.1),
        Quaternion::new(1.0, 0.4, 0.0, -0.3),
        Quaternion::new(-0.2, 0.1, 0.7, 0.2),
        Quaternion::new(0.5, 0.0, -0.6, 0.4),
    ])
}

fn sample_rational() -> Result<Rational> {
    Rational::new(
        LeftPoly::new(vec![
            Quaternion::new(0.3, -0.2, 0.5, 0.1),
            Quaternion::new(1.0, 0.4, 0.0, -0.3),
            Quaternion::new(-0.2, 0.1, 0.7, 0.2),
        ]),
        LeftPoly::from_real(&[1.0, -0.4, 0.3]),
    )
}

pub fn run() -> Result<SelfTestReport> {
    let mut checks = Vec::new();
    let mut push = |name: &str, residual: f64| {
        checks.push(SelfCheck {
            name: name.to_string(),
            residual,
            pass: residual.is_finite() && residual <= SELFTEST_TOL,
        });
    };
    let a = Quaternion::new(0.5, 0.7, 0.0, 0.0);
    let id = Rational::from_poly(LeftPoly::identity());

    push(
        "golden Jensen kernel",
        (jensen_kernel(a.sphere(), 2.0)? - GOLDEN_KERNEL).abs(),
    );
    push(
        "golden harmonic remainder",
        (harmonic_remainder(&id, Target::Finite(a), 2.0)? - GOLDEN_HARMONIC).abs(),
    );
    push(
        "golden log|f(0) - a|",
        (id.sub_const(a).eval(Quaternion::ZERO)?.norm().ln() - GOLDEN_LOG_ABS_CENTER).abs(),
    );

    let p = sample_poly();
    let g = LeftPoly::new(vec![Quaternion::new(-0.4, 0.2, 0.1, 0.0), Quaternion::K, Quaternion::ONE]);
    let pts = probe_points();
    let worst = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
    push(
        "stem evaluation vs Horner",
        worst(pts.iter().map(|&q| (p.eval(q) - p.horner(q)).norm() / (1.0 + q.norm()).powi(3)).collect()),
    );
    push(
        "(f*g)(q) = f(q) g(f(q)^-1 q f(q))",
        worst(pts.iter().map(|&q| star_eval_identity_check(&p, &g, q) / (1.0 + q.norm()).powi(5)).collect()),
    );

    let f = sample_rational()?;
    let mut dec = Vec::new();
    for &q in pts.iter().filter(|q| !q.is_real()) {
        dec.push(corollary_decomposition_check(&f, q)?);
    }
    push("log|f^s| = log|f| + log|f o S_f|", worst(dec));

    let one = f.star_mul(&f.star_reciprocal()?)?;
    let mut rec = Vec::new();
    for &q in &pts {
        rec.push((one.eval(q)? - Quaternion::ONE).norm());
    }
    push("f * f^-* = 1", worst(rec));

    let fd = f.sub_const(a);
    let d = total_order_divisor(&fd)?;
    let mut cnt = Vec::new();
    let mut ang = Vec::new();
    for r in [0.4, 1.1, 2.7, 6.0] {
        for side in [Side::Zero, Side::Pole] {
            cnt.push((n_integrated(&d, side, r)? - n_via_unintegrated(&d, side, r)?).abs());
            let (x, y) = angular_identity_check(&d, side, r);
            ang.push(x.abs().max(y.abs()));
        }
    }
    push("N by kernel sum vs unintegrated count", worst(cnt));
    push("angular term integral forms", worst(ang));

    let mut hr = Vec::new();
    for t in [a, Quaternion::new(-0.1, 0.0, 0.2, 0.9), Quaternion::real(2.0)] {
        let h = harmonic_remainder(&f, Target::Finite(t), 1.3)?;
        let o = harmonic_from_roots(&f, t, 1.3)?;
        hr.push((h - o).abs() / (1.0 + o.abs()));
    }
    push("harmonic closed form vs root sum", worst(hr));

    let zeta = SliceComplex::new(0.5, 0.7);
    let mut bl = Vec::new();
    for &q in &pts {
        let u = q.imaginary_unit().unwrap_or(Quaternion::I);
        let w = embed(SliceComplex::new(q.w, q.im_norm()), u)?;
        let on = w * (1.6 / w.norm());
        bl.push((blaschke(zeta, 1.6, on)?.norm() - 1.0).abs());
    }
    push("|B| = 1 on the boundary sphere", worst(bl));

    Ok(SelfTestReport {
        tolerance: SELFTEST_TOL,
        checks,
    })
}
