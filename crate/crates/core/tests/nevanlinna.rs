use std::sync::Arc;

use quatnev::integral::{mean_log_abs, mean_weil, paired_reflection_mean};
use quatnev::nevanlinna::{
    characteristic, harmonic_oracle, harmonic_remainder, log_spaced, n_bound_check,
    nevanlinna_profile, proximity, verify_fmt, verify_jensen, FmtForm, KernelConvention, Target,
    WeilFunction,
};
use quatnev::{IntegratorConfig, LeftPoly, Quaternion, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 7;

fn cfg() -> IntegratorConfig {
    IntegratorConfig::new(50_000, SEED)
}

fn id() -> Rational {
    Rational::from_poly(LeftPoly::identity())
}

fn sphere_zero() -> Rational {
    Rational::from_poly(LeftPoly::from_real(&[1.0, 0.0, 1.0]))
}

#[test]
fn constant_integrands_are_exact() {
    let m = mean_log_abs(&id(), 2.0, &cfg()).unwrap();
    assert_eq!(m.value, 2f64.ln());
    assert!(m.std_error < 1e-15);

    let e = std::f64::consts::E;
    let p = proximity(&id(), &WeilFunction::analytic(Target::Infinity), e, &cfg()).unwrap();
    assert!((p.value - 1.0).abs() < 1e-15);

    let c = Rational::from_poly(LeftPoly::constant(Quaternion::real(3.0)));
    let w = mean_weil(&c, &WeilFunction::analytic(Target::Finite(Quaternion::ONE)), 1.0, &cfg()).unwrap();
    assert_eq!(w.value, 0.0);

    let (a, b) = paired_reflection_mean(&c, 1.0, &cfg()).unwrap();
    assert_eq!(a.value, 3f64.ln());
    assert_eq!(b.value, 3f64.ln());
}

#[test]
fn reflection_pairs() {
    let (a, b) = paired_reflection_mean(&sphere_zero(), 1.7, &cfg()).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    let f = Rational::from_poly(LeftPoly::linear(Quaternion::I));
    let (a, b) = paired_reflection_mean(&f, 1.7, &cfg()).unwrap();
    assert_ne!(a.value, b.value);
}

#[test]
fn proximity_far_from_target_vanishes() {
    let a = Quaternion::new(0.5, 0.7, 0.0, 0.0);
    let f = Rational::from_poly(LeftPoly::linear(a));
    let m = proximity(&f, &WeilFunction::analytic(Target::Finite(Quaternion::ZERO)), 50.0, &cfg()).unwrap();
    assert_eq!(m.value, 0.0);
}

#[test]
fn proximity_is_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut q = |s: f64| {
        Quaternion::new(
            rng.random_range(-s..s),
            rng.random_range(-s..s),
            rng.random_range(-s..s),
            rng.random_range(-s..s),
        )
    };
    let small = IntegratorConfig::new(2000, SEED);
    for k in 0..100 {
        let f = Rational::from_poly(LeftPoly::new(vec![q(1.0), q(1.0), q(1.0)]));
        let a = if k % 4 == 0 { Target::Infinity } else { Target::Finite(q(1.0)) };
        let r = 0.5 + (k % 10) as f64 * 0.7;
        let m = proximity(&f, &WeilFunction::analytic(a), r, &small).unwrap();
        assert!(m.value >= 0.0);
    }
}

#[test]
fn weil_kinds_differ_by_bounded_offset() {
    let a = Target::Finite(Quaternion::new(0.2, 0.0, 0.4, 0.0));
    let offset = Arc::new(|q: Option<Quaternion>| q.map_or(0.0, |q| 0.3 * (q.w * 2.0).sin()));
    let custom = WeilFunction::custom(a, offset);
    let analytic = WeilFunction::analytic(a);
    let f = sphere_zero();
    for r in [0.5, 1.5, 4.0] {
        let pts: Vec<Quaternion> = quatnev::SphereSampler::new(r, SEED, 0).sample(2000);
        let values: Vec<Quaternion> = pts.iter().map(|&w| f.eval(w).unwrap()).collect();
        let bound = custom.max_offset(&values);
        let m1 = proximity(&f, &analytic, r, &cfg()).unwrap();
        let m2 = proximity(&f, &custom, r, &cfg()).unwrap();
        assert!((m1.value - m2.value).abs() <= bound + 1e-12);
    }
}

#[test]
fn characteristic_examples() {
    let c = Rational::from_poly(LeftPoly::constant(Quaternion::new(0.3, 0.4, 0.0, 0.1)));
    for r in [0.5, 2.0, 9.0] {
        assert_eq!(characteristic(&c, Target::Infinity, r, &cfg()).unwrap().value, 0.0);
    }
    for r in [1.5, 4.0, 30.0] {
        let t = characteristic(&id(), Target::Infinity, r, &cfg()).unwrap().value;
        assert!((t - r.ln()).abs() < 1e-12);
    }
}

#[test]
fn jensen_with_empty_divisor() {
    let f = Rational::from_poly(LeftPoly::linear(Quaternion::real(5.0)));
    let rep = verify_jensen(&f, 2.0, &cfg(), KernelConvention::CorrectedFactor1).unwrap();
    assert_eq!(rep.divisor_sum, 0.0);
    assert!(rep.within_sigma(3.0), "{rep:?}");
}

#[test]
fn harmonic_examples() {
    let a = Quaternion::new(0.5, 0.7, 0.0, 0.0);
    let h = harmonic_remainder(&id(), Target::Finite(a), 2.0).unwrap();
    assert!((h - 0.24 / 0.5476).abs() < 1e-10);
    assert_eq!(harmonic_remainder(&sphere_zero(), Target::Infinity, 3.0).unwrap(), 0.0);
    let f = Rational::from_poly(LeftPoly::linear(Quaternion::new(0.1, -0.6, 0.3, 0.2)));
    for t in [Quaternion::new(1.2, 0.0, 0.5, 0.0), Quaternion::new(-0.3, 0.4, 0.0, 0.9)] {
        let h = harmonic_remainder(&f, Target::Finite(t), 1.5).unwrap();
        let o = harmonic_oracle(&f, Target::Finite(t), 1.5).unwrap();
        assert!(((h - o) / o).abs() <= 1e-5);
    }
}

#[test]
fn fmt_forms() {
    let f = sphere_zero();
    let radii = log_spaced(2.0, 50.0, 6);
    let t = verify_fmt(&f, Target::Infinity, &radii, &cfg(), FmtForm::Three).unwrap();
    assert!(t.rows.iter().all(|r| r.residual.abs() < 1e-12));

    let g = Rational::from_poly(LeftPoly::new(vec![
        Quaternion::new(0.2, 0.3, 0.0, 0.0),
        Quaternion::new(0.0, 0.0, 0.5, 0.0),
        Quaternion::ONE,
    ]));
    let a = Target::Finite(Quaternion::new(0.4, 0.0, 0.0, 0.6));
    let one = verify_fmt(&g, a, &radii, &cfg(), FmtForm::One).unwrap();
    let c = one.envelope_constant.unwrap();
    for row in &one.rows {
        assert!(row.residual.abs() <= row.envelope.unwrap() + c + 1e-12);
    }
    let two = verify_fmt(&g, a, &radii, &cfg(), FmtForm::Two).unwrap();
    assert_eq!(two.rows.len(), radii.len());
}

#[test]
fn n_bound_examples() {
    let radii = log_spaced(2.0, 40.0, 8);
    let rep = n_bound_check(&sphere_zero(), Target::Finite(Quaternion::ONE), &radii, &cfg()).unwrap();
    assert!(rep.slope.abs() < 0.05, "{rep:?}");

    let no_points = Rational::from_poly(LeftPoly::constant(Quaternion::real(2.0)));
    let rep = n_bound_check(&no_points, Target::Finite(Quaternion::ONE), &radii, &cfg()).unwrap();
    assert!(rep.rows.iter().all(|r| r.n == 0.0));

    // f = q - c, a = c: the a-point is 2c. Jensen for f gives
    // T(f, r) = log r + k/(4 r^2) with k = 2 Re(c)^2 - |c|^2, and the r^2
    // parts of N and H cancel, so N - T - H = -log|2c| + 3k/(4 r^2).
    let c = Quaternion::new(0.3, 0.2, -0.1, 0.0);
    let lin = Rational::from_poly(LeftPoly::linear(c));
    let rep = n_bound_check(&lin, Target::Finite(c), &radii, &cfg()).unwrap();
    let k = 2.0 * c.w * c.w - c.norm_sqr();
    for row in &rep.rows {
        let exact = -(2.0 * c.norm()).ln() + 3.0 * k / (4.0 * row.r * row.r);
        assert!((row.gap - exact).abs() <= 3.0 * row.t_se + 1e-12, "{row:?} vs {exact}");
    }
}

#[test]
fn profile_columns() {
    let radii = log_spaced(2.0, 50.0, 8);
    let p = nevanlinna_profile(&sphere_zero(), Target::Finite(Quaternion::ONE), &radii, &cfg()).unwrap();
    for w in p.rows.windows(2) {
        assert!(w[1].big_n >= w[0].big_n);
    }
    for row in &p.rows {
        assert!(row.h >= 0.0);
        assert!(row.m >= 0.0);
    }
    assert!(nevanlinna_profile(&sphere_zero(), Target::Infinity, &[2.0, 1.0], &cfg()).is_err());
}
