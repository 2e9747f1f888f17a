use proptest::prelude::*;

use quatnev::divisor::{
    n_count, n_integrated, total_order_divisor, DivisorEntry, Side, SphereDivisor,
};
use quatnev::nevanlinna::{harmonic_from_roots, harmonic_remainder, log_plus, Target};
use quatnev::poly::{spherical_conjugate, spherical_derivative, spherical_value};
use quatnev::quat::sphere_of;
use quatnev::{LeftPoly, Quaternion, Rational, RealPoly, SliceComplex, SphereSampler};

fn quat(scale: f64) -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-scale..scale).prop_map(|[w, x, y, z]| Quaternion::new(w, x, y, z))
}

fn nonreal(scale: f64) -> impl Strategy<Value = Quaternion> {
    quat(scale).prop_filter("nonreal", |q| q.im_norm() > 1e-3)
}

fn poly(max_deg: usize) -> impl Strategy<Value = LeftPoly> {
    prop::collection::vec(quat(1.0), 1..=max_deg + 1).prop_map(LeftPoly::new)
}

fn real_poly(max_deg: usize) -> impl Strategy<Value = RealPoly> {
    prop::collection::vec(-1.0f64..1.0, 1..=max_deg + 1).prop_map(RealPoly::new)
}

fn max_coeff_diff(a: &LeftPoly, b: &LeftPoly) -> f64 {
    let n = a.coeffs().len().max(b.coeffs().len());
    (0..n).map(|k| (a.coeff(k) - b.coeff(k)).norm()).fold(0.0, f64::max)
}

/// `(q - z1) * ... * (q - zn)` with every `z` nonzero.
fn linear_product(zs: &[Quaternion]) -> LeftPoly {
    zs.iter()
        .fold(LeftPoly::constant(Quaternion::ONE), |acc, z| acc.star_mul(&LeftPoly::linear(*z)))
}

fn roots() -> impl Strategy<Value = Vec<Quaternion>> {
    prop::collection::vec(quat(2.0).prop_filter("away from 0", |q| q.norm() > 0.2), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quaternion_product_is_associative_and_multiplicative(p in quat(3.0), q in quat(3.0), r in quat(3.0)) {
        let scale = p.norm() * q.norm() * r.norm() + 1e-300;
        prop_assert!(((p * q) * r - p * (q * r)).norm() <= 16.0 * f64::EPSILON * scale * 4.0);
        prop_assert!(((p * q).norm() - p.norm() * q.norm()).abs() <= 8.0 * f64::EPSILON * (1.0 + p.norm() * q.norm()));
        prop_assert!(((p * q).conj() - q.conj() * p.conj()).norm() <= 8.0 * f64::EPSILON * (1.0 + p.norm() * q.norm()));
    }

    #[test]
    fn conjugation_preserves_spheres(a in quat(3.0), b in quat(3.0).prop_filter("nonzero", |b| b.norm() > 1e-2)) {
        let c = b.inverse().unwrap() * a * b;
        let (s, t) = (sphere_of(a), sphere_of(c));
        prop_assert!((s.re - t.re).abs() <= 1e-12 * (1.0 + a.norm()));
        prop_assert!((s.im - t.im).abs() <= 1e-12 * (1.0 + a.norm()));
        prop_assert!(t.im >= 0.0);
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>(), stream in 0u64..8, r in 0.1f64..10.0) {
        let a = SphereSampler::new(r, seed, stream).sample(64);
        let b = SphereSampler::new(r, seed, stream).sample(64);
        prop_assert_eq!(&a, &b);
        for q in a {
            prop_assert!((q.norm() - r).abs() <= 1e-12 * r);
        }
    }

    #[test]
    fn star_product_laws(f in poly(6), g in poly(6), h in poly(6)) {
        let lhs = f.star_mul(&g).star_mul(&h);
        let rhs = f.star_mul(&g.star_mul(&h));
        let scale = 1.0 + f.scale() * g.scale() * h.scale();
        prop_assert!(max_coeff_diff(&lhs, &rhs) <= 1e-12 * scale * 50.0);
        let c1 = f.star_mul(&g).conjugate();
        let c2 = g.conjugate().star_mul(&f.conjugate());
        prop_assert!(max_coeff_diff(&c1, &c2) <= 1e-12 * scale);
    }

    #[test]
    fn symmetrization_is_multiplicative_in_modulus(f in poly(4), g in poly(4), q in quat(2.0)) {
        let fg = f.star_mul(&g).symmetrize().unwrap();
        let (fs, gs) = (f.symmetrize().unwrap(), g.symmetrize().unwrap());
        let lhs = fg.eval_quat(q).norm();
        let rhs = fs.eval_quat(q).norm() * gs.eval_quat(q).norm();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs) * (1.0 + q.norm()).powi(8));
    }

    #[test]
    fn real_polynomials_commute(p in real_poly(4), g in poly(4), q in quat(2.0)) {
        let pl = p.to_left();
        let a = pl.star_mul(&g);
        let b = g.star_mul(&pl);
        prop_assert!(max_coeff_diff(&a, &b) <= 1e-12 * (1.0 + p.scale() * g.scale()));
        let pointwise = p.eval_quat(q) * g.eval(q);
        prop_assert!((a.eval(q) - pointwise).norm() <= 1e-12 * (1.0 + pointwise.norm()) * (1.0 + q.norm()).powi(8));
    }

    #[test]
    fn spherical_decomposition(f in poly(5), q in nonreal(2.0)) {
        let v = spherical_value(&f, q).unwrap();
        let d = spherical_derivative(&f, q).unwrap();
        let fq = f.eval(q);
        prop_assert!((v + q.im() * d - fq).norm() <= 1e-12 * (1.0 + fq.norm()) * (1.0 + q.norm()).powi(5));
    }

    #[test]
    fn spherical_conjugate_stays_on_sphere(f in poly(4), q in nonreal(2.0)) {
        let fr = Rational::from_poly(f);
        if let Ok(s) = spherical_conjugate(&fr, q) {
            prop_assert!((s.norm() - q.norm()).abs() <= 1e-12 * (1.0 + q.norm()));
            prop_assert!((s.w - q.w).abs() <= 1e-12 * (1.0 + q.norm()));
        }
    }

    #[test]
    fn total_order_is_additive(zs in roots(), ws in roots()) {
        let f = Rational::from_poly(linear_product(&zs));
        let g = Rational::from_poly(linear_product(&ws));
        let fg = f.star_mul(&g).unwrap();
        let (df, dg, dfg) = (
            total_order_divisor(&f).unwrap(),
            total_order_divisor(&g).unwrap(),
            total_order_divisor(&fg).unwrap(),
        );
        let merged = df.merged(&dg);
        let total = |d: &SphereDivisor| d.entries.iter().map(|e| e.order).sum::<i32>();
        prop_assert_eq!(total(&dfg), total(&merged));
        for e in &merged.entries {
            prop_assert_eq!(dfg.order_at(e.sphere()), e.order);
        }
        let dc = total_order_divisor(&f.conjugate()).unwrap();
        let ds = total_order_divisor(&f.symmetrize().unwrap()).unwrap();
        for e in &df.entries {
            prop_assert_eq!(dc.order_at(e.sphere()), e.order);
            prop_assert_eq!(ds.order_at(e.sphere()), 2 * e.order);
        }
    }

    #[test]
    fn counting_is_monotone_and_continuous(
        pts in prop::collection::vec((0.1f64..5.0, 0.0f64..3.1, 1i32..4), 1..6),
        origin in 0i32..3,
    ) {
        let entries = pts
            .iter()
            .map(|&(m, t, k)| DivisorEntry::new(SliceComplex::new(m * t.cos(), m * t.sin()), k))
            .collect();
        let d = SphereDivisor::new(entries, origin);
        let mut last = n_count(&d, Side::Zero, 0.0);
        for k in 1..200 {
            let n = n_count(&d, Side::Zero, k as f64 * 0.03);
            prop_assert!(n >= last);
            last = n;
        }
        for e in &d.entries {
            let s = e.modulus();
            let lo = n_integrated(&d, Side::Zero, s * (1.0 - 1e-10)).unwrap();
            let hi = n_integrated(&d, Side::Zero, s * (1.0 + 1e-10)).unwrap();
            prop_assert!((lo - hi).abs() <= 1e-7 * (1.0 + lo.abs()));
        }
    }

    #[test]
    fn harmonic_closed_form_matches_roots(f in poly(4), a in quat(1.5), r in 0.3f64..5.0) {
        let fr = Rational::from_poly(f);
        let h0 = fr.sub_const(a).eval(Quaternion::ZERO).unwrap().norm();
        prop_assume!(h0 > 0.05);
        let h = harmonic_remainder(&fr, Target::Finite(a), r).unwrap();
        let o = harmonic_from_roots(&fr, a, r).unwrap();
        prop_assert!((h - o).abs() <= 1e-7 * (1.0 + o.abs()), "{} vs {}", h, o);
    }

    #[test]
    fn log_plus_is_nonnegative(x in 0.0f64..1e6) {
        prop_assert!(log_plus(x) >= 0.0);
        prop_assert!(log_plus(x) >= x.ln());
    }
}
