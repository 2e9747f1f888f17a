//! Jensen formula with total order, and the counting-convention arbiter.

use serde::{Deserialize, Serialize};

use super::harmonic::jensen_harmonic_terms;
use crate::divisor::{chain_factorization, check_boundary, jensen_kernel, total_order_divisor, DivisorEntry};
use crate::error::{Error, Result};
use crate::integral::{mean_log_abs_pair, IntegratorConfig, SphericalMean};
use crate::poly::Rational;
use crate::quat::{Quaternion, SliceComplex};

/// Weight of each divisor sphere in the kernel sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum KernelConvention {
    /// One kernel per unit of total order.
    #[default]
    CorrectedFactor1,
    /// Nonreal spheres weighted twice, real points once.
    PerottiFactor2,
}

impl KernelConvention {
    fn weight(self, e: &DivisorEntry) -> f64 {
        match self {
            KernelConvention::CorrectedFactor1 => 1.0,
            KernelConvention::PerottiFactor2 if e.im > 0.0 => 2.0,
            KernelConvention::PerottiFactor2 => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JensenReport {
    pub radius: f64,
    /// `log|g(0)| + m log r` where `f = q^m g`; `log|f(0)|` when `m = 0`.
    pub lhs: f64,
    pub origin_order: i32,
    pub boundary_f: SphericalMean,
    pub boundary_fsf: SphericalMean,
    /// `(boundary_f + boundary_fsf) / 2`, with its own standard error.
    pub boundary_term: SphericalMean,
    /// Laplacian terms of the deflated function.
    pub harmonic: f64,
    /// `sum weight * ordt * J(z, r)` over `0 < |z| < r`.
    pub divisor_sum: f64,
    /// `boundary_term + harmonic - divisor_sum - lhs`.
    pub residual: f64,
    pub kernel_convention: KernelConvention,
}

impl JensenReport {
    pub fn sigma(&self) -> f64 {
        self.boundary_term.std_error
    }

    pub fn within_sigma(&self, k: f64) -> bool {
        self.residual.abs() <= k * self.sigma()
    }
}

struct Closed {
    lhs: f64,
    origin_order: i32,
    harmonic: f64,
    spheres: Vec<DivisorEntry>,
}

fn closed_parts(f: &Rational, r: f64) -> Result<Closed> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = total_order_divisor(f)?;
    check_boundary(&d, r)?;
    let (m, g) = f.deflate_origin();
    let g0 = g.eval(Quaternion::ZERO)?;
    Ok(Closed {
        lhs: g0.norm().ln() + m as f64 * r.ln(),
        origin_order: m,
        harmonic: jensen_harmonic_terms(&g, r)?,
        spheres: d.entries.into_iter().filter(|e| e.modulus() < r).collect(),
    })
}

/// Jensen formula for `f` on `B_r`. A zero or pole at the origin is split
/// off as `q^m` and its `m log r` moved to the left side.
pub fn verify_jensen(
    f: &Rational,
    r: f64,
    cfg: &IntegratorConfig,
    kernel: KernelConvention,
) -> Result<JensenReport> {
    verify_jensen_with(f, r, cfg, kernel, |_| None)
}

/// As [`verify_jensen`], with `order_override(entry)` replacing the total
/// order of chosen spheres in the kernel sum.
pub fn verify_jensen_with(
    f: &Rational,
    r: f64,
    cfg: &IntegratorConfig,
    kernel: KernelConvention,
    order_override: impl Fn(&DivisorEntry) -> Option<i32>,
) -> Result<JensenReport> {
    let c = closed_parts(f, r)?;
    let b = mean_log_abs_pair(f, r, cfg)?;
    let mut divisor_sum = 0.0;
    for e in &c.spheres {
        let order = order_override(e).unwrap_or(e.order);
        divisor_sum += kernel.weight(e) * order as f64 * jensen_kernel(e.sphere(), r)?;
    }
    let residual = b.average.value + c.harmonic - divisor_sum - c.lhs;
    Ok(JensenReport {
        radius: r,
        lhs: c.lhs,
        origin_order: c.origin_order,
        boundary_f: b.f,
        boundary_fsf: b.f_sf,
        boundary_term: b.average,
        harmonic: c.harmonic,
        divisor_sum,
        residual,
        kernel_convention: kernel,
    })
}

/// Jensen residuals for a single zero sphere counted with weight `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArbiterReport {
    pub radius: f64,
    pub sphere: SliceComplex,
    /// Order from the symmetrization rule (real points halved).
    pub total_order: i32,
    /// `m + n` from the chain factorization `((q - z)^s)^m * chain of n`,
    /// or the isolated multiplicity at a real point.
    pub chain_count: i32,
    /// `(c, residual(c))`.
    pub candidates: Vec<(i32, f64)>,
    pub sigma: f64,
    pub best: i32,
}

/// Tries `c in {1, 2}` as the weight of the only zero sphere of `f` in
/// `B_r` and reports which one closes the Jensen formula.
pub fn counting_arbiter(f: &Rational, r: f64, cfg: &IntegratorConfig) -> Result<ArbiterReport> {
    let d = total_order_divisor(f)?;
    if d.origin_order != 0 {
        return Err(Error::CenterIsZeroOrPole {
            order: d.origin_order,
        });
    }
    let inside: Vec<&DivisorEntry> = d.entries.iter().filter(|e| e.modulus() < r).collect();
    if inside.len() != 1 || inside[0].order <= 0 {
        return Err(Error::InvalidArgument(format!(
            "arbiter needs exactly one zero sphere and no poles in B_{r}, found {}",
            inside.len()
        )));
    }
    let z = *inside[0];
    let chain_count = if z.im > 0.0 {
        chain_factorization(f)?
            .into_iter()
            .find(|c| c.sphere == z.sphere())
            .map_or(z.order, |c| c.multiplicity_count())
    } else {
        z.order
    };
    let base = verify_jensen_with(f, r, cfg, KernelConvention::CorrectedFactor1, |_| Some(0))?;
    let j = jensen_kernel(z.sphere(), r)?;
    let candidates: Vec<(i32, f64)> = (1..=2).map(|c| (c, base.residual - c as f64 * j)).collect();
    let best = candidates
        .iter()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|c| c.0)
        .expect("two candidates");
    Ok(ArbiterReport {
        radius: r,
        sphere: z.sphere(),
        total_order: z.order,
        chain_count,
        candidates,
        sigma: base.sigma(),
        best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::LeftPoly;

    const A: Quaternion = Quaternion::new(0.5, 0.7, 0.0, 0.0);

    fn cfg() -> IntegratorConfig {
        IntegratorConfig::new(100_000, 11)
    }

    #[test]
    fn linear_corrected_and_perotti() {
        let f = Rational::from_poly(LeftPoly::linear(A));
        let c = verify_jensen(&f, 2.0, &cfg(), KernelConvention::CorrectedFactor1).unwrap();
        assert!((c.lhs - (-0.150_552_546_392)).abs() < 1e-11);
        assert!((c.harmonic - 0.438_276_113_952).abs() < 1e-11);
        assert!((c.divisor_sum - 1.266_975_840_904).abs() < 1e-11);
        assert!(c.within_sigma(3.0), "{c:?}");
        let p = verify_jensen(&f, 2.0, &cfg(), KernelConvention::PerottiFactor2).unwrap();
        assert!((p.residual + 1.266_975_840_904).abs() <= 3.0 * p.sigma());
    }

    #[test]
    fn empty_divisor() {
        let f = Rational::from_poly(LeftPoly::linear(Quaternion::real(5.0)));
        let c = verify_jensen(&f, 2.0, &cfg(), KernelConvention::CorrectedFactor1).unwrap();
        assert_eq!(c.divisor_sum, 0.0);
        assert!(c.within_sigma(3.0), "{c:?}");
    }

    #[test]
    fn origin_deflation() {
        // q^2 (q - a)
        let f = Rational::from_poly(LeftPoly::monomial(2, Quaternion::ONE).star_mul(&LeftPoly::linear(A)));
        let c = verify_jensen(&f, 1.5, &cfg(), KernelConvention::CorrectedFactor1).unwrap();
        assert_eq!(c.origin_order, 2);
        assert!(c.within_sigma(3.0), "{c:?}");
    }

    #[test]
    fn boundary_divisor_rejected() {
        let f = Rational::from_poly(LeftPoly::linear(A));
        assert!(matches!(
            verify_jensen(&f, 0.74f64.sqrt(), &cfg(), KernelConvention::CorrectedFactor1),
            Err(Error::BoundaryDivisor { .. })
        ));
    }

    #[test]
    fn arbiter_cases() {
        let sph = Rational::from_poly(LeftPoly::from_real(&[1.0, 0.0, 1.0]));
        let a = counting_arbiter(&sph, 2.0, &cfg()).unwrap();
        assert_eq!(a.total_order, 2);
        assert_eq!(a.chain_count, 1);
        assert_eq!(a.best, 2);
        let dbl = Rational::from_poly(LeftPoly::linear(Quaternion::real(0.7)).star_pow(2));
        assert_eq!(counting_arbiter(&dbl, 2.0, &cfg()).unwrap().best, 2);
        let lin = Rational::from_poly(LeftPoly::linear(A));
        assert_eq!(counting_arbiter(&lin, 2.0, &cfg()).unwrap().best, 1);
    }
}
