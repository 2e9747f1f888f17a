//! Finite-difference check of the harmonic remainder.

use super::Target;
use crate::error::Result;
use crate::poly::Rational;
use crate::quat::Quaternion;

/// Central-difference `Lap4 log|h^s|` at 0 on the 9-point stencil
/// `{0, +-step e_i}`.
pub fn fd_laplacian_log_sym(h: &Rational, step: f64) -> Result<f64> {
    let (ps, s2) = h.symmetrized_parts()?;
    let u = |q: Quaternion| (ps.eval_quat(q).norm() / s2.eval_quat(q).norm()).ln();
    let u0 = u(Quaternion::ZERO);
    let axes = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let sum: f64 = axes
        .iter()
        .map(|&e| u(e * step) + u(e * -step) - 2.0 * u0)
        .sum();
    Ok(sum / (step * step))
}

/// `-(r^2/16)` times the finite-difference Laplacian of `log|(f - a)^s|`,
/// with step `1e-4 (1 + |f(0) - a|)`.
pub fn harmonic_oracle(f: &Rational, a: Target, r: f64) -> Result<f64> {
    let Target::Finite(a) = a else {
        return Ok(0.0);
    };
    let h = f.sub_const(a);
    let step = 1e-4 * (1.0 + h.eval(Quaternion::ZERO)?.norm());
    Ok(-r * r / 16.0 * fd_laplacian_log_sym(&h, step)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nevanlinna::harmonic_remainder;
    use crate::poly::LeftPoly;

    #[test]
    fn linear_case() {
        let f = Rational::from_poly(LeftPoly::identity());
        let a = Target::Finite(Quaternion::new(0.5, 0.7, 0.0, 0.0));
        let h = harmonic_remainder(&f, a, 2.0).unwrap();
        let o = harmonic_oracle(&f, a, 2.0).unwrap();
        assert!(((h - o) / h).abs() < 1e-5, "{h} vs {o}");
    }

    #[test]
    fn quadratic_minus_constant() {
        // Pure slice function with a quaternionic shift.
        let f = Rational::from_poly(LeftPoly::new(vec![
            Quaternion::real(0.2),
            Quaternion::new(0.0, 1.0, 0.5, 0.0),
            Quaternion::new(0.8, 0.0, 0.0, -0.6),
        ]));
        let a = Target::Finite(Quaternion::new(-0.7, 0.1, 0.3, 0.4));
        let h = harmonic_remainder(&f, a, 1.0).unwrap();
        let o = harmonic_oracle(&f, a, 1.0).unwrap();
        assert!(((h - o) / h).abs() < 1e-5, "{h} vs {o}");
    }
}
