//! Semiregular rationals `f = g * h^{-*}`.
//!
//! Since `h^{-*} = h^c (h^s)^{-1}` and `h^s` has real coefficients,
//! `f = P * S^{-*}` with `P = g * h^c` and `S = h^s`; when `h` is already
//! real we take `P = g`, `S = h`. Real-coefficient functions are central for
//! `*`, so `f(q) = S(q)^{-1} P(q)` where `S(q)` lies in the slice of `q`.

use serde::{Deserialize, Serialize};

use super::{LeftPoly, RealPoly, SliceFunction};
use crate::error::{Error, Result};
use crate::quat::Quaternion;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalRepr", into = "RationalRepr")]
pub struct Rational {
    num: LeftPoly,
    den: LeftPoly,
    p: LeftPoly,
    s: RealPoly,
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: LeftPoly,
    den: LeftPoly,
}

impl TryFrom<RationalRepr> for Rational {
    type Error = Error;
    fn try_from(r: RationalRepr) -> Result<Self> {
        Rational::new(r.num, r.den)
    }
}

impl From<Rational> for RationalRepr {
    fn from(r: Rational) -> Self {
        RationalRepr {
            num: r.num,
            den: r.den,
        }
    }
}

impl From<LeftPoly> for Rational {
    fn from(p: LeftPoly) -> Self {
        Rational::from_poly(p)
    }
}

impl Rational {
    pub fn new(num: LeftPoly, den: LeftPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (p, s) = match den.to_real() {
            Some(s) => (num.clone(), s),
            None => (num.star_mul(&den.conjugate()), den.symmetrize()?),
        };
        Ok(Rational { num, den, p, s })
    }

    pub fn from_poly(p: LeftPoly) -> Self {
        Rational::new(p, LeftPoly::constant(Quaternion::ONE)).expect("unit denominator")
    }

    /// `P * S^{-*}` with real `S`.
    fn from_reduced(p: LeftPoly, s: RealPoly) -> Result<Self> {
        Rational::new(p, s.to_left())
    }

    pub fn num(&self) -> &LeftPoly {
        &self.num
    }

    pub fn den(&self) -> &LeftPoly {
        &self.den
    }

    /// `P = g * h^c` (or `g` when `h` is real).
    pub fn reduced_num(&self) -> &LeftPoly {
        &self.p
    }

    /// `S = h^s` (or `h` when `h` is real).
    pub fn reduced_den(&self) -> &RealPoly {
        &self.s
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.s.degree() == Some(0)
    }

    /// Pole test threshold `1e-12 (1 + |q|)^deg S`.
    pub fn pole_tol(&self, q_norm: f64) -> f64 {
        1e-12 * (1.0 + q_norm).powi(self.s.degree().unwrap_or(0) as i32)
    }

    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        SliceFunction::eval(self, q)
    }

    pub fn add(&self, o: &Rational) -> Result<Rational> {
        let p = &self.p.star_mul(&o.s.to_left()) + &o.p.star_mul(&self.s.to_left());
        Rational::from_reduced(p, self.s.mul(&o.s))
    }

    pub fn neg(&self) -> Rational {
        Rational {
            num: -&self.num,
            den: self.den.clone(),
            p: -&self.p,
            s: self.s.clone(),
        }
    }

    pub fn sub(&self, o: &Rational) -> Result<Rational> {
        self.add(&o.neg())
    }

    pub fn star_mul(&self, o: &Rational) -> Result<Rational> {
        Rational::from_reduced(self.p.star_mul(&o.p), self.s.mul(&o.s))
    }

    pub fn star_pow(&self, n: u32) -> Result<Rational> {
        let mut out = Rational::from_poly(LeftPoly::constant(Quaternion::ONE));
        for _ in 0..n {
            out = out.star_mul(self)?;
        }
        Ok(out)
    }

    /// `f^{-*} = S * P^c * (P^s)^{-*}`.
    pub fn star_reciprocal(&self) -> Result<Rational> {
        if self.p.is_zero() {
            return Err(Error::ZeroFunctionReciprocal);
        }
        let num = self.s.to_left().star_mul(&self.p.conjugate());
        Rational::from_reduced(num, self.p.symmetrize()?)
    }

    /// `f^c = P^c * S^{-*}`.
    pub fn conjugate(&self) -> Rational {
        Rational::from_reduced(self.p.conjugate(), self.s.clone()).expect("nonzero denominator")
    }

    /// `f^s = P^s / S^2`.
    pub fn symmetrize(&self) -> Result<Rational> {
        Rational::from_reduced(self.p.symmetrize()?.to_left(), self.s.pow(2))
    }

    /// `(f^s)` numerator and denominator as real polynomials.
    pub fn symmetrized_parts(&self) -> Result<(RealPoly, RealPoly)> {
        Ok((self.p.symmetrize()?, self.s.pow(2)))
    }

    /// `f - a = (g - a * h) * h^{-*}`.
    pub fn sub_const(&self, a: Quaternion) -> Rational {
        let num = &self.num - &self.den.scale_left(a);
        Rational::new(num, self.den.clone()).expect("nonzero denominator")
    }

    /// First `n` Taylor coefficients at 0: `f(q) = sum q^k c_k`.
    pub fn taylor(&self, n: usize) -> Result<Vec<Quaternion>> {
        let s = self.s.coeffs();
        let s0 = s.first().copied().unwrap_or(0.0);
        if s0 == 0.0 {
            return Err(Error::CenterIsZeroOrPole {
                order: -(self.s.low_order() as i32),
            });
        }
        let sk = |k: usize| s.get(k).copied().unwrap_or(0.0);
        let mut t = vec![0.0; n];
        for m in 0..n {
            let acc: f64 = (1..=m).map(|k| sk(k) * t[m - k]).sum();
            t[m] = if m == 0 { 1.0 / s0 } else { -acc / s0 };
        }
        Ok((0..n)
            .map(|m| {
                (0..=m).fold(Quaternion::ZERO, |acc, i| acc + self.p.coeff(m - i) * t[i])
            })
            .collect())
    }

    /// Splits `f = q^m g` with `g(0)` finite and nonzero; `m` counts exactly
    /// vanishing low coefficients of `P` minus those of `S`.
    pub fn deflate_origin(&self) -> (i32, Rational) {
        let mp = self.p.low_order();
        let ms = self.s.low_order();
        if mp == 0 && ms == 0 {
            return (0, self.clone());
        }
        let g = Rational::from_reduced(self.p.shift_down(mp), self.s.shift_down(ms))
            .expect("nonzero denominator");
        (mp as i32 - ms as i32, g)
    }

    /// Numerator and denominator degrees of the reduced form.
    pub fn degrees(&self) -> (Option<usize>, usize) {
        (self.p.degree(), self.s.degree().unwrap_or(0))
    }
}

impl SliceFunction for Rational {
    fn stem_parts(&self, x: f64, y: f64) -> Result<(Quaternion, Quaternion)> {
        let (p1, pd) = self.p.stem(x, y);
        if self.is_polynomial() {
            let s0 = self.s.coeffs()[0];
            return Ok((p1 / s0, pd / s0));
        }
        let (s1, sd) = self.s.stem(x, y);
        let mod2 = s1 * s1 + y * y * sd * sd;
        let modulus = mod2.sqrt();
        if modulus < self.pole_tol(x.hypot(y)) {
            return Err(Error::EvalAtPole { modulus });
        }
        let c1 = s1 / mod2;
        let d = -sd / mod2;
        Ok((p1 * c1 - pd * (y * y * d), p1 * d + pd * c1))
    }

    fn is_slice_preserving(&self) -> bool {
        self.p.is_real()
    }

    fn growth_degree(&self) -> usize {
        let (dp, ds) = self.degrees();
        dp.unwrap_or(0).saturating_sub(ds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    #[test]
    fn reciprocal_identity() {
        let f = Rational::from_poly(LeftPoly::linear(I));
        let inv = f.star_reciprocal().unwrap();
        let prod = f.star_mul(&inv).unwrap();
        let v = prod.eval(Quaternion::ONE + K).unwrap();
        assert!((v - Quaternion::ONE).norm() < 1e-10);
    }

    #[test]
    fn f_minus_f_is_zero() {
        let f = Rational::new(LeftPoly::linear(I), LeftPoly::linear(J)).unwrap();
        assert!(f.sub(&f).unwrap().num().is_zero());
    }

    #[test]
    fn symmetrized_reciprocal() {
        let a = Quaternion::new(0.5, 0.7, 0.0, 0.0);
        let f = Rational::from_poly(LeftPoly::linear(a));
        let rs = f.star_reciprocal().unwrap().symmetrize().unwrap();
        let q = Quaternion::new(0.3, -1.1, 0.4, 0.9);
        let fs = LeftPoly::linear(a).symmetrize().unwrap().eval_quat(q);
        let want = fs.inverse().unwrap();
        assert!((rs.eval(q).unwrap() - want).norm() < 1e-10);
    }

    #[test]
    fn quaternionic_denominator_eval() {
        // f = (q - i) * (q - j)^{-*}: check f * (q - j) = q - i pointwise via Prop 3.1.
        let g = LeftPoly::linear(I);
        let h = LeftPoly::linear(J);
        let f = Rational::new(g.clone(), h.clone()).unwrap();
        let back = f.star_mul(&Rational::from_poly(h)).unwrap();
        for q in [
            Quaternion::new(0.4, 0.3, -0.8, 1.2),
            Quaternion::new(-1.0, 2.0, 0.5, 0.0),
        ] {
            assert!((back.eval(q).unwrap() - g.eval(q)).norm() < 1e-12);
        }
    }

    #[test]
    fn pole_detected() {
        let f = Rational::new(LeftPoly::constant(Quaternion::ONE), LeftPoly::linear(I)).unwrap();
        assert!(matches!(f.eval(K), Err(Error::EvalAtPole { .. })));
    }

    #[test]
    fn taylor_of_geometric() {
        // 1 / (1 - q) = 1 + q + q^2 + ...
        let f = Rational::new(
            LeftPoly::constant(Quaternion::ONE),
            LeftPoly::from_real(&[1.0, -1.0]),
        )
        .unwrap();
        let t = f.taylor(4).unwrap();
        for c in t {
            assert!((c - Quaternion::ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn serde_shape() {
        let f = Rational::new(LeftPoly::linear(I), LeftPoly::from_real(&[2.0])).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with("{\"num\":"));
        let back: Rational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<Rational>("{\"num\":[[1,0,0,0]],\"den\":[]}").is_err());
    }

    #[test]
    fn deflation() {
        let f = Rational::from_poly(LeftPoly::from_real(&[0.0, 0.0, 1.0, 3.0]));
        let (m, g) = f.deflate_origin();
        assert_eq!(m, 2);
        assert_eq!(g.reduced_num(), &LeftPoly::from_real(&[1.0, 3.0]));
    }
}
