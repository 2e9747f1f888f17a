//! Zero/pole divisors by total order, and the counting functions built on
//! them.
//!
//! The total order of `f = g * h^{-*}` at `S_z` is
//! `mult_z(g^s) - mult_z(h^s)` for nonreal `z`, and half of that at real
//! points. The origin is kept apart from the sphere list.

mod counting;
mod roots;

pub use counting::{
    a_count, a_re_count, analytic_characterization_check, angular_identity_check, angular_term,
    check_boundary, counting_curve, jensen_kernel, n_count, n_integrated, n_via_unintegrated,
    real_kernel, AnalyticCharacterization, CountingCurve, CurveKind,
};
pub use roots::{complex_roots, CLUSTER_TOL};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{LeftPoly, Rational, RealPoly};
use crate::quat::SliceComplex;

/// Which part of a signed divisor is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Zero,
    Pole,
}

impl Side {
    /// `max(0, order)` for zeros, `max(0, -order)` for poles.
    pub fn count(self, order: i32) -> i64 {
        match self {
            Side::Zero => order.max(0) as i64,
            Side::Pole => (-order).max(0) as i64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub re: f64,
    pub im: f64,
    pub order: i32,
}

impl DivisorEntry {
    pub fn new(sphere: SliceComplex, order: i32) -> Self {
        DivisorEntry {
            re: sphere.re,
            im: sphere.im,
            order,
        }
    }

    pub fn sphere(&self) -> SliceComplex {
        SliceComplex::new(self.re, self.im)
    }

    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Signed total orders per sphere; positive for zeros, negative for poles.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SphereDivisor {
    pub entries: Vec<DivisorEntry>,
    #[serde(default)]
    pub origin_order: i32,
}

impl SphereDivisor {
    pub fn new(entries: Vec<DivisorEntry>, origin_order: i32) -> Self {
        let mut d = SphereDivisor {
            entries,
            origin_order,
        };
        d.entries.retain(|e| e.order != 0);
        d.entries
            .sort_by(|a, b| a.modulus().total_cmp(&b.modulus()).then(a.re.total_cmp(&b.re)));
        d
    }

    pub fn empty() -> Self {
        SphereDivisor::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.origin_order == 0
    }

    /// Entrywise sum, merging spheres closer than the root clustering radius.
    pub fn merged(&self, other: &SphereDivisor) -> SphereDivisor {
        let mut out = self.entries.clone();
        for e in &other.entries {
            match out.iter_mut().find(|x| same_sphere(x.sphere(), e.sphere())) {
                Some(x) => x.order += e.order,
                None => out.push(*e),
            }
        }
        SphereDivisor::new(out, self.origin_order + other.origin_order)
    }

    pub fn scaled(&self, k: i32) -> SphereDivisor {
        SphereDivisor::new(
            self.entries
                .iter()
                .map(|e| DivisorEntry { order: e.order * k, ..*e })
                .collect(),
            self.origin_order * k,
        )
    }

    pub fn negated(&self) -> SphereDivisor {
        self.scaled(-1)
    }

    /// Order recorded for the sphere matching `s`, or 0.
    pub fn order_at(&self, s: SliceComplex) -> i32 {
        self.entries
            .iter()
            .find(|e| same_sphere(e.sphere(), s))
            .map_or(0, |e| e.order)
    }
}

fn same_sphere(a: SliceComplex, b: SliceComplex) -> bool {
    let tol = CLUSTER_TOL * (1.0 + a.modulus().max(b.modulus()));
    (a.re - b.re).hypot(a.im - b.im) <= tol
}

/// Roots of `p^s` with multiplicities (origin included), using `p^s = p^2`
/// for real `p`.
fn symmetrized_roots(p: &LeftPoly) -> Result<Vec<(Complex64, usize)>> {
    match p.to_real() {
        Some(r) => Ok(complex_roots(&r)?
            .into_iter()
            .map(|(z, m)| (z, 2 * m))
            .collect()),
        None => complex_roots(&p.symmetrize()?),
    }
}

/// Total-order divisor of `f = g * h^{-*}`.
pub fn total_order_divisor(f: &Rational) -> Result<SphereDivisor> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut acc: Vec<(SliceComplex, i64)> = Vec::new();
    let mut push = |z: Complex64, k: i64| {
        if z.im < 0.0 {
            return;
        }
        let s = SliceComplex::from_complex(z);
        match acc.iter_mut().find(|(t, _)| same_sphere(*t, s)) {
            Some(slot) => slot.1 += k,
            None => acc.push((s, k)),
        }
    };
    for (z, m) in symmetrized_roots(f.num())? {
        push(z, m as i64);
    }
    for (z, m) in symmetrized_roots(f.den())? {
        push(z, -(m as i64));
    }
    let mut origin = 0;
    let mut entries = Vec::new();
    for (s, k) in acc {
        if k == 0 {
            continue;
        }
        if s.im == 0.0 {
            if k % 2 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "odd symmetrized multiplicity {k} at real point {}",
                    s.re
                )));
            }
            if s.re == 0.0 {
                origin = (k / 2) as i32;
                continue;
            }
            entries.push(DivisorEntry::new(s, (k / 2) as i32));
        } else {
            entries.push(DivisorEntry::new(s, k as i32));
        }
    }
    Ok(SphereDivisor::new(entries, origin))
}

/// Splitting of a nonreal zero sphere into a spherical part and an
/// isolated chain: `g = ((q - z)^s)^m * g1` with `g1` vanishing at exactly
/// `n` points of the sphere counted with multiplicity, so the total order
/// is `2m + n` while the isolated-plus-spherical count is `m + n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainFactorization {
    pub sphere: SliceComplex,
    pub total_order: i32,
    pub spherical: i32,
    pub isolated: i32,
}

impl ChainFactorization {
    /// `m + n`, the count that treats a spherical zero once.
    pub fn multiplicity_count(&self) -> i32 {
        self.spherical + self.isolated
    }
}

/// Chain factorization of the numerator of `f` at each nonreal zero sphere.
pub fn chain_factorization(f: &Rational) -> Result<Vec<ChainFactorization>> {
    let d = total_order_divisor(f)?;
    let g = f.num();
    let mut out = Vec::new();
    for e in d.entries.iter().filter(|e| e.order > 0 && e.im > 0.0) {
        let t = RealPoly::new(vec![e.re * e.re + e.im * e.im, -2.0 * e.re, 1.0]);
        let mut m = 0;
        let mut cur = g.clone();
        let scale = g.scale();
        loop {
            if 2 * (m + 1) > e.order {
                break;
            }
            let (quot, rem) = cur.div_rem_real(&t)?;
            let tol = 1e-7 * scale * (1.0 + e.modulus()).powi(g.degree().unwrap_or(0) as i32);
            if rem.scale() > tol {
                break;
            }
            cur = quot;
            m += 1;
        }
        out.push(ChainFactorization {
            sphere: e.sphere(),
            total_order: e.order,
            spherical: m,
            isolated: e.order - 2 * m,
        });
    }
    Ok(out)
}
