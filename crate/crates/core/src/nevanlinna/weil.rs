//! Weil functions: `-log|q - a|` near `a` plus a continuous remainder.

use std::fmt;
use std::sync::Arc;

use super::Target;
use crate::quat::Quaternion;

/// `log+ x = max(0, log x)`.
pub fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// Offset added to the analytic Weil function; `None` stands for `inf`.
pub type Offset = Arc<dyn Fn(Option<Quaternion>) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum WeilKind {
    /// `log+(1/|q - a|)`, or `log+|q|` for `a = inf`; zero at `q = inf`
    /// when `a` is finite.
    Analytic,
    /// Analytic plus a bounded continuous offset.
    Custom(Offset),
}

impl fmt::Debug for WeilKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeilKind::Analytic => f.write_str("Analytic"),
            WeilKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeilFunction {
    pub kind: WeilKind,
    pub singularity: Target,
}

impl WeilFunction {
    pub fn analytic(singularity: Target) -> Self {
        WeilFunction {
            kind: WeilKind::Analytic,
            singularity,
        }
    }

    pub fn custom(singularity: Target, offset: Offset) -> Self {
        WeilFunction {
            kind: WeilKind::Custom(offset),
            singularity,
        }
    }

    /// The chordal Weil function `1/2 log(1 + |q - a|^{-2})`
    /// (`1/2 log(1 + |q|^2)` for `a = inf`), whose offset from the analytic
    /// one lies in `[0, log(2)/2]`.
    pub fn chordal(singularity: Target) -> Self {
        let offset: Offset = match singularity {
            Target::Finite(a) => Arc::new(move |q: Option<Quaternion>| match q {
                None => 0.0,
                Some(q) => {
                    let d2 = (q - a).norm_sqr();
                    0.5 * (1.0 + 1.0 / d2).ln() - log_plus(1.0 / d2.sqrt())
                }
            }),
            Target::Infinity => Arc::new(|q: Option<Quaternion>| match q {
                None => 0.0,
                Some(q) => {
                    let m2 = q.norm_sqr();
                    0.5 * m2.ln_1p() - log_plus(m2.sqrt())
                }
            }),
        };
        WeilFunction::custom(singularity, offset)
    }

    /// The analytic part at `q` (`None` = `inf`); `+inf` at the singularity.
    pub fn analytic_value(&self, q: Option<Quaternion>) -> f64 {
        match (self.singularity, q) {
            (Target::Finite(_), None) => 0.0,
            (Target::Finite(a), Some(q)) => {
                let d = (q - a).norm();
                if d == 0.0 {
                    f64::INFINITY
                } else {
                    log_plus(1.0 / d)
                }
            }
            (Target::Infinity, None) => f64::INFINITY,
            (Target::Infinity, Some(q)) => log_plus(q.norm()),
        }
    }

    pub fn offset(&self, q: Option<Quaternion>) -> f64 {
        match &self.kind {
            WeilKind::Analytic => 0.0,
            WeilKind::Custom(off) => off(q),
        }
    }

    pub fn value(&self, q: Option<Quaternion>) -> f64 {
        self.analytic_value(q) + self.offset(q)
    }

    /// The value, or `None` if `q` is within `tol` of the singularity
    /// (distance measured in `q` near a finite `a`, and as `|q| > 1/tol`
    /// near `inf`).
    pub fn eval_at(&self, q: Option<Quaternion>, tol: f64) -> Option<f64> {
        let near = match (self.singularity, q) {
            (Target::Finite(_), None) => false,
            (Target::Finite(a), Some(q)) => (q - a).norm() < tol,
            (Target::Infinity, None) => true,
            (Target::Infinity, Some(q)) => !(q.norm() * tol < 1.0),
        };
        if near {
            None
        } else {
            Some(self.value(q))
        }
    }

    /// `sup |offset|` over `points`, skipping the singularity itself.
    pub fn max_offset(&self, points: &[Quaternion]) -> f64 {
        points
            .iter()
            .filter(|&&q| self.singularity.finite() != Some(q))
            .map(|&q| self.offset(Some(q)).abs())
            .fold(0.0, f64::max)
    }
}
