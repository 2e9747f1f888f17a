//! The quaternionic Nevanlinna functions `N`, `m`, `H`, `T`, the Jensen
//! formula with total order, and the First Main Theorem diagnostics.
//!
//! Everything with a closed form (kernel sums, counting functions, the
//! harmonic remainder) is computed without sampling. Boundary means come
//! from [`crate::integral`], and two calls with the same
//! [`IntegratorConfig`](crate::integral::IntegratorConfig) share nodes.

mod algebra;
mod characteristic;
mod fmt;
mod harmonic;
mod jensen;
mod oracle;
mod weil;

pub use algebra::{characteristic_algebra_suite, AlgebraCheck, AlgebraReport, CheckKind, EXACT_TOL};
pub use characteristic::{
    admissible_radii, characteristic, counting_n, divisor_for, log_spaced, nevanlinna_profile,
    proximity, proximity_symmetrized, NevanlinnaProfile, ProfileRow,
};
pub use fmt::{
    linear_fit, mpb_defect, n_bound_check, verify_fmt, FmtForm, FmtRow, FmtTable, NBoundReport,
    NBoundRow,
};
pub use harmonic::{
    harmonic_from_roots, harmonic_remainder, harmonic_remainder_deflated, jensen_harmonic_terms, laplacian_from_roots,
};
pub use jensen::{
    counting_arbiter, verify_jensen, verify_jensen_with, ArbiterReport, JensenReport,
    KernelConvention,
};
pub use oracle::{fd_laplacian_log_sym, harmonic_oracle};
pub use weil::{log_plus, Offset, WeilFunction, WeilKind};

use std::fmt as stdfmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::quat::Quaternion;

/// A value in `H u {inf}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Finite(Quaternion),
    Infinity,
}

impl Target {
    pub fn finite(&self) -> Option<Quaternion> {
        match self {
            Target::Finite(q) => Some(*q),
            Target::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Target::Infinity)
    }
}

impl From<Quaternion> for Target {
    fn from(q: Quaternion) -> Self {
        Target::Finite(q)
    }
}

impl stdfmt::Display for Target {
    fn fmt(&self, f: &mut stdfmt::Formatter<'_>) -> stdfmt::Result {
        match self {
            Target::Finite(q) => write!(f, "{q}"),
            Target::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TargetRepr {
    Finite(Quaternion),
    Named(String),
}

impl Serialize for Target {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Target::Finite(q) => TargetRepr::Finite(*q).serialize(s),
            Target::Infinity => TargetRepr::Named("inf".into()).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Target {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match TargetRepr::deserialize(d)? {
            TargetRepr::Finite(q) => Ok(Target::Finite(q)),
            TargetRepr::Named(s) if s == "inf" => Ok(Target::Infinity),
            TargetRepr::Named(s) => Err(serde::de::Error::custom(format!(
                "expected [w,x,y,z] or \"inf\", got {s:?}"
            ))),
        }
    }
}
