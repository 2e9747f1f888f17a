use thiserror::Error;

/// Errors raised by the quaternionic function model, divisor bookkeeping and
/// the spherical integrator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero quaternion")]
    DivisionByZero,
    #[error("{0} is not a unit imaginary quaternion")]
    NotUnitImaginary(String),
    #[error("function evaluated at a pole (|h^s(q)| = {modulus:e})")]
    EvalAtPole { modulus: f64 },
    #[error("symmetrization has non-real residue {residue:e}")]
    SymmetrizationNotReal { residue: f64 },
    #[error("spherical derivative is undefined on the real axis")]
    RealPointDegenerate,
    #[error("spherical conjugate undefined at a zero or pole of f^s")]
    UndefinedAtZeroPole,
    #[error("sphere centre must be nonzero")]
    ZeroCenter,
    #[error("degenerate linear fractional transform (Dieudonne determinant {0:e})")]
    DegenerateTransform(f64),
    #[error("the zero function has no *-reciprocal")]
    ZeroFunctionReciprocal,
    #[error("denominator must not be the zero polynomial")]
    ZeroDenominator,
    #[error("root finding on the zero polynomial")]
    ZeroPolynomial,
    #[error("divisor sphere of modulus {modulus} lies on the boundary radius {radius}")]
    BoundaryDivisor { modulus: f64, radius: f64 },
    #[error("too many rejected samples: {rejected} of {samples}")]
    TooManyRejections { rejected: usize, samples: usize },
    #[error("0 is a zero or pole of the function (order {order}); deflate first")]
    CenterIsZeroOrPole { order: i32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
