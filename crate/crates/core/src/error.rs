use core::fmt;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Input outside the mathematical domain of the operation.
    Domain,
    /// An iterative solver gave up.
    Solver,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `hbar` must be finite and strictly positive.
    NonPositiveHbar(f64),
    /// The operation needs `a = sqrt(A / 2ħ²)`, which requires `A > 0`.
    NonPositiveAnisotropy(f64),
    /// A parameter or argument is NaN or infinite.
    NonFinite(&'static str),
    /// `λ² < 4`: the exponent `l` would be complex.
    ComplexBranch { lambda: f64 },
    /// Spin vector is not on the unit sphere.
    NotUnitVector { norm: f64 },
    /// Spin derivative is not tangent to the sphere.
    ConstraintViolation { dot: f64 },
    /// Radial coordinate must be strictly positive.
    NonPositiveRadius(f64),
    /// Angle of `(P, Q)` undefined at the origin.
    UndefinedAngle,
    /// The closed-form in-plane states exist only for `B = 0`.
    FieldMustVanish(f64),
    /// No sine-type Mathieu function of order zero exists.
    InvalidOrder(f64),
    /// Generic argument check failure.
    InvalidArgument(&'static str),
    /// Classical trajectory left the representable range.
    Divergence { z: f64 },
    /// Bethe root search did not produce every expected solution.
    NonConvergence { found: usize, expected: usize, best_residual: f64 },
    /// Two Bethe roots collided.
    RootCollision { separation: f64 },
    /// Fourier truncation did not settle below the tolerance.
    TruncationNotConverged { nu: f64, q: f64, size: usize },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Divergence { .. }
            | Error::NonConvergence { .. }
            | Error::RootCollision { .. }
            | Error::TruncationNotConverged { .. } => ErrorKind::Solver,
            _ => ErrorKind::Domain,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPositiveHbar(h) => write!(f, "hbar must be positive, got {h}"),
            Error::NonPositiveAnisotropy(a) => {
                write!(f, "operation requires anisotropy A > 0, got {a}")
            }
            Error::NonFinite(what) => write!(f, "{what} must be finite"),
            Error::ComplexBranch { lambda } => {
                write!(f, "lambda = {lambda} gives a complex exponent (lambda^2 < 4)")
            }
            Error::NotUnitVector { norm } => write!(f, "spin vector has norm {norm}, expected 1"),
            Error::ConstraintViolation { dot } => {
                write!(f, "derivative is not tangent to the sphere (S.S_z = {dot})")
            }
            Error::NonPositiveRadius(r) => write!(f, "radius must be positive, got {r}"),
            Error::UndefinedAngle => write!(f, "angle of (P, Q) is undefined at the origin"),
            Error::FieldMustVanish(b) => write!(f, "closed form requires B = 0, got {b}"),
            Error::InvalidOrder(nu) => write!(f, "no sine-type solution of order {nu}"),
            Error::InvalidArgument(msg) => f.write_str(msg),
            Error::Divergence { z } => write!(f, "trajectory diverged at z = {z}"),
            Error::NonConvergence { found, expected, best_residual } => write!(
                f,
                "Bethe solver found {found} of {expected} solutions (best residual {best_residual:e})"
            ),
            Error::RootCollision { separation } => {
                write!(f, "Bethe roots collided (separation {separation:e})")
            }
            Error::TruncationNotConverged { nu, q, size } => write!(
                f,
                "Mathieu truncation did not converge for nu = {nu}, q = {q} (size {size})"
            ),
        }
    }
}

impl core::error::Error for Error {}
