use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of a special function.
    Domain {
        function: &'static str,
        arg: f64,
    },
    /// A coordinate vector violates its ordering or positivity invariant.
    InvalidCoordinates(&'static str),
    /// Operation needs an odd number of cusps.
    EvenCusps(usize),
    /// Operation needs an even number of cusps.
    OddCusps(usize),
    /// Matrix dimension has the wrong parity.
    OddDimension(usize),
    EvenDimension(usize),
    /// Recursive Pfaffian is only offered for small matrices.
    DimensionTooLarge {
        dim: usize,
        max: usize,
    },
    LengthMismatch {
        left: usize,
        right: usize,
    },
    /// Shear coordinates do not sum to the perimeter.
    Constraint {
        sum: f64,
        perimeter: f64,
    },
    /// Parameter out of the supported range (cusp count, sample size, ...).
    Unsupported(&'static str),
    NegativeInput(&'static str),
    /// An adaptive procedure stopped before reaching its tolerance.
    Convergence {
        value: f64,
        error_bound: f64,
    },
    /// Richardson sequence did not settle.
    NonMonotone,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { function, arg } => {
                write!(f, "{function}: argument {arg} outside domain")
            }
            Error::InvalidCoordinates(what) => write!(f, "invalid coordinates: {what}"),
            Error::EvenCusps(n) => write!(f, "operation requires odd cusp count, got {n}"),
            Error::OddCusps(n) => write!(f, "operation requires even cusp count, got {n}"),
            Error::OddDimension(m) => write!(f, "matrix dimension {m} must be even"),
            Error::EvenDimension(m) => write!(f, "matrix dimension {m} must be odd"),
            Error::DimensionTooLarge { dim, max } => {
                write!(f, "dimension {dim} exceeds recursive limit {max}")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::Constraint { sum, perimeter } => {
                write!(
                    f,
                    "shear coordinates sum to {sum}, expected perimeter {perimeter}"
                )
            }
            Error::Unsupported(what) => write!(f, "unsupported parameters: {what}"),
            Error::NegativeInput(what) => write!(f, "negative input: {what}"),
            Error::Convergence { value, error_bound } => write!(
                f,
                "did not converge: value {value}, error bound {error_bound}"
            ),
            Error::NonMonotone => f.write_str("extrapolation sequence is not monotone"),
        }
    }
}

impl core::error::Error for Error {}
