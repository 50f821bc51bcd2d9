use core::fmt;

/// Errors reported by the estimation and simulation routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A sample or knot list was empty.
    EmptyInput,
    /// An argument was outside its documented domain.
    InvalidArgument { what: &'static str, value: f64 },
    /// The maximizer set of `step(x) - y x` is unbounded (`y <= 0`).
    UnboundedArgmax { y: f64 },
    /// Requested tolerance outside `(0, 1e-3]`.
    ToleranceOutOfRange { tol: f64 },
    /// A family specification string could not be parsed.
    FamilySpec { reason: &'static str },
    /// The series for the limit distribution did not certify the requested
    /// tolerance before the term cap.
    SeriesDidNotConverge { terms: usize, tail_bound: f64 },
    /// The majorant window did not stabilize before the doubling cap.
    StabilizationFailed { doublings: u32, arrivals: usize },
    /// The running-maximum scan exceeded its arrival budget.
    ArrivalBudgetExceeded { arrivals: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyInput => write!(f, "empty input"),
            Error::InvalidArgument { what, value } => {
                write!(f, "invalid argument: {what} = {value}")
            }
            Error::UnboundedArgmax { y } => {
                write!(f, "unbounded argmax: slope level y = {y} must be positive")
            }
            Error::ToleranceOutOfRange { tol } => {
                write!(f, "tolerance {tol} outside (0, 1e-3]")
            }
            Error::FamilySpec { reason } => write!(f, "bad family spec: {reason}"),
            Error::SeriesDidNotConverge { terms, tail_bound } => write!(
                f,
                "series did not converge: {terms} terms, tail bound {tail_bound:e}"
            ),
            Error::StabilizationFailed { doublings, arrivals } => write!(
                f,
                "majorant window not stable after {doublings} doublings ({arrivals} arrivals)"
            ),
            Error::ArrivalBudgetExceeded { arrivals } => {
                write!(f, "running-maximum scan exceeded {arrivals} arrivals")
            }
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
