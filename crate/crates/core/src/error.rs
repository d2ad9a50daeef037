use alloc::string::String;
use core::fmt;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A distribution with no symbols.
    EmptyAlphabet,
    /// A symbol label occurs twice.
    DuplicateLabel(String),
    /// A negative or non-finite probability.
    InvalidProbability(f64),
    /// All probabilities are zero.
    ZeroMass,
    /// Label and probability lists differ in length, or two pmfs live on different alphabets.
    AlphabetMismatch,
    /// A NaN order, or a negative order where only `[0, inf]` is meaningful.
    InvalidOrder,
    /// Enumeration would exceed the configured atom guard.
    GuardExceeded { requested: u128, limit: u128 },
    /// The rate sits exactly on the `H0(P)/H0(Q)` boundary where the limit is undetermined.
    KnifeEdge { rate: f64 },
    /// Interval endpoints supplied in the wrong order.
    ArgumentOrder,
    /// A parameter outside its domain.
    InvalidArgument(&'static str),
    /// The requested code cannot be built for these parameters.
    Infeasible(&'static str),
    /// An induced distribution whose pieces do not cover its target blocks.
    GranularityMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyAlphabet => write!(f, "empty alphabet"),
            Error::DuplicateLabel(l) => write!(f, "duplicate label `{l}`"),
            Error::InvalidProbability(x) => write!(f, "invalid probability {x}"),
            Error::ZeroMass => write!(f, "all probabilities are zero"),
            Error::AlphabetMismatch => write!(f, "alphabet mismatch"),
            Error::InvalidOrder => write!(f, "invalid order"),
            Error::GuardExceeded { requested, limit } => {
                write!(f, "enumeration of {requested} atoms exceeds guard {limit}")
            }
            Error::KnifeEdge { rate } => {
                write!(f, "rate {rate} lies on the H0(P)/H0(Q) boundary; the limit is undetermined")
            }
            Error::ArgumentOrder => write!(f, "interval endpoints out of order"),
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
            Error::Infeasible(m) => write!(f, "infeasible: {m}"),
            Error::GranularityMismatch => write!(f, "induced pieces do not match target block sizes"),
        }
    }
}

impl core::error::Error for Error {}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn messages() {
        let e = Error::GuardExceeded { requested: 11, limit: 10 };
        assert!(e.to_string().contains("guard 10"));
        assert_eq!(Error::EmptyAlphabet.to_string(), "empty alphabet");
    }
}
