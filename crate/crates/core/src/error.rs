use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    EmptyFrame,
    FrameTooLarge { atoms: usize },
    EmptyAtomLabel,
    DuplicateAtom(String),
    UnknownAtom(String),
    TooFewFactors,
    /// Two values built on different frames were combined.
    FrameMismatch,
    /// Vacuous extension target does not contain the source factors.
    IncompatibleFrames,
    SubsetOutOfRange { bits: u32, atoms: usize },
    InvalidMass(f64),
    EmptySetMass,
    NotNormalized { total: f64 },
    TooFewSources,
    TooManyTuples { tuples: u128, limit: u64 },
    FactorOutOfRange(f64),
    /// Every product was suppressed by importance discounting.
    SuppressedEvidence,
    ZeroDenominator,
    InvalidInterval { lo: f64, hi: f64 },
    InvalidEpsilon(f64),
    InvalidLabelSet,
    LabelOutOfRange(f64),
    InvalidHypothesis(String),
    UnsupportedRule,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyFrame => write!(f, "frame must contain at least one atom"),
            Error::FrameTooLarge { atoms } => {
                write!(f, "frame has {atoms} atoms, limit is {}", crate::MAX_ATOMS)
            }
            Error::EmptyAtomLabel => write!(f, "atom labels must be non-empty"),
            Error::DuplicateAtom(l) => write!(f, "duplicate atom label `{l}`"),
            Error::UnknownAtom(l) => write!(f, "unknown atom `{l}`"),
            Error::TooFewFactors => write!(f, "a product frame needs at least two factors"),
            Error::FrameMismatch => write!(f, "operands belong to different frames"),
            Error::IncompatibleFrames => {
                write!(f, "source frame factors are not factors of the target frame")
            }
            Error::SubsetOutOfRange { bits, atoms } => {
                write!(f, "subset mask {bits:#x} exceeds a frame of {atoms} atoms")
            }
            Error::InvalidMass(m) => write!(f, "mass {m} is outside [0, 1]"),
            Error::EmptySetMass => write!(f, "mass committed to the empty set"),
            Error::NotNormalized { total } => write!(f, "masses sum to {total}, expected 1"),
            Error::TooFewSources => write!(f, "fusion needs at least two sources"),
            Error::TooManyTuples { tuples, limit } => {
                write!(f, "{tuples} focal tuples exceed the enumeration limit {limit}")
            }
            Error::FactorOutOfRange(x) => write!(f, "discount factor {x} is outside [0, 1]"),
            Error::SuppressedEvidence => write!(f, "fully suppressed evidence: total mass is 0"),
            Error::ZeroDenominator => write!(f, "zero denominator in proportional redistribution"),
            Error::InvalidInterval { lo, hi } => write!(f, "invalid interval [{lo}, {hi}]"),
            Error::InvalidEpsilon(e) => write!(f, "invalid epsilon {e}"),
            Error::InvalidLabelSet => write!(f, "a label set needs at least one interior label"),
            Error::LabelOutOfRange(x) => write!(f, "label value {x} is out of range"),
            Error::InvalidHypothesis(n) => {
                write!(f, "hypothesis `{n}` must be non-empty and different from the full frame")
            }
            Error::UnsupportedRule => write!(f, "rule not supported here"),
        }
    }
}

impl core::error::Error for Error {}
