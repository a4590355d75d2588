use thiserror::Error;

/// Errors raised by the embedding, extraction, codec and analysis routines.
///
/// Variant names are stable: the CLI prints them verbatim so scripts can
/// match on the failure kind.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("NoMagic: no hidden frame present")]
    NoMagic,
    #[error("CorruptFrame: {0}")]
    CorruptFrame(String),
    #[error("CapacityExceeded: capacity {capacity} bytes, requested {requested} bytes")]
    CapacityExceeded { capacity: usize, requested: usize },

    #[error("UnsupportedBmp: {0}")]
    UnsupportedBmp(String),
    #[error("UnsupportedWav: {0}")]
    UnsupportedWav(String),
    #[error("Truncated: {0}")]
    Truncated(String),
    #[error("BadMagic: {0}")]
    BadMagic(String),

    #[error("NoTrailer: no appended data after the host file")]
    NoTrailer,
    #[error("UnsupportedChar: {0:?} is outside printable ASCII")]
    UnsupportedChar(char),
    #[error("AudioTooShort: {samples} samples, need at least {needed}")]
    AudioTooShort { samples: usize, needed: usize },

    #[error("MalformedPacket: record {index}: {reason}")]
    MalformedPacket { index: usize, reason: String },
    #[error("FieldOutOfRange: record {index}: {reason}")]
    FieldOutOfRange { index: usize, reason: String },

    #[error("AlphabetTooSmall: need at least 2 distinct letters, found {0}")]
    AlphabetTooSmall(usize),
    #[error("UnknownLetter: {0:?} is not in the code table")]
    UnknownLetter(char),
    #[error("DanglingBits: trailing bits {0:?} match no code")]
    DanglingBits(String),
    #[error("NotDivisible: {value} is not a multiple of beta {beta}")]
    NotDivisible { value: String, beta: u64 },
    #[error("MalformedCsv: line {line}: {reason}")]
    MalformedCsv { line: usize, reason: String },
    #[error("InvalidTable: {0}")]
    InvalidTable(String),

    #[error("DegenerateHistogram: {0} usable value pairs, need at least 2")]
    DegenerateHistogram(usize),

    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("Io: {0}")]
    Io(String),
}

impl Error {
    /// The variant name, as printed at the start of the display form.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NoMagic => "NoMagic",
            Error::CorruptFrame(_) => "CorruptFrame",
            Error::CapacityExceeded { .. } => "CapacityExceeded",
            Error::UnsupportedBmp(_) => "UnsupportedBmp",
            Error::UnsupportedWav(_) => "UnsupportedWav",
            Error::Truncated(_) => "Truncated",
            Error::BadMagic(_) => "BadMagic",
            Error::NoTrailer => "NoTrailer",
            Error::UnsupportedChar(_) => "UnsupportedChar",
            Error::AudioTooShort { .. } => "AudioTooShort",
            Error::MalformedPacket { .. } => "MalformedPacket",
            Error::FieldOutOfRange { .. } => "FieldOutOfRange",
            Error::AlphabetTooSmall(_) => "AlphabetTooSmall",
            Error::UnknownLetter(_) => "UnknownLetter",
            Error::DanglingBits(_) => "DanglingBits",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::MalformedCsv { .. } => "MalformedCsv",
            Error::InvalidTable(_) => "InvalidTable",
            Error::DegenerateHistogram(_) => "DegenerateHistogram",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Io(_) => "Io",
        }
    }

    /// True for the "nothing hidden here" outcomes, as opposed to damaged input.
    pub fn is_not_found(&self) -> bool {
        matches!(self, Error::NoMagic | Error::NoTrailer)
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
