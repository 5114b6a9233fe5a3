use std::fmt;

use thiserror::Error;

/// Which optional relation of an enriched context an operation needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum RelationSlot {
    #[serde(rename = "R_box")]
    Box,
    #[serde(rename = "R_diamond")]
    Diamond,
    #[serde(rename = "R_rhd")]
    Rhd,
    #[serde(rename = "R_lhd")]
    Lhd,
}

impl RelationSlot {
    pub fn key(self) -> &'static str {
        match self {
            RelationSlot::Box => "R_box",
            RelationSlot::Diamond => "R_diamond",
            RelationSlot::Rhd => "R_rhd",
            RelationSlot::Lhd => "R_lhd",
        }
    }
}

impl fmt::Display for RelationSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Position-tagged parse failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    /// A truth algebra could not be built (bad size, kind/size mismatch, law violation).
    #[error("algebra construction: {0}")]
    Algebra(String),

    /// Malformed input data: wrong dimensions, bad indices, missing fields.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("carrier mismatch: expected {expected} elements, found {found}")]
    CarrierMismatch { expected: usize, found: usize },

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("value index {value} is not an element of a {size}-element algebra")]
    ForeignValue { value: usize, size: usize },

    #[error("the frame carries no {0} relation")]
    MissingRelation(RelationSlot),

    #[error("{0} is not I-compatible with the base context")]
    Incompatible(RelationSlot),

    #[error("atom `{0}` has no value in the valuation")]
    UnboundAtom(String),

    #[error("budget exceeded: {what} needs {required}, limit is {limit}")]
    Budget {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("parse error {0}")]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
