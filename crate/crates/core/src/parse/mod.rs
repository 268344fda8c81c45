//! Text formats: `.epc` models and ATLE formula files.

mod formula;
mod lexer;
mod model;

use thiserror::Error;

pub use formula::{parse_formula, parse_formulas};
pub use model::{parse_labeled_process, parse_model, parse_model_unvalidated, parse_process};

use crate::model::ValidationError;

/// A syntax error with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: expected {expected}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

/// Anything that prevents a model file from becoming a [`crate::model::ModelDef`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid model: {0}")]
    Invalid(#[from] ValidationError),
}
