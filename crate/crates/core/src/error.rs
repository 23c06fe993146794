use crate::shape::Shape;
use std::fmt;

/// Errors raised by the term calculus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermError {
    /// A point's length does not match the dimension of the relevant shape.
    DimensionMismatch { expected: usize, got: usize },
    /// Two maps were combined with incompatible domain or codomain shapes.
    ShapeMismatch {
        context: &'static str,
        left: Shape,
        right: Shape,
    },
    /// Exact evaluation or exact comparison hit a sin/cos/exp node.
    ExactModeUnsupportedPrimitive,
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            TermError::ShapeMismatch {
                context,
                left,
                right,
            } => write!(f, "shape mismatch in {context}: {left} vs {right}"),
            TermError::ExactModeUnsupportedPrimitive => {
                write!(f, "exact mode does not support transcendental primitives")
            }
        }
    }
}

impl std::error::Error for TermError {}
