//! Objects of the base category: binary product trees over the line.
//!
//! A `Shape` is either the unit object, one copy of the line, or a binary
//! product of two shapes. Two shapes are the same object only when their
//! trees are identical; `Prod(Line, Prod(Line, Line))` and
//! `Prod(Prod(Line, Line), Line)` both have dimension 3 but are distinct,
//! which is what makes the product-comparison isomorphisms of a monad
//! genuinely nontrivial.

use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    Unit,
    Line,
    Prod(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn prod(left: Shape, right: Shape) -> Shape {
        Shape::Prod(Box::new(left), Box::new(right))
    }

    /// Number of line leaves, i.e. the dimension of the underlying space.
    pub fn dim(&self) -> usize {
        match self {
            Shape::Unit => 0,
            Shape::Line => 1,
            Shape::Prod(a, b) => a.dim() + b.dim(),
        }
    }

    /// The two factors when the shape is a product.
    pub fn split(&self) -> Option<(&Shape, &Shape)> {
        match self {
            Shape::Prod(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// `A x A`, the domain shape of a derivative.
    pub fn doubled(&self) -> Shape {
        Shape::prod(self.clone(), self.clone())
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Unit => write!(f, "()"),
            Shape::Line => write!(f, "R"),
            Shape::Prod(a, b) => write!(f, "({a} x {b})"),
        }
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims() {
        assert_eq!(Shape::Unit.dim(), 0);
        assert_eq!(Shape::Line.dim(), 1);
        assert_eq!(Shape::prod(Shape::Line, Shape::Line).dim(), 2);
        assert_eq!(
            Shape::prod(Shape::prod(Shape::Line, Shape::Line), Shape::Line).dim(),
            3
        );
        assert_eq!(Shape::prod(Shape::Unit, Shape::Line).dim(), 1);
    }

    #[test]
    fn tree_identity_is_strict() {
        let left = Shape::prod(Shape::prod(Shape::Line, Shape::Line), Shape::Line);
        let right = Shape::prod(Shape::Line, Shape::prod(Shape::Line, Shape::Line));
        assert_eq!(left.dim(), right.dim());
        assert_ne!(left, right);
    }
}
