//! A symbolic differential calculus engine over a category of smooth maps.
//!
//! The base category has binary product trees over the real line as objects
//! and tuples of symbolic expressions (rational polynomials plus sin, cos,
//! exp) as maps. On top of it the crate provides:
//!
//! - the total-derivative combinator, tangent functor, and partial
//!   differentiation for simple slices ([`diffop`]);
//! - presented monads with product comparison, including the tangent-bundle
//!   monad, and validation suites for their functor, unit, multiplication,
//!   and derivative compatibility ([`monads`]);
//! - Kleisli categories of validated monads with the lifted k-linear and
//!   differential structure, thunk-force structure, and the Kleisli-level
//!   derivative combinator with its axiom suite ([`kleisli`]);
//! - generalized vector fields with the direct composition formula,
//!   cross-checked against generic Kleisli composition ([`vfields`]);
//! - algebras, the lifted tangent structure on algebras, differential
//!   objects, and the embedding of the Kleisli category ([`em`]);
//! - a generic law harness: seeded map generation, a finite-difference
//!   oracle, the differential-category axiom suite runnable against any
//!   instance, mutation handles, and a staged full pipeline ([`harness`]).
//!
//! Everything is deterministic given a seed, immutable after construction,
//! and safe to use from multiple threads.

pub mod diffop;
pub mod em;
pub mod error;
pub mod expr;
pub mod harness;
pub mod kleisli;
pub mod monads;
pub mod scalar;
pub mod seeding;
pub mod shape;
pub mod smooth;
pub mod text;
pub mod vfields;

pub use error::TermError;
pub use expr::ScalarExpr;
pub use scalar::Scalar;
pub use shape::Shape;
pub use smooth::{maps_equal, EqPolicy, Side, SmoothMap, Verdict};

#[cfg(test)]
mod thread_safety {
    // every value is immutable after construction and usable across threads
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<crate::Shape>();
        assert_send_sync::<crate::Scalar>();
        assert_send_sync::<crate::ScalarExpr>();
        assert_send_sync::<crate::SmoothMap>();
        assert_send_sync::<crate::monads::MonadSpec>();
        assert_send_sync::<crate::kleisli::KleisliMap>();
        assert_send_sync::<crate::kleisli::Kleisli>();
        assert_send_sync::<crate::em::Algebra>();
        assert_send_sync::<crate::vfields::GenVectorField>();
        assert_send_sync::<crate::harness::report::CheckReport>();
    }
}
