//! Generic law-checking machinery.
//!
//! The harness is category-agnostic: [`suite::DiffCategory`] is the exact
//! signature needed to state the seven differential-combinator axioms, and
//! [`suite::run_cd_suite`] runs them against any instance, the base category
//! and Kleisli categories alike. [`gen`] produces seeded random shapes and
//! maps, [`oracle`] supplies the finite-difference ground truth, [`mutants`]
//! ships deliberately broken instances for sensitivity testing, and
//! [`pipeline`] chains every suite for one monad into a staged run.

pub mod gen;
pub mod mutants;
pub mod oracle;
pub mod pipeline;
pub mod report;
pub mod suite;
