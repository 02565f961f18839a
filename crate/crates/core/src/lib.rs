//! Numerical plane geometry toolkit: primitives, constructions, lemma
//! residuals, a scene language and a randomized verifier.

pub mod construct;
pub mod dsl;
pub mod error;
pub mod geom;
pub mod lemmas;
pub mod verify;

pub use error::GeomError;
pub use geom::{Angle, Circle, Line, Point, TolerancePolicy, Triangle};
