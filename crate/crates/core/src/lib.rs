//! Numerical laboratory for sharp Remez-type inequalities on the period.
//!
//! The crate evaluates the closed-form bounds
//! `max|Q| ≤ T_{2n}(sec(s/4))` (even `Q`), its odd and general variants and
//! the classical algebraic Remez bound; constructs the extremal polynomials
//! that attain them; computes the sublevel sets `{t : |Q(t)| ≤ 1}` whose
//! measure defines the classes `𝒯ₙᶜ(s)`; audits every inequality on random
//! members of those classes; and searches coefficient space for polynomials
//! that come close to, or beat, a bound.

pub mod algpoly;
pub mod audit;
pub mod chebyshev;
pub mod error;
pub mod extremal;
pub mod rng;
pub mod search;
pub mod sublevel;
pub mod trigpoly;

pub use algpoly::AlgPoly;
pub use chebyshev::BoundKind;
pub use error::{RemezError, Result};
pub use sublevel::{Backend, CircleIntervalSet, LineIntervalSet};
pub use trigpoly::{Parity, TrigPoly};
