//! Context-indexed filtrations on standard simplices.
//!
//! The crate builds up from the simplex category ([`simplex`]) and its
//! concrete realization on weight vectors ([`realizer`]), through
//! factorial-base contexts ([`context`]) and exactly-checkable finite
//! probability ([`prob`]), to Dirichlet measures ([`dirichlet`]) and
//! the anchored filtration states they induce ([`filtration`]). The
//! [`cli`] module exposes the whole stack as the `synfilt` binary.
//!
//! All domain values are immutable after construction and safe to send
//! and share across threads. Stochastic operations take explicit
//! seedable random streams; nothing reads a global RNG.

pub mod cli;
pub mod context;
pub mod dirichlet;
pub mod error;
pub mod filtration;
pub mod prob;
pub mod realizer;
pub mod simplex;

pub use context::{ContextPrefix, TimeInContext};
pub use dirichlet::DirichletParams;
pub use error::{Error, Result};
pub use filtration::{FiltrationState, FutureConstraint, ObservationEvent};
pub use prob::{FiniteProbSpace, PointMap, RandomVariable};
pub use realizer::BarycentricPoint;
pub use simplex::{Generator, GeneratorWord, OrderPreservingMap, Ordinal};
