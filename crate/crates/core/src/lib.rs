//! Exact certificates of K-instability for log del Pezzo surfaces that are
//! quasi-smooth hypersurfaces in weighted projective 3-space.
//!
//! Two independent routes are implemented:
//!
//! * the β-invariant of the exceptional divisor of a weighted blow-up at a
//!   cyclic quotient point ([`betaflow`]), built on exact Zariski
//!   decompositions ([`zariski`]) of divisors on the blown-up surface
//!   ([`geometry`]);
//! * upper bounds for the log canonical threshold of a hyperplane section via
//!   toric valuations ([`lctalpha`]), which bound α and δ from above.
//!
//! All arithmetic is exact over arbitrary-precision rationals ([`ratlin`]).

pub mod betaflow;
pub mod cli;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod lctalpha;
pub mod ratlin;
pub mod surface;
pub mod zariski;

pub use error::{Error, Result};
pub use exec::Exec;
pub use ratlin::{rat, Rational, SymMatrix};
