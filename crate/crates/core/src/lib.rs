//! Dual-containing locally recoverable codes built from good polynomials,
//! the CSS quantum codes they induce, and tools to check their parameters.
//!
//! The pipeline runs bottom-up through the modules:
//!
//! - [`field`]: exact GF(p^m) arithmetic, square roots, quadratic extensions.
//! - [`poly`]: dense polynomials, interpolation, annihilators.
//! - [`agl`]: subgroups of the affine group `x -> ax + b`, their orbits and
//!   the good polynomials they define.
//! - [`construct`]: evaluation sets with square multipliers, the exponent
//!   sets, generator matrices of `C` and `C^perp`, and local repair.
//! - [`bounds`]: CSS parameters, distance lower bounds, brute-force distance,
//!   Schreier graphs and their spectra.
//! - [`instance`]: JSON instance specs and dumps.

pub mod agl;
pub mod bounds;
pub mod construct;
pub mod eigen;
pub mod field;
pub mod instance;
pub mod linalg;
pub mod poly;
pub mod rng;

pub use agl::{AffineMap, AglSubgroup, GoodPolynomial, OrbitPartition, Subfield};
pub use bounds::{BoundReport, QlrcParams, SchreierGraph};
pub use construct::{CodeInstance, EvaluationSet, ExponentSet, ExponentSets};
pub use field::{Field, FieldElement, FieldError};
pub use instance::{InstanceDump, InstanceSpec};
pub use poly::Polynomial;
pub use rng::Rng;
