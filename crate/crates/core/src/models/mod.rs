//! Semigroup constructors: complete toric models, JSON model files, seeded
//! random models and the bundled fixtures.

pub mod fixtures;
mod io;
mod random;
pub mod toric;

pub use io::{parse_model, serialize_model};
pub use random::{random_generators, random_model, RandomModelSpec};
pub use toric::{toric_fiber_oracle, toric_model, LatticePolytope};
