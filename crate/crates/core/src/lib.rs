pub mod acceptance;
pub mod error;
pub mod fujita;
pub mod geometry;
pub mod models;
pub mod okounkov;
mod par;
pub mod rational;
pub mod semigroup;

pub use error::{Error, Result};
pub use rational::{QVector, Rat};
