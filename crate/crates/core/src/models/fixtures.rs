//! The two reference models used throughout the tests and the acceptance
//! suite.
//!
//! * E1: generators `(0;1,0) (2;1,0) (0;0,1) (3;0,1) (7;2,0)` with `d = 1`,
//!   `r = 2`, bound 40. The degree-2 generator `(7;2,0)` is invisible to the
//!   degree-1 truncation.
//! * E2: toric model over the unit square and the standard triangle, bound
//!   12.

use super::io::parse_model;
use super::toric::LatticePolytope;
use crate::semigroup::GradedSemigroup;

pub const E1_JSON: &str = include_str!("../../../../fixtures/e1.json");
pub const E2_JSON: &str = include_str!("../../../../fixtures/e2.json");

pub fn e1() -> GradedSemigroup {
    parse_model(E1_JSON).expect("bundled fixture parses")
}

pub fn e2() -> GradedSemigroup {
    parse_model(E2_JSON).expect("bundled fixture parses")
}

/// E2 rebuilt with a different degree bound.
pub fn e2_with_bound(bound: u32) -> GradedSemigroup {
    super::toric_model(e2_polytopes(), bound).expect("valid toric data")
}

pub fn unit_square() -> LatticePolytope {
    LatticePolytope::new(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).expect("valid")
}

pub fn standard_triangle() -> LatticePolytope {
    LatticePolytope::new(&[vec![0, 0], vec![1, 0], vec![0, 1]]).expect("valid")
}

pub fn e2_polytopes() -> Vec<LatticePolytope> {
    vec![unit_square(), standard_triangle()]
}
