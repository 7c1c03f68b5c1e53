//! Exact rational convex geometry: hulls, cones, double description,
//! slicing, Minkowski sums, volumes and Brunn–Minkowski comparisons.

mod brunn_minkowski;
mod cone;
mod dd;
pub(crate) mod linalg;
mod polytope;

pub use brunn_minkowski::{brunn_minkowski_margin, classify as classify_margin, Margin, PRECISION_CAP_BITS};
pub use cone::{cone_hull, cone_hull_i64, polytope_from_inequalities, slice_cone, ConvexCone, Halfspace};
pub use polytope::{contains, convex_hull, minkowski_weighted, polytope_volume, Polytope};
