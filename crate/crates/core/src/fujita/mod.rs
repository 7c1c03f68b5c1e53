//! Machinery for the uniform approximation statement: simplex grids with
//! sampled oscillation control, the vertex search for `p*`, Minkowski and
//! Brunn–Minkowski propagation, and end-to-end verification.

mod engine;
mod partition;
mod report;

pub use engine::{
    barycentric, check_minkowski_bound, empirical_p0, fujita_ratio, oscillation_estimate, refine_until, sweep,
    verify_theorem, vertex_p0, FiberVolumes, MinkowskiCheck,
};
pub use partition::{cell_samples, centroid, simplex_grid, CellRecord, SimplexPartition, Spread};
pub use report::{BoundaryCheck, FujitaReport, FujitaRow, RowOutcome, Verdict, CSV_HEADER};
