use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::partition::{self, cell_samples, centroid, CellRecord, SimplexPartition};
use super::report::{BoundaryCheck, FujitaReport, FujitaRow, RowOutcome, Verdict};
use crate::error::{Error, Result};
use crate::geometry::linalg::rref;
use crate::geometry::{contains, minkowski_weighted, ConvexCone, Polytope};
use crate::okounkov::{body_in_cone, global_cone, normalized_volume, restricted_ray_body, truncation_cone};
use crate::par;
use crate::rational::Rat;
use crate::semigroup::{GradedSemigroup, RationalDirection};

/// Cached cones of a semigroup and of its degree-`p` truncations.
pub struct FiberVolumes<'a> {
    s: &'a GradedSemigroup,
    full: ConvexCone,
    trunc: BTreeMap<u32, Result<Option<ConvexCone>>>,
}

impl<'a> FiberVolumes<'a> {
    /// Truncation degrees beyond the bound are remembered as errors and
    /// surface only when queried.
    pub fn new(s: &'a GradedSemigroup, p_set: &[u32]) -> Result<Self> {
        let full = global_cone(s)?;
        let mut ps = p_set.to_vec();
        ps.sort_unstable();
        ps.dedup();
        let cones = par::map(&ps, |&p| {
            if p == 0 {
                Err(Error::InvalidDirection("truncation degree must be positive".into()))
            } else {
                truncation_cone(s, p)
            }
        });
        Ok(Self { s, full, trunc: ps.into_iter().zip(cones).collect() })
    }

    pub fn semigroup(&self) -> &GradedSemigroup {
        self.s
    }

    fn check(&self, a: &RationalDirection) -> Result<()> {
        if a.r() != self.s.r() {
            return Err(Error::DimensionMismatch { expected: self.s.r(), found: a.r() });
        }
        Ok(())
    }

    pub fn full_body(&self, a: &RationalDirection) -> Result<Polytope> {
        self.check(a)?;
        body_in_cone(&self.full, a, self.s.d())
    }

    pub fn full_volume(&self, a: &RationalDirection) -> Result<Rat> {
        Ok(normalized_volume(&self.full_body(a)?))
    }

    pub fn trunc_body(&self, p: u32, a: &RationalDirection) -> Result<Polytope> {
        self.check(a)?;
        let cone = match self.trunc.get(&p) {
            Some(Ok(c)) => c.as_ref(),
            Some(Err(e)) => return Err(e.clone()),
            None => {
                return Err(Error::InvalidDirection(format!("truncation degree {p} was not prepared")))
            }
        };
        match cone {
            Some(c) => body_in_cone(c, a, self.s.d()),
            None => Ok(Polytope::empty(self.s.d())),
        }
    }

    pub fn trunc_volume(&self, p: u32, a: &RationalDirection) -> Result<Rat> {
        Ok(normalized_volume(&self.trunc_body(p, a)?))
    }

    /// `vol^(p)(a) / vol(a)`.
    pub fn ratio(&self, p: u32, a: &RationalDirection) -> Result<Rat> {
        let full = self.full_volume(a)?;
        if full.is_zero() {
            return Err(Error::ZeroVolume(a.to_string()));
        }
        Ok(self.trunc_volume(p, a)? / full)
    }

    fn sample_volume(&self, a: &RationalDirection) -> Result<Option<Rat>> {
        let body = self.full_body(a)?;
        Ok((!body.is_empty()).then(|| normalized_volume(&body)))
    }
}

/// `(M_i, spread)` over the vertices and centroid of one cell.
pub fn oscillation_estimate(s: &GradedSemigroup, cell: &[RationalDirection]) -> Result<CellRecord> {
    let fv = FiberVolumes::new(s, &[])?;
    let samples = cell_samples(cell)
        .iter()
        .map(|a| fv.sample_volume(a))
        .collect::<Result<Vec<_>>>()?;
    Ok(partition::record_from_samples(&samples))
}

/// Coarsest grid on the doubling schedule whose sampled spreads are all at
/// most `eps_prime`.
pub fn refine_until(s: &GradedSemigroup, eps_prime: &Rat, n_max: u32) -> Result<SimplexPartition> {
    if !eps_prime.is_positive() {
        return Err(Error::InvalidDirection("epsilon' must be positive".into()));
    }
    let fv = FiberVolumes::new(s, &[])?;
    partition::refine_with(s.r(), eps_prime, n_max, |a| fv.sample_volume(a))
}

fn vertex_p0_with(
    fv: &FiberVolumes<'_>,
    vertices: &[RationalDirection],
    eps_prime: &Rat,
    p_set: &[u32],
) -> Result<Option<u32>> {
    let mut ps = p_set.to_vec();
    ps.sort_unstable();
    ps.dedup();
    let full = vertices.iter().map(|a| fv.full_volume(a)).collect::<Result<Vec<_>>>()?;
    let good = par::map(&ps, |&p| -> Result<bool> {
        for (a, vol) in vertices.iter().zip(&full) {
            if fv.trunc_volume(p, a)? < vol - eps_prime {
                return Ok(false);
            }
        }
        Ok(true)
    });
    let good = good.into_iter().collect::<Result<Vec<bool>>>()?;
    // smallest p whose whole tail passes
    let mut best = None;
    for (p, ok) in ps.iter().zip(&good).rev() {
        if !ok {
            break;
        }
        best = Some(*p);
    }
    Ok(best)
}

/// Smallest `p* ∈ p_set` such that every partition vertex satisfies
/// `vol^(p)(a) >= vol(a) − ε'` for all sampled `p >= p*`.
pub fn vertex_p0(
    s: &GradedSemigroup,
    partition: &SimplexPartition,
    eps_prime: &Rat,
    p_set: &[u32],
) -> Result<Option<u32>> {
    if let Some(&p) = p_set.iter().find(|&&p| p > s.bound()) {
        return Err(Error::BeyondBound { degree: p as u64, bound: s.bound() });
    }
    let fv = FiberVolumes::new(s, p_set)?;
    vertex_p0_with(&fv, &partition.vertices(), eps_prime, p_set)
}

/// `vol^(p)(a) / vol(a)`, exact and in `[0, 1]`.
pub fn fujita_ratio(s: &GradedSemigroup, p: u32, a: &RationalDirection) -> Result<Rat> {
    FiberVolumes::new(s, &[p])?.ratio(p, a)
}

/// Weights `t` with `a = Σ t_j v_j`, `t >= 0`, `Σ t_j = 1`.
pub fn barycentric(cell: &[RationalDirection], a: &RationalDirection) -> Result<Vec<Rat>> {
    let fail = || Error::BarycentricFailure(format!("{a} is not in the cell"));
    let k = cell.len();
    if k == 0 || cell.iter().any(|v| v.r() != a.r()) {
        return Err(fail());
    }
    let r = a.r();
    let mut rows: Vec<Vec<Rat>> = (0..r)
        .map(|i| {
            let mut row: Vec<Rat> = cell.iter().map(|v| v.coords()[i].clone()).collect();
            row.push(a.coords()[i].clone());
            row
        })
        .collect();
    rows.push(vec![Rat::one(); k + 1]);
    let (red, pivots) = rref(&rows, k + 1);
    if pivots.contains(&k) {
        return Err(fail());
    }
    let mut t = vec![Rat::zero(); k];
    for (row, &pc) in red.iter().zip(&pivots) {
        t[pc] = row[k].clone();
    }
    if t.iter().any(Signed::is_negative) {
        return Err(fail());
    }
    Ok(t)
}

/// Outcome of the containment and volume propagation checks at one
/// direction of one cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinkowskiCheck {
    pub p: u32,
    pub direction: RationalDirection,
    pub weights: Vec<Rat>,
    /// `Δ^(p)_a ⊇ Σ t_j Δ^(p)_{v_j}`
    pub containment: bool,
    pub volume: Rat,
    pub vertex_volumes: Vec<Rat>,
    /// `vol^(p)(a) >= min_j vol^(p)(v_j)`
    pub volume_bound: bool,
}

fn minkowski_check_with(
    fv: &FiberVolumes<'_>,
    p: u32,
    cell: &[RationalDirection],
    a: &RationalDirection,
) -> Result<MinkowskiCheck> {
    let weights = barycentric(cell, a)?;
    let bodies = cell.iter().map(|v| fv.trunc_body(p, v)).collect::<Result<Vec<_>>>()?;
    let body = fv.trunc_body(p, a)?;
    let combo = minkowski_weighted(&bodies, &weights)?;
    let containment = contains(&body, &combo)?;
    let volume = normalized_volume(&body);
    let vertex_volumes: Vec<Rat> = bodies.iter().map(normalized_volume).collect();
    let volume_bound = vertex_volumes.iter().min().is_some_and(|min| volume >= *min);
    Ok(MinkowskiCheck { p, direction: a.clone(), weights, containment, volume, vertex_volumes, volume_bound })
}

/// Convexity of the truncated cone plus Brunn–Minkowski at `a ∈ cell`.
pub fn check_minkowski_bound(
    s: &GradedSemigroup,
    p: u32,
    cell: &[RationalDirection],
    a: &RationalDirection,
) -> Result<MinkowskiCheck> {
    let fv = FiberVolumes::new(s, &[p])?;
    minkowski_check_with(&fv, p, cell, a)
}

fn sorted_p(p_set: &[u32]) -> Vec<u32> {
    let mut ps = p_set.to_vec();
    ps.sort_unstable();
    ps.dedup();
    ps
}

fn rows_with(fv: &FiberVolumes<'_>, ps: &[u32], directions: &[RationalDirection]) -> Result<Vec<FujitaRow>> {
    let mut dirs = directions.to_vec();
    dirs.sort();
    dirs.dedup();
    let jobs: Vec<(u32, RationalDirection)> =
        ps.iter().flat_map(|&p| dirs.iter().map(move |a| (p, a.clone()))).collect();
    let rows = par::map(&jobs, |(p, a)| -> Result<FujitaRow> {
        let outcome = match (fv.full_volume(a), fv.trunc_volume(*p, a)) {
            (Err(e @ Error::DimensionMismatch { .. }), _) | (_, Err(e @ Error::DimensionMismatch { .. })) => {
                return Err(e)
            }
            (_, Err(Error::BeyondBound { .. })) => RowOutcome::BeyondBound,
            (Err(e), _) | (_, Err(e)) => return Err(e),
            (Ok(full), Ok(trunc)) if full.is_zero() => RowOutcome::ZeroVolume { vol_trunc: trunc },
            (Ok(full), Ok(trunc)) => {
                let ratio = &trunc / &full;
                RowOutcome::Ratio { vol_full: full, vol_trunc: trunc, ratio }
            }
        };
        Ok(FujitaRow { p: *p, direction: a.clone(), outcome })
    });
    rows.into_iter().collect()
}

/// Every `(p, a)` row; zero volumes and degrees beyond the bound become
/// row markers instead of errors.
pub fn sweep(s: &GradedSemigroup, p_set: &[u32], directions: &[RationalDirection]) -> Result<FujitaReport> {
    let ps = sorted_p(p_set);
    let fv = FiberVolumes::new(s, &ps)?;
    let rows = rows_with(&fv, &ps, directions)?;
    Ok(FujitaReport { bound: s.bound(), rows, ..FujitaReport::default() })
}

/// Smallest sampled `p` from which every row satisfies `|1 − ratio| < ε`.
pub fn empirical_p0(rows: &[FujitaRow], eps: &Rat) -> Option<u32> {
    let mut ok: BTreeMap<u32, bool> = BTreeMap::new();
    for row in rows {
        let pass = row.satisfies(eps);
        *ok.entry(row.p).or_insert(true) &= pass;
    }
    let mut best = None;
    for (p, pass) in ok.iter().rev() {
        if !pass {
            break;
        }
        best = Some(*p);
    }
    best
}

/// End-to-end check of the uniform approximation statement on a sampled
/// grid of directions.
///
/// 1. `m` := minimum volume over the vertices and centroid of `T`;
///    `ε' := ε·m/2`.
/// 2. Refine the grid until every cell spread is at most `ε'`.
/// 3. Vertex search for `p*`.
/// 4. Ratios at every cell vertex and centroid for every sampled `p`;
///    containment and volume propagation at every centroid for `p >= p*`.
///
/// The reported `p0` is the smallest sampled `p` from which every row
/// satisfies `|1 − ratio| < ε`. When the vertex search is not reached the
/// report is still returned, with a failing verdict.
pub fn verify_theorem(s: &GradedSemigroup, eps: &Rat, n_max: u32, p_set: &[u32]) -> Result<FujitaReport> {
    if !eps.is_positive() {
        return Err(Error::InvalidDirection("epsilon must be positive".into()));
    }
    let ps = sorted_p(p_set);
    if let Some(&p) = ps.iter().find(|&&p| p > s.bound()) {
        return Err(Error::BeyondBound { degree: p as u64, bound: s.bound() });
    }
    let fv = FiberVolumes::new(s, &ps)?;
    let coarse = partition::simplex_grid(s.r(), 1);
    let mut m: Option<Rat> = None;
    for a in coarse.cells.iter().flat_map(|c| cell_samples(c)) {
        let v = fv.full_volume(&a)?;
        if v.is_zero() {
            return Err(Error::ZeroVolume(a.to_string()));
        }
        m = Some(m.map_or(v.clone(), |x: Rat| x.min(v)));
    }
    let m = m.expect("T has at least one vertex");
    let eps_prime = eps * &m / Rat::from_integer(BigInt::from(2));
    let grid = partition::refine_with(s.r(), &eps_prime, n_max, |a| fv.sample_volume(a))?;

    let vertices = grid.vertices();
    let vertex_p0 = vertex_p0_with(&fv, &vertices, &eps_prime, &ps)?;
    let mut directions = vertices.clone();
    directions.extend(grid.centroids());
    let rows = rows_with(&fv, &ps, &directions)?;
    let p0 = empirical_p0(&rows, eps);

    let mut failures = Vec::new();
    let asserted: Vec<u32> = match vertex_p0 {
        Some(q) => ps.iter().copied().filter(|&p| p >= q).collect(),
        None => {
            failures.push("vertex search did not reach a stable p within the sampled set".to_string());
            Vec::new()
        }
    };
    if p0.is_none() {
        failures.push("no sampled p satisfies the ratio bound on all directions".to_string());
    }
    for row in rows.iter().filter(|r| asserted.contains(&r.p)) {
        if !row.satisfies(eps) {
            failures.push(format!("ratio bound fails at p={} a={}", row.p, row.direction));
        }
    }

    let jobs: Vec<(u32, usize)> =
        asserted.iter().flat_map(|&p| (0..grid.cells.len()).map(move |i| (p, i))).collect();
    let checks = par::map(&jobs, |&(p, i)| {
        let cell = &grid.cells[i];
        minkowski_check_with(&fv, p, cell, &centroid(cell))
    });
    let checks = checks.into_iter().collect::<Result<Vec<_>>>()?;
    for (check, &(_, i)) in checks.iter().zip(&jobs) {
        if !check.containment {
            failures.push(format!("containment fails at p={} a={}", check.p, check.direction));
        }
        if !check.volume_bound {
            failures.push(format!("volume propagation fails at p={} a={}", check.p, check.direction));
        }
        if check.volume < &grid.records[i].min - &eps_prime {
            failures.push(format!("M_i - eps' bound fails at p={} a={}", check.p, check.direction));
        }
    }

    let boundary = boundary_checks(&fv, &vertices)?;
    for b in boundary.iter().filter(|b| b.asserted && !b.equal) {
        failures.push(format!("boundary fiber differs from ray body at a={}", b.direction));
    }

    let verdict = if failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
    Ok(FujitaReport {
        bound: s.bound(),
        rows,
        p0,
        vertex_p0,
        epsilon: Some(eps.clone()),
        epsilon_prime: Some(eps_prime),
        resolution: Some(grid.resolution),
        records: grid.records.clone(),
        minkowski: checks,
        boundary,
        verdict: Some(verdict),
        failures,
    })
}

/// On `∂T` compare the cone fiber with the body of the singly graded
/// series along the ray. Asserted only for complete (toric) models.
fn boundary_checks(fv: &FiberVolumes<'_>, vertices: &[RationalDirection]) -> Result<Vec<BoundaryCheck>> {
    let s = fv.semigroup();
    if s.r() < 2 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for a in vertices.iter().filter(|a| a.coords().iter().any(Zero::is_zero)) {
        let step = a.primitive_integer().total();
        let k = s.bound() as u64 / step;
        if k == 0 {
            continue;
        }
        let ray = restricted_ray_body(s, a, k)?;
        out.push(BoundaryCheck {
            direction: a.clone(),
            equal: ray == fv.full_body(a)?,
            asserted: s.is_complete(),
        });
    }
    Ok(out)
}
