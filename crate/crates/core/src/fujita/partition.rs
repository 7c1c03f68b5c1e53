use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::par;
use crate::rational::Rat;
use crate::semigroup::RationalDirection;

/// Sampled oscillation of the volume function on one cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Spread {
    Finite(Rat),
    /// Some sample point had an empty fiber.
    Infinite,
}

impl Spread {
    pub fn at_most(&self, eps: &Rat) -> bool {
        matches!(self, Spread::Finite(s) if s <= eps)
    }
}

impl fmt::Display for Spread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spread::Finite(s) => write!(f, "{s}"),
            Spread::Infinite => f.write_str("inf"),
        }
    }
}

/// `(M_i, spread)` for one cell: minimum and max − min of the volume over
/// the cell vertices and centroid. A sampled estimate, not a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellRecord {
    pub min: Rat,
    pub spread: Spread,
}

/// Edgewise subdivision of the standard simplex `T ⊂ ℚ^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexPartition {
    pub r: usize,
    pub resolution: u32,
    pub cells: Vec<Vec<RationalDirection>>,
    /// One record per cell once the partition has been evaluated.
    pub records: Vec<CellRecord>,
}

impl SimplexPartition {
    /// Distinct cell vertices, sorted.
    pub fn vertices(&self) -> Vec<RationalDirection> {
        let mut out: Vec<RationalDirection> = self.cells.iter().flatten().cloned().collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn centroids(&self) -> Vec<RationalDirection> {
        self.cells.iter().map(|c| centroid(c)).collect()
    }
}

pub fn centroid(cell: &[RationalDirection]) -> RationalDirection {
    let r = cell[0].r();
    let n = Rat::from_integer(BigInt::from(cell.len()));
    let coords = (0..r)
        .map(|i| cell.iter().map(|v| &v.coords()[i]).sum::<Rat>() / &n)
        .collect();
    RationalDirection::new(coords).expect("average of simplex points")
}

fn from_cumulative(y: &[u32], n: u32) -> RationalDirection {
    let nn = Rat::from_integer(BigInt::from(n));
    let mut coords = Vec::with_capacity(y.len() + 1);
    let mut prev = 0u32;
    for &yi in y.iter().chain(std::iter::once(&n)) {
        coords.push(Rat::from_integer(BigInt::from(yi - prev)) / &nn);
        prev = yi;
    }
    RationalDirection::new(coords).expect("point of T")
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Freudenthal triangulation in cumulative coordinates
/// `y_i = N (a_1 + ... + a_i)`, keeping the simplices inside
/// `0 <= y_1 <= ... <= y_{r-1} <= N`. This yields `N^(r-1)` cells with
/// vertices on the `1/N` lattice. Vertices within a cell and the cells
/// themselves are sorted in descending lexicographic order.
pub fn simplex_grid(r: usize, n: u32) -> SimplexPartition {
    assert!(r >= 1 && n >= 1, "simplex_grid needs r >= 1 and N >= 1");
    let k = r - 1;
    let perms = permutations(k);
    let mut cells = Vec::new();
    let mut base = vec![0u32; k];
    loop {
        for perm in &perms {
            let mut y = base.clone();
            let mut verts = vec![y.clone()];
            for &i in perm {
                y[i] += 1;
                verts.push(y.clone());
            }
            if verts.iter().all(|v| v.windows(2).all(|w| w[0] <= w[1])) {
                let mut cell: Vec<RationalDirection> = verts.iter().map(|v| from_cumulative(v, n)).collect();
                cell.sort_by(|a, b| b.cmp(a));
                cells.push(cell);
            }
        }
        // odometer over {0..N-1}^k
        let mut j = k;
        loop {
            if j == 0 {
                cells.sort_by(|a, b| b.cmp(a));
                return SimplexPartition { r, resolution: n, cells, records: Vec::new() };
            }
            j -= 1;
            if base[j] + 1 < n {
                base[j] += 1;
                base[j + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

/// `(M_i, spread)` from precomputed sample volumes; `None` marks an
/// empty fiber.
pub(crate) fn record_from_samples(samples: &[Option<Rat>]) -> CellRecord {
    if samples.iter().any(Option::is_none) {
        let min = samples.iter().flatten().min().cloned().unwrap_or_else(Rat::zero);
        return CellRecord { min: min.min(Rat::zero()), spread: Spread::Infinite };
    }
    let vals: Vec<&Rat> = samples.iter().flatten().collect();
    let min = vals.iter().min().map(|x| (*x).clone()).unwrap_or_else(Rat::zero);
    let max = vals.iter().max().map(|x| (*x).clone()).unwrap_or_else(Rat::zero);
    CellRecord { spread: Spread::Finite(&max - &min), min }
}

/// Sample points of a cell: its vertices, then its centroid.
pub fn cell_samples(cell: &[RationalDirection]) -> Vec<RationalDirection> {
    let mut out = cell.to_vec();
    out.push(centroid(cell));
    out
}

/// Evaluates `vol` once per distinct sample point across all cells and
/// fills in the records.
pub(crate) fn evaluate<F>(partition: &mut SimplexPartition, vol: F) -> Result<()>
where
    F: Fn(&RationalDirection) -> Result<Option<Rat>> + Sync + Send,
{
    let mut points: Vec<RationalDirection> = partition.cells.iter().flat_map(|c| cell_samples(c)).collect();
    points.sort();
    points.dedup();
    let values = par::map(&points, |a| vol(a));
    let mut table = BTreeMap::new();
    for (a, v) in points.into_iter().zip(values) {
        table.insert(a, v?);
    }
    partition.records = partition
        .cells
        .iter()
        .map(|c| {
            let samples: Vec<Option<Rat>> = cell_samples(c).iter().map(|a| table[a].clone()).collect();
            record_from_samples(&samples)
        })
        .collect();
    Ok(())
}

/// Doubling schedule `1, 2, 4, ...` up to `n_max`: the first evaluated
/// grid whose every cell has spread at most `eps`.
pub(crate) fn refine_with<F>(r: usize, eps: &Rat, n_max: u32, vol: F) -> Result<SimplexPartition>
where
    F: Fn(&RationalDirection) -> Result<Option<Rat>> + Sync + Send,
{
    let mut n = 1u32;
    loop {
        if n > n_max {
            return Err(Error::ResolutionExceeded { needed: n, cap: n_max });
        }
        let mut grid = simplex_grid(r, n);
        evaluate(&mut grid, &vol)?;
        if grid.records.iter().all(|rec| rec.spread.at_most(eps)) {
            return Ok(grid);
        }
        n = n.checked_mul(2).ok_or(Error::ResolutionExceeded { needed: u32::MAX, cap: n_max })?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{polytope_volume, Polytope};
    use crate::rational::{int, qvec, rat, QVector};

    fn dir(c: &[(i64, i64)]) -> RationalDirection {
        RationalDirection::new(qvec(c)).unwrap()
    }

    #[test]
    fn r2_n2_cells() {
        let g = simplex_grid(2, 2);
        assert_eq!(
            g.cells,
            vec![
                vec![dir(&[(1, 1), (0, 1)]), dir(&[(1, 2), (1, 2)])],
                vec![dir(&[(1, 2), (1, 2)]), dir(&[(0, 1), (1, 1)])],
            ]
        );
    }

    #[test]
    fn r3_counts() {
        assert_eq!(simplex_grid(3, 1).cells.len(), 1);
        assert_eq!(simplex_grid(3, 1).cells[0].len(), 3);
        assert_eq!(simplex_grid(3, 2).cells.len(), 4);
        assert_eq!(simplex_grid(3, 5).cells.len(), 25);
        assert_eq!(simplex_grid(4, 3).cells.len(), 27);
        assert_eq!(simplex_grid(1, 4).cells, vec![vec![dir(&[(1, 1)])]]);
    }

    // Projected to the first r-1 coordinates, cells must tile the
    // projected simplex of volume 1/(r-1)!.
    fn projected_volume(cell: &[RationalDirection]) -> Rat {
        let k = cell[0].r() - 1;
        let pts: Vec<QVector> = cell.iter().map(|v| v.coords()[..k].to_vec()).collect();
        polytope_volume(&Polytope::hull(&pts, k).unwrap())
    }

    #[test]
    fn cells_tile_the_simplex() {
        for (r, n, total) in [(2, 3, int(1)), (3, 3, rat(1, 2)), (4, 2, rat(1, 6))] {
            let g = simplex_grid(r, n);
            let vols: Vec<Rat> = g.cells.iter().map(|c| projected_volume(c)).collect();
            assert!(vols.iter().all(|v| *v > int(0)));
            assert_eq!(vols.iter().sum::<Rat>(), total);
        }
    }

    #[test]
    fn shared_facets_match() {
        // each interior facet is shared by exactly two cells, boundary
        // facets by one
        let g = simplex_grid(3, 3);
        let mut facets: BTreeMap<Vec<RationalDirection>, usize> = BTreeMap::new();
        for c in &g.cells {
            for skip in 0..c.len() {
                let f: Vec<RationalDirection> =
                    c.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect();
                *facets.entry(f).or_default() += 1;
            }
        }
        for (f, count) in facets {
            let on_boundary = (0..3).any(|i| f.iter().all(|v| v.coords()[i] == int(0)));
            assert_eq!(count, if on_boundary { 1 } else { 2 }, "{f:?}");
        }
    }

    #[test]
    fn deterministic_ordering() {
        assert_eq!(simplex_grid(3, 4), simplex_grid(3, 4));
    }

    #[test]
    fn records() {
        let rec = record_from_samples(&[Some(int(2)), Some(int(1)), Some(rat(7, 4))]);
        assert_eq!(rec, CellRecord { min: int(1), spread: Spread::Finite(int(1)) });
        let rec = record_from_samples(&[Some(int(3)), Some(int(3))]);
        assert_eq!(rec.spread, Spread::Finite(int(0)));
        let rec = record_from_samples(&[Some(int(3)), None]);
        assert_eq!(rec, CellRecord { min: int(0), spread: Spread::Infinite });
        assert!(!Spread::Infinite.at_most(&int(100)));
    }
}
