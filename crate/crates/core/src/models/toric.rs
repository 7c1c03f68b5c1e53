use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, minkowski_weighted, Polytope};
use crate::rational::{QVector, Rat};
use crate::semigroup::{GradedSemigroup, MultiDegree, RationalDirection, ValuationVector};

/// A nonempty polytope with integer vertices, kept as its exact vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolytope {
    poly: Polytope,
}

impl LatticePolytope {
    pub fn new(vertices: &[Vec<i64>]) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::EmptyInput);
        };
        let d = first.len();
        let pts: Vec<QVector> = vertices
            .iter()
            .map(|v| v.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect())
            .collect();
        Ok(Self { poly: convex_hull(&pts, d)? })
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn polytope(&self) -> &Polytope {
        &self.poly
    }

    pub fn integer_vertices(&self) -> Vec<Vec<i64>> {
        self.poly
            .vertices()
            .iter()
            .map(|v| v.iter().map(|x| x.to_integer().to_i64().expect("small lattice vertex")).collect())
            .collect()
    }
}

/// Complete toric model: `Γ_m = (m_1 P_1 + ... + m_r P_r) ∩ ℤ^d`.
pub fn toric_model(polytopes: Vec<LatticePolytope>, bound: u32) -> Result<GradedSemigroup> {
    let Some(first) = polytopes.first() else {
        return Err(Error::EmptyInput);
    };
    let d = first.dim();
    for p in &polytopes {
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
        if !p.poly.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        if p.integer_vertices().iter().flatten().any(|&x| x < 0) {
            return Err(Error::NegativeEntry("toric polytope vertex".into()));
        }
    }
    Ok(GradedSemigroup::from_toric(d, polytopes, bound))
}

/// The weighted Minkowski sum `Σ a_i P_i`, computed purely geometrically.
/// This is the expected fiber body of a toric model in direction `a`.
pub fn toric_fiber_oracle(polytopes: &[LatticePolytope], a: &RationalDirection) -> Result<Polytope> {
    let polys: Vec<Polytope> = polytopes.iter().map(|p| p.poly.clone()).collect();
    minkowski_weighted(&polys, a.coords())
}

/// Lattice points of `Σ m_i P_i`, sorted. Bounding box plus halfspace
/// filter.
pub(crate) fn lattice_points(polytopes: &[LatticePolytope], m: &MultiDegree, d: usize) -> Vec<ValuationVector> {
    if m.is_zero() {
        return vec![vec![0; d]];
    }
    let polys: Vec<Polytope> = polytopes.iter().map(|p| p.poly.clone()).collect();
    let sum = minkowski_weighted(&polys, &m.to_rat()).expect("validated toric data");
    let (lo, hi): (Vec<i64>, Vec<i64>) = (0..d)
        .map(|j| {
            let col = sum.vertices().iter().map(|v| v[j].to_integer().to_i64().expect("small"));
            (col.clone().min().unwrap(), col.max().unwrap())
        })
        .unzip();
    let hs = sum.halfspaces();
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        let x: QVector = cur.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect();
        if hs.iter().all(|h| h.contains(&x)) {
            out.push(cur.iter().map(|&c| c as u32).collect());
        }
        // odometer over the box
        let mut j = d;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if cur[j] < hi[j] {
                cur[j] += 1;
                cur[j + 1..].copy_from_slice(&lo[j + 1..]);
                break;
            }
        }
    }
}
