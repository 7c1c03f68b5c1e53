use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::dd::{cone_facets, extreme_rays};
use super::linalg::{kernel_int, rank_int};
use super::polytope::Polytope;
use crate::error::{Error, Result};
use crate::rational::{clear_denominators, dot_int, dot_int_rat, primitive, QVector, Rat};

/// The closed halfspace `{x : normal . x >= offset}` with a primitive,
/// nonzero integer normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Halfspace {
    #[serde(serialize_with = "ser_ints")]
    pub normal: Vec<BigInt>,
    #[serde(serialize_with = "ser_rat")]
    pub offset: Rat,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_rat<S: serde::Serializer>(v: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl Halfspace {
    /// Builds `normal . x >= offset`, dividing through by the gcd of the
    /// normal. Returns `None` for a zero normal.
    pub fn new(normal: Vec<BigInt>, offset: Rat) -> Option<Self> {
        if normal.iter().all(Zero::is_zero) {
            return None;
        }
        let prim = primitive(&normal);
        let g = normal
            .iter()
            .zip(&prim)
            .find(|(_, p)| !p.is_zero())
            .map(|(n, p)| Rat::new(n.clone(), p.clone()))
            .expect("nonzero normal");
        Some(Self { normal: prim, offset: offset / g })
    }

    pub fn value(&self, x: &[Rat]) -> Rat {
        dot_int_rat(&self.normal, x)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.value(x) >= self.offset
    }

    pub fn is_tight(&self, x: &[Rat]) -> bool {
        self.value(x) == self.offset
    }
}

/// A pointed rational polyhedral cone given by its primitive extreme rays.
#[derive(Debug, Clone)]
pub struct ConvexCone {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    halfspaces: OnceLock<Vec<Halfspace>>,
}

impl PartialEq for ConvexCone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays
    }
}

impl Eq for ConvexCone {}

impl ConvexCone {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Primitive extreme rays in lexicographic order.
    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    /// Minimal H-representation through the origin: one halfspace per facet
    /// plus a `+-` pair for each equation of the linear span.
    pub fn halfspaces(&self) -> &[Halfspace] {
        self.halfspaces.get_or_init(|| {
            let f = cone_facets(&self.rays, self.dim).expect("canonical rays are valid");
            halfspaces_from(&f.facets, &f.equations)
        })
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        self.halfspaces().iter().all(|h| h.contains(x))
    }

    /// Checks that the rays and halfspaces describe the same cone: every
    /// ray satisfies every halfspace, every facet is supported by rays of
    /// rank `k - 1`, and every ray lies on facets of rank `k - 1`.
    pub fn cross_validate(&self) -> bool {
        let hs = self.halfspaces();
        let k = rank_int(&self.rays, self.dim);
        let eqs: Vec<&Halfspace> = hs
            .iter()
            .filter(|h| {
                let neg: Vec<BigInt> = h.normal.iter().map(|x| -x).collect();
                hs.iter().any(|o| o.normal == neg)
            })
            .collect();
        let facets: Vec<&Halfspace> = hs.iter().filter(|h| !eqs.contains(h)).collect();
        if eqs.len() != 2 * (self.dim - k) {
            return false;
        }
        for r in &self.rays {
            if hs.iter().any(|h| dot_int(&h.normal, r).is_negative()) {
                return false;
            }
        }
        if k <= 1 {
            return self.rays.len() == k && facets.len() == k;
        }
        let eq_rows: Vec<Vec<BigInt>> = eqs.iter().map(|h| h.normal.clone()).collect();
        for f in &facets {
            let tight: Vec<&Vec<BigInt>> = self
                .rays
                .iter()
                .filter(|r| dot_int(&f.normal, r).is_zero())
                .collect();
            if rank_int(tight, self.dim) != k - 1 {
                return false;
            }
        }
        for r in &self.rays {
            let mut rows: Vec<Vec<BigInt>> = facets
                .iter()
                .filter(|f| dot_int(&f.normal, r).is_zero())
                .map(|f| f.normal.clone())
                .collect();
            rows.extend(eq_rows.iter().cloned());
            if rank_int(&rows, self.dim) != self.dim - 1 {
                return false;
            }
        }
        true
    }
}

fn halfspaces_from(facets: &[Vec<BigInt>], equations: &[Vec<BigInt>]) -> Vec<Halfspace> {
    let mut hs: Vec<Halfspace> = facets
        .iter()
        .chain(equations.iter())
        .cloned()
        .chain(equations.iter().map(|e| e.iter().map(|x| -x).collect()))
        .filter_map(|n| Halfspace::new(n, Rat::zero()))
        .collect();
    hs.sort();
    hs.dedup();
    hs
}

/// The cone generated by integer vectors, reduced to its extreme rays.
pub fn cone_hull(rays: &[Vec<BigInt>], dim: usize) -> Result<ConvexCone> {
    let f = cone_facets(rays, dim)?;
    let mut canon: Vec<Vec<BigInt>> = f.extreme.iter().map(|&i| primitive(&rays[i])).collect();
    canon.sort();
    let cone = ConvexCone { dim, rays: canon, halfspaces: OnceLock::new() };
    let _ = cone.halfspaces.set(halfspaces_from(&f.facets, &f.equations));
    debug_assert!(cone.cross_validate());
    Ok(cone)
}

/// Convenience wrapper over `cone_hull` for small integer vectors.
pub fn cone_hull_i64(rays: &[Vec<i64>], dim: usize) -> Result<ConvexCone> {
    let big: Vec<Vec<BigInt>> = rays
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    cone_hull(&big, dim)
}

/// The fiber `{x in R^d : (x, a) in C}` of a cone in `R^(d + r)`.
pub fn slice_cone(cone: &ConvexCone, a: &[Rat], d: usize) -> Result<Polytope> {
    if cone.dim != d + a.len() {
        return Err(Error::DimensionMismatch { expected: cone.dim, found: d + a.len() });
    }
    if a.iter().any(Signed::is_negative) {
        return Err(Error::InvalidDirection(crate::rational::format_qvector(a)));
    }
    let ineqs: Vec<(Vec<BigInt>, Rat)> = cone
        .halfspaces()
        .iter()
        .map(|h| {
            let (nx, na) = h.normal.split_at(d);
            (nx.to_vec(), -dot_int_rat(na, a))
        })
        .collect();
    polytope_from_inequalities(d, &ineqs)
}

/// Vertex enumeration for the bounded polyhedron `{x : n . x >= b}`.
pub fn polytope_from_inequalities(d: usize, ineqs: &[(Vec<BigInt>, Rat)]) -> Result<Polytope> {
    // homogenize: n . x - b t >= 0, t >= 0
    let mut rows: Vec<Vec<BigInt>> = ineqs
        .iter()
        .map(|(n, b)| {
            let mut row: Vec<Rat> = n.iter().cloned().map(Rat::from_integer).collect();
            row.push(-b.clone());
            primitive(&clear_denominators(&row))
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut t_row = vec![BigInt::zero(); d + 1];
    t_row[d] = 1.into();
    rows.push(t_row);
    let rays = match extreme_rays(&rows, d + 1) {
        Ok(r) => r,
        Err(Error::NotPointed) => {
            // The set is P = (P cut by the orthogonal complement of its
            // lineality space) + lineality. A nonempty P therefore contains
            // a line.
            let mut cut = rows.clone();
            for l in kernel_int(&rows, d + 1) {
                cut.push(l.iter().map(|x| -x).collect());
                cut.push(l);
            }
            let rays = extreme_rays(&cut, d + 1)?;
            return if rays.iter().any(|r| !r[d].is_zero()) {
                Err(Error::Unbounded)
            } else {
                Ok(Polytope::empty(d))
            };
        }
        Err(e) => return Err(e),
    };
    let mut points: Vec<QVector> = Vec::new();
    let mut recession = false;
    for r in &rays {
        let t = &r[d];
        if t.is_zero() {
            recession = true;
        } else {
            let tt = Rat::from_integer(t.clone());
            points.push(r[..d].iter().map(|x| Rat::from_integer(x.clone()) / &tt).collect());
        }
    }
    if points.is_empty() {
        return Ok(Polytope::empty(d));
    }
    if recession {
        return Err(Error::Unbounded);
    }
    Polytope::hull(&points, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ivec, rat};

    fn iv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn single_ray() {
        let c = cone_hull_i64(&[vec![1, 1]], 2).unwrap();
        assert_eq!(c.rays(), &[iv(&[1, 1])]);
    }

    #[test]
    fn redundant_ray_removed() {
        let c = cone_hull_i64(&[vec![1, 0], vec![0, 1], vec![1, 1]], 2).unwrap();
        assert_eq!(c.rays(), &[iv(&[0, 1]), iv(&[1, 0])]);
    }

    #[test]
    fn non_primitive_rays_reduced() {
        let c = cone_hull_i64(&[vec![2, 4], vec![3, 6]], 2).unwrap();
        assert_eq!(c.rays(), &[iv(&[1, 2])]);
    }

    #[test]
    fn three_dim_example() {
        let gens = vec![
            vec![0, 1, 0],
            vec![2, 1, 0],
            vec![7, 2, 0],
            vec![0, 0, 1],
            vec![3, 0, 1],
        ];
        let c = cone_hull_i64(&gens, 3).unwrap();
        let mut expect = vec![iv(&[0, 1, 0]), iv(&[7, 2, 0]), iv(&[0, 0, 1]), iv(&[3, 0, 1])];
        expect.sort();
        assert_eq!(c.rays(), expect.as_slice());
        assert!(c.cross_validate());
    }

    #[test]
    fn orthant_halfspaces() {
        let c = cone_hull_i64(&[vec![1, 0], vec![0, 1]], 2).unwrap();
        let hs: Vec<Vec<BigInt>> = c.halfspaces().iter().map(|h| h.normal.clone()).collect();
        assert_eq!(hs, vec![iv(&[0, 1]), iv(&[1, 0])]);
    }

    #[test]
    fn ray_halfspaces_are_line_plus_side() {
        let c = cone_hull_i64(&[vec![1, 1]], 2).unwrap();
        let hs: Vec<Vec<BigInt>> = c.halfspaces().iter().map(|h| h.normal.clone()).collect();
        assert_eq!(hs, vec![iv(&[-1, 1]), iv(&[1, -1]), iv(&[1, 0])]);
        assert!(c.contains_point(&ivec(&[2, 2])));
        assert!(!c.contains_point(&ivec(&[2, 1])));
        assert!(!c.contains_point(&ivec(&[-1, -1])));
    }

    #[test]
    fn empty_and_zero_inputs() {
        assert_eq!(cone_hull(&[], 2).unwrap_err(), Error::EmptyCone);
        assert_eq!(cone_hull_i64(&[vec![0, 0]], 2).unwrap_err(), Error::ZeroRay);
        assert!(matches!(
            cone_hull_i64(&[vec![1, 0, 0]], 2).unwrap_err(),
            Error::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn slice_outside_projection_is_empty() {
        let c = cone_hull_i64(&[vec![1, 1, 0]], 3).unwrap();
        let p = slice_cone(&c, &ivec(&[0, 1]), 1).unwrap();
        assert!(p.is_empty());
        let p = slice_cone(&c, &ivec(&[2, 0]), 1).unwrap();
        assert_eq!(p.vertices(), &[ivec(&[2])]);
    }

    #[test]
    fn slice_of_segment_cone() {
        // cone over {0} x {1} and {3} x {1}
        let c = cone_hull_i64(&[vec![0, 1], vec![3, 1]], 2).unwrap();
        let p = slice_cone(&c, &[rat(1, 2)], 1).unwrap();
        assert_eq!(p.vertices(), &[vec![int(0)], vec![rat(3, 2)]]);
    }

    #[test]
    fn unbounded_polyhedron_is_rejected() {
        let p = polytope_from_inequalities(1, &[(iv(&[1]), int(0))]);
        assert_eq!(p.unwrap_err(), Error::Unbounded);
        let p = polytope_from_inequalities(1, &[(iv(&[1]), int(2)), (iv(&[-1]), int(-1))]);
        assert!(p.unwrap().is_empty());
    }
}
