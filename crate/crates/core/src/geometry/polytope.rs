use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::cone::Halfspace;
use super::dd::cone_facets;
use super::linalg::determinant;
use crate::error::{Error, Result};
use crate::rational::{clear_denominators, factorial, primitive, QVector, Rat};

/// A convex polytope stored as its exact vertex set in lexicographic order.
///
/// The empty vertex list is the empty polytope. Two polytopes are equal iff
/// their canonical vertex lists are equal.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<QVector>,
    faces: OnceLock<Faces>,
}

/// Affine H-representation of a polytope relative to its affine hull.
#[derive(Debug, Clone, Default)]
struct Faces {
    affine_dim: usize,
    /// `normal . x = offset` for every point of the polytope
    equations: Vec<Halfspace>,
    facets: Vec<Halfspace>,
    /// canonical vertex indices tight on each facet
    facet_vertices: Vec<Vec<usize>>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let verts: Vec<Vec<String>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect();
        let mut st = s.serialize_struct("Polytope", 3)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("vertices", &verts)?;
        st.serialize_field("volume", &self.volume().to_string())?;
        st.end()
    }
}

impl Polytope {
    pub fn empty(dim: usize) -> Self {
        Self { dim, vertices: Vec::new(), faces: OnceLock::new() }
    }

    /// Convex hull of a finite point set.
    pub fn hull(points: &[QVector], dim: usize) -> Result<Self> {
        convex_hull(points, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the affine hull; `None` for the empty polytope.
    pub fn affine_dim(&self) -> Option<usize> {
        (!self.is_empty()).then(|| self.faces().affine_dim)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == Some(self.dim)
    }

    /// Inequalities `normal . x >= offset` cutting out the polytope,
    /// equations of the affine hull included as `+-` pairs.
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        let f = self.faces();
        let mut out: Vec<Halfspace> = f.facets.clone();
        for e in &f.equations {
            out.push(e.clone());
            let neg = Halfspace {
                normal: e.normal.iter().map(|x| -x).collect(),
                offset: -e.offset.clone(),
            };
            out.push(neg);
        }
        out
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        if self.is_empty() {
            return false;
        }
        let f = self.faces();
        f.equations.iter().all(|e| e.is_tight(x)) && f.facets.iter().all(|h| h.contains(x))
    }

    /// Exact Lebesgue volume in the ambient dimension; zero when the
    /// polytope is empty or lower-dimensional.
    pub fn volume(&self) -> Rat {
        polytope_volume(self)
    }

    pub fn scale(&self, t: &Rat) -> Polytope {
        assert!(!t.is_negative(), "scale factor must be nonnegative");
        if self.is_empty() {
            return self.clone();
        }
        let pts: Vec<QVector> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x * t).collect())
            .collect();
        convex_hull(&pts, self.dim).expect("same dimension")
    }

    pub fn translate(&self, by: &[Rat]) -> Result<Polytope> {
        if by.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: by.len() });
        }
        let pts: Vec<QVector> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(by).map(|(x, y)| x + y).collect())
            .collect();
        convex_hull(&pts, self.dim)
    }

    pub fn centroid_of_vertices(&self) -> Option<QVector> {
        if self.is_empty() {
            return None;
        }
        let n = Rat::from_integer(BigInt::from(self.vertices.len()));
        Some(
            (0..self.dim)
                .map(|j| self.vertices.iter().map(|v| v[j].clone()).sum::<Rat>() / &n)
                .collect(),
        )
    }

    fn faces(&self) -> &Faces {
        self.faces.get_or_init(|| compute_faces(&self.vertices, self.dim).1)
    }
}

fn homogenize(points: &[QVector]) -> Vec<Vec<BigInt>> {
    points
        .iter()
        .map(|p| {
            let mut h = p.clone();
            h.push(Rat::from_integer(1.into()));
            primitive(&clear_denominators(&h))
        })
        .collect()
}

/// Extreme point indices and face data for a nonempty, deduplicated point
/// set.
fn compute_faces(points: &[QVector], dim: usize) -> (Vec<usize>, Faces) {
    if points.is_empty() {
        return (Vec::new(), Faces::default());
    }
    let gens = homogenize(points);
    let cf = cone_facets(&gens, dim + 1).expect("homogenized points span a pointed cone");
    let to_affine = |n: &Vec<BigInt>| -> Option<Halfspace> {
        let (nx, c) = n.split_at(dim);
        Halfspace::new(nx.to_vec(), Rat::from_integer(-c[0].clone()))
    };
    let equations: Vec<Halfspace> = cf.equations.iter().filter_map(to_affine).collect();
    let mut facets = Vec::new();
    let mut facet_vertices = Vec::new();
    let extreme: Vec<usize> = {
        let mut e = cf.extreme.clone();
        e.sort_by(|&i, &j| points[i].cmp(&points[j]));
        e
    };
    for n in &cf.facets {
        let Some(h) = to_affine(n) else { continue };
        let tight: Vec<usize> = extreme
            .iter()
            .enumerate()
            .filter(|(_, &i)| h.is_tight(&points[i]))
            .map(|(k, _)| k)
            .collect();
        facets.push(h);
        facet_vertices.push(tight);
    }
    let faces = Faces { affine_dim: cf.rank - 1, equations, facets, facet_vertices };
    (extreme, faces)
}

/// Canonical convex hull of `points`.
pub fn convex_hull(points: &[QVector], dim: usize) -> Result<Polytope> {
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.is_empty() {
        return Ok(Polytope::empty(dim));
    }
    let (extreme, faces) = compute_faces(&pts, dim);
    let vertices: Vec<QVector> = extreme.iter().map(|&i| pts[i].clone()).collect();
    let poly = Polytope { dim, vertices, faces: OnceLock::new() };
    let _ = poly.faces.set(faces);
    Ok(poly)
}

/// Simplices (as index lists into `points`) of a fan triangulation from the
/// first vertex, applied recursively to every facet missing that vertex.
fn fan_triangulation(points: &[QVector], dim: usize) -> Vec<Vec<usize>> {
    let (extreme, faces) = compute_faces(points, dim);
    if faces.affine_dim == 0 {
        return vec![vec![extreme[0]]];
    }
    let apex = 0usize; // canonical index of the first vertex
    let mut out = Vec::new();
    for tight in &faces.facet_vertices {
        if tight.contains(&apex) {
            continue;
        }
        let sub: Vec<QVector> = tight.iter().map(|&k| points[extreme[k]].clone()).collect();
        for simplex in fan_triangulation(&sub, dim) {
            let mut s = vec![extreme[apex]];
            s.extend(simplex.iter().map(|&j| extreme[tight[j]]));
            out.push(s);
        }
    }
    out
}

/// Exact volume by fan triangulation from the first canonical vertex.
pub fn polytope_volume(p: &Polytope) -> Rat {
    if !p.is_full_dimensional() {
        return Rat::zero();
    }
    let n = p.dim;
    let simplices = fan_triangulation(&p.vertices, n);
    let total: Rat = simplices
        .iter()
        .map(|s| simplex_volume_times_factorial(&p.vertices, s))
        .sum();
    total / Rat::from_integer(factorial(n))
}

fn simplex_volume_times_factorial(points: &[QVector], s: &[usize]) -> Rat {
    let base = &points[s[0]];
    let m: Vec<Vec<Rat>> = s[1..]
        .iter()
        .map(|&i| points[i].iter().zip(base).map(|(x, b)| x - b).collect())
        .collect();
    determinant(&m).abs()
}

/// The weighted Minkowski sum `sum_j t_j P_j`.
pub fn minkowski_weighted(polytopes: &[Polytope], weights: &[Rat]) -> Result<Polytope> {
    if polytopes.is_empty() {
        return Err(Error::EmptyInput);
    }
    if weights.len() != polytopes.len() {
        return Err(Error::DimensionMismatch { expected: polytopes.len(), found: weights.len() });
    }
    let dim = polytopes[0].dim;
    for p in polytopes {
        if p.dim != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim });
        }
    }
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(Error::NegativeWeight(w.to_string()));
    }
    let mut acc: Vec<QVector> = vec![vec![Rat::zero(); dim]];
    for (p, t) in polytopes.iter().zip(weights) {
        if t.is_zero() {
            continue;
        }
        if p.is_empty() {
            return Ok(Polytope::empty(dim));
        }
        let mut sums = Vec::with_capacity(acc.len() * p.vertices.len());
        for a in &acc {
            for v in &p.vertices {
                sums.push(a.iter().zip(v).map(|(x, y)| x + y * t).collect::<QVector>());
            }
        }
        acc = convex_hull(&sums, dim)?.vertices;
    }
    convex_hull(&acc, dim)
}

/// Whether `q` is a subset of `p`.
pub fn contains(p: &Polytope, q: &Polytope) -> Result<bool> {
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, found: q.dim });
    }
    if q.is_empty() {
        return Ok(true);
    }
    if p.is_empty() {
        return Ok(false);
    }
    Ok(q.vertices.iter().all(|v| p.contains_point(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ivec, qvec, rat};

    fn square() -> Polytope {
        convex_hull(&[ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, 1])], 2).unwrap()
    }

    fn triangle() -> Polytope {
        convex_hull(&[ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1])], 2).unwrap()
    }

    #[test]
    fn interior_point_removed() {
        let p = convex_hull(
            &[ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1]), qvec(&[(1, 4), (1, 4)])],
            2,
        )
        .unwrap();
        assert_eq!(p, triangle());
        assert_eq!(p.vertices().len(), 3);
    }

    #[test]
    fn collinear_points_reduce_to_segment() {
        let p = convex_hull(&[ivec(&[0]), ivec(&[1]), ivec(&[2])], 1).unwrap();
        assert_eq!(p.vertices(), &[ivec(&[0]), ivec(&[2])]);
        let p = convex_hull(&[ivec(&[0, 0]), ivec(&[1, 1]), ivec(&[3, 3])], 2).unwrap();
        assert_eq!(p.vertices(), &[ivec(&[0, 0]), ivec(&[3, 3])]);
        assert_eq!(p.affine_dim(), Some(1));
        assert_eq!(p.volume(), int(0));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            convex_hull(&[ivec(&[0, 0]), ivec(&[1])], 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn basic_volumes() {
        assert_eq!(square().volume(), int(1));
        assert_eq!(triangle().volume(), rat(1, 2));
        assert_eq!(Polytope::empty(2).volume(), int(0));
        let cube: Vec<QVector> = (0..8)
            .map(|i| ivec(&[i & 1, (i >> 1) & 1, (i >> 2) & 1]))
            .collect();
        let c = convex_hull(&cube, 3).unwrap();
        assert_eq!(c.volume(), int(1));
        let simplex = convex_hull(
            &[ivec(&[0, 0, 0]), ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[0, 0, 1])],
            3,
        )
        .unwrap();
        assert_eq!(simplex.volume(), rat(1, 6));
    }

    #[test]
    fn minkowski_identity_and_segments() {
        let sq = square();
        assert_eq!(minkowski_weighted(&[sq.clone()], &[int(1)]).unwrap(), sq);
        let sx = convex_hull(&[ivec(&[0, 0]), ivec(&[1, 0])], 2).unwrap();
        let sy = convex_hull(&[ivec(&[0, 0]), ivec(&[0, 1])], 2).unwrap();
        assert_eq!(minkowski_weighted(&[sx, sy], &[int(1), int(1)]).unwrap(), sq);
    }

    #[test]
    fn minkowski_errors() {
        assert_eq!(minkowski_weighted(&[], &[]).unwrap_err(), Error::EmptyInput);
        assert!(matches!(
            minkowski_weighted(&[square()], &[int(-1)]),
            Err(Error::NegativeWeight(_))
        ));
        let e = minkowski_weighted(&[square(), Polytope::empty(2)], &[int(1), int(1)]).unwrap();
        assert!(e.is_empty());
        let z = minkowski_weighted(&[square(), Polytope::empty(2)], &[int(1), int(0)]).unwrap();
        assert_eq!(z, square());
    }

    #[test]
    fn containment() {
        let c = convex_hull(&[qvec(&[(1, 2), (1, 2)])], 2).unwrap();
        assert!(contains(&square(), &c).unwrap());
        assert!(!contains(&triangle(), &square()).unwrap());
        assert!(contains(&square(), &triangle()).unwrap());
        assert!(contains(&triangle(), &Polytope::empty(2)).unwrap());
        assert!(!contains(&Polytope::empty(2), &triangle()).unwrap());
    }

    #[test]
    fn lower_dimensional_containment_uses_equations() {
        let seg = convex_hull(&[ivec(&[0, 0]), ivec(&[2, 2])], 2).unwrap();
        let on = convex_hull(&[ivec(&[1, 1])], 2).unwrap();
        let off = convex_hull(&[ivec(&[1, 0])], 2).unwrap();
        assert!(contains(&seg, &on).unwrap());
        assert!(!contains(&seg, &off).unwrap());
    }

    #[test]
    fn scale_and_translate() {
        let t = triangle();
        assert_eq!(t.scale(&int(3)).volume(), rat(9, 2));
        assert_eq!(t.translate(&qvec(&[(1, 3), (-5, 2)])).unwrap().volume(), rat(1, 2));
        assert!(t.scale(&int(0)).vertices().len() == 1);
    }
}
