//! Graded valuation semigroups standing in for multigraded linear series.
//!
//! A [`GradedSemigroup`] holds, for every multidegree `m` with `|m| <= B`,
//! the finite set `Γ_m ⊂ ℕ^d` of valuation vectors in that degree. Pieces
//! are either materialized from generators by dynamic programming or, for
//! complete toric models, enumerated directly as lattice points of a
//! Minkowski sum.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::toric::{self, LatticePolytope};
use crate::rational::{format_qvector, QVector, Rat};

/// A valuation vector in `ℕ^d`.
pub type ValuationVector = Vec<u32>;

/// A multidegree `m ∈ ℕ^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiDegree(Vec<u32>);

impl MultiDegree {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(r: usize) -> Self {
        Self(vec![0; r])
    }

    pub fn unit(r: usize, i: usize) -> Self {
        let mut e = vec![0; r];
        e[i] = 1;
        Self(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    /// `|m| = Σ m_i`
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: u32) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    /// `self - other` when `other <= self` componentwise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    pub fn to_rat(&self) -> QVector {
        self.0.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect()
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(":"))
    }
}

/// An element `(v, m)` of the graded semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedPoint {
    pub v: ValuationVector,
    pub m: MultiDegree,
}

impl GradedPoint {
    pub fn new(v: Vec<u32>, m: Vec<u32>) -> Self {
        Self { v, m: MultiDegree(m) }
    }
}

/// A nonzero direction `a ∈ ℚ^r_{≥0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalDirection(QVector);

impl RationalDirection {
    pub fn new(coords: QVector) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(Signed::is_negative) || coords.iter().all(Zero::is_zero) {
            return Err(Error::InvalidDirection(format_qvector(&coords)));
        }
        Ok(Self(coords))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(crate::rational::parse_qvector(text)?)
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> Rat {
        self.0.iter().sum()
    }

    /// The representative on the simplex `T` (entries summing to one).
    pub fn normalized(&self) -> Self {
        let s = self.sum();
        Self(self.0.iter().map(|x| x / &s).collect())
    }

    pub fn scaled(&self, lambda: &Rat) -> Result<Self> {
        Self::new(self.0.iter().map(|x| x * lambda).collect())
    }

    /// `k · a` as a multidegree when it is integral.
    pub fn times(&self, k: u64) -> Option<MultiDegree> {
        let k = Rat::from_integer(BigInt::from(k));
        self.0
            .iter()
            .map(|x| {
                let y = x * &k;
                y.is_integer().then(|| u32::try_from(y.to_integer()).ok()).flatten()
            })
            .collect::<Option<Vec<_>>>()
            .map(MultiDegree)
    }

    /// The primitive integer vector on the ray through `a`.
    pub fn primitive_integer(&self) -> MultiDegree {
        let l = self.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|x| x.numer() * (&l / x.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        MultiDegree(
            ints.iter()
                .map(|x| u32::try_from(x / &g).expect("direction entries fit in u32"))
                .collect(),
        )
    }
}

impl fmt::Display for RationalDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_qvector(&self.0))
    }
}

/// How the pieces of a semigroup are produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    /// Finitely generated; pieces materialized up to the bound.
    Generators(Vec<GradedPoint>),
    /// Complete toric model: `Γ_m = (m_1 P_1 + ... + m_r P_r) ∩ ℤ^d`.
    Toric(Vec<LatticePolytope>),
}

#[derive(Debug, Clone)]
pub struct GradedSemigroup {
    d: usize,
    r: usize,
    bound: u32,
    source: Source,
    pieces: BTreeMap<MultiDegree, Vec<ValuationVector>>,
}

impl PartialEq for GradedSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.r == other.r && self.bound == other.bound && self.source == other.source
    }
}

impl Eq for GradedSemigroup {}

/// All multidegrees with `1 <= |m| <= bound`, by total degree then
/// lexicographically.
pub fn degrees_up_to(r: usize, bound: u32) -> Vec<MultiDegree> {
    let mut out = Vec::new();
    for t in 1..=bound {
        out.extend(degrees_of_total(r, t));
    }
    out
}

/// All multidegrees with `|m| = total`, lexicographically.
pub fn degrees_of_total(r: usize, total: u32) -> Vec<MultiDegree> {
    fn rec(r: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiDegree>) {
        if cur.len() + 1 == r {
            cur.push(left);
            out.push(MultiDegree(cur.clone()));
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(r, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        return out;
    }
    rec(r, total, &mut Vec::with_capacity(r), &mut out);
    out
}

/// Sorted, deduplicated sumset `A + B`.
pub fn sumset(a: &[ValuationVector], b: &[ValuationVector]) -> Vec<ValuationVector> {
    let set: BTreeSet<ValuationVector> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| x.iter().zip(y).map(|(p, q)| p + q).collect()))
        .collect();
    set.into_iter().collect()
}

/// Degree-`p` subseries generated along one ray: the degree-`kp` piece is
/// the `k`-fold sumset of the degree-`p` piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayTruncation {
    d: usize,
    base: Vec<ValuationVector>,
}

impl RayTruncation {
    pub fn base(&self) -> &[ValuationVector] {
        &self.base
    }

    pub fn piece(&self, k: u32) -> Vec<ValuationVector> {
        let mut acc = vec![vec![0; self.d]];
        for _ in 0..k {
            acc = sumset(&acc, &self.base);
        }
        acc
    }
}

/// Nonempty degrees up to a bound and their normalized directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportReport {
    pub degrees: Vec<MultiDegree>,
    pub directions: Vec<RationalDirection>,
}

impl GradedSemigroup {
    /// Materializes the semigroup generated by `gens` in all degrees
    /// `|m| <= bound`.
    pub fn from_generators(d: usize, r: usize, gens: Vec<GradedPoint>, bound: u32) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: g.v.len() });
            }
            if g.m.r() != r {
                return Err(Error::DimensionMismatch { expected: r, found: g.m.r() });
            }
            if g.m.is_zero() {
                return Err(Error::ZeroDegreeGenerator { index: i });
            }
        }
        let needed = gens.iter().map(|g| g.m.total()).max().unwrap_or(0);
        if needed > bound as u64 {
            return Err(Error::BoundTooSmall { bound, needed: needed as u32 });
        }
        let mut pieces: BTreeMap<MultiDegree, Vec<ValuationVector>> = BTreeMap::new();
        pieces.insert(MultiDegree::zero(r), vec![vec![0; d]]);
        for m in degrees_up_to(r, bound) {
            let mut set: HashSet<ValuationVector> = HashSet::new();
            for g in &gens {
                let Some(rest) = m.checked_sub(&g.m) else { continue };
                let Some(prev) = pieces.get(&rest) else { continue };
                for w in prev {
                    set.insert(g.v.iter().zip(w).map(|(a, b)| a + b).collect());
                }
            }
            if !set.is_empty() {
                let mut piece: Vec<ValuationVector> = set.into_iter().collect();
                piece.sort();
                pieces.insert(m, piece);
            }
        }
        Ok(Self { d, r, bound, source: Source::Generators(gens), pieces })
    }

    /// Complete toric model over lattice polytopes. Validation lives in
    /// [`crate::models::toric_model`].
    pub(crate) fn from_toric(d: usize, polytopes: Vec<LatticePolytope>, bound: u32) -> Self {
        let r = polytopes.len();
        Self { d, r, bound, source: Source::Toric(polytopes), pieces: BTreeMap::new() }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.source, Source::Toric(_))
    }

    fn check_degree(&self, m: &MultiDegree) -> Result<()> {
        if m.r() != self.r {
            return Err(Error::DimensionMismatch { expected: self.r, found: m.r() });
        }
        if m.total() > self.bound as u64 {
            return Err(Error::BeyondBound { degree: m.total(), bound: self.bound });
        }
        Ok(())
    }

    /// The graded piece `Γ_m`, sorted.
    pub fn piece(&self, m: &MultiDegree) -> Result<Cow<'_, [ValuationVector]>> {
        self.check_degree(m)?;
        if m.is_zero() {
            return Ok(Cow::Owned(vec![vec![0; self.d]]));
        }
        match &self.source {
            Source::Generators(_) => Ok(self
                .pieces
                .get(m)
                .map(|p| Cow::Borrowed(p.as_slice()))
                .unwrap_or(Cow::Borrowed(&[]))),
            Source::Toric(polys) => Ok(Cow::Owned(toric::lattice_points(polys, m, self.d))),
        }
    }

    /// `#Γ_m`
    pub fn hilbert(&self, m: &MultiDegree) -> Result<usize> {
        Ok(self.piece(m)?.len())
    }

    /// `Γ_{k a}` when `k a` is integral, otherwise empty.
    pub fn restrict_ray(&self, a: &RationalDirection, k: u64) -> Result<Vec<ValuationVector>> {
        if a.r() != self.r {
            return Err(Error::DimensionMismatch { expected: self.r, found: a.r() });
        }
        match a.times(k) {
            Some(m) => Ok(self.piece(&m)?.into_owned()),
            None => Ok(Vec::new()),
        }
    }

    /// All elements of total degree exactly `p`, sorted by degree then
    /// valuation.
    pub fn points_of_total(&self, p: u32) -> Result<Vec<GradedPoint>> {
        if p as u64 > self.bound as u64 {
            return Err(Error::BeyondBound { degree: p as u64, bound: self.bound });
        }
        let mut out = Vec::new();
        for m in degrees_of_total(self.r, p) {
            for v in self.piece(&m)?.iter() {
                out.push(GradedPoint { v: v.clone(), m: m.clone() });
            }
        }
        Ok(out)
    }

    /// The subsemigroup generated by all pieces of total degree `p`,
    /// materialized to the same bound.
    pub fn truncate(&self, p: u32) -> Result<GradedSemigroup> {
        if p == 0 {
            return Err(Error::InvalidDirection("truncation degree must be positive".into()));
        }
        let gens = self.points_of_total(p)?;
        GradedSemigroup::from_generators(self.d, self.r, gens, self.bound)
    }

    /// The singly graded series generated by `Γ_{p a}` along the ray of `a`.
    pub fn truncate_ray(&self, a: &RationalDirection, p: u32) -> Result<RayTruncation> {
        let m = a
            .times(p as u64)
            .ok_or_else(|| Error::NonIntegralDirection(format!("{p}*({a})")))?;
        Ok(RayTruncation { d: self.d, base: self.piece(&m)?.into_owned() })
    }

    /// Degrees `1 <= |m| <= bound` with nonempty pieces.
    pub fn support(&self, bound: u32) -> Result<SupportReport> {
        if bound > self.bound {
            return Err(Error::BeyondBound { degree: bound as u64, bound: self.bound });
        }
        let mut degrees = Vec::new();
        for m in degrees_up_to(self.r, bound) {
            if self.hilbert(&m)? > 0 {
                degrees.push(m);
            }
        }
        let mut directions: Vec<RationalDirection> = degrees
            .iter()
            .map(|m| RationalDirection(m.to_rat()).normalized())
            .collect();
        directions.sort();
        directions.dedup();
        Ok(SupportReport { degrees, directions })
    }

    /// Checks `Γ_k + Γ_m ⊆ Γ_{k+m}` for all `|k| + |m| <= max_total`.
    pub fn is_superadditive_up_to(&self, max_total: u32) -> Result<bool> {
        let max_total = max_total.min(self.bound);
        let degs = degrees_up_to(self.r, max_total);
        let mut cache: BTreeMap<MultiDegree, Vec<ValuationVector>> = BTreeMap::new();
        for m in &degs {
            cache.insert(m.clone(), self.piece(m)?.into_owned());
        }
        for k in &degs {
            for m in &degs {
                if k.total() + m.total() > max_total as u64 {
                    continue;
                }
                let target = &cache[&k.add(m)];
                for v in sumset(&cache[k], &cache[m]) {
                    if target.binary_search(&v).is_err() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::fixtures;
    use crate::rational::{int, qvec};

    fn vals(xs: &[u32]) -> Vec<ValuationVector> {
        xs.iter().map(|&x| vec![x]).collect()
    }

    fn md(x: &[u32]) -> MultiDegree {
        MultiDegree::new(x.to_vec())
    }

    #[test]
    fn degree_enumeration_counts() {
        assert_eq!(degrees_of_total(2, 3).len(), 4);
        assert_eq!(degrees_of_total(3, 2).len(), 6);
        assert_eq!(degrees_up_to(2, 2).len(), 5);
        assert_eq!(degrees_of_total(2, 2), vec![md(&[0, 2]), md(&[1, 1]), md(&[2, 0])]);
    }

    #[test]
    fn e1_pieces() {
        let e1 = fixtures::e1();
        assert_eq!(e1.piece(&md(&[1, 0])).unwrap().as_ref(), vals(&[0, 2]).as_slice());
        assert_eq!(e1.piece(&md(&[2, 0])).unwrap().as_ref(), vals(&[0, 2, 4, 7]).as_slice());
        assert_eq!(e1.piece(&md(&[0, 0])).unwrap().as_ref(), vals(&[0]).as_slice());
        assert_eq!(e1.hilbert(&md(&[2, 0])).unwrap(), 4);
        assert_eq!(e1.hilbert(&md(&[0, 0])).unwrap(), 1);
    }

    #[test]
    fn single_generator() {
        let s = GradedSemigroup::from_generators(1, 1, vec![GradedPoint::new(vec![1], vec![1])], 10).unwrap();
        for k in 0..=10u32 {
            assert_eq!(s.piece(&md(&[k])).unwrap().as_ref(), vals(&[k]).as_slice());
        }
    }

    #[test]
    fn empty_generator_list() {
        let s = GradedSemigroup::from_generators(1, 2, vec![], 5).unwrap();
        assert_eq!(s.hilbert(&md(&[0, 0])).unwrap(), 1);
        for m in degrees_up_to(2, 5) {
            assert_eq!(s.hilbert(&m).unwrap(), 0);
        }
        assert!(s.support(5).unwrap().degrees.is_empty());
    }

    #[test]
    fn construction_errors() {
        let zero = GradedSemigroup::from_generators(1, 2, vec![GradedPoint::new(vec![1], vec![0, 0])], 4);
        assert_eq!(zero.unwrap_err(), Error::ZeroDegreeGenerator { index: 0 });
        let small = GradedSemigroup::from_generators(1, 1, vec![GradedPoint::new(vec![1], vec![5])], 4);
        assert_eq!(small.unwrap_err(), Error::BoundTooSmall { bound: 4, needed: 5 });
        let e1 = fixtures::e1();
        assert_eq!(
            e1.piece(&md(&[41, 0])).unwrap_err(),
            Error::BeyondBound { degree: 41, bound: 40 }
        );
    }

    #[test]
    fn ray_restriction() {
        let e1 = fixtures::e1();
        let half = RationalDirection::new(qvec(&[(1, 2), (1, 2)])).unwrap();
        assert!(e1.restrict_ray(&half, 1).unwrap().is_empty());
        assert_eq!(e1.restrict_ray(&half, 2).unwrap(), vals(&[0, 2, 3, 5]));
        let edge = RationalDirection::new(vec![int(1), int(0)]).unwrap();
        assert_eq!(e1.restrict_ray(&edge, 2).unwrap(), vals(&[0, 2, 4, 7]));
    }

    #[test]
    fn truncation_examples() {
        let e1 = fixtures::e1();
        let t1 = e1.truncate(1).unwrap();
        assert_eq!(t1.piece(&md(&[2, 0])).unwrap().as_ref(), vals(&[0, 2, 4]).as_slice());
        let t2 = e1.truncate(2).unwrap();
        assert_eq!(t2.piece(&md(&[2, 0])).unwrap().as_ref(), vals(&[0, 2, 4, 7]).as_slice());
        assert!(t2.piece(&md(&[1, 0])).unwrap().is_empty());
        assert!(e1.truncate(41).is_err());
    }

    #[test]
    fn ray_truncation_examples() {
        let e1 = fixtures::e1();
        let edge = RationalDirection::new(vec![int(1), int(0)]).unwrap();
        let t = e1.truncate_ray(&edge, 2).unwrap();
        assert_eq!(t.piece(2), vals(&[0, 2, 4, 6, 7, 8, 9, 11, 14]));
        assert_eq!(t.piece(0), vals(&[0]));
        let t = e1.truncate_ray(&edge, 1).unwrap();
        assert_eq!(t.piece(3), vals(&[0, 2, 4, 6]));
        let half = RationalDirection::new(qvec(&[(1, 2), (1, 2)])).unwrap();
        assert!(matches!(e1.truncate_ray(&half, 1), Err(Error::NonIntegralDirection(_))));
    }

    #[test]
    fn support_examples() {
        let e1 = fixtures::e1();
        let s = e1.support(2).unwrap();
        let mut expect = vec![md(&[1, 0]), md(&[0, 1]), md(&[2, 0]), md(&[1, 1]), md(&[0, 2])];
        expect.sort_by(|a, b| a.total().cmp(&b.total()).then(a.cmp(b)));
        assert_eq!(s.degrees, expect);
        assert_eq!(s.directions.len(), 3);
        let single =
            GradedSemigroup::from_generators(1, 2, vec![GradedPoint::new(vec![1], vec![1, 0])], 3).unwrap();
        assert_eq!(single.support(3).unwrap().degrees, vec![md(&[1, 0]), md(&[2, 0]), md(&[3, 0])]);
    }

    #[test]
    fn direction_helpers() {
        let a = RationalDirection::new(qvec(&[(1, 3), (2, 3)])).unwrap();
        assert_eq!(a.primitive_integer(), md(&[1, 2]));
        assert_eq!(a.times(3), Some(md(&[1, 2])));
        assert_eq!(a.times(2), None);
        let b = RationalDirection::new(vec![int(2), int(6)]).unwrap();
        assert_eq!(b.normalized().coords(), qvec(&[(1, 4), (3, 4)]).as_slice());
        assert!(RationalDirection::new(vec![int(0), int(0)]).is_err());
        assert!(RationalDirection::new(vec![int(-1), int(2)]).is_err());
    }

    #[test]
    fn e1_superadditive() {
        assert!(fixtures::e1().is_superadditive_up_to(8).unwrap());
    }
}
