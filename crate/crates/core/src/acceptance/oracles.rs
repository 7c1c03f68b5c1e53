//! Independent reference computations. None of these go through the cone,
//! double description or semigroup code paths they are used to check.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::rational::{QVector, Rat};
use crate::semigroup::GradedPoint;

/// Closure of `gens` under addition, up to total degree `bound`, by
/// breadth-first search from the origin. Keyed by degree.
pub fn bfs_semigroup(gens: &[GradedPoint], bound: u32) -> BTreeMap<Vec<u32>, BTreeSet<Vec<u32>>> {
    let Some(first) = gens.first() else {
        return BTreeMap::new();
    };
    let (d, r) = (first.v.len(), first.m.r());
    let mut seen: BTreeSet<(Vec<u32>, Vec<u32>)> = BTreeSet::new();
    let mut frontier = vec![(vec![0u32; r], vec![0u32; d])];
    while let Some((m, v)) = frontier.pop() {
        for g in gens {
            let m2: Vec<u32> = m.iter().zip(g.m.entries()).map(|(a, b)| a + b).collect();
            if m2.iter().map(|&x| x as u64).sum::<u64>() > bound as u64 {
                continue;
            }
            let v2: Vec<u32> = v.iter().zip(&g.v).map(|(a, b)| a + b).collect();
            if seen.insert((m2.clone(), v2.clone())) {
                frontier.push((m2, v2));
            }
        }
    }
    let mut out: BTreeMap<Vec<u32>, BTreeSet<Vec<u32>>> = BTreeMap::new();
    for (m, v) in seen {
        out.entry(m).or_default().insert(v);
    }
    out
}

fn cross(o: &[Rat], a: &[Rat], b: &[Rat]) -> Rat {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Andrew's monotone chain; counterclockwise, collinear points dropped.
pub fn hull_2d(points: &[QVector]) -> Vec<QVector> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<QVector> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<QVector> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Shoelace area of the convex hull of `points`.
pub fn shoelace_area(points: &[QVector]) -> Rat {
    let h = hull_2d(points);
    if h.len() < 3 {
        return Rat::zero();
    }
    let mut twice = Rat::zero();
    for i in 0..h.len() {
        let (a, b) = (&h[i], &h[(i + 1) % h.len()]);
        twice += &a[0] * &b[1] - &a[1] * &b[0];
    }
    twice.abs() / Rat::from_integer(BigInt::from(2))
}

/// Lattice points of a lattice polygon by Pick's theorem: `A + B/2 + 1`.
pub fn pick_count(points: &[QVector]) -> BigInt {
    let h = hull_2d(points);
    let mut boundary = BigInt::zero();
    for i in 0..h.len() {
        let (a, b) = (&h[i], &h[(i + 1) % h.len()]);
        let dx = (&b[0] - &a[0]).to_integer();
        let dy = (&b[1] - &a[1]).to_integer();
        boundary += dx.gcd(&dy);
    }
    let area = shoelace_area(points);
    (area + Rat::new(boundary, BigInt::from(2)) + Rat::from_integer(BigInt::from(1))).to_integer()
}

/// `2! · vol(a_1 P_1 + a_2 P_2)` from the mixed-volume expansion
/// `a_1² V(P_1) + 2 a_1 a_2 V(P_1, P_2) + a_2² V(P_2)`, with
/// `V(P_1, P_2) = (vol(P_1 + P_2) − vol P_1 − vol P_2) / 2`.
pub fn mixed_volume_2d(v1: &Rat, v2: &Rat, v12: &Rat, a1: &Rat, a2: &Rat) -> Rat {
    let two = Rat::from_integer(BigInt::from(2));
    let mixed = (v12 - v1 - v2) / &two;
    &two * (a1 * a1 * v1 + &two * a1 * a2 * &mixed + a2 * a2 * v2)
}
