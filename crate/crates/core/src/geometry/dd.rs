//! Double description: extreme rays of `{y : a_i . y >= 0}` and the
//! facet/ray pair of a finitely generated cone.
//!
//! All arithmetic is on primitive integer vectors. Constraints are added in
//! lexicographic order and two rays are combined only when the constraints
//! tight at both have rank `n - 2`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{kernel_int, rank_int, rref, to_rat_rows};
use crate::error::{Error, Result};
use crate::rational::{clear_denominators, dot_int, primitive, Rat};

#[derive(Debug, Clone)]
struct Ray {
    v: Vec<BigInt>,
    /// indices of processed constraints that vanish on `v`
    tight: Vec<usize>,
}

/// Extreme rays of the pointed cone `{y in R^n : a . y >= 0 for a in rows}`.
///
/// `rows` must have rank `n`; otherwise the cone has a lineality space and
/// `Error::NotPointed` is returned.
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>], n: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&i, &j| rows[i].cmp(&rows[j]).then(i.cmp(&j)));

    // greedy initial basis in processing order
    let mut basis: Vec<usize> = Vec::with_capacity(n);
    for &i in &order {
        if rows[i].iter().all(Zero::is_zero) {
            continue;
        }
        let mut trial: Vec<Vec<BigInt>> = basis.iter().map(|&b| rows[b].clone()).collect();
        trial.push(rows[i].clone());
        if rank_int(&trial, n) == trial.len() {
            basis.push(i);
            if basis.len() == n {
                break;
            }
        }
    }
    if basis.len() < n {
        return Err(Error::NotPointed);
    }

    // columns of the inverse of the basis matrix
    let bmat: Vec<Vec<Rat>> = to_rat_rows(&basis.iter().map(|&b| rows[b].clone()).collect::<Vec<_>>());
    let mut rays: Vec<Ray> = Vec::with_capacity(n);
    for j in 0..n {
        let mut aug: Vec<Vec<Rat>> = bmat.clone();
        for (i, row) in aug.iter_mut().enumerate() {
            row.push(if i == j { Rat::from_integer(1.into()) } else { Rat::zero() });
        }
        let (r, _) = rref(&aug, n + 1);
        let col: Vec<Rat> = r.iter().map(|row| row[n].clone()).collect();
        let v = primitive(&clear_denominators(&col));
        let tight = basis
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, &b)| b)
            .collect();
        rays.push(Ray { v, tight });
    }

    let mut processed: Vec<usize> = basis.clone();
    for &i in &order {
        if basis.contains(&i) {
            continue;
        }
        let a = &rows[i];
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next: Vec<Ray> = Vec::new();
        for ray in rays {
            let s = dot_int(a, &ray.v);
            if s.is_positive() {
                pos.push((ray, s));
            } else if s.is_negative() {
                neg.push((ray, s));
            } else {
                let mut ray = ray;
                ray.tight.push(i);
                next.push(ray);
            }
        }
        for (p, sp) in &pos {
            for (q, sq) in &neg {
                let common: Vec<usize> = p
                    .tight
                    .iter()
                    .copied()
                    .filter(|t| q.tight.contains(t))
                    .collect();
                if n >= 2 && common.len() < n - 2 {
                    continue;
                }
                let crows: Vec<&Vec<BigInt>> = common.iter().map(|&t| &rows[t]).collect();
                if rank_int(crows, n) != n.saturating_sub(2) {
                    continue;
                }
                let v: Vec<BigInt> = p
                    .v
                    .iter()
                    .zip(&q.v)
                    .map(|(x, y)| sp * y - sq * x)
                    .collect();
                let v = primitive(&v);
                let mut tight = common;
                tight.push(i);
                next.push(Ray { v, tight });
            }
        }
        next.extend(pos.into_iter().map(|(r, _)| r));
        processed.push(i);
        rays = next;
    }
    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Facet description of the cone generated by integer vectors.
#[derive(Debug, Clone)]
pub(crate) struct ConeFacets {
    /// dimension of the linear span of the generators
    pub rank: usize,
    /// primitive integer basis of the orthogonal complement of the span
    pub equations: Vec<Vec<BigInt>>,
    /// primitive inward facet normals, sorted
    pub facets: Vec<Vec<BigInt>>,
    /// indices of generators spanning extreme rays (one per ray)
    pub extreme: Vec<usize>,
}

/// Computes facets and extreme generators of `cone(gens)`.
///
/// The cone must be pointed. Zero generators are rejected.
pub(crate) fn cone_facets(gens: &[Vec<BigInt>], n: usize) -> Result<ConeFacets> {
    if gens.is_empty() {
        return Err(Error::EmptyCone);
    }
    for g in gens {
        if g.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.len() });
        }
        if g.iter().all(Zero::is_zero) {
            return Err(Error::ZeroRay);
        }
    }
    let (_, pivots) = rref(&to_rat_rows(gens), n);
    let k = pivots.len();
    let equations = {
        let mut e = kernel_int(gens, n);
        e.sort();
        e
    };
    let projected: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| pivots.iter().map(|&p| g[p].clone()).collect())
        .collect();

    let dual = extreme_rays(&projected, k)?;
    let interior: Vec<BigInt> = (0..k)
        .map(|j| dual.iter().map(|y| y[j].clone()).sum())
        .collect();
    if projected.iter().any(|g| !dot_int(g, &interior).is_positive()) {
        return Err(Error::NotPointed);
    }

    let mut facets: Vec<Vec<BigInt>> = dual
        .iter()
        .map(|y| {
            let mut full = vec![BigInt::zero(); n];
            for (j, &p) in pivots.iter().enumerate() {
                full[p] = y[j].clone();
            }
            full
        })
        .collect();
    facets.sort();

    // a generator is extreme when the facets through it have rank k - 1
    let mut extreme: Vec<usize> = Vec::new();
    let mut seen: Vec<Vec<BigInt>> = Vec::new();
    let mut idx: Vec<usize> = (0..gens.len()).collect();
    idx.sort_by(|&i, &j| gens[i].cmp(&gens[j]).then(i.cmp(&j)));
    for i in idx {
        let g = &projected[i];
        let through: Vec<&Vec<BigInt>> = dual.iter().filter(|y| dot_int(y, g).is_zero()).collect();
        if rank_int(through, k) + 1 != k {
            continue;
        }
        let prim = primitive(&gens[i]);
        if seen.contains(&prim) {
            continue;
        }
        seen.push(prim);
        extreme.push(i);
    }
    Ok(ConeFacets { rank: k, equations, facets, extreme })
}
