use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::Result;
use crate::semigroup::{GradedPoint, GradedSemigroup};

/// Parameters of a seeded random generator-mode model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomModelSpec {
    pub d: usize,
    pub r: usize,
    pub n_gens: usize,
    pub v_max: u32,
    pub m_max: u32,
    pub seed: u64,
    pub bound: u32,
}

/// Draws generator lists from SplitMix64 (state seeded with `seed`;
/// increment `0x9e3779b97f4a7c15`, mixing multipliers `0xbf58476d1ce4e5b9`
/// and `0x94d049bb133111eb`). Each generator draws `d` valuation entries
/// uniformly in `[0, v_max]`, then `r` degree entries uniformly in
/// `[0, m_max]`, redrawing the degree while it is zero. Duplicates are
/// dropped, keeping first occurrences.
pub fn random_generators(spec: &RandomModelSpec) -> Vec<GradedPoint> {
    let mut rng = SplitMix64::seed_from_u64(spec.seed);
    let mut out: Vec<GradedPoint> = Vec::with_capacity(spec.n_gens);
    for _ in 0..spec.n_gens {
        let v: Vec<u32> = (0..spec.d).map(|_| rng.random_range(0..=spec.v_max)).collect();
        let m: Vec<u32> = loop {
            let m: Vec<u32> = (0..spec.r).map(|_| rng.random_range(0..=spec.m_max)).collect();
            if m.iter().any(|&x| x > 0) {
                break m;
            }
        };
        let g = GradedPoint::new(v, m);
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

pub fn random_model(spec: &RandomModelSpec) -> Result<GradedSemigroup> {
    GradedSemigroup::from_generators(spec.d, spec.r, random_generators(spec), spec.bound)
}
