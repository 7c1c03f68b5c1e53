//! Sign of `vol(P + Q)^(1/n) - vol(P)^(1/n) - vol(Q)^(1/n)`.
//!
//! Dimensions one and two are decided exactly. In higher dimensions the
//! n-th roots are bracketed by integer roots at increasing binary precision
//! until the sign is certified or the precision cap is hit.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::polytope::{minkowski_weighted, Polytope};
use crate::error::{Error, Result};
use crate::rational::Rat;

/// Largest binary precision tried for dimensions three and up.
pub const PRECISION_CAP_BITS: u32 = 1 << 14;

const START_BITS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Margin {
    StrictlyGreater,
    Equal,
    Violation,
    Indeterminate,
}

/// Classifies the Brunn–Minkowski margin of `p` and `q`.
pub fn brunn_minkowski_margin(p: &Polytope, q: &Polytope) -> Result<Margin> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: q.dim() });
    }
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let n = p.dim();
    let one = Rat::one();
    let sum = minkowski_weighted(&[p.clone(), q.clone()], &[one.clone(), one])?;
    Ok(classify(&sum.volume(), &p.volume(), &q.volume(), n))
}

/// Sign of `s^(1/n) - a^(1/n) - b^(1/n)` for nonnegative rationals.
pub fn classify(s: &Rat, a: &Rat, b: &Rat, n: usize) -> Margin {
    match n {
        0 => Margin::Equal,
        1 => from_sign(&(s - a - b)),
        2 => {
            // sqrt(s) vs sqrt(a) + sqrt(b)  <=>  s - a - b vs 2 sqrt(ab)
            let diff = s - a - b;
            if diff.is_negative() {
                return Margin::Violation;
            }
            let four = Rat::from_integer(BigInt::from(4));
            from_sign(&(&diff * &diff - four * a * b))
        }
        _ => classify_interval(s, a, b, n as u32),
    }
}

fn from_sign(x: &Rat) -> Margin {
    if x.is_positive() {
        Margin::StrictlyGreater
    } else if x.is_zero() {
        Margin::Equal
    } else {
        Margin::Violation
    }
}

fn classify_interval(s: &Rat, a: &Rat, b: &Rat, n: u32) -> Margin {
    if let Some(m) = exact_by_ratios(s, a, b, n) {
        return m;
    }
    let mut bits = START_BITS;
    while bits <= PRECISION_CAP_BITS {
        let (sl, su) = root_bounds(s, n, bits);
        let (al, au) = root_bounds(a, n, bits);
        let (bl, bu) = root_bounds(b, n, bits);
        // all bounds share the denominator 2^bits
        if sl.clone() - &au - &bu > BigInt::zero() {
            return Margin::StrictlyGreater;
        }
        if su - al - bl < BigInt::zero() {
            return Margin::Violation;
        }
        bits *= 2;
    }
    Margin::Indeterminate
}

/// Decides the sign exactly when both `a / s` and `b / s` are n-th powers
/// of rationals (the homothetic case), where the roots are rational.
fn exact_by_ratios(s: &Rat, a: &Rat, b: &Rat, n: u32) -> Option<Margin> {
    if s.is_zero() {
        return Some(from_sign(&-(a + b)));
    }
    let ra = rational_root(&(a / s), n)?;
    let rb = rational_root(&(b / s), n)?;
    Some(from_sign(&(Rat::one() - ra - rb)))
}

fn rational_root(x: &Rat, n: u32) -> Option<Rat> {
    let num = x.numer().nth_root(n);
    let den = x.denom().nth_root(n);
    (num.pow(n) == *x.numer() && den.pow(n) == *x.denom()).then(|| Rat::new(num, den))
}

/// Integers `lo, hi` with `lo / 2^bits <= x^(1/n) <= hi / 2^bits`.
fn root_bounds(x: &Rat, n: u32, bits: u32) -> (BigInt, BigInt) {
    let scale = BigInt::one() << (bits as usize * n as usize);
    let scaled = x * Rat::from_integer(scale);
    let floor = scaled.floor().to_integer();
    let lo = floor.nth_root(n);
    let ceil = scaled.ceil().to_integer();
    let r = ceil.nth_root(n);
    let hi = if r.pow(n) == ceil { r } else { r + 1 };
    (lo, hi)
}
