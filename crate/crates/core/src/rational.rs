//! Exact rational scalars and small helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

/// A point or direction with exact rational coordinates.
pub type QVector = Vec<Rat>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn qvec(coords: &[(i64, i64)]) -> QVector {
    coords.iter().map(|&(n, d)| rat(n, d)).collect()
}

pub fn ivec(coords: &[i64]) -> QVector {
    coords.iter().map(|&n| int(n)).collect()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Parses `"3"`, `"-7/2"` or `"0.25"` into an exact rational.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {t:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {t:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {t:?}")));
        }
        let n: BigInt = digits.parse().expect("digits only");
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rat::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    t.parse::<BigInt>()
        .map(Rat::from_integer)
        .map_err(|_| Error::Parse(format!("bad rational {t:?}")))
}

/// Parses a colon separated rational vector such as `1/2:1/2`.
pub fn parse_qvector(text: &str) -> Result<QVector> {
    text.split(':').map(parse_rat).collect()
}

pub fn format_qvector(v: &[Rat]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(":")
}

/// Least common multiple of all denominators.
pub fn common_denominator(v: &[Rat]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to an integer vector by its common
/// denominator.
pub fn clear_denominators(v: &[Rat]) -> Vec<BigInt> {
    let l = common_denominator(v);
    v.iter()
        .map(|x| x.numer() * (&l / x.denom()))
        .collect()
}

/// Divides an integer vector by the gcd of its entries. The zero vector
/// is returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int_rat(a: &[BigInt], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .map(|(x, y)| y * x)
        .fold(Rat::zero(), |acc, t| acc + t)
}

/// Renders `x` with `digits` significant decimal digits using exact
/// integer rounding (half away from zero). At least one fractional digit
/// is kept.
pub fn decimal_string(x: &Rat, digits: usize) -> String {
    if x.is_zero() {
        return "0.0".into();
    }
    let neg = x.is_negative();
    let a = x.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let ten = BigInt::from(10);
    let mut e: i64 = a.to_integer().to_string().len() as i64 - 1;
    if a < Rat::one() {
        e = -1;
        let mut probe = a.clone() * Rat::from_integer(ten.clone());
        while probe < Rat::one() {
            probe *= Rat::from_integer(ten.clone());
            e -= 1;
        }
    }
    let shift = digits as i64 - 1 - e;
    let scaled = if shift >= 0 {
        a * Rat::from_integer(num_traits::pow(ten.clone(), shift as usize))
    } else {
        a / Rat::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
    };
    let twice = scaled * Rat::from_integer(BigInt::from(2));
    let mut n = (twice.to_integer() + BigInt::one()) / BigInt::from(2);
    let mut shift = shift;
    if n.to_string().len() > digits {
        n /= &ten;
        shift -= 1;
    }
    let s = n.to_string();
    let mut out = if shift <= 0 {
        let zeros = "0".repeat((-shift) as usize);
        format!("{s}{zeros}.0")
    } else {
        let shift = shift as usize;
        let (int_part, frac_part) = if s.len() > shift {
            (s[..s.len() - shift].to_string(), s[s.len() - shift..].to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat(shift - s.len()), s))
        };
        let frac = frac_part.trim_end_matches('0');
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{int_part}.{frac}")
    };
    if neg {
        out.insert(0, '-');
    }
    out
}

pub fn to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_and_integers() {
        assert_eq!(parse_rat("7/2").unwrap(), rat(7, 2));
        assert_eq!(parse_rat("-4/8").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("3").unwrap(), int(3));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(parse_qvector("1/2:1/2").unwrap(), qvec(&[(1, 2), (1, 2)]));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(4, 7), 12), "0.571428571429");
        assert_eq!(decimal_string(&rat(6, 7), 12), "0.857142857143");
        assert_eq!(decimal_string(&int(1), 12), "1.0");
        assert_eq!(decimal_string(&rat(7, 2), 12), "3.5");
        assert_eq!(decimal_string(&rat(1, 1000), 3), "0.001");
        assert_eq!(decimal_string(&rat(2, 3), 3), "0.667");
        assert_eq!(decimal_string(&rat(-1, 3), 2), "-0.33");
        assert_eq!(decimal_string(&rat(9999, 10000), 3), "1.0");
    }

    #[test]
    fn primitive_vectors() {
        let v: Vec<BigInt> = [4, -6, 0].iter().map(|&x| BigInt::from(x)).collect();
        let p: Vec<BigInt> = [2, -3, 0].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(primitive(&v), p);
    }
}
