//! Exact rational helpers: parsing, canonical `p/q` formatting, square roots.

use crate::error::{Error, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q` or a plain decimal such as `-0.125` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("malformed rational '{s}'"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !digits.chars().all(|c| c.is_ascii_digit())
            || (digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let mut all = String::from(if digits.is_empty() { "0" } else { digits });
        all.push_str(frac);
        let num: BigInt = all.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Parses a comma-separated list of rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

/// Canonical form `p/q`, lowest terms, positive denominator, always with a slash.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact rational square root, if one exists.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    let p = isqrt_exact(r.numer())?;
    let q = isqrt_exact(r.denom())?;
    Some(Rational::new(p, q))
}

/// Writes a positive rational as `c^2 * d` with `c` rational and `d` an integer with
/// no small square factors, so that `sqrt(r) = c * sqrt(d)`.
pub fn sqrt_decompose(r: &Rational) -> Result<(Rational, BigInt)> {
    if !r.is_positive() {
        return Err(Error::Parameter(format!(
            "square root of nonpositive {}",
            format_rational(r)
        )));
    }
    let mut m = r.numer() * r.denom();
    let mut c = BigInt::one();
    let mut f = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &f * &f <= m && f <= limit {
        let sq = &f * &f;
        while (&m).is_multiple_of(&sq) {
            m /= &sq;
            c *= &f;
        }
        f += 1;
    }
    if let Some(s) = isqrt_exact(&m) {
        c *= s;
        m = BigInt::one();
    }
    Ok((Rational::new(c, r.denom().clone()), m))
}

pub fn sign(r: &Rational) -> Sign {
    r.numer().sign()
}

/// Random rational with numerator in `[-max_num, max_num]` and denominator in `[1, max_den]`.
pub fn random_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    let n = rng.gen_range(-max_num..=max_num);
    let d = rng.gen_range(1..=max_den);
    rat(n, d)
}

/// Least common multiple of denominators; scales a rational vector to integers.
pub fn common_denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("3/5").unwrap(), rat(3, 5));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("0.6").unwrap(), rat(3, 5));
        assert_eq!(parse_rational("-.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(0)), "0/1");
        assert_eq!(format_rational(&int(2)), "2/1");
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_exact(&rat(16, 25)), Some(rat(4, 5)));
        assert_eq!(sqrt_exact(&rat(2, 1)), None);
        let (c, d) = sqrt_decompose(&rat(8, 3)).unwrap();
        // 8/3 = (2/3)^2 * 6
        assert_eq!(c, rat(2, 3));
        assert_eq!(d, BigInt::from(6));
        let (c, d) = sqrt_decompose(&rat(9, 4)).unwrap();
        assert_eq!((c, d), (rat(3, 2), BigInt::one()));
    }
}
