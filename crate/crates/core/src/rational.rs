//! Exact rational scalars, vectors and symbolic surds.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.125"` exactly.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Formats a rational as `"p/q"`, always with an explicit denominator.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Lossy conversion to `f64`.
pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Both parts may overflow f64 individually.
        let shift = x.numer().bits().max(x.denom().bits()) as i64 - 900;
        let n = (x.numer() >> shift.max(0) as usize).to_f64().unwrap();
        let d = (x.denom() >> shift.max(0) as usize).to_f64().unwrap();
        n / d
    })
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Serde adapter storing a rational as the string `"p/q"`.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a list of rationals.
pub mod serde_qvec {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(fmt_q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_q(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A vector of `t*` in the simple-root basis, with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CartanVec(pub Vec<Q>);

impl CartanVec {
    pub fn zero(rank: usize) -> Self {
        CartanVec(vec![Q::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = Q::one();
        v
    }

    pub fn from_ints(c: &[i64]) -> Self {
        CartanVec(c.iter().map(|&x| qi(x)).collect())
    }

    pub fn from_ratios(c: &[(i64, i64)]) -> Self {
        CartanVec(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Q) -> Self {
        CartanVec(self.0.iter().map(|x| x * s).collect())
    }

    /// Euclidean dot product of coordinate vectors (not the invariant pairing).
    pub fn dot(&self, other: &[Q]) -> Q {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }

    /// Height: sum of coordinates.
    pub fn height(&self) -> Q {
        self.0.iter().sum()
    }
}

impl fmt::Debug for CartanVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Index<usize> for CartanVec {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.0[i]
    }
}

impl IndexMut<usize> for CartanVec {
    fn index_mut(&mut self, i: usize) -> &mut Q {
        &mut self.0[i]
    }
}

impl Add<&CartanVec> for &CartanVec {
    type Output = CartanVec;
    fn add(self, o: &CartanVec) -> CartanVec {
        CartanVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&CartanVec> for &CartanVec {
    type Output = CartanVec;
    fn sub(self, o: &CartanVec) -> CartanVec {
        CartanVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &CartanVec {
    type Output = CartanVec;
    fn neg(self) -> CartanVec {
        CartanVec(self.0.iter().map(|a| -a).collect())
    }
}

impl Add for CartanVec {
    type Output = CartanVec;
    fn add(self, o: CartanVec) -> CartanVec {
        &self + &o
    }
}

impl Sub for CartanVec {
    type Output = CartanVec;
    fn sub(self, o: CartanVec) -> CartanVec {
        &self - &o
    }
}

impl Neg for CartanVec {
    type Output = CartanVec;
    fn neg(self) -> CartanVec {
        -&self
    }
}

impl Mul<&CartanVec> for &Q {
    type Output = CartanVec;
    fn mul(self, v: &CartanVec) -> CartanVec {
        v.scale(self)
    }
}

impl Serialize for CartanVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_qvec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for CartanVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        serde_qvec::deserialize(d).map(CartanVec)
    }
}

/// The real number `coeff * sqrt(radicand)` with `radicand > 0` a squarefree integer.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Surd {
    #[serde(with = "serde_q")]
    pub coeff: Q,
    #[serde(with = "serde_q")]
    pub radicand: Q,
}

impl Surd {
    pub fn rational(c: Q) -> Self {
        Surd { coeff: c, radicand: Q::one() }
    }

    /// `coeff * sqrt(radicand)` brought to normal form.
    pub fn new(coeff: Q, radicand: Q) -> Self {
        assert!(radicand.is_positive(), "surd radicand must be positive");
        // sqrt(n/d) = sqrt(n d) / d
        let nd = radicand.numer() * radicand.denom();
        let (square, free) = split_square(&nd);
        let coeff = coeff * Q::new(square, radicand.denom().clone());
        Surd { coeff, radicand: Q::from_integer(free) }
    }

    /// `1 / sqrt(x)` for rational `x > 0`.
    pub fn inv_sqrt(x: &Q) -> Self {
        Surd::new(x.recip(), x.clone())
    }

    pub fn sqrt(x: &Q) -> Self {
        Surd::new(Q::one(), x.clone())
    }

    pub fn mul(&self, o: &Surd) -> Surd {
        Surd::new(&self.coeff * &o.coeff, &self.radicand * &o.radicand)
    }

    pub fn scale(&self, c: &Q) -> Surd {
        Surd { coeff: &self.coeff * c, radicand: self.radicand.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coeff) * to_f64(&self.radicand).sqrt()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", fmt_q(&self.coeff))
        } else {
            write!(f, "{}*sqrt({})", fmt_q(&self.coeff), self.radicand.numer())
        }
    }
}

/// Writes `n = s^2 * f` with `f` squarefree; returns `(s, f)`.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.abs();
    let mut square = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let pp = &p * &p;
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            square *= &p;
        }
        p += 1;
        if p > BigInt::from(100_000) {
            break;
        }
    }
    (square, rest)
}

/// Least common multiple of the denominators of `xs`.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q("-7").unwrap(), qi(-7));
        assert_eq!(parse_q("0.4").unwrap(), q(2, 5));
        assert_eq!(parse_q("-0.125").unwrap(), q(-1, 8));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn format_always_has_denominator() {
        assert_eq!(fmt_q(&qi(3)), "3/1");
        assert_eq!(fmt_q(&q(-2, 4)), "-1/2");
    }

    #[test]
    fn surd_normal_form() {
        let s = Surd::new(qi(1), qi(12));
        assert_eq!(s.coeff, qi(2));
        assert_eq!(s.radicand, qi(3));
        let t = Surd::inv_sqrt(&qi(2));
        assert_eq!(t.coeff, q(1, 2));
        assert_eq!(t.radicand, qi(2));
        assert!((t.to_f64() - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        let u = Surd::sqrt(&q(3, 4));
        assert!((u.to_f64() - 0.75f64.sqrt()).abs() < 1e-15);
        assert_eq!(t.mul(&Surd::sqrt(&qi(2))), Surd::rational(qi(1)));
    }

    #[test]
    fn float_roundtrip_is_exact() {
        let x = 0.1f64;
        assert_eq!(to_f64(&from_f64(x)), x);
    }
}
