//! Exact circle geometry over rational turns.
//!
//! One full turn is the rational `1`, so a half turn (the visibility limit)
//! is exactly `1/2`. Every value is kept in lowest terms and reduced into
//! `[0, 1)` after each operation, which makes equality, antipodality and
//! lexicographic comparisons decidable.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseRationalError;

/// A point (or an angular amount) on the unit circle, measured in turns.
///
/// Invariant: `0 <= value < 1`, lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle(BigRational);

impl Angle {
    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    /// Exactly half a turn.
    pub fn half() -> Self {
        Angle::new(1, 2)
    }

    /// Exactly a quarter turn.
    pub fn quarter() -> Self {
        Angle::new(1, 4)
    }

    /// `num/den` turns, reduced modulo one. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        Angle::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Reduce an arbitrary rational into `[0, 1)`.
    pub fn from_rational(r: BigRational) -> Self {
        let fl = r.floor();
        Angle(r - fl)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Multiply the raw amount by a small integer, then reduce.
    pub fn scale(&self, k: i64) -> Self {
        Angle::from_rational(&self.0 * BigInt::from(k))
    }

    /// Divide the raw amount by a positive integer. `(1/2).div(2) == 1/4`.
    pub fn div(&self, k: i64) -> Self {
        assert!(k > 0, "angle divisor must be positive");
        Angle(&self.0 / BigInt::from(k))
    }

    /// Lossy conversion for rendering only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }
}

impl Default for Angle {
    fn default() -> Self {
        Angle::zero()
    }
}

impl Add for &Angle {
    type Output = Angle;
    fn add(self, rhs: &Angle) -> Angle {
        let mut r = &self.0 + &rhs.0;
        if r >= BigRational::one() {
            r -= BigRational::one();
        }
        Angle(r)
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        &self + &rhs
    }
}

impl Sub for &Angle {
    type Output = Angle;
    fn sub(self, rhs: &Angle) -> Angle {
        let mut r = &self.0 - &rhs.0;
        if r.is_negative() {
            r += BigRational::one();
        }
        Angle(r)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        &self - &rhs
    }
}

impl Neg for &Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        &Angle::zero() - self
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({self})")
    }
}

/// Parse a strict `"p/q"` rational (integers, `q > 0`). Decimal forms such
/// as `"1.5"` are rejected.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let bad = || ParseRationalError(s.to_string());
    let (p, q) = s.split_once('/').ok_or_else(bad)?;
    let valid = |t: &str| {
        let digits = t.strip_prefix('-').unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(p) || !valid(q) {
        return Err(bad());
    }
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if !q.is_positive() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// Format a rational as `"p/q"` in lowest terms.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serde adapter writing a rational as `"p/q"`.
pub mod rational_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_rational(&text).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use num_rational::BigRational;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_str(&super::super::format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<BigRational>, D::Error> {
            let text = Option::<String>::deserialize(d)?;
            text.map(|t| super::super::parse_rational(&t).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

impl FromStr for Angle {
    type Err = ParseRationalError;

    /// Accepts only canonical inputs `0 <= p/q < 1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r = parse_rational(s)?;
        if r.is_negative() || r >= BigRational::one() {
            return Err(ParseRationalError(s.to_string()));
        }
        Ok(Angle(r))
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Clockwise angular distance from `a` to `b`: `(b - a) mod 1`.
pub fn cw_angle(a: &Angle, b: &Angle) -> Angle {
    b - a
}

/// Counter-clockwise angular distance from `a` to `b`: `(a - b) mod 1`.
pub fn ccw_angle(a: &Angle, b: &Angle) -> Angle {
    a - b
}

/// Length of the shorter arc between `a` and `b`; never exceeds `1/2`.
pub fn angular_distance(a: &Angle, b: &Angle) -> Angle {
    let cw = cw_angle(a, b);
    let ccw = ccw_angle(a, b);
    if cw <= ccw {
        cw
    } else {
        ccw
    }
}

pub fn antipode(a: &Angle) -> Angle {
    a + &Angle::half()
}

/// Which endpoints of an arc belong to it, written start-then-end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Closure {
    ClosedClosed,
    ClosedOpen,
    OpenOpen,
    OpenClosed,
}

impl Closure {
    fn start_closed(self) -> bool {
        matches!(self, Closure::ClosedClosed | Closure::ClosedOpen)
    }

    fn end_closed(self) -> bool {
        matches!(self, Closure::ClosedClosed | Closure::OpenClosed)
    }
}

/// An arc swept clockwise from `start` through `extent` turns.
///
/// `extent` is a raw rational in `(0, 1]` so that the full circle is
/// representable; it is not an [`Angle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcInterval {
    start: Angle,
    extent: BigRational,
    closure: Closure,
}

impl ArcInterval {
    /// Returns `None` unless `0 < extent <= 1`.
    pub fn new(start: Angle, extent: BigRational, closure: Closure) -> Option<Self> {
        if extent.is_positive() && extent <= BigRational::one() {
            Some(ArcInterval {
                start,
                extent,
                closure,
            })
        } else {
            None
        }
    }

    /// The clockwise arc from `from` to `to`. A zero-length request yields
    /// `None`; use [`ArcInterval::full`] for the whole circle.
    pub fn between(from: &Angle, to: &Angle, closure: Closure) -> Option<Self> {
        let extent = cw_angle(from, to).into_rational();
        ArcInterval::new(from.clone(), extent, closure)
    }

    /// The whole circle, covered exactly once.
    pub fn full(start: Angle) -> Self {
        ArcInterval {
            start,
            extent: BigRational::one(),
            closure: Closure::ClosedOpen,
        }
    }

    pub fn start(&self) -> &Angle {
        &self.start
    }

    pub fn extent(&self) -> &BigRational {
        &self.extent
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }
}

/// Exact arc membership respecting the arc's closure.
pub fn in_arc(x: &Angle, arc: &ArcInterval) -> bool {
    let d = cw_angle(&arc.start, x);
    let d = d.as_rational();
    let after_start = if arc.closure.start_closed() {
        true
    } else {
        !d.is_zero()
    };
    let before_end = match d.cmp(&arc.extent) {
        Ordering::Less => true,
        Ordering::Equal => arc.closure.end_closed(),
        Ordering::Greater => false,
    };
    after_start && before_end
}

/// Points ordered by clockwise distance from `origin`; points equal to
/// `origin` are dropped and exact duplicates stay adjacent.
pub fn sort_cw_from(origin: &Angle, points: &[Angle]) -> Vec<Angle> {
    let mut keyed: Vec<(Angle, Angle)> = points
        .iter()
        .filter(|p| *p != origin)
        .map(|p| (cw_angle(origin, p), p.clone()))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, p)| p).collect()
}

/// Least common multiple of the denominators of `angles`.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Angle>>(angles: I) -> BigInt {
    angles
        .into_iter()
        .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(n: i64, d: i64) -> Angle {
        Angle::new(n, d)
    }

    #[test]
    fn cw_and_ccw_examples() {
        assert_eq!(cw_angle(&a(0, 1), &a(1, 10)), a(1, 10));
        assert_eq!(cw_angle(&a(7, 10), &a(1, 10)), a(4, 10));
        assert_eq!(cw_angle(&a(3, 7), &a(3, 7)), Angle::zero());
        assert_eq!(ccw_angle(&a(0, 1), &a(1, 10)), a(9, 10));
        assert_eq!(ccw_angle(&a(1, 10), &a(0, 1)), a(1, 10));
        assert_eq!(ccw_angle(&a(2, 9), &a(2, 9)), Angle::zero());
    }

    #[test]
    fn distance_and_antipode_examples() {
        assert_eq!(angular_distance(&a(0, 1), &a(1, 10)), a(1, 10));
        assert_eq!(angular_distance(&a(0, 1), &a(1, 2)), a(1, 2));
        assert_eq!(angular_distance(&a(0, 1), &a(7, 10)), a(3, 10));
        assert_eq!(antipode(&a(0, 1)), a(1, 2));
        assert_eq!(antipode(&a(1, 10)), a(6, 10));
        assert_eq!(antipode(&a(3, 4)), a(1, 4));
    }

    #[test]
    fn arc_endpoints() {
        let s = a(1, 2);
        let theta = a(1, 10);
        let lo = &s - &theta.div(2);
        let hi = &s + &theta.div(2);
        let arc = ArcInterval::between(&lo, &hi, Closure::ClosedOpen).unwrap();
        assert!(in_arc(&lo, &arc));
        assert!(!in_arc(&hi, &arc));
        assert!(in_arc(&a(48, 100), &arc));
        // 48/100 in [45/100, 55/100), checked on raw scalars
        let x = 48.0 / 100.0;
        assert!((0.45..0.55).contains(&x));
        assert!(!in_arc(&a(44, 100), &arc));
    }

    #[test]
    fn full_arc_covers_everything_once() {
        let arc = ArcInterval::full(a(3, 10));
        for k in 0..40 {
            assert!(in_arc(&a(k, 40), &arc));
        }
    }

    #[test]
    fn sort_examples() {
        assert_eq!(
            sort_cw_from(&a(0, 1), &[a(6, 10), a(1, 10), a(3, 10)]),
            vec![a(1, 10), a(3, 10), a(6, 10)]
        );
        assert_eq!(
            sort_cw_from(&a(3, 10), &[a(0, 1), a(1, 10), a(6, 10)]),
            vec![a(6, 10), a(0, 1), a(1, 10)]
        );
        assert!(sort_cw_from(&a(0, 1), &[]).is_empty());
        assert_eq!(
            sort_cw_from(&a(0, 1), &[a(0, 1), a(1, 3), a(1, 3)]),
            vec![a(1, 3), a(1, 3)]
        );
    }

    #[test]
    fn parse_and_format() {
        assert_eq!("3/10".parse::<Angle>().unwrap(), a(3, 10));
        assert_eq!("6/20".parse::<Angle>().unwrap().to_string(), "3/10");
        assert_eq!(Angle::zero().to_string(), "0/1");
        assert!("1.5".parse::<Angle>().is_err());
        assert!("1/1".parse::<Angle>().is_err());
        assert!("-1/3".parse::<Angle>().is_err());
        assert!("1/0".parse::<Angle>().is_err());
        assert!("/3".parse::<Angle>().is_err());
    }

    /// Independent membership check on raw rationals: lift `x` above the
    /// start and compare against both endpoints.
    fn brute_in_arc(
        x: &BigRational,
        start: &BigRational,
        extent: &BigRational,
        c: Closure,
    ) -> bool {
        let lifted = if x < start {
            x + BigRational::one()
        } else {
            x.clone()
        };
        let end = start + extent;
        let lower = if c.start_closed() {
            &lifted >= start
        } else {
            &lifted > start
        };
        let upper = if c.end_closed() {
            lifted <= end
        } else {
            lifted < end
        };
        lower && upper
    }

    fn small_angle() -> impl Strategy<Value = Angle> {
        (1i64..=64)
            .prop_flat_map(|d| (0..d, Just(d)))
            .prop_map(|(n, d)| Angle::new(n, d))
    }

    fn closure() -> impl Strategy<Value = Closure> {
        prop_oneof![
            Just(Closure::ClosedClosed),
            Just(Closure::ClosedOpen),
            Just(Closure::OpenOpen),
            Just(Closure::OpenClosed)
        ]
    }

    proptest! {
        #[test]
        fn cw_plus_ccw_is_zero_or_one(x in small_angle(), y in small_angle()) {
            let sum = cw_angle(&x, &y).into_rational() + ccw_angle(&x, &y).into_rational();
            if x == y {
                prop_assert!(sum.is_zero());
            } else {
                prop_assert_eq!(sum, BigRational::one());
            }
        }

        #[test]
        fn distance_symmetric_and_bounded(x in small_angle(), y in small_angle()) {
            let d = angular_distance(&x, &y);
            prop_assert_eq!(&d, &angular_distance(&y, &x));
            prop_assert!(d <= Angle::half());
            prop_assert_eq!(d == Angle::half(), y == antipode(&x));
        }

        #[test]
        fn antipode_is_involution(x in small_angle()) {
            prop_assert_eq!(antipode(&antipode(&x)), x);
        }

        #[test]
        fn arc_membership_matches_scalar_oracle(
            x in small_angle(), start in small_angle(), ext in small_angle(), c in closure()
        ) {
            let extent = if ext.is_zero() { BigRational::one() } else { ext.into_rational() };
            let arc = ArcInterval::new(start.clone(), extent.clone(), c).unwrap();
            prop_assert_eq!(
                in_arc(&x, &arc),
                brute_in_arc(x.as_rational(), start.as_rational(), &extent, c)
            );
        }
    }
}
