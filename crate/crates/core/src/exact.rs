//! Exact integer and rational arithmetic.
//!
//! Every multiplier in the crate is an `e^{πit}` with rational `t`, so the
//! lemma identities become rational equalities mod 2 and never touch floating
//! point. Integers are arbitrary precision throughout.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Complex;

/// Nonnegative greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Jacobi symbol `(a/n)` for odd `n ≥ 1`, by the reciprocity recursion.
pub fn jacobi_symbol(a: &BigInt, n: &BigInt) -> Result<i8> {
    if !n.is_positive() || n.is_even() {
        return Err(Error::domain(format!(
            "jacobi symbol needs an odd positive modulus, got {n}"
        )));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1i8;
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        a >>= twos;
        if twos % 2 == 1 {
            let r = n.mod_floor(&eight);
            if r == BigInt::from(3) || r == BigInt::from(5) {
                result = -result;
            }
        }
        // (a/n)(n/a) = (-1)^{(a-1)(n-1)/4} for odd coprime a, n
        if a.mod_floor(&four) == BigInt::from(3) && n.mod_floor(&four) == BigInt::from(3) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { result } else { 0 })
}

/// An exact fraction in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    /// Panicking shorthand for literal fractions with a known nonzero denominator.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("nonzero denominator")
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Representative of `self` modulo `m` in `[0, m)`; `m` must be positive.
    pub fn rem_euclid(&self, m: &Rational) -> Rational {
        let q = Rational(&self.0 / &m.0).floor();
        Rational(&self.0 - &m.0 * BigRational::from_integer(q))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|e| Error::Parse(format!("bad integer `{t}` in rational `{s}`: {e}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Rational::new(parse(n)?, parse(d)?),
            None => Ok(Rational::from_integer(parse(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A unit complex number `e^{πit}` with `t` held exactly in `[0, 2)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct UnitPhase {
    phase: Rational,
}

impl UnitPhase {
    pub fn new(phase: Rational) -> Self {
        UnitPhase {
            phase: phase.rem_euclid(&Rational::from_integer(2)),
        }
    }

    /// `e^{πi·numer/denom}`.
    pub fn from_frac(numer: i64, denom: i64) -> Self {
        Self::new(Rational::frac(numer, denom))
    }

    pub fn one() -> Self {
        UnitPhase {
            phase: Rational::zero(),
        }
    }

    /// `i^k`, i.e. phase `k/2`.
    pub fn i_pow(k: &BigInt) -> Self {
        Self::new(Rational::new(k.clone(), 2).expect("nonzero"))
    }

    /// `±1` as a phase.
    pub fn sign(negative: bool) -> Self {
        if negative {
            Self::from_frac(1, 1)
        } else {
            Self::one()
        }
    }

    /// The exponent `t` in `e^{πit}`, in `[0, 2)`.
    pub fn phase(&self) -> &Rational {
        &self.phase
    }

    pub fn inv(&self) -> Self {
        Self::new(-&self.phase)
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::new(&self.phase * &Rational::from_integer(k))
    }

    pub fn is_one(&self) -> bool {
        self.phase.is_zero()
    }

    pub fn to_complex(&self) -> Complex {
        // Reduce to [-1, 1) first so the angle stays small.
        let mut t = self.phase.to_f64();
        if t >= 1.0 {
            t -= 2.0;
        }
        let (s, c) = (std::f64::consts::PI * t).sin_cos();
        Complex::new(c, s)
    }
}

/// Product of two unit phases: exact addition of exponents mod 2.
pub fn phase_mul(p: &UnitPhase, q: &UnitPhase) -> UnitPhase {
    UnitPhase::new(&p.phase + &q.phase)
}

impl Mul for UnitPhase {
    type Output = UnitPhase;
    fn mul(self, rhs: UnitPhase) -> UnitPhase {
        phase_mul(&self, &rhs)
    }
}

impl<'a> Mul<&'a UnitPhase> for &'a UnitPhase {
    type Output = UnitPhase;
    fn mul(self, rhs: &'a UnitPhase) -> UnitPhase {
        phase_mul(self, rhs)
    }
}

impl fmt::Display for UnitPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.phase, f)
    }
}

impl fmt::Debug for UnitPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(πi·{})", self.phase)
    }
}

impl<'de> Deserialize<'de> for UnitPhase {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(UnitPhase::new(Rational::deserialize(deserializer)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn brute_gcd(a: i64, b: i64) -> i64 {
        let m = a.abs().max(b.abs());
        (1..=m).filter(|d| a % d == 0 && b % d == 0).max().unwrap_or(0)
    }

    // Legendre symbol by enumerating squares mod p.
    fn legendre_brute(a: i64, p: i64) -> i8 {
        let a = a.rem_euclid(p);
        if a == 0 {
            0
        } else if (1..p).any(|x| x * x % p == a) {
            1
        } else {
            -1
        }
    }

    fn jacobi_brute(a: i64, mut n: i64) -> i8 {
        let mut out = 1;
        let mut p = 2;
        while n > 1 {
            p += 1;
            while n % p == 0 {
                out *= legendre_brute(a, p);
                n /= p;
            }
        }
        out
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&big(0), &big(0)), big(0));
        assert_eq!(gcd(&big(12), &big(18)), big(6));
        assert_eq!(gcd(&big(-7), &big(21)), big(brute_gcd(-7, 21)));
        assert_eq!(brute_gcd(-7, 21), 7);
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_symbol(&big(5), &big(1)).unwrap(), 1);
        assert_eq!(legendre_brute(2, 3), -1);
        assert_eq!(jacobi_symbol(&big(2), &big(3)).unwrap(), -1);
        assert_eq!(legendre_brute(2, 3) * legendre_brute(2, 5), 1);
        assert_eq!(jacobi_symbol(&big(2), &big(15)).unwrap(), 1);
    }

    #[test]
    fn jacobi_rejects_even_or_nonpositive_modulus() {
        assert!(jacobi_symbol(&big(3), &big(4)).is_err());
        assert!(jacobi_symbol(&big(3), &big(0)).is_err());
        assert!(jacobi_symbol(&big(3), &big(-5)).is_err());
    }

    #[test]
    fn jacobi_matches_brute_force() {
        for n in (1..120).step_by(2) {
            for a in -60..60 {
                assert_eq!(
                    jacobi_symbol(&big(a), &big(n)).unwrap(),
                    jacobi_brute(a, n),
                    "({a}/{n})"
                );
            }
        }
    }

    #[test]
    fn jacobi_multiplicative_in_modulus() {
        for n in (1..=50).step_by(2) {
            for m in (1..=50).step_by(2) {
                for a in -30..30 {
                    let lhs = jacobi_symbol(&big(a), &big(n * m)).unwrap();
                    let rhs = jacobi_symbol(&big(a), &big(n)).unwrap()
                        * jacobi_symbol(&big(a), &big(m)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn phase_mul_examples() {
        let p = |n, d| UnitPhase::from_frac(n, d);
        assert_eq!(phase_mul(&p(1, 2), &p(3, 2)).phase(), &Rational::zero());
        assert_eq!(phase_mul(&p(3, 4), &p(3, 4)).phase(), &Rational::frac(3, 2));
        assert_eq!(phase_mul(&p(7, 4), &p(1, 2)).phase(), &Rational::frac(1, 4));
    }

    #[test]
    fn rational_serialization() {
        assert_eq!(Rational::zero().to_string(), "0/1");
        assert_eq!(Rational::frac(-2, 4).to_string(), "-1/2");
        assert_eq!(Rational::frac(3, -9).to_string(), "-1/3");
        let json = serde_json::to_string(&Rational::frac(1, 18)).unwrap();
        assert_eq!(json, "\"1/18\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Rational::frac(1, 18));
        assert!("1/0".parse::<Rational>().is_err());
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from_integer(7));
        let phase = serde_json::to_string(&UnitPhase::from_frac(-1, 2)).unwrap();
        assert_eq!(phase, "\"3/2\"");
    }

    #[test]
    fn floor_and_rem() {
        assert_eq!(Rational::frac(-1, 4).floor(), big(-1));
        assert_eq!(Rational::frac(7, 2).ceil(), big(4));
        let two = Rational::from_integer(2);
        assert_eq!(Rational::frac(9, 4).rem_euclid(&two), Rational::frac(1, 4));
        assert_eq!(Rational::frac(-1, 4).rem_euclid(&two), Rational::frac(7, 4));
    }

    fn rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| Rational::frac(n, d))
    }

    proptest! {
        #[test]
        fn rational_arith_exact(a in rational(), b in rational(), c in rational()) {
            prop_assert_eq!((&a + &b) + c.clone(), a.clone() + (&b + &c));
            prop_assert_eq!((&a * &b) * c.clone(), a.clone() * (&b * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert!(gcd(a.numer(), a.denom()) == BigInt::one() || a.is_zero());
            prop_assert!(a.denom().is_positive());
        }

        #[test]
        fn phase_group_laws(a in rational(), b in rational(), c in rational()) {
            let (p, q, r) = (UnitPhase::new(a), UnitPhase::new(b), UnitPhase::new(c));
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &UnitPhase::one(), p.clone());
            prop_assert!((&p * &p.inv()).is_one());
            let two = Rational::from_integer(2);
            prop_assert!(p.phase() >= &Rational::zero() && p.phase() < &two);
        }
    }

    #[test]
    fn to_complex_unit_modulus() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let p = UnitPhase::from_frac(rng.random_range(-100_000..100_000), rng.random_range(1..5000));
            assert!((p.to_complex().norm() - 1.0).abs() < 1e-15);
        }
        let i = UnitPhase::from_frac(1, 2).to_complex();
        assert!((i - Complex::new(0.0, 1.0)).norm() < 1e-15);
    }
}
