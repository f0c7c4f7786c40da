//! `SL(2, Z)`, its Möbius action on the upper half-plane, `Γ(2)` membership
//! and decomposition into generator words.
//!
//! `Γ` is generated by `S = (0 -1; 1 0)` and `T = (1 1; 0 1)`; `Γ(2)` (up to
//! `±I`) by `T² = (1 2; 0 1)` and `S₂ = (1 0; 2 1)`. Words carry an explicit
//! sign instead of spelling `-I` as `S²`.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::theta::check_upper_half_plane;
use crate::Complex;

/// An integer matrix `(a b; c d)` with `ad - bc = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sl2Matrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Sl2Matrix {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::Determinant {
                a: a.to_string(),
                b: b.to_string(),
                c: c.to_string(),
                d: d.to_string(),
                det: det.to_string(),
            });
        }
        Ok(Sl2Matrix { a, b, c, d })
    }

    // Callers guarantee det = 1.
    fn raw(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        debug_assert!((&a * &d - &b * &c).is_one());
        Sl2Matrix { a, b, c, d }
    }

    /// Completes a coprime bottom row `(c, d)` to a matrix of determinant 1.
    pub fn from_bottom_row(c: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let (c, d) = (c.into(), d.into());
        let eg = d.extended_gcd(&c);
        // eg.x·d + eg.y·c = gcd
        if eg.gcd.is_zero() || !eg.gcd.abs().is_one() {
            return Err(Error::domain(format!("bottom row ({c}, {d}) is not coprime")));
        }
        let s = eg.gcd.signum();
        let a = eg.x * &s;
        let b = -(eg.y * s);
        Sl2Matrix::new(a, b, c, d)
    }

    pub fn identity() -> Self {
        Self::raw(1.into(), 0.into(), 0.into(), 1.into())
    }

    /// `S = (0 -1; 1 0)`.
    pub fn s() -> Self {
        Self::raw(0.into(), (-1).into(), 1.into(), 0.into())
    }

    /// `S' = (0 1; -1 0) = -S`.
    pub fn s_alt() -> Self {
        Self::raw(0.into(), 1.into(), (-1).into(), 0.into())
    }

    /// `T^m = (1 m; 0 1)`.
    pub fn t(m: impl Into<BigInt>) -> Self {
        Self::raw(1.into(), m.into(), 0.into(), 1.into())
    }

    /// `T^{2m} = (1 2m; 0 1)`.
    pub fn t2(m: impl Into<BigInt>) -> Self {
        Self::t(m.into() * 2)
    }

    /// `S₂^m = (1 0; 2m 1)`.
    pub fn s2(m: impl Into<BigInt>) -> Self {
        Self::raw(1.into(), 0.into(), m.into() * 2, 1.into())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn to_f64(&self) -> [f64; 4] {
        self.entries().map(|e| e.to_f64().unwrap_or(f64::NAN))
    }

    /// Entries as `i64` when they all fit.
    pub fn to_i64(&self) -> Option<[i64; 4]> {
        Some([
            self.a.to_i64()?,
            self.b.to_i64()?,
            self.c.to_i64()?,
            self.d.to_i64()?,
        ])
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries().into_iter().map(|e| e.abs()).max().expect("four entries")
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// `cτ + d`.
    pub fn cocycle(&self, tau: Complex) -> Complex {
        let [_, _, c, d] = self.to_f64();
        tau * c + d
    }

    /// `(aτ + b)/(cτ + d)`.
    pub fn mobius(&self, tau: Complex) -> Result<Complex> {
        check_upper_half_plane(tau)?;
        let [a, b, _, _] = self.to_f64();
        Ok((tau * a + b) / self.cocycle(tau))
    }

    /// `A ≡ I (mod 2)`: `a, d` odd and `b, c` even.
    pub fn is_gamma2(&self) -> bool {
        self.a.is_odd() && self.d.is_odd() && self.b.is_even() && self.c.is_even()
    }

    /// `c > 0`, or `c = 0` and `d > 0`.
    pub fn is_normalized(&self) -> bool {
        self.c.is_positive() || (self.c.is_zero() && self.d.is_positive())
    }

    /// `A` or `-A`, whichever is normalized, and whether a flip happened.
    pub fn normalize_sign(&self) -> (Sl2Matrix, bool) {
        if self.is_normalized() {
            (self.clone(), false)
        } else {
            (-self.clone(), true)
        }
    }
}

/// Integer matrix product.
pub fn mat_mul(x: &Sl2Matrix, y: &Sl2Matrix) -> Sl2Matrix {
    Sl2Matrix::raw(
        &x.a * &y.a + &x.b * &y.c,
        &x.a * &y.b + &x.b * &y.d,
        &x.c * &y.a + &x.d * &y.c,
        &x.c * &y.b + &x.d * &y.d,
    )
}

impl Mul for &Sl2Matrix {
    type Output = Sl2Matrix;
    fn mul(self, rhs: &Sl2Matrix) -> Sl2Matrix {
        mat_mul(self, rhs)
    }
}

impl Mul for Sl2Matrix {
    type Output = Sl2Matrix;
    fn mul(self, rhs: Sl2Matrix) -> Sl2Matrix {
        mat_mul(&self, &rhs)
    }
}

impl Neg for Sl2Matrix {
    type Output = Sl2Matrix;
    fn neg(self) -> Sl2Matrix {
        Sl2Matrix::raw(-self.a, -self.b, -self.c, -self.d)
    }
}

impl fmt::Display for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Sl2Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows: [[IntRepr; 2]; 2] = serde_json::from_str(s.trim())
            .map_err(|e| Error::Parse(format!("expected [[a,b],[c,d]], got `{s}`: {e}")))?;
        let [[a, b], [c, d]] = rows.map(|r| r.map(IntRepr::into_big));
        Sl2Matrix::new(a?, b?, c?, d?)
    }
}

/// JSON integer, or a decimal string for values beyond `i128`.
#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Int(i64),
    Str(String),
}

impl IntRepr {
    fn into_big(self) -> Result<BigInt> {
        match self {
            IntRepr::Int(n) => Ok(BigInt::from(n)),
            IntRepr::Str(s) => s.parse().map_err(|e| Error::Parse(format!("bad integer `{s}`: {e}"))),
        }
    }
}

struct BigIntJson<'a>(&'a BigInt);

impl Serialize for BigIntJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i128() {
            Some(n) => serializer.serialize_i128(n),
            None => serializer.collect_str(self.0),
        }
    }
}

struct Row<'a>(&'a BigInt, &'a BigInt);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&BigIntJson(self.0))?;
        seq.serialize_element(&BigIntJson(self.1))?;
        seq.end()
    }
}

impl Serialize for Sl2Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&Row(&self.a, &self.b))?;
        seq.serialize_element(&Row(&self.c, &self.d))?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Sl2Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = <[[IntRepr; 2]; 2]>::deserialize(deserializer)?;
        let [[a, b], [c, d]] = rows.map(|r| r.map(IntRepr::into_big));
        let get = |x: Result<BigInt>| x.map_err(de::Error::custom);
        Sl2Matrix::new(get(a)?, get(b)?, get(c)?, get(d)?).map_err(de::Error::custom)
    }
}

/// One generator power in a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Letter {
    /// `S = (0 -1; 1 0)`.
    S,
    /// `T^m`.
    T(BigInt),
    /// `T^{2m}`, the `Γ(2)` translation generator to the power `m`.
    T2(BigInt),
    /// `S₂^m = (1 0; 2m 1)`.
    S2(BigInt),
}

impl Letter {
    pub fn matrix(&self) -> Sl2Matrix {
        match self {
            Letter::S => Sl2Matrix::s(),
            Letter::T(m) => Sl2Matrix::t(m.clone()),
            Letter::T2(m) => Sl2Matrix::t2(m.clone()),
            Letter::S2(m) => Sl2Matrix::s2(m.clone()),
        }
    }

    fn exponent(&self) -> BigInt {
        match self {
            Letter::S => BigInt::one(),
            Letter::T(m) | Letter::T2(m) | Letter::S2(m) => m.clone(),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Letter::S => "S",
            Letter::T(_) => "T",
            Letter::T2(_) => "T2",
            Letter::S2(_) => "S2",
        }
    }

    fn is_trivial(&self) -> bool {
        !matches!(self, Letter::S) && self.exponent().is_zero()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::S => write!(f, "S"),
            Letter::T(m) => write!(f, "T^{m}"),
            Letter::T2(m) => write!(f, "(T²)^{m}"),
            Letter::S2(m) => write!(f, "S₂^{m}"),
        }
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Letter", 2)?;
        st.serialize_field("letter", self.name())?;
        st.serialize_field("exponent", &BigIntJson(&self.exponent()))?;
        st.end()
    }
}

/// A signed product of generator powers in normal form: no trivial letters
/// and no two adjacent powers of the same generator.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GeneratorWord {
    letters: Vec<Letter>,
    #[serde(rename = "sign", serialize_with = "serialize_sign")]
    negative: bool,
}

fn serialize_sign<S: Serializer>(negative: &bool, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_i8(if *negative { -1 } else { 1 })
}

impl GeneratorWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>, negative: bool) -> Self {
        let mut w = GeneratorWord {
            letters: Vec::new(),
            negative,
        };
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Appends on the right, merging with the last letter where possible.
    pub fn push(&mut self, letter: Letter) {
        if letter.is_trivial() {
            return;
        }
        let merged = match (self.letters.last(), &letter) {
            (Some(Letter::S), Letter::S) => {
                // S² = -I
                self.letters.pop();
                self.negative = !self.negative;
                return;
            }
            (Some(Letter::T(m)), Letter::T(n)) => Some(Letter::T(m + n)),
            (Some(Letter::T(m)), Letter::T2(n)) => Some(Letter::T(m + n * 2)),
            (Some(Letter::T2(m)), Letter::T(n)) => Some(Letter::T(m * 2 + n)),
            (Some(Letter::T2(m)), Letter::T2(n)) => Some(Letter::T2(m + n)),
            (Some(Letter::S2(m)), Letter::S2(n)) => Some(Letter::S2(m + n)),
            _ => None,
        };
        match merged {
            Some(l) => {
                self.letters.pop();
                self.push(l);
            }
            None => self.letters.push(letter),
        }
    }

    pub fn negate(&mut self) {
        self.negative = !self.negative;
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        if self.letters.is_empty() {
            return write!(f, "I");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Signed ordered product of the letters.
pub fn recompose(w: &GeneratorWord) -> Sl2Matrix {
    let p = w
        .letters
        .iter()
        .fold(Sl2Matrix::identity(), |acc, l| mat_mul(&acc, &l.matrix()));
    if w.negative {
        -p
    } else {
        p
    }
}

/// Nearest integer to `x`, ties toward the floor.
fn round_half_down(x: &Rational) -> BigInt {
    (x - &Rational::frac(1, 2)).ceil()
}

/// `±T^k` as a one-letter word (`a = d = ±1` when `c = 0`).
fn translation_word(m: &Sl2Matrix, mut word: GeneratorWord, letter: fn(BigInt) -> Letter, halve: bool) -> GeneratorWord {
    debug_assert!(m.c.is_zero());
    let sign = m.a.signum();
    let mut shift = &m.b * &sign;
    if halve {
        shift /= 2;
    }
    word.push(letter(shift));
    if sign.is_negative() {
        word.negate();
    }
    word
}

/// Writes `A` as `±T^{m₁} S T^{m₂} S ⋯ T^{m_r}`.
///
/// Euclidean reduction on the first column: peel `T^m` with `m` the nearest
/// integer to `a/c` (ties toward the floor), then `S`, so `|c|` at least
/// halves per step.
pub fn decompose_gamma(a: &Sl2Matrix) -> GeneratorWord {
    let mut m = a.clone();
    let mut word = GeneratorWord::new();
    let s_inv = Sl2Matrix::s().inverse();
    while !m.c.is_zero() {
        let shift = round_half_down(&Rational::new(m.a.clone(), m.c.clone()).expect("c ≠ 0"));
        // m = T^shift · S · (S⁻¹ T^{-shift} m)
        m = mat_mul(&s_inv, &mat_mul(&Sl2Matrix::t(-&shift), &m));
        word.push(Letter::T(shift));
        word.push(Letter::S);
    }
    translation_word(&m, word, Letter::T, false)
}

/// Writes `A ∈ Γ(2)` as a signed word in `T²` and `S₂` powers.
///
/// Alternates `a ← a - 2mc` (a left `T^{2m}`) and `c ← c - 2ma` (a left
/// `S₂^m`); parity makes each reduction strict, so `max(|a|, |c|)` falls
/// until `c = 0`.
pub fn decompose_gamma2(a: &Sl2Matrix) -> Result<GeneratorWord> {
    if !a.is_gamma2() {
        return Err(Error::NotGamma2(a.to_string()));
    }
    let mut m = a.clone();
    let mut word = GeneratorWord::new();
    while !m.c.is_zero() {
        if m.a.abs() > m.c.abs() {
            let k = round_half_down(&Rational::new(m.a.clone(), &m.c * 2).expect("c ≠ 0"));
            m = mat_mul(&Sl2Matrix::t2(-&k), &m);
            word.push(Letter::T2(k));
        } else {
            let k = round_half_down(&Rational::new(m.c.clone(), &m.a * 2).expect("a odd"));
            m = mat_mul(&Sl2Matrix::s2(-&k), &m);
            word.push(Letter::S2(k));
        }
    }
    Ok(translation_word(&m, word, Letter::T2, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Sl2Matrix {
        Sl2Matrix::new(a, b, c, d).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn is_pm(x: &Sl2Matrix, y: &Sl2Matrix) -> bool {
        x == y || x == &(-y.clone())
    }

    #[test]
    fn mat_mul_examples() {
        let a = m(2, 1, 1, 1);
        assert_eq!(&a * &Sl2Matrix::identity(), a);
        assert_eq!(&a * &Sl2Matrix::t(5), m(2, 2 * 5 + 1, 1, 5 + 1));
        assert_eq!(&a * &Sl2Matrix::s(), m(1, -2, 1, -1));
    }

    #[test]
    fn determinant_checked() {
        assert!(matches!(Sl2Matrix::new(1, 1, 1, 1), Err(Error::Determinant { .. })));
        assert!("[[1,2],[3,4]]".parse::<Sl2Matrix>().is_err());
        assert!("[[1,2],[3]]".parse::<Sl2Matrix>().is_err());
    }

    #[test]
    fn mobius_examples() {
        assert!((Sl2Matrix::s().mobius(c(0.0, 1.0)).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        let tau = c(0.3, 0.7);
        assert!((Sl2Matrix::t(4).mobius(tau).unwrap() - (tau + 4.0)).norm() < 1e-15);
        let v = m(2, 1, 1, 1).mobius(c(0.0, 1.0)).unwrap();
        assert!((v - c(1.5, 0.5)).norm() < 1e-15);
        assert!(Sl2Matrix::s().mobius(c(0.0, -1.0)).is_err());
    }

    #[test]
    fn gamma2_membership() {
        assert!(Sl2Matrix::identity().is_gamma2());
        assert!(m(1, 2, 0, 1).is_gamma2());
        assert!(!Sl2Matrix::s().is_gamma2());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(Sl2Matrix::identity().normalize_sign(), (Sl2Matrix::identity(), false));
        assert_eq!(m(-1, 0, 0, -1).normalize_sign(), (Sl2Matrix::identity(), true));
        assert_eq!(m(-2, -1, -1, -1).normalize_sign(), (m(2, 1, 1, 1), true));
    }

    #[test]
    fn decompose_examples() {
        let w = decompose_gamma(&Sl2Matrix::t(5));
        assert_eq!(w.letters(), &[Letter::T(5.into())]);
        assert!(!w.is_negative());
        let w = decompose_gamma(&Sl2Matrix::s());
        assert_eq!(w.letters(), &[Letter::S]);
        assert!(!w.is_negative());
        let a = m(2, 1, 1, 1);
        assert!(is_pm(&recompose(&decompose_gamma(&a)), &a));
    }

    #[test]
    fn decompose_gamma2_examples() {
        let w = decompose_gamma2(&m(1, 2, 0, 1)).unwrap();
        assert_eq!(w.letters(), &[Letter::T2(1.into())]);
        let w = decompose_gamma2(&m(1, 0, 2, 1)).unwrap();
        assert_eq!(w.letters(), &[Letter::S2(1.into())]);
        assert!(!w.is_negative());
        let a = m(3, 2, 4, 3);
        assert!(is_pm(&recompose(&decompose_gamma2(&a).unwrap()), &a));
        assert!(matches!(decompose_gamma2(&Sl2Matrix::s()), Err(Error::NotGamma2(_))));
    }

    #[test]
    fn recompose_examples() {
        assert_eq!(recompose(&GeneratorWord::new()), Sl2Matrix::identity());
        let raw = GeneratorWord {
            letters: vec![Letter::S, Letter::S],
            negative: false,
        };
        assert_eq!(recompose(&raw), m(-1, 0, 0, -1));
        let t_rel = GeneratorWord::from_letters(
            [Letter::S, Letter::T((-1).into()), Letter::S, Letter::T((-1).into()), Letter::S],
            false,
        );
        assert!(is_pm(&recompose(&t_rel), &Sl2Matrix::t(1)));
        let s4 = GeneratorWord {
            letters: vec![Letter::S; 4],
            negative: false,
        };
        assert_eq!(recompose(&s4), Sl2Matrix::identity());
    }

    #[test]
    fn push_keeps_normal_form() {
        let w = GeneratorWord::from_letters(
            [Letter::T(2.into()), Letter::T((-2).into()), Letter::S, Letter::S, Letter::S],
            false,
        );
        assert_eq!(w.letters(), &[Letter::S]);
        assert!(w.is_negative());
        assert_eq!(recompose(&w), -Sl2Matrix::s());
    }

    #[test]
    fn exhaustive_small_round_trip() {
        let mut count = 0;
        for a in -5i64..=5 {
            for b in -5i64..=5 {
                for cc in -5i64..=5 {
                    for d in -5i64..=5 {
                        if a * d - b * cc != 1 {
                            continue;
                        }
                        count += 1;
                        let x = m(a, b, cc, d);
                        let w = decompose_gamma(&x);
                        assert_eq!(recompose(&w), x, "{x} -> {w}");
                        if x.is_gamma2() {
                            let w2 = decompose_gamma2(&x).unwrap();
                            assert_eq!(recompose(&w2), x);
                            for l in w2.letters() {
                                assert!(l.matrix().is_gamma2());
                            }
                        }
                    }
                }
            }
        }
        assert!(count > 100);
    }

    #[test]
    fn word_length_logarithmic() {
        let x = Sl2Matrix::from_bottom_row(832_040, 514_229).unwrap(); // Fibonacci pair
        let w = decompose_gamma(&x);
        assert_eq!(recompose(&w), x);
        assert!(w.len() <= 2 * 2 * 30 + 1, "len {}", w.len());
    }

    #[test]
    fn serialization() {
        let x = m(0, -1, 1, 0);
        assert_eq!(serde_json::to_string(&x).unwrap(), "[[0,-1],[1,0]]");
        assert_eq!(serde_json::from_str::<Sl2Matrix>("[[0,-1],[1,0]]").unwrap(), x);
        let w = decompose_gamma(&m(2, 1, 1, 1));
        let json = serde_json::to_value(&w).unwrap();
        assert!(json["sign"] == 1 || json["sign"] == -1);
        assert!(json["letters"][0]["letter"].is_string());
    }

    fn any_matrix() -> impl Strategy<Value = Sl2Matrix> {
        (-10_000i64..=10_000, -10_000i64..=10_000)
            .prop_filter_map("coprime", |(cc, d)| Sl2Matrix::from_bottom_row(cc, d).ok())
    }

    fn small_matrix() -> impl Strategy<Value = Sl2Matrix> {
        (-30i64..=30, -30i64..=30)
            .prop_filter_map("coprime", |(cc, d)| Sl2Matrix::from_bottom_row(cc, d).ok())
    }

    fn gamma2_matrix() -> impl Strategy<Value = Sl2Matrix> {
        proptest::collection::vec((any::<bool>(), -4i64..=4), 0..10).prop_map(|ls| {
            ls.into_iter().fold(Sl2Matrix::identity(), |acc, (t, k)| {
                let l = if t { Sl2Matrix::t2(k) } else { Sl2Matrix::s2(k) };
                &acc * &l
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn gamma_round_trip(x in any_matrix()) {
            let w = decompose_gamma(&x);
            prop_assert_eq!(recompose(&w), x);
        }

        #[test]
        fn gamma2_round_trip(x in gamma2_matrix()) {
            let w = decompose_gamma2(&x).unwrap();
            prop_assert_eq!(recompose(&w), x);
            prop_assert!(w.letters().iter().all(|l| l.matrix().is_gamma2()));
        }

        #[test]
        fn mobius_composes(x in small_matrix(), y in small_matrix(), re in -1.0f64..1.0, im in 0.5f64..2.0) {
            let tau = c(re, im);
            let lhs = x.mobius(y.mobius(tau).unwrap()).unwrap();
            let rhs = (&x * &y).mobius(tau).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }

        #[test]
        fn normalize_preserves_action(x in any_matrix(), re in -1.0f64..1.0, im in 0.5f64..2.0) {
            let (n, _) = x.normalize_sign();
            prop_assert!(n.is_normalized());
            let tau = c(re, im);
            let (u, v) = (x.mobius(tau).unwrap(), n.mobius(tau).unwrap());
            prop_assert!((u - v).norm() <= 1e-12 * (1.0 + u.norm()));
        }
    }
}
