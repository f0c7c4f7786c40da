//! Exact Dedekind sums `s(h,k) = Σ_{r=1}^{k-1} (r/k)((hr/k))`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{gcd, Rational};

/// The sawtooth `((x))`: `x - ⌊x⌋ - 1/2` off the integers, `0` on them.
pub fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        Rational::zero()
    } else {
        x - &Rational::from_integer(x.floor()) - Rational::frac(1, 2)
    }
}

fn check_args(h: &BigInt, k: &BigInt) -> Result<()> {
    if !k.is_positive() {
        return Err(Error::domain(format!("dedekind sum needs k > 0, got k = {k}")));
    }
    if !gcd(h, k).is_one() {
        return Err(Error::domain(format!("dedekind sum needs gcd(h, k) = 1, got ({h}, {k})")));
    }
    Ok(())
}

/// `s(h, k)` for `k ≥ 1` and `gcd(h, k) = 1`.
///
/// Direct O(k) summation. Every summand `(r/k)((hr/k))` is written over the
/// common denominator `2k²` as `r·(2(hr mod k) - k)`; coprimality keeps
/// `hr/k` off the integers for `0 < r < k`.
pub fn dedekind_sum(h: &BigInt, k: &BigInt) -> Result<Rational> {
    check_args(h, k)?;
    let h = h.mod_floor(k);
    let numer = match (h.to_i128(), k.to_i128()) {
        (Some(h), Some(k)) if k < (1 << 30) => BigInt::from(numer_small(h, k)),
        _ => numer_big(&h, k),
    };
    Rational::new(numer, k * k * 2)
}

fn numer_small(h: i128, k: i128) -> i128 {
    (1..k).map(|r| r * (2 * ((h * r) % k) - k)).sum()
}

fn numer_big(h: &BigInt, k: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut r = BigInt::one();
    while &r < k {
        let rem = (h * &r).mod_floor(k);
        acc += &r * (rem * 2 - k);
        r += 1;
    }
    acc
}

/// `s(h,k) + s(k,h) - (h/12k + k/12h - 1/4 + 1/12hk)`; zero by reciprocity.
pub fn reciprocity_defect(h: &BigInt, k: &BigInt) -> Result<Rational> {
    if !h.is_positive() || !k.is_positive() {
        return Err(Error::domain(format!("reciprocity needs h, k > 0, got ({h}, {k})")));
    }
    let lhs = dedekind_sum(h, k)? + dedekind_sum(k, h)?;
    let twelve = BigInt::from(12);
    let rhs = Rational::new(h.clone(), &twelve * k)? + Rational::new(k.clone(), &twelve * h)?
        - Rational::frac(1, 4)
        + Rational::new(1, &twelve * h * k)?;
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn s(h: i64, k: i64) -> Rational {
        dedekind_sum(&b(h), &b(k)).unwrap()
    }

    // Oracle: the defining sum with the sawtooth, term by term.
    fn s_oracle(h: i64, k: i64) -> Rational {
        (1..k).fold(Rational::zero(), |acc, r| {
            acc + Rational::frac(r, k) * sawtooth(&Rational::frac(h * r, k))
        })
    }

    fn gcd64(a: i64, b: i64) -> i64 {
        if b == 0 { a.abs() } else { gcd64(b, a % b) }
    }

    #[test]
    fn sawtooth_examples() {
        assert_eq!(sawtooth(&Rational::frac(1, 3)), Rational::frac(-1, 6));
        assert_eq!(sawtooth(&Rational::from_integer(5)), Rational::zero());
        assert_eq!(sawtooth(&Rational::frac(-1, 4)), Rational::frac(1, 4));
    }

    #[test]
    fn dedekind_examples() {
        assert_eq!(s(0, 1), Rational::zero());
        assert_eq!(s(17, 1), Rational::zero());
        assert_eq!(s(1, 3), Rational::frac(1, 18));
        assert_eq!(s_oracle(1, 3), Rational::frac(1, 18));
        assert_eq!(s(2, 3), Rational::frac(-1, 18));
        assert_eq!(s(1, 4), Rational::frac(1, 8));
    }

    #[test]
    fn matches_sawtooth_oracle() {
        for k in 1..60 {
            for h in -70..70 {
                if gcd64(h, k) == 1 {
                    assert_eq!(s(h, k), s_oracle(h, k), "s({h},{k})");
                }
            }
        }
    }

    #[test]
    fn big_path_agrees_with_fast_path() {
        for k in 1..80i128 {
            for h in 0..k {
                assert_eq!(
                    BigInt::from(numer_small(h, k)),
                    numer_big(&BigInt::from(h), &BigInt::from(k))
                );
            }
        }
        // s(1, k) = (k-1)(k-2)/(12k)
        assert_eq!(s(1, 7), Rational::new(6 * 5, 12 * 7).unwrap());
    }

    #[test]
    fn errors() {
        assert!(dedekind_sum(&b(1), &b(0)).is_err());
        assert!(dedekind_sum(&b(1), &b(-3)).is_err());
        assert!(dedekind_sum(&b(2), &b(4)).is_err());
        assert!(reciprocity_defect(&b(0), &b(1)).is_err());
    }

    #[test]
    fn reciprocity_examples() {
        assert!(reciprocity_defect(&b(1), &b(1)).unwrap().is_zero());
        assert_eq!(s(1, 3) + s(3, 1), Rational::frac(1, 18));
        assert!(reciprocity_defect(&b(1), &b(3)).unwrap().is_zero());
        assert!(reciprocity_defect(&b(5), &b(7)).unwrap().is_zero());
    }

    #[test]
    fn periodicity_oddness_integrality() {
        for k in 1..40 {
            for h in -40..40 {
                if gcd64(h, k) != 1 {
                    continue;
                }
                let base = s(h, k);
                for m in -3..=3 {
                    assert_eq!(s(h + k * m, k), base);
                }
                assert_eq!(s(-h, k), -base.clone());
                let six_k = base * Rational::from_integer(6 * k);
                assert!(six_k.is_integer());
            }
        }
    }

    #[test]
    fn reciprocity_small_range() {
        for h in 1..=60 {
            for k in 1..=60 {
                if gcd64(h, k) == 1 {
                    assert!(reciprocity_defect(&b(h), &b(k)).unwrap().is_zero());
                }
            }
        }
    }
}
