//! Exact multiplier systems.
//!
//! * `ε(A) = exp(πi((a+d)/12c − s(d,c)))`, the η multiplier;
//! * `ε₁(A) = −iε(A)³`, paired with `(−i(cτ+d))^{1/2}` in the θ₁ law;
//! * `ε₁′(A) = e^{−πi/4}ε₁(A)`, the same multiplier paired with the principal
//!   `(cτ+d)^{1/2}` in the Γ(2) laws;
//! * `α(A)`, the fourth roots of unity in front of θ₂, θ₃, θ₄ on Γ(2).
//!
//! Everything is a `UnitPhase`, so each lemma is one rational equality mod 2.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dedekind::dedekind_sum;
use crate::error::{Error, Result};
use crate::exact::{jacobi_symbol, Rational, UnitPhase};
use crate::modular::{GeneratorWord, Letter, Sl2Matrix};
use crate::theta::ThetaKind;
use crate::Complex;

/// An exact unit multiplier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiplierValue {
    pub value: UnitPhase,
}

impl MultiplierValue {
    pub fn new(value: UnitPhase) -> Self {
        MultiplierValue { value }
    }

    pub fn phase(&self) -> &Rational {
        self.value.phase()
    }

    pub fn to_complex(&self) -> Complex {
        self.value.to_complex()
    }
}

impl From<UnitPhase> for MultiplierValue {
    fn from(value: UnitPhase) -> Self {
        MultiplierValue { value }
    }
}

impl Serialize for MultiplierValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("MultiplierValue", 2)?;
        st.serialize_field("phase", self.value.phase())?;
        st.serialize_field("complex", &self.to_complex())?;
        st.end()
    }
}

fn require_positive_c(a: &Sl2Matrix) -> Result<()> {
    if a.c().is_positive() {
        Ok(())
    } else {
        Err(Error::domain(format!("multiplier needs c > 0, got {a}; normalize first")))
    }
}

fn require_gamma2(a: &Sl2Matrix) -> Result<()> {
    if a.is_gamma2() {
        Ok(())
    } else {
        Err(Error::NotGamma2(a.to_string()))
    }
}

/// `(a+d)/12c − s(d,c)`, the exponent of `ε(A)` before reduction.
fn eta_exponent(a: &Sl2Matrix) -> Result<Rational> {
    require_positive_c(a)?;
    let c = a.c();
    Ok(Rational::new(a.a() + a.d(), c * 12)? - dedekind_sum(a.d(), c)?)
}

/// `ε(A)` for `c > 0`.
pub fn eta_epsilon(a: &Sl2Matrix) -> Result<MultiplierValue> {
    Ok(UnitPhase::new(eta_exponent(a)?).into())
}

/// `ε₁(A) = −iε(A)³` for `c > 0`.
pub fn theta1_epsilon(a: &Sl2Matrix) -> Result<MultiplierValue> {
    let t = eta_exponent(a)? * Rational::from_integer(3) - Rational::frac(1, 2);
    Ok(UnitPhase::new(t).into())
}

/// `ε₁′(A) = e^{−3πi/4} exp(3πi((a+d)/12c − s(d,c)))`, the Γ(2) convention.
///
/// Since `(−iw)^{1/2} = e^{−πi/4} w^{1/2}` for `Im w > 0`, this equals
/// `e^{−πi/4}ε₁(A)` and both laws describe the same transformation.
pub fn gamma2_epsilon(a: &Sl2Matrix) -> Result<MultiplierValue> {
    let t = eta_exponent(a)? * Rational::from_integer(3) - Rational::frac(3, 4);
    Ok(UnitPhase::new(t).into())
}

/// `ε₁` extended to normalized matrices with `c = 0`.
///
/// For `A = T^b` the θ₁ law with `(−i)^{1/2} = e^{−πi/4}` and the translation
/// law `θ₁(z, τ+b) = e^{πib/4}θ₁(z, τ)` force `ε₁(T^b) = e^{πi(b+1)/4}`.
pub fn theta1_epsilon_ext(a: &Sl2Matrix) -> Result<MultiplierValue> {
    if !a.is_normalized() {
        return Err(Error::domain(format!("matrix {a} is not normalized")));
    }
    if a.c().is_zero() {
        Ok(UnitPhase::new(Rational::new(a.b() + 1, 4)?).into())
    } else {
        theta1_epsilon(a)
    }
}

/// The closed Jacobi-symbol form of `ε₁(A)` as an exact phase.
///
/// `c` odd: `(d/c) i^{(c−3)/2} e^{(πi/4)c(a+d)}`.
/// `c` even: `(c/|d|) e^{πi/4} i^{(1−d)/2} e^{(πi/4)d(b−c)}`.
pub fn theta1_epsilon_closed_phase(a: &Sl2Matrix) -> Result<UnitPhase> {
    require_positive_c(a)?;
    let (aa, b, c, d) = (a.a(), a.b(), a.c(), a.d());
    let quarter = |n: BigInt| Rational::new(n, 4);
    let (symbol, rest) = if c.is_odd() {
        let symbol = jacobi_symbol(d, c)?;
        let rest = quarter(c - 3)? + quarter(c * (aa + d))?;
        (symbol, rest)
    } else if d.is_odd() {
        let symbol = jacobi_symbol(c, &d.abs())?;
        let rest = Rational::frac(1, 4) + quarter(1 - d)? + quarter(d * (b - c))?;
        (symbol, rest)
    } else {
        return Err(Error::Internal(format!("c and d both even in {a}")));
    };
    match symbol {
        1 => Ok(UnitPhase::new(rest)),
        -1 => Ok(UnitPhase::new(rest + Rational::from_integer(1))),
        _ => Err(Error::Internal(format!("Jacobi symbol vanished for {a}"))),
    }
}

/// The closed Jacobi-symbol form of `ε₁(A)` as a complex number.
pub fn theta1_epsilon_closed(a: &Sl2Matrix) -> Result<Complex> {
    Ok(theta1_epsilon_closed_phase(a)?.to_complex())
}

/// The integer exponent `e` of `α(A) = i^e` for θ₂, θ₃, θ₄ on Γ(2).
pub fn gamma2_alpha_exponent(kind: ThetaKind, a: &Sl2Matrix) -> Result<BigInt> {
    require_gamma2(a)?;
    let (aa, b, c, d) = (a.a(), a.b(), a.c(), a.d());
    let (half_b, half_c) = (b / 2, c / 2);
    match kind {
        ThetaKind::Theta1 => Err(Error::domain("θ₁ carries no α prefactor")),
        ThetaKind::Theta2 => Ok((d - 1) * (&half_c - 1) + &half_c),
        ThetaKind::Theta3 => Ok((d - 1) * (&half_c + 1) - &half_b * aa + &half_c),
        ThetaKind::Theta4 => Ok((aa - 1) * (&half_b - 1) - &half_b),
    }
}

/// `α(A)` for θ₂, θ₃, θ₄ and `A ∈ Γ(2)`.
///
/// The exponents are evaluated as printed for any Γ(2) matrix, `c = 0`
/// included; the transformation laws only use them when `c > 0`.
pub fn gamma2_alpha(kind: ThetaKind, a: &Sl2Matrix) -> Result<MultiplierValue> {
    Ok(UnitPhase::i_pow(&gamma2_alpha_exponent(kind, a)?).into())
}

/// Both sides of a lemma identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaOutcome {
    pub lhs: UnitPhase,
    pub rhs: UnitPhase,
    pub holds: bool,
}

impl LemmaOutcome {
    fn new(lhs: UnitPhase, rhs: UnitPhase) -> Self {
        let holds = lhs == rhs;
        LemmaOutcome { lhs, rhs, holds }
    }
}

fn eps1(a: &Sl2Matrix) -> Result<UnitPhase> {
    Ok(theta1_epsilon(a)?.value)
}

/// `ε₁(AT^m) = ε₁(A) e^{πim/4}`.
pub fn lemma1_check(a: &Sl2Matrix, m: i64) -> Result<LemmaOutcome> {
    require_positive_c(a)?;
    let lhs = eps1(&(a * &Sl2Matrix::t(m)))?;
    let rhs = eps1(a)? * UnitPhase::from_frac(m, 4);
    Ok(LemmaOutcome::new(lhs, rhs))
}

/// `ε₁(AS) = e^{−3πi/4}ε₁(A)` if `d > 0`; `ε₁(AS′) = e^{3πi/4}ε₁(A)` if
/// `d < 0`, with `S′ = (0 1; −1 0)` so that `AS′` has positive `c`.
pub fn lemma2_check(a: &Sl2Matrix) -> Result<LemmaOutcome> {
    require_positive_c(a)?;
    let (s, factor) = if a.d().is_positive() {
        (Sl2Matrix::s(), UnitPhase::from_frac(-3, 4))
    } else if a.d().is_negative() {
        (Sl2Matrix::s_alt(), UnitPhase::from_frac(3, 4))
    } else {
        return Err(Error::domain(format!("the S step needs d ≠ 0, got {a}")));
    };
    let lhs = eps1(&(a * &s))?;
    let rhs = eps1(a)? * factor;
    Ok(LemmaOutcome::new(lhs, rhs))
}

/// `ε₁(AT^{2m}) = ε₁(A) e^{πim/2}` for `A ∈ Γ(2)`.
pub fn lemma3_check(a: &Sl2Matrix, m: i64) -> Result<LemmaOutcome> {
    require_gamma2(a)?;
    require_positive_c(a)?;
    let lhs = eps1(&(a * &Sl2Matrix::t2(m)))?;
    let rhs = eps1(a)? * UnitPhase::from_frac(m, 2);
    Ok(LemmaOutcome::new(lhs, rhs))
}

fn lemma4_sides(a: &Sl2Matrix) -> Result<(UnitPhase, UnitPhase, bool)> {
    require_gamma2(a)?;
    require_positive_c(a)?;
    let product = a * &Sl2Matrix::s2(1);
    if product.c().is_zero() {
        return Err(Error::domain(format!("the S₂ step needs c + 2d ≠ 0, got {a}")));
    }
    let (normalized, flipped) = product.normalize_sign();
    Ok((eps1(&normalized)?, eps1(a)?, flipped))
}

/// With `S₂ = (1 0; 2 1)`: `ε₁(AS₂) = ε₁(A) e^{−πi/2}` if `c + 2d > 0`, and
/// `ε₁(−AS₂) = ε₁(A)` if `c + 2d < 0`, checked exactly as stated.
pub fn lemma4_check(a: &Sl2Matrix) -> Result<LemmaOutcome> {
    let (lhs, base, flipped) = lemma4_sides(a)?;
    let rhs = if flipped { base } else { base * UnitPhase::from_frac(-1, 2) };
    Ok(LemmaOutcome::new(lhs, rhs))
}

/// The factor `ε₁(±AS₂)/ε₁(A)` actually realized, normalized sign included.
pub fn lemma4_observed_factor(a: &Sl2Matrix) -> Result<UnitPhase> {
    let (lhs, base, _) = lemma4_sides(a)?;
    Ok(lhs * base.inv())
}

/// `ε₁` of the normalized form of `recompose(word)`, built letter by letter.
///
/// Starts from `ε₁(I) = e^{πi/4}` and multiplies in `e^{πim/4}` per `T^m`
/// and `e^{∓3πi/4}` per `S`, the sign chosen by whether the running product
/// kept or lost its normalization. `T^{2m}` and `S₂^m` are expanded through
/// `S₂ = S T^{−2} S^{−1}`.
pub fn epsilon1_by_induction(word: &GeneratorWord) -> Result<UnitPhase> {
    let mut prefix = Sl2Matrix::identity();
    let mut phase = UnitPhase::from_frac(1, 4);
    let step = |letter: &Letter, prefix: &mut Sl2Matrix, phase: &mut UnitPhase| -> Result<()> {
        match letter {
            Letter::T(m) => {
                *phase = &*phase * &UnitPhase::new(Rational::new(m.clone(), 4)?);
                *prefix = &*prefix * &letter.matrix();
            }
            Letter::S => {
                let (next, flipped) = (&*prefix * &Sl2Matrix::s()).normalize_sign();
                let factor = if flipped { UnitPhase::from_frac(3, 4) } else { UnitPhase::from_frac(-3, 4) };
                *phase = &*phase * &factor;
                *prefix = next;
            }
            _ => return Err(Error::Internal(format!("unexpanded letter {letter}"))),
        }
        Ok(())
    };
    for letter in word.letters() {
        for basic in expand_letter(letter) {
            step(&basic, &mut prefix, &mut phase)?;
        }
    }
    Ok(phase)
}

/// Rewrites a letter over `{S, T^m}` up to sign.
fn expand_letter(letter: &Letter) -> Vec<Letter> {
    match letter {
        Letter::T2(m) => vec![Letter::T(m * 2u32)],
        // S₂^m = (1 0; 2m 1) = −S T^{−2m} S.
        Letter::S2(m) => vec![Letter::S, Letter::T(-(m * 2u32)), Letter::S],
        other => vec![other.clone()],
    }
}
