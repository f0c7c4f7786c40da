//! Transformation laws of the theta functions under `SL(2, ℤ)` and `Γ(2)`,
//! and argument-reduced evaluation built on them.
//!
//! For `A = (a b; c d)` with `c > 0` the θ₁ law reads
//!
//! ```text
//! θ₁(z/(cτ+d), Aτ) = ε₁(A) (−i(cτ+d))^{1/2} e^{πicz²/(cτ+d)} θ₁(z, τ)
//! ```
//!
//! and for `A ∈ Γ(2)` the θ₂, θ₃, θ₄ laws carry `α(A) ε₁′(A) (cτ+d)^{1/2}`
//! in front instead. Both square roots are principal. For `c > 0` and
//! `Im τ > 0` we have `Re(−i(cτ+d)) = c·Im τ > 0` and `Im(cτ+d) > 0`, so
//! neither argument ever touches the branch cut on the negative real axis.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Rational, UnitPhase};
use crate::modular::{decompose_gamma, GeneratorWord, Letter, Sl2Matrix};
use crate::multipliers::{gamma2_alpha, gamma2_epsilon, theta1_epsilon, MultiplierValue};
use crate::theta::{check_tol, check_upper_half_plane, theta_series_capped, LatticePoint, ThetaKind, TERM_CAP};
use crate::Complex;

const I: Complex = Complex::new(0.0, 1.0);

/// `(−i(cτ+d))^{1/2}` on the principal branch; `1` when `c = 0, d > 0`.
pub fn automorphy_sqrt(a: &Sl2Matrix, tau: Complex) -> Result<Complex> {
    check_upper_half_plane(tau)?;
    if a.c().is_negative() || (a.c().is_zero() && !a.d().is_positive()) {
        return Err(Error::domain(format!("automorphy factor needs a normalized matrix, got {a}")));
    }
    if a.c().is_zero() {
        return Ok(Complex::new(1.0, 0.0));
    }
    Ok((-I * a.cocycle(tau)).sqrt())
}

/// `πicz²/(cτ+d)`, the logarithm of the Gaussian factor.
fn gaussian_exponent(a: &Sl2Matrix, z: Complex, tau: Complex) -> Complex {
    let c = a.c().to_f64().unwrap_or(f64::INFINITY);
    if c == 0.0 {
        return Complex::new(0.0, 0.0);
    }
    I * PI * c * z * z / a.cocycle(tau)
}

/// `e^{πicz²/(cτ+d)}`.
pub fn gaussian_factor(a: &Sl2Matrix, z: Complex, tau: Complex) -> Complex {
    gaussian_exponent(a, z, tau).exp()
}

/// Conditioning factor `|e^{πicz²/(cτ+d)}| (1 + |cτ+d|^{1/2})`.
pub fn kappa(a: &Sl2Matrix, z: Complex, tau: Complex) -> f64 {
    gaussian_factor(a, z, tau).norm() * (1.0 + a.cocycle(tau).norm().sqrt())
}

/// One theta function's transformation law under one matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformLaw {
    pub kind: ThetaKind,
    /// The matrix as given; the law is stated for it, sign included.
    pub matrix: Sl2Matrix,
    /// The sign-normalized matrix the multiplier formulas are evaluated on.
    pub normalized: Sl2Matrix,
    pub multiplier: MultiplierValue,
}

impl TransformLaw {
    /// θ₁ under any `A ∈ SL(2, ℤ)`.
    ///
    /// `−A` moves `z/(cτ+d)` to its negative, so the odd θ₁ picks up `−1`.
    /// For `c = 0` the law is the translation `θ₁(z, τ+b) = e^{πib/4}θ₁(z, τ)`.
    pub fn theta1(a: &Sl2Matrix) -> Result<Self> {
        let (normalized, flipped) = a.normalize_sign();
        let base = if normalized.c().is_zero() {
            UnitPhase::new(Rational::new(normalized.b().clone(), 4)?)
        } else {
            theta1_epsilon(&normalized)?.value
        };
        Ok(TransformLaw {
            kind: ThetaKind::Theta1,
            matrix: a.clone(),
            normalized,
            multiplier: (base * UnitPhase::sign(flipped)).into(),
        })
    }

    /// θ₂, θ₃ or θ₄ under `A ∈ Γ(2)`.
    ///
    /// For `c = 0`, `A = ±T^{2m}`: θ₃ and θ₄ are invariant and
    /// `θ₂(z, τ+2m) = i^m θ₂(z, τ)`.
    pub fn gamma2(kind: ThetaKind, a: &Sl2Matrix) -> Result<Self> {
        if kind == ThetaKind::Theta1 {
            return Err(Error::domain("θ₁ uses the full-group law"));
        }
        if !a.is_gamma2() {
            return Err(Error::NotGamma2(a.to_string()));
        }
        let (normalized, _) = a.normalize_sign();
        let multiplier = if normalized.c().is_zero() {
            match kind {
                ThetaKind::Theta2 => UnitPhase::i_pow(&(normalized.b() / 2)),
                _ => UnitPhase::one(),
            }
        } else {
            gamma2_alpha(kind, &normalized)?.value * gamma2_epsilon(&normalized)?.value
        };
        Ok(TransformLaw {
            kind,
            matrix: a.clone(),
            normalized,
            multiplier: multiplier.into(),
        })
    }

    /// The square-root factor: `(−i(cτ+d))^{1/2}` for θ₁, `(cτ+d)^{1/2}` otherwise.
    pub fn weight_factor(&self, tau: Complex) -> Result<Complex> {
        if self.kind == ThetaKind::Theta1 {
            automorphy_sqrt(&self.normalized, tau)
        } else {
            check_upper_half_plane(tau)?;
            if self.normalized.c().is_zero() {
                Ok(Complex::new(1.0, 0.0))
            } else {
                Ok(self.normalized.cocycle(tau).sqrt())
            }
        }
    }

    /// Everything multiplying `θ(z, τ)` on the right-hand side.
    pub fn prefactor(&self, z: Complex, tau: Complex) -> Result<Complex> {
        Ok(self.multiplier.to_complex() * self.weight_factor(tau)? * gaussian_factor(&self.normalized, z, tau))
    }

    /// The point `(z/(cτ+d), Aτ)` the left-hand side is evaluated at.
    pub fn image(&self, z: Complex, tau: Complex) -> Result<LatticePoint> {
        LatticePoint::new(z / self.matrix.cocycle(tau), self.matrix.mobius(tau)?)
    }

    /// The right-hand side, with the direct series for `θ(z, τ)`.
    pub fn predict(&self, z: Complex, tau: Complex, tol: f64) -> Result<Prediction> {
        let p = LatticePoint::new(z, tau)?;
        let theta = theta_series_capped(self.kind, &p, tol, TERM_CAP)?.value;
        Ok(Prediction {
            value: self.prefactor(z, tau)? * theta,
            kappa: kappa(&self.normalized, z, tau),
        })
    }
}

/// A predicted value and the conditioning factor its residual is scaled by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub value: Complex,
    pub kappa: f64,
}

/// Right-hand side of the θ₁ law for `A`, to compare with `θ₁(z/(cτ+d), Aτ)`.
pub fn predict_theta1(a: &Sl2Matrix, z: Complex, tau: Complex, tol: f64) -> Result<Prediction> {
    TransformLaw::theta1(a)?.predict(z, tau, tol)
}

/// Right-hand side of the Γ(2) law for θ₂, θ₃ or θ₄.
pub fn predict_theta_gamma2(kind: ThetaKind, a: &Sl2Matrix, z: Complex, tau: Complex, tol: f64) -> Result<Prediction> {
    TransformLaw::gamma2(kind, a)?.predict(z, tau, tol)
}

/// The sign `σ` in `j(AB, τ) = σ j(A, Bτ) j(B, τ)` once all three matrices
/// are sign-normalized, together with the residual of the better choice.
pub fn cocycle_sign(a: &Sl2Matrix, b: &Sl2Matrix, tau: Complex) -> Result<(i8, f64)> {
    let (na, _) = a.normalize_sign();
    let (nb, _) = b.normalize_sign();
    let (nab, _) = (a * b).normalize_sign();
    let lhs = nab.cocycle(tau);
    let rhs = na.cocycle(nb.mobius(tau)?) * nb.cocycle(tau);
    let (plus, minus) = ((lhs - rhs).norm(), (lhs + rhs).norm());
    Ok(if plus <= minus { (1, plus) } else { (-1, minus) })
}

/// Moves `τ` into `|Re τ| ≤ 1/2, |τ| ≥ 1` and returns the normalized matrix
/// doing it with the image point.
pub fn reduce_tau(tau: Complex) -> Result<(Sl2Matrix, Complex)> {
    check_upper_half_plane(tau)?;
    let mut a = Sl2Matrix::identity();
    let mut t = tau;
    for _ in 0..10_000 {
        let shift = t.re.round();
        if shift != 0.0 {
            let m = BigInt::from(-(shift as i64));
            a = &Sl2Matrix::t(m) * &a;
            t = a.mobius(tau)?;
        }
        if t.norm_sqr() < 1.0 - 1e-12 {
            a = &Sl2Matrix::s() * &a;
            t = a.mobius(tau)?;
        } else {
            let (a, _) = a.normalize_sign();
            return Ok((a, t));
        }
    }
    Err(Error::Internal(format!("reduction of {tau} did not terminate")))
}

/// Result of an argument-reduced evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FastEval {
    pub value: Complex,
    /// Series terms summed at the reduced point.
    pub terms: usize,
    pub index_bound: usize,
    pub reduction: Sl2Matrix,
    pub word: GeneratorWord,
    pub tau_reduced: Complex,
    pub z_reduced: Complex,
}

/// `θ_kind(z, τ)` via reduction of `τ` into the fundamental domain.
///
/// θ₂, θ₃, θ₄ are first rewritten as θ₁ at a half-period shift,
///
/// ```text
/// θ₂(z) = θ₁(z + 1/2)
/// θ₃(z) = e^{πiτ/4} e^{πiz} θ₁(z + 1/2 + τ/2)
/// θ₄(z) = −i e^{πiτ/4} e^{πiz} θ₁(z + τ/2)
/// ```
///
/// so a single law covers every reducing matrix. At the reduced point `τ′`
/// the elliptic variable is moved into the period parallelogram by
/// `θ₁(w + m + nτ′) = (−1)^{m+n} e^{−πin²τ′ − 2πinw} θ₁(w)`. All exponential
/// factors are combined in log form before exponentiating.
pub fn eval_fast(kind: ThetaKind, z: Complex, tau: Complex, tol: f64) -> Result<FastEval> {
    check_tol(tol)?;
    LatticePoint::new(z, tau)?;
    let half_tau = tau / 2.0;
    let (shift, mut log_pre, mut unit) = match kind {
        ThetaKind::Theta1 => (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)),
        ThetaKind::Theta2 => (Complex::new(0.5, 0.0), Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)),
        ThetaKind::Theta3 => (half_tau + 0.5, I * PI * (tau / 4.0 + z), Complex::new(1.0, 0.0)),
        ThetaKind::Theta4 => (half_tau, I * PI * (tau / 4.0 + z), -I),
    };
    let u = z + shift;

    let (a, tau_r) = reduce_tau(tau)?;
    let law = TransformLaw::theta1(&a)?;
    let j = a.cocycle(tau);
    // θ₁(u, τ) = θ₁(u/j, τ′) / (ε₁ · weight · e^{πicu²/j})
    log_pre -= gaussian_exponent(&a, u, tau);
    unit /= law.multiplier.to_complex() * law.weight_factor(tau)?;

    let zr = u / j;
    let n = (zr.im / tau_r.im).round();
    let m = (zr - tau_r * n).re.round();
    let w = zr - tau_r * n - m;
    log_pre += I * PI * (m + n) - I * PI * n * n * tau_r - 2.0 * PI * I * n * w;

    let scale = log_pre.exp() * unit;
    let series_tol = tol / scale.norm().max(f64::MIN_POSITIVE);
    let p = LatticePoint::new(w, tau_r)?;
    let series = theta_series_capped(ThetaKind::Theta1, &p, series_tol, TERM_CAP)?;
    Ok(FastEval {
        value: scale * series.value,
        terms: series.terms,
        index_bound: series.index_bound,
        word: decompose_gamma(&a),
        reduction: a,
        tau_reduced: tau_r,
        z_reduced: w,
    })
}

/// `θ₁(z/(cτ+d), Aτ)` predicted by applying the `S` and `T^m` laws one
/// letter at a time along `decompose_gamma(A)`, right to left.
pub fn chain_theta1(a: &Sl2Matrix, z: Complex, tau: Complex, tol: f64) -> Result<Complex> {
    let word = decompose_gamma(a);
    let p = LatticePoint::new(z, tau)?;
    let theta = theta_series_capped(ThetaKind::Theta1, &p, tol, TERM_CAP)?.value;
    let (mut u, mut t) = (z, tau);
    let mut factor = Complex::new(1.0, 0.0);
    for letter in word.letters().iter().rev() {
        match letter {
            Letter::T(m) => {
                let m = m.to_f64().ok_or_else(|| Error::domain("translation too large"))?;
                factor *= (I * PI * m / 4.0).exp();
                t += m;
            }
            Letter::S => {
                factor *= -I * (-I * t).sqrt() * (I * PI * u * u / t).exp();
                u /= t;
                t = -1.0 / t;
            }
            other => return Err(Error::Internal(format!("unexpected letter {other}"))),
        }
    }
    // recompose(word) = ±A and θ₁ is odd.
    let sign = if word.is_negative() { -1.0 } else { 1.0 };
    Ok(factor * theta * sign)
}

/// `|lhs − rhs|` for the law, with `lhs` from the direct series at the image point.
pub fn law_residual(law: &TransformLaw, z: Complex, tau: Complex, tol: f64) -> Result<(Complex, Prediction, f64)> {
    let lhs = theta_series_capped(law.kind, &law.image(z, tau)?, tol, TERM_CAP)?.value;
    let rhs = law.predict(z, tau, tol)?;
    Ok((lhs, rhs, (lhs - rhs.value).norm()))
}
