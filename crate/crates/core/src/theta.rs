//! Direct q-series evaluation of the four Jacobi theta functions,
//!
//! ```text
//! θ₁(z,τ) = -i Σ (-1)^n q^{(n+1/2)²} e^{(2n+1)πiz}
//! θ₂(z,τ) =    Σ        q^{(n+1/2)²} e^{(2n+1)πiz}
//! θ₃(z,τ) =    Σ        q^{n²}       e^{2nπiz}
//! θ₄(z,τ) =    Σ (-1)^n q^{n²}       e^{2nπiz}
//! ```
//!
//! with nome `q = e^{πiτ}`. Partial sums are symmetric in the index and stop
//! at the first `N` whose geometric tail majorant is below `tol / 2`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex;

/// Default absolute tolerance for series evaluation.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest index bound `N` a series evaluation may use.
pub const TERM_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaKind {
    Theta1,
    Theta2,
    Theta3,
    Theta4,
}

impl ThetaKind {
    pub const ALL: [ThetaKind; 4] = [
        ThetaKind::Theta1,
        ThetaKind::Theta2,
        ThetaKind::Theta3,
        ThetaKind::Theta4,
    ];

    /// Partner under `z → z + 1/2`: swaps θ₁ ↔ θ₂ and θ₃ ↔ θ₄.
    pub fn partner(self) -> ThetaKind {
        match self {
            ThetaKind::Theta1 => ThetaKind::Theta2,
            ThetaKind::Theta2 => ThetaKind::Theta1,
            ThetaKind::Theta3 => ThetaKind::Theta4,
            ThetaKind::Theta4 => ThetaKind::Theta3,
        }
    }

    /// θ₁ and θ₂ run over half-integer indices.
    pub fn half_integer_index(self) -> bool {
        matches!(self, ThetaKind::Theta1 | ThetaKind::Theta2)
    }

    /// θ₁ is odd in `z`; the other three are even.
    pub fn is_odd(self) -> bool {
        self == ThetaKind::Theta1
    }

    pub fn index(self) -> u8 {
        match self {
            ThetaKind::Theta1 => 1,
            ThetaKind::Theta2 => 2,
            ThetaKind::Theta3 => 3,
            ThetaKind::Theta4 => 4,
        }
    }
}

impl fmt::Display for ThetaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theta{}", self.index())
    }
}

impl FromStr for ThetaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let digit = t.strip_prefix("theta").unwrap_or(&t);
        match digit {
            "1" => Ok(ThetaKind::Theta1),
            "2" => Ok(ThetaKind::Theta2),
            "3" => Ok(ThetaKind::Theta3),
            "4" => Ok(ThetaKind::Theta4),
            _ => Err(Error::Parse(format!("unknown theta kind `{s}`"))),
        }
    }
}

/// A pair `(z, τ)` with `τ` in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticePoint {
    z: Complex,
    tau: Complex,
}

impl LatticePoint {
    pub fn new(z: Complex, tau: Complex) -> Result<Self> {
        check_upper_half_plane(tau)?;
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::domain(format!("z = {z} is not finite")));
        }
        Ok(LatticePoint { z, tau })
    }

    pub fn z(&self) -> Complex {
        self.z
    }

    pub fn tau(&self) -> Complex {
        self.tau
    }

    /// `|q| = e^{-π Im τ}`.
    pub fn nome_modulus(&self) -> f64 {
        (-PI * self.tau.im).exp()
    }
}

pub(crate) fn check_upper_half_plane(tau: Complex) -> Result<()> {
    if tau.im > 0.0 && tau.im.is_finite() && tau.re.is_finite() {
        Ok(())
    } else {
        Err(Error::NotUpperHalfPlane {
            re: tau.re,
            im: tau.im,
        })
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("tolerance must be positive, got {tol}")))
    }
}

/// A series value together with the work it took.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: Complex,
    /// Number of series terms summed.
    pub terms: usize,
    /// The index bound `N` of the symmetric partial sum.
    pub index_bound: usize,
}

/// `e^{πi(τk² + 2kz)}`, i.e. `q^{k²} e^{2πikz}`.
#[inline]
fn nome_term(k: f64, z: Complex, tau: Complex) -> Complex {
    let w = tau * (k * k) + z * (2.0 * k);
    Complex::new(-PI * w.im, PI * w.re).exp()
}

/// Symmetric partial sum `S_N`: indices `|n| ≤ N` for θ₃, θ₄ and
/// `n + 1/2` with `-N-1 ≤ n ≤ N` for θ₁, θ₂. Pairs `±k` are combined
/// before accumulation, smallest terms first.
pub fn partial_sum(kind: ThetaKind, p: &LatticePoint, n: usize) -> Complex {
    let (z, tau) = (p.z, p.tau);
    let mut sum = Complex::new(0.0, 0.0);
    match kind {
        ThetaKind::Theta3 | ThetaKind::Theta4 => {
            for j in (1..=n).rev() {
                let k = j as f64;
                let pair = nome_term(k, z, tau) + nome_term(-k, z, tau);
                if kind == ThetaKind::Theta4 && j % 2 == 1 {
                    sum -= pair;
                } else {
                    sum += pair;
                }
            }
            sum + 1.0
        }
        ThetaKind::Theta1 | ThetaKind::Theta2 => {
            for j in (0..=n).rev() {
                let k = j as f64 + 0.5;
                let (hi, lo) = (nome_term(k, z, tau), nome_term(-k, z, tau));
                if kind == ThetaKind::Theta2 {
                    sum += hi + lo;
                } else if j % 2 == 0 {
                    sum += hi - lo;
                } else {
                    sum -= hi - lo;
                }
            }
            if kind == ThetaKind::Theta1 {
                sum * Complex::new(0.0, -1.0)
            } else {
                sum
            }
        }
    }
}

/// Upper bound on `Σ_{omitted k} |q^{k²} e^{2πikz}|` for the partial sum `S_N`.
///
/// Each omitted term is dominated by `m(k) = e^{-π k² Im τ + 2π |k| |Im z|}`;
/// once the ratio `m(k+1)/m(k)` drops below one at the first omitted index
/// `k₀`, it stays below that value, so each side's tail is at most
/// `m(k₀) / (1 - r)`. Returns `+∞` before that regime.
pub fn truncation_bound(kind: ThetaKind, p: &LatticePoint, n: usize) -> f64 {
    let y = p.tau.im;
    let x = p.z.im.abs();
    let k0 = n as f64 + if kind.half_integer_index() { 1.5 } else { 1.0 };
    let log_ratio = -PI * y * (2.0 * k0 + 1.0) + 2.0 * PI * x;
    if log_ratio >= 0.0 {
        return f64::INFINITY;
    }
    let log_first = -PI * y * k0 * k0 + 2.0 * PI * k0 * x;
    2.0 * log_first.exp() / -log_ratio.exp_m1()
}

/// Smallest `N ≤ cap` with `truncation_bound(N) < tol / 2`.
pub fn required_index(kind: ThetaKind, p: &LatticePoint, tol: f64, cap: usize) -> Result<usize> {
    check_tol(tol)?;
    let target = tol / 2.0;
    if let Some(n) = (0..=cap).find(|&n| truncation_bound(kind, p, n) < target) {
        return Ok(n);
    }
    Err(Error::PrecisionUnreachable {
        tol,
        cap,
        achievable: truncation_bound(kind, p, cap),
    })
}

/// Direct series evaluation with telemetry and an explicit term cap.
pub fn theta_series_capped(
    kind: ThetaKind,
    p: &LatticePoint,
    tol: f64,
    cap: usize,
) -> Result<SeriesValue> {
    let n = required_index(kind, p, tol, cap)?;
    let terms = if kind.half_integer_index() { 2 * n + 2 } else { 2 * n + 1 };
    Ok(SeriesValue {
        value: partial_sum(kind, p, n),
        terms,
        index_bound: n,
    })
}

/// Direct series evaluation, within `tol` of the true value.
pub fn theta_series(kind: ThetaKind, p: &LatticePoint, tol: f64) -> Result<Complex> {
    Ok(theta_series_capped(kind, p, tol, TERM_CAP)?.value)
}

/// `θ_kind(z, τ)` from raw coordinates.
pub fn theta(kind: ThetaKind, z: Complex, tau: Complex, tol: f64) -> Result<Complex> {
    theta_series(kind, &LatticePoint::new(z, tau)?, tol)
}

/// `θ₁(z,τ) = 2 Σ_{m≥0} (-1)^m q^{(m+1/2)²} sin((2m+1)πz)`.
///
/// Uses the same truncation index as [`theta_series`] for θ₁.
pub fn theta1_sine_series(p: &LatticePoint, tol: f64) -> Result<Complex> {
    let n = required_index(ThetaKind::Theta1, p, tol, TERM_CAP)?;
    let mut sum = Complex::new(0.0, 0.0);
    for m in (0..=n).rev() {
        let k = m as f64 + 0.5;
        let w = p.tau * (k * k);
        let q_pow = Complex::new(-PI * w.im, PI * w.re).exp();
        let term = q_pow * (p.z * (2.0 * k * PI)).sin();
        if m % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum * 2.0)
}

/// `θ_{partner(kind)}(z + 1/2, τ)`, which equals `± θ_kind(z, τ)`.
///
/// With the series conventions above: `θ₁(z+½) = θ₂(z)`, `θ₂(z+½) = -θ₁(z)`,
/// `θ₃(z+½) = θ₄(z)` and `θ₄(z+½) = θ₃(z)`, so the sign is `-1` for θ₁ only.
pub fn half_period_shift(kind: ThetaKind, p: &LatticePoint, tol: f64) -> Result<Complex> {
    let shifted = LatticePoint::new(p.z + 0.5, p.tau)?;
    theta_series(kind.partner(), &shifted, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn pt(z: Complex, tau: Complex) -> LatticePoint {
        LatticePoint::new(z, tau).unwrap()
    }

    fn random_point(rng: &mut ChaCha8Rng) -> LatticePoint {
        pt(
            c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)),
            c(rng.random_range(-1.0..1.0), rng.random_range(0.5..2.0)),
        )
    }

    const TOL: f64 = 1e-12;

    #[test]
    fn theta1_vanishes_at_origin() {
        let v = theta_series(ThetaKind::Theta1, &pt(c(0.0, 0.0), c(0.0, 1.0)), TOL).unwrap();
        assert!(v.norm() < TOL);
    }

    #[test]
    fn theta3_at_two_i_matches_real_sum() {
        // Oracle: Σ_n e^{-2πn²} summed in real arithmetic.
        let oracle: f64 = (-40i32..=40).map(|n| (-2.0 * PI * (n * n) as f64).exp()).sum();
        assert!((oracle - 1.003_734_885_5).abs() < 1e-10);
        let v = theta_series(ThetaKind::Theta3, &pt(c(0.0, 0.0), c(0.0, 2.0)), 1e-10).unwrap();
        assert!((v - oracle).norm() < 1e-10);
    }

    #[test]
    fn theta3_period_one_in_z() {
        let a = theta_series(ThetaKind::Theta3, &pt(c(1.0, 0.0), c(0.0, 1.0)), TOL).unwrap();
        let b = theta_series(ThetaKind::Theta3, &pt(c(0.0, 0.0), c(0.0, 1.0)), TOL).unwrap();
        assert!((a - b).norm() < 2.0 * TOL);
    }

    #[test]
    fn bound_at_theta3_origin() {
        let p = pt(c(0.0, 0.0), c(0.0, 1.0));
        let bound = truncation_bound(ThetaKind::Theta3, &p, 6);
        assert!(bound <= 1e-15);
        assert!(bound >= (-49.0 * PI).exp());
        // Directly summed tail.
        let tail: f64 = (7..60).map(|k| 2.0 * (-PI * (k * k) as f64).exp()).sum();
        assert!(tail <= bound);
        for n in 1..40 {
            assert!(truncation_bound(ThetaKind::Theta3, &p, n + 1) <= truncation_bound(ThetaKind::Theta3, &p, n));
        }
    }

    #[test]
    fn bound_controls_theta1_tail() {
        let p = pt(c(0.0, 0.3), c(0.0, 0.5));
        let n = required_index(ThetaKind::Theta1, &p, 1e-10, TERM_CAP).unwrap();
        // Oracle: the next 3N omitted terms summed by magnitude.
        let tail: f64 = (n + 1..=4 * n + 4)
            .flat_map(|j| [j as f64 + 0.5, -(j as f64) - 0.5])
            .map(|k| nome_term(k, p.z, p.tau).norm())
            .sum();
        assert!(tail < 1e-10, "tail {tail} at N = {n}");
    }

    #[test]
    fn sine_series_examples() {
        let s = theta1_sine_series(&pt(c(0.0, 0.0), c(0.0, 1.0)), TOL).unwrap();
        assert!(s.norm() < 1e-15);
        let s = theta1_sine_series(&pt(c(0.5, 0.0), c(0.0, 1.0)), TOL).unwrap();
        let t2 = theta_series(ThetaKind::Theta2, &pt(c(0.0, 0.0), c(0.0, 1.0)), TOL).unwrap();
        assert!((s - t2).norm() < 2.0 * TOL);
        let p = pt(c(0.25, 0.1), c(0.3, 1.2));
        let a = theta1_sine_series(&p, 1e-10).unwrap();
        let b = theta_series(ThetaKind::Theta1, &p, 1e-10).unwrap();
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn half_period_examples() {
        let p = pt(c(0.1, 0.0), c(0.0, 1.0));
        let t2 = theta_series(ThetaKind::Theta2, &p, TOL).unwrap();
        assert!((half_period_shift(ThetaKind::Theta2, &p, TOL).unwrap() - t2).norm() < 2.0 * TOL);

        let p = pt(c(0.2, 0.1), c(0.5, 1.0));
        let t4 = theta_series(ThetaKind::Theta4, &p, TOL).unwrap();
        assert!((half_period_shift(ThetaKind::Theta4, &p, TOL).unwrap() - t4).norm() < 2.0 * TOL);

        let p = pt(c(-0.5, 0.0), c(0.0, 1.0));
        let zero = theta_series(ThetaKind::Theta1, &pt(p.z + 0.5, p.tau), TOL).unwrap();
        assert!(zero.norm() < TOL);
    }

    #[test]
    fn half_period_network_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = random_point(&mut rng);
            let t = |k| theta_series(k, &p, TOL).unwrap();
            let shift = |k| half_period_shift(k, &p, TOL).unwrap();
            assert!((shift(ThetaKind::Theta1) + t(ThetaKind::Theta1)).norm() < 1e-11);
            for kind in [ThetaKind::Theta2, ThetaKind::Theta3, ThetaKind::Theta4] {
                assert!((shift(kind) - t(kind)).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let p = random_point(&mut rng);
            let m = pt(-p.z, p.tau);
            let a = theta_series(ThetaKind::Theta1, &p, TOL).unwrap();
            let b = theta_series(ThetaKind::Theta1, &m, TOL).unwrap();
            assert!((a + b).norm() < 2.0 * TOL);
            for kind in [ThetaKind::Theta2, ThetaKind::Theta3, ThetaKind::Theta4] {
                let a = theta_series(kind, &p, TOL).unwrap();
                let b = theta_series(kind, &m, TOL).unwrap();
                assert!((a - b).norm() < 2.0 * TOL);
            }
        }
    }

    #[test]
    fn theta3_period_two_in_tau() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let p = random_point(&mut rng);
            let base = theta_series(ThetaKind::Theta3, &p, TOL).unwrap();
            for m in -3..=3 {
                let shifted = pt(p.z, p.tau + 2.0 * m as f64);
                let v = theta_series(ThetaKind::Theta3, &shifted, TOL).unwrap();
                assert!((v - base).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn z_periodicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let s = pt(p.z + 1.0, p.tau);
            for kind in ThetaKind::ALL {
                let a = theta_series(kind, &p, TOL).unwrap();
                let b = theta_series(kind, &s, TOL).unwrap();
                let expect = if kind.half_integer_index() { -a } else { a };
                assert!((b - expect).norm() < 1e-11, "{kind}");
            }
        }
    }

    #[test]
    fn sine_series_agrees_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let a = theta1_sine_series(&p, 1e-10).unwrap();
            let b = theta_series(ThetaKind::Theta1, &p, 1e-10).unwrap();
            assert!((a - b).norm() < 2e-10);
        }
    }

    #[test]
    fn truncation_soundness() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let p = pt(
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                c(rng.random_range(-1.0..1.0), rng.random_range(0.05..2.0)),
            );
            for kind in ThetaKind::ALL {
                let n = rng.random_range(0..30usize);
                let bound = truncation_bound(kind, &p, n);
                let diff = (partial_sum(kind, &p, n + 20) - partial_sum(kind, &p, n)).norm();
                assert!(diff < bound || bound.is_infinite() || diff < 1e-13, "{kind} N={n}: {diff} vs {bound}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            LatticePoint::new(c(0.0, 0.0), c(1.0, 0.0)),
            Err(Error::NotUpperHalfPlane { .. })
        ));
        assert!(LatticePoint::new(c(0.0, 0.0), c(1.0, -1.0)).is_err());
        let p = pt(c(0.0, 0.0), c(0.0, 1e-13));
        assert!(matches!(
            theta_series(ThetaKind::Theta3, &p, 1e-12),
            Err(Error::PrecisionUnreachable { .. })
        ));
        let q = pt(c(0.0, 0.0), c(0.0, 1.0));
        assert!(theta_series(ThetaKind::Theta3, &q, 0.0).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("theta3".parse::<ThetaKind>().unwrap(), ThetaKind::Theta3);
        assert_eq!("1".parse::<ThetaKind>().unwrap(), ThetaKind::Theta1);
        assert!("5".parse::<ThetaKind>().is_err());
        assert_eq!(serde_json::to_string(&ThetaKind::Theta2).unwrap(), "\"theta2\"");
    }
}
