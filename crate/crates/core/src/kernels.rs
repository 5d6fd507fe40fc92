//! Kernel families and the weighted kernel integrals that drive the
//! asymptotic bias and variance of the kernel tail-index estimators.
//!
//! Every integral is evaluated by adaptive quadrature, including the ones
//! that have a closed form for the indicator kernel.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_unit, integrate_unit_power_weight};

/// Non-increasing kernels supported on `[0, 1)` with unit mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// `1{[0,1)}`
    Indicator,
    /// `15/8 (1-s²)²`
    Biweight,
    /// `35/16 (1-s²)³`
    Triweight,
    /// `315/128 (1-s²)⁴`
    Quadweight,
}

impl Kernel {
    pub const ALL: [Kernel; 4] = [
        Kernel::Indicator,
        Kernel::Biweight,
        Kernel::Triweight,
        Kernel::Quadweight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Indicator => "indicator",
            Kernel::Biweight => "biweight",
            Kernel::Triweight => "triweight",
            Kernel::Quadweight => "quadweight",
        }
    }

    // (normalizing constant, power of (1 - s²))
    fn polynomial(self) -> Option<(f64, i32)> {
        match self {
            Kernel::Indicator => None,
            Kernel::Biweight => Some((15.0 / 8.0, 2)),
            Kernel::Triweight => Some((35.0 / 16.0, 3)),
            Kernel::Quadweight => Some((315.0 / 128.0, 4)),
        }
    }

    pub fn eval(self, s: f64) -> f64 {
        if !(0.0..1.0).contains(&s) {
            return 0.0;
        }
        match self.polynomial() {
            None => 1.0,
            Some((c, m)) => c * (1.0 - s * s).powi(m),
        }
    }

    /// First derivative on `(0, 1)`; the indicator kernel reports 0.
    pub fn eval_d1(self, s: f64) -> f64 {
        if !(0.0..1.0).contains(&s) {
            return 0.0;
        }
        match self.polynomial() {
            None => 0.0,
            Some((c, m)) => -2.0 * s * c * f64::from(m) * (1.0 - s * s).powi(m - 1),
        }
    }

    /// Second derivative on `(0, 1)`; the indicator kernel reports 0.
    pub fn eval_d2(self, s: f64) -> f64 {
        if !(0.0..1.0).contains(&s) {
            return 0.0;
        }
        match self.polynomial() {
            None => 0.0,
            Some((c, m)) => {
                let m = f64::from(m);
                let u = 1.0 - s * s;
                // d/ds[-2 m s u^{m-1}] = -2m u^{m-1} + 4 m (m-1) s² u^{m-2}
                c * (-2.0 * m * u.powf(m - 1.0) + 4.0 * m * (m - 1.0) * s * s * u.powf(m - 2.0))
            }
        }
    }

    /// `g_K(s) = s K(s)`.
    pub fn eval_gk(self, s: f64) -> f64 {
        s * self.eval(s)
    }

    /// `g_K'(s) = K(s) + s K'(s)`.
    pub fn eval_gk_d1(self, s: f64) -> f64 {
        self.eval(s) + s * self.eval_d1(s)
    }

    /// Weight given to a Kaplan-Meier ratio `r ∈ (0, 1]` by the estimators.
    ///
    /// Ratios equal to 1 take the left limit `K(1⁻)`, so the indicator
    /// kernel weights every ratio in `(0, 1]` by 1 (which is what makes the
    /// kernel estimator reduce to Worms's). The other kernels vanish at 1
    /// from both sides.
    pub fn weight_at_ratio(self, r: f64) -> f64 {
        if r >= 1.0 {
            match self {
                Kernel::Indicator => 1.0,
                _ => 0.0,
            }
        } else {
            self.eval(r)
        }
    }

    /// `∫₀¹ s^t K(s) ds` for `t > -1`.
    pub fn power_moment(self, t: f64) -> Result<f64> {
        if t <= -1.0 {
            return Err(Error::domain(format!("power moment diverges for t = {t}")));
        }
        if t < 0.0 {
            integrate_unit_power_weight(t, |s| self.eval(s))
        } else {
            integrate_unit(|s| s.powf(t) * self.eval(s))
        }
    }

    /// `∫₀¹ s^{1 - 1/p} K²(s) ds` for `p > 1/2`.
    pub fn weighted_square_integral(self, p: f64) -> Result<f64> {
        check_p(p)?;
        integrate_unit_power_weight(1.0 - 1.0 / p, |s| {
            let k = self.eval(s);
            k * k
        })
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "indicator" | "k1" => Ok(Kernel::Indicator),
            "biweight" | "k2" => Ok(Kernel::Biweight),
            "triweight" | "k3" => Ok(Kernel::Triweight),
            "quadweight" | "k4" => Ok(Kernel::Quadweight),
            other => Err(Error::domain(format!("unknown kernel {other:?}"))),
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.5 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::Validity(format!(
            "the variance integral needs p in (1/2, 1], got {p}"
        )))
    }
}

/// The kernels of the BAB family, `𝒦(s, p)` with `p ∫₀¹ 𝒦(s, p) ds = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BabKernel {
    /// `(1/p) log(1/s)`
    Zero,
    /// `s^{p-1}`
    One,
    /// `(s^{p-1} - 1)/(1 - p)`, with the limit `log(1/s)` at `p = 1`
    Two,
}

impl BabKernel {
    pub const ALL: [BabKernel; 3] = [BabKernel::Zero, BabKernel::One, BabKernel::Two];

    pub fn name(self) -> &'static str {
        match self {
            BabKernel::Zero => "bab0",
            BabKernel::One => "bab1",
            BabKernel::Two => "bab2",
        }
    }

    /// Value at `s ∈ (0, 1]`, `p ∈ (0, 1]`.
    pub fn eval(self, s: f64, p: f64) -> f64 {
        let log_inv = -s.ln();
        match self {
            BabKernel::Zero => log_inv / p,
            BabKernel::One => (-(1.0 - p) * s.ln()).exp(),
            BabKernel::Two => {
                let e = 1.0 - p;
                if e == 0.0 {
                    log_inv
                } else {
                    // s^{-e} - 1 = expm1(e log(1/s))
                    (e * log_inv).exp_m1() / e
                }
            }
        }
    }

    /// Whether `eval(·, p)` is using a limit value rather than the formula.
    pub fn is_limit_case(self, p: f64) -> bool {
        self == BabKernel::Two && p == 1.0
    }
}

impl fmt::Display for BabKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BabKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bab0" => Ok(BabKernel::Zero),
            "bab1" => Ok(BabKernel::One),
            "bab2" => Ok(BabKernel::Two),
            other => Err(Error::domain(format!("unknown BAB kernel {other:?}"))),
        }
    }
}

/// The three second-order integrals at a given `τ₁ ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaIntegrals {
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: f64,
    /// Set when `τ₁ = 0`, which lies outside the second-order model.
    pub degenerate_tau: bool,
}

impl EtaIntegrals {
    /// `(η₃/η₂ - η₁)⁻¹`.
    pub fn rho(&self) -> Result<f64> {
        let denom = self.eta3 / self.eta2 - self.eta1;
        if denom.abs() < 1e-12 || !denom.is_finite() {
            return Err(Error::Singular(format!(
                "eta3/eta2 - eta1 = {denom:e} is too close to zero"
            )));
        }
        Ok(1.0 / denom)
    }
}

/// `η₁ = ∫ s^{-τ}(1 - τ log s)K`, `η₂ = ∫ s^{-τ}K`, `η₃ = ∫ (s^{-τ} - s^{-2τ})K`.
pub fn eta_integrals(kernel: Kernel, tau1: f64) -> Result<EtaIntegrals> {
    if tau1.is_nan() || tau1 > 0.0 {
        return Err(Error::domain(format!(
            "second-order parameter must be negative, got {tau1}"
        )));
    }
    if tau1 == f64::NEG_INFINITY {
        return Err(Error::Singular("tau1 = -inf: no second-order term".into()));
    }
    let a = -tau1;
    let eta1 = integrate_unit(|s| {
        let k = kernel.eval(s);
        if k == 0.0 {
            0.0
        } else {
            s.powf(a) * (1.0 + a * s.ln()) * k
        }
    })?;
    let eta2 = kernel.power_moment(a)?;
    let eta3 = integrate_unit(|s| (s.powf(a) - s.powf(2.0 * a)) * kernel.eval(s))?;
    Ok(EtaIntegrals {
        eta1,
        eta2,
        eta3,
        degenerate_tau: tau1 == 0.0,
    })
}

pub fn rho(kernel: Kernel, tau1: f64) -> Result<f64> {
    eta_integrals(kernel, tau1)?.rho()
}

/// Ratio of the kernel estimator's asymptotic bias to Worms's,
/// `g(t) = (1+t) ∫₀¹ s^t K(s) ds` with `t = β₁γ₁`.
pub fn bias_ratio_g(kernel: Kernel, t: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::domain(format!("g(t) needs t > 0, got {t}")));
    }
    Ok((1.0 + t) * kernel.power_moment(t)?)
}

/// Ratio of the kernel estimator's asymptotic variance to Worms's,
/// `h(p) = ((2p-1)/p) ∫₀¹ s^{1-1/p} K²(s) ds`.
pub fn variance_ratio_h(kernel: Kernel, p: f64) -> Result<f64> {
    let integral = kernel.weighted_square_integral(p)?;
    Ok((2.0 * p - 1.0) / p * integral)
}

/// `Φ(K) = {∫ s^{1-1/p}K²}^{1/(2α+1)} {∫ s^{α/p}K}^{-2/(2α+1)}`.
pub fn phi_optimal(kernel: Kernel, p: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    let var = kernel.weighted_square_integral(p)?;
    let bias = kernel.power_moment(alpha / p)?;
    let e = 2.0 * alpha + 1.0;
    Ok(var.powf(1.0 / e) * bias.powf(-2.0 / e))
}

/// Closed form of [`phi_optimal`] for the indicator kernel.
pub fn phi_indicator(p: f64, alpha: f64) -> f64 {
    let e = 2.0 * alpha + 1.0;
    (p / (2.0 * p - 1.0)).powf(1.0 / e) * (alpha / p + 1.0).powf(2.0 / e)
}
