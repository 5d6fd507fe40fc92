//! Asymptotic variance and bias constants of the kernel estimators, the
//! asymptotic mean squared error and its minimiser in `k`.

use crate::error::{Error, Result};
use crate::kernels::{eta_integrals, phi_indicator, phi_optimal, Kernel};
use crate::models::{CensoringScheme, CompositeTail, HallConstants};
use crate::quadrature::integrate_unit_power_weight;

/// Everything the asymptotic formulas need about a censoring scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticContext {
    pub gamma1: f64,
    pub p: f64,
    pub hall_f: HallConstants,
    pub composite: CompositeTail,
    /// `1{β₁ ≤ β₂}`; always true without censoring.
    pub bias_gate: bool,
    /// `α = β₁ γ`.
    pub alpha: f64,
    /// `𝒟 = 1{β₁ ≤ β₂} D₁ C^{-α} / p`.
    pub script_d: f64,
}

impl AsymptoticContext {
    pub fn from_scheme(scheme: &CensoringScheme) -> Result<Self> {
        let hall_f = scheme.f.hall_constants();
        let beta2 = scheme
            .g
            .map(|g| g.hall_constants().beta)
            .unwrap_or(f64::INFINITY);
        Self::new(hall_f, scheme.composite_tail(), hall_f.beta <= beta2)
    }

    /// Builds a context from its parts; `γ₁ = 0` is accepted and makes every
    /// constant vanish.
    pub fn new(hall_f: HallConstants, composite: CompositeTail, bias_gate: bool) -> Result<Self> {
        let gamma1 = hall_f.gamma;
        if !(gamma1 >= 0.0 && gamma1.is_finite()) {
            return Err(Error::domain(format!("gamma1 must be non-negative, got {gamma1}")));
        }
        let p = composite.p;
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::domain(format!("p must lie in (0, 1], got {p}")));
        }
        let alpha = hall_f.beta * composite.gamma;
        let script_d = if bias_gate && hall_f.has_second_order() {
            hall_f.d * composite.c.powf(-alpha) / p
        } else {
            0.0
        };
        Ok(Self {
            gamma1,
            p,
            hall_f,
            composite,
            bias_gate,
            alpha,
            script_d,
        })
    }

    fn has_bias(&self) -> bool {
        self.bias_gate && self.hall_f.has_second_order() && self.gamma1 > 0.0
    }
}

/// `σ_K² = γ₁² ∫₀¹ s^{1-1/p} K²(s) ds`; infinite for `p ≤ 1/2`.
pub fn sigma2(kernel: Kernel, ctx: &AsymptoticContext) -> Result<f64> {
    let integral = kernel.weighted_square_integral(ctx.p)?;
    Ok(ctx.gamma1 * ctx.gamma1 * integral)
}

/// `m_K = -1{β₁ ≤ β₂} β₁ D₁ C^{-γβ₁} γ₁² ∫₀¹ s^{β₁γ₁} K(s) ds`.
pub fn mean_bias_constant(kernel: Kernel, ctx: &AsymptoticContext) -> Result<f64> {
    if !ctx.has_bias() {
        return Ok(0.0);
    }
    let h = &ctx.hall_f;
    let moment = kernel.power_moment(h.beta * ctx.gamma1)?;
    Ok(-h.beta * h.d * ctx.composite.c.powf(-ctx.alpha) * ctx.gamma1 * ctx.gamma1 * moment)
}

/// The mean constant stated for Worms's estimator,
/// `m = -1{β₁ ≤ β₂} γ² β₁ D₁ C^{-γβ₁} p⁻¹ (1 + β₁γ/p)⁻¹`.
pub fn worms_bias_constant(ctx: &AsymptoticContext) -> f64 {
    if !ctx.has_bias() {
        return 0.0;
    }
    let h = &ctx.hall_f;
    let g = ctx.composite.gamma;
    -g * g * h.beta * h.d * ctx.composite.c.powf(-ctx.alpha) / ctx.p / (1.0 + h.beta * g / ctx.p)
}

/// `σ_K*² = p γ₁² ∫₀¹ t^{1-1/p} ((1 + η₁ρ) - ρ t^{-τ₁})² K²(t) dt` at
/// `τ₁ = -β₁γ₁`.
pub fn sigma2_star(kernel: Kernel, ctx: &AsymptoticContext) -> Result<f64> {
    let p = ctx.p;
    if !(p > 0.5 && p <= 1.0) {
        return Err(Error::Validity(format!(
            "the variance integral needs p in (1/2, 1], got {p}"
        )));
    }
    let tau1 = ctx.hall_f.tau;
    if !tau1.is_finite() {
        return Err(Error::Singular(
            "no second-order parameter, rho is undefined".into(),
        ));
    }
    let eta = eta_integrals(kernel, tau1)?;
    let rho = eta.rho()?;
    let a = 1.0 + eta.eta1 * rho;
    let integral = integrate_unit_power_weight(1.0 - 1.0 / p, |t| {
        let w = a - rho * t.powf(-tau1);
        let k = kernel.eval(t);
        w * w * k * k
    })?;
    Ok(p * ctx.gamma1 * ctx.gamma1 * integral)
}

/// Asymptotic MSE `ℳ(k) = σ_K²/k + (k/n)^{2α} m_K²`.
pub fn amse(kernel: Kernel, ctx: &AsymptoticContext, k: usize, n: usize) -> Result<f64> {
    AmseTerms::new(kernel, ctx)?.eval(k, n)
}

/// `γ₁⁻²ℳ(k) = A/k + (k/n)^{2α} B`, evaluated many times for one kernel.
#[derive(Debug, Clone, Copy)]
struct AmseTerms {
    scale: f64,
    variance: f64,
    bias_sq: f64,
    two_alpha: f64,
}

impl AmseTerms {
    fn new(kernel: Kernel, ctx: &AsymptoticContext) -> Result<Self> {
        let variance = kernel.weighted_square_integral(ctx.p)?;
        let scale = ctx.gamma1 * ctx.gamma1;
        let (bias_sq, two_alpha) = if ctx.has_bias() {
            let m = mean_bias_constant(kernel, ctx)? / ctx.gamma1;
            (m * m, 2.0 * ctx.alpha)
        } else {
            (0.0, 0.0)
        };
        Ok(Self {
            scale,
            variance,
            bias_sq,
            two_alpha,
        })
    }

    fn eval(&self, k: usize, n: usize) -> Result<f64> {
        if k < 1 || k >= n {
            return Err(Error::InvalidK {
                k,
                n,
                min: 1,
                max: n.saturating_sub(1),
            });
        }
        let frac = k as f64 / n as f64;
        let bias = if self.bias_sq == 0.0 {
            0.0
        } else {
            frac.powf(self.two_alpha) * self.bias_sq
        };
        Ok(self.scale * (self.variance / k as f64 + bias))
    }
}

/// Exhaustive minimiser of ℳ over `k ∈ [2, n-1]`; ties go to the smallest k.
pub fn amse_argmin(kernel: Kernel, ctx: &AsymptoticContext, n: usize) -> Result<usize> {
    if n < 3 {
        return Err(Error::InvalidK { k: 2, n, min: 2, max: n.saturating_sub(1) });
    }
    let terms = AmseTerms::new(kernel, ctx)?;
    let mut best = (2, terms.eval(2, n)?);
    for k in 3..n {
        let v = terms.eval(k, n)?;
        if v < best.1 {
            best = (k, v);
        }
    }
    Ok(best.0)
}

/// Minimiser of ℳ in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalK {
    /// Integer part of `continuous`, clamped to `[2, n-1]`.
    pub k: usize,
    /// `n^{2α/(2α+1)} (2α³𝒟²)^{-1/(2α+1)} Φ(K)`.
    pub continuous: f64,
    pub clamped: bool,
    /// The same expression with `𝒟³` in place of `𝒟²`; `None` when
    /// `2α³𝒟³ ≤ 0`, where it has no real value.
    pub cubed_constant: Option<f64>,
}

fn optimal_from_phi(ctx: &AsymptoticContext, n: usize, phi: f64) -> Result<OptimalK> {
    if n < 3 {
        return Err(Error::InvalidK { k: 2, n, min: 2, max: n.saturating_sub(1) });
    }
    let d = ctx.script_d;
    if d == 0.0 || !d.is_finite() || !(ctx.alpha > 0.0 && ctx.alpha.is_finite()) {
        return Err(Error::NoOptimum(
            "the bias term vanishes, so the MSE decreases in k".into(),
        ));
    }
    let a = ctx.alpha;
    let e = 2.0 * a + 1.0;
    let lead = (n as f64).powf(2.0 * a / e);
    let continuous = lead * (2.0 * a.powi(3) * d * d).powf(-1.0 / e) * phi;
    let cubed = 2.0 * a.powi(3) * d.powi(3);
    let cubed_constant = (cubed > 0.0).then(|| lead * cubed.powf(-1.0 / e) * phi);
    let raw = continuous.floor();
    let hi = (n - 1) as f64;
    let (k, clamped) = if raw < 2.0 {
        (2, true)
    } else if raw > hi {
        (n - 1, true)
    } else {
        (raw as usize, false)
    };
    Ok(OptimalK {
        k,
        continuous,
        clamped,
        cubed_constant,
    })
}

/// Optimal number of upper order statistics for the kernel estimator.
pub fn optimal_k_kernel(kernel: Kernel, ctx: &AsymptoticContext, n: usize) -> Result<OptimalK> {
    if ctx.script_d == 0.0 {
        return optimal_from_phi(ctx, n, f64::NAN);
    }
    let phi = phi_optimal(kernel, ctx.p, ctx.alpha)?;
    optimal_from_phi(ctx, n, phi)
}

/// Optimal number of upper order statistics for Worms's estimator, using the
/// closed form of `Φ(K₁)`.
pub fn optimal_k_worms(ctx: &AsymptoticContext, n: usize) -> Result<OptimalK> {
    if !(ctx.p > 0.5 && ctx.p <= 1.0) {
        return Err(Error::Validity(format!(
            "the variance integral needs p in (1/2, 1], got {}",
            ctx.p
        )));
    }
    optimal_from_phi(ctx, n, phi_indicator(ctx.p, ctx.alpha))
}

/// `k*_K / k*_W = Φ(K)/Φ(K₁)`.
pub fn optimal_k_ratio(kernel: Kernel, ctx: &AsymptoticContext) -> Result<f64> {
    if !(ctx.alpha > 0.0 && ctx.alpha.is_finite()) {
        return Err(Error::NoOptimum(
            "no second-order term, the ratio is undefined".into(),
        ));
    }
    let num = phi_optimal(kernel, ctx.p, ctx.alpha)?;
    let den = phi_optimal(Kernel::Indicator, ctx.p, ctx.alpha)?;
    Ok(num / den)
}
