//! Tail-index estimators for censored samples, each a pure function of the
//! sample and the number `k` of upper order statistics.
//!
//! Order statistics are 1-based in the doc comments (`Z_{i:n}`) and 0-based
//! in code, so `Z_{n-j:n}` is `z[n - j - 1]`.
//!
//! An estimate that cannot be formed at a given `k` (zero Kaplan-Meier
//! denominator, fully censored tail, singular bias correction) is returned
//! as `Err(Undefined)` inside an `Ok`, so a sweep over `k` never aborts.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernels::{eta_integrals, BabKernel, EtaIntegrals, Kernel};
use crate::models::CensoredSample;
use crate::survival::{km_survival_f, OrderedCensoredSample};

/// Reason an estimate is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Undefined {
    /// `F̄ₙᴷᴹ(Z_{n-k:n}) = 0`.
    ZeroKmDenominator,
    /// No uncensored observation among the top `k` (`p̂ = 0`).
    FullyCensoredTail,
    /// The bias-correction factor `ρ` is singular at the estimated `τ₁`.
    SingularRho,
    /// The base estimate is not positive, so `τ̂₁` has the wrong sign.
    NonPositiveEstimate,
    /// A kernel integral failed to converge.
    QuadratureFailure,
    /// Read back from a file that does not record the reason.
    Unrecorded,
}

impl Undefined {
    pub fn code(self) -> &'static str {
        match self {
            Undefined::ZeroKmDenominator => "zero-km-denominator",
            Undefined::FullyCensoredTail => "fully-censored-tail",
            Undefined::SingularRho => "singular-rho",
            Undefined::NonPositiveEstimate => "non-positive-estimate",
            Undefined::QuadratureFailure => "quadrature-failure",
            Undefined::Unrecorded => "unrecorded",
        }
    }
}

impl fmt::Display for Undefined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

pub type Estimate = std::result::Result<f64, Undefined>;

fn check_k(n: usize, k: usize) -> Result<()> {
    if k < 2 || k + 1 > n {
        return Err(Error::InvalidK {
            k,
            n,
            min: 2,
            max: n.saturating_sub(1),
        });
    }
    Ok(())
}

fn logs_of(z_sorted: &[f64]) -> Result<Vec<f64>> {
    z_sorted
        .iter()
        .map(|&z| {
            if z > 0.0 && z.is_finite() {
                Ok(z.ln())
            } else {
                Err(Error::domain(format!("order statistics must be positive, got {z}")))
            }
        })
        .collect()
}

fn hill_from_logs(log_z: &[f64], k: usize) -> f64 {
    let n = log_z.len();
    let base = log_z[n - k - 1];
    log_z[n - k..].iter().map(|&l| l - base).sum::<f64>() / k as f64
}

fn cdm_from_logs(log_z: &[f64], k: usize, kernel: Kernel) -> f64 {
    let n = log_z.len();
    let k1 = (k + 1) as f64;
    (1..=k)
        .map(|i| {
            let s = i as f64 / k1;
            s * kernel.eval(s) * (log_z[n - i] - log_z[n - i - 1])
        })
        .sum()
}

/// Hill's estimator `k⁻¹ Σ_{i=1}^k log(Z_{n-i+1:n}/Z_{n-k:n})` on ascending
/// positive order statistics.
pub fn hill(z_sorted: &[f64], k: usize) -> Result<f64> {
    check_k(z_sorted.len(), k)?;
    Ok(hill_from_logs(&logs_of(z_sorted)?, k))
}

/// Hill's estimator written as weighted log-spacings,
/// `Σ_{i=1}^k (i/k) log(Z_{n-i+1:n}/Z_{n-i:n})`.
pub fn hill_weighted_spacings(z_sorted: &[f64], k: usize) -> Result<f64> {
    check_k(z_sorted.len(), k)?;
    let log_z = logs_of(z_sorted)?;
    let n = log_z.len();
    Ok((1..=k)
        .map(|i| i as f64 / k as f64 * (log_z[n - i] - log_z[n - i - 1]))
        .sum())
}

/// Kernel version of Hill's estimator for complete data,
/// `Σ_{i=1}^k (i/(k+1)) K(i/(k+1)) log(Z_{n-i+1:n}/Z_{n-i:n})`.
pub fn cdm_kernel(z_sorted: &[f64], k: usize, kernel: Kernel) -> Result<f64> {
    check_k(z_sorted.len(), k)?;
    Ok(cdm_from_logs(&logs_of(z_sorted)?, k, kernel))
}

/// Proportion of uncensored observations among the top `k`.
pub fn phat(sample: &OrderedCensoredSample, k: usize) -> Result<f64> {
    let n = sample.len();
    if k < 1 || k > n {
        return Err(Error::InvalidK { k, n, min: 1, max: n });
    }
    let count = sample.delta()[n - k..].iter().filter(|&&d| d).count();
    Ok(count as f64 / k as f64)
}

/// Which Kaplan-Meier ratio weights the `j`-th log-spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `F̄(Z_{n-j+1:n})/F̄(Z_{n-k:n})`, `j = 2..k`.
    Shifted,
    /// `F̄(Z_{n-j:n})/F̄(Z_{n-k:n})`, `j = 1..k`.
    Unshifted,
}

/// An ordered sample with its Kaplan-Meier curve evaluated at every order
/// statistic, shared by all estimators and all `k`.
#[derive(Debug, Clone)]
pub struct KmSample {
    sample: OrderedCensoredSample,
    log_z: Vec<f64>,
    fbar: Vec<f64>,
}

impl KmSample {
    pub fn new(sample: OrderedCensoredSample) -> Result<Self> {
        let fbar = km_survival_f(&sample)?.at_order_statistics();
        let log_z = logs_of(sample.z())?;
        Ok(Self { sample, log_z, fbar })
    }

    pub fn from_censored(sample: &CensoredSample) -> Result<Self> {
        Self::new(OrderedCensoredSample::new(sample))
    }

    pub fn sample(&self) -> &OrderedCensoredSample {
        &self.sample
    }

    pub fn n(&self) -> usize {
        self.log_z.len()
    }

    /// `F̄ₙᴷᴹ(Z_{i+1:n})` for 0-based `i`.
    pub fn km_at(&self, i: usize) -> f64 {
        self.fbar[i]
    }

    /// `log(Z_{n-j+1:n}/Z_{n-j:n})`.
    fn spacing(&self, j: usize) -> f64 {
        let n = self.n();
        self.log_z[n - j] - self.log_z[n - j - 1]
    }

    fn denominator(&self, k: usize) -> std::result::Result<f64, Undefined> {
        let d = self.fbar[self.n() - k - 1];
        if d > 0.0 {
            Ok(d)
        } else {
            Err(Undefined::ZeroKmDenominator)
        }
    }

    /// Ratio weighting spacing `j`.
    fn ratio(&self, j: usize, denom: f64, variant: Variant) -> f64 {
        let n = self.n();
        match variant {
            Variant::Shifted => self.fbar[n - j] / denom,
            Variant::Unshifted => self.fbar[n - j - 1] / denom,
        }
    }

    fn first_j(variant: Variant) -> usize {
        match variant {
            Variant::Shifted => 2,
            Variant::Unshifted => 1,
        }
    }

    pub fn hill(&self, k: usize) -> Result<f64> {
        check_k(self.n(), k)?;
        Ok(hill_from_logs(&self.log_z, k))
    }

    pub fn cdm(&self, k: usize, kernel: Kernel) -> Result<f64> {
        check_k(self.n(), k)?;
        Ok(cdm_from_logs(&self.log_z, k, kernel))
    }

    pub fn phat(&self, k: usize) -> Result<f64> {
        phat(&self.sample, k)
    }

    /// Adapted Hill estimator `hill / p̂`.
    pub fn efg(&self, k: usize) -> Result<Estimate> {
        let h = self.hill(k)?;
        let p = self.phat(k)?;
        if p == 0.0 {
            return Ok(Err(Undefined::FullyCensoredTail));
        }
        Ok(Ok(h / p))
    }

    /// Worms's Kaplan-Meier estimator (shifted ratios, `j = 2..k`).
    pub fn worms(&self, k: usize) -> Result<Estimate> {
        self.km_weighted(k, Variant::Shifted, |r| r)
    }

    /// The original unshifted form of Worms's estimator (`j = 1..k`).
    pub fn worms_tilde(&self, k: usize) -> Result<Estimate> {
        self.km_weighted(k, Variant::Unshifted, |r| r)
    }

    /// The kernel estimator: each log-spacing weighted by `r K(r)` with `r`
    /// the Kaplan-Meier ratio of `variant`.
    pub fn kernel_estimator(&self, k: usize, kernel: Kernel, variant: Variant) -> Result<Estimate> {
        self.km_weighted(k, variant, |r| r * kernel.weight_at_ratio(r))
    }

    fn km_weighted(&self, k: usize, variant: Variant, weight: impl Fn(f64) -> f64) -> Result<Estimate> {
        check_k(self.n(), k)?;
        let denom = match self.denominator(k) {
            Ok(d) => d,
            Err(u) => return Ok(Err(u)),
        };
        let sum = (Self::first_j(variant)..=k)
            .map(|j| weight(self.ratio(j, denom, variant)) * self.spacing(j))
            .sum();
        Ok(Ok(sum))
    }

    /// The unshifted kernel estimator in its telescoped form
    /// `Σ_{j=1}^k {g_K(r_j) - g_K(r_{j-1})} log(Z_{n-j+1:n}/Z_{n-k:n})`,
    /// `r_j = F̄(Z_{n-j:n})/F̄(Z_{n-k:n})`, `g_K(s) = s K(s)`.
    pub fn kernel_estimator_telescoped(&self, k: usize, kernel: Kernel) -> Result<Estimate> {
        check_k(self.n(), k)?;
        let denom = match self.denominator(k) {
            Ok(d) => d,
            Err(u) => return Ok(Err(u)),
        };
        let n = self.n();
        let g = |r: f64| r * kernel.weight_at_ratio(r);
        let base = self.log_z[n - k - 1];
        let mut prev = g(self.fbar[n - 1] / denom);
        let mut sum = 0.0;
        for j in 1..=k {
            let cur = g(self.fbar[n - j - 1] / denom);
            sum += (cur - prev) * (self.log_z[n - j] - base);
            prev = cur;
        }
        Ok(Ok(sum))
    }

    /// Kernel estimator of the BAB family,
    /// `k⁻¹ Σ_{i=1}^k 𝒦(i/(k+1), p̂) log(Z_{n-i+1:n}/Z_{n-k:n}) / log((k+1)/i)`.
    pub fn bab(&self, k: usize, bab: BabKernel) -> Result<Estimate> {
        check_k(self.n(), k)?;
        let p = self.phat(k)?;
        if p == 0.0 {
            return Ok(Err(Undefined::FullyCensoredTail));
        }
        let n = self.n();
        let base = self.log_z[n - k - 1];
        let k1 = (k + 1) as f64;
        let sum: f64 = (1..=k)
            .map(|i| {
                let s = i as f64 / k1;
                bab.eval(s, p) / (k1 / i as f64).ln() * (self.log_z[n - i] - base)
            })
            .sum();
        Ok(Ok(sum / k as f64))
    }

    /// `T_k(ω; K) = ω⁻¹ Σ_{j=2}^k r_j K(r_j) {(Z_{n-j:n}/Z_{n-k:n})^{-ω} - (Z_{n-j+1:n}/Z_{n-k:n})^{-ω}}`.
    pub fn t_statistic(&self, k: usize, omega: f64, kernel: Kernel) -> Result<Estimate> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::domain(format!("omega must be positive, got {omega}")));
        }
        check_k(self.n(), k)?;
        let denom = match self.denominator(k) {
            Ok(d) => d,
            Err(u) => return Ok(Err(u)),
        };
        let n = self.n();
        let base = self.log_z[n - k - 1];
        let sum: f64 = (2..=k)
            .map(|j| {
                let r = self.ratio(j, denom, Variant::Shifted);
                let lower = self.log_z[n - j - 1] - base;
                // x^{-ω} - y^{-ω} = x^{-ω} (1 - (y/x)^{-ω}), exact for small ω
                let diff = (-omega * lower).exp() * -(-omega * self.spacing(j)).exp_m1();
                r * kernel.weight_at_ratio(r) * diff
            })
            .sum();
        Ok(Ok(sum / omega))
    }
}

/// Adaptive grid of candidate second-order parameters, `-0.5 - 0.1 i`.
pub fn tau_grid() -> [f64; 26] {
    let mut g = [0.0; 26];
    for (i, v) in g.iter_mut().enumerate() {
        *v = -0.5 - 0.1 * i as f64;
    }
    g
}

/// How the second-order parameter `τ₁` of the bias correction is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tau1Source {
    /// `τ̂₁ = -β₁ γ̂` with `β₁` known.
    KnownBeta1(f64),
    /// Minimise the spread of the corrected path over [`tau_grid`],
    /// evaluating every `k_step`-th `k`.
    AdaptiveGrid { k_step: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasReductionConfig {
    pub kernel: Kernel,
    pub tau1_source: Tau1Source,
}

impl BiasReductionConfig {
    pub fn known_beta1(kernel: Kernel, beta1: f64) -> Result<Self> {
        if !(beta1 > 0.0 && beta1.is_finite()) {
            return Err(Error::domain(format!("beta1 must be positive, got {beta1}")));
        }
        Ok(Self {
            kernel,
            tau1_source: Tau1Source::KnownBeta1(beta1),
        })
    }

    pub fn adaptive(kernel: Kernel) -> Self {
        Self {
            kernel,
            tau1_source: Tau1Source::AdaptiveGrid { k_step: 5 },
        }
    }
}

fn corrected(km: &KmSample, k: usize, kernel: Kernel, base: f64, omega: f64, eta: &EtaIntegrals) -> Result<Estimate> {
    let rho = match eta.rho() {
        Ok(r) => r,
        Err(_) => return Ok(Err(Undefined::SingularRho)),
    };
    let t = match km.t_statistic(k, omega, kernel)? {
        Ok(t) => t,
        Err(u) => return Ok(Err(u)),
    };
    Ok(Ok(base - rho * (t - base * eta.eta2)))
}

/// `γ̂* = γ̂ - ρ̂ {T_k(-τ̂₁/γ̂; K) - γ̂ η̂₂}` with `η̂`, `ρ̂` taken at `τ̂₁ = -β₁γ̂`.
///
/// With `β₁` known the argument of `T_k` is exactly `β₁`.
fn bias_reduced_known_beta(km: &KmSample, k: usize, kernel: Kernel, beta1: f64) -> Result<Estimate> {
    let base = match km.kernel_estimator(k, kernel, Variant::Shifted)? {
        Ok(v) => v,
        Err(u) => return Ok(Err(u)),
    };
    if base.is_nan() || base <= 0.0 {
        return Ok(Err(Undefined::NonPositiveEstimate));
    }
    let eta = match eta_integrals(kernel, -beta1 * base) {
        Ok(e) => e,
        Err(_) => return Ok(Err(Undefined::QuadratureFailure)),
    };
    corrected(km, k, kernel, base, beta1, &eta)
}

/// Bias-reduced estimate at a fixed `τ₁` (the adaptive mode).
pub fn bias_reduced_at_tau(km: &KmSample, k: usize, kernel: Kernel, tau1: f64) -> Result<Estimate> {
    let eta = eta_integrals(kernel, tau1)?;
    bias_reduced_with_eta(km, k, kernel, tau1, &eta)
}

fn bias_reduced_with_eta(km: &KmSample, k: usize, kernel: Kernel, tau1: f64, eta: &EtaIntegrals) -> Result<Estimate> {
    let base = match km.kernel_estimator(k, kernel, Variant::Shifted)? {
        Ok(v) => v,
        Err(u) => return Ok(Err(u)),
    };
    if base.is_nan() || base <= 0.0 {
        return Ok(Err(Undefined::NonPositiveEstimate));
    }
    corrected(km, k, kernel, base, -tau1 / base, eta)
}

/// Picks the `τ` in `grid` whose path has the smallest sum of squared
/// deviations from its own mean. Undefined entries are skipped; ties go to
/// the most negative `τ`.
pub fn select_tau_by_min_variance<F>(grid: &[f64], mut path_at: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<Vec<Estimate>>,
{
    let mut best: Option<(f64, f64)> = None;
    for &tau in grid {
        let path = path_at(tau)?;
        let vals: Vec<f64> = path.iter().filter_map(|e| e.ok()).collect();
        if vals.len() < 2 {
            continue;
        }
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let ss: f64 = vals.iter().map(|v| (v - mean) * (v - mean)).sum();
        let better = match best {
            None => true,
            Some((_, b)) => ss < b || (ss == b && tau < best.unwrap().0),
        };
        if better {
            best = Some((tau, ss));
        }
    }
    best.map(|(t, _)| t)
        .ok_or_else(|| Error::Insufficient("every grid value gave an undefined path".into()))
}

/// Adaptive choice of `τ₁` over [`tau_grid`] by minimum path variance.
pub fn adaptive_tau1(km: &KmSample, kernel: Kernel, k_values: &[usize]) -> Result<f64> {
    if k_values.len() < 10 {
        return Err(Error::Insufficient(format!(
            "adaptive tau1 needs at least 10 values of k, got {}",
            k_values.len()
        )));
    }
    for &k in k_values {
        check_k(km.n(), k)?;
    }
    select_tau_by_min_variance(&tau_grid(), |tau| {
        let eta = eta_integrals(kernel, tau)?;
        k_values
            .iter()
            .map(|&k| bias_reduced_with_eta(km, k, kernel, tau, &eta))
            .collect()
    })
}

/// Default decimated `k` range used by the adaptive mode.
pub fn adaptive_k_values(n: usize, step: usize) -> Vec<usize> {
    (2..n).step_by(step.max(1)).collect()
}

/// A bias-reduction configuration resolved against one sample: in the
/// adaptive mode `τ̂₁` is chosen once and reused for every `k`.
#[derive(Debug, Clone)]
pub struct BiasReducer {
    kernel: Kernel,
    resolved: ResolvedTau,
}

#[derive(Debug, Clone)]
enum ResolvedTau {
    KnownBeta1(f64),
    Fixed { tau1: f64, eta: EtaIntegrals },
}

impl BiasReducer {
    pub fn prepare(km: &KmSample, config: &BiasReductionConfig) -> Result<Self> {
        let resolved = match config.tau1_source {
            Tau1Source::KnownBeta1(b) => ResolvedTau::KnownBeta1(b),
            Tau1Source::AdaptiveGrid { k_step } => {
                let ks = adaptive_k_values(km.n(), k_step);
                let tau1 = adaptive_tau1(km, config.kernel, &ks)?;
                ResolvedTau::Fixed {
                    tau1,
                    eta: eta_integrals(config.kernel, tau1)?,
                }
            }
        };
        Ok(Self {
            kernel: config.kernel,
            resolved,
        })
    }

    /// The `τ₁` picked by the adaptive mode, if any.
    pub fn tau1(&self) -> Option<f64> {
        match self.resolved {
            ResolvedTau::Fixed { tau1, .. } => Some(tau1),
            ResolvedTau::KnownBeta1(_) => None,
        }
    }

    pub fn estimate(&self, km: &KmSample, k: usize) -> Result<Estimate> {
        match &self.resolved {
            ResolvedTau::KnownBeta1(b) => bias_reduced_known_beta(km, k, self.kernel, *b),
            ResolvedTau::Fixed { tau1, eta } => bias_reduced_with_eta(km, k, self.kernel, *tau1, eta),
        }
    }
}

/// The asymptotically bias-reduced kernel estimator at one `k`.
pub fn bias_reduced(km: &KmSample, k: usize, config: &BiasReductionConfig) -> Result<Estimate> {
    BiasReducer::prepare(km, config)?.estimate(km, k)
}

/// Every estimator the library exposes, with its tuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    Hill,
    Cdm(Kernel),
    Efg,
    Worms,
    WormsTilde,
    Kernel { kernel: Kernel, variant: Variant },
    Bab(BabKernel),
    BiasReduced(BiasReductionConfig),
}

/// Identifiers accepted by [`Estimator::from_id`].
pub const ESTIMATOR_IDS: [&str; 9] = [
    "hill",
    "cdm",
    "efg",
    "worms",
    "worms-tilde",
    "kernel",
    "kernel-unshifted",
    "bab",
    "bias-reduced",
];

/// Settings shared by the estimators named in a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorOptions {
    pub kernel: Kernel,
    pub bab_kernel: BabKernel,
    pub variant: Variant,
    pub bias_reduction: Option<Tau1Source>,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            kernel: Kernel::Triweight,
            bab_kernel: BabKernel::Two,
            variant: Variant::Shifted,
            bias_reduction: None,
        }
    }
}

impl Estimator {
    pub fn from_id(id: &str, opts: &EstimatorOptions) -> Result<Self> {
        Ok(match id.trim() {
            "hill" => Estimator::Hill,
            "cdm" => Estimator::Cdm(opts.kernel),
            "efg" => Estimator::Efg,
            "worms" => Estimator::Worms,
            "worms-tilde" => Estimator::WormsTilde,
            "kernel" => Estimator::Kernel {
                kernel: opts.kernel,
                variant: opts.variant,
            },
            "kernel-unshifted" => Estimator::Kernel {
                kernel: opts.kernel,
                variant: Variant::Unshifted,
            },
            "bab" => Estimator::Bab(opts.bab_kernel),
            "bias-reduced" => {
                let src = opts.bias_reduction.ok_or_else(|| {
                    Error::Config("bias-reduced needs either beta1 or adaptive".into())
                })?;
                Estimator::BiasReduced(BiasReductionConfig {
                    kernel: opts.kernel,
                    tau1_source: src,
                })
            }
            other => return Err(Error::Config(format!("unknown estimator {other:?}"))),
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            Estimator::Hill => "hill",
            Estimator::Cdm(_) => "cdm",
            Estimator::Efg => "efg",
            Estimator::Worms => "worms",
            Estimator::WormsTilde => "worms-tilde",
            Estimator::Kernel {
                variant: Variant::Shifted,
                ..
            } => "kernel",
            Estimator::Kernel {
                variant: Variant::Unshifted,
                ..
            } => "kernel-unshifted",
            Estimator::Bab(_) => "bab",
            Estimator::BiasReduced(_) => "bias-reduced",
        }
    }

    /// Kernel column used in output files; `none` for unweighted estimators.
    pub fn kernel_label(&self) -> &'static str {
        match self {
            Estimator::Hill | Estimator::Efg | Estimator::Worms | Estimator::WormsTilde => "none",
            Estimator::Cdm(k) | Estimator::Kernel { kernel: k, .. } => k.name(),
            Estimator::BiasReduced(c) => c.kernel.name(),
            Estimator::Bab(b) => b.name(),
        }
    }

    /// Single estimate at `k`. In the adaptive bias-reduced mode this
    /// re-selects `τ₁` on every call; use [`Estimator::path`] for sweeps.
    pub fn estimate(&self, km: &KmSample, k: usize) -> Result<Estimate> {
        match self {
            Estimator::Hill => km.hill(k).map(Ok),
            Estimator::Cdm(kernel) => km.cdm(k, *kernel).map(Ok),
            Estimator::Efg => km.efg(k),
            Estimator::Worms => km.worms(k),
            Estimator::WormsTilde => km.worms_tilde(k),
            Estimator::Kernel { kernel, variant } => km.kernel_estimator(k, *kernel, *variant),
            Estimator::Bab(b) => km.bab(k, *b),
            Estimator::BiasReduced(c) => bias_reduced(km, k, c),
        }
    }

    pub fn path(&self, km: &KmSample, k_values: &[usize]) -> Result<EstimatorPath> {
        for &k in k_values {
            check_k(km.n(), k)?;
        }
        let estimates = match self {
            Estimator::BiasReduced(c) => {
                let reducer = match BiasReducer::prepare(km, c) {
                    Ok(r) => r,
                    // no usable τ₁ for this sample: the whole path is a hole
                    Err(Error::Insufficient(_)) => {
                        return Ok(EstimatorPath {
                            estimator: self.id().to_string(),
                            kernel: self.kernel_label().to_string(),
                            k_values: k_values.to_vec(),
                            estimates: vec![Err(Undefined::SingularRho); k_values.len()],
                        })
                    }
                    Err(e) => return Err(e),
                };
                k_values
                    .iter()
                    .map(|&k| reducer.estimate(km, k))
                    .collect::<Result<Vec<_>>>()?
            }
            _ => k_values
                .iter()
                .map(|&k| self.estimate(km, k))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(EstimatorPath {
            estimator: self.id().to_string(),
            kernel: self.kernel_label().to_string(),
            k_values: k_values.to_vec(),
            estimates,
        })
    }
}

/// Estimates indexed by `k`, the unit every comparison is made on.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorPath {
    pub estimator: String,
    pub kernel: String,
    pub k_values: Vec<usize>,
    pub estimates: Vec<Estimate>,
}

impl EstimatorPath {
    pub fn new(estimator: impl Into<String>, kernel: impl Into<String>, k_values: Vec<usize>, estimates: Vec<Estimate>) -> Result<Self> {
        if k_values.len() != estimates.len() {
            return Err(Error::domain("k values and estimates differ in length"));
        }
        if k_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("k values must be strictly increasing"));
        }
        Ok(Self {
            estimator: estimator.into(),
            kernel: kernel.into(),
            k_values,
            estimates,
        })
    }

    pub fn len(&self) -> usize {
        self.k_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k_values.is_empty()
    }

    /// `(k, estimate)` for the defined entries.
    pub fn defined(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.k_values
            .iter()
            .zip(&self.estimates)
            .filter_map(|(&k, e)| e.ok().map(|v| (k, v)))
    }

    pub fn defined_count(&self) -> usize {
        self.estimates.iter().filter(|e| e.is_ok()).count()
    }

    pub fn at(&self, k: usize) -> Option<Estimate> {
        self.k_values
            .binary_search(&k)
            .ok()
            .map(|i| self.estimates[i])
    }
}
