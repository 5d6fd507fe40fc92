//! Simulation engine: draw `R` censored samples per scenario, sweep every
//! estimator over a grid of `k` and aggregate bias, MSE and path smoothness.
//!
//! Replication `r` draws from a seed derived from `(master_seed, r)` and all
//! aggregation runs in replication order, so the summary does not depend on
//! how replications were scheduled.

use crate::asymptotics::{sigma2, AsymptoticContext};
use crate::error::{Error, Result};
use crate::estimators::{Estimate, Estimator, EstimatorPath, KmSample};
use crate::kernels::Kernel;
use crate::models::{sample_censored, CensoringScheme};
use crate::parallel::{map_indexed, Execution};
use crate::rng::replication_seed;
use crate::selection::{reiss_thomas_in_range, DEFAULT_K_MIN, DEFAULT_NU};

/// Raw estimates are kept for recomputation up to this many replications.
pub const RAW_RETENTION_LIMIT: usize = 1000;
/// Replications evaluated between two aggregation steps.
const CHUNK: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub scheme: CensoringScheme,
    pub n: usize,
    pub replications: usize,
    pub master_seed: u64,
    pub estimators: Vec<Estimator>,
    pub k_grid: Vec<usize>,
    pub nu: f64,
    /// Candidate range of the per-replication Reiss-Thomas choice.
    pub k_min: usize,
    pub k_max: usize,
}

impl ScenarioConfig {
    /// A config sweeping `k = 2..n-1` with the default selection settings.
    pub fn new(name: impl Into<String>, scheme: CensoringScheme, n: usize, replications: usize, master_seed: u64, estimators: Vec<Estimator>) -> Self {
        Self {
            name: name.into(),
            scheme,
            n,
            replications,
            master_seed,
            estimators,
            k_grid: (2..n.max(3)).collect(),
            nu: DEFAULT_NU,
            k_min: DEFAULT_K_MIN,
            k_max: n.saturating_sub(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.n < 50 {
            return Err(Error::Config(format!("n must be at least 50, got {}", self.n)));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("no estimator selected".into()));
        }
        if self.k_grid.is_empty() {
            return Err(Error::Config("empty k grid".into()));
        }
        if self.k_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("k grid must be strictly increasing".into()));
        }
        let (lo, hi) = (self.k_grid[0], *self.k_grid.last().unwrap());
        if lo < 2 || hi > self.n - 1 {
            return Err(Error::InvalidK {
                k: if lo < 2 { lo } else { hi },
                n: self.n,
                min: 2,
                max: self.n - 1,
            });
        }
        if !(0.0..=0.5).contains(&self.nu) {
            return Err(Error::Config(format!("nu must lie in [0, 1/2], got {}", self.nu)));
        }
        if self.k_min > self.k_max {
            return Err(Error::Config(format!(
                "k_min {} exceeds k_max {}",
                self.k_min, self.k_max
            )));
        }
        Ok(())
    }
}

/// Per-replication output of one estimator.
#[derive(Debug, Clone, PartialEq)]
struct EstimatorRun {
    estimates: Vec<Estimate>,
    tv: Option<f64>,
    selection: Option<(usize, f64)>,
}

fn run_replication(config: &ScenarioConfig, r: usize) -> Result<Vec<EstimatorRun>> {
    let seed = replication_seed(config.master_seed, r as u64);
    let sample = sample_censored(&config.scheme, config.n, seed)?;
    let km = KmSample::from_censored(&sample)?;
    config
        .estimators
        .iter()
        .map(|est| {
            let path = est.path(&km, &config.k_grid)?;
            let tv = tv_smoothness(&path).ok();
            let selection = reiss_thomas_in_range(&path, config.nu, config.k_min, config.k_max)
                .ok()
                .map(|s| (s.k_star, s.estimate));
            Ok(EstimatorRun {
                estimates: path.estimates,
                tv,
                selection,
            })
        })
        .collect()
}

/// Streaming moments of one `(estimator, k)` cell, updated in index order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
    sq_err: f64,
}

impl Moments {
    fn push(&mut self, x: f64, target: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
        self.sq_err += (x - target) * (x - target);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryCell {
    pub estimator: String,
    pub kernel: String,
    pub k: usize,
    pub mean: f64,
    /// `mean - γ₁`.
    pub bias: f64,
    pub mse: f64,
    /// Population variance over the defined replications.
    pub variance: f64,
    pub defined_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessRow {
    pub estimator: String,
    pub kernel: String,
    /// Mean total variation over replications with at least two defined
    /// estimates; NaN when there are none.
    pub mean_tv: f64,
    pub defined_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    pub scenario: String,
    pub gamma1: f64,
    pub k_grid: Vec<usize>,
    /// Estimator id and kernel label, in config order.
    pub estimators: Vec<(String, String)>,
    /// Estimator-major, then `k` in grid order.
    pub cells: Vec<SummaryCell>,
    pub smoothness: Vec<SmoothnessRow>,
    /// `[replication][estimator]`.
    pub tv: Vec<Vec<Option<f64>>>,
    /// `[replication][estimator]`: Reiss-Thomas `k*` and the estimate there.
    pub selections: Vec<Vec<Option<(usize, f64)>>>,
    /// `[replication][estimator][k]`, kept when `R ≤ RAW_RETENTION_LIMIT`.
    pub raw: Option<Vec<Vec<Vec<Estimate>>>>,
}

impl SimulationSummary {
    pub fn estimator_index(&self, id: &str) -> Option<usize> {
        self.estimators.iter().position(|(e, _)| e == id)
    }

    pub fn cell(&self, estimator: usize, k: usize) -> Option<&SummaryCell> {
        let j = self.k_grid.binary_search(&k).ok()?;
        self.cells.get(estimator * self.k_grid.len() + j)
    }
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<SimulationSummary> {
    run_scenario_with(config, Execution::default())
}

pub fn run_scenario_with(config: &ScenarioConfig, exec: Execution) -> Result<SimulationSummary> {
    config.validate()?;
    let gamma1 = config.scheme.gamma1();
    let n_est = config.estimators.len();
    let n_k = config.k_grid.len();
    let keep_raw = config.replications <= RAW_RETENTION_LIMIT;

    let mut moments = vec![Moments::default(); n_est * n_k];
    let mut tv = Vec::with_capacity(config.replications);
    let mut selections = Vec::with_capacity(config.replications);
    let mut raw = keep_raw.then(|| Vec::with_capacity(config.replications));

    let mut start = 0;
    while start < config.replications {
        let len = CHUNK.min(config.replications - start);
        let chunk = map_indexed(exec, len, |i| run_replication(config, start + i));
        for rep in chunk {
            let rep = rep?;
            for (e, run) in rep.iter().enumerate() {
                for (j, est) in run.estimates.iter().enumerate() {
                    if let Ok(x) = est {
                        moments[e * n_k + j].push(*x, gamma1);
                    }
                }
            }
            tv.push(rep.iter().map(|r| r.tv).collect());
            selections.push(rep.iter().map(|r| r.selection).collect());
            if let Some(raw) = raw.as_mut() {
                raw.push(rep.into_iter().map(|r| r.estimates).collect());
            }
        }
        start += len;
    }

    let labels: Vec<(String, String)> = config
        .estimators
        .iter()
        .map(|e| (e.id().to_string(), e.kernel_label().to_string()))
        .collect();
    let mut cells = Vec::with_capacity(n_est * n_k);
    for (e, (id, kernel)) in labels.iter().enumerate() {
        for (j, &k) in config.k_grid.iter().enumerate() {
            let m = moments[e * n_k + j];
            let (mean, variance, mse) = if m.count == 0 {
                (f64::NAN, f64::NAN, f64::NAN)
            } else {
                let c = m.count as f64;
                (m.mean, m.m2 / c, m.sq_err / c)
            };
            cells.push(SummaryCell {
                estimator: id.clone(),
                kernel: kernel.clone(),
                k,
                mean,
                bias: mean - gamma1,
                mse,
                variance,
                defined_count: m.count,
            });
        }
    }
    let smoothness = labels
        .iter()
        .enumerate()
        .map(|(e, (id, kernel))| {
            let vals: Vec<f64> = tv.iter().filter_map(|row: &Vec<Option<f64>>| row[e]).collect();
            let mean_tv = if vals.is_empty() {
                f64::NAN
            } else {
                vals.iter().sum::<f64>() / vals.len() as f64
            };
            SmoothnessRow {
                estimator: id.clone(),
                kernel: kernel.clone(),
                mean_tv,
                defined_count: vals.len(),
            }
        })
        .collect();

    Ok(SimulationSummary {
        scenario: config.name.clone(),
        gamma1,
        k_grid: config.k_grid.clone(),
        estimators: labels,
        cells,
        smoothness,
        tv,
        selections,
        raw,
    })
}

/// `Σ |γ̂_{k+1} - γ̂_k|` over consecutive defined entries.
pub fn tv_smoothness(path: &EstimatorPath) -> Result<f64> {
    let vals: Vec<f64> = path.defined().map(|(_, v)| v).collect();
    if vals.len() < 2 {
        return Err(Error::Insufficient(format!(
            "total variation needs 2 defined estimates, got {}",
            vals.len()
        )));
    }
    Ok(vals.windows(2).map(|w| (w[1] - w[0]).abs()).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalityCheck {
    /// Sample variance of `√k(γ̂ - γ₁)` over the defined replications.
    pub empirical_variance: f64,
    pub reference_sigma2: f64,
    pub ratio: f64,
    pub defined_count: usize,
}

/// Kernel whose asymptotic variance describes `estimator`.
fn reference_kernel(estimator: &Estimator) -> Result<Kernel> {
    match estimator {
        Estimator::Kernel { kernel, .. } | Estimator::Cdm(kernel) => Ok(*kernel),
        Estimator::Worms | Estimator::WormsTilde | Estimator::Hill | Estimator::Efg => Ok(Kernel::Indicator),
        other => Err(Error::Config(format!(
            "no reference variance for estimator {}",
            other.id()
        ))),
    }
}

/// Compares the spread of `√k(γ̂ - γ₁)` with `σ_K²` for the single
/// estimator of `config` at one `k`.
pub fn normality_check(config: &ScenarioConfig, k: usize) -> Result<NormalityCheck> {
    normality_check_with(config, k, Execution::default())
}

pub fn normality_check_with(config: &ScenarioConfig, k: usize, exec: Execution) -> Result<NormalityCheck> {
    let [estimator] = config.estimators.as_slice() else {
        return Err(Error::Config("normality check takes exactly one estimator".into()));
    };
    let ctx = AsymptoticContext::from_scheme(&config.scheme)?;
    let reference = sigma2(reference_kernel(estimator)?, &ctx)?;
    let cfg = ScenarioConfig {
        k_grid: vec![k],
        k_min: k,
        k_max: k,
        ..config.clone()
    };
    let summary = run_scenario_with(&cfg, exec)?;
    let cell = &summary.cells[0];
    if cell.defined_count < 2 {
        return Err(Error::Insufficient("fewer than 2 defined replications".into()));
    }
    let c = cell.defined_count as f64;
    let empirical = k as f64 * cell.variance * c / (c - 1.0);
    Ok(NormalityCheck {
        empirical_variance: empirical,
        reference_sigma2: reference,
        ratio: empirical / reference,
        defined_count: cell.defined_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::Variant;
    use crate::models::ParetoTypeModel;

    fn weak_burr() -> CensoringScheme {
        CensoringScheme::new(
            ParetoTypeModel::burr(1.0, 0.5).unwrap(),
            ParetoTypeModel::burr(1.0, 1.0).unwrap(),
        )
    }

    fn small_config(r: usize) -> ScenarioConfig {
        let mut c = ScenarioConfig::new(
            "weak",
            weak_burr(),
            120,
            r,
            7,
            vec![
                Estimator::Worms,
                Estimator::Kernel {
                    kernel: Kernel::Triweight,
                    variant: Variant::Shifted,
                },
            ],
        );
        c.k_grid = (2..100).collect();
        c
    }

    #[test]
    fn tv_examples() {
        let p = |xs: Vec<f64>| {
            EstimatorPath::new("t", "none", (2..2 + xs.len()).collect(), xs.into_iter().map(Ok).collect()).unwrap()
        };
        assert_eq!(tv_smoothness(&p(vec![0.4; 5])).unwrap(), 0.0);
        assert_eq!(tv_smoothness(&p(vec![1.0, 3.0, 2.0])).unwrap(), 3.0);
        assert!((tv_smoothness(&p(vec![0.1, 0.2, 0.5, 0.9])).unwrap() - 0.8).abs() < 1e-15);
        assert!(tv_smoothness(&p(vec![1.0])).is_err());
    }

    #[test]
    fn single_replication_is_the_path() {
        let cfg = small_config(1);
        let s = run_scenario(&cfg).unwrap();
        let sample = sample_censored(&cfg.scheme, cfg.n, replication_seed(cfg.master_seed, 0)).unwrap();
        let km = KmSample::from_censored(&sample).unwrap();
        let path = Estimator::Worms.path(&km, &cfg.k_grid).unwrap();
        for (j, est) in path.estimates.iter().enumerate() {
            let cell = &s.cells[j];
            match est {
                Ok(v) => {
                    assert_eq!(cell.mean, *v);
                    assert_eq!(cell.variance, 0.0);
                    assert_eq!(cell.defined_count, 1);
                }
                Err(_) => assert_eq!(cell.defined_count, 0),
            }
        }
        assert_eq!(s, run_scenario(&cfg).unwrap());
    }

    #[test]
    fn execution_modes_agree() {
        let cfg = small_config(40);
        let a = run_scenario_with(&cfg, Execution::Sequential).unwrap();
        let b = run_scenario_with(&cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mse_decomposition() {
        let s = run_scenario(&small_config(30)).unwrap();
        for c in s.cells.iter().filter(|c| c.defined_count > 0) {
            assert!((c.mse - (c.variance + c.bias * c.bias)).abs() <= 1e-10 * c.mse.max(1.0));
        }
    }

    #[test]
    fn validation() {
        let mut c = small_config(1);
        c.n = 40;
        assert!(run_scenario(&c).is_err());
        let mut c = small_config(0);
        assert!(run_scenario(&c).is_err());
        c.replications = 1;
        c.k_grid = vec![2, 120];
        assert!(run_scenario(&c).is_err());
        c.k_grid = vec![5, 3];
        assert!(run_scenario(&c).is_err());
    }

    #[test]
    fn normality_needs_one_estimator() {
        assert!(normality_check(&small_config(5), 20).is_err());
    }
}
