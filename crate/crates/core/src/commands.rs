//! The four user-facing commands as library functions returning CSV text.

use std::path::{Path, PathBuf};

use crate::asymptotics::{
    amse_argmin, mean_bias_constant, optimal_k_kernel, sigma2, sigma2_star, AsymptoticContext,
};
use crate::error::{Error, Result};
use crate::estimators::{Estimator, KmSample};
use crate::io::{fmt_f64, parse_paths, read_data_file, write_paths, write_smoothness, write_summary, write_table, RunConfig};
use crate::kernels::{bias_ratio_g, phi_optimal, variance_ratio_h, Kernel};
use crate::models::CensoringScheme;
use crate::montecarlo::{run_scenario, SimulationSummary};
use crate::parallel::with_threads;
use crate::selection::reiss_thomas_in_range;

/// Estimator paths of a data file over `k ∈ [k_min, k_max]` (default
/// `[2, n-1]`).
pub fn cmd_estimate(input: &Path, estimators: &[Estimator], k_min: Option<usize>, k_max: Option<usize>) -> Result<String> {
    let sample = read_data_file(input)?;
    let n = sample.len();
    if n < 3 {
        return Err(Error::Insufficient(format!(
            "{}: need at least 3 rows to form an estimate, got {n}",
            input.display()
        )));
    }
    let lo = k_min.unwrap_or(2);
    let hi = k_max.unwrap_or(n - 1);
    if lo < 2 || hi > n - 1 || lo > hi {
        return Err(Error::InvalidK {
            k: if lo < 2 || lo > hi { lo } else { hi },
            n,
            min: 2,
            max: n - 1,
        });
    }
    if estimators.is_empty() {
        return Err(Error::Config("no estimator selected".into()));
    }
    let km = KmSample::from_censored(&sample)?;
    let ks: Vec<usize> = (lo..=hi).collect();
    let paths = estimators
        .iter()
        .map(|e| e.path(&km, &ks))
        .collect::<Result<Vec<_>>>()?;
    write_paths(&paths)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateReport {
    pub files: Vec<PathBuf>,
    /// Per-run Reiss-Thomas summary, CSV.
    pub selection_table: String,
}

fn selection_rows(s: &SimulationSummary) -> Vec<Vec<String>> {
    s.estimators
        .iter()
        .enumerate()
        .map(|(e, (id, kernel))| {
            let picks: Vec<(usize, f64)> = s.selections.iter().filter_map(|row| row[e]).collect();
            let mut ks: Vec<usize> = picks.iter().map(|p| p.0).collect();
            ks.sort_unstable();
            let count = picks.len();
            let (mean_k, median_k, mean_est, mean_abs_err) = if count == 0 {
                (String::new(), String::new(), String::new(), String::new())
            } else {
                let c = count as f64;
                (
                    fmt_f64(ks.iter().sum::<usize>() as f64 / c),
                    ks[(count - 1) / 2].to_string(),
                    fmt_f64(picks.iter().map(|p| p.1).sum::<f64>() / c),
                    fmt_f64(picks.iter().map(|p| (p.1 - s.gamma1).abs()).sum::<f64>() / c),
                )
            };
            vec![
                s.scenario.clone(),
                id.clone(),
                kernel.clone(),
                count.to_string(),
                mean_k,
                median_k,
                mean_est,
                mean_abs_err,
            ]
        })
        .collect()
}

/// Runs every scenario of a config and writes `<block>_summary.csv` and
/// `<block>_smoothness.csv` into `output_dir`. `threads = 0` uses all cores.
pub fn cmd_simulate(config_path: &Path, output_dir: &Path, seed: Option<u64>, threads: usize) -> Result<SimulateReport> {
    let config = RunConfig::read(config_path, seed)?;
    std::fs::create_dir_all(output_dir)
        .map_err(|e| Error::Io(format!("{}: {e}", output_dir.display())))?;
    let mut files = Vec::new();
    let mut rows = Vec::new();
    for block in &config.blocks {
        let summaries = block
            .runs
            .iter()
            .map(|run| with_threads(threads, || run_scenario(run))?)
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&SimulationSummary> = summaries.iter().collect();
        for (suffix, body) in [
            ("summary", write_summary(&refs)?),
            ("smoothness", write_smoothness(&refs)?),
        ] {
            let path = output_dir.join(format!("{}_{suffix}.csv", block.name));
            std::fs::write(&path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            files.push(path);
        }
        for s in &summaries {
            rows.extend(selection_rows(s));
        }
    }
    let selection_table = write_table(
        &[
            "scenario",
            "estimator",
            "kernel",
            "selected",
            "mean_k_star",
            "median_k_star",
            "mean_estimate",
            "mean_abs_error",
        ],
        &rows,
    )?;
    Ok(SimulateReport { files, selection_table })
}

fn cell(v: Result<f64>) -> String {
    match v {
        Ok(x) => fmt_f64(x),
        Err(e) => marker(&e).to_string(),
    }
}

fn marker(e: &Error) -> &'static str {
    match e {
        Error::Validity(_) => "validity-error",
        Error::NoOptimum(_) => "no-optimum",
        Error::Singular(_) => "singular",
        Error::Quadrature { .. } => "quadrature-error",
        _ => "undefined",
    }
}

/// Table of asymptotic constants per kernel. Cells that do not exist for
/// the scheme hold a marker such as `validity-error`.
///
/// `k_star` is the closed-form minimiser of the asymptotic MSE, `k_star_scan`
/// the exhaustive one, and `k_star_cubed` the closed form with the bias
/// constant cubed instead of squared.
pub fn cmd_asymptotics(scheme: &CensoringScheme, kernels: &[Kernel], n: usize) -> Result<String> {
    let ctx = AsymptoticContext::from_scheme(scheme)?;
    if n < 3 {
        return Err(Error::InvalidK { k: 2, n, min: 2, max: n.saturating_sub(1) });
    }
    let t = ctx.hall_f.beta * ctx.gamma1;
    let rows: Vec<Vec<String>> = kernels
        .iter()
        .map(|&k| {
            let opt = optimal_k_kernel(k, &ctx, n);
            let (k_star, clamped, cubed) = match &opt {
                Ok(o) => (
                    o.k.to_string(),
                    (o.clamped as u8).to_string(),
                    o.cubed_constant.map(fmt_f64).unwrap_or_else(|| "undefined".into()),
                ),
                Err(e) => (marker(e).into(), String::new(), marker(e).into()),
            };
            let scan = match &opt {
                Ok(_) => amse_argmin(k, &ctx, n).map(|v| v.to_string()).unwrap_or_else(|e| marker(&e).into()),
                Err(e) => marker(e).into(),
            };
            vec![
                k.name().to_string(),
                cell(sigma2(k, &ctx)),
                cell(mean_bias_constant(k, &ctx)),
                cell(sigma2_star(k, &ctx)),
                cell(bias_ratio_g(k, t)),
                cell(variance_ratio_h(k, ctx.p)),
                cell(phi_optimal(k, ctx.p, ctx.alpha)),
                k_star,
                clamped,
                scan,
                cubed,
            ]
        })
        .collect();
    write_table(
        &[
            "kernel",
            "sigma2",
            "m",
            "sigma2_star",
            "g",
            "h",
            "phi",
            "k_star",
            "k_star_clamped",
            "k_star_scan",
            "k_star_cubed",
        ],
        &rows,
    )
}

/// Reiss-Thomas choice of `k` for every path of a path CSV. Candidates
/// default to `[10, largest k]`.
pub fn cmd_select_k(input: &Path, nu: f64, k_min: Option<usize>, k_max: Option<usize>) -> Result<String> {
    let file = std::fs::File::open(input).map_err(|e| Error::Io(format!("{}: {e}", input.display())))?;
    let paths = parse_paths(file, &input.display().to_string())?;
    let rows = paths
        .iter()
        .map(|p| {
            let hi = k_max.unwrap_or_else(|| p.k_values.last().copied().unwrap_or(0));
            let lo = k_min.unwrap_or(crate::selection::DEFAULT_K_MIN);
            let r = reiss_thomas_in_range(p, nu, lo, hi)?;
            Ok(vec![
                p.estimator.clone(),
                p.kernel.clone(),
                fmt_f64(r.nu),
                r.k_star.to_string(),
                fmt_f64(r.estimate),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    write_table(&["estimator", "kernel", "nu", "k_star", "estimate"], &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ParetoTypeModel;

    #[test]
    fn asymptotics_table_weak_burr() {
        let scheme = CensoringScheme::new(
            ParetoTypeModel::burr(1.0, 0.5).unwrap(),
            ParetoTypeModel::burr(1.0, 1.0).unwrap(),
        );
        let csv = cmd_asymptotics(&scheme, &Kernel::ALL, 500).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        let k1: Vec<&str> = lines[1].split(',').collect();
        let sigma: f64 = k1[1].parse().unwrap();
        let p = 2.0 / 3.0;
        assert!((sigma - p * 0.25 / (2.0 * p - 1.0)).abs() < 1e-8);
        let k3: Vec<&str> = lines[3].split(',').collect();
        assert_eq!(k3[0], "triweight");
        for v in &k3[1..7] {
            assert!(v.parse::<f64>().unwrap().is_finite());
        }
    }

    #[test]
    fn asymptotics_markers_for_strong_censoring() {
        let scheme = CensoringScheme::new(
            ParetoTypeModel::burr(1.0, 1.0).unwrap(),
            ParetoTypeModel::burr(1.0, 0.5).unwrap(),
        );
        let csv = cmd_asymptotics(&scheme, &[Kernel::Triweight], 500).unwrap();
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[1], "validity-error");
        assert!(row[2].parse::<f64>().is_ok());
    }
}
