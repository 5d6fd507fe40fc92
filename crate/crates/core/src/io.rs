//! Data files, run configuration and CSV output.
//!
//! All floats are written with 17 significant digits so that a value read
//! back is bit-identical to the one written.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimators::{
    Estimate, Estimator, EstimatorOptions, EstimatorPath, Tau1Source, Undefined, Variant, ESTIMATOR_IDS,
};
use crate::kernels::{BabKernel, Kernel};
use crate::models::{CensoredSample, CensoringScheme, Family, Observation, ParetoTypeModel};
use crate::montecarlo::{ScenarioConfig, SimulationSummary};
use crate::selection::{SelectionResult, DEFAULT_K_MIN, DEFAULT_NU};

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn parse_error(source_name: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source_name.to_string(),
        line,
        message: message.into(),
    }
}

fn record_line(r: &csv::StringRecord) -> usize {
    r.position().map(|p| p.line() as usize).unwrap_or(0)
}

/// Reads a `z,delta` data file.
pub fn read_data_file(path: &Path) -> Result<CensoredSample> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_data(file, &path.display().to_string())
}

/// Parses `z,delta` rows. Diagnostics carry the 1-based line number.
pub fn parse_data(reader: impl Read, source_name: &str) -> Result<CensoredSample> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut records = Vec::new();
    let mut header_seen = false;
    let mut last_line = 1;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_error(source_name, line, e.to_string())
        })?;
        let line = record_line(&rec);
        last_line = line.max(1);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if !header_seen {
            header_seen = true;
            if rec.len() != 2 || &rec[0] != "z" || &rec[1] != "delta" {
                return Err(parse_error(source_name, line, "expected header \"z,delta\""));
            }
            continue;
        }
        if rec.len() != 2 {
            return Err(parse_error(
                source_name,
                line,
                format!("expected 2 fields, found {}", rec.len()),
            ));
        }
        let z: f64 = rec[0]
            .parse()
            .map_err(|_| parse_error(source_name, line, format!("z {:?} is not a number", &rec[0])))?;
        if !(z > 0.0 && z.is_finite()) {
            return Err(parse_error(source_name, line, format!("z must be positive, got {}", &rec[0])));
        }
        let delta = match &rec[1] {
            "1" => true,
            "0" => false,
            other => {
                return Err(parse_error(
                    source_name,
                    line,
                    format!("delta must be 0 or 1, got {other:?}"),
                ))
            }
        };
        records.push(Observation { z, delta });
    }
    if records.len() < 2 {
        return Err(parse_error(
            source_name,
            last_line,
            format!("fewer than 2 rows (found {})", records.len()),
        ));
    }
    CensoredSample::new(records)
}

/// Writes a `z,delta` data file body.
pub fn write_data(sample: &CensoredSample) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["z", "delta"]).map_err(csv_err)?;
    for o in sample.records() {
        w.write_record([fmt_f64(o.z), (o.delta as u8).to_string()])
            .map_err(csv_err)?;
    }
    finish(w)
}

const PATH_HEADER: [&str; 6] = ["estimator", "kernel", "k", "estimate", "defined", "reason"];

/// Path CSV: `estimator,kernel,k,estimate,defined,reason`. Undefined entries
/// have an empty estimate and name their reason.
pub fn write_paths(paths: &[EstimatorPath]) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(PATH_HEADER).map_err(csv_err)?;
    for p in paths {
        for (k, e) in p.k_values.iter().zip(&p.estimates) {
            let (est, def, reason) = match e {
                Ok(v) => (fmt_f64(*v), "1", ""),
                Err(u) => (String::new(), "0", u.code()),
            };
            w.write_record([p.estimator.as_str(), p.kernel.as_str(), &k.to_string(), &est, def, reason])
                .map_err(csv_err)?;
        }
    }
    finish(w)
}

fn undefined_from_code(code: &str) -> Undefined {
    [
        Undefined::ZeroKmDenominator,
        Undefined::FullyCensoredTail,
        Undefined::SingularRho,
        Undefined::NonPositiveEstimate,
        Undefined::QuadratureFailure,
    ]
    .into_iter()
    .find(|u| u.code() == code)
    .unwrap_or(Undefined::Unrecorded)
}

/// Reads a path CSV back; rows are grouped by `(estimator, kernel)` in order
/// of first appearance. A missing `reason` column reads as unrecorded.
pub fn parse_paths(reader: impl Read, source_name: &str) -> Result<Vec<EstimatorPath>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let header = rdr.headers().map_err(csv_err)?.clone();
    let col = |name: &str| header.iter().position(|h| h == name);
    let (Some(ce), Some(ck), Some(ckk), Some(cv), Some(cd)) =
        (col("estimator"), col("kernel"), col("k"), col("estimate"), col("defined"))
    else {
        return Err(parse_error(
            source_name,
            1,
            "expected columns estimator,kernel,k,estimate,defined",
        ));
    };
    let cr = col("reason");
    let mut groups: Vec<(String, String, Vec<usize>, Vec<Estimate>)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = record_line(&rec);
        let field = |i: usize| rec.get(i).unwrap_or("");
        let k: usize = field(ckk)
            .parse()
            .map_err(|_| parse_error(source_name, line, format!("k {:?} is not a count", field(ckk))))?;
        let est = match field(cd) {
            "1" => Ok(field(cv).parse::<f64>().map_err(|_| {
                parse_error(source_name, line, format!("estimate {:?} is not a number", field(cv)))
            })?),
            "0" => Err(cr.map(|c| undefined_from_code(field(c))).unwrap_or(Undefined::Unrecorded)),
            other => {
                return Err(parse_error(
                    source_name,
                    line,
                    format!("defined must be 0 or 1, got {other:?}"),
                ))
            }
        };
        let (e, kl) = (field(ce), field(ck));
        match groups.iter_mut().find(|g| g.0 == e && g.1 == kl) {
            Some(g) => {
                g.2.push(k);
                g.3.push(est);
            }
            None => groups.push((e.to_string(), kl.to_string(), vec![k], vec![est])),
        }
    }
    if groups.is_empty() {
        return Err(parse_error(source_name, 0, "no estimator path rows"));
    }
    groups
        .into_iter()
        .map(|(e, k, ks, es)| {
            EstimatorPath::new(e, k, ks, es)
                .map_err(|err| parse_error(source_name, 0, err.to_string()))
        })
        .collect()
}

fn fmt_opt(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        fmt_f64(x)
    }
}

/// Summary CSV over one or more runs.
pub fn write_summary(summaries: &[&SimulationSummary]) -> Result<String> {
    let mut w = csv_writer();
    w.write_record([
        "scenario",
        "estimator",
        "kernel",
        "k",
        "mean",
        "bias",
        "mse",
        "variance",
        "defined_count",
    ])
    .map_err(csv_err)?;
    for s in summaries {
        for c in &s.cells {
            w.write_record([
                s.scenario.clone(),
                c.estimator.clone(),
                c.kernel.clone(),
                c.k.to_string(),
                fmt_opt(c.mean),
                fmt_opt(c.bias),
                fmt_opt(c.mse),
                fmt_opt(c.variance),
                c.defined_count.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    finish(w)
}

pub fn write_smoothness(summaries: &[&SimulationSummary]) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["scenario", "estimator", "mean_tv"]).map_err(csv_err)?;
    for s in summaries {
        for row in &s.smoothness {
            w.write_record([s.scenario.clone(), row.estimator.clone(), fmt_opt(row.mean_tv)])
                .map_err(csv_err)?;
        }
    }
    finish(w)
}

pub fn write_selection(estimator: &str, kernel: &str, result: &SelectionResult) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["estimator", "kernel", "nu", "k_star", "estimate"])
        .map_err(csv_err)?;
    w.write_record([
        estimator.to_string(),
        kernel.to_string(),
        fmt_f64(result.nu),
        result.k_star.to_string(),
        fmt_f64(result.estimate),
    ])
    .map_err(csv_err)?;
    finish(w)
}

/// Writes rows of preformatted cells.
pub fn write_table(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    finish(w)
}

/// One `scenario = name` block of a run config, expanded into one run per
/// censoring strength.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioBlock {
    pub name: String,
    pub runs: Vec<ScenarioConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub blocks: Vec<ScenarioBlock>,
}

const KNOWN_KEYS: [&str; 21] = [
    "scenario",
    "family.f",
    "gamma.f",
    "zeta.f",
    "family.g",
    "gamma.g",
    "zeta.g",
    "n",
    "replications",
    "seed",
    "estimators",
    "kernel",
    "bab_kernel",
    "variant",
    "nu",
    "k_min",
    "k_max",
    "k_grid",
    "beta1",
    "adaptive",
    "adaptive_step",
];

/// Censoring strengths generated when a block fixes neither `gamma.f` nor
/// `gamma.g`: `(label, γ₁, γ₂)`.
pub const DEFAULT_STRENGTHS: [(&str, f64, f64); 2] = [("weak", 0.5, 1.0), ("strong", 1.0, 0.5)];

type Entries = BTreeMap<String, (usize, String)>;

struct Lookup<'a> {
    source: &'a str,
    block: &'a Entries,
    global: &'a Entries,
}

impl Lookup<'_> {
    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.block.get(key).or_else(|| self.global.get(key))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<T>().map(Some).map_err(|e| {
                parse_error(self.source, *line, format!("{key}: cannot parse {v:?}: {e}"))
            }),
        }
    }

    fn fail(&self, key: &str, msg: impl std::fmt::Display) -> Error {
        let line = self.raw(key).map(|r| r.0).unwrap_or(0);
        parse_error(self.source, line, format!("{key}: {msg}"))
    }
}

fn parse_k_grid(s: &str) -> std::result::Result<(usize, usize, usize), String> {
    let (range, step) = match s.split_once('/') {
        Some((r, st)) => (r, st.trim().parse::<usize>().map_err(|e| e.to_string())?),
        None => (s, 1),
    };
    let (lo, hi) = range
        .split_once("..")
        .ok_or_else(|| "expected lo..hi or lo..hi/step".to_string())?;
    let lo = lo.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<usize>().map_err(|e| e.to_string())?;
    if step == 0 || lo > hi {
        return Err("empty range".into());
    }
    Ok((lo, hi, step))
}

impl RunConfig {
    pub fn read(path: &Path, seed_override: Option<u64>) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string(), seed_override)
    }

    /// Parses `key = value` lines. Keys before the first `scenario = name`
    /// line apply to every block; `#` starts a comment.
    pub fn parse(text: &str, source: &str, seed_override: Option<u64>) -> Result<Self> {
        let mut global = Entries::new();
        let mut blocks: Vec<(String, Entries)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_error(source, line_no, format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(parse_error(source, line_no, format!("unknown key {key:?}")));
            }
            if key == "scenario" {
                if value.is_empty() || value.contains(['/', '\\']) {
                    return Err(parse_error(source, line_no, format!("invalid scenario name {value:?}")));
                }
                if blocks.iter().any(|b| b.0 == value) {
                    return Err(parse_error(source, line_no, format!("duplicate scenario {value:?}")));
                }
                blocks.push((value.to_string(), Entries::new()));
                continue;
            }
            let target = match blocks.last_mut() {
                Some(b) => &mut b.1,
                None => &mut global,
            };
            if target.insert(key.to_string(), (line_no, value.to_string())).is_some() {
                return Err(parse_error(source, line_no, format!("duplicate key {key:?}")));
            }
        }
        if blocks.is_empty() {
            blocks.push(("scenario".to_string(), Entries::new()));
        }
        let blocks = blocks
            .iter()
            .map(|(name, entries)| {
                let lk = Lookup {
                    source,
                    block: entries,
                    global: &global,
                };
                Ok(ScenarioBlock {
                    name: name.clone(),
                    runs: build_runs(name, &lk, seed_override)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { blocks })
    }
}

fn build_model(lk: &Lookup, which: &str, gamma: f64) -> Result<ParetoTypeModel> {
    let fam_key = format!("family.{which}");
    let family: Family = lk.get(&fam_key)?.unwrap_or(Family::Burr);
    let zeta_key = format!("zeta.{which}");
    let zeta: f64 = lk.get(&zeta_key)?.unwrap_or(1.0);
    ParetoTypeModel::new(family, gamma, zeta).map_err(|e| {
        let key = if e.to_string().contains("zeta") { zeta_key } else { format!("gamma.{which}") };
        lk.fail(&key, e)
    })
}

fn build_runs(name: &str, lk: &Lookup, seed_override: Option<u64>) -> Result<Vec<ScenarioConfig>> {
    let n: usize = lk.get("n")?.unwrap_or(500);
    if n < 50 {
        return Err(lk.fail("n", format!("must be at least 50, got {n}")));
    }
    let replications: usize = lk.get("replications")?.unwrap_or(200);
    if replications < 1 {
        return Err(lk.fail("replications", "must be at least 1"));
    }
    let seed: u64 = match seed_override {
        Some(s) => s,
        None => lk.get("seed")?.unwrap_or(0),
    };

    let uncensored = matches!(lk.raw("family.g"), Some((_, v)) if v.trim() == "none");
    let gamma_f: Option<f64> = lk.get("gamma.f")?;
    let gamma_g: Option<f64> = if uncensored { None } else { lk.get("gamma.g")? };
    let strengths: Vec<(Option<&str>, f64, Option<f64>)> = if uncensored {
        vec![(None, gamma_f.unwrap_or(DEFAULT_STRENGTHS[0].1), None)]
    } else {
        match (gamma_f, gamma_g) {
            (None, None) => DEFAULT_STRENGTHS
                .iter()
                .map(|&(l, f, g)| (Some(l), f, Some(g)))
                .collect(),
            (Some(f), Some(g)) => vec![(None, f, Some(g))],
            (None, Some(_)) => return Err(lk.fail("gamma.g", "gamma.f must be set as well")),
            (Some(_), None) => return Err(lk.fail("gamma.f", "gamma.g must be set as well")),
        }
    };

    let kernel: Kernel = lk.get("kernel")?.unwrap_or(Kernel::Triweight);
    let bab_kernel: BabKernel = match lk.raw("bab_kernel") {
        None => BabKernel::Two,
        Some((line, v)) => match v.as_str() {
            "bab0" | "0" => BabKernel::Zero,
            "bab1" | "1" => BabKernel::One,
            "bab2" | "2" => BabKernel::Two,
            other => return Err(parse_error(lk.source, *line, format!("bab_kernel: unknown value {other:?}"))),
        },
    };
    let variant = match lk.raw("variant").map(|r| r.1.as_str()) {
        None | Some("shifted") => Variant::Shifted,
        Some("unshifted") => Variant::Unshifted,
        Some(other) => return Err(lk.fail("variant", format!("expected shifted or unshifted, got {other:?}"))),
    };
    let beta1: Option<f64> = lk.get("beta1")?;
    let adaptive: bool = lk.get("adaptive")?.unwrap_or(false);
    let adaptive_step: usize = lk.get("adaptive_step")?.unwrap_or(5);
    if adaptive_step == 0 {
        return Err(lk.fail("adaptive_step", "must be at least 1"));
    }
    let bias_reduction = match (beta1, adaptive) {
        (Some(_), true) => return Err(lk.fail("beta1", "beta1 and adaptive are exclusive")),
        (Some(b), false) => {
            if !(b > 0.0 && b.is_finite()) {
                return Err(lk.fail("beta1", format!("must be positive, got {b}")));
            }
            Some(Tau1Source::KnownBeta1(b))
        }
        (None, true) => Some(Tau1Source::AdaptiveGrid { k_step: adaptive_step }),
        (None, false) => None,
    };
    let opts = EstimatorOptions {
        kernel,
        bab_kernel,
        variant,
        bias_reduction,
    };
    let mut ids: Vec<String> = match lk.raw("estimators") {
        None => ["efg", "worms", "kernel", "bab"].map(String::from).to_vec(),
        Some((_, v)) => v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
    };
    if bias_reduction.is_some() && !ids.iter().any(|s| s == "bias-reduced") {
        ids.push("bias-reduced".into());
    }
    if ids.is_empty() {
        return Err(lk.fail("estimators", "no estimator listed"));
    }
    let estimators = ids
        .iter()
        .map(|id| {
            if !ESTIMATOR_IDS.contains(&id.as_str()) {
                return Err(lk.fail("estimators", format!("unknown estimator {id:?}")));
            }
            Estimator::from_id(id, &opts).map_err(|e| lk.fail("estimators", e))
        })
        .collect::<Result<Vec<_>>>()?;

    let nu: f64 = lk.get("nu")?.unwrap_or(DEFAULT_NU);
    if !(0.0..=0.5).contains(&nu) {
        return Err(lk.fail("nu", format!("must lie in [0, 1/2], got {nu}")));
    }
    let k_min: usize = lk.get("k_min")?.unwrap_or(DEFAULT_K_MIN);
    let k_max: usize = lk.get("k_max")?.unwrap_or(n - 1);
    if k_min < 2 || k_max > n - 1 || k_min > k_max {
        return Err(lk.fail("k_min", format!("need 2 <= k_min <= k_max <= n-1, got [{k_min}, {k_max}]")));
    }
    let k_grid: Vec<usize> = match lk.raw("k_grid") {
        None => (2..n).collect(),
        Some((line, v)) => {
            let (lo, hi, step) = parse_k_grid(v)
                .map_err(|e| parse_error(lk.source, *line, format!("k_grid: {e}")))?;
            if lo < 2 || hi > n - 1 {
                return Err(parse_error(lk.source, *line, format!("k_grid: must lie within [2, {}]", n - 1)));
            }
            (lo..=hi).step_by(step).collect()
        }
    };

    strengths
        .into_iter()
        .map(|(label, gf, gg)| {
            let f = build_model(lk, "f", gf)?;
            let scheme = match gg {
                Some(gg) => CensoringScheme::new(f, build_model(lk, "g", gg)?),
                None => CensoringScheme::uncensored(f),
            };
            let run_name = match label {
                Some(l) => format!("{name}-{l}"),
                None => name.to_string(),
            };
            let cfg = ScenarioConfig {
                name: run_name,
                scheme,
                n,
                replications,
                master_seed: seed,
                estimators: estimators.clone(),
                k_grid: k_grid.clone(),
                nu,
                k_min,
                k_max,
            };
            cfg.validate()?;
            Ok(cfg)
        })
        .collect()
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 123456.789, f64::MIN_POSITIVE, 2.5e17] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn data_file_ok() {
        let s = parse_data("z,delta\n1,1\n2,0\n3,1\n".as_bytes(), "d.csv").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.uncensored_count(), 2);
    }

    #[test]
    fn data_file_errors_carry_line() {
        let e = parse_data("z,delta\n1,1\n-2,0\n".as_bytes(), "d.csv").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                source_name: "d.csv".into(),
                line: 3,
                message: "z must be positive, got -2".into()
            }
        );
        let e = parse_data("z,delta\n1,1\n2,2\n".as_bytes(), "d.csv").unwrap_err();
        assert!(e.to_string().contains("line 3"));
        let e = parse_data("".as_bytes(), "empty.csv").unwrap_err();
        assert!(e.to_string().contains("empty.csv"));
        assert!(e.to_string().contains("fewer than 2 rows"));
        let e = parse_data("z,delta\n1,1\n".as_bytes(), "one.csv").unwrap_err();
        assert!(e.to_string().contains("fewer than 2 rows"));
        assert!(parse_data("x,y\n1,1\n2,1\n".as_bytes(), "h.csv").is_err());
    }

    #[test]
    fn path_round_trip() {
        let p = EstimatorPath::new(
            "worms",
            "none",
            vec![2, 3, 4],
            vec![Ok(0.1), Err(Undefined::ZeroKmDenominator), Ok(1.0 / 3.0)],
        )
        .unwrap();
        let q = EstimatorPath::new("kernel", "triweight", vec![2, 3, 4], vec![Ok(0.5), Ok(0.25), Ok(0.125)]).unwrap();
        let text = write_paths(&[p.clone(), q.clone()]).unwrap();
        assert!(!text.contains('\r'));
        let back = parse_paths(text.as_bytes(), "p.csv").unwrap();
        assert_eq!(back, vec![p, q]);
    }

    #[test]
    fn config_expands_strengths() {
        let cfg = RunConfig::parse("n = 100\nreplications = 3\nscenario = bb\nscenario = ff\nfamily.f = frechet\nfamily.g = frechet\n", "c", None).unwrap();
        assert_eq!(cfg.blocks.len(), 2);
        let bb = &cfg.blocks[0];
        assert_eq!(bb.runs.len(), 2);
        assert_eq!(bb.runs[0].name, "bb-weak");
        assert!((bb.runs[0].scheme.p() - 2.0 / 3.0).abs() < 1e-15);
        assert!((bb.runs[1].scheme.p() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(cfg.blocks[1].runs[0].scheme.f.family(), Family::Frechet);
        assert_eq!(bb.runs[0].k_grid, (2..100).collect::<Vec<_>>());
    }

    #[test]
    fn config_rejections() {
        let e = RunConfig::parse("colour = red\n", "c", None).unwrap_err();
        assert!(e.to_string().contains("colour"));
        let e = RunConfig::parse("gamma.f = 0\ngamma.g = 1\n", "c", None).unwrap_err();
        assert!(e.to_string().contains("gamma must be positive"), "{e}");
        assert!(RunConfig::parse("n = 10\n", "c", None).is_err());
        assert!(RunConfig::parse("nu = 0.7\n", "c", None).is_err());
        assert!(RunConfig::parse("beta1 = 1\nadaptive = true\n", "c", None).is_err());
        assert!(RunConfig::parse("estimators = hill,pickands\n", "c", None).is_err());
        assert!(RunConfig::parse("n\n", "c", None).is_err());
        assert!(RunConfig::parse("n = 100\nn = 200\n", "c", None).is_err());
    }

    #[test]
    fn config_uncensored_and_grid() {
        let cfg = RunConfig::parse(
            "family.f = pareto\ngamma.f = 1\nfamily.g = none\nk_grid = 10..90/10\nbeta1 = 1\nseed = 4\n",
            "c",
            Some(9),
        )
        .unwrap();
        let run = &cfg.blocks[0].runs[0];
        assert!(run.scheme.g.is_none());
        assert_eq!(run.k_grid, vec![10, 20, 30, 40, 50, 60, 70, 80, 90]);
        assert_eq!(run.master_seed, 9);
        assert_eq!(run.estimators.last().unwrap().id(), "bias-reduced");
    }
}
