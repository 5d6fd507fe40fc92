use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tailkern::commands::{cmd_asymptotics, cmd_estimate, cmd_select_k, cmd_simulate};
use tailkern::estimators::{EstimatorOptions, Tau1Source};
use tailkern::{BabKernel, CensoringScheme, Error, Estimator, Family, Kernel, ParetoTypeModel, Variant};

/// Tail-index estimation for randomly right-censored heavy-tailed data.
#[derive(Debug, Parser)]
#[command(name = "tailkern", version)]
struct Cli {
    /// Master seed for simulations (overrides the config's `seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory receiving simulation output.
    #[arg(long, global = true, default_value = ".")]
    output_dir: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimator paths of a `z,delta` data file, as CSV on stdout.
    Estimate(EstimateArgs),
    /// Monte-Carlo study described by a config file.
    Simulate {
        config: PathBuf,
    },
    /// Asymptotic constants and optimal k per kernel for one scheme.
    Asymptotics(AsymptoticsArgs),
    /// Reiss-Thomas choice of k from a path CSV.
    SelectK {
        input: PathBuf,
        #[arg(long, default_value_t = tailkern::selection::DEFAULT_NU)]
        nu: f64,
        #[arg(long)]
        k_min: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Shifted,
    Unshifted,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    input: PathBuf,
    /// Estimator ids, repeated or comma separated.
    #[arg(long = "estimator", value_delimiter = ',', default_values_t = ["efg".to_string(), "worms".into(), "kernel".into(), "bab".into()])]
    estimators: Vec<String>,
    #[arg(long, default_value = "triweight")]
    kernel: String,
    #[arg(long, default_value = "bab2")]
    bab_kernel: String,
    #[arg(long, value_enum, default_value_t = VariantArg::Shifted)]
    variant: VariantArg,
    /// Known second-order parameter of the bias-reduced estimator.
    #[arg(long, conflicts_with = "adaptive")]
    beta1: Option<f64>,
    /// Choose the bias-reduction parameter from the data.
    #[arg(long)]
    adaptive: bool,
    #[arg(long)]
    k_min: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
}

#[derive(Debug, Args)]
struct AsymptoticsArgs {
    #[arg(long, default_value = "burr")]
    family_f: String,
    #[arg(long)]
    gamma_f: f64,
    #[arg(long, default_value_t = 1.0)]
    zeta_f: f64,
    /// Censoring family, or `none`.
    #[arg(long, default_value = "burr")]
    family_g: String,
    #[arg(long)]
    gamma_g: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    zeta_g: f64,
    /// Kernels, repeated or comma separated.
    #[arg(long = "kernel", value_delimiter = ',', default_values_t = ["indicator".to_string(), "biweight".into(), "triweight".into(), "quadweight".into()])]
    kernels: Vec<String>,
    #[arg(long, default_value_t = 500)]
    n: usize,
}

fn parse_bab(s: &str) -> Result<BabKernel, Error> {
    match s {
        "bab0" | "0" => Ok(BabKernel::Zero),
        "bab1" | "1" => Ok(BabKernel::One),
        "bab2" | "2" => Ok(BabKernel::Two),
        other => Err(Error::Config(format!("unknown BAB kernel {other:?}"))),
    }
}

fn estimate(args: &EstimateArgs) -> Result<String, Error> {
    let bias_reduction = match (args.beta1, args.adaptive) {
        (Some(b), _) => {
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::Config(format!("beta1 must be positive, got {b}")));
            }
            Some(Tau1Source::KnownBeta1(b))
        }
        (None, true) => Some(Tau1Source::AdaptiveGrid { k_step: 5 }),
        (None, false) => None,
    };
    let opts = EstimatorOptions {
        kernel: args.kernel.parse()?,
        bab_kernel: parse_bab(&args.bab_kernel)?,
        variant: match args.variant {
            VariantArg::Shifted => Variant::Shifted,
            VariantArg::Unshifted => Variant::Unshifted,
        },
        bias_reduction,
    };
    let estimators = args
        .estimators
        .iter()
        .map(|id| Estimator::from_id(id, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    cmd_estimate(&args.input, &estimators, args.k_min, args.k_max)
}

fn asymptotics(args: &AsymptoticsArgs) -> Result<String, Error> {
    let f = ParetoTypeModel::new(args.family_f.parse::<Family>()?, args.gamma_f, args.zeta_f)?;
    let scheme = if args.family_g == "none" {
        CensoringScheme::uncensored(f)
    } else {
        let gamma_g = args
            .gamma_g
            .ok_or_else(|| Error::Config("--gamma-g is required unless --family-g none".into()))?;
        let g = ParetoTypeModel::new(args.family_g.parse::<Family>()?, gamma_g, args.zeta_g)?;
        CensoringScheme::new(f, g)
    };
    let kernels = args
        .kernels
        .iter()
        .map(|k| k.parse::<Kernel>())
        .collect::<Result<Vec<_>, _>>()?;
    cmd_asymptotics(&scheme, &kernels, args.n)
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Estimate(args) => print!("{}", estimate(args)?),
        Command::Simulate { config } => {
            let report = cmd_simulate(config, &cli.output_dir, cli.seed, cli.threads)?;
            for f in &report.files {
                eprintln!("wrote {}", f.display());
            }
            print!("{}", report.selection_table);
        }
        Command::Asymptotics(args) => print!("{}", asymptotics(args)?),
        Command::SelectK { input, nu, k_min, k_max } => {
            print!("{}", cmd_select_k(input, *nu, *k_min, *k_max)?)
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
