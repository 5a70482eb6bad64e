//! `setconc`: concentration bounds, certificates, and eigenvalue estimates
//! for finite metric measure spaces and reversible Markov chains.
//!
//! Exit codes: 0 success, 1 malformed input, 2 well-formed but infeasible
//! preconditions (e.g. a measure vector outside Delta_k), 3 certification
//! failure (a theorem check failed — a bug, not a user error), 64 usage.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use setconc::bounds;
use setconc::lipschitz::{extend, ExtensionSide};
use setconc::models::{self, ScalingConvention};
use setconc::profile;
use setconc::space::{EnlargeMode, SetFamily};
use setconc::spectral::spectrum;

use io::{BoundReportOut, Carrier, CertificateOut, CompareOut, EigenBoundOut, FunctionOut, InputSpec, ModelOut, SpectrumOut};

#[derive(Parser)]
#[command(name = "setconc", version, about = "Multi-set concentration bounds and eigenvalue estimates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Closed,
}

impl Mode {
    fn to_core(self) -> EnlargeMode {
        match self {
            Mode::Strict => EnlargeMode::Strict,
            Mode::Closed => EnlargeMode::Closed,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate an input file, reporting its shape.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Eigenvalues of I - p on L^2(mu) (chain or graph inputs).
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Concentration bound curves certified against exact enlargements.
    Bound {
        #[command(subcommand)]
        which: BoundCmd,
    },
    /// Certify the one-step Markov inequality and its iterates exactly.
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sets: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenvalue upper bounds from a separated set family.
    EstimateEig {
        #[command(subcommand)]
        which: EstimateCmd,
    },
    /// Crossover inequality a1^(1+c) <= 4^c a0^(1-c) between the two bounds.
    CompareCgy {
        a1: f64,
        a0: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Search for a family of k sets minimizing the main eigenvalue bound.
    SearchSets {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed-form model spectra (sphere, Gaussian, log-concave bound).
    Model {
        #[command(subcommand)]
        which: ModelCmd,
    },
    /// McShane-Whitney extension of a partial 1-Lipschitz function.
    Extend {
        #[arg(long)]
        input: PathBuf,
        /// JSON array of 0-based indices (the domain A).
        #[arg(long)]
        set: PathBuf,
        /// JSON array of values of f on A, parallel to --set.
        #[arg(long)]
        values: PathBuf,
        #[arg(long, value_enum)]
        which: WhichExtension,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The profile Psi(x) = sup_{t>=1} floor(t) log(1 + x/t^2).
    Psi { x: f64 },
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Main multi-set bound over (0, separation/2].
    Main {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sets: PathBuf,
        /// Use the sharper Psi-exponent form instead of the c-form.
        #[arg(long)]
        psi_form: bool,
        #[arg(long)]
        mode: Option<Mode>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Markov-chain bound at integer steps 1..floor(separation/2).
    Markov {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sets: PathBuf,
        /// Evaluate only steps up to this n.
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The two bounds that need no Delta_k assumption.
    Alt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sets: PathBuf,
        #[arg(long)]
        mode: Option<Mode>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Staged bound past coalescence radii, using the deeper spectrum.
    Iterated {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sets: PathBuf,
        /// Largest radius to sample (default: the diameter).
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        mode: Option<Mode>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum EstimateCmd {
    Main {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sets: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    Alt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sets: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    Cgy {
        #[arg(long)]
        input: PathBuf,
        /// k+1 pairwise-separated sets.
        #[arg(long)]
        sets: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scaling {
    Geometric,
    PaperPrinted,
}

impl Scaling {
    fn to_core(self) -> ScalingConvention {
        match self {
            Scaling::Geometric => ScalingConvention::Geometric,
            Scaling::PaperPrinted => ScalingConvention::PaperPrinted,
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    rho: f64,
    #[arg(long)]
    k: u128,
    #[arg(long, value_enum, default_value = "geometric")]
    scaling: Scaling,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Subcommand)]
enum ModelCmd {
    Sphere(ModelArgs),
    Gaussian(ModelArgs),
    Logconcave(ModelArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichExtension {
    Upper,
    Lower,
}

enum CliError {
    /// Malformed input: bad file, bad JSON, failed validation.
    Validation(String),
    /// Well-formed input, infeasible precondition.
    Infeasible(String),
    /// A theorem check failed on a concrete instance.
    Certification(String),
}

impl From<setconc::Error> for CliError {
    fn from(e: setconc::Error) -> Self {
        if e.is_infeasible() {
            CliError::Infeasible(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(64);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Certification(msg)) => {
            eprintln!("certification failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn load_carrier(path: &PathBuf) -> CliResult<Carrier> {
    let spec: InputSpec = read_json(path)?;
    Ok(Carrier::from_spec(spec)?)
}

fn load_family(carrier: &Carrier, path: &PathBuf) -> CliResult<SetFamily> {
    let sets: Vec<Vec<usize>> = read_json(path)?;
    Ok(SetFamily::new(carrier.ambient(), sets)?)
}

fn require_chain<'a>(carrier: &'a Carrier) -> CliResult<&'a setconc::space::ReversibleChain> {
    carrier.chain().ok_or_else(|| {
        CliError::Validation("this command needs an operator: provide a chain or graph input".into())
    })
}

fn emit<T: Serialize>(value: &T, csv: Option<String>, out: &OutputArgs) -> CliResult<()> {
    let text = match out.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => csv.ok_or_else(|| {
            CliError::Validation("csv format is not available for this report".into())
        })?,
    };
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn chain_lambda(carrier: &Carrier, k: usize) -> CliResult<f64> {
    let chain = require_chain(carrier)?;
    Ok(spectrum(chain)?.lambda(k))
}

fn run(cmd: Cmd) -> CliResult<()> {
    match cmd {
        Cmd::Validate { input } => {
            let carrier = load_carrier(&input)?;
            #[derive(Serialize)]
            struct ValidOut {
                kind: &'static str,
                n: usize,
                diameter: f64,
            }
            let (kind, n, diameter) = match &carrier {
                Carrier::Space(s) => ("space", setconc::space::Ambient::n(s), setconc::space::Ambient::diameter(s)),
                Carrier::Chain(c) => ("chain", setconc::space::Ambient::n(c), setconc::space::Ambient::diameter(c)),
            };
            emit(&ValidOut { kind, n, diameter }, None, &OutputArgs { output: None, format: Format::Json })
        }
        Cmd::Spectrum { input, out } => {
            let carrier = load_carrier(&input)?;
            let chain = require_chain(&carrier)?;
            let sp = spectrum(chain)?;
            let report = SpectrumOut::new(&sp);
            let csv = report.csv();
            emit(&report, Some(csv), &out)
        }
        Cmd::Bound { which } => run_bound(which),
        Cmd::Certify { input, sets, out } => {
            let carrier = load_carrier(&input)?;
            let chain = require_chain(&carrier)?;
            let family = load_family(&carrier, &sets)?;
            let cert = profile::certify_step(chain, &family)?;
            let report = CertificateOut::new(&cert);
            let csv = report.csv();
            emit(&report, Some(csv), &out)?;
            if !cert.pass {
                return Err(CliError::Certification(format!(
                    "one-step inequality violated: min slack {}",
                    cert.min_slack
                )));
            }
            Ok(())
        }
        Cmd::EstimateEig { which } => run_estimate(which),
        Cmd::CompareCgy { a1, a0, out } => {
            let cmp = bounds::compare_cgy(a1, a0)?;
            let report = CompareOut {
                verdict: match cmp.verdict {
                    bounds::CgyVerdict::Ours => "ours",
                    bounds::CgyVerdict::Theirs => "theirs",
                    bounds::CgyVerdict::Tie => "tie",
                },
                lhs: cmp.lhs,
                rhs: cmp.rhs,
            };
            emit(&report, None, &out)
        }
        Cmd::SearchSets { input, k, budget, seed, out } => {
            let carrier = load_carrier(&input)?;
            let best = bounds::search_families(carrier.ambient(), k, budget, seed)?;
            emit(&EigenBoundOut::new(&best), None, &out)
        }
        Cmd::Model { which } => {
            let (level, lower, args) = match which {
                ModelCmd::Sphere(args) => {
                    (models::sphere_lookup(args.n, args.k, args.rho, args.scaling.to_core())?, None, args)
                }
                ModelCmd::Gaussian(args) => {
                    (models::gaussian_lookup(args.n, args.k, args.rho, args.scaling.to_core())?, None, args)
                }
                ModelCmd::Logconcave(args) => {
                    (models::logconcave_lower(args.n, args.k, args.rho, args.scaling.to_core())?, Some(true), args)
                }
            };
            let report = ModelOut {
                level: level.level,
                eigenvalue: level.eigenvalue,
                multiplicity: level.multiplicity,
                cumulative: level.cumulative,
                lower_bound: lower,
            };
            emit(&report, None, &args.out)
        }
        Cmd::Extend { input, set, values, which, out } => {
            let carrier = load_carrier(&input)?;
            let a: Vec<usize> = read_json(&set)?;
            let f_on_a: Vec<f64> = read_json(&values)?;
            let side = match which {
                WhichExtension::Upper => ExtensionSide::Upper,
                WhichExtension::Lower => ExtensionSide::Lower,
            };
            let g = extend(carrier.ambient(), &a, &f_on_a, side)?;
            let report = FunctionOut {
                values: g.values().to_vec(),
                lipschitz_constant: g.lipschitz_constant(),
            };
            emit(&report, None, &out)
        }
        Cmd::Psi { x } => {
            let value = profile::psi_big(x)?;
            println!("{value}");
            Ok(())
        }
    }
}

const CURVE_SAMPLES: usize = 32;

fn run_bound(which: BoundCmd) -> CliResult<()> {
    match which {
        BoundCmd::Main { input, sets, psi_form, mode, out } => {
            let carrier = load_carrier(&input)?;
            let family = load_family(&carrier, &sets)?;
            let lambda = chain_lambda(&carrier, family.k())?;
            let report = profile::report_main(
                carrier.ambient(),
                &family,
                lambda,
                CURVE_SAMPLES,
                psi_form,
                mode.map(Mode::to_core),
            )?;
            let report = BoundReportOut::new(&report);
            let csv = report.csv();
            emit(&report, Some(csv), &out)
        }
        BoundCmd::Markov { input, sets, n, out } => {
            let carrier = load_carrier(&input)?;
            let chain = require_chain(&carrier)?;
            let family = load_family(&carrier, &sets)?;
            let lambda = spectrum(chain)?.lambda(family.k());
            let mut report = profile::report_markov(chain, &family, lambda)?;
            if let Some(n) = n {
                if n < 1 || (n as usize) > report.curve.len() {
                    return Err(setconc::Error::RadiusTooLarge.into());
                }
                report.curve.truncate(n as usize);
                report.validity.1 = n as f64;
            }
            let report = BoundReportOut::new(&report);
            let csv = report.csv();
            emit(&report, Some(csv), &out)
        }
        BoundCmd::Alt { input, sets, mode, out } => {
            let carrier = load_carrier(&input)?;
            let family = load_family(&carrier, &sets)?;
            let lambda = chain_lambda(&carrier, family.k())?;
            let (product, power) = profile::report_alternative(
                carrier.ambient(),
                &family,
                lambda,
                CURVE_SAMPLES,
                mode.map(Mode::to_core),
            )?;
            #[derive(Serialize)]
            struct Both {
                product: BoundReportOut,
                power: BoundReportOut,
            }
            let product = BoundReportOut::new(&product);
            let power = BoundReportOut::new(&power);
            let mut csv = product.csv();
            csv.push_str(&power.csv());
            emit(&Both { product, power }, Some(csv), &out)
        }
        BoundCmd::Iterated { input, sets, r, mode, out } => {
            let carrier = load_carrier(&input)?;
            let chain = require_chain(&carrier)?;
            let family = load_family(&carrier, &sets)?;
            let eigen = spectrum(chain)?.eigenvalues().to_vec();
            let r_max = r.unwrap_or_else(|| setconc::space::Ambient::diameter(chain));
            let report = profile::report_iterated(
                carrier.ambient(),
                &family,
                &eigen,
                r_max,
                CURVE_SAMPLES,
                mode.map(Mode::to_core),
            )?;
            let report = BoundReportOut::new(&report);
            let csv = report.csv();
            emit(&report, Some(csv), &out)
        }
    }
}

fn run_estimate(which: EstimateCmd) -> CliResult<()> {
    match which {
        EstimateCmd::Main { input, sets, out } => {
            let carrier = load_carrier(&input)?;
            let family = load_family(&carrier, &sets)?;
            let result = bounds::eig_upper_main(carrier.ambient(), &family)?;
            // on chains the exact discrete inversion is reported alongside
            if let Some(chain) = carrier.chain() {
                #[derive(Serialize)]
                struct WithTwin {
                    main: EigenBoundOut,
                    discrete: EigenBoundOut,
                }
                let twin = bounds::eig_upper_discrete(chain, &family)?;
                return emit(
                    &WithTwin { main: EigenBoundOut::new(&result), discrete: EigenBoundOut::new(&twin) },
                    None,
                    &out,
                );
            }
            emit(&EigenBoundOut::new(&result), None, &out)
        }
        EstimateCmd::Alt { input, sets, out } => {
            let carrier = load_carrier(&input)?;
            let family = load_family(&carrier, &sets)?;
            let (alt1, alt2) = bounds::eig_upper_alt(carrier.ambient(), &family)?;
            #[derive(Serialize)]
            struct Both {
                alt1: EigenBoundOut,
                alt2: EigenBoundOut,
            }
            emit(&Both { alt1: EigenBoundOut::new(&alt1), alt2: EigenBoundOut::new(&alt2) }, None, &out)
        }
        EstimateCmd::Cgy { input, sets, out } => {
            let carrier = load_carrier(&input)?;
            let sets: Vec<Vec<usize>> = read_json(&sets)?;
            let result = bounds::eig_upper_cgy(carrier.ambient(), &sets)?;
            emit(&EigenBoundOut::new(&result), None, &out)
        }
    }
}
