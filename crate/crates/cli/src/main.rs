mod targets;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use homolattice::codes::{distance, logical_operators_of_complex, DecoderStrategy, DEFAULT_DECODER_CAP};
use homolattice::complex::CanonicalForm;
use homolattice::gf2::independent_subset;
use homolattice::ftgate::{
    build_protocol, check_band_confinement, check_band_theorem, cross_check_syndromes, fault_injection_run,
    single_fault_sweep, sparsity_profile, transversal_layer, Axis, CheckMode, CorrectAt, ErrorModel, GateSchedule,
    ProtocolDecoder, TransversalKind,
};
use homolattice::hprod::{product_params, ProductCode, ProductReport};
use serde::{Deserialize, Serialize};

use targets::{load_code, load_product, load_target, require_product, Target};

const EXIT_FAILURE: u8 = 1;
const EXIT_CAP: u8 = 3;
const DEFAULT_DISTANCE_CAP: usize = 8;
const DEFAULT_ENUM_CAP: u128 = 100_000_000;

#[derive(Parser)]
#[command(name = "homolattice", version, about = "Homological product codes and partial-decode logical gates")]
struct Cli {
    /// Worker threads for sweeps, Monte Carlo runs and distance searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// TOML file with default option values; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a catalog code or a code file, optionally writing text and JSON artifacts.
    Build {
        /// Catalog name, `.json` CSS code or GF(2) boundary text file.
        code: String,
        #[arg(long, value_enum, default_value_t = BuildFormat::Text)]
        format: BuildFormat,
        /// Directory receiving `<name>.txt` and `<name>.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homological product of two codes: parameter report, optional boundary file.
    Product {
        a: String,
        b: String,
        /// Writes the product boundary in GF(2) text form.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest logical weight searched when computing factor distances.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Run invariant checks on a code or product.
    Verify {
        #[arg(long = "check", value_enum, required = true)]
        checks: Vec<Check>,
        /// Code, `a*b` product, `prod147` or `prod422`.
        target: String,
        #[arg(long, default_value_t = 1)]
        axis: usize,
        #[arg(long, default_value_t = 1)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Refuse exhaustive enumerations above this many candidates.
        #[arg(long)]
        enum_cap: Option<u128>,
        #[arg(long)]
        cap: Option<usize>,
        /// Unencoded factor for the schedule-based checks.
        #[arg(long, default_value_t = 2)]
        unencode: usize,
    },
    /// Exact X and Z distances, or a lower bound when above the cap.
    Distance {
        target: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Build a gate schedule and run a single-fault sweep or Monte Carlo fault injection.
    Protocol {
        product: String,
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[arg(long, value_enum)]
        sweep: Option<Sweep>,
        #[arg(long, value_enum)]
        correct: Option<Correct>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also inject faults on qubits idle during a layer.
        #[arg(long)]
        idle: bool,
        #[arg(long, value_enum)]
        decoder: Option<DecoderArg>,
        /// Writes the report JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Writes the gate schedule in circuit text form.
        #[arg(long)]
        schedule_out: Option<PathBuf>,
    },
    /// Sparsity of the conjugated boundary after every layer of a schedule.
    Profile {
        product: String,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
}

#[derive(Args)]
struct ScheduleArgs {
    /// Factor (1 or 2) whose encoder is undone.
    #[arg(long)]
    unencode: usize,
    #[arg(long, value_enum, default_value_t = GateArg::None)]
    gate: GateArg,
    /// Logical block receiving the transversal layer.
    #[arg(long, default_value_t = 0)]
    block: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildFormat {
    Text,
    Json,
    Stabilizers,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    BoundarySquared,
    KernelIdentity,
    CanonicalForm,
    DistanceWindow,
    BandTheorem,
    BandConfinement,
    SyndromeMapping,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sweep {
    SingleFault,
}

#[derive(Clone, Copy, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Correct {
    None,
    End,
    EveryStep,
}

impl From<Correct> for CorrectAt {
    fn from(c: Correct) -> Self {
        match c {
            Correct::None => CorrectAt::None,
            Correct::End => CorrectAt::End,
            Correct::EveryStep => CorrectAt::EveryStep,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DecoderArg {
    Lookup,
    Minweight,
}

impl From<DecoderArg> for DecoderStrategy {
    fn from(d: DecoderArg) -> Self {
        match d {
            DecoderArg::Lookup => DecoderStrategy::Lookup,
            DecoderArg::Minweight => DecoderStrategy::MinWeight,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GateArg {
    None,
    H,
    S,
    Sdg,
    X,
    Z,
    T,
    Cx,
}

impl GateArg {
    fn kind(self) -> Option<TransversalKind> {
        Some(match self {
            GateArg::None => return None,
            GateArg::H => TransversalKind::H,
            GateArg::S => TransversalKind::S,
            GateArg::Sdg => TransversalKind::Sdg,
            GateArg::X => TransversalKind::X,
            GateArg::Z => TransversalKind::Z,
            GateArg::T => TransversalKind::T,
            GateArg::Cx => TransversalKind::Cx,
        })
    }
}

/// Defaults read from `--config`.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    jobs: Option<usize>,
    seed: Option<u64>,
    p: Option<f64>,
    trials: Option<u64>,
    cap: Option<usize>,
    enum_cap: Option<u128>,
    correct: Option<Correct>,
    decoder: Option<DecoderArg>,
}

impl Config {
    fn load(path: Option<&Path>) -> Result<Config> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Flag, then config file, then `HOMOLATTICE_SEED`, then 0.
    fn seed(&self, flag: Option<u64>) -> Result<u64> {
        if let Some(s) = flag.or(self.seed) {
            return Ok(s);
        }
        match std::env::var("HOMOLATTICE_SEED") {
            Ok(v) => v.trim().parse().with_context(|| format!("HOMOLATTICE_SEED={v:?} is not an integer")),
            Err(_) => Ok(0),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let cap = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<homolattice::Error>(), Some(homolattice::Error::CapExceeded { .. })));
            ExitCode::from(if cap { EXIT_CAP } else { EXIT_FAILURE })
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let config = Config::load(cli.config.as_deref())?;
    if let Some(jobs) = cli.jobs.or(config.jobs) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Build { code, format, out } => cmd_build(&code, format, out.as_deref()),
        Command::Product { a, b, out, cap } => {
            cmd_product(&a, &b, out.as_deref(), cap.or(config.cap).unwrap_or(DEFAULT_DISTANCE_CAP))
        }
        Command::Verify {
            checks,
            target,
            axis,
            budget,
            mode,
            samples,
            seed,
            enum_cap,
            cap,
            unencode,
        } => {
            let mode = match mode {
                Mode::Exhaustive => CheckMode::Exhaustive {
                    cap: enum_cap.or(config.enum_cap).unwrap_or(DEFAULT_ENUM_CAP),
                },
                Mode::Sampled => CheckMode::Sampled {
                    samples,
                    seed: config.seed(seed)?,
                },
            };
            let opts = VerifyOptions {
                axis: Axis::from_index(axis)?,
                budget,
                mode,
                cap: cap.or(config.cap).unwrap_or(DEFAULT_DISTANCE_CAP),
                unencode,
            };
            cmd_verify(&checks, &target, &opts)
        }
        Command::Distance { target, cap } => cmd_distance(&target, cap.or(config.cap).unwrap_or(DEFAULT_DISTANCE_CAP)),
        Command::Protocol {
            product,
            schedule,
            sweep,
            correct,
            p,
            trials,
            seed,
            idle,
            decoder,
            out,
            schedule_out,
        } => {
            let (_, product) = require_product(&product)?;
            let s = build_schedule(&product, &schedule)?;
            if let Some(path) = &schedule_out {
                write(path, &s.to_text())?;
            }
            let strategy = decoder.or(config.decoder).unwrap_or(DecoderArg::Lookup).into();
            let decoder = ProtocolDecoder::new(&s, strategy, DEFAULT_DECODER_CAP)?;
            let correct_at: CorrectAt = correct.or(config.correct).unwrap_or(Correct::End).into();
            let (json, code) = match sweep {
                Some(Sweep::SingleFault) => {
                    let report = single_fault_sweep(&s, &decoder, correct_at, idle)?;
                    let code = if report.counts.logical == 0 { 0 } else { EXIT_FAILURE };
                    (to_json(&report), code)
                }
                None => {
                    let p = p.or(config.p).context("Monte Carlo runs need --p")?;
                    let trials = trials.or(config.trials).context("Monte Carlo runs need --trials")?;
                    let model = ErrorModel::new(p, config.seed(seed)?)?.with_idle(idle);
                    (fault_injection_run(&s, &decoder, &model, trials, correct_at)?.to_json(), 0)
                }
            };
            match &out {
                Some(path) => write(path, &json)?,
                None => print!("{json}"),
            }
            Ok(code)
        }
        Command::Profile { product, schedule } => {
            let (_, product) = require_product(&product)?;
            let s = build_schedule(&product, &schedule)?;
            let profile = sparsity_profile(&s);
            #[derive(Serialize)]
            struct Profile<'a> {
                schedule_id: &'a str,
                steps: usize,
                max: usize,
                profile: Vec<usize>,
            }
            print!(
                "{}",
                to_json(&Profile {
                    schedule_id: s.id(),
                    steps: s.len(),
                    max: profile.iter().copied().max().unwrap_or(0),
                    profile,
                })
            );
            Ok(0)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn build_schedule(product: &ProductCode, args: &ScheduleArgs) -> Result<GateSchedule> {
    let layer = match args.gate.kind() {
        Some(kind) => transversal_layer(product, args.unencode, kind, args.block)?,
        None => Vec::new(),
    };
    Ok(build_protocol(product, args.unencode, &layer)?)
}

fn cmd_build(spec: &str, format: BuildFormat, out: Option<&Path>) -> Result<u8> {
    let named = load_code(spec)?;
    let json = named.code.to_json();
    let text = named.complex.as_ref().map(|c| c.boundary().to_text());
    match format {
        BuildFormat::Text => match &text {
            Some(t) => print!("{t}"),
            None => {
                eprintln!("note: {} has no boundary operator; printing JSON", named.name);
                print!("{json}");
            }
        },
        BuildFormat::Json => print!("{json}"),
        BuildFormat::Stabilizers => {
            // independent generators only; boundary rows repeat
            let n = named.code.n();
            for (paulis, gens) in [
                (named.code.x_stabilizer_paulis(), named.code.x_stabilizers()),
                (named.code.z_stabilizer_paulis(), named.code.z_stabilizers()),
            ] {
                for i in independent_subset(n, gens) {
                    println!("{}", paulis[i]);
                }
            }
        }
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let stem: String = named
            .name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '-' })
            .collect();
        if let Some(t) = &text {
            write(&dir.join(format!("{stem}.txt")), t)?;
        }
        write(&dir.join(format!("{stem}.json")), &json)?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct ProductSummary {
    code1: String,
    code2: String,
    n: usize,
    #[serde(flatten)]
    params: ProductReport,
    distances1: homolattice::codes::Distances,
    distances2: homolattice::codes::Distances,
}

fn factor_distances(spec: &str, cap: usize) -> Result<homolattice::codes::Distances> {
    Ok(distance(&load_code(spec)?.code, cap))
}

fn product_summary(a: &str, b: &str, product: &ProductCode, cap: usize) -> Result<ProductSummary> {
    let d1 = factor_distances(a, cap)?;
    let d2 = factor_distances(b, cap)?;
    let pair = |d: homolattice::codes::Distances| (d.x.lower_bound(), d.z.lower_bound());
    Ok(ProductSummary {
        code1: a.to_string(),
        code2: b.to_string(),
        n: product.n(),
        params: product_params(product, pair(d1), pair(d2)),
        distances1: d1,
        distances2: d2,
    })
}

fn cmd_product(a: &str, b: &str, out: Option<&Path>, cap: usize) -> Result<u8> {
    let product = load_product(a, b)?;
    if let Some(path) = out {
        write(path, &product.boundary().to_text())?;
    }
    print!("{}", to_json(&product_summary(a, b, &product, cap)?));
    Ok(0)
}

fn cmd_distance(spec: &str, cap: usize) -> Result<u8> {
    let target = load_target(spec)?;
    let code = target.css();
    #[derive(Serialize)]
    struct Report<'a> {
        code: &'a str,
        n: usize,
        k: usize,
        cap: usize,
        x: homolattice::codes::DistanceBound,
        z: homolattice::codes::DistanceBound,
    }
    let d = distance(&code, cap);
    print!(
        "{}",
        to_json(&Report {
            code: target.name(),
            n: code.n(),
            k: code.k(),
            cap,
            x: d.x,
            z: d.z,
        })
    );
    Ok(0)
}

struct VerifyOptions {
    axis: Axis,
    budget: usize,
    mode: CheckMode,
    cap: usize,
    unencode: usize,
}

fn cmd_verify(checks: &[Check], spec: &str, opts: &VerifyOptions) -> Result<u8> {
    let target = load_target(spec)?;
    let mut failed = 0;
    for &check in checks {
        let (pass, detail) = run_check(check, &target, opts)?;
        let name = check.to_possible_value().expect("no skipped variants").get_name().to_string();
        println!("{} {name} {}: {detail}", if pass { "PASS" } else { "FAIL" }, target.name());
        if !pass {
            failed += 1;
        }
    }
    Ok(if failed == 0 { 0 } else { EXIT_FAILURE })
}

fn product_of<'a>(target: &'a Target, check: &str) -> Result<&'a ProductCode> {
    match target {
        Target::Product { product, .. } => Ok(product),
        Target::Code(c) => bail!("{check} needs a product, got the code `{}`", c.name),
    }
}

fn run_check(check: Check, target: &Target, opts: &VerifyOptions) -> Result<(bool, String)> {
    Ok(match check {
        Check::BoundarySquared => {
            let b = target.complex()?.boundary();
            let sq = b.multiply(b)?;
            (sq.is_zero(), format!("{}x{} boundary", b.rows(), b.cols()))
        }
        Check::KernelIdentity => {
            let c = target.complex()?;
            let logical = logical_operators_of_complex(c).k();
            let code_k = target.css().k();
            let expected = c.n() - 2 * c.rank();
            (
                logical == expected && code_k == expected,
                format!("n - 2 rank = {expected}, logical pairs {logical}, code k {code_k}"),
            )
        }
        Check::CanonicalForm => {
            let c = target.complex()?;
            let cf = CanonicalForm::of_complex(c);
            let w = cf.encoder_circuit.to_matrix();
            let back = w.multiply(&cf.delta0)?.multiply(&w.invert()?)?;
            (
                &back == c.boundary(),
                format!("k={} l={} encoder with {} CNOTs", cf.k, cf.l, cf.encoder_circuit.len()),
            )
        }
        Check::DistanceWindow => {
            let product = product_of(target, "distance-window")?;
            let (a, b) = match target {
                Target::Product { name, .. } => match targets::PRODUCT_ALIASES.iter().find(|(alias, _, _)| alias == name) {
                    Some(&(_, a, b)) => (a.to_string(), b.to_string()),
                    None => {
                        let (a, b) = name.split_once('*').expect("products are named a*b");
                        (a.to_string(), b.to_string())
                    }
                },
                Target::Code(_) => unreachable!("checked above"),
            };
            let summary = product_summary(&a, &b, product, opts.cap)?;
            let d = distance(&product.css(), opts.cap);
            let inside = |bound: homolattice::codes::DistanceBound, (lo, hi): (usize, usize)| match bound.exact() {
                Some(v) => lo <= v && v <= hi,
                None => bound.lower_bound() >= lo && bound.lower_bound() <= hi,
            };
            let wx = summary.params.distance_window_x;
            let wz = summary.params.distance_window_z;
            (
                inside(d.x, wx) && inside(d.z, wz),
                format!("d_X={} in [{}, {}], d_Z={} in [{}, {}]", d.x, wx.0, wx.1, d.z, wz.0, wz.1),
            )
        }
        Check::BandTheorem => {
            let product = product_of(target, "band-theorem")?;
            let r = check_band_theorem(product, opts.axis, opts.budget, opts.mode)?;
            let detail = match &r.counterexample {
                Some(c) => format!("counterexample {c}"),
                None => format!(
                    "axis {} budget {}: {} checked, {} detectable, {} stabilizer",
                    r.axis, r.budget, r.checked, r.detectable, r.stabilizer
                ),
            };
            (r.passed(), detail)
        }
        Check::BandConfinement => {
            let product = product_of(target, "band-confinement")?;
            let s = build_protocol(product, opts.unencode, &[])?;
            let r = check_band_confinement(&s);
            let detail = match &r.first_violation {
                Some(v) => format!("{} of {} faults leave their band, first at layer {}", r.violations, r.faults, v.layer),
                None => format!("{} faults over {} layers stay in one band", r.faults, s.len()),
            };
            (r.violations == 0, detail)
        }
        Check::SyndromeMapping => {
            let product = product_of(target, "syndrome-mapping")?;
            let s = build_protocol(product, opts.unencode, &[])?;
            let r = cross_check_syndromes(&s);
            (r.mismatches == 0, format!("{} mapped syndromes, {} mismatches", r.checked, r.mismatches))
        }
    })
}
