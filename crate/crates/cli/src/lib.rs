//! Command-line front end: argument parsing, dispatch, exit codes.
//!
//! Every run prints its resolved configuration as `# key=value` lines
//! before computing anything. Exit codes: 0 success, 1 bad usage or input,
//! 2 numerical failure.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use oaa_core::experiments::{
    run_ensemble, run_trace, summarize, write_ensemble, write_traces, ExperimentConfig, ExperimentKind, FinalRule,
    PreparedCase,
};
use oaa_core::io::{format_matrix, format_vector, read_matrix, read_vector, write_matrix};
use oaa_core::linalg::norm2;
use oaa_core::matfunc::{
    chained_product_circuit, cos_product_factors, exp_product_factors, ChainedResult, ProductPlan,
};
use oaa_core::{closeness, iteration_count, Embedding, Error, FidelityMode, Mat, Variant};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "OAA_THREADS";

#[derive(Debug, Parser)]
#[command(name = "oaa", version, about = "Block-encode symmetric matrices and amplify them obliviously")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed a symmetric matrix and report how close the embedding is to orthogonal.
    Embed(EmbedArgs),
    /// Amplify one input through one matrix and emit the iteration trace.
    Amplify(AmplifyArgs),
    /// Seeded random-matrix experiments written as CSV and SVG.
    Experiment(ExperimentArgs),
    /// Apply a product of symmetric factors stage by stage.
    Product(ProductArgs),
    /// Approximate exp(A) or cos(πA) by a truncated product.
    Matfunc(MatfuncArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Literal,
    Adjoint,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Literal => Variant::Literal,
            VariantArg::Adjoint => Variant::Adjoint,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FidelityArg {
    Embedded,
    Projected,
}

impl From<FidelityArg> for FidelityMode {
    fn from(f: FidelityArg) -> Self {
        match f {
            FidelityArg::Embedded => FidelityMode::Embedded,
            FidelityArg::Projected => FidelityMode::Projected,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FinalArg {
    /// Best success probability within the first k iterations.
    Peak,
    /// Exactly k iterations.
    Last,
}

impl From<FinalArg> for FinalRule {
    fn from(f: FinalArg) -> Self {
        match f {
            FinalArg::Peak => FinalRule::Peak,
            FinalArg::Last => FinalRule::Last,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Ensemble,
    Fixed,
    Trace,
}

impl From<KindArg> for ExperimentKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Ensemble => ExperimentKind::Ensemble,
            KindArg::Fixed => ExperimentKind::FixedMatrix,
            KindArg::Trace => ExperimentKind::Trace,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    Exp,
    Cos,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Use the exact sqrt(I - A^2) coupling instead of the row-norm estimate.
    #[arg(long)]
    pub exact: bool,
    /// Write the embedded matrix here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StageArgs {
    #[arg(long, value_enum, default_value_t = VariantArg::Literal)]
    pub variant: VariantArg,
    #[arg(long = "final", value_enum, default_value_t = FinalArg::Peak)]
    pub final_rule: FinalArg,
}

#[derive(Debug, Args)]
pub struct AmplifyArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    /// Iterations; defaults to floor((π/4)·√M) for the embedded order M.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = VariantArg::Literal)]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value_t = FidelityArg::Embedded)]
    pub fidelity: FidelityArg,
    /// Write the trace CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Embedded orders, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "16,32,64,128")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = VariantArg::Literal)]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value_t = FidelityArg::Embedded)]
    pub fidelity: FidelityArg,
    #[arg(long = "final", value_enum, default_value_t = FinalArg::Peak)]
    pub final_rule: FinalArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    /// Factor matrices, applied in the order given.
    #[arg(long, num_args = 1.., required = true)]
    pub factors: Vec<PathBuf>,
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub stage: StageArgs,
    /// Directory for `stages.csv` and `final.txt`; stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MatfuncArgs {
    #[arg(long = "fn", value_enum)]
    pub function: FunctionArg,
    #[arg(long)]
    pub matrix: PathBuf,
    /// k copies of I + A/k for exp; J factor pairs for cos.
    #[arg(long)]
    pub trunc: usize,
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub stage: StageArgs,
    /// Directory for `stages.csv` and `final.txt`; stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failure with its exit code and one-line diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parse `argv` (program name first), run it, and return the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn dispatch(command: &Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Embed(a) => embed(a, out),
        Command::Amplify(a) => amplify(a, out),
        Command::Experiment(a) => experiment(a, out),
        Command::Product(a) => product(a, out),
        Command::Matfunc(a) => matfunc(a, out),
    }
}

/// Size the global worker pool from `OAA_THREADS`, if set.
pub fn configure_threads(value: Option<&str>) -> Outcome {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(format!("cannot size the thread pool: {e}")))
}

fn config(out: &mut dyn Write, pairs: &[(&str, String)]) -> Outcome {
    let mut text = String::new();
    for (k, v) in pairs {
        let _ = writeln!(text, "# {k}={v}");
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn show(p: &Path) -> String {
    p.display().to_string()
}

/// Read a vector and scale it to unit norm.
fn read_unit_vector(path: &Path) -> std::result::Result<(Vec<f64>, f64), Failure> {
    let v: Vec<f64> = read_vector(path)?;
    let n = norm2(&v);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroVector.into());
    }
    Ok((v.iter().map(|x| x / n).collect(), n))
}

fn embed(a: &EmbedArgs, out: &mut dyn Write) -> Outcome {
    config(
        out,
        &[
            ("command", "embed".into()),
            ("matrix", show(&a.matrix)),
            ("embedding", if a.exact { "exact" } else { "estimated" }.into()),
            ("out", a.out.as_deref().map_or("-".into(), show)),
        ],
    )?;
    let m: Mat = read_matrix(&a.matrix)?;
    let e = if a.exact { Embedding::exact(&m)? } else { Embedding::estimated(&m)? };
    let r = closeness(&e.u)?;
    let text = format!("mu={:?}\nc2={:?}\ncF={:?}\nphi={:?}\nef={:?}\n", e.mu, r.c2, r.c_frobenius, r.phi, r.ef);
    out.write_all(text.as_bytes())?;
    match &a.out {
        Some(path) => write_matrix(path, &e.u)?,
        None => out.write_all(format_matrix(&e.u).as_bytes())?,
    }
    Ok(())
}

fn amplify(a: &AmplifyArgs, out: &mut dyn Write) -> Outcome {
    let m: Mat = read_matrix(&a.matrix)?;
    let (input, input_norm) = read_unit_vector(&a.input)?;
    let case = PreparedCase::new(&m)?;
    let k = a.k.unwrap_or_else(|| iteration_count(case.circuit.m_dim()));
    let variant: Variant = a.variant.into();
    let mode: FidelityMode = a.fidelity.into();
    config(
        out,
        &[
            ("command", "amplify".into()),
            ("matrix", show(&a.matrix)),
            ("input", show(&a.input)),
            ("input_norm", format!("{:?}", input_norm)),
            ("mu", format!("{:?}", case.embedding.mu)),
            ("order", case.circuit.m_dim().to_string()),
            ("k", k.to_string()),
            ("variant", variant.to_string()),
            ("fidelity", a.fidelity.to_possible_value().expect("named").get_name().into()),
            ("c2", format!("{:?}", case.closeness.c2)),
            ("ef", format!("{:?}", case.closeness.ef)),
        ],
    )?;
    let trace = case.trace(&input, k, variant, mode)?;
    emit(out, a.out.as_deref(), &trace.to_csv())
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn experiment(a: &ExperimentArgs, out: &mut dyn Write) -> Outcome {
    let cfg = ExperimentConfig {
        dims: a.dims.clone(),
        trials: a.trials,
        seed: a.seed,
        variant: a.variant.into(),
        fidelity_mode: a.fidelity.into(),
        experiment: a.kind.into(),
        final_rule: a.final_rule.into(),
    };
    let dims: Vec<String> = cfg.dims.iter().map(usize::to_string).collect();
    config(
        out,
        &[
            ("command", "experiment".into()),
            ("kind", a.kind.to_possible_value().expect("named").get_name().into()),
            ("dims", dims.join(",")),
            ("trials", cfg.trials.to_string()),
            ("seed", cfg.seed.to_string()),
            ("variant", cfg.variant.to_string()),
            ("fidelity", a.fidelity.to_possible_value().expect("named").get_name().into()),
            ("final", a.final_rule.to_possible_value().expect("named").get_name().into()),
            ("out", show(&a.out)),
        ],
    )?;
    cfg.validate()?;
    let mut text = String::new();
    let written = match cfg.experiment {
        ExperimentKind::Trace => {
            let series = run_trace::<f64>(&cfg)?;
            for s in &series {
                let peak = s.trace.peak_within(s.k_marker);
                let _ = writeln!(
                    text,
                    "dim={} k={} ef={:?} peak_iteration={} peak_probability={:?} peak_fidelity={:?}",
                    s.dim, s.k_marker, s.closeness.ef, peak.iteration, peak.probability, peak.fidelity
                );
            }
            write_traces(&series, &a.out)?
        }
        _ => {
            let records = run_ensemble::<f64>(&cfg)?;
            let s = summarize(&records);
            for (d, f, p) in &s.per_dim {
                let _ = writeln!(text, "dim={d} mean_fidelity={f:?} mean_probability={p:?}");
            }
            let _ = writeln!(
                text,
                "pooled runs={} mean_fidelity={:?} mean_probability={:?} mean_ef={:?} above_ef={:?}",
                s.count, s.mean_fidelity, s.mean_probability, s.mean_ef, s.above_ef
            );
            write_ensemble(&records, &a.out)?
        }
    };
    for p in written {
        let _ = writeln!(text, "wrote {}", p.display());
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn product(a: &ProductArgs, out: &mut dyn Write) -> Outcome {
    let factors = a.factors.iter().map(read_matrix::<f64>).collect::<oaa_core::Result<Vec<_>>>()?;
    let plan = ProductPlan::custom(factors)?;
    let (input, input_norm) = read_unit_vector(&a.input)?;
    let names: Vec<String> = a.factors.iter().map(|p| show(p)).collect();
    config(
        out,
        &[
            ("command", "product".into()),
            ("factors", names.join(",")),
            ("input", show(&a.input)),
            ("input_norm", format!("{:?}", input_norm)),
            ("variant", Variant::from(a.stage.variant).to_string()),
            ("final", a.stage.final_rule.to_possible_value().expect("named").get_name().into()),
        ],
    )?;
    let result = chained_product_circuit(&plan, &input, a.stage.variant.into(), a.stage.final_rule.into())?;
    let classical = plan.classical_product().mat_vec(&input)?;
    finish_chain(out, a.out.as_deref(), &result, &classical)
}

fn matfunc(a: &MatfuncArgs, out: &mut dyn Write) -> Outcome {
    if a.trunc == 0 {
        return Err(usage("--trunc must be at least 1"));
    }
    let m: Mat = read_matrix(&a.matrix)?;
    let (input, input_norm) = read_unit_vector(&a.input)?;
    let plan = match a.function {
        FunctionArg::Exp => exp_product_factors(&m, a.trunc)?,
        FunctionArg::Cos => cos_product_factors(&m, a.trunc)?,
    };
    config(
        out,
        &[
            ("command", "matfunc".into()),
            ("fn", a.function.to_possible_value().expect("named").get_name().into()),
            ("matrix", show(&a.matrix)),
            ("trunc", a.trunc.to_string()),
            ("factors", plan.factors.len().to_string()),
            ("input", show(&a.input)),
            ("input_norm", format!("{:?}", input_norm)),
            ("variant", Variant::from(a.stage.variant).to_string()),
            ("final", a.stage.final_rule.to_possible_value().expect("named").get_name().into()),
        ],
    )?;
    let result = chained_product_circuit(&plan, &input, a.stage.variant.into(), a.stage.final_rule.into())?;
    let oracle = plan.target_oracle.as_ref().expect("named functions carry an oracle");
    let exact = oracle.mat_vec(&input)?;
    let mut summary = String::new();
    let _ = writeln!(summary, "# fidelity_vs_function={:?}", fidelity_or_nan(&result, &exact));
    out.write_all(summary.as_bytes())?;
    let classical = plan.classical_product().mat_vec(&input)?;
    finish_chain(out, a.out.as_deref(), &result, &classical)
}

fn fidelity_or_nan(result: &ChainedResult<f64>, target: &[f64]) -> f64 {
    result.fidelity_against(target).unwrap_or(f64::NAN)
}

/// Stage CSV plus the final unit vector, to `dir` or stdout.
fn finish_chain(out: &mut dyn Write, dir: Option<&Path>, result: &ChainedResult<f64>, classical: &[f64]) -> Outcome {
    let mut summary = String::new();
    let _ = writeln!(summary, "# fidelity_vs_classical_product={:?}", fidelity_or_nan(result, classical));
    let _ = writeln!(summary, "# total_scale={:?}", result.total_scale());
    out.write_all(summary.as_bytes())?;
    let stages = result.stages_csv();
    let vector = format_vector(&result.collapsed);
    match dir {
        Some(d) => {
            fs::create_dir_all(d)?;
            fs::write(d.join("stages.csv"), stages)?;
            fs::write(d.join("final.txt"), vector)?;
            let _ = writeln!(out, "wrote {}", d.join("stages.csv").display());
            let _ = writeln!(out, "wrote {}", d.join("final.txt").display());
        }
        None => {
            out.write_all(stages.as_bytes())?;
            out.write_all(b"\n")?;
            out.write_all(vector.as_bytes())?;
        }
    }
    Ok(())
}
