mod commands;
mod spec;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use quatnev::nevanlinna::{FmtForm, KernelConvention};
use quatnev::{LeftPoly, Scheme};

use commands::Outcome;
use spec::{parse_target, Command, ExperimentSpec, Format, FunctionSpec, RadiiSpec};

const AFTER_HELP: &str = "\
Flags override the matching keys of --config. Exit status: 0 when the run's
check passes, 1 when it fails, 2 on bad input or configuration.

CSV columns:
  verify-jensen  convention,r,lhs,mean_log_f,mean_log_f_se,mean_log_fsf,
                 mean_log_fsf_se,boundary,boundary_se,harmonic,j_sum,rhs,residual
  profile        r,n,N,m,m_se,H,T,T_se,A,T_inf,T_inf_se,fmt3,fmt3_se
  fmt-check      r,lhs,rhs,residual,se,envelope
  mpb-check      r,defect,se
  arbiter        r,sphere_re,sphere_im,total_order,chain_count,c,residual,se,best
  algebra-suite  check,kind,r,value,se,tolerance,pass
  selftest       check,residual,pass

Functions are JSON: {\"num\": [[w,x,y,z], ...], \"den\": [[w,x,y,z], ...]}
with coefficients in increasing degree; den is optional.";

#[derive(Parser, Debug)]
#[command(name = "quatnev", version, about = "Numerical Nevanlinna theory for quaternionic slice functions")]
#[command(after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// JSON experiment file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo samples per spherical mean.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, value_enum)]
    scheme: Option<SchemeArg>,
    /// Write the result table here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Kernel weighting for nonreal spheres in the Jensen sum.
    #[arg(long, global = true, value_enum)]
    kernel: Option<KernelArg>,
    /// The function, as JSON, or a comma list of real coefficients.
    #[arg(long, global = true)]
    function: Option<String>,
    /// Second function for algebra-suite.
    #[arg(long, global = true)]
    g: Option<String>,
    /// Target value: `inf`, a real, or `w,x,y,z`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<String>,
    /// Radius for verify-jensen and arbiter.
    #[arg(long, global = true)]
    r: Option<f64>,
    /// Radius grid: `lo:hi:n` (log-spaced) or `r1,r2,...`.
    #[arg(long, global = true)]
    radii: Option<String>,
    /// FMT form for fmt-check.
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=3))]
    form: Option<u8>,
    #[arg(long, global = true)]
    max_slope: Option<f64>,
    #[arg(long, global = true)]
    max_spread: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Check the Jensen formula at one radius under both kernel conventions.
    VerifyJensen,
    /// Tabulate N, m, H, T and the form-3 residual over a radius grid.
    Profile,
    /// Fit the residual of one FMT form against log r.
    FmtCheck,
    /// Measure the mean proximity balance defect over a radius grid.
    MpbCheck,
    /// Decide the counting weight of a single zero sphere.
    Arbiter,
    /// Run the characteristic-function identities and inequalities.
    AlgebraSuite,
    /// Deterministic checks against built-in reference values.
    Selftest,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::VerifyJensen => Command::VerifyJensen,
            Cmd::Profile => Command::Profile,
            Cmd::FmtCheck => Command::FmtCheck,
            Cmd::MpbCheck => Command::MpbCheck,
            Cmd::Arbiter => Command::Arbiter,
            Cmd::AlgebraSuite => Command::AlgebraSuite,
            Cmd::Selftest => Command::Selftest,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum KernelArg {
    Corrected,
    Perotti,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SchemeArg {
    MonteCarlo,
    AntitheticPair,
}

fn parse_function(s: &str) -> Result<FunctionSpec> {
    if s.trim_start().starts_with('{') {
        return serde_json::from_str(s).context("bad --function JSON");
    }
    let c = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("bad --function {s:?}"))?;
    Ok(FunctionSpec {
        num: LeftPoly::from_real(&c),
        den: None,
    })
}

fn resolve(cli: &Cli) -> Result<ExperimentSpec> {
    let mut spec = match &cli.config {
        Some(p) => ExperimentSpec::load(p)?,
        None => ExperimentSpec::default(),
    };
    if let Some(s) = cli.seed {
        spec.integrator.seed = s;
    }
    if let Some(n) = cli.samples {
        spec.integrator.samples = n;
    }
    if let Some(s) = cli.scheme {
        spec.integrator.scheme = match s {
            SchemeArg::MonteCarlo => Scheme::MonteCarlo,
            SchemeArg::AntitheticPair => Scheme::AntitheticPair,
        };
    }
    if let Some(k) = cli.kernel {
        spec.kernel_convention = Some(match k {
            KernelArg::Corrected => KernelConvention::CorrectedFactor1,
            KernelArg::Perotti => KernelConvention::PerottiFactor2,
        });
    }
    if let Some(f) = &cli.function {
        spec.function = Some(parse_function(f)?);
    }
    if let Some(g) = &cli.g {
        spec.g = Some(parse_function(g)?);
    }
    if let Some(a) = &cli.a {
        spec.a = Some(parse_target(a)?);
    }
    if let Some(r) = cli.r {
        spec.r = Some(r);
    }
    if let Some(r) = &cli.radii {
        spec.radii = Some(RadiiSpec::parse(r)?);
    }
    if let Some(f) = cli.form {
        spec.form = Some(FmtForm::try_from(f).map_err(anyhow::Error::msg)?);
    }
    if cli.max_slope.is_some() {
        spec.max_slope = cli.max_slope;
    }
    if cli.max_spread.is_some() {
        spec.max_spread = cli.max_spread;
    }
    if cli.out.is_some() {
        spec.output = cli.out.clone();
    }
    if cli.format.is_some() {
        spec.format = cli.format;
    }
    Ok(spec)
}

fn write_artifact(path: &Path, format: Format, cmd: Command, spec: &ExperimentSpec, o: &Outcome) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    match format {
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(&o.header)?;
            for row in &o.rows {
                c.write_record(row)?;
            }
            c.flush()?;
        }
        Format::Json => {
            let mut resolved = spec.clone();
            resolved.command = Some(cmd);
            resolved.output = None;
            let doc = serde_json::json!({
                "command": cmd,
                "spec": resolved,
                "passed": o.gate.is_ok(),
                "result": o.json,
            });
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let cmd = Command::from(cli.command);
    let spec = resolve(cli)?;
    let outcome = commands::run(cmd, &spec)?;
    if let Some(path) = &spec.output {
        write_artifact(path, spec.format(), cmd, &spec, &outcome)?;
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(o) => {
            print!("{}", o.text);
            match o.gate {
                Ok(()) => ExitCode::SUCCESS,
                Err(why) => {
                    eprintln!("check failed: {why}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
