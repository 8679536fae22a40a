use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use valgeo_cli::{run_and_write, CliError, Format, RunConfig, SUITES};

/// Run a valgeo verification suite.
#[derive(Parser, Debug)]
#[command(name = "valgeo", version)]
struct Args {
    /// One of: angles, kubota, steiner, claim23, lemma22, lemma24, lefschetz, hadwiger, lambda.
    suite: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Main Monte-Carlo budget of the suite.
    #[arg(long)]
    samples: Option<usize>,
    /// Ambient dimension(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    dim: Option<Vec<usize>>,
    /// Harmonic band limit for the lefschetz suite.
    #[arg(long)]
    dmax: Option<usize>,
    /// Directory for the report and plot data.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Flat `key = value` config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn config(args: &Args) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(samples) = args.samples {
        cfg.samples = Some(samples);
    }
    if let Some(dims) = &args.dim {
        cfg.dims = dims.clone();
    }
    if let Some(dmax) = args.dmax {
        cfg.dmax = Some(dmax);
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    if let Some(format) = &args.format {
        cfg.format = format.parse::<Format>()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: &Args) -> Result<bool, CliError> {
    if !SUITES.contains(&args.suite.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown suite `{}`, expected one of: {}",
            args.suite,
            SUITES.join(", ")
        )));
    }
    let cfg = config(args)?;
    let (report, files, warning) = run_and_write(&args.suite, &cfg)?;
    match cfg.out {
        Some(_) => print!("{}", report.summary()),
        None => print!("{}", report.render(cfg.format)),
    }
    for f in files {
        eprintln!("wrote {}", f.display());
    }
    if let Some(w) = warning {
        eprintln!("warning: {w}");
    }
    eprintln!("wall time: {:.2} s", report.wall_time.as_secs_f64());
    Ok(report.pass())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("valgeo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
