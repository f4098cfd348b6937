//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or chain, 2 numerical
//! non-convergence or a failed selftest.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::asymptotics::{
    compare_models, emit_series, fit_exponential_rate, fit_power_exponent,
    intermediate_diagnostics, q_offsets, rank_series, read_series, PowerOverlay, SeriesFormat,
    SeriesPoint, WindowPolicy,
};
use crate::chain::ChainSpec;
use crate::enumerate::{WordEnumerator, DEFAULT_EXPANSION_CAP};
use crate::error::{Error, Result};
use crate::regime::{classify, AnalysisConfig, Regime};
use crate::selftest::{run_selftest, SelftestConfig};
use crate::spectral::analyze_beta;

#[derive(Debug, Parser)]
#[command(
    name = "wordrank",
    version,
    about = "Rank-ordered word probabilities of absorbing Markov chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a chain file and list violations.
    Validate {
        chain: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Decide the decay regime and its parameters.
    Classify {
        chain: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Exponent beta, per-component radii and the positive-eigenvector verdict.
    Beta {
        chain: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Exponential rate nu with its per-cycle contributions.
    Nu {
        chain: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Print the most probable words in rank order.
    Enumerate {
        chain: PathBuf,
        /// Number of words; defaults to 100 unless --min-prob is given.
        #[arg(long)]
        top: Option<u64>,
        /// Stop before the first word less probable than this.
        #[arg(long, value_parser = parse_probability)]
        min_prob: Option<f64>,
        #[arg(long, value_enum, default_value_t = WordFormat::Csv)]
        format: WordFormat,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_EXPANSION_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        expansion_cap: u64,
    },
    /// Fit a power law or exponential to p(t) from a chain (.json) or a series (.csv).
    Fit {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModelChoice::Auto)]
        model: ModelChoice,
        /// Ranks to enumerate when the input is a chain.
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(100..))]
        top: u64,
        #[command(flatten)]
        window: WindowArgs,
        /// Write the series as CSV.
        #[arg(long)]
        series_out: Option<PathBuf>,
        /// Add a c·t^(-1/beta) column to the written series (power regime only).
        #[arg(long, requires = "series_out")]
        overlay: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long, default_value_t = DEFAULT_EXPANSION_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        expansion_cap: u64,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Classification, parameters, enumeration and fits as one JSON document.
    Report {
        chain: PathBuf,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        top: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = DEFAULT_EXPANSION_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        expansion_cap: u64,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Property suites on seeded random chains.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..=100_000))]
        chains: u64,
        /// Corrupt one enumerated word to exercise failure reporting.
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WordFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Power,
    Exp,
    Auto,
}

#[derive(Debug, Clone, Args)]
pub struct Tuning {
    /// |r - 1| below this marks a component critical.
    #[arg(long, default_value_t = 1e-9, value_parser = parse_tolerance)]
    pub criticality_tol: f64,
    #[arg(long, default_value_t = 1e-10, value_parser = parse_tolerance)]
    pub residual_tol: f64,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_iterations: u64,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub cycle_cap: u64,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub word_set_cap: u64,
}

impl Tuning {
    pub fn config(&self) -> AnalysisConfig {
        let mut cfg = AnalysisConfig::default();
        cfg.spectral.criticality_tolerance = self.criticality_tol;
        cfg.spectral.residual_tolerance = self.residual_tol;
        cfg.spectral.max_iterations = self.max_iterations as usize;
        cfg.cycle_cap = self.cycle_cap as usize;
        cfg.word_set_cap = self.word_set_cap as usize;
        cfg
    }
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    /// Trailing fraction of the series used by fits.
    #[arg(long, default_value_t = 0.5, value_parser = parse_fraction)]
    pub trailing: f64,
    /// Geometric spacing of sampled ranks.
    #[arg(long, default_value_t = 1.05, value_parser = parse_ratio)]
    pub ratio: f64,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(10..))]
    pub min_points: u64,
    /// Explicit first rank of the window (with --window-max).
    #[arg(long, requires = "window_max")]
    pub window_min: Option<u64>,
    #[arg(long, requires = "window_min")]
    pub window_max: Option<u64>,
}

impl WindowArgs {
    pub fn policy(&self) -> WindowPolicy {
        WindowPolicy {
            trailing_fraction: self.trailing,
            ratio: self.ratio,
            min_points: self.min_points as usize,
            window: self.window_min.zip(self.window_max),
        }
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    s.parse::<f64>().map_err(|e| e.to_string())
}

fn parse_probability(s: &str) -> std::result::Result<f64, String> {
    let x = parse_f64(s)?;
    if x > 0.0 && x <= 1.0 {
        Ok(x)
    } else {
        Err(format!("{x} is not in (0, 1]"))
    }
}

fn parse_tolerance(s: &str) -> std::result::Result<f64, String> {
    let x = parse_f64(s)?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(format!("{x} is not in (0, 1)"))
    }
}

fn parse_fraction(s: &str) -> std::result::Result<f64, String> {
    parse_probability(s)
}

fn parse_ratio(s: &str) -> std::result::Result<f64, String> {
    let x = parse_f64(s)?;
    if x > 1.0 && x <= 10.0 {
        Ok(x)
    } else {
        Err(format!("{x} is not in (1, 10]"))
    }
}

/// Map an error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numeric() {
        2
    } else {
        1
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(&cli.command, &mut stdout.lock(), &mut stderr.lock())
}

/// Run one subcommand, writing results to `out` and diagnostics to `err`.
pub fn run(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(command, out) {
        Ok(code) => code,
        Err(e) => {
            let line = e.to_string().replace('\n', "; ");
            let _ = writeln!(err, "error: {line}");
            exit_code(&e)
        }
    }
}

fn load(path: &Path) -> Result<ChainSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    ChainSpec::from_json(&text)
}

fn print_json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn dispatch(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { chain, format } => {
            let spec = load(chain)?;
            let report = spec.validate();
            match format {
                ReportFormat::Text => write!(out, "{report}")?,
                ReportFormat::Json => {
                    print_json(out, &json!({ "ok": report.is_ok(), "report": report }))?
                }
            }
            Ok(if report.is_ok() { 0 } else { 1 })
        }
        Command::Classify {
            chain,
            format,
            tuning,
        } => {
            let spec = load(chain)?;
            let report = classify(&spec, &tuning.config())?;
            match format {
                ReportFormat::Text => write!(out, "{report}")?,
                ReportFormat::Json => print_json(out, &report)?,
            }
            Ok(0)
        }
        Command::Beta {
            chain,
            format,
            tuning,
        } => {
            let spec = load(chain)?;
            let analysis = analyze_beta(&spec, &tuning.config().spectral)?;
            match format {
                ReportFormat::Json => print_json(out, &analysis)?,
                ReportFormat::Text => {
                    writeln!(out, "beta: {:.12}", analysis.beta)?;
                    for c in &analysis.components {
                        let tag = serde_json::to_value(c.tag)?;
                        writeln!(
                            out,
                            "component {:?} ({}): radius {:.12}{}",
                            c.states,
                            tag.as_str().unwrap_or_default(),
                            c.radius,
                            if c.critical { " critical" } else { "" }
                        )?;
                    }
                    match analysis.positive_left_eigenvector {
                        None => {
                            writeln!(out, "positive left eigenvector: not applicable (beta = 0)")?
                        }
                        Some(v) => writeln!(out, "positive left eigenvector: {v}")?,
                    }
                    if let Some(y) = &analysis.eigenvector {
                        let cells: Vec<String> = analysis
                            .states
                            .iter()
                            .zip(y)
                            .map(|(s, v)| format!("{}={v:.12}", spec.label(*s)))
                            .collect();
                        writeln!(out, "eigenvector: {}", cells.join(" "))?;
                    }
                }
            }
            Ok(0)
        }
        Command::Nu {
            chain,
            format,
            tuning,
        } => {
            let spec = load(chain)?;
            let report = classify(&spec, &tuning.config())?;
            let Some(rates) = report.rates else {
                return Err(Error::RegimeMismatch {
                    expected: "exponential",
                    found: report.regime.name().into(),
                });
            };
            match format {
                ReportFormat::Json => print_json(out, &rates)?,
                ReportFormat::Text => {
                    writeln!(out, "nu: {:.12}", rates.nu)?;
                    writeln!(out, "alpha: {:.12}", rates.alpha)?;
                    for c in &rates.cycles {
                        writeln!(
                            out,
                            "cycle {:?}: weight {:.12} k {} contribution {:.12}",
                            c.states, c.weight, c.k, c.contribution
                        )?;
                    }
                }
            }
            Ok(0)
        }
        Command::Enumerate {
            chain,
            top,
            min_prob,
            format,
            output,
            expansion_cap,
        } => {
            let spec = load(chain)?;
            spec.ensure_valid()?;
            let top = top.unwrap_or(if min_prob.is_some() { u64::MAX } else { 100 });
            let floor = min_prob.map(f64::ln);
            let mut sink: Box<dyn Write + '_> = match output {
                Some(path) => Box::new(BufWriter::new(File::create(path)?)),
                None => Box::new(BufWriter::new(&mut *out)),
            };
            if *format == WordFormat::Csv {
                writeln!(sink, "rank,probability,log10_probability,word")?;
            }
            let mut e = WordEnumerator::with_cap(&spec, *expansion_cap);
            let mut emitted = 0u64;
            let mut failure = None;
            while emitted < top {
                let w = match e.next_word() {
                    Ok(Some(w)) => w,
                    Ok(None) => break,
                    Err(err) => {
                        failure = Some(err);
                        break;
                    }
                };
                if floor.is_some_and(|f| w.word.log_prob < f - crate::enumerate::TIE_BAND) {
                    break;
                }
                let log10 = w.word.log_prob / std::f64::consts::LN_10;
                let label = spec.format_word(&w.word.states);
                match format {
                    WordFormat::Csv => writeln!(
                        sink,
                        "{},{:.16e},{:.16e},{}",
                        w.rank, w.word.prob, log10, label
                    )?,
                    WordFormat::Jsonl => writeln!(
                        sink,
                        "{}",
                        json!({ "rank": w.rank, "probability": w.word.prob, "log10_probability": log10, "word": label })
                    )?,
                }
                emitted += 1;
            }
            sink.flush()?;
            match failure {
                Some(e) => Err(e),
                None => Ok(0),
            }
        }
        Command::Fit {
            input,
            model,
            top,
            window,
            series_out,
            overlay,
            format,
            expansion_cap,
            tuning,
        } => {
            let is_csv = input
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
            let (series, beta) = if is_csv {
                (read_series(BufReader::new(File::open(input)?))?, None)
            } else {
                let spec = load(input)?;
                let report = classify(&spec, &tuning.config())?;
                let beta = match report.regime {
                    Regime::Power { beta, .. } => Some(beta),
                    _ => None,
                };
                (rank_series(&spec, *top as usize, *expansion_cap)?, beta)
            };
            let policy = window.policy();
            if let Some(path) = series_out {
                let overlay = match (overlay, beta) {
                    (true, Some(b)) => Some(PowerOverlay::fit(&series, b)?),
                    (true, None) => {
                        return Err(Error::InvalidArgument(
                            "--overlay needs a chain in the power regime".into(),
                        ))
                    }
                    _ => None,
                };
                emit_series(
                    &series,
                    BufWriter::new(File::create(path)?),
                    SeriesFormat::Csv,
                    overlay.as_ref(),
                )?;
            }
            let value = match model {
                ModelChoice::Power => serde_json::to_value(fit_power_exponent(&series, &policy)?)?,
                ModelChoice::Exp => serde_json::to_value(fit_exponential_rate(&series, &policy)?)?,
                ModelChoice::Auto => serde_json::to_value(compare_models(&series, &policy)?)?,
            };
            match format {
                ReportFormat::Json => print_json(out, &value)?,
                ReportFormat::Text => write_fit_text(out, &value)?,
            }
            Ok(0)
        }
        Command::Report {
            chain,
            top,
            output,
            window,
            expansion_cap,
            tuning,
        } => {
            let spec = load(chain)?;
            let report = build_report(
                &spec,
                *top as usize,
                &window.policy(),
                *expansion_cap,
                &tuning.config(),
            )?;
            match output {
                Some(path) => {
                    let mut f = BufWriter::new(File::create(path)?);
                    print_json(&mut f, &report)?;
                    f.flush()?;
                }
                None => print_json(out, &report)?,
            }
            Ok(0)
        }
        Command::Selftest {
            seed,
            chains,
            inject_fault,
            format,
        } => {
            let cfg = SelftestConfig {
                seed: *seed,
                chains: *chains as usize,
                inject_fault: *inject_fault,
                ..Default::default()
            };
            let report = run_selftest(&cfg);
            match format {
                ReportFormat::Text => write!(out, "{report}")?,
                ReportFormat::Json => print_json(out, &report)?,
            }
            Ok(if report.passed() { 0 } else { 2 })
        }
    }
}

fn write_fit_text(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    let one = |out: &mut dyn Write, v: &serde_json::Value| -> Result<()> {
        let slope = v["slope"].as_f64().unwrap_or(f64::NAN);
        let name = v["model"].as_str().unwrap_or("");
        let what = if name == "power" { "1/beta" } else { "nu" };
        writeln!(
            out,
            "{name}: slope {slope:.12} ({what} estimate {:.12}) window [{}, {}] samples {} residual {:.6e}",
            -slope, v["window"][0], v["window"][1], v["samples"], v["residual"].as_f64().unwrap_or(f64::NAN)
        )?;
        Ok(())
    };
    if value.get("preferred").is_some() {
        one(out, &value["power"])?;
        one(out, &value["exponential"])?;
        writeln!(
            out,
            "preferred: {}",
            value["preferred"].as_str().unwrap_or("")
        )?;
    } else {
        one(out, value)?;
    }
    Ok(())
}

/// The consolidated document written by `report`.
pub fn build_report(
    spec: &ChainSpec,
    top: usize,
    policy: &WindowPolicy,
    expansion_cap: u64,
    cfg: &AnalysisConfig,
) -> Result<serde_json::Value> {
    let validation = spec.validate();
    let regime = classify(spec, cfg)?;
    let beta = match regime.regime {
        Regime::Power { .. } => Some(analyze_beta(spec, &cfg.spectral)?),
        _ => None,
    };
    let mut e = WordEnumerator::with_cap(spec, expansion_cap);
    let mut series: Vec<SeriesPoint> = Vec::new();
    let mut head = Vec::new();
    let mut mass = 0.0;
    while series.len() < top {
        let Some(w) = e.next_word()? else { break };
        mass += w.word.prob;
        if head.len() < 20 {
            head.push(json!({
                "rank": w.rank,
                "probability": w.word.prob,
                "word": spec.format_word(&w.word.states),
            }));
        }
        series.push(SeriesPoint {
            rank: w.rank,
            prob: w.word.prob,
            log_prob: w.word.log_prob,
        });
    }
    let fits = if series.len() >= 100 {
        Some(compare_models(&series, policy)?)
    } else {
        None
    };
    let intermediate = match regime.regime {
        Regime::Intermediate { .. } if series.len() >= 100 => {
            Some(intermediate_diagnostics(&series)?)
        }
        _ => None,
    };
    let offsets = match regime.regime {
        Regime::Exponential { nu, .. } => {
            let xs: Vec<f64> = (1..=8).map(|k| 5.0 * k as f64).collect();
            Some(q_offsets(spec, nu, &xs)?)
        }
        _ => None,
    };
    Ok(json!({
        "validation": validation,
        "classification": regime,
        "beta": beta,
        "enumeration": {
            "requested": top,
            "words": series.len(),
            "finite": series.len() < top,
            "probability_mass": mass,
            "head": head,
            "last": series.last(),
        },
        "fits": fits,
        "intermediate": intermediate,
        "q_offsets": offsets,
    }))
}
