//! The `erk` command-line front end.
//!
//! Settings resolve as command-line flags, then the `--config` TOML file
//! (keys `bits`, `snr_linear`, `seed`, `out_dir`, `max_terms`), then defaults.

pub mod figures;
pub mod output;
pub mod svg;
pub mod sweep;
pub mod validate;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::analytic::{
    erasure_free_upper_bound, high_snr_two_tap, markov_two_tap_rate, one_tap_rate, two_tap_rate_iid, SeriesConfig,
};
use crate::cellular::{high_snr_triple, icfs_rate, mcp_rate, scp_rate, CellularParams, Scheme};
use crate::error::{Error, Result};
use crate::model::{ErasureProcess, RateKind, RateResult};
use crate::oracle::{exact_finite_rate, monte_carlo_rate, user_activity_throughput_mc, FirFilter, McConfig};
use figures::{build_figure, FigureId, FigureOverrides, FigureSpec};
use output::{rate_record, SnrScale, Units};
use sweep::{linear_grid, Curve, Point, SweepSpec, SweepVar};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "erk", version, about = "Rates of the two-tap input-erasure Gaussian channel")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct GlobalArgs {
    /// Report rates in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,
    /// Read SNR arguments as linear power ratios instead of dB.
    #[arg(long, global = true)]
    pub snr_linear: bool,
    /// Seed for Monte-Carlo runs and randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for figure output.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// TOML file with default settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Series truncation length.
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one rate formula and print a JSON record.
    Rate(RateArgs),
    /// Evaluate curves over a one-dimensional grid and emit CSV.
    Sweep(SweepArgs),
    /// Write `<id>.csv` and `<id>.svg` for one of the preset figures.
    Figure(FigureArgs),
    /// Estimate a rate by Monte-Carlo simulation or exhaustive enumeration.
    Simulate(SimulateArgs),
    /// Run the oracle cross-check suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Args, Default, Clone)]
pub struct ParamArgs {
    #[arg(long)]
    pub g0: Option<f64>,
    #[arg(long)]
    pub g1: Option<f64>,
    /// SNR (dB unless --snr-linear).
    #[arg(long = "snr-db", visible_alias = "snr", allow_negative_numbers = true)]
    pub snr: Option<f64>,
    /// I.i.d. erasure probability.
    #[arg(long)]
    pub q: Option<f64>,
    /// Markov chain: P(erased | previous erased).
    #[arg(long)]
    pub q0: Option<f64>,
    /// Markov chain: P(erased | previous delivered).
    #[arg(long)]
    pub q1: Option<f64>,
    /// Inter-cell gain α² of the soft-handoff model.
    #[arg(long)]
    pub alpha_sq: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    TwoTap,
    OneTap,
    Markov,
    UpperBound,
    Scp,
    Icfs,
    Mcp,
    HighSnr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HighSnrTarget {
    TwoTap,
    Mcp,
    Scp,
    Icfs,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(value_enum)]
    pub formula: Formula,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Channel whose high-SNR slope and offset `high-snr` reports.
    #[arg(long, value_enum, default_value = "two-tap")]
    pub scheme: HighSnrTarget,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Swept variable: q, snr-db, g0 or alpha-sq.
    #[arg(long = "var")]
    pub variable: SweepVar,
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Explicit grid instead of start/stop/step.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub values: Option<Vec<f64>>,
    /// Curves to evaluate (two-tap, one-tap, upper-bound, markov, mcp, scp, icfs, *-throughput).
    #[arg(long, value_delimiter = ',', default_value = "two-tap")]
    pub curves: Vec<Curve>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub mc: McArgs,
    /// Write CSV here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Default, Clone)]
pub struct McArgs {
    /// Add Monte-Carlo overlay points.
    #[arg(long)]
    pub mc: bool,
    #[arg(long, default_value_t = 200)]
    pub block_size: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    pub id: FigureId,
    #[arg(long)]
    pub g0: Option<f64>,
    #[arg(long)]
    pub g1: Option<f64>,
    /// Fixed SNR in dB (fig4, fig5, fig7).
    #[arg(long = "snr-db", visible_alias = "snr", allow_negative_numbers = true)]
    pub snr_db: Option<f64>,
    #[arg(long)]
    pub alpha_sq: Option<f64>,
    /// Curve family: powers in dB (fig2) or erasure probabilities (fig3, fig4).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub family: Option<Vec<f64>>,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Complex filter taps `re[:im]`, comma separated; defaults to √g0, √g1.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub taps: Option<Vec<String>>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 200)]
    pub block_size: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    /// Average over all erasure patterns instead of sampling.
    #[arg(long)]
    pub exact: bool,
    /// Simulate MCP throughput per active user (uses --alpha-sq, --q).
    #[arg(long)]
    pub user_activity: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "quick")]
    pub level: LevelArg,
}

/// Keys accepted in the `--config` file.
#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub bits: Option<bool>,
    pub snr_linear: Option<bool>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub max_terms: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::invalid(format!("config {}: {e}", path.display())))
    }
}

/// Fully resolved global settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub units: Units,
    pub snr_scale: SnrScale,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub series: SeriesConfig,
}

impl Settings {
    pub fn resolve(global: &GlobalArgs) -> Result<Self> {
        let file = match &global.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let bits = global.bits || file.bits.unwrap_or(false);
        let snr_linear = global.snr_linear || file.snr_linear.unwrap_or(false);
        let max_terms = global
            .max_terms
            .or(file.max_terms)
            .unwrap_or(SeriesConfig::default().max_terms);
        Ok(Self {
            units: Units::from_bits_flag(bits),
            snr_scale: SnrScale::from_linear_flag(snr_linear),
            seed: global.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out_dir: global
                .out_dir
                .clone()
                .or(file.out_dir)
                .unwrap_or_else(|| PathBuf::from(".")),
            series: SeriesConfig::new(max_terms, SeriesConfig::default().target_tail_bound)?,
        })
    }
}

fn resolve_point(p: &ParamArgs, snr_scale: SnrScale) -> Point {
    let d = Point::default();
    Point {
        g0: p.g0.unwrap_or(d.g0),
        g1: p.g1.unwrap_or(d.g1),
        snr: p.snr.map_or(d.snr, |v| snr_scale.to_linear(v)),
        q: p.q.unwrap_or(d.q),
        q0: p.q0.unwrap_or(d.q0),
        q1: p.q1.unwrap_or(d.q1),
        alpha_sq: p.alpha_sq.unwrap_or(d.alpha_sq),
    }
}

fn params_json(p: &Point, keys: &[&str]) -> Value {
    let mut m = serde_json::Map::new();
    for &k in keys {
        let v = match k {
            "g0" => p.g0,
            "g1" => p.g1,
            "snr" => p.snr,
            "q" => p.q,
            "q0" => p.q0,
            "q1" => p.q1,
            "alpha_sq" => p.alpha_sq,
            _ => continue,
        };
        m.insert(k.to_string(), json!(v));
    }
    Value::Object(m)
}

pub fn cmd_rate(args: &RateArgs, s: &Settings) -> Result<Value> {
    let p = resolve_point(&args.params, s.snr_scale);
    let cfg = &s.series;
    let cellular = || CellularParams::new(p.alpha_sq, p.snr, p.q);
    let (result, keys, extra): (RateResult, &[&str], Value) = match args.formula {
        Formula::TwoTap => (
            two_tap_rate_iid(&p.channel()?, p.q, cfg)?,
            &["g0", "g1", "snr", "q"],
            json!({}),
        ),
        Formula::OneTap => (
            RateResult::closed_form(one_tap_rate(p.g0, p.snr, p.q)?),
            &["g0", "snr", "q"],
            json!({}),
        ),
        Formula::Markov => (
            markov_two_tap_rate(&p.channel()?, p.q0, p.q1, cfg)?,
            &["g0", "g1", "snr", "q0", "q1"],
            json!({}),
        ),
        Formula::UpperBound => (
            RateResult::closed_form(erasure_free_upper_bound(&p.channel()?)?),
            &["g0", "g1", "snr"],
            json!({}),
        ),
        Formula::Scp => (
            RateResult::closed_form(scp_rate(&cellular()?)?),
            &["alpha_sq", "snr", "q"],
            json!({}),
        ),
        Formula::Icfs => (
            RateResult::closed_form(icfs_rate(&cellular()?)?),
            &["alpha_sq", "snr", "q"],
            json!({}),
        ),
        Formula::Mcp => (mcp_rate(&cellular()?, cfg)?, &["alpha_sq", "snr", "q"], json!({})),
        Formula::HighSnr => {
            let (h, keys): (_, &[&str]) = match args.scheme {
                HighSnrTarget::TwoTap => (high_snr_two_tap(p.g0, p.g1, p.q, cfg)?, &["g0", "g1", "snr", "q"]),
                HighSnrTarget::Mcp => (
                    high_snr_triple(Scheme::Mcp, &cellular()?, cfg)?,
                    &["alpha_sq", "snr", "q"],
                ),
                HighSnrTarget::Scp => (
                    high_snr_triple(Scheme::Scp, &cellular()?, cfg)?,
                    &["alpha_sq", "snr", "q"],
                ),
                HighSnrTarget::Icfs => (
                    high_snr_triple(Scheme::Icfs, &cellular()?, cfg)?,
                    &["alpha_sq", "snr", "q"],
                ),
            };
            let kind = if h.terms > 0 {
                RateKind::TruncatedSeries
            } else {
                RateKind::ClosedForm
            };
            let result = RateResult {
                rate: h.approx_rate(p.snr),
                error_bound: h.s_inf * h.l_inf_error_bound,
                kind,
                meta: Default::default(),
            }
            .with_note("rate is the affine high-SNR approximation s_inf·(ln P − l_inf)");
            let units = s.units.scale();
            let extra = json!({
                "s_inf": h.s_inf,
                "l_inf": h.l_inf * units + 0.0,
                "l_inf_error_bound": h.l_inf_error_bound * units,
                "terms": h.terms,
            });
            (result, keys, extra)
        }
    };
    Ok(rate_record(&result, s.units, s.snr_scale, params_json(&p, keys), extra))
}

fn mc_config(mc: &McArgs, seed: u64) -> Result<Option<McConfig>> {
    mc.mc.then(|| McConfig::new(mc.block_size, mc.trials, seed)).transpose()
}

pub fn sweep_spec(args: &SweepArgs, s: &Settings) -> Result<SweepSpec> {
    let grid = match (&args.values, args.start, args.stop, args.step) {
        (Some(values), None, None, None) => values.clone(),
        (None, Some(start), Some(stop), Some(step)) => linear_grid(start, stop, step)?,
        _ => return Err(Error::invalid("give either --values or all of --start, --stop, --step")),
    };
    // The sweep variable itself is in dB regardless of --snr-linear.
    Ok(SweepSpec {
        variable: args.variable,
        grid,
        fixed: resolve_point(&args.params, s.snr_scale),
        curves: args.curves.clone(),
        mc: mc_config(&args.mc, s.seed)?,
    })
}

pub fn cmd_sweep(args: &SweepArgs, s: &Settings) -> Result<String> {
    let spec = sweep_spec(args, s)?;
    let mut table = sweep::run_sweep(&spec, &s.series)?;
    table.scale_values(s.units.scale());
    table.stamp = vec![format!(
        "sweep={} units={} snr_scale={} erk={}",
        spec.variable.name(),
        s.units.name(),
        s.snr_scale.name(),
        output::VERSION
    )];
    if let Some(mc) = &spec.mc {
        table.stamp.push(format!(
            "monte_carlo block_size={} trials={} seed={}",
            mc.block_size, mc.trials, mc.seed
        ));
    }
    Ok(table.to_csv())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes the CSV and SVG files of a figure and returns their paths.
pub fn cmd_figure(args: &FigureArgs, s: &Settings) -> Result<(PathBuf, PathBuf)> {
    let spec = FigureSpec {
        id: args.id,
        overrides: FigureOverrides {
            g0: args.g0,
            g1: args.g1,
            snr_db: args.snr_db,
            alpha_sq: args.alpha_sq,
            family: args.family.clone(),
        },
        mc: mc_config(&args.mc, s.seed)?,
    };
    let figure = build_figure(&spec, &s.series, s.units)?;
    std::fs::create_dir_all(&s.out_dir).map_err(|e| Error::io(&s.out_dir, e))?;
    let csv_path = s.out_dir.join(format!("{}.csv", args.id.name()));
    let svg_path = s.out_dir.join(format!("{}.svg", args.id.name()));
    write_file(&csv_path, &figure.table.to_csv())?;
    write_file(
        &svg_path,
        &svg::render(&figure.table, args.id.title(), &figure.x_label, &figure.y_label),
    )?;
    Ok((csv_path, svg_path))
}

fn parse_tap(text: &str) -> Result<Complex64> {
    let bad = || Error::invalid(format!("bad tap {text:?}; expected re or re:im"));
    let mut parts = text.trim().splitn(2, ':');
    let re = parts.next().ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?;
    let im = match parts.next() {
        Some(v) => v.parse::<f64>().map_err(|_| bad())?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

pub fn cmd_simulate(args: &SimulateArgs, s: &Settings) -> Result<Value> {
    let p = resolve_point(&args.params, s.snr_scale);
    if args.user_activity {
        let cfg = McConfig::new(args.block_size, args.trials, s.seed)?;
        let result = user_activity_throughput_mc(p.alpha_sq, p.snr, p.q, &cfg)?;
        return Ok(rate_record(
            &result,
            s.units,
            s.snr_scale,
            params_json(&p, &["alpha_sq", "snr", "q"]),
            json!({}),
        ));
    }
    let (filter, mut params) = match &args.taps {
        Some(taps) => {
            let taps = taps.iter().map(|t| parse_tap(t)).collect::<Result<Vec<_>>>()?;
            let listed: Vec<[f64; 2]> = taps.iter().map(|c| [c.re, c.im]).collect();
            (FirFilter::new(taps)?, json!({ "taps": listed, "snr": p.snr }))
        }
        None => (
            FirFilter::from_gains(p.g0, p.g1)?,
            params_json(&p, &["g0", "g1", "snr"]),
        ),
    };
    let markov = args.params.q0.is_some() || args.params.q1.is_some();
    let process = if markov {
        params["q0"] = json!(p.q0);
        params["q1"] = json!(p.q1);
        ErasureProcess::markov(p.q0, p.q1)?
    } else {
        params["q"] = json!(p.q);
        ErasureProcess::iid(p.q)?
    };
    let result = if args.exact {
        exact_finite_rate(&filter, p.snr, &process, args.block_size)?
    } else {
        monte_carlo_rate(
            &filter,
            p.snr,
            &process,
            &McConfig::new(args.block_size, args.trials, s.seed)?,
        )?
    };
    Ok(rate_record(&result, s.units, s.snr_scale, params, json!({})))
}

/// Runs a parsed command, printing to standard output. Returns the exit code.
pub fn execute(cli: &Cli) -> Result<i32> {
    let s = Settings::resolve(&cli.global)?;
    match &cli.command {
        Command::Rate(args) => println!("{}", cmd_rate(args, &s)?),
        Command::Sweep(args) => {
            let csv = cmd_sweep(args, &s)?;
            match &args.output {
                Some(path) => {
                    let path = if path.is_relative() {
                        s.out_dir.join(path)
                    } else {
                        path.clone()
                    };
                    write_file(&path, &csv)?;
                    eprintln!("wrote {}", path.display());
                }
                None => print!("{csv}"),
            }
        }
        Command::Figure(args) => {
            let (csv, svg) = cmd_figure(args, &s)?;
            println!("{}\n{}", csv.display(), svg.display());
        }
        Command::Simulate(args) => println!("{}", cmd_simulate(args, &s)?),
        Command::Validate(args) => {
            let level = match args.level {
                LevelArg::Quick => validate::Level::Quick,
                LevelArg::Full => validate::Level::Full,
            };
            let report = validate::run_validation(level, s.seed)?;
            print!("{}", report.to_text());
            return Ok(if report.passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

/// Entry point of the `erk` binary.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("erk: error: {e}");
            1
        }
    }
}
