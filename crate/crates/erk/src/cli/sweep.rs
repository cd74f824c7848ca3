//! One-dimensional parameter sweeps over any of the library's rate formulas.

use std::str::FromStr;

use rayon::prelude::*;

use super::output::Table;
use crate::analytic::{erasure_free_upper_bound, markov_two_tap_rate, one_tap_rate, two_tap_rate_iid, SeriesConfig};
use crate::cellular::{compare_schemes, icfs_rate, mcp_rate, scp_rate, CellularParams};
use crate::error::{Error, Result};
use crate::model::{ChannelParams, ErasureProcess};
use crate::oracle::{monte_carlo_rate, user_activity_throughput_mc, FirFilter, McConfig};

/// A full set of parameter bindings; each curve reads the fields it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub g0: f64,
    pub g1: f64,
    /// Linear power.
    pub snr: f64,
    pub q: f64,
    pub q0: f64,
    pub q1: f64,
    pub alpha_sq: f64,
}

impl Default for Point {
    fn default() -> Self {
        Self {
            g0: 0.8,
            g1: 0.2,
            snr: 10.0,
            q: 0.2,
            q0: 0.1,
            q1: 0.3,
            alpha_sq: 0.5,
        }
    }
}

impl Point {
    pub fn channel(&self) -> Result<ChannelParams> {
        ChannelParams::new(self.g0, self.g1, self.snr)
    }

    pub fn cellular(&self) -> Result<CellularParams> {
        CellularParams::new(self.alpha_sq, self.snr, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Q,
    SnrDb,
    G0,
    AlphaSq,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Q => "q",
            SweepVar::SnrDb => "snr_db",
            SweepVar::G0 => "g0",
            SweepVar::AlphaSq => "alpha_sq",
        }
    }

    /// Binds `value` into `base`. The `g0` sweep keeps a unit-gain filter.
    pub fn apply(self, base: &Point, value: f64) -> Result<Point> {
        let mut p = *base;
        match self {
            SweepVar::Q => p.q = value,
            SweepVar::SnrDb => p.snr = crate::db_to_linear(value),
            SweepVar::G0 => {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::invalid(format!(
                        "unit-gain g0 sweep needs g0 in [0, 1], got {value}"
                    )));
                }
                p.g0 = value;
                p.g1 = 1.0 - value;
            }
            SweepVar::AlphaSq => p.alpha_sq = value,
        }
        Ok(p)
    }
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(SweepVar::Q),
            "snr_db" | "snr-db" | "snr" => Ok(SweepVar::SnrDb),
            "g0" => Ok(SweepVar::G0),
            "alpha_sq" | "alpha-sq" => Ok(SweepVar::AlphaSq),
            other => Err(Error::invalid(format!("unknown sweep variable {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    TwoTap,
    OneTap,
    UpperBound,
    Markov,
    Mcp,
    Scp,
    Icfs,
    McpThroughput,
    ScpThroughput,
    IcfsThroughput,
}

impl Curve {
    pub const ALL: [Curve; 10] = [
        Curve::TwoTap,
        Curve::OneTap,
        Curve::UpperBound,
        Curve::Markov,
        Curve::Mcp,
        Curve::Scp,
        Curve::Icfs,
        Curve::McpThroughput,
        Curve::ScpThroughput,
        Curve::IcfsThroughput,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Curve::TwoTap => "two_tap",
            Curve::OneTap => "one_tap",
            Curve::UpperBound => "upper_bound",
            Curve::Markov => "markov",
            Curve::Mcp => "mcp",
            Curve::Scp => "scp",
            Curve::Icfs => "icfs",
            Curve::McpThroughput => "mcp_throughput",
            Curve::ScpThroughput => "scp_throughput",
            Curve::IcfsThroughput => "icfs_throughput",
        }
    }

    pub fn eval(self, p: &Point, cfg: &SeriesConfig) -> Result<f64> {
        match self {
            Curve::TwoTap => Ok(two_tap_rate_iid(&p.channel()?, p.q, cfg)?.rate),
            Curve::OneTap => one_tap_rate(p.g0, p.snr, p.q),
            Curve::UpperBound => erasure_free_upper_bound(&p.channel()?),
            Curve::Markov => Ok(markov_two_tap_rate(&p.channel()?, p.q0, p.q1, cfg)?.rate),
            Curve::Mcp => Ok(mcp_rate(&p.cellular()?, cfg)?.rate),
            Curve::Scp => scp_rate(&p.cellular()?),
            Curve::Icfs => icfs_rate(&p.cellular()?),
            Curve::McpThroughput | Curve::ScpThroughput | Curve::IcfsThroughput => {
                let cmp = compare_schemes(&p.cellular()?, cfg)?;
                let value = match self {
                    Curve::McpThroughput => cmp.mcp,
                    Curve::ScpThroughput => cmp.scp,
                    _ => cmp.icfs,
                };
                value
                    .throughput
                    .ok_or_else(|| Error::invalid("throughput per active user needs q < 1"))
            }
        }
    }

    /// Monte-Carlo counterpart of the curve, when it has one.
    pub fn monte_carlo(self, p: &Point, mc: &McConfig) -> Option<Result<(f64, f64)>> {
        let run = |filter: Result<FirFilter>, process: Result<ErasureProcess>| -> Result<(f64, f64)> {
            let r = monte_carlo_rate(&filter?, p.snr, &process?, mc)?;
            Ok((r.rate, r.error_bound))
        };
        match self {
            Curve::TwoTap => Some(run(FirFilter::from_gains(p.g0, p.g1), ErasureProcess::iid(p.q))),
            Curve::Markov => Some(run(
                FirFilter::from_gains(p.g0, p.g1),
                ErasureProcess::markov(p.q0, p.q1),
            )),
            Curve::Mcp => Some(run(FirFilter::from_gains(1.0, p.alpha_sq), ErasureProcess::iid(p.q))),
            Curve::McpThroughput => {
                Some(user_activity_throughput_mc(p.alpha_sq, p.snr, p.q, mc).map(|r| (r.rate, r.error_bound)))
            }
            _ => None,
        }
    }
}

impl FromStr for Curve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        Curve::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| Error::invalid(format!("unknown curve {s:?}")))
    }
}

/// Inclusive `start, start+step, …, stop` grid, snapped to the step to avoid drift.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::invalid(format!(
            "bad grid start={start} stop={stop} step={step}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub grid: Vec<f64>,
    pub fixed: Point,
    pub curves: Vec<Curve>,
    /// Monte-Carlo overlay for every curve that has a simulator.
    pub mc: Option<McConfig>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::invalid("sweep grid is empty"));
        }
        if self.curves.is_empty() {
            return Err(Error::invalid("no curves requested"));
        }
        for &v in &self.grid {
            self.variable.apply(&self.fixed, v)?;
        }
        Ok(())
    }
}

/// Evaluates every curve at every grid point. Output order follows the grid,
/// independent of how points are scheduled.
pub fn run_sweep(spec: &SweepSpec, cfg: &SeriesConfig) -> Result<Table> {
    spec.validate()?;
    let points: Vec<Point> = spec
        .grid
        .iter()
        .map(|&v| spec.variable.apply(&spec.fixed, v))
        .collect::<Result<_>>()?;
    let mut table = Table::new(spec.variable.name(), spec.grid.clone());
    for &curve in &spec.curves {
        let values: Vec<f64> = points.par_iter().map(|p| curve.eval(p, cfg)).collect::<Result<_>>()?;
        table.push_line(curve.name(), values);
    }
    if let Some(mc) = &spec.mc {
        for &curve in &spec.curves {
            if curve.monte_carlo(&points[0], &McConfig { trials: 1, ..*mc }).is_none() {
                continue;
            }
            let values = points
                .iter()
                .map(|p| curve.monte_carlo(p, mc).transpose())
                .collect::<Result<Vec<_>>>()?;
            table.push_points(format!("{}_mc", curve.name()), values);
        }
    }
    Ok(table)
}
