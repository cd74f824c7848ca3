//! Default parameter grids of the reproducible figures.

use std::str::FromStr;

use rayon::prelude::*;

use super::output::{SnrScale, Table, Units, VERSION};
use super::sweep::{linear_grid, Curve, Point, SweepVar};
use crate::analytic::SeriesConfig;
use crate::cellular::scp_icfs_crossover;
use crate::error::{Error, Result};
use crate::oracle::McConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    /// Rate vs. erasure probability for several powers.
    Fig2,
    /// Rate vs. SNR for several erasure probabilities, with the erasure-free bound.
    Fig3,
    /// Rate vs. tap split of a unit-gain filter.
    Fig4,
    /// MCP, SCP and ICFS rates vs. erasure probability.
    Fig5,
    /// Throughput per active user vs. activity.
    Fig7,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig7 => "fig7",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            FigureId::Fig2 => "Two-tap erasure channel: rate vs. erasure probability",
            FigureId::Fig3 => "Two-tap erasure channel: rate vs. SNR",
            FigureId::Fig4 => "Unit-gain two-tap channel: rate vs. first tap gain",
            FigureId::Fig5 => "Soft-handoff uplink: MCP, SCP and ICFS rates",
            FigureId::Fig7 => "Soft-handoff uplink: throughput per active user",
        }
    }

    fn variable(self) -> SweepVar {
        match self {
            FigureId::Fig3 => SweepVar::SnrDb,
            FigureId::Fig4 => SweepVar::G0,
            _ => SweepVar::Q,
        }
    }

    fn y_label(self) -> &'static str {
        match self {
            FigureId::Fig7 => "throughput per active user",
            _ => "rate",
        }
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            Error::invalid(format!(
                "unknown figure {s:?}; expected one of fig2, fig3, fig4, fig5, fig7"
            ))
        })
    }
}

/// Optional changes to a figure's default parameters. SNR values are in dB.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOverrides {
    pub g0: Option<f64>,
    pub g1: Option<f64>,
    pub snr_db: Option<f64>,
    pub alpha_sq: Option<f64>,
    /// Family parameter: powers in dB for fig2, erasure rates for fig3/fig4.
    pub family: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub id: FigureId,
    pub overrides: FigureOverrides,
    pub mc: Option<McConfig>,
}

impl FigureSpec {
    pub fn new(id: FigureId) -> Self {
        Self {
            id,
            overrides: FigureOverrides::default(),
            mc: None,
        }
    }
}

/// A computed figure: its data table plus axis labels for plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub id: FigureId,
    pub table: Table,
    pub x_label: String,
    pub y_label: String,
}

const FIG2_POWERS_DB: [f64; 7] = [0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0];
const FIG3_ERASURES: [f64; 6] = [0.0, 0.05, 0.1, 0.2, 0.3, 0.4];

/// Grid indices that carry Monte-Carlo points: every tenth sample.
fn overlay_indices(len: usize, limit: Option<usize>) -> Vec<usize> {
    (0..len).step_by(10).filter(|&i| limit.is_none_or(|l| i <= l)).collect()
}

pub fn build_figure(spec: &FigureSpec, cfg: &SeriesConfig, units: Units) -> Result<Figure> {
    let id = spec.id;
    let o = &spec.overrides;
    let snr_default = match id {
        FigureId::Fig4 => 10.0,
        FigureId::Fig5 | FigureId::Fig7 => 14.0,
        _ => 10.0,
    };
    let base = Point {
        g0: o.g0.unwrap_or(0.8),
        g1: o.g1.unwrap_or(0.2),
        snr: crate::db_to_linear(o.snr_db.unwrap_or(snr_default)),
        alpha_sq: o.alpha_sq.unwrap_or(0.5),
        ..Point::default()
    };
    let variable = id.variable();
    let grid = match id {
        FigureId::Fig3 => linear_grid(0.0, 30.0, 1.0)?,
        FigureId::Fig7 => linear_grid(0.0, 0.99, 0.01)?,
        _ => linear_grid(0.0, 1.0, 0.01)?,
    };
    let family: Vec<f64> = match (&o.family, id) {
        (Some(f), _) => f.clone(),
        (None, FigureId::Fig2) => FIG2_POWERS_DB.to_vec(),
        (None, FigureId::Fig3 | FigureId::Fig4) => FIG3_ERASURES.to_vec(),
        (None, _) => Vec::new(),
    };
    if matches!(id, FigureId::Fig2 | FigureId::Fig3 | FigureId::Fig4) && family.is_empty() {
        return Err(Error::invalid("figure family list is empty"));
    }

    // One (label, curve, bound point) per series.
    let mut series: Vec<(String, Curve, Point)> = Vec::new();
    match id {
        FigureId::Fig2 => {
            for &p_db in &family {
                let point = Point {
                    snr: crate::db_to_linear(p_db),
                    ..base
                };
                series.push((format!("P={}dB", super::output::fmt_sig(p_db)), Curve::TwoTap, point));
            }
        }
        FigureId::Fig3 | FigureId::Fig4 => {
            for &q in &family {
                let label = if q == 0.0 && id == FigureId::Fig3 {
                    "q=0 (erasure-free bound)".to_string()
                } else {
                    format!("q={}", super::output::fmt_sig(q))
                };
                series.push((label, Curve::TwoTap, Point { q, ..base }));
            }
        }
        FigureId::Fig5 => {
            for curve in [Curve::Mcp, Curve::Scp, Curve::Icfs] {
                series.push((curve.name().to_uppercase(), curve, base));
            }
        }
        FigureId::Fig7 => {
            for (curve, label) in [
                (Curve::McpThroughput, "MCP"),
                (Curve::ScpThroughput, "SCP"),
                (Curve::IcfsThroughput, "ICFS"),
            ] {
                series.push((label.to_string(), curve, base));
            }
        }
    }

    let mut table = Table::new(variable.name(), grid.clone());
    for (label, curve, point) in &series {
        let points: Vec<Point> = grid.iter().map(|&v| variable.apply(point, v)).collect::<Result<_>>()?;
        let values: Vec<f64> = points.par_iter().map(|p| curve.eval(p, cfg)).collect::<Result<_>>()?;
        table.push_line(label.clone(), values);
    }

    if let Some(mc) = &spec.mc {
        // Simulation at q = 1 is trivially zero and the q sweeps stop at 0.9.
        let limit = match variable {
            SweepVar::Q => grid.iter().position(|&q| q > 0.9 + 1e-9).map(|i| i - 1),
            _ => None,
        };
        let indices = overlay_indices(grid.len(), limit);
        for (label, curve, point) in &series {
            let mut values = vec![None; grid.len()];
            let mut any = false;
            for &i in &indices {
                let p = variable.apply(point, grid[i])?;
                if let Some(r) = curve.monte_carlo(&p, mc) {
                    values[i] = Some(r?);
                    any = true;
                }
            }
            if any {
                table.push_points(format!("{label} (MC)"), values);
            }
        }
    }

    table.scale_values(units.scale());
    table.stamp = stamp_lines(spec, &base, units);
    if id == FigureId::Fig5 {
        let crossover = scp_icfs_crossover(base.alpha_sq, base.snr)?;
        let text = crossover.map_or("none".to_string(), |q| format!("{q:.6}"));
        table.stamp.push(format!("scp_icfs_crossover_q={text}"));
    }

    let x_label = match variable {
        SweepVar::Q if id == FigureId::Fig7 => "q (probability a user is idle)".to_string(),
        SweepVar::Q => "q (erasure probability)".to_string(),
        SweepVar::SnrDb => "P [dB]".to_string(),
        SweepVar::G0 => "g0 = |h0|^2 (g1 = 1 - g0)".to_string(),
        SweepVar::AlphaSq => "alpha^2".to_string(),
    };
    Ok(Figure {
        id,
        table,
        x_label,
        y_label: format!("{} [{}/channel use]", id.y_label(), units.name()),
    })
}

fn stamp_lines(spec: &FigureSpec, base: &Point, units: Units) -> Vec<String> {
    let snr_db = 10.0 * base.snr.log10();
    let params = match spec.id {
        FigureId::Fig2 => format!("g0={} g1={}", base.g0, base.g1),
        FigureId::Fig3 => format!("g0={} g1={}", base.g0, base.g1),
        FigureId::Fig4 => format!("P={}dB", super::output::fmt_sig(snr_db)),
        FigureId::Fig5 | FigureId::Fig7 => {
            format!("alpha_sq={} P={}dB", base.alpha_sq, super::output::fmt_sig(snr_db))
        }
    };
    let mut lines = vec![
        format!("figure={} {}", spec.id.name(), params),
        format!(
            "units={} snr_scale={} erk={}",
            units.name(),
            SnrScale::Db.name(),
            VERSION
        ),
    ];
    if matches!(spec.id, FigureId::Fig2 | FigureId::Fig3) {
        lines.push("power values are read as dB".to_string());
    }
    if let Some(mc) = &spec.mc {
        lines.push(format!(
            "monte_carlo block_size={} trials={} seed={}",
            mc.block_size, mc.trials, mc.seed
        ));
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.name().parse::<FigureId>().unwrap(), id);
        }
        assert!("fig6".parse::<FigureId>().is_err());
    }

    #[test]
    fn default_grids() {
        let cfg = SeriesConfig::default();
        let f2 = build_figure(&FigureSpec::new(FigureId::Fig2), &cfg, Units::Nats).unwrap();
        assert_eq!(f2.table.x.len(), 101);
        assert_eq!(f2.table.columns.len(), 7);
        let f5 = build_figure(&FigureSpec::new(FigureId::Fig5), &cfg, Units::Nats).unwrap();
        assert!(f5.table.stamp.iter().any(|l| l.starts_with("scp_icfs_crossover_q=0.")));
        let f7 = build_figure(&FigureSpec::new(FigureId::Fig7), &cfg, Units::Nats).unwrap();
        assert_eq!(f7.table.x.len(), 100);
    }

    #[test]
    fn overlay_stops_at_point_nine() {
        let spec = FigureSpec {
            id: FigureId::Fig5,
            overrides: FigureOverrides::default(),
            mc: Some(McConfig::new(20, 2, 3).unwrap()),
        };
        let f = build_figure(&spec, &SeriesConfig::default(), Units::Nats).unwrap();
        let col = f.table.column("MCP (MC)").unwrap();
        let filled: Vec<usize> = (0..col.values.len()).filter(|&i| col.values[i].is_some()).collect();
        assert_eq!(filled, (0..=90).step_by(10).collect::<Vec<_>>());
    }
}
