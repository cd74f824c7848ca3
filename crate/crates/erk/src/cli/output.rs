//! CSV tables and JSON records.

use serde::Serialize;
use serde_json::{json, Value};

use crate::model::RateResult;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rate units of emitted values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    pub fn from_bits_flag(bits: bool) -> Self {
        if bits {
            Units::Bits
        } else {
            Units::Nats
        }
    }

    /// Multiplier from nats.
    pub fn scale(self) -> f64 {
        match self {
            Units::Nats => 1.0,
            Units::Bits => std::f64::consts::LOG2_E,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

/// How SNR values given on the command line were read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrScale {
    Db,
    Linear,
}

impl SnrScale {
    pub fn from_linear_flag(linear: bool) -> Self {
        if linear {
            SnrScale::Linear
        } else {
            SnrScale::Db
        }
    }

    pub fn to_linear(self, value: f64) -> f64 {
        match self {
            SnrScale::Db => crate::db_to_linear(value),
            SnrScale::Linear => value,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SnrScale::Db => "db",
            SnrScale::Linear => "linear",
        }
    }
}

/// Formats with 12 significant digits, trimming trailing zeros.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnStyle {
    Line,
    /// Scatter points; the named column holds their standard errors.
    Points {
        stderr: usize,
    },
    /// Auxiliary data not drawn on its own.
    Hidden,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<Option<f64>>,
    pub style: ColumnStyle,
}

/// Columnar data over a shared abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub x_name: String,
    pub x: Vec<f64>,
    pub columns: Vec<Column>,
    /// Header comment lines (without the leading `# `).
    pub stamp: Vec<String>,
}

impl Table {
    pub fn new(x_name: impl Into<String>, x: Vec<f64>) -> Self {
        Self {
            x_name: x_name.into(),
            x,
            columns: Vec::new(),
            stamp: Vec::new(),
        }
    }

    pub fn push_line(&mut self, name: impl Into<String>, values: Vec<f64>) {
        self.columns.push(Column {
            name: name.into(),
            values: values.into_iter().map(Some).collect(),
            style: ColumnStyle::Line,
        });
    }

    /// Adds a point series and its standard-error column.
    pub fn push_points(&mut self, name: impl Into<String>, values: Vec<Option<(f64, f64)>>) {
        let name = name.into();
        let stderr_index = self.columns.len() + 1;
        self.columns.push(Column {
            name: name.clone(),
            values: values.iter().map(|v| v.map(|(m, _)| m)).collect(),
            style: ColumnStyle::Points { stderr: stderr_index },
        });
        self.columns.push(Column {
            name: format!("{name}_stderr"),
            values: values.iter().map(|v| v.map(|(_, s)| s)).collect(),
            style: ColumnStyle::Hidden,
        });
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    /// Multiplies every column (not the abscissa) by `factor`.
    pub fn scale_values(&mut self, factor: f64) {
        for col in &mut self.columns {
            for v in col.values.iter_mut().flatten() {
                *v *= factor;
            }
        }
    }

    /// Comma-separated, LF line endings, empty cells for missing values.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in &self.stamp {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.x_name);
        for col in &self.columns {
            out.push(',');
            out.push_str(&col.name);
        }
        out.push('\n');
        for (i, &x) in self.x.iter().enumerate() {
            out.push_str(&fmt_sig(x));
            for col in &self.columns {
                out.push(',');
                if let Some(v) = col.values[i] {
                    out.push_str(&fmt_sig(v));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// The `{rate, error_bound, kind, units, params, meta}` record.
pub fn rate_record(result: &RateResult, units: Units, snr_scale: SnrScale, params: Value, extra_meta: Value) -> Value {
    let mut meta = serde_json::to_value(&result.meta).unwrap_or_else(|_| json!({}));
    if let (Value::Object(m), Value::Object(extra)) = (&mut meta, extra_meta) {
        m.extend(extra);
    }
    if let Value::Object(m) = &mut meta {
        m.insert("snr_scale".into(), json!(snr_scale.name()));
        m.insert("version".into(), json!(VERSION));
    }
    json!({
        "rate": result.rate * units.scale(),
        "error_bound": result.error_bound * units.scale(),
        "kind": result.kind,
        "units": units.name(),
        "params": params,
        "meta": meta,
    })
}
