//! Channel parameters, erasure laws and rate results shared by every module.

use serde::Serialize;

use crate::error::{Error, Result};

/// Two-tap channel described by squared tap magnitudes and a linear input power.
///
/// Tap phases are not represented: every rate computed from these parameters
/// is invariant to them. The matrix oracle has its own complex [`FirFilter`].
///
/// [`FirFilter`]: crate::oracle::FirFilter
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    pub g0: f64,
    pub g1: f64,
    pub snr: f64,
}

impl ChannelParams {
    pub fn new(g0: f64, g1: f64, snr: f64) -> Result<Self> {
        let params = Self { g0, g1, snr };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("g0", self.g0), ("g1", self.g1), ("snr", self.snr)] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {v}")));
            }
            if v < 0.0 {
                return Err(Error::invalid(format!("{name} must be nonnegative, got {v}")));
            }
        }
        if self.g0 + self.g1 <= 0.0 {
            return Err(Error::invalid("g0 + g1 must be positive"));
        }
        Ok(())
    }

    pub fn derive(&self) -> Result<DerivedQuantities> {
        derive(self)
    }
}

/// The scalars `a`, `b` and the roots `r >= 1 > s >= 0` of `x² − a·x + b² = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedQuantities {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub s: f64,
}

impl DerivedQuantities {
    /// Builds the roots from `a` and `b` directly. Requires `a² − 4b² ≥ 1`, which
    /// every physical channel satisfies.
    pub fn from_ab(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a < 1.0 || b < 0.0 {
            return Err(Error::invalid(format!(
                "need finite a >= 1 and b >= 0, got a={a}, b={b}"
            )));
        }
        // (a − 2b)(a + 2b) keeps the discriminant accurate when a ≈ 2b.
        let disc = (a - 2.0 * b) * (a + 2.0 * b);
        if disc < 1.0 - 1e-12 * a * a {
            return Err(Error::invalid(format!("a² − 4b² must be at least 1, got {disc}")));
        }
        let r = 0.5 * (a + disc.max(0.0).sqrt());
        let s = if b > 0.0 { b * b / r } else { 0.0 };
        Ok(Self { a, b, r, s })
    }

    /// `s / r`, in `[0, 1)`.
    pub fn ratio(&self) -> f64 {
        self.s / self.r
    }
}

pub fn derive(params: &ChannelParams) -> Result<DerivedQuantities> {
    params.validate()?;
    let ChannelParams { g0, g1, snr } = *params;
    let a = 1.0 + snr * (g0 + g1);
    let b = snr * (g0 * g1).sqrt();
    // a² − 4b² = 1 + 2P(g0 + g1) + P²(g0 − g1)², which never cancels.
    let diff = snr * (g0 - g1);
    let disc = 1.0 + 2.0 * snr * (g0 + g1) + diff * diff;
    let r = 0.5 * (a + disc.sqrt());
    let s = if b > 0.0 { b * b / r } else { 0.0 };
    Ok(DerivedQuantities { a, b, r, s })
}

/// Probability law of the erasure indicators. `1` marks a delivered symbol,
/// `0` an erased one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ErasureProcess {
    Iid {
        q: f64,
    },
    /// First-order chain with `Pr(0 → 1) = 1 − q0` and `Pr(1 → 0) = q1`.
    Markov {
        q0: f64,
        q1: f64,
    },
}

impl ErasureProcess {
    pub fn iid(q: f64) -> Result<Self> {
        check_probability("q", q)?;
        Ok(Self::Iid { q })
    }

    pub fn markov(q0: f64, q1: f64) -> Result<Self> {
        check_probability("q0", q0)?;
        check_probability("q1", q1)?;
        Ok(Self::Markov { q0, q1 })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Iid { q } => check_probability("q", q),
            Self::Markov { q0, q1 } => {
                check_probability("q0", q0)?;
                check_probability("q1", q1)
            }
        }
    }

    /// `(q0, q1)` of the equivalent chain; an i.i.d. law is the chain with `q0 = q1 = q`.
    pub fn transitions(&self) -> (f64, f64) {
        match *self {
            Self::Iid { q } => (q, q),
            Self::Markov { q0, q1 } => (q0, q1),
        }
    }

    /// Stationary probability of a delivered symbol. `None` when both states are
    /// absorbing (`q0 = 1`, `q1 = 0`) and no unique stationary law exists.
    pub fn stationary_delivery(&self) -> Option<f64> {
        match *self {
            Self::Iid { q } => Some(1.0 - q),
            Self::Markov { q0, q1 } => {
                let denom = 1.0 - q0 + q1;
                (denom > 0.0).then(|| (1.0 - q0) / denom)
            }
        }
    }

    /// Long-run fraction of erased symbols.
    pub fn erasure_rate(&self) -> Option<f64> {
        self.stationary_delivery().map(|p| 1.0 - p)
    }
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RateKind {
    ClosedForm,
    TruncatedSeries,
    ExactEnumeration,
    MonteCarlo,
}

/// Provenance attached to a [`RateResult`].
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Meta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_size: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// A rate in nats per channel use together with its error bound.
///
/// For [`RateKind::TruncatedSeries`] the true value lies in
/// `[rate, rate + error_bound]`. For [`RateKind::MonteCarlo`] the bound is the
/// standard error of the mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateResult {
    pub rate: f64,
    pub error_bound: f64,
    pub kind: RateKind,
    pub meta: Meta,
}

impl RateResult {
    pub fn closed_form(rate: f64) -> Self {
        Self {
            rate,
            error_bound: 0.0,
            kind: RateKind::ClosedForm,
            meta: Meta::default(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.meta.notes.push(note.into());
        self
    }
}
