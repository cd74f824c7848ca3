//! Closed-form and series rates of the two-tap input-erasure channel.
//!
//! Every series here has nonnegative terms (for the rates) and a closed-form
//! geometric-arithmetic tail bound, so a truncated evaluation is a certified
//! lower bound `rate <= R <= rate + error_bound`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{check_probability, ChannelParams, DerivedQuantities, ErasureProcess, Meta, RateKind, RateResult};
use crate::sum::NeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesConfig {
    pub max_terms: usize,
    /// Evaluation stops once the analytic tail bound drops to this value (nats).
    pub target_tail_bound: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            max_terms: 200,
            target_tail_bound: 1e-12,
        }
    }
}

impl SeriesConfig {
    pub fn new(max_terms: usize, target_tail_bound: f64) -> Result<Self> {
        let cfg = Self {
            max_terms,
            target_tail_bound,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Enough terms to reach the target for any erasure rate above ~1e-3.
    pub fn converged() -> Self {
        Self {
            max_terms: 100_000,
            target_tail_bound: 1e-13,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(Error::invalid("max_terms must be positive"));
        }
        if self.target_tail_bound.is_nan() || self.target_tail_bound < 0.0 {
            return Err(Error::invalid("target_tail_bound must be nonnegative"));
        }
        Ok(())
    }
}

/// High-SNR slope and offset: `rate ≈ s_inf · (ln P − l_inf)` as `P → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HighSnrCharacterization {
    pub s_inf: f64,
    /// Power offset in nats of `ln P`.
    pub l_inf: f64,
    /// Bound on `|l_inf − l_inf(truncated)|`; zero for closed forms.
    pub l_inf_error_bound: f64,
    pub terms: usize,
}

impl HighSnrCharacterization {
    pub(crate) fn exact(s_inf: f64, l_inf: f64) -> Self {
        Self {
            s_inf,
            l_inf,
            l_inf_error_bound: 0.0,
            terms: 0,
        }
    }

    /// Affine high-SNR approximation of the rate at linear power `snr`.
    pub fn approx_rate(&self, snr: f64) -> f64 {
        self.s_inf * (snr.ln() - self.l_inf)
    }
}

/// `ln det D_n`, where `D_n` is the `n × n` tridiagonal Toeplitz matrix with
/// diagonal `a` and off-diagonals `b`.
///
/// Evaluates `ln((r^{n+1} − s^{n+1}) / (r − s))` as
/// `n·ln r + ln(1 − ρ^{n+1}) − ln(1 − ρ)` with `ρ = s/r`, which stays finite for
/// any `n`.
pub fn log_block_det(n: usize, dq: &DerivedQuantities) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("block size must be at least 1"));
    }
    Ok(log_block_det_unchecked(n, dq))
}

pub(crate) fn log_block_det_unchecked(n: usize, dq: &DerivedQuantities) -> f64 {
    let base = n as f64 * dq.r.ln();
    if dq.s == 0.0 {
        return base;
    }
    let ln_rho = dq.ratio().ln();
    let head = -(((n + 1) as f64) * ln_rho).exp_m1();
    let tail = -ln_rho.exp_m1();
    base + head.ln() - tail.ln()
}

/// Outcome of a truncated weighted series.
struct Series {
    sum: f64,
    tail: f64,
    terms: usize,
}

/// Sums `prefactor · Σ_{n≥1} ratio^{n−1} · term(n)`, stopping at `cfg.max_terms`
/// or once `tail(n)` (a bound on everything after term `n`) meets the target.
fn weighted_series(
    prefactor: f64,
    ratio: f64,
    cfg: &SeriesConfig,
    term: impl Fn(usize) -> f64,
    tail: impl Fn(usize) -> f64,
) -> Series {
    let mut acc = NeumaierSum::new();
    let mut weight = 1.0;
    let mut n = 0;
    let mut bound = f64::INFINITY;
    while n < cfg.max_terms {
        n += 1;
        acc.add(prefactor * weight * term(n));
        weight *= ratio;
        bound = tail(n);
        if bound <= cfg.target_tail_bound {
            break;
        }
    }
    Series {
        sum: acc.value(),
        tail: bound,
        terms: n,
    }
}

/// `Σ_{n>N} x^{n−1} (n+1) = x^N (1 + (N+1)(1−x)) / (1−x)²` for `0 <= x < 1`.
fn shifted_arith_geo_tail(x: f64, terms: usize) -> f64 {
    let q = 1.0 - x;
    x.powi(terms as i32) * (1.0 + (terms + 1) as f64 * q) / (q * q)
}

/// Run-weighted log-determinant series shared by the i.i.d. and Markov rates:
/// `c · Σ_{n≥1} x^{n−1} ln det D_n` with `0 <= x < 1`.
fn run_series(dq: &DerivedQuantities, c: f64, x: f64, cfg: &SeriesConfig) -> RateResult {
    let ln_r = dq.r.ln();
    let series = weighted_series(
        c,
        x,
        cfg,
        |n| log_block_det_unchecked(n, dq),
        // ln det D_n <= (n+1) ln r because r − s >= 1.
        |n| c * shifted_arith_geo_tail(x, n) * ln_r,
    );
    RateResult {
        rate: series.sum.max(0.0),
        error_bound: series.tail,
        kind: RateKind::TruncatedSeries,
        meta: Meta {
            terms: Some(series.terms),
            ..Meta::default()
        },
    }
}

/// Achievable rate with i.i.d. Gaussian inputs and i.i.d. erasures of rate `q`.
///
/// `q = 1` returns exactly zero and `q = 0` returns the erasure-free capacity
/// `ln r`; in between the run-decomposition series is truncated per `cfg`.
pub fn two_tap_rate_iid(params: &ChannelParams, q: f64, cfg: &SeriesConfig) -> Result<RateResult> {
    check_probability("q", q)?;
    cfg.validate()?;
    let dq = params.derive()?;
    if q == 1.0 {
        return Ok(RateResult::closed_form(0.0));
    }
    if q == 0.0 {
        return Ok(RateResult::closed_form(dq.r.ln()));
    }
    Ok(run_series(&dq, q * q * (1.0 - q), 1.0 - q, cfg))
}

/// Achievable rate when erasures follow a two-state chain with
/// `Pr(erased → delivered) = 1 − q0` and `Pr(delivered → erased) = q1`.
pub fn markov_two_tap_rate(params: &ChannelParams, q0: f64, q1: f64, cfg: &SeriesConfig) -> Result<RateResult> {
    check_probability("q0", q0)?;
    check_probability("q1", q1)?;
    cfg.validate()?;
    let dq = params.derive()?;
    let denom = 1.0 - q0 + q1;
    if denom <= 0.0 {
        return Err(Error::DegenerateChain);
    }
    if q1 == 0.0 {
        // Delivery is absorbing and the stationary chain never erases.
        return Ok(RateResult::closed_form(dq.r.ln()));
    }
    let c = q1 * q1 * (1.0 - q0) / denom;
    Ok(run_series(&dq, c, 1.0 - q1, cfg))
}

pub fn one_tap_rate(g0: f64, snr: f64, q: f64) -> Result<f64> {
    ChannelParams::new(g0, 0.0, snr)?;
    check_probability("q", q)?;
    Ok((1.0 - q) * (snr * g0).ln_1p())
}

/// Capacity with no erasures, `ln r`, which bounds every erasure rate from above.
pub fn erasure_free_upper_bound(params: &ChannelParams) -> Result<f64> {
    Ok(params.derive()?.r.ln())
}

/// Probability that an interior maximal run of delivered symbols has length `n`
/// and starts at a given index. Returns 0 for `n = 0` and for a chain with no
/// stationary law.
pub fn run_length_pmf(process: &ErasureProcess, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    match *process {
        ErasureProcess::Iid { q } => q * q * (1.0 - q).powi(n as i32),
        ErasureProcess::Markov { q0, q1 } => {
            let denom = 1.0 - q0 + q1;
            if denom <= 0.0 {
                return 0.0;
            }
            q1 * q1 * (1.0 - q0) / denom * (1.0 - q1).powi(n as i32 - 1)
        }
    }
}

/// `ln((g0^{n+1} − g1^{n+1}) / (g0 − g1))`, continuous through `g0 = g1`.
pub(crate) fn log_gain_block(n: usize, g0: f64, g1: f64) -> f64 {
    let (hi, lo) = if g0 >= g1 { (g0, g1) } else { (g1, g0) };
    let t = lo / hi;
    let geometric = if t == 0.0 {
        0.0
    } else if t == 1.0 {
        ((n + 1) as f64).ln()
    } else {
        let ln_t = t.ln();
        (-(((n + 1) as f64) * ln_t).exp_m1()).ln() - (-ln_t.exp_m1()).ln()
    };
    n as f64 * hi.ln() + geometric
}

/// High-SNR slope `1 − q` and power offset
/// `−q² Σ (1−q)^{n−1} ln((g0^{n+1} − g1^{n+1}) / (g0 − g1))`.
pub fn high_snr_two_tap(g0: f64, g1: f64, q: f64, cfg: &SeriesConfig) -> Result<HighSnrCharacterization> {
    ChannelParams::new(g0, g1, 1.0)?;
    check_probability("q", q)?;
    cfg.validate()?;
    let hi = g0.max(g1);
    if q == 0.0 {
        return Ok(HighSnrCharacterization::exact(1.0, -hi.ln()));
    }
    // |ln term_n| <= n·|ln max(g0, g1)| + ln(n+1) <= n·(|ln max| + 1).
    let k = hi.ln().abs() + 1.0;
    let x = 1.0 - q;
    let c = q * q;
    let series = weighted_series(
        c,
        x,
        cfg,
        |n| log_gain_block(n, g0, g1),
        |n| k * x.powi(n as i32) * ((n + 1) as f64 * q + x),
    );
    Ok(HighSnrCharacterization {
        s_inf: 1.0 - q,
        l_inf: -series.sum,
        l_inf_error_bound: series.tail,
        terms: series.terms,
    })
}
