//! Exhaustive and Monte-Carlo expectations of the per-symbol log-determinant.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_snr, logdet_output_erasure, split_logdet, ErasurePattern, FirFilter};
use crate::analytic::log_block_det_unchecked;
use crate::error::{Error, Result};
use crate::model::{check_probability, ChannelParams, DerivedQuantities, ErasureProcess, Meta, RateKind, RateResult};
use crate::sum::{compensated_sum, NeumaierSum};

/// Largest block length [`exact_finite_rate`] will enumerate.
pub const MAX_ENUMERATION: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub block_size: usize,
    pub trials: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn new(block_size: usize, trials: usize, seed: u64) -> Result<Self> {
        let cfg = Self {
            block_size,
            trials,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Block size 200, 50 trials.
    pub fn standard(seed: u64) -> Self {
        Self {
            block_size: 200,
            trials: 50,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.block_size == 0 || self.trials == 0 {
            return Err(Error::invalid("block size and trial count must be positive"));
        }
        Ok(())
    }

    /// Generator for one trial: the seed selects the key, the trial index the
    /// stream, so trial `t` sees the same numbers however trials are scheduled.
    pub fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }

    fn meta(&self) -> Meta {
        Meta {
            trials: Some(self.trials),
            seed: Some(self.seed),
            block_size: Some(self.block_size),
            ..Meta::default()
        }
    }
}

/// Sample mean and standard error of the mean, summed in trial order.
fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    if values.windows(2).all(|w| w[0] == w[1]) {
        return (values[0], 0.0);
    }
    let ss = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)));
    (mean, (ss / (n - 1.0) / n).sqrt())
}

fn run_trials(cfg: &McConfig, trial: impl Fn(&mut ChaCha8Rng) -> Result<f64> + Sync) -> Result<Vec<f64>> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| trial(&mut cfg.trial_rng(t)))
        .collect()
}

/// `E[(1/N)·ln det]` over all `2^N` erasure patterns with their exact probabilities.
///
/// Two-tap filters use a table of block determinants; longer filters factor
/// each pattern's Gram matrix densely.
pub fn exact_finite_rate(filter: &FirFilter, snr: f64, process: &ErasureProcess, n: usize) -> Result<RateResult> {
    process.validate()?;
    if n == 0 {
        return Err(Error::invalid("block length must be positive"));
    }
    if n > MAX_ENUMERATION {
        return Err(Error::CapacityExceeded {
            what: "exhaustive enumeration block",
            requested: n,
            limit: MAX_ENUMERATION,
        });
    }
    if matches!(process, ErasureProcess::Markov { .. }) && process.stationary_delivery().is_none() {
        return Err(Error::DegenerateChain);
    }
    let table: Option<Vec<f64>> = match filter.two_tap_derived(snr) {
        Ok(dq) => Some(
            (0..=n)
                .map(|k| if k == 0 { 0.0 } else { log_block_det_unchecked(k, &dq) })
                .collect(),
        ),
        Err(_) => {
            check_snr(snr)?;
            None
        }
    };

    let chunk_bits = n.saturating_sub(10);
    let per_chunk = 1u64 << (n - chunk_bits);
    let partials: Vec<f64> = (0..1u64 << chunk_bits)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = NeumaierSum::new();
            for mask in chunk * per_chunk..(chunk + 1) * per_chunk {
                let pattern = ErasurePattern::from_mask(mask, n);
                // Validated above, so probability cannot fail.
                let p = pattern.probability(process).unwrap_or(0.0);
                if p == 0.0 {
                    continue;
                }
                let logdet = match &table {
                    Some(t) => pattern
                        .runs()
                        .into_iter()
                        .map(|k| t[k])
                        .collect::<NeumaierSum>()
                        .value(),
                    None => logdet_output_erasure(filter, &pattern, snr)?,
                };
                acc.add(p * logdet);
            }
            Ok(acc.value())
        })
        .collect::<Result<_>>()?;
    Ok(RateResult {
        rate: compensated_sum(partials) / n as f64,
        error_bound: 0.0,
        kind: RateKind::ExactEnumeration,
        meta: Meta {
            block_size: Some(n),
            ..Meta::default()
        },
    })
}

/// Monte-Carlo estimate of `E[(1/N)·ln det]`, with the standard error as bound.
///
/// Two-tap filters use the run decomposition; longer filters assemble the
/// `N × N` Gram matrix densely.
pub fn monte_carlo_rate(filter: &FirFilter, snr: f64, process: &ErasureProcess, cfg: &McConfig) -> Result<RateResult> {
    process.validate()?;
    cfg.validate()?;
    if process.stationary_delivery().is_none() {
        return Err(Error::DegenerateChain);
    }
    let n = cfg.block_size;
    let two_tap = filter.two_tap_derived(snr).ok();
    if two_tap.is_none() {
        super::dense::check_dense(n + filter.memory())?;
    }
    let values = run_trials(cfg, |rng| {
        let pattern = ErasurePattern::sample(process, n, rng)?;
        let logdet = match &two_tap {
            Some(dq) => split_logdet(dq, &pattern),
            None => logdet_output_erasure(filter, &pattern, snr)?,
        };
        Ok(logdet / n as f64)
    })?;
    let (mean, stderr) = mean_and_stderr(&values);
    Ok(RateResult {
        rate: mean,
        error_bound: stderr,
        kind: RateKind::MonteCarlo,
        meta: cfg.meta(),
    })
}

/// Monte-Carlo throughput per active user in the soft-handoff uplink with
/// per-block user activity: each realization's log-determinant divided by its
/// number of active users. A block with no active user contributes zero.
pub fn user_activity_throughput_mc(alpha_sq: f64, snr: f64, q: f64, cfg: &McConfig) -> Result<RateResult> {
    check_probability("alpha_sq", alpha_sq)?;
    check_probability("q", q)?;
    cfg.validate()?;
    let dq: DerivedQuantities = ChannelParams::new(1.0, alpha_sq, snr)?.derive()?;
    if q == 1.0 {
        return Ok(RateResult {
            rate: 0.0,
            error_bound: 0.0,
            kind: RateKind::MonteCarlo,
            meta: cfg.meta(),
        }
        .with_note("q = 1: no user is ever active; throughput defined as 0"));
    }
    let process = ErasureProcess::Iid { q };
    let values = run_trials(cfg, |rng| {
        let pattern = ErasurePattern::sample(&process, cfg.block_size, rng)?;
        let active = pattern.delivered();
        Ok(if active == 0 {
            0.0
        } else {
            split_logdet(&dq, &pattern) / active as f64
        })
    })?;
    let (mean, stderr) = mean_and_stderr(&values);
    Ok(RateResult {
        rate: mean,
        error_bound: stderr,
        kind: RateKind::MonteCarlo,
        meta: cfg.meta(),
    })
}
