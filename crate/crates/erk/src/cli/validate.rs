//! Cross-checks of the closed forms against the matrix oracles.

use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{log_block_det, markov_two_tap_rate, two_tap_rate_iid, SeriesConfig};
use crate::cellular::{scp_rate, scp_rate_by_expectation, CellularParams};
use crate::error::Result;
use crate::model::{ChannelParams, DerivedQuantities, ErasureProcess};
use crate::oracle::{
    block_split_logdet, exact_finite_rate, logdet_input_erasure, logdet_output_erasure, monte_carlo_rate,
    tridiag_logdet_recursive, ErasurePattern, FirFilter, McConfig,
};

/// Multiplies every tolerance; set to 0 to force failures.
pub const TOL_SCALE_ENV: &str = "ERK_VALIDATE_TOL_SCALE";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn max_block(self) -> usize {
        match self {
            Level::Quick => 16,
            Level::Full => 64,
        }
    }

    fn draws(self) -> usize {
        match self {
            Level::Quick => 40,
            Level::Full => 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    /// Largest deviation, in the units the tolerance is stated in.
    pub max_deviation: f64,
    pub tolerance: f64,
    pub seconds: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<34} {:>7} {:>12} {:>12} {:>8}  result",
            "check", "cases", "max_dev", "tolerance", "secs"
        );
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<34} {:>7} {:>12.3e} {:>12.3e} {:>8.2}  {}",
                c.name,
                c.cases,
                c.max_deviation,
                c.tolerance,
                c.seconds,
                if c.passed() { "PASS" } else { "FAIL" }
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        let _ = writeln!(
            s,
            "{} of {} checks passed",
            self.checks.len() - failed,
            self.checks.len()
        );
        s
    }
}

fn tolerance_scale() -> f64 {
    std::env::var(TOL_SCALE_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|v| *v >= 0.0)
        .unwrap_or(1.0)
}

struct Runner {
    scale: f64,
    checks: Vec<CheckResult>,
}

impl Runner {
    fn run(&mut self, name: &'static str, tolerance: f64, body: impl FnOnce() -> Result<(usize, f64)>) -> Result<()> {
        let start = Instant::now();
        let (cases, max_deviation) = body()?;
        self.checks.push(CheckResult {
            name,
            cases,
            max_deviation,
            tolerance: tolerance * self.scale,
            seconds: start.elapsed().as_secs_f64(),
        });
        Ok(())
    }
}

fn random_taps(rng: &mut ChaCha8Rng, len: usize) -> Result<FirFilter> {
    FirFilter::new(
        (0..len)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

fn random_pattern(rng: &mut ChaCha8Rng, n: usize) -> ErasurePattern {
    let q: f64 = rng.random();
    ErasurePattern::new((0..n).map(|_| rng.random::<f64>() >= q).collect())
}

/// `(1/N)·E[ln det]` over `N` uses from the expected count of delivered runs
/// of each length: `[(N−n−1)⁺q² + 2q](1−q)^n` for `n < N`, `(1−q)^N` for `n = N`.
pub fn finite_block_rate(dq: &DerivedQuantities, q: f64, n_block: usize) -> Result<f64> {
    let mut total = 0.0;
    for n in 1..=n_block {
        let count = if n == n_block {
            (1.0 - q).powi(n as i32)
        } else {
            ((n_block - n - 1) as f64 * q * q + 2.0 * q) * (1.0 - q).powi(n as i32)
        };
        total += count * log_block_det(n, dq)?;
    }
    Ok(total / n_block as f64)
}

/// Runs every check. Deviations are compared against tolerances multiplied
/// by `ERK_VALIDATE_TOL_SCALE` (default 1).
pub fn run_validation(level: Level, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Runner {
        scale: tolerance_scale(),
        checks: Vec::new(),
    };
    let n_max = level.max_block();
    let draws = level.draws();
    let series = SeriesConfig::converged();

    // Deviations below are divided by N so the tolerance reads per symbol.
    r.run("input/output erasure equivalence", 1e-9, || {
        let mut worst: f64 = 0.0;
        for _ in 0..draws {
            let taps = rng.random_range(1..=4);
            let filter = random_taps(&mut rng, taps)?;
            let n = rng.random_range(1..=n_max);
            let pattern = random_pattern(&mut rng, n);
            let snr = rng.random_range(0.0..100.0);
            let d =
                (logdet_input_erasure(&filter, &pattern, snr)? - logdet_output_erasure(&filter, &pattern, snr)?).abs();
            worst = worst.max(d / n as f64);
        }
        Ok((draws, worst))
    })?;

    r.run("block-split identity", 1e-9, || {
        let mut worst: f64 = 0.0;
        for _ in 0..draws {
            let filter = random_taps(&mut rng, 2)?;
            let n = rng.random_range(1..=n_max);
            let pattern = random_pattern(&mut rng, n);
            let snr = rng.random_range(0.0..100.0);
            let d = (block_split_logdet(&filter, &pattern, snr)? - logdet_input_erasure(&filter, &pattern, snr)?).abs();
            worst = worst.max(d / n as f64);
        }
        Ok((draws, worst))
    })?;

    r.run("recursion vs closed form (rel.)", 1e-10, || {
        let n_top = if level == Level::Full { 10_000 } else { 1_000 };
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let b: f64 = rng.random_range(0.0..50.0);
            let a = (4.0 * b * b + 1.0).sqrt() + rng.random_range(0.0..50.0);
            let dq = DerivedQuantities::from_ab(a, b)?;
            for n in [1, 2, 3, 10, 100, n_top] {
                let exact = log_block_det(n, &dq)?;
                let rec = tridiag_logdet_recursive(n, &dq)?;
                worst = worst.max((exact - rec).abs() / exact.abs().max(1e-300));
            }
        }
        Ok((120, worst))
    })?;

    let grid = [(1.0, 1.0, 1.0), (0.8, 0.2, 10.0), (0.5, 0.5, 100.0)];
    let erasures = [0.1, 0.5, 0.9];
    let n_enum = if level == Level::Full { 16 } else { 12 };

    r.run("enumeration vs run-count formula", 1e-12, || {
        let mut worst: f64 = 0.0;
        for &(g0, g1, snr) in &grid {
            let params = ChannelParams::new(g0, g1, snr)?;
            let dq = params.derive()?;
            let filter = FirFilter::from_gains(g0, g1)?;
            for &q in &erasures {
                let enumerated = exact_finite_rate(&filter, snr, &ErasureProcess::iid(q)?, n_enum)?.rate;
                worst = worst.max((enumerated - finite_block_rate(&dq, q, n_enum)?).abs());
            }
        }
        Ok((grid.len() * erasures.len(), worst))
    })?;

    // Reports the largest excursion outside [lower, upper]; zero when inside.
    r.run("finite-N sandwich around series", 1e-12, || {
        let mut worst: f64 = 0.0;
        for &(g0, g1, snr) in &grid {
            let params = ChannelParams::new(g0, g1, snr)?;
            let ln_r = params.derive()?.r.ln();
            let filter = FirFilter::from_gains(g0, g1)?;
            for &q in &erasures {
                let rate = two_tap_rate_iid(&params, q, &series)?.rate;
                let finite = exact_finite_rate(&filter, snr, &ErasureProcess::iid(q)?, n_enum)?.rate;
                let n = n_enum as f64;
                let beta = 2.0 * ln_r;
                let lower = rate - 2.0 * beta * (1.0 - q) / (n * q) - beta * (1.0 - q).powf(n) * ((n + 1.0) * q + 1.0);
                let upper = rate + ln_r / n * (2.0 * (1.0 - q * q) / q + (n + 1.0) * (1.0 - q).powf(n));
                worst = worst.max(lower - finite).max(finite - upper);
            }
        }
        Ok((grid.len() * erasures.len(), worst))
    })?;

    r.run("SCP closed form vs expectation", 1e-12, || {
        let mut worst: f64 = 0.0;
        let mut cases = 0;
        for alpha_sq in [0.0, 0.25, 0.5, 1.0] {
            for snr in [0.5, 10.0, 1000.0] {
                for q in [0.0, 0.3, 0.7, 1.0] {
                    let p = CellularParams::new(alpha_sq, snr, q)?;
                    worst = worst.max((scp_rate(&p)? - scp_rate_by_expectation(&p)?).abs());
                    cases += 1;
                }
            }
        }
        Ok((cases, worst))
    })?;

    r.run("Markov chain with q0 = q1 vs i.i.d.", 1e-12, || {
        let mut worst: f64 = 0.0;
        for &(g0, g1, snr) in &grid {
            let params = ChannelParams::new(g0, g1, snr)?;
            for &q in &erasures {
                let m = markov_two_tap_rate(&params, q, q, &series)?.rate;
                let i = two_tap_rate_iid(&params, q, &series)?.rate;
                worst = worst.max((m - i).abs());
            }
        }
        Ok((grid.len() * erasures.len(), worst))
    })?;

    // Deviation in standard errors of the mean.
    r.run("Monte Carlo vs enumeration (sigmas)", 4.0, || {
        let trials = if level == Level::Full { 100_000 } else { 2_000 };
        let n_block = 12;
        let mut worst: f64 = 0.0;
        let mut cases = 0;
        for (k, &(g0, g1, snr)) in grid.iter().enumerate() {
            let filter = FirFilter::from_gains(g0, g1)?;
            for &q in &[0.2, 0.6] {
                let process = ErasureProcess::iid(q)?;
                let exact = exact_finite_rate(&filter, snr, &process, n_block)?.rate;
                let mc = monte_carlo_rate(
                    &filter,
                    snr,
                    &process,
                    &McConfig::new(n_block, trials, seed ^ k as u64)?,
                )?;
                worst = worst.max((mc.rate - exact).abs() / mc.error_bound.max(1e-300));
                cases += 1;
            }
        }
        Ok((cases, worst))
    })?;

    Ok(Report { checks: r.checks })
}
