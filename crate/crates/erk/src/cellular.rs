//! Soft-handoff linear cellular uplink: each mobile reaches its own base
//! station with unit gain and one neighbour with gain `α`, and is shadowed
//! from both (or silent) with probability `q`.
//!
//! Configurations carry `α²` rather than `α`.

use serde::Serialize;

use crate::analytic::{high_snr_two_tap, two_tap_rate_iid, HighSnrCharacterization, SeriesConfig};
use crate::error::{Error, Result};
use crate::model::{check_probability, ChannelParams, RateResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellularParams {
    pub alpha_sq: f64,
    pub snr: f64,
    pub q: f64,
}

impl CellularParams {
    pub fn new(alpha_sq: f64, snr: f64, q: f64) -> Result<Self> {
        let p = Self { alpha_sq, snr, q };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("alpha_sq", self.alpha_sq)?;
        check_probability("q", self.q)?;
        if !self.snr.is_finite() || self.snr < 0.0 {
            return Err(Error::invalid(format!(
                "snr must be finite and nonnegative, got {}",
                self.snr
            )));
        }
        Ok(())
    }

    /// The equivalent two-tap channel `h0 = 1`, `h1 = α`.
    pub fn channel(&self) -> ChannelParams {
        ChannelParams {
            g0: 1.0,
            g1: self.alpha_sq,
            snr: self.snr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Mcp,
    Scp,
    Icfs,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Mcp, Scheme::Scp, Scheme::Icfs];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Mcp => "mcp",
            Scheme::Scp => "scp",
            Scheme::Icfs => "icfs",
        }
    }
}

/// `(ln(1+P), ln(1 + P/(1+α²P)))`: interference-free and interfered link rates.
fn link_rates(p: &CellularParams) -> (f64, f64) {
    let clean = p.snr.ln_1p();
    let interfered = ((1.0 + p.alpha_sq) * p.snr).ln_1p() - (p.alpha_sq * p.snr).ln_1p();
    (clean, interfered)
}

/// Single-cell decoding, treating the neighbour's signal as noise:
/// `(1−q)·ln((1+P)^q (1+(1+α²)P)^{1−q} / (1+α²P)^{1−q})`.
pub fn scp_rate(p: &CellularParams) -> Result<f64> {
    p.validate()?;
    let (clean, interfered) = link_rates(p);
    Ok((1.0 - p.q) * (p.q * clean + (1.0 - p.q) * interfered))
}

/// SCP rate as the four-outcome expectation over own and interfering shadowing.
pub fn scp_rate_by_expectation(p: &CellularParams) -> Result<f64> {
    p.validate()?;
    let mut total = 0.0;
    for sig in [0.0, 1.0] {
        for int in [0.0, 1.0] {
            let w = |e: f64| if e == 1.0 { 1.0 - p.q } else { p.q };
            let sinr = sig * p.snr / (1.0 + p.alpha_sq * int * p.snr);
            total += w(sig) * w(int) * sinr.ln_1p();
        }
    }
    Ok(total)
}

/// Inter-cell frequency sharing: half the band each, no interference.
pub fn icfs_rate(p: &CellularParams) -> Result<f64> {
    p.validate()?;
    Ok(0.5 * (1.0 - p.q) * p.snr.ln_1p())
}

/// Per-cell sum rate under joint decoding, equal to the two-tap input-erasure
/// rate with `h0 = 1`, `h1 = α`.
pub fn mcp_rate(p: &CellularParams, cfg: &SeriesConfig) -> Result<RateResult> {
    p.validate()?;
    two_tap_rate_iid(&p.channel(), p.q, cfg)
}

pub fn scheme_rate(scheme: Scheme, p: &CellularParams, cfg: &SeriesConfig) -> Result<f64> {
    match scheme {
        Scheme::Mcp => Ok(mcp_rate(p, cfg)?.rate),
        Scheme::Scp => scp_rate(p),
        Scheme::Icfs => icfs_rate(p),
    }
}

/// High-SNR slope and offset (`rate ≈ s_inf·(ln P − l_inf)`); `p.snr` is ignored.
///
/// SCP with `α > 0` keeps slope `q(1−q)`; its offset is
/// `−((1−q)/q)·ln(1 + 1/α²)`. Where the slope vanishes the offset is reported
/// as 0.
pub fn high_snr_triple(scheme: Scheme, p: &CellularParams, cfg: &SeriesConfig) -> Result<HighSnrCharacterization> {
    p.validate()?;
    let q = p.q;
    Ok(match scheme {
        Scheme::Mcp => high_snr_two_tap(1.0, p.alpha_sq, q, cfg)?,
        Scheme::Icfs => HighSnrCharacterization::exact(0.5 * (1.0 - q), 0.0),
        Scheme::Scp if p.alpha_sq == 0.0 => HighSnrCharacterization::exact(1.0 - q, 0.0),
        Scheme::Scp if q == 0.0 || q == 1.0 => HighSnrCharacterization::exact(0.0, 0.0),
        Scheme::Scp => {
            let offset = -((1.0 - q) / q) * (1.0 / p.alpha_sq).ln_1p();
            HighSnrCharacterization::exact(q * (1.0 - q), offset)
        }
    })
}

/// Smallest `q` resolution of [`scp_icfs_crossover`].
pub const CROSSOVER_TOLERANCE: f64 = 1e-6;

/// Erasure rate where ICFS and SCP rates cross, by bisection on their
/// difference over `(0, 1)`. `None` without a strict sign change.
pub fn scp_icfs_crossover(alpha_sq: f64, snr: f64) -> Result<Option<f64>> {
    CellularParams::new(alpha_sq, snr, 0.0)?;
    let diff = |q: f64| -> f64 {
        let p = CellularParams { alpha_sq, snr, q };
        // Both closed forms are infallible once the parameters validate.
        icfs_rate(&p).unwrap_or(0.0) - scp_rate(&p).unwrap_or(0.0)
    };
    let (mut lo, mut hi) = (0.0, 1.0 - 1e-12);
    let (f_lo, f_hi) = (diff(lo), diff(hi));
    if f_lo * f_hi >= 0.0 || (f_lo * f_hi).is_nan() {
        return Ok(None);
    }
    while hi - lo > CROSSOVER_TOLERANCE * 1e-3 {
        let mid = 0.5 * (lo + hi);
        let f_mid = diff(mid);
        if f_mid == 0.0 {
            return Ok(Some(mid));
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeValue {
    pub rate: f64,
    /// Throughput per active user under the user-activity model.
    pub throughput: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeComparison {
    pub mcp: SchemeValue,
    pub scp: SchemeValue,
    pub icfs: SchemeValue,
    pub crossover_q: Option<f64>,
}

impl SchemeComparison {
    pub fn get(&self, scheme: Scheme) -> SchemeValue {
        match scheme {
            Scheme::Mcp => self.mcp,
            Scheme::Scp => self.scp,
            Scheme::Icfs => self.icfs,
        }
    }
}

/// Rates of all three schemes at one operating point, with throughputs per
/// active user when `q < 1`.
pub fn compare_schemes(p: &CellularParams, cfg: &SeriesConfig) -> Result<SchemeComparison> {
    p.validate()?;
    let throughputs = (p.q < 1.0).then(|| active_user_throughputs(p, cfg)).transpose()?;
    let value = |rate: f64, i: usize| SchemeValue {
        rate,
        throughput: throughputs.map(|t| t[i]),
    };
    Ok(SchemeComparison {
        mcp: value(mcp_rate(p, cfg)?.rate, 0),
        scp: value(scp_rate(p)?, 1),
        icfs: value(icfs_rate(p)?, 2),
        crossover_q: scp_icfs_crossover(p.alpha_sq, p.snr)?,
    })
}

/// Per-active-user throughputs `[mcp, scp, icfs]`, i.e. each shadowing rate
/// divided by `1 − q`, with the factor cancelled analytically where possible.
fn active_user_throughputs(p: &CellularParams, cfg: &SeriesConfig) -> Result<[f64; 3]> {
    let (clean, interfered) = link_rates(p);
    let mcp = mcp_rate(p, cfg)?.rate / (1.0 - p.q);
    let scp = p.q * clean + (1.0 - p.q) * interfered;
    let icfs = 0.5 * clean;
    Ok([mcp, scp, icfs])
}

/// Throughputs per active user under per-block user activity. Rejects `q = 1`.
pub fn user_activity_throughputs(p: &CellularParams, cfg: &SeriesConfig) -> Result<SchemeComparison> {
    p.validate()?;
    if p.q >= 1.0 {
        return Err(Error::invalid("throughput per active user is undefined when q = 1"));
    }
    compare_schemes(p, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P14: f64 = 25.118864315095795;

    fn cp(alpha_sq: f64, snr: f64, q: f64) -> CellularParams {
        CellularParams::new(alpha_sq, snr, q).unwrap()
    }

    #[test]
    fn scp_special_cases() {
        let snr = 9.0;
        assert!((scp_rate(&cp(0.0, snr, 0.3)).unwrap() - 0.7 * 10f64.ln()).abs() < 1e-14);
        let v = scp_rate(&cp(0.5, snr, 0.0)).unwrap();
        assert!((v - (1.0 + snr / (1.0 + 0.5 * snr)).ln()).abs() < 1e-14);
    }

    #[test]
    fn scp_closed_form_matches_interference_expression() {
        let (a2, q) = (0.5, 0.3);
        let p = cp(a2, P14, q);
        let expected = (1.0 - q)
            * ((1.0 + P14).powf(q) * (1.0 + (1.0 + a2) * P14).powf(1.0 - q) / (1.0 + a2 * P14).powf(1.0 - q)).ln();
        assert!((scp_rate(&p).unwrap() - expected).abs() < 1e-12);
        assert!((scp_rate(&p).unwrap() - scp_rate_by_expectation(&p).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn icfs_values() {
        assert!((icfs_rate(&cp(0.5, 3.0, 0.0)).unwrap() - 0.5 * 4f64.ln()).abs() < 1e-15);
        assert_eq!(icfs_rate(&cp(0.5, 3.0, 1.0)).unwrap(), 0.0);
        let e2 = std::f64::consts::E.powi(2) - 1.0;
        assert!((icfs_rate(&cp(0.2, e2, 0.5)).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn mcp_special_cases() {
        let cfg = SeriesConfig::converged();
        let v = mcp_rate(&cp(0.0, 9.0, 0.4), &cfg).unwrap().rate;
        assert!((v - 0.6 * 10f64.ln()).abs() < 1e-12);
        let (a2, snr) = (0.5, P14);
        let a = 1.0 + snr * (1.0 + a2);
        let b = snr * a2.sqrt();
        let r = 0.5 * (a + (a * a - 4.0 * b * b).sqrt());
        assert!((mcp_rate(&cp(a2, snr, 0.0), &cfg).unwrap().rate - r.ln()).abs() < 1e-12);
    }

    #[test]
    fn high_snr_pairs() {
        let cfg = SeriesConfig::converged();
        let scp = high_snr_triple(Scheme::Scp, &cp(0.5, 1.0, 0.5), &cfg).unwrap();
        assert_eq!(scp.s_inf, 0.25);
        let icfs = high_snr_triple(Scheme::Icfs, &cp(0.5, 1.0, 0.2), &cfg).unwrap();
        assert!((icfs.s_inf - 0.4).abs() < 1e-15);
        assert_eq!(icfs.l_inf, 0.0);
        let mcp = high_snr_triple(Scheme::Mcp, &cp(0.0, 1.0, 0.3), &cfg).unwrap();
        assert!((mcp.s_inf - 0.7).abs() < 1e-15);
        assert_eq!(mcp.l_inf, 0.0);
    }

    #[test]
    fn high_snr_pairs_match_rates() {
        let cfg = SeriesConfig::converged();
        let snr = 1e10;
        for &(a2, q) in &[(0.5, 0.3), (0.2, 0.6), (1.0, 0.4)] {
            let p = cp(a2, snr, q);
            for scheme in Scheme::ALL {
                let h = high_snr_triple(scheme, &p, &cfg).unwrap();
                let rate = scheme_rate(scheme, &p, &cfg).unwrap();
                assert!(
                    (rate - h.approx_rate(snr)).abs() < 1e-4,
                    "{scheme:?} {a2} {q}: {rate} vs {}",
                    h.approx_rate(snr)
                );
            }
        }
    }

    #[test]
    fn crossover_cases() {
        assert_eq!(scp_icfs_crossover(0.0, P14).unwrap(), None);
        assert_eq!(scp_icfs_crossover(0.5, 0.0).unwrap(), None);
        let q = scp_icfs_crossover(0.5, P14).unwrap().unwrap();
        assert!(q > 0.0 && q < 1.0);
        let d = |q| icfs_rate(&cp(0.5, P14, q)).unwrap() - scp_rate(&cp(0.5, P14, q)).unwrap();
        assert!(d(q - CROSSOVER_TOLERANCE) * d(q + CROSSOVER_TOLERANCE) < 0.0);
        // The normalized difference is linear in q, giving the root in closed form.
        let (l1, li) = link_rates(&cp(0.5, P14, 0.0));
        let exact = (0.5 * l1 - li) / (l1 - li);
        assert!((q - exact).abs() < CROSSOVER_TOLERANCE);
    }

    #[test]
    fn throughputs_per_active_user() {
        let cfg = SeriesConfig::converged();
        let base = user_activity_throughputs(&cp(0.5, P14, 0.0), &cfg).unwrap();
        assert_eq!(base.mcp.throughput, Some(base.mcp.rate));
        assert!((base.scp.throughput.unwrap() - base.scp.rate).abs() < 1e-15);
        for k in 0..10 {
            let q = k as f64 / 10.0;
            let c = user_activity_throughputs(&cp(0.5, P14, q), &cfg).unwrap();
            assert_eq!(c.icfs.throughput, Some(0.5 * P14.ln_1p()));
        }
        assert!(user_activity_throughputs(&cp(0.5, P14, 1.0), &cfg).is_err());
        assert!(compare_schemes(&cp(0.5, P14, 1.0), &cfg)
            .unwrap()
            .mcp
            .throughput
            .is_none());
    }

    #[test]
    fn mcp_increases_with_alpha() {
        let cfg = SeriesConfig::converged();
        for &q in &[0.0, 0.2, 0.7] {
            let mut prev = 0.0;
            for k in 0..=100 {
                let alpha = k as f64 / 100.0;
                let v = mcp_rate(&cp(alpha * alpha, P14, q), &cfg).unwrap().rate;
                assert!(v >= prev - 1e-15, "q={q} alpha={alpha}");
                prev = v;
            }
        }
    }

    proptest! {
        #[test]
        fn scp_oracle_agrees(a2 in 0.0f64..=1.0, snr in 0.0f64..1e4, q in 0.0f64..=1.0) {
            let p = cp(a2, snr, q);
            prop_assert!((scp_rate(&p).unwrap() - scp_rate_by_expectation(&p).unwrap()).abs() <= 1e-12 * (1.0 + snr.ln_1p()));
        }
    }
}
