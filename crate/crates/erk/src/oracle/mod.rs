//! First-principles evaluation of the erasure-channel log-determinants.
//!
//! Everything in this module builds the channel matrices explicitly (or walks
//! the erasure pattern directly) and serves as ground truth for the series in
//! [`crate::analytic`].

mod dense;
mod mc;
mod pattern;

pub use dense::{dense_cap, CMatrix, DEFAULT_DENSE_CAP};
pub use mc::{exact_finite_rate, monte_carlo_rate, user_activity_throughput_mc, McConfig, MAX_ENUMERATION};
pub use pattern::ErasurePattern;

use num_complex::Complex64;

use crate::analytic::log_block_det_unchecked;
use crate::error::{Error, Result};
use crate::model::{ChannelParams, DerivedQuantities};
use crate::sum::NeumaierSum;

/// Causal FIR channel `h_0, …, h_L`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirFilter {
    taps: Vec<Complex64>,
}

impl FirFilter {
    pub fn new(taps: Vec<Complex64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::invalid("filter needs at least one tap"));
        }
        if taps.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
            return Err(Error::invalid("filter taps must be finite"));
        }
        if taps.iter().all(|t| t.norm_sqr() == 0.0) {
            return Err(Error::invalid("filter needs a nonzero tap"));
        }
        Ok(Self { taps })
    }

    pub fn real(taps: &[f64]) -> Result<Self> {
        Self::new(taps.iter().map(|&t| Complex64::new(t, 0.0)).collect())
    }

    /// Real two-tap filter with `|h0|² = g0` and `|h1|² = g1`.
    pub fn from_gains(g0: f64, g1: f64) -> Result<Self> {
        ChannelParams::new(g0, g1, 0.0)?;
        Self::real(&[g0.sqrt(), g1.sqrt()])
    }

    pub fn taps(&self) -> &[Complex64] {
        &self.taps
    }

    /// Filter memory `L`.
    pub fn memory(&self) -> usize {
        self.taps.len() - 1
    }

    /// Squared tap magnitudes of a two-tap filter.
    pub fn two_tap_gains(&self) -> Result<(f64, f64)> {
        match self.taps.as_slice() {
            [h0, h1] => Ok((h0.norm_sqr(), h1.norm_sqr())),
            _ => Err(Error::invalid(format!(
                "expected a two-tap filter, got {} taps",
                self.taps.len()
            ))),
        }
    }

    pub(crate) fn two_tap_derived(&self, snr: f64) -> Result<DerivedQuantities> {
        let (g0, g1) = self.two_tap_gains()?;
        ChannelParams::new(g0, g1, snr)?.derive()
    }
}

/// The `(n+L) × n` Toeplitz convolution matrix with `[H]_{i,j} = h_{i−j}`.
pub fn build_channel_matrix(filter: &FirFilter, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::invalid("block length must be positive"));
    }
    let rows = n + filter.memory();
    dense::check_dense(rows)?;
    let mut h = CMatrix::zeros(rows, n);
    for j in 0..n {
        for (k, &tap) in filter.taps().iter().enumerate() {
            h[(j + k, j)] = tap;
        }
    }
    Ok(h)
}

pub(crate) fn check_snr(snr: f64) -> Result<()> {
    if !snr.is_finite() || snr < 0.0 {
        return Err(Error::invalid(format!("snr must be finite and nonnegative, got {snr}")));
    }
    Ok(())
}

/// `ln det(I_{N+L} + P·H·E·Eᴴ·Hᴴ)`: erasures applied to the filter inputs.
pub fn logdet_input_erasure(filter: &FirFilter, pattern: &ErasurePattern, snr: f64) -> Result<f64> {
    check_snr(snr)?;
    let h = build_channel_matrix(filter, pattern.len())?;
    let rows = h.rows();
    let mut m = CMatrix::identity(rows);
    for (k, _) in pattern.bits().iter().enumerate().filter(|(_, &b)| b) {
        for i in 0..rows {
            let hik = h[(i, k)];
            if hik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..=i {
                m[(i, j)] += snr * hik * h[(j, k)].conj();
            }
        }
    }
    m.hermitian_logdet()
}

/// `ln det(I_N + P·Eᴴ·Hᴴ·H·E)`: the same channel with erasures at the output side.
pub fn logdet_output_erasure(filter: &FirFilter, pattern: &ErasurePattern, snr: f64) -> Result<f64> {
    check_snr(snr)?;
    let h = build_channel_matrix(filter, pattern.len())?;
    let n = pattern.len();
    let e = pattern.bits();
    let mut m = CMatrix::identity(n);
    for i in 0..n {
        if !e[i] {
            continue;
        }
        for j in 0..=i {
            if !e[j] {
                continue;
            }
            let mut g = Complex64::new(0.0, 0.0);
            for k in 0..h.rows() {
                g += h[(k, i)].conj() * h[(k, j)];
            }
            m[(i, j)] += snr * g;
        }
    }
    m.hermitian_logdet()
}

/// `ln det D_n` by the three-term determinant recursion, run on the ratios
/// `t_k = det D_k / det D_{k−1}` (`t_1 = a`, `t_k = a − b²/t_{k−1}`).
pub fn tridiag_logdet_recursive(n: usize, dq: &DerivedQuantities) -> Result<f64> {
    Ok(*tridiag_logdet_prefix(n, dq)?.last().expect("n >= 1"))
}

/// `[ln det D_1, …, ln det D_n]` from one pass of the recursion.
pub fn tridiag_logdet_prefix(n: usize, dq: &DerivedQuantities) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("block size must be at least 1"));
    }
    let b2 = dq.b * dq.b;
    let mut t = dq.a;
    let mut acc = NeumaierSum::new();
    let mut out = Vec::with_capacity(n);
    acc.add(t.ln());
    out.push(acc.value());
    for _ in 1..n {
        t = dq.a - b2 / t;
        // t_k decreases monotonically to r >= 1.
        assert!(t >= 1.0 - 1e-9, "tridiagonal recursion ratio fell to {t}");
        acc.add(t.ln());
        out.push(acc.value());
    }
    Ok(out)
}

/// `ln det` of a two-tap erasure channel as a sum of per-run block determinants.
pub fn block_split_logdet(filter: &FirFilter, pattern: &ErasurePattern, snr: f64) -> Result<f64> {
    check_snr(snr)?;
    let dq = filter.two_tap_derived(snr)?;
    Ok(split_logdet(&dq, pattern))
}

pub(crate) fn split_logdet(dq: &DerivedQuantities, pattern: &ErasurePattern) -> f64 {
    pattern
        .runs()
        .into_iter()
        .map(|len| log_block_det_unchecked(len, dq))
        .collect::<NeumaierSum>()
        .value()
}
