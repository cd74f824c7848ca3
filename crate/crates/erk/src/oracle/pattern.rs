use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ErasureProcess;

/// A realization of the erasure indicators: `true` for a delivered symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErasurePattern {
    bits: Vec<bool>,
}

impl ErasurePattern {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// From a 0/1 slice; any other value is rejected.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::invalid(format!("erasure indicator must be 0 or 1, got {other}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    /// Pattern of length `n` whose `i`-th indicator is bit `i` of `mask`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Self::new((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn all(n: usize, delivered: bool) -> Self {
        Self::new(vec![delivered; n])
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn delivered(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn erased(&self) -> usize {
        self.len() - self.delivered()
    }

    /// Lengths of the maximal runs of delivered symbols, in order of appearance.
    pub fn runs(&self) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut current = 0;
        for &b in &self.bits {
            if b {
                current += 1;
            } else if current > 0 {
                runs.push(current);
                current = 0;
            }
        }
        if current > 0 {
            runs.push(current);
        }
        runs
    }

    /// Draws `n` indicators from `process`. Chains start from their stationary law.
    pub fn sample<R: Rng + ?Sized>(process: &ErasureProcess, n: usize, rng: &mut R) -> Result<Self> {
        let bits = match *process {
            ErasureProcess::Iid { q } => (0..n).map(|_| rng.random::<f64>() >= q).collect(),
            ErasureProcess::Markov { q0, q1 } => {
                let pi = process.stationary_delivery().ok_or(Error::DegenerateChain)?;
                let mut bits = Vec::with_capacity(n);
                let mut state = rng.random::<f64>() < pi;
                for i in 0..n {
                    if i > 0 {
                        let stay_or_leave = if state { q1 } else { q0 };
                        state = rng.random::<f64>() >= stay_or_leave;
                    }
                    bits.push(state);
                }
                bits
            }
        };
        Ok(Self::new(bits))
    }

    /// Exact probability of this realization under `process`.
    pub fn probability(&self, process: &ErasureProcess) -> Result<f64> {
        match *process {
            ErasureProcess::Iid { q } => Ok(q.powi(self.erased() as i32) * (1.0 - q).powi(self.delivered() as i32)),
            ErasureProcess::Markov { q0, q1 } => {
                let pi = process.stationary_delivery().ok_or(Error::DegenerateChain)?;
                let mut iter = self.bits.iter();
                let Some(&first) = iter.next() else { return Ok(1.0) };
                let mut p = if first { pi } else { 1.0 - pi };
                let mut prev = first;
                for &b in iter {
                    p *= match (prev, b) {
                        (true, true) => 1.0 - q1,
                        (true, false) => q1,
                        (false, true) => 1.0 - q0,
                        (false, false) => q0,
                    };
                    prev = b;
                }
                Ok(p)
            }
        }
    }
}
