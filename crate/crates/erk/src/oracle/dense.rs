//! Dense complex matrices and the Hermitian positive-definite log-determinant.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default bound on the side of any dense matrix the oracle assembles.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Dense size limit, overridable through `ERK_DENSE_CAP`.
pub fn dense_cap() -> usize {
    std::env::var("ERK_DENSE_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v: &usize| v > 0)
        .unwrap_or(DEFAULT_DENSE_CAP)
}

pub(crate) fn check_dense(requested: usize) -> Result<()> {
    let limit = dense_cap();
    if requested > limit {
        return Err(Error::CapacityExceeded {
            what: "dense matrix",
            requested,
            limit,
        });
    }
    Ok(())
}

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `ln det` of a Hermitian positive-definite matrix via its Cholesky factor.
    /// Only the lower triangle is read.
    pub fn hermitian_logdet(&self) -> Result<f64> {
        assert_eq!(self.rows, self.cols, "logdet of a non-square matrix");
        let n = self.rows;
        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        let mut logdet = 0.0;
        for j in 0..n {
            let mut d = self[(j, j)].re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d.is_nan() || d <= 0.0 {
                return Err(Error::NotPositiveDefinite { pivot: j, value: d });
            }
            let ljj = d.sqrt();
            l[j * n + j] = Complex64::new(ljj, 0.0);
            logdet += d.ln();
            for i in (j + 1)..n {
                let mut v = self[(i, j)];
                for k in 0..j {
                    v -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = v / ljj;
            }
        }
        Ok(logdet)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}
