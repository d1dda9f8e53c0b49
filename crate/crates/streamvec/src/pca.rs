//! Incremental principal component analysis.
//!
//! Sequential Karhunen-Loeve update: each partial fit folds a batch of rows
//! into the running mean and the current basis by taking the SVD of the
//! stacked matrix
//!
//! ```text
//! [ diag(singular_values) * components ]   (k x d, the old basis, re-weighted)
//! [ rows - batch_mean                  ]   (m x d, the new batch, centered)
//! [ sqrt(n*m/(n+m)) * (mean - batch_mean)] (1 x d, mean-shift correction)
//! ```
//!
//! and keeping the top `k` right singular vectors. Component rows stay
//! orthonormal after every update because they come straight out of an SVD.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Streaming PCA state: running mean, orthonormal component basis and the
/// number of rows folded in so far.
#[derive(Debug, Clone)]
pub struct IncrementalPca {
    dim: usize,
    n_components: usize,
    mean: DVector<f64>,
    components: DMatrix<f64>,
    singular: DVector<f64>,
    samples_seen: u64,
}

impl IncrementalPca {
    pub fn new(dim: usize, n_components: usize) -> Result<Self> {
        if n_components == 0 || n_components > dim {
            return Err(Error::InvalidConfig(format!(
                "n_components must be in [1, {dim}], got {n_components}"
            )));
        }
        Ok(Self {
            dim,
            n_components,
            mean: DVector::zeros(dim),
            components: DMatrix::zeros(n_components, dim),
            singular: DVector::zeros(n_components),
            samples_seen: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn samples_seen(&self) -> u64 {
        self.samples_seen
    }

    /// True once at least one batch has been folded in, i.e. the basis spans
    /// a full rank-`n_components` subspace and projections are meaningful.
    pub fn is_fitted(&self) -> bool {
        self.samples_seen > 0
    }

    pub fn components(&self) -> &DMatrix<f64> {
        &self.components
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    /// Folds `rows` (each of length `dim`) into the model. The first batch
    /// must contain at least `n_components` rows so the SVD can produce a
    /// full basis.
    pub fn partial_fit(&mut self, rows: &[Vec<f64>]) {
        let m = rows.len();
        assert!(m > 0, "partial_fit requires at least one row");
        assert!(
            self.samples_seen > 0 || m >= self.n_components,
            "first batch must have at least n_components rows"
        );
        debug_assert!(rows.iter().all(|r| r.len() == self.dim));

        let n = self.samples_seen as f64;
        let mf = m as f64;

        let mut batch_mean = DVector::zeros(self.dim);
        for row in rows {
            for (acc, &x) in batch_mean.iter_mut().zip(row) {
                *acc += x;
            }
        }
        batch_mean /= mf;

        let stacked = if self.samples_seen == 0 {
            DMatrix::from_fn(m, self.dim, |i, j| rows[i][j] - batch_mean[j])
        } else {
            let k = self.n_components;
            let mut stacked = DMatrix::zeros(k + m + 1, self.dim);
            for i in 0..k {
                for j in 0..self.dim {
                    stacked[(i, j)] = self.singular[i] * self.components[(i, j)];
                }
            }
            for (i, row) in rows.iter().enumerate() {
                for j in 0..self.dim {
                    stacked[(k + i, j)] = row[j] - batch_mean[j];
                }
            }
            let correction = (n * mf / (n + mf)).sqrt();
            for j in 0..self.dim {
                stacked[(k + m, j)] = correction * (self.mean[j] - batch_mean[j]);
            }
            stacked
        };

        let svd = stacked.svd(false, true);
        let v_t = svd.v_t.expect("svd computed without v_t");
        for i in 0..self.n_components {
            self.singular[i] = if i < svd.singular_values.len() {
                svd.singular_values[i]
            } else {
                0.0
            };
            for j in 0..self.dim {
                self.components[(i, j)] = if i < v_t.nrows() { v_t[(i, j)] } else { 0.0 };
            }
        }

        self.mean = (self.mean.clone() * n + batch_mean * mf) / (n + mf);
        self.samples_seen += m as u64;
    }

    /// Projects a row onto the component basis: `components * (row - mean)`.
    pub fn project(&self, row: &[f64]) -> Vec<f64> {
        assert_eq!(row.len(), self.dim);
        let centered = DVector::from_fn(self.dim, |i, _| row[i] - self.mean[i]);
        let projected = &self.components * centered;
        projected.iter().copied().collect()
    }

    #[cfg(test)]
    pub(crate) fn from_parts(mean: Vec<f64>, components: Vec<Vec<f64>>) -> Self {
        let dim = mean.len();
        let k = components.len();
        Self {
            dim,
            n_components: k,
            mean: DVector::from_vec(mean),
            components: DMatrix::from_fn(k, dim, |i, j| components[i][j]),
            singular: DVector::zeros(k),
            samples_seen: k as u64,
        }
    }
}
