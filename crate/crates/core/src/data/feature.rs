//! Dense and sparse feature vectors and the Euclidean distance between them.
//!
//! Text TF-IDF features are sparse, image features dense; every consumer in
//! this crate accepts both. Cluster centers are always dense.

use crate::error::{Error, Result};

/// A real-valued feature vector, stored dense or sparse.
///
/// Sparse storage keeps `(index, value)` pairs with strictly increasing
/// indices below `dim`. All values are finite.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureVector {
    Dense(Vec<f64>),
    Sparse {
        dim: usize,
        indices: Vec<u32>,
        values: Vec<f64>,
    },
}

impl FeatureVector {
    /// Builds a dense vector, rejecting NaN/Inf entries.
    pub fn dense(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidFeature("dimension must be positive".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidFeature(format!("non-finite value {v}")));
        }
        Ok(FeatureVector::Dense(values))
    }

    /// Builds a sparse vector from `(index, value)` pairs.
    pub fn sparse(dim: usize, entries: Vec<(u32, f64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidFeature("dimension must be positive".into()));
        }
        let mut prev: Option<u32> = None;
        for &(i, v) in &entries {
            if (i as usize) >= dim {
                return Err(Error::InvalidFeature(format!(
                    "index {i} out of range for dim {dim}"
                )));
            }
            if let Some(p) = prev {
                if i <= p {
                    return Err(Error::InvalidFeature(format!(
                        "indices must be strictly increasing ({p} then {i})"
                    )));
                }
            }
            if !v.is_finite() {
                return Err(Error::InvalidFeature(format!("non-finite value {v}")));
            }
            prev = Some(i);
        }
        let (indices, values) = entries.into_iter().unzip();
        Ok(FeatureVector::Sparse {
            dim,
            indices,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            FeatureVector::Dense(v) => v.len(),
            FeatureVector::Sparse { dim, .. } => *dim,
        }
    }

    /// Iterates `(index, value)` over the stored nonzeros (all entries for dense).
    pub fn nonzeros(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        match self {
            FeatureVector::Dense(v) => Box::new(v.iter().copied().enumerate()),
            FeatureVector::Sparse {
                indices, values, ..
            } => Box::new(
                indices
                    .iter()
                    .zip(values.iter())
                    .map(|(&i, &v)| (i as usize, v)),
            ),
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        match self {
            FeatureVector::Dense(v) => v.clone(),
            FeatureVector::Sparse {
                dim,
                indices,
                values,
            } => {
                let mut out = vec![0.0; *dim];
                for (&i, &v) in indices.iter().zip(values.iter()) {
                    out[i as usize] = v;
                }
                out
            }
        }
    }

    /// Sum of squared entries.
    pub fn squared_norm(&self) -> f64 {
        match self {
            FeatureVector::Dense(v) => v.iter().map(|x| x * x).sum(),
            FeatureVector::Sparse { values, .. } => values.iter().map(|x| x * x).sum(),
        }
    }

    /// Dot product against a dense slice of the same dimension.
    pub fn dot_dense(&self, other: &[f64]) -> f64 {
        debug_assert_eq!(self.dim(), other.len());
        match self {
            FeatureVector::Dense(v) => v.iter().zip(other).map(|(a, b)| a * b).sum(),
            FeatureVector::Sparse {
                indices, values, ..
            } => indices
                .iter()
                .zip(values.iter())
                .map(|(&i, &v)| v * other[i as usize])
                .sum(),
        }
    }

    /// Squared Euclidean distance to a dense center.
    ///
    /// `center_sq_norm` must equal the center's sum of squares; callers cache
    /// it so sparse points pay O(nnz) instead of O(dim).
    pub fn squared_dist_to_dense(&self, center: &[f64], center_sq_norm: f64) -> f64 {
        debug_assert_eq!(self.dim(), center.len());
        match self {
            FeatureVector::Dense(v) => {
                let mut acc = 0.0;
                for (a, b) in v.iter().zip(center) {
                    let d = a - b;
                    acc += d * d;
                }
                acc
            }
            FeatureVector::Sparse {
                indices, values, ..
            } => {
                // ||x - c||^2 = ||c||^2 + sum over nnz of (x_i^2 - 2 x_i c_i)
                let mut acc = center_sq_norm;
                for (&i, &v) in indices.iter().zip(values.iter()) {
                    acc += v * v - 2.0 * v * center[i as usize];
                }
                acc.max(0.0)
            }
        }
    }
}

/// Euclidean distance between two feature vectors of equal dimension.
pub fn euclidean_distance(a: &FeatureVector, b: &FeatureVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(squared_distance(a, b).sqrt())
}

/// Squared Euclidean distance; dimension check is the caller's business.
pub fn squared_distance(a: &FeatureVector, b: &FeatureVector) -> f64 {
    use FeatureVector::*;
    match (a, b) {
        (Dense(x), Dense(y)) => {
            let mut acc = 0.0;
            for (p, q) in x.iter().zip(y) {
                let d = p - q;
                acc += d * d;
            }
            acc
        }
        (Sparse { .. }, Sparse { .. }) => {
            // Merge over the two sorted index lists.
            let mut acc = 0.0;
            let mut it_a = a.nonzeros().peekable();
            let mut it_b = b.nonzeros().peekable();
            loop {
                match (it_a.peek().copied(), it_b.peek().copied()) {
                    (Some((ia, va)), Some((ib, vb))) => {
                        if ia == ib {
                            let d = va - vb;
                            acc += d * d;
                            it_a.next();
                            it_b.next();
                        } else if ia < ib {
                            acc += va * va;
                            it_a.next();
                        } else {
                            acc += vb * vb;
                            it_b.next();
                        }
                    }
                    (Some((_, va)), None) => {
                        acc += va * va;
                        it_a.next();
                    }
                    (None, Some((_, vb))) => {
                        acc += vb * vb;
                        it_b.next();
                    }
                    (None, None) => break,
                }
            }
            acc
        }
        (Dense(x), sp @ Sparse { .. }) | (sp @ Sparse { .. }, Dense(x)) => {
            let mut acc: f64 = x.iter().map(|v| v * v).sum();
            for (i, v) in sp.nonzeros() {
                // replace x_i^2 by (x_i - v)^2
                let d = x[i] - v;
                acc += d * d - x[i] * x[i];
            }
            acc.max(0.0)
        }
    }
}
