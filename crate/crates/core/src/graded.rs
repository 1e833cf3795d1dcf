//! Finite-dimensional graded vector spaces over Q and homogeneous maps
//! between them, stored as dense matrices on the total space.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Standard basis ordered by degree, then by index within the degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedSpace {
    dims: BTreeMap<i64, usize>,
}

impl GradedSpace {
    pub fn new(dims: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut map = BTreeMap::new();
        for (d, n) in dims {
            if n > 0 {
                *map.entry(d).or_insert(0) += n;
            }
        }
        GradedSpace { dims: map }
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Index of the first basis vector of `degree`.
    pub fn offset(&self, degree: i64) -> usize {
        self.dims.range(..degree).map(|(_, n)| n).sum()
    }

    /// Degree of each basis vector, in basis order.
    pub fn basis_degrees(&self) -> Vec<i64> {
        self.dims.iter().flat_map(|(&d, &n)| std::iter::repeat_n(d, n)).collect()
    }

    /// Total index of the `idx`-th basis vector of `degree`.
    pub fn index(&self, degree: i64, idx: usize) -> Result<usize> {
        let n = self.dim(degree);
        if idx >= n {
            return Err(Error::Bounds(format!("basis index {idx} out of range for degree {degree} (dimension {n})")));
        }
        Ok(self.offset(degree) + idx)
    }

    /// `(degree, index within degree)` of a total index.
    pub fn locate(&self, total_idx: usize) -> (i64, usize) {
        let mut start = 0;
        for (&d, &n) in &self.dims {
            if total_idx < start + n {
                return (d, total_idx - start);
            }
            start += n;
        }
        panic!("basis index {total_idx} out of range");
    }

    /// The space with every degree raised by `k`.
    pub fn shifted(&self, k: i64) -> Self {
        GradedSpace { dims: self.dims.iter().map(|(d, n)| (d + k, *n)).collect() }
    }
}

/// Checks that `m : source -> target` is homogeneous of `degree`.
pub fn check_homogeneous(m: &Matrix, source: &GradedSpace, target: &GradedSpace, degree: i64, what: &str) -> Result<()> {
    if m.rows() != target.total() || m.cols() != source.total() {
        return Err(Error::Shape(format!(
            "{what}: expected a {}x{} matrix, got {}x{}",
            target.total(),
            source.total(),
            m.rows(),
            m.cols()
        )));
    }
    let sd = source.basis_degrees();
    let td = target.basis_degrees();
    for (r, rd) in td.iter().enumerate() {
        for (c, cd) in sd.iter().enumerate() {
            if !m.get(r, c).is_zero() && *rd != cd + degree {
                return Err(Error::Shape(format!(
                    "{what}: entry from degree {cd} to degree {rd} violates map degree {degree}"
                )));
            }
        }
    }
    Ok(())
}

/// Block of `m` from degree `src` of `source` to degree `src + degree` of `target`.
pub fn block(m: &Matrix, source: &GradedSpace, target: &GradedSpace, src: i64, degree: i64) -> Matrix {
    let (r0, c0) = (target.offset(src + degree), source.offset(src));
    Matrix::from_fn(target.dim(src + degree), source.dim(src), |i, j| m.get(r0 + i, c0 + j).clone())
}

/// Block-diagonal matrix assembled from per-degree blocks `V_k -> V_{k+degree}`.
pub fn from_blocks(source: &GradedSpace, target: &GradedSpace, degree: i64, blocks: &BTreeMap<i64, Matrix>) -> Result<Matrix> {
    let mut m = Matrix::zeros(target.total(), source.total());
    for (&k, b) in blocks {
        if b.rows() != target.dim(k + degree) || b.cols() != source.dim(k) {
            return Err(Error::Shape(format!("block at source degree {k} has the wrong shape")));
        }
        let (r0, c0) = (target.offset(k + degree), source.offset(k));
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }
    Ok(m)
}
