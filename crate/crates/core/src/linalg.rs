//! Dense linear-algebra primitives.
//!
//! Thin, validated wrappers over `nalgebra` for the handful of factorizations
//! the bounds need, plus the two operations that are specific to this crate:
//! realification of complex channel matrices and principal-block extraction
//! along a [`Partition`].
//!
//! All logarithms are natural.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Matrices whose condition number exceeds this are treated as rank deficient.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Relative tolerance for matching paired singular values of a realified matrix.
pub const PAIR_TOLERANCE: f64 = 1e-8;

const SVD_MAX_ITER: usize = 10_000;

// nalgebra's own default. Tighter thresholds can return wrong values without
// reporting failure.
const SVD_EPS: f64 = 5.0 * f64::EPSILON;

// Allowed residual of `U S V^T - M`, relative to the largest singular value.
const SVD_RESIDUAL: f64 = 1e-10;

/// Dense real matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix(DMatrix<f64>);

impl RealMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.iter().all(|v| v.is_finite()) {
            Ok(Self(m))
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(rows, cols, data))
    }

    /// Builds a matrix from row vectors; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                found: bad.len(),
            });
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_row_slice(nrows, ncols, &flat)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(
            diag,
        )))
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.0.is_square()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.0
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn matmul(&self, other: &RealMatrix) -> Result<Self> {
        if self.ncols() != other.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.ncols(),
                found: other.nrows(),
            });
        }
        Ok(Self(&self.0 * &other.0))
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        Self::new(&self.0 * factor)
    }

    /// Ratio of the largest to the smallest singular value (infinite if singular).
    pub fn condition_number(&self) -> Result<f64> {
        let s = svd(self)?.singular_values;
        let max = s.first().copied().unwrap_or(0.0);
        let min = s.last().copied().unwrap_or(0.0);
        Ok(if min > 0.0 { max / min } else { f64::INFINITY })
    }

    /// Fails with [`Error::RankDeficient`] when the condition number is above
    /// [`CONDITION_LIMIT`].
    pub fn ensure_full_rank(&self) -> Result<()> {
        ensure_square(self)?;
        let condition = self.condition_number()?;
        if condition > CONDITION_LIMIT || !condition.is_finite() {
            Err(Error::RankDeficient { condition })
        } else {
            Ok(())
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        self.ensure_full_rank()?;
        let inv = self
            .0
            .clone()
            .try_inverse()
            .ok_or(Error::RankDeficient {
                condition: f64::INFINITY,
            })?;
        Self::new(inv)
    }

    pub fn max_abs_diff(&self, other: &RealMatrix) -> f64 {
        if self.0.shape() != other.0.shape() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl From<RealMatrix> for DMatrix<f64> {
    fn from(m: RealMatrix) -> Self {
        m.0
    }
}

/// Dense complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(Self(m))
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                found: bad.len(),
            });
        }
        let flat: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Self::new(DMatrix::from_row_slice(nrows, ncols, &flat))
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        self.0
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.map(|z| z * factor))
    }
}

/// Ordered block sizes `N_1, ..., N_K` splitting an `N`-dimensional space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        if sizes.iter().any(|&n| n == 0) {
            return Err(Error::InvalidPartition("zero-sized block".into()));
        }
        Ok(Self(sizes))
    }

    /// `k` blocks of size 2, the layout of a realified `k`-antenna system.
    pub fn pairs(k: usize) -> Result<Self> {
        Self::new(vec![2; k])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.0.iter().sum()
    }

    /// Zero-based start index of each block.
    pub fn offsets(&self) -> Vec<usize> {
        self.0
            .iter()
            .scan(0, |acc, &n| {
                let start = *acc;
                *acc += n;
                Some(start)
            })
            .collect()
    }

    /// Zero-based index range of block `i` (zero-based).
    pub fn range(&self, i: usize) -> Result<std::ops::Range<usize>> {
        if i >= self.0.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.0.len(),
            });
        }
        let start: usize = self.0[..i].iter().sum();
        Ok(start..start + self.0[i])
    }
}

/// Singular value decomposition `M = U diag(s) V^T`, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: RealMatrix,
    pub v: RealMatrix,
}

fn ensure_square(m: &RealMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// Maps an `n x n` complex matrix to the `2n x 2n` real matrix acting on
/// interleaved `(re, im)` coordinates: each entry `a + bi` becomes the block
/// `[[a, -b], [b, a]]`.
pub fn realify(hc: &ComplexMatrix) -> Result<RealMatrix> {
    let (rows, cols) = (hc.nrows(), hc.ncols());
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let mut out = DMatrix::zeros(2 * rows, 2 * cols);
    for r in 0..rows {
        for c in 0..cols {
            let z = hc.get(r, c);
            out[(2 * r, 2 * c)] = z.re;
            out[(2 * r, 2 * c + 1)] = -z.im;
            out[(2 * r + 1, 2 * c)] = z.im;
            out[(2 * r + 1, 2 * c + 1)] = z.re;
        }
    }
    RealMatrix::new(out)
}

pub fn svd(m: &RealMatrix) -> Result<Svd> {
    ensure_square(m)?;
    let n = m.nrows();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let raw = nalgebra::SVD::try_new(m.0.clone(), true, true, SVD_EPS, SVD_MAX_ITER)
        .ok_or(Error::NoConvergence)?;
    let u = raw.u.ok_or(Error::NoConvergence)?;
    let v_t = raw.v_t.ok_or(Error::NoConvergence)?;
    let s = raw.singular_values;

    let residual = (&u * DMatrix::from_diagonal(&s) * &v_t - &m.0).amax();
    if residual > SVD_RESIDUAL * s.amax().max(f64::MIN_POSITIVE) {
        return Err(Error::NoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));

    let mut u_sorted = DMatrix::zeros(n, n);
    let mut v_sorted = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        u_sorted.set_column(dst, &u.column(src));
        v_sorted.set_column(dst, &v_t.row(src).transpose());
    }
    Ok(Svd {
        singular_values: order.iter().map(|&i| s[i]).collect(),
        u: RealMatrix::new(u_sorted)?,
        v: RealMatrix::new(v_sorted)?,
    })
}

/// Singular values of a realified matrix, collapsed to one value per pair.
///
/// Fails with [`Error::NotARealification`] when consecutive values differ by
/// more than [`PAIR_TOLERANCE`] relative to the largest singular value.
pub fn paired_singular_values(m: &RealMatrix) -> Result<Vec<f64>> {
    let s = svd(m)?.singular_values;
    if s.len() % 2 != 0 {
        return Err(Error::NotARealification {
            mismatch: f64::INFINITY,
        });
    }
    let scale = s[0].max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(s.len() / 2);
    for pair in s.chunks_exact(2) {
        let mismatch = (pair[0] - pair[1]).abs() / scale;
        if mismatch > PAIR_TOLERANCE {
            return Err(Error::NotARealification { mismatch });
        }
        out.push(0.5 * (pair[0] + pair[1]));
    }
    Ok(out)
}

/// Lower-triangular `L` with `L L^T = S`.
pub fn cholesky_lower(s: &RealMatrix) -> Result<RealMatrix> {
    ensure_square(s)?;
    let chol = nalgebra::Cholesky::new(s.0.clone()).ok_or(Error::NotPositiveDefinite)?;
    RealMatrix::new(chol.l())
}

/// Principal block `i` (zero-based) of `m` along `partition`.
pub fn principal_block(m: &RealMatrix, partition: &Partition, i: usize) -> Result<RealMatrix> {
    ensure_square(m)?;
    if partition.dimension() != m.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: partition.dimension(),
        });
    }
    let range = partition.range(i)?;
    let n = range.len();
    RealMatrix::new(m.0.view((range.start, range.start), (n, n)).into_owned())
}

/// `log|det M|` from the singular values.
pub fn log_det(m: &RealMatrix) -> Result<f64> {
    let s = svd(m)?.singular_values;
    let (max, min) = (s[0], s[s.len() - 1]);
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if condition > CONDITION_LIMIT || !condition.is_finite() {
        return Err(Error::RankDeficient { condition });
    }
    Ok(s.iter().map(|v| v.ln()).sum())
}
