//! Dense exact matrices over the Gaussian rationals.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussq::GaussianRational;
use crate::zmat::GaussIntMatrix;

/// Row-major dense matrix. The 0x0 matrix is a legal value and is the unit
/// of [`ExactMatrix::direct_sum`].
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &GaussianRational::one())
    }

    /// `c · I_n`.
    pub fn scalar(n: usize, c: &GaussianRational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn diagonal<I>(diag: I) -> Self
    where
        I: IntoIterator<Item = GaussianRational>,
    {
        let diag: Vec<_> = diag.into_iter().collect();
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> GaussianRational,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        ExactMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from `rows × cols` row-major entries.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<GaussianRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(ExactMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    /// An empty outer vector is the 0x0 matrix.
    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(ExactMatrix {
            rows: n_rows,
            cols: n_cols,
            entries,
        })
    }

    /// Convenience for tests and examples: integer entries.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| GaussianRational::from_int(x)).collect())
                .collect(),
        )
        .expect("ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussianRational {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: GaussianRational) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[GaussianRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ExactMatrix { entries, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(ExactMatrix { entries, ..*self })
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        ExactMatrix {
            entries: self.entries.iter().map(|a| a * c).collect(),
            ..*self
        }
    }

    /// `self − λ·I`.
    pub fn shift(&self, lambda: &GaussianRational) -> Result<Self> {
        let n = self.require_square()?;
        let mut m = self.clone();
        for i in 0..n {
            let d = &m.entries[i * n + i] - lambda;
            m.entries[i * n + i] = d;
        }
        Ok(m)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.entries[k * other.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    out.entries[i * other.cols + j] += &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// Exact `k`-th power by repeated squaring; `a⁰ = I`.
    pub fn power(&self, k: usize) -> Result<Self> {
        let n = self.require_square()?;
        let mut result = Self::identity(n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Exact rank, computed by fraction-free elimination after clearing
    /// denominators. Pivots are chosen as the first nonzero entry in column
    /// order.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        GaussIntMatrix::scaled_from(self).rank()
    }

    /// Two-sided inverse by Gauss-Jordan elimination over the Gaussian
    /// rationals.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square()?;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a[r * n + col].is_zero())
                .ok_or(Error::NotInvertible)?;
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                    inv.swap(p * n + j, col * n + j);
                }
            }
            let pivot_inv = a[col * n + col].inv()?;
            for j in 0..n {
                a[col * n + j] = &a[col * n + j] * &pivot_inv;
                inv[col * n + j] = &inv[col * n + j] * &pivot_inv;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let da = &factor * &a[col * n + j];
                    a[r * n + j] -= &da;
                    let di = &factor * &inv[col * n + j];
                    inv[r * n + j] -= &di;
                }
            }
        }
        Ok(ExactMatrix {
            rows: n,
            cols: n,
            entries: inv,
        })
    }

    /// Block-diagonal `[[self, 0], [0, other]]`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let n = self.require_square()?;
        let m = other.require_square()?;
        let size = n + m;
        let mut out = Self::zeros(size, size);
        for r in 0..n {
            for c in 0..n {
                out.entries[r * size + c] = self.entries[r * n + c].clone();
            }
        }
        for r in 0..m {
            for c in 0..m {
                out.entries[(n + r) * size + n + c] = other.entries[r * m + c].clone();
            }
        }
        Ok(out)
    }

    /// Direct sum of a sequence of square blocks (0x0 for an empty sequence).
    pub fn block_diagonal<'a, I>(blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a ExactMatrix>,
    {
        let blocks: Vec<&ExactMatrix> = blocks.into_iter().collect();
        for b in &blocks {
            b.require_square()?;
        }
        let size: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(size, size);
        let mut offset = 0;
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.entries[(offset + r) * size + offset + c] =
                        b.entries[r * b.cols + c].clone();
                }
            }
            offset += b.rows;
        }
        Ok(out)
    }

    /// `p · self · p⁻¹`.
    pub fn conjugate(&self, p: &Self) -> Result<Self> {
        let n = self.require_square()?;
        if p.rows != n || p.cols != n {
            return Err(Error::DimensionMismatch(format!(
                "conjugator is {}x{}, matrix is {n}x{n}",
                p.rows, p.cols
            )));
        }
        let p_inv = p.inverse()?;
        p.mul(self)?.mul(&p_inv)
    }

    /// Elementary row operation `row[target] += c · row[source]`.
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, c: &GaussianRational) {
        let cols = self.cols;
        for j in 0..cols {
            let d = c * &self.entries[source * cols + j];
            if !d.is_zero() {
                self.entries[target * cols + j] += &d;
            }
        }
    }

    /// Elementary column operation `col[target] += c · col[source]`.
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, c: &GaussianRational) {
        let cols = self.cols;
        for i in 0..self.rows {
            let d = c * &self.entries[i * cols + source];
            if !d.is_zero() {
                self.entries[i * cols + target] += &d;
            }
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, c: &GaussianRational) {
        let cols = self.cols;
        for j in 0..cols {
            self.entries[r * cols + j] = c * &self.entries[r * cols + j];
        }
    }

    pub(crate) fn scale_col(&mut self, col: usize, c: &GaussianRational) {
        let cols = self.cols;
        for i in 0..self.rows {
            self.entries[i * cols + col] = c * &self.entries[i * cols + col];
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("; ")?;
            }
            for (c, z) in self.row(r).iter().enumerate() {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{z}")?;
            }
        }
        f.write_str("]")
    }
}

impl ExactMatrix {
    /// Reads the matrix wire form, reporting malformed JSON or scalars as
    /// [`Error::Parse`] and inconsistent shapes as
    /// [`Error::DimensionMismatch`].
    pub fn from_json_value(value: serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            rows: usize,
            cols: usize,
            entries: Vec<Vec<String>>,
        }
        let raw: Raw = serde_json::from_value(value).map_err(|e| Error::Parse {
            position: 0,
            message: e.to_string(),
        })?;
        let mut entries = Vec::with_capacity(raw.entries.len());
        for (r, row) in raw.entries.iter().enumerate() {
            let parsed = row
                .iter()
                .enumerate()
                .map(|(c, s)| {
                    s.parse().map_err(|e| match e {
                        Error::Parse { position, message } => Error::Parse {
                            position,
                            message: format!("entry ({r}, {c}) {s:?}: {message}"),
                        },
                        other => other,
                    })
                })
                .collect::<Result<Vec<GaussianRational>>>()?;
            entries.push(parsed);
        }
        ExactMatrix::try_from(MatrixJson {
            rows: raw.rows,
            cols: raw.cols,
            entries,
        })
    }
}

/// Wire form: `{"rows": R, "cols": C, "entries": [["scalar", ...], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<GaussianRational>>,
}

impl TryFrom<MatrixJson> for ExactMatrix {
    type Error = Error;

    fn try_from(json: MatrixJson) -> Result<Self> {
        if json.entries.len() != json.rows {
            return Err(Error::DimensionMismatch(format!(
                "declared {} rows, found {}",
                json.rows,
                json.entries.len()
            )));
        }
        let mut entries = Vec::with_capacity(json.rows * json.cols);
        for (i, row) in json.entries.into_iter().enumerate() {
            if row.len() != json.cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, declared {} cols",
                    row.len(),
                    json.cols
                )));
            }
            entries.extend(row);
        }
        Ok(ExactMatrix {
            rows: json.rows,
            cols: json.cols,
            entries,
        })
    }
}

impl From<ExactMatrix> for MatrixJson {
    fn from(m: ExactMatrix) -> Self {
        let cols = m.cols;
        let mut it = m.entries.into_iter();
        let entries = (0..m.rows)
            .map(|_| it.by_ref().take(cols).collect())
            .collect();
        MatrixJson {
            rows: m.rows,
            cols,
            entries,
        }
    }
}
