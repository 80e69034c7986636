use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::ROW_SUM_TOL;
use crate::error::{Error, Result};

const CSV_HEADER: &str = "# stochastic-matrix v1, size=";

/// Row-stochastic transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    p: DMatrix<f64>,
}

impl StochasticMatrix {
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        if p.nrows() == 0 || p.nrows() != p.ncols() {
            return Err(Error::NotStochastic(format!("shape {}x{} is not square and non-empty", p.nrows(), p.ncols())));
        }
        for (i, row) in p.row_iter().enumerate() {
            let mut sum = 0.0;
            for (j, &v) in row.iter().enumerate() {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::NotStochastic(format!("entry ({i},{j}) = {v}")));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::NotStochastic(format!("row {i} sums to {sum}")));
            }
        }
        Ok(StochasticMatrix { p })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotStochastic("rows have unequal length".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// `P = S`: every row equals `q`.
    pub fn iid(q: &[f64]) -> Result<Self> {
        let n = q.len();
        Self::new(DMatrix::from_fn(n, n, |_, j| q[j]))
    }

    pub fn identity(n: usize) -> Self {
        StochasticMatrix { p: DMatrix::identity(n, n) }
    }

    pub fn size(&self) -> usize {
        self.p.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[(i, j)]
    }

    pub(crate) fn from_trusted(p: DMatrix<f64>) -> Self {
        StochasticMatrix { p }
    }

    /// Dense row-major CSV with the `# stochastic-matrix v1, size=N` header.
    pub fn to_csv(&self) -> String {
        let n = self.size();
        let mut s = format!("{CSV_HEADER}{n}\n");
        for i in 0..n {
            for j in 0..n {
                if j > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{:e}", self.p[(i, j)]);
            }
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::NotStochastic("empty input".into()))?;
        let n: usize = header
            .trim()
            .strip_prefix(CSV_HEADER)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::NotStochastic(format!("bad header {header:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines.enumerate() {
            let row: std::result::Result<Vec<f64>, _> = line.split(',').map(|t| t.trim().parse::<f64>()).collect();
            let row = row.map_err(|e| Error::NotStochastic(format!("row {i}: {e}")))?;
            if row.len() != n {
                return Err(Error::NotStochastic(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::NotStochastic(format!("found {} rows, expected {n}", rows.len())));
        }
        Self::from_rows(&rows)
    }
}
