//! Dense matrices over exact rationals, sized for oracle work.

use std::fmt;

use rayon::prelude::*;

use crate::arith::ExactQ;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExactQ>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![ExactQ::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ExactQ::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactQ>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> ExactQ + Sync) -> Self {
        let data = (0..rows * cols)
            .into_par_iter()
            .map(|t| f(t / cols, t % cols))
            .collect();
        QMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactQ {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactQ) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ExactQ] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(QMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .filter(|&t| !self.get(i, t).is_zero())
                .map(|t| self.get(i, t) * other.get(t, j))
                .sum()
        }))
    }

    pub fn mul_vec(&self, v: &[ExactQ]) -> Result<Vec<ExactQ>> {
        if v.len() != self.cols {
            return Err(Error::InvalidArgument("vector length mismatch".into()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn pow(&self, mut e: u32) -> Result<QMatrix> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument(
                "power of a non-square matrix".into(),
            ));
        }
        let mut acc = QMatrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn sub_scaled_identity(&self, lambda: &ExactQ) -> QMatrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = m.get(i, i) - lambda;
            m.set(i, i, v);
        }
        m
    }

    pub fn row_sums(&self) -> Vec<ExactQ> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<ExactQ> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    /// Every row and column sums to one.
    pub fn is_doubly_stochastic(&self) -> bool {
        let one = ExactQ::one();
        self.row_sums().iter().all(|s| *s == one) && self.col_sums().iter().all(|s| *s == one)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<ExactQ>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = m[rank][col].recip();
            let pivot_row: Vec<ExactQ> = m[rank].iter().map(|x| x * &inv).collect();
            let below: Vec<Vec<ExactQ>> = m[rank + 1..]
                .par_iter()
                .map(|row| {
                    let f = &row[col];
                    if f.is_zero() {
                        row.clone()
                    } else {
                        row.iter()
                            .zip(&pivot_row)
                            .map(|(x, p)| x - &(f * p))
                            .collect()
                    }
                })
                .collect();
            m[rank] = pivot_row;
            for (k, row) in below.into_iter().enumerate() {
                m[rank + 1 + k] = row;
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|q| q.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactQ {
        ExactQ::new(n, d)
    }

    #[test]
    fn power_and_rank() {
        let m = QMatrix::from_rows(vec![vec![q(3, 4), q(1, 4)], vec![q(1, 4), q(3, 4)]]).unwrap();
        let m2 = m.pow(2).unwrap();
        assert_eq!(*m2.get(0, 0), q(5, 8));
        assert!(m2.is_doubly_stochastic());
        assert!(m2.is_symmetric());
        assert_eq!(m.rank(), 2);
        assert_eq!(m.sub_scaled_identity(&q(1, 2)).rank(), 1);
        assert_eq!(m.pow(0).unwrap(), QMatrix::identity(2));
    }

    #[test]
    fn shape_errors() {
        let a = QMatrix::zeros(2, 3);
        assert!(a.mul(&a).is_err());
        assert!(a.pow(2).is_err());
        assert_eq!(a.transpose().rows(), 3);
    }
}
