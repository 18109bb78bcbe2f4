//! Exact Gauss-Jordan elimination over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduced row echelon form of a dense rational matrix.
pub(crate) struct Rref {
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
    ncols: usize,
}

impl Rref {
    pub(crate) fn from_integer_rows(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..ncols {
            if lead == m.len() {
                break;
            }
            let Some(p) = (lead..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(lead, p);
            let inv = m[lead][col].recip();
            if !inv.is_one() {
                for v in m[lead].iter_mut() {
                    *v = &*v * &inv;
                }
            }
            let pivot_row = m[lead].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == lead || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        m.truncate(pivots.len());
        Self {
            rows: m,
            pivots,
            ncols,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// One vector per free column, in increasing column order: the free
    /// entry is 1, the other free entries 0, pivot entries solve the system.
    pub(crate) fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![BigRational::zero(); self.ncols];
                v[free] = BigRational::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[free].clone();
                }
                v
            })
            .collect()
    }
}
