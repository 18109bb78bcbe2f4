//! Finite bivariate distributions.
//!
//! A [`ProbTable`] is an `R x S` matrix of probabilities. Its zero cells are
//! structural: they define the [`SupportPattern`], which is never altered by
//! the operations that keep a distribution inside its dependence class
//! (marginal replacement, rank-one scaling, relabelling).

use std::fmt;

use ndarray::{Array2, Axis};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a table or margin.
pub const MASS_TOL: f64 = 1e-12;

/// Boolean mask of the cells carrying positive probability.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SupportPattern {
    mask: Array2<bool>,
    n_cells: usize,
}

impl SupportPattern {
    /// Every row and every column must contain at least one cell.
    pub fn new(mask: Array2<bool>) -> Result<Self> {
        let (rows, cols) = mask.dim();
        if rows < 2 || cols < 2 {
            return Err(Error::TooSmall { rows, cols });
        }
        for (r, row) in mask.axis_iter(Axis(0)).enumerate() {
            if !row.iter().any(|&b| b) {
                return Err(Error::EmptyRow(r));
            }
        }
        for (c, col) in mask.axis_iter(Axis(1)).enumerate() {
            if !col.iter().any(|&b| b) {
                return Err(Error::EmptyColumn(c));
            }
        }
        let n_cells = mask.iter().filter(|&&b| b).count();
        Ok(Self { mask, n_cells })
    }

    pub fn full(rows: usize, cols: usize) -> Result<Self> {
        Self::new(Array2::from_elem((rows, cols), true))
    }

    /// Parses a compact picture such as `"x../.xx/.xx"`: rows separated by
    /// `/` (or newlines), `x`/`1` for support cells and `.`/`0` for zeros.
    pub fn parse(picture: &str) -> Result<Self> {
        let rows: Vec<Vec<bool>> = picture
            .split(['/', '\n'])
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|line| {
                line.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        'x' | 'X' | '1' | '*' => Ok(true),
                        '.' | '0' => Ok(false),
                        other => Err(Error::Parse(format!("unexpected `{other}` in support picture"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Parse("ragged support picture".into()));
        }
        let flat: Vec<bool> = rows.concat();
        let mask = Array2::from_shape_vec((rows.len(), ncols), flat)
            .map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(mask)
    }

    pub fn mask(&self) -> &Array2<bool> {
        &self.mask
    }

    pub fn nrows(&self) -> usize {
        self.mask.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.mask.ncols()
    }

    pub fn dim(&self) -> (usize, usize) {
        self.mask.dim()
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.mask[[row, col]]
    }

    /// Rectangular support, i.e. no structural zero.
    pub fn is_full(&self) -> bool {
        self.n_cells == self.mask.len()
    }

    /// Support cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mask
            .indexed_iter()
            .filter(|(_, &b)| b)
            .map(|(idx, _)| idx)
    }

    /// Number of connected components of the bipartite graph linking row `x`
    /// to column `y` whenever `(x, y)` is a support cell.
    pub fn components(&self) -> usize {
        let (rows, cols) = self.dim();
        let mut parent: Vec<usize> = (0..rows + cols).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for (r, c) in self.cells() {
            let a = find(&mut parent, r);
            let b = find(&mut parent, rows + c);
            if a != b {
                parent[a] = b;
            }
        }
        (0..rows + cols).filter(|&i| find(&mut parent, i) == i).count()
    }

    pub fn transposed(&self) -> Self {
        Self {
            mask: self.mask.t().to_owned(),
            n_cells: self.n_cells,
        }
    }

    /// Output row `i` is input row `row_perm[i]` (same for columns).
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        check_permutation(row_perm, self.nrows())?;
        check_permutation(col_perm, self.ncols())?;
        let mask = Array2::from_shape_fn(self.dim(), |(r, c)| self.mask[[row_perm[r], col_perm[c]]]);
        Ok(Self {
            mask,
            n_cells: self.n_cells,
        })
    }
}

impl fmt::Debug for SupportPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .mask
            .axis_iter(Axis(0))
            .map(|row| row.iter().map(|&b| if b { 'x' } else { '.' }).collect())
            .collect();
        write!(f, "SupportPattern({})", rows.join("/"))
    }
}

/// A pair of strictly positive probability vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginPair {
    rows: Vec<f64>,
    cols: Vec<f64>,
}

impl MarginPair {
    pub fn new(rows: Vec<f64>, cols: Vec<f64>) -> Result<Self> {
        check_simplex(&rows, "row margin")?;
        check_simplex(&cols, "column margin")?;
        Ok(Self { rows, cols })
    }

    /// Divides both vectors by their sums before validating.
    pub fn normalized(rows: Vec<f64>, cols: Vec<f64>) -> Result<Self> {
        Self::new(normalize(rows)?, normalize(cols)?)
    }

    pub fn rows(&self) -> &[f64] {
        &self.rows
    }

    pub fn cols(&self) -> &[f64] {
        &self.cols
    }

    pub fn transposed(&self) -> Self {
        Self {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// Sum of absolute differences over both margins.
    pub fn l1_distance(&self, other: &MarginPair) -> f64 {
        let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>();
        d(&self.rows, &other.rows) + d(&self.cols, &other.cols)
    }
}

fn normalize(mut v: Vec<f64>) -> Result<Vec<f64>> {
    let total: f64 = v.iter().sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::ZeroMass);
    }
    v.iter_mut().for_each(|x| *x /= total);
    Ok(v)
}

fn check_simplex(v: &[f64], what: &str) -> Result<()> {
    if v.len() < 2 {
        return Err(Error::InvalidMargin(format!("{what} needs at least 2 entries")));
    }
    if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::InvalidMargin(format!("{what} has non-positive entry {x}")));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidMargin(format!("{what} sums to {sum}")));
    }
    Ok(())
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(perm.len()));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(n));
        }
    }
    Ok(())
}

fn check_scaling(v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: v.len(),
        });
    }
    if v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::NonPositiveScaling);
    }
    Ok(())
}

/// Finite bivariate distribution with an explicit support pattern.
///
/// Immutable once built; every transformation returns a new table.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable {
    probs: Array2<f64>,
    support: SupportPattern,
}

impl ProbTable {
    /// Validates a table whose entries already sum to 1 (within [`MASS_TOL`]).
    /// Entries are stored unchanged.
    pub fn new(probs: Array2<f64>) -> Result<Self> {
        let sum = check_entries(&probs)?;
        if (sum - 1.0).abs() > MASS_TOL {
            return Err(Error::NotNormalized { sum, tol: MASS_TOL });
        }
        Self::with_support(probs)
    }

    /// Builds a table from nonnegative weights (e.g. counts), dividing by
    /// their exact sum.
    pub fn from_weights(weights: Array2<f64>) -> Result<Self> {
        let sum = check_entries(&weights)?;
        if sum <= 0.0 {
            return Err(Error::ZeroMass);
        }
        Self::with_support(weights / sum)
    }

    /// Product table `rows ⊗ cols`.
    pub fn independent(margins: &MarginPair) -> Result<Self> {
        let (r, c) = (margins.rows(), margins.cols());
        Self::from_weights(Array2::from_shape_fn((r.len(), c.len()), |(i, j)| r[i] * c[j]))
    }

    fn with_support(probs: Array2<f64>) -> Result<Self> {
        let support = SupportPattern::new(probs.mapv(|p| p > 0.0))?;
        Ok(Self { probs, support })
    }

    pub fn probs(&self) -> &Array2<f64> {
        &self.probs
    }

    pub fn support(&self) -> &SupportPattern {
        &self.support
    }

    pub fn dim(&self) -> (usize, usize) {
        self.probs.dim()
    }

    pub fn nrows(&self) -> usize {
        self.probs.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.probs.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.probs[[row, col]]
    }

    pub fn row_margin(&self) -> Vec<f64> {
        self.probs.sum_axis(Axis(1)).to_vec()
    }

    pub fn col_margin(&self) -> Vec<f64> {
        self.probs.sum_axis(Axis(0)).to_vec()
    }

    pub fn margins(&self) -> MarginPair {
        // Constructed directly: both vectors are positive by the support invariant.
        MarginPair {
            rows: self.row_margin(),
            cols: self.col_margin(),
        }
    }

    /// Conditional distributions of the column variable given each row,
    /// one per row; every row sums to 1.
    pub fn conditional_rows(&self) -> Array2<f64> {
        let rows = self.row_margin();
        let mut out = self.probs.clone();
        for (mut row, m) in out.axis_iter_mut(Axis(0)).zip(rows) {
            row.mapv_inplace(|p| p / m);
        }
        out
    }

    /// Conditional distributions of the row variable given each column;
    /// every column sums to 1.
    pub fn conditional_cols(&self) -> Array2<f64> {
        let cols = self.col_margin();
        let mut out = self.probs.clone();
        for (mut col, m) in out.axis_iter_mut(Axis(1)).zip(cols) {
            col.mapv_inplace(|p| p / m);
        }
        out
    }

    /// Keeps the row-conditionals and swaps in a new row margin.
    pub fn marginal_replace_rows(&self, new_rows: &[f64]) -> Result<Self> {
        if new_rows.len() != self.nrows() {
            return Err(Error::LengthMismatch {
                expected: self.nrows(),
                found: new_rows.len(),
            });
        }
        check_simplex(new_rows, "row margin")?;
        let mut out = self.conditional_rows();
        for (mut row, &m) in out.axis_iter_mut(Axis(0)).zip(new_rows) {
            row.mapv_inplace(|p| p * m);
        }
        Self::from_weights(out)
    }

    /// Column counterpart of [`ProbTable::marginal_replace_rows`].
    pub fn marginal_replace_cols(&self, new_cols: &[f64]) -> Result<Self> {
        Ok(self.transpose().marginal_replace_rows(new_cols)?.transpose())
    }

    /// `p[x][y] * a[x] * b[y]`, renormalized. Stays in the same dependence class.
    pub fn group_transform(&self, a: &[f64], b: &[f64]) -> Result<Self> {
        check_scaling(a, self.nrows())?;
        check_scaling(b, self.ncols())?;
        let scaled = Array2::from_shape_fn(self.dim(), |(r, c)| self.probs[[r, c]] * a[r] * b[c]);
        Self::from_weights(scaled)
    }

    /// Output row `i` is input row `row_perm[i]`; likewise for columns.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        let support = self.support.permuted(row_perm, col_perm)?;
        let probs = Array2::from_shape_fn(self.dim(), |(r, c)| self.probs[[row_perm[r], col_perm[c]]]);
        Ok(Self { probs, support })
    }

    pub fn transpose(&self) -> Self {
        Self {
            probs: self.probs.t().to_owned(),
            support: self.support.transposed(),
        }
    }
}

fn check_entries(m: &Array2<f64>) -> Result<f64> {
    let (rows, cols) = m.dim();
    if rows < 2 || cols < 2 {
        return Err(Error::TooSmall { rows, cols });
    }
    for ((r, c), &v) in m.indexed_iter() {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidEntry { row: r, col: c, value: v });
        }
    }
    Ok(m.sum())
}
