//! Densities on a dyadic grid over the unit square.
//!
//! A [`GridDensity`] of level `K` holds `2^K x 2^K` cell values of a
//! piecewise-constant density. Row index `i` is the first variable, column
//! index `j` the second. All integrals are midpoint sums over cells, which
//! are exact for the piecewise-constant surrogate.

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::normal::inverse_normal_cdf;

/// Largest supported level. A level-12 grid already holds 16M cells.
pub const MAX_LEVEL: u32 = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    values: Array2<f64>,
    level: u32,
}

impl GridDensity {
    /// Validates the shape and rescales so that the cell average is 1.
    pub fn new(values: Array2<f64>) -> Result<Self> {
        let (r, c) = values.dim();
        if r != c || !r.is_power_of_two() || r < 2 {
            let level = r.max(1).ilog2();
            return Err(Error::GridShape {
                level,
                expected: 1 << level.max(1),
                found: if r == c { r } else { c },
            });
        }
        let level = r.ilog2();
        if level > MAX_LEVEL {
            return Err(Error::OutOfRange(format!("grid level {level} above {MAX_LEVEL}")));
        }
        for ((i, j), &v) in values.indexed_iter() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidEntry { row: i, col: j, value: v });
            }
        }
        let mean = values.sum() / (r * c) as f64;
        if mean <= 0.0 {
            return Err(Error::ZeroMass);
        }
        Ok(Self {
            values: values.mapv(|v| v / mean),
            level,
        })
    }

    /// Checks that the grid really has `2^level` rows and columns.
    pub fn with_level(values: Array2<f64>, level: u32) -> Result<Self> {
        let n = 1usize << level;
        let (r, c) = values.dim();
        if r != n || c != n {
            return Err(Error::GridShape {
                level,
                expected: n,
                found: if r != n { r } else { c },
            });
        }
        Self::new(values)
    }

    /// Evaluates `f` at cell centres `((i + 1/2) / 2^K, (j + 1/2) / 2^K)`.
    pub fn from_fn(level: u32, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if level == 0 || level > MAX_LEVEL {
            return Err(Error::OutOfRange(format!("grid level {level}")));
        }
        let n = 1usize << level;
        let h = 1.0 / n as f64;
        Self::new(Array2::from_shape_fn((n, n), |(i, j)| {
            f((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)
        }))
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn size(&self) -> usize {
        self.values.nrows()
    }

    pub fn support_mask(&self) -> Array2<bool> {
        self.values.mapv(|v| v > 0.0)
    }

    pub fn has_full_support(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0)
    }

    /// Multiplies by `a(i) b(j)` and renormalizes.
    pub fn scaled(&self, a: &[f64], b: &[f64]) -> Result<Self> {
        let n = self.size();
        if a.len() != n || b.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: if a.len() != n { a.len() } else { b.len() },
            });
        }
        if a.iter().chain(b).any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::NonPositiveScaling);
        }
        Self::new(Array2::from_shape_fn((n, n), |(i, j)| self.values[[i, j]] * a[i] * b[j]))
    }

    /// Output cell `(i, j)` is input cell `(row_perm[i], col_perm[j])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        let n = self.size();
        for p in [row_perm, col_perm] {
            let mut seen = vec![false; n];
            if p.len() != n || p.iter().any(|&k| k >= n || std::mem::replace(&mut seen[k], true)) {
                return Err(Error::InvalidPermutation(p.len()));
            }
        }
        Ok(Self {
            values: Array2::from_shape_fn((n, n), |(i, j)| self.values[[row_perm[i], col_perm[j]]]),
            level: self.level,
        })
    }

    fn log_values(&self) -> Result<Array2<f64>> {
        if let Some(((row, col), _)) = self.values.indexed_iter().find(|(_, &v)| v <= 0.0) {
            return Err(Error::ZeroCell { row, col });
        }
        Ok(self.values.mapv(f64::ln))
    }
}

/// Coefficients of the double-centred log density in the tensor Haar basis.
///
/// Index `0` along an axis is the constant function; index `2^k + l` is the
/// wavelet at scale `k` and position `l`, normalized in L2 of the unit
/// interval. The constant row and column are zero by construction, so only
/// products of two wavelets carry information.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarCoefficients {
    level: u32,
    coeffs: Array2<f64>,
    norm2: f64,
}

/// One basis function: scale and position on each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct HaarIndex {
    pub kx: u32,
    pub lx: usize,
    pub ky: u32,
    pub ly: usize,
}

fn haar_position(index: usize) -> (u32, usize) {
    let k = index.ilog2();
    (k, index - (1 << k))
}

impl HaarCoefficients {
    fn from_matrix(level: u32, mut coeffs: Array2<f64>) -> Self {
        coeffs.row_mut(0).fill(0.0);
        coeffs.column_mut(0).fill(0.0);
        let norm2 = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        Self { level, coeffs, norm2 }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn norm2(&self) -> f64 {
        self.norm2
    }

    /// Raw matrix in transform order, including the zero constant row/column.
    pub fn matrix(&self) -> &Array2<f64> {
        &self.coeffs
    }

    pub fn get(&self, idx: HaarIndex) -> Option<f64> {
        let n = 1usize << self.level;
        let ok = |k: u32, l: usize| k < self.level && l < (1 << k);
        if !ok(idx.kx, idx.lx) || !ok(idx.ky, idx.ly) {
            return None;
        }
        let (a, b) = ((1usize << idx.kx) + idx.lx, (1usize << idx.ky) + idx.ly);
        debug_assert!(a < n && b < n);
        Some(self.coeffs[[a, b]])
    }

    /// All `(2^K - 1)^2` wavelet products, ordered by `(kx, lx, ky, ly)`.
    pub fn iter(&self) -> impl Iterator<Item = (HaarIndex, f64)> + '_ {
        let n = 1usize << self.level;
        (1..n).flat_map(move |a| {
            (1..n).map(move |b| {
                let (kx, lx) = haar_position(a);
                let (ky, ly) = haar_position(b);
                (HaarIndex { kx, lx, ky, ly }, self.coeffs[[a, b]])
            })
        })
    }

    /// The coefficients with equal scale on both axes. Each one is a local
    /// log odds ratio of the four quadrants of a dyadic square.
    pub fn equal_scale(&self) -> Vec<(HaarIndex, f64)> {
        self.iter().filter(|(i, _)| i.kx == i.ky).collect()
    }
}

/// Haar coefficients of `log f` by direct summation over each basis
/// function's support rectangle.
pub fn haar_delta(g: &GridDensity) -> Result<HaarCoefficients> {
    let logs = g.log_values()?;
    let n = g.size();
    let level = g.level();
    let cell_area = 1.0 / (n * n) as f64;
    let rows: Vec<Vec<f64>> = (1..n)
        .into_par_iter()
        .map(|a| {
            let (kx, lx) = haar_position(a);
            let wx = n >> kx;
            (0..n)
                .map(|b| {
                    if b == 0 {
                        return 0.0;
                    }
                    let (ky, ly) = haar_position(b);
                    let wy = n >> ky;
                    let mut acc = 0.0;
                    for i in lx * wx..(lx + 1) * wx {
                        let sx = if i < lx * wx + wx / 2 { 1.0 } else { -1.0 };
                        let mut row = 0.0;
                        for j in ly * wy..(ly + 1) * wy {
                            let sy = if j < ly * wy + wy / 2 { 1.0 } else { -1.0 };
                            row += sy * logs[[i, j]];
                        }
                        acc += sx * row;
                    }
                    let amplitude = 2f64.powf(0.5 * (kx + ky) as f64);
                    acc * amplitude * cell_area
                })
                .collect()
        })
        .collect();
    let mut coeffs = Array2::zeros((n, n));
    for (a, row) in rows.into_iter().enumerate() {
        for (b, v) in row.into_iter().enumerate() {
            coeffs[[a + 1, b]] = v;
        }
    }
    Ok(HaarCoefficients::from_matrix(level, coeffs))
}

/// Orthonormal 1-D Haar transform of `n` cell values, scaled so that the
/// output is the coefficient vector of the piecewise-constant function in
/// L2 of the unit interval.
fn haar_1d(v: &mut [f64]) {
    let n = v.len();
    let mut buf = vec![0.0; n];
    let mut len = n;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    while len > 1 {
        let half = len / 2;
        for k in 0..half {
            buf[k] = (v[2 * k] + v[2 * k + 1]) * s;
            buf[half + k] = (v[2 * k] - v[2 * k + 1]) * s;
        }
        v[..len].copy_from_slice(&buf[..len]);
        len = half;
    }
    let scale = 1.0 / (n as f64).sqrt();
    v.iter_mut().for_each(|x| *x *= scale);
}

/// Tensor Haar transform of a surface of cell values.
pub fn haar_transform(surface: &Array2<f64>) -> Array2<f64> {
    let mut out = surface.clone();
    for mut row in out.rows_mut() {
        let mut tmp = row.to_vec();
        haar_1d(&mut tmp);
        row.iter_mut().zip(tmp).for_each(|(d, s)| *d = s);
    }
    for mut col in out.columns_mut() {
        let mut tmp = col.to_vec();
        haar_1d(&mut tmp);
        col.iter_mut().zip(tmp).for_each(|(d, s)| *d = s);
    }
    out
}

/// Same coefficients as [`haar_delta`], computed as the fast tensor
/// transform of [`lambda_bar`].
pub fn haar_delta_via_lambda(g: &GridDensity) -> Result<HaarCoefficients> {
    let lb = lambda_bar(g)?;
    Ok(HaarCoefficients::from_matrix(g.level(), haar_transform(&lb)))
}

fn double_centre(m: &Array2<f64>) -> Array2<f64> {
    let (r, c) = m.dim();
    let row_means: Vec<f64> = m.rows().into_iter().map(|r| r.sum() / c as f64).collect();
    let col_means: Vec<f64> = m.columns().into_iter().map(|c| c.sum() / r as f64).collect();
    let grand = row_means.iter().sum::<f64>() / r as f64;
    Array2::from_shape_fn((r, c), |(i, j)| m[[i, j]] - row_means[i] - col_means[j] + grand)
}

/// Centred log odds ratio surface: `log f` minus its row and column means
/// plus the grand mean.
pub fn lambda_bar(g: &GridDensity) -> Result<Array2<f64>> {
    Ok(double_centre(&g.log_values()?))
}

/// Odds ratio function relative to the pivot cell `(pr, pc)`.
pub fn odds_ratio_function(g: &GridDensity, pivot: (usize, usize)) -> Result<Array2<f64>> {
    let n = g.size();
    let (pr, pc) = pivot;
    if pr >= n || pc >= n {
        return Err(Error::OutOfRange(format!("pivot ({pr}, {pc}) outside {n}x{n} grid")));
    }
    let f = g.values();
    for k in 0..n {
        if f[[k, pc]] <= 0.0 {
            return Err(Error::ZeroCell { row: k, col: pc });
        }
        if f[[pr, k]] <= 0.0 {
            return Err(Error::ZeroCell { row: pr, col: k });
        }
    }
    let fp = f[[pr, pc]];
    Ok(Array2::from_shape_fn((n, n), |(i, j)| {
        if i == pr || j == pc {
            1.0
        } else {
            f[[i, j]] * fp / (f[[i, pc]] * f[[pr, j]])
        }
    }))
}

/// Mixed second difference of `log f`, divided by the cell area.
///
/// Entry `(i, j)` is the stencil with upper corner at grid cell
/// `(i + 1, j + 1)`, so the output is `(2^K - 1) x (2^K - 1)`. Requires a
/// positive density everywhere.
pub fn local_dependence(g: &GridDensity) -> Result<Array2<f64>> {
    local_dependence_scaled(g, 1.0, 1.0)
}

/// As [`local_dependence`] for a grid laid over a rectangle of side lengths
/// `width_x` and `width_y` instead of the unit square.
pub fn local_dependence_scaled(g: &GridDensity, width_x: f64, width_y: f64) -> Result<Array2<f64>> {
    if !(width_x > 0.0 && width_y > 0.0) {
        return Err(Error::OutOfRange("grid widths must be positive".into()));
    }
    let logs = g.log_values()?;
    Ok(stencil(&logs, g.level(), width_x, width_y))
}

/// As [`local_dependence`] but restricted to the support: stencils that
/// touch a zero cell give NaN instead of an error.
pub fn local_dependence_masked(g: &GridDensity) -> Array2<f64> {
    let logs = g.values().mapv(|v| if v > 0.0 { v.ln() } else { f64::NAN });
    stencil(&logs, g.level(), 1.0, 1.0)
}

fn stencil(logs: &Array2<f64>, level: u32, width_x: f64, width_y: f64) -> Array2<f64> {
    let n = logs.nrows();
    let scale = (1u64 << (2 * level)) as f64 / (width_x * width_y);
    Array2::from_shape_fn((n - 1, n - 1), |(a, b)| {
        let (i, j) = (a + 1, b + 1);
        (logs[[i, j]] - logs[[i - 1, j]] - logs[[i, j - 1]] + logs[[i - 1, j - 1]]) * scale
    })
}

/// Mixed binary-continuous local dependence.
///
/// `probs` has two rows: `probs[[x, j]]` is `P(X = x | Y in cell j)` on a
/// grid of `2^K` cells. The result has `2^K - 1` entries: forward
/// differences of the conditional logit divided by the cell width.
pub fn mixed_local_dependence(probs: &Array2<f64>) -> Result<Vec<f64>> {
    let (r, n) = probs.dim();
    if r != 2 {
        return Err(Error::ShapeMismatch {
            expected: (2, n),
            found: (r, n),
        });
    }
    if n < 2 || !n.is_power_of_two() {
        let level = n.max(1).ilog2().max(1);
        return Err(Error::GridShape {
            level,
            expected: 1 << level,
            found: n,
        });
    }
    for ((x, j), &v) in probs.indexed_iter() {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidEntry { row: x, col: j, value: v });
        }
        if v == 0.0 {
            return Err(Error::ZeroCell { row: x, col: j });
        }
    }
    for j in 0..n {
        if (probs[[0, j]] + probs[[1, j]] - 1.0).abs() > 1e-10 {
            return Err(Error::NotStochastic("conditional column"));
        }
    }
    let logit: Vec<f64> = (0..n).map(|j| (probs[[1, j]] / probs[[0, j]]).ln()).collect();
    Ok(logit.windows(2).map(|w| (w[1] - w[0]) * n as f64).collect())
}

/// Log density of the Gaussian copula with correlation `rho`.
pub fn gaussian_copula_log_density(rho: f64, u: f64, v: f64) -> f64 {
    let x = inverse_normal_cdf(u);
    let y = inverse_normal_cdf(v);
    let s = 1.0 - rho * rho;
    -0.5 * s.ln() + (2.0 * rho * x * y - rho * rho * (x * x + y * y)) / (2.0 * s)
}

/// Gaussian copula density at cell centres, renormalized to mass 1.
pub fn gaussian_copula_grid(rho: f64, level: u32) -> Result<GridDensity> {
    if !(rho.abs() < 1.0) {
        return Err(Error::OutOfRange(format!("copula correlation {rho} must lie in (-1, 1)")));
    }
    GridDensity::from_fn(level, |u, v| gaussian_copula_log_density(rho, u, v).exp())
}

/// Bivariate standard normal density with correlation `rho` on the square
/// `[-half_width, half_width]^2`, sampled at cell centres.
pub fn gaussian_density_grid(rho: f64, level: u32, half_width: f64) -> Result<GridDensity> {
    if !(rho.abs() < 1.0) {
        return Err(Error::OutOfRange(format!("correlation {rho} must lie in (-1, 1)")));
    }
    if !(half_width > 0.0) {
        return Err(Error::OutOfRange("half width must be positive".into()));
    }
    let s = 1.0 - rho * rho;
    GridDensity::from_fn(level, |u, v| {
        let x = (2.0 * u - 1.0) * half_width;
        let y = (2.0 * v - 1.0) * half_width;
        (-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * s)).exp()
    })
}
