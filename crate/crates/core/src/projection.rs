//! Relative entropy, iterative proportional fitting and I-projections onto
//! Fréchet classes.
//!
//! IPF alternates a row scaling to the target row margin and a column
//! scaling to the target column margin, so the current table is always the
//! start table multiplied by `alpha[x] * beta[y]`. When the target margins are
//! compatible with the start support, the limit is the unique member of the
//! target class with the start's dependence, which is also the I-projection
//! of the start onto that class.

use ndarray::{Array2, Axis};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::table::{MarginPair, ProbTable};

pub const DEFAULT_IPF_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// A cell below this fraction of its starting value counts as lost support.
pub const SHRINK_RATIO: f64 = 1e-14;

/// `sum p log(p/q)` over the support of `p`; `+inf` when `p` puts mass where
/// `q` has none.
pub fn kl_divergence(p: &ProbTable, q: &ProbTable) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::ShapeMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let mut total = 0.0;
    for (&a, &b) in p.probs().iter().zip(q.probs().iter()) {
        if a > 0.0 {
            if b <= 0.0 {
                return Ok(f64::INFINITY);
            }
            total += a * (a / b).ln();
        }
    }
    Ok(total.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpfOptions {
    /// Stop once the L1 gap between current and target margins is below this.
    pub tol: f64,
    /// Maximum number of row+column sweeps.
    pub max_iter: usize,
}

impl Default for IpfOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_IPF_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IpfReport {
    #[serde(serialize_with = "serialize_table")]
    pub result: ProbTable,
    /// Cumulative row factors, normalized so that `sum alpha[x] * p[x.] = 1`.
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Completed sweeps.
    pub iterations: usize,
    pub final_margin_gap: f64,
    pub converged: bool,
    pub support_shrunk: bool,
    /// Ratio of the last two nonzero margin gaps; below 1 for geometric convergence.
    pub contraction: Option<f64>,
}

fn serialize_table<S: serde::Serializer>(t: &ProbTable, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.nrows()))?;
    for row in t.probs().axis_iter(Axis(0)) {
        seq.serialize_element(&row.to_vec())?;
    }
    seq.end()
}

impl IpfReport {
    /// Largest relative deviation between the result and
    /// `start * alpha * beta` over the support.
    pub fn factorization_residual(&self, start: &ProbTable) -> f64 {
        let mut worst: f64 = 0.0;
        for ((r, c), &p) in start.probs().indexed_iter() {
            if p > 0.0 {
                let model = p * self.alpha[r] * self.beta[c];
                let got = self.result.get(r, c);
                worst = worst.max((got - model).abs() / model.max(got));
            }
        }
        worst
    }
}

fn margin_gap(q: &Array2<f64>, target: &MarginPair) -> f64 {
    let rows = q.sum_axis(Axis(1));
    let cols = q.sum_axis(Axis(0));
    rows.iter().zip(target.rows()).map(|(a, b)| (a - b).abs()).sum::<f64>()
        + cols.iter().zip(target.cols()).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Iterative proportional fitting of `start` to `target` margins.
///
/// Each sweep scales rows first, then columns. Convergence failure is
/// reported, not raised: an infeasible target shows up as
/// `converged == false` and/or `support_shrunk == true`.
pub fn ipf(start: &ProbTable, target: &MarginPair, opts: IpfOptions) -> Result<IpfReport> {
    let (rows, cols) = start.dim();
    if target.rows().len() != rows {
        return Err(Error::LengthMismatch {
            expected: rows,
            found: target.rows().len(),
        });
    }
    if target.cols().len() != cols {
        return Err(Error::LengthMismatch {
            expected: cols,
            found: target.cols().len(),
        });
    }

    let initial = start.probs();
    let mut q = initial.clone();
    let mut alpha = vec![1.0; rows];
    let mut beta = vec![1.0; cols];
    let mut gap = margin_gap(&q, target);
    let mut contraction = None;
    let mut iterations = 0;

    while gap > opts.tol && iterations < opts.max_iter {
        for (r, mut row) in q.axis_iter_mut(Axis(0)).enumerate() {
            let sum = row.sum();
            let f = target.rows()[r] / sum;
            alpha[r] *= f;
            row.mapv_inplace(|v| v * f);
        }
        for (c, mut col) in q.axis_iter_mut(Axis(1)).enumerate() {
            let sum = col.sum();
            let f = target.cols()[c] / sum;
            beta[c] *= f;
            col.mapv_inplace(|v| v * f);
        }
        iterations += 1;
        let previous_gap = std::mem::replace(&mut gap, margin_gap(&q, target));
        if previous_gap > 0.0 && gap > 0.0 {
            contraction = Some(gap / previous_gap);
        }
        if !gap.is_finite() {
            break;
        }
    }

    let support_shrunk = initial
        .iter()
        .zip(q.iter())
        .any(|(&p0, &p)| p0 > 0.0 && p < SHRINK_RATIO * p0);

    // Resolve the free constant between alpha and beta.
    let start_rows = start.row_margin();
    let scale: f64 = alpha.iter().zip(&start_rows).map(|(a, p)| a * p).sum();
    alpha.iter_mut().for_each(|a| *a /= scale);
    beta.iter_mut().for_each(|b| *b *= scale);

    let result = ProbTable::from_weights(q)?;
    Ok(IpfReport {
        result,
        alpha,
        beta,
        iterations,
        final_margin_gap: gap,
        converged: gap <= opts.tol,
        support_shrunk,
        contraction,
    })
}

/// The I-projection of `source` onto the Fréchet class of `target`:
/// the class member minimizing `kl_divergence(member, source)`.
/// Computed by [`ipf`].
pub fn i_project(source: &ProbTable, target: &MarginPair, opts: IpfOptions) -> Result<IpfReport> {
    ipf(source, target, opts)
}

/// The three terms of the Pythagorean identity for the I-projection
/// `proj` of `source` onto the class of `other`'s margins:
/// `I(other||source) = I(other||proj) + I(proj||source)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PythagorasTerms {
    pub lhs: f64,
    pub rhs_other_to_projection: f64,
    pub rhs_projection_to_source: f64,
}

impl PythagorasTerms {
    pub fn defect(&self) -> f64 {
        (self.lhs - self.rhs_other_to_projection - self.rhs_projection_to_source).abs()
    }
}

pub fn pythagoras_check(source: &ProbTable, other: &ProbTable, opts: IpfOptions) -> Result<PythagorasTerms> {
    let proj = i_project(source, &other.margins(), opts)?.result;
    Ok(PythagorasTerms {
        lhs: kl_divergence(other, source)?,
        rhs_other_to_projection: kl_divergence(other, &proj)?,
        rhs_projection_to_source: kl_divergence(&proj, source)?,
    })
}
