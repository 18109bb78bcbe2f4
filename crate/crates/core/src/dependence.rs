//! The dependence signature of a table: its support together with the
//! projection of the log-probabilities onto the zero-margin subspace.
//!
//! Two tables share the same dependence exactly when their supports agree
//! and their projections `lambda_circ` agree; the coordinate vector `delta`
//! depends on the chosen orthonormal basis but its norm does not.

use nalgebra::{DMatrix, DVector};
use ndarray::{Array2, Axis};

use crate::error::{Error, Result};
use crate::support::{frobenius, gamma_basis, DependenceBasis};
use crate::table::{ProbTable, SupportPattern};

/// Default tolerance for quasi-independence and same-dependence checks.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Residual tolerance used to decide compatibility of conditionals.
pub const COMPATIBILITY_TOL: f64 = 1e-10;
const STOCHASTIC_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DependenceSignature {
    pub support: SupportPattern,
    /// Projection of the log-table onto the zero-margin subspace; zero off support.
    pub lambda_circ: Array2<f64>,
    /// Coordinates of `lambda_circ` in the basis used.
    pub delta: Vec<f64>,
    pub norm2: f64,
}

/// Log-probabilities on the support, 0 elsewhere.
pub fn log_table(t: &ProbTable) -> Array2<f64> {
    t.probs().mapv(|p| if p > 0.0 { p.ln() } else { 0.0 })
}

pub fn signature(t: &ProbTable, basis: &DependenceBasis) -> Result<DependenceSignature> {
    if basis.support() != t.support() {
        return Err(Error::BasisMismatch);
    }
    let lambda = log_table(t);
    let delta: Vec<f64> = basis.elements().iter().map(|e| frobenius(&lambda, e)).collect();
    let mut lambda_circ = Array2::zeros(t.dim());
    for (d, e) in delta.iter().zip(basis.elements()) {
        lambda_circ.scaled_add(*d, e);
    }
    let norm2 = delta.iter().map(|d| d * d).fold(0.0, |a, b| a + b).sqrt();
    Ok(DependenceSignature {
        support: t.support().clone(),
        lambda_circ,
        delta,
        norm2,
    })
}

/// [`signature`] with the canonical basis of the table's own support.
pub fn signature_of(t: &ProbTable) -> DependenceSignature {
    signature(t, &gamma_basis(t.support())).expect("canonical basis matches its support")
}

/// Residual of the least-squares fit `values[x][y] ≈ a[x] + b[y]` over the
/// support cells; zero off support.
///
/// This is the orthogonal projection onto the zero-margin subspace computed
/// without a basis. The additive model is identified by fixing the first
/// row effect of each connected component of the support to 0.
pub fn additive_fit_residual(support: &SupportPattern, values: &Array2<f64>) -> Array2<f64> {
    let (rows, cols) = support.dim();
    let n = rows + cols;

    // Grounded vertex per component: the smallest row index reached.
    let mut comp = vec![usize::MAX; n];
    let mut grounded = vec![false; n];
    for start in 0..rows {
        if comp[start] != usize::MAX {
            continue;
        }
        grounded[start] = true;
        let mut stack = vec![start];
        comp[start] = start;
        while let Some(v) = stack.pop() {
            let neighbours: Vec<usize> = if v < rows {
                (0..cols).filter(|&c| support.contains(v, c)).map(|c| rows + c).collect()
            } else {
                (0..rows).filter(|&r| support.contains(r, v - rows)).collect()
            };
            for w in neighbours {
                if comp[w] == usize::MAX {
                    comp[w] = start;
                    stack.push(w);
                }
            }
        }
    }

    let free: Vec<usize> = (0..n).filter(|&v| !grounded[v]).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        index[v] = i;
    }
    let mut normal = DMatrix::<f64>::zeros(free.len(), free.len());
    let mut rhs = DVector::<f64>::zeros(free.len());
    for (r, c) in support.cells() {
        let (a, b) = (index[r], index[rows + c]);
        let v = values[[r, c]];
        for &(i, j) in &[(a, a), (a, b), (b, a), (b, b)] {
            if i != usize::MAX && j != usize::MAX {
                normal[(i, j)] += 1.0;
            }
        }
        if a != usize::MAX {
            rhs[a] += v;
        }
        if b != usize::MAX {
            rhs[b] += v;
        }
    }
    let solution = normal
        .cholesky()
        .expect("grounded additive normal equations are positive definite")
        .solve(&rhs);
    let effect = |v: usize| if grounded[v] { 0.0 } else { solution[index[v]] };

    let mut residual = Array2::zeros((rows, cols));
    for (r, c) in support.cells() {
        residual[[r, c]] = values[[r, c]] - effect(r) - effect(rows + c);
    }
    residual
}

/// `log p` is additive on the support.
pub fn is_quasi_independent(t: &ProbTable, tol: f64) -> bool {
    signature_of(t).norm2 <= tol
}

/// Full support and quasi-independent.
pub fn is_independent(t: &ProbTable, tol: f64) -> bool {
    t.support().is_full() && is_quasi_independent(t, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub same_support: bool,
    /// Sup-norm distance between the two `lambda_circ`; `None` when the
    /// supports differ.
    pub lambda_gap: Option<f64>,
}

impl Comparison {
    pub fn same_dependence(&self, tol: f64) -> bool {
        self.same_support && self.lambda_gap.is_some_and(|g| g <= tol)
    }
}

pub fn compare(t1: &ProbTable, t2: &ProbTable) -> Result<Comparison> {
    if t1.dim() != t2.dim() {
        return Err(Error::ShapeMismatch {
            expected: t1.dim(),
            found: t2.dim(),
        });
    }
    if t1.support() != t2.support() {
        return Ok(Comparison {
            same_support: false,
            lambda_gap: None,
        });
    }
    let basis = gamma_basis(t1.support());
    let s1 = signature(t1, &basis)?;
    let s2 = signature(t2, &basis)?;
    let gap = s1
        .lambda_circ
        .iter()
        .zip(s2.lambda_circ.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Comparison {
        same_support: true,
        lambda_gap: Some(gap),
    })
}

/// Identical supports and identical `lambda_circ` (sup-norm within `tol`).
pub fn same_dependence(t1: &ProbTable, t2: &ProbTable, tol: f64) -> Result<bool> {
    Ok(compare(t1, t2)?.same_dependence(tol))
}

/// Whether a row-conditional specification (rows sum to 1) and a
/// column-conditional specification (columns sum to 1) come from one joint
/// distribution: same zero pattern, and their ratio factorizes as
/// `f(x) g(y)` on the support.
pub fn compatible_conditionals(rows_cond: &Array2<f64>, cols_cond: &Array2<f64>) -> Result<bool> {
    if rows_cond.dim() != cols_cond.dim() {
        return Err(Error::ShapeMismatch {
            expected: rows_cond.dim(),
            found: cols_cond.dim(),
        });
    }
    check_stochastic(rows_cond, Axis(1), "row-conditional specification")?;
    check_stochastic(cols_cond, Axis(0), "column-conditional specification")?;
    let pattern = rows_cond.mapv(|p| p > 0.0);
    if pattern != cols_cond.mapv(|p| p > 0.0) {
        return Ok(false);
    }
    let support = SupportPattern::new(pattern)?;
    let log_ratio = Array2::from_shape_fn(rows_cond.dim(), |(r, c)| {
        if support.contains(r, c) {
            (cols_cond[[r, c]] / rows_cond[[r, c]]).ln()
        } else {
            0.0
        }
    });
    let residual = additive_fit_residual(&support, &log_ratio);
    Ok(residual.iter().all(|v| v.abs() <= COMPATIBILITY_TOL))
}

fn check_stochastic(m: &Array2<f64>, sum_axis: Axis, what: &'static str) -> Result<()> {
    if m.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::NotStochastic(what));
    }
    if m.sum_axis(sum_axis).iter().any(|s| (s - 1.0).abs() > STOCHASTIC_TOL) {
        return Err(Error::NotStochastic(what));
    }
    Ok(())
}

fn require_full(t: &ProbTable) -> Result<()> {
    match t.probs().indexed_iter().find(|(_, &p)| p <= 0.0) {
        Some(((row, col), _)) => Err(Error::StructuralZero { row, col }),
        None => Ok(()),
    }
}

/// `log(p00 p_xy / (p_x0 p_0y))` for `x, y >= 1`, as an `(R-1) x (S-1)` matrix.
pub fn odds_ratios_pivot(t: &ProbTable) -> Result<Array2<f64>> {
    require_full(t)?;
    let l = t.probs().mapv(f64::ln);
    let (rows, cols) = t.dim();
    Ok(Array2::from_shape_fn((rows - 1, cols - 1), |(i, j)| {
        let (x, y) = (i + 1, j + 1);
        l[[0, 0]] + l[[x, y]] - l[[x, 0]] - l[[0, y]]
    }))
}

/// Local log odds ratios `log(p_{x-1,y-1} p_xy / (p_{x-1,y} p_{x,y-1}))`.
pub fn odds_ratios_local(t: &ProbTable) -> Result<Array2<f64>> {
    require_full(t)?;
    let l = t.probs().mapv(f64::ln);
    let (rows, cols) = t.dim();
    Ok(Array2::from_shape_fn((rows - 1, cols - 1), |(i, j)| {
        let (x, y) = (i + 1, j + 1);
        l[[x - 1, y - 1]] + l[[x, y]] - l[[x - 1, y]] - l[[x, y - 1]]
    }))
}
