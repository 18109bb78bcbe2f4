//! Quantities fixed by the support pattern alone.
//!
//! The central object is the space of `R x S` matrices vanishing off the
//! support whose rows and columns all sum to zero. Its dimension is the
//! number of free dependence parameters left once the support is known;
//! structural zeros consume the rest. The space is computed exactly from the
//! 0/1 margin-constraint system and only then turned into a floating-point
//! orthonormal basis.
//!
//! The module also enumerates maximal zero rectangles, which decide whether a
//! pair of target margins can be reached without losing support cells.
//!
//! Regularity conditions needed for infinite or continuous supports hold
//! automatically for finite tables and are not checked.

use std::collections::BTreeSet;

use ndarray::{Array2, Axis};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Rref;
use crate::table::{MarginPair, SupportPattern};

/// Tolerance for zero margins of basis elements.
pub const MARGIN_TOL: f64 = 1e-12;
/// Tolerance for orthonormality of basis elements.
pub const GRAM_TOL: f64 = 1e-10;
/// Equality tolerance in the rectangle condition of [`frechet_feasible`].
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Row-sum and column-sum constraints over the support cells, one variable
/// per cell in row-major order.
fn constraint_rows(s: &SupportPattern) -> Vec<Vec<i64>> {
    let (rows, cols) = s.dim();
    let cells: Vec<(usize, usize)> = s.cells().collect();
    let mut m = vec![vec![0i64; cells.len()]; rows + cols];
    for (k, &(r, c)) in cells.iter().enumerate() {
        m[r][k] = 1;
        m[rows + c][k] = 1;
    }
    m
}

/// Dimension of the zero-margin subspace supported on `s`, by exact rank.
pub fn dim_gamma(s: &SupportPattern) -> usize {
    let rref = Rref::from_integer_rows(&constraint_rows(s));
    s.n_cells() - rref.rank()
}

/// Orthonormal basis (Frobenius inner product) of the zero-margin subspace
/// supported on a pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceBasis {
    support: SupportPattern,
    elements: Vec<Array2<f64>>,
}

impl DependenceBasis {
    /// Wraps user-supplied elements after checking support, zero margins and
    /// orthonormality, and that they span the full subspace.
    pub fn from_elements(support: SupportPattern, elements: Vec<Array2<f64>>) -> Result<Self> {
        let basis = Self { support, elements };
        if basis.elements.len() != dim_gamma(&basis.support) || !basis.is_valid() {
            return Err(Error::BasisMismatch);
        }
        Ok(basis)
    }

    pub fn support(&self) -> &SupportPattern {
        &self.support
    }

    pub fn elements(&self) -> &[Array2<f64>] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    fn is_valid(&self) -> bool {
        let dim = self.support.dim();
        for (j, e) in self.elements.iter().enumerate() {
            if e.dim() != dim {
                return false;
            }
            let off_support = e
                .indexed_iter()
                .any(|((r, c), &v)| !self.support.contains(r, c) && v != 0.0);
            let bad_margin = e
                .sum_axis(Axis(0))
                .iter()
                .chain(e.sum_axis(Axis(1)).iter())
                .any(|s| s.abs() > MARGIN_TOL);
            if off_support || bad_margin {
                return false;
            }
            for (k, f) in self.elements.iter().enumerate().skip(j) {
                let target = if j == k { 1.0 } else { 0.0 };
                if (frobenius(e, f) - target).abs() > GRAM_TOL {
                    return false;
                }
            }
        }
        true
    }
}

pub(crate) fn frobenius(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Exact nullspace vectors ordered by their free cell (row-major), then
/// modified Gram-Schmidt with one re-orthogonalization pass.
pub fn gamma_basis(s: &SupportPattern) -> DependenceBasis {
    let cells: Vec<(usize, usize)> = s.cells().collect();
    let rref = Rref::from_integer_rows(&constraint_rows(s));
    let mut elements: Vec<Array2<f64>> = Vec::new();
    for v in rref.nullspace() {
        let mut e = Array2::zeros(s.dim());
        for (value, &(r, c)) in v.iter().zip(&cells) {
            e[[r, c]] = value.to_f64().unwrap_or(0.0);
        }
        for _ in 0..2 {
            for q in &elements {
                let proj = frobenius(&e, q);
                e.scaled_add(-proj, q);
            }
        }
        let norm = frobenius(&e, &e).sqrt();
        e.mapv_inplace(|x| x / norm);
        elements.push(e);
    }
    DependenceBasis {
        support: s.clone(),
        elements,
    }
}

/// A rectangle `rows x cols` containing only structural zeros.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ZeroRectangle {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl ZeroRectangle {
    pub fn is_zero_in(&self, s: &SupportPattern) -> bool {
        self.rows
            .iter()
            .all(|&r| self.cols.iter().all(|&c| !s.contains(r, c)))
    }
}

/// All maximal zero rectangles with nonempty row and column sets.
///
/// These are the maximal bicliques of the bipartite graph joining row `x` to
/// column `y` when `(x, y)` is a structural zero. Every maximal column set is
/// an intersection of row neighbourhoods, so the enumeration closes the set
/// of row neighbourhoods under intersection. The count can grow exponentially
/// with the table size; desk-scale tables (up to ~15x15) are fine.
pub fn maximal_zero_rectangles(s: &SupportPattern) -> Vec<ZeroRectangle> {
    let (rows, cols) = s.dim();
    let neighbourhood = |r: usize| -> Vec<usize> { (0..cols).filter(|&c| !s.contains(r, c)).collect() };

    let mut closed: BTreeSet<Vec<usize>> = BTreeSet::new();
    for r in 0..rows {
        let n = neighbourhood(r);
        if n.is_empty() {
            continue;
        }
        let mut fresh: Vec<Vec<usize>> = closed
            .iter()
            .map(|b| b.iter().copied().filter(|c| n.contains(c)).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        fresh.push(n);
        closed.extend(fresh);
    }

    let mut out: Vec<ZeroRectangle> = closed
        .into_iter()
        .map(|cols_set| {
            let rows_set = (0..rows)
                .filter(|&r| cols_set.iter().all(|&c| !s.contains(r, c)))
                .collect();
            ZeroRectangle {
                rows: rows_set,
                cols: cols_set,
            }
        })
        .collect();
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Some member of the target Fréchet class has exactly this support.
    Feasible,
    /// The class is reachable only by giving up support cells.
    FeasibleOnSmallerSupport,
    /// No distribution supported inside the pattern has these margins.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub verdict: Verdict,
    /// Largest `rows(A) + cols(B) - 1` over maximal zero rectangles
    /// (`None` without structural zeros).
    pub max_excess: Option<f64>,
    /// Rectangles responsible for the verdict when it is not `Feasible`.
    pub witnesses: Vec<ZeroRectangle>,
}

/// Can the target margins be mounted on this support?
///
/// Only maximal rectangles are checked. With strictly positive margins,
/// enlarging a rectangle strictly increases `rows(A) + cols(B)`, so a
/// non-maximal rectangle reaching 1 has a maximal superset above 1.
pub fn frechet_feasible(s: &SupportPattern, target: &MarginPair) -> Result<FeasibilityReport> {
    if target.rows().len() != s.nrows() {
        return Err(Error::LengthMismatch {
            expected: s.nrows(),
            found: target.rows().len(),
        });
    }
    if target.cols().len() != s.ncols() {
        return Err(Error::LengthMismatch {
            expected: s.ncols(),
            found: target.cols().len(),
        });
    }
    let rects = maximal_zero_rectangles(s);
    let mut infeasible = Vec::new();
    let mut tight = Vec::new();
    let mut max_excess: Option<f64> = None;
    for rect in rects.iter() {
        let mass: f64 = rect.rows.iter().map(|&r| target.rows()[r]).sum::<f64>()
            + rect.cols.iter().map(|&c| target.cols()[c]).sum::<f64>();
        let excess = mass - 1.0;
        max_excess = Some(max_excess.map_or(excess, |m: f64| m.max(excess)));
        if excess > FEASIBILITY_TOL {
            infeasible.push(rect.clone());
        } else if excess.abs() <= FEASIBILITY_TOL {
            let complement = ZeroRectangle {
                rows: (0..s.nrows()).filter(|r| !rect.rows.contains(r)).collect(),
                cols: (0..s.ncols()).filter(|c| !rect.cols.contains(c)).collect(),
            };
            if !complement.is_zero_in(s) {
                tight.push(rect.clone());
            }
        }
    }
    let (verdict, witnesses) = if !infeasible.is_empty() {
        (Verdict::Infeasible, infeasible)
    } else if !tight.is_empty() {
        (Verdict::FeasibleOnSmallerSupport, tight)
    } else {
        (Verdict::Feasible, Vec::new())
    };
    Ok(FeasibilityReport {
        verdict,
        max_excess,
        witnesses,
    })
}
