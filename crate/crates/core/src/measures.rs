//! Dependence measures and, for contrast, classical concordance indices.
//!
//! The overall measure combines a regional part `R`, the fraction of the
//! `(R-1)(S-1)` dependence parameters consumed by structural zeros, with a
//! calibrated distance `Q` from quasi-independence on the support:
//! `D = R + (1 - R) Q`. All three are invariant under rank-one rescaling of
//! the table, unlike Pearson's, Spearman's and Kendall's coefficients or the
//! mutual information.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use serde::{Serialize, Serializer};

use crate::dependence::{signature, DependenceSignature};
use crate::error::{Error, Result};
use crate::projection::kl_divergence;
use crate::support::{dim_gamma, gamma_basis};
use crate::table::{ProbTable, SupportPattern};

/// Monotone map from `||delta||_2` to `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Calibration {
    /// `tanh(d / 2)`: Yule's colligation coefficient for 2x2 tables.
    #[default]
    Yule,
    /// Inverse of `d = |rho| / (1 - rho^2)`: returns `|rho|` for the
    /// Gaussian copula.
    Gauss,
}

impl Calibration {
    pub fn id(self) -> &'static str {
        match self {
            Calibration::Yule => "yule",
            Calibration::Gauss => "gauss",
        }
    }

    pub fn apply(self, norm2: f64) -> f64 {
        match self {
            Calibration::Yule => (norm2 / 2.0).tanh(),
            // (sqrt(1 + 4d^2) - 1) / (2d), rewritten to stay exact near 0.
            Calibration::Gauss => 2.0 * norm2 / ((1.0 + 4.0 * norm2 * norm2).sqrt() + 1.0),
        }
    }
}

impl fmt::Display for Calibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Calibration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "yule" => Ok(Calibration::Yule),
            "gauss" => Ok(Calibration::Gauss),
            other => Err(Error::UnknownCalibration(other.to_string())),
        }
    }
}

impl Serialize for Calibration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub regional: f64,
    pub quasi_deviation: f64,
    pub overall: f64,
    pub calibration: Calibration,
    pub norm2: f64,
    /// Free dependence parameters left by the support.
    pub dim_gamma: usize,
    /// `(R-1)(S-1)`.
    pub max_parameters: usize,
}

/// Fraction of the `(R-1)(S-1)` dependence parameters consumed by the support.
pub fn regional_dependence(s: &SupportPattern) -> f64 {
    let total = (s.nrows() - 1) * (s.ncols() - 1);
    (total - dim_gamma(s)) as f64 / total as f64
}

pub fn quasi_deviation(sig: &DependenceSignature, calibration: Calibration) -> f64 {
    calibration.apply(sig.norm2)
}

pub fn overall_dependence(t: &ProbTable, calibration: Calibration) -> MeasureReport {
    let basis = gamma_basis(t.support());
    let sig = signature(t, &basis).expect("canonical basis matches its support");
    let max_parameters = (t.nrows() - 1) * (t.ncols() - 1);
    let regional = (max_parameters - basis.dim()) as f64 / max_parameters as f64;
    let quasi = quasi_deviation(&sig, calibration);
    MeasureReport {
        regional,
        quasi_deviation: quasi,
        overall: regional + (1.0 - regional) * quasi,
        calibration,
        norm2: sig.norm2,
        dim_gamma: basis.dim(),
        max_parameters,
    }
}

/// Cumulative masses: `mass(x0..x1, y0..y1)` over half-open index ranges.
struct Cumulative {
    c: Array2<f64>,
}

impl Cumulative {
    fn new(p: &Array2<f64>) -> Self {
        let (rows, cols) = p.dim();
        let mut c = Array2::zeros((rows + 1, cols + 1));
        for r in 0..rows {
            for s in 0..cols {
                c[[r + 1, s + 1]] = p[[r, s]] + c[[r, s + 1]] + c[[r + 1, s]] - c[[r, s]];
            }
        }
        Self { c }
    }

    fn mass(&self, x0: usize, x1: usize, y0: usize, y1: usize) -> f64 {
        self.c[[x1, y1]] - self.c[[x0, y1]] - self.c[[x1, y0]] + self.c[[x0, y0]]
    }

    /// Joint cdf at `(x, y)`, inclusive.
    fn cdf(&self, x: usize, y: usize) -> f64 {
        self.c[[x + 1, y + 1]]
    }
}

/// Pearson correlation with the row and column indices as scores.
pub fn pearson_rho(t: &ProbTable) -> Result<f64> {
    let rows = t.row_margin();
    let cols = t.col_margin();
    let mean = |m: &[f64]| m.iter().enumerate().map(|(i, p)| i as f64 * p).sum::<f64>();
    let (mx, my) = (mean(&rows), mean(&cols));
    let var = |m: &[f64], mu: f64| m.iter().enumerate().map(|(i, p)| p * (i as f64 - mu).powi(2)).sum::<f64>();
    let (vx, vy) = (var(&rows, mx), var(&cols, my));
    if vx <= 0.0 || vy <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let cov: f64 = t
        .probs()
        .indexed_iter()
        .map(|((x, y), p)| p * (x as f64 - mx) * (y as f64 - my))
        .sum();
    Ok(cov / (vx * vy).sqrt())
}

/// `P(concordant pair) - P(discordant pair)` for two independent draws,
/// summed exactly; ties count for neither.
pub fn kendall_tau(t: &ProbTable) -> f64 {
    let (rows, cols) = t.dim();
    let cum = Cumulative::new(t.probs());
    t.probs()
        .indexed_iter()
        .filter(|(_, &p)| p > 0.0)
        .map(|((x, y), &p)| {
            let concordant = cum.mass(0, x, 0, y) + cum.mass(x + 1, rows, y + 1, cols);
            let discordant = cum.mass(0, x, y + 1, cols) + cum.mass(x + 1, rows, 0, y);
            p * (concordant - discordant)
        })
        .sum()
}

/// `3 (P((X1-X2)(Y1-Y3) > 0) - P(... < 0))` with `(X1, Y1)` joint and
/// `X2`, `Y3` independent draws from the margins.
pub fn spearman_rho(t: &ProbTable) -> f64 {
    let signed_rank = |m: &[f64]| -> Vec<f64> {
        let total: f64 = m.iter().sum();
        let mut below = 0.0;
        m.iter()
            .map(|&p| {
                let above = total - below - p;
                let v = below - above;
                below += p;
                v
            })
            .collect()
    };
    let sx = signed_rank(&t.row_margin());
    let sy = signed_rank(&t.col_margin());
    3.0 * t
        .probs()
        .indexed_iter()
        .map(|((x, y), p)| p * sx[x] * sy[y])
        .sum::<f64>()
}

/// Relative entropy of the table with respect to the product of its margins.
pub fn mutual_information(t: &ProbTable) -> f64 {
    let product = ProbTable::independent(&t.margins()).expect("margins of a valid table are positive");
    kl_divergence(t, &product).expect("same shape")
}

const ORDER_TOL: f64 = 1e-12;

/// Positive quadrant dependence: `F(x, y) >= F_X(x) F_Y(y)` everywhere.
pub fn pqd_check(t: &ProbTable) -> bool {
    let (rows, cols) = t.dim();
    let cum = Cumulative::new(t.probs());
    (0..rows).all(|x| {
        (0..cols).all(|y| {
            let fx = cum.cdf(x, cols - 1);
            let fy = cum.cdf(rows - 1, y);
            cum.cdf(x, y) >= fx * fy - ORDER_TOL
        })
    })
}

/// Positive likelihood ratio dependence: every ordered 2x2 minor
/// `p(x1,y1) p(x2,y2) - p(x2,y1) p(x1,y2)` is nonnegative, one strictly.
pub fn plrd_check(t: &ProbTable) -> bool {
    let (rows, cols) = t.dim();
    let p = t.probs();
    let mut strict = false;
    for x1 in 0..rows {
        for x2 in x1 + 1..rows {
            for y1 in 0..cols {
                for y2 in y1 + 1..cols {
                    let on = p[[x1, y1]] * p[[x2, y2]];
                    let off = p[[x2, y1]] * p[[x1, y2]];
                    let slack = ORDER_TOL * on.max(off);
                    if on - off < -slack {
                        return false;
                    }
                    if on - off > slack {
                        strict = true;
                    }
                }
            }
        }
    }
    strict
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConcordanceOrder {
    Equal,
    /// The first table is less concordant: its cdf lies below everywhere.
    Less,
    Greater,
    Incomparable,
}

/// Pointwise comparison of joint cdfs. The ordering is meant for tables
/// sharing the same margins.
pub fn concordance_order(t1: &ProbTable, t2: &ProbTable) -> Result<ConcordanceOrder> {
    if t1.dim() != t2.dim() {
        return Err(Error::ShapeMismatch {
            expected: t1.dim(),
            found: t2.dim(),
        });
    }
    let (rows, cols) = t1.dim();
    let (c1, c2) = (Cumulative::new(t1.probs()), Cumulative::new(t2.probs()));
    let (mut below, mut above) = (false, false);
    for x in 0..rows {
        for y in 0..cols {
            let d = c1.cdf(x, y) - c2.cdf(x, y);
            below |= d < -ORDER_TOL;
            above |= d > ORDER_TOL;
        }
    }
    Ok(match (below, above) {
        (false, false) => ConcordanceOrder::Equal,
        (true, false) => ConcordanceOrder::Less,
        (false, true) => ConcordanceOrder::Greater,
        (true, true) => ConcordanceOrder::Incomparable,
    })
}

/// Discretized cross: `n` equally spaced values on each axis, half of the
/// mass on the diagonal and half on the anti-diagonal, then the step
/// rescaling with weights `2(1-a)`/`2a` below/above the midpoint on rows and
/// `2(1-b)`/`2b` on columns.
pub fn cross_example_table(n_atoms: usize, a: f64, b: f64) -> Result<ProbTable> {
    if n_atoms < 2 {
        return Err(Error::OutOfRange(format!("n_atoms = {n_atoms}, need at least 2")));
    }
    for (name, v) in [("a", a), ("b", b)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::OutOfRange(format!("{name} = {v}, need 0 < {name} < 1")));
        }
    }
    let mut w = Array2::zeros((n_atoms, n_atoms));
    for i in 0..n_atoms {
        w[[i, i]] += 1.0;
        w[[i, n_atoms - 1 - i]] += 1.0;
    }
    let base = ProbTable::from_weights(w)?;
    let step = |v: f64| -> Vec<f64> {
        (0..n_atoms)
            .map(|i| {
                let centre = (i as f64 + 0.5) / n_atoms as f64;
                if centre <= 0.5 {
                    2.0 * (1.0 - v)
                } else {
                    2.0 * v
                }
            })
            .collect()
    };
    base.group_transform(&step(a), &step(b))
}

/// Kendall's tau of [`cross_example_table`]; tends to `(2a-1)(2b-1)`.
pub fn cross_example_tau(n_atoms: usize, a: f64, b: f64) -> Result<f64> {
    Ok(kendall_tau(&cross_example_table(n_atoms, a, b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dependence::signature_of;
    use ndarray::array;

    fn omega6() -> ProbTable {
        ProbTable::new(array![[0.4, 0.1], [0.2, 0.3]]).unwrap()
    }

    #[test]
    fn regional_dependence_of_named_supports() {
        assert_eq!(regional_dependence(&SupportPattern::full(3, 3).unwrap()), 0.0);
        assert_eq!(regional_dependence(&SupportPattern::parse("x../.xx/.xx").unwrap()), 0.75);
        assert_eq!(regional_dependence(&SupportPattern::parse("x../.x./..x").unwrap()), 1.0);
    }

    #[test]
    fn calibrations() {
        let sig = signature_of(&omega6());
        let yule = quasi_deviation(&sig, Calibration::Yule);
        let expect = (6f64.sqrt() - 1.0) / (6f64.sqrt() + 1.0);
        assert!((yule - expect).abs() < 1e-12);
        assert!((yule - 0.4202).abs() < 1e-4);
        assert_eq!(Calibration::Yule.apply(0.0), 0.0);
        assert_eq!(Calibration::Gauss.apply(0.0), 0.0);
        assert!((Calibration::Gauss.apply(2.0 / 3.0) - 0.5).abs() < 1e-15);
        assert!((Calibration::Gauss.apply(0.6667) - 0.5).abs() < 1e-3);
        assert_eq!("gauss".parse::<Calibration>().unwrap(), Calibration::Gauss);
        assert_eq!(
            "probit".parse::<Calibration>(),
            Err(Error::UnknownCalibration("probit".into()))
        );
    }

    #[test]
    fn overall_examples() {
        let u = ProbTable::from_weights(Array2::ones((3, 2))).unwrap();
        assert_eq!(overall_dependence(&u, Calibration::Yule).overall, 0.0);

        let d = ProbTable::new(array![[0.3, 0.0], [0.0, 0.7]]).unwrap();
        let rep = overall_dependence(&d, Calibration::Yule);
        assert_eq!((rep.regional, rep.overall, rep.dim_gamma), (1.0, 1.0, 0));

        let rep = overall_dependence(&omega6(), Calibration::Yule);
        assert_eq!(rep.regional, 0.0);
        assert!((rep.overall - 0.4202).abs() < 1e-4);
    }

    #[test]
    fn concordance_indices_of_omega6() {
        let t = omega6();
        let rho = pearson_rho(&t).unwrap();
        assert!((rho - 0.1 / (0.25f64 * 0.24).sqrt()).abs() < 1e-12);
        assert!((kendall_tau(&t) - 0.2).abs() < 1e-12);
        let u = ProbTable::from_weights(Array2::ones((2, 2))).unwrap();
        assert!(pearson_rho(&u).unwrap().abs() < 1e-15);
        assert!(kendall_tau(&u).abs() < 1e-15);
        assert!(spearman_rho(&u).abs() < 1e-15);
    }

    #[test]
    fn mutual_information_examples() {
        let d = ProbTable::new(array![[0.5, 0.0], [0.0, 0.5]]).unwrap();
        assert!((mutual_information(&d) - std::f64::consts::LN_2).abs() < 1e-15);
        let u = ProbTable::from_weights(Array2::ones((2, 3))).unwrap();
        assert!(mutual_information(&u).abs() < 1e-15);
    }

    #[test]
    fn quadrant_and_likelihood_ratio_orders() {
        let u = ProbTable::from_weights(Array2::ones((3, 3))).unwrap();
        assert!(pqd_check(&u));
        assert!(!plrd_check(&u));
        assert!(pqd_check(&omega6()));
        assert!(plrd_check(&omega6()));
        assert!(!plrd_check(&omega6().permute(&[1, 0], &[0, 1]).unwrap()));
    }

    #[test]
    fn concordance_ordering() {
        let t = omega6();
        let u = ProbTable::independent(&t.margins()).unwrap();
        assert_eq!(concordance_order(&t, &t).unwrap(), ConcordanceOrder::Equal);
        assert_eq!(concordance_order(&u, &t).unwrap(), ConcordanceOrder::Less);
        assert_eq!(concordance_order(&t, &u).unwrap(), ConcordanceOrder::Greater);
    }

    #[test]
    fn cross_example_parameter_checks() {
        assert!(matches!(cross_example_tau(1, 0.5, 0.5), Err(Error::OutOfRange(_))));
        assert!(matches!(cross_example_tau(10, 1.0, 0.5), Err(Error::OutOfRange(_))));
        let t = cross_example_table(4, 0.9, 0.2).unwrap();
        assert_eq!(t.support().n_cells(), 8);
    }
}
