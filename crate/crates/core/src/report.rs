//! Machine-readable reports. Every report carries the schema tag and
//! serializes deterministically: fixed field order, shortest round-trip
//! floats, non-finite values as `null`.

use ndarray::Array2;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dependence::{compare, is_independent, is_quasi_independent, odds_ratios_local, odds_ratios_pivot, signature};
use crate::error::Result;
use crate::grid::{GridDensity, HaarIndex};
use crate::measures::{
    kendall_tau, mutual_information, overall_dependence, pearson_rho, plrd_check, pqd_check, spearman_rho,
    Calibration, MeasureReport,
};
use crate::projection::{ipf, IpfOptions, IpfReport};
use crate::support::{frechet_feasible, gamma_basis, maximal_zero_rectangles, FeasibilityReport, Verdict, ZeroRectangle};
use crate::table::{MarginPair, ProbTable};

pub const SCHEMA: &str = "depcore/1";

/// `sha256:` followed by the hex digest of the raw input bytes.
pub fn input_digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn rows_of(m: &Array2<f64>) -> Vec<Vec<f64>> {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportSummary {
    pub n_cells: usize,
    pub components: usize,
    /// One string per row, `x` for a support cell and `.` for a structural zero.
    pub pattern: Vec<String>,
    pub rectangles: Vec<ZeroRectangle>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Indicators {
    /// `None` when a margin is degenerate.
    pub pearson_rho: Option<f64>,
    pub spearman_rho: f64,
    pub kendall_tau: f64,
    pub mutual_information: f64,
    pub pqd: bool,
    pub plrd: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddsRatios {
    /// Log odds ratios relative to cell (0, 0).
    pub log_pivot: Vec<Vec<f64>>,
    /// Log odds ratios of adjacent 2x2 blocks.
    pub log_local: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub input_digest: String,
    pub rows: usize,
    pub cols: usize,
    pub support: SupportSummary,
    pub dim_gamma: usize,
    pub delta: Vec<f64>,
    pub norm2: f64,
    pub tol: f64,
    pub quasi_independent: bool,
    pub independent: bool,
    pub measures: MeasureReport,
    pub indicators: Indicators,
    pub odds_ratios: Option<OddsRatios>,
}

pub fn analyze(input: &[u8], t: &ProbTable, calibration: Calibration, tol: f64) -> AnalysisReport {
    let s = t.support();
    let sig = signature(t, &gamma_basis(s)).expect("canonical basis matches its support");
    let pattern = s
        .mask()
        .rows()
        .into_iter()
        .map(|r| r.iter().map(|&b| if b { 'x' } else { '.' }).collect())
        .collect();
    let odds_ratios = match (odds_ratios_pivot(t), odds_ratios_local(t)) {
        (Ok(p), Ok(l)) => Some(OddsRatios {
            log_pivot: rows_of(&p),
            log_local: rows_of(&l),
        }),
        _ => None,
    };
    AnalysisReport {
        schema: SCHEMA,
        input_digest: input_digest(input),
        rows: t.nrows(),
        cols: t.ncols(),
        support: SupportSummary {
            n_cells: s.n_cells(),
            components: s.components(),
            pattern,
            rectangles: maximal_zero_rectangles(s),
        },
        dim_gamma: sig.delta.len(),
        delta: sig.delta.clone(),
        norm2: sig.norm2,
        tol,
        quasi_independent: is_quasi_independent(t, tol),
        independent: is_independent(t, tol),
        measures: overall_dependence(t, calibration),
        indicators: Indicators {
            pearson_rho: pearson_rho(t).ok(),
            spearman_rho: spearman_rho(t),
            kendall_tau: kendall_tau(t),
            mutual_information: mutual_information(t),
            pqd: pqd_check(t),
            plrd: plrd_check(t),
        },
        odds_ratios,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IpfCommandReport {
    pub schema: &'static str,
    pub input_digest: String,
    pub feasibility: FeasibilityReport,
    /// Absent when the target is infeasible.
    pub ipf: Option<IpfReport>,
    /// Whether the fitted table has the same dependence as the start.
    pub dependence_preserved: Option<bool>,
}

impl IpfCommandReport {
    pub fn is_infeasible(&self) -> bool {
        self.feasibility.verdict == Verdict::Infeasible
    }
}

/// Checks feasibility first and fits only when the target is reachable.
pub fn fit_margins(
    input: &[u8],
    start: &ProbTable,
    target: &MarginPair,
    opts: IpfOptions,
    tol: f64,
) -> Result<IpfCommandReport> {
    let feasibility = frechet_feasible(start.support(), target)?;
    let (ipf, dependence_preserved) = if feasibility.verdict == Verdict::Infeasible {
        (None, None)
    } else {
        let rep = ipf(start, target, opts)?;
        let preserved = compare(start, &rep.result)?.same_dependence(tol);
        (Some(rep), Some(preserved))
    };
    Ok(IpfCommandReport {
        schema: SCHEMA,
        input_digest: input_digest(input),
        feasibility,
        ipf,
        dependence_preserved,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub schema: &'static str,
    pub input_digests: [String; 2],
    pub same_dependence: bool,
    pub same_support: bool,
    pub lambda_gap: Option<f64>,
    pub tol: f64,
}

pub fn compare_tables(inputs: [&[u8]; 2], a: &ProbTable, b: &ProbTable, tol: f64) -> Result<CompareReport> {
    let c = compare(a, b)?;
    Ok(CompareReport {
        schema: SCHEMA,
        input_digests: [input_digest(inputs[0]), input_digest(inputs[1])],
        same_dependence: c.same_dependence(tol),
        same_support: c.same_support,
        lambda_gap: c.lambda_gap,
        tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HaarEntry {
    #[serde(flatten)]
    pub index: HaarIndex,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridDeltaReport {
    pub schema: &'static str,
    pub input_digest: String,
    pub level: u32,
    pub norm2: f64,
    pub coefficients: Vec<HaarEntry>,
}

pub fn grid_delta(input: &[u8], g: &GridDensity) -> Result<GridDeltaReport> {
    let h = crate::grid::haar_delta(g)?;
    Ok(GridDeltaReport {
        schema: SCHEMA,
        input_digest: input_digest(input),
        level: g.level(),
        norm2: h.norm2(),
        coefficients: h.iter().map(|(index, value)| HaarEntry { index, value }).collect(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports contain only serializable data");
    s.push('\n');
    s
}
