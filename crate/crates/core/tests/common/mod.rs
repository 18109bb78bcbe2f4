//! Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use depcore::{ProbTable, SupportPattern};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A pattern with no empty row or column; each cell is kept with
/// probability `density`.
pub fn random_pattern(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> SupportPattern {
    loop {
        let mask = Array2::from_shape_fn((rows, cols), |_| rng.random_bool(density));
        if let Ok(s) = SupportPattern::new(mask) {
            return s;
        }
    }
}

/// Weights drawn log-uniformly over two decades.
pub fn random_weight(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.random_range(-1.0..1.0))
}

pub fn random_table_on(rng: &mut ChaCha8Rng, s: &SupportPattern) -> ProbTable {
    let w = Array2::from_shape_fn(s.dim(), |(r, c)| if s.contains(r, c) { random_weight(rng) } else { 0.0 });
    ProbTable::from_weights(w).unwrap()
}

pub fn random_full_table(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ProbTable {
    random_table_on(rng, &SupportPattern::full(rows, cols).unwrap())
}

pub fn random_scaling(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| random_weight(rng)).collect()
}

pub fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Double-centred log table: the zero-margin projection for full support.
pub fn double_centred_log(t: &ProbTable) -> Array2<f64> {
    let l = t.probs().mapv(f64::ln);
    let (r, c) = l.dim();
    let rm: Vec<f64> = l.rows().into_iter().map(|x| x.sum() / c as f64).collect();
    let cm: Vec<f64> = l.columns().into_iter().map(|x| x.sum() / r as f64).collect();
    let g = rm.iter().sum::<f64>() / r as f64;
    Array2::from_shape_fn((r, c), |(i, j)| l[[i, j]] - rm[i] - cm[j] + g)
}

/// Three-way sign; `f64::signum` maps 0 to 1, which would count ties.
pub fn sign(a: usize, b: usize) -> f64 {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => -1.0,
        std::cmp::Ordering::Equal => 0.0,
        std::cmp::Ordering::Greater => 1.0,
    }
}

/// Kendall's tau straight from its definition, O((RS)^2).
pub fn brute_kendall_tau(t: &ProbTable) -> f64 {
    let p = t.probs();
    let cells: Vec<((usize, usize), f64)> = p.indexed_iter().map(|(k, &v)| (k, v)).filter(|(_, v)| *v > 0.0).collect();
    let mut tau = 0.0;
    for &((x1, y1), p1) in &cells {
        for &((x2, y2), p2) in &cells {
            let s = sign(x1, x2) * sign(y1, y2);
            tau += s * p1 * p2;
        }
    }
    tau
}

/// Spearman's rho from its definition with three draws: `(X1, Y1)` from
/// the table, `X2` and `Y3` independently from the margins.
pub fn brute_spearman_rho(t: &ProbTable) -> f64 {
    let p = t.probs();
    let (rm, cm) = (t.row_margin(), t.col_margin());
    let mut acc = 0.0;
    for ((x1, y1), &p1) in p.indexed_iter() {
        for (x2, &r) in rm.iter().enumerate() {
            for (y3, &c) in cm.iter().enumerate() {
                acc += p1 * r * c * sign(x1, x2) * sign(y1, y3);
            }
        }
    }
    3.0 * acc
}

/// Integer max flow (Edmonds-Karp) on a dense capacity matrix.
pub fn max_flow(cap: &mut [Vec<i64>], s: usize, t: usize) -> i64 {
    let n = cap.len();
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut push = i64::MAX;
        let mut v = t;
        while v != s {
            push = push.min(cap[prev[v]][v]);
            v = prev[v];
        }
        let mut v = t;
        while v != s {
            cap[prev[v]][v] -= push;
            cap[v][prev[v]] += push;
            v = prev[v];
        }
        flow += push;
    }
}

/// Can integer margins `rows`/`cols` (same total) be carried by a table
/// supported inside `s`, optionally with at least one unit on `forced`?
pub fn transport_feasible(s: &SupportPattern, rows: &[i64], cols: &[i64], forced: Option<(usize, usize)>) -> bool {
    let (r, c) = s.dim();
    let mut rows = rows.to_vec();
    let mut cols = cols.to_vec();
    let total: i64 = rows.iter().sum();
    let mut need = total;
    if let Some((i, j)) = forced {
        if rows[i] < 1 || cols[j] < 1 {
            return false;
        }
        rows[i] -= 1;
        cols[j] -= 1;
        need -= 1;
    }
    let n = r + c + 2;
    let (src, sink) = (r + c, r + c + 1);
    let mut cap = vec![vec![0i64; n]; n];
    for i in 0..r {
        cap[src][i] = rows[i];
        for j in 0..c {
            if s.contains(i, j) {
                cap[i][r + j] = total;
            }
        }
    }
    for j in 0..c {
        cap[r + j][sink] = cols[j];
    }
    max_flow(&mut cap, src, sink) == need
}

/// All maximal zero rectangles by exhaustive subset search.
pub fn brute_rectangles(s: &SupportPattern) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (r, c) = s.dim();
    let members = |mask: u32, n: usize| -> Vec<usize> { (0..n).filter(|k| mask >> k & 1 == 1).collect() };
    let zero = |a: u32, b: u32| {
        (0..r).all(|i| a >> i & 1 == 0 || (0..c).all(|j| b >> j & 1 == 0 || !s.contains(i, j)))
    };
    let mut out = Vec::new();
    for a in 1u32..(1 << r) {
        for b in 1u32..(1 << c) {
            if !zero(a, b) {
                continue;
            }
            let grow_row = (0..r).any(|i| a >> i & 1 == 0 && zero(a | 1 << i, b));
            let grow_col = (0..c).any(|j| b >> j & 1 == 0 && zero(a, b | 1 << j));
            if !grow_row && !grow_col {
                out.push((members(a, r), members(b, c)));
            }
        }
    }
    out.sort();
    out
}
