//! Error norms, convergence orders and artifact metrics.

use crate::error::{Error, Result};
use crate::exact::ExactSolution;
use crate::solver::RunRecord;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// `sqrt(Σ e²·Δx)` over interior nodes.
    pub l2: f64,
    /// Plain vector 2-norm over interior nodes.
    pub l2_unweighted: f64,
    pub linf: f64,
    /// Grid intervals.
    pub n: usize,
    pub dx: f64,
}

/// Norms of `numeric − exact` over the interior nodes (end nodes excluded).
pub fn error_norms(numeric: &[f64], exact: &[f64], dx: f64) -> Result<ErrorReport> {
    if numeric.len() != exact.len() {
        return Err(Error::LengthMismatch(numeric.len(), exact.len()));
    }
    if numeric.len() < 3 {
        return Err(Error::TooFewPoints(numeric.len()));
    }
    let last = numeric.len() - 1;
    let mut sq = 0.0;
    let mut linf: f64 = 0.0;
    for j in 1..last {
        let e = numeric[j] - exact[j];
        sq += e * e;
        linf = linf.max(e.abs());
    }
    Ok(ErrorReport {
        l2: (sq * dx).sqrt(),
        l2_unweighted: sq.sqrt(),
        linf,
        n: last,
        dx,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L2,
    L2Unweighted,
    Linf,
}

impl Norm {
    pub fn of(self, r: &ErrorReport) -> f64 {
        match self {
            Norm::L2 => r.l2,
            Norm::L2Unweighted => r.l2_unweighted,
            Norm::Linf => r.linf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderFit {
    pub order: f64,
    /// False when the error does not decrease at every refinement, in which
    /// case the slope says little about asymptotic behaviour.
    pub monotone: bool,
}

/// Least-squares slope of `log(err)` against `log(dx)`.
pub fn fit_order(dx: &[f64], err: &[f64]) -> Result<f64> {
    if dx.len() != err.len() {
        return Err(Error::LengthMismatch(dx.len(), err.len()));
    }
    if dx.len() < 2 {
        return Err(Error::TooFewPoints(dx.len()));
    }
    if dx.iter().chain(err).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::invalid("order fit needs positive finite values"));
    }
    let xs: Vec<f64> = dx.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("order fit needs distinct grid spacings"));
    }
    Ok(sxy / sxx)
}

pub fn convergence_order(reports: &[ErrorReport], norm: Norm) -> Result<OrderFit> {
    let mut sorted = reports.to_vec();
    sorted.sort_by(|a, b| b.dx.total_cmp(&a.dx));
    let dx: Vec<f64> = sorted.iter().map(|r| r.dx).collect();
    let err: Vec<f64> = sorted.iter().map(|r| norm.of(r)).collect();
    let order = fit_order(&dx, &err)?;
    let monotone = err.windows(2).all(|w| w[1] < w[0]);
    Ok(OrderFit { order, monotone })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationReport {
    /// Steps where the series decreases by more than the tolerance.
    pub n_drops: usize,
    pub max_drop: f64,
    /// Crossings of `p*` beyond the first.
    pub n_threshold_crossings: usize,
    pub monotone: bool,
}

pub fn oscillation_metrics(series: &[f64], p_star: f64, tol: f64) -> OscillationReport {
    let mut n_drops = 0;
    let mut max_drop: f64 = 0.0;
    for w in series.windows(2) {
        let drop = w[0] - w[1];
        if drop > tol {
            n_drops += 1;
        }
        max_drop = max_drop.max(drop);
    }
    let crossings = series
        .windows(2)
        .filter(|w| (w[0] >= p_star) != (w[1] >= p_star))
        .count();
    OscillationReport {
        n_drops,
        max_drop,
        n_threshold_crossings: crossings.saturating_sub(1),
        monotone: n_drops == 0,
    }
}

/// Number of local maxima, ignoring excursions smaller than `tol`.
pub fn count_local_maxima(series: &[f64], tol: f64) -> usize {
    let Some(&first) = series.first() else {
        return 0;
    };
    let mut rising = true;
    let mut extreme = first;
    let mut count = 0;
    for &v in &series[1..] {
        if rising {
            if v > extreme {
                extreme = v;
            } else if v < extreme - tol {
                count += 1;
                rising = false;
                extreme = v;
            }
        } else if v < extreme {
            extreme = v;
        } else if v > extreme + tol {
            rising = true;
            extreme = v;
        }
    }
    count
}

/// True when every step either keeps the value or raises it by more than
/// `tol`, i.e. the series is a non-decreasing staircase.
pub fn is_nondecreasing_staircase(series: &[f64], tol: f64) -> bool {
    series.windows(2).all(|w| w[1] == w[0] || w[1] > w[0] + tol)
}

/// Distance the interpolated `p*` level moved over the run.
pub fn locking_metric(run: &RunRecord) -> f64 {
    match (run.fronts.first(), run.fronts.last()) {
        (Some(a), Some(b)) => (b.crossing - a.crossing).abs(),
        _ => 0.0,
    }
}

/// `|ξ(t) − x*(t)|/Δx` at every recorded time.
pub fn shock_position_error(run: &RunRecord, oracle: &ExactSolution, dx: f64) -> Vec<(f64, f64)> {
    run.fronts
        .iter()
        .map(|f| (f.t, (f.xi - oracle.shock_position(f.t)).abs() / dx))
        .collect()
}

/// Wiggle of a probe behind the front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WiggleReport {
    /// Local maxima of `p − p_exact` at the probe.
    pub maxima: usize,
    /// Coarse cells the front crossed while the wiggle was observed.
    pub cells_crossed: f64,
    /// Half the peak-to-peak range of `p − p_exact`.
    pub amplitude: f64,
}

impl WiggleReport {
    pub fn maxima_per_cell(&self) -> f64 {
        self.maxima as f64 / self.cells_crossed
    }
}

/// Residual wiggle at probe `k` while the interpolated front moves from one
/// coarse cell past the probe to `1 + cells` cells past it (or to the end of
/// the run). Starting a cell late keeps the arrival of the front out of the
/// measurement; stopping early keeps far-field damping out of the count.
pub fn probe_wiggle(
    run: &RunRecord,
    k: usize,
    oracle: &ExactSolution,
    cells: f64,
    tol: f64,
) -> Result<WiggleReport> {
    let probe = run
        .probes
        .get(k)
        .ok_or_else(|| Error::invalid(format!("no probe {k}")))?;
    let start_x = probe.x + run.dx;
    let stop_x = start_x + cells * run.dx;
    let start = run
        .fronts
        .iter()
        .position(|f| f.crossing >= start_x)
        .ok_or_else(|| Error::invalid("front never passed the probe by a full cell"))?;
    let stop = run.fronts[start..]
        .iter()
        .position(|f| f.crossing >= stop_x)
        .map_or(run.fronts.len(), |m| start + m + 1);
    let residual: Vec<f64> = probe.samples[start..stop]
        .iter()
        .map(|&(t, p)| p - oracle.value(probe.x, t))
        .collect();
    if residual.len() < 2 {
        return Err(Error::TooFewPoints(residual.len()));
    }
    let lo = residual.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = residual.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(WiggleReport {
        maxima: count_local_maxima(&residual, tol),
        cells_crossed: (run.fronts[stop - 1].crossing - run.fronts[start].crossing) / run.dx,
        amplitude: 0.5 * (hi - lo),
    })
}

/// Error of the final state of a run against the oracle.
pub fn final_error(run: &RunRecord, oracle: &ExactSolution, nodes: &[f64]) -> Result<ErrorReport> {
    let exact = oracle.sample(nodes, run.final_state.t);
    error_norms(&run.final_state.p, &exact, run.dx)
}
