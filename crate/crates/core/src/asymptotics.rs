//! Rate parameters of the exponential regime, empirical fits of enumerated
//! `p(t)` series, and rank-frequency series I/O.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::enumerate::{count_q, k_of_cycle, WordEnumerator};
use crate::error::{Error, Result};
use crate::graph::{
    paths_touch_at_most_one_cycle, vertex_on_two_cycles, Cycle, CycleCatalog, GraphAnalysis,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleContribution {
    pub states: Vec<usize>,
    pub weight: f64,
    pub k: usize,
    /// `−k / ln weight`.
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateParameters {
    pub nu: f64,
    /// Largest simple-cycle weight.
    pub alpha: f64,
    pub heaviest: Cycle,
    pub cycles: Vec<CycleContribution>,
}

/// `ν` from `1/ν = −Σ k(c) / ln Pr̃(c)` over the cycle catalog, with `k(c)`
/// counted on the nonrepeating word set `words`.
///
/// Fails unless every path of the transient graph meets at most one cycle.
pub fn compute_nu(
    spec: &ChainSpec,
    cycles: &CycleCatalog,
    words: &[Vec<usize>],
) -> Result<RateParameters> {
    let analysis = GraphAnalysis::new(spec);
    let cond = &analysis.condensation;
    let found = if !cond.tags.iter().any(|t| t.has_cycle()) {
        Some("finitary")
    } else if vertex_on_two_cycles(&analysis.transient, cond).is_some() {
        Some("power")
    } else if !paths_touch_at_most_one_cycle(cond) {
        Some("intermediate")
    } else {
        None
    };
    if let Some(found) = found {
        return Err(Error::RegimeMismatch {
            expected: "exponential",
            found: found.into(),
        });
    }
    let heaviest = cycles
        .heaviest()
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("empty cycle catalog".into()))?;
    let table: Vec<CycleContribution> = cycles
        .cycles
        .iter()
        .map(|c| {
            let k = k_of_cycle(words, &c.states);
            CycleContribution {
                states: c.states.clone(),
                weight: c.weight,
                k,
                contribution: -(k as f64) / c.weight.ln(),
            }
        })
        .collect();
    let inverse: f64 = table.iter().map(|c| c.contribution).sum();
    if inverse <= 0.0 {
        return Err(Error::InvalidArgument("no cycle is met by a word".into()));
    }
    Ok(RateParameters {
        nu: 1.0 / inverse,
        alpha: heaviest.weight,
        heaviest,
        cycles: table,
    })
}

/// One point `(t, p(t))` of a rank-frequency series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub rank: u64,
    pub prob: f64,
    pub log_prob: f64,
}

/// The first `top` points of `p(t)` (fewer if the word list is finite).
pub fn rank_series(spec: &ChainSpec, top: usize, expansion_cap: u64) -> Result<Vec<SeriesPoint>> {
    let mut e = WordEnumerator::with_cap(spec, expansion_cap);
    let mut out = Vec::with_capacity(top.min(1 << 24));
    while out.len() < top {
        match e.next_word()? {
            Some(w) => out.push(SeriesPoint {
                rank: w.rank,
                prob: w.word.prob,
                log_prob: w.word.log_prob,
            }),
            None => break,
        }
    }
    Ok(out)
}

/// Build a series from exact values of `ln p(t)`, `t = 1..=len`.
pub fn synthetic_series(len: u64, log_p: impl Fn(f64) -> f64) -> Vec<SeriesPoint> {
    (1..=len)
        .map(|t| {
            let lp = log_p(t as f64);
            SeriesPoint {
                rank: t,
                prob: lp.exp(),
                log_prob: lp,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Power,
    Exponential,
}

/// Which ranks a fit uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowPolicy {
    /// Fraction of the series, counted from the end.
    pub trailing_fraction: f64,
    /// Geometric spacing of sampled ranks.
    pub ratio: f64,
    pub min_points: usize,
    /// Explicit `(t_min, t_max)`, overriding `trailing_fraction`.
    pub window: Option<(u64, u64)>,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy {
            trailing_fraction: 0.5,
            ratio: 1.05,
            min_points: 50,
            window: None,
        }
    }
}

impl WindowPolicy {
    pub fn trailing(fraction: f64) -> Self {
        WindowPolicy {
            trailing_fraction: fraction,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: Model,
    pub slope: f64,
    pub intercept: f64,
    pub window: (u64, u64),
    /// Root-mean-square residual in `ln p`.
    pub residual: f64,
    pub samples: usize,
}

impl FitResult {
    /// `1/β` for a power fit, `ν` for an exponential fit.
    pub fn estimate(&self) -> f64 {
        -self.slope
    }
}

const MIN_SERIES: usize = 100;
const MIN_SAMPLES: usize = 10;

fn geometric_ranks(lo: u64, hi: u64, ratio: f64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = lo as f64;
    while x.round() as u64 <= hi {
        let t = x.round() as u64;
        if out.last() != Some(&t) {
            out.push(t);
        }
        x *= ratio;
    }
    if out.last() != Some(&hi) {
        out.push(hi);
    }
    out
}

/// Indices of the series points used by a fit.
fn sample_indices(
    series: &[SeriesPoint],
    policy: &WindowPolicy,
) -> Result<((u64, u64), Vec<usize>)> {
    let last = series
        .last()
        .ok_or_else(|| Error::DegenerateWindow("empty series".into()))?
        .rank;
    let (lo, hi) = match policy.window {
        Some((lo, hi)) => (lo.max(1), hi.min(last)),
        None => {
            if !(policy.trailing_fraction > 0.0 && policy.trailing_fraction <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "trailing fraction {} not in (0, 1]",
                    policy.trailing_fraction
                )));
            }
            let lo = ((last as f64) * (1.0 - policy.trailing_fraction)).ceil() as u64;
            (lo.max(1), last)
        }
    };
    if lo >= hi {
        return Err(Error::DegenerateWindow(format!(
            "window [{lo}, {hi}] is empty"
        )));
    }
    if !(policy.ratio > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sampling ratio {} must exceed 1",
            policy.ratio
        )));
    }
    let mut ranks = geometric_ranks(lo, hi, policy.ratio);
    if ranks.len() < policy.min_points {
        let ratio = (hi as f64 / lo as f64).powf(1.0 / (policy.min_points.max(2) - 1) as f64);
        ranks = geometric_ranks(lo, hi, ratio);
        if ranks.len() < policy.min_points {
            ranks = (lo..=hi).collect();
        }
    }
    let mut idx: Vec<usize> = ranks
        .iter()
        .map(|&t| series.partition_point(|p| p.rank < t))
        .filter(|&i| i < series.len() && series[i].rank <= hi)
        .collect();
    idx.dedup();
    Ok(((lo, hi), idx))
}

/// Ordinary least squares `y ≈ slope·x + intercept`; returns the RMS residual too.
fn least_squares(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateWindow("abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    Ok((slope, intercept, (ss / n).sqrt()))
}

fn fit(series: &[SeriesPoint], policy: &WindowPolicy, model: Model) -> Result<FitResult> {
    if series.len() < MIN_SERIES {
        return Err(Error::DegenerateWindow(format!(
            "{} points, need at least {MIN_SERIES}",
            series.len()
        )));
    }
    let (window, idx) = sample_indices(series, policy)?;
    if idx.len() < MIN_SAMPLES {
        return Err(Error::DegenerateWindow(format!(
            "{} samples in window, need {MIN_SAMPLES}",
            idx.len()
        )));
    }
    let x: Vec<f64> = idx
        .iter()
        .map(|&i| {
            let t = series[i].rank as f64;
            match model {
                Model::Power => t.ln(),
                Model::Exponential => t,
            }
        })
        .collect();
    let y: Vec<f64> = idx.iter().map(|&i| series[i].log_prob).collect();
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateWindow(
            "non-finite log-probability in window".into(),
        ));
    }
    let (slope, intercept, residual) = least_squares(&x, &y)?;
    Ok(FitResult {
        model,
        slope,
        intercept,
        window,
        residual,
        samples: idx.len(),
    })
}

/// Slope of `ln p` against `ln t`; its negation estimates `1/β`.
pub fn fit_power_exponent(series: &[SeriesPoint], policy: &WindowPolicy) -> Result<FitResult> {
    fit(series, policy, Model::Power)
}

/// Slope of `ln p` against `t`; its negation estimates `ν`.
pub fn fit_exponential_rate(series: &[SeriesPoint], policy: &WindowPolicy) -> Result<FitResult> {
    fit(series, policy, Model::Exponential)
}

/// Both fits side by side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelComparison {
    pub power: FitResult,
    pub exponential: FitResult,
    /// The model with the smaller residual.
    pub preferred: Model,
}

pub fn compare_models(series: &[SeriesPoint], policy: &WindowPolicy) -> Result<ModelComparison> {
    let power = fit_power_exponent(series, policy)?;
    let exponential = fit_exponential_rate(series, policy)?;
    let preferred = if exponential.residual < power.residual {
        Model::Exponential
    } else {
        Model::Power
    };
    Ok(ModelComparison {
        power,
        exponential,
        preferred,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayShape {
    PowerLike,
    Intermediate,
    ExponentialLike,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaTrend {
    pub lambda: f64,
    /// Slope of `ln(t^λ p(t))` against `ln t`.
    pub slope: f64,
    pub decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntermediateDiagnostics {
    pub window: (u64, u64),
    pub lambda_trends: Vec<LambdaTrend>,
    /// Largest `ln(1/p(t))/√t` over the window.
    pub sup_ratio: f64,
    /// Slope of `ln(ln(1/p(t))/√t)` against `ln t`.
    pub ratio_growth: f64,
    pub ratio_bounded: bool,
    pub shape: DecayShape,
}

/// Growth exponent above which `ln(1/p)/√t` counts as unbounded.
pub const RATIO_GROWTH_THRESHOLD: f64 = 0.25;

/// Qualitative checks over the trailing decade `[T/10, T]`: whether `t^λ p(t)`
/// decreases for `λ ∈ {2, 5}`, and whether `ln(1/p(t))/√t` stays bounded.
pub fn intermediate_diagnostics(series: &[SeriesPoint]) -> Result<IntermediateDiagnostics> {
    let policy = WindowPolicy::trailing(0.9);
    if series.len() < MIN_SERIES {
        return Err(Error::DegenerateWindow(format!(
            "{} points, need at least {MIN_SERIES}",
            series.len()
        )));
    }
    let (window, idx) = sample_indices(series, &policy)?;
    let ln_t: Vec<f64> = idx.iter().map(|&i| (series[i].rank as f64).ln()).collect();
    let ln_p: Vec<f64> = idx.iter().map(|&i| series[i].log_prob).collect();

    let lambda_trends = [2.0, 5.0]
        .into_iter()
        .map(|lambda| {
            let y: Vec<f64> = ln_t
                .iter()
                .zip(&ln_p)
                .map(|(lt, lp)| lp + lambda * lt)
                .collect();
            let (slope, _, _) = least_squares(&ln_t, &y)?;
            let decreasing = slope < 0.0 && y.last() < y.first();
            Ok(LambdaTrend {
                lambda,
                slope,
                decreasing,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let ratio: Vec<f64> = ln_t
        .iter()
        .zip(&ln_p)
        .map(|(lt, lp)| -lp / (0.5 * lt).exp())
        .collect();
    if ratio.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::DegenerateWindow("p(t) = 1 inside the window".into()));
    }
    let sup_ratio = ratio.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_ratio: Vec<f64> = ratio.iter().map(|r| r.ln()).collect();
    let (ratio_growth, _, _) = least_squares(&ln_t, &ln_ratio)?;
    let shape = if ratio_growth > RATIO_GROWTH_THRESHOLD {
        DecayShape::ExponentialLike
    } else if ratio_growth < -RATIO_GROWTH_THRESHOLD {
        DecayShape::PowerLike
    } else {
        DecayShape::Intermediate
    };
    Ok(IntermediateDiagnostics {
        window,
        lambda_trends,
        sup_ratio,
        ratio_growth,
        ratio_bounded: ratio_growth <= RATIO_GROWTH_THRESHOLD,
        shape,
    })
}

/// `Q(e^{−νx}) − x` at each `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QOffset {
    pub x: f64,
    pub count: u64,
    pub offset: f64,
}

pub fn q_offsets(spec: &ChainSpec, nu: f64, xs: &[f64]) -> Result<Vec<QOffset>> {
    xs.iter()
        .map(|&x| {
            let count = count_q(spec, (-nu * x).exp())?;
            Ok(QOffset {
                x,
                count,
                offset: count as f64 - x,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesFormat {
    Csv,
    JsonLines,
}

/// Theory curve `c·t^{−1/β}` with `c` matched to the series at `t = T/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOverlay {
    pub beta: f64,
    pub log_c: f64,
}

impl PowerOverlay {
    pub fn fit(series: &[SeriesPoint], beta: f64) -> Result<Self> {
        let last = series
            .last()
            .ok_or_else(|| Error::DegenerateWindow("empty series".into()))?
            .rank;
        let mid = (last / 2).max(1);
        let i = series
            .partition_point(|p| p.rank < mid)
            .min(series.len() - 1);
        let p = series[i];
        Ok(PowerOverlay {
            beta,
            log_c: p.log_prob + (p.rank as f64).ln() / beta,
        })
    }

    pub fn log_value(&self, t: u64) -> f64 {
        self.log_c - (t as f64).ln() / self.beta
    }
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write `t, p, ln t, ln p` rows, optionally with a `theory` column.
pub fn emit_series<W: Write>(
    series: &[SeriesPoint],
    mut out: W,
    format: SeriesFormat,
    overlay: Option<&PowerOverlay>,
) -> Result<()> {
    if format == SeriesFormat::Csv {
        write!(out, "t,p,ln_t,ln_p")?;
        if overlay.is_some() {
            write!(out, ",theory")?;
        }
        writeln!(out)?;
    }
    for pt in series {
        let ln_t = (pt.rank as f64).ln();
        match format {
            SeriesFormat::Csv => {
                write!(
                    out,
                    "{},{},{},{}",
                    pt.rank,
                    sci(pt.prob),
                    sci(ln_t),
                    sci(pt.log_prob)
                )?;
                if let Some(o) = overlay {
                    write!(out, ",{}", sci(o.log_value(pt.rank).exp()))?;
                }
                writeln!(out)?;
            }
            SeriesFormat::JsonLines => {
                let mut row = serde_json::json!({
                    "t": pt.rank,
                    "p": pt.prob,
                    "ln_t": ln_t,
                    "ln_p": pt.log_prob,
                });
                if let Some(o) = overlay {
                    row["theory"] = serde_json::json!(o.log_value(pt.rank).exp());
                }
                writeln!(out, "{row}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Read a CSV series written by [`emit_series`].
pub fn read_series<R: BufRead>(input: R) -> Result<Vec<SeriesPoint>> {
    let mut lines = input.lines();
    let header = match lines.next() {
        Some(h) => h?,
        None => return Ok(Vec::new()),
    };
    let cols: Vec<&str> = header.trim().split(',').collect();
    let find = |name: &str| {
        cols.iter()
            .position(|c| c.trim() == name)
            .ok_or_else(|| Error::Parse(format!("missing column `{name}`")))
    };
    let (ct, cp, clp) = (find("t")?, find("p")?, find("ln_p")?);
    let mut out = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let get = |c: usize| {
            fields
                .get(c)
                .map(|s| s.trim())
                .ok_or_else(|| Error::Parse(format!("line {}: too few fields", k + 2)))
        };
        let bad = |e: &dyn std::fmt::Display| Error::Parse(format!("line {}: {e}", k + 2));
        let rank: u64 = get(ct)?.parse().map_err(|e| bad(&e))?;
        let prob: f64 = get(cp)?.parse().map_err(|e| bad(&e))?;
        let log_prob: f64 = get(clp)?.parse().map_err(|e| bad(&e))?;
        if out.last().is_some_and(|p: &SeriesPoint| p.rank >= rank) {
            return Err(Error::Parse(format!("line {}: ranks must increase", k + 2)));
        }
        out.push(SeriesPoint {
            rank,
            prob,
            log_prob,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::words_with_nonrepeating_states;
    use crate::figures;
    use crate::graph::{simple_cycles, DEFAULT_CYCLE_CAP};

    fn rates(spec: &ChainSpec) -> Result<RateParameters> {
        let g = GraphAnalysis::new(spec);
        let cycles = simple_cycles(&g.transient, DEFAULT_CYCLE_CAP).unwrap();
        let words = words_with_nonrepeating_states(spec, 1000).unwrap();
        compute_nu(spec, &cycles, &words)
    }

    #[test]
    fn nu_closed_forms() {
        let half_ln2 = 2f64.ln() / 2.0;
        let d = rates(&figures::parallel_loops()).unwrap();
        assert!((d.nu - half_ln2).abs() < 1e-15);
        assert_eq!(d.cycles.iter().map(|c| c.k).collect::<Vec<_>>(), vec![1, 1]);
        assert_eq!(d.alpha, 0.5);

        let e = rates(&figures::two_cycle()).unwrap();
        assert!((e.nu - half_ln2).abs() < 1e-15);
        assert_eq!(e.cycles[0].k, 4);
        assert_eq!(e.alpha, 0.25);

        let e10 = rates(&figures::two_cycle().with_initial(vec![1.0, 0.0]).unwrap()).unwrap();
        assert!((e10.nu - 2f64.ln()).abs() < 1e-15);
        assert_eq!(e10.cycles[0].k, 2);
    }

    #[test]
    fn nu_rejects_other_regimes() {
        for (spec, found) in [
            (figures::acyclic(), "finitary"),
            (figures::shared_vertex(), "power"),
            (figures::loops_in_series(), "intermediate"),
        ] {
            match rates(&spec) {
                Err(Error::RegimeMismatch { found: f, .. }) => assert_eq!(f, found),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn exact_laws_are_recovered() {
        let power = synthetic_series(10_000, |t| -2.0 * t.ln());
        let f = fit_power_exponent(&power, &WindowPolicy::default()).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-9);
        assert!(f.samples >= 50);
        assert_eq!(f.window, (5000, 10_000));

        let exp = synthetic_series(10_000, |t| -0.5 * t);
        let f = fit_exponential_rate(&exp, &WindowPolicy::default()).unwrap();
        assert!((f.estimate() - 0.5).abs() < 1e-9);
        assert_eq!(
            compare_models(&exp, &WindowPolicy::default())
                .unwrap()
                .preferred,
            Model::Exponential
        );
        assert_eq!(
            compare_models(&power, &WindowPolicy::default())
                .unwrap()
                .preferred,
            Model::Power
        );
    }

    #[test]
    fn short_series_is_rejected() {
        let s = synthetic_series(99, |t| -t);
        assert!(matches!(
            fit_power_exponent(&s, &WindowPolicy::default()),
            Err(Error::DegenerateWindow(_))
        ));
        let s = synthetic_series(200, |t| -t);
        let policy = WindowPolicy {
            window: Some((150, 150)),
            ..WindowPolicy::default()
        };
        assert!(fit_exponential_rate(&s, &policy).is_err());
    }

    #[test]
    fn explicit_window() {
        let s = synthetic_series(1000, |t| -3.0 * t.ln());
        let policy = WindowPolicy {
            window: Some((100, 400)),
            ..WindowPolicy::default()
        };
        let f = fit_power_exponent(&s, &policy).unwrap();
        assert_eq!(f.window, (100, 400));
        assert!((f.slope + 3.0).abs() < 1e-9);
    }

    #[test]
    fn diagnostics_shapes() {
        let power = intermediate_diagnostics(&synthetic_series(10_000, |t| -3.0 * t.ln())).unwrap();
        assert_eq!(power.shape, DecayShape::PowerLike);
        assert!(power.lambda_trends[0].decreasing);
        assert!(!power.lambda_trends[1].decreasing);

        let exp = intermediate_diagnostics(&synthetic_series(10_000, |t| -t)).unwrap();
        assert_eq!(exp.shape, DecayShape::ExponentialLike);
        assert!(!exp.ratio_bounded);

        let mid = intermediate_diagnostics(&synthetic_series(10_000, |t| -t.sqrt())).unwrap();
        assert_eq!(mid.shape, DecayShape::Intermediate);
        assert!(mid.ratio_bounded);
        assert!(mid.lambda_trends.iter().all(|l| l.decreasing));
    }

    #[test]
    fn csv_round_trip() {
        let s = vec![
            SeriesPoint {
                rank: 1,
                prob: 0.3,
                log_prob: 0.3f64.ln(),
            },
            SeriesPoint {
                rank: 2,
                prob: 1.0 / 7.0,
                log_prob: (1.0f64 / 7.0).ln(),
            },
            SeriesPoint {
                rank: 5,
                prob: 0.0,
                log_prob: -8000.123456789,
            },
        ];
        let mut buf = Vec::new();
        emit_series(&s, &mut buf, SeriesFormat::Csv, None).unwrap();
        assert_eq!(read_series(buf.as_slice()).unwrap(), s);

        let mut empty = Vec::new();
        emit_series(&[], &mut empty, SeriesFormat::Csv, None).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap(), "t,p,ln_t,ln_p\n");
    }

    #[test]
    fn overlay_matches_at_midpoint() {
        let s = synthetic_series(200, |t| (3.0f64).ln() - 2.0 * t.ln());
        let o = PowerOverlay::fit(&s, 0.5).unwrap();
        assert!((o.log_c - 3f64.ln()).abs() < 1e-12);
        let mut buf = Vec::new();
        emit_series(&s[..2], &mut buf, SeriesFormat::Csv, Some(&o)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,p,ln_t,ln_p,theory\n1,"));
    }

    #[test]
    fn q_offsets_parallel_loops() {
        let nu = 2f64.ln() / 2.0;
        for q in q_offsets(&figures::parallel_loops(), nu, &[5.0, 10.0, 20.0]).unwrap() {
            assert!(q.offset.abs() <= 10.0, "{q:?}");
        }
    }
}
