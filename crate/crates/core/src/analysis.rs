//! Statistical comparison of tuner runs: effect sizes, rank tests, mean
//! clustering, speedup curves, and budget calibration.
//!
//! Every test works on oriented targets (smaller is better). Rank tests use
//! the normal approximation with midranks, tie-corrected variance, and a
//! continuity correction of one half; comparisons are two-sided.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::io::{self, Write};

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};
use thiserror::Error;

use crate::search::RunTrace;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("sample group `{label}` is empty")]
    EmptyGroup { label: String },
    #[error("sample values must be finite")]
    NonFiniteSample,
    #[error("need at least {need} samples per group, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("paired test needs equal sample counts, got {a} and {b}")]
    PairedLengthMismatch { a: usize, b: usize },
    #[error("no sample groups given")]
    NoGroups,
    #[error("budget grid is empty")]
    EmptyGrid,
    #[error("budget grid point {budget} has no trace families")]
    EmptyFamily { budget: usize },
    #[error("every trace family needs at least one non-empty trace")]
    EmptyTraces,
    #[error("no full-scale (proportion 1.0) sweep present")]
    MissingFullScale,
    #[error("sweep proportion must lie in (0, 1], got {value}")]
    InvalidProportion { value: f64 },
}

/// A labeled set of repeated measurements (one value per run).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGroup {
    pub label: String,
    values: Vec<f64>,
}

impl SampleGroup {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self, AnalysisError> {
        let label = label.into();
        if values.is_empty() {
            return Err(AnalysisError::EmptyGroup { label });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(AnalysisError::NonFiniteSample);
        }
        Ok(Self { label, values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Standard error of the mean (sample standard deviation over sqrt n);
    /// zero for a single observation.
    pub fn stderr(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.mean();
        let var = self
            .values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / (n - 1) as f64;
        (var / n as f64).sqrt()
    }
}

fn check_samples(values: &[f64]) -> Result<(), AnalysisError> {
    if values.is_empty() {
        return Err(AnalysisError::TooFewSamples { need: 1, got: 0 });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(AnalysisError::NonFiniteSample);
    }
    Ok(())
}

/// Vargha-Delaney effect size for smaller-is-better data: the probability
/// that a value drawn from `a` beats one drawn from `b`, counting ties half.
/// 0.5 means no effect; 1.0 means `a` always wins.
pub fn a12(a: &[f64], b: &[f64]) -> Result<f64, AnalysisError> {
    check_samples(a)?;
    check_samples(b)?;
    let mut better = 0usize;
    let mut ties = 0usize;
    for &x in a {
        for &y in b {
            if x < y {
                better += 1;
            } else if x == y {
                ties += 1;
            }
        }
    }
    Ok((better as f64 + 0.5 * ties as f64) / (a.len() * b.len()) as f64)
}

/// Midranks for `sorted` values (ascending). Returns the rank per position
/// and the tie term `sum(t^3 - t)` over runs of equal values.
fn midranks(sorted: &[f64]) -> (Vec<f64>, f64) {
    let n = sorted.len();
    let mut ranks = vec![0.0; n];
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let rank = (i + j + 2) as f64 / 2.0;
        for r in ranks.iter_mut().take(j + 1).skip(i) {
            *r = rank;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    (ranks, tie_term)
}

fn two_sided_normal_p(offset: f64, variance: f64) -> f64 {
    if variance <= 0.0 {
        return 1.0;
    }
    let z = (offset.abs() - 0.5).max(0.0) / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * (1.0 - normal.cdf(z))).clamp(0.0, 1.0)
}

/// Two-sided Wilcoxon rank-sum test (independent groups) via the normal
/// approximation with midranks, tie-corrected variance, and continuity
/// correction. Degenerate variance (all values tied) yields p = 1.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<f64, AnalysisError> {
    for group in [a, b] {
        check_samples(group)?;
        if group.len() < 2 {
            return Err(AnalysisError::TooFewSamples {
                need: 2,
                got: group.len(),
            });
        }
    }
    let n1 = a.len();
    let n2 = b.len();
    let n = n1 + n2;
    let mut pooled: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    pooled.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite samples"));
    let values: Vec<f64> = pooled.iter().map(|p| p.0).collect();
    let (ranks, tie_term) = midranks(&values);
    let w: f64 = pooled
        .iter()
        .zip(&ranks)
        .filter(|((_, is_a), _)| *is_a)
        .map(|(_, &r)| r)
        .sum();
    let nf = n as f64;
    let expected = n1 as f64 * (nf + 1.0) / 2.0;
    let variance =
        (n1 * n2) as f64 / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
    Ok(two_sided_normal_p(w - expected, variance))
}

/// Two-sided Wilcoxon signed-rank test (paired samples) via the normal
/// approximation. Zero differences are dropped; if none remain, p = 1.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<f64, AnalysisError> {
    check_samples(a)?;
    check_samples(b)?;
    if a.len() != b.len() {
        return Err(AnalysisError::PairedLengthMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(AnalysisError::TooFewSamples { need: 2, got: a.len() });
    }
    let mut diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.is_empty() {
        return Ok(1.0);
    }
    diffs.sort_by(|x, y| x.abs().partial_cmp(&y.abs()).expect("finite samples"));
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (ranks, tie_term) = midranks(&magnitudes);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, &r)| r)
        .sum();
    let n = diffs.len() as f64;
    let expected = n * (n + 1.0) / 4.0;
    let variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    Ok(two_sided_normal_p(w_plus - expected, variance))
}

/// Cluster sample groups by mean: groups whose means are statistically
/// indistinguishable land in one cluster. Returns clusters of input indices,
/// best (lowest) mean first; within a cluster, indices are ordered by
/// (mean, input position). Splitting maximizes the between-cluster sum of
/// squares and must clear a chi-squared threshold at the five percent level.
pub fn scott_knott(groups: &[SampleGroup]) -> Result<Vec<Vec<usize>>, AnalysisError> {
    if groups.is_empty() {
        return Err(AnalysisError::NoGroups);
    }
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&x, &y| {
        groups[x]
            .mean()
            .partial_cmp(&groups[y].mean())
            .expect("finite samples")
            .then(x.cmp(&y))
    });
    let mut clusters = Vec::new();
    partition_segment(groups, &order, &mut clusters);
    Ok(clusters)
}

fn partition_segment(groups: &[SampleGroup], segment: &[usize], out: &mut Vec<Vec<usize>>) {
    match split_point(groups, segment) {
        Some(cut) => {
            partition_segment(groups, &segment[..cut], out);
            partition_segment(groups, &segment[cut..], out);
        }
        None => out.push(segment.to_vec()),
    }
}

/// Likelihood-ratio style split test on a segment of groups sorted by mean.
/// Returns the cut position when the maximal between-cluster sum of squares
/// is significant against the segment's dispersion estimate.
fn split_point(groups: &[SampleGroup], segment: &[usize]) -> Option<usize> {
    let k = segment.len();
    if k < 2 {
        return None;
    }
    let kf = k as f64;
    let means: Vec<f64> = segment.iter().map(|&i| groups[i].mean()).collect();
    let total: f64 = means.iter().sum();

    let mut best_cut = 0usize;
    let mut best_b0 = f64::NEG_INFINITY;
    let mut prefix = 0.0;
    for cut in 1..k {
        prefix += means[cut - 1];
        let rest = total - prefix;
        let b0 = prefix * prefix / cut as f64 + rest * rest / (kf - cut as f64)
            - total * total / kf;
        if b0 > best_b0 {
            best_b0 = b0;
            best_cut = cut;
        }
    }
    if best_b0 <= 0.0 {
        return None;
    }

    let n_total: usize = segment.iter().map(|&i| groups[i].len()).sum();
    let v = (n_total - k) as f64;
    let grand = total / kf;
    let between: f64 = means.iter().map(|m| (m - grand) * (m - grand)).sum();
    let within: f64 = segment
        .iter()
        .map(|&i| {
            let g = &groups[i];
            let m = g.mean();
            g.values().iter().map(|x| (x - m) * (x - m)).sum::<f64>()
        })
        .sum();
    let mse = if v > 0.0 { within / v } else { 0.0 };
    let replication = n_total as f64 / kf;
    let s2y = mse / replication;
    let sigma0 = (between + v * s2y) / (kf + v);
    if sigma0 <= 0.0 {
        return None;
    }

    let lambda = PI / (2.0 * (PI - 2.0)) * best_b0 / sigma0;
    let dof = kf / (PI - 2.0);
    let threshold = ChiSquared::new(dof)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.95);
    (lambda > threshold).then_some(best_cut)
}

/// How to break exact mean ties inside the winning cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeanTieRule {
    /// Keep the group listed first in the input.
    #[default]
    FirstListed,
    /// Keep the lexicographically smallest label.
    LowestLabel,
}

/// Index of the best group: lowest mean inside the best cluster, mean ties
/// broken by `tie_rule`.
pub fn select_best(groups: &[SampleGroup], tie_rule: MeanTieRule) -> Result<usize, AnalysisError> {
    let clusters = scott_knott(groups)?;
    let top = &clusters[0];
    let best_mean = top
        .iter()
        .map(|&i| groups[i].mean())
        .fold(f64::INFINITY, f64::min);
    let tied: Vec<usize> = top
        .iter()
        .copied()
        .filter(|&i| groups[i].mean() == best_mean)
        .collect();
    Ok(match tie_rule {
        MeanTieRule::FirstListed => *tied.iter().min().expect("cluster is non-empty"),
        MeanTieRule::LowestLabel => *tied
            .iter()
            .min_by(|&&x, &&y| groups[x].label.cmp(&groups[y].label).then(x.cmp(&y)))
            .expect("cluster is non-empty"),
    })
}

/// Budget ratio at which `candidate` reaches the baseline's terminal mean
/// best target. `NotReached` when the candidate never gets there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Speedup {
    Ratio(f64),
    NotReached,
}

fn mean_best_at(family: &[RunTrace], measurements: usize) -> f64 {
    family
        .iter()
        .map(|t| t.best_at(measurements).expect("validated non-empty").best_target)
        .sum::<f64>()
        / family.len() as f64
}

fn check_family(family: &[RunTrace]) -> Result<usize, AnalysisError> {
    if family.is_empty() || family.iter().any(|t| t.points().is_empty()) {
        return Err(AnalysisError::EmptyTraces);
    }
    Ok(family
        .iter()
        .map(|t| t.distinct_measurements())
        .max()
        .expect("non-empty family"))
}

/// Compare budget use: let `T` be the baseline family's mean best target at
/// its terminal budget, `b` the smallest budget where the baseline's mean
/// reaches `T`, and `m` the smallest budget where the candidate's mean does.
/// The speedup is `b / m`.
pub fn speedup(baseline: &[RunTrace], candidate: &[RunTrace]) -> Result<Speedup, AnalysisError> {
    let b_axis = check_family(baseline)?;
    let c_axis = check_family(candidate)?;
    let target = mean_best_at(baseline, b_axis);
    let b = (1..=b_axis)
        .find(|&m| mean_best_at(baseline, m) <= target)
        .expect("terminal budget reaches its own mean");
    let Some(m) = (1..=c_axis).find(|&m| mean_best_at(candidate, m) <= target) else {
        return Ok(Speedup::NotReached);
    };
    Ok(Speedup::Ratio(b as f64 / m as f64))
}

/// Fraction of the trailing ten percent of `budget` in which the best-known
/// configuration still changed. The window is `ceil(budget / 10)`; a change
/// at measurement `m` means the best configuration after `m` differs from
/// the one after `m - 1`.
pub fn best_change_fraction(trace: &RunTrace, budget: usize) -> f64 {
    if budget == 0 || trace.points().is_empty() {
        return 0.0;
    }
    let window = budget.div_ceil(10);
    let lo = budget - window + 1;
    let changes = (lo..=budget)
        .filter(|&m| {
            m >= 2 && {
                let now = &trace.best_at(m).expect("non-empty").best_config;
                let before = &trace.best_at(m - 1).expect("non-empty").best_config;
                now != before
            }
        })
        .count();
    changes as f64 / window as f64
}

/// Trace families (one per tuner) collected at one budget level.
#[derive(Debug, Clone)]
pub struct CalibrationPoint {
    pub budget: usize,
    pub families: Vec<Vec<RunTrace>>,
}

/// Smallest budget on the grid at which every family's mean best-change
/// fraction over the trailing ten percent drops below ten percent. Falls
/// back to the largest grid budget when none converges.
pub fn calibrate_budget(points: &[CalibrationPoint]) -> Result<usize, AnalysisError> {
    if points.is_empty() {
        return Err(AnalysisError::EmptyGrid);
    }
    let mut order: Vec<&CalibrationPoint> = points.iter().collect();
    order.sort_by_key(|p| p.budget);
    for point in &order {
        if point.families.is_empty() {
            return Err(AnalysisError::EmptyFamily {
                budget: point.budget,
            });
        }
        for family in &point.families {
            check_family(family)?;
        }
    }
    for point in &order {
        let converged = point.families.iter().all(|family| {
            let mean = family
                .iter()
                .map(|t| best_change_fraction(t, point.budget))
                .sum::<f64>()
                / family.len() as f64;
            mean < 0.1
        });
        if converged {
            return Ok(point.budget);
        }
    }
    Ok(order.last().expect("non-empty grid").budget)
}

/// Tuning outcomes of one weight setting at one budget proportion.
#[derive(Debug, Clone)]
pub struct ProportionSweep {
    pub proportion: f64,
    pub groups: Vec<SampleGroup>,
}

/// Smallest budget proportion at which the winning group already matches the
/// full-budget winner (matched by label). Requires a proportion-1.0 sweep.
pub fn min_weight_budget_proportion(
    sweeps: &[ProportionSweep],
    tie_rule: MeanTieRule,
) -> Result<f64, AnalysisError> {
    if sweeps.is_empty() {
        return Err(AnalysisError::EmptyGrid);
    }
    for s in sweeps {
        if !(s.proportion.is_finite() && s.proportion > 0.0 && s.proportion <= 1.0) {
            return Err(AnalysisError::InvalidProportion {
                value: s.proportion,
            });
        }
    }
    let full = sweeps
        .iter()
        .find(|s| s.proportion == 1.0)
        .ok_or(AnalysisError::MissingFullScale)?;
    let full_winner = full.groups[select_best(&full.groups, tie_rule)?].label.clone();
    let mut order: Vec<&ProportionSweep> = sweeps.iter().collect();
    order.sort_by(|a, b| a.proportion.partial_cmp(&b.proportion).expect("finite"));
    for sweep in order {
        let winner = &sweep.groups[select_best(&sweep.groups, tie_rule)?].label;
        if *winner == full_winner {
            return Ok(sweep.proportion);
        }
    }
    Ok(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Win,
    Tie,
    Lose,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Win => "win",
            Outcome::Tie => "tie",
            Outcome::Lose => "lose",
        })
    }
}

/// Head-to-head verdict of a candidate against a baseline on one case.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonVerdict {
    pub candidate_mean: f64,
    pub baseline_mean: f64,
    pub a12: f64,
    pub p_value: f64,
    pub outcome: Outcome,
    pub significant: bool,
}

/// Compare candidate against baseline (both smaller-better). A tie is an
/// exactly equal mean or an effect size of exactly one half, and takes
/// precedence over the mean comparison. Significance requires both a
/// non-negligible effect (at least 0.56 or at most 0.44) and p below 0.05.
pub fn compare_groups(
    candidate: &SampleGroup,
    baseline: &SampleGroup,
    paired: bool,
) -> Result<ComparisonVerdict, AnalysisError> {
    let p_value = if paired {
        wilcoxon_signed_rank(candidate.values(), baseline.values())?
    } else {
        wilcoxon_rank_sum(candidate.values(), baseline.values())?
    };
    let effect = a12(candidate.values(), baseline.values())?;
    let candidate_mean = candidate.mean();
    let baseline_mean = baseline.mean();
    let outcome = if candidate_mean == baseline_mean || effect == 0.5 {
        Outcome::Tie
    } else if candidate_mean < baseline_mean {
        Outcome::Win
    } else {
        Outcome::Lose
    };
    let significant = (effect >= 0.56 || effect <= 0.44) && p_value < 0.05;
    Ok(ComparisonVerdict {
        candidate_mean,
        baseline_mean,
        a12: effect,
        p_value,
        outcome,
        significant,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct WinLossTie {
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
}

impl WinLossTie {
    pub fn total(&self) -> usize {
        self.wins + self.ties + self.losses
    }
}

pub fn tabulate(verdicts: &[ComparisonVerdict]) -> WinLossTie {
    let mut out = WinLossTie::default();
    for v in verdicts {
        match v.outcome {
            Outcome::Win => out.wins += 1,
            Outcome::Tie => out.ties += 1,
            Outcome::Lose => out.losses += 1,
        }
    }
    out
}

/// One line of a comparison report. Labels must not contain commas or line
/// breaks; they name tuners and cases, not free text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub case: String,
    pub candidate: String,
    pub baseline: String,
    pub candidate_mean: f64,
    pub candidate_stderr: f64,
    pub baseline_mean: f64,
    pub baseline_stderr: f64,
    pub a12: f64,
    pub p_value: f64,
    pub outcome: Outcome,
    pub significant: bool,
}

pub const COMPARISON_CSV_HEADER: &str = "case,candidate,baseline,candidate_mean,\
candidate_stderr,baseline_mean,baseline_stderr,a12,p_value,outcome,significant";

/// Plain CSV, floats rendered in shortest round-trip form so equal inputs
/// produce byte-identical reports.
pub fn write_comparison_csv<W: Write>(out: &mut W, rows: &[ComparisonRow]) -> io::Result<()> {
    writeln!(out, "{COMPARISON_CSV_HEADER}")?;
    for r in rows {
        debug_assert!(
            !r.case.contains([',', '\n'])
                && !r.candidate.contains([',', '\n'])
                && !r.baseline.contains([',', '\n']),
            "labels must stay free of CSV structure"
        );
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.case,
            r.candidate,
            r.baseline,
            r.candidate_mean,
            r.candidate_stderr,
            r.baseline_mean,
            r.baseline_stderr,
            r.a12,
            r.p_value,
            r.outcome,
            r.significant
        )?;
    }
    Ok(())
}

pub fn comparison_rows_json(rows: &[ComparisonRow]) -> serde_json::Value {
    serde_json::to_value(rows).expect("plain data serializes")
}

/// Significance census over a comparison table: how many rows are
/// significant, and how many distinct cases have at least one.
pub fn significance_census(rows: &[ComparisonRow]) -> (usize, usize) {
    let significant = rows.iter().filter(|r| r.significant).count();
    let cases: HashSet<&str> = rows
        .iter()
        .filter(|r| r.significant)
        .map(|r| r.case.as_str())
        .collect();
    (significant, cases.len())
}
