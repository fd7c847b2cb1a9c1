//! Best-constant reports and the verdict rule shared by every condition check.

use serde::Serialize;
use std::fmt;

/// A condition "diverges" when its best constant grows by at least this
/// factor per doubling of the probed extent, over two consecutive doublings.
pub const DIVERGENCE_FACTOR: f64 = 1.3;

/// A condition "holds-stable" when max/min of its constants stays within this spread.
pub const STABLE_SPREAD: f64 = 1.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsStable,
    Diverges,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::HoldsStable => "holds-stable",
            Verdict::Diverges => "diverges",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// One truncation level of a report.
///
/// `extent` is the quantity whose doubling counts as "the range doubles":
/// the log2 half-width of the t-window for growth conditions, the outer
/// radius for outward triviality probes, the inverse inner radius for inward
/// probes and the upper end of the t-range for Young classes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportStep {
    pub extent: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub r_max: f64,
    pub constant: f64,
    pub witness: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub steps: Vec<ReportStep>,
    pub verdict: Verdict,
}

impl ConditionReport {
    pub fn new(condition: impl Into<String>, steps: Vec<ReportStep>) -> Self {
        let verdict = judge(&steps);
        Self {
            condition: condition.into(),
            steps,
            verdict,
        }
    }

    /// Constant at the widest truncation level.
    pub fn final_constant(&self) -> f64 {
        self.steps.last().map_or(f64::NAN, |s| s.constant)
    }

    /// max / min of the constants across levels.
    pub fn spread(&self) -> f64 {
        spread(self.steps.iter().map(|s| s.constant))
    }

    /// Growth factor per doubling of the extent between consecutive levels.
    pub fn growth_factors(&self) -> Vec<f64> {
        growth_factors(&self.steps)
    }
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if hi == 0.0 {
        1.0
    } else {
        hi / lo
    }
}

fn growth_factors(steps: &[ReportStep]) -> Vec<f64> {
    steps
        .windows(2)
        .filter_map(|w| {
            let doublings = (w[1].extent / w[0].extent).log2();
            if !(doublings > 0.0) {
                return None;
            }
            let (a, b) = (w[0].constant, w[1].constant);
            let ratio = if a == 0.0 {
                if b > 0.0 {
                    f64::INFINITY
                } else {
                    1.0
                }
            } else {
                b / a
            };
            Some(ratio.powf(1.0 / doublings))
        })
        .collect()
}

/// Verdict rule: infinite constants or two consecutive per-doubling growth
/// factors of at least [`DIVERGENCE_FACTOR`] mean divergence; a spread within
/// [`STABLE_SPREAD`] means the condition holds on the probed range.
pub fn judge(steps: &[ReportStep]) -> Verdict {
    if steps.is_empty() || steps.iter().any(|s| s.constant.is_nan()) {
        return Verdict::Inconclusive;
    }
    if steps.iter().any(|s| s.constant == f64::INFINITY) {
        return Verdict::Diverges;
    }
    let factors = growth_factors(steps);
    if factors.len() >= 2 && factors[factors.len() - 2..].iter().all(|&g| g >= DIVERGENCE_FACTOR) {
        return Verdict::Diverges;
    }
    if spread(steps.iter().map(|s| s.constant)) <= STABLE_SPREAD {
        Verdict::HoldsStable
    } else {
        Verdict::Inconclusive
    }
}
