//! Best-constant estimates for the growth conditions on truncated log grids.
//!
//! Level `e` of a [`Schedule`] probes `t` in `[2^-e, 2^e]` (intersected with
//! the caller's range) and truncates every `sup_{r > t}` and `int_t^inf` at
//! `R_max = 2^(e + tail)`. The level's extent is `e`, so one doubling of the
//! extent doubles the log-width of the probed window.

use super::{growth_from_lambda, AdamsSetup};
use crate::error::{OlabError, Result};
use crate::growth::GrowthFunction;
use crate::report::{ConditionReport, ReportStep};
use crate::sampled::unit_ball_volume;
use crate::young::{log_grid, YoungFunction};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionKind {
    SupremalMaximal,
    AdamsSufficient,
    AdamsNecessary,
    LambdaSufficient,
    LambdaNecessary,
    RieszSufficient,
    RieszRegularity,
}

impl ConditionKind {
    pub const ALL: [ConditionKind; 7] = [
        ConditionKind::SupremalMaximal,
        ConditionKind::AdamsSufficient,
        ConditionKind::AdamsNecessary,
        ConditionKind::LambdaSufficient,
        ConditionKind::LambdaNecessary,
        ConditionKind::RieszSufficient,
        ConditionKind::RieszRegularity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionKind::SupremalMaximal => "supremal-maximal",
            ConditionKind::AdamsSufficient => "adams-sufficient",
            ConditionKind::AdamsNecessary => "adams-necessary",
            ConditionKind::LambdaSufficient => "lambda-sufficient",
            ConditionKind::LambdaNecessary => "lambda-necessary",
            ConditionKind::RieszSufficient => "riesz-sufficient",
            ConditionKind::RieszRegularity => "riesz-regularity",
        }
    }
}

impl FromStr for ConditionKind {
    type Err = OlabError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| OlabError::Config(format!("unknown condition `{s}`")))
    }
}

/// Truncation schedule and discretization of a condition check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Schedule {
    /// log2 scales `e` of the successive levels.
    pub levels: Vec<i32>,
    /// Octaves between the top of the t-window and `R_max`.
    pub tail_octaves: u32,
    pub per_octave: usize,
    /// Caller's t-range, intersected with every window.
    pub t_min: f64,
    pub t_max: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Self {
            levels: (4..=10).collect(),
            tail_octaves: 16,
            per_octave: 32,
            t_min: 0.0,
            t_max: f64::INFINITY,
        }
    }
}

impl Schedule {
    fn validate(&self) -> Result<()> {
        if self.levels.is_empty() || self.per_octave == 0 {
            return Err(OlabError::Config("schedule needs at least one level and one node per octave".into()));
        }
        if self.levels.iter().any(|&e| e < 1) || self.levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(OlabError::Config("schedule levels must be increasing positive log2 scales".into()));
        }
        if !(self.t_min >= 0.0 && self.t_max > self.t_min) {
            return Err(OlabError::Config(format!("empty t-range [{}, {}]", self.t_min, self.t_max)));
        }
        Ok(())
    }

    fn window(&self, e: i32) -> Option<(f64, f64)> {
        let lo = 2f64.powi(-e).max(self.t_min);
        let hi = 2f64.powi(e).min(self.t_max);
        (lo <= hi).then_some((lo, hi))
    }
}

/// Log nodes from `lo` to `r_max` containing the window `[lo, hi]` as a prefix.
struct Nodes {
    x: Vec<f64>,
    /// Index one past the last window node.
    window_end: usize,
}

impl Nodes {
    fn new(lo: f64, hi: f64, r_max: f64, per_octave: usize) -> Self {
        let count = |a: f64, b: f64| ((b / a).log2() * per_octave as f64).ceil().max(1.0) as usize + 1;
        let mut x = if hi > lo { log_grid(lo, hi, count(lo, hi)) } else { vec![lo] };
        let window_end = x.len();
        if r_max > hi {
            x.extend(log_grid(hi, r_max, count(hi, r_max)).into_iter().skip(1));
        }
        Self { x, window_end }
    }
}

fn suffix_max(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    for i in (0..out.len().saturating_sub(1)).rev() {
        out[i] = out[i].max(out[i + 1]);
    }
    out
}

/// `int_{x_i}^{x_last} a(r) dr / r` by the trapezoid rule in `log r`.
fn suffix_log_integral(x: &[f64], a: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for i in (0..x.len().saturating_sub(1)).rev() {
        out[i] = out[i + 1] + 0.5 * (a[i] + a[i + 1]) * (x[i + 1] / x[i]).ln();
    }
    out
}

fn sample(g: &GrowthFunction, x: &[f64], what: &str) -> Result<Vec<f64>> {
    x.iter()
        .map(|&t| {
            let v = g.value(t);
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(OlabError::Config(format!("{what} is not positive and finite at t = {t}: {v}")))
            }
        })
        .collect()
}

/// Maximum of `c[i]` over the window nodes with the node where it occurs.
fn window_max(nodes: &Nodes, c: impl Fn(usize) -> f64) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for i in 0..nodes.window_end {
        let v = c(i);
        if v.is_nan() {
            return (f64::NAN, nodes.x[i]);
        }
        if v > best.0 {
            best = (v, nodes.x[i]);
        }
    }
    best
}

fn level_constant(kind: ConditionKind, setup: &AdamsSetup, nodes: &Nodes) -> Result<(f64, f64)> {
    let x = &nodes.x;
    let alpha = setup.alpha;
    let beta = setup.beta;
    let lambda_growth = || -> Result<Vec<f64>> {
        let lambda = setup
            .lambda
            .ok_or_else(|| OlabError::Config(format!("condition {} needs lambda", kind.name())))?;
        let g = growth_from_lambda(&setup.phi, lambda, setup.n)?;
        sample(&g, x, "lambda growth function")
    };
    Ok(match kind {
        ConditionKind::LambdaSufficient => {
            let g = lambda_growth()?;
            let b: Vec<f64> = x.iter().zip(&g).map(|(t, g)| t.powf(alpha) * g).collect();
            let s = suffix_max(&b);
            window_max(nodes, |i| s[i] / b[i])
        }
        ConditionKind::LambdaNecessary => {
            let g = lambda_growth()?;
            window_max(nodes, |i| x[i].powf(alpha) * g[i].powf(1.0 - beta))
        }
        _ => {
            let phi = sample(&setup.varphi, x, "growth function")?;
            let a: Vec<f64> = x.iter().zip(&phi).map(|(t, p)| t.powf(alpha) * p).collect();
            match kind {
                ConditionKind::AdamsNecessary => window_max(nodes, |i| a[i] / phi[i].powf(beta)),
                ConditionKind::AdamsSufficient => {
                    let s = suffix_max(&a);
                    window_max(nodes, |i| (a[i] + s[i]) / phi[i].powf(beta))
                }
                ConditionKind::RieszSufficient => {
                    let j = suffix_log_integral(x, &a);
                    window_max(nodes, |i| (a[i] + j[i]) / phi[i].powf(beta))
                }
                ConditionKind::RieszRegularity => {
                    let j = suffix_log_integral(x, &a);
                    window_max(nodes, |i| j[i] / a[i])
                }
                ConditionKind::SupremalMaximal => {
                    let vn = unit_ball_volume(setup.n);
                    let u: Vec<f64> = x
                        .iter()
                        .map(|&t| setup.phi.inverse(1.0 / (vn * t.powi(setup.n as i32))))
                        .collect();
                    let w: Vec<f64> = phi.iter().zip(&u).map(|(p, u)| p / u).collect();
                    let inner_sup = suffix_max(&w);
                    let inner: Vec<f64> = u.iter().zip(&inner_sup).map(|(u, s)| u * s).collect();
                    let outer = suffix_max(&inner);
                    window_max(nodes, |i| outer[i] / phi[i])
                }
                ConditionKind::LambdaSufficient | ConditionKind::LambdaNecessary => unreachable!(),
            }
        }
    })
}

/// Best constant of a condition at every schedule level.
pub fn check_condition(kind: ConditionKind, setup: &AdamsSetup, schedule: &Schedule) -> Result<ConditionReport> {
    schedule.validate()?;
    let mut steps = Vec::new();
    for &e in &schedule.levels {
        let Some((lo, hi)) = schedule.window(e) else {
            continue;
        };
        let r_max = 2f64.powi(e + schedule.tail_octaves as i32);
        let nodes = Nodes::new(lo, hi, r_max, schedule.per_octave);
        let (constant, witness) = level_constant(kind, setup, &nodes)?;
        steps.push(ReportStep {
            extent: e as f64,
            t_min: lo,
            t_max: hi,
            r_max,
            constant,
            witness,
        });
    }
    if steps.is_empty() {
        return Err(OlabError::Config("t-range misses every schedule window".into()));
    }
    Ok(ConditionReport::new(kind.name(), steps))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MembershipClass {
    /// Admissibility: `sup_{r > 1} Phi^-1(|B(r)|^-1) / phi(r)` and `sup_{r < 1} 1 / phi(r)` finite.
    Omega,
    /// `phi` almost decreasing and `phi(t) / Phi^-1(t^-n)` almost increasing.
    G,
}

impl MembershipClass {
    pub fn name(self) -> &'static str {
        match self {
            MembershipClass::Omega => "omega",
            MembershipClass::G => "g-class",
        }
    }
}

fn prefix_min(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    for i in 1..out.len() {
        out[i] = out[i].min(out[i - 1]);
    }
    out
}

fn suffix_min(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    for i in (0..out.len().saturating_sub(1)).rev() {
        out[i] = out[i].min(out[i + 1]);
    }
    out
}

/// Class-membership constants of a growth function on the schedule windows.
pub fn check_membership(
    varphi: &GrowthFunction,
    phi: &YoungFunction,
    n: usize,
    class: MembershipClass,
    schedule: &Schedule,
) -> Result<ConditionReport> {
    schedule.validate()?;
    let vn = unit_ball_volume(n);
    let mut steps = Vec::new();
    for &e in &schedule.levels {
        let Some((lo, hi)) = schedule.window(e) else {
            continue;
        };
        let nodes = Nodes::new(lo, hi, hi, schedule.per_octave);
        let x = &nodes.x;
        let g = sample(varphi, x, "growth function")?;
        let (constant, witness) = match class {
            MembershipClass::Omega => {
                let mut best = (0.0f64, f64::NAN);
                for (i, &t) in x.iter().enumerate() {
                    let c = if t > 1.0 {
                        phi.inverse(1.0 / (vn * t.powi(n as i32))) / g[i]
                    } else if t < 1.0 {
                        1.0 / g[i]
                    } else {
                        continue;
                    };
                    if c > best.0 {
                        best = (c, t);
                    }
                }
                best
            }
            MembershipClass::G => {
                let ratio: Vec<f64> = x
                    .iter()
                    .zip(&g)
                    .map(|(&t, g)| g / phi.inverse(t.powi(-(n as i32))))
                    .collect();
                let pmin = prefix_min(&g);
                let smin = suffix_min(&ratio);
                let mut best = (1.0f64, x[0]);
                for i in 0..x.len() {
                    let dec = g[i] / pmin[i];
                    let inc = ratio[i] / smin[i];
                    for c in [dec, inc] {
                        if c > best.0 {
                            best = (c, x[i]);
                        }
                    }
                }
                best
            }
        };
        steps.push(ReportStep {
            extent: e as f64,
            t_min: lo,
            t_max: hi,
            r_max: hi,
            constant,
            witness,
        });
    }
    if steps.is_empty() {
        return Err(OlabError::Config("t-range misses every schedule window".into()));
    }
    Ok(ConditionReport::new(class.name(), steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    fn setup(q: f64, lambda: f64) -> AdamsSetup {
        AdamsSetup::power_case(2.0, q, 0.25, lambda, 1).unwrap()
    }

    #[test]
    fn adams_necessary_exponent_balance() {
        let s = Schedule::default();
        let bal = check_condition(ConditionKind::AdamsNecessary, &setup(4.0, 0.0), &s).unwrap();
        assert_eq!(bal.verdict, Verdict::HoldsStable);
        assert!((bal.final_constant() - 1.0).abs() < 1e-9);
        for q in [3.0, 6.0] {
            let rep = check_condition(ConditionKind::AdamsNecessary, &setup(q, 0.0), &s).unwrap();
            assert_eq!(rep.verdict, Verdict::Diverges, "q={q}: {rep:?}");
            // oracle: sup of t^(1/4 - (1 - 2/q)/2) over [2^-e, 2^e]
            let k = 0.25 - 0.5 * (1.0 - 2.0 / q);
            for step in &rep.steps {
                let want = (k.abs() * step.extent).exp2();
                assert!((step.constant / want - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn adams_sufficient_balanced_is_two() {
        let rep = check_condition(ConditionKind::AdamsSufficient, &setup(4.0, 0.0), &Schedule::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::HoldsStable);
        assert!((rep.final_constant() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn riesz_regularity_is_four() {
        let rep = check_condition(ConditionKind::RieszRegularity, &setup(4.0, 0.0), &Schedule::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::HoldsStable);
        // oracle: 4 (1 - (t/R)^(1/4)) at the smallest window node
        for step in &rep.steps {
            let want = 4.0 * (1.0 - (step.t_min / step.r_max).powf(0.25));
            assert!((step.constant / want - 1.0).abs() < 1e-3, "{step:?}");
            assert!((step.constant / 4.0 - 1.0).abs() < 0.02);
        }
    }

    #[test]
    fn supremal_maximal_as_printed() {
        let s = Schedule::default();
        let flat = check_condition(ConditionKind::SupremalMaximal, &setup(4.0, 0.0), &s).unwrap();
        assert_eq!(flat.verdict, Verdict::HoldsStable);
        assert!((flat.final_constant() - 1.0).abs() < 1e-9);
        let morrey = check_condition(ConditionKind::SupremalMaximal, &setup(4.0, 0.5), &s).unwrap();
        assert_eq!(morrey.verdict, Verdict::Diverges);
        for step in &morrey.steps {
            let want = ((2.0 * step.extent + 16.0) / 4.0).exp2();
            assert!((step.constant / want - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn lambda_sufficient_threshold() {
        // holds iff lambda < n - alpha p = 1/2
        let s = Schedule::default();
        let ok = check_condition(ConditionKind::LambdaSufficient, &setup(4.0, 0.25), &s).unwrap();
        assert_eq!(ok.verdict, Verdict::HoldsStable);
        let bad = check_condition(ConditionKind::LambdaSufficient, &setup(4.0, 0.75), &s).unwrap();
        assert_eq!(bad.verdict, Verdict::Diverges);
        let needs_lambda = AdamsSetup::new(
            YoungFunction::power(2.0).unwrap(),
            GrowthFunction::power(-0.5).unwrap(),
            0.25,
            0.5,
            1,
            None,
        )
        .unwrap();
        assert!(check_condition(ConditionKind::LambdaNecessary, &needs_lambda, &s).is_err());
    }

    #[test]
    fn membership_examples() {
        let s = Schedule::default();
        let sq = YoungFunction::power(2.0).unwrap();
        let dec = GrowthFunction::power(-0.5).unwrap();
        let inc = GrowthFunction::power(0.5).unwrap();
        let g = check_membership(&dec, &sq, 1, MembershipClass::G, &s).unwrap();
        assert_eq!(g.verdict, Verdict::HoldsStable);
        assert!((g.final_constant() - 1.0).abs() < 1e-9);
        assert_eq!(check_membership(&inc, &sq, 1, MembershipClass::G, &s).unwrap().verdict, Verdict::Diverges);
        let om = check_membership(&dec, &sq, 1, MembershipClass::Omega, &s).unwrap();
        assert_eq!(om.verdict, Verdict::HoldsStable);
        assert!(om.final_constant() <= 1.0 + 1e-12);
    }

    #[test]
    fn reports_are_monotone_in_truncation() {
        let s = Schedule::default();
        for lambda in [0.0, 0.5] {
            for kind in ConditionKind::ALL {
                let rep = check_condition(kind, &setup(4.0, lambda), &s).unwrap();
                for w in rep.steps.windows(2) {
                    assert!(w[1].constant >= w[0].constant * (1.0 - 1e-12), "{kind:?} {w:?}");
                }
            }
        }
    }
}
