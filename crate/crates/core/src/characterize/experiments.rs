//! Empirical Adams-type experiments: operator-norm ratios over test
//! families, the necessity witness and the pointwise interpolation bound.

use super::AdamsSetup;
use crate::error::{OlabError, Result};
use crate::family::{self, Member};
use crate::norms::{generalized_orlicz_morrey_norm, SamplingPolicy};
use crate::operators::{maximal, riesz_potential, OperatorSpec};
use crate::sampled::{Ball, GridSpec, Point, SampledFunction};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    FractionalMaximal,
    Riesz,
}

impl std::str::FromStr for OperatorKind {
    type Err = OlabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maximal" | "fractional-maximal" => Ok(Self::FractionalMaximal),
            "riesz" => Ok(Self::Riesz),
            other => Err(OlabError::Config(format!("unknown operator `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Strong,
    Weak,
}

impl std::str::FromStr for Target {
    type Err = OlabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strong" => Ok(Self::Strong),
            "weak" => Ok(Self::Weak),
            other => Err(OlabError::Config(format!("unknown target `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorNormRow {
    pub id: String,
    pub source: f64,
    pub target: f64,
    pub ratio: f64,
    /// Ball attaining the target norm.
    pub witness: Option<Ball>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorNormTable {
    pub rows: Vec<OperatorNormRow>,
    /// Members skipped with the reason.
    pub skipped: Vec<(String, String)>,
}

impl OperatorNormTable {
    /// Empirical operator norm: the largest ratio.
    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(f64::NAN, f64::max)
    }

    /// max / min ratio across the rows.
    pub fn spread(&self) -> f64 {
        let lo = self.rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        self.max_ratio() / lo
    }
}

fn apply(setup: &AdamsSetup, op: OperatorKind, f: &SampledFunction) -> Result<SampledFunction> {
    match op {
        OperatorKind::FractionalMaximal => maximal(f, &OperatorSpec::new(setup.alpha, true)),
        OperatorKind::Riesz => riesz_potential(f, setup.alpha),
    }
}

fn check_grid(setup: &AdamsSetup, grid: &GridSpec) -> Result<()> {
    if grid.dim != setup.n {
        return Err(OlabError::Config(format!(
            "setup dimension {} does not match grid dimension {}",
            setup.n, grid.dim
        )));
    }
    Ok(())
}

/// `||T f||_{M^{Psi,eta}} / ||f||_{M^{Phi,varphi}}` for every family member.
pub fn estimate_operator_norm(
    setup: &AdamsSetup,
    op: OperatorKind,
    target: Target,
    members: &[Member],
    policy: &SamplingPolicy,
) -> Result<OperatorNormTable> {
    if members.is_empty() {
        return Err(OlabError::Config("test family is empty".into()));
    }
    let psi = setup.psi();
    let eta = setup.eta();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for m in members {
        check_grid(setup, m.f.grid())?;
        let source = generalized_orlicz_morrey_norm(&m.f, &setup.phi, &setup.varphi, false, &policy.sampling_for(&m.f)?)?;
        if source.value == 0.0 {
            skipped.push((m.id.clone(), "zero source norm".to_string()));
            continue;
        }
        let tf = apply(setup, op, &m.f)?;
        let weak = target == Target::Weak;
        let image = generalized_orlicz_morrey_norm(&tf, &psi, &eta, weak, &policy.sampling_for(&tf)?)?;
        rows.push(OperatorNormRow {
            id: m.id.clone(),
            source: source.value,
            target: image.value,
            ratio: image.value / source.value,
            witness: image.witness,
        });
    }
    Ok(OperatorNormTable { rows, skipped })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessRow {
    pub t0: f64,
    /// `t0^alpha varphi(t0)^(1 - beta)`.
    pub lower_bound: f64,
    pub measured: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessTable {
    pub rows: Vec<WitnessRow>,
    /// Smallest `K` with `measured >= lower_bound / K` on every row.
    pub k: f64,
}

/// Lower-bound expression against the measured ratio on `chi_{B(0, t0)}`.
pub fn necessity_witness(
    setup: &AdamsSetup,
    grid: &GridSpec,
    t0s: &[f64],
    target: Target,
    policy: &SamplingPolicy,
) -> Result<WitnessTable> {
    check_grid(setup, grid)?;
    let members = family::indicators(grid, t0s)?;
    let table = estimate_operator_norm(setup, OperatorKind::FractionalMaximal, target, &members, policy)?;
    let mut rows = Vec::new();
    let mut k = 0.0f64;
    for (m, row) in members.iter().zip(&table.rows) {
        let t0 = m.t0.expect("indicator member");
        let lower_bound = t0.powf(setup.alpha) * setup.varphi.value(t0).powf(1.0 - setup.beta);
        k = k.max(lower_bound / row.ratio);
        rows.push(WitnessRow {
            t0,
            lower_bound,
            measured: row.ratio,
        });
    }
    Ok(WitnessTable { rows, k })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointwiseReport {
    /// `max M_alpha f / ((M f)^beta ||f||^(1 - beta))`; `None` when no point has `M f > 0`.
    pub max_ratio: Option<f64>,
    pub witness: Option<Point>,
    pub points: usize,
    pub morrey_norm: f64,
}

/// Largest ratio in the pointwise bound `M_alpha f <= C (M f)^beta ||f||^(1 - beta)`.
pub fn check_pointwise_inequalities(
    setup: &AdamsSetup,
    f: &SampledFunction,
    policy: &SamplingPolicy,
) -> Result<PointwiseReport> {
    check_grid(setup, f.grid())?;
    let norm = generalized_orlicz_morrey_norm(f, &setup.phi, &setup.varphi, false, &policy.sampling_for(f)?)?.value;
    let m0 = maximal(f, &OperatorSpec::new(0.0, true))?;
    let ma = maximal(f, &OperatorSpec::new(setup.alpha, true))?;
    let mut best: Option<(f64, usize)> = None;
    let mut points = 0;
    for (k, (&m, &a)) in m0.values().iter().zip(ma.values()).enumerate() {
        if m > 0.0 {
            points += 1;
            let r = a / (m.powf(setup.beta) * norm.powf(1.0 - setup.beta));
            if best.is_none_or(|(b, _)| r > b) {
                best = Some((r, k));
            }
        }
    }
    Ok(PointwiseReport {
        max_ratio: best.map(|b| b.0),
        witness: best.map(|(_, k)| f.grid().center(k)),
        points,
        morrey_norm: norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_member_is_skipped() {
        let g = GridSpec::new(1, 1.0 / 16.0, 4.0).unwrap();
        let setup = AdamsSetup::power_case(2.0, 4.0, 0.25, 0.0, 1).unwrap();
        let mut members = family::indicators(&g, &[1.0]).unwrap();
        let mut zero = members[0].clone();
        zero.id = "zero".into();
        zero.f = SampledFunction::zeros(g);
        members.push(zero);
        let t = estimate_operator_norm(&setup, OperatorKind::FractionalMaximal, Target::Strong, &members, &SamplingPolicy::default())
            .unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.skipped[0].0, "zero");
        let p = check_pointwise_inequalities(&setup, &SampledFunction::zeros(g), &SamplingPolicy::default());
        // zero function: the Morrey norm is 0 and no point has M f > 0
        let p = p.unwrap();
        assert_eq!(p.points, 0);
        assert!(p.max_ratio.is_none());
    }

    #[test]
    fn witness_rejects_large_balls() {
        let g = GridSpec::new(1, 1.0 / 16.0, 4.0).unwrap();
        let setup = AdamsSetup::power_case(2.0, 4.0, 0.25, 0.0, 1).unwrap();
        assert!(matches!(
            necessity_witness(&setup, &g, &[8.0], Target::Strong, &SamplingPolicy::default()),
            Err(OlabError::Unrepresentable(_))
        ));
    }
}
