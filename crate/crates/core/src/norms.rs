//! Luxemburg and weak Orlicz norms, generalized Orlicz-Morrey norms as
//! suprema over sampled ball families, and triviality probes.

use crate::error::{OlabError, Result};
use crate::exec;
use crate::growth::GrowthFunction;
use crate::report::{ConditionReport, ReportStep, Verdict};
use crate::roots;
use crate::sampled::{integrate, Ball, FormulaSpec, GridSpec, Point, SampledFunction};
use crate::young::{log_grid, YoungFunction};
use serde::{Deserialize, Serialize};

const GAUGE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    Orlicz,
    WeakOrlicz,
    Morrey,
    WeakMorrey,
}

/// Ball family actually swept by a Morrey-type norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub r_min: f64,
    pub r_max: f64,
    pub centers: usize,
    pub radii: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEvaluation {
    pub value: f64,
    pub witness: Option<Ball>,
    pub truncation: Option<Truncation>,
    pub kind: NormKind,
}

fn gauge(values: &[f64], g: impl Fn(f64) -> f64) -> f64 {
    let max = values.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    roots::gauge_search(g, 1e-12 * max, 1e12 * max + 1e-300, GAUGE_TOL).unwrap_or(f64::INFINITY)
}

/// `integral Phi(v / lambda)` over the given cells.
pub fn modular(values: &[f64], cell_volume: f64, phi: &YoungFunction, lambda: f64) -> f64 {
    cell_volume * values.iter().map(|&v| phi.value(v / lambda)).sum::<f64>()
}

/// Luxemburg norm of the cells `values`, each of volume `cell_volume`.
pub fn luxemburg_of_values(values: &[f64], cell_volume: f64, phi: &YoungFunction) -> f64 {
    if let Some(p) = phi.power_exponent() {
        return (cell_volume * values.iter().map(|v| v.powf(p)).sum::<f64>()).powf(1.0 / p);
    }
    gauge(values, |lambda| modular(values, cell_volume, phi, lambda))
}

/// Distinct values in decreasing order with the measure of `{f >= v}`.
fn level_sets(values: &[f64], cell_volume: f64) -> Vec<(f64, f64)> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|&v| v > 0.0).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (k, v) in sorted.iter().enumerate() {
        let mu = (k + 1) as f64 * cell_volume;
        match out.last_mut() {
            Some(last) if last.0 == *v => last.1 = mu,
            _ => out.push((*v, mu)),
        }
    }
    out
}

/// `sup_t Phi(t / lambda) d_f(t)` evaluated on the level-set candidates.
pub fn weak_modular(levels: &[(f64, f64)], phi: &YoungFunction, lambda: f64) -> f64 {
    levels
        .iter()
        .map(|&(v, mu)| phi.value(v / lambda) * mu)
        .fold(0.0, f64::max)
}

/// Weak Orlicz norm of the cells `values`.
pub fn weak_of_values(values: &[f64], cell_volume: f64, phi: &YoungFunction) -> f64 {
    let levels = level_sets(values, cell_volume);
    if levels.is_empty() {
        return 0.0;
    }
    if let Some(p) = phi.power_exponent() {
        return levels.iter().map(|&(v, mu)| v * mu.powf(1.0 / p)).fold(0.0, f64::max);
    }
    gauge(values, |lambda| weak_modular(&levels, phi, lambda))
}

fn cells(f: &SampledFunction, over: Option<&Ball>) -> Vec<f64> {
    match over {
        None => f.values().to_vec(),
        Some(b) => f.ball_values(b),
    }
}

pub fn luxemburg_norm(f: &SampledFunction, phi: &YoungFunction, over: Option<&Ball>) -> NormEvaluation {
    NormEvaluation {
        value: luxemburg_of_values(&cells(f, over), f.grid().cell_volume(), phi),
        witness: None,
        truncation: None,
        kind: NormKind::Orlicz,
    }
}

pub fn weak_orlicz_norm(f: &SampledFunction, phi: &YoungFunction, over: Option<&Ball>) -> NormEvaluation {
    NormEvaluation {
        value: weak_of_values(&cells(f, over), f.grid().cell_volume(), phi),
        witness: None,
        truncation: None,
        kind: NormKind::WeakOrlicz,
    }
}

/// Centers and radii swept by a Morrey-type norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorreySampling {
    pub centers: Vec<Point>,
    pub radii: Vec<f64>,
}

/// Radii per default Morrey sweep.
pub const DEFAULT_RADII: usize = 64;
/// Default stride between sampled centers, in cells per axis.
pub const DEFAULT_CENTER_STRIDE: usize = 4;

impl MorreySampling {
    pub fn new(mut centers: Vec<Point>, mut radii: Vec<f64>) -> Result<Self> {
        if centers.is_empty() || radii.is_empty() {
            return Err(OlabError::Config("Morrey sampling needs at least one center and one radius".into()));
        }
        if radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(OlabError::Config("Morrey radii must be finite and positive".into()));
        }
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        centers.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        centers.dedup();
        Ok(Self { centers, radii })
    }

    /// Every `stride`-th cell center per axis plus `extra` points.
    pub fn strided_centers(grid: &GridSpec, stride: usize, extra: &[Point]) -> Vec<Point> {
        let stride = stride.max(1);
        let n = grid.side();
        let mut out = Vec::new();
        if grid.dim == 1 {
            out.extend((0..n).step_by(stride).map(|i| [grid.coord(i), 0.0]));
        } else {
            for j in (0..n).step_by(stride) {
                out.extend((0..n).step_by(stride).map(|i| [grid.coord(i), grid.coord(j)]));
            }
        }
        out.extend_from_slice(extra);
        out
    }

    /// Every 4th cell center plus the support centroid, 64 log radii in `[4h, 2L]`.
    pub fn default_for(f: &SampledFunction) -> Self {
        SamplingPolicy::default().sampling_for(f).expect("default sampling is valid")
    }

    pub fn truncation(&self) -> Truncation {
        Truncation {
            r_min: self.radii[0],
            r_max: *self.radii.last().unwrap(),
            centers: self.centers.len(),
            radii: self.radii.len(),
        }
    }
}

/// Serializable policy producing a [`MorreySampling`] for a given function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingPolicy {
    pub center_stride: usize,
    pub radii: usize,
    /// Smallest radius; defaults to `4h`.
    pub r_min: Option<f64>,
    /// Largest radius; defaults to `2L`.
    pub r_max: Option<f64>,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        Self {
            center_stride: DEFAULT_CENTER_STRIDE,
            radii: DEFAULT_RADII,
            r_min: None,
            r_max: None,
        }
    }
}

impl SamplingPolicy {
    pub fn sampling_for(&self, f: &SampledFunction) -> Result<MorreySampling> {
        let g = f.grid();
        let lo = self.r_min.unwrap_or(4.0 * g.h);
        let hi = self.r_max.unwrap_or(2.0 * g.half_extent);
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) || self.radii == 0 || self.center_stride == 0 {
            return Err(OlabError::Config(format!(
                "invalid Morrey sampling: radii {} in [{lo}, {hi}], center stride {}",
                self.radii, self.center_stride
            )));
        }
        let centers = MorreySampling::strided_centers(g, self.center_stride, &[f.support_centroid()]);
        MorreySampling::new(centers, log_grid(lo, hi, self.radii))
    }
}

/// Row-prefix sums of `v^p` for power ball norms.
struct PowerPrefix {
    side: usize,
    prefix: Vec<f64>,
}

impl PowerPrefix {
    fn new(f: &SampledFunction, p: f64) -> Self {
        let side = f.grid().side();
        let rows = f.values().len() / side;
        let mut prefix = vec![0.0; rows * (side + 1)];
        for j in 0..rows {
            let row = &f.values()[j * side..(j + 1) * side];
            let out = &mut prefix[j * (side + 1)..(j + 1) * (side + 1)];
            for (i, v) in row.iter().enumerate() {
                out[i + 1] = out[i] + v.powf(p);
            }
        }
        Self { side, prefix }
    }

    fn ball_sum(&self, rows: &[(usize, usize, usize)]) -> f64 {
        let w = self.side + 1;
        rows.iter()
            .map(|&(j, lo, hi)| self.prefix[j * w + hi + 1] - self.prefix[j * w + lo])
            .sum()
    }
}

/// Generalized Orlicz-Morrey norm (or its weak variant) over a ball family.
pub fn generalized_orlicz_morrey_norm(
    f: &SampledFunction,
    phi: &YoungFunction,
    varphi: &GrowthFunction,
    weak: bool,
    sampling: &MorreySampling,
) -> Result<NormEvaluation> {
    if sampling.centers.is_empty() || sampling.radii.is_empty() {
        return Err(OlabError::Config("empty Morrey sampling".into()));
    }
    let grid = *f.grid();
    let vol = grid.cell_volume();
    let mut weights = Vec::with_capacity(sampling.radii.len());
    for &r in &sampling.radii {
        let g = varphi.value(r);
        if !(g > 0.0 && g.is_finite()) {
            return Err(OlabError::Config(format!("growth function is not positive and finite at r = {r}: {g}")));
        }
        weights.push(1.0 / g);
    }
    let power = if weak { None } else { phi.power_exponent() };
    let prefix = power.map(|p| PowerPrefix::new(f, p));
    let nc = sampling.centers.len();
    // radius-major order, so the first maximum has the smallest radius, then the smallest center
    let scores = exec::map_indexed(sampling.radii.len() * nc, |k| {
        let (ri, ci) = (k / nc, k % nc);
        let ball = Ball {
            center: sampling.centers[ci],
            radius: sampling.radii[ri],
        };
        let count = grid.ball_cell_count(&ball);
        if count == 0 {
            return None;
        }
        let measure = count as f64 * vol;
        let ball_norm = match (&prefix, power) {
            (Some(pre), Some(p)) => (vol * pre.ball_sum(&grid.ball_rows(&ball))).powf(1.0 / p),
            _ => {
                let vals = f.ball_values(&ball);
                if weak {
                    weak_of_values(&vals, vol, phi)
                } else {
                    luxemburg_of_values(&vals, vol, phi)
                }
            }
        };
        if ball_norm == 0.0 {
            return Some(0.0);
        }
        Some(weights[ri] * phi.inverse(1.0 / measure) * ball_norm)
    });
    let mut best: Option<(f64, usize)> = None;
    for (k, s) in scores.iter().enumerate() {
        if let Some(v) = *s {
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, k));
            }
        }
    }
    let (value, witness) = match best {
        None => return Err(OlabError::Config("no sampled ball contains a lattice cell".into())),
        Some((v, k)) => (
            v,
            Ball {
                center: sampling.centers[k % nc],
                radius: sampling.radii[k / nc],
            },
        ),
    };
    Ok(NormEvaluation {
        value,
        witness: value.is_finite().then_some(witness),
        truncation: Some(sampling.truncation()),
        kind: if weak { NormKind::WeakMorrey } else { NormKind::Morrey },
    })
}

/// Radius ladder of a triviality probe.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSchedule {
    /// Outward levels: radii in `[1, r_max]` for each listed `r_max`.
    pub outward: Vec<f64>,
    /// Inward levels: radii in `[r_min, 2]` for each listed `r_min`.
    pub inward: Vec<f64>,
    pub per_octave: usize,
    pub center_stride: usize,
}

impl ProbeSchedule {
    pub fn default_for(grid: &GridSpec) -> Self {
        let floor = grid.h.max(1.0 / 64.0);
        let mut inward = Vec::new();
        let mut r = 0.5;
        while r >= floor * (1.0 - 1e-12) {
            inward.push(r);
            r *= 0.5;
        }
        Self {
            outward: (1..=6).map(|k| 2f64.powi(k)).collect(),
            inward,
            per_octave: 16,
            center_stride: DEFAULT_CENTER_STRIDE,
        }
    }
}

fn octave_radii(lo: f64, hi: f64, per_octave: usize) -> Vec<f64> {
    let n = ((hi / lo).log2() * per_octave as f64).round() as usize + 1;
    log_grid(lo, hi, n.max(2))
}

/// Result of a two-sided triviality probe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub outward: ConditionReport,
    pub inward: ConditionReport,
    pub verdict: Verdict,
}

/// Morrey norm of `chi_{B(0,1)}` as the radius range grows outward and shrinks inward.
pub fn triviality_probe(
    grid: &GridSpec,
    phi: &YoungFunction,
    varphi: &GrowthFunction,
    schedule: &ProbeSchedule,
) -> Result<ProbeReport> {
    let f = crate::sampled::sample_function(
        grid,
        &FormulaSpec::BallIndicator {
            center: None,
            radius: 1.0,
            weight: 1.0,
        },
    )?;
    let centers = MorreySampling::strided_centers(grid, schedule.center_stride, &[f.support_centroid()]);
    let run = |lo: f64, hi: f64, extent: f64| -> Result<ReportStep> {
        let sampling = MorreySampling::new(centers.clone(), octave_radii(lo, hi, schedule.per_octave))?;
        let ev = generalized_orlicz_morrey_norm(&f, phi, varphi, false, &sampling)?;
        Ok(ReportStep {
            extent,
            t_min: lo,
            t_max: hi,
            r_max: hi,
            constant: ev.value,
            witness: ev.witness.map_or(f64::NAN, |b| b.radius),
        })
    };
    let outward = schedule
        .outward
        .iter()
        .map(|&r| run(1.0, r, r))
        .collect::<Result<Vec<_>>>()?;
    let inward = schedule
        .inward
        .iter()
        .map(|&r| run(r, 2.0, 1.0 / r))
        .collect::<Result<Vec<_>>>()?;
    let outward = ConditionReport::new("triviality-outward", outward);
    let inward = ConditionReport::new("triviality-inward", inward);
    let verdict = match (outward.verdict, inward.verdict) {
        (Verdict::Diverges, _) | (_, Verdict::Diverges) => Verdict::Diverges,
        (Verdict::HoldsStable, Verdict::HoldsStable) => Verdict::HoldsStable,
        _ => Verdict::Inconclusive,
    };
    Ok(ProbeReport { outward, inward, verdict })
}

/// Convenience: `integrate(f, B)` bound of the Hölder-type inequality,
/// `2 |B| Phi^-1(|B|^-1) ||f||_{L^Phi(B)}` with the digitized `|B|`.
pub fn holder_bound(f: &SampledFunction, phi: &YoungFunction, ball: &Ball) -> f64 {
    let measure = f.grid().digitized_measure(ball);
    2.0 * measure * phi.inverse(1.0 / measure) * luxemburg_norm(f, phi, Some(ball)).value
}

/// `integrate(f, B)`, re-exported for symmetry with [`holder_bound`].
pub fn ball_integral(f: &SampledFunction, ball: &Ball) -> f64 {
    integrate(f, Some(ball))
}
