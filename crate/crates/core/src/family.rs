//! Test-function families for operator-norm experiments.

use crate::error::{OlabError, Result};
use crate::sampled::{sample_function, FormulaSpec, GridSpec, SampledFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `chi_{B(0, t0)}` for dyadic `t0` in `[2^-4, 2^4]`.
    Indicators,
    /// `|y|^-gamma chi_{B(0, r)}` over a small parameter grid.
    PowerDecay,
    /// Seeded sums of one to four weighted ball indicators.
    Random,
}

impl std::str::FromStr for FamilyKind {
    type Err = OlabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "indicators" => Ok(Self::Indicators),
            "power-decay" | "power_decay" => Ok(Self::PowerDecay),
            "random" => Ok(Self::Random),
            other => Err(OlabError::Config(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Member {
    pub id: String,
    pub formula: FormulaSpec,
    pub f: SampledFunction,
    /// Radius of the ball for indicator members.
    pub t0: Option<f64>,
}

/// Dyadic radii `2^-4, ..., 2^4`.
pub fn dyadic_radii() -> Vec<f64> {
    (-4..=4).map(|k| 2f64.powi(k)).collect()
}

fn origin(grid: &GridSpec) -> Vec<f64> {
    vec![0.0; grid.dim]
}

/// `chi_{B(0, t0)}` for each radius; radii beyond the half-extent are rejected.
pub fn indicators(grid: &GridSpec, radii: &[f64]) -> Result<Vec<Member>> {
    radii
        .iter()
        .map(|&t0| {
            if !(t0 > 0.0) || t0 > grid.half_extent {
                return Err(OlabError::Unrepresentable(format!(
                    "ball of radius {t0} does not fit in the grid half-extent {}",
                    grid.half_extent
                )));
            }
            let formula = FormulaSpec::BallIndicator {
                center: Some(origin(grid)),
                radius: t0,
                weight: 1.0,
            };
            Ok(Member {
                id: format!("indicator-r{t0}"),
                f: sample_function(grid, &formula)?,
                formula,
                t0: Some(t0),
            })
        })
        .collect()
}

pub fn power_decay(grid: &GridSpec) -> Result<Vec<Member>> {
    let n = grid.dim as f64;
    let mut out = Vec::new();
    for gamma in [0.25 * n, 0.5 * n, 0.75 * n] {
        for radius in [0.5, 1.0, 2.0] {
            if radius > grid.half_extent {
                continue;
            }
            let formula = FormulaSpec::PowerDecay {
                gamma,
                radius,
                center: Some(origin(grid)),
                weight: 1.0,
            };
            out.push(Member {
                id: format!("power-decay-g{gamma}-r{radius}"),
                f: sample_function(grid, &formula)?,
                formula,
                t0: None,
            });
        }
    }
    Ok(out)
}

/// Seeded random formula: one to four ball indicators with centers in
/// `[-L/2, L/2]^n`, radii in `[4h, L/4]` and weights in `[0.5, 2]`.
pub fn random_formula(grid: &GridSpec, rng: &mut ChaCha8Rng) -> FormulaSpec {
    let l = grid.half_extent;
    let rmin = 4.0 * grid.h;
    let rmax = (l / 4.0).max(rmin * 1.0001);
    let terms = rng.gen_range(1..=4);
    FormulaSpec::Sum {
        terms: (0..terms)
            .map(|_| FormulaSpec::BallIndicator {
                center: Some((0..grid.dim).map(|_| rng.gen_range(-l / 2.0..=l / 2.0)).collect()),
                radius: rng.gen_range(rmin..rmax),
                weight: rng.gen_range(0.5..=2.0),
            })
            .collect(),
    }
}

pub fn random(grid: &GridSpec, seed: u64, count: usize) -> Result<Vec<Member>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let formula = random_formula(grid, &mut rng);
            Ok(Member {
                id: format!("random-{seed}-{i}"),
                f: sample_function(grid, &formula)?,
                formula,
                t0: None,
            })
        })
        .collect()
}

/// Members of a named family.
pub fn build(kind: FamilyKind, grid: &GridSpec, seed: u64, count: usize) -> Result<Vec<Member>> {
    match kind {
        FamilyKind::Indicators => indicators(grid, &dyadic_radii()),
        FamilyKind::PowerDecay => power_decay(grid),
        FamilyKind::Random => random(grid, seed, count),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_family_is_seeded() {
        let g = GridSpec::new(1, 1.0 / 16.0, 4.0).unwrap();
        let a = random(&g, 7, 5).unwrap();
        let b = random(&g, 7, 5).unwrap();
        let c = random(&g, 8, 5).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.f == y.f));
        assert!(a.iter().zip(&c).any(|(x, y)| x.f != y.f));
        assert!(a.iter().all(|m| !m.f.is_zero()));
    }

    #[test]
    fn oversized_indicator_is_unrepresentable() {
        let g = GridSpec::new(1, 1.0 / 16.0, 4.0).unwrap();
        assert!(matches!(indicators(&g, &[8.0]), Err(OlabError::Unrepresentable(_))));
        let wide = GridSpec::new(1, 1.0 / 16.0, 16.0).unwrap();
        assert_eq!(indicators(&wide, &dyadic_radii()).unwrap().len(), 9);
    }
}
