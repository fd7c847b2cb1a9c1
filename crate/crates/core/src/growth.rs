//! Radial growth functions `phi: (0, inf) -> (0, inf)`.

use crate::error::{OlabError, Result};
use crate::young::{YoungFunction, YoungSpec};
use serde::{Deserialize, Serialize};
use std::f64::consts::E;

/// Config record for a growth function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GrowthSpec {
    /// `t^exponent`
    Power { exponent: f64 },
    /// `t^exponent (log(e + t))^log_exponent`
    PowerLog { exponent: f64, log_exponent: f64 },
    /// `Phi^-1(t^-n) / Phi^-1(t^-lambda)`, resolved against the Young function in use.
    LambdaFlavored { lambda: f64 },
    /// `base^beta`
    PowerOf { base: Box<GrowthSpec>, beta: f64 },
}

#[derive(Clone, Debug)]
enum Kind {
    Power(f64),
    PowerLog(f64, f64),
    Lambda { phi: YoungFunction, lambda: f64, n: usize },
    PowerOf(Box<GrowthFunction>, f64),
}

/// A radial growth function. Immutable; cheap to clone.
#[derive(Clone, Debug)]
pub struct GrowthFunction {
    kind: Kind,
}

impl GrowthFunction {
    pub fn power(exponent: f64) -> Result<Self> {
        if !exponent.is_finite() {
            return Err(OlabError::Parameter("growth exponent must be finite".into()));
        }
        Ok(Self { kind: Kind::Power(exponent) })
    }

    pub fn power_log(exponent: f64, log_exponent: f64) -> Result<Self> {
        if !exponent.is_finite() || !log_exponent.is_finite() {
            return Err(OlabError::Parameter("growth exponents must be finite".into()));
        }
        Ok(Self {
            kind: Kind::PowerLog(exponent, log_exponent),
        })
    }

    /// `t -> Phi^-1(t^-n) / Phi^-1(t^-lambda)`.
    pub fn lambda_flavored(phi: &YoungFunction, lambda: f64, n: usize) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(OlabError::Parameter("lambda must be finite".into()));
        }
        if n != 1 && n != 2 {
            return Err(OlabError::Parameter(format!("dimension {n} not supported")));
        }
        Ok(Self {
            kind: Kind::Lambda {
                phi: phi.clone(),
                lambda,
                n,
            },
        })
    }

    /// `self^beta`.
    pub fn power_of(&self, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(OlabError::Parameter(format!("power_of needs beta > 0, got {beta}")));
        }
        Ok(Self {
            kind: Kind::PowerOf(Box::new(self.clone()), beta),
        })
    }

    /// Build from a config record; `phi` and `n` resolve the lambda-flavored kind.
    pub fn from_spec(spec: &GrowthSpec, phi: Option<&YoungFunction>, n: usize) -> Result<Self> {
        match spec {
            GrowthSpec::Power { exponent } => Self::power(*exponent),
            GrowthSpec::PowerLog { exponent, log_exponent } => Self::power_log(*exponent, *log_exponent),
            GrowthSpec::LambdaFlavored { lambda } => {
                let phi = phi.ok_or_else(|| {
                    OlabError::Config("lambda_flavored growth needs a Young function to resolve against".into())
                })?;
                Self::lambda_flavored(phi, *lambda, n)
            }
            GrowthSpec::PowerOf { base, beta } => Self::from_spec(base, phi, n)?.power_of(*beta),
        }
    }

    pub fn to_spec(&self) -> GrowthSpec {
        match &self.kind {
            Kind::Power(e) => GrowthSpec::Power { exponent: *e },
            Kind::PowerLog(e, a) => GrowthSpec::PowerLog {
                exponent: *e,
                log_exponent: *a,
            },
            Kind::Lambda { lambda, .. } => GrowthSpec::LambdaFlavored { lambda: *lambda },
            Kind::PowerOf(base, beta) => GrowthSpec::PowerOf {
                base: Box::new(base.to_spec()),
                beta: *beta,
            },
        }
    }

    /// Young function a lambda-flavored growth function was resolved against.
    pub fn young(&self) -> Option<YoungSpec> {
        match &self.kind {
            Kind::Lambda { phi, .. } => phi.to_spec(),
            Kind::PowerOf(base, _) => base.young(),
            _ => None,
        }
    }

    /// `phi(t)` for `t > 0`; may be `0` or `inf` where the formula degenerates.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(OlabError::Domain(format!("growth function evaluated at {t}")));
        }
        Ok(self.value(t))
    }

    pub(crate) fn value(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Power(e) => t.powf(*e),
            Kind::PowerLog(e, a) => t.powf(*e) * (E + t).ln().powf(*a),
            Kind::Lambda { phi, lambda, n } => {
                let num = phi.inverse(t.powi(-(*n as i32)));
                let den = phi.inverse(t.powf(-lambda));
                num / den
            }
            Kind::PowerOf(base, beta) => base.value(t).powf(*beta),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_power_case() {
        let phi = YoungFunction::power(2.0).unwrap();
        let g = GrowthFunction::lambda_flavored(&phi, 0.5, 1).unwrap();
        assert!((g.eval(4.0).unwrap() - 4f64.powf(-0.25)).abs() < 1e-12);
        let flat = GrowthFunction::lambda_flavored(&phi, 1.0, 1).unwrap();
        for t in [0.01, 1.0, 7.0] {
            assert!((flat.eval(t).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn power_of_composes() {
        let g = GrowthFunction::power(-0.5).unwrap().power_of(0.5).unwrap();
        assert!((g.eval(16.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(g.eval(0.0).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let spec: GrowthSpec =
            serde_json::from_str(r#"{"kind":"power_of","base":{"kind":"lambda_flavored","lambda":0.5},"beta":0.5}"#)
                .unwrap();
        assert!(GrowthFunction::from_spec(&spec, None, 1).is_err());
        let phi = YoungFunction::power(2.0).unwrap();
        let g = GrowthFunction::from_spec(&spec, Some(&phi), 1).unwrap();
        assert_eq!(g.to_spec(), spec);
        assert_eq!(g.young(), Some(YoungSpec::Power { p: 2.0 }));
    }
}
