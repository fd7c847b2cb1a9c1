//! Growth-function classes, checkers for the boundedness conditions and
//! empirical operator-norm experiments.

mod conditions;
mod experiments;

pub use conditions::{check_condition, check_membership, ConditionKind, MembershipClass, Schedule};
pub use experiments::{
    check_pointwise_inequalities, estimate_operator_norm, necessity_witness, OperatorKind, OperatorNormRow,
    OperatorNormTable, PointwiseReport, Target, WitnessRow, WitnessTable,
};

use crate::error::{OlabError, Result};
use crate::growth::GrowthFunction;
use crate::young::YoungFunction;

/// Radial growth function `t -> Phi^-1(t^-n) / Phi^-1(t^-lambda)`.
pub fn growth_from_lambda(phi: &YoungFunction, lambda: f64, n: usize) -> Result<GrowthFunction> {
    GrowthFunction::lambda_flavored(phi, lambda, n)
}

/// Parameters of an Adams-type experiment. `psi` and `eta` are derived on
/// demand from `phi`, `varphi` and `beta`.
#[derive(Clone, Debug)]
pub struct AdamsSetup {
    pub phi: YoungFunction,
    pub varphi: GrowthFunction,
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    /// Morrey parameter for the lambda-flavored conditions.
    pub lambda: Option<f64>,
}

impl AdamsSetup {
    pub fn new(
        phi: YoungFunction,
        varphi: GrowthFunction,
        alpha: f64,
        beta: f64,
        n: usize,
        lambda: Option<f64>,
    ) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(OlabError::Domain(format!("dimension {n} not supported")));
        }
        if !(alpha > 0.0 && alpha < n as f64) {
            return Err(OlabError::Domain(format!("alpha must lie in (0, {n}), got {alpha}")));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(OlabError::Domain(format!("beta must lie in (0, 1), got {beta}")));
        }
        if lambda.is_some_and(|l| !l.is_finite()) {
            return Err(OlabError::Parameter("lambda must be finite".into()));
        }
        Ok(Self {
            phi,
            varphi,
            alpha,
            beta,
            n,
            lambda,
        })
    }

    /// The power case `Phi = t^p`, `phi = t^((lambda - n)/p)`, `beta = p/q`.
    pub fn power_case(p: f64, q: f64, alpha: f64, lambda: f64, n: usize) -> Result<Self> {
        let phi = YoungFunction::power(p)?;
        let varphi = growth_from_lambda(&phi, lambda, n)?;
        Self::new(phi, varphi, alpha, p / q, n, Some(lambda))
    }

    /// `Psi(t) = Phi(t^(1/beta))`.
    pub fn psi(&self) -> YoungFunction {
        self.phi.compose_power(self.beta).expect("beta validated in (0,1)")
    }

    /// `eta = varphi^beta`.
    pub fn eta(&self) -> GrowthFunction {
        self.varphi.power_of(self.beta).expect("beta validated positive")
    }
}
