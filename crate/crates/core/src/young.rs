//! Young functions: evaluation, generalized inverse, tabulated convex
//! conjugate, power reparametrization and growth-class classification.
//!
//! Extended values are represented by `f64::INFINITY`; it is only produced
//! where the function genuinely takes the value infinity (or overflows).

use crate::error::{OlabError, Result};
use crate::report::{ConditionReport, ReportStep};
use crate::roots;
use serde::{Deserialize, Serialize};
use std::f64::consts::E;
use std::sync::Arc;

/// Config record for a Young function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum YoungSpec {
    Power { p: f64 },
    PowerLog { p: f64, a: f64 },
    ExpMinusOne,
    LinearCapped,
    ComposedPower { base: Box<YoungSpec>, beta: f64 },
}

#[derive(Clone, Debug)]
enum Kind {
    Power(f64),
    PowerLog(f64, f64),
    ExpMinusOne,
    LinearCapped,
    Composed(Box<YoungFunction>, f64),
    Scaled(Box<YoungFunction>, f64),
    Tabulated(Arc<ConjugateTable>),
}

/// A Young function. Immutable; cheap to clone.
#[derive(Clone, Debug)]
pub struct YoungFunction {
    kind: Kind,
}

/// Number of nodes of the conjugate tabulation grids.
pub const CONJUGATE_NODES: usize = 2048;
/// Log-grid span `[1e-8, 1e8]` of the conjugate tabulation.
pub const CONJUGATE_SPAN: (f64, f64) = (1e-8, 1e8);

impl YoungFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(OlabError::Parameter(format!("power Young function needs p >= 1, got {p}")));
        }
        Ok(Self { kind: Kind::Power(p) })
    }

    /// `t^p (log(e + t))^a`.
    pub fn power_log(p: f64, a: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) || !(a >= 0.0 && a.is_finite()) {
            return Err(OlabError::Parameter(format!(
                "power_log Young function needs p >= 1 and a >= 0, got p={p}, a={a}"
            )));
        }
        Ok(Self { kind: Kind::PowerLog(p, a) })
    }

    pub fn exp_minus_one() -> Self {
        Self { kind: Kind::ExpMinusOne }
    }

    /// 0 on `[0, 1]`, infinite beyond: the Young function of `L^inf`.
    pub fn linear_capped() -> Self {
        Self { kind: Kind::LinearCapped }
    }

    pub fn from_spec(spec: &YoungSpec) -> Result<Self> {
        match spec {
            YoungSpec::Power { p } => Self::power(*p),
            YoungSpec::PowerLog { p, a } => Self::power_log(*p, *a),
            YoungSpec::ExpMinusOne => Ok(Self::exp_minus_one()),
            YoungSpec::LinearCapped => Ok(Self::linear_capped()),
            YoungSpec::ComposedPower { base, beta } => Self::from_spec(base)?.compose_power(*beta),
        }
    }

    /// The config record, or `None` for tabulated conjugates.
    pub fn to_spec(&self) -> Option<YoungSpec> {
        Some(match &self.kind {
            Kind::Power(p) => YoungSpec::Power { p: *p },
            Kind::PowerLog(p, a) => YoungSpec::PowerLog { p: *p, a: *a },
            Kind::ExpMinusOne => YoungSpec::ExpMinusOne,
            Kind::LinearCapped => YoungSpec::LinearCapped,
            Kind::Composed(base, beta) => YoungSpec::ComposedPower {
                base: Box::new(base.to_spec()?),
                beta: *beta,
            },
            Kind::Scaled(..) | Kind::Tabulated(_) => return None,
        })
    }

    /// `Psi(t) = Phi(t^(1/beta))` for `beta` in (0, 1).
    pub fn compose_power(&self, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(OlabError::Parameter(format!("compose_power needs beta in (0,1), got {beta}")));
        }
        Ok(Self {
            kind: Kind::Composed(Box::new(self.clone()), beta),
        })
    }

    /// `c * Phi` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(OlabError::Parameter(format!("scale factor must be positive, got {c}")));
        }
        Ok(Self {
            kind: Kind::Scaled(Box::new(self.clone()), c),
        })
    }

    /// Exponent `p` when the function is exactly `t^p` (also through power composition).
    pub fn power_exponent(&self) -> Option<f64> {
        match &self.kind {
            Kind::Power(p) => Some(*p),
            Kind::Composed(base, beta) => base.power_exponent().map(|p| p / beta),
            _ => None,
        }
    }

    /// `Phi(t)` for `t >= 0`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(OlabError::Domain(format!("Young function evaluated at {t}")));
        }
        Ok(self.value(t))
    }

    /// Unchecked evaluation; `t` must be nonnegative.
    pub(crate) fn value(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Power(p) => t.powf(*p),
            Kind::PowerLog(p, a) => {
                if t == 0.0 {
                    0.0
                } else if t == f64::INFINITY {
                    f64::INFINITY
                } else {
                    t.powf(*p) * (E + t).ln().powf(*a)
                }
            }
            Kind::ExpMinusOne => t.exp_m1(),
            Kind::LinearCapped => {
                if t <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Kind::Composed(base, beta) => base.value(t.powf(1.0 / beta)),
            Kind::Scaled(base, c) => c * base.value(t),
            Kind::Tabulated(table) => table.eval(t),
        }
    }

    /// Generalized inverse `inf{r >= 0 : Phi(r) > s}`.
    pub fn invert(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(OlabError::Domain(format!("Young inverse evaluated at {s}")));
        }
        Ok(self.inverse(s))
    }

    pub(crate) fn inverse(&self, s: f64) -> f64 {
        if s == f64::INFINITY {
            // inf of the empty set
            return f64::INFINITY;
        }
        match &self.kind {
            Kind::Power(p) => s.powf(1.0 / p),
            Kind::ExpMinusOne => s.ln_1p(),
            Kind::LinearCapped => 1.0,
            Kind::Composed(base, beta) => base.inverse(s).powf(*beta),
            Kind::Scaled(base, c) => base.inverse(s / c),
            Kind::PowerLog(..) | Kind::Tabulated(_) => roots::generalized_inverse(|r| self.value(r), s),
        }
    }

    /// Tabulated complementary function `sup_s { r s - Phi(s) }`.
    pub fn conjugate(&self) -> Self {
        Self {
            kind: Kind::Tabulated(Arc::new(ConjugateTable::build(self))),
        }
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.kind, Kind::Tabulated(_))
    }
}

/// Log-spaced nodes `lo * (hi/lo)^(i/(n-1))`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Conjugate values on a log grid of `r`, linearly interpolated between nodes.
#[derive(Debug)]
struct ConjugateTable {
    r: Vec<f64>,
    values: Vec<f64>,
    /// `r` above which the conjugate is infinite (asymptotic slope of Phi).
    blowup: f64,
    /// slope used beyond the last node
    tail_slope: f64,
}

impl ConjugateTable {
    fn build(phi: &YoungFunction) -> Self {
        let (lo, hi) = CONJUGATE_SPAN;
        let s = log_grid(lo, hi, CONJUGATE_NODES);
        let r = log_grid(lo, hi, CONJUGATE_NODES);
        let phi_s: Vec<f64> = s.iter().map(|&x| phi.value(x)).collect();

        let top = CONJUGATE_NODES - 1;
        let blowup = if phi_s[top].is_finite() && phi_s[top - 1].is_finite() {
            (phi_s[top] - phi_s[top - 1]) / (s[top] - s[top - 1])
        } else {
            f64::INFINITY
        };

        let objective = |ri: f64, x: f64| {
            let v = phi.value(x);
            if v.is_finite() {
                ri * x - v
            } else {
                f64::NEG_INFINITY
            }
        };

        let mut values = Vec::with_capacity(CONJUGATE_NODES);
        // the maximizer is nondecreasing in r because the objective is concave in s
        let mut j = 0usize;
        for &ri in &r {
            if ri > blowup {
                values.push(f64::INFINITY);
                continue;
            }
            let g = |k: usize| if phi_s[k].is_finite() { ri * s[k] - phi_s[k] } else { f64::NEG_INFINITY };
            while j + 1 < CONJUGATE_NODES && g(j + 1) > g(j) {
                j += 1;
            }
            let a = if j == 0 { 0.0 } else { s[j - 1] };
            let b = s[(j + 1).min(top)];
            let (_, refined) = roots::golden_max(|x| objective(ri, x), a, b);
            values.push(refined.max(g(j)).max(0.0));
        }

        let finite: Vec<usize> = (0..CONJUGATE_NODES).filter(|&i| values[i].is_finite()).collect();
        let tail_slope = match finite.as_slice() {
            [.., a, b] => (values[*b] - values[*a]) / (r[*b] - r[*a]),
            _ => 0.0,
        };
        Self {
            r,
            values,
            blowup,
            tail_slope,
        }
    }

    fn eval(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        if t > self.blowup {
            return f64::INFINITY;
        }
        let n = self.r.len();
        if t <= self.r[0] {
            return self.values[0] * t / self.r[0];
        }
        if t >= self.r[n - 1] {
            let last = self.values[n - 1];
            return if last.is_finite() {
                last + self.tail_slope * (t - self.r[n - 1])
            } else {
                f64::INFINITY
            };
        }
        let (lo, hi) = (self.r[0].ln(), self.r[n - 1].ln());
        let pos = (t.ln() - lo) / (hi - lo) * (n - 1) as f64;
        let mut i = (pos.floor() as usize).min(n - 2);
        // guard against rounding in the index computation
        while i > 0 && self.r[i] > t {
            i -= 1;
        }
        while i + 2 < n && self.r[i + 1] < t {
            i += 1;
        }
        let (a, b) = (self.values[i], self.values[i + 1]);
        if !b.is_finite() {
            return if t >= self.r[i + 1] { f64::INFINITY } else { a };
        }
        let w = (t - self.r[i]) / (self.r[i + 1] - self.r[i]);
        a + w * (b - a)
    }
}

/// Growth classes of Young functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrowthClass {
    /// `Phi(2r) <= C Phi(r)`
    Delta2,
    /// `Phi(r) <= Phi(C r) / (2C)`
    Nabla2,
    /// `Phi(t r) <= C Phi(t) Phi(r)`
    DeltaPrime,
}

impl GrowthClass {
    pub fn name(self) -> &'static str {
        match self {
            GrowthClass::Delta2 => "delta2",
            GrowthClass::Nabla2 => "nabla2",
            GrowthClass::DeltaPrime => "delta-prime",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "delta2" | "delta-2" | "Δ₂" => Ok(Self::Delta2),
            "nabla2" | "nabla-2" | "∇₂" => Ok(Self::Nabla2),
            "delta-prime" | "delta_prime" | "Δ′" => Ok(Self::DeltaPrime),
            other => Err(OlabError::Config(format!("unknown growth class `{other}`"))),
        }
    }
}

/// Probed t-range for [`classify_growth`]: level `k` covers
/// `[t_min / 2^k, t_max * 2^k]` with `per_octave` log nodes per octave.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassRange {
    pub t_min: f64,
    pub t_max: f64,
    pub per_octave: usize,
    pub widenings: usize,
}

impl Default for ClassRange {
    fn default() -> Self {
        Self {
            t_min: 1e-2,
            t_max: 1.0,
            per_octave: 8,
            widenings: 4,
        }
    }
}

fn octave_grid(lo: f64, hi: f64, per_octave: usize) -> Vec<f64> {
    let octaves = (hi / lo).log2().max(0.0);
    let n = (octaves * per_octave as f64).ceil() as usize + 1;
    log_grid(lo, hi, n.max(2))
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else if den.is_infinite() {
        if num.is_infinite() {
            1.0
        } else {
            0.0
        }
    } else {
        num / den
    }
}

/// Smallest candidate `C` in `{2^(j/64)}` up to 1024 satisfying the nabla-2 inequality on `grid`.
fn nabla2_constant(phi: &YoungFunction, grid: &[f64]) -> (f64, f64) {
    for j in 0..=640 {
        let c = 2f64.powf(j as f64 / 64.0);
        let violator = grid.iter().copied().find(|&r| {
            let lhs = phi.value(r);
            let rhs = phi.value(c * r) / (2.0 * c);
            lhs > rhs * (1.0 + 1e-12)
        });
        if violator.is_none() {
            return (c, f64::NAN);
        }
    }
    (f64::INFINITY, f64::NAN)
}

/// Empirical best constant of a growth class over a widening range.
pub fn classify_growth(phi: &YoungFunction, class: GrowthClass, range: &ClassRange) -> Result<ConditionReport> {
    if !(range.t_min > 0.0 && range.t_max >= range.t_min && range.t_max.is_finite()) {
        return Err(OlabError::Domain("classification range must be finite and positive".into()));
    }
    let mut steps = Vec::with_capacity(range.widenings + 1);
    for k in 0..=range.widenings {
        let scale = 2f64.powi(k as i32);
        let (lo, hi) = (range.t_min / scale, range.t_max * scale);
        let grid = octave_grid(lo, hi, range.per_octave);
        let (constant, witness) = match class {
            GrowthClass::Delta2 => grid
                .iter()
                .map(|&r| (ratio(phi.value(2.0 * r), phi.value(r)), r))
                .fold((0.0, f64::NAN), |acc, x| if x.0 > acc.0 { x } else { acc }),
            GrowthClass::DeltaPrime => {
                let vals: Vec<f64> = grid.iter().map(|&x| phi.value(x)).collect();
                let mut best = (0.0, f64::NAN);
                for (i, &t) in grid.iter().enumerate() {
                    for (j, &r) in grid.iter().enumerate().skip(i) {
                        let c = ratio(phi.value(t * r), vals[i] * vals[j]);
                        if c > best.0 {
                            best = (c, t * r);
                        }
                    }
                }
                best
            }
            GrowthClass::Nabla2 => nabla2_constant(phi, &grid),
        };
        steps.push(ReportStep {
            extent: hi,
            t_min: lo,
            t_max: hi,
            r_max: hi,
            constant,
            witness,
        });
    }
    Ok(ConditionReport::new(class.name(), steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn eval_examples() {
        assert_eq!(YoungFunction::power(2.0).unwrap().eval(3.0).unwrap(), 9.0);
        let cap = YoungFunction::linear_capped();
        assert_eq!(cap.eval(0.5).unwrap(), 0.0);
        assert_eq!(cap.eval(1.5).unwrap(), f64::INFINITY);
        let psi = YoungFunction::power(2.0).unwrap().compose_power(0.5).unwrap();
        assert!((psi.eval(3.0).unwrap() - 81.0).abs() < 1e-9);
    }

    #[test]
    fn negative_argument_is_domain_error() {
        let phi = YoungFunction::power(2.0).unwrap();
        assert!(matches!(phi.eval(-1.0), Err(OlabError::Domain(_))));
        assert!(matches!(phi.invert(-1.0), Err(OlabError::Domain(_))));
    }

    #[test]
    fn invalid_parameters() {
        assert!(YoungFunction::power(0.5).is_err());
        assert!(YoungFunction::power_log(2.0, -1.0).is_err());
        let phi = YoungFunction::power(2.0).unwrap();
        assert!(phi.compose_power(1.0).is_err());
        assert!(phi.compose_power(0.0).is_err());
    }

    #[test]
    fn inverse_examples() {
        let cube = YoungFunction::power(3.0).unwrap();
        assert!((cube.invert(8.0).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(YoungFunction::linear_capped().invert(100.0).unwrap(), 1.0);
        let pl = YoungFunction::power_log(2.0, 1.0).unwrap();
        let r = pl.invert(5.0).unwrap();
        assert!((pl.eval(r).unwrap() - 5.0).abs() < 1e-9);
    }

    #[test]
    fn composed_inverse_identity() {
        let phi = YoungFunction::power(2.0).unwrap();
        let psi = phi.compose_power(0.5).unwrap();
        assert!((psi.invert(16.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((phi.invert(16.0).unwrap().sqrt() - 2.0).abs() < 1e-12);
        let q = YoungFunction::power(2.0).unwrap().compose_power(0.5).unwrap();
        assert_eq!(q.power_exponent(), Some(4.0));
    }

    #[test]
    fn spec_round_trip() {
        let spec: YoungSpec =
            serde_json::from_str(r#"{"kind":"composed_power","base":{"kind":"power_log","p":2.0,"a":1.0},"beta":0.5}"#)
                .unwrap();
        let phi = YoungFunction::from_spec(&spec).unwrap();
        assert_eq!(phi.to_spec().unwrap(), spec);
        assert!(serde_json::from_str::<YoungSpec>(r#"{"kind":"cosh"}"#).is_err());
    }

    #[test]
    fn conjugate_of_linear_is_indicator_of_unit_interval() {
        let lin = YoungFunction::power(1.0).unwrap().conjugate();
        assert_eq!(lin.eval(0.5).unwrap(), 0.0);
        assert_eq!(lin.eval(0.999).unwrap(), 0.0);
        assert_eq!(lin.eval(1.001).unwrap(), f64::INFINITY);
        assert_eq!(lin.eval(1.5).unwrap(), f64::INFINITY);
    }

    #[test]
    fn conjugate_of_square_matches_dense_sup() {
        // oracle: dense Legendre sup on a linear grid, analytic value r^2/4
        let conj = YoungFunction::power(2.0).unwrap().conjugate();
        for &r in &log_grid(1e-2, 1e2, 41) {
            let oracle = (0..=20000)
                .map(|i| {
                    let s = r * i as f64 / 10000.0;
                    r * s - s * s
                })
                .fold(0.0f64, f64::max);
            assert!((oracle - r * r / 4.0).abs() <= 1e-9 * r * r);
            let tab = conj.eval(r).unwrap();
            assert!((tab / oracle - 1.0).abs() < 1e-3, "r={r} tab={tab} oracle={oracle}");
        }
    }

    #[test]
    fn half_square_is_self_conjugate() {
        let half = YoungFunction::power(2.0).unwrap().scaled(0.5).unwrap();
        let conj = half.conjugate();
        for &r in &log_grid(1e-2, 1e2, 64) {
            let want = 0.5 * r * r;
            assert!((conj.eval(r).unwrap() / want - 1.0).abs() < 0.02, "r={r}");
        }
    }

    #[test]
    fn conjugate_pairing_for_cube() {
        let phi = YoungFunction::power(3.0).unwrap();
        let conj = phi.conjugate();
        for r in [0.1, 1.0, 10.0] {
            let prod = phi.invert(r).unwrap() * conj.invert(r).unwrap();
            assert!(prod >= r * (1.0 - 1e-6) && prod <= 2.0 * r * (1.0 + 1e-6), "r={r} prod={prod}");
        }
    }

    #[test]
    fn delta_prime_of_power_is_one() {
        let phi = YoungFunction::power(2.5).unwrap();
        let rep = classify_growth(&phi, GrowthClass::DeltaPrime, &ClassRange::default()).unwrap();
        for s in &rep.steps {
            assert!((s.constant - 1.0).abs() < 1e-12);
        }
        assert_eq!(rep.verdict, Verdict::HoldsStable);
    }

    #[test]
    fn nabla2_of_square_is_two() {
        let phi = YoungFunction::power(2.0).unwrap();
        let rep = classify_growth(&phi, GrowthClass::Nabla2, &ClassRange::default()).unwrap();
        assert!((rep.final_constant() - 2.0).abs() < 1e-12);
        assert_eq!(rep.verdict, Verdict::HoldsStable);
    }

    #[test]
    fn exp_is_not_doubling() {
        // oracle: Phi(2r)/Phi(r) = e^r + 1 grows without bound at r in {1,2,4,8}
        let phi = YoungFunction::exp_minus_one();
        let oracle: Vec<f64> = [1.0f64, 2.0, 4.0, 8.0].iter().map(|&r| (2.0 * r).exp_m1() / r.exp_m1()).collect();
        assert!(oracle.windows(2).all(|w| w[1] > 1.3 * w[0]));
        let range = ClassRange {
            t_min: 0.5,
            t_max: 1.0,
            per_octave: 8,
            widenings: 3,
        };
        let rep = classify_growth(&phi, GrowthClass::Delta2, &range).unwrap();
        assert_eq!(rep.verdict, Verdict::Diverges);
        for (step, want) in rep.steps.iter().zip(&oracle) {
            assert!(step.constant >= *want * (1.0 - 1e-12));
        }
    }

    #[test]
    fn delta_prime_consequence_for_power_log() {
        let phi = YoungFunction::power_log(2.0, 1.0).unwrap();
        let range = ClassRange {
            t_min: 1e-3,
            t_max: 1e3,
            per_octave: 4,
            widenings: 0,
        };
        let rep = classify_growth(&phi, GrowthClass::DeltaPrime, &range).unwrap();
        let c = rep.final_constant().max(1.0);
        let grid = log_grid(1e-3, 1e3, 25);
        for &u in &grid {
            for &v in &grid {
                let lhs = phi.invert(u).unwrap() * phi.invert(v).unwrap();
                assert!(lhs <= 1.05 * c * phi.invert(u * v).unwrap(), "u={u} v={v}");
            }
        }
    }
}
