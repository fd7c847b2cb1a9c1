use olab_core::characterize::{
    check_condition, check_pointwise_inequalities, estimate_operator_norm, necessity_witness, AdamsSetup, ConditionKind,
    OperatorKind, Schedule, Target,
};
use olab_core::family;
use olab_core::norms::{generalized_orlicz_morrey_norm, luxemburg_norm, weak_orlicz_norm, SamplingPolicy};
use olab_core::sampled::{sample_function, FormulaSpec};
use olab_core::{GridSpec, GrowthFunction, Verdict, YoungFunction};

fn small_grid() -> GridSpec {
    GridSpec::new(1, 1.0 / 32.0, 8.0).unwrap()
}

fn indicator(grid: &GridSpec, c: f64, r: f64) -> olab_core::SampledFunction {
    sample_function(
        grid,
        &FormulaSpec::BallIndicator {
            center: Some(vec![c]),
            radius: r,
            weight: 1.0,
        },
    )
    .unwrap()
}

#[test]
fn characteristic_function_law_for_aligned_balls() {
    let g = GridSpec::default_1d();
    let young = [
        YoungFunction::power(1.5).unwrap(),
        YoungFunction::power_log(2.0, 1.0).unwrap(),
        YoungFunction::exp_minus_one(),
        YoungFunction::linear_capped(),
    ];
    for (c, r) in [(0.0, 1.0), (0.5, 0.25), (-3.0, 2.0)] {
        let f = indicator(&g, c, r);
        let measure = 2.0 * r;
        for phi in &young {
            let want = 1.0 / phi.invert(1.0 / measure).unwrap();
            let strong = luxemburg_norm(&f, phi, None).value;
            let weak = weak_orlicz_norm(&f, phi, None).value;
            assert!((strong / want - 1.0).abs() < 1e-3, "strong {strong} want {want}");
            assert!((weak / want - 1.0).abs() < 1e-3, "weak {weak} want {want}");
        }
    }
}

#[test]
fn l3_norm_of_unit_interval() {
    let g = GridSpec::default_1d();
    let f = indicator(&g, 0.5, 0.5);
    let v = luxemburg_norm(&f, &YoungFunction::power(3.0).unwrap(), None).value;
    assert!((v - 1.0).abs() < 1e-6);
}

#[test]
fn morrey_indicator_bracketing() {
    // phi in G_Phi: the norm of chi_{B(0,1)} is at least 1 / phi(1)
    let g = small_grid();
    let phi = YoungFunction::power(2.0).unwrap();
    let f = indicator(&g, 0.0, 1.0);
    for lambda in [0.0, 0.25, 0.5, 0.75] {
        let varphi = GrowthFunction::lambda_flavored(&phi, lambda, 1).unwrap();
        let sampling = SamplingPolicy::default().sampling_for(&f).unwrap();
        let v = generalized_orlicz_morrey_norm(&f, &phi, &varphi, false, &sampling).unwrap().value;
        let lower = 1.0 / varphi.eval(1.0).unwrap();
        assert!(v >= lower * 0.98 && v <= 4.0 * lower, "lambda {lambda}: {v} vs {lower}");
    }
}

#[test]
fn sufficiency_implies_empirical_boundedness() {
    let g = small_grid();
    let members = family::indicators(&g, &[0.125, 0.25, 0.5, 1.0, 2.0, 4.0]).unwrap();
    for (p, q, lambda) in [(2.0, 4.0, 0.0), (1.5, 3.0, 0.25)] {
        let alpha = (1.0 - lambda) * (1.0 / p - 1.0 / q);
        let setup = AdamsSetup::power_case(p, q, alpha, lambda, 1).unwrap();
        let sufficient = check_condition(ConditionKind::AdamsSufficient, &setup, &Schedule::default()).unwrap();
        let supremal = check_condition(ConditionKind::SupremalMaximal, &setup, &Schedule::default()).unwrap();
        if sufficient.verdict == Verdict::HoldsStable && supremal.verdict == Verdict::HoldsStable {
            let t = estimate_operator_norm(&setup, OperatorKind::FractionalMaximal, Target::Strong, &members, &SamplingPolicy::default())
                .unwrap();
            assert!(t.spread() <= 4.0, "p {p} q {q}: spread {}", t.spread());
        } else {
            // the supremal condition diverges for lambda > 0 in the power case
            assert!(lambda > 0.0);
        }
    }
}

#[test]
fn riesz_ratios_stay_bounded_when_balanced() {
    let g = small_grid();
    let members = family::indicators(&g, &[0.25, 0.5, 1.0, 2.0]).unwrap();
    let setup = AdamsSetup::power_case(2.0, 4.0, 0.25, 0.0, 1).unwrap();
    let t = estimate_operator_norm(&setup, OperatorKind::Riesz, Target::Strong, &members, &SamplingPolicy::default()).unwrap();
    assert!(t.rows.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0));
    assert!(t.spread() <= 4.0, "spread {}", t.spread());
}

#[test]
fn necessity_witness_lower_bound() {
    let g = small_grid();
    let t0s = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0];
    let balanced = AdamsSetup::power_case(2.0, 4.0, 0.25, 0.0, 1).unwrap();
    let w = necessity_witness(&balanced, &g, &t0s, Target::Strong, &SamplingPolicy::default()).unwrap();
    for row in &w.rows {
        assert!((row.lower_bound - 1.0).abs() < 1e-12);
        assert!(row.measured >= row.lower_bound / w.k * (1.0 - 1e-12));
    }
    let unbalanced = AdamsSetup::power_case(2.0, 6.0, 0.25, 0.0, 1).unwrap();
    let w = necessity_witness(&unbalanced, &g, &t0s, Target::Strong, &SamplingPolicy::default()).unwrap();
    // t0^alpha varphi(t0)^(1 - beta) = t0^(1/4 - 1/3)
    for row in &w.rows {
        assert!((row.lower_bound / row.t0.powf(-1.0 / 12.0) - 1.0).abs() < 1e-12);
    }
    let measured: Vec<f64> = w.rows.iter().map(|r| r.measured).collect();
    assert!(measured.windows(2).all(|p| p[1] < p[0]), "{measured:?}");
}

#[test]
fn pointwise_bound_has_one_constant_over_a_family() {
    let g = small_grid();
    let setup = AdamsSetup::power_case(2.0, 4.0, 0.25, 0.0, 1).unwrap();
    let policy = SamplingPolicy::default();
    let unit = indicator(&g, 0.0, 1.0);
    let single = check_pointwise_inequalities(&setup, &unit, &policy).unwrap();
    let c = single.max_ratio.unwrap();
    assert!(c.is_finite() && c > 0.0);
    let ratios: Vec<f64> = family::random(&g, 21, 10)
        .unwrap()
        .iter()
        .map(|m| check_pointwise_inequalities(&setup, &m.f, &policy).unwrap().max_ratio.unwrap())
        .collect();
    let hi = ratios.iter().copied().fold(c, f64::max);
    let lo = ratios.iter().copied().fold(c, f64::min);
    assert!(hi.is_finite() && hi / lo < 4.0, "{ratios:?}");
}

#[test]
fn differentiation_ratio_for_gaussian() {
    let phi = YoungFunction::power_log(2.0, 0.0).unwrap();
    for h in [1.0 / 64.0, 1.0 / 128.0] {
        let g = GridSpec::new(1, h, 4.0).unwrap();
        let f = sample_function(
            &g,
            &FormulaSpec::Gaussian {
                scale: 1.0,
                center: None,
                weight: 1.0,
            },
        )
        .unwrap();
        let ball = olab_core::Ball::centered(8.0 * h).unwrap();
        let chi = indicator(&g, 0.0, 8.0 * h);
        let ratio = luxemburg_norm(&f, &phi, Some(&ball)).value / luxemburg_norm(&chi, &phi, None).value;
        assert!((ratio - 1.0).abs() < 0.01, "h {h}: {ratio}");
    }
}
