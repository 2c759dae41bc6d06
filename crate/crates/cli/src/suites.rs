//! The verification suites behind `crossforms verify`: every functional
//! equation, route agreement, modular transformation law, two-block
//! identity, differential-operator residual, partition-function property,
//! and Monte Carlo consistency check, each with its pinned tolerance.
//!
//! Functional equations are always checked with both sides evaluated
//! independently (the `*_direct` evaluators), never through the production
//! folding that would make them true by construction.

use crossforms::Complex64;

use crossforms::crossing::{
    self, hvbar_beta_one, hvbar_beta_one_prefactor, hvbar_general, hv_general,
    horizontal_alpha, horizontal_and_vertical_direct, horizontal_and_vertical_with,
    horizontal_direct, horizontal_no_vertical, norm_constant, ode_residual, ode_residual_of,
    partition_function, sle_crossing, Alpha, CrossingParams, Method, OdeQuantity,
    PartitionParams, SleMethod,
};
use crossforms::forms::EtaScale;
use crossforms::gamma::gamma;
use crossforms::modeval::{
    check_transformation, eta_point, eval_f1, eval_f2, eval_lambda, eval_series,
    second_order_constant, HalfPlanePoint, TransformKind,
};
use crossforms::percolation::{
    dual_complement, estimate, exhaustive_crossing_probability, sample_config, LatticeSpec,
    Quantity,
};
use crossforms::qseries::DEFAULT_ORDER;
use crossforms::rational::rat;

use crate::report::{Check, VerdictReport};

/// Suite names accepted by `verify`.
pub const SUITES: [&str; 8] = [
    "duality",
    "routes",
    "modular",
    "thm3",
    "ode",
    "partition",
    "dualitymc",
    "all",
];

/// Run one named suite. `tol_override`, when set, replaces every default
/// tolerance (exploratory use).
pub fn run_suite(name: &str, tol_override: Option<f64>, threads: usize) -> Option<VerdictReport> {
    let mut report = match name {
        "duality" => duality_suite(),
        "routes" => routes_suite(),
        "modular" => modular_suite(),
        "thm3" => thm3_suite(),
        "ode" => ode_suite(),
        "partition" => partition_suite(),
        "dualitymc" => dualitymc_suite(threads),
        "all" => VerdictReport::merged(vec![
            duality_suite(),
            routes_suite(),
            modular_suite(),
            thm3_suite(),
            ode_suite(),
            partition_suite(),
            dualitymc_suite(threads),
        ]),
        _ => return None,
    };
    if let Some(tol) = tol_override {
        for c in &mut report.checks {
            c.tolerance = tol;
            c.pass = c.residual.is_finite() && c.residual <= tol;
        }
        report.overall = report.checks.iter().all(|c| c.pass);
    }
    Some(report)
}

const DUALITY_GRID: [f64; 6] = [0.25, 0.5, 1.0, 1.5, 2.0, 4.0];

/// Functional equations of the two percolation crossing quantities.
pub fn duality_suite() -> VerdictReport {
    let mut checks = Vec::new();

    // Horizontal duality: P(r) + P(1/r) = 1, both sides direct. The eta
    // route converges on the whole grid; the series/integral routes join
    // where their expansions converge inside the term caps.
    for &r in &DUALITY_GRID {
        let feasible: &[Method] = if r == 1.0 || r == 1.5 || r == 2.0 {
            &[Method::Hypergeometric, Method::LambdaIntegral, Method::EtaIntegral]
        } else {
            &[Method::LambdaIntegral, Method::EtaIntegral]
        };
        for &m in feasible {
            let res = horizontal_direct(r, m).and_then(|a| {
                horizontal_direct(1.0 / r, m).map(|b| (a.value + b.value - 1.0).abs())
            });
            checks.push(match res {
                Ok(res) => Check::new(
                    "horizontal duality",
                    format!("r={r}, method={}", m.name()),
                    res,
                    1e-10,
                ),
                Err(e) => Check::failed_to_run(
                    "horizontal duality",
                    format!("r={r}, method={}", m.name()),
                    e,
                ),
            });
        }
    }

    // Symmetry of the horizontal-and-vertical quantity, both sides direct
    // on the eta route (feasible at every grid point).
    for &r in &DUALITY_GRID {
        let res = horizontal_and_vertical_direct(r, Method::EtaIntegral).and_then(|a| {
            horizontal_and_vertical_direct(1.0 / r, Method::EtaIntegral)
                .map(|b| (a.value - b.value).abs())
        });
        checks.push(match res {
            Ok(res) => Check::new("hv symmetry", format!("r={r}, method=eta"), res, 1e-9),
            Err(e) => Check::failed_to_run("hv symmetry", format!("r={r}"), e),
        });
    }

    // Self-dual point.
    for m in Method::ALL {
        let res = horizontal_direct(1.0, m)
            .map(|v| (v.value - 0.5).abs())
            .unwrap_or(f64::INFINITY);
        checks.push(Check::new(
            "horizontal at the self-dual point",
            format!("r=1, method={}", m.name()),
            res,
            1e-10,
        ));
    }

    VerdictReport::new("duality", checks)
}

const ROUTE_GRID: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 4.0];

/// Pairwise agreement of the three computational routes.
pub fn routes_suite() -> VerdictReport {
    let mut checks = Vec::new();
    type RouteFn = fn(f64, Method) -> Result<crossforms::crossing::CrossingValue, crossforms::error::CrossingError>;
    for &r in &ROUTE_GRID {
        for (name, f) in [
            ("horizontal", crossing::horizontal as RouteFn),
            ("horizontal-no-vertical", horizontal_no_vertical as RouteFn),
        ] {
            let values: Result<Vec<f64>, _> = Method::ALL
                .iter()
                .map(|m| f(r, *m).map(|v| v.value))
                .collect();
            match values {
                Ok(values) => {
                    for i in 0..3 {
                        for j in i + 1..3 {
                            checks.push(Check::new(
                                format!("{name} route agreement"),
                                format!(
                                    "r={r}, {} vs {}",
                                    Method::ALL[i].name(),
                                    Method::ALL[j].name()
                                ),
                                (values[i] - values[j]).abs(),
                                1e-8,
                            ));
                        }
                    }
                }
                Err(e) => checks.push(Check::failed_to_run(
                    format!("{name} route agreement"),
                    format!("r={r}"),
                    e,
                )),
            }
        }
    }
    VerdictReport::new("routes", checks)
}

/// Transformation laws of the weight-2 block and its second-order partner.
pub fn modular_suite() -> VerdictReport {
    let mut checks = Vec::new();
    let taus = [
        Complex64::new(0.0, 0.5),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 1.3),
        Complex64::new(0.0, 2.0),
        Complex64::new(0.4, 1.3), // off-axis sample
    ];
    for tau in taus {
        let at = HalfPlanePoint::new(tau).expect("upper half-plane");
        let res = check_transformation(TransformKind::F2S, at);
        checks.push(match res {
            Ok(r) => Check::new(
                "second-order S law",
                format!("tau={:.2}+{:.2}i", tau.re, tau.im),
                r,
                1e-8,
            ),
            Err(e) => Check::failed_to_run("second-order S law", format!("tau={tau}"), e),
        });
    }

    let at = HalfPlanePoint::new(Complex64::new(0.0, 1.2)).unwrap();
    checks.push(Check::new(
        "vector-valued S/T^2 law",
        "tau=1.2i",
        check_transformation(TransformKind::VectorST, at).unwrap_or(f64::INFINITY),
        1e-10,
    ));
    checks.push(Check::new(
        "weight-2 S law",
        "tau=1.7i",
        check_transformation(
            TransformKind::F1S,
            HalfPlanePoint::new(Complex64::new(0.0, 1.7)).unwrap(),
        )
        .unwrap_or(f64::INFINITY),
        1e-10,
    ));

    // T-character of the weight-2 block (leading exponent 1/3).
    {
        let tau = Complex64::new(0.2, 1.4);
        let lhs = eval_f1(HalfPlanePoint::new(tau + 1.0).unwrap()).map(|v| v.value);
        let rhs = eval_f1(HalfPlanePoint::new(tau).unwrap()).map(|v| v.value);
        let res = match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                (l - Complex64::from_polar(1.0, std::f64::consts::PI / 3.0) * r).norm()
            }
            _ => f64::INFINITY,
        };
        checks.push(Check::new("T character of the weight-2 block", "tau=0.2+1.4i", res, 1e-10));
    }

    // Ratio at the S-fixed point.
    {
        let i = HalfPlanePoint::new(Complex64::new(0.0, 1.0)).unwrap();
        let ratio = eval_f2(i).unwrap().value / eval_f1(i).unwrap().value;
        let expect = second_order_constant() / 2.0;
        checks.push(Check::new(
            "second-order ratio at the S-fixed point",
            "tau=i",
            (ratio - Complex64::new(expect, 0.0)).norm(),
            1e-9,
        ));
    }

    // Two-periodicity of the second-order block (fixes its integration
    // constant at zero).
    {
        let base = HalfPlanePoint::new(Complex64::new(0.3, 1.1)).unwrap();
        let a = eval_f2(base).unwrap().value;
        let b = eval_f2(base.t2_image()).unwrap().value;
        checks.push(Check::new(
            "second-order block is 2-periodic",
            "tau=0.3+1.1i",
            (a - b).norm(),
            1e-10,
        ));
    }

    // Finite-difference consistency of the Hauptmodul derivative series.
    {
        let r = 1.3;
        let h = 1e-4;
        let lam = |x: f64| eval_lambda(HalfPlanePoint::from_aspect(x).unwrap()).unwrap().value.re;
        let fd = (lam(r + h) - lam(r - h)) / (2.0 * h);
        let series = crossforms::forms::lambda_prime(DEFAULT_ORDER);
        let lp = eval_series(&series, HalfPlanePoint::from_aspect(r).unwrap())
            .unwrap()
            .value
            .re;
        let expect = -2.0 * std::f64::consts::PI * lp;
        checks.push(Check::new(
            "Hauptmodul derivative vs finite differences",
            format!("r={r}, step={h}"),
            ((fd - expect) / expect).abs(),
            1e-6,
        ));
    }

    VerdictReport::new("modular", checks)
}

/// Identities of the generalized two-block family.
pub fn thm3_suite() -> VerdictReport {
    let mut checks = Vec::new();

    // Specialization to percolation quantities at (1/3, 1).
    let perc = CrossingParams::percolation();
    for r in [1.0, 1.5] {
        let pm = hv_general(r, &perc).map(|v| v.value);
        let hv = horizontal_and_vertical_with(r, Method::Hypergeometric).map(|v| v.value);
        let res = match (pm, hv) {
            (Ok(a), Ok(b)) => (a - b).abs(),
            _ => f64::INFINITY,
        };
        checks.push(Check::new(
            "two-block symmetric part matches hv",
            format!("r={r}, (alpha,beta)=(1/3,1)"),
            res,
            1e-8,
        ));
        let p2 = hvbar_general(r, &perc).map(|v| v.value);
        let watts = horizontal_no_vertical(r, Method::Hypergeometric).map(|v| v.value);
        let res = match (p2, watts) {
            (Ok(a), Ok(b)) => (a - b).abs(),
            _ => f64::INFINITY,
        };
        checks.push(Check::new(
            "two-block complement matches no-vertical",
            format!("r={r}, (alpha,beta)=(1/3,1)"),
            res,
            1e-8,
        ));
    }

    // (1/4, 3/4): symmetry and additivity.
    let quarter = CrossingParams::from_rational(rat(1, 4), rat(3, 4)).expect("valid");
    {
        let a = hv_general(2.0, &quarter).map(|v| v.value).unwrap_or(f64::NAN);
        let b = hv_general(0.5, &quarter).map(|v| v.value).unwrap_or(f64::NAN);
        checks.push(Check::new(
            "two-block symmetric part is aspect-symmetric",
            "r=2 vs r=1/2, (alpha,beta)=(1/4,3/4)",
            (a - b).abs(),
            1e-8,
        ));
    }
    {
        let r = 1.3;
        let total = hv_general(r, &quarter).map(|v| v.value).unwrap_or(f64::NAN)
            + hvbar_general(r, &quarter).map(|v| v.value).unwrap_or(f64::NAN);
        let whole = horizontal_alpha(r, &Alpha::Exact(rat(1, 4)))
            .map(|v| v.value)
            .unwrap_or(f64::NAN);
        checks.push(Check::new(
            "two-block parts add to the one-block total",
            format!("r={r}, (alpha,beta)=(1/4,3/4)"),
            (total - whole).abs(),
            1e-8,
        ));
    }

    // beta = 1 hypergeometric collapse: prefactor and value.
    {
        let expect = 3.0_f64.sqrt() / (2.0 * std::f64::consts::PI);
        checks.push(Check::new(
            "beta=1 collapse prefactor at alpha=1/3",
            "alpha=1/3",
            (hvbar_beta_one_prefactor(1.0 / 3.0) - expect).abs(),
            1e-12,
        ));
        let r = 1.5;
        let params = CrossingParams::from_rational(rat(1, 4), rat(1, 1)).expect("valid");
        let series = hvbar_general(r, &params).map(|v| v.value).unwrap_or(f64::NAN);
        let hyp = hvbar_beta_one(r, 0.25).map(|v| v.value).unwrap_or(f64::NAN);
        checks.push(Check::new(
            "beta=1 collapse equals the double integral",
            format!("r={r}, alpha=1/4"),
            (series - hyp).abs(),
            1e-8,
        ));
    }

    // Normalization constant against direct gamma evaluation.
    {
        let c = norm_constant(0.25, 0.75).unwrap_or(f64::NAN);
        let expect = 16.0 * std::f64::consts::PI.powf(1.5) / gamma(0.25).powi(2);
        checks.push(Check::new(
            "two-block normalization constant",
            "(alpha,beta)=(1/4,3/4)",
            ((c - expect) / expect).abs(),
            1e-12,
        ));
    }

    // SLE family checks ride along here: reduction at kappa=6, duality, and
    // normalization at the full cross-ratio.
    {
        let lam = 0.4;
        let sle = sle_crossing(lam, 6.0, SleMethod::Hypergeometric).unwrap_or(f64::NAN);
        let cardy = {
            // Evaluate Cardy's presentation at the same cross-ratio.
            let c = 2.0 * std::f64::consts::PI * 3.0_f64.sqrt() / gamma(1.0 / 3.0).powi(3);
            c * lam.powf(1.0 / 3.0)
                * crossforms::hyp::hyp2f1(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, lam).unwrap_or(f64::NAN)
        };
        checks.push(Check::new(
            "SLE family reduces to percolation at kappa=6",
            format!("lambda={lam}"),
            (sle - cardy).abs(),
            1e-10,
        ));
        for kappa in [4.5, 5.0, 6.0, 7.0, 8.0] {
            let f = |l: f64| sle_crossing(l, kappa, SleMethod::Hypergeometric).unwrap_or(f64::NAN);
            checks.push(Check::new(
                "SLE duality",
                format!("lambda=0.3, kappa={kappa}"),
                (f(0.3) + f(0.7) - 1.0).abs(),
                1e-10,
            ));
        }
        for kappa in [4.5, 6.0, 8.0] {
            let one = sle_crossing(1.0, kappa, SleMethod::Integral).unwrap_or(f64::NAN);
            checks.push(Check::new(
                "SLE normalization at lambda=1",
                format!("kappa={kappa}"),
                (one - 1.0).abs(),
                1e-12,
            ));
        }
    }

    VerdictReport::new("thm3", checks)
}

/// Finite-difference residuals of the factored third-order operator on its
/// three spanning solutions.
pub fn ode_suite() -> VerdictReport {
    let mut checks = Vec::new();
    let param_sets = [
        ("(1/3,1)", CrossingParams::percolation()),
        (
            "(1/4,3/4)",
            CrossingParams::from_rational(rat(1, 4), rat(3, 4)).expect("valid"),
        ),
    ];
    for (label, params) in &param_sets {
        let res = ode_residual_of(&|_| Ok(1.0), 0.5, params).unwrap_or(f64::INFINITY);
        checks.push(Check::new(
            "operator annihilates constants",
            format!("lambda=0.5, {label}"),
            res,
            1e-12,
        ));
        for lam in [0.3, 0.5, 0.7] {
            let res = ode_residual(OdeQuantity::Horizontal, lam, params).unwrap_or(f64::INFINITY);
            checks.push(Check::new(
                "operator annihilates the one-block solution",
                format!("lambda={lam}, {label}"),
                res,
                1e-4,
            ));
        }
        for lam in [0.4, 0.6] {
            let res = ode_residual(OdeQuantity::HorizontalNoVertical, lam, params)
                .unwrap_or(f64::INFINITY);
            checks.push(Check::new(
                "operator annihilates the two-block solution",
                format!("lambda={lam}, {label}"),
                res,
                1e-4,
            ));
        }
        // The hv-type combination spans with the other two.
        let kappa = params.kappa();
        let res = ode_residual_of(
            &|x| {
                let one = sle_crossing(x, kappa, SleMethod::Hypergeometric)?;
                let two = crossing::hvbar_lambda_series(x, params)?;
                Ok(one - two)
            },
            0.5,
            params,
        )
        .unwrap_or(f64::INFINITY);
        checks.push(Check::new(
            "operator annihilates the difference solution",
            format!("lambda=0.5, {label}"),
            res,
            1e-4,
        ));
    }
    VerdictReport::new("ode", checks)
}

/// Properties of the universal rectangle partition-function factor.
pub fn partition_suite() -> VerdictReport {
    let mut checks = Vec::new();
    {
        let z1 = partition_function(&PartitionParams {
            l: 1.0,
            lp: 2.0,
            c: 0.5,
            scale_const: 1.0,
        });
        let z2 = partition_function(&PartitionParams {
            l: 2.0,
            lp: 1.0,
            c: 0.5,
            scale_const: 1.0,
        });
        checks.push(Check::new(
            "side exchange symmetry",
            "(l,lp)=(1,2), c=1/2",
            ((z1 - z2) / z1).abs(),
            1e-10,
        ));
    }
    {
        let z = partition_function(&PartitionParams {
            l: 3.0,
            lp: 0.7,
            c: 0.0,
            scale_const: 4.2,
        });
        checks.push(Check::new(
            "zero central charge collapses to the constant",
            "(l,lp)=(3,0.7), c=0",
            (z - 4.2).abs(),
            1e-15,
        ));
    }
    {
        let base = PartitionParams {
            l: 1.0,
            lp: 2.0,
            c: 1.0,
            scale_const: 1.0,
        };
        let z1 = partition_function(&base);
        let z3 = partition_function(&PartitionParams {
            l: 3.0,
            lp: 6.0,
            ..base
        });
        let expect = 3.0_f64.powf(0.25) * z1;
        checks.push(Check::new(
            "homogeneity of degree c/4",
            "scale=3, c=1",
            ((z3 - expect) / expect).abs(),
            1e-10,
        ));
    }
    {
        // |eta| is invariant under tau -> tau + 2, so |Z| depends on the
        // shape only through the documented eta factor.
        let tau = Complex64::new(0.3, 1.4);
        let a = eta_point(EtaScale::One, tau).norm();
        let b = eta_point(EtaScale::One, tau + 2.0).norm();
        checks.push(Check::new(
            "eta magnitude is 2-periodic",
            "tau=0.3+1.4i",
            ((a - b) / a).abs(),
            1e-12,
        ));
    }
    VerdictReport::new("partition", checks)
}

/// Monte Carlo consistency: exact combinatorial law, determinism,
/// monotonicity, enumeration agreement, and empirical duality.
pub fn dualitymc_suite(threads: usize) -> VerdictReport {
    let mut checks = Vec::new();

    // Exact per-configuration complement law on the duality geometry.
    {
        let spec = LatticeSpec::new(16, 17, 0.5, 0x5EED);
        let violations = (0..10_000u64)
            .filter(|t| !dual_complement(&sample_config(&spec, *t)))
            .count();
        checks.push(Check::new(
            "primal/dual complement law",
            "16x17, p=1/2, 10^4 configurations",
            violations as f64,
            0.0,
        ));
    }

    // Thread-count invariance.
    {
        let spec = LatticeSpec::new(64, 64, 0.5, 7);
        let a = estimate(&spec, Quantity::Horizontal, 2_000, 1);
        let b = estimate(&spec, Quantity::Horizontal, 2_000, 3);
        checks.push(Check::new(
            "estimate is thread-count invariant",
            "64x64, 2000 trials, 1 vs 3 threads",
            (a.successes as f64 - b.successes as f64).abs(),
            0.0,
        ));
    }

    // Monotonicity in p with 3-sigma separation.
    {
        let trials = 10_000u64;
        let est =
            |p: f64| estimate(&LatticeSpec::new(64, 64, p, 11), Quantity::Horizontal, trials, threads);
        let lo = est(0.45);
        let mid = est(0.5);
        let hi = est(0.55);
        for (a, b, label) in [(lo, mid, "0.45 vs 0.5"), (mid, hi, "0.5 vs 0.55")] {
            let pooled = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
            let shortfall = (3.0 * pooled - (b.p_hat - a.p_hat)).max(0.0);
            checks.push(Check::new(
                "crossing frequency increases with p",
                format!("64x64, 10^4 trials, p {label}"),
                shortfall,
                1e-12,
            ));
        }
    }

    // Sampler vs exhaustive enumeration on a small lattice.
    {
        let exact = exhaustive_crossing_probability(3, 2, 0.5, Quantity::Horizontal);
        let spec = LatticeSpec::new(3, 2, 0.5, 13);
        let trials = 20_000u64;
        let est = estimate(&spec, Quantity::Horizontal, trials, threads);
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        checks.push(Check::new(
            "sampler matches exhaustive enumeration",
            format!("3x2, p=1/2, exact={exact:.6}"),
            (est.p_hat - exact).abs(),
            4.0 * sigma,
        ));
    }

    // Empirical duality on the exact geometry pair near r = 2.
    {
        let spec = LatticeSpec::new(33, 17, 0.5, 2024);
        let pair = spec.dual_pair_spec();
        let trials = 100_000u64;
        let a = estimate(&spec, Quantity::Horizontal, trials, threads);
        let b = estimate(&pair, Quantity::Horizontal, trials, threads);
        let pooled = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        checks.push(Check::new(
            "empirical duality of the geometry pair",
            "33x17 with 18x32, p=1/2, 10^5 trials",
            (a.p_hat + b.p_hat - 1.0).abs(),
            3.0 * pooled,
        ));
    }

    // Frequencies against the continuum formulas at moderate size.
    {
        let trials = 20_000u64;
        let spec = LatticeSpec::new(64, 64, 0.5, 5150);
        let est = estimate(&spec, Quantity::Horizontal, trials, threads);
        checks.push(Check::new(
            "horizontal frequency vs formula",
            "64x64, p=1/2, 2x10^4 trials, target 1/2",
            (est.p_hat - 0.5).abs(),
            (3.0 * est.stderr).max(0.01),
        ));
        let est = estimate(&spec, Quantity::HorizontalAndVertical, trials, threads);
        let formula = horizontal_and_vertical_with(1.0, Method::Hypergeometric)
            .map(|v| v.value)
            .unwrap_or(f64::NAN);
        checks.push(Check::new(
            "hv frequency vs formula",
            format!("64x64, p=1/2, 2x10^4 trials, target {formula:.6}"),
            (est.p_hat - formula).abs(),
            (3.0 * est.stderr).max(0.015),
        ));
    }

    VerdictReport::new("dualitymc", checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fast_suites_pass() {
        for name in ["duality", "routes", "modular", "thm3", "ode", "partition"] {
            let report = run_suite(name, None, 2).unwrap();
            assert!(
                report.overall,
                "suite {name} failed:\n{}",
                report.render_text()
            );
        }
    }

    #[test]
    fn unknown_suite_is_none() {
        assert!(run_suite("nope", None, 1).is_none());
    }

    #[test]
    fn tolerance_override_applies() {
        let report = run_suite("duality", Some(1e-30), 1).unwrap();
        assert!(!report.overall, "impossible tolerance must fail");
        assert!(report.checks.iter().all(|c| c.tolerance == 1e-30));
    }

    #[test]
    fn mc_suite_passes() {
        let report = run_suite("dualitymc", None, 2).unwrap();
        assert!(report.overall, "{}", report.render_text());
    }
}
