//! Rectangle crossing probabilities by three independent routes, for the
//! percolation case and the generalized two-parameter family, plus the
//! universal partition-function factor.
//!
//! Routes:
//! - hypergeometric series in the cross-ratio `lambda`,
//! - singular algebraic integrals over `lambda`,
//! - eta-quotient tail integrals in the aspect ratio `r` (exact rational
//!   series evaluated on the imaginary axis).
//!
//! Aspect ratios below 1 fold through the functional equations; the
//! `*_direct` variants skip that folding so verification suites can test
//! the functional equations instead of assuming them.

use std::f64::consts::PI;

use crate::error::CrossingError;
use crate::forms;
use crate::gamma::{gamma, gamma_third};
use crate::hyp::{hyp2f1, hyp3f2};
use crate::modeval::{
    self, eval_series, h_point_axis, lambda_at_aspect, HalfPlanePoint,
};
use crate::qseries::{QExpansion, DEFAULT_ORDER};
use crate::quad::{singular_integral, tanh_sinh};
use crate::rational::{rat, rat_int, rat_to_f64, Rat};

/// Computational route for a crossing value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Hypergeometric,
    LambdaIntegral,
    EtaIntegral,
}

impl Method {
    pub const ALL: [Method; 3] = [
        Method::Hypergeometric,
        Method::LambdaIntegral,
        Method::EtaIntegral,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "hyp" | "hypergeometric" => Method::Hypergeometric,
            "lambda" | "lambda_integral" => Method::LambdaIntegral,
            "eta" | "eta_integral" => Method::EtaIntegral,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Hypergeometric => "hypergeometric",
            Method::LambdaIntegral => "lambda_integral",
            Method::EtaIntegral => "eta_integral",
        }
    }
}

/// A crossing probability with its route and an estimated numerical error.
#[derive(Clone, Copy, Debug)]
pub struct CrossingValue {
    pub value: f64,
    pub method: Method,
    pub est_error: f64,
}

fn validate_aspect(r: f64) -> Result<(), CrossingError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(CrossingError::NonpositiveAspect(r))
    }
}

fn lambda_of(r: f64) -> Result<f64, CrossingError> {
    Ok(lambda_at_aspect(r)?)
}

// ---------------------------------------------------------------------------
// Horizontal crossing (weight alpha = 1/3 specialization)
// ---------------------------------------------------------------------------

/// Prefactor of the hypergeometric presentation: `2 pi sqrt(3) / Gamma(1/3)^3`.
fn cardy_hyp_const() -> f64 {
    2.0 * PI * 3.0_f64.sqrt() / gamma_third().powi(3)
}

/// Prefactor of the lambda-integral presentation: `2 pi / (sqrt(3) Gamma(1/3)^3)`.
fn cardy_int_const() -> f64 {
    2.0 * PI / (3.0_f64.sqrt() * gamma_third().powi(3))
}

/// Prefactor of the eta-integral presentation: `2^{7/3} pi^2 / (sqrt(3) Gamma(1/3)^3)`.
fn cardy_eta_const() -> f64 {
    2.0_f64.powf(7.0 / 3.0) * PI * PI / (3.0_f64.sqrt() * gamma_third().powi(3))
}

/// Horizontal crossing probability at aspect ratio `r`.
///
/// For `r < 1` the value is produced through the duality relation
/// `P(r) = 1 - P(1/r)` rather than by summing slowly-converging series
/// near `lambda = 1`.
pub fn horizontal(r: f64, method: Method) -> Result<CrossingValue, CrossingError> {
    validate_aspect(r)?;
    if r < 1.0 {
        let dual = horizontal(1.0 / r, method)?;
        return Ok(CrossingValue {
            value: 1.0 - dual.value,
            ..dual
        });
    }
    horizontal_direct(r, method)
}

/// Horizontal crossing probability without the duality fold; every route
/// evaluates at `r` itself. Intended for verifying the functional equations.
pub fn horizontal_direct(r: f64, method: Method) -> Result<CrossingValue, CrossingError> {
    validate_aspect(r)?;
    match method {
        Method::Hypergeometric => {
            let lam = lambda_of(r)?;
            let f = hyp2f1(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, lam)?;
            let value = cardy_hyp_const() * lam.powf(1.0 / 3.0) * f;
            Ok(CrossingValue {
                value,
                method,
                est_error: 2e-15 * value.abs(),
            })
        }
        Method::LambdaIntegral => {
            let lam = lambda_of(r)?;
            let quad = singular_integral(1.0 / 3.0, 0.0, lam)?;
            let c = cardy_int_const();
            Ok(CrossingValue {
                value: c * quad.value,
                method,
                est_error: c * quad.est_error + 1e-15 * quad.value.abs(),
            })
        }
        Method::EtaIntegral => {
            let tail = modeval::f1_series_cached()
                .tail_integral()
                .expect("f1 leading exponent 1/3 > 0");
            let at = HalfPlanePoint::from_aspect(r)?;
            let ev = eval_series(&tail, at)?;
            let c = cardy_eta_const();
            Ok(CrossingValue {
                value: c * ev.value.re,
                method,
                est_error: c * ev.tail_bound + 1e-15 * ev.value.re.abs(),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Horizontal-but-no-vertical crossing
// ---------------------------------------------------------------------------

/// Horizontal-but-no-vertical crossing probability at aspect ratio `r`.
///
/// For `r < 1`: `P(r) = P(1/r) + 1 - 2 P_h(1/r)`, the reflection implied by
/// the two functional equations.
pub fn horizontal_no_vertical(r: f64, method: Method) -> Result<CrossingValue, CrossingError> {
    validate_aspect(r)?;
    if r < 1.0 {
        let s = 1.0 / r;
        let mirrored = horizontal_no_vertical(s, method)?;
        let h = horizontal_direct(s, method)?;
        return Ok(CrossingValue {
            value: mirrored.value + 1.0 - 2.0 * h.value,
            method,
            est_error: mirrored.est_error + 2.0 * h.est_error,
        });
    }
    horizontal_no_vertical_direct(r, method)
}

/// As [`horizontal_no_vertical`], without the reflection fold.
pub fn horizontal_no_vertical_direct(
    r: f64,
    method: Method,
) -> Result<CrossingValue, CrossingError> {
    validate_aspect(r)?;
    match method {
        Method::Hypergeometric => {
            let lam = lambda_of(r)?;
            let f = hyp3f2(1.0, 1.0, 4.0 / 3.0, 2.0, 5.0 / 3.0, lam)?;
            let value = 3.0_f64.sqrt() / (2.0 * PI) * lam * f;
            Ok(CrossingValue {
                value,
                method,
                est_error: 2e-15 * value.abs(),
            })
        }
        Method::LambdaIntegral => {
            let lam = lambda_of(r)?;
            // Nested singular quadrature of the double integral.
            let outer = tanh_sinh(
                |t, d_lo, _| {
                    let inner = singular_integral(2.0 / 3.0, 0.0, t)
                        .map(|q| q.value)
                        .unwrap_or(0.0);
                    let left = d_lo;
                    (left * (1.0 - t)).powf(-2.0 / 3.0) * inner
                },
                0.0,
                lam,
                5e-13,
            );
            let c = 1.0 / (3.0_f64.sqrt() * PI);
            Ok(CrossingValue {
                value: c * outer.value,
                method,
                est_error: c * outer.est_error + 1e-13 * outer.value.abs(),
            })
        }
        Method::EtaIntegral => {
            let tail = modeval::f2_series_cached()
                .tail_integral()
                .expect("f2 leading exponent 1 > 0");
            let at = HalfPlanePoint::from_aspect(r)?;
            let ev = eval_series(&tail, at)?;
            let c = 8.0 * 3.0_f64.sqrt();
            Ok(CrossingValue {
                value: c * ev.value.re,
                method,
                est_error: c * ev.tail_bound + 1e-15 * ev.value.re.abs(),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Horizontal-and-vertical crossing
// ---------------------------------------------------------------------------

/// Horizontal-and-vertical crossing probability: the difference of the two
/// quantities above, computed with the given route for both.
pub fn horizontal_and_vertical_with(
    r: f64,
    method: Method,
) -> Result<CrossingValue, CrossingError> {
    let h = horizontal(r, method)?;
    let hv_bar = horizontal_no_vertical(r, method)?;
    Ok(CrossingValue {
        value: h.value - hv_bar.value,
        method,
        est_error: h.est_error + hv_bar.est_error,
    })
}

/// [`horizontal_and_vertical_with`] on the default (hypergeometric) route.
pub fn horizontal_and_vertical(r: f64) -> Result<CrossingValue, CrossingError> {
    horizontal_and_vertical_with(r, Method::Hypergeometric)
}

/// Direct (unfolded) difference, for functional-equation verification.
pub fn horizontal_and_vertical_direct(
    r: f64,
    method: Method,
) -> Result<CrossingValue, CrossingError> {
    let h = horizontal_direct(r, method)?;
    let hv_bar = horizontal_no_vertical_direct(r, method)?;
    Ok(CrossingValue {
        value: h.value - hv_bar.value,
        method,
        est_error: h.est_error + hv_bar.est_error,
    })
}

// ---------------------------------------------------------------------------
// SLE family
// ---------------------------------------------------------------------------

/// Route selector for [`sle_crossing`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SleMethod {
    Hypergeometric,
    Integral,
}

fn validate_kappa(kappa: f64) -> Result<f64, CrossingError> {
    if !(kappa > 4.0 && kappa <= 8.0) {
        return Err(CrossingError::KappaOutOfRange(kappa));
    }
    Ok(1.0 - 4.0 / kappa)
}

/// Crossing probability of the SLE(kappa) family as a function of the
/// cross-ratio, normalized so the value at `lam = 1` is 1. `kappa = 6`
/// reduces to the percolation case.
pub fn sle_crossing(lam: f64, kappa: f64, method: SleMethod) -> Result<f64, CrossingError> {
    let alpha = validate_kappa(kappa)?;
    if !(lam > 0.0 && lam <= 1.0) {
        return Err(CrossingError::LambdaOutOfRange(lam));
    }
    match method {
        SleMethod::Hypergeometric => {
            let f = hyp2f1(alpha, 1.0 - alpha, 1.0 + alpha, lam)?;
            Ok(gamma(2.0 * alpha) / (gamma(alpha) * gamma(1.0 + alpha)) * lam.powf(alpha) * f)
        }
        SleMethod::Integral => {
            let quad = singular_integral(alpha, 0.0, lam)?;
            Ok(gamma(2.0 * alpha) / gamma(alpha).powi(2) * quad.value)
        }
    }
}

// ---------------------------------------------------------------------------
// Generalized one-parameter horizontal crossing
// ---------------------------------------------------------------------------

/// The block dimension parameter: exact rational (series route) or plain
/// float (pointwise-quadrature route).
#[derive(Clone, Debug, PartialEq)]
pub enum Alpha {
    Exact(Rat),
    Real(f64),
}

impl Alpha {
    pub fn value(&self) -> f64 {
        match self {
            Alpha::Exact(r) => rat_to_f64(r),
            Alpha::Real(x) => *x,
        }
    }
}

fn validate_alpha(alpha: f64) -> Result<(), CrossingError> {
    if alpha > 0.0 && alpha <= 0.5 {
        Ok(())
    } else {
        Err(CrossingError::AlphaOutOfRange(alpha))
    }
}

/// Upper integration cutoff for tails `~ e^{-pi a s}`: beyond it the
/// remainder is below 1e-18 of the leading scale.
fn tail_cutoff(a: f64) -> f64 {
    18.0 * std::f64::consts::LN_10 / (PI * a)
}

/// Generalized horizontal crossing probability with block dimension `alpha`
/// (`kappa = 4/(1-alpha)`), via the eta-quotient tail integral.
///
/// Rational `alpha` runs on the exact series; irrational `alpha` falls back
/// to pointwise quadrature of the same integrand.
pub fn horizontal_alpha(r: f64, alpha: &Alpha) -> Result<CrossingValue, CrossingError> {
    validate_aspect(r)?;
    let a = alpha.value();
    validate_alpha(a)?;
    let prefactor = 2.0_f64.powf(4.0 * a) * PI * gamma(2.0 * a) / gamma(a).powi(2);
    match alpha {
        Alpha::Exact(a_rat) => {
            let h = forms::h_block(a_rat, DEFAULT_ORDER)?;
            let tail = h.tail_integral()?;
            let ev = eval_series(&tail, HalfPlanePoint::from_aspect(r)?)?;
            Ok(CrossingValue {
                value: prefactor * ev.value.re,
                method: Method::EtaIntegral,
                est_error: prefactor * ev.tail_bound + 1e-15 * ev.value.re.abs(),
            })
        }
        Alpha::Real(_) => {
            let quad = tanh_sinh(|s, _, _| h_point_axis(a, r + s), 0.0, tail_cutoff(a), 1e-13);
            Ok(CrossingValue {
                value: prefactor * quad.value,
                method: Method::EtaIntegral,
                est_error: prefactor * quad.est_error,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Two-block family (the (alpha, beta) generalization of the hv quantities)
// ---------------------------------------------------------------------------

/// Parameters `(alpha, beta)` of the two-block crossing family;
/// `kappa = 4/(1-alpha)`. The percolation preset is `(1/3, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossingParams {
    alpha: f64,
    beta: f64,
    alpha_exact: Option<Rat>,
    beta_exact: Option<Rat>,
}

impl CrossingParams {
    pub fn from_rational(alpha: Rat, beta: Rat) -> Result<Self, CrossingError> {
        let a = rat_to_f64(&alpha);
        let b = rat_to_f64(&beta);
        Self::validate(a, b)?;
        Ok(CrossingParams {
            alpha: a,
            beta: b,
            alpha_exact: Some(alpha),
            beta_exact: Some(beta),
        })
    }

    pub fn from_real(alpha: f64, beta: f64) -> Result<Self, CrossingError> {
        Self::validate(alpha, beta)?;
        Ok(CrossingParams {
            alpha,
            beta,
            alpha_exact: None,
            beta_exact: None,
        })
    }

    /// `(alpha, beta) = (1/3, 1)`: critical percolation.
    pub fn percolation() -> Self {
        Self::from_rational(rat(1, 3), rat_int(1)).expect("preset is valid")
    }

    /// Derive `alpha = 1 - 4/kappa`, keeping the default `beta = 1`.
    pub fn from_kappa(kappa: f64) -> Result<Self, CrossingError> {
        let alpha = validate_kappa(kappa)?;
        Self::from_real(alpha, 1.0)
    }

    fn validate(alpha: f64, beta: f64) -> Result<(), CrossingError> {
        validate_alpha(alpha)?;
        if !(beta > 0.0 && beta <= 1.0) || beta == alpha {
            return Err(CrossingError::BetaOutOfRange(beta));
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kappa(&self) -> f64 {
        4.0 / (1.0 - self.alpha)
    }

    pub fn exact_pair(&self) -> Option<(&Rat, &Rat)> {
        self.alpha_exact.as_ref().zip(self.beta_exact.as_ref())
    }
}

/// The normalization constant of the two-block family:
/// `2^{4 beta + 1} pi^2 Gamma(2a) Gamma(2b-2a) / (Gamma(a)^2 Gamma(b-a)^2)`,
/// continued through gamma reflection for `beta < alpha`.
pub fn norm_constant(alpha: f64, beta: f64) -> Result<f64, CrossingError> {
    validate_alpha(alpha)?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(CrossingError::BetaOutOfRange(beta));
    }
    let g = beta - alpha;
    // Gamma poles: g or 2g a nonpositive integer.
    for v in [g, 2.0 * g] {
        if v <= 0.0 && v == v.floor() {
            return Err(CrossingError::GammaPole(g));
        }
    }
    Ok(2.0_f64.powf(4.0 * beta + 1.0) * PI * PI * gamma(2.0 * alpha) * gamma(2.0 * g)
        / (gamma(alpha).powi(2) * gamma(g).powi(2)))
}

/// Exact-series evaluator for the two-block quantities at fixed rational
/// parameters: builds the eta-quotient blocks once, then evaluates at any
/// aspect ratio.
///
/// The inner integral is realized as the termwise antiderivative of the
/// `h_{beta-alpha}` series with its constant fixed at the basepoint
/// (`u = 1` for the symmetric quantity, `u = infinity` for the other), the
/// outer one likewise after multiplying series.
pub struct TwoBlockEvaluator {
    c: f64,
    /// Tail primitive of `h_alpha` (pi_pow -1).
    tail_a: QExpansion,
    /// Value of the inner tail at the basepoint `r = 1`.
    inner_at_one: f64,
    /// Tail primitive of `h_alpha * tail(h_gamma)` (pi_pow -2).
    tail_ag: QExpansion,
}

impl TwoBlockEvaluator {
    pub fn new(params: &CrossingParams, order: usize) -> Result<Self, CrossingError> {
        let (alpha, beta) = params
            .exact_pair()
            .ok_or(CrossingError::RequiresBetaAboveAlpha(
                params.alpha(),
                params.beta(),
            ))?;
        if params.beta() <= params.alpha() {
            return Err(CrossingError::RequiresBetaAboveAlpha(
                params.alpha(),
                params.beta(),
            ));
        }
        let gamma_exact = beta - alpha;
        let c = norm_constant(params.alpha(), params.beta())?;
        let h_a = forms::h_block(alpha, order)?;
        let h_g = forms::h_block(&gamma_exact, order)?;
        let tail_g = h_g.tail_integral()?;
        let inner_at_one = eval_series(&tail_g, HalfPlanePoint::from_aspect(1.0)?)?
            .value
            .re;
        let tail_a = h_a.tail_integral()?;
        let tail_ag = h_a.mul(&tail_g).tail_integral()?;
        Ok(TwoBlockEvaluator {
            c,
            tail_a,
            inner_at_one,
            tail_ag,
        })
    }

    /// The symmetric quantity (generalizes horizontal-and-vertical):
    /// inner basepoint at `u = 1`.
    pub fn pi_minus(&self, r: f64) -> Result<CrossingValue, CrossingError> {
        validate_aspect(r)?;
        let at = HalfPlanePoint::from_aspect(r)?;
        let outer = eval_series(&self.tail_a, at)?;
        let nested = eval_series(&self.tail_ag, at)?;
        let value = self.c * (self.inner_at_one * outer.value.re - nested.value.re);
        Ok(CrossingValue {
            value,
            method: Method::EtaIntegral,
            est_error: self.c
                * (self.inner_at_one.abs() * outer.tail_bound + nested.tail_bound)
                + 1e-14 * value.abs(),
        })
    }

    /// The complementary quantity (generalizes horizontal-but-no-vertical):
    /// inner basepoint at `u = infinity`. Positive for `beta > alpha`.
    pub fn pi_two(&self, r: f64) -> Result<CrossingValue, CrossingError> {
        validate_aspect(r)?;
        let at = HalfPlanePoint::from_aspect(r)?;
        let nested = eval_series(&self.tail_ag, at)?;
        let value = self.c * nested.value.re;
        Ok(CrossingValue {
            value,
            method: Method::EtaIntegral,
            est_error: self.c * nested.tail_bound + 1e-14 * value.abs(),
        })
    }
}

/// Generalized horizontal-and-vertical quantity (exact-series route).
pub fn hv_general(r: f64, params: &CrossingParams) -> Result<CrossingValue, CrossingError> {
    TwoBlockEvaluator::new(params, DEFAULT_ORDER)?.pi_minus(r)
}

/// Generalized horizontal-but-no-vertical quantity (exact-series route).
pub fn hvbar_general(r: f64, params: &CrossingParams) -> Result<CrossingValue, CrossingError> {
    TwoBlockEvaluator::new(params, DEFAULT_ORDER)?.pi_two(r)
}

/// Oracle route for [`hv_general`]: nested singular quadrature of the
/// lambda-form double integral (inner basepoint at the self-dual point 1/2).
pub fn hv_general_quadrature(
    r: f64,
    params: &CrossingParams,
) -> Result<CrossingValue, CrossingError> {
    let (outer_val, outer_err) = two_block_outer_quadrature(r, params, InnerKind::FromHalf)?;
    let pref = two_block_lambda_prefactor(params);
    Ok(CrossingValue {
        value: pref * outer_val,
        method: Method::LambdaIntegral,
        est_error: pref * outer_err + 1e-12 * (pref * outer_val).abs(),
    })
}

/// Oracle route for [`hvbar_general`]: nested singular quadrature of the
/// lambda-form double integral (inner from 0).
pub fn hvbar_general_quadrature(
    r: f64,
    params: &CrossingParams,
) -> Result<CrossingValue, CrossingError> {
    let (outer_val, outer_err) = two_block_outer_quadrature(r, params, InnerKind::FromZero)?;
    let pref = two_block_lambda_prefactor(params);
    Ok(CrossingValue {
        value: pref * outer_val,
        method: Method::LambdaIntegral,
        est_error: pref * outer_err + 1e-12 * (pref * outer_val).abs(),
    })
}

fn two_block_lambda_prefactor(params: &CrossingParams) -> f64 {
    let a = params.alpha();
    let g = params.beta() - params.alpha();
    2.0 * gamma(2.0 * a) * gamma(2.0 * g) / (gamma(a).powi(2) * gamma(g).powi(2))
}

enum InnerKind {
    FromZero,
    FromHalf,
}

fn two_block_outer_quadrature(
    r: f64,
    params: &CrossingParams,
    inner: InnerKind,
) -> Result<(f64, f64), CrossingError> {
    validate_aspect(r)?;
    let a = params.alpha();
    let g = params.beta() - params.alpha();
    if g <= 0.0 {
        return Err(CrossingError::RequiresBetaAboveAlpha(a, params.beta()));
    }
    let lam = lambda_of(r)?;
    let inner_of = |t: f64| -> f64 {
        let j = match inner {
            InnerKind::FromZero => singular_integral(g, 0.0, t).map(|q| q.value),
            InnerKind::FromHalf => {
                if t < 0.5 {
                    singular_integral(g, t, 0.5).map(|q| q.value)
                } else if t > 0.5 {
                    singular_integral(g, 0.5, t).map(|q| -q.value)
                } else {
                    Ok(0.0)
                }
            }
        };
        j.unwrap_or(0.0)
    };
    let outer = tanh_sinh(
        |t, d_lo, _| (d_lo * (1.0 - t)).powf(a - 1.0) * inner_of(t),
        0.0,
        lam,
        5e-13,
    );
    Ok((outer.value, outer.est_error))
}

/// Generalized horizontal-but-no-vertical at `beta = 1`, where the family
/// collapses to a single generalized hypergeometric expression:
/// `(tan(pi a)/pi) ((1-2a)/(1-a)) lambda 3F2(1,1,2-2a; 2,2-a; lambda)`.
pub fn hvbar_beta_one(r: f64, alpha: f64) -> Result<CrossingValue, CrossingError> {
    validate_aspect(r)?;
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(CrossingError::AlphaOutOfRange(alpha));
    }
    let lam = lambda_of(r)?;
    let f = hyp3f2(1.0, 1.0, 2.0 - 2.0 * alpha, 2.0, 2.0 - alpha, lam)?;
    let pref = (PI * alpha).tan() / PI * (1.0 - 2.0 * alpha) / (1.0 - alpha);
    let value = pref * lam * f;
    Ok(CrossingValue {
        value,
        method: Method::Hypergeometric,
        est_error: 2e-15 * value.abs(),
    })
}

/// The prefactor of [`hvbar_beta_one`], exposed for identity checks
/// (at `alpha = 1/3` it reduces to `sqrt(3)/(2 pi)`).
pub fn hvbar_beta_one_prefactor(alpha: f64) -> f64 {
    (PI * alpha).tan() / PI * (1.0 - 2.0 * alpha) / (1.0 - alpha)
}

/// Generalized horizontal-but-no-vertical as a pure power series in the
/// cross-ratio (positive terms, no cancellation), used where a smooth,
/// machine-accurate `lambda -> value` map is needed.
pub fn hvbar_lambda_series(lam: f64, params: &CrossingParams) -> Result<f64, CrossingError> {
    if !(lam > 0.0 && lam < 1.0) {
        return Err(CrossingError::LambdaOutOfRange(lam));
    }
    let a = params.alpha();
    let b = params.beta();
    let g = b - a;
    if g <= 0.0 {
        return Err(CrossingError::RequiresBetaAboveAlpha(a, b));
    }
    let pref = two_block_lambda_prefactor(params);

    // Coefficients of (1-t)^{a-1} and of the inner primitive's expansion;
    // their Cauchy product integrates termwise against t^{b-1+m}.
    let mut a_coeffs: Vec<f64> = vec![1.0];
    let mut b_coeffs: Vec<f64> = vec![1.0 / g];
    let mut b_raw = 1.0;
    let mut sum = 0.0;
    let lam_b = lam.powf(b);
    let mut lam_m = 1.0;
    let max_terms = 100_000;
    for m in 0..max_terms {
        // Extend coefficient arrays to index m.
        if m > 0 {
            let i = (m - 1) as f64;
            let last_a = *a_coeffs.last().expect("nonempty");
            a_coeffs.push(last_a * (1.0 - a + i) / (i + 1.0));
            b_raw *= (1.0 - g + i) / (i + 1.0);
            b_coeffs.push(b_raw / (g + m as f64));
        }
        let mut d = 0.0;
        for j in 0..=m {
            d += a_coeffs[m - j] * b_coeffs[j];
        }
        let term = d * lam_b * lam_m / (b + m as f64);
        sum += term;
        if m > 4 && term.abs() < 1e-17 * sum.abs() {
            return Ok(pref * sum);
        }
        lam_m *= lam;
    }
    Err(CrossingError::HypNonConvergence {
        x: lam,
        terms: max_terms,
    })
}

// ---------------------------------------------------------------------------
// Differential-operator residual
// ---------------------------------------------------------------------------

/// Which computed quantity to push through the third-order operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdeQuantity {
    Horizontal,
    HorizontalNoVertical,
}

const ODE_STEP: f64 = 1e-3;

/// Finite-difference residual of the factored third-order operator
/// `d/dl (l(1-l))^{1+a-b} d/dl (l(1-l))^{1-a} d/dl F` applied to a computed
/// crossing function; solutions give residuals at the stencil-noise floor.
pub fn ode_residual(
    quantity: OdeQuantity,
    lam: f64,
    params: &CrossingParams,
) -> Result<f64, CrossingError> {
    match quantity {
        OdeQuantity::Horizontal => {
            let kappa = params.kappa();
            ode_residual_of(
                &|x| sle_crossing(x, kappa, SleMethod::Hypergeometric),
                lam,
                params,
            )
        }
        OdeQuantity::HorizontalNoVertical => {
            ode_residual_of(&|x| hvbar_lambda_series(x, params), lam, params)
        }
    }
}

/// As [`ode_residual`], for an arbitrary black-box function of the
/// cross-ratio (used to check the constant solution and linear combinations).
pub fn ode_residual_of(
    f: &dyn Fn(f64) -> Result<f64, CrossingError>,
    lam: f64,
    params: &CrossingParams,
) -> Result<f64, CrossingError> {
    let h = ODE_STEP;
    if !(lam > 0.05 && lam < 0.95) {
        return Err(CrossingError::LambdaNearEndpoint(lam));
    }
    let a = params.alpha();
    let b = params.beta();
    let weight_outer = |x: f64| (x * (1.0 - x)).powf(1.0 + a - b);
    let weight_inner = |x: f64| (x * (1.0 - x)).powf(1.0 - a);

    // f at x +- h and x +- 3h.
    let fm3 = f(lam - 3.0 * h)?;
    let fm1 = f(lam - h)?;
    let fp1 = f(lam + h)?;
    let fp3 = f(lam + 3.0 * h)?;

    // First derivative stage at x - 2h, x, x + 2h.
    let g1_m2 = weight_inner(lam - 2.0 * h) * (fm1 - fm3) / (2.0 * h);
    let g1_0 = weight_inner(lam) * (fp1 - fm1) / (2.0 * h);
    let g1_p2 = weight_inner(lam + 2.0 * h) * (fp3 - fp1) / (2.0 * h);

    // Second stage at x +- h.
    let g2_m1 = weight_outer(lam - h) * (g1_0 - g1_m2) / (2.0 * h);
    let g2_p1 = weight_outer(lam + h) * (g1_p2 - g1_0) / (2.0 * h);

    Ok(((g2_p1 - g2_m1) / (2.0 * h)).abs())
}

// ---------------------------------------------------------------------------
// Partition function
// ---------------------------------------------------------------------------

/// Rectangle sides, central charge, and the undetermined overall constant of
/// the universal partition-function factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionParams {
    pub l: f64,
    pub lp: f64,
    pub c: f64,
    pub scale_const: f64,
}

/// Universal rectangle partition-function factor
/// `Z = C l^{c/4} eta(i lp/l)^{-c/2}`.
pub fn partition_function(p: &PartitionParams) -> f64 {
    assert!(p.l > 0.0 && p.lp > 0.0, "rectangle sides must be positive");
    let eta = modeval::eta_point(
        forms::EtaScale::One,
        num_complex::Complex64::new(0.0, p.lp / p.l),
    )
    .re;
    p.scale_const * p.l.powf(p.c / 4.0) * eta.powf(-p.c / 2.0)
}
