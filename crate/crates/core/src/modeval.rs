//! Numerical evaluation of q-expansions and modular objects in the upper
//! half-plane, with domain reduction on the imaginary axis and an empirical
//! truncation-error bound.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::EvalError;
use crate::forms::{self, EtaScale};
use crate::gamma::gamma_third;
use crate::qseries::{QExpansion, DEFAULT_ORDER};
use crate::quad::tanh_sinh;
use crate::rational::rat_to_f64;

/// Largest admissible |qh| for direct series evaluation.
pub const QH_LIMIT: f64 = 0.9;

/// A point `tau` with `Im(tau) > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlanePoint {
    tau: Complex64,
}

impl HalfPlanePoint {
    pub fn new(tau: Complex64) -> Result<Self, EvalError> {
        if tau.im <= 0.0 || !tau.im.is_finite() {
            return Err(EvalError::NotUpperHalfPlane(tau.im));
        }
        Ok(HalfPlanePoint { tau })
    }

    /// `tau = i r` for an aspect ratio `r > 0`.
    pub fn from_aspect(r: f64) -> Result<Self, EvalError> {
        Self::new(Complex64::new(0.0, r))
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// The nome `qh = e^{pi i tau}`.
    pub fn qh(&self) -> Complex64 {
        (Complex64::i() * PI * self.tau).exp()
    }

    /// True when `tau` lies on the imaginary axis (within rounding).
    pub fn on_imaginary_axis(&self) -> bool {
        self.tau.re.abs() <= 1e-12 * self.tau.im.max(1.0)
    }

    /// The image under `S: tau -> -1/tau`.
    pub fn s_image(&self) -> Self {
        HalfPlanePoint {
            tau: -self.tau.inv(),
        }
    }

    /// The image under `T^2: tau -> tau + 2`.
    pub fn t2_image(&self) -> Self {
        HalfPlanePoint {
            tau: self.tau + 2.0,
        }
    }
}

/// A numerical value plus an estimated truncation error.
#[derive(Clone, Copy, Debug)]
pub struct EvalResult {
    pub value: Complex64,
    pub tail_bound: f64,
}

impl EvalResult {
    fn exact(value: Complex64) -> Self {
        EvalResult {
            value,
            tail_bound: 0.0,
        }
    }
}

/// Evaluate a q-expansion at `tau`, including its pi prefactor.
///
/// The tail bound estimates the per-step growth rate of the trailing
/// retained coefficients and bounds the dropped tail by the geometric series
/// `|last term| * rho |qh| / (1 - rho |qh|)`; a non-convergent estimate
/// (`rho |qh| >= 1`) is an error.
pub fn eval_series(f: &QExpansion, at: HalfPlanePoint) -> Result<EvalResult, EvalError> {
    if f.is_zero() {
        return Ok(EvalResult::exact(Complex64::new(0.0, 0.0)));
    }
    let qh = at.qh();
    let q_abs = qh.norm();
    if q_abs >= QH_LIMIT {
        return Err(EvalError::NomeTooLarge(q_abs));
    }

    // Horner from the top in qh.
    let mut acc = Complex64::new(0.0, 0.0);
    for c in f.coeffs().iter().rev() {
        acc = acc * qh + Complex64::new(rat_to_f64(c), 0.0);
    }
    let lead = rat_to_f64(f.leading());
    // qh^alpha := e^{alpha pi i tau}, single-valued by construction.
    let lead_pow = (Complex64::i() * PI * at.tau() * lead).exp();
    let pi_factor = PI.powi(f.pi_pow() as i32);
    let value = acc * lead_pow * pi_factor;

    // Constants and single monomials evaluate exactly.
    let nonzero_count = f
        .coeffs()
        .iter()
        .filter(|c| !num_traits::Zero::is_zero(*c))
        .count();
    if nonzero_count == 1 {
        return Ok(EvalResult::exact(value));
    }

    let (rho, anchor) = trailing_envelope(f);
    if rho * q_abs >= 1.0 {
        return Err(EvalError::TailNotConvergent);
    }
    // First dropped term is at exponent lead + order; bound the tail by the
    // geometric envelope from there.
    let first_dropped = anchor * q_abs.powf(lead + f.order() as f64) * pi_factor.abs();
    let tail_bound = first_dropped / (1.0 - rho * q_abs);
    Ok(EvalResult { value, tail_bound })
}

/// Geometric envelope of the trailing coefficients: per-step growth rate
/// `rho` and a magnitude anchor projected to the first dropped index.
///
/// Individual coefficient ratios are useless here (these series have
/// near-cancelling coefficients next to large ones), so the rate comes from
/// the peak magnitudes of the last two half-windows of 8 coefficients.
fn trailing_envelope(f: &QExpansion) -> (f64, f64) {
    let coeffs = f.coeffs();
    let n = coeffs.len();
    let mag = |i: usize| rat_to_f64(&coeffs[i]).abs();

    // Grow the window until both halves contain a nonzero coefficient
    // (sparse theta-like series need wider windows).
    let mut half = 8.min(n / 2).max(1);
    loop {
        let start = n - (2 * half).min(n);
        let mid = n - half;
        let m1 = (start..mid).map(mag).fold(0.0, f64::max);
        let m2 = (mid..n).map(mag).fold(0.0, f64::max);
        if m1 > 0.0 && m2 > 0.0 {
            let rho = (m2 / m1).powf(1.0 / half as f64);
            // Project the peak of the last half-window to the series end;
            // never project a decaying envelope upward-in-confidence.
            let anchor = m2 * rho.max(1.0).powf(half as f64);
            return (rho, anchor);
        }
        if 2 * half >= n {
            // Fewer than two nonzero peaks in the whole series: treat the
            // coefficients as flat (safe for sparse bounded series).
            let peak = (0..n).map(mag).fold(0.0, f64::max);
            return (1.0, peak);
        }
        half = (half * 2).min(n / 2);
    }
}

pub(crate) fn lambda_series_cached() -> &'static QExpansion {
    static CACHE: OnceLock<QExpansion> = OnceLock::new();
    CACHE.get_or_init(|| forms::lambda(DEFAULT_ORDER))
}

pub(crate) fn f1_series_cached() -> &'static QExpansion {
    static CACHE: OnceLock<QExpansion> = OnceLock::new();
    CACHE.get_or_init(|| forms::f1(DEFAULT_ORDER))
}

pub(crate) fn f2_series_cached() -> &'static QExpansion {
    static CACHE: OnceLock<QExpansion> = OnceLock::new();
    CACHE.get_or_init(|| forms::f2(DEFAULT_ORDER))
}

/// The Hauptmodul at `tau`.
///
/// Policy: `Im(tau) >= 1` evaluates the series directly; below that the
/// imaginary axis is folded through `lambda(i/r) = 1 - lambda(ir)`, and
/// off-axis points are rejected. On the axis the value lies in (0, 1).
pub fn eval_lambda(at: HalfPlanePoint) -> Result<EvalResult, EvalError> {
    let tau = at.tau();
    if tau.im >= 1.0 {
        return eval_series(lambda_series_cached(), at);
    }
    if at.on_imaginary_axis() {
        let folded = eval_series(lambda_series_cached(), at.s_image())?;
        return Ok(EvalResult {
            value: Complex64::new(1.0, 0.0) - folded.value,
            tail_bound: folded.tail_bound,
        });
    }
    Err(EvalError::OffAxisBelowUnitHeight(tau.im))
}

/// Hauptmodul on the imaginary axis as a real number.
pub fn lambda_at_aspect(r: f64) -> Result<f64, EvalError> {
    Ok(eval_lambda(HalfPlanePoint::from_aspect(r)?)?.value.re)
}

/// The weight-2 form `f1 = eta^4` at `tau` (exact rational series).
pub fn eval_f1(at: HalfPlanePoint) -> Result<EvalResult, EvalError> {
    eval_series(f1_series_cached(), at)
}

/// The second-order form `f2` at `tau` (exact rational series).
pub fn eval_f2(at: HalfPlanePoint) -> Result<EvalResult, EvalError> {
    eval_series(f2_series_cached(), at)
}

/// `eta(scale * tau)` evaluated pointwise from the pentagonal-number sum,
/// independent of the q-expansion machinery's truncation window.
pub fn eta_point(scale: EtaScale, tau: Complex64) -> Complex64 {
    let s = match scale {
        EtaScale::Half => 0.5,
        EtaScale::One => 1.0,
        EtaScale::Two => 2.0,
    };
    // eta(s tau) = sum_n (-1)^n e^{pi i tau s (6n+1)^2 / 12}
    let base = Complex64::i() * PI * tau * (s / 12.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut n: i64 = 0;
    loop {
        let mut contrib = 0.0;
        for m in [n, -n - 1] {
            let e = ((6 * m + 1) * (6 * m + 1)) as f64;
            let term = (base * e).exp();
            let signed = if m.rem_euclid(2) == 0 { term } else { -term };
            sum += signed;
            contrib += term.norm();
        }
        n += 1;
        if n > 1 && contrib < 1e-18 * sum.norm().max(f64::MIN_POSITIVE) {
            break;
        }
        if n > 10_000 {
            break;
        }
    }
    sum
}

/// `f1 = eta(tau)^4` pointwise.
pub fn f1_point(tau: Complex64) -> Complex64 {
    eta_point(EtaScale::One, tau).powu(4)
}

/// `f3 = eta(tau/2)^8 eta(2tau)^8 / eta(tau)^12` pointwise.
pub fn f3_point(tau: Complex64) -> Complex64 {
    let half = eta_point(EtaScale::Half, tau).powu(8);
    let two = eta_point(EtaScale::Two, tau).powu(8);
    let one = eta_point(EtaScale::One, tau).powu(12);
    half * two / one
}

/// The eta-quotient block `h_gamma(i t)` on the imaginary axis, pointwise.
/// All three eta values are real and positive there, so real powers are
/// branch-unambiguous.
pub fn h_point_axis(gamma: f64, t: f64) -> f64 {
    let tau = Complex64::new(0.0, t);
    let one = eta_point(EtaScale::One, tau).re;
    let half = eta_point(EtaScale::Half, tau).re;
    let two = eta_point(EtaScale::Two, tau).re;
    one.powf(20.0 - 48.0 * gamma) / (half * two).powf(8.0 - 24.0 * gamma)
}

/// `f2(tau)` by direct numerical quadrature of its defining integral
/// (vertical ray from `tau`), used as an independent oracle against the
/// exact-series route.
pub fn f2_quadrature(tau: Complex64, upper: f64) -> Complex64 {
    // integral_tau^{i inf} f3(z) dz = i * integral_0^upper f3(tau + i s) ds
    // (the integrand decays like e^{-2 pi s / 3}; `upper` ~ 40 suffices).
    let integral = tanh_sinh(
        |s, _, _| f3_point(tau + Complex64::new(0.0, s)).re,
        0.0,
        upper,
        1e-14,
    );
    let integral_im = tanh_sinh(
        |s, _, _| f3_point(tau + Complex64::new(0.0, s)).im,
        0.0,
        upper,
        1e-14,
    );
    let tail = Complex64::i() * Complex64::new(integral.value, integral_im.value);
    let minus_two_pi_i_over_3 = Complex64::new(0.0, -2.0 * PI / 3.0);
    minus_two_pi_i_over_3 * f1_point(tau) * tail
}

/// The constant `C = 2^{1/3} pi^2 / (3 Gamma(1/3)^3)` controlling the
/// failure of `f2` to be modular under `S`.
pub fn second_order_constant() -> f64 {
    2.0_f64.powf(1.0 / 3.0) * PI * PI / (3.0 * gamma_third().powi(3))
}

/// Which transformation-law residual to measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    /// `|tau^{-2} f1(-1/tau) + f1(tau)|` (weight-2 law with S-sign).
    F1S,
    /// `|tau^{-2} f2(-1/tau) - f2(tau) + C f1(tau)|` (second-order law).
    F2S,
    /// Max-norm residual of the vector-valued law under both `T^2` and `S`.
    VectorST,
}

/// Residual of the stated transformation law at `tau`; 0 means the law holds.
pub fn check_transformation(kind: TransformKind, at: HalfPlanePoint) -> Result<f64, EvalError> {
    let tau = at.tau();
    let s_at = at.s_image();
    let tau_m2 = tau.powi(-2);
    match kind {
        TransformKind::F1S => {
            let f1_tau = eval_f1(at)?.value;
            let f1_s = eval_f1(s_at)?.value;
            Ok((tau_m2 * f1_s + f1_tau).norm())
        }
        TransformKind::F2S => {
            let c = second_order_constant();
            let f2_tau = eval_f2(at)?.value;
            let f1_tau = eval_f1(at)?.value;
            let f2_s = eval_f2(s_at)?.value;
            Ok((tau_m2 * f2_s - f2_tau + c * f1_tau).norm())
        }
        TransformKind::VectorST => {
            let c = second_order_constant();
            let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
            let t2_at = at.t2_image();
            let f1_tau = eval_f1(at)?.value;
            let f2_tau = eval_f2(at)?.value;
            let f1_t2 = eval_f1(t2_at)?.value;
            let f2_t2 = eval_f2(t2_at)?.value;
            let f1_s = eval_f1(s_at)?.value;
            let f2_s = eval_f2(s_at)?.value;
            let res = [
                (f1_t2 - omega * f1_tau).norm(),
                (f2_t2 - f2_tau).norm(),
                (tau_m2 * f1_s + f1_tau).norm(),
                (tau_m2 * f2_s - f2_tau + c * f1_tau).norm(),
            ];
            Ok(res.into_iter().fold(0.0, f64::max))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int, Rat};

    fn at(re: f64, im: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn constant_series_is_exact() {
        let one = QExpansion::one(8);
        let r = eval_series(&one, at(0.3, 1.7)).unwrap();
        assert_eq!(r.value, Complex64::new(1.0, 0.0));
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn rejects_large_nome_and_lower_half_plane() {
        assert!(HalfPlanePoint::new(Complex64::new(0.0, -1.0)).is_err());
        let f = QExpansion::one(4);
        let shallow = at(0.0, 0.02); // |qh| = e^{-0.02 pi} ~ 0.94
        assert!(matches!(
            eval_series(&f, shallow),
            Err(EvalError::NomeTooLarge(_))
        ));
    }

    #[test]
    fn theta3_matches_direct_lattice_sum() {
        // Oracle: truncated sum over n of q^{n^2 / 2} at tau = 2i.
        let tau = Complex64::new(0.0, 2.0);
        let q = (Complex64::i() * 2.0 * PI * tau).exp();
        let mut oracle = Complex64::new(1.0, 0.0);
        for n in 1..=20 {
            oracle += 2.0 * q.powf((n * n) as f64 / 2.0);
        }
        let series = forms::theta(3, 64);
        let got = eval_series(&series, at(0.0, 2.0)).unwrap().value;
        assert!((got - oracle).norm() < 1e-12);
    }

    #[test]
    fn f1_series_matches_eta_product_oracle() {
        // Oracle: eta(i) from the literal product q^{1/24} prod (1 - q^n).
        let q: f64 = (-2.0 * PI).exp();
        let mut eta = q.powf(1.0 / 24.0);
        for n in 1..200 {
            eta *= 1.0 - q.powi(n);
        }
        let got = eval_f1(at(0.0, 1.0)).unwrap().value.re;
        assert!(((got - eta.powi(4)) / eta.powi(4)).abs() < 1e-12);
    }

    #[test]
    fn eta_point_agrees_with_series_eval() {
        let tau = Complex64::new(0.27, 1.15);
        let series = forms::eta(EtaScale::Half, 64);
        let via_series = eval_series(&series, HalfPlanePoint::new(tau).unwrap())
            .unwrap()
            .value;
        let direct = eta_point(EtaScale::Half, tau);
        assert!((via_series - direct).norm() < 1e-13);
    }

    #[test]
    fn lambda_fixed_point_and_duality() {
        let half = eval_lambda(at(0.0, 1.0)).unwrap().value.re;
        assert!((half - 0.5).abs() < 1e-12);
        let a = lambda_at_aspect(2.0).unwrap();
        let b = lambda_at_aspect(0.5).unwrap();
        assert!((a + b - 1.0).abs() < 1e-12);
        // lambda -> 0 as r -> infinity
        assert!(lambda_at_aspect(8.0).unwrap() < 1e-9);
    }

    #[test]
    fn lambda_monotone_in_unit_interval() {
        let mut prev = 1.0;
        for k in 0..100 {
            let r = 0.1 + (10.0 - 0.1) * k as f64 / 99.0;
            let v = lambda_at_aspect(r).unwrap();
            assert!(v > 0.0 && v < 1.0, "lambda({r}) = {v}");
            assert!(v < prev, "not decreasing at r = {r}");
            prev = v;
        }
    }

    #[test]
    fn lambda_off_axis_policy() {
        assert!(eval_lambda(at(0.4, 1.3)).is_ok());
        assert!(matches!(
            eval_lambda(at(0.4, 0.7)),
            Err(EvalError::OffAxisBelowUnitHeight(_))
        ));
    }

    #[test]
    fn lambda_prime_consistency_with_finite_differences() {
        // d/dr lambda(ir) = -2 pi * [lambda'/(2 pi i)](ir)
        let r = 1.3;
        let h = 1e-4;
        let fd = (lambda_at_aspect(r + h).unwrap() - lambda_at_aspect(r - h).unwrap()) / (2.0 * h);
        let series = forms::lambda_prime(DEFAULT_ORDER);
        let lp = eval_series(&series, at(0.0, r)).unwrap().value.re;
        let expect = -2.0 * PI * lp;
        assert!(
            ((fd - expect) / expect).abs() < 1e-6,
            "fd {fd} vs {expect}"
        );
    }

    #[test]
    fn f2_series_vs_quadrature_oracle() {
        for im in [0.8, 1.5, 3.0] {
            let tau = Complex64::new(0.0, im);
            let series = eval_f2(HalfPlanePoint::new(tau).unwrap()).unwrap().value;
            let quad = f2_quadrature(tau, 40.0);
            assert!(
                (series - quad).norm() < 1e-9 * series.norm().max(1e-3),
                "Im = {im}: {series} vs {quad}"
            );
        }
    }

    #[test]
    fn f2_is_two_periodic() {
        let base = at(0.3, 1.1);
        let shifted = base.t2_image();
        let a = eval_f2(base).unwrap().value;
        let b = eval_f2(shifted).unwrap().value;
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn f2_over_f1_at_s_fixed_point() {
        // S fixes i, forcing f2(i)/f1(i) = C/2.
        let i = at(0.0, 1.0);
        let ratio = eval_f2(i).unwrap().value / eval_f1(i).unwrap().value;
        let expect = second_order_constant() / 2.0;
        assert!((ratio.re - expect).abs() < 1e-9);
        assert!(ratio.im.abs() < 1e-12);
    }

    #[test]
    fn transformation_residuals() {
        // S fixes i and f1|S = -f1: residual identically 0 up to rounding.
        assert!(check_transformation(TransformKind::F1S, at(0.0, 1.0)).unwrap() < 1e-14);
        // Off the fixed point the laws still hold to series accuracy.
        assert!(check_transformation(TransformKind::F1S, at(0.0, 1.7)).unwrap() < 1e-10);
        assert!(check_transformation(TransformKind::F2S, at(0.4, 1.3)).unwrap() < 1e-8);
        assert!(check_transformation(TransformKind::VectorST, at(0.0, 1.2)).unwrap() < 1e-10);
    }

    #[test]
    fn f1_t_character() {
        // f1(tau + 1) = e^{pi i/3} f1(tau): the block starts at qh^{1/3}.
        let tau = Complex64::new(0.2, 1.4);
        let lhs = eval_f1(HalfPlanePoint::new(tau + 1.0).unwrap()).unwrap().value;
        let rhs =
            Complex64::from_polar(1.0, PI / 3.0) * eval_f1(HalfPlanePoint::new(tau).unwrap()).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn tail_bound_is_honest_for_lambda() {
        // Compare order-24 evaluation against order-64 recomputation; the
        // claimed bound must cover the actual truncation error.
        let small = forms::lambda(24);
        let big = forms::lambda(DEFAULT_ORDER);
        for r in [1.0, 1.5, 2.5] {
            let p = at(0.0, r);
            let coarse = eval_series(&small, p).unwrap();
            let fine = eval_series(&big, p).unwrap();
            let actual = (coarse.value - fine.value).norm();
            assert!(
                actual <= coarse.tail_bound * 1.001 + 1e-16,
                "r = {r}: actual {actual} vs bound {}",
                coarse.tail_bound
            );
        }
    }

    #[test]
    fn tail_bound_flags_divergence() {
        // A geometric series with ratio 2 cannot be bounded at |qh| > 1/2.
        let f = QExpansion::from_parts(
            rat_int(0),
            (0..20).map(|n| rat(1 << n.min(62), 1)).collect::<Vec<Rat>>(),
            0,
        );
        let shallow = at(0.0, 0.1); // |qh| ~ 0.73
        assert!(matches!(
            eval_series(&f, shallow),
            Err(EvalError::TailNotConvergent)
        ));
    }
}
