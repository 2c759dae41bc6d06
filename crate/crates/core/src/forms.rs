//! The specific modular objects of the rectangle-crossing problem, as exact
//! q-expansions: Dedekind eta at three scales, Jacobi theta, the level-2
//! Hauptmodul and its derivative, the weight-2 forms driving the crossing
//! integrals, and the parametrized eta-quotient family behind their
//! generalization.
//!
//! All series are in `qh = e^{pi i tau}`; `q = qh^2`.

use num_traits::Zero;

use crate::error::QSeriesError;
use crate::qseries::QExpansion;
use crate::rational::{is_integer, rat, rat_int, Rat};

/// Argument scale for the eta function: eta(s tau) with s in {1/2, 1, 2}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EtaScale {
    Half,
    One,
    Two,
}

impl EtaScale {
    pub fn as_rat(self) -> Rat {
        match self {
            EtaScale::Half => rat(1, 2),
            EtaScale::One => rat_int(1),
            EtaScale::Two => rat_int(2),
        }
    }
}

/// `eta(s tau)` as a qh-series with leading exponent `s/12`.
///
/// Computed from the sparse pentagonal-number sum
/// `sum_{n in Z} (-1)^n q^{(6n+1)^2/24}`, which costs O(order * sqrt(order))
/// instead of the dense product's O(order^2). The product form survives only
/// as a test oracle.
pub fn eta(scale: EtaScale, order: usize) -> QExpansion {
    assert!(order >= 1, "eta needs order >= 1");
    // In qh, eta(s tau) = qh^{s/12} * sum_n (-1)^n qh^{s n (3n+1)}.
    // The offset s*n(3n+1) is a nonnegative integer for every scale here.
    let (num, den) = match scale {
        EtaScale::Half => (1i64, 2i64),
        EtaScale::One => (1, 1),
        EtaScale::Two => (2, 1),
    };
    let mut terms = Vec::new();
    let mut n: i64 = 0;
    loop {
        let mut hit = false;
        for m in [n, -n - 1] {
            let pent = m * (3 * m + 1); // always even
            let offset = pent * num / den;
            debug_assert_eq!(pent * num % den, 0);
            if (offset as usize) < order {
                let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
                terms.push((offset as usize, rat_int(sign)));
                hit = true;
            }
        }
        if !hit && n > 0 {
            break;
        }
        n += 1;
    }
    QExpansion::from_sparse(scale.as_rat() / rat_int(12), &terms, order)
}

/// Jacobi theta constants as qh-series.
///
/// `theta2 = sum q^{(n+1/2)^2/2}` (leading `2 qh^{1/4}`),
/// `theta3 = sum q^{n^2/2}` (leading 1).
pub fn theta(kind: u8, order: usize) -> QExpansion {
    assert!(order >= 1, "theta needs order >= 1");
    match kind {
        2 => {
            // Exponents (2n+1)^2/4 = 1/4 + n(n+1); n and -n-1 pair up.
            let mut terms = Vec::new();
            let mut n: i64 = 0;
            loop {
                let offset = n * (n + 1);
                if offset as usize >= order {
                    break;
                }
                terms.push((offset as usize, rat_int(2)));
                n += 1;
            }
            QExpansion::from_sparse(rat(1, 4), &terms, order)
        }
        3 => {
            let mut terms = vec![(0usize, rat_int(1))];
            let mut n: i64 = 1;
            loop {
                let offset = n * n;
                if offset as usize >= order {
                    break;
                }
                terms.push((offset as usize, rat_int(2)));
                n += 1;
            }
            QExpansion::from_sparse(Rat::zero(), &terms, order)
        }
        k => panic!("theta kind must be 2 or 3, got {k}"),
    }
}

/// A symbolic eta quotient `prod_s eta(s tau)^{p_s}`, `s in {1/2, 1, 2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaQuotient {
    factors: Vec<(EtaScale, Rat)>,
}

impl EtaQuotient {
    /// Build from `(scale, power)` factors; scales must be distinct.
    pub fn new(factors: Vec<(EtaScale, Rat)>) -> Self {
        for (i, (s, _)) in factors.iter().enumerate() {
            for (t, _) in &factors[i + 1..] {
                assert!(s != t, "duplicate eta scale in quotient");
            }
        }
        EtaQuotient { factors }
    }

    pub fn factors(&self) -> &[(EtaScale, Rat)] {
        &self.factors
    }

    /// Leading qh-exponent `sum_s s * p_s / 12` of the compiled series.
    pub fn leading_exponent(&self) -> Rat {
        self.factors
            .iter()
            .map(|(s, p)| s.as_rat() * p / rat_int(12))
            .sum()
    }

    /// Expand to a truncated qh-series.
    pub fn compile(&self, order: usize) -> Result<QExpansion, QSeriesError> {
        let mut acc = QExpansion::one(order);
        for (scale, power) in &self.factors {
            let base = eta(*scale, order);
            let factor = if is_integer(power) {
                let n: i64 = power.numer().try_into().map_err(|_| {
                    QSeriesError::ParseRational(format!("eta power {power} out of range"))
                })?;
                base.powi(n)?
            } else {
                base.powr(power)?
            };
            acc = acc.mul(&factor);
        }
        Ok(acc)
    }
}

/// The three classical presentations of the level-2 Hauptmodul; all compile
/// to the identical series `16 qh - 128 qh^2 + 704 qh^3 - ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaForm {
    /// `16 eta(tau/2)^8 eta(2tau)^16 / eta(tau)^24`
    EtaSixteen,
    /// `1 - eta(tau/2)^16 eta(2tau)^8 / eta(tau)^24`
    OneMinusComplement,
    /// `(theta2/theta3)^4`
    ThetaRatio,
}

/// Hauptmodul series for the chosen presentation.
pub fn lambda_form(form: LambdaForm, order: usize) -> QExpansion {
    assert!(order >= 3, "lambda needs order >= 3");
    match form {
        LambdaForm::EtaSixteen => EtaQuotient::new(vec![
            (EtaScale::Half, rat_int(8)),
            (EtaScale::Two, rat_int(16)),
            (EtaScale::One, rat_int(-24)),
        ])
        .compile(order)
        .expect("integer eta powers compile")
        .scale(&rat_int(16)),
        LambdaForm::OneMinusComplement => {
            // One extra coefficient: the constant terms cancel, costing a
            // window slot.
            let quot = EtaQuotient::new(vec![
                (EtaScale::Half, rat_int(16)),
                (EtaScale::Two, rat_int(8)),
                (EtaScale::One, rat_int(-24)),
            ])
            .compile(order + 1)
            .expect("integer eta powers compile");
            QExpansion::one(order + 1)
                .sub(&quot)
                .expect("integral exponent lattice")
        }
        LambdaForm::ThetaRatio => theta(2, order)
            .div(&theta(3, order))
            .expect("theta3 is a unit")
            .powi(4)
            .expect("fourth power"),
    }
}

/// Hauptmodul series (canonical presentation).
pub fn lambda(order: usize) -> QExpansion {
    lambda_form(LambdaForm::EtaSixteen, order)
}

/// `(1/(2 pi i)) * lambda'(tau) = 8 eta(tau/2)^16 eta(2tau)^16 / eta(tau)^28`,
/// the series `8 qh - 128 qh^2 + 1056 qh^3 + ...`.
pub fn lambda_prime(order: usize) -> QExpansion {
    assert!(order >= 3, "lambda_prime needs order >= 3");
    EtaQuotient::new(vec![
        (EtaScale::Half, rat_int(16)),
        (EtaScale::Two, rat_int(16)),
        (EtaScale::One, rat_int(-28)),
    ])
    .compile(order)
    .expect("integer eta powers compile")
    .scale(&rat_int(8))
}

/// The parametrized eta quotient
/// `h_gamma = eta(tau)^{20-48g} / (eta(tau/2) eta(2tau))^{8-24g}`,
/// a conformal block of dimension `gamma`: its series starts at `qh^gamma`.
///
/// `h_{1/3}` is the weight-2 form `f1 = eta^4`; `h_{2/3}` is the integrand
/// `f3`; `h_{beta-alpha}` is the inner integrand of the generalized
/// two-block crossing formulas.
pub fn h_block(gamma: &Rat, order: usize) -> Result<QExpansion, QSeriesError> {
    if order < 1 {
        return Err(QSeriesError::OrderTooSmall(1));
    }
    let top = rat_int(20) - rat_int(48) * gamma;
    let side = -(rat_int(8) - rat_int(24) * gamma);
    EtaQuotient::new(vec![
        (EtaScale::One, top),
        (EtaScale::Half, side.clone()),
        (EtaScale::Two, side),
    ])
    .compile(order)
}

/// The weight-2 modular form `f1 = eta(tau)^4` (leading exponent 1/3).
pub fn f1(order: usize) -> QExpansion {
    eta(EtaScale::One, order).powi(4).expect("fourth power")
}

/// `f3 = eta(tau/2)^8 eta(2tau)^8 / eta(tau)^12` (leading exponent 2/3),
/// the integrand whose tail integral produces `f2`.
pub fn f3(order: usize) -> QExpansion {
    EtaQuotient::new(vec![
        (EtaScale::Half, rat_int(8)),
        (EtaScale::Two, rat_int(8)),
        (EtaScale::One, rat_int(-12)),
    ])
    .compile(order)
    .expect("integer eta powers compile")
}

/// The second solution `f2(tau) = (2 pi / 3) f1(tau) * integral_tau^inf f3`,
/// expressed on the imaginary axis; all coefficients are rational and the
/// series starts at `qh`.
pub fn f2(order: usize) -> QExpansion {
    let tail = f3(order)
        .tail_integral()
        .expect("f3 has positive leading exponent");
    f1(order)
        .mul(&tail)
        .scale(&rat(2, 3))
        .scale_pi(1) // cancels the tail integral's 1/pi exactly
}

/// Watts's series `f_W = (theta2^4/16 - f2)/16`, an even function of qh
/// starting at `q = qh^2` with coefficients `1/5, 16/55, 364/935, ...`.
pub fn f_w(order: usize) -> QExpansion {
    let t2_4 = theta(2, order).powi(4).expect("fourth power");
    t2_4.scale(&rat(1, 16))
        .sub(&f2(order))
        .expect("same lattice")
        .scale(&rat(1, 16))
}

/// Named series kinds exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    Eta,
    Theta2,
    Theta3,
    Lambda,
    LambdaPrime,
    F1,
    F2,
    F3,
    FW,
    H,
}

impl SeriesKind {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "eta" => SeriesKind::Eta,
            "theta2" => SeriesKind::Theta2,
            "theta3" => SeriesKind::Theta3,
            "lambda" => SeriesKind::Lambda,
            "lambda_prime" => SeriesKind::LambdaPrime,
            "f1" => SeriesKind::F1,
            "f2" => SeriesKind::F2,
            "f3" => SeriesKind::F3,
            "fW" | "fw" => SeriesKind::FW,
            "h" => SeriesKind::H,
            _ => return None,
        })
    }

    /// Generate the series; `gamma` is required (and only used) for `H`.
    ///
    /// `order` counts retained coefficients in the series' natural
    /// variable: `q = qh^2` for the even Watts series, `qh` elsewhere.
    pub fn generate(self, order: usize, gamma: Option<&Rat>) -> Result<QExpansion, QSeriesError> {
        Ok(match self {
            SeriesKind::Eta => eta(EtaScale::One, order),
            SeriesKind::Theta2 => theta(2, order),
            SeriesKind::Theta3 => theta(3, order),
            SeriesKind::Lambda => lambda(order),
            SeriesKind::LambdaPrime => lambda_prime(order),
            SeriesKind::F1 => f1(order),
            SeriesKind::F2 => f2(order),
            SeriesKind::F3 => f3(order),
            SeriesKind::FW => f_w(2 * order),
            SeriesKind::H => {
                let gamma = gamma.ok_or_else(|| {
                    QSeriesError::ParseSeries("kind h requires a gamma parameter".into())
                })?;
                h_block(gamma, order)?
            }
        })
    }
}
