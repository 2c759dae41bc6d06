//! Exact truncated power series in the nome `qh = e^{pi i tau}`.
//!
//! Every modular object handled by this crate is represented as a
//! [`QExpansion`]: a rational leading exponent, a window of exact rational
//! coefficients at unit exponent steps, and an integer power of pi carried
//! as a global prefactor so that tail integrals stay exact.
//!
//! Objects that are really series in `q = qh^2` are stored as qh-series
//! with vanishing odd coefficients; [`QExpansion::even_part`] and
//! [`QExpansion::odd_part`] split along that parity.

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::QSeriesError;
use crate::rational::{format_rat, is_integer, parse_rat, rat_int, rat_powi, Rat};

/// Default number of retained coefficients for library-level constructors.
pub const DEFAULT_ORDER: usize = 64;

/// Truncated series `pi^pi_pow * sum_n coeffs[n] * qh^(leading + n)`.
///
/// Invariants maintained by every constructor and operation:
/// - a nonzero series has `coeffs[0] != 0`;
/// - the zero series is canonically `leading = 0, coeffs = [], pi_pow = 0`;
/// - arithmetic truncates to the window both operands can vouch for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    leading: Rat,
    coeffs: Vec<Rat>,
    pi_pow: i64,
}

impl QExpansion {
    /// The canonical zero series.
    pub fn zero() -> Self {
        QExpansion {
            leading: Rat::zero(),
            coeffs: Vec::new(),
            pi_pow: 0,
        }
    }

    /// The constant series 1 with `order` retained coefficients.
    pub fn one(order: usize) -> Self {
        Self::constant(Rat::one(), order)
    }

    /// The constant series `c` with `order` retained coefficients.
    pub fn constant(c: Rat, order: usize) -> Self {
        Self::monomial(Rat::zero(), c, order)
    }

    /// `c * qh^exponent`, retaining `order` coefficients from the exponent up.
    pub fn monomial(exponent: Rat, c: Rat, order: usize) -> Self {
        if c.is_zero() || order == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![Rat::zero(); order];
        coeffs[0] = c;
        QExpansion {
            leading: exponent,
            coeffs,
            pi_pow: 0,
        }
    }

    /// Build from raw parts, normalizing to the canonical form.
    pub fn from_parts(leading: Rat, coeffs: Vec<Rat>, pi_pow: i64) -> Self {
        let mut s = QExpansion {
            leading,
            coeffs,
            pi_pow,
        };
        s.normalize();
        s
    }

    /// Sparse construction: `(offset, coefficient)` pairs relative to `leading`.
    /// Offsets at or beyond `order` are dropped; repeated offsets accumulate.
    pub fn from_sparse(leading: Rat, terms: &[(usize, Rat)], order: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); order];
        for (offset, c) in terms {
            if *offset < order {
                coeffs[*offset] += c;
            }
        }
        Self::from_parts(leading, coeffs, 0)
    }

    fn normalize(&mut self) {
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            *self = Self::zero();
            return;
        }
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.leading += rat_int(lead_zeros as i64);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the first retained power of qh.
    pub fn leading(&self) -> &Rat {
        &self.leading
    }

    /// Number of retained coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Power of pi carried as a global prefactor (0 for plain series).
    pub fn pi_pow(&self) -> i64 {
        self.pi_pow
    }

    /// Coefficient of `qh^(leading + n)`.
    pub fn coeff(&self, n: usize) -> &Rat {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Exponent of the `n`-th retained coefficient.
    pub fn exponent(&self, n: usize) -> Rat {
        &self.leading + rat_int(n as i64)
    }

    /// Coefficient of `qh^e`. `Some(0)` for exponents known to be absent
    /// (below the leading term or off the exponent lattice), `None` for
    /// exponents beyond the truncation window.
    pub fn coeff_at(&self, e: &Rat) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        let gap = e - &self.leading;
        if !is_integer(&gap) || gap.is_negative() {
            return Some(Rat::zero());
        }
        let n: usize = gap.numer().try_into().ok()?;
        self.coeffs.get(n).cloned()
    }

    /// Keep at most `order` coefficients.
    pub fn truncated(&self, order: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(order);
        s.normalize();
        s
    }

    /// Multiply every coefficient by the rational scalar `c`.
    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        QExpansion {
            leading: self.leading.clone(),
            coeffs,
            pi_pow: self.pi_pow,
        }
    }

    /// Multiply by `pi^k` (tracked exactly in the prefactor).
    pub fn scale_pi(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut s = self.clone();
        s.pi_pow += k;
        s
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    /// Sum, truncated to the window both operands can vouch for.
    pub fn add(&self, other: &Self) -> Result<Self, QSeriesError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_pow != other.pi_pow {
            return Err(QSeriesError::PiPowerMismatch(self.pi_pow, other.pi_pow));
        }
        let gap = &self.leading - &other.leading;
        if !is_integer(&gap) {
            return Err(QSeriesError::IncompatibleLeading(format_rat(&gap)));
        }
        // Order so that `lo` has the smaller leading exponent.
        let (lo, hi, shift) = if gap.is_negative() {
            let d: usize = (-gap.numer().clone()).try_into().expect("shift fits usize");
            (self, other, d)
        } else {
            let d: usize = gap.numer().clone().try_into().expect("shift fits usize");
            (other, self, d)
        };
        let len = lo.coeffs.len().min(shift.saturating_add(hi.coeffs.len()));
        let mut coeffs = Vec::with_capacity(len);
        for n in 0..len {
            let mut c = lo.coeffs[n].clone();
            if n >= shift {
                if let Some(h) = hi.coeffs.get(n - shift) {
                    c += h;
                }
            }
            coeffs.push(c);
        }
        Ok(Self::from_parts(lo.leading.clone(), coeffs, lo.pi_pow))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QSeriesError> {
        self.add(&other.neg())
    }

    /// Product, truncated to `min(order, order)` relative coefficients.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![Rat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(len - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::from_parts(
            &self.leading + &other.leading,
            coeffs,
            self.pi_pow + other.pi_pow,
        )
    }

    /// Quotient; the divisor must be a nonzero series.
    pub fn div(&self, other: &Self) -> Result<Self, QSeriesError> {
        let inv = other.powi(-1)?;
        Ok(self.mul(&inv))
    }

    /// Integer power (negative allowed for nonzero series).
    pub fn powi(&self, n: i64) -> Result<Self, QSeriesError> {
        if self.is_zero() {
            return if n > 0 {
                Ok(Self::zero())
            } else if n == 0 {
                Ok(Self::one(1))
            } else {
                Err(QSeriesError::DivisionByZero)
            };
        }
        if n == 0 {
            return Ok(Self::one(self.order()));
        }
        let c0 = self.coeffs[0].clone();
        let unit = self.unit_part();
        let powed = miller_pow(&unit, &rat_int(n), self.order());
        let scale = rat_powi(&c0, n);
        let leading = &self.leading * rat_int(n);
        Ok(Self::from_parts(leading, powed, self.pi_pow * n).scale(&scale))
    }

    /// Rational power. Non-integer exponents require the normalized leading
    /// coefficient to be exactly 1 (true for every eta quotient here).
    pub fn powr(&self, s: &Rat) -> Result<Self, QSeriesError> {
        if is_integer(s) {
            let n: i64 = s.numer().try_into().map_err(|_| {
                QSeriesError::ParseRational(format!("exponent {} out of range", format_rat(s)))
            })?;
            return self.powi(n);
        }
        if self.is_zero() {
            return if s.is_positive() {
                Ok(Self::zero())
            } else {
                Err(QSeriesError::DivisionByZero)
            };
        }
        if self.pi_pow != 0 {
            return Err(QSeriesError::PiPowerFractional(self.pi_pow));
        }
        if !self.coeffs[0].is_one() {
            return Err(QSeriesError::NonUnitLeading(format_rat(&self.coeffs[0])));
        }
        let powed = miller_pow(&self.unit_part(), s, self.order());
        Ok(Self::from_parts(&self.leading * s, powed, 0))
    }

    /// Coefficients of `self / (c0 qh^leading)`, a unit series `1 + w`.
    fn unit_part(&self) -> Vec<Rat> {
        let c0 = &self.coeffs[0];
        self.coeffs.iter().map(|c| c / c0).collect()
    }

    /// Termwise primitive realizing `r -> integral_r^inf f(it) dt` on the
    /// imaginary axis: `a_n qh^m ->  (a_n / (pi m)) qh^m`. Requires every
    /// retained exponent positive, i.e. a strictly positive leading exponent.
    pub fn tail_integral(&self) -> Result<Self, QSeriesError> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if !self.leading.is_positive() {
            return Err(QSeriesError::NonpositiveLeadingExponent(format_rat(
                &self.leading,
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c / self.exponent(n))
            .collect();
        Ok(Self::from_parts(
            self.leading.clone(),
            coeffs,
            self.pi_pow - 1,
        ))
    }

    /// Termwise `d/dr` along `tau = ir`: `a_n qh^m -> -pi m a_n qh^m`.
    pub fn r_derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| -(c * self.exponent(n)))
            .collect();
        Self::from_parts(self.leading.clone(), coeffs, self.pi_pow + 1)
    }

    /// Termwise `(1/(2 pi i)) d/dtau`: `a_n qh^m -> (m/2) a_n qh^m`.
    pub fn tau_derivative_normalized(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * self.exponent(n) / rat_int(2))
            .collect();
        Self::from_parts(self.leading.clone(), coeffs, self.pi_pow)
    }

    /// Terms whose qh-exponent is even (a series in `q = qh^2`).
    /// Requires an integer leading exponent.
    pub fn even_part(&self) -> Result<Self, QSeriesError> {
        self.parity_part(0)
    }

    /// Terms whose qh-exponent is odd. Requires an integer leading exponent.
    pub fn odd_part(&self) -> Result<Self, QSeriesError> {
        self.parity_part(1)
    }

    fn parity_part(&self, parity: u8) -> Result<Self, QSeriesError> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if !is_integer(&self.leading) {
            return Err(QSeriesError::NonIntegerLeading(format_rat(&self.leading)));
        }
        let base: i64 = self.leading.numer().try_into().expect("leading fits i64");
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if (base + n as i64).rem_euclid(2) == parity as i64 {
                    c.clone()
                } else {
                    Rat::zero()
                }
            })
            .collect();
        Ok(Self::from_parts(self.leading.clone(), coeffs, self.pi_pow))
    }

    /// True when every retained odd-exponent coefficient vanishes.
    pub fn is_even_in_qh(&self) -> Result<bool, QSeriesError> {
        Ok(self.odd_part()?.is_zero())
    }

    /// True when every retained even-exponent coefficient vanishes.
    pub fn is_odd_in_qh(&self) -> Result<bool, QSeriesError> {
        Ok(self.even_part()?.is_zero())
    }
}

/// Coefficients of `(1 + w)^s` to `order` terms, where `unit[0] = 1`.
///
/// Classical power recurrence: `n f_n = sum_{k=1}^{n} ((s+1)k - n) u_k f_{n-k}`,
/// exact over the rationals.
fn miller_pow(unit: &[Rat], s: &Rat, order: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); order];
    if order == 0 {
        return out;
    }
    out[0] = Rat::one();
    let s_plus_1 = s + Rat::one();
    for n in 1..order {
        let n_rat = rat_int(n as i64);
        let mut acc = Rat::zero();
        for k in 1..=n.min(unit.len() - 1) {
            let u = &unit[k];
            if u.is_zero() {
                continue;
            }
            let w = &s_plus_1 * rat_int(k as i64) - &n_rat;
            if !w.is_zero() {
                acc += w * u * &out[n - k];
            }
        }
        out[n] = acc / n_rat;
    }
    out
}

impl std::fmt::Display for QExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.pi_pow != 0 {
            write!(f, "pi^{} * (", self.pi_pow)?;
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.exponent(n);
            if first {
                write!(f, "{}", format_rat(c))?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}", format_rat(&-c.clone()))?;
            } else {
                write!(f, " + {}", format_rat(c))?;
            }
            if !e.is_zero() {
                write!(f, "*qh^{}", format_rat(&e))?;
            }
        }
        write!(f, " + O(qh^{})", format_rat(&self.exponent(self.order())))?;
        if self.pi_pow != 0 {
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct QExpansionWire {
    leading: String,
    coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "is_zero_i64")]
    pi_pow: i64,
}

fn is_zero_i64(v: &i64) -> bool {
    *v == 0
}

impl Serialize for QExpansion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        QExpansionWire {
            leading: format_rat(&self.leading),
            coeffs: self.coeffs.iter().map(format_rat).collect(),
            pi_pow: self.pi_pow,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QExpansion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = QExpansionWire::deserialize(deserializer)?;
        let leading = parse_rat(&wire.leading).map_err(D::Error::custom)?;
        let coeffs = wire
            .coeffs
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(QExpansion::from_parts(leading, coeffs, wire.pi_pow))
    }
}

impl QExpansion {
    /// JSON form `{"leading": "p/q", "coeffs": ["p/q", ...]}`.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("series serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, QSeriesError> {
        serde_json::from_str(s).map_err(|e| QSeriesError::ParseSeries(e.to_string()))
    }

    /// RFC 4180 CSV with one `(exponent, numerator, denominator)` row per
    /// retained coefficient (zero coefficients included so the window
    /// round-trips bit-exactly). Plain series only (`pi_pow = 0`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("exponent,numerator,denominator\r\n");
        for (n, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\r\n",
                format_rat(&self.exponent(n)),
                c.numer(),
                c.denom()
            ));
        }
        out
    }

    pub fn from_csv(s: &str) -> Result<Self, QSeriesError> {
        let mut leading: Option<Rat> = None;
        let mut coeffs = Vec::new();
        for (i, line) in s.lines().map(str::trim_end).enumerate() {
            if i == 0 || line.is_empty() {
                continue; // header
            }
            let mut fields = line.split(',');
            let (e, num, den) = match (fields.next(), fields.next(), fields.next(), fields.next())
            {
                (Some(e), Some(n), Some(d), None) => (e, n, d),
                _ => return Err(QSeriesError::ParseSeries(format!("bad CSV row {i}"))),
            };
            let e = parse_rat(e)?;
            let c = parse_rat(&format!("{}/{}", num.trim(), den.trim()))?;
            match &leading {
                None => leading = Some(e),
                Some(l) => {
                    let expect = l + rat_int(coeffs.len() as i64);
                    if e != expect {
                        return Err(QSeriesError::ParseSeries(format!(
                            "non-contiguous exponent {} (expected {})",
                            format_rat(&e),
                            format_rat(&expect)
                        )));
                    }
                }
            }
            coeffs.push(c);
        }
        Ok(Self::from_parts(
            leading.unwrap_or_else(Rat::zero),
            coeffs,
            0,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn poly(leading: i64, coeffs: &[i64]) -> QExpansion {
        QExpansion::from_parts(
            rat_int(leading),
            coeffs.iter().map(|&c| rat_int(c)).collect(),
            0,
        )
    }

    #[test]
    fn difference_of_squares() {
        let order = 8;
        let a = QExpansion::from_sparse(Rat::zero(), &[(0, rat_int(1)), (1, rat_int(-1))], order);
        let b = QExpansion::from_sparse(Rat::zero(), &[(0, rat_int(1)), (1, rat_int(1))], order);
        let prod = a.mul(&b);
        let expect =
            QExpansion::from_sparse(Rat::zero(), &[(0, rat_int(1)), (2, rat_int(-1))], order);
        assert_eq!(prod, expect);
    }

    #[test]
    fn mul_truncates_to_common_window() {
        let a = poly(0, &[1, 1, 1, 1, 1, 1]);
        let b = poly(0, &[1, 2, 3]);
        assert_eq!(a.mul(&b).order(), 3);
    }

    #[test]
    fn add_with_exponent_shift() {
        let a = QExpansion::monomial(rat(1, 3), rat_int(2), 4); // 2 qh^{1/3} + O(qh^{13/3})
        let b = QExpansion::monomial(rat(7, 3), rat_int(5), 4); // 5 qh^{7/3}
        let sum = a.add(&b).unwrap();
        assert_eq!(sum.leading(), &rat(1, 3));
        assert_eq!(sum.coeff(0), &rat_int(2));
        assert_eq!(sum.coeff(2), &rat_int(5));
    }

    #[test]
    fn add_rejects_fractional_gap() {
        let a = QExpansion::monomial(rat(1, 3), rat_int(1), 4);
        let b = QExpansion::monomial(rat(1, 2), rat_int(1), 4);
        assert!(matches!(
            a.add(&b),
            Err(QSeriesError::IncompatibleLeading(_))
        ));
    }

    #[test]
    fn cancellation_shrinks_window() {
        let a = poly(0, &[1, 2, 3, 4]);
        let b = poly(0, &[1, 2, 7, 11]);
        let d = a.sub(&b).unwrap();
        assert_eq!(d.leading(), &rat_int(2));
        assert_eq!(d.order(), 2);
        assert_eq!(d.coeff(0), &rat_int(-4));
        let z = a.sub(&a).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn division_round_trip() {
        let a = poly(1, &[2, -3, 5, 7, -1, 4]);
        let b = poly(-2, &[3, 1, -4, 2, 9, -5]);
        let q = a.div(&b).unwrap();
        let back = q.mul(&b);
        assert_eq!(back, a.truncated(back.order()));
        assert!(matches!(
            a.div(&QExpansion::zero()),
            Err(QSeriesError::DivisionByZero)
        ));
    }

    #[test]
    fn integer_pow_matches_repeated_multiplication() {
        let a = poly(1, &[2, -1, 3, 0, 5, -2, 1, 4]);
        let mut acc = QExpansion::one(a.order());
        for _ in 0..5 {
            acc = acc.mul(&a);
        }
        assert_eq!(a.powi(5).unwrap(), acc);
        let inv = a.powi(-3).unwrap();
        assert_eq!(
            inv.mul(&a.powi(3).unwrap()),
            QExpansion::one(a.order()).truncated(inv.order())
        );
    }

    #[test]
    fn rational_pow_matches_binomial_series() {
        // (1 + qh)^{1/2} against the explicit binomial coefficients.
        let a = QExpansion::from_sparse(Rat::zero(), &[(0, rat_int(1)), (1, rat_int(1))], 10);
        let half = a.powr(&rat(1, 2)).unwrap();
        let mut binom = Rat::one();
        for n in 0..10usize {
            assert_eq!(half.coeff(n), &binom, "binomial coefficient at {n}");
            let next = &rat(1, 2) - rat_int(n as i64);
            binom = binom * next / rat_int(n as i64 + 1);
        }
        // Squaring recovers the original.
        assert_eq!(half.powi(2).unwrap(), a);
    }

    #[test]
    fn rational_pow_requires_unit_leading() {
        let a = QExpansion::monomial(Rat::zero(), rat_int(2), 4);
        assert!(matches!(
            a.powr(&rat(1, 2)),
            Err(QSeriesError::NonUnitLeading(_))
        ));
    }

    #[test]
    fn tail_integral_single_term() {
        // qh^{2/3} integrates to (3/(2 pi)) qh^{2/3}.
        let f = QExpansion::monomial(rat(2, 3), rat_int(1), 1);
        let t = f.tail_integral().unwrap();
        assert_eq!(t.coeff(0), &rat(3, 2));
        assert_eq!(t.pi_pow(), -1);
        assert_eq!(t.leading(), &rat(2, 3));
    }

    #[test]
    fn tail_integral_rejects_nonpositive_leading() {
        let f = QExpansion::monomial(Rat::zero(), rat_int(1), 3);
        assert!(f.tail_integral().is_err());
        let g = QExpansion::monomial(rat(-1, 2), rat_int(1), 3);
        assert!(g.tail_integral().is_err());
    }

    #[test]
    fn tail_integral_is_linear() {
        let f = QExpansion::from_parts(rat(1, 3), vec![rat_int(1), rat(2, 5), rat_int(-3)], 0);
        let g = QExpansion::from_parts(rat(1, 3), vec![rat(1, 2), rat_int(4), rat(7, 3)], 0);
        let lhs = f
            .scale(&rat_int(3))
            .add(&g.scale(&rat_int(-2)))
            .unwrap()
            .tail_integral()
            .unwrap();
        let rhs = f
            .tail_integral()
            .unwrap()
            .scale(&rat_int(3))
            .add(&g.tail_integral().unwrap().scale(&rat_int(-2)))
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn r_derivative_inverts_tail_integral() {
        let f = QExpansion::from_parts(
            rat(2, 3),
            vec![rat_int(1), rat_int(-8), rat(32, 7), rat_int(5)],
            0,
        );
        assert_eq!(f.tail_integral().unwrap().r_derivative(), f.neg());
    }

    #[test]
    fn parity_split() {
        let f = poly(1, &[1, 2, 3, 4, 5]); // exponents 1..5
        let even = f.even_part().unwrap();
        let odd = f.odd_part().unwrap();
        assert_eq!(even.leading(), &rat_int(2));
        assert_eq!(even.coeff(0), &rat_int(2));
        assert_eq!(odd.leading(), &rat_int(1));
        assert_eq!(odd.coeff(0), &rat_int(1));
        assert_eq!(even.add(&odd).unwrap(), f);
        let frac = QExpansion::monomial(rat(1, 4), rat_int(1), 2);
        assert!(frac.even_part().is_err());
    }

    #[test]
    fn json_round_trip_examples() {
        let f = QExpansion::from_parts(rat(1, 12), vec![rat_int(1), rat(16, 55), rat_int(0)], 0);
        let s = f.to_json_string();
        assert_eq!(QExpansion::from_json_str(&s).unwrap(), f);
        assert!(s.contains("\"leading\":\"1/12\""));
        assert!(!s.contains("pi_pow"));
        let t = f.tail_integral().unwrap();
        let s2 = t.to_json_string();
        assert!(s2.contains("\"pi_pow\":-1"));
        assert_eq!(QExpansion::from_json_str(&s2).unwrap().pi_pow(), -1);
    }

    #[test]
    fn csv_round_trip_keeps_zero_rows() {
        let f = QExpansion::from_parts(rat(1, 3), vec![rat_int(2), rat_int(0), rat(-7, 5)], 0);
        let csv = f.to_csv();
        assert!(csv.starts_with("exponent,numerator,denominator\r\n"));
        assert_eq!(csv.lines().count(), 4);
        assert_eq!(QExpansion::from_csv(&csv).unwrap(), f);
    }

    fn small_series() -> impl Strategy<Value = QExpansion> {
        (
            -4i64..=4,
            proptest::collection::vec((-9i64..=9, 1i64..=5), 1..6),
        )
            .prop_map(|(lead2, pairs)| {
                QExpansion::from_parts(
                    rat(lead2, 2),
                    pairs.into_iter().map(|(p, q)| rat(p, q)).collect(),
                    0,
                )
            })
    }

    proptest! {
        #[test]
        fn serialization_round_trips(f in small_series()) {
            prop_assert_eq!(QExpansion::from_json_str(&f.to_json_string()).unwrap(), f.clone());
            prop_assert_eq!(QExpansion::from_csv(&f.to_csv()).unwrap(), f);
        }

        #[test]
        fn multiplication_distributes(a in small_series(), b in small_series(), c in small_series()) {
            // Force a common exponent lattice so sums are defined.
            let b = QExpansion::from_parts(a.leading().clone(), b.coeffs().to_vec(), 0);
            let c = QExpansion::from_parts(a.leading().clone(), c.coeffs().to_vec(), 0);
            let lhs = a.add(&b).unwrap().mul(&c);
            let rhs = a.mul(&c).add(&b.mul(&c)).unwrap();
            let n = lhs.order().min(rhs.order());
            prop_assert_eq!(lhs.truncated(n), rhs.truncated(n));
        }

        #[test]
        fn powi_additive_in_exponent(a in small_series()) {
            let p = a.mul(&a).mul(&a);
            prop_assert_eq!(a.powi(3).unwrap(), p);
        }
    }
}
