//! Exact rational scalars used as q-expansion coefficients and exponents.
//!
//! `Rat` is an arbitrary-precision rational kept in lowest terms with a
//! positive denominator. Those invariants are maintained by the backing
//! implementation; this module adds the constructors, parsing, and
//! formatting conventions shared by the rest of the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

use crate::error::QSeriesError;

/// Arbitrary-precision rational number (always reduced, denominator > 0).
pub type Rat = BigRational;

/// `n` as an exact rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `p/q` as an exact rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "rational with zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `"p/q"` or `"p"` into a rational.
pub fn parse_rat(s: &str) -> Result<Rat, QSeriesError> {
    let s = s.trim();
    let make_err = || QSeriesError::ParseRational(s.to_string());
    match s.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).map_err(|_| make_err())?;
            let den = BigInt::from_str(den.trim()).map_err(|_| make_err())?;
            if den.is_zero() {
                return Err(make_err());
            }
            Ok(Rat::new(num, den))
        }
        None => {
            let num = BigInt::from_str(s).map_err(|_| make_err())?;
            Ok(Rat::from_integer(num))
        }
    }
}

/// Canonical string form: `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion to `f64` (exact when representable).
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Out-of-range ratios: fall back to sign-correct infinity.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// True if `r` is an integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Integer value of `r` if it is one.
pub fn as_integer(r: &Rat) -> Option<BigInt> {
    is_integer(r).then(|| r.numer().clone())
}

/// `r^n` for integer `n` (n may be negative; r must be nonzero then).
pub fn rat_powi(r: &Rat, n: i64) -> Rat {
    if n == 0 {
        return Rat::one();
    }
    let (base, e) = if n < 0 {
        assert!(!r.is_zero(), "negative power of zero rational");
        (r.recip(), n.unsigned_abs())
    } else {
        (r.clone(), n as u64)
    };
    let mut acc = Rat::one();
    let mut pow = base;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &pow;
        }
        e >>= 1;
        if e > 0 {
            pow = &pow * &pow;
        }
    }
    acc
}
