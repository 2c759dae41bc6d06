//! Gauss and generalized hypergeometric series by direct term recurrence.
//!
//! Summation runs until the term drops below 1e-16 of the partial sum or a
//! hard cap of 1e5 terms, after which the caller gets a non-convergence
//! error (the cue to continue through a functional equation instead).

use crate::error::CrossingError;

const REL_CUTOFF: f64 = 1e-16;
const MAX_TERMS: usize = 100_000;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Gauss hypergeometric `2F1(a, b; c; x)` for `0 <= x < 1`.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64, CrossingError> {
    if is_nonpositive_integer(c) {
        return Err(CrossingError::HypPole(c));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(CrossingError::HypDomain(x));
    }
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        if term.abs() < REL_CUTOFF * sum.abs() {
            return Ok(sum);
        }
    }
    Err(CrossingError::HypNonConvergence { x, terms: MAX_TERMS })
}

/// Generalized hypergeometric `3F2(a1, a2, a3; b1, b2; x)` for `0 <= x < 1`.
pub fn hyp3f2(a1: f64, a2: f64, a3: f64, b1: f64, b2: f64, x: f64) -> Result<f64, CrossingError> {
    for b in [b1, b2] {
        if is_nonpositive_integer(b) {
            return Err(CrossingError::HypPole(b));
        }
    }
    if !(0.0..1.0).contains(&x) {
        return Err(CrossingError::HypDomain(x));
    }
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a1 + nf) * (a2 + nf) * (a3 + nf) / ((b1 + nf) * (b2 + nf) * (nf + 1.0)) * x;
        sum += term;
        if term.abs() < REL_CUTOFF * sum.abs() {
            return Ok(sum);
        }
    }
    Err(CrossingError::HypNonConvergence { x, terms: MAX_TERMS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::singular_integral;

    #[test]
    fn empty_sum_at_zero() {
        assert_eq!(hyp2f1(0.7, -1.3, 2.9, 0.0).unwrap(), 1.0);
        assert_eq!(hyp3f2(1.0, 1.0, 4.0 / 3.0, 2.0, 5.0 / 3.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn elementary_special_cases() {
        // 2F1(1, 1; 2; x) = -ln(1-x)/x
        let x: f64 = 0.37;
        let expect = -(1.0 - x).ln() / x;
        assert!((hyp2f1(1.0, 1.0, 2.0, x).unwrap() - expect).abs() < 1e-14);
        // 2F1(a, b; b; x) = (1-x)^{-a}
        let v = hyp2f1(0.6, 1.9, 1.9, 0.25).unwrap();
        assert!((v - 0.75_f64.powf(-0.6)).abs() < 1e-14);
    }

    #[test]
    fn incomplete_beta_cross_check() {
        // lambda^{1/3} 2F1(1/3, 2/3; 4/3; lambda) equals
        // (1/3) * integral_0^lambda (t(1-t))^{-2/3} dt.
        let lam: f64 = 0.5;
        let hyp = lam.powf(1.0 / 3.0) * hyp2f1(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, lam).unwrap();
        let quad = singular_integral(1.0 / 3.0, 0.0, lam).unwrap().value / 3.0;
        assert!(((hyp - quad) / quad).abs() < 1e-12, "{hyp} vs {quad}");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            hyp2f1(0.5, 0.5, -2.0, 0.1),
            Err(CrossingError::HypPole(_))
        ));
        assert!(matches!(
            hyp2f1(0.5, 0.5, 1.5, 1.0),
            Err(CrossingError::HypDomain(_))
        ));
        assert!(matches!(
            hyp3f2(1.0, 1.0, 1.0, 0.0, 2.0, 0.1),
            Err(CrossingError::HypPole(_))
        ));
    }
}
