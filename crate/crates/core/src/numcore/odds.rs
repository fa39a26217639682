//! Log-scale values, Bayes factors and model odds.

use std::fmt;
use std::ops::{Add, Div, Mul};

use serde::Serialize;

use crate::error::{domain, Result};

/// A real number stored as `sign · exp(log_magnitude)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogValue {
    pub log_magnitude: f64,
    /// +1, -1, or 0 for an exact zero (then `log_magnitude` is ignored).
    pub sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { log_magnitude: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: LogValue = LogValue { log_magnitude: 0.0, sign: 1 };

    pub fn from_ln(log_magnitude: f64) -> Self {
        LogValue { log_magnitude, sign: 1 }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue { log_magnitude: x.abs().ln(), sign: if x > 0.0 { 1 } else { -1 } }
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_magnitude.exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn recip(self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero");
        LogValue { log_magnitude: -self.log_magnitude, sign: self.sign }
    }
}

/// Sum of two values without leaving log space.
impl Add for LogValue {
    type Output = LogValue;
    fn add(self, other: LogValue) -> LogValue {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_magnitude >= other.log_magnitude { (self, other) } else { (other, self) };
        let ratio = (small.log_magnitude - big.log_magnitude).exp();
        if big.sign == small.sign {
            LogValue { log_magnitude: big.log_magnitude + ratio.ln_1p(), sign: big.sign }
        } else if ratio == 1.0 {
            Self::ZERO
        } else {
            LogValue { log_magnitude: big.log_magnitude + (-ratio).ln_1p(), sign: big.sign }
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 || rhs.sign == 0 {
            return LogValue::ZERO;
        }
        LogValue { log_magnitude: self.log_magnitude + rhs.log_magnitude, sign: self.sign * rhs.sign }
    }
}

impl Div for LogValue {
    type Output = LogValue;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: LogValue) -> LogValue {
        self * rhs.recip()
    }
}

/// Which hypothesis sits in the numerator of a Bayes factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Null over alternative (Jeffreys's K).
    #[serde(rename = "01")]
    NullOverAlt,
    /// Alternative over null.
    #[serde(rename = "10")]
    AltOverNull,
    /// Positive effect over negative effect.
    #[serde(rename = "+-")]
    PlusOverMinus,
}

impl Orientation {
    pub fn label(self) -> &'static str {
        match self {
            Orientation::NullOverAlt => "BF01",
            Orientation::AltOverNull => "BF10",
            Orientation::PlusOverMinus => "BF+-",
        }
    }
}

/// A guard that was tripped while computing a result; the number is still
/// returned, but it lies outside the formula's intended range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GuardWarning(pub String);

impl fmt::Display for GuardWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A Bayes factor held on the natural-log scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvidenceRatio {
    pub log_value: f64,
    pub orientation: Orientation,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<GuardWarning>,
}

impl EvidenceRatio {
    pub fn from_ln(log_value: f64, orientation: Orientation) -> Self {
        EvidenceRatio { log_value, orientation, warnings: Vec::new() }
    }

    pub fn with_warning(mut self, warning: impl Into<String>) -> Self {
        self.warnings.push(GuardWarning(warning.into()));
        self
    }

    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }

    /// The same evidence with numerator and denominator swapped.
    pub fn inverted(&self) -> Self {
        let orientation = match self.orientation {
            Orientation::NullOverAlt => Orientation::AltOverNull,
            Orientation::AltOverNull => Orientation::NullOverAlt,
            // Inverting BF+- gives BF-+, which has no label of its own.
            Orientation::PlusOverMinus => Orientation::PlusOverMinus,
        };
        EvidenceRatio { log_value: -self.log_value, orientation, warnings: self.warnings.clone() }
    }

    /// `ln BF01`; panics for directional factors.
    pub fn ln_bf01(&self) -> f64 {
        match self.orientation {
            Orientation::NullOverAlt => self.log_value,
            Orientation::AltOverNull => -self.log_value,
            Orientation::PlusOverMinus => panic!("a directional Bayes factor has no null orientation"),
        }
    }

    pub fn ln_bf10(&self) -> f64 {
        -self.ln_bf01()
    }

    pub fn bf01(&self) -> f64 {
        self.ln_bf01().exp()
    }

    pub fn bf10(&self) -> f64 {
        self.ln_bf10().exp()
    }
}

/// Prior odds, Bayes factor and posterior odds for M1 over M0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelOdds {
    pub prior_odds: f64,
    pub bayes_factor_10: f64,
    pub posterior_odds: f64,
}

impl ModelOdds {
    /// Posterior probability of M0.
    pub fn posterior_prob_m0(&self) -> f64 {
        1.0 / (1.0 + self.posterior_odds)
    }
}

/// Posterior odds = BF10 × prior odds.
pub fn posterior_model_odds(prior_odds: f64, bf10: f64) -> Result<ModelOdds> {
    for (name, v) in [("prior_odds", prior_odds), ("bf10", bf10)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(domain("posterior_model_odds", format!("{name} must be positive and finite, got {v}")));
        }
    }
    let posterior_odds = (prior_odds.ln() + bf10.ln()).exp();
    Ok(ModelOdds { prior_odds, bayes_factor_10: bf10, posterior_odds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn model_odds_examples() {
        assert!((posterior_model_odds(1.0, 2.0).unwrap().posterior_odds - 2.0).abs() < 1e-15);
        let odds = posterior_model_odds(1.0, 1.0 / 56.4).unwrap();
        assert!((1.0 / odds.posterior_odds - 56.4).abs() < 1e-10);
        assert!((posterior_model_odds(0.1, 10.0).unwrap().posterior_odds - 1.0).abs() < 1e-15);
        assert!(posterior_model_odds(0.0, 1.0).is_err());
        assert!(posterior_model_odds(1.0, -2.0).is_err());
        assert!(posterior_model_odds(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn zero_is_signless() {
        let z = LogValue::from_f64(0.0);
        assert!(z.is_zero());
        assert_eq!(z.to_f64(), 0.0);
        assert_eq!((z * LogValue::from_f64(3.0)).to_f64(), 0.0);
        assert_eq!((LogValue::from_f64(2.5) + LogValue::from_f64(-2.5)).sign, 0);
    }

    #[test]
    fn evidence_orientation() {
        let k = EvidenceRatio::from_ln(2f64.ln(), Orientation::NullOverAlt);
        assert!((k.bf10() - 0.5).abs() < 1e-15);
        let inv = k.inverted();
        assert_eq!(inv.orientation, Orientation::AltOverNull);
        assert!((inv.bf01() - 2.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn log_value_round_trip(x in prop::num::f64::NORMAL) {
            let back = LogValue::from_f64(x).to_f64();
            prop_assert!(((back - x) / x).abs() <= 1e-12);
        }

        #[test]
        fn log_value_arithmetic(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            prop_assume!(a.abs() > 1e-6 && b.abs() > 1e-6);
            let (la, lb) = (LogValue::from_f64(a), LogValue::from_f64(b));
            prop_assert!((((la * lb).to_f64() - a * b) / (a * b)).abs() < 1e-12);
            prop_assert!((((la / lb).to_f64() - a / b) / (a / b)).abs() < 1e-12);
            let s = a + b;
            prop_assume!(s.abs() > 1e-3 * (a.abs() + b.abs()));
            prop_assert!((((la + lb).to_f64() - s) / s).abs() < 1e-9);
        }

        #[test]
        fn posterior_identity(prior in 1e-6f64..1e6, bf in 1e-9f64..1e9) {
            let odds = posterior_model_odds(prior, bf).unwrap();
            prop_assert!(((odds.posterior_odds - bf * prior) / (bf * prior)).abs() <= 1e-12);
        }
    }
}
