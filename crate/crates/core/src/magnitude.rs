//! Magnitude-valued results: norms and distances.
//!
//! Exact-real inputs give exact rationals, exact-complex inputs give
//! certified rational enclosures (moduli are square roots), float inputs
//! give floats. A [`Mag`] records which of the three happened so callers
//! can assert exactness where the contract promises it.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::scalar::{rat_to_decimal, rat_to_f64, rat_to_text, Rat};

#[derive(Debug, Clone, PartialEq)]
pub enum Mag {
    /// Exact rational value.
    Exact(Rat),
    /// Certified enclosure with rational endpoints.
    Enclosure(RatInterval),
    /// Float-mode value.
    Float(f64),
}

impl Mag {
    pub fn zero_like(&self) -> Mag {
        match self {
            Mag::Exact(_) => Mag::Exact(Rat::zero()),
            Mag::Enclosure(_) => Mag::Exact(Rat::zero()),
            Mag::Float(_) => Mag::Float(0.0),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Mag::Exact(_))
    }

    /// The exact rational, if this magnitude is exact.
    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Mag::Exact(q) => Some(q),
            _ => None,
        }
    }

    pub fn expect_exact(&self) -> Result<&Rat> {
        self.exact().ok_or_else(|| {
            Error::ToleranceExhausted("expected an exact magnitude".into())
        })
    }

    /// Enclosure view; exact values become point intervals.
    pub fn as_interval(&self) -> Result<RatInterval> {
        match self {
            Mag::Exact(q) => Ok(RatInterval::point(q.clone())),
            Mag::Enclosure(iv) => Ok(iv.clone()),
            Mag::Float(_) => Err(Error::ToleranceExhausted(
                "float magnitude has no certified enclosure".into(),
            )),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Mag::Exact(q) => rat_to_f64(q),
            Mag::Enclosure(iv) => rat_to_f64(&iv.midpoint()),
            Mag::Float(f) => *f,
        }
    }

    pub fn add(&self, other: &Mag) -> Result<Mag> {
        match (self, other) {
            (Mag::Exact(a), Mag::Exact(b)) => Ok(Mag::Exact(a + b)),
            (Mag::Float(a), Mag::Float(b)) => Ok(Mag::Float(a + b)),
            (Mag::Float(_), _) | (_, Mag::Float(_)) => Err(Error::ModeMismatch {
                left: "float magnitude",
                right: "exact magnitude",
            }),
            (a, b) => Ok(Mag::Enclosure(a.as_interval()?.add(&b.as_interval()?))),
        }
    }

    pub fn mul(&self, other: &Mag) -> Result<Mag> {
        match (self, other) {
            (Mag::Exact(a), Mag::Exact(b)) => Ok(Mag::Exact(a * b)),
            (Mag::Float(a), Mag::Float(b)) => Ok(Mag::Float(a * b)),
            (Mag::Float(_), _) | (_, Mag::Float(_)) => Err(Error::ModeMismatch {
                left: "float magnitude",
                right: "exact magnitude",
            }),
            (a, b) => Ok(Mag::Enclosure(a.as_interval()?.mul(&b.as_interval()?))),
        }
    }

    pub fn scale(&self, q: &Rat) -> Mag {
        match self {
            Mag::Exact(a) => Mag::Exact(a * q),
            Mag::Enclosure(iv) => Mag::Enclosure(iv.scale(q)),
            Mag::Float(f) => Mag::Float(f * rat_to_f64(q)),
        }
    }

    pub fn max(&self, other: &Mag) -> Result<Mag> {
        match (self, other) {
            (Mag::Exact(a), Mag::Exact(b)) => Ok(Mag::Exact(std::cmp::max(a, b).clone())),
            (Mag::Float(a), Mag::Float(b)) => Ok(Mag::Float(a.max(*b))),
            (Mag::Float(_), _) | (_, Mag::Float(_)) => Err(Error::ModeMismatch {
                left: "float magnitude",
                right: "exact magnitude",
            }),
            (a, b) => Ok(Mag::Enclosure(a.as_interval()?.max(&b.as_interval()?))),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Mag::Exact(q) => q.is_zero(),
            Mag::Enclosure(iv) => iv.is_point() && iv.lo().is_zero(),
            Mag::Float(f) => *f == 0.0,
        }
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mag::Exact(q) => write!(f, "{} ({})", rat_to_text(q), rat_to_decimal(q, 12)),
            Mag::Enclosure(iv) => write!(
                f,
                "[{}, {}]",
                rat_to_decimal(iv.lo(), 15),
                rat_to_decimal(iv.hi(), 15)
            ),
            Mag::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Outcome of comparing two magnitudes `lhs <= rhs`.
///
/// Verdicts always carry both sides, never a bare boolean, so a failing
/// property run shows its witness.
#[derive(Debug, Clone, PartialEq)]
pub enum Comparison {
    /// Certainly holds (exact comparison, or disjoint enclosures).
    Holds,
    /// Enclosures overlap: holds up to twice the enclosure widths.
    HoldsWithinEnclosure,
    /// Certainly violated.
    Violated,
}

/// Decides `lhs <= rhs` soundly: a true inequality is never reported as
/// violated, and a violation by more than the enclosure widths is always
/// caught.
pub fn le_verdict(lhs: &Mag, rhs: &Mag) -> Result<Comparison> {
    match (lhs, rhs) {
        (Mag::Exact(a), Mag::Exact(b)) => {
            Ok(if a <= b { Comparison::Holds } else { Comparison::Violated })
        }
        (Mag::Float(a), Mag::Float(b)) => {
            Ok(if a <= b { Comparison::Holds } else { Comparison::Violated })
        }
        (Mag::Float(_), _) | (_, Mag::Float(_)) => Err(Error::ModeMismatch {
            left: "float magnitude",
            right: "exact magnitude",
        }),
        (a, b) => {
            let (a, b) = (a.as_interval()?, b.as_interval()?);
            Ok(if a.hi() <= b.lo() {
                Comparison::Holds
            } else if a.lo() <= b.hi() {
                Comparison::HoldsWithinEnclosure
            } else {
                Comparison::Violated
            })
        }
    }
}

/// Decides `lhs == rhs` up to enclosure overlap.
pub fn eq_verdict(lhs: &Mag, rhs: &Mag) -> Result<Comparison> {
    match (le_verdict(lhs, rhs)?, le_verdict(rhs, lhs)?) {
        (Comparison::Violated, _) | (_, Comparison::Violated) => Ok(Comparison::Violated),
        (Comparison::Holds, Comparison::Holds) => Ok(Comparison::Holds),
        _ => Ok(Comparison::HoldsWithinEnclosure),
    }
}

impl Comparison {
    pub fn accepted(&self) -> bool {
        !matches!(self, Comparison::Violated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn exact_comparisons_are_decisive() {
        let a = Mag::Exact(r(3, 2));
        let b = Mag::Exact(r(2, 1));
        assert_eq!(le_verdict(&a, &b).unwrap(), Comparison::Holds);
        assert_eq!(le_verdict(&b, &a).unwrap(), Comparison::Violated);
        assert_eq!(eq_verdict(&a, &a).unwrap(), Comparison::Holds);
    }

    #[test]
    fn overlapping_enclosures_are_accepted_not_confirmed() {
        let a = Mag::Enclosure(RatInterval::new(r(1, 1), r(3, 2)));
        let b = Mag::Enclosure(RatInterval::new(r(5, 4), r(2, 1)));
        assert_eq!(le_verdict(&a, &b).unwrap(), Comparison::HoldsWithinEnclosure);
        let c = Mag::Enclosure(RatInterval::new(r(3, 1), r(4, 1)));
        assert_eq!(le_verdict(&c, &b).unwrap(), Comparison::Violated);
    }

    #[test]
    fn float_and_exact_do_not_mix() {
        let a = Mag::Float(1.0);
        let b = Mag::Exact(r(1, 1));
        assert!(le_verdict(&a, &b).is_err());
    }
}
