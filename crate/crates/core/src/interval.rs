//! Exact rational intervals for certified enclosures.
//!
//! Endpoints are arbitrary-precision rationals, so every operation here is an
//! outward-exact enclosure: no rounding ever enters, widths only reflect
//! genuine uncertainty (square roots, supremum searches).

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rat;

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct RatInterval {
    lo: Rat,
    hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        RatInterval { lo, hi }
    }

    pub fn point(q: Rat) -> Self {
        RatInterval { lo: q.clone(), hi: q }
    }

    pub fn zero() -> Self {
        RatInterval::point(Rat::zero())
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rat) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn add(&self, other: &Self) -> Self {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Self) -> Self {
        RatInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> Self {
        RatInterval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }

    pub fn scale(&self, q: &Rat) -> Self {
        if q.is_negative() {
            RatInterval::new(&self.hi * q, &self.lo * q)
        } else {
            RatInterval::new(&self.lo * q, &self.hi * q)
        }
    }

    /// Reciprocal; requires the interval to be sign-definite.
    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatInterval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let hi = std::cmp::max(self.lo.abs(), self.hi.abs());
            RatInterval::new(Rat::zero(), hi)
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        RatInterval::new(
            std::cmp::max(self.lo.clone(), other.lo.clone()),
            std::cmp::max(self.hi.clone(), other.hi.clone()),
        )
    }

    pub fn hull(&self, other: &Self) -> Self {
        RatInterval::new(
            std::cmp::min(self.lo.clone(), other.lo.clone()),
            std::cmp::max(self.hi.clone(), other.hi.clone()),
        )
    }

    pub fn split(&self) -> (Self, Self) {
        let mid = self.midpoint();
        (
            RatInterval::new(self.lo.clone(), mid.clone()),
            RatInterval::new(mid, self.hi.clone()),
        )
    }

    /// Certainly `self < other` (disjoint with strict gap).
    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    /// Possibly `self <= other` — true whenever the represented values can
    /// satisfy the inequality. Sound for verifying true inequalities: if the
    /// exact values satisfy `a <= b` this never returns false.
    pub fn possibly_le(&self, other: &Self) -> bool {
        self.lo <= other.hi
    }
}

/// Certified enclosure of `sqrt(q)` with width at most `tol`, via integer
/// square roots of scaled numerators: exact endpoints, no floating point.
pub fn sqrt_enclosure(q: &Rat, tol: &Rat) -> Result<RatInterval> {
    if q.is_negative() {
        return Err(Error::InvalidParameter("sqrt of negative rational".into()));
    }
    if !tol.is_positive() {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    if q.is_zero() {
        return Ok(RatInterval::zero());
    }
    // sqrt(n/d) = sqrt(n*d)/d. Scale by 4^k so the integer sqrt gives
    // width 1/(d*2^k) <= tol.
    let n = q.numer();
    let d = q.denom();
    let m = n * d;
    // Need 2^k >= 1/(d*tol), i.e. k >= bits(ceil(1/(d*tol))).
    let inv = (tol * Rat::from_integer(d.clone())).recip();
    let need = inv.ceil().to_integer();
    let k = if need <= BigInt::one() { 0u64 } else { need.bits() };
    let scaled = &m << (2 * k);
    let root = scaled.sqrt();
    let denom = Rat::from_integer(d << k);
    let lo = Rat::from_integer(root.clone()) / denom.clone();
    let hi = Rat::from_integer(root + BigInt::one()) / denom;
    Ok(RatInterval::new(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn sqrt_enclosure_contains_true_value() {
        let tol = r(1, 1_000_000_000_000);
        let iv = sqrt_enclosure(&r(2, 1), &tol).unwrap();
        assert!(iv.width() <= tol);
        // 2 lies between lo^2 and hi^2.
        assert!(iv.lo() * iv.lo() <= r(2, 1));
        assert!(iv.hi() * iv.hi() >= r(2, 1));
        // Perfect squares give tight enclosures containing the exact root.
        let iv = sqrt_enclosure(&r(9, 4), &tol).unwrap();
        assert!(iv.contains(&r(3, 2)));
    }

    #[test]
    fn mul_handles_signs() {
        let a = RatInterval::new(r(-2, 1), r(3, 1));
        let b = RatInterval::new(r(-1, 1), r(4, 1));
        let p = a.mul(&b);
        assert_eq!(p.lo(), &r(-8, 1));
        assert_eq!(p.hi(), &r(12, 1));
    }

    #[test]
    fn recip_requires_sign_definite() {
        let straddling = RatInterval::new(r(-1, 1), r(1, 1));
        assert!(straddling.recip().is_err());
        let pos = RatInterval::new(r(1, 2), r(2, 1));
        let inv = pos.recip().unwrap();
        assert_eq!(inv.lo(), &r(1, 2));
        assert_eq!(inv.hi(), &r(2, 1));
    }
}
