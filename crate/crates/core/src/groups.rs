//! The commutative sequence groups under pointwise multiplication.
//!
//! A [`GroupCtx`] fixes the scalar domain and index origin; elements are
//! [`GroupElement`]s (nonvanishing, constant-1 tail). Everything here is a
//! pure function over immutable values.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::magnitude::{le_verdict, Comparison, Mag};
use crate::scalar::{Rat, Scalar, ScalarMode};
use crate::seq::{pointwise_inv, pointwise_mul, rho_sup, Domain, GroupElement};

/// Which group we are working in: scalar domain plus index origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupCtx {
    pub domain: Domain,
    pub base: usize,
}

impl GroupCtx {
    pub fn new(domain: Domain, base: usize) -> Self {
        GroupCtx { domain, base }
    }

    /// Positive-real sequences over the default origin.
    pub fn positive() -> Self {
        GroupCtx::new(Domain::PositiveReal, 0)
    }

    /// Positive-real sequences indexed from 1.
    pub fn positive_shifted() -> Self {
        GroupCtx::new(Domain::PositiveReal, 1)
    }

    /// Nonzero-complex sequences over the default origin.
    pub fn complex() -> Self {
        GroupCtx::new(Domain::NonzeroComplex, 0)
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if g.domain() != self.domain {
            return Err(Error::ContextMismatch(format!(
                "element domain {} does not match context domain {}",
                g.domain().name(),
                self.domain.name()
            )));
        }
        if g.base() != self.base {
            return Err(Error::BaseMismatch { left: g.base(), right: self.base });
        }
        Ok(())
    }

    pub fn identity(&self, mode: ScalarMode) -> GroupElement {
        GroupElement::identity(self.domain, mode, self.base)
    }
}

/// Pointwise product; the constant-1 tails multiply to a constant-1 tail.
pub fn mul(ctx: &GroupCtx, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    ctx.check(g)?;
    ctx.check(h)?;
    GroupElement::new(pointwise_mul(g.seq(), h.seq())?, ctx.domain)
}

/// Pointwise reciprocal.
pub fn inv(ctx: &GroupCtx, g: &GroupElement) -> Result<GroupElement> {
    ctx.check(g)?;
    GroupElement::new(pointwise_inv(g.seq())?, ctx.domain)
}

/// Whether an element already lies in the countable dense class: exact
/// rational (or rational-complex) entries, eventually exactly 1.
pub fn in_dense_class(g: &GroupElement) -> bool {
    matches!(g.mode(), ScalarMode::ExactReal | ScalarMode::ExactComplex)
}

/// An element of the countable dense class within sup-distance `eps` of `h`.
///
/// Exact-mode elements already belong to the class and are returned as-is.
/// Float-mode elements are rationalized entrywise by fixed-denominator
/// rounding (denominator `⌈2/eps⌉`, ties toward 1), with the denominator
/// doubled until the exact distance bound is verified against the rational
/// value the float denotes.
pub fn dense_approx(ctx: &GroupCtx, h: &GroupElement, eps: &Rat) -> Result<GroupElement> {
    ctx.check(h)?;
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    if in_dense_class(h) {
        return Ok(h.clone());
    }
    let base_denom = (Rat::from_integer(2.into()) / eps).ceil().to_integer();
    let base_denom = if base_denom < BigInt::one() { BigInt::one() } else { base_denom };
    let mut prefix = Vec::with_capacity(h.seq().prefix().len());
    for s in h.seq().prefix() {
        let exact = s.to_exact()?;
        let v = exact.as_rat().expect("float promotes to rational").clone();
        let mut q = base_denom.clone();
        let approx = loop {
            let cand = round_to_denominator(&v, &q);
            if !cand.is_zero() {
                let d = (&v - &cand).abs() + (v.recip() - cand.recip()).abs();
                if d < *eps {
                    break cand;
                }
            }
            q *= BigInt::from(2);
            if q.bits() > 512 {
                return Err(Error::ToleranceExhausted(
                    "rationalization did not converge".into(),
                ));
            }
        };
        prefix.push(Scalar::Rational(approx));
    }
    GroupElement::from_prefix(ctx.domain, ctx.base, prefix)
}

/// Nearest fraction with the given denominator; exact half-way cases round
/// toward 1 (the tail value of every group element).
fn round_to_denominator(v: &Rat, q: &BigInt) -> Rat {
    let scaled = v * Rat::from_integer(q.clone());
    let floor = scaled.floor().to_integer();
    let ceil = &floor + BigInt::one();
    let frac = &scaled - Rat::from_integer(floor.clone());
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let num = match frac.cmp(&half) {
        std::cmp::Ordering::Less => floor,
        std::cmp::Ordering::Greater => ceil,
        std::cmp::Ordering::Equal => {
            // Tie: pick the numerator closer to q (the value closer to 1).
            if (&floor - q).abs() <= (&ceil - q).abs() {
                floor
            } else {
                ceil
            }
        }
    };
    Rat::new(num, q.clone())
}

/// Both sides of the translation inequality
/// `ρ(f·h, g·h) ≤ max{sup|h|, sup|1/h|}·ρ(f, g)`, with a sound verdict.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub lhs: Mag,
    pub rhs: Mag,
    pub verdict: Comparison,
}

pub fn translation_bound(
    ctx: &GroupCtx,
    f: &GroupElement,
    g: &GroupElement,
    h: &GroupElement,
    tol: &Rat,
) -> Result<BoundCheck> {
    ctx.check(f)?;
    ctx.check(g)?;
    ctx.check(h)?;
    let fh = mul(ctx, f, h)?;
    let gh = mul(ctx, g, h)?;
    let lhs = rho_sup(fh.seq(), gh.seq(), tol)?;
    let sup_h = h.sup_abs(tol)?;
    let sup_inv = inv(ctx, h)?.sup_abs(tol)?;
    let factor = sup_h.max(&sup_inv)?;
    let rhs = factor.mul(&rho_sup(f.seq(), g.seq(), tol)?)?;
    let verdict = le_verdict(&lhs, &rhs)?;
    Ok(BoundCheck { lhs, rhs, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar as S;

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(p.into(), q.into())
    }

    fn tol() -> Rat {
        rat(1, 1_000_000_000_000)
    }

    fn elem(entries: &[(i64, i64)]) -> GroupElement {
        GroupElement::from_prefix(
            Domain::PositiveReal,
            0,
            entries.iter().map(|&(p, q)| S::ratio(p, q)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn mul_examples() {
        let ctx = GroupCtx::positive();
        let two = elem(&[(2, 1)]);
        let half = elem(&[(1, 2)]);
        assert!(mul(&ctx, &two, &half).unwrap().is_identity());
        let a = elem(&[(3, 2)]);
        let b = elem(&[(1, 1), (2, 1)]);
        let ab = mul(&ctx, &a, &b).unwrap();
        assert_eq!(ab, elem(&[(3, 2), (2, 1)]));
        assert_eq!(mul(&ctx, &a, &b).unwrap(), mul(&ctx, &b, &a).unwrap());
    }

    #[test]
    fn inv_examples() {
        let ctx = GroupCtx::positive();
        let id = ctx.identity(ScalarMode::ExactReal);
        assert_eq!(inv(&ctx, &id).unwrap(), id);
        assert_eq!(inv(&ctx, &elem(&[(2, 1)])).unwrap(), elem(&[(1, 2)]));
        let cctx = GroupCtx::complex();
        let i = GroupElement::from_prefix(Domain::NonzeroComplex, 0, vec![S::complex(0, 1, 1, 1)])
            .unwrap();
        let got = inv(&cctx, &i).unwrap();
        assert_eq!(got.entry(0).unwrap(), S::complex(0, 1, -1, 1));
    }

    #[test]
    fn context_mismatch_is_reported() {
        let ctx = GroupCtx::positive();
        let shifted = GroupElement::identity(Domain::PositiveReal, ScalarMode::ExactReal, 1);
        assert!(matches!(mul(&ctx, &shifted, &shifted), Err(Error::BaseMismatch { .. })));
        let complex = GroupElement::identity(Domain::NonzeroComplex, ScalarMode::ExactComplex, 0);
        assert!(matches!(inv(&ctx, &complex), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn dense_approx_returns_exact_elements_unchanged() {
        let ctx = GroupCtx::positive();
        let g = elem(&[(7, 5)]);
        let approx = dense_approx(&ctx, &g, &rat(1, 100)).unwrap();
        assert_eq!(approx, g);
        assert!(rho_sup(approx.seq(), g.seq(), &tol()).unwrap().is_zero());
    }

    #[test]
    fn dense_approx_rationalizes_floats_within_eps() {
        let ctx = GroupCtx::positive();
        let sqrt2 = GroupElement::from_prefix(
            Domain::PositiveReal,
            0,
            vec![S::Float(std::f64::consts::SQRT_2)],
        )
        .unwrap();
        let eps = rat(1, 100);
        let approx = dense_approx(&ctx, &sqrt2, &eps).unwrap();
        assert!(in_dense_class(&approx));
        // verify d against the exact rational the float denotes
        let exact = sqrt2.entry(0).unwrap().to_exact().unwrap();
        let v = exact.as_rat().unwrap();
        let c = approx.entry(0).unwrap();
        let c = c.as_rat().unwrap();
        let d = (v - c).abs() + (v.recip() - c.recip()).abs();
        assert!(d < eps);
    }

    #[test]
    fn dense_approx_accepts_identity_when_eps_is_large() {
        // Any class element within eps qualifies; the identity is one when
        // eps exceeds ρ(h, 1). Our deterministic answer is h itself, which
        // trivially satisfies the contract.
        let ctx = GroupCtx::positive();
        let h = elem(&[(11, 10)]);
        let eps = rat(10, 1);
        let approx = dense_approx(&ctx, &h, &eps).unwrap();
        let d = rho_sup(approx.seq(), h.seq(), &tol()).unwrap();
        assert!(d.exact().unwrap() < &eps);
    }

    #[test]
    fn translation_bound_examples() {
        let ctx = GroupCtx::positive();
        let f = elem(&[(2, 1)]);
        let g = ctx.identity(ScalarMode::ExactReal);
        // h = identity gives equality
        let check = translation_bound(&ctx, &f, &g, &g, &tol()).unwrap();
        assert_eq!(check.lhs, check.rhs);
        assert_eq!(check.verdict, Comparison::Holds);
        // h = (1/2,1,...): lhs = d(1,1/2) = 3/2, rhs = 2·(3/2) = 3
        let h = elem(&[(1, 2)]);
        let check = translation_bound(&ctx, &f, &g, &h, &tol()).unwrap();
        assert_eq!(check.lhs, Mag::Exact(rat(3, 2)));
        assert_eq!(check.rhs, Mag::Exact(rat(3, 1)));
        assert!(check.verdict.accepted());
    }

    #[test]
    fn rounding_ties_go_toward_one() {
        // 1/4 with denominator 2 is exactly between 0/2 and 1/2; 1/2 is
        // closer to 1.
        assert_eq!(round_to_denominator(&rat(1, 4), &BigInt::from(2)), rat(1, 2));
        // 7/4 with denominator 2 is between 3/2 and 2; 3/2 is closer to 1.
        assert_eq!(round_to_denominator(&rat(7, 4), &BigInt::from(2)), rat(3, 2));
        assert_eq!(round_to_denominator(&rat(2, 3), &BigInt::from(3)), rat(2, 3));
    }
}
