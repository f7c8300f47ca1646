//! Pointwise-multiplication actions of the sequence groups on their ℓ¹
//! spaces, with constructive witnesses.
//!
//! `density_witness` truncates the ratio `y/x` to finitely many coordinates
//! and returns the exact ℓ¹ residual; `meager_member` decides membership in
//! the eventual-ratio-bound set exactly from tail shapes; `meager_escape`
//! modifies any point beyond a cutoff so it leaves that set, again with an
//! exact residual.

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnitude::Mag;
use crate::scalar::{rat_to_decimal, rat_to_text, Rat, Scalar, ScalarMode};
use crate::seq::{
    pointwise_mul, Domain, GroupElement, SeqView, TailModel, TailedSeq, ViewTail,
};

/// Action context: the group (domain + origin) determines the space it acts
/// on — positive-real groups act on positive summable sequences, the complex
/// group on nonvanishing complex summable sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionCtx {
    pub domain: Domain,
    pub base: usize,
}

impl ActionCtx {
    pub fn new(domain: Domain, base: usize) -> Self {
        ActionCtx { domain, base }
    }

    /// Positive-real group on positive summable sequences (origin 0).
    pub fn positive() -> Self {
        ActionCtx::new(Domain::PositiveReal, 0)
    }

    /// The same action with index origin 1.
    pub fn positive_shifted() -> Self {
        ActionCtx::new(Domain::PositiveReal, 1)
    }

    /// Complex group on nonvanishing complex summable sequences.
    pub fn complex() -> Self {
        ActionCtx::new(Domain::NonzeroComplex, 0)
    }

    pub fn check_group(&self, g: &GroupElement) -> Result<()> {
        if g.domain() != self.domain {
            return Err(Error::ContextMismatch(format!(
                "group element domain {} does not match action domain {}",
                g.domain().name(),
                self.domain.name()
            )));
        }
        if g.base() != self.base {
            return Err(Error::BaseMismatch { left: g.base(), right: self.base });
        }
        Ok(())
    }

    /// Space membership: summable tail, matching origin, and positivity or
    /// nonvanishing according to the domain.
    pub fn check_point(&self, x: &TailedSeq) -> Result<()> {
        if x.base() != self.base {
            return Err(Error::BaseMismatch { left: x.base(), right: self.base });
        }
        if !matches!(x.tail(), TailModel::Geometric { .. }) {
            return Err(Error::NotSummable("space points need geometric tails".into()));
        }
        match self.domain {
            Domain::PositiveReal => {
                if x.mode() == ScalarMode::ExactComplex {
                    return Err(Error::ContextMismatch(
                        "complex point in a positive-real space".into(),
                    ));
                }
                if !x.is_positive() {
                    return Err(Error::NonPositiveEntry(x.base()));
                }
            }
            Domain::NonzeroComplex => {
                if x.mode() != ScalarMode::ExactComplex {
                    return Err(Error::ContextMismatch(
                        "nonvanishing-complex space expects exact-complex points".into(),
                    ));
                }
                if !x.is_nonvanishing() {
                    return Err(Error::ZeroEntry(x.base()));
                }
            }
        }
        Ok(())
    }

    /// The action `(g·x)(n) = g(n)·x(n)`. Positivity / nonvanishing and
    /// summability are preserved and revalidated on the result.
    pub fn act(&self, g: &GroupElement, x: &TailedSeq) -> Result<TailedSeq> {
        self.check_group(g)?;
        self.check_point(x)?;
        let y = pointwise_mul(g.seq(), x)?;
        self.check_point(&y)?;
        Ok(y)
    }

    /// Orbit membership within the representable class: the candidate ratio
    /// `y/x` is a group element iff the aligned tails agree exactly (the
    /// ratio tail is then constant 1). Returns the witness, or `None` when
    /// no witness exists among finitely described elements.
    pub fn orbit_member(&self, y: &TailedSeq, x: &TailedSeq) -> Result<Option<GroupElement>> {
        self.check_point(y)?;
        self.check_point(x)?;
        let ratio = SeqView::from_seq(y)?.div(&SeqView::from_seq(x)?)?;
        match ratio.tail() {
            ViewTail::Constant(c) if c.is_one() => {}
            _ => return Ok(None),
        }
        let seq = ratio.to_seq()?;
        match GroupElement::new(seq, self.domain) {
            Ok(g) => Ok(Some(g)),
            Err(_) => Ok(None),
        }
    }

    /// Truncated ratio witness: `h(n) = y(n)/x(n)` up to `cut`, then 1, with
    /// the exact residual `Σ_{n>cut} |x(n) − y(n)|`. The residual is computed
    /// from the suffixes directly, independently of `act`.
    pub fn density_witness(
        &self,
        x: &TailedSeq,
        y: &TailedSeq,
        cut: usize,
        tol: &Rat,
    ) -> Result<DensityWitness> {
        self.check_point(x)?;
        self.check_point(y)?;
        if cut < self.base {
            return Err(Error::IndexBelowBase { index: cut, base: self.base });
        }
        let mut prefix = Vec::with_capacity(cut - self.base + 1);
        for n in self.base..=cut {
            prefix.push(y.entry(n)?.div(&x.entry(n)?)?);
        }
        let element = GroupElement::from_prefix(self.domain, self.base, prefix)?;
        let residual = crate::seq::l1_dist(&suffix(x, cut + 1)?, &suffix(y, cut + 1)?, tol)?;
        Ok(DensityWitness { element, residual })
    }

    /// Escape witness: copies `z` up to `cut`, then follows `factor · x`.
    /// The result certifiably leaves the meager set of `params` and the
    /// exact distance to `z` is returned.
    pub fn meager_escape(
        &self,
        params: &MeagerParams,
        z: &TailedSeq,
        cut: usize,
        tol: &Rat,
    ) -> Result<EscapeWitness> {
        self.check_point(z)?;
        self.check_point(&params.center)?;
        if cut < self.base {
            return Err(Error::IndexBelowBase { index: cut, base: self.base });
        }
        let factor = params.escape_factor();
        let scaled_tail = suffix(&params.center, cut + 1)?
            .scale(&scale_scalar(&factor, params.center.mode()))?;
        let mut prefix = Vec::with_capacity(cut - self.base + 1 + scaled_tail.prefix().len());
        for n in self.base..=cut {
            prefix.push(z.entry(n)?);
        }
        prefix.extend_from_slice(scaled_tail.prefix());
        let point = TailedSeq::new(self.base, prefix, scaled_tail.tail().clone())?;
        self.check_point(&point)?;
        let residual = crate::seq::l1_dist(&point, z, tol)?;
        let verdict = meager_member(params, &point)?;
        if verdict.member {
            return Err(Error::Precondition(
                "escape point unexpectedly stayed in the meager set".into(),
            ));
        }
        Ok(EscapeWitness { point, residual, verdict })
    }
}

fn scale_scalar(q: &Rat, mode: ScalarMode) -> Scalar {
    match mode {
        ScalarMode::ExactReal => Scalar::Rational(q.clone()),
        ScalarMode::ExactComplex => Scalar::Complex { re: q.clone(), im: Rat::from_integer(0.into()) },
        ScalarMode::Float => Scalar::Float(crate::scalar::rat_to_f64(q)),
    }
}

/// The suffix of a sequence from index `from`, re-based at `from`.
pub fn suffix(x: &TailedSeq, from: usize) -> Result<TailedSeq> {
    if from < x.base() {
        return Err(Error::IndexBelowBase { index: from, base: x.base() });
    }
    let mut prefix = Vec::new();
    for n in from..x.tail_start().max(from) {
        prefix.push(x.entry(n)?);
    }
    let tail = if from >= x.tail_start() {
        match x.tail() {
            TailModel::Constant(c) => TailModel::Constant(c.clone()),
            TailModel::Geometric { first, ratio } => TailModel::Geometric {
                first: first.mul(&ratio.pow((from - x.tail_start()) as i64)?)?,
                ratio: ratio.clone(),
            },
        }
    } else {
        x.tail().clone()
    };
    TailedSeq::new(from, prefix, tail)
}

/// Truncated ratio witness with its exact residual.
#[derive(Debug, Clone)]
pub struct DensityWitness {
    pub element: GroupElement,
    pub residual: Mag,
}

/// Parameters of the eventual-ratio-bound set around a center point:
/// membership means the entrywise ratio against the center is eventually at
/// most `ratio_bound` in modulus.
#[derive(Debug, Clone)]
pub struct MeagerParams {
    center: TailedSeq,
    ratio_bound: Rat,
    min_start: usize,
}

impl MeagerParams {
    pub fn new(center: TailedSeq, ratio_bound: Rat) -> Result<Self> {
        if ratio_bound <= Rat::one() {
            return Err(Error::InvalidParameter(
                "ratio bound must exceed 1".into(),
            ));
        }
        let min_start = center.base();
        Ok(MeagerParams { center, ratio_bound, min_start })
    }

    /// Default bound 3/2.
    pub fn with_default_bound(center: TailedSeq) -> Result<Self> {
        MeagerParams::new(center, Rat::new(3.into(), 2.into()))
    }

    pub fn center(&self) -> &TailedSeq {
        &self.center
    }

    pub fn ratio_bound(&self) -> &Rat {
        &self.ratio_bound
    }

    /// Scaling factor used by escape witnesses; any exact rational strictly
    /// above the bound works, and 2 matches the default bound.
    pub fn escape_factor(&self) -> Rat {
        let two = Rat::from_integer(2.into());
        if self.ratio_bound < two {
            two
        } else {
            self.ratio_bound.floor() + Rat::one()
        }
    }
}

/// Membership verdict with the witness start index when membership holds.
#[derive(Debug, Clone)]
pub struct MeagerVerdict {
    pub member: bool,
    /// Least index from which the ratio bound holds onward.
    pub witness_start: Option<usize>,
}

/// Decides `∃m ∀n≥m |y(n)/x(n)| ≤ bound` exactly from the tail shapes: the
/// entrywise ratio of two geometric tails is constant, decaying, or growing,
/// and each case is decidable in rational arithmetic (squared moduli in
/// complex mode).
pub fn meager_member(params: &MeagerParams, y: &TailedSeq) -> Result<MeagerVerdict> {
    let x = &params.center;
    if y.base() != x.base() {
        return Err(Error::BaseMismatch { left: y.base(), right: x.base() });
    }
    let bound_sq = &params.ratio_bound * &params.ratio_bound;
    let ratio = SeqView::from_seq(y)?.div(&SeqView::from_seq(x)?)?;
    let tail_start = ratio.tail_start();
    let holds_at = |n: usize| -> Result<bool> {
        let v = ratio.entry(n)?;
        Ok(v.abs_sqr() <= bound_sq)
    };
    let tail_member = match ratio.tail() {
        ViewTail::Constant(c) => c.abs_sqr() <= bound_sq,
        ViewTail::Geometric { .. } => true,
        ViewTail::RecipGeometric { .. } => false,
    };
    if !tail_member {
        return Ok(MeagerVerdict { member: false, witness_start: None });
    }
    // Find the first tail offset from which the bound holds onward; the
    // modulus is monotone along a geometric tail, so a single scan suffices.
    let mut m = tail_start;
    if let ViewTail::Geometric { .. } = ratio.tail() {
        let mut k = tail_start;
        loop {
            if holds_at(k)? {
                break;
            }
            k += 1;
            if k > tail_start + 100_000 {
                return Err(Error::ToleranceExhausted(
                    "ratio bound not reached within 100000 tail terms".into(),
                ));
            }
        }
        m = k;
    }
    // Extend the witness backward over the prefix region while the bound
    // already holds, reporting the least such start.
    while m > params.min_start.max(y.base()) && holds_at(m - 1)? {
        m -= 1;
    }
    Ok(MeagerVerdict { member: true, witness_start: Some(m) })
}

/// Escape witness: the modified point, its exact distance to the original,
/// and the (negative) membership verdict.
#[derive(Debug, Clone)]
pub struct EscapeWitness {
    pub point: TailedSeq,
    pub residual: Mag,
    pub verdict: MeagerVerdict,
}

/// One line of the JSON experiment log written by the runners.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub operation: String,
    pub inputs: BTreeMap<String, String>,
    pub witness: String,
    pub residual_fraction: Option<String>,
    pub residual_decimal: Option<String>,
    pub verdict: String,
}

impl ExperimentRecord {
    pub fn residual(mut self, r: &Rat) -> Self {
        self.residual_fraction = Some(rat_to_text(r));
        self.residual_decimal = Some(rat_to_decimal(r, 12));
        self
    }
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

    fn halves() -> TailedSeq {
        TailedSeq::geometric(0, S::ratio(1, 2), S::ratio(1, 2)).unwrap()
    }

    fn thirds() -> TailedSeq {
        TailedSeq::geometric(0, S::ratio(1, 3), S::ratio(1, 3)).unwrap()
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
    fn act_examples() {
        let ctx = ActionCtx::positive();
        let x = halves();
        let id = GroupElement::identity(Domain::PositiveReal, ScalarMode::ExactReal, 0);
        assert_eq!(ctx.act(&id, &x).unwrap(), x);
        let two = elem(&[(2, 1)]);
        let y = ctx.act(&two, &x).unwrap();
        assert_eq!(y.entry(0).unwrap(), S::from_int(1));
        assert_eq!(y.entry(1).unwrap(), S::ratio(1, 4));
        assert_eq!(
            crate::seq::l1_norm(&y, &tol()).unwrap(),
            Mag::Exact(rat(3, 2))
        );
        // act(g, act(g⁻¹, x)) = x exactly
        let g = elem(&[(3, 2), (5, 7)]);
        let ginv = crate::groups::inv(&crate::groups::GroupCtx::positive(), &g).unwrap();
        assert_eq!(ctx.act(&g, &ctx.act(&ginv, &x).unwrap()).unwrap(), x);
    }

    #[test]
    fn act_rejects_space_violations() {
        let ctx = ActionCtx::positive();
        let not_summable = TailedSeq::constant(0, S::from_int(1)).unwrap();
        let id = GroupElement::identity(Domain::PositiveReal, ScalarMode::ExactReal, 0);
        assert!(ctx.act(&id, &not_summable).is_err());
    }

    #[test]
    fn orbit_member_examples() {
        let ctx = ActionCtx::positive();
        let x = halves();
        let same = ctx.orbit_member(&x, &x).unwrap().unwrap();
        assert!(same.is_identity());
        let g = elem(&[(2, 1)]);
        let y = ctx.act(&g, &x).unwrap();
        assert_eq!(ctx.orbit_member(&y, &x).unwrap().unwrap(), g);
        // different geometric decay: no representable witness
        assert!(ctx.orbit_member(&thirds(), &x).unwrap().is_none());
    }

    #[test]
    fn density_witness_examples() {
        let ctx = ActionCtx::positive();
        let x = halves();
        // y = x: zero residual at every cut
        for cut in 0..4 {
            let w = ctx.density_witness(&x, &x, cut, &tol()).unwrap();
            assert!(w.element.is_identity());
            assert!(w.residual.is_zero());
        }
        // x = 2^{-(n+1)}, y = 3^{-(n+1)}
        let y = thirds();
        let w1 = ctx.density_witness(&x, &y, 1, &tol()).unwrap();
        assert_eq!(w1.residual, Mag::Exact(rat(7, 36)));
        let w2 = ctx.density_witness(&x, &y, 2, &tol()).unwrap();
        assert_eq!(w2.residual, Mag::Exact(rat(23, 216)));
        assert!(w2.residual.exact().unwrap() < w1.residual.exact().unwrap());
        // the witness ratio entries are y/x
        assert_eq!(w1.element.entry(0).unwrap(), S::ratio(2, 3));
        // cross-check against the action route
        let moved = ctx.act(&w1.element, &x).unwrap();
        assert_eq!(
            crate::seq::l1_dist(&moved, &y, &tol()).unwrap(),
            w1.residual
        );
    }

    #[test]
    fn meager_membership_examples() {
        let x = halves();
        let params = MeagerParams::with_default_bound(x.clone()).unwrap();
        // the center itself: ratio ≡ 1
        let v = meager_member(&params, &x).unwrap();
        assert!(v.member);
        assert_eq!(v.witness_start, Some(0));
        // ratio ≡ 2 exceeds 3/2 everywhere
        let y = x.scale(&S::from_int(2)).unwrap();
        assert!(!meager_member(&params, &y).unwrap().member);
        // every representable group translate stays inside
        let ctx = ActionCtx::positive();
        let h = elem(&[(9, 2), (1, 5)]);
        let moved = ctx.act(&h, &x).unwrap();
        assert!(meager_member(&params, &moved).unwrap().member);
        // decaying ratio: member; growing ratio: not
        assert!(meager_member(&params, &thirds()).unwrap().member);
        let params3 = MeagerParams::with_default_bound(thirds()).unwrap();
        assert!(!meager_member(&params3, &x).unwrap().member);
    }

    #[test]
    fn meager_params_validation() {
        assert!(MeagerParams::new(halves(), rat(1, 1)).is_err());
        assert!(MeagerParams::new(halves(), rat(1, 2)).is_err());
    }

    #[test]
    fn meager_escape_examples() {
        let ctx = ActionCtx::positive();
        let x = halves();
        let params = MeagerParams::with_default_bound(x.clone()).unwrap();
        // z = 2x is a fixed point of the construction
        let z = x.scale(&S::from_int(2)).unwrap();
        let w = ctx.meager_escape(&params, &z, 0, &tol()).unwrap();
        assert_eq!(w.point, z);
        assert!(w.residual.is_zero());
        assert!(!w.verdict.member);
        // z = 3^{-(n+1)}, cut 0: residual 5/6
        let z = thirds();
        let w0 = ctx.meager_escape(&params, &z, 0, &tol()).unwrap();
        assert_eq!(w0.residual, Mag::Exact(rat(5, 6)));
        assert_eq!(w0.point.entry(0).unwrap(), S::ratio(1, 3));
        assert_eq!(w0.point.entry(1).unwrap(), S::ratio(1, 2));
        // residual decreases with the cut
        let w1 = ctx.meager_escape(&params, &z, 1, &tol()).unwrap();
        assert!(w1.residual.exact().unwrap() < w0.residual.exact().unwrap());
    }

    #[test]
    fn suffix_agrees_with_entries() {
        let x = TailedSeq::new(
            0,
            vec![S::from_int(5), S::ratio(1, 3)],
            TailModel::geometric(S::ratio(1, 4), S::ratio(1, 2)).unwrap(),
        )
        .unwrap();
        for from in 0..5 {
            let s = suffix(&x, from).unwrap();
            assert_eq!(s.base(), from);
            for n in from..from + 6 {
                assert_eq!(s.entry(n).unwrap(), x.entry(n).unwrap());
            }
        }
    }
}
