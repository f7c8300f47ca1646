//! Mode-tagged exact scalars.
//!
//! Three modes: exact rationals, exact complex numbers with rational parts,
//! and binary floats. Exact modes decide equality; floats carry an explicit
//! tolerance at the comparison site. Arithmetic never mixes modes silently —
//! mixing is a reported error, and the only conversions are the deliberate
//! [`Scalar::to_exact`] and [`Scalar::as_f64`].

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, arbitrary precision.
pub type Rat = BigRational;

/// Which arithmetic a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    ExactReal,
    ExactComplex,
    Float,
}

impl ScalarMode {
    pub fn name(self) -> &'static str {
        match self {
            ScalarMode::ExactReal => "exact-real",
            ScalarMode::ExactComplex => "exact-complex",
            ScalarMode::Float => "float",
        }
    }

    pub(crate) fn tag(self) -> &'static str {
        match self {
            ScalarMode::ExactReal => "rat",
            ScalarMode::ExactComplex => "cplx",
            ScalarMode::Float => "f64",
        }
    }

    pub(crate) fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "rat" => Ok(ScalarMode::ExactReal),
            "cplx" => Ok(ScalarMode::ExactComplex),
            "f64" => Ok(ScalarMode::Float),
            other => Err(Error::Parse(format!("unknown scalar mode tag `{other}`"))),
        }
    }
}

/// A scalar in one of the three modes.
///
/// `PartialEq` is representation equality (bitwise on floats); use
/// [`Scalar::eq_exact`] for a decided equality in exact modes.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(Rat),
    Complex { re: Rat, im: Rat },
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Rational(_) => ScalarMode::ExactReal,
            Scalar::Complex { .. } => ScalarMode::ExactComplex,
            Scalar::Float(_) => ScalarMode::Float,
        }
    }

    pub fn zero(mode: ScalarMode) -> Self {
        match mode {
            ScalarMode::ExactReal => Scalar::Rational(Rat::zero()),
            ScalarMode::ExactComplex => Scalar::Complex { re: Rat::zero(), im: Rat::zero() },
            ScalarMode::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(mode: ScalarMode) -> Self {
        match mode {
            ScalarMode::ExactReal => Scalar::Rational(Rat::one()),
            ScalarMode::ExactComplex => Scalar::Complex { re: Rat::one(), im: Rat::zero() },
            ScalarMode::Float => Scalar::Float(1.0),
        }
    }

    pub fn from_rat(q: Rat) -> Self {
        Scalar::Rational(q)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(Rat::from_integer(BigInt::from(n)))
    }

    /// `p/q` as an exact-real scalar. Panics if `q == 0` (test convenience).
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::Rational(Rat::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `a/b + (c/d)i` as an exact-complex scalar.
    pub fn complex(a: i64, b: i64, c: i64, d: i64) -> Self {
        assert!(b != 0 && d != 0, "zero denominator");
        Scalar::Complex {
            re: Rat::new(BigInt::from(a), BigInt::from(b)),
            im: Rat::new(BigInt::from(c), BigInt::from(d)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Complex { re, im } => re.is_zero() && im.is_zero(),
            Scalar::Float(f) => *f == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Complex { re, im } => re.is_one() && im.is_zero(),
            Scalar::Float(f) => *f == 1.0,
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::ModeMismatch { left: self.mode().name(), right: other.mode().name() }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Complex { re: a, im: b }, Scalar::Complex { re: c, im: d }) => {
                Ok(Scalar::Complex { re: a + c, im: b + d })
            }
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Complex { re, im } => Scalar::Complex { re: -re, im: -im },
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Complex { re: a, im: b }, Scalar::Complex { re: c, im: d }) => {
                Ok(Scalar::Complex { re: a * c - b * d, im: a * d + b * c })
            }
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.mul(&other.recip()?)
    }

    pub fn recip(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Complex { re, im } => {
                let n = re * re + im * im;
                Scalar::Complex { re: re / &n, im: -im / &n }
            }
            Scalar::Float(f) => Scalar::Float(1.0 / f),
        })
    }

    /// Integer power, negative exponents via the reciprocal.
    pub fn pow(&self, exp: i64) -> Result<Scalar> {
        if exp < 0 {
            return self.recip()?.pow(-exp);
        }
        let mut acc = Scalar::one(self.mode());
        let mut sq = self.clone();
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Decided equality. Errors in float mode: floats compare via
    /// [`Scalar::approx_eq`] with an explicit tolerance.
    pub fn eq_exact(&self, other: &Scalar) -> Result<bool> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(a == b),
            (Scalar::Complex { re: a, im: b }, Scalar::Complex { re: c, im: d }) => {
                Ok(a == c && b == d)
            }
            (Scalar::Float(_), Scalar::Float(_)) => Err(Error::FloatEquality),
            _ => Err(self.mismatch(other)),
        }
    }

    /// Float comparison at tolerance `tol`; exact modes fall back to equality.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> Result<bool> {
        match (self, other) {
            (Scalar::Float(a), Scalar::Float(b)) => Ok((a - b).abs() <= tol),
            _ => self.eq_exact(other),
        }
    }

    /// Squared modulus, exact in exact modes. Decides modulus comparisons
    /// without square roots.
    pub fn abs_sqr(&self) -> Rat {
        match self {
            Scalar::Rational(q) => q * q,
            Scalar::Complex { re, im } => re * re + im * im,
            Scalar::Float(f) => {
                Rat::from_float(f * f).unwrap_or_else(Rat::zero)
            }
        }
    }

    /// Exact absolute value; errors in complex mode where |z| is irrational
    /// in general (use [`sqrt_enclosure`] on [`Scalar::abs_sqr`] there).
    pub fn abs_exact(&self) -> Result<Rat> {
        match self {
            Scalar::Rational(q) => Ok(q.abs()),
            Scalar::Complex { .. } => Err(Error::ToleranceExhausted(
                "complex modulus has no exact rational value".into(),
            )),
            Scalar::Float(f) => Rat::from_float(f.abs())
                .ok_or_else(|| Error::Parse("non-finite float".into())),
        }
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Lossy view as `f64` (exact values rounded to nearest float).
    pub fn as_f64(&self) -> f64 {
        match self {
            Scalar::Rational(q) => rat_to_f64(q),
            Scalar::Complex { re, im } => {
                let (re, im) = (rat_to_f64(re), rat_to_f64(im));
                (re * re + im * im).sqrt()
            }
            Scalar::Float(f) => *f,
        }
    }

    /// Deliberate promotion of a float to the exact rational it denotes.
    /// Identity on exact modes.
    pub fn to_exact(&self) -> Result<Scalar> {
        match self {
            Scalar::Float(f) => Rat::from_float(*f)
                .map(Scalar::Rational)
                .ok_or_else(|| Error::Parse("non-finite float".into())),
            other => Ok(other.clone()),
        }
    }

    /// Real-mode ordering; positive means `self > other`.
    pub fn cmp_real(&self, other: &Scalar) -> Result<std::cmp::Ordering> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(a.cmp(b)),
            (Scalar::Float(a), Scalar::Float(b)) => a
                .partial_cmp(b)
                .ok_or_else(|| Error::Parse("NaN in comparison".into())),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn is_positive_real(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_positive(),
            Scalar::Float(f) => *f > 0.0,
            Scalar::Complex { .. } => false,
        }
    }
}

/// Rational-to-float rounding via numerator/denominator floats with a
/// scaling fallback for huge magnitudes.
pub fn rat_to_f64(q: &Rat) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Fall back to scaling by powers of two until both parts fit.
    let mut numer = q.numer().clone();
    let mut denom = q.denom().clone();
    loop {
        match (numer.to_f64(), denom.to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => return n / d,
            _ => {
                numer >>= 32;
                denom >>= 32;
                if numer.is_zero() || denom.is_zero() {
                    return 0.0;
                }
            }
        }
    }
}

/// Canonical `p/q` rendering (always with denominator, reduced form).
pub fn rat_to_text(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn rat_from_text(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        BigInt::from_str(t.trim()).map_err(|e| Error::Parse(format!("bad integer `{t}`: {e}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(parse_int(p)?, denom))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

/// Parses a decimal or scientific literal (`0.25`, `1e-12`) into the exact
/// rational it denotes in base ten.
pub fn rat_from_decimal_text(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.contains('/') {
        return rat_from_text(s);
    }
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
        .map_err(|e| Error::Parse(format!("bad decimal `{s}`: {e}")))?;
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    Ok(if shift >= 0 {
        Rat::from_integer(numer * scale)
    } else {
        Rat::new(numer, scale)
    })
}

/// Deterministic decimal rendering of an exact rational, round half away
/// from zero at `digits` fractional digits, trailing zeros trimmed.
pub fn rat_to_decimal(q: &Rat, digits: u32) -> String {
    let sign = if q.numer().sign() == Sign::Minus { "-" } else { "" };
    let abs = q.abs();
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled = abs.numer() * &scale;
    let (mut quot, rem) = num_integer::Integer::div_rem(&scaled, abs.denom());
    if &rem * 2 >= *abs.denom() {
        quot += 1;
    }
    let whole = &quot / &scale;
    let frac = &quot % &scale;
    if frac.is_zero() {
        return format!("{sign}{whole}");
    }
    let frac_str = format!("{:0width$}", frac, width = digits as usize);
    let frac_str = frac_str.trim_end_matches('0');
    format!("{sign}{whole}.{frac_str}")
}

pub(crate) fn scalar_to_text(s: &Scalar) -> String {
    match s {
        Scalar::Rational(q) => rat_to_text(q),
        Scalar::Complex { re, im } => {
            if im.is_negative() {
                format!("{}-{}i", rat_to_text(re), rat_to_text(&im.abs()))
            } else {
                format!("{}+{}i", rat_to_text(re), rat_to_text(im))
            }
        }
        Scalar::Float(f) => format!("{f}"),
    }
}

pub(crate) fn scalar_from_text(mode: ScalarMode, s: &str) -> Result<Scalar> {
    let s = s.trim();
    match mode {
        ScalarMode::ExactReal => Ok(Scalar::Rational(rat_from_text(s)?)),
        ScalarMode::Float => s
            .parse::<f64>()
            .map(Scalar::Float)
            .map_err(|e| Error::Parse(format!("bad float `{s}`: {e}"))),
        ScalarMode::ExactComplex => {
            let body = s
                .strip_suffix('i')
                .ok_or_else(|| Error::Parse(format!("complex scalar `{s}` must end in `i`")))?;
            // Split on the sign that separates real and imaginary parts: the
            // last '+'/'-' that is not a numerator sign (position 0) and not
            // right after '/'.
            let bytes = body.as_bytes();
            let mut split = None;
            for i in (1..bytes.len()).rev() {
                if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' {
                    split = Some(i);
                    break;
                }
            }
            let i = split
                .ok_or_else(|| Error::Parse(format!("complex scalar `{s}` missing separator")))?;
            let re = rat_from_text(&body[..i])?;
            let im_mag = rat_from_text(&body[i + 1..])?;
            let im = if bytes[i] == b'-' { -im_mag } else { im_mag };
            Ok(Scalar::Complex { re, im })
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&scalar_to_text(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn mode_mixing_is_an_error() {
        let a = Scalar::ratio(1, 2);
        let b = Scalar::Float(0.5);
        assert!(matches!(a.add(&b), Err(Error::ModeMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(Error::ModeMismatch { .. })));
    }

    #[test]
    fn complex_field_ops() {
        let i = Scalar::complex(0, 1, 1, 1);
        let neg_i = Scalar::complex(0, 1, -1, 1);
        assert_eq!(i.recip().unwrap(), neg_i);
        assert!(i.mul(&i).unwrap().eq_exact(&Scalar::complex(-1, 1, 0, 1)).unwrap());
        assert_eq!(i.abs_sqr(), r(1, 1));
    }

    #[test]
    fn zero_reciprocal_rejected() {
        assert!(matches!(Scalar::from_int(0).recip(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn pow_handles_negative_exponents() {
        let half = Scalar::ratio(1, 2);
        assert!(half.pow(3).unwrap().eq_exact(&Scalar::ratio(1, 8)).unwrap());
        assert!(half.pow(-2).unwrap().eq_exact(&Scalar::from_int(4)).unwrap());
    }

    #[test]
    fn text_round_trip() {
        for s in [
            Scalar::ratio(-3, 2),
            Scalar::from_int(7),
            Scalar::complex(1, 2, -3, 4),
            Scalar::complex(0, 1, 1, 1),
            Scalar::Float(1.01),
            Scalar::Float(-0.3333333333333333),
        ] {
            let text = scalar_to_text(&s);
            let back = scalar_from_text(s.mode(), &text).unwrap();
            assert_eq!(s, back, "round trip failed for `{text}`");
        }
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(rat_from_decimal_text("0.25").unwrap(), r(1, 4));
        assert_eq!(rat_from_decimal_text("1e-12").unwrap(), r(1, 1_000_000_000_000));
        assert_eq!(rat_from_decimal_text("-2.5e2").unwrap(), r(-250, 1));
        assert_eq!(rat_from_decimal_text("3/4").unwrap(), r(3, 4));
    }

    #[test]
    fn decimal_rendering_rounds_deterministically() {
        assert_eq!(rat_to_decimal(&r(7, 36), 6), "0.194444");
        assert_eq!(rat_to_decimal(&r(1, 2), 6), "0.5");
        assert_eq!(rat_to_decimal(&r(-1, 3), 4), "-0.3333");
        assert_eq!(rat_to_decimal(&r(5, 1), 6), "5");
    }

    #[test]
    fn float_promotion_is_exact() {
        let f = Scalar::Float(0.1);
        let exact = f.to_exact().unwrap();
        // 0.1 denotes the nearest binary float, not 1/10.
        assert_ne!(exact.as_rat().unwrap(), &r(1, 10));
        assert_eq!(rat_to_f64(exact.as_rat().unwrap()), 0.1);
    }
}
