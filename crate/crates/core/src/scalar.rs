//! Exact field elements: arbitrary-precision rationals and prime-field residues.
//!
//! A [`Scalar`] always knows which field it lives in. The checked operations
//! (`try_add`, `try_div`, ...) report mixed-field operands and division by
//! zero as errors; the operator impls on references panic instead and are
//! meant for code that has already validated a whole [`PointSet`] against
//! one [`FieldSpec`].
//!
//! [`PointSet`]: crate::geometry::PointSet

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted by the prime backend. Residue products are
/// computed in `u128`, so anything below `2^63` is safe; trial division keeps
/// field creation cheap well below that.
pub const MAX_PRIME: u64 = (1 << 40) - 1;

/// Which field a point set lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecRepr", into = "FieldSpecRepr")]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FieldSpecRepr {
    Rational,
    Prime { p: u64 },
}

impl TryFrom<FieldSpecRepr> for FieldSpec {
    type Error = Error;

    fn try_from(repr: FieldSpecRepr) -> Result<Self> {
        match repr {
            FieldSpecRepr::Rational => Ok(FieldSpec::Rational),
            FieldSpecRepr::Prime { p } => FieldSpec::prime(p),
        }
    }
}

impl From<FieldSpec> for FieldSpecRepr {
    fn from(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rational => FieldSpecRepr::Rational,
            FieldSpec::Prime(p) => FieldSpecRepr::Prime { p },
        }
    }
}

impl FieldSpec {
    /// Creates the prime field `F_p`, rejecting composite or out-of-range `p`.
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// 0 for the rationals, `p` for `F_p`.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Characteristic-2 fields are valid but several incidence theorems
    /// exclude them.
    pub fn is_char_two(&self) -> bool {
        self.characteristic() == 2
    }

    /// Number of elements, `None` for infinite fields.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
            FieldSpec::Prime(p) => Scalar::Prime(Fp::new(v.rem_euclid(*p as i64) as u64, *p)),
        }
    }

    /// The fraction `num/den` as a field element.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        self.from_i64(num).try_div(&self.from_i64(den))
    }

    /// The rational backend's element from a `BigRational`; prime fields
    /// reduce numerator and denominator separately.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar> {
        match self {
            FieldSpec::Rational => Ok(Scalar::Rational(r.clone())),
            FieldSpec::Prime(p) => {
                let num = Fp::from_bigint(r.numer(), *p);
                let den = Fp::from_bigint(r.denom(), *p);
                Scalar::Prime(num).try_div(&Scalar::Prime(den))
            }
        }
    }

    /// Short label used in reports and CSV output: `Q` or `F<p>`.
    pub fn label(&self) -> String {
        match self {
            FieldSpec::Rational => "Q".to_string(),
            FieldSpec::Prime(p) => format!("F{p}"),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Canonical residue modulo a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    fn new(value: u64, modulus: u64) -> Self {
        debug_assert!(value < modulus);
        Fp { value, modulus }
    }

    fn from_bigint(v: &BigInt, p: u64) -> Self {
        let m = BigInt::from(p);
        let r = ((v % &m) + &m) % &m;
        let value = u64::try_from(r).expect("residue fits in u64");
        Fp::new(value, p)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn add(self, o: Fp) -> Fp {
        let s = (self.value as u128 + o.value as u128) % self.modulus as u128;
        Fp::new(s as u64, self.modulus)
    }

    fn sub(self, o: Fp) -> Fp {
        let s = (self.value as u128 + self.modulus as u128 - o.value as u128) % self.modulus as u128;
        Fp::new(s as u64, self.modulus)
    }

    fn mul(self, o: Fp) -> Fp {
        let s = (self.value as u128 * o.value as u128) % self.modulus as u128;
        Fp::new(s as u64, self.modulus)
    }

    fn neg(self) -> Fp {
        if self.value == 0 {
            self
        } else {
            Fp::new(self.modulus - self.value, self.modulus)
        }
    }

    fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp::new(1 % self.modulus, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    fn inv(self) -> Option<Fp> {
        if self.value == 0 {
            None
        } else {
            // Fermat: a^(p-2) = a^-1 for prime p.
            Some(self.pow(self.modulus - 2))
        }
    }
}

/// An element of one of the supported fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime(Fp),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Prime(x) => FieldSpec::Prime(x.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime(x) => x.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime(x) => x.value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Prime(_) => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self {
            Scalar::Prime(x) => Some(x.value),
            Scalar::Rational(_) => None,
        }
    }

    fn binary(
        &self,
        other: &Scalar,
        rat: impl FnOnce(&BigRational, &BigRational) -> BigRational,
        fp: impl FnOnce(Fp, Fp) -> Fp,
    ) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(rat(a, b))),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.modulus == b.modulus => {
                Ok(Scalar::Prime(fp(*a, *b)))
            }
            _ => Err(Error::FieldMismatch {
                left: self.field(),
                right: other.field(),
            }),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.binary(other, |a, b| a + b, Fp::add)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.binary(other, |a, b| a - b, Fp::sub)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.binary(other, |a, b| a * b, Fp::mul)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch {
                left: self.field(),
                right: other.field(),
            });
        }
        let inv = other.inv()?;
        self.try_mul(&inv)
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Rational(r) if r.is_zero() => Err(Error::DivisionByZero),
            Scalar::Rational(r) => Ok(Scalar::Rational(r.recip())),
            Scalar::Prime(x) => x.inv().map(Scalar::Prime).ok_or(Error::DivisionByZero),
        }
    }

    /// Exact equality that also rejects comparing across fields.
    pub fn try_eq(&self, other: &Scalar) -> Result<bool> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch {
                left: self.field(),
                right: other.field(),
            });
        }
        Ok(self == other)
    }

    /// Parses the text grammar used by point-set files: `a` or `a/b` over the
    /// rationals, a decimal integer over `F_p`.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Scalar> {
        let malformed = || Error::Parse(format!("malformed scalar {text:?} for field {field}"));
        let normalized = text.trim().replace('\u{2212}', "-");
        match field {
            FieldSpec::Rational => {
                let (num, den) = match normalized.split_once('/') {
                    Some((n, d)) => (n, Some(d)),
                    None => (normalized.as_str(), None),
                };
                let num = parse_integer(num).ok_or_else(malformed)?;
                let den = match den {
                    Some(d) => parse_integer(d).ok_or_else(malformed)?,
                    None => BigInt::one(),
                };
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {text:?}")));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            FieldSpec::Prime(p) => {
                let v = parse_integer(&normalized).ok_or_else(malformed)?;
                Ok(Scalar::Prime(Fp::from_bigint(&v, p)))
            }
        }
    }

    /// Rational-only ordering helper; `None` for prime-field elements.
    pub fn to_f64(&self) -> Option<f64> {
        use num_traits::ToPrimitive;
        self.as_rational().and_then(|r| r.to_f64())
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.strip_prefix('+').unwrap_or(s).parse().ok()
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Prime(x) => write!(f, "{}", x.value),
        }
    }
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;

            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar operands from different fields")
            }
        }
    };
}

panicking_op!(Add, add, try_add);
panicking_op!(Sub, sub, try_sub);
panicking_op!(Mul, mul, try_mul);

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Prime(x) => Scalar::Prime(x.neg()),
        }
    }
}
