//! Exact scalar arithmetic over the rationals and odd prime fields.
//!
//! A [`Field`] is a small copyable context; a [`Scalar`] carries enough
//! information to do arithmetic on its own (the modulus travels with every
//! residue). Mixing scalars from two different fields is a logic error and
//! panics.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Trial division bound used when computing rational square classes.
const TRIAL_DIVISION_LIMIT: u64 = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero has no square class")]
    ZeroInput,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("scalar {0} does not belong to {1}")]
    WrongField(String, FieldSpec),
    #[error("square class of {0} needs factoring beyond the trial-division bound")]
    FactorizationLimit(String),
}

/// Serializable description of a base field: `{"kind": "rationals"}` or
/// `{"kind": "prime", "p": 7}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Rationals,
    Prime { p: u64 },
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `rationals`, `Q`, `prime:7`, `F7`, `F_7` or a bare `7`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        if lower == "rationals" || lower == "q" || lower == "rational" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = lower
            .strip_prefix("prime:")
            .or_else(|| lower.strip_prefix("f_"))
            .or_else(|| lower.strip_prefix('f'))
            .unwrap_or(&lower);
        digits
            .parse::<u64>()
            .map(|p| FieldSpec::Prime { p })
            .map_err(|_| FieldError::Parse(t.to_string()))
    }
}

/// Validated field context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    spec: FieldSpec,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec.fmt(f)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field, FieldError> {
        if let FieldSpec::Prime { p } = spec {
            if p == 2 {
                return Err(FieldError::EvenCharacteristic);
            }
            if !is_prime(p) {
                return Err(FieldError::NotPrime(p));
            }
        }
        Ok(Field { spec })
    }

    pub fn rationals() -> Field {
        Field {
            spec: FieldSpec::Rationals,
        }
    }

    pub fn prime(p: u64) -> Result<Field, FieldError> {
        Field::new(FieldSpec::Prime { p })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// 0 for the rationals, `p` for a prime field.
    pub fn characteristic(&self) -> u64 {
        match self.spec {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime { p } => p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.spec, FieldSpec::Prime { .. })
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self.spec {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime { p } => {
                Scalar::Residue(Residue::new(n.rem_euclid(p as i64) as u64, p))
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self.spec {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::Prime { p } => {
                let r = n
                    .mod_floor(&BigInt::from(p))
                    .to_u64()
                    .expect("residue fits u64");
                Scalar::Residue(Residue::new(r, p))
            }
        }
    }

    /// `num / den` as a field element.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar, FieldError> {
        let d = self.from_i64(den);
        let inv = d.inv().ok_or(FieldError::DivisionByZero)?;
        Ok(self.from_i64(num) * inv)
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (self.spec, a) {
            (FieldSpec::Rationals, Scalar::Rational(_)) => true,
            (FieldSpec::Prime { p }, Scalar::Residue(r)) => r.modulus == p,
            _ => false,
        }
    }

    pub fn check(&self, a: &Scalar) -> Result<(), FieldError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(FieldError::WrongField(a.to_string(), self.spec))
        }
    }

    /// Parses `"3/2"`, `"-4"` or `"4 mod 7"`.
    pub fn parse(&self, s: &str) -> Result<Scalar, FieldError> {
        let err = || FieldError::Parse(s.to_string());
        let t = s.trim();
        let body = match t.split_once("mod") {
            Some((lhs, modulus)) => {
                let m: u64 = modulus.trim().parse().map_err(|_| err())?;
                if self.characteristic() != m {
                    return Err(FieldError::WrongField(t.to_string(), self.spec));
                }
                lhs.trim()
            }
            None => t,
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (body, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        let den = self.from_bigint(&den);
        let inv = den.inv().ok_or(FieldError::DivisionByZero)?;
        Ok(self.from_bigint(&num) * inv)
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self.spec {
            FieldSpec::Rationals => None,
            FieldSpec::Prime { p } => Some(p),
        }
    }

    /// All elements of a prime field in residue order, starting at 0.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.order()
            .map(|p| (0..p).map(|v| self.from_i64(v as i64)).collect())
    }

    /// All nonzero elements of a prime field.
    pub fn units(&self) -> Option<Vec<Scalar>> {
        self.order()
            .map(|p| (1..p).map(|v| self.from_i64(v as i64)).collect())
    }

    /// Least quadratic nonresidue of a prime field.
    pub fn least_nonsquare(&self) -> Option<Scalar> {
        let p = self.order()?;
        (2..p)
            .map(|v| self.from_i64(v as i64))
            .find(|a| !euler_is_square(a))
    }

    /// Square test with a witness: `Ok(Some(w))` with `w * w == a`, `Ok(None)`
    /// if `a` is not a square.
    pub fn is_square(&self, a: &Scalar) -> Result<Option<Scalar>, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        match a {
            Scalar::Rational(q) => {
                if q.is_negative() {
                    return Ok(None);
                }
                let n = q.numer().sqrt();
                let d = q.denom().sqrt();
                if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
                    Ok(Some(Scalar::Rational(BigRational::new(n, d))))
                } else {
                    Ok(None)
                }
            }
            Scalar::Residue(r) => {
                if !euler_is_square(a) {
                    return Ok(None);
                }
                // exhaustive search; p is desk-sized
                let w = (1..=r.modulus / 2)
                    .find(|&w| (w as u128 * w as u128 % r.modulus as u128) as u64 == r.value)
                    .expect("Euler criterion guarantees a root");
                Ok(Some(Scalar::Residue(Residue::new(w, r.modulus))))
            }
        }
    }

    /// Canonical representative of `a (F*)^2`: 1 or the least nonsquare over
    /// `F_p`, the squarefree integer part over the rationals.
    pub fn square_class(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        match a {
            Scalar::Rational(q) => {
                let n = q.numer() * q.denom();
                let sf = squarefree_part(&n)
                    .ok_or_else(|| FieldError::FactorizationLimit(a.to_string()))?;
                Ok(Scalar::Rational(BigRational::from_integer(sf)))
            }
            Scalar::Residue(_) => {
                if euler_is_square(a) {
                    Ok(self.one())
                } else {
                    Ok(self
                        .least_nonsquare()
                        .expect("odd prime field has a nonsquare"))
                }
            }
        }
    }
}

fn euler_is_square(a: &Scalar) -> bool {
    match a {
        Scalar::Residue(r) => a.pow((r.modulus - 1) / 2).is_one(),
        Scalar::Rational(_) => unreachable!("Euler criterion only applies to residues"),
    }
}

/// Signed squarefree part of a nonzero integer, `None` past the trial bound.
fn squarefree_part(n: &BigInt) -> Option<BigInt> {
    let negative = n.is_negative();
    let mut rest = n.abs();
    let mut out = BigInt::one();
    let mut d = 2u64;
    while d < TRIAL_DIVISION_LIMIT {
        let dd = BigInt::from(d);
        if &dd * &dd > rest {
            break;
        }
        let mut count = 0u32;
        while (&rest % &dd).is_zero() {
            rest /= &dd;
            count += 1;
        }
        if count % 2 == 1 {
            out *= &dd;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let limit = BigInt::from(TRIAL_DIVISION_LIMIT);
        let r = rest.sqrt();
        if &r * &r == rest {
            // a square cofactor contributes nothing
        } else if rest < &limit * &limit {
            out *= rest;
        } else {
            return None;
        }
    }
    Some(if negative { -out } else { out })
}

/// Residue modulo an odd prime, always in `[0, modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    fn new(value: u64, modulus: u64) -> Residue {
        debug_assert!(value < modulus);
        Residue { value, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Residue(Residue),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::rationals(),
            Scalar::Residue(r) => Field {
                spec: FieldSpec::Prime { p: r.modulus },
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue(r) => r.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue(r) => r.value == 1,
        }
    }

    /// `true` for `-1`.
    pub fn is_minus_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => (q + BigRational::one()).is_zero(),
            Scalar::Residue(r) => r.value + 1 == r.modulus,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue(r) => self.pow(r.modulus - 2),
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power allowing negative exponents on units.
    pub fn powi(&self, e: i64) -> Option<Scalar> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|i| i.pow(e.unsigned_abs()))
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue(_) => None,
        }
    }

    pub fn as_residue(&self) -> Option<Residue> {
        match self {
            Scalar::Residue(r) => Some(*r),
            Scalar::Rational(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue(r) => write!(f, "{} mod {}", r.value, r.modulus),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {a} vs {b}")
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue(a), Scalar::Residue(b)) if a.modulus == b.modulus => {
                let s = a.value + b.value;
                let s = if s >= a.modulus { s - a.modulus } else { s };
                Scalar::Residue(Residue::new(s, a.modulus))
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue(a), Scalar::Residue(b)) if a.modulus == b.modulus => {
                let s = a.value + a.modulus - b.value;
                let s = if s >= a.modulus { s - a.modulus } else { s };
                Scalar::Residue(Residue::new(s, a.modulus))
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue(a), Scalar::Residue(b)) if a.modulus == b.modulus => {
                let v = (a.value as u128 * b.value as u128 % a.modulus as u128) as u64;
                Scalar::Residue(Residue::new(v, a.modulus))
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue(a) => {
                let v = if a.value == 0 { 0 } else { a.modulus - a.value };
                Scalar::Residue(Residue::new(v, a.modulus))
            }
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn make_field_validates_characteristic() {
        assert_eq!(f(7).characteristic(), 7);
        assert_eq!(Field::prime(2), Err(FieldError::EvenCharacteristic));
        assert_eq!(Field::prime(9), Err(FieldError::NotPrime(9)));
        assert_eq!(Field::prime(1), Err(FieldError::NotPrime(1)));
        assert_eq!(Field::rationals().characteristic(), 0);
    }

    #[test]
    fn square_witness_mod_7() {
        let k = f(7);
        let w = k.is_square(&k.from_i64(2)).unwrap().unwrap();
        assert_eq!(w, k.from_i64(3));
        assert_eq!(&w * &w, k.from_i64(2));
    }

    #[test]
    fn square_rational() {
        let q = Field::rationals();
        let a = q.ratio(4, 9).unwrap();
        assert_eq!(q.is_square(&a).unwrap(), Some(q.ratio(2, 3).unwrap()));
        assert_eq!(q.is_square(&q.from_i64(-4)).unwrap(), None);
        assert_eq!(q.is_square(&q.from_i64(2)).unwrap(), None);
    }

    #[test]
    fn two_is_not_a_square_mod_3() {
        let k = f(3);
        // oracle: squares of the units
        let squares: Vec<_> = k.units().unwrap().iter().map(|u| u * u).collect();
        assert!(!squares.contains(&k.from_i64(2)));
        assert_eq!(k.is_square(&k.from_i64(2)).unwrap(), None);
    }

    #[test]
    fn zero_input_rejected() {
        let k = f(5);
        assert_eq!(k.is_square(&k.zero()), Err(FieldError::ZeroInput));
        assert_eq!(k.square_class(&k.zero()), Err(FieldError::ZeroInput));
    }

    #[test]
    fn square_classes() {
        let k = f(5);
        assert_eq!(k.square_class(&k.from_i64(3)).unwrap(), k.from_i64(2));
        assert_eq!(k.square_class(&k.from_i64(4)).unwrap(), k.one());
        let q = Field::rationals();
        assert_eq!(q.square_class(&q.from_i64(18)).unwrap(), q.from_i64(2));
        assert_eq!(
            q.square_class(&q.ratio(-3, 12).unwrap()).unwrap(),
            q.from_i64(-1)
        );
        assert_eq!(q.square_class(&q.one()).unwrap(), q.one());
        assert_eq!(
            q.square_class(&q.ratio(5, 7).unwrap()).unwrap(),
            q.from_i64(35)
        );
    }

    #[test]
    fn parse_and_display() {
        let q = Field::rationals();
        let a = q.parse("3/2").unwrap();
        assert_eq!(a.to_string(), "3/2");
        assert_eq!(q.parse(" -6/4 ").unwrap().to_string(), "-3/2");
        let k = f(7);
        assert_eq!(k.parse("4 mod 7").unwrap(), k.from_i64(4));
        assert_eq!(k.parse("1/2").unwrap(), k.from_i64(4));
        assert_eq!(k.from_i64(-1).to_string(), "6 mod 7");
        assert!(k.parse("4 mod 5").is_err());
        assert_eq!(k.parse("1/7"), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn field_spec_strings() {
        assert_eq!(
            "rationals".parse::<FieldSpec>().unwrap(),
            FieldSpec::Rationals
        );
        assert_eq!(
            "prime:7".parse::<FieldSpec>().unwrap(),
            FieldSpec::Prime { p: 7 }
        );
        assert_eq!(
            "F5".parse::<FieldSpec>().unwrap(),
            FieldSpec::Prime { p: 5 }
        );
        let json = serde_json::to_string(&FieldSpec::Prime { p: 7 }).unwrap();
        assert_eq!(json, r#"{"kind":"prime","p":7}"#);
        let back: FieldSpec = serde_json::from_str(r#"{"kind":"rationals"}"#).unwrap();
        assert_eq!(back, FieldSpec::Rationals);
    }

    #[test]
    fn minus_one_detection() {
        assert!(f(5).from_i64(4).is_minus_one());
        assert!(Field::rationals().from_i64(-1).is_minus_one());
        assert!(!Field::rationals().from_i64(1).is_minus_one());
    }
}
