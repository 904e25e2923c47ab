//! Exact scalar arithmetic over the rationals and over prime fields.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field of the polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p > u32::MAX as u64 {
            return Err(Error::Domain(format!("prime {p} exceeds 2^32")));
        }
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// `None` stands for an infinite field.
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(*p),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.cardinality().is_some()
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Prime {
                value: (v as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Prime {
                value: v % p,
                modulus: p,
            },
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Field::Rationals, Scalar::Rational(_)) => true,
            (Field::Prime(p), Scalar::Prime { value, modulus }) => p == modulus && value < p,
            _ => false,
        }
    }

    /// Parses `"a/b"`, `"a"` (possibly negative) into the field. Over a prime field
    /// a fraction is interpreted as `a * b^-1`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let bad = || Error::BadScalar {
            value: text.to_string(),
            field: self.to_string(),
        };
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        match *self {
            Field::Rationals => Ok(Scalar::Rational(BigRational::new(num, den))),
            Field::Prime(p) => {
                let reduce = |v: &BigInt| -> u64 {
                    let m = BigInt::from(p);
                    let r = ((v % &m) + &m) % &m;
                    u64::try_from(r).expect("residue fits in u64")
                };
                let n = self.from_u64(reduce(&num));
                let d = self.from_u64(reduce(&den));
                let inv = d.inv().ok_or_else(bad)?;
                Ok(&n * &inv)
            }
        }
    }

    /// The field named by `"Q"`, `"F<p>"` or `"Fp:<p>"`.
    pub fn from_name(name: &str) -> Result<Field> {
        let name = name.trim();
        if name == "Q" || name.eq_ignore_ascii_case("rationals") {
            return Ok(Field::Rationals);
        }
        let digits = name
            .strip_prefix("Fp:")
            .or_else(|| name.strip_prefix("GF"))
            .or_else(|| name.strip_prefix('F'))
            .ok_or_else(|| Error::Domain(format!("unknown field {name:?}")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Domain(format!("unknown field {name:?}")))?;
        Field::prime(p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// An element of a [`Field`]. Prime field elements carry their modulus and are
/// always kept in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// True for rationals with a negative sign; prime field elements are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
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

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        let inv = other.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!(
        "scalars from different fields: {} and {}",
        a.field(),
        b.field()
    )
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Prime { value: a, modulus },
                Scalar::Prime {
                    value: b,
                    modulus: m2,
                },
            ) if modulus == m2 => Scalar::Prime {
                value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Prime { value: a, modulus },
                Scalar::Prime {
                    value: b,
                    modulus: m2,
                },
            ) if modulus == m2 => Scalar::Prime {
                value: mul_mod(*a, *b, *modulus),
                modulus: *modulus,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

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

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_check_at_construction() {
        assert!(Field::prime(2).is_ok());
        assert!(Field::prime(5).is_ok());
        assert!(matches!(Field::prime(4), Err(Error::NotPrime(4))));
        assert!(matches!(Field::prime(1), Err(Error::NotPrime(1))));
        assert_eq!(Field::Rationals.cardinality(), None);
        assert_eq!(Field::prime(7).unwrap().cardinality(), Some(7));
    }

    #[test]
    fn serialization_forms() {
        let q = Field::Rationals;
        assert_eq!(q.parse("6/4").unwrap().to_string(), "3/2");
        assert_eq!(q.parse("-6/3").unwrap().to_string(), "-2");
        assert_eq!(q.parse("3/-6").unwrap().to_string(), "-1/2");
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.parse("-1").unwrap().to_string(), "4");
        assert_eq!(f5.parse("1/2").unwrap().to_string(), "3");
        assert!(f5.parse("1/5").is_err());
        assert!(q.parse("x").is_err());
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn field_names() {
        assert_eq!(Field::from_name("Q").unwrap(), Field::Rationals);
        assert_eq!(Field::from_name("F2").unwrap(), Field::Prime(2));
        assert_eq!(Field::from_name("Fp:7").unwrap(), Field::Prime(7));
        assert!(Field::from_name("F4").is_err());
        assert!(Field::from_name("R").is_err());
    }

    #[test]
    fn inverses() {
        let f7 = Field::prime(7).unwrap();
        for v in 1..7 {
            let x = f7.from_i64(v);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert!(f7.zero().inv().is_none());
        let q = Field::Rationals;
        assert_eq!(q.parse("-2/3").unwrap().inv().unwrap().to_string(), "-3/2");
    }

    proptest! {
        #[test]
        fn frobenius_is_additive(pi in 0usize..4, x in 0u64..1000, y in 0u64..1000) {
            let p = [2u64, 3, 5, 13][pi];
            let f = Field::prime(p).unwrap();
            let (x, y) = (f.from_u64(x), f.from_u64(y));
            prop_assert_eq!((&x + &y).pow(p), &x.pow(p) + &y.pow(p));
            // Fermat
            prop_assert_eq!(x.pow(p), x);
        }

        #[test]
        fn prime_values_are_canonical(v in any::<i64>()) {
            let f = Field::prime(13).unwrap();
            let s = f.from_i64(v);
            prop_assert!(f.contains(&s));
            prop_assert_eq!(&s + &(-&s), f.zero());
        }
    }
}
