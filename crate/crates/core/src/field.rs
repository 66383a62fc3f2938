//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! A [`Scalar`] carries its field with it, so arithmetic needs no context.
//! Mixing elements of different fields is a logic error and panics.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub const DEFAULT_PRIME: u32 = 32003;

/// Which exact field the coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(DEFAULT_PRIME)
    }
}

impl Field {
    /// Builds the prime field `F_p`, or `None` if `p` is not a prime below 2^31.
    pub fn prime(p: u32) -> Option<Field> {
        if p < (1 << 31) && is_prime(p) {
            Some(Field::Prime(p))
        } else {
            None
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Prime {
                value: n.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar::Prime {
                    value: r.to_u32().expect("residue fits in u32"),
                    modulus: p,
                }
            }
        }
    }

    /// `num / den`, or `None` when the denominator vanishes in this field.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Option<Scalar> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return None;
        }
        Some(self.from_bigint(num) * d.inv())
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "prime {p}"),
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of an exact field in canonical form: a reduced fraction or the
/// least non-negative residue.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(*value, *modulus - 2, *modulus),
                modulus: *modulus,
            },
        }
    }

    /// Signed integer view used for printing: the symmetric residue in `F_p`,
    /// `None` for non-integral rationals.
    pub fn to_signed_integer(&self) -> Option<i64> {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    q.to_integer().to_i64()
                } else {
                    None
                }
            }
            Scalar::Prime { value, modulus } => {
                if *value > modulus / 2 {
                    Some(*value as i64 - *modulus as i64)
                } else {
                    Some(*value as i64)
                }
            }
        }
    }

    /// True if the printed form starts with a minus sign.
    pub fn is_negative_display(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Prime { value, modulus } => *value > modulus / 2,
        }
    }
}

fn pow_mod(base: u32, mut exp: u32, m: u32) -> u32 {
    let m64 = m as u64;
    let mut acc = 1u64;
    let mut b = base as u64 % m64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m64;
        }
        b = b * b % m64;
        exp >>= 1;
    }
    acc as u32
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Prime { .. } => write!(f, "{}", self.to_signed_integer().unwrap()),
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between scalars of different fields")
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q })
                if p == q =>
            {
                let s = *a as u64 + *b as u64;
                Scalar::Prime {
                    value: (s % *p as u64) as u32,
                    modulus: *p,
                }
            }
            _ => mismatch(),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Prime {
                    value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                    modulus: *p,
                }
            }
            _ => mismatch(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
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
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
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

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_field_inverse() {
        let f = Field::default();
        for n in [1i64, 2, 3, 17, 32002, -5] {
            let a = f.from_i64(n);
            assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(32004).is_none());
        assert!(Field::prime(1).is_none());
        assert_eq!(Field::prime(7), Some(Field::Prime(7)));
    }

    #[test]
    fn symmetric_residue_display() {
        let f = Field::default();
        assert_eq!(f.from_i64(-1).to_string(), "-1");
        assert_eq!(f.from_i64(5).to_string(), "5");
    }

    #[test]
    fn zero_denominator_is_detected() {
        let f = Field::Prime(7);
        assert!(f.from_ratio(&BigInt::from(1), &BigInt::from(14)).is_none());
        let q = Field::Rational;
        assert!(q.from_ratio(&BigInt::from(1), &BigInt::from(0)).is_none());
        assert_eq!(
            q.from_ratio(&BigInt::from(2), &BigInt::from(4)).unwrap(),
            Scalar::Rational(BigRational::new(1.into(), 2.into()))
        );
    }

    proptest! {
        #[test]
        fn field_axioms_mod_p(a in -100_000i64..100_000, b in -100_000i64..100_000) {
            let f = Field::default();
            let (x, y) = (f.from_i64(a), f.from_i64(b));
            prop_assert!((&x + &(-&x)).is_zero());
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert!((&x * &x.inv()).is_one());
            }
        }

        #[test]
        fn field_axioms_rational(a in -1000i64..1000, b in 1i64..1000) {
            let f = Field::Rational;
            let x = f.from_ratio(&BigInt::from(a), &BigInt::from(b)).unwrap();
            prop_assert!((&x + &(-&x)).is_zero());
            if !x.is_zero() {
                prop_assert!((&x * &x.inv()).is_one());
            }
        }
    }
}
