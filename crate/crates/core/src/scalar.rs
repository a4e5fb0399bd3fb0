//! Exact arithmetic in the cyclotomic field `Q(q)`, `q` a primitive cube root
//! of unity.
//!
//! Every value is stored as `a + b*q` with `a, b` big rationals. The minimal
//! polynomial `q^2 + q + 1 = 0` is applied eagerly on multiplication, so `q^2`
//! never appears in a stored value and structural equality is field equality.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// An element `a + b*q` of `Q(q)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CycScalar {
    a: BigRational,
    b: BigRational,
}

impl CycScalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        CycScalar { a, b }
    }

    /// `a + b*q` from machine integers.
    pub fn from_ints(a: i64, b: i64) -> Self {
        CycScalar {
            a: BigRational::from_integer(BigInt::from(a)),
            b: BigRational::from_integer(BigInt::from(b)),
        }
    }

    /// The rational `num/den`. Panics if `den == 0`.
    pub fn rational(num: i64, den: i64) -> Self {
        CycScalar {
            a: BigRational::new(BigInt::from(num), BigInt::from(den)),
            b: BigRational::zero(),
        }
    }

    pub fn from_rational(a: BigRational) -> Self {
        CycScalar { a, b: BigRational::zero() }
    }

    /// The generator `q` itself.
    pub fn q() -> Self {
        CycScalar::from_ints(0, 1)
    }

    /// Coefficient of `1`.
    pub fn re(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of `q`.
    pub fn q_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Field norm `a^2 - ab + b^2`, nonzero unless the value is zero.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // (a + bq)^{-1} = (a + b q^2) / N = (a - b - b q) / N
        let n = self.norm();
        Some(CycScalar {
            a: (&self.a - &self.b) / &n,
            b: -(&self.b) / &n,
        })
    }

    /// Galois conjugate `q -> q^2`.
    pub fn conj(&self) -> Self {
        CycScalar { a: &self.a - &self.b, b: -(&self.b) }
    }
}

/// `q^k` for any integer `k`; `q^{-1} = q^2`.
pub fn q_power(k: i64) -> CycScalar {
    match k.rem_euclid(3) {
        0 => CycScalar::one(),
        1 => CycScalar::q(),
        _ => CycScalar::from_ints(-1, -1),
    }
}

/// The q-integer `[n]_q = 1 + q + ... + q^{n-1}`. Periodic with period 3.
pub fn q_integer(n: u64) -> CycScalar {
    (0..(n % 3) as i64).map(q_power).fold(CycScalar::zero(), |acc, t| acc + t)
}

impl Zero for CycScalar {
    fn zero() -> Self {
        CycScalar { a: BigRational::zero(), b: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for CycScalar {
    fn one() -> Self {
        CycScalar { a: BigRational::one(), b: BigRational::zero() }
    }
}

impl From<i64> for CycScalar {
    fn from(v: i64) -> Self {
        CycScalar::from_ints(v, 0)
    }
}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        CycScalar { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Add for CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: CycScalar) -> CycScalar {
        CycScalar { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        CycScalar { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Sub for CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: CycScalar) -> CycScalar {
        CycScalar { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        // (a1 + b1 q)(a2 + b2 q) = a1a2 + (a1b2 + a2b1) q + b1b2 q^2, q^2 = -1 - q
        if self.b.is_zero() && rhs.b.is_zero() {
            return CycScalar::from_rational(&self.a * &rhs.a);
        }
        let bb = &self.b * &rhs.b;
        CycScalar {
            a: &self.a * &rhs.a - &bb,
            b: &self.a * &rhs.b + &rhs.a * &self.b - bb,
        }
    }
}

impl Mul for CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: CycScalar) -> CycScalar {
        &self * &rhs
    }
}

impl MulAssign<&CycScalar> for CycScalar {
    fn mul_assign(&mut self, rhs: &CycScalar) {
        *self = &*self * rhs;
    }
}

impl<'a> Div<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &CycScalar) -> CycScalar {
        self * &rhs.inv().expect("division by zero in Q(q)")
    }
}

impl Div for CycScalar {
    type Output = CycScalar;
    fn div(self, rhs: CycScalar) -> CycScalar {
        &self / &rhs
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar { a: -self.a, b: -self.b }
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar { a: -&self.a, b: -&self.b }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sign-aware pieces used by the expression renderers: whether the value
/// reads as negative when printed on its own, and the text of its magnitude.
pub(crate) fn split_sign(s: &CycScalar) -> (bool, String) {
    let negative = if s.a.is_zero() { s.b.is_negative() } else { s.a.is_negative() && s.b.is_zero() };
    let text = if negative { (-s).to_string() } else { s.to_string() };
    (negative, text)
}

/// True when the printed form is a single atom that needs no parentheses
/// as a factor.
pub(crate) fn is_atomic(s: &CycScalar) -> bool {
    s.a.is_zero() || s.b.is_zero()
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q_term = |b: &BigRational| -> String {
            if b.is_one() {
                "q".to_string()
            } else if (-b).is_one() {
                "-q".to_string()
            } else {
                format!("{}*q", fmt_rational(b))
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", fmt_rational(&self.a)),
            (true, false) => write!(f, "{}", q_term(&self.b)),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{} - {}", fmt_rational(&self.a), q_term(&-(&self.b)))
                } else {
                    write!(f, "{} + {}", fmt_rational(&self.a), q_term(&self.b))
                }
            }
        }
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl FromStr for CycScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        crate::parse::parse_scalar(s)
    }
}

impl serde::Serialize for CycScalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for CycScalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(a: i64, b: i64) -> CycScalar {
        CycScalar::from_ints(a, b)
    }

    #[test]
    fn addition_examples() {
        assert_eq!(s(1, 0) + s(0, 1), s(1, 1));
        assert_eq!(s(1, 1) + s(-1, -1), CycScalar::zero());
        // [2]_q + q^2 = [3]_q = 0
        assert_eq!(q_integer(2) + q_power(2), CycScalar::zero());
    }

    #[test]
    fn multiplication_examples() {
        let q = CycScalar::q();
        assert_eq!(&q * &q, s(-1, -1));
        assert_eq!(&(&q * &q) * &q, CycScalar::one());
        assert_eq!(&s(1, 1) * &s(1, 1), q);
    }

    #[test]
    fn powers_and_q_integers() {
        assert_eq!(q_power(0), CycScalar::one());
        assert_eq!(q_power(3), CycScalar::one());
        assert_eq!(q_power(-1), s(-1, -1));
        assert_eq!(q_power(-1), q_power(2));
        assert_eq!(q_integer(3), CycScalar::zero());
        assert_eq!(q_integer(2), s(1, 1));
        assert_eq!(q_integer(0), CycScalar::zero());
        assert_eq!(&q_integer(2) * &q_power(2), -CycScalar::q());
    }

    #[test]
    fn display() {
        assert_eq!(CycScalar::zero().to_string(), "0");
        assert_eq!(s(1, 1).to_string(), "1 + q");
        assert_eq!(s(-1, -1).to_string(), "-1 - q");
        assert_eq!(s(0, -3).to_string(), "-3*q");
        assert_eq!(CycScalar::rational(3, -6).to_string(), "-1/2");
        assert_eq!(
            CycScalar::new(BigRational::new(1.into(), 2.into()), BigRational::new(2.into(), 3.into()))
                .to_string(),
            "1/2 + 2/3*q"
        );
    }

    #[test]
    fn inverse_of_q_is_q_squared() {
        assert_eq!(CycScalar::q().inv().unwrap(), q_power(2));
        assert!(CycScalar::zero().inv().is_none());
    }

    fn arb_scalar() -> impl Strategy<Value = CycScalar> {
        (-20i64..20, 1i64..6, -20i64..20, 1i64..6).prop_map(|(an, ad, bn, bd)| {
            CycScalar::new(
                BigRational::new(an.into(), ad.into()),
                BigRational::new(bn.into(), bd.into()),
            )
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), CycScalar::one());
            }
        }

        #[test]
        fn power_inverse(k in -50i64..50) {
            prop_assert_eq!(&q_power(k) * &q_power(3 - k.rem_euclid(3)), CycScalar::one());
        }

        #[test]
        fn q_integer_periodic(n in 0u64..100) {
            prop_assert_eq!(q_integer(n + 3), q_integer(n));
        }

        #[test]
        fn display_parse_roundtrip(x in arb_scalar()) {
            let back: CycScalar = x.to_string().parse().unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
