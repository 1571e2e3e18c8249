//! Exact rationals with an `i64` fast path.
//!
//! Character values are algebraic integers, so almost every coefficient seen in
//! practice is a small integer. Values live in a machine-word ratio until an
//! operation overflows, at which point they move to a big rational.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub enum Rational {
    Small(Rational64),
    Big(BigRational),
}

fn big(r: &Rational64) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl Rational {
    pub fn zero() -> Self {
        Rational::Small(Rational64::zero())
    }

    pub fn one() -> Self {
        Rational::Small(Rational64::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Rational::Small(Rational64::from_integer(n))
    }

    /// Panics if `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        Rational::Small(Rational64::new(num, den))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational::Big(r).shrink()
    }

    fn shrink(self) -> Self {
        match self {
            Rational::Big(r) => match (r.numer().to_i64(), r.denom().to_i64()) {
                (Some(n), Some(d)) => Rational::Small(Rational64::new_raw(n, d)),
                _ => Rational::Big(r),
            },
            s => s,
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(r) => big(r),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_zero(),
            Rational::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_one(),
            Rational::Big(r) => r.is_one(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_integer(),
            Rational::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_negative(),
            Rational::Big(r) => r.is_negative(),
        }
    }

    /// The value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        match self {
            Rational::Small(r) => Some(*r.numer()),
            Rational::Big(r) => r.numer().to_i64(),
        }
    }

    pub fn numer_denom(&self) -> (BigInt, BigInt) {
        let b = self.to_big();
        (b.numer().clone(), b.denom().clone())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rational::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Rational::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Reduction into `Z/qZ`; `None` when the denominator is not invertible.
    pub fn mod_prime(&self, q: u64) -> Option<u64> {
        if let Rational::Small(r) = self {
            let reduce = |x: i64| (x as i128).rem_euclid(q as i128) as u64;
            let dn = reduce(*r.denom());
            if dn == 0 {
                return None;
            }
            let inv = crate::gflin::inv_mod(dn, q);
            return Some(crate::gflin::mul_mod(reduce(*r.numer()), inv, q));
        }
        let (n, d) = self.numer_denom();
        let qb = BigInt::from(q);
        let reduce = |x: &BigInt| -> u64 {
            let r = ((x % &qb) + &qb) % &qb;
            r.to_u64().unwrap()
        };
        let dn = reduce(&d);
        if dn == 0 {
            return None;
        }
        let inv = crate::gflin::inv_mod(dn, q);
        Some(crate::gflin::mul_mod(reduce(&n), inv, q))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        binop!($trait, $method, $checked, |_: i64, _: i64| -> Option<i64> { None });
    };
    ($trait:ident, $method:ident, $checked:ident, $int:expr) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                if let (Rational::Small(a), Rational::Small(b)) = (self, rhs) {
                    // integers skip the gcd normalization
                    if *a.denom() == 1 && *b.denom() == 1 {
                        if let Some(r) = $int(*a.numer(), *b.numer()) {
                            return Rational::from_integer(r);
                        }
                    }
                    if let Some(r) = a.$checked(b) {
                        return Rational::Small(r);
                    }
                }
                Rational::Big(self.to_big().$method(rhs.to_big())).shrink()
            }
        }

        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add, i64::checked_add);
binop!(Sub, sub, checked_sub, i64::checked_sub);
binop!(Mul, mul, checked_mul, i64::checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(-*r),
            _ => Rational::Big(-self.to_big()).shrink(),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a), Rational::Small(b)) => a == b,
            _ => self.to_big() == other.to_big(),
        }
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(a), Rational::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(r) => write!(f, "{r}"),
            Rational::Big(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_shrinks_back() {
        let big = Rational::from_integer(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Rational::Big(_)));
        let back = &sq / &big;
        assert!(matches!(back, Rational::Small(_)));
        assert_eq!(back, big);
    }

    #[test]
    fn parse_and_display() {
        let r: Rational = "-10/4".parse().unwrap();
        assert_eq!(r, Rational::new(-5, 2));
        assert_eq!(r.to_string(), "-5/2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
    }

    #[test]
    fn mod_prime_inverts_denominator() {
        // 1/2 mod 7 = 4
        assert_eq!(Rational::new(1, 2).mod_prime(7), Some(4));
        assert_eq!(Rational::new(-1, 1).mod_prime(7), Some(6));
        assert_eq!(Rational::new(1, 7).mod_prime(7), None);
    }
}
