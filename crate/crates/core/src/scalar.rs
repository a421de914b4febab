//! Coefficient types.
//!
//! Polynomials are generic over [`Scalar`], a commutative ring with enough
//! structure to build and print expressions. Rank computations need exact
//! division and an exact zero test, so the linear algebra is restricted to
//! [`Field`], which is implemented for arbitrary precision rationals and for
//! the prime field [`Fp`]. Floating point types implement `Scalar` only:
//! they are fine for evaluating and composing germs but have no meaningful
//! notion of exact rank.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// A coefficient ring for sparse polynomials.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self;

    /// Lifts an arbitrary precision integer, reducing if the ring needs to.
    fn from_bigint(v: &BigInt) -> Self;

    /// True when the printed form should be written as `- |c|`.
    fn is_negative_display(&self) -> bool {
        false
    }
}

/// A [`Scalar`] with exact inverses and an exact zero test.
pub trait Field: Scalar {
    fn inv(&self) -> Self;
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn is_negative_display(&self) -> bool {
        self.is_negative()
    }
}

impl Field for BigRational {
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn is_negative_display(&self) -> bool {
        *self < 0.0
    }
}

impl Scalar for f32 {
    fn from_int(v: i64) -> Self {
        v as f32
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f32().unwrap_or(f32::NAN)
    }

    fn is_negative_display(&self) -> bool {
        *self < 0.0
    }
}

/// The Mersenne prime 2^61 - 1.
pub const FP_MODULUS: u64 = (1 << 61) - 1;

/// Element of the prime field of order [`FP_MODULUS`].
///
/// Ranks over `Fp` never exceed ranks over the rationals for integer
/// matrices, and agree for all but finitely many primes; the engine uses it
/// as a fast independent cross-check of the rational computation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp(u64);

impl Fp {
    pub fn new(v: u64) -> Self {
        Fp(v % FP_MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce128(v: u128) -> u64 {
        let m = FP_MODULUS as u128;
        let lo = v & m;
        let hi = v >> 61;
        let mut s = lo + hi;
        if s >= m {
            s -= m;
        }
        if s >= m {
            s -= m;
        }
        s as u64
    }

    fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let mut s = self.0 + rhs.0;
        if s >= FP_MODULUS {
            s -= FP_MODULUS;
        }
        Fp(s)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(self.0 + FP_MODULUS - rhs.0)
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.0 == 0 {
            self
        } else {
            Fp(FP_MODULUS - self.0)
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        Fp(Fp::reduce128(self.0 as u128 * rhs.0 as u128))
    }
}

impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv()
    }
}

impl Rem for Fp {
    type Output = Fp;
    fn rem(self, _rhs: Fp) -> Fp {
        Fp(0)
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp(1)
    }
}

impl Num for Fp {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        u64::from_str_radix(s, radix).map(Fp::new)
    }
}

impl FromPrimitive for Fp {
    fn from_i64(n: i64) -> Option<Self> {
        Some(<Fp as Scalar>::from_int(n))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Fp::new(n))
    }
}

impl Scalar for Fp {
    fn from_int(v: i64) -> Self {
        let m = FP_MODULUS as i128;
        let r = (v as i128).rem_euclid(m);
        Fp(r as u64)
    }

    fn from_bigint(v: &BigInt) -> Self {
        let m = BigInt::from(FP_MODULUS);
        let r = ((v % &m) + &m) % &m;
        Fp(r.to_u64().unwrap_or(0))
    }
}

impl Field for Fp {
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero in Fp");
        self.pow(FP_MODULUS - 2)
    }
}
