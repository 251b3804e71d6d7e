//! Exact arithmetic on dyadic rationals and exact floor/ceil log2 of ratios.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `numerator / 2^exponent`, kept canonical (numerator odd, or zero with exponent 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigUint,
    exponent: u32,
}

impl DyadicRational {
    pub fn zero() -> Self {
        DyadicRational { numerator: BigUint::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        DyadicRational { numerator: BigUint::one(), exponent: 0 }
    }

    /// 2^{-e}
    pub fn pow2_neg(e: u32) -> Self {
        DyadicRational { numerator: BigUint::one(), exponent: e }
    }

    pub fn new(numerator: BigUint, exponent: u32) -> Self {
        let mut d = DyadicRational { numerator, exponent };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0) as u32;
        let shift = tz.min(self.exponent);
        if shift > 0 {
            self.numerator >>= shift as usize;
            self.exponent -= shift;
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// `self * 2^k` for a signed shift.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if k >= 0 {
            let k = k as u64;
            if k <= self.exponent as u64 {
                DyadicRational::new(self.numerator.clone(), self.exponent - k as u32)
            } else {
                let extra = k - self.exponent as u64;
                DyadicRational::new(&self.numerator << extra as usize, 0)
            }
        } else {
            let k = u32::try_from(-k).expect("shift fits in u32");
            DyadicRational::new(self.numerator.clone(), self.exponent + k)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let den = BigUint::one() << self.exponent as usize;
        BigRational::new(self.numerator.clone().into(), den.into())
    }

    pub fn to_f64(&self) -> f64 {
        // Scale down large numerators before converting to keep precision.
        let bits = self.numerator.bits() as i64;
        if bits <= 1000 {
            self.numerator.to_f64().unwrap_or(f64::INFINITY) * (-(self.exponent as f64)).exp2()
        } else {
            let shift = bits - 64;
            let top = (&self.numerator >> shift as usize).to_f64().unwrap_or(0.0);
            top * ((shift - self.exponent as i64) as f64).exp2()
        }
    }

    /// Exact `floor(log2(self))`; `None` for zero.
    pub fn floor_log2(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.numerator.bits() as i64 - 1 - self.exponent as i64)
    }

    /// Exact `ceil(log2(self))`; `None` for zero.
    pub fn ceil_log2(&self) -> Option<i64> {
        let f = self.floor_log2()?;
        // A canonical dyadic is a power of two iff its numerator is 1.
        Some(if self.numerator.is_one() { f } else { f + 1 })
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}

impl fmt::Debug for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for DyadicRational {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        let bad = || crate::Error::InvalidArgument(format!("expected num/2^e, got {s:?}"));
        let (num, exp) = s.split_once("/2^").ok_or_else(bad)?;
        let num: BigUint = num.trim().parse().map_err(|_| bad())?;
        let exp: u32 = exp.trim().parse().map_err(|_| bad())?;
        Ok(DyadicRational::new(num, exp))
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent) as usize;
        let b = &other.numerator << (e - other.exponent) as usize;
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&DyadicRational> for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        let e = self.exponent.max(rhs.exponent);
        let a = &self.numerator << (e - self.exponent) as usize;
        let b = &rhs.numerator << (e - rhs.exponent) as usize;
        DyadicRational::new(a + b, e)
    }
}

impl AddAssign<&DyadicRational> for DyadicRational {
    fn add_assign(&mut self, rhs: &DyadicRational) {
        *self = &*self + rhs;
    }
}

impl std::iter::Sum for DyadicRational {
    fn sum<I: Iterator<Item = DyadicRational>>(iter: I) -> Self {
        iter.fold(DyadicRational::zero(), |acc, x| &acc + &x)
    }
}

/// Exact `floor(log2(num / den))` for positive integers.
pub fn floor_log2_ratio(num: &BigUint, den: &BigUint) -> i64 {
    assert!(!num.is_zero() && !den.is_zero(), "log of non-positive ratio");
    let f = num.bits() as i64 - den.bits() as i64;
    // 2^f <= num/den < 2^{f+1}  or  2^{f-1} <= num/den < 2^f
    let ge = if f >= 0 { *num >= den << f as usize } else { num << (-f) as usize >= *den };
    if ge {
        f
    } else {
        f - 1
    }
}

/// Exact `ceil(log2(num / den))` for positive integers.
pub fn ceil_log2_ratio(num: &BigUint, den: &BigUint) -> i64 {
    let f = floor_log2_ratio(num, den);
    let exact = if f >= 0 { *num == den << f as usize } else { num << (-f) as usize == *den };
    if exact {
        f
    } else {
        f + 1
    }
}

fn rational_parts(r: &BigRational) -> (BigUint, BigUint) {
    assert!(r.is_positive(), "log of non-positive rational");
    (r.numer().magnitude().clone(), r.denom().magnitude().clone())
}

/// Exact `floor(log2(a / b))` for positive rationals.
pub fn floor_log2_rational_ratio(a: &BigRational, b: &BigRational) -> i64 {
    let (an, ad) = rational_parts(a);
    let (bn, bd) = rational_parts(b);
    floor_log2_ratio(&(an * bd), &(ad * bn))
}

/// Exact `ceil(log2(a / b))` for positive rationals.
pub fn ceil_log2_rational_ratio(a: &BigRational, b: &BigRational) -> i64 {
    let (an, ad) = rational_parts(a);
    let (bn, bd) = rational_parts(b);
    ceil_log2_ratio(&(an * bd), &(ad * bn))
}

/// `log2(a / b)` as a float, computed from the exact integer part plus a
/// mantissa residual so large exponents do not lose the integer part.
pub fn log2_rational_ratio(a: &BigRational, b: &BigRational) -> f64 {
    let f = floor_log2_rational_ratio(a, b);
    let ratio = a / b;
    let scaled = if f >= 0 {
        ratio / BigRational::from_integer((BigUint::one() << f as usize).into())
    } else {
        ratio * BigRational::from_integer((BigUint::one() << (-f) as usize).into())
    };
    // scaled in [1, 2)
    let residual = scaled.to_f64().unwrap_or(1.0).log2().clamp(0.0, 1.0);
    f as f64 + residual
}
