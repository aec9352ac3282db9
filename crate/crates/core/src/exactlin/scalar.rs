//! Coefficient types the elimination kernels run over.
//!
//! Every kernel is written once against [`Scalar`]. It is first attempted with
//! checked `i64` arithmetic; any overflow aborts the attempt and the caller
//! reruns it over [`BigInt`], which never fails. Results are therefore always
//! exact.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) trait Scalar: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    /// Compares absolute values.
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn neg(&self) -> Option<Self>;
    /// Truncating quotient `self / d`; `d` is nonzero.
    fn quot(&self, d: &Self) -> Option<Self>;
    /// `self - q * x`.
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self>;
    fn is_multiple_of(&self, d: &Self) -> bool;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn quot(&self, d: &Self) -> Option<Self> {
        self.checked_div(*d)
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*x)?)
    }
    fn is_multiple_of(&self, d: &Self) -> bool {
        if *d == 0 {
            return *self == 0;
        }
        // i64::MIN % -1 panics
        if *d == -1 {
            return true;
        }
        *self % *d == 0
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn quot(&self, d: &Self) -> Option<Self> {
        Some(self / d)
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        Some(self - q * x)
    }
    fn is_multiple_of(&self, d: &Self) -> bool {
        if Zero::is_zero(d) {
            return Zero::is_zero(self);
        }
        Integer::is_multiple_of(self, d)
    }
}
