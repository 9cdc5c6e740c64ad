use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{rational_to_f64, ExactScalar};

/// Exact field elements usable as polynomial coefficients.
///
/// Implemented for [`BigRational`] (the fast path for symbolic work) and
/// [`ExactScalar`] (needed once `sqrt 3` shows up, as in the 4-D model).
pub trait Coefficient:
    Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Zero + One + Send + Sync + 'static
{
    fn from_integer(n: i64) -> Self;
    fn from_rational(q: BigRational) -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    /// Panics on division by zero.
    fn div_ref(&self, rhs: &Self) -> Self;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn neg_ref(&self) -> Self;
    /// Exact sign.
    fn sign(&self) -> Ordering;
    fn to_f64(&self) -> f64;
    /// `Some` when the value lies in `Q`.
    fn as_rational(&self) -> Option<BigRational>;
    /// Embedding into `Q(sqrt 3)`.
    fn to_exact(&self) -> ExactScalar;

    fn is_nonneg(&self) -> bool {
        self.sign() != Ordering::Less
    }
    fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }
}

impl Coefficient for BigRational {
    fn from_integer(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: BigRational) -> Self {
        q
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
    fn sign(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if Signed::is_positive(self) {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn to_exact(&self) -> ExactScalar {
        ExactScalar::from_rational(self.clone())
    }
}

impl Coefficient for ExactScalar {
    fn from_integer(n: i64) -> Self {
        ExactScalar::from_integer(n)
    }
    fn from_rational(q: BigRational) -> Self {
        ExactScalar::from_rational(q)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
    fn sign(&self) -> Ordering {
        self.signum_exact()
    }
    fn to_f64(&self) -> f64 {
        ExactScalar::to_f64(self)
    }
    fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.rational_part().clone())
    }
    fn to_exact(&self) -> ExactScalar {
        self.clone()
    }
}
