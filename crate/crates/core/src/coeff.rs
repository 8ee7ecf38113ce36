use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficient ring for [`PolyForm`](crate::form::PolyForm): the rationals,
/// or a cyclotomic ring whose order travels as the context.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    type Ctx: Copy + PartialEq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn from_int(k: &BigInt, ctx: Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_int(&self, k: &BigInt) -> Self;
}

impl Coefficient for BigRational {
    type Ctx = ();

    fn ctx(&self) {}

    fn zero(_: ()) -> Self {
        Zero::zero()
    }

    fn one(_: ()) -> Self {
        One::one()
    }

    fn from_int(k: &BigInt, _: ()) -> Self {
        BigRational::from_integer(k.clone())
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul_int(&self, k: &BigInt) -> Self {
        self * BigRational::from_integer(k.clone())
    }
}
