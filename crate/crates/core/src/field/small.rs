use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use super::PrimeField;

/// Z_P for a prime `P < 2^63`. Used for worked examples and test oracles.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SmallField<const P: u64>(u64);

impl<const P: u64> SmallField<P> {
    pub const fn new(v: u64) -> Self {
        Self(v % P)
    }

    pub const fn value(self) -> u64 {
        self.0
    }
}

impl<const P: u64> fmt::Debug for SmallField<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> Add for SmallField<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(((self.0 as u128 + rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Sub for SmallField<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(((self.0 as u128 + P as u128 - rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Mul for SmallField<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for SmallField<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Self((P - self.0) % P)
    }
}

impl<const P: u64> AddAssign for SmallField<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u64> SubAssign for SmallField<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u64> MulAssign for SmallField<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u64> Zero for SmallField<P> {
    fn zero() -> Self {
        Self(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for SmallField<P> {
    fn one() -> Self {
        Self(1 % P)
    }
}

impl<const P: u64> PrimeField for SmallField<P> {
    const BYTES: usize = 8;

    fn modulus() -> BigUint {
        BigUint::from(P)
    }

    fn from_u64(v: u64) -> Self {
        Self(v % P)
    }

    fn from_biguint(v: &BigUint) -> Self {
        Self((v % P).to_u64().expect("reduced below P"))
    }

    fn to_biguint(&self) -> BigUint {
        BigUint::from(self.0)
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow_limbs(&[P - 2]))
        }
    }

    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        // bias is irrelevant at oracle scale
        Self(rng.next_u64() % P)
    }
}
