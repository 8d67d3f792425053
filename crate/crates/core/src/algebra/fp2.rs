use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::params::Fp;
use crate::field::PrimeField;

/// F_p^2 = F_p[i] / (i^2 + 1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp2 {
    pub c0: Fp,
    pub c1: Fp,
}

impl Fp2 {
    pub const fn new(c0: Fp, c1: Fp) -> Self {
        Self { c0, c1 }
    }

    pub fn one() -> Self {
        Self::new(Fp::one(), Fp::zero())
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.c0, -self.c1)
    }

    pub fn norm(&self) -> Fp {
        self.c0.square() + self.c1.square()
    }

    pub fn square(&self) -> Self {
        // (a + bi)^2 = (a + b)(a - b) + 2ab i
        let ab = self.c0 * self.c1;
        Self::new((self.c0 + self.c1) * (self.c0 - self.c1), ab.double())
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm().inverse()?;
        Some(Self::new(self.c0 * n, -(self.c1 * n)))
    }

    /// Square for elements of norm one: (a + bi)^2 = (2a^2 - 1) + 2ab i.
    pub fn unitary_square(&self) -> Self {
        let a2 = self.c0.square();
        Self::new(a2.double() - Fp::one(), (self.c0 * self.c1).double())
    }

    /// Exponentiation restricted to the norm-one subgroup.
    pub fn unitary_pow_limbs(&self, exp: &[u64]) -> Self {
        let mut acc = Self::one();
        let mut started = false;
        for limb in exp.iter().rev() {
            for bit in (0..64).rev() {
                if started {
                    acc = acc.unitary_square();
                }
                if (limb >> bit) & 1 == 1 {
                    acc = if started { acc * *self } else { *self };
                    started = true;
                }
            }
        }
        acc
    }
}

impl Add for Fp2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.c0 + rhs.c0, self.c1 + rhs.c1)
    }
}

impl Sub for Fp2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.c0 - rhs.c0, self.c1 - rhs.c1)
    }
}

impl Neg for Fp2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c0, -self.c1)
    }
}

impl Mul for Fp2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // Karatsuba
        let aa = self.c0 * rhs.c0;
        let bb = self.c1 * rhs.c1;
        let cross = (self.c0 + self.c1) * (rhs.c0 + rhs.c1);
        Self::new(aa - bb, cross - aa - bb)
    }
}
