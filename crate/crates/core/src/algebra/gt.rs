use std::ops::{Div, Mul};

use super::fp2::Fp2;
use super::params::{Fp, Scalar, GT_BYTES, ORDER};
use super::AlgebraError;
use crate::field::PrimeField;

/// Element of the order-q subgroup of F_p^2*.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GtElement(Fp2);

impl GtElement {
    pub const BYTES: usize = GT_BYTES;

    pub(crate) fn from_fp2_unchecked(v: Fp2) -> Self {
        Self(v)
    }

    pub fn one() -> Self {
        Self(Fp2::one())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn pow(&self, e: &Scalar) -> Self {
        Self(self.0.unitary_pow_limbs(&e.to_canonical_limbs()))
    }

    /// Inverse; the conjugate, since every element has norm one.
    pub fn inverse(&self) -> Self {
        Self(self.0.conjugate())
    }

    /// 128-byte encoding: real part then imaginary part, each 64 bytes big-endian.
    pub fn to_bytes(&self) -> [u8; GT_BYTES] {
        let mut out = [0u8; GT_BYTES];
        out[..64].copy_from_slice(&self.0.c0.to_bytes());
        out[64..].copy_from_slice(&self.0.c1.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError> {
        if bytes.len() != GT_BYTES {
            return Err(AlgebraError::Decode("GT element length"));
        }
        let c0 = Fp::from_bytes(&bytes[..64]).ok_or(AlgebraError::Decode("GT component out of range"))?;
        let c1 = Fp::from_bytes(&bytes[64..]).ok_or(AlgebraError::Decode("GT component out of range"))?;
        let v = Fp2::new(c0, c1);
        if v.norm() != num_traits::One::one() || !v.unitary_pow_limbs(&ORDER).is_one() {
            return Err(AlgebraError::Decode("GT element outside subgroup"));
        }
        Ok(Self(v))
    }
}

impl Mul for GtElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl Div for GtElement {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse()
    }
}
