//! Prime-field arithmetic shared by the pairing groups, the polynomial
//! machinery and the revocation broadcast.
//!
//! Everything above this module is written against [`PrimeField`], so the
//! same polynomial and interpolation code runs over the 160-bit production
//! fields and over tiny fields such as Z_7 used for worked examples.

mod mont;
mod small;

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;

pub use mont::{limbs_from_hex, Fe, MontConfig};
pub use small::SmallField;

/// A field of prime order with a fixed-width big-endian encoding.
pub trait PrimeField:
    Copy
    + Eq
    + Hash
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// Width of the canonical encoding.
    const BYTES: usize;

    fn modulus() -> BigUint;

    fn from_u64(v: u64) -> Self;

    /// Reduces an arbitrary integer into the field.
    fn from_biguint(v: &BigUint) -> Self;

    fn to_biguint(&self) -> BigUint;

    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self;

    fn random_nonzero<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v = Self::random(rng);
            if !v.is_zero() {
                return v;
            }
        }
    }

    fn square(&self) -> Self {
        *self * *self
    }

    /// Exponentiation by a little-endian limb vector.
    fn pow_limbs(&self, exp: &[u64]) -> Self {
        let mut acc = Self::one();
        for limb in exp.iter().rev() {
            for bit in (0..64).rev() {
                acc = acc.square();
                if (limb >> bit) & 1 == 1 {
                    acc *= *self;
                }
            }
        }
        acc
    }

    /// Canonical big-endian encoding, exactly `BYTES` long.
    fn to_bytes(&self) -> Vec<u8> {
        let raw = self.to_biguint().to_bytes_be();
        let mut out = vec![0u8; Self::BYTES];
        out[Self::BYTES - raw.len()..].copy_from_slice(&raw);
        out
    }

    /// Strict decoding: wrong length or a value `>= modulus` is rejected.
    fn from_bytes(bytes: &[u8]) -> Option<Self> {
        if bytes.len() != Self::BYTES {
            return None;
        }
        let v = BigUint::from_bytes_be(bytes);
        if v >= Self::modulus() {
            return None;
        }
        Some(Self::from_biguint(&v))
    }
}

/// Little-endian u64 limbs of a big integer, as used by [`PrimeField::pow_limbs`].
pub fn biguint_limbs(v: &BigUint) -> Vec<u64> {
    v.to_u64_digits()
}
