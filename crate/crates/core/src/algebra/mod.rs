//! Symmetric bilinear-pairing groups, the scalar field Z_q and hashing into it.

mod fp2;
mod g1;
mod gt;
mod pairing;
pub mod params;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::PrimeField;

pub use g1::G1Element;
pub use gt::GtElement;
pub use pairing::pair;
pub use params::{Fp, Scalar, G1_BYTES, GT_BYTES, SCALAR_BYTES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("malformed encoding: {0}")]
    Decode(&'static str),
}

/// H1: SHA-256 of the input, read big-endian and reduced mod q. A zero
/// result is mapped to one so the output always lies in Z_q*.
pub fn hash_to_scalar(data: &[u8]) -> Scalar {
    let digest = Sha256::digest(data);
    nonzero(Scalar::from_biguint(&num_bigint::BigUint::from_bytes_be(&digest)))
}

/// H1 over a tuple of byte strings, each prefixed by its 4-byte big-endian length.
pub fn hash_segments_to_scalar(segments: &[&[u8]]) -> Scalar {
    let mut hasher = Sha256::new();
    for seg in segments {
        hasher.update((seg.len() as u32).to_be_bytes());
        hasher.update(seg);
    }
    let digest = hasher.finalize();
    nonzero(Scalar::from_biguint(&num_bigint::BigUint::from_bytes_be(&digest)))
}

/// Maps a GT element into Z_q via its canonical encoding.
pub fn hash_gt_to_scalar(x: &GtElement) -> Scalar {
    hash_to_scalar(&x.to_bytes())
}

pub fn scalar_inverse<F: PrimeField>(a: F) -> Result<F, AlgebraError> {
    a.inverse().ok_or(AlgebraError::ZeroInverse)
}

fn nonzero(s: Scalar) -> Scalar {
    if num_traits::Zero::is_zero(&s) {
        num_traits::One::one()
    } else {
        s
    }
}

/// Encodes a scalar as exactly [`SCALAR_BYTES`] big-endian bytes.
pub fn scalar_to_bytes(s: &Scalar) -> [u8; SCALAR_BYTES] {
    let mut out = [0u8; SCALAR_BYTES];
    out.copy_from_slice(&s.to_bytes());
    out
}

pub fn scalar_from_bytes(bytes: &[u8]) -> Result<Scalar, AlgebraError> {
    Scalar::from_bytes(bytes).ok_or(AlgebraError::Decode("scalar out of range"))
}
