//! Fixed curve parameters.
//!
//! E: y^2 = x^3 + x over F_p with p = 3 mod 4 is supersingular with
//! #E(F_p) = p + 1 = h * q. The distortion map (x, y) -> (-x, i*y) into
//! E(F_p^2) turns the reduced Tate pairing into a symmetric pairing
//! G1 x G1 -> GT, with GT the order-q subgroup of F_p^2*.

use crate::field::{limbs_from_hex, Fe, MontConfig};

/// 160-bit group order q = 2^159 + 2^107 + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarConfig;

impl MontConfig<3> for ScalarConfig {
    const MODULUS: [u64; 3] = limbs_from_hex("8000000000000800000000000000000000000001");
    const BYTES: usize = SCALAR_BYTES;
}

/// 511-bit base-field prime p = h*q - 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaseConfig;

impl MontConfig<8> for BaseConfig {
    const MODULUS: [u64; 8] = limbs_from_hex(
        "73aeff3b15d501f41c906ba78b3d44517be9e551fbbda99f10f3c58300610a17\
         65cb616a6cd50b7a715477255afba8a9b100d8dfd34076316f071360f62916c7",
    );
    const BYTES: usize = 64;
}

/// Exponent scalars in Z_q.
pub type Scalar = Fe<ScalarConfig, 3>;
/// Base field F_p.
pub type Fp = Fe<BaseConfig, 8>;

pub const SCALAR_BYTES: usize = 20;
pub const G1_BYTES: usize = 64;
pub const GT_BYTES: usize = 128;

/// Cofactor h = (p + 1) / q, little-endian limbs.
pub const COFACTOR: [u64; 6] = limbs_from_hex(
    "e75dfe762ba9f572593974947723630f608a832ff28e60492260a0f8684a98dfd34076316f071360f62916c8",
);

/// q - 1 = 2^159 + 2^107, the Miller loop length.
pub const MILLER_LOOP: [u64; 3] = limbs_from_hex("8000000000000800000000000000000000000000");

/// Group order q as limbs, for subgroup membership checks.
pub const ORDER: [u64; 3] = ScalarConfig::MODULUS;
