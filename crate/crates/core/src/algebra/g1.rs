use std::ops::{Mul, Neg};

use num_traits::{One, Zero};
use rand::RngCore;

use super::params::{Fp, Scalar, COFACTOR, G1_BYTES, ORDER};
use super::AlgebraError;
use crate::field::PrimeField;

/// Point of the order-q subgroup of E(F_p), in affine form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct G1Element {
    // None is the point at infinity
    pub(crate) coords: Option<(Fp, Fp)>,
}

#[derive(Clone, Copy, Debug)]
struct Jacobian {
    x: Fp,
    y: Fp,
    z: Fp,
}

impl Jacobian {
    fn infinity() -> Self {
        Self {
            x: Fp::one(),
            y: Fp::one(),
            z: Fp::zero(),
        }
    }

    fn is_infinity(&self) -> bool {
        self.z.is_zero()
    }

    fn from_affine(p: &G1Element) -> Self {
        match p.coords {
            None => Self::infinity(),
            Some((x, y)) => Self { x, y, z: Fp::one() },
        }
    }

    fn to_affine(self) -> G1Element {
        if self.is_infinity() {
            return G1Element::identity();
        }
        let zinv = self.z.inverse().expect("nonzero z");
        let zinv2 = zinv.square();
        G1Element {
            coords: Some((self.x * zinv2, self.y * zinv2 * zinv)),
        }
    }

    fn double(&self) -> Self {
        if self.is_infinity() || self.y.is_zero() {
            return Self::infinity();
        }
        let xx = self.x.square();
        let yy = self.y.square();
        let zz = self.z.square();
        let s = (self.x * yy).double().double();
        let m = xx.double() + xx + zz.square();
        let x3 = m.square() - s.double();
        let y4_8 = yy.square().double().double().double();
        let y3 = m * (s - x3) - y4_8;
        let z3 = (self.y * self.z).double();
        Self { x: x3, y: y3, z: z3 }
    }

    fn add_affine(&self, x2: Fp, y2: Fp) -> Self {
        if self.is_infinity() {
            return Self {
                x: x2,
                y: y2,
                z: Fp::one(),
            };
        }
        let z1z1 = self.z.square();
        let u2 = x2 * z1z1;
        let s2 = y2 * self.z * z1z1;
        let h = u2 - self.x;
        let r = s2 - self.y;
        if h.is_zero() {
            return if r.is_zero() {
                self.double()
            } else {
                Self::infinity()
            };
        }
        let hh = h.square();
        let hhh = h * hh;
        let v = self.x * hh;
        let x3 = r.square() - hhh - v.double();
        let y3 = r * (v - x3) - self.y * hhh;
        let z3 = self.z * h;
        Self { x: x3, y: y3, z: z3 }
    }
}

fn curve_rhs(x: &Fp) -> Fp {
    x.square() * *x + *x
}

impl G1Element {
    pub const BYTES: usize = G1_BYTES;

    pub fn identity() -> Self {
        Self { coords: None }
    }

    pub fn is_identity(&self) -> bool {
        self.coords.is_none()
    }

    /// A uniformly random subgroup element other than the identity.
    pub fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        loop {
            let x = Fp::random(rng);
            let Some(mut y) = curve_rhs(&x).sqrt() else {
                continue;
            };
            if rng.next_u32() & 1 == 1 {
                y = -y;
            }
            let p = Self {
                coords: Some((x, y)),
            }
            .mul_limbs(&COFACTOR);
            if !p.is_identity() {
                return p;
            }
        }
    }

    pub(crate) fn mul_limbs(&self, exp: &[u64]) -> Self {
        let Some((x, y)) = self.coords else {
            return *self;
        };
        let mut acc = Jacobian::infinity();
        for limb in exp.iter().rev() {
            for bit in (0..64).rev() {
                acc = acc.double();
                if (limb >> bit) & 1 == 1 {
                    acc = acc.add_affine(x, y);
                }
            }
        }
        acc.to_affine()
    }

    /// Exponentiation g^a, written multiplicatively to match the group notation.
    pub fn pow(&self, a: &Scalar) -> Self {
        self.mul_limbs(&a.to_canonical_limbs())
    }

    pub fn is_on_curve(&self) -> bool {
        match self.coords {
            None => true,
            Some((x, y)) => y.square() == curve_rhs(&x),
        }
    }

    pub fn is_in_subgroup(&self) -> bool {
        self.is_on_curve() && self.mul_limbs(&ORDER).is_identity()
    }

    /// 64-byte compressed encoding: big-endian x with the parity of y in
    /// the top bit (p < 2^511 leaves it free). The identity is all zeros.
    pub fn to_bytes(&self) -> [u8; G1_BYTES] {
        let mut out = [0u8; G1_BYTES];
        if let Some((x, y)) = self.coords {
            out.copy_from_slice(&x.to_bytes());
            if y.is_odd() {
                out[0] |= 0x80;
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError> {
        if bytes.len() != G1_BYTES {
            return Err(AlgebraError::Decode("G1 element length"));
        }
        if bytes.iter().all(|&b| b == 0) {
            return Ok(Self::identity());
        }
        let odd = bytes[0] & 0x80 != 0;
        let mut xb = [0u8; G1_BYTES];
        xb.copy_from_slice(bytes);
        xb[0] &= 0x7f;
        let x = Fp::from_bytes(&xb).ok_or(AlgebraError::Decode("G1 x out of range"))?;
        let mut y = curve_rhs(&x)
            .sqrt()
            .ok_or(AlgebraError::Decode("G1 x not on curve"))?;
        if y.is_odd() != odd {
            y = -y;
        }
        if y.is_zero() && odd {
            return Err(AlgebraError::Decode("G1 non-canonical parity"));
        }
        let p = Self {
            coords: Some((x, y)),
        };
        if !p.mul_limbs(&ORDER).is_identity() {
            return Err(AlgebraError::Decode("G1 point outside subgroup"));
        }
        Ok(p)
    }
}


impl Neg for G1Element {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            coords: self.coords.map(|(x, y)| (x, -y)),
        }
    }
}

impl Mul for G1Element {
    type Output = Self;
    /// Group law, written multiplicatively.
    fn mul(self, rhs: Self) -> Self {
        match rhs.coords {
            None => self,
            Some((x, y)) => Jacobian::from_affine(&self).add_affine(x, y).to_affine(),
        }
    }
}
