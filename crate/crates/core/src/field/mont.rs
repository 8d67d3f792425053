use std::fmt;
use std::hash::{Hash, Hasher};
use std::marker::PhantomData;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;

use super::PrimeField;

/// Static description of an odd prime modulus held in `N` little-endian limbs.
///
/// Only `MODULUS` and `BYTES` need to be provided; the Montgomery constants
/// are derived at compile time.
pub trait MontConfig<const N: usize>: 'static + Send + Sync {
    const MODULUS: [u64; N];
    const BYTES: usize;

    const INV: u64 = neg_inv_u64(Self::MODULUS[0]);
    const R: [u64; N] = pow2_mod(&Self::MODULUS, 64 * N);
    const R2: [u64; N] = pow2_mod(&Self::MODULUS, 128 * N);
    const BITS: u32 = bit_len(&Self::MODULUS);
    const MODULUS_MINUS_TWO: [u64; N] = sub_small(&Self::MODULUS, 2);
}

/// Parses a hex literal into little-endian limbs at compile time.
pub const fn limbs_from_hex<const N: usize>(hex: &str) -> [u64; N] {
    let bytes = hex.as_bytes();
    let mut out = [0u64; N];
    let mut i = 0;
    let mut nibble = 0;
    while i < bytes.len() {
        let c = bytes[bytes.len() - 1 - i];
        let v = match c {
            b'0'..=b'9' => c - b'0',
            b'a'..=b'f' => c - b'a' + 10,
            b'A'..=b'F' => c - b'A' + 10,
            _ => panic!("invalid hex digit"),
        } as u64;
        let limb = nibble / 16;
        assert!(limb < N, "hex literal too wide");
        out[limb] |= v << (4 * (nibble % 16));
        nibble += 1;
        i += 1;
    }
    out
}

const fn neg_inv_u64(m0: u64) -> u64 {
    // Newton iteration for m0^{-1} mod 2^64
    let mut inv: u64 = 1;
    let mut i = 0;
    while i < 6 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(m0.wrapping_mul(inv)));
        i += 1;
    }
    inv.wrapping_neg()
}

const fn geq<const N: usize>(a: &[u64; N], b: &[u64; N]) -> bool {
    let mut i = N;
    while i > 0 {
        i -= 1;
        if a[i] != b[i] {
            return a[i] > b[i];
        }
    }
    true
}

const fn sub_in_place<const N: usize>(a: &mut [u64; N], b: &[u64; N]) -> u64 {
    let mut borrow = 0u64;
    let mut i = 0;
    while i < N {
        let (d, br) = sbb(a[i], b[i], borrow);
        a[i] = d;
        borrow = br;
        i += 1;
    }
    borrow
}

const fn sub_small<const N: usize>(a: &[u64; N], v: u64) -> [u64; N] {
    let mut out = *a;
    let mut b = [0u64; N];
    b[0] = v;
    sub_in_place(&mut out, &b);
    out
}

const fn bit_len<const N: usize>(a: &[u64; N]) -> u32 {
    let mut i = N;
    while i > 0 {
        i -= 1;
        if a[i] != 0 {
            return 64 * i as u32 + (64 - a[i].leading_zeros());
        }
    }
    0
}

/// 2^k mod m by repeated doubling.
const fn pow2_mod<const N: usize>(m: &[u64; N], k: usize) -> [u64; N] {
    let mut x = [0u64; N];
    x[0] = 1;
    let mut step = 0;
    while step < k {
        let mut carry = 0u64;
        let mut i = 0;
        while i < N {
            let hi = x[i] >> 63;
            x[i] = (x[i] << 1) | carry;
            carry = hi;
            i += 1;
        }
        if carry == 1 || geq(&x, m) {
            sub_in_place(&mut x, m);
        }
        step += 1;
    }
    x
}

#[inline(always)]
const fn mac(acc: u64, a: u64, b: u64, carry: u64) -> (u64, u64) {
    let t = acc as u128 + (a as u128) * (b as u128) + carry as u128;
    (t as u64, (t >> 64) as u64)
}

#[inline(always)]
const fn adc(a: u64, b: u64, carry: u64) -> (u64, u64) {
    let t = a as u128 + b as u128 + carry as u128;
    (t as u64, (t >> 64) as u64)
}

#[inline(always)]
const fn sbb(a: u64, b: u64, borrow: u64) -> (u64, u64) {
    let t = (a as u128).wrapping_sub(b as u128 + borrow as u128);
    (t as u64, ((t >> 64) as u64) & 1)
}

/// Field element in Montgomery form.
pub struct Fe<C, const N: usize> {
    limbs: [u64; N],
    _config: PhantomData<C>,
}

impl<C, const N: usize> Clone for Fe<C, N> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<C, const N: usize> Copy for Fe<C, N> {}

impl<C, const N: usize> PartialEq for Fe<C, N> {
    fn eq(&self, other: &Self) -> bool {
        self.limbs == other.limbs
    }
}

impl<C, const N: usize> Eq for Fe<C, N> {}

impl<C, const N: usize> Hash for Fe<C, N> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.limbs.hash(state);
    }
}

impl<C: MontConfig<N>, const N: usize> fmt::Debug for Fe<C, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", self.to_biguint().to_str_radix(16))
    }
}

impl<C: MontConfig<N>, const N: usize> Fe<C, N> {
    const fn from_raw(limbs: [u64; N]) -> Self {
        Self {
            limbs,
            _config: PhantomData,
        }
    }

    /// Builds an element from canonical (non-Montgomery) limbs, `None` if out of range.
    pub fn from_canonical_limbs(limbs: [u64; N]) -> Option<Self> {
        if geq(&limbs, &C::MODULUS) {
            None
        } else {
            Some(Self::from_raw(Self::mont_mul(&limbs, &C::R2)))
        }
    }

    pub fn to_canonical_limbs(&self) -> [u64; N] {
        let mut one = [0u64; N];
        one[0] = 1;
        Self::mont_mul(&self.limbs, &one)
    }

    #[inline]
    fn mont_mul(a: &[u64; N], b: &[u64; N]) -> [u64; N] {
        let m = &C::MODULUS;
        let mut t = [0u64; N];
        let mut t_hi = 0u64;
        for i in 0..N {
            let mut carry = 0u64;
            for j in 0..N {
                let (lo, hi) = mac(t[j], a[j], b[i], carry);
                t[j] = lo;
                carry = hi;
            }
            let (s, c1) = adc(t_hi, carry, 0);

            let k = t[0].wrapping_mul(C::INV);
            let (_, mut carry) = mac(t[0], k, m[0], 0);
            for j in 1..N {
                let (lo, hi) = mac(t[j], k, m[j], carry);
                t[j - 1] = lo;
                carry = hi;
            }
            let (s2, c2) = adc(s, carry, 0);
            t[N - 1] = s2;
            t_hi = c1 + c2;
        }
        if t_hi != 0 || geq(&t, m) {
            sub_in_place(&mut t, m);
        }
        t
    }

    /// Square root for moduli congruent to 3 mod 4; `None` for non-residues.
    pub fn sqrt(&self) -> Option<Self> {
        debug_assert_eq!(C::MODULUS[0] & 3, 3);
        // (m + 1) / 4
        let mut exp = C::MODULUS;
        let mut carry = 1u64;
        for limb in exp.iter_mut() {
            let (s, c) = adc(*limb, 0, carry);
            *limb = s;
            carry = c;
        }
        for i in 0..N {
            let next = if i + 1 < N { exp[i + 1] } else { carry };
            exp[i] = (exp[i] >> 2) | (next << 62);
        }
        let root = self.pow_limbs(&exp);
        (root.square() == *self).then_some(root)
    }

    /// Parity of the canonical representative.
    pub fn is_odd(&self) -> bool {
        self.to_canonical_limbs()[0] & 1 == 1
    }

    pub fn double(&self) -> Self {
        *self + *self
    }
}

impl<C: MontConfig<N>, const N: usize> Add for Fe<C, N> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let mut out = [0u64; N];
        let mut carry = 0u64;
        for i in 0..N {
            let (s, c) = adc(self.limbs[i], rhs.limbs[i], carry);
            out[i] = s;
            carry = c;
        }
        if carry != 0 || geq(&out, &C::MODULUS) {
            sub_in_place(&mut out, &C::MODULUS);
        }
        Self::from_raw(out)
    }
}

impl<C: MontConfig<N>, const N: usize> Sub for Fe<C, N> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        let mut out = self.limbs;
        let borrow = sub_in_place(&mut out, &rhs.limbs);
        if borrow != 0 {
            let mut carry = 0u64;
            for (o, m) in out.iter_mut().zip(C::MODULUS.iter()) {
                let (s, c) = adc(*o, *m, carry);
                *o = s;
                carry = c;
            }
        }
        Self::from_raw(out)
    }
}

impl<C: MontConfig<N>, const N: usize> Mul for Fe<C, N> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self::from_raw(Self::mont_mul(&self.limbs, &rhs.limbs))
    }
}

impl<C: MontConfig<N>, const N: usize> Neg for Fe<C, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::zero() - self
    }
}

impl<C: MontConfig<N>, const N: usize> AddAssign for Fe<C, N> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<C: MontConfig<N>, const N: usize> SubAssign for Fe<C, N> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<C: MontConfig<N>, const N: usize> MulAssign for Fe<C, N> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<C: MontConfig<N>, const N: usize> Zero for Fe<C, N> {
    fn zero() -> Self {
        Self::from_raw([0u64; N])
    }
    fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }
}

impl<C: MontConfig<N>, const N: usize> One for Fe<C, N> {
    fn one() -> Self {
        Self::from_raw(C::R)
    }
}

impl<C: MontConfig<N>, const N: usize> PrimeField for Fe<C, N> {
    const BYTES: usize = C::BYTES;

    fn modulus() -> BigUint {
        let mut digits = C::MODULUS.to_vec();
        while digits.last() == Some(&0) {
            digits.pop();
        }
        BigUint::from_slice(
            &digits
                .iter()
                .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                .collect::<Vec<_>>(),
        )
    }

    fn from_u64(v: u64) -> Self {
        Self::from_biguint(&BigUint::from(v))
    }

    fn from_biguint(v: &BigUint) -> Self {
        let reduced = v % Self::modulus();
        let mut limbs = [0u64; N];
        for (dst, src) in limbs.iter_mut().zip(reduced.to_u64_digits()) {
            *dst = src;
        }
        Self::from_canonical_limbs(limbs).expect("reduced value is in range")
    }

    fn to_biguint(&self) -> BigUint {
        let limbs = self.to_canonical_limbs();
        BigUint::from_slice(
            &limbs
                .iter()
                .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                .collect::<Vec<_>>(),
        )
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow_limbs(&C::MODULUS_MINUS_TWO))
        }
    }

    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        let top_bits = C::BITS - 64 * (N as u32 - 1);
        let mask = if top_bits == 64 {
            u64::MAX
        } else {
            (1u64 << top_bits) - 1
        };
        loop {
            let mut limbs = [0u64; N];
            for l in limbs.iter_mut() {
                *l = rng.next_u64();
            }
            limbs[N - 1] &= mask;
            if let Some(v) = Self::from_canonical_limbs(limbs) {
                return v;
            }
        }
    }

    fn square(&self) -> Self {
        *self * *self
    }
}
