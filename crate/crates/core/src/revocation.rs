//! Immediate privilege revocation: a degree-t polynomial u(x) whose shares
//! are handed to consumers, and a broadcast header that lets every holder of
//! a share outside the header recover a rekeying secret by Lagrange
//! interpolation in the exponent. Revoked shares are placed in the header,
//! which makes their own interpolation degenerate.
//!
//! The group is the order-o subgroup of Z_P* (|P| = 1024, |o| = 160),
//! independent of the pairing groups. Polynomial coefficients, shares and
//! Lagrange coefficients all live in Z_o.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::RngCore;
use thiserror::Error;

use crate::field::{limbs_from_hex, Fe, MontConfig, PrimeField};
use crate::wire::{Reader, WireError, Writer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupModulus;

impl MontConfig<16> for GroupModulus {
    const MODULUS: [u64; 16] = limbs_from_hex(
        "8aba5c4f8b5161fdbf4f2131a3f3c7e576993bd259c2cb5f0cbe6b97034be088\
         b136ee366dc50757e171ac0f08d621a7b3703f1fd58fb4442151916167f95d9b\
         1cdf7db3040c1301900033b030faefba614ee102ef3aed7c3fe271168bfe3297\
         ec4d7d66f17e3fd9e2dd51473d8738c0b5579d7c7263c06ab02b064a446301e3",
    );
    const BYTES: usize = 128;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupOrder;

impl MontConfig<3> for GroupOrder {
    const MODULUS: [u64; 3] = limbs_from_hex("914540a3efd414698d6049226f85bf80645f708f");
    const BYTES: usize = 20;
}

/// Element of Z_P*.
pub type GroupElement = Fe<GroupModulus, 16>;
/// Exponents and polynomial values, Z_o.
pub type Exponent = Fe<GroupOrder, 3>;

const GENERATOR_HEX: &str = "58e2e2732954fb7722d27cae2b9e31c63ebb464f11be0866b1af43b5a93a145f\
a0c7f38554113c06b0acfe46489e21e3a450044843eb9aa94c10403ad9028c2f\
1b72d85314332611c7917cb61e17b42ba4a71a130726e01576a3866308000038\
bd9d6001d6d2fd8156a40497b557a9b4640531c027f53ba234a95389457dd127";

pub const DEFAULT_DEGREE: usize = 16;

/// Generator g_p of the order-o subgroup.
pub fn generator() -> GroupElement {
    GroupElement::from_canonical_limbs(limbs_from_hex(GENERATOR_HEX)).expect("generator below P")
}

pub fn exp(base: &GroupElement, e: &Exponent) -> GroupElement {
    base.pow_limbs(&e.to_canonical_limbs())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RevocationError {
    #[error("polynomial degree must be at least 1")]
    InvalidDegree,
    #[error("share capacity exhausted")]
    PoolExhausted,
    #[error("consumer {0:?} already holds a share")]
    DuplicateConsumer(String),
    #[error("consumer {0:?} has no share")]
    UnknownConsumer(String),
    #[error("{revoked} revoked consumers exceed degree {degree}")]
    TooManyRevoked { revoked: usize, degree: usize },
    #[error("share coincides with a header point")]
    DegenerateShare,
    #[error(transparent)]
    Wire(#[from] WireError),
}

/// A point (x, u(x)) handed to a consumer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Share {
    pub x: Exponent,
    pub y: Exponent,
}

impl Share {
    pub fn to_bytes(&self) -> Vec<u8> {
        Writer::new().scalar(&self.x).scalar(&self.y).finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let share = Self {
            x: r.field()?,
            y: r.field()?,
        };
        r.finish()?;
        Ok(share)
    }
}

/// The rekeying secret k, a subgroup element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RekeySecret(pub GroupElement);

impl RekeySecret {
    pub fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        Self(exp(&generator(), &Exponent::random_nonzero(rng)))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.to_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let v = GroupElement::from_bytes(bytes).ok_or(WireError::Invalid("rekey secret"))?;
        if v.is_zero() {
            return Err(WireError::Invalid("rekey secret"));
        }
        Ok(Self(v))
    }
}

/// Producer-side revocation state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevocationSetup {
    coeffs: Vec<Exponent>,
    pool: Vec<Share>,
    issued: BTreeMap<String, Share>,
    capacity: usize,
}

/// Broadcast header ⟨U, V, E, Λ⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevocationHeader {
    pub u: GroupElement,
    pub v: GroupElement,
    pub points: Vec<(Exponent, GroupElement)>,
    pub partial_lagrange: Vec<Exponent>,
}

/// Evaluates a polynomial given by ascending coefficients.
pub fn eval_poly<F: PrimeField>(coeffs: &[F], x: F) -> F {
    coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x + *c)
}

/// λ'_k = ∏_{j≠k} x_j / (x_j − x_k) for every k.
pub fn partial_lagrange<F: PrimeField>(xs: &[F]) -> Option<Vec<F>> {
    xs.iter()
        .enumerate()
        .map(|(k, xk)| {
            xs.iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .try_fold(F::one(), |acc, (_, xj)| Some(acc * *xj * (*xj - *xk).inverse()?))
        })
        .collect()
}

impl RevocationSetup {
    /// Random degree-`degree` polynomial with `degree` reserved pool points.
    pub fn new<R: RngCore + ?Sized>(degree: usize, capacity: usize, rng: &mut R) -> Result<Self, RevocationError> {
        if degree == 0 {
            return Err(RevocationError::InvalidDegree);
        }
        let mut coeffs: Vec<Exponent> = (0..degree).map(|_| Exponent::random(rng)).collect();
        coeffs.push(Exponent::random_nonzero(rng));
        let mut setup = Self {
            coeffs,
            pool: Vec::with_capacity(degree),
            issued: BTreeMap::new(),
            capacity,
        };
        while setup.pool.len() < degree {
            let x = setup.fresh_x(rng);
            let y = eval_poly(&setup.coeffs, x);
            setup.pool.push(Share { x, y });
        }
        Ok(setup)
    }

    fn fresh_x<R: RngCore + ?Sized>(&self, rng: &mut R) -> Exponent {
        loop {
            let x = Exponent::random_nonzero(rng);
            let used = self.pool.iter().chain(self.issued.values()).any(|s| s.x == x);
            if !used {
                return x;
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn coefficients(&self) -> &[Exponent] {
        &self.coeffs
    }

    pub fn pool(&self) -> &[Share] {
        &self.pool
    }

    pub fn issued(&self) -> &BTreeMap<String, Share> {
        &self.issued
    }

    pub fn issue_share<R: RngCore + ?Sized>(&mut self, consumer: &str, rng: &mut R) -> Result<Share, RevocationError> {
        if self.issued.contains_key(consumer) {
            return Err(RevocationError::DuplicateConsumer(consumer.to_string()));
        }
        if self.issued.len() >= self.capacity {
            return Err(RevocationError::PoolExhausted);
        }
        let x = self.fresh_x(rng);
        let share = Share {
            x,
            y: eval_poly(&self.coeffs, x),
        };
        self.issued.insert(consumer.to_string(), share);
        Ok(share)
    }

    /// Header revoking `revoked`; E holds their shares padded with pool points.
    pub fn make_header<R: RngCore + ?Sized>(
        &self,
        revoked: &BTreeSet<String>,
        k: &RekeySecret,
        rng: &mut R,
    ) -> Result<RevocationHeader, RevocationError> {
        let t = self.degree();
        if revoked.len() > t {
            return Err(RevocationError::TooManyRevoked {
                revoked: revoked.len(),
                degree: t,
            });
        }
        let mut points = Vec::with_capacity(t);
        for id in revoked {
            let share = self
                .issued
                .get(id)
                .ok_or_else(|| RevocationError::UnknownConsumer(id.clone()))?;
            points.push(*share);
        }
        points.extend(self.pool.iter().take(t - revoked.len()).copied());

        let r = Exponent::random_nonzero(rng);
        let g = generator();
        let xs: Vec<Exponent> = points.iter().map(|s| s.x).collect();
        let partial = partial_lagrange(&xs).expect("header x-coordinates are distinct");
        Ok(RevocationHeader {
            u: k.0 * exp(&g, &(self.coeffs[0] * r)),
            v: exp(&g, &r),
            points: points.iter().map(|s| (s.x, exp(&g, &(r * s.y)))).collect(),
            partial_lagrange: partial,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.u16(self.degree() as u16).u32(self.capacity as u32);
        for c in &self.coeffs {
            w.scalar(c);
        }
        for s in &self.pool {
            w.scalar(&s.x).scalar(&s.y);
        }
        w.u32(self.issued.len() as u32);
        for (id, s) in &self.issued {
            w.str16(id).scalar(&s.x).scalar(&s.y);
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let t = r.u16()? as usize;
        if t == 0 {
            return Err(WireError::Invalid("revocation degree"));
        }
        let capacity = r.u32()? as usize;
        let coeffs = (0..=t).map(|_| r.field()).collect::<Result<Vec<Exponent>, _>>()?;
        let pool = (0..t)
            .map(|_| Ok(Share { x: r.field()?, y: r.field()? }))
            .collect::<Result<Vec<_>, WireError>>()?;
        let n = r.u32()? as usize;
        let mut issued = BTreeMap::new();
        for _ in 0..n {
            let id = r.str16()?;
            let share = Share { x: r.field()?, y: r.field()? };
            issued.insert(id, share);
        }
        r.finish()?;
        Ok(Self { coeffs, pool, issued, capacity })
    }
}

impl RevocationHeader {
    pub fn degree(&self) -> usize {
        self.points.len()
    }

    /// Wire form: U ‖ V ‖ t:u16 ‖ t × (x ‖ g^{r·u(x)}) ‖ t × λ'.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.scalar(&self.u).scalar(&self.v).u16(self.points.len() as u16);
        for (x, y) in &self.points {
            w.scalar(x).scalar(y);
        }
        for l in &self.partial_lagrange {
            w.scalar(l);
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let u = r.field()?;
        let v = r.field()?;
        let t = r.u16()? as usize;
        let points = (0..t)
            .map(|_| Ok((r.field()?, r.field()?)))
            .collect::<Result<Vec<_>, WireError>>()?;
        let partial_lagrange = (0..t).map(|_| r.field()).collect::<Result<Vec<_>, _>>()?;
        r.finish()?;
        Ok(Self { u, v, points, partial_lagrange })
    }
}

/// Consumer key update: recovers k from the header with a non-revoked share.
pub fn recover_key(header: &RevocationHeader, share: &Share) -> Result<RekeySecret, RevocationError> {
    let xu = share.x;
    let mut delta1 = GroupElement::one();
    // λ_u = ∏ x_k / (x_k − x_u), the basis coefficient of x_u at zero
    let mut lambda_u = Exponent::one();
    for ((xk, yk), partial) in header.points.iter().zip(&header.partial_lagrange) {
        let diff = xu - *xk;
        let inv = diff.inverse().ok_or(RevocationError::DegenerateShare)?;
        let lambda_k = *partial * xu * inv;
        delta1 *= exp(yk, &lambda_k);
        lambda_u *= -(*xk * inv);
    }
    let delta2 = exp(&header.v, &(share.y * lambda_u));
    let denom = (delta1 * delta2).inverse().ok_or(RevocationError::DegenerateShare)?;
    Ok(RekeySecret(header.u * denom))
}
