//! Byte encodings of the scheme artifacts. Every artifact also exposes its
//! cryptographic core: the fixed-width group and field elements without
//! names, labels, counts or payload.

use num_traits::One;

use super::{Ciphertext, ConsumerKey, InterestSignature, MasterSecret, NodeToken, PublicParams};
use crate::algebra::Scalar;
use crate::siff::SiffPolynomial;
use crate::subtree::{NodeId, PolicyTree, NODE_COUNT};
use crate::wire::{Reader, WireError, Writer};

impl PublicParams {
    pub fn to_bytes(&self) -> Vec<u8> {
        Writer::new()
            .i32(self.year)
            .u64(self.freshness_secs)
            .g1(&self.g)
            .gt(&self.y1)
            .gt(&self.y2)
            .str8(Self::H1_ID)
            .str8(Self::H2_ID)
            .finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let year = r.i32()?;
        let freshness_secs = r.u64()?;
        if freshness_secs == 0 {
            return Err(WireError::Invalid("zero freshness window"));
        }
        let pp = Self {
            year,
            freshness_secs,
            g: r.g1()?,
            y1: r.gt()?,
            y2: r.gt()?,
        };
        if pp.g.is_identity() {
            return Err(WireError::Invalid("identity generator"));
        }
        if r.str8()? != Self::H1_ID || r.str8()? != Self::H2_ID {
            return Err(WireError::Invalid("hash identifier"));
        }
        r.finish()?;
        Ok(pp)
    }
}

impl MasterSecret {
    /// η values follow the tree's breadth-first node order.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.i32(self.year)
            .scalar(&self.sigma)
            .scalar(&self.delta)
            .scalar(&self.kappa)
            .scalar(&self.varkappa);
        for node in PolicyTree::new(self.year).nodes() {
            w.scalar(&self.etas[&node]);
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let year = r.i32()?;
        let mut nonzero = || -> Result<Scalar, WireError> {
            let s = r.scalar()?;
            if num_traits::Zero::is_zero(&s) {
                return Err(WireError::Invalid("zero secret"));
            }
            Ok(s)
        };
        let sigma = nonzero()?;
        let delta = nonzero()?;
        let kappa = nonzero()?;
        let varkappa = nonzero()?;
        let nodes = PolicyTree::new(year).nodes();
        debug_assert_eq!(nodes.len(), NODE_COUNT);
        let etas = nodes
            .into_iter()
            .map(|n| Ok((n, nonzero()?)))
            .collect::<Result<_, WireError>>()?;
        r.finish()?;
        Ok(Self {
            year,
            sigma,
            delta,
            kappa,
            varkappa,
            etas,
        })
    }
}

impl ConsumerKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.bytes16(&self.id).i32(self.year).scalar(&self.uk);
        w.u16(self.tokens.len() as u16);
        for (node, token) in &self.tokens {
            w.str8(&node.label()).g1(&token.tk1).g1(&token.tk2);
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let id = r.bytes16()?.to_vec();
        let year = r.i32()?;
        let uk = r.scalar()?;
        if num_traits::Zero::is_zero(&uk) {
            return Err(WireError::Invalid("zero UK"));
        }
        let count = r.u16()?;
        let mut tokens = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let node = NodeId::parse(&r.str8()?, year).map_err(|_| WireError::Invalid("node label"))?;
            let token = NodeToken {
                tk1: r.g1()?,
                tk2: r.g1()?,
            };
            tokens.push((node, token));
        }
        r.finish()?;
        Ok(Self { id, year, uk, tokens })
    }

    /// UK ‖ (TK1 ‖ TK2) per cover node.
    pub fn core_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.scalar(&self.uk);
        for (_, token) in &self.tokens {
            w.g1(&token.tk1).g1(&token.tk2);
        }
        w.finish()
    }
}

impl Ciphertext {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.str16(&self.content_name).gt(&self.c1);
        w.u16(self.nodes.len() as u16);
        for (label, c) in &self.nodes {
            w.str8(label).g1(c);
        }
        w.u16(self.poly.degree() as u16);
        write_poly(&mut w, &self.poly);
        match &self.revocation {
            None => w.u8(0),
            Some(name) => w.u8(1).str16(name),
        };
        w.bytes32(&self.payload);
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let content_name = r.str16()?;
        let c1 = r.gt()?;
        let count = r.u16()?;
        let mut nodes = Vec::with_capacity(count as usize);
        for _ in 0..count {
            nodes.push((r.str8()?, r.g1()?));
        }
        let degree = r.u16()? as usize;
        if degree == 0 {
            return Err(WireError::Invalid("empty polynomial"));
        }
        if !r.scalar()?.is_one() {
            return Err(WireError::Invalid("polynomial is not monic"));
        }
        let coeffs = (0..degree).map(|_| r.scalar()).collect::<Result<Vec<_>, _>>()?;
        let poly = SiffPolynomial::from_coefficients(coeffs).expect("degree checked");
        let revocation = match r.u8()? {
            0 => None,
            1 => Some(r.str16()?),
            _ => return Err(WireError::Invalid("revocation flag")),
        };
        let payload = r.bytes32()?.to_vec();
        r.finish()?;
        Ok(Self {
            content_name,
            c1,
            nodes,
            poly,
            revocation,
            payload,
        })
    }

    /// C1 ‖ C_i per path node ‖ the n+1 polynomial coefficients.
    pub fn core_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.gt(&self.c1);
        for (_, c) in &self.nodes {
            w.g1(c);
        }
        write_poly(&mut w, &self.poly);
        w.finish()
    }
}

// Monic coefficients, leading 1 included.
fn write_poly(w: &mut Writer, poly: &SiffPolynomial<Scalar>) {
    w.scalar(&Scalar::one());
    for a in poly.coefficients() {
        w.scalar(a);
    }
}

impl InterestSignature {
    pub fn to_bytes(&self) -> Vec<u8> {
        Writer::new()
            .scalar(&self.s1)
            .g1(&self.s2)
            .gt(&self.s3)
            .gt(&self.s4)
            .str8(&self.node)
            .u64(self.ts)
            .str16(&self.content_name)
            .finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let sig = Self {
            s1: r.scalar()?,
            s2: r.g1()?,
            s3: r.gt()?,
            s4: r.gt()?,
            node: r.str8()?,
            ts: r.u64()?,
            content_name: r.str16()?,
        };
        r.finish()?;
        Ok(sig)
    }

    /// S1 ‖ S2 ‖ S3 ‖ S4.
    pub fn core_bytes(&self) -> Vec<u8> {
        Writer::new()
            .scalar(&self.s1)
            .g1(&self.s2)
            .gt(&self.s3)
            .gt(&self.s4)
            .finish()
    }
}
