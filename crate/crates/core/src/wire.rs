//! Big-endian framing helpers shared by every artifact encoding.

use thiserror::Error;

use crate::algebra::{AlgebraError, G1Element, GtElement, Scalar, G1_BYTES, GT_BYTES, SCALAR_BYTES};
use crate::field::PrimeField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WireError {
    #[error("truncated input")]
    Truncated,
    #[error("{0} trailing bytes")]
    Trailing(usize),
    #[error("invalid field: {0}")]
    Invalid(&'static str),
    #[error(transparent)]
    Element(#[from] AlgebraError),
}

#[derive(Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn u8(&mut self, v: u8) -> &mut Self {
        self.buf.push(v);
        self
    }

    pub fn u16(&mut self, v: u16) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn u32(&mut self, v: u32) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn i32(&mut self, v: i32) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn raw(&mut self, bytes: &[u8]) -> &mut Self {
        self.buf.extend_from_slice(bytes);
        self
    }

    /// u16 length prefix.
    pub fn str16(&mut self, s: &str) -> &mut Self {
        self.bytes16(s.as_bytes())
    }

    pub fn bytes16(&mut self, b: &[u8]) -> &mut Self {
        let len = u16::try_from(b.len()).expect("field longer than 65535 bytes");
        self.u16(len).raw(b)
    }

    /// u8 length prefix, used for tree labels.
    pub fn str8(&mut self, s: &str) -> &mut Self {
        let len = u8::try_from(s.len()).expect("label longer than 255 bytes");
        self.u8(len).raw(s.as_bytes())
    }

    /// u32 length prefix.
    pub fn bytes32(&mut self, b: &[u8]) -> &mut Self {
        let len = u32::try_from(b.len()).expect("payload larger than 4 GiB");
        self.u32(len).raw(b)
    }

    pub fn scalar<F: PrimeField>(&mut self, s: &F) -> &mut Self {
        self.raw(&s.to_bytes())
    }

    pub fn g1(&mut self, p: &G1Element) -> &mut Self {
        self.raw(&p.to_bytes())
    }

    pub fn gt(&mut self, x: &GtElement) -> &mut Self {
        self.raw(&x.to_bytes())
    }

    pub fn finish(&mut self) -> Vec<u8> {
        std::mem::take(&mut self.buf)
    }
}

pub struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf }
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8], WireError> {
        if self.buf.len() < n {
            return Err(WireError::Truncated);
        }
        let (head, rest) = self.buf.split_at(n);
        self.buf = rest;
        Ok(head)
    }

    pub fn u8(&mut self) -> Result<u8, WireError> {
        Ok(self.take(1)?[0])
    }

    pub fn u16(&mut self) -> Result<u16, WireError> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
    }

    pub fn u32(&mut self) -> Result<u32, WireError> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64, WireError> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn i32(&mut self) -> Result<i32, WireError> {
        Ok(i32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn bytes16(&mut self) -> Result<&'a [u8], WireError> {
        let n = self.u16()? as usize;
        self.take(n)
    }

    pub fn bytes32(&mut self) -> Result<&'a [u8], WireError> {
        let n = self.u32()? as usize;
        self.take(n)
    }

    pub fn str16(&mut self) -> Result<String, WireError> {
        let b = self.bytes16()?;
        String::from_utf8(b.to_vec()).map_err(|_| WireError::Invalid("utf-8 string"))
    }

    pub fn str8(&mut self) -> Result<String, WireError> {
        let n = self.u8()? as usize;
        let b = self.take(n)?;
        String::from_utf8(b.to_vec()).map_err(|_| WireError::Invalid("utf-8 label"))
    }

    pub fn scalar(&mut self) -> Result<Scalar, WireError> {
        self.field::<Scalar>()
    }

    pub fn field<F: PrimeField>(&mut self) -> Result<F, WireError> {
        F::from_bytes(self.take(F::BYTES)?).ok_or(WireError::Invalid("field element out of range"))
    }

    pub fn g1(&mut self) -> Result<G1Element, WireError> {
        Ok(G1Element::from_bytes(self.take(G1_BYTES)?)?)
    }

    pub fn gt(&mut self) -> Result<GtElement, WireError> {
        Ok(GtElement::from_bytes(self.take(GT_BYTES)?)?)
    }

    pub fn remaining(&self) -> usize {
        self.buf.len()
    }

    pub fn finish(self) -> Result<(), WireError> {
        match self.buf.len() {
            0 => Ok(()),
            n => Err(WireError::Trailing(n)),
        }
    }
}

const _: () = assert!(SCALAR_BYTES == 20 && G1_BYTES == 64 && GT_BYTES == 128);
