//! Content encryption: HKDF-SHA256 over the recovered key material, then
//! AES-256-GCM with the content name as associated data.

use aes_gcm::aead::{Aead, KeyInit, Payload};
use aes_gcm::{Aes256Gcm, Nonce};
use hkdf::Hkdf;
use rand::RngCore;
use sha2::Sha256;
use thiserror::Error;

pub const NONCE_BYTES: usize = 12;
pub const TAG_BYTES: usize = 16;
const KDF_INFO: &[u8] = b"timesub content key v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("authenticated decryption failed")]
pub struct AeadFailure;

/// Symmetric content key.
#[derive(Clone, PartialEq, Eq)]
pub struct ContentKey([u8; 32]);

impl std::fmt::Debug for ContentKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("ContentKey(..)")
    }
}

impl ContentKey {
    /// Derives the key from length-prefixed key-material segments and the content name.
    pub fn derive(material: &[&[u8]], content_name: &str) -> Self {
        let mut ikm = Vec::new();
        for seg in material {
            ikm.extend_from_slice(&(seg.len() as u32).to_be_bytes());
            ikm.extend_from_slice(seg);
        }
        let hk = Hkdf::<Sha256>::new(Some(content_name.as_bytes()), &ikm);
        let mut okm = [0u8; 32];
        hk.expand(KDF_INFO, &mut okm).expect("32 bytes is a valid HKDF output length");
        Self(okm)
    }

    /// Returns nonce || ciphertext || tag.
    pub fn seal<R: RngCore + ?Sized>(&self, content_name: &str, plaintext: &[u8], rng: &mut R) -> Vec<u8> {
        let cipher = Aes256Gcm::new_from_slice(&self.0).expect("32-byte key");
        let mut nonce = [0u8; NONCE_BYTES];
        rng.fill_bytes(&mut nonce);
        let ct = cipher
            .encrypt(
                Nonce::from_slice(&nonce),
                Payload {
                    msg: plaintext,
                    aad: content_name.as_bytes(),
                },
            )
            .expect("AES-GCM encryption does not fail for in-range lengths");
        let mut out = nonce.to_vec();
        out.extend_from_slice(&ct);
        out
    }

    pub fn open(&self, content_name: &str, sealed: &[u8]) -> Result<Vec<u8>, AeadFailure> {
        if sealed.len() < NONCE_BYTES + TAG_BYTES {
            return Err(AeadFailure);
        }
        let cipher = Aes256Gcm::new_from_slice(&self.0).expect("32-byte key");
        let (nonce, ct) = sealed.split_at(NONCE_BYTES);
        cipher
            .decrypt(
                Nonce::from_slice(nonce),
                Payload {
                    msg: ct,
                    aad: content_name.as_bytes(),
                },
            )
            .map_err(|_| AeadFailure)
    }
}
