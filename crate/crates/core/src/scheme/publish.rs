use chrono::NaiveDate;
use rand::RngCore;

use super::{h1_id, ConsumerKey, MasterSecret, PublicParams, SchemeError};
use crate::algebra::{hash_gt_to_scalar, pair, scalar_to_bytes, G1Element, GtElement, Scalar};
use crate::dem::ContentKey;
use crate::field::PrimeField;
use crate::revocation::RekeySecret;
use crate::siff::SiffPolynomial;
use crate::subtree::PolicyTree;

/// ⟨Enc_K(M), C1, {C_i}, 𝔸⟩ plus the name of the revocation header the
/// content key is bound to, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub content_name: String,
    pub c1: GtElement,
    /// (t_i label, C_i) along the policy path, leaf first.
    pub nodes: Vec<(String, G1Element)>,
    pub poly: SiffPolynomial<Scalar>,
    pub revocation: Option<String>,
    pub payload: Vec<u8>,
}

impl Ciphertext {
    pub fn path_labels(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|(l, _)| l.as_str())
    }
}

/// A policy-path node as seen by the producer: its label and η.
#[derive(Clone, Debug)]
pub struct PathNodeSecret {
    pub label: String,
    pub eta: Scalar,
}

/// Encrypts under the policy path of `date`.
pub fn publish<R: RngCore + ?Sized>(
    ms: &MasterSecret,
    pp: &PublicParams,
    tree: &PolicyTree,
    date: NaiveDate,
    content_name: &str,
    plaintext: &[u8],
    rng: &mut R,
) -> Result<Ciphertext, SchemeError> {
    let path = path_secrets(ms, tree, date)?;
    publish_on_path(ms, pp, &path, content_name, plaintext, None, rng)
}

/// Like [`publish`], with the content key additionally bound to a
/// revocation rekey secret `k`: KDF(K ‖ k).
#[allow(clippy::too_many_arguments)]
pub fn publish_revocable<R: RngCore + ?Sized>(
    ms: &MasterSecret,
    pp: &PublicParams,
    tree: &PolicyTree,
    date: NaiveDate,
    content_name: &str,
    plaintext: &[u8],
    header_name: &str,
    rekey: &RekeySecret,
    rng: &mut R,
) -> Result<Ciphertext, SchemeError> {
    let path = path_secrets(ms, tree, date)?;
    publish_on_path(ms, pp, &path, content_name, plaintext, Some((header_name, rekey)), rng)
}

fn path_secrets(ms: &MasterSecret, tree: &PolicyTree, date: NaiveDate) -> Result<Vec<PathNodeSecret>, SchemeError> {
    tree.policy_path(date)?
        .nodes()
        .iter()
        .map(|n| {
            Ok(PathNodeSecret {
                label: n.label(),
                eta: ms.eta(n).ok_or_else(|| SchemeError::UnknownNode(n.label()))?,
            })
        })
        .collect()
}

/// Encryption over an explicit path. Trees taller than the calendar tree
/// (used for height benchmarks) go through here with their own η values.
pub fn publish_on_path<R: RngCore + ?Sized>(
    ms: &MasterSecret,
    pp: &PublicParams,
    path: &[PathNodeSecret],
    content_name: &str,
    plaintext: &[u8],
    revocation: Option<(&str, &RekeySecret)>,
    rng: &mut R,
) -> Result<Ciphertext, SchemeError> {
    if content_name.is_empty() {
        return Err(SchemeError::EmptyName);
    }
    let r = Scalar::random_nonzero(rng);
    let key = Scalar::random_nonzero(rng);
    let base = pair(&pp.g, &pp.g);

    let mut nodes = Vec::with_capacity(path.len());
    let mut roots = Vec::with_capacity(path.len());
    for node in path {
        let eta_inv = node.eta.inverse().ok_or_else(|| SchemeError::UnknownNode(node.label.clone()))?;
        nodes.push((node.label.clone(), pp.g.pow(&(node.eta * r))));
        // x_i = e(g,g)^{δ·r/η_i}
        let x = base.pow(&(ms.delta * r * eta_inv));
        roots.push(hash_gt_to_scalar(&x));
    }
    // distinct η give distinct x_i except with negligible probability
    let poly = SiffPolynomial::build(&roots, key)?;

    let content_key = derive_content_key(&key, revocation.map(|(_, k)| k), content_name);
    Ok(Ciphertext {
        content_name: content_name.to_string(),
        c1: base.pow(&(ms.sigma * r)),
        nodes,
        poly,
        revocation: revocation.map(|(name, _)| name.to_string()),
        payload: content_key.seal(content_name, plaintext, rng),
    })
}

fn derive_content_key(key: &Scalar, rekey: Option<&RekeySecret>, content_name: &str) -> ContentKey {
    let k_bytes = scalar_to_bytes(key);
    match rekey {
        None => ContentKey::derive(&[&k_bytes], content_name),
        Some(r) => ContentKey::derive(&[&k_bytes, &r.to_bytes()], content_name),
    }
}

/// Recomputes x'_i through the consumer's token for the shared node and
/// opens the payload. `rekey` is required when the ciphertext is bound to a
/// revocation header.
pub fn decrypt(
    key: &ConsumerKey,
    ct: &Ciphertext,
    rekey: Option<&RekeySecret>,
) -> Result<Vec<u8>, SchemeError> {
    let (label, c_i) = ct
        .nodes
        .iter()
        .find(|(label, _)| key.token_for_label(label).is_some())
        .ok_or(SchemeError::NoCoverNode)?;
    let (_, token) = key.token_for_label(label).expect("found above");
    recover_with_token(key, ct, &token.tk1, c_i, rekey)
}

pub(crate) fn recover_with_token(
    key: &ConsumerKey,
    ct: &Ciphertext,
    tk1: &G1Element,
    c_i: &G1Element,
    rekey: Option<&RekeySecret>,
) -> Result<Vec<u8>, SchemeError> {
    let d1 = pair(tk1, c_i);
    let d2 = d1 / ct.c1.pow(&h1_id(&key.id));
    let uk_inv = key.uk.inverse().expect("UK is nonzero");
    let x = d2.pow(&uk_inv);
    let k = ct.poly.eval(hash_gt_to_scalar(&x));
    let rekey = match (&ct.revocation, rekey) {
        (Some(_), None) => return Err(SchemeError::MissingRekey),
        (Some(_), Some(r)) => Some(r),
        (None, _) => None,
    };
    let content_key = derive_content_key(&k, rekey, &ct.content_name);
    Ok(content_key.open(&ct.content_name, &ct.payload)?)
}
