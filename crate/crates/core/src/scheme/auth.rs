use chrono::NaiveDate;
use num_traits::Zero;
use rand::RngCore;

use super::{h1_id_node, h1_node, h1_request, ConsumerKey, NodeToken, PublicParams, SchemeError};
use crate::algebra::{pair, G1Element, GtElement, Scalar};
use crate::field::PrimeField;
use crate::subtree::PolicyTree;

/// ⟨S1, S2, S3, S4, t_i⟩ together with the request it signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterestSignature {
    pub s1: Scalar,
    pub s2: G1Element,
    pub s3: GtElement,
    pub s4: GtElement,
    /// Label of the shared node t_i.
    pub node: String,
    pub ts: u64,
    pub content_name: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RejectReason {
    /// |now - ts| exceeds the freshness window.
    Stale,
    /// t_i is not on the policy path of the requested content.
    WrongNode,
    /// Undecodable or degenerate signature elements.
    Malformed,
    /// V3 != V4.
    Mismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Signs a request for content published on `date`, choosing t_i as the
/// cover node on that date's policy path.
#[allow(clippy::too_many_arguments)]
pub fn sign_interest<R: RngCore + ?Sized>(
    key: &ConsumerKey,
    pp: &PublicParams,
    content_name: &str,
    ts: u64,
    date: NaiveDate,
    tree: &PolicyTree,
    rng: &mut R,
) -> Result<InterestSignature, SchemeError> {
    let path = tree.policy_path(date)?;
    let node = key.cover().covers(&path).ok_or(SchemeError::NoCoverNode)?;
    let (_, token) = key.token_for_label(&node.label()).expect("cover node has a token");
    Ok(sign_with_token(key, pp, &node.label(), &token, content_name, ts, rng))
}

/// Signs against an explicit list of path labels.
pub fn sign_interest_on_path<R: RngCore + ?Sized>(
    key: &ConsumerKey,
    pp: &PublicParams,
    content_name: &str,
    ts: u64,
    path: &[String],
    rng: &mut R,
) -> Result<InterestSignature, SchemeError> {
    let (label, token) = path
        .iter()
        .find_map(|l| key.token_for_label(l).map(|(_, t)| (l, t)))
        .ok_or(SchemeError::NoCoverNode)?;
    Ok(sign_with_token(key, pp, label, &token, content_name, ts, rng))
}

fn sign_with_token<R: RngCore + ?Sized>(
    key: &ConsumerKey,
    pp: &PublicParams,
    label: &str,
    token: &NodeToken,
    content_name: &str,
    ts: u64,
    rng: &mut R,
) -> InterestSignature {
    let v = Scalar::random_nonzero(rng);
    let h_t_inv = h1_node(label).inverse().expect("H1 is nonzero");
    let h_m = h1_request(ts, content_name);
    InterestSignature {
        s1: (key.uk + h_m * h_t_inv) * v,
        s2: token.tk2.pow(&v),
        s3: pp.y1.pow(&-v),
        s4: pp.y2.pow(&(v * h1_id_node(&key.id, label))),
        node: label.to_string(),
        ts,
        content_name: content_name.to_string(),
    }
}

/// Edge-router check for content published on `date`.
pub fn verify_interest(
    pp: &PublicParams,
    sig: &InterestSignature,
    now: u64,
    date: NaiveDate,
    tree: &PolicyTree,
) -> Verdict {
    let Ok(path) = tree.policy_path(date) else {
        return Verdict::Reject(RejectReason::WrongNode);
    };
    let labels: Vec<String> = path.nodes().iter().map(|n| n.label()).collect();
    verify_interest_on_path(pp, sig, now, &labels)
}

/// Freshness, then path membership of t_i, then V3 = V4.
pub fn verify_interest_on_path(pp: &PublicParams, sig: &InterestSignature, now: u64, path: &[String]) -> Verdict {
    if now.abs_diff(sig.ts) > pp.freshness_secs {
        return Verdict::Reject(RejectReason::Stale);
    }
    if !path.iter().any(|l| *l == sig.node) {
        return Verdict::Reject(RejectReason::WrongNode);
    }
    // An identity S2 or trivial S3/S4 can only come from v = 0.
    if sig.s2.is_identity() || sig.s3.is_one() || sig.s4.is_one() || sig.s1.is_zero() {
        return Verdict::Reject(RejectReason::Malformed);
    }
    let h_t_inv = h1_node(&sig.node).inverse().expect("H1 is nonzero");
    let h_m = h1_request(sig.ts, &sig.content_name);
    let v1 = pair(&sig.s2, &pp.g.pow(&h_t_inv));
    let v2 = pp.y1.pow(&sig.s1);
    let v3 = v1 / v2;
    let v4 = sig.s4.pow(&h_t_inv) * sig.s3.pow(&(h_m * h_t_inv));
    if v3 == v4 {
        Verdict::Accept
    } else {
        Verdict::Reject(RejectReason::Mismatch)
    }
}
