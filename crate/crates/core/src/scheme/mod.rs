//! Producer setup, consumer registration, data publication, anonymous
//! interest signing with edge verification, and decryption.

mod auth;
mod encoding;
pub mod naming;
mod publish;

use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDate;
use rand::RngCore;
use thiserror::Error;

use crate::algebra::{hash_segments_to_scalar, hash_to_scalar, pair, G1Element, GtElement, Scalar};
use crate::dem::AeadFailure;
use crate::field::PrimeField;
use crate::revocation::RevocationError;
use crate::siff::SiffError;
use crate::subtree::{CoverSet, NodeId, PolicyTree, TreeError};
use crate::wire::WireError;

pub use auth::{
    sign_interest, sign_interest_on_path, verify_interest, verify_interest_on_path, InterestSignature, RejectReason, Verdict,
};
pub use publish::{decrypt, publish, publish_on_path, publish_revocable, Ciphertext, PathNodeSecret};

/// Default freshness window for interest signatures, in seconds.
pub const DEFAULT_FRESHNESS_SECS: u64 = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("freshness window must be positive")]
    ZeroFreshnessWindow,
    #[error("subscription does not cover the policy path")]
    NoCoverNode,
    #[error("wrong access key recovered: {0}")]
    Aead(#[from] AeadFailure),
    #[error("ciphertext is bound to a revocation header but no rekey secret was supplied")]
    MissingRekey,
    #[error("content name must not be empty")]
    EmptyName,
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error(transparent)]
    Wire(#[from] WireError),
    #[error(transparent)]
    Revocation(#[from] RevocationError),
    #[error(transparent)]
    Siff(#[from] SiffError),
}

/// H1(t_i) for a node label.
pub fn h1_node(label: &str) -> Scalar {
    hash_to_scalar(label.as_bytes())
}

/// H1(ID_u).
pub fn h1_id(id: &[u8]) -> Scalar {
    hash_to_scalar(id)
}

/// H1(ID_u || t_i).
pub fn h1_id_node(id: &[u8], label: &str) -> Scalar {
    hash_segments_to_scalar(&[id, label.as_bytes()])
}

/// H1(ts || CN), ts as 8 big-endian bytes.
pub fn h1_request(ts: u64, content_name: &str) -> Scalar {
    hash_segments_to_scalar(&[&ts.to_be_bytes(), content_name.as_bytes()])
}

/// Public parameters ⟨q, G1, GT, H1, H2, e, g, Y1, Y2⟩ plus the tree year
/// and the freshness window. q and the groups are fixed by the curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicParams {
    pub year: i32,
    pub g: G1Element,
    pub y1: GtElement,
    pub y2: GtElement,
    pub freshness_secs: u64,
}

impl PublicParams {
    pub const H1_ID: &'static str = "sha256-be-mod-q-nonzero";
    /// Declared alongside H1 but used by no phase.
    pub const H2_ID: &'static str = "unused";

    pub fn tree(&self) -> PolicyTree {
        PolicyTree::new(self.year)
    }
}

/// Master secret ⟨σ, δ, κ, ϰ, {η_i}⟩.
#[derive(Clone, PartialEq, Eq)]
pub struct MasterSecret {
    pub(crate) year: i32,
    pub(crate) sigma: Scalar,
    pub(crate) delta: Scalar,
    pub(crate) kappa: Scalar,
    pub(crate) varkappa: Scalar,
    pub(crate) etas: BTreeMap<NodeId, Scalar>,
}

impl fmt::Debug for MasterSecret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MasterSecret")
            .field("year", &self.year)
            .field("nodes", &self.etas.len())
            .finish_non_exhaustive()
    }
}

impl MasterSecret {
    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn eta(&self, node: &NodeId) -> Option<Scalar> {
        self.etas.get(node).copied()
    }

    pub fn sigma(&self) -> Scalar {
        self.sigma
    }

    pub fn delta(&self) -> Scalar {
        self.delta
    }

    pub fn kappa(&self) -> Scalar {
        self.kappa
    }

    pub fn varkappa(&self) -> Scalar {
        self.varkappa
    }

    /// Checks Y1 = e(g,g)^κ and Y2 = e(g,g)^ϰ.
    pub fn matches(&self, pp: &PublicParams) -> bool {
        let base = pair(&pp.g, &pp.g);
        pp.year == self.year && base.pow(&self.kappa) == pp.y1 && base.pow(&self.varkappa) == pp.y2
    }
}

/// Token pair for one cover node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeToken {
    pub tk1: G1Element,
    pub tk2: G1Element,
}

/// A consumer's private key ⟨UK, {TK1_i, TK2_i}⟩ for its cover set.
#[derive(Clone, PartialEq, Eq)]
pub struct ConsumerKey {
    pub(crate) id: Vec<u8>,
    pub(crate) year: i32,
    pub(crate) uk: Scalar,
    pub(crate) tokens: Vec<(NodeId, NodeToken)>,
}

impl fmt::Debug for ConsumerKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConsumerKey")
            .field("id", &String::from_utf8_lossy(&self.id))
            .field("cover", &self.cover().labels())
            .finish_non_exhaustive()
    }
}

impl ConsumerKey {
    pub fn id(&self) -> &[u8] {
        &self.id
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn uk(&self) -> Scalar {
        self.uk
    }

    pub fn cover(&self) -> CoverSet {
        CoverSet::from_nodes(self.tokens.iter().map(|(n, _)| *n).collect())
    }

    pub fn tokens(&self) -> &[(NodeId, NodeToken)] {
        &self.tokens
    }

    pub fn token_for_label(&self, label: &str) -> Option<(NodeId, NodeToken)> {
        self.tokens.iter().find(|(n, _)| n.label() == label).copied()
    }
}

/// Generates PP, MS and the year's policy tree.
pub fn producer_setup<R: RngCore + ?Sized>(
    year: i32,
    freshness_secs: u64,
    rng: &mut R,
) -> Result<(PublicParams, MasterSecret, PolicyTree), SchemeError> {
    if freshness_secs == 0 {
        return Err(SchemeError::ZeroFreshnessWindow);
    }
    let tree = PolicyTree::new(year);
    let g = G1Element::random(rng);
    let sigma = Scalar::random_nonzero(rng);
    let delta = Scalar::random_nonzero(rng);
    let kappa = Scalar::random_nonzero(rng);
    let varkappa = Scalar::random_nonzero(rng);
    let etas = tree
        .nodes()
        .into_iter()
        .map(|n| (n, Scalar::random_nonzero(rng)))
        .collect();
    let base = pair(&g, &g);
    let pp = PublicParams {
        year,
        g,
        y1: base.pow(&kappa),
        y2: base.pow(&varkappa),
        freshness_secs,
    };
    let ms = MasterSecret {
        year,
        sigma,
        delta,
        kappa,
        varkappa,
        etas,
    };
    Ok((pp, ms, tree))
}

/// Issues a key for the subscription `[start, end]` (both in the tree year).
pub fn register_consumer<R: RngCore + ?Sized>(
    ms: &MasterSecret,
    pp: &PublicParams,
    id: &[u8],
    start: NaiveDate,
    end: NaiveDate,
    rng: &mut R,
) -> Result<ConsumerKey, SchemeError> {
    let tree = PolicyTree::new(ms.year);
    let cover = tree.min_cover_dates(start, end)?;
    Ok(issue_key(ms, pp, id, &cover, rng))
}

/// Issues tokens for an explicit cover set.
pub fn issue_key<R: RngCore + ?Sized>(
    ms: &MasterSecret,
    pp: &PublicParams,
    id: &[u8],
    cover: &CoverSet,
    rng: &mut R,
) -> ConsumerKey {
    let uk = Scalar::random_nonzero(rng);
    let h_id = h1_id(id);
    let tokens = cover
        .nodes()
        .iter()
        .map(|node| {
            let eta = ms.etas[node];
            let eta_inv = eta.inverse().expect("η is nonzero");
            let label = node.label();
            // g^{δ·UK/η²} · g^{σ·H1(ID)/η}, folded into one exponent
            let e1 = ms.delta * uk * eta_inv * eta_inv + ms.sigma * h_id * eta_inv;
            // g^{κ·UK·H1(t_i)} · g^{ϰ·H1(ID||t_i)}
            let e2 = ms.kappa * uk * h1_node(&label) + ms.varkappa * h1_id_node(id, &label);
            (
                *node,
                NodeToken {
                    tk1: pp.g.pow(&e1),
                    tk2: pp.g.pow(&e2),
                },
            )
        })
        .collect();
    ConsumerKey {
        id: id.to_vec(),
        year: ms.year,
        uk,
        tokens,
    }
}
