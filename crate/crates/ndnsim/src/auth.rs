//! Edge-router admission of signed interests.

use std::fmt;

use timesub::scheme::{naming, verify_interest_on_path, ConsumerKey, InterestSignature, PublicParams, RejectReason, Verdict};

use crate::packet::Interest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DropReason {
    Unsigned,
    Stale,
    WrongNode,
    Malformed,
    Mismatch,
    /// The signed content name is not a prefix of the requested name.
    NameMismatch,
    NoRoute,
    UnknownName,
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DropReason::Unsigned => "unsigned",
            DropReason::Stale => "stale",
            DropReason::WrongNode => "wrong_node",
            DropReason::Malformed => "malformed",
            DropReason::Mismatch => "mismatch",
            DropReason::NameMismatch => "name_mismatch",
            DropReason::NoRoute => "no_route",
            DropReason::UnknownName => "unknown_name",
        })
    }
}

impl From<RejectReason> for DropReason {
    fn from(r: RejectReason) -> Self {
        match r {
            RejectReason::Stale => DropReason::Stale,
            RejectReason::WrongNode => DropReason::WrongNode,
            RejectReason::Malformed => DropReason::Malformed,
            RejectReason::Mismatch => DropReason::Mismatch,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ingress {
    Forward,
    /// The name carries no policy component; no signature is needed.
    Public,
    Drop(DropReason),
}

/// Signing material for the scenario: public parameters for the edges and
/// one key per consumer, in consumer order.
#[derive(Clone, Debug)]
pub struct EdgeAuth {
    pub pp: PublicParams,
    pub keys: Vec<ConsumerKey>,
    /// Wall-clock seconds at simulated time zero.
    pub epoch_secs: u64,
}

/// A decoded signature and the outcome of its pairing check, which does
/// not depend on the request time.
#[derive(Clone, Debug)]
pub(crate) struct CheckedSignature {
    pub sig: InterestSignature,
    pub algebra: Result<(), DropReason>,
}

impl CheckedSignature {
    pub fn check(pp: &PublicParams, bytes: &[u8]) -> Result<Self, DropReason> {
        let sig = InterestSignature::from_bytes(bytes).map_err(|_| DropReason::Malformed)?;
        let algebra = match verify_interest_on_path(pp, &sig, sig.ts, std::slice::from_ref(&sig.node)) {
            Verdict::Accept => Ok(()),
            Verdict::Reject(r) => Err(r.into()),
        };
        Ok(Self { sig, algebra })
    }

    /// Per-request checks: freshness, name binding, path membership.
    pub fn admit(&self, pp: &PublicParams, name: &str, path: &[String], now_secs: u64) -> Ingress {
        if now_secs.abs_diff(self.sig.ts) > pp.freshness_secs {
            return Ingress::Drop(DropReason::Stale);
        }
        if !is_name_prefix(&self.sig.content_name, name) {
            return Ingress::Drop(DropReason::NameMismatch);
        }
        if !path.contains(&self.sig.node) {
            return Ingress::Drop(DropReason::WrongNode);
        }
        match self.algebra {
            Ok(()) => Ingress::Forward,
            Err(r) => Ingress::Drop(r),
        }
    }
}

/// Component-wise prefix test on NDN names.
pub fn is_name_prefix(prefix: &str, name: &str) -> bool {
    name.strip_prefix(prefix)
        .is_some_and(|rest| rest.is_empty() || rest.starts_with('/') || prefix.ends_with('/'))
}

/// Full admission decision for one interest, without any caching.
pub fn edge_ingress(pp: &PublicParams, interest: &Interest, now_secs: u64) -> Ingress {
    let Ok(path) = naming::path_labels(&interest.name) else {
        return Ingress::Public;
    };
    let Some(bytes) = &interest.signature else {
        return Ingress::Drop(DropReason::Unsigned);
    };
    match CheckedSignature::check(pp, bytes) {
        Ok(checked) => checked.admit(pp, &interest.name, &path, now_secs),
        Err(r) => Ingress::Drop(r),
    }
}
