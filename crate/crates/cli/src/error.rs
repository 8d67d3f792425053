//! Error classes and their process exit codes.
//!
//! | code | class |
//! |------|-------|
//! | 0    | success |
//! | 2    | bad command line (reported by clap) |
//! | 3    | file I/O |
//! | 4    | malformed artifact |
//! | 5    | bad config file |
//! | 6    | invalid input (dates, names, parameters) |
//! | 10   | signature rejected: stale |
//! | 11   | signature rejected: node not on the policy path |
//! | 12   | signature rejected: malformed elements |
//! | 13   | signature rejected: V3 != V4 |
//! | 20   | subscription does not cover the content |
//! | 21   | AEAD failure (wrong content key) |
//! | 22   | content needs a rekey secret |
//! | 30   | revocation error |
//! | 31   | consumer is revoked |
//! | 40   | simulator error |

use std::io;
use std::path::{Path, PathBuf};

use ndnsim::SimError;
use thiserror::Error;
use timesub::revocation::RevocationError;
use timesub::scheme::{RejectReason, SchemeError};
use timesub::wire::WireError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed {what}: {source}")]
    Malformed { what: String, source: WireError },
    #[error("config: {0}")]
    Config(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("reject({})", reject_label(.0))]
    Rejected(RejectReason),
    #[error("subscription does not cover the content's policy path")]
    NotSubscribed,
    #[error("decryption failed: wrong content key")]
    Aead,
    #[error("content is bound to a revocation header; pass --rekey")]
    MissingRekey,
    #[error("consumer is revoked by this header")]
    Revoked,
    #[error("revocation: {0}")]
    Revocation(RevocationError),
    #[error("simulator: {0}")]
    Sim(#[from] SimError),
}

pub fn reject_label(r: &RejectReason) -> &'static str {
    match r {
        RejectReason::Stale => "stale",
        RejectReason::WrongNode => "wrong_node",
        RejectReason::Malformed => "malformed",
        RejectReason::Mismatch => "mismatch",
    }
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn malformed(what: impl Into<String>, source: WireError) -> Self {
        CliError::Malformed {
            what: what.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 3,
            CliError::Malformed { .. } => 4,
            CliError::Config(_) => 5,
            CliError::Input(_) => 6,
            CliError::Rejected(RejectReason::Stale) => 10,
            CliError::Rejected(RejectReason::WrongNode) => 11,
            CliError::Rejected(RejectReason::Malformed) => 12,
            CliError::Rejected(RejectReason::Mismatch) => 13,
            CliError::NotSubscribed => 20,
            CliError::Aead => 21,
            CliError::MissingRekey => 22,
            CliError::Revocation(_) => 30,
            CliError::Revoked => 31,
            CliError::Sim(_) => 40,
        }
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        match e {
            SchemeError::NoCoverNode => CliError::NotSubscribed,
            SchemeError::Aead(_) => CliError::Aead,
            SchemeError::MissingRekey => CliError::MissingRekey,
            SchemeError::Wire(w) => CliError::malformed("artifact", w),
            SchemeError::Revocation(r) => r.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<RevocationError> for CliError {
    fn from(e: RevocationError) -> Self {
        match e {
            RevocationError::DegenerateShare => CliError::Revoked,
            RevocationError::Wire(w) => CliError::malformed("revocation artifact", w),
            other => CliError::Revocation(other),
        }
    }
}
