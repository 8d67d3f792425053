//! The three fetch scenarios: (i) a plaintext file, (ii) the same file
//! encrypted under the scheme plus its ciphertext header object, with
//! signed interests, and (iii) as (ii) plus a revocation header object.

use std::collections::BTreeSet;

use chrono::{Datelike, NaiveDate};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;
use timesub::revocation::{recover_key, RekeySecret, RevocationHeader, RevocationSetup, Share, DEFAULT_DEGREE};
use timesub::scheme::{
    decrypt, naming, producer_setup, publish, publish_revocable, register_consumer, Ciphertext, ConsumerKey,
    SchemeError, DEFAULT_FRESHNESS_SECS,
};

use crate::auth::EdgeAuth;
use crate::engine::{FetchResult, Scenario};
use crate::packet::Content;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioKind {
    Baseline,
    Scheme,
    SchemeWithRevocation,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [ScenarioKind::Baseline, ScenarioKind::Scheme, ScenarioKind::SchemeWithRevocation];

    pub fn label(&self) -> &'static str {
        match self {
            ScenarioKind::Baseline => "i",
            ScenarioKind::Scheme => "ii",
            ScenarioKind::SchemeWithRevocation => "iii",
        }
    }
}

#[derive(Clone, Debug)]
pub struct WorkloadSpec {
    pub consumers: usize,
    pub file_bytes: usize,
    pub segment_size: usize,
    pub prefix: String,
    pub file_name: String,
    pub publish_date: NaiveDate,
    pub freshness_secs: u64,
    pub revocation_degree: usize,
}

impl Default for WorkloadSpec {
    fn default() -> Self {
        Self {
            consumers: 5,
            // the 46 MB original scaled down tenfold: 562 segments
            file_bytes: 4_600_000,
            segment_size: 8192,
            prefix: "/com/test".into(),
            file_name: "video.mp4".into(),
            publish_date: NaiveDate::from_ymd_opt(2023, 8, 20).expect("valid date"),
            freshness_secs: DEFAULT_FRESHNESS_SECS,
            revocation_degree: DEFAULT_DEGREE,
        }
    }
}

#[derive(Debug, Error)]
pub enum WorkloadError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Revocation(#[from] timesub::revocation::RevocationError),
    #[error("consumer did not receive the whole {0}")]
    Incomplete(&'static str),
    #[error("malformed {0}")]
    Malformed(&'static str),
}

pub struct Workload {
    pub kind: ScenarioKind,
    pub scenario: Scenario,
    pub plaintext: Vec<u8>,
    shares: Vec<Share>,
}

/// Builds the scenario's published objects and consumer credentials.
/// Consumers subscribe from the first of the publish month to the
/// publish date.
pub fn build(kind: ScenarioKind, spec: &WorkloadSpec, seed: u64) -> Result<Workload, WorkloadError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut plaintext = vec![0u8; spec.file_bytes];
    rng.fill_bytes(&mut plaintext);

    if kind == ScenarioKind::Baseline {
        let prefix = format!("{}/{}", spec.prefix.trim_end_matches('/'), spec.file_name);
        return Ok(Workload {
            kind,
            scenario: Scenario {
                consumers: spec.consumers,
                files: vec![Content::segmented(&prefix, &plaintext, spec.segment_size)],
                auth: None,
            },
            plaintext,
            shares: Vec::new(),
        });
    }

    let date = spec.publish_date;
    let (pp, ms, tree) = producer_setup(date.year(), spec.freshness_secs, &mut rng)?;
    let month_start = date.with_day(1).expect("day 1 exists");
    let keys: Vec<ConsumerKey> = (0..spec.consumers)
        .map(|i| register_consumer(&ms, &pp, format!("consumer-{i}").as_bytes(), month_start, date, &mut rng))
        .collect::<Result<_, _>>()?;

    let path = tree.policy_path(date).map_err(SchemeError::from)?;
    let file_prefix = naming::file_prefix(&spec.prefix, &path, &spec.file_name);
    let revocation_name = format!("{}/revocation/seq=1", spec.prefix.trim_end_matches('/'));

    let mut shares = Vec::new();
    let mut revocation_object = None;
    let ct = if kind == ScenarioKind::SchemeWithRevocation {
        let mut setup = RevocationSetup::new(spec.revocation_degree, spec.consumers.max(1), &mut rng)?;
        for i in 0..spec.consumers {
            shares.push(setup.issue_share(&format!("consumer-{i}"), &mut rng)?);
        }
        let k = RekeySecret::random(&mut rng);
        let header = setup.make_header(&BTreeSet::new(), &k, &mut rng)?;
        revocation_object = Some(Content::segmented(&revocation_name, &header.to_bytes(), spec.segment_size));
        publish_revocable(&ms, &pp, &tree, date, &file_prefix, &plaintext, &revocation_name, &k, &mut rng)?
    } else {
        publish(&ms, &pp, &tree, date, &file_prefix, &plaintext, &mut rng)?
    };

    let header_bytes = Ciphertext {
        payload: Vec::new(),
        ..ct.clone()
    }
    .to_bytes();
    let mut files = vec![
        Content::segmented(&file_prefix, &ct.payload, spec.segment_size),
        Content::segmented(&format!("{file_prefix}/header"), &header_bytes, spec.segment_size),
    ];
    files.extend(revocation_object);

    let epoch_secs = date.and_hms_opt(0, 0, 0).expect("midnight").and_utc().timestamp() as u64;
    Ok(Workload {
        kind,
        scenario: Scenario {
            consumers: spec.consumers,
            files,
            auth: Some(EdgeAuth { pp, keys, epoch_secs }),
        },
        plaintext,
        shares,
    })
}

impl Workload {
    /// Decrypts what `consumer` fetched, exactly as the consumer would.
    pub fn open(&self, result: &FetchResult, consumer: usize) -> Result<Vec<u8>, WorkloadError> {
        let payload = result.content(consumer, 0).ok_or(WorkloadError::Incomplete("file"))?;
        let Some(auth) = &self.scenario.auth else {
            return Ok(payload);
        };
        let header = result.content(consumer, 1).ok_or(WorkloadError::Incomplete("ciphertext header"))?;
        let mut ct = Ciphertext::from_bytes(&header).map_err(|_| WorkloadError::Malformed("ciphertext header"))?;
        ct.payload = payload;
        let rekey = match self.kind {
            ScenarioKind::SchemeWithRevocation => {
                let bytes = result.content(consumer, 2).ok_or(WorkloadError::Incomplete("revocation header"))?;
                let header =
                    RevocationHeader::from_bytes(&bytes).map_err(|_| WorkloadError::Malformed("revocation header"))?;
                Some(recover_key(&header, &self.shares[consumer])?)
            }
            _ => None,
        };
        Ok(decrypt(&auth.keys[consumer], &ct, rekey.as_ref())?)
    }
}
