//! Benchmark suites: publish time against tree height, key-update time
//! against the number of revoked consumers, artifact sizes, and single
//! operation timings.
//!
//! Trials are interleaved across parameter points (one round visits every
//! point) after an untimed warm-up round, so drift hits all points alike.
//!
//! CSV files written to the artifact directory:
//! - `bench-publish-height.csv`, `bench-keyupdate-revoked.csv`:
//!   `suite, param, trials, mean_ms, min_ms, max_ms`
//! - `bench-sizes.csv`: `artifact, fields, core_bytes, wire_bytes`
//! - `bench-crypto-ops.csv`: `op, trials, mean_ms, reference_ms`

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use chrono::{Datelike, NaiveDate};
use rand::{Rng, RngCore};
use serde::Serialize;
use timesub::field::PrimeField;
use timesub::revocation::{recover_key, RekeySecret, RevocationSetup, DEFAULT_DEGREE};
use timesub::scheme::{
    decrypt, naming, producer_setup, publish, publish_on_path, register_consumer, sign_interest, verify_interest,
    MasterSecret, PathNodeSecret, SchemeError,
};
use timesub::subtree::{NodeId, PolicyTree};
use timesub::Scalar;

use crate::args::{BenchArgs, Suite};
use crate::commands::{say, Ctx};
use crate::error::CliError;
use crate::seed::stream;

const YEAR: i32 = 2023;

#[derive(Clone, Debug, Serialize)]
pub struct TimingRow {
    pub suite: &'static str,
    pub param: usize,
    pub trials: usize,
    pub mean_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeRow {
    pub artifact: &'static str,
    pub fields: &'static str,
    pub core_bytes: usize,
    pub wire_bytes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OpRow {
    pub op: &'static str,
    pub trials: usize,
    pub mean_ms: f64,
    pub reference_ms: Option<f64>,
}

fn bench_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(YEAR, 8, 20).expect("valid date")
}

/// Policy path of `date` stretched or shrunk to `height` nodes, leaf first.
/// Calendar nodes keep their η; inserted levels sit between the week and
/// the day and get fresh η.
pub fn extended_path<R: RngCore + ?Sized>(
    ms: &MasterSecret,
    date: NaiveDate,
    height: usize,
    rng: &mut R,
) -> Result<Vec<PathNodeSecret>, CliError> {
    if height < 2 {
        return Err(CliError::Input(format!("tree height {height} is below 2")));
    }
    let tree = PolicyTree::new(ms.year());
    let calendar = tree.policy_path(date).map_err(SchemeError::from)?;
    let secret = |n: &NodeId| PathNodeSecret {
        label: n.label(),
        eta: ms.eta(n).expect("calendar node has η"),
    };
    let [day, week, month, root] = calendar.nodes() else {
        unreachable!("calendar paths have four nodes");
    };
    let mut path = vec![secret(day)];
    let inner = height - 2;
    if inner > 2 {
        for j in (1..=inner - 2).rev() {
            path.push(PathNodeSecret {
                label: format!("{}x{j}", week.label()),
                eta: Scalar::random_nonzero(rng),
            });
        }
    }
    // keep the top `inner` of week, month
    let calendar_inner = [week, month];
    path.extend(calendar_inner[2 - inner.min(2)..].iter().map(|n| secret(n)));
    path.push(secret(root));
    Ok(path)
}

struct Samples(Vec<Vec<f64>>);

impl Samples {
    fn new(points: usize) -> Self {
        Self(vec![Vec::new(); points])
    }

    fn rows(&self, suite: &'static str, params: &[usize]) -> Vec<TimingRow> {
        params
            .iter()
            .zip(&self.0)
            .map(|(&param, s)| TimingRow {
                suite,
                param,
                trials: s.len(),
                mean_ms: s.iter().sum::<f64>() / s.len() as f64,
                min_ms: s.iter().copied().fold(f64::INFINITY, f64::min),
                max_ms: s.iter().copied().fold(0.0, f64::max),
            })
            .collect()
    }
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn check_trials(trials: usize) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Input("trials must be at least 1".into()));
    }
    Ok(())
}

/// Mean publish time per tree height.
pub fn publish_height(heights: &[usize], trials: usize, payload_bytes: usize, seed: u64) -> Result<Vec<TimingRow>, CliError> {
    check_trials(trials)?;
    let mut rng = stream(seed, "bench/publish-height");
    let (pp, ms, _) = producer_setup(YEAR, 10, &mut rng)?;
    let paths = heights
        .iter()
        .map(|&h| extended_path(&ms, bench_date(), h, &mut rng))
        .collect::<Result<Vec<_>, _>>()?;
    let mut payload = vec![0u8; payload_bytes];
    rng.fill_bytes(&mut payload);
    let mut samples = Samples::new(heights.len());
    for round in 0..=trials {
        for (i, path) in paths.iter().enumerate() {
            let name = format!("/bench/h{}/t{round}", heights[i]);
            let t = Instant::now();
            let ct = publish_on_path(&ms, &pp, path, &name, &payload, None, &mut rng)?;
            let elapsed = ms_since(t);
            debug_assert_eq!(ct.nodes.len(), heights[i]);
            if round > 0 {
                samples.0[i].push(elapsed);
            }
        }
    }
    Ok(samples.rows("publish-height", heights))
}

/// Mean consumer key-update time per revoked count; the header degree
/// equals the revoked count.
pub fn keyupdate_revoked(counts: &[usize], trials: usize, seed: u64) -> Result<Vec<TimingRow>, CliError> {
    check_trials(trials)?;
    let mut rng = stream(seed, "bench/keyupdate-revoked");
    let mut setups = Vec::with_capacity(counts.len());
    for &r in counts {
        let mut setup = RevocationSetup::new(r.max(1), r + 1, &mut rng)?;
        let revoked: BTreeSet<String> = (0..r).map(|i| format!("revoked-{i}")).collect();
        for id in &revoked {
            setup.issue_share(id, &mut rng)?;
        }
        let reader = setup.issue_share("reader", &mut rng)?;
        setups.push((setup, revoked, reader));
    }
    let mut samples = Samples::new(counts.len());
    for round in 0..=trials {
        for (i, (setup, revoked, reader)) in setups.iter().enumerate() {
            let k = RekeySecret::random(&mut rng);
            let header = setup.make_header(revoked, &k, &mut rng)?;
            let t = Instant::now();
            let got = recover_key(&header, reader)?;
            let elapsed = ms_since(t);
            if got != k {
                return Err(CliError::Input("key update recovered the wrong secret".into()));
            }
            if round > 0 {
                samples.0[i].push(elapsed);
            }
        }
    }
    Ok(samples.rows("keyupdate-revoked", counts))
}

/// Serialized sizes with |τ| = 4 and a four-node cover set.
pub fn sizes(seed: u64) -> Result<Vec<SizeRow>, CliError> {
    let mut rng = stream(seed, "bench/sizes");
    let (pp, ms, tree) = producer_setup(YEAR, 10, &mut rng)?;
    let d = |m, day| NaiveDate::from_ymd_opt(YEAR, m, day).expect("valid date");
    // m1, m2, m3w1, m3w2d1
    let key = register_consumer(&ms, &pp, b"sizes", d(1, 1), d(3, 8), &mut rng)?;
    debug_assert_eq!(key.cover().len(), 4);
    let date = d(2, 14);
    let name = naming::file_prefix("/com/test", &tree.policy_path(date).map_err(SchemeError::from)?, "f");
    let ct = publish(&ms, &pp, &tree, date, &name, b"", &mut rng)?;
    let sig = sign_interest(&key, &pp, &name, 0, date, &tree, &mut rng)?;
    Ok(vec![
        SizeRow {
            artifact: "ciphertext",
            fields: "|GT| + |tau||G1| + (|tau|+1)|Zq|",
            core_bytes: ct.core_bytes().len(),
            wire_bytes: ct.to_bytes().len(),
        },
        SizeRow {
            artifact: "consumer_key",
            fields: "|Zq| + 2|CS||G1|",
            core_bytes: key.core_bytes().len(),
            wire_bytes: key.to_bytes().len(),
        },
        SizeRow {
            artifact: "signature",
            fields: "|Zq| + |G1| + 2|GT|",
            core_bytes: sig.core_bytes().len(),
            wire_bytes: sig.to_bytes().len(),
        },
    ])
}

/// Single-operation timings. Reference values are the published desk
/// measurements for sign, verify and decrypt.
pub fn crypto_ops(trials: usize, payload_bytes: usize, seed: u64) -> Result<Vec<OpRow>, CliError> {
    check_trials(trials)?;
    let mut rng = stream(seed, "bench/crypto-ops");
    let (pp, ms, tree) = producer_setup(YEAR, 10, &mut rng)?;
    let date = bench_date();
    let month_start = date.with_day0(0).expect("day 1");
    let name = naming::file_prefix("/com/test", &tree.policy_path(date).map_err(SchemeError::from)?, "f");
    let mut payload = vec![0u8; payload_bytes];
    rng.fill_bytes(&mut payload);

    let ops = ["register", "publish", "sign", "verify", "decrypt", "key_update"];
    let mut samples = Samples::new(ops.len());
    let mut revocation = RevocationSetup::new(DEFAULT_DEGREE, 1, &mut rng)?;
    let share = revocation.issue_share("c", &mut rng)?;
    for round in 0..=trials {
        let t = Instant::now();
        let key = register_consumer(&ms, &pp, b"c", month_start, date, &mut rng)?;
        let t_register = ms_since(t);

        let t = Instant::now();
        let ct = publish(&ms, &pp, &tree, date, &name, &payload, &mut rng)?;
        let t_publish = ms_since(t);

        let ts = rng.gen_range(1_000_000..2_000_000);
        let t = Instant::now();
        let sig = sign_interest(&key, &pp, &name, ts, date, &tree, &mut rng)?;
        let t_sign = ms_since(t);

        let t = Instant::now();
        let verdict = verify_interest(&pp, &sig, ts, date, &tree);
        let t_verify = ms_since(t);
        if !verdict.is_accept() {
            return Err(CliError::Input("honest signature rejected".into()));
        }

        let t = Instant::now();
        let plain = decrypt(&key, &ct, None)?;
        let t_decrypt = ms_since(t);
        if plain != payload {
            return Err(CliError::Aead);
        }

        let header = revocation.make_header(&BTreeSet::new(), &RekeySecret::random(&mut rng), &mut rng)?;
        let t = Instant::now();
        recover_key(&header, &share)?;
        let t_update = ms_since(t);

        if round > 0 {
            for (s, v) in samples.0.iter_mut().zip([t_register, t_publish, t_sign, t_verify, t_decrypt, t_update]) {
                s.push(v);
            }
        }
    }
    let reference = |op| match op {
        "sign" => Some(1.0),
        "verify" => Some(1.7),
        "decrypt" => Some(0.7),
        _ => None,
    };
    Ok(ops
        .iter()
        .zip(&samples.0)
        .map(|(&op, s)| OpRow {
            op,
            trials: s.len(),
            mean_ms: s.iter().sum::<f64>() / s.len() as f64,
            reference_ms: reference(op),
        })
        .collect())
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for r in rows {
            w.serialize(r).map_err(|e| CliError::Input(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    crate::commands::write(path, &buf)
}

fn print_timings(out: &mut dyn Write, rows: &[TimingRow], param: &str) -> Result<(), CliError> {
    for r in rows {
        say(
            out,
            &format!(
                "{:<18} {param}={:<3} mean {:>8.3} ms  min {:>8.3}  max {:>8.3}  ({} trials)",
                r.suite, r.param, r.mean_ms, r.min_ms, r.max_ms, r.trials
            ),
        )?;
    }
    Ok(())
}

pub fn cmd_bench(ctx: &Ctx, a: BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = &ctx.config.bench;
    let trials = a.trials.unwrap_or(cfg.trials);
    let all = a.suite == Suite::All;
    if all || a.suite == Suite::Sizes {
        let rows = sizes(ctx.seed)?;
        write_csv(&ctx.config.artifact("bench-sizes.csv"), &rows)?;
        for r in &rows {
            say(
                out,
                &format!("{:<13} core {:>4} B  wire {:>5} B  [{}]", r.artifact, r.core_bytes, r.wire_bytes, r.fields),
            )?;
        }
    }
    if all || a.suite == Suite::CryptoOps {
        let rows = crypto_ops(trials, cfg.payload_bytes, ctx.seed)?;
        write_csv(&ctx.config.artifact("bench-crypto-ops.csv"), &rows)?;
        for r in &rows {
            let reference = r.reference_ms.map(|v| format!("  reference {v} ms")).unwrap_or_default();
            say(out, &format!("{:<13} mean {:>8.3} ms{reference}", r.op, r.mean_ms))?;
        }
    }
    if all || a.suite == Suite::PublishHeight {
        let rows = publish_height(&cfg.heights, trials, cfg.payload_bytes, ctx.seed)?;
        write_csv(&ctx.config.artifact("bench-publish-height.csv"), &rows)?;
        print_timings(out, &rows, "height")?;
    }
    if all || a.suite == Suite::KeyupdateRevoked {
        let rows = keyupdate_revoked(&cfg.revoked, trials, ctx.seed)?;
        write_csv(&ctx.config.artifact("bench-keyupdate-revoked.csv"), &rows)?;
        print_timings(out, &rows, "revoked")?;
    }
    Ok(())
}
