//! Acceptance suite. Each criterion runs in isolation and prints one
//! PASS/FAIL line; the process exits nonzero if any criterion fails.
//!
//! Run with `cargo test -p timesub-cli --test acceptance`.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chrono::{Datelike, NaiveDate};
use ndnsim::workload::{ScenarioKind, WorkloadSpec};
use ndnsim::{testbed, SimConfig};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use timesub::algebra::{pair, G1_BYTES, GT_BYTES, SCALAR_BYTES};
use timesub::field::{PrimeField, SmallField};
use timesub::revocation::{exp, recover_key, Exponent, RekeySecret, RevocationSetup};
use timesub::scheme::{
    decrypt, h1_node, h1_request, naming, producer_setup, publish, register_consumer, sign_interest, verify_interest,
    InterestSignature, PublicParams, Verdict,
};
use timesub::siff::SiffPolynomial;
use timesub::subtree::{CoverSet, NodeId, PolicyTree, LEAVES};
use timesub::{GtElement, Scalar};
use timesub_cli::{bench, sim};

const YEAR: i32 = 2023;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn date(m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(YEAR, m, d).unwrap()
}

fn random_date(rng: &mut impl Rng) -> NaiveDate {
    date(1, 1) + chrono::Duration::days(rng.gen_range(0..365))
}

/// Leaf index of a date: 28 leaves per month, days past the 28th share the last one.
fn leaf_of(d: NaiveDate) -> usize {
    (d.month0() as usize) * 28 + (d.day().min(28) as usize - 1)
}

fn e2e() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let started = Instant::now();
    let (mut inside_ok, mut outside_ok) = (0, 0);
    for trial in 0..20 {
        let (pp, ms, tree) = producer_setup(YEAR, 10, &mut rng).map_err(|e| e.to_string())?;
        let (a, b) = (random_date(&mut rng), random_date(&mut rng));
        let (start, end) = (a.min(b), a.max(b));
        let key = register_consumer(&ms, &pp, format!("c{trial}").as_bytes(), start, end, &mut rng)
            .map_err(|e| e.to_string())?;
        let day = start + chrono::Duration::days(rng.gen_range(0..=(end - start).num_days()));
        let path = tree.policy_path(day).map_err(|e| e.to_string())?;
        let name = naming::chunk_name(&naming::file_prefix("/com/test", &path, "file"), trial);
        let plaintext: Vec<u8> = (0..rng.gen_range(1..8192)).map(|_| rng.gen()).collect();
        let ct = publish(&ms, &pp, &tree, day, &name, &plaintext, &mut rng).map_err(|e| e.to_string())?;

        let ts = 1_690_000_000 + trial as u64;
        let sig = sign_interest(&key, &pp, &name, ts, day, &tree, &mut rng).map_err(|e| e.to_string())?;
        let sig = InterestSignature::from_bytes(&sig.to_bytes()).map_err(|e| e.to_string())?;
        let (_, named) = naming::publish_date(&sig.content_name).map_err(|e| e.to_string())?;
        let verdict = verify_interest(&pp, &sig, ts + 2, named, &tree);
        ensure!(verdict == Verdict::Accept, "range {start}..{end} date {day}: {verdict:?}");
        let ct = timesub::scheme::Ciphertext::from_bytes(&ct.to_bytes()).map_err(|e| e.to_string())?;
        let got = decrypt(&key, &ct, None).map_err(|e| format!("range {start}..{end} date {day}: {e}"))?;
        ensure!(got == plaintext, "range {start}..{end} date {day}: plaintext differs");
        inside_ok += 1;
    }
    for trial in 0..20 {
        let (pp, ms, tree) = producer_setup(YEAR, 10, &mut rng).map_err(|e| e.to_string())?;
        // a range short of the full year, and a date whose leaf lies outside it
        let (start, end, day) = loop {
            let (a, b) = (random_date(&mut rng), random_date(&mut rng));
            let (s, e) = (a.min(b), a.max(b));
            let d = random_date(&mut rng);
            let leaf = leaf_of(d);
            if leaf < leaf_of(s) || leaf > leaf_of(e) {
                break (s, e, d);
            }
        };
        let key = register_consumer(&ms, &pp, format!("o{trial}").as_bytes(), start, end, &mut rng)
            .map_err(|e| e.to_string())?;
        let path = tree.policy_path(day).map_err(|e| e.to_string())?;
        let name = naming::file_prefix("/com/test", &path, "file");
        let ct = publish(&ms, &pp, &tree, day, &name, b"secret", &mut rng).map_err(|e| e.to_string())?;
        ensure!(
            decrypt(&key, &ct, None).is_err(),
            "range {start}..{end} decrypted content dated {day}"
        );
        outside_ok += 1;
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:.1?}");
    Ok(format!("{inside_ok}/20 in range round-trip, {outside_ok}/20 out of range refused, {elapsed:.1?}"))
}

/// V3 and V4 recomputed from the signature and public parameters.
fn v3_v4(pp: &PublicParams, sig: &InterestSignature) -> (GtElement, GtElement) {
    let h_t_inv = h1_node(&sig.node).inverse().unwrap();
    let h_m = h1_request(sig.ts, &sig.content_name);
    let v1 = pair(&sig.s2, &pp.g.pow(&h_t_inv));
    let v2 = pp.y1.pow(&sig.s1);
    let v3 = v1 * v2.inverse();
    let v4 = sig.s4.pow(&h_t_inv) * sig.s3.pow(&(h_m * h_t_inv));
    (v3, v4)
}

fn verification_algebra() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let (pp, ms, tree) = producer_setup(YEAR, 10, &mut rng).map_err(|e| e.to_string())?;
    let keys: Vec<_> = (0..10)
        .map(|i| {
            let (a, b) = (random_date(&mut rng), random_date(&mut rng));
            let (s, e) = (a.min(b), a.max(b));
            let key = register_consumer(&ms, &pp, format!("u{i}").as_bytes(), s, e, &mut rng).unwrap();
            (key, s, e)
        })
        .collect();
    let mut honest = Vec::with_capacity(1000);
    for i in 0..1000 {
        let (key, s, e) = &keys[i % keys.len()];
        let day = *s + chrono::Duration::days(rng.gen_range(0..=(*e - *s).num_days()));
        let path = tree.policy_path(day).unwrap();
        let name = naming::chunk_name(&naming::file_prefix("/com/test", &path, "v.mp4"), i);
        let ts = rng.gen_range(1_600_000_000..1_800_000_000);
        let sig = sign_interest(key, &pp, &name, ts, day, &tree, &mut rng).map_err(|e| e.to_string())?;
        let (v3, v4) = v3_v4(&pp, &sig);
        ensure!(v3 == v4, "signature {i}: V3 != V4");
        ensure!(verify_interest(&pp, &sig, ts, day, &tree).is_accept(), "signature {i} rejected");
        honest.push((sig, day));
    }
    let mut parse_rejects = 0;
    for (i, (sig, day)) in honest.iter().enumerate() {
        let mut bytes = sig.to_bytes();
        let at = rng.gen_range(0..bytes.len());
        bytes[at] ^= rng.gen_range(1..=255u8);
        match InterestSignature::from_bytes(&bytes) {
            Err(_) => parse_rejects += 1,
            Ok(t) => ensure!(
                !verify_interest(&pp, &t, sig.ts, *day, &tree).is_accept(),
                "tampered signature {i} (byte {at}) accepted"
            ),
        }
    }
    Ok(format!(
        "1000/1000 honest V3 = V4, 1000/1000 tampered rejected ({parse_rejects} at decoding)"
    ))
}

fn greedy_cover(lo: usize, hi: usize) -> BTreeSet<NodeId> {
    let mut set: BTreeSet<NodeId> = (lo..=hi).map(|i| NodeId::leaf(YEAR, i)).collect();
    loop {
        let parents: BTreeSet<NodeId> = set.iter().filter_map(NodeId::parent).collect();
        match parents.into_iter().find(|p| p.children().iter().all(|c| set.contains(c))) {
            Some(p) => {
                for c in p.children() {
                    set.remove(&c);
                }
                set.insert(p);
            }
            None => return set,
        }
    }
}

fn check_cover(tree: &PolicyTree, lo: usize, hi: usize) -> Result<CoverSet, String> {
    let cover = tree
        .min_cover(NodeId::leaf(YEAR, lo), NodeId::leaf(YEAR, hi))
        .map_err(|e| e.to_string())?;
    let got: BTreeSet<NodeId> = cover.nodes().iter().copied().collect();
    ensure!(got.len() == cover.len(), "[{lo},{hi}]: duplicate nodes");
    ensure!(got == greedy_cover(lo, hi), "[{lo},{hi}]: differs from greedy merge");
    ensure!(cover.leaves() == (lo..=hi).collect(), "[{lo},{hi}]: wrong leaf coverage");
    for a in cover.nodes() {
        for b in cover.nodes() {
            ensure!(a == b || !a.is_ancestor_of(b), "[{lo},{hi}]: {a} above {b}");
        }
    }
    let parents: BTreeSet<NodeId> = cover.nodes().iter().filter_map(NodeId::parent).collect();
    for p in parents {
        ensure!(
            !p.children().iter().all(|c| cover.contains(c)),
            "[{lo},{hi}]: not minimal under {p}"
        );
    }
    Ok(cover)
}

fn cover_oracle() -> Outcome {
    let tree = PolicyTree::new(YEAR);
    for i in 0..LEAVES {
        check_cover(&tree, i, i)?;
    }
    for m in 0..12 {
        let cover = check_cover(&tree, m * 28, m * 28 + 27)?;
        ensure!(cover.len() == 1, "month {} covered by {:?}", m + 1, cover.labels());
    }
    ensure!(check_cover(&tree, 0, LEAVES - 1)?.len() == 1, "full year is not one node");
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    for _ in 0..200 {
        let (a, b) = (rng.gen_range(0..LEAVES), rng.gen_range(0..LEAVES));
        check_cover(&tree, a.min(b), a.max(b))?;
    }
    let m1 = tree.min_cover_dates(date(1, 1), date(1, 31)).map_err(|e| e.to_string())?;
    ensure!(m1.labels() == vec!["m1"], "01/01-31/01 gives {:?}", m1.labels());
    let first = tree.date_to_leaf(date(1, 7)).map_err(|e| e.to_string())?.label();
    let last = tree.date_to_leaf(date(8, 20)).map_err(|e| e.to_string())?.label();
    ensure!(first == "m1w1d7" && last == "m8w3d6", "leaves {first}, {last}");
    Ok(format!("{LEAVES} single days, 12 months, full year, 200 random ranges; 01/01-31/01 -> {{m1}}"))
}

fn siff() -> Outcome {
    type F7 = SmallField<7>;
    let p = SiffPolynomial::build(&[F7::new(2), F7::new(3)], F7::new(5)).map_err(|e| format!("{e:?}"))?;
    // monic x^2 + 2x + 4, constant term first
    ensure!(
        p.coefficients() == [F7::new(4), F7::new(2)] || p.coefficients() == [F7::new(2), F7::new(4)],
        "toy coefficients {:?}",
        p.coefficients()
    );
    for x in 0..7u64 {
        let expected = (x * x + 2 * x + 4) % 7;
        ensure!(p.eval(F7::new(x)) == F7::new(expected), "toy P({x})");
    }
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let x = *[0u64, 1, 4, 5, 6].choose(&mut rng).unwrap();
        ensure!(p.eval(F7::new(x)) != F7::new(5), "toy P({x}) = K");
    }
    for &x in &[2u64, 3] {
        ensure!(p.eval(F7::new(x)) == F7::new(5), "toy P({x}) != K");
    }

    let roots: Vec<Scalar> = (0..4).map(|_| Scalar::random_nonzero(&mut rng)).collect();
    let k = Scalar::random_nonzero(&mut rng);
    let p = SiffPolynomial::build(&roots, k).map_err(|e| format!("{e:?}"))?;
    for r in &roots {
        ensure!(p.eval(*r) == k, "full field root misses K");
    }
    let mut checked = 0;
    while checked < 1000 {
        let x = Scalar::random_nonzero(&mut rng);
        if roots.contains(&x) {
            continue;
        }
        ensure!(p.eval(x) != k, "full field non-root hits K");
        checked += 1;
    }
    Ok("toy field x^2+2x+4 over Z_7, 1000 toy and 1000 full-field non-roots miss K".into())
}

fn interpolate_at_zero(points: &[(BigUint, BigUint)], order: &BigUint) -> BigUint {
    let inv = |a: &BigUint| a.modpow(&(order - 2u32), order);
    let mut acc = BigUint::from(0u32);
    for (k, (xk, yk)) in points.iter().enumerate() {
        let mut num = BigUint::from(1u32);
        let mut den = BigUint::from(1u32);
        for (j, (xj, _)) in points.iter().enumerate() {
            if j != k {
                num = num * xj % order;
                den = den * ((xj + order - xk) % order) % order;
            }
        }
        acc = (acc + yk * num % order * inv(&den)) % order;
    }
    acc
}

fn revocation() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let mut setup = RevocationSetup::new(8, 50, &mut rng).map_err(|e| e.to_string())?;
    let ids: Vec<String> = (0..50).map(|i| format!("c{i}")).collect();
    for id in &ids {
        setup.issue_share(id, &mut rng).map_err(|e| e.to_string())?;
    }
    let mut recoveries = 0;
    for size in 0..=8 {
        for draw in 0..20 {
            let revoked: BTreeSet<String> = ids.choose_multiple(&mut rng, size).cloned().collect();
            let k = RekeySecret::random(&mut rng);
            let header = setup.make_header(&revoked, &k, &mut rng).map_err(|e| e.to_string())?;
            for (id, share) in setup.issued() {
                let got = recover_key(&header, share);
                if revoked.contains(id) {
                    ensure!(got.as_ref().ok() != Some(&k), "size {size} draw {draw}: revoked {id} recovered k");
                } else {
                    ensure!(got.as_ref().ok() == Some(&k), "size {size} draw {draw}: {id} lost k");
                }
                recoveries += 1;
            }
        }
    }

    let order = Exponent::modulus();
    for i in 0..100 {
        let t = rng.gen_range(1..=8);
        let mut setup = RevocationSetup::new(t, 4, &mut rng).map_err(|e| e.to_string())?;
        let share = setup.issue_share("u", &mut rng).map_err(|e| e.to_string())?;
        let mut points: Vec<(BigUint, BigUint)> =
            setup.pool().iter().map(|s| (s.x.to_biguint(), s.y.to_biguint())).collect();
        points.push((share.x.to_biguint(), share.y.to_biguint()));
        let a0 = interpolate_at_zero(&points, &order);
        ensure!(a0 == setup.coefficients()[0].to_biguint(), "instance {i}: a_0 mismatch");
        let k = RekeySecret::random(&mut rng);
        let header = setup.make_header(&BTreeSet::new(), &k, &mut rng).map_err(|e| e.to_string())?;
        let blinding = header.u * k.0.inverse().unwrap();
        ensure!(
            blinding == exp(&header.v, &Exponent::from_biguint(&a0)),
            "instance {i}: exponent interpolation differs from clear text"
        );
        ensure!(recover_key(&header, &share).ok() == Some(k), "instance {i}: recovery failed");
    }
    Ok(format!("{recoveries} recoveries over sizes 0..=8 x 20 draws, 100 interpolation instances"))
}

fn sizes() -> Outcome {
    ensure!(
        (SCALAR_BYTES, G1_BYTES, GT_BYTES) == (20, 64, 128),
        "element sizes ({SCALAR_BYTES}, {G1_BYTES}, {GT_BYTES})"
    );
    let (tau, cs) = (4, 4);
    let expected = [
        GT_BYTES + tau * G1_BYTES + (tau + 1) * SCALAR_BYTES,
        SCALAR_BYTES + 2 * cs * G1_BYTES,
        SCALAR_BYTES + G1_BYTES + 2 * GT_BYTES,
    ];
    ensure!(expected == [484, 532, 340], "formulas give {expected:?}");
    let rows = bench::sizes(6).map_err(|e| e.to_string())?;
    let got: Vec<usize> = rows.iter().map(|r| r.core_bytes).collect();
    ensure!(got == expected, "measured {got:?}");
    Ok(format!("ciphertext {} B, key {} B, signature {} B", got[0], got[1], got[2]))
}

fn strictly_increasing(rows: &[bench::TimingRow]) -> bool {
    rows.windows(2).all(|w| w[0].mean_ms < w[1].mean_ms)
}

fn fmt_means(rows: &[bench::TimingRow]) -> String {
    rows.iter()
        .map(|r| format!("{}:{:.2}", r.param, r.mean_ms))
        .collect::<Vec<_>>()
        .join(" ")
}

fn scaling() -> Outcome {
    let publish = bench::publish_height(&[3, 5, 7, 9], 20, 1024, 7).map_err(|e| e.to_string())?;
    let update = bench::keyupdate_revoked(&[1, 4, 7, 11], 20, 7).map_err(|e| e.to_string())?;
    let detail = format!("publish ms by height {}; key update ms by revoked {}", fmt_means(&publish), fmt_means(&update));
    ensure!(strictly_increasing(&publish), "publish not increasing: {detail}");
    ensure!(strictly_increasing(&update), "key update not increasing: {detail}");
    Ok(detail)
}

fn simulator() -> Outcome {
    let started = Instant::now();
    let topology = testbed();
    let spec = WorkloadSpec::default();
    let config = SimConfig::default();
    let seed = 8;
    let mut times = Vec::new();
    for kind in ScenarioKind::ALL {
        let (_, result, s) = sim::run_scenario(kind, &topology, &spec, &config, seed).map_err(|e| e.to_string())?;
        let label = kind.label();
        ensure!(s.segments >= 500, "{label}: only {} segments", s.segments);
        ensure!(s.consumers == 5, "{label}: {} consumers", s.consumers);
        ensure!(s.opened == s.consumers, "{label}: {}/{} consumers recovered the file", s.opened, s.consumers);
        for c in &result.metrics.consumers {
            ensure!(
                c.interests_sent >= s.segments as u64,
                "{label}: {} sent {} interests for {} segments",
                c.id,
                c.interests_sent,
                s.segments
            );
        }
        let cap = (s.consumers * s.segments) as u64;
        ensure!(s.producer_data_out < cap, "{label}: producer sent {} >= {cap}", s.producer_data_out);
        let t = s.mean_transfer_s.ok_or_else(|| format!("{label}: incomplete"))?;
        times.push((label, t, s.segments, s.producer_data_out));

        let (_, again, _) = sim::run_scenario(kind, &topology, &spec, &config, seed).map_err(|e| e.to_string())?;
        ensure!(again.metrics == result.metrics, "{label}: rerun with the same seed differs");
    }
    let base = times[0].1;
    for (label, t, _, _) in &times[1..] {
        let rel = (t / base - 1.0).abs();
        ensure!(rel <= 0.05, "{label}: {t:.3} s vs {base:.3} s ({:.1}%)", rel * 100.0);
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:.1?}");
    let detail = times
        .iter()
        .map(|(l, t, seg, p)| format!("{l}: {t:.3} s, {seg} segments, producer {p}"))
        .collect::<Vec<_>>()
        .join("; ");
    Ok(format!("{detail}; {elapsed:.1?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("end-to-end correctness", e2e),
        ("verification algebra", verification_algebra),
        ("cover set oracle", cover_oracle),
        ("SIFF property", siff),
        ("revocation", revocation),
        ("serialized sizes", sizes),
        ("scaling trends", scaling),
        ("simulator", simulator),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let n = i + 1;
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {n} ({name}): PASS  {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL  {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
