use chrono::{Datelike, Duration, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use timesub::scheme::{
    decrypt, naming, producer_setup, publish, register_consumer, sign_interest, verify_interest, InterestSignature,
    RejectReason, SchemeError, Verdict,
};

fn random_date(rng: &mut impl Rng) -> NaiveDate {
    NaiveDate::from_ymd_opt(2023, 1, 1).unwrap() + Duration::days(rng.gen_range(0..365))
}

fn same_leaf(tree: &timesub::subtree::PolicyTree, a: NaiveDate, b: NaiveDate) -> bool {
    tree.date_to_leaf(a).unwrap() == tree.date_to_leaf(b).unwrap()
}

#[test]
fn random_subscriptions_round_trip() {
    let mut rng = ChaCha20Rng::seed_from_u64(2023);
    let (pp, ms, tree) = producer_setup(2023, 10, &mut rng).unwrap();
    for trial in 0..12 {
        let (a, b) = (random_date(&mut rng), random_date(&mut rng));
        let (start, end) = (a.min(b), a.max(b));
        let id = format!("consumer-{trial}");
        let key = register_consumer(&ms, &pp, id.as_bytes(), start, end, &mut rng).unwrap();

        let inside = start + Duration::days(rng.gen_range(0..=(end - start).num_days()));
        let path = tree.policy_path(inside).unwrap();
        let prefix = naming::file_prefix("/com/test", &path, "f.bin");
        let name = naming::chunk_name(&prefix, trial);
        let plaintext: Vec<u8> = (0..rng.gen_range(0..4096)).map(|_| rng.gen()).collect();
        let ct = publish(&ms, &pp, &tree, inside, &name, &plaintext, &mut rng).unwrap();

        let ts = 1_700_000_000 + trial as u64;
        let sig = sign_interest(&key, &pp, &name, ts, inside, &tree, &mut rng).unwrap();
        let wire = InterestSignature::from_bytes(&sig.to_bytes()).unwrap();
        let (_, date) = naming::publish_date(&wire.content_name).unwrap();
        assert_eq!(verify_interest(&pp, &wire, ts + 3, date, &tree), Verdict::Accept);
        assert_eq!(decrypt(&key, &ct, None).unwrap(), plaintext);

        // a date outside the subscription, on a different leaf
        let outside = loop {
            let d = random_date(&mut rng);
            if (d < start || d > end) && !same_leaf(&tree, d, start) && !same_leaf(&tree, d, end) {
                break d;
            }
            if start.ordinal() == 1 && end.ordinal() >= 365 {
                break d;
            }
        };
        if !(start..=end).contains(&outside) {
            let ct = publish(&ms, &pp, &tree, outside, "/com/test/other", b"no", &mut rng).unwrap();
            assert_eq!(decrypt(&key, &ct, None).unwrap_err(), SchemeError::NoCoverNode);
            assert_eq!(
                sign_interest(&key, &pp, "/com/test/other", ts, outside, &tree, &mut rng).unwrap_err(),
                SchemeError::NoCoverNode
            );
        }
    }
}

#[test]
fn tampered_bytes_reject() {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let (pp, ms, tree) = producer_setup(2023, 10, &mut rng).unwrap();
    let date = NaiveDate::from_ymd_opt(2023, 5, 17).unwrap();
    let key = register_consumer(&ms, &pp, b"alice", date, date, &mut rng).unwrap();
    let name = "/com/test/y2023.m5.m5w3.m5w3d3/v.mp4/chunk_0";
    let ts = 1_000_000;
    for _ in 0..40 {
        let sig = sign_interest(&key, &pp, name, ts, date, &tree, &mut rng).unwrap();
        let mut bytes = sig.to_bytes();
        let i = rng.gen_range(0..bytes.len());
        bytes[i] ^= 1 << rng.gen_range(0..8);
        match InterestSignature::from_bytes(&bytes) {
            Err(_) => {}
            Ok(t) => assert!(!verify_interest(&pp, &t, ts, date, &tree).is_accept(), "byte {i}"),
        }
    }
}

#[test]
fn freshness_boundary() {
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let (pp, ms, tree) = producer_setup(2023, 30, &mut rng).unwrap();
    let date = NaiveDate::from_ymd_opt(2023, 2, 2).unwrap();
    let key = register_consumer(&ms, &pp, b"a", date, date, &mut rng).unwrap();
    let sig = sign_interest(&key, &pp, "/n", 500, date, &tree, &mut rng).unwrap();
    assert!(verify_interest(&pp, &sig, 530, date, &tree).is_accept());
    assert!(verify_interest(&pp, &sig, 470, date, &tree).is_accept());
    assert_eq!(verify_interest(&pp, &sig, 531, date, &tree), Verdict::Reject(RejectReason::Stale));
    assert_eq!(verify_interest(&pp, &sig, 469, date, &tree), Verdict::Reject(RejectReason::Stale));
}
