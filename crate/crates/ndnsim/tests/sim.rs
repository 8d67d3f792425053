use ndnsim::workload::{build, ScenarioKind, WorkloadSpec};
use ndnsim::{run_fetch, testbed, Content, DropReason, Role, Scenario, SimConfig, SimError, StartMode, Topology};

const STAR: &str = "\
node e1 edge
node e2 edge
node r intermediate
node p producer
link e1 r cost=1 lat_us=5000 bw_bps=100000000
link e2 r cost=1 lat_us=5000 bw_bps=100000000
link r p cost=1 lat_us=10000 bw_bps=100000000
";

fn plain(consumers: usize, segments: usize) -> Scenario {
    let bytes: Vec<u8> = (0..segments * 1000).map(|i| (i % 251) as u8).collect();
    Scenario {
        consumers,
        files: vec![Content::segmented("/com/test/file.bin", &bytes, 1000)],
        auth: None,
    }
}

fn producer(m: &ndnsim::Metrics) -> u64 {
    m.producer_data_out()
}

#[test]
fn single_consumer_cold_cache() {
    let topo = Topology::parse(STAR).unwrap();
    let res = run_fetch(&topo, &plain(1, 300), &SimConfig::default(), 1).unwrap();
    let m = &res.metrics;
    assert!(m.all_completed());
    assert_eq!(m.consumers[0].interests_sent, 300);
    assert_eq!(m.consumers[0].data_received, 300);
    assert_eq!(producer(m), 300);
    assert!(m.nodes.iter().all(|n| n.unsolicited == 0 && n.dropped() == 0));
    let expected: Vec<u8> = (0..300_000).map(|i| (i % 251) as u8).collect();
    assert_eq!(res.content(0, 0).unwrap(), expected);
    let t = m.consumers[0].transfer_time_s().unwrap();
    assert!((m.consumers[0].goodput().unwrap() - 300_000.0 / t).abs() < 1e-6);
}

#[test]
fn second_consumer_is_served_from_cache() {
    let topo = Topology::parse(STAR).unwrap();
    let config = SimConfig {
        start: StartMode::Staggered { interval_us: 60_000_000 },
        ..SimConfig::default()
    };
    let res = run_fetch(&topo, &plain(2, 200), &config, 2).unwrap();
    let m = &res.metrics;
    assert!(m.all_completed());
    assert_eq!(producer(m), 200);
    // c0 sits on e1, c1 on e2; c1's requests stop at r
    let r = m.nodes.iter().find(|n| n.id == "r").unwrap();
    assert!(r.cs_hits as f64 >= 0.9 * 200.0);
    assert!(m.consumers[1].transfer_time_s() < m.consumers[0].transfer_time_s());
}

#[test]
fn concurrent_requests_aggregate() {
    let topo = Topology::parse(STAR).unwrap();
    let config = SimConfig {
        cs_capacity: 0,
        ..SimConfig::default()
    };
    let res = run_fetch(&topo, &plain(2, 200), &config, 3).unwrap();
    let m = &res.metrics;
    assert!(m.all_completed());
    assert_eq!(producer(m), 200);
    let r = m.nodes.iter().find(|n| n.id == "r").unwrap();
    assert_eq!(r.aggregated, 200);
    assert_eq!(r.interests_forwarded, 200);
    assert_eq!(r.data_out, 400);
}

#[test]
fn caching_never_increases_producer_load() {
    let topo = testbed();
    for start in [StartMode::Concurrent, StartMode::Staggered { interval_us: 2_000_000 }] {
        let on = SimConfig {
            start,
            ..SimConfig::default()
        };
        let off = SimConfig { cs_capacity: 0, ..on.clone() };
        let a = run_fetch(&topo, &plain(8, 100), &on, 4).unwrap().metrics;
        let b = run_fetch(&topo, &plain(8, 100), &off, 4).unwrap().metrics;
        assert!(a.all_completed() && b.all_completed());
        assert!(producer(&a) <= producer(&b), "{start:?}");
    }
}

#[test]
fn deterministic_per_seed() {
    let topo = testbed();
    let config = SimConfig {
        loss_rate: 0.01,
        ..SimConfig::default()
    };
    let run = |seed| {
        let m = run_fetch(&topo, &plain(6, 150), &config, seed).unwrap().metrics;
        let mut a = Vec::new();
        let mut b = Vec::new();
        m.write_consumer_csv(&mut a).unwrap();
        m.write_node_csv(&mut b).unwrap();
        (m, a, b)
    };
    let (m1, a1, b1) = run(9);
    let (m2, a2, b2) = run(9);
    assert_eq!(m1, m2);
    assert_eq!(a1, a2);
    assert_eq!(b1, b2);
    let (m3, _, _) = run(10);
    assert_ne!(m1, m3);
}

#[test]
fn loss_causes_retransmissions() {
    let topo = Topology::parse(STAR).unwrap();
    let config = SimConfig {
        loss_rate: 0.02,
        rto_us: 200_000,
        ..SimConfig::default()
    };
    let m = run_fetch(&topo, &plain(2, 300), &config, 5).unwrap().metrics;
    assert!(m.all_completed());
    for c in &m.consumers {
        assert!(c.interests_sent > 300);
        assert!(c.retransmissions > 0);
        assert_eq!(c.bytes_received, 300_000);
    }
}

#[test]
fn signed_scenarios_decrypt_end_to_end() {
    let topo = Topology::parse(STAR).unwrap();
    let spec = WorkloadSpec {
        consumers: 3,
        file_bytes: 40 * 8192 + 17,
        ..WorkloadSpec::default()
    };
    for kind in [ScenarioKind::Scheme, ScenarioKind::SchemeWithRevocation] {
        let w = build(kind, &spec, 11).unwrap();
        let res = run_fetch(&topo, &w.scenario, &SimConfig::default(), 11).unwrap();
        let m = &res.metrics;
        assert!(m.all_completed(), "{kind:?}");
        assert!(m.nodes.iter().all(|n| n.dropped() == 0));
        for c in 0..3 {
            assert_eq!(w.open(&res, c).unwrap(), w.plaintext);
        }
        let edges: u64 = m.nodes.iter().filter(|n| n.role == Some(Role::Edge)).map(|n| n.interests_in).sum();
        assert_eq!(edges, m.consumers.iter().map(|c| c.interests_sent).sum::<u64>());
    }
}

#[test]
fn long_fetches_refresh_signatures() {
    // slow access link: the transfer outlives the freshness window
    let topo = Topology::parse(STAR).unwrap();
    let spec = WorkloadSpec {
        consumers: 1,
        file_bytes: 60 * 8192,
        ..WorkloadSpec::default()
    };
    let w = build(ScenarioKind::Scheme, &spec, 12).unwrap();
    let config = SimConfig {
        access_link: ndnsim::LinkParams {
            cost: 1,
            lat_us: 1000,
            bw_bps: 200_000,
        },
        window: 2,
        rto_us: 3_000_000,
        ..SimConfig::default()
    };
    let res = run_fetch(&topo, &w.scenario, &config, 12).unwrap();
    assert!(res.metrics.all_completed());
    assert!(res.metrics.consumers[0].transfer_time_s().unwrap() > 15.0);
    assert_eq!(res.metrics.total_drops(DropReason::Stale), 0);
    assert_eq!(w.open(&res, 0).unwrap(), w.plaintext);
}

#[test]
fn foreign_keys_are_dropped_at_the_edge() {
    let topo = Topology::parse(STAR).unwrap();
    let spec = WorkloadSpec {
        consumers: 1,
        file_bytes: 4 * 8192,
        ..WorkloadSpec::default()
    };
    let mut w = build(ScenarioKind::Scheme, &spec, 13).unwrap();
    let other = build(ScenarioKind::Scheme, &spec, 14).unwrap();
    w.scenario.auth.as_mut().unwrap().keys = other.scenario.auth.unwrap().keys;
    let config = SimConfig {
        max_retries: 2,
        rto_us: 100_000,
        ..SimConfig::default()
    };
    let m = run_fetch(&topo, &w.scenario, &config, 13).unwrap().metrics;
    assert!(!m.all_completed());
    assert!(m.total_drops(DropReason::Mismatch) > 0);
    assert_eq!(m.producer_data_out(), 0);
    let mut csv = Vec::new();
    m.write_consumer_csv(&mut csv).unwrap();
    assert!(String::from_utf8(csv).unwrap().contains("c0,,,"));
}

#[test]
fn scenario_errors() {
    let topo = Topology::parse(STAR).unwrap();
    let empty = Scenario {
        consumers: 1,
        files: vec![],
        auth: None,
    };
    assert!(matches!(run_fetch(&topo, &empty, &SimConfig::default(), 0), Err(SimError::NoContent)));
    let no_producer = Topology::parse("node e edge\nnode r intermediate\nlink e r cost=1 lat_us=1 bw_bps=1").unwrap();
    assert!(matches!(
        run_fetch(&no_producer, &plain(1, 1), &SimConfig::default(), 0),
        Err(SimError::ProducerCount(0))
    ));
    let w = build(ScenarioKind::Scheme, &WorkloadSpec { consumers: 1, file_bytes: 10, ..Default::default() }, 1).unwrap();
    let mut short = w.scenario.clone();
    short.consumers = 2;
    assert!(matches!(
        run_fetch(&topo, &short, &SimConfig::default(), 0),
        Err(SimError::MissingKeys { found: 1, wanted: 2 })
    ));
}

#[test]
fn producer_load_per_consumer_falls_with_scale() {
    let topo = testbed();
    let mut per_consumer = Vec::new();
    for consumers in [5, 25, 125] {
        let res = run_fetch(&topo, &plain(consumers, 200), &SimConfig::default(), 11).unwrap();
        let m = &res.metrics;
        assert!(m.all_completed(), "{consumers} consumers");
        per_consumer.push(producer(m) as f64 / consumers as f64);
    }
    assert!(per_consumer.windows(2).all(|w| w[1] < w[0]), "{per_consumer:?}");
}
