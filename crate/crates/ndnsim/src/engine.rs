//! Single-threaded discrete-event forwarding engine with a microsecond clock.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::num::NonZeroUsize;
use std::sync::Arc;

use lru::LruCache;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;
use timesub::scheme::{naming, sign_interest_on_path};

use crate::auth::{CheckedSignature, DropReason, EdgeAuth, Ingress};
use crate::metrics::{ConsumerMetrics, Metrics, NodeMetrics};
use crate::packet::{Content, Data, Interest, Packet};
use crate::topology::{LinkParams, Role, Topology, TopologyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("topology needs exactly one producer, found {0}")]
    ProducerCount(usize),
    #[error("topology has {found} consumers but the scenario asks for {wanted}")]
    ConsumerCount { found: usize, wanted: usize },
    #[error("consumer {0} cannot reach the producer")]
    Unsatisfiable(String),
    #[error("scenario has no content")]
    NoContent,
    #[error("scenario needs {wanted} consumer keys, got {found}")]
    MissingKeys { found: usize, wanted: usize },
    #[error("window must be positive")]
    ZeroWindow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StartMode {
    Concurrent,
    /// Consumer i starts at i × interval.
    Staggered { interval_us: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub window: usize,
    pub interest_lifetime_us: u64,
    /// Consumer retransmission timeout.
    pub rto_us: u64,
    pub max_retries: u32,
    /// Content-store capacity in segments; 0 disables caching.
    pub cs_capacity: usize,
    pub loss_rate: f64,
    /// Edge time to verify a signature not seen before.
    pub verify_service_us: u64,
    /// Consumer time to produce a signature.
    pub sign_service_us: u64,
    pub start: StartMode,
    /// Simulation stops at this time even if fetches are incomplete.
    pub horizon_us: u64,
    pub access_link: LinkParams,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            window: 64,
            interest_lifetime_us: 4_000_000,
            rto_us: 1_000_000,
            max_retries: 16,
            cs_capacity: 10_000,
            loss_rate: 0.0,
            verify_service_us: 1_700,
            sign_service_us: 1_000,
            start: StartMode::Concurrent,
            horizon_us: 3_600_000_000,
            access_link: LinkParams {
                cost: 1,
                lat_us: 1_000,
                bw_bps: 100_000_000,
            },
        }
    }
}

/// What every consumer fetches, and how requests are authenticated.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub consumers: usize,
    /// Fetched in order; each consumer requests every segment of every file.
    pub files: Vec<Content>,
    /// Signed requests and edge verification; None runs without either.
    pub auth: Option<EdgeAuth>,
}

pub struct FetchResult {
    pub metrics: Metrics,
    received: Vec<Vec<Option<Arc<[u8]>>>>,
    file_ranges: Vec<(usize, usize)>,
}

impl FetchResult {
    /// Reassembled bytes of `file` as seen by `consumer`, if complete.
    pub fn content(&self, consumer: usize, file: usize) -> Option<Vec<u8>> {
        let (a, b) = self.file_ranges[file];
        let segs: Option<Vec<Arc<[u8]>>> = self.received[consumer][a..b].iter().cloned().collect();
        Some(Content::reassemble(&segs?))
    }
}

/// Runs the scenario. If the topology has no consumer nodes, the scenario's
/// consumers are attached round-robin to the edge routers.
pub fn run_fetch(topology: &Topology, scenario: &Scenario, config: &SimConfig, seed: u64) -> Result<FetchResult, SimError> {
    let topology = if topology.with_role(Role::Consumer).is_empty() {
        topology.attach_consumers(scenario.consumers, config.access_link)?
    } else {
        topology.clone()
    };
    let found = topology.with_role(Role::Consumer).len();
    if found != scenario.consumers {
        return Err(SimError::ConsumerCount {
            found,
            wanted: scenario.consumers,
        });
    }
    if scenario.files.is_empty() {
        return Err(SimError::NoContent);
    }
    if config.window == 0 {
        return Err(SimError::ZeroWindow);
    }
    if let Some(auth) = &scenario.auth {
        if auth.keys.len() < scenario.consumers {
            return Err(SimError::MissingKeys {
                found: auth.keys.len(),
                wanted: scenario.consumers,
            });
        }
    }
    let mut sim = Sim::new(topology, scenario, config, seed)?;
    sim.run();
    Ok(sim.finish())
}

#[derive(Debug)]
enum Event {
    ConsumerStart(usize),
    Arrive { to: usize, from: usize, packet: Packet },
    /// Interest admitted by an edge after verification.
    Admitted { node: usize, from: usize, interest: Interest },
    Send { consumer: usize, seg: usize, attempt: u32 },
    Timeout { consumer: usize, seg: usize, attempt: u32 },
}

struct Scheduled {
    time: u64,
    seq: u64,
    event: Event,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        (self.time, self.seq) == (other.time, other.seq)
    }
}
impl Eq for Scheduled {}
impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Scheduled {
    // min-heap on (time, seq)
    fn cmp(&self, other: &Self) -> Ordering {
        (other.time, other.seq).cmp(&(self.time, self.seq))
    }
}

struct PitEntry {
    faces: Vec<usize>,
    expiry: u64,
}

struct Router {
    pit: HashMap<Arc<str>, PitEntry>,
    cs: Option<LruCache<Arc<str>, Arc<[u8]>>>,
    // edge verification memo and server
    verified: HashMap<Arc<[u8]>, (Result<CheckedSignature, DropReason>, u64)>,
    verifier_busy_until: u64,
}

struct Segment {
    name: Arc<str>,
    file: usize,
}

/// Attempt marker for a segment the consumer gave up on.
const ABANDONED: u32 = u32::MAX;

struct Consumer {
    node: usize,
    edge: usize,
    key_index: usize,
    next: usize,
    outstanding: usize,
    resolved: usize,
    attempts: Vec<u32>,
    received: Vec<Option<Arc<[u8]>>>,
    signatures: Vec<Option<SignatureState>>,
    metrics: ConsumerMetrics,
}

struct SignatureState {
    ts: u64,
    bytes: Arc<[u8]>,
    ready_at: u64,
}

struct Sim<'a> {
    topo: Topology,
    config: &'a SimConfig,
    auth: Option<&'a EdgeAuth>,
    queue: BinaryHeap<Scheduled>,
    seq: u64,
    now: u64,
    rng: ChaCha20Rng,
    next_hop: Vec<Option<usize>>,
    routers: Vec<Router>,
    consumers: Vec<Consumer>,
    consumer_of_node: HashMap<usize, usize>,
    segments: Vec<Segment>,
    segment_index: HashMap<Arc<str>, usize>,
    file_ranges: Vec<(usize, usize)>,
    // file -> policy path labels, for protected files
    file_paths: Vec<Option<Vec<String>>>,
    file_prefixes: Vec<String>,
    repo: HashMap<Arc<str>, Arc<[u8]>>,
    producer: usize,
    // (link index, direction) -> busy until
    link_busy: Vec<[u64; 2]>,
    node_metrics: Vec<NodeMetrics>,
}

impl<'a> Sim<'a> {
    fn new(topo: Topology, scenario: &'a Scenario, config: &'a SimConfig, seed: u64) -> Result<Self, SimError> {
        let producers = topo.with_role(Role::Producer);
        if producers.len() != 1 {
            return Err(SimError::ProducerCount(producers.len()));
        }
        let producer = producers[0];
        let next_hop = topo.next_hops(producer);

        let mut segments = Vec::new();
        let mut segment_index = HashMap::new();
        let mut file_ranges = Vec::new();
        let mut repo = HashMap::new();
        for (fi, file) in scenario.files.iter().enumerate() {
            let start = segments.len();
            for (si, payload) in file.segments.iter().enumerate() {
                let name: Arc<str> = Arc::from(file.segment_name(si));
                segment_index.insert(name.clone(), segments.len());
                repo.insert(name.clone(), payload.clone());
                segments.push(Segment { name, file: fi });
            }
            file_ranges.push((start, segments.len()));
        }
        let file_paths = scenario
            .files
            .iter()
            .map(|f| naming::path_labels(&f.prefix).ok())
            .collect();

        let cs_cap = NonZeroUsize::new(config.cs_capacity);
        let routers = (0..topo.nodes().len())
            .map(|_| Router {
                pit: HashMap::new(),
                cs: cs_cap.map(LruCache::new),
                verified: HashMap::new(),
                verifier_busy_until: 0,
            })
            .collect();
        let node_metrics = topo
            .nodes()
            .iter()
            .map(|n| NodeMetrics {
                id: n.id.clone(),
                role: Some(n.role),
                ..Default::default()
            })
            .collect();

        let mut consumers = Vec::new();
        let mut consumer_of_node = HashMap::new();
        for (ci, node) in topo.with_role(Role::Consumer).into_iter().enumerate() {
            let edge = topo.neighbors(node)[0].0;
            if next_hop[edge].is_none() && edge != producer {
                return Err(SimError::Unsatisfiable(topo.nodes()[node].id.clone()));
            }
            consumer_of_node.insert(node, ci);
            consumers.push(Consumer {
                node,
                edge,
                key_index: ci,
                next: 0,
                outstanding: 0,
                resolved: 0,
                attempts: vec![0; segments.len()],
                received: vec![None; segments.len()],
                signatures: (0..scenario.files.len()).map(|_| None).collect(),
                metrics: ConsumerMetrics {
                    id: topo.nodes()[node].id.clone(),
                    start_us: 0,
                    finish_us: None,
                    bytes_received: 0,
                    interests_sent: 0,
                    data_received: 0,
                    retransmissions: 0,
                    abandoned: 0,
                },
            });
        }

        let link_busy = vec![[0, 0]; topo.links().len()];
        let mut sim = Self {
            topo,
            config,
            auth: scenario.auth.as_ref(),
            queue: BinaryHeap::new(),
            seq: 0,
            now: 0,
            rng: ChaCha20Rng::seed_from_u64(seed),
            next_hop,
            routers,
            consumers,
            consumer_of_node,
            segments,
            segment_index,
            file_ranges,
            file_paths,
            file_prefixes: scenario.files.iter().map(|f| f.prefix.clone()).collect(),
            repo,
            producer,
            link_busy,
            node_metrics,
        };
        for ci in 0..sim.consumers.len() {
            let at = match config.start {
                StartMode::Concurrent => 0,
                StartMode::Staggered { interval_us } => interval_us * ci as u64,
            };
            sim.schedule(at, Event::ConsumerStart(ci));
        }
        Ok(sim)
    }

    fn schedule(&mut self, time: u64, event: Event) {
        self.seq += 1;
        self.queue.push(Scheduled {
            time,
            seq: self.seq,
            event,
        });
    }

    fn run(&mut self) {
        while let Some(Scheduled { time, event, .. }) = self.queue.pop() {
            if time > self.config.horizon_us {
                break;
            }
            self.now = time;
            match event {
                Event::ConsumerStart(c) => {
                    self.consumers[c].metrics.start_us = time;
                    self.fill_window(c);
                }
                Event::Arrive { to, from, packet } => match packet {
                    Packet::Interest(i) => self.on_interest(to, from, i),
                    Packet::Data(d) => self.on_data(to, from, d),
                },
                Event::Admitted { node, from, interest } => self.process_interest(node, from, interest),
                Event::Send { consumer, seg, attempt } => {
                    let c = &self.consumers[consumer];
                    if c.received[seg].is_none() && c.attempts[seg] == attempt {
                        self.send_interest(consumer, seg, attempt);
                    }
                }
                Event::Timeout { consumer, seg, attempt } => self.on_timeout(consumer, seg, attempt),
            }
        }
    }

    fn finish(self) -> FetchResult {
        let total_segments = self.segments.len();
        let mut received = Vec::with_capacity(self.consumers.len());
        let mut consumers = Vec::with_capacity(self.consumers.len());
        for c in self.consumers {
            received.push(c.received);
            consumers.push(c.metrics);
        }
        FetchResult {
            metrics: Metrics {
                consumers,
                nodes: self.node_metrics,
                total_segments,
                end_time_us: self.now,
            },
            received,
            file_ranges: self.file_ranges,
        }
    }

    fn transmit(&mut self, from: usize, to: usize, packet: Packet) {
        let (li, link) = {
            let (_, li) = *self
                .topo
                .neighbors(from)
                .iter()
                .find(|(n, _)| *n == to)
                .expect("packets only travel over links");
            (li, self.topo.links()[li].clone())
        };
        let dir = usize::from(link.a != from);
        let bits = packet.wire_size() as u64 * 8;
        let tx_us = (bits * 1_000_000).div_ceil(link.params.bw_bps);
        let start = self.now.max(self.link_busy[li][dir]);
        self.link_busy[li][dir] = start + tx_us;
        if self.config.loss_rate > 0.0 && self.rng.gen_bool(self.config.loss_rate) {
            self.node_metrics[from].lost += 1;
            return;
        }
        match &packet {
            Packet::Interest(_) => {}
            Packet::Data(_) => self.node_metrics[from].data_out += 1,
        }
        let at = start + tx_us + link.params.lat_us;
        self.schedule(at, Event::Arrive { to, from, packet });
    }

    // ---- consumers ----

    fn fill_window(&mut self, c: usize) {
        while self.consumers[c].outstanding < self.config.window && self.consumers[c].next < self.segments.len() {
            let seg = self.consumers[c].next;
            self.consumers[c].next += 1;
            self.consumers[c].outstanding += 1;
            self.send_interest(c, seg, 1);
        }
    }

    fn send_interest(&mut self, c: usize, seg: usize, attempt: u32) {
        let file = self.segments[seg].file;
        let signature = match self.signature_for(c, file) {
            Ok(sig) => sig,
            Err(ready_at) => {
                // signing in progress; send once it completes
                self.consumers[c].attempts[seg] = attempt;
                self.schedule(ready_at, Event::Send { consumer: c, seg, attempt });
                return;
            }
        };
        let interest = Interest {
            name: self.segments[seg].name.clone(),
            nonce: self.rng.gen(),
            signature,
        };
        let consumer = &mut self.consumers[c];
        consumer.attempts[seg] = attempt;
        consumer.metrics.interests_sent += 1;
        if attempt > 1 {
            consumer.metrics.retransmissions += 1;
        }
        let (node, edge) = (consumer.node, consumer.edge);
        self.transmit(node, edge, Packet::Interest(interest));
        self.schedule(
            self.now + self.config.rto_us,
            Event::Timeout {
                consumer: c,
                seg,
                attempt,
            },
        );
    }

    /// Current signature for `file`, re-signed once it is half-way to
    /// stale. Err carries the time a signature being produced is ready.
    fn signature_for(&mut self, c: usize, file: usize) -> Result<Option<Arc<[u8]>>, u64> {
        let Some(auth) = self.auth else { return Ok(None) };
        let Some(path) = &self.file_paths[file] else { return Ok(None) };
        let now_secs = auth.epoch_secs + self.now / 1_000_000;
        let refresh = (auth.pp.freshness_secs / 2).max(1);
        if let Some(state) = &self.consumers[c].signatures[file] {
            if self.now < state.ready_at {
                return Err(state.ready_at);
            }
            if now_secs - state.ts < refresh {
                return Ok(Some(state.bytes.clone()));
            }
        }
        let key = &auth.keys[self.consumers[c].key_index];
        let sig = sign_interest_on_path(key, &auth.pp, &self.file_prefixes[file], now_secs, path, &mut self.rng)
            .expect("consumer keys cover the scenario's content");
        let state = SignatureState {
            ts: now_secs,
            bytes: Arc::from(sig.to_bytes()),
            ready_at: self.now + self.config.sign_service_us,
        };
        let ready_at = state.ready_at;
        let bytes = state.bytes.clone();
        self.consumers[c].signatures[file] = Some(state);
        if ready_at > self.now {
            Err(ready_at)
        } else {
            Ok(Some(bytes))
        }
    }

    fn on_timeout(&mut self, c: usize, seg: usize, attempt: u32) {
        let consumer = &self.consumers[c];
        if consumer.received[seg].is_some() || consumer.attempts[seg] != attempt {
            return;
        }
        if attempt > self.config.max_retries {
            let consumer = &mut self.consumers[c];
            consumer.metrics.abandoned += 1;
            consumer.attempts[seg] = ABANDONED;
            consumer.outstanding -= 1;
            consumer.resolved += 1;
            self.after_progress(c);
            return;
        }
        self.send_interest(c, seg, attempt + 1);
    }

    fn on_consumer_data(&mut self, c: usize, data: Data) {
        let consumer = &mut self.consumers[c];
        consumer.metrics.data_received += 1;
        let Some(&seg) = self.segment_index.get(&data.name) else { return };
        if consumer.received[seg].is_some() || matches!(consumer.attempts[seg], 0 | ABANDONED) {
            return;
        }
        consumer.metrics.bytes_received += data.payload.len() as u64;
        consumer.received[seg] = Some(data.payload);
        consumer.outstanding -= 1;
        consumer.resolved += 1;
        self.after_progress(c);
    }

    fn after_progress(&mut self, c: usize) {
        if self.consumers[c].resolved == self.segments.len() {
            self.consumers[c].metrics.finish_us = Some(self.now);
        } else {
            self.fill_window(c);
        }
    }

    // ---- routers ----

    fn on_interest(&mut self, node: usize, from: usize, interest: Interest) {
        self.node_metrics[node].interests_in += 1;
        let is_ingress =
            self.topo.nodes()[node].role == Role::Edge && self.topo.nodes()[from].role == Role::Consumer;
        match (is_ingress, self.auth) {
            (true, Some(auth)) => self.edge_check(node, from, interest, auth),
            _ => self.process_interest(node, from, interest),
        }
    }

    fn edge_check(&mut self, node: usize, from: usize, interest: Interest, auth: &EdgeAuth) {
        let Ok(path) = naming::path_labels(&interest.name) else {
            return self.process_interest(node, from, interest);
        };
        let Some(bytes) = interest.signature.clone() else {
            return self.drop(node, DropReason::Unsigned);
        };
        let router = &mut self.routers[node];
        let ready_at = match router.verified.get(&bytes) {
            Some((_, ready_at)) => *ready_at,
            None => {
                let checked = CheckedSignature::check(&auth.pp, &bytes);
                let start = self.now.max(router.verifier_busy_until);
                let ready_at = start + self.config.verify_service_us;
                router.verifier_busy_until = ready_at;
                router.verified.insert(bytes.clone(), (checked, ready_at));
                ready_at
            }
        };
        let now_secs = auth.epoch_secs + ready_at.max(self.now) / 1_000_000;
        let decision = match &self.routers[node].verified[&bytes].0 {
            Ok(checked) => checked.admit(&auth.pp, &interest.name, &path, now_secs),
            Err(r) => Ingress::Drop(*r),
        };
        match decision {
            Ingress::Drop(r) => self.drop(node, r),
            Ingress::Forward | Ingress::Public => {
                if ready_at > self.now {
                    self.schedule(ready_at, Event::Admitted { node, from, interest });
                } else {
                    self.process_interest(node, from, interest);
                }
            }
        }
    }

    fn drop(&mut self, node: usize, reason: DropReason) {
        *self.node_metrics[node].drops.entry(reason).or_insert(0) += 1;
    }

    fn process_interest(&mut self, node: usize, from: usize, interest: Interest) {
        if node == self.producer {
            match self.repo.get(&interest.name).cloned() {
                Some(payload) => {
                    let data = Data {
                        name: interest.name,
                        payload,
                    };
                    self.transmit(node, from, Packet::Data(data));
                }
                None => self.drop(node, DropReason::UnknownName),
            }
            return;
        }
        let router = &mut self.routers[node];
        if let Some(payload) = router.cs.as_mut().and_then(|cs| cs.get(&interest.name).cloned()) {
            self.node_metrics[node].cs_hits += 1;
            let data = Data {
                name: interest.name,
                payload,
            };
            return self.transmit(node, from, Packet::Data(data));
        }
        let now = self.now;
        let lifetime = self.config.interest_lifetime_us;
        let forward = match router.pit.get_mut(&interest.name) {
            Some(entry) if entry.expiry >= now => {
                entry.expiry = entry.expiry.max(now + lifetime);
                if entry.faces.contains(&from) {
                    // retransmission from the same downstream: try upstream again
                    true
                } else {
                    entry.faces.push(from);
                    self.node_metrics[node].aggregated += 1;
                    false
                }
            }
            _ => {
                router.pit.insert(
                    interest.name.clone(),
                    PitEntry {
                        faces: vec![from],
                        expiry: now + lifetime,
                    },
                );
                true
            }
        };
        if !forward {
            return;
        }
        match self.next_hop[node] {
            Some(up) => {
                self.node_metrics[node].interests_forwarded += 1;
                self.transmit(node, up, Packet::Interest(interest));
            }
            None => {
                self.routers[node].pit.remove(&interest.name);
                self.drop(node, DropReason::NoRoute);
            }
        }
    }

    fn on_data(&mut self, node: usize, _from: usize, data: Data) {
        self.node_metrics[node].data_in += 1;
        if let Some(&c) = self.consumer_of_node.get(&node) {
            return self.on_consumer_data(c, data);
        }
        let now = self.now;
        let router = &mut self.routers[node];
        let entry = match router.pit.remove(&data.name) {
            Some(e) if e.expiry >= now => e,
            _ => {
                self.node_metrics[node].unsolicited += 1;
                return;
            }
        };
        if let Some(cs) = router.cs.as_mut() {
            cs.put(data.name.clone(), data.payload.clone());
        }
        for face in entry.faces {
            self.transmit(node, face, Packet::Data(data.clone()));
        }
    }
}
