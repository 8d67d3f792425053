//! Deterministic discrete-event simulator of an NDN forwarding plane:
//! consumers with a fixed request window, edge routers that verify signed
//! interests, routers with PIT, FIB and an LRU content store, and one
//! producer.

pub mod auth;
pub mod engine;
pub mod metrics;
pub mod packet;
pub mod topology;
pub mod workload;

pub use auth::{edge_ingress, DropReason, EdgeAuth, Ingress};
pub use engine::{run_fetch, FetchResult, Scenario, SimConfig, SimError, StartMode};
pub use metrics::{ConsumerMetrics, Metrics, NodeMetrics};
pub use packet::{Content, Data, Interest, Packet};
pub use topology::{testbed, LinkParams, Role, Topology, TopologyError};
