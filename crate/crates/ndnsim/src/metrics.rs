//! Per-run measurements and their CSV forms.
//!
//! Consumer CSV columns: `consumer, transfer_time_s, goodput_bps,
//! interests_sent, data_received`. Goodput is bytes of content per second
//! of transfer time; both time columns are empty for a consumer that gave
//! up on a segment.
//!
//! Node CSV columns: `node, role, interests_in, interests_forwarded,
//! data_in, data_out, cs_hits, aggregated, unsolicited, lost, dropped`.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;

use crate::auth::DropReason;
use crate::topology::Role;

#[derive(Clone, Debug, PartialEq)]
pub struct ConsumerMetrics {
    pub id: String,
    pub start_us: u64,
    pub finish_us: Option<u64>,
    pub bytes_received: u64,
    pub interests_sent: u64,
    pub data_received: u64,
    pub retransmissions: u64,
    pub abandoned: u64,
}

impl ConsumerMetrics {
    pub fn completed(&self) -> bool {
        self.finish_us.is_some() && self.abandoned == 0
    }

    pub fn transfer_time_s(&self) -> Option<f64> {
        if !self.completed() {
            return None;
        }
        Some((self.finish_us? - self.start_us) as f64 / 1e6)
    }

    /// Bytes per second.
    pub fn goodput(&self) -> Option<f64> {
        self.transfer_time_s().map(|t| self.bytes_received as f64 / t)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodeMetrics {
    pub id: String,
    pub role: Option<Role>,
    pub interests_in: u64,
    pub interests_forwarded: u64,
    pub data_in: u64,
    pub data_out: u64,
    pub cs_hits: u64,
    pub aggregated: u64,
    pub unsolicited: u64,
    /// Packets this node sent that the link lost.
    pub lost: u64,
    pub drops: BTreeMap<DropReason, u64>,
}

impl NodeMetrics {
    pub fn dropped(&self) -> u64 {
        self.drops.values().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Metrics {
    pub consumers: Vec<ConsumerMetrics>,
    pub nodes: Vec<NodeMetrics>,
    pub total_segments: usize,
    pub end_time_us: u64,
}

#[derive(Serialize)]
struct ConsumerRow<'a> {
    consumer: &'a str,
    transfer_time_s: Option<f64>,
    goodput_bps: Option<f64>,
    interests_sent: u64,
    data_received: u64,
}

#[derive(Serialize)]
struct NodeRow<'a> {
    node: &'a str,
    role: String,
    interests_in: u64,
    interests_forwarded: u64,
    data_in: u64,
    data_out: u64,
    cs_hits: u64,
    aggregated: u64,
    unsolicited: u64,
    lost: u64,
    dropped: u64,
}

impl Metrics {
    pub fn producer_data_out(&self) -> u64 {
        self.nodes
            .iter()
            .filter(|n| n.role == Some(Role::Producer))
            .map(|n| n.data_out)
            .sum()
    }

    pub fn all_completed(&self) -> bool {
        self.consumers.iter().all(ConsumerMetrics::completed)
    }

    pub fn mean_transfer_time_s(&self) -> Option<f64> {
        mean(self.consumers.iter().map(ConsumerMetrics::transfer_time_s))
    }

    pub fn mean_goodput(&self) -> Option<f64> {
        mean(self.consumers.iter().map(ConsumerMetrics::goodput))
    }

    pub fn mean_interests_per_consumer(&self) -> f64 {
        let n = self.consumers.len().max(1) as f64;
        self.consumers.iter().map(|c| c.interests_sent).sum::<u64>() as f64 / n
    }

    pub fn total_drops(&self, reason: DropReason) -> u64 {
        self.nodes.iter().map(|n| n.drops.get(&reason).copied().unwrap_or(0)).sum()
    }

    pub fn write_consumer_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for c in &self.consumers {
            w.serialize(ConsumerRow {
                consumer: &c.id,
                transfer_time_s: c.transfer_time_s(),
                goodput_bps: c.goodput(),
                interests_sent: c.interests_sent,
                data_received: c.data_received,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_node_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for n in &self.nodes {
            w.serialize(NodeRow {
                node: &n.id,
                role: n.role.map(|r| r.to_string()).unwrap_or_default(),
                interests_in: n.interests_in,
                interests_forwarded: n.interests_forwarded,
                data_in: n.data_in,
                data_out: n.data_out,
                cs_hits: n.cs_hits,
                aggregated: n.aggregated,
                unsolicited: n.unsolicited,
                lost: n.lost,
                dropped: n.dropped(),
            })?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Mean over the values, or None if any value is missing or there are none.
fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Option<Vec<f64>> = values.collect();
    let v = v?;
    if v.is_empty() {
        return None;
    }
    Some(v.iter().sum::<f64>() / v.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn goodput_is_size_over_time() {
        let c = ConsumerMetrics {
            id: "c0".into(),
            start_us: 1_000_000,
            finish_us: Some(3_000_000),
            bytes_received: 4_000,
            interests_sent: 5,
            data_received: 5,
            retransmissions: 0,
            abandoned: 0,
        };
        assert_eq!(c.transfer_time_s(), Some(2.0));
        assert_eq!(c.goodput(), Some(2_000.0));

        let m = Metrics {
            consumers: vec![c.clone(), ConsumerMetrics { abandoned: 1, ..c }],
            nodes: vec![],
            total_segments: 5,
            end_time_us: 3_000_000,
        };
        assert_eq!(m.mean_transfer_time_s(), None);
        let mut buf = Vec::new();
        m.write_consumer_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "consumer,transfer_time_s,goodput_bps,interests_sent,data_received\nc0,2.0,2000.0,5,5\nc0,,,5,5\n"
        );
    }
}
