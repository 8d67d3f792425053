//! Topology files and static shortest-path routing.
//!
//! ```text
//! # comment
//! node ucla edge
//! link ucla arizona cost=12 lat_us=12000 bw_bps=100000000
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use petgraph::algo::{connected_components, dijkstra};
use petgraph::graph::{NodeIndex, UnGraph};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("topology is not connected ({components} components)")]
    DisconnectedGraph { components: usize },
    #[error("consumer {0} must have exactly one link, to an edge router")]
    BadConsumerAttachment(String),
    #[error("no edge routers to attach consumers to")]
    NoEdgeRouters,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Consumer,
    Edge,
    Intermediate,
    Producer,
}

impl FromStr for Role {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "consumer" => Ok(Role::Consumer),
            "edge" => Ok(Role::Edge),
            "intermediate" => Ok(Role::Intermediate),
            "producer" => Ok(Role::Producer),
            other => Err(format!("unknown role {other:?}")),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Consumer => "consumer",
            Role::Edge => "edge",
            Role::Intermediate => "intermediate",
            Role::Producer => "producer",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub role: Role,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkParams {
    pub cost: u32,
    pub lat_us: u64,
    pub bw_bps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub a: usize,
    pub b: usize,
    pub params: LinkParams,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    nodes: Vec<Node>,
    links: Vec<Link>,
    // node -> (neighbor, link index), sorted by neighbor id
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Topology {
    pub fn parse(text: &str) -> Result<Self, TopologyError> {
        let mut nodes: Vec<Node> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut links = Vec::new();
        let mut seen_links = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| TopologyError::Parse { line, msg };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields[0] {
                "node" => {
                    let [_, id, role] = fields[..] else {
                        return Err(err("expected: node <id> <role>".into()));
                    };
                    let role = role.parse().map_err(err)?;
                    if index.insert(id.to_string(), nodes.len()).is_some() {
                        return Err(err(format!("duplicate node {id}")));
                    }
                    nodes.push(Node { id: id.to_string(), role });
                }
                "link" => {
                    if fields.len() != 6 {
                        return Err(err("expected: link <a> <b> cost= lat_us= bw_bps=".into()));
                    }
                    let lookup = |id: &str| index.get(id).copied().ok_or_else(|| err(format!("unknown node {id}")));
                    let (a, b) = (lookup(fields[1])?, lookup(fields[2])?);
                    if a == b {
                        return Err(err("self loop".into()));
                    }
                    if !seen_links.insert((a.min(b), a.max(b))) {
                        return Err(err(format!("duplicate link {} {}", fields[1], fields[2])));
                    }
                    let params = parse_link_params(&fields[3..]).map_err(err)?;
                    links.push(Link { a, b, params });
                }
                other => return Err(err(format!("unknown directive {other:?}"))),
            }
        }
        Self::from_parts(nodes, links)
    }

    pub fn from_parts(nodes: Vec<Node>, links: Vec<Link>) -> Result<Self, TopologyError> {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (li, l) in links.iter().enumerate() {
            adjacency[l.a].push((l.b, li));
            adjacency[l.b].push((l.a, li));
        }
        for adj in &mut adjacency {
            adj.sort_by(|x, y| nodes[x.0].id.cmp(&nodes[y.0].id));
        }
        let topo = Self { nodes, links, adjacency };
        topo.validate()?;
        Ok(topo)
    }

    fn validate(&self) -> Result<(), TopologyError> {
        let components = connected_components(&self.graph());
        if components != 1 {
            return Err(TopologyError::DisconnectedGraph { components });
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if n.role == Role::Consumer {
                let adj = &self.adjacency[i];
                if adj.len() != 1 || self.nodes[adj[0].0].role != Role::Edge {
                    return Err(TopologyError::BadConsumerAttachment(n.id.clone()));
                }
            }
        }
        Ok(())
    }

    fn graph(&self) -> UnGraph<(), u32> {
        let mut g = UnGraph::with_capacity(self.nodes.len(), self.links.len());
        for _ in &self.nodes {
            g.add_node(());
        }
        for l in &self.links {
            g.add_edge(NodeIndex::new(l.a), NodeIndex::new(l.b), l.params.cost);
        }
        g
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    /// Neighbors of `node` with the connecting link index, ordered by id.
    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn link_between(&self, a: usize, b: usize) -> Option<&Link> {
        self.adjacency[a].iter().find(|(n, _)| *n == b).map(|(_, li)| &self.links[*li])
    }

    pub fn with_role(&self, role: Role) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].role == role).collect()
    }

    /// Adds `count` consumers named `c0..`, attached round-robin to edge
    /// routers in id order.
    pub fn attach_consumers(&self, count: usize, access: LinkParams) -> Result<Self, TopologyError> {
        let mut edges = self.with_role(Role::Edge);
        if edges.is_empty() {
            return Err(TopologyError::NoEdgeRouters);
        }
        edges.sort_by(|a, b| self.nodes[*a].id.cmp(&self.nodes[*b].id));
        let mut nodes = self.nodes.clone();
        let mut links = self.links.clone();
        for i in 0..count {
            let idx = nodes.len();
            nodes.push(Node {
                id: format!("c{i}"),
                role: Role::Consumer,
            });
            links.push(Link {
                a: idx,
                b: edges[i % edges.len()],
                params: access,
            });
        }
        Self::from_parts(nodes, links)
    }

    /// Next hop from every node toward `dest` along least-cost paths; among
    /// equal-cost choices the neighbor with the smallest id wins.
    pub fn next_hops(&self, dest: usize) -> Vec<Option<usize>> {
        let g = self.graph();
        let dist = dijkstra(&g, NodeIndex::new(dest), None, |e| *e.weight() as u64);
        (0..self.nodes.len())
            .map(|n| {
                if n == dest {
                    return None;
                }
                let d = *dist.get(&NodeIndex::new(n))?;
                self.adjacency[n]
                    .iter()
                    .filter(|(m, li)| {
                        dist.get(&NodeIndex::new(*m))
                            .is_some_and(|dm| dm + self.links[*li].params.cost as u64 == d)
                    })
                    .map(|(m, _)| *m)
                    .next()
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            out.push_str(&format!("node {} {}\n", n.id, n.role));
        }
        for l in &self.links {
            out.push_str(&format!(
                "link {} {} cost={} lat_us={} bw_bps={}\n",
                self.nodes[l.a].id, self.nodes[l.b].id, l.params.cost, l.params.lat_us, l.params.bw_bps
            ));
        }
        out
    }
}

fn parse_link_params(fields: &[&str]) -> Result<LinkParams, String> {
    let mut cost = None;
    let mut lat = None;
    let mut bw = None;
    for f in fields {
        let (k, v) = f.split_once('=').ok_or_else(|| format!("expected key=value, got {f:?}"))?;
        let v: u64 = v.parse().map_err(|_| format!("bad integer in {f:?}"))?;
        let slot = match k {
            "cost" => &mut cost,
            "lat_us" => &mut lat,
            "bw_bps" => &mut bw,
            _ => return Err(format!("unknown link attribute {k:?}")),
        };
        if slot.replace(v).is_some() {
            return Err(format!("repeated attribute {k:?}"));
        }
    }
    let cost = cost.ok_or("missing cost")?;
    let bw_bps = bw.ok_or("missing bw_bps")?;
    if cost == 0 || bw_bps == 0 {
        return Err("cost and bw_bps must be positive".into());
    }
    Ok(LinkParams {
        cost: u32::try_from(cost).map_err(|_| "cost too large")?,
        lat_us: lat.ok_or("missing lat_us")?,
        bw_bps,
    })
}

/// The bundled 37-node testbed-like topology.
pub fn testbed() -> Topology {
    Topology::parse(TESTBED).expect("bundled topology is valid")
}

pub const TESTBED: &str = include_str!("../topologies/testbed.topo");

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = "\
node c consumer
node e edge # first hop
node p producer
link c e cost=1 lat_us=1000 bw_bps=1000000
link e p cost=1 lat_us=2000 bw_bps=1000000
";

    #[test]
    fn line_parses_and_routes() {
        let t = Topology::parse(LINE).unwrap();
        assert_eq!(t.nodes().len(), 3);
        let hops = t.next_hops(2);
        assert_eq!(hops, vec![Some(1), Some(2), None]);
        assert_eq!(Topology::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn malformed_files() {
        let dup = format!("{LINE}link p e cost=1 lat_us=1 bw_bps=1\n");
        assert!(matches!(Topology::parse(&dup), Err(TopologyError::Parse { line: 6, .. })));
        for bad in [
            "node a",
            "node a router",
            "node a edge\nnode a edge",
            "node a edge\nlink a b cost=1 lat_us=1 bw_bps=1",
            "node a edge\nnode b edge\nlink a b cost=1 lat_us=1",
            "node a edge\nnode b edge\nlink a b cost=x lat_us=1 bw_bps=1",
            "node a edge\nnode b edge\nlink a b cost=0 lat_us=1 bw_bps=1",
            "node a edge\nlink a a cost=1 lat_us=1 bw_bps=1",
            "route a b",
        ] {
            assert!(matches!(Topology::parse(bad), Err(TopologyError::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn disconnected_and_misattached() {
        assert_eq!(
            Topology::parse("node a edge\nnode b producer").unwrap_err(),
            TopologyError::DisconnectedGraph { components: 2 }
        );
        let text = "node c consumer\nnode i intermediate\nlink c i cost=1 lat_us=1 bw_bps=1";
        assert!(matches!(Topology::parse(text), Err(TopologyError::BadConsumerAttachment(_))));
    }

    #[test]
    fn equal_cost_tie_breaks_by_id() {
        let text = "\
node s edge
node b intermediate
node a intermediate
node d producer
link s b cost=1 lat_us=1 bw_bps=1
link s a cost=1 lat_us=1 bw_bps=1
link a d cost=1 lat_us=1 bw_bps=1
link b d cost=1 lat_us=1 bw_bps=1
";
        let t = Topology::parse(text).unwrap();
        let hops = t.next_hops(t.node_index("d").unwrap());
        assert_eq!(hops[t.node_index("s").unwrap()], t.node_index("a"));
    }

    #[test]
    fn bundled_testbed() {
        let t = testbed();
        assert_eq!(t.nodes().len(), 37);
        assert_eq!(t.links().len(), 99);
        assert_eq!(t.with_role(Role::Producer).len(), 1);
        let producer = t.with_role(Role::Producer)[0];
        let hops = t.next_hops(producer);
        assert!(hops.iter().enumerate().all(|(i, h)| i == producer || h.is_some()));
        let access = LinkParams {
            cost: 1,
            lat_us: 1000,
            bw_bps: 100_000_000,
        };
        let with = t.attach_consumers(25, access).unwrap();
        assert_eq!(with.with_role(Role::Consumer).len(), 25);
    }
}
