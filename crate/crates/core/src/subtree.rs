//! The yearly subscription policy tree: year -> 12 months -> 4 weeks -> 7 days.
//!
//! Real calendar dates enter only through [`PolicyTree::date_to_leaf`], which
//! clamps days 29-31 into the fourth week's seventh day.

use std::collections::BTreeSet;
use std::fmt;

use chrono::{Datelike, NaiveDate};
use thiserror::Error;

pub const MONTHS: u8 = 12;
pub const WEEKS: u8 = 4;
pub const DAYS: u8 = 7;
pub const LEAVES: usize = (MONTHS as usize) * (WEEKS as usize) * (DAYS as usize);
pub const NODE_COUNT: usize = 1 + 12 + 48 + LEAVES;
pub const HEIGHT: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("date year {date} does not match tree year {tree}")]
    YearMismatch { date: i32, tree: i32 },
    #[error("invalid range: start is after end")]
    InvalidRange,
    #[error("unknown node label {0:?}")]
    BadLabel(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Root,
    Month,
    Week,
    Day,
}

/// A node of the tree, identified by its index path. Months are 1..=12,
/// weeks 1..=4, days 1..=7.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId {
    year: i32,
    month: u8,
    week: u8,
    day: u8,
}

impl NodeId {
    pub fn root(year: i32) -> Self {
        Self { year, month: 0, week: 0, day: 0 }
    }

    pub fn month(year: i32, month: u8) -> Self {
        assert!((1..=MONTHS).contains(&month));
        Self { year, month, week: 0, day: 0 }
    }

    pub fn week(year: i32, month: u8, week: u8) -> Self {
        assert!((1..=MONTHS).contains(&month) && (1..=WEEKS).contains(&week));
        Self { year, month, week, day: 0 }
    }

    pub fn day(year: i32, month: u8, week: u8, day: u8) -> Self {
        assert!(
            (1..=MONTHS).contains(&month) && (1..=WEEKS).contains(&week) && (1..=DAYS).contains(&day)
        );
        Self { year, month, week, day }
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn level(&self) -> Level {
        match (self.month, self.week, self.day) {
            (0, _, _) => Level::Root,
            (_, 0, _) => Level::Month,
            (_, _, 0) => Level::Week,
            _ => Level::Day,
        }
    }

    pub fn parent(&self) -> Option<Self> {
        match self.level() {
            Level::Root => None,
            Level::Month => Some(Self::root(self.year)),
            Level::Week => Some(Self::month(self.year, self.month)),
            Level::Day => Some(Self::week(self.year, self.month, self.week)),
        }
    }

    pub fn children(&self) -> Vec<Self> {
        match self.level() {
            Level::Root => (1..=MONTHS).map(|m| Self::month(self.year, m)).collect(),
            Level::Month => (1..=WEEKS)
                .map(|w| Self::week(self.year, self.month, w))
                .collect(),
            Level::Week => (1..=DAYS)
                .map(|d| Self::day(self.year, self.month, self.week, d))
                .collect(),
            Level::Day => Vec::new(),
        }
    }

    /// Leaf index range `[first, last]` (0-based, 0..336) spanned by this node.
    pub fn leaf_span(&self) -> (usize, usize) {
        let per_month = (WEEKS * DAYS) as usize;
        let per_week = DAYS as usize;
        match self.level() {
            Level::Root => (0, LEAVES - 1),
            Level::Month => {
                let s = (self.month as usize - 1) * per_month;
                (s, s + per_month - 1)
            }
            Level::Week => {
                let s = (self.month as usize - 1) * per_month + (self.week as usize - 1) * per_week;
                (s, s + per_week - 1)
            }
            Level::Day => {
                let s = (self.month as usize - 1) * per_month
                    + (self.week as usize - 1) * per_week
                    + (self.day as usize - 1);
                (s, s)
            }
        }
    }

    pub fn is_ancestor_of(&self, other: &Self) -> bool {
        if self.year != other.year || self == other {
            return false;
        }
        let (a, b) = self.leaf_span();
        let (c, d) = other.leaf_span();
        a <= c && d <= b
    }

    /// Leaf with the given 0-based index.
    pub fn leaf(year: i32, index: usize) -> Self {
        assert!(index < LEAVES);
        let month = index / 28 + 1;
        let week = index % 28 / 7 + 1;
        let day = index % 7 + 1;
        Self::day(year, month as u8, week as u8, day as u8)
    }

    /// Machine label: "y2023", "m8", "m8w3", "m8w3d6". Month-and-below labels
    /// do not carry the year; a tree covers exactly one year.
    pub fn label(&self) -> String {
        match self.level() {
            Level::Root => format!("y{}", self.year),
            Level::Month => format!("m{}", self.month),
            Level::Week => format!("m{}w{}", self.month, self.week),
            Level::Day => format!("m{}w{}d{}", self.month, self.week, self.day),
        }
    }

    /// Parses a label in the context of the given tree year.
    pub fn parse(label: &str, year: i32) -> Result<Self, TreeError> {
        let bad = || TreeError::BadLabel(label.to_string());
        if let Some(y) = label.strip_prefix('y') {
            let y: i32 = y.parse().map_err(|_| bad())?;
            if y != year {
                return Err(bad());
            }
            return Ok(Self::root(year));
        }
        let rest = label.strip_prefix('m').ok_or_else(bad)?;
        let take_num = |s: &str| -> Result<(u8, usize), TreeError> {
            let len = s.bytes().take_while(u8::is_ascii_digit).count();
            if len == 0 || (len > 1 && s.starts_with('0')) {
                return Err(bad());
            }
            Ok((s[..len].parse().map_err(|_| bad())?, len))
        };
        let (m, used) = take_num(rest)?;
        if !(1..=MONTHS).contains(&m) {
            return Err(bad());
        }
        let rest = &rest[used..];
        if rest.is_empty() {
            return Ok(Self::month(year, m));
        }
        let rest = rest.strip_prefix('w').ok_or_else(bad)?;
        let (w, used) = take_num(rest)?;
        if !(1..=WEEKS).contains(&w) {
            return Err(bad());
        }
        let rest = &rest[used..];
        if rest.is_empty() {
            return Ok(Self::week(year, m, w));
        }
        let rest = rest.strip_prefix('d').ok_or_else(bad)?;
        let (d, used) = take_num(rest)?;
        if !(1..=DAYS).contains(&d) || used != rest.len() {
            return Err(bad());
        }
        Ok(Self::day(year, m, w, d))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The policy tree of a single year.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolicyTree {
    year: i32,
}

impl PolicyTree {
    pub fn new(year: i32) -> Self {
        Self { year }
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn root(&self) -> NodeId {
        NodeId::root(self.year)
    }

    /// All 397 nodes, breadth-first.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut out = vec![self.root()];
        let mut i = 0;
        while i < out.len() {
            let children = out[i].children();
            out.extend(children);
            i += 1;
        }
        out
    }

    pub fn date_to_leaf(&self, date: NaiveDate) -> Result<NodeId, TreeError> {
        self.check_year(date)?;
        let dom = date.day() as u8;
        let week = dom.div_ceil(DAYS).min(WEEKS);
        let day = (dom - DAYS * (week - 1)).min(DAYS);
        Ok(NodeId::day(self.year, date.month() as u8, week, day))
    }

    /// Chain `[day, week, month, root]` for the given date.
    pub fn policy_path(&self, date: NaiveDate) -> Result<PolicyPath, TreeError> {
        Ok(PolicyPath::from_leaf(self.date_to_leaf(date)?))
    }

    /// Canonical minimum cover of the inclusive leaf range `[start, end]`.
    pub fn min_cover(&self, start: NodeId, end: NodeId) -> Result<CoverSet, TreeError> {
        for n in [start, end] {
            if n.year != self.year {
                return Err(TreeError::YearMismatch { date: n.year, tree: self.year });
            }
            if n.level() != Level::Day {
                return Err(TreeError::BadLabel(n.label()));
            }
        }
        let (lo, _) = start.leaf_span();
        let (hi, _) = end.leaf_span();
        if lo > hi {
            return Err(TreeError::InvalidRange);
        }
        let mut nodes = Vec::new();
        self.collect_cover(self.root(), lo, hi, &mut nodes);
        Ok(CoverSet { nodes })
    }

    pub fn min_cover_dates(&self, start: NaiveDate, end: NaiveDate) -> Result<CoverSet, TreeError> {
        let (s, e) = (self.date_to_leaf(start)?, self.date_to_leaf(end)?);
        if start > end {
            return Err(TreeError::InvalidRange);
        }
        self.min_cover(s, e)
    }

    fn collect_cover(&self, node: NodeId, lo: usize, hi: usize, out: &mut Vec<NodeId>) {
        let (a, b) = node.leaf_span();
        if b < lo || a > hi {
            return;
        }
        if lo <= a && b <= hi {
            out.push(node);
            return;
        }
        for child in node.children() {
            self.collect_cover(child, lo, hi, out);
        }
    }

    fn check_year(&self, date: NaiveDate) -> Result<(), TreeError> {
        if date.year() != self.year {
            return Err(TreeError::YearMismatch { date: date.year(), tree: self.year });
        }
        Ok(())
    }
}

/// Subscriptions spanning several years: one cover per year tree.
pub fn forest_cover(start: NaiveDate, end: NaiveDate) -> Result<Vec<CoverSet>, TreeError> {
    if start > end {
        return Err(TreeError::InvalidRange);
    }
    (start.year()..=end.year())
        .map(|year| {
            let tree = PolicyTree::new(year);
            let s = if year == start.year() {
                tree.date_to_leaf(start)?
            } else {
                NodeId::leaf(year, 0)
            };
            let e = if year == end.year() {
                tree.date_to_leaf(end)?
            } else {
                NodeId::leaf(year, LEAVES - 1)
            };
            tree.min_cover(s, e)
        })
        .collect()
}

/// Antichain of nodes whose leaves exactly tile a subscription range,
/// in left-to-right order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSet {
    nodes: Vec<NodeId>,
}

impl CoverSet {
    /// Wraps nodes without checking the cover invariants.
    pub fn from_nodes(mut nodes: Vec<NodeId>) -> Self {
        nodes.sort_by_key(|n| (n.leaf_span().0, n.level()));
        nodes.dedup();
        Self { nodes }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: &NodeId) -> bool {
        self.nodes.contains(node)
    }

    /// Set of leaf indices covered.
    pub fn leaves(&self) -> BTreeSet<usize> {
        self.nodes
            .iter()
            .flat_map(|n| {
                let (a, b) = n.leaf_span();
                a..=b
            })
            .collect()
    }

    /// The node shared with a policy path, if any. A path is a chain and a
    /// cover an antichain, so at most one node can match.
    pub fn covers(&self, path: &PolicyPath) -> Option<NodeId> {
        path.nodes().iter().copied().find(|n| self.contains(n))
    }

    pub fn labels(&self) -> Vec<String> {
        self.nodes.iter().map(NodeId::label).collect()
    }
}

/// Root-to-leaf chain used as the access policy of a publication, stored
/// leaf first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolicyPath {
    nodes: Vec<NodeId>,
}

impl PolicyPath {
    pub fn from_leaf(leaf: NodeId) -> Self {
        let mut nodes = vec![leaf];
        while let Some(p) = nodes.last().and_then(NodeId::parent) {
            nodes.push(p);
        }
        Self { nodes }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn leaf(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn contains(&self, node: &NodeId) -> bool {
        self.nodes.contains(node)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    #[test]
    fn tree_shape() {
        let tree = PolicyTree::new(2023);
        let nodes = tree.nodes();
        assert_eq!(nodes.len(), NODE_COUNT);
        assert_eq!(NODE_COUNT, 397);
        assert_eq!(tree.root().children().len(), 12);
        let labels: BTreeSet<_> = nodes.iter().map(NodeId::label).collect();
        assert_eq!(labels.len(), NODE_COUNT);
        for n in &nodes {
            assert_eq!(NodeId::parse(&n.label(), 2023).unwrap(), *n);
        }
    }

    #[test]
    fn dates_map_to_leaves() {
        let tree = PolicyTree::new(2023);
        assert_eq!(tree.date_to_leaf(d(2023, 1, 7)).unwrap().label(), "m1w1d7");
        assert_eq!(tree.date_to_leaf(d(2023, 8, 20)).unwrap().label(), "m8w3d6");
        assert_eq!(tree.date_to_leaf(d(2023, 1, 31)).unwrap().label(), "m1w4d7");
        assert_eq!(tree.date_to_leaf(d(2023, 2, 28)).unwrap().label(), "m2w4d7");
        assert_eq!(tree.date_to_leaf(d(2023, 3, 29)).unwrap().label(), "m3w4d7");
        assert_eq!(
            tree.date_to_leaf(d(2024, 1, 1)),
            Err(TreeError::YearMismatch { date: 2024, tree: 2023 })
        );
    }

    #[test]
    fn policy_path_chain() {
        let tree = PolicyTree::new(2023);
        let path = tree.policy_path(d(2023, 1, 7)).unwrap();
        let labels: Vec<_> = path.nodes().iter().map(NodeId::label).collect();
        assert_eq!(labels, ["m1w1d7", "m1w1", "m1", "y2023"]);
        let path = tree.policy_path(d(2023, 8, 20)).unwrap();
        let labels: Vec<_> = path.nodes().iter().map(NodeId::label).collect();
        assert_eq!(labels, ["m8w3d6", "m8w3", "m8", "y2023"]);
        for w in path.nodes().windows(2) {
            assert_eq!(w[0].parent(), Some(w[1]));
        }
        assert_eq!(path.len(), HEIGHT);
    }

    #[test]
    fn full_january_is_one_month() {
        let tree = PolicyTree::new(2023);
        let cover = tree
            .min_cover(NodeId::parse("m1w1d1", 2023).unwrap(), NodeId::parse("m1w4d7", 2023).unwrap())
            .unwrap();
        assert_eq!(cover.labels(), ["m1"]);
        // a real-calendar January subscription clamps to the same leaves
        assert_eq!(tree.min_cover_dates(d(2023, 1, 1), d(2023, 1, 31)).unwrap().labels(), ["m1"]);
    }

    #[test]
    fn single_leaf_and_reversed_range() {
        let tree = PolicyTree::new(2023);
        let leaf = NodeId::parse("m3w2d4", 2023).unwrap();
        assert_eq!(tree.min_cover(leaf, leaf).unwrap().labels(), ["m3w2d4"]);
        let later = NodeId::parse("m3w2d5", 2023).unwrap();
        assert_eq!(tree.min_cover(later, leaf), Err(TreeError::InvalidRange));
    }

    #[test]
    fn january_seventh_to_august_twentieth() {
        let tree = PolicyTree::new(2023);
        let cover = tree.min_cover_dates(d(2023, 1, 7), d(2023, 8, 20)).unwrap();
        assert_eq!(
            cover.labels(),
            [
                "m1w1d7", "m1w2", "m1w3", "m1w4", "m2", "m3", "m4", "m5", "m6", "m7", "m8w1", "m8w2",
                "m8w3d1", "m8w3d2", "m8w3d3", "m8w3d4", "m8w3d5", "m8w3d6"
            ]
        );
    }

    #[test]
    fn covers_examples() {
        let tree = PolicyTree::new(2023);
        let january = CoverSet::from_nodes(vec![NodeId::month(2023, 1)]);
        let p = tree.policy_path(d(2023, 1, 7)).unwrap();
        assert_eq!(january.covers(&p), Some(NodeId::month(2023, 1)));
        let p = tree.policy_path(d(2023, 2, 1)).unwrap();
        assert_eq!(january.covers(&p), None);
    }

    #[test]
    fn forest_splits_per_year() {
        let covers = forest_cover(d(2023, 12, 1), d(2024, 1, 28)).unwrap();
        assert_eq!(covers.len(), 2);
        assert_eq!(covers[0].labels(), ["m12"]);
        assert_eq!(covers[1].labels(), ["m1"]);
        assert_eq!(forest_cover(d(2024, 1, 1), d(2023, 1, 1)), Err(TreeError::InvalidRange));
    }

    #[test]
    fn bad_labels() {
        for l in ["", "m13", "m0", "m1w5", "m1w1d8", "m01", "y2022", "m1x", "m1w1d1z", "q"] {
            assert!(NodeId::parse(l, 2023).is_err(), "{l}");
        }
    }
}
