//! Content names carry their policy path as one component, root first:
//! `/com/test/y2023.m8.m8w3.m8w3d6/abc.mp4/chunk_1`.

use chrono::NaiveDate;
use thiserror::Error;

use crate::subtree::{Level, NodeId, PolicyPath};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NameError {
    #[error("no policy component in name {0:?}")]
    NoPolicy(String),
}

/// "y2023.m8.m8w3.m8w3d6" for a leaf path.
pub fn policy_component(path: &PolicyPath) -> String {
    let labels: Vec<String> = path.nodes().iter().rev().map(NodeId::label).collect();
    labels.join(".")
}

/// `<prefix>/<policy>/<file>`.
pub fn file_prefix(prefix: &str, path: &PolicyPath, file: &str) -> String {
    format!("{}/{}/{}", prefix.trim_end_matches('/'), policy_component(path), file)
}

/// `<file prefix>/chunk_<i>`.
pub fn chunk_name(file_prefix: &str, index: usize) -> String {
    format!("{file_prefix}/chunk_{index}")
}

/// Labels of the policy path embedded in `name`, root first.
pub fn path_labels(name: &str) -> Result<Vec<String>, NameError> {
    name.split('/')
        .find_map(|component| {
            let labels: Vec<&str> = component.split('.').collect();
            let year: i32 = labels.first()?.strip_prefix('y')?.parse().ok()?;
            let nodes: Vec<NodeId> = labels
                .iter()
                .map(|l| NodeId::parse(l, year).ok())
                .collect::<Option<_>>()?;
            let is_chain = nodes.windows(2).all(|w| w[1].parent() == Some(w[0]));
            is_chain.then(|| labels.iter().map(|s| s.to_string()).collect())
        })
        .ok_or_else(|| NameError::NoPolicy(name.to_string()))
}

/// The day leaf named in `name` and a calendar date mapping onto it.
pub fn publish_date(name: &str) -> Result<(NodeId, NaiveDate), NameError> {
    let labels = path_labels(name)?;
    let year: i32 = labels[0][1..].parse().expect("checked by path_labels");
    let leaf = NodeId::parse(labels.last().expect("nonempty"), year).expect("checked by path_labels");
    if leaf.level() != Level::Day {
        return Err(NameError::NoPolicy(name.to_string()));
    }
    Ok((leaf, leaf_date(&leaf)))
}

/// First calendar date that maps onto a day leaf.
pub fn leaf_date(leaf: &NodeId) -> NaiveDate {
    let (index, _) = leaf.leaf_span();
    let month = (index / 28 + 1) as u32;
    let day = (index % 28 + 1) as u32;
    NaiveDate::from_ymd_opt(leaf.year(), month, day).expect("days 1..=28 exist in every month")
}
