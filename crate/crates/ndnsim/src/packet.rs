use std::sync::Arc;

/// Fixed per-packet framing overhead charged on the wire, in bytes.
pub const INTEREST_OVERHEAD: usize = 16;
pub const DATA_OVERHEAD: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interest {
    pub name: Arc<str>,
    pub nonce: u64,
    /// Serialized interest signature, carried as an application parameter.
    pub signature: Option<Arc<[u8]>>,
}

impl Interest {
    pub fn wire_size(&self) -> usize {
        self.name.len() + 8 + self.signature.as_ref().map_or(0, |s| s.len()) + INTEREST_OVERHEAD
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Data {
    pub name: Arc<str>,
    pub payload: Arc<[u8]>,
}

impl Data {
    pub fn wire_size(&self) -> usize {
        self.name.len() + self.payload.len() + DATA_OVERHEAD
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Packet {
    Interest(Interest),
    Data(Data),
}

impl Packet {
    pub fn wire_size(&self) -> usize {
        match self {
            Packet::Interest(i) => i.wire_size(),
            Packet::Data(d) => d.wire_size(),
        }
    }
}

/// A named object split into fixed-size segments `<prefix>/chunk_<i>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Content {
    pub prefix: String,
    pub segments: Vec<Arc<[u8]>>,
}

impl Content {
    pub fn segmented(prefix: &str, bytes: &[u8], segment_size: usize) -> Self {
        assert!(segment_size > 0);
        let segments = if bytes.is_empty() {
            vec![Arc::from(&[][..])]
        } else {
            bytes.chunks(segment_size).map(Arc::from).collect()
        };
        Self {
            prefix: prefix.to_string(),
            segments,
        }
    }

    pub fn segment_name(&self, index: usize) -> String {
        timesub::scheme::naming::chunk_name(&self.prefix, index)
    }

    pub fn len_bytes(&self) -> usize {
        self.segments.iter().map(|s| s.len()).sum()
    }

    pub fn reassemble(segments: &[Arc<[u8]>]) -> Vec<u8> {
        segments.iter().flat_map(|s| s.iter().copied()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segmentation() {
        let bytes: Vec<u8> = (0..20_000u32).map(|i| i as u8).collect();
        let c = Content::segmented("/a/f", &bytes, 8192);
        assert_eq!(c.segments.len(), 3);
        assert_eq!(c.segments[2].len(), 20_000 - 2 * 8192);
        assert_eq!(Content::reassemble(&c.segments), bytes);
        assert_eq!(c.segment_name(2), "/a/f/chunk_2");
        assert_eq!(Content::segmented("/e", &[], 10).segments.len(), 1);
    }
}
