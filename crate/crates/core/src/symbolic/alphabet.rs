use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{MetricGraph, SideId};

/// Symbols with a fixed-point-free involution. For graph alphabets the
/// symbols are directed sides and the involution is edge reversal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutiveAlphabet {
    labels: Vec<String>,
    inverse: Vec<u32>,
}

impl InvolutiveAlphabet {
    pub fn new(labels: Vec<String>, inverse: Vec<u32>) -> Result<Self> {
        if labels.len() != inverse.len() {
            return Err(Error::InvalidParameter("labels and involution differ in size".into()));
        }
        for (s, &t) in inverse.iter().enumerate() {
            let t = t as usize;
            if t >= inverse.len() || inverse[t] as usize != s {
                return Err(Error::InvalidParameter(format!("involution is not an involution at {s}")));
            }
        }
        Ok(InvolutiveAlphabet { labels, inverse })
    }

    pub fn from_graph(graph: &MetricGraph) -> Self {
        let labels = graph.sides().map(|s| graph.side_label(s)).collect();
        let inverse = graph.sides().map(|s| s.reverse().0).collect();
        InvolutiveAlphabet { labels, inverse }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn inverse(&self, s: u32) -> u32 {
        self.inverse[s as usize]
    }

    pub fn label(&self, s: u32) -> &str {
        &self.labels[s as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    pub fn render(&self, word: &[u32]) -> String {
        word.iter().map(|&s| self.label(s)).collect()
    }

    pub fn side(&self, s: u32) -> SideId {
        SideId(s)
    }
}
