//! JSON interchange for graphs, vertex sets and partial maps.
//!
//! A vertex is written `[k, [t(0), ..]]`. Inside a document with a known
//! stage its level is `stage - |t|`; otherwise it is 0. A vertex whose level
//! does not follow that rule carries it as a third entry, `[k, [..], level]`.

use std::collections::BTreeSet;

use lzero_core::graph::GraphError;
use lzero_core::hom::PartialHom;
use lzero_core::{FiniteGraph, OddSequence, ParamError, StageMeta, Tail, Vertex};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported document format {0}, expected {FORMAT_VERSION}")]
    Format(u32),
    #[error("bad vertex {0}")]
    Vertex(String),
    #[error("edge index {0} is out of range")]
    EdgeIndex(usize),
    #[error("orientation does not match the edge list")]
    Orientation,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexForm {
    Short(u64, Vec<u8>),
    Long(u64, Vec<u8>, u32),
}

fn default_level(stage: Option<usize>, tail_len: usize) -> Option<u32> {
    match stage {
        Some(s) => s.checked_sub(tail_len).map(|l| l as u32),
        None => Some(0),
    }
}

impl VertexForm {
    pub fn from_vertex(v: &Vertex, stage: Option<usize>) -> VertexForm {
        let bits = v.tail.to_vec();
        if default_level(stage, bits.len()) == Some(v.level) {
            VertexForm::Short(v.head, bits)
        } else {
            VertexForm::Long(v.head, bits, v.level)
        }
    }

    pub fn to_vertex(&self, stage: Option<usize>) -> Result<Vertex, DocError> {
        let (head, bits, level) = match self {
            VertexForm::Short(k, b) => (*k, b, default_level(stage, b.len())),
            VertexForm::Long(k, b, l) => (*k, b, Some(*l)),
        };
        let tail = Tail::from_bits(bits).ok_or_else(|| DocError::Vertex(format!("{self:?}: tail must be 0/1 bits")))?;
        let level = level.ok_or_else(|| DocError::Vertex(format!("{self:?}: tail longer than the stage")))?;
        Ok(Vertex::new(level, head, tail))
    }
}

/// Parses the command-line vertex syntax `k,t0,t1,..` (also `(k,t0,..)`).
pub fn parse_vertex(s: &str, stage: Option<usize>) -> Result<Vertex, DocError> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let nums = inner
        .split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|e| DocError::Vertex(format!("`{s}`: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let (&head, rest) = nums.split_first().ok_or_else(|| DocError::Vertex(format!("`{s}` is empty")))?;
    let bits = rest
        .iter()
        .map(|&b| u8::try_from(b).map_err(|_| DocError::Vertex(format!("`{s}`: {b} is not a bit"))))
        .collect::<Result<Vec<_>, _>>()?;
    VertexForm::Short(head, bits).to_vertex(stage)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub format: u32,
    pub c: Option<Vec<u64>>,
    pub stage: Option<usize>,
    pub oriented: bool,
    pub vertices: Vec<VertexForm>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub orientation: Vec<[usize; 2]>,
}

impl GraphDocument {
    pub fn from_graph(g: &FiniteGraph) -> GraphDocument {
        let stage = g.meta().map(|m| m.stage);
        let arcs: Vec<[usize; 2]> = g.edge_indices().iter().map(|&(a, b)| [a, b]).collect();
        GraphDocument {
            format: FORMAT_VERSION,
            c: g.meta().map(|m| m.c.values().to_vec()),
            stage,
            oriented: g.is_oriented(),
            vertices: g.vertices().iter().map(|v| VertexForm::from_vertex(v, stage)).collect(),
            edges: arcs.iter().map(|&[a, b]| [a.min(b), a.max(b)]).collect(),
            orientation: if g.is_oriented() { arcs } else { Vec::new() },
        }
    }

    pub fn to_graph(&self) -> Result<FiniteGraph, DocError> {
        if self.format != FORMAT_VERSION {
            return Err(DocError::Format(self.format));
        }
        let vertices = self
            .vertices
            .iter()
            .map(|f| f.to_vertex(self.stage))
            .collect::<Result<Vec<_>, _>>()?;
        let pairs = if self.oriented {
            let undirected: BTreeSet<[usize; 2]> = self.edges.iter().map(|&[a, b]| [a.min(b), a.max(b)]).collect();
            let from_arcs: BTreeSet<[usize; 2]> = self.orientation.iter().map(|&[a, b]| [a.min(b), a.max(b)]).collect();
            if undirected != from_arcs || self.orientation.len() != self.edges.len() {
                return Err(DocError::Orientation);
            }
            &self.orientation
        } else {
            if !self.orientation.is_empty() {
                return Err(DocError::Orientation);
            }
            &self.edges
        };
        let lookup = |i: usize| vertices.get(i).copied().ok_or(DocError::EdgeIndex(i));
        let edges = pairs
            .iter()
            .map(|&[a, b]| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, DocError>>()?;
        let mut g = FiniteGraph::new(vertices, edges, self.oriented)?;
        if let (Some(c), Some(stage)) = (&self.c, self.stage) {
            g = g.with_meta(StageMeta { c: OddSequence::new(c.clone())?, stage });
        }
        Ok(g)
    }
}

pub fn graph_to_json(g: &FiniteGraph) -> String {
    serde_json::to_string_pretty(&GraphDocument::from_graph(g)).expect("documents serialize")
}

pub fn graph_from_json(s: &str) -> Result<FiniteGraph, DocError> {
    serde_json::from_str::<GraphDocument>(s)?.to_graph()
}

pub fn set_to_value(set: &BTreeSet<Vertex>, stage: Option<usize>) -> serde_json::Value {
    serde_json::to_value(set.iter().map(|v| VertexForm::from_vertex(v, stage)).collect::<Vec<_>>())
        .expect("vertex forms serialize")
}

pub fn set_from_json(s: &str, stage: Option<usize>) -> Result<BTreeSet<Vertex>, DocError> {
    serde_json::from_str::<Vec<VertexForm>>(s)?.iter().map(|f| f.to_vertex(stage)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomDocument {
    pub map: Vec<(VertexForm, VertexForm)>,
}

impl HomDocument {
    pub fn from_hom(phi: &PartialHom, source_stage: Option<usize>, target_stage: Option<usize>) -> HomDocument {
        HomDocument {
            map: phi
                .iter()
                .map(|(x, y)| (VertexForm::from_vertex(x, source_stage), VertexForm::from_vertex(y, target_stage)))
                .collect(),
        }
    }

    pub fn to_hom(&self, source_stage: Option<usize>, target_stage: Option<usize>) -> Result<PartialHom, DocError> {
        self.map
            .iter()
            .map(|(x, y)| Ok((x.to_vertex(source_stage)?, y.to_vertex(target_stage)?)))
            .collect()
    }
}

pub fn hom_from_json(s: &str, source_stage: Option<usize>, target_stage: Option<usize>) -> Result<PartialHom, DocError> {
    serde_json::from_str::<HomDocument>(s)?.to_hom(source_stage, target_stage)
}

pub fn vertex_value(v: &Vertex, stage: Option<usize>) -> serde_json::Value {
    serde_json::to_value(VertexForm::from_vertex(v, stage)).expect("vertex forms serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use lzero_core::stage::{build_oriented_stage, build_stage};
    use lzero_core::OddPair;

    #[test]
    fn stage_documents_round_trip() {
        let c: OddSequence = "1,1,3".parse().unwrap();
        for n in 0..3 {
            let g = build_stage(&c, n).unwrap();
            assert_eq!(graph_from_json(&graph_to_json(&g)).unwrap(), g);
            let b = OddPair::new(c.clone(), vec!["+-+".parse().unwrap(), "-++".parse().unwrap(), "+--++".parse().unwrap()]).unwrap();
            let o = build_oriented_stage(&b, n).unwrap();
            assert_eq!(graph_from_json(&graph_to_json(&o)).unwrap(), o);
        }
    }

    #[test]
    fn stage_one_schema() {
        let g = build_stage(&"1,1".parse().unwrap(), 1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&graph_to_json(&g)).unwrap();
        assert_eq!(v["format"], 1);
        assert_eq!(v["stage"], 1);
        assert_eq!(v["vertices"][0], serde_json::json!([0, [0]]));
        assert_eq!(v["vertices"].as_array().unwrap().len(), 6);
        assert_eq!(v["orientation"], serde_json::json!([]));
    }

    #[test]
    fn levels_outside_the_stage_rule_use_the_long_form() {
        let v = Vertex::new(2, 5, Tail::from_bits(&[1]).unwrap());
        let f = VertexForm::from_vertex(&v, None);
        assert_eq!(f, VertexForm::Long(5, vec![1], 2));
        assert_eq!(f.to_vertex(None).unwrap(), v);
        assert_eq!(VertexForm::from_vertex(&v, Some(3)), VertexForm::Short(5, vec![1]));
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matches!(graph_from_json("{"), Err(DocError::Json(_))));
        let bad = r#"{"format":2,"c":null,"stage":null,"oriented":false,"vertices":[],"edges":[]}"#;
        assert!(matches!(graph_from_json(bad), Err(DocError::Format(2))));
        let bad = r#"{"format":1,"c":null,"stage":null,"oriented":false,"vertices":[[0,[]]],"edges":[[0,1]]}"#;
        assert!(matches!(graph_from_json(bad), Err(DocError::EdgeIndex(1))));
        let bad = r#"{"format":1,"c":null,"stage":null,"oriented":true,"vertices":[[0,[]],[1,[]]],"edges":[[0,1]],"orientation":[]}"#;
        assert!(matches!(graph_from_json(bad), Err(DocError::Orientation)));
    }

    #[test]
    fn vertex_syntax() {
        assert_eq!(parse_vertex("(3,0,1)", Some(3)).unwrap(), Vertex::new(1, 3, Tail::from_bits(&[0, 1]).unwrap()));
        assert_eq!(parse_vertex("7", None).unwrap(), Vertex::label(7));
        assert!(parse_vertex("1,2", Some(2)).is_err());
        assert!(parse_vertex("1,0,0", Some(1)).is_err());
    }

    #[test]
    fn homs_and_sets_round_trip() {
        let phi: PartialHom = [(Vertex::label(0), parse_vertex("0,1", Some(1)).unwrap())].into_iter().collect();
        let s = serde_json::to_string(&HomDocument::from_hom(&phi, None, Some(1))).unwrap();
        assert_eq!(s, r#"{"map":[[[0,[]],[0,[1]]]]}"#);
        assert_eq!(hom_from_json(&s, None, Some(1)).unwrap(), phi);
        let set: BTreeSet<Vertex> = phi.image();
        let text = set_to_value(&set, Some(1)).to_string();
        assert_eq!(set_from_json(&text, Some(1)).unwrap(), set);
    }
}
