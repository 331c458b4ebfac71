//! Node-link export of the whole graph, re-importable into a snapshot.
//!
//! ```json
//! {
//!   "format": "wos-nodelink",
//!   "version": 1,
//!   "nodes": [{"id": "s1", "name": "Alice", "institution": "I1", "first_pub_year": 2010, "pub_ids": ["p2"]}],
//!   "links": [{"source": "s1", "target": "s2", "kind": "coauthor", "weight": 2.0, "years": {"start": 2010, "end": 2011}}],
//!   "publications": [ ...line records... ],
//!   "geo": [{"institution": "I1", "lat": 38.88, "lng": 121.53}],
//!   "dangling_refs": [{"citing": "p4", "missing": "x"}]
//! }
//! ```
//!
//! Nodes are ordered by id and links by (source, target, kind).

use crate::model::{EdgeKind, PubId, PublicationRecord, RelEdge, Scholar, ScholarId, YearSpan};
use crate::store::{DanglingRef, GeoEntry, GraphData, GraphError, KnowledgeGraph};
use serde::{Deserialize, Serialize};

pub const FORMAT_NAME: &str = "wos-nodelink";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeLinkNode {
    pub id: ScholarId,
    pub name: String,
    pub institution: String,
    pub first_pub_year: i32,
    pub pub_ids: Vec<PubId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeLinkLink {
    pub source: ScholarId,
    pub target: ScholarId,
    pub kind: EdgeKind,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub years: Option<YearSpan>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeLinkDoc {
    pub format: String,
    pub version: u32,
    pub nodes: Vec<NodeLinkNode>,
    pub links: Vec<NodeLinkLink>,
    pub publications: Vec<PublicationRecord>,
    pub geo: Vec<GeoEntry>,
    pub dangling_refs: Vec<DanglingRef>,
}

#[derive(Debug, thiserror::Error)]
pub enum ImportError {
    #[error("not a node-link document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported document format `{format}` version {version}")]
    Format { format: String, version: u32 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn to_doc(graph: &KnowledgeGraph) -> NodeLinkDoc {
    let data = graph.to_data();
    let mut links: Vec<NodeLinkLink> = data
        .edges
        .into_iter()
        .map(|e| NodeLinkLink { source: e.src, target: e.dst, kind: e.kind, weight: e.weight, years: e.years })
        .collect();
    links.sort_by(|a, b| (&a.source, &a.target, a.kind).cmp(&(&b.source, &b.target, b.kind)));
    NodeLinkDoc {
        format: FORMAT_NAME.to_owned(),
        version: FORMAT_VERSION,
        nodes: data
            .scholars
            .into_iter()
            .map(|s| NodeLinkNode {
                id: s.scholar_id,
                name: s.name,
                institution: s.institution,
                first_pub_year: s.first_pub_year,
                pub_ids: s.pub_ids,
            })
            .collect(),
        links,
        publications: data.publications,
        geo: data.geo,
        dangling_refs: data.dangling_refs,
    }
}

pub fn export_graph(graph: &KnowledgeGraph) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&to_doc(graph)).expect("node-link doc serializes");
    out.push(b'\n');
    out
}

pub fn import_graph(bytes: &[u8]) -> Result<KnowledgeGraph, ImportError> {
    let doc: NodeLinkDoc = serde_json::from_slice(bytes)?;
    if doc.format != FORMAT_NAME || doc.version != FORMAT_VERSION {
        return Err(ImportError::Format { format: doc.format, version: doc.version });
    }
    let mut edges: Vec<RelEdge> = doc
        .links
        .into_iter()
        .map(|l| RelEdge { src: l.source, dst: l.target, kind: l.kind, weight: l.weight, years: l.years })
        .collect();
    edges.sort_by(|a, b| (a.kind, &a.src, &a.dst).cmp(&(b.kind, &b.src, &b.dst)));
    let data = GraphData {
        scholars: doc
            .nodes
            .into_iter()
            .map(|n| Scholar {
                scholar_id: n.id,
                name: n.name,
                institution: n.institution,
                first_pub_year: n.first_pub_year,
                pub_ids: n.pub_ids,
            })
            .collect(),
        publications: doc.publications,
        edges,
        geo: doc.geo,
        dangling_refs: doc.dangling_refs,
    };
    Ok(KnowledgeGraph::from_data(data)?)
}
