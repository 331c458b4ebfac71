//! In-process typed property graph of scholars, publications and
//! relationship edges.
//!
//! The store has two phases. During the build phase a single owner ingests
//! records and upserts mined edges. Afterwards the graph is shared behind an
//! `Arc` and only read. Every mutation assigns a fresh process-unique
//! generation number, which downstream caches use as the snapshot version.

use crate::geo::{GeoPoint, GeoTable};
use crate::ingest;
use crate::model::{EdgeKind, PubId, PublicationRecord, RelEdge, Scholar, ScholarId, YearSpan};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

static NEXT_GENERATION: AtomicU64 = AtomicU64::new(1);

fn next_generation() -> u64 {
    NEXT_GENERATION.fetch_add(1, Ordering::Relaxed)
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("unknown scholar `{0}`")]
    UnknownScholar(ScholarId),
    #[error("invalid edge {src} -> {dst} ({kind}): {reason}")]
    InvalidEdge { src: ScholarId, dst: ScholarId, kind: EdgeKind, reason: String },
    #[error("invalid graph data: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Out,
    In,
    Both,
}

impl std::str::FromStr for Direction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "out" => Ok(Direction::Out),
            "in" => Ok(Direction::In),
            "both" => Ok(Direction::Both),
            other => Err(format!("unknown direction `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct EdgeKey {
    kind: EdgeKind,
    src: ScholarId,
    dst: ScholarId,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct EdgeValue {
    weight: f64,
    years: Option<YearSpan>,
}

#[derive(Debug, Clone, Default)]
struct NodeAdjacency {
    out: [Vec<(ScholarId, f64)>; 5],
    inc: [Vec<(ScholarId, f64)>; 5],
}

fn kind_slot(kind: EdgeKind) -> usize {
    kind as usize
}

fn sort_neighbors(list: &mut [(ScholarId, f64)]) {
    list.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
}

/// Serializable structural content of a graph. Every collection is in a
/// canonical order so that encoding is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct GraphData {
    pub scholars: Vec<Scholar>,
    pub publications: Vec<PublicationRecord>,
    pub edges: Vec<RelEdge>,
    pub geo: Vec<GeoEntry>,
    pub dangling_refs: Vec<DanglingRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoEntry {
    pub institution: String,
    pub lat: f64,
    pub lng: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DanglingRef {
    pub citing: PubId,
    pub missing: PubId,
}

#[derive(Debug, Clone)]
pub struct KnowledgeGraph {
    scholars: BTreeMap<ScholarId, Scholar>,
    publications: BTreeMap<PubId, PublicationRecord>,
    edges: BTreeMap<EdgeKey, EdgeValue>,
    geo: GeoTable,
    dangling: Vec<(PubId, PubId)>,
    adjacency: HashMap<ScholarId, NodeAdjacency>,
    generation: u64,
}

impl Default for KnowledgeGraph {
    fn default() -> Self {
        Self::empty()
    }
}

/// Structural equality: generation and derived indexes are ignored.
impl PartialEq for KnowledgeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.scholars == other.scholars
            && self.publications == other.publications
            && self.edges == other.edges
            && self.geo == other.geo
            && self.dangling == other.dangling
    }
}

impl KnowledgeGraph {
    pub fn empty() -> Self {
        Self {
            scholars: BTreeMap::new(),
            publications: BTreeMap::new(),
            edges: BTreeMap::new(),
            geo: GeoTable::new(),
            dangling: Vec::new(),
            adjacency: HashMap::new(),
            generation: next_generation(),
        }
    }

    /// Builds the scholar/publication layer from validated records.
    /// Records with a duplicate id are ignored after the first.
    pub fn from_records(records: &[PublicationRecord], geo: GeoTable) -> Self {
        let mut publications = BTreeMap::new();
        for r in records {
            publications.entry(r.pub_id.clone()).or_insert_with(|| r.clone());
        }
        let unique: Vec<PublicationRecord> = publications.values().cloned().collect();
        let (scholars, _) = ingest::build_scholars(&unique);
        let mut dangling = ingest::dangling_refs(&unique);
        dangling.sort();
        let mut g = Self {
            scholars: scholars.into_iter().map(|s| (s.scholar_id.clone(), s)).collect(),
            publications,
            edges: BTreeMap::new(),
            geo,
            dangling,
            adjacency: HashMap::new(),
            generation: 0,
        };
        g.rebuild_index();
        g
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn scholar(&self, id: &ScholarId) -> Option<&Scholar> {
        self.scholars.get(id)
    }

    pub fn contains(&self, id: &ScholarId) -> bool {
        self.scholars.contains_key(id)
    }

    pub fn scholars(&self) -> impl ExactSizeIterator<Item = &Scholar> + '_ {
        self.scholars.values()
    }

    pub fn scholar_count(&self) -> usize {
        self.scholars.len()
    }

    pub fn publication(&self, id: &PubId) -> Option<&PublicationRecord> {
        self.publications.get(id)
    }

    /// Publications in id order.
    pub fn publications(&self) -> impl ExactSizeIterator<Item = &PublicationRecord> + '_ {
        self.publications.values()
    }

    pub fn records(&self) -> Vec<PublicationRecord> {
        self.publications.values().cloned().collect()
    }

    pub fn geo(&self) -> &GeoTable {
        &self.geo
    }

    pub fn geo_point(&self, institution: &str) -> Option<GeoPoint> {
        self.geo.get(institution).copied()
    }

    pub fn set_geo(&mut self, geo: GeoTable) {
        self.geo = geo;
        self.generation = next_generation();
    }

    pub fn dangling_refs(&self) -> &[(PubId, PubId)] {
        &self.dangling
    }

    /// Latest publication year in the corpus.
    pub fn max_year(&self) -> Option<i32> {
        self.publications.values().map(|p| p.year).max()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All edges in (kind, src, dst) order.
    pub fn edges(&self) -> impl Iterator<Item = RelEdge> + '_ {
        self.edges.iter().map(|(k, v)| RelEdge {
            src: k.src.clone(),
            dst: k.dst.clone(),
            kind: k.kind,
            weight: v.weight,
            years: v.years,
        })
    }

    pub fn edges_of(&self, kind: EdgeKind) -> impl Iterator<Item = RelEdge> + '_ {
        self.edges().filter(move |e| e.kind == kind)
    }

    pub fn edge(&self, src: &ScholarId, dst: &ScholarId, kind: EdgeKind) -> Option<RelEdge> {
        let probe = RelEdge::new(src.clone(), dst.clone(), kind, 1.0).canonical();
        let key = EdgeKey { kind, src: probe.src, dst: probe.dst };
        self.edges.get(&key).map(|v| RelEdge {
            src: key.src.clone(),
            dst: key.dst.clone(),
            kind,
            weight: v.weight,
            years: v.years,
        })
    }

    fn check_edge(&self, e: &RelEdge) -> Result<(), GraphError> {
        for end in [&e.src, &e.dst] {
            if !self.scholars.contains_key(end) {
                return Err(GraphError::UnknownScholar(end.clone()));
            }
        }
        let invalid = |reason: &str| GraphError::InvalidEdge {
            src: e.src.clone(),
            dst: e.dst.clone(),
            kind: e.kind,
            reason: reason.to_owned(),
        };
        if e.src == e.dst {
            return Err(invalid("self loop"));
        }
        if !(e.weight.is_finite() && e.weight > 0.0) {
            return Err(invalid("weight must be finite and > 0"));
        }
        if let Some(y) = e.years {
            if y.start > y.end {
                return Err(invalid("year range start after end"));
            }
        }
        Ok(())
    }

    /// Inserts edges, merging duplicates of `(src, dst, kind)` by summing
    /// weights and widening year ranges. The batch is validated up front and
    /// rejected as a whole on the first bad edge. Returns the number of
    /// edges applied.
    pub fn upsert_edges(&mut self, edges: impl IntoIterator<Item = RelEdge>) -> Result<usize, GraphError> {
        let batch: Vec<RelEdge> = edges.into_iter().map(RelEdge::canonical).collect();
        for e in &batch {
            self.check_edge(e)?;
        }
        if batch.is_empty() {
            return Ok(0);
        }
        let n = batch.len();
        for e in batch {
            let key = EdgeKey { kind: e.kind, src: e.src, dst: e.dst };
            self.edges
                .entry(key)
                .and_modify(|v| {
                    v.weight += e.weight;
                    v.years = match (v.years, e.years) {
                        (Some(a), Some(b)) => Some(a.widen(b)),
                        (a, b) => a.or(b),
                    };
                })
                .or_insert(EdgeValue { weight: e.weight, years: e.years });
        }
        self.rebuild_index();
        Ok(n)
    }

    /// Drops every edge of `kind`.
    pub fn clear_kind(&mut self, kind: EdgeKind) {
        self.edges.retain(|k, _| k.kind != kind);
        self.rebuild_index();
    }

    fn rebuild_index(&mut self) {
        let mut adj: HashMap<ScholarId, NodeAdjacency> = HashMap::with_capacity(self.scholars.len());
        for (k, v) in &self.edges {
            let slot = kind_slot(k.kind);
            adj.entry(k.src.clone()).or_default().out[slot].push((k.dst.clone(), v.weight));
            adj.entry(k.dst.clone()).or_default().inc[slot].push((k.src.clone(), v.weight));
            if k.kind.is_undirected() {
                adj.entry(k.dst.clone()).or_default().out[slot].push((k.src.clone(), v.weight));
                adj.entry(k.src.clone()).or_default().inc[slot].push((k.dst.clone(), v.weight));
            }
        }
        for node in adj.values_mut() {
            for list in node.out.iter_mut().chain(node.inc.iter_mut()) {
                sort_neighbors(list);
            }
        }
        self.adjacency = adj;
        self.generation = next_generation();
    }

    /// Adjacency of `id` under `kind`, ordered by weight descending then id.
    ///
    /// Undirected kinds ignore `direction`. For directed kinds `Both`
    /// merges in- and out-neighbors, summing weights when a neighbor appears
    /// on both sides.
    pub fn neighbors(&self, id: &ScholarId, kind: EdgeKind, direction: Direction) -> Result<Vec<(ScholarId, f64)>, GraphError> {
        if !self.scholars.contains_key(id) {
            return Err(GraphError::UnknownScholar(id.clone()));
        }
        let Some(node) = self.adjacency.get(id) else {
            return Ok(Vec::new());
        };
        let slot = kind_slot(kind);
        let dir = if kind.is_undirected() { Direction::Out } else { direction };
        Ok(match dir {
            Direction::Out => node.out[slot].clone(),
            Direction::In => node.inc[slot].clone(),
            Direction::Both => {
                let mut merged: BTreeMap<&ScholarId, f64> = BTreeMap::new();
                for (n, w) in node.out[slot].iter().chain(node.inc[slot].iter()) {
                    *merged.entry(n).or_default() += w;
                }
                let mut list: Vec<(ScholarId, f64)> = merged.into_iter().map(|(n, w)| (n.clone(), w)).collect();
                sort_neighbors(&mut list);
                list
            }
        })
    }

    /// Out-degree under `kind` (undirected kinds count every incident edge).
    pub fn degree(&self, id: &ScholarId, kind: EdgeKind, direction: Direction) -> usize {
        self.neighbors(id, kind, direction).map(|n| n.len()).unwrap_or(0)
    }

    pub fn to_data(&self) -> GraphData {
        GraphData {
            scholars: self.scholars.values().cloned().collect(),
            publications: self.publications.values().cloned().collect(),
            edges: self.edges().collect(),
            geo: self
                .geo
                .iter()
                .map(|(k, p)| GeoEntry { institution: k.clone(), lat: p.lat, lng: p.lng })
                .collect(),
            dangling_refs: self
                .dangling
                .iter()
                .map(|(c, m)| DanglingRef { citing: c.clone(), missing: m.clone() })
                .collect(),
        }
    }

    /// Rebuilds a graph from decoded data, enforcing every store invariant.
    pub fn from_data(data: GraphData) -> Result<Self, GraphError> {
        let mut scholars = BTreeMap::new();
        for s in data.scholars {
            let id = s.scholar_id.clone();
            if scholars.insert(id.clone(), s).is_some() {
                return Err(GraphError::Invalid(format!("duplicate scholar `{id}`")));
            }
        }
        let mut publications = BTreeMap::new();
        for p in data.publications {
            ingest::validate(&p).map_err(GraphError::Invalid)?;
            let id = p.pub_id.clone();
            if publications.insert(id.clone(), p).is_some() {
                return Err(GraphError::Invalid(format!("duplicate publication `{id}`")));
            }
        }
        let mut g = Self {
            scholars,
            publications,
            edges: BTreeMap::new(),
            geo: data.geo.into_iter().map(|e| (e.institution, GeoPoint { lat: e.lat, lng: e.lng })).collect(),
            dangling: data.dangling_refs.into_iter().map(|d| (d.citing, d.missing)).collect(),
            adjacency: HashMap::new(),
            generation: 0,
        };
        for e in data.edges {
            if e.kind.is_undirected() && e.src > e.dst {
                return Err(GraphError::Invalid(format!("undirected edge {} -> {} not canonical", e.src, e.dst)));
            }
            g.check_edge(&e)?;
            let key = EdgeKey { kind: e.kind, src: e.src, dst: e.dst };
            if g.edges.insert(key, EdgeValue { weight: e.weight, years: e.years }).is_some() {
                return Err(GraphError::Invalid("duplicate edge".into()));
            }
        }
        g.rebuild_index();
        Ok(g)
    }
}
