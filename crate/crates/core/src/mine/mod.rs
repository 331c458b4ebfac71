//! Relationship mining: every scholar-level edge kind is derived here from
//! publication metadata.
//!
//! Co-author, co-citation and advisor mining depend only on the records.
//! Citation tagging needs advisor and co-author edges, and teams need both,
//! so [`mine_graph`] runs the kinds in dependency order.

pub mod advisor;
pub mod citation;
pub mod classifier;
pub mod coauthor;
pub mod profile;
pub mod team;

pub use advisor::{
    fit_advisor_weights, labeled_features, mine_advisors, parse_labeled_pairs, AdvisorContext, AdvisorOutcome,
    AdvisorParams, CandidatePair, LabeledPair,
};
pub use citation::{mine_citations, mine_cocitations, IdentityResolver, IdentityTag, TaggedCitation};
pub use classifier::{logistic, FitConfig, FitError};
pub use coauthor::mine_coauthors;
pub use profile::{collab_profile, CollabProfile, YearRange};
pub use team::{mine_teams, DEFAULT_TEAM_THRESHOLD};

use crate::model::{EdgeKind, PublicationRecord, RelEdge, ScholarId};
use crate::store::{GraphError, KnowledgeGraph};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone)]
pub struct MineConfig {
    pub kinds: BTreeSet<EdgeKind>,
    pub advisor: AdvisorParams,
    pub team_threshold: f64,
}

impl Default for MineConfig {
    fn default() -> Self {
        Self {
            kinds: EdgeKind::ALL.into_iter().collect(),
            advisor: AdvisorParams::default(),
            team_threshold: DEFAULT_TEAM_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct MineReport {
    pub edges_per_kind: BTreeMap<EdgeKind, usize>,
    pub advisor_cycles: Vec<Vec<ScholarId>>,
    pub candidates_evaluated: usize,
}

/// Re-mines the requested kinds in place. Kinds not requested keep their
/// existing edges.
pub fn mine_graph(graph: &mut KnowledgeGraph, config: &MineConfig) -> Result<MineReport, GraphError> {
    config.advisor.validate().map_err(GraphError::Invalid)?;
    let records: Vec<PublicationRecord> = graph.records();
    let scholars: Vec<_> = graph.scholars().cloned().collect();
    let mut report = MineReport::default();
    let wants = |k: EdgeKind| config.kinds.contains(&k);

    let mut replace = |graph: &mut KnowledgeGraph, kind: EdgeKind, edges: Vec<RelEdge>| -> Result<(), GraphError> {
        graph.clear_kind(kind);
        report.edges_per_kind.insert(kind, edges.len());
        graph.upsert_edges(edges).map(|_| ())
    };

    if wants(EdgeKind::Coauthor) {
        replace(graph, EdgeKind::Coauthor, mine_coauthors(&records))?;
    }
    if wants(EdgeKind::Cocited) {
        replace(graph, EdgeKind::Cocited, mine_cocitations(&records))?;
    }
    let mut cycles = Vec::new();
    let mut evaluated = 0;
    if wants(EdgeKind::AdvisorOf) {
        let outcome = mine_advisors(&records, &scholars, &config.advisor);
        cycles = outcome.cycles;
        evaluated = outcome.audit.len();
        replace(graph, EdgeKind::AdvisorOf, outcome.edges)?;
    }
    let known: Vec<RelEdge> = graph
        .edges()
        .filter(|e| matches!(e.kind, EdgeKind::AdvisorOf | EdgeKind::Coauthor))
        .collect();
    if wants(EdgeKind::Cites) {
        let ids = IdentityResolver::new(&known);
        let cites = mine_citations(&records, &ids).into_iter().map(|c| c.edge).collect();
        replace(graph, EdgeKind::Cites, cites)?;
    }
    if wants(EdgeKind::Team) {
        replace(graph, EdgeKind::Team, mine_teams(&known, config.team_threshold))?;
    }
    report.advisor_cycles = cycles;
    report.candidates_evaluated = evaluated;
    Ok(report)
}

/// Ingest + mine in one step.
pub fn build_graph(records: &[PublicationRecord], geo: crate::geo::GeoTable, config: &MineConfig) -> Result<(KnowledgeGraph, MineReport), GraphError> {
    let mut graph = KnowledgeGraph::from_records(records, geo);
    let report = mine_graph(&mut graph, config)?;
    Ok((graph, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geo::GeoTable;
    use crate::store::Direction;

    #[test]
    fn f1_full_pipeline() {
        let (g, report) = build_graph(&fixtures::f1_records(), GeoTable::new(), &MineConfig::default()).unwrap();
        let counts: Vec<(EdgeKind, usize)> = report.edges_per_kind.into_iter().collect();
        assert_eq!(
            counts,
            vec![
                (EdgeKind::Coauthor, 2),
                (EdgeKind::AdvisorOf, 2),
                (EdgeKind::Cites, 2),
                (EdgeKind::Cocited, 1),
                (EdgeKind::Team, 2),
            ]
        );
        assert_eq!(
            g.neighbors(&"s1".into(), EdgeKind::Coauthor, Direction::Both).unwrap(),
            vec![("s2".into(), 2.0), ("s3".into(), 1.0)]
        );
        let citers = g.neighbors(&"s2".into(), EdgeKind::Cites, Direction::In).unwrap();
        assert_eq!(citers, vec![("s1".into(), 1.0), ("s3".into(), 1.0)]);
        let team: Vec<(String, String)> = g.edges_of(EdgeKind::Team).map(|e| (e.src.0, e.dst.0)).collect();
        assert_eq!(team, vec![("s1".into(), "s3".into()), ("s2".into(), "s1".into())]);
    }

    #[test]
    fn partial_remine_keeps_other_kinds() {
        let (mut g, _) = build_graph(&fixtures::f1_records(), GeoTable::new(), &MineConfig::default()).unwrap();
        let before = g.edges_of(EdgeKind::Cites).count();
        let cfg = MineConfig { kinds: [EdgeKind::AdvisorOf].into_iter().collect(), ..MineConfig::default() };
        mine_graph(&mut g, &cfg).unwrap();
        assert_eq!(g.edges_of(EdgeKind::Cites).count(), before);
        assert_eq!(g.edges_of(EdgeKind::AdvisorOf).count(), 2);
    }

    #[test]
    fn mining_is_idempotent() {
        let (g1, _) = build_graph(&fixtures::f1_records(), GeoTable::new(), &MineConfig::default()).unwrap();
        let mut g2 = g1.clone();
        mine_graph(&mut g2, &MineConfig::default()).unwrap();
        assert_eq!(g1, g2);
    }
}
