//! Academic ranking measures and their cached descending lists.
//!
//! Measure definitions:
//!
//! - `collaborators`: number of distinct co-authors.
//! - `advisees`: number of ADVISOR_OF out-edges.
//! - `team_members`: number of TEAM out-edges.
//! - `citations`: distinct citing publications that reference at least one
//!   of the scholar's publications and are not authored by the scholar.
//! - `advisor_influence`: advisees plus the sum of the advisees' citations.
//! - `potential_index`: citations received from publications in the five
//!   latest corpus years (`max_year - 4 ..= max_year`) divided by
//!   `max(1, max_year - first_pub_year)`.
//!
//! The last two are interpretations; the measure names are all that is fixed.

use crate::model::{EdgeKind, PubId, ScholarId};
use crate::store::{Direction, KnowledgeGraph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

pub const RECENT_YEARS: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Collaborators,
    Advisees,
    TeamMembers,
    AdvisorInfluence,
    Citations,
    PotentialIndex,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::Collaborators,
        Measure::Advisees,
        Measure::TeamMembers,
        Measure::AdvisorInfluence,
        Measure::Citations,
        Measure::PotentialIndex,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Collaborators => "collaborators",
            Measure::Advisees => "advisees",
            Measure::TeamMembers => "team_members",
            Measure::AdvisorInfluence => "advisor_influence",
            Measure::Citations => "citations",
            Measure::PotentialIndex => "potential_index",
        }
    }

    /// Human-facing label.
    pub fn label(self) -> &'static str {
        match self {
            Measure::Collaborators => "Number of Collaborators",
            Measure::Advisees => "Number of Advisees",
            Measure::TeamMembers => "Number of Team Members",
            Measure::AdvisorInfluence => "Advisor Influence",
            Measure::Citations => "Times of Citations",
            Measure::PotentialIndex => "Potential Index",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown measure `{0}`; expected one of collaborators|advisees|team_members|advisor_influence|citations|potential_index")]
pub struct UnknownMeasure(pub String);

impl FromStr for Measure {
    type Err = UnknownMeasure;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Measure::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| UnknownMeasure(s.to_owned()))
    }
}

pub type MeasureMap = BTreeMap<ScholarId, f64>;

/// Citing publications per scholar, excluding self-authored citers.
fn citing_pubs(graph: &KnowledgeGraph) -> HashMap<&ScholarId, BTreeSet<&PubId>> {
    let mut out: HashMap<&ScholarId, BTreeSet<&PubId>> = HashMap::new();
    for p in graph.publications() {
        let cited: BTreeSet<&ScholarId> = p
            .refs
            .iter()
            .filter_map(|r| graph.publication(r))
            .flat_map(|r| r.authors.iter().map(|a| &a.id))
            .collect();
        for v in cited {
            if !p.has_author(v) {
                out.entry(v).or_default().insert(&p.pub_id);
            }
        }
    }
    out
}

fn out_degree(graph: &KnowledgeGraph, kind: EdgeKind) -> MeasureMap {
    graph
        .scholars()
        .map(|s| (s.scholar_id.clone(), graph.degree(&s.scholar_id, kind, Direction::Out) as f64))
        .collect()
}

fn citations(graph: &KnowledgeGraph) -> MeasureMap {
    let citing = citing_pubs(graph);
    graph
        .scholars()
        .map(|s| (s.scholar_id.clone(), citing.get(&s.scholar_id).map_or(0, |c| c.len()) as f64))
        .collect()
}

pub fn compute_measure(measure: Measure, graph: &KnowledgeGraph) -> MeasureMap {
    match measure {
        Measure::Collaborators => out_degree(graph, EdgeKind::Coauthor),
        Measure::Advisees => out_degree(graph, EdgeKind::AdvisorOf),
        Measure::TeamMembers => out_degree(graph, EdgeKind::Team),
        Measure::Citations => citations(graph),
        Measure::AdvisorInfluence => {
            let cites = citations(graph);
            graph
                .scholars()
                .map(|s| {
                    let advisees = graph
                        .neighbors(&s.scholar_id, EdgeKind::AdvisorOf, Direction::Out)
                        .unwrap_or_default();
                    let downstream: f64 = advisees.iter().map(|(a, _)| cites.get(a).copied().unwrap_or(0.0)).sum();
                    (s.scholar_id.clone(), advisees.len() as f64 + downstream)
                })
                .collect()
        }
        Measure::PotentialIndex => {
            let Some(max_year) = graph.max_year() else {
                return MeasureMap::new();
            };
            let recent_from = max_year - (RECENT_YEARS - 1);
            let citing = citing_pubs(graph);
            graph
                .scholars()
                .map(|s| {
                    let recent = citing.get(&s.scholar_id).map_or(0, |c| {
                        c.iter()
                            .filter(|p| graph.publication(p).is_some_and(|p| p.year >= recent_from))
                            .count()
                    });
                    let age = (max_year - s.first_pub_year).max(1);
                    (s.scholar_id.clone(), recent as f64 / age as f64)
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub scholar_id: ScholarId,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingList {
    pub measure: Measure,
    pub entries: Vec<RankEntry>,
    /// Generation of the graph the list was computed from.
    pub computed_at: u64,
}

impl RankingList {
    /// Scholars with a positive value, descending, ties by id ascending.
    pub fn from_map(measure: Measure, values: &MeasureMap, computed_at: u64) -> Self {
        let mut entries: Vec<RankEntry> = values
            .iter()
            .filter(|(_, v)| **v > 0.0)
            .map(|(id, v)| RankEntry { scholar_id: id.clone(), value: *v })
            .collect();
        entries.sort_by(|a, b| b.value.total_cmp(&a.value).then_with(|| a.scholar_id.cmp(&b.scholar_id)));
        Self { measure, entries, computed_at }
    }

    /// Offset past the end yields an empty page.
    pub fn page(&self, offset: usize, limit: usize) -> &[RankEntry] {
        let start = offset.min(self.entries.len());
        let end = start.saturating_add(limit).min(self.entries.len());
        &self.entries[start..end]
    }

    pub fn content_eq(&self, other: &RankingList) -> bool {
        self.measure == other.measure && self.entries == other.entries
    }
}

pub fn ranked_list(measure: Measure, graph: &KnowledgeGraph) -> RankingList {
    RankingList::from_map(measure, &compute_measure(measure, graph), graph.generation())
}

/// In-process ranking cache keyed by (measure, graph generation).
///
/// Reads take a shared lock. A miss takes the measure's compute lock, so at
/// most one computation per measure runs at a time; concurrent callers for
/// the same generation wait and then hit.
#[derive(Debug, Default)]
pub struct RankingCache {
    lists: RwLock<HashMap<Measure, Arc<RankingList>>>,
    compute: [Mutex<()>; 6],
    hits: AtomicU64,
    misses: AtomicU64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
}

impl RankingCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn lookup(&self, measure: Measure, generation: u64) -> Option<Arc<RankingList>> {
        let lists = self.lists.read().unwrap_or_else(|e| e.into_inner());
        lists.get(&measure).filter(|l| l.computed_at == generation).cloned()
    }

    pub fn get(&self, measure: Measure, graph: &KnowledgeGraph) -> Arc<RankingList> {
        let generation = graph.generation();
        if let Some(hit) = self.lookup(measure, generation) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return hit;
        }
        let _guard = self.compute[measure.slot()].lock().unwrap_or_else(|e| e.into_inner());
        if let Some(hit) = self.lookup(measure, generation) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return hit;
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let fresh = Arc::new(ranked_list(measure, graph));
        self.lists
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(measure, Arc::clone(&fresh));
        fresh
    }

    pub fn invalidate(&self, measure: Measure) {
        self.lists.write().unwrap_or_else(|e| e.into_inner()).remove(&measure);
    }

    pub fn invalidate_all(&self) {
        self.lists.write().unwrap_or_else(|e| e.into_inner()).clear();
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats { hits: self.hits.load(Ordering::Relaxed), misses: self.misses.load(Ordering::Relaxed) }
    }
}
