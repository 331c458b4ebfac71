//! Brute-force oracles and corpus generators shared by the integration tests.
//!
//! The oracles scan raw records with nested loops and never touch the
//! store's adjacency or the miners' indexes.

#![allow(dead_code)]

use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use wos_core::model::{AuthorRef, PubId, PublicationRecord, ScholarId};
use wos_core::{EdgeKind, KnowledgeGraph};

pub type PairWeights = BTreeMap<(String, String), f64>;

/// Per-publication author set and cited-scholar set, resolved by linear scan.
pub struct Prepared {
    pub ids: Vec<String>,
    pub years: Vec<i32>,
    pub authors: Vec<BTreeSet<String>>,
    pub cited: Vec<BTreeSet<String>>,
}

impl Prepared {
    pub fn new(records: &[PublicationRecord]) -> Self {
        let authors: Vec<BTreeSet<String>> =
            records.iter().map(|p| p.authors.iter().map(|a| a.id.0.clone()).collect()).collect();
        let cited = records
            .iter()
            .map(|p| {
                let mut out = BTreeSet::new();
                for r in &p.refs {
                    for (j, target) in records.iter().enumerate() {
                        if &target.pub_id == r {
                            out.extend(authors[j].iter().cloned());
                        }
                    }
                }
                out
            })
            .collect();
        Self {
            ids: records.iter().map(|p| p.pub_id.0.clone()).collect(),
            years: records.iter().map(|p| p.year).collect(),
            authors,
            cited,
        }
    }

    pub fn scholars(&self) -> BTreeSet<String> {
        self.authors.iter().flatten().cloned().collect()
    }
}

/// Unordered pairs `(lo, hi)` → number of publications listing both.
pub fn coauthor_oracle(p: &Prepared) -> PairWeights {
    let mut out = PairWeights::new();
    for authors in &p.authors {
        for u in authors {
            for v in authors {
                if u < v {
                    *out.entry((u.clone(), v.clone())).or_default() += 1.0;
                }
            }
        }
    }
    out
}

/// Ordered `(u, v)` → publications by `u`, not by `v`, citing some work of `v`.
pub fn cites_oracle(p: &Prepared) -> PairWeights {
    let mut out = PairWeights::new();
    for i in 0..p.ids.len() {
        for v in &p.cited[i] {
            if p.authors[i].contains(v) {
                continue;
            }
            for u in &p.authors[i] {
                *out.entry((u.clone(), v.clone())).or_default() += 1.0;
            }
        }
    }
    out
}

/// Unordered `(lo, hi)` → publications whose references cover both.
pub fn cocited_oracle(p: &Prepared) -> PairWeights {
    let mut out = PairWeights::new();
    for cited in &p.cited {
        for u in cited {
            for v in cited {
                if u < v {
                    *out.entry((u.clone(), v.clone())).or_default() += 1.0;
                }
            }
        }
    }
    out
}

pub fn graph_weights(graph: &KnowledgeGraph, kind: EdgeKind) -> PairWeights {
    graph.edges_of(kind).map(|e| ((e.src.0, e.dst.0), e.weight)).collect()
}

/// Indexes of publications, not authored by `s`, that cite some work of `s`.
fn citing(p: &Prepared, s: &str) -> Vec<usize> {
    (0..p.ids.len()).filter(|&i| !p.authors[i].contains(s) && p.cited[i].contains(s)).collect()
}

/// All six measures from raw records plus the mined ADVISOR_OF and TEAM
/// edge lists, keyed by measure wire name.
pub fn measure_oracle(p: &Prepared, graph: &KnowledgeGraph) -> BTreeMap<&'static str, BTreeMap<String, f64>> {
    let scholars = p.scholars();
    let advisor: Vec<(String, String)> = graph.edges_of(EdgeKind::AdvisorOf).map(|e| (e.src.0, e.dst.0)).collect();
    let team: Vec<(String, String)> = graph.edges_of(EdgeKind::Team).map(|e| (e.src.0, e.dst.0)).collect();
    let max_year = p.years.iter().copied().max().unwrap_or(0);

    let mut out: BTreeMap<&'static str, BTreeMap<String, f64>> = BTreeMap::new();
    let citations: BTreeMap<String, f64> = scholars.iter().map(|s| (s.clone(), citing(p, s).len() as f64)).collect();
    for s in &scholars {
        let own: Vec<usize> = (0..p.ids.len()).filter(|&i| p.authors[i].contains(s)).collect();
        let collaborators: BTreeSet<&String> = own.iter().flat_map(|&i| &p.authors[i]).filter(|a| *a != s).collect();
        let advisees: Vec<&String> = advisor.iter().filter(|(a, _)| a == s).map(|(_, b)| b).collect();
        let team_members = team.iter().filter(|(a, _)| a == s).count();
        let influence = advisees.len() as f64 + advisees.iter().map(|a| citations[*a]).sum::<f64>();
        let first = own.iter().map(|&i| p.years[i]).min().expect("scholar has a publication");
        let recent = citing(p, s).into_iter().filter(|&i| p.years[i] > max_year - 5).count();
        let potential = recent as f64 / ((max_year - first).max(1)) as f64;

        out.entry("collaborators").or_default().insert(s.clone(), collaborators.len() as f64);
        out.entry("advisees").or_default().insert(s.clone(), advisees.len() as f64);
        out.entry("team_members").or_default().insert(s.clone(), team_members as f64);
        out.entry("citations").or_default().insert(s.clone(), citations[s]);
        out.entry("advisor_influence").or_default().insert(s.clone(), influence);
        out.entry("potential_index").or_default().insert(s.clone(), potential);
    }
    out
}

pub fn author(i: usize) -> AuthorRef {
    AuthorRef { id: ScholarId::new(format!("x{i:03}")), name: format!("Person {i}"), institution: format!("Inst {}", i % 3) }
}

/// Row: (year, distinct author indexes, ref targets). A ref target below the
/// row count points at that row's publication, anything else is dangling.
pub type Row = (i32, BTreeSet<usize>, Vec<usize>);

pub fn rows_to_records(rows: &[Row]) -> Vec<PublicationRecord> {
    rows.iter()
        .enumerate()
        .map(|(i, (year, authors, refs))| {
            let mut refs: Vec<PubId> = refs
                .iter()
                .filter(|&&r| r != i)
                .map(|&r| if r < rows.len() { PubId(format!("q{r:03}")) } else { PubId(format!("ext{r}")) })
                .collect();
            refs.sort();
            refs.dedup();
            PublicationRecord {
                pub_id: PubId(format!("q{i:03}")),
                title: format!("Paper {i}"),
                year: *year,
                venue: None,
                authors: authors.iter().map(|&a| author(a)).collect(),
                refs,
                fields: vec![if i % 4 == 0 { "Math".into() } else { "CS".into() }],
            }
        })
        .collect()
}

/// Small arbitrary corpora: up to `max_pubs` records over up to
/// `max_scholars` authors, with references forwards, backwards and dangling.
pub fn corpus(max_pubs: usize, max_scholars: usize) -> impl Strategy<Value = Vec<PublicationRecord>> {
    (1..=max_scholars)
        .prop_flat_map(move |n| {
            prop::collection::vec(
                (
                    1990i32..=2017,
                    prop::collection::btree_set(0..n, 1..=4.min(n)),
                    prop::collection::vec(0..max_pubs + 3, 0..4),
                ),
                1..=max_pubs,
            )
        })
        .prop_map(|rows| rows_to_records(&rows))
}
