//! Scholar-level citation and co-citation networks.

use crate::model::{EdgeKind, PubId, PublicationRecord, RelEdge, ScholarId, YearSpan};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

/// Role of a neighbor relative to an ego scholar, used to color nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityTag {
    Center,
    Advisor,
    Advisee,
    Coauthor,
    Other,
}

impl IdentityTag {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityTag::Center => "center",
            IdentityTag::Advisor => "advisor",
            IdentityTag::Advisee => "advisee",
            IdentityTag::Coauthor => "coauthor",
            IdentityTag::Other => "other",
        }
    }
}

/// Resolves identity tags from already-mined advisor and co-author edges.
#[derive(Debug, Default, Clone)]
pub struct IdentityResolver {
    advisor_of: HashSet<(ScholarId, ScholarId)>,
    coauthors: HashSet<(ScholarId, ScholarId)>,
}

impl IdentityResolver {
    pub fn new<'a>(edges: impl IntoIterator<Item = &'a RelEdge>) -> Self {
        let mut r = Self::default();
        for e in edges {
            match e.kind {
                EdgeKind::AdvisorOf => {
                    r.advisor_of.insert((e.src.clone(), e.dst.clone()));
                }
                EdgeKind::Coauthor => {
                    r.coauthors.insert((e.src.clone(), e.dst.clone()));
                    r.coauthors.insert((e.dst.clone(), e.src.clone()));
                }
                _ => {}
            }
        }
        r
    }

    /// Tag of `other` from `center`'s point of view.
    /// Precedence: advisor > advisee > coauthor > other.
    pub fn tag(&self, center: &ScholarId, other: &ScholarId) -> IdentityTag {
        if center == other {
            return IdentityTag::Center;
        }
        let pair = |a: &ScholarId, b: &ScholarId| (a.clone(), b.clone());
        if self.advisor_of.contains(&pair(other, center)) {
            IdentityTag::Advisor
        } else if self.advisor_of.contains(&pair(center, other)) {
            IdentityTag::Advisee
        } else if self.coauthors.contains(&pair(center, other)) {
            IdentityTag::Coauthor
        } else {
            IdentityTag::Other
        }
    }
}

/// A CITES edge with the citer's identity relative to the cited scholar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggedCitation {
    pub edge: RelEdge,
    pub citer_tag: IdentityTag,
}

/// For each citing publication, the set of scholars it cites through
/// resolved references.
fn cited_scholars<'a>(records: &[&'a PublicationRecord]) -> Vec<(&'a PublicationRecord, BTreeSet<&'a ScholarId>)> {
    let by_id: HashMap<&PubId, &PublicationRecord> = records.iter().map(|r| (&r.pub_id, *r)).collect();
    records
        .iter()
        .map(|p| {
            let cited: BTreeSet<&ScholarId> = p
                .refs
                .iter()
                .filter_map(|r| by_id.get(r))
                .flat_map(|r| r.authors.iter().map(|a| &a.id))
                .collect();
            (*p, cited)
        })
        .collect()
}

#[derive(Default)]
struct Tally {
    count: u32,
    years: Option<YearSpan>,
}

impl Tally {
    fn bump(&mut self, year: i32) {
        self.count += 1;
        self.years = Some(match self.years {
            Some(y) => y.include(year),
            None => YearSpan::single(year),
        });
    }
}

/// CITES(u → v): number of publications authored by `u` that reference at
/// least one publication of `v`, where `v` is not an author of the citing
/// publication. Edge years span the citing publications.
pub fn mine_citations<'a>(
    records: impl IntoIterator<Item = &'a PublicationRecord>,
    identities: &IdentityResolver,
) -> Vec<TaggedCitation> {
    let records: Vec<&PublicationRecord> = records.into_iter().collect();
    let mut tallies: BTreeMap<(ScholarId, ScholarId), Tally> = BTreeMap::new();
    for (p, cited) in cited_scholars(&records) {
        let authors: BTreeSet<&ScholarId> = p.authors.iter().map(|a| &a.id).collect();
        for v in cited.iter().filter(|v| !authors.contains(*v)) {
            for u in &authors {
                tallies.entry(((*u).clone(), (*v).clone())).or_default().bump(p.year);
            }
        }
    }
    tallies
        .into_iter()
        .map(|((u, v), t)| {
            let citer_tag = identities.tag(&v, &u);
            TaggedCitation {
                edge: RelEdge::new(u, v, EdgeKind::Cites, t.count as f64).with_years(t.years),
                citer_tag,
            }
        })
        .collect()
}

/// COCITED(u, v): number of distinct publications whose references cover at
/// least one publication of `u` and one of `v`. No authorship exclusion.
pub fn mine_cocitations<'a>(records: impl IntoIterator<Item = &'a PublicationRecord>) -> Vec<RelEdge> {
    let records: Vec<&PublicationRecord> = records.into_iter().collect();
    let mut tallies: BTreeMap<(ScholarId, ScholarId), Tally> = BTreeMap::new();
    for (p, cited) in cited_scholars(&records) {
        let cited: Vec<&ScholarId> = cited.into_iter().collect();
        for (i, u) in cited.iter().enumerate() {
            for v in &cited[i + 1..] {
                tallies.entry(((*u).clone(), (*v).clone())).or_default().bump(p.year);
            }
        }
    }
    tallies
        .into_iter()
        .map(|((u, v), t)| RelEdge::new(u, v, EdgeKind::Cocited, t.count as f64).with_years(t.years))
        .collect()
}
