//! Read-side facade over one loaded graph: name index, ranking cache and the
//! documents the API serves.

use crate::mine::citation::{IdentityResolver, IdentityTag};
use crate::mine::profile::{collab_profile, YearRange};
use crate::model::{EdgeKind, ScholarId, YearSpan};
use crate::query::{answer, parse_query, NameIndex, QueryAnswer};
use crate::ranking::{Measure, RankingCache, RankingList};
use crate::recommend::{recommend_advisors, MatchInputs, PreferenceForm, RecommendError, RecommendationSet};
use crate::store::{Direction, GraphError, KnowledgeGraph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScholarProfile {
    pub scholar_id: ScholarId,
    pub name: String,
    pub institution: String,
    pub first_pub_year: i32,
    pub publication_count: usize,
    pub pub_ids: Vec<crate::model::PubId>,
    /// Measure wire name → value.
    pub measures: BTreeMap<String, f64>,
    /// Edge kind → number of distinct neighbors of that kind.
    pub relations: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoNode {
    pub id: ScholarId,
    pub name: String,
    pub identity: IdentityTag,
    /// Tie strength to the center relative to the strongest tie, in (0, 1];
    /// the center itself is 1.
    pub size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoLink {
    pub src: ScholarId,
    pub dst: ScholarId,
    pub kind: EdgeKind,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub years: Option<YearSpan>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoGeoPoint {
    pub id: ScholarId,
    pub institution: String,
    pub lat: f64,
    pub lng: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoGeo {
    pub points: Vec<EgoGeoPoint>,
    /// Nodes whose institution has no coordinates.
    pub missing: Vec<ScholarId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YearCount {
    pub year: i32,
    pub collaborators: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoSeries {
    pub from: i32,
    pub to: i32,
    pub counts: Vec<YearCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoNetworkDoc {
    pub center: ScholarId,
    pub kind: EdgeKind,
    pub nodes: Vec<EgoNode>,
    pub links: Vec<EgoLink>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geo: Option<EgoGeo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<EgoSeries>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EgoOptions {
    pub geo: bool,
    pub series: Option<YearRange>,
}

/// Blank query text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("query text is empty")]
pub struct EmptyQuery;

#[derive(Debug)]
pub struct Engine {
    graph: Arc<KnowledgeGraph>,
    index: NameIndex,
    identities: IdentityResolver,
    cache: RankingCache,
}

impl Engine {
    pub fn new(graph: KnowledgeGraph) -> Self {
        Self::from_arc(Arc::new(graph))
    }

    pub fn from_arc(graph: Arc<KnowledgeGraph>) -> Self {
        let index = NameIndex::build(&graph);
        let identities = IdentityResolver::new(
            graph.edges_of(EdgeKind::AdvisorOf).chain(graph.edges_of(EdgeKind::Coauthor)).collect::<Vec<_>>().iter(),
        );
        Self { graph, index, identities, cache: RankingCache::new() }
    }

    pub fn graph(&self) -> &KnowledgeGraph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<KnowledgeGraph> {
        Arc::clone(&self.graph)
    }

    pub fn index(&self) -> &NameIndex {
        &self.index
    }

    pub fn cache(&self) -> &RankingCache {
        &self.cache
    }

    pub fn ranking(&self, measure: Measure) -> Arc<RankingList> {
        self.cache.get(measure, &self.graph)
    }

    pub fn search(&self, text: &str, limit: usize) -> Result<QueryAnswer, EmptyQuery> {
        let ast = parse_query(text);
        if ast.is_empty() {
            return Err(EmptyQuery);
        }
        Ok(answer(&ast, &self.graph, &self.index, limit))
    }

    pub fn profile(&self, id: &ScholarId) -> Option<ScholarProfile> {
        let s = self.graph.scholar(id)?;
        let measures = Measure::ALL
            .into_iter()
            .map(|m| {
                let list = self.ranking(m);
                let v = list.entries.iter().find(|e| &e.scholar_id == id).map_or(0.0, |e| e.value);
                (m.as_str().to_owned(), v)
            })
            .collect();
        let relations = EdgeKind::ALL
            .into_iter()
            .map(|k| (k.as_str().to_owned(), self.graph.degree(id, k, Direction::Both)))
            .collect();
        Some(ScholarProfile {
            scholar_id: s.scholar_id.clone(),
            name: s.name.clone(),
            institution: s.institution.clone(),
            first_pub_year: s.first_pub_year,
            publication_count: s.pub_ids.len(),
            pub_ids: s.pub_ids.clone(),
            measures,
            relations,
        })
    }

    /// The center, its `kind` neighbors in either direction, and every `kind`
    /// edge among those nodes.
    pub fn ego(&self, id: &ScholarId, kind: EdgeKind, opts: EgoOptions) -> Result<EgoNetworkDoc, GraphError> {
        let g = &*self.graph;
        let ties = g.neighbors(id, kind, Direction::Both)?;
        let strongest = ties.iter().map(|(_, w)| *w).fold(0.0, f64::max);
        let name = |s: &ScholarId| self.index.display_name(s).unwrap_or_default().to_owned();

        let mut nodes = vec![EgoNode { id: id.clone(), name: name(id), identity: IdentityTag::Center, size: 1.0 }];
        let mut members: BTreeSet<&ScholarId> = BTreeSet::from([id]);
        let mut alters: Vec<&(ScholarId, f64)> = ties.iter().collect();
        alters.sort_by(|a, b| a.0.cmp(&b.0));
        for (other, w) in alters {
            members.insert(other);
            nodes.push(EgoNode {
                id: other.clone(),
                name: name(other),
                identity: self.identities.tag(id, other),
                size: if strongest > 0.0 { w / strongest } else { 0.0 },
            });
        }

        let mut links = Vec::new();
        for m in &members {
            for (dst, _) in g.neighbors(m, kind, Direction::Out)? {
                if !members.contains(&dst) {
                    continue;
                }
                let e = g.edge(m, &dst, kind).expect("adjacency mirrors the edge table");
                if kind.is_undirected() && e.src != **m {
                    continue;
                }
                links.push(EgoLink { src: e.src, dst: e.dst, kind, weight: e.weight, years: e.years });
            }
        }
        links.sort_by(|a, b| (&a.src, &a.dst).cmp(&(&b.src, &b.dst)));
        links.dedup_by(|a, b| a.src == b.src && a.dst == b.dst);

        let geo = opts.geo.then(|| {
            let mut points = Vec::new();
            let mut missing = Vec::new();
            for n in &nodes {
                let inst = g.scholar(&n.id).map(|s| s.institution.clone()).unwrap_or_default();
                match g.geo_point(&inst) {
                    Some(p) => points.push(EgoGeoPoint { id: n.id.clone(), institution: inst, lat: p.lat, lng: p.lng }),
                    None => missing.push(n.id.clone()),
                }
            }
            EgoGeo { points, missing }
        });
        let series = match opts.series {
            None => None,
            Some(range) => {
                let profile = collab_profile(g, id, range)?;
                Some(EgoSeries {
                    from: range.from,
                    to: range.to,
                    counts: profile
                        .yearly_counts
                        .into_iter()
                        .map(|(year, collaborators)| YearCount { year, collaborators })
                        .collect(),
                })
            }
        };
        Ok(EgoNetworkDoc { center: id.clone(), kind, nodes, links, geo, series })
    }

    pub fn recommend(&self, form: &PreferenceForm, limit: usize) -> Result<RecommendationSet, RecommendError> {
        let inputs = MatchInputs::from_cache(&self.cache, &self.graph);
        recommend_advisors(form, &self.graph, &inputs, limit)
    }
}
