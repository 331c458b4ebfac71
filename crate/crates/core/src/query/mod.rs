//! Fuzzy name search and relation queries such as "Bob's advisor".

pub mod index;
pub mod parser;

pub use index::{normalize, MatchQuality, NameHit, NameIndex};
pub use parser::{parse_query, QueryAst, Relation};

use crate::model::{EdgeKind, ScholarId};
use crate::store::{Direction, KnowledgeGraph};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerStatus {
    Ok,
    /// No scholar matches the name.
    NoMatch,
    /// The subject resolved but has no edges of the requested relation.
    NoRelation,
    /// Several scholars match equally well; `matches` lists them.
    Ambiguous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelatedScholar {
    pub scholar_id: ScholarId,
    pub name: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryAnswer {
    pub query: QueryAst,
    pub status: AnswerStatus,
    /// Name matches: search results, or the candidate subjects.
    pub matches: Vec<NameHit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<NameHit>,
    pub related: Vec<RelatedScholar>,
}

impl Relation {
    /// Edge kind and direction followed from the subject.
    pub fn edge(self) -> (EdgeKind, Direction) {
        match self {
            Relation::Advisor => (EdgeKind::AdvisorOf, Direction::In),
            Relation::Advisees => (EdgeKind::AdvisorOf, Direction::Out),
            Relation::Collaborators => (EdgeKind::Coauthor, Direction::Both),
            Relation::Citers => (EdgeKind::Cites, Direction::In),
            Relation::Team => (EdgeKind::Team, Direction::Out),
        }
    }
}

/// Picks the subject of a relation query among name matches: a unique
/// full-name match wins, otherwise the best quality tier must be a single
/// scholar.
fn resolve<'a>(index: &NameIndex, name: &str, hits: &'a [NameHit]) -> Result<&'a NameHit, Vec<NameHit>> {
    let full = index.exact_full_name(name);
    if full.len() == 1 {
        if let Some(h) = hits.iter().find(|h| h.scholar_id == full[0]) {
            return Ok(h);
        }
    }
    let tier: Vec<&NameHit> = hits.iter().take_while(|h| h.quality == hits[0].quality).collect();
    match tier.as_slice() {
        [one] => Ok(one),
        many => Err(many.iter().map(|h| (*h).clone()).collect()),
    }
}

pub fn answer(ast: &QueryAst, graph: &KnowledgeGraph, index: &NameIndex, limit: usize) -> QueryAnswer {
    let mut out = QueryAnswer {
        query: ast.clone(),
        status: AnswerStatus::Ok,
        matches: Vec::new(),
        subject: None,
        related: Vec::new(),
    };
    match ast {
        QueryAst::NameSearch { name } => {
            out.matches = index.fuzzy_lookup(name, limit);
            if out.matches.is_empty() {
                out.status = AnswerStatus::NoMatch;
            }
        }
        QueryAst::RelationQuery { name, relation } => {
            let hits = index.fuzzy_lookup(name, usize::MAX);
            if hits.is_empty() {
                out.status = AnswerStatus::NoMatch;
                return out;
            }
            match resolve(index, name, &hits) {
                Err(candidates) => {
                    out.status = AnswerStatus::Ambiguous;
                    out.matches = candidates;
                }
                Ok(subject) => {
                    let (kind, dir) = relation.edge();
                    out.related = graph
                        .neighbors(&subject.scholar_id, kind, dir)
                        .unwrap_or_default()
                        .into_iter()
                        .take(limit)
                        .map(|(id, weight)| RelatedScholar {
                            name: index.display_name(&id).unwrap_or_default().to_owned(),
                            scholar_id: id,
                            weight,
                        })
                        .collect();
                    if out.related.is_empty() {
                        out.status = AnswerStatus::NoRelation;
                    }
                    out.matches = vec![subject.clone()];
                    out.subject = Some(subject.clone());
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geo::GeoTable;
    use crate::mine::{build_graph, MineConfig};

    fn run(text: &str) -> QueryAnswer {
        let (g, _) = build_graph(&fixtures::f1_records(), GeoTable::new(), &MineConfig::default()).unwrap();
        let idx = NameIndex::build(&g);
        answer(&parse_query(text), &g, &idx, 20)
    }

    fn related(a: &QueryAnswer) -> Vec<&str> {
        a.related.iter().map(|r| r.scholar_id.as_str()).collect()
    }

    #[test]
    fn alices_advisor_is_bob() {
        let a = run("Alice's advisor");
        assert_eq!(a.status, AnswerStatus::Ok);
        assert_eq!(related(&a), vec!["s2"]);
        assert_eq!(a.related[0].name, "Bob");
    }

    #[test]
    fn bob_has_no_advisor() {
        let a = run("Bob's advisor");
        assert_eq!(a.status, AnswerStatus::NoRelation);
        assert!(a.related.is_empty());
        assert_eq!(a.subject.unwrap().scholar_id.as_str(), "s2");
    }

    #[test]
    fn collaborators_of_alice() {
        assert_eq!(related(&run("collaborators of Alice")), vec!["s2", "s3"]);
    }

    #[test]
    fn unknown_name() {
        assert_eq!(run("Zed's team").status, AnswerStatus::NoMatch);
        assert_eq!(run("qqqq").status, AnswerStatus::NoMatch);
    }

    #[test]
    fn ambiguous_names_return_candidates() {
        let recs = vec![
            fixtures::record("a", 2000, &[("x1", "Lee Wang", "I")], &[]),
            fixtures::record("b", 2000, &[("x2", "Lee Chen", "I")], &[]),
        ];
        let (g, _) = build_graph(&recs, GeoTable::new(), &MineConfig::default()).unwrap();
        let idx = NameIndex::build(&g);
        let a = answer(&parse_query("Lee's advisor"), &g, &idx, 10);
        assert_eq!(a.status, AnswerStatus::Ambiguous);
        assert_eq!(a.matches.len(), 2);
        let b = answer(&parse_query("Lee Chen's advisor"), &g, &idx, 10);
        assert_eq!(b.subject.unwrap().scholar_id.as_str(), "x2");
    }
}
