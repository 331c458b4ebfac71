//! Advisor recommendation with explained scores.
//!
//! Candidates are scholars with at least one advisee. Each criterion the
//! student sets contributes its weight when satisfied; the match score is the
//! satisfied share of the total weight of set criteria, and every satisfied
//! criterion produces one human-readable reason.

use crate::model::{EdgeKind, ScholarId};
use crate::ranking::{compute_measure, Measure, MeasureMap, RankingCache};
use crate::store::{Direction, KnowledgeGraph};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

const PREVIEW_LEN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CriterionWeights {
    pub field: f64,
    pub advisees: f64,
    pub citations: f64,
    pub institution: f64,
}

impl Default for CriterionWeights {
    fn default() -> Self {
        Self { field: 1.0, advisees: 1.0, citations: 1.0, institution: 1.0 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreferenceForm {
    pub field_tags: Vec<String>,
    pub min_advisees: Option<u64>,
    pub min_citations: Option<u64>,
    pub institution: Option<String>,
    pub weights: CriterionWeights,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Field,
    Advisees,
    Citations,
    Institution,
}

impl PreferenceForm {
    /// Set criteria with their weights, in fixed order.
    pub fn criteria(&self) -> Vec<(Criterion, f64)> {
        let mut out = Vec::new();
        if !self.field_tags.is_empty() {
            out.push((Criterion::Field, self.weights.field));
        }
        if self.min_advisees.is_some() {
            out.push((Criterion::Advisees, self.weights.advisees));
        }
        if self.min_citations.is_some() {
            out.push((Criterion::Citations, self.weights.citations));
        }
        if self.institution.as_deref().is_some_and(|s| !s.trim().is_empty()) {
            out.push((Criterion::Institution, self.weights.institution));
        }
        out
    }

    pub fn weight_of(&self, c: Criterion) -> f64 {
        match c {
            Criterion::Field => self.weights.field,
            Criterion::Advisees => self.weights.advisees,
            Criterion::Citations => self.weights.citations,
            Criterion::Institution => self.weights.institution,
        }
    }

    pub fn validate(&self) -> Result<(), RecommendError> {
        let criteria = self.criteria();
        if criteria.is_empty() {
            return Err(RecommendError::EmptyForm);
        }
        let w = &self.weights;
        if [w.field, w.advisees, w.citations, w.institution].iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(RecommendError::BadWeights("weights must be finite and non-negative".into()));
        }
        if criteria.iter().map(|(_, w)| w).sum::<f64>() <= 0.0 {
            return Err(RecommendError::BadWeights("weights of the set criteria are all zero".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum RecommendError {
    #[error("preference form sets no criteria")]
    EmptyForm,
    #[error("invalid criterion weights: {0}")]
    BadWeights(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreviewNeighbor {
    pub scholar_id: ScholarId,
    pub weight: f64,
}

/// Compact ego-network summary shown next to each recommendation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoPreview {
    pub advisors: Vec<PreviewNeighbor>,
    pub advisees: Vec<PreviewNeighbor>,
    /// Strongest co-authors, at most ten.
    pub coauthors: Vec<PreviewNeighbor>,
    pub coauthor_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub scholar_id: ScholarId,
    pub name: String,
    pub match_score: f64,
    pub advisor_influence: f64,
    pub reasons: Vec<String>,
    /// The criterion behind each reason, index-aligned with `reasons`.
    pub satisfied: Vec<Criterion>,
    pub ego_preview: EgoPreview,
}

impl Recommendation {
    /// Score implied by the satisfied criteria alone.
    pub fn score_from_reasons(&self, form: &PreferenceForm) -> f64 {
        let total: f64 = form.criteria().iter().map(|(_, w)| w).sum();
        let got: f64 = form
            .criteria()
            .iter()
            .filter(|(c, _)| self.satisfied.contains(c))
            .map(|(_, w)| w)
            .sum();
        got / total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecommendStatus {
    Ok,
    /// No scholar in the graph has an advisee.
    NoCandidates,
    /// Candidates exist but none satisfies any criterion.
    NoMatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendationSet {
    pub status: RecommendStatus,
    pub items: Vec<Recommendation>,
}

/// Per-scholar measure values consulted by the matcher.
#[derive(Debug, Clone, Default)]
pub struct MatchInputs {
    pub advisees: MeasureMap,
    pub citations: MeasureMap,
    pub influence: MeasureMap,
}

impl MatchInputs {
    pub fn compute(graph: &KnowledgeGraph) -> Self {
        Self {
            advisees: compute_measure(Measure::Advisees, graph),
            citations: compute_measure(Measure::Citations, graph),
            influence: compute_measure(Measure::AdvisorInfluence, graph),
        }
    }

    /// Same values read through the ranking cache (missing entries are 0).
    pub fn from_cache(cache: &RankingCache, graph: &KnowledgeGraph) -> Self {
        let read = |m: Measure| -> MeasureMap {
            cache.get(m, graph).entries.iter().map(|e| (e.scholar_id.clone(), e.value)).collect()
        };
        Self {
            advisees: read(Measure::Advisees),
            citations: read(Measure::Citations),
            influence: read(Measure::AdvisorInfluence),
        }
    }
}

fn value(map: &MeasureMap, id: &ScholarId) -> f64 {
    map.get(id).copied().unwrap_or(0.0)
}

fn preview(graph: &KnowledgeGraph, id: &ScholarId) -> EgoPreview {
    let list = |kind, dir| -> Vec<PreviewNeighbor> {
        graph
            .neighbors(id, kind, dir)
            .unwrap_or_default()
            .into_iter()
            .map(|(scholar_id, weight)| PreviewNeighbor { scholar_id, weight })
            .collect()
    };
    let mut coauthors = list(EdgeKind::Coauthor, Direction::Both);
    let coauthor_count = coauthors.len();
    coauthors.truncate(PREVIEW_LEN);
    EgoPreview {
        advisors: list(EdgeKind::AdvisorOf, Direction::In),
        advisees: list(EdgeKind::AdvisorOf, Direction::Out),
        coauthors,
        coauthor_count,
    }
}

pub fn recommend_advisors(
    form: &PreferenceForm,
    graph: &KnowledgeGraph,
    inputs: &MatchInputs,
    limit: usize,
) -> Result<RecommendationSet, RecommendError> {
    form.validate()?;
    let criteria = form.criteria();
    let total: f64 = criteria.iter().map(|(_, w)| w).sum();
    let wanted_fields: BTreeSet<&str> = form.field_tags.iter().map(String::as_str).collect();
    let wanted_inst = form.institution.as_deref().map(str::trim);

    let mut any_candidate = false;
    let mut items = Vec::new();
    for s in graph.scholars() {
        let id = &s.scholar_id;
        let advisees = value(&inputs.advisees, id);
        let influence = value(&inputs.influence, id);
        if advisees < 1.0 && influence <= 0.0 {
            continue;
        }
        any_candidate = true;
        let citations = value(&inputs.citations, id);

        let mut reasons = Vec::new();
        let mut satisfied = Vec::new();
        let mut got = 0.0;
        for (criterion, weight) in &criteria {
            let reason = match criterion {
                Criterion::Field => {
                    let fields: BTreeSet<&str> = s
                        .pub_ids
                        .iter()
                        .filter_map(|p| graph.publication(p))
                        .flat_map(|p| p.fields.iter().map(String::as_str))
                        .collect();
                    let common: Vec<&str> = fields.intersection(&wanted_fields).copied().collect();
                    (!common.is_empty()).then(|| format!("publishes in {}", common.join(", ")))
                }
                Criterion::Advisees => {
                    let min = form.min_advisees.unwrap_or(0);
                    (advisees >= min as f64).then(|| format!("has {advisees} advisee(s) ≥ {min}"))
                }
                Criterion::Citations => {
                    let min = form.min_citations.unwrap_or(0);
                    (citations >= min as f64).then(|| format!("cited by {citations} publication(s) ≥ {min}"))
                }
                Criterion::Institution => {
                    let inst = wanted_inst.unwrap_or("");
                    (s.institution == inst).then(|| format!("works at {inst}"))
                }
            };
            if let Some(r) = reason {
                reasons.push(r);
                satisfied.push(*criterion);
                got += weight;
            }
        }
        if satisfied.is_empty() {
            continue;
        }
        items.push(Recommendation {
            scholar_id: id.clone(),
            name: s.name.clone(),
            match_score: got / total,
            advisor_influence: influence,
            reasons,
            satisfied,
            ego_preview: preview(graph, id),
        });
    }
    items.sort_by(|a, b| {
        b.match_score
            .total_cmp(&a.match_score)
            .then_with(|| b.advisor_influence.total_cmp(&a.advisor_influence))
            .then_with(|| a.scholar_id.cmp(&b.scholar_id))
    });
    items.truncate(limit);
    let status = if !any_candidate {
        RecommendStatus::NoCandidates
    } else if items.is_empty() {
        RecommendStatus::NoMatch
    } else {
        RecommendStatus::Ok
    };
    Ok(RecommendationSet { status, items })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geo::GeoTable;
    use crate::mine::{build_graph, MineConfig};

    fn f1() -> KnowledgeGraph {
        build_graph(&fixtures::f1_records(), GeoTable::new(), &MineConfig::default()).unwrap().0
    }

    fn run(form: &PreferenceForm) -> RecommendationSet {
        let g = f1();
        recommend_advisors(form, &g, &MatchInputs::compute(&g), 10).unwrap()
    }

    #[test]
    fn min_advisees_one() {
        let form = PreferenceForm { min_advisees: Some(1), ..Default::default() };
        let set = run(&form);
        // s1 (advises s3) and s2 (advises s1) tie on score and influence
        let ids: Vec<&str> = set.items.iter().map(|r| r.scholar_id.as_str()).collect();
        assert_eq!(ids, vec!["s1", "s2"]);
        let bob = &set.items[1];
        assert_eq!(bob.match_score, 1.0);
        assert_eq!(bob.reasons, vec!["has 1 advisee(s) ≥ 1".to_string()]);
        assert_eq!(bob.ego_preview.advisees[0].scholar_id.as_str(), "s1");
    }

    #[test]
    fn unsatisfiable_citations() {
        let set = run(&PreferenceForm { min_citations: Some(1_000_000), ..Default::default() });
        assert!(set.items.is_empty());
        assert_eq!(set.status, RecommendStatus::NoMatch);
    }

    #[test]
    fn half_score_with_one_reason() {
        let form = PreferenceForm { min_advisees: Some(1), institution: Some("Nowhere".into()), ..Default::default() };
        let set = run(&form);
        for r in &set.items {
            assert_eq!(r.match_score, 0.5);
            assert_eq!(r.reasons.len(), 1);
            assert_eq!(r.score_from_reasons(&form), r.match_score);
        }
    }

    #[test]
    fn institution_and_fields() {
        let form = PreferenceForm {
            field_tags: vec!["CS".into()],
            institution: Some("I2".into()),
            ..Default::default()
        };
        let set = run(&form);
        assert_eq!(set.items[0].scholar_id.as_str(), "s2");
        assert_eq!(set.items[0].reasons, vec!["publishes in CS".to_string(), "works at I2".to_string()]);
        assert_eq!(set.items[1].match_score, 0.5);
    }

    #[test]
    fn form_validation() {
        assert_eq!(PreferenceForm::default().validate(), Err(RecommendError::EmptyForm));
        let zero = PreferenceForm {
            min_advisees: Some(0),
            weights: CriterionWeights { advisees: 0.0, ..Default::default() },
            ..Default::default()
        };
        assert!(matches!(zero.validate(), Err(RecommendError::BadWeights(_))));
        let neg = PreferenceForm {
            min_advisees: Some(0),
            weights: CriterionWeights { field: -1.0, ..Default::default() },
            ..Default::default()
        };
        assert!(neg.validate().is_err());
    }

    #[test]
    fn no_candidates_status() {
        let recs = vec![fixtures::record("a", 2000, &[("x", "X", "I")], &[])];
        let (g, _) = build_graph(&recs, GeoTable::new(), &MineConfig::default()).unwrap();
        let set = recommend_advisors(
            &PreferenceForm { min_advisees: Some(0), ..Default::default() },
            &g,
            &MatchInputs::compute(&g),
            5,
        )
        .unwrap();
        assert_eq!(set.status, RecommendStatus::NoCandidates);
    }
}
