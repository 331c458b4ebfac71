use crate::geo::GeoPoint;
use crate::model::{EdgeKind, ScholarId};
use crate::store::{Direction, GraphError, KnowledgeGraph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Inclusive year window for activity series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRange {
    pub from: i32,
    pub to: i32,
}

impl Default for YearRange {
    fn default() -> Self {
        Self { from: 1980, to: 2017 }
    }
}

impl YearRange {
    pub fn contains(&self, year: i32) -> bool {
        (self.from..=self.to).contains(&year)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoCollaborator {
    pub collaborator: ScholarId,
    pub institution: String,
    pub lat: f64,
    pub lng: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollabProfile {
    pub scholar_id: ScholarId,
    /// Collaborator → joint-publication count (the COAUTHOR edge weight).
    pub weights: BTreeMap<ScholarId, f64>,
    pub geo_points: Vec<GeoCollaborator>,
    /// Collaborators whose institution has no coordinates.
    pub missing_geo: Vec<ScholarId>,
    /// Year → number of distinct collaborators with a joint publication that
    /// year. Years without any are absent.
    pub yearly_counts: BTreeMap<i32, usize>,
    pub range: YearRange,
}

pub fn collab_profile(graph: &KnowledgeGraph, id: &ScholarId, range: YearRange) -> Result<CollabProfile, GraphError> {
    let scholar = graph.scholar(id).ok_or_else(|| GraphError::UnknownScholar(id.clone()))?;
    let weights: BTreeMap<ScholarId, f64> =
        graph.neighbors(id, EdgeKind::Coauthor, Direction::Both)?.into_iter().collect();

    let mut geo_points = Vec::new();
    let mut missing_geo = Vec::new();
    for collaborator in weights.keys() {
        let inst = graph.scholar(collaborator).map(|s| s.institution.as_str()).unwrap_or("");
        match graph.geo_point(inst) {
            Some(GeoPoint { lat, lng }) => geo_points.push(GeoCollaborator {
                collaborator: collaborator.clone(),
                institution: inst.to_owned(),
                lat,
                lng,
            }),
            None => missing_geo.push(collaborator.clone()),
        }
    }

    let mut active: BTreeMap<i32, BTreeSet<&ScholarId>> = BTreeMap::new();
    for pid in &scholar.pub_ids {
        let Some(p) = graph.publication(pid) else { continue };
        if !range.contains(p.year) {
            continue;
        }
        for a in p.authors.iter().map(|a| &a.id).filter(|a| *a != id) {
            active.entry(p.year).or_default().insert(a);
        }
    }
    Ok(CollabProfile {
        scholar_id: id.clone(),
        weights,
        geo_points,
        missing_geo,
        yearly_counts: active.into_iter().map(|(y, s)| (y, s.len())).collect(),
        range,
    })
}
