//! Token/prefix name index with single-edit typo tolerance.

use crate::model::{EdgeKind, ScholarId};
use crate::store::{Direction, KnowledgeGraph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Bound;

/// Fragments shorter than this never match by edit distance.
pub const MIN_FUZZY_LEN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchQuality {
    Exact,
    Prefix,
    Edit1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NameHit {
    pub scholar_id: ScholarId,
    pub name: String,
    pub quality: MatchQuality,
    /// Number of collaborators, the popularity tie-breaker.
    pub collaborators: usize,
}

/// Lowercased alphanumeric tokens of a name.
pub fn normalize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Levenshtein distance over chars, with early exit once `bound` is exceeded.
pub fn edit_distance_within(a: &str, b: &str, bound: usize) -> Option<usize> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.len().abs_diff(b.len()) > bound {
        return None;
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        let mut row_min = cur[0];
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
            row_min = row_min.min(cur[j + 1]);
        }
        if row_min > bound {
            return None;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let d = prev[b.len()];
    (d <= bound).then_some(d)
}

#[derive(Debug, Clone, Default)]
pub struct NameIndex {
    tokens: BTreeMap<String, BTreeSet<ScholarId>>,
    full_names: HashMap<ScholarId, String>,
    display: HashMap<ScholarId, String>,
    collaborators: HashMap<ScholarId, usize>,
}

impl NameIndex {
    pub fn build(graph: &KnowledgeGraph) -> Self {
        let mut index = Self::default();
        for s in graph.scholars() {
            let toks = normalize(&s.name);
            for t in &toks {
                index.tokens.entry(t.clone()).or_default().insert(s.scholar_id.clone());
            }
            index.full_names.insert(s.scholar_id.clone(), toks.join(" "));
            index.display.insert(s.scholar_id.clone(), s.name.clone());
            index
                .collaborators
                .insert(s.scholar_id.clone(), graph.degree(&s.scholar_id, EdgeKind::Coauthor, Direction::Both));
        }
        index
    }

    pub fn len(&self) -> usize {
        self.display.len()
    }

    pub fn is_empty(&self) -> bool {
        self.display.is_empty()
    }

    pub fn display_name(&self, id: &ScholarId) -> Option<&str> {
        self.display.get(id).map(String::as_str)
    }

    /// Best quality per scholar for one normalized fragment token.
    fn token_matches(&self, frag: &str) -> HashMap<&ScholarId, MatchQuality> {
        let mut best: HashMap<&ScholarId, MatchQuality> = HashMap::new();
        fn offer<'a>(best: &mut HashMap<&'a ScholarId, MatchQuality>, ids: &'a BTreeSet<ScholarId>, q: MatchQuality) {
            for id in ids {
                let slot = best.entry(id).or_insert(q);
                *slot = (*slot).min(q);
            }
        }
        let from = (Bound::Included(frag), Bound::Unbounded);
        for (tok, ids) in self.tokens.range::<str, _>(from) {
            if !tok.starts_with(frag) {
                break;
            }
            offer(&mut best, ids, if tok == frag { MatchQuality::Exact } else { MatchQuality::Prefix });
        }
        if frag.chars().count() >= MIN_FUZZY_LEN {
            for (tok, ids) in &self.tokens {
                if tok != frag && edit_distance_within(tok, frag, 1).is_some() {
                    offer(&mut best, ids, MatchQuality::Edit1);
                }
            }
        }
        best
    }

    /// Ranked matches: every fragment token must match some name token.
    /// Order is (quality, collaborators desc, id asc); the overall quality is
    /// the weakest per-token quality.
    pub fn fuzzy_lookup(&self, fragment: &str, limit: usize) -> Vec<NameHit> {
        let frags = normalize(fragment);
        if frags.is_empty() || limit == 0 {
            return Vec::new();
        }
        let mut acc: Option<HashMap<&ScholarId, MatchQuality>> = None;
        for f in &frags {
            let m = self.token_matches(f);
            acc = Some(match acc {
                None => m,
                Some(prev) => prev
                    .into_iter()
                    .filter_map(|(id, q)| m.get(id).map(|q2| (id, q.max(*q2))))
                    .collect(),
            });
        }
        let mut hits: Vec<NameHit> = acc
            .unwrap_or_default()
            .into_iter()
            .map(|(id, quality)| NameHit {
                scholar_id: id.clone(),
                name: self.display[id].clone(),
                quality,
                collaborators: self.collaborators.get(id).copied().unwrap_or(0),
            })
            .collect();
        hits.sort_by(|a, b| {
            a.quality
                .cmp(&b.quality)
                .then_with(|| b.collaborators.cmp(&a.collaborators))
                .then_with(|| a.scholar_id.cmp(&b.scholar_id))
        });
        hits.truncate(limit);
        hits
    }

    /// Scholars whose whole normalized name equals the normalized text.
    pub fn exact_full_name(&self, text: &str) -> Vec<ScholarId> {
        let key = normalize(text).join(" ");
        let mut ids: Vec<ScholarId> =
            self.full_names.iter().filter(|(_, n)| **n == key).map(|(id, _)| id.clone()).collect();
        ids.sort();
        ids
    }
}
