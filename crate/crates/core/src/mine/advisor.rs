//! Advisor-advisee inference over the co-authorship network.
//!
//! For a scholar `s` and each co-author `a`, a four-feature vector is scored
//! by a logistic model; `a` becomes `s`'s advisor when it is the single best
//! candidate and its score clears the threshold.
//!
//! | feature       | value                                                        |
//! |---------------|--------------------------------------------------------------|
//! | age gap       | `clamp(first_year(s) - first_year(a), 0, 30) / 30`           |
//! | early share   | share of `s`'s pubs in its first 5 career years that list `a` |
//! | joint span    | `clamp(last_joint - first_joint + 1, 0, 10) / 10`            |
//! | prior record  | 1 if `a` published before the first joint year, else 0       |

use super::classifier::{fit_logistic, logistic, FitConfig, FitError, LogisticModel};
use super::coauthor::{joint_index, pair_key, JointIndex};
use crate::model::{EdgeKind, PublicationRecord, RelEdge, Scholar, ScholarId, YearSpan};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

pub const FEATURE_NAMES: [&str; 4] = ["age_gap", "early_share", "joint_span", "prior_record"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdvisorParams {
    pub weights: [f64; 4],
    pub bias: f64,
    pub threshold: f64,
    /// Early-career window in years, counted from the first publication year.
    pub career_window: i32,
    pub age_gap_cap: f64,
    pub span_cap: f64,
}

impl Default for AdvisorParams {
    fn default() -> Self {
        Self {
            weights: [2.0, 3.0, 1.0, 1.0],
            bias: -2.5,
            threshold: 0.5,
            career_window: 5,
            age_gap_cap: 30.0,
            span_cap: 10.0,
        }
    }
}

impl AdvisorParams {
    pub fn validate(&self) -> Result<(), String> {
        if !self.weights.iter().chain([&self.bias]).all(|v| v.is_finite()) {
            return Err("advisor weights and bias must be finite".into());
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(format!("threshold {} must lie in (0, 1)", self.threshold));
        }
        if self.career_window < 1 || self.age_gap_cap <= 0.0 || self.span_cap <= 0.0 {
            return Err("career window and caps must be positive".into());
        }
        Ok(())
    }

    pub fn score(&self, features: &[f64; 4]) -> f64 {
        logistic(self.weights.iter().zip(features).map(|(w, f)| w * f).sum::<f64>() + self.bias)
    }
}

/// One evaluated (advisor, advisee) hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePair {
    pub advisor: ScholarId,
    pub advisee: ScholarId,
    pub first_joint_year: i32,
    pub last_joint_year: i32,
    pub features: [f64; 4],
    pub score: f64,
}

/// Everything the feature extractor needs, indexed once per corpus.
pub struct AdvisorContext<'a> {
    first_year: HashMap<&'a ScholarId, i32>,
    careers: HashMap<&'a ScholarId, Vec<&'a PublicationRecord>>,
    joint: JointIndex,
}

impl<'a> AdvisorContext<'a> {
    pub fn new(records: &'a [PublicationRecord], scholars: impl IntoIterator<Item = &'a Scholar>) -> Self {
        let mut careers: HashMap<&ScholarId, Vec<&PublicationRecord>> = HashMap::new();
        for r in records {
            for a in r.author_ids() {
                careers.entry(a).or_default().push(r);
            }
        }
        for list in careers.values_mut() {
            list.sort_by(|x, y| (x.year, &x.pub_id).cmp(&(y.year, &y.pub_id)));
        }
        let mut first_year: HashMap<&ScholarId, i32> =
            scholars.into_iter().map(|s| (&s.scholar_id, s.first_pub_year)).collect();
        for (id, pubs) in &careers {
            first_year.entry(id).or_insert(pubs[0].year);
        }
        Self { first_year, careers, joint: joint_index(records) }
    }

    /// Features for `advisor` as a candidate advisor of `advisee`; `None`
    /// when the two never co-authored.
    pub fn candidate(&self, advisor: &ScholarId, advisee: &ScholarId, params: &AdvisorParams) -> Option<CandidatePair> {
        if advisor == advisee {
            return None;
        }
        let joint = self.joint.get(&pair_key(advisor, advisee))?;
        let fy_s = *self.first_year.get(advisee)?;
        let fy_a = *self.first_year.get(advisor)?;

        let age_gap = ((fy_s - fy_a) as f64).clamp(0.0, params.age_gap_cap) / params.age_gap_cap;

        let window_end = fy_s + params.career_window - 1;
        let early: Vec<&&PublicationRecord> = self.careers[advisee]
            .iter()
            .take_while(|p| p.year <= window_end)
            .filter(|p| p.year >= fy_s)
            .collect();
        let with_advisor = early.iter().filter(|p| p.has_author(advisor)).count();
        let early_share = if early.is_empty() { 0.0 } else { with_advisor as f64 / early.len() as f64 };

        let span = (joint.years.end - joint.years.start + 1) as f64;
        let joint_span = span.clamp(0.0, params.span_cap) / params.span_cap;

        let prior_record = if fy_a < joint.years.start { 1.0 } else { 0.0 };

        let features = [age_gap, early_share, joint_span, prior_record];
        Some(CandidatePair {
            advisor: advisor.clone(),
            advisee: advisee.clone(),
            first_joint_year: joint.years.start,
            last_joint_year: joint.years.end,
            features,
            score: params.score(&features),
        })
    }

    /// Both directions of every co-author pair.
    pub fn all_candidates(&self, params: &AdvisorParams) -> Vec<CandidatePair> {
        let mut out = Vec::with_capacity(self.joint.len() * 2);
        for (u, v) in self.joint.keys() {
            out.extend(self.candidate(u, v, params));
            out.extend(self.candidate(v, u, params));
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct AdvisorOutcome {
    pub edges: Vec<RelEdge>,
    /// Every evaluated candidate, in (advisee, advisor) order.
    pub audit: Vec<CandidatePair>,
    /// Advisor cycles found among the emitted edges, each listed from its
    /// smallest id following advisee → advisor links.
    pub cycles: Vec<Vec<ScholarId>>,
}

pub fn mine_advisors<'a>(
    records: &'a [PublicationRecord],
    scholars: impl IntoIterator<Item = &'a Scholar>,
    params: &AdvisorParams,
) -> AdvisorOutcome {
    let ctx = AdvisorContext::new(records, scholars);
    let mut audit = ctx.all_candidates(params);
    audit.sort_by(|x, y| (&x.advisee, &x.advisor).cmp(&(&y.advisee, &y.advisor)));

    let mut best: BTreeMap<&ScholarId, &CandidatePair> = BTreeMap::new();
    for c in audit.iter().filter(|c| c.score >= params.threshold) {
        // audit is advisor-ascending within an advisee, so strict `>` keeps the smaller id on ties
        best.entry(&c.advisee)
            .and_modify(|cur| {
                if c.score > cur.score {
                    *cur = c;
                }
            })
            .or_insert(c);
    }
    let edges: Vec<RelEdge> = best
        .values()
        .map(|c| {
            RelEdge::new(c.advisor.clone(), c.advisee.clone(), EdgeKind::AdvisorOf, c.score)
                .with_years(Some(YearSpan { start: c.first_joint_year, end: c.last_joint_year }))
        })
        .collect();
    let cycles = find_cycles(&edges);
    AdvisorOutcome { edges, audit, cycles }
}

/// Cycles in an advisor forest where every advisee has at most one advisor.
/// Each cycle starts at its smallest id and follows advisee-to-advisor links.
pub fn find_cycles(edges: &[RelEdge]) -> Vec<Vec<ScholarId>> {
    let parent: BTreeMap<&ScholarId, &ScholarId> = edges
        .iter()
        .filter(|e| e.kind == EdgeKind::AdvisorOf)
        .map(|e| (&e.dst, &e.src))
        .collect();
    // 0 = unvisited, 1 = on current path, 2 = done
    let mut state: HashMap<&ScholarId, u8> = HashMap::new();
    let mut cycles = Vec::new();
    for &start in parent.keys() {
        let mut path = Vec::new();
        let mut node = start;
        loop {
            match state.get(node).copied().unwrap_or(0) {
                2 => break,
                1 => {
                    let pos = path.iter().position(|n| *n == node).expect("node on path");
                    let mut cycle: Vec<ScholarId> = path[pos..].iter().map(|n: &&ScholarId| (*n).clone()).collect();
                    let min = cycle.iter().enumerate().min_by_key(|(_, id)| *id).map(|(i, _)| i).unwrap();
                    cycle.rotate_left(min);
                    cycles.push(cycle);
                    break;
                }
                _ => {
                    state.insert(node, 1);
                    path.push(node);
                    match parent.get(node) {
                        Some(next) => node = next,
                        None => break,
                    }
                }
            }
        }
        for n in path {
            state.insert(n, 2);
        }
    }
    cycles
}

/// A ground-truth line `advisor<TAB>advisee<TAB>label`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPair {
    pub advisor: ScholarId,
    pub advisee: ScholarId,
    pub label: bool,
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("labeled pairs line {line}: {reason}")]
pub struct LabelParseError {
    pub line: usize,
    pub reason: String,
}

pub fn parse_labeled_pairs(text: &str) -> Result<Vec<LabeledPair>, LabelParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        let err = |reason: String| LabelParseError { line, reason };
        if cols.len() != 3 {
            return Err(err(format!("expected 3 tab-separated columns, got {}", cols.len())));
        }
        let label = match cols[2].trim() {
            "1" => true,
            "0" => false,
            other => return Err(err(format!("label must be 0 or 1, got `{other}`"))),
        };
        if cols[0].is_empty() || cols[1].is_empty() || cols[0] == cols[1] {
            return Err(err("advisor and advisee must be distinct non-empty ids".into()));
        }
        out.push(LabeledPair { advisor: cols[0].into(), advisee: cols[1].into(), label });
    }
    Ok(out)
}

pub fn format_labeled_pairs(pairs: &[LabeledPair]) -> String {
    pairs
        .iter()
        .map(|p| format!("{}\t{}\t{}\n", p.advisor, p.advisee, u8::from(p.label)))
        .collect()
}

/// Attaches features to labeled pairs. Pairs that never co-authored have no
/// features and are returned separately.
pub fn labeled_features(
    ctx: &AdvisorContext<'_>,
    pairs: &[LabeledPair],
    params: &AdvisorParams,
) -> (Vec<([f64; 4], bool)>, Vec<LabeledPair>) {
    let mut samples = Vec::with_capacity(pairs.len());
    let mut skipped = Vec::new();
    for p in pairs {
        match ctx.candidate(&p.advisor, &p.advisee, params) {
            Some(c) => samples.push((c.features, p.label)),
            None => skipped.push(p.clone()),
        }
    }
    (samples, skipped)
}

/// Fits advisor-scoring weights and bias with logistic regression.
pub fn fit_advisor_weights(labeled: &[([f64; 4], bool)], config: &FitConfig) -> Result<([f64; 4], f64), FitError> {
    let samples: Vec<(Vec<f64>, bool)> = labeled.iter().map(|(f, y)| (f.to_vec(), *y)).collect();
    let LogisticModel { weights, bias } = fit_logistic(&samples, config)?;
    Ok(([weights[0], weights[1], weights[2], weights[3]], bias))
}
