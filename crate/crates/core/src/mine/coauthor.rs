use crate::model::{EdgeKind, PublicationRecord, RelEdge, ScholarId, YearSpan};
use std::collections::BTreeMap;

/// Joint-publication statistics for one unordered scholar pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointStats {
    pub count: u32,
    pub years: YearSpan,
}

/// Unordered pair `(lo, hi)` → joint statistics.
pub type JointIndex = BTreeMap<(ScholarId, ScholarId), JointStats>;

pub fn joint_index<'a>(records: impl IntoIterator<Item = &'a PublicationRecord>) -> JointIndex {
    let mut index = JointIndex::new();
    for rec in records {
        let mut ids = rec.author_ids();
        ids.sort();
        for (i, u) in ids.iter().enumerate() {
            for v in &ids[i + 1..] {
                index
                    .entry(((*u).clone(), (*v).clone()))
                    .and_modify(|s| {
                        s.count += 1;
                        s.years = s.years.include(rec.year);
                    })
                    .or_insert(JointStats { count: 1, years: YearSpan::single(rec.year) });
            }
        }
    }
    index
}

pub fn pair_key(a: &ScholarId, b: &ScholarId) -> (ScholarId, ScholarId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// COAUTHOR edges weighted by the number of joint publications.
pub fn mine_coauthors<'a>(records: impl IntoIterator<Item = &'a PublicationRecord>) -> Vec<RelEdge> {
    joint_index(records)
        .into_iter()
        .map(|((u, v), s)| RelEdge::new(u, v, EdgeKind::Coauthor, s.count as f64).with_years(Some(s.years)))
        .collect()
}
