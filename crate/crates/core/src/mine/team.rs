use crate::model::{EdgeKind, RelEdge, ScholarId};
use std::collections::{BTreeMap, BTreeSet};

pub const DEFAULT_TEAM_THRESHOLD: f64 = 3.0;

/// TEAM(x → m) for every advisee `m` of `x` and every co-author `m` whose
/// joint-publication weight with `x` reaches `threshold`. Weight is 1.
pub fn mine_teams<'a>(edges: impl IntoIterator<Item = &'a RelEdge>, threshold: f64) -> Vec<RelEdge> {
    let mut teams: BTreeMap<&ScholarId, BTreeSet<&ScholarId>> = BTreeMap::new();
    for e in edges {
        match e.kind {
            EdgeKind::AdvisorOf => {
                teams.entry(&e.src).or_default().insert(&e.dst);
            }
            EdgeKind::Coauthor if e.weight >= threshold => {
                teams.entry(&e.src).or_default().insert(&e.dst);
                teams.entry(&e.dst).or_default().insert(&e.src);
            }
            _ => {}
        }
    }
    teams
        .into_iter()
        .flat_map(|(owner, members)| {
            members
                .into_iter()
                .map(move |m| RelEdge::new(owner.clone(), m.clone(), EdgeKind::Team, 1.0))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: &str, b: &str, kind: EdgeKind, w: f64) -> RelEdge {
        RelEdge::new(a.into(), b.into(), kind, w)
    }

    fn f1_edges() -> Vec<RelEdge> {
        vec![
            e("s1", "s2", EdgeKind::Coauthor, 2.0),
            e("s1", "s3", EdgeKind::Coauthor, 1.0),
            e("s2", "s1", EdgeKind::AdvisorOf, 0.82),
        ]
    }

    fn pairs(v: Vec<RelEdge>) -> Vec<(String, String)> {
        v.into_iter().map(|e| (e.src.0, e.dst.0)).collect()
    }

    #[test]
    fn threshold_three_keeps_advisees_only() {
        assert_eq!(pairs(mine_teams(&f1_edges(), 3.0)), vec![("s2".into(), "s1".into())]);
    }

    #[test]
    fn threshold_one_mirrors_coauthors() {
        let got = pairs(mine_teams(&f1_edges(), 1.0));
        let want: Vec<(String, String)> = [("s1", "s2"), ("s1", "s3"), ("s2", "s1"), ("s3", "s1")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn no_advisors_infinite_threshold() {
        let edges: Vec<RelEdge> = f1_edges().into_iter().filter(|e| e.kind == EdgeKind::Coauthor).collect();
        assert!(mine_teams(&edges, f64::INFINITY).is_empty());
    }
}
