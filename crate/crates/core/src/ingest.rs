//! Line-record corpus ingestion.
//!
//! Each non-blank line is one JSON object:
//!
//! ```text
//! {"id":"p2","title":"...","year":2010,"venue":null,
//!  "authors":[{"id":"s1","name":"Alice","inst":"I1"}],"refs":["p1"],"fields":["CS"]}
//! ```
//!
//! Malformed lines never abort ingestion; they are returned as diagnostics
//! carrying the 1-based line number.

use crate::model::{PubId, PublicationRecord, Scholar, ScholarId};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::BufRead;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Default, Clone)]
pub struct ParsedCorpus {
    pub records: Vec<PublicationRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Parses a line-delimited corpus. Only I/O failures are fatal.
pub fn parse_corpus<R: BufRead>(reader: R) -> std::io::Result<ParsedCorpus> {
    let mut out = ParsedCorpus::default();
    let mut seen: HashSet<PubId> = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(&line) {
            Ok(rec) => {
                if !seen.insert(rec.pub_id.clone()) {
                    out.diagnostics.push(Diagnostic {
                        line: lineno,
                        message: format!("duplicate publication id `{}`", rec.pub_id),
                    });
                    continue;
                }
                out.records.push(rec);
            }
            Err(message) => out.diagnostics.push(Diagnostic { line: lineno, message }),
        }
    }
    Ok(out)
}

pub fn parse_corpus_str(text: &str) -> ParsedCorpus {
    parse_corpus(text.as_bytes()).expect("reading from memory cannot fail")
}

fn parse_line(line: &str) -> Result<PublicationRecord, String> {
    let rec: PublicationRecord =
        serde_json::from_str(line).map_err(|e| format!("malformed record: {e}"))?;
    validate(&rec)?;
    Ok(rec)
}

pub fn validate(rec: &PublicationRecord) -> Result<(), String> {
    if rec.pub_id.as_str().is_empty() {
        return Err("empty publication id".into());
    }
    if rec.authors.is_empty() {
        return Err(format!("publication `{}` has no authors", rec.pub_id));
    }
    if let Some(a) = rec.authors.iter().find(|a| a.id.as_str().is_empty()) {
        return Err(format!("publication `{}` has an author with empty id ({:?})", rec.pub_id, a.name));
    }
    if !(PublicationRecord::MIN_YEAR..=PublicationRecord::MAX_YEAR).contains(&rec.year) {
        return Err(format!("publication `{}` has year {} outside [1900, 2100]", rec.pub_id, rec.year));
    }
    if rec.refs.contains(&rec.pub_id) {
        return Err(format!("publication `{}` references itself", rec.pub_id));
    }
    Ok(())
}

/// Exact-tag field filter.
pub fn filter_by_field(records: &[PublicationRecord], field_tag: &str) -> Vec<PublicationRecord> {
    records
        .iter()
        .filter(|r| r.fields.iter().any(|f| f == field_tag))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameConflict {
    pub scholar_id: ScholarId,
    pub kept: String,
    pub variants: Vec<String>,
}

/// Derives the scholar table. Returns scholars sorted by id plus one
/// warning per scholar id that appeared under more than one name.
pub fn build_scholars(records: &[PublicationRecord]) -> (Vec<Scholar>, Vec<NameConflict>) {
    struct Acc<'a> {
        names: BTreeMap<&'a str, usize>,
        // (year, pub_id, institution) of the latest slot seen
        latest_inst: Option<(i32, &'a PubId, &'a str)>,
        pubs: Vec<(i32, &'a PubId)>,
    }

    let mut acc: BTreeMap<&ScholarId, Acc> = BTreeMap::new();
    for rec in records {
        let mut seen_here: HashSet<&ScholarId> = HashSet::new();
        for a in &rec.authors {
            let entry = acc.entry(&a.id).or_insert_with(|| Acc {
                names: BTreeMap::new(),
                latest_inst: None,
                pubs: Vec::new(),
            });
            *entry.names.entry(a.name.as_str()).or_default() += 1;
            let cand = (rec.year, &rec.pub_id, a.institution.as_str());
            if entry.latest_inst.is_none_or(|cur| (cand.0, cand.1) > (cur.0, cur.1)) {
                entry.latest_inst = Some(cand);
            }
            if seen_here.insert(&a.id) {
                entry.pubs.push((rec.year, &rec.pub_id));
            }
        }
    }

    let mut scholars = Vec::with_capacity(acc.len());
    let mut warnings = Vec::new();
    for (id, mut a) in acc {
        // most frequent name, ties to the lexicographically smallest
        let (name, _) = a
            .names
            .iter()
            .max_by(|x, y| x.1.cmp(y.1).then_with(|| y.0.cmp(x.0)))
            .map(|(n, c)| (n.to_string(), *c))
            .expect("at least one name per scholar");
        if a.names.len() > 1 {
            warnings.push(NameConflict {
                scholar_id: id.clone(),
                kept: name.clone(),
                variants: a.names.keys().map(|s| s.to_string()).collect(),
            });
        }
        a.pubs.sort();
        scholars.push(Scholar {
            scholar_id: id.clone(),
            name,
            institution: a.latest_inst.map(|x| x.2.to_owned()).unwrap_or_default(),
            first_pub_year: a.pubs[0].0,
            pub_ids: a.pubs.into_iter().map(|(_, p)| p.clone()).collect(),
        });
    }
    (scholars, warnings)
}

/// References that do not resolve to an ingested publication, as
/// `(citing, missing)` pairs in record order.
pub fn dangling_refs(records: &[PublicationRecord]) -> Vec<(PubId, PubId)> {
    let known: HashSet<&PubId> = records.iter().map(|r| &r.pub_id).collect();
    records
        .iter()
        .flat_map(|r| {
            r.refs
                .iter()
                .filter(|x| !known.contains(x))
                .map(move |x| (r.pub_id.clone(), x.clone()))
        })
        .collect()
}

/// Lookup from publication id to record, used by every miner.
pub fn index_records(records: &[PublicationRecord]) -> HashMap<&PubId, &PublicationRecord> {
    records.iter().map(|r| (&r.pub_id, r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn empty_stream_is_empty() {
        let parsed = parse_corpus_str("");
        assert!(parsed.records.is_empty());
        assert!(parsed.diagnostics.is_empty());
    }

    #[test]
    fn f1_parses_to_four_records() {
        let parsed = parse_corpus_str(&fixtures::f1_corpus_text());
        assert!(parsed.diagnostics.is_empty(), "{:?}", parsed.diagnostics);
        let refs: Vec<(String, Vec<String>)> = parsed
            .records
            .iter()
            .map(|r| (r.pub_id.0.clone(), r.refs.iter().map(|x| x.0.clone()).collect()))
            .collect();
        assert_eq!(
            refs,
            vec![
                ("p1".to_string(), vec![]),
                ("p2".to_string(), vec!["p1".to_string()]),
                ("p3".to_string(), vec!["p2".to_string()]),
                ("p4".to_string(), vec!["p1".to_string(), "p2".to_string()]),
            ]
        );
    }

    #[test]
    fn corrupted_line_three_is_reported() {
        let text = fixtures::f1_corpus_text();
        let mutated: Vec<String> = text
            .lines()
            .enumerate()
            .map(|(i, l)| if i == 2 { l[..l.len() / 2].to_string() } else { l.to_string() })
            .collect();
        let parsed = parse_corpus_str(&mutated.join("\n"));
        assert_eq!(parsed.records.len(), 3);
        assert_eq!(parsed.diagnostics.len(), 1);
        assert_eq!(parsed.diagnostics[0].line, 3);
    }

    #[test]
    fn invalid_records_are_diagnosed() {
        let lines = [
            r#"{"id":"a","title":"t","year":2000,"authors":[],"refs":[],"fields":[]}"#,
            r#"{"id":"b","title":"t","year":1800,"authors":[{"id":"s","name":"S","inst":"I"}]}"#,
            r#"{"id":"c","title":"t","year":2000,"authors":[{"id":"s","name":"S","inst":"I"}],"refs":["c"]}"#,
            r#"{"id":"d","title":"t","year":2000,"authors":[{"id":"s","name":"S","inst":"I"}]}"#,
            r#"{"id":"d","title":"t","year":2001,"authors":[{"id":"s","name":"S","inst":"I"}]}"#,
        ];
        let parsed = parse_corpus_str(&lines.join("\n"));
        assert_eq!(parsed.records.len(), 1);
        let bad: Vec<usize> = parsed.diagnostics.iter().map(|d| d.line).collect();
        assert_eq!(bad, vec![1, 2, 3, 5]);
    }

    #[test]
    fn f1_first_pub_years() {
        let (scholars, warnings) = build_scholars(&fixtures::f1_records());
        assert!(warnings.is_empty());
        let years: Vec<(&str, i32)> =
            scholars.iter().map(|s| (s.scholar_id.as_str(), s.first_pub_year)).collect();
        assert_eq!(years, vec![("s1", 2010), ("s2", 1998), ("s3", 2012)]);
        let s2 = &scholars[1];
        assert_eq!(s2.pub_ids, vec![PubId::from("p1"), "p2".into(), "p3".into()]);
    }

    #[test]
    fn single_record_single_author() {
        let rec = fixtures::record("p", 1977, &[("x", "X", "I")], &[]);
        let (scholars, _) = build_scholars(&[rec]);
        assert_eq!(scholars.len(), 1);
        assert_eq!(scholars[0].first_pub_year, 1977);
    }

    #[test]
    fn conflicting_names_keep_most_frequent() {
        let recs = vec![
            fixtures::record("p1", 2000, &[("x", "Xavier", "I")], &[]),
            fixtures::record("p2", 2001, &[("x", "X. Smith", "I")], &[]),
            fixtures::record("p3", 2002, &[("x", "Xavier", "J")], &[]),
        ];
        let (scholars, warnings) = build_scholars(&recs);
        assert_eq!(scholars[0].name, "Xavier");
        assert_eq!(scholars[0].institution, "J");
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].variants.len(), 2);
    }

    #[test]
    fn field_filter_exact() {
        let recs = fixtures::f1_records();
        assert_eq!(filter_by_field(&recs, "CS").len(), 4);
        assert!(filter_by_field(&recs, "Biology").is_empty());
        assert!(filter_by_field(&recs, "cs").is_empty());
    }

    #[test]
    fn dangling_refs_are_listed() {
        let mut recs = fixtures::f1_records();
        recs[3].refs.push("ext-9".into());
        assert_eq!(dangling_refs(&recs), vec![(PubId::from("p4"), PubId::from("ext-9"))]);
    }
}
