//! Small hand-built corpora used by tests, docs and benchmarks.

use crate::model::{AuthorRef, PublicationRecord};

/// Builds a record tagged `CS` from `(id, name, institution)` author triples.
pub fn record(id: &str, year: i32, authors: &[(&str, &str, &str)], refs: &[&str]) -> PublicationRecord {
    PublicationRecord {
        pub_id: id.into(),
        title: format!("Publication {id}"),
        year,
        venue: None,
        authors: authors
            .iter()
            .map(|(id, name, inst)| AuthorRef {
                id: (*id).into(),
                name: (*name).to_owned(),
                institution: (*inst).to_owned(),
            })
            .collect(),
        refs: refs.iter().map(|r| (*r).into()).collect(),
        fields: vec!["CS".to_owned()],
    }
}

/// The three-scholar, four-publication fixture:
/// Alice (s1, I1), Bob (s2, I2), Carol (s3, I1).
pub fn f1_records() -> Vec<PublicationRecord> {
    const ALICE: (&str, &str, &str) = ("s1", "Alice", "I1");
    const BOB: (&str, &str, &str) = ("s2", "Bob", "I2");
    const CAROL: (&str, &str, &str) = ("s3", "Carol", "I1");
    vec![
        record("p1", 1998, &[BOB], &[]),
        record("p2", 2010, &[ALICE, BOB], &["p1"]),
        record("p3", 2011, &[ALICE, BOB], &["p2"]),
        record("p4", 2012, &[ALICE, CAROL], &["p1", "p2"]),
    ]
}

pub fn f1_corpus_text() -> String {
    let mut out = String::new();
    for r in f1_records() {
        out.push_str(&serde_json::to_string(&r).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Geo table for the fixture institutions.
pub fn f1_geo_text() -> &'static str {
    "I1\t38.8800\t121.5300\nI2\t-37.7210\t145.0470\n"
}
