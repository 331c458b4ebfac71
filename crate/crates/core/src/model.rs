//! Domain types shared by every layer: scholars, publications and typed
//! relationship edges.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

string_id!(
    /// Opaque, pre-assigned scholar key. Ordering is plain string ordering.
    ScholarId
);
string_id!(
    /// Opaque publication key, unique within a corpus.
    PubId
);

/// One author slot on a publication.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRef {
    pub id: ScholarId,
    pub name: String,
    #[serde(rename = "inst")]
    pub institution: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    #[serde(rename = "id")]
    pub pub_id: PubId,
    pub title: String,
    pub year: i32,
    #[serde(default)]
    pub venue: Option<String>,
    pub authors: Vec<AuthorRef>,
    #[serde(default)]
    pub refs: Vec<PubId>,
    #[serde(default)]
    pub fields: Vec<String>,
}

impl PublicationRecord {
    pub const MIN_YEAR: i32 = 1900;
    pub const MAX_YEAR: i32 = 2100;

    /// Distinct author ids in author-list order.
    pub fn author_ids(&self) -> Vec<&ScholarId> {
        let mut seen = Vec::with_capacity(self.authors.len());
        for a in &self.authors {
            if !seen.contains(&&a.id) {
                seen.push(&a.id);
            }
        }
        seen
    }

    pub fn has_author(&self, id: &ScholarId) -> bool {
        self.authors.iter().any(|a| &a.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scholar {
    pub scholar_id: ScholarId,
    pub name: String,
    pub institution: String,
    /// Year of the earliest publication; anchors academic age.
    pub first_pub_year: i32,
    /// Sorted by (year, pub_id).
    pub pub_ids: Vec<PubId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Coauthor,
    #[serde(rename = "advisor")]
    AdvisorOf,
    Cites,
    Cocited,
    Team,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 5] = [
        EdgeKind::Coauthor,
        EdgeKind::AdvisorOf,
        EdgeKind::Cites,
        EdgeKind::Cocited,
        EdgeKind::Team,
    ];

    /// COAUTHOR and COCITED are stored once with `src < dst`.
    pub fn is_undirected(self) -> bool {
        matches!(self, EdgeKind::Coauthor | EdgeKind::Cocited)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Coauthor => "coauthor",
            EdgeKind::AdvisorOf => "advisor",
            EdgeKind::Cites => "cites",
            EdgeKind::Cocited => "cocited",
            EdgeKind::Team => "team",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown edge kind `{0}`")]
pub struct UnknownKind(pub String);

impl FromStr for EdgeKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "coauthor" | "collaboration" => Ok(EdgeKind::Coauthor),
            "advisor" | "advisor_of" => Ok(EdgeKind::AdvisorOf),
            "cites" | "citation" => Ok(EdgeKind::Cites),
            "cocited" | "cocitation" => Ok(EdgeKind::Cocited),
            "team" => Ok(EdgeKind::Team),
            other => Err(UnknownKind(other.to_owned())),
        }
    }
}

/// Inclusive year range carried by an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearSpan {
    pub start: i32,
    pub end: i32,
}

impl YearSpan {
    pub fn single(year: i32) -> Self {
        Self { start: year, end: year }
    }

    pub fn widen(self, other: YearSpan) -> Self {
        Self {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }

    pub fn include(self, year: i32) -> Self {
        self.widen(YearSpan::single(year))
    }
}

/// Typed weighted relationship between two scholars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelEdge {
    pub src: ScholarId,
    pub dst: ScholarId,
    pub kind: EdgeKind,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub years: Option<YearSpan>,
}

impl RelEdge {
    pub fn new(src: ScholarId, dst: ScholarId, kind: EdgeKind, weight: f64) -> Self {
        Self { src, dst, kind, weight, years: None }
    }

    pub fn with_years(mut self, years: Option<YearSpan>) -> Self {
        self.years = years;
        self
    }

    /// Swaps endpoints of undirected kinds so that `src < dst`.
    pub fn canonical(mut self) -> Self {
        if self.kind.is_undirected() && self.src > self.dst {
            std::mem::swap(&mut self.src, &mut self.dst);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_orders_undirected_only() {
        let e = RelEdge::new("b".into(), "a".into(), EdgeKind::Coauthor, 1.0).canonical();
        assert_eq!((e.src.as_str(), e.dst.as_str()), ("a", "b"));
        let d = RelEdge::new("b".into(), "a".into(), EdgeKind::Cites, 1.0).canonical();
        assert_eq!((d.src.as_str(), d.dst.as_str()), ("b", "a"));
    }

    #[test]
    fn kind_parses_wire_names() {
        for k in EdgeKind::ALL {
            assert_eq!(k.as_str().parse::<EdgeKind>().unwrap(), k);
        }
        assert!("friend".parse::<EdgeKind>().is_err());
    }

    #[test]
    fn author_ids_dedupes() {
        let r = PublicationRecord {
            pub_id: "p".into(),
            title: String::new(),
            year: 2000,
            venue: None,
            authors: vec![
                AuthorRef { id: "a".into(), name: "A".into(), institution: "X".into() },
                AuthorRef { id: "a".into(), name: "A".into(), institution: "X".into() },
            ],
            refs: vec![],
            fields: vec![],
        };
        assert_eq!(r.author_ids().len(), 1);
    }
}
