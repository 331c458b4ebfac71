//! Scholar knowledge graph: corpus ingestion, relation mining, ranking,
//! query answering, advisor recommendation and an HTTP API.

pub mod api;
pub mod engine;
pub mod export;
pub mod fixtures;
pub mod geo;
pub mod ingest;
pub mod mine;
pub mod model;
pub mod query;
pub mod ranking;
pub mod recommend;
pub mod snapshot;
pub mod store;
pub mod synth;

pub use model::{AuthorRef, EdgeKind, PubId, PublicationRecord, RelEdge, Scholar, ScholarId, YearSpan};
pub use store::{Direction, GraphData, GraphError, KnowledgeGraph};
