//! Shared inputs for the benchmarks.

use wos_core::mine::{build_graph, MineConfig};
use wos_core::synth::{generate, SynthConfig, SynthCorpus};
use wos_core::KnowledgeGraph;

/// Synthetic corpus with the default noise settings.
pub fn corpus(scholars: usize, pubs: usize) -> SynthCorpus {
    generate(&SynthConfig { scholars, pubs, seed: 11, ..SynthConfig::default() }).expect("valid synth config")
}

/// Fully mined graph over [`corpus`].
pub fn mined(scholars: usize, pubs: usize) -> KnowledgeGraph {
    let c = corpus(scholars, pubs);
    build_graph(&c.records, c.geo, &MineConfig::default()).expect("synth corpora mine cleanly").0
}
