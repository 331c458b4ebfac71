//! Seeded synthetic corpora with planted advisor-advisee pairs.
//!
//! Generative rules (all probabilities are per-draw, seed-controlled):
//!
//! - Scholars are split into *seniors* and *students*; each student gets a
//!   planted advisor who started publishing 8–20 years earlier (forward time,
//!   so the planted relation is acyclic). Advisors may themselves be earlier
//!   students, producing genealogy chains.
//! - Every scholar debuts in their start year. Seniors debut alone, or with
//!   probability 0.25 together with a same-era peer.
//! - A student writes 3–6 early papers within 5 years of starting. Each early
//!   paper lists the advisor with probability `advisor_presence` (the debut
//!   always does unless the student is a *weak-signal* student). With
//!   probability `distractor_rate` an early paper also gets a distractor:
//!   a same-era peer or a random senior active at the time.
//! - A `weak_signal_rate` share of students co-author only their debut with
//!   the advisor.
//! - The remaining publication budget is filled with background papers: a
//!   random active lead plus 0–3 co-authors: a previous collaborator of the
//!   lead (50%), a scholar who started within 4 years of the lead (35%), or
//!   any active scholar (15%).
//! - A non-weak student who lands on someone else's paper (background or as
//!   a distractor) within their first 5 years pulls in their own advisor with
//!   probability `advisor_presence`.
//! - Each paper references up to 5 earlier papers (biased towards its
//!   authors' own earlier work), and occasionally a dangling external id.
//! - About 8% of papers carry a second field tag and 4% are tagged only
//!   `Biology`.

use crate::geo::{GeoPoint, GeoTable};
use crate::mine::advisor::LabeledPair;
use crate::mine::coauthor::joint_index;
use crate::model::{AuthorRef, PubId, PublicationRecord, ScholarId};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub const FIRST_YEAR: i32 = 1980;
pub const LAST_YEAR: i32 = 2017;
const INSTITUTIONS: usize = 10;
/// Background co-authors prefer scholars who started within this many years.
const ERA_WINDOW: i32 = 4;
const EARLY_WINDOW: i32 = 5;
const PEER_DEBUT_RATE: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub scholars: usize,
    pub pubs: usize,
    /// Number of planted advisor pairs; `None` plants one for 30% of scholars.
    pub advisor_pairs: Option<usize>,
    pub seed: u64,
    pub advisor_presence: f64,
    pub distractor_rate: f64,
    pub weak_signal_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            scholars: 100,
            pubs: 500,
            advisor_pairs: None,
            seed: 7,
            advisor_presence: 0.9,
            distractor_rate: 0.5,
            weak_signal_rate: 0.03,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedPair {
    pub advisor: ScholarId,
    pub advisee: ScholarId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthManifest {
    pub config: SynthConfig,
    pub scholar_count: usize,
    pub publication_count: usize,
    pub planted: Vec<PlantedPair>,
    /// Planted pairs as positives; every other directed co-author pair as a
    /// negative.
    pub labeled: Vec<LabeledPair>,
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub records: Vec<PublicationRecord>,
    pub geo: GeoTable,
    pub manifest: SynthManifest,
}

impl SynthCorpus {
    pub fn corpus_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SynthError {
    #[error("need at least 2 scholars, got {0}")]
    TooFewScholars(usize),
    #[error("publication budget {pubs} cannot cover the {needed} papers required by {scholars} scholars")]
    BudgetTooSmall { pubs: usize, needed: usize, scholars: usize },
    #[error("cannot plant {pairs} advisor pairs among {scholars} scholars")]
    TooManyPairs { pairs: usize, scholars: usize },
}

const GIVEN: [&str; 24] = [
    "Alice", "Bob", "Carol", "David", "Erin", "Frank", "Grace", "Heidi", "Ivan", "Judy", "Karl", "Lena", "Mallory",
    "Nina", "Oscar", "Peggy", "Quinn", "Rupert", "Sybil", "Trent", "Uma", "Victor", "Wendy", "Xin",
];
const FAMILY: [&str; 20] = [
    "Smith", "Wang", "Garcia", "Chen", "Muller", "Rossi", "Kim", "Nguyen", "Silva", "Ivanova", "Li", "Khan",
    "Novak", "Sato", "Okafor", "Larsen", "Dubois", "Haddad", "Kowalski", "Zhang",
];

struct Scholar {
    id: ScholarId,
    name: String,
    inst: String,
    start: i32,
    advisor: Option<usize>,
    weak: bool,
}

struct Builder {
    rng: ChaCha8Rng,
    scholars: Vec<Scholar>,
    records: Vec<PublicationRecord>,
    collaborators: Vec<BTreeSet<usize>>,
    pubs_by_author: Vec<Vec<usize>>,
}

impl Builder {
    fn author(&self, i: usize) -> AuthorRef {
        let s = &self.scholars[i];
        AuthorRef { id: s.id.clone(), name: s.name.clone(), institution: s.inst.clone() }
    }

    /// Students within their early window bring their advisor along with
    /// probability `presence`. `skip` is exempt (its advisor was already drawn).
    fn pull_in_advisors(&mut self, year: i32, authors: &mut Vec<usize>, skip: Option<usize>, presence: f64) {
        for k in 0..authors.len() {
            let st = &self.scholars[authors[k]];
            if Some(authors[k]) == skip || st.weak {
                continue;
            }
            if let Some(adv) = st.advisor {
                if year < st.start + EARLY_WINDOW && !authors.contains(&adv) && self.rng.random_bool(presence) {
                    authors.push(adv);
                }
            }
        }
    }

    fn fields(&mut self) -> Vec<String> {
        let roll: f64 = self.rng.random();
        if roll < 0.04 {
            vec!["Biology".into()]
        } else if roll < 0.12 {
            vec!["CS".into(), ["Math", "Physics", "Economics"].choose(&mut self.rng).unwrap().to_string()]
        } else {
            vec!["CS".into()]
        }
    }

    fn refs(&mut self, year: i32, authors: &[usize]) -> Vec<PubId> {
        let earlier: Vec<usize> = (0..self.records.len()).filter(|&p| self.records[p].year < year).collect();
        let mut chosen: BTreeSet<usize> = BTreeSet::new();
        if !earlier.is_empty() {
            let n = self.rng.random_range(0..=5usize.min(earlier.len()));
            for _ in 0..n {
                let own: Vec<usize> = authors
                    .iter()
                    .flat_map(|a| self.pubs_by_author[*a].iter().copied())
                    .filter(|p| self.records[*p].year < year)
                    .collect();
                let pick = if !own.is_empty() && self.rng.random_bool(0.3) {
                    *own.choose(&mut self.rng).unwrap()
                } else {
                    *earlier.choose(&mut self.rng).unwrap()
                };
                chosen.insert(pick);
            }
        }
        let mut refs: Vec<PubId> = chosen.into_iter().map(|p| self.records[p].pub_id.clone()).collect();
        if self.rng.random_bool(0.05) {
            refs.push(PubId(format!("ext-{}", self.rng.random_range(0..10_000u32))));
        }
        refs
    }

    fn publish(&mut self, year: i32, authors: Vec<usize>) {
        let mut uniq: Vec<usize> = Vec::with_capacity(authors.len());
        for a in authors {
            if !uniq.contains(&a) {
                uniq.push(a);
            }
        }
        let idx = self.records.len();
        let refs = self.refs(year, &uniq);
        let fields = self.fields();
        let rec = PublicationRecord {
            pub_id: PubId(format!("p{:05}", idx)),
            title: format!("Synthetic study {idx}"),
            year,
            venue: Some(format!("Venue {}", idx % 7)),
            authors: uniq.iter().map(|&a| self.author(a)).collect(),
            refs,
            fields,
        };
        for &a in &uniq {
            self.pubs_by_author[a].push(idx);
            for &b in &uniq {
                if a != b {
                    self.collaborators[a].insert(b);
                }
            }
        }
        self.records.push(rec);
    }
}

pub fn generate(config: &SynthConfig) -> Result<SynthCorpus, SynthError> {
    let n = config.scholars;
    if n < 2 {
        return Err(SynthError::TooFewScholars(n));
    }
    let pairs = config.advisor_pairs.unwrap_or(n * 3 / 10);
    if pairs >= n {
        return Err(SynthError::TooManyPairs { pairs, scholars: n });
    }
    let seniors = n - pairs;
    // debut for everyone plus at least one more early paper per student
    let needed = n + pairs;
    if config.pubs < needed {
        return Err(SynthError::BudgetTooSmall { pubs: config.pubs, needed, scholars: n });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let institutions: Vec<String> = (0..INSTITUTIONS).map(|i| format!("Institute {i:02}")).collect();
    let mut geo = GeoTable::new();
    // the last institution is deliberately missing from the geo table
    for inst in &institutions[..INSTITUTIONS - 1] {
        geo.insert(
            inst.clone(),
            GeoPoint {
                lat: (rng.random_range(-60.0..70.0f64) * 1e4).round() / 1e4,
                lng: (rng.random_range(-180.0..180.0f64) * 1e4).round() / 1e4,
            },
        );
    }

    let mut scholars: Vec<Scholar> = Vec::with_capacity(n);
    let name_for = |rng: &mut ChaCha8Rng| {
        format!("{} {}", GIVEN.choose(rng).unwrap(), FAMILY.choose(rng).unwrap())
    };
    for i in 0..seniors {
        scholars.push(Scholar {
            id: ScholarId(format!("s{i:04}")),
            name: name_for(&mut rng),
            inst: institutions.choose(&mut rng).unwrap().clone(),
            start: rng.random_range(FIRST_YEAR..=2000),
            advisor: None,
            weak: false,
        });
    }
    for k in 0..pairs {
        let i = seniors + k;
        // any earlier scholar who started at least 8 years before the latest admissible start
        let advisor = *(0..i)
            .filter(|&a| scholars[a].start <= 2004)
            .collect::<Vec<_>>()
            .choose(&mut rng)
            .unwrap_or(&0);
        let a_start = scholars[advisor].start;
        let start = (a_start + rng.random_range(8..=20)).min(LAST_YEAR - 5);
        let inst = if rng.random_bool(0.6) {
            scholars[advisor].inst.clone()
        } else {
            institutions.choose(&mut rng).unwrap().clone()
        };
        scholars.push(Scholar {
            id: ScholarId(format!("s{i:04}")),
            name: name_for(&mut rng),
            inst,
            start,
            advisor: Some(advisor),
            weak: rng.random_bool(config.weak_signal_rate),
        });
    }

    let mut b = Builder {
        rng,
        collaborators: vec![BTreeSet::new(); n],
        pubs_by_author: vec![Vec::new(); n],
        scholars,
        records: Vec::new(),
    };

    // Early-career plans, emitted in chronological order together with debuts.
    let mut plan: Vec<(i32, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let start = b.scholars[i].start;
        match b.scholars[i].advisor {
            None => {
                let mut authors = vec![i];
                if b.rng.random_bool(PEER_DEBUT_RATE) {
                    let peers: Vec<usize> = (0..seniors)
                        .filter(|&j| j != i && (b.scholars[j].start - start).abs() <= 2 && b.scholars[j].start <= start)
                        .collect();
                    if let Some(&p) = peers.choose(&mut b.rng) {
                        authors.push(p);
                    }
                }
                plan.push((start, authors));
            }
            Some(adv) => {
                plan.push((start, vec![i, adv]));
                let extra = if b.scholars[i].weak { 1 } else { b.rng.random_range(2..=5) };
                for _ in 0..extra {
                    let year = start + b.rng.random_range(0..EARLY_WINDOW);
                    let mut authors = vec![i];
                    if !b.scholars[i].weak && b.rng.random_bool(config.advisor_presence) {
                        authors.push(adv);
                    }
                    if b.rng.random_bool(config.distractor_rate) {
                        let peers: Vec<usize> = (0..n)
                            .filter(|&j| j != i && j != adv && b.scholars[j].start <= year)
                            .filter(|&j| b.scholars[j].advisor.is_some() && (b.scholars[j].start - start).abs() <= 3)
                            .collect();
                        let seniors_now: Vec<usize> =
                            (0..seniors).filter(|&j| j != adv && b.scholars[j].start + 5 <= year).collect();
                        let pool = if b.rng.random_bool(0.5) && !peers.is_empty() { peers } else { seniors_now };
                        if let Some(&d) = pool.choose(&mut b.rng) {
                            authors.push(d);
                            b.pull_in_advisors(year, &mut authors, Some(i), config.advisor_presence);
                        }
                    }
                    authors.shuffle(&mut b.rng);
                    plan.push((year, authors));
                }
            }
        }
    }
    if plan.len() > config.pubs {
        return Err(SynthError::BudgetTooSmall { pubs: config.pubs, needed: plan.len(), scholars: n });
    }
    let budget_left = config.pubs - plan.len();

    // Background papers, each by a random active lead.
    for _ in 0..budget_left {
        let year = b.rng.random_range(FIRST_YEAR..=LAST_YEAR);
        let active: Vec<usize> = (0..n).filter(|&i| b.scholars[i].start <= year).collect();
        let Some(&lead) = active.choose(&mut b.rng) else {
            continue;
        };
        let mut authors = vec![lead];
        for _ in 0..b.rng.random_range(0..=3) {
            let past: Vec<usize> = plan
                .iter()
                .filter(|(y, a)| *y <= year && a.contains(&lead))
                .flat_map(|(_, a)| a.iter().copied())
                .filter(|&x| x != lead)
                .collect();
            let lead_start = b.scholars[lead].start;
            let era: Vec<usize> =
                active.iter().copied().filter(|&j| (b.scholars[j].start - lead_start).abs() <= ERA_WINDOW).collect();
            let roll: f64 = b.rng.random();
            let pick = if !past.is_empty() && roll < 0.5 {
                *past.choose(&mut b.rng).unwrap()
            } else if roll < 0.85 && !era.is_empty() {
                *era.choose(&mut b.rng).unwrap()
            } else {
                *active.choose(&mut b.rng).unwrap()
            };
            authors.push(pick);
        }
        b.pull_in_advisors(year, &mut authors, None, config.advisor_presence);
        plan.push((year, authors));
    }

    plan.sort_by_key(|(year, _)| *year);
    for (year, authors) in plan {
        b.publish(year, authors);
    }

    let planted: Vec<PlantedPair> = b
        .scholars
        .iter()
        .filter_map(|s| s.advisor.map(|a| PlantedPair { advisor: b.scholars[a].id.clone(), advisee: s.id.clone() }))
        .collect();
    let truth: BTreeSet<(&ScholarId, &ScholarId)> = planted.iter().map(|p| (&p.advisor, &p.advisee)).collect();
    let mut labeled = Vec::new();
    for (u, v) in joint_index(&b.records).into_keys() {
        for (a, s) in [(&u, &v), (&v, &u)] {
            labeled.push(LabeledPair { advisor: a.clone(), advisee: s.clone(), label: truth.contains(&(a, s)) });
        }
    }
    labeled.sort_by(|x, y| (&x.advisee, &x.advisor).cmp(&(&y.advisee, &y.advisor)));

    let manifest = SynthManifest {
        config: *config,
        scholar_count: n,
        publication_count: b.records.len(),
        planted,
        labeled,
    };
    Ok(SynthCorpus { records: b.records, geo, manifest })
}

/// Summary of how many planted pairs an edge set recovers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Recovery {
    pub planted: usize,
    pub emitted: usize,
    pub recovered: usize,
}

impl Recovery {
    pub fn measure<'a>(planted: &[PlantedPair], emitted: impl IntoIterator<Item = (&'a ScholarId, &'a ScholarId)>) -> Self {
        let truth: BTreeMap<&ScholarId, &ScholarId> = planted.iter().map(|p| (&p.advisee, &p.advisor)).collect();
        let mut emitted_n = 0;
        let mut recovered = 0;
        for (advisor, advisee) in emitted {
            emitted_n += 1;
            if truth.get(advisee) == Some(&advisor) {
                recovered += 1;
            }
        }
        Self { planted: planted.len(), emitted: emitted_n, recovered }
    }

    pub fn recall(&self) -> f64 {
        if self.planted == 0 { 1.0 } else { self.recovered as f64 / self.planted as f64 }
    }

    /// Share of emitted edges that are not planted.
    pub fn false_positive_rate(&self) -> f64 {
        if self.emitted == 0 { 0.0 } else { (self.emitted - self.recovered) as f64 / self.emitted as f64 }
    }
}
