//! Survey state: sessions, issued comparisons, the finalised event log and
//! the live rating table derived from it.
//!
//! Three journals live in the data directory:
//! `sessions.jsonl` (one record per session), `issued.jsonl` (comparisons as
//! handed out, outcome pending) and `events.jsonl` (finalised comparisons in
//! arrival order). Only `events.jsonl` feeds the ratings; on start-up the
//! table is rebuilt by replaying it.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use aesthia_core::datasets::{load_manifest, DatasetManifest};
use aesthia_core::ranking::{
    filter_by_rd, parse_event_log, replay_onto, write_event_log, Choice, ComparisonEvent, Prompt, RankedImage,
    RankingTable,
};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::config::ServiceConfig;
use crate::demographics::Demographics;
use crate::error::ServiceError;
use crate::journal::Journal;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub session_id: String,
    pub demographics: Demographics,
    #[serde(default)]
    pub comparisons_completed: u32,
    pub created_ms: u64,
}

/// A comparison handed to a participant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Issued {
    pub comparison_id: String,
    pub dataset: String,
    pub left: String,
    pub right: String,
    pub left_url: String,
    pub right_url: String,
    pub prompt: Prompt,
    pub prompt_text: String,
    pub completed: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingList {
    pub dataset: String,
    pub prompt: Prompt,
    pub max_rd: Option<f64>,
    pub retained: usize,
    pub total: usize,
    pub retained_fraction: f64,
    /// `"N (x.x%)"`.
    pub summary: String,
    pub rankings: Vec<RankedImage>,
}

pub fn image_url(dataset: &str, image: &str) -> String {
    format!("/images/{dataset}/{image}")
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

/// Every image of every dataset at the initial rating.
pub fn seeded_table<'a>(datasets: impl IntoIterator<Item = &'a DatasetManifest>) -> RankingTable {
    let mut table = RankingTable::new();
    for m in datasets {
        for e in &m.entries {
            table.insert_image(&m.name, &e.id);
        }
    }
    table
}

#[derive(Debug)]
pub struct Survey {
    datasets: BTreeMap<String, DatasetManifest>,
    sessions: HashMap<String, Session>,
    pending: HashMap<String, ComparisonEvent>,
    finalized: HashSet<String>,
    events: Vec<ComparisonEvent>,
    table: RankingTable,
    rng: StdRng,
    high_rd_sampling: bool,
    sessions_log: Journal,
    issued_log: Journal,
    events_log: Journal,
}

impl Survey {
    /// Loads manifests and restores state from the data directory.
    pub fn open(cfg: &ServiceConfig) -> Result<Self, ServiceError> {
        if cfg.datasets.is_empty() {
            return Err(ServiceError::Config("no datasets configured".into()));
        }
        let mut datasets = BTreeMap::new();
        for (name, path) in &cfg.datasets {
            let mut manifest = load_manifest(path)?;
            if manifest.len() < 2 {
                return Err(ServiceError::Config(format!(
                    "dataset '{name}' has {} image(s); at least 2 are needed",
                    manifest.len()
                )));
            }
            manifest.name = name.clone();
            datasets.insert(name.clone(), manifest);
        }
        Self::with_datasets(datasets, cfg.data_dir.clone(), cfg.seed, cfg.high_rd_sampling)
    }

    fn with_datasets(
        datasets: BTreeMap<String, DatasetManifest>,
        data_dir: PathBuf,
        seed: Option<u64>,
        high_rd_sampling: bool,
    ) -> Result<Self, ServiceError> {
        std::fs::create_dir_all(&data_dir).map_err(|e| ServiceError::io(&data_dir, e))?;
        let (sessions_log, sessions_text) = Journal::open(data_dir.join("sessions.jsonl"))?;
        let (issued_log, issued_text) = Journal::open(data_dir.join("issued.jsonl"))?;
        let (events_log, events_text) = Journal::open(data_dir.join("events.jsonl"))?;

        let mut sessions = HashMap::new();
        for (i, line) in sessions_text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            match serde_json::from_str::<Session>(line) {
                Ok(s) => {
                    sessions.insert(s.session_id.clone(), s);
                }
                Err(e) => log::warn!("{}:{}: skipping session: {e}", sessions_log.path().display(), i + 1),
            }
        }

        let restored = parse_event_log(&events_text);
        let replay = replay_onto(seeded_table(datasets.values()), &restored.events);
        let mut events = Vec::with_capacity(restored.events.len());
        let mut finalized = HashSet::new();
        for (i, e) in restored.events.into_iter().enumerate() {
            if replay.rejected.iter().any(|(k, _)| *k == i) {
                continue;
            }
            if let Some(s) = sessions.get_mut(&e.session_id) {
                s.comparisons_completed += 1;
            }
            finalized.insert(e.comparison_id.clone());
            events.push(e);
        }

        let mut pending = HashMap::new();
        for e in parse_event_log(&issued_text).events {
            if !finalized.contains(&e.comparison_id) {
                pending.insert(e.comparison_id.clone(), e);
            }
        }
        log::info!(
            "restored {} sessions, {} events, {} pending comparisons",
            sessions.len(),
            events.len(),
            pending.len()
        );

        let rng = match seed {
            Some(s) => StdRng::seed_from_u64(s),
            None => StdRng::from_os_rng(),
        };
        Ok(Self {
            datasets,
            sessions,
            pending,
            finalized,
            events,
            table: replay.table,
            rng,
            high_rd_sampling,
            sessions_log,
            issued_log,
            events_log,
        })
    }

    pub fn datasets(&self) -> impl Iterator<Item = &DatasetManifest> {
        self.datasets.values()
    }

    pub fn table(&self) -> &RankingTable {
        &self.table
    }

    pub fn events(&self) -> &[ComparisonEvent] {
        &self.events
    }

    pub fn session(&self, id: &str) -> Option<&Session> {
        self.sessions.get(id)
    }

    pub fn pending_count(&self) -> usize {
        self.pending.len()
    }

    pub fn image_path(&self, dataset: &str, image: &str) -> Option<PathBuf> {
        self.datasets.get(dataset)?.get(image).map(|e| e.path.clone())
    }

    pub fn create_session(&mut self, demographics: Demographics) -> Result<Session, ServiceError> {
        let session = Session {
            session_id: uuid::Uuid::new_v4().simple().to_string(),
            demographics,
            comparisons_completed: 0,
            created_ms: now_ms(),
        };
        let mut record = session.clone();
        record.comparisons_completed = 0;
        self.sessions_log.append(&record)?;
        self.sessions.insert(session.session_id.clone(), session.clone());
        Ok(session)
    }

    fn draw(&mut self) -> (String, String, String, Prompt) {
        let names: Vec<&String> = self.datasets.keys().collect();
        let dataset = names[self.rng.random_range(0..names.len())].clone();
        let prompt = if self.rng.random_bool(0.5) { Prompt::Aesthetic } else { Prompt::Complexity };
        let entries = &self.datasets[&dataset].entries;
        let n = entries.len();
        let (a, b) = if self.high_rd_sampling {
            let mut weights: Vec<f64> =
                entries.iter().map(|e| self.table.get(&dataset, &e.id, prompt).rd.max(1.0)).collect();
            let a = WeightedIndex::new(&weights).expect("positive weights").sample(&mut self.rng);
            weights[a] = 0.0;
            let b = WeightedIndex::new(&weights).expect("positive weights").sample(&mut self.rng);
            (a, b)
        } else {
            // Uniform over ordered pairs, so the order is already random.
            let a = self.rng.random_range(0..n);
            let mut b = self.rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        };
        (dataset, entries[a].id.clone(), entries[b].id.clone(), prompt)
    }

    pub fn next_comparison(&mut self, session_id: &str) -> Result<Issued, ServiceError> {
        let completed = self
            .sessions
            .get(session_id)
            .ok_or_else(|| ServiceError::NotFound(format!("session '{session_id}'")))?
            .comparisons_completed;
        let (dataset, left, right, prompt) = self.draw();
        let event = ComparisonEvent {
            comparison_id: uuid::Uuid::new_v4().simple().to_string(),
            session_id: session_id.to_string(),
            dataset,
            left,
            right,
            prompt,
            outcome: None,
            duration_ms: None,
            timestamp_ms: now_ms(),
        };
        self.issued_log.append(&event)?;
        let issued = Issued {
            comparison_id: event.comparison_id.clone(),
            left_url: image_url(&event.dataset, &event.left),
            right_url: image_url(&event.dataset, &event.right),
            dataset: event.dataset.clone(),
            left: event.left.clone(),
            right: event.right.clone(),
            prompt,
            prompt_text: prompt.text().to_string(),
            completed,
        };
        self.pending.insert(event.comparison_id.clone(), event);
        Ok(issued)
    }

    /// Finalises a pending comparison: appends it to the event log, then
    /// updates ratings and the session's count.
    pub fn submit(&mut self, comparison_id: &str, outcome: Choice, duration_ms: u64) -> Result<ComparisonEvent, ServiceError> {
        if self.finalized.contains(comparison_id) {
            return Err(ServiceError::Conflict(format!("comparison '{comparison_id}' was already submitted")));
        }
        let Some(pending) = self.pending.get(comparison_id) else {
            return Err(ServiceError::Conflict(format!("comparison '{comparison_id}' was never issued")));
        };
        let mut event = pending.clone();
        event.outcome = Some(outcome);
        event.duration_ms = Some(duration_ms);
        event.timestamp_ms = now_ms();
        // Validate against a scratch copy so a failed update leaves no trace.
        let mut next = self.table.clone();
        next.apply(&event)?;
        self.events_log.append(&event)?;
        self.table = next;
        self.pending.remove(comparison_id);
        self.finalized.insert(event.comparison_id.clone());
        if let Some(s) = self.sessions.get_mut(&event.session_id) {
            s.comparisons_completed += 1;
        }
        self.events.push(event.clone());
        Ok(event)
    }

    pub fn rankings(&self, dataset: &str, prompt: Prompt, max_rd: Option<f64>) -> Result<RankingList, ServiceError> {
        if !self.datasets.contains_key(dataset) {
            return Err(ServiceError::NotFound(format!("dataset '{dataset}'")));
        }
        if let Some(m) = max_rd {
            if !m.is_finite() || m <= 0.0 {
                return Err(ServiceError::invalid("max_rd", format!("{m} is not a positive number")));
            }
        }
        let total = self.table.ranking(dataset, prompt).len();
        let rankings = match max_rd {
            Some(m) => filter_by_rd(&self.table, m).table.ranking(dataset, prompt),
            None => self.table.ranking(dataset, prompt),
        };
        let retained = rankings.len();
        let fraction = if total == 0 { 0.0 } else { retained as f64 / total as f64 };
        Ok(RankingList {
            dataset: dataset.to_string(),
            prompt,
            max_rd,
            retained,
            total,
            retained_fraction: fraction,
            summary: format!("{retained} ({:.1}%)", 100.0 * fraction),
            rankings,
        })
    }

    /// The finalised event log as JSON lines, in arrival order.
    pub fn export(&self) -> String {
        write_event_log(&self.events)
    }

    /// True when the live table equals a fresh replay of the event log.
    pub fn reconcile(&self) -> bool {
        replay_onto(seeded_table(self.datasets.values()), &self.events).table == self.table
    }
}
