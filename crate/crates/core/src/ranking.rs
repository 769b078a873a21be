//! Glicko ratings for images from pairwise comparisons.
//!
//! Two departures from rating-period Glicko: there is no time-based RD
//! inflation, and every comparison is its own rating period. Ratings are kept
//! separately per prompt, so aesthetic and complexity judgements never mix.
//!
//! Glicko system details: <http://www.glicko.net/glicko/glicko.pdf>

use std::collections::BTreeMap;
use std::f64::consts::{LN_10, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const INITIAL_RATING: f64 = 1500.0;
pub const INITIAL_RD: f64 = 350.0;

/// Comparison prompt shown with a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prompt {
    Aesthetic,
    Complexity,
}

impl Prompt {
    pub const ALL: [Prompt; 2] = [Prompt::Aesthetic, Prompt::Complexity];

    /// Question text as presented to participants.
    pub fn text(self) -> &'static str {
        match self {
            Prompt::Aesthetic => "Which one of these images do you like the most?",
            Prompt::Complexity => "Which of these images is more complex?",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Prompt::Aesthetic => "aesthetic",
            Prompt::Complexity => "complexity",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Prompt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Prompt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aesthetic" => Ok(Prompt::Aesthetic),
            "complexity" => Ok(Prompt::Complexity),
            other => Err(Error::Parameter(format!("unknown prompt '{other}'"))),
        }
    }
}

/// A participant's answer for a displayed pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Choice {
    Left,
    Right,
    Tie,
}

impl FromStr for Choice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Choice::Left),
            "right" => Ok(Choice::Right),
            "tie" => Ok(Choice::Tie),
            other => Err(Error::Parameter(format!("unknown outcome '{other}'"))),
        }
    }
}

/// Result of a match from one player's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchOutcome {
    Win,
    Tie,
    Loss,
}

impl MatchOutcome {
    pub fn score(self) -> f64 {
        match self {
            MatchOutcome::Win => 1.0,
            MatchOutcome::Tie => 0.5,
            MatchOutcome::Loss => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rating {
    pub rating: f64,
    pub rd: f64,
    pub matches: u32,
}

impl Default for Rating {
    fn default() -> Self {
        Self { rating: INITIAL_RATING, rd: INITIAL_RD, matches: 0 }
    }
}

const Q: f64 = LN_10 / 400.0;

fn g(rd: f64) -> f64 {
    1.0 / (1.0 + 3.0 * Q * Q * rd * rd / (PI * PI)).sqrt()
}

fn update_one(me: Rating, opp: Rating, score: f64) -> Rating {
    let g_opp = g(opp.rd);
    let expected = 1.0 / (1.0 + 10f64.powf(-g_opp * (me.rating - opp.rating) / 400.0));
    let d2_inv = Q * Q * g_opp * g_opp * expected * (1.0 - expected);
    let precision = 1.0 / (me.rd * me.rd) + d2_inv;
    Rating {
        rating: me.rating + Q / precision * g_opp * (score - expected),
        rd: (1.0 / precision).sqrt(),
        matches: me.matches + 1,
    }
}

/// One-game Glicko update of both players from their pre-match values.
/// `outcome` is from `a`'s side.
pub fn glicko_update(a: Rating, b: Rating, outcome: MatchOutcome) -> Result<(Rating, Rating)> {
    for r in [a, b] {
        if !r.rating.is_finite() || !r.rd.is_finite() || r.rd <= 0.0 {
            return Err(Error::Parameter(format!("invalid rating ({}, {})", r.rating, r.rd)));
        }
    }
    let s = outcome.score();
    Ok((update_one(a, b, s), update_one(b, a, 1.0 - s)))
}

/// One survey comparison. `outcome` and `duration_ms` are absent while the
/// comparison is pending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonEvent {
    pub comparison_id: String,
    pub session_id: String,
    pub dataset: String,
    pub left: String,
    pub right: String,
    pub prompt: Prompt,
    #[serde(default)]
    pub outcome: Option<Choice>,
    #[serde(default)]
    pub duration_ms: Option<u64>,
    pub timestamp_ms: u64,
}

impl ComparisonEvent {
    pub fn check(&self) -> Result<()> {
        if self.left == self.right {
            return Err(Error::Malformed(format!("comparison {} pairs '{}' with itself", self.comparison_id, self.left)));
        }
        if self.outcome.is_none() {
            return Err(Error::Malformed(format!("comparison {} has no outcome", self.comparison_id)));
        }
        Ok(())
    }
}

/// Ratings per `(dataset, image)` with one slot per prompt.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RankingTable {
    entries: BTreeMap<(String, String), [Rating; 2]>,
}

/// One row of a ranking listing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedImage {
    pub image_id: String,
    pub rating: f64,
    pub rd: f64,
    pub matches: u32,
}

impl RankingTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers an image at the initial rating in both prompts.
    pub fn insert_image(&mut self, dataset: &str, image: &str) {
        self.entries.entry((dataset.to_string(), image.to_string())).or_default();
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rating of an image; unseen images report the initial rating.
    pub fn get(&self, dataset: &str, image: &str, prompt: Prompt) -> Rating {
        self.entries
            .get(&(dataset.to_string(), image.to_string()))
            .map(|r| r[prompt.index()])
            .unwrap_or_default()
    }

    pub fn contains(&self, dataset: &str, image: &str) -> bool {
        self.entries.contains_key(&(dataset.to_string(), image.to_string()))
    }

    /// Iterates `(dataset, image, [aesthetic, complexity])` in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &[Rating; 2])> {
        self.entries.iter().map(|((d, i), r)| (d.as_str(), i.as_str(), r))
    }

    pub fn datasets(&self) -> Vec<String> {
        let mut out: Vec<String> = self.entries.keys().map(|(d, _)| d.clone()).collect();
        out.dedup();
        out
    }

    /// Applies one finalised comparison.
    pub fn apply(&mut self, event: &ComparisonEvent) -> Result<()> {
        event.check()?;
        let outcome = match event.outcome.expect("checked") {
            Choice::Left => MatchOutcome::Win,
            Choice::Right => MatchOutcome::Loss,
            Choice::Tie => MatchOutcome::Tie,
        };
        let slot = event.prompt.index();
        let left = self.entries.entry((event.dataset.clone(), event.left.clone())).or_default()[slot];
        let right = self.entries.entry((event.dataset.clone(), event.right.clone())).or_default()[slot];
        let (l, r) = glicko_update(left, right, outcome)?;
        self.entries.get_mut(&(event.dataset.clone(), event.left.clone())).expect("inserted")[slot] = l;
        self.entries.get_mut(&(event.dataset.clone(), event.right.clone())).expect("inserted")[slot] = r;
        Ok(())
    }

    /// Images of one dataset sorted by descending rating in `prompt`; ties on
    /// rating fall back to image id.
    pub fn ranking(&self, dataset: &str, prompt: Prompt) -> Vec<RankedImage> {
        let mut out: Vec<RankedImage> = self
            .entries
            .iter()
            .filter(|((d, _), _)| d == dataset)
            .map(|((_, id), r)| {
                let r = r[prompt.index()];
                RankedImage { image_id: id.clone(), rating: r.rating, rd: r.rd, matches: r.matches }
            })
            .collect();
        out.sort_by(|a, b| b.rating.total_cmp(&a.rating).then_with(|| a.image_id.cmp(&b.image_id)));
        out
    }

    /// CSV with columns `dataset,image_id,prompt,rating,rd,matches`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dataset,image_id,prompt,rating,rd,matches\n");
        for ((d, id), ratings) in &self.entries {
            for p in Prompt::ALL {
                let r = ratings[p.index()];
                out.push_str(&format!("{d},{id},{p},{},{},{}\n", r.rating, r.rd, r.matches));
            }
        }
        out
    }
}

/// Outcome of a replay: the table plus the events that were skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub table: RankingTable,
    pub rejected: Vec<(usize, String)>,
}

/// Applies events in order on top of `table`.
pub fn replay_onto(mut table: RankingTable, events: &[ComparisonEvent]) -> Replay {
    let mut rejected = Vec::new();
    for (i, e) in events.iter().enumerate() {
        if let Err(err) = table.apply(e) {
            log::warn!("event {i} rejected: {err}");
            rejected.push((i, err.to_string()));
        }
    }
    Replay { table, rejected }
}

/// Builds ratings from scratch by applying `events` in order.
pub fn replay(events: &[ComparisonEvent]) -> Replay {
    replay_onto(RankingTable::new(), events)
}

/// Result of an RD filter.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtered {
    pub table: RankingTable,
    pub retained: usize,
    pub total: usize,
}

impl Filtered {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.retained as f64 / self.total as f64
        }
    }

    /// `"N (x.x%)"`.
    pub fn summary(&self) -> String {
        format!("{} ({:.1}%)", self.retained, 100.0 * self.fraction())
    }
}

/// Keeps images whose RD is below `max_rd` in both prompts.
pub fn filter_by_rd(table: &RankingTable, max_rd: f64) -> Filtered {
    let entries: BTreeMap<_, _> = table
        .entries
        .iter()
        .filter(|(_, r)| r.iter().all(|x| x.rd < max_rd))
        .map(|(k, v)| (k.clone(), *v))
        .collect();
    Filtered { retained: entries.len(), total: table.len(), table: RankingTable { entries } }
}

/// Events parsed from a JSON-lines log plus the count of unreadable lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventLog {
    pub events: Vec<ComparisonEvent>,
    pub malformed: usize,
}

/// One JSON object per line; blank lines are ignored, malformed ones counted.
pub fn parse_event_log(text: &str) -> EventLog {
    let mut log = EventLog::default();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ComparisonEvent>(line) {
            Ok(e) => log.events.push(e),
            Err(err) => {
                log::warn!("line {}: malformed event: {err}", i + 1);
                log.malformed += 1;
            }
        }
    }
    log
}

pub fn read_event_log(path: impl AsRef<std::path::Path>) -> Result<EventLog> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_event_log(&text))
}

pub fn event_log_line(event: &ComparisonEvent) -> String {
    serde_json::to_string(event).expect("events serialise")
}

pub fn write_event_log(events: &[ComparisonEvent]) -> String {
    events.iter().map(|e| event_log_line(e) + "\n").collect()
}

/// Decision times longer than this are treated as abandoned.
pub const MAX_DECISION_MS: u64 = 5 * 60 * 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DurationStats {
    pub count: usize,
    pub discarded: usize,
    pub median_ms: f64,
    pub mean_ms: f64,
    pub sd_ms: f64,
}

/// Summary of decision times, skipping pending events and anything over
/// [`MAX_DECISION_MS`]. `None` when nothing remains.
pub fn duration_stats(events: &[ComparisonEvent]) -> Option<DurationStats> {
    let all: Vec<u64> = events.iter().filter_map(|e| e.duration_ms).collect();
    let mut kept: Vec<f64> = all.iter().filter(|&&d| d <= MAX_DECISION_MS).map(|&d| d as f64).collect();
    if kept.is_empty() {
        return None;
    }
    kept.sort_by(f64::total_cmp);
    let n = kept.len();
    let median = if n % 2 == 1 { kept[n / 2] } else { (kept[n / 2 - 1] + kept[n / 2]) / 2.0 };
    let mean = kept.iter().sum::<f64>() / n as f64;
    let sd = if n > 1 {
        (kept.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Some(DurationStats { count: n, discarded: all.len() - n, median_ms: median, mean_ms: mean, sd_ms: sd })
}
