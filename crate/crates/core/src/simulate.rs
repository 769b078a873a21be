//! Synthetic survey logs drawn from a Bradley-Terry preference.
//!
//! Each item gets one latent log-strength per prompt. A comparison picks a
//! uniform pair, a uniform left/right order and a uniform prompt; the left
//! image wins with probability `s_l / (s_l + s_r)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal};

use crate::error::{Error, Result};
use crate::ranking::{Choice, ComparisonEvent, Prompt};

pub const DATASET: &str = "simulated";

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedSurvey {
    pub events: Vec<ComparisonEvent>,
    pub items: Vec<String>,
    /// Latent log-strengths, indexed like `items`; `[aesthetic, complexity]`.
    pub log_strength: Vec<[f64; 2]>,
}

impl SimulatedSurvey {
    pub fn strengths(&self, prompt: Prompt) -> Vec<f64> {
        let k = prompt as usize;
        self.log_strength.iter().map(|s| s[k]).collect()
    }
}

pub fn item_id(k: usize) -> String {
    format!("item-{k:03}")
}

pub fn simulate(events: usize, items: usize, seed: u64) -> Result<SimulatedSurvey> {
    if events < 1 {
        return Err(Error::Parameter("need at least one event".into()));
    }
    if items < 2 {
        return Err(Error::Parameter(format!("need at least two items, got {items}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let strength = Normal::new(0.0, 1.0).expect("valid normal");
    // Decision times centred on a few seconds with a long right tail.
    let duration = LogNormal::new(7_700f64.ln(), 0.6).expect("valid lognormal");

    let log_strength: Vec<[f64; 2]> =
        (0..items).map(|_| [strength.sample(&mut rng), strength.sample(&mut rng)]).collect();
    let ids: Vec<String> = (0..items).map(item_id).collect();

    let mut clock = 1_600_000_000_000u64;
    let mut out = Vec::with_capacity(events);
    for i in 0..events {
        let a = rng.random_range(0..items);
        let mut b = rng.random_range(0..items - 1);
        if b >= a {
            b += 1;
        }
        let prompt = if rng.random_bool(0.5) { Prompt::Aesthetic } else { Prompt::Complexity };
        let k = prompt as usize;
        let p_left = 1.0 / (1.0 + (log_strength[b][k] - log_strength[a][k]).exp());
        let outcome = if rng.random_bool(p_left) { Choice::Left } else { Choice::Right };
        let ms = duration.sample(&mut rng).round().max(1.0) as u64;
        clock += ms;
        out.push(ComparisonEvent {
            comparison_id: format!("sim-{i:06}"),
            session_id: format!("sim-session-{:04}", i / 10),
            dataset: DATASET.into(),
            left: ids[a].clone(),
            right: ids[b].clone(),
            prompt,
            outcome: Some(outcome),
            duration_ms: Some(ms),
            timestamp_ms: clock,
        });
    }
    Ok(SimulatedSurvey { events: out, items: ids, log_strength })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(simulate(50, 5, 9).unwrap(), simulate(50, 5, 9).unwrap());
        assert_ne!(simulate(50, 5, 9).unwrap().events, simulate(50, 5, 10).unwrap().events);
    }

    #[test]
    fn shape_of_log() {
        let s = simulate(1, 2, 0).unwrap();
        assert_eq!(s.events.len(), 1);
        let s = simulate(500, 4, 1).unwrap();
        assert!(s.events.iter().all(|e| e.left != e.right && e.check().is_ok()));
        assert!(s.events.windows(2).all(|w| w[0].timestamp_ms < w[1].timestamp_ms));
        assert!(simulate(0, 4, 1).is_err());
        assert!(simulate(5, 1, 1).is_err());
    }
}
