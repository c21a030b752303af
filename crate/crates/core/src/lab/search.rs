//! Iterative architecture search: synthesise, certify, sample, grow.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::sampling::{empirical_worst_error, Sampler};
use crate::error::{Error, Result};
use crate::network::{InputBox, LayerwiseNetwork};
use crate::synthesis::{synthesize, SynthesisOptions, SynthesisResult};

/// Source of candidate reduced networks; the SDP pipeline in production, a
/// stub in tests.
pub trait Synthesizer {
    fn synthesize(&self, full: &LayerwiseNetwork, partition: &[usize], bx: &InputBox) -> Result<SynthesisResult>;
}

#[derive(Debug, Clone, Default)]
pub struct SdpSynthesizer {
    pub opts: SynthesisOptions,
}

impl Synthesizer for SdpSynthesizer {
    fn synthesize(&self, full: &LayerwiseNetwork, partition: &[usize], bx: &InputBox) -> Result<SynthesisResult> {
        synthesize(full, partition, bx, &self.opts)
    }
}

/// Sequence of reduced layer widths tried by the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    Explicit(Vec<Vec<usize>>),
    /// Starts at `start`, adds 1 to every width each step; once a width would
    /// exceed `ceiling`, restarts from `start` with one more layer (a copy
    /// of the last start width).
    Grow { start: Vec<usize>, ceiling: usize },
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        let bad = |p: &[usize]| p.is_empty() || p.contains(&0);
        match self {
            Schedule::Explicit(list) if list.is_empty() || list.iter().any(|p| bad(p)) => {
                Err(Error::InvalidOptions("explicit schedule needs nonempty partitions of positive widths".into()))
            }
            Schedule::Grow { start, ceiling } if bad(start) || start.iter().any(|w| w > ceiling) => {
                Err(Error::InvalidOptions("grow schedule needs positive start widths not above the ceiling".into()))
            }
            _ => Ok(()),
        }
    }

    /// Partition for iteration `j` (0-based), `None` past the end.
    pub fn partition(&self, j: usize) -> Option<Vec<usize>> {
        match self {
            Schedule::Explicit(list) => list.get(j).cloned(),
            Schedule::Grow { start, ceiling } => {
                let mut base = start.clone();
                let mut j = j;
                loop {
                    let room = ceiling - base.iter().max().copied().unwrap_or(0);
                    if j <= room {
                        return Some(base.iter().map(|w| w + j).collect());
                    }
                    j -= room + 1;
                    base.push(*start.last().unwrap_or(&1));
                }
            }
        }
    }
}

/// How the two thresholds combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopRule {
    /// Stop when `p ≤ ε₁` or `q ≤ ε₂`.
    #[default]
    Either,
    /// Stop when `p ≤ ε₁` and `q ≤ ε₂`.
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub eps1: f64,
    pub eps2: f64,
    pub schedule: Schedule,
    pub max_iters: usize,
    pub stop: StopRule,
    pub sampler: Sampler,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    /// 1-based.
    pub iteration: usize,
    pub partition: Vec<usize>,
    /// Certified bound `sup_x γₓ‖x‖² + γ`.
    pub p: Option<f64>,
    /// Sampled worst error.
    pub q: Option<f64>,
    pub status: String,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub records: Vec<SearchRecord>,
}

impl SearchTrace {
    /// CSV with columns `iteration,partition,p,q,status,wall_time_s`
    /// (partition widths joined by `-`, missing values empty).
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut s = String::from("iteration,partition,p,q,status,wall_time_s\n");
        for r in &self.records {
            let part: Vec<String> = r.partition.iter().map(|w| w.to_string()).collect();
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.iteration,
                part.join("-"),
                opt(r.p),
                opt(r.q),
                r.status,
                r.wall_time_s
            ));
        }
        s
    }
}

/// Tries the schedule's partitions in order until the stop rule fires or
/// `max_iters` is reached.
///
/// Returns the result of the stopping iteration, or, when the budget runs
/// out, the candidate with the smallest certified bound. Infeasible and
/// failed solves are recorded and skipped; other errors abort.
pub fn architecture_search(
    full: &LayerwiseNetwork,
    bx: &InputBox,
    cfg: &SearchConfig,
    synth: &dyn Synthesizer,
) -> Result<(SynthesisResult, SearchTrace)> {
    if !(cfg.eps1 > 0.0 && cfg.eps2 > 0.0) {
        return Err(Error::InvalidOptions("eps1 and eps2 must be positive".into()));
    }
    if cfg.max_iters == 0 {
        return Err(Error::InvalidOptions("max_iters must be at least 1".into()));
    }
    cfg.schedule.validate()?;

    let mut trace = SearchTrace::default();
    let mut best: Option<SynthesisResult> = None;
    for j in 0..cfg.max_iters {
        let Some(partition) = cfg.schedule.partition(j) else { break };
        let started = Instant::now();
        let mut record =
            SearchRecord { iteration: j + 1, partition: partition.clone(), p: None, q: None, status: String::new(), wall_time_s: 0.0 };
        let outcome = synth.synthesize(full, &partition, bx);
        let result = match outcome {
            Ok(r) => r,
            Err(e @ (Error::Infeasible(_) | Error::SolverFailed(_))) => {
                record.status = match e {
                    Error::Infeasible(_) => "infeasible".into(),
                    _ => "failed".into(),
                };
                record.wall_time_s = started.elapsed().as_secs_f64();
                log::info!("search iteration {}: {:?} {}", j + 1, partition, e);
                trace.records.push(record);
                continue;
            }
            Err(e) => return Err(e),
        };
        let p = result.bound_sup;
        let q = empirical_worst_error(full, &result.reduced, bx, cfg.sampler)?.q;
        record.p = Some(p);
        record.q = Some(q);
        record.status = result.solution.status.as_str().to_string();
        record.wall_time_s = started.elapsed().as_secs_f64();
        log::info!("search iteration {}: {:?} p = {p:.4e} q = {q:.4e}", j + 1, partition);
        trace.records.push(record);

        let stop = match cfg.stop {
            StopRule::Either => p <= cfg.eps1 || q <= cfg.eps2,
            StopRule::Both => p <= cfg.eps1 && q <= cfg.eps2,
        };
        if stop {
            return Ok((result, trace));
        }
        if best.as_ref().is_none_or(|b| p < b.bound_sup) {
            best = Some(result);
        }
    }
    match best {
        Some(b) => Ok((b, trace)),
        None => Err(Error::SearchExhausted(Box::new(trace))),
    }
}
