//! Distribution metrics and sequential validation of sampler output.
//!
//! Two sequential tests are provided. [`bayesian_trace`] accumulates the log
//! likelihood ratio between a target hypothesis and an alternative and
//! reports the posterior of the target under equal priors.
//! [`counter_trace`] bins each event's likelihood ratio into five bands and
//! moves an integer counter accordingly; a positive final counter favours
//! indistinguishable photons.

use serde::{Deserialize, Serialize};

use crate::distributions::{EventStream, OutcomeDistribution};
use crate::error::{Error, Result};

/// Default dead-band threshold of the likelihood-ratio counter.
pub const DEFAULT_A1: f64 = 0.85;
/// Default strong-evidence threshold of the likelihood-ratio counter.
pub const DEFAULT_A2: f64 = 1.8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    /// `sum_i sqrt(p_i q_i)`
    pub similarity: f64,
    /// `1/2 sum_i |p_i - q_i|`
    pub distance: f64,
    /// `max_i |sqrt(p_i) - sqrt(q_i)|`
    pub epsilon: f64,
}

/// Similarity, total-variation distance and additive amplitude error in one pass.
pub fn metrics(p: &OutcomeDistribution, q: &OutcomeDistribution) -> Result<MetricReport> {
    p.check_aligned(q)?;
    let mut similarity = 0.0;
    let mut distance = 0.0;
    let mut epsilon = 0.0f64;
    for (&a, &b) in p.probabilities().iter().zip(q.probabilities()) {
        similarity += (a * b).sqrt();
        distance += (a - b).abs();
        epsilon = epsilon.max((a.sqrt() - b.sqrt()).abs());
    }
    Ok(MetricReport {
        similarity: similarity.min(1.0),
        distance: 0.5 * distance,
        epsilon,
    })
}

/// Running log odds and posterior of the target hypothesis, per event.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesianTrace {
    pub log_chi: Vec<f64>,
    pub posterior: Vec<f64>,
}

impl BayesianTrace {
    pub fn final_posterior(&self) -> Option<f64> {
        self.posterior.last().copied()
    }

    /// Number of events after which the posterior first reaches `level`.
    pub fn events_to(&self, level: f64) -> Option<usize> {
        self.posterior
            .iter()
            .position(|&p| p >= level)
            .map(|k| k + 1)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("event_index,log_chi,posterior\n");
        for (k, (l, p)) in self.log_chi.iter().zip(&self.posterior).enumerate() {
            s.push_str(&format!("{},{:e},{:e}\n", k + 1, l, p));
        }
        s
    }
}

/// `chi / (chi + 1)` from `ln chi`, clamped to `[0, 1]`.
pub fn posterior_from_log_odds(log_chi: f64) -> f64 {
    let p = if log_chi == f64::NEG_INFINITY {
        0.0
    } else if log_chi >= 0.0 {
        1.0 / (1.0 + (-log_chi).exp())
    } else {
        let e = log_chi.exp();
        e / (1.0 + e)
    };
    p.clamp(0.0, 1.0)
}

/// Per-event `ln(q_x / r_x)`; `-inf` where the target assigns zero probability.
pub fn log_likelihood_terms(
    events: &EventStream,
    target: &OutcomeDistribution,
    alternative: &OutcomeDistribution,
) -> Result<Vec<f64>> {
    target.check_aligned(alternative)?;
    events
        .events
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let i = target
                .index_of(e)
                .ok_or_else(|| Error::Membership(e.to_string()))?;
            let q = target.probabilities()[i];
            let r = alternative.probabilities()[i];
            if r <= 0.0 {
                return Err(Error::UndefinedRatio { index: k });
            }
            Ok(if q <= 0.0 {
                f64::NEG_INFINITY
            } else {
                q.ln() - r.ln()
            })
        })
        .collect()
}

/// Sequential Bayesian comparison of `target` against `alternative` with
/// equal priors, accumulated in log space.
pub fn bayesian_trace(
    events: &EventStream,
    target: &OutcomeDistribution,
    alternative: &OutcomeDistribution,
) -> Result<BayesianTrace> {
    let terms = log_likelihood_terms(events, target, alternative)?;
    let mut log_chi = Vec::with_capacity(terms.len());
    let mut posterior = Vec::with_capacity(terms.len());
    let mut acc = 0.0f64;
    for t in terms {
        acc += t; // -inf is absorbing
        log_chi.push(acc);
        posterior.push(posterior_from_log_odds(acc));
    }
    Ok(BayesianTrace { log_chi, posterior })
}

/// Counter step for likelihood ratio `l` with thresholds `0 < a1 < 1 < a2`.
///
/// Bands, first match wins:
/// `a1 < l < 1/a1` -> 0, `1/a1 <= l < a2` -> +1, `l >= a2` -> +2,
/// `1/a2 < l <= a1` -> -1, `l <= 1/a2` -> -2.
pub fn counter_step(l: f64, a1: f64, a2: f64) -> i64 {
    if a1 < l && l < 1.0 / a1 {
        0
    } else if 1.0 / a1 <= l && l < a2 {
        1
    } else if l >= a2 {
        2
    } else if 1.0 / a2 < l && l <= a1 {
        -1
    } else {
        -2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterTrace {
    pub a1: f64,
    pub a2: f64,
    /// `p_ind / q_dis` per event; NaN for skipped events.
    pub ratios: Vec<f64>,
    pub counter: Vec<i64>,
    /// Indices of events where both hypotheses assign zero probability.
    pub skipped: Vec<usize>,
}

impl CounterTrace {
    pub fn final_counter(&self) -> i64 {
        self.counter.last().copied().unwrap_or(0)
    }

    /// True when the evidence favours indistinguishable photons.
    pub fn indistinguishable(&self) -> bool {
        self.final_counter() > 0
    }

    /// Counter value after `k` events (0 before the first event).
    pub fn counter_after(&self, k: usize) -> Option<i64> {
        match k {
            0 => Some(0),
            k => self.counter.get(k - 1).copied(),
        }
    }

    /// Number of events after which the counter first becomes positive.
    pub fn events_to_positive(&self) -> Option<usize> {
        self.counter.iter().position(|&c| c > 0).map(|k| k + 1)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("event_index,L,counter\n");
        for (k, (l, c)) in self.ratios.iter().zip(&self.counter).enumerate() {
            s.push_str(&format!("{},{:e},{}\n", k + 1, l, c));
        }
        s
    }
}

/// Likelihood-ratio counter of indistinguishable (`p_ind`) against
/// distinguishable (`q_dis`) photons.
pub fn counter_trace(
    events: &EventStream,
    p_ind: &OutcomeDistribution,
    q_dis: &OutcomeDistribution,
    a1: f64,
    a2: f64,
) -> Result<CounterTrace> {
    p_ind.check_aligned(q_dis)?;
    let pairs = events
        .events
        .iter()
        .map(|e| {
            let i = p_ind
                .index_of(e)
                .ok_or_else(|| Error::Membership(e.to_string()))?;
            Ok((p_ind.probabilities()[i], q_dis.probabilities()[i]))
        })
        .collect::<Result<Vec<_>>>()?;
    counter_from_pairs(&pairs, a1, a2)
}

/// Counter over per-event `(p_ind, q_dis)` probability pairs.
///
/// `q_dis = 0 < p_ind` counts as an infinite ratio; events where both are
/// zero are skipped and recorded.
pub fn counter_from_pairs(pairs: &[(f64, f64)], a1: f64, a2: f64) -> Result<CounterTrace> {
    if !(0.0 < a1 && a1 < 1.0 && 1.0 < a2 && a2.is_finite()) {
        return Err(Error::Domain(format!(
            "counter thresholds need 0 < a1 < 1 < a2, got a1={a1}, a2={a2}"
        )));
    }
    let mut ratios = Vec::with_capacity(pairs.len());
    let mut counter = Vec::with_capacity(pairs.len());
    let mut skipped = Vec::new();
    let mut c = 0i64;
    for (k, &(p, q)) in pairs.iter().enumerate() {
        let l = if q > 0.0 {
            p / q
        } else if p > 0.0 {
            f64::INFINITY
        } else {
            f64::NAN
        };
        if l.is_nan() {
            skipped.push(k);
        } else {
            c += counter_step(l, a1, a2);
        }
        ratios.push(l);
        counter.push(c);
    }
    Ok(CounterTrace {
        a1,
        a2,
        ratios,
        counter,
        skipped,
    })
}

/// Summary written by the validate command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub final_posterior: f64,
    pub final_counter: i64,
    pub events_to_998: Option<usize>,
    pub events_to_positive: Option<usize>,
    pub metrics: MetricReport,
    pub events: usize,
    pub skipped_events: usize,
}

impl Verdict {
    pub fn new(bayes: &BayesianTrace, counter: &CounterTrace, metrics: MetricReport) -> Self {
        Self {
            final_posterior: bayes.final_posterior().unwrap_or(0.5),
            final_counter: counter.final_counter(),
            events_to_998: bayes.events_to(0.998),
            events_to_positive: counter.events_to_positive(),
            metrics,
            events: counter.counter.len(),
            skipped_events: counter.skipped.len(),
        }
    }
}
