//! Ideal output distributions over Fock outcomes and seeded event streams.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interferometer::scatter_submatrix;
use crate::matrix::ComplexMatrix;
use crate::modes::{enumerate_full, enumerate_no_collision, ModeConfig};
use crate::permanent::perm_ryser;
use crate::rng::{self, Purpose};

/// Which outcome set a distribution is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Restriction {
    Full,
    NoCollision,
}

impl Restriction {
    pub fn outcomes(self, m: usize, n: usize) -> Result<Vec<ModeConfig>> {
        match self {
            Restriction::Full => enumerate_full(m, n),
            Restriction::NoCollision => enumerate_no_collision(m, n),
        }
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Restriction::Full => "full",
            Restriction::NoCollision => "no-collision",
        })
    }
}

impl FromStr for Restriction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Restriction::Full),
            "no-collision" => Ok(Restriction::NoCollision),
            other => Err(Error::Parse(format!("unknown restriction {other:?}"))),
        }
    }
}

/// Where a distribution or an event stream came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Boson,
    Distinguishable,
    Uniform,
    Empirical,
    File,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Boson => "boson",
            Source::Distinguishable => "distinguishable",
            Source::Uniform => "uniform",
            Source::Empirical => "empirical",
            Source::File => "file",
        })
    }
}

/// Probabilities over a sorted, duplicate-free outcome list.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    outcomes: Vec<ModeConfig>,
    probabilities: Vec<f64>,
    restriction: Restriction,
    source: Source,
    /// Probability mass of the outcome set before renormalization.
    raw_mass: f64,
}

impl OutcomeDistribution {
    /// Wraps explicit probabilities. The outcome list must be strictly
    /// increasing and the probabilities must lie in `[0, 1]` and sum to 1
    /// within `1e-10`.
    pub fn new(
        outcomes: Vec<ModeConfig>,
        probabilities: Vec<f64>,
        restriction: Restriction,
        source: Source,
    ) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::Domain("outcome set is empty".into()));
        }
        if outcomes.len() != probabilities.len() {
            return Err(Error::Alignment(format!(
                "{} outcomes but {} probabilities",
                outcomes.len(),
                probabilities.len()
            )));
        }
        if let Some(w) = outcomes.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!(
                "outcomes not strictly increasing at {}",
                outcomes[w + 1]
            )));
        }
        if let Some(p) = probabilities.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self {
            outcomes,
            probabilities,
            restriction,
            source,
            raw_mass: 1.0,
        })
    }

    /// Normalizes nonnegative weights, recording their total as the raw mass.
    fn from_weights(
        outcomes: Vec<ModeConfig>,
        weights: Vec<f64>,
        restriction: Restriction,
        source: Source,
        renormalize: bool,
    ) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::Domain(format!(
                "outcome set carries no probability mass ({total})"
            )));
        }
        let probabilities = if renormalize {
            weights.iter().map(|w| w / total).collect()
        } else {
            weights
        };
        let mut d = Self::new(outcomes, probabilities, restriction, source)?;
        d.raw_mass = total;
        Ok(d)
    }

    pub fn outcomes(&self) -> &[ModeConfig] {
        &self.outcomes
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn restriction(&self) -> Restriction {
        self.restriction
    }

    pub fn source(&self) -> Source {
        self.source
    }

    /// Mass of the outcome set under the unrestricted model; for a
    /// no-collision distribution this is the no-collision fraction.
    pub fn raw_mass(&self) -> f64 {
        self.raw_mass
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn index_of(&self, config: &ModeConfig) -> Option<usize> {
        self.outcomes.binary_search(config).ok()
    }

    pub fn probability_of(&self, config: &ModeConfig) -> Option<f64> {
        self.index_of(config).map(|i| self.probabilities[i])
    }

    /// Errors unless `other` is defined on the same ordered outcome list.
    pub fn check_aligned(&self, other: &OutcomeDistribution) -> Result<()> {
        if self.outcomes != other.outcomes {
            return Err(Error::Alignment(format!(
                "{} outcomes ({}) vs {} outcomes ({})",
                self.len(),
                self.restriction,
                other.len(),
                other.restriction
            )));
        }
        Ok(())
    }

    /// `config,probability` CSV with one row per outcome.
    pub fn to_csv(&self) -> String {
        let style = self.restriction == Restriction::NoCollision;
        let mut s = String::from("config,probability\n");
        for (c, p) in self.outcomes.iter().zip(&self.probabilities) {
            s.push_str(&format!("{},{:.17e}\n", c.label(style), p));
        }
        s
    }
}

/// `|perm(S)|^2 / (prod in_j! prod out_i!)` for the scattering submatrix `S`.
pub fn outcome_probability(
    u: &ComplexMatrix,
    input: &ModeConfig,
    output: &ModeConfig,
) -> Result<f64> {
    let sub = scatter_submatrix(u, input, output)?;
    let amp = perm_ryser(&sub)?;
    Ok(amp.norm_sqr() / (input.multiplicity_factorial() * output.multiplicity_factorial()))
}

/// Classical-particle probability `perm(|S|^2) / prod out_i!`.
pub fn distinguishable_probability(
    u: &ComplexMatrix,
    input: &ModeConfig,
    output: &ModeConfig,
) -> Result<f64> {
    let sub = scatter_submatrix(u, input, output)?;
    let moduli = sub.map(|z| z.norm_sqr().into());
    Ok(perm_ryser(&moduli)?.re / output.multiplicity_factorial())
}

fn model_distribution(
    u: &ComplexMatrix,
    input: &ModeConfig,
    restriction: Restriction,
    source: Source,
    prob: fn(&ComplexMatrix, &ModeConfig, &ModeConfig) -> Result<f64>,
) -> Result<OutcomeDistribution> {
    let m = u.square_dim()?;
    if input.modes() != m {
        return Err(Error::Config(format!(
            "input {input} has {} modes but the unitary has {m}",
            input.modes()
        )));
    }
    let outcomes = restriction.outcomes(m, input.photons())?;
    // indexed parallel collect keeps lexicographic order
    let weights = outcomes
        .par_iter()
        .map(|out| prob(u, input, out).map(|p| p.max(0.0)))
        .collect::<Result<Vec<f64>>>()?;
    let renormalize = restriction == Restriction::NoCollision;
    OutcomeDistribution::from_weights(outcomes, weights, restriction, source, renormalize)
}

/// Ideal boson-sampling distribution. The full distribution is returned
/// as computed; the no-collision one is renormalized with its pre-normalization
/// mass kept in [`OutcomeDistribution::raw_mass`].
pub fn boson_distribution(
    u: &ComplexMatrix,
    input: &ModeConfig,
    restriction: Restriction,
) -> Result<OutcomeDistribution> {
    model_distribution(u, input, restriction, Source::Boson, outcome_probability)
}

/// Distribution for fully distinguishable photons; same normalization contract as
/// [`boson_distribution`].
pub fn distinguishable_distribution(
    u: &ComplexMatrix,
    input: &ModeConfig,
    restriction: Restriction,
) -> Result<OutcomeDistribution> {
    model_distribution(
        u,
        input,
        restriction,
        Source::Distinguishable,
        distinguishable_probability,
    )
}

pub fn uniform_distribution(
    outcomes: Vec<ModeConfig>,
    restriction: Restriction,
) -> Result<OutcomeDistribution> {
    if outcomes.is_empty() {
        return Err(Error::Domain(
            "uniform distribution over an empty set".into(),
        ));
    }
    let p = 1.0 / outcomes.len() as f64;
    let probabilities = vec![p; outcomes.len()];
    let mut d = OutcomeDistribution::new(outcomes, probabilities, restriction, Source::Uniform)?;
    d.raw_mass = 1.0;
    Ok(d)
}

/// Observed configurations, tagged with their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EventStream {
    pub events: Vec<ModeConfig>,
    pub source: Source,
    pub seed: Option<u64>,
}

/// JSON sidecar written next to an event CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamMeta {
    pub seed: Option<u64>,
    pub source: Source,
    pub count: usize,
}

impl EventStream {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn meta(&self) -> StreamMeta {
        StreamMeta {
            seed: self.seed,
            source: self.source,
            count: self.events.len(),
        }
    }

    /// One configuration label per line.
    pub fn to_csv(&self, restriction: Restriction) -> String {
        let style = restriction == Restriction::NoCollision;
        let mut s = String::with_capacity(self.events.len() * 8);
        for e in &self.events {
            s.push_str(&e.label(style));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(
        text: &str,
        m: usize,
        restriction: Restriction,
        source: Source,
        seed: Option<u64>,
    ) -> Result<Self> {
        let style = restriction == Restriction::NoCollision;
        let events = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| ModeConfig::parse_label(l, m, style))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            events,
            source,
            seed,
        })
    }
}

/// Inverse-CDF sampler over a precomputed distribution.
///
/// Uniform variates past the last cumulative sum (rounding residue) fall into
/// the last outcome with positive probability.
pub fn draw_samples(dist: &OutcomeDistribution, count: usize, seed: u64) -> Result<EventStream> {
    if count == 0 {
        return Err(Error::Domain("sample count must be positive".into()));
    }
    let mut cdf = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for &p in dist.probabilities() {
        acc += p;
        cdf.push(acc);
    }
    let last_positive = dist
        .probabilities()
        .iter()
        .rposition(|&p| p > 0.0)
        .expect("normalized distribution has positive mass");
    let mut rng = rng::stream(seed, Purpose::EventSampling, 0);
    let events = (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            let k = cdf.partition_point(|&c| c <= u).min(last_positive);
            dist.outcomes()[k].clone()
        })
        .collect();
    Ok(EventStream {
        events,
        source: dist.source(),
        seed: Some(seed),
    })
}

/// Per-outcome event counts over `outcomes`.
pub fn count_events(events: &EventStream, outcomes: &[ModeConfig]) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; outcomes.len()];
    for e in &events.events {
        let k = outcomes
            .binary_search(e)
            .map_err(|_| Error::Membership(e.to_string()))?;
        counts[k] += 1;
    }
    Ok(counts)
}

/// Relative frequencies of the stream over the outcome set of `reference`.
pub fn empirical_frequencies(
    events: &EventStream,
    reference: &OutcomeDistribution,
) -> Result<OutcomeDistribution> {
    if events.is_empty() {
        return Err(Error::Domain("empty event stream".into()));
    }
    let counts = count_events(events, reference.outcomes())?;
    let total = events.len() as f64;
    let freqs = counts.iter().map(|&c| c as f64 / total).collect();
    let mut d = OutcomeDistribution::new(
        reference.outcomes().to_vec(),
        freqs,
        reference.restriction(),
        Source::Empirical,
    )?;
    d.raw_mass = 1.0;
    Ok(d)
}
