//! Seeded synthetic cohorts.
//!
//! The generator is a stand-in for unpublished experimental data: inputs
//! are uniform on `input_range`, a shared non-negative technology matrix
//! maps inputs to frontier outputs, and each unit loses a random fraction
//! (at most `technology_noise`) of every output. The random stream comes
//! from [`SplitMix64`], whose constants are fixed below, so a given
//! `(spec, seed)` produces the same cohort on every platform.

use serde::Serialize;
use thiserror::Error;

use crate::domain::{validate_cohort, Cohort, DmuRecord};

/// SplitMix64 (Steele, Lea and Flood). State advances by the golden-ratio
/// increment; outputs pass through a two-round xor-shift-multiply mixer.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    const MIX1: u64 = 0xBF58_476D_1CE4_E5B9;
    const MIX2: u64 = 0x94D0_49BB_1331_11EB;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(Self::GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(Self::MIX1);
        z = (z ^ (z >> 27)).wrapping_mul(Self::MIX2);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.next_f64()
    }
}

pub const PAPER_GROUP_SIZES: [(&str, usize); 9] = [
    ("A", 68),
    ("B", 136),
    ("C", 90),
    ("D", 100),
    ("E", 120),
    ("F", 140),
    ("G", 70),
    ("H", 111),
    ("I", 165),
];

/// Technology matrix entries are drawn from this range.
const TECHNOLOGY_RANGE: (f64, f64) = (0.1, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenSpec {
    /// Group labels and sizes, in output order.
    pub group_sizes: Vec<(String, usize)>,
    pub n_inputs: usize,
    pub n_outputs: usize,
    pub seed: u64,
    pub input_range: (f64, f64),
    pub technology_noise: f64,
}

impl GenSpec {
    pub const DEFAULT_INPUT_RANGE: (f64, f64) = (65.0, 100.0);
    pub const DEFAULT_NOISE: f64 = 0.5;

    /// Nine groups of 68..165 units, 10 inputs and 6 outputs.
    pub fn paper_default(seed: u64) -> Self {
        Self {
            group_sizes: PAPER_GROUP_SIZES
                .iter()
                .map(|&(g, n)| (g.to_string(), n))
                .collect(),
            n_inputs: 10,
            n_outputs: 6,
            seed,
            input_range: Self::DEFAULT_INPUT_RANGE,
            technology_noise: Self::DEFAULT_NOISE,
        }
    }

    pub fn total(&self) -> usize {
        self.group_sizes.iter().map(|(_, n)| n).sum()
    }

    pub fn validate(&self) -> Result<(), GenSpecError> {
        if self.group_sizes.is_empty() {
            return Err(GenSpecError::NoGroups);
        }
        for (i, (label, count)) in self.group_sizes.iter().enumerate() {
            if label.is_empty() || label.contains([',', '"', '\n', '\r']) {
                return Err(GenSpecError::BadLabel(label.clone()));
            }
            if *count == 0 {
                return Err(GenSpecError::EmptyGroup(label.clone()));
            }
            if self.group_sizes[..i].iter().any(|(l, _)| l == label) {
                return Err(GenSpecError::DuplicateGroup(label.clone()));
            }
        }
        if self.n_inputs == 0 || self.n_outputs == 0 {
            return Err(GenSpecError::Dimensions);
        }
        let (low, high) = self.input_range;
        if !(low > 0.0 && high > low && high.is_finite()) {
            return Err(GenSpecError::InputRange(low, high));
        }
        if !(0.0..1.0).contains(&self.technology_noise) {
            return Err(GenSpecError::Noise(self.technology_noise));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenSpecError {
    #[error("no groups given")]
    NoGroups,
    #[error("group '{0}' has zero members")]
    EmptyGroup(String),
    #[error("group '{0}' listed twice")]
    DuplicateGroup(String),
    #[error("invalid group label '{0}'")]
    BadLabel(String),
    #[error("need at least one input and one output")]
    Dimensions,
    #[error("input range ({0}, {1}) must satisfy 0 < low < high")]
    InputRange(f64, f64),
    #[error("technology noise {0} must be in [0, 1)")]
    Noise(f64),
}

pub fn generate(spec: &GenSpec) -> Result<Cohort, GenSpecError> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    let (n, m) = (spec.n_inputs, spec.n_outputs);
    let technology: Vec<Vec<f64>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| rng.uniform(TECHNOLOGY_RANGE.0, TECHNOLOGY_RANGE.1))
                .collect()
        })
        .collect();

    let (low, high) = spec.input_range;
    let mut records = Vec::with_capacity(spec.total());
    for (label, count) in &spec.group_sizes {
        for k in 1..=*count {
            let inputs: Vec<f64> = (0..n).map(|_| rng.uniform(low, high)).collect();
            let outputs = technology
                .iter()
                .map(|row| {
                    let frontier: f64 = row.iter().zip(&inputs).map(|(t, x)| t * x).sum();
                    frontier * (1.0 - spec.technology_noise * rng.next_f64())
                })
                .collect();
            records.push(DmuRecord::new(format!("{label}-{k:04}"), label.clone(), inputs, outputs));
        }
    }
    Ok(validate_cohort(records).expect("generated records satisfy cohort invariants"))
}
