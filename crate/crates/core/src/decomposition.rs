//! Orthogonal decomposition of the delayed input port.
//!
//! With `k` photons in each port, every photon in port `b` is written as
//! `α·(reference packet) + √(1-α²)·(orthogonal packet)`. Expanding
//! `(α b† + √(1-α²) b̃†)^k` and normalizing the Fock states gives `k + 1`
//! mutually orthogonal components labelled by `j`, the number of port-`b`
//! photons in the reference packet. Component `j` has weight
//! `C(k,j)·u^j·(1-u)^(k-j)` with `u = α²`.

use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::scattering::Species;
use crate::spectral::OverlapModel;

/// Largest `k` for which the binomial table is used.
pub const MAX_PHOTONS_PER_MODE: usize = 32;

/// `k` photons in each input port, the port-`b` photons delayed so that each
/// overlaps the port-`a` packet with amplitude `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSpec {
    photons_per_mode: usize,
    alpha: f64,
}

impl InputSpec {
    pub fn new(photons_per_mode: usize, alpha: f64) -> Result<Self> {
        check_photons(photons_per_mode)?;
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(Self {
            photons_per_mode,
            alpha,
        })
    }

    pub fn photons_per_mode(&self) -> usize {
        self.photons_per_mode
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn total_photons(&self) -> usize {
        2 * self.photons_per_mode
    }
}

pub(crate) fn check_photons(k: usize) -> Result<()> {
    match k {
        0 => Err(Error::NoPhotons),
        k if k > MAX_PHOTONS_PER_MODE => Err(Error::TooManyPhotons(k)),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentLabel {
    /// All delayed photons overlap the reference packet.
    Indis,
    /// Some, but not all, delayed photons overlap.
    Inter,
    /// No delayed photon overlaps.
    Dist,
}

impl ComponentLabel {
    pub fn classify(j: usize, k: usize) -> Self {
        if j == k {
            ComponentLabel::Indis
        } else if j == 0 {
            ComponentLabel::Dist
        } else {
            ComponentLabel::Inter
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ComponentLabel::Indis => "indis",
            ComponentLabel::Inter => "inter",
            ComponentLabel::Dist => "dist",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTerm {
    /// Number of port-`b` photons in the reference packet.
    pub j: usize,
    pub weight: f64,
    pub species: Vec<Species>,
    pub label: ComponentLabel,
}

/// Species making up component `j` of a `k`-per-port input.
pub fn component_species(k: usize, j: usize) -> Vec<Species> {
    let mut species = vec![Species::new(k, j)];
    if j < k {
        species.push(Species::new(0, k - j));
    }
    species
}

/// Component weights for squared overlap `alpha_sq`, ordered by `j`
/// descending (index 0 is the fully indistinguishable component).
pub fn component_weights(k: usize, alpha_sq: f64) -> Vec<f64> {
    let rest = 1.0 - alpha_sq;
    (0..=k)
        .rev()
        .map(|j| binomial(k, j) as f64 * alpha_sq.powi(j as i32) * rest.powi((k - j) as i32))
        .collect()
}

/// All `k + 1` orthogonal components, ordered by `j` descending.
pub fn decompose(spec: &InputSpec) -> Vec<ComponentTerm> {
    let k = spec.photons_per_mode;
    let weights = component_weights(k, spec.alpha * spec.alpha);
    (0..=k)
        .rev()
        .zip(weights)
        .map(|(j, weight)| ComponentTerm {
            j,
            weight,
            species: component_species(k, j),
            label: ComponentLabel::classify(j, k),
        })
        .collect()
}

/// Weights aggregated by label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateWeights {
    pub indis: f64,
    pub inter: f64,
    pub dist: f64,
}

impl AggregateWeights {
    /// Collapse per-`j` weights (ordered `j = k, …, 0`).
    pub fn from_components(weights: &[f64]) -> Self {
        let last = weights.len() - 1;
        Self {
            indis: weights[0],
            inter: weights[1..last.max(1)].iter().sum(),
            dist: if last == 0 { 0.0 } else { weights[last] },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightRow {
    /// Delay in meters.
    pub x: f64,
    pub alpha_sq: f64,
    /// Per-component weights, `j = k` first.
    pub components: Vec<f64>,
    pub aggregate: AggregateWeights,
}

/// Component weights along a list of delays (meters).
pub fn weight_curves(k: usize, model: &OverlapModel, xs: &[f64]) -> Result<Vec<WeightRow>> {
    check_photons(k)?;
    xs.iter()
        .map(|&x| {
            let alpha_sq = model.overlap_sq_from_delay(x)?;
            let components = component_weights(k, alpha_sq);
            let aggregate = AggregateWeights::from_components(&components);
            Ok(WeightRow {
                x,
                alpha_sq,
                components,
                aggregate,
            })
        })
        .collect()
}
