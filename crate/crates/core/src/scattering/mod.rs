//! Output statistics of a lossless two-mode coupler.
//!
//! Input ports `a`, `b` map onto output ports `c`, `d` as
//! `a† → t·c† + r·d†`, `b† → r·c† − t·d†` with `r = √(1−t²)`. Photons of one
//! species are mutually indistinguishable and interfere; different species
//! occupy orthogonal internal states, so their output counts add and their
//! distributions convolve.

pub mod exact;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, factorial_f64};
use crate::decomposition::{check_photons, component_species, ComponentLabel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplerSpec {
    transmission: f64,
}

impl CouplerSpec {
    pub fn new(transmission: f64) -> Result<Self> {
        if !(transmission > 0.0 && transmission < 1.0) {
            return Err(Error::InvalidTransmission(transmission));
        }
        Ok(Self { transmission })
    }

    /// 50:50 coupler, `t = r = 1/√2`.
    pub fn balanced() -> Self {
        Self {
            transmission: std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    pub fn transmission(&self) -> f64 {
        self.transmission
    }

    pub fn reflection(&self) -> f64 {
        if self.is_balanced() {
            return self.transmission;
        }
        self.reflectance().sqrt()
    }

    /// `T = t²`, exactly `1/2` for the balanced coupler.
    pub fn transmittance(&self) -> f64 {
        if self.is_balanced() {
            0.5
        } else {
            self.transmission * self.transmission
        }
    }

    /// `R = 1 − T`.
    pub fn reflectance(&self) -> f64 {
        if self.is_balanced() {
            0.5
        } else {
            (1.0 - self.transmission) * (1.0 + self.transmission)
        }
    }

    pub fn is_balanced(&self) -> bool {
        self.transmission == std::f64::consts::FRAC_1_SQRT_2
    }
}

impl Default for CouplerSpec {
    fn default() -> Self {
        Self::balanced()
    }
}

/// A set of mutually indistinguishable photons: `a_count` enter port `a`,
/// `b_count` enter port `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Species {
    pub a_count: usize,
    pub b_count: usize,
}

impl Species {
    pub fn new(a_count: usize, b_count: usize) -> Self {
        Self { a_count, b_count }
    }

    pub fn total(&self) -> usize {
        self.a_count + self.b_count
    }
}

/// Probabilities of the events `(m, N − m)` for `m = 0..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventDistribution {
    total: usize,
    probs: Vec<f64>,
}

impl EventDistribution {
    /// `probs[m]` is the probability of `(m, probs.len() − 1 − m)`.
    pub fn from_probs(probs: Vec<f64>) -> Self {
        assert!(!probs.is_empty(), "distribution needs at least one event");
        Self {
            total: probs.len() - 1,
            probs,
        }
    }

    pub fn vacuum() -> Self {
        Self::from_probs(vec![1.0])
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Probability of `m` photons in `c` and `n` in `d`; zero if `m + n`
    /// is not the photon number of the distribution.
    pub fn get(&self, m: usize, n: usize) -> f64 {
        if m + n == self.total {
            self.probs[m]
        } else {
            0.0
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(m, &p)| (m, self.total - m, p))
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// Output distribution of one species.
///
/// Expands `(t c† + r d†)^p (r c† − t d†)^q`, normalizes each monomial
/// `c†^m d†^n` by `√(m! n!)` and squares.
///
/// Term `i` of the `c†^m d†^n` coefficient (`i` photons from `a` and
/// `l = m − i` from `b` exit at `c`) carries `t^(2i+q−m) r^(p−2i+m)`. The
/// parities of both exponents do not depend on `i`, so the squared
/// coefficient is `T^(a₀) R^(b₀) · (Σ_i c_i T^(i−lo) R^(hi−i))²` with
/// `T = t²`, `R = r²`. This keeps balanced-coupler values dyadic.
pub fn species_distribution(sp: Species, coupler: &CouplerSpec) -> EventDistribution {
    let (p, q) = (sp.a_count, sp.b_count);
    let total = p + q;
    if total == 0 {
        return EventDistribution::vacuum();
    }
    let big_t = coupler.transmittance();
    let big_r = coupler.reflectance();
    let input_norm = factorial_f64(p) * factorial_f64(q);

    let probs = (0..=total)
        .map(|m| {
            let n = total - m;
            let lo = m.saturating_sub(q);
            let hi = m.min(p);
            let reduced: f64 = (lo..=hi)
                .map(|i| {
                    let l = m - i;
                    let sign = if (q - l) % 2 == 0 { 1.0 } else { -1.0 };
                    sign * (binomial(p, i) * binomial(q, l)) as f64
                        * big_t.powi((i - lo) as i32)
                        * big_r.powi((hi - i) as i32)
                })
                .sum();
            let t_exp = 2 * lo + q - m;
            let r_exp = p + m - 2 * hi;
            reduced
                * reduced
                * big_t.powi(t_exp as i32)
                * big_r.powi(r_exp as i32)
                * (factorial_f64(m) * factorial_f64(n) / input_norm)
        })
        .collect();
    EventDistribution::from_probs(probs)
}

/// Distribution of summed output counts of independent species.
pub fn convolve(dists: &[EventDistribution]) -> Result<EventDistribution> {
    let (first, rest) = dists.split_first().ok_or(Error::EmptyConvolution)?;
    Ok(rest.iter().fold(first.clone(), |acc, d| {
        let mut probs = vec![0.0; acc.total + d.total + 1];
        for (i, &pa) in acc.probs.iter().enumerate() {
            for (j, &pb) in d.probs.iter().enumerate() {
                probs[i + j] += pa * pb;
            }
        }
        EventDistribution::from_probs(probs)
    }))
}

/// Detection probabilities of every decomposition component of a
/// `k`-per-port input.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionTable {
    k: usize,
    /// Indexed like the decomposition: `columns[0]` is `j = k`.
    columns: Vec<EventDistribution>,
}

impl DetectionTable {
    pub fn photons_per_mode(&self) -> usize {
        self.k
    }

    pub fn columns(&self) -> &[EventDistribution] {
        &self.columns
    }

    /// Distribution of component `j`.
    pub fn component(&self, j: usize) -> &EventDistribution {
        &self.columns[self.k - j]
    }

    pub fn label(&self, j: usize) -> ComponentLabel {
        ComponentLabel::classify(j, self.k)
    }
}

pub fn detection_table(k: usize, coupler: &CouplerSpec) -> Result<DetectionTable> {
    check_photons(k)?;
    let columns = (0..=k)
        .rev()
        .map(|j| {
            let dists: Vec<_> = component_species(k, j)
                .into_iter()
                .map(|sp| species_distribution(sp, coupler))
                .collect();
            convolve(&dists)
        })
        .collect::<Result<_>>()?;
    Ok(DetectionTable { k, columns })
}
