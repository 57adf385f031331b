//! Event probabilities as weighted sums over decomposition components,
//! delay scans, and extremum location.
//!
//! `P(m,n; x) = Σ_j W_j(u(x)) · p_j(m,n)` where `u = α²(x)`. Every
//! quantity depends on the delay only through `u`, so extremum searches run
//! on `u ∈ [0, 1]` and are mapped back to `±x` afterwards. `u = 1` is zero
//! delay and `u = 0` is the infinite-delay limit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decomposition::{check_photons, component_weights, AggregateWeights};
use crate::error::{Error, Result};
use crate::scattering::{detection_table, CouplerSpec, DetectionTable, EventDistribution};
use crate::spectral::OverlapModel;

/// Smallest grid accepted by [`find_extrema`].
pub const MIN_GRID: usize = 64;

/// Target width of the golden-section bracket.
const GOLDEN_TOL: f64 = 1e-10;

/// Neighbouring grid values closer than this count as flat.
const FLAT_TOL: f64 = 1e-14;

/// `m` photons detected in output `c`, `n` in output `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Event {
    pub m: usize,
    pub n: usize,
}

impl Event {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    pub fn total(&self) -> usize {
        self.m + self.n
    }

    pub fn is_bunching(&self) -> bool {
        self.m == 0 || self.n == 0
    }

    fn check(&self, total: usize) -> Result<()> {
        if self.total() == total {
            Ok(())
        } else {
            Err(Error::EventMismatch {
                m: self.m,
                n: self.n,
                total,
            })
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

impl FromStr for Event {
    type Err = String;

    /// Parses `"m,n"`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (m, n) = s
            .split_once(',')
            .ok_or_else(|| format!("event `{s}` is not of the form m,n"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|e| format!("event `{s}`: {e}"))
        };
        Ok(Event::new(parse(m)?, parse(n)?))
    }
}

/// Every event of an `N = 2k` photon experiment: the two bunching events
/// first, then `(N−1,1), …, (1,N−1)`.
pub fn all_events(k: usize) -> Vec<Event> {
    let total = 2 * k;
    let mut events = vec![Event::new(total, 0), Event::new(0, total)];
    events.extend((1..total).rev().map(|m| Event::new(m, total - m)));
    events
}

/// Detection table of one `(k, coupler)` pair, reused across overlaps.
#[derive(Debug, Clone)]
pub struct Assembler {
    table: DetectionTable,
}

impl Assembler {
    pub fn new(k: usize, coupler: &CouplerSpec) -> Result<Self> {
        Ok(Self {
            table: detection_table(k, coupler)?,
        })
    }

    pub fn photons_per_mode(&self) -> usize {
        self.table.photons_per_mode()
    }

    pub fn total_photons(&self) -> usize {
        2 * self.photons_per_mode()
    }

    pub fn table(&self) -> &DetectionTable {
        &self.table
    }

    /// Probability of `event` at squared overlap `alpha_sq`.
    pub fn probability_at(&self, alpha_sq: f64, event: Event) -> Result<f64> {
        event.check(self.total_photons())?;
        Ok(self.eval(alpha_sq, event))
    }

    fn eval(&self, alpha_sq: f64, event: Event) -> f64 {
        component_weights(self.photons_per_mode(), alpha_sq)
            .iter()
            .zip(self.table.columns())
            .map(|(w, col)| w * col.get(event.m, event.n))
            .sum()
    }

    /// Full output distribution at squared overlap `alpha_sq`.
    pub fn distribution_at(&self, alpha_sq: f64) -> EventDistribution {
        let weights = component_weights(self.photons_per_mode(), alpha_sq);
        let mut probs = vec![0.0; self.total_photons() + 1];
        for (w, col) in weights.iter().zip(self.table.columns()) {
            for (acc, p) in probs.iter_mut().zip(col.probs()) {
                *acc += w * p;
            }
        }
        EventDistribution::from_probs(probs)
    }
}

/// `P(m,n)` for `k` photons per port with overlap amplitude `alpha`.
pub fn event_probability(k: usize, alpha: f64, event: Event, coupler: &CouplerSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    check_photons(k)?;
    event.check(2 * k)?;
    Assembler::new(k, coupler)?.probability_at(alpha * alpha, event)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    /// Delay in meters.
    pub x: f64,
    pub alpha_sq: f64,
    /// Component weights, `j = k` first.
    pub weights: Vec<f64>,
    pub indis: f64,
    pub inter: f64,
    pub dist: f64,
    /// One entry per requested event, in request order.
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub photons_per_mode: usize,
    pub events: Vec<Event>,
    pub rows: Vec<ScanRow>,
}

/// Weights and event probabilities along the delays `xs` (meters).
pub fn scan(
    k: usize,
    model: &OverlapModel,
    xs: &[f64],
    events: &[Event],
    coupler: &CouplerSpec,
) -> Result<ScanResult> {
    let assembler = Assembler::new(k, coupler)?;
    for e in events {
        e.check(2 * k)?;
    }
    let rows = xs
        .iter()
        .map(|&x| {
            let alpha_sq = model.overlap_sq_from_delay(x)?;
            let weights = component_weights(k, alpha_sq);
            let AggregateWeights { indis, inter, dist } =
                AggregateWeights::from_components(&weights);
            let probs = events
                .iter()
                .map(|&e| assembler.eval(alpha_sq, e))
                .collect();
            Ok(ScanRow {
                x,
                alpha_sq,
                weights,
                indis,
                inter,
                dist,
                probs,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ScanResult {
        photons_per_mode: k,
        events: events.to_vec(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// No sign change of the slope as `|x|` grows.
    Monotonic,
    NonMonotonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

/// An interior extremum; it occurs at both `+delay` and `-delay`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub kind: ExtremumKind,
    pub alpha_sq: f64,
    /// Non-negative delay in meters.
    pub delay: f64,
    pub probability: f64,
}

/// A run of grid cells over which the probability does not change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatRegion {
    pub alpha_sq_lo: f64,
    pub alpha_sq_hi: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremumReport {
    pub photons_per_mode: usize,
    pub event: Event,
    pub classification: Classification,
    pub extrema: Vec<Extremum>,
    pub flat_regions: Vec<FlatRegion>,
    /// `P` at `x = 0` (`u = 1`).
    pub p_zero_delay: f64,
    /// `P` for `|x| → ∞` (`u = 0`).
    pub p_infinite_delay: f64,
}

/// Locate interior extrema of `P(event)` on a `grid`-point `u` grid,
/// refined by golden section.
pub fn find_extrema(
    k: usize,
    event: Event,
    coupler: &CouplerSpec,
    model: &OverlapModel,
    grid: usize,
) -> Result<ExtremumReport> {
    if grid < MIN_GRID {
        return Err(Error::GridTooCoarse { got: grid });
    }
    let assembler = Assembler::new(k, coupler)?;
    event.check(2 * k)?;
    let f = |u: f64| assembler.eval(u, event);

    let cells = grid - 1;
    let us: Vec<f64> = (0..=cells).map(|i| i as f64 / cells as f64).collect();
    let values: Vec<f64> = us.iter().map(|&u| f(u)).collect();
    let signs: Vec<i8> = values
        .windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            if d.abs() <= FLAT_TOL {
                0
            } else if d > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();

    let mut flat_regions = Vec::new();
    let mut i = 0;
    while i < signs.len() {
        if signs[i] == 0 {
            let start = i;
            while i < signs.len() && signs[i] == 0 {
                i += 1;
            }
            flat_regions.push(FlatRegion {
                alpha_sq_lo: us[start],
                alpha_sq_hi: us[i],
                probability: values[start],
            });
        } else {
            i += 1;
        }
    }

    let nonzero: Vec<i8> = signs.iter().copied().filter(|&s| s != 0).collect();
    let classification = if nonzero.windows(2).any(|w| w[0] != w[1]) {
        Classification::NonMonotonic
    } else {
        Classification::Monotonic
    };

    let mut extrema = Vec::new();
    for (i, w) in signs.windows(2).enumerate() {
        if w[0] == 0 || w[1] == 0 || w[0] == w[1] {
            continue;
        }
        let kind = if w[0] < 0 {
            ExtremumKind::Minimum
        } else {
            ExtremumKind::Maximum
        };
        let orient = if kind == ExtremumKind::Minimum {
            1.0
        } else {
            -1.0
        };
        let g = |u: f64| orient * f(u);
        let (lo, hi) = (us[i], us[i + 2]);
        let u_star = polish(&g, golden_section(&g, lo, hi), lo, hi);
        extrema.push(Extremum {
            kind,
            alpha_sq: u_star,
            delay: model.delay_from_overlap(u_star)?,
            probability: f(u_star),
        });
    }

    Ok(ExtremumReport {
        photons_per_mode: k,
        event,
        classification,
        extrema,
        flat_regions,
        p_zero_delay: f(1.0),
        p_infinite_delay: f(0.0),
    })
}

fn golden_section(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while b - a > GOLDEN_TOL {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    0.5 * (a + b)
}

/// Golden section stalls once `g` differences fall below rounding, about
/// `√ε` from the vertex. Finish with symmetric three-point parabola steps.
fn polish(g: &impl Fn(f64) -> f64, mut u: f64, lo: f64, hi: f64) -> f64 {
    for _ in 0..2 {
        let h = 1e-5f64.min(u - lo).min(hi - u);
        if h <= 0.0 {
            break;
        }
        let (gm, g0, gp) = (g(u - h), g(u), g(u + h));
        let curvature = gp - 2.0 * g0 + gm;
        if curvature <= 0.0 {
            break;
        }
        let step = h * (gm - gp) / (2.0 * curvature);
        if step.abs() > h {
            break;
        }
        u += step;
    }
    u
}
