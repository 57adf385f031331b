//! Brute-force reference: full Fock-space evolution over two spatial modes
//! times two internal (temporal) modes.
//!
//! Nothing here goes through the component/species machinery. The input
//! state is expanded as a polynomial in creation operators, pushed through
//! the coupler mode by mode, and the internal mode is traced out at the end.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scattering::CouplerSpec;

/// Occupations of `(spatial 0, e₁), (spatial 0, e₂), (spatial 1, e₁),
/// (spatial 1, e₂)`. Spatial modes are `a, b` before the coupler and
/// `c, d` after it; `e₁` is the reference packet, `e₂` its orthogonal
/// complement.
pub type Occupation = [usize; 4];

const MODES: usize = 4;

fn factorial(n: usize) -> f64 {
    (2..=n).map(|i| i as f64).product()
}

fn fock_norm(occ: &Occupation) -> f64 {
    occ.iter().map(|&n| factorial(n)).product::<f64>().sqrt()
}

/// Polynomial in the four creation operators, keyed by exponent vector.
#[derive(Debug, Clone)]
struct CreationPolynomial(BTreeMap<Occupation, Complex64>);

impl CreationPolynomial {
    fn one() -> Self {
        Self(BTreeMap::from([([0; MODES], Complex64::new(1.0, 0.0))]))
    }

    /// Multiply by the linear form `Σ_o coeffs[o]·x_o`.
    fn times_linear(&self, coeffs: &[Complex64; MODES]) -> Self {
        let mut out = BTreeMap::new();
        for (exp, c) in &self.0 {
            for (o, &f) in coeffs.iter().enumerate() {
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut e = *exp;
                e[o] += 1;
                *out.entry(e).or_insert_with(|| Complex64::new(0.0, 0.0)) += c * f;
            }
        }
        Self(out)
    }

    /// Act on the vacuum: `Π x_o^{m_o}|0⟩ = √(Π m_o!)|m⟩`.
    fn into_state(self) -> BTreeMap<Occupation, Complex64> {
        self.0
            .into_iter()
            .map(|(occ, c)| (occ, c * fock_norm(&occ)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultimodeState {
    amplitudes: BTreeMap<Occupation, Complex64>,
}

impl MultimodeState {
    pub fn vacuum() -> Self {
        Self {
            amplitudes: BTreeMap::from([([0; MODES], Complex64::new(1.0, 0.0))]),
        }
    }

    pub fn from_amplitudes(amplitudes: impl IntoIterator<Item = (Occupation, Complex64)>) -> Self {
        Self {
            amplitudes: amplitudes.into_iter().collect(),
        }
    }

    pub fn amplitude(&self, occ: &Occupation) -> Complex64 {
        self.amplitudes
            .get(occ)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Total photon number, if every occupied basis state agrees.
    pub fn photon_number(&self) -> Option<usize> {
        let mut totals = self
            .amplitudes
            .iter()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(o, _)| o.iter().sum::<usize>());
        let first = totals.next()?;
        totals.all(|t| t == first).then_some(first)
    }
}

/// `∝ (a†_{e₁})^k (α b†_{e₁} + √(1−α²) b†_{e₂})^k |0⟩`, normalized.
pub fn prepare(k: usize, alpha: f64) -> Result<MultimodeState> {
    if k == 0 {
        return Err(Error::NoPhotons);
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let zero = Complex64::new(0.0, 0.0);
    let a_ref = [Complex64::new(1.0, 0.0), zero, zero, zero];
    let b_delayed = [
        zero,
        zero,
        Complex64::new(alpha, 0.0),
        Complex64::new((1.0 - alpha * alpha).max(0.0).sqrt(), 0.0),
    ];
    let mut poly = CreationPolynomial::one();
    for _ in 0..k {
        poly = poly.times_linear(&a_ref);
    }
    for _ in 0..k {
        poly = poly.times_linear(&b_delayed);
    }
    let mut amplitudes = poly.into_state();
    let norm = amplitudes
        .values()
        .map(|a| a.norm_sqr())
        .sum::<f64>()
        .sqrt();
    for a in amplitudes.values_mut() {
        *a /= norm;
    }
    Ok(MultimodeState { amplitudes })
}

/// Output-mode coefficients of each input creation operator:
/// `a†_e → t c†_e + r d†_e`, `b†_e → r c†_e − t d†_e`.
fn coupler_columns(coupler: &CouplerSpec) -> [[Complex64; MODES]; MODES] {
    let t = Complex64::new(coupler.transmission(), 0.0);
    let r = Complex64::new(coupler.reflection(), 0.0);
    let z = Complex64::new(0.0, 0.0);
    [
        [t, z, r, z],  // a e1
        [z, t, z, r],  // a e2
        [r, z, -t, z], // b e1
        [z, r, z, -t], // b e2
    ]
}

/// Apply the coupler to the spatial index, identically for each internal
/// mode.
pub fn evolve(state: &MultimodeState, coupler: &CouplerSpec) -> MultimodeState {
    let columns = coupler_columns(coupler);
    let mut out: BTreeMap<Occupation, Complex64> = BTreeMap::new();
    for (occ, &amp) in &state.amplitudes {
        let mut poly = CreationPolynomial::one();
        for (mode, &count) in occ.iter().enumerate() {
            for _ in 0..count {
                poly = poly.times_linear(&columns[mode]);
            }
        }
        let scale = amp / fock_norm(occ);
        for (o, a) in poly.into_state() {
            *out.entry(o).or_insert_with(|| Complex64::new(0.0, 0.0)) += scale * a;
        }
    }
    MultimodeState { amplitudes: out }
}

/// Probability of `m` photons in `c` and `n` in `d`, summed over how they
/// split between the internal modes.
pub fn oracle_event_probability(
    k: usize,
    alpha: f64,
    m: usize,
    n: usize,
    coupler: &CouplerSpec,
) -> Result<f64> {
    if m + n != 2 * k {
        return Err(Error::EventMismatch { m, n, total: 2 * k });
    }
    let out = evolve(&prepare(k, alpha)?, coupler);
    Ok(marginal(&out, m, n))
}

fn marginal(state: &MultimodeState, m: usize, n: usize) -> f64 {
    state
        .iter()
        .filter(|(o, _)| o[0] + o[1] == m && o[2] + o[3] == n)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// All `(m, P(m, 2k − m))` for `m = 0..=2k`, from a single evolution.
pub fn oracle_distribution(k: usize, alpha: f64, coupler: &CouplerSpec) -> Result<Vec<f64>> {
    let out = evolve(&prepare(k, alpha)?, coupler);
    Ok((0..=2 * k).map(|m| marginal(&out, m, 2 * k - m)).collect())
}
