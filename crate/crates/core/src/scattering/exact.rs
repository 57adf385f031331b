//! Exact rational detection probabilities.
//!
//! Squared species amplitudes are polynomials in the transmittance
//! `T = t²` and reflectance `R = 1 − T`, so a rational `T` gives rational
//! probabilities.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::decomposition::{check_photons, component_species};
use crate::error::{Error, Result};
use crate::scattering::Species;

fn big_binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    (0..r).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn big_factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn pow(base: &BigRational, exp: usize) -> BigRational {
    (0..exp).fold(BigRational::one(), |acc, _| acc * base)
}

/// Exact counterpart of [`super::EventDistribution`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDistribution {
    probs: Vec<BigRational>,
}

impl ExactDistribution {
    pub fn total(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn get(&self, m: usize, n: usize) -> BigRational {
        if m + n == self.total() {
            self.probs[m].clone()
        } else {
            BigRational::zero()
        }
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs
            .iter()
            .map(|p| p.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

/// Transmittance as an exact rational; `1/2` for a balanced coupler.
pub fn balanced_transmittance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

pub fn species_distribution_exact(sp: Species, transmittance: &BigRational) -> ExactDistribution {
    let (p, q) = (sp.a_count, sp.b_count);
    let total = p + q;
    if total == 0 {
        return ExactDistribution {
            probs: vec![BigRational::one()],
        };
    }
    let big_t = transmittance;
    let big_r = BigRational::one() - big_t;
    let input_norm = big_factorial(p) * big_factorial(q);

    let probs = (0..=total)
        .map(|m| {
            let n = total - m;
            let lo = m.saturating_sub(q);
            let hi = m.min(p);
            // term i carries t^(2i+q−m) r^(p−2i+m); the product of terms
            // i, i' carries T^(i+i'+q−m) R^(p+m−i−i')
            let terms: Vec<(BigInt, usize)> = (lo..=hi)
                .map(|i| {
                    let l = m - i;
                    let c = big_binomial(p, i) * big_binomial(q, l);
                    let c = if (q - l) % 2 == 0 { c } else { -c };
                    (c, i)
                })
                .collect();
            let mut squared = BigRational::zero();
            for (ci, i) in &terms {
                for (cj, j) in &terms {
                    let t_exp = i + j + q - m;
                    let r_exp = p + m - i - j;
                    let coeff = BigRational::from_integer(ci * cj);
                    squared += coeff * pow(big_t, t_exp) * pow(&big_r, r_exp);
                }
            }
            let norm = BigRational::new(big_factorial(m) * big_factorial(n), input_norm.clone());
            squared * norm
        })
        .collect();
    ExactDistribution { probs }
}

pub fn convolve_exact(dists: &[ExactDistribution]) -> Result<ExactDistribution> {
    let (first, rest) = dists.split_first().ok_or(Error::EmptyConvolution)?;
    Ok(rest.iter().fold(first.clone(), |acc, d| {
        let mut probs = vec![BigRational::zero(); acc.total() + d.total() + 1];
        for (i, pa) in acc.probs.iter().enumerate() {
            for (j, pb) in d.probs.iter().enumerate() {
                probs[i + j] += pa * pb;
            }
        }
        ExactDistribution { probs }
    }))
}

/// Exact detection table; `columns[0]` is the fully indistinguishable
/// component.
pub fn detection_table_exact(
    k: usize,
    transmittance: &BigRational,
) -> Result<Vec<ExactDistribution>> {
    check_photons(k)?;
    if !(transmittance.is_positive() && *transmittance < BigRational::one()) {
        return Err(Error::InvalidTransmission(
            transmittance.to_f64().unwrap_or(f64::NAN).sqrt(),
        ));
    }
    (0..=k)
        .rev()
        .map(|j| {
            let dists: Vec<_> = component_species(k, j)
                .into_iter()
                .map(|sp| species_distribution_exact(sp, transmittance))
                .collect();
            convolve_exact(&dists)
        })
        .collect()
}

/// Displays a rational as `p/q`, or `p` when the denominator is one.
pub struct Fraction<'a>(pub &'a BigRational);

impl fmt::Display for Fraction<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.0.is_integer() {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        };
        f.pad(&s)
    }
}
