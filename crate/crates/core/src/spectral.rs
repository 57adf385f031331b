//! Gaussian wave-packet overlap as a function of path delay.
//!
//! A single photon with arrival time `t` carries the spectral amplitude
//! `exp(-(ω-ω₀)²/(2Δω²))·exp(iωt)`. Two such photons separated by a delay
//! `x` (so `t₂ - t₁ = x/c`) have squared overlap
//! `|α|² = exp(-Δω²(x/c)²/2)`. The overlap amplitude is kept real and
//! non-negative; its phase does not enter any two-mode event probability.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Spectral description of the single-photon wave packets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapModel {
    /// Width `Δω` of the amplitude Gaussian, rad/s.
    pub sigma_omega: f64,
    /// Central angular frequency `ω₀`, rad/s. Does not enter the overlap.
    pub center_omega: f64,
    pub speed_of_light: f64,
}

impl OverlapModel {
    pub fn new(sigma_omega: f64, center_omega: f64) -> Result<Self> {
        if !(sigma_omega.is_finite() && sigma_omega > 0.0) {
            return Err(Error::InvalidWidth(sigma_omega));
        }
        Ok(Self {
            sigma_omega,
            center_omega,
            speed_of_light: SPEED_OF_LIGHT,
        })
    }

    /// Model for photons shaped by an interference filter of intensity
    /// FWHM `fwhm_wavelength` centred at `center_wavelength` (both meters).
    pub fn from_filter(fwhm_wavelength: f64, center_wavelength: f64) -> Result<Self> {
        let sigma = sigma_from_filter(fwhm_wavelength, center_wavelength)?;
        Self::new(sigma, 2.0 * PI * SPEED_OF_LIGHT / center_wavelength)
    }

    /// Real, non-negative overlap amplitude `α(x) = exp(-Δω²(x/c)²/4)`.
    pub fn overlap_from_delay(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFiniteDelay(x));
        }
        let phase = self.sigma_omega * x / self.speed_of_light;
        Ok((-phase * phase / 4.0).exp())
    }

    /// Squared overlap `u = |α(x)|²`, the only combination event
    /// probabilities depend on.
    pub fn overlap_sq_from_delay(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFiniteDelay(x));
        }
        let phase = self.sigma_omega * x / self.speed_of_light;
        Ok((-phase * phase / 2.0).exp())
    }

    /// Non-negative delay at which the squared overlap equals `alpha_sq`.
    pub fn delay_from_overlap(&self, alpha_sq: f64) -> Result<f64> {
        if !(alpha_sq > 0.0 && alpha_sq <= 1.0) {
            return Err(Error::OverlapOutOfRange(alpha_sq));
        }
        // ln(1) is exactly 0, but -0.0 would leak through sqrt
        let arg = (-2.0 * alpha_sq.ln()).max(0.0);
        Ok(self.speed_of_light / self.sigma_omega * arg.sqrt())
    }
}

/// Amplitude-Gaussian width `Δω` for a Gaussian intensity spectrum whose
/// wavelength FWHM is `fwhm_wavelength` around `center_wavelength`.
///
/// The intensity FWHM in angular frequency is `2πcΔλ/λ²`; the intensity is
/// `exp(-(ω-ω₀)²/Δω²)`, so its FWHM is `2√(ln 2)·Δω`.
pub fn sigma_from_filter(fwhm_wavelength: f64, center_wavelength: f64) -> Result<f64> {
    let valid = |v: f64| v.is_finite() && v > 0.0;
    if !(valid(fwhm_wavelength) && valid(center_wavelength)) {
        return Err(Error::InvalidFilter {
            fwhm: fwhm_wavelength,
            center: center_wavelength,
        });
    }
    let fwhm_omega =
        2.0 * PI * SPEED_OF_LIGHT * fwhm_wavelength / (center_wavelength * center_wavelength);
    Ok(fwhm_omega / (2.0 * 2f64.ln().sqrt()))
}
