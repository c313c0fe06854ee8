//! Deterministic rotation on the circle and its quantum counterpart.
//!
//! A phase advances as `φ(t) = φ(0) + ωt mod 2π`. In the energy basis the
//! oscillator evolves by `|n⟩ ↦ e^{−inωt}|n⟩`. At the stroboscopic times
//! `t_k = 2πk/(Nω)` the second moves every circle site forward by exactly `k`
//! places, `|s⟩ ↦ |s + k mod N⟩`, so Born weights over the sites are carried
//! along the classical orbit without spreading.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{BasisTag, DualityMap, StateVector};

/// Tolerance on `|Σ w − 1|` for an [`AngleDistribution`].
pub const MASS_TOL: f64 = 1e-12;

/// Largest `||ψ|² − 1|` accepted by [`born_distribution`].
pub const BORN_NORM_TOL: f64 = 1e-9;

/// Distance in grid steps below which a time counts as stroboscopic.
pub const STROBOSCOPIC_TOL: f64 = 1e-9;

/// An angle kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CirclePhase(f64);

impl CirclePhase {
    pub fn new(phi: f64) -> Self {
        let r = phi.rem_euclid(TAU);
        // rem_euclid can round up to exactly 2π for tiny negative inputs
        Self(if r >= TAU { 0.0 } else { r })
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Shortest signed separation to `other`, in `(−π, π]`.
    pub fn separation(self, other: CirclePhase) -> f64 {
        crate::auxfun::reduce_angle(other.0 - self.0)
    }
}

/// `φ(t) = φ(0) + ωt mod 2π`.
pub fn evolve_classical(phase: CirclePhase, t: f64, omega: f64) -> CirclePhase {
    CirclePhase::new(phase.0 + omega * t)
}

/// Nonnegative weights over the `N` circle sites, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleDistribution {
    weights: Vec<f64>,
}

impl AngleDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidDistribution(format!(
                "weight {w} is not a finite nonnegative number"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    /// Rescales nonnegative weights to unit mass.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self {
            weights: vec![1.0 / dim as f64; dim],
        })
    }

    pub fn one_hot(dim: usize, site: usize) -> Result<Self> {
        if site >= dim {
            return Err(Error::IndexOutOfRange { row: site, col: 0, dim });
        }
        let mut weights = vec![0.0; dim];
        weights[site] = 1.0;
        Ok(Self { weights })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &AngleDistribution) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Site index carrying all the weight, if any.
    pub fn support_site(&self) -> Option<usize> {
        let mut nonzero = self.weights.iter().enumerate().filter(|(_, w)| **w > 1e-12);
        match (nonzero.next(), nonzero.next()) {
            (Some((s, _)), None) => Some(s),
            _ => None,
        }
    }
}

/// `|n⟩ ↦ e^{−inωt}|n⟩`.
pub fn evolve_quantum(state: &StateVector, t: f64, omega: f64) -> Result<StateVector> {
    state.basis().expect(BasisTag::Energy)?;
    let amplitudes = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, &c)| c * Complex64::from_polar(1.0, (-(n as f64) * omega * t).rem_euclid(TAU)))
        .collect();
    StateVector::new(BasisTag::Energy, amplitudes)
}

/// `w_s = |⟨s|ψ⟩|²` over the circle sites.
pub fn born_distribution(state: &StateVector, map: &DualityMap) -> Result<AngleDistribution> {
    let norm_sq = state.norm_sqr();
    if (norm_sq - 1.0).abs() > BORN_NORM_TOL {
        return Err(Error::NotNormalized { norm_sq });
    }
    let sites = match state.basis() {
        BasisTag::Ontological => {
            if state.dim() != map.dim() {
                return Err(Error::DimensionMismatch {
                    expected: map.dim(),
                    found: state.dim(),
                });
            }
            state.clone()
        }
        BasisTag::Energy => map.to_ontological(state)?,
    };
    AngleDistribution::normalized(sites.amplitudes().iter().map(|a| a.norm_sqr()).collect())
}

/// `t_k = 2πk/(Nω)`.
pub fn stroboscopic_time(k: i64, dim: usize, omega: f64) -> f64 {
    TAU * k as f64 / (dim as f64 * omega)
}

/// Number of grid steps `tNω/2π` travelled in time `t` (not rounded).
pub fn grid_steps(t: f64, dim: usize, omega: f64) -> f64 {
    t * dim as f64 * omega / TAU
}

/// Moves every weight `k` sites forward: `w′[(s + k) mod N] = w[s]`.
pub fn transport_sites(rho: &AngleDistribution, k: i64) -> AngleDistribution {
    let n = rho.dim();
    let shift = k.rem_euclid(n as i64) as usize;
    let mut weights = vec![0.0; n];
    for (s, &w) in rho.weights.iter().enumerate() {
        weights[(s + shift) % n] = w;
    }
    AngleDistribution { weights }
}

/// Classical transport of site weights over time `t`.
///
/// Defined only at stroboscopic times; any other `t` is rejected with the
/// fractional offset in grid steps.
pub fn transport_distribution(rho: &AngleDistribution, t: f64, omega: f64) -> Result<AngleDistribution> {
    let steps = grid_steps(t, rho.dim(), omega);
    let rounded = steps.round();
    let offset = steps - rounded;
    if !(offset.abs() <= STROBOSCOPIC_TOL * rounded.abs().max(1.0)) {
        return Err(Error::NonStroboscopic { t, steps, offset });
    }
    Ok(transport_sites(rho, rounded as i64))
}

/// Largest weight difference between "evolve quantum mechanically, then take
/// Born weights" and "take Born weights, then rotate classically" after `k`
/// stroboscopic steps.
pub fn duality_check(state: &StateVector, k: i64, map: &DualityMap, omega: f64) -> Result<f64> {
    state.basis().expect(BasisTag::Energy)?;
    let t = stroboscopic_time(k, map.dim(), omega);
    let quantum = born_distribution(&evolve_quantum(state, t, omega)?, map)?;
    let classical = transport_sites(&born_distribution(state, map)?, k);
    quantum.max_abs_diff(&classical)
}

/// Several independent rotors `φ_i(t) = φ_i(0) + ω_i t mod 2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorBank {
    omegas: Vec<f64>,
    phases: Vec<CirclePhase>,
}

impl OscillatorBank {
    pub fn new(omegas: Vec<f64>, phases: Vec<CirclePhase>) -> Result<Self> {
        if omegas.len() != phases.len() {
            return Err(Error::DimensionMismatch {
                expected: omegas.len(),
                found: phases.len(),
            });
        }
        if let Some(&w) = omegas.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidFrequency(w));
        }
        Ok(Self { omegas, phases })
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn phases(&self) -> &[CirclePhase] {
        &self.phases
    }
}

pub fn evolve_bank(bank: &OscillatorBank, t: f64) -> OscillatorBank {
    OscillatorBank {
        omegas: bank.omegas.clone(),
        phases: bank
            .phases
            .iter()
            .zip(&bank.omegas)
            .map(|(&phi, &w)| evolve_classical(phi, t, w))
            .collect(),
    }
}
