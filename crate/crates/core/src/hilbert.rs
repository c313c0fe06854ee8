//! Finite-dimensional state spaces and the energy/ontological basis change.
//!
//! The ontological basis `|s⟩`, `s = 0..N-1`, labels the sites `φ_s = 2πs/N`
//! of a particle rotating on the unit circle. The energy basis `|n⟩` holds the
//! first `N` oscillator levels. They are related by the unitary discrete
//! Fourier transform
//!
//! ```text
//! |n⟩ = N^{-1/2} Σ_s exp(+2πi·n·s/N) |s⟩,    |s⟩ = N^{-1/2} Σ_n exp(-2πi·n·s/N) |n⟩
//! ```

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::dense;
use crate::error::{Error, Result};

/// Which basis a vector or operator is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisTag {
    /// Eigenbasis of `H = a†a`, levels `n = 0..N-1`.
    Energy,
    /// Sites on the circle, `φ_s = 2πs/N`.
    Ontological,
}

impl BasisTag {
    pub(crate) fn expect(self, expected: BasisTag) -> Result<()> {
        if self == expected {
            Ok(())
        } else {
            Err(Error::BasisMismatch { expected, found: self })
        }
    }
}

/// Tolerance on `|Σ|a_i|² − 1|` for a state to count as normalized.
pub const NORMALIZED_TOL: f64 = 1e-12;

/// A basis-tagged vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: BasisTag,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(basis: BasisTag, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self { basis, amplitudes })
    }

    /// The unit vector `|index⟩` of the given basis.
    pub fn basis_state(basis: BasisTag, dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                row: index,
                col: 0,
                dim,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { basis, amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORMALIZED_TOL
    }

    /// Rescales to unit norm. The zero vector is returned unchanged.
    pub fn normalized(mut self) -> Self {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            for a in &mut self.amplitudes {
                *a /= norm;
            }
        }
        self
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(dense::max_abs_diff(&self.amplitudes, &other.amplitudes))
    }

    pub(crate) fn check_compatible(&self, other: &StateVector) -> Result<()> {
        other.basis.expect(self.basis)?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

/// The unitary `U[s][n] = exp(2πi·n·s/N)/√N`.
///
/// Column `n` holds the ontological components of `|n⟩`; `U†` maps back.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityMap {
    dim: usize,
    matrix: Vec<Complex64>,
}

impl DualityMap {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let scale = 1.0 / (dim as f64).sqrt();
        // exact integer reduction of n·s keeps every phase argument in [0, 2π)
        let roots: Vec<Complex64> = (0..dim)
            .map(|k| Complex64::from_polar(scale, TAU * k as f64 / dim as f64))
            .collect();
        let mut matrix = Vec::with_capacity(dim * dim);
        for s in 0..dim {
            for n in 0..dim {
                matrix.push(roots[(n * s) % dim]);
            }
        }
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `U[s][n]`.
    pub fn entry(&self, s: usize, n: usize) -> Complex64 {
        self.matrix[s * self.dim + n]
    }

    /// Row-major entries of `U`.
    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn adjoint_matrix(&self) -> Vec<Complex64> {
        dense::adjoint(&self.matrix, self.dim)
    }

    /// `max |(U†U − I)_{ij}|`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim;
        let gram = dense::matmul(&self.adjoint_matrix(), &self.matrix, n);
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[i * n + j] - target).norm());
            }
        }
        worst
    }

    fn check_dim(&self, state: &StateVector) -> Result<()> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        Ok(())
    }

    /// Energy components → ontological components: `ψ_ont = U · ψ_E`.
    pub fn to_ontological(&self, state: &StateVector) -> Result<StateVector> {
        state.basis().expect(BasisTag::Energy)?;
        self.check_dim(state)?;
        Ok(StateVector {
            basis: BasisTag::Ontological,
            amplitudes: dense::matvec(&self.matrix, state.amplitudes()),
        })
    }

    /// Ontological components → energy components: `ψ_E = U† · ψ_ont`.
    pub fn to_energy(&self, state: &StateVector) -> Result<StateVector> {
        state.basis().expect(BasisTag::Ontological)?;
        self.check_dim(state)?;
        let n = self.dim;
        let amps = state.amplitudes();
        let amplitudes = (0..n)
            .map(|level| {
                (0..n).fold(Complex64::new(0.0, 0.0), |acc, s| {
                    acc + self.matrix[s * n + level].conj() * amps[s]
                })
            })
            .collect();
        Ok(StateVector {
            basis: BasisTag::Energy,
            amplitudes,
        })
    }
}

pub fn build_duality_map(dim: usize) -> Result<DualityMap> {
    DualityMap::new(dim)
}

pub fn to_ontological(state: &StateVector, map: &DualityMap) -> Result<StateVector> {
    map.to_ontological(state)
}

pub fn to_energy(state: &StateVector, map: &DualityMap) -> Result<StateVector> {
    map.to_energy(state)
}

/// The sites `φ_s = 2πs/N` of the discretized circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleGrid {
    dim: usize,
}

impl AngleGrid {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.dim as f64
    }

    pub fn angle(&self, site: usize) -> f64 {
        TAU * (site % self.dim) as f64 / self.dim as f64
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.dim).map(|s| self.angle(s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_amps(got: &StateVector, want: &[Complex64]) {
        assert_eq!(got.dim(), want.len());
        for (g, w) in got.amplitudes().iter().zip(want) {
            assert!((g - w).norm() <= TOL, "{g} != {w}");
        }
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert_eq!(DualityMap::new(0), Err(Error::InvalidDimension(0)));
        assert!(AngleGrid::new(0).is_err());
        assert!(StateVector::new(BasisTag::Energy, vec![]).is_err());
    }

    #[test]
    fn small_maps() {
        let u1 = DualityMap::new(1).unwrap();
        assert_eq!(u1.matrix(), &[c(1.0, 0.0)]);

        let u2 = DualityMap::new(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want = [c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)];
        for (g, w) in u2.matrix().iter().zip(&want) {
            assert!((g - w).norm() <= TOL);
        }

        let u11 = DualityMap::new(11).unwrap();
        assert!(u11.unitarity_residual() <= TOL);
    }

    #[test]
    fn energy_states_in_ontological_basis() {
        let map = DualityMap::new(4).unwrap();
        let ground = StateVector::basis_state(BasisTag::Energy, 4, 0).unwrap();
        assert_amps(&map.to_ontological(&ground).unwrap(), &[c(0.5, 0.0); 4]);

        let first = StateVector::basis_state(BasisTag::Energy, 4, 1).unwrap();
        assert_amps(
            &map.to_ontological(&first).unwrap(),
            &[c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5)],
        );
    }

    #[test]
    fn ontological_states_in_energy_basis() {
        let map = DualityMap::new(4).unwrap();
        let s0 = StateVector::basis_state(BasisTag::Ontological, 4, 0).unwrap();
        assert_amps(&map.to_energy(&s0).unwrap(), &[c(0.5, 0.0); 4]);

        let s1 = StateVector::basis_state(BasisTag::Ontological, 4, 1).unwrap();
        assert_amps(
            &map.to_energy(&s1).unwrap(),
            &[c(0.5, 0.0), c(0.0, -0.5), c(-0.5, 0.0), c(0.0, 0.5)],
        );
    }

    #[test]
    fn wrong_basis_and_dimension() {
        let map = DualityMap::new(4).unwrap();
        let ont = StateVector::basis_state(BasisTag::Ontological, 4, 0).unwrap();
        let energy = StateVector::basis_state(BasisTag::Energy, 3, 0).unwrap();
        assert!(matches!(map.to_ontological(&ont), Err(Error::BasisMismatch { .. })));
        assert!(matches!(map.to_energy(&energy), Err(Error::BasisMismatch { .. })));
        assert_eq!(
            map.to_ontological(&energy),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        );
        assert!(ont.inner(&energy).is_err());
    }

    #[test]
    fn basis_round_trip() {
        for dim in [1, 2, 5, 16] {
            let map = DualityMap::new(dim).unwrap();
            for k in 0..dim {
                let e = StateVector::basis_state(BasisTag::Energy, dim, k).unwrap();
                let back = map.to_energy(&map.to_ontological(&e).unwrap()).unwrap();
                assert!(back.max_abs_diff(&e).unwrap() <= TOL);
            }
        }
    }

    #[test]
    fn adjoint_rows_match_inverse_expansion() {
        let dim = 7;
        let map = DualityMap::new(dim).unwrap();
        let adj = map.adjoint_matrix();
        for n in 0..dim {
            for s in 0..dim {
                let phase = -TAU * (n * s) as f64 / dim as f64;
                let want = Complex64::from_polar(1.0 / (dim as f64).sqrt(), phase);
                assert!((adj[n * dim + s] - want).norm() <= TOL);
            }
        }
    }

    #[test]
    fn angle_grid_spacing() {
        let grid = AngleGrid::new(11).unwrap();
        let angles = grid.angles();
        assert_eq!(angles[0], 0.0);
        for w in angles.windows(2) {
            assert!(w[1] > w[0]);
            assert!((w[1] - w[0] - grid.spacing()).abs() <= 1e-15);
        }
        assert!(*angles.last().unwrap() < TAU);
    }
}
