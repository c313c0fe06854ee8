//! Truncated oscillator operators in the energy basis and their ontological
//! (circle-site) representations.
//!
//! Conventions: `ħ = ω = 1` unless an [`OscillatorConfig`] says otherwise,
//! `a = (x + ip)/√2`, `a† = (x − ip)/√2`, so `x = (a + a†)/√2` and
//! `p = i(a† − a)/√2`.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::auxfun::eval_gn;
use crate::dense;
use crate::error::{Error, Result};
use crate::hilbert::{BasisTag, DualityMap, StateVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense row-major `N×N` complex matrix tagged with its basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    basis: BasisTag,
    entries: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn new(dim: usize, basis: BasisTag, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, basis, entries })
    }

    pub fn zeros(dim: usize, basis: BasisTag) -> Result<Self> {
        Self::new(dim, basis, vec![ZERO; dim * dim])
    }

    pub fn identity(dim: usize, basis: BasisTag) -> Result<Self> {
        let mut m = Self::zeros(dim, basis)?;
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            basis: self.basis,
            entries: dense::adjoint(&self.entries, self.dim),
        }
    }

    fn check_compatible(&self, other: &OperatorMatrix) -> Result<()> {
        other.basis.expect(self.basis)?;
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            dim: self.dim,
            basis: self.basis,
            entries: dense::matmul(&self.entries, &other.entries, self.dim),
        })
    }

    fn zip_with(&self, other: &OperatorMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            dim: self.dim,
            basis: self.basis,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            basis: self.basis,
            entries: self.entries.iter().map(|&a| a * factor).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(dense::max_abs_diff(&self.entries, &other.entries))
    }

    /// `max |M − M†|` entrywise.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        state.basis().expect(self.basis)?;
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        StateVector::new(self.basis, dense::matvec(&self.entries, state.amplitudes()))
    }

    /// Ascending eigenvalues of the hermitian part `(M + M†)/2`.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (self.get(i, j) + self.get(j, i).conj()));
        let mut values: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }
}

/// Size and angular frequency of a single truncated oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorConfig {
    dim: usize,
    omega: f64,
}

impl OscillatorConfig {
    pub fn new(dim: usize, omega: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidFrequency(omega));
        }
        Ok(Self { dim, omega })
    }

    /// `ω = 1`.
    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(dim, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// Annihilation and creation operators, `a|n⟩ = √n |n−1⟩`.
pub fn build_ladder(dim: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let mut a = OperatorMatrix::zeros(dim, BasisTag::Energy)?;
    for n in 1..dim {
        a.entries[(n - 1) * dim + n] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let adag = a.adjoint();
    Ok((a, adag))
}

/// Position and momentum, `x = (a + a†)/√2`, `p = i(a† − a)/√2`.
pub fn build_xp(dim: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let (a, adag) = build_ladder(dim)?;
    let x = a.add(&adag)?.scale(Complex64::new(FRAC_1_SQRT_2, 0.0));
    let p = adag.sub(&a)?.scale(I * FRAC_1_SQRT_2);
    Ok((x, p))
}

/// `H = ω a†a = diag(0, ω, 2ω, …)`, ground energy set to zero.
pub fn build_hamiltonian(config: &OscillatorConfig) -> Result<OperatorMatrix> {
    let dim = config.dim;
    let mut h = OperatorMatrix::zeros(dim, BasisTag::Energy)?;
    for n in 0..dim {
        h.entries[n * dim + n] = Complex64::new(n as f64 * config.omega, 0.0);
    }
    Ok(h)
}

/// `U · M · U†`: re-expresses an energy-basis operator on the circle sites.
pub fn conjugate_to_ontological(op: &OperatorMatrix, map: &DualityMap) -> Result<OperatorMatrix> {
    op.basis.expect(BasisTag::Energy)?;
    if op.dim != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            found: op.dim,
        });
    }
    let n = op.dim;
    let left = dense::matmul(map.matrix(), &op.entries, n);
    let entries = dense::matmul(&left, &map.adjoint_matrix(), n);
    OperatorMatrix::new(n, BasisTag::Ontological, entries)
}

/// `U† · M · U`: the inverse of [`conjugate_to_ontological`].
pub fn conjugate_to_energy(op: &OperatorMatrix, map: &DualityMap) -> Result<OperatorMatrix> {
    op.basis.expect(BasisTag::Ontological)?;
    if op.dim != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            found: op.dim,
        });
    }
    let n = op.dim;
    let left = dense::matmul(&map.adjoint_matrix(), &op.entries, n);
    let entries = dense::matmul(&left, map.matrix(), n);
    OperatorMatrix::new(n, BasisTag::Energy, entries)
}

/// The operators with closed-form circle-site matrix elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderOp {
    A,
    Adag,
    X,
    P,
}

impl LadderOp {
    pub const ALL: [LadderOp; 4] = [LadderOp::A, LadderOp::Adag, LadderOp::X, LadderOp::P];

    pub fn name(self) -> &'static str {
        match self {
            LadderOp::A => "a",
            LadderOp::Adag => "adag",
            LadderOp::X => "x",
            LadderOp::P => "p",
        }
    }

    /// The energy-basis matrix of this operator.
    pub fn energy_matrix(self, dim: usize) -> Result<OperatorMatrix> {
        match self {
            LadderOp::A => Ok(build_ladder(dim)?.0),
            LadderOp::Adag => Ok(build_ladder(dim)?.1),
            LadderOp::X => Ok(build_xp(dim)?.0),
            LadderOp::P => Ok(build_xp(dim)?.1),
        }
    }
}

impl std::str::FromStr for LadderOp {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "a" => Ok(LadderOp::A),
            "adag" | "a†" => Ok(LadderOp::Adag),
            "x" => Ok(LadderOp::X),
            "p" => Ok(LadderOp::P),
            other => Err(format!("unknown operator '{other}' (expected a, adag, x or p)")),
        }
    }
}

/// `⟨s1|op|s2⟩` on the circle sites, from the closed form.
///
/// With `φ_k = 2πs_k/N` and `K = (1/N)·G_{N−1}(e^{i(φ1−φ2)})`:
///
/// ```text
/// ⟨s1|a|s2⟩  = e^{−iφ1} K          ⟨s1|x|s2⟩ = (e^{−iφ1} + e^{iφ2}) K / √2
/// ⟨s1|a†|s2⟩ = e^{+iφ2} K          ⟨s1|p|s2⟩ = i(e^{iφ2} − e^{−iφ1}) K / √2
/// ```
pub fn ontological_element(which: LadderOp, dim: usize, s1: usize, s2: usize) -> Result<Complex64> {
    if dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if s1 >= dim || s2 >= dim {
        return Err(Error::IndexOutOfRange { row: s1, col: s2, dim });
    }
    let site_phase = |k: usize| Complex64::from_polar(1.0, TAU * (k % dim) as f64 / dim as f64);
    let kernel = eval_gn(dim - 1, site_phase(s1 + dim - s2)) / dim as f64;
    let out1 = site_phase(dim - s1); // e^{−iφ1}
    let in2 = site_phase(s2); // e^{+iφ2}
    Ok(match which {
        LadderOp::A => out1 * kernel,
        LadderOp::Adag => in2 * kernel,
        LadderOp::X => (out1 + in2) * kernel * FRAC_1_SQRT_2,
        LadderOp::P => I * (in2 - out1) * kernel * FRAC_1_SQRT_2,
    })
}

/// The full circle-site matrix assembled from [`ontological_element`].
pub fn ontological_matrix(which: LadderOp, dim: usize) -> Result<OperatorMatrix> {
    let mut entries = Vec::with_capacity(dim * dim);
    for s1 in 0..dim {
        for s2 in 0..dim {
            entries.push(ontological_element(which, dim, s1, s2)?);
        }
    }
    OperatorMatrix::new(dim, BasisTag::Ontological, entries)
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

/// Heisenberg-picture operator `e^{iHt} M e^{−iHt}` for `H = ω a†a`, energy basis.
pub fn heisenberg_evolve(op: &OperatorMatrix, omega: f64, t: f64) -> Result<OperatorMatrix> {
    op.basis.expect(BasisTag::Energy)?;
    let n = op.dim;
    let mut entries = op.entries.clone();
    for row in 0..n {
        for col in 0..n {
            let phase = omega * t * (row as f64 - col as f64);
            entries[row * n + col] *= Complex64::from_polar(1.0, phase);
        }
    }
    OperatorMatrix::new(n, BasisTag::Energy, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_entries(m: &OperatorMatrix, want: &[Complex64], tol: f64) {
        assert_eq!(m.entries().len(), want.len());
        for (k, (g, w)) in m.entries().iter().zip(want).enumerate() {
            assert!((g - w).norm() <= tol, "entry {k}: {g} != {w}");
        }
    }

    #[test]
    fn ladder_small() {
        let (a, adag) = build_ladder(2).unwrap();
        assert_entries(&a, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)], 0.0);
        assert_entries(&adag, &[c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.)], 0.0);

        let (a3, _) = build_ladder(3).unwrap();
        assert_eq!(a3.get(0, 1), c(1.0, 0.0));
        assert!((a3.get(1, 2).re - std::f64::consts::SQRT_2).abs() < 1e-12);
        let nonzero = a3.entries().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn ladder_annihilates_ground_state() {
        let (a, _) = build_ladder(6).unwrap();
        let ground = StateVector::basis_state(BasisTag::Energy, 6, 0).unwrap();
        let out = a.apply(&ground).unwrap();
        assert!(out.amplitudes().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn position_momentum_two_levels() {
        let h = FRAC_1_SQRT_2;
        let (x, p) = build_xp(2).unwrap();
        assert_entries(&x, &[c(0., 0.), c(h, 0.), c(h, 0.), c(0., 0.)], 1e-15);
        assert_entries(&p, &[c(0., 0.), c(0., -h), c(0., h), c(0., 0.)], 1e-15);
    }

    #[test]
    fn position_momentum_structure() {
        let (x, p) = build_xp(256).unwrap();
        assert!(x.hermiticity_residual() <= 1e-12);
        assert!(p.hermiticity_residual() <= 1e-12);
        for i in 0..256 {
            assert_eq!(x.get(i, i), c(0.0, 0.0));
            for j in 0..256 {
                assert_eq!(x.get(i, j).im, 0.0);
                assert_eq!(p.get(i, j).re, 0.0);
                if i.abs_diff(j) > 1 {
                    assert_eq!(x.get(i, j), c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn hamiltonian_diagonals() {
        let h = build_hamiltonian(&OscillatorConfig::unit(4).unwrap()).unwrap();
        for n in 0..4 {
            assert_eq!(h.get(n, n), c(n as f64, 0.0));
        }
        let h = build_hamiltonian(&OscillatorConfig::new(3, 2.5).unwrap()).unwrap();
        assert_eq!((0..3).map(|n| h.get(n, n).re).collect::<Vec<_>>(), vec![0.0, 2.5, 5.0]);
        let h = build_hamiltonian(&OscillatorConfig::unit(1).unwrap()).unwrap();
        assert_eq!(h.entries(), &[c(0.0, 0.0)]);
    }

    #[test]
    fn invalid_config() {
        assert_eq!(OscillatorConfig::new(0, 1.0), Err(Error::InvalidDimension(0)));
        assert!(matches!(OscillatorConfig::new(3, 0.0), Err(Error::InvalidFrequency(_))));
        assert!(OscillatorConfig::new(3, f64::NAN).is_err());
        assert!(OscillatorConfig::new(3, -1.0).is_err());
        assert!(build_ladder(0).is_err());
    }

    #[test]
    fn conjugated_hamiltonian_has_constant_diagonal() {
        for dim in [1, 2, 5, 12] {
            let map = DualityMap::new(dim).unwrap();
            let h = build_hamiltonian(&OscillatorConfig::unit(dim).unwrap()).unwrap();
            let ont = conjugate_to_ontological(&h, &map).unwrap();
            assert_eq!(ont.basis(), BasisTag::Ontological);
            for s in 0..dim {
                assert!((ont.get(s, s) - c((dim as f64 - 1.0) / 2.0, 0.0)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn conjugation_fixes_identity_and_round_trips() {
        let map = DualityMap::new(9).unwrap();
        let id = OperatorMatrix::identity(9, BasisTag::Energy).unwrap();
        let ont = conjugate_to_ontological(&id, &map).unwrap();
        let id_ont = OperatorMatrix::identity(9, BasisTag::Ontological).unwrap();
        assert!(ont.max_abs_diff(&id_ont).unwrap() <= 1e-12);

        let (x, _) = build_xp(9).unwrap();
        let back = conjugate_to_energy(&conjugate_to_ontological(&x, &map).unwrap(), &map).unwrap();
        assert!(back.max_abs_diff(&x).unwrap() <= 1e-12);
    }

    #[test]
    fn conjugation_rejects_ontological_input() {
        let map = DualityMap::new(3).unwrap();
        let m = OperatorMatrix::identity(3, BasisTag::Ontological).unwrap();
        assert!(matches!(
            conjugate_to_ontological(&m, &map),
            Err(Error::BasisMismatch { .. })
        ));
        let e = OperatorMatrix::identity(4, BasisTag::Energy).unwrap();
        assert!(matches!(
            conjugate_to_ontological(&e, &map),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_level_annihilator_vanishes() {
        for op in LadderOp::ALL {
            assert_eq!(ontological_element(op, 1, 0, 0).unwrap(), c(0.0, 0.0));
        }
    }

    #[test]
    fn diagonal_annihilator_element() {
        let dim = 16;
        let s = 5;
        let phi = TAU * s as f64 / dim as f64;
        // direct summation, g-argument zero
        let sum: f64 = (1..dim).map(|n| (n as f64).sqrt()).sum();
        let want = Complex64::from_polar(sum / dim as f64, -phi);
        let got = ontological_element(LadderOp::A, dim, s, s).unwrap();
        assert!((got - want).norm() <= 1e-12);
    }

    #[test]
    fn element_index_out_of_range() {
        assert!(matches!(
            ontological_element(LadderOp::X, 4, 4, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(ontological_element(LadderOp::X, 0, 0, 0).is_err());
    }

    #[test]
    fn closed_form_matches_conjugation_small() {
        for dim in [2, 3, 8] {
            let map = DualityMap::new(dim).unwrap();
            for op in LadderOp::ALL {
                let brute = conjugate_to_ontological(&op.energy_matrix(dim).unwrap(), &map).unwrap();
                let closed = ontological_matrix(op, dim).unwrap();
                assert!(
                    closed.max_abs_diff(&brute).unwrap() <= 1e-12,
                    "{} at N={dim}",
                    op.name()
                );
            }
        }
    }

    #[test]
    fn commutators_at_four_levels() {
        let (a, adag) = build_ladder(4).unwrap();
        let aa = commutator(&a, &adag).unwrap();
        let mut want = vec![c(0.0, 0.0); 16];
        for (k, d) in [1.0, 1.0, 1.0, -3.0].into_iter().enumerate() {
            want[k * 4 + k] = c(d, 0.0);
        }
        assert_entries(&aa, &want, 1e-12);

        let (x, p) = build_xp(4).unwrap();
        let xp = commutator(&x, &p).unwrap();
        let want_xp: Vec<_> = want.iter().map(|z| z * I).collect();
        assert_entries(&xp, &want_xp, 1e-12);

        let h = build_hamiltonian(&OscillatorConfig::unit(4).unwrap()).unwrap();
        assert!(commutator(&h, &h).unwrap().entries().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn commutator_rejects_mixed_bases() {
        let e = OperatorMatrix::identity(2, BasisTag::Energy).unwrap();
        let o = OperatorMatrix::identity(2, BasisTag::Ontological).unwrap();
        assert!(commutator(&e, &o).is_err());
    }

    #[test]
    fn heisenberg_flow_low_block() {
        let dim = 12;
        let (x, p) = build_xp(dim).unwrap();
        let t = 0.3;
        let evolved = heisenberg_evolve(&x, 1.0, t).unwrap();
        let want = x.scale(c(t.cos(), 0.0)).add(&p.scale(c(t.sin(), 0.0))).unwrap();
        for i in 0..dim - 1 {
            for j in 0..dim - 1 {
                assert!((evolved.get(i, j) - want.get(i, j)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn ontological_spectrum() {
        let dim = 11;
        let map = DualityMap::new(dim).unwrap();
        let h = build_hamiltonian(&OscillatorConfig::new(dim, 0.75).unwrap()).unwrap();
        let eig = conjugate_to_ontological(&h, &map).unwrap().hermitian_eigenvalues();
        for (k, e) in eig.iter().enumerate() {
            assert!((e - 0.75 * k as f64).abs() <= 1e-9);
        }
    }
}
