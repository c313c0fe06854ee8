//! The auxiliary series family built on `G(z) = Σ_{n≥1} √n zⁿ`.
//!
//! | name | definition | where it converges |
//! |------|------------|--------------------|
//! | `G_N(z)` | `Σ_{n=1}^N √n zⁿ` | everywhere (polynomial) |
//! | `G(z)` | `Σ √n zⁿ` | `|z| < 1`; Abel limit on `|z| = 1`, `z ≠ 1` |
//! | `g(φ)` | `G(e^{iφ})` | `φ ≢ 0 (mod 2π)` |
//! | `F(z)` | `Σ zⁿ / n^{3/2}` | closed disk `|z| ≤ 1` |
//! | `f(φ)` | `F(e^{iφ})`, with `g = −f″` | all real `φ` |
//!
//! The exterior `|z| > 1` is reached on the second sheet, where the same
//! series is summed in `1/z`.

mod polylog;
pub mod sheets;
pub mod zeros;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use polylog::Estimate;
pub use sheets::{map_y, map_z, CutSide, Sheet, SheetPoint};
pub use zeros::{find_zeros, ZeroSet, MAX_ZERO_DEGREE};

const F_ORDER: f64 = 1.5;
const G_ORDER: f64 = -0.5;

/// Radius inside which plain power-series summation is used.
const DIRECT_RADIUS: f64 = 0.5;

/// `|φ|` (mod 2π) below which `g` is refused.
pub const G_SINGULARITY_GUARD: f64 = 1e-3;

/// Base step of the finite-difference route to `g = −f″`.
pub const G_FD_STEP: f64 = 1e-3;

/// Accuracy contract for the infinite series.
///
/// `abs_tol` bounds the error of values with modulus up to 1 and is applied
/// relative to the modulus beyond that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesAccuracy {
    abs_tol: f64,
    max_terms: usize,
}

impl SeriesAccuracy {
    pub const MIN_TOL: f64 = 1e-14;

    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol >= Self::MIN_TOL && abs_tol.is_finite()) || max_terms == 0 {
            return Err(Error::InvalidAccuracy { abs_tol, max_terms });
        }
        Ok(Self { abs_tol, max_terms })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    fn accept(&self, est: Estimate) -> Result<Estimate> {
        let allowed = self.abs_tol * est.value.norm().max(1.0);
        if est.error <= allowed && est.terms <= self.max_terms && est.value.is_finite() {
            Ok(est)
        } else {
            Err(Error::Convergence {
                tol: self.abs_tol,
                max_terms: self.max_terms,
                estimate: est.value,
                error: est.error,
            })
        }
    }
}

impl Default for SeriesAccuracy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_terms: 1_000_000,
        }
    }
}

/// `G_N(z) = Σ_{n=1}^N √n zⁿ` by Horner's rule. `G_0 ≡ 0`.
pub fn eval_gn(degree: usize, z: Complex64) -> Complex64 {
    if degree == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut acc = Complex64::new((degree as f64).sqrt(), 0.0);
    for n in (1..degree).rev() {
        acc = acc * z + (n as f64).sqrt();
    }
    acc * z
}

/// `G_N′(z) = Σ_{n=1}^N n√n z^{n−1}`.
pub fn eval_gn_derivative(degree: usize, z: Complex64) -> Complex64 {
    if degree == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let weight = |n: usize| (n as f64).powf(1.5);
    let mut acc = Complex64::new(weight(degree), 0.0);
    for n in (1..degree).rev() {
        acc = acc * z + weight(n);
    }
    acc
}

/// Reduces an angle to `(−π, π]`.
pub fn reduce_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn series_in_disk(order: f64, z: Complex64, acc: &SeriesAccuracy, what: &'static str) -> Result<Estimate> {
    let r = z.norm();
    if !(r <= 1.0 + 1e-14) {
        return Err(Error::Domain {
            what,
            arg: format!("{z}"),
            domain: "|z| ≤ 1 (use the second sheet outside)",
        });
    }
    if r <= DIRECT_RADIUS {
        let (est, converged) = polylog::direct_series(order, z, acc.abs_tol, acc.max_terms);
        return if converged {
            Ok(est)
        } else {
            acc.accept(Estimate {
                error: f64::INFINITY,
                ..est
            })
        };
    }
    let mut mu = z.ln();
    mu.re = mu.re.min(0.0);
    if order <= 1.0 && mu.norm() == 0.0 {
        return Err(Error::Domain {
            what,
            arg: format!("{z}"),
            domain: "z ≠ 1 (singular point)",
        });
    }
    acc.accept(polylog::lerch_series(order, mu))
}

/// `F(z) = Σ zⁿ / n^{3/2}` on the closed unit disk.
pub fn eval_f_disk(z: Complex64, acc: &SeriesAccuracy) -> Result<Estimate> {
    series_in_disk(F_ORDER, z, acc, "F")
}

/// `f(φ) = F(e^{iφ})`.
pub fn eval_f_circle(phi: f64, acc: &SeriesAccuracy) -> Result<Estimate> {
    let mu = Complex64::new(0.0, reduce_angle(phi));
    acc.accept(polylog::lerch_series(F_ORDER, mu))
}

/// `G(z)` on the first sheet, `|z| ≤ 1`, `z ≠ 1`; on the circle this is the
/// Abel sum.
pub fn eval_g_disk(z: Complex64, acc: &SeriesAccuracy) -> Result<Estimate> {
    series_in_disk(G_ORDER, z, acc, "G")
}

/// `G` on the second sheet: `Σ √n z^{−n}` for `|z| > 1`.
pub fn eval_g_sheet2(z: Complex64, acc: &SeriesAccuracy) -> Result<Estimate> {
    if !(z.norm() > 1.0) {
        return Err(Error::Domain {
            what: "G (sheet 2)",
            arg: format!("{z}"),
            domain: "|z| > 1",
        });
    }
    eval_g_disk(z.inv(), acc)
}

/// `F` on the second sheet: `Σ z^{−n} / n^{3/2}` for `|z| ≥ 1`.
pub fn eval_f_sheet2(z: Complex64, acc: &SeriesAccuracy) -> Result<Estimate> {
    if !(z.norm() >= 1.0 - 1e-14) {
        return Err(Error::Domain {
            what: "F (sheet 2)",
            arg: format!("{z}"),
            domain: "|z| ≥ 1",
        });
    }
    eval_f_disk(z.inv(), acc)
}

/// `f` continued around the double cover `φ ∈ [0, 4π)`.
///
/// The first turn is sheet 1; the second turn is the sheet-2 boundary value
/// `F(e^{−iφ}) = conj f(φ)`, so the imaginary part is antiperiodic under a
/// single turn and the full function has period `4π`.
pub fn eval_f_double_cover(phi: f64, acc: &SeriesAccuracy) -> Result<(Sheet, Estimate)> {
    let theta = phi.rem_euclid(2.0 * TAU);
    if theta < TAU {
        Ok((Sheet::First, eval_f_circle(theta, acc)?))
    } else {
        let z = Complex64::from_polar(1.0, theta);
        let mu = Complex64::new(0.0, reduce_angle(-theta));
        let est = acc.accept(polylog::lerch_series(F_ORDER, mu))?;
        debug_assert!((z.inv() - mu.exp()).norm() < 1e-12);
        Ok((Sheet::Second, est))
    }
}

fn guard_g(phi: f64) -> Result<f64> {
    let r = reduce_angle(phi);
    if r.abs() < G_SINGULARITY_GUARD {
        return Err(Error::NearSingularity {
            phi,
            guard: G_SINGULARITY_GUARD,
        });
    }
    Ok(r)
}

/// `g(φ) = Σ √n e^{inφ}`, Abel-summed through the accelerated series.
pub fn eval_g_circle(phi: f64, acc: &SeriesAccuracy) -> Result<Estimate> {
    let r = guard_g(phi)?;
    acc.accept(polylog::lerch_series(G_ORDER, Complex64::new(0.0, r)))
}

/// `g(φ) = −f″(φ)` from central second differences of `f` at steps `h` and
/// `h/2`, combined by Richardson extrapolation.
pub fn eval_g_finite_difference(phi: f64, acc: &SeriesAccuracy) -> Result<Complex64> {
    guard_g(phi)?;
    let f = |x: f64| eval_f_circle(x, acc).map(|e| e.value);
    let centre = f(phi)?;
    let second = |h: f64| -> Result<Complex64> { Ok((f(phi + h)? - 2.0 * centre + f(phi - h)?) / (h * h)) };
    let coarse = second(G_FD_STEP)?;
    let fine = second(G_FD_STEP / 2.0)?;
    Ok(-(4.0 * fine - coarse) / 3.0)
}

/// Both routes to `g(φ)` and whether they agree within
/// `max(1e−6, 1e−4·|g|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GCrossCheck {
    pub series: Complex64,
    pub finite_difference: Complex64,
    pub tolerance: f64,
}

impl GCrossCheck {
    pub fn discrepancy(&self) -> f64 {
        (self.series - self.finite_difference).norm()
    }

    pub fn agrees(&self) -> bool {
        self.discrepancy() <= self.tolerance
    }
}

pub fn cross_check_g(phi: f64, acc: &SeriesAccuracy) -> Result<GCrossCheck> {
    let series = eval_g_circle(phi, acc)?.value;
    let finite_difference = eval_g_finite_difference(phi, acc)?;
    Ok(GCrossCheck {
        series,
        finite_difference,
        tolerance: (1e-4 * series.norm()).max(1e-6),
    })
}

/// Settings for Abel limits taken radially towards the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelConfig {
    /// Largest distance `|1 − r|` sampled.
    pub first_gap: f64,
    /// Number of samples; the gap halves between consecutive ones.
    pub levels: usize,
    /// Truncation tolerance of each direct partial sum.
    pub term_tol: f64,
}

impl Default for AbelConfig {
    fn default() -> Self {
        Self {
            first_gap: 0.02,
            levels: 8,
            term_tol: 1e-15,
        }
    }
}

/// Polynomial extrapolation (Neville) of `(x_i, v_i)` to `x = 0`.
pub fn extrapolate_to_zero(xs: &[f64], values: &[Complex64]) -> Complex64 {
    let mut table = values.to_vec();
    let n = table.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            table[i] = (xj * table[i] - xi * table[i + 1]) / (xj - xi);
        }
    }
    table[0]
}

/// Radial Abel limit of `G` at angle `φ`, by plain power-series sums on the
/// chosen sheet: `r → 1⁻` of `G(r e^{iφ})` on sheet 1, or `r → 1⁺` of
/// `Σ √n (r e^{iφ})^{−n}` on sheet 2.
///
/// The samples use gaps `first_gap / 2^j`, and the limit is read off by
/// polynomial extrapolation in the gap. The error estimate is the change from
/// dropping the closest sample.
pub fn abel_boundary_value(sheet: Sheet, phi: f64, cfg: &AbelConfig) -> Result<Estimate> {
    if cfg.levels < 2 || !(cfg.first_gap > 0.0 && cfg.first_gap < 1.0) {
        return Err(Error::Domain {
            what: "abel_boundary_value",
            arg: format!("{cfg:?}"),
            domain: "levels ≥ 2, 0 < first_gap < 1",
        });
    }
    let mut gaps = Vec::with_capacity(cfg.levels);
    let mut samples = Vec::with_capacity(cfg.levels);
    let mut terms = 0;
    for j in 0..cfg.levels {
        let gap = cfg.first_gap / (1u64 << j) as f64;
        let w = match sheet {
            Sheet::First => Complex64::from_polar(1.0 - gap, phi),
            Sheet::Second => Complex64::from_polar(1.0 + gap, phi).inv(),
        };
        let (est, converged) = polylog::direct_series(G_ORDER, w, cfg.term_tol, 50_000_000);
        if !converged {
            return Err(Error::Convergence {
                tol: cfg.term_tol,
                max_terms: 50_000_000,
                estimate: est.value,
                error: est.error,
            });
        }
        terms += est.terms;
        gaps.push(gap);
        samples.push(est.value);
    }
    let value = extrapolate_to_zero(&gaps, &samples);
    let coarser = extrapolate_to_zero(&gaps[..gaps.len() - 1], &samples[..samples.len() - 1]);
    Ok(Estimate {
        value,
        error: (value - coarser).norm(),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Reference values from an independent arbitrary-precision evaluation
    // (mpmath polylog, 30 digits).
    const ZETA_3_2: f64 = 2.612_375_348_685_488;
    const F_AT_ONE_RADIAN: (f64, f64) = (0.210_049_421_925_531, 1.050_558_847_127_8);
    const G_AT_TWO_RADIANS: (f64, f64) = (-0.448_813_656_813_381, 0.163_858_977_984_708);
    const G_AT_PI: f64 = -0.380_104_812_609_684;

    #[test]
    fn truncated_series_basics() {
        let z = c(0.3, 0.4);
        assert_eq!(eval_gn(1, z), z);
        assert_eq!(eval_gn(17, c(0.0, 0.0)), c(0.0, 0.0));
        assert!((eval_gn(2, c(1.0, 0.0)).re - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(eval_gn(0, z), c(0.0, 0.0));
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let z = c(0.4, -0.7);
        let h = 1e-6;
        let fd = (eval_gn(9, z + h) - eval_gn(9, z - h)) / (2.0 * h);
        assert!((fd - eval_gn_derivative(9, z)).norm() < 1e-7);
    }

    #[test]
    fn accuracy_validation() {
        assert!(SeriesAccuracy::new(1e-15, 10).is_err());
        assert!(SeriesAccuracy::new(1e-10, 0).is_err());
        assert!(SeriesAccuracy::new(f64::NAN, 10).is_err());
        assert!(SeriesAccuracy::new(1e-14, 1).is_ok());
    }

    #[test]
    fn f_reference_points() {
        let acc = SeriesAccuracy::default();
        assert_eq!(eval_f_disk(c(0.0, 0.0), &acc).unwrap().value, c(0.0, 0.0));
        let one = eval_f_disk(c(1.0, 0.0), &acc).unwrap().value;
        assert!((one.re - ZETA_3_2).abs() < 1e-13 && one.im == 0.0);
        let f1 = eval_f_circle(1.0, &acc).unwrap().value;
        assert!((f1 - c(F_AT_ONE_RADIAN.0, F_AT_ONE_RADIAN.1)).norm() < 1e-13);
        let eta = (1.0 - 2f64.powf(-0.5)) * ZETA_3_2;
        assert!((eval_f_disk(c(-1.0, 0.0), &acc).unwrap().value.re + eta).abs() < 1e-13);
    }

    #[test]
    fn f_outside_disk_is_rejected() {
        let acc = SeriesAccuracy::default();
        assert!(matches!(eval_f_disk(c(1.1, 0.0), &acc), Err(Error::Domain { .. })));
        assert!(eval_f_sheet2(c(0.5, 0.0), &acc).is_err());
    }

    #[test]
    fn exhausted_budget_reports_convergence_error() {
        let tight = SeriesAccuracy::new(1e-14, 5).unwrap();
        match eval_f_disk(c(0.45, 0.1), &tight) {
            Err(Error::Convergence { estimate, .. }) => assert!(estimate.norm() > 0.0),
            other => panic!("expected convergence error, got {other:?}"),
        }
        assert!(eval_f_circle(2.0, &tight).is_err());
    }

    #[test]
    fn f_symmetries() {
        let acc = SeriesAccuracy::default();
        let at_pi = eval_f_circle(PI, &acc).unwrap().value;
        assert!(at_pi.im.abs() < 1e-14);
        let a = eval_f_circle(1.0, &acc).unwrap().value;
        let b = eval_f_circle(-1.0, &acc).unwrap().value;
        assert!((a - b.conj()).norm() < 1e-15);
        let wrapped = eval_f_circle(1.0 + 3.0 * TAU, &acc).unwrap().value;
        assert!((wrapped - a).norm() < 1e-12);
    }

    #[test]
    fn g_reference_points() {
        let acc = SeriesAccuracy::default();
        let g2 = eval_g_circle(2.0, &acc).unwrap().value;
        assert!((g2 - c(G_AT_TWO_RADIANS.0, G_AT_TWO_RADIANS.1)).norm() < 1e-12);
        let gpi = eval_g_circle(PI, &acc).unwrap().value;
        assert!((gpi.re - G_AT_PI).abs() < 1e-12 && gpi.im.abs() < 1e-12);
        let gm2 = eval_g_circle(-2.0, &acc).unwrap().value;
        assert!((gm2 - g2.conj()).norm() < 1e-14);
    }

    #[test]
    fn g_guard() {
        let acc = SeriesAccuracy::default();
        assert!(matches!(eval_g_circle(5e-4, &acc), Err(Error::NearSingularity { .. })));
        assert!(eval_g_circle(TAU - 1e-4, &acc).is_err());
        assert!(eval_g_finite_difference(0.0, &acc).is_err());
        assert!(eval_g_circle(2e-3, &acc).is_ok());
    }

    #[test]
    fn g_routes_agree() {
        let acc = SeriesAccuracy::default();
        for phi in [0.1, 0.5, 2.0, PI, -1.3] {
            let check = cross_check_g(phi, &acc).unwrap();
            assert!(check.agrees(), "{phi}: {check:?}");
        }
    }

    #[test]
    fn g_disk_matches_direct_sum() {
        let acc = SeriesAccuracy::default();
        for z in [c(0.3, 0.2), c(0.6, -0.5), c(-0.9, 0.1), c(0.2, 0.95)] {
            let mut direct = c(0.0, 0.0);
            let mut power = c(1.0, 0.0);
            for n in 1..20_000 {
                power *= z;
                direct += power * (n as f64).sqrt();
            }
            let got = eval_g_disk(z, &acc).unwrap().value;
            assert!((got - direct).norm() < 1e-11 * direct.norm().max(1.0), "{z}");
        }
        assert!(eval_g_disk(c(1.0, 0.0), &acc).is_err());
    }

    #[test]
    fn sheet_two_is_the_reciprocal_series() {
        let acc = SeriesAccuracy::default();
        let z = c(2.0, 1.0);
        let outer = eval_g_sheet2(z, &acc).unwrap().value;
        let inner = eval_g_disk(z.inv(), &acc).unwrap().value;
        assert_eq!(outer, inner);
        let far = eval_g_sheet2(c(1e6, 0.0), &acc).unwrap().value;
        assert!((far - c(1e-6, 0.0)).norm() < 1e-11);
        assert!(eval_g_sheet2(c(0.5, 0.5), &acc).is_err());
    }

    #[test]
    fn neville_recovers_polynomials() {
        let xs = [0.4, 0.2, 0.1, 0.05];
        let vs: Vec<_> = xs.iter().map(|&x| c(1.0 + 2.0 * x - x * x * x, -x)).collect();
        assert!((extrapolate_to_zero(&xs, &vs) - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn abel_limit_at_pi() {
        let est = abel_boundary_value(Sheet::First, PI, &AbelConfig::default()).unwrap();
        assert!((est.value.re - G_AT_PI).abs() < 1e-6, "{est:?}");
    }

    #[test]
    fn double_cover_flips_imaginary_part() {
        let acc = SeriesAccuracy::default();
        for phi in [0.3, 1.7, 4.0] {
            let (s1, first) = eval_f_double_cover(phi, &acc).unwrap();
            let (s2, second) = eval_f_double_cover(phi + TAU, &acc).unwrap();
            assert_eq!((s1, s2), (Sheet::First, Sheet::Second));
            assert!((first.value.re - second.value.re).abs() < 1e-14);
            assert!((first.value.im + second.value.im).abs() < 1e-14);
            let (_, again) = eval_f_double_cover(phi + 2.0 * TAU, &acc).unwrap();
            assert!((again.value - first.value).norm() < 1e-12);
        }
    }
}
