//! One function per subcommand, each producing a [`FigureData`] plus a list of
//! invariant violations (empty on success).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use qho_dual::auxfun::{
    cross_check_g, eval_f_circle, eval_f_disk, eval_g_circle, eval_g_disk, eval_g_sheet2, eval_gn, find_zeros, map_y,
    map_z, CutSide, Estimate, SeriesAccuracy, Sheet,
};
use qho_dual::dynamics::{born_distribution, duality_check, evolve_quantum, stroboscopic_time, transport_sites};
use qho_dual::operators::ontological_matrix;
use qho_dual::{
    build_hamiltonian, conjugate_to_ontological, AngleGrid, BasisTag, DualityMap, LadderOp, OscillatorConfig,
    StateVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::CliError;
use crate::figure::{FigureData, Scalar};

pub type Params = Vec<(String, String)>;

/// A figure and the invariants it failed, if any.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub figure: FigureData,
    pub violations: Vec<String>,
}

impl Outcome {
    fn new(figure: FigureData) -> Self {
        Self {
            figure,
            violations: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, value: f64, limit: f64) {
        self.figure.push_summary(name, Scalar::Real(value));
        if !(value <= limit) {
            self.violations.push(format!("{name} = {value:e} exceeds {limit:e}"));
        }
    }

    fn finish(mut self) -> Self {
        self.figure
            .push_summary("passed", Scalar::Bool(self.violations.is_empty()));
        self
    }
}

/// Energy levels `E_k = kω`, `k = 0..n−1`.
pub fn emit_spectrum(n: usize, omega: f64) -> Result<FigureData, CliError> {
    let config = OscillatorConfig::new(n, omega)?;
    let h = build_hamiltonian(&config)?;
    let mut fig = FigureData::new(
        "spectrum",
        vec![("n".into(), n.to_string()), ("omega".into(), omega.to_string())],
    );
    fig.push_column("level", (0..n).map(|k| k as f64).collect())?;
    fig.push_column("energy", (0..n).map(|k| h.get(k, k).re).collect())?;
    Ok(fig)
}

/// Spectrum plus the eigenvalues of `H` after conjugation to circle sites.
pub fn spectrum(n: usize, omega: f64, tol: f64, params: Params) -> Result<Outcome, CliError> {
    let mut fig = emit_spectrum(n, omega)?;
    fig.metadata.parameters = params;
    let map = DualityMap::new(n)?;
    let h = build_hamiltonian(&OscillatorConfig::new(n, omega)?)?;
    let eig = conjugate_to_ontological(&h, &map)?.hermitian_eigenvalues();
    let worst = eig
        .iter()
        .zip(fig.column("energy").unwrap_or_default())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    fig.push_column("ontological_eigenvalue", eig)?;
    let mut out = Outcome::new(fig);
    out.check("max_eigenvalue_deviation", worst, tol);
    Ok(out.finish())
}

/// Image curves `y(r e^{iθ})`, `θ_j = 2πj/S`, `j = 0..=S`, one per radius.
///
/// Long format: one row per sample with its radius and angle. Each curve is
/// closed; its last row repeats the first point.
pub fn emit_domain_map(radii: &[f64], samples_per_circle: usize) -> Result<FigureData, CliError> {
    if samples_per_circle < 8 {
        return Err(CliError::Argument(format!(
            "samples per circle must be at least 8, got {samples_per_circle}"
        )));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
        return Err(CliError::Argument(format!("radius {r} outside (0, 1] (sheet 1 only)")));
    }
    let mut cols: [Vec<f64>; 6] = Default::default();
    for &r in radii {
        for j in 0..=samples_per_circle {
            let theta = if j == samples_per_circle {
                0.0
            } else {
                TAU * j as f64 / samples_per_circle as f64
            };
            let z = Complex64::from_polar(r, theta);
            let y = map_y(z)?;
            for (col, v) in cols.iter_mut().zip([r, theta, z.re, z.im, y.re, y.im]) {
                col.push(v);
            }
        }
    }
    let mut fig = FigureData::new("map-domains", Vec::new());
    for (name, values) in ["radius", "theta", "z_re", "z_im", "y_re", "y_im"]
        .into_iter()
        .zip(cols)
    {
        fig.push_column(name, values)?;
    }
    Ok(fig)
}

pub fn default_radii() -> Vec<f64> {
    (1..=20).map(|k| 0.05 * k as f64).collect()
}

pub fn map_domains(radii: &[f64], samples: usize, params: Params) -> Result<Outcome, CliError> {
    let mut fig = emit_domain_map(radii, samples)?;
    fig.metadata.parameters = params;
    // nesting: |y| grows with r on every sampled ray
    let ys: Vec<f64> = fig
        .column("y_re")
        .unwrap_or_default()
        .iter()
        .zip(fig.column("y_im").unwrap_or_default())
        .map(|(a, b)| a.hypot(*b))
        .collect();
    let per_curve = samples + 1;
    let mut crossings = 0i64;
    let mut order: Vec<usize> = (0..radii.len()).collect();
    order.sort_by(|&a, &b| radii[a].total_cmp(&radii[b]));
    for pair in order.windows(2) {
        for j in 0..per_curve {
            let inner = ys[pair[0] * per_curve + j];
            let outer = ys[pair[1] * per_curve + j];
            if radii[pair[1]] > radii[pair[0]] && !(outer > inner) && outer.is_finite() {
                crossings += 1;
            }
        }
    }
    let mut gap = 0.0_f64;
    for c in 0..radii.len() {
        let first = c * per_curve;
        let last = first + samples;
        let dy = (fig.column("y_re").unwrap()[first] - fig.column("y_re").unwrap()[last])
            .hypot(fig.column("y_im").unwrap()[first] - fig.column("y_im").unwrap()[last]);
        gap = gap.max(dy);
    }
    fig.push_summary("curves", Scalar::Int(radii.len() as i64));
    fig.push_summary("nesting_violations", Scalar::Int(crossings));
    let mut out = Outcome::new(fig);
    if crossings > 0 {
        out.violations.push(format!("{crossings} samples break radial nesting"));
    }
    out.check("max_closure_gap", gap, 1e-12);
    Ok(out.finish())
}

/// `f(φ)` sampled at `φ_j = −π + 2πj/(S−1)`, `j = 0..S−1`.
pub fn f_curve(samples: usize, acc: &SeriesAccuracy, tol: f64, params: Params) -> Result<Outcome, CliError> {
    if samples < 2 {
        return Err(CliError::Argument("f-curve needs at least 2 samples".into()));
    }
    let phis: Vec<f64> = (0..samples)
        .map(|j| -PI + TAU * j as f64 / (samples - 1) as f64)
        .collect();
    let values = phis
        .par_iter()
        .map(|&phi| eval_f_circle(phi, acc).map(|e| e.value))
        .collect::<Result<Vec<_>, _>>()?;
    let mut fig = FigureData::new("f-curve", params);
    fig.push_column("phi", phis)?;
    fig.push_column("re_f", values.iter().map(|v| v.re).collect())?;
    fig.push_column("im_f", values.iter().map(|v| v.im).collect())?;
    let edge = values[0].im.abs().max(values[samples - 1].im.abs());
    let mut out = Outcome::new(fig);
    out.check("max_abs_im_f_at_pi", edge, tol);
    Ok(out.finish())
}

/// Random energy-basis state with amplitudes uniform in the unit square.
pub fn random_state(rng: &mut impl Rng, dim: usize) -> Result<StateVector, CliError> {
    let amps = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Ok(StateVector::new(BasisTag::Energy, amps)?.normalized())
}

/// Maximum Born-weight deviation per trial over `k = 0..=max_k`.
pub fn duality_report(
    n: usize,
    trials: usize,
    seed: u64,
    omega: f64,
    max_k: usize,
    tol: f64,
    params: Params,
) -> Result<Outcome, CliError> {
    let map = DualityMap::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states = (0..trials)
        .map(|_| random_state(&mut rng, n))
        .collect::<Result<Vec<_>, _>>()?;
    let per_trial = states
        .par_iter()
        .map(|state| {
            (0..=max_k as i64).try_fold(0.0_f64, |worst, k| {
                duality_check(state, k, &map, omega).map(|d| worst.max(d))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let worst = per_trial.iter().copied().fold(0.0, f64::max);
    let mut fig = FigureData::new("duality-check", params);
    fig.push_column("trial", (0..trials).map(|t| t as f64).collect())?;
    fig.push_column("max_deviation", per_trial)?;
    fig.push_summary("n", Scalar::Int(n as i64));
    fig.push_summary("trials", Scalar::Int(trials as i64));
    fig.push_summary("max_k", Scalar::Int(max_k as i64));
    let mut out = Outcome::new(fig);
    out.check("max_deviation", worst, tol);
    Ok(out.finish())
}

/// Closed-form circle-site elements, with their deviation from `U·Op·U†`.
pub fn matrix_elements(n: usize, ops: &[LadderOp], tol: f64, params: Params) -> Result<Outcome, CliError> {
    let map = DualityMap::new(n)?;
    let mut fig = FigureData::new("matrix-elements", params);
    fig.push_column("s1", (0..n * n).map(|k| (k / n) as f64).collect())?;
    fig.push_column("s2", (0..n * n).map(|k| (k % n) as f64).collect())?;
    let mut checks = Vec::new();
    for &op in ops {
        let closed = ontological_matrix(op, n)?;
        let brute = conjugate_to_ontological(&op.energy_matrix(n)?, &map)?;
        checks.push((op, closed.max_abs_diff(&brute)?, closed.hermiticity_residual()));
        fig.push_column(
            &format!("re_{}", op.name()),
            closed.entries().iter().map(|z| z.re).collect(),
        )?;
        fig.push_column(
            &format!("im_{}", op.name()),
            closed.entries().iter().map(|z| z.im).collect(),
        )?;
    }
    let mut out = Outcome::new(fig);
    for (op, deviation, herm) in checks {
        out.check(&format!("max_deviation_{}", op.name()), deviation, tol);
        if matches!(op, LadderOp::X | LadderOp::P) {
            out.check(&format!("hermiticity_residual_{}", op.name()), herm, 1e-12);
        }
    }
    Ok(out.finish())
}

pub fn zeros_report(n: usize, width: f64, tol: f64, params: Params) -> Result<Outcome, CliError> {
    let zs = find_zeros(n)?;
    let mut fig = FigureData::new("zeros", params);
    fig.push_column("re", zs.roots.iter().map(|z| z.re).collect())?;
    fig.push_column("im", zs.roots.iter().map(|z| z.im).collect())?;
    fig.push_column("modulus", zs.roots.iter().map(|z| z.norm()).collect())?;
    fig.push_column(
        "arg",
        zs.roots
            .iter()
            .map(|z| if z.norm() == 0.0 { 0.0 } else { z.arg() })
            .collect(),
    )?;
    fig.push_summary("degree", Scalar::Int(n as i64));
    fig.push_summary("residual", Scalar::Real(zs.residual));
    fig.push_summary("coefficient_sum", Scalar::Real(zs.coefficient_sum));
    fig.push_summary("count_near_circle", Scalar::Int(zs.count_near_circle(width) as i64));
    fig.push_summary("fraction_near_circle", Scalar::Real(zs.fraction_near_circle(width)));
    fig.push_summary("max_modulus", Scalar::Real(zs.max_modulus()));
    let mut out = Outcome::new(fig);
    out.check("relative_residual", zs.relative_residual(), tol);
    Ok(out.finish())
}

/// Functions reachable through `auxfun-eval`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxFunction {
    /// `G_N(z)`
    Gn,
    /// `F(z)`, `|z| ≤ 1`
    BigF,
    /// `f(φ)`
    SmallF,
    /// `g(φ)`, with the finite-difference cross-check
    SmallG,
    /// `G(z)` on sheet 1
    BigG,
    /// `G(z)` on sheet 2
    BigGSheet2,
    /// `y(z)`
    MapY,
    /// `z(y)` on the chosen sheet
    MapZ,
}

pub struct AuxQuery {
    pub function: AuxFunction,
    pub n: Option<usize>,
    pub z: Option<Complex64>,
    pub phi: Option<f64>,
    pub sheet: Sheet,
    pub side: Option<CutSide>,
}

pub fn auxfun_eval(query: &AuxQuery, acc: &SeriesAccuracy, params: Params) -> Result<Outcome, CliError> {
    let need_z = || {
        query
            .z
            .ok_or_else(|| CliError::Argument("this function needs --re/--im".into()))
    };
    let need_phi = || {
        query
            .phi
            .ok_or_else(|| CliError::Argument("this function needs --phi".into()))
    };
    let exact = |v: Complex64| Estimate {
        value: v,
        error: 0.0,
        terms: 0,
    };
    let mut fig = FigureData::new("auxfun-eval", params);
    let mut extra = None;
    let (input, est) = match query.function {
        AuxFunction::Gn => {
            let n = query.n.ok_or_else(|| CliError::Argument("G_N needs --n".into()))?;
            let z = need_z()?;
            (z, exact(eval_gn(n, z)))
        }
        AuxFunction::BigF => {
            let z = need_z()?;
            (z, eval_f_disk(z, acc)?)
        }
        AuxFunction::BigG => {
            let z = need_z()?;
            (z, eval_g_disk(z, acc)?)
        }
        AuxFunction::BigGSheet2 => {
            let z = need_z()?;
            (z, eval_g_sheet2(z, acc)?)
        }
        AuxFunction::MapY => {
            let z = need_z()?;
            (z, exact(map_y(z)?))
        }
        AuxFunction::MapZ => {
            let y = need_z()?;
            (y, exact(map_z(y, query.sheet, query.side)?))
        }
        AuxFunction::SmallF => {
            let phi = need_phi()?;
            (Complex64::new(phi, 0.0), eval_f_circle(phi, acc)?)
        }
        AuxFunction::SmallG => {
            let phi = need_phi()?;
            let check = cross_check_g(phi, acc)?;
            extra = Some(check);
            (Complex64::new(phi, 0.0), eval_g_circle(phi, acc)?)
        }
    };
    fig.push_column("in_re", vec![input.re])?;
    fig.push_column("in_im", vec![input.im])?;
    fig.push_column("re", vec![est.value.re])?;
    fig.push_column("im", vec![est.value.im])?;
    fig.push_column("error_estimate", vec![est.error])?;
    fig.push_summary("terms", Scalar::Int(est.terms as i64));
    let mut out = Outcome::new(fig);
    if let Some(check) = extra {
        out.figure
            .push_summary("finite_difference_re", Scalar::Real(check.finite_difference.re));
        out.figure
            .push_summary("finite_difference_im", Scalar::Real(check.finite_difference.im));
        out.check("route_discrepancy", check.discrepancy(), check.tolerance);
    }
    Ok(out.finish())
}

/// Born weights before and after `k` stroboscopic steps, both routes.
pub fn evolve_report(
    n: usize,
    k: i64,
    omega: f64,
    seed: u64,
    site: Option<usize>,
    tol: f64,
    params: Params,
) -> Result<Outcome, CliError> {
    let map = DualityMap::new(n)?;
    let state = match site {
        Some(s) => map.to_energy(&StateVector::basis_state(BasisTag::Ontological, n, s)?)?,
        None => random_state(&mut ChaCha8Rng::seed_from_u64(seed), n)?,
    };
    let t = stroboscopic_time(k, n, omega);
    let initial = born_distribution(&state, &map)?;
    let quantum = born_distribution(&evolve_quantum(&state, t, omega)?, &map)?;
    let classical = transport_sites(&initial, k);
    let deviation = quantum.max_abs_diff(&classical)?;
    let mut fig = FigureData::new("evolve", params);
    fig.push_column("site", (0..n).map(|s| s as f64).collect())?;
    fig.push_column("phi", AngleGrid::new(n)?.angles())?;
    fig.push_column("initial", initial.weights().to_vec())?;
    fig.push_column("quantum", quantum.weights().to_vec())?;
    fig.push_column("classical", classical.weights().to_vec())?;
    fig.push_summary("time", Scalar::Real(t));
    let mut out = Outcome::new(fig);
    out.check("max_deviation", deviation, tol);
    Ok(out.finish())
}
