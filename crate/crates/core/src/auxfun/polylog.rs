//! Summation of `Σ_{n≥1} n^{-s} e^{μn}` for `Re μ ≤ 0`, `|Im μ| ≤ π`.
//!
//! The first `M − 1` terms are summed directly. The remainder is closed with
//! Euler–Maclaurin: the tail integral `∫_M^∞ x^{-s} e^{μx} dx`, half the
//! boundary term, and Bernoulli corrections built from derivatives of
//! `x^{-s} e^{μx}` at `M`. For `s < 1` on the unit circle the series diverges
//! and the integral is taken in its analytically continued (Abel) sense; the
//! result is then the Abel sum.
//!
//! The tail integral has two representations:
//! - large `|μ|M`: the asymptotic expansion `−e^{μM} M^{-s} μ^{-1} Σ_j (s)_j (μM)^{-j}`;
//! - small `|μ|M`: `Γ(1−s)(−μ)^{s−1} − Σ_k μ^k M^{k+1−s} / (k!(k+1−s))`.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

/// Value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    /// Number of series terms (direct plus correction terms) that were used.
    pub terms: usize,
}

const BASE_CUTOFF: usize = 64;
const ASYMPTOTIC_MIN: f64 = 40.0;
const CONVERGENT_MAX: f64 = 3.0;
const BERNOULLI_TERMS: usize = 40;

/// `B_{2k}/(2k)!` for `k = 1..=BERNOULLI_TERMS`, via `(−1)^{k+1} 2ζ(2k)/(2π)^{2k}`.
fn bernoulli_ratios() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (1..=BERNOULLI_TERMS)
            .map(|k| {
                let p = 2 * k as i32;
                let zeta = if k == 1 {
                    PI * PI / 6.0
                } else {
                    // head plus Euler–Maclaurin tail from n = 100
                    let pf = p as f64;
                    let n0 = 100.0_f64;
                    let head: f64 = (1..100).rev().map(|n| (n as f64).powi(-p)).sum();
                    head + n0.powi(1 - p) / (pf - 1.0) + 0.5 * n0.powi(-p) + pf / 12.0 * n0.powi(-p - 1)
                        - pf * (pf + 1.0) * (pf + 2.0) / 720.0 * n0.powi(-p - 3)
                };
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * zeta / TAU.powi(p)
            })
            .collect()
    })
}

/// `Γ(x)` for real non-integer `x`, via Lanczos (g = 7, n = 9) and reflection.
pub(crate) fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    (TAU).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// `∫_M^∞ x^{-s} e^{μx} dx` (continued analytically in `s` when divergent).
fn tail_integral(s: f64, mu: Complex64, m: f64) -> (Complex64, f64) {
    let scale = mu.norm() * m;
    if mu.norm() == 0.0 {
        // only reached for s > 1
        return (Complex64::new(m.powf(1.0 - s) / (s - 1.0), 0.0), 0.0);
    }
    if scale >= ASYMPTOTIC_MIN {
        let inv = 1.0 / (mu * m);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        let mut last = f64::INFINITY;
        for j in 0..200 {
            term *= (s + j as f64) * inv;
            let size = term.norm();
            if size > last {
                break;
            }
            sum += term;
            last = size;
            if size <= 1e-18 * sum.norm() {
                break;
            }
        }
        let prefactor = -(mu * m).exp() * m.powf(-s) / mu;
        (prefactor * sum, (prefactor * last).norm())
    } else {
        let a = 1.0 - s;
        let lead = (-mu).powf(-a) * gamma(a);
        // the k = 0 term carries M^{a}/a
        let mut power = Complex64::new(m.powf(a), 0.0);
        let mut sum = power / a;
        let mut last = sum.norm();
        let mut k = 1;
        while k < 400 {
            power *= mu * m / k as f64;
            let term = power / (k as f64 + a);
            sum += term;
            last = term.norm();
            if last <= 1e-18 * (sum.norm() + lead.norm()) && (k as f64) > scale {
                break;
            }
            k += 1;
        }
        (lead - sum, last)
    }
}

/// `d^m/dx^m [x^{-s} e^{μx}]` at `x = M`, divided by `e^{μM}`.
fn scaled_derivative(s: f64, mu: Complex64, m: f64, order: usize) -> Complex64 {
    // Leibniz: Σ_j C(order, j) (−1)^j (s)_j M^{−s−j} μ^{order−j}
    let mut total = Complex64::new(0.0, 0.0);
    let mut binom = 1.0;
    let mut rising = 1.0;
    let base = m.powf(-s);
    for j in 0..=order {
        if j > 0 {
            binom *= (order - j + 1) as f64 / j as f64;
            rising *= -(s + (j - 1) as f64) / m;
        }
        total += mu.powi((order - j) as i32) * (binom * rising * base);
    }
    total
}

fn choose_cutoff(mu: Complex64) -> usize {
    let r = mu.norm();
    let m = BASE_CUTOFF as f64;
    if r * m >= ASYMPTOTIC_MIN || r * m <= CONVERGENT_MAX {
        BASE_CUTOFF
    } else {
        (ASYMPTOTIC_MIN / r).ceil() as usize
    }
}

/// `Σ_{n≥1} n^{-s} e^{μn}` for `Re μ ≤ 0` and `|Im μ| ≤ π`, excluding the
/// divergent point `μ = 0` when `s ≤ 1`.
pub(crate) fn lerch_series(s: f64, mu: Complex64) -> Estimate {
    debug_assert!(mu.re <= 1e-12 && mu.im.abs() <= PI + 1e-12);
    lerch_series_with_cutoff(s, mu, choose_cutoff(mu))
}

fn lerch_series_with_cutoff(s: f64, mu: Complex64, cutoff: usize) -> Estimate {
    let m = cutoff as f64;

    let mut head = Complex64::new(0.0, 0.0);
    for n in (1..cutoff).rev() {
        let nf = n as f64;
        head += (mu * nf).exp() * nf.powf(-s);
    }

    let (integral, integral_err) = tail_integral(s, mu, m);
    let boundary = (mu * m).exp();
    let mut corrections = 0.5 * m.powf(-s);
    let mut em = Complex64::new(corrections, 0.0);
    let mut last = f64::INFINITY;
    let mut used = 0;
    for (k, &ratio) in bernoulli_ratios().iter().enumerate() {
        let order = 2 * k + 1;
        let term = -ratio * scaled_derivative(s, mu, m, order);
        let size = term.norm();
        if size > last {
            break;
        }
        em += term;
        last = size;
        used = k + 1;
        if size <= 1e-18 * em.norm().max(1e-300) {
            break;
        }
    }
    corrections = last * boundary.norm();

    let value = head + integral + boundary * em;
    let roundoff = f64::EPSILON * (cutoff as f64).sqrt() * (head.norm() + integral.norm() + 1.0);
    Estimate {
        value,
        error: integral_err + corrections + roundoff,
        terms: cutoff - 1 + used,
    }
}

/// `Σ_{n≥1} c_n z^n` with `c_n = n^{-s}`, summed directly for `|z| < 1`.
///
/// Stops once the geometric bound on the remainder drops below `abs_tol`.
pub(crate) fn direct_series(s: f64, z: Complex64, abs_tol: f64, max_terms: usize) -> (Estimate, bool) {
    let r = z.norm();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    let mut bound = f64::INFINITY;
    let mut n = 0;
    while n < max_terms {
        n += 1;
        power *= z;
        sum += power * (n as f64).powf(-s);
        // remainder ≤ next term / (1 − q), q bounding the ratio of successive terms
        let next = (n + 1) as f64;
        let ratio = if s >= 0.0 {
            r
        } else {
            ((next + 1.0) / next).powf(-s) * r
        };
        bound = if ratio < 1.0 {
            next.powf(-s) * r.powi(n as i32 + 1) / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        if r == 0.0 || bound <= abs_tol {
            break;
        }
    }
    let converged = bound <= abs_tol || r == 0.0;
    (
        Estimate {
            value: sum,
            error: if r == 0.0 {
                0.0
            } else {
                bound + f64::EPSILON * n as f64 * sum.norm()
            },
            terms: n,
        },
        converged,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma(1.5) - 0.5 * PI.sqrt()).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
    }

    #[test]
    fn bernoulli_leading_ratios() {
        let t = bernoulli_ratios();
        assert!((t[0] - 1.0 / 12.0).abs() < 1e-16);
        assert!((t[1] + 1.0 / 720.0).abs() < 1e-17);
        assert!((t[2] - 1.0 / 30240.0).abs() < 1e-18);
    }

    #[test]
    fn geometric_series() {
        // s = 0 gives z/(1 − z)
        for mu in [
            Complex64::new(-0.3, 1.0),
            Complex64::new(0.0, 2.5),
            Complex64::new(0.0, 0.01),
        ] {
            let z = mu.exp();
            let got = lerch_series(0.0, mu).value;
            let want = z / (1.0 - z);
            assert!(
                (got - want).norm() <= 1e-12 * want.norm().max(1.0),
                "{mu}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn log_series_on_circle() {
        // s = 1 gives −ln(1 − z)
        for phi in [0.05, 0.7, 3.0, -2.0] {
            let mu = Complex64::new(0.0, phi);
            let want = -(1.0 - mu.exp()).ln();
            let got = lerch_series(1.0, mu).value;
            assert!((got - want).norm() <= 1e-13, "{phi}: {got} vs {want}");
        }
    }

    #[test]
    fn both_integral_regimes_agree() {
        // same μ, with the tail integral taken through each representation
        for (s, phi) in [(1.5, 0.03), (1.5, 0.2), (-0.5, 0.04), (-0.5, 0.3)] {
            let mu = Complex64::new(0.0, phi);
            let small = lerch_series_with_cutoff(s, mu, (CONVERGENT_MAX / phi) as usize);
            let large = lerch_series_with_cutoff(s, mu, (ASYMPTOTIC_MIN / phi).ceil() as usize);
            let scale = small.value.norm().max(1.0);
            assert!(
                (small.value - large.value).norm() <= 1e-13 * scale,
                "{s} {phi}: {small:?} {large:?}"
            );
        }
    }
}
