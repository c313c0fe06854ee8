//! Zeros of the truncated series `G_N(z) = Σ_{n=1}^N √n zⁿ`.
//!
//! `G_N(z) = z·P(z)` with `P(z) = Σ_{k=0}^{N−1} √(k+1) z^k`. The roots of `P`
//! are the eigenvalues of its balanced companion matrix; each is then polished
//! by Newton steps on `G_N`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::{eval_gn, eval_gn_derivative};
use crate::error::{Error, Result};

/// Largest degree accepted by [`find_zeros`].
pub const MAX_ZERO_DEGREE: usize = 512;

/// All roots of `G_N`, sorted by argument.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    pub degree: usize,
    pub roots: Vec<Complex64>,
    /// `max |G_N(root)|`.
    pub residual: f64,
    /// `Σ_n √n`, the scale residuals are judged against.
    pub coefficient_sum: f64,
    /// Newton steps accepted during polishing.
    pub polish_steps: usize,
}

impl ZeroSet {
    /// Fraction of roots with `||z| − 1| < width`.
    pub fn fraction_near_circle(&self, width: f64) -> f64 {
        self.count_near_circle(width) as f64 / self.roots.len() as f64
    }

    pub fn count_near_circle(&self, width: f64) -> usize {
        self.roots.iter().filter(|z| (z.norm() - 1.0).abs() < width).count()
    }

    /// `residual / Σ|coeff|`.
    pub fn relative_residual(&self) -> f64 {
        self.residual / self.coefficient_sum
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Parlett–Reinsch balancing with radix-2 scaling. Eigenvalues are unchanged.
fn balance(m: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += m[(j, i)].abs();
                    row += m[(i, j)].abs();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let mut g = row / RADIX;
            let mut f = 1.0;
            let s = col + row;
            while col < g {
                f *= RADIX;
                col *= RADIX * RADIX;
            }
            g = row * RADIX;
            while col > g {
                f /= RADIX;
                col /= RADIX * RADIX;
            }
            if (col + row) / f < 0.95 * s {
                converged = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    m[(i, j)] *= inv;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Roots of `Σ_{k=0}^{d} c_k z^k` with `c_d ≠ 0`, from the companion matrix.
fn companion_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    let mut m = DMatrix::<f64>::zeros(degree, degree);
    for i in 1..degree {
        m[(i, i - 1)] = 1.0;
    }
    for k in 0..degree {
        m[(k, degree - 1)] = -coeffs[k] / lead;
    }
    balance(&mut m);
    let max_iterations = 200 * degree;
    let schur = Schur::try_new(m, f64::EPSILON, max_iterations).ok_or(Error::RootFinder {
        degree,
        iterations: max_iterations,
    })?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Newton polish on `G_N`; keeps a step only if it lowers `|G_N|`.
fn polish(degree: usize, root: Complex64) -> (Complex64, usize) {
    let mut z = root;
    let mut value = eval_gn(degree, z).norm();
    let mut accepted = 0;
    for _ in 0..3 {
        let d = eval_gn_derivative(degree, z);
        if d.norm() == 0.0 {
            break;
        }
        let candidate = z - eval_gn(degree, z) / d;
        let cv = eval_gn(degree, candidate).norm();
        if cv < value {
            z = candidate;
            value = cv;
            accepted += 1;
        } else {
            break;
        }
    }
    (z, accepted)
}

/// All `N` roots of `G_N` (the root at the origin included).
pub fn find_zeros(degree: usize) -> Result<ZeroSet> {
    if degree == 0 || degree > MAX_ZERO_DEGREE {
        return Err(Error::Domain {
            what: "find_zeros",
            arg: degree.to_string(),
            domain: "1 ≤ N ≤ 512",
        });
    }
    let coeffs: Vec<f64> = (1..=degree).map(|n| (n as f64).sqrt()).collect();
    let mut roots = vec![Complex64::new(0.0, 0.0)];
    let mut polish_steps = 0;
    for root in companion_roots(&coeffs)? {
        let (z, steps) = polish(degree, root);
        polish_steps += steps;
        roots.push(z);
    }
    roots.sort_by(|a, b| {
        let key = |z: &Complex64| if z.norm() == 0.0 { 0.0 } else { z.arg() };
        key(a).total_cmp(&key(b)).then(a.norm().total_cmp(&b.norm()))
    });
    let residual = roots.iter().map(|&z| eval_gn(degree, z).norm()).fold(0.0, f64::max);
    debug_assert!(roots.iter().all(|z| z.arg().abs() <= PI));
    Ok(ZeroSet {
        degree,
        roots,
        residual,
        coefficient_sum: coeffs.iter().sum(),
        polish_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_and_two() {
        let z1 = find_zeros(1).unwrap();
        assert_eq!(z1.roots, vec![Complex64::new(0.0, 0.0)]);

        let z2 = find_zeros(2).unwrap();
        assert_eq!(z2.roots.len(), 2);
        let mut re: Vec<f64> = z2.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert_eq!(re[1], 0.0);
        assert!(z2.roots.iter().all(|z| z.im.abs() < 1e-14));
    }

    #[test]
    fn degree_bounds() {
        assert!(find_zeros(0).is_err());
        assert!(find_zeros(MAX_ZERO_DEGREE + 1).is_err());
    }

    #[test]
    fn roots_sorted_by_argument() {
        let zs = find_zeros(20).unwrap();
        assert_eq!(zs.roots.len(), 20);
        let args: Vec<f64> = zs
            .roots
            .iter()
            .map(|z| if z.norm() == 0.0 { 0.0 } else { z.arg() })
            .collect();
        assert!(args.windows(2).all(|w| w[0] <= w[1]));
        assert!(zs.relative_residual() <= 1e-8);
    }

    #[test]
    fn conjugate_pairs() {
        // real coefficients: the root set is closed under conjugation
        let zs = find_zeros(33).unwrap();
        for z in &zs.roots {
            let partner = zs
                .roots
                .iter()
                .map(|w| (w - z.conj()).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(partner < 1e-10);
        }
    }

    #[test]
    fn balancing_keeps_spectrum() {
        let mut m = DMatrix::from_row_slice(3, 3, &[1.0, 1e4, 0.0, 1e-4, 2.0, 1e3, 0.0, 1e-3, 3.0]);
        let before: f64 = m.trace();
        balance(&mut m);
        assert!((m.trace() - before).abs() < 1e-12);
    }
}
