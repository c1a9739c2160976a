//! Newton solver for the Bethe equations of level `n`,
//!
//! ```text
//! Σ_{j≠i} 2/(ζᵢ − ζⱼ) = [2aζᵢ² − 2(n + a)ζᵢ + 2n + λₙ + 1] / [ζᵢ(1 − ζᵢ)].
//! ```
//!
//! Level `n` has `n + 1` solutions. They are found by induction on `n`: every
//! solution of level `n − 1` is extended by one extra root, or one of its real
//! roots is split into a conjugate pair, and the extended set is refined by
//! damped Newton on the cleared-denominator system. A jittered retry schedule
//! covers the cases the structured seeds miss.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{energy, lambda_n, xi_from_roots, BetheSolution, SpectralIndices};
use crate::linalg::complex_solve;
use crate::{Error, PhysicalParams, Result};

/// Tuning knobs for [`bethe_roots_with_options`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetheOptions {
    /// Jittered retry rounds per level after the structured seeds.
    pub retry_rounds: usize,
    /// Newton iterations per start.
    pub max_iterations: usize,
    /// Accepted Bethe residual.
    pub tolerance: f64,
    /// Minimum pairwise root separation.
    pub min_separation: f64,
    /// RNG seed for the retry schedule.
    pub seed: u64,
}

impl Default for BetheOptions {
    fn default() -> Self {
        Self { retry_rounds: 32, max_iterations: 100, tolerance: 1e-10, min_separation: 1e-10, seed: 0x5eed }
    }
}

fn rhs_poly(n: u32, a: f64, z: Complex64) -> Complex64 {
    let nf = n as f64;
    z * z * (2.0 * a) - z * (2.0 * (nf + a)) + (2.0 * nf + lambda_n(n) + 1.0)
}

/// `max_i |LHS_i − RHS_i| / max(1, |RHS_i|)` for the equations as written above.
pub fn bethe_residual(n: u32, roots: &[Complex64], a: f64) -> f64 {
    let mut worst = 0.0f64;
    for (i, &zi) in roots.iter().enumerate() {
        let lhs: Complex64 = roots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &zj)| Complex64::new(2.0, 0.0) / (zi - zj))
            .sum();
        let rhs = rhs_poly(n, a, zi) / (zi * (Complex64::new(1.0, 0.0) - zi));
        let r = (lhs - rhs).norm() / rhs.norm().max(1.0);
        worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
    }
    worst
}

/// `Fᵢ = ζᵢ(1 − ζᵢ)Σ_{j≠i} 2/(ζᵢ − ζⱼ) − P(ζᵢ)` and its Jacobian (row-major).
fn system(n: u32, a: f64, z: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let m = z.len();
    let one = Complex64::new(1.0, 0.0);
    let mut f = vec![Complex64::new(0.0, 0.0); m];
    let mut jac = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        let w = z[i] * (one - z[i]);
        let dw = one - z[i] * 2.0;
        let mut s1 = Complex64::new(0.0, 0.0);
        let mut s2 = Complex64::new(0.0, 0.0);
        for j in 0..m {
            if j == i {
                continue;
            }
            let d = (z[i] - z[j]).inv();
            s1 += d * 2.0;
            s2 += d * d * 2.0;
            jac[i * m + j] = w * d * d * 2.0;
        }
        let dp = z[i] * (4.0 * a) - 2.0 * (n as f64 + a);
        f[i] = w * s1 - rhs_poly(n, a, z[i]);
        jac[i * m + i] = dw * s1 - w * s2 - dp;
    }
    (f, jac)
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Damped Newton from `seed`; returns the refined roots when they converge.
fn newton(n: u32, a: f64, seed: &[Complex64], opts: &BetheOptions) -> Option<Vec<Complex64>> {
    let mut z = seed.to_vec();
    let (mut f, mut jac) = system(n, a, &z);
    let mut fnorm = norm(&f);
    for _ in 0..opts.max_iterations {
        if !fnorm.is_finite() {
            return None;
        }
        let step = complex_solve(jac.clone(), f.clone())?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<Complex64> = z.iter().zip(&step).map(|(zi, si)| zi - si * t).collect();
            let (ft, jt) = system(n, a, &trial);
            let nt = norm(&ft);
            if nt.is_finite() && nt < fnorm * (1.0 - 1e-4 * t) {
                z = trial;
                f = ft;
                jac = jt;
                fnorm = nt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        let step_size = norm(&step) * t;
        if !accepted || step_size < 1e-15 * norm(&z).max(1.0) {
            break;
        }
    }
    if bethe_residual(n, &z, a) < 1e-13 {
        return Some(z);
    }
    // a final undamped step often settles the last digits
    let step = complex_solve(jac, f)?;
    let z2: Vec<Complex64> = z.iter().zip(&step).map(|(zi, si)| zi - si).collect();
    let best = if bethe_residual(n, &z2, a) < bethe_residual(n, &z, a) { z2 } else { z };
    Some(best)
}

fn min_separation(z: &[Complex64]) -> f64 {
    let mut sep = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            sep = sep.min((z[i] - z[j]).norm());
        }
    }
    sep
}

/// Real roots are snapped onto the real axis and the set ordered by (re, im).
fn canonical(mut z: Vec<Complex64>) -> Vec<Complex64> {
    for zi in z.iter_mut() {
        if zi.im.abs() < 1e-14 * zi.re.abs().max(1.0) {
            zi.im = 0.0;
        }
    }
    z.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    z
}

struct Level {
    n: u32,
    a: f64,
    solutions: Vec<Vec<Complex64>>,
    best_residual: f64,
    collision: Option<f64>,
}

impl Level {
    fn new(n: u32, a: f64) -> Self {
        Self { n, a, solutions: Vec::new(), best_residual: f64::INFINITY, collision: None }
    }

    fn complete(&self) -> bool {
        self.solutions.len() > self.n as usize
    }

    fn sum(z: &[Complex64]) -> Complex64 {
        z.iter().sum()
    }

    fn offer(&mut self, seed: &[Complex64], opts: &BetheOptions) {
        if self.complete() || seed.len() != self.n as usize {
            return;
        }
        let Some(z) = newton(self.n, self.a, seed, opts) else { return };
        let res = bethe_residual(self.n, &z, self.a);
        if !(res < opts.tolerance) {
            if res.is_finite() {
                self.best_residual = self.best_residual.min(res);
            }
            return;
        }
        let sep = min_separation(&z);
        if sep < opts.min_separation {
            self.collision = Some(sep);
            return;
        }
        let s = Self::sum(&z);
        if self.solutions.iter().any(|w| (Self::sum(w) - s).norm() < 1e-6) {
            return;
        }
        self.best_residual = self.best_residual.min(res);
        self.solutions.push(canonical(z));
    }
}

fn structured_seeds(prev: &[Vec<Complex64>], a: f64) -> Vec<Vec<Complex64>> {
    let mut out = Vec::new();
    for z in prev {
        let inner = z.iter().filter(|w| w.re < 1.0).map(|w| w.re).fold(f64::NAN, f64::max);
        let outer = z.iter().filter(|w| w.re >= 1.0).map(|w| w.re).fold(f64::NAN, f64::max);
        let ri = if inner.is_nan() { 0.3 } else { inner };
        let ro = if outer.is_nan() { 1.0 + 1.0 / a } else { outer };
        for d in [0.1, 0.25, -0.1, 0.5] {
            for extra in [ri + d, ro + 3.0 * d] {
                let mut s = z.clone();
                s.push(Complex64::new(extra, 0.0));
                out.push(s);
            }
        }
        // split the largest real root of each cluster into a conjugate pair
        for (cluster_inner, width) in [(true, 0.15), (false, 0.5)] {
            let pick = z
                .iter()
                .enumerate()
                .filter(|(_, w)| w.im == 0.0 && (w.re < 1.0) == cluster_inner)
                .max_by(|x, y| x.1.re.total_cmp(&y.1.re))
                .map(|(i, _)| i);
            let Some(k) = pick else { continue };
            for f in [0.5, 1.0, 2.0] {
                let mut s = z.clone();
                let x = s[k].re;
                s[k] = Complex64::new(x, width * f);
                s.push(Complex64::new(x, -width * f));
                out.push(s);
            }
        }
    }
    out
}

fn solve_level(
    n: u32,
    a: f64,
    prev: &[Vec<Complex64>],
    extra: Option<&[Vec<Complex64>]>,
    opts: &BetheOptions,
) -> Level {
    let mut level = Level::new(n, a);
    if let Some(seeds) = extra {
        for s in seeds {
            level.offer(s, opts);
        }
    }
    for s in structured_seeds(prev, a) {
        level.offer(&s, opts);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ ((n as u64) << 32) ^ a.to_bits());
    let span = 2.0 + 2.0 / a;
    for round in 0..opts.retry_rounds {
        if level.complete() {
            break;
        }
        let scale = 0.05 * (1.0 + round as f64 / 8.0);
        for z in prev {
            let mut s: Vec<Complex64> = z
                .iter()
                .map(|w| w + Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)))
                .collect();
            s.push(Complex64::new(rng.gen_range(-0.5..span), rng.gen_range(-0.5..0.5)));
            level.offer(&s, opts);
        }
        if prev.is_empty() {
            let s: Vec<Complex64> =
                (0..n).map(|_| Complex64::new(rng.gen_range(-0.5..span), rng.gen_range(-0.5..0.5))).collect();
            level.offer(&s, opts);
        }
    }
    level
}

/// All `n + 1` root sets of level `n`, sorted by energy, with default options.
///
/// `seeds`, when given, are tried before the built-in seeding.
pub fn bethe_roots(n: u32, params: &PhysicalParams, seeds: Option<&[Vec<Complex64>]>) -> Result<Vec<BetheSolution>> {
    bethe_roots_with_options(n, params, seeds, &BetheOptions::default())
}

pub fn bethe_roots_with_options(
    n: u32,
    params: &PhysicalParams,
    seeds: Option<&[Vec<Complex64>]>,
    opts: &BetheOptions,
) -> Result<Vec<BetheSolution>> {
    let a = params.a()?;
    let mut prev: Vec<Vec<Complex64>> = vec![Vec::new()];
    for k in 1..=n {
        let extra = if k == n { seeds } else { None };
        let level = solve_level(k, a, &prev, extra, opts);
        if k == n && !level.complete() {
            if let Some(separation) = level.collision {
                return Err(Error::RootCollision { separation });
            }
            return Err(Error::NonConvergence {
                found: level.solutions.len(),
                expected: n as usize + 1,
                best_residual: level.best_residual,
            });
        }
        prev = level.solutions;
    }

    let lam = lambda_n(n);
    let mut out = Vec::with_capacity(prev.len());
    for roots in prev {
        let residual = bethe_residual(n, &roots, a);
        out.push(BetheSolution {
            indices: SpectralIndices { n, lambda_n: lam, l: -(n as f64), branch: 0 },
            energy: energy(n, &roots, params)?,
            xi: xi_from_roots(n, &roots, a),
            residual,
            roots,
        });
    }
    out.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    for (i, s) in out.iter_mut().enumerate() {
        s.indices.branch = i;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params_with_a(a: f64) -> PhysicalParams {
        PhysicalParams::natural(2.0 * a * a, 0.0).unwrap()
    }

    #[test]
    fn level_zero_is_empty() {
        let sols = bethe_roots(0, &PhysicalParams::default(), None).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sols[0].roots.is_empty());
        assert!((sols[0].energy + 0.5).abs() < 1e-15);
    }

    #[test]
    fn level_one_closed_form() {
        let sols = bethe_roots(1, &PhysicalParams::default(), None).unwrap();
        let s3 = 3.0f64.sqrt();
        assert!((sols[0].roots[0].re - (2.0 - s3) / 2.0).abs() < 1e-12);
        assert!((sols[1].roots[0].re - (2.0 + s3) / 2.0).abs() < 1e-12);
        assert!((sols[0].energy - (2.5 - 2.0 * s3)).abs() < 1e-12);
    }

    #[test]
    fn every_solution_found_up_to_six() {
        for a in [0.5, 1.0, 2.0] {
            for n in 0..=6 {
                let sols = bethe_roots(n, &params_with_a(a), None).unwrap();
                assert_eq!(sols.len(), n as usize + 1, "a = {a}, n = {n}");
                for s in &sols {
                    assert!(s.residual < 1e-10);
                }
            }
        }
    }

    #[test]
    fn caller_seeds_are_used() {
        let p = PhysicalParams::default();
        let s3 = 3.0f64.sqrt();
        let seeds = vec![vec![Complex64::new(0.13, 0.0)], vec![Complex64::new(1.87, 0.0)]];
        let opts = BetheOptions { retry_rounds: 0, ..Default::default() };
        let sols = bethe_roots_with_options(1, &p, Some(&seeds), &opts).unwrap();
        assert!((sols[0].roots[0].re - (2.0 - s3) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn residual_flags_wrong_roots() {
        assert!(bethe_residual(1, &[Complex64::new(0.5, 0.0)], 1.0) > 1e-2);
    }
}
