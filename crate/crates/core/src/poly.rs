//! Univariate polynomials with coefficients in ascending order (`c[k]` multiplies `x^k`).

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

/// Horner evaluation of `p(x)` and `p'(x)`.
pub fn eval_with_derivative(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + ck;
    }
    (p, dp)
}

pub fn eval(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * x + ck)
}

pub fn eval_real(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck)
}

/// Lifts real coefficients to complex.
pub fn to_complex(c: &[f64]) -> Vec<Complex64> {
    c.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

fn trimmed(c: &[Complex64]) -> &[Complex64] {
    let mut n = c.len();
    while n > 0 && c[n - 1] == Complex64::new(0.0, 0.0) {
        n -= 1;
    }
    &c[..n]
}

/// All complex roots by Aberth–Ehrlich iteration followed by Newton polishing.
///
/// Trailing zero coefficients are ignored; constants give an empty root list.
pub fn roots(c: &[Complex64]) -> Vec<Complex64> {
    let c = trimmed(c);
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    // Fujiwara bound on root magnitudes
    let bound = (0..deg)
        .map(|k| 2.0 * (c[k] / lead).norm().powf(1.0 / (deg - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let t = 2.0 * core::f64::consts::PI * (k as f64 + 0.25) / deg as f64 + 0.4;
            Complex64::from_polar(0.5 * bound, t)
        })
        .collect();

    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let (p, dp) = eval_with_derivative(c, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != i {
                    sum += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        *zi = polish(c, *zi);
    }
    z
}

/// A few Newton steps, keeping the iterate only while `|p|` decreases.
pub fn polish(c: &[Complex64], mut x: Complex64) -> Complex64 {
    let mut px = eval(c, x).norm();
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(c, x);
        let y = x - p / dp;
        if !y.is_finite() {
            break;
        }
        let py = eval(c, y).norm();
        if py >= px {
            break;
        }
        x = y;
        px = py;
    }
    x
}

/// Coefficients of `Π (x − r_i)`.
pub fn from_roots(r: &[Complex64]) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(r.len() + 1);
    c.push(Complex64::new(1.0, 0.0));
    for &ri in r {
        c.push(Complex64::new(0.0, 0.0));
        for k in (1..c.len()).rev() {
            c[k] = c[k - 1] - ri * c[k];
        }
        c[0] = -ri * c[0];
    }
    c
}
