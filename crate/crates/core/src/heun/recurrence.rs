//! Independent route to the polynomial solutions: expand `S = Σ sₖζᵏ` (monic,
//! degree `n`) and collect powers of `ζ` in the Heun operator.
//!
//! With `l = −n` the operator maps `ζᵏ` to
//!
//! ```text
//! [k(k−1) + b₀k] ζᵏ⁻¹ + [−k(k−1) + b₁k + κ + ξ] ζᵏ + 2a(n−k) ζᵏ⁺¹,
//! ```
//!
//! so the `ζᵐ` equations form a three-term recurrence. Running it downward from
//! `sₙ = 1` expresses every `sₖ` as a polynomial in `ξ`; the `ζ⁰` equation is a
//! degree-`n + 1` polynomial whose roots are the admissible `ξ`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{energy_from_xi, heun_coefficients};
use crate::{poly, PhysicalParams, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceSolution {
    pub xi: f64,
    pub energy: f64,
    /// `s₀..sₙ` in ascending order, `sₙ = 1`.
    pub coefficients: Vec<f64>,
    pub roots: Vec<Complex64>,
}

/// `p·(c + x)` for a polynomial `p` in `x`.
fn mul_shift(p: &[f64], c: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 1];
    for (k, &pk) in p.iter().enumerate() {
        out[k] += c * pk;
        out[k + 1] += pk;
    }
    out
}

fn axpy(acc: &mut Vec<f64>, s: f64, p: &[f64]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0.0);
    }
    for (k, &pk) in p.iter().enumerate() {
        acc[k] += s * pk;
    }
}

/// Recurrence rows for level `n`: `(up, diag, low)` where the `ζᵐ` equation reads
/// `up[m+1]·s_{m+1} + (diag[m] + ξ)·s_m + low[m−1]·s_{m−1} = 0`.
fn rows(n: u32, params: &PhysicalParams) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let hc = heun_coefficients(n, params)?;
    let a = params.a()?;
    let (b0, b1, kappa) = (hc.b[0], hc.b[1], hc.c[0]);
    let n = n as usize;
    let up = (0..=n + 1).map(|k| (k * k.saturating_sub(1)) as f64 + b0 * k as f64).collect();
    let diag = (0..=n).map(|k| -((k * k.saturating_sub(1)) as f64) + b1 * k as f64 + kappa).collect();
    let low = (0..=n).map(|k| 2.0 * a * (n as f64 - k as f64)).collect();
    Ok((up, diag, low))
}

/// The `sₖ(ξ)` polynomials and the characteristic polynomial `f(ξ)`.
fn xi_polynomials(n: u32, params: &PhysicalParams) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let (up, diag, low) = rows(n, params)?;
    let n = n as usize;
    let mut s: Vec<Vec<f64>> = vec![Vec::new(); n + 2];
    s[n] = vec![1.0];
    s[n + 1] = vec![0.0];
    for m in (1..=n).rev() {
        let mut acc = mul_shift(&s[m], diag[m]);
        axpy(&mut acc, up[m + 1], &s[m + 1]);
        let inv = -1.0 / low[m - 1];
        acc.iter_mut().for_each(|x| *x *= inv);
        s[m - 1] = acc;
    }
    let mut f = mul_shift(&s[0], diag[0]);
    axpy(&mut f, up[1], &s[1]);
    s.truncate(n + 1);
    Ok((s, f))
}

fn polish_real(f: &[f64], mut x: f64) -> f64 {
    let df: Vec<f64> = f.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
    let mut fx = poly::eval_real(f, x).abs();
    for _ in 0..8 {
        let y = x - poly::eval_real(f, x) / poly::eval_real(&df, x);
        let fy = poly::eval_real(f, y).abs();
        if !(fy < fx) {
            break;
        }
        x = y;
        fx = fy;
    }
    x
}

/// Every real `ξ` admitting a degree-`n` polynomial solution, with its
/// coefficients and roots, sorted by `ξ` (equivalently by energy).
pub fn coefficient_recurrence_solutions(n: u32, params: &PhysicalParams) -> Result<Vec<RecurrenceSolution>> {
    let (s, f) = xi_polynomials(n, params)?;
    let mut xis: Vec<f64> = poly::roots(&poly::to_complex(&f))
        .into_iter()
        .filter(|z| z.im.abs() <= 1e-8 * z.re.abs().max(1.0))
        .map(|z| polish_real(&f, z.re))
        .collect();
    xis.sort_by(f64::total_cmp);

    let mut out = Vec::with_capacity(xis.len());
    for xi in xis {
        let coefficients: Vec<f64> = s.iter().map(|p| poly::eval_real(p, xi)).collect();
        let mut roots = poly::roots(&poly::to_complex(&coefficients));
        roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        out.push(RecurrenceSolution { xi, energy: energy_from_xi(xi, params)?, coefficients, roots });
    }
    Ok(out)
}
