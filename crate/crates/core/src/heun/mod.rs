//! Confluent-Heun reduction of the radial equation at `B = 0` and its
//! polynomial (quasi-exact) sector.
//!
//! With `ζ = 1/(1 + r²)` and `χ(r) = r^λ (1 + r²)^{−l} e^{aζ} S(ζ)` the radial
//! equation becomes
//!
//! ```text
//! (ζ − ζ²) S'' + (b₀ + b₁ζ + b₂ζ²) S' + (c₀ + c₁ζ) S = 0
//! ```
//!
//! where `l` solves `l² − (λ + 2)l + (λ + 2) = 0`. A degree-`n` polynomial `S`
//! forces `l = −n`, which fixes `λ = λₙ = −(n² + 2n + 2)/(n + 1)`; the roots of `S`
//! obey the Bethe equations handled in [`bethe`], and the energy follows from
//! `ξ = a(2Σζᵢ + λₙ + 1)`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::{poly, Error, PhysicalParams, Result};

mod bethe;
mod recurrence;

pub use bethe::{bethe_residual, bethe_roots, bethe_roots_with_options, BetheOptions};
pub use recurrence::{coefficient_recurrence_solutions, RecurrenceSolution};

/// Coefficients of `Σaⱼζʲ S'' + Σbⱼζʲ S' + Σcⱼζʲ S = 0`.
///
/// `c[0]` holds only the `ξ`-independent part `κ`; the full constant term is
/// `ξ + κ` (see [`HeunCoefficients::c0`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunCoefficients {
    pub a: [f64; 5],
    pub b: [f64; 4],
    pub c: [f64; 3],
}

impl HeunCoefficients {
    pub fn c0(&self, xi: f64) -> f64 {
        self.c[0] + xi
    }

    /// Copy with `ξ` folded into `c[0]`.
    pub fn with_xi(&self, xi: f64) -> Self {
        let mut out = *self;
        out.c[0] += xi;
        out
    }

    /// `c₂ + n(n−1)a₄ + n·b₃`, which must vanish for a degree-`n` polynomial solution.
    pub fn con1_defect(&self, n: u32) -> f64 {
        let n = n as f64;
        self.c[2] + n * (n - 1.0) * self.a[4] + n * self.b[3]
    }

    /// `c₁ + n(n−1)a₃ + n·b₂`.
    pub fn con2_defect(&self, n: u32) -> f64 {
        let n = n as f64;
        self.c[1] + n * (n - 1.0) * self.a[3] + n * self.b[2]
    }
}

/// Quantum numbers attached to one polynomial solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralIndices {
    pub n: u32,
    pub lambda_n: f64,
    /// Exponent of `(1 + r²)^{−l}`; always `−n`.
    pub l: f64,
    /// Position of this solution among the `n + 1` solutions of level `n`, by ascending energy.
    pub branch: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetheSolution {
    pub indices: SpectralIndices,
    pub roots: Vec<Complex64>,
    pub energy: f64,
    /// `ξ = E/(2ħ²) + a²/4 − 1`.
    pub xi: f64,
    pub residual: f64,
}

/// `λₙ` as a reduced fraction `(numerator, denominator)`.
pub fn lambda_n_exact(n: u32) -> (i64, i64) {
    let n = n as i64;
    // (n+1)² + 1 is coprime to n + 1, so the fraction is already reduced
    (-(n * n + 2 * n + 2), n + 1)
}

/// `λₙ = −(n² + 2n + 2)/(n + 1)`, rounded once from the exact ratio.
pub fn lambda_n(n: u32) -> f64 {
    let (num, den) = lambda_n_exact(n);
    num as f64 / den as f64
}

/// The two solutions `(λ + 2)/2 ± ½√(λ² − 4)` of `l² − (λ + 2)l + (λ + 2) = 0`, `+` branch first.
pub fn l_branches(lambda: f64) -> Result<(f64, f64)> {
    let disc = lambda * lambda - 4.0;
    if !(disc >= 0.0) {
        return Err(Error::ComplexBranch { lambda });
    }
    let mid = 0.5 * (lambda + 2.0);
    let half = 0.5 * disc.sqrt();
    Ok((mid + half, mid - half))
}

fn coefficients(lambda: f64, l: f64, a: f64) -> HeunCoefficients {
    HeunCoefficients {
        a: [0.0, 1.0, -1.0, 0.0, 0.0],
        b: [2.0 * l - lambda - 1.0, 2.0 * (a - l), -2.0 * a, 0.0],
        c: [-a * (lambda + 1.0) - l * (l - 1.0) + 2.0 * l * a, -2.0 * l * a, 0.0],
    }
}

/// Coefficients for arbitrary `(λ, l)`; only meaningful when `l` is one of [`l_branches`]`(λ)`.
pub fn heun_coefficients_for(lambda: f64, l: f64, params: &PhysicalParams) -> Result<HeunCoefficients> {
    Ok(coefficients(lambda, l, params.a()?))
}

/// Coefficients of level `n`: `λ = λₙ`, `l = −n`.
pub fn heun_coefficients(n: u32, params: &PhysicalParams) -> Result<HeunCoefficients> {
    heun_coefficients_for(lambda_n(n), -(n as f64), params)
}

/// Recovers `λₙ` from the polynomial-degree constraints alone.
///
/// `c₁ + n·b₂ = 0` is linear in `l` (`−2la − 2na = 0`), so `l = −n`; substituting
/// into `l² − (λ + 2)l + (λ + 2) = 0` gives `λ = (l² − 2l + 2)/(l − 1)`.
pub fn derive_lambda_from_constraints(n: u32) -> f64 {
    // any a > 0 works; the constraint is homogeneous in a
    let a = 1.0;
    let at = |l: f64| coefficients(0.0, l, a).con2_defect(n);
    let (f0, f1) = (at(0.0), at(1.0));
    let l = -f0 / (f1 - f0);
    (l * l - 2.0 * l + 2.0) / (l - 1.0)
}

/// `ξ = a(2Σζᵢ + λₙ + 1)`.
pub fn xi_from_roots(n: u32, roots: &[Complex64], a: f64) -> f64 {
    let sum: f64 = roots.iter().map(|z| z.re).sum();
    a * (2.0 * sum + lambda_n(n) + 1.0)
}

/// `E = 2ħ²(ξ − a²/4 + 1)`.
pub fn energy_from_xi(xi: f64, params: &PhysicalParams) -> Result<f64> {
    let a = params.a()?;
    let h2 = params.hbar() * params.hbar();
    Ok(2.0 * h2 * (xi - 0.25 * a * a + 1.0))
}

/// `Eₙ = −A/4 + 2ħ² + ħ√(2A)(2Σζᵢ + λₙ + 1)`.
pub fn energy(n: u32, roots: &[Complex64], params: &PhysicalParams) -> Result<f64> {
    let an = params.anisotropy();
    if !(an > 0.0) {
        return Err(Error::NonPositiveAnisotropy(an));
    }
    let h = params.hbar();
    let sum: f64 = roots.iter().map(|z| z.re).sum();
    Ok(-0.25 * an + 2.0 * h * h + h * (2.0 * an).sqrt() * (2.0 * sum + lambda_n(n) + 1.0))
}

/// Energy through the constant-term constraint of the Bethe ansatz:
/// `c₀ = −n(n−1)a₂ − n·b₁ − (2(n−1)a₃ + b₂)Σζᵢ`, then `ξ = c₀ − κ`.
pub fn energy_from_constraints(n: u32, roots: &[Complex64], params: &PhysicalParams) -> Result<f64> {
    let hc = heun_coefficients(n, params)?;
    let nf = n as f64;
    let sum: f64 = roots.iter().map(|z| z.re).sum();
    let c0 = -nf * (nf - 1.0) * hc.a[2] - nf * hc.b[1] - (2.0 * (nf - 1.0) * hc.a[3] + hc.b[2]) * sum;
    energy_from_xi(c0 - hc.c[0], params)
}

/// `S(ζ)`, `S'(ζ)`, `S''(ζ)` for `S = Π(ζ − ζᵢ)`.
pub(crate) fn product_with_derivatives(roots: &[Complex64], zeta: f64) -> [Complex64; 3] {
    let c = poly::from_roots(roots);
    let x = Complex64::new(zeta, 0.0);
    let mut s = [Complex64::new(0.0, 0.0); 3];
    for &ck in c.iter().rev() {
        s[2] = s[2] * x + s[1] * 2.0;
        s[1] = s[1] * x + s[0];
        s[0] = s[0] * x + ck;
    }
    s
}

/// Radial factor `rᵏ(1 + r²)ⁿ exp[a/(1 + r²)] Π(1/(1 + r²) − ζᵢ)` with `k = λₙ`.
pub fn radial_factor(sol: &BetheSolution, r: f64, params: &PhysicalParams) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius(r));
    }
    let a = params.a()?;
    let n = sol.indices.n;
    let zeta = 1.0 / (1.0 + r * r);
    let s = sol.roots.iter().fold(Complex64::new(1.0, 0.0), |acc, z| acc * (zeta - z));
    let f = r.powf(sol.indices.lambda_n) * (1.0 + r * r).powi(n as i32) * (a * zeta).exp();
    Ok(s * f)
}

/// `ψₙ(r, φ) = e^{iλₙφ} × radial_factor`.
pub fn eigenfunction_eval(sol: &BetheSolution, r: f64, phi: f64, params: &PhysicalParams) -> Result<Complex64> {
    let radial = radial_factor(sol, r, params)?;
    Ok(Complex64::from_polar(1.0, sol.indices.lambda_n * phi) * radial)
}
