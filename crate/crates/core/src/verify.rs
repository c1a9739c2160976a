//! Independent checks: ODE residuals of the closed forms, finite-difference
//! eigen-oracles for the Mathieu spectra, and the sigma-model equivalence harness.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::heun::{self, BetheSolution};
use crate::linalg::tridiag_lowest;
use crate::mathieu::MathieuSolution;
use crate::stereo::{self, ComplexFieldPoint};
use crate::{Error, PhysicalParams, Result};

/// Default tolerance for residual reports.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Smallest node count accepted by the finite-difference oracles.
pub const MIN_FD_NODES: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub grid: Vec<f64>,
    /// Pointwise `|LHS|` of the target equation.
    pub residuals: Vec<f64>,
    pub max_rel: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ResidualReport {
    fn new(grid: Vec<f64>, residuals: Vec<f64>, max_rel: f64, tolerance: f64) -> Self {
        Self { grid, residuals, max_rel, tolerance, passed: max_rel < tolerance }
    }
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return alloc::vec![lo];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..count).map(|i| (l0 + (l1 - l0) * i as f64 / (count - 1) as f64).exp()).collect()
}

/// The default radial grid: 101 log-spaced nodes on `[0.1, 10]`.
pub fn default_radial_grid() -> Vec<f64> {
    log_grid(0.1, 10.0, 101)
}

/// `count` equispaced points on `[0, 2π)`.
pub fn periodic_grid(count: usize) -> Vec<f64> {
    (0..count).map(|i| 2.0 * PI * i as f64 / count as f64).collect()
}

/// Individual terms of the radial equation at `r`, divided by the smooth
/// prefactor `r^λ(1 + r²)ⁿe^{aζ}`, plus that prefactor.
fn radial_terms(sol: &BetheSolution, energy: f64, params: &PhysicalParams, r: f64) -> Result<([Complex64; 8], f64)> {
    let a = params.a()?;
    let h2 = params.hbar() * params.hbar();
    let big_a = params.anisotropy();
    let lam = sol.indices.lambda_n;
    let n = sol.indices.n as f64;

    let w = 1.0 + r * r;
    let zeta = 1.0 / w;
    let dz = -2.0 * r * zeta * zeta;
    let ddz = -2.0 * zeta * zeta + 8.0 * r * r * zeta * zeta * zeta;
    let g1 = lam / r + 2.0 * n * r / w + a * dz;
    let g2 = -lam / (r * r) + 2.0 * n * (1.0 - r * r) / (w * w) + a * ddz;

    let [s, s1, s2] = heun::product_with_derivatives(&sol.roots, zeta);
    let sr = s1 * dz;
    let srr = s2 * dz * dz + s1 * ddz;
    let chi = s;
    let chi1 = s * g1 + sr;
    let chi2 = s * (g2 + g1 * g1) + sr * (2.0 * g1) + srr;

    let c5 = 2.0 * energy / h2 + big_a / (2.0 * h2) - 4.0;
    let c67 = 2.0 * big_a / h2;
    let terms = [
        chi2,
        chi1 * (4.0 * r / w),
        chi1 / r,
        chi * (-lam * lam / (r * r)),
        chi * (8.0 / w),
        chi * (c5 / (w * w)),
        chi * (-c67 / (w * w * w)),
        chi * (c67 / (w * w * w * w)),
    ];
    let prefactor = r.powf(lam) * w.powf(n) * (a * zeta).exp();
    Ok((terms, prefactor))
}

/// Residual of the radial equation for the eigenfunction of `sol` at its own energy.
pub fn radial_residual(sol: &BetheSolution, params: &PhysicalParams, r_grid: &[f64]) -> Result<ResidualReport> {
    radial_residual_with_energy(sol, sol.energy, params, r_grid)
}

/// As [`radial_residual`] but with the energy supplied separately (negative controls).
///
/// Each node's residual is normalised by the largest individual term at that node.
pub fn radial_residual_with_energy(
    sol: &BetheSolution,
    energy: f64,
    params: &PhysicalParams,
    r_grid: &[f64],
) -> Result<ResidualReport> {
    let mut residuals = Vec::with_capacity(r_grid.len());
    let mut max_rel = 0.0f64;
    for &r in r_grid {
        if !(r > 0.0) {
            return Err(Error::NonPositiveRadius(r));
        }
        let (terms, prefactor) = radial_terms(sol, energy, params, r)?;
        let sum: Complex64 = terms.iter().sum();
        let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        let rel = if scale > 0.0 { sum.norm() / scale } else { 0.0 };
        max_rel = max_rel.max(rel);
        residuals.push(sum.norm() * prefactor);
    }
    Ok(ResidualReport::new(r_grid.to_vec(), residuals, max_rel, RESIDUAL_TOL))
}

/// Residual of `w'' + (a − 2q cos 2x)w` for a Mathieu solution.
pub fn mathieu_residual(sol: &MathieuSolution, x_grid: &[f64]) -> ResidualReport {
    mathieu_residual_with_a(sol, sol.a, x_grid)
}

/// As [`mathieu_residual`] with the characteristic value overridden.
///
/// The equation has no first-derivative term, so every term vanishes at a node
/// of `w`; the residual is normalised by the largest term over the whole grid.
pub fn mathieu_residual_with_a(sol: &MathieuSolution, a: f64, x_grid: &[f64]) -> ResidualReport {
    let mut residuals = Vec::with_capacity(x_grid.len());
    let mut scale = 0.0f64;
    for &x in x_grid {
        let w = sol.eval(x);
        let t = [sol.d2(x), a * w, -2.0 * sol.q * (2.0 * x).cos() * w];
        scale = t.iter().fold(scale, |m, v| m.max(v.abs()));
        residuals.push((t[0] + t[1] + t[2]).abs());
    }
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    let max_rel = if scale > 0.0 { worst / scale } else { 0.0 };
    ResidualReport::new(x_grid.to_vec(), residuals, max_rel, RESIDUAL_TOL)
}

/// Eigenvalues of `−w'' + V(x)w` on a periodic grid, split by reflection parity.
///
/// `V` must be even. Returns the lowest `count` eigenvalues of the even
/// (`u_j = u_{N−j}`) and odd (`u_j = −u_{N−j}`) subspaces.
fn fd_parity_eigs(potential: impl Fn(f64) -> f64, nodes: usize, count: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if nodes < MIN_FD_NODES || !nodes.is_multiple_of(2) {
        return Err(Error::InvalidArgument("finite-difference oracle needs an even node count >= 256"));
    }
    let h = 2.0 * PI / nodes as f64;
    let ih2 = 1.0 / (h * h);
    let half = nodes / 2;
    let v: Vec<f64> = (0..=half).map(|j| potential(j as f64 * h)).collect();

    let d_even: Vec<f64> = v.iter().map(|vj| 2.0 * ih2 + vj).collect();
    let mut e_even = alloc::vec![-ih2; half];
    e_even[0] = -core::f64::consts::SQRT_2 * ih2;
    e_even[half - 1] = -core::f64::consts::SQRT_2 * ih2;

    let d_odd: Vec<f64> = v[1..half].iter().map(|vj| 2.0 * ih2 + vj).collect();
    let e_odd = alloc::vec![-ih2; half - 2];

    Ok((tridiag_lowest(&d_even, &e_even, count), tridiag_lowest(&d_odd, &e_odd, count)))
}

fn merge_lowest(mut even: Vec<f64>, odd: Vec<f64>, count: usize) -> Vec<f64> {
    even.extend(odd);
    even.sort_by(f64::total_cmp);
    even.truncate(count);
    even
}

/// Lowest `count` eigenvalues of the second-order periodic discretisation of
/// `−w'' + 2q cos(2x)w = a·w` on `[0, 2π)`.
pub fn fd_eigs_periodic(q: f64, nodes: usize, count: usize) -> Result<Vec<f64>> {
    let (even, odd) = fd_parity_eigs(|x| 2.0 * q * (2.0 * x).cos(), nodes, count)?;
    Ok(merge_lowest(even, odd, count))
}

/// [`fd_eigs_periodic`] kept apart by parity: `(cosine-type, sine-type)`.
pub fn fd_eigs_periodic_by_parity(q: f64, nodes: usize, count: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    fd_parity_eigs(|x| 2.0 * q * (2.0 * x).cos(), nodes, count)
}

/// One Richardson step on top of the second-order stencil: `(4λ_N − λ_{N/2})/3`,
/// applied per parity class. Returns `(cosine-type, sine-type)`.
pub fn fd_richardson_by_parity(
    potential: impl Fn(f64) -> f64 + Copy,
    nodes: usize,
    count: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !nodes.is_multiple_of(4) || nodes / 2 < MIN_FD_NODES {
        return Err(Error::InvalidArgument("Richardson oracle needs nodes divisible by 4 and nodes/2 >= 256"));
    }
    let (fe, fo) = fd_parity_eigs(potential, nodes, count)?;
    let (ce, co) = fd_parity_eigs(potential, nodes / 2, count)?;
    let extrapolate = |f: Vec<f64>, c: Vec<f64>| f.iter().zip(&c).map(|(x, y)| (4.0 * x - y) / 3.0).collect();
    Ok((extrapolate(fe, ce), extrapolate(fo, co)))
}

/// Richardson-extrapolated Mathieu eigenvalues, merged and sorted.
pub fn fd_eigs_periodic_richardson(q: f64, nodes: usize, count: usize) -> Result<Vec<f64>> {
    let (even, odd) = fd_richardson_by_parity(|x| 2.0 * q * (2.0 * x).cos(), nodes, count)?;
    Ok(merge_lowest(even, odd, count))
}

/// Lowest `count` off-plane energies from the angular equation
/// `−ψ'' − (A/16ħ²)(1 + cos 2θ)ψ = (E/2ħ²)ψ`, Richardson-extrapolated.
pub fn offplane_fd_energies(params: &PhysicalParams, nodes: usize, count: usize) -> Result<Vec<f64>> {
    let h2 = params.hbar() * params.hbar();
    let c = params.anisotropy() / (16.0 * h2);
    let (even, odd) = fd_richardson_by_parity(move |t: f64| -c * (1.0 + (2.0 * t).cos()), nodes, count)?;
    Ok(merge_lowest(even, odd, count).into_iter().map(|mu| 2.0 * h2 * mu).collect())
}

/// Lowest `count` in-plane energies from `−ψ'' + (μB/2ħ²)cos 2φ ψ = (2E/ħ²)ψ`,
/// Richardson-extrapolated.
pub fn inplane_fd_energies(params: &PhysicalParams, nodes: usize, count: usize) -> Result<Vec<f64>> {
    let h2 = params.hbar() * params.hbar();
    let c = params.mu_b() / (2.0 * h2);
    let (even, odd) = fd_richardson_by_parity(move |t: f64| c * (2.0 * t).cos(), nodes, count)?;
    Ok(merge_lowest(even, odd, count).into_iter().map(|mu| 0.5 * h2 * mu).collect())
}

/// A random smooth path `(P(z), Q(z))`: short Fourier sums with `1/k²` amplitudes.
#[derive(Debug, Clone)]
struct FourierPath {
    p: [[f64; 2]; 5],
    q: [[f64; 2]; 5],
}

impl FourierPath {
    fn random(rng: &mut ChaCha8Rng) -> Self {
        let mut draw = || {
            let mut c = [[0.0; 2]; 5];
            for (k, ck) in c.iter_mut().enumerate() {
                let amp = 1.0 / ((k + 1) * (k + 1)) as f64;
                *ck = [rng.gen_range(-amp..amp), rng.gen_range(-amp..amp)];
            }
            c
        };
        let p = draw();
        let q = draw();
        Self { p, q }
    }

    fn component(c: &[[f64; 2]; 5], z: f64) -> (f64, f64) {
        // k = 0 entry is a constant offset; k ≥ 1 are harmonics
        let mut v = c[0][0];
        let mut dv = 0.0;
        for (k, ck) in c.iter().enumerate().skip(1) {
            let kf = k as f64;
            let (s, co) = (kf * z).sin_cos();
            v += ck[0] * co + ck[1] * s;
            dv += kf * (-ck[0] * s + ck[1] * co);
        }
        (v, dv)
    }

    fn at(&self, z: f64) -> (f64, f64, f64, f64) {
        let (p, pz) = Self::component(&self.p, z);
        let (q, qz) = Self::component(&self.q, z);
        (p, q, pz, qz)
    }
}

/// Largest `|½|S_z|² − 2|ω_z|²/(1 + |ω|²)²|` over `samples` random paths and
/// positions, with `S_z` from the analytic chain rule. Deterministic in `seed`.
pub fn nlsm_equivalence(samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let path = FourierPath::random(&mut rng);
        let z = rng.gen_range(0.0..2.0 * PI);
        let (p, q, pz, qz) = path.at(z);
        let s = stereo::unproject(ComplexFieldPoint::finite(p, q));
        let sz = stereo::unproject_derivative(p, q, pz, qz);
        let sphere = stereo::kinetic_density_sphere(s, sz)?;
        let complex = stereo::kinetic_density_complex(p, q, pz, qz);
        worst = worst.max((sphere - complex).abs());
    }
    Ok(worst)
}

/// As [`nlsm_equivalence`] but with `S_z` from central differences of step `h`.
pub fn nlsm_equivalence_fd(samples: usize, seed: u64, h: f64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive"));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("step must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let path = FourierPath::random(&mut rng);
        let z = rng.gen_range(0.0..2.0 * PI);
        let (p, q, pz, qz) = path.at(z);
        let s = stereo::unproject(ComplexFieldPoint::finite(p, q));
        let spin = |zz: f64| {
            let (pp, qq, _, _) = path.at(zz);
            stereo::unproject(ComplexFieldPoint::finite(pp, qq)).as_array()
        };
        let (sp, sm) = (spin(z + h), spin(z - h));
        let sz = [0, 1, 2].map(|i| (sp[i] - sm[i]) / (2.0 * h));
        let sphere = stereo::kinetic_density_sphere_with_tolerance(s, sz, 1e-6)?;
        let complex = stereo::kinetic_density_complex(p, q, pz, qz);
        worst = worst.max((sphere - complex).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heun::{bethe_roots, SpectralIndices};
    use crate::mathieu::{solve, Parity};

    fn ground() -> BetheSolution {
        BetheSolution {
            indices: SpectralIndices { n: 0, lambda_n: -2.0, l: 0.0, branch: 0 },
            roots: Vec::new(),
            energy: -0.5,
            xi: -1.0,
            residual: 0.0,
        }
    }

    #[test]
    fn grids() {
        let g = default_radial_grid();
        assert_eq!(g.len(), 101);
        assert!((g[0] - 0.1).abs() < 1e-15 && (g[100] - 10.0).abs() < 1e-13);
        assert!((g[50] - 1.0).abs() < 1e-14);
        assert_eq!(periodic_grid(4), [0.0, PI / 2.0, PI, 1.5 * PI]);
    }

    #[test]
    fn ground_state_residual() {
        let p = PhysicalParams::default();
        let rep = radial_residual(&ground(), &p, &default_radial_grid()).unwrap();
        assert!(rep.passed, "{}", rep.max_rel);
        let bad = radial_residual_with_energy(&ground(), -0.4, &p, &default_radial_grid()).unwrap();
        assert!(bad.max_rel > 1e-3);
        assert!(radial_residual(&ground(), &p, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn excited_residuals() {
        let p = PhysicalParams::natural(3.0, 0.0).unwrap();
        for n in 1..=3 {
            for sol in bethe_roots(n, &p, None).unwrap() {
                let rep = radial_residual(&sol, &p, &default_radial_grid()).unwrap();
                assert!(rep.max_rel < 1e-8, "n = {n}: {}", rep.max_rel);
            }
        }
    }

    #[test]
    fn mathieu_residuals() {
        let x = periodic_grid(64);
        let trig = solve(1.0, 0.0, Parity::Even).unwrap();
        assert!(mathieu_residual(&trig, &x).max_rel < 1e-14);
        let s = solve(1.0, 1.0, Parity::Even).unwrap();
        assert!(mathieu_residual(&s, &x).max_rel < 1e-8);
        assert!(mathieu_residual_with_a(&s, s.a + 0.01, &x).max_rel > 1e-4);
    }

    #[test]
    fn fd_free_ladder() {
        let e = fd_eigs_periodic(0.0, 512, 5).unwrap();
        let expected = [0.0, 1.0, 1.0, 4.0, 4.0];
        for (x, y) in e.iter().zip(expected) {
            assert!((x - y).abs() < 1e-3, "{e:?}");
        }
        assert!(fd_eigs_periodic(1.0, 100, 3).is_err());
    }

    #[test]
    fn nlsm_is_deterministic() {
        let a = nlsm_equivalence(50, 42).unwrap();
        let b = nlsm_equivalence(50, 42).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(a < 1e-8);
        assert!(nlsm_equivalence_fd(50, 7, 1e-4).unwrap() < 1e-6);
        assert!(nlsm_equivalence(0, 1).is_err());
    }
}
