//! Mathieu characteristic values and functions, `w'' + (a − 2q cos 2x) w = 0`.
//!
//! Substituting a trigonometric series turns the equation into a symmetric
//! tridiagonal eigenproblem `a·c_k = f_k² c_k + q(c_{k−1} + c_{k+1})`, solved by
//! Sturm bisection with inverse iteration for the coefficients.
//!
//! - Non-integer `ν` uses the Floquet basis `f_k = ν + 2k`, `k ∈ [−K, K]`. The
//!   cosine-type and sine-type solutions are the real and imaginary parts of
//!   `Σc_k e^{i f_k x}` and share one characteristic value.
//! - Integer `ν` uses the four parity blocks (`cos 2jx`, `cos (2j+1)x`,
//!   `sin (2j+2)x`, `sin (2j+1)x`), where the cosine and sine branches differ.
//!
//! Within each matrix the eigenvalues never cross as `q` varies away from zero,
//! so the branch that equals `ν²` at `q = 0` is the one with the same Sturm index.
//! The truncation is doubled until `a` moves by less than `1e-12·max(1, |a|)`.

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::linalg::{tridiag_eigenvalue, tridiag_eigenvector};
use crate::{Error, PhysicalParams, Result};

const MIN_SIZE: usize = 8;
const MAX_SIZE: usize = 4096;
const TRUNCATION_TOL: f64 = 1e-12;

/// Cosine-type (`Ce`, even in `x`) or sine-type (`Se`, odd) solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn label(&self) -> &'static str {
        match self {
            Parity::Even => "ce",
            Parity::Odd => "se",
        }
    }
}

/// One Mathieu solution as a finite trigonometric series
/// `Σ c_k cos(f_k x)` (even) or `Σ c_k sin(f_k x)` (odd).
#[derive(Debug, Clone, PartialEq)]
pub struct MathieuSolution {
    pub nu: f64,
    pub q: f64,
    /// Characteristic value `a`.
    pub a: f64,
    pub parity: Parity,
    pub frequencies: Vec<f64>,
    /// Unit Euclidean norm; the coefficient at frequency `|ν|` is positive.
    pub coefficients: Vec<f64>,
}

impl MathieuSolution {
    fn sum(&self, x: f64, deriv: u8) -> f64 {
        let mut s = 0.0;
        for (&f, &c) in self.frequencies.iter().zip(&self.coefficients) {
            let (sin, cos) = (f * x).sin_cos();
            s += c * match (self.parity, deriv) {
                (Parity::Even, 0) => cos,
                (Parity::Even, 1) => -f * sin,
                (Parity::Even, _) => -f * f * cos,
                (Parity::Odd, 0) => sin,
                (Parity::Odd, 1) => f * cos,
                (Parity::Odd, _) => -f * f * sin,
            };
        }
        s
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sum(x, 0)
    }

    pub fn d1(&self, x: f64) -> f64 {
        self.sum(x, 1)
    }

    pub fn d2(&self, x: f64) -> f64 {
        self.sum(x, 2)
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Block {
    Floquet { nu: f64 },
    CosEven,
    CosOdd,
    SinEven,
    SinOdd,
}

/// The integer order of `nu` when it has one.
fn integer_order(nu: f64) -> Option<u64> {
    let m = nu.abs();
    (m.fract() == 0.0 && m < 1e15).then_some(m as u64)
}

/// Block and Sturm index of the branch `(ν, parity)`.
fn locate(nu: f64, parity: Parity) -> Result<(Block, usize)> {
    if !nu.is_finite() {
        return Err(Error::NonFinite("order nu"));
    }
    match integer_order(nu) {
        // the Floquet Sturm index depends on the window and is computed in `assemble`
        None => Ok((Block::Floquet { nu }, 0)),
        Some(m) => {
            let half = (m / 2) as usize;
            match (parity, m % 2) {
                (Parity::Even, 0) => Ok((Block::CosEven, half)),
                (Parity::Even, _) => Ok((Block::CosOdd, half)),
                (Parity::Odd, 0) if m == 0 => Err(Error::InvalidOrder(nu)),
                (Parity::Odd, 0) => Ok((Block::SinEven, half - 1)),
                (Parity::Odd, _) => Ok((Block::SinOdd, half)),
            }
        }
    }
}

/// Tridiagonal matrix, frequencies and the Sturm index of the wanted branch.
fn assemble(block: Block, q: f64, size: usize, index: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>, usize) {
    let (freqs, rank): (Vec<f64>, usize) = match block {
        Block::Floquet { nu } => {
            let k = size as i64 / 2;
            let f: Vec<f64> = (-k..=k).map(|j| nu + 2.0 * j as f64).collect();
            let target = nu * nu;
            let rank = f.iter().filter(|x| *x * *x < target).count();
            (f, rank)
        }
        Block::CosEven => ((0..size).map(|j| 2.0 * j as f64).collect(), index),
        Block::CosOdd | Block::SinOdd => ((0..size).map(|j| 2.0 * j as f64 + 1.0).collect(), index),
        Block::SinEven => ((0..size).map(|j| 2.0 * j as f64 + 2.0).collect(), index),
    };
    let mut d: Vec<f64> = freqs.iter().map(|f| f * f).collect();
    let mut e = alloc::vec![q; d.len() - 1];
    match block {
        Block::CosEven => e[0] = core::f64::consts::SQRT_2 * q,
        Block::CosOdd => d[0] += q,
        Block::SinOdd => d[0] -= q,
        _ => {}
    }
    (d, e, freqs, rank)
}

fn initial_size(block: Block, index: usize, q: f64) -> usize {
    let extra = 8 + (4.0 * q.abs().sqrt()) as usize;
    match block {
        Block::Floquet { nu } => 2 * ((nu.abs() / 2.0) as usize + extra) + 1,
        _ => index + extra,
    }
    .max(MIN_SIZE)
}

struct Converged {
    a: f64,
    d: Vec<f64>,
    e: Vec<f64>,
    freqs: Vec<f64>,
}

fn converge(nu: f64, q: f64, block: Block, index: usize) -> Result<Converged> {
    let mut size = initial_size(block, index, q);
    let (d, e, freqs, rank) = assemble(block, q, size, index);
    let mut kept = Converged { a: tridiag_eigenvalue(&d, &e, rank), d, e, freqs };
    loop {
        let next = 2 * size;
        if next > MAX_SIZE {
            return Err(Error::TruncationNotConverged { nu, q, size });
        }
        let (d, e, freqs, rank) = assemble(block, q, next, index);
        let a = tridiag_eigenvalue(&d, &e, rank);
        if (a - kept.a).abs() < TRUNCATION_TOL * a.abs().max(1.0) {
            // the smaller matrix already meets the tolerance; keep it for the coefficients
            return Ok(kept);
        }
        kept = Converged { a, d, e, freqs };
        size = next;
    }
}

fn check(nu: f64, q: f64) -> Result<()> {
    if !nu.is_finite() {
        return Err(Error::NonFinite("order nu"));
    }
    if !q.is_finite() {
        return Err(Error::NonFinite("parameter q"));
    }
    Ok(())
}

/// Characteristic value of the branch `(ν, parity)`.
pub fn characteristic_value_with(nu: f64, q: f64, parity: Parity) -> Result<f64> {
    check(nu, q)?;
    let (block, index) = locate(nu, parity)?;
    if q == 0.0 {
        return Ok(nu * nu);
    }
    Ok(converge(nu, q, block, index)?.a)
}

/// `a_ν(q)`: the cosine-type branch that equals `ν²` at `q = 0`.
pub fn characteristic_value(nu: f64, q: f64) -> Result<f64> {
    characteristic_value_with(nu, q, Parity::Even)
}

/// Characteristic value and Fourier coefficients of the branch `(ν, parity)`.
pub fn solve(nu: f64, q: f64, parity: Parity) -> Result<MathieuSolution> {
    check(nu, q)?;
    let (block, index) = locate(nu, parity)?;
    if q == 0.0 {
        return Ok(MathieuSolution {
            nu,
            q,
            a: nu * nu,
            parity,
            frequencies: alloc::vec![nu.abs()],
            coefficients: alloc::vec![1.0],
        });
    }
    let c = converge(nu, q, block, index)?;
    let mut v = tridiag_eigenvector(&c.d, &c.e, c.a);
    if block == Block::CosEven {
        v[0] /= core::f64::consts::SQRT_2;
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let lead = c
        .freqs
        .iter()
        .position(|f| (f - nu).abs() < 1e-9 || (f - nu.abs()).abs() < 1e-9)
        .unwrap_or(0);
    let sign = if v[lead] < 0.0 { -1.0 } else { 1.0 };
    v.iter_mut().for_each(|x| *x *= sign / norm);
    Ok(MathieuSolution { nu, q, a: c.a, parity, frequencies: c.freqs, coefficients: v })
}

/// Cosine-type solution evaluated at `x`.
pub fn ce(nu: f64, q: f64, x: f64) -> Result<f64> {
    Ok(solve(nu, q, Parity::Even)?.eval(x))
}

/// Sine-type solution evaluated at `x`.
pub fn se(nu: f64, q: f64, x: f64) -> Result<f64> {
    Ok(solve(nu, q, Parity::Odd)?.eval(x))
}

/// One row of an energy table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub nu: f64,
    pub parity: Parity,
    pub q: f64,
    pub a: f64,
    pub energy: f64,
}

/// Off-plane energies `E = 2ħ²a_ν(q) − A/8`, `q = −A/(32ħ²)`, cosine-type branches.
pub fn offplane_spectrum(params: &PhysicalParams, orders: &[f64]) -> Result<Vec<SpectrumEntry>> {
    offplane_spectrum_with(params, orders, Parity::Even)
}

pub fn offplane_spectrum_with(params: &PhysicalParams, orders: &[f64], parity: Parity) -> Result<Vec<SpectrumEntry>> {
    let q = params.q_offplane();
    let h2 = params.hbar() * params.hbar();
    orders
        .iter()
        .map(|&nu| {
            let a = characteristic_value_with(nu, q, parity)?;
            Ok(SpectrumEntry { nu, parity, q, a, energy: 2.0 * h2 * a - params.anisotropy() / 8.0 })
        })
        .collect()
}

/// In-plane energies `E = ħ²a_ν(q)/2`, `q = μB/(4ħ²)`, cosine-type branches.
pub fn inplane_spectrum(params: &PhysicalParams, orders: &[f64]) -> Result<Vec<SpectrumEntry>> {
    inplane_spectrum_with(params, orders, Parity::Even)
}

pub fn inplane_spectrum_with(params: &PhysicalParams, orders: &[f64], parity: Parity) -> Result<Vec<SpectrumEntry>> {
    let q = params.q_inplane();
    let h2 = params.hbar() * params.hbar();
    orders
        .iter()
        .map(|&nu| {
            let a = characteristic_value_with(nu, q, parity)?;
            Ok(SpectrumEntry { nu, parity, q, a, energy: 0.5 * h2 * a })
        })
        .collect()
}

/// Angle `θ ∈ (0, 2π)` with `P = cot(θ/2)`.
pub fn offplane_angle(p: f64) -> f64 {
    2.0 * 1.0f64.atan2(p)
}

/// Off-plane wavefunction at field value `P`, i.e. the solution evaluated at `θ(P)`.
pub fn offplane_wavefunction(sol: &MathieuSolution, p: f64) -> f64 {
    sol.eval(offplane_angle(p))
}

/// Closed-form in-plane state at `B = 0`:
/// `Ψₙ = e^{iEₙz/ħ} cos[(n/2)·atan2(Q, P)]`, `Eₙ = ħ²n²/2`.
pub fn inplane_eigenstate(n: u32, p: f64, q: f64, z: f64, params: &PhysicalParams) -> Result<num_complex::Complex64> {
    if params.field() != 0.0 {
        return Err(Error::FieldMustVanish(params.field()));
    }
    if p == 0.0 && q == 0.0 {
        return Err(Error::UndefinedAngle);
    }
    let h = params.hbar();
    let nf = n as f64;
    let e = 0.5 * h * h * nf * nf;
    let amp = (0.5 * nf * q.atan2(p)).cos();
    Ok(num_complex::Complex64::from_polar(1.0, e * z / h) * amp)
}
