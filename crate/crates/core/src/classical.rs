//! Static field theory in `z`: mass function, potential, Hamiltonian density and a
//! fixed-step RK4 integrator for the Hamilton equations.
//!
//! With `ρ = 1 + P² + Q²` the density is `H = ½ρ²(Π_P² + Π_Q²) + V(P, Q)`, so
//! `P_z = ρ²Π_P` and `Π_{P,z} = −(2ρP|Π|² + ∂V/∂P)` (and likewise for `Q`).

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::{Error, PhysicalParams, Result};

/// States whose magnitude exceeds this are reported as diverged.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldState {
    pub p: f64,
    pub q: f64,
    pub pi_p: f64,
    pub pi_q: f64,
}

impl FieldState {
    pub fn new(p: f64, q: f64, pi_p: f64, pi_q: f64) -> Self {
        Self { p, q, pi_p, pi_q }
    }

    fn is_finite(&self) -> bool {
        self.p.is_finite() && self.q.is_finite() && self.pi_p.is_finite() && self.pi_q.is_finite()
    }

    fn max_abs(&self) -> f64 {
        self.p.abs().max(self.q.abs()).max(self.pi_p.abs()).max(self.pi_q.abs())
    }

    fn axpy(&self, h: f64, d: &FieldState) -> FieldState {
        FieldState {
            p: self.p + h * d.p,
            q: self.q + h * d.q,
            pi_p: self.pi_p + h * d.pi_p,
            pi_q: self.pi_q + h * d.pi_q,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub z_grid: Vec<f64>,
    pub states: Vec<FieldState>,
    pub h_values: Vec<f64>,
}

impl Trajectory {
    /// Largest `|H(z) − H(z₀)| / max(1, |H(z₀)|)` along the trajectory.
    pub fn max_energy_drift(&self) -> f64 {
        let Some(&h0) = self.h_values.first() else { return 0.0 };
        let scale = h0.abs().max(1.0);
        self.h_values.iter().map(|h| (h - h0).abs() / scale).fold(0.0, f64::max)
    }
}

/// `m(P, Q) = 1/(1 + P² + Q²)²`.
pub fn mass_function(p: f64, q: f64) -> f64 {
    let rho = 1.0 + p * p + q * q;
    1.0 / (rho * rho)
}

/// `V(P, Q) = −(A/4)(1 − s)²/(1 + s)² + (μB/2)·P/(1 + s)`, `s = P² + Q²`.
pub fn potential(p: f64, q: f64, params: &PhysicalParams) -> f64 {
    let s = p * p + q * q;
    let ratio = (1.0 - s) / (1.0 + s);
    -0.25 * params.anisotropy() * ratio * ratio + 0.5 * params.mu_b() * p / (1.0 + s)
}

/// Analytic `(∂V/∂P, ∂V/∂Q)`.
pub fn potential_gradient(p: f64, q: f64, params: &PhysicalParams) -> (f64, f64) {
    let s = p * p + q * q;
    let d = 1.0 + s;
    let d2 = d * d;
    let aniso = 2.0 * params.anisotropy() * (1.0 - s) / (d2 * d);
    let mb = 0.5 * params.mu_b();
    let dp = aniso * p + mb * (d - 2.0 * p * p) / d2;
    let dq = aniso * q - mb * 2.0 * p * q / d2;
    (dp, dq)
}

/// `(Π_P² + Π_Q²)/(2m) + V` with the mass function above.
pub fn hamiltonian_density(st: &FieldState, params: &PhysicalParams) -> f64 {
    let m = mass_function(st.p, st.q);
    (st.pi_p * st.pi_p + st.pi_q * st.pi_q) / (2.0 * m) + potential(st.p, st.q, params)
}

/// The same density written as `½(1 + P² + Q²)²(Π_P² + Π_Q²) + V`.
pub fn hamiltonian_density_expanded(st: &FieldState, params: &PhysicalParams) -> f64 {
    let rho = 1.0 + st.p * st.p + st.q * st.q;
    0.5 * rho * rho * (st.pi_p * st.pi_p + st.pi_q * st.pi_q) + potential(st.p, st.q, params)
}

/// Momenta from field gradients: `Π = ω_z/(1 + P² + Q²)²`.
pub fn momenta(p: f64, q: f64, pz: f64, qz: f64) -> (f64, f64) {
    let m = mass_function(p, q);
    (pz * m, qz * m)
}

/// Density evaluated from `(P, Q, P_z, Q_z)` through [`momenta`].
pub fn hamiltonian_density_from_gradient(p: f64, q: f64, pz: f64, qz: f64, params: &PhysicalParams) -> f64 {
    let (pi_p, pi_q) = momenta(p, q, pz, qz);
    hamiltonian_density(&FieldState { p, q, pi_p, pi_q }, params)
}

/// Right-hand side of the static Hamilton equations.
pub fn hamilton_rhs(st: &FieldState, params: &PhysicalParams) -> FieldState {
    let rho = 1.0 + st.p * st.p + st.q * st.q;
    let rho2 = rho * rho;
    let pi2 = st.pi_p * st.pi_p + st.pi_q * st.pi_q;
    let (vp, vq) = potential_gradient(st.p, st.q, params);
    FieldState {
        p: rho2 * st.pi_p,
        q: rho2 * st.pi_q,
        pi_p: -(2.0 * rho * st.p * pi2 + vp),
        pi_q: -(2.0 * rho * st.q * pi2 + vq),
    }
}

fn rk4_step(st: &FieldState, h: f64, params: &PhysicalParams) -> FieldState {
    let k1 = hamilton_rhs(st, params);
    let k2 = hamilton_rhs(&st.axpy(0.5 * h, &k1), params);
    let k3 = hamilton_rhs(&st.axpy(0.5 * h, &k2), params);
    let k4 = hamilton_rhs(&st.axpy(h, &k3), params);
    FieldState {
        p: st.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p),
        q: st.q + h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q),
        pi_p: st.pi_p + h / 6.0 * (k1.pi_p + 2.0 * k2.pi_p + 2.0 * k3.pi_p + k4.pi_p),
        pi_q: st.pi_q + h / 6.0 * (k1.pi_q + 2.0 * k2.pi_q + 2.0 * k3.pi_q + k4.pi_q),
    }
}

/// Integrates from `z_span.0` to `z_span.1` with classical RK4.
///
/// The number of steps is `ceil((z1 − z0)/step)`; the step is shrunk uniformly
/// so the last node lands exactly on `z1`.
pub fn integrate_static(
    initial: FieldState,
    z_span: (f64, f64),
    step: f64,
    params: &PhysicalParams,
) -> Result<Trajectory> {
    let (z0, z1) = z_span;
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidArgument("step must be positive"));
    }
    if !(z0.is_finite() && z1.is_finite() && z1 > z0) {
        return Err(Error::InvalidArgument("z span must be finite and increasing"));
    }
    if !initial.is_finite() {
        return Err(Error::NonFinite("initial state"));
    }
    let steps = ((z1 - z0) / step).ceil().max(1.0) as usize;
    let h = (z1 - z0) / steps as f64;

    let mut traj = Trajectory {
        z_grid: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        h_values: Vec::with_capacity(steps + 1),
    };
    let mut st = initial;
    traj.z_grid.push(z0);
    traj.states.push(st);
    traj.h_values.push(hamiltonian_density(&st, params));
    for i in 1..=steps {
        st = rk4_step(&st, h, params);
        let z = if i == steps { z1 } else { z0 + i as f64 * h };
        if !st.is_finite() || st.max_abs() > DIVERGENCE_THRESHOLD {
            return Err(Error::Divergence { z });
        }
        traj.z_grid.push(z);
        traj.states.push(st);
        traj.h_values.push(hamiltonian_density(&st, params));
    }
    Ok(traj)
}
