//! Physical constants of the spin chain and the composite constants derived from them.

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::{Error, Result};

/// Anisotropy `A`, transverse field `B` (along x), gyromagnetic ratio `μ` and `ħ`.
///
/// Only `ħ > 0` is enforced at construction. `A ≤ 0` is legal here because the
/// in-plane problem never uses it; operations that need `a = √(A/2ħ²)` reject it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    anisotropy: f64,
    field: f64,
    mu: f64,
    hbar: f64,
}

/// Composite constants shared by the radial and Mathieu reductions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// Exponent constant `a = √(A / 2ħ²)`.
    pub a: f64,
    /// Off-plane Mathieu parameter `q = −A / 32ħ²`.
    pub q_offplane: f64,
    /// In-plane Mathieu parameter `q = μB / 4ħ²`.
    pub q_inplane: f64,
}

impl PhysicalParams {
    pub fn new(anisotropy: f64, field: f64, mu: f64, hbar: f64) -> Result<Self> {
        if !anisotropy.is_finite() {
            return Err(Error::NonFinite("anisotropy A"));
        }
        if !field.is_finite() {
            return Err(Error::NonFinite("field B"));
        }
        if !mu.is_finite() {
            return Err(Error::NonFinite("mu"));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::NonPositiveHbar(hbar));
        }
        Ok(Self { anisotropy, field, mu, hbar })
    }

    /// Natural units (`μ = ħ = 1`) with the given anisotropy and field.
    pub fn natural(anisotropy: f64, field: f64) -> Result<Self> {
        Self::new(anisotropy, field, 1.0, 1.0)
    }

    pub fn anisotropy(&self) -> f64 {
        self.anisotropy
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// The product `μB`, treated as a single coupling.
    pub fn mu_b(&self) -> f64 {
        self.mu * self.field
    }

    /// `a = √(A/2ħ²)`; errors unless `A > 0`.
    pub fn a(&self) -> Result<f64> {
        if self.anisotropy > 0.0 {
            Ok((self.anisotropy / (2.0 * self.hbar * self.hbar)).sqrt())
        } else {
            Err(Error::NonPositiveAnisotropy(self.anisotropy))
        }
    }

    pub fn q_offplane(&self) -> f64 {
        -self.anisotropy / (32.0 * self.hbar * self.hbar)
    }

    pub fn q_inplane(&self) -> f64 {
        self.mu_b() / (4.0 * self.hbar * self.hbar)
    }

    pub fn derived(&self) -> Result<DerivedConstants> {
        Ok(DerivedConstants {
            a: self.a()?,
            q_offplane: self.q_offplane(),
            q_inplane: self.q_inplane(),
        })
    }
}

impl Default for PhysicalParams {
    /// `A = 2, B = 0, μ = ħ = 1`, the reference point where `a = 1`.
    fn default() -> Self {
        Self { anisotropy: 2.0, field: 0.0, mu: 1.0, hbar: 1.0 }
    }
}
