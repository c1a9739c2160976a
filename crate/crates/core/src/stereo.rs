//! Stereographic projection of the unit spin onto the extended complex plane,
//! `ω = (S₁ + iS₂)/(1 + S₃)`, and the two equivalent forms of the sigma-model
//! kinetic density.
//!
//! The north pole `S₃ = +1` maps to `ω = 0` and the south pole `S₃ = −1` to the
//! point at infinity, which is carried as [`ComplexFieldPoint::Infinity`] instead
//! of an IEEE infinity.

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::{Error, Result};

/// Tolerance on `|S| = 1` accepted by [`SpinPoint::new`].
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Tolerance on `S·S_z = 0` accepted by [`kinetic_density_sphere`].
pub const TANGENCY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinPoint {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl SpinPoint {
    /// Checked constructor: the vector must lie on the unit sphere.
    pub fn new(s1: f64, s2: f64, s3: f64) -> Result<Self> {
        if !(s1.is_finite() && s2.is_finite() && s3.is_finite()) {
            return Err(Error::NonFinite("spin component"));
        }
        let norm = (s1 * s1 + s2 * s2 + s3 * s3).sqrt();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(Self { s1, s2, s3 })
    }

    /// Scales an arbitrary non-zero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidArgument("cannot normalise a zero or non-finite vector"));
        }
        Ok(Self { s1: x / norm, s2: y / norm, s3: z / norm })
    }

    pub const NORTH: SpinPoint = SpinPoint { s1: 0.0, s2: 0.0, s3: 1.0 };
    pub const SOUTH: SpinPoint = SpinPoint { s1: 0.0, s2: 0.0, s3: -1.0 };

    pub fn norm(&self) -> f64 {
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }
}

/// Image of a spin in the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComplexFieldPoint {
    Finite { p: f64, q: f64 },
    Infinity,
}

impl ComplexFieldPoint {
    pub fn finite(p: f64, q: f64) -> Self {
        ComplexFieldPoint::Finite { p, q }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ComplexFieldPoint::Infinity)
    }
}

/// `ω = (S₁ + iS₂)/(1 + S₃)`.
///
/// In the southern hemisphere the algebraically equal form `(1 − S₃)/(S₁ − iS₂)`
/// is used to avoid cancellation in `1 + S₃`.
pub fn project(s: SpinPoint) -> ComplexFieldPoint {
    let denom = 1.0 + s.s3;
    if denom == 0.0 {
        return ComplexFieldPoint::Infinity;
    }
    if s.s3 >= 0.0 {
        return ComplexFieldPoint::Finite { p: s.s1 / denom, q: s.s2 / denom };
    }
    let rho2 = s.s1 * s.s1 + s.s2 * s.s2;
    if rho2 == 0.0 {
        return ComplexFieldPoint::Infinity;
    }
    // (1 − S₃)/(S₁ − iS₂) = (1 − S₃)(S₁ + iS₂)/(S₁² + S₂²)
    let scale = (1.0 - s.s3) / rho2;
    ComplexFieldPoint::Finite { p: s.s1 * scale, q: s.s2 * scale }
}

/// Inverse map: `S₁ + iS₂ = 2ω/(1+|ω|²)`, `S₃ = (1−|ω|²)/(1+|ω|²)`.
pub fn unproject(w: ComplexFieldPoint) -> SpinPoint {
    let (p, q) = match w {
        ComplexFieldPoint::Infinity => return SpinPoint::SOUTH,
        ComplexFieldPoint::Finite { p, q } => (p, q),
    };
    let m = p.hypot(q);
    if m <= 1.0 {
        let m2 = m * m;
        let denom = 1.0 + m2;
        SpinPoint { s1: 2.0 * p / denom, s2: 2.0 * q / denom, s3: (1.0 - m2) / denom }
    } else {
        // divide through by |ω|² so huge |ω| does not overflow
        let t = 1.0 / m;
        let (up, uq) = (p * t * t, q * t * t);
        let t2 = t * t;
        let denom = t2 + 1.0;
        SpinPoint { s1: 2.0 * up / denom, s2: 2.0 * uq / denom, s3: (t2 - 1.0) / denom }
    }
}

/// Derivative of [`unproject`] along a path `(P(z), Q(z))` by the chain rule.
pub fn unproject_derivative(p: f64, q: f64, pz: f64, qz: f64) -> [f64; 3] {
    let rho = 1.0 + p * p + q * q;
    let rho_z = 2.0 * (p * pz + q * qz);
    let rho2 = rho * rho;
    [
        2.0 * pz / rho - 2.0 * p * rho_z / rho2,
        2.0 * qz / rho - 2.0 * q * rho_z / rho2,
        -2.0 * rho_z / rho2,
    ]
}

/// Sigma-model kinetic density in stereographic coordinates,
/// `2(P_z² + Q_z²)/(1 + P² + Q²)²`.
pub fn kinetic_density_complex(p: f64, q: f64, pz: f64, qz: f64) -> f64 {
    let rho = 1.0 + p * p + q * q;
    2.0 * (pz * pz + qz * qz) / (rho * rho)
}

/// Kinetic density on the sphere, `½|∂_z S|²`.
///
/// The derivative must be tangent to the sphere: `|S·S_z| ≤ 1e-10·max(1, |S_z|)`.
pub fn kinetic_density_sphere(s: SpinPoint, sz: [f64; 3]) -> Result<f64> {
    kinetic_density_sphere_with_tolerance(s, sz, TANGENCY_TOL)
}

/// [`kinetic_density_sphere`] with a caller-chosen tangency tolerance, for
/// derivatives that are only approximately tangent (finite differences).
pub fn kinetic_density_sphere_with_tolerance(s: SpinPoint, sz: [f64; 3], tol: f64) -> Result<f64> {
    let dot = s.s1 * sz[0] + s.s2 * sz[1] + s.s3 * sz[2];
    let len2 = sz[0] * sz[0] + sz[1] * sz[1] + sz[2] * sz[2];
    if dot.abs() > tol * len2.sqrt().max(1.0) {
        return Err(Error::ConstraintViolation { dot });
    }
    Ok(0.5 * len2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite(w: ComplexFieldPoint) -> (f64, f64) {
        match w {
            ComplexFieldPoint::Finite { p, q } => (p, q),
            ComplexFieldPoint::Infinity => panic!("unexpected infinity"),
        }
    }

    #[test]
    fn poles_and_equator() {
        assert_eq!(finite(project(SpinPoint::NORTH)), (0.0, 0.0));
        assert_eq!(finite(project(SpinPoint::new(1.0, 0.0, 0.0).unwrap())), (1.0, 0.0));
        assert!(project(SpinPoint::SOUTH).is_infinite());
    }

    #[test]
    fn inverse_special_points() {
        assert_eq!(unproject(ComplexFieldPoint::finite(0.0, 0.0)), SpinPoint::NORTH);
        assert_eq!(unproject(ComplexFieldPoint::finite(1.0, 0.0)), SpinPoint { s1: 1.0, s2: 0.0, s3: 0.0 });
        assert_eq!(unproject(ComplexFieldPoint::Infinity), SpinPoint::SOUTH);
    }

    #[test]
    fn large_omega_stays_on_sphere() {
        for &m in &[1e3, 1e6, 1e100, 1e300] {
            let s = unproject(ComplexFieldPoint::finite(m, -m));
            assert!((s.norm() - 1.0).abs() < 1e-12, "{m}: {}", s.norm());
        }
    }

    #[test]
    fn rejects_off_sphere() {
        assert!(matches!(SpinPoint::new(1.0, 1.0, 0.0), Err(Error::NotUnitVector { .. })));
    }

    #[test]
    fn kinetic_examples() {
        assert_eq!(kinetic_density_complex(0.0, 0.0, 1.0, 0.0), 2.0);
        assert_eq!(kinetic_density_complex(1.0, 0.0, 1.0, 1.0), 1.0);
        assert_eq!(kinetic_density_complex(3.0, -7.0, 0.0, 0.0), 0.0);
        assert_eq!(kinetic_density_sphere(SpinPoint::NORTH, [0.0; 3]).unwrap(), 0.0);
        assert_eq!(kinetic_density_sphere(SpinPoint::NORTH, [2.0, 0.0, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn non_tangent_derivative_is_rejected() {
        let err = kinetic_density_sphere(SpinPoint::NORTH, [0.0, 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolation { .. }));
    }

    #[test]
    fn chain_rule_matches_central_difference() {
        let path = |z: f64| (z.sin() + 0.3, 0.5 * (2.0 * z).cos());
        let z = 0.7;
        let h = 1e-5;
        let (p, q) = path(z);
        let (pz, qz) = (z.cos(), -(2.0 * z).sin());
        let d = unproject_derivative(p, q, pz, qz);
        let (pp, qp) = path(z + h);
        let (pm, qm) = path(z - h);
        let sp = unproject(ComplexFieldPoint::finite(pp, qp)).as_array();
        let sm = unproject(ComplexFieldPoint::finite(pm, qm)).as_array();
        for i in 0..3 {
            assert!((d[i] - (sp[i] - sm[i]) / (2.0 * h)).abs() < 1e-8);
        }
    }
}
