use proptest::prelude::*;

use spinchain_core::classical::{self, FieldState};
use spinchain_core::heun;
use spinchain_core::mathieu::{self, Parity};
use spinchain_core::stereo::{self, ComplexFieldPoint, SpinPoint};
use spinchain_core::PhysicalParams;

fn spin() -> impl Strategy<Value = SpinPoint> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("non-zero", |(x, y, z)| x * x + y * y + z * z > 1e-6)
        .prop_map(|(x, y, z)| SpinPoint::normalized(x, y, z).unwrap())
}

fn plane_point() -> impl Strategy<Value = (f64, f64)> {
    // log-uniform modulus up to 1e6, uniform phase
    (-6.0f64..6.0, 0.0f64..core::f64::consts::TAU).prop_map(|(lm, t)| {
        let m = 10f64.powf(lm);
        (m * t.cos(), m * t.sin())
    })
}

proptest! {
    #[test]
    fn unproject_lands_on_sphere((p, q) in plane_point()) {
        let s = stereo::unproject(ComplexFieldPoint::finite(p, q));
        prop_assert!((s.norm() - 1.0).abs() < 1e-15 * 4.0);
    }

    #[test]
    fn plane_round_trip((p, q) in plane_point()) {
        let back = stereo::project(stereo::unproject(ComplexFieldPoint::finite(p, q)));
        let ComplexFieldPoint::Finite { p: p2, q: q2 } = back else {
            return Err(TestCaseError::fail("finite point mapped to infinity"));
        };
        let m = p.hypot(q);
        prop_assert!((p2 - p).hypot(q2 - q) <= 1e-12 * m);
    }

    #[test]
    fn sphere_round_trip(s in spin()) {
        let back = stereo::unproject(stereo::project(s));
        let err = (back.s1 - s.s1).abs().max((back.s2 - s.s2).abs()).max((back.s3 - s.s3).abs());
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn kinetic_forms_agree((p, q) in plane_point(), pz in -3.0f64..3.0, qz in -3.0f64..3.0) {
        prop_assume!(p.hypot(q) < 1e3);
        let s = stereo::unproject(ComplexFieldPoint::finite(p, q));
        let sz = stereo::unproject_derivative(p, q, pz, qz);
        let sphere = stereo::kinetic_density_sphere(s, sz).unwrap();
        let complex = stereo::kinetic_density_complex(p, q, pz, qz);
        prop_assert!((sphere - complex).abs() <= 1e-12 * complex.abs().max(1.0));
    }

    #[test]
    fn lambda_identities(n in 0u32..=20) {
        let (num, den) = heun::lambda_n_exact(n);
        let nf = n as i64;
        prop_assert_eq!(num, -(nf * nf + 2 * nf + 2));
        prop_assert_eq!(den, nf + 1);
        let lam = heun::lambda_n(n);
        // l = −n solves l² − (λ + 2)l + (λ + 2) = 0
        let l = -(n as f64);
        prop_assert!((l * l - (lam + 2.0) * l + (lam + 2.0)).abs() < 1e-12 * (1.0 + l * l));
        let (plus, minus) = heun::l_branches(lam).unwrap();
        prop_assert!((minus - l).abs() < 1e-12 * (1.0 + l.abs()));
        prop_assert!(plus >= minus);
        prop_assert!((heun::derive_lambda_from_constraints(n) - lam).abs() < 1e-12 * lam.abs());
    }

    #[test]
    fn constraints_vanish_on_level(n in 0u32..=20, a_aniso in 0.01f64..50.0, hbar in 0.1f64..3.0) {
        let pr = PhysicalParams::new(a_aniso, 0.0, 1.0, hbar).unwrap();
        let hc = heun::heun_coefficients(n, &pr).unwrap();
        prop_assert!(hc.con1_defect(n).abs() < 1e-12 * (1.0 + (n * n) as f64));
        prop_assert!(hc.con2_defect(n).abs() < 1e-12 * (1.0 + n as f64) * (1.0 + pr.a().unwrap()));
    }

    #[test]
    fn derived_constants_round_trip(a_aniso in 1e-3f64..1e3, b in -1e3f64..1e3, mu in 1e-3f64..1e2, hbar in 1e-2f64..1e2) {
        let pr = PhysicalParams::new(a_aniso, b, mu, hbar).unwrap();
        let h2 = hbar * hbar;
        let a = pr.a().unwrap();
        prop_assert!((2.0 * h2 * a * a - a_aniso).abs() <= 1e-15 * 4.0 * a_aniso);
        prop_assert!((-32.0 * h2 * pr.q_offplane() - a_aniso).abs() <= 1e-15 * 2.0 * a_aniso);
        prop_assert!((4.0 * h2 * pr.q_inplane() - mu * b).abs() <= 1e-15 * 2.0 * (mu * b).abs());
    }

    #[test]
    fn characteristic_value_is_lipschitz_in_q(
        nu in prop_oneof![(0u32..6).prop_map(|k| k as f64), 0.05f64..5.0],
        q in -5.0f64..5.0,
        odd in any::<bool>(),
    ) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        prop_assume!(!(odd && nu == 0.0));
        let delta = 1e-6;
        let a0 = mathieu::characteristic_value_with(nu, q, parity).unwrap();
        let a1 = mathieu::characteristic_value_with(nu, q + delta, parity).unwrap();
        // |da/dq| = |⟨2cos 2x⟩| ≤ 2
        prop_assert!((a1 - a0).abs() <= 2.0 * delta + 1e-10 * a0.abs().max(1.0));
    }

    #[test]
    fn density_forms_agree(
        p in -10.0f64..10.0, q in -10.0f64..10.0, pi_p in -2.0f64..2.0, pi_q in -2.0f64..2.0,
        a_aniso in -5.0f64..5.0, b in -5.0f64..5.0,
    ) {
        let pr = PhysicalParams::natural(a_aniso, b).unwrap();
        let st = FieldState::new(p, q, pi_p, pi_q);
        let h1 = classical::hamiltonian_density(&st, &pr);
        let h2 = classical::hamiltonian_density_expanded(&st, &pr);
        prop_assert!((h1 - h2).abs() <= 1e-14 * h1.abs().max(1.0));
    }

    #[test]
    fn gradient_matches_finite_difference(
        p in -3.0f64..3.0, q in -3.0f64..3.0, a_aniso in -5.0f64..5.0, mub in -5.0f64..5.0,
    ) {
        let pr = PhysicalParams::natural(a_aniso, mub).unwrap();
        let h = 1e-5;
        let (gp, gq) = classical::potential_gradient(p, q, &pr);
        let fp = (classical::potential(p + h, q, &pr) - classical::potential(p - h, q, &pr)) / (2.0 * h);
        let fq = (classical::potential(p, q + h, &pr) - classical::potential(p, q - h, &pr)) / (2.0 * h);
        prop_assert!((gp - fp).abs() < 1e-7 && (gq - fq).abs() < 1e-7);
    }

    #[test]
    fn momenta_invert_gradient(p in -5.0f64..5.0, q in -5.0f64..5.0, pz in -5.0f64..5.0, qz in -5.0f64..5.0) {
        let (pi_p, pi_q) = classical::momenta(p, q, pz, qz);
        let rhs = classical::hamilton_rhs(&FieldState::new(p, q, pi_p, pi_q), &PhysicalParams::default());
        prop_assert!((rhs.p - pz).abs() <= 1e-13 * pz.abs().max(1.0));
        prop_assert!((rhs.q - qz).abs() <= 1e-13 * qz.abs().max(1.0));
    }
}
