use spinchain_core::classical::{self, FieldState};
use spinchain_core::heun::{self, BetheSolution};
use spinchain_core::mathieu::{self, Parity};
use spinchain_core::verify;
use spinchain_core::{Complex64, Error, ErrorKind, PhysicalParams};

fn matched(sols: &[BetheSolution], energy: f64) -> &BetheSolution {
    sols.iter()
        .min_by(|x, y| (x.energy - energy).abs().total_cmp(&(y.energy - energy).abs()))
        .unwrap()
}

#[test]
fn radial_factor_matches_series_from_recurrence() {
    let pr = PhysicalParams::new(3.0, 0.0, 1.0, 0.8).unwrap();
    let a = pr.a().unwrap();
    for n in 0..=5u32 {
        let sols = heun::bethe_roots(n, &pr, None).unwrap();
        let oracle = heun::coefficient_recurrence_solutions(n, &pr).unwrap();
        for o in &oracle {
            let sol = matched(&sols, o.energy);
            for &r in &[0.2, 0.7, 1.0, 2.5, 6.0] {
                let zeta = 1.0 / (1.0 + r * r);
                let series: f64 = o.coefficients.iter().rev().fold(0.0, |acc, &c| acc * zeta + c);
                let chi = series * r.powf(sol.indices.lambda_n) * (1.0 + r * r).powi(n as i32) * (a * zeta).exp();
                let got = heun::radial_factor(sol, r, &pr).unwrap();
                assert!((got - chi).norm() <= 1e-10 * chi.abs().max(1e-300), "n={n} r={r}: {got} vs {chi}");
            }
        }
    }
}

#[test]
fn newton_accepts_oracle_seeds() {
    let pr = PhysicalParams::default();
    for n in 1..=6u32 {
        let oracle = heun::coefficient_recurrence_solutions(n, &pr).unwrap();
        let seeds: Vec<Vec<Complex64>> = oracle
            .iter()
            .map(|o| o.roots.iter().map(|z| z + Complex64::new(1e-4, -1e-4)).collect())
            .collect();
        let sols = heun::bethe_roots(n, &pr, Some(&seeds)).unwrap();
        assert_eq!(sols.len(), n as usize + 1);
        for (s, o) in sols.iter().zip(&oracle) {
            assert!((s.energy - o.energy).abs() < 1e-10 * o.energy.abs().max(1.0));
            assert!(s.residual < 1e-10);
        }
    }
}

#[test]
fn branches_are_sorted_by_energy() {
    let sols = heun::bethe_roots(4, &PhysicalParams::natural(5.0, 0.0).unwrap(), None).unwrap();
    for (i, s) in sols.iter().enumerate() {
        assert_eq!(s.indices.branch, i);
        assert_eq!(s.indices.l, -4.0);
    }
    assert!(sols.windows(2).all(|w| w[0].energy < w[1].energy));
}

#[test]
fn radial_residuals_pass_for_all_levels() {
    for pr in [PhysicalParams::default(), PhysicalParams::new(0.7, 0.0, 1.0, 1.3).unwrap()] {
        for n in 0..=4u32 {
            for sol in heun::bethe_roots(n, &pr, None).unwrap() {
                let rep = verify::radial_residual(&sol, &pr, &verify::default_radial_grid()).unwrap();
                assert!(rep.passed, "n={n} branch={} max_rel={:e}", sol.indices.branch, rep.max_rel);
            }
        }
    }
}

#[test]
fn momentum_is_gradient_over_rho_squared() {
    let pr = PhysicalParams::natural(1.5, 0.4).unwrap();
    let t = classical::integrate_static(FieldState::new(0.3, -0.2, 0.1, 0.25), (0.0, 1.0), 1e-3, &pr).unwrap();
    let h = t.z_grid[1] - t.z_grid[0];
    for i in (1..t.states.len() - 1).step_by(97) {
        let (prev, cur, next) = (t.states[i - 1], t.states[i], t.states[i + 1]);
        let pz = (next.p - prev.p) / (2.0 * h);
        let qz = (next.q - prev.q) / (2.0 * h);
        let (pi_p, pi_q) = classical::momenta(cur.p, cur.q, pz, qz);
        assert!((pi_p - cur.pi_p).abs() < 1e-6 && (pi_q - cur.pi_q).abs() < 1e-6);
    }
}

#[test]
fn energy_is_conserved_with_field() {
    let pr = PhysicalParams::new(2.0, 0.8, 1.1, 0.9).unwrap();
    let drift = |step| {
        classical::integrate_static(FieldState::new(0.5, 0.1, -0.2, 0.3), (0.0, 5.0), step, &pr)
            .unwrap()
            .max_energy_drift()
    };
    let (coarse, fine) = (drift(1e-3), drift(5e-4));
    assert!(coarse < 1e-8, "{coarse:e}");
    // fourth-order method: halving the step should cut the drift roughly 16×
    assert!(fine < coarse / 8.0, "{coarse:e} -> {fine:e}");
}

#[test]
fn inplane_spectrum_with_field_matches_fd() {
    for &(b, hbar) in &[(1.0, 1.0), (-3.0, 0.8), (6.0, 1.2)] {
        let pr = PhysicalParams::new(0.0, b, 1.0, hbar).unwrap();
        let q = pr.q_inplane();
        let h2 = hbar * hbar;
        let mut exact: Vec<f64> = Vec::new();
        for k in 0..6 {
            let nu = k as f64;
            let mut push = |parity| {
                let e = mathieu::inplane_spectrum_with(&pr, &[nu], parity).unwrap()[0].energy;
                // the potential is bounded by |2q|, so each level sits within ħ²|q| of the free one
                assert!((e - 0.5 * h2 * nu * nu).abs() <= h2 * q.abs() + 1e-12);
                exact.push(e);
            };
            push(Parity::Even);
            if k > 0 {
                push(Parity::Odd);
            }
        }
        exact.sort_by(f64::total_cmp);
        let fd = verify::inplane_fd_energies(&pr, 1024, 6).unwrap();
        for (x, y) in exact.iter().zip(&fd) {
            assert!((x - y).abs() < 1e-7 * x.abs().max(1.0), "B={b}: {x} vs {y}");
        }
    }
}

#[test]
fn mathieu_residuals_small_on_coarse_grid() {
    let grid = verify::periodic_grid(64);
    for &nu in &[0.0, 1.0, 2.0, 3.0, 0.5, 1.25, 2.7] {
        for &q in &[-4.0, -0.3, 0.6, 5.0] {
            for parity in [Parity::Even, Parity::Odd] {
                if parity == Parity::Odd && nu == 0.0 {
                    continue;
                }
                let sol = mathieu::solve(nu, q, parity).unwrap();
                let rep = verify::mathieu_residual(&sol, &grid);
                assert!(rep.max_rel < 1e-8, "nu={nu} q={q} {parity:?}: {:e}", rep.max_rel);
            }
        }
    }
}

#[test]
fn truncation_grows_with_q_and_tail_is_negligible() {
    let small = mathieu::solve(2.0, 0.5, Parity::Even).unwrap();
    let large = mathieu::solve(2.0, 60.0, Parity::Even).unwrap();
    assert!(large.truncation() > small.truncation());
    for sol in [small, large] {
        let tail = sol.coefficients.last().unwrap().abs();
        assert!(tail < 1e-14, "tail {tail:e}");
    }
}

#[test]
fn raw_fd_ladder_at_zero_q() {
    // second-order stencil: λ_k = (4/h²) sin²(kh/2) ≈ k² − k⁴h²/12
    let nodes = 512;
    let h = 2.0 * core::f64::consts::PI / nodes as f64;
    let got = verify::fd_eigs_periodic(0.0, nodes, 7).unwrap();
    let ladder: [f64; 7] = [0.0, 1.0, 1.0, 4.0, 4.0, 9.0, 9.0];
    for (g, &k2) in got.iter().zip(&ladder) {
        let predicted = 4.0 / (h * h) * (0.5 * k2.sqrt() * h).sin().powi(2);
        assert!((g - predicted).abs() < 1e-9, "{g} vs {predicted}");
        assert!((g - k2).abs() <= k2 * k2 * h * h / 12.0 + 1e-9);
    }
}

#[test]
fn richardson_improves_on_raw_fd() {
    let q = 1.5;
    let exact = mathieu::characteristic_value(0.0, q).unwrap();
    let raw = verify::fd_eigs_periodic(q, 512, 1).unwrap()[0];
    let rich = verify::fd_eigs_periodic_richardson(q, 1024, 1).unwrap()[0];
    assert!((rich - exact).abs() < 0.01 * (raw - exact).abs());
}

#[test]
fn fd_oracles_reject_coarse_grids() {
    assert!(verify::fd_eigs_periodic(1.0, 128, 3).is_err());
    assert!(verify::fd_eigs_periodic_richardson(1.0, 510, 3).is_err());
}

#[test]
fn errors_are_classified() {
    let flat = PhysicalParams::natural(0.0, 0.0).unwrap();
    let e = heun::bethe_roots(1, &flat, None).unwrap_err();
    assert_eq!(e, Error::NonPositiveAnisotropy(0.0));
    assert_eq!(e.kind(), ErrorKind::Domain);
    assert_eq!(mathieu::inplane_eigenstate(1, 0.0, 0.0, 0.0, &flat).unwrap_err(), Error::UndefinedAngle);
    let field = PhysicalParams::natural(0.0, 1.0).unwrap();
    assert!(matches!(mathieu::inplane_eigenstate(1, 1.0, 0.0, 0.0, &field), Err(Error::FieldMustVanish(_))));
    assert!(heun::l_branches(0.0).is_err());
}

#[test]
fn offplane_wavefunction_uses_half_angle() {
    let sol = mathieu::solve(1.0, -0.25, Parity::Even).unwrap();
    for &p in &[-3.0, -0.5, 0.0, 0.4, 2.0] {
        let theta = mathieu::offplane_angle(p);
        assert!((1.0 / (0.5 * theta).tan() - p).abs() < 1e-12);
        assert_eq!(mathieu::offplane_wavefunction(&sol, p), sol.eval(theta));
    }
}
