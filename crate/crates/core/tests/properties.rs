//! Property tests for the invariants of each module.

use num_complex::Complex64;
use proptest::prelude::*;

use gravidiff::metrology::{sensitivity_report, WepVariation};
use gravidiff::model::{
    constants, convert_beam, kinetic_energy_from_temperature, Aperture, BeamConfig, BeamSpec, BeamSpecKind,
    FieldStrength, Grid, Species, UnitsMode,
};
use gravidiff::nonparaxial::{
    airy_quotient, kernel_k, nearzone_single_slit, NonparaxialParams, QuadratureSpec, QuotientMode,
};
use gravidiff::paraxial::{on_axis_single, slit_amplitude, FocusConstant};
use gravidiff::quasitime::QuasiTimeMap;
use gravidiff::reference::{Bouncer, BouncerBasis};
use gravidiff::specfun::fresnel_f;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn beam_forms_round_trip(m in 0.1f64..10.0, g in 0.1f64..10.0, v in 0.0f64..5.0, z0 in -2.0f64..2.0) {
        let species = Species::with_mass("p", m).unwrap();
        let field = FieldStrength::new(g).unwrap();
        let canon = convert_beam(&BeamConfig::downward(BeamSpec::Speed { v, z0 }), &species, &field).unwrap();
        prop_assert!(close(canon.energy, 0.5 * m * v * v + m * g * z0, 1e-14));
        for kind in [BeamSpecKind::TotalEnergy, BeamSpecKind::KineticEnergy, BeamSpecKind::Speed] {
            let spec = canon.to_spec(&species, kind);
            let back = convert_beam(&BeamConfig::downward(spec), &species, &field).unwrap();
            prop_assert!(close(back.energy, canon.energy, 1e-14));
            let scale = canon.energy.abs() + m * g * z0.abs();
            prop_assert!((back.speed.powi(2) - canon.speed.powi(2)).abs() * 0.5 * m <= 1e-14 * scale.max(1e-300));
            prop_assert_eq!(back.z0, canon.z0);
        }
    }

    #[test]
    fn temperature_is_linear(t in 0.0f64..1e4) {
        let e = kinetic_energy_from_temperature(t).unwrap();
        prop_assert_eq!(kinetic_energy_from_temperature(2.0 * t).unwrap(), 2.0 * e);
    }

    #[test]
    fn fresnel_is_odd_and_bounded(x in -10.0f64..10.0) {
        let f = fresnel_f(Complex64::new(x, 0.0));
        prop_assert_eq!(f, -fresnel_f(Complex64::new(-x, 0.0)));
        prop_assert!(f.norm_sqr() <= std::f64::consts::FRAC_PI_4 + 0.65);
    }

    #[test]
    fn quasitime_branches(e in 0.1f64..5.0, f in 0.1f64..5.0, m in 0.1f64..5.0, z in -5.0f64..5.0) {
        let map = QuasiTimeMap::new(e, f, m, 1.0).unwrap();
        let q = map.tau_of_z(z);
        prop_assert_eq!(q.classical, q.tau.im == 0.0);
        prop_assert_eq!(q.classical, z <= map.turning_point());
        if z < map.turning_point() {
            prop_assert!(map.dtau_dz(z) < 0.0);
        }
    }

    #[test]
    fn quasitime_continuous_at_turning_point(e in 0.1f64..5.0, f in 0.1f64..5.0, m in 0.1f64..5.0) {
        let map = QuasiTimeMap::new(e, f, m, 1.0).unwrap();
        let zt = map.turning_point();
        let limit = -(2.0 * m * e).sqrt() / f;
        let below = map.tau_of_z(zt * (1.0 - 1e-12)).tau;
        let above = map.tau_of_z(zt * (1.0 + 1e-12)).tau;
        prop_assert!((below - limit).norm() < 1e-5 * limit.abs());
        prop_assert!((above - limit).norm() < 1e-5 * limit.abs());
    }

    #[test]
    fn amplitude_depends_on_force_only_through_tau(
        f in 0.1f64..10.0, e in 0.5f64..4.0, x in -2.0f64..2.0, z in -3.0f64..-0.01
    ) {
        let ap = Aperture::single(1.0).unwrap();
        let map = QuasiTimeMap::new(e, f, 1.0, 1.0).unwrap();
        let free = QuasiTimeMap::new(e, 0.0, 1.0, 1.0).unwrap();
        let tau = map.tau_of_z(z).tau.re;
        let z_free = free.z_of_tau(tau).unwrap();
        let d = slit_amplitude(x, z, &ap, &map) - slit_amplitude(x, z_free, &ap, &free);
        prop_assert!(d.norm() < 1e-10);
    }

    #[test]
    fn coincident_double_slit_is_root_two_single(x in -2.0f64..2.0, z in -3.0f64..-0.01) {
        let map = QuasiTimeMap::new(2.0, 5.0, 1.0, 1.0).unwrap();
        let merged = Aperture::Double { width: 1.0, half_separation: 0.0 };
        let single = Aperture::single(1.0).unwrap();
        let d = slit_amplitude(x, z, &merged, &map) - std::f64::consts::SQRT_2 * slit_amplitude(x, z, &single, &map);
        prop_assert!(d.norm() < 1e-12);
    }

    #[test]
    fn on_axis_identity(z in -5.0f64..-1e-3) {
        let map = QuasiTimeMap::new(2.0, 5.0, 1.0, 1.0).unwrap();
        let ap = Aperture::single(1.0).unwrap();
        prop_assert!((on_axis_single(z, 1.0, &map) - slit_amplitude(0.0, z, &ap, &map)).norm() < 1e-10);
    }

    #[test]
    fn upward_decay_on_axis(z in 0.751f64..3.0) {
        let map = QuasiTimeMap::new(3.0, 4.0, 1.0, 1.0).unwrap();
        let ap = Aperture::double(1.0, 1.0).unwrap();
        let a = slit_amplitude(0.0, z, &ap, &map).norm();
        let b = slit_amplitude(0.0, z + 1e-3, &ap, &map).norm();
        prop_assert!(b < a);
    }

    #[test]
    fn parity(x in 0.0f64..3.0, z in -3.0f64..-0.01, a in 0.6f64..2.0) {
        let map = QuasiTimeMap::new(2.0, 5.0, 1.0, 1.0).unwrap();
        let ap = Aperture::double(1.0, a).unwrap();
        let d = slit_amplitude(x, z, &ap, &map).norm() - slit_amplitude(-x, z, &ap, &map).norm();
        prop_assert!(d.abs() < 1e-12);
    }

    #[test]
    fn grid_nodes_are_row_major(nx in 1usize..20, nz in 1usize..20, k in 0usize..400) {
        let g = Grid::new(-1.0, 1.0, nx, -2.0, 0.0, nz).unwrap();
        let k = k % g.len();
        prop_assert_eq!(g.node(k), (g.x(k % nx), g.z(k / nx)));
    }

    #[test]
    fn airy_quotient_solves_the_longitudinal_equation(
        e in 0.0f64..3.0, f in 0.2f64..3.0, k in 0.0f64..3.0, z in -2.0f64..-0.05
    ) {
        let p = NonparaxialParams::new(e, f, 1.0, 1.0).unwrap();
        let q = |z: f64| airy_quotient(z, k, &p, QuotientMode::Exact).unwrap();
        let h = 3e-4;
        let d2 = (q(z + h) - 2.0 * q(z) + q(z - h)) / (h * h);
        // −(1/2)ψ'' + F z ψ = ε ψ
        let lhs = -0.5 * d2 + f * z * q(z);
        let rhs = p.epsilon(k) * q(z);
        prop_assert!((lhs - rhs).norm() <= 1e-6 * (rhs.norm() + (f * z * q(z)).norm() + d2.norm()));
    }

    #[test]
    fn quotient_modes_agree_deep_in_the_oscillatory_region(ge in 8.0f64..30.0, frac in 0.0f64..0.1) {
        let p = NonparaxialParams::new(0.0, 1.0, 1.0, 1.0).unwrap();
        let k = 0.0;
        let shifted = NonparaxialParams { energy: ge / p.gamma, ..p };
        let z = -frac * ge / p.kappa;
        let exact = airy_quotient(z, k, &shifted, QuotientMode::Exact).unwrap();
        let asym = airy_quotient(z, k, &shifted, QuotientMode::Asymptotic).unwrap();
        prop_assert!((exact - asym).norm() < 1e-3);
    }

    #[test]
    fn bouncer_wkb_accuracy(n in 1usize..30) {
        let b = Bouncer::new(&Species::model_unit(), &FieldStrength::new(1.0).unwrap(), UnitsMode::Model).unwrap();
        let exact = b.level(n, BouncerBasis::ExactAiry).unwrap();
        let wkb = b.level(n, BouncerBasis::WkbTextbook).unwrap();
        let tol = if n >= 5 { 1e-3 } else { 1e-2 };
        prop_assert!(((wkb - exact) / exact).abs() < tol);
    }

    #[test]
    fn bohr_frequency_factorizes(m in 0.1f64..10.0, g in 0.1f64..10.0, n in 1usize..6, np in 1usize..6) {
        let unit = Bouncer::new(&Species::model_unit(), &FieldStrength::new(1.0).unwrap(), UnitsMode::Model).unwrap();
        let b = Bouncer::new(&Species::with_mass("p", m).unwrap(), &FieldStrength::new(g).unwrap(), UnitsMode::Model).unwrap();
        for basis in [BouncerBasis::ExactAiry, BouncerBasis::WkbPaper, BouncerBasis::WkbTextbook] {
            let w = b.bohr_frequency(n, np, basis).unwrap();
            let w1 = unit.bohr_frequency(n, np, basis).unwrap();
            // (m/ħ)^{1/3} (F/m)^{2/3} with F = m g
            let scale = m.cbrt() * g.powf(2.0 / 3.0);
            prop_assert!((w - scale * w1).abs() <= 1e-12 * w.abs().max(1.0));
            prop_assert_eq!(w, -b.bohr_frequency(np, n, basis).unwrap());
        }
    }

    #[test]
    fn focus_decomposition_and_response(e_ev in 0.0f64..1e-2, eps in -1e-3f64..1e-3, l_exp in -5.0f64..-3.0) {
        let n = Species::neutron();
        let field = FieldStrength::default();
        let width = 10f64.powf(l_exp);
        let e = e_ev * constants::EV;
        let report = |v: WepVariation| {
            sensitivity_report(&n, &field, e, width, &v, UnitsMode::Si, FocusConstant::Solved).unwrap()
        };
        let r0 = report(WepVariation::default());
        let cross = r0.c_star * width * width * (2.0 * n.m_inertial * e).sqrt() / constants::HBAR;
        prop_assert!((r0.z_focus_0 + r0.z_focus_prime_0 + cross).abs() <= 1e-12 * r0.z_focus_0.abs());
        prop_assert!(r0.z_focus_0 < 0.0);
        let r1 = report(WepVariation { delta_g_over_g: eps, delta_mg_over_mi: 0.0 });
        let r2 = report(WepVariation { delta_g_over_g: 2.0 * eps, delta_mg_over_mi: 0.0 });
        let d1 = r1.z_focus_shifted - r0.z_focus_shifted;
        let d2 = r2.z_focus_shifted - r0.z_focus_shifted;
        prop_assert!((d2 - 2.0 * d1).abs() <= 8.0 * f64::EPSILON * r0.z_focus_0.abs());
        prop_assert!((d1 - r1.epsilon * r0.z_focus_prime_0).abs() <= 8.0 * f64::EPSILON * r0.z_focus_0.abs().max(r0.z_focus_prime_0.abs()));
        let via_mass = report(WepVariation { delta_g_over_g: 0.0, delta_mg_over_mi: eps });
        prop_assert_eq!(via_mass.epsilon, r1.epsilon);
    }
}

#[test]
fn fresnel_first_maximum_is_finite() {
    let i = |x: f64| fresnel_f(Complex64::new(x, 0.0)).norm_sqr();
    let xs: Vec<f64> = (1..500).map(|k| k as f64 * 0.01).collect();
    let peak = xs.iter().copied().fold(0.0, |best, x| if i(x) > i(best) { x } else { best });
    assert!(peak > 0.5 && peak < 2.5, "{peak}");
    assert!(i(peak) > i(50.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn kernel_is_even(dx in 0.05f64..1.0, z in -1.0f64..-0.05) {
        let p = NonparaxialParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let spec = QuadratureSpec::default();
        let a = kernel_k(dx, z, &p, &spec).unwrap().value;
        let b = kernel_k(-dx, z, &p, &spec).unwrap().value;
        prop_assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn species_changes_the_near_zone(x in -0.4f64..0.4, z in -0.2f64..-0.01) {
        let spec = QuadratureSpec::default();
        let light = NonparaxialParams::new(0.0, 1.0, 1.0, 1.0).unwrap();
        let heavy = NonparaxialParams::new(0.0, 2.0, 2.0, 1.0).unwrap();
        let a = nearzone_single_slit(x, z, 1.0, &light, &spec).unwrap().value.norm_sqr();
        let b = nearzone_single_slit(x, z, 1.0, &heavy, &spec).unwrap().value.norm_sqr();
        prop_assert!((a - b).abs() > 1e-8);
    }
}
