use std::f64::consts::PI;

use abscat::asymptotics::leading_a;
use abscat::delta::{beta_phase, build_delta_data, delta, nu_value, Endpoint};
use abscat::local_model::{beta12_minus, beta12_plus, jump_defect, local_model_from_values, model_jump, n_matrix_for};
use abscat::matrix::Mat2;
use abscat::model::{InitialData, ModelParameters, Profile};
use abscat::numerics::gamma::complex_gamma;
use abscat::numerics::quadrature::{cumtrapz_uniform, linspace, QuadratureSpec};
use abscat::pde::{rhs_with, EvolveConfig, FieldState};
use abscat::phase::{decay_sign, Decay, RayCoordinates};
use abscat::scattering::{evolution_phase, reflection, ScatteringData};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn smooth_reflection(amp: f64, width: f64, phase: f64) -> ScatteringData {
    let z: Vec<f64> = linspace(-4.0, 4.0, 801).into_iter().filter(|s| s.abs() >= 0.05 - 1e-12).collect();
    let r = z.iter().map(|&s| C64::from_polar(amp * (-s * s / width).exp(), phase * s)).collect();
    ScatteringData::from_reflection(z, r).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_recurrence(re in -4.5f64..4.5, im in 0.05f64..4.0, flip in any::<bool>()) {
        let w = c(re, if flip { -im } else { im });
        let g1 = complex_gamma(w + 1.0).unwrap();
        let g0 = complex_gamma(w).unwrap();
        prop_assert!((g1 - w * g0).norm() <= 1e-12 * g1.norm());
        prop_assert!((complex_gamma(w.conj()).unwrap() - g0.conj()).norm() <= 1e-13 * g0.norm());
    }

    #[test]
    fn nu_inverts_the_modulus(a in 0.0f64..0.99) {
        let nu = nu_value(a).unwrap();
        prop_assert!(nu >= 0.0);
        prop_assert!(((1.0 - (-2.0 * PI * nu).exp()).sqrt() - a).abs() <= 1e-12);
    }

    #[test]
    fn beta_modulus_is_nu(m in 0.01f64..0.95, arg in -PI..PI) {
        let r = C64::from_polar(m, arg);
        let nu = nu_value(m).unwrap();
        prop_assert!((beta12_plus(r).unwrap().norm_sqr() - nu).abs() <= 1e-10 * nu.max(1e-3));
        prop_assert!((beta12_minus(r).unwrap().norm_sqr() - nu).abs() <= 1e-10 * nu.max(1e-3));
    }

    #[test]
    fn evolution_phase_is_a_unimodular_flow(z in 0.05f64..4.0, neg in any::<bool>(), t1 in 0.0f64..50.0, t2 in 0.0f64..50.0) {
        let z = if neg { -z } else { z };
        let p = ModelParameters::default();
        let a = evolution_phase(z, t1, &p);
        let b = evolution_phase(z, t2, &p);
        prop_assert!((a.norm() - 1.0).abs() <= 1e-15);
        prop_assert!((a * b - evolution_phase(z, t1 + t2, &p)).norm() <= 1e-11 * (1.0 + (t1 + t2) / z.abs()));
    }

    #[test]
    fn decay_sign_matches_the_closed_form(z0 in 0.2f64..3.0, t in 1.0f64..100.0, re in -5.0f64..5.0, im in 0.01f64..5.0, lower in any::<bool>()) {
        let ray = RayCoordinates::from_z0(-1.0, z0, t).unwrap();
        let z = c(re, if lower { -im } else { im });
        // Re(2 i t theta) = -Im z (2x - |alpha| t / (2|z|^2))
        let outside = z.norm() > z0;
        prop_assume!((z.norm() - z0).abs() > 1e-6);
        let want = if (z.im > 0.0) == outside { Decay::Decays } else { Decay::Grows };
        prop_assert_eq!(decay_sign(z, &ray).unwrap(), want);
    }

    #[test]
    fn leading_term_scales_like_t_to_minus_half(m1 in 0.05f64..0.9, m2 in 0.05f64..0.9, a1 in -PI..PI, a2 in -PI..PI, z0 in 0.2f64..3.0, t in 1.0f64..100.0) {
        let lm = local_model_from_values(z0, C64::from_polar(m1, a1), C64::from_polar(m2, a2), c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let a = leading_a(&lm, &RayCoordinates::from_z0(-1.0, z0, t).unwrap()).norm();
        let b = leading_a(&lm, &RayCoordinates::from_z0(-1.0, z0, 4.0 * t).unwrap()).norm();
        prop_assert!((b / a - 0.5).abs() <= 1e-14);
        prop_assert!(a <= 8.0 * (lm.nu_plus.max(lm.nu_minus) / t).sqrt() * z0.sqrt());
    }

    #[test]
    fn mat2_inverse(v in proptest::collection::vec(-3.0f64..3.0, 8)) {
        let m = Mat2::new(c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]), c(v[6], v[7]));
        prop_assume!(m.det().norm() > 1e-3);
        prop_assert!(((m * m.inv()) - Mat2::identity()).max_abs() <= 1e-12 / m.det().norm().min(1.0));
    }

    #[test]
    fn cumulative_trapezoid_is_exact_for_lines(a in -5.0f64..5.0, b in -5.0f64..5.0, n in 2usize..200) {
        let h = 0.1;
        let f: Vec<f64> = (0..n).map(|i| a + b * h * i as f64).collect();
        let mut out = vec![0.0; n];
        cumtrapz_uniform(h, &f, &mut out);
        for (i, v) in out.iter().enumerate() {
            let x = h * i as f64;
            prop_assert!((v - (a * x + 0.5 * b * x * x)).abs() <= 1e-11);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn repaired_models_solve_their_jump(m in 0.02f64..0.8, arg in -PI..PI, k in 0.3f64..3.0, neg in any::<bool>(), plus in any::<bool>()) {
        let rho = C64::from_polar(m, arg);
        let k = if neg { -k } else { k };
        let ep = if plus { Endpoint::Plus } else { Endpoint::Minus };
        let up = n_matrix_for(ep, c(k, 1e-12), rho).unwrap();
        let dn = n_matrix_for(ep, c(k, -1e-12), rho).unwrap();
        prop_assert!(jump_defect(up, dn, model_jump(rho)) <= 1e-6);
        let d1 = n_matrix_for(ep, c(k, 0.7), rho).unwrap().det();
        let d2 = n_matrix_for(ep, c(-0.4 * k, -1.1), rho).unwrap().det();
        prop_assert!((d1 - d2).norm() <= 1e-8);
    }

    #[test]
    fn delta_schwarz_symmetry_and_unimodularity(amp in 0.05f64..0.9, width in 0.5f64..4.0, phase in -1.0f64..1.0, z0 in 0.3f64..2.5, re in -4.0f64..4.0, im in 0.05f64..3.0) {
        let sd = smooth_reflection(amp, width, phase);
        let spec = QuadratureSpec::default();
        let ray = RayCoordinates::from_z0(-1.0, z0, 10.0).unwrap();
        let dd = build_delta_data(&sd, &ray, &spec).unwrap();
        let z = c(re, im);
        let d = delta(z, &dd, &spec).unwrap();
        prop_assert!((d * delta(z.conj(), &dd, &spec).unwrap().conj() - 1.0).norm() <= 1e-10);
        let s = z0 + 0.1 + re.abs();
        prop_assert!((delta(c(s, 0.0), &dd, &spec).unwrap().norm() - 1.0).abs() <= 1e-10);
        prop_assert!((delta(c(-s, 0.0), &dd, &spec).unwrap().norm() - 1.0).abs() <= 1e-10);
        prop_assert!((dd.delta0_plus.norm() - 1.0).abs() <= 1e-10);
        prop_assert!((dd.delta0_minus.norm() - 1.0).abs() <= 1e-10);
        // delta0 is the endpoint value of delta (z -/+ z0)^{-/+ i nu}
        let b = beta_phase(c(z0, 0.0), Endpoint::Plus, &dd, &spec).unwrap();
        prop_assert!(((C64::i() * b).exp() - dd.delta0_plus).norm() <= 1e-14);
    }

    #[test]
    fn fixed_point_residual_by_substitution(amp in 0.05f64..0.5, gauss in any::<bool>()) {
        let profile = if gauss { Profile::Gauss } else { Profile::Sech };
        let d = InitialData::symmetric(profile, amp, 20.0, 512).unwrap();
        let s = FieldState::from_initial(&d);
        let p = ModelParameters::default();
        let cfg = EvolveConfig::default();
        let r = rhs_with(&s.a, &s.b, s.h(), &p, &cfg).unwrap();
        let g: Vec<f64> = (0..s.n()).map(|i| (s.a[i].conj() * r.a_t[i]).re).collect();
        let mut b = vec![0.0; s.n()];
        cumtrapz_uniform(s.h(), &g, &mut b);
        let scale = r.b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..s.n() {
            prop_assert!((-p.gamma * b[i] - r.b[i]).abs() <= 1e-11 * scale);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn scattering_is_unitary(amp in 0.05f64..1.0, gauss in any::<bool>(), shift in -3.0f64..3.0, zs in proptest::collection::vec(0.05f64..4.0, 4)) {
        let n = 2048;
        let x = linspace(-25.0, 25.0, n);
        let profile = if gauss { Profile::Gauss } else { Profile::Sech };
        let a0 = x.iter().map(|&x| C64::from_polar(profile.eval(amp, x - shift), 0.4 * x)).collect();
        let d = InitialData::new(-25.0, 25.0, a0, vec![0.0; n]).unwrap();
        let mut grid: Vec<f64> = zs.iter().flat_map(|&z| [-z, z]).collect();
        grid.sort_by(|a, b| a.total_cmp(b));
        grid.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let sd = reflection(&d, &grid).unwrap();
        prop_assert!(sd.unitarity_defect <= 1e-6);
        prop_assert!(sd.max_abs_r() < 1.0);
        prop_assert!(sd.symmetry_defect <= 1e-8);
    }
}
