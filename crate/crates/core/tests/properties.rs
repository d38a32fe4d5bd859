//! Property tests for the algebraic invariants.

use ccilab_core::lattice::{build_scatter, field_distance, SField, ScatterWindow};
use ccilab_core::operator::{apply_u, apply_u_adjoint, parity_apply, Closure, StateVector, Window};
use ccilab_core::C64;
use proptest::prelude::*;

fn near_manifold_scatter() -> impl Strategy<Value = (C64, C64, C64)> {
    (
        0.0..std::f64::consts::TAU,
        -1.0..1.0f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
        -5e-10..5e-10f64,
    )
        .prop_filter_map("degenerate (r, t)", |(theta, a, b, c, d, eps)| {
            let norm = (a * a + b * b + c * c + d * d).sqrt();
            if norm < 1e-3 {
                return None;
            }
            let q = C64::from_polar(1.0 + eps, theta);
            let scale = (1.0 + eps) / norm;
            Some((
                q,
                C64::new(a * scale, b * scale),
                C64::new(c * scale, d * scale),
            ))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalized_scatter_is_unitary((q, r, t) in near_manifold_scatter()) {
        let s = build_scatter(q, r, t).unwrap();
        prop_assert!(s.unitarity_defect() <= 1e-12);
        prop_assert!((s.q().norm() - 1.0).abs() <= 1e-14);
        prop_assert!((s.r().norm_sqr() + s.t().norm_sqr() - 1.0).abs() <= 1e-14);
        // normalizing an already normalized matrix changes nothing
        let again = build_scatter(s.q(), s.r(), s.t()).unwrap();
        prop_assert!(s.param_distance(&again) <= 1e-14);
    }

    #[test]
    fn metric_axioms(seed_a in 0u64..1000, seed_b in 0u64..1000, seed_c in 0u64..1000) {
        let window = ScatterWindow::new(-3, 3, -2, 2);
        let a = SField::seeded(-2, 2, seed_a).unwrap();
        let b = SField::seeded(-2, 2, seed_b).unwrap();
        let c = SField::seeded(-2, 2, seed_c).unwrap();
        let dab = field_distance(&a, &b, &window).unwrap();
        let dba = field_distance(&b, &a, &window).unwrap();
        let dac = field_distance(&a, &c, &window).unwrap();
        let dcb = field_distance(&c, &b, &window).unwrap();
        prop_assert_eq!(dab, dba);
        prop_assert!(dab <= dac + dcb + 1e-12);
        prop_assert!(dab >= 0.0);
        if seed_a == seed_b {
            prop_assert!(dab <= 1e-12);
        }
    }

    #[test]
    fn evolution_is_unitary(seed in 0u64..500, state_seed in 0u64..500) {
        let field = SField::from_config(&ccilab_core::lattice::ModelConfig {
            n_left: -1,
            n_right: 2,
            seed,
            deterministic_phases: false,
            vertical_period: 4,
            overrides: Vec::new(),
        }).unwrap();
        let strip = field.strip();
        let window = Window::new(strip.lo(), strip.hi(), -4, 3).unwrap();
        let psi = StateVector::seeded_random(window, Closure::TorusVertical, state_seed).unwrap();
        let upsi = apply_u(&field, &psi).unwrap();
        prop_assert!((upsi.norm() - 1.0).abs() <= 1e-12);
        let mut back = apply_u_adjoint(&field, &upsi).unwrap();
        back.add_scaled(&psi, C64::new(-1.0, 0.0)).unwrap();
        prop_assert!(back.norm() <= 1e-12);
        // parity anticommutes
        let mut anti = parity_apply(&apply_u(&field, &parity_apply(&psi)).unwrap());
        anti.add_scaled(&upsi, C64::new(1.0, 0.0)).unwrap();
        prop_assert!(anti.norm() <= 1e-12);
    }

    #[test]
    fn state_json_roundtrip(state_seed in 0u64..1000) {
        let window = Window::new(-2, 3, -1, 2).unwrap();
        let psi = StateVector::seeded_random(window, Closure::Open, state_seed).unwrap();
        let back = StateVector::from_json(&psi.to_json()).unwrap();
        prop_assert_eq!(back.window(), psi.window());
        for (site, amp) in psi.support() {
            prop_assert_eq!(back.get(site.j, site.k), amp);
        }
    }
}
