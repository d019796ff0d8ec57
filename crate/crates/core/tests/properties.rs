use std::f64::consts::PI;

use num_bigint::BigUint;
use proptest::prelude::*;
use sixvertex::closedform::{a_total, ode_residual_a, recursion_check, refined_row};
use sixvertex::enumerate::{brute_z, enumerate_states};
use sixvertex::ikdet::ik_z;
use sixvertex::model::{asm_from_state, state_from_asm, state_weight, Letter, GENERIC_THRESHOLD};
use sixvertex::rootuni::{cyclic_residual, f_from_z, union_symmetry_residual, TrigPoly};
use sixvertex::{SpectralConfig, WeightConvention};

fn generic_config(n: usize, eta: f64) -> impl Strategy<Value = SpectralConfig> {
    (
        prop::collection::vec(0.0..PI / 2.0, n),
        prop::collection::vec(0.0..PI / 2.0, n),
    )
        .prop_filter_map("near-degenerate parameters", move |(xs, ys)| {
            let cfg = SpectralConfig::new(eta, xs, ys).ok()?;
            // keep clear of the weight zeros too
            let ok = cfg.is_generic(0.05)
                && cfg.xs().iter().all(|x| {
                    cfg.ys()
                        .iter()
                        .all(|y| ((x - y + eta / 2.0).sin() * (x - y - eta / 2.0).sin()).abs() > 1e-3)
                });
            ok.then_some(cfg)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn state_asm_round_trip(n in 1usize..=5, pick in any::<prop::sample::Index>()) {
        let states = enumerate_states(n).unwrap();
        let s = &states[pick.index(states.len())];
        let asm = asm_from_state(s);
        prop_assert_eq!(&state_from_asm(&asm), s);
        prop_assert_eq!(asm_from_state(&state_from_asm(&asm)), asm.clone());
        // c vertices are exactly the nonzero entries
        let nonzero = asm.entries().iter().filter(|&&e| e != 0).count();
        prop_assert_eq!(s.count_letter(Letter::C), nonzero);
    }

    #[test]
    fn signed_weight_is_signed_count(n in 1usize..=4, pick in any::<prop::sample::Index>(), delta in -0.5f64..0.5) {
        let states = enumerate_states(n).unwrap();
        let s = &states[pick.index(states.len())];
        let cfg = SpectralConfig::new(2.0 * PI / 3.0, vec![delta; n], vec![0.0; n]).unwrap();
        let signed = state_weight(s, &cfg, WeightConvention::Signed).unwrap();
        let counting = state_weight(s, &cfg, WeightConvention::Counting).unwrap();
        let sign = if s.count_letter(Letter::B) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((signed - sign * counting).abs() <= 1e-13 * counting.abs().max(1.0));
    }

    #[test]
    fn determinant_equals_state_sum(
        n in 2usize..=4,
        eta in 0.3f64..2.8,
        seed in prop::collection::vec(0.0f64..PI / 2.0, 8),
    ) {
        let cfg = SpectralConfig::new(eta, seed[..n].to_vec(), seed[4..4 + n].to_vec()).unwrap();
        prop_assume!(cfg.is_generic(0.05));
        let z = ik_z(&cfg).unwrap();
        let b = brute_z(&cfg, WeightConvention::Signed).unwrap();
        let scale = z.abs().max(b.abs()).max(1e-3);
        prop_assert!((z - b).abs() <= 1e-8 * scale, "{} vs {}", z, b);
    }

    #[test]
    fn partition_function_symmetric_in_each_family(cfg in generic_config(3, 1.3)) {
        let z = ik_z(&cfg).unwrap();
        let mut xs = cfg.xs().to_vec();
        xs.swap(0, 2);
        let mut ys = cfg.ys().to_vec();
        ys.swap(0, 1);
        let permuted = SpectralConfig::new(cfg.eta(), xs, ys).unwrap();
        let zp = ik_z(&permuted).unwrap();
        prop_assert!((z - zp).abs() <= 1e-9 * z.abs().max(1e-3));
    }

    #[test]
    fn union_symmetry_at_cube_root(cfg in generic_config(3, 2.0 * PI / 3.0)) {
        prop_assume!(ik_z(&cfg).unwrap().abs() > 1e-6);
        prop_assert!(union_symmetry_residual(&cfg).unwrap() < 1e-7);
    }

    #[test]
    fn cyclic_law_at_cube_root(cfg in generic_config(3, 2.0 * PI / 3.0)) {
        let f = f_from_z(&cfg).unwrap();
        prop_assert_eq!(f.parity(), -1);
        prop_assert!(cyclic_residual(&f) < 1e-9);
    }

    #[test]
    fn trig_poly_from_sines_has_odd_symmetry(
        d in 1usize..=10,
        amps in prop::collection::vec(-2.0f64..2.0, 11),
        u in -3.0f64..3.0,
    ) {
        let terms: Vec<(i64, f64)> = (0..=d)
            .map(|k| d as i64 - 2 * k as i64)
            .filter(|&w| w > 0)
            .zip(amps)
            .collect();
        let p = TrigPoly::from_sines(d, &terms).unwrap();
        let direct: f64 = terms.iter().map(|&(w, a)| a * (w as f64 * u).sin()).sum();
        prop_assert!((p.eval(u).re - direct).abs() < 1e-12 * (1.0 + direct.abs()));
        prop_assert!(p.eval(u).im.abs() < 1e-12);
        prop_assert!((p.eval(-u) + p.eval(u)).norm() < 1e-12);
        let shifted = p.eval(u + PI);
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((shifted - p.eval(u) * sign).norm() < 1e-11);
    }

    #[test]
    fn refined_row_palindromic_and_sums_to_total(n in 1usize..=40) {
        let row = refined_row(n).unwrap();
        for k in 0..n {
            prop_assert_eq!(&row[k], &row[n - 1 - k]);
        }
        prop_assert_eq!(row.iter().sum::<BigUint>(), a_total(n).unwrap());
        prop_assert!(ode_residual_a(n).unwrap().is_zero());
        for r in 1..n {
            prop_assert!(recursion_check(n, r).unwrap());
        }
    }
}

#[test]
fn generic_threshold_rejects_coincident_parameters() {
    let cfg = SpectralConfig::new(1.0, vec![0.3, 0.3 + 1e-10], vec![0.9, 1.4]).unwrap();
    assert!(!cfg.is_generic(GENERIC_THRESHOLD));
    assert!(ik_z(&cfg).is_err());
}
