//! Property tests for the structural invariants of occupancy curves and
//! generators.

use num::rational::BigRational;
use num::BigInt;
use proptest::prelude::*;

use powerlaw_lab::law::DiscreteLaw;
use powerlaw_lab::occupancy::{
    expected_types, expected_types_delta, hausdorff_atoms, reconstruct_from_hausdorff,
    spectrum_row,
};
use powerlaw_lab::rational::{expected_types_table, spectrum_element, taylor_element, RationalLaw};
use powerlaw_lab::sources::{sample_narration, ProcessSpec};

fn weights() -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(1u32..100, 1..7)
}

fn law_from_weights(ws: &[u32]) -> DiscreteLaw {
    let total: f64 = ws.iter().map(|&w| f64::from(w)).sum();
    DiscreteLaw::from_masses(ws.iter().map(|&w| f64::from(w) / total).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn occupancy_curve_is_monotone_concave(ws in weights()) {
        let law = law_from_weights(&ws);
        let v: Vec<f64> = (0..=30).map(|t| expected_types(&law, t)).collect();
        prop_assert_eq!(v[0], 0.0);
        for t in 1..v.len() {
            prop_assert!(v[t] + 1e-12 >= v[t - 1]);
        }
        let dv: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
        for i in 1..dv.len() {
            prop_assert!(dv[i] <= dv[i - 1] + 1e-12);
        }
        // ΔV from the closed form agrees with differencing.
        for t in 0..10u64 {
            let direct = expected_types_delta(&law, t);
            prop_assert!((direct - dv[t as usize]).abs() < 1e-10);
        }
    }

    #[test]
    fn measure_roundtrip_reproduces_expected_types(ws in weights(), t in 0u64..100_000) {
        let law = law_from_weights(&ws);
        let mu = hausdorff_atoms(&law);
        prop_assert!((mu.total_mass() - 1.0).abs() < 1e-12);
        let rebuilt = reconstruct_from_hausdorff(&mu, t);
        prop_assert!((rebuilt - expected_types(&law, t)).abs() < 1e-10);
    }

    #[test]
    fn spectrum_consistency_sums(ws in weights(), t in 1u64..60) {
        let law = law_from_weights(&ws);
        let row = spectrum_row(&law, t, t).unwrap();
        let total: f64 = row.iter().sum();
        let weighted: f64 = row.iter().enumerate().map(|(i, x)| (i + 1) as f64 * x).sum();
        prop_assert!((total - expected_types(&law, t)).abs() < 1e-9);
        prop_assert!((weighted - t as f64).abs() < 1e-9);
    }

    #[test]
    fn rational_spectrum_equals_taylor(ws in proptest::collection::vec(1u64..20, 1..6), t in 1u64..14) {
        let den: u64 = ws.iter().sum();
        let law = RationalLaw::from_integers(&ws, den).unwrap();
        let table = expected_types_table(&law, t).unwrap();
        for m in 1..=t {
            prop_assert_eq!(
                spectrum_element(&law, t, m).unwrap(),
                taylor_element(&table, t, m).unwrap()
            );
        }
    }

    #[test]
    fn rational_and_float_expected_types_agree(ws in proptest::collection::vec(1u64..20, 1..6), t in 0u64..30) {
        let den: u64 = ws.iter().sum();
        let rlaw = RationalLaw::from_integers(&ws, den).unwrap();
        let flaw = DiscreteLaw::from_masses(rlaw.to_f64_masses()).unwrap();
        let exact = expected_types_table(&rlaw, t).unwrap()[t as usize].clone();
        let approx = expected_types(&flaw, t);
        let exact_f = rational_to_f64(&exact);
        prop_assert!((approx - exact_f).abs() < 1e-9, "t={} exact={} approx={}", t, exact_f, approx);
    }

    #[test]
    fn narration_is_deterministic_in_the_seed(ws in weights(), seed in any::<u64>()) {
        let spec = ProcessSpec::Iid(law_from_weights(&ws));
        let a = sample_narration(&spec, 256, seed).unwrap();
        let b = sample_narration(&spec, 256, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let scale = BigInt::from(1u64 << 60);
    let scaled = (r * BigRational::from_integer(scale.clone())).round();
    let s: f64 = scaled.numer().to_string().parse().unwrap();
    s / (1u64 << 60) as f64
}
