//! Seeded invariants across modules.

use proptest::prelude::*;

use rtl_core::bounds::{self, BoundInput, BoundKind, BoundValue};
use rtl_core::channels::Channel;
use rtl_core::discrimination::{avg_recovery_error, helstrom, helstrom_closed_form, irreversibility, recovery_from_povm, TestEnsemble};
use rtl_core::qcore::info::{fidelity, trace_distance, vn_entropy};
use rtl_core::qcore::random;
use rtl_core::resources::{gibbs_state, ResourceMeasure};
use rtl_core::{CompositeSpace, Observable};

fn space(d: usize) -> CompositeSpace {
    CompositeSpace::single(d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_channels_are_cptp(seed in any::<u64>(), di in 2usize..4, dout in 1usize..4, rank in 1usize..4) {
        let mut r = random::rng(seed);
        let ch = Channel::random(space(di), space(dout), rank, &mut r);
        let c = ch.cptp_check();
        prop_assert!(c.min_choi_eigenvalue > -1e-10 && c.tp_defect < 1e-10);
    }

    #[test]
    fn channels_contract_trace_distance(seed in any::<u64>(), d in 2usize..4) {
        let mut r = random::rng(seed);
        let ch = Channel::random(space(d), space(d), 2, &mut r);
        let (a, b) = (random::random_state(&space(d), &mut r), random::random_state(&space(d), &mut r));
        let before = trace_distance(&a, &b);
        let after = trace_distance(&ch.apply(&a).unwrap(), &ch.apply(&b).unwrap());
        prop_assert!(after <= before + 1e-10);
    }

    #[test]
    fn fidelity_and_distance_are_consistent(seed in any::<u64>(), d in 2usize..5) {
        let mut r = random::rng(seed);
        let (a, b) = (random::random_state(&space(d), &mut r), random::random_state(&space(d), &mut r));
        let f = fidelity(&a, &b);
        let t = trace_distance(&a, &b) / 2.0;
        // Fuchs-van de Graaf with the root fidelity.
        prop_assert!(1.0 - f <= t + 1e-9);
        prop_assert!(t <= (1.0 - f * f).max(0.0).sqrt() + 1e-9);
        prop_assert!(vn_entropy(&a) <= (d as f64).ln() + 1e-12);
    }

    #[test]
    fn helstrom_povm_attains_closed_form(seed in any::<u64>(), d in 2usize..4, p in 0.01f64..0.99) {
        let mut r = random::rng(seed);
        let ens = TestEnsemble::general(random::random_state(&space(d), &mut r), random::random_state(&space(d), &mut r), p).unwrap();
        let h = helstrom(&ens);
        prop_assert!((h.p_fail - helstrom_closed_form(&ens)).abs() < 1e-10);
        prop_assert!(h.p_fail <= p.min(1.0 - p) + 1e-12);
    }

    #[test]
    fn recovery_error_is_squared_irreversibility(seed in any::<u64>(), dout in 2usize..4, rank in 1usize..3) {
        let mut r = random::rng(seed);
        let u = random::haar_unitary(2, &mut r);
        let a = u.column(0).into_owned();
        let b = u.column(1).into_owned();
        let ens = TestEnsemble::pure_pair(&space(2), &a, &b, 0.5).unwrap();
        let ch = Channel::random(space(2), space(dout), rank, &mut r);
        let irr = irreversibility(&ch, &ens).unwrap();
        let rec = recovery_from_povm(&irr.povm, &ens).unwrap();
        let err = avg_recovery_error(&ch, &ens, &rec).unwrap();
        prop_assert!((err - irr.delta * irr.delta).abs() < 1e-8);
    }

    #[test]
    fn gibbs_state_is_free(levels in proptest::collection::vec(0.0f64..3.0, 2..5), beta in 0.1f64..3.0) {
        let h = Observable::diagonal(space(levels.len()), &levels).unwrap();
        let m = ResourceMeasure::athermality(&h, beta).unwrap();
        prop_assert!(m.measure(&gibbs_state(&h, beta)).unwrap().abs() < 1e-10);
    }

    #[test]
    fn error_bounds_decrease_in_epsilon(comm in 0.01f64..2.0, spread in 0.1f64..4.0, e1 in 1e-4f64..0.5, e2 in 1e-4f64..0.5) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let at = |e: f64| {
            let inp = BoundInput { commutator_norm: Some(comm), spread_in: Some(spread), epsilon: Some(e), ..Default::default() };
            bounds::evaluate(BoundKind::ProjectiveMeasurement, &inp).unwrap().value
        };
        prop_assert!(at(hi).le(at(lo), 1e-12));
        prop_assert_eq!(at(0.0), BoundValue::Divergent);
    }
}
