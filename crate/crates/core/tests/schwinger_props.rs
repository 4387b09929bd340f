use proptest::prelude::*;
use schwinger_core::schwinger::{
    algebra_report, build_generators, casimir, jm_map, safe_projector, schwinger_state,
    shift_theorem_check, HalfInt, JMLabel, SchwingerKind,
};
use schwinger_core::{Operator, C64};

fn label(twice_j: i64, twice_m: i64) -> JMLabel {
    JMLabel::new(HalfInt::from_twice(twice_j), HalfInt::from_twice(twice_m)).unwrap()
}

fn apply(op: &Operator, v: &nalgebra::DVector<C64>) -> nalgebra::DVector<C64> {
    op.apply(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn boson_pair_closes_su2(cutoff in 3usize..9, hbar in 0.2f64..3.0) {
        let g = build_generators(SchwingerKind::BosonBoson, cutoff, None, hbar).unwrap();
        let r = algebra_report(&g, &safe_projector(&g)).unwrap();
        prop_assert!(r.passed(), "{r:?}");
        prop_assert!(r.casimir_commutes(), "{r:?}");
    }

    #[test]
    fn states_are_joint_eigenvectors(twice_j in 0i64..7, k in 0i64..7, hbar in 0.5f64..2.0) {
        prop_assume!(k <= twice_j);
        let twice_m = twice_j - 2 * k;
        let lab = label(twice_j, twice_m);
        let cutoff = twice_j as usize + 2;
        let g = build_generators(SchwingerKind::BosonBoson, cutoff, None, hbar).unwrap();
        let v = schwinger_state(lab, cutoff).unwrap();
        prop_assert!((v.norm() - 1.0).abs() < 1e-14);
        let (j, m) = (twice_j as f64 / 2.0, twice_m as f64 / 2.0);
        let jz = apply(&g.jz, &v) - &v * C64::new(hbar * m, 0.0);
        prop_assert!(jz.norm() < 1e-12);
        let c = apply(&casimir(&g), &v) - &v * C64::new(hbar * hbar * j * (j + 1.0), 0.0);
        prop_assert!(c.norm() < 1e-10 * (1.0 + j * j));
    }

    #[test]
    fn states_with_equal_j_are_orthonormal(twice_j in 0i64..7) {
        let cutoff = twice_j as usize + 2;
        let states: Vec<_> = (0..=twice_j)
            .map(|k| schwinger_state(label(twice_j, twice_j - 2 * k), cutoff).unwrap())
            .collect();
        for (a, va) in states.iter().enumerate() {
            for (b, vb) in states.iter().enumerate() {
                let ip = va.dotc(vb);
                let want = if a == b { 1.0 } else { 0.0 };
                prop_assert!((ip - C64::new(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn occupation_labels_round_trip(n1 in 0usize..20, n2 in 0usize..20) {
        prop_assert_eq!(jm_map(n1, n2).occupations(), (n1, n2));
    }

    #[test]
    fn shift_theorem_holds(r in -2.0f64..3.0, cutoff in 3usize..20) {
        let rep = shift_theorem_check(r, cutoff).unwrap();
        prop_assert!(rep.max_residual() < 1e-9 * (cutoff as f64).powf(r.abs() + 0.5), "{rep:?}");
    }
}

#[test]
fn fermion_pair_levels() {
    let g = build_generators(SchwingerKind::FermionFermion, 2, None, 1.0).unwrap();
    let c = casimir(&g);
    // Singly occupied states are a doublet, empty and full are singlets.
    for (n1, n2, want) in [(0, 0, 0.0), (1, 0, 0.75), (0, 1, 0.75), (1, 1, 0.0)] {
        let i = g.index(n1, n2);
        assert!((c.get(i, i).re - want).abs() < 1e-14, "({n1},{n2})");
    }
}

#[test]
fn half_integer_parsing() {
    for (s, twice) in [("3/2", 3), ("-1/2", -1), ("1.5", 3), ("2", 4)] {
        assert_eq!(s.parse::<HalfInt>().unwrap().twice(), twice, "{s}");
    }
    assert!("1/3".parse::<HalfInt>().is_err());
    assert!(JMLabel::new(HalfInt::from_twice(2), HalfInt::from_twice(1)).is_err());
}
