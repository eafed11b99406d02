use proptest::prelude::*;
use quasimap::algebra::{q, Coeff, Cyc, Q};
use quasimap::genus_one::{g1_compare, RhsForm};
use quasimap::geometry::{i_hypersurface, picard_fuchs_residual, Geometry, Regulator};
use quasimap::report::{series_table, table_csv, table_json};

fn small_q() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

fn cyc(n: u32) -> impl Strategy<Value = Cyc> {
    proptest::collection::vec(small_q(), 4)
        .prop_map(move |c| c.iter().enumerate().fold(Cyc::zero(), |acc, (k, r)| acc.add(&Cyc::zeta_pow(n, k as i64).scale(r))))
}

/// n distinct nonzero rationals.
fn regulator(n: usize) -> impl Strategy<Value = Regulator> {
    proptest::collection::btree_set((1i64..=12, 1i64..=4, any::<bool>()), n..=n)
        .prop_map(|s| s.into_iter().map(|(a, b, neg)| if neg { q(-a, b) } else { q(a, b) }).collect::<Vec<_>>())
        .prop_filter_map("values must be distinct", |c| Regulator::new(c, 4).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cyclotomic_field_laws(a in cyc(12), b in cyc(12), c in cyc(12)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn output_shape_for_any_order(order in 0usize..6, which in 0usize..3) {
        let geom = [Geometry::LocalP1P1, Geometry::TwistedP3, Geometry::Hypersurface { m: 2, n: 3 }][which];
        let t = series_table(&geom, order).unwrap();
        prop_assert_eq!(table_csv(&t).lines().count(), order + 2);
        prop_assert_eq!(table_json(&t), table_json(&series_table(&geom, order).unwrap()));
        prop_assert!(!table_json(&t).contains('.'));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn pf_annihilation_does_not_depend_on_regulator(reg in regulator(3)) {
        let r = picard_fuchs_residual(&i_hypersurface(2, 3, 4, &reg)).unwrap();
        prop_assert!(r.iter().flatten().all(|p| p.is_zero()));
    }

    #[test]
    fn genus_one_does_not_depend_on_regulator(reg in regulator(3)) {
        let r = g1_compare(2, 3, 3, RhsForm::General, &reg).unwrap();
        let base = g1_compare(2, 3, 3, RhsForm::General, &Regulator::standard(3)).unwrap();
        prop_assert!(r.pass);
        prop_assert_eq!(r.total, base.total);
    }
}
