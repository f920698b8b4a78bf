use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use matchdens::density::{twist_density, w_density, zero_density, PrimeWindow};
use matchdens::dirichletden::{exact_matching_density_dirichlet, rs_diagnostic, PrimeIndicatorSeries, UnitGroup};
use matchdens::groupcore::{character_table_small, direct_product, is_nilpotent, matching_fraction, named, zero_fraction, FiniteGroup};
use matchdens::rational::parse_rational;
use matchdens::Rational;

fn corpus() -> Vec<FiniteGroup> {
    vec![
        named::q8(),
        named::s3(),
        named::sl2f3(),
        named::dihedral(4).unwrap(),
        named::dihedral(5).unwrap(),
        named::dihedral(8).unwrap(),
        named::dicyclic(3).unwrap(),
        named::dicyclic(4).unwrap(),
        named::heisenberg(3).unwrap(),
        named::cyclic(6).unwrap(),
        direct_product(&named::q8(), &named::cyclic(3).unwrap()).unwrap().flatten(),
    ]
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nonlinear_characters_of_nilpotent_groups_vanish_half_the_time(gi in 0usize..11, ci in 0usize..64) {
        let g = &corpus()[gi];
        prop_assume!(is_nilpotent(g).unwrap());
        let table = character_table_small(g).unwrap();
        let chi = &table.characters()[ci % table.len()];
        prop_assume!(chi.degree() != matchdens::groupcore::CycValue::one());
        prop_assert!(zero_fraction(chi) >= rat(1, 2));
    }

    #[test]
    fn matching_covers_common_zeros(gi in 0usize..11, i in 0usize..64, j in 0usize..64) {
        let g = &corpus()[gi];
        let table = character_table_small(g).unwrap();
        let x = &table.characters()[i % table.len()];
        let y = &table.characters()[j % table.len()];
        let m = matching_fraction(x, y).unwrap();
        prop_assert!(m >= zero_fraction(x) + zero_fraction(y) - Rational::one());
        prop_assert_eq!(m.clone(), matching_fraction(y, x).unwrap());
        if i % table.len() == j % table.len() {
            prop_assert_eq!(m, Rational::one());
        }
    }

    #[test]
    fn class_wise_fractions_match_element_counts(gi in 0usize..11, i in 0usize..64, j in 0usize..64) {
        let g = &corpus()[gi];
        let table = character_table_small(g).unwrap();
        let x = &table.characters()[i % table.len()];
        let y = &table.characters()[j % table.len()];
        let n = g.order() as i64;
        let zeros = (0..g.order()).filter(|&h| x.value_at(h).is_zero()).count() as i64;
        let agree = (0..g.order()).filter(|&h| x.value_at(h) == y.value_at(h)).count() as i64;
        prop_assert_eq!(zero_fraction(x), rat(zeros, n));
        prop_assert_eq!(matching_fraction(x, y).unwrap(), rat(agree, n));
    }

    #[test]
    fn twisting_more_lowers_matching_towards_the_zero_proportion(num in 0i64..=1000, d in 1u64..200) {
        let w = rat(num, 1000);
        let a = twist_density(&w, d).unwrap();
        let b = twist_density(&w, d + 1).unwrap();
        prop_assert!(b <= a);
        prop_assert!(b >= w);
        prop_assert!(a <= Rational::one());
        prop_assert_eq!(twist_density(&w, 1).unwrap(), Rational::one());
    }

    #[test]
    fn window_density_is_the_product_formula(k in 5usize..60, m in 0usize..30) {
        let small = PrimeWindow::from_index(k, m).unwrap();
        let large = PrimeWindow::from_index(k, m + 1).unwrap();
        let w = w_density(&small).unwrap();
        let expected = small
            .primes
            .iter()
            .fold(Rational::one(), |acc, &p| acc * rat(p as i64 - 1, p as i64));
        prop_assert_eq!(&w, &expected);
        prop_assert!(w_density(&large).unwrap() < w);
        prop_assert_eq!(zero_density(&small).unwrap() + w, Rational::one());
    }

    #[test]
    fn dirichlet_diagnostic_holds_term_by_term(n in 3u64..40, i in 0u64..1000, j in 0u64..1000) {
        let g = UnitGroup::new(n).unwrap();
        let (x, y) = (g.character(i % g.order()).unwrap(), g.character(j % g.order()).unwrap());
        let series = PrimeIndicatorSeries::character_distance(&x, &y, 20_000).unwrap();
        for (&w, &marked) in series.weights.as_ref().unwrap().iter().zip(&series.marked) {
            prop_assert!((0.0..=4.0 + 1e-12).contains(&w));
            prop_assert_eq!(marked, w > 0.0);
        }
        prop_assert!(rs_diagnostic(&series, 1, 1.05).unwrap().holds);
        let d = exact_matching_density_dirichlet(&x, &y).unwrap();
        prop_assert_eq!(d.clone(), exact_matching_density_dirichlet(&y, &x).unwrap());
        prop_assert_eq!(d == Rational::one(), x == y);
    }

    #[test]
    fn rationals_round_trip_through_text(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = rat(n, d);
        prop_assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
    }
}
