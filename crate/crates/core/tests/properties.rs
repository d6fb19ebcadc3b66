//! Property tests for the exact-arithmetic invariants.

use num_integer::Integer;
use proptest::prelude::*;

use horadam_circulant::closed_form;
use horadam_circulant::numeric::{rat_pow, rational_sqrt, Rational};
use horadam_circulant::sequence::{self, HoradamParams, Preset};
use horadam_circulant::structmat::{self, GCircSpec};

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000, 1i64..=60).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |x| !x.is_zero())
}

fn preset() -> impl Strategy<Value = Preset> {
    prop_oneof![
        Just(Preset::Fibonacci),
        Just(Preset::Lucas),
        Just(Preset::Pell),
        Just(Preset::Jacobsthal),
        (1i64..=5).prop_map(|k| Preset::KFibonacci(Rational::from_int(k))),
        (1i64..=5).prop_map(|k| Preset::KLucas(Rational::from_int(k))),
        (1i64..=4, 1i64..=3, -3i64..=3, -3i64..=3).prop_map(|(p, q, a, b)| Preset::Horadam {
            p: Rational::from_int(p),
            q: Rational::from_int(q),
            a: Rational::from_int(a),
            b: Rational::from_int(b),
        }),
    ]
}

proptest! {
    #[test]
    fn addition_is_exact(x in rational(), y in rational()) {
        prop_assert_eq!(&(&x + &y) - &y, x);
    }

    #[test]
    fn multiplication_is_exact(x in rational(), y in nonzero_rational()) {
        prop_assert_eq!(&(&x * &y) / &y, x);
    }

    #[test]
    fn pow_is_additive(x in nonzero_rational(), e1 in -8i64..=8, e2 in -8i64..=8) {
        prop_assert_eq!(
            rat_pow(&x, e1 + e2).unwrap(),
            rat_pow(&x, e1).unwrap() * rat_pow(&x, e2).unwrap()
        );
    }

    #[test]
    fn sqrt_squares_back(x in rational()) {
        let x = x.abs();
        if let Some(root) = rational_sqrt(&x).unwrap() {
            prop_assert_eq!(&root * &root, x);
        }
    }

    #[test]
    fn parse_display_round_trip(x in rational()) {
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }

    #[test]
    fn factorization_lemma(preset in preset(), n in 1usize..=8, g in 0usize..=7) {
        let g = g % n;
        let params = preset.params();
        let a = structmat::g_circulant(&GCircSpec { params: params.clone(), n, g }).unwrap();
        let c = structmat::circulant(&sequence::terms(&params, 1, n as u64).unwrap()).unwrap();
        prop_assert_eq!(a, structmat::matmul(&structmat::q_matrix(n, g), &c).unwrap());
    }

    #[test]
    fn det_multiplicative_on_factorization(preset in preset(), n in 1usize..=7, g in 0usize..=6) {
        let g = g % n;
        prop_assume!(n.gcd(&g) == 1);
        let params = preset.params();
        let a = structmat::g_circulant(&GCircSpec { params: params.clone(), n, g }).unwrap();
        let c = structmat::circulant(&sequence::terms(&params, 1, n as u64).unwrap()).unwrap();
        let parity = structmat::permutation_parity(n, g).unwrap();
        prop_assert_eq!(
            structmat::det_bareiss(&a).unwrap(),
            parity * structmat::det_bareiss(&c).unwrap()
        );
    }

    #[test]
    fn inverse_exact_is_two_sided(first in prop::collection::vec(rational(), 1..=5)) {
        let c = structmat::circulant(&first).unwrap();
        match structmat::inverse_exact(&c) {
            Ok(inv) => {
                prop_assert!(structmat::matmul(&c, &inv).unwrap().is_identity());
                prop_assert!(structmat::matmul(&inv, &c).unwrap().is_identity());
            }
            Err(_) => prop_assert!(structmat::det_bareiss(&c).unwrap().is_zero()),
        }
    }

    #[test]
    fn det_closed_matches_oracle_on_random_params(
        p in 1i64..=4, q in 1i64..=3, a in -3i64..=3, b in -3i64..=3, n in 1usize..=6,
    ) {
        let params = HoradamParams::new(
            Rational::from_int(p),
            Rational::from_int(q),
            Rational::from_int(a),
            Rational::from_int(b),
        ).unwrap();
        let c = structmat::circulant(&sequence::terms(&params, 1, n as u64).unwrap()).unwrap();
        prop_assert_eq!(
            closed_form::det_circ_closed(&params, n).unwrap(),
            structmat::det_bareiss(&c).unwrap()
        );
    }

    #[test]
    fn sum_closed_matches_direct(preset in preset(), n in 1u64..=40) {
        let params = preset.params();
        let direct = sequence::terms(&params, 1, n).unwrap()
            .into_iter()
            .fold(Rational::zero(), |acc, t| acc + t);
        prop_assert_eq!(sequence::sum_closed(&params, n).unwrap(), direct);
    }
}
