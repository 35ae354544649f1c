use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use pwx_core::{build_class_f_map, build_paper_map, Rational};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..=500).prop_flat_map(|d| (0..=d).prop_map(move |n| r(n, d)))
}

fn paper_params() -> impl Strategy<Value = (Rational, Rational)> {
    let p = (1i64..=50, 1i64..=20).prop_map(|(a, b)| r(b + a, b));
    let s = (2i64..=60).prop_flat_map(|d| (1..d).prop_map(move |n| r(n, d)));
    (p, s)
}

proptest! {
    #[test]
    fn paper_map_tiles_and_evaluates((p, s) in paper_params(), x in unit_rational()) {
        let f = build_paper_map(p.clone(), s.clone()).unwrap();
        let width = f.branches().iter().fold(Rational::zero(), |acc, b| acc + b.width());
        prop_assert!(width.is_one());
        prop_assert_eq!(&f.branches()[0].domain_hi, &f.branches()[1].domain_lo);

        let branch = f.branch_at(&x).unwrap();
        let y = f.eval(&x).unwrap();
        prop_assert_eq!(&y, &(&branch.slope * &x + &branch.intercept));
        prop_assert!(y >= Rational::zero() && y <= Rational::one());

        prop_assert!(f.eval(&p.recip()).unwrap().is_one());
        prop_assert_eq!(f.eval(&Rational::one()).unwrap(), &s * (Rational::one() - p.recip()));
        prop_assert!(f.eval(&Rational::zero()).unwrap().is_zero());
    }

    #[test]
    fn class_f_validation_matches_range((p, s) in paper_params(), a in unit_rational(), d in unit_rational()) {
        prop_assume!(!d.is_zero() && !d.is_one());
        let b = -(&s * &d);
        let result = build_class_f_map(p.clone(), s.clone(), a.clone(), b.clone(), d.clone());
        let left_ok = &p * &d + &a <= Rational::one();
        let right_ok = &s + &b <= Rational::one();
        prop_assert_eq!(result.is_ok(), left_ok && right_ok);
    }
}
