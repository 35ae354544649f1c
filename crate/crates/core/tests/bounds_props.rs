use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use pwx_core::bounds::{
    bounds_report, forced_consecutive_contractions, orbit_of_one, right_branch_closed_form,
};
use pwx_core::rational::powu;
use pwx_core::{build_paper_map, Rational};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn params() -> impl Strategy<Value = (Rational, Rational)> {
    let p = (1i64..=400, 1i64..=40).prop_map(|(a, b)| r(b + a.min(99 * b), b));
    let s = (2i64..=200).prop_flat_map(|d| (1..d).prop_map(move |n| r(n, d)));
    (p, s)
}

proptest! {
    #[test]
    fn bounds_separate_and_are_tight((p, s) in params()) {
        let rep = bounds_report(&p, &s).unwrap();
        prop_assert!(rep.c > 0.0 && rep.c < 1.0);
        prop_assert!(rep.lower_l >= 2);
        prop_assert_eq!(rep.upper_u, rep.j_max + 1);
        prop_assert!(rep.inequality_holds);
        prop_assert!(rep.lower_l > rep.upper_u);

        let one = Rational::one();
        prop_assert!(&p * powu(&s, rep.lower_l - 1) <= one);
        prop_assert!(&p * powu(&s, rep.lower_l - 2) > one);

        let q = &p * (&one - &s) + &s;
        prop_assert!(&q * powu(&s, rep.j_max) > one);
        prop_assert!(&q * powu(&s, rep.j_max + 1) <= one);
    }

    #[test]
    fn orbit_of_one_realizes_upper_bound((p, s) in params()) {
        let rep = bounds_report(&p, &s).unwrap();
        let f = build_paper_map(p, s).unwrap();
        let orbit = orbit_of_one(&f, rep.upper_u + 2).unwrap();
        prop_assert_eq!(orbit.initial_r_run, rep.upper_u);
        for (i, pair) in orbit.points.windows(2).enumerate() {
            prop_assert_eq!(&pair[1], &f.eval(&pair[0]).unwrap());
            let is_right = pair[0] > *f.d();
            prop_assert_eq!(is_right, orbit.labels[i] == pwx_core::Label::R);
        }
    }

    #[test]
    fn closed_form_matches_repeated_right_branch(
        (p, s) in params(),
        x in (1i64..=1000).prop_flat_map(|d| (0..=d).prop_map(move |n| r(n, d))),
    ) {
        let b = -(&s / &p);
        let mut y = x.clone();
        for j in 0..=50 {
            prop_assert_eq!(&right_branch_closed_form(&p, &s, j, &x), &y);
            y = &s * &y + &b;
        }
    }
}

#[test]
fn pigeonhole_over_all_words() {
    for len in 1..=14usize {
        let mut best = vec![usize::MAX; len + 1];
        for code in 0u32..(1 << len) {
            let n = code.count_ones() as usize;
            let mut run = 0;
            let mut longest = 0;
            for i in 0..len {
                if code >> i & 1 == 1 {
                    run += 1;
                    longest = longest.max(run);
                } else {
                    run = 0;
                }
            }
            best[n] = best[n].min(longest);
        }
        for (n, &min_run) in best.iter().enumerate() {
            assert_eq!(min_run, forced_consecutive_contractions(len - n, n), "m={} n={n}", len - n);
        }
    }
}
