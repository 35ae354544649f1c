use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use pwx_core::bounds::bounds_report;
use pwx_core::iteration::{compose, iterate, Iterates};
use pwx_core::map::{Label, PiecewiseLinearMap};
use pwx_core::{build_paper_map, minimal_expanding_iterate, Rational};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn grid() -> Vec<PiecewiseLinearMap> {
    let ps = [r(3, 2), r(2, 1), r(3, 1), r(5, 1)];
    let ss = [r(1, 4), r(1, 2), r(3, 4)];
    ps.iter()
        .flat_map(|p| ss.iter().map(move |s| build_paper_map(p.clone(), s.clone()).unwrap()))
        .collect()
}

/// Brute-force branch enumeration: for every word over {L,R}, pull `[0,1]`
/// back through the word's branches (last letter first). Words whose
/// preimage has positive width are exactly the branches of f^N.
fn enumerate_branches(f: &PiecewiseLinearMap, n: usize) -> Vec<(Vec<Label>, Rational, Rational, Rational)> {
    let mut out = Vec::new();
    for code in 0u32..(1 << n) {
        let word: Vec<Label> = (0..n)
            .map(|i| if code >> (n - 1 - i) & 1 == 0 { Label::L } else { Label::R })
            .collect();
        let (mut lo, mut hi) = (Rational::zero(), Rational::one());
        let mut slope = Rational::one();
        let mut alive = true;
        for &letter in word.iter().rev() {
            let br = f.branches().iter().find(|b| b.label == letter).unwrap();
            let pre_lo = (&lo - &br.intercept) / &br.slope;
            let pre_hi = (&hi - &br.intercept) / &br.slope;
            lo = pre_lo.max(br.domain_lo.clone());
            hi = pre_hi.min(br.domain_hi.clone());
            slope *= &br.slope;
            if lo >= hi {
                alive = false;
                break;
            }
        }
        if alive {
            out.push((word, lo, hi, slope));
        }
    }
    out.sort_by(|a, b| a.1.cmp(&b.1));
    out
}

fn fold_eval(f: &PiecewiseLinearMap, x: &Rational, n: usize) -> Rational {
    (0..n).fold(x.clone(), |y, _| f.eval(&y).unwrap())
}

#[test]
fn branch_tables_match_word_enumeration() {
    for f in grid() {
        for n in 1..=9 {
            let im = iterate(&f, n).unwrap();
            let got: Vec<_> = im
                .branches()
                .iter()
                .map(|b| (b.itinerary.clone(), b.domain_lo.clone(), b.domain_hi.clone(), b.slope.clone()))
                .collect();
            assert_eq!(got, enumerate_branches(&f, n), "p={} s={} N={n}", f.p(), f.s());
        }
    }
}

#[test]
fn minimal_iterate_matches_word_enumeration() {
    for f in grid() {
        let oracle = (1..=16)
            .find(|&n| enumerate_branches(&f, n).iter().all(|b| b.3 > Rational::one()))
            .expect("expanding iterate within 16");
        assert_eq!(minimal_expanding_iterate(&f, 32).unwrap(), oracle);
    }
}

#[test]
fn iterate_structure_invariants() {
    for f in grid() {
        let bounds = bounds_report(f.p(), f.s()).unwrap();
        for im in Iterates::new(&f).take(12) {
            let total = im.branches().iter().fold(Rational::zero(), |acc, b| acc + b.width());
            assert!(total.is_one());
            assert!(im.branches()[0].domain_lo.is_zero());
            assert!(im.branches().last().unwrap().domain_hi.is_one());
            for w in im.branches().windows(2) {
                assert_eq!(w[0].domain_hi, w[1].domain_lo);
                // the shared endpoint belongs to exactly one side
                assert!(w[0].hi_closed != w[1].lo_closed);
                assert_ne!(w[0].itinerary, w[1].itinerary);
            }
            for b in im.branches() {
                assert!(b.domain_lo < b.domain_hi);
                assert!(b.slope > Rational::zero());
                let m = b.count(Label::L);
                let n = b.count(Label::R);
                assert_eq!(m + n, im.order());
                assert_eq!(b.slope, pwx_core::net_expansion(f.p(), f.s(), m, n));
                assert!(b.longest_run(Label::R) <= bounds.upper_u);
                assert!(b.apply(&b.domain_lo) < b.apply(&b.domain_hi));
            }
        }
    }
}

#[test]
fn minimality_brackets() {
    for f in grid() {
        let n = minimal_expanding_iterate(&f, 32).unwrap();
        let one = Rational::one();
        assert!(iterate(&f, n).unwrap().min_slope() > one);
        if n > 1 {
            assert!(iterate(&f, n - 1).unwrap().min_slope() <= one);
        }
    }
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..=1000).prop_flat_map(|d| (0..=d).prop_map(move |n| r(n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_is_function_composition(
        idx in 0usize..12,
        n1 in 1usize..=5,
        n2 in 1usize..=5,
        xs in proptest::collection::vec(unit_rational(), 100),
    ) {
        let f = &grid()[idx];
        let whole = iterate(f, n1 + n2).unwrap();
        let split = compose(&iterate(f, n1).unwrap(), &iterate(f, n2).unwrap()).unwrap();
        for x in &xs {
            let direct = fold_eval(f, x, n1 + n2);
            prop_assert_eq!(&whole.eval(x).unwrap(), &direct);
            prop_assert_eq!(&split.eval(x).unwrap(), &direct);
        }
    }
}
