//! Property tests across modules, each against an independent route.

use crate::arith::{int, qpoch_finite, rat, RatFunc};
use crate::cli::{execute, frac, parse_frac, replay, Command, Params, Report, RunConfig};
use crate::interp::BinomialSolver;
use crate::limits::{closed_form_count, verify_cq_limit_with};
use crate::nonarch::{dh_infty, dh_level, NonArchParams};
use crate::oracle::{count_submodules, grassmannian};
use crate::partitions::{bar, enumerate, leq_contain, up_to_weight, Partition};
use crate::qgrass::{F2Exponent, QParams, QSelberg};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn small_partition(max_weight: usize) -> impl Strategy<Value = Partition> {
    let all = up_to_weight(max_weight, max_weight);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn params() -> impl Strategy<Value = NonArchParams> {
    (1usize..=2, 0usize..=2, prop::sample::select(vec![2u64, 3, 5]), 1u32..=2)
        .prop_map(|(m, extra, p, r)| NonArchParams::new(2 * m + extra, m, p, r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_form_count_matches_enumeration(mu in small_partition(4), l in small_partition(4), p in prop::sample::select(vec![2u64, 3])) {
        let brute = if leq_contain(&l, &mu) { count_submodules(&mu, &l, p).unwrap() } else { 0 };
        prop_assert_eq!(closed_form_count(&mu, &l, &BigInt::from(p)), BigRational::from_integer(brute.into()));
    }

    #[test]
    fn level_measures_are_probabilities(pr in params(), k in 1usize..=3) {
        let total: BigRational = enumerate(pr.m, k).iter().map(|l| dh_level(l, k, &pr).unwrap()).sum();
        prop_assert!(total.is_one());
    }

    #[test]
    fn uncapped_orbits_carry_limit_mass(pr in params(), k in 2usize..=4, l in small_partition(6)) {
        prop_assume!(l.len() <= pr.m && l.height() < k);
        prop_assert_eq!(dh_level(&l, k, &pr).unwrap(), dh_infty(&l, &pr).unwrap());
    }

    #[test]
    fn capped_orbits_collect_the_tail(pr in params(), k in 1usize..=3) {
        // mass of an orbit at level k is the dh_infty mass of everything truncating onto it
        let pr = NonArchParams::new(pr.n, 1, pr.p, pr.r).unwrap();
        for l in enumerate(1, k) {
            let lev = dh_level(&l, k, &pr).unwrap();
            if l.height() < k {
                prop_assert_eq!(lev, dh_infty(&l, &pr).unwrap());
            } else {
                let below: BigRational = (0..k).map(|j| dh_infty(&Partition::from_unsorted(&[j]), &pr).unwrap()).sum();
                prop_assert_eq!(lev, BigRational::one() - below);
            }
            prop_assert_eq!(bar(&l, k + 1), l.clone());
        }
    }

    #[test]
    fn qpochhammer_recursion(a in 1i64..9, b in 2i64..9, n in 0usize..8) {
        let (x, q) = (rat(a, 10), rat(1, b));
        let lhs = qpoch_finite(&x, &q, n + 1);
        let rhs = qpoch_finite(&x, &q, n) * (int(1) - &x * num_traits::pow::Pow::pow(&q, n as u32));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn masses_are_positive_and_ordered(q in 0.05f64..0.9, a in 0.05f64..0.9, b in 0.05f64..0.9, t in 0.05f64..0.9) {
        let p = QParams::from_f64(q, a, b, t, 2, 128).unwrap();
        let s = QSelberg::new(&p, F2Exponent::Proof).unwrap();
        for (l, w) in s.atoms(4).unwrap() {
            prop_assert!(w.to_f64() > 0.0, "{l}");
            prop_assert_eq!(w.to_f64(), s.mass(&l).unwrap().to_f64());
        }
    }

    #[test]
    fn fractions_round_trip(a in -10_000i64..10_000, b in 1i64..10_000) {
        let x = rat(a, b);
        prop_assert_eq!(parse_frac(&frac(&x)), Some(x));
    }

    #[test]
    fn measure_reports_round_trip(n in 2usize..=4, p in prop::sample::select(vec![2u64, 3]), cutoff in 1usize..=3) {
        let cfg = RunConfig::new(Command::Measure, Params { n, p, cutoff, q_seq: Some(vec![0.1, 0.01]), ..Params::default() });
        let r = execute(&cfg).unwrap();
        let back = Report::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert!(replay(&back).unwrap().passed());
    }
}

#[test]
fn grassmannian_counts_are_projective_counts() {
    // |P^{n-1}(Z/p^k)| = p^{(n-1)(k-1)} (p^n - 1)/(p - 1)
    for (n, p, k) in [(2usize, 2u64, 1usize), (2, 2, 3), (3, 2, 2), (2, 3, 2)] {
        let want = p.pow(((n - 1) * (k - 1)) as u32) * (p.pow(n as u32) - 1) / (p - 1);
        assert_eq!(grassmannian(n, 1, p, k).unwrap().len() as u64, want, "n={n} p={p} k={k}");
    }
}

#[test]
fn degree_two_residue_fields_follow_the_closed_form() {
    for p in [2u64, 3] {
        let s = BinomialSolver::residue(p, 2);
        for mu in up_to_weight(4, 4) {
            for l in up_to_weight(4, 4).iter().filter(|l| leq_contain(l, &mu)) {
                let v = verify_cq_limit_with(&s, &mu, l, p, 2).unwrap();
                assert!(v.pass, "{v:?}");
            }
        }
    }
}

#[test]
fn binomial_is_rational_in_q() {
    // (1,1) over (1) at t = 1/2 is 1 + t^{-1} for every q
    let s = BinomialSolver::new(rat(1, 2)).unwrap();
    let f: RatFunc = s.gen_binomial(&Partition::from_unsorted(&[1, 1]), &Partition::from_unsorted(&[1]), 2).unwrap();
    for q in [rat(0, 1), rat(1, 3), rat(2, 5)] {
        assert_eq!(f.eval(&q).unwrap(), rat(3, 1));
    }
}
