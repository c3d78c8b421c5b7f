use delpezzo_core::mutation::{construct_pair, verify_chain, StepKind};
use delpezzo_core::picard::same_d5_orbit;
use delpezzo_core::mutation::standard_c1;
use delpezzo_core::rational::gcd;
use proptest::prelude::*;

#[test]
fn every_small_slope_has_a_verified_chain() {
    let mut n = 0;
    for r in 1..=12i64 {
        for d in -50..=50i64 {
            if gcd(d, r) != 1 {
                continue;
            }
            let c = construct_pair(d, r).unwrap_or_else(|e| panic!("({d},{r}): {e}"));
            let rep = verify_chain(&c);
            assert!(rep.passed, "({d},{r}): {:?}", rep.failure);
            let end = c.endpoint();
            assert_eq!((end.rank(), end.degree()), (r, d));
            assert!(same_d5_orbit(end.c1(), &standard_c1(d, r).unwrap()).unwrap());
            n += 1;
        }
    }
    assert!(n > 700);
}

#[test]
fn inductive_metric_decreases() {
    for r in 1..=12i64 {
        for d in -50..=50i64 {
            if gcd(d, r) != 1 {
                continue;
            }
            let c = construct_pair(d, r).unwrap();
            let metrics: Vec<i64> = c
                .steps
                .iter()
                .filter(|s| s.kind == StepKind::Inductive)
                .map(|s| {
                    let (_, v) = s.after.normalized();
                    (2 * v.rank() + v.degree()).abs()
                })
                .collect();
            assert!(metrics.windows(2).all(|w| w[0] < w[1]), "({d},{r}): {metrics:?}");
        }
    }
}

proptest! {
    #[test]
    fn random_slopes_verify(r in 1i64..40, d in -200i64..200) {
        prop_assume!(gcd(d, r) == 1);
        let c = construct_pair(d, r).unwrap();
        let rep = verify_chain(&c);
        prop_assert!(rep.passed, "{:?}", rep.failure);
    }
}
