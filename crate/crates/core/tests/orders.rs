use delpezzo_core::quadratic::{
    apply_moves, canonical_form, classify_slope, make_xi, reduce_to_base, Feasibility, OrderElement,
    OrderMove,
};
use proptest::prelude::*;

const MOVES: [OrderMove; 4] = [OrderMove::NegConj, OrderMove::Unit, OrderMove::UnitInv, OrderMove::Neg];

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Slope letters acting on `(d, r)` for degree `k`.
fn m_act(d: i64, r: i64) -> (i64, i64) {
    (d, -d - r)
}

fn r_act(k: i64, d: i64, r: i64) -> (i64, i64) {
    (-d - k * r, r)
}

#[test]
fn moves_track_slope_letters() {
    for k in 5..=9 {
        for r in 1..=15 {
            for d in -40..=40 {
                let xi = make_xi(d, r, k).unwrap();
                let (d1, r1) = r_act(k, d, r);
                assert_eq!(OrderMove::NegConj.apply(&xi), make_xi(d1, r1, k).unwrap());
                let (dm, rm) = m_act(d, r);
                let (d2, r2) = r_act(k, dm, rm);
                assert_eq!(OrderMove::Unit.apply(&xi), make_xi(d2, r2, k).unwrap());
            }
        }
    }
}

#[test]
fn feasible_words_land_on_their_base() {
    for k in 5..=9 {
        for r in 1..=25 {
            for d in -80..=80 {
                if gcd(d, r) != 1 {
                    continue;
                }
                let xi = make_xi(d, r, k).unwrap();
                if xi.norm() >= 0 {
                    continue;
                }
                if let Feasibility::Feasible { base, word, .. } = reduce_to_base(&xi).unwrap() {
                    assert_eq!(apply_moves(&xi, &word), base.xi(), "k={k} d={d} r={r}");
                }
            }
        }
    }
}

#[test]
fn slope_verdict_never_errs_on_valid_input() {
    for k in 5..=9 {
        for r in 1..=12 {
            for d in -30..=30 {
                if gcd(d, r) == 1 {
                    classify_slope(k, d, r, None).unwrap();
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn canonical_form_is_an_orbit_invariant(
        k in 5i64..=9,
        r in 1i64..200,
        t in 0.0f64..=1.0,
        word in prop::collection::vec(0usize..4, 0..12),
    ) {
        // -3r <= d <= -2r has negative norm for every k >= 5
        let d = -2 * r - (t * r as f64).round() as i64;
        let a = make_xi(d, r, k).unwrap();
        prop_assert!(a.norm() < 0);
        let moves: Vec<OrderMove> = word.iter().map(|&i| MOVES[i]).collect();
        let b = apply_moves(&a, &moves);
        let (ca, wa) = canonical_form(&a).unwrap();
        let (cb, _) = canonical_form(&b).unwrap();
        prop_assert_eq!(ca, cb);
        prop_assert_eq!(apply_moves(&a, &wa), ca);
        prop_assert_eq!(ca.norm(), a.norm());
    }

    #[test]
    fn moves_invert(k in 5i64..=9, x in -500i64..500, y in -500i64..500, i in 0usize..4) {
        let a = OrderElement::new(k, x, y).unwrap();
        let m = MOVES[i];
        prop_assert_eq!(m.inverse().apply(&m.apply(&a)), a);
    }
}
