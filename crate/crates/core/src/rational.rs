//! Exact rational helpers.

use num_integer::Integer;
use num_traits::Zero;

pub type Rational = num_rational::Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Renders as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Greatest common divisor of a slice, `0` for an all-zero slice.
pub fn gcd_all(xs: &[i64]) -> i64 {
    xs.iter().fold(0, |g, &x| g.gcd(&x))
}

/// Reduces `nums / den` so that `den > 0` and the entries share no factor with it.
pub fn normalize(nums: &mut [i64], den: &mut i64) {
    assert!(!den.is_zero(), "zero denominator");
    if *den < 0 {
        *den = -*den;
        nums.iter_mut().for_each(|n| *n = -*n);
    }
    let g = gcd_all(nums).gcd(den);
    if g > 1 {
        nums.iter_mut().for_each(|n| *n /= g);
        *den /= g;
    }
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.abs().lcm(&b.abs())
}
