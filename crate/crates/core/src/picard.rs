//! The Picard lattice of a degree-`k` del Pezzo surface in a blowdown basis.
//!
//! Coefficients are ordered `(s, f, e_1, ..., e_{8-k})` with `s.f = 1`,
//! `e_i.e_i = -1` and all other products zero. Only degrees `1..=8` carry a
//! ruled basis; the projective plane is handled arithmetically elsewhere.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, normalize, Rational};

/// An integral divisor class on `X_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PicardClass {
    surface_degree: u8,
    coeffs: Vec<i64>,
}

fn check_degree(k: i64) -> Result<u8> {
    if (1..=8).contains(&k) {
        Ok(k as u8)
    } else {
        Err(Error::SurfaceDegree(k))
    }
}

/// Number of basis vectors of `Pic(X_k)`.
pub fn rank_of(k: u8) -> usize {
    10 - k as usize
}

impl PicardClass {
    pub fn new(surface_degree: i64, coeffs: Vec<i64>) -> Result<Self> {
        let k = check_degree(surface_degree)?;
        if coeffs.len() != rank_of(k) {
            return Err(Error::CoeffLength {
                expected: rank_of(k),
                got: coeffs.len(),
            });
        }
        Ok(PicardClass {
            surface_degree: k,
            coeffs,
        })
    }

    pub fn zero(k: i64) -> Result<Self> {
        let k = check_degree(k)?;
        Ok(PicardClass {
            surface_degree: k,
            coeffs: vec![0; rank_of(k)],
        })
    }

    fn basis(k: i64, slot: usize) -> Result<Self> {
        let mut z = Self::zero(k)?;
        if slot >= z.coeffs.len() {
            return Err(Error::Precondition(format!(
                "basis slot {slot} does not exist in degree {k}"
            )));
        }
        z.coeffs[slot] = 1;
        Ok(z)
    }

    /// The ruling class `s`.
    pub fn s(k: i64) -> Result<Self> {
        Self::basis(k, 0)
    }

    /// The ruling class `f`.
    pub fn f(k: i64) -> Result<Self> {
        Self::basis(k, 1)
    }

    /// The exceptional class `e_i`, `i` counted from 1.
    pub fn e(k: i64, i: usize) -> Result<Self> {
        if i == 0 {
            return Err(Error::Precondition("e_i is indexed from 1".into()));
        }
        Self::basis(k, i + 1)
    }

    pub fn surface_degree(&self) -> u8 {
        self.surface_degree
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn scale(&self, c: i64) -> Self {
        PicardClass {
            surface_degree: self.surface_degree,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Intersection number with `other`.
    pub fn dot(&self, other: &Self) -> Result<i64> {
        intersect(self, other)
    }

    /// Self-intersection.
    pub fn square(&self) -> i64 {
        form(&self.coeffs, &self.coeffs)
    }

    /// Anticanonical degree `D.Q`.
    pub fn degree(&self) -> i64 {
        degree_of(self)
    }

    /// Coefficient of `e_i` (`i` from 1), zero if the slot does not exist.
    pub fn e_coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i + 1).copied().unwrap_or(0)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(i64, i64) -> i64) -> Result<Self> {
        same_degree(self, other)?;
        Ok(PicardClass {
            surface_degree: self.surface_degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| op(*a, *b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }
}

/// Panics on a degree mismatch; use [`PicardClass::try_add`] for fallible code.
impl Add for &PicardClass {
    type Output = PicardClass;
    fn add(self, rhs: Self) -> PicardClass {
        self.try_add(rhs).expect("adding classes of different degree")
    }
}

impl Sub for &PicardClass {
    type Output = PicardClass;
    fn sub(self, rhs: Self) -> PicardClass {
        self.try_sub(rhs).expect("subtracting classes of different degree")
    }
}

impl Neg for &PicardClass {
    type Output = PicardClass;
    fn neg(self) -> PicardClass {
        self.scale(-1)
    }
}

impl fmt::Display for PicardClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "k={} ({})", self.surface_degree, parts.join(","))
    }
}

fn same_degree(a: &PicardClass, b: &PicardClass) -> Result<()> {
    if a.surface_degree != b.surface_degree {
        Err(Error::DegreeMismatch(a.surface_degree, b.surface_degree))
    } else {
        Ok(())
    }
}

/// The hyperbolic-plus-negative-definite form on raw coefficient vectors.
fn form(a: &[i64], b: &[i64]) -> i64 {
    let mut acc = a[0] * b[1] + a[1] * b[0];
    for (x, y) in a[2..].iter().zip(&b[2..]) {
        acc -= x * y;
    }
    acc
}

pub fn intersect(a: &PicardClass, b: &PicardClass) -> Result<i64> {
    same_degree(a, b)?;
    Ok(form(&a.coeffs, &b.coeffs))
}

/// `Q_k = 2s + 2f - sum e_i`.
pub fn anticanonical(k: i64) -> Result<PicardClass> {
    let k = check_degree(k)?;
    let mut coeffs = vec![-1; rank_of(k)];
    coeffs[0] = 2;
    coeffs[1] = 2;
    Ok(PicardClass {
        surface_degree: k,
        coeffs,
    })
}

pub fn degree_of(d: &PicardClass) -> i64 {
    let c = &d.coeffs;
    // D.Q = 2(D.s + D.f) + sum of e-coefficients
    2 * (c[1] + c[0]) + c[2..].iter().sum::<i64>()
}

/// The distinguished degree-4 class
/// `D_ab = (a/2) f + (b/2)(Q - f) + delta_ab`, with the parity correction
/// chosen as the shortest dominant vector of `<f, Q>^perp` making it integral.
pub fn d_ab(a: i64, b: i64) -> Result<PicardClass> {
    let (a_odd, b_odd) = (a.rem_euclid(2) == 1, b.rem_euclid(2) == 1);
    // (a/2) f + (b/2)(2s + f - sum e) = b s + ((a+b)/2) f - (b/2) sum e
    let coeffs = match (a_odd, b_odd) {
        (false, false) => return Err(Error::InvalidParity(a, b)),
        // delta_01 = (-f - e1 + e2 + e3 + e4)/2
        (false, true) => {
            let e1 = (-b - 1) / 2;
            let e = (1 - b) / 2;
            vec![b, (a + b - 1) / 2, e1, e, e, e]
        }
        // delta_11 = -f + (e1 + e2 + e3 + e4)/2
        (true, true) => {
            let e = (1 - b) / 2;
            vec![b, (a + b) / 2 - 1, e, e, e, e]
        }
        // delta_10 = -f/2 + e4
        (true, false) => {
            let e = -b / 2;
            vec![b, (a + b - 1) / 2, e, e, e, 1 - b / 2]
        }
    };
    PicardClass::new(4, coeffs)
}

/// A root of `Q^perp`: a class with square `-2` orthogonal to `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PicRoot(PicardClass);

impl PicRoot {
    pub fn new(underlying: PicardClass) -> Result<Self> {
        let q = anticanonical(underlying.surface_degree as i64)?;
        if underlying.square() != -2 || intersect(&underlying, &q)? != 0 {
            return Err(Error::NotARoot(underlying.to_string()));
        }
        Ok(PicRoot(underlying))
    }

    pub fn class(&self) -> &PicardClass {
        &self.0
    }
}

/// Simple roots `s-f, f-e_1-e_2, e_1-e_2, e_2-e_3, ..., e_{7-k}-e_{8-k}`.
///
/// For `k = 1` these match the `E8` nodes `1, 3, 2, 4, 5, 6, 7, 8` in
/// Bourbaki numbering; for `k = 4` they generate `W(D5)`.
pub fn simple_roots(k: i64) -> Result<Vec<PicRoot>> {
    let k8 = check_degree(k)?;
    let n_e = 8 - k8 as usize;
    let mut out = Vec::new();
    let mk = |c: Vec<i64>| PicRoot::new(PicardClass::new(k, c).expect("valid length"));
    let len = rank_of(k8);
    let mut v = vec![0; len];
    v[0] = 1;
    v[1] = -1;
    out.push(mk(v)?);
    if n_e >= 2 {
        let mut v = vec![0; len];
        v[1] = 1;
        v[2] = -1;
        v[3] = -1;
        out.push(mk(v)?);
    }
    for i in 1..n_e {
        let mut v = vec![0; len];
        v[i + 1] = 1;
        v[i + 2] = -1;
        out.push(mk(v)?);
    }
    Ok(out)
}

/// `s_v(x) = x + (x.v) v`.
pub fn reflect(v: &PicRoot, x: &PicardClass) -> Result<PicardClass> {
    let t = intersect(x, &v.0)?;
    x.try_add(&v.0.scale(t))
}

/// Class-level pullback to a blowup of lower degree: new `e` slots are zero.
pub fn pullback(d: &PicardClass, to_degree: i64) -> Result<PicardClass> {
    let to = check_degree(to_degree)?;
    if to >= d.surface_degree {
        return Err(Error::Pullback {
            from: d.surface_degree,
            to,
        });
    }
    let mut coeffs = d.coeffs.clone();
    coeffs.resize(rank_of(to), 0);
    Ok(PicardClass {
        surface_degree: to,
        coeffs,
    })
}

/// Drops trailing `e` slots. Fails unless the dropped coefficients vanish.
pub fn descend(d: &PicardClass, to_degree: i64) -> Result<PicardClass> {
    let to = check_degree(to_degree)?;
    if to <= d.surface_degree {
        return Err(Error::Precondition(format!(
            "descent must raise the degree ({} -> {to})",
            d.surface_degree
        )));
    }
    let keep = rank_of(to);
    if d.coeffs[keep..].iter().any(|&c| c != 0) {
        return Err(Error::Precondition(format!(
            "class {d} has nonzero coefficients on blown-down curves"
        )));
    }
    Ok(PicardClass {
        surface_degree: to,
        coeffs: d.coeffs[..keep].to_vec(),
    })
}

/// A rational class, stored as integer numerators over a common denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RationalClass {
    surface_degree: u8,
    num: Vec<i64>,
    den: i64,
}

impl RationalClass {
    pub fn new(surface_degree: u8, mut num: Vec<i64>, mut den: i64) -> Self {
        normalize(&mut num, &mut den);
        RationalClass {
            surface_degree,
            num,
            den,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&n| n == 0)
    }

    pub fn coords(&self) -> Vec<Rational> {
        self.num.iter().map(|&n| Rational::new(n, self.den)).collect()
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }
}

impl fmt::Display for RationalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(fmt_rational).collect();
        write!(f, "k={} ({})", self.surface_degree, parts.join(","))
    }
}

/// Dominant `W(D5)` representative of the projection of a degree-4 class to
/// `Q_4^perp`, with the reflection word that reaches it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct D5Canonical {
    /// 1-based indices into [`simple_roots`]`(4)`, applied left to right.
    pub word: Vec<usize>,
    pub rep: RationalClass,
}

/// `4x - (x.Q) Q`: four times the orthogonal projection, always integral.
fn scaled_projection(x: &PicardClass) -> Result<PicardClass> {
    if x.surface_degree != 4 {
        return Err(Error::DegreeMismatch(x.surface_degree, 4));
    }
    let q = anticanonical(4)?;
    x.scale(4).try_sub(&q.scale(degree_of(x)))
}

/// Reduces to the dominant chamber of `W(D5)` by always reflecting in the
/// lowest-index simple root with negative pairing.
pub fn d5_dominate(mut y: PicardClass) -> Result<(Vec<usize>, PicardClass)> {
    let roots = simple_roots(4)?;
    let mut word = Vec::new();
    loop {
        // pairing (y, beta) = -y.beta
        let neg = roots
            .iter()
            .position(|b| intersect(&y, b.class()).map(|t| t > 0).unwrap_or(false));
        match neg {
            Some(i) => {
                y = reflect(&roots[i], &y)?;
                word.push(i + 1);
            }
            None => return Ok((word, y)),
        }
    }
}

pub fn d5_canonical_form(x: &PicardClass) -> Result<D5Canonical> {
    let y = scaled_projection(x)?;
    let (word, dom) = d5_dominate(y)?;
    Ok(D5Canonical {
        word,
        rep: RationalClass::new(4, dom.coeffs, 4),
    })
}

/// Replays a `W(D5)` word (1-based simple-root indices) on a degree-4 class.
pub fn apply_d5_word(word: &[usize], x: &PicardClass) -> Result<PicardClass> {
    let roots = simple_roots(4)?;
    word.iter().try_fold(x.clone(), |acc, &i| {
        let r = roots
            .get(i.wrapping_sub(1))
            .ok_or_else(|| Error::Precondition(format!("no simple root with index {i}")))?;
        reflect(r, &acc)
    })
}

/// True when two degree-4 classes have the same degree and `W(D5)`-conjugate
/// projections.
pub fn same_d5_orbit(a: &PicardClass, b: &PicardClass) -> Result<bool> {
    Ok(degree_of(a) == degree_of(b) && d5_canonical_form(a)?.rep == d5_canonical_form(b)?.rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4(v: &[i64]) -> PicardClass {
        PicardClass::new(4, v.to_vec()).unwrap()
    }

    #[test]
    fn basis_products() {
        let s = PicardClass::s(4).unwrap();
        let f = PicardClass::f(4).unwrap();
        let e1 = PicardClass::e(4, 1).unwrap();
        assert_eq!(intersect(&s, &f).unwrap(), 1);
        assert_eq!(intersect(&e1, &e1).unwrap(), -1);
        assert_eq!(intersect(&s, &s).unwrap(), 0);
        let q4 = anticanonical(4).unwrap();
        assert_eq!(intersect(&q4, &q4).unwrap(), 4);
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let a = PicardClass::s(4).unwrap();
        let b = PicardClass::s(3).unwrap();
        assert_eq!(intersect(&a, &b), Err(Error::DegreeMismatch(4, 3)));
    }

    #[test]
    fn anticanonical_classes() {
        assert_eq!(anticanonical(4).unwrap().coeffs(), &[2, 2, -1, -1, -1, -1]);
        for k in 1..=8 {
            let q = anticanonical(k).unwrap();
            assert_eq!(q.square(), k);
        }
        assert_eq!(anticanonical(8).unwrap().coeffs(), &[2, 2]);
        assert!(anticanonical(0).is_err());
        assert!(anticanonical(9).is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(degree_of(&PicardClass::s(4).unwrap()), 2);
        assert_eq!(degree_of(&PicardClass::e(4, 4).unwrap()), 1);
        assert_eq!(degree_of(&anticanonical(4).unwrap()), 4);
    }

    #[test]
    fn d_ab_examples() {
        assert_eq!(d_ab(1, 0).unwrap(), PicardClass::e(4, 4).unwrap());
        assert_eq!(d_ab(1, 1).unwrap(), PicardClass::s(4).unwrap());
        assert_eq!(d_ab(-1, -1).unwrap(), c4(&[-1, -2, 1, 1, 1, 1]));
        assert_eq!(d_ab(2, 4), Err(Error::InvalidParity(2, 4)));
    }

    #[test]
    fn d_ab_invariants() {
        for a in -20..=20i64 {
            for b in -20..=20i64 {
                if a % 2 == 0 && b % 2 == 0 {
                    continue;
                }
                let d = d_ab(a, b).unwrap();
                assert_eq!(degree_of(&d), a + b, "degree of D_{a},{b}");
                assert_eq!(d.square(), a * b - 1, "square of D_{a},{b}");
            }
        }
    }

    #[test]
    fn d_ab_remark_for_rank_one() {
        // D_{d-1,1} = s + (d/2 - 1) f for d even, s + ((d-1)/2) f - e1 for d odd
        for d in -9..=9i64 {
            let got = d_ab(d - 1, 1).unwrap();
            let want = if d % 2 == 0 {
                c4(&[1, d / 2 - 1, 0, 0, 0, 0])
            } else {
                c4(&[1, (d - 1) / 2, -1, 0, 0, 0])
            };
            assert_eq!(got, want, "d = {d}");
        }
    }

    #[test]
    fn reflections() {
        let roots = simple_roots(4).unwrap();
        let s = PicardClass::s(4).unwrap();
        let f = PicardClass::f(4).unwrap();
        assert_eq!(reflect(&roots[0], &s).unwrap(), f);
        let e1 = PicardClass::e(4, 1).unwrap();
        let e2 = PicardClass::e(4, 2).unwrap();
        assert_eq!(reflect(&roots[2], &e1).unwrap(), e2);
        let q = anticanonical(4).unwrap();
        for r in &roots {
            assert_eq!(reflect(r, &q).unwrap(), q);
        }
    }

    #[test]
    fn simple_root_counts() {
        let counts: Vec<usize> = (1..=8).map(|k| simple_roots(k).unwrap().len()).collect();
        assert_eq!(counts, vec![8, 7, 6, 5, 4, 3, 1, 1]);
    }

    #[test]
    fn pullbacks() {
        let q4 = anticanonical(4).unwrap();
        let p = pullback(&q4, 1).unwrap();
        assert_eq!(p.coeffs(), &[2, 2, -1, -1, -1, -1, 0, 0, 0]);
        let q1 = anticanonical(1).unwrap();
        assert_eq!(intersect(&p, &q1).unwrap(), 4);
        let s = PicardClass::s(4).unwrap();
        assert_eq!(intersect(&pullback(&s, 1).unwrap(), &q1).unwrap(), 2);
        let e4 = d_ab(1, 0).unwrap();
        assert_eq!(
            pullback(&e4, 1).unwrap().coeffs(),
            &[0, 0, 0, 0, 0, 1, 0, 0, 0]
        );
        assert!(pullback(&q4, 4).is_err());
        assert!(pullback(&q4, 5).is_err());
        assert_eq!(descend(&p, 4).unwrap(), q4);
        assert!(descend(&q1, 4).is_err());
    }

    #[test]
    fn canonical_forms() {
        let q = anticanonical(4).unwrap();
        assert!(d5_canonical_form(&q).unwrap().rep.is_zero());
        assert!(same_d5_orbit(&d_ab(2, 1).unwrap(), &d_ab(1, 2).unwrap()).unwrap());
        let lhs = q.scale(2).try_sub(&d_ab(2, 1).unwrap()).unwrap();
        assert!(same_d5_orbit(&lhs, &d_ab(2, 3).unwrap()).unwrap());
    }

    #[test]
    fn canonical_word_replays() {
        let x = c4(&[3, -2, 5, 0, -1, 2]);
        let canon = d5_canonical_form(&x).unwrap();
        let y = apply_d5_word(&canon.word, &x).unwrap();
        let again = d5_canonical_form(&y).unwrap();
        assert!(again.word.is_empty());
        assert_eq!(again.rep, canon.rep);
    }
}
