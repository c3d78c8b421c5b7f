//! The `E8` root lattice in Bourbaki coordinates.
//!
//! Simple roots are numbered as in Bourbaki: `a1 = (e1+e8-e2-...-e7)/2`,
//! `a2 = e1+e2`, `a3 = e2-e1`, `a4 = e3-e2`, ..., `a8 = e7-e6`, with the
//! branch node `a4`. The highest root is `e7+e8 = w8`.
//!
//! Vectors are exact rationals stored as integer numerators over one common
//! denominator, so lattice membership is an integer predicate.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::picard::{self, anticanonical, intersect, PicardClass};
use crate::rational::{fmt_rational, lcm, normalize, Rational};

/// A rational vector of `Lambda_E8 (x) Q` in the `e_1..e_8` coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpsVector {
    num: [i64; 8],
    den: i64,
}

impl EpsVector {
    pub fn new(mut num: [i64; 8], mut den: i64) -> Self {
        normalize(&mut num, &mut den);
        EpsVector { num, den }
    }

    pub fn from_ints(v: [i64; 8]) -> Self {
        Self::new(v, 1)
    }

    /// From doubled coordinates, i.e. the vector `v / 2`.
    pub fn from_doubled(v: [i64; 8]) -> Self {
        Self::new(v, 2)
    }

    pub fn from_rationals(c: &[Rational; 8]) -> Self {
        let den = c.iter().fold(1, |acc, q| lcm(acc, *q.denom()));
        let mut num = [0i64; 8];
        for (n, q) in num.iter_mut().zip(c) {
            *n = q.numer() * (den / q.denom());
        }
        Self::new(num, den)
    }

    pub fn zero() -> Self {
        Self::from_ints([0; 8])
    }

    /// The basis vector `e_i`, `i` in `1..=8`.
    pub fn unit(i: usize) -> Self {
        let mut v = [0; 8];
        v[i - 1] = 1;
        Self::from_ints(v)
    }

    pub fn coords(&self) -> [Rational; 8] {
        self.num.map(|n| Rational::new(n, self.den))
    }

    pub fn numerators(&self) -> &[i64; 8] {
        &self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&n| n == 0)
    }

    /// All coordinates integral or all half-integral, with even sum.
    pub fn is_lattice(&self) -> bool {
        let sum: i64 = self.num.iter().sum();
        match self.den {
            1 => sum.rem_euclid(2) == 0,
            2 => self.num.iter().all(|n| n.rem_euclid(2) == 1) && sum.rem_euclid(4) == 0,
            _ => false,
        }
    }

    pub fn dot(&self, other: &Self) -> Rational {
        let s: i128 = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| *a as i128 * *b as i128)
            .sum();
        let d = self.den as i128 * other.den as i128;
        let g = gcd_i128(s, d);
        Rational::new((s / g) as i64, (d / g) as i64)
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    fn combine(&self, a: i64, other: &Self, b: Rational) -> Self {
        // a * self + b * other
        let den = lcm(self.den, other.den * b.denom());
        let ls = den / self.den;
        let lo = den / (other.den * b.denom());
        let mut num = [0i64; 8];
        for i in 0..8 {
            num[i] = a * self.num[i] * ls + b.numer() * other.num[i] * lo;
        }
        Self::new(num, den)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(1, other, Rational::from_integer(1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(1, other, Rational::from_integer(-1))
    }

    pub fn scale(&self, c: Rational) -> Self {
        Self::new(self.num.map(|n| n * c.numer()), self.den * c.denom())
    }

    pub fn neg(&self) -> Self {
        self.scale(Rational::from_integer(-1))
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: Rational, other: &Self) -> Self {
        self.combine(1, other, c)
    }

    /// Reflection in a root (`(root, root) = 2`).
    pub fn reflect(&self, root: &Self) -> Self {
        self.add_scaled(-self.dot(root), root)
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl fmt::Display for EpsVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(fmt_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for EpsVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.coords().iter().map(fmt_rational).collect();
        parts.serialize(s)
    }
}

/// Fixed data of the `E8` root system.
#[derive(Debug)]
pub struct RootSystemData {
    /// `simple[i]` is `a_{i+1}`.
    pub simple: [EpsVector; 8],
    /// `weights[i]` is `w_{i+1}`.
    pub weights: [EpsVector; 8],
    pub highest: EpsVector,
    /// All 240 roots, sorted.
    pub roots: Vec<EpsVector>,
    /// Vertices of the fundamental alcove, in the order `w1/2, w2/3, w3/4,
    /// w4/6, w5/5, w6/4, w7/3, w8/2, 0`.
    pub alcove_vertices: Vec<EpsVector>,
    /// Highest-root coefficients `m_i` with `a~ = sum m_i a_i`.
    pub marks: [i64; 8],
    /// Weyl vector, the sum of the fundamental weights.
    pub weyl_vector: EpsVector,
}

pub fn root_system() -> &'static RootSystemData {
    static DATA: OnceLock<RootSystemData> = OnceLock::new();
    DATA.get_or_init(build_root_system)
}

fn build_root_system() -> RootSystemData {
    let h = EpsVector::from_doubled;
    let i = EpsVector::from_ints;
    let simple = [
        h([1, -1, -1, -1, -1, -1, -1, 1]),
        i([1, 1, 0, 0, 0, 0, 0, 0]),
        i([-1, 1, 0, 0, 0, 0, 0, 0]),
        i([0, -1, 1, 0, 0, 0, 0, 0]),
        i([0, 0, -1, 1, 0, 0, 0, 0]),
        i([0, 0, 0, -1, 1, 0, 0, 0]),
        i([0, 0, 0, 0, -1, 1, 0, 0]),
        i([0, 0, 0, 0, 0, -1, 1, 0]),
    ];
    let weights = [
        i([0, 0, 0, 0, 0, 0, 0, 2]),
        h([1, 1, 1, 1, 1, 1, 1, 5]),
        h([-1, 1, 1, 1, 1, 1, 1, 7]),
        i([0, 0, 1, 1, 1, 1, 1, 5]),
        i([0, 0, 0, 1, 1, 1, 1, 4]),
        i([0, 0, 0, 0, 1, 1, 1, 3]),
        i([0, 0, 0, 0, 0, 1, 1, 2]),
        i([0, 0, 0, 0, 0, 0, 1, 1]),
    ];
    let highest = i([0, 0, 0, 0, 0, 0, 1, 1]);
    let marks = [2, 3, 4, 6, 5, 4, 3, 2];

    let mut roots = Vec::with_capacity(240);
    for a in 0..8 {
        for b in (a + 1)..8 {
            for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = [0; 8];
                v[a] = sa;
                v[b] = sb;
                roots.push(i(v));
            }
        }
    }
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            let mut v = [1; 8];
            for (bit, c) in v.iter_mut().enumerate() {
                if mask & (1 << bit) != 0 {
                    *c = -1;
                }
            }
            roots.push(h(v));
        }
    }
    roots.sort();

    let mut alcove_vertices: Vec<EpsVector> = weights
        .iter()
        .zip(marks)
        .map(|(w, m)| w.scale(Rational::new(1, m)))
        .collect();
    alcove_vertices.push(EpsVector::zero());

    let weyl_vector = weights.iter().fold(EpsVector::zero(), |acc, w| acc.add(w));

    RootSystemData {
        simple,
        weights,
        highest,
        roots,
        alcove_vertices,
        marks,
        weyl_vector,
    }
}

/// `E8` Cartan matrix in Bourbaki numbering.
pub fn cartan_matrix() -> [[i64; 8]; 8] {
    let mut m = [[0; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in [(1, 3), (3, 4), (2, 4), (4, 5), (5, 6), (6, 7), (7, 8)] {
        m[a - 1][b - 1] = -1;
        m[b - 1][a - 1] = -1;
    }
    m
}

/// A word in the affine Weyl group generators. Letter `0` is the affine
/// reflection in the wall `(x, a~) = 1`, letters `1..=8` are the finite
/// simple reflections. Letters are applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct WeylWord(pub Vec<u8>);

impl WeylWord {
    pub fn identity() -> Self {
        WeylWord(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|&l| (1..=8).contains(&l))
    }

    pub fn uses_only(&self, allowed: std::ops::RangeInclusive<u8>) -> bool {
        self.0.iter().all(|l| allowed.contains(l))
    }

    /// The inverse word. Every generator is an involution.
    pub fn inverse(&self) -> Self {
        WeylWord(self.0.iter().rev().copied().collect())
    }

    pub fn then(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        WeylWord(v)
    }

    /// Replays the word, including affine letters.
    pub fn apply(&self, x: &EpsVector) -> EpsVector {
        self.0.iter().fold(x.clone(), |acc, &l| apply_letter(l, &acc))
    }

    /// Replays the linear part only: letter `0` acts as the reflection in `a~`.
    pub fn apply_linear(&self, x: &EpsVector) -> EpsVector {
        let rs = root_system();
        self.0.iter().fold(x.clone(), |acc, &l| {
            if l == 0 {
                acc.reflect(&rs.highest)
            } else {
                acc.reflect(&rs.simple[l as usize - 1])
            }
        })
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

fn apply_letter(l: u8, x: &EpsVector) -> EpsVector {
    let rs = root_system();
    if l == 0 {
        // x - ((x, a~) - 1) a~
        let t = x.dot(&rs.highest) - Rational::from_integer(1);
        x.add_scaled(-t, &rs.highest)
    } else {
        x.reflect(&rs.simple[l as usize - 1])
    }
}

fn dominate(x: &EpsVector, letters: std::ops::RangeInclusive<usize>) -> (WeylWord, EpsVector) {
    let rs = root_system();
    let mut y = x.clone();
    let mut word = Vec::new();
    loop {
        let neg = letters
            .clone()
            .find(|&i| y.dot(&rs.simple[i - 1]) < Rational::from_integer(0));
        match neg {
            Some(i) => {
                y = y.reflect(&rs.simple[i - 1]);
                word.push(i as u8);
            }
            None => return (WeylWord(word), y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub word: WeylWord,
    pub result: EpsVector,
}

/// Moves `x` into the dominant chamber of `W(E8)`.
pub fn chamber_reduce(x: &EpsVector) -> Reduction {
    let (word, result) = dominate(x, 1..=8);
    Reduction { word, result }
}

/// Moves `x` into the dominant chamber of `W(D5) = <s_1, ..., s_5>`.
pub fn d5_reduce(x: &EpsVector) -> Reduction {
    let (word, result) = dominate(x, 1..=5);
    Reduction { word, result }
}

/// Reduction into the fundamental alcove: `result = w(x + shift)` where `w`
/// is the linear part of `word` and `shift` is a lattice vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlcoveReduction {
    pub word: WeylWord,
    pub shift: EpsVector,
    pub result: EpsVector,
}

pub fn alcove_reduce(x: &EpsVector) -> AlcoveReduction {
    let rs = root_system();
    let one = Rational::from_integer(1);
    let mut y = x.clone();
    let mut word: Vec<u8> = Vec::new();
    loop {
        let (w, dom) = dominate(&y, 1..=8);
        word.extend_from_slice(&w.0);
        y = dom;
        if y.dot(&rs.highest) > one {
            y = apply_letter(0, &y);
            word.push(0);
        } else {
            break;
        }
    }
    let word = WeylWord(word);
    // result = w(x) + t with t a lattice vector, so shift = w^{-1}(t)
    let t = y.sub(&word.apply_linear(x));
    let shift = word.inverse().apply_linear(&t);
    AlcoveReduction {
        word,
        shift,
        result: y,
    }
}

/// `(x, a) <= 1` for all 240 roots.
pub fn voronoi_contains(x: &EpsVector) -> bool {
    let one = Rational::from_integer(1);
    root_system().roots.iter().all(|a| x.dot(a) <= one)
}

pub fn alcove_contains(x: &EpsVector) -> bool {
    let rs = root_system();
    let zero = Rational::from_integer(0);
    rs.simple.iter().all(|a| x.dot(a) >= zero) && x.dot(&rs.highest) <= Rational::from_integer(1)
}

/// Finite Weyl element with the given action, as a word in simple reflections.
pub fn word_of(action: impl Fn(&EpsVector) -> EpsVector) -> WeylWord {
    let rho = &root_system().weyl_vector;
    // u(g(rho)) = rho with rho regular forces u g = 1
    chamber_reduce(&action(rho)).word.inverse()
}

// ---- Pic(X_1) dictionary ----

/// Bourbaki label of each `Pic(X_1)` simple root in [`picard::simple_roots`]
/// order `s-f, f-e1-e2, e1-e2, e2-e3, e3-e4, e4-e5, e5-e6, e6-e7`.
pub const PIC_TO_BOURBAKI: [usize; 8] = [1, 3, 2, 4, 5, 6, 7, 8];

/// Position in [`picard::simple_roots`]`(1)` of the root matched to `a_i`.
pub fn pic_root_for(alpha: usize) -> usize {
    PIC_TO_BOURBAKI
        .iter()
        .position(|&b| b == alpha)
        .expect("alpha in 1..=8")
}

/// `x - (x.Q_1) Q_1`, the projection of a degree-1 class to `Q_1^perp`.
pub fn project_q1(x: &PicardClass) -> Result<PicardClass> {
    if x.surface_degree() != 1 {
        return Err(Error::DegreeMismatch(x.surface_degree(), 1));
    }
    let q = anticanonical(1)?;
    x.try_sub(&q.scale(intersect(x, &q)?))
}

/// The isometry `Q_1^perp -> Lambda_E8`, `x -> sum_j (x, beta_j) w_j` with
/// `(x, y) = -x.y` on the Picard side. With `project` set, classes of nonzero
/// degree are first projected to `Q_1^perp`.
pub fn pic_to_eps(x: &PicardClass, project: bool) -> Result<EpsVector> {
    if x.surface_degree() != 1 {
        return Err(Error::DegreeMismatch(x.surface_degree(), 1));
    }
    let q = anticanonical(1)?;
    let deg = intersect(x, &q)?;
    let v = if deg != 0 {
        if !project {
            return Err(Error::NonzeroDegree(deg));
        }
        project_q1(x)?
    } else {
        x.clone()
    };
    let rs = root_system();
    let roots = picard::simple_roots(1)?;
    let mut out = EpsVector::zero();
    for (j, beta) in roots.iter().enumerate() {
        let pairing = -intersect(&v, beta.class())?;
        out = out.add_scaled(
            Rational::from_integer(pairing),
            &rs.weights[PIC_TO_BOURBAKI[j] - 1],
        );
    }
    Ok(out)
}

/// Inverse of [`pic_to_eps`] on lattice vectors.
pub fn eps_to_pic(y: &EpsVector) -> Result<PicardClass> {
    let rs = root_system();
    let roots = picard::simple_roots(1)?;
    let mut out = PicardClass::zero(1)?;
    for (j, beta) in roots.iter().enumerate() {
        // coefficient of a_i in y is (y, w_i)
        let c = y.dot(&rs.weights[PIC_TO_BOURBAKI[j] - 1]);
        if !c.is_integer() {
            return Err(Error::NotInLattice(y.to_string()));
        }
        out = out.try_add(&beta.class().scale(c.to_integer()))?;
    }
    Ok(out)
}

/// Replays a finite word (letters `1..=8`, Bourbaki labels) on `Pic(X_1)`.
pub fn apply_word_pic(word: &WeylWord, x: &PicardClass) -> Result<PicardClass> {
    if !word.is_finite() {
        return Err(Error::Precondition(format!(
            "word {word} has letters outside 1..=8"
        )));
    }
    let roots = picard::simple_roots(1)?;
    word.letters().iter().try_fold(x.clone(), |acc, &l| {
        picard::reflect(&roots[pic_root_for(l as usize)], &acc)
    })
}
