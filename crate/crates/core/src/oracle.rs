//! Brute-force oracles for the finite computations behind the sporadic
//! classification: unit vectors in a rank-4 lattice cone, fixed-norm lattice
//! points in the `E8` alcove, `W(D5)` orbit identities, and structural
//! identities of the `E8`/`Pic(X_1)` dictionary.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::e8::{
    alcove_contains, cartan_matrix, pic_to_eps, root_system, EpsVector, PIC_TO_BOURBAKI,
};
use crate::error::{Error, Result};
use crate::picard::{
    anticanonical, d_ab, d5_canonical_form, intersect, pullback, reflect, simple_roots,
    PicardClass,
};
use crate::rational::{fmt_rational, Rational};

// ---- unit vectors ----

/// A vector of the lattice `M` of half-integral 4-vectors whose entries
/// differ pairwise by integers, stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfIntQuad(pub [i64; 4]);

impl HalfIntQuad {
    pub fn from_doubled(v: [i64; 4]) -> Option<Self> {
        let p = v[0].rem_euclid(2);
        v.iter().all(|c| c.rem_euclid(2) == p).then_some(HalfIntQuad(v))
    }

    /// Four times the squared length.
    pub fn norm4(&self) -> i64 {
        self.0.iter().map(|c| c * c).sum()
    }

    /// Nonnegative combination of `e1+e2+e3+e4`, `-e1+e2+e3+e4`, `e3+e4`,
    /// `e4`: solving gives `x2 >= |x1|`, `x3 >= x2`, `x4 >= x3`.
    pub fn in_cone(&self) -> bool {
        let [x1, x2, x3, x4] = self.0;
        x2 >= x1.abs() && x3 >= x2 && x4 >= x3
    }

    pub fn coords(&self) -> [Rational; 4] {
        self.0.map(|c| Rational::new(c, 2))
    }
}

impl Serialize for HalfIntQuad {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.coords().iter().map(fmt_rational).collect();
        parts.serialize(s)
    }
}

/// All unit vectors of `M` in the cone, most nonzero entries first, then
/// lexicographically descending.
pub fn enum_unit_vectors() -> Vec<HalfIntQuad> {
    let mut out = Vec::new();
    for a in -2..=2 {
        for b in -2..=2 {
            for c in -2..=2 {
                for d in -2..=2 {
                    if let Some(q) = HalfIntQuad::from_doubled([a, b, c, d]) {
                        if q.norm4() == 4 && q.in_cone() {
                            out.push(q);
                        }
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| {
        let nz = |q: &HalfIntQuad| q.0.iter().filter(|&&c| c != 0).count();
        nz(y).cmp(&nz(x)).then(y.cmp(x))
    });
    out
}

// ---- alcove solutions ----

/// A lattice vector `v` with `v/r` in the fundamental alcove and
/// `(v,v) = r^2 - rd + d^2 + 1`, tagged with `m = (r w1/2 - v, w1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AlcoveSolution {
    pub d: i64,
    pub r: i64,
    pub v: EpsVector,
    pub m: i64,
}

pub const LEMMA_PAIRS: [(i64, i64); 8] = [
    (1, 7),
    (1, 8),
    (1, 9),
    (1, 10),
    (1, 11),
    (2, 15),
    (2, 17),
    (3, 23),
];

pub const MAX_ALCOVE_RANK: i64 = 30;

/// Exhaustive search in doubled coordinates `y = 2v`. The alcove conditions
/// read `|y1| <= y2 <= ... <= y7`, `y7 + y8 <= 2r` and
/// `y1 + y8 >= y2 + ... + y7`; the lattice needs a common parity and
/// `sum y = 0 mod 4`. Coordinates are fixed from `y8` downward with the
/// running norm budget, and shards over `y8` run in parallel.
pub fn enum_alcove_solutions(d: i64, r: i64) -> Result<Vec<AlcoveSolution>> {
    if r <= 0 {
        return Err(Error::NonPositiveRank(r));
    }
    if r > MAX_ALCOVE_RANK {
        return Err(Error::Budget(format!(
            "rank {r} exceeds the supported bound {MAX_ALCOVE_RANK}"
        )));
    }
    let n4 = 4 * (r * r - r * d + d * d + 1);
    let top = (n4 as f64).sqrt() as i64 + 1;
    let shards: Vec<(i64, i64)> = (0..=1)
        .flat_map(|p| (0..=top.min(2 * r)).filter(move |y8| y8 % 2 == p).map(move |y8| (p, y8)))
        .collect();
    let mut out: Vec<AlcoveSolution> = shards
        .par_iter()
        .flat_map_iter(|&(p, y8)| {
            let mut found = Vec::new();
            let mut y = [0i64; 8];
            y[7] = y8;
            let budget = n4 - y8 * y8;
            if budget >= 0 {
                let cap = (2 * r - y8).min(isqrt(budget));
                descend(&mut y, 6, cap, budget, 0, p, &mut found);
            }
            found
        })
        .map(|y| {
            let v = EpsVector::from_doubled(y);
            AlcoveSolution {
                d,
                r,
                m: 2 * r - y[7],
                v,
            }
        })
        .collect();
    out.sort();
    Ok(out)
}

fn isqrt(n: i64) -> i64 {
    let mut s = (n as f64).sqrt() as i64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

/// Chooses `y[idx]` for `idx` in `1..=6` (0-based), nonincreasing, with
/// `partial = y[idx+1] + ... + y[6]`.
fn descend(
    y: &mut [i64; 8],
    idx: usize,
    cap: i64,
    budget: i64,
    partial: i64,
    p: i64,
    found: &mut Vec<[i64; 8]>,
) {
    let y8 = y[7];
    let mut c = cap;
    if c.rem_euclid(2) != p {
        c -= 1;
    }
    while c >= 0 {
        let b = budget - c * c;
        // remaining coordinates y[0..idx] are bounded by c in absolute value
        if b >= 0 && b <= (idx as i64) * c * c {
            if idx == 1 {
                // y3..y7 sum to at most y8 because y1 <= y2
                finish(y, c, b, partial, p, found);
            } else if partial + c <= y8 {
                y[idx] = c;
                descend(y, idx - 1, c, b, partial + c, p, found);
            }
        }
        c -= 2;
    }
}

fn finish(y: &mut [i64; 8], y2: i64, budget: i64, partial: i64, p: i64, found: &mut Vec<[i64; 8]>) {
    let y8 = y[7];
    let s = isqrt(budget);
    if s * s != budget || s.rem_euclid(2) != p || s > y2 {
        return;
    }
    let sum27 = partial + y2;
    let cands: &[i64] = if s == 0 { &[0] } else { &[s, -s] };
    for &y1 in cands {
        if y1 + y8 < sum27 {
            continue;
        }
        let mut v = *y;
        v[1] = y2;
        v[0] = y1;
        if v.iter().sum::<i64>().rem_euclid(4) == 0 {
            found.push(v);
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlcoveLemmaCase {
    pub d: i64,
    pub r: i64,
    pub solutions: usize,
    /// Distinct values of `m`, ascending.
    pub m_values: Vec<i64>,
    pub passed: bool,
    pub exceptional: Vec<AlcoveSolution>,
}

/// For each listed pair: every solution has `m = d`, except `(2, 15)` which
/// additionally has exactly `5 w2` at `m/r = 1/3`.
pub fn check_alcove_lemma() -> Result<Vec<AlcoveLemmaCase>> {
    let five_w2 = root_system().weights[1].scale(Rational::from_integer(5));
    LEMMA_PAIRS
        .iter()
        .map(|&(d, r)| {
            let sols = enum_alcove_solutions(d, r)?;
            let m_values: Vec<i64> = sols.iter().map(|s| s.m).collect::<BTreeSet<_>>().into_iter().collect();
            let exceptional: Vec<AlcoveSolution> =
                sols.iter().filter(|s| s.m != d).cloned().collect();
            let passed = if (d, r) == (2, 15) {
                exceptional.len() == 1
                    && exceptional[0].v == five_w2
                    && Rational::new(exceptional[0].m, r) == Rational::new(1, 3)
                    && exceptional[0].v.norm2() == Rational::from_integer(200)
            } else {
                exceptional.is_empty()
            };
            Ok(AlcoveLemmaCase {
                d,
                r,
                solutions: sols.len(),
                m_values,
                passed,
                exceptional,
            })
        })
        .collect()
}

// ---- W(D5) ----

/// The group generated by the five degree-4 simple reflections, as integer
/// matrices on coefficient vectors `(s, f, e1, .., e4)`.
#[derive(Debug, Clone)]
pub struct D5Group {
    pub elements: Vec<[[i64; 6]; 6]>,
}

fn reflection_matrix(beta: &PicardClass) -> Result<[[i64; 6]; 6]> {
    let roots = simple_roots(4)?;
    let root = roots
        .into_iter()
        .find(|r| r.class() == beta)
        .ok_or_else(|| Error::NotARoot(beta.to_string()))?;
    let mut m = [[0; 6]; 6];
    for j in 0..6 {
        let mut basis = vec![0; 6];
        basis[j] = 1;
        let img = reflect(&root, &PicardClass::new(4, basis)?)?;
        for (i, c) in img.coeffs().iter().enumerate() {
            m[i][j] = *c;
        }
    }
    Ok(m)
}

fn mat_mul(a: &[[i64; 6]; 6], b: &[[i64; 6]; 6]) -> [[i64; 6]; 6] {
    let mut m = [[0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            m[i][j] = (0..6).map(|t| a[i][t] * b[t][j]).sum();
        }
    }
    m
}

impl D5Group {
    pub fn generate() -> Result<Self> {
        Self::generated_by(&(1..=5).collect::<Vec<_>>())
    }

    /// Subgroup generated by the listed simple reflections (1-based).
    pub fn generated_by(indices: &[usize]) -> Result<Self> {
        let roots = simple_roots(4)?;
        let gens: Vec<[[i64; 6]; 6]> = indices
            .iter()
            .map(|&i| reflection_matrix(roots[i - 1].class()))
            .collect::<Result<_>>()?;
        let mut id = [[0; 6]; 6];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = 1;
        }
        let mut seen = HashSet::from([id]);
        let mut queue = VecDeque::from([id]);
        let mut elements = vec![id];
        while let Some(g) = queue.pop_front() {
            for s in &gens {
                let h = mat_mul(s, &g);
                if seen.insert(h) {
                    elements.push(h);
                    queue.push_back(h);
                }
            }
        }
        Ok(D5Group { elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn apply(g: &[[i64; 6]; 6], x: &PicardClass) -> PicardClass {
        let c = x.coeffs();
        let v: Vec<i64> = (0..6).map(|i| (0..6).map(|j| g[i][j] * c[j]).sum()).collect();
        PicardClass::new(4, v).expect("degree-4 coefficients")
    }

    pub fn orbit(&self, x: &PicardClass) -> BTreeSet<Vec<i64>> {
        self.elements
            .iter()
            .map(|g| Self::apply(g, x).coeffs().to_vec())
            .collect()
    }
}

/// `|W(D5)| / |Stab|`, with the stabilizer of the dominant representative
/// generated by the simple reflections that fix it.
pub fn orbit_size_via_stabilizer(group_order: usize, x: &PicardClass) -> Result<usize> {
    let canon = d5_canonical_form(x)?;
    let dom = PicardClass::new(4, canon.rep.coords().iter().map(|c| (c * 4).to_integer()).collect())?;
    let roots = simple_roots(4)?;
    let fixing: Vec<usize> = roots
        .iter()
        .enumerate()
        .filter(|(_, b)| intersect(&dom, b.class()).map(|t| t == 0).unwrap_or(false))
        .map(|(i, _)| i + 1)
        .collect();
    let stab = D5Group::generated_by(&fixing)?.order();
    Ok(group_order / stab)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitIdentity {
    /// `D_ab ~ D_ba`.
    Swap,
    /// `D_ab ~ -D_{-a,-b}`.
    Negate,
    /// `aQ - D_ab ~ D_{a,2a-b}`.
    Reflect,
}

pub const ORBIT_IDENTITIES: [OrbitIdentity; 3] =
    [OrbitIdentity::Swap, OrbitIdentity::Negate, OrbitIdentity::Reflect];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitOutcome {
    pub a: i64,
    pub b: i64,
    pub identity: OrbitIdentity,
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
    pub agree: bool,
}

pub fn orbit_identity_sides(
    a: i64,
    b: i64,
    id: OrbitIdentity,
) -> Result<(PicardClass, PicardClass)> {
    let dab = d_ab(a, b)?;
    Ok(match id {
        OrbitIdentity::Swap => (dab, d_ab(b, a)?),
        OrbitIdentity::Negate => (dab, d_ab(-a, -b)?.scale(-1)),
        OrbitIdentity::Reflect => (anticanonical(4)?.scale(a).try_sub(&dab)?, d_ab(a, 2 * a - b)?),
    })
}

/// The three identities for one `(a, b)`.
pub fn check_orbit_identities(a: i64, b: i64) -> Result<Vec<OrbitOutcome>> {
    ORBIT_IDENTITIES
        .iter()
        .map(|&id| {
            let (l, r) = orbit_identity_sides(a, b, id)?;
            let agree = crate::picard::same_d5_orbit(&l, &r)?;
            Ok(OrbitOutcome {
                a,
                b,
                identity: id,
                lhs: l.coeffs().to_vec(),
                rhs: r.coeffs().to_vec(),
                agree,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitSizeCheck {
    pub class: Vec<i64>,
    pub explicit: usize,
    pub via_stabilizer: usize,
    pub partner_in_orbit: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WorbitReport {
    pub bound: i64,
    pub pairs: usize,
    pub checks: usize,
    pub failures: Vec<OrbitOutcome>,
    pub group_order: usize,
    pub orbit_sizes: Vec<OrbitSizeCheck>,
    pub passed: bool,
}

pub const MAX_WORBIT_BOUND: i64 = 12;

/// Fixture pairs whose orbits are also enumerated explicitly.
pub const ORBIT_FIXTURES: [(i64, i64); 5] = [(2, 1), (1, 0), (1, 1), (-1, -1), (3, -2)];

pub fn check_worbit_identities(bound: i64) -> Result<WorbitReport> {
    if !(0..=MAX_WORBIT_BOUND).contains(&bound) {
        return Err(Error::Budget(format!(
            "bound {bound} outside 0..={MAX_WORBIT_BOUND}"
        )));
    }
    let pairs: Vec<(i64, i64)> = (-bound..=bound)
        .flat_map(|a| (-bound..=bound).map(move |b| (a, b)))
        .filter(|(a, b)| a % 2 != 0 || b % 2 != 0)
        .collect();
    let outcomes: Vec<OrbitOutcome> = pairs
        .par_iter()
        .map(|&(a, b)| check_orbit_identities(a, b))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let checks = outcomes.len();
    let failures: Vec<OrbitOutcome> = outcomes.into_iter().filter(|o| !o.agree).collect();

    let group = D5Group::generate()?;
    let mut orbit_sizes = Vec::new();
    for (a, b) in ORBIT_FIXTURES {
        for id in ORBIT_IDENTITIES {
            let (l, r) = orbit_identity_sides(a, b, id)?;
            let orbit = group.orbit(&l);
            orbit_sizes.push(OrbitSizeCheck {
                class: l.coeffs().to_vec(),
                explicit: orbit.len(),
                via_stabilizer: orbit_size_via_stabilizer(group.order(), &l)?,
                partner_in_orbit: orbit.contains(r.coeffs()),
            });
        }
    }
    let passed = failures.is_empty()
        && group.order() == 1920
        && orbit_sizes
            .iter()
            .all(|o| o.explicit == o.via_stabilizer && o.partner_in_orbit);
    Ok(WorbitReport {
        bound,
        pairs: pairs.len(),
        checks,
        failures,
        group_order: group.order(),
        orbit_sizes,
        passed,
    })
}

// ---- structural identities ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub lhs: String,
    pub rhs: String,
}

impl IdentityCheck {
    fn eq<T: PartialEq + std::fmt::Debug>(name: &str, lhs: T, rhs: T) -> Self {
        IdentityCheck {
            name: name.into(),
            passed: lhs == rhs,
            lhs: format!("{lhs:?}"),
            rhs: format!("{rhs:?}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StructuralReport {
    /// Simple roots in use, Bourbaki numbering.
    pub root_ordering: Vec<String>,
    pub checks: Vec<IdentityCheck>,
    /// Continuous bounds are only checked at vertices and edge points.
    pub verification_level: &'static str,
    pub passed: bool,
}

fn eps_list(v: &[EpsVector]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Vertices of `H_delta` meeting `A'`, on the rays from `w1/2` to the other
/// alcove vertices.
pub fn slice_vertices(delta: Rational) -> Vec<EpsVector> {
    let rs = root_system();
    let apex = EpsVector::unit(8);
    let one = Rational::from_integer(1);
    let mut out: Vec<EpsVector> = rs.alcove_vertices[1..]
        .iter()
        .map(|p| {
            // y = t (apex - p) and (y, w1) = 2 t (1 - p_8) = delta
            let t = delta / (Rational::from_integer(2) * (one - p.coords()[7]));
            apex.add_scaled(t, &p.sub(&apex))
        })
        .collect();
    out.sort();
    out
}

/// The vertex list as printed: `(1 - delta/2) e8` and
/// `delta/2 (sum of a tail of e1..e7, first sign flipped for one) + (1 - delta/2) e8`.
pub fn slice_vertices_formula(delta: Rational) -> Vec<EpsVector> {
    let half = delta / 2;
    let tail = Rational::from_integer(1) - half;
    let mk = |signs: [i64; 7]| {
        let mut c = [Rational::from_integer(0); 8];
        for (i, s) in signs.iter().enumerate() {
            c[i] = half * s;
        }
        c[7] = tail;
        EpsVector::from_rationals(&c)
    };
    let mut out = vec![
        mk([0; 7]),
        mk([1, 1, 1, 1, 1, 1, 1]),
        mk([-1, 1, 1, 1, 1, 1, 1]),
        mk([0, 0, 1, 1, 1, 1, 1]),
        mk([0, 0, 0, 1, 1, 1, 1]),
        mk([0, 0, 0, 0, 1, 1, 1]),
        mk([0, 0, 0, 0, 0, 1, 1]),
        mk([0, 0, 0, 0, 0, 0, 1]),
    ];
    out.sort();
    out
}

pub fn check_structural_identities() -> Result<StructuralReport> {
    let rs = root_system();
    let mut checks = Vec::new();

    // (a)
    let diff = pullback(&anticanonical(4)?, 1)?.try_sub(&anticanonical(1)?.scale(4))?;
    checks.push(IdentityCheck::eq(
        "Q4 - 4Q1 = -w6",
        pic_to_eps(&diff, false)?.to_string(),
        rs.weights[5].neg().to_string(),
    ));

    // (b) each vertex w_i/m_i is tight on every simple wall except a_i and on
    // the a~ wall; the origin is tight on all simple walls only
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    for (i, v) in rs.alcove_vertices.iter().enumerate() {
        let tight: Vec<usize> = (0..8).filter(|&j| v.dot(&rs.simple[j]) == zero).map(|j| j + 1).collect();
        let on_top = v.dot(&rs.highest) == one;
        let want: Vec<usize> = (1..=8).filter(|&j| j != i + 1).collect();
        checks.push(IdentityCheck::eq(
            &format!("alcove vertex {v} tight walls"),
            (alcove_contains(v), tight, on_top),
            (true, want, i < 8),
        ));
    }

    // (c)
    let norms: Vec<Rational> = rs.alcove_vertices.iter().map(|v| v.norm2()).collect();
    let max = *norms.iter().max().expect("nine vertices");
    let argmax: Vec<String> = rs
        .alcove_vertices
        .iter()
        .zip(&norms)
        .filter(|(_, n)| **n == max)
        .map(|(v, _)| v.to_string())
        .collect();
    checks.push(IdentityCheck::eq(
        "max (x,x) over alcove vertices",
        (fmt_rational(&max), argmax),
        (
            "1".to_string(),
            vec![rs.weights[0].scale(Rational::new(1, 2)).to_string()],
        ),
    ));

    // (d) the functionals (x, a7), (x, a8), (x, a~) are W(D5)-invariant
    let samples = [
        EpsVector::from_doubled([1, 3, -5, 7, 1, 5, -3, 9]),
        EpsVector::new([3, -1, 4, 1, -5, 9, 2, -6], 7),
        EpsVector::from_ints([2, 0, -1, 5, 3, 3, -2, 1]),
    ];
    for j in 0..5 {
        let ok = samples.iter().all(|x| {
            let y = x.reflect(&rs.simple[j]);
            [&rs.simple[6], &rs.simple[7], &rs.highest]
                .iter()
                .all(|f| x.dot(f) == y.dot(f))
        });
        checks.push(IdentityCheck::eq(
            &format!("hyperplanes invariant under s{}", j + 1),
            ok,
            true,
        ));
    }

    // (e) the five degree-4 simple roots span the D5 subsystem on a1..a5
    let images: Vec<EpsVector> = simple_roots(4)?
        .iter()
        .map(|b| pic_to_eps(&pullback(b.class(), 1)?, false))
        .collect::<Result<_>>()?;
    let closure = root_closure(&images);
    let d5: BTreeSet<EpsVector> = rs
        .roots
        .iter()
        .filter(|a| (5..8).all(|j| a.dot(&rs.weights[j]) == zero))
        .cloned()
        .collect();
    checks.push(IdentityCheck::eq(
        "D5 root sets",
        (closure.len(), eps_list(&closure.iter().cloned().collect::<Vec<_>>())),
        (40, eps_list(&d5.iter().cloned().collect::<Vec<_>>())),
    ));
    checks.push(IdentityCheck::eq(
        "degree-4 roots map to a1..a5",
        eps_list(&images),
        eps_list(&[0, 2, 1, 3, 4].map(|i| rs.simple[i].clone())),
    ));

    // (f)
    let pic = simple_roots(1)?;
    let mut gram = [[0i64; 8]; 8];
    for (a, ba) in pic.iter().enumerate() {
        for (b, bb) in pic.iter().enumerate() {
            gram[PIC_TO_BOURBAKI[a] - 1][PIC_TO_BOURBAKI[b] - 1] =
                -intersect(ba.class(), bb.class())?;
        }
    }
    checks.push(IdentityCheck::eq("Cartan matrix of the matching", gram, cartan_matrix()));

    // (g)
    for delta in [Rational::new(1, 4), Rational::new(1, 3)] {
        let computed = slice_vertices(delta);
        checks.push(IdentityCheck::eq(
            &format!("slice vertices at delta={}", fmt_rational(&delta)),
            eps_list(&computed),
            eps_list(&slice_vertices_formula(delta)),
        ));
        let norms: Vec<Rational> = computed.iter().map(|v| v.norm2()).collect();
        let lo = (delta / 2 - 1) * (delta / 2 - 1);
        let hi = delta * delta * 2 - delta + 1;
        checks.push(IdentityCheck::eq(
            &format!("slice norm range at delta={}", fmt_rational(&delta)),
            (
                fmt_rational(norms.iter().min().expect("nonempty")),
                fmt_rational(norms.iter().max().expect("nonempty")),
            ),
            (fmt_rational(&lo), fmt_rational(&hi)),
        ));
    }

    // vertex-level form of (x,x) <= 8/9 for delta >= 1/4
    let bound = Rational::new(8, 9);
    let mut witnesses: Vec<EpsVector> = rs.alcove_vertices[1..].to_vec();
    witnesses.extend(
        slice_vertices(Rational::new(1, 4))
            .into_iter()
            .filter(|x| alcove_contains(x)),
    );
    let worst = witnesses.iter().map(|v| v.norm2()).max().expect("nonempty");
    checks.push(IdentityCheck::eq(
        "(x,x) <= 8/9 at vertex-level witnesses for delta >= 1/4",
        worst <= bound,
        true,
    ));

    let passed = checks.iter().all(|c| c.passed);
    Ok(StructuralReport {
        root_ordering: rs.simple.iter().enumerate().map(|(i, a)| format!("a{} = {a}", i + 1)).collect(),
        checks,
        verification_level: "vertex-level verification",
        passed,
    })
}

fn root_closure(gens: &[EpsVector]) -> BTreeSet<EpsVector> {
    let mut set: BTreeSet<EpsVector> = gens.iter().cloned().collect();
    let mut queue: VecDeque<EpsVector> = gens.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.reflect(g);
            if set.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    set
}

/// Unit-vector lemma as a pass/fail check.
pub fn check_unit_lemma() -> (bool, Vec<HalfIntQuad>) {
    let got = enum_unit_vectors();
    let want = vec![
        HalfIntQuad([1, 1, 1, 1]),
        HalfIntQuad([-1, 1, 1, 1]),
        HalfIntQuad([0, 0, 0, 2]),
    ];
    (got == want, got)
}
