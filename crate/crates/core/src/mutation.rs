//! K-theory classes of exceptional objects and the transforms acting on
//! exceptional pairs `(V, O)`.
//!
//! A [`KClass`] stores rank and first Chern class; `chi(V)` is recovered
//! from Riemann-Roch under `chi(V, V) = 1`. A negative rank encodes an odd
//! shift. All transforms are linear in `(rank, c1)` and so commute with
//! shifts.
//!
//! [`construct_pair`] builds a [`DerivationChain`] certifying, at the level
//! of K-classes, an exceptional pair `(V, O)` on a degree-4 surface with `V`
//! of any coprime rank and degree. [`verify_chain`] rechecks every step from
//! scratch.

use std::fmt;
use std::fmt::Write as _;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::e8::{
    self, alcove_reduce, apply_word_pic, eps_to_pic, pic_to_eps, project_q1, voronoi_contains,
    WeylWord,
};
use crate::error::{Error, Result};
use crate::picard::{
    self, anticanonical, d_ab, d5_canonical_form, descend, intersect, pullback, same_d5_orbit,
    PicardClass,
};
use crate::rational::{fmt_rational, gcd, Rational};

/// Class of an exceptional object in `K_0(X_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KClass {
    rank: i64,
    c1: PicardClass,
}

impl KClass {
    pub fn new(rank: i64, c1: PicardClass) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(KClass { rank, c1 })
    }

    /// The structure sheaf on `X_k`.
    pub fn structure_sheaf(k: i64) -> Result<Self> {
        KClass::new(1, PicardClass::zero(k)?)
    }

    /// A line bundle `O(D)`.
    pub fn line_bundle(d: PicardClass) -> Self {
        KClass { rank: 1, c1: d }
    }

    pub fn surface_degree(&self) -> u8 {
        self.c1.surface_degree()
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn c1(&self) -> &PicardClass {
        &self.c1
    }

    /// `c1 . Q`.
    pub fn degree(&self) -> i64 {
        self.c1.degree()
    }

    pub fn slope(&self) -> Rational {
        Rational::new(self.degree(), self.rank)
    }

    fn q(&self) -> PicardClass {
        anticanonical(self.surface_degree() as i64).expect("valid degree")
    }

    /// Numerator `r^2 + c1.(c1 + rQ) + 1` of the Euler characteristic.
    fn chi_numerator(&self) -> i64 {
        let r = self.rank;
        r * r + self.c1.square() + r * self.degree() + 1
    }

    pub fn chi(&self) -> Result<i64> {
        chi_exceptional(self)
    }

    pub fn is_exceptional_consistent(&self) -> bool {
        self.chi_numerator().rem_euclid(2 * self.rank) == 0
    }

    /// `V[1]`.
    pub fn shifted(&self) -> Self {
        KClass {
            rank: -self.rank,
            c1: self.c1.scale(-1),
        }
    }

    /// The positive-rank representative and whether a shift was removed.
    pub fn normalized(&self) -> (bool, KClass) {
        if self.rank < 0 {
            (true, self.shifted())
        } else {
            (false, self.clone())
        }
    }

    /// `V (x) L` for a line bundle with class `t`.
    pub fn twisted(&self, t: &PicardClass) -> Result<Self> {
        Ok(KClass {
            rank: self.rank,
            c1: self.c1.try_add(&t.scale(self.rank))?,
        })
    }

    pub fn pulled_back(&self, to_degree: i64) -> Result<Self> {
        Ok(KClass {
            rank: self.rank,
            c1: pullback(&self.c1, to_degree)?,
        })
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank={} deg={} c1={}",
            self.rank,
            self.degree(),
            self.c1
        )
    }
}

impl Serialize for KClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("KClass", 5)?;
        st.serialize_field("k", &self.surface_degree())?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("slope", &fmt_rational(&self.slope()))?;
        st.serialize_field("c1", self.c1.coeffs())?;
        st.end()
    }
}

/// `chi(V) = (r^2 + c1.(c1 + rQ) + 1) / 2r`, valid for exceptional `V`.
pub fn chi_exceptional(v: &KClass) -> Result<i64> {
    let num = v.chi_numerator();
    let den = 2 * v.rank;
    if num.rem_euclid(den) != 0 {
        return Err(Error::NotExceptional { num, den });
    }
    Ok(num / den)
}

/// Riemann-Roch Euler pairing `chi(v1, v2)`.
pub fn chi_pair(v1: &KClass, v2: &KClass) -> Result<i64> {
    if v1.surface_degree() != v2.surface_degree() {
        return Err(Error::DegreeMismatch(
            v1.surface_degree(),
            v2.surface_degree(),
        ));
    }
    let (r, rp) = (v1.rank, v2.rank);
    let (chi1, chi2) = (chi_exceptional(v1)?, chi_exceptional(v2)?);
    let c2_plus = v2.c1.try_add(&v2.q().scale(rp))?;
    Ok(-r * rp + r * chi2 + chi1 * rp - intersect(&v1.c1, &c2_plus)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mutation {
    /// `V -> L_O(V^dual)`.
    M,
    /// `V -> V^dual(-Q)`.
    R,
    /// `S = MRM`, only on degree-1 surfaces.
    S,
}

pub fn mutate(kind: Mutation, v: &KClass) -> Result<KClass> {
    let (r, d) = (v.rank, v.degree());
    match kind {
        Mutation::M => {
            if d + r == 0 {
                return Err(Error::Precondition(
                    "M needs deg + rank != 0 (slope -1)".into(),
                ));
            }
            KClass::new(-d - r, v.c1.clone())
        }
        Mutation::R => KClass::new(r, v.c1.scale(-1).try_sub(&v.q().scale(r))?),
        Mutation::S => {
            if v.surface_degree() != 1 {
                return Err(Error::Precondition(format!(
                    "S is defined on degree-1 surfaces, not degree {}",
                    v.surface_degree()
                )));
            }
            if d == 0 {
                return Err(Error::Precondition("S needs nonzero degree".into()));
            }
            KClass::new(d, v.c1.scale(-1).try_add(&v.q().scale(d + r))?)
        }
    }
}

/// K0-level verdict for an ordered pair `(V1, V2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairVerdict {
    Exceptional,
    Obstructed(i64),
    OutsideWindow,
}

/// Inside the window `mu(V2) - k < mu(V1) < mu(V2)`, the pair is exceptional
/// iff `chi(V2, V1) = 0`.
pub fn k0_pair_status(v1: &KClass, v2: &KClass) -> Result<PairVerdict> {
    let chi = chi_pair(v2, v1)?;
    let k = Rational::from_integer(v1.surface_degree() as i64);
    let (m1, m2) = (v1.slope(), v2.slope());
    if m2 - k < m1 && m1 < m2 {
        Ok(if chi == 0 {
            PairVerdict::Exceptional
        } else {
            PairVerdict::Obstructed(chi)
        })
    } else {
        Ok(PairVerdict::OutsideWindow)
    }
}

// ---- slope dynamics on degree 4 ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SlopeLetter {
    M,
    R,
}

impl SlopeLetter {
    pub fn mutation(self) -> Mutation {
        match self {
            SlopeLetter::M => Mutation::M,
            SlopeLetter::R => Mutation::R,
        }
    }

    /// Action on a signed `(degree, rank)` pair on a degree-4 surface.
    pub fn act(self, d: i64, r: i64) -> (i64, i64) {
        match self {
            SlopeLetter::M => (d, -d - r),
            SlopeLetter::R => (-d - 4 * r, r),
        }
    }
}

impl fmt::Display for SlopeLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlopeLetter::M => "M",
            SlopeLetter::R => "R",
        })
    }
}

/// A word over `{M, R}` with the coordinate `nu = 1/(mu + 2)` before each
/// letter and after the last one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeWord {
    pub letters: Vec<SlopeLetter>,
    #[serde(serialize_with = "ser_rationals")]
    pub nu: Vec<Rational>,
}

fn ser_rationals<S: serde::Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    parts.serialize(s)
}

/// Target slope intervals for [`slope_normalize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SlopeTarget {
    /// `[-2, -1)`, i.e. `nu > 1`.
    MinusTwoToMinusOne,
    /// `[-3/2, -1)`, i.e. `1 < nu <= 2`.
    MinusThreeHalvesToMinusOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeNormalization {
    pub word: SlopeWord,
    pub degree: i64,
    pub rank: i64,
}

/// Moves `d/r` into the target interval with `M` and `R`.
///
/// In `nu = r/(d+2r)` the letters act as `M: nu -> 1 - nu` and
/// `R: nu -> -nu`, so `[R, M]` translates by `+1` and `[M, R]` by `-1`;
/// the denominator `|d + 2r|` is invariant.
pub fn slope_normalize(d: i64, r: i64, target: SlopeTarget) -> Result<SlopeNormalization> {
    check_coprime(d, r)?;
    if d + 2 * r == 0 {
        return Err(Error::Precondition(
            "slope -2 is the base case and has no nu coordinate".into(),
        ));
    }
    let one = Rational::from_integer(1);
    let mut nu = Rational::new(r, d + 2 * r);
    let mut letters = Vec::new();
    let mut nus = vec![nu];
    let upper = match target {
        SlopeTarget::MinusTwoToMinusOne => None,
        SlopeTarget::MinusThreeHalvesToMinusOne => Some(Rational::from_integer(2)),
    };
    let mut push = |l: SlopeLetter, nu: &mut Rational, nus: &mut Vec<Rational>| {
        *nu = match l {
            SlopeLetter::M => one - *nu,
            SlopeLetter::R => -*nu,
        };
        letters.push(l);
        nus.push(*nu);
    };
    // translating a negative integer nu upward would pass through rank 0
    if nu.is_integer() && nu < Rational::from_integer(0) {
        push(SlopeLetter::R, &mut nu, &mut nus);
    }
    while nu <= one {
        push(SlopeLetter::R, &mut nu, &mut nus);
        push(SlopeLetter::M, &mut nu, &mut nus);
    }
    if let Some(upper) = upper {
        while nu > upper {
            push(SlopeLetter::M, &mut nu, &mut nus);
            push(SlopeLetter::R, &mut nu, &mut nus);
        }
    }
    let (mut dd, mut rr) = letters.iter().fold((d, r), |(d, r), l| l.act(d, r));
    if rr < 0 {
        dd = -dd;
        rr = -rr;
    }
    Ok(SlopeNormalization {
        word: SlopeWord {
            letters,
            nu: nus,
        },
        degree: dd,
        rank: rr,
    })
}

fn check_coprime(d: i64, r: i64) -> Result<()> {
    if r <= 0 {
        return Err(Error::NonPositiveRank(r));
    }
    if gcd(d, r) != 1 {
        return Err(Error::NotCoprime(d, r));
    }
    Ok(())
}

// ---- derivation chains ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StepKind {
    Base,
    SlopeM,
    SlopeR,
    Inductive,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Base => "base",
            StepKind::SlopeM => "M",
            StepKind::SlopeR => "R",
            StepKind::Inductive => "inductive",
        })
    }
}

/// Payload of an inductive step.
///
/// The step is the composite: pull back to `X_1`; apply `S`, then `R`;
/// shift `shift_parity` times; apply `weyl_word` (Bourbaki letters acting on
/// `Pic(X_1)`); twist by `-Q_1 + twist`; descend to degree 4. `twist` lies in
/// `Q_1^perp`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductiveMove {
    pub weyl_word: WeylWord,
    #[serde(serialize_with = "ser_class")]
    pub twist: PicardClass,
    pub shift_parity: u8,
}

fn ser_class<S: serde::Serializer>(c: &PicardClass, s: S) -> std::result::Result<S::Ok, S::Error> {
    c.coeffs().serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub kind: StepKind,
    pub before: KClass,
    pub after: KClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inductive: Option<InductiveMove>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationChain {
    /// The requested `(degree, rank)`.
    pub degree: i64,
    pub rank: i64,
    pub steps: Vec<ChainStep>,
}

impl DerivationChain {
    pub fn endpoint(&self) -> &KClass {
        &self.steps.last().expect("chains are never empty").after
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }

    /// Tree-structured text rendering, one node per step:
    ///
    /// ```text
    /// chain d=-3 r=2 steps=2
    /// |- 0 base      rank=1 deg=-2 c1=k=4 (-1,-2,1,1,1,1)
    /// `- 1 inductive rank=2 deg=-3 c1=k=4 (...)
    ///    |- word [..]
    ///    |- twist (..)
    ///    `- shift 1
    /// ```
    pub fn to_tree_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "chain d={} r={} steps={}",
            self.degree,
            self.rank,
            self.steps.len()
        );
        let n = self.steps.len();
        for (i, st) in self.steps.iter().enumerate() {
            let last = i + 1 == n;
            let (branch, pad) = if last { ("`-", "   ") } else { ("|-", "|  ") };
            let _ = writeln!(out, "{branch} {i} {:<9} {}", st.kind.to_string(), st.after);
            if let Some(mv) = &st.inductive {
                let _ = writeln!(out, "{pad}|- word {}", mv.weyl_word);
                let _ = writeln!(out, "{pad}|- twist {}", mv.twist);
                let _ = writeln!(out, "{pad}`- shift {}", mv.shift_parity);
            }
        }
        out
    }
}

/// The base class `O(D_{-1,-1})` of slope `-2`.
pub fn base_class() -> KClass {
    KClass::line_bundle(d_ab(-1, -1).expect("odd parity"))
}

/// `D_{d+r,-r}`: the first Chern class of the degree-4 solution of slope `d/r`.
pub fn standard_c1(d: i64, r: i64) -> Result<PicardClass> {
    d_ab(d + r, -r)
}

/// Intermediate states of an inductive step.
#[derive(Debug, Clone)]
struct InductiveTrace {
    /// After pullback, `S`, `R` and the shift: the pair `(W', O)` on `X_1`.
    w_prime: KClass,
    /// After the Weyl word and the twist, still on `X_1`.
    twisted: KClass,
}

fn inductive_trace(before: &KClass, mv: &InductiveMove) -> Result<InductiveTrace> {
    let pulled = before.pulled_back(1)?;
    let mut w = mutate(Mutation::R, &mutate(Mutation::S, &pulled)?)?;
    if mv.shift_parity % 2 == 1 {
        w = w.shifted();
    }
    let moved = KClass::new(w.rank, apply_word_pic(&mv.weyl_word, &w.c1)?)?;
    let t = mv.twist.try_sub(&anticanonical(1)?)?;
    Ok(InductiveTrace {
        w_prime: w,
        twisted: moved.twisted(&t)?,
    })
}

/// Builds the inductive step out of `before` (slope in `[-2, -1)`), choosing
/// the shift parity so that the output rank has sign `out_sign`.
fn inductive_step(before: &KClass, out_sign: i64) -> Result<ChainStep> {
    let pulled = before.pulled_back(1)?;
    let w0 = mutate(Mutation::R, &mutate(Mutation::S, &pulled)?)?;
    let shift_parity = u8::from(w0.rank.signum() != out_sign);
    let w = if shift_parity == 1 { w0.shifted() } else { w0 };
    let rho = w.rank;
    let out_degree = w.degree() - rho;
    let (r_out, d_out) = (rho.abs(), rho.signum() * out_degree);
    let target = pullback(&standard_c1(d_out, r_out)?, 1)?.scale(rho.signum());

    let inv_rho = Rational::new(1, rho);
    let x1 = pic_to_eps(&project_q1(&w.c1)?, false)?.scale(inv_rho);
    let x2 = pic_to_eps(&project_q1(&target)?, false)?.scale(inv_rho);
    let a1 = alcove_reduce(&x1);
    let a2 = alcove_reduce(&x2);
    if a1.result != a2.result {
        return Err(Error::InductiveStep(format!(
            "affine orbits differ for (d, r) = ({d_out}, {r_out}): {} vs {}",
            a1.result, a2.result
        )));
    }
    // a_j(x) = g_j(x + shift_j); the map x1 -> x2 is x -> w x + (w shift_1 - shift_2)
    let lin = |x: &e8::EpsVector| a2.word.inverse().apply_linear(&a1.word.apply_linear(x));
    let weyl_word = e8::word_of(lin);
    let lambda = lin(&a1.shift).sub(&a2.shift);
    let twist = eps_to_pic(&lambda)?;
    let mv = InductiveMove {
        weyl_word,
        twist,
        shift_parity,
    };
    let trace = inductive_trace(before, &mv)?;
    if trace.twisted.c1 != target {
        return Err(Error::InductiveStep(format!(
            "replay gave {} instead of {}",
            trace.twisted.c1, target
        )));
    }
    let after = KClass::new(trace.twisted.rank, descend(&trace.twisted.c1, 4)?)?;
    Ok(ChainStep {
        kind: StepKind::Inductive,
        before: before.clone(),
        after,
        inductive: Some(mv),
    })
}

fn build(d: i64, r: i64) -> Result<Vec<ChainStep>> {
    if (d, r) == (-2, 1) {
        let b = base_class();
        return Ok(vec![ChainStep {
            kind: StepKind::Base,
            before: b.clone(),
            after: b,
            inductive: None,
        }]);
    }
    let norm = slope_normalize(d, r, SlopeTarget::MinusThreeHalvesToMinusOne)?;
    let letters = &norm.word.letters;
    let (_, r_signed) = letters.iter().fold((d, r), |(d, r), l| l.act(d, r));
    let (d1, r1) = (norm.degree, norm.rank);
    let mut steps = build(-r1, d1 + 2 * r1)?;
    let top = steps.last().expect("nonempty").after.clone();
    let ind = inductive_step(&top, r_signed.signum())?;
    let mut cur = ind.after.clone();
    steps.push(ind);
    for l in letters.iter().rev() {
        let next = mutate(l.mutation(), &cur)?;
        steps.push(ChainStep {
            kind: match l {
                SlopeLetter::M => StepKind::SlopeM,
                SlopeLetter::R => StepKind::SlopeR,
            },
            before: cur,
            after: next.clone(),
            inductive: None,
        });
        cur = next;
    }
    Ok(steps)
}

/// Certified K-level construction of the pair `(V, O)` on a degree-4 surface
/// with `rank(V) = r`, `deg(V) = d`, `c1(V)` in the `W(D5)` orbit of
/// `D_{d+r,-r}`.
pub fn construct_pair(d: i64, r: i64) -> Result<DerivationChain> {
    check_coprime(d, r)?;
    Ok(DerivationChain {
        degree: d,
        rank: r,
        steps: build(d, r)?,
    })
}

// ---- verification ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainFailure {
    pub step: usize,
    pub check: &'static str,
    pub detail: String,
}

impl fmt::Display for ChainFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {} ({})", self.step, self.check, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub passed: bool,
    pub checks: usize,
    pub failure: Option<ChainFailure>,
}

struct Checker {
    checks: usize,
}

impl Checker {
    fn check(
        &mut self,
        step: usize,
        name: &'static str,
        ok: bool,
        detail: impl FnOnce() -> String,
    ) -> std::result::Result<(), ChainFailure> {
        self.checks += 1;
        if ok {
            Ok(())
        } else {
            Err(ChainFailure {
                step,
                check: name,
                detail: detail(),
            })
        }
    }

    fn lift<T>(
        step: usize,
        name: &'static str,
        r: Result<T>,
    ) -> std::result::Result<T, ChainFailure> {
        r.map_err(|e| ChainFailure {
            step,
            check: name,
            detail: e.to_string(),
        })
    }

    fn state(&mut self, i: usize, v: &KClass) -> std::result::Result<(), ChainFailure> {
        self.check(i, "surface-degree", v.surface_degree() == 4, || {
            format!("state lives on degree {}", v.surface_degree())
        })?;
        self.check(i, "consistency", v.is_exceptional_consistent(), || {
            format!("chi not integral for {v}")
        })?;
        self.check(i, "coprime", gcd(v.rank, v.degree()) == 1, || {
            format!("gcd(rank, degree) != 1 for {v}")
        })?;
        let chi = Self::lift(i, "consistency", v.chi())?;
        self.check(i, "pair-with-O", chi == 0, || format!("chi(V) = {chi}"))?;
        let (_, n) = v.normalized();
        let want = Self::lift(i, "d5-form", standard_c1(n.degree(), n.rank))?;
        let same = Self::lift(i, "d5-form", same_d5_orbit(&n.c1, &want))?;
        self.check(i, "d5-form", same, || {
            format!("c1 {} is not W(D5)-conjugate to {want}", n.c1)
        })
    }

    fn inductive(
        &mut self,
        i: usize,
        st: &ChainStep,
        mv: &InductiveMove,
    ) -> std::result::Result<(), ChainFailure> {
        let (_, n) = st.before.normalized();
        let mu = n.slope();
        self.check(
            i,
            "inductive-window",
            mu >= Rational::from_integer(-2) && mu < Rational::from_integer(-1),
            || format!("slope {} outside [-2,-1)", fmt_rational(&mu)),
        )?;
        self.check(i, "weyl-word", mv.weyl_word.is_finite(), || {
            format!("word {} has letters outside 1..=8", mv.weyl_word)
        })?;
        let q1 = Self::lift(i, "twist-lattice", anticanonical(1))?;
        let ok = mv.twist.surface_degree() == 1
            && Self::lift(i, "twist-lattice", intersect(&mv.twist, &q1))? == 0;
        self.check(i, "twist-lattice", ok, || {
            format!("twist {} is not in Q_1^perp", mv.twist)
        })?;
        let trace = Self::lift(i, "inductive-law", inductive_trace(&st.before, mv))?;

        // (W', O) is a pair on X_1 with slope in (-1, 0): its E8 part sits in
        // the Voronoi cell and has norm r^2 - rd + d^2 + 1 with d = -deg.
        let (_, wp) = trace.w_prime.normalized();
        let (r, d) = (wp.rank, -wp.degree());
        let v = Self::lift(i, "voronoi", project_q1(&wp.c1))?;
        let vv = -v.square();
        self.check(i, "voronoi", vv == r * r - r * d + d * d + 1, || {
            format!("(v,v) = {vv} for rank {r}, -deg {d}")
        })?;
        let x = Self::lift(i, "voronoi", pic_to_eps(&v, false))?.scale(Rational::new(1, r));
        self.check(i, "voronoi", voronoi_contains(&x), || {
            format!("v/r = {x} is outside the Voronoi cell")
        })?;

        let blown_down = (5..=7).all(|j| trace.twisted.c1.e_coeff(j) == 0);
        self.check(i, "descent", blown_down, || {
            format!("e5..e7 coefficients of {} do not vanish", trace.twisted.c1)
        })?;
        let descended = Self::lift(i, "descent", descend(&trace.twisted.c1, 4))?;
        let got = KClass {
            rank: trace.twisted.rank,
            c1: descended,
        };
        self.check(i, "inductive-law", got == st.after, || {
            format!("replay gave {got}, chain records {}", st.after)
        })?;
        let want = Rational::from_integer(-2) - mu.recip();
        self.check(i, "inductive-slope", st.after.slope() == want, || {
            format!(
                "slope {} != -2 - 1/mu = {}",
                fmt_rational(&st.after.slope()),
                fmt_rational(&want)
            )
        })
    }
}

pub fn verify_chain(c: &DerivationChain) -> ChainReport {
    let mut ck = Checker { checks: 0 };
    let res = verify_inner(c, &mut ck);
    ChainReport {
        passed: res.is_ok(),
        checks: ck.checks,
        failure: res.err(),
    }
}

fn verify_inner(c: &DerivationChain, ck: &mut Checker) -> std::result::Result<(), ChainFailure> {
    ck.check(0, "nonempty", !c.steps.is_empty(), || "empty chain".into())?;
    let first = &c.steps[0];
    ck.check(
        0,
        "first-step-base",
        first.kind == StepKind::Base && first.after == base_class() && first.before == first.after,
        || "chain must start at O(D_{-1,-1})".into(),
    )?;
    ck.state(0, &first.after)?;
    for (i, st) in c.steps.iter().enumerate().skip(1) {
        ck.check(i, "continuity", st.before == c.steps[i - 1].after, || {
            "before differs from previous after".into()
        })?;
        match st.kind {
            StepKind::Base => ck.check(i, "base-position", false, || {
                "base step after the start".into()
            })?,
            StepKind::SlopeM | StepKind::SlopeR => {
                let m = if st.kind == StepKind::SlopeM {
                    Mutation::M
                } else {
                    Mutation::R
                };
                let want = Checker::lift(i, "slope-law", mutate(m, &st.before))?;
                ck.check(i, "slope-law", want == st.after, || {
                    format!("{m:?} gives {want}, chain records {}", st.after)
                })?;
            }
            StepKind::Inductive => {
                let mv = st.inductive.as_ref().ok_or_else(|| ChainFailure {
                    step: i,
                    check: "payload",
                    detail: "inductive step without payload".into(),
                })?;
                ck.inductive(i, st, mv)?;
            }
        }
        ck.state(i, &st.after)?;
    }
    let last = c.steps.len() - 1;
    let end = c.endpoint();
    ck.check(last, "endpoint-rank", end.rank == c.rank, || {
        format!("rank {} != {}", end.rank, c.rank)
    })?;
    ck.check(last, "endpoint-degree", end.degree() == c.degree, || {
        format!("degree {} != {}", end.degree(), c.degree)
    })?;
    let want = Checker::lift(last, "endpoint-d5", standard_c1(c.degree, c.rank))?;
    let same = Checker::lift(last, "endpoint-d5", same_d5_orbit(&end.c1, &want))?;
    ck.check(last, "endpoint-d5", same, || {
        format!("endpoint c1 {} is not conjugate to {want}", end.c1)
    })
}

// ---- sporadic classification ----

/// Slopes inside `[-r - 1/r - 4, r + 1/r]` may carry sporadic pairs.
pub fn sporadic_band(r: i64) -> Result<(Rational, Rational)> {
    if r <= 0 {
        return Err(Error::NonPositiveRank(r));
    }
    let inv = Rational::new(1, r);
    let rr = Rational::from_integer(r);
    Ok((-rr - inv - Rational::from_integer(4), rr + inv))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SporadicVerdict {
    InsideBand,
    Standard,
    /// `p^* Omega_{P2}(-1)`: rank 2, `c1 = -5(s + f - e_1)`.
    SporadicOmega,
    /// `R(p^* Omega_{P2}(-1))`: rank 2, `c1 = 5(s + f - e_1) - 2Q`.
    SporadicT,
    Unclassified,
}

/// `s + f - e_1`, the pullback of a line under the blowdown to `P2`.
pub fn plane_line_class() -> PicardClass {
    PicardClass::new(4, vec![1, 1, -1, 0, 0, 0]).expect("valid")
}

pub fn omega_class() -> PicardClass {
    plane_line_class().scale(-5)
}

pub fn tangent_class() -> PicardClass {
    let q = anticanonical(4).expect("valid");
    plane_line_class()
        .scale(5)
        .try_sub(&q.scale(2))
        .expect("same degree")
}

pub fn classify_pair_class(r: i64, c1: &PicardClass) -> Result<SporadicVerdict> {
    if c1.surface_degree() != 4 {
        return Err(Error::DegreeMismatch(c1.surface_degree(), 4));
    }
    if r <= 0 {
        return Err(Error::NonPositiveRank(r));
    }
    let v = KClass::new(r, c1.clone())?;
    if v.chi()? != 0 {
        return Err(Error::Precondition(format!(
            "(V, O) is not a K0 pair: chi(V) = {}",
            v.chi()?
        )));
    }
    let d = v.degree();
    let mu = v.slope();
    let (lo, hi) = sporadic_band(r)?;
    if lo <= mu && mu <= hi {
        return Ok(SporadicVerdict::InsideBand);
    }
    let canon = d5_canonical_form(c1)?.rep;
    if d5_canonical_form(&standard_c1(d, r)?)?.rep == canon {
        return Ok(SporadicVerdict::Standard);
    }
    if r == 2 && picard::degree_of(&omega_class()) == d
        && d5_canonical_form(&omega_class())?.rep == canon
    {
        return Ok(SporadicVerdict::SporadicOmega);
    }
    if r == 2 && picard::degree_of(&tangent_class()) == d
        && d5_canonical_form(&tangent_class())?.rep == canon
    {
        return Ok(SporadicVerdict::SporadicT);
    }
    Ok(SporadicVerdict::Unclassified)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_traits::Signed;

    fn o4() -> KClass {
        KClass::structure_sheaf(4).unwrap()
    }

    fn o_s() -> KClass {
        KClass::line_bundle(PicardClass::s(4).unwrap())
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(chi_exceptional(&o4()).unwrap(), 1);
        assert_eq!(chi_exceptional(&o_s()).unwrap(), 2);
        let bad = KClass::new(2, PicardClass::zero(4).unwrap()).unwrap();
        assert_eq!(
            chi_exceptional(&bad),
            Err(Error::NotExceptional { num: 5, den: 4 })
        );
        assert_eq!(KClass::new(0, PicardClass::zero(4).unwrap()), Err(Error::ZeroRank));
    }

    #[test]
    fn euler_pairings() {
        assert_eq!(chi_pair(&o4(), &o4()).unwrap(), 1);
        assert_eq!(chi_pair(&o_s(), &o4()).unwrap(), 0);
        assert_eq!(chi_pair(&o4(), &o_s()).unwrap(), 2);
        let o1 = KClass::structure_sheaf(1).unwrap();
        assert!(chi_pair(&o4(), &o1).is_err());
    }

    #[test]
    fn shifts_negate_chi() {
        let v = o_s();
        assert_eq!(v.shifted().chi().unwrap(), -v.chi().unwrap());
        assert_eq!(v.shifted().slope(), v.slope());
    }

    #[test]
    fn mutation_examples() {
        let r = mutate(Mutation::R, &o_s()).unwrap();
        let q = anticanonical(4).unwrap();
        assert_eq!(r.rank(), 1);
        assert_eq!(*r.c1(), PicardClass::s(4).unwrap().scale(-1).try_sub(&q).unwrap());
        assert_eq!(r.slope(), rat(-6, 1));

        let m = mutate(Mutation::M, &o_s()).unwrap();
        assert_eq!(m.rank(), -3);
        assert_eq!(*m.c1(), PicardClass::s(4).unwrap());
        assert_eq!(m.slope(), rat(-2, 3));

        let v = KClass::new(3, PicardClass::new(1, vec![1, 2, 0, -1, 0, 1, 0, 0, 3]).unwrap())
            .unwrap();
        let ss = mutate(Mutation::S, &mutate(Mutation::S, &v).unwrap()).unwrap();
        assert_eq!(ss.slope(), v.slope());
        assert!(mutate(Mutation::S, &o_s()).is_err());
    }

    #[test]
    fn s_is_mrm() {
        let v = KClass::new(2, PicardClass::new(1, vec![1, 0, 0, 1, 0, 0, 0, 0, 0]).unwrap())
            .unwrap();
        let mrm = mutate(
            Mutation::M,
            &mutate(Mutation::R, &mutate(Mutation::M, &v).unwrap()).unwrap(),
        )
        .unwrap();
        assert_eq!(mutate(Mutation::S, &v).unwrap(), mrm);
    }

    #[test]
    fn pair_status_examples() {
        assert_eq!(k0_pair_status(&o4(), &o_s()).unwrap(), PairVerdict::Exceptional);
        assert_eq!(k0_pair_status(&o4(), &o4()).unwrap(), PairVerdict::OutsideWindow);
        let v = construct_pair(-7, 3).unwrap().endpoint().clone();
        assert_eq!(k0_pair_status(&v, &o4()).unwrap(), PairVerdict::Exceptional);
    }

    #[test]
    fn slope_normalization_examples() {
        let t = SlopeTarget::MinusThreeHalvesToMinusOne;
        let n = slope_normalize(-3, 2, t).unwrap();
        assert!(n.word.letters.is_empty());
        assert_eq!((n.degree, n.rank), (-3, 2));

        use SlopeLetter::{M, R};
        let n = slope_normalize(1, 1, t).unwrap();
        assert_eq!(n.word.letters, vec![R, M]);
        assert_eq!((n.degree, n.rank), (-5, 4));

        let n = slope_normalize(-6, 1, t).unwrap();
        assert_eq!(n.word.letters, vec![R, M, R, M]);
        assert_eq!((n.degree, n.rank), (-10, 7));
        assert_eq!(n.word.nu.last(), Some(&rat(7, 4)));

        assert!(slope_normalize(-2, 1, t).is_err());
        assert!(slope_normalize(2, 4, t).is_err());
    }

    #[test]
    fn slope_normalization_lands_in_target() {
        for r in 1..=15i64 {
            for d in -60..=60i64 {
                if gcd(d, r) != 1 || d + 2 * r == 0 {
                    continue;
                }
                let nu = Rational::new(r, d + 2 * r).abs();
                for t in [
                    SlopeTarget::MinusTwoToMinusOne,
                    SlopeTarget::MinusThreeHalvesToMinusOne,
                ] {
                    let n = slope_normalize(d, r, t).unwrap();
                    let mu = Rational::new(n.degree, n.rank);
                    let lo = match t {
                        SlopeTarget::MinusTwoToMinusOne => rat(-2, 1),
                        SlopeTarget::MinusThreeHalvesToMinusOne => rat(-3, 2),
                    };
                    assert!(lo <= mu && mu < rat(-1, 1), "{d}/{r} -> {mu}");
                    assert_eq!((n.degree + 2 * n.rank).abs(), (d + 2 * r).abs());
                    let len = Rational::from_integer(n.word.letters.len() as i64);
                    assert!(len <= (nu + 2) * 2, "word too long for {d}/{r}");
                }
            }
        }
    }

    #[test]
    fn base_chain() {
        let c = construct_pair(-2, 1).unwrap();
        assert_eq!(c.steps.len(), 1);
        assert_eq!(
            c.endpoint().c1().coeffs(),
            &[-1, -2, 1, 1, 1, 1]
        );
        assert!(verify_chain(&c).passed);
    }

    #[test]
    fn one_inductive_step() {
        let c = construct_pair(-3, 2).unwrap();
        assert_eq!(
            c.steps.iter().map(|s| s.kind).collect::<Vec<_>>(),
            vec![StepKind::Base, StepKind::Inductive]
        );
        let rep = verify_chain(&c);
        assert!(rep.passed, "{:?}", rep.failure);
        let end = c.endpoint();
        assert!(same_d5_orbit(end.c1(), &d_ab(-1, -2).unwrap()).unwrap());
    }

    #[test]
    fn chain_with_slope_word() {
        let c = construct_pair(1, 1).unwrap();
        let rep = verify_chain(&c);
        assert!(rep.passed, "{:?}", rep.failure);
        let kinds: Vec<_> = c.steps.iter().map(|s| s.kind).collect();
        assert_eq!(&kinds[kinds.len() - 2..], &[StepKind::SlopeM, StepKind::SlopeR]);
        assert!(same_d5_orbit(c.endpoint().c1(), &d_ab(2, -1).unwrap()).unwrap());
    }

    #[test]
    fn five_halves() {
        let c = construct_pair(5, 2).unwrap();
        let rep = verify_chain(&c);
        assert!(rep.passed, "{:?}", rep.failure);
        assert!(same_d5_orbit(c.endpoint().c1(), &d_ab(7, -2).unwrap()).unwrap());
    }

    #[test]
    fn tampered_twist_fails_descent() {
        let mut c = construct_pair(-5, 3).unwrap();
        let idx = c
            .steps
            .iter()
            .position(|s| s.kind == StepKind::Inductive)
            .unwrap();
        let mv = c.steps[idx].inductive.as_mut().unwrap();
        // e5 - e6 is a root of Q_1^perp
        let root = PicardClass::new(1, vec![0, 0, 0, 0, 0, 0, 1, -1, 0]).unwrap();
        mv.twist = mv.twist.try_add(&root).unwrap();
        let rep = verify_chain(&c);
        assert!(!rep.passed);
        let f = rep.failure.unwrap();
        assert_eq!((f.step, f.check), (idx, "descent"));
    }

    #[test]
    fn tampered_endpoint_fails() {
        let mut c = construct_pair(4, 3).unwrap();
        let last = c.steps.len() - 1;
        let bumped = c.steps[last].after.c1().try_add(&PicardClass::f(4).unwrap()).unwrap();
        c.steps[last].after = KClass::new(c.steps[last].after.rank(), bumped).unwrap();
        assert!(!verify_chain(&c).passed);
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(construct_pair(4, 2), Err(Error::NotCoprime(4, 2)));
        assert_eq!(construct_pair(1, 0), Err(Error::NonPositiveRank(0)));
    }

    #[test]
    fn chain_endpoints_have_chi_zero() {
        for (d, r) in [(-50, 3), (17, 5), (0, 1), (-1, 7), (9, 4), (-23, 12)] {
            let c = construct_pair(d, r).unwrap();
            let rep = verify_chain(&c);
            assert!(rep.passed, "({d},{r}): {:?}", rep.failure);
            let v = c.endpoint();
            assert_eq!((v.rank(), v.degree()), (r, d));
            assert_eq!(v.chi().unwrap(), 0);
            assert_eq!(chi_pair(v, v).unwrap(), 1);
        }
    }

    #[test]
    fn sporadic_examples() {
        assert_eq!(sporadic_band(1).unwrap(), (rat(-6, 1), rat(2, 1)));
        assert_eq!(sporadic_band(2).unwrap(), (rat(-13, 2), rat(5, 2)));
        for r in 1..10 {
            let (lo, hi) = sporadic_band(r).unwrap();
            assert_eq!(lo + hi, rat(-4, 1));
        }
        assert!(sporadic_band(0).is_err());

        assert_eq!(
            classify_pair_class(2, &omega_class()).unwrap(),
            SporadicVerdict::SporadicOmega
        );
        assert_eq!(KClass::new(2, omega_class()).unwrap().slope(), rat(-15, 2));
        assert_eq!(
            classify_pair_class(2, &tangent_class()).unwrap(),
            SporadicVerdict::SporadicT
        );
        assert_eq!(KClass::new(2, tangent_class()).unwrap().slope(), rat(7, 2));

        let end = construct_pair(-50, 3).unwrap().endpoint().clone();
        assert_eq!(
            classify_pair_class(3, end.c1()).unwrap(),
            SporadicVerdict::Standard
        );
        assert!(classify_pair_class(2, &PicardClass::zero(4).unwrap()).is_err());
    }

    #[test]
    fn tree_text_mentions_every_step() {
        let c = construct_pair(1, 1).unwrap();
        let t = c.to_tree_text();
        assert!(t.starts_with("chain d=1 r=1"));
        assert_eq!(t.matches("inductive").count(), c.count(StepKind::Inductive));
    }
}
