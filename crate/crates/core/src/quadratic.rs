//! The quadratic orders `O_k = Z + Z w_k`, `w_k = (-k + sqrt(k(k-4)))/2`,
//! for `k = 5..=9`, and the arithmetic of slopes on del Pezzo surfaces of
//! degree at least 5.
//!
//! A pair `(V, O)` with `rank(V) = r`, `deg(V) = d` is encoded by
//! `xi(d, r) = -d + r w`, whose norm is `d^2 + krd + kr^2`. Rotation acts as
//! `xi -> -sigma(xi)` and `RM` as multiplication by the unit `u`.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::gcd;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrderElement {
    pub k: i64,
    pub x: i64,
    pub y: i64,
}

fn check_k(k: i64) -> Result<()> {
    if (5..=9).contains(&k) {
        Ok(())
    } else {
        Err(Error::OrderIndex(k))
    }
}

/// Sign of `p + q sqrt(disc)` for `disc > 0` not a square.
fn surd_sign(p: i128, q: i128, disc: i128) -> Ordering {
    let (sp, sq) = (p.cmp(&0), q.cmp(&0));
    if sp == sq || sq == Ordering::Equal {
        return sp;
    }
    if sp == Ordering::Equal {
        return sq;
    }
    // opposite signs: the larger magnitude wins
    match (p * p).cmp(&(q * q * disc)) {
        Ordering::Greater => sp,
        _ => sq,
    }
}

impl OrderElement {
    pub fn new(k: i64, x: i64, y: i64) -> Result<Self> {
        check_k(k)?;
        Ok(OrderElement { k, x, y })
    }

    /// Discriminant `k(k-4)`.
    pub fn discriminant(&self) -> i64 {
        self.k * (self.k - 4)
    }

    pub fn norm(&self) -> i64 {
        let (k, x, y) = (self.k, self.x, self.y);
        x * x - k * x * y + k * y * y
    }

    pub fn conj(&self) -> Self {
        OrderElement {
            k: self.k,
            x: self.x - self.k * self.y,
            y: -self.y,
        }
    }

    pub fn neg(&self) -> Self {
        OrderElement {
            k: self.k,
            x: -self.x,
            y: -self.y,
        }
    }

    /// Uses `w^2 = -k w - k`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.k != o.k {
            return Err(Error::Precondition(format!(
                "orders differ: O_{} and O_{}",
                self.k, o.k
            )));
        }
        let k = self.k;
        let bd = self.y * o.y;
        Ok(OrderElement {
            k,
            x: self.x * o.x - k * bd,
            y: self.x * o.y + self.y * o.x - k * bd,
        })
    }

    fn sub_int(&self, n: i64) -> Self {
        OrderElement {
            k: self.k,
            x: self.x - n,
            y: self.y,
        }
    }

    /// `2 iota(a) = (2x - ky) + y sqrt(k(k-4))` under the real embedding
    /// sending `w` to the larger root.
    pub fn real_parts(&self) -> (i64, i64) {
        (2 * self.x - self.k * self.y, self.y)
    }

    /// Sign of the real embedding.
    pub fn real_sign(&self) -> Ordering {
        let (p, q) = self.real_parts();
        surd_sign(p as i128, q as i128, self.discriminant() as i128)
    }

    pub fn real_value(&self) -> f64 {
        let (p, q) = self.real_parts();
        (p as f64 + q as f64 * (self.discriminant() as f64).sqrt()) / 2.0
    }

    /// `(r, d)` with `xi(d, r) = self`.
    pub fn rank_degree(&self) -> (i64, i64) {
        (self.y, -self.x)
    }
}

impl fmt::Display for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}w{}", self.x, self.y, self.k)
    }
}

/// `xi(d, r) = -d + r w`.
pub fn make_xi(d: i64, r: i64, k: i64) -> Result<OrderElement> {
    OrderElement::new(k, -d, r)
}

/// `u = -1 + k/2 + sqrt(k(k-4))/2 = (k-1) + w`.
pub fn unit_of(k: i64) -> Result<OrderElement> {
    OrderElement::new(k, k - 1, 1)
}

/// `u^{-1} = sigma(u) = -1 - w`.
pub fn unit_inverse(k: i64) -> Result<OrderElement> {
    Ok(unit_of(k)?.conj())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OrderMove {
    /// `a -> -sigma(a)`, rotation `R`.
    NegConj,
    /// `a -> u a`, the composite `RM`.
    Unit,
    /// `a -> u^{-1} a`.
    UnitInv,
    /// `a -> -a`, a shift.
    Neg,
}

impl OrderMove {
    pub fn apply(self, a: &OrderElement) -> OrderElement {
        let k = a.k;
        match self {
            OrderMove::NegConj => a.conj().neg(),
            OrderMove::Unit => unit_of(k).expect("k checked").mul(a).expect("same k"),
            OrderMove::UnitInv => unit_inverse(k).expect("k checked").mul(a).expect("same k"),
            OrderMove::Neg => a.neg(),
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            OrderMove::Unit => OrderMove::UnitInv,
            OrderMove::UnitInv => OrderMove::Unit,
            m => m,
        }
    }
}

impl fmt::Display for OrderMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderMove::NegConj => "R",
            OrderMove::Unit => "RM",
            OrderMove::UnitInv => "(RM)^-1",
            OrderMove::Neg => "shift",
        })
    }
}

pub fn apply_moves(a: &OrderElement, moves: &[OrderMove]) -> OrderElement {
    moves.iter().fold(*a, |acc, m| m.apply(&acc))
}

/// Moves `a` (of negative norm `N`) into the window
/// `|N| <= iota(a)^2 < |N| iota(u)^2` with `iota(a) > 0`.
fn reduce_window(a: &OrderElement, moves: &mut Vec<OrderMove>) -> OrderElement {
    let n = a.norm().abs();
    let uinv2 = {
        let ui = unit_inverse(a.k).expect("k checked");
        ui.mul(&ui).expect("same k")
    };
    let mut cur = *a;
    loop {
        let sq = cur.mul(&cur).expect("same k");
        if sq.sub_int(n).real_sign() == Ordering::Less {
            cur = OrderMove::Unit.apply(&cur);
            moves.push(OrderMove::Unit);
        } else if sq.mul(&uinv2).expect("same k").sub_int(n).real_sign() != Ordering::Less {
            cur = OrderMove::UnitInv.apply(&cur);
            moves.push(OrderMove::UnitInv);
        } else {
            break;
        }
    }
    if cur.real_sign() == Ordering::Less {
        cur = cur.neg();
        moves.push(OrderMove::Neg);
    }
    cur
}

/// The orbit representative of `a` under `<-sigma, u, -1>` and a word
/// reaching it.
pub fn canonical_form(a: &OrderElement) -> Result<(OrderElement, Vec<OrderMove>)> {
    check_k(a.k)?;
    if a.norm() >= 0 {
        return Err(Error::NonNegativeNorm(a.norm()));
    }
    let mut w1 = Vec::new();
    let r1 = reduce_window(a, &mut w1);
    let mut w2 = vec![OrderMove::NegConj];
    let r2 = reduce_window(&OrderMove::NegConj.apply(a), &mut w2);
    Ok(if r2 < r1 { (r2, w2) } else { (r1, w1) })
}

/// A base case, recorded by `(r, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BaseTag {
    pub k: i64,
    pub r: i64,
    pub d: i64,
    pub note: &'static str,
}

impl BaseTag {
    pub fn xi(&self) -> OrderElement {
        make_xi(self.d, self.r, self.k).expect("k checked")
    }
}

pub fn base_tags(k: i64) -> Result<Vec<BaseTag>> {
    check_k(k)?;
    let t = |r, d, note| BaseTag { k, r, d, note };
    Ok(match k {
        5 => vec![
            t(1, -2, "pullback under the blowdown X5 -> X6"),
            t(2, -5, "restricted universal subbundle of the Grassmannian"),
        ],
        6 | 7 => vec![
            t(1, -2, "pullback of a line bundle"),
            t(1, -3, "pullback of a line bundle"),
        ],
        8 => vec![
            t(1, -2, "line bundle"),
            t(1, -3, "line bundle, F1 only"),
            t(1, -4, "line bundle"),
        ],
        _ => vec![t(1, -6, "shift of O(-2)")],
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Feasibility {
    Feasible {
        norm: i64,
        base: BaseTag,
        word: Vec<OrderMove>,
    },
    Infeasible {
        norm: i64,
        reason: String,
    },
    SurfaceDependent {
        norm: i64,
        detail: String,
    },
    OutOfInterval {
        norm: i64,
    },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }

    pub fn norm(&self) -> i64 {
        match self {
            Feasibility::Feasible { norm, .. }
            | Feasibility::Infeasible { norm, .. }
            | Feasibility::SurfaceDependent { norm, .. }
            | Feasibility::OutOfInterval { norm } => *norm,
        }
    }
}

/// Reduces `a` to one of the base tags of `O_k`; the word applied to `a`
/// yields the tag's `xi` exactly.
pub fn reduce_to_base(a: &OrderElement) -> Result<Feasibility> {
    let norm = a.norm();
    let (canon, path) = canonical_form(a)?;
    if norm < -a.k {
        return Ok(Feasibility::Infeasible {
            norm,
            reason: "norm < -k".into(),
        });
    }
    for tag in base_tags(a.k)? {
        let (tc, tpath) = canonical_form(&tag.xi())?;
        if tc == canon {
            let mut word = path;
            word.extend(tpath.iter().rev().map(|m| m.inverse()));
            return Ok(Feasibility::Feasible {
                norm,
                base: tag,
                word,
            });
        }
    }
    Ok(Feasibility::Infeasible {
        norm,
        reason: "not realizable".into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurfaceVariant {
    /// The blowup of `P2` at a point.
    F1,
    P1xP1,
}

/// Feasibility of a pair `(V, O)` with `deg(V) = d`, `rank(V) = r` on a
/// del Pezzo surface of degree `k`.
pub fn classify_slope(
    k: i64,
    d: i64,
    r: i64,
    variant: Option<SurfaceVariant>,
) -> Result<Feasibility> {
    check_k(k)?;
    if r <= 0 {
        return Err(Error::NonPositiveRank(r));
    }
    if gcd(d, r) != 1 {
        return Err(Error::NotCoprime(d, r));
    }
    let a = make_xi(d, r, k)?;
    let norm = a.norm();
    if norm >= 0 {
        return Ok(Feasibility::OutOfInterval { norm });
    }
    if norm < -k {
        return Ok(Feasibility::Infeasible {
            norm,
            reason: "norm < -k".into(),
        });
    }
    if k == 9 && d % 3 != 0 {
        return Ok(Feasibility::Infeasible {
            norm,
            reason: "3 does not divide d".into(),
        });
    }
    let verdict = reduce_to_base(&a)?;
    if k == 8 && verdict.is_feasible() && d % 2 != 0 {
        return Ok(match variant {
            Some(SurfaceVariant::F1) => verdict,
            Some(SurfaceVariant::P1xP1) => Feasibility::Infeasible {
                norm,
                reason: "d odd on P1xP1".into(),
            },
            None => Feasibility::SurfaceDependent {
                norm,
                detail: "d odd: feasible on F1, not on P1xP1".into(),
            },
        });
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeVerdict {
    pub k: i64,
    /// `d^2 - krd + kr^2`.
    pub value: i64,
    pub feasibility: Feasibility,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremBReport {
    pub d: i64,
    pub r: i64,
    pub outside_hypotheses: bool,
    pub per_degree: Vec<DegreeVerdict>,
    pub feasible: Vec<i64>,
    pub max_dimension: Option<i64>,
}

/// Degrees `k` for which a bracket of type `(d, r)` sits in a
/// `(k+1)`-dimensional space of compatible brackets. Degree 4 always works;
/// degree 8 is evaluated on `F1`.
pub fn theorem_b_report(d: i64, r: i64) -> Result<TheoremBReport> {
    if r <= 0 {
        return Err(Error::NonPositiveRank(r));
    }
    if gcd(d, r) != 1 {
        return Err(Error::NotCoprime(d, r));
    }
    if d <= r + 1 {
        return Ok(TheoremBReport {
            d,
            r,
            outside_hypotheses: true,
            per_degree: Vec::new(),
            feasible: Vec::new(),
            max_dimension: None,
        });
    }
    let mut per_degree = Vec::new();
    let mut feasible = vec![4];
    for k in 5..=9 {
        let v = classify_slope(k, -d, r, Some(SurfaceVariant::F1))?;
        if v.is_feasible() {
            feasible.push(k);
        }
        per_degree.push(DegreeVerdict {
            k,
            value: d * d - k * r * d + k * r * r,
            feasibility: v,
        });
    }
    let max_dimension = feasible.iter().max().map(|k| k + 1);
    Ok(TheoremBReport {
        d,
        r,
        outside_hypotheses: false,
        per_degree,
        feasible,
        max_dimension,
    })
}
