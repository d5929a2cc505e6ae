//! Local intersection multiplicities of plane curves at rational points,
//! computed with the classical axiomatic recursion: symmetry, additivity
//! over products, invariance under `Q ↦ Q + A·P`, and `I(x, y) = 1`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::polyring::{gcd_poly, Poly, Rat, Var, XY};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPoint {
    pub x: Rat,
    pub y: Rat,
}

impl RatPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        RatPoint { x, y }
    }

    pub fn origin() -> Self {
        RatPoint { x: Rat::zero(), y: Rat::zero() }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RatPoint { x: Rat::from_integer(x.into()), y: Rat::from_integer(y.into()) }
    }
}

impl fmt::Display for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl std::str::FromStr for RatPoint {
    type Err = String;

    /// `"x,y"` with integer or `p/q` coordinates.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected 'x,y', got '{s}'"))?;
        let parse = |t: &str| -> Result<Rat, String> {
            t.trim().parse::<Rat>().map_err(|_| format!("bad rational '{}'", t.trim()))
        };
        Ok(RatPoint { x: parse(a)?, y: parse(b)? })
    }
}

/// A local intersection number; infinite when the curves share a
/// component through the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn finite(self) -> Option<u64> {
        match self {
            Multiplicity::Finite(n) => Some(n),
            Multiplicity::Infinite => None,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::Infinite => write!(f, "infinite"),
        }
    }
}

/// `P(x + a.x, y + a.y)`.
pub fn translate_to_origin(p: &Poly, a: &RatPoint) -> Poly {
    let p = p.with_vars(XY).expect("planar");
    let xs = &Poly::x() + &Poly::constant(XY, a.x.clone());
    let ys = &Poly::y() + &Poly::constant(XY, a.y.clone());
    if a.x.is_zero() && a.y.is_zero() {
        return p;
    }
    // substitute y first through z-free Horner; x's image does not involve y
    p.substitute(Var::Y, &ys).substitute(Var::X, &xs)
}

/// Lowest total degree of a nonzero term of `p` around `a`.
pub fn order_at(p: &Poly, a: &RatPoint) -> Option<u32> {
    translate_to_origin(p, a).terms().map(|(m, _)| m.degree()).min()
}

pub fn intersection_number(p: &Poly, q: &Poly, a: &RatPoint) -> Multiplicity {
    let p = translate_to_origin(p, a);
    let q = translate_to_origin(q, a);
    let vanishes = |f: &Poly| f.constant_term().is_zero();
    if !vanishes(&p) || !vanishes(&q) {
        return Multiplicity::Finite(0);
    }
    if p.is_zero() || q.is_zero() {
        return Multiplicity::Infinite;
    }
    let g = gcd_poly(&p, &q);
    if g.is_constant() {
        return Multiplicity::Finite(at_origin(p, q));
    }
    if vanishes(&g) {
        return Multiplicity::Infinite;
    }
    // g is a unit at the origin
    let p = p.div_exact(&g).expect("gcd divides");
    let q = q.div_exact(&g).expect("gcd divides");
    Multiplicity::Finite(at_origin(p, q))
}

/// Drops the terms of degree above `max`.
fn truncate(p: &Poly, max: u32) -> Poly {
    Poly::from_terms(XY, p.terms().filter(|(m, _)| m.degree() <= max).map(|(m, c)| (c.clone(), *m)))
        .expect("planar")
}

/// Coefficients of `p(x, 0)`, lowest power first, trailing zeros trimmed.
fn on_x_axis(p: &Poly) -> Vec<Rat> {
    let mut c: Vec<Rat> = p
        .coeffs_in(Var::X)
        .iter()
        .map(|k| k.constant_term())
        .collect();
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

/// Valid only when `p` and `q` have no common factor.
///
/// If the local number is at most `n` then `m^n` lies in the local ideal
/// `(p, q)`, and by Nakayama's lemma terms of degree above `n` can be dropped
/// from either generator without changing that ideal. Bezout bounds the
/// number, which keeps the degrees of the recursion from growing.
fn at_origin(mut p: Poly, mut q: Poly) -> u64 {
    let bezout = u64::from(p.degree().unwrap_or(0)) * u64::from(q.degree().unwrap_or(0));
    let mut total = 0u64;
    while p.constant_term().is_zero() && q.constant_term().is_zero() {
        let room = u32::try_from(bezout - total).unwrap_or(u32::MAX);
        p = truncate(&p, room);
        q = truncate(&q, room);
        let p0 = on_x_axis(&p);
        let q0 = on_x_axis(&q);
        assert!(!(p0.is_empty() && q0.is_empty()), "common component y = 0 excluded by the gcd test");
        if p0.is_empty() || q0.is_empty() {
            // y | p:  I(y·A, Q) = I(y, Q) + I(A, Q),  I(y, Q) = ord_x Q(x, 0)
            if q0.is_empty() {
                std::mem::swap(&mut p, &mut q);
            }
            let q0 = on_x_axis(&q);
            total += q0.iter().position(|c| !c.is_zero()).expect("nonzero") as u64;
            p = p.div_exact(&Poly::y()).expect("y divides");
            continue;
        }
        let (p0, q0) = if p0.len() > q0.len() {
            std::mem::swap(&mut p, &mut q);
            (q0, p0)
        } else {
            (p0, q0)
        };
        let (r, s) = (p0.len() - 1, q0.len() - 1);
        // Q ← lc(P0)·Q − lc(Q0)·x^(s−r)·P lowers deg Q(x, 0)
        let shift = Poly::var(XY, Var::X).pow((s - r) as u32);
        let lp = Poly::constant(XY, p0[r].clone());
        let lq = Poly::constant(XY, q0[s].clone());
        q = (&(&lp * &q) - &(&(&lq * &shift) * &p)).primitive();
        assert!(!q.is_zero(), "q a multiple of p contradicts finiteness");
    }
    total
}
