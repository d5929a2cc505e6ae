//! Exact tests of the general-position conditions behind the cusp and node
//! counts. Each check reduces to a constant-gcd test on binary forms, a
//! quotient dimension, or an ideal-membership test `1 ∈ I`.
//!
//! Intersections of two curves are tested for transversality through
//! `1 ∈ (P, Q, P_x Q_y − P_y Q_x)`: a common zero where the Jacobian
//! determinant also vanishes is exactly a non-transversal one.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::ideals::{contains_one_with, quotient_dimension, GroebnerConfig, IdealBasis, IdealError};
use crate::jets::{jacobian_curve, jet_triple, PlaneMap};
use crate::polyring::{forms_coprime, is_squarefree_in, rat, resultant, squarefree, Poly, Var, XY, XYZ};
use crate::sampling::{Sampler, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Budget,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Budget => "budget",
        })
    }
}

/// A verdict with an optional explanation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl Outcome {
    fn pass() -> Self {
        Outcome { verdict: Verdict::Pass, note: None }
    }

    fn vacuous(why: &str) -> Self {
        Outcome { verdict: Verdict::Pass, note: Some(format!("vacuous: {why}")) }
    }

    fn fail(why: impl Into<String>) -> Self {
        Outcome { verdict: Verdict::Fail, note: Some(why.into()) }
    }

    fn from_bool(ok: bool, why_not: &str) -> Self {
        if ok {
            Outcome::pass()
        } else {
            Outcome::fail(why_not)
        }
    }

    fn budget(e: IdealError) -> Self {
        Outcome { verdict: Verdict::Budget, note: Some(e.to_string()) }
    }
}

fn run(check: impl FnOnce() -> Result<Outcome, IdealError>) -> Outcome {
    check().unwrap_or_else(Outcome::budget)
}

fn ideal(gens: &[&Poly]) -> IdealBasis {
    IdealBasis::new(gens.iter().map(|p| (*p).clone()))
}

fn grad(p: &Poly) -> (Poly, Poly) {
    (p.d(Var::X), p.d(Var::Y))
}

/// Top form of `p`, or zero for the zero polynomial.
fn top(p: &Poly) -> Poly {
    p.top_form().map(|b| b.poly).unwrap_or_else(|_| Poly::zero(XY))
}

/// The gradient curves `f_x = 0`, `f_y = 0` miss the line at infinity.
pub fn check_grad_disjoint_at_infinity(map: &PlaneMap) -> Outcome {
    if map.d1() == 1 {
        return Outcome::vacuous("d1 = 1");
    }
    let (fx, fy) = grad(map.f());
    Outcome::from_bool(forms_coprime(&top(&fx), &top(&fy)), "top forms of f_x and f_y share a root")
}

/// The gradient curves meet in `(d1 − 1)²` distinct points, all transversal
/// and none at infinity.
pub fn check_grad_transversal(map: &PlaneMap, cfg: &GroebnerConfig) -> Outcome {
    if map.d1() == 1 {
        return Outcome::vacuous("d1 = 1");
    }
    let disjoint = check_grad_disjoint_at_infinity(map);
    if disjoint.verdict != Verdict::Pass {
        return disjoint;
    }
    let (fx, fy) = grad(map.f());
    run(|| {
        let expected = u64::from(map.d1() - 1).pow(2);
        let dim = quotient_dimension(&ideal(&[&fx, &fy]), cfg)?.dimension;
        if dim != Some(expected) {
            let shown = dim.map_or("infinite".to_string(), |d| d.to_string());
            return Ok(Outcome::fail(format!("gradient quotient has dimension {shown}, expected {expected}")));
        }
        let hess = fx.jacobian_det(&fy);
        Ok(Outcome::from_bool(
            contains_one_with(&ideal(&[&fx, &fy]), &hess, cfg)?,
            "f_x and f_y meet non-transversally",
        ))
    })
}

/// `(disjointness of J, J11 at infinity, transversality of J to the line at
/// infinity)`.
pub fn check_j_infinity(map: &PlaneMap) -> (Outcome, Outcome) {
    let t = jet_triple(map);
    if t.j.is_zero() {
        let zero = Outcome::fail("Jacobian determinant vanishes identically");
        return (zero.clone(), zero);
    }
    let big_d = map.d1() + map.d2() - 2;
    let first = if t.j.is_constant() {
        Outcome::vacuous("J is constant")
    } else {
        Outcome::from_bool(forms_coprime(&top(&t.j), &top(&t.j11)), "J and J11 share a point at infinity")
    };
    let deg = t.j.degree().expect("nonzero");
    let second = if deg != big_d {
        Outcome::fail(format!("deg J = {deg}, expected {big_d}"))
    } else if big_d == 0 {
        Outcome::vacuous("J is constant")
    } else {
        let sqf = squarefree(&t.j.top_form().expect("nonzero")).expect("nonzero");
        Outcome::from_bool(sqf, "top form of J has a repeated root")
    };
    (first, second)
}

/// Where `∇f` vanishes, neither `g_x` nor `g_y` does.
pub fn check_mixed_vanishing(map: &PlaneMap, cfg: &GroebnerConfig) -> Outcome {
    let (fx, fy) = grad(map.f());
    let (gx, gy) = grad(map.g());
    run(|| {
        let grad_ideal = ideal(&[&fx, &fy]);
        if !contains_one_with(&grad_ideal, &gx, cfg)? {
            return Ok(Outcome::fail("f_x, f_y, g_x have a common zero"));
        }
        Ok(Outcome::from_bool(contains_one_with(&grad_ideal, &gy, cfg)?, "f_x, f_y, g_y have a common zero"))
    })
}

/// `J12` does not vanish where `∇f` does.
pub fn check_grad_j12(map: &PlaneMap, cfg: &GroebnerConfig) -> Outcome {
    let (fx, fy) = grad(map.f());
    let j12 = jet_triple(map).j12;
    run(|| Ok(Outcome::from_bool(contains_one_with(&ideal(&[&fx, &fy]), &j12, cfg)?, "f_x, f_y, J12 have a common zero")))
}

/// `J` and `J11` meet transversally.
pub fn check_j_j11_transversal(map: &PlaneMap, cfg: &GroebnerConfig) -> Outcome {
    let t = jet_triple(map);
    if t.j.is_zero() {
        return Outcome::fail("Jacobian determinant vanishes identically");
    }
    if t.j.is_constant() {
        return Outcome::vacuous("J is constant");
    }
    if !crate::polyring::gcd_poly(&t.j, &t.j11).is_constant() {
        return Outcome::fail("J and J11 share a component");
    }
    let det = t.j.jacobian_det(&t.j11);
    run(|| Ok(Outcome::from_bool(contains_one_with(&ideal(&[&t.j, &t.j11]), &det, cfg)?, "J and J11 meet non-transversally")))
}

/// Homogenized partials of `p̃` (degree `deg`) restricted to `z = 0`:
/// `(p̃_x, p̃_z)` at infinity.
fn partials_at_infinity(p: &Poly, deg: u32) -> (Poly, Poly) {
    let h = p.with_vars(XY).expect("planar").homogenize(deg, Var::Z).expect("degree cap");
    let at_inf = |q: Poly| q.substitute(Var::Z, &Poly::zero(XYZ)).with_vars(XY).expect("z eliminated");
    (at_inf(h.d(Var::X)), at_inf(h.d(Var::Z)))
}

/// Orders a map so that the first component has the larger degree cap.
fn ordered(map: &PlaneMap) -> PlaneMap {
    if map.d1() < map.d2() {
        map.swapped()
    } else {
        map.clone()
    }
}

/// Common preconditions at infinity: returns the top form of `J` when it is
/// squarefree of degree `D`, or the failing outcome.
fn top_j_squarefree(map: &PlaneMap) -> Result<Poly, Outcome> {
    let j = jacobian_curve(map);
    let big_d = map.d1() + map.d2() - 2;
    if j.is_zero() {
        return Err(Outcome::fail("Jacobian determinant vanishes identically"));
    }
    if j.degree() != Some(big_d) {
        return Err(Outcome::fail(format!("deg J = {}, expected {big_d}", j.degree().expect("nonzero"))));
    }
    let t = j.top_form().expect("nonzero");
    if !squarefree(&t).expect("nonzero") {
        return Err(Outcome::fail("precondition: top form of J has a repeated root"));
    }
    Ok(t.poly)
}

/// The at-infinity conditions are read in the chart `y = 1`, which misses
/// the point `(1 : 0)`. When the top form of `J` vanishes there, the map is
/// precomposed with a shear `(x, y) ↦ (x, y + s x)`, `s` drawn from the seed,
/// so that no point at infinity of the critical curve is missed.
fn chart_shear(map: PlaneMap, tj: &Poly, seed: u64) -> (PlaneMap, Option<i64>) {
    let x_power = crate::polyring::Monomial::new(tj.degree().unwrap_or(0), 0, 0);
    if !tj.coeff(&x_power).is_zero() {
        return (map, None);
    }
    let mut sampler = Sampler::stream(seed, Stream::Shear);
    let s = loop {
        let v = sampler.uniform_nonzero(50);
        if !tj.eval_xy(&rat(1), &rat(v)).is_zero() {
            break v;
        }
    };
    let y_image = &Poly::y() + &Poly::x().scale(&rat(s));
    (map.precompose_affine(&Poly::x(), &y_image), Some(s))
}

/// At each point `P` where the critical curve meets the line at infinity,
/// `f̄(P) ≠ 0`, `ḡ(P) ≠ 0`, and the first-order coefficients `c`, `d` of
/// `f̄`, `ḡ` along the critical curve satisfy `c d ≠ 0` and `d2 c ≠ d1 d`.
/// Each condition is the coprimality of a binary form with the top form of
/// `J`.
pub fn check_infinity_nonvanishing(map: &PlaneMap, seed: u64) -> Outcome {
    let map = ordered(map);
    if map.d1() + map.d2() == 2 {
        return Outcome::vacuous("no points at infinity on the critical curve");
    }
    let tj = match top_j_squarefree(&map) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let (d1, d2) = (map.d1(), map.d2());
    let big_d = d1 + d2 - 2;
    let tf = map.f().homogeneous_part(d1);
    let tg = map.g().homogeneous_part(d2);
    if !forms_coprime(&tf, &tj) {
        return Outcome::fail("f vanishes at a point at infinity of J");
    }
    if !forms_coprime(&tg, &tj) {
        return Outcome::fail("g vanishes at a point at infinity of J");
    }
    let (map, _) = chart_shear(map, &tj, seed);
    let tj = top(&jacobian_curve(&map));
    let tf = map.f().homogeneous_part(d1);
    let tg = map.g().homogeneous_part(d2);
    let (jx, jz) = partials_at_infinity(&jacobian_curve(&map), big_d);
    let (fx, fz) = partials_at_infinity(map.f(), d1);
    let (gx, gz) = partials_at_infinity(map.g(), d2);
    let c_form = &(&fz * &jx) - &(&fx * &jz);
    let d_form = &(&gz * &jx) - &(&gx * &jz);
    if !forms_coprime(&c_form, &tj) {
        return Outcome::fail("c vanishes at a point at infinity of J");
    }
    if !forms_coprime(&d_form, &tj) {
        return Outcome::fail("d vanishes at a point at infinity of J");
    }
    let e_form = &(&tg * &c_form).scale(&rat(d2.into())) - &(&tf * &d_form).scale(&rat(d1.into()));
    Outcome::from_bool(forms_coprime(&e_form, &tj), "d2 c = d1 d at a point at infinity of J")
}

/// Outcome of the row check together with the shear it applied, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowOutcome {
    pub outcome: Outcome,
    pub shear: Option<i64>,
}

/// The values `ḡ(P)^{d1} / f̄(P)^{d2}` at the `D` points at infinity of the
/// critical curve are pairwise distinct. In the chart `y = 1` they are the
/// roots of `R(v) = Res_x(J̄(x, 1), v f̄(x, 1)^{d2} − ḡ(x, 1)^{d1})`, so the
/// test is: `R` has degree exactly `D` in `v` and is squarefree.
pub fn check_row(map: &PlaneMap, seed: u64) -> RowOutcome {
    let map = ordered(map);
    let plain = |outcome| RowOutcome { outcome, shear: None };
    if map.d1() + map.d2() == 2 {
        return plain(Outcome::vacuous("D = 0"));
    }
    let tj = match top_j_squarefree(&map) {
        Ok(t) => t,
        Err(o) => return plain(o),
    };
    let (d1, d2) = (map.d1(), map.d2());
    let big_d = d1 + d2 - 2;
    if !forms_coprime(&map.f().homogeneous_part(d1), &tj) || !forms_coprime(&map.g().homogeneous_part(d2), &tj) {
        return plain(Outcome::fail("precondition: f or g vanishes at a point at infinity of J"));
    }
    let (map, shear) = chart_shear(map, &tj, seed);
    // chart y = 1, with v carried by the variable y
    let chart = |p: Poly| p.substitute(Var::Y, &Poly::one(XY));
    let tj = chart(top(&jacobian_curve(&map)));
    let tf = chart(map.f().homogeneous_part(d1)).pow(d2);
    let tg = chart(map.g().homogeneous_part(d2)).pow(d1);
    let second = &(&Poly::y() * &tf) - &tg;
    let r = resultant(&tj, &second, Var::X).expect("J has positive degree in x");
    let outcome = if r.degree_in(Var::Y) != Some(big_d) {
        Outcome::fail(format!("row resultant has degree {:?} in v, expected {big_d}", r.degree_in(Var::Y)))
    } else {
        Outcome::from_bool(is_squarefree_in(&r, Var::Y), "two points at infinity give the same value")
    };
    RowOutcome { outcome, shear }
}

/// All nine verdicts, plus the shear used by the row check and any notes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenericityReport {
    pub grad_transversal: Verdict,
    pub grad_disjoint_at_infinity: Verdict,
    pub j_transversal_infinity: Verdict,
    pub j_j11_disjoint_infinity: Verdict,
    pub no_mixed_vanishing: Verdict,
    pub grad_disjoint_j12: Verdict,
    pub j_j11_transversal: Verdict,
    pub infinity_nonvanishing: Verdict,
    pub row_condition: Verdict,
    pub shear: Option<i64>,
    pub notes: Vec<String>,
}

/// Label for maps passing every check: only the conditions tested here are
/// certified, not full transversality of the jet map.
pub const EFFECTIVE_LABEL: &str = "paper-generic (effective)";

impl GenericityReport {
    /// `(name, verdict)` in report order.
    pub fn verdicts(&self) -> [(&'static str, Verdict); 9] {
        [
            ("gradTransversal", self.grad_transversal),
            ("gradDisjointAtInfinity", self.grad_disjoint_at_infinity),
            ("jTransversalInfinity", self.j_transversal_infinity),
            ("jJ11DisjointInfinity", self.j_j11_disjoint_infinity),
            ("noMixedVanishing", self.no_mixed_vanishing),
            ("gradDisjointJ12", self.grad_disjoint_j12),
            ("jJ11Transversal", self.j_j11_transversal),
            ("infinityNonvanishing", self.infinity_nonvanishing),
            ("rowCondition", self.row_condition),
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts().iter().all(|(_, v)| *v == Verdict::Pass)
    }

    pub fn any_budget(&self) -> bool {
        self.verdicts().iter().any(|(_, v)| *v == Verdict::Budget)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.verdicts().iter().filter(|(_, v)| *v != Verdict::Pass).map(|(n, _)| *n).collect()
    }
}

pub fn genericity_report(map: &PlaneMap, seed: u64, cfg: &GroebnerConfig) -> GenericityReport {
    let mut notes = Vec::new();
    let mut take = |name: &str, o: Outcome| {
        if let Some(n) = o.note {
            notes.push(format!("{name}: {n}"));
        }
        o.verdict
    };
    let grad_transversal = take("gradTransversal", check_grad_transversal(map, cfg));
    let grad_disjoint_at_infinity = take("gradDisjointAtInfinity", check_grad_disjoint_at_infinity(map));
    let (j11_inf, j_inf) = check_j_infinity(map);
    let j_j11_disjoint_infinity = take("jJ11DisjointInfinity", j11_inf);
    let j_transversal_infinity = take("jTransversalInfinity", j_inf);
    let no_mixed_vanishing = take("noMixedVanishing", check_mixed_vanishing(map, cfg));
    let grad_disjoint_j12 = take("gradDisjointJ12", check_grad_j12(map, cfg));
    let j_j11_transversal = take("jJ11Transversal", check_j_j11_transversal(map, cfg));
    let infinity_nonvanishing = take("infinityNonvanishing", check_infinity_nonvanishing(map, seed));
    let row = check_row(map, seed);
    let row_condition = take("rowCondition", row.outcome);
    GenericityReport {
        grad_transversal,
        grad_disjoint_at_infinity,
        j_transversal_infinity,
        j_j11_disjoint_infinity,
        no_mixed_vanishing,
        grad_disjoint_j12,
        j_j11_transversal,
        infinity_nonvanishing,
        row_condition,
        shear: row.shear,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn map(f: &str, g: &str) -> PlaneMap {
        PlaneMap::with_natural_caps(parse_poly(f).unwrap(), parse_poly(g).unwrap()).unwrap()
    }

    fn cfg() -> GroebnerConfig {
        GroebnerConfig::default()
    }

    #[test]
    fn gradient_examples() {
        assert_eq!(check_grad_transversal(&map("x^2+y^2+x*y", "x"), &cfg()).verdict, Verdict::Pass);
        assert_eq!(check_grad_transversal(&map("x^3+y^3", "x"), &cfg()).verdict, Verdict::Fail);
        assert_eq!(check_grad_transversal(&map("x", "y^2"), &cfg()).verdict, Verdict::Pass);
    }

    #[test]
    fn jacobian_at_infinity_examples() {
        let (a, b) = check_j_infinity(&map("x^2", "y^2"));
        // top J = 4xy and top J11 = -8x^2 share the root (0 : 1)
        assert_eq!((a.verdict, b.verdict), (Verdict::Fail, Verdict::Pass));
        let (a, b) = check_j_infinity(&map("x", "y"));
        assert_eq!((a.verdict, b.verdict), (Verdict::Pass, Verdict::Pass));
        assert!(b.note.unwrap().starts_with("vacuous"));
        let (_, b) = check_j_infinity(&map("x", "y^3"));
        assert_eq!(b.verdict, Verdict::Fail);
        let (a, b) = check_j_infinity(&map("x^2", "x^2"));
        assert_eq!((a.verdict, b.verdict), (Verdict::Fail, Verdict::Fail));
    }

    #[test]
    fn mixed_and_j12_examples() {
        assert_eq!(check_mixed_vanishing(&map("x^2+y^2", "x+y"), &cfg()).verdict, Verdict::Pass);
        assert_eq!(check_mixed_vanishing(&map("x^2+y^2", "x^2"), &cfg()).verdict, Verdict::Fail);
        assert_eq!(check_mixed_vanishing(&map("x", "y^3+x*y"), &cfg()).verdict, Verdict::Pass);
        assert_eq!(check_grad_j12(&map("x", "y^3+x*y"), &cfg()).verdict, Verdict::Pass);
        // J12 = 4x^2 + 4y^2 vanishes at the origin, where grad f does
        assert_eq!(check_grad_j12(&map("x^2+y^2", "x*y"), &cfg()).verdict, Verdict::Fail);
        assert_eq!(check_grad_j12(&map("x^2", "y^2"), &cfg()).verdict, Verdict::Fail);
    }

    #[test]
    fn j_j11_examples() {
        assert_eq!(check_j_j11_transversal(&map("x", "y^3+x*y"), &cfg()).verdict, Verdict::Pass);
        assert_eq!(check_j_j11_transversal(&map("x", "y^4+x*y"), &cfg()).verdict, Verdict::Fail);
        assert_eq!(check_j_j11_transversal(&map("x", "y"), &cfg()).verdict, Verdict::Pass);
    }

    #[test]
    fn infinity_examples() {
        assert_eq!(check_infinity_nonvanishing(&map("x", "y"), 0).verdict, Verdict::Pass);
        // f and g both divisible by x at top degree: (0 : 1) is a root of
        // top f, top g and top J
        let m = map(
            "2*x^3 + 2*x^2*y - 4*x*y^2 + 7*x^2 - 4*x*y + 2*y^2 + 4*x + y - 5",
            "-2*x^2 - 5*x*y - 2*x + 5*y + 3",
        );
        let o = check_infinity_nonvanishing(&m, 0);
        assert_eq!(o.verdict, Verdict::Fail);
        assert_eq!(o.note.as_deref(), Some("f vanishes at a point at infinity of J"));
        assert_eq!(check_row(&map("x", "y"), 0).outcome.verdict, Verdict::Pass);
    }

    #[test]
    fn row_fails_when_top_forms_agree() {
        // top J = -8xy; both points at infinity give (g/f)^2 = 1
        let m = map("x^2+y^2+x", "x^2-y^2+y");
        let r = check_row(&m, 1);
        assert_eq!(r.outcome.verdict, Verdict::Fail);
        assert!(r.outcome.note.unwrap().contains("same value"));
        assert!(r.shear.is_some());
    }
}
