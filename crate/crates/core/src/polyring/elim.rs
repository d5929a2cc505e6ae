//! Resultants and gcds, both driven by pseudo-remainder sequences with
//! coefficients in the polynomial ring of the remaining variables.

use super::field::{Field, Fp, DEFAULT_PRIME};
use super::poly::{BinaryForm, Poly, Var};
use super::{rat, PolyError};

fn union_vars(p: &Poly, q: &Poly) -> Vec<Var> {
    let mut v = p.vars().to_vec();
    v.extend_from_slice(q.vars());
    v
}

fn lift(p: &Poly, q: &Poly) -> (Poly, Poly) {
    let vars = union_vars(p, q);
    (p.with_vars(&vars).expect("superset"), q.with_vars(&vars).expect("superset"))
}

fn trim(c: &mut Vec<Poly>) {
    while c.last().is_some_and(Poly::is_zero) {
        c.pop();
    }
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`, division in `v`.
pub fn prem(a: &Poly, b: &Poly, v: Var) -> Poly {
    let vars = a.vars().to_vec();
    let mut r = a.coeffs_in(v);
    let bc = b.coeffs_in(v);
    assert!(!bc.is_empty(), "pseudo-division by zero");
    let db = bc.len() - 1;
    let lb = &bc[db];
    if r.len() < bc.len() {
        return a.clone();
    }
    let mut steps = (r.len() - bc.len() + 1) as u32;
    while !r.is_empty() && r.len() > db {
        let top = r.len() - 1;
        let lead = r[top].clone();
        let shift = top - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bi) in bc.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lead * bi);
        }
        debug_assert!(r[top].is_zero());
        r.pop();
        trim(&mut r);
        steps -= 1;
    }
    let rem = Poly::from_coeffs(&vars, v, &r);
    if steps > 0 {
        &rem * &lb.pow(steps)
    } else {
        rem
    }
}

/// Resultant of `p` and `q` with respect to `v`, by the subresultant
/// pseudo-remainder sequence. The result does not involve `v` and
/// vanishes identically exactly when `p` and `q` share a factor of
/// positive `v`-degree.
///
/// One argument may have `v`-degree zero, in which case the resultant is
/// that argument raised to the other's degree.
pub fn resultant(p: &Poly, q: &Poly, v: Var) -> Result<Poly, PolyError> {
    let (p, q) = lift(p, q);
    if !p.has_var(v) {
        return Err(PolyError::UnknownVariable(v));
    }
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let dp = p.degree_in(v).unwrap_or(0);
    let dq = q.degree_in(v).unwrap_or(0);
    if dp == 0 && dq == 0 {
        return Err(PolyError::DegreeZeroInVariable(v));
    }
    if dq == 0 {
        return Ok(q.pow(dp));
    }
    if dp == 0 {
        return Ok(p.pow(dq));
    }

    let (mut a, mut b) = if dp >= dq { (p, q) } else { (q, p) };
    let mut sign_negative = dp < dq && dp % 2 == 1 && dq % 2 == 1;
    let vars = a.vars().to_vec();
    let mut g = Poly::one(&vars);
    let mut h = Poly::one(&vars);

    let lc_in = |p: &Poly| p.coeffs_in(v).pop().expect("nonzero");

    loop {
        let da = a.degree_in(v).unwrap_or(0);
        let db = b.degree_in(v).unwrap_or(0);
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign_negative = !sign_negative;
        }
        let r = prem(&a, &b, v);
        a = b;
        let divisor = &g * &h.pow(delta);
        b = r.div_exact(&divisor).expect("subresultant division is exact");
        g = lc_in(&a);
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).div_exact(&h.pow(delta - 1)).expect("exact")
        };
        if b.is_zero() {
            return Ok(Poly::zero(&vars));
        }
        if b.degree_in(v).unwrap_or(0) == 0 {
            let da = a.degree_in(v).unwrap_or(0);
            let res = if da == 0 {
                Poly::one(&vars)
            } else {
                b.pow(da).div_exact(&h.pow(da - 1)).expect("exact")
            };
            return Ok(if sign_negative { -res } else { res });
        }
    }
}

fn main_var(p: &Poly, q: &Poly) -> Option<Var> {
    [Var::Z, Var::Y, Var::X]
        .into_iter()
        .find(|&v| p.degree_in(v).unwrap_or(0) > 0 || q.degree_in(v).unwrap_or(0) > 0)
}

/// Content with respect to `v`: gcd of the coefficients in `v`.
fn content_in(p: &Poly, v: Var) -> Poly {
    p.coeffs_in(v)
        .iter()
        .fold(Poly::zero(p.vars()), |acc, c| gcd_rec(&acc, c))
}

fn primitive_in(p: &Poly, v: Var) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").primitive()
}

/// Image in `F_p[v]` after substituting `point` for the other variables;
/// `None` when a coefficient denominator vanishes mod p.
fn univariate_image(p: &Poly, v: Var, point: &[i64; 3]) -> Option<Vec<Fp>> {
    let zero = Fp::new(0, DEFAULT_PRIME);
    let mut out = vec![zero; p.degree_in(v).unwrap_or(0) as usize + 1];
    for (m, c) in p.terms() {
        let mut value = c.clone();
        for w in Var::ALL {
            if w != v && m.exp(w) > 0 {
                value *= rat(point[w.index()]).pow(m.exp(w) as i32);
            }
        }
        let slot = &mut out[m.exp(v) as usize];
        *slot = slot.add(&Fp::from_rat(&value, DEFAULT_PRIME)?);
    }
    Some(out)
}

fn fp_gcd_degree(mut a: Vec<Fp>, mut b: Vec<Fp>) -> usize {
    let trim = |c: &mut Vec<Fp>| {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a ← a mod b
        let inv = b.last().expect("nonempty").inv();
        while a.len() >= b.len() {
            let factor = a.last().expect("nonempty").mul(&inv);
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[shift + i] = a[shift + i].sub(&c.mul(&factor));
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Sufficient test that `p` and `q` share no factor of positive degree in
/// `v`: some specialization of the other variables keeps both leading
/// coefficients nonzero modulo a large prime and yields coprime images.
/// A common factor would survive such a specialization with its degree.
fn certainly_coprime_in(p: &Poly, q: &Poly, v: Var) -> bool {
    let (dp, dq) = (p.degree_in(v).unwrap_or(0) as usize, q.degree_in(v).unwrap_or(0) as usize);
    for t in 1..=6i64 {
        let point = [t, 2 * t + 1, 3 * t - 1];
        let (Some(a), Some(b)) = (univariate_image(p, v, &point), univariate_image(q, v, &point)) else {
            return false;
        };
        if a[dp].is_zero() || b[dq].is_zero() {
            continue;
        }
        if fp_gcd_degree(a, b) == 0 {
            return true;
        }
    }
    false
}

fn gcd_rec(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() {
        return if q.is_zero() { q.clone() } else { q.primitive() };
    }
    if q.is_zero() {
        return p.primitive();
    }
    let Some(v) = main_var(p, q) else {
        return Poly::one(p.vars());
    };
    let content = gcd_rec(&content_in(p, v), &content_in(q, v));
    let mut a = primitive_in(p, v);
    let mut b = primitive_in(q, v);
    if a.degree_in(v).unwrap_or(0) > 0 && b.degree_in(v).unwrap_or(0) > 0 && certainly_coprime_in(&a, &b, v) {
        return content.primitive();
    }
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    let core = loop {
        if b.is_zero() {
            break a;
        }
        if b.degree_in(v).unwrap_or(0) == 0 {
            break Poly::one(p.vars());
        }
        let r = prem(&a, &b, v);
        a = b;
        b = primitive_in(&r, v);
    };
    (&content * &core).primitive()
}

/// Greatest common divisor, normalized to coprime integer coefficients with
/// a positive leading coefficient. `gcd(0, q)` is the normalized `q`.
pub fn gcd_poly(p: &Poly, q: &Poly) -> Poly {
    let (p, q) = lift(p, q);
    gcd_rec(&p, &q)
}

/// True iff `p` has no repeated factor of positive degree in `v`.
pub fn is_squarefree_in(p: &Poly, v: Var) -> bool {
    let g = gcd_poly(p, &p.d(v));
    g.degree_in(v).unwrap_or(0) == 0
}

/// True iff the form has distinct projective roots, i.e.
/// `gcd(b, ∂b/∂x, ∂b/∂y)` is constant.
pub fn squarefree(b: &BinaryForm) -> Result<bool, PolyError> {
    if b.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let g = gcd_poly(&gcd_poly(&b.poly, &b.poly.d(Var::X)), &b.poly.d(Var::Y));
    Ok(g.is_constant())
}

/// True iff the two forms have no common projective root.
pub fn forms_coprime(a: &Poly, b: &Poly) -> bool {
    gcd_poly(a, b).is_constant()
}
