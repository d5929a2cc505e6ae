use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{PolyError, Rat};

/// A polynomial variable. Only three are ever needed: the affine
/// coordinates `x`, `y` and the homogenizing coordinate `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
            Var::Z => 'z',
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Exponent vector indexed by [`Var::index`]. Slots for variables a
/// polynomial does not declare are always zero.
///
/// The derived `Ord` is *not* used; ordering is graded reverse-lexicographic
/// with `x > y > z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn new(x: u32, y: u32, z: u32) -> Self {
        Monomial([x, y, z])
    }

    pub fn of(v: Var, e: u32) -> Self {
        let mut m = [0; 3];
        m[v.index()] = e;
        Monomial(m)
    }

    #[inline]
    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial([
                other.0[0] - self.0[0],
                other.0[1] - self.0[1],
                other.0[2] - self.0[2],
            ]))
        } else {
            None
        }
    }

    #[inline]
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0].max(other.0[0]),
            self.0[1].max(other.0[1]),
            self.0[2].max(other.0[2]),
        ])
    }

    #[inline]
    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for i in (0..3).rev() {
            if self.0[i] != other.0[i] {
                // smaller exponent in the last differing variable wins
                return other.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact sparse polynomial over the rationals in a declared subset of
/// `{x, y, z}`.
///
/// Terms are kept in a `BTreeMap` keyed by the graded reverse-lexicographic
/// order, so iteration, printing and equality are canonical. No stored
/// coefficient is ever zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    vars: Vec<Var>,
    terms: BTreeMap<Monomial, Rat>,
}

pub const XY: &[Var] = &[Var::X, Var::Y];
pub const XYZ: &[Var] = &[Var::X, Var::Y, Var::Z];

fn canonical_vars(vars: &[Var]) -> Vec<Var> {
    let mut v = vars.to_vec();
    v.sort();
    v.dedup();
    v
}

impl Poly {
    pub fn zero(vars: &[Var]) -> Self {
        Poly { vars: canonical_vars(vars), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[Var], c: Rat) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::ONE, c);
        }
        p
    }

    pub fn from_int(vars: &[Var], c: i64) -> Self {
        Poly::constant(vars, Rat::from_integer(BigInt::from(c)))
    }

    pub fn one(vars: &[Var]) -> Self {
        Poly::constant(vars, Rat::one())
    }

    /// The polynomial consisting of the single variable `v`.
    pub fn var(vars: &[Var], v: Var) -> Self {
        let mut vs = vars.to_vec();
        vs.push(v);
        let mut p = Poly::zero(&vs);
        p.terms.insert(Monomial::of(v, 1), Rat::one());
        p
    }

    /// Two-variable shorthand used throughout: `x` and `y` over `{x, y}`.
    pub fn x() -> Self {
        Poly::var(XY, Var::X)
    }

    pub fn y() -> Self {
        Poly::var(XY, Var::Y)
    }

    /// Builds a polynomial from `(coefficient, monomial)` pairs, summing
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(vars: &[Var], terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Rat, Monomial)>,
    {
        let mut p = Poly::zero(vars);
        for (c, m) in terms {
            for v in Var::ALL {
                if m.exp(v) > 0 && !p.vars.contains(&v) {
                    return Err(PolyError::UnknownVariable(v));
                }
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Integer-coefficient convenience used by tests and generators.
    pub fn from_int_terms(vars: &[Var], terms: &[(i64, [u32; 3])]) -> Self {
        Poly::from_terms(
            vars,
            terms.iter().map(|(c, m)| (Rat::from_integer(BigInt::from(*c)), Monomial(*m))),
        )
        .expect("monomial uses an undeclared variable")
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn has_var(&self, v: Var) -> bool {
        self.vars.contains(&v)
    }

    /// Same polynomial, declared over a larger variable set.
    pub fn with_vars(&self, vars: &[Var]) -> Result<Self, PolyError> {
        let vs = canonical_vars(vars);
        for v in Var::ALL {
            if !vs.contains(&v) && self.terms.keys().any(|m| m.exp(v) > 0) {
                return Err(PolyError::UnknownVariable(v));
            }
        }
        Ok(Poly { vars: vs, terms: self.terms.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::ONE)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    fn check_same_vars(&self, other: &Poly) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            })
        }
    }

    pub fn arith(&self, other: &Poly, op: ArithOp) -> Result<Poly, PolyError> {
        self.check_same_vars(other)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(other, &Rat::one()),
            ArithOp::Sub => self.add_unchecked(other, &-Rat::one()),
            ArithOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &Poly, scale: &Rat) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c * scale);
        }
        out
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: Var) -> Result<Poly, PolyError> {
        if !self.has_var(v) {
            return Err(PolyError::UnknownVariable(v));
        }
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut nm = *m;
            nm.0[v.index()] -= 1;
            out.add_term(nm, c * Rat::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    /// Partial derivative in `x` or `y` of a polynomial known to declare
    /// that variable.
    pub fn d(&self, v: Var) -> Poly {
        self.partial(v).expect("variable declared")
    }

    /// Homogeneous component of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// `newVar^target · p(x/newVar, y/newVar, …)`.
    pub fn homogenize(&self, target: u32, new_var: Var) -> Result<Poly, PolyError> {
        if let Some(d) = self.degree() {
            if target < d {
                return Err(PolyError::DegreeTooSmall { target, degree: d });
            }
        }
        if self.terms.keys().any(|m| m.exp(new_var) > 0) {
            return Err(PolyError::VariableInUse(new_var));
        }
        let mut vars = self.vars.clone();
        vars.push(new_var);
        let mut out = Poly::zero(&vars);
        for (m, c) in &self.terms {
            let mut nm = *m;
            nm.0[new_var.index()] = target - m.degree();
            out.add_term(nm, c.clone());
        }
        Ok(out)
    }

    /// Leading homogeneous part, as a binary form in `{x, y}`.
    pub fn top_form(&self) -> Result<BinaryForm, PolyError> {
        let d = self.degree().ok_or(PolyError::ZeroInput)?;
        if self.terms.keys().any(|m| m.exp(Var::Z) > 0) {
            return Err(PolyError::UnknownVariable(Var::Z));
        }
        let poly = self.homogeneous_part(d).with_vars(XY)?;
        Ok(BinaryForm { poly, degree: d })
    }

    /// Substitutes `value` for the variable `v` (Horner in `v`). The result
    /// is declared over the union of both variable sets.
    pub fn substitute(&self, v: Var, value: &Poly) -> Poly {
        let mut vars = self.vars.clone();
        vars.extend_from_slice(&value.vars);
        let vars = canonical_vars(&vars);
        let value = value.with_vars(&vars).expect("superset");
        let coeffs = self.coeffs_in(v);
        let mut acc = Poly::zero(&vars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * &value) + &c.with_vars(&vars).expect("superset");
        }
        acc
    }

    /// Exact evaluation at a rational point; unused slots are ignored.
    pub fn eval(&self, point: &[Rat; 3]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = m.exp(v);
                if e > 0 {
                    t *= num_traits::pow(point[v.index()].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_xy(&self, x: &Rat, y: &Rat) -> Rat {
        self.eval(&[x.clone(), y.clone(), Rat::zero()])
    }

    /// Coefficients with respect to `v`, lowest power first. Each
    /// coefficient keeps this polynomial's variable set but has `v`-degree 0.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let n = self.degree_in(v).map_or(0, |d| d as usize + 1);
        let mut out = vec![Poly::zero(&self.vars); n];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            let mut nm = *m;
            nm.0[v.index()] = 0;
            out[e].terms.insert(nm, c.clone());
        }
        out
    }

    pub fn from_coeffs(vars: &[Var], v: Var, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(vars);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut nm = *m;
                nm.0[v.index()] += e as u32;
                out.add_term(nm, a.clone());
            }
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading_term()?;
        let (lm, lc) = (*lm, lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = lm.quotient_of(m)?;
            let qc = c / &lc;
            rem = rem.add_unchecked(&divisor.mul_term(&qm, &qc), &-Rat::one());
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Rational `c` such that `self / c` has coprime integer coefficients
    /// and a positive leading coefficient. Zero for the zero polynomial.
    pub fn rational_content(&self) -> Rat {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rat::zero();
        }
        let c = Rat::new(num, den);
        if self.leading_coeff().is_negative() {
            -c
        } else {
            c
        }
    }

    /// Integer-primitive normalization with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        let c = self.rational_content();
        if c.is_zero() {
            return self.clone();
        }
        self.scale(&c.recip())
    }

    pub fn monic(&self) -> Poly {
        let lc = self.leading_coeff();
        if lc.is_zero() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    /// `P_x Q_y − P_y Q_x`.
    pub fn jacobian_det(&self, other: &Poly) -> Poly {
        &(&self.d(Var::X) * &other.d(Var::Y)) - &(&self.d(Var::Y) * &other.d(Var::X))
    }
}

/// `add`, `sub` or `mul`; see [`Poly::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl<'a> $tr<&'a Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                match self.arith(rhs, $op) {
                    Ok(p) => p,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, ArithOp::Add);
binop!(Sub, sub, ArithOp::Sub);
binop!(Mul, mul, ArithOp::Mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// A homogeneous polynomial in `{x, y}`; its projective roots are points
/// on the line at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub poly: Poly,
    pub degree: u32,
}

impl BinaryForm {
    pub fn new(poly: Poly, degree: u32) -> Result<Self, PolyError> {
        let poly = poly.with_vars(XY)?;
        if !poly.is_zero() && !(poly.is_homogeneous() && poly.degree() == Some(degree)) {
            return Err(PolyError::NotHomogeneous(degree));
        }
        Ok(BinaryForm { poly, degree })
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Value at `(x : y)`.
    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        self.poly.eval_xy(x, y)
    }

    /// Restriction to the chart `y = 1`, as a polynomial in `x`.
    pub fn dehomogenize_y(&self) -> Poly {
        self.poly.substitute(Var::Y, &Poly::one(XY))
    }
}

fn write_rat(f: &mut fmt::Formatter<'_>, c: &Rat) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for v in Var::ALL {
        let e = m.exp(v);
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

/// Prints in the text grammar accepted by [`super::parse_poly`], terms in
/// descending graded reverse-lexicographic order, e.g.
/// `3*x^2*y - 1/2*y^3 + x - 7`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.degree() == 0 {
                write_rat(f, &abs)?;
            } else if abs.is_one() {
                write_monomial(f, m)?;
            } else {
                write_rat(f, &abs)?;
                write!(f, "*")?;
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
