//! Buchberger's algorithm in two variables under graded reverse-lex order,
//! with the sugar selection strategy and both Buchberger criteria.
//!
//! Used for three things only: deciding zero-dimensionality, counting
//! standard monomials (the dimension of the quotient algebra, i.e. the
//! number of common zeros with multiplicity), and the test `1 ∈ I`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::polyring::{Field, FieldMode, Fp, Monomial, Poly, Rat, Var, XY};

/// Default cap on the number of S-polynomial reductions.
pub const DEFAULT_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("Gröbner budget of {0} S-pair reductions exceeded")]
    Budget(u64),
    #[error("a coefficient denominator vanishes modulo {0}")]
    UnluckyPrime(u64),
}

/// Engine settings shared by every ideal computation in a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerConfig {
    pub budget: u64,
    pub field: FieldMode,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig { budget: DEFAULT_BUDGET, field: FieldMode::Rationals }
    }
}

impl GroebnerConfig {
    pub fn rational(self) -> Self {
        GroebnerConfig { field: FieldMode::Rationals, ..self }
    }
}

/// Generators of an ideal of `Q[x, y]`. Zero generators are dropped on
/// construction; an empty list is the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    generators: Vec<Poly>,
}

impl IdealBasis {
    pub fn new<I: IntoIterator<Item = Poly>>(gens: I) -> Self {
        IdealBasis {
            generators: gens
                .into_iter()
                .filter(|p| !p.is_zero())
                .map(|p| p.with_vars(XY).expect("ideal generators live in Q[x, y]"))
                .collect(),
        }
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn is_unit_ideal_basis(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_constant()
    }
}

impl std::fmt::Display for IdealBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientInfo {
    pub is_zero_dimensional: bool,
    /// `None` when the quotient is infinite-dimensional.
    pub dimension: Option<u64>,
    pub standard_monomials: Vec<Monomial>,
}

/// Dense-ish working polynomial: terms in descending order, monic after
/// normalization, with its sugar degree.
#[derive(Clone, Debug)]
struct Work<F> {
    terms: Vec<(Monomial, F)>,
    sugar: u32,
}

impl<F: Field> Work<F> {
    fn lm(&self) -> Monomial {
        self.terms[0].0
    }

    fn make_monic(&mut self) {
        let inv = self.terms[0].1.inv();
        if !self.terms[0].1.is_one() {
            for (_, c) in self.terms.iter_mut() {
                *c = c.mul(&inv);
            }
        }
    }
}

fn to_map<F: Field>(terms: &[(Monomial, F)]) -> BTreeMap<Monomial, F> {
    terms.iter().cloned().collect()
}

/// `acc -= c · m · g`
fn sub_scaled<F: Field>(acc: &mut BTreeMap<Monomial, F>, c: &F, m: &Monomial, g: &[(Monomial, F)]) {
    for (gm, gc) in g {
        let key = gm.mul(m);
        let delta = gc.mul(c);
        match acc.get_mut(&key) {
            Some(v) => {
                *v = v.sub(&delta);
                if v.is_zero() {
                    acc.remove(&key);
                }
            }
            None => {
                acc.insert(key, delta.neg());
            }
        }
    }
}

/// Full normal form of `p` modulo the monic polynomials `basis`.
fn normal_form<F: Field>(p: BTreeMap<Monomial, F>, basis: &[&Work<F>]) -> Vec<(Monomial, F)> {
    let mut p = p;
    let mut rem = Vec::new();
    while let Some((&m, c)) = p.iter().next_back() {
        let c = c.clone();
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let q = g.lm().quotient_of(&m).expect("divides");
                sub_scaled(&mut p, &c, &q, &g.terms);
            }
            None => {
                p.remove(&m);
                rem.push((m, c));
            }
        }
    }
    rem
}

fn s_poly<F: Field>(a: &Work<F>, b: &Work<F>) -> BTreeMap<Monomial, F> {
    let l = a.lm().lcm(&b.lm());
    let qa = a.lm().quotient_of(&l).expect("lcm");
    let qb = b.lm().quotient_of(&l).expect("lcm");
    let one = a.terms[0].1.one_like();
    let mut acc = BTreeMap::new();
    sub_scaled(&mut acc, &one.neg(), &qa, &a.terms);
    sub_scaled(&mut acc, &one, &qb, &b.terms);
    acc
}

fn pair_sugar<F>(a: &Work<F>, b: &Work<F>, l: &Monomial) -> u32 {
    let sa = a.sugar + l.degree() - a.terms[0].0.degree();
    let sb = b.sugar + l.degree() - b.terms[0].0.degree();
    sa.max(sb)
}

fn key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

/// Reduced Gröbner basis over the field `F`, monic, sorted by ascending
/// leading monomial. The unit ideal yields `[1]`; the zero ideal `[]`.
fn buchberger<F: Field>(gens: Vec<Vec<(Monomial, F)>>, budget: u64) -> Result<Vec<Vec<(Monomial, F)>>, IdealError> {
    let mut basis: Vec<Work<F>> = Vec::new();
    let mut pending: BTreeSet<(u32, Monomial, usize, usize)> = BTreeSet::new();
    let mut pending_keys: HashSet<(usize, usize)> = HashSet::new();
    let mut reductions = 0u64;

    let one_basis = |c: &F| vec![vec![(Monomial::ONE, c.one_like())]];

    let add = |w: Work<F>,
                   basis: &mut Vec<Work<F>>,
                   pending: &mut BTreeSet<(u32, Monomial, usize, usize)>,
                   pending_keys: &mut HashSet<(usize, usize)>| {
        let n = basis.len();
        for (k, b) in basis.iter().enumerate() {
            let l = b.lm().lcm(&w.lm());
            pending.insert((pair_sugar(b, &w, &l), l, k, n));
            pending_keys.insert((k, n));
        }
        basis.push(w);
    };

    let mut inputs: Vec<Work<F>> = gens
        .into_iter()
        .filter(|t| !t.is_empty())
        .map(|terms| {
            let sugar = terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
            let mut w = Work { terms, sugar };
            w.make_monic();
            w
        })
        .collect();
    inputs.sort_by(|a, b| a.lm().cmp(&b.lm()).then(a.sugar.cmp(&b.sugar)));
    for w in inputs {
        if w.lm() == Monomial::ONE {
            return Ok(one_basis(&w.terms[0].1));
        }
        add(w, &mut basis, &mut pending, &mut pending_keys);
    }

    while let Some(first) = pending.iter().next().cloned() {
        pending.remove(&first);
        let (sugar, l, i, j) = first;
        pending_keys.remove(&(i, j));

        if basis[i].lm().is_coprime(&basis[j].lm()) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&l)
                && !pending_keys.contains(&key(i, k))
                && !pending_keys.contains(&key(j, k))
        });
        if chain {
            continue;
        }

        reductions += 1;
        if reductions > budget {
            return Err(IdealError::Budget(budget));
        }
        let s = s_poly(&basis[i], &basis[j]);
        let refs: Vec<&Work<F>> = basis.iter().collect();
        let r = normal_form(s, &refs);
        if r.is_empty() {
            continue;
        }
        let mut w = Work { terms: r, sugar };
        w.make_monic();
        if w.lm() == Monomial::ONE {
            return Ok(one_basis(&w.terms[0].1));
        }
        add(w, &mut basis, &mut pending, &mut pending_keys);
    }

    // minimalize: drop elements whose leading monomial another one divides
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..basis.len() {
        let li = basis[i].lm();
        let redundant = (0..basis.len()).any(|k| {
            k != i && basis[k].lm().divides(&li) && (basis[k].lm() != li || k < i)
        });
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<Work<F>> = keep.into_iter().map(|i| basis[i].clone()).collect();

    // interreduce tails
    let mut reduced = Vec::with_capacity(minimal.len());
    for (i, g) in minimal.iter().enumerate() {
        let others: Vec<&Work<F>> = minimal.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, w)| w).collect();
        let head = g.terms[0].clone();
        let tail = normal_form(to_map(&g.terms[1..]), &others);
        let mut terms = vec![head];
        terms.extend(tail);
        reduced.push(terms);
    }
    reduced.sort_by(|a, b| a[0].0.cmp(&b[0].0));
    Ok(reduced)
}

fn rational_terms(p: &Poly) -> Vec<(Monomial, Rat)> {
    p.terms().map(|(m, c)| (*m, c.clone())).collect()
}

fn modular_terms(p: &Poly, modulus: u64) -> Result<Vec<(Monomial, Fp)>, IdealError> {
    let mut out = Vec::new();
    for (m, c) in p.terms() {
        let v = Fp::from_rat(c, modulus).ok_or(IdealError::UnluckyPrime(modulus))?;
        if v.value() != 0 {
            out.push((*m, v));
        }
    }
    Ok(out)
}

/// Leading monomials of the reduced basis, computed in the configured field.
fn leading_monomials(ideal: &IdealBasis, cfg: &GroebnerConfig) -> Result<Vec<Monomial>, IdealError> {
    let lms = match cfg.field {
        FieldMode::Rationals => {
            let gens = ideal.generators.iter().map(rational_terms).collect();
            buchberger(gens, cfg.budget)?.into_iter().map(|t| t[0].0).collect()
        }
        FieldMode::Prime(p) => {
            let gens = ideal
                .generators
                .iter()
                .map(|g| modular_terms(g, p))
                .collect::<Result<Vec<_>, _>>()?;
            buchberger(gens, cfg.budget)?.into_iter().map(|t| t[0].0).collect()
        }
    };
    Ok(lms)
}

/// Reduced Gröbner basis over the rationals. Idempotent; generators come
/// out monic and sorted by ascending leading monomial.
pub fn groebner(ideal: &IdealBasis, budget: u64) -> Result<IdealBasis, IdealError> {
    let gens = ideal.generators.iter().map(rational_terms).collect();
    let basis = buchberger(gens, budget)?;
    Ok(IdealBasis::new(basis.into_iter().map(|terms| {
        Poly::from_terms(XY, terms.into_iter().map(|(m, c)| (c, m))).expect("planar")
    })))
}

/// Standard-monomial count of `Q[x, y] / I`.
pub fn quotient_dimension(ideal: &IdealBasis, cfg: &GroebnerConfig) -> Result<QuotientInfo, IdealError> {
    let lms = leading_monomials(ideal, cfg)?;
    Ok(quotient_from_leading(&lms))
}

fn quotient_from_leading(lms: &[Monomial]) -> QuotientInfo {
    let pure = |v: Var| {
        lms.iter()
            .filter(|m| m.degree() == m.exp(v))
            .map(|m| m.exp(v))
            .min()
    };
    let (Some(ax), Some(ay)) = (pure(Var::X), pure(Var::Y)) else {
        return QuotientInfo { is_zero_dimensional: false, dimension: None, standard_monomials: Vec::new() };
    };
    let mut standard = Vec::new();
    for d in 0..(ax + ay) {
        for i in (0..=d).rev() {
            let m = Monomial::new(i, d - i, 0);
            if i < ax && d - i < ay && !lms.iter().any(|l| l.divides(&m)) {
                standard.push(m);
            }
        }
    }
    QuotientInfo { is_zero_dimensional: true, dimension: Some(standard.len() as u64), standard_monomials: standard }
}

/// `1 ∈ I`, i.e. the generators have no common complex zero.
pub fn contains_one(ideal: &IdealBasis, cfg: &GroebnerConfig) -> Result<bool, IdealError> {
    if ideal.generators.iter().any(|g| g.is_constant()) {
        return Ok(true);
    }
    let lms = leading_monomials(ideal, cfg)?;
    Ok(lms == [Monomial::ONE])
}

/// `1 ∈ I + (h)`. When `I` is zero-dimensional this is decided in the
/// finite-dimensional algebra `Q[x, y]/I`: `h` generates the unit ideal
/// there iff multiplication by `h` is invertible, i.e. iff `h` vanishes at no
/// point of `V(I)`. Otherwise the enlarged ideal goes through Buchberger.
pub fn contains_one_with(ideal: &IdealBasis, h: &Poly, cfg: &GroebnerConfig) -> Result<bool, IdealError> {
    let h = h.with_vars(XY).expect("ideal generators live in Q[x, y]");
    match cfg.field {
        FieldMode::Rationals => {
            let gens = ideal.generators.iter().map(rational_terms).collect();
            match unit_after_adjoining(gens, rational_terms(&h), cfg)? {
                Adjoined::Decided(b) => Ok(b),
                Adjoined::Positive => contains_one(&with_extra(ideal, h), cfg),
                // a nonzero determinant modulo p proves a nonzero determinant
                Adjoined::Matrix(rows) => Ok(modular_rank_certificate(&rows) || full_rank(rows)),
            }
        }
        FieldMode::Prime(p) => {
            let gens = ideal.generators.iter().map(|g| modular_terms(g, p)).collect::<Result<Vec<_>, _>>()?;
            match unit_after_adjoining(gens, modular_terms(&h, p)?, cfg)? {
                Adjoined::Decided(b) => Ok(b),
                Adjoined::Positive => contains_one(&with_extra(ideal, h), cfg),
                Adjoined::Matrix(rows) => Ok(full_rank(rows)),
            }
        }
    }
}

fn with_extra(ideal: &IdealBasis, h: Poly) -> IdealBasis {
    let mut all = ideal.clone();
    all.generators.push(h);
    all
}

enum Adjoined<F> {
    Decided(bool),
    /// `I` is positive-dimensional.
    Positive,
    /// Multiplication by `h` on the standard monomials of `I`.
    Matrix(Vec<Vec<F>>),
}

/// True when the matrix has p-integral entries and full rank modulo the
/// default prime.
fn modular_rank_certificate(rows: &[Vec<Rat>]) -> bool {
    let p = crate::polyring::DEFAULT_PRIME;
    let reduced: Option<Vec<Vec<Fp>>> =
        rows.iter().map(|r| r.iter().map(|c| Fp::from_rat(c, p)).collect()).collect();
    reduced.is_some_and(full_rank)
}

fn unit_after_adjoining<F: Field>(
    gens: Vec<Vec<(Monomial, F)>>,
    h_terms: Vec<(Monomial, F)>,
    cfg: &GroebnerConfig,
) -> Result<Adjoined<F>, IdealError> {
    let gb = buchberger(gens, cfg.budget)?;
    let lms: Vec<Monomial> = gb.iter().map(|t| t[0].0).collect();
    if lms == [Monomial::ONE] {
        return Ok(Adjoined::Decided(true));
    }
    let info = quotient_from_leading(&lms);
    if !info.is_zero_dimensional {
        return Ok(Adjoined::Positive);
    }
    let works: Vec<Work<F>> = gb.into_iter().map(|terms| Work { terms, sugar: 0 }).collect();
    let refs: Vec<&Work<F>> = works.iter().collect();
    if h_terms.is_empty() {
        return Ok(Adjoined::Decided(false));
    }
    let zero = h_terms[0].1.zero_like();
    let h_red = normal_form(to_map(&h_terms), &refs);
    let column: BTreeMap<Monomial, usize> =
        info.standard_monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let n = column.len();
    // standard monomials form an order ideal, so each b ≠ 1 is v·b' with b'
    // earlier in the list and NF(h·b) = NF(v · NF(h·b'))
    let mut reduced: BTreeMap<Monomial, Vec<(Monomial, F)>> = BTreeMap::new();
    let mut rows: Vec<Vec<F>> = Vec::with_capacity(n);
    for b in &info.standard_monomials {
        let nf = if *b == Monomial::ONE {
            h_red.clone()
        } else {
            let (v, prev) = [Var::X, Var::Y]
                .into_iter()
                .find_map(|v| {
                    let step = Monomial::of(v, 1);
                    step.quotient_of(b).and_then(|p| reduced.get(&p).map(|nf| (step, nf)))
                })
                .expect("order ideal");
            let shifted: BTreeMap<Monomial, F> = prev.iter().map(|(m, c)| (m.mul(&v), c.clone())).collect();
            normal_form(shifted, &refs)
        };
        let mut row = vec![zero.clone(); n];
        for (m, c) in &nf {
            row[column[m]] = c.clone();
        }
        rows.push(row);
        reduced.insert(*b, nf);
    }
    Ok(Adjoined::Matrix(rows))
}

/// Gaussian elimination on a square matrix.
fn full_rank<F: Field>(mut rows: Vec<Vec<F>>) -> bool {
    let n = rows.len();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return false;
        };
        rows.swap(col, pivot);
        let inv = rows[col][col].inv();
        for r in col + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].mul(&inv);
            for k in col..n {
                let delta = rows[col][k].mul(&factor);
                rows[r][k] = rows[r][k].sub(&delta);
            }
        }
    }
    true
}
