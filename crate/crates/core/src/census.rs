//! Closed-form invariants of a generic plane map of bidegree `(d1, d2)`, the
//! Gröbner-based cusp count of a given map, and local cusp indices.

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atinfinity::{infinity_profile, InfinityProfile};
use crate::genericity::{
    check_j_infinity, check_j_j11_transversal, genericity_report, GenericityReport, Verdict, EFFECTIVE_LABEL,
};
use crate::ideals::{quotient_dimension, GroebnerConfig, IdealBasis, IdealError};
use crate::jets::{jet_triple, MapText, PlaneMap};
use crate::localint::{intersection_number, Multiplicity, RatPoint};
use crate::polyring::{gcd_poly, rat, FieldMode, Poly, Rat, Var};
use crate::sampling::{Sampler, Stream};

fn ordered(d1: u32, d2: u32) -> (i64, i64) {
    (i64::from(d1.max(d2)), i64::from(d1.min(d2)))
}

pub fn cusp_count_formula(d1: u32, d2: u32) -> i64 {
    let (a, b) = (i64::from(d1), i64::from(d2));
    a * a + b * b + 3 * a * b - 6 * a - 6 * b + 7
}

/// `½[(d1 d2 − 4)(D² − 2) − (d − 5) D − 6]` with `D = d1 + d2 − 2` and
/// `d = gcd(d1, d2)`.
pub fn node_count_formula(d1: u32, d2: u32) -> i64 {
    let (a, b) = (i64::from(d1), i64::from(d2));
    let big_d = a + b - 2;
    let d = i64::from(d1.gcd(&d2));
    let twice = (a * b - 4) * (big_d * big_d - 2) - (d - 5) * big_d - 6;
    assert!(twice % 2 == 0, "node count for ({d1}, {d2}) is not an integer");
    twice / 2
}

/// Shape of the critical curve of a generic map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalTopology {
    /// `d1 = d2 = 1`: the critical curve is empty.
    Empty,
    /// A sphere with `genus` handles and `punctures` points removed.
    Surface { genus: i64, punctures: i64 },
}

impl CriticalTopology {
    pub fn genus(self) -> i64 {
        match self {
            CriticalTopology::Empty => 0,
            CriticalTopology::Surface { genus, .. } => genus,
        }
    }

    pub fn punctures(self) -> i64 {
        match self {
            CriticalTopology::Empty => 0,
            CriticalTopology::Surface { punctures, .. } => punctures,
        }
    }
}

pub fn critical_topology(d1: u32, d2: u32) -> CriticalTopology {
    let big_d = i64::from(d1 + d2) - 2;
    if big_d <= 0 {
        return CriticalTopology::Empty;
    }
    CriticalTopology::Surface { genus: (big_d - 1) * (big_d - 2) / 2, punctures: big_d }
}

pub fn discriminant_degree(d1: u32, d2: u32) -> i64 {
    let (a, b) = ordered(d1, d2);
    a * (a + b - 2)
}

/// Arithmetic genus of a degree `d1 D` curve minus the geometric genus of
/// the critical curve, the cusps, the nodes and the delta at infinity.
/// Zero for every bidegree.
pub fn serre_residual(d1: u32, d2: u32) -> i64 {
    let (a, b) = ordered(d1, d2);
    let big_d = a + b - 2;
    let n = a * big_d;
    let delta = infinity_profile(a as u32, b as u32).expect("ordered degrees").total_delta;
    (n - 1) * (n - 2) / 2
        - (big_d - 1) * (big_d - 2) / 2
        - cusp_count_formula(d1, d2)
        - node_count_formula(d1, d2)
        - delta
}

/// Outcome of `dim Q[x,y]/(J, J11) − dim Q[x,y]/(f_x, f_y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComputedCusps {
    #[serde(with = "count_or_na")]
    pub cusps: Option<i64>,
    pub dim_grad: Option<u64>,
    #[serde(rename = "dimJJ11")]
    pub dim_jj11: Option<u64>,
    /// The jet-curve genericity conditions behind the count hold.
    pub certified: bool,
    /// Why `cusps` is missing, when it is.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnosis: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub budget_exceeded: bool,
}

/// `Option<i64>` as a number or the string `"n/a"`.
mod count_or_na {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Count(i64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &Option<i64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(n) => Repr::Count(*n).serialize(s),
            None => Repr::Text("n/a".into()).serialize(s),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<i64>, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Count(n) => Ok(Some(n)),
            Repr::Text(t) if t == "n/a" => Ok(None),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("expected a count or \"n/a\", got \"{t}\""))),
        }
    }
}

/// The cusp count computed on `map` as given (no coordinate swap). The
/// certification verdicts are computed here; use [`full_census`] to share
/// them with a full genericity report.
pub fn computed_cusp_count(map: &PlaneMap, cfg: &GroebnerConfig) -> ComputedCusps {
    let (j11_inf, _) = check_j_infinity(map);
    let transversal = check_j_j11_transversal(map, cfg);
    cusp_count_with(map, cfg, j11_inf.verdict == Verdict::Pass && transversal.verdict == Verdict::Pass)
}

fn cusp_count_with(map: &PlaneMap, cfg: &GroebnerConfig, certified: bool) -> ComputedCusps {
    let mut out = ComputedCusps {
        cusps: None,
        dim_grad: None,
        dim_jj11: None,
        certified,
        diagnosis: None,
        budget_exceeded: false,
    };
    let jt = jet_triple(map);
    if jt.j.is_zero() {
        out.diagnosis = Some("the Jacobian determinant vanishes identically".into());
        return out;
    }
    let common = gcd_poly(&jt.j, &jt.j11);
    if !common.is_constant() {
        out.diagnosis = Some(format!("J and J11 share the component {}", common.primitive()));
        return out;
    }
    let dims = |gens: Vec<Poly>| quotient_dimension(&IdealBasis::new(gens), cfg).map(|q| q.dimension);
    let budget = |out: &mut ComputedCusps, e: IdealError| {
        out.budget_exceeded = matches!(e, IdealError::Budget(_));
        out.diagnosis = Some(e.to_string());
    };
    match dims(vec![jt.j, jt.j11]) {
        Ok(d) => out.dim_jj11 = d,
        Err(e) => {
            budget(&mut out, e);
            return out;
        }
    }
    match dims(vec![map.f().d(Var::X), map.f().d(Var::Y)]) {
        Ok(d) => out.dim_grad = d,
        Err(e) => {
            budget(&mut out, e);
            return out;
        }
    }
    match (out.dim_jj11, out.dim_grad) {
        (Some(a), Some(b)) => out.cusps = Some(a as i64 - b as i64),
        (None, _) => out.diagnosis = Some("(J, J11) is not zero-dimensional".into()),
        (_, None) => out.diagnosis = Some("(f_x, f_y) is not zero-dimensional".into()),
    }
    out
}

/// `dim Q[x,y]/(J, J11, J12)`: the total cusp index when every common zero
/// is rational or counted globally.
pub fn jet_ideal_dimension(map: &PlaneMap, cfg: &GroebnerConfig) -> Result<Option<u64>, IdealError> {
    let jt = jet_triple(map);
    Ok(quotient_dimension(&IdealBasis::new([jt.j, jt.j11, jt.j12]), cfg)?.dimension)
}

pub type Matrix2 = [[Rat; 2]; 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TChoice {
    /// Two independent seeded draws that must agree.
    Auto,
    Given(Matrix2),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("{0} is not on the critical curve")]
    NotCritical(RatPoint),
    #[error("not a generalized cusp: the critical curve is not reduced at {0}")]
    NonReduced(RatPoint),
    #[error("the target matrix is singular")]
    SingularT,
    #[error("infinite local intersection of {which} at {at}")]
    Infinite { which: &'static str, at: RatPoint },
    #[error("T not general enough / genuine ambiguity: two target matrices give {first} and {second}")]
    Ambiguous { first: i64, second: i64 },
}

/// A local cusp index and how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspIndex {
    pub index: i64,
    pub jj11: u64,
    pub grad: u64,
    pub matrices: Vec<Matrix2>,
}

fn det2(t: &Matrix2) -> Rat {
    &t[0][0] * &t[1][1] - &t[0][1] * &t[1][0]
}

fn random_matrix(s: &mut Sampler) -> Matrix2 {
    loop {
        let mut e = || rat(s.uniform(9));
        let t = [[e(), e()], [e(), e()]];
        if !det2(&t).is_zero() {
            return t;
        }
    }
}

/// `J` is reduced near `a`: globally squarefree, or else meeting a nonzero
/// polar curve `α J_x + β J_y` with finite multiplicity at `a`.
fn reduced_at(j: &Poly, a: &RatPoint, seed: u64) -> bool {
    let (jx, jy) = (j.d(Var::X), j.d(Var::Y));
    if gcd_poly(j, &gcd_poly(&jx, &jy)).is_constant() {
        return true;
    }
    let mut s = Sampler::stream(seed, Stream::Polar);
    let (alpha, beta) = (rat(s.uniform_nonzero(9)), rat(s.uniform_nonzero(9)));
    let polar = &jx.scale(&alpha) + &jy.scale(&beta);
    intersection_number(j, &polar, a) != Multiplicity::Infinite
}

fn index_for(map: &PlaneMap, a: &RatPoint, t: &Matrix2) -> Result<CuspIndex, IndexError> {
    if det2(t).is_zero() {
        return Err(IndexError::SingularT);
    }
    let moved = map.postcompose_linear(t);
    let jt = jet_triple(&moved);
    let finite = |m: Multiplicity, which| m.finite().ok_or_else(|| IndexError::Infinite { which, at: a.clone() });
    let jj11 = finite(intersection_number(&jt.j, &jt.j11, a), "J and J11")?;
    let grad = finite(intersection_number(&moved.f().d(Var::X), &moved.f().d(Var::Y), a), "f_x and f_y")?;
    Ok(CuspIndex { index: jj11 as i64 - grad as i64, jj11, grad, matrices: vec![t.clone()] })
}

/// Local index `I_a(J', J11') − I_a(f'_x, f'_y)` of `F' = T ∘ F` at `a`.
pub fn generalized_cusp_index(map: &PlaneMap, a: &RatPoint, t: &TChoice, seed: u64) -> Result<CuspIndex, IndexError> {
    let j = jet_triple(map).j;
    if !j.eval_xy(&a.x, &a.y).is_zero() {
        return Err(IndexError::NotCritical(a.clone()));
    }
    if j.is_zero() || !reduced_at(&j, a, seed) {
        return Err(IndexError::NonReduced(a.clone()));
    }
    match t {
        TChoice::Given(t) => index_for(map, a, t),
        TChoice::Auto => {
            let mut s = Sampler::stream(seed, Stream::TargetMatrix);
            let (t1, t2) = (random_matrix(&mut s), random_matrix(&mut s));
            let first = index_for(map, a, &t1)?;
            let second = index_for(map, a, &t2)?;
            if first.index != second.index {
                return Err(IndexError::Ambiguous { first: first.index, second: second.index });
            }
            Ok(CuspIndex { matrices: vec![t1, t2], ..first })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspSum {
    pub sum: i64,
    pub bound: i64,
    pub ok: bool,
}

/// Sum of the indices at `points` against the cusp count for the map's caps.
pub fn cusp_sum_bound_check(map: &PlaneMap, points: &[RatPoint], seed: u64) -> Result<CuspSum, IndexError> {
    let mut sum = 0;
    for a in points {
        sum += generalized_cusp_index(map, a, &TChoice::Auto, seed)?.index;
    }
    let bound = cusp_count_formula(map.d1(), map.d2());
    Ok(CuspSum { sum, bound, ok: sum <= bound })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Formulas {
    #[serde(rename = "D")]
    pub big_d: i64,
    pub gcd_deg: i64,
    pub cusps: i64,
    pub nodes: i64,
    pub genus: i64,
    pub punctures: i64,
    pub disc_degree: i64,
    pub delta_infinity: i64,
}

impl Formulas {
    pub fn of(d1: u32, d2: u32) -> Self {
        let (a, b) = ordered(d1, d2);
        let topology = critical_topology(d1, d2);
        Formulas {
            big_d: a + b - 2,
            gcd_deg: i64::from(d1.gcd(&d2)),
            cusps: cusp_count_formula(d1, d2),
            nodes: node_count_formula(d1, d2),
            genus: topology.genus(),
            punctures: topology.punctures(),
            disc_degree: discriminant_degree(d1, d2),
            delta_infinity: infinity_profile(a as u32, b as u32).expect("ordered degrees").total_delta,
        }
    }
}

pub const FLAG_ASSUMED_PROPER: &str = "assumed proper";
pub const FLAG_SWAPPED: &str = "swapped target coordinates (d1 < d2)";
pub const FLAG_NOT_CERTIFIED: &str = "non-certified cusp count";
pub const FLAG_PRIME_FIELD: &str = "prime-field computation";
pub const FLAG_DEGENERATE: &str = "degenerate: empty critical curve";
pub const FLAG_BUDGET: &str = "budget exceeded";
pub const FLAG_MISMATCH: &str = "computed cusps differ from formula";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CensusReport {
    pub d1: u32,
    pub d2: u32,
    pub map: MapText,
    pub formulas: Formulas,
    pub computed: ComputedCusps,
    pub genericity: GenericityReport,
    pub infinity: InfinityProfile,
    pub serre_residual: i64,
    pub seed: u64,
    pub flags: Vec<String>,
}

impl CensusReport {
    pub fn hit_budget(&self) -> bool {
        self.computed.budget_exceeded || self.genericity.any_budget()
    }

    /// Generic by every test, with the computed count equal to the formula.
    pub fn confirms_formula(&self) -> bool {
        self.genericity.all_pass() && self.computed.cusps == Some(self.formulas.cusps) && self.serre_residual == 0
    }
}

/// Formulas use the degrees ordered so that `d1 ≥ d2`; the computed count
/// and the genericity checks run on the map as given.
pub fn full_census(map: &PlaneMap, seed: u64, cfg: &GroebnerConfig) -> CensusReport {
    let (d1, d2) = (map.d1(), map.d2());
    let (a, b) = ordered(d1, d2);
    let mut flags = vec![FLAG_ASSUMED_PROPER.to_string()];
    if d1 < d2 {
        flags.push(FLAG_SWAPPED.into());
    }
    if a + b == 2 {
        flags.push(FLAG_DEGENERATE.into());
    }
    if let FieldMode::Prime(p) = cfg.field {
        flags.push(format!("{FLAG_PRIME_FIELD} (p = {p})"));
    }
    let genericity = genericity_report(map, seed, cfg);
    let certified =
        genericity.j_j11_disjoint_infinity == Verdict::Pass && genericity.j_j11_transversal == Verdict::Pass;
    let computed = cusp_count_with(map, cfg, certified);
    let formulas = Formulas::of(d1, d2);
    if genericity.all_pass() {
        flags.push(EFFECTIVE_LABEL.into());
    } else {
        flags.push(format!("not {EFFECTIVE_LABEL}: {}", genericity.failing().join(", ")));
    }
    if !computed.certified {
        flags.push(FLAG_NOT_CERTIFIED.into());
    }
    if computed.budget_exceeded || genericity.any_budget() {
        flags.push(FLAG_BUDGET.into());
    }
    if computed.cusps.is_some_and(|c| c != formulas.cusps) {
        flags.push(FLAG_MISMATCH.into());
    }
    let serre_residual = serre_residual(d1, d2);
    assert_eq!(serre_residual, 0, "Serre residual for ({d1}, {d2})");
    CensusReport {
        d1,
        d2,
        map: map.to_text(),
        formulas,
        computed,
        genericity,
        infinity: infinity_profile(a as u32, b as u32).expect("ordered degrees"),
        serre_residual,
        seed,
        flags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;
    use crate::sampling::random_map;

    fn map(f: &str, g: &str) -> PlaneMap {
        PlaneMap::with_natural_caps(parse_poly(f).unwrap(), parse_poly(g).unwrap()).unwrap()
    }

    #[test]
    fn formula_values() {
        assert_eq!(cusp_count_formula(1, 1), 0);
        assert_eq!(cusp_count_formula(2, 2), 3);
        assert_eq!(cusp_count_formula(3, 2), 8);
        assert_eq!(cusp_count_formula(1, 3), 2);
        assert_eq!(cusp_count_formula(1, 4), 6);
        assert_eq!(node_count_formula(2, 2), 0);
        assert_eq!(node_count_formula(3, 2), 10);
        assert_eq!(node_count_formula(3, 3), 36);
        assert_eq!(node_count_formula(4, 2), 31);
        assert_eq!(critical_topology(3, 3), CriticalTopology::Surface { genus: 3, punctures: 4 });
        assert_eq!(critical_topology(2, 2), CriticalTopology::Surface { genus: 0, punctures: 2 });
        assert_eq!(critical_topology(2, 1), CriticalTopology::Surface { genus: 0, punctures: 1 });
        assert_eq!(critical_topology(1, 1), CriticalTopology::Empty);
        assert_eq!(discriminant_degree(3, 2), 9);
        assert_eq!(discriminant_degree(2, 3), 9);
        assert_eq!(discriminant_degree(2, 2), 4);
        assert_eq!(discriminant_degree(1, 1), 0);
    }

    #[test]
    fn serre_residual_vanishes() {
        for d1 in 1..=20 {
            for d2 in 1..=20 {
                assert_eq!(serre_residual(d1, d2), 0, "({d1}, {d2})");
            }
        }
    }

    #[test]
    fn computed_count_on_the_cusp() {
        let c = computed_cusp_count(&map("x", "y^3+x*y"), &GroebnerConfig::default());
        assert_eq!((c.cusps, c.dim_jj11, c.dim_grad), (Some(1), Some(1), Some(0)));
    }

    #[test]
    fn computed_count_matches_formula_on_seeded_maps() {
        let cfg = GroebnerConfig::default();
        let c = computed_cusp_count(&random_map(2, 2, 10, 42).unwrap(), &cfg);
        assert_eq!(c.cusps, Some(3));
        assert!(c.certified);
        let c = computed_cusp_count(&random_map(3, 2, 10, 7).unwrap(), &cfg);
        assert_eq!((c.cusps, c.dim_grad), (Some(8), Some(4)));
    }

    #[test]
    fn computed_count_reports_shared_components() {
        let c = computed_cusp_count(&map("x", "y^3"), &GroebnerConfig::default());
        assert_eq!(c.cusps, None);
        assert!(c.diagnosis.unwrap().contains("share"));
    }

    #[test]
    fn cusp_indices() {
        let o = RatPoint::origin();
        let idx = generalized_cusp_index(&map("x", "y^3+x*y"), &o, &TChoice::Auto, 1).unwrap();
        assert_eq!(idx.index, 1);
        assert_eq!(idx.matrices.len(), 2);
        let idx = generalized_cusp_index(&map("x", "y^4+x*y"), &o, &TChoice::Auto, 1).unwrap();
        assert_eq!(idx.index, 2);
        assert_eq!(
            generalized_cusp_index(&map("x", "y^3"), &o, &TChoice::Auto, 1),
            Err(IndexError::NonReduced(o.clone()))
        );
        assert!(matches!(
            generalized_cusp_index(&map("x", "y^3+x*y"), &RatPoint::from_ints(1, 1), &TChoice::Auto, 1),
            Err(IndexError::NotCritical(_))
        ));
    }

    #[test]
    fn index_agrees_with_three_generator_dimension() {
        let cfg = GroebnerConfig::default();
        for (f, g) in [("x", "y^3+x*y"), ("x", "y^4+x*y")] {
            let m = map(f, g);
            let idx = generalized_cusp_index(&m, &RatPoint::origin(), &TChoice::Auto, 3).unwrap();
            assert_eq!(jet_ideal_dimension(&m, &cfg).unwrap(), Some(idx.index as u64));
        }
    }

    #[test]
    fn index_is_translation_invariant() {
        let m = map("x", "y^3+x*y");
        let shifted = m.precompose_affine(&parse_poly("x-2").unwrap(), &parse_poly("y+3").unwrap());
        let a = RatPoint::from_ints(2, -3);
        assert_eq!(generalized_cusp_index(&shifted, &a, &TChoice::Auto, 5).unwrap().index, 1);
    }

    #[test]
    fn sum_bound() {
        let o = RatPoint::origin();
        let s = cusp_sum_bound_check(&map("x", "y^3+x*y"), std::slice::from_ref(&o), 0).unwrap();
        assert_eq!(s, CuspSum { sum: 1, bound: 2, ok: true });
        let s = cusp_sum_bound_check(&map("x", "y^4+x*y"), &[o], 0).unwrap();
        assert_eq!(s, CuspSum { sum: 2, bound: 6, ok: true });
        let s = cusp_sum_bound_check(&map("x", "y^4+x*y"), &[], 0).unwrap();
        assert_eq!(s, CuspSum { sum: 0, bound: 6, ok: true });
    }

    #[test]
    fn census_reports() {
        let cfg = GroebnerConfig::default();
        let id = full_census(&map("x", "y"), 0, &cfg);
        assert_eq!(id.computed.cusps, Some(0));
        assert_eq!((id.formulas.cusps, id.formulas.nodes, id.formulas.genus), (0, 0, 0));
        assert!(id.flags.iter().any(|f| f == FLAG_DEGENERATE));

        let r = full_census(&random_map(3, 2, 10, 7).unwrap(), 7, &cfg);
        assert_eq!(r.formulas.cusps, 8);
        assert_eq!(r.formulas.nodes, 10);
        assert_eq!(r.formulas.delta_infinity, 9);
        assert_eq!(r.formulas.disc_degree, 9);
        assert_eq!(r.computed.cusps, Some(8));
        assert!(r.confirms_formula());

        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<CensusReport>(&json).unwrap(), r);
    }

    #[test]
    fn census_swaps_for_formulas_only() {
        let cfg = GroebnerConfig::default();
        let r = full_census(&random_map(2, 3, 10, 1).unwrap(), 1, &cfg);
        assert!(r.flags.iter().any(|f| f == FLAG_SWAPPED));
        assert_eq!(r.formulas.disc_degree, 9);
        assert_eq!(r.computed.dim_grad, Some(1));
        assert_eq!(r.computed.cusps, Some(8));
    }

    #[test]
    fn not_applicable_round_trips() {
        let r = full_census(&map("x", "y^3"), 0, &GroebnerConfig::default());
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["computed"]["cusps"], "n/a");
        assert_eq!(serde_json::from_value::<CensusReport>(json).unwrap(), r);
    }
}
