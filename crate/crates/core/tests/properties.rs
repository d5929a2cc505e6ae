use num_traits::Zero;
use proptest::prelude::*;

use polymap_census::atinfinity::{delta_at_infinity, milnor_delta, ExponentSequence};
use polymap_census::census::{
    cusp_count_formula, discriminant_degree, generalized_cusp_index, node_count_formula, serre_residual, TChoice,
};
use polymap_census::genericity::check_row;
use polymap_census::ideals::{quotient_dimension, GroebnerConfig, IdealBasis};
use polymap_census::jets::{jet_triple, PlaneMap};
use polymap_census::localint::{intersection_number, Multiplicity, RatPoint};
use polymap_census::polyring::{gcd_poly, parse_poly, resultant, FieldMode, Poly, Var, DEFAULT_PRIME, XY};
use polymap_census::sampling::{random_map, Sampler};

fn poly(max_deg: u32, bound: i64) -> impl Strategy<Value = Poly> {
    let n = ((max_deg + 1) * (max_deg + 2) / 2) as usize;
    prop::collection::vec(-bound..=bound, n).prop_map(move |coeffs| {
        let exps = polymap_census::sampling::dense_exponents(max_deg);
        let terms: Vec<(i64, [u32; 3])> = coeffs.into_iter().zip(exps).collect();
        Poly::from_int_terms(XY, &terms)
    })
}

/// Products of lines through the origin with small integer slopes.
fn lines_through_origin(max: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-4i64..=4, -4i64..=4).prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0), 1..=max)
        .prop_map(|ls| {
            ls.into_iter()
                .map(|(a, b)| Poly::from_int_terms(XY, &[(a, [1, 0, 0]), (b, [0, 1, 0])]))
                .fold(Poly::one(XY), |acc, l| &acc * &l)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(3, 5), b in poly(3, 5), c in poly(2, 5)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn degree_of_product(a in poly(3, 5), b in poly(3, 5)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assert_eq!((&a * &b).degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
    }

    #[test]
    fn homogenize_round_trip(a in poly(4, 9), extra in 0u32..3) {
        let target = a.degree().unwrap_or(0) + extra;
        let h = a.homogenize(target, Var::Z).unwrap();
        prop_assert!(h.is_homogeneous());
        let back = h.substitute(Var::Z, &Poly::one(&[Var::X, Var::Y, Var::Z])).with_vars(XY).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(a in poly(2, 4), b in poly(2, 4), h in poly(1, 4), share in any::<bool>()) {
        let (p, q) = if share { (&a * &h, &b * &h) } else { (a.clone(), b.clone()) };
        let dx = |f: &Poly| f.degree_in(Var::X).unwrap_or(0);
        prop_assume!(dx(&p) > 0 && dx(&q) > 0);
        let r = resultant(&p, &q, Var::X).unwrap();
        let g = gcd_poly(&p, &q);
        prop_assert_eq!(r.is_zero(), dx(&g) > 0);
    }

    #[test]
    fn gcd_divides_both(a in poly(2, 4), b in poly(2, 4), h in poly(2, 4)) {
        prop_assume!(!h.is_zero() && !a.is_zero() && !b.is_zero());
        let (p, q) = (&a * &h, &b * &h);
        let g = gcd_poly(&p, &q);
        prop_assert!(p.div_exact(&g).is_some() && q.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&h.primitive()).is_some() || h.is_constant());
    }

    #[test]
    fn intersection_symmetric_and_additive(p in lines_through_origin(3), q in lines_through_origin(2), r in lines_through_origin(2), hp in poly(3, 3), hq in poly(3, 3)) {
        // perturb away from pure products while keeping the lowest forms
        let hi = |f: &Poly, h: &Poly| {
            let shift = Poly::var(XY, Var::X).pow(f.degree().unwrap());
            &(f.clone()) + &(&(&h.clone() * &shift) * &Poly::var(XY, Var::Y))
        };
        let (p, q, r) = (hi(&p, &hp), hi(&q, &hq), r);
        let o = RatPoint::origin();
        prop_assert_eq!(intersection_number(&p, &q, &o), intersection_number(&q, &p, &o));
        let sum = match (intersection_number(&p, &q, &o), intersection_number(&p, &r, &o)) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::Infinite,
        };
        prop_assert_eq!(intersection_number(&p, &(&q * &r), &o), sum);
    }

    #[test]
    fn intersection_lower_bound(p in lines_through_origin(3), q in lines_through_origin(3)) {
        // I(P, Q) >= ord P · ord Q, with equality for distinct tangents
        if let Multiplicity::Finite(n) = intersection_number(&p, &q, &RatPoint::origin()) {
            prop_assert_eq!(n, u64::from(p.degree().unwrap() * q.degree().unwrap()));
        } else {
            prop_assert!(!gcd_poly(&p, &q).is_constant());
        }
    }

    #[test]
    fn milnor_delta_is_a_nonnegative_integer(a0 in 1u64..16, steps in prop::collection::vec(1u64..6, 0..4)) {
        let mut higher = Vec::new();
        let mut last = a0;
        for s in steps {
            last += s;
            higher.push(last);
        }
        higher.push(last + 1);
        let seq = ExponentSequence::new(a0, higher).unwrap();
        let d = milnor_delta(&seq);
        prop_assert!(d.is_integer() && d >= num_rational::BigRational::zero());
    }

    #[test]
    fn formulas_symmetric(d1 in 1u32..40, d2 in 1u32..40) {
        prop_assert_eq!(cusp_count_formula(d1, d2), cusp_count_formula(d2, d1));
        prop_assert_eq!(node_count_formula(d1, d2), node_count_formula(d2, d1));
        prop_assert_eq!(discriminant_degree(d1, d2), discriminant_degree(d2, d1));
        prop_assert_eq!(serre_residual(d1, d2), 0);
        prop_assert!(delta_at_infinity(d1.max(d2), d1.min(d2)).is_ok());
    }

    #[test]
    fn uniform_draws_stay_in_range(seed in any::<u64>(), bound in 1u64..1000) {
        let mut s = Sampler::new(seed);
        for _ in 0..50 {
            let v = s.uniform(bound);
            prop_assert!(v.unsigned_abs() <= bound);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn row_check_ignores_source_translations(seed in 0u64..1000, tx in -3i64..=3, ty in -3i64..=3) {
        let m = random_map(2, 2, 10, seed).unwrap();
        let xs = &Poly::x() + &Poly::from_int(XY, tx);
        let ys = &Poly::y() + &Poly::from_int(XY, ty);
        let moved = m.precompose_affine(&xs, &ys);
        prop_assert_eq!(check_row(&m, seed).outcome.verdict, check_row(&moved, seed).outcome.verdict);
    }

    #[test]
    fn prime_and_rational_dimensions_agree(seed in 0u64..1000) {
        let m = random_map(2, 2, 10, seed).unwrap();
        let jt = jet_triple(&m);
        let ideal = IdealBasis::new([jt.j, jt.j11]);
        let q = quotient_dimension(&ideal, &GroebnerConfig::default()).unwrap();
        let p = GroebnerConfig { field: FieldMode::Prime(DEFAULT_PRIME), ..GroebnerConfig::default() };
        prop_assert_eq!(quotient_dimension(&ideal, &p).unwrap().dimension, q.dimension);
    }

    #[test]
    fn cusp_index_ignores_source_translations(tx in -3i64..=3, ty in -3i64..=3, k in 3u32..6) {
        let m = PlaneMap::with_natural_caps(parse_poly("x").unwrap(), parse_poly(&format!("y^{k}+x*y")).unwrap()).unwrap();
        let xs = &Poly::x() - &Poly::from_int(XY, tx);
        let ys = &Poly::y() - &Poly::from_int(XY, ty);
        let moved = m.precompose_affine(&xs, &ys);
        let a = RatPoint::from_ints(tx, ty);
        let base = generalized_cusp_index(&m, &RatPoint::origin(), &TChoice::Auto, 0).unwrap().index;
        prop_assert_eq!(base, i64::from(k) - 2);
        prop_assert_eq!(generalized_cusp_index(&moved, &a, &TChoice::Auto, 0).unwrap().index, base);
    }
}
