//! Delta invariants of the discriminant curve at its points at infinity.
//!
//! Each of the `D = d1 + d2 - 2` points where the critical curve meets the
//! line at infinity contributes one branch of the discriminant through the
//! same point at infinity. The branch type is fixed by its characteristic
//! exponents, and the branches meet each other with a fixed multiplicity.

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyring::{rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InfinityError {
    #[error("exponents must be positive")]
    NonPositive,
    #[error("higher exponents must be strictly increasing")]
    NotIncreasing,
    #[error("incomplete exponent sequence: the gcd chain stops at {0}")]
    Incomplete(u64),
    #[error("need d1 > d2 (got d1={d1}, d2={d2})")]
    NeedStrictOrder { d1: u32, d2: u32 },
    #[error("need d1 >= d2 >= 1 (got d1={d1}, d2={d2})")]
    NeedOrder { d1: u32, d2: u32 },
    #[error("internal disagreement for ({d1}, {d2}): {what}")]
    Disagreement { d1: u32, d2: u32, what: String },
}

/// Characteristic data `(a0; a1 < a2 < …)` of a branch
/// `t ↦ (t^a0, Σ λ_i t^a_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentSequence {
    a0: u64,
    higher: Vec<u64>,
}

impl ExponentSequence {
    pub fn new(a0: u64, higher: Vec<u64>) -> Result<Self, InfinityError> {
        if a0 == 0 || higher.contains(&0) {
            return Err(InfinityError::NonPositive);
        }
        if higher.windows(2).any(|w| w[0] >= w[1]) {
            return Err(InfinityError::NotIncreasing);
        }
        let seq = ExponentSequence { a0, higher };
        let last = *seq.gcd_chain().last().expect("nonempty");
        if last != 1 {
            return Err(InfinityError::Incomplete(last));
        }
        Ok(seq)
    }

    pub fn a0(&self) -> u64 {
        self.a0
    }

    pub fn higher(&self) -> &[u64] {
        &self.higher
    }

    /// `D_1 = a0, D_{j+1} = gcd(D_j, a_j)`; one entry more than `higher`.
    pub fn gcd_chain(&self) -> Vec<u64> {
        let mut chain = vec![self.a0];
        for a in &self.higher {
            let next = chain.last().expect("nonempty").gcd(a);
            chain.push(next);
        }
        chain
    }
}

/// `½ Σ_{j≥1} (a_j − 1)(D_j − D_{j+1})`.
pub fn milnor_delta(seq: &ExponentSequence) -> Rat {
    let chain = seq.gcd_chain();
    let twice: u64 = seq
        .higher
        .iter()
        .zip(chain.windows(2))
        .map(|(a, w)| (a - 1) * (w[0] - w[1]))
        .sum();
    let delta = Rat::new(twice.into(), 2.into());
    assert!(delta.is_integer(), "delta of a complete sequence is an integer");
    delta
}

fn gcd32(a: u32, b: u32) -> i64 {
    i64::from(a.gcd(&b))
}

pub fn branch_exponents(d1: u32, d2: u32) -> Result<ExponentSequence, InfinityError> {
    if d1 <= d2 {
        return Err(InfinityError::NeedStrictOrder { d1, d2 });
    }
    let d1 = u64::from(d1);
    ExponentSequence::new(d1 - u64::from(d2), vec![d1, d1 + 1])
}

/// Delta of one branch, from the closed form; both algebraic forms of the
/// closed form and the exponent computation are checked against each other.
pub fn branch_delta(d1: u32, d2: u32) -> Result<Rat, InfinityError> {
    let seq = branch_exponents(d1, d2)?;
    let d = gcd32(d1, d2);
    let (a, b) = (i64::from(d1), i64::from(d2));
    let first = (a - 1) * (a - b - 1) + (d - 1);
    let second = (a - 1) * (a - b - d) + a * (d - 1);
    let disagree = |what: String| InfinityError::Disagreement { d1, d2, what };
    if first != second {
        return Err(disagree(format!("closed forms give {first}/2 and {second}/2")));
    }
    let closed = Rat::new(first.into(), 2.into());
    let from_exponents = milnor_delta(&seq);
    if closed != from_exponents {
        return Err(disagree(format!("closed form {closed}, exponents {from_exponents}")));
    }
    Ok(closed)
}

pub fn pairwise_intersection(d1: u32, d2: u32) -> Result<i64, InfinityError> {
    if d1 <= d2 {
        return Err(InfinityError::NeedStrictOrder { d1, d2 });
    }
    Ok(i64::from(d1) * i64::from(d1 - d2))
}

/// `½ d1 (d1 − d2) D² + ½ (−2 d1 + d2 + d) D`, checked against the sum
/// `D · branch_delta + C(D, 2) · pairwise_intersection`.
pub fn delta_at_infinity(d1: u32, d2: u32) -> Result<i64, InfinityError> {
    Ok(infinity_profile(d1, d2)?.total_delta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InfinityProfile {
    pub branch_count: i64,
    /// Zero when the point at infinity is smooth (`d1 = d2`).
    #[serde(with = "crate::polyring::rat_text")]
    pub branch_delta: Rat,
    pub pairwise_intersection: i64,
    pub total_delta: i64,
    pub smooth_at_infinity: bool,
}

pub fn infinity_profile(d1: u32, d2: u32) -> Result<InfinityProfile, InfinityError> {
    if d2 == 0 || d1 < d2 {
        return Err(InfinityError::NeedOrder { d1, d2 });
    }
    let big_d = i64::from(d1 + d2) - 2;
    if d1 == d2 {
        return Ok(InfinityProfile {
            branch_count: big_d,
            branch_delta: Rat::zero(),
            pairwise_intersection: 0,
            total_delta: 0,
            smooth_at_infinity: true,
        });
    }
    let (a, b, d) = (i64::from(d1), i64::from(d2), gcd32(d1, d2));
    let twice_closed = a * (a - b) * big_d * big_d + (-2 * a + b + d) * big_d;
    let closed = Rat::new(twice_closed.into(), 2.into());
    let branch = branch_delta(d1, d2)?;
    let pairwise = pairwise_intersection(d1, d2)?;
    let structural = &branch * rat(big_d) + rat(big_d * (big_d - 1) / 2 * pairwise);
    if closed != structural || !closed.is_integer() {
        return Err(InfinityError::Disagreement {
            d1,
            d2,
            what: format!("closed form {closed}, branch sum {structural}"),
        });
    }
    let total = closed.to_integer().try_into().expect("small");
    Ok(InfinityProfile {
        branch_count: big_d,
        branch_delta: branch,
        pairwise_intersection: pairwise,
        total_delta: total,
        smooth_at_infinity: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(a0: u64, higher: &[u64]) -> ExponentSequence {
        ExponentSequence::new(a0, higher.to_vec()).unwrap()
    }

    #[test]
    fn milnor_delta_examples() {
        assert_eq!(milnor_delta(&seq(2, &[3])), rat(1));
        assert_eq!(milnor_delta(&seq(2, &[5])), rat(2));
        assert_eq!(milnor_delta(&seq(1, &[2])), rat(0));
        assert_eq!(milnor_delta(&seq(2, &[4, 5])), rat(2));
        // (4; 6, 7): ½[(6−1)(4−2) + (7−1)(2−1)] = 8
        assert_eq!(milnor_delta(&seq(4, &[6, 7])), rat(8));
    }

    #[test]
    fn rejects_bad_sequences() {
        assert_eq!(ExponentSequence::new(2, vec![4]), Err(InfinityError::Incomplete(2)));
        assert_eq!(ExponentSequence::new(2, vec![5, 3]), Err(InfinityError::NotIncreasing));
        assert_eq!(ExponentSequence::new(0, vec![1]), Err(InfinityError::NonPositive));
    }

    #[test]
    fn branch_data() {
        assert_eq!(branch_exponents(3, 2).unwrap(), seq(1, &[3, 4]));
        assert_eq!(branch_exponents(4, 2).unwrap(), seq(2, &[4, 5]));
        assert_eq!(branch_exponents(5, 3).unwrap(), seq(2, &[5, 6]));
        assert!(branch_exponents(2, 2).is_err());
        assert_eq!(branch_delta(3, 2).unwrap(), rat(0));
        assert_eq!(branch_delta(4, 2).unwrap(), rat(2));
        assert_eq!(branch_delta(5, 3).unwrap(), rat(2));
        assert_eq!(pairwise_intersection(3, 2), Ok(3));
        assert_eq!(pairwise_intersection(4, 2), Ok(8));
        assert_eq!(pairwise_intersection(2, 1), Ok(2));
    }

    #[test]
    fn total_delta_examples() {
        assert_eq!(delta_at_infinity(3, 3), Ok(0));
        assert_eq!(delta_at_infinity(3, 2), Ok(9));
        assert_eq!(delta_at_infinity(4, 2), Ok(56));
        assert_eq!(delta_at_infinity(1, 1), Ok(0));
        assert!(delta_at_infinity(2, 3).is_err());
        let p = infinity_profile(3, 3).unwrap();
        assert!(p.smooth_at_infinity);
        assert_eq!(p.branch_count, 4);
    }

    #[test]
    fn both_paths_agree_on_a_large_range() {
        for d1 in 1..=12 {
            for d2 in 1..=d1 {
                infinity_profile(d1, d2).unwrap();
            }
        }
    }
}
