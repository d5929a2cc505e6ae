//! Exact polynomial arithmetic over the rationals.

mod elim;
mod field;
mod parse;
mod poly;

pub use elim::{forms_coprime, gcd_poly, is_squarefree_in, prem, resultant, squarefree};
pub use field::{Field, FieldMode, Fp, DEFAULT_PRIME};
pub use parse::{parse_poly, parse_poly_in};
pub(crate) use parse::parse_poly_at;
pub use poly::{ArithOp, BinaryForm, Monomial, Poly, Var, XY, XYZ};

use thiserror::Error;

/// Arbitrary-precision rational; always stored in lowest terms with a
/// positive denominator.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<Var>, right: Vec<Var> },
    #[error("variable {0} is not declared")]
    UnknownVariable(Var),
    #[error("variable {0} already occurs in the polynomial")]
    VariableInUse(Var),
    #[error("target degree {target} is below the degree {degree}")]
    DegreeTooSmall { target: u32, degree: u32 },
    #[error("zero polynomial not allowed here")]
    ZeroInput,
    #[error("both inputs have degree 0 in {0}")]
    DegreeZeroInVariable(Var),
    #[error("not homogeneous of degree {0}")]
    NotHomogeneous(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Small-integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Serde adapter writing a rational as its canonical text (`"3/2"`, `"-4"`).
pub mod rat_text {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::Rat;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(|_| D::Error::custom(format!("bad rational '{text}'")))
    }
}
