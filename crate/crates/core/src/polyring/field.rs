use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::Rat;

/// Largest prime below 2^63.
pub const DEFAULT_PRIME: u64 = 9_223_372_036_854_775_783;

/// Coefficient field used by the Gröbner engine.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; callers never invert zero.
    fn inv(&self) -> Self;
}

impl Field for Rat {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Element of the prime field `Z/pZ`; each element carries its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        Fp { value: value % modulus, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Reduction of a rational; `None` when the denominator vanishes mod p.
    pub fn from_rat(r: &Rat, modulus: u64) -> Option<Self> {
        let m = BigInt::from(modulus);
        let reduce = |n: &BigInt| n.mod_floor(&m).to_u64().expect("below modulus");
        let den = Fp::new(reduce(r.denom()), modulus);
        if den.value == 0 {
            return None;
        }
        Some(Fp::new(reduce(r.numer()), modulus).mul(&den.inv()))
    }

    fn pow(&self, mut e: u64) -> Fp {
        let mut base = *self;
        let mut acc = Fp::new(1, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl Field for Fp {
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn is_one(&self) -> bool {
        self.value == 1
    }
    fn zero_like(&self) -> Self {
        Fp::new(0, self.modulus)
    }
    fn one_like(&self) -> Self {
        Fp::new(1, self.modulus)
    }
    fn add(&self, o: &Self) -> Self {
        let s = (self.value as u128 + o.value as u128) % self.modulus as u128;
        Fp { value: s as u64, modulus: self.modulus }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let s = (self.value as u128 * o.value as u128) % self.modulus as u128;
        Fp { value: s as u64, modulus: self.modulus }
    }
    fn neg(&self) -> Self {
        if self.value == 0 {
            *self
        } else {
            Fp { value: self.modulus - self.value, modulus: self.modulus }
        }
    }
    fn inv(&self) -> Self {
        self.pow(self.modulus - 2)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are exact for
/// all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Where Gröbner computations run. Prime mode is an accelerator only:
/// anything it accepts can be recomputed over the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FieldMode {
    #[default]
    Rationals,
    Prime(u64),
}

impl FieldMode {
    pub fn prime(p: u64) -> Result<Self, String> {
        if p >= 1 << 63 {
            return Err(format!("prime {p} must be below 2^63"));
        }
        if !is_prime_u64(p) {
            return Err(format!("{p} is not prime"));
        }
        Ok(FieldMode::Prime(p))
    }
}

impl FromStr for FieldMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rational" | "rationals" => Ok(FieldMode::Rationals),
            "prime" => Ok(FieldMode::Prime(DEFAULT_PRIME)),
            _ => {
                let p = s
                    .strip_prefix("prime:")
                    .ok_or_else(|| format!("unknown field '{s}' (expected rational or prime:<p>)"))?;
                let p: u64 = p.parse().map_err(|_| format!("bad prime '{p}'"))?;
                FieldMode::prime(p)
            }
        }
    }
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMode::Rationals => write!(f, "rational"),
            FieldMode::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}
