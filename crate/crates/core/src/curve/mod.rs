//! Elliptic curves over Q: models, local data at a prime, point counts.

use serde::{Deserialize, Serialize};

/// Reduction type of a curve at a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionType {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl ReductionType {
    pub fn is_good(self) -> bool {
        self == ReductionType::Good
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(
            self,
            ReductionType::SplitMultiplicative | ReductionType::NonsplitMultiplicative
        )
    }
}

mod count;
mod model;
mod tate;

pub use count::{FpPoint, ReducedCurve};
pub use model::CurveModel;
pub use tate::{tate, Kodaira, TateResult};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::{is_prime, prime_divisors, val_int};
use crate::error::{Error, Result};

/// Largest prime at which points are counted by enumeration.
pub const POINT_COUNT_CUTOFF: u64 = 1_000_000;

/// Arithmetic invariants that cannot be computed from the equation here and
/// are supplied with the curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticInputs {
    pub rank: u32,
    /// `v_p(#Sha(E/Q)[p])`.
    pub sha_p_valuation: u32,
    /// `v_p(R_p(E/Q))`.
    pub regulator_p_valuation: i64,
    /// `v_p(#E(Q)[p])`; only needed when the reduction bound cannot rule out
    /// rational p-torsion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion_p_valuation: Option<u32>,
    pub provenance: String,
}

impl ArithmeticInputs {
    pub fn validate(&self) -> Result<()> {
        if self.provenance.trim().is_empty() {
            return Err(Error::MissingInput("provenance for the arithmetic inputs".into()));
        }
        Ok(())
    }
}

/// Local data of a curve at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalData {
    pub prime: u64,
    pub reduction: ReductionType,
    pub kodaira: Kodaira,
    pub tamagawa: u32,
    pub conductor_exponent: u32,
    pub a_l: i64,
    /// `#E~(F_l)` at good primes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_count: Option<u64>,
}

fn check_prime_arg(l: u64) -> Result<()> {
    if !is_prime(l) {
        return Err(Error::InconsistentInput(format!("{l} is not prime")));
    }
    Ok(())
}

/// A model minimal at `l`; the input itself when it already is.
pub fn minimal_model_at(e: &CurveModel, l: u64) -> CurveModel {
    tate(e, l).minimal
}

/// A model minimal at every prime.
pub fn global_minimal_model(e: &CurveModel) -> Result<CurveModel> {
    let mut m = e.clone();
    for l in e.discriminant_primes()? {
        m = minimal_model_at(&m, l);
    }
    Ok(m)
}

/// Primes of bad reduction, ascending.
pub fn bad_primes(e: &CurveModel) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for l in e.discriminant_primes()? {
        if !tate(e, l).reduction.is_good() {
            out.push(l);
        }
    }
    Ok(out)
}

pub fn conductor(e: &CurveModel) -> Result<BigInt> {
    let mut n = BigInt::from(1);
    for l in e.discriminant_primes()? {
        n *= BigInt::from(l).pow(tate(e, l).conductor_exponent);
    }
    Ok(n)
}

/// `τ(E) = ∏ c_l`.
pub fn tamagawa_product(e: &CurveModel) -> Result<u64> {
    let mut t = 1u64;
    for l in e.discriminant_primes()? {
        t *= tate(e, l).tamagawa as u64;
    }
    Ok(t)
}

fn has_good_reduction(e: &CurveModel, l: u64) -> bool {
    val_int(e.discriminant(), l) == Some(0) || tate(e, l).reduction.is_good()
}

/// `(#E~(F_l), a_l)` at a prime of good reduction.
pub fn count_points(e: &CurveModel, l: u64) -> Result<(u64, i64)> {
    check_prime_arg(l)?;
    if l > POINT_COUNT_CUTOFF {
        return Err(Error::CutoffExceeded {
            prime: l,
            cutoff: POINT_COUNT_CUTOFF,
        });
    }
    let model = if val_int(e.discriminant(), l) == Some(0) {
        e.clone()
    } else {
        let t = tate(e, l);
        if !t.reduction.is_good() {
            return Err(Error::BadReduction(l));
        }
        t.minimal
    };
    let n = ReducedCurve::new(model.ainvs(), l).count();
    let a = l as i64 + 1 - n as i64;
    if (a as i128) * (a as i128) > 4 * l as i128 {
        return Err(Error::Invariant(format!("Hasse bound violated at {l}: a_l = {a}")));
    }
    Ok((n, a))
}

/// Tate's algorithm plus `a_l` (point count at good primes).
pub fn local_data(e: &CurveModel, l: u64) -> Result<LocalData> {
    check_prime_arg(l)?;
    let t = tate(e, l);
    let (a_l, point_count) = if t.reduction.is_good() {
        let (n, a) = count_points(&t.minimal, l)?;
        (a, Some(n))
    } else {
        (tate::bad_a_l(t.reduction), None)
    };
    Ok(LocalData {
        prime: l,
        reduction: t.reduction,
        kodaira: t.kodaira,
        tamagawa: t.tamagawa,
        conductor_exponent: t.conductor_exponent,
        a_l,
        point_count,
    })
}

/// Good reduction at `p` with `p ∤ a_p`.
pub fn good_ordinary_at(e: &CurveModel, p: u64) -> bool {
    match count_points(e, p) {
        Ok((_, a)) => a.rem_euclid(p as i64) != 0,
        Err(_) => false,
    }
}

/// Upper bound for `v_p(#E(Q)_tors)`: `v_p` of the gcd of `#E~(F_l)` over the
/// first ten good primes `l ∉ {2, p}`. The bound is exact when it is zero.
pub fn torsion_p_part(e: &CurveModel, p: u64) -> Result<(u32, bool)> {
    let mut g = 0u64;
    let mut used = 0;
    let mut l = 2u64;
    while used < 10 {
        l += 1;
        if !is_prime(l) || l == p || !has_good_reduction(e, l) {
            continue;
        }
        g = g.gcd(&count_points(e, l)?.0);
        used += 1;
    }
    let v = crate::arith::val_i64(g as i64, p).unwrap_or(0);
    Ok((v, v == 0))
}

/// `{ l : v_l(j) < 0 }`.
pub fn j_nonintegral_primes(e: &CurveModel) -> Result<Vec<u64>> {
    prime_divisors(e.j_invariant().denom())
}
