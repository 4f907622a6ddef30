//! Local Euler-factor bookkeeping: the auxiliary prime set, local terms
//! `l + β(l) - a_l`, the imprimitivity factor Φ and the prime sets used by
//! the false-Tate and GL2 corrections.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_divisors, val_i64, val_int};
use crate::curve::{
    bad_primes, conductor, j_nonintegral_primes, local_data, minimal_model_at, CurveModel, ReducedCurve,
};
use crate::error::{Error, Result};
use crate::padic::check_prime;

/// Primes of bad reduction of one or two curves, never containing `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaZero {
    pub primes: Vec<u64>,
    pub sources: Vec<String>,
}

/// Union of the bad primes of `e1` (and `e2`), after checking both are good at `p`.
pub fn sigma_zero(e1: &CurveModel, e2: Option<&CurveModel>, p: u64) -> Result<SigmaZero> {
    check_prime(p)?;
    let mut primes = Vec::new();
    let mut sources = Vec::new();
    for e in std::iter::once(e1).chain(e2) {
        let bad = bad_primes(e)?;
        if bad.contains(&p) {
            return Err(Error::BadAtP {
                label: e.label().to_string(),
                prime: p,
            });
        }
        primes.extend(bad);
        sources.push(e.label().to_string());
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(SigmaZero { primes, sources })
}

/// 1 at primes of good reduction, 0 at bad primes.
pub fn beta(e: &CurveModel, l: u64) -> Result<i64> {
    Ok(i64::from(local_data(e, l)?.reduction.is_good()))
}

/// `t_l = l + β(l) - a_l`, so that `L_l(E, 1)^{-1} = t_l / l`.
pub fn local_term(e: &CurveModel, l: u64) -> Result<i64> {
    let d = local_data(e, l)?;
    let t = l as i64 + i64::from(d.reduction.is_good()) - d.a_l;
    if t <= 0 {
        return Err(Error::Invariant(format!("local term at {l} is {t}, expected positive")));
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTerm {
    pub prime: u64,
    pub beta: i64,
    pub a_l: i64,
    pub term: i64,
    pub term_valuation: u32,
}

/// `Φ_E = ∏_{l ∈ Σ0} |L_l(E,1)|_p`, carried as its exponent `p^{phi_valuation}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerFactorReport {
    pub label: String,
    pub p: u64,
    pub terms: Vec<LocalTerm>,
    pub phi_valuation: u32,
    pub star_satisfied: bool,
}

pub fn phi(e: &CurveModel, s: &SigmaZero, p: u64) -> Result<EulerFactorReport> {
    check_prime(p)?;
    if s.primes.contains(&p) {
        return Err(Error::InconsistentInput(format!("Σ0 contains p = {p}")));
    }
    let mut terms = Vec::with_capacity(s.primes.len());
    for &l in &s.primes {
        let d = local_data(e, l)?;
        let beta = i64::from(d.reduction.is_good());
        let term = local_term(e, l)?;
        let term_valuation = val_i64(term, p).expect("local terms are positive");
        terms.push(LocalTerm {
            prime: l,
            beta,
            a_l: d.a_l,
            term,
            term_valuation,
        });
    }
    let phi_valuation: u32 = terms.iter().map(|t| t.term_valuation).sum();

    // second path: valuation of the exact product of the terms
    let product: BigInt = terms.iter().map(|t| BigInt::from(t.term)).product();
    let direct = val_int(&product, p).unwrap_or(0);
    if direct != phi_valuation {
        return Err(Error::Invariant(format!(
            "Φ valuation {phi_valuation} disagrees with v_p of the term product {direct}"
        )));
    }
    Ok(EulerFactorReport {
        label: e.label().to_string(),
        p,
        terms,
        phi_valuation,
        star_satisfied: phi_valuation == 0,
    })
}

fn small_prime_divisors(m: u64) -> Vec<u64> {
    prime_divisors(&BigInt::from(m)).expect("u64 values factor completely")
}

/// Primes `l | m` of good reduction whose reduction has a point of order `p`.
///
/// Both descriptions are computed: an actual point of order `p` in
/// `E~(F_l)` found with the group law, and `p | l + 1 - a_l`. They must agree.
pub fn false_tate_set(e: &CurveModel, m: u64, p: u64) -> Result<Vec<u64>> {
    check_prime(p)?;
    let n = conductor(e)?;
    let pn = &n * BigInt::from(p);
    if m == 0 || !BigInt::from(m).gcd(&pn).is_one() {
        return Err(Error::NotCoprime {
            m,
            modulus: pn.to_string(),
        });
    }
    let mut out = Vec::new();
    for l in small_prime_divisors(m) {
        debug_assert!(is_prime(l));
        let d = local_data(e, l)?;
        if !d.reduction.is_good() {
            continue;
        }
        let by_count = (l as i64 + 1 - d.a_l) % p as i64 == 0;
        let model = minimal_model_at(e, l);
        let by_point = ReducedCurve::new(model.ainvs(), l).point_of_order(p).is_some();
        if by_count != by_point {
            return Err(Error::Invariant(format!(
                "{} at {l}: p | #E~(F_l) is {by_count} but a point of order {p} {}",
                e.label(),
                if by_point { "exists" } else { "was not found" }
            )));
        }
        if by_point {
            out.push(l);
        }
    }
    Ok(out)
}

/// Checks `p ∤ l - a_l` at every prime where `j` is non-integral; returns
/// whether all pass and the failing primes.
pub fn gl2_hypothesis(e: &CurveModel, p: u64) -> Result<(bool, Vec<u64>)> {
    let mut witnesses = Vec::new();
    for l in j_nonintegral_primes(e)? {
        let a = local_data(e, l)?.a_l;
        if (l as i64 - a) % p as i64 == 0 {
            witnesses.push(l);
        }
    }
    Ok((witnesses.is_empty(), witnesses))
}
