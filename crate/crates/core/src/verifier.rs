//! Pair verification: hypotheses on a pair of curves, the residual
//! congruence scan, and the biconditional verdicts comparing
//! `Φ · χ_t` for the two curves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::curve::{
    bad_primes, conductor, count_points, good_ordinary_at, torsion_p_part, ArithmeticInputs, CurveModel,
    POINT_COUNT_CUTOFF,
};
use crate::error::{Error, Result};
use crate::euler_characteristics::{chi_t_false_tate, chi_t_gamma, chi_t_gl2, rho_p_valuation, ChiResult};
use crate::euler_data::{false_tate_set, gl2_hypothesis, phi, sigma_zero, EulerFactorReport, SigmaZero};
use crate::padic::check_prime;

pub const DEFAULT_SCAN_BOUND: u64 = 1000;
const MIN_SCAN_BOUND: u64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    VerifiedComputed,
    AssertedByInput,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub index: u8,
    pub name: String,
    pub status: ConditionStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub bound: u64,
    pub primes_checked: usize,
    pub ok: bool,
    pub mismatches: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairHypotheses {
    pub conditions: Vec<Condition>,
    pub scan: ScanResult,
}

impl PairHypotheses {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.status != ConditionStatus::Failed)
    }

    fn failure(&self) -> Option<Error> {
        let failed: Vec<&Condition> = self
            .conditions
            .iter()
            .filter(|c| c.status == ConditionStatus::Failed)
            .collect();
        if failed.is_empty() {
            return None;
        }
        let reason = failed
            .iter()
            .map(|c| format!("({}) {}: {}", c.index, c.name, c.detail))
            .collect::<Vec<_>>()
            .join("; ");
        Some(Error::HypothesisFailed {
            reason,
            witnesses: self.scan.mismatches.clone(),
        })
    }
}

/// `a_l(E1) ≡ a_l(E2) mod p` for every prime `l ≤ bound` of good reduction
/// for both curves, `l ≠ p`.
pub fn residual_congruence_scan(e1: &CurveModel, e2: &CurveModel, p: u64, bound: u64) -> Result<ScanResult> {
    check_prime(p)?;
    if bound < MIN_SCAN_BOUND {
        return Err(Error::InconsistentInput(format!(
            "scan bound {bound} is below {MIN_SCAN_BOUND}"
        )));
    }
    if bound > POINT_COUNT_CUTOFF {
        return Err(Error::CutoffExceeded {
            prime: bound,
            cutoff: POINT_COUNT_CUTOFF,
        });
    }
    let mut skip = bad_primes(e1)?;
    skip.extend(bad_primes(e2)?);
    skip.push(p);
    let primes: Vec<u64> = primes_up_to(bound).into_iter().filter(|l| !skip.contains(l)).collect();
    // order-preserving collect keeps the result independent of scheduling
    let checks: Vec<(u64, bool)> = primes
        .par_iter()
        .map(|&l| {
            let a1 = count_points(e1, l)?.1;
            let a2 = count_points(e2, l)?.1;
            Ok((l, (a1 - a2).rem_euclid(p as i64) == 0))
        })
        .collect::<Result<_>>()?;
    let mismatches: Vec<u64> = checks.iter().filter(|(_, ok)| !ok).map(|(l, _)| *l).collect();
    Ok(ScanResult {
        bound,
        primes_checked: checks.len(),
        ok: mismatches.is_empty(),
        mismatches,
    })
}

fn condition(index: u8, name: &str, status: ConditionStatus, detail: String) -> Condition {
    Condition {
        index,
        name: name.to_string(),
        status,
        detail,
    }
}

/// Ledger of the six pair conditions. Equal ranks, good ordinary reduction
/// and the `a_l` shadow of the residual isomorphism are computed; the rest
/// is taken from the inputs.
pub fn check_hypotheses(
    e1: &CurveModel,
    e2: &CurveModel,
    in1: &ArithmeticInputs,
    in2: &ArithmeticInputs,
    p: u64,
    bound: u64,
) -> Result<PairHypotheses> {
    use ConditionStatus::*;
    in1.validate()?;
    in2.validate()?;
    let mut conditions = Vec::with_capacity(6);

    let same_rank = in1.rank == in2.rank;
    conditions.push(condition(
        1,
        "equal algebraic rank",
        if same_rank { VerifiedComputed } else { Failed },
        format!("ranks {} and {}", in1.rank, in2.rank),
    ));

    let scan = residual_congruence_scan(e1, e2, p, bound)?;
    conditions.push(condition(
        2,
        "congruent residual representations",
        if scan.ok { VerifiedComputed } else { Failed },
        if scan.ok {
            format!(
                "a_l agree mod {p} at {} good primes up to {bound}; full isomorphism asserted by input",
                scan.primes_checked
            )
        } else {
            format!(
                "a_l differ mod {p} at {} primes, first {:?}",
                scan.mismatches.len(),
                &scan.mismatches[..scan.mismatches.len().min(8)]
            )
        },
    ));

    let t1 = torsion_p_part(e1, p)?;
    let t2 = torsion_p_part(e2, p)?;
    conditions.push(condition(
        3,
        "irreducible residual representations",
        AssertedByInput,
        format!(
            "asserted; reduction bounds on rational {p}-torsion: {} and {}",
            t1.0, t2.0
        ),
    ));

    let ord = [good_ordinary_at(e1, p), good_ordinary_at(e2, p)];
    conditions.push(condition(
        4,
        "good ordinary reduction at p",
        if ord[0] && ord[1] { VerifiedComputed } else { Failed },
        format!("{}: {}, {}: {}", e1.label(), ord[0], e2.label(), ord[1]),
    ));

    conditions.push(condition(
        5,
        "finite Sha[p]",
        AssertedByInput,
        format!(
            "v_p(#Sha[p]) = {} and {} ({}; {})",
            in1.sha_p_valuation, in2.sha_p_valuation, in1.provenance, in2.provenance
        ),
    ));
    conditions.push(condition(
        6,
        "non-degenerate p-adic height pairing",
        AssertedByInput,
        format!(
            "v_p(R_p) = {} and {}",
            in1.regulator_p_valuation, in2.regulator_p_valuation
        ),
    ));

    Ok(PairHypotheses { conditions, scan })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremTag {
    /// `Φ χ_t(Γ)` over the cyclotomic extension.
    Cyclotomic,
    /// The same comparison routed through `p^{-g} ρ_p`.
    BsdCorollary,
    FalseTate,
    Gl2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceVerdict {
    pub theorem: TheoremTag,
    pub labels: [String; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    pub phi_valuations: [u32; 2],
    pub chi_valuations: [u32; 2],
    /// `v_p(Φ_{E1} χ_t(E1))`.
    pub left: u32,
    /// `v_p(Φ_{E2} χ_t(E2))`.
    pub right: u32,
    pub biconditional_holds: bool,
    pub star: [bool; 2],
    /// When `(★)` holds for both curves: `χ_t(E1) = 1 ⟺ χ_t(E2) = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strengthened_holds: Option<bool>,
}

impl CongruenceVerdict {
    fn new(theorem: TheoremTag, labels: [String; 2], m: Option<u64>, phi: [u32; 2], chi: [u32; 2]) -> Self {
        let left = phi[0] + chi[0];
        let right = phi[1] + chi[1];
        let star = [phi[0] == 0, phi[1] == 0];
        let strengthened_holds = (star[0] && star[1]).then_some((chi[0] == 0) == (chi[1] == 0));
        CongruenceVerdict {
            theorem,
            labels,
            m,
            phi_valuations: phi,
            chi_valuations: chi,
            left,
            right,
            biconditional_holds: (left == 0) == (right == 0),
            star,
            strengthened_holds,
        }
    }

    /// Biconditional and, where applicable, its strengthened form.
    pub fn holds(&self) -> bool {
        self.biconditional_holds && self.strengthened_holds != Some(false)
    }
}

/// A pair of curves that passed the hypothesis checks, with the shared `Σ0`.
#[derive(Debug, Clone)]
pub struct CongruencePair {
    pub e: [CurveModel; 2],
    pub inputs: [ArithmeticInputs; 2],
    pub p: u64,
    pub hypotheses: PairHypotheses,
    pub sigma: SigmaZero,
    pub phi: [EulerFactorReport; 2],
    pub chi_gamma: [ChiResult; 2],
}

impl CongruencePair {
    /// Runs the hypothesis ledger; refuses the pair if any condition fails.
    pub fn new(
        e1: &CurveModel,
        e2: &CurveModel,
        in1: &ArithmeticInputs,
        in2: &ArithmeticInputs,
        p: u64,
        scan_bound: u64,
    ) -> Result<Self> {
        let sigma = sigma_zero(e1, Some(e2), p)?;
        let hypotheses = check_hypotheses(e1, e2, in1, in2, p, scan_bound)?;
        if let Some(err) = hypotheses.failure() {
            return Err(err);
        }
        let phi = [phi(e1, &sigma, p)?, phi(e2, &sigma, p)?];
        let chi_gamma = [chi_t_gamma(e1, in1, p)?, chi_t_gamma(e2, in2, p)?];
        Ok(CongruencePair {
            e: [e1.clone(), e2.clone()],
            inputs: [in1.clone(), in2.clone()],
            p,
            hypotheses,
            sigma,
            phi,
            chi_gamma,
        })
    }

    fn labels(&self) -> [String; 2] {
        [self.e[0].label().to_string(), self.e[1].label().to_string()]
    }

    fn phis(&self) -> [u32; 2] {
        [self.phi[0].phi_valuation, self.phi[1].phi_valuation]
    }

    pub fn gamma_verdict(&self) -> CongruenceVerdict {
        let chi = [self.chi_gamma[0].chi_valuation, self.chi_gamma[1].chi_valuation];
        CongruenceVerdict::new(TheoremTag::Cyclotomic, self.labels(), None, self.phis(), chi)
    }

    /// Same comparison computed through `-g + v_p(ρ_p)`; must match the
    /// cyclotomic verdict exactly.
    pub fn bsd_verdict(&self) -> Result<CongruenceVerdict> {
        let mut chi = [0u32; 2];
        for (slot, (e, inputs)) in chi.iter_mut().zip(self.e.iter().zip(&self.inputs)) {
            let v = rho_p_valuation(e, inputs, self.p)? - inputs.rank as i64;
            if v < 0 {
                return Err(Error::NegativeValuation {
                    label: e.label().to_string(),
                    valuation: v,
                });
            }
            *slot = v as u32;
        }
        let verdict = CongruenceVerdict::new(TheoremTag::BsdCorollary, self.labels(), None, self.phis(), chi);
        let gamma = self.gamma_verdict();
        if (verdict.left, verdict.right, verdict.biconditional_holds)
            != (gamma.left, gamma.right, gamma.biconditional_holds)
        {
            return Err(Error::Invariant("cyclotomic and ρ_p routes disagree".into()));
        }
        Ok(verdict)
    }

    fn check_lift(&self, lifted: &CongruenceVerdict) -> Result<()> {
        let g = self.gamma_verdict();
        if lifted.left < g.left || lifted.right < g.right {
            return Err(Error::Invariant("lifted valuation below the cyclotomic one".into()));
        }
        if g.biconditional_holds && g.left > 0 && g.right > 0 && !lifted.biconditional_holds {
            return Err(Error::Invariant(
                "lifted biconditional fails although both cyclotomic sides are non-units".into(),
            ));
        }
        Ok(())
    }

    pub fn false_tate_verdict(&self, m: u64) -> Result<CongruenceVerdict> {
        let mut modulus = BigInt::from(self.p);
        for e in &self.e {
            modulus = modulus.lcm(&conductor(e)?);
        }
        if m == 0 || !BigInt::from(m).gcd(&modulus).is_one() {
            return Err(Error::NotCoprime {
                m,
                modulus: modulus.to_string(),
            });
        }
        let sets = [
            false_tate_set(&self.e[0], m, self.p)?,
            false_tate_set(&self.e[1], m, self.p)?,
        ];
        if sets[0] != sets[1] {
            return Err(Error::Invariant(format!(
                "points of order {} differ across the pair: {:?} vs {:?}",
                self.p, sets[0], sets[1]
            )));
        }
        let chi = [
            chi_t_false_tate(&self.e[0], &self.inputs[0], m, self.p)?.chi_valuation,
            chi_t_false_tate(&self.e[1], &self.inputs[1], m, self.p)?.chi_valuation,
        ];
        let v = CongruenceVerdict::new(TheoremTag::FalseTate, self.labels(), Some(m), self.phis(), chi);
        self.check_lift(&v)?;
        Ok(v)
    }

    pub fn gl2_verdict(&self) -> Result<CongruenceVerdict> {
        let mut witnesses = Vec::new();
        for e in &self.e {
            witnesses.extend(gl2_hypothesis(e, self.p)?.1);
        }
        if !witnesses.is_empty() {
            witnesses.sort_unstable();
            witnesses.dedup();
            return Err(Error::HypothesisFailed {
                reason: format!("p divides l - a_l at primes of non-integral j: {witnesses:?}"),
                witnesses,
            });
        }
        let chi = [
            chi_t_gl2(&self.e[0], &self.inputs[0], self.p)?.chi_valuation,
            chi_t_gl2(&self.e[1], &self.inputs[1], self.p)?.chi_valuation,
        ];
        let v = CongruenceVerdict::new(TheoremTag::Gl2, self.labels(), None, self.phis(), chi);
        self.check_lift(&v)?;
        Ok(v)
    }
}

pub fn verify_gamma_theorem(
    e1: &CurveModel,
    e2: &CurveModel,
    in1: &ArithmeticInputs,
    in2: &ArithmeticInputs,
    p: u64,
) -> Result<CongruenceVerdict> {
    Ok(CongruencePair::new(e1, e2, in1, in2, p, DEFAULT_SCAN_BOUND)?.gamma_verdict())
}

pub fn verify_bsd_corollary(
    e1: &CurveModel,
    e2: &CurveModel,
    in1: &ArithmeticInputs,
    in2: &ArithmeticInputs,
    p: u64,
) -> Result<CongruenceVerdict> {
    CongruencePair::new(e1, e2, in1, in2, p, DEFAULT_SCAN_BOUND)?.bsd_verdict()
}

pub fn verify_false_tate_theorem(
    e1: &CurveModel,
    e2: &CurveModel,
    in1: &ArithmeticInputs,
    in2: &ArithmeticInputs,
    m: u64,
    p: u64,
) -> Result<CongruenceVerdict> {
    CongruencePair::new(e1, e2, in1, in2, p, DEFAULT_SCAN_BOUND)?.false_tate_verdict(m)
}

pub fn verify_gl2_theorem(
    e1: &CurveModel,
    e2: &CurveModel,
    in1: &ArithmeticInputs,
    in2: &ArithmeticInputs,
    p: u64,
) -> Result<CongruenceVerdict> {
    CongruencePair::new(e1, e2, in1, in2, p, DEFAULT_SCAN_BOUND)?.gl2_verdict()
}
