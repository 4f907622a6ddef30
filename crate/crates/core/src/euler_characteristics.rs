//! Truncated Euler characteristics as exact powers of `p`.
//!
//! Over the cyclotomic `Z_p`-extension the characteristic is `p^{-g} ρ_p(E)`
//! up to a unit; the false-Tate and GL2 lifts multiply in `L_l(E,1)^{-1}`
//! over their correction sets. Everything is carried as valuations.

use serde::{Deserialize, Serialize};

use crate::arith::val_i64;
use crate::curve::{
    count_points, j_nonintegral_primes, local_data, tamagawa_product, torsion_p_part, ArithmeticInputs, CurveModel,
};
use crate::error::{Error, Result};
use crate::euler_data::{false_tate_set, local_term};
use crate::padic::check_prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Extension {
    /// The cyclotomic `Z_p`-extension; the value is the same over `Γ'`.
    Cyclotomic,
    FalseTate {
        m: u64,
    },
    Gl2,
}

/// Additive pieces of `v_p(χ_t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiBreakdown {
    pub minus_rank: i64,
    pub regulator: i64,
    pub sha: i64,
    pub tamagawa: i64,
    /// `2 v_p(#E~(F_p))`.
    pub reduction_count: i64,
    /// `-2 v_p(#E(Q)[p])`.
    pub torsion: i64,
    /// `Σ v_p(L_l(E,1)^{-1})` over the correction primes.
    pub correction: i64,
    pub correction_primes: Vec<u64>,
}

impl ChiBreakdown {
    pub fn total(&self) -> i64 {
        self.minus_rank
            + self.regulator
            + self.sha
            + self.tamagawa
            + self.reduction_count
            + self.torsion
            + self.correction
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiResult {
    pub label: String,
    pub extension: Extension,
    /// `χ_t = p^{chi_valuation}`.
    pub chi_valuation: u32,
    pub breakdown: ChiBreakdown,
    pub justification: String,
}

/// The `ρ_p` pieces (everything except `-g` and corrections).
fn rho_parts(e: &CurveModel, inputs: &ArithmeticInputs, p: u64) -> Result<ChiBreakdown> {
    check_prime(p)?;
    inputs.validate()?;
    let (count, a_p) = match count_points(e, p) {
        Ok(r) => r,
        Err(Error::BadReduction(_)) => {
            return Err(Error::BadAtP {
                label: e.label().to_string(),
                prime: p,
            })
        }
        Err(err) => return Err(err),
    };
    if a_p.rem_euclid(p as i64) == 0 {
        return Err(Error::NotOrdinary { prime: p, a_p });
    }
    let (bound, exact) = torsion_p_part(e, p)?;
    let torsion = match (exact, inputs.torsion_p_valuation) {
        (true, Some(t)) if t > 0 => {
            return Err(Error::InconsistentInput(format!(
                "{}: torsion valuation {t} supplied but reductions rule out rational {p}-torsion",
                e.label()
            )))
        }
        (true, _) => 0,
        (false, Some(t)) if t > bound => {
            return Err(Error::InconsistentInput(format!(
                "{}: torsion valuation {t} exceeds the reduction bound {bound}",
                e.label()
            )))
        }
        (false, Some(t)) => t,
        (false, None) => {
            return Err(Error::MissingInput(format!(
                "{}: v_{p}(#E(Q)[{p}]) is needed (reduction bound {bound})",
                e.label()
            )))
        }
    };
    let tau = tamagawa_product(e)?;
    Ok(ChiBreakdown {
        minus_rank: 0,
        regulator: inputs.regulator_p_valuation,
        sha: inputs.sha_p_valuation as i64,
        tamagawa: val_i64(tau as i64, p).unwrap_or(0) as i64,
        reduction_count: 2 * val_i64(count as i64, p).unwrap_or(0) as i64,
        torsion: -2 * torsion as i64,
        correction: 0,
        correction_primes: Vec::new(),
    })
}

/// `v_p(ρ_p(E)) = v(R_p) + v(#Sha[p]) - 2 v(#E(Q)[p]) + v(τ) + 2 v(#E~(F_p))`.
pub fn rho_p_valuation(e: &CurveModel, inputs: &ArithmeticInputs, p: u64) -> Result<i64> {
    Ok(rho_parts(e, inputs, p)?.total())
}

fn finish(e: &CurveModel, extension: Extension, breakdown: ChiBreakdown, justification: &str) -> Result<ChiResult> {
    let v = breakdown.total();
    if v < 0 {
        return Err(Error::NegativeValuation {
            label: e.label().to_string(),
            valuation: v,
        });
    }
    Ok(ChiResult {
        label: e.label().to_string(),
        extension,
        chi_valuation: v as u32,
        breakdown,
        justification: justification.to_string(),
    })
}

fn gamma_breakdown(e: &CurveModel, inputs: &ArithmeticInputs, p: u64) -> Result<ChiBreakdown> {
    let mut b = rho_parts(e, inputs, p)?;
    b.minus_rank = -(inputs.rank as i64);
    let v = b.total();
    if v < 0 {
        return Err(Error::NegativeValuation {
            label: e.label().to_string(),
            valuation: v,
        });
    }
    Ok(b)
}

/// `χ_t(Γ, E) ~ p^{-g} ρ_p(E)`; equal to the value over `Γ'`.
pub fn chi_t_gamma(e: &CurveModel, inputs: &ArithmeticInputs, p: u64) -> Result<ChiResult> {
    let b = gamma_breakdown(e, inputs, p)?;
    finish(e, Extension::Cyclotomic, b, "p^{-g} rho_p(E); identical over Gamma'")
}

fn with_correction(e: &CurveModel, mut b: ChiBreakdown, primes: Vec<u64>, p: u64) -> Result<ChiBreakdown> {
    let mut corr = 0i64;
    for &l in &primes {
        corr += val_i64(local_term(e, l)?, p).unwrap_or(0) as i64;
    }
    b.correction = corr;
    b.correction_primes = primes;
    Ok(b)
}

/// Over the false-Tate extension for `m`: the cyclotomic value times
/// `∏_{l ∈ 𝔐(E)} L_l(E,1)^{-1}`.
pub fn chi_t_false_tate(e: &CurveModel, inputs: &ArithmeticInputs, m: u64, p: u64) -> Result<ChiResult> {
    let primes = false_tate_set(e, m, p)?;
    let b = with_correction(e, gamma_breakdown(e, inputs, p)?, primes, p)?;
    finish(
        e,
        Extension::FalseTate { m },
        b,
        "cyclotomic value (Gamma in place of Gamma') times local factors over points of order p",
    )
}

/// Over the GL2 extension: the cyclotomic value times
/// `∏_{l ∈ ℳ_E} L_l(E,1)^{-1}` over primes of non-integral `j`.
pub fn chi_t_gl2(e: &CurveModel, inputs: &ArithmeticInputs, p: u64) -> Result<ChiResult> {
    let b = gamma_breakdown(e, inputs, p)?;
    let primes = j_nonintegral_primes(e)?;
    for &l in &primes {
        debug_assert!(!local_data(e, l)?.reduction.is_good());
    }
    let b = with_correction(e, b, primes, p)?;
    finish(
        e,
        Extension::Gl2,
        b,
        "cyclotomic value times local factors over primes of non-integral j",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(rank: u32, reg: i64) -> ArithmeticInputs {
        ArithmeticInputs {
            rank,
            sha_p_valuation: 0,
            regulator_p_valuation: reg,
            torsion_p_valuation: None,
            provenance: "test".into(),
        }
    }

    #[test]
    fn curve_37a1() {
        let e = CurveModel::from_i64s("37a1", [0, 0, 1, -1, 0]).unwrap();
        assert_eq!(rho_p_valuation(&e, &inputs(1, 1), 5).unwrap(), 1);
        let chi = chi_t_gamma(&e, &inputs(1, 1), 5).unwrap();
        assert_eq!(chi.chi_valuation, 0);
        assert_eq!(chi.breakdown.total(), 0);
        let gl2 = chi_t_gl2(&e, &inputs(1, 1), 5).unwrap();
        assert_eq!(gl2.chi_valuation, 0);
        assert_eq!(gl2.breakdown.correction_primes, vec![37]);
        assert_eq!(
            chi_t_gamma(&e, &inputs(2, 1), 5),
            Err(Error::NegativeValuation {
                label: "37a1".into(),
                valuation: -1
            })
        );
        let ft = chi_t_false_tate(&e, &inputs(1, 1), 2, 5).unwrap();
        assert_eq!(ft.breakdown.correction_primes, vec![2]);
        assert_eq!(ft.chi_valuation, 1);
    }

    #[test]
    fn curve_1406g1() {
        let e = CurveModel::from_i64s("1406g1", [1, -1, 1, -1191, 507615]).unwrap();
        assert_eq!(rho_p_valuation(&e, &inputs(1, 1), 5).unwrap(), 3);
        assert_eq!(chi_t_gamma(&e, &inputs(1, 1), 5).unwrap().chi_valuation, 2);
    }

    #[test]
    fn trivial_inputs() {
        // 11a3 at 7: rank 0, tau = 1, #E~(F_7) = 10
        let e = CurveModel::from_i64s("11a3", [0, -1, 1, 0, 0]).unwrap();
        assert_eq!(rho_p_valuation(&e, &inputs(0, 0), 7).unwrap(), 0);
    }

    #[test]
    fn errors() {
        let e = CurveModel::from_i64s("37a1", [0, 0, 1, -1, 0]).unwrap();
        assert!(matches!(chi_t_gamma(&e, &inputs(1, 1), 37), Err(Error::BadAtP { .. })));
        let mut no_prov = inputs(1, 1);
        no_prov.provenance.clear();
        assert!(matches!(chi_t_gamma(&e, &no_prov, 5), Err(Error::MissingInput(_))));
        // y^2 = x^3 + x is supersingular at 7
        let ss = CurveModel::from_i64s("ss", [0, 0, 0, 1, 0]).unwrap();
        assert!(matches!(
            chi_t_gamma(&ss, &inputs(0, 0), 7),
            Err(Error::NotOrdinary { .. })
        ));
        // 11a1 has rational 5-torsion: the torsion valuation must be supplied
        let t = CurveModel::from_i64s("11a1", [0, -1, 1, -10, -20]).unwrap();
        assert!(matches!(
            rho_p_valuation(&t, &inputs(0, 0), 5),
            Err(Error::MissingInput(_))
        ));
        let mut with_torsion = inputs(0, 0);
        with_torsion.torsion_p_valuation = Some(1);
        // tau = 5, #E~(F_5) = 5, torsion 5: 1 + 2 - 2
        assert_eq!(rho_p_valuation(&t, &with_torsion, 5).unwrap(), 1);
        with_torsion.torsion_p_valuation = Some(2);
        assert!(matches!(
            rho_p_valuation(&t, &with_torsion, 5),
            Err(Error::InconsistentInput(_))
        ));
    }
}
