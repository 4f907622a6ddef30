//! Machine-readable reports. Every number is an integer or a valuation;
//! struct field order fixes the key order of the JSON output.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::val_i64;
use crate::curve::{
    bad_primes, conductor, count_points, local_data, tamagawa_product, ArithmeticInputs, ReductionType,
};
use crate::data::{embedded, Curve, Expected};
use crate::error::{Error, Result};
use crate::euler_characteristics::{chi_t_false_tate, chi_t_gamma, chi_t_gl2, rho_p_valuation, ChiResult, Extension};
use crate::euler_data::{phi, sigma_zero, SigmaZero};
use crate::verifier::{check_hypotheses, CongruencePair, CongruenceVerdict, PairHypotheses, DEFAULT_SCAN_BOUND};

pub const SCHEMA: &str = "euler-congruence-report/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRow {
    pub prime: u64,
    pub reduction: ReductionType,
    pub kodaira: String,
    pub tamagawa: u32,
    pub a_l: i64,
    pub beta: i64,
    pub term: i64,
    pub term_valuation: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSection {
    pub label: String,
    pub ainvs: Vec<i64>,
    pub conductor: u64,
    pub bad_primes: Vec<u64>,
    pub inputs: ArithmeticInputs,
    pub sigma_zero: Vec<u64>,
    pub local_table: Vec<LocalRow>,
    pub tamagawa_product: u64,
    pub tamagawa_valuation: u32,
    pub a_p: i64,
    /// Raw `#E~(F_p)`.
    pub reduction_count: u64,
    /// `v_p(#E~(F_p))`, the quantity compared with reference tables.
    pub reduction_count_valuation: u32,
    pub rho_p_valuation: i64,
    pub phi_valuation: u32,
    pub star_satisfied: bool,
    pub chi: Vec<ChiResult>,
}

impl CurveSection {
    pub fn chi_valuation(&self, ext: Extension) -> Option<u32> {
        self.chi.iter().find(|c| c.extension == ext).map(|c| c.chi_valuation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub label: String,
    pub field: String,
    pub expected: String,
    pub computed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSection {
    pub labels: [String; 2],
    pub scan_bound: u64,
    pub hypotheses: PairHypotheses,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refused: Option<String>,
    pub verdicts: Vec<CongruenceVerdict>,
    pub all_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub p: u64,
    pub curves: Vec<CurveSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSection>,
    pub discrepancies: Vec<Discrepancy>,
    pub notes: Vec<String>,
}

impl Report {
    /// 0 when every requested verdict holds, 2 for a refused pair, 4 for a
    /// violated biconditional.
    pub fn exit_code(&self) -> i32 {
        match &self.pair {
            Some(pair) if pair.refused.is_some() => 2,
            Some(pair) if !pair.all_hold => 4,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }
}

#[derive(Debug, Clone, Default)]
pub struct PairOptions {
    pub false_tate_m: Option<u64>,
    pub gl2: bool,
    pub scan_bound: Option<u64>,
}

fn small(n: &num_bigint::BigInt, what: &str) -> Result<i64> {
    n.to_i64()
        .ok_or_else(|| Error::InconsistentInput(format!("{what} {n} does not fit in 64 bits")))
}

/// Per-curve section over the auxiliary set `sigma`.
pub fn curve_section(curve: &Curve, p: u64, sigma: &SigmaZero, m: Option<u64>) -> Result<CurveSection> {
    let e = &curve.model;
    let ainvs = e
        .ainvs()
        .iter()
        .map(|a| small(a, "coefficient"))
        .collect::<Result<Vec<_>>>()?;
    let bad = bad_primes(e)?;
    let phi_report = phi(e, sigma, p)?;
    let mut local_table = Vec::with_capacity(phi_report.terms.len());
    for t in &phi_report.terms {
        let d = local_data(e, t.prime)?;
        local_table.push(LocalRow {
            prime: t.prime,
            reduction: d.reduction,
            kodaira: d.kodaira.to_string(),
            tamagawa: d.tamagawa,
            a_l: t.a_l,
            beta: t.beta,
            term: t.term,
            term_valuation: t.term_valuation,
        });
    }
    let (count, a_p) = count_points(e, p)?;
    let tau = tamagawa_product(e)?;
    let mut chi = vec![chi_t_gamma(e, &curve.inputs, p)?, chi_t_gl2(e, &curve.inputs, p)?];
    if let Some(m) = m {
        chi.push(chi_t_false_tate(e, &curve.inputs, m, p)?);
    }
    Ok(CurveSection {
        label: e.label().to_string(),
        ainvs,
        conductor: small(&conductor(e)?, "conductor")? as u64,
        bad_primes: bad,
        inputs: curve.inputs.clone(),
        sigma_zero: sigma.primes.clone(),
        local_table,
        tamagawa_product: tau,
        tamagawa_valuation: val_i64(tau as i64, p).unwrap_or(0),
        a_p,
        reduction_count: count,
        reduction_count_valuation: val_i64(count as i64, p).unwrap_or(0),
        rho_p_valuation: rho_p_valuation(e, &curve.inputs, p)?,
        phi_valuation: phi_report.phi_valuation,
        star_satisfied: phi_report.star_satisfied,
        chi,
    })
}

fn compare<T: PartialEq + std::fmt::Debug>(
    out: &mut Vec<Discrepancy>,
    label: &str,
    field: &str,
    expected: Option<T>,
    computed: T,
) {
    if let Some(x) = expected {
        if x != computed {
            out.push(Discrepancy {
                label: label.to_string(),
                field: field.to_string(),
                expected: format!("{x:?}"),
                computed: format!("{computed:?}"),
            });
        }
    }
}

/// Compares a section with golden values. `partner` is the other curve of
/// the pair, if any; Φ and local terms are only compared against the pair
/// the golden values were recorded for.
fn discrepancies(section: &CurveSection, curve: &Curve, p: u64, partner: Option<&str>) -> Result<Vec<Discrepancy>> {
    let mut out = Vec::new();
    let Some(ex) = &curve.expected else { return Ok(out) };
    if ex.p != p {
        return Ok(out);
    }
    let l = section.label.as_str();
    compare(
        &mut out,
        l,
        "bad_primes",
        ex.bad_primes.clone(),
        section.bad_primes.clone(),
    );
    compare(
        &mut out,
        l,
        "regulator_valuation",
        ex.regulator_valuation,
        section.inputs.regulator_p_valuation,
    );
    compare(
        &mut out,
        l,
        "sha_valuation",
        ex.sha_valuation,
        section.inputs.sha_p_valuation,
    );
    compare(
        &mut out,
        l,
        "tamagawa_product",
        ex.tamagawa_product,
        section.tamagawa_product,
    );
    compare(
        &mut out,
        l,
        "tamagawa_valuation",
        ex.tamagawa_valuation,
        section.tamagawa_valuation,
    );
    compare(
        &mut out,
        l,
        "reduction_count_valuation",
        ex.reduction_count_valuation,
        section.reduction_count_valuation,
    );
    let gamma = section
        .chi
        .iter()
        .find(|c| c.extension == Extension::Cyclotomic)
        .expect("cyclotomic value present");
    compare(
        &mut out,
        l,
        "torsion_valuation",
        ex.torsion_valuation,
        (-gamma.breakdown.torsion / 2) as u32,
    );
    compare(
        &mut out,
        l,
        "chi_gamma_valuation",
        ex.chi_gamma_valuation,
        gamma.chi_valuation,
    );
    compare(
        &mut out,
        l,
        "chi_gl2_valuation",
        ex.chi_gl2_valuation,
        section.chi_valuation(Extension::Gl2).unwrap_or(0),
    );
    if let Some(terms) = &ex.local_terms {
        for (&prime, &t) in terms {
            let computed = crate::euler_data::local_term(&curve.model, prime)?;
            compare(&mut out, l, &format!("local_term[{prime}]"), Some(t), computed);
        }
    }
    if partner.is_some() && partner == ex.partner.as_deref() {
        compare(&mut out, l, "phi_valuation", ex.phi_valuation, section.phi_valuation);
    }
    Ok(out)
}

fn notes_for(curves: &[&Curve]) -> Vec<String> {
    let mut notes = vec![
        "reduction_count is the raw #E~(F_p); reference tables state only its p-part, compared as reduction_count_valuation".to_string(),
    ];
    for c in curves {
        if let Some(Expected { note: Some(n), .. }) = &c.expected {
            notes.push(format!("{}: {n}", c.model.label()));
        }
    }
    notes
}

/// Analyzes each curve over its own bad primes, concurrently.
pub fn run_analyze(curves: &[Curve], p: u64, false_tate_m: Option<u64>) -> Result<Report> {
    let sections: Vec<(CurveSection, Vec<Discrepancy>)> = curves
        .par_iter()
        .map(|c| {
            let sigma = sigma_zero(&c.model, None, p)?;
            let s = curve_section(c, p, &sigma, false_tate_m)?;
            let d = discrepancies(&s, c, p, None)?;
            Ok((s, d))
        })
        .collect::<Result<_>>()?;
    let (sections, disc): (Vec<_>, Vec<_>) = sections.into_iter().unzip();
    Ok(Report {
        schema: SCHEMA.to_string(),
        p,
        curves: sections,
        pair: None,
        discrepancies: disc.into_iter().flatten().collect(),
        notes: notes_for(&curves.iter().collect::<Vec<_>>()),
    })
}

/// Full pair analysis. A pair that fails a hypothesis yields a report with
/// `refused` set and no verdicts.
pub fn run_pair(c1: &Curve, c2: &Curve, p: u64, opts: &PairOptions) -> Result<Report> {
    let bound = opts.scan_bound.unwrap_or(DEFAULT_SCAN_BOUND);
    let sigma = sigma_zero(&c1.model, Some(&c2.model), p)?;
    let labels = [c1.model.label().to_string(), c2.model.label().to_string()];
    let hypotheses = check_hypotheses(&c1.model, &c2.model, &c1.inputs, &c2.inputs, p, bound)?;
    let notes = notes_for(&[c1, c2]);
    if !hypotheses.passed() {
        let reason = hypotheses
            .conditions
            .iter()
            .filter(|c| c.status == crate::verifier::ConditionStatus::Failed)
            .map(|c| format!("({}) {}: {}", c.index, c.name, c.detail))
            .collect::<Vec<_>>()
            .join("; ");
        return Ok(Report {
            schema: SCHEMA.to_string(),
            p,
            curves: Vec::new(),
            pair: Some(PairSection {
                labels,
                scan_bound: bound,
                hypotheses,
                refused: Some(reason),
                verdicts: Vec::new(),
                all_hold: false,
            }),
            discrepancies: Vec::new(),
            notes,
        });
    }
    let pair = CongruencePair::new(&c1.model, &c2.model, &c1.inputs, &c2.inputs, p, bound)?;
    let m = opts.false_tate_m;
    let (s1, s2) = rayon::join(|| curve_section(c1, p, &sigma, m), || curve_section(c2, p, &sigma, m));
    let (s1, s2) = (s1?, s2?);

    let mut verdicts = vec![pair.gamma_verdict(), pair.bsd_verdict()?];
    if let Some(m) = m {
        verdicts.push(pair.false_tate_verdict(m)?);
    }
    if opts.gl2 {
        verdicts.push(pair.gl2_verdict()?);
    }
    let all_hold = verdicts.iter().all(CongruenceVerdict::holds);

    let mut disc = discrepancies(&s1, c1, p, Some(&labels[1]))?;
    disc.extend(discrepancies(&s2, c2, p, Some(&labels[0]))?);
    Ok(Report {
        schema: SCHEMA.to_string(),
        p,
        curves: vec![s1, s2],
        pair: Some(PairSection {
            labels,
            scan_bound: bound,
            hypotheses,
            refused: None,
            verdicts,
            all_hold,
        }),
        discrepancies: disc,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestCase {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Runs the embedded golden pairs and the non-congruent control.
pub fn selftest() -> Result<Vec<SelftestCase>> {
    let p = 5;
    let mut cases = Vec::new();
    let runs: [(&str, &str, u64); 3] = [("201c1", "469a1", 11), ("37a1", "1406g1", 11), ("82a1", "902a1", 3)];
    for (a, b, m) in runs {
        let (c1, c2) = (embedded(a)?, embedded(b)?);
        let opts = PairOptions {
            false_tate_m: Some(m),
            gl2: true,
            scan_bound: None,
        };
        let report = run_pair(&c1, &c2, p, &opts)?;
        let pair = report.pair.as_ref().expect("pair section");
        let passed = pair.all_hold && report.discrepancies.is_empty() && report.exit_code() == 0;
        let vals: BTreeMap<String, [u32; 2]> = pair
            .verdicts
            .iter()
            .map(|v| (format!("{:?}", v.theorem), [v.left, v.right]))
            .collect();
        cases.push(SelftestCase {
            name: format!("pair {a} {b}"),
            passed,
            detail: format!("valuations {vals:?}; {} discrepancies", report.discrepancies.len()),
        });
    }
    let control = run_pair(&embedded("37a1")?, &embedded("201c1")?, p, &PairOptions::default())?;
    cases.push(SelftestCase {
        name: "pair 37a1 201c1 refused".into(),
        passed: control.exit_code() == 2,
        detail: control.pair.and_then(|s| s.refused).unwrap_or_default(),
    });
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_no_floats(v: &serde_json::Value) {
        match v {
            serde_json::Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "float {n}"),
            serde_json::Value::Array(a) => a.iter().for_each(assert_no_floats),
            serde_json::Value::Object(o) => o.values().for_each(assert_no_floats),
            _ => {}
        }
    }

    #[test]
    fn pair_report_round_trips() {
        let opts = PairOptions {
            false_tate_m: Some(11),
            gl2: true,
            scan_bound: Some(200),
        };
        let r = run_pair(&embedded("201c1").unwrap(), &embedded("469a1").unwrap(), 5, &opts).unwrap();
        let text = r.to_json();
        assert_eq!(Report::from_json(&text).unwrap(), r);
        assert_eq!(Report::from_json(&text).unwrap().to_json(), text);
        assert_no_floats(&serde_json::from_str(&text).unwrap());
        assert!(r.discrepancies.is_empty(), "{:?}", r.discrepancies);
        assert_eq!(r.exit_code(), 0);
        assert_eq!(
            r.curves[0].local_table.iter().map(|t| t.term).collect::<Vec<_>>(),
            [4, 11, 68]
        );
        assert_eq!(
            r.curves[1].local_table.iter().map(|t| t.term).collect::<Vec<_>>(),
            [3, 8, 68]
        );
    }

    #[test]
    fn analyze_examples() {
        let r = run_analyze(&[embedded("1406g1").unwrap(), embedded("82a1").unwrap()], 5, None).unwrap();
        assert_eq!(r.curves[0].tamagawa_product, 150);
        assert_eq!(r.curves[0].tamagawa_valuation, 2);
        assert_eq!(r.curves[1].chi_valuation(Extension::Cyclotomic), Some(1));
        assert!(r.discrepancies.is_empty(), "{:?}", r.discrepancies);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn golden_mismatch_is_reported() {
        let mut c = embedded("37a1").unwrap();
        c.expected.as_mut().unwrap().local_terms = Some(BTreeMap::from([(37, 36)]));
        let r = run_analyze(&[c], 5, None).unwrap();
        assert_eq!(r.discrepancies.len(), 1);
        assert_eq!(r.discrepancies[0].field, "local_term[37]");
        assert_eq!(r.discrepancies[0].computed, "38");
    }

    #[test]
    fn refused_pair() {
        let r = run_pair(
            &embedded("37a1").unwrap(),
            &embedded("201c1").unwrap(),
            5,
            &PairOptions::default(),
        )
        .unwrap();
        assert_eq!(r.exit_code(), 2);
        assert!(r.pair.unwrap().verdicts.is_empty());
    }

    #[test]
    fn selftest_passes() {
        let cases = selftest().unwrap();
        assert_eq!(cases.len(), 4);
        assert!(cases.iter().all(|c| c.passed), "{cases:?}");
    }
}
