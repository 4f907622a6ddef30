//! Tate's algorithm and point counts against reference tables computed with
//! PARI/gp (`elllocalred`, `ellap`) over Cremona's curves.

use euler_congruence::arith::primes_up_to;
use euler_congruence::curve::{
    bad_primes, conductor, count_points, global_minimal_model, local_data, minimal_model_at, tate, CurveModel,
    ReductionType,
};
use num_bigint::BigInt;
use serde::Deserialize;

#[derive(Deserialize)]
struct Local {
    l: u64,
    f: u32,
    kodaira: i64,
    c: u32,
    a: i64,
}

#[derive(Deserialize)]
struct Record {
    label: String,
    ainvs: [i64; 5],
    local: Vec<Local>,
}

fn records() -> Vec<Record> {
    include_str!("data/tate_reference.jsonl")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn local_data_matches_reference() {
    let recs = records();
    assert!(recs.len() >= 400);
    for r in &recs {
        let e = CurveModel::from_i64s(r.label.clone(), r.ainvs).unwrap();
        let bad: Vec<u64> = r.local.iter().map(|x| x.l).collect();
        assert_eq!(bad_primes(&e).unwrap(), bad, "{}", r.label);
        let mut n = BigInt::from(1);
        for x in &r.local {
            let d = local_data(&e, x.l).unwrap();
            let ctx = format!("{} at {}", r.label, x.l);
            assert_eq!(d.kodaira.pari_code(), x.kodaira, "{ctx}: {}", d.kodaira);
            assert_eq!(d.tamagawa, x.c, "{ctx}");
            assert_eq!(d.conductor_exponent, x.f, "{ctx}");
            assert_eq!(d.a_l, x.a, "{ctx}");
            n *= BigInt::from(x.l).pow(x.f);
        }
        assert_eq!(conductor(&e).unwrap(), n, "{}", r.label);
    }
}

#[test]
fn non_minimal_models_are_reduced() {
    for r in records().iter().step_by(7) {
        let e = CurveModel::from_i64s(r.label.clone(), r.ainvs).unwrap();
        for u in [2i64, 3, 5] {
            let s = e.scale_up(&BigInt::from(u));
            let shifted = s.rst(&BigInt::from(u * 4 + 1), &BigInt::from(-u), &BigInt::from(7));
            let m = minimal_model_at(&shifted, u as u64);
            assert_eq!(m.discriminant(), e.discriminant(), "{} scaled by {u}", r.label);
            assert_eq!(m.c4(), e.c4());
            assert_eq!(m.c6(), e.c6());
            assert_eq!(minimal_model_at(&m, u as u64), m, "idempotent");
            let t = tate(&shifted, u as u64);
            assert_eq!(t.kodaira, tate(&e, u as u64).kodaira);
        }
        let g = global_minimal_model(&e.scale_up(&BigInt::from(30))).unwrap();
        assert_eq!(g.discriminant(), e.discriminant());
    }
}

#[derive(Deserialize)]
struct ApTable {
    primes_below: u64,
    a_l: std::collections::BTreeMap<String, Vec<i64>>,
}

#[test]
fn traces_match_reference() {
    let t: ApTable = serde_json::from_str(include_str!("data/reference_ap.json")).unwrap();
    let ainvs = [
        ("37a1", [0, 0, 1, -1, 0]),
        ("201c1", [1, 1, 0, -794, 8289]),
        ("469a1", [1, 0, 1, -80, -275]),
        ("82a1", [1, 0, 1, -2, 0]),
        ("902a1", [1, 0, 1, -2382, 77312]),
        ("1406g1", [1, -1, 1, -1191, 507615]),
    ];
    let primes = primes_up_to(t.primes_below);
    for (label, a) in ainvs {
        let e = CurveModel::from_i64s(label, a).unwrap();
        let want = &t.a_l[label];
        assert_eq!(want.len(), primes.len());
        for (&l, &ap) in primes.iter().zip(want) {
            let d = local_data(&e, l).unwrap();
            assert_eq!(d.a_l, ap, "{label} at {l}");
            if d.reduction == ReductionType::Good {
                assert_eq!(count_points(&e, l).unwrap().1, ap);
            }
        }
    }
}
