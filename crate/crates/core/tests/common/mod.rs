#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use euler_congruence::arith::primes_up_to;
use euler_congruence::curve::{bad_primes, count_points, local_data, tamagawa_product, CurveModel};
use euler_congruence::data::{embedded, embedded_labels, Curve};
use euler_congruence::euler_characteristics::{chi_t_false_tate, chi_t_gamma, chi_t_gl2};
use euler_congruence::euler_data::sigma_zero;
use euler_congruence::padic::{PadicNumber, PrecisionConfig};
use euler_congruence::series::{
    imprimitive_product, leading_after_tg, local_char_series, mu_lambda, sigma_invariant, weierstrass_prepare,
    IwasawaSeries,
};
use euler_congruence::verifier::{residual_congruence_scan, CongruencePair, CongruenceVerdict, DEFAULT_SCAN_BOUND};
use euler_congruence::Error;

pub const P: u64 = 5;

/// The golden pairs with the false-Tate `m` used for each.
pub const PAIRS: [(&str, &str, u64); 3] = [("201c1", "469a1", 11), ("37a1", "1406g1", 11), ("82a1", "902a1", 3)];

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub fn curve(label: &str) -> Curve {
    embedded(label).unwrap()
}

pub fn pair(a: &str, b: &str) -> CongruencePair {
    let (c1, c2) = (curve(a), curve(b));
    CongruencePair::new(&c1.model, &c2.model, &c1.inputs, &c2.inputs, P, DEFAULT_SCAN_BOUND).unwrap()
}

fn terms(pr: &CongruencePair, i: usize) -> Vec<i64> {
    pr.phi[i].terms.iter().map(|t| t.term).collect()
}

fn chis(pr: &CongruencePair) -> [u32; 2] {
    [pr.chi_gamma[0].chi_valuation, pr.chi_gamma[1].chi_valuation]
}

fn phis(pr: &CongruencePair) -> [u32; 2] {
    [pr.phi[0].phi_valuation, pr.phi[1].phi_valuation]
}

pub fn criterion_1() -> Check {
    let pr = pair("201c1", "469a1");
    ensure!(pr.sigma.primes == [3, 7, 67], "Σ0 = {:?}", pr.sigma.primes);
    ensure!(terms(&pr, 0) == [4, 11, 68], "201c1 terms {:?}", terms(&pr, 0));
    ensure!(terms(&pr, 1) == [3, 8, 68], "469a1 terms {:?}", terms(&pr, 1));
    ensure!(phis(&pr) == [0, 0], "Φ valuations {:?}", phis(&pr));
    ensure!(pr.phi.iter().all(|r| r.star_satisfied), "(★) fails");
    ensure!(chis(&pr) == [0, 0], "χ valuations {:?}", chis(&pr));
    let verdicts = [
        pr.gamma_verdict(),
        pr.bsd_verdict().map_err(|e| e.to_string())?,
        pr.false_tate_verdict(11).map_err(|e| e.to_string())?,
        pr.gl2_verdict().map_err(|e| e.to_string())?,
    ];
    for v in &verdicts {
        ensure!(v.holds(), "{:?} verdict fails: {v:?}", v.theorem);
        ensure!(
            (v.left, v.right) == (0, 0),
            "{:?} valuations {} {}",
            v.theorem,
            v.left,
            v.right
        );
    }
    Ok(())
}

pub fn criterion_2() -> Check {
    let pr = pair("37a1", "1406g1");
    ensure!(pr.sigma.primes == [2, 19, 37], "Σ0 = {:?}", pr.sigma.primes);
    ensure!(terms(&pr, 0) == [5, 20, 38], "37a1 terms {:?}", terms(&pr, 0));
    ensure!(terms(&pr, 1) == [1, 18, 38], "1406g1 terms {:?}", terms(&pr, 1));
    ensure!(phis(&pr) == [2, 0], "Φ valuations {:?}", phis(&pr));
    let tau = tamagawa_product(&pr.e[1]).map_err(|e| e.to_string())?;
    ensure!(tau == 150, "τ(1406g1) = {tau}");
    ensure!(
        pr.chi_gamma[1].breakdown.tamagawa == 2,
        "v5(τ) = {}",
        pr.chi_gamma[1].breakdown.tamagawa
    );
    ensure!(chis(&pr) == [0, 2], "χ valuations {:?}", chis(&pr));
    let g = pr.gamma_verdict();
    ensure!(
        (g.left, g.right) == (2, 2) && g.holds(),
        "Φχ valuations {} {}",
        g.left,
        g.right
    );
    let gl2 = pr.gl2_verdict().map_err(|e| e.to_string())?;
    ensure!(
        gl2.chi_valuations == [0, 2],
        "GL2 χ valuations {:?}",
        gl2.chi_valuations
    );
    Ok(())
}

pub fn criterion_3() -> Check {
    let pr = pair("82a1", "902a1");
    ensure!(phis(&pr) == [0, 0], "Φ valuations {:?}", phis(&pr));
    ensure!(pr.phi.iter().all(|r| r.star_satisfied), "(★) fails");
    ensure!(chis(&pr) == [1, 3], "χ valuations {:?}", chis(&pr));
    let g = pr.gamma_verdict();
    ensure!(g.biconditional_holds && g.left > 0 && g.right > 0, "verdict {g:?}");
    let gl2 = pr.gl2_verdict().map_err(|e| e.to_string())?;
    ensure!(
        gl2.chi_valuations == [1, 3],
        "GL2 χ valuations {:?}",
        gl2.chi_valuations
    );
    Ok(())
}

/// Euler's criterion, independent of the library's square tables.
fn legendre_oracle(a: u64, l: u64) -> i64 {
    let a = a % l;
    if a == 0 {
        return 0;
    }
    let (mut base, mut e, mut acc) = (a as u128, (l - 1) / 2, 1u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % l as u128;
        }
        base = base * base % l as u128;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

fn residue(n: &BigInt, l: u64) -> u64 {
    let m = BigInt::from(l);
    let r: BigInt = ((n % &m) + &m) % &m;
    r.try_into().unwrap()
}

/// `#E~(F_l)` from `Σ_x (1 + ((a1 x + a3)^2 + 4 f(x) | l))`, or brute force at 2.
pub fn oracle_count(e: &CurveModel, l: u64) -> u64 {
    let a: Vec<u64> = e.ainvs().iter().map(|c| residue(c, l)).collect();
    let (a1, a2, a3, a4, a6) = (a[0], a[1], a[2], a[3], a[4]);
    if l == 2 {
        let mut n = 1;
        for x in 0..2u64 {
            for y in 0..2u64 {
                if (y * y + a1 * x * y + a3 * y + x * x * x + a2 * x * x + a4 * x + a6) % 2 == 0 {
                    n += 1;
                }
            }
        }
        return n;
    }
    let l128 = l as u128;
    let mut total: i64 = l as i64 + 1;
    for x in 0..l {
        let x = x as u128;
        let f = (x * x % l128 * x + a2 as u128 * x % l128 * x + a4 as u128 * x + a6 as u128) % l128;
        let lin = (a1 as u128 * x + a3 as u128) % l128;
        let d = (lin * lin + 4 * f) % l128;
        total += legendre_oracle(d as u64, l);
    }
    total as u64
}

pub fn criterion_4() -> Check {
    for label in embedded_labels() {
        let c = curve(&label);
        let bad = bad_primes(&c.model).unwrap();
        for l in primes_up_to(1000).into_iter().filter(|l| !bad.contains(l)) {
            let (n, a) = count_points(&c.model, l).map_err(|e| format!("{label} at {l}: {e}"))?;
            let oracle = oracle_count(&c.model, l);
            ensure!(n == oracle, "{label} at {l}: count {n}, oracle {oracle}");
            ensure!(a * a <= 4 * l as i64, "{label} at {l}: Hasse bound fails for a_l = {a}");
        }
    }
    Ok(())
}

pub fn criterion_5() -> Check {
    for (a, b, _) in PAIRS {
        let (c1, c2) = (curve(a), curve(b));
        let mut skip = bad_primes(&c1.model).unwrap();
        skip.extend(bad_primes(&c2.model).unwrap());
        skip.push(P);
        let mut checked = 0;
        for l in primes_up_to(1000).into_iter().filter(|l| !skip.contains(l)) {
            let a1 = l as i64 + 1 - oracle_count(&c1.model, l) as i64;
            let a2 = l as i64 + 1 - oracle_count(&c2.model, l) as i64;
            ensure!((a1 - a2) % P as i64 == 0, "{a}/{b}: a_{l} = {a1}, {a2}");
            checked += 1;
        }
        let scan = residual_congruence_scan(&c1.model, &c2.model, P, 1000).map_err(|e| e.to_string())?;
        ensure!(scan.ok && scan.primes_checked == checked, "{a}/{b}: scan {scan:?}");
    }
    let (c1, c2) = (curve("37a1"), curve("201c1"));
    match CongruencePair::new(&c1.model, &c2.model, &c1.inputs, &c2.inputs, P, DEFAULT_SCAN_BOUND) {
        Err(Error::HypothesisFailed { witnesses, .. }) => {
            ensure!(witnesses.contains(&2), "37a1/201c1 witnesses {witnesses:?}");
        }
        other => return Err(format!("37a1/201c1 not refused: {:?}", other.map(|_| ()))),
    }
    Ok(())
}

pub fn cfg() -> PrecisionConfig {
    PrecisionConfig::default()
}

/// A series with prescribed `(μ, λ)`: coefficients below `λ` are divisible
/// by `p^(μ+1)`, the one at `λ` has valuation exactly `μ`.
pub fn random_series(rng: &mut ChaCha8Rng, p: u64, mu: u32, lambda: usize) -> IwasawaSeries {
    let c = cfg();
    let pm = BigInt::from(p).pow(mu);
    let coeffs: Vec<BigInt> = (0..=c.series_degree)
        .map(|k| {
            let r: u64 = rng.gen();
            let mut v = BigInt::from(r);
            if k < lambda {
                v *= p;
            } else if k == lambda {
                v = v * p + rng.gen_range(1..p);
            }
            v * &pm
        })
        .collect();
    IwasawaSeries::with_config(p, &c, &coeffs)
}

fn recombination_ok(f: &IwasawaSeries) -> Check {
    let w = weierstrass_prepare(f).map_err(|e| e.to_string())?;
    let r = w.recombine();
    let digits = f.precision() - 2;
    let modulus = BigInt::from(f.prime()).pow(digits);
    for k in 0..=f.degree() - w.lambda {
        let d: BigInt = (r.coeff(k) - f.coeff(k)) % &modulus;
        ensure!(d == BigInt::from(0), "recombination differs at T^{k}");
    }
    let dist = &w.distinguished;
    ensure!(
        dist.coeff(w.lambda) == &BigInt::from(1),
        "distinguished part is not monic"
    );
    ensure!(
        (0..w.lambda).all(|k| dist.coeff(k) % BigInt::from(f.prime()) == BigInt::from(0)),
        "distinguished part is not distinguished"
    );
    Ok(())
}

fn at_zero_oracle(l: u64, beta: i64, a_l: i64, p: u64) -> PadicNumber {
    let q = BigRational::new(BigInt::from(l as i64 + beta - a_l), BigInt::from(l));
    PadicNumber::from_rational(&q, p, cfg().digits)
}

/// Series checks over `count` random series plus the local series of every
/// golden curve at every prime of its pair's `Σ0`.
pub fn criterion_6(count: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let p = [5u64, 7, 11][i % 3];
        let (mu, lambda) = (rng.gen_range(0..=2u32), rng.gen_range(0..=6usize));
        let f = random_series(&mut rng, p, mu, lambda);
        ensure!(
            mu_lambda(&f) == Ok((mu, lambda)),
            "series {i}: μ, λ = {:?}",
            mu_lambda(&f)
        );
        recombination_ok(&f).map_err(|e| format!("series {i}: {e}"))?;

        let (mu2, lambda2) = (rng.gen_range(0..=2u32), rng.gen_range(0..=6usize));
        let g = random_series(&mut rng, p, mu2, lambda2);
        let fg = f.mul(&g).unwrap();
        ensure!(
            mu_lambda(&fg) == Ok((mu + mu2, lambda + lambda2)),
            "series {i}: product invariants {:?}",
            mu_lambda(&fg)
        );

        // T^g h(T): the leading value is h(0), a unit exactly when λ = g and μ = 0,
        // and that does not change under a perturbation divisible by p.
        let order = rng.gen_range(0..=3usize);
        let (hmu, hlambda) = (rng.gen_range(0..=1u32), rng.gen_range(0..=1usize));
        let h = random_series(&mut rng, p, hmu, hlambda);
        let tg = IwasawaSeries::t_power(p, &cfg(), order).mul(&h).unwrap();
        let lead = leading_after_tg(&tg, order).map_err(|e| e.to_string())?;
        ensure!(
            lead.congruent(&h.at_zero(), cfg().digits as i64),
            "series {i}: leading value is not h(0)"
        );
        let (tmu, tlambda) = mu_lambda(&tg).unwrap();
        ensure!(
            lead.is_unit() == (tmu == 0 && tlambda == order),
            "series {i}: unit test disagrees with (μ, λ)"
        );
        let noise = random_series(&mut rng, p, 1, 0);
        let tg2 = tg
            .add(&IwasawaSeries::t_power(p, &cfg(), order).mul(&noise).unwrap())
            .unwrap();
        let lead2 = leading_after_tg(&tg2, order).map_err(|e| e.to_string())?;
        ensure!(
            lead.is_unit() == lead2.is_unit(),
            "series {i}: unit condition not stable mod p"
        );
        if order > 0 && !h.at_zero().is_zero() {
            ensure!(
                leading_after_tg(&tg, order + 1).is_err(),
                "series {i}: order misdetected"
            );
        }
    }

    for (a, b, _) in PAIRS {
        let (c1, c2) = (curve(a), curve(b));
        let sigma = sigma_zero(&c1.model, Some(&c2.model), P).unwrap();
        for c in [&c1, &c2] {
            let mut locals = Vec::new();
            let mut sigma_sum = 0;
            for &l in &sigma.primes {
                let d = local_data(&c.model, l).unwrap();
                let beta = i64::from(d.reduction.is_good());
                let pl = local_char_series(l, d.a_l, d.reduction, P, &cfg()).map_err(|e| e.to_string())?;
                let oracle = at_zero_oracle(l, beta, d.a_l, P);
                ensure!(
                    pl.at_zero().congruent(&oracle, 18),
                    "{} at {l}: P_l(0) differs from (l+β-a_l)/l",
                    c.model.label()
                );
                let s = sigma_invariant(&pl).map_err(|e| e.to_string())?;
                sigma_sum += s;
                locals.push(pl);
            }
            if locals.len() >= 2 {
                let prod = locals[0].mul(&locals[1]).unwrap();
                let s = sigma_invariant(&prod).map_err(|e| e.to_string())?;
                let expected = sigma_invariant(&locals[0]).unwrap() + sigma_invariant(&locals[1]).unwrap();
                ensure!(s == expected, "{}: σ not additive", c.model.label());
            }
            let flambda = rng.gen_range(0..=4usize);
            let f = random_series(&mut rng, P, 0, flambda);
            let (_, lambda) = mu_lambda(&f).unwrap();
            let imp = imprimitive_product(&f, &locals).unwrap();
            let (imu, ilambda) = mu_lambda(&imp).unwrap();
            ensure!(
                imu == 0 && ilambda == lambda + sigma_sum,
                "{}: λ_Σ0 = {ilambda}, λ + Σσ = {}",
                c.model.label(),
                lambda + sigma_sum
            );
        }
    }
    Ok(())
}

fn swapped(v: &CongruenceVerdict) -> (u32, u32, bool) {
    (v.right, v.left, v.holds())
}

pub fn criterion_7() -> Check {
    for label in embedded_labels() {
        let c = curve(&label);
        for res in [
            chi_t_gamma(&c.model, &c.inputs, P),
            chi_t_gl2(&c.model, &c.inputs, P),
            chi_t_false_tate(&c.model, &c.inputs, 13, P),
        ] {
            let r = res.map_err(|e| format!("{label}: {e}"))?;
            ensure!(r.breakdown.total() >= 0, "{label}: negative valuation");
            ensure!(
                r.breakdown.total() == r.chi_valuation as i64,
                "{label}: breakdown does not sum"
            );
        }
    }
    for (a, b, m) in PAIRS {
        let fwd = pair(a, b);
        let rev = pair(b, a);
        for pr in [&fwd, &rev] {
            let g = pr.gamma_verdict();
            let bsd = pr.bsd_verdict().map_err(|e| e.to_string())?;
            ensure!(
                (g.left, g.right, g.holds()) == (bsd.left, bsd.right, bsd.holds()),
                "{a}/{b}: cyclotomic and ρ_p verdicts differ"
            );
        }
        let pairs = [
            (fwd.gamma_verdict(), rev.gamma_verdict()),
            (fwd.bsd_verdict().unwrap(), rev.bsd_verdict().unwrap()),
            (fwd.false_tate_verdict(m).unwrap(), rev.false_tate_verdict(m).unwrap()),
            (fwd.gl2_verdict().unwrap(), rev.gl2_verdict().unwrap()),
        ];
        for (x, y) in &pairs {
            ensure!(
                (x.left, x.right, x.holds()) == swapped(y),
                "{a}/{b}: {:?} not symmetric",
                x.theorem
            );
        }
    }
    Ok(())
}
