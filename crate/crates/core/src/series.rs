//! Truncated power series over Z_p, standing in for the Iwasawa algebra
//! `Z_p[[T]]`.
//!
//! A series is stored as coefficients `c_0..c_D`, each a residue modulo
//! `p^N`. Arithmetic is exact modulo `(p^N, T^{D+1})`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{inv_mod, mod_u64, modulo, pow_big, val_int};
use crate::curve::ReductionType;
use crate::error::{Error, Result};
use crate::padic::{check_prime, cyclotomic_exponent, PadicNumber, PrecisionConfig};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IwasawaSeries {
    prime: u64,
    precision: u32,
    coeffs: Vec<BigInt>,
}

impl IwasawaSeries {
    /// Builds a series from integer coefficients; missing high coefficients
    /// are zero, extra ones are truncated away.
    pub fn new(prime: u64, precision: u32, degree: usize, coeffs: &[BigInt]) -> Self {
        let m = pow_big(prime, precision);
        let mut c: Vec<BigInt> = coeffs.iter().take(degree + 1).map(|x| modulo(x, &m)).collect();
        c.resize(degree + 1, BigInt::zero());
        IwasawaSeries {
            prime,
            precision,
            coeffs: c,
        }
    }

    pub fn with_config(prime: u64, cfg: &PrecisionConfig, coeffs: &[BigInt]) -> Self {
        Self::new(prime, cfg.digits, cfg.series_degree, coeffs)
    }

    pub fn from_i64s(prime: u64, cfg: &PrecisionConfig, coeffs: &[i64]) -> Self {
        let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
        Self::with_config(prime, cfg, &c)
    }

    pub fn zero(prime: u64, cfg: &PrecisionConfig) -> Self {
        Self::with_config(prime, cfg, &[])
    }

    pub fn one(prime: u64, cfg: &PrecisionConfig) -> Self {
        Self::with_config(prime, cfg, &[BigInt::one()])
    }

    /// `T^g`.
    pub fn t_power(prime: u64, cfg: &PrecisionConfig, g: usize) -> Self {
        let mut c = vec![BigInt::zero(); g + 1];
        c[g] = BigInt::one();
        Self::with_config(prime, cfg, &c)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn modulus(&self) -> BigInt {
        pow_big(self.prime, self.precision)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime || self.precision != other.precision || self.coeffs.len() != other.coeffs.len() {
            return Err(Error::IncompatibleSeries(format!(
                "({}, {}, {}) vs ({}, {}, {})",
                self.prime,
                self.precision,
                self.degree(),
                other.prime,
                other.precision,
                other.degree()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| modulo(&(a + b), &m))
            .collect();
        Ok(IwasawaSeries { coeffs, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| modulo(&(a - b), &m))
            .collect();
        Ok(IwasawaSeries { coeffs, ..self.clone() })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.modulus();
        let d = self.degree();
        let mut out = vec![BigInt::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=d - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let coeffs = out.iter().map(|x| modulo(x, &m)).collect();
        Ok(IwasawaSeries { coeffs, ..self.clone() })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let m = self.modulus();
        let coeffs = self.coeffs.iter().map(|x| modulo(&(x * k), &m)).collect();
        IwasawaSeries { coeffs, ..self.clone() }
    }

    /// Constant term as a p-adic number (known to absolute precision `N`).
    pub fn at_zero(&self) -> PadicNumber {
        let c = &self.coeffs[0];
        let q = num_rational::BigRational::from_integer(c.clone());
        PadicNumber::from_rational_absolute(&q, self.prime, self.precision as i64)
    }
}

impl fmt::Debug for IwasawaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IwasawaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {}; {}; [", self.prime, self.precision, self.degree())?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for IwasawaSeries {
    type Err = Error;

    /// Parses `p; N; D; [c_0, c_1, ...]`. Fewer than `D+1` coefficients are
    /// padded with zeros; more is an error.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::SeriesParse(format!("{msg}: {s:?}"));
        let parts: Vec<&str> = s.splitn(4, ';').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(bad("expected `p; N; D; [coefficients]`"));
        }
        let p: u64 = parts[0].parse().map_err(|_| bad("bad prime"))?;
        let n: u32 = parts[1].parse().map_err(|_| bad("bad precision"))?;
        let d: usize = parts[2].parse().map_err(|_| bad("bad degree"))?;
        check_prime(p).map_err(|_| bad("prime must be >= 5"))?;
        if n == 0 {
            return Err(bad("precision must be positive"));
        }
        let body = parts[3]
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| bad("coefficients must be bracketed"))?;
        let coeffs: Vec<BigInt> = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|c| c.trim().parse::<BigInt>().map_err(|_| bad("bad coefficient")))
                .collect::<Result<_>>()?
        };
        if coeffs.len() > d + 1 {
            return Err(bad("more coefficients than the degree allows"));
        }
        Ok(IwasawaSeries::new(p, n, d, &coeffs))
    }
}

/// `f = p^μ · unit · distinguished`.
///
/// The unit and distinguished parts are known modulo `p^(N-μ)`; their
/// product times `p^μ` recovers the input modulo `(p^N, T^{D+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassDecomposition {
    pub mu: u32,
    pub lambda: usize,
    pub distinguished: IwasawaSeries,
    pub unit: IwasawaSeries,
}

impl WeierstrassDecomposition {
    /// `p^μ · unit · distinguished` at the original precision.
    pub fn recombine(&self) -> IwasawaSeries {
        let p = self.unit.prime;
        let n = self.unit.precision + self.mu;
        let prod = self.unit.mul(&self.distinguished).expect("parts share parameters");
        let pm = pow_big(p, self.mu);
        let coeffs: Vec<BigInt> = prod.coeffs.iter().map(|c| c * &pm).collect();
        IwasawaSeries::new(p, n, prod.degree(), &coeffs)
    }
}

/// `(μ, λ)` of a nonzero series.
pub fn mu_lambda(f: &IwasawaSeries) -> Result<(u32, usize)> {
    let p = f.prime;
    let mu = f
        .coeffs
        .iter()
        .filter_map(|c| val_int(c, p))
        .min()
        .ok_or(Error::PrecisionExhausted(f.precision))?;
    let lambda = f
        .coeffs
        .iter()
        .position(|c| val_int(c, p) == Some(mu))
        .expect("minimum is attained");
    Ok((mu, lambda))
}

/// Weierstrass preparation of a truncated series.
///
/// The truncation is a polynomial of degree `D`; its distinguished factor is
/// found by lifting `T^λ` one p-adic digit at a time: with `f = q·P + r`
/// (division by the monic `P`), the lowest digit `e` of `r` is cleared by
/// `P += p^j · (e/q mod (p, T^λ))`. The final quotient is the unit part and
/// the recombination is exact.
pub fn weierstrass_prepare(f: &IwasawaSeries) -> Result<WeierstrassDecomposition> {
    let (mu, lambda) = mu_lambda(f)?;
    let p = f.prime;
    let prec = f.precision - mu;
    let m = pow_big(p, prec);
    let pm = pow_big(p, mu);
    let fp: Vec<BigInt> = f.coeffs.iter().map(|c| modulo(&(c / &pm), &m)).collect();
    let d = f.degree();

    let mut poly = vec![BigInt::zero(); lambda + 1];
    poly[lambda] = BigInt::one();
    let mut rounds = 0;
    let (q, _) = loop {
        let (q, r) = divide_by_monic(&fp, &poly, &m);
        let j = match r.iter().filter_map(|c| val_int(c, p)).min() {
            None => break (q, r),
            Some(j) => j,
        };
        rounds += 1;
        if rounds > prec + 1 {
            return Err(Error::Invariant("Weierstrass lifting did not converge".into()));
        }
        let e: Vec<u64> = r.iter().map(|c| mod_u64(&(c / pow_big(p, j)), p)).collect();
        let delta = lower_quotient_mod_p(&e, &q, lambda, p);
        let pj = pow_big(p, j);
        for (k, dk) in delta.iter().enumerate() {
            poly[k] = modulo(&(&poly[k] + &pj * BigInt::from(*dk)), &m);
        }
    };

    Ok(WeierstrassDecomposition {
        mu,
        lambda,
        distinguished: IwasawaSeries::new(p, prec, d, &poly),
        unit: IwasawaSeries::new(p, prec, d, &q),
    })
}

/// Polynomial division of `f` by the monic `g` over `Z/m`.
fn divide_by_monic(f: &[BigInt], g: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let dg = g.len() - 1;
    let mut r: Vec<BigInt> = f.to_vec();
    if f.len() <= dg {
        return (vec![BigInt::zero()], r);
    }
    let mut q = vec![BigInt::zero(); f.len() - dg];
    for k in (dg..f.len()).rev() {
        let c = modulo(&r[k], m);
        if c.is_zero() {
            continue;
        }
        for (i, gi) in g.iter().enumerate() {
            let idx = k - dg + i;
            r[idx] = modulo(&(&r[idx] - &c * gi), m);
        }
        q[k - dg] = c;
    }
    r.truncate(dg);
    for x in r.iter_mut() {
        *x = modulo(x, m);
    }
    (q, r)
}

/// `e · q^{-1} mod (p, T^λ)` as residues in `[0, p)`.
fn lower_quotient_mod_p(e: &[u64], q: &[BigInt], lambda: usize, p: u64) -> Vec<u64> {
    let qb: Vec<u64> = (0..lambda).map(|k| q.get(k).map_or(0, |c| mod_u64(c, p))).collect();
    let pb = BigInt::from(p);
    let q0_inv = inv_mod(&BigInt::from(qb[0]), &pb).expect("unit part is a unit");
    let q0_inv = mod_u64(&q0_inv, p);
    let mut inv = vec![0u64; lambda];
    inv[0] = q0_inv;
    for k in 1..lambda {
        let s: u64 = (1..=k).fold(0, |acc, i| (acc + qb[i] * inv[k - i]) % p);
        inv[k] = (p - s) % p * q0_inv % p;
    }
    let mut out = vec![0u64; lambda];
    for (i, &ei) in e.iter().enumerate().take(lambda) {
        for k in 0..lambda - i {
            out[i + k] = (out[i + k] + ei * inv[k]) % p;
        }
    }
    out
}

/// `g_E(0)` for `f = T^g · g_E(T)`: the coefficient of `T^g`, after checking
/// that every lower coefficient vanishes.
pub fn leading_after_tg(f: &IwasawaSeries, g: usize) -> Result<PadicNumber> {
    if g > f.degree() {
        return Err(Error::IncompatibleSeries(format!(
            "order {g} exceeds the truncation degree {}",
            f.degree()
        )));
    }
    if let Some(index) = f.coeffs[..g].iter().position(|c| !c.is_zero()) {
        return Err(Error::OrderTooLow { index, required: g });
    }
    let c = num_rational::BigRational::from_integer(f.coeffs[g].clone());
    Ok(PadicNumber::from_rational_absolute(&c, f.prime, f.precision as i64))
}

/// Integer `E` with `E ≡ e (mod p^digits)` for an integral p-adic `e`.
fn integer_lift(e: &PadicNumber) -> BigInt {
    e.lift().expect("exponent is integral")
}

/// `(1+T)^E` to degree `D` modulo `p^N`, for an integer `E ≥ 0`.
///
/// `C(E, k)` depends on `E` modulo `p^(N + v_p(k!))`, which the caller
/// guarantees by lifting the exponent with enough extra digits.
fn binomial_series(exp: &BigInt, degree: usize, m: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(degree + 1);
    let mut c = BigInt::one();
    out.push(c.clone());
    for k in 1..=degree {
        c = c * (exp - (k as i64 - 1)) / BigInt::from(k);
        out.push(modulo(&c, m));
    }
    out
}

fn factorial_valuation(d: usize, p: u64) -> u32 {
    let mut v = 0;
    let mut q = p as usize;
    while q <= d {
        v += (d / q) as u32;
        q *= p as usize;
    }
    v
}

/// The local series
/// `P_l(T) = 1 - a_l l^{-1} (1+T)^{e_l} + [good] l^{-1} (1+T)^{2 e_l}`,
/// where `(1+p)^{e_l} = <l>`.
pub fn local_char_series(
    l: u64,
    a_l: i64,
    reduction: ReductionType,
    p: u64,
    cfg: &PrecisionConfig,
) -> Result<IwasawaSeries> {
    check_prime(p)?;
    if l == p {
        return Err(Error::InconsistentInput(format!(
            "local series requested at l = p = {p}"
        )));
    }
    let d = cfg.series_degree;
    let digits = cfg.digits + factorial_valuation(d, p) + 2;
    let e = cyclotomic_exponent(l, p, digits)?;
    let exp = integer_lift(&e);
    let m = pow_big(p, cfg.digits);

    let l_inv = inv_mod(&BigInt::from(l), &m).expect("l is prime to p");
    let linear = binomial_series(&exp, d, &m);
    let mut coeffs: Vec<BigInt> = linear.iter().map(|c| -(c * BigInt::from(a_l) * &l_inv)).collect();
    coeffs[0] += 1;
    if reduction.is_good() {
        let quad = binomial_series(&(&exp * 2), d, &m);
        for (c, q) in coeffs.iter_mut().zip(&quad) {
            *c += q * &l_inv;
        }
    }
    Ok(IwasawaSeries::with_config(p, cfg, &coeffs))
}

/// `σ^{(l)} = λ(P_l)`.
///
/// `P_l` always has `μ = 0`; a positive μ here means the truncation degree
/// is too small to see the first unit coefficient, reported as precision
/// exhaustion.
pub fn sigma_invariant(local: &IwasawaSeries) -> Result<usize> {
    let (mu, lambda) = mu_lambda(local)?;
    if mu > 0 {
        return Err(Error::PrecisionExhausted(local.precision));
    }
    Ok(lambda)
}

/// `f · ∏ P_l`.
pub fn imprimitive_product(f: &IwasawaSeries, locals: &[IwasawaSeries]) -> Result<IwasawaSeries> {
    locals.iter().try_fold(f.clone(), |acc, pl| acc.mul(pl))
}

/// Is the series congruent to zero modulo `p`?
pub fn vanishes_mod_p(f: &IwasawaSeries) -> bool {
    let p = BigInt::from(f.prime);
    f.coeffs.iter().all(|c| c.is_multiple_of(&p))
}
