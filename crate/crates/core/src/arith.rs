//! Small integer helpers shared by the p-adic, curve and bookkeeping code.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn val_int(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// Valuation of a machine integer; `None` for zero.
pub fn val_i64(n: i64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut m = n.unsigned_abs();
    let mut v = 0;
    while m.is_multiple_of(p) {
        m /= p;
        v += 1;
    }
    Some(v)
}

/// Splits `n = p^v * w` with `p` not dividing `w`. Panics on zero.
pub fn split_power(n: &BigInt, p: u64) -> (u32, BigInt) {
    let v = val_int(n, p).expect("split_power of zero");
    (v, n / BigInt::from(p).pow(v))
}

pub fn pow_big(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

/// Least non-negative residue of `n` modulo `m` (m > 0).
pub fn modulo(n: &BigInt, m: &BigInt) -> BigInt {
    let r = n.mod_floor(m);
    debug_assert!(!r.is_negative());
    r
}

pub fn mod_u64(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let a = modulo(a, m);
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(modulo(&e.x, m))
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime via Fermat; `a` must be nonzero mod `p`.
pub fn inv_mod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic primality for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

/// Primes `2 <= q <= bound`, by sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Sorted distinct prime divisors of `|n|`. Zero has none.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    let m: BigUint = n.magnitude().clone();
    if m.is_zero() || m.is_one() {
        return Ok(Vec::new());
    }
    let mut primes: Vec<u64> = if let Some(small) = m.to_u128() {
        num_prime::nt_funcs::factorize128(small)
            .into_keys()
            .map(|q| {
                q.to_u64()
                    .ok_or_else(|| Error::Invariant(format!("prime factor {q} exceeds 64 bits")))
            })
            .collect::<Result<_>>()?
    } else {
        let (found, rest) = num_prime::nt_funcs::factors(m, None);
        if rest.is_some() {
            return Err(Error::Invariant(format!("could not fully factor {n}")));
        }
        found
            .into_keys()
            .map(|q| {
                q.to_u64()
                    .ok_or_else(|| Error::Invariant(format!("prime factor {q} exceeds 64 bits")))
            })
            .collect::<Result<_>>()?
    };
    primes.sort_unstable();
    Ok(primes)
}

/// Legendre symbol (a / p) for an odd prime p, returned as -1, 0 or 1.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Does `a x^2 + b x + c` have a root modulo the prime `p`?
pub fn quadratic_has_root(a: &BigInt, b: &BigInt, c: &BigInt, p: u64) -> bool {
    let (a, b, c) = (mod_u64(a, p), mod_u64(b, p), mod_u64(c, p));
    if p == 2 {
        return (0..2).any(|x| (a * x * x + b * x + c) % 2 == 0);
    }
    if a == 0 {
        return b != 0 || c == 0;
    }
    let disc = (mul_mod(b, b, p) + p - mul_mod(4 % p, mul_mod(a, c, p), p)) % p;
    legendre(disc, p) >= 0
}

/// Number of distinct roots of a monic cubic `x^3 + b x^2 + c x + d` modulo `p`.
pub fn cubic_root_count(b: &BigInt, c: &BigInt, d: &BigInt, p: u64) -> usize {
    let coeffs = [mod_u64(d, p), mod_u64(c, p), mod_u64(b, p), 1];
    if p <= 7 {
        return (0..p)
            .filter(|&x| {
                let mut acc = 0u64;
                for &k in coeffs.iter().rev() {
                    acc = (mul_mod(acc, x, p) + k) % p;
                }
                acc == 0
            })
            .count();
    }
    // deg gcd(f, x^p - x)
    let f = coeffs.to_vec();
    let xp = poly_powmod_x(p, &f, p);
    let mut g = xp;
    // subtract x
    if g.len() < 2 {
        g.resize(2, 0);
    }
    g[1] = (g[1] + p - 1) % p;
    let h = poly_gcd(f, g, p);
    h.len().saturating_sub(1)
}

fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
    a
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let m = poly_trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod_prime(m[dm], p);
    let mut r = a.to_vec();
    for dr in (dm..r.len()).rev() {
        let coef = mul_mod(r[dr], lead_inv, p);
        if coef == 0 {
            continue;
        }
        for (i, &mi) in m.iter().enumerate() {
            let idx = dr - dm + i;
            r[idx] = (r[idx] + p - mul_mod(coef, mi, p)) % p;
        }
    }
    r.truncate(dm);
    poly_trim(r)
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_rem(&out, m, p)
}

fn poly_powmod_x(mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(&[0, 1], m, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let mut a = poly_trim(a);
    let mut b = poly_trim(b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(val_int(&BigInt::from(150), 5), Some(2));
        assert_eq!(val_int(&BigInt::from(-250), 5), Some(3));
        assert_eq!(val_int(&BigInt::from(0), 5), None);
        assert_eq!(val_i64(38, 5), Some(0));
    }

    #[test]
    fn sieve_matches_primality() {
        let ps = primes_up_to(1000);
        assert_eq!(ps.len(), 168);
        for n in 0..1000u64 {
            assert_eq!(ps.binary_search(&n).is_ok(), is_prime(n), "{n}");
        }
    }

    #[test]
    fn factoring() {
        let d = BigInt::from(-1730960687104i64) * 41 * 11i64.pow(5);
        assert_eq!(prime_divisors(&d).unwrap(), vec![2, 11, 41]);
        assert!(prime_divisors(&BigInt::from(1)).unwrap().is_empty());
    }

    #[test]
    fn cubic_roots_brute_force() {
        for p in [11u64, 13, 101] {
            for b in 0..5i64 {
                for c in -3..3i64 {
                    for d in -4..4i64 {
                        let brute = (0..p)
                            .filter(|&x| {
                                let x = x as i64;
                                (x * x * x + b * x * x + c * x + d).rem_euclid(p as i64) == 0
                            })
                            .count();
                        let got = cubic_root_count(&BigInt::from(b), &BigInt::from(c), &BigInt::from(d), p);
                        assert_eq!(got, brute, "p={p} b={b} c={c} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn quadratic_roots() {
        let one = BigInt::from(1);
        // x^2 + 1 has roots mod 5 and 2 but not mod 7
        assert!(quadratic_has_root(&one, &BigInt::zero(), &one, 5));
        assert!(!quadratic_has_root(&one, &BigInt::zero(), &one, 7));
        assert!(quadratic_has_root(&one, &BigInt::zero(), &one, 2));
        // x^2 + x + 1 has no root mod 2
        assert!(!quadratic_has_root(&one, &one, &one, 2));
    }
}
