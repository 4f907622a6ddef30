//! Tate's algorithm: Kodaira symbol, Tamagawa number and conductor exponent
//! of a curve at a prime, together with a model minimal at that prime.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::model::CurveModel;
use super::ReductionType;
use crate::arith::{cubic_root_count, inv_mod, modulo, pow_big, quadratic_has_root, val_int};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Kodaira {
    /// `I_n`; `I_0` is good reduction.
    I(u32),
    II,
    III,
    IV,
    /// `I_n^*`.
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl Kodaira {
    /// PARI's integer encoding, used by reference tables.
    pub fn pari_code(self) -> i64 {
        match self {
            Kodaira::I(0) => 1,
            Kodaira::I(n) => 4 + n as i64,
            Kodaira::II => 2,
            Kodaira::III => 3,
            Kodaira::IV => 4,
            Kodaira::IStar(n) => -1 - if n == 0 { 0 } else { 3 + n as i64 },
            Kodaira::IVStar => -4,
            Kodaira::IIIStar => -3,
            Kodaira::IIStar => -2,
        }
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::IStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

impl FromStr for Kodaira {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "II" => Kodaira::II,
            "III" => Kodaira::III,
            "IV" => Kodaira::IV,
            "IV*" => Kodaira::IVStar,
            "III*" => Kodaira::IIIStar,
            "II*" => Kodaira::IIStar,
            _ => {
                let bad = || Error::Schema(format!("unknown Kodaira symbol {s:?}"));
                let rest = s.strip_prefix('I').ok_or_else(bad)?;
                match rest.strip_suffix('*') {
                    Some(n) => Kodaira::IStar(n.parse().map_err(|_| bad())?),
                    None => Kodaira::I(rest.parse().map_err(|_| bad())?),
                }
            }
        })
    }
}

impl From<Kodaira> for String {
    fn from(k: Kodaira) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for Kodaira {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

/// Output of Tate's algorithm at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateResult {
    /// Model minimal at the prime (the input, possibly scaled down).
    pub minimal: CurveModel,
    pub kodaira: Kodaira,
    pub reduction: ReductionType,
    pub tamagawa: u32,
    pub conductor_exponent: u32,
    /// `v_l` of the minimal discriminant.
    pub disc_valuation: u32,
}

fn v(x: &BigInt, p: u64) -> u32 {
    val_int(x, p).unwrap_or(u32::MAX)
}

fn divides(x: &BigInt, p: u64) -> bool {
    v(x, p) >= 1
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// Residue of `a / b` modulo `p` as an integer in `[0, p)`.
fn residue_div(a: &BigInt, b: &BigInt, p: u64) -> BigInt {
    let pb = big(p);
    let inv = inv_mod(b, &pb).expect("divisor is a unit mod p");
    modulo(&(a * inv), &pb)
}

/// First `k` in `[0, p)` for which `ok(k)` holds. Used at `p = 2, 3`, where
/// the closed-form translations divide by 2 or 3.
fn search(p: u64, mut ok: impl FnMut(&BigInt) -> bool) -> BigInt {
    (0..p)
        .map(big)
        .find(|k| ok(k))
        .expect("Tate's algorithm: a translation exists at every step")
}

fn exact_div(x: &BigInt, p: u64, e: u32) -> BigInt {
    let d = pow_big(p, e);
    debug_assert!((x % &d).is_zero(), "{x} not divisible by {p}^{e}");
    x / d
}

/// Runs Tate's algorithm at the prime `p` on any integral model.
pub fn tate(e: &CurveModel, p: u64) -> TateResult {
    let mut e = e.clone();
    let pb = big(p);
    let zero = BigInt::zero();
    loop {
        let start = e.clone();
        let vd = v(e.discriminant(), p);
        if vd == 0 {
            return TateResult {
                minimal: start,
                kodaira: Kodaira::I(0),
                reduction: ReductionType::Good,
                tamagawa: 1,
                conductor_exponent: 0,
                disc_valuation: 0,
            };
        }

        // move the singular point of the reduction to (0, 0)
        e = if p >= 5 {
            let [b2, _, _, _] = e.binvs().clone();
            let (c4, c6) = (e.c4().clone(), e.c6().clone());
            let r = if divides(&c4, p) {
                residue_div(&-&b2, &big(12), p)
            } else {
                residue_div(&-(&c6 + &b2 * &c4), &(12 * &c4), p)
            };
            let t = residue_div(&-(e.a1() * &r + e.a3()), &big(2), p);
            e.rst(&r, &zero, &t)
        } else {
            let mut found = None;
            'outer: for x in 0..p {
                for y in 0..p {
                    let f = e.rst(&big(x), &zero, &big(y));
                    if divides(f.a3(), p) && divides(f.a4(), p) && divides(f.a6(), p) {
                        found = Some(f);
                        break 'outer;
                    }
                }
            }
            found.expect("reduction has a singular point")
        };
        debug_assert!(divides(e.a3(), p) && divides(e.a4(), p) && divides(e.a6(), p));

        let [_, _, b6, b8] = e.binvs().clone();

        if !divides(e.c4(), p) {
            let split = quadratic_has_root(&big(1), e.a1(), &-e.a2(), p);
            let (reduction, tamagawa) = if split {
                (ReductionType::SplitMultiplicative, vd)
            } else {
                (
                    ReductionType::NonsplitMultiplicative,
                    if vd.is_multiple_of(2) { 2 } else { 1 },
                )
            };
            return TateResult {
                minimal: start,
                kodaira: Kodaira::I(vd),
                reduction,
                tamagawa,
                conductor_exponent: 1,
                disc_valuation: vd,
            };
        }

        let additive = |kodaira, tamagawa, f| TateResult {
            minimal: start.clone(),
            kodaira,
            reduction: ReductionType::Additive,
            tamagawa,
            conductor_exponent: f,
            disc_valuation: vd,
        };

        if v(e.a6(), p) < 2 {
            return additive(Kodaira::II, 1, vd);
        }
        if v(&b8, p) < 3 {
            return additive(Kodaira::III, 2, vd - 1);
        }
        if v(&b6, p) < 3 {
            let c = if quadratic_has_root(&big(1), &exact_div(e.a3(), p, 1), &-exact_div(e.a6(), p, 2), p) {
                3
            } else {
                1
            };
            return additive(Kodaira::IV, c, vd - 2);
        }

        // now arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
        let normalized = |f: &CurveModel| {
            v(f.a1(), p) >= 1 && v(f.a2(), p) >= 1 && v(f.a3(), p) >= 2 && v(f.a4(), p) >= 2 && v(f.a6(), p) >= 3
        };
        e = if p >= 5 {
            let s = residue_div(&-e.a1(), &big(2), p);
            let t = &pb * residue_div(&-exact_div(e.a3(), p, 1), &big(2), p);
            e.rst(&zero, &s, &t)
        } else {
            let mut found = None;
            'outer: for s in 0..p {
                for k in 0..p {
                    let f = e.rst(&zero, &big(s), &(&pb * big(k)));
                    if normalized(&f) {
                        found = Some(f);
                        break 'outer;
                    }
                }
            }
            found.expect("normalizing translation exists")
        };
        debug_assert!(normalized(&e));

        let b = exact_div(e.a2(), p, 1);
        let c = exact_div(e.a4(), p, 2);
        let d = exact_div(e.a6(), p, 3);
        let w = 27 * &d * &d - &b * &b * &c * &c + 4 * &b * &b * &b * &d - 18 * &b * &c * &d + 4 * &c * &c * &c;
        let x = 3 * &c - &b * &b;
        let sw = if !divides(&w, p) {
            1
        } else if !divides(&x, p) {
            2
        } else {
            3
        };

        if sw == 1 {
            let roots = cubic_root_count(&b, &c, &d, p) as u32;
            return additive(Kodaira::IStar(0), 1 + roots, vd - 4);
        }

        if sw == 2 {
            // move the double root to 0
            e = if p >= 5 {
                let r1 = residue_div(&(&b * &c - 9 * &d), &(2 * &x), p);
                e.rst(&(&pb * r1), &zero, &zero)
            } else {
                let k = search(p, |k| {
                    let f = e.rst(&(&pb * k), &zero, &zero);
                    v(f.a4(), p) >= 3 && v(f.a6(), p) >= 4
                });
                e.rst(&(&pb * k), &zero, &zero)
            };
            let (mut ix, mut iy) = (3u32, 3u32);
            let tamagawa;
            loop {
                let a2t = exact_div(e.a2(), p, 1);
                let a3t = exact_div(e.a3(), p, iy - 1);
                let a6t = exact_div(e.a6(), p, ix + iy - 2);
                if divides(&(&a3t * &a3t + 4 * &a6t), p) {
                    let my = pow_big(p, iy - 1);
                    let t = if p >= 5 {
                        &my * residue_div(&-&a3t, &big(2), p)
                    } else {
                        let k = search(p, |k| {
                            let f = e.rst(&zero, &zero, &(&my * k));
                            v(f.a3(), p) >= iy && v(f.a6(), p) >= ix + iy - 1
                        });
                        &my * k
                    };
                    e = e.rst(&zero, &zero, &t);
                    iy += 1;
                    let a4t = exact_div(e.a4(), p, ix);
                    let a6t = exact_div(e.a6(), p, ix + iy - 2);
                    if divides(&(&a4t * &a4t - 4 * &a6t * &a2t), p) {
                        let mx = pow_big(p, ix - 1);
                        let r = if p >= 5 {
                            &mx * residue_div(&-&a4t, &(2 * &a2t), p)
                        } else {
                            let k = search(p, |k| {
                                let f = e.rst(&(&mx * k), &zero, &zero);
                                v(f.a4(), p) > ix && v(f.a6(), p) >= ix + iy - 1
                            });
                            &mx * k
                        };
                        e = e.rst(&r, &zero, &zero);
                        ix += 1;
                    } else {
                        tamagawa = if quadratic_has_root(&a2t, &a4t, &a6t, p) { 4 } else { 2 };
                        break;
                    }
                } else {
                    tamagawa = if quadratic_has_root(&big(1), &a3t, &-&a6t, p) {
                        4
                    } else {
                        2
                    };
                    break;
                }
            }
            let n = ix + iy - 5;
            return additive(Kodaira::IStar(n), tamagawa, vd - ix - iy + 1);
        }

        // triple root: move it to 0
        e = if p >= 5 {
            let r1 = residue_div(&-&b, &big(3), p);
            e.rst(&(&pb * r1), &zero, &zero)
        } else {
            let k = search(p, |k| {
                let f = e.rst(&(&pb * k), &zero, &zero);
                v(f.a2(), p) >= 2 && v(f.a4(), p) >= 3 && v(f.a6(), p) >= 4
            });
            e.rst(&(&pb * k), &zero, &zero)
        };
        let a3t = exact_div(e.a3(), p, 2);
        let a6t = exact_div(e.a6(), p, 4);
        if !divides(&(&a3t * &a3t + 4 * &a6t), p) {
            let c = if quadratic_has_root(&big(1), &a3t, &-&a6t, p) {
                3
            } else {
                1
            };
            return additive(Kodaira::IVStar, c, vd - 6);
        }
        let p2 = pow_big(p, 2);
        let t = if p >= 5 {
            &p2 * residue_div(&-&a3t, &big(2), p)
        } else {
            let k = search(p, |k| {
                let f = e.rst(&zero, &zero, &(&p2 * k));
                v(f.a3(), p) >= 3 && v(f.a6(), p) >= 5
            });
            &p2 * k
        };
        e = e.rst(&zero, &zero, &t);
        if v(e.a4(), p) < 4 {
            return additive(Kodaira::IIIStar, 2, vd - 7);
        }
        if v(e.a6(), p) < 6 {
            return additive(Kodaira::IIStar, 1, vd - 8);
        }
        e = e.scale_down(p).expect("non-minimal model scales down");
    }
}

/// Kodaira symbols determine the reduction only up to split/non-split; this
/// maps reduction type and Tate output to `a_l` for bad primes.
pub(crate) fn bad_a_l(reduction: ReductionType) -> i64 {
    match reduction {
        ReductionType::SplitMultiplicative => 1,
        ReductionType::NonsplitMultiplicative => -1,
        ReductionType::Additive => 0,
        ReductionType::Good => unreachable!("a_l at good primes comes from point counting"),
    }
}
