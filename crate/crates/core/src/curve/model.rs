use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{pow_big, prime_divisors};
use crate::error::{Error, Result};

/// Integral Weierstrass equation `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
/// with its standard invariants.
#[derive(Clone, PartialEq, Eq)]
pub struct CurveModel {
    label: String,
    a: [BigInt; 5],
    b: [BigInt; 4],
    c4: BigInt,
    c6: BigInt,
    disc: BigInt,
}

impl fmt::Debug for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CurveModel({:?}, [{}, {}, {}, {}, {}])",
            self.label, self.a[0], self.a[1], self.a[2], self.a[3], self.a[4]
        )
    }
}

impl CurveModel {
    pub fn new(label: impl Into<String>, ainvs: [BigInt; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = &ainvs;
        let b2: BigInt = a1 * a1 + 4 * a2;
        let b4: BigInt = 2 * a4 + a1 * a3;
        let b6: BigInt = a3 * a3 + 4 * a6;
        let b8: BigInt = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4: BigInt = &b2 * &b2 - 24 * &b4;
        let c6: BigInt = &b2 * &b4 * 36 - &b6 * 216 - &b2 * &b2 * &b2;
        let disc: BigInt = &b2 * &b4 * &b6 * 9 - &b2 * &b2 * &b8 - &b4 * &b4 * &b4 * 8 - &b6 * &b6 * 27;
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        debug_assert_eq!(&disc * 1728, &c4 * &c4 * &c4 - &c6 * &c6);
        Ok(CurveModel {
            label: label.into(),
            a: ainvs,
            b: [b2, b4, b6, b8],
            c4,
            c6,
            disc,
        })
    }

    pub fn from_i64s(label: impl Into<String>, ainvs: [i64; 5]) -> Result<Self> {
        Self::new(label, ainvs.map(BigInt::from))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `[a1, a2, a3, a4, a6]`.
    pub fn ainvs(&self) -> &[BigInt; 5] {
        &self.a
    }

    pub fn a1(&self) -> &BigInt {
        &self.a[0]
    }
    pub fn a2(&self) -> &BigInt {
        &self.a[1]
    }
    pub fn a3(&self) -> &BigInt {
        &self.a[2]
    }
    pub fn a4(&self) -> &BigInt {
        &self.a[3]
    }
    pub fn a6(&self) -> &BigInt {
        &self.a[4]
    }

    /// `[b2, b4, b6, b8]`.
    pub fn binvs(&self) -> &[BigInt; 4] {
        &self.b
    }

    pub fn c4(&self) -> &BigInt {
        &self.c4
    }

    pub fn c6(&self) -> &BigInt {
        &self.c6
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn j_invariant(&self) -> BigRational {
        BigRational::new(&self.c4 * &self.c4 * &self.c4, self.disc.clone())
    }

    /// Primes dividing the discriminant of this model.
    pub fn discriminant_primes(&self) -> Result<Vec<u64>> {
        prime_divisors(&self.disc)
    }

    /// Applies `[u; r, s, t]` with `u | ...` exact, i.e. `x = u^2 x' + r`,
    /// `y = u^3 y' + s u^2 x' + t`. Returns `None` if the result is not integral.
    pub fn transform(&self, u: &BigInt, r: &BigInt, s: &BigInt, t: &BigInt) -> Option<CurveModel> {
        let [a1, a2, a3, a4, a6] = &self.a;
        let n1 = a1 + 2 * s;
        let n2 = a2 - s * a1 + 3 * r - s * s;
        let n3 = a3 + r * a1 + 2 * t;
        let n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        let nums = [n1, n2, n3, n4, n6];
        let weights = [1u32, 2, 3, 4, 6];
        let mut out: [BigInt; 5] = Default::default();
        for (i, (n, w)) in nums.iter().zip(weights).enumerate() {
            let d = num_traits::pow(u.clone(), w as usize);
            if !(n % &d).is_zero() {
                return None;
            }
            out[i] = n / d;
        }
        Some(CurveModel::new(self.label.clone(), out).expect("isomorphic model is nonsingular"))
    }

    /// Translation `[1; r, s, t]`, always integral.
    pub fn rst(&self, r: &BigInt, s: &BigInt, t: &BigInt) -> CurveModel {
        self.transform(&BigInt::from(1), r, s, t)
            .expect("unit scaling is integral")
    }

    /// The model `a_i -> k^i a_i` (the change `[1/k; 0, 0, 0]`).
    pub fn scale_up(&self, k: &BigInt) -> CurveModel {
        let weights = [1u32, 2, 3, 4, 6];
        let mut out: [BigInt; 5] = Default::default();
        for (i, w) in weights.iter().enumerate() {
            out[i] = &self.a[i] * num_traits::pow(k.clone(), *w as usize);
        }
        CurveModel::new(self.label.clone(), out).expect("scaled model is nonsingular")
    }

    /// The model `a_i -> a_i / l^i`, if integral.
    pub(crate) fn scale_down(&self, l: u64) -> Option<CurveModel> {
        let weights = [1u32, 2, 3, 4, 6];
        let mut out: [BigInt; 5] = Default::default();
        for (i, w) in weights.iter().enumerate() {
            let d = pow_big(l, *w);
            if !(&self.a[i] % &d).is_zero() {
                return None;
            }
            out[i] = &self.a[i] / d;
        }
        Some(CurveModel::new(self.label.clone(), out).expect("scaled model is nonsingular"))
    }
}
