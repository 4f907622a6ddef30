//! Arithmetic of the reduction `E~(F_l)`: point counts and the group law.

use num_bigint::BigInt;

use crate::arith::{inv_mod_prime, mod_u64, mul_mod};

/// A Weierstrass equation over `F_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedCurve {
    pub l: u64,
    pub a: [u64; 5],
}

/// A point of `E~(F_l)`; `None` is the point at infinity.
pub type FpPoint = Option<(u64, u64)>;

impl ReducedCurve {
    pub fn new(ainvs: &[BigInt; 5], l: u64) -> Self {
        ReducedCurve {
            l,
            a: [0, 1, 2, 3, 4].map(|i| mod_u64(&ainvs[i], l)),
        }
    }

    fn add_m(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.l
    }

    fn sub_m(&self, x: u64, y: u64) -> u64 {
        (x + self.l - y % self.l) % self.l
    }

    fn mul_m(&self, x: u64, y: u64) -> u64 {
        mul_mod(x, y, self.l)
    }

    /// `#E~(F_l)` by enumeration, including the point at infinity.
    ///
    /// For odd `l` the equation is completed to `(2y + a1 x + a3)^2 = g(x)`
    /// and each `x` contributes the number of square roots of `g(x)`.
    pub fn count(&self) -> u64 {
        let l = self.l;
        let [a1, a2, a3, a4, a6] = self.a;
        if l == 2 {
            let mut n = 1;
            for x in 0..2 {
                for y in 0..2 {
                    let lhs = y * y + a1 * x * y + a3 * y;
                    let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                    if (lhs + rhs) % 2 == 0 {
                        n += 1;
                    }
                }
            }
            return n;
        }
        let mut roots = vec![0u32; l as usize];
        for w in 0..l {
            roots[mul_mod(w, w, l) as usize] += 1;
        }
        let b2 = self.add_m(self.mul_m(a1, a1), self.mul_m(4, a2));
        let b4 = self.add_m(self.mul_m(2, a4), self.mul_m(a1, a3));
        let b6 = self.add_m(self.mul_m(a3, a3), self.mul_m(4, a6));
        let (c3, c2, c1) = (4 % l, b2, self.mul_m(2, b4));
        let mut n: u64 = 1;
        for x in 0..l {
            let g = self.add_m(
                self.mul_m(self.add_m(self.mul_m(self.add_m(self.mul_m(c3, x), c2), x), c1), x),
                b6,
            );
            n += roots[g as usize] as u64;
        }
        n
    }

    /// All affine points, in increasing `x` then `y`.
    pub fn points(&self) -> Vec<(u64, u64)> {
        let l = self.l;
        let [a1, a2, a3, a4, a6] = self.a;
        let mut out = Vec::new();
        if l == 2 {
            for x in 0..2 {
                for y in 0..2 {
                    let lhs = y * y + a1 * x * y + a3 * y;
                    let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                    if (lhs + rhs) % 2 == 0 {
                        out.push((x, y));
                    }
                }
            }
            return out;
        }
        let mut sqrt: Vec<Option<u64>> = vec![None; l as usize];
        for w in 0..=l / 2 {
            sqrt[mul_mod(w, w, l) as usize] = Some(w);
        }
        let half = inv_mod_prime(2, l);
        for x in 0..l {
            let rhs = self.add_m(self.mul_m(self.add_m(self.mul_m(self.add_m(x, a2), x), a4), x), a6);
            let lin = self.add_m(self.mul_m(a1, x), a3);
            // y^2 + lin*y - rhs = 0  <=>  (2y + lin)^2 = lin^2 + 4 rhs
            let disc = self.add_m(self.mul_m(lin, lin), self.mul_m(4, rhs));
            if let Some(w) = sqrt[disc as usize] {
                let mut ys = vec![self.mul_m(self.sub_m(w, lin), half)];
                if w != 0 {
                    ys.push(self.mul_m(self.sub_m(l - w, lin), half));
                }
                ys.sort_unstable();
                out.extend(ys.into_iter().map(|y| (x, y)));
            }
        }
        out
    }

    pub fn is_on_curve(&self, p: FpPoint) -> bool {
        let Some((x, y)) = p else { return true };
        let [a1, a2, a3, a4, a6] = self.a;
        let lhs = self.add_m(
            self.mul_m(y, y),
            self.add_m(self.mul_m(self.mul_m(a1, x), y), self.mul_m(a3, y)),
        );
        let rhs = self.add_m(self.mul_m(self.add_m(self.mul_m(self.add_m(x, a2), x), a4), x), a6);
        lhs == rhs
    }

    pub fn neg(&self, p: FpPoint) -> FpPoint {
        let (x, y) = p?;
        let [a1, _, a3, _, _] = self.a;
        Some((x, self.sub_m(self.sub_m(0, y), self.add_m(self.mul_m(a1, x), a3))))
    }

    pub fn add(&self, p: FpPoint, q: FpPoint) -> FpPoint {
        let Some((x1, y1)) = p else { return q };
        let Some((x2, y2)) = q else { return p };
        let [a1, a2, a3, a4, a6] = self.a;
        let (lambda, nu) = if x1 == x2 {
            let den = self.add_m(self.add_m(self.add_m(y1, y2), self.mul_m(a1, x2)), a3);
            if den == 0 {
                return None;
            }
            let inv = inv_mod_prime(den, self.l);
            let num = self.sub_m(
                self.add_m(
                    self.add_m(self.mul_m(3, self.mul_m(x1, x1)), self.mul_m(self.mul_m(2, a2), x1)),
                    a4,
                ),
                self.mul_m(a1, y1),
            );
            let nnum = self.sub_m(
                self.add_m(
                    self.add_m(self.sub_m(0, self.mul_m(self.mul_m(x1, x1), x1)), self.mul_m(a4, x1)),
                    self.mul_m(2, a6),
                ),
                self.mul_m(a3, y1),
            );
            (self.mul_m(num, inv), self.mul_m(nnum, inv))
        } else {
            let inv = inv_mod_prime(self.sub_m(x2, x1), self.l);
            let lambda = self.mul_m(self.sub_m(y2, y1), inv);
            let nu = self.mul_m(self.sub_m(self.mul_m(y1, x2), self.mul_m(y2, x1)), inv);
            (lambda, nu)
        };
        let x3 = self.sub_m(
            self.sub_m(
                self.sub_m(self.add_m(self.mul_m(lambda, lambda), self.mul_m(a1, lambda)), a2),
                x1,
            ),
            x2,
        );
        let y3 = self.sub_m(
            self.sub_m(0, self.add_m(self.mul_m(self.add_m(lambda, a1), x3), nu)),
            a3,
        );
        Some((x3, y3))
    }

    pub fn mul(&self, p: FpPoint, mut k: u64) -> FpPoint {
        let mut acc = None;
        let mut base = p;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// A point of exact order `q` (prime), if one exists, found by checking
    /// `[q]P = O` over every affine point.
    pub fn point_of_order(&self, q: u64) -> FpPoint {
        self.points()
            .into_iter()
            .map(Some)
            .find(|&pt| self.mul(pt, q).is_none())
            .flatten()
    }
}
