//! Exact arithmetic in `Z[θ]`, `θ³ = sθ² - pθ + 1`, where `s = F_n + L_n` and
//! `p = F_n L_n`. Here `θ` is any root of `f_n`, so identities proved in this
//! ring hold for all three real conjugates at once.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::realball::Ball;
use crate::sequences::ThueInstance;

/// `c[0] + c[1] θ + c[2] θ²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elem {
    pub c: [BigInt; 3],
}

/// The ring for one family member.
#[derive(Clone, Debug)]
pub struct Ring {
    pub s: BigInt,
    pub p: BigInt,
    pub fib: BigInt,
    pub luc: BigInt,
}

impl Ring {
    pub fn new(inst: &ThueInstance) -> Ring {
        let (s, p) = inst.sp();
        Ring { s, p, fib: inst.fib.clone(), luc: inst.luc.clone() }
    }

    pub fn elem(&self, a0: BigInt, a1: BigInt, a2: BigInt) -> Elem {
        Elem { c: [a0, a1, a2] }
    }

    pub fn one(&self) -> Elem {
        self.elem(BigInt::one(), BigInt::zero(), BigInt::zero())
    }

    /// `ε = θ`.
    pub fn eps(&self) -> Elem {
        self.elem(BigInt::zero(), BigInt::one(), BigInt::zero())
    }

    /// `δ = θ - F_n`.
    pub fn delta(&self) -> Elem {
        self.elem(-&self.fib, BigInt::one(), BigInt::zero())
    }

    /// `ε⁻¹ = θ² - sθ + p`.
    pub fn eps_inv(&self) -> Elem {
        self.elem(self.p.clone(), -&self.s, BigInt::one())
    }

    /// `δ⁻¹ = θ² - L_n θ`, since `(θ - F)(θ - L)θ = 1`.
    pub fn delta_inv(&self) -> Elem {
        self.elem(BigInt::zero(), -&self.luc, BigInt::one())
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let [a0, a1, a2] = &a.c;
        let [b0, b1, b2] = &b.c;
        // Coefficients of θ^0..θ^4 before reduction.
        let t0 = a0 * b0;
        let t1 = a0 * b1 + a1 * b0;
        let t2 = a0 * b2 + a1 * b1 + a2 * b0;
        let t3 = a1 * b2 + a2 * b1;
        let t4 = a2 * b2;
        // θ³ = sθ² - pθ + 1 and θ⁴ = (s² - p)θ² + (1 - sp)θ + s.
        let (s, p) = (&self.s, &self.p);
        let c0 = t0 + &t3 + &t4 * s;
        let c1 = t1 - &t3 * p + &t4 * (BigInt::one() - s * p);
        let c2 = t2 + &t3 * s + &t4 * (s * s - p);
        Elem { c: [c0, c1, c2] }
    }

    pub fn pow(&self, base: &Elem, inv: &Elem, k: i64) -> Elem {
        let b = if k < 0 { inv } else { base };
        let mut e = k.unsigned_abs();
        let mut acc = self.one();
        let mut sq = b.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// `ε^b1 δ^b2`.
    pub fn unit(&self, b1: i64, b2: i64) -> Elem {
        let e = self.pow(&self.eps(), &self.eps_inv(), b1);
        let d = self.pow(&self.delta(), &self.delta_inv(), b2);
        self.mul(&e, &d)
    }

    /// Exact norm `N(a) = prod_i a(θ_i)` via the resultant with the minimal
    /// polynomial: the determinant of multiplication by `a`.
    pub fn norm(&self, a: &Elem) -> BigInt {
        let cols = [
            a.clone(),
            self.mul(a, &self.eps()),
            self.mul(a, &self.mul(&self.eps(), &self.eps())),
        ];
        let m = |r: usize, c: usize| &cols[c].c[r];
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
            - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    }
}

impl Elem {
    /// If the element is `x - yθ`, returns `(x, y)`.
    pub fn as_linear(&self) -> Option<(BigInt, BigInt)> {
        self.c[2].is_zero().then(|| (self.c[0].clone(), -&self.c[1]))
    }

    pub fn neg(&self) -> Elem {
        Elem { c: [-&self.c[0], -&self.c[1], -&self.c[2]] }
    }

    /// Value at a real conjugate.
    pub fn eval(&self, theta: &Ball) -> Ball {
        let p = theta.prec();
        let [a0, a1, a2] = &self.c;
        let t = Ball::from_int(a2.clone(), p).mul_ball(theta);
        let t = (&t + &Ball::from_int(a1.clone(), p)).mul_ball(theta);
        &t + &Ball::from_int(a0.clone(), p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        for n in 1..=30u64 {
            let r = Ring::new(&ThueInstance::new(n));
            assert_eq!(r.mul(&r.eps(), &r.eps_inv()), r.one());
            assert_eq!(r.mul(&r.delta(), &r.delta_inv()), r.one());
            assert_eq!(r.unit(3, -2), r.mul(&r.unit(3, 0), &r.unit(0, -2)));
            assert_eq!(r.mul(&r.unit(-5, 7), &r.unit(5, -7)), r.one());
        }
    }

    #[test]
    fn units_have_norm_one() {
        for n in 1..=20u64 {
            let r = Ring::new(&ThueInstance::new(n));
            for (b1, b2) in [(0, 0), (1, 0), (0, 1), (-3, 4), (6, -1)] {
                assert_eq!(r.norm(&r.unit(b1, b2)), BigInt::one());
                assert_eq!(r.norm(&r.unit(b1, b2).neg()), -BigInt::one());
            }
        }
    }

    #[test]
    fn norm_of_linear_is_the_form() {
        let inst = ThueInstance::new(7);
        let r = Ring::new(&inst);
        for (x, y) in [(3i64, 2i64), (-5, 11), (13, 1), (0, 1)] {
            let (x, y) = (BigInt::from(x), BigInt::from(y));
            let e = r.elem(x.clone(), -&y, BigInt::zero());
            assert_eq!(r.norm(&e), inst.form(&x, &y));
        }
    }

    #[test]
    fn known_solutions_are_units() {
        // 38 - 273θ at n = 3 is a unit with its θ² coefficient zero.
        let r = Ring::new(&ThueInstance::new(3));
        let mut hit = None;
        for b1 in -20..=20 {
            for b2 in -20..=20 {
                for u in [r.unit(b1, b2), r.unit(b1, b2).neg()] {
                    if u.as_linear() == Some((BigInt::from(38), BigInt::from(273))) {
                        hit = Some((b1, b2));
                    }
                }
            }
        }
        assert!(hit.is_some());
    }
}
