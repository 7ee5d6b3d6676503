use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Mantissa width used for radii. Radii only need a few correct bits.
pub(crate) const RAD_BITS: u64 = 32;

fn up(d: &Dyadic) -> Dyadic {
    d.round(RAD_BITS, Round::Ceil)
}

/// A real number known to lie in `[mid - rad, mid + rad]`.
///
/// Every operation returns a ball that contains the exact result for every
/// choice of points in the operand balls. Midpoints carry `prec` bits.
#[derive(Clone, Debug)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
    prec: u64,
}

impl Ball {
    /// Builds a ball from an exact midpoint and a radius, rounding the
    /// midpoint to `prec` bits and widening the radius to cover it.
    pub fn new(mid: Dyadic, rad: Dyadic, prec: u64) -> Ball {
        assert!(!rad.is_negative(), "negative radius");
        let keep = if rad.is_zero() || mid.is_zero() {
            prec
        } else {
            // Bits of the midpoint far below the radius carry no information.
            let useful = mid.top() - rad.top() + 8;
            (useful.max(2) as u64).min(prec)
        };
        let (m, err) = mid.round_with_error(keep);
        let rad = if err.is_zero() { up(&rad) } else { up(&rad.add(&err)) };
        Ball { mid: m, rad, prec }
    }

    pub fn exact(mid: Dyadic, prec: u64) -> Ball {
        Ball::new(mid, Dyadic::zero(), prec)
    }

    pub fn zero(prec: u64) -> Ball {
        Ball::exact(Dyadic::zero(), prec)
    }

    pub fn one(prec: u64) -> Ball {
        Ball::exact(Dyadic::one(), prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u64) -> Ball {
        Ball::exact(Dyadic::from_int(n), prec)
    }

    pub fn from_f64(x: f64, prec: u64) -> Ball {
        Ball::exact(Dyadic::from_f64(x), prec)
    }

    /// `p / q` as a ball.
    pub fn from_ratio(p: impl Into<BigInt>, q: impl Into<BigInt>, prec: u64) -> Ball {
        Ball::from_int(p, prec)
            .div(&Ball::from_int(q, prec))
            .expect("nonzero denominator")
    }

    /// The smallest ball containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u64) -> Ball {
        assert!(lo <= hi, "inverted endpoints");
        let mid = lo.add(hi).shl(-1);
        let rad = hi.sub(lo).shl(-1);
        Ball::new(mid, rad, prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    pub fn with_prec(&self, prec: u64) -> Ball {
        Ball::new(self.mid.clone(), self.rad.clone(), prec)
    }

    /// Widen the radius by `extra` (an error term of that magnitude).
    pub fn widen(&self, extra: &Dyadic) -> Ball {
        Ball::new(self.mid.clone(), self.rad.add(&extra.abs()), self.prec)
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    /// Upper bound on `|x|` over the ball.
    pub fn mag(&self) -> Dyadic {
        up(&self.mid.abs().add(&self.rad))
    }

    /// Lower bound on `|x|` over the ball (zero if the ball straddles 0).
    pub fn mag_lower(&self) -> Dyadic {
        let m = self.mid.abs().sub(&self.rad);
        if m.is_negative() {
            Dyadic::zero()
        } else {
            m.round(RAD_BITS, Round::Floor)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    pub fn contains_int(&self, n: impl Into<BigInt>) -> bool {
        self.contains(&Dyadic::from_int(n))
    }

    /// True if every point of `other` lies in `self`.
    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    /// True if the two balls share a point.
    pub fn overlaps(&self, other: &Ball) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper().is_negative()
    }

    /// Certified `self < other`: `None` when the balls overlap.
    pub fn lt(&self, other: &Ball) -> Option<bool> {
        if self.upper() < other.lower() {
            Some(true)
        } else if self.lower() >= other.upper() {
            Some(false)
        } else {
            None
        }
    }

    /// Certified `self <= other`: `None` when undecidable.
    pub fn le(&self, other: &Ball) -> Option<bool> {
        if self.upper() <= other.lower() {
            Some(true)
        } else if self.lower() > other.upper() {
            Some(false)
        } else {
            None
        }
    }

    pub fn gt(&self, other: &Ball) -> Option<bool> {
        other.lt(self)
    }

    pub fn ge(&self, other: &Ball) -> Option<bool> {
        other.le(self)
    }

    /// Certified ordering of two disjoint balls.
    pub fn cmp_certified(&self, other: &Ball) -> Option<Ordering> {
        match self.lt(other) {
            Some(true) => Some(Ordering::Less),
            _ if self.gt(other) == Some(true) => Some(Ordering::Greater),
            _ if self.is_exact() && other.is_exact() && self.mid == other.mid => Some(Ordering::Equal),
            _ => None,
        }
    }

    pub fn abs(&self) -> Ball {
        Ball { mid: self.mid.abs(), rad: self.rad.clone(), prec: self.prec }
    }

    /// Smallest ball containing both.
    pub fn hull(&self, other: &Ball) -> Ball {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        Ball::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }

    pub fn max(&self, other: &Ball) -> Ball {
        let lo = self.lower().max(other.lower());
        let hi = self.upper().max(other.upper());
        Ball::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }

    pub fn min(&self, other: &Ball) -> Ball {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().min(other.upper());
        Ball::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }

    /// Multiply by `2^k` (exact).
    pub fn shl(&self, k: i64) -> Ball {
        Ball { mid: self.mid.shl(k), rad: self.rad.shl(k), prec: self.prec }
    }

    pub fn add_ball(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let (big, small) = if self.mid.top() >= other.mid.top() { (self, other) } else { (other, self) };
        let rad = self.rad.add(&other.rad);
        if !small.mid.is_zero() && small.mid.top() < big.mid.top() - prec as i64 - 64 {
            // Far below the working precision: fold it into the radius.
            return Ball::new(big.mid.clone(), rad.add(&Dyadic::pow2(small.mid.top())), prec);
        }
        Ball::new(self.mid.add(&other.mid), rad, prec)
    }

    pub fn sub_ball(&self, other: &Ball) -> Ball {
        self.add_ball(&-other)
    }

    pub fn mul_ball(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let mid = self.mid.mul(&other.mid);
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            Dyadic::zero()
        } else {
            self.mid.mag_up(RAD_BITS).mul(&other.rad)
                .add(&other.mid.mag_up(RAD_BITS).mul(&self.rad))
                .add(&self.rad.mul(&other.rad))
        };
        Ball::new(mid, rad, prec)
    }

    pub fn mul_int(&self, k: &BigInt) -> Ball {
        self.mul_ball(&Ball::from_int(k.clone(), self.prec))
    }

    /// Quotient; fails if the divisor ball contains zero.
    pub fn div(&self, other: &Ball) -> Result<Ball> {
        let prec = self.prec.max(other.prec);
        if other.contains_zero() {
            return Err(Error::Domain("division by a ball containing zero".into()));
        }
        let q = self.mid.div(&other.mid, prec + 2, Round::Trunc);
        // |q - a/b| from truncating the quotient: one ulp at prec + 2 bits.
        let mut rad = if q.is_zero() { Dyadic::zero() } else { Dyadic::pow2(q.top() - prec as i64 - 1) };
        if !(self.rad.is_zero() && other.rad.is_zero()) {
            // |a/b - am/bm| <= (ra |bm| + |am| rb) / (|bm| (|bm| - rb))
            let bm = other.mid.mag_down(RAD_BITS);
            let num = self.rad.mul(&other.mid.mag_up(RAD_BITS)).add(&self.mid.mag_up(RAD_BITS).mul(&other.rad));
            let den = bm.mul(&bm.sub(&other.rad)).round(RAD_BITS, Round::Floor);
            if !den.is_positive() {
                return Err(Error::Domain("divisor too close to zero".into()));
            }
            rad = rad.add(&num.div(&den, RAD_BITS, Round::Ceil));
        }
        Ok(Ball::new(q, rad, prec))
    }

    pub fn recip(&self) -> Result<Ball> {
        Ball::one(self.prec).div(self)
    }

    pub fn sqr(&self) -> Ball {
        let prec = self.prec;
        let mid = self.mid.mul(&self.mid);
        let rad = if self.rad.is_zero() {
            Dyadic::zero()
        } else {
            self.mid.mag_up(RAD_BITS).mul(&self.rad).shl(1).add(&self.rad.mul(&self.rad))
        };
        Ball::new(mid, rad, prec)
    }

    /// Integer power; negative exponents need a ball away from zero.
    pub fn powi(&self, k: i64) -> Result<Ball> {
        if k < 0 {
            return self.powi(-k)?.recip();
        }
        let mut result = Ball::one(self.prec);
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ball(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        Ok(result)
    }

    /// Square root; the ball must lie in `[0, inf)`.
    pub fn sqrt(&self) -> Result<Ball> {
        let lo = self.lower();
        if lo.is_negative() {
            return Err(Error::Domain("square root of a ball reaching below zero".into()));
        }
        let p = self.prec + 2;
        let l = lo.sqrt(p, Round::Floor);
        let h = self.upper().sqrt(p, Round::Ceil);
        Ok(Ball::from_endpoints(&l, &h, self.prec))
    }

    /// Integer part, if it is the same across the whole ball.
    pub fn floor(&self) -> Option<BigInt> {
        let a = self.lower().floor_int();
        (a == self.upper().floor_int()).then_some(a)
    }

    pub fn ceil(&self) -> Option<BigInt> {
        let a = self.lower().ceil_int();
        (a == self.upper().ceil_int()).then_some(a)
    }

    /// Nearest integer (ties away from zero), if it is the same across the
    /// whole ball.
    pub fn nearest(&self) -> Option<BigInt> {
        let a = nearest_half_away(&self.lower());
        (a == nearest_half_away(&self.upper())).then_some(a)
    }
}

/// Nearest integer to `d`, rounding ties away from zero.
pub fn nearest_half_away(d: &Dyadic) -> BigInt {
    let half = Dyadic::pow2(-1);
    if d.is_negative() {
        -d.neg().add(&half).floor_int()
    } else {
        d.add(&half).floor_int()
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {}]", self.mid, self.rad)
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        -&self
    }
}

macro_rules! ball_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&Ball> for &Ball {
            type Output = Ball;
            fn $m(self, rhs: &Ball) -> Ball {
                self.$imp(rhs)
            }
        }
        impl $tr<Ball> for &Ball {
            type Output = Ball;
            fn $m(self, rhs: Ball) -> Ball {
                self.$imp(&rhs)
            }
        }
        impl $tr<&Ball> for Ball {
            type Output = Ball;
            fn $m(self, rhs: &Ball) -> Ball {
                (&self).$imp(rhs)
            }
        }
        impl $tr<Ball> for Ball {
            type Output = Ball;
            fn $m(self, rhs: Ball) -> Ball {
                (&self).$imp(&rhs)
            }
        }
    };
}

ball_binop!(Add, add, add_ball);
ball_binop!(Sub, sub, sub_ball);
ball_binop!(Mul, mul, mul_ball);

/// Runs `f` at `start` bits, doubling the precision whenever it reports an
/// error that more bits might fix, up to `cap_factor * start` bits.
pub fn with_precision<T>(start: u64, cap_factor: u64, mut f: impl FnMut(u64) -> Result<T>) -> Result<T> {
    let cap = start.saturating_mul(cap_factor.max(1));
    let mut prec = start;
    loop {
        match f(prec) {
            Err(e) if e.wants_more_precision() && prec * 2 <= cap => prec *= 2,
            Err(e) if e.wants_more_precision() => {
                return Err(Error::PrecisionExhausted(format!("gave up at {prec} bits: {e}")))
            }
            other => return other,
        }
    }
}

/// Turns a three-valued comparison into a hard answer or an
/// "inconclusive" error.
pub fn decide(v: Option<bool>, what: &str, prec: u64) -> Result<bool> {
    v.ok_or_else(|| Error::inconclusive(what, prec))
}
