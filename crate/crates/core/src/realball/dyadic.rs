//! Exact binary fractions `man * 2^exp`.
//!
//! These are the building blocks for [`Ball`](super::Ball): midpoints are
//! dyadics rounded to the working precision, radii are dyadics rounded up to
//! a short mantissa.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for dyadic operations that cannot be exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Floor,
    /// Toward positive infinity.
    Ceil,
    /// Toward zero.
    Trunc,
}

/// The exact value `man * 2^exp`.
#[derive(Clone, Debug, Default)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Self::zero();
        }
        Dyadic { man, exp }
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic { man: BigInt::one(), exp: k }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Self::new(BigInt::from(m) * sign, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    /// Bit length of the mantissa magnitude (0 for zero).
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// The smallest `t` with `|self| < 2^t`; `i64::MIN` for zero.
    pub fn top(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.bits() as i64
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    /// Multiply by `2^k` (exact).
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &other.man << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.man * &other.man, self.exp + other.exp)
    }

    /// Round to at most `prec` mantissa bits in the given direction.
    pub fn round(&self, prec: u64, mode: Round) -> Dyadic {
        let bits = self.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        Dyadic::new(shift_right(&self.man, shift, mode), self.exp + shift as i64)
    }

    /// Round toward zero to `prec` bits, returning the value and an upper
    /// bound on the discarded magnitude.
    pub fn round_with_error(&self, prec: u64) -> (Dyadic, Dyadic) {
        let bits = self.bits();
        if bits <= prec {
            return (self.clone(), Dyadic::zero());
        }
        let shift = bits - prec;
        let rounded = Dyadic::new(shift_right(&self.man, shift, Round::Trunc), self.exp + shift as i64);
        (rounded, Dyadic::pow2(self.exp + shift as i64))
    }

    /// Upper bound of `|self|` with a short mantissa.
    pub fn mag_up(&self, bits: u64) -> Dyadic {
        self.abs().round(bits, Round::Ceil)
    }

    /// Lower bound of `|self|` with a short mantissa.
    pub fn mag_down(&self, bits: u64) -> Dyadic {
        self.abs().round(bits, Round::Floor)
    }

    /// Quotient rounded to `prec` bits in direction `mode`. Panics on a zero
    /// divisor.
    pub fn div(&self, other: &Dyadic, prec: u64, mode: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Scale the numerator so the integer quotient carries >= prec bits.
        let shift = prec as i64 + other.bits() as i64 - self.bits() as i64 + 2;
        let shift = shift.max(0);
        let num = &self.man << shift as usize;
        let (q, r) = num.div_rem(&other.man);
        let mut q = q;
        if !r.is_zero() {
            let negative = (num.sign() == Sign::Minus) != (other.man.sign() == Sign::Minus);
            match mode {
                Round::Floor if negative => q -= 1,
                Round::Ceil if !negative => q += 1,
                _ => {}
            }
        }
        Dyadic::new(q, self.exp - other.exp - shift).round(prec, mode)
    }

    /// Square root rounded to `prec` bits. Panics on negative input.
    pub fn sqrt(&self, prec: u64, mode: Round) -> Dyadic {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Want man' * 2^e' with e' even and man' holding 2*prec+2 bits.
        let mut shift = 2 * prec as i64 + 2 - self.bits() as i64;
        shift = shift.max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.man << shift as usize;
        let mut s = m.sqrt();
        if mode == Round::Ceil && &s * &s != m {
            s += 1;
        }
        Dyadic::new(s, (self.exp - shift) / 2).round(prec, mode)
    }

    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as usize
        } else {
            shift_right(&self.man, (-self.exp) as u64, Round::Floor)
        }
    }

    pub fn ceil_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as usize
        } else {
            shift_right(&self.man, (-self.exp) as u64, Round::Ceil)
        }
    }

    /// Exact integer value, if the dyadic is an integer.
    pub fn to_int(&self) -> Option<BigInt> {
        let f = self.floor_int();
        if Dyadic::from_int(f.clone()) == *self {
            Some(f)
        } else {
            None
        }
    }

    /// Approximate value; saturates to infinity outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            (shift_right(&self.man, s, Round::Trunc), self.exp + s as i64)
        } else {
            (self.man.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(0.0);
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    /// Approximate `log2 |self|`, valid far outside the `f64` range.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.bits();
        let s = bits.saturating_sub(60);
        let m = shift_right(&self.man.abs(), s, Round::Trunc).to_f64().unwrap_or(1.0);
        m.log2() + (self.exp + s as i64) as f64
    }
}

/// `floor`/`ceil`/`trunc` of `man / 2^shift`.
fn shift_right(man: &BigInt, shift: u64, mode: Round) -> BigInt {
    if shift == 0 {
        return man.clone();
    }
    let negative = man.is_negative();
    let mag = man.magnitude();
    let q = mag >> shift as usize;
    let exact = mag.trailing_zeros().is_none_or(|tz| tz >= shift);
    let away = !exact
        && match mode {
            Round::Trunc => false,
            Round::Floor => negative,
            Round::Ceil => !negative,
        };
    let q = if away { q + 1u32 } else { q };
    let q = BigInt::from(q);
    if negative {
        -q
    } else {
        q
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.sign(), other.sign()) {
            (a, b) if a != b => {
                let rank = |s: Sign| match s {
                    Sign::Minus => 0,
                    Sign::NoSign => 1,
                    Sign::Plus => 2,
                };
                return rank(a).cmp(&rank(b));
            }
            (Sign::NoSign, _) => return Ordering::Equal,
            _ => {}
        }
        // Same nonzero sign: compare magnitudes by top bit first.
        let (ta, tb) = (self.top(), other.top());
        let mag_order = if ta != tb {
            ta.cmp(&tb)
        } else {
            let e = self.exp.min(other.exp);
            let a = self.man.magnitude() << (self.exp - e) as usize;
            let b = other.man.magnitude() << (other.exp - e) as usize;
            a.cmp(&b)
        };
        if self.is_negative() {
            mag_order.reverse()
        } else {
            mag_order
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_f64();
        if v.is_finite() && (v == 0.0 || v.abs().log10().abs() < 300.0) {
            write!(f, "{v:e}")
        } else {
            let l10 = self.log2_abs() * std::f64::consts::LOG10_2;
            let sign = if self.is_negative() { "-" } else { "" };
            let e = l10.floor();
            write!(f, "{sign}{:.6}e{}", 10f64.powf(l10 - e), e as i64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x)
    }

    #[test]
    fn from_f64_roundtrip() {
        for x in [0.0, 1.0, -1.5, 3.25e-200, 1e300, -7.0 / 3.0] {
            assert_eq!(d(x).to_f64(), x);
        }
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = d(0.75);
        let b = d(-2.5);
        assert_eq!(a.add(&b), d(-1.75));
        assert_eq!(a.mul(&b), d(-1.875));
        assert_eq!(a.sub(&b), d(3.25));
        assert_eq!(d(1e-300).add(&d(1e300)).sub(&d(1e300)), d(1e-300));
    }

    #[test]
    fn ordering_across_scales() {
        let mut v = [d(3.0), d(-1e100), d(0.0), d(1e-100), d(-1e-100), d(2.5)];
        v.sort();
        let got: Vec<f64> = v.iter().map(Dyadic::to_f64).collect();
        assert_eq!(got, vec![-1e100, -1e-100, 0.0, 1e-100, 2.5, 3.0]);
    }

    #[test]
    fn directed_rounding() {
        let third_floor = Dyadic::one().div(&Dyadic::from_int(3), 20, Round::Floor);
        let third_ceil = Dyadic::one().div(&Dyadic::from_int(3), 20, Round::Ceil);
        assert!(third_floor < third_ceil);
        assert!(third_floor.mul(&Dyadic::from_int(3)) < Dyadic::one());
        assert!(third_ceil.mul(&Dyadic::from_int(3)) > Dyadic::one());
        let m = Dyadic::from_int(-7).div(&Dyadic::from_int(3), 10, Round::Floor);
        assert!(m.mul(&Dyadic::from_int(3)) < Dyadic::from_int(-7));
    }

    #[test]
    fn sqrt_brackets() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(100, Round::Floor);
        let hi = two.sqrt(100, Round::Ceil);
        assert!(lo.mul(&lo) < two && hi.mul(&hi) > two);
        assert!(hi.sub(&lo) <= Dyadic::pow2(-98));
        assert_eq!(Dyadic::from_int(49).sqrt(8, Round::Ceil), Dyadic::from_int(7));
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(d(-2.5).floor_int(), BigInt::from(-3));
        assert_eq!(d(-2.5).ceil_int(), BigInt::from(-2));
        assert_eq!(d(2.5).floor_int(), BigInt::from(2));
        assert_eq!(d(4.0).to_int(), Some(BigInt::from(4)));
        assert_eq!(d(4.5).to_int(), None);
    }
}
