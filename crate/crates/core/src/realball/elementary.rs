//! `log` and `exp` on balls.
//!
//! Both work in fixed point with guard bits and keep an explicit count of
//! the truncation error in units of the last place; the count becomes part
//! of the output radius.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ball::Ball;
use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// `x / 2^w` rounded toward zero (plain `>>` floors, which would leave
/// negative series terms stuck at -1).
fn shr(x: &BigInt, w: u64) -> BigInt {
    if x.is_negative() {
        -((-x) >> w as usize)
    } else {
        x >> w as usize
    }
}

/// `sum_{i>=0} z^{2i+1}/(2i+1)` for `z = zf / 2^w`, `|z| <= 1/3`, in
/// fixed point. Returns the sum and its error bound in ulps.
fn atanh_fixed(zf: &BigInt, w: u64) -> (BigInt, u64) {
    let z2 = shr(&(zf * zf), w);
    let mut pow = zf.clone();
    let mut sum = zf.clone();
    let mut terms = 0u64;
    let mut i = 1u64;
    loop {
        pow = shr(&(&pow * &z2), w);
        if pow.is_zero() {
            break;
        }
        sum += &pow / BigInt::from(2 * i + 1);
        terms += 1;
        i += 1;
    }
    (sum, 4 * terms + 8)
}

/// `log 2` in fixed point with `w` fractional bits, and its error in ulps.
fn ln2_fixed(w: u64) -> (BigInt, u64) {
    static CACHE: OnceLock<Mutex<HashMap<u64, (BigInt, u64)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&w) {
        return v.clone();
    }
    // log 2 = 2 atanh(1/3)
    let z = (BigInt::one() << w as usize) / 3;
    let (s, e) = atanh_fixed(&z, w);
    let v = (s << 1, 2 * (e + 2));
    cache.lock().unwrap().insert(w, v.clone());
    v
}

/// Enclosure of `log x` for a positive dyadic.
fn log_dyadic(x: &Dyadic, prec: u64) -> Ball {
    assert!(x.is_positive());
    let b = x.bits() as i64;
    let mut k = x.exponent() + b - 1; // x = 2^k * t, t in [1, 2)
    let kbits = 64 - k.unsigned_abs().leading_zeros() as u64;
    let w = prec + 24 + kbits;
    let one = BigInt::one() << w as usize;
    let shift = w as i64 - (b - 1);
    let mut t = if shift >= 0 {
        x.mantissa() << shift as usize
    } else {
        shr(x.mantissa(), (-shift) as u64)
    };
    // Move t into [sqrt(2)/2, sqrt(2)) so the series argument stays below 0.18.
    if &t * 10000u32 > &one * 14142u32 {
        t >>= 1;
        k += 1;
    }
    let z = ((&t - &one) << w as usize) / (&t + &one);
    let (s, e) = atanh_fixed(&z, w);
    let mut total = s << 1;
    let mut err = 2 * e + 8;
    if k != 0 {
        let (l2, e2) = ln2_fixed(w);
        total += l2 * k;
        err += k.unsigned_abs() * e2;
    }
    Ball::new(Dyadic::new(total, -(w as i64)), Dyadic::new(BigInt::from(err), -(w as i64)), prec)
}

/// Natural logarithm. Fails if the ball reaches zero or below.
pub fn ball_log(x: &Ball) -> Result<Ball> {
    let lo = x.lower();
    if !lo.is_positive() {
        return Err(Error::Domain(format!("log of a ball not inside (0, inf): {x}")));
    }
    let prec = x.prec();
    let m = log_dyadic(x.mid(), prec);
    if x.is_exact() {
        return Ok(m);
    }
    // |log(m + t) - log m| <= |t| / min(m, m + t)
    let extra = x.rad().div(&lo, 32, Round::Ceil);
    Ok(m.widen(&extra))
}

/// Enclosure of `exp x` for a dyadic of moderate size.
fn exp_dyadic(x: &Dyadic, prec: u64) -> Result<Ball> {
    if x.is_zero() {
        return Ok(Ball::one(prec));
    }
    if x.top() > 40 {
        return Err(Error::Domain(format!("exp argument too large: {x}")));
    }
    const HALVINGS: u64 = 12;
    let w = prec + 48 + HALVINGS;
    let e = x.exponent() + w as i64;
    let (xf, xerr) = if e >= 0 {
        (x.mantissa() << e as usize, 0u64)
    } else {
        (shr(x.mantissa(), (-e) as u64), 1u64)
    };
    let (l2, e2) = ln2_fixed(w);
    let k = (&xf + (&l2 >> 1usize)).div_floor(&l2);
    let r = &xf - &k * &l2;
    let k = k.to_i64().ok_or_else(|| Error::Domain("exp exponent overflow".into()))?;
    let rerr = xerr + 1 + k.unsigned_abs() * e2;

    let one = BigInt::one() << w as usize;
    let rs = shr(&r, HALVINGS);
    let rserr = rerr / (1 << HALVINGS) + 2;
    let mut sum = one.clone();
    let mut term = one;
    let mut n = 0u64;
    let mut i = 1u32;
    loop {
        term = shr(&(&term * &rs), w) / BigInt::from(i);
        if term.is_zero() {
            break;
        }
        sum += &term;
        n += 1;
        i += 1;
    }
    for _ in 0..HALVINGS {
        sum = shr(&(&sum * &sum), w);
    }
    let err = (1u64 << (HALVINGS + 2)) * (2 * n + 8 + rserr);
    let scale = k - w as i64;
    Ok(Ball::new(
        Dyadic::new(sum, scale),
        Dyadic::new(BigInt::from(err), scale),
        prec,
    ))
}

/// Exponential, via enclosures at both endpoints (exp is monotone).
pub fn ball_exp(x: &Ball) -> Result<Ball> {
    let prec = x.prec();
    if x.is_exact() {
        return exp_dyadic(x.mid(), prec);
    }
    let lo = exp_dyadic(&x.lower(), prec)?;
    let hi = exp_dyadic(&x.upper(), prec)?;
    Ok(Ball::from_endpoints(&lo.lower(), &hi.upper(), prec))
}

/// `log |x|`, convenient for the many signed quantities in the proof.
pub fn ball_log_abs(x: &Ball) -> Result<Ball> {
    ball_log(&x.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn log_one_is_zero() {
        let l = ball_log(&Ball::one(128)).unwrap();
        assert!(l.contains_zero());
        assert!(l.rad_f64() < 1e-35);
    }

    #[test]
    fn log_of_e_is_one() {
        let e = ball_exp(&Ball::one(256)).unwrap();
        assert!((e.to_f64() - std::f64::consts::E).abs() < 1e-15);
        let l = ball_log(&e).unwrap();
        assert!(l.contains_int(1));
        assert!(l.rad_f64() < 1e-70);
    }

    #[test]
    fn log2_digits() {
        // 50 decimal digits of log 2.
        let l = ball_log(&Ball::from_int(2, 200)).unwrap();
        let digits = "0.69314718055994530941723212145817656807550013436025";
        let reference = Ball::new(
            Dyadic::from_int(digits[2..].parse::<BigInt>().unwrap())
                .div(&Dyadic::from_int(BigInt::from(10).pow(50)), 200, Round::Trunc),
            Dyadic::pow2(-160),
            200,
        );
        assert!(reference.overlaps(&l));
        assert!(l.rad_f64() < 1e-55);
    }

    #[test]
    fn exp_log_roundtrip_large() {
        let x = Ball::from_ratio(12345, 7, 300);
        let y = ball_log(&ball_exp(&x).unwrap()).unwrap();
        assert!(y.overlaps(&x));
        let big = Ball::from_int(BigInt::from(10).pow(300), 300);
        let l = ball_log(&big).unwrap();
        assert!((l.to_f64() - 300.0 * std::f64::consts::LN_10).abs() < 1e-9);
        assert!(l.rad_f64() < 1e-80);
    }

    #[test]
    fn log_rejects_nonpositive() {
        assert!(ball_log(&Ball::zero(64)).is_err());
        let straddle = Ball::new(Dyadic::from_f64(0.1), Dyadic::from_f64(0.2), 64);
        assert!(ball_log(&straddle).is_err());
    }

    #[test]
    fn exp_of_negative() {
        let e = ball_exp(&Ball::from_int(-50, 128)).unwrap();
        assert!((e.to_f64() / (-50f64).exp() - 1.0).abs() < 1e-14);
        assert!(e.is_positive());
    }

    proptest! {
        #[test]
        fn log_matches_f64(x in 1e-30f64..1e30) {
            let l = ball_log(&Ball::from_f64(x, 96)).unwrap();
            prop_assert!((l.to_f64() - x.ln()).abs() <= 1e-13 * x.ln().abs().max(1.0));
        }

        #[test]
        fn exp_matches_f64(x in -300f64..300.0) {
            let e = ball_exp(&Ball::from_f64(x, 96)).unwrap();
            prop_assert!((e.to_f64() / x.exp() - 1.0).abs() <= 1e-13);
        }

        // |log x| <= 2|x - 1| whenever |x - 1| <= 1/2.
        #[test]
        fn log_near_one_bound(x in 0.5f64..=1.5) {
            let xb = Ball::from_f64(x, 128);
            let l = ball_log(&xb).unwrap().abs();
            let bound = (&xb - &Ball::one(128)).abs().shl(1);
            prop_assert_ne!(l.le(&bound), Some(false));
            prop_assert!(l.mid().abs() <= bound.mid().add(l.rad()));
        }

        #[test]
        fn log_inclusion_monotone(m in 0.01f64..100.0, r1 in 0f64..1e-3, extra in 0f64..1e-3) {
            let small = Ball::new(Dyadic::from_f64(m), Dyadic::from_f64(r1 * m), 96);
            let large = Ball::new(Dyadic::from_f64(m), Dyadic::from_f64((r1 + extra) * m), 96);
            prop_assert!(ball_log(&large).unwrap().contains_ball(&ball_log(&small).unwrap()));
            prop_assert!(ball_exp(&large).unwrap().contains_ball(&ball_exp(&small).unwrap()));
            prop_assert!(large.sqrt().unwrap().contains_ball(&small.sqrt().unwrap()));
        }
    }
}
