//! Continued-fraction convergents of an enclosed real number, and the check
//! that no convergent of a root of `f_n` with a small denominator solves
//! the equation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::realball::{with_precision, Ball, PRECISION_CAP_FACTOR};
use crate::roots::{approx_roots, working_precision};
use crate::sequences::{lucas, ThueInstance};
use crate::solver::verify;

fn to_rational(d: &crate::realball::Dyadic) -> BigRational {
    let e = d.exponent();
    let m = d.mantissa().clone();
    if e >= 0 {
        BigRational::from_integer(m << e as usize)
    } else {
        BigRational::new(m, BigInt::one() << (-e) as usize)
    }
}

/// All convergents `p/q` of the number enclosed by `x` with `q <= max_den`.
///
/// The continued fractions of both endpoints are expanded together; a
/// partial quotient is accepted only when they agree, so every returned
/// convergent belongs to each real number in the ball.
pub fn continued_fraction(x: &Ball, max_den: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    if !x.is_positive() {
        return Err(Error::InvalidInput("continued fraction needs a positive number".into()));
    }
    let (mut lo, mut hi) = (to_rational(&x.lower()), to_rational(&x.upper()));
    // (p0, q0) and (p1, q1) are the two previous convergents.
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::new();
    loop {
        let a = lo.floor().to_integer();
        if hi.floor().to_integer() != a {
            // The next denominator is at least q1 + q0 whatever a is.
            if &q1 + &q0 > *max_den {
                return Ok(out);
            }
            return Err(Error::PrecisionExhausted(format!(
                "partial quotient not determined after {} convergents",
                out.len()
            )));
        }
        let (p, q) = (&a * &p1 + &p0, &a * &q1 + &q0);
        if q > *max_den {
            return Ok(out);
        }
        out.push((p.clone(), q.clone()));
        (p0, q0, p1, q1) = (p1, q1, p, q);
        let (fl, fh) = (&lo - BigRational::from_integer(a.clone()), &hi - BigRational::from_integer(a));
        if fl.is_zero() || fh.is_zero() {
            if fl.is_zero() && fh.is_zero() {
                return Ok(out);
            }
            return Err(Error::PrecisionExhausted("enclosure straddles a rational endpoint".into()));
        }
        // x -> 1/(x - a) reverses the order.
        (lo, hi) = (fh.recip(), fl.recip());
    }
}

/// `floor(α^(2n)) = L_(2n) - 1`, since `α^(2n) + α^(-2n) = L_(2n)`.
pub fn denominator_limit(n: u64) -> BigInt {
    lucas(2 * n) - 1
}

/// True iff no convergent `p/q` of any root of `f_n` with
/// `2 <= q < α^(2n)` has `F_n(p, q) = ±1`.
pub fn convergent_check(n: u64) -> Result<bool> {
    Ok(convergent_hits(n)?.is_empty())
}

/// The solving convergents themselves (with `q >= 2`).
pub fn convergent_hits(n: u64) -> Result<Vec<(BigInt, BigInt)>> {
    let inst = ThueInstance::new(n);
    let limit = denominator_limit(n);
    // q² ~ 2^(2.8n) must be resolved relative to roots as large as α^n.
    let start = working_precision(n).max(4 * n + 64);
    let lists = with_precision(start, PRECISION_CAP_FACTOR, |p| {
        let roots = approx_roots(&inst, p)?;
        (1..=3).map(|i| continued_fraction(roots.get(i), &limit)).collect::<Result<Vec<_>>>()
    })
    .map_err(|e| e.at("convergent check", n))?;
    let mut hits = Vec::new();
    for (p, q) in lists.into_iter().flatten() {
        if q >= BigInt::from(2) && verify(&inst, &p, &q).is_some() && !hits.contains(&(p.clone(), q.clone())) {
            hits.push((p, q));
        }
    }
    hits.sort();
    Ok(hits)
}

/// `|x - p/q| < 1/q²`, decided in ball arithmetic.
pub fn approximates(x: &Ball, p: &BigInt, q: &BigInt) -> Option<bool> {
    let prec = x.prec();
    let qb = Ball::from_int(q.clone(), prec);
    let err = (&(x * &qb) - &Ball::from_int(p.clone(), prec)).abs();
    err.lt(&qb.recip().ok()?)
}

/// gcd check used by tests: every convergent is in lowest terms.
pub fn in_lowest_terms(p: &BigInt, q: &BigInt) -> bool {
    p.gcd(q).is_one() && q.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realball::constants;

    fn pairs(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        v.iter().map(|&(p, q)| (BigInt::from(p), BigInt::from(q))).collect()
    }

    #[test]
    fn golden_ratio() {
        let c = constants(128);
        let cf = continued_fraction(&c.alpha, &BigInt::from(100)).unwrap();
        let expect = pairs(&[(1, 1), (2, 1), (3, 2), (5, 3), (8, 5), (13, 8), (21, 13), (34, 21), (55, 34), (89, 55), (144, 89)]);
        assert_eq!(cf, expect);
    }

    #[test]
    fn sqrt5() {
        let c = constants(128);
        let cf = continued_fraction(&c.sqrt5, &BigInt::from(50)).unwrap();
        assert_eq!(cf, pairs(&[(2, 1), (9, 4), (38, 17)]));
    }

    #[test]
    fn too_coarse_is_an_error() {
        let c = constants(64);
        assert!(continued_fraction(&c.alpha, &BigInt::from(10).pow(30)).is_err());
        assert!(continued_fraction(&Ball::from_int(-2, 64), &BigInt::from(5)).is_err());
    }

    #[test]
    fn exact_rational_terminates() {
        let x = Ball::exact(crate::realball::Dyadic::new(BigInt::from(7), -2), 64);
        let cf = continued_fraction(&x, &BigInt::from(1000)).unwrap();
        assert_eq!(cf, pairs(&[(1, 1), (2, 1), (7, 4)]));
        // A ball around 7/4 straddles the last partial quotient.
        assert!(continued_fraction(&Ball::from_ratio(7, 4, 64), &BigInt::from(1000)).is_err());
    }

    /// Best approximations of the second kind by exhaustive search over
    /// `2 <= q <= 1000`; these are exactly the convergents.
    #[test]
    fn roots_against_search() {
        for n in [3u64, 4, 10] {
            let inst = ThueInstance::new(n);
            let roots = approx_roots(&inst, 256).unwrap();
            for i in 1..=3 {
                let r = roots.get(i);
                let cf = continued_fraction(r, &BigInt::from(1_000_000)).unwrap();
                let x = r.to_f64();
                let mut best = f64::INFINITY;
                let mut records = Vec::new();
                for q in 1..=1000i64 {
                    let p = (x * q as f64).round() as i64;
                    let e = (q as f64 * x - p as f64).abs();
                    if e < best {
                        best = e;
                        records.push((BigInt::from(p), BigInt::from(q)));
                    }
                }
                // q = 1 is special: the search rounds, the expansion floors.
                let keep = |v: &Vec<(BigInt, BigInt)>| -> Vec<(BigInt, BigInt)> {
                    v.iter().filter(|(_, q)| *q > BigInt::one() && *q <= BigInt::from(1000)).cloned().collect()
                };
                assert_eq!(keep(&cf), keep(&records), "n = {n}, root {i}");
                for (p, q) in &cf {
                    assert!(in_lowest_terms(p, q));
                    assert_eq!(approximates(r, p, q), Some(true));
                }
            }
        }
    }

    #[test]
    fn n3_finds_the_small_exception() {
        // 7/4 is a convergent of the root near F_3 = 2; 38/273 lies past
        // the denominator limit L_6 - 1 = 17.
        assert_eq!(denominator_limit(3), BigInt::from(17));
        assert!(!convergent_check(3).unwrap());
        assert_eq!(convergent_hits(3).unwrap(), pairs(&[(7, 4)]));
    }

    #[test]
    fn sample_large_n() {
        for n in [10u64, 49, 50] {
            assert!(convergent_check(n).unwrap(), "n = {n}");
        }
    }
}
