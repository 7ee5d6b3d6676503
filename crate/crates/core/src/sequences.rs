//! Fibonacci and Lucas numbers and the family member they define.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use crate::error::{Error, Result};
use crate::realball::{constants, decide, Ball};

/// `(F_n, F_{n+1})` by iterated addition.
fn fib_pair(n: u64) -> (BigInt, BigInt) {
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    for _ in 0..n {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    (a, b)
}

pub fn fib(n: u64) -> BigInt {
    fib_pair(n).0
}

pub fn lucas(n: u64) -> BigInt {
    if n == 0 {
        return BigInt::from(2);
    }
    // L_n = F_{n-1} + F_{n+1} = 2 F_{n-1} + F_n
    let (f_prev, f) = fib_pair(n - 1);
    (f_prev << 1usize) + f
}

/// One member of the family: the form
/// `F(X, Y) = (X - F_n Y)(X - L_n Y) X - Y^3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThueInstance {
    pub n: u64,
    pub fib: BigInt,
    pub luc: BigInt,
    /// Largest coefficient magnitude, `F_n L_n`.
    pub coeff_bound: BigInt,
}

impl ThueInstance {
    pub fn new(n: u64) -> ThueInstance {
        assert!(n >= 1, "the family starts at n = 1");
        let fib = fib(n);
        let luc = lucas(n);
        let coeff_bound = &fib * &luc;
        ThueInstance { n, fib, luc, coeff_bound }
    }

    /// `s = F + L` and `p = F L`: the cubic is `X^3 - s X^2 + p X - 1`.
    pub fn sp(&self) -> (BigInt, BigInt) {
        (&self.fib + &self.luc, self.coeff_bound.clone())
    }

    /// Exact value of the form at `(x, y)`.
    pub fn form(&self, x: &BigInt, y: &BigInt) -> BigInt {
        (x - &self.fib * y) * (x - &self.luc * y) * x - y * y * y
    }

    /// `f_n(X) = (X - F_n)(X - L_n) X - 1` on a ball.
    pub fn poly_ball(&self, x: &Ball) -> Ball {
        let p = x.prec();
        let f = Ball::from_int(self.fib.clone(), p);
        let l = Ball::from_int(self.luc.clone(), p);
        &(&(x - &f) * &(x - &l)) * x - Ball::one(p)
    }

    /// `f_n'(X) = 3X^2 - 2sX + p` on a ball.
    pub fn dpoly_ball(&self, x: &Ball) -> Ball {
        let prec = x.prec();
        let (s, p) = self.sp();
        let three_x2 = x.sqr().mul_int(&BigInt::from(3));
        let two_sx = x.mul_int(&(s << 1usize));
        &(&three_x2 - &two_sx) + &Ball::from_int(p, prec)
    }
}

/// Certifies `alpha^(n-2) <= F_n - 11 alpha^-n` and
/// `F_n + 11 alpha^-n <= alpha^(n-1)`.
pub fn check_fib_envelope(n: u64, prec: u64) -> Result<bool> {
    if n < 6 {
        return Err(Error::InvalidInput(format!("envelope needs n >= 6, got {n}")));
    }
    let c = constants(prec);
    let f = Ball::from_int(fib(n), prec);
    let eleven_tail = c.alpha.powi(-(n as i64))?.mul_int(&BigInt::from(11));
    let lower = c.alpha.powi(n as i64 - 2)?;
    let upper = c.alpha.powi(n as i64 - 1)?;
    let left = decide(lower.le(&(&f - &eleven_tail)), "lower Fibonacci envelope", prec)?;
    let right = decide((&f + &eleven_tail).le(&upper), "upper Fibonacci envelope", prec)?;
    Ok(left && right)
}
