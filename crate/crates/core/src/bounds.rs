//! The transcendence bounds: a Baker–Wüstholz lower bound for linear forms in
//! logarithms, a Bugeaud–Győry upper bound for Thue solutions, and the
//! crossing of the two resulting bounds on `log|y|`.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::realball::{ball_exp, ball_log, constants, decide, with_precision, Ball, PRECISION_CAP_FACTOR};

/// Precision used for the global bounds.
pub const BOUNDS_PREC: u64 = 192;

fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Inputs of the Baker–Wüstholz inequality
/// `log|Λ| >= -18 (t+1)! t^(t+1) (32D)^(t+2) log(2tD) h_1 ... h_t log B`.
#[derive(Clone, Debug)]
pub struct BakerParams {
    pub t: u64,
    pub degree: u64,
    pub heights: Vec<Ball>,
    pub big_b: Ball,
}

/// `18 (t+1)! t^(t+1) (32D)^(t+2) log(2tD)`.
pub fn baker_prefactor(t: u64, degree: u64, prec: u64) -> Ball {
    let int = BigInt::from(18) * factorial(t + 1) * BigInt::from(t).pow(t as u32 + 1)
        * BigInt::from(32 * degree).pow(t as u32 + 2);
    let log = ball_log(&Ball::from_int(2 * t * degree, prec)).expect("2tD > 0");
    &Ball::from_int(int, prec) * &log
}

impl BakerParams {
    /// Prefactor times the product of heights.
    pub fn constant(&self) -> Ball {
        let prec = self.big_b.prec();
        self.heights
            .iter()
            .fold(baker_prefactor(self.t, self.degree, prec), |acc, h| &acc * h)
    }

    /// The lower bound for `log|Λ|`.
    pub fn log_lower_bound(&self) -> Result<Ball> {
        Ok(-(&self.constant() * &ball_log(&self.big_b)?))
    }
}

/// Absolute logarithmic height from a leading coefficient and the conjugates.
pub fn height(leading: i64, conjugates: &[Ball]) -> Result<Ball> {
    let prec = conjugates[0].prec();
    let one = Ball::one(prec);
    let mut sum = ball_log(&Ball::from_int(leading.abs(), prec))?;
    for g in conjugates {
        sum = &sum + &ball_log(&g.abs().max(&one))?;
    }
    sum.div(&Ball::from_int(conjugates.len() as u64, prec))
}

/// Heights of `α`, `√5`, `√5 - 1`: `(½ log α, log √5, log 2)`.
pub fn family_heights(prec: u64) -> [Ball; 3] {
    let c = constants(prec);
    [c.log_alpha.shl(-1), c.log_sqrt5.clone(), c.log2.clone()]
}

/// `C = 17496 · 64⁵ · log 12 · log α · log √5 · log 2`, i.e. the Baker
/// constant for `t = 3`, `D = 2` and the family's heights.
pub fn baker_constant_at(prec: u64) -> Ball {
    let params = BakerParams {
        t: 3,
        degree: 2,
        heights: family_heights(prec).to_vec(),
        big_b: Ball::one(prec),
    };
    params.constant()
}

pub fn baker_constant() -> Ball {
    baker_constant_at(BOUNDS_PREC)
}

/// Inputs of the Bugeaud–Győry bound
/// `log|y| <= 3^(r+27) (r+1)^(7r+19) N^(2N+6r+14) R max(log R, 1) (R + log(HB))`.
#[derive(Clone, Debug)]
pub struct BgParams {
    pub rank: u64,
    pub degree: u64,
    pub reg_upper: Ball,
    pub log_h: Ball,
    pub log_b: Ball,
}

impl BgParams {
    pub fn bound(&self) -> Result<Ball> {
        let prec = self.reg_upper.prec();
        let (r, nn) = (self.rank as u32, self.degree as u32);
        let k = BigInt::from(3).pow(r + 27) * BigInt::from(r + 1).pow(7 * r + 19) * BigInt::from(nn).pow(2 * nn + 6 * r + 14);
        let reg = &self.reg_upper;
        let log_reg = ball_log(reg)?.max(&Ball::one(prec));
        let tail = &(reg + &self.log_h) + &self.log_b;
        Ok(&(&(&Ball::from_int(k, prec) * reg) * &log_reg) * &tail)
    }
}

fn n_ball(n: u64, prec: u64) -> Ball {
    Ball::from_int(n, prec)
}

/// `U(n) = 3^94 · 2n² · log(2n²) · (2n² + (2n-1) log α + 1)`: the upper bound
/// on `log|y|` with `R <= 2n²`, `H = α^(2n-1)`, `B = e`.
pub fn logy_upper_bound_at(n: u64, prec: u64) -> Result<Ball> {
    if n < 1 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let c = constants(prec);
    let two_n2 = Ball::from_int(BigInt::from(n) * n * 2, prec);
    let params = BgParams {
        rank: 2,
        degree: 3,
        reg_upper: two_n2,
        log_h: c.log_alpha.mul_int(&BigInt::from(2 * n - 1)),
        log_b: Ball::one(prec),
    };
    params.bound()
}

pub fn logy_upper_bound(n: u64) -> Result<Ball> {
    logy_upper_bound_at(n, BOUNDS_PREC)
}

/// `exp(2 log α / (1 + C) · n - log n - 5)`.
pub fn logy_lower_bound_at(n: u64, prec: u64) -> Result<Ball> {
    if n < 10 {
        return Err(Error::InvalidInput(format!("the lower bound needs n >= 10, got {n}")));
    }
    let c = constants(prec);
    let cc = baker_constant_at(prec);
    let slope = c.log_alpha.shl(1).div(&(&cc + &Ball::one(prec)))?;
    let nb = n_ball(n, prec);
    let arg = &(&(&slope * &nb) - &ball_log(&nb)?) - &Ball::from_int(5, prec);
    ball_exp(&arg)
}

pub fn logy_lower_bound(n: u64) -> Result<Ball> {
    logy_lower_bound_at(n, BOUNDS_PREC)
}

/// Certified "lower bound exceeds upper bound" at `n`.
fn crosses(n: u64, prec: u64) -> Result<bool> {
    let lo = logy_lower_bound_at(n, prec)?;
    let hi = logy_upper_bound_at(n, prec)?;
    decide(lo.gt(&hi), "bound crossing", prec)
}

/// The least `N0` with lower bound > upper bound for every `n > N0`, by
/// bisection over `[10, 10^16]`.
pub fn initial_n_bound_at(prec: u64) -> Result<u64> {
    let (mut lo, mut hi) = (10u64, 10u64.pow(16));
    let at = |n: u64| with_precision(prec, PRECISION_CAP_FACTOR, |p| crosses(n, p));
    if at(lo)? || !at(hi)? {
        return Err(Error::NoCrossing("bracket [10, 1e16] does not straddle the crossing".into()));
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if at(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

pub fn initial_n_bound() -> Result<u64> {
    initial_n_bound_at(BOUNDS_PREC)
}

/// Checks that the crossing predicate flips exactly once on a log-spaced grid
/// over `[10, 10^16]`, which together with monotone factors backs the
/// bisection.
pub fn crossing_is_unique(prec: u64) -> Result<bool> {
    let mut grid = vec![];
    let mut base = 10u64;
    while base < 10u64.pow(16) {
        for m in 1..10 {
            grid.push(base * m);
        }
        base *= 10;
    }
    grid.push(10u64.pow(16));
    let flags = grid.iter().map(|&n| crosses(n, prec)).collect::<Result<Vec<_>>>()?;
    let flips = flags.windows(2).filter(|w| w[0] != w[1]).count();
    Ok(flips == 1 && !flags[0] && *flags.last().unwrap())
}
