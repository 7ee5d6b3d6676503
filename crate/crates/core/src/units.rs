//! The units `ε_i = a_i` and `δ_i = a_i - F_n` of each conjugate order, their
//! logarithms, the regulator, and recovery of `(x, y)` from exponents.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::realball::{ball_log, constants, decide, Ball, Dyadic, Round};
use crate::roots::{Check, CheckReport, MonicCubic, RootTriple};
use crate::sequences::ThueInstance;
use crate::solver::verify;

/// `(b1, b2)` in `β = ±ε^b1 δ^b2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentPair {
    pub b1: i64,
    pub b2: i64,
}

/// Units and logs for all three conjugates, 0-indexed internally
/// (`eps[0]` is `ε_1`).
#[derive(Clone, Debug)]
pub struct UnitSystem {
    pub n: u64,
    pub eps: [Ball; 3],
    pub delta: [Ball; 3],
    pub log_eps: [Ball; 3],
    pub log_delta: [Ball; 3],
    /// Rows `(log|ε_i|, log|δ_i|)` for conjugates 1 and 2.
    pub reg_matrix: [[Ball; 2]; 2],
    /// `|det reg_matrix|`.
    pub reg: Ball,
}

/// Enclosures of `a_i - F_n` computed as roots of `f_n(z + F_n)`, so the tiny
/// `δ_1 ~ -α^{-2n}` keeps full relative precision.
pub fn delta_roots(inst: &ThueInstance, roots: &RootTriple) -> Result<[Ball; 3]> {
    let prec = roots.prec();
    let g = MonicCubic::shifted(inst);
    let f = Ball::from_int(inst.fib.clone(), prec);
    let mut out = Vec::with_capacity(3);
    for i in 1..=3 {
        let approx = roots.get(i) - &f;
        let seed = if i == 1 {
            // g(z) ~ -d F z - 1 near zero, d = L - F
            let d = &inst.luc - &inst.fib;
            Dyadic::from_int(-1).div(&Dyadic::from_int(d * &inst.fib), prec + 32, Round::Trunc)
        } else {
            approx.mid().clone()
        };
        let b = g.root_near(seed, prec)?;
        if !b.overlaps(&approx) {
            return Err(Error::NoSignChange(format!("shifted root {i} disagrees at n = {}", inst.n)));
        }
        out.push(b);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

fn det2(m: &[[Ball; 2]; 2]) -> Ball {
    &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
}

impl UnitSystem {
    pub fn build(inst: &ThueInstance, roots: &RootTriple) -> Result<UnitSystem> {
        let eps = [roots.r1.clone(), roots.r2.clone(), roots.r3.clone()];
        let delta = delta_roots(inst, roots)?;
        let logs = |v: &[Ball; 3]| -> Result<[Ball; 3]> {
            Ok([ball_log(&v[0].abs())?, ball_log(&v[1].abs())?, ball_log(&v[2].abs())?])
        };
        let log_eps = logs(&eps)?;
        let log_delta = logs(&delta)?;
        let reg_matrix = [
            [log_eps[0].clone(), log_delta[0].clone()],
            [log_eps[1].clone(), log_delta[1].clone()],
        ];
        let reg = det2(&reg_matrix).abs();
        Ok(UnitSystem { n: inst.n, eps, delta, log_eps, log_delta, reg_matrix, reg })
    }

    pub fn prec(&self) -> u64 {
        self.eps[0].prec()
    }

    /// The matrix `M` of the system for conjugates `k`, `l` (1-based).
    pub fn matrix(&self, k: usize, l: usize) -> [[Ball; 2]; 2] {
        [
            [self.log_eps[k - 1].clone(), self.log_delta[k - 1].clone()],
            [self.log_eps[l - 1].clone(), self.log_delta[l - 1].clone()],
        ]
    }

    /// `‖M⁻¹‖_∞` for conjugates `k`, `l`.
    pub fn minv_norm(&self, k: usize, l: usize) -> Result<Ball> {
        let m = self.matrix(k, l);
        let det = det2(&m).abs();
        let row1 = &m[1][1].abs() + &m[0][1].abs();
        let row2 = &m[1][0].abs() + &m[0][0].abs();
        row1.max(&row2).div(&det).map_err(|_| Error::Singular(format!("M({k},{l}) at n = {}", self.n)))
    }

    /// `β_i = ε_i^b1 δ_i^b2` (signed), conjugate `i` (1-based).
    pub fn beta(&self, i: usize, e: ExponentPair) -> Result<Ball> {
        Ok(&self.eps[i - 1].powi(e.b1)? * &self.delta[i - 1].powi(e.b2)?)
    }

    /// `log|β_i| = b1 log|ε_i| + b2 log|δ_i|`.
    pub fn log_beta(&self, i: usize, e: ExponentPair) -> Ball {
        &self.log_eps[i - 1].mul_int(&BigInt::from(e.b1)) + &self.log_delta[i - 1].mul_int(&BigInt::from(e.b2))
    }
}

pub fn build_units(inst: &ThueInstance, roots: &RootTriple) -> Result<UnitSystem> {
    if inst.n < 10 {
        return Err(Error::InvalidInput(format!("unit bounds are only claimed for n >= 10, got {}", inst.n)));
    }
    UnitSystem::build(inst, roots)
}

/// Checks the defining relation, the regulator window
/// `2(log α)² n² <= R <= 2n²`, and `‖M⁻¹‖_∞ < 7/n` for every conjugate pair.
pub fn certify_units(inst: &ThueInstance, us: &UnitSystem) -> Result<CheckReport> {
    let prec = us.prec();
    let c = constants(prec);
    let mut checks = Vec::new();
    let l = Ball::from_int(inst.luc.clone(), prec);
    for i in 0..3 {
        let prod = &(&us.delta[i] * &(&us.eps[i] - &l)) * &us.eps[i];
        checks.push(Check { name: format!("unit relation, conjugate {}", i + 1), pass: prod.contains_int(1) });
    }
    let n2 = Ball::from_int(BigInt::from(inst.n) * inst.n, prec);
    let lo = &c.log_alpha.sqr().shl(1) * &n2;
    let hi = n2.shl(1);
    let in_window = decide(lo.le(&us.reg), "regulator lower", prec)? && decide(us.reg.le(&hi), "regulator upper", prec)?;
    checks.push(Check { name: "regulator window".into(), pass: in_window });
    let seven_over_n = Ball::from_ratio(7, inst.n, prec);
    for (k, l) in [(1, 2), (1, 3), (2, 3)] {
        let nm = us.minv_norm(k, l)?;
        let ok = decide(nm.lt(&seven_over_n), "inverse norm", prec)?;
        checks.push(Check { name: format!("inverse norm M({k},{l}) < 7/n"), pass: ok });
    }
    Ok(CheckReport { n: inst.n, checks })
}

/// Real solution of `M (b1, b2)^T = (log|β_k|, log|β_l|)^T`.
pub fn solve_b_real(us: &UnitSystem, k: usize, l: usize, log_beta_k: &Ball, log_beta_l: &Ball) -> Result<(Ball, Ball)> {
    if k == l {
        return Err(Error::InvalidInput("conjugates k and l must differ".into()));
    }
    let m = us.matrix(k, l);
    let det = det2(&m);
    if det.contains_zero() {
        return Err(Error::Singular(format!("M({k},{l}) at n = {}", us.n)));
    }
    let b1 = (&(log_beta_k * &m[1][1]) - &(log_beta_l * &m[0][1])).div(&det)?;
    let b2 = (&(&m[0][0] * log_beta_l) - &(&m[1][0] * log_beta_k)).div(&det)?;
    Ok((b1, b2))
}

/// Numerical recovery of `(x, y)` from `β_i = sign ε_i^b1 δ_i^b2`, using
/// conjugates 1 and 2. Returns the pair only if it solves the equation
/// exactly.
pub fn recover_xy(
    inst: &ThueInstance,
    us: &UnitSystem,
    e: ExponentPair,
    sign: i32,
) -> Result<Option<(BigInt, BigInt)>> {
    let prec = us.prec();
    let s = Ball::from_int(sign, prec);
    let b1 = &us.beta(1, e)? * &s;
    let b2 = &us.beta(2, e)? * &s;
    // x - a1 y = β1, x - a2 y = β2
    let y = (&b1 - &b2).div(&(&us.eps[1] - &us.eps[0]))?;
    let x = &b1 + &(&us.eps[0] * &y);
    let quarter = Dyadic::pow2(-2);
    if *y.rad() >= quarter || *x.rad() >= quarter {
        return Err(Error::inconclusive("recovering (x, y)", prec));
    }
    let (Some(xi), Some(yi)) = (x.nearest(), y.nearest()) else {
        return Err(Error::inconclusive("rounding (x, y)", prec));
    };
    // A genuine solution sits within the radius of an integer point.
    if !x.contains_int(xi.clone()) || !y.contains_int(yi.clone()) {
        return Ok(None);
    }
    Ok(verify(inst, &xi, &yi).map(|_| (xi, yi)))
}
