//! The three reduction phases and the per-`n` exponent box.
//!
//! Phase 1 works on `ξ = x_1 log α + x_2 log √5 + x_3 log(√5 - 1)` with global
//! constants. Phases 2 and 3 and the box work per `n` on
//! `Λ = b_1 log|ε_l/ε_k| + b_2 log|δ_l/δ_k| + log|(a_j - a_k)/(a_j - a_l)|`,
//! once for each of the three possible `j`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::convergents::convergent_check;
use super::smart::{reduce_step, ReduceConfig, ReductionState};
use crate::bounds::{initial_n_bound, logy_upper_bound_at, BOUNDS_PREC};
use crate::error::{Error, Result};
use crate::par;
use crate::realball::{ball_exp, ball_log, constants, Ball};
use crate::roots::{approx_roots, working_precision, RootTriple};
use crate::sequences::ThueInstance;
use crate::units::UnitSystem;

/// `(j, k, l)`: `β_j` is the small conjugate, `k`, `l` the other two.
pub const J_CASES: [(usize, usize, usize); 3] = [(1, 3, 2), (2, 1, 3), (3, 1, 2)];

/// `(b_1, b_2, 1)` for the units of the solutions with `|y| <= 1`:
/// `1`, `ε`, `δ` and `(εδ)⁻¹`.
pub const TRIVIAL_EXPONENTS: [[i64; 3]; 4] = [[0, 0, 1], [1, 0, 1], [0, 1, 1], [-1, -1, 1]];

fn ceil_upper(b: &Ball) -> BigInt {
    b.upper().ceil_int()
}

/// `6 U(n) + 39`.
pub fn xi_c2(n: u64, prec: u64) -> Result<Ball> {
    let u = logy_upper_bound_at(n, prec)?;
    Ok(&u.mul_int(&BigInt::from(6)) + &Ball::from_int(39, prec))
}

/// `42 U(n) + 42 n log α + 43`, the bound on each `|x_i|`.
pub fn xi_coeff_bound(n: u64, prec: u64) -> Result<Ball> {
    let u = logy_upper_bound_at(n, prec)?;
    let la = &constants(prec).log_alpha;
    Ok(&(&u + &la.mul_int(&BigInt::from(n))).mul_int(&BigInt::from(42)) + &Ball::from_int(43, prec))
}

/// `7 (U(n) + n log α + 1) / n`, the bound on `|b_1|`, `|b_2|`.
pub fn lambda_coeff_bound(n: u64, prec: u64) -> Result<Ball> {
    let u = logy_upper_bound_at(n, prec)?;
    let la = &constants(prec).log_alpha;
    let s = &(&u + &la.mul_int(&BigInt::from(n))) + &Ball::one(prec);
    s.mul_int(&BigInt::from(7)).div(&Ball::from_int(n, prec))
}

pub fn xi_logs(prec: u64) -> Vec<Ball> {
    let k = constants(prec);
    vec![k.log_alpha.clone(), k.log_sqrt5.clone(), k.log_sqrt5_minus1.clone()]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phase1 {
    #[serde(with = "crate::decimal::int")]
    pub start: u64,
    /// `start` followed by every strictly smaller bound reached.
    #[serde(with = "crate::decimal::ints")]
    pub chain: Vec<u64>,
    /// One step per chain link, plus the final step that did not improve.
    pub steps: Vec<ReductionState>,
    #[serde(with = "crate::decimal::int")]
    pub fixpoint: u64,
}

/// The `ξ` step from the bound `n_bound`.
pub fn xi_step(n_bound: u64, cfg: &ReduceConfig) -> Result<ReductionState> {
    let p = BOUNDS_PREC;
    let x = ceil_upper(&xi_coeff_bound(n_bound, p)?);
    let c3 = constants(p).log_alpha.shl(1);
    let coeff = vec![x.clone(), x.clone(), x];
    reduce_step(&coeff, &xi_c2(n_bound, p)?, &c3, &[], false, p, cfg, &|prec| Ok(xi_logs(prec)))
}

/// Iterates the `ξ` step from `start` until the bound stops decreasing.
pub fn phase1_from(start: u64, cfg: &ReduceConfig) -> Result<Phase1> {
    let mut chain = vec![start];
    let mut steps = Vec::new();
    let mut cur = start;
    loop {
        let st = xi_step(cur, cfg).map_err(|e| e.at("phase 1", cur))?;
        let next = st.new_bound;
        steps.push(st);
        if next >= cur {
            break;
        }
        chain.push(next);
        cur = next;
    }
    Ok(Phase1 { start, chain, steps, fixpoint: cur })
}

/// Phase 1 from the certified crossing of the two `log|y|` bounds.
pub fn phase1(cfg: &ReduceConfig) -> Result<Phase1> {
    phase1_from(initial_n_bound()?, cfg)
}

/// Roots and units of one `n`, memoised by precision.
struct PerN {
    inst: ThueInstance,
    cache: RefCell<HashMap<u64, Rc<(RootTriple, UnitSystem)>>>,
}

impl PerN {
    fn new(n: u64) -> PerN {
        PerN { inst: ThueInstance::new(n), cache: RefCell::new(HashMap::new()) }
    }

    fn at(&self, prec: u64) -> Result<Rc<(RootTriple, UnitSystem)>> {
        if let Some(v) = self.cache.borrow().get(&prec) {
            return Ok(v.clone());
        }
        let roots = approx_roots(&self.inst, prec)?;
        let us = UnitSystem::build(&self.inst, &roots)?;
        let v = Rc::new((roots, us));
        self.cache.borrow_mut().insert(prec, v.clone());
        Ok(v)
    }

    fn lambda_logs(&self, case: (usize, usize, usize), prec: u64) -> Result<Vec<Ball>> {
        let data = self.at(prec)?;
        lambda_logs(&data.0, &data.1, case)
    }
}

/// `log|ε_l/ε_k|`, `log|δ_l/δ_k|`, `log|(a_j - a_k)/(a_j - a_l)|`.
pub fn lambda_logs(roots: &RootTriple, us: &UnitSystem, (j, k, l): (usize, usize, usize)) -> Result<Vec<Ball>> {
    let l1 = &us.log_eps[l - 1] - &us.log_eps[k - 1];
    let l2 = &us.log_delta[l - 1] - &us.log_delta[k - 1];
    let djk = (roots.get(j) - roots.get(k)).abs();
    let djl = (roots.get(j) - roots.get(l)).abs();
    let l3 = &ball_log(&djk)? - &ball_log(&djl)?;
    Ok(vec![l1, l2, l3])
}

/// Result for one `n` of a `Λ` sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NRecord {
    #[serde(with = "crate::decimal::int")]
    pub n: u64,
    /// One step per `j` case, in the order of [`J_CASES`].
    pub cases: Vec<ReductionState>,
    /// Largest bound over the cases.
    #[serde(with = "crate::decimal::int")]
    pub bound: u64,
    pub eliminated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    #[serde(with = "crate::decimal::int")]
    pub lo: u64,
    #[serde(with = "crate::decimal::int")]
    pub hi: u64,
    pub records: Vec<NRecord>,
    /// Largest `n` in range that survived, or `lo - 1`.
    #[serde(with = "crate::decimal::int")]
    pub threshold: u64,
}

impl Sweep {
    pub fn survivors(&self) -> Vec<u64> {
        self.records.iter().filter(|r| !r.eliminated).map(|r| r.n).collect()
    }
}

/// Which upper bound on `|Λ|` a sweep uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaBound {
    /// `2 α⁸ α^(-3n)`, from `|y| >= 2`.
    Plain,
    /// `16 α⁸ α^(-9n)`, from `|y| >= α^(2n)`.
    Strong,
}

impl LambdaBound {
    fn constants(self, prec: u64) -> (Ball, Ball) {
        let k = constants(prec);
        let a8 = k.alpha.powi(8).expect("α > 0");
        match self {
            LambdaBound::Plain => (a8.shl(1), k.log_alpha.mul_int(&BigInt::from(3))),
            LambdaBound::Strong => (a8.shl(4), k.log_alpha.mul_int(&BigInt::from(9))),
        }
    }
}

fn lambda_record(n: u64, kind: LambdaBound, cfg: &ReduceConfig) -> Result<NRecord> {
    let p = BOUNDS_PREC;
    let x = ceil_upper(&lambda_coeff_bound(n, p)?);
    let coeff = vec![x.clone(), x, BigInt::from(1)];
    let (c2, c3) = kind.constants(p);
    let data = PerN::new(n);
    let mut cases = Vec::with_capacity(3);
    for case in J_CASES {
        let st = reduce_step(&coeff, &c2, &c3, &TRIVIAL_EXPONENTS, true, working_precision(n), cfg, &|prec| {
            data.lambda_logs(case, prec)
        })?;
        cases.push(st);
    }
    let bound = cases.iter().map(|s| s.new_bound).max().expect("three cases");
    Ok(NRecord { n, cases, bound, eliminated: bound < n })
}

fn sweep(lo: u64, hi: u64, kind: LambdaBound, phase: &str, cfg: &ReduceConfig) -> Result<Sweep> {
    if lo < 10 || lo > hi {
        return Err(Error::InvalidInput(format!("{phase} needs 10 <= lo <= hi, got [{lo}, {hi}]")));
    }
    let records = par::map_range(lo, hi, |n| lambda_record(n, kind, cfg).map_err(|e| e.at(phase, n)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let threshold = records.iter().filter(|r| !r.eliminated).map(|r| r.n).max().unwrap_or(lo - 1);
    Ok(Sweep { lo, hi, records, threshold })
}

/// Per-`n` reduction of `Λ` with `|Λ| <= 2 α⁸ α^(-3n)`.
pub fn phase2(lo: u64, hi: u64, cfg: &ReduceConfig) -> Result<Sweep> {
    sweep(lo, hi, LambdaBound::Plain, "phase 2", cfg)
}

/// Per-`n` reduction of `Λ` with `|Λ| <= 16 α⁸ α^(-9n)`. That bound needs
/// `|y| >= α^(2n)`, so every `n` in range must pass the convergent check
/// first; the check is run here and a failure is an error.
pub fn phase3(lo: u64, hi: u64, cfg: &ReduceConfig) -> Result<Sweep> {
    if lo < 10 || lo > hi {
        return Err(Error::InvalidInput(format!("phase 3 needs 10 <= lo <= hi, got [{lo}, {hi}]")));
    }
    phase3_after(lo, hi, &convergent_sweep(lo, hi)?, cfg)
}

/// Phase 3 with convergent checks computed earlier. They must cover
/// `[lo, hi]` and all pass.
pub fn phase3_after(lo: u64, hi: u64, checks: &[(u64, bool)], cfg: &ReduceConfig) -> Result<Sweep> {
    for n in lo..=hi {
        match checks.iter().find(|(m, _)| *m == n) {
            Some((_, true)) => {}
            Some((_, false)) => {
                return Err(Error::ConditionFailed("a convergent solves the equation".into()).at("phase 3", n))
            }
            None => return Err(Error::InvalidInput("no convergent check for this n".into()).at("phase 3", n)),
        }
    }
    sweep(lo, hi, LambdaBound::Strong, "phase 3", cfg)
}

/// `(n, convergent_check(n))` over a range.
pub fn convergent_sweep(lo: u64, hi: u64) -> Result<Vec<(u64, bool)>> {
    par::map_range(lo, hi, |n| convergent_check(n).map(|ok| (n, ok)))
        .into_iter()
        .collect()
}

/// Bound on `max(|b_1|, |b_2|)` for one `n`, with the steps that led to it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentBox {
    #[serde(with = "crate::decimal::int")]
    pub n: u64,
    /// Per `j` case: the chain of steps, starting from the a priori bound.
    pub chains: Vec<Vec<ReductionState>>,
    #[serde(with = "crate::decimal::ints")]
    pub per_case: Vec<u64>,
    #[serde(with = "crate::decimal::int")]
    pub bound: u64,
}

/// Reduces the exponent box of one `n >= 10`.
///
/// With `m = ‖M⁻¹‖_∞` for the case's `(k, l)`, `B = max|b_i|` satisfies
/// `B <= m (log|y| + n log α + 1)`, so
/// `|Λ| <= 16 α⁸ |y|^(-3) α^(-3n) <= 16 α⁸ e³ exp(-(3/m) B)`, and the step
/// applies with `N = B`, `c2 = 16 α⁸ e³`, `c3 = 3/m`.
pub fn exponent_box(n: u64, cfg: &ReduceConfig) -> Result<ExponentBox> {
    if n < 10 {
        return Err(Error::InvalidInput(format!("the exponent box needs n >= 10, got {n}")));
    }
    let p = BOUNDS_PREC;
    let k = constants(p);
    let c2 = &(k.alpha.powi(8)?.shl(4)) * &ball_exp(&Ball::from_int(3, p))?;
    let x0 = ceil_upper(&lambda_coeff_bound(n, p)?);
    let data = PerN::new(n);
    let wp = working_precision(n);
    let mut chains = Vec::new();
    let mut per_case = Vec::new();
    for case in J_CASES {
        let m = data.at(wp)?.1.minv_norm(case.1, case.2)?;
        let c3 = Ball::from_int(3, p).div(&m)?;
        let mut x = x0.clone();
        let mut chain = Vec::new();
        loop {
            let coeff = vec![x.clone(), x.clone(), BigInt::from(1)];
            let st = reduce_step(&coeff, &c2, &c3, &TRIVIAL_EXPONENTS, true, wp, cfg, &|prec| data.lambda_logs(case, prec))
                .map_err(|e| e.at("exponent box", n))?;
            let next = BigInt::from(st.new_bound);
            chain.push(st);
            if next >= x {
                break;
            }
            x = next;
        }
        per_case.push(u64::try_from(&x).map_err(|_| Error::Domain("exponent box did not shrink".into()))?);
        chains.push(chain);
    }
    let bound = *per_case.iter().max().expect("three cases");
    Ok(ExponentBox { n, chains, per_case, bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_at_1144e12() {
        let n = 1_144_000_000_000_000;
        let c2 = xi_c2(n, 192).unwrap().to_f64();
        let cx = xi_coeff_bound(n, 192).unwrap().to_f64();
        assert!((c2 / 2.036e108 - 1.0).abs() < 1e-3);
        assert!((cx / 1.425e109 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn strong_bound_substitution() {
        // 16 α⁸ |y|^-3 α^-3n with |y| = α^2n is exactly 16 α⁸ α^-9n.
        let p = 128;
        let k = constants(p);
        for n in [49i64, 100, 132] {
            let y = k.alpha.powi(2 * n).unwrap();
            let lhs = &(&k.alpha.powi(8).unwrap().shl(4) * &y.powi(-3).unwrap()) * &k.alpha.powi(-3 * n).unwrap();
            let rhs = &k.alpha.powi(8).unwrap().shl(4) * &k.alpha.powi(-9 * n).unwrap();
            assert!(lhs.overlaps(&rhs));
        }
    }

    #[test]
    fn trivial_exponents_give_trivial_units() {
        use crate::algebra::Ring;
        for n in [10u64, 25] {
            let inst = ThueInstance::new(n);
            let r = Ring::new(&inst);
            for [b1, b2, _] in TRIVIAL_EXPONENTS {
                let (x, y) = r.unit(b1, b2).as_linear().expect("linear");
                assert!(crate::solver::verify(&inst, &x, &y).is_some());
                assert!(y.magnitude() <= &1u32.into());
            }
        }
    }

    #[test]
    fn lambda_logs_are_consistent() {
        // The trivial solution (F, 1) has β_i = F - a_i, smallest at i = 1.
        // Λ computed straight from the β must equal the linear form at one of
        // the trivial exponent vectors.
        let inst = ThueInstance::new(20);
        let p = 256;
        let roots = approx_roots(&inst, p).unwrap();
        let us = UnitSystem::build(&inst, &roots).unwrap();
        let (j, k, l) = J_CASES[0];
        let logs = lambda_logs(&roots, &us, (j, k, l)).unwrap();
        let f = Ball::from_int(inst.fib.clone(), p);
        let beta = |i: usize| &f - roots.get(i);
        let num = &(roots.get(j) - roots.get(k)) * &beta(l);
        let den = &(roots.get(j) - roots.get(l)) * &beta(k);
        let direct = ball_log(&num.div(&den).unwrap().abs()).unwrap();
        let hits: Vec<_> = TRIVIAL_EXPONENTS
            .iter()
            .filter(|e| e[2] == 1)
            .filter(|[b1, b2, _]| {
                let form = &(&logs[0].mul_int(&BigInt::from(*b1)) + &logs[1].mul_int(&BigInt::from(*b2))) + &logs[2];
                form.overlaps(&direct)
            })
            .collect();
        assert_eq!(hits.len(), 1, "{hits:?}");
        assert!(direct.mag().log2_abs() < -30.0);
    }

    #[test]
    fn exponent_box_is_small() {
        let b = exponent_box(12, &ReduceConfig::default()).unwrap();
        assert!(b.bound <= 40, "{:?}", b.per_case);
        for chain in &b.chains {
            for st in chain {
                assert!(st.condition_holds());
            }
        }
    }

    #[test]
    fn phase2_short_range() {
        let s = phase2(200, 202, &ReduceConfig::default()).unwrap();
        assert!(s.survivors().is_empty(), "{:?}", s.records.iter().map(|r| r.bound).collect::<Vec<_>>());
        assert_eq!(s.threshold, 199);
    }
}
