//! The whole proof end to end, and its certificate.
//!
//! `run_all` bounds `n`, runs the three reductions, checks the convergents,
//! and solves every `n` that is left. `verify_certificate` re-checks a
//! certificate with integer arithmetic only: lattice steps are recomputed
//! from the recorded rounded logs, every solution is re-evaluated, and the
//! covered ranges must tile `[1, initial_bound]`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bounds::initial_n_bound;
use crate::error::{Error, Result};
use crate::par;
use crate::reduction::lll::check_delta;
use crate::reduction::{
    convergent_sweep, exponent_box, phase1_from, phase2, phase3_after, recheck, C4Rule, ExponentBox, Phase1,
    ReduceConfig, ReductionState, Sweep, TRIVIAL_EXPONENTS,
};
use crate::sequences::ThueInstance;
use crate::solver::{brute_force, solve, trivial_solutions, verify, SolutionSet};

pub const SCHEMA_VERSION: u32 = 1;

/// First `n` handled by the per-`n` phases; everything below is solved
/// directly.
pub const PHASE_LO: u64 = 49;

/// Below this `n` the root and log estimates do not apply and completeness rests
/// on the oracle comparison.
pub const REDUCTION_MIN_N: u64 = 10;

/// Exponent box for the oracle-verified range.
pub const SMALL_N_BOX: u64 = 20;

/// `|y|` range of the brute-force oracle.
pub const ORACLE_Y_MAX: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// Floor on the working precision of every lattice step; 0 leaves it
    /// to the per-`n` default.
    #[serde(with = "crate::decimal::int")]
    pub precision_bits: u64,
    /// LLL parameter as `p/q`.
    pub lll_delta: String,
    pub rounding: String,
    pub c4_rule: C4Rule,
    #[serde(with = "crate::decimal::int")]
    pub c_factor: u64,
    #[serde(with = "crate::decimal::int")]
    pub max_retries: u32,
    #[serde(with = "crate::decimal::int")]
    pub enum_cap: u64,
    /// Solve `1..=max_n` directly and skip the reduction.
    #[serde(with = "crate::decimal::opt_int")]
    pub max_n: Option<u64>,
    pub version: String,
}

impl Default for Config {
    fn default() -> Self {
        let r = ReduceConfig::default();
        Config {
            precision_bits: 0,
            lll_delta: r.delta.to_string(),
            rounding: "nearest, ties away from zero".into(),
            c4_rule: r.rule,
            c_factor: r.c_factor,
            max_retries: r.max_retries,
            enum_cap: r.enum_cap,
            max_n: None,
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

/// Parses `p/q` or a decimal such as `0.99`.
pub fn parse_delta(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("cannot parse LLL parameter {s:?}"));
    let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
    let v = if let Some((p, q)) = s.split_once('/') {
        let q = int(q)?;
        if q == BigInt::from(0) {
            return Err(bad());
        }
        BigRational::new(int(p)?, q)
    } else if let Some((w, f)) = s.split_once('.') {
        if f.is_empty() || !f.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = BigInt::from(10).pow(f.len() as u32);
        BigRational::new(int(if w.is_empty() { "0" } else { w })? * &den + int(f)?, den)
    } else {
        BigRational::from_integer(int(s)?)
    };
    check_delta(&v)?;
    Ok(v)
}

impl Config {
    pub fn reduce_config(&self) -> Result<ReduceConfig> {
        if self.c_factor < 2 {
            return Err(Error::InvalidInput("c factor must be at least 2".into()));
        }
        Ok(ReduceConfig {
            delta: parse_delta(&self.lll_delta)?,
            c_factor: self.c_factor,
            max_retries: self.max_retries,
            enum_cap: self.enum_cap,
            rule: self.c4_rule,
            min_prec: self.precision_bits,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// The exponent box comes from a certified reduction step.
    ReductionCertified,
    /// `n < 10`: the box is the default and agrees with exhaustive search.
    OracleVerified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solved {
    pub provenance: Provenance,
    /// Exponent box that was enumerated.
    #[serde(with = "crate::decimal::int")]
    pub box_bound: u64,
    /// `|y|` range of the exhaustive search, for oracle-verified `n`.
    #[serde(with = "crate::decimal::opt_int")]
    pub oracle_y_max: Option<u64>,
    pub solutions: SolutionSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergentCheck {
    #[serde(with = "crate::decimal::int")]
    pub n: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergentRange {
    #[serde(with = "crate::decimal::int")]
    pub lo: u64,
    #[serde(with = "crate::decimal::int")]
    pub hi: u64,
    pub checks: Vec<ConvergentCheck>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cover {
    Solved,
    Phase1,
    Phase2,
    Phase3,
}

/// `[lo, hi]` is settled by `by`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Covered {
    #[serde(with = "crate::decimal::int")]
    pub lo: u64,
    #[serde(with = "crate::decimal::int")]
    pub hi: u64,
    pub by: Cover,
}

/// The lattice data behind the summary numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub phase1: Option<Phase1>,
    pub phase2: Option<Sweep>,
    pub phase3: Option<Sweep>,
    /// One per reduction-certified `n`.
    pub boxes: Vec<ExponentBox>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(with = "crate::decimal::int")]
    pub schema_version: u32,
    pub config: Config,
    /// Only `1..=max_n` is covered; the reduction was skipped.
    pub partial: bool,
    #[serde(with = "crate::decimal::opt_int")]
    pub initial_bound: Option<u64>,
    #[serde(with = "crate::decimal::ints")]
    pub phase1_chain: Vec<u64>,
    #[serde(with = "crate::decimal::opt_int")]
    pub phase2_threshold: Option<u64>,
    pub convergent_range: Option<ConvergentRange>,
    #[serde(with = "crate::decimal::opt_int")]
    pub phase3_threshold: Option<u64>,
    pub solved: BTreeMap<u64, Solved>,
    pub coverage: Vec<Covered>,
    pub evidence: Evidence,
}

impl Certificate {
    /// `n` with solutions beyond the trivial ones.
    pub fn exceptional(&self) -> Vec<u64> {
        self.solved
            .iter()
            .filter(|(_, s)| !s.solutions.nontrivial().is_empty())
            .map(|(n, _)| *n)
            .collect()
    }

    /// Upper end of what the certificate covers.
    pub fn covered_up_to(&self) -> u64 {
        self.coverage.iter().map(|c| c.hi).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Solves one `n` with the box its provenance calls for.
pub fn solve_n(n: u64, cfg: &ReduceConfig) -> Result<(Solved, Option<ExponentBox>)> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let inst = ThueInstance::new(n);
    if n < REDUCTION_MIN_N {
        let set = solve(&inst, SMALL_N_BOX);
        let oracle = brute_force(&inst, ORACLE_Y_MAX as i64);
        if set != oracle {
            return Err(Error::ConditionFailed("unit enumeration disagrees with exhaustive search".into()).at("solve", n));
        }
        let solved = Solved {
            provenance: Provenance::OracleVerified,
            box_bound: SMALL_N_BOX,
            oracle_y_max: Some(ORACLE_Y_MAX),
            solutions: set,
        };
        return Ok((solved, None));
    }
    let b = exponent_box(n, cfg)?;
    let bound = b.bound.max(1);
    let solved = Solved {
        provenance: Provenance::ReductionCertified,
        box_bound: bound,
        oracle_y_max: None,
        solutions: solve(&inst, bound),
    };
    Ok((solved, Some(b)))
}

fn solve_range(hi: u64, cfg: &ReduceConfig) -> Result<(BTreeMap<u64, Solved>, Vec<ExponentBox>)> {
    let all = par::map_range(1, hi, |n| solve_n(n, cfg).map(|r| (n, r)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut solved = BTreeMap::new();
    let mut boxes = Vec::new();
    for (n, (s, b)) in all {
        solved.insert(n, s);
        boxes.extend(b);
    }
    Ok((solved, boxes))
}

/// Runs the pipeline. With `max_n` set only `1..=max_n` is solved.
pub fn run_all(config: &Config) -> Result<Certificate> {
    let cfg = config.reduce_config()?;
    if let Some(m) = config.max_n {
        if m == 0 {
            return Err(Error::InvalidInput("max-n must be at least 1".into()));
        }
        let (solved, boxes) = solve_range(m, &cfg)?;
        return Ok(Certificate {
            schema_version: SCHEMA_VERSION,
            config: config.clone(),
            partial: true,
            initial_bound: None,
            phase1_chain: vec![],
            phase2_threshold: None,
            convergent_range: None,
            phase3_threshold: None,
            solved,
            coverage: vec![Covered { lo: 1, hi: m, by: Cover::Solved }],
            evidence: Evidence { phase1: None, phase2: None, phase3: None, boxes },
        });
    }

    let n0 = initial_n_bound()?;
    let p1 = phase1_from(n0, &cfg)?;
    let s2 = phase2(PHASE_LO, p1.fixpoint.max(PHASE_LO), &cfg)?;
    let (conv, s3) = if s2.threshold >= PHASE_LO {
        let checks = convergent_sweep(PHASE_LO, s2.threshold)?;
        let s3 = phase3_after(PHASE_LO, s2.threshold, &checks, &cfg)?;
        let conv = ConvergentRange {
            lo: PHASE_LO,
            hi: s2.threshold,
            checks: checks.into_iter().map(|(n, holds)| ConvergentCheck { n, holds }).collect(),
        };
        (Some(conv), Some(s3))
    } else {
        (None, None)
    };
    let t3 = s3.as_ref().map_or(s2.threshold, |s| s.threshold);
    let top = t3.max(PHASE_LO - 1);
    let (solved, boxes) = solve_range(top, &cfg)?;

    let mut coverage = vec![Covered { lo: 1, hi: top, by: Cover::Solved }];
    let mut push = |lo: u64, hi: u64, by: Cover| {
        if lo <= hi {
            coverage.push(Covered { lo, hi, by });
        }
    };
    push(top + 1, s2.threshold, Cover::Phase3);
    push(s2.threshold.max(top) + 1, p1.fixpoint, Cover::Phase2);
    push(p1.fixpoint.max(top) + 1, n0, Cover::Phase1);

    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        partial: false,
        initial_bound: Some(n0),
        phase1_chain: p1.chain.clone(),
        phase2_threshold: Some(s2.threshold),
        convergent_range: conv,
        phase3_threshold: s3.as_ref().map(|s| s.threshold),
        solved,
        coverage,
        evidence: Evidence { phase1: Some(p1), phase2: Some(s2), phase3: s3, boxes },
    })
}

/// What `verify_certificate` looked at.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub steps_rechecked: usize,
    pub solutions_checked: usize,
    pub covered_up_to: u64,
    pub exceptional: Vec<u64>,
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Certificate(msg.into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(reject(msg()))
    }
}

struct Checker {
    delta: BigRational,
    enum_cap: u64,
    report: VerifyReport,
}

impl Checker {
    fn step(&mut self, st: &ReductionState, what: &str) -> Result<()> {
        recheck(st, &self.delta, self.enum_cap).map_err(|e| reject(format!("{what}: {e}")))?;
        self.report.steps_rechecked += 1;
        Ok(())
    }

    fn lambda_step(&mut self, st: &ReductionState, what: &str) -> Result<()> {
        ensure(st.last_is_one && st.excluded == TRIVIAL_EXPONENTS, || format!("{what}: wrong linear form"))?;
        ensure(st.coeff_bounds.len() == 3 && st.coeff_bounds[2] == BigInt::from(1), || {
            format!("{what}: last coefficient bound must be 1")
        })?;
        self.step(st, what)
    }

    fn phase1(&mut self, p1: &Phase1, n0: u64) -> Result<()> {
        ensure(p1.start == n0 && p1.chain.first() == Some(&n0), || "phase 1 does not start at the initial bound".into())?;
        ensure(p1.chain.windows(2).all(|w| w[1] < w[0]), || "phase 1 chain is not decreasing".into())?;
        ensure(p1.steps.len() == p1.chain.len(), || "phase 1 needs one step per link".into())?;
        ensure(p1.fixpoint == *p1.chain.last().expect("nonempty"), || "phase 1 fixpoint mismatch".into())?;
        for (i, st) in p1.steps.iter().enumerate() {
            ensure(!st.last_is_one && st.excluded.is_empty(), || "phase 1 step has the wrong form".into())?;
            match p1.chain.get(i + 1) {
                Some(&next) => ensure(st.new_bound == next, || format!("phase 1 step {i} does not give the next link"))?,
                None => ensure(st.new_bound >= p1.fixpoint, || "phase 1 stopped while still decreasing".into())?,
            }
            self.step(st, &format!("phase 1 step {i}"))?;
        }
        Ok(())
    }

    fn sweep(&mut self, s: &Sweep, lo: u64, hi: u64, name: &str) -> Result<()> {
        ensure(s.lo == lo && s.hi == hi, || format!("{name} range is [{}, {}], expected [{lo}, {hi}]", s.lo, s.hi))?;
        ensure(s.records.len() as u64 == hi - lo + 1, || format!("{name} is missing records"))?;
        for (r, n) in s.records.iter().zip(lo..=hi) {
            ensure(r.n == n, || format!("{name} records out of order at {n}"))?;
            ensure(r.cases.len() == 3, || format!("{name} n = {n} needs three cases"))?;
            let max = r.cases.iter().map(|c| c.new_bound).max().expect("three");
            ensure(r.bound == max && r.eliminated == (r.bound < n), || format!("{name} n = {n} verdict mismatch"))?;
            for (j, st) in r.cases.iter().enumerate() {
                ensure(st.coeff_bounds == r.cases[0].coeff_bounds, || format!("{name} n = {n} cases disagree"))?;
                self.lambda_step(st, &format!("{name} n = {n} case {j}"))?;
            }
        }
        let t = s.records.iter().filter(|r| !r.eliminated).map(|r| r.n).max().unwrap_or(lo - 1);
        ensure(s.threshold == t, || format!("{name} threshold should be {t}"))
    }

    fn exponent_box(&mut self, b: &ExponentBox) -> Result<()> {
        let n = b.n;
        ensure(b.chains.len() == 3 && b.per_case.len() == 3, || format!("box n = {n} needs three cases"))?;
        for (j, (chain, &last)) in b.chains.iter().zip(&b.per_case).enumerate() {
            ensure(!chain.is_empty(), || format!("box n = {n} case {j} is empty"))?;
            for (i, st) in chain.iter().enumerate() {
                let x = &st.coeff_bounds;
                ensure(x.len() == 3 && x[0] == x[1], || format!("box n = {n} case {j} step {i} malformed"))?;
                if i > 0 {
                    let prev = BigInt::from(chain[i - 1].new_bound);
                    ensure(x[0] == prev && x[1] == prev && prev < chain[i - 1].coeff_bounds[0], || {
                        format!("box n = {n} case {j} step {i} does not continue the chain")
                    })?;
                }
                self.lambda_step(st, &format!("box n = {n} case {j} step {i}"))?;
            }
            let end = chain.last().expect("nonempty");
            ensure(BigInt::from(end.new_bound) >= end.coeff_bounds[0] && end.coeff_bounds[0] == BigInt::from(last), || {
                format!("box n = {n} case {j} does not end at its fixpoint")
            })?;
        }
        ensure(b.bound == *b.per_case.iter().max().expect("three"), || format!("box n = {n} bound mismatch"))
    }

    fn solved(&mut self, n: u64, s: &Solved, boxes: &BTreeMap<u64, &ExponentBox>) -> Result<()> {
        let inst = ThueInstance::new(n);
        ensure(s.solutions.n == n, || format!("solution set filed under {n} is for {}", s.solutions.n))?;
        for sol in &s.solutions.solutions {
            ensure(verify(&inst, &sol.x, &sol.y) == Some(sol.value), || {
                format!("n = {n}: ({}, {}) is not a solution with value {}", sol.x, sol.y, sol.value)
            })?;
            self.report.solutions_checked += 1;
        }
        let pairs = s.solutions.pairs();
        for (x, y) in &pairs {
            let neg = (-x, -y);
            ensure(pairs.contains(&neg), || format!("n = {n}: set not closed under negation"))?;
        }
        for t in trivial_solutions(&inst).pairs() {
            ensure(pairs.contains(&t), || format!("n = {n}: trivial solution ({}, {}) missing", t.0, t.1))?;
        }
        match s.provenance {
            Provenance::OracleVerified => {
                ensure(n < REDUCTION_MIN_N, || format!("n = {n} is large enough to need a reduction"))?;
                let y = s.oracle_y_max.ok_or_else(|| reject(format!("n = {n}: no oracle range")))?;
                ensure(brute_force(&inst, y as i64) == s.solutions, || format!("n = {n}: oracle disagrees"))?;
            }
            Provenance::ReductionCertified => {
                let b = boxes.get(&n).ok_or_else(|| reject(format!("n = {n}: no exponent box")))?;
                ensure(s.box_bound >= b.bound.max(1), || format!("n = {n}: enumerated box smaller than certified"))?;
            }
        }
        ensure(solve(&inst, s.box_bound) == s.solutions, || format!("n = {n}: enumeration of the box disagrees"))
    }
}

/// Re-checks every exact claim of a certificate.
pub fn verify_certificate(cert: &Certificate) -> Result<VerifyReport> {
    ensure(cert.schema_version == SCHEMA_VERSION, || format!("unknown schema version {}", cert.schema_version))?;
    let cfg = cert.config.reduce_config().map_err(|e| reject(format!("config: {e}")))?;
    let mut ck = Checker { delta: cfg.delta.clone(), enum_cap: cfg.enum_cap, report: VerifyReport::default() };
    let ev = &cert.evidence;

    let top = if cert.partial {
        let m = cert.config.max_n.ok_or_else(|| reject("partial certificate without max-n"))?;
        ensure(ev.phase1.is_none() && ev.phase2.is_none() && ev.phase3.is_none(), || "partial certificate has phases".into())?;
        m
    } else {
        let n0 = cert.initial_bound.ok_or_else(|| reject("no initial bound"))?;
        let p1 = ev.phase1.as_ref().ok_or_else(|| reject("no phase 1 record"))?;
        ensure(cert.phase1_chain == p1.chain, || "phase 1 chain differs from its record".into())?;
        ck.phase1(p1, n0)?;
        let s2 = ev.phase2.as_ref().ok_or_else(|| reject("no phase 2 record"))?;
        ck.sweep(s2, PHASE_LO, p1.fixpoint.max(PHASE_LO), "phase 2")?;
        ensure(cert.phase2_threshold == Some(s2.threshold), || "phase 2 threshold differs from its record".into())?;
        let t2 = s2.threshold;
        if t2 >= PHASE_LO {
            let conv = cert.convergent_range.as_ref().ok_or_else(|| reject("no convergent checks"))?;
            ensure(conv.lo == PHASE_LO && conv.hi == t2, || "convergent range does not match phase 3".into())?;
            let ns: Vec<u64> = conv.checks.iter().map(|c| c.n).collect();
            ensure(ns == (PHASE_LO..=t2).collect::<Vec<_>>(), || "convergent checks do not cover the range".into())?;
            ensure(conv.checks.iter().all(|c| c.holds), || "a convergent check failed".into())?;
            let s3 = ev.phase3.as_ref().ok_or_else(|| reject("no phase 3 record"))?;
            ck.sweep(s3, PHASE_LO, t2, "phase 3")?;
            ensure(cert.phase3_threshold == Some(s3.threshold), || "phase 3 threshold differs from its record".into())?;
        } else {
            ensure(ev.phase3.is_none() && cert.phase3_threshold.is_none(), || "phase 3 record without a range".into())?;
        }
        let t3 = cert.phase3_threshold.unwrap_or(t2);
        ensure(n0 >= p1.fixpoint && p1.fixpoint >= t2 && t2 >= t3, || "thresholds increase along the pipeline".into())?;
        n0
    };

    let mut boxes = BTreeMap::new();
    for b in &ev.boxes {
        ck.exponent_box(b)?;
        ensure(boxes.insert(b.n, b).is_none(), || format!("two exponent boxes for n = {}", b.n))?;
    }
    for (&n, s) in &cert.solved {
        ck.solved(n, s, &boxes)?;
    }

    let mut cov = cert.coverage.clone();
    cov.sort_by_key(|c| c.lo);
    let mut next = 1u64;
    for c in &cov {
        ensure(c.lo == next && c.lo <= c.hi, || format!("coverage gap or overlap at {next}"))?;
        match c.by {
            Cover::Solved => {
                ensure((c.lo..=c.hi).all(|n| cert.solved.contains_key(&n)), || "solved range has a hole".into())?;
            }
            Cover::Phase1 => {
                let p1 = ev.phase1.as_ref().ok_or_else(|| reject("phase 1 cover without a record"))?;
                ensure(c.lo > p1.fixpoint, || "phase 1 cover below its fixpoint".into())?;
            }
            Cover::Phase2 | Cover::Phase3 => {
                let s = if c.by == Cover::Phase2 { &ev.phase2 } else { &ev.phase3 };
                let s = s.as_ref().ok_or_else(|| reject("phase cover without a record"))?;
                let ok = (c.lo..=c.hi).all(|n| s.records.iter().any(|r| r.n == n && r.eliminated));
                ensure(ok, || format!("[{}, {}] is not eliminated by {:?}", c.lo, c.hi, c.by))?;
            }
        }
        next = c.hi + 1;
    }
    ensure(next == top + 1, || format!("coverage stops at {} instead of {top}", next - 1))?;

    ck.report.covered_up_to = top;
    ck.report.exceptional = cert.exceptional();
    Ok(ck.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_parsing() {
        assert_eq!(parse_delta("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_delta("0.99").unwrap(), BigRational::new(99.into(), 100.into()));
        assert_eq!(parse_delta(".5").unwrap(), BigRational::new(1.into(), 2.into()));
        for bad in ["1", "1/4", "x", "3/0", "0.", "2/3/4"] {
            assert!(parse_delta(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn partial_run_roundtrips_and_verifies() {
        let config = Config { max_n: Some(12), ..Config::default() };
        let cert = run_all(&config).unwrap();
        assert!(cert.partial);
        assert_eq!(cert.exceptional(), vec![1, 3]);
        assert_eq!(cert.solved[&5].provenance, Provenance::OracleVerified);
        assert_eq!(cert.solved[&11].provenance, Provenance::ReductionCertified);
        let json = cert.to_json().unwrap();
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(back, cert);
        let rep = verify_certificate(&back).unwrap();
        assert_eq!(rep.covered_up_to, 12);
        // Three boxes (n = 10, 11, 12), three cases, at least one step each.
        assert!(rep.steps_rechecked >= 9);
    }
}
