//! Certified enclosures of the three real roots of `f_n(X) = (X - F_n)(X - L_n)X - 1`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::realball::{ball_log, constants, decide, Ball, Dyadic, Round};
use crate::sequences::ThueInstance;

/// Enclosures of the roots, labelled by proximity: `r1` near `F_n`, `r2` near
/// `L_n`, `r3` near zero.
#[derive(Clone, Debug)]
pub struct RootTriple {
    pub n: u64,
    pub r1: Ball,
    pub r2: Ball,
    pub r3: Ball,
}

impl RootTriple {
    /// Root `i` in 1-based labelling.
    pub fn get(&self, i: usize) -> &Ball {
        match i {
            1 => &self.r1,
            2 => &self.r2,
            3 => &self.r3,
            _ => panic!("root index {i} out of range"),
        }
    }

    pub fn prec(&self) -> u64 {
        self.r1.prec()
    }
}

/// `x³ + c2 x² + c1 x + c0` with integer coefficients.
#[derive(Clone, Debug)]
pub(crate) struct MonicCubic {
    pub c2: BigInt,
    pub c1: BigInt,
    pub c0: BigInt,
}

impl MonicCubic {
    /// `f_n` itself.
    pub fn of(inst: &ThueInstance) -> MonicCubic {
        let (s, p) = inst.sp();
        MonicCubic { c2: -s, c1: p, c0: BigInt::from(-1) }
    }

    /// `f_n(z + F_n)`, whose roots are `a_i - F_n`.
    pub fn shifted(inst: &ThueInstance) -> MonicCubic {
        // z (z - d)(z + F) - 1 with d = L - F
        let d = &inst.luc - &inst.fib;
        MonicCubic { c2: &inst.fib - &d, c1: -(&d * &inst.fib), c0: BigInt::from(-1) }
    }

    fn eval(&self, x: &Dyadic) -> Dyadic {
        let t = x.add(&Dyadic::from_int(self.c2.clone())).mul(x);
        t.add(&Dyadic::from_int(self.c1.clone())).mul(x).add(&Dyadic::from_int(self.c0.clone()))
    }

    fn deriv(&self, x: &Dyadic) -> Dyadic {
        let t = x.mul(&Dyadic::from_int(3)).add(&Dyadic::from_int(&self.c2 << 1usize)).mul(x);
        t.add(&Dyadic::from_int(self.c1.clone()))
    }

    /// Newton iteration on exact dyadics, rounding each iterate to `w` bits.
    fn newton(&self, seed: Dyadic, w: u64) -> Result<Dyadic> {
        let mut x = seed;
        let mut settled = 0;
        for _ in 0..400 {
            let d = self.deriv(&x);
            if d.is_zero() {
                return Err(Error::NoSignChange("flat derivative in Newton step".into()));
            }
            let step = self.eval(&x).div(&d, w, Round::Trunc);
            x = x.sub(&step).round(w, Round::Trunc);
            let scale = x.top().max(0);
            if step.is_zero() || step.top() <= scale - w as i64 + 4 {
                settled += 1;
                if settled == 2 {
                    return Ok(x);
                }
            }
        }
        Err(Error::NoSignChange("Newton did not settle".into()))
    }

    /// Smallest bracket `x ± k` (k a power of two, relative size between
    /// `2^-prec` and `2^-prec/2`) across which the cubic changes sign. The
    /// arithmetic is exact, so the bracket proves a root lies inside.
    fn bracket(&self, x: &Dyadic, prec: u64) -> Result<Dyadic> {
        let scale = if x.is_zero() { 1 } else { x.top() };
        for e in (scale - prec as i64)..=(scale - (prec / 2) as i64) {
            let k = Dyadic::pow2(e);
            let a = self.eval(&x.sub(&k));
            let b = self.eval(&x.add(&k));
            if a.sign() != b.sign() && !a.is_zero() && !b.is_zero() {
                return Ok(k);
            }
        }
        Err(Error::NoSignChange(format!("no certified bracket at {prec} bits")))
    }

    /// Certified enclosure of the root Newton reaches from `seed`.
    pub fn root_near(&self, seed: Dyadic, prec: u64) -> Result<Ball> {
        let x = self.newton(seed, prec + 32)?;
        let k = self.bracket(&x, prec)?;
        Ok(Ball::new(x, k, prec))
    }
}

/// Working precision for per-`n` numerics: `3n + 30` bits, never below 64.
pub fn working_precision(n: u64) -> u64 {
    (3 * n + 30).max(64)
}

/// Certified enclosures of the three real roots of `f_n` for `n >= 3`.
///
/// Radii are at most `2^(-prec/2)` relative to the root, in practice a few ulps.
pub fn approx_roots(inst: &ThueInstance, prec: u64) -> Result<RootTriple> {
    if inst.n < 3 {
        return Err(Error::InvalidInput(format!("f_n has one real root for n = {}", inst.n)));
    }
    if prec < 64 {
        return Err(Error::InvalidInput("root precision below 64 bits".into()));
    }
    let w = prec + 32;
    // r3 ~ 1/(F_n L_n) because f_n(x) ~ F_n L_n x - 1 near zero.
    let seed3 = Dyadic::one().div(&Dyadic::from_int(inst.coeff_bound.clone()), w, Round::Trunc);
    let seeds = [
        Dyadic::from_int(inst.fib.clone()),
        Dyadic::from_int(inst.luc.clone()),
        seed3,
    ];
    let cubic = MonicCubic::of(inst);
    let mut balls = seeds
        .into_iter()
        .map(|s| cubic.root_near(s, prec))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::NoSignChange(format!("n = {}: {e}", inst.n)))?;
    let r3 = balls.pop().unwrap();
    let r2 = balls.pop().unwrap();
    let r1 = balls.pop().unwrap();
    let ordered = r3.lt(&r1) == Some(true) && r1.lt(&r2) == Some(true);
    if !ordered {
        return Err(Error::NoSignChange(format!(
            "root enclosures at n = {} are not disjoint and ordered",
            inst.n
        )));
    }
    Ok(RootTriple { n: inst.n, r1, r2, r3 })
}

/// One named pass/fail line of a numerical check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub n: u64,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }
}

fn require_pipeline_range(inst: &ThueInstance) -> Result<()> {
    if inst.n < 10 {
        return Err(Error::InvalidInput(format!(
            "root asymptotics are only claimed for n >= 10, got {}",
            inst.n
        )));
    }
    Ok(())
}

/// Certifies the three root brackets `p ± kappa` by a sign change of `f_n`,
/// and that each computed enclosure sits inside its bracket.
pub fn certify_root_brackets(inst: &ThueInstance, roots: &RootTriple) -> Result<CheckReport> {
    require_pipeline_range(inst)?;
    let prec = roots.prec();
    let c = constants(prec);
    let n = inst.n as i64;
    let a2n = c.alpha.powi(-2 * n)?;
    let a4n = a2n.sqr();
    let brackets = [
        ("root near F_n", Ball::from_int(inst.fib.clone(), prec), a2n.mul_int(&BigInt::from(6)), &roots.r1),
        ("root near L_n", Ball::from_int(inst.luc.clone(), prec), a2n.mul_int(&BigInt::from(4)), &roots.r2),
        ("root near 0", &c.sqrt5 * &a2n, a4n, &roots.r3),
    ];
    let mut checks = Vec::new();
    for (name, p, kappa, r) in brackets {
        let lo = &p - &kappa;
        let hi = &p + &kappa;
        let fl = inst.poly_ball(&lo);
        let fh = inst.poly_ball(&hi);
        let product = &fl * &fh;
        let sign_change = decide(product.lt(&Ball::zero(prec)), name, prec)?;
        let inside = decide(
            lo.lt(r).and_then(|a| r.lt(&hi).map(|b| a && b)),
            name,
            prec,
        )?;
        checks.push(Check { name: format!("{name}: sign change"), pass: sign_change });
        checks.push(Check { name: format!("{name}: enclosure inside bracket"), pass: inside });
    }
    Ok(CheckReport { n: inst.n, checks })
}

/// Certifies the six logarithmic estimates for `log|a_i|` and `log|a_i - F_n|`.
pub fn certify_log_estimates(inst: &ThueInstance, roots: &RootTriple) -> Result<CheckReport> {
    require_pipeline_range(inst)?;
    let prec = roots.prec();
    let c = constants(prec);
    let n = inst.n as i64;
    let nla = c.log_alpha.mul_int(&BigInt::from(n));
    let an = c.alpha.powi(-n)?;
    let a2n = c.alpha.powi(-2 * n)?;
    let f = Ball::from_int(inst.fib.clone(), prec);
    let k = |v: i64, b: &Ball| b.mul_int(&BigInt::from(v));
    // log(5/(sqrt5 - 1)) and log(1 - 1/sqrt5)
    let log_5_over = &c.log_sqrt5.shl(1) - &c.log_sqrt5_minus1;
    let log_one_minus = &c.log_sqrt5_minus1 - &c.log_sqrt5;
    let cases: [(&str, Ball, Ball, Ball); 6] = [
        ("log|a1|", ball_log(&roots.r1.abs())?, &nla - &c.log_sqrt5, k(3, &a2n)),
        ("log|a1 - F|", ball_log(&(&roots.r1 - &f).abs())?, &(-&nla.shl(1)) + &log_5_over, k(6, &an)),
        ("log|a2|", ball_log(&roots.r2.abs())?, nla.clone(), k(4, &a2n)),
        ("log|a2 - F|", ball_log(&(&roots.r2 - &f).abs())?, &nla + &log_one_minus, k(6, &a2n)),
        ("log|a3|", ball_log(&roots.r3.abs())?, &(-&nla.shl(1)) + &c.log_sqrt5, a2n.clone()),
        ("log|a3 - F|", ball_log(&(&roots.r3 - &f).abs())?, &nla - &c.log_sqrt5, k(3, &a2n)),
    ];
    let mut checks = Vec::new();
    for (name, actual, main, err) in cases {
        let dev = (&actual - &main).abs();
        let ok = decide(dev.le(&err), name, prec)?;
        checks.push(Check { name: name.to_string(), pass: ok });
    }
    Ok(CheckReport { n: inst.n, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots(n: u64, prec: u64) -> (ThueInstance, RootTriple) {
        let inst = ThueInstance::new(n);
        let r = approx_roots(&inst, prec).unwrap();
        (inst, r)
    }

    #[test]
    fn vieta_relations() {
        for n in [3u64, 4, 10, 37, 100] {
            let (inst, r) = roots(n, 3 * n + 30 + 64);
            let (s, p) = inst.sp();
            assert!((&(&r.r1 + &r.r2) + &r.r3).contains_int(s));
            let e2 = &(&(&r.r1 * &r.r2) + &(&r.r1 * &r.r3)) + &(&r.r2 * &r.r3);
            assert!(e2.contains_int(p));
            assert!((&(&r.r1 * &r.r2) * &r.r3).contains_int(1));
            for b in [&r.r1, &r.r2, &r.r3] {
                assert!(inst.poly_ball(b).contains_zero());
            }
        }
    }

    #[test]
    fn n3_roots() {
        let (_, r) = roots(3, 128);
        assert!((r.r3.to_f64() - 0.139_194_15).abs() < 1e-8);
        assert!((r.r1.to_f64() - 1.745_898_31).abs() < 1e-8);
        assert!((r.r2.to_f64() - 4.114_907_54).abs() < 1e-8);
    }

    #[test]
    fn n10_brackets() {
        let (inst, r) = roots(10, 128);
        let c = constants(128);
        let a20 = c.alpha.powi(-20).unwrap();
        let d1 = (&r.r1 - &Ball::from_int(55, 128)).abs();
        assert_eq!(d1.le(&a20.mul_int(&BigInt::from(6))), Some(true));
        assert!(a20.mul_int(&BigInt::from(6)).to_f64() - 3.97e-4 < 1e-6);
        let d3 = (&r.r3 - &(&c.sqrt5 * &a20)).abs();
        assert_eq!(d3.le(&a20.sqr()), Some(true));
        assert!(certify_root_brackets(&inst, &r).unwrap().all_pass());
        assert!(certify_log_estimates(&inst, &r).unwrap().all_pass());
    }

    #[test]
    fn radius_is_small() {
        for n in [4u64, 10, 50, 346] {
            let prec = working_precision(n);
            let (_, r) = roots(n, prec);
            for b in [&r.r1, &r.r2, &r.r3] {
                let scale = b.mid().top().max(1);
                assert!(b.rad().top() <= scale - (prec / 2) as i64, "n = {n}");
            }
        }
    }

    #[test]
    fn refinement_shrinks() {
        let inst = ThueInstance::new(20);
        let a = approx_roots(&inst, 128).unwrap();
        let b = approx_roots(&inst, 256).unwrap();
        for i in 1..=3 {
            assert!(b.get(i).rad() <= a.get(i).rad());
            assert!(a.get(i).overlaps(b.get(i)));
        }
    }

    #[test]
    fn checks_refuse_small_n() {
        let (inst, r) = roots(5, 128);
        assert!(certify_root_brackets(&inst, &r).is_err());
        assert!(certify_log_estimates(&inst, &r).is_err());
        assert!(approx_roots(&ThueInstance::new(2), 128).is_err());
    }

    #[test]
    fn check_suites_sample() {
        for n in [10u64, 11, 50, 100, 200, 346] {
            let (inst, r) = roots(n, working_precision(n));
            let a = certify_root_brackets(&inst, &r).unwrap();
            let b = certify_log_estimates(&inst, &r).unwrap();
            assert!(a.all_pass(), "n = {n}: {:?}", a.failures());
            assert!(b.all_pass(), "n = {n}: {:?}", b.failures());
        }
    }
}
