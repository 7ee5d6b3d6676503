use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::ball::Ball;
use super::elementary::ball_log;

/// The real constants every stage of the proof needs, at one precision.
#[derive(Clone, Debug)]
pub struct ConstantTable {
    pub prec: u64,
    /// The golden ratio `(1 + sqrt 5) / 2`.
    pub alpha: Ball,
    pub sqrt5: Ball,
    pub log_alpha: Ball,
    pub log_sqrt5: Ball,
    pub log_sqrt5_minus1: Ball,
    pub log2: Ball,
}

impl ConstantTable {
    pub fn new(prec: u64) -> ConstantTable {
        assert!(prec >= 53, "precision below 53 bits");
        // A few guard bits keep the final radii under 2^(4 - prec).
        let p = prec + 16;
        let sqrt5 = Ball::from_int(5, p).sqrt().expect("5 > 0");
        let alpha = (&sqrt5 + &Ball::one(p)).shl(-1);
        let log_alpha = ball_log(&alpha).expect("alpha > 0");
        let log_sqrt5 = ball_log(&sqrt5).expect("sqrt 5 > 0");
        let log_sqrt5_minus1 = ball_log(&(&sqrt5 - &Ball::one(p))).expect("sqrt 5 > 1");
        let log2 = ball_log(&Ball::from_int(2, p)).expect("2 > 0");
        let fin = |b: Ball| b.with_prec(prec);
        ConstantTable {
            prec,
            alpha: fin(alpha),
            sqrt5: fin(sqrt5),
            log_alpha: fin(log_alpha),
            log_sqrt5: fin(log_sqrt5),
            log_sqrt5_minus1: fin(log_sqrt5_minus1),
            log2: fin(log2),
        }
    }

    /// Shared, lazily built table for `prec`.
    pub fn cached(prec: u64) -> Arc<ConstantTable> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<ConstantTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().unwrap().get(&prec) {
            return t.clone();
        }
        let t = Arc::new(ConstantTable::new(prec));
        cache.lock().unwrap().entry(prec).or_insert(t).clone()
    }
}

pub fn constants(prec: u64) -> Arc<ConstantTable> {
    ConstantTable::cached(prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realball::Dyadic;

    #[test]
    fn alpha_at_64_bits() {
        let c = ConstantTable::new(64);
        assert!((c.alpha.to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
        assert!(c.alpha.rad() <= &Dyadic::pow2(-60));
        let rel = &(&c.alpha.sqr() - &c.alpha) - &Ball::one(64);
        assert!(rel.contains_zero());
        assert!((c.sqrt5.to_f64() - 2.236_067_977_499_79).abs() < 1e-14);
        assert!((&c.alpha.shl(1) - &Ball::one(64)).overlaps(&c.sqrt5));
    }

    #[test]
    fn logs_are_tight_and_refine() {
        for prec in [64u64, 128, 512, 1100] {
            let c = ConstantTable::new(prec);
            let d = ConstantTable::new(2 * prec);
            let tol = Dyadic::pow2(4 - prec as i64);
            for (a, b) in [
                (&c.log_alpha, &d.log_alpha),
                (&c.log_sqrt5, &d.log_sqrt5),
                (&c.log_sqrt5_minus1, &d.log_sqrt5_minus1),
            ] {
                assert!(a.rad() <= &tol);
                assert!(b.rad() <= a.rad());
                assert!(a.overlaps(b));
            }
        }
        let c = ConstantTable::new(64);
        assert!((c.log_alpha.to_f64() - 0.481_211_825_059_603_4).abs() < 1e-15);
        assert!((c.log_sqrt5_minus1.to_f64() - 0.211_935_355_500_341_95).abs() < 1e-15);
    }
}
