//! Complete solution of one equation `F_n(x, y) = ±1`.
//!
//! A solution gives a unit `x - yθ` of `Z[θ]`, and every unit is
//! `±ε^b1 δ^b2`. So the solver walks an exponent box in exact ring
//! arithmetic and keeps the units whose `θ²` coefficient vanishes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::Ring;
use crate::par;
use crate::sequences::ThueInstance;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Solution {
    #[serde(with = "crate::decimal")]
    pub x: BigInt,
    #[serde(with = "crate::decimal")]
    pub y: BigInt,
    /// `F_n(x, y)`, either `1` or `-1`.
    #[serde(with = "crate::decimal::int")]
    pub value: i8,
}

impl Solution {
    pub fn is_trivial(&self) -> bool {
        self.y.abs() <= BigInt::one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    #[serde(with = "crate::decimal::int")]
    pub n: u64,
    /// Sorted by `(y, x)`, closed under negation, no duplicates.
    pub solutions: Vec<Solution>,
}

impl SolutionSet {
    fn from_pairs(inst: &ThueInstance, pairs: impl IntoIterator<Item = (BigInt, BigInt)>) -> SolutionSet {
        let mut set = BTreeSet::new();
        for (x, y) in pairs {
            for (x, y) in [(x.clone(), y.clone()), (-x, -y)] {
                if let Some(value) = verify(inst, &x, &y) {
                    set.insert((y.clone(), x.clone(), value));
                }
            }
        }
        let solutions = set.into_iter().map(|(y, x, value)| Solution { x, y, value }).collect();
        SolutionSet { n: inst.n, solutions }
    }

    pub fn pairs(&self) -> Vec<(BigInt, BigInt)> {
        self.solutions.iter().map(|s| (s.x.clone(), s.y.clone())).collect()
    }

    pub fn nontrivial(&self) -> Vec<&Solution> {
        self.solutions.iter().filter(|s| !s.is_trivial()).collect()
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        self.solutions.iter().any(|s| s.x == x && s.y == y)
    }

    pub fn union(&self, other: &SolutionSet, inst: &ThueInstance) -> SolutionSet {
        SolutionSet::from_pairs(inst, self.pairs().into_iter().chain(other.pairs()))
    }
}

/// `Some(F_n(x, y))` if it is `±1`.
pub fn verify(inst: &ThueInstance, x: &BigInt, y: &BigInt) -> Option<i8> {
    let v = inst.form(x, y);
    if v.is_one() {
        Some(1)
    } else if v == -BigInt::one() {
        Some(-1)
    } else {
        None
    }
}

/// All solutions with `|y| <= 1`.
///
/// `y = 0` forces `x = ±1`. For `y = 1` the equation reads
/// `(x - F)(x - L)x ∈ {0, 2}`: the zero case gives `x ∈ {0, F, L}`, and in the
/// other case `x` divides 2. The `y = -1` solutions are the negatives.
pub fn trivial_solutions(inst: &ThueInstance) -> SolutionSet {
    let one = BigInt::one();
    let mut cand = vec![(one.clone(), BigInt::zero())];
    for x in [BigInt::zero(), inst.fib.clone(), inst.luc.clone()] {
        cand.push((x, one.clone()));
    }
    for x in [-2i64, -1, 1, 2] {
        cand.push((BigInt::from(x), one.clone()));
    }
    SolutionSet::from_pairs(inst, cand)
}

/// Every solution whose unit `x - yθ` is `±ε^b1 δ^b2` with `|b1|, |b2| <= bound`,
/// together with the trivial ones.
pub fn solve(inst: &ThueInstance, bound: u64) -> SolutionSet {
    let found = enumerate_box(inst, bound);
    trivial_solutions(inst).union(&SolutionSet::from_pairs(inst, found), inst)
}

/// `(x, y)` for each unit in the box that is linear in `θ`. Rows of the box
/// are independent and run in parallel.
pub fn enumerate_box(inst: &ThueInstance, bound: u64) -> Vec<(BigInt, BigInt)> {
    let ring = Ring::new(inst);
    let b = bound as i64;
    let rows = par::map((-b..=b).collect(), |b1| {
        let step = ring.delta();
        let mut u = ring.unit(b1, -b);
        let mut hits = Vec::new();
        for _b2 in -b..=b {
            if let Some(xy) = u.as_linear() {
                hits.push(xy);
            }
            u = ring.mul(&u, &step);
        }
        hits
    });
    rows.into_iter().flatten().collect()
}

/// Exhaustive search over `0 <= y <= y_max`, `|x| <= L_n y_max + 1000`, by
/// finite differences in `i128`; hits are re-checked exactly. Negative `y`
/// follow from `F(-x, -y) = -F(x, y)`. Independent of the unit machinery and
/// only meant as a cross-check for small `n`.
pub fn brute_force(inst: &ThueInstance, y_max: i64) -> SolutionSet {
    let luc = inst.luc.to_i64().expect("brute force needs a small L_n");
    let fib = inst.fib.to_i64().expect("brute force needs a small F_n");
    let x_max = luc * y_max + 1000;
    let (s, p) = ((fib + luc) as i128, (fib * luc) as i128);
    let rows = par::map_range(0, y_max as u64, |y| {
        let y = y as i128;
        // P(x) = x³ - s y x² + p y² x - y³
        let poly = |x: i128| ((x - s * y) * x + p * y * y) * x - y * y * y;
        let x0 = -(x_max as i128);
        let mut v = poly(x0);
        let mut d1 = poly(x0 + 1) - v;
        let mut d2 = poly(x0 + 2) - 2 * poly(x0 + 1) + v;
        let mut hits = Vec::new();
        let mut x = x0;
        while x <= x_max as i128 {
            if v == 1 || v == -1 {
                hits.push((BigInt::from(x), BigInt::from(y)));
            }
            v += d1;
            d1 += d2;
            d2 += 6;
            x += 1;
        }
        hits
    });
    SolutionSet::from_pairs(inst, rows.into_iter().flatten())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: u64, extra: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        let inst = ThueInstance::new(n);
        let f = inst.fib.to_i64().unwrap();
        let l = inst.luc.to_i64().unwrap();
        let mut base = vec![(1, 0), (0, 1), (f, 1), (l, 1)];
        base.extend_from_slice(extra);
        let pairs = base.iter().map(|&(x, y)| (BigInt::from(x), BigInt::from(y)));
        SolutionSet::from_pairs(&inst, pairs).pairs()
    }

    #[test]
    fn verify_examples() {
        let i1 = ThueInstance::new(1);
        let i3 = ThueInstance::new(3);
        let i5 = ThueInstance::new(5);
        assert_eq!(verify(&i1, &BigInt::from(2), &BigInt::from(1)), Some(1));
        assert_eq!(verify(&i3, &BigInt::from(38), &BigInt::from(273)), Some(-1));
        assert_eq!(verify(&i5, &BigInt::from(2), &BigInt::from(3)), None);
    }

    #[test]
    fn trivial_sets() {
        let t5 = trivial_solutions(&ThueInstance::new(5));
        assert_eq!(t5.pairs(), set(5, &[]));
        assert_eq!(t5.solutions.len(), 8);
        let t10 = trivial_solutions(&ThueInstance::new(10));
        assert!(t10.contains(55, 1) && t10.contains(-123, -1));
        assert_eq!(t10.solutions.len(), 8);
        // n = 1: F = L merges two pairs and (2, 1) enters through the "= 2" branch.
        let t1 = trivial_solutions(&ThueInstance::new(1));
        assert_eq!(t1.pairs(), set(1, &[(2, 1)]));
        assert_eq!(t1.solutions.len(), 8);
    }

    #[test]
    fn solve_small_exceptions() {
        let s1 = solve(&ThueInstance::new(1), 20);
        assert_eq!(s1.pairs(), set(1, &[(2, 1), (7, 4)]));
        let s3 = solve(&ThueInstance::new(3), 20);
        assert_eq!(s3.pairs(), set(3, &[(7, 4), (38, 273)]));
        let s10 = solve(&ThueInstance::new(10), 20);
        assert_eq!(s10.pairs(), set(10, &[]));
    }

    #[test]
    fn negation_closed_and_verified() {
        for n in 1..=15 {
            let inst = ThueInstance::new(n);
            let s = solve(&inst, 12);
            for sol in &s.solutions {
                assert_eq!(verify(&inst, &sol.x, &sol.y), Some(sol.value));
                assert!(s.solutions.iter().any(|t| t.x == -&sol.x && t.y == -&sol.y));
            }
        }
    }

    #[test]
    fn brute_force_small() {
        for n in 1..=6 {
            let inst = ThueInstance::new(n);
            assert_eq!(brute_force(&inst, 300), solve(&inst, 20), "n = {n}");
        }
    }
}
