//! Exact enumeration of short lattice vectors (Fincke–Pohst) over a reduced
//! basis. Ranges are computed with rational Gram–Schmidt data and widened by
//! one on each side; every candidate is then re-checked on its exact integer
//! norm, so the search is a superset of the ball and the result is exact.
//! The affine variant searches a coset `L + s` of a lower-rank lattice.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::lll::{gram_schmidt, IntLattice};

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    /// Smallest squared norm among vectors that are nonzero, not excluded
    /// and of squared norm at most the radius, if any.
    Done { min_sq: Option<BigInt>, visited: u64 },
    /// The leaf cap was hit before the search finished.
    Capped,
}

fn floor_sqrt(x: &BigRational) -> BigInt {
    if x.is_negative() {
        return BigInt::zero();
    }
    Roots::sqrt(&x.floor().to_integer())
}

/// Searches all `v` in the lattice with `|v|² <= radius_sq`, skipping zero
/// and every vector in `excluded` (the caller includes negatives).
pub fn shortest_excluding(basis: &IntLattice, radius_sq: &BigInt, excluded: &[Vec<BigInt>], cap: u64) -> Search {
    let zero = vec![BigInt::zero(); basis.dim()];
    search(&basis.rows, &zero, true, radius_sq, excluded, cap)
}

/// Searches all `v = Σ u_i g_i + shift` with `u` integral and
/// `|v|² <= radius_sq`, skipping the vectors in `excluded`. The generators
/// must be linearly independent; two generators are Lagrange-reduced first.
pub fn closest_excluding(
    gens: &[Vec<BigInt>],
    shift: &[BigInt],
    radius_sq: &BigInt,
    excluded: &[Vec<BigInt>],
    cap: u64,
) -> Search {
    let mut g = gens.to_vec();
    if g.len() == 2 {
        lagrange(&mut g);
    }
    search(&g, shift, false, radius_sq, excluded, cap)
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gauss–Lagrange reduction of a pair of independent vectors.
fn lagrange(g: &mut [Vec<BigInt>]) {
    loop {
        if dot(&g[1], &g[1]) < dot(&g[0], &g[0]) {
            g.swap(0, 1);
        }
        let n0 = dot(&g[0], &g[0]);
        let m = dot(&g[0], &g[1]);
        // Nearest integer to m / n0.
        let q = BigRational::new(m, n0).round().to_integer();
        if q.is_zero() {
            return;
        }
        let b0 = g[0].clone();
        for (x, y) in g[1].iter_mut().zip(&b0) {
            *x -= &q * y;
        }
        if dot(&g[1], &g[1]) >= dot(&g[0], &g[0]) {
            return;
        }
    }
}

fn search(
    rows: &[Vec<BigInt>],
    shift: &[BigInt],
    skip_zero: bool,
    radius_sq: &BigInt,
    excluded: &[Vec<BigInt>],
    cap: u64,
) -> Search {
    let k = rows.len();
    let (bsq, mu) = gram_schmidt(&IntLattice { rows: rows.to_vec() });
    let star = gs_vectors(rows, &mu);
    let rat = |v: &[BigInt]| -> Vec<BigRational> { v.iter().map(|x| BigRational::from_integer(x.clone())).collect() };
    let rdot = |a: &[BigRational], b: &[BigRational]| a.iter().zip(b).fold(BigRational::zero(), |s, (x, y)| s + x * y);
    // shift = Σ σ_i b*_i + s⊥.
    let mut perp = rat(shift);
    let mut sigma = Vec::with_capacity(k);
    for (bs, sq) in star.iter().zip(&bsq) {
        let si = rdot(&perp, bs) / sq;
        for (x, y) in perp.iter_mut().zip(bs) {
            *x -= &si * y;
        }
        sigma.push(si);
    }
    let used = rdot(&perp, &perp);
    let skip: HashSet<&Vec<BigInt>> = excluded.iter().collect();
    let r = BigRational::from_integer(radius_sq.clone());
    let mut coeff = vec![BigInt::zero(); k];
    let mut best: Option<BigInt> = None;
    let mut visited = 0u64;
    let ok = descend(k, &bsq, &mu, &sigma, &r, &mut coeff, used, &mut |u: &[BigInt]| {
        visited += 1;
        if visited > cap {
            return false;
        }
        let v: Vec<BigInt> = (0..shift.len())
            .map(|col| &shift[col] + (0..k).map(|i| &u[i] * &rows[i][col]).sum::<BigInt>())
            .collect();
        if skip_zero && v.iter().all(|c| c.is_zero()) {
            return true;
        }
        let sq = IntLattice::norm_sq(&v);
        if sq <= *radius_sq && !skip.contains(&v) && best.as_ref().is_none_or(|b| sq < *b) {
            best = Some(sq);
        }
        true
    });
    if ok {
        Search::Done { min_sq: best, visited }
    } else {
        Search::Capped
    }
}

fn gs_vectors(rows: &[Vec<BigInt>], mu: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let mut v: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        for j in 0..i {
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * y;
            }
        }
        star.push(v);
    }
    star
}

/// Fixes `coeff[level-1]` for every admissible value and recurses. The
/// partial sum `used` is `|s⊥|² + sum_{i >= level} |b*_i|² (u_i + σ_i + sum_{j>i} μ_ji u_j)²`.
#[allow(clippy::too_many_arguments)]
fn descend(
    level: usize,
    bsq: &[BigRational],
    mu: &[Vec<BigRational>],
    sigma: &[BigRational],
    r: &BigRational,
    coeff: &mut Vec<BigInt>,
    used: BigRational,
    leaf: &mut dyn FnMut(&[BigInt]) -> bool,
) -> bool {
    if level == 0 {
        return leaf(coeff);
    }
    let i = level - 1;
    let n = coeff.len();
    let mut center = -sigma[i].clone();
    for j in i + 1..n {
        center -= &mu[j][i] * BigRational::from_integer(coeff[j].clone());
    }
    if used > *r {
        return true;
    }
    let room = r - &used;
    let s = floor_sqrt(&(&room / &bsq[i])) + 1;
    let lo: BigInt = center.floor().to_integer() - &s;
    let hi: BigInt = center.ceil().to_integer() + &s;
    let mut u = lo;
    while u <= hi {
        let t = BigRational::from_integer(u.clone()) - &center;
        let part = &used + &t * &t * &bsq[i];
        if part <= *r {
            coeff[i] = u.clone();
            if !descend(i, bsq, mu, sigma, r, coeff, part, leaf) {
                return false;
            }
        }
        u += 1;
    }
    coeff[i] = BigInt::zero();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::lll::lll;

    fn brute_min(rows: &[Vec<i64>], skip: &[Vec<i64>]) -> i64 {
        let mut best = i64::MAX;
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                for c in -12i64..=12 {
                    let v: Vec<i64> = (0..3).map(|k| a * rows[0][k] + b * rows[1][k] + c * rows[2][k]).collect();
                    if v.iter().all(|&x| x == 0) || skip.contains(&v) {
                        continue;
                    }
                    best = best.min(v.iter().map(|x| x * x).sum());
                }
            }
        }
        best
    }

    #[test]
    fn matches_brute_force() {
        let rows = vec![vec![1, 0, 37], vec![0, 1, -22], vec![0, 0, 101]];
        let lat = IntLattice::from_i64(&rows).unwrap();
        let red = lll(&lat, &BigRational::new(3.into(), 4.into())).unwrap();
        let big = BigInt::from(10_000);
        let Search::Done { min_sq, .. } = shortest_excluding(&red, &big, &[], 1 << 20) else { panic!() };
        assert_eq!(min_sq, Some(BigInt::from(brute_min(&rows, &[]))));
        // Excluding the shortest pair moves the minimum up.
        let short = red.rows[0].clone();
        let neg: Vec<BigInt> = short.iter().map(|x| -x).collect();
        let skip_i: Vec<Vec<i64>> = [&short, &neg]
            .iter()
            .map(|v| v.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect();
        let Search::Done { min_sq, .. } = shortest_excluding(&red, &big, &[short, neg], 1 << 20) else { panic!() };
        assert_eq!(min_sq, Some(BigInt::from(brute_min(&rows, &skip_i))));
    }

    #[test]
    fn empty_ball_and_cap() {
        let lat = IntLattice::from_i64(&[vec![5, 0, 0], vec![0, 5, 0], vec![0, 0, 5]]).unwrap();
        let Search::Done { min_sq, .. } = shortest_excluding(&lat, &BigInt::from(24), &[], 1000) else { panic!() };
        assert_eq!(min_sq, None);
        assert_eq!(shortest_excluding(&lat, &BigInt::from(10_000), &[], 10), Search::Capped);
    }

    #[test]
    fn affine_matches_brute_force() {
        let (p1, p2, p3) = (9137i64, -4211, 2719);
        let gens = vec![
            vec![BigInt::from(1), BigInt::zero(), BigInt::from(p1)],
            vec![BigInt::zero(), BigInt::from(1), BigInt::from(p2)],
        ];
        let shift = vec![BigInt::zero(), BigInt::zero(), BigInt::from(p3)];
        let mut all = Vec::new();
        for a in -200i64..=200 {
            for b in -200i64..=200 {
                let v = [a, b, a * p1 + b * p2 + p3];
                all.push((v.iter().map(|x| x * x).sum::<i64>(), v));
            }
        }
        all.sort();
        let radius = BigInt::from(all[1].0 + 10);
        let Search::Done { min_sq, .. } = closest_excluding(&gens, &shift, &radius, &[], 1 << 20) else { panic!() };
        assert_eq!(min_sq, Some(BigInt::from(all[0].0)));
        let first: Vec<BigInt> = all[0].1.iter().map(|&x| BigInt::from(x)).collect();
        let Search::Done { min_sq, .. } = closest_excluding(&gens, &shift, &radius, &[first], 1 << 20) else { panic!() };
        assert_eq!(min_sq, Some(BigInt::from(all[1].0)));
        let tight = BigInt::from(all[0].0 - 1);
        let Search::Done { min_sq, .. } = closest_excluding(&gens, &shift, &tight, &[], 1 << 20) else { panic!() };
        assert_eq!(min_sq, None);
    }
}
