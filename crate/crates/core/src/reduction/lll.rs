//! Integral LLL reduction and an independent exact-rational checker.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice given by a row basis of exact integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntLattice {
    #[serde(with = "crate::decimal::vec2")]
    pub rows: Vec<Vec<BigInt>>,
}

impl IntLattice {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<IntLattice> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput("lattice basis must be square and nonempty".into()));
        }
        let lat = IntLattice { rows };
        if lat.det().is_zero() {
            return Err(Error::Singular("lattice basis rows are linearly dependent".into()));
        }
        Ok(lat)
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<IntLattice> {
        IntLattice::new(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        bareiss_det(self.rows.clone())
    }

    pub fn norm_sq(v: &[BigInt]) -> BigInt {
        v.iter().map(|x| x * x).sum()
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Nearest integer to `a / b` for `b > 0`, ties away from zero.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    if a.is_negative() {
        -((-a * &two + b).div_floor(&(b * &two)))
    } else {
        (a * &two + b).div_floor(&(b * &two))
    }
}

/// The parameter must lie in `(1/4, 1)`.
pub fn check_delta(delta: &BigRational) -> Result<()> {
    let quarter = BigRational::new(1.into(), 4.into());
    if *delta <= quarter || *delta >= BigRational::one() {
        return Err(Error::InvalidInput(format!("LLL parameter {delta} outside (1/4, 1)")));
    }
    Ok(())
}

/// LLL-reduces the rows of `basis` with parameter `delta`.
///
/// Integral version: all Gram–Schmidt data is kept as the integers
/// `d_i = prod_{j<=i} |b*_j|²` and `λ_ij = d_j μ_ij`, so no rationals appear.
pub fn lll(basis: &IntLattice, delta: &BigRational) -> Result<IntLattice> {
    check_delta(delta)?;
    let (p, q) = (delta.numer().clone(), delta.denom().clone());
    let n = basis.dim();
    let mut b = basis.rows.clone();
    // d[0] = 1, d[i + 1] belongs to b[i].
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[0] = BigInt::one();
    d[1] = dot(&b[0], &b[0]);
    if n == 1 {
        return Ok(IntLattice { rows: b });
    }
    let mut k = 1usize;
    let mut kmax = 0usize;

    let red = |b: &mut Vec<Vec<BigInt>>, lam: &mut Vec<Vec<BigInt>>, d: &[BigInt], k: usize, l: usize| {
        if (&lam[k][l] * 2u32).abs() > d[l + 1] {
            let r = round_div(&lam[k][l], &d[l + 1]);
            let bl = b[l].clone();
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &r * y;
            }
            lam[k][l] -= &r * &d[l + 1];
            for i in 0..l {
                let t = &r * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    };

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::Singular("dependent rows during LLL".into()));
                    }
                    d[k + 1] = u;
                }
            }
        }
        red(&mut b, &mut lam, &d, k, k - 1);
        // Lovász: q d_k d_{k-2} >= p d_{k-1}² - q λ², shifted by one here.
        let lhs = &q * &d[k + 1] * &d[k - 1];
        let rhs = &p * &d[k] * &d[k] - &q * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            b.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let bb = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
                lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k + 1];
            }
            d[k] = bb;
            k = if k > 1 { k - 1 } else { 1 };
        } else {
            for l in (0..k - 1).rev() {
                red(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(IntLattice { rows: b })
}

/// Exact rational Gram–Schmidt data `(|b*_i|², μ_ij)`.
pub fn gram_schmidt(basis: &IntLattice) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let n = basis.dim();
    let rows: Vec<Vec<BigRational>> = basis
        .rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let rdot = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        a.iter().zip(b).map(|(x, y)| x * y).fold(BigRational::zero(), |s, t| s + t)
    };
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut bsq = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut v = rows[i].clone();
        for j in 0..i {
            mu[i][j] = rdot(&rows[i], &star[j]) / &bsq[j];
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * y;
            }
        }
        bsq.push(rdot(&v, &v));
        star.push(v);
    }
    (bsq, mu)
}

/// Size reduction and the Lovász condition, checked in exact rationals.
pub fn is_lll_reduced(basis: &IntLattice, delta: &BigRational) -> bool {
    let (bsq, mu) = gram_schmidt(basis);
    let half = BigRational::new(1.into(), 2.into());
    let n = basis.dim();
    for i in 0..n {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
    }
    (1..n).all(|k| bsq[k] >= (delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bsq[k - 1])
}

/// Lower bound `min_i |b*_i|²` on the squared length of every nonzero
/// lattice vector, rounded down to an integer.
pub fn gs_lower_bound(basis: &IntLattice) -> BigInt {
    let (bsq, _) = gram_schmidt(basis);
    bsq.iter().min().expect("nonempty basis").floor().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn three_quarters() -> BigRational {
        BigRational::new(3.into(), 4.into())
    }

    #[test]
    fn identity_is_fixed() {
        let id = IntLattice::from_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(lll(&id, &three_quarters()).unwrap(), id);
    }

    #[test]
    fn two_dim_example() {
        let lat = IntLattice::from_i64(&[vec![1, 0], vec![4, 1]]).unwrap();
        let red = lll(&lat, &three_quarters()).unwrap();
        let first = IntLattice::norm_sq(&red.rows[0]);
        let mut best = i64::MAX;
        for a in -20i64..=20 {
            for b in -20i64..=20 {
                if (a, b) != (0, 0) {
                    let v = [a + 4 * b, b];
                    best = best.min(v[0] * v[0] + v[1] * v[1]);
                }
            }
        }
        assert!(first <= BigInt::from(2 * best));
        assert!(is_lll_reduced(&red, &three_quarters()));
    }

    #[test]
    fn singular_rejected() {
        assert!(IntLattice::from_i64(&[vec![1, 2], vec![2, 4]]).is_err());
        let bad = BigRational::new(1.into(), 5.into());
        let id = IntLattice::from_i64(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(lll(&id, &bad).is_err());
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = IntLattice::from_i64(&[vec![2, -3, 1], vec![2, 0, -1], vec![1, 4, 5]]).unwrap();
        assert_eq!(m.det(), BigInt::from(49));
    }

    #[test]
    fn round_div_ties_away() {
        assert_eq!(round_div(&BigInt::from(5), &BigInt::from(2)), BigInt::from(3));
        assert_eq!(round_div(&BigInt::from(-5), &BigInt::from(2)), BigInt::from(-3));
        assert_eq!(round_div(&BigInt::from(7), &BigInt::from(3)), BigInt::from(2));
    }

    proptest! {
        #[test]
        fn reduced_same_lattice(rows in proptest::collection::vec(proptest::collection::vec(-1000i64..1000, 3), 3)) {
            let Ok(lat) = IntLattice::from_i64(&rows) else { return Ok(()) };
            let red = lll(&lat, &three_quarters()).unwrap();
            prop_assert_eq!(red.det().abs(), lat.det().abs());
            prop_assert!(is_lll_reduced(&red, &three_quarters()));
        }
    }
}
