//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// `L_n^alpha(x)` from the explicit finite series, summed in exact rational
/// arithmetic and rounded once at the end.
pub fn laguerre_series(n: usize, alpha: usize, x: f64) -> f64 {
    let x = BigRational::from_float(x).expect("finite x");
    let mut sum = BigRational::zero();
    let mut x_pow = BigRational::one();
    let mut k_fact = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            x_pow *= &x;
            k_fact *= BigInt::from(k);
        }
        let term = BigRational::from_integer(binomial(n + alpha, n - k)) * &x_pow
            / BigRational::from_integer(k_fact.clone());
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum.to_f64().expect("representable")
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Eigenvalues `(lower, upper)` of `[[a, b], [b, d]]` through a general
/// symmetric eigensolver.
pub fn block_eigenvalues(a: f64, b: f64, d: f64) -> (f64, f64) {
    let eig = SymmetricEigen::new(Matrix2::new(a, b, b, d));
    let (x, y) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    (x.min(y), x.max(y))
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &DMatrix<f64>) -> f64 {
    m.clone().lu().determinant()
}

/// Roots of `det(M - x I)` on `[lo, hi]`, bracketed on a fine scan and
/// refined by bisection.
pub fn characteristic_roots(m: &DMatrix<f64>, lo: f64, hi: f64, scan: usize) -> Vec<f64> {
    let n = m.nrows();
    let p = |x: f64| determinant(&(m - DMatrix::<f64>::identity(n, n) * x));
    let mut roots = Vec::new();
    let step = (hi - lo) / scan as f64;
    for i in 0..scan {
        let (mut a, mut b) = (lo + step * i as f64, lo + step * (i + 1) as f64);
        let (mut fa, fb) = (p(a), p(b));
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa * fb > 0.0 {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            let fm = p(mid);
            if fa * fm <= 0.0 {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}
