#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use rkeig_core::{
    apply_update, jacobi_evd, secular_coefficients, transform_update, JacobiConfig, LowRankUpdate,
    SecularCoefficients, SpectralDecomposition,
};

/// Eigenvalues of `A + K J K^T` from the dense Jacobi oracle.
pub fn oracle_eigenvalues(d: &SpectralDecomposition, u: &LowRankUpdate) -> Vec<f64> {
    let a = apply_update(&d.reconstruct(), u).unwrap();
    jacobi_evd(&a, JacobiConfig::default())
        .unwrap()
        .eigenvalues()
        .to_vec()
}

pub fn coefficients(d: &SpectralDecomposition, u: &LowRankUpdate) -> SecularCoefficients {
    let tu = transform_update(d, u).unwrap();
    secular_coefficients(d.eigenvalues(), &tu).unwrap()
}

/// Left end of interval `i` cut by `poles` (`-inf` for `i = 0`).
pub fn edge(poles: &[f64], i: usize) -> f64 {
    if i == 0 {
        f64::NEG_INFINITY
    } else if i > poles.len() {
        f64::INFINITY
    } else {
        poles[i - 1]
    }
}

/// `det(I + J U^T (Lambda - x)^{-1} U)` evaluated directly.
pub fn det_secular(lambda: &[f64], u: &DMatrix<f64>, j: &[f64], x: f64) -> f64 {
    let k = u.ncols();
    let mut m = DMatrix::<f64>::identity(k, k);
    for (i, l) in lambda.iter().enumerate() {
        let g = 1.0 / (l - x);
        for a in 0..k {
            for b in 0..k {
                m[(a, b)] += j[a] * u[(i, a)] * u[(i, b)] * g;
            }
        }
    }
    m.determinant()
}

/// The same determinant at a complex point.
pub fn det_secular_complex(
    lambda: &[f64],
    u: &DMatrix<f64>,
    j: &[f64],
    z: Complex<f64>,
) -> Complex<f64> {
    let k = u.ncols();
    let mut m = DMatrix::<Complex<f64>>::identity(k, k);
    for (i, l) in lambda.iter().enumerate() {
        let g = Complex::new(1.0, 0.0) / (Complex::new(*l, 0.0) - z);
        for a in 0..k {
            for b in 0..k {
                m[(a, b)] += g * (j[a] * u[(i, a)] * u[(i, b)]);
            }
        }
    }
    m.determinant()
}

/// Residue weight at `lambda[i]`: `f = 1 - a / (x - lambda_i) + ...`, so `a`
/// is minus the contour integral of `f` around the pole, taken by the
/// trapezoid rule on a circle clear of every other pole.
pub fn contour_weight(lambda: &[f64], u: &DMatrix<f64>, j: &[f64], i: usize) -> f64 {
    const POINTS: usize = 128;
    let li = lambda[i];
    let gap = lambda
        .iter()
        .enumerate()
        .filter(|&(m, _)| m != i)
        .map(|(_, l)| (l - li).abs())
        .fold(1.0_f64, f64::min);
    let r = 0.5 * gap;
    let mut acc = Complex::new(0.0, 0.0);
    for k in 0..POINTS {
        let e = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / POINTS as f64);
        acc += det_secular_complex(lambda, u, j, Complex::new(li, 0.0) + e * r) * e;
    }
    -(acc * (r / POINTS as f64)).re
}

/// Householder reflector `I - 2 v v^T / v^T v`.
pub fn reflector(v: &[f64]) -> DMatrix<f64> {
    let n = v.len();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    DMatrix::from_fn(n, n, |r, c| {
        f64::from(u8::from(r == c)) - 2.0 * v[r] * v[c] / vv
    })
}
