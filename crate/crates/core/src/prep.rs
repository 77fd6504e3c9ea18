//! Preprocessing shared by the eigenvalue and eigenvector pipelines:
//! basis change, merging of near-equal poles, and weight deflation.

use nalgebra::DMatrix;

use crate::decomp::{LowRankUpdate, SpectralDecomposition};
use crate::error::{Error, Result, Stage, StageExt};
use crate::secular::{transform_update, weights_for, SecularCoefficients};

/// Poles closer than this (relative to the spectrum scale) are merged.
pub const MERGE_GAP: f64 = 1e-12;

/// Weights with `|a_i| <= WEIGHT_DEFLATION * (1 + sum |a_j|)` are deflated.
pub const WEIGHT_DEFLATION: f64 = 1e-14;

/// A merged cluster `start..start + rot.nrows()` whose basis was rotated by `rot`.
#[derive(Debug, Clone)]
pub(crate) struct ClusterRotation {
    pub start: usize,
    pub rot: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    /// Old eigenvalues after cluster merging, in basis order.
    pub lambda: Vec<f64>,
    /// `Q^T K` in the rotated basis.
    pub u: DMatrix<f64>,
    pub j: Vec<f64>,
    pub rotations: Vec<ClusterRotation>,
    pub coeffs: SecularCoefficients,
    /// Basis indices whose eigenpairs are unchanged.
    pub unchanged: Vec<usize>,
    pub scale: f64,
}

impl Prepared {
    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    /// Basis indices of the poles of `coeffs`, ascending.
    pub fn active(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|r| !self.unchanged.contains(r))
            .collect()
    }

    /// `Q` with the cluster rotations applied.
    pub fn rotated_basis(&self, q: &DMatrix<f64>) -> DMatrix<f64> {
        if self.rotations.is_empty() {
            return q.clone();
        }
        let mut q = q.clone();
        for c in &self.rotations {
            let m = c.rot.nrows();
            let block = q.columns(c.start, m) * &c.rot;
            q.columns_mut(c.start, m).copy_from(&block);
        }
        q
    }
}

pub(crate) fn prepare(d: &SpectralDecomposition, upd: &LowRankUpdate) -> Result<Prepared> {
    let tu = transform_update(d, upd).stage(Stage::Transform)?;
    let mut u = tu.u().clone();
    let j: Vec<f64> = tu.signs().iter().map(|s| s.value()).collect();
    let mut lambda = d.eigenvalues().to_vec();
    let n = lambda.len();
    let scale = lambda.iter().fold(1.0_f64, |s, l| s.max(l.abs()));
    let unorm = u.norm();
    let row_tol = 1e-15 * unorm.max(f64::MIN_POSITIVE);

    let mut rotations = Vec::new();
    let mut i = 0;
    while i < n {
        let mut e = i + 1;
        while e < n && lambda[e] - lambda[e - 1] < MERGE_GAP * scale {
            e += 1;
        }
        if e - i >= 2 {
            rotations.push(merge_cluster(&mut lambda, &mut u, i, e, row_tol, scale));
        }
        i = e;
    }

    let candidates: Vec<usize> = (0..n)
        .filter(|&r| u.row(r).iter().any(|&v| v.abs() > row_tol))
        .collect();
    let weights = weights_for(&lambda, &u, &j, &candidates);
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(
            Error::InvalidInput("secular weights overflowed".into()).at(Stage::Coefficients)
        );
    }
    let cut = WEIGHT_DEFLATION * (1.0 + weights.iter().map(|w| w.abs()).sum::<f64>());
    let mut poles = Vec::new();
    let mut kept = Vec::new();
    let mut is_active = vec![false; n];
    for (&r, &w) in candidates.iter().zip(&weights) {
        if w.abs() > cut {
            poles.push(lambda[r]);
            kept.push(w);
            is_active[r] = true;
        }
    }
    let unchanged = (0..n).filter(|&r| !is_active[r]).collect();
    // Weyl: the update moves no eigenvalue below lambda_min - ||U_-||^2 or
    // above lambda_max + ||U_+||^2.
    let (mut down, mut up) = (0.0, 0.0);
    for (col, &s) in u.column_iter().zip(&j) {
        if s > 0.0 {
            up += col.norm_squared();
        } else {
            down += col.norm_squared();
        }
    }
    let (lmin, lmax) = lambda
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        });
    let coeffs = SecularCoefficients::new(poles, kept, 1.0)
        .and_then(|c| {
            if c.is_empty() {
                Ok(c)
            } else {
                c.with_root_window(lmin - down, lmax + up)
            }
        })
        .stage(Stage::Deflation)?;
    Ok(Prepared {
        lambda,
        u,
        j,
        rotations,
        coeffs,
        unchanged,
        scale,
    })
}

/// Rotates the rows of a cluster of near-equal poles so that at most
/// `min(size, k)` rows stay nonzero, then spreads the surviving poles apart.
fn merge_cluster(
    lambda: &mut [f64],
    u: &mut DMatrix<f64>,
    start: usize,
    end: usize,
    row_tol: f64,
    scale: f64,
) -> ClusterRotation {
    let m = end - start;
    let rep = lambda[start..end].iter().sum::<f64>() / m as f64;
    let block = u.rows(start, m).into_owned();
    let (h, r) = householder(&block);
    u.rows_mut(start, m).copy_from(&r);
    let live: Vec<usize> = (0..m)
        .filter(|&i| r.row(i).iter().any(|&v| v.abs() > row_tol))
        .collect();
    for i in 0..m {
        lambda[start + i] = rep;
        if !live.contains(&i) {
            u.row_mut(start + i).fill(0.0);
        }
    }
    if live.len() >= 2 {
        let span = 0.5 * MERGE_GAP * scale;
        let last = (live.len() - 1) as f64;
        for (t, &i) in live.iter().enumerate() {
            lambda[start + i] = rep + (t as f64 / last - 0.5) * span;
        }
    }
    ClusterRotation { start, rot: h }
}

/// Full Householder QR: returns orthogonal `h` and `r = h^T a`.
fn householder(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let (m, k) = a.shape();
    let mut r = a.clone();
    let mut h = DMatrix::<f64>::identity(m, m);
    for c in 0..k.min(m.saturating_sub(1)) {
        let x: Vec<f64> = (c..m).map(|i| r[(i, c)]).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let mut v = x;
        v[0] += if v[0] >= 0.0 { norm } else { -norm };
        let vv: f64 = v.iter().map(|t| t * t).sum();
        for col in 0..k {
            let dot: f64 = (c..m).map(|i| v[i - c] * r[(i, col)]).sum();
            let f = 2.0 * dot / vv;
            for i in c..m {
                r[(i, col)] -= f * v[i - c];
            }
        }
        for row in 0..m {
            let dot: f64 = (c..m).map(|i| h[(row, i)] * v[i - c]).sum();
            let f = 2.0 * dot / vv;
            for i in c..m {
                h[(row, i)] -= f * v[i - c];
            }
        }
    }
    (h, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::Sign;
    use approx::assert_abs_diff_eq;

    #[test]
    fn householder_factors() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, -2.0, 0.5, 2.0, 1.0]);
        let (h, r) = householder(&a);
        assert_abs_diff_eq!(&h * &r, a, epsilon = 1e-14);
        assert_abs_diff_eq!(h.transpose() * &h, DMatrix::identity(3, 3), epsilon = 1e-14);
        assert_abs_diff_eq!(r[(2, 0)], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r[(2, 1)], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn repeated_eigenvalue_is_deflated_by_rotation() {
        // Triple eigenvalue with a rank-1 update: two directions stay unchanged.
        let d =
            SpectralDecomposition::new(DMatrix::identity(4, 4), vec![0.0, 1.0, 1.0, 1.0]).unwrap();
        let k = DMatrix::from_column_slice(4, 1, &[0.5, 0.5, 0.5, 0.5]);
        let p = prepare(&d, &LowRankUpdate::positive(k).unwrap()).unwrap();
        assert_eq!(p.coeffs.len(), 2);
        assert_eq!(p.unchanged.len(), 2);
        assert_eq!(p.rotations.len(), 1);
        assert_eq!(p.coeffs.poles(), &[0.0, 1.0]);
        assert_abs_diff_eq!(p.coeffs.weights()[1], 0.75, epsilon = 1e-15);
    }

    #[test]
    fn zero_update_deflates_everything() {
        let d = SpectralDecomposition::new(DMatrix::identity(3, 3), vec![0.0, 1.0, 2.0]).unwrap();
        let u = LowRankUpdate::new(DMatrix::zeros(3, 2), vec![Sign::Plus, Sign::Minus]).unwrap();
        let p = prepare(&d, &u).unwrap();
        assert!(p.coeffs.is_empty());
        assert_eq!(p.unchanged, vec![0, 1, 2]);
    }
}
