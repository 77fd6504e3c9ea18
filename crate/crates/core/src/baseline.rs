//! Reference methods: a cyclic Jacobi eigensolver and first-order
//! perturbation of eigenpairs.

use nalgebra::DMatrix;

use crate::decomp::{LowRankUpdate, SpectralDecomposition};
use crate::dense::SymmetricDense;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiConfig {
    /// Stop once the off-diagonal Frobenius mass is below `tol * ||A||_F`.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiConfig {
    fn default() -> Self {
        JacobiConfig {
            tol: 1e-12,
            max_sweeps: 60,
        }
    }
}

impl JacobiConfig {
    pub fn new(tol: f64, max_sweeps: usize) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) || max_sweeps == 0 {
            return Err(Error::InvalidInput(format!(
                "bad Jacobi settings: tol = {tol}, max_sweeps = {max_sweeps}"
            )));
        }
        Ok(JacobiConfig { tol, max_sweeps })
    }
}

/// Cyclic-by-row Jacobi eigendecomposition.
pub fn jacobi_evd(a: &SymmetricDense, cfg: JacobiConfig) -> Result<SpectralDecomposition> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    // Row-major working copy; `vt` holds the eigenvectors as rows.
    let mut m: Vec<f64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            m.push(a.get(i, j));
        }
    }
    let mut vt = vec![0.0; n * n];
    for i in 0..n {
        vt[i * n + i] = 1.0;
    }
    let norm = a.frobenius_norm();
    let target = cfg.tol * norm;
    let skip = 1e-3 * target / n as f64;

    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j] * m[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let o = off(&m);
        if o <= target {
            break;
        }
        if sweeps == cfg.max_sweeps {
            return Err(Error::NoConvergence { sweeps, off: o });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= skip {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Rows p and q of J^T A J, then mirror into the columns.
                let (rp, rq) = rows_mut(&mut m, n, p, q);
                for k in 0..n {
                    let akp = rp[k];
                    let akq = rq[k];
                    rp[k] = c * akp - s * akq;
                    rq[k] = s * akp + c * akq;
                }
                rp[p] = app - t * apq;
                rq[q] = aqq + t * apq;
                rp[q] = 0.0;
                rq[p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        m[k * n + p] = m[p * n + k];
                        m[k * n + q] = m[q * n + k];
                    }
                }
                let (vp, vq) = rows_mut(&mut vt, n, p, q);
                for k in 0..n {
                    let x = vp[k];
                    let y = vq[k];
                    vp[k] = c * x - s * y;
                    vq[k] = s * x + c * y;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let lambda: Vec<f64> = order.iter().map(|&i| m[i * n + i]).collect();
    let q = DMatrix::from_fn(n, n, |r, c| vt[order[c] * n + r]);
    SpectralDecomposition::from_parts(q, lambda)
}

fn rows_mut(m: &mut [f64], n: usize, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    debug_assert!(p < q);
    let (head, tail) = m.split_at_mut(q * n);
    (&mut head[p * n..(p + 1) * n], &mut tail[..n])
}

/// First-order perturbation of every eigenpair:
/// `l_j += w_j^T J w_j` and `v_j += sum_{i != j} (w_i^T J w_j) / (l_j - l_i) v_i`
/// with `w_j = K^T v_j`, followed by normalization.
pub fn perturbation_update(
    d: &SpectralDecomposition,
    u: &LowRankUpdate,
) -> Result<SpectralDecomposition> {
    if d.dim() != u.dim() {
        return Err(Error::Dimension(
            "decomposition and update sizes differ".into(),
        ));
    }
    let lambda = d.eigenvalues();
    let n = lambda.len();
    let scale = lambda.iter().fold(1.0_f64, |s, l| s.max(l.abs()));
    if let Some(gap) = lambda
        .windows(2)
        .map(|w| w[1] - w[0])
        .find(|&g| g < 1e-12 * scale)
    {
        return Err(Error::GapTooSmall { gap });
    }
    // Column j of W is K^T v_j, scaled by J for one side of the products.
    let w = u.k().tr_mul(d.q());
    let mut jw = w.clone();
    for (r, s) in u.signs().iter().enumerate() {
        jw.row_mut(r).scale_mut(s.value());
    }
    let g = w.tr_mul(&jw); // g[(i, j)] = w_i^T J w_j
    let mut coef = DMatrix::<f64>::identity(n, n);
    for j in 0..n {
        for i in 0..n {
            if i != j {
                coef[(i, j)] = g[(i, j)] / (lambda[j] - lambda[i]);
            }
        }
    }
    let mut v = d.q() * coef;
    for mut col in v.column_iter_mut() {
        let nrm = col.norm();
        col /= nrm;
    }
    let new: Vec<f64> = (0..n).map(|j| lambda[j] + g[(j, j)]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| new[a].total_cmp(&new[b]));
    let q = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    let l = order.iter().map(|&i| new[i]).collect();
    SpectralDecomposition::from_parts(q, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{orthonormality_error, Sign};
    use approx::assert_abs_diff_eq;

    #[test]
    fn diagonal_input() {
        let a = SymmetricDense::from_diagonal(&[3.0, 1.0]).unwrap();
        let d = jacobi_evd(&a, JacobiConfig::default()).unwrap();
        assert_eq!(d.eigenvalues(), &[1.0, 3.0]);
        assert_eq!(
            d.q().clone(),
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
        );
    }

    #[test]
    fn swap_matrix() {
        let a = SymmetricDense::from_row_major(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let d = jacobi_evd(&a, JacobiConfig::default()).unwrap();
        assert_abs_diff_eq!(d.eigenvalues()[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.eigenvalues()[1], 1.0, epsilon = 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!((d.q()[(0, 0)] * d.q()[(1, 0)]), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.q()[(0, 1)].abs(), h, epsilon = 1e-15);
    }

    #[test]
    fn golden_matrix() {
        let a = SymmetricDense::from_row_major(2, &[1.0, 1.0, 1.0, 3.0]).unwrap();
        let d = jacobi_evd(&a, JacobiConfig::default()).unwrap();
        let s = 2f64.sqrt();
        assert_abs_diff_eq!(d.eigenvalues()[0], 2.0 - s, epsilon = 1e-15);
        assert_abs_diff_eq!(d.eigenvalues()[1], 2.0 + s, epsilon = 1e-15);
    }

    #[test]
    fn sweep_cap_reported() {
        let a = SymmetricDense::from_row_major(3, &[1.0, 2.0, 3.0, 2.0, 4.0, 5.0, 3.0, 5.0, 6.0])
            .unwrap();
        let cfg = JacobiConfig::new(1e-300, 1).unwrap();
        assert!(matches!(
            jacobi_evd(&a, cfg),
            Err(Error::NoConvergence { sweeps: 1, .. })
        ));
        assert!(JacobiConfig::new(0.0, 5).is_err());
    }

    #[test]
    fn random_matrix_reconstructs() {
        let (d, _) = crate::decomp::random_instance(40, 1, 1.0, 11).unwrap();
        let a = d.reconstruct();
        let e = jacobi_evd(&a, JacobiConfig::default()).unwrap();
        assert!(orthonormality_error(e.q()) < 1e-13);
        let err = crate::decomp::reconstruction_error(&e, &a);
        assert!(err <= 10.0 * 1e-12 * a.frobenius_norm(), "{err}");
        for (x, y) in e.eigenvalues().iter().zip(d.eigenvalues()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-13);
        }
    }

    #[test]
    fn perturbation_diagonal_update() {
        let d = SpectralDecomposition::new(DMatrix::identity(2, 2), vec![1.0, 2.0]).unwrap();
        let k = DMatrix::from_column_slice(2, 1, &[0.01, 0.0]);
        let p = perturbation_update(&d, &LowRankUpdate::positive(k).unwrap()).unwrap();
        assert_abs_diff_eq!(p.eigenvalues()[0], 1.0001, epsilon = 1e-15);
        assert_eq!(p.q().clone(), DMatrix::identity(2, 2));
    }

    #[test]
    fn perturbation_of_zero_update_is_identity() {
        let (d, _) = crate::decomp::random_instance(6, 1, 1.0, 2).unwrap();
        let u = LowRankUpdate::new(DMatrix::zeros(6, 2), vec![Sign::Plus, Sign::Minus]).unwrap();
        let p = perturbation_update(&d, &u).unwrap();
        assert_eq!(p.eigenvalues(), d.eigenvalues());
        assert_abs_diff_eq!(p.q().clone(), d.q().clone(), epsilon = 1e-15);
    }

    #[test]
    fn perturbation_rejects_tiny_gaps() {
        let d = SpectralDecomposition::new(DMatrix::identity(2, 2), vec![1.0, 1.0]).unwrap();
        let k = DMatrix::from_column_slice(2, 1, &[0.01, 0.0]);
        assert!(perturbation_update(&d, &LowRankUpdate::positive(k).unwrap()).is_err());
    }
}
