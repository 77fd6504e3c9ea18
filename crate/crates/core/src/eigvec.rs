//! Eigenvectors of the updated matrix from its new eigenvalues.
//!
//! For a new eigenvalue `l`, the k-vector `b` spanning the null space of
//! `I + J U^T (Lambda - l)^{-1} U` gives the eigenvector
//! `Q (Lambda - l)^{-1} U b`, up to normalization.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::decomp::{
    apply_update, orthonormality_error, LowRankUpdate, SpectralDecomposition, UpdateResult,
};
use crate::error::{Error, Result, Stage, StageExt};
use crate::prep::{prepare, Prepared, MERGE_GAP};
use crate::rootfind::{solve_prepared, Root, UpdateOptions};

/// Largest accepted `sigma_min / ||m||` for a genuine eigenvalue.
pub const NULL_TOL: f64 = 1e-6;

/// The k x k matrix `I + J L^T (Lambda - l I)^{-1} L`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullProblem {
    pub m: DMatrix<f64>,
}

impl NullProblem {
    /// Builds the problem at `lambda_new` with `gaps[i] = lambda_i - lambda_new`.
    fn from_gaps(u: &DMatrix<f64>, j: &[f64], gaps: &[f64]) -> Self {
        let k = u.ncols();
        let mut m = DMatrix::<f64>::zeros(k, k);
        for (i, &g) in gaps.iter().enumerate() {
            let inv = 1.0 / g;
            for b in 0..k {
                let ub = u[(i, b)] * inv;
                if ub == 0.0 {
                    continue;
                }
                for a in 0..k {
                    m[(a, b)] += u[(i, a)] * ub;
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                m[(a, b)] *= j[a];
            }
            m[(a, a)] += 1.0;
        }
        NullProblem { m }
    }

    pub fn at(d: &SpectralDecomposition, u: &LowRankUpdate, lambda_new: f64) -> Result<Self> {
        if d.dim() != u.dim() {
            return Err(Error::Dimension(
                "decomposition and update sizes differ".into(),
            ));
        }
        let l = d.q().tr_mul(u.k());
        let j: Vec<f64> = u.signs().iter().map(|s| s.value()).collect();
        let gaps: Vec<f64> = d.eigenvalues().iter().map(|x| x - lambda_new).collect();
        Ok(Self::from_gaps(&l, &j, &gaps))
    }
}

/// Unit vector minimizing `||m x||`, with the attained residual.
///
/// The sign makes the first largest-magnitude entry positive.
pub fn null_direction(m: &DMatrix<f64>) -> (DVector<f64>, f64) {
    let k = m.nrows();
    if k == 1 {
        return (DVector::from_element(1, 1.0), m[(0, 0)].abs());
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let s = &svd.singular_values;
    let imin = (0..s.len()).min_by(|&a, &b| s[a].total_cmp(&s[b])).unwrap();
    let mut x = vt.row(imin).transpose();
    fix_sign(x.as_mut_slice());
    let res = (m * &x).norm();
    (x, res)
}

/// Makes the first entry of (near) largest magnitude positive; ties within a
/// few ulps go to the lower index so the choice survives rounding.
fn fix_sign(v: &mut [f64]) {
    let big = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let Some(best) = v.iter().position(|x| x.abs() >= big * (1.0 - 1e-12)) else {
        return;
    };
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Basis coordinates of the eigenvector for one new eigenvalue.
fn coordinates(u: &DMatrix<f64>, j: &[f64], gaps: &[f64], value: f64) -> Result<DVector<f64>> {
    let np = NullProblem::from_gaps(u, j, gaps);
    let (b, res) = null_direction(&np.m);
    // Residuals are judged against the size of the terms summed into `m`,
    // since a true root makes `m` singular through cancellation.
    let mass: f64 = gaps
        .iter()
        .enumerate()
        .map(|(i, g)| u.row(i).norm_squared() / g.abs())
        .sum();
    let norm = (u.ncols() as f64).sqrt() + mass;
    if !(res <= NULL_TOL * norm) {
        return Err(Error::NotAnEigenvalue {
            value,
            residual: res / norm,
        });
    }
    let ub = u * b;
    let mut y = DVector::from_fn(gaps.len(), |i, _| ub[i] / gaps[i]);
    let ny = y.norm();
    if !(ny > 0.0 && ny.is_finite()) {
        return Err(Error::NotAnEigenvalue {
            value,
            residual: f64::NAN,
        });
    }
    y /= ny;
    Ok(y)
}

/// Unit eigenvector of `A + K J K^T` for the new eigenvalue `lambda_new`.
pub fn update_eigenvector(
    d: &SpectralDecomposition,
    u: &LowRankUpdate,
    lambda_new: f64,
) -> Result<DVector<f64>> {
    let p = prepare(d, u)?;
    let q = p.rotated_basis(d.q());
    let near = MERGE_GAP * p.scale;
    if let Some(&i) = p
        .unchanged
        .iter()
        .find(|&&i| (p.lambda[i] - lambda_new).abs() <= near)
    {
        let mut v = q * unchanged_coordinates(&p, i);
        fix_sign(v.as_mut_slice());
        return Ok(v);
    }
    let gaps: Vec<f64> = p.lambda.iter().map(|x| x - lambda_new).collect();
    let y = coordinates(&p.u, &p.j, &gaps, lambda_new).stage(Stage::Eigenvectors)?;
    let mut v = q * y;
    fix_sign(v.as_mut_slice());
    Ok(v)
}

/// Basis coordinates of the eigenvector for an unchanged eigenvalue.
///
/// A pole with a zero row keeps its basis vector. A pole whose weight
/// vanished although its row did not still carries an eigenvalue, but the
/// vector mixes in other directions: with `z = U^T y`, it solves
/// `(I + B J) z = y_i w_i` and `w_i^T J z = 0`, where
/// `B = sum_{j != i} u_j u_j^T / (lambda_j - lambda_i)`, and then
/// `y_j = -u_j^T J z / (lambda_j - lambda_i)`.
fn unchanged_coordinates(p: &Prepared, i: usize) -> DVector<f64> {
    let n = p.n();
    let k = p.u.ncols();
    let row_scale = p.u.norm().max(f64::MIN_POSITIVE);
    let w: Vec<f64> = (0..k).map(|c| p.u[(i, c)]).collect();
    let mut e = DVector::zeros(n);
    if w.iter().all(|x| x.abs() <= 1e-15 * row_scale) {
        e[i] = 1.0;
        return e;
    }
    let li = p.lambda[i];
    let mut b = DMatrix::<f64>::zeros(k, k);
    for j in 0..n {
        if j == i || p.lambda[j] == li {
            continue;
        }
        let inv = 1.0 / (p.lambda[j] - li);
        for c in 0..k {
            let v = p.u[(j, c)] * inv;
            if v == 0.0 {
                continue;
            }
            for r in 0..k {
                b[(r, c)] += p.u[(j, r)] * v;
            }
        }
    }
    // Unknowns (y_i, z); rows: (I + B J) z - y_i w = 0 and w^T J z = 0.
    let mut nmat = DMatrix::<f64>::zeros(k + 1, k + 1);
    for r in 0..k {
        nmat[(r, 0)] = -w[r];
        for c in 0..k {
            nmat[(r, c + 1)] = b[(r, c)] * p.j[c] + if r == c { 1.0 } else { 0.0 };
        }
        nmat[(k, r + 1)] = w[r] * p.j[r];
    }
    let (x, _) = null_direction(&nmat);
    let jz: Vec<f64> = (0..k).map(|c| x[c + 1] * p.j[c]).collect();
    for j in 0..n {
        if j == i {
            e[j] = x[0];
        } else if p.lambda[j] != li {
            let dot: f64 = (0..k).map(|c| p.u[(j, c)] * jz[c]).sum();
            e[j] = -dot / (p.lambda[j] - li);
        }
    }
    let nrm = e.norm();
    if nrm > 0.0 {
        e /= nrm;
    } else {
        e[i] = 1.0;
    }
    e
}

enum Source {
    Root(Root),
    Unchanged(usize),
}

impl Source {
    fn value(&self, p: &Prepared) -> f64 {
        match self {
            Source::Root(r) => r.value(),
            Source::Unchanged(i) => p.lambda[*i],
        }
    }
}

/// Full update `A + K J K^T` of a decomposition, with quality metrics.
pub fn update_decomposition(
    d: &SpectralDecomposition,
    u: &LowRankUpdate,
    tol: f64,
) -> Result<UpdateResult> {
    let opts = UpdateOptions {
        tol: Some(tol),
        ..Default::default()
    };
    update_decomposition_with(d, u, &opts)
}

pub fn update_decomposition_with(
    d: &SpectralDecomposition,
    u: &LowRankUpdate,
    opts: &UpdateOptions,
) -> Result<UpdateResult> {
    let start = Instant::now();
    let decomposition = updated_pairs(d, u, opts)?;
    let eig_time = decomposition.1;
    let decomposition = decomposition.0;
    let wall_time = start.elapsed().as_secs_f64();

    let target = apply_update(&d.reconstruct(), u).stage(Stage::Assembly)?;
    let residual_fro = (decomposition.reconstruct().as_matrix() - target.as_matrix()).norm();
    let ortho_err = orthonormality_error(decomposition.q());
    Ok(UpdateResult {
        decomposition,
        residual_fro,
        ortho_err,
        wall_time,
        eigenvalue_time: eig_time,
    })
}

/// Updated decomposition only, without metrics; also returns the seconds
/// spent on eigenvalues.
pub fn updated_pairs(
    d: &SpectralDecomposition,
    u: &LowRankUpdate,
    opts: &UpdateOptions,
) -> Result<(SpectralDecomposition, f64)> {
    let t0 = Instant::now();
    let p = prepare(d, u)?;
    let (_, roots) = solve_prepared(&p, opts)?;
    let eig_time = t0.elapsed().as_secs_f64();

    let mut sources: Vec<Source> = roots.into_iter().map(Source::Root).collect();
    sources.extend(p.unchanged.iter().map(|&i| Source::Unchanged(i)));
    sources.sort_by(|a, b| a.value(&p).total_cmp(&b.value(&p)));

    let job = |s: &Source| -> Result<DVector<f64>> {
        match s {
            Source::Unchanged(i) => Ok(unchanged_coordinates(&p, *i)),
            Source::Root(r) => {
                let gaps: Vec<f64> = p.lambda.iter().map(|&x| r.gap_to(x)).collect();
                coordinates(&p.u, &p.j, &gaps, r.value())
            }
        }
    };
    let cols: Vec<DVector<f64>> = if opts.parallel {
        sources.par_iter().map(job).collect::<Result<_>>()
    } else {
        sources.iter().map(job).collect::<Result<_>>()
    }
    .stage(Stage::Eigenvectors)?;

    let w = DMatrix::from_columns(&cols);
    let mut q = p.rotated_basis(d.q()) * w;
    if opts.reorthogonalize {
        gram_schmidt(&mut q);
        gram_schmidt(&mut q);
    }
    for mut col in q.column_iter_mut() {
        fix_sign(col.as_mut_slice());
    }
    let lambda: Vec<f64> = sources.iter().map(|s| s.value(&p)).collect();
    let out = SpectralDecomposition::from_parts(q, lambda).stage(Stage::Assembly)?;
    Ok((out, eig_time))
}

/// Modified Gram-Schmidt on the columns, in place.
fn gram_schmidt(q: &mut DMatrix<f64>) {
    let n = q.ncols();
    for j in 0..n {
        for i in 0..j {
            let dot = q.column(i).dot(&q.column(j));
            let qi = q.column(i).into_owned();
            q.column_mut(j).axpy(-dot, &qi, 1.0);
        }
        let nrm = q.column(j).norm();
        if nrm > 0.0 {
            q.column_mut(j).scale_mut(1.0 / nrm);
        }
    }
}
