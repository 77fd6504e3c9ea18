use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dense::{symmetrize, SymmetricDense};
use crate::error::{Error, Result};

/// Orthonormality tolerance enforced by [`SpectralDecomposition::new`].
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Minimum eigenvalue gap of generated instances.
pub const MIN_RANDOM_GAP: f64 = 1e-6;

/// Sign of one column of a low-rank update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Alternating pattern `+, -, +, ...`.
    pub fn alternating(k: usize) -> Vec<Sign> {
        (0..k)
            .map(|i| if i % 2 == 0 { Sign::Plus } else { Sign::Minus })
            .collect()
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
            "-" | "-1" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidInput(format!("bad sign `{other}`"))),
        }
    }
}

/// Parses a sign list such as `+,-,+` or `+-+`.
pub fn parse_signs(s: &str) -> Result<Vec<Sign>> {
    let s = s.trim();
    if s.contains(',') || s.contains(char::is_whitespace) {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    } else {
        s.chars().map(|c| c.to_string().parse()).collect()
    }
}

/// Eigendecomposition `A = Q diag(lambda) Q^T` with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    q: DMatrix<f64>,
    lambda: Vec<f64>,
}

impl SpectralDecomposition {
    /// Validated constructor: shapes, finiteness, ordering and orthonormality.
    pub fn new(q: DMatrix<f64>, lambda: Vec<f64>) -> Result<Self> {
        let d = Self::from_parts(q, lambda)?;
        let err = orthonormality_error(&d.q);
        if err > ORTHONORMAL_TOL {
            return Err(Error::InvalidInput(format!(
                "eigenvector matrix not orthonormal (max |Q^T Q - I| = {err:e})"
            )));
        }
        Ok(d)
    }

    /// Constructor that skips the orthonormality check.
    ///
    /// Used for computed results, whose orthonormality is reported separately.
    pub fn from_parts(q: DMatrix<f64>, lambda: Vec<f64>) -> Result<Self> {
        let n = lambda.len();
        if q.nrows() != n || q.ncols() != n {
            return Err(Error::Dimension(format!(
                "Q is {}x{} but there are {n} eigenvalues",
                q.nrows(),
                q.ncols()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput("empty decomposition".into()));
        }
        if q.iter().chain(lambda.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite entries".into()));
        }
        if let Some(i) = (1..n).find(|&i| lambda[i] < lambda[i - 1]) {
            return Err(Error::InvalidInput(format!(
                "eigenvalues not ascending at index {i}"
            )));
        }
        Ok(SpectralDecomposition { q, lambda })
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambda
    }

    pub fn into_parts(self) -> (DMatrix<f64>, Vec<f64>) {
        (self.q, self.lambda)
    }

    /// `Q diag(lambda) Q^T`.
    pub fn reconstruct(&self) -> SymmetricDense {
        let mut scaled = self.q.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= self.lambda[j];
        }
        let mut a = &scaled * self.q.transpose();
        symmetrize(&mut a);
        SymmetricDense::new(a).expect("finite product")
    }
}

/// The update `K diag(signs) K^T`, with `K` of shape n x k.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankUpdate {
    k: DMatrix<f64>,
    signs: Vec<Sign>,
}

impl LowRankUpdate {
    pub fn new(k: DMatrix<f64>, signs: Vec<Sign>) -> Result<Self> {
        if k.ncols() == 0 || k.nrows() == 0 {
            return Err(Error::InvalidInput("update matrix is empty".into()));
        }
        if k.ncols() > k.nrows() {
            return Err(Error::Dimension(format!(
                "update rank {} exceeds dimension {}",
                k.ncols(),
                k.nrows()
            )));
        }
        if signs.len() != k.ncols() {
            return Err(Error::Dimension(format!(
                "{} signs for {} columns",
                signs.len(),
                k.ncols()
            )));
        }
        if k.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("update has non-finite entries".into()));
        }
        Ok(LowRankUpdate { k, signs })
    }

    pub fn positive(k: DMatrix<f64>) -> Result<Self> {
        let r = k.ncols();
        Self::new(k, vec![Sign::Plus; r])
    }

    /// Rank-one update `sigma * z z^T`.
    pub fn rank_one(z: DVector<f64>, sign: Sign) -> Result<Self> {
        let n = z.len();
        Self::new(DMatrix::from_column_slice(n, 1, z.as_slice()), vec![sign])
    }

    pub fn dim(&self) -> usize {
        self.k.nrows()
    }

    pub fn rank(&self) -> usize {
        self.k.ncols()
    }

    pub fn k(&self) -> &DMatrix<f64> {
        &self.k
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Column `j` as a rank-one update.
    pub fn column(&self, j: usize) -> LowRankUpdate {
        LowRankUpdate {
            k: self.k.columns(j, 1).into_owned(),
            signs: vec![self.signs[j]],
        }
    }

    /// Dense `K diag(signs) K^T`.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut kj = self.k.clone();
        for (j, mut col) in kj.column_iter_mut().enumerate() {
            col *= self.signs[j].value();
        }
        let mut p = kj * self.k.transpose();
        symmetrize(&mut p);
        p
    }
}

/// `A + K diag(signs) K^T`.
pub fn apply_update(a: &SymmetricDense, u: &LowRankUpdate) -> Result<SymmetricDense> {
    if a.dim() != u.dim() {
        return Err(Error::Dimension(format!(
            "matrix is {0}x{0}, update has {1} rows",
            a.dim(),
            u.dim()
        )));
    }
    SymmetricDense::new(a.as_matrix() + u.to_dense())
}

/// Result of a full decomposition update with its quality metrics.
#[derive(Debug, Clone)]
pub struct UpdateResult {
    pub decomposition: SpectralDecomposition,
    /// `||Q' diag(lambda') Q'^T - (A + K J K^T)||_F`.
    pub residual_fro: f64,
    /// `max |Q'^T Q' - I|`.
    pub ortho_err: f64,
    /// Seconds spent in the update itself, metrics excluded.
    pub wall_time: f64,
    /// Seconds spent computing eigenvalues, a part of `wall_time`.
    pub eigenvalue_time: f64,
}

/// `max |Q^T Q - I|`.
pub fn orthonormality_error(q: &DMatrix<f64>) -> f64 {
    let g = q.transpose() * q;
    let mut err: f64 = 0.0;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            let t = if i == j { 1.0 } else { 0.0 };
            err = err.max((g[(i, j)] - t).abs());
        }
    }
    err
}

/// `||Q diag(lambda) Q^T - target||_F`.
pub fn reconstruction_error(d: &SpectralDecomposition, target: &SymmetricDense) -> f64 {
    (d.reconstruct().as_matrix() - target.as_matrix()).norm()
}

/// Euclidean distance between two ascending eigenvalue lists.
pub fn eigenvalue_error(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Seeded random decomposition and update.
///
/// `Q` is the orthogonal factor of a Gaussian matrix, eigenvalues are uniform
/// on `[-1, 1]` with gaps of at least [`MIN_RANDOM_GAP`], and `K` is Gaussian
/// scaled to Frobenius norm `target_norm`. All signs are `+`.
pub fn random_instance(
    n: usize,
    k: usize,
    target_norm: f64,
    seed: u64,
) -> Result<(SpectralDecomposition, LowRankUpdate)> {
    random_instance_with_signs(n, target_norm, seed, vec![Sign::Plus; k])
}

pub fn random_instance_with_signs(
    n: usize,
    target_norm: f64,
    seed: u64,
    signs: Vec<Sign>,
) -> Result<(SpectralDecomposition, LowRankUpdate)> {
    let k = signs.len();
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidInput(format!(
            "need 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    if !(target_norm.is_finite() && target_norm > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bad update norm {target_norm}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_orthogonal(n, &mut rng);
    let lambda = random_spectrum(n, &mut rng);
    let mut kmat = gaussian(n, k, &mut rng);
    let norm = kmat.norm();
    kmat *= target_norm / norm;
    let d = SpectralDecomposition::from_parts(q, lambda)?;
    Ok((d, LowRankUpdate::new(kmat, signs)?))
}

/// Gaussian n x k matrix scaled to the given Frobenius norm.
pub fn random_update_matrix(n: usize, k: usize, target_norm: f64, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = gaussian(n, k, &mut rng);
    let norm = m.norm();
    if norm > 0.0 {
        m *= target_norm / norm;
    }
    m
}

fn gaussian(r: usize, c: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.sample::<f64, _>(StandardNormal))
}

fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = gaussian(n, n, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        if r[(j, j)] < 0.0 {
            col.neg_mut();
        }
    }
    q
}

fn random_spectrum(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut lambda: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    lambda.sort_by(f64::total_cmp);
    for i in 1..n {
        if lambda[i] - lambda[i - 1] < MIN_RANDOM_GAP {
            lambda[i] = lambda[i - 1] + MIN_RANDOM_GAP;
        }
    }
    lambda
}
