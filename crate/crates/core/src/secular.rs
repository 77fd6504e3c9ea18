//! Multi-rank secular functions `f(x) = c - sum_j w_j / (x - d_j)`.

use nalgebra::{DMatrix, DVector};

use crate::decomp::{LowRankUpdate, Sign, SpectralDecomposition};
use crate::error::{Error, Result};

/// Poles, weights and leading constant of a secular function.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularCoefficients {
    poles: Vec<f64>,
    weights: Vec<f64>,
    leading: f64,
    window: Option<(f64, f64)>,
}

impl SecularCoefficients {
    /// Validates ordering and finiteness; exactly-zero weights are dropped.
    pub fn new(poles: Vec<f64>, weights: Vec<f64>, leading: f64) -> Result<Self> {
        if poles.len() != weights.len() {
            return Err(Error::Dimension(format!(
                "{} poles but {} weights",
                poles.len(),
                weights.len()
            )));
        }
        if !leading.is_finite() || poles.iter().chain(&weights).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "non-finite secular coefficients".into(),
            ));
        }
        check_increasing(&poles)?;
        let (poles, weights) = poles
            .into_iter()
            .zip(weights)
            .filter(|&(_, w)| w != 0.0)
            .unzip();
        Ok(SecularCoefficients {
            poles,
            weights,
            leading,
            window: None,
        })
    }

    pub(crate) fn from_raw(poles: Vec<f64>, weights: Vec<f64>, leading: f64) -> Self {
        debug_assert_eq!(poles.len(), weights.len());
        SecularCoefficients {
            poles,
            weights,
            leading,
            window: None,
        }
    }

    /// Declares that every root lies in `[lo, hi]`, for instance from a Weyl
    /// bound on the update. Used to clip the two unbounded intervals.
    pub fn with_root_window(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput(format!("bad root window [{lo}, {hi}]")));
        }
        self.window = Some((lo, hi));
        Ok(self)
    }

    pub(crate) fn inherit_window(mut self, from: &SecularCoefficients) -> Self {
        self.window = from.window;
        self
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn leading(&self) -> f64 {
        self.leading
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn weight_abs_sum(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    /// `max(1, max |pole|)`, the reference magnitude for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.poles.iter().fold(1.0_f64, |s, p| s.max(p.abs()))
    }

    /// Every root lies within this distance of the pole range.
    pub fn root_radius(&self) -> f64 {
        self.weight_abs_sum() / self.leading.abs()
    }

    /// A range holding every root: the declared window, tightened by the
    /// root radius around the poles.
    pub fn root_bounds(&self) -> (f64, f64) {
        let (Some(&first), Some(&last)) = (self.poles.first(), self.poles.last()) else {
            return (f64::NEG_INFINITY, f64::INFINITY);
        };
        let r = self.root_radius();
        let (mut lo, mut hi) = (first - r, last + r);
        if let Some((a, b)) = self.window {
            lo = lo.max(a);
            hi = hi.min(b);
        }
        (lo, hi)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if self.poles.iter().any(|&p| (x - p).abs() <= 1e-300) {
            return Err(Error::AtPole { x });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        let mut s = self.leading;
        for (p, w) in self.poles.iter().zip(&self.weights) {
            s -= w / (x - p);
        }
        s
    }
}

pub(crate) fn check_increasing(poles: &[f64]) -> Result<()> {
    for i in 1..poles.len() {
        if poles[i] <= poles[i - 1] {
            return Err(Error::NonDistinctPoles {
                index: i,
                gap: poles[i] - poles[i - 1],
            });
        }
    }
    Ok(())
}

/// `U = Q^T K` together with the sign signature.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedUpdate {
    u: DMatrix<f64>,
    signs: Vec<Sign>,
}

impl TransformedUpdate {
    pub fn new(u: DMatrix<f64>, signs: Vec<Sign>) -> Result<Self> {
        if u.ncols() == 0 || u.ncols() != signs.len() {
            return Err(Error::Dimension(format!(
                "{} columns with {} signs",
                u.ncols(),
                signs.len()
            )));
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite transformed update".into()));
        }
        Ok(TransformedUpdate { u, signs })
    }

    pub fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn rank(&self) -> usize {
        self.u.ncols()
    }
}

pub fn transform_update(d: &SpectralDecomposition, u: &LowRankUpdate) -> Result<TransformedUpdate> {
    if d.dim() != u.dim() {
        return Err(Error::Dimension(format!(
            "decomposition has dimension {}, update has {} rows",
            d.dim(),
            u.dim()
        )));
    }
    TransformedUpdate::new(d.q().tr_mul(u.k()), u.signs().to_vec())
}

/// Weights of `det[I - J U^T (x - Lambda)^{-1} U] = 1 - sum_i a_i / (x - lambda_i)`.
///
/// `a_i = w_i^T adj(M_i) J w_i` with `w_i` the i-th row of `U` and
/// `M_i = I + J U^T D_i U`, `D_i = diag(1 / (lambda_s - lambda_i))` off `i`.
pub fn secular_coefficients(lambda: &[f64], tu: &TransformedUpdate) -> Result<SecularCoefficients> {
    let n = lambda.len();
    if tu.u.nrows() != n {
        return Err(Error::Dimension(format!(
            "{} poles but U has {} rows",
            n,
            tu.u.nrows()
        )));
    }
    check_increasing(lambda)?;
    let j: Vec<f64> = tu.signs.iter().map(|s| s.value()).collect();
    let weights: Vec<f64> = (0..n).map(|i| pole_weight(lambda, &tu.u, &j, i)).collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidInput("secular weights overflowed".into()));
    }
    SecularCoefficients::new(lambda.to_vec(), weights, 1.0)
}

/// Weights for a subset of rows; the other rows must be zero.
pub(crate) fn weights_for(lambda: &[f64], u: &DMatrix<f64>, j: &[f64], rows: &[usize]) -> Vec<f64> {
    let lam: Vec<f64> = rows.iter().map(|&r| lambda[r]).collect();
    let sub = DMatrix::from_fn(rows.len(), u.ncols(), |i, c| u[(rows[i], c)]);
    (0..rows.len())
        .map(|i| pole_weight(&lam, &sub, j, i))
        .collect()
}

fn pole_weight(lambda: &[f64], u: &DMatrix<f64>, j: &[f64], i: usize) -> f64 {
    let k = u.ncols();
    let li = lambda[i];
    let mut m = DMatrix::<f64>::zeros(k, k);
    for (s, &ls) in lambda.iter().enumerate() {
        if s == i {
            continue;
        }
        let inv = 1.0 / (ls - li);
        for b in 0..k {
            let ub = u[(s, b)] * inv;
            if ub == 0.0 {
                continue;
            }
            for a in 0..k {
                m[(a, b)] += u[(s, a)] * ub;
            }
        }
    }
    // M = I + J * (U^T D U): row a is scaled by j[a].
    for a in 0..k {
        for b in 0..k {
            m[(a, b)] *= j[a];
        }
        m[(a, a)] += 1.0;
    }
    let w: Vec<f64> = (0..k).map(|c| u[(i, c)]).collect();
    let jw: Vec<f64> = w.iter().zip(j).map(|(x, s)| x * s).collect();
    if k <= 3 {
        let adj = adjugate_small(&m);
        let mut acc = 0.0;
        for a in 0..k {
            for b in 0..k {
                acc += w[a] * adj[(a, b)] * jw[b];
            }
        }
        acc
    } else {
        // det [[0, w^T], [J w, M]] = -w^T adj(M) J w
        let mut bord = DMatrix::<f64>::zeros(k + 1, k + 1);
        for a in 0..k {
            bord[(0, a + 1)] = w[a];
            bord[(a + 1, 0)] = jw[a];
            for b in 0..k {
                bord[(a + 1, b + 1)] = m[(a, b)];
            }
        }
        -bord.lu().determinant()
    }
}

/// Adjugate by explicit cofactors, for k <= 3.
pub(crate) fn adjugate_small(m: &DMatrix<f64>) -> DMatrix<f64> {
    match m.nrows() {
        1 => DMatrix::from_element(1, 1, 1.0),
        2 => DMatrix::from_row_slice(2, 2, &[m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]]),
        3 => {
            let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
                m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
            };
            // adj[i][j] = cofactor C[j][i]
            DMatrix::from_row_slice(
                3,
                3,
                &[
                    c(1, 2, 1, 2),
                    -c(0, 2, 1, 2),
                    c(0, 1, 1, 2),
                    -c(1, 2, 0, 2),
                    c(0, 2, 0, 2),
                    -c(0, 1, 0, 2),
                    c(1, 2, 0, 1),
                    -c(0, 2, 0, 1),
                    c(0, 1, 0, 1),
                ],
            )
        }
        k => panic!("adjugate_small called with k = {k}"),
    }
}

/// Splits `a b^T + b a^T` into `u1 u1^T - u2 u2^T`.
pub fn rank2_split(a: &DVector<f64>, b: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    assert_eq!(a.len(), b.len(), "rank2_split: length mismatch");
    // [[0,1],[1,0]] = S diag(1,-1) S^T with S = [[1,1],[1,-1]] / sqrt(2)
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ((a + b) * h, (a - b) * h)
}
