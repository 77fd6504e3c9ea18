//! Location vectors: how many new eigenvalues fall in each interval cut by
//! the old spectrum.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::decomp::Sign;
use crate::error::{Error, Result};
use crate::rootfind::{
    certified_count, default_tol, interval_ends, Settings, CERTIFY_BUDGET, DNC_POINTS,
};
use crate::secular::SecularCoefficients;
use crate::sturm::{build_chain, count_all_roots, count_roots};

/// `counts[i]` new eigenvalues in `(lambda_i, lambda_{i+1})`, where
/// `lambda_0 = -inf` and `lambda_{n+1} = +inf` (1-based poles).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocationVector {
    counts: Vec<usize>,
}

impl LocationVector {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidInput(
                "location vector needs n + 1 entries".into(),
            ));
        }
        let total: usize = counts.iter().sum();
        if total != counts.len() - 1 {
            return Err(Error::InvalidInput(format!(
                "location vector places {total} roots for {} poles",
                counts.len() - 1
            )));
        }
        Ok(LocationVector { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Classifies sorted values into the intervals cut by sorted `poles`.
    /// Values equal to a pole are not counted.
    pub fn classify(poles: &[f64], values: &[f64]) -> Vec<usize> {
        let mut counts = vec![0; poles.len() + 1];
        for &v in values {
            let i = poles.partition_point(|&p| p < v);
            if i < poles.len() && poles[i] == v {
                continue;
            }
            counts[i] += 1;
        }
        counts
    }
}

/// Sign pattern of a rank-2 update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftKind {
    /// Both signs positive.
    DoubleRight,
    /// Both signs negative.
    DoubleLeft,
    /// Opposite signs.
    Mixed,
}

impl ShiftKind {
    pub fn from_signs(signs: &[Sign]) -> Result<Self> {
        let v: Vec<f64> = signs.iter().map(|s| s.value()).collect();
        Self::from_values(&v)
    }

    pub(crate) fn from_values(j: &[f64]) -> Result<Self> {
        match j {
            [a, b] if *a > 0.0 && *b > 0.0 => Ok(ShiftKind::DoubleRight),
            [a, b] if *a < 0.0 && *b < 0.0 => Ok(ShiftKind::DoubleLeft),
            [_, _] => Ok(ShiftKind::Mixed),
            _ => Err(Error::InvalidInput(format!(
                "shift kind needs a rank-2 signature, got {} signs",
                j.len()
            ))),
        }
    }
}

/// Rank-2 location from the signs of the weights.
///
/// Adjacent weights of equal sign put one root between their poles;
/// otherwise the interval holds zero or two, and the interlacing budget
/// decides. The double-left scan is the mirror image of the double-right one.
pub fn locate_rank2(alpha: &[f64], kind: ShiftKind) -> Result<LocationVector> {
    if alpha.is_empty() {
        return LocationVector::new(vec![0]);
    }
    if let Some(i) = alpha.iter().position(|&a| a == 0.0 || !a.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "weight {i} is zero or non-finite"
        )));
    }
    let counts = match kind {
        ShiftKind::DoubleRight => scan(alpha, 0, 0),
        ShiftKind::DoubleLeft => {
            let mirrored: Vec<f64> = alpha.iter().rev().map(|a| -a).collect();
            let mut c = scan(&mirrored, 0, 0);
            c.reverse();
            c
        }
        ShiftKind::Mixed => {
            let first = usize::from(alpha[0] < 0.0);
            scan(alpha, first, 1)
        }
    };
    LocationVector::new(counts)
}

/// Left-to-right scan. `first` roots are placed below the smallest pole and
/// `slack` widens the budget test by the number of downward shifts.
fn scan(alpha: &[f64], first: usize, slack: usize) -> Vec<usize> {
    let n = alpha.len();
    let mut counts = Vec::with_capacity(n + 1);
    counts.push(first);
    let mut placed = first;
    for i in 1..n {
        // Interval (lambda_i, lambda_{i+1}), 1-based.
        if alpha[i - 1] * alpha[i] > 0.0 {
            counts.push(1);
            placed += 1;
        } else if placed + 2 > i + slack {
            counts.push(0);
        } else {
            counts.push(2);
            placed += 2;
        }
    }
    counts.push(n.saturating_sub(placed));
    counts
}

/// [`locate_rank2`] with each 2-count confirmed by a certified count of the
/// interval or, when that does not settle, by a Sturm count when the chain
/// of `c0` completes and passes its consistency checks.
pub fn locate_rank2_confirmed(c0: &SecularCoefficients, kind: ShiftKind) -> Result<LocationVector> {
    let loc = locate_rank2(c0.weights(), kind)?;
    if c0.is_empty() {
        return Ok(loc);
    }
    let n = c0.len();
    let set = Settings {
        tol: default_tol(c0.scale()),
        points: DNC_POINTS,
        newton: false,
    };
    let mut chain_counts: Option<Option<Vec<usize>>> = None;
    for (i, &claimed) in loc.counts().iter().enumerate() {
        if claimed != 2 {
            continue;
        }
        let (lo, hi) = interval_ends(c0, i);
        let counted = match certified_count(c0, lo, hi, CERTIFY_BUDGET, set) {
            Some(v) => v,
            None => match chain_counts.get_or_insert_with(|| sturm_counts(c0)) {
                Some(counts) => counts[i],
                None => continue,
            },
        };
        if counted != 2 {
            return Err(Error::LocationMismatch {
                interval: i,
                claimed,
                counted,
            });
        }
    }
    debug_assert_eq!(loc.len(), n + 1);
    Ok(loc)
}

/// Per-interval Sturm counts of a complete chain that accounts for every
/// root, or `None`.
fn sturm_counts(c0: &SecularCoefficients) -> Option<Vec<usize>> {
    let chain = build_chain(c0);
    if !chain.complete {
        return None;
    }
    let d = c0.poles();
    let n = d.len();
    let edge = |i: usize| -> f64 {
        if i == 0 {
            f64::NEG_INFINITY
        } else if i > n {
            f64::INFINITY
        } else {
            d[i - 1]
        }
    };
    let counts: Vec<usize> = (0..=n)
        .map(|i| count_roots(&chain, edge(i), edge(i + 1)).map(|c| c.count))
        .collect::<Result<_>>()
        .ok()?;
    (counts.iter().sum::<usize>() == n).then_some(counts)
}

/// Courant-Weyl window for the `index`-th (1-based) new eigenvalue.
///
/// With `p` positive and `q` negative terms, `lambda_{index-q} <= lambda'_index <= lambda_{index+p}`,
/// indices outside `1..=n` meaning an infinite bound.
pub fn interlacing_bounds(
    index: usize,
    lambda: &[f64],
    rank: usize,
    signs: &[Sign],
) -> Result<(f64, f64)> {
    let n = lambda.len();
    if index == 0 || index > n {
        return Err(Error::InvalidInput(format!(
            "index {index} outside 1..={n}"
        )));
    }
    if signs.len() != rank {
        return Err(Error::Dimension(format!(
            "{} signs for rank {rank}",
            signs.len()
        )));
    }
    let p = signs.iter().filter(|&&s| s == Sign::Plus).count();
    let q = rank - p;
    let lo = if index > q {
        lambda[index - q - 1]
    } else {
        f64::NEG_INFINITY
    };
    let hi = if index + p <= n {
        lambda[index + p - 1]
    } else {
        f64::INFINITY
    };
    Ok((lo, hi))
}

/// Location of the new eigenvalues of `diag(lambda) + U J U^T` among the
/// poles `lambda[active]` (ascending), by Sylvester's law of inertia.
///
/// The number of new eigenvalues below `x` is
/// `#{lambda_r < x} + pos(J + U^T (Lambda - x)^{-1} U) - #{J = +1}`, read off
/// a `k x k` matrix. At an active pole `a` the term of row `a` dominates:
/// one eigenvalue of the matrix goes to `+inf` below `a` and to `-inf`
/// above it, and the others tend to those of the remaining terms compressed
/// onto the complement of row `a`. Rows outside `active` are unchanged
/// eigenvalues and are subtracted from the interval holding them.
///
/// This works from `U` directly, so it stays exact when the secular weights
/// have lost digits to cancellation.
pub fn locate_by_inertia(
    lambda: &[f64],
    u: &DMatrix<f64>,
    j: &[f64],
    active: &[usize],
) -> Result<LocationVector> {
    let n = lambda.len();
    let k = j.len();
    if u.nrows() != n || u.ncols() != k {
        return Err(Error::Dimension(format!(
            "U is {}x{} for {n} eigenvalues and {k} signs",
            u.nrows(),
            u.ncols()
        )));
    }
    if active.iter().any(|&i| i >= n) || active.windows(2).any(|w| lambda[w[0]] >= lambda[w[1]]) {
        return Err(Error::InvalidInput(
            "active poles must be distinct and ascending".into(),
        ));
    }
    let plus = j.iter().filter(|&&s| s > 0.0).count() as i64;
    let live: Vec<usize> = (0..n)
        .filter(|&r| u.row(r).iter().any(|&v| v != 0.0))
        .collect();
    // (below a, above a) for every active pole.
    let mut nu = Vec::with_capacity(active.len());
    for &ia in active {
        let a = lambda[ia];
        let mut s = DMatrix::from_diagonal(&DVector::from_column_slice(j));
        for &r in &live {
            if r == ia || lambda[r] == a {
                continue;
            }
            let row = u.row(r);
            s.ger(
                1.0 / (lambda[r] - a),
                &row.transpose(),
                &row.transpose(),
                1.0,
            );
        }
        let pos = positive_on_complement(&s, &u.row(ia).transpose()) as i64;
        let below = lambda.iter().filter(|&&l| l < a).count() as i64;
        let at = lambda.iter().filter(|&&l| l == a).count() as i64;
        nu.push((below + 1 + pos - plus, below + at + pos - plus));
    }
    let inactive: Vec<f64> = (0..n)
        .filter(|r| !active.contains(r))
        .map(|r| lambda[r])
        .collect();
    let inside = |lo: f64, hi: f64| inactive.iter().filter(|&&l| l > lo && l < hi).count() as i64;
    let m = active.len();
    let mut counts = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let (from, lo) = if i == 0 {
            (0, f64::NEG_INFINITY)
        } else {
            (nu[i - 1].1, lambda[active[i - 1]])
        };
        let (to, hi) = if i == m {
            (n as i64, f64::INFINITY)
        } else {
            (nu[i].0, lambda[active[i]])
        };
        let c = to - from - inside(lo, hi);
        if c < 0 {
            return Err(Error::Inertia {
                interval: i,
                count: c,
            });
        }
        counts.push(c as usize);
    }
    LocationVector::new(counts)
}

/// Positive eigenvalues of `s` compressed onto the orthogonal complement of `v`.
fn positive_on_complement(s: &DMatrix<f64>, v: &DVector<f64>) -> usize {
    let k = s.nrows();
    if k == 1 {
        return 0;
    }
    // Householder reflector taking v to a multiple of e_1.
    let mut h = v.clone();
    let alpha = -v[0].signum() * v.norm();
    h[0] -= alpha;
    let hn = h.norm_squared();
    let mut t = s.clone();
    if hn > 0.0 {
        let p = DMatrix::<f64>::identity(k, k) - (&h * h.transpose()) * (2.0 / hn);
        t = &p * s * &p;
    }
    let c = t.view((1, 1), (k - 1, k - 1)).into_owned();
    SymmetricEigen::new(c)
        .eigenvalues
        .iter()
        .filter(|&&e| e > 0.0)
        .count()
}

/// General location through the Sturm census.
pub fn locate_rank_k(c0: &SecularCoefficients) -> Result<LocationVector> {
    LocationVector::new(count_all_roots(c0)?.counts)
}
