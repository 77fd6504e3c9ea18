//! Power-law fits `t ~ C n^p` on log-log data.

use serde::Serialize;

/// Fewest sizes accepted by [`fit_exponent`].
pub const MIN_FIT_SIZES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    /// Slope of `log t` against `log n`.
    pub p: f64,
    /// Coefficient of determination, clamped to `[0, 1]`.
    pub r2: f64,
    pub sizes: Vec<usize>,
}

/// Least-squares line through `(ln n, ln t)`.
///
/// Returns `None` with fewer than [`MIN_FIT_SIZES`] distinct sizes or when a
/// time is not positive.
pub fn fit_exponent(points: &[(usize, f64)]) -> Option<ExponentFit> {
    let mut sizes: Vec<usize> = points.iter().map(|p| p.0).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < MIN_FIT_SIZES || points.iter().any(|&(n, t)| n == 0 || !(t > 0.0)) {
        return None;
    }
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, t)| ((n as f64).ln(), t.ln()))
        .collect();
    let m = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / m;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let p = sxy / sxx;
    let r2 = if syy > 0.0 {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Some(ExponentFit { p, r2, sizes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(usize, f64)> = [10, 20, 40, 80]
            .iter()
            .map(|&n| (n, 3e-6 * (n as f64).powf(2.5)))
            .collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.p - 2.5).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert_eq!(f.sizes, vec![10, 20, 40, 80]);
    }

    #[test]
    fn two_sizes_are_refused() {
        assert!(fit_exponent(&[(10, 1.0), (20, 2.0), (20, 2.1)]).is_none());
        assert!(fit_exponent(&[(10, 1.0), (20, 0.0), (40, 2.0)]).is_none());
    }

    #[test]
    fn noisy_fit_has_lower_r2() {
        let f = fit_exponent(&[(10, 1.0), (20, 4.5), (40, 14.0), (80, 70.0)]).unwrap();
        assert!(f.r2 < 1.0 && f.r2 > 0.9);
        assert!((1.9..2.2).contains(&f.p), "{}", f.p);
    }
}
