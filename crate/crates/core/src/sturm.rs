//! Sturm chains in secular form.
//!
//! Step `m` represents `p_m(x) = [c_m - sum_j a_j / (x - d_j)] * prod_j (x - d_j)`
//! over `N - m` remaining poles. `p_0` is the secular function times the full
//! pole product, `p_1 = p_0'`, and later steps follow the three-term recurrence
//! `p_m = -p_{m-2} + A_m (x - B_m) p_{m-1}`, each dropping one pole.

use crate::error::{Error, Result};
use crate::rootfind::{
    certified_count, default_tol, interval_ends, probe_interval, End, Root, Settings,
    CERTIFY_BUDGET, DNC_POINTS,
};
use crate::secular::SecularCoefficients;

/// Relative threshold below which a leading constant ends the chain.
pub const EPS_C: f64 = 1e-10;

/// Steps whose magnitude leaves `[2^-RESCALE_EXP, 2^RESCALE_EXP]` are rescaled by a power of two.
const RESCALE_EXP: i32 = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct SturmStep {
    pub m: usize,
    pub c: f64,
    pub weights: Vec<f64>,
    pub poles: Vec<f64>,
    /// Positive power-of-two divisor applied to this step after the recurrence.
    pub scale: f64,
    /// Pole of the previous step that this step no longer carries.
    pub dropped: Option<f64>,
}

impl SturmStep {
    fn from_coeffs(c: &SecularCoefficients) -> Self {
        SturmStep {
            m: 0,
            c: c.leading(),
            weights: c.weights().to_vec(),
            poles: c.poles().to_vec(),
            scale: 1.0,
            dropped: None,
        }
    }

    /// Sign of `p_m(x)`, exact at this step's own poles.
    pub fn sign_at(&self, x: f64) -> i8 {
        let j = self.poles.partition_point(|&d| d < x);
        let len = self.poles.len();
        if j < len && self.poles[j] == x {
            let above = len - 1 - j;
            return parity(above) * sgn(-self.weights[j]);
        }
        let s = self.secular_part(x);
        parity(len - j) * sgn(s)
    }

    /// Sign of `p_m` as `x -> -inf` (`neg = true`) or `+inf`.
    pub fn sign_at_infinity(&self, neg: bool) -> i8 {
        let s = sgn(self.c);
        if neg {
            s * parity(self.poles.len())
        } else {
            s
        }
    }

    fn secular_part(&self, x: f64) -> f64 {
        let mut s = self.c;
        for (d, a) in self.poles.iter().zip(&self.weights) {
            s -= a / (x - d);
        }
        s
    }

    /// `p_m(x)` by direct multiplication; may overflow for long chains.
    pub fn value_at(&self, x: f64) -> f64 {
        // c * prod_j (x - d_j) - sum_j a_j prod_{i != j} (x - d_i)
        let prod: f64 = self.poles.iter().map(|d| x - d).product();
        let mut sum = 0.0;
        for (j, a) in self.weights.iter().enumerate() {
            let mut t = *a;
            for (i, e) in self.poles.iter().enumerate() {
                if i != j {
                    t *= x - e;
                }
            }
            sum += t;
        }
        self.c * prod - sum
    }

    /// Magnitude used for the relative termination test.
    fn magnitude(&self) -> f64 {
        let amax = self.weights.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
        (self.c.abs() * spread(&self.poles)).max(amax)
    }
}

fn spread(poles: &[f64]) -> f64 {
    if poles.len() > 1 {
        poles[poles.len() - 1] - poles[0]
    } else {
        1.0
    }
}

fn sgn(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

fn parity(k: usize) -> i8 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Index of the pole dropped when dividing a step with these poles.
///
/// Short steps drop the largest pole. Longer ones drop the interior pole
/// closest to a neighbour, which keeps the recurrence well conditioned for
/// many more steps than always dropping the largest.
pub fn drop_index(poles: &[f64]) -> usize {
    let n = poles.len();
    if n <= 2 {
        return n.saturating_sub(1);
    }
    (1..n - 1)
        .min_by(|&a, &b| {
            let ga = (poles[a] - poles[a - 1]).min(poles[a + 1] - poles[a]);
            let gb = (poles[b] - poles[b - 1]).min(poles[b + 1] - poles[b]);
            ga.total_cmp(&gb)
        })
        .unwrap()
}

fn rescale(c: &mut f64, a: &mut [f64], poles: &[f64]) -> f64 {
    let amax = a.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let mag = (c.abs() * spread(poles)).max(amax);
    if mag == 0.0 || !mag.is_finite() {
        return 1.0;
    }
    let e = mag.log2().round() as i32;
    if e.abs() <= RESCALE_EXP {
        return 1.0;
    }
    let f = 2f64.powi(-e);
    *c *= f;
    for x in a.iter_mut() {
        *x *= f;
    }
    2f64.powi(e)
}

/// Steps 0 and 1: the secular function and its derivative.
pub fn chain_start(c0: &SecularCoefficients) -> Result<(SturmStep, SturmStep)> {
    let n = c0.len();
    if n == 0 {
        return Err(Error::InvalidInput(
            "a chain needs at least one pole".into(),
        ));
    }
    let d = c0.poles();
    let a = c0.weights();
    // mu_j = c_0 - sum_{i != j} (a_i + a_j) / (d_j - d_i)
    let mu: Vec<f64> = (0..n)
        .map(|j| {
            let mut s = c0.leading();
            for i in 0..n {
                if i != j {
                    s -= (a[i] + a[j]) / (d[j] - d[i]);
                }
            }
            s
        })
        .collect();
    let mut c1: f64 = mu.iter().sum();
    let r = drop_index(d);
    let mut w = Vec::with_capacity(n - 1);
    let mut poles = Vec::with_capacity(n - 1);
    for j in 0..n {
        if j != r {
            w.push((d[r] - d[j]) * mu[j]);
            poles.push(d[j]);
        }
    }
    let scale = rescale(&mut c1, &mut w, &poles);
    let s1 = SturmStep {
        m: 1,
        c: c1,
        weights: w,
        poles,
        scale,
        dropped: Some(d[r]),
    };
    Ok((SturmStep::from_coeffs(c0), s1))
}

/// Next step from the two previous ones.
pub fn long_division(prev2: &SturmStep, prev1: &SturmStep) -> Result<SturmStep> {
    if prev1.poles.is_empty() {
        return Err(Error::InvalidInput(
            "chain already reached a constant".into(),
        ));
    }
    let d_drop = prev1
        .dropped
        .ok_or_else(|| Error::InvalidInput("previous step has no dropped pole".into()))?;
    if prev2.poles.len() != prev1.poles.len() + 1 {
        return Err(Error::Dimension("steps are not consecutive".into()));
    }
    let (c2, c1) = (prev2.c, prev1.c);
    if c1 <= EPS_C * prev1.magnitude() {
        return Err(Error::ChainTerminated {
            step: prev1.m,
            c: c1,
        });
    }
    let s2: f64 = prev2.weights.iter().sum();
    let s1: f64 = prev1.weights.iter().sum();
    let t2: f64 = prev2
        .weights
        .iter()
        .zip(&prev2.poles)
        .map(|(a, d)| a * d)
        .sum();
    let t1: f64 = prev1
        .weights
        .iter()
        .zip(&prev1.poles)
        .map(|(a, d)| a * d)
        .sum();
    let aa = c2 / c1;
    let bb = d_drop + s2 / c2 - s1 / c1;

    let li = drop_index(&prev1.poles);
    let d_last = prev1.poles[li];
    let mut cm = -(c2 * d_drop * d_last + s2 * (d_drop + d_last) - t2)
        + aa * (c1 * bb * d_last + s1 * (bb + d_last) - t1);

    let n1 = prev1.poles.len();
    let mut w = Vec::with_capacity(n1 - 1);
    let mut poles = Vec::with_capacity(n1 - 1);
    let mut k2 = 0;
    for (j1, (&dj, &a1)) in prev1.poles.iter().zip(&prev1.weights).enumerate() {
        while prev2.poles[k2] != dj {
            k2 += 1;
        }
        let a2 = prev2.weights[k2];
        k2 += 1;
        if j1 == li {
            continue;
        }
        w.push(aa * (dj - bb) * (dj - d_last) * a1 - (dj - d_drop) * (dj - d_last) * a2);
        poles.push(dj);
    }
    let scale = rescale(&mut cm, &mut w, &poles);
    Ok(SturmStep {
        m: prev1.m + 1,
        c: cm,
        weights: w,
        poles,
        scale,
        dropped: Some(d_last),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SturmChain {
    pub steps: Vec<SturmStep>,
    /// Reached the constant step with every leading constant positive.
    pub complete: bool,
}

impl SturmChain {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of poles of `p_0`.
    pub fn degree(&self) -> usize {
        self.steps[0].poles.len()
    }

    fn variations(&self, signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Sign variations at `x`; `x` may be infinite.
    pub fn variations_at(&self, x: f64) -> usize {
        if x.is_infinite() {
            let neg = x < 0.0;
            return self.variations(self.steps.iter().map(|s| s.sign_at_infinity(neg)));
        }
        self.variations(self.steps.iter().map(|s| s.sign_at(x)))
    }
}

/// Builds the chain until it reaches a constant or a leading constant
/// stops being safely positive.
pub fn build_chain(c0: &SecularCoefficients) -> SturmChain {
    if c0.is_empty() {
        return SturmChain {
            steps: vec![SturmStep::from_coeffs(c0)],
            complete: c0.leading() > 0.0,
        };
    }
    let (s0, s1) = chain_start(c0).expect("nonempty coefficients");
    let mut steps = vec![s0, s1];
    loop {
        let last = steps.last().unwrap();
        if last.poles.is_empty() {
            let complete = last.c > 0.0;
            return SturmChain { steps, complete };
        }
        match long_division(&steps[steps.len() - 2], last) {
            Ok(s) => steps.push(s),
            Err(_) => {
                return SturmChain {
                    steps,
                    complete: false,
                }
            }
        }
    }
}

/// Root count on an open interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootCount {
    pub count: usize,
    /// False when the chain is partial; the count is then not certified.
    pub exact: bool,
}

/// `V(a) - V(b)`; `a` and `b` may be infinite.
pub fn count_roots(chain: &SturmChain, a: f64, b: f64) -> Result<RootCount> {
    if !(a < b) {
        return Err(Error::InvalidInput(format!("need a < b, got ({a}, {b})")));
    }
    let p0 = &chain.steps[0];
    let scale = p0.poles.iter().fold(1.0_f64, |s, d| s.max(d.abs()));
    let nudge = |x: f64, dir: f64| {
        if x.is_finite() && p0.sign_at(x) == 0 {
            x + dir * 1e-12 * scale
        } else {
            x
        }
    };
    let (a, b) = (nudge(a, 1.0), nudge(b, -1.0));
    let va = chain.variations_at(a) as i64;
    let vb = chain.variations_at(b) as i64;
    Ok(RootCount {
        count: (va - vb).max(0) as usize,
        exact: chain.complete,
    })
}

/// How found roots are matched with the poles they consume when deflating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeflationPairing {
    /// Root `p` consumes the `p`-th pole.
    #[default]
    Leading,
    /// Each root consumes the nearest pole not yet consumed.
    Nearest,
}

/// Removes known roots: `b_j = prod_p (d_j - d_p) / (d_j - xi_p) * a_j` over the
/// poles that remain.
pub fn deflate(c0: &SecularCoefficients, roots: &[f64]) -> Result<SecularCoefficients> {
    let r: Vec<Root> = roots
        .iter()
        .map(|&x| Root {
            origin: x,
            offset: 0.0,
        })
        .collect();
    deflate_roots(c0, &r, DeflationPairing::Leading)
}

pub fn deflate_with(
    c0: &SecularCoefficients,
    roots: &[f64],
    pairing: DeflationPairing,
) -> Result<SecularCoefficients> {
    let r: Vec<Root> = roots
        .iter()
        .map(|&x| Root {
            origin: x,
            offset: 0.0,
        })
        .collect();
    deflate_roots(c0, &r, pairing)
}

pub(crate) fn deflate_roots(
    c0: &SecularCoefficients,
    roots: &[Root],
    pairing: DeflationPairing,
) -> Result<SecularCoefficients> {
    let n = c0.len();
    if roots.len() > n {
        return Err(Error::InvalidInput(format!(
            "{} roots to deflate but only {n} poles",
            roots.len()
        )));
    }
    let d = c0.poles();
    let guard = 1e-12 * c0.scale();
    for r in roots {
        if let Some(&p) = d.iter().find(|&&p| r.gap_to(p).abs() <= guard) {
            return Err(Error::InvalidInput(format!(
                "root {} coincides with pole {p}",
                r.value()
            )));
        }
    }
    let mut consumed = vec![false; n];
    let mut pairs = Vec::with_capacity(roots.len());
    for (k, r) in roots.iter().enumerate() {
        let p = match pairing {
            DeflationPairing::Leading => k,
            DeflationPairing::Nearest => (0..n)
                .filter(|&i| !consumed[i])
                .min_by(|&a, &b| r.gap_to(d[a]).abs().total_cmp(&r.gap_to(d[b]).abs()))
                .unwrap(),
        };
        consumed[p] = true;
        pairs.push((p, *r));
    }
    let mut poles = Vec::with_capacity(n - roots.len());
    let mut weights = Vec::with_capacity(n - roots.len());
    for j in 0..n {
        if consumed[j] {
            continue;
        }
        let mut w = c0.weights()[j];
        for &(p, r) in &pairs {
            w *= (d[j] - d[p]) / r.gap_to(d[j]);
        }
        poles.push(d[j]);
        weights.push(w);
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidInput("deflated weights overflowed".into()));
    }
    Ok(SecularCoefficients::from_raw(poles, weights, c0.leading()).inherit_window(c0))
}

/// Per-interval root counts over the intervals cut by the poles.
#[derive(Debug, Clone, PartialEq)]
pub struct RootCensus {
    /// `counts[i]` roots in `(d_i, d_{i+1})`, with `d_0 = -inf`, `d_{N+1} = +inf`.
    pub counts: Vec<usize>,
    /// Deflation restarts performed.
    pub restarts: usize,
    /// Roots located along the way, ascending.
    pub certified: Vec<f64>,
    /// Intervals where the chain count was overruled by a certified count.
    pub corrected: Vec<usize>,
}

impl RootCensus {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Counts all roots per interval.
///
/// The chain of the (deflated) function is built; while it breaks down,
/// every interval is probed for sign changes, the roots found are deflated
/// and the chain is rebuilt on what remains.
///
/// Chain counts come from floating-point sign variations and can move roots
/// between neighbouring intervals without breaking the parity or total
/// checks, so each interval is also counted from certified cells where that
/// settles within [`CERTIFY_BUDGET`] splits. A certified count overrules
/// the chain. If the chain never completes, a fully certified census is
/// returned instead of an error.
pub fn count_all_roots(c0: &SecularCoefficients) -> Result<RootCensus> {
    let n = c0.len();
    if n == 0 {
        return Ok(RootCensus {
            counts: vec![0],
            restarts: 0,
            certified: Vec::new(),
            corrected: Vec::new(),
        });
    }
    let set = Settings {
        tol: default_tol(c0.scale()),
        points: DNC_POINTS,
        newton: false,
    };
    let ends: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let (lo, hi) = interval_ends(c0, i);
            (end_x(c0, lo), end_x(c0, hi))
        })
        .collect();
    let verified: Vec<Option<usize>> = (0..=n)
        .map(|i| {
            let (lo, hi) = interval_ends(c0, i);
            certified_count(c0, lo, hi, CERTIFY_BUDGET, set)
        })
        .collect();
    let mut g = c0.clone();
    let mut found = vec![0usize; n + 1];
    let mut certified: Vec<Root> = Vec::new();
    for restart in 0..=n {
        let chain = build_chain(&g);
        if chain.complete {
            if let Some(mut counts) = chain_counts(&chain, c0, &found) {
                let mut corrected = Vec::new();
                for (i, v) in verified.iter().enumerate() {
                    if let Some(v) = *v {
                        if v != counts[i] {
                            counts[i] = v;
                            corrected.push(i);
                        }
                    }
                }
                if counts.iter().sum::<usize>() == n {
                    let mut roots: Vec<f64> = certified.iter().map(Root::value).collect();
                    roots.sort_by(f64::total_cmp);
                    return Ok(RootCensus {
                        counts,
                        restarts: restart,
                        certified: roots,
                        corrected,
                    });
                }
            }
        }
        if g.is_empty() {
            break;
        }
        let depth = if restart == 0 { 4 } else { 12 };
        let mut new_roots = Vec::new();
        for (i, &(lo, hi)) in ends.iter().enumerate() {
            let rs = probe_interval(&g, as_end(&g, lo), as_end(&g, hi), depth, set);
            found[i] += rs.len();
            new_roots.extend(rs);
        }
        if new_roots.is_empty() || new_roots.len() > g.len() {
            break;
        }
        g = deflate_roots(&g, &new_roots, DeflationPairing::Nearest)?;
        certified.extend(new_roots);
        if restart == n {
            break;
        }
    }
    if let Some(counts) = verified.iter().copied().collect::<Option<Vec<usize>>>() {
        if counts.iter().sum::<usize>() == n {
            let mut roots: Vec<f64> = certified.iter().map(Root::value).collect();
            roots.sort_by(f64::total_cmp);
            return Ok(RootCensus {
                corrected: (0..=n).collect(),
                counts,
                restarts: n,
                certified: roots,
            });
        }
    }
    Err(Error::Stalled {
        restarts: n,
        certified: certified.len(),
        total: n,
        partial: found,
    })
}

fn end_x(c: &SecularCoefficients, e: End) -> f64 {
    match e {
        End::Pole(i) => c.poles()[i],
        End::Point(x) => x,
    }
}

fn as_end(g: &SecularCoefficients, x: f64) -> End {
    match g.poles().binary_search_by(|p| p.total_cmp(&x)) {
        Ok(i) => End::Pole(i),
        Err(_) => End::Point(x),
    }
}

/// Interval counts from a complete chain of the deflated function plus the
/// roots already found, or `None` if they fail the consistency checks.
fn chain_counts(
    chain: &SturmChain,
    c0: &SecularCoefficients,
    found: &[usize],
) -> Option<Vec<usize>> {
    let n = c0.len();
    let d = c0.poles();
    let mut v = Vec::with_capacity(n + 2);
    v.push(chain.variations_at(f64::NEG_INFINITY) as i64);
    v.extend(d.iter().map(|&x| chain.variations_at(x) as i64));
    v.push(chain.variations_at(f64::INFINITY) as i64);
    let mut counts = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let c = v[i] - v[i + 1] + found[i] as i64;
        if c < 0 {
            return None;
        }
        counts.push(c as usize);
    }
    if counts.iter().sum::<usize>() != n {
        return None;
    }
    let w = c0.weights();
    for (i, &c) in counts.iter().enumerate() {
        let s_lo = if i == 0 { 1 } else { -sgn(w[i - 1]) };
        let s_hi = if i == n { 1 } else { sgn(w[i]) };
        if (c % 2 == 1) != (s_lo != s_hi) {
            return None;
        }
    }
    Some(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn golden() -> SecularCoefficients {
        SecularCoefficients::new(vec![0.0, 1.0], vec![2.0, 1.0], 1.0).unwrap()
    }

    #[test]
    fn worked_chain() {
        let (s0, s1) = chain_start(&golden()).unwrap();
        assert_eq!(s0.c, 1.0);
        assert_eq!(s1.c, 2.0);
        assert_eq!(s1.weights, vec![4.0]);
        assert_eq!(s1.poles, vec![0.0]);
        let s2 = long_division(&s0, &s1).unwrap();
        assert_eq!(s2.c, 2.0);
        assert!(s2.poles.is_empty());
        // p_1(x) = 2x - 4
        assert_eq!(s1.value_at(3.0), 2.0);
        let chain = build_chain(&golden());
        assert!(chain.complete);
        let cs: Vec<f64> = chain.steps.iter().map(|s| s.c).collect();
        assert_eq!(cs, vec![1.0, 2.0, 2.0]);
    }

    #[test]
    fn division_identity_at_seven() {
        let (s0, s1) = chain_start(&golden()).unwrap();
        let s2 = long_division(&s0, &s1).unwrap();
        let lhs = -s0.value_at(7.0) + 0.5 * (7.0 - 2.0) * s1.value_at(7.0);
        assert_eq!(s0.value_at(7.0), 23.0);
        assert_eq!(s1.value_at(7.0), 10.0);
        assert_eq!(lhs, s2.value_at(7.0));
    }

    #[test]
    fn symmetric_rank_one_start() {
        let c = SecularCoefficients::new(vec![0.0, 1.0], vec![0.5, 0.5], 1.0).unwrap();
        let (s0, s1) = chain_start(&c).unwrap();
        assert_eq!(s1.c, 2.0);
        let h = 1e-5;
        let fd = (s0.value_at(5.0 + h) - s0.value_at(5.0 - h)) / (2.0 * h);
        assert_relative_eq!(s1.value_at(5.0), fd, max_relative = 1e-10);
    }

    #[test]
    fn single_pole_chain() {
        let c = SecularCoefficients::new(vec![0.0], vec![1.0], 1.0).unwrap();
        let (_, s1) = chain_start(&c).unwrap();
        assert_eq!(s1.c, 1.0);
        assert!(s1.poles.is_empty());
        assert!(chain_start(&SecularCoefficients::new(vec![], vec![], 1.0).unwrap()).is_err());
    }

    #[test]
    fn termination_guard() {
        let s2 = SturmStep {
            m: 0,
            c: 1.0,
            weights: vec![1.0, 1.0],
            poles: vec![0.0, 1.0],
            scale: 1.0,
            dropped: None,
        };
        let s1 = SturmStep {
            m: 1,
            c: 1e-14,
            weights: vec![1.0],
            poles: vec![0.0],
            scale: 1.0,
            dropped: Some(1.0),
        };
        assert!(matches!(
            long_division(&s2, &s1),
            Err(Error::ChainTerminated { step: 1, .. })
        ));
    }

    #[test]
    fn counting_examples() {
        let chain = build_chain(&golden());
        let all = count_roots(&chain, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert_eq!(
            all,
            RootCount {
                count: 2,
                exact: true
            }
        );
        assert_eq!(count_roots(&chain, 0.5, 0.6).unwrap().count, 1);
        assert_eq!(count_roots(&chain, 10.0, 11.0).unwrap().count, 0);
        assert!(count_roots(&chain, 1.0, 1.0).is_err());
    }

    #[test]
    fn deflation_examples() {
        let s = 2f64.sqrt();
        let g = deflate(&golden(), &[2.0 - s]).unwrap();
        assert_eq!(g.poles(), &[1.0]);
        assert_abs_diff_eq!(g.weights()[0], s + 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g.eval(2.0 + s).unwrap(), 0.0, epsilon = 1e-14);
        assert_eq!(deflate(&golden(), &[]).unwrap(), golden());
        let g = deflate(&golden(), &[2.0 - s, 2.0 + s]).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.leading(), 1.0);
        assert!(deflate(&golden(), &[1.0]).is_err());
    }

    #[test]
    fn census_examples() {
        let c = count_all_roots(&golden()).unwrap();
        assert_eq!(c.counts, vec![0, 1, 1]);
        let empty = SecularCoefficients::new(vec![], vec![], 1.0).unwrap();
        assert_eq!(count_all_roots(&empty).unwrap().counts, vec![0]);
    }

    #[test]
    fn rank_one_census_interlaces() {
        for n in 1..=8 {
            let poles: Vec<f64> = (0..n).map(|i| i as f64 * 0.7 - 1.0).collect();
            let w: Vec<f64> = (0..n).map(|i| 0.1 + 0.05 * i as f64).collect();
            let c = SecularCoefficients::new(poles, w, 1.0).unwrap();
            let census = count_all_roots(&c).unwrap();
            let mut want = vec![1; n + 1];
            want[0] = 0;
            assert_eq!(census.counts, want, "n = {n}");
        }
    }

    #[test]
    fn drop_order() {
        assert_eq!(drop_index(&[0.0, 1.0]), 1);
        // The closest pair is shared by two poles; the left one goes first.
        assert_eq!(drop_index(&[0.0, 1.0, 1.1, 3.0]), 1);
        assert_eq!(drop_index(&[0.0, 2.0, 3.0, 3.5, 10.0]), 2);
    }
}
