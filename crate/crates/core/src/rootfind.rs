//! Divide-and-conquer zero finder for secular functions.
//!
//! Each interval between consecutive poles is solved in coordinates shifted
//! to one of its end poles, so roots very close to a pole keep full relative
//! accuracy. Signs at pole endpoints are known analytically and never
//! evaluated.

use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::decomp::{LowRankUpdate, SpectralDecomposition};
use crate::error::{Error, Result, Stage, StageExt};
use crate::locate::{
    locate_by_inertia, locate_rank2_confirmed, locate_rank_k, LocationVector, ShiftKind,
};
use crate::prep::{prepare, Prepared};
use crate::secular::SecularCoefficients;

/// Sample points per divide-and-conquer round.
pub const DNC_POINTS: usize = 8;

/// Relative width at which refinement in a pole-anchored frame stops.
const REL_WIDTH: f64 = 4.0 * f64::EPSILON;

/// `1e-12 * max(1, scale)`.
pub fn default_tol(scale: f64) -> f64 {
    1e-12 * scale.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub expected: usize,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64, expected: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidInput(format!("bad bracket ({lo}, {hi})")));
        }
        if expected == 0 {
            return Err(Error::InvalidInput(
                "bracket must expect at least one root".into(),
            ));
        }
        Ok(RootBracket { lo, hi, expected })
    }
}

/// A root stored as `origin + offset`, where `origin` is usually a pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub origin: f64,
    pub offset: f64,
}

impl Root {
    pub fn value(&self) -> f64 {
        self.origin + self.offset
    }

    /// `pole - root`, computed without cancellation when `pole` is the origin.
    pub fn gap_to(&self, pole: f64) -> f64 {
        (pole - self.origin) - self.offset
    }
}

/// Interval endpoint: a pole of the function (by index) or a plain point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum End {
    Pole(usize),
    Point(f64),
}

#[derive(Debug, Clone, Copy)]
struct Pt {
    t: f64,
    s: i8,
    /// Function value and slope; NaN at endpoints known only by sign.
    v: f64,
    g: f64,
    /// Sum of the magnitudes of the terms of `v`, for rounding margins.
    m: f64,
}

enum Cell {
    Single(Pt, Pt),
    Double(f64),
}

/// `f` in coordinates `t = x - origin`.
struct Frame<'a> {
    c: &'a SecularCoefficients,
    origin: f64,
    delta: Vec<f64>,
    anchored: bool,
    /// Evaluate through the determinant instead of the weights.
    det: Option<&'a DetForm<'a>>,
}

impl<'a> Frame<'a> {
    fn new(c: &'a SecularCoefficients, origin: f64, anchored: bool) -> Self {
        let delta = c.poles().iter().map(|p| p - origin).collect();
        Frame {
            c,
            origin,
            delta,
            anchored,
            det: None,
        }
    }

    fn with_det(mut self, det: Option<&'a DetForm<'a>>) -> Self {
        self.det = det;
        self
    }

    fn point(&self, t: f64) -> Pt {
        if let Some(d) = self.det {
            let (v, g) = d.eval(self.origin, t);
            return Pt {
                t,
                s: sgn(v),
                v,
                g,
                m: f64::NAN,
            };
        }
        let mut v = self.c.leading();
        let mut m = v.abs();
        let mut g = 0.0;
        for (d, w) in self.delta.iter().zip(self.c.weights()) {
            let r = 1.0 / (t - d);
            v -= w * r;
            m += (w * r).abs();
            g += w * r * r;
        }
        Pt {
            t,
            s: sgn(v),
            v,
            g,
            m,
        }
    }

    /// Fills in value and slope at an end that is not a pole, keeping its
    /// sign.
    fn with_value(&self, p: Pt) -> Pt {
        if self.delta.contains(&p.t) {
            p
        } else {
            Pt {
                s: p.s,
                ..self.point(p.t)
            }
        }
    }

    /// Decides from derivative bounds whether a cell surely holds no root or
    /// exactly one.
    ///
    /// On a cell free of interior poles every term `w / (t - d)^2` of `f'` is
    /// monotone, so its range is set by the two ends, giving an enclosure of
    /// `f'`. A sign-definite enclosure makes `f` monotone. Otherwise a
    /// same-sign cell is root-free when `|f|` stays positive under the worst
    /// slopes allowed, with the term of an end pole kept exactly.
    fn certify(&self, a: &Pt, b: &Pt) -> Verdict {
        if self.det.is_some() {
            return Verdict::Open;
        }
        let w = b.t - a.t;
        // Slope enclosure of the terms other than end poles, split by the
        // sign of the weight.
        let (mut p_lo, mut p_hi, mut n_lo, mut n_hi) = (0.0, 0.0, 0.0, 0.0);
        let (mut left, mut right) = (None, None);
        for (&d, &wt) in self.delta.iter().zip(self.c.weights()) {
            if d == a.t {
                left = Some(wt);
                continue;
            }
            if d == b.t {
                right = Some(wt);
                continue;
            }
            let (ra, rb) = (1.0 / (a.t - d), 1.0 / (b.t - d));
            let (x, y) = (ra * ra, rb * rb);
            if wt > 0.0 {
                p_lo += wt * x.min(y);
                p_hi += wt * x.max(y);
            } else {
                n_lo -= wt * x.min(y);
                n_hi -= wt * x.max(y);
            }
        }
        // Monotonicity, with the end poles added back.
        let (mut pl, mut ph, mut nl, mut nh) = (p_lo, p_hi, n_lo, n_hi);
        for wt in left.into_iter().chain(right) {
            if wt > 0.0 {
                pl += wt / (w * w);
                ph = f64::INFINITY;
            } else {
                nl -= wt / (w * w);
                nh = f64::INFINITY;
            }
        }
        const SAFE: f64 = 1.0 + 1e-10;
        if pl > SAFE * nh || nl > SAFE * ph {
            return if a.s == b.s {
                Verdict::Empty
            } else {
                Verdict::Single
            };
        }
        if a.s != b.s {
            return self.certify_taylor(a, b);
        }
        let s = f64::from(a.s);
        // Slope range of `s * (f - end pole terms)`.
        let (lo, hi) = if s > 0.0 {
            (p_lo - n_hi, p_hi - n_lo)
        } else {
            (n_lo - p_hi, n_hi - p_lo)
        };
        let desc = (-lo).max(0.0);
        let asc = hi.max(0.0);
        let bound = match (left, right) {
            (None, None) => {
                let (ga, gb) = (s * a.v, s * b.v);
                if desc + asc == 0.0 {
                    ga.min(gb)
                } else {
                    let x = ((ga - gb + asc * w) / (desc + asc)).clamp(0.0, w);
                    ga - desc * x
                }
            }
            // `s * f = |wp| / dist + rest`, rest bounded by a line from the
            // known end; the sum is convex in the distance to the pole.
            (Some(wp), None) => pole_envelope(wp.abs(), s * b.v - wp.abs() / w, asc, w),
            (None, Some(wp)) => pole_envelope(wp.abs(), s * a.v - wp.abs() / w, desc, w),
            (Some(_), Some(_)) => return Verdict::Open,
        };
        let mag = [a.m, b.m]
            .into_iter()
            .filter(|m| m.is_finite())
            .fold(0.0, f64::max);
        if bound > 256.0 * f64::EPSILON * mag {
            Verdict::Empty
        } else {
            self.certify_taylor(a, b)
        }
    }

    /// Sharper test through a cubic Taylor model at the cell midpoint.
    ///
    /// Terms of poles off the cell are expanded to order [`TAYLOR_ORDER`], so
    /// large weights of opposite sign on nearby poles cancel in the
    /// coefficients. Orders above three are bounded by their coefficients and
    /// only the tail beyond by the weights, decaying like `(h / dist)^8`.
    /// Terms of end poles are kept exactly: they have the sign of `f` at
    /// their end and a slope of known sign.
    fn certify_taylor(&self, a: &Pt, b: &Pt) -> Verdict {
        const K: usize = TAYLOR_ORDER;
        let h = 0.5 * (b.t - a.t);
        let mid = a.t + h;
        let mut co = [0.0; K + 1];
        let mut mag = [0.0; K + 1];
        co[0] = self.c.leading();
        mag[0] = co[0].abs();
        let (mut rem, mut rem_d) = (0.0, 0.0);
        let mut ends = Vec::new();
        for (&d, &w) in self.delta.iter().zip(self.c.weights()) {
            if d == a.t || d == b.t {
                ends.push(w);
                continue;
            }
            // -w / (u + e) = -(w / e) * sum_k (-u / e)^k
            let e = mid - d;
            let q = h / e.abs();
            if q >= 1.0 {
                return Verdict::Open;
            }
            let mut term = -w / e;
            for k in 0..=K {
                co[k] += term;
                mag[k] += term.abs();
                term *= -1.0 / e;
            }
            let kf = K as f64;
            rem += (w / e).abs() * q.powi(K as i32 + 1) / (1.0 - q);
            rem_d += (w / (e * e)).abs() * q.powi(K as i32) * ((kf + 1.0) - kf * q)
                / ((1.0 - q) * (1.0 - q));
        }
        let round = 4.0 * (self.delta.len() + 2) as f64 * f64::EPSILON;
        rem += round * (0..=K).map(|k| mag[k] * h.powi(k as i32)).sum::<f64>();
        rem_d += round
            * (1..=K)
                .map(|k| k as f64 * mag[k] * h.powi(k as i32 - 1))
                .sum::<f64>();
        for k in 4..=K {
            rem += co[k].abs() * h.powi(k as i32);
            rem_d += k as f64 * co[k].abs() * h.powi(k as i32 - 1);
        }

        let poly = |u: f64| co[0] + u * (co[1] + u * (co[2] + u * co[3]));
        let slope = |u: f64| co[1] + u * (2.0 * co[2] + u * 3.0 * co[3]);
        // Slope extremes: the ends and the vertex of the quadratic.
        let mut cand = vec![-h, h];
        if co[3] != 0.0 {
            let v = -co[2] / (3.0 * co[3]);
            if v.abs() < h {
                cand.push(v);
            }
        }
        let mut lo = cand.iter().map(|&u| slope(u)).fold(f64::INFINITY, f64::min) - rem_d;
        let mut hi = cand
            .iter()
            .map(|&u| slope(u))
            .fold(f64::NEG_INFINITY, f64::max)
            + rem_d;
        for &w in &ends {
            let least = w / (4.0 * h * h);
            if w > 0.0 {
                lo += least;
                hi = f64::INFINITY;
            } else {
                hi += least;
                lo = f64::NEG_INFINITY;
            }
        }
        if lo > 0.0 || hi < 0.0 {
            return if a.s == b.s {
                Verdict::Empty
            } else {
                Verdict::Single
            };
        }
        if a.s != b.s {
            return Verdict::Open;
        }
        // Value minimum of `s * poly`: the ends and the critical points.
        let s = f64::from(a.s);
        let mut pts = vec![-h, h];
        let (qa, qb, qc) = (3.0 * co[3], 2.0 * co[2], co[1]);
        if qa != 0.0 {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                let r = disc.sqrt();
                pts.push((-qb + r) / (2.0 * qa));
                pts.push((-qb - r) / (2.0 * qa));
            }
        } else if qb != 0.0 {
            pts.push(-qc / qb);
        }
        let least = pts
            .into_iter()
            .filter(|u| u.abs() <= h)
            .map(|u| s * poly(u))
            .fold(f64::INFINITY, f64::min);
        let poles: f64 = ends.iter().map(|w| w.abs() / (2.0 * h)).sum();
        if least - rem + poles > 0.0 {
            Verdict::Empty
        } else {
            Verdict::Open
        }
    }
}

/// Minimum over `x` in `(0, w]` of `c / x + rest - slope * (w - x)`.
fn pole_envelope(c: f64, rest: f64, slope: f64, w: f64) -> f64 {
    let x = if slope > 0.0 {
        (c / slope).sqrt().min(w)
    } else {
        w
    };
    c / x + rest - slope * (w - x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Empty,
    Single,
    Open,
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

/// Relative accuracy assumed for the secular weights when judging whether
/// a root found from them can be trusted.
const WEIGHT_ACCURACY: f64 = 1e-13;

/// `det(I + J U^T (Lambda - x)^{-1} U)` evaluated from `U` directly.
///
/// Equal to the weight form of the secular function but free of the
/// cancellation among large weights of opposite sign that the weight form
/// suffers for rank three and up; each evaluation costs `O(n k^2)`.
pub(crate) struct DetForm<'a> {
    lambda: &'a [f64],
    u: &'a DMatrix<f64>,
    j: &'a [f64],
    rows: Vec<usize>,
}

impl<'a> DetForm<'a> {
    pub(crate) fn new(p: &'a Prepared) -> Self {
        let rows = (0..p.n())
            .filter(|&r| p.u.row(r).iter().any(|&v| v != 0.0))
            .collect();
        DetForm {
            lambda: &p.lambda,
            u: &p.u,
            j: &p.j,
            rows,
        }
    }

    /// Value and slope at `origin + t`, with the gaps formed relative to
    /// `origin`.
    fn eval(&self, origin: f64, t: f64) -> (f64, f64) {
        let k = self.j.len();
        let mut m = DMatrix::<f64>::identity(k, k);
        let mut dm = DMatrix::<f64>::zeros(k, k);
        for &r in &self.rows {
            let inv = 1.0 / ((self.lambda[r] - origin) - t);
            for b in 0..k {
                let ub = self.u[(r, b)] * inv;
                for a in 0..k {
                    let s = self.j[a] * self.u[(r, a)] * ub;
                    m[(a, b)] += s;
                    dm[(a, b)] += s * inv;
                }
            }
        }
        let lu = m.lu();
        let det = lu.determinant();
        let tr = lu.solve(&dm).map_or(f64::NAN, |x| x.trace());
        (det, det * tr)
    }
}

/// Cell splits allowed per expected root while isolating; a failed search
/// ends with an error instead of running on.
const ISOLATE_BUDGET: usize = 256;

/// Solver settings for one secular function.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Settings {
    pub tol: f64,
    pub points: usize,
    /// Try safeguarded Newton steps before each sampling round.
    pub newton: bool,
}

fn end_value(c: &SecularCoefficients, e: End) -> f64 {
    match e {
        End::Pole(i) => c.poles()[i],
        End::Point(x) => x,
    }
}

/// Sign just inside the interval at its left end.
fn left_sign(c: &SecularCoefficients, e: End) -> i8 {
    match e {
        End::Pole(i) => -sgn(c.weights()[i]),
        End::Point(x) => sgn(c.eval_unchecked(x)),
    }
}

/// Sign just inside the interval at its right end.
fn right_sign(c: &SecularCoefficients, e: End) -> i8 {
    match e {
        End::Pole(i) => sgn(c.weights()[i]),
        End::Point(x) => sgn(c.eval_unchecked(x)),
    }
}

/// Finds exactly `expected` roots strictly inside `(lo, hi)`.
pub(crate) fn solve_interval(
    c: &SecularCoefficients,
    lo: End,
    hi: End,
    expected: usize,
    set: Settings,
) -> Result<Vec<Root>> {
    solve_interval_with(c, lo, hi, expected, set, None)
}

/// [`solve_interval`], evaluating through `det` when given.
fn solve_interval_with(
    c: &SecularCoefficients,
    lo: End,
    hi: End,
    expected: usize,
    set: Settings,
    det: Option<&DetForm>,
) -> Result<Vec<Root>> {
    if expected == 0 {
        return Ok(Vec::new());
    }
    let (x_lo, x_hi) = (end_value(c, lo), end_value(c, hi));
    let point_sign = |e: End, pole: fn(&SecularCoefficients, End) -> i8| match (e, det) {
        (End::Point(x), Some(d)) => sgn(d.eval(x, 0.0).0),
        _ => pole(c, e),
    };
    let (s_lo, s_hi) = (point_sign(lo, left_sign), point_sign(hi, right_sign));

    if expected == 1 && s_lo * s_hi < 0 {
        // Anchor at the end nearer to the root, judged by the midpoint sign.
        let xm = 0.5 * (x_lo + x_hi);
        let fm = match det {
            Some(d) => d.eval(xm, 0.0).0,
            None => c.eval_unchecked(xm),
        };
        let right_half = sgn(fm) == s_lo;
        let anchor_hi = match (lo, hi) {
            (_, End::Pole(_)) if right_half => true,
            (End::Point(_), End::Pole(_)) => true,
            _ => false,
        };
        let root = if anchor_hi {
            let f = Frame::new(c, x_hi, matches!(hi, End::Pole(_))).with_det(det);
            let t_lo = match lo {
                End::Pole(i) => f.delta[i],
                End::Point(x) => x - x_hi,
            };
            refine(&f, lo_pt(t_lo, s_lo), lo_pt(0.0, s_hi), set)
        } else {
            let f = Frame::new(c, x_lo, matches!(lo, End::Pole(_))).with_det(det);
            let t_hi = match hi {
                End::Pole(i) => f.delta[i],
                End::Point(x) => x - x_lo,
            };
            refine(&f, lo_pt(0.0, s_lo), lo_pt(t_hi, s_hi), set)
        };
        return Ok(vec![root]);
    }

    let left = Frame::new(c, x_lo, matches!(lo, End::Pole(_))).with_det(det);
    let t_hi = match hi {
        End::Pole(i) => left.delta[i],
        End::Point(x) => x - x_lo,
    };
    let a = lo_pt(0.0, s_lo);
    let b = lo_pt(t_hi, s_hi);
    let cells = isolate(&left, a, b, expected, set).map_err(|e| match e {
        Error::RootCount {
            expected, found, ..
        } => Error::RootCount {
            lo: x_lo,
            hi: x_hi,
            expected,
            found,
        },
        other => other,
    })?;

    let mut right: Option<Frame> = None;
    let mut roots = Vec::with_capacity(expected);
    for cell in cells {
        match cell {
            Cell::Double(t) => {
                let r = Root {
                    origin: x_lo,
                    offset: t,
                };
                roots.push(r);
                roots.push(r);
            }
            Cell::Single(p, q) => {
                let mid = 0.5 * (p.t + q.t);
                if let End::Pole(_) = hi {
                    if mid > 0.5 * t_hi {
                        let f =
                            right.get_or_insert_with(|| Frame::new(c, x_hi, true).with_det(det));
                        let qt = if q.t == t_hi { 0.0 } else { q.t - t_hi };
                        roots.push(refine(f, lo_pt(p.t - t_hi, p.s), lo_pt(qt, q.s), set));
                        continue;
                    }
                }
                roots.push(refine(&left, p, q, set));
            }
        }
    }
    roots.sort_by(|a, b| a.value().total_cmp(&b.value()));
    Ok(roots)
}

fn lo_pt(t: f64, s: i8) -> Pt {
    Pt {
        t,
        s,
        v: f64::NAN,
        g: f64::NAN,
        m: f64::NAN,
    }
}

/// `points` equidistant interior samples, or `None` when the floats run out.
fn sample(f: &Frame, lo: Pt, hi: Pt, points: usize) -> Option<Vec<Pt>> {
    let w = hi.t - lo.t;
    let mut pts = Vec::with_capacity(points + 2);
    pts.push(lo);
    for k in 1..=points {
        let t = lo.t + w * (k as f64 / (points + 1) as f64);
        if t <= pts.last().unwrap().t || t >= hi.t {
            return None;
        }
        let mut p = f.point(t);
        if p.s == 0 {
            // An exact zero: nudge off it so sign changes stay well defined.
            let t2 = t + w * 1e-3 / (points + 1) as f64;
            p = f.point(t2);
            if p.s == 0 {
                p.s = 1;
            }
        }
        pts.push(p);
    }
    pts.push(hi);
    Some(pts)
}

/// Splits per interval allowed by [`certified_count`].
pub(crate) const CERTIFY_BUDGET: usize = 256;

/// Expansion order of the Taylor models used to certify cells.
const TAYLOR_ORDER: usize = 7;

/// Root count of `(lo, hi)` from cells that are each certified empty or
/// single-rooted, or `None` if `budget` splits do not settle every cell.
pub(crate) fn certified_count(
    c: &SecularCoefficients,
    lo: End,
    hi: End,
    budget: usize,
    set: Settings,
) -> Option<usize> {
    let x_lo = end_value(c, lo);
    let f = Frame::new(c, x_lo, matches!(lo, End::Pole(_)));
    let t_hi = match hi {
        End::Pole(i) => f.delta[i],
        End::Point(x) => x - x_lo,
    };
    let a = f.with_value(lo_pt(0.0, left_sign(c, lo)));
    let b = f.with_value(lo_pt(t_hi, right_sign(c, hi)));
    let mut open = Vec::new();
    let mut count = 0;
    let mut settle = |a: Pt, b: Pt, open: &mut Vec<(Pt, Pt)>| match f.certify(&a, &b) {
        Verdict::Empty => {}
        Verdict::Single => count += 1,
        Verdict::Open => open.push((a, b)),
    };
    settle(a, b, &mut open);
    for _ in 0..budget {
        // Widest first: the remainders shrink with the cell width.
        let Some(i) = (0..open.len()).max_by(|&x, &y| {
            let wx = open[x].1.t - open[x].0.t;
            let wy = open[y].1.t - open[y].0.t;
            wx.total_cmp(&wy)
        }) else {
            break;
        };
        let (a, b) = open.swap_remove(i);
        let pts = sample(&f, a, b, set.points)?;
        for w in pts.windows(2) {
            settle(w[0], w[1], &mut open);
        }
    }
    open.is_empty().then_some(count)
}

/// Splits `(lo, hi)` until its cells account for `expected` roots.
///
/// A cell whose ends differ in sign holds an odd number of roots, otherwise
/// an even number, so parity gives every cell a lower bound. While the bounds
/// fall short, the cell most likely to hide a pair is resampled, taking turns
/// with the widest cell. Cells certified empty or single-rooted leave the
/// search. Once the bounds add up to `expected`, every bound is exact and
/// each sign change brackets a single root.
fn isolate(f: &Frame, lo: Pt, hi: Pt, expected: usize, set: Settings) -> Result<Vec<Cell>> {
    let count_err = |found: usize| Error::RootCount {
        lo: f.origin + lo.t,
        hi: f.origin + hi.t,
        expected,
        found,
    };
    let (lo, hi) = (f.with_value(lo), f.with_value(hi));
    let mut open: Vec<(Pt, Pt)> = Vec::new();
    let mut single: Vec<(Pt, Pt)> = Vec::new();
    let mut narrow: Vec<(Pt, Pt)> = Vec::new();
    let mut doubles: Vec<f64> = Vec::new();
    let file = |a: Pt, b: Pt, open: &mut Vec<(Pt, Pt)>, single: &mut Vec<(Pt, Pt)>| match f
        .certify(&a, &b)
    {
        Verdict::Empty => {}
        Verdict::Single => single.push((a, b)),
        Verdict::Open => open.push((a, b)),
    };
    file(lo, hi, &mut open, &mut single);
    let mut rounds = ISOLATE_BUDGET * (expected + 1);
    loop {
        let known = single.len()
            + open
                .iter()
                .chain(&narrow)
                .filter(|(a, b)| a.s != b.s)
                .count()
            + 2 * doubles.len();
        if known == expected {
            break;
        }
        if known > expected || !(expected - known).is_multiple_of(2) || rounds == 0 {
            return Err(count_err(known));
        }
        rounds -= 1;
        // Alternate between the best-scored and the widest cell, so that a
        // misleading score cannot starve part of the interval.
        let best = if rounds.is_multiple_of(2) {
            (0..open.len()).min_by(|&x, &y| {
                let (kx, ky) = (cell_score(&open[x]), cell_score(&open[y]));
                kx.0.total_cmp(&ky.0).then(ky.1.total_cmp(&kx.1))
            })
        } else {
            (0..open.len()).max_by(|&x, &y| {
                (open[x].1.t - open[x].0.t).total_cmp(&(open[y].1.t - open[y].0.t))
            })
        };
        let Some(i) = best else {
            // Nothing left to split: accept a tangency where the function
            // nearly vanishes.
            let j = (0..narrow.len())
                .filter(|&j| narrow[j].0.s == narrow[j].1.s)
                .min_by(|&x, &y| near_zero(&narrow[x]).total_cmp(&near_zero(&narrow[y])));
            match j {
                Some(j) if near_zero(&narrow[j]) <= set.tol.sqrt() => {
                    let (a, b) = narrow.swap_remove(j);
                    doubles.push(0.5 * (a.t + b.t));
                    continue;
                }
                Some(j) => {
                    return Err(Error::NoRoot {
                        lo: f.origin + narrow[j].0.t,
                        hi: f.origin + narrow[j].1.t,
                        residual: near_zero(&narrow[j]),
                    })
                }
                None => return Err(count_err(known)),
            }
        };
        let (a, b) = open.swap_remove(i);
        match sample(f, a, b, set.points) {
            Some(pts) if b.t - a.t >= set.tol => {
                for w in pts.windows(2) {
                    file(w[0], w[1], &mut open, &mut single);
                }
            }
            _ => narrow.push((a, b)),
        }
    }
    let mut out: Vec<Cell> = single
        .into_iter()
        .chain(open)
        .chain(narrow)
        .filter(|(a, b)| a.s != b.s)
        .map(|(a, b)| Cell::Single(a, b))
        .chain(doubles.into_iter().map(Cell::Double))
        .collect();
    out.sort_by(|x, y| cell_left(x).total_cmp(&cell_left(y)));
    Ok(out)
}

fn cell_left(c: &Cell) -> f64 {
    match c {
        Cell::Single(a, _) => a.t,
        Cell::Double(t) => *t,
    }
}

/// Smallest sampled `|f|` at the ends of a cell.
fn near_zero((a, b): &(Pt, Pt)) -> f64 {
    let va = if a.v.is_nan() {
        f64::INFINITY
    } else {
        a.v.abs()
    };
    let vb = if b.v.is_nan() {
        f64::INFINITY
    } else {
        b.v.abs()
    };
    va.min(vb)
}

/// Split priority of a cell (lower first) and its width for tie-breaks.
///
/// Same-sign cells are ranked by how far below the smaller end value a cubic
/// Hermite fit of the end values and slopes dips; a negative score means the
/// fit itself crosses zero and a monotone fit scores 1. Cells with one end at
/// a pole extrapolate from the other end. Sign-change cells go last unless the
/// fit crosses three times. Equal scores split the widest cell first.
fn cell_score(cell: &(Pt, Pt)) -> (f64, f64) {
    const GRID: usize = 16;
    let (a, b) = cell;
    let w = b.t - a.t;
    let a_known = a.v.is_finite() && a.g.is_finite();
    let b_known = b.v.is_finite() && b.g.is_finite();
    if !a_known && !b_known {
        return (f64::NEG_INFINITY, w);
    }
    if a_known && b_known {
        let h = |u: f64| {
            let (u2, u3) = (u * u, u * u * u);
            (2.0 * u3 - 3.0 * u2 + 1.0) * a.v
                + (u3 - 2.0 * u2 + u) * w * a.g
                + (-2.0 * u3 + 3.0 * u2) * b.v
                + (u3 - u2) * w * b.g
        };
        if a.s != b.s {
            let mut crossings = 0;
            let mut last = a.v;
            for k in 1..=GRID {
                let v = h(k as f64 / GRID as f64);
                if v * last < 0.0 {
                    crossings += 1;
                }
                last = v;
            }
            return (if crossings >= 3 { -1.0 } else { 2.0 }, w);
        }
        let s = f64::from(a.s);
        let floor = (s * a.v).min(s * b.v);
        let low = (1..GRID)
            .map(|k| s * h(k as f64 / GRID as f64))
            .fold(f64::INFINITY, f64::min);
        return ((low / floor).min(1.0), w);
    }
    // One end is a pole or unevaluated: extrapolate from the other along its
    // tangent over half the cell.
    let (e, dir) = if a_known { (a, 1.0) } else { (b, -1.0) };
    if a.s != b.s {
        return (2.0, w);
    }
    let s = f64::from(e.s);
    let toward = (s * e.g * dir).min(0.0);
    ((1.0 + toward * 0.5 * w / (s * e.v)).min(0.95), w)
}

/// Shrinks a single-sign-change bracket to its root.
///
/// With `set.newton`, Newton steps from the latest interior point come first.
/// A step that leaves the bracket or fails to halve the previous one hands
/// over to a sampling round. A step below the target width is confirmed by
/// two points straddling it, so every exit is still a bracket of the
/// requested width.
fn refine(f: &Frame, mut lo: Pt, mut hi: Pt, set: Settings) -> Root {
    let found = |t: f64| Root {
        origin: f.origin,
        offset: t,
    };
    let mut last: Option<Pt> = None;
    let mut prev_step = f64::INFINITY;
    loop {
        let w = hi.t - lo.t;
        let rel = REL_WIDTH * lo.t.abs().max(hi.t.abs());
        if w <= set.tol && (!f.anchored || w <= rel) {
            break;
        }
        if let Some(p) = last.filter(|_| set.newton) {
            let t = p.t - p.v / p.g;
            let step = (t - p.t).abs();
            if t > lo.t && t < hi.t && step <= 0.5 * prev_step {
                let target = if f.anchored {
                    set.tol.min(rel)
                } else {
                    set.tol
                };
                let h = 0.25 * target;
                let probes: Vec<f64> = if step <= h {
                    vec![t - h, t + h]
                } else {
                    vec![t]
                };
                let pts: Vec<Pt> = probes
                    .into_iter()
                    .filter(|&x| x > lo.t && x < hi.t)
                    .map(|x| f.point(x))
                    .collect();
                for q in &pts {
                    if q.s == 0 {
                        return found(q.t);
                    }
                    tighten(&mut lo, &mut hi, *q);
                }
                last = newton_start(&pts);
                prev_step = step;
                if step > h || hi.t - lo.t <= target {
                    continue;
                }
            }
        }
        let Some(pts) = sample(f, lo, hi, set.points) else {
            break;
        };
        match (0..pts.len() - 1).find(|&i| pts[i].s != pts[i + 1].s) {
            Some(i) => {
                lo = pts[i];
                hi = pts[i + 1];
            }
            None => break,
        }
        last = newton_start(&[lo, hi]);
        prev_step = f64::INFINITY;
    }
    found(0.5 * (lo.t + hi.t))
}

/// Moves the bracket end that shares the sign of `q` onto `q`.
fn tighten(lo: &mut Pt, hi: &mut Pt, q: Pt) {
    if q.s == lo.s && q.t > lo.t {
        *lo = q;
    } else if q.s == hi.s && q.t < hi.t {
        *hi = q;
    }
}

/// The evaluated point with the smallest `|f|` and a usable slope.
fn newton_start(pts: &[Pt]) -> Option<Pt> {
    pts.iter()
        .filter(|p| p.v.is_finite() && p.g.is_finite() && p.g != 0.0)
        .min_by(|a, b| a.v.abs().total_cmp(&b.v.abs()))
        .copied()
}

/// Sign-change probe used by the root census: returns the roots of every
/// sign change found in `(lo, hi)`, zooming into the sample nearest to a
/// sign change at most `depth` times when none is visible.
pub(crate) fn probe_interval(
    c: &SecularCoefficients,
    lo: End,
    hi: End,
    depth: usize,
    set: Settings,
) -> Vec<Root> {
    let x_lo = end_value(c, lo);
    let left = Frame::new(c, x_lo, matches!(lo, End::Pole(_)));
    let t_hi = match hi {
        End::Pole(i) => left.delta[i],
        End::Point(x) => x - x_lo,
    };
    let mut a = lo_pt(0.0, left_sign(c, lo));
    let mut b = lo_pt(t_hi, right_sign(c, hi));
    let mut cells = Vec::new();
    for _ in 0..=depth {
        let Some(pts) = sample(&left, a, b, set.points) else {
            break;
        };
        cells = (0..pts.len() - 1)
            .filter(|&i| pts[i].s != pts[i + 1].s)
            .map(|i| (pts[i], pts[i + 1]))
            .collect();
        if !cells.is_empty() {
            break;
        }
        let s = f64::from(pts[0].s);
        let j = (1..pts.len() - 1)
            .min_by(|&x, &y| (s * pts[x].v).total_cmp(&(s * pts[y].v)))
            .unwrap();
        a = pts[j - 1];
        b = pts[j + 1];
    }
    let mut right: Option<Frame> = None;
    cells
        .into_iter()
        .map(|(p, q)| match hi {
            End::Pole(_) if 0.5 * (p.t + q.t) > 0.5 * t_hi => {
                let f = right.get_or_insert_with(|| Frame::new(c, end_value(c, hi), true));
                let qt = if q.t == t_hi { 0.0 } else { q.t - t_hi };
                refine(f, lo_pt(p.t - t_hi, p.s), lo_pt(qt, q.s), set)
            }
            _ => refine(&left, p, q, set),
        })
        .collect()
}

/// Divide-and-conquer solve on a bracket whose endpoints are not poles.
pub fn dnc_solve(c: &SecularCoefficients, b: RootBracket, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if let Some(&p) = c.poles().iter().find(|&&p| p > b.lo && p < b.hi) {
        return Err(Error::InvalidInput(format!(
            "pole {p} lies inside bracket ({}, {})",
            b.lo, b.hi
        )));
    }
    let set = Settings {
        tol,
        points: DNC_POINTS,
        newton: false,
    };
    let roots = solve_interval(c, End::Point(b.lo), End::Point(b.hi), b.expected, set)?;
    Ok(roots.iter().map(Root::value).collect())
}

/// Rank-one update `diag(lambda) + sigma z z^T`, one root per interval,
/// solved by bisection on the monotone secular function.
pub fn solve_rank1(lambda: &[f64], zeta: &[f64], sigma: f64, tol: f64) -> Result<Vec<f64>> {
    if lambda.len() != zeta.len() {
        return Err(Error::Dimension(format!(
            "{} poles but {} components",
            lambda.len(),
            zeta.len()
        )));
    }
    crate::secular::check_increasing(lambda)?;
    if sigma == 0.0 || lambda.is_empty() {
        return Ok(lambda.to_vec());
    }
    let w: Vec<f64> = zeta.iter().map(|z| sigma * z * z).collect();
    let cut = crate::prep::WEIGHT_DEFLATION * (1.0 + w.iter().map(|x| x.abs()).sum::<f64>());
    let mut poles = Vec::new();
    let mut weights = Vec::new();
    let mut out = Vec::with_capacity(lambda.len());
    for (&l, &a) in lambda.iter().zip(&w) {
        if a.abs() > cut {
            poles.push(l);
            weights.push(a);
        } else {
            out.push(l);
        }
    }
    let reach: f64 = w.iter().sum();
    let (lo, hi) = (lambda[0], lambda[lambda.len() - 1]);
    let c = SecularCoefficients::new(poles, weights, 1.0)?
        .with_root_window(lo + reach.min(0.0), hi + reach.max(0.0))?;
    let counts = rank1_counts(c.len(), sigma > 0.0);
    let set = Settings {
        tol,
        points: 1,
        newton: false,
    };
    for r in solve_counts(&c, &counts, set, false, None)? {
        out.push(r.value());
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn rank1_counts(n: usize, upward: bool) -> Vec<usize> {
    let mut counts = vec![1; n + 1];
    if upward {
        counts[0] = 0;
    } else {
        counts[n] = 0;
    }
    counts
}

/// Endpoints of interval `i` of a location vector, with the unbounded ends
/// clipped just beyond [`SecularCoefficients::root_bounds`].
pub(crate) fn interval_ends(c: &SecularCoefficients, i: usize) -> (End, End) {
    let n = c.len();
    let (first, last) = (c.poles()[0], c.poles()[n - 1]);
    let (wlo, whi) = c.root_bounds();
    let slack = c.scale() * 1e-12 + f64::MIN_POSITIVE;
    let lo = if i == 0 {
        let reach = (first - wlo).max(0.0);
        End::Point(first - 1.001 * reach - slack)
    } else {
        End::Pole(i - 1)
    };
    let hi = if i == n {
        let reach = (whi - last).max(0.0);
        End::Point(last + 1.001 * reach + slack)
    } else {
        End::Pole(i)
    };
    (lo, hi)
}

/// Solves every interval of a location vector; roots ascending.
///
/// With `det` given, an interval is solved again through the determinant
/// when the weight form fails on it or leaves a root whose rounding error,
/// estimated from the magnitude of the weight terms and the slope, exceeds
/// `sqrt(tol)`.
pub(crate) fn solve_counts(
    c: &SecularCoefficients,
    counts: &[usize],
    set: Settings,
    parallel: bool,
    det: Option<&DetForm>,
) -> Result<Vec<Root>> {
    if c.is_empty() {
        return Ok(Vec::new());
    }
    if counts.len() != c.len() + 1 {
        return Err(Error::Dimension(format!(
            "location vector of length {} for {} poles",
            counts.len(),
            c.len()
        )));
    }
    let job = |i: usize| -> Result<Vec<Root>> {
        let (lo, hi) = interval_ends(c, i);
        let fast = solve_interval(c, lo, hi, counts[i], set);
        let Some(d) = det else {
            return fast;
        };
        match fast {
            Ok(roots) if roots.iter().all(|r| trusted(c, r, set.tol)) => Ok(roots),
            _ => solve_interval_with(c, lo, hi, counts[i], set, Some(d)),
        }
    };
    let parts: Vec<Vec<Root>> = if parallel {
        (0..counts.len())
            .into_par_iter()
            .map(job)
            .collect::<Result<_>>()?
    } else {
        (0..counts.len()).map(job).collect::<Result<_>>()?
    };
    Ok(parts.into_iter().flatten().collect())
}

/// Whether the weight-form rounding error at a root, moved through the
/// slope, stays within `sqrt(tol)`.
fn trusted(c: &SecularCoefficients, r: &Root, tol: f64) -> bool {
    let p = Frame::new(c, r.origin, true).point(r.offset);
    WEIGHT_ACCURACY * p.m <= tol.sqrt() * p.g.abs()
}

/// Which root-location strategy the pipeline uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Locator {
    /// Rank-1 interlacing, rank-2 coefficient signs, or the Sturm census.
    #[default]
    Auto,
    /// The Sturm census regardless of rank.
    Sturm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateOptions {
    /// Absolute root tolerance; `None` means [`default_tol`] of the spectrum.
    pub tol: Option<f64>,
    pub locator: Locator,
    /// Solve brackets and eigenvectors concurrently.
    pub parallel: bool,
    /// Modified Gram-Schmidt pass over the new eigenvectors.
    pub reorthogonalize: bool,
    /// For rank three and up, finish each root with Newton steps on
    /// `det(I + J U^T (Lambda - x)^{-1} U)`. The weights of those ranks come
    /// from cofactors that lose digits when the update dominates the gaps.
    pub polish: bool,
}

impl Default for UpdateOptions {
    fn default() -> Self {
        UpdateOptions {
            tol: None,
            locator: Locator::Auto,
            parallel: false,
            reorthogonalize: false,
            polish: true,
        }
    }
}

/// Roots of the prepared secular function, in ascending order.
pub(crate) fn solve_prepared(
    p: &Prepared,
    opts: &UpdateOptions,
) -> Result<(LocationVector, Vec<Root>)> {
    let c = &p.coeffs;
    let counts = locate_prepared(p, opts.locator).stage(Stage::Location)?;
    let tol = opts.tol.unwrap_or_else(|| default_tol(p.scale));
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let set = Settings {
        tol,
        points: DNC_POINTS,
        newton: true,
    };
    let det = (p.j.len() >= 3).then(|| DetForm::new(p));
    let mut roots = solve_counts(c, counts.counts(), set, opts.parallel, det.as_ref())
        .stage(Stage::RootFinding)?;
    if opts.polish && p.j.len() >= 3 {
        let limits: Vec<f64> = (0..roots.len())
            .map(|i| {
                let x = roots[i].value();
                let prev = if i > 0 {
                    x - roots[i - 1].value()
                } else {
                    f64::INFINITY
                };
                let next = roots.get(i + 1).map_or(f64::INFINITY, |r| r.value() - x);
                0.25 * prev.min(next)
            })
            .collect();
        let job = |(r, lim): (&Root, &f64)| polish(p, *r, *lim);
        roots = if opts.parallel {
            roots.par_iter().zip(&limits).map(job).collect()
        } else {
            roots.iter().zip(&limits).map(job).collect()
        };
    }
    Ok((counts, roots))
}

/// Newton iteration on `g(x) = det M(x)`, `M(x) = I + J U^T (Lambda - x)^{-1} U`,
/// using `g'/g = tr(M^{-1} M')`. Steps must stay under `limit`, a quarter of
/// the nearest pole distance, and keep shrinking; otherwise the last
/// accepted iterate is returned.
fn polish(p: &Prepared, r: Root, limit: f64) -> Root {
    const STEPS: usize = 4;
    let k = p.j.len();
    let delta: Vec<f64> = p.lambda.iter().map(|l| l - r.origin).collect();
    let mut t = r.offset;
    let mut last = f64::INFINITY;
    for _ in 0..STEPS {
        let gaps: Vec<f64> = delta.iter().map(|d| d - t).collect();
        let near = gaps.iter().fold(f64::INFINITY, |m, g| m.min(g.abs()));
        if !(near > 0.0) {
            break;
        }
        let mut m = DMatrix::<f64>::identity(k, k);
        let mut dm = DMatrix::<f64>::zeros(k, k);
        for (i, g) in gaps.iter().enumerate() {
            let inv = 1.0 / g;
            for b in 0..k {
                let ub = p.u[(i, b)] * inv;
                if ub == 0.0 {
                    continue;
                }
                for a in 0..k {
                    let s = p.j[a] * p.u[(i, a)] * ub;
                    m[(a, b)] += s;
                    dm[(a, b)] += s * inv;
                }
            }
        }
        let Some(x) = m.lu().solve(&dm) else {
            break;
        };
        let tr = x.trace();
        if !(tr.is_finite() && tr != 0.0) {
            break;
        }
        let step = -1.0 / tr;
        if !(step.abs() <= limit.min(0.25 * near) && step.abs() < 0.5 * last) {
            break;
        }
        t += step;
        last = step.abs();
        if step.abs() <= f64::EPSILON * t.abs() {
            break;
        }
    }
    Root {
        origin: r.origin,
        offset: t,
    }
}

fn locate_prepared(p: &Prepared, locator: Locator) -> Result<LocationVector> {
    let c = &p.coeffs;
    if c.is_empty() {
        return LocationVector::new(vec![0]);
    }
    let k = p.j.len();
    match (locator, k) {
        (Locator::Auto, 1) => LocationVector::new(rank1_counts(c.len(), p.j[0] > 0.0)),
        (Locator::Auto, 2) => {
            let kind = ShiftKind::from_values(&p.j)?;
            locate_rank2_confirmed(c, kind)
        }
        // The census counts the weight form of the secular function; the
        // inertia count works from U and overrules it.
        _ => match (
            locate_rank_k(c),
            locate_by_inertia(&p.lambda, &p.u, &p.j, &p.active()),
        ) {
            (_, Ok(l)) => Ok(l),
            (Ok(l), Err(_)) => Ok(l),
            (Err(e), Err(_)) => Err(e),
        },
    }
}

/// Poles of the deflated secular function of `A + K J K^T` and the number of
/// new eigenvalues in each interval they cut. Eigenpairs left unchanged by the
/// update carry no pole.
pub fn locate_update(
    d: &SpectralDecomposition,
    u: &LowRankUpdate,
    locator: Locator,
) -> Result<(Vec<f64>, LocationVector)> {
    let p = prepare(d, u)?;
    let loc = locate_prepared(&p, locator).stage(Stage::Location)?;
    Ok((p.coeffs.poles().to_vec(), loc))
}

/// New eigenvalues of `A + K J K^T`, ascending.
pub fn update_eigenvalues(
    d: &SpectralDecomposition,
    u: &LowRankUpdate,
    tol: f64,
) -> Result<Vec<f64>> {
    let opts = UpdateOptions {
        tol: Some(tol),
        ..Default::default()
    };
    update_eigenvalues_with(d, u, &opts)
}

pub fn update_eigenvalues_with(
    d: &SpectralDecomposition,
    u: &LowRankUpdate,
    opts: &UpdateOptions,
) -> Result<Vec<f64>> {
    let p = prepare(d, u)?;
    let (_, roots) = solve_prepared(&p, opts)?;
    let mut out: Vec<f64> = roots.iter().map(Root::value).collect();
    out.extend(p.unchanged.iter().map(|&i| p.lambda[i]));
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Eigenvalue update with its wall time in seconds.
pub fn timed_update_eigenvalues(
    d: &SpectralDecomposition,
    u: &LowRankUpdate,
    opts: &UpdateOptions,
) -> Result<(Vec<f64>, f64)> {
    let t = Instant::now();
    let v = update_eigenvalues_with(d, u, opts)?;
    Ok((v, t.elapsed().as_secs_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn golden() -> SecularCoefficients {
        SecularCoefficients::new(vec![0.0, 1.0], vec![2.0, 1.0], 1.0).unwrap()
    }

    #[test]
    fn dnc_golden_roots() {
        let s2 = 2f64.sqrt();
        let c = golden();
        let tight = RootBracket::new(1e-9, 1.0 - 1e-9, 1).unwrap();
        assert_abs_diff_eq!(
            dnc_solve(&c, tight, 1e-12).unwrap()[0],
            2.0 - s2,
            epsilon = 1e-12
        );
        let upper = RootBracket::new(1.0 + 1e-9, 10.0, 1).unwrap();
        assert_abs_diff_eq!(
            dnc_solve(&c, upper, 1e-12).unwrap()[0],
            2.0 + s2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn dnc_rejects_pole_inside_bracket() {
        let b = RootBracket::new(-1.0, 10.0, 2).unwrap();
        assert!(dnc_solve(&golden(), b, 1e-12).is_err());
    }

    #[test]
    fn linear_function_rounds() {
        // f(x) = 1 + 10 / (x - 10) is close to linear near its root x = 0.
        let c = SecularCoefficients::new(vec![10.0], vec![-10.0], 1.0).unwrap();
        let b = RootBracket::new(-1.0, 1.0, 1).unwrap();
        let r = dnc_solve(&c, b, 1e-12).unwrap();
        assert_abs_diff_eq!(r[0], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn pair_of_roots_in_one_interval() {
        // f = -0.5 + 0.05/x + 0.05/(1-x) is +inf at both ends and negative mid-interval.
        let c = SecularCoefficients::new(vec![0.0, 1.0], vec![-0.05, 0.05], -0.5).unwrap();
        let roots = solve_interval(
            &c,
            End::Pole(0),
            End::Pole(1),
            2,
            Settings {
                tol: 1e-13,
                points: 8,
                newton: false,
            },
        )
        .unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(c.eval(r.value()).unwrap().abs() < 1e-9);
        }
        assert!(roots[0].value() < roots[1].value());
    }

    #[test]
    fn near_pole_root_keeps_relative_accuracy() {
        // Tiny weight: root sits about 1e-20 above the pole at 0.
        let c = SecularCoefficients::new(vec![0.0, 1.0], vec![1e-20, 1.0], 1.0).unwrap();
        let roots = solve_interval(
            &c,
            End::Pole(0),
            End::Pole(1),
            1,
            Settings {
                tol: 1e-12,
                points: 8,
                newton: false,
            },
        )
        .unwrap();
        let r = roots[0];
        assert_eq!(r.origin, 0.0);
        // f(t) ~ 1 - 1e-20/t - 1/(t-1) ~ 2 - 1e-20/t  => t ~ 5e-21
        assert!(
            (r.offset - 5e-21).abs() < 1e-6 * 5e-21,
            "offset {}",
            r.offset
        );
    }

    #[test]
    fn certification_of_simple_cells() {
        // f = 1 - 1/(x - 0) - 1/(x - 1): increasing between the poles, one root.
        let c = SecularCoefficients::new(vec![0.0, 1.0], vec![1.0, 1.0], 1.0).unwrap();
        let f = Frame::new(&c, 0.0, true);
        let (a, b) = (lo_pt(0.0, -1), lo_pt(1.0, 1));
        assert_eq!(f.certify(&a, &b), Verdict::Single);
        // Right of the last pole f climbs from -inf towards 1 through a single root at 1 + sqrt(2) ~ 2.41.
        let (p, q) = (f.point(3.0), f.point(9.0));
        assert_eq!(f.certify(&p, &q), Verdict::Empty);
        let set = Settings {
            tol: 1e-12,
            points: 8,
            newton: false,
        };
        assert_eq!(
            certified_count(&c, End::Pole(0), End::Pole(1), 8, set),
            Some(1)
        );
        assert_eq!(
            certified_count(&c, End::Pole(1), End::Point(50.0), 8, set),
            Some(1)
        );
    }

    #[test]
    fn certified_count_sees_hidden_pair() {
        // Both ends are +inf and the dip between them reaches below zero.
        let c = SecularCoefficients::new(vec![0.0, 1.0], vec![-0.05, 0.05], -0.5).unwrap();
        let set = Settings {
            tol: 1e-13,
            points: 8,
            newton: false,
        };
        assert_eq!(
            certified_count(&c, End::Pole(0), End::Pole(1), 64, set),
            Some(2)
        );
        // Raising the constant lifts the dip clear of zero.
        let c = SecularCoefficients::new(vec![0.0, 1.0], vec![-0.05, 0.05], 0.5).unwrap();
        assert_eq!(
            certified_count(&c, End::Pole(0), End::Pole(1), 64, set),
            Some(0)
        );
    }

    #[test]
    fn determinant_form_matches_weights() {
        let (d, u) = crate::decomp::random_instance(12, 3, 1.0, 5).unwrap();
        let p = prepare(&d, &u).unwrap();
        let det = DetForm::new(&p);
        let c = &p.coeffs;
        for x in [-3.0, -0.2, 0.37, 2.5] {
            let w = Frame::new(c, 0.0, false).point(x);
            let (v, g) = det.eval(0.0, x);
            assert_abs_diff_eq!(v, w.v, epsilon = 1e-10 * w.m);
            assert_abs_diff_eq!(g, w.g, epsilon = 1e-8 * (1.0 + w.g.abs()));
        }
    }

    #[test]
    fn rank1_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = solve_rank1(&[1.0, 2.0], &[h, h], 1.0, 1e-14).unwrap();
        assert_abs_diff_eq!(r[0], 2.0 - h, epsilon = 1e-13);
        assert_abs_diff_eq!(r[1], 2.0 + h, epsilon = 1e-13);
        assert_eq!(
            solve_rank1(&[1.0, 2.0], &[h, h], 0.0, 1e-14).unwrap(),
            vec![1.0, 2.0]
        );
        let r = solve_rank1(&[1.0, 2.0], &[1.0, 0.0], 1.0, 1e-14).unwrap();
        assert_abs_diff_eq!(r[0], 2.0, epsilon = 1e-13);
        assert_eq!(r[1], 2.0);
    }

    #[test]
    fn rank1_downdate() {
        let r = solve_rank1(&[1.0, 2.0], &[1.0, 0.0], -1.0, 1e-14).unwrap();
        assert_abs_diff_eq!(r[0], 0.0, epsilon = 1e-13);
        assert_eq!(r[1], 2.0);
    }

    #[test]
    fn golden_pipeline() {
        let d = SpectralDecomposition::new(DMatrix::identity(2, 2), vec![0.0, 1.0]).unwrap();
        let k = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
        let u = LowRankUpdate::positive(k).unwrap();
        let l = update_eigenvalues(&d, &u, 1e-14).unwrap();
        assert_abs_diff_eq!(l[0], 2.0 - 2f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(l[1], 2.0 + 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn zero_update_keeps_eigenvalues() {
        let d = SpectralDecomposition::new(DMatrix::identity(3, 3), vec![-1.0, 0.5, 2.0]).unwrap();
        let u = LowRankUpdate::positive(DMatrix::zeros(3, 2)).unwrap();
        assert_eq!(
            update_eigenvalues(&d, &u, 1e-12).unwrap(),
            vec![-1.0, 0.5, 2.0]
        );
    }
}
