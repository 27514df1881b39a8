//! The `(b1, b2)` fiber of `B_n^2` over a fixed polynomial: a rectangular net
//! of preimages of critical values, the diagonal, and the curve
//! `f(b1) = f(b2)` with the diagonal factored out.
//!
//! Polynomials are kept exact (rational critical points, rational
//! coefficients); only root finding, flood fill and drawing use `f64`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact::{int, rat, Integer, Rational};
use crate::oracle::{enumerate_snakes, Snake};

/// Minimum separation of critical values, relative to their spread.
pub const EPS_SEP: f64 = 1e-6;
pub const DEFAULT_MARGIN: f64 = 0.5;
pub const DEFAULT_RESOLUTION: usize = 64;
const ROOT_TOL: f64 = 1e-12;
const MAX_TRIES: usize = 20_000;
/// A realization with this separation is accepted without further search.
const GOOD_SEP: f64 = 0.05;

#[derive(Debug, Error)]
pub enum FiberError {
    #[error("degree {0} is not supported here")]
    Degree(usize),
    #[error("critical points must be strictly increasing")]
    Unsorted,
    #[error("no realization found for snake {0}")]
    RealizationFailed(Snake),
    #[error("critical values too close (relative separation {0:.3e})")]
    Degenerate(f64),
    #[error("root finding did not converge near {0}")]
    RootFinding(f64),
    #[error("exact division by b1 - b2 left a remainder")]
    Division,
    #[error("region count did not stabilize: {0} then {1} at resolution {2}")]
    Unstable(u64, u64, usize),
    #[error("resolution must be at least 64, got {0}")]
    Resolution(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `f(x) = x^n + ...` with `f' = n * prod (x - c_i)` and `f(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPoly {
    crits: Vec<Rational>,
    /// `coeffs[k]` multiplies `x^k`.
    coeffs: Vec<Rational>,
}

impl MonicPoly {
    pub fn from_critical_points(crits: Vec<Rational>) -> Result<Self, FiberError> {
        if crits.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FiberError::Unsorted);
        }
        let n = crits.len() + 1;
        // f' as a coefficient list, then integrate
        let mut d = vec![rat(n as i64, 1)];
        for c in &crits {
            let mut next = vec![Rational::zero(); d.len() + 1];
            for (k, a) in d.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * c;
            }
            d = next;
        }
        let mut coeffs = vec![Rational::zero()];
        for (k, a) in d.iter().enumerate() {
            coeffs.push(a / Rational::from_integer(int(k as i64 + 1)));
        }
        Ok(MonicPoly { crits, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn critical_points(&self) -> &[Rational] {
        &self.crits
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * x + to_f64(a))
    }

    pub fn critical_values(&self) -> Vec<Rational> {
        self.crits.iter().map(|c| self.eval(c)).collect()
    }
}

fn to_f64(r: &Rational) -> f64 {
    crate::exact::to_f64(r)
}

/// Smallest gap between critical values over their spread (`1` when there
/// are fewer than two).
fn separation(values: &[Rational]) -> f64 {
    if values.len() < 2 {
        return 1.0;
    }
    let mut v: Vec<f64> = values.iter().map(to_f64).collect();
    v.sort_by(f64::total_cmp);
    let spread = v[v.len() - 1] - v[0];
    let gap = v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if spread > 0.0 { gap / spread } else { 0.0 }
}

pub fn classify_snake(poly: &MonicPoly) -> Result<Snake, FiberError> {
    let values = poly.critical_values();
    let sep = separation(&values);
    if sep < EPS_SEP {
        return Err(FiberError::Degenerate(sep));
    }
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].cmp(&values[b]));
    let mut ranks = vec![0; values.len()];
    for (r, i) in idx.into_iter().enumerate() {
        ranks[i] = r + 1;
    }
    Ok(Snake::new(poly.degree(), ranks).expect("critical values of a real polynomial alternate"))
}

#[derive(Debug, Clone)]
pub struct RealizedPolynomial {
    pub poly: MonicPoly,
    pub snake: Snake,
}

/// Random search over critical abscissas (gaps drawn from `1/16 .. 4`).
pub fn realize_snake(n: usize, snake: &Snake, seed: u64) -> Result<RealizedPolynomial, FiberError> {
    if n == 0 || snake.degree() != n {
        return Err(FiberError::Degree(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, MonicPoly)> = None;
    for _ in 0..MAX_TRIES {
        let mut x = Rational::zero();
        let mut crits = Vec::with_capacity(n - 1);
        for _ in 0..n - 1 {
            crits.push(x.clone());
            x += rat(rng.gen_range(1..=64), 16);
        }
        let poly = MonicPoly::from_critical_points(crits)?;
        let Ok(found) = classify_snake(&poly) else { continue };
        if found != *snake {
            continue;
        }
        let sep = separation(&poly.critical_values());
        if best.as_ref().is_none_or(|(s, _)| sep > *s) {
            best = Some((sep, poly));
        }
        if sep >= GOOD_SEP {
            break;
        }
    }
    match best {
        Some((_, poly)) => Ok(RealizedPolynomial { poly, snake: snake.clone() }),
        None => Err(FiberError::RealizationFailed(snake.clone())),
    }
}

/// Bivariate polynomial, `c[i][j]` multiplies `b1^i b2^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    pub c: Vec<Vec<Rational>>,
}

impl BiPoly {
    fn zero(d1: usize, d2: usize) -> Self {
        BiPoly { c: vec![vec![Rational::zero(); d2 + 1]; d1 + 1] }
    }

    /// `f(b1) - f(b2)`.
    pub fn difference(f: &MonicPoly) -> Self {
        let n = f.degree();
        let mut p = BiPoly::zero(n, n);
        for (k, a) in f.coeffs().iter().enumerate() {
            p.c[k][0] += a;
            p.c[0][k] -= a;
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().flatten().all(Zero::is_zero)
    }

    pub fn total_degree(&self) -> Option<usize> {
        let mut d = None;
        for (i, row) in self.c.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    d = d.max(Some(i + j));
                }
            }
        }
        d
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let (d1, d2) = (self.c.len() + o.c.len() - 2, self.c[0].len() + o.c[0].len() - 2);
        let mut p = BiPoly::zero(d1, d2);
        for (i, r) in self.c.iter().enumerate() {
            for (j, a) in r.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, s) in o.c.iter().enumerate() {
                    for (m, b) in s.iter().enumerate() {
                        p.c[i + k][j + m] += a * b;
                    }
                }
            }
        }
        p
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        let d1 = self.c.len().max(o.c.len()) - 1;
        let d2 = self.c[0].len().max(o.c[0].len()) - 1;
        let mut p = BiPoly::zero(d1, d2);
        for (i, r) in self.c.iter().enumerate() {
            for (j, a) in r.iter().enumerate() {
                p.c[i][j] += a;
            }
        }
        for (i, r) in o.c.iter().enumerate() {
            for (j, a) in r.iter().enumerate() {
                p.c[i][j] -= a;
            }
        }
        p
    }

    /// `b1 - b2`.
    pub fn diagonal() -> BiPoly {
        let mut p = BiPoly::zero(1, 1);
        p.c[1][0] = Rational::one();
        p.c[0][1] = -Rational::one();
        p
    }

    /// Synthetic division by `b1 - b2`, read as a polynomial in `b1` over
    /// `Q[b2]`; fails unless the remainder vanishes.
    pub fn div_diagonal(&self) -> Result<BiPoly, FiberError> {
        let d1 = self.c.len() - 1;
        let w = self.c[0].len() + d1;
        if d1 == 0 {
            return if self.is_zero() { Ok(BiPoly::zero(0, 0)) } else { Err(FiberError::Division) };
        }
        let row = |i: usize| {
            let mut r = self.c[i].clone();
            r.resize(w, Rational::zero());
            r
        };
        let shift = |r: &[Rational]| {
            let mut s = vec![Rational::zero(); w];
            s[1..].clone_from_slice(&r[..w - 1]);
            s
        };
        let mut q = vec![Vec::new(); d1];
        q[d1 - 1] = row(d1);
        for i in (1..d1).rev() {
            let next: Vec<Rational> = row(i).iter().zip(shift(&q[i])).map(|(a, b)| a + b).collect();
            q[i - 1] = next;
        }
        let rem: Vec<Rational> = row(0).iter().zip(shift(&q[0])).map(|(a, b)| a + b).collect();
        if rem.iter().any(|a| !a.is_zero()) || q[0].last().is_some_and(|a| !a.is_zero()) {
            return Err(FiberError::Division);
        }
        let mut out = BiPoly { c: q };
        for r in &mut out.c {
            r.truncate(w - 1);
        }
        Ok(out)
    }

    pub fn eval_f64(&self, b1: f64, b2: f64) -> f64 {
        self.c
            .iter()
            .rev()
            .fold(0.0, |acc, row| acc * b1 + row.iter().rev().fold(0.0, |a, c| a * b2 + to_f64(c)))
    }
}

/// Fast evaluator for the curve.
#[derive(Debug, Clone)]
struct Curve {
    c: Vec<Vec<f64>>,
}

impl Curve {
    fn new(g: &BiPoly) -> Self {
        Curve { c: g.c.iter().map(|r| r.iter().map(to_f64).collect()).collect() }
    }

    fn eval(&self, b1: f64, b2: f64) -> f64 {
        self.c
            .iter()
            .rev()
            .fold(0.0, |acc, row| acc * b1 + row.iter().rev().fold(0.0, |a, c| a * b2 + c))
    }
}

#[derive(Debug, Clone)]
pub struct FiberArrangement {
    pub poly: MonicPoly,
    /// Sorted preimages of all critical values, shared by both axes.
    pub net: Vec<f64>,
    pub has_diagonal: bool,
    /// `f(b1) - f(b2) = (b1 - b2) * g`.
    pub curve: BiPoly,
    /// The square `[lo, hi]^2`.
    pub lo: f64,
    pub hi: f64,
    eval: Curve,
}

fn bisect(h: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Result<f64, FiberError> {
    let mut ha = h(a);
    for _ in 0..400 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= ROOT_TOL * m.abs().max(1.0) {
            return Ok(m);
        }
        let hm = h(m);
        if hm == 0.0 {
            return Ok(m);
        }
        if (hm < 0.0) == (ha < 0.0) {
            a = m;
            ha = hm;
        } else {
            b = m;
        }
    }
    Err(FiberError::RootFinding(0.5 * (a + b)))
}

/// All real solutions of `f(b) = v`, one bisection per monotone branch.
fn preimages(f: &MonicPoly, v: &Rational) -> Result<Vec<f64>, FiberError> {
    let n = f.degree();
    let crits = f.critical_points();
    let vf = to_f64(v);
    let h = |x: f64| f.eval_f64(x) - vf;
    let mut out = Vec::new();
    if crits.is_empty() {
        // f is monotone
        let (mut a, mut b) = (-1.0f64, 1.0f64);
        while h(a) > 0.0 {
            a *= 2.0;
        }
        while h(b) < 0.0 {
            b *= 2.0;
        }
        out.push(bisect(h, a, b)?);
        return Ok(out);
    }
    let hc: Vec<Rational> = crits.iter().map(|c| f.eval(c) - v).collect();
    for (c, hv) in crits.iter().zip(&hc) {
        if hv.is_zero() {
            out.push(to_f64(c));
        }
    }
    let sign = |r: &Rational| if r.is_positive() { 1.0 } else { -1.0 };
    // unbounded branches: sign of f at -inf is (-1)^n, at +inf positive
    let ends = [
        (to_f64(&crits[0]), &hc[0], if n % 2 == 0 { 1.0 } else { -1.0 }, -1.0),
        (to_f64(&crits[crits.len() - 1]), &hc[hc.len() - 1], 1.0, 1.0),
    ];
    for (x0, h0, s_inf, dir) in ends {
        if h0.is_zero() || sign(h0) == s_inf {
            continue;
        }
        let mut step = 1.0;
        let mut far = x0 + dir * step;
        while h(far) * s_inf <= 0.0 {
            step *= 2.0;
            far = x0 + dir * step;
            if !far.is_finite() {
                return Err(FiberError::RootFinding(x0));
            }
        }
        out.push(if dir < 0.0 { bisect(h, far, x0)? } else { bisect(h, x0, far)? });
    }
    for i in 0..crits.len() - 1 {
        let (ha, hb) = (&hc[i], &hc[i + 1]);
        if !ha.is_zero() && !hb.is_zero() && sign(ha) != sign(hb) {
            out.push(bisect(h, to_f64(&crits[i]), to_f64(&crits[i + 1]))?);
        }
    }
    Ok(out)
}

pub fn build_arrangement(poly: &MonicPoly, margin: f64) -> Result<FiberArrangement, FiberError> {
    let mut net = Vec::new();
    for v in poly.critical_values() {
        net.extend(preimages(poly, &v)?);
    }
    net.sort_by(f64::total_cmp);
    net.dedup();
    let curve = BiPoly::difference(poly).div_diagonal()?;
    let (lo, hi) = match (net.first(), net.last()) {
        (Some(&a), Some(&b)) if b > a => (a - margin * (b - a), b + margin * (b - a)),
        (Some(&a), _) => (a - 1.0, a + 1.0),
        _ => (-1.0, 1.0),
    };
    let eval = Curve::new(&curve);
    Ok(FiberArrangement { poly: poly.clone(), net, has_diagonal: true, curve, lo, hi, eval })
}

/// Cell centers along one axis and the net gap each lies in. Cell edges
/// include every net position, so no center sits on a net line.
fn axis_cells(arr: &FiberArrangement, resolution: usize) -> Vec<(f64, usize)> {
    let mut breaks = vec![arr.lo];
    breaks.extend(arr.net.iter().copied());
    breaks.push(arr.hi);
    let width = arr.hi - arr.lo;
    let mut out = Vec::new();
    for (gap, w) in breaks.windows(2).enumerate() {
        let k = ((resolution as f64 * (w[1] - w[0]) / width).ceil() as usize).max(2);
        for s in 0..k {
            out.push((w[0] + (w[1] - w[0]) * (s as f64 + 0.5) / k as f64, gap));
        }
    }
    out
}

fn sgn(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// One flood fill pass. Neighbouring cells join when they lie in the same
/// net rectangle and agree in the signs of `b1 - b2` and `g`; cells where
/// either vanishes are treated as walls.
pub fn count_regions_at(arr: &FiberArrangement, resolution: usize) -> u64 {
    let cells = axis_cells(arr, resolution);
    let m = cells.len();
    let mut key = vec![0i8; m * m];
    for (i, &(x, _)) in cells.iter().enumerate() {
        for (j, &(y, _)) in cells.iter().enumerate() {
            let d = sgn(x - y);
            let g = sgn(arr.eval.eval(x, y));
            key[i * m + j] = if d == 0 || g == 0 { 0 } else { d * 2 + g };
        }
    }
    let same = |a: usize, b: usize| {
        key[a] == key[b]
            && cells[a / m].1 == cells[b / m].1
            && cells[a % m].1 == cells[b % m].1
    };
    let mut seen = vec![false; m * m];
    let mut stack = Vec::new();
    let mut regions = 0;
    for start in 0..m * m {
        if seen[start] || key[start] == 0 {
            continue;
        }
        regions += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(c) = stack.pop() {
            let (i, j) = (c / m, c % m);
            let mut nb = [usize::MAX; 4];
            if i > 0 { nb[0] = c - m }
            if i + 1 < m { nb[1] = c + m }
            if j > 0 { nb[2] = c - 1 }
            if j + 1 < m { nb[3] = c + 1 }
            for d in nb {
                if d != usize::MAX && !seen[d] && same(c, d) {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
    }
    regions
}

#[derive(Debug, Clone, Copy)]
pub struct RegionOptions {
    pub resolution: usize,
    /// Consecutive equal counts required after the first, one per doubling.
    pub agreements: usize,
    pub max_doublings: usize,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions { resolution: DEFAULT_RESOLUTION, agreements: 2, max_doublings: 6 }
    }
}

/// Region count with the resolution doubled until it stops changing.
pub fn count_regions(arr: &FiberArrangement, opts: RegionOptions) -> Result<u64, FiberError> {
    if opts.resolution < 64 {
        return Err(FiberError::Resolution(opts.resolution));
    }
    let mut res = opts.resolution;
    let mut last = count_regions_at(arr, res);
    let mut streak = 0;
    for _ in 0..opts.max_doublings {
        res *= 2;
        let now = count_regions_at(arr, res);
        streak = if now == last { streak + 1 } else { 0 };
        if streak >= opts.agreements {
            return Ok(now);
        }
        if streak == 0 {
            last = now;
        }
    }
    Err(FiberError::Unstable(last, count_regions_at(arr, res / 2), res))
}

/// One traced piece of `g = 0`, in box coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

/// Marching squares on a `res x res` vertex grid, segments chained into
/// polylines. Saddles are split by the value at the cell center.
pub fn trace_curve(arr: &FiberArrangement, res: usize) -> Vec<Polyline> {
    let step = (arr.hi - arr.lo) / res as f64;
    let at = |i: usize| arr.lo + step * i as f64;
    let val: Vec<Vec<f64>> =
        (0..=res).map(|i| (0..=res).map(|j| arr.eval.eval(at(i), at(j))).collect()).collect();
    // edges: (i, j, 0) joins (i,j)-(i+1,j); (i, j, 1) joins (i,j)-(i,j+1)
    type Edge = (usize, usize, u8);
    let point = |e: Edge| {
        let (i, j, dir) = e;
        let (i2, j2) = if dir == 0 { (i + 1, j) } else { (i, j + 1) };
        let (a, b) = (val[i][j], val[i2][j2]);
        let t = a / (a - b);
        (at(i) + t * (at(i2) - at(i)), at(j) + t * (at(j2) - at(j)))
    };
    let mut adj: BTreeMap<Edge, Vec<Edge>> = BTreeMap::new();
    let mut link = |a: Edge, b: Edge| {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    };
    for i in 0..res {
        for j in 0..res {
            let pos = |a: usize, b: usize| val[a][b] >= 0.0;
            let corners = [pos(i, j), pos(i + 1, j), pos(i + 1, j + 1), pos(i, j + 1)];
            // sides in cyclic order: bottom, right, top, left
            let sides: [Edge; 4] = [(i, j, 0), (i + 1, j, 1), (i, j + 1, 0), (i, j, 1)];
            let cut: Vec<usize> = (0..4).filter(|&s| corners[s] != corners[(s + 1) % 4]).collect();
            match cut.len() {
                2 => link(sides[cut[0]], sides[cut[1]]),
                4 => {
                    let center = arr.eval.eval(at(i) + step / 2.0, at(j) + step / 2.0) >= 0.0;
                    if center == corners[0] {
                        link(sides[0], sides[1]);
                        link(sides[2], sides[3]);
                    } else {
                        link(sides[3], sides[0]);
                        link(sides[1], sides[2]);
                    }
                }
                _ => {}
            }
        }
    }
    let mut used: BTreeMap<Edge, bool> = adj.keys().map(|&k| (k, false)).collect();
    let walk = |start: Edge, used: &mut BTreeMap<Edge, bool>| {
        let mut path = vec![start];
        used.insert(start, true);
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().find(|e| !used[*e]).copied();
            match next {
                Some(e) => {
                    used.insert(e, true);
                    path.push(e);
                    cur = e;
                }
                None => break,
            }
        }
        let closed = path.len() > 2 && adj[&cur].contains(&start);
        Polyline { points: path.into_iter().map(point).collect(), closed }
    };
    let mut out = Vec::new();
    let ends: Vec<Edge> = adj.iter().filter(|(_, v)| v.len() == 1).map(|(k, _)| *k).collect();
    for e in ends {
        if !used[&e] {
            out.push(walk(e, &mut used));
        }
    }
    let rest: Vec<Edge> = adj.keys().copied().collect();
    for e in rest {
        if !used[&e] {
            out.push(walk(e, &mut used));
        }
    }
    out
}

const VIEW: f64 = 800.0;
const PAD: f64 = 40.0;

/// SVG 1.1 picture of the arrangement; identical inputs give identical bytes.
pub fn to_svg(arr: &FiberArrangement, resolution: usize) -> String {
    let span = arr.hi - arr.lo;
    let px = |b1: f64| PAD + (b1 - arr.lo) / span * (VIEW - 2.0 * PAD);
    let py = |b2: f64| VIEW - PAD - (b2 - arr.lo) / span * (VIEW - 2.0 * PAD);
    let (x0, x1, y0, y1) = (px(arr.lo), px(arr.hi), py(arr.lo), py(arr.hi));
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="800" height="800" viewBox="0 0 800 800">"#
    );
    let _ = writeln!(s, r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000"/>"##, x1 - x0, y0 - y1);
    for &p in &arr.net {
        let _ = writeln!(s, r##"<line class="net" x1="{:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y1:.2}" stroke="#888"/>"##, px(p), px(p));
        let _ = writeln!(s, r##"<line class="net" x1="{x0:.2}" y1="{:.2}" x2="{x1:.2}" y2="{:.2}" stroke="#888"/>"##, py(p), py(p));
    }
    if arr.has_diagonal {
        let _ = writeln!(
            s,
            r##"<line class="diagonal" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="#444" stroke-dasharray="8 6"/>"##
        );
    }
    for line in trace_curve(arr, resolution) {
        let mut d = String::new();
        for (k, &(a, b)) in line.points.iter().enumerate() {
            let _ = write!(d, "{}{:.2} {:.2} ", if k == 0 { "M" } else { "L" }, px(a), py(b));
        }
        d.push(if line.closed { 'Z' } else { ' ' });
        let _ = writeln!(s, r##"<path class="curve" d="{}" fill="none" stroke="#c00" stroke-width="2"/>"##, d.trim_end());
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="18">b1</text>"#, x1 - 20.0, y0 + 28.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="18">b2</text>"#, x0 - 32.0, y1 + 6.0);
    s.push_str("</svg>\n");
    s
}

pub fn render_svg(arr: &FiberArrangement, resolution: usize, path: &std::path::Path) -> Result<(), FiberError> {
    std::fs::write(path, to_svg(arr, resolution))?;
    Ok(())
}

/// Sum over all snakes of the fiber region counts.
pub fn knl2_geometric(n: usize, seed: u64) -> Result<Integer, FiberError> {
    knl2_geometric_with(n, seed, RegionOptions::default())
}

pub fn knl2_geometric_with(n: usize, seed: u64, opts: RegionOptions) -> Result<Integer, FiberError> {
    if !(2..=5).contains(&n) {
        return Err(FiberError::Degree(n));
    }
    let mut total = 0u64;
    for snake in enumerate_snakes(n) {
        let r = realize_snake(n, &snake, seed)?;
        let arr = build_arrangement(&r.poly, DEFAULT_MARGIN)?;
        total += count_regions(&arr, opts)?;
    }
    Ok(Integer::from(total))
}
