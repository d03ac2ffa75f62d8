//! Fiber continuation, labeled fibers, loop monodromy, side chains and
//! side constellations.
//!
//! A loop is lifted by tracking the fiber forward; if the point labeled `a`
//! ends at the point labeled `b`, the monodromy permutation sends `b` to `a`.
//! With this direction a clockwise loop around every critical value gives the
//! long cycle, and the monodromy of a concatenation `g1.g2` is the product
//! `perm(g1) * perm(g2)`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hurwitz::Constellation;
use crate::noncrossing::{partition_of_perm, NCChain, NoncrossingPartition};
use crate::poly::{bounding_rectangle, critical_data, roots_of_coeffs, ComplexPoly, CriticalData, Rectangle, RootConfig, SideRegularity, C64};
use crate::perm::Permutation;

pub use crate::lifting::lift_multiset_path;

const EPS: f64 = f64::EPSILON;

/// Closed or open polyline of regular values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    #[serde(serialize_with = "crate::poly::ser_points", deserialize_with = "crate::poly::de_points")]
    pub vertices: Vec<C64>,
    pub closed: bool,
}

impl PathSpec {
    pub fn open(vertices: Vec<C64>) -> Result<Self> {
        Self::build(vertices, false)
    }

    /// Closed loop; the first vertex is appended at the end if missing.
    pub fn closed(mut vertices: Vec<C64>) -> Result<Self> {
        if vertices.first() != vertices.last() {
            let first = vertices[0];
            vertices.push(first);
        }
        Self::build(vertices, true)
    }

    fn build(mut vertices: Vec<C64>, closed: bool) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("empty path".into()));
        }
        vertices.dedup();
        if closed && vertices.len() > 1 && vertices.first() != vertices.last() {
            return Err(Error::InvalidInput("closed path must end where it starts".into()));
        }
        Ok(PathSpec { vertices, closed })
    }

    pub fn reversed(&self) -> PathSpec {
        let mut v = self.vertices.clone();
        v.reverse();
        PathSpec { vertices: v, closed: self.closed }
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn then(&self, other: &PathSpec) -> Result<PathSpec> {
        if self.vertices.last() != other.vertices.first() {
            return Err(Error::InvalidInput("paths do not join".into()));
        }
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices[1..]);
        Ok(PathSpec { closed: v.first() == v.last(), vertices: v })
    }
}

/// Fiber over a regular value with points indexed by label `1..=d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledFiber {
    pub poly: ComplexPoly,
    #[serde(serialize_with = "ser_c", deserialize_with = "de_c")]
    pub basepoint: C64,
    #[serde(serialize_with = "crate::poly::ser_points", deserialize_with = "crate::poly::de_points")]
    pub points: Vec<C64>,
}

fn ser_c<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn de_c<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<C64, D::Error> {
    let [re, im] = <[f64; 2]>::deserialize(d)?;
    Ok(C64::new(re, im))
}

impl LabeledFiber {
    /// Point carrying label `k` (1-based).
    pub fn point(&self, k: usize) -> C64 {
        self.points[k - 1]
    }
}

/// Tracking parameters.
#[derive(Clone, Copy, Debug)]
pub struct TrackConfig {
    /// Minimal allowed distance from a critical value, relative to `1 + max|cvl|`.
    pub clearance: f64,
    /// Largest step as a fraction of the segment.
    pub max_step: f64,
    /// Step multiplier floor before giving up.
    pub min_step: f64,
}

impl Default for TrackConfig {
    fn default() -> Self {
        TrackConfig { clearance: 1e-9, max_step: 1.0 / 64.0, min_step: 1.0 / (1u64 << 20) as f64 }
    }
}

/// Predictor-corrector tracker for the fibers of one polynomial.
pub struct Tracker {
    poly: ComplexPoly,
    dpoly: Vec<C64>,
    cvl: Vec<C64>,
    scale: f64,
    cfg: TrackConfig,
}

impl Tracker {
    pub fn new(p: &ComplexPoly) -> Result<Self> {
        Self::with_config(p, TrackConfig::default())
    }

    pub fn with_config(p: &ComplexPoly, cfg: TrackConfig) -> Result<Self> {
        let cd = critical_data(p, 0.0)?;
        Ok(Self::from_critical(p, &cd, cfg))
    }

    pub fn from_critical(p: &ComplexPoly, cd: &CriticalData, cfg: TrackConfig) -> Self {
        let scale = 1.0 + cd.cvl.max_abs();
        Tracker { poly: p.clone(), dpoly: p.derivative(), cvl: cd.cvl.points.clone(), scale, cfg }
    }

    pub fn poly(&self) -> &ComplexPoly {
        &self.poly
    }

    pub fn critical_values(&self) -> &[C64] {
        &self.cvl
    }

    fn clearance(&self, w: C64) -> f64 {
        self.cvl.iter().map(|v| (w - v).norm()).fold(f64::INFINITY, f64::min)
    }

    fn threshold(&self) -> f64 {
        self.cfg.clearance * self.scale
    }

    /// All `d` solutions of `p(z) = w`.
    pub fn fiber(&self, w: C64) -> Result<Vec<C64>> {
        let dist = self.clearance(w);
        if dist <= self.threshold() {
            return Err(Error::ClearanceViolation { distance: dist, threshold: self.threshold() });
        }
        let mut c = self.poly.coeffs().to_vec();
        let last = c.len() - 1;
        c[last] -= w;
        let r = roots_of_coeffs(&c, 0.0, RootConfig::default())?;
        if r.roots.mult.iter().any(|&m| m != 1) {
            return Err(Error::Invariant("fiber over a regular value has a repeated point".into()));
        }
        let pts: Vec<C64> = r.roots.points.iter().map(|&z| self.newton(z, w).unwrap_or(z)).collect();
        Ok(pts)
    }

    fn newton(&self, z0: C64, w: C64) -> Option<C64> {
        let mut z = z0;
        for _ in 0..12 {
            let f = self.poly.eval(z) - w;
            let df = crate::poly::horner(&self.dpoly, z);
            if df.norm() == 0.0 {
                return None;
            }
            let step = f / df;
            z -= step;
            if !(z.re.is_finite() && z.im.is_finite()) {
                return None;
            }
            if step.norm() <= 8.0 * EPS * (1.0 + z.norm()) {
                return Some(z);
            }
        }
        // accept if the residual is at rounding level
        let f = self.poly.eval(z) - w;
        let scale = self.poly.coeffs().iter().fold(0.0, |acc, c| acc * z.norm() + c.norm());
        if f.norm() <= 1e3 * EPS * (scale + w.norm()) {
            Some(z)
        } else {
            None
        }
    }

    /// Tracks every point of `pts` (a fiber over `w0`) along the segment to `w1`.
    pub fn track_segment(&self, pts: &[C64], w0: C64, w1: C64) -> Result<Vec<C64>> {
        let len = (w1 - w0).norm();
        if len == 0.0 {
            return Ok(pts.to_vec());
        }
        let dw = w1 - w0;
        let mut z = pts.to_vec();
        let mut t = 0.0f64;
        let mut mult = 1.0f64;
        while t < 1.0 {
            let w = w0 + dw * t;
            let r = self.clearance(w);
            if r <= self.threshold() {
                return Err(Error::ClearanceViolation { distance: r, threshold: self.threshold() });
            }
            let h = (self.cfg.max_step.min(0.25 * r / len) * mult).min(1.0 - t);
            let t1 = if 1.0 - t - h <= 1e-15 { 1.0 } else { t + h };
            let w1t = w0 + dw * t1;
            match self.step(&z, w, w1t) {
                Some(next) => {
                    z = next;
                    t = t1;
                    mult = (mult * 2.0).min(1.0);
                }
                None => {
                    mult *= 0.5;
                    if mult < self.cfg.min_step {
                        return Err(Error::TrackingFailure(format!("step size underflow at t={t:.6} on segment {w0} -> {w1}")));
                    }
                }
            }
        }
        Ok(z)
    }

    fn step(&self, z: &[C64], w0: C64, w1: C64) -> Option<Vec<C64>> {
        let n = z.len();
        let mut out = Vec::with_capacity(n);
        for &zi in z {
            let df = crate::poly::horner(&self.dpoly, zi);
            let pred = zi + (w1 - w0) / df;
            out.push(self.newton(pred, w1)?);
        }
        // each point must stay much closer to its predecessor than to any other point
        for i in 0..n {
            let sep = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).norm()).fold(f64::INFINITY, f64::min);
            if (out[i] - z[i]).norm() >= 0.3 * sep {
                return None;
            }
        }
        Some(out)
    }

    /// Tracks along a polyline.
    pub fn track(&self, pts: &[C64], path: &PathSpec) -> Result<Vec<C64>> {
        let mut z = pts.to_vec();
        for w in path.vertices.windows(2) {
            z = self.track_segment(&z, w[0], w[1])?;
        }
        Ok(z)
    }
}

/// `d` solutions of `p(z) = w`.
pub fn fiber(p: &ComplexPoly, w: C64) -> Result<Vec<C64>> {
    Tracker::new(p)?.fiber(w)
}

/// Index of the point of `targets` matching each point of `pts`, as a bijection.
fn match_points(pts: &[C64], targets: &[C64]) -> Result<Vec<usize>> {
    let n = targets.len();
    let mut out = Vec::with_capacity(pts.len());
    let mut used = vec![false; n];
    for &z in pts {
        let mut best = (usize::MAX, f64::INFINITY, f64::INFINITY);
        for (j, &t) in targets.iter().enumerate() {
            let dist = (z - t).norm();
            if dist < best.1 {
                best = (j, dist, best.1);
            } else if dist < best.2 {
                best.2 = dist;
            }
        }
        let (j, d0, d1) = best;
        if j == usize::MAX || used[j] || d0 > 1e-3 * d1.max(1e-300) + 1e-9 * (1.0 + z.norm()) {
            return Err(Error::TrackingFailure("tracked endpoints do not match the fiber".into()));
        }
        used[j] = true;
        out.push(j);
    }
    Ok(out)
}

/// Transports a labeled fiber along `path`.
pub fn continue_fiber(p: &ComplexPoly, start: &LabeledFiber, path: &PathSpec) -> Result<LabeledFiber> {
    let tracker = Tracker::new(p)?;
    continue_fiber_with(&tracker, start, path)
}

pub fn continue_fiber_with(tracker: &Tracker, start: &LabeledFiber, path: &PathSpec) -> Result<LabeledFiber> {
    if path.vertices[0] != start.basepoint {
        return Err(Error::InvalidInput("path must start at the fiber basepoint".into()));
    }
    let end = *path.vertices.last().expect("nonempty");
    let pts = tracker.track(&start.points, path)?;
    let exact = tracker.fiber(end)?;
    let idx = match_points(&pts, &exact)?;
    Ok(LabeledFiber { poly: start.poly.clone(), basepoint: end, points: idx.iter().map(|&j| exact[j]).collect() })
}

/// Radius `rho` with `R = rho^d` large enough to read labels from arguments.
fn label_radius(p: &ComplexPoly) -> f64 {
    let d = p.degree();
    let c = p.coeffs();
    let bound = (1..=d).map(|k| c[k].norm().powf(1.0 / k as f64)).fold(0.0, f64::max);
    50.0 * (1.0 + 2.0 * bound)
}

/// Labels the fiber over `basepoint` by continuation to a large positive real value.
pub fn standard_labels(p: &ComplexPoly, basepoint: C64) -> Result<LabeledFiber> {
    let tracker = Tracker::new(p)?;
    standard_labels_with(&tracker, basepoint, 1.0)
}

/// As [`standard_labels`], with the far endpoint `R` scaled by `r_factor`.
pub fn standard_labels_with(tracker: &Tracker, basepoint: C64, r_factor: f64) -> Result<LabeledFiber> {
    let p = tracker.poly();
    let d = p.degree();
    let cvl = tracker.critical_values();
    let scale = 1.0 + cvl.iter().map(|z| z.norm()).fold(0.0, f64::max) + basepoint.norm();
    let pad = 1.0 + 0.1 * scale;
    let max_re = cvl.iter().map(|z| z.re).fold(basepoint.re, f64::max);
    let min_im = cvl.iter().map(|z| z.im).fold(basepoint.im, f64::min);
    let x = max_re + pad;
    let rho = label_radius(p);
    let big_r = (rho.powi(d as i32) * r_factor).max(x + pad);
    let safe = 1e-6 * scale;
    let direct = PathSpec::open(vec![basepoint, C64::new(x, basepoint.im), C64::new(x, 0.0), C64::new(big_r, 0.0)])?;
    let path = if segment_clearance(basepoint, C64::new(x, basepoint.im), cvl) > safe {
        direct
    } else {
        // bend below every critical value
        let y = min_im - pad;
        let bent = PathSpec::open(vec![basepoint, C64::new(basepoint.re, y), C64::new(x, y), C64::new(x, 0.0), C64::new(big_r, 0.0)])?;
        if segment_clearance(basepoint, C64::new(basepoint.re, y), cvl) <= safe {
            return Err(Error::ClearanceViolation { distance: 0.0, threshold: safe });
        }
        bent
    };
    let start = tracker.fiber(basepoint)?;
    let end = tracker.track(&start, &path)?;
    let shift = p.coeffs()[1] / d as f64;
    let mut points = vec![C64::new(f64::NAN, 0.0); d];
    for (i, z) in end.iter().enumerate() {
        let arg = (z + shift).arg();
        let k = ((arg * d as f64 / std::f64::consts::TAU).round() as i64).rem_euclid(d as i64) as usize;
        let label = if k == 0 { d } else { k };
        let expected = std::f64::consts::TAU * (label % d) as f64 / d as f64;
        let dev = ((arg - expected + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI).abs();
        if dev > 0.25 * std::f64::consts::TAU / d as f64 || !points[label - 1].re.is_nan() {
            return Err(Error::TrackingFailure("asymptotic labels are ambiguous".into()));
        }
        points[label - 1] = start[i];
    }
    Ok(LabeledFiber { poly: p.clone(), basepoint, points })
}

fn segment_clearance(a: C64, b: C64, pts: &[C64]) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    pts.iter()
        .map(|&q| {
            let t = if l2 == 0.0 { 0.0 } else { ((q - a) * ab.conj()).re / l2 };
            (q - (a + ab * t.clamp(0.0, 1.0))).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Monodromy permutation of a closed loop through the fiber basepoint.
pub fn loop_monodromy(p: &ComplexPoly, fiber: &LabeledFiber, lp: &PathSpec) -> Result<Permutation> {
    let tracker = Tracker::new(p)?;
    loop_monodromy_with(&tracker, fiber, lp)
}

pub fn loop_monodromy_with(tracker: &Tracker, fiber: &LabeledFiber, lp: &PathSpec) -> Result<Permutation> {
    if lp.vertices.first() != Some(&fiber.basepoint) || lp.vertices.last() != Some(&fiber.basepoint) {
        return Err(Error::InvalidInput("loop must start and end at the basepoint".into()));
    }
    let end = tracker.track(&fiber.points, lp)?;
    let forward = match_points(&end, &fiber.points)?;
    forward_to_perm(&forward)
}

/// `forward[a] = b` (0-based) becomes the permutation `b+1 -> a+1`.
fn forward_to_perm(forward: &[usize]) -> Result<Permutation> {
    let mut img = vec![0; forward.len()];
    for (a, &b) in forward.iter().enumerate() {
        img[b] = a + 1;
    }
    Permutation::from_one_line(&img)
}

/// Fibers on a rectangular grid with cached transports along grid edges.
struct Grid<'a> {
    tracker: &'a Tracker,
    xs: Vec<f64>,
    ys: Vec<f64>,
    fibers: RefCell<HashMap<(usize, usize), Vec<C64>>>,
    edges: RefCell<HashMap<((usize, usize), (usize, usize)), Vec<usize>>>,
}

impl<'a> Grid<'a> {
    fn new(tracker: &'a Tracker, xs: Vec<f64>, ys: Vec<f64>, base: Vec<C64>) -> Self {
        let mut fibers = HashMap::new();
        fibers.insert((0, 0), base);
        Grid { tracker, xs, ys, fibers: RefCell::new(fibers), edges: RefCell::new(HashMap::new()) }
    }

    fn value(&self, v: (usize, usize)) -> C64 {
        C64::new(self.xs[v.0], self.ys[v.1])
    }

    fn fiber(&self, v: (usize, usize)) -> Result<Vec<C64>> {
        if let Some(f) = self.fibers.borrow().get(&v) {
            return Ok(f.clone());
        }
        let f = self.tracker.fiber(self.value(v))?;
        self.fibers.borrow_mut().insert(v, f.clone());
        Ok(f)
    }

    /// Index map along a unit grid edge.
    fn edge(&self, a: (usize, usize), b: (usize, usize)) -> Result<Vec<usize>> {
        if let Some(m) = self.edges.borrow().get(&(a, b)) {
            return Ok(m.clone());
        }
        let fa = self.fiber(a)?;
        let fb = self.fiber(b)?;
        let moved = self.tracker.track_segment(&fa, self.value(a), self.value(b))?;
        let m = match_points(&moved, &fb)?;
        let mut inv = vec![0; m.len()];
        for (i, &j) in m.iter().enumerate() {
            inv[j] = i;
        }
        let mut edges = self.edges.borrow_mut();
        edges.insert((a, b), m.clone());
        edges.insert((b, a), inv);
        Ok(m)
    }

    /// Monodromy of a closed grid polyline starting at vertex (0,0).
    fn loop_perm(&self, corners: &[(usize, usize)]) -> Result<Permutation> {
        let d = self.tracker.poly().degree();
        let mut map: Vec<usize> = (0..d).collect();
        for w in corners.windows(2) {
            let (mut a, b) = (w[0], w[1]);
            while a != b {
                let next = if a.0 != b.0 {
                    (if b.0 > a.0 { a.0 + 1 } else { a.0 - 1 }, a.1)
                } else {
                    (a.0, if b.1 > a.1 { a.1 + 1 } else { a.1 - 1 })
                };
                let e = self.edge(a, next)?;
                for x in map.iter_mut() {
                    *x = e[*x];
                }
                a = next;
            }
        }
        forward_to_perm(&map)
    }
}

/// Subdivision points of `[lo, hi]` by the distinct interior values, clustered at `tol`.
fn interior_coordinates(vals: &[f64], lo: f64, hi: f64, tol: f64) -> Vec<f64> {
    let mut v: Vec<f64> = vals.iter().copied().filter(|&x| x > lo + tol && x < hi - tol).collect();
    v.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    let mut group: Vec<f64> = Vec::new();
    for x in v {
        if let Some(&last) = group.last() {
            if x - last > tol {
                out.push(group.iter().sum::<f64>() / group.len() as f64);
                group.clear();
            }
        }
        group.push(x);
    }
    if !group.is_empty() {
        out.push(group.iter().sum::<f64>() / group.len() as f64);
    }
    out
}

fn barycentric(vertices: &[f64]) -> Vec<f64> {
    let total = vertices[vertices.len() - 1] - vertices[0];
    let mut w: Vec<f64> = vertices.windows(2).map(|p| (p[1] - p[0]) / total).collect();
    let s: f64 = w.iter().sum();
    for x in &mut w {
        *x /= s;
    }
    w
}

/// Side chains of a polynomial with respect to a working rectangle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideChains {
    pub left: NCChain,
    /// Decreasing.
    pub right: Vec<NoncrossingPartition>,
    pub bottom: NCChain,
    /// Decreasing.
    pub top: Vec<NoncrossingPartition>,
    pub left_weights: Vec<f64>,
    pub bottom_weights: Vec<f64>,
    pub rectangle: Rectangle,
}

/// Left and bottom chains with barycentric weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoComPoint {
    pub left_chain: NCChain,
    pub left_weights: Vec<f64>,
    pub bottom_chain: NCChain,
    pub bottom_weights: Vec<f64>,
}

/// Horizontal and vertical side constellations, raw and stripped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideConstellations {
    pub horizontal: Constellation,
    pub vertical: Constellation,
    pub horizontal_stripped: Constellation,
    pub vertical_stripped: Constellation,
}

/// Every permutation computed for one polynomial and rectangle.
#[derive(Clone, Debug)]
pub struct SideAnalysis {
    pub critical: CriticalData,
    pub rectangle: Rectangle,
    pub outer: Rectangle,
    pub regularity: SideRegularity,
    pub left: Vec<Permutation>,
    pub right: Vec<Permutation>,
    pub bottom: Vec<Permutation>,
    pub top: Vec<Permutation>,
    pub sigma: Vec<Permutation>,
    pub tau: Vec<Permutation>,
    pub global: Permutation,
    pub left_weights: Vec<f64>,
    pub bottom_weights: Vec<f64>,
    pub fiber: LabeledFiber,
}

/// Default working rectangle: bounding box of the critical values with margin 0.1.
pub fn auto_rectangle(cd: &CriticalData) -> Result<Rectangle> {
    if cd.cvl.points.is_empty() {
        return Rectangle::new(-1.0, 1.0, -1.0, 1.0);
    }
    bounding_rectangle(&cd.cvl, 0.1)
}

/// Computes all side permutations. `rect = None` selects [`auto_rectangle`].
pub fn side_analysis(p: &ComplexPoly, rect: Option<Rectangle>, tol: f64) -> Result<SideAnalysis> {
    let cd = crate::poly::critical_data(p, tol)?;
    side_analysis_with(p, cd, rect)
}

pub fn side_analysis_with(p: &ComplexPoly, cd: CriticalData, rect: Option<Rectangle>) -> Result<SideAnalysis> {
    let d = p.degree();
    let rect = match rect {
        Some(r) => r,
        None => auto_rectangle(&cd)?,
    };
    let ctol = cd.cvl.tol.max(1e-9 * (1.0 + cd.cvl.max_abs()));
    for z in &cd.cvl.points {
        if !rect.contains(*z, ctol) {
            return Err(Error::InvalidInput(format!("critical value {z} lies outside the rectangle")));
        }
    }
    let regularity = rect.side_regularity(&cd.cvl.points, ctol);
    let outer = rect.enlarged(0.1 * rect.width().max(rect.height()));
    let re: Vec<f64> = cd.cvl.points.iter().map(|z| z.re).collect();
    let im: Vec<f64> = cd.cvl.points.iter().map(|z| z.im).collect();
    let mut iv = vec![rect.xl];
    iv.extend(interior_coordinates(&re, rect.xl, rect.xr, ctol));
    iv.push(rect.xr);
    let mut jv = vec![rect.yb];
    jv.extend(interior_coordinates(&im, rect.yb, rect.yt, ctol));
    jv.push(rect.yt);
    let mut xs = vec![outer.xl];
    xs.extend(iv.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    xs.push(outer.xr);
    let mut ys = vec![outer.yb];
    ys.extend(jv.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    ys.push(outer.yt);
    let k = xs.len() - 2;
    let l = ys.len() - 2;

    let tracker = Tracker::from_critical(p, &cd, TrackConfig::default());
    let base = C64::new(outer.xl, outer.yb);
    let fiber = standard_labels_with(&tracker, base, 1.0)?;
    let grid = Grid::new(&tracker, xs, ys, fiber.points.clone());
    let (xe, ye) = (k + 1, l + 1);
    let o = (0, 0);
    let left: Vec<Permutation> = (1..=k).map(|i| grid.loop_perm(&[o, (0, ye), (i, ye), (i, 0), o])).collect::<Result<_>>()?;
    let right: Vec<Permutation> =
        (1..=k).map(|i| grid.loop_perm(&[o, (i, 0), (i, ye), (xe, ye), (xe, 0), (i, 0), o])).collect::<Result<_>>()?;
    let bottom: Vec<Permutation> = (1..=l).map(|j| grid.loop_perm(&[o, (0, j), (xe, j), (xe, 0), o])).collect::<Result<_>>()?;
    let top: Vec<Permutation> =
        (1..=l).map(|j| grid.loop_perm(&[o, (0, j), (0, ye), (xe, ye), (xe, j), (0, j), o])).collect::<Result<_>>()?;
    let sigma: Vec<Permutation> = (1..k)
        .map(|i| grid.loop_perm(&[o, (i, 0), (i, ye), (i + 1, ye), (i + 1, 0), (i, 0), o]))
        .collect::<Result<_>>()?;
    let tau: Vec<Permutation> = (1..l)
        .map(|j| grid.loop_perm(&[o, (0, j), (0, j + 1), (xe, j + 1), (xe, j), (0, j), o]))
        .collect::<Result<_>>()?;
    let global = grid.loop_perm(&[o, (0, ye), (xe, ye), (xe, 0), o])?;
    let analysis = SideAnalysis {
        critical: cd,
        rectangle: rect,
        outer,
        regularity,
        left,
        right,
        bottom,
        top,
        sigma,
        tau,
        global,
        left_weights: barycentric(&iv),
        bottom_weights: barycentric(&jv),
        fiber,
    };
    analysis.check(d)?;
    Ok(analysis)
}

impl SideAnalysis {
    fn check(&self, d: usize) -> Result<()> {
        let delta = Permutation::long_cycle(d);
        let bad = |what: String| Err(Error::Invariant(what));
        if self.global != delta {
            return bad(format!("global clockwise monodromy is {} instead of the long cycle", self.global));
        }
        for (i, (l, r)) in self.left.iter().zip(&self.right).enumerate() {
            if l.compose(r)? != delta {
                return bad(format!("left*right != delta at arc {}", i + 1));
            }
        }
        for (j, (t, b)) in self.top.iter().zip(&self.bottom).enumerate() {
            if t.compose(b)? != delta {
                return bad(format!("top*bottom != delta at arc {}", j + 1));
            }
        }
        for (i, s) in self.sigma.iter().enumerate() {
            if self.left[i].inverse().compose(&self.left[i + 1])? != *s {
                return bad(format!("basic horizontal permutation {} does not factor the left chain", i + 1));
            }
        }
        for (j, t) in self.tau.iter().enumerate() {
            if self.top[j + 1].inverse().compose(&self.top[j])? != *t {
                return bad(format!("basic vertical permutation {} does not factor the top chain", j + 1));
            }
        }
        Ok(())
    }

    pub fn side_chains(&self) -> Result<SideChains> {
        let parts = |v: &[Permutation]| -> Result<Vec<NoncrossingPartition>> {
            v.iter().map(|p| partition_of_perm(p).map_err(|e| Error::Invariant(format!("side permutation not noncrossing: {e}")))).collect()
        };
        let left = NCChain::new(parts(&self.left)?).map_err(|e| Error::Invariant(e.to_string()))?;
        let bottom = NCChain::new(parts(&self.bottom)?).map_err(|e| Error::Invariant(e.to_string()))?;
        let mut right = parts(&self.right)?;
        let mut top = parts(&self.top)?;
        // decreasing chains are validated through their reversals
        right.reverse();
        top.reverse();
        NCChain::new(right.clone()).map_err(|e| Error::Invariant(e.to_string()))?;
        NCChain::new(top.clone()).map_err(|e| Error::Invariant(e.to_string()))?;
        right.reverse();
        top.reverse();
        Ok(SideChains {
            left,
            right,
            bottom,
            top,
            left_weights: self.left_weights.clone(),
            bottom_weights: self.bottom_weights.clone(),
            rectangle: self.rectangle,
        })
    }

    pub fn geocom(&self) -> Result<GeoComPoint> {
        let s = self.side_chains()?;
        Ok(GeoComPoint { left_chain: s.left, left_weights: s.left_weights, bottom_chain: s.bottom, bottom_weights: s.bottom_weights })
    }

    pub fn constellations(&self) -> Result<SideConstellations> {
        let mut h = vec![self.left[0].clone()];
        h.extend(self.sigma.iter().cloned());
        h.push(self.right[self.right.len() - 1].clone());
        let mut v = vec![self.top[self.top.len() - 1].clone()];
        v.extend(self.tau.iter().rev().cloned());
        v.push(self.bottom[0].clone());
        let horizontal = Constellation::from_factors(h).map_err(|e| Error::Invariant(e.to_string()))?;
        let vertical = Constellation::from_factors(v).map_err(|e| Error::Invariant(e.to_string()))?;
        Ok(SideConstellations {
            horizontal_stripped: horizontal.stripped(),
            vertical_stripped: vertical.stripped(),
            horizontal,
            vertical,
        })
    }
}

pub fn side_chains(p: &ComplexPoly, rect: Rectangle) -> Result<SideChains> {
    side_analysis(p, Some(rect), 0.0)?.side_chains()
}

pub fn geocom(p: &ComplexPoly, rect: Rectangle) -> Result<GeoComPoint> {
    side_analysis(p, Some(rect), 0.0)?.geocom()
}

pub fn side_constellations(p: &ComplexPoly, rect: Rectangle) -> Result<(Constellation, Constellation)> {
    let c = side_analysis(p, Some(rect), 0.0)?.constellations()?;
    Ok((c.horizontal, c.vertical))
}

/// Clockwise boundary of `rect` starting and ending at its lower left corner.
pub fn clockwise_boundary(rect: &Rectangle) -> PathSpec {
    PathSpec::closed(vec![
        Complex64::new(rect.xl, rect.yb),
        Complex64::new(rect.xl, rect.yt),
        Complex64::new(rect.xr, rect.yt),
        Complex64::new(rect.xr, rect.yb),
    ])
    .expect("nondegenerate rectangle")
}
