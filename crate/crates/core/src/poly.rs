//! Monic complex polynomials, root finding, critical data and the map from
//! critical points to critical values.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::IntegerPartition;

pub type C64 = Complex64;

const EPS: f64 = f64::EPSILON;

/// Monic polynomial, coefficients in descending degree.
#[derive(Clone, PartialEq, Serialize)]
pub struct ComplexPoly {
    #[serde(serialize_with = "ser_points")]
    coeffs: Vec<C64>,
}

#[derive(Deserialize)]
struct RawPoly {
    #[serde(deserialize_with = "de_points")]
    coeffs: Vec<C64>,
}

impl<'de> Deserialize<'de> for ComplexPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPoly::deserialize(d)?;
        ComplexPoly::new(raw.coeffs).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn ser_points<S: serde::Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

pub(crate) fn de_points<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<C64>, D::Error> {
    let v = Vec::<[f64; 2]>::deserialize(d)?;
    Ok(v.into_iter().map(|[re, im]| C64::new(re, im)).collect())
}

impl ComplexPoly {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput("degree must be at least 1".into()));
        }
        if coeffs[0] != C64::new(1.0, 0.0) {
            return Err(Error::InvalidInput("leading coefficient must be 1".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("coefficients must be finite".into()));
        }
        Ok(ComplexPoly { coeffs })
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut c = vec![C64::new(1.0, 0.0)];
        for &r in roots {
            c = poly_mul(&c, &[C64::new(1.0, 0.0), -r]);
        }
        ComplexPoly { coeffs: c }
    }

    /// `z^d + c`.
    pub fn power_plus_constant(d: usize, c: C64) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); d + 1];
        coeffs[0] = C64::new(1.0, 0.0);
        coeffs[d] += c;
        ComplexPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn eval(&self, z: C64) -> C64 {
        horner(&self.coeffs, z)
    }

    pub fn derivative(&self) -> Vec<C64> {
        derivative(&self.coeffs)
    }

    /// `p(z + a)`.
    pub fn shift(&self, a: C64) -> ComplexPoly {
        ComplexPoly { coeffs: taylor_shift(&self.coeffs, a) }
    }

    pub fn max_coeff_distance(&self, other: &ComplexPoly) -> f64 {
        if self.degree() != other.degree() {
            return f64::INFINITY;
        }
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let k = d - i;
            let mono = match k {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{k}"),
            };
            if i == 0 {
                terms.push(mono);
            } else {
                terms.push(format!("({:.6}{:+.6}i){mono}", c.re, c.im));
            }
        }
        write!(f, "{}", terms.join(" + "))
    }
}

pub fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Horner evaluation of `sum |c_i| |z|^(n-i)`, the rounding scale of `horner`.
fn abs_scale(coeffs: &[C64], r: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, c| acc * r + c.norm())
}

pub fn derivative(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return vec![C64::new(0.0, 0.0)];
    }
    coeffs[..n].iter().enumerate().map(|(i, &c)| c * (n - i) as f64).collect()
}

pub fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Antiderivative vanishing at 0.
pub fn antiderivative(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len();
    let mut out: Vec<C64> = coeffs.iter().enumerate().map(|(i, &c)| c / (n - i) as f64).collect();
    out.push(C64::new(0.0, 0.0));
    out
}

/// Coefficients of `p(z + a)`.
pub fn taylor_shift(coeffs: &[C64], a: C64) -> Vec<C64> {
    // repeated synthetic division
    let mut c = coeffs.to_vec();
    let n = c.len();
    for k in 0..n {
        for j in 1..n - k {
            let prev = c[j - 1];
            c[j] += prev * a;
        }
    }
    c
}

/// Taylor coefficients of `p` at `c`: `out[j] = p^(j)(c)/j!`.
pub fn taylor_coeffs(coeffs: &[C64], c: C64) -> Vec<C64> {
    let mut s = taylor_shift(coeffs, c);
    s.reverse();
    s
}

/// Finite multiset of complex points with multiplicities.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericMultiset {
    #[serde(serialize_with = "ser_points", deserialize_with = "de_points")]
    pub points: Vec<C64>,
    pub mult: Vec<usize>,
    pub tol: f64,
}

impl fmt::Debug for NumericMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self
            .points
            .iter()
            .zip(&self.mult)
            .map(|(z, m)| if *m == 1 { format!("{:.6}{:+.6}i", z.re, z.im) } else { format!("({:.6}{:+.6}i)^{m}", z.re, z.im) })
            .collect();
        write!(f, "{{{}}}", s.join(", "))
    }
}

impl NumericMultiset {
    pub fn new(points: Vec<C64>, mult: Vec<usize>, tol: f64) -> Result<Self> {
        if points.len() != mult.len() || mult.iter().any(|&m| m == 0) {
            return Err(Error::InvalidInput("one positive multiplicity per point".into()));
        }
        let m = NumericMultiset { points, mult, tol };
        m.validate()?;
        Ok(m)
    }

    /// Clusters a list of points (each of multiplicity one) at radius `tol`.
    pub fn from_points(points: &[C64], tol: f64) -> Self {
        let clusters = single_linkage(points, &vec![1; points.len()], tol);
        let mut pts = Vec::new();
        let mut mult = Vec::new();
        for c in clusters {
            let m = c.len();
            pts.push(c.iter().map(|&i| points[i]).sum::<C64>() / m as f64);
            mult.push(m);
        }
        let mut out = NumericMultiset { points: pts, mult, tol };
        out.canonicalize();
        out
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                if (self.points[i] - self.points[j]).norm() <= self.tol {
                    return Err(Error::InvalidInput("distinct points closer than the clustering radius".into()));
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.mult.iter().sum()
    }

    pub fn shape(&self) -> IntegerPartition {
        IntegerPartition::new(self.mult.clone()).expect("positive multiplicities")
    }

    /// Points repeated by multiplicity.
    pub fn expanded(&self) -> Vec<C64> {
        self.points.iter().zip(&self.mult).flat_map(|(&z, &m)| std::iter::repeat_n(z, m)).collect()
    }

    /// Sort by real part, then imaginary part.
    pub fn canonicalize(&mut self) {
        let mut idx: Vec<usize> = (0..self.points.len()).collect();
        idx.sort_by(|&a, &b| {
            let (p, q) = (self.points[a], self.points[b]);
            p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im))
        });
        self.points = idx.iter().map(|&i| self.points[i]).collect();
        self.mult = idx.iter().map(|&i| self.mult[i]).collect();
    }

    /// Largest distance in a greedy multiplicity-respecting matching, or
    /// infinity when sizes differ.
    pub fn distance(&self, other: &NumericMultiset) -> f64 {
        let a = self.expanded();
        let b = other.expanded();
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        let mut used = vec![false; b.len()];
        let mut worst: f64 = 0.0;
        for z in a {
            let (j, dist) = b
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, w)| (j, (z - w).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .expect("same size");
            used[j] = true;
            worst = worst.max(dist);
        }
        worst
    }

    pub fn matches(&self, other: &NumericMultiset, tol: f64) -> bool {
        self.distance(other) <= tol && self.shape() == other.shape()
    }

    pub fn max_abs(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Rotates every point by `e^{i phase}`.
    pub fn rotated(&self, phase: f64) -> NumericMultiset {
        let r = C64::from_polar(1.0, phase);
        let mut out = NumericMultiset { points: self.points.iter().map(|z| z * r).collect(), mult: self.mult.clone(), tol: self.tol };
        out.canonicalize();
        out
    }
}

/// Single-linkage clusters of weighted points at radius `tol`.
fn single_linkage(points: &[C64], _weights: &[usize], tol: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while c[r] != r {
            r = c[r];
        }
        c[x] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= tol {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                comp[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut comp, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Root finder configuration.
#[derive(Clone, Copy, Debug)]
pub struct RootConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig { seed: 0, restarts: 8, max_iter: 2000 }
    }
}

/// Default clustering radius for roots of size up to `max_abs`.
pub fn default_tol(max_abs: f64) -> f64 {
    1e-7 * (1.0 + max_abs)
}

/// Roots with multiplicities and the largest residual `|p(root)|`.
#[derive(Clone, Debug)]
pub struct RootsResult {
    pub roots: NumericMultiset,
    pub residual: f64,
}

/// Roots of the monic polynomial `p`; `tol <= 0` selects the default radius.
pub fn roots(p: &ComplexPoly, tol: f64) -> Result<NumericMultiset> {
    Ok(roots_of_coeffs(p.coeffs(), tol, RootConfig::default())?.roots)
}

/// Roots of an arbitrary polynomial with nonzero leading coefficient.
pub fn roots_of_coeffs(coeffs: &[C64], tol: f64, cfg: RootConfig) -> Result<RootsResult> {
    let lead = coeffs[0];
    if lead.norm() == 0.0 {
        return Err(Error::InvalidInput("leading coefficient is zero".into()));
    }
    let a: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    let n = a.len() - 1;
    if n == 0 {
        return Err(Error::InvalidInput("constant polynomial has no roots".into()));
    }
    let mut approx = None;
    for attempt in 0..=cfg.restarts {
        if let Some(z) = aberth(&a, cfg.seed.wrapping_add(attempt as u64), cfg.max_iter) {
            approx = Some(z);
            break;
        }
    }
    let approx = approx.ok_or_else(|| Error::RootNonConvergence(format!("Aberth iteration failed after {} restarts", cfg.restarts)))?;
    let max_abs = approx.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = if tol > 0.0 { tol } else { default_tol(max_abs) };
    let (points, mult) = cluster_roots(&a, &approx, tol);
    let residual = points.iter().map(|&z| horner(&a, z).norm()).fold(0.0, f64::max);
    let mut ms = NumericMultiset { points, mult, tol };
    ms.canonicalize();
    Ok(RootsResult { roots: ms, residual })
}

fn aberth(a: &[C64], seed: u64, max_iter: usize) -> Option<Vec<C64>> {
    let n = a.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = -a[1] / n as f64;
    let shifted = taylor_shift(a, center);
    // Fujiwara bound on the roots of the centred polynomial
    let bound = (1..=n)
        .map(|k| (shifted[k].norm() / if k == n { 2.0 } else { 1.0 }).powf(1.0 / k as f64))
        .fold(0.0, f64::max)
        * 2.0;
    let radius = if bound > 0.0 { bound } else { 1.0 };
    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let r = radius * (0.5 + 0.5 * rng.random_range(0.8..1.0));
            center + C64::from_polar(r, phase + std::f64::consts::TAU * k as f64 / n as f64)
        })
        .collect();
    if n == 1 {
        return Some(vec![-a[1]]);
    }
    let da = derivative(a);
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let zk = z[k];
            let pv = horner(a, zk);
            let scale = abs_scale(a, zk.norm());
            if pv.norm() <= 4.0 * EPS * scale {
                done[k] = true;
                continue;
            }
            let dv = horner(&da, zk);
            let ratio = pv / dv;
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += 1.0 / (zk - z[j]);
                }
            }
            let w = ratio / (1.0 - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                return None;
            }
            z[k] = zk - w;
            if w.norm() <= 4.0 * EPS * (1.0 + z[k].norm()) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return Some(z);
        }
    }
    // Near multiple roots the iteration stagnates at the rounding level;
    // accept when every residual is tiny compared with the evaluation scale.
    let ok = z.iter().all(|&zk| horner(a, zk).norm() <= 1e-6 * abs_scale(a, zk.norm()));
    if ok {
        Some(z)
    } else {
        None
    }
}

/// True iff the Taylor coefficients of `a` at `c` of order below `m - 1` are
/// at rounding level. `c` should already be a polished root of `a^(m-1)`.
fn is_numerical_multiple_root(a: &[C64], c: C64, m: usize) -> bool {
    let n = a.len() - 1;
    let t = taylor_coeffs(a, c);
    let r = c.norm();
    for j in 0..m.saturating_sub(1) {
        // rounding scale of the j-th Taylor coefficient
        let s: f64 = (0..=n - j)
            .map(|i| {
                let deg = n - i;
                if deg < j {
                    0.0
                } else {
                    a[i].norm() * binom(deg, j) * r.powi((deg - j) as i32)
                }
            })
            .sum();
        if t[j].norm() > 64.0 * (n as f64) * EPS * s.max(f64::MIN_POSITIVE) {
            return false;
        }
    }
    true
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn cluster_roots(a: &[C64], approx: &[C64], tol: f64) -> (Vec<C64>, Vec<usize>) {
    let n = approx.len();
    let max_abs = approx.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // current clusters as index groups
    let mut groups: Vec<Vec<usize>> = single_linkage(approx, &vec![1; n], tol);
    let centroid = |g: &[usize]| g.iter().map(|&i| approx[i]).sum::<C64>() / g.len() as f64;
    // grow the linkage radius, merging only clusters validated by Taylor coefficients
    let mut radius = tol;
    let max_radius = 1e-2 * (1.0 + max_abs);
    while radius < max_radius {
        radius *= 2.0;
        let cents: Vec<C64> = groups.iter().map(|g| centroid(g)).collect();
        let comps = single_linkage(&cents, &vec![1; cents.len()], radius);
        let mut next = Vec::new();
        for comp in comps {
            if comp.len() == 1 {
                next.push(groups[comp[0]].clone());
                continue;
            }
            let merged: Vec<usize> = comp.iter().flat_map(|&k| groups[k].clone()).collect();
            let c = polish(a, centroid(&merged), merged.len());
            if is_numerical_multiple_root(a, c, merged.len()) {
                next.push(merged);
            } else {
                next.extend(comp.iter().map(|&k| groups[k].clone()));
            }
        }
        groups = next;
    }
    let mut points = Vec::with_capacity(groups.len());
    let mut mult = Vec::with_capacity(groups.len());
    for g in groups {
        let m = g.len();
        let c = polish(a, centroid(&g), m);
        points.push(c);
        mult.push(m);
    }
    (points, mult)
}

/// Newton polishing of a root of multiplicity `m` on the `(m-1)`-th derivative.
fn polish(a: &[C64], z0: C64, m: usize) -> C64 {
    let mut q = a.to_vec();
    for _ in 1..m {
        q = derivative(&q);
    }
    let dq = derivative(&q);
    let mut z = z0;
    for _ in 0..8 {
        let v = horner(&q, z);
        let dv = horner(&dq, z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        let cand = z - step;
        if !(cand.re.is_finite() && cand.im.is_finite()) || step.norm() > 1e-3 * (1.0 + z.norm()) {
            break;
        }
        if horner(&q, cand).norm() > v.norm() {
            break;
        }
        z = cand;
        if step.norm() <= EPS * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Clustered critical points and values with their shapes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalData {
    pub cpt: NumericMultiset,
    pub cvl: NumericMultiset,
    pub lambda: IntegerPartition,
    pub mu: IntegerPartition,
    /// For each critical point, the index of its critical value in `cvl`.
    pub value_index: Vec<usize>,
}

impl CriticalData {
    /// Grouping of critical point indices by critical value.
    pub fn grouping(&self) -> Vec<Vec<usize>> {
        let mut g = vec![Vec::new(); self.cvl.points.len()];
        for (i, &v) in self.value_index.iter().enumerate() {
            g[v].push(i);
        }
        g
    }

    /// `lambda -> mu` is witnessed by the point-to-value grouping.
    pub fn is_admissible(&self) -> bool {
        let g = self.grouping();
        let lam = IntegerPartition::new(self.cpt.mult.clone()).expect("positive");
        // the grouping refers to the cpt order, not the sorted parts
        let sums: Vec<usize> = g.iter().map(|b| b.iter().map(|&i| self.cpt.mult[i]).sum()).collect();
        lam == self.lambda && IntegerPartition::new(sums).ok().as_ref() == Some(&self.mu)
    }
}

pub fn critical_data(p: &ComplexPoly, tol: f64) -> Result<CriticalData> {
    critical_data_seeded(p, tol, 0)
}

pub fn critical_data_seeded(p: &ComplexPoly, tol: f64, seed: u64) -> Result<CriticalData> {
    let d = p.degree();
    if d < 2 {
        let empty = NumericMultiset { points: vec![], mult: vec![], tol: default_tol(0.0) };
        return Ok(CriticalData {
            cpt: empty.clone(),
            cvl: empty,
            lambda: IntegerPartition::new(vec![])?,
            mu: IntegerPartition::new(vec![])?,
            value_index: vec![],
        });
    }
    let cfg = RootConfig { seed, ..RootConfig::default() };
    let cpt = roots_of_coeffs(&p.derivative(), tol, cfg)?.roots;
    let values: Vec<C64> = cpt.points.iter().map(|&z| p.eval(z)).collect();
    let vmax = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let vtol = if tol > 0.0 { tol } else { default_tol(vmax) };
    let groups = single_linkage(&values, &cpt.mult, vtol);
    let mut vpts = Vec::new();
    let mut vmult = Vec::new();
    let mut value_index = vec![0; cpt.points.len()];
    for g in &groups {
        let w: usize = g.iter().map(|&i| cpt.mult[i]).sum();
        let c = g.iter().map(|&i| values[i] * cpt.mult[i] as f64).sum::<C64>() / w as f64;
        vpts.push(c);
        vmult.push(w);
    }
    let mut cvl = NumericMultiset { points: vpts, mult: vmult, tol: vtol };
    // sort values and remap indices
    let mut order: Vec<usize> = (0..cvl.points.len()).collect();
    order.sort_by(|&a, &b| cvl.points[a].re.total_cmp(&cvl.points[b].re).then(cvl.points[a].im.total_cmp(&cvl.points[b].im)));
    let mut rank = vec![0; order.len()];
    for (r, &o) in order.iter().enumerate() {
        rank[o] = r;
    }
    for (k, g) in groups.iter().enumerate() {
        for &i in g {
            value_index[i] = rank[k];
        }
    }
    cvl.canonicalize();
    let lambda = cpt.shape();
    let mu = cvl.shape();
    Ok(CriticalData { cpt, cvl, lambda, mu, value_index })
}

/// Critical values of `p`.
pub fn ll(p: &ComplexPoly) -> Result<NumericMultiset> {
    Ok(critical_data(p, 0.0)?.cvl)
}

/// `p(z - c_1/d)`, the centred translate.
pub fn center(p: &ComplexPoly) -> ComplexPoly {
    let d = p.degree() as f64;
    let a = -p.coeffs()[1] / d;
    let mut q = p.shift(a);
    q.coeffs[1] = C64::new(0.0, 0.0);
    q
}

/// Axis-aligned rectangle `[x_l, x_r] x [y_b, y_t]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub xl: f64,
    pub xr: f64,
    pub yb: f64,
    pub yt: f64,
}

/// Per-side flags; `true` means no critical value lies on that side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideRegularity {
    pub left: bool,
    pub right: bool,
    pub bottom: bool,
    pub top: bool,
}

impl SideRegularity {
    pub fn all(&self) -> bool {
        self.left && self.right && self.bottom && self.top
    }
}

impl Rectangle {
    pub fn new(xl: f64, xr: f64, yb: f64, yt: f64) -> Result<Self> {
        if !(xl < xr && yb < yt) || ![xl, xr, yb, yt].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput(format!("degenerate rectangle [{xl},{xr}]x[{yb},{yt}]")));
        }
        Ok(Rectangle { xl, xr, yb, yt })
    }

    /// Parses `xl,xr,yb,yt`.
    pub fn parse(s: &str) -> Result<Self> {
        let v: std::result::Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
        match v {
            Ok(v) if v.len() == 4 => Rectangle::new(v[0], v[1], v[2], v[3]),
            _ => Err(Error::InvalidInput(format!("rectangle must be xl,xr,yb,yt, got {s:?}"))),
        }
    }

    pub fn width(&self) -> f64 {
        self.xr - self.xl
    }

    pub fn height(&self) -> f64 {
        self.yt - self.yb
    }

    pub fn contains(&self, z: C64, tol: f64) -> bool {
        z.re >= self.xl - tol && z.re <= self.xr + tol && z.im >= self.yb - tol && z.im <= self.yt + tol
    }

    pub fn enlarged(&self, pad: f64) -> Rectangle {
        Rectangle { xl: self.xl - pad, xr: self.xr + pad, yb: self.yb - pad, yt: self.yt + pad }
    }

    pub fn side_regularity(&self, points: &[C64], tol: f64) -> SideRegularity {
        let on = |a: f64, b: f64| (a - b).abs() <= tol;
        let inx = |z: &C64| z.re >= self.xl - tol && z.re <= self.xr + tol;
        let iny = |z: &C64| z.im >= self.yb - tol && z.im <= self.yt + tol;
        SideRegularity {
            left: !points.iter().any(|z| on(z.re, self.xl) && iny(z)),
            right: !points.iter().any(|z| on(z.re, self.xr) && iny(z)),
            bottom: !points.iter().any(|z| on(z.im, self.yb) && inx(z)),
            top: !points.iter().any(|z| on(z.im, self.yt) && inx(z)),
        }
    }
}

/// Bounding box of the points, padded by `margin * (1 + diameter)` on every side.
pub fn bounding_rectangle(cvl: &NumericMultiset, margin: f64) -> Result<Rectangle> {
    if cvl.points.is_empty() || !(margin > 0.0) {
        return Err(Error::InvalidInput("need a nonempty multiset and a positive margin".into()));
    }
    let pts = &cvl.points;
    let mut diam: f64 = 0.0;
    for a in pts {
        for b in pts {
            diam = diam.max((a - b).norm());
        }
    }
    let pad = margin * (1.0 + diam);
    let xl = pts.iter().map(|z| z.re).fold(f64::INFINITY, f64::min) - pad;
    let xr = pts.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max) + pad;
    let yb = pts.iter().map(|z| z.im).fold(f64::INFINITY, f64::min) - pad;
    let yt = pts.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max) + pad;
    Rectangle::new(xl, xr, yb, yt)
}

/// Derivative polynomial `d * prod (w - z_j)^{m_j}`, `d = sum m + 1`.
pub fn critical_product(z: &[C64], m: &[usize]) -> Vec<C64> {
    let d = m.iter().sum::<usize>() + 1;
    let mut q = vec![C64::new(d as f64, 0.0)];
    for (&zj, &mj) in z.iter().zip(m) {
        for _ in 0..mj {
            q = poly_mul(&q, &[C64::new(1.0, 0.0), -zj]);
        }
    }
    q
}

/// The polynomial `d * int_b^z prod (w - z_j)^{m_j} dw + c`.
pub fn poly_from_critical(z: &[C64], m: &[usize], b: C64, c: C64) -> ComplexPoly {
    let q = critical_product(z, m);
    let mut p = antiderivative(&q);
    let base = horner(&p, b);
    let last = p.len() - 1;
    p[last] += c - base;
    // leading coefficient is exactly d/d = 1
    p[0] = C64::new(1.0, 0.0);
    ComplexPoly { coeffs: p }
}

/// Critical values `p(z_j)` of [`poly_from_critical`].
pub fn theta(z: &[C64], m: &[usize], b: C64, c: C64) -> Vec<C64> {
    let p = poly_from_critical(z, m, b, c);
    z.iter().map(|&zj| p.eval(zj)).collect()
}

/// Analytic Jacobian `J[i][j] = d p(z_j) / d z_i` of [`theta`].
pub fn theta_jacobian(z: &[C64], m: &[usize], b: C64) -> Vec<Vec<C64>> {
    let k = z.len();
    let d = m.iter().sum::<usize>() + 1;
    let mut jac = vec![vec![C64::new(0.0, 0.0); k]; k];
    for i in 0..k {
        // -d m_i (w - z_i)^{m_i - 1} prod_{l != i} (w - z_l)^{m_l}
        let mut q = vec![C64::new(-((d * m[i]) as f64), 0.0)];
        for (l, (&zl, &ml)) in z.iter().zip(m).enumerate() {
            let e = if l == i { ml - 1 } else { ml };
            for _ in 0..e {
                q = poly_mul(&q, &[C64::new(1.0, 0.0), -zl]);
            }
        }
        let a = antiderivative(&q);
        let base = horner(&a, b);
        for j in 0..k {
            jac[i][j] = horner(&a, z[j]) - base;
        }
    }
    jac
}

/// Closed form determinant of [`theta_jacobian`]:
/// `d^k / binom(n; m) * prod_j (b - z_j)^{m_j} * prod_{i != j} (z_i - z_j)^{m_j}`.
pub fn theta_jacobian_det(z: &[C64], m: &[usize], b: C64, _c: C64) -> C64 {
    let k = z.len();
    let n: usize = m.iter().sum();
    let d = (n + 1) as f64;
    let mut multinom = 1.0;
    let mut acc = 0usize;
    for &mi in m {
        for t in 1..=mi {
            acc += 1;
            multinom *= acc as f64 / t as f64;
        }
    }
    let mut v = C64::new(d.powi(k as i32) / multinom, 0.0);
    for j in 0..k {
        v *= (b - z[j]).powu(m[j] as u32);
        for i in 0..k {
            if i != j {
                v *= (z[i] - z[j]).powu(m[j] as u32);
            }
        }
    }
    v
}

/// Solves `a x = rhs` by Gaussian elimination with partial pivoting.
pub fn solve_linear(a: &[Vec<C64>], rhs: &[C64]) -> Option<Vec<C64>> {
    let n = rhs.len();
    let mut m: Vec<Vec<C64>> = a.iter().map(|r| r.clone()).collect();
    let mut b = rhs.to_vec();
    let scale = m.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))?;
        if m[piv][col].norm() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..n {
                let t = m[col][c];
                m[r][c] -= f * t;
            }
            let t = b[col];
            b[r] -= f * t;
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= m[r][c] * x[c];
        }
        x[r] = s / m[r][r];
    }
    Some(x)
}
