//! Newton solves for polynomials with prescribed critical values, and lifts
//! of multiset paths with weakly increasing shape.

use crate::error::{Error, Result};
use crate::poly::{center, critical_data, poly_from_critical, solve_linear, theta_jacobian, ComplexPoly, NumericMultiset, C64};

/// Unknowns `(z_1, .., z_k, c)` of `p = d int_0^z prod (w - z_j)^{m_j} dw + c`
/// with the gauge `sum m_j z_j = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CritState {
    pub z: Vec<C64>,
    pub m: Vec<usize>,
    pub c: C64,
}

impl CritState {
    pub fn poly(&self) -> ComplexPoly {
        poly_from_critical(&self.z, &self.m, C64::new(0.0, 0.0), self.c)
    }

    /// `F(x) = (p(z_j) - t_j, sum m_j z_j)`.
    pub fn residual(&self, t: &[C64]) -> Vec<C64> {
        let p = self.poly();
        let mut r: Vec<C64> = self.z.iter().zip(t).map(|(&z, &tj)| p.eval(z) - tj).collect();
        r.push(self.z.iter().zip(&self.m).map(|(&z, &m)| z * m as f64).sum());
        r
    }

    /// Newton step `dx` solving `J dx = -F`, or `None` when `J` is singular.
    fn newton_step(&self, t: &[C64]) -> Option<(Vec<C64>, f64)> {
        let k = self.z.len();
        let f = self.residual(t);
        let jt = theta_jacobian(&self.z, &self.m, C64::new(0.0, 0.0));
        // rows are equations, columns unknowns
        let mut a = vec![vec![C64::new(0.0, 0.0); k + 1]; k + 1];
        for j in 0..k {
            for i in 0..k {
                a[j][i] = jt[i][j];
            }
            a[j][k] = C64::new(1.0, 0.0);
        }
        for i in 0..k {
            a[k][i] = C64::new(self.m[i] as f64, 0.0);
        }
        let rhs: Vec<C64> = f.iter().map(|v| -v).collect();
        let norm = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
        solve_linear(&a, &rhs).map(|dx| (dx, norm))
    }

    fn apply(&self, dx: &[C64], lambda: f64) -> CritState {
        let k = self.z.len();
        CritState {
            z: self.z.iter().zip(dx).map(|(z, d)| z + d * lambda).collect(),
            m: self.m.clone(),
            c: self.c + dx[k] * lambda,
        }
    }

    fn res_norm(&self, t: &[C64]) -> f64 {
        self.residual(t).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn scale(&self, t: &[C64]) -> f64 {
        1.0 + t.iter().map(|v| v.norm()).fold(0.0, f64::max) + self.c.norm()
    }

    pub fn min_separation(&self) -> f64 {
        let mut s = f64::INFINITY;
        for i in 0..self.z.len() {
            for j in i + 1..self.z.len() {
                s = s.min((self.z[i] - self.z[j]).norm());
            }
        }
        s
    }
}

/// Plain Newton iteration for tracking; errors on a singular Jacobian.
pub fn newton(x0: &CritState, t: &[C64], max_iter: usize) -> Result<CritState> {
    let mut x = x0.clone();
    let tol = 1e-12 * x.scale(t);
    for _ in 0..max_iter {
        let (dx, norm) = x.newton_step(t).ok_or(Error::SingularJacobian)?;
        let step = dx.iter().map(|v| v.norm()).fold(0.0, f64::max);
        x = x.apply(&dx, 1.0);
        if !x.c.re.is_finite() || x.z.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NewtonFailure("iterate diverged".into()));
        }
        let size = 1.0 + x.z.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if norm <= tol && step <= 1e-10 * size || step <= 1e-14 * size {
            return Ok(x);
        }
    }
    if x.res_norm(t) <= 1e-10 * x.scale(t) {
        Ok(x)
    } else {
        Err(Error::NewtonFailure(format!("no convergence in {max_iter} iterations")))
    }
}

/// Newton with backtracking on the residual norm, for solves from far away.
pub fn damped_newton(x0: &CritState, t: &[C64], max_iter: usize) -> Result<CritState> {
    let mut x = x0.clone();
    let mut r = x.res_norm(t);
    let tol = 1e-12 * x.scale(t);
    for _ in 0..max_iter {
        if r <= tol {
            break;
        }
        let (dx, _) = x.newton_step(t).ok_or(Error::SingularJacobian)?;
        let mut lambda = 1.0;
        loop {
            let cand = x.apply(&dx, lambda);
            let rc = cand.res_norm(t);
            if rc.is_finite() && rc < r {
                x = cand;
                r = rc;
                break;
            }
            lambda *= 0.5;
            if lambda < 1e-6 {
                return Err(Error::NewtonFailure("line search failed".into()));
            }
        }
    }
    // a few full steps for quadratic polish
    for _ in 0..3 {
        match x.newton_step(t) {
            Some((dx, _)) => {
                let cand = x.apply(&dx, 1.0);
                if cand.res_norm(t) <= x.res_norm(t) {
                    x = cand;
                }
            }
            None => break,
        }
    }
    if x.res_norm(t) <= 1e-9 * x.scale(t) {
        Ok(x)
    } else {
        Err(Error::NewtonFailure("damped Newton did not converge".into()))
    }
}

/// Centred critical state of `p` together with the critical value of each critical point.
pub fn crit_state_of(p: &ComplexPoly) -> Result<(CritState, Vec<C64>)> {
    let q = center(p);
    let cd = critical_data(&q, 0.0)?;
    let z = cd.cpt.points.clone();
    let m = cd.cpt.mult.clone();
    let values: Vec<C64> = z.iter().map(|&zj| q.eval(zj)).collect();
    let x = CritState { z, m, c: q.eval(C64::new(0.0, 0.0)) };
    // refine onto the exact equations
    let x = newton(&x, &values, 8).unwrap_or(x);
    Ok((x, values))
}

/// March from `t0` to `t1` (per critical point targets) over `s in [s0, s1]`.
fn march(x: &CritState, t0: &[C64], t1: &[C64], s0: f64, s1: f64) -> Result<CritState> {
    let interp = |s: f64| -> Vec<C64> { t0.iter().zip(t1).map(|(a, b)| a * (1.0 - s) + b * s).collect() };
    let mut x = x.clone();
    let mut s = s0;
    let mut h = (s1 - s0).min(1.0 / 32.0);
    while s < s1 {
        let next = if s1 - s - h <= 1e-15 { s1 } else { s + h };
        let attempt = newton(&x, &interp(next), 12);
        let ok = match &attempt {
            Ok(y) => {
                let sep = x.min_separation();
                y.z.iter().zip(&x.z).all(|(a, b)| (a - b).norm() < 0.3 * sep)
            }
            Err(Error::SingularJacobian) => return Err(Error::SingularJacobian),
            Err(_) => false,
        };
        if ok {
            x = attempt.expect("checked");
            s = next;
            h = (h * 2.0).min(1.0 / 8.0);
        } else {
            h *= 0.5;
            if h < 1e-13 {
                return Err(Error::NewtonFailure(format!("continuation stalled at s={s}")));
            }
        }
    }
    Ok(x)
}

/// Assigns every critical point to a point of `b`, checking multiplicities.
fn assign(values: &[C64], m: &[usize], b: &NumericMultiset) -> Result<Vec<usize>> {
    let idx: Vec<usize> = values
        .iter()
        .map(|v| {
            (0..b.points.len())
                .min_by(|&i, &j| (v - b.points[i]).norm().total_cmp(&(v - b.points[j]).norm()))
                .expect("nonempty target")
        })
        .collect();
    let mut load = vec![0usize; b.points.len()];
    for (&i, &mi) in idx.iter().zip(m) {
        load[i] += mi;
    }
    if load != b.mult {
        let mut distinct: Vec<C64> = Vec::new();
        for v in values {
            if !distinct.iter().any(|w| (w - v).norm() <= b.tol) {
                distinct.push(*v);
            }
        }
        if b.points.len() > distinct.len() {
            return Err(Error::ShapeDecrease);
        }
        return Err(Error::InvalidInput("target multiset does not match the current critical values".into()));
    }
    Ok(idx)
}

/// Merges critical points closer than `radius` (weighted centroids).
fn merge_close(x: &CritState, groups: &[usize], radius: f64) -> (CritState, Vec<usize>) {
    let k = x.z.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], a: usize) -> usize {
        let mut r = a;
        while p[r] != r {
            r = p[r];
        }
        p[a] = r;
        r
    }
    for i in 0..k {
        for j in i + 1..k {
            if groups[i] == groups[j] && (x.z[i] - x.z[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut z = Vec::new();
    let mut m = Vec::new();
    let mut g = Vec::new();
    for i in 0..k {
        let r = find(&mut parent, i);
        match roots.iter().position(|&q| q == r) {
            Some(pos) => {
                let total = m[pos] + x.m[i];
                z[pos] = (z[pos] * m[pos] as f64 + x.z[i] * x.m[i] as f64) / total as f64;
                m[pos] = total;
            }
            None => {
                roots.push(r);
                z.push(x.z[i]);
                m.push(x.m[i]);
                g.push(groups[i]);
            }
        }
    }
    (CritState { z, m, c: x.c }, g)
}

/// Solves the endpoint of a segment whose targets may coalesce.
fn finish_segment(x: &CritState, t0: &[C64], b: &NumericMultiset, idx: &[usize]) -> Result<CritState> {
    let t1: Vec<C64> = idx.iter().map(|&i| b.points[i]).collect();
    let merging = (0..idx.len()).any(|i| (0..i).any(|j| idx[i] == idx[j]));
    if !merging {
        return march(x, t0, &t1, 0.0, 1.0);
    }
    let scale = 1.0 + t1.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut y = march(x, t0, &t1, 0.0, 1.0 - 1e-2)?;
    let mut e = 1e-2;
    let mut prev = pair_distances(&y, idx);
    while e > 1e-14 {
        let e_next = e / 4.0;
        y = march(&y, t0, &t1, 1.0 - e, 1.0 - e_next)?;
        e = e_next;
        let dist = pair_distances(&y, idx);
        // coalescing pairs shrink like a root of e
        let shrinking: Vec<f64> = dist
            .iter()
            .zip(&prev)
            .filter(|((_, dn), (_, dp))| *dn < 0.75 * *dp && *dn < 1e-2 * scale)
            .map(|((_, dn), _)| *dn)
            .collect();
        prev = dist;
        let radius = shrinking.iter().copied().fold(0.0, f64::max);
        if radius > 0.0 {
            let (merged, groups) = merge_close(&y, idx, radius * 1.5);
            let target: Vec<C64> = groups.iter().map(|&i| b.points[i]).collect();
            if let Ok(sol) = newton(&merged, &target, 30) {
                if sol.min_separation() > 1e-6 * scale || sol.z.len() == 1 {
                    if !groups.iter().enumerate().any(|(i, gi)| groups[..i].contains(gi)) {
                        return Ok(sol);
                    }
                    // remaining same-value points are distinct critical points
                    return Ok(sol);
                }
            }
        }
        if e < 1e-8 {
            // no coalescence: try the exact endpoint directly
            if let Ok(sol) = newton(&y, &t1, 30) {
                if sol.min_separation() > 1e-6 * scale {
                    return Ok(sol);
                }
            }
        }
    }
    Err(Error::SingularJacobian)
}

fn pair_distances(x: &CritState, idx: &[usize]) -> Vec<((usize, usize), f64)> {
    let mut out = Vec::new();
    for i in 0..idx.len() {
        for j in 0..i {
            if idx[i] == idx[j] {
                out.push(((j, i), (x.z[i] - x.z[j]).norm()));
            }
        }
    }
    out
}

/// Lifts a path of critical value multisets starting at `cvl(p0)`.
///
/// Consecutive targets are joined linearly; their points are matched by
/// proximity. Shapes must weakly increase along the list.
pub fn lift_multiset_path(p0: &ComplexPoly, targets: &[NumericMultiset]) -> Result<ComplexPoly> {
    let first = targets.first().ok_or_else(|| Error::InvalidInput("empty target list".into()))?;
    let shift = -p0.coeffs()[1] / p0.degree() as f64;
    if p0.degree() < 2 {
        return Ok(p0.clone());
    }
    let (mut x, mut values) = crit_state_of(p0)?;
    let scale = 1.0 + first.max_abs();
    let here = NumericMultiset::from_points(&values, 1e-7 * scale);
    let cvl0 = critical_data(p0, 0.0)?.cvl;
    if !cvl0.matches(first, 1e-6 * scale) && !here.matches(first, 1e-6 * scale) {
        return Err(Error::InvalidInput("first target must equal the critical values of p0".into()));
    }
    for b in &targets[1..] {
        if b.size() != x.m.iter().sum::<usize>() {
            return Err(Error::InvalidInput("target sizes differ".into()));
        }
        let idx = assign(&values, &x.m, b)?;
        if !b.shape().parts().is_empty() && shape_decreases(&values, &x.m, b) {
            return Err(Error::ShapeDecrease);
        }
        x = finish_segment(&x, &values, b, &idx)?;
        let p = x.poly();
        values = x.z.iter().map(|&z| p.eval(z)).collect();
    }
    // translate back to the original centre
    Ok(x.poly().shift(-shift))
}

/// True iff some current critical value would have to split.
fn shape_decreases(values: &[C64], m: &[usize], b: &NumericMultiset) -> bool {
    let tol = b.tol.max(1e-9);
    let cur = NumericMultiset::from_points(values, tol);
    let _ = m;
    cur.points.len() < b.points.len()
}
