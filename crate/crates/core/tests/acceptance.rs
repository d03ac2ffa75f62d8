//! One PASS/FAIL line per acceptance criterion. Every check compares library
//! output against an oracle written here or against values quoted from the paper.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use ncpoly::complexes::{annulus_vertex_classes, dual_braid_complex_stats, is_basketball, rectangle_complex_stats};
use ncpoly::fiber::{default_starts, fiber_enumerate};
use ncpoly::hurwitz::{hurwitz_orbit, Factorization};
use ncpoly::lifting::lift_multiset_path;
use ncpoly::monodromy::side_analysis;
use ncpoly::noncrossing::{
    enumerate_ncpart, enumerate_ncperm, kreweras, matching_of_partition, maximal_chains, partition_of_matching, perm_of,
    NoncrossingPartition, Side,
};
use ncpoly::perm::Permutation;
use ncpoly::poly::{critical_data, theta, theta_jacobian_det, ComplexPoly, NumericMultiset, Rectangle, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---- oracles ----

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn catalan(d: u64) -> u64 {
    binom(2 * d, d) / (d + 1)
}

/// One-line 0-based composition `a b`, applying `b` first.
fn comp(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn inv(a: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x] = i;
    }
    out
}

fn n_cycles(a: &[usize]) -> usize {
    let mut seen = vec![false; a.len()];
    let mut c = 0;
    for s in 0..a.len() {
        if !seen[s] {
            c += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = a[x];
            }
        }
    }
    c
}

fn abs_len(a: &[usize]) -> usize {
    a.len() - n_cycles(a)
}

fn abs_leq(a: &[usize], b: &[usize]) -> bool {
    abs_len(a) + abs_len(&comp(&inv(a), b)) == abs_len(b)
}

fn ol(p: &Permutation) -> Vec<usize> {
    p.one_line().iter().map(|x| x - 1).collect()
}

fn delta(d: usize) -> Vec<usize> {
    (0..d).map(|i| (i + 1) % d).collect()
}

fn from_cycles(d: usize, cycles: &[&[usize]]) -> Vec<usize> {
    let mut a: Vec<usize> = (0..d).collect();
    for c in cycles {
        for (k, &x) in c.iter().enumerate() {
            a[x - 1] = c[(k + 1) % c.len()] - 1;
        }
    }
    a
}

fn refines(p: &NoncrossingPartition, q: &NoncrossingPartition) -> bool {
    p.blocks().iter().all(|b| q.blocks().iter().any(|c| b.iter().all(|x| c.contains(x))))
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn deg5() -> ComplexPoly {
    ComplexPoly::new(vec![
        c(1.0, 0.0),
        c(-17.0 / 4.0, 6.0 / 4.0),
        c(73.0 / 15.0, -63.0 / 15.0),
        c(34.0 / 25.0, -12.0 / 25.0),
        c(-308.0 / 125.0, 252.0 / 125.0),
        c(0.0, 0.0),
    ])
    .unwrap()
}

/// Greedy set match: every `want` point has a distinct `got` point within `tol`
/// in the max norm of real and imaginary parts.
fn same_points(got: &[C64], want: &[C64], tol: f64) -> bool {
    let dist = |a: C64, b: C64| (a.re - b.re).abs().max((a.im - b.im).abs());
    if got.len() != want.len() {
        return false;
    }
    let mut used = vec![false; got.len()];
    want.iter().all(|w| {
        if let Some(i) = (0..got.len()).filter(|&i| !used[i]).min_by(|&i, &j| dist(got[i], *w).total_cmp(&dist(got[j], *w))) {
            if dist(got[i], *w) <= tol {
                used[i] = true;
                return true;
            }
        }
        false
    })
}

fn random_monic(rng: &mut ChaCha8Rng, d: usize) -> ComplexPoly {
    let mut coeffs = vec![c(1.0, 0.0)];
    for _ in 0..d {
        coeffs.push(c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)));
    }
    ComplexPoly::new(coeffs).unwrap()
}

// ---- criteria ----

fn c1() -> Check {
    let mut sizes = Vec::new();
    for d in 1..=7u64 {
        let n = enumerate_ncpart(d as usize).len() as u64;
        ensure!(n == catalan(d), "d={d}: {n} != {}", catalan(d));
        sizes.push(n.to_string());
    }
    Ok(format!("sizes {}", sizes.join(",")))
}

fn c2() -> Check {
    let mut counts = Vec::new();
    for d in 2..=7usize {
        let n = maximal_chains(d).len() as u64;
        let want = (d as u64).pow(d as u32 - 2);
        ensure!(n == want, "d={d}: {n} != {want}");
        counts.push(n.to_string());
    }
    Ok(format!("counts {}", counts.join(",")))
}

fn c3() -> Check {
    let mut pairs = 0u64;
    for d in 1..=6 {
        let parts = enumerate_ncpart(d);
        let kr: Vec<NoncrossingPartition> = parts.iter().map(kreweras).collect();
        for (p, kp) in parts.iter().zip(&kr) {
            for (q, kq) in parts.iter().zip(&kr) {
                ensure!(refines(p, q) == refines(kq, kp), "d={d}: {p} vs {q} not reversed");
                pairs += 1;
            }
        }
    }
    for d in 1..=7 {
        let dl = delta(d);
        for p in enumerate_ncpart(d) {
            let pi = ol(&perm_of(&p));
            let k1 = kreweras(&p);
            ensure!(comp(&pi, &ol(&perm_of(&k1))) == dl, "d={d}: perm(p) perm(K(p)) != delta for {p}");
            let k2 = ol(&perm_of(&kreweras(&k1)));
            ensure!(k2 == comp(&comp(&inv(&dl), &pi), &dl), "d={d}: K^2({p}) is not the delta conjugate");
        }
    }
    Ok(format!("{pairs} ordered pairs reversed, complement and K^2 exhaustive to d=7"))
}

fn c4() -> Check {
    let top = NoncrossingPartition::parse("137|2|45|6|8|9").map_err(|e| e.to_string())?;
    let bottom = NoncrossingPartition::parse("12|356|4|789").map_err(|e| e.to_string())?;
    let m = matching_of_partition(&top, Side::Top);
    ensure!(m == matching_of_partition(&bottom, Side::Bottom), "top and bottom give different matchings");
    let want = [(1, 2), (2, 1), (3, 6), (4, 4), (5, 3), (6, 5), (7, 9), (8, 7), (9, 8)];
    ensure!(m.pairs() == want, "matching {:?}", m.pairs());
    ensure!(partition_of_matching(&m, Side::Top).map_err(|e| e.to_string())? == top, "top round trip");
    ensure!(partition_of_matching(&m, Side::Bottom).map_err(|e| e.to_string())? == bottom, "bottom round trip");
    let a = from_cycles(9, &[&[1, 3, 7], &[4, 5]]);
    let b = from_cycles(9, &[&[1, 2], &[3, 5, 6], &[7, 8, 9]]);
    ensure!(comp(&a, &b) == delta(9), "product is not delta");
    ensure!(ol(&perm_of(&top)) == a && ol(&perm_of(&bottom)) == b, "perm_of disagrees with the cycles");
    Ok("matching, round trips and (1 3 7)(4 5)(1 2)(3 5 6)(7 8 9) = (1 ... 9)".into())
}

fn c5() -> Check {
    for d in 3..=5usize {
        let f = Factorization::new((1..d).map(|i| Permutation::transposition(d, i, i + 1).unwrap()).collect()).unwrap();
        ensure!(ol(f.target()) == delta(d), "d={d}: start is not a factorization of delta");
        let orbit = hurwitz_orbit(&f).map_err(|e| e.to_string())?;
        let got: BTreeSet<Vec<Vec<usize>>> = orbit.iter().map(|g| g.factors().iter().map(ol).collect()).collect();
        // brute force: all (d-1)-tuples of transpositions with product delta
        let mut ts = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                let mut t: Vec<usize> = (0..d).collect();
                t.swap(a, b);
                ts.push(t);
            }
        }
        let mut brute = BTreeSet::new();
        let mut idx = vec![0usize; d - 1];
        'outer: loop {
            let mut prod: Vec<usize> = (0..d).collect();
            for &i in &idx {
                prod = comp(&prod, &ts[i]);
            }
            if prod == delta(d) {
                brute.insert(idx.iter().map(|&i| ts[i].clone()).collect::<Vec<_>>());
            }
            for k in (0..d - 1).rev() {
                idx[k] += 1;
                if idx[k] < ts.len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
        let want = (d as usize).pow(d as u32 - 2);
        ensure!(got.len() == want, "d={d}: orbit size {} != {want}", got.len());
        ensure!(got == brute, "d={d}: orbit differs from brute force ({} vs {})", got.len(), brute.len());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..50 {
        let d = rng.random_range(4..=7usize);
        let mut f = Factorization::new((1..d).map(|i| Permutation::transposition(d, i, i + 1).unwrap()).collect()).unwrap();
        for _ in 0..20 {
            let i = rng.random_range(1..d - 1);
            f = if rng.random_bool(0.5) { f.hurwitz_move(i).unwrap() } else { f.hurwitz_move_inverse(i).unwrap() };
        }
        let i = rng.random_range(1..d - 2);
        let lhs = f.hurwitz_move(i).unwrap().hurwitz_move(i + 1).unwrap().hurwitz_move(i).unwrap();
        let rhs = f.hurwitz_move(i + 1).unwrap().hurwitz_move(i).unwrap().hurwitz_move(i + 1).unwrap();
        ensure!(lhs == rhs, "case {case}: braid relation fails at {i}");
        if d >= 5 {
            let j = if i + 2 < d { i + 2 } else { i - 2 };
            if j >= 1 && j < d - 1 {
                let a = f.hurwitz_move(i).unwrap().hurwitz_move(j).unwrap();
                let b = f.hurwitz_move(j).unwrap().hurwitz_move(i).unwrap();
                ensure!(a == b, "case {case}: far moves {i},{j} do not commute");
            }
        }
        ensure!(f.hurwitz_move(i).unwrap().hurwitz_move_inverse(i).unwrap() == f, "case {case}: inverse move");
        ensure!(ol(f.target()) == delta(d), "case {case}: target changed");
    }
    Ok("orbits 3,16,125 equal brute force; 50 braid cases".into())
}

fn c6() -> Check {
    let mut counts = Vec::new();
    for d in 1..=5usize {
        let perms = enumerate_ncperm(d);
        let mut n = 0u64;
        for l in &perms {
            for b in &perms {
                if is_basketball(l, b).map_err(|e| e.to_string())? {
                    n += 1;
                }
            }
        }
        let want = binom(4 * d as u64, d as u64) / (3 * d as u64 + 1);
        ensure!(n == want, "d={d}: {n} != {want}");
        counts.push(n.to_string());
    }
    Ok(format!("counts {}", counts.join(",")))
}

/// Cells of the dual braid complex as distinct edge-label sequences of strict chains.
fn dual_braid_bruteforce(d: usize) -> Vec<u64> {
    let perms: Vec<Vec<usize>> = enumerate_ncperm(d).iter().map(ol).collect();
    let mut labels: Vec<HashSet<Vec<Vec<usize>>>> = vec![HashSet::new(); d];
    labels[0].insert(Vec::new());
    fn grow(
        perms: &[Vec<usize>],
        last: &[usize],
        seq: &mut Vec<Vec<usize>>,
        labels: &mut Vec<HashSet<Vec<Vec<usize>>>>,
    ) {
        for q in perms {
            if q != last && abs_leq(last, q) {
                seq.push(comp(&inv(last), q));
                labels[seq.len()].insert(seq.clone());
                grow(perms, q, seq, labels);
                seq.pop();
            }
        }
    }
    for p in &perms {
        grow(&perms, p, &mut Vec::new(), &mut labels);
    }
    labels.iter().map(|s| s.len() as u64).collect()
}

fn c7() -> Check {
    let k2 = dual_braid_complex_stats(2).map_err(|e| e.to_string())?;
    let k3 = dual_braid_complex_stats(3).map_err(|e| e.to_string())?;
    let k4 = dual_braid_complex_stats(4).map_err(|e| e.to_string())?;
    ensure!(k2.cells_by_dim == [1, 1] && k2.euler == 0, "K_2 = {:?}", k2);
    ensure!(k3.cells_by_dim == [1, 4, 3] && k3.euler == 0, "K_3 = {:?}", k3);
    ensure!(k4.cells_by_dim[0] == 1, "K_4 vertices {}", k4.cells_by_dim[0]);
    ensure!(k4.cells_by_dim[3] == 16, "K_4 top cells {}", k4.cells_by_dim[3]);
    ensure!(k4.cells_by_dim[1] == catalan(4) - 1, "K_4 edges {}", k4.cells_by_dim[1]);
    for d in 2..=5 {
        let s = dual_braid_complex_stats(d).map_err(|e| e.to_string())?;
        let b = dual_braid_bruteforce(d);
        ensure!(s.cells_by_dim == b, "d={d}: {:?} vs brute force {:?}", s.cells_by_dim, b);
    }
    Ok(format!("K_2 {:?}, K_3 {:?}, K_4 {:?}; brute force agrees to d=5", k2.cells_by_dim, k3.cells_by_dim, k4.cells_by_dim))
}

fn c8() -> Check {
    let r2 = rectangle_complex_stats(2).map_err(|e| e.to_string())?;
    let r3 = rectangle_complex_stats(3).map_err(|e| e.to_string())?;
    ensure!(r2.vertices == 4 && r2.top_cells == 1, "d=2: {} vertices, {} top cells", r2.vertices, r2.top_cells);
    ensure!(r3.vertices == 22 && r3.top_cells == 6, "d=3: {} vertices, {} top cells", r3.vertices, r3.top_cells);
    let mut classes = Vec::new();
    for d in 1..=5u64 {
        let n = annulus_vertex_classes(d as usize).map_err(|e| e.to_string())?;
        ensure!(n == catalan(d), "annulus d={d}: {n} != {}", catalan(d));
        classes.push(n.to_string());
    }
    Ok(format!("rectangle 4/1 and 22/6, annulus classes {}", classes.join(",")))
}

fn c9() -> Check {
    let p = deg5();
    let cd = critical_data(&p, 0.0).map_err(|e| e.to_string())?;
    let cpt = [c(-0.4, 0.0), c(0.4, 0.0), c(1.4, -1.4), c(2.0, 0.2)];
    ensure!(same_points(&cd.cpt.points, &cpt, 1e-9), "critical points {:?}", cd.cpt);
    // rounded to one decimal per component
    let cvl = [c(0.8, -0.6), c(-0.6, 0.5), c(-8.5, -4.3), c(3.6, -6.9)];
    ensure!(same_points(&cd.cvl.points, &cvl, 5e-2), "critical values {:?}", cd.cvl);
    let rect = Rectangle::new(-10.0, 5.0, -9.0, 2.0).unwrap();
    let a = side_analysis(&p, Some(rect), 0.0).map_err(|e| e.to_string())?;
    let s = a.side_chains().map_err(|e| e.to_string())?;
    let join = |v: &[NoncrossingPartition], sep: &str| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep);
    let mut top = s.top.clone();
    top.reverse();
    let got = [join(s.left.elements(), " < "), join(&s.right, " > "), join(s.bottom.elements(), " < "), join(&top, " < ")];
    let want = [
        "1|2|3|4|5 < 1|2|3|45 < 1|245|3 < 1|2345 < 12345",
        "12345 > 1235|4 > 15|23|4 > 15|2|3|4 > 1|2|3|4|5",
        "1|2|3|4|5 < 15|2|3|4 < 145|2|3 < 145|23 < 12345",
        "1|2|3|4|5 < 1|24|3|5 < 1|234|5 < 1|2345 < 12345",
    ];
    for (g, w) in got.iter().zip(&want) {
        ensure!(g == w, "chain {g} != {w}");
    }
    let lw = [0.102, 0.528, 0.089, 0.191, 0.091];
    let bw = [0.190, 0.241, 0.334, 0.098, 0.136];
    ensure!(s.left_weights.iter().zip(&lw).all(|(a, b)| (a - b).abs() < 5e-3), "left weights {:?}", s.left_weights);
    ensure!(s.bottom_weights.iter().zip(&bw).all(|(a, b)| (a - b).abs() < 5e-3), "bottom weights {:?}", s.bottom_weights);
    Ok("critical data, four chains and both weight vectors match".into())
}

fn c10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut arcs = 0;
    for case in 0..10 {
        let d = 2 + case % 5;
        let p = random_monic(&mut rng, d);
        let a = side_analysis(&p, None, 0.0).map_err(|e| format!("case {case}: {e}"))?;
        let dl = delta(d);
        ensure!(ol(&a.global) == dl, "case {case}: global loop gives {}", a.global);
        for (l, r) in a.left.iter().zip(&a.right) {
            ensure!(comp(&ol(l), &ol(r)) == dl, "case {case}: left*right != delta");
            arcs += 1;
        }
        for (t, b) in a.top.iter().zip(&a.bottom) {
            ensure!(comp(&ol(t), &ol(b)) == dl, "case {case}: top*bottom != delta");
            arcs += 1;
        }
    }
    // the d=9 anchor: the bottom permutation is the right factor
    let t = from_cycles(9, &[&[1, 3, 7], &[4, 5]]);
    let b = from_cycles(9, &[&[1, 2], &[3, 5, 6], &[7, 8, 9]]);
    ensure!(comp(&t, &b) == delta(9), "d=9 anchor");
    Ok(format!("10 polynomials, {arcs} arcs, d=9 anchor"))
}

fn c11() -> Check {
    let t = NumericMultiset::new(vec![c(-2.0, 0.0), c(2.0, 0.0)], vec![1, 1], 1e-9).unwrap();
    let r = fiber_enumerate(&t, 3, default_starts(3), 0).map_err(|e| e.to_string())?;
    ensure!(r.found == 3, "d=3 found {}", r.found);
    for k in 0..3 {
        let w = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0);
        let want = ComplexPoly::new(vec![c(1.0, 0.0), c(0.0, 0.0), -w * 3.0, c(0.0, 0.0)]).unwrap();
        ensure!(r.polys.iter().any(|q| q.max_coeff_distance(&want) < 1e-8), "z^3 - 3w^{k} z missing");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pts: Vec<C64> = (0..3).map(|_| c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))).collect();
    let t4 = NumericMultiset::new(pts, vec![1; 3], 1e-9).unwrap();
    let r4 = fiber_enumerate(&t4, 4, default_starts(4), 11).map_err(|e| e.to_string())?;
    ensure!(r4.found == 16, "d=4 found {}", r4.found);
    let labels: HashSet<_> = r4.constellations.iter().collect();
    ensure!(labels.len() == 16, "only {} distinct constellations", labels.len());
    for q in &r4.polys {
        let cvl = critical_data(q, 0.0).map_err(|e| e.to_string())?.cvl;
        ensure!(cvl.matches(&t4, 1e-6), "preimage with critical values {:?}", cvl);
        ensure!(q.coeffs()[1].norm() < 1e-10, "preimage not centred");
    }
    Ok("d=3 family exact, d=4: 16 polynomials with 16 constellations".into())
}

fn fd_det(z: &[C64], m: &[usize], b: C64, cc: C64) -> C64 {
    let k = z.len();
    let h = 1e-6;
    let mut jac = DMatrix::<C64>::zeros(k, k);
    for i in 0..k {
        let mut zp = z.to_vec();
        let mut zm = z.to_vec();
        zp[i] += h;
        zm[i] -= h;
        let (fp, fm) = (theta(&zp, m, b, cc), theta(&zm, m, b, cc));
        for j in 0..k {
            jac[(i, j)] = (fp[j] - fm[j]) / (2.0 * h);
        }
    }
    jac.determinant()
}

fn c12() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 20 {
        let n = rng.random_range(1..=4usize);
        let k = rng.random_range(1..=n);
        let mut m = vec![1; k];
        for _ in k..n {
            let i = rng.random_range(0..k);
            m[i] += 1;
        }
        let z: Vec<C64> = (0..k).map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
        let b = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let exact = theta_jacobian_det(&z, &m, b, c(0.0, 0.0));
        if exact.norm() < 1e-3 {
            continue;
        }
        let fd = fd_det(&z, &m, b, c(0.0, 0.0));
        worst = worst.max((exact - fd).norm() / exact.norm());
        done += 1;
    }
    ensure!(worst < 1e-5, "worst relative error {worst:e}");
    let z = [c(0.3, 0.1), c(0.3, 0.1), c(-1.0, 0.5)];
    let det = theta_jacobian_det(&z, &[1, 2, 1], c(0.7, -0.2), c(0.0, 0.0));
    ensure!(det == c(0.0, 0.0), "coincident points give {det}");
    Ok(format!("20 instances, worst relative error {worst:.1e}; coincident points give 0"))
}

fn c13() -> Check {
    let p = deg5();
    let cvl = critical_data(&p, 0.0).map_err(|e| e.to_string())?.cvl;
    let same = lift_multiset_path(&p, &[cvl.clone(), cvl.clone()]).map_err(|e| e.to_string())?;
    ensure!(same.max_coeff_distance(&p) < 1e-10, "constant path moved p by {:e}", same.max_coeff_distance(&p));

    let ybar = cvl.points.iter().map(|z| z.im).sum::<f64>() / cvl.points.len() as f64;
    let flat = NumericMultiset::new(cvl.points.iter().map(|z| c(z.re, ybar)).collect(), vec![1; 4], cvl.tol).unwrap();
    let q = lift_multiset_path(&p, &[cvl.clone(), flat.clone()]).map_err(|e| e.to_string())?;
    let h = |x: &ComplexPoly| -> Result<_, String> {
        Ok(side_analysis(x, None, 0.0).and_then(|a| a.constellations()).map_err(|e| e.to_string())?.horizontal_stripped)
    };
    ensure!(h(&q)? == h(&p)?, "vertical collapse changed the stripped horizontal constellation");

    let mid = NumericMultiset::new(cvl.points.iter().zip(&flat.points).map(|(a, b)| (a + b) / 2.0).collect(), vec![1; 4], cvl.tol).unwrap();
    let q2 = lift_multiset_path(&p, &[cvl.clone(), mid, flat]).map_err(|e| e.to_string())?;
    ensure!(q.max_coeff_distance(&q2) < 1e-8, "refined path differs by {:e}", q.max_coeff_distance(&q2));

    let cubic = ComplexPoly::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0)]).unwrap();
    let t0 = NumericMultiset::new(vec![c(-2.0, 0.0), c(2.0, 0.0)], vec![1, 1], 1e-9).unwrap();
    let t1 = NumericMultiset::new(vec![c(0.0, 0.0)], vec![2], 1e-9).unwrap();
    let z3 = lift_multiset_path(&cubic, &[t0, t1]).map_err(|e| e.to_string())?;
    let err = z3.max_coeff_distance(&ComplexPoly::power_plus_constant(3, c(0.0, 0.0)));
    ensure!(err < 1e-8, "merge lands {err:e} away from z^3");
    Ok(format!("constant path, collapse invariance, refinement {:.1e}, merge error {err:.1e}", q.max_coeff_distance(&q2)))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 13] = [
        ("Catalan counts", c1, Duration::from_secs(5)),
        ("maximal chains", c2, Duration::from_secs(30)),
        ("Kreweras", c3, Duration::MAX),
        ("d=9 worked example", c4, Duration::MAX),
        ("Hurwitz orbits", c5, Duration::from_secs(60)),
        ("basketballs", c6, Duration::from_secs(60)),
        ("dual braid complex", c7, Duration::from_secs(60)),
        ("rectangle/annulus complexes", c8, Duration::MAX),
        ("deg5 end-to-end", c9, Duration::from_secs(10)),
        ("monodromy anchors", c10, Duration::from_secs(60)),
        ("LL fiber", c11, Duration::from_secs(120)),
        ("theta Jacobian determinant", c12, Duration::from_secs(10)),
        ("path lifting", c13, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let el = t.elapsed();
        let res = match res {
            Ok(s) if el > *budget => Err(format!("{s}; took {el:?}, budget {budget:?}")),
            r => r,
        };
        match res {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({:.2} s)", i + 1, el.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} ({:.2} s)", i + 1, el.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
