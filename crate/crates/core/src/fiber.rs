//! Preimages of a generic critical value multiset under the LL map, labelled
//! by their stripped horizontal constellations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hurwitz::Constellation;
use crate::lifting::{damped_newton, CritState};
use crate::monodromy::side_analysis;
use crate::poly::{critical_data, ComplexPoly, NumericMultiset, C64};

pub const DEDUP_RADIUS: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberDiagnostics {
    pub starts_requested: usize,
    pub starts_used: usize,
    pub converged: usize,
    pub dedup_radius: f64,
    /// Phase applied to the target before labelling, when real parts coincide.
    pub rotation: Option<f64>,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberResult {
    pub target: NumericMultiset,
    pub polys: Vec<ComplexPoly>,
    pub constellations: Vec<Constellation>,
    pub found: usize,
    pub expected: u64,
    pub diagnostics: FiberDiagnostics,
}

/// `d^{d-2}`, the degree of the LL map.
pub fn expected_count(d: usize) -> u64 {
    if d < 2 {
        1
    } else {
        (d as u64).pow(d as u32 - 2)
    }
}

pub fn default_starts(d: usize) -> usize {
    200 * expected_count(d) as usize
}

/// `e^{-i phi} q(e^{i phi / d} z)`, which has critical values rotated by `-phi`.
fn unrotate(q: &ComplexPoly, phi: f64) -> ComplexPoly {
    let d = q.degree();
    let mut coeffs: Vec<C64> = q
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c * C64::from_polar(1.0, -phi + phi * (d - i) as f64 / d as f64))
        .collect();
    coeffs[0] = C64::new(1.0, 0.0);
    ComplexPoly::new(coeffs).expect("monic")
}

fn real_parts_distinct(t: &NumericMultiset) -> bool {
    let tol = 1e-6 * (1.0 + t.max_abs());
    let mut re: Vec<f64> = t.points.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    re.windows(2).all(|w| w[1] - w[0] > tol)
}

fn label(q: &ComplexPoly) -> Result<Constellation> {
    Ok(side_analysis(q, None, 0.0)?.constellations()?.horizontal_stripped)
}

fn solve_from(seed: u64, index: u64, d: usize, t: &[C64], radius: f64) -> Option<ComplexPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let k = d - 1;
    let mut z: Vec<C64> = (0..k)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            C64::from_polar(r, rng.random::<f64>() * std::f64::consts::TAU)
        })
        .collect();
    let mean = z.iter().sum::<C64>() / k as f64;
    for w in &mut z {
        *w -= mean;
    }
    let mut x = CritState { z, m: vec![1; k], c: C64::new(0.0, 0.0) };
    x.c = t[0] - x.poly().eval(x.z[0]);
    let sol = damped_newton(&x, t, 200).ok()?;
    if sol.min_separation() < 1e-8 {
        return None;
    }
    Some(sol.poly())
}

/// Multi-start Newton for the monic centred polynomials with critical values `target`.
pub fn fiber_enumerate(target: &NumericMultiset, d: usize, starts: usize, seed: u64) -> Result<FiberResult> {
    if d < 2 {
        return Err(Error::UnsupportedDegree(d));
    }
    if target.size() != d - 1 {
        return Err(Error::InvalidInput(format!("target has {} points, expected {}", target.size(), d - 1)));
    }
    target.validate()?;
    let expected = expected_count(d);
    if target.points.len() == 1 {
        // the unique preimage of an indiscrete target
        let q = ComplexPoly::power_plus_constant(d, target.points[0]);
        let lab = label(&q)?;
        return Ok(FiberResult {
            target: target.clone(),
            polys: vec![q],
            constellations: vec![lab],
            found: 1,
            expected: 1,
            diagnostics: FiberDiagnostics {
                starts_requested: starts,
                starts_used: 0,
                converged: 0,
                dedup_radius: DEDUP_RADIUS,
                rotation: None,
                complete: true,
            },
        });
    }
    if target.mult.iter().any(|&m| m != 1) {
        return Err(Error::InvalidInput("target must be generic (distinct points) or indiscrete".into()));
    }
    let rotation = if real_parts_distinct(target) {
        None
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut phi = 0.0;
        for _ in 0..64 {
            phi = rng.random::<f64>() * std::f64::consts::TAU;
            if real_parts_distinct(&target.rotated(phi)) {
                break;
            }
        }
        Some(phi)
    };
    let work = match rotation {
        Some(phi) => target.rotated(phi),
        None => target.clone(),
    };
    let t = work.points.clone();
    let radius = 2.0 * (1.0 + work.max_abs());
    let scale = 1.0 + work.max_abs();

    let mut polys: Vec<ComplexPoly> = Vec::new();
    let mut used = 0usize;
    let mut converged = 0usize;
    let batch = 64usize;
    while used < starts && (polys.len() as u64) < expected {
        let hi = (used + batch).min(starts);
        let found = run_batch(seed, used as u64..hi as u64, d, &t, radius);
        used = hi;
        for q in found.into_iter().flatten() {
            converged += 1;
            if polys.iter().any(|p| p.max_coeff_distance(&q) <= DEDUP_RADIUS) {
                continue;
            }
            let cvl = critical_data(&q, 0.0)?.cvl;
            if !cvl.matches(&work, 1e-6 * scale) {
                continue;
            }
            polys.push(q);
        }
    }
    let mut labelled: Vec<(ComplexPoly, Constellation)> = Vec::with_capacity(polys.len());
    for q in polys {
        let lab = label(&q)?;
        let q = match rotation {
            Some(phi) => unrotate(&q, phi),
            None => q,
        };
        labelled.push((q, lab));
    }
    labelled.sort_by(|a, b| format!("{:?}", a.1.factors()).cmp(&format!("{:?}", b.1.factors())));
    let found = labelled.len();
    let (polys, constellations): (Vec<_>, Vec<_>) = labelled.into_iter().unzip();
    Ok(FiberResult {
        target: target.clone(),
        polys,
        constellations,
        found,
        expected,
        diagnostics: FiberDiagnostics {
            starts_requested: starts,
            starts_used: used,
            converged,
            dedup_radius: DEDUP_RADIUS,
            rotation,
            complete: found as u64 == expected,
        },
    })
}

#[cfg(feature = "parallel")]
fn run_batch(seed: u64, range: std::ops::Range<u64>, d: usize, t: &[C64], radius: f64) -> Vec<Option<ComplexPoly>> {
    use rayon::prelude::*;
    range.into_par_iter().map(|i| solve_from(seed, i, d, t, radius)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_batch(seed: u64, range: std::ops::Range<u64>, d: usize, t: &[C64], radius: f64) -> Vec<Option<ComplexPoly>> {
    range.map(|i| solve_from(seed, i, d, t, radius)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn cubic_family() {
        let t = NumericMultiset::new(vec![c(-2.0, 0.0), c(2.0, 0.0)], vec![1, 1], 1e-9).unwrap();
        let r = fiber_enumerate(&t, 3, default_starts(3), 0).unwrap();
        assert_eq!(r.found, 3);
        for k in 0..3 {
            let w = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0);
            let want = ComplexPoly::new(vec![c(1.0, 0.0), c(0.0, 0.0), -w * 3.0, c(0.0, 0.0)]).unwrap();
            assert!(r.polys.iter().any(|q| q.max_coeff_distance(&want) < 1e-8), "missing k={k}");
        }
    }

    #[test]
    fn indiscrete_target() {
        let t = NumericMultiset::new(vec![c(1.5, -0.5)], vec![2], 1e-9).unwrap();
        let r = fiber_enumerate(&t, 3, 10, 0).unwrap();
        assert_eq!(r.found, 1);
        assert!(r.polys[0].max_coeff_distance(&ComplexPoly::power_plus_constant(3, c(1.5, -0.5))) < 1e-15);
    }

    #[test]
    fn rotation_handles_shared_real_parts() {
        let t = NumericMultiset::new(vec![c(0.0, -1.0), c(0.0, 1.0)], vec![1, 1], 1e-9).unwrap();
        let r = fiber_enumerate(&t, 3, default_starts(3), 3).unwrap();
        assert!(r.diagnostics.rotation.is_some());
        assert_eq!(r.found, 3);
        for q in &r.polys {
            assert!(critical_data(q, 0.0).unwrap().cvl.matches(&t, 1e-6));
        }
    }

    #[test]
    fn non_generic_target_is_rejected() {
        let t = NumericMultiset::new(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![2, 1], 1e-9).unwrap();
        assert!(fiber_enumerate(&t, 4, 10, 0).is_err());
    }
}
