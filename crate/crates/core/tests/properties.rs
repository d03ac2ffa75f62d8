use std::collections::BTreeSet;

use ncpoly::complexes::{orthoscheme_distance, orthoscheme_point_of_multiset};
use ncpoly::fiber::{default_starts, fiber_enumerate};
use ncpoly::hurwitz::{minimal_transposition_factorizations, Constellation, Factorization};
use ncpoly::lifting::lift_multiset_path;
use ncpoly::monodromy::{clockwise_boundary, loop_monodromy, side_analysis, standard_labels, PathSpec};
use ncpoly::noncrossing::{enumerate_ncpart, matching_of_partition, NoncrossingPartition, Side};
use ncpoly::partition::{IntegerPartition, SetPartition};
use ncpoly::perm::Permutation;
use ncpoly::poly::{critical_data, ComplexPoly, NumericMultiset, Rectangle, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn monic(coeffs: &[(f64, f64)]) -> ComplexPoly {
    let mut v = vec![c(1.0, 0.0)];
    v.extend(coeffs.iter().map(|&(a, b)| c(a, b)));
    ComplexPoly::new(v).unwrap()
}

fn arb_perm(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle()).prop_map(|v| Permutation::from_one_line(&v).unwrap())
}

fn arb_ncpart(max: usize) -> impl Strategy<Value = NoncrossingPartition> {
    (1..=max).prop_flat_map(|d| {
        let all = enumerate_ncpart(d);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

fn arb_coeffs(d: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), d)
}

/// Brute-force orthoscheme distance: the best matching of coordinates.
fn min_matching_distance(x: &[f64], y: &[f64]) -> f64 {
    fn rec(x: &[f64], y: &mut Vec<f64>, k: usize, best: &mut f64) {
        if k == y.len() {
            let d = x.iter().zip(y.iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            *best = best.min(d);
            return;
        }
        for i in k..y.len() {
            y.swap(k, i);
            rec(x, y, k + 1, best);
            y.swap(k, i);
        }
    }
    let mut best = f64::INFINITY;
    rec(x, &mut y.to_vec(), 0, &mut best);
    best
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn perm_json_round_trip(p in arb_perm(9)) {
        let back: Permutation = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn partition_json_round_trip(p in arb_ncpart(7)) {
        let back: NoncrossingPartition = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(&back, &p);
        let sp: SetPartition = serde_json::from_str(&serde_json::to_string(p.as_set_partition()).unwrap()).unwrap();
        prop_assert_eq!(&sp, p.as_set_partition());
        let m = matching_of_partition(&p, Side::Right);
        let mb = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(m, mb);
    }

    #[test]
    fn integer_partition_json_round_trip(v in proptest::collection::vec(1usize..6, 0..7)) {
        let p = IntegerPartition::new(v).unwrap();
        let back: IntegerPartition = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn poly_and_multiset_json_round_trip(co in arb_coeffs(4), pts in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..5)) {
        let p = monic(&co);
        let back: ComplexPoly = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
        let pts: Vec<C64> = pts.into_iter().map(|(a, b)| c(a, b)).collect();
        let m = NumericMultiset::from_points(&pts, 1e-9);
        let mb: NumericMultiset = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(mb, m);
    }

    #[test]
    fn factorization_json_round_trip(a in arb_perm(6)) {
        let d = a.degree();
        let b = a.inverse().compose(&Permutation::long_cycle(d)).unwrap();
        let f = Factorization::new(vec![a, b]).unwrap();
        let back: Factorization = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(&back, &f);
        let k = Constellation::from_factors(f.factors().to_vec()).unwrap();
        let kb: Constellation = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
        prop_assert_eq!(kb, k);
    }

    #[test]
    fn hurwitz_braid_relations(fs in proptest::collection::vec(arb_perm(5), 4..6), i in 1usize..3) {
        let n = fs.iter().map(|p| p.degree()).max().unwrap();
        // pad every factor to a common degree
        let fs: Vec<Permutation> = fs.into_iter().map(|p| {
            let mut v = p.one_line();
            v.extend(v.len() + 1..=n);
            Permutation::from_one_line(&v).unwrap()
        }).collect();
        let f = Factorization::new(fs).unwrap();
        let a = f.hurwitz_move(i).unwrap().hurwitz_move(i + 1).unwrap().hurwitz_move(i).unwrap();
        let b = f.hurwitz_move(i + 1).unwrap().hurwitz_move(i).unwrap().hurwitz_move(i + 1).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.target(), f.target());
        if f.len() >= i + 3 {
            let x = f.hurwitz_move(i).unwrap().hurwitz_move(i + 2).unwrap();
            let y = f.hurwitz_move(i + 2).unwrap().hurwitz_move(i).unwrap();
            prop_assert_eq!(x, y);
        }
        prop_assert_eq!(f.hurwitz_move(i).unwrap().hurwitz_move_inverse(i).unwrap(), f);
    }

    #[test]
    fn orthoscheme_distance_is_best_matching(
        a in proptest::collection::vec((0.0f64..=1.0, 1usize..3), 1..4),
        b in proptest::collection::vec((0.0f64..=1.0, 1usize..3), 1..4),
    ) {
        let n: usize = a.iter().map(|x| x.1).sum();
        let m: usize = b.iter().map(|x| x.1).sum();
        prop_assume!(n == m);
        let (pa, wa) = orthoscheme_point_of_multiset(&a, (0.0, 1.0)).unwrap();
        let (pb, _) = orthoscheme_point_of_multiset(&b, (0.0, 1.0)).unwrap();
        prop_assert!((wa.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let flat = |v: &[(f64, usize)]| v.iter().flat_map(|&(x, k)| std::iter::repeat_n(x, k)).collect::<Vec<_>>();
        let want = min_matching_distance(&flat(&a), &flat(&b));
        let got = orthoscheme_distance(&pa, &pb).unwrap();
        prop_assert!((got - want).abs() < 1e-12, "{} vs {}", got, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn global_loop_is_the_long_cycle(d in 2usize..7, co in arb_coeffs(6)) {
        let p = monic(&co[..d]);
        let a = side_analysis(&p, None, 0.0).unwrap();
        prop_assert_eq!(&a.global, &Permutation::long_cycle(d));
        let s = a.side_chains().unwrap();
        // regular sides: chains run from discrete to indiscrete
        prop_assert!(s.left.elements()[0].blocks().len() == d);
        prop_assert!(s.left.elements().last().unwrap().blocks().len() == 1);
        let k = a.constellations().unwrap();
        prop_assert_eq!(ncpoly::perm::product(k.vertical.factors()).unwrap(), Permutation::long_cycle(d));
    }

    #[test]
    fn homotopic_loops_agree(d in 2usize..6, co in arb_coeffs(5), bump in 0.05f64..0.5) {
        let p = monic(&co[..d]);
        let cd = critical_data(&p, 0.0).unwrap();
        let r = ncpoly::monodromy::auto_rectangle(&cd).unwrap();
        let pad = 0.1 * r.width().max(r.height());
        let base = c(r.xl - pad, r.yb - pad);
        let fiber = standard_labels(&p, base).unwrap();
        let big = Rectangle::new(r.xl - pad, r.xr + pad, r.yb - pad, r.yt + pad).unwrap();
        // a loop around the whole rectangle and a deformed version with a bulge on the right side
        let plain = clockwise_boundary(&big);
        let w = big.xr - big.xl;
        let bulged = PathSpec::closed(vec![
            c(big.xl, big.yb),
            c(big.xl, big.yt),
            c(big.xr, big.yt),
            c(big.xr + bump * w, 0.5 * (big.yb + big.yt)),
            c(big.xr, big.yb),
        ]).unwrap();
        let a = loop_monodromy(&p, &fiber, &plain).unwrap();
        let b = loop_monodromy(&p, &fiber, &bulged).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn enlarging_the_rectangle_keeps_the_chains(d in 2usize..6, co in arb_coeffs(5), grow in 0.05f64..1.0) {
        let p = monic(&co[..d]);
        let a = side_analysis(&p, None, 0.0).unwrap();
        let r = a.rectangle;
        let bigger = Rectangle::new(r.xl - grow, r.xr + grow, r.yb - grow, r.yt + grow).unwrap();
        let b = side_analysis(&p, Some(bigger), 0.0).unwrap();
        let (sa, sb) = (a.side_chains().unwrap(), b.side_chains().unwrap());
        prop_assert_eq!(sa.left, sb.left);
        prop_assert_eq!(sa.bottom, sb.bottom);
        prop_assert_eq!(sa.right, sb.right);
        prop_assert_eq!(sa.top, sb.top);
    }

    #[test]
    fn lifting_is_stable_under_refinement(co in arb_coeffs(4), shift in (-1.0f64..1.0, -1.0f64..1.0), pieces in 2usize..5) {
        let p = monic(&co);
        let cvl = critical_data(&p, 0.0).unwrap().cvl;
        prop_assume!(cvl.mult.iter().all(|&m| m == 1) && cvl.points.len() == 3);
        let sep = (0..3).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| (cvl.points[i] - cvl.points[j]).norm()).fold(f64::INFINITY, f64::min);
        prop_assume!(sep > 0.3);
        // move one value by a short straight segment
        let dz = c(shift.0, shift.1) * (0.25 * sep);
        let at = |s: f64| {
            let mut pts = cvl.points.clone();
            pts[0] += dz * s;
            NumericMultiset::new(pts, vec![1; 3], cvl.tol).unwrap()
        };
        let coarse = lift_multiset_path(&p, &[at(0.0), at(1.0)]).unwrap();
        let fine: Vec<NumericMultiset> = (0..=pieces).map(|k| at(k as f64 / pieces as f64)).collect();
        let refined = lift_multiset_path(&p, &fine).unwrap();
        prop_assert!(coarse.max_coeff_distance(&refined) < 1e-8, "{}", coarse.max_coeff_distance(&refined));
        prop_assert!(critical_data(&coarse, 0.0).unwrap().cvl.matches(&at(1.0), 1e-8));
    }
}

#[test]
fn fiber_labels_are_minimal_factorizations() {
    for (d, pts) in [(3usize, vec![c(-1.0, 0.3), c(0.8, -0.2)]), (4, vec![c(-1.3, 0.4), c(0.2, -0.9), c(1.7, 0.6)])] {
        let t = NumericMultiset::new(pts, vec![1; d - 1], 1e-9).unwrap();
        let r = fiber_enumerate(&t, d, default_starts(d), 1).unwrap();
        let all: BTreeSet<Factorization> = minimal_transposition_factorizations(&Permutation::long_cycle(d)).into_iter().collect();
        let labels: BTreeSet<Factorization> = r.constellations.iter().map(|k| Factorization::new(k.factors().to_vec()).unwrap()).collect();
        assert_eq!(labels.len(), r.found);
        assert!(labels.is_subset(&all));
        assert_eq!(labels.len() as u64, r.expected);
    }
}
