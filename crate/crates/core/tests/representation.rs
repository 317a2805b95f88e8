mod common;

use common::{gauss_legendre, random_keypoints, rng};
use ecir::repr::lagrange::{basis_value, interpolant_monomial};
use ecir::repr::{
    horner, lagrange_basis, select_keypoints, ExposureInterval, IntensityPoly, KeypointSet,
};
use proptest::prelude::*;
use rand::Rng;

fn unit() -> ExposureInterval {
    ExposureInterval::new(-0.5, 0.5).unwrap()
}

/// Exhaustive nearest-assignment: for every pivot scan all distinct events,
/// keep the closest (earliest on ties), and only move if nobody took it.
fn brute_force_keypoints(events: &[f64], interval: ExposureInterval, n: usize) -> Vec<f64> {
    let mut distinct: Vec<f64> = Vec::new();
    for &e in events {
        if !distinct.contains(&e) {
            distinct.push(e);
        }
    }
    distinct.sort_by(f64::total_cmp);
    let mut taken = vec![false; distinct.len()];
    let mut out = Vec::new();
    for i in 0..n {
        let pivot = interval.start() + (i as f64 + 0.5) * interval.duration() / n as f64;
        let mut best: Option<usize> = None;
        for (j, &e) in distinct.iter().enumerate() {
            let better = match best {
                None => true,
                Some(b) => (e - pivot).abs() < (distinct[b] - pivot).abs(),
            };
            if better {
                best = Some(j);
            }
        }
        match best {
            Some(j) if !taken[j] => {
                taken[j] = true;
                out.push(distinct[j]);
            }
            _ => out.push(pivot),
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

#[test]
fn keypoints_for_sparse_events() {
    let events = [-0.45, -0.44, 0.31];
    let oracle = brute_force_keypoints(&events, unit(), 5);
    let frozen = [-0.44, -0.2, 0.2, 0.31, 0.4];
    for (o, f) in oracle.iter().zip(frozen) {
        assert!((o - f).abs() < 1e-15, "{oracle:?}");
    }
    let got = select_keypoints(&events, unit(), 5).unwrap();
    for (g, f) in got.timestamps().iter().zip(frozen) {
        assert!((g - f).abs() < 1e-15, "{:?}", got.timestamps());
    }
}

#[test]
fn keypoints_match_brute_force_on_random_events() {
    let mut r = rng(11);
    let iv = ExposureInterval::centered(0.12).unwrap();
    for _ in 0..500 {
        let count = r.random_range(0..25);
        let mut events: Vec<f64> = (0..count)
            .map(|_| iv.start() + r.random::<f64>() * iv.duration())
            .collect();
        events.sort_by(f64::total_cmp);
        let n = r.random_range(2..12);
        let want = brute_force_keypoints(&events, iv, n);
        if want.windows(2).any(|w| w[1] <= w[0]) {
            continue; // collisions are perturbed; covered by the property below
        }
        let got = select_keypoints(&events, iv, n).unwrap();
        for (g, w) in got.timestamps().iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "{:?} vs {want:?}", got.timestamps());
        }
    }
}

#[test]
fn spec_basis_and_derivative_examples() {
    let iv = ExposureInterval::new(-1.0, 1.0).unwrap();
    let k = KeypointSet::new(vec![-1.0, 1.0], iv).unwrap();
    assert_eq!(lagrange_basis(&k, 0, 0.0).unwrap(), 0.5);
    assert_eq!(lagrange_basis(&k, 1, 0.0).unwrap(), 0.5);
    let p = IntensityPoly::new(k, vec![0.0, 2.0], 0.0).unwrap();
    assert_eq!(p.eval_derivative(0.0), 1.0);
}

/// Primitive via Gauss-Legendre quadrature of the Lagrange-form derivative
/// from the interval midpoint, exact for polynomial integrands.
fn quadrature_primitive(p: &IntensityPoly, t: f64) -> f64 {
    let iv = p.interval();
    let mid = 0.5 * (iv.start() + iv.end());
    let half = 0.5 * (t - mid);
    let centre = 0.5 * (t + mid);
    let integral: f64 = gauss_legendre(p.degree().max(2))
        .iter()
        .map(|&(x, w)| w * p.eval_derivative(centre + half * x))
        .sum();
    p.integration_constant() + half * integral
}

#[test]
fn primitive_matches_quadrature_and_monomial_form() {
    let mut r = rng(5);
    let iv = ExposureInterval::centered(0.12).unwrap();
    for _ in 0..200 {
        let ts = random_keypoints(&mut r, 10, iv, 0.03);
        let vals: Vec<f64> = (0..10).map(|_| r.random_range(-8.0..8.0)).collect();
        let p = IntensityPoly::new(KeypointSet::new(ts, iv).unwrap(), vals, r.random()).unwrap();
        let m = p.to_monomial();
        assert_eq!(m.degree(), 10);
        for _ in 0..100 {
            let t = iv.start() + r.random::<f64>() * iv.duration();
            let direct = p.eval_primitive(t);
            assert!((direct - m.eval(t)).abs() < 1e-8);
            assert!((direct - quadrature_primitive(&p, t)).abs() < 1e-8);
            assert!((p.eval_derivative(t) - m.eval_derivative(t)).abs() < 1e-8 * 16.0);
        }
    }
}

#[test]
fn blur_constant_against_quadezoid() {
    let mut r = rng(9);
    let iv = ExposureInterval::centered(0.12).unwrap();
    for _ in 0..100 {
        let n = r.random_range(2..=10);
        let ts = random_keypoints(&mut r, n, iv, 0.02);
        let vals: Vec<f64> = (0..n).map(|_| r.random_range(-5.0..5.0)).collect();
        let target = r.random::<f64>();
        let p = IntensityPoly::new(KeypointSet::new(ts, iv).unwrap(), vals, 0.0)
            .unwrap()
            .constrained_to_blur(target);
        assert!((p.blur_mean() - target).abs() < 1e-9);
        // Composite Simpson over 10,000 panels; quadezoid end errors are too
        // large when the exquadolated derivative blows up near the edges.
        let steps = 10_000;
        let h = iv.duration() / steps as f64;
        let quad: f64 = (0..=steps)
            .map(|k| {
                let w = if k == 0 || k == steps {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * quadrature_primitive(&p, iv.start() + k as f64 * h)
            })
            .sum::<f64>()
            * h
            / 3.0
            / iv.duration();
        assert!((quad - target).abs() < 1e-6, "{quad} {target}");
    }
}

#[test]
fn monomial_coefficients_match_newton_interpolation() {
    let mut r = rng(3);
    for _ in 0..100 {
        let n = r.random_range(2..=10);
        let iv = ExposureInterval::new(-1.0, 1.0).unwrap();
        let nodes = random_keypoints(&mut r, n, iv, 0.05);
        let vals: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let c = interpolant_monomial(&nodes, &vals);
        for (x, v) in nodes.iter().zip(&vals) {
            assert!((horner(&c, *x) - v).abs() < 1e-9);
        }
    }
}

proptest! {
    #[test]
    fn partition_of_unity_and_kronecker(
        raw in proptest::collection::vec(-1.0f64..1.0, 2..=10),
        probe in -1.0f64..1.0,
    ) {
        let mut nodes = raw;
        nodes.sort_by(f64::total_cmp);
        nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        prop_assume!(nodes.len() >= 2);
        let n = nodes.len();
        let values: Vec<f64> = (0..n).map(|i| basis_value(&nodes, i, probe)).collect();
        let sum: f64 = values.iter().sum();
        // Close nodes make individual bases huge; scale by the Lebesgue sum.
        let lebesgue: f64 = values.iter().map(|v| v.abs()).sum();
        prop_assert!((sum - 1.0).abs() < 1e-9 * lebesgue.max(1.0), "sum {}", sum);
        for i in 0..n {
            for (j, &x) in nodes.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((basis_value(&nodes, i, x) - want).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn interpolation_hits_keypoints(
        raw in proptest::collection::vec(-0.06f64..0.06, 2..=10),
        seed in any::<u64>(),
    ) {
        let iv = ExposureInterval::centered(0.12).unwrap();
        let mut ts = raw;
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|a, b| (*a - *b).abs() < 1e-4);
        prop_assume!(ts.len() >= 2);
        let mut r = rng(seed);
        let vals: Vec<f64> = ts.iter().map(|_| r.random_range(-3.0..3.0)).collect();
        let p = IntensityPoly::new(KeypointSet::new(ts.clone(), iv).unwrap(), vals.clone(), 0.2).unwrap();
        for (t, v) in ts.iter().zip(&vals) {
            prop_assert!((p.eval_derivative(*t) - v).abs() < 1e-10);
        }
    }

    #[test]
    fn selected_keypoints_always_valid(
        picks in proptest::collection::vec(0usize..6, 0..30),
        n in 2usize..12,
    ) {
        // Heavy duplication, including both interval ends.
        let iv = unit();
        let palette = [-0.5, -0.5, 0.0, 0.1, 0.5, 0.5];
        let mut events: Vec<f64> = picks.iter().map(|&i| palette[i]).collect();
        events.sort_by(f64::total_cmp);
        let k = select_keypoints(&events, iv, n).unwrap();
        prop_assert_eq!(k.len(), n);
        prop_assert!(k.timestamps().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(k.timestamps().iter().all(|&t| iv.contains(t)));
    }
}
