mod common;

use std::f64::consts::PI;

use common::rng;
use ncprob::bell::{
    bell_correlation, bell_factor, bell_factor_from_tables, bell_joint, inner, norm_sqr, sequential_probs,
    spin_observable, BellAngles, UP,
};
use rand::Rng;

const TOL: f64 = 1e-12;

#[test]
fn spin_observables() {
    let mut r = rng(5);
    for _ in 0..100 {
        let (t, p) = (r.random_range(-PI..PI), r.random_range(-PI..PI));
        let s = spin_observable(t, p);
        let sq = |i: usize, j: usize| s.matrix[i][0] * s.matrix[0][j] + s.matrix[i][1] * s.matrix[1][j];
        assert!((sq(0, 0).re - 1.0).abs() < TOL && sq(0, 1).norm() < TOL && (sq(1, 1).re - 1.0).abs() < TOL);
        assert!((s.matrix[0][0] + s.matrix[1][1]).norm() < TOL);
        assert!((s.matrix[0][1] - s.matrix[1][0].conj()).norm() < TOL);
        let (sp, so) = (s.apply(&s.psi), s.apply(&s.omega));
        assert!((sp[0] - s.psi[0]).norm() < TOL && (sp[1] - s.psi[1]).norm() < TOL);
        assert!((so[0] + s.omega[0]).norm() < TOL && (so[1] + s.omega[1]).norm() < TOL);
        assert!((norm_sqr(&s.psi) - 1.0).abs() < TOL && inner(&s.psi, &s.omega).norm() < TOL);
    }
}

#[test]
fn joint_tables_and_correlations() {
    for i in 0..100 {
        let t1 = -PI + 2.0 * PI * i as f64 / 100.0;
        let t2 = 0.37 * i as f64;
        let t = bell_joint(t1, t2);
        let swapped = bell_joint(t2, t1);
        assert!(t.iter().flatten().all(|&p| p >= 0.0));
        assert!((t.iter().flatten().sum::<f64>() - 1.0).abs() < TOL);
        for a in 0..2 {
            for b in 0..2 {
                assert!((t[a][b] - swapped[b][a]).abs() < TOL);
            }
        }
        assert!((bell_correlation(t1, t2) + (t1 - t2).cos()).abs() < TOL);
    }
}

#[test]
fn factor_matches_tables() {
    let mut r = rng(6);
    for _ in 0..50 {
        let a = BellAngles::new(r.random(), r.random(), r.random_range(0.0..6.0), r.random_range(0.0..6.0));
        assert!((bell_factor(&a) - bell_factor_from_tables(&a)).abs() < TOL);
    }
}

#[test]
fn sequential_marginals() {
    let mut r = rng(7);
    for len in 1..=4 {
        let angles: Vec<f64> = (0..len).map(|_| r.random_range(-PI..PI)).collect();
        let long = sequential_probs(&UP, &angles).unwrap();
        let short = sequential_probs(&UP, &angles[..len - 1]).unwrap();
        assert!((long.values().sum::<f64>() - 1.0).abs() < TOL);
        for (prefix, p) in &short {
            let sum: f64 = long.iter().filter(|(k, _)| k.starts_with(prefix.as_str())).map(|(_, v)| v).sum();
            assert!((sum - p).abs() < TOL);
        }
    }
}
