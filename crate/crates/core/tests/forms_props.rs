mod common;

use common::{random_frame, rng};
use gaussmap::forms::{
    canonical_density, gauss_bonnet_density, gauss_bonnet_fundamentals, generic_pluecker_density,
    kaehler_density, kaehler_kernel, projective_density, PlueckerFormSpec,
};
use gaussmap::geometry::{pluecker_derivatives, JetFrame};
use rand::Rng;

/// Classical Gaussian curvature times area density, from the unit normal
/// and the classical second fundamental form.
fn classical_curvature_density(f: &JetFrame) -> f64 {
    let (a, b) = (f.tangent(0), f.tangent(1));
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let area = cross.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nrm: Vec<f64> = cross.iter().map(|v| v / area).collect();
    let d = |u: Vec<f64>| u.iter().zip(&nrm).map(|(x, y)| x * y).sum::<f64>();
    let (l, m, n) = (d(f.second_vector(0, 0)), d(f.second_vector(0, 1)), d(f.second_vector(1, 1)));
    (l * n - m * m) / area
}

fn transform(f: &JetFrame, jac: impl Fn(usize, usize) -> f64, second: impl Fn(usize, usize, usize) -> f64, x: impl Fn(usize) -> f64) -> JetFrame {
    let (a, p) = (f.ambient_dim(), f.params());
    JetFrame::from_parts(
        f.location().to_vec(),
        (0..a).map(&x).collect(),
        &(0..a).map(|i| (0..p).map(|j| jac(i, j)).collect()).collect::<Vec<_>>(),
        &(0..a)
            .map(|i| (0..p).map(|j| (0..p).map(|k| second(i, j, k)).collect()).collect())
            .collect::<Vec<_>>(),
    )
}

#[test]
fn canonical_surface_density_is_gaussian_curvature() {
    let mut r = rng(1);
    for _ in 0..200 {
        let f = random_frame(&mut r, 2, 3);
        let pv = pluecker_derivatives(&f).unwrap();
        let can = canonical_density(&pv).unwrap();
        let gb = gauss_bonnet_density(&gauss_bonnet_fundamentals(&f).unwrap()).unwrap();
        let classical = classical_curvature_density(&f);
        let scale = can.abs().max(1e-12);
        assert!((can - gb).abs() <= 1e-9 * scale, "{can} vs {gb}");
        assert!((can - classical).abs() <= 1e-9 * scale, "{can} vs {classical}");
    }
}

#[test]
fn canonical_curve_density_is_tangent_winding_integrand() {
    let mut r = rng(2);
    for _ in 0..200 {
        let f = random_frame(&mut r, 1, 2);
        let (dx, dy) = (f.jac(0, 0), f.jac(1, 0));
        let (ddx, ddy) = (f.second(0, 0, 0), f.second(1, 0, 0));
        let expected = (dy * ddx - dx * ddy) / (dx * dx + dy * dy);
        let can = canonical_density(&pluecker_derivatives(&f).unwrap()).unwrap();
        assert!((can - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
    }
}

#[test]
fn generic_spec_reproduces_canonical_density() {
    let mut r = rng(3);
    for &(params, ambient) in &[(1, 2), (2, 3), (3, 4)] {
        let spec = PlueckerFormSpec::canonical(params);
        let text = PlueckerFormSpec::parse(&spec.to_string(), ambient).unwrap();
        for _ in 0..50 {
            let pv = pluecker_derivatives(&random_frame(&mut r, params, ambient)).unwrap();
            let a = canonical_density(&pv).unwrap();
            for s in [&spec, &text] {
                let b = generic_pluecker_density(s, &pv).unwrap();
                assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
            }
        }
    }
}

#[test]
fn canonical_density_is_scale_invariant() {
    let mut r = rng(4);
    for _ in 0..100 {
        let pv = pluecker_derivatives(&random_frame(&mut r, 2, 3)).unwrap();
        let lambda = r.gen_range(0.1..10.0);
        let a = canonical_density(&pv).unwrap();
        let b = canonical_density(&pv.scaled(lambda)).unwrap();
        assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }
}

#[test]
fn kaehler_density_antisymmetric_and_scale_invariant() {
    let mut r = rng(6);
    for _ in 0..100 {
        let ambient = 2 * r.gen_range(1..=3);
        let f = random_frame(&mut r, 2, ambient);
        let k = kaehler_density(&f).unwrap();
        let swapped = transform(&f, |i, j| f.jac(i, 1 - j), |i, j, k| f.second(i, 1 - j, 1 - k), |i| f.x()[i]);
        assert!((kaehler_density(&swapped).unwrap() + k).abs() <= 1e-12 * (1.0 + k.abs()));
        let lambda = r.gen_range(0.1..10.0);
        let scaled = transform(&f, |i, j| lambda * f.jac(i, j), |i, j, k| lambda * f.second(i, j, k), |i| lambda * f.x()[i]);
        assert!((kaehler_density(&scaled).unwrap() - k).abs() <= 1e-12 * (1.0 + k.abs()));
    }
}

#[test]
fn kaehler_vanishes_for_one_complex_coordinate() {
    let mut r = rng(7);
    for _ in 0..100 {
        let f = random_frame(&mut r, 2, 2);
        assert_eq!(kaehler_density(&f).unwrap(), 0.0);
    }
}

#[test]
fn kaehler_kernel_matches_complex_formula() {
    // For C^1 ⊕ C^1 with z = p + i q, the form is
    // i/2 ∂∂̄ log|z|² = (Σ dp∧dq)/|z|² − (Σ p dp + q dq) ∧ (Σ p dq − q dp)/|z|⁴.
    let mut r = rng(8);
    for _ in 0..100 {
        let p: Vec<f64> = (0..4).map(|_| r.gen_range(-1.0..1.0)).collect();
        let dp: Vec<[f64; 2]> = (0..4).map(|_| [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)]).collect();
        let nc = 2;
        let r2: f64 = p.iter().map(|v| v * v).sum();
        let w = |a: [f64; 2], b: [f64; 2]| a[0] * b[1] - a[1] * b[0];
        let mut sum_dpdq = 0.0;
        let (mut alpha, mut beta) = ([0.0; 2], [0.0; 2]);
        for j in 0..nc {
            let (x, y) = (p[j], p[j + nc]);
            let (dx, dy) = (dp[j], dp[j + nc]);
            sum_dpdq += w(dx, dy);
            for s in 0..2 {
                alpha[s] += x * dx[s] + y * dy[s];
                beta[s] += x * dy[s] - y * dx[s];
            }
        }
        let expected = sum_dpdq / r2 - w(alpha, beta) / (r2 * r2);
        let got = kaehler_kernel(&p, &dp);
        assert!((got - expected).abs() <= 1e-12 * (1.0 + expected.abs()), "{got} vs {expected}");
    }
}

#[test]
fn projective_forms_are_scale_invariant() {
    let mut r = rng(9);
    for _ in 0..100 {
        let pv = pluecker_derivatives(&random_frame(&mut r, 2, 3)).unwrap();
        let pv = gaussmap::geometry::PlueckerVector { intrinsic: 1, ..pv };
        let lambda = r.gen_range(0.1..10.0);
        for i in 0..3 {
            let a = projective_density(i, &pv).unwrap();
            let b = projective_density(i, &pv.scaled(lambda)).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }
}
