#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use gaussmap::cli::{load_manifest, Manifest};
use gaussmap::geometry::{ImmersionChart, JetFrame};
use gaussmap::integrate::{DomainSpec, VarDomain};
use gaussmap::polyhedral::SimplicialImmersion;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn manifest(name: &str) -> Manifest {
    load_manifest(&data(name)).unwrap()
}

pub fn chart(name: &str) -> ImmersionChart {
    manifest(name).immersion().unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Frame with independent uniform entries in `[-1, 1]`.
pub fn random_frame(rng: &mut StdRng, params: usize, ambient: usize) -> JetFrame {
    let mut u = || rng.gen_range(-1.0..1.0);
    let t = (0..params).map(|_| u()).collect();
    let x = (0..ambient).map(|_| u()).collect();
    let jac: Vec<Vec<f64>> = (0..ambient).map(|_| (0..params).map(|_| u()).collect()).collect();
    let second: Vec<Vec<Vec<f64>>> = (0..ambient)
        .map(|_| {
            let mut h = vec![vec![0.0; params]; params];
            for j in 0..params {
                for k in j..params {
                    let v = u();
                    h[j][k] = v;
                    h[k][j] = v;
                }
            }
            h
        })
        .collect();
    JetFrame::from_parts(t, x, &jac, &second)
}

/// Compose every coordinate with the ambient map `y ↦ y + ε·sin(a·y + b)`
/// (one random `a, b` per coordinate). For small `ε` this is a
/// diffeomorphism near the image, so closedness and the immersion property
/// are preserved.
pub fn ambient_perturbation(chart: &ImmersionChart, rng: &mut StdRng, eps: f64) -> ImmersionChart {
    let coords: Vec<String> = chart.coords().iter().map(|c| format!("({c})")).collect();
    let perturbed: Vec<String> = coords
        .iter()
        .map(|xi| {
            let arg: Vec<String> = coords
                .iter()
                .map(|xj| format!("{:?}*{xj}", rng.gen_range(-1.0..1.0)))
                .collect();
            format!("{xi} + {eps:?}*sin({} + {:?})", arg.join(" + "), rng.gen_range(0.0..6.0))
        })
        .collect();
    let refs: Vec<&str> = perturbed.iter().map(String::as_str).collect();
    ImmersionChart::parse(chart.intrinsic_dim(), &refs, chart.domain().clone()).unwrap()
}

/// Turning of a closed polygon sampled densely along a plane curve:
/// the sum of signed angles between consecutive chords.
pub fn polyline_turning(x: impl Fn(f64) -> [f64; 2], samples: usize) -> f64 {
    let pts: Vec<[f64; 2]> = (0..samples)
        .map(|i| x(2.0 * std::f64::consts::PI * i as f64 / samples as f64))
        .collect();
    let mut total = 0.0;
    for i in 0..samples {
        let (a, b, c) = (pts[i], pts[(i + 1) % samples], pts[(i + 2) % samples]);
        let (u, v) = ([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]);
        total += (u[0] * v[1] - u[1] * v[0]).atan2(u[0] * v[0] + u[1] * v[1]);
    }
    total
}

pub fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Convex hull by testing every triple against all other points.
pub fn brute_force_hull(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut faces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = cross(&diff(&points[j], &points[i]), &diff(&points[k], &points[i]));
                let (mut pos, mut neg) = (false, false);
                for (l, p) in points.iter().enumerate() {
                    if l == i || l == j || l == k {
                        continue;
                    }
                    let s: f64 = diff(p, &points[i]).iter().zip(&nrm).map(|(a, b)| a * b).sum();
                    if s > 0.0 { pos = true } else { neg = true }
                    if pos && neg {
                        break;
                    }
                }
                if !pos {
                    faces.push(vec![i, j, k]);
                } else if !neg {
                    faces.push(vec![i, k, j]);
                }
            }
        }
    }
    faces
}

pub fn random_sphere_points(r: &mut StdRng, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| loop {
            let p: Vec<f64> = (0..3).map(|_| r.gen_range(-1.0..1.0)).collect();
            let l = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            if l > 0.1 && l < 1.0 {
                break p.iter().map(|v| v / l).collect();
            }
        })
        .collect()
}

pub fn torus_mesh(a: usize, b: usize) -> SimplicialImmersion {
    let mut v = Vec::new();
    for i in 0..a {
        for j in 0..b {
            let (u, w) = (2.0 * PI * i as f64 / a as f64, 2.0 * PI * j as f64 / b as f64);
            v.push(vec![(2.0 + w.cos()) * u.cos(), (2.0 + w.cos()) * u.sin(), w.sin()]);
        }
    }
    let id = |i: usize, j: usize| (i % a) * b + (j % b);
    let mut cells = Vec::new();
    for i in 0..a {
        for j in 0..b {
            cells.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            cells.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    SimplicialImmersion::new(2, 3, v, cells).unwrap()
}

pub fn combinatorial_euler(mesh: &SimplicialImmersion) -> i64 {
    let mut edges = std::collections::BTreeSet::new();
    for c in mesh.cells() {
        for i in 0..3 {
            let (a, b) = (c[i], c[(i + 1) % 3]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    mesh.vertices().len() as i64 - edges.len() as i64 + mesh.cells().len() as i64
}

/// Split every triangle into four through its edge midpoints.
pub fn subdivide(mesh: &SimplicialImmersion) -> SimplicialImmersion {
    let mut v = mesh.vertices().to_vec();
    let mut mid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut midpoint = |a: usize, b: usize, v: &mut Vec<Vec<f64>>| {
        *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
            v.push(v[a].iter().zip(&v[b]).map(|(x, y)| 0.5 * (x + y)).collect());
            v.len() - 1
        })
    };
    let mut cells = Vec::new();
    for c in mesh.cells() {
        let (a, b, d) = (c[0], c[1], c[2]);
        let ab = midpoint(a, b, &mut v);
        let bd = midpoint(b, d, &mut v);
        let da = midpoint(d, a, &mut v);
        cells.extend([vec![a, ab, da], vec![ab, b, bd], vec![da, bd, d], vec![ab, bd, da]]);
    }
    SimplicialImmersion::new(2, 3, v, cells).unwrap()
}

/// Chart whose coordinates are random trigonometric sums.
pub fn random_trig_chart(rng: &mut StdRng, n: usize, ambient: usize) -> ImmersionChart {
    let coords: Vec<String> = (0..ambient)
        .map(|_| {
            (0..3)
                .map(|_| {
                    let args: Vec<String> = (1..=n)
                        .map(|j| format!("{}*t{j}", rng.gen_range(-2i32..=2)))
                        .collect();
                    let f = if rng.gen_bool(0.5) { "sin" } else { "cos" };
                    format!("{:?}*{f}({} + {:?})", rng.gen_range(-1.0..1.0), args.join(" + "), rng.gen_range(0.0..1.0))
                })
                .collect::<Vec<_>>()
                .join(" + ")
        })
        .collect();
    let refs: Vec<&str> = coords.iter().map(String::as_str).collect();
    let dom = DomainSpec::new(vec![VarDomain::periodic(0.0, 2.0 * PI); n]).unwrap();
    ImmersionChart::parse(n, &refs, dom).unwrap()
}
