//! Discrete invariants of simplicial immersions: polygon exterior angles,
//! exterior 2-angles with link curvatures, and an experimental exterior
//! 3-angle for 3-manifold meshes in `R^4`.
//!
//! All angles come from `atan2(|u ∧ v|, u · v)`; no arccosines of
//! normalized dot products.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::{certify, normalization_constant, IntegralResult};
use crate::linalg::{angle_between, det, dot, norm, sub, wedge_norm};

/// Relative threshold below which a cell counts as degenerate.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// Tolerance for certifying polyhedral totals.
pub const POLY_TOL_CERT: f64 = 1e-9;

/// Signed turning angle at each vertex of a closed polygon, in `(−π, π]`.
pub fn polygon_exterior_angles(points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Precondition(format!(
            "a closed polygon needs at least 3 vertices, got {n}"
        )));
    }
    if let Some(p) = points.iter().find(|p| p.len() != 2) {
        return Err(Error::DimensionMismatch(format!(
            "polygon vertices must be planar, got {} coordinates",
            p.len()
        )));
    }
    let edges: Vec<Vec<f64>> = (0..n).map(|i| sub(&points[(i + 1) % n], &points[i])).collect();
    if let Some(i) = edges.iter().position(|e| norm(e) == 0.0) {
        return Err(Error::ZeroLengthEdge { vertex: i });
    }
    Ok((0..n)
        .map(|i| {
            let (u, v) = (&edges[(i + n - 1) % n], &edges[i]);
            let cross = u[0] * v[1] - u[1] * v[0];
            cross.atan2(dot(u, v))
        })
        .collect())
}

/// A simplicial complex of dimension `m` with vertex positions in
/// `R^ambient`, plus the vertex-to-cell incidence.
#[derive(Debug, Clone)]
pub struct SimplicialImmersion {
    m: usize,
    ambient: usize,
    vertices: Vec<Vec<f64>>,
    cells: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
}

impl SimplicialImmersion {
    /// Validate indices, coordinate lengths and non-degeneracy of every cell.
    pub fn new(
        m: usize,
        ambient: usize,
        vertices: Vec<Vec<f64>>,
        cells: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if !(1..=3).contains(&m) || ambient < m {
            return Err(Error::DimensionMismatch(format!(
                "unsupported mesh dimension {m} in R^{ambient}"
            )));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vertex has {} coordinates, expected {ambient}",
                v.len()
            )));
        }
        let mut incident = vec![Vec::new(); vertices.len()];
        for (c, cell) in cells.iter().enumerate() {
            if cell.len() != m + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "cell {c} has {} vertices, expected {}",
                    cell.len(),
                    m + 1
                )));
            }
            for &v in cell {
                if v >= vertices.len() {
                    return Err(Error::IndexOutOfRange {
                        index: v,
                        len: vertices.len(),
                    });
                }
                incident[v].push(c);
            }
        }
        let mesh = SimplicialImmersion {
            m,
            ambient,
            vertices,
            cells,
            incident,
        };
        for c in 0..mesh.cells.len() {
            mesh.check_cell(c)?;
        }
        Ok(mesh)
    }

    fn check_cell(&self, c: usize) -> Result<()> {
        let cell = &self.cells[c];
        let o = &self.vertices[cell[0]];
        let edges: Vec<Vec<f64>> = cell[1..].iter().map(|&v| sub(&self.vertices[v], o)).collect();
        let scale: f64 = edges.iter().map(|e| norm(e)).product();
        let volume = gram_volume(&edges);
        if volume > DEGENERACY_EPS * scale && scale > 0.0 {
            return Ok(());
        }
        Err(match self.m {
            1 => Error::ZeroLengthEdge { vertex: cell[0] },
            2 => Error::DegenerateTriangle { cell: c },
            _ => Error::DegenerateTetrahedron,
        })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Cells containing `v`.
    pub fn star(&self, v: usize) -> Result<&[usize]> {
        self.incident
            .get(v)
            .map(Vec::as_slice)
            .ok_or(Error::IndexOutOfRange {
                index: v,
                len: self.vertices.len(),
            })
    }

    /// Same complex with moved vertices.
    pub fn with_vertices(&self, vertices: Vec<Vec<f64>>) -> Result<Self> {
        SimplicialImmersion::new(self.m, self.ambient, vertices, self.cells.clone())
    }

    /// Fails with [`Error::OpenMesh`] unless every codimension-one face lies
    /// in exactly two cells.
    pub fn check_closed(&self) -> Result<()> {
        let mut faces: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for cell in &self.cells {
            for skip in 0..cell.len() {
                let mut face: Vec<usize> = cell
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                face.sort_unstable();
                *faces.entry(face).or_default() += 1;
            }
        }
        match faces.into_iter().find(|(_, count)| *count != 2) {
            Some((edge, count)) => Err(Error::OpenMesh { edge, count }),
            None => Ok(()),
        }
    }

    /// Link vertices of `v` in cyclic order, for surfaces.
    pub fn link_cycle(&self, v: usize) -> Result<Vec<usize>> {
        self.require_dim(2)?;
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &c in self.star(v)? {
            let others: Vec<usize> = self.cells[c].iter().copied().filter(|&u| u != v).collect();
            adj.entry(others[0]).or_default().push(others[1]);
            adj.entry(others[1]).or_default().push(others[0]);
        }
        if adj.is_empty() {
            return Err(Error::LinkNotSphere {
                vertex: v,
                reason: "vertex lies in no triangle".into(),
            });
        }
        if adj.values().any(|n| n.len() == 1) {
            return Err(Error::BoundaryVertex { vertex: v });
        }
        if adj.values().any(|n| n.len() != 2) {
            return Err(Error::LinkNotSphere {
                vertex: v,
                reason: "link vertex shared by more than two star triangles".into(),
            });
        }
        let start = *adj.keys().next().expect("non-empty link");
        let mut cycle = vec![start];
        let mut prev = start;
        let mut cur = adj[&start][0];
        while cur != start {
            cycle.push(cur);
            let next = if adj[&cur][0] == prev { adj[&cur][1] } else { adj[&cur][0] };
            prev = cur;
            cur = next;
        }
        if cycle.len() != adj.len() {
            return Err(Error::LinkNotSphere {
                vertex: v,
                reason: format!("link splits into several cycles ({} of {} vertices in the first)", cycle.len(), adj.len()),
            });
        }
        Ok(cycle)
    }

    /// Checks that the link of `v` in a 3-complex is a connected closed
    /// surface with Euler characteristic 2, returning its triangles.
    pub fn link_sphere(&self, v: usize) -> Result<Vec<[usize; 3]>> {
        self.require_dim(3)?;
        let tris: Vec<[usize; 3]> = self
            .star(v)?
            .iter()
            .map(|&c| {
                let o: Vec<usize> = self.cells[c].iter().copied().filter(|&u| u != v).collect();
                [o[0], o[1], o[2]]
            })
            .collect();
        let not_sphere = |reason: String| Error::LinkNotSphere { vertex: v, reason };
        if tris.is_empty() {
            return Err(not_sphere("vertex lies in no tetrahedron".into()));
        }
        let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut verts = BTreeSet::new();
        for t in &tris {
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                *edges.entry((a.min(b), a.max(b))).or_default() += 1;
                verts.insert(a);
            }
        }
        if let Some((e, c)) = edges.iter().find(|(_, &c)| c != 2) {
            return Err(if *c == 1 {
                Error::BoundaryVertex { vertex: v }
            } else {
                not_sphere(format!("link edge {e:?} lies in {c} triangles"))
            });
        }
        // connectivity through shared edges
        let mut seen = vec![false; tris.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for (j, t) in tris.iter().enumerate() {
                if !seen[j] && shares_edge(&tris[i], t) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(not_sphere("link is disconnected".into()));
        }
        let chi = verts.len() as i64 - edges.len() as i64 + tris.len() as i64;
        if chi != 2 {
            return Err(not_sphere(format!("link has Euler characteristic {chi}")));
        }
        Ok(tris)
    }

    fn require_dim(&self, m: usize) -> Result<()> {
        if self.m == m {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "operation needs a {m}-dimensional mesh, got dimension {}",
                self.m
            )))
        }
    }

    /// Vertex positions of an edge cycle, for 1-dimensional meshes whose
    /// edges `[a, b]` are oriented head to tail.
    pub fn polygon(&self) -> Result<Vec<Vec<f64>>> {
        self.require_dim(1)?;
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        for (c, e) in self.cells.iter().enumerate() {
            if next.insert(e[0], e[1]).is_some() {
                return Err(Error::Format {
                    line: c + 1,
                    message: format!("vertex {} starts two edges", e[0]),
                });
            }
        }
        let start = self.cells.first().map(|e| e[0]).ok_or_else(|| {
            Error::Precondition("polygon has no edges".into())
        })?;
        let mut order = vec![start];
        let mut cur = start;
        loop {
            cur = *next.get(&cur).ok_or(Error::OpenMesh {
                edge: vec![cur],
                count: 1,
            })?;
            if cur == start {
                break;
            }
            if order.len() > self.cells.len() {
                return Err(Error::Precondition("edges do not form a single cycle".into()));
            }
            order.push(cur);
        }
        if order.len() != self.cells.len() {
            return Err(Error::Precondition("edges do not form a single cycle".into()));
        }
        Ok(order.iter().map(|&v| self.vertices[v].clone()).collect())
    }
}

fn shares_edge(a: &[usize; 3], b: &[usize; 3]) -> bool {
    a.iter().filter(|v| b.contains(v)).count() == 2
}

/// `k`-volume (times `k!`) of the parallelotope spanned by `edges`.
fn gram_volume(edges: &[Vec<f64>]) -> f64 {
    let k = edges.len();
    let g: Vec<f64> = (0..k * k).map(|i| dot(&edges[i / k], &edges[i % k])).collect();
    match k {
        1 => g[0].sqrt(),
        2 => wedge_norm(&edges[0], &edges[1]),
        _ => det(&g, k).max(0.0).sqrt(),
    }
}

/// Angles of one star triangle: at the centre vertex and at the two link
/// vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarTriangle {
    pub cell: usize,
    /// Link vertices of the triangle.
    pub link: [usize; 2],
    /// Angle at the centre vertex.
    pub alpha: f64,
    /// Angles at `link[0]` and `link[1]`.
    pub at_link: [f64; 2],
}

impl StarTriangle {
    pub fn angle_at(&self, mu: usize) -> Option<f64> {
        self.link.iter().position(|&l| l == mu).map(|i| self.at_link[i])
    }
}

/// The two angles at a link vertex `μ` from the star triangles sharing the
/// edge to the centre.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkAngles {
    pub mu: usize,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleData {
    pub vertex: usize,
    pub triangles: Vec<StarTriangle>,
    /// In cyclic link order.
    pub link: Vec<LinkAngles>,
}

fn triangle_angles(a: &[f64], b: &[f64], c: &[f64]) -> [f64; 3] {
    [
        angle_between(&sub(b, a), &sub(c, a)),
        angle_between(&sub(a, b), &sub(c, b)),
        angle_between(&sub(a, c), &sub(b, c)),
    ]
}

/// All triangle angles in the star of `v`.
pub fn star_angles(mesh: &SimplicialImmersion, v: usize) -> Result<AngleData> {
    let cycle = mesh.link_cycle(v)?;
    let triangles: Vec<StarTriangle> = mesh
        .star(v)?
        .iter()
        .map(|&c| {
            let cell = &mesh.cells[c];
            let pos = cell.iter().position(|&u| u == v).expect("v in its star");
            let (l0, l1) = (cell[(pos + 1) % 3], cell[(pos + 2) % 3]);
            let x = &mesh.vertices;
            let [alpha, b0, b1] = triangle_angles(&x[v], &x[l0], &x[l1]);
            StarTriangle {
                cell: c,
                link: [l0, l1],
                alpha,
                at_link: [b0, b1],
            }
        })
        .collect();
    let link = cycle
        .iter()
        .map(|&mu| {
            let mut angles = triangles.iter().filter_map(|t| t.angle_at(mu));
            let beta = angles.next().expect("closed link");
            let gamma = angles.next().expect("closed link");
            LinkAngles { mu, beta, gamma }
        })
        .collect();
    Ok(AngleData {
        vertex: v,
        triangles,
        link,
    })
}

/// `K_1(μ) = π − (β + γ)`: the angle by which the star at `μ` falls short
/// of a straight angle.
pub fn link_curvature_k1(mesh: &SimplicialImmersion, v: usize, mu: usize) -> Result<f64> {
    let data = star_angles(mesh, v)?;
    data.link
        .iter()
        .find(|l| l.mu == mu)
        .map(|l| PI - (l.beta + l.gamma))
        .ok_or_else(|| Error::Precondition(format!("vertex {mu} is not in the link of {v}")))
}

/// Exterior 2-angle `2π − Σ α` and its link-curvature form `2π − Σ K_1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exterior2 {
    pub vertex: usize,
    pub value: f64,
    pub via_link: f64,
    /// `(μ, K_1(μ))` in cyclic link order.
    pub link_curvatures: Vec<(usize, f64)>,
}

pub fn exterior_angle_2_detail(mesh: &SimplicialImmersion, v: usize) -> Result<Exterior2> {
    let data = star_angles(mesh, v)?;
    let value = 2.0 * PI - data.triangles.iter().map(|t| t.alpha).sum::<f64>();
    let link_curvatures: Vec<(usize, f64)> = data
        .link
        .iter()
        .map(|l| (l.mu, PI - (l.beta + l.gamma)))
        .collect();
    let via_link = 2.0 * PI - link_curvatures.iter().map(|(_, k)| k).sum::<f64>();
    Ok(Exterior2 {
        vertex: v,
        value,
        via_link,
        link_curvatures,
    })
}

pub fn exterior_angle_2(mesh: &SimplicialImmersion, v: usize) -> Result<f64> {
    Ok(exterior_angle_2_detail(mesh, v)?.value)
}

/// Named certification of a total against one constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certification {
    pub constant_name: String,
    pub result: IntegralResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyhedralReport {
    pub dim: usize,
    /// `E_m` at each vertex, indexed by vertex.
    pub per_vertex: Vec<f64>,
    pub total: f64,
    /// The first entry is the primary certification.
    pub certifications: Vec<Certification>,
    pub kappa: Option<i64>,
    pub chi: Option<i64>,
    pub experimental: bool,
}

fn sum_in_order(values: &[f64]) -> f64 {
    values.iter().sum()
}

fn certification(name: &str, total: f64, constant: f64) -> Certification {
    Certification {
        constant_name: name.into(),
        result: certify(total, constant, POLY_TOL_CERT),
    }
}

/// Total exterior angle of a closed polygon, certified against `2π`.
pub fn total_invariant_1(points: &[Vec<f64>]) -> Result<PolyhedralReport> {
    let per_vertex = polygon_exterior_angles(points)?;
    let total = sum_in_order(&per_vertex);
    let cert = certification("2pi", total, 2.0 * PI);
    Ok(PolyhedralReport {
        dim: 1,
        kappa: cert.result.k,
        chi: None,
        per_vertex,
        total,
        certifications: vec![cert],
        experimental: false,
    })
}

/// `Σ_ν E_2(ν)` over a closed surface mesh, certified against `4π`.
pub fn total_invariant_2(mesh: &SimplicialImmersion) -> Result<PolyhedralReport> {
    mesh.require_dim(2)?;
    mesh.check_closed()?;
    let per_vertex = (0..mesh.vertices.len())
        .map(|v| exterior_angle_2(mesh, v))
        .collect::<Result<Vec<f64>>>()?;
    let total = sum_in_order(&per_vertex);
    let cert = certification("4pi", total, 4.0 * PI);
    Ok(PolyhedralReport {
        dim: 2,
        kappa: cert.result.k,
        chi: cert.result.k.map(|k| 2 * k),
        per_vertex,
        total,
        certifications: vec![cert],
        experimental: false,
    })
}

/// Solid angle at `apex` of the tetrahedron `apex, a, b, c`, in any ambient
/// dimension, by the Van Oosterom–Strackee formula with the triple product
/// taken from the Gram determinant.
pub fn solid_angle(apex: &[f64], a: &[f64], b: &[f64], c: &[f64]) -> Result<f64> {
    let (u, v, w) = (sub(a, apex), sub(b, apex), sub(c, apex));
    let (lu, lv, lw) = (norm(&u), norm(&v), norm(&w));
    let triple = gram_volume(&[u.clone(), v.clone(), w.clone()]);
    if !(triple > DEGENERACY_EPS * lu * lv * lw) {
        return Err(Error::DegenerateTetrahedron);
    }
    let denom = lu * lv * lw + dot(&u, &v) * lw + dot(&u, &w) * lv + dot(&v, &w) * lu;
    Ok(2.0 * triple.atan2(denom))
}

/// `K_2(μ) = 2π − Σ Ω_σ(μ)` over star tetrahedra `σ` of `ν` containing `μ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exterior3 {
    pub vertex: usize,
    pub value: f64,
    /// `(μ, K_2(μ))` in increasing vertex order.
    pub link_curvatures: Vec<(usize, f64)>,
}

/// Experimental exterior 3-angle `4π − Σ_μ K_2(μ)`.
pub fn exterior_angle_3_detail(mesh: &SimplicialImmersion, v: usize) -> Result<Exterior3> {
    mesh.link_sphere(v)?;
    let mut sums: BTreeMap<usize, f64> = BTreeMap::new();
    for &c in mesh.star(v)? {
        let cell = &mesh.cells[c];
        for &mu in cell.iter().filter(|&&u| u != v) {
            let rest: Vec<&[f64]> = cell
                .iter()
                .filter(|&&u| u != mu)
                .map(|&u| mesh.vertices[u].as_slice())
                .collect();
            let omega = solid_angle(&mesh.vertices[mu], rest[0], rest[1], rest[2])?;
            *sums.entry(mu).or_default() += omega;
        }
    }
    let link_curvatures: Vec<(usize, f64)> =
        sums.into_iter().map(|(mu, s)| (mu, 2.0 * PI - s)).collect();
    let value = 4.0 * PI - link_curvatures.iter().map(|(_, k)| k).sum::<f64>();
    Ok(Exterior3 {
        vertex: v,
        value,
        link_curvatures,
    })
}

pub fn exterior_angle_3(mesh: &SimplicialImmersion, v: usize) -> Result<f64> {
    Ok(exterior_angle_3_detail(mesh, v)?.value)
}

/// Experimental total `Σ_ν E_3(ν)`, certified against `Vol(S^3) = 2π²` and
/// against `2³π`; both outcomes are reported.
pub fn total_invariant_3(mesh: &SimplicialImmersion) -> Result<PolyhedralReport> {
    mesh.require_dim(3)?;
    mesh.check_closed()?;
    let per_vertex = (0..mesh.vertices.len())
        .map(|v| exterior_angle_3(mesh, v))
        .collect::<Result<Vec<f64>>>()?;
    let total = sum_in_order(&per_vertex);
    let sphere = certification("2pi^2", total, normalization_constant(3));
    let power = certification("8pi", total, 8.0 * PI);
    Ok(PolyhedralReport {
        dim: 3,
        kappa: sphere.result.k,
        chi: None,
        per_vertex,
        total,
        certifications: vec![sphere, power],
        experimental: true,
    })
}

/// JSON mesh: `{"dim": m, "ambient": N, "vertices": [[..], ..], "cells": [[..], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonMesh {
    pub dim: usize,
    pub ambient: usize,
    pub vertices: Vec<Vec<f64>>,
    pub cells: Vec<Vec<usize>>,
}

pub fn parse_json_mesh(text: &str) -> Result<SimplicialImmersion> {
    let mesh: JsonMesh = serde_json::from_str(text).map_err(|e| Error::Format {
        line: e.line(),
        message: e.to_string(),
    })?;
    SimplicialImmersion::new(mesh.dim, mesh.ambient, mesh.vertices, mesh.cells)
}

/// ASCII OFF with `OFF` or `nOFF` header; `#` starts a comment; faces must
/// be triangles.
pub fn parse_off(text: &str) -> Result<SimplicialImmersion> {
    let mut tokens: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    tokens.reverse();
    let fmt = |line: usize, message: String| Error::Format { line, message };
    let (line, mut head) = tokens.pop().ok_or_else(|| fmt(1, "empty OFF file".into()))?;
    let keyword = head.remove(0);
    let ambient = match keyword {
        "OFF" => 3,
        "nOFF" => {
            if head.is_empty() {
                head = tokens.pop().ok_or_else(|| fmt(line, "missing dimension".into()))?.1;
            }
            let d = head.remove(0);
            d.parse::<usize>()
                .map_err(|_| fmt(line, format!("invalid dimension {d:?}")))?
        }
        other => return Err(fmt(line, format!("expected OFF or nOFF header, found {other:?}"))),
    };
    let (count_line, counts) = if head.is_empty() {
        tokens.pop().ok_or_else(|| fmt(line, "missing vertex and face counts".into()))?
    } else {
        (line, head)
    };
    let parse_usize = |s: &str, l: usize| {
        s.parse::<usize>()
            .map_err(|_| fmt(l, format!("expected a non-negative integer, found {s:?}")))
    };
    if counts.len() < 2 {
        return Err(fmt(count_line, "expected vertex and face counts".into()));
    }
    let nv = parse_usize(counts[0], count_line)?;
    let nf = parse_usize(counts[1], count_line)?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (l, t) = tokens
            .pop()
            .ok_or_else(|| fmt(count_line, format!("expected {nv} vertices")))?;
        if t.len() < ambient {
            return Err(fmt(l, format!("expected {ambient} coordinates, found {}", t.len())));
        }
        let v = t[..ambient]
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| fmt(l, format!("invalid coordinate {s:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        vertices.push(v);
    }
    let mut cells = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (l, t) = tokens
            .pop()
            .ok_or_else(|| fmt(count_line, format!("expected {nf} faces")))?;
        let k = parse_usize(t[0], l)?;
        if k != 3 {
            return Err(fmt(l, format!("only triangles are supported, found a face with {k} vertices")));
        }
        if t.len() < 4 {
            return Err(fmt(l, "face line too short".into()));
        }
        let face = t[1..4]
            .iter()
            .map(|s| parse_usize(s, l))
            .collect::<Result<Vec<usize>>>()?;
        cells.push(face);
    }
    if let Some((l, _)) = tokens.last() {
        return Err(fmt(*l, "unexpected content after the last face".into()));
    }
    SimplicialImmersion::new(2, ambient, vertices, cells)
}
