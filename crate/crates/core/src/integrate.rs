//! Tensor-product quadrature over parameter boxes and integer certification.
//!
//! Periodic variables use the uniform rectangle rule on `[a, b)`, which is
//! spectrally accurate for smooth periodic integrands. Open variables use the
//! midpoint rule, whose nodes never touch the endpoints; this tolerates
//! measure-zero coordinate degeneracies such as the poles of a spherical
//! chart. Each level doubles the grid in every direction. When an open
//! variable is present the midpoint error has an expansion in even powers of
//! the spacing, so the level values are Richardson-extrapolated (Romberg
//! table) before the convergence test.
//!
//! Node values are computed in parallel and reduced with pairwise summation
//! in node order, so a fixed grid always produces the same bits.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::pairwise_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Periodic,
    Open,
}

/// One parameter interval `[a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarDomain {
    pub a: f64,
    pub b: f64,
    pub kind: VarKind,
}

impl VarDomain {
    pub fn periodic(a: f64, b: f64) -> Self {
        VarDomain {
            a,
            b,
            kind: VarKind::Periodic,
        }
    }

    pub fn open(a: f64, b: f64) -> Self {
        VarDomain {
            a,
            b,
            kind: VarKind::Open,
        }
    }

    fn spacing(&self, m: usize) -> f64 {
        (self.b - self.a) / m as f64
    }

    fn node(&self, m: usize, j: usize) -> f64 {
        let h = self.spacing(m);
        match self.kind {
            VarKind::Periodic => self.a + j as f64 * h,
            VarKind::Open => self.a + (j as f64 + 0.5) * h,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainSpec {
    vars: Vec<VarDomain>,
}

impl DomainSpec {
    pub fn new(vars: Vec<VarDomain>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if !(v.b > v.a) || !v.a.is_finite() || !v.b.is_finite() {
                return Err(Error::Precondition(format!(
                    "domain of t{} must satisfy a < b, got [{}, {})",
                    i + 1,
                    v.a,
                    v.b
                )));
            }
        }
        Ok(DomainSpec { vars })
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[VarDomain] {
        &self.vars
    }

    pub fn all_periodic(&self) -> bool {
        self.vars.iter().all(|v| v.kind == VarKind::Periodic)
    }

    /// Number of nodes for `m` points per variable.
    pub fn node_count(&self, m: usize) -> usize {
        m.pow(self.vars.len() as u32)
    }

    /// Coordinates of node `flat` (last variable varies fastest).
    pub fn node(&self, m: usize, mut flat: usize) -> Vec<f64> {
        let mut t = vec![0.0; self.vars.len()];
        for (d, v) in self.vars.iter().enumerate().rev() {
            t[d] = v.node(m, flat % m);
            flat /= m;
        }
        t
    }

    /// Product of the per-variable spacings: the weight of every node.
    pub fn cell_volume(&self, m: usize) -> f64 {
        self.vars.iter().map(|v| v.spacing(m)).product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    /// Points per variable at level 0.
    pub initial_grid: usize,
    /// Number of levels, each doubling the grid.
    pub max_levels: usize,
    pub tol_conv: f64,
    pub tol_cert: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            initial_grid: 16,
            max_levels: 6,
            tol_conv: 1e-9,
            tol_cert: 1e-6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.initial_grid < 8 {
            return Err(Error::Precondition(format!(
                "initial grid must be at least 8, got {}",
                self.initial_grid
            )));
        }
        if self.max_levels == 0 {
            return Err(Error::Precondition("max_levels must be positive".into()));
        }
        if !(self.tol_conv > 0.0) || !(self.tol_cert > 0.0) {
            return Err(Error::Precondition("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn grid_at(&self, level: usize) -> usize {
        self.initial_grid << level
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelTrace {
    pub level: usize,
    pub grid: usize,
    /// Plain rule value on this grid.
    pub rule: f64,
    /// Value after extrapolation (equal to `rule` for periodic domains).
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub converged: bool,
    pub levels_used: usize,
    pub trace: Vec<LevelTrace>,
}

/// Rule value on a grid of `m` points per variable.
///
/// The first failing node in node order determines the error, with its
/// location attached.
pub fn rule_sum<F>(density: &F, dom: &DomainSpec, m: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let values: Vec<Result<f64>> = (0..dom.node_count(m))
        .into_par_iter()
        .map(|flat| {
            let t = dom.node(m, flat);
            density(&t).map_err(|e| e.at(&t))
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&values) * dom.cell_volume(m))
}

/// Integrate `density` with grid doubling until successive estimates
/// differ by less than `tol_conv` or the levels run out.
pub fn integrate<F>(density: F, dom: &DomainSpec, q: &QuadratureSpec) -> Result<Quadrature>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    q.validate()?;
    let extrapolate = !dom.all_periodic();
    let mut table: Vec<Vec<f64>> = Vec::new();
    let mut trace = Vec::new();
    for level in 0..q.max_levels {
        let m = q.grid_at(level);
        let rule = rule_sum(&density, dom, m)?;
        let mut row = vec![rule];
        if extrapolate {
            for k in 1..=level {
                let factor = 4f64.powi(k as i32);
                let prev = table[level - 1][k - 1];
                let cur = row[k - 1];
                row.push(cur + (cur - prev) / (factor - 1.0));
            }
        }
        let estimate = *row.last().expect("non-empty row");
        trace.push(LevelTrace {
            level,
            grid: m,
            rule,
            estimate,
        });
        table.push(row);
        if level > 0 && (estimate - trace[level - 1].estimate).abs() < q.tol_conv {
            return Ok(Quadrature {
                value: estimate,
                converged: true,
                levels_used: level + 1,
                trace,
            });
        }
    }
    let last = trace.last().expect("at least one level");
    Ok(Quadrature {
        value: last.estimate,
        converged: false,
        levels_used: trace.len(),
        trace,
    })
}

/// Which constant an integral over an `n`-manifold is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Volume of the unit `n`-sphere.
    #[default]
    Sphere,
    /// `2^n π`, reported as `"paper"`.
    #[serde(rename = "paper")]
    PowerOfTwoPi,
}

/// `Γ(k/2)` for a positive integer `k`.
fn gamma_half(k: u32) -> f64 {
    let (mut g, mut x) = if k.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (std::f64::consts::PI.sqrt(), 0.5)
    };
    while 2.0 * x < k as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

/// `Vol(S^n) = 2 π^{(n+1)/2} / Γ((n+1)/2)`: the total of the canonical
/// form over the unit sphere.
pub fn normalization_constant(n: usize) -> f64 {
    let half = (n as f64 + 1.0) / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / gamma_half(n as u32 + 1)
}

pub fn constant_for(norm: Normalization, n: usize) -> f64 {
    match norm {
        Normalization::Sphere => normalization_constant(n),
        Normalization::PowerOfTwoPi => 2f64.powi(n as i32) * std::f64::consts::PI,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralResult {
    pub raw: f64,
    pub norm_constant: f64,
    pub normalized: f64,
    /// Nearest integer, present only when `residual <= tol_cert`.
    pub k: Option<i64>,
    pub residual: f64,
    pub levels_used: usize,
    pub converged: bool,
    pub trace: Vec<LevelTrace>,
}

/// Round `raw / norm_constant` to the nearest integer and accept it only
/// within `tol_cert`.
pub fn certify(raw: f64, norm_constant: f64, tol_cert: f64) -> IntegralResult {
    let normalized = raw / norm_constant;
    let nearest = normalized.round();
    let residual = (normalized - nearest).abs();
    IntegralResult {
        raw,
        norm_constant,
        normalized,
        k: (residual <= tol_cert).then_some(nearest as i64),
        residual,
        levels_used: 0,
        converged: true,
        trace: Vec::new(),
    }
}

impl IntegralResult {
    pub fn from_quadrature(q: Quadrature, norm_constant: f64, tol_cert: f64) -> Self {
        IntegralResult {
            levels_used: q.levels_used,
            converged: q.converged,
            trace: q.trace,
            ..certify(q.value, norm_constant, tol_cert)
        }
    }
}
