//! Jacobian frames of parametrised immersions and their Plücker coordinates.
//!
//! A frame stores the Jacobian with one row per parameter and one column per
//! ambient coordinate, so the Plücker coordinate `p_I` is the determinant of
//! the columns `I`. Entries of a [`PlueckerVector`] are ordered by the
//! *omitted* columns in lexicographic order; in codimension one this makes
//! entry `i` the minor built on all columns except `i`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::integrate::DomainSpec;
use crate::linalg::{det, subsets};

/// Default relative cutoff for [`immersion_check`].
pub const DEFAULT_IMMERSION_EPS: f64 = 1e-9;

/// A global parametrisation `t ↦ x(t)` of an `n`-manifold in `R^N`.
#[derive(Debug, Clone)]
pub struct ImmersionChart {
    n: usize,
    coords: Vec<Expr>,
    domain: DomainSpec,
}

impl ImmersionChart {
    pub fn new(n: usize, coords: Vec<Expr>, domain: DomainSpec) -> Result<Self> {
        if n == 0 || coords.len() <= n {
            return Err(Error::DimensionMismatch(format!(
                "chart needs ambient > n >= 1, got n = {n}, ambient = {}",
                coords.len()
            )));
        }
        if domain.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "domain has {} variables, chart has {n}",
                domain.dim()
            )));
        }
        if let Some(c) = coords.iter().find(|c| c.arity() > n) {
            return Err(Error::DimensionMismatch(format!(
                "coordinate `{c}` uses more than {n} variables"
            )));
        }
        Ok(ImmersionChart { n, coords, domain })
    }

    /// Convenience constructor from coordinate strings in `t1 … tn`.
    pub fn parse(n: usize, coords: &[&str], domain: DomainSpec) -> Result<Self> {
        let coords = coords
            .iter()
            .map(|c| parse(c, n))
            .collect::<Result<Vec<_>>>()?;
        ImmersionChart::new(n, coords, domain)
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Expr] {
        &self.coords
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    /// Same chart with each coordinate replaced by `f(i, x_i)`.
    pub fn map_coords(&self, mut f: impl FnMut(usize, &Expr) -> Expr) -> Result<Self> {
        let coords = self.coords.iter().enumerate().map(|(i, c)| f(i, c)).collect();
        ImmersionChart::new(self.n, coords, self.domain.clone())
    }
}

/// Cone over a projective manifold in the affine chart `x_chart ≠ 0`:
/// `x_chart = s`, `x_j = s · f_j(t)` for `j ≠ chart`.
#[derive(Debug, Clone)]
pub struct ConeChart {
    n: usize,
    chart: usize,
    slots: Vec<Option<Expr>>,
    domain: DomainSpec,
}

impl ConeChart {
    /// `slots` has `N + 1` entries; exactly one is `None` (the chart slot).
    pub fn new(n: usize, slots: Vec<Option<Expr>>, domain: DomainSpec) -> Result<Self> {
        let charts: Vec<usize> = slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.is_none().then_some(i))
            .collect();
        let [chart] = charts[..] else {
            return Err(Error::DimensionMismatch(format!(
                "cone chart needs exactly one chart slot, found {}",
                charts.len()
            )));
        };
        if n == 0 || slots.len() < n + 2 {
            return Err(Error::DimensionMismatch(format!(
                "projective manifold of dimension {n} needs N > n, got {} homogeneous coordinates",
                slots.len()
            )));
        }
        if domain.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "domain has {} variables, cone chart has {n}",
                domain.dim()
            )));
        }
        if let Some(f) = slots.iter().flatten().find(|f| f.arity() > n) {
            return Err(Error::DimensionMismatch(format!(
                "coordinate `{f}` uses more than {n} variables"
            )));
        }
        Ok(ConeChart {
            n,
            chart,
            slots,
            domain,
        })
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.n
    }

    pub fn chart_index(&self) -> usize {
        self.chart
    }

    /// Number of homogeneous coordinates, `N + 1`.
    pub fn homogeneous_dim(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Option<Expr>] {
        &self.slots
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }
}

/// Point data of an immersion: position, Jacobian and second derivatives.
///
/// `params` counts all Jacobian rows. For a cone frame the last row is the
/// radial direction `s`, so `intrinsic = params - 1`; otherwise both agree.
#[derive(Debug, Clone, PartialEq)]
pub struct JetFrame {
    t: Vec<f64>,
    ambient: usize,
    params: usize,
    intrinsic: usize,
    x: Vec<f64>,
    jac: Vec<f64>,
    second: Vec<f64>,
}

impl JetFrame {
    /// Build a frame from explicit data. `jac[i][j] = ∂x_i/∂t_j`,
    /// `second[i][j][k] = ∂²x_i/∂t_j∂t_k`.
    pub fn from_parts(t: Vec<f64>, x: Vec<f64>, jac: &[Vec<f64>], second: &[Vec<Vec<f64>>]) -> Self {
        let ambient = x.len();
        let params = jac.first().map_or(0, Vec::len);
        let mut frame = JetFrame::zeros(t, ambient, params, params);
        frame.x = x;
        for i in 0..ambient {
            for j in 0..params {
                frame.set_jac(i, j, jac[i][j]);
                for k in 0..params {
                    frame.set_second(i, j, k, second[i][j][k]);
                }
            }
        }
        frame
    }

    fn zeros(t: Vec<f64>, ambient: usize, params: usize, intrinsic: usize) -> Self {
        JetFrame {
            t,
            ambient,
            params,
            intrinsic,
            x: vec![0.0; ambient],
            jac: vec![0.0; ambient * params],
            second: vec![0.0; ambient * params * params],
        }
    }

    pub fn location(&self) -> &[f64] {
        &self.t
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn jac(&self, i: usize, j: usize) -> f64 {
        self.jac[i * self.params + j]
    }

    pub fn second(&self, i: usize, j: usize, k: usize) -> f64 {
        self.second[(i * self.params + j) * self.params + k]
    }

    /// Tangent vector `∂x/∂t_j`.
    pub fn tangent(&self, j: usize) -> Vec<f64> {
        (0..self.ambient).map(|i| self.jac(i, j)).collect()
    }

    /// `∂²x/∂t_j∂t_k`.
    pub fn second_vector(&self, j: usize, k: usize) -> Vec<f64> {
        (0..self.ambient).map(|i| self.second(i, j, k)).collect()
    }

    fn set_jac(&mut self, i: usize, j: usize, v: f64) {
        self.jac[i * self.params + j] = v;
    }

    fn set_second(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.second[(i * self.params + j) * self.params + k] = v;
    }
}

/// Evaluate position, Jacobian and second derivatives of `chart` at `t`.
pub fn jacobian_frame(chart: &ImmersionChart, t: &[f64]) -> Result<JetFrame> {
    let n = chart.n;
    if t.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "point has {} entries, chart has {n} parameters",
            t.len()
        )));
    }
    let mut frame = JetFrame::zeros(t.to_vec(), chart.ambient_dim(), n, n);
    for (i, c) in chart.coords.iter().enumerate() {
        let jet = c.eval_jet2(t).map_err(|e| e.at(t))?;
        frame.x[i] = jet.value;
        for j in 0..n {
            frame.set_jac(i, j, jet.grad[j]);
            for k in 0..n {
                frame.set_second(i, j, k, jet.hess[j][k]);
            }
        }
    }
    Ok(frame)
}

/// Jacobian frame of the cone map `(t, s) ↦ s·f(t)` at `s = 1`.
///
/// Rows are `t_1 … t_n` followed by `s`: row `t_j` holds `f_{c,t_j}` with a
/// zero in the chart column, the last row holds `f_c` with a one there.
pub fn cone_frame(cone: &ConeChart, t: &[f64]) -> Result<JetFrame> {
    let n = cone.n;
    if t.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "point has {} entries, cone chart has {n} parameters",
            t.len()
        )));
    }
    let s = n;
    let mut frame = JetFrame::zeros(t.to_vec(), cone.homogeneous_dim(), n + 1, n);
    for (c, slot) in cone.slots.iter().enumerate() {
        let Some(f) = slot else {
            frame.x[c] = 1.0;
            frame.set_jac(c, s, 1.0);
            continue;
        };
        let jet = f.eval_jet2(t).map_err(|e| e.at(t))?;
        frame.x[c] = jet.value;
        frame.set_jac(c, s, jet.value);
        for j in 0..n {
            frame.set_jac(c, j, jet.grad[j]);
            frame.set_second(c, j, s, jet.grad[j]);
            frame.set_second(c, s, j, jet.grad[j]);
            for k in 0..n {
                frame.set_second(c, j, k, jet.hess[j][k]);
            }
        }
    }
    Ok(frame)
}

/// Singular values of the Jacobian, largest first.
pub fn singular_values(frame: &JetFrame) -> Vec<f64> {
    let m = DMatrix::from_fn(frame.ambient, frame.params, |i, j| frame.jac(i, j));
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Fails with [`Error::DegenerateJacobian`] unless the smallest singular
/// value of the Jacobian exceeds `eps` times the largest.
pub fn immersion_check(frame: &JetFrame, eps: f64) -> Result<()> {
    let sv = singular_values(frame);
    let largest = sv.first().copied().unwrap_or(0.0);
    let smallest = sv.last().copied().unwrap_or(0.0);
    if frame.params > frame.ambient || !(smallest > eps * largest) {
        return Err(Error::DegenerateJacobian {
            location: frame.t.clone(),
            smallest_singular_value: if frame.params > frame.ambient { 0.0 } else { smallest },
        });
    }
    Ok(())
}

/// Maximal minors of a Jacobian, optionally with their parameter
/// derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct PlueckerVector {
    /// Column subsets, ordered lexicographically by omitted columns.
    pub indices: Vec<Vec<usize>>,
    pub p: Vec<f64>,
    /// `dp[a][j] = ∂p_a/∂t_j` for every Jacobian row `j`; empty when not
    /// computed.
    pub dp: Vec<Vec<f64>>,
    pub norm: f64,
    /// Number of leading parameter directions tangent to the manifold.
    pub intrinsic: usize,
}

impl PlueckerVector {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn has_derivatives(&self) -> bool {
        !self.dp.is_empty()
    }

    /// Scale `p` and `dp` by `lambda`.
    pub fn scaled(&self, lambda: f64) -> PlueckerVector {
        PlueckerVector {
            indices: self.indices.clone(),
            p: self.p.iter().map(|v| v * lambda).collect(),
            dp: self
                .dp
                .iter()
                .map(|row| row.iter().map(|v| v * lambda).collect())
                .collect(),
            norm: self.norm * lambda.abs(),
            intrinsic: self.intrinsic,
        }
    }
}

/// The `size`-subsets of `0..ambient`, ordered by their complements.
pub fn minor_indices(ambient: usize, size: usize) -> Vec<Vec<usize>> {
    subsets(ambient, ambient - size)
        .into_iter()
        .map(|omit| (0..ambient).filter(|c| !omit.contains(c)).collect())
        .collect()
}

fn minor_matrix(frame: &JetFrame, cols: &[usize]) -> Vec<f64> {
    let n = frame.params;
    let mut m = Vec::with_capacity(n * n);
    for r in 0..n {
        for &c in cols {
            m.push(frame.jac(c, r));
        }
    }
    m
}

fn check_shape(frame: &JetFrame) -> Result<()> {
    if frame.params == 0 || frame.ambient < frame.params {
        return Err(Error::DimensionMismatch(format!(
            "Pluecker coordinates need ambient >= params, got {} < {}",
            frame.ambient, frame.params
        )));
    }
    Ok(())
}

/// Plücker coordinates `p_I` and `|p|` (no derivatives).
pub fn pluecker(frame: &JetFrame) -> Result<PlueckerVector> {
    check_shape(frame)?;
    let n = frame.params;
    let indices = minor_indices(frame.ambient, n);
    let p: Vec<f64> = indices
        .iter()
        .map(|cols| det(&minor_matrix(frame, cols), n))
        .collect();
    let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(PlueckerVector {
        indices,
        p,
        dp: Vec::new(),
        norm,
        intrinsic: frame.intrinsic,
    })
}

/// Plücker coordinates with `∂p_I/∂t_j`, by Jacobi's formula: the
/// derivative of a determinant is the sum of the determinants with one
/// row replaced by its derivative.
pub fn pluecker_derivatives(frame: &JetFrame) -> Result<PlueckerVector> {
    let mut pv = pluecker(frame)?;
    let n = frame.params;
    let mut m = vec![0.0; n * n];
    pv.dp = pv
        .indices
        .iter()
        .map(|cols| {
            let base = minor_matrix(frame, cols);
            (0..n)
                .map(|j| {
                    let mut sum = 0.0;
                    for r in 0..n {
                        m.copy_from_slice(&base);
                        for (ci, &c) in cols.iter().enumerate() {
                            m[r * n + ci] = frame.second(c, r, j);
                        }
                        sum += det(&m, n);
                    }
                    sum
                })
                .collect()
        })
        .collect();
    Ok(pv)
}
