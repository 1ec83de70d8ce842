//! Pullback densities of closed forms through the Gauss map.
//!
//! Every function here returns the coefficient of `dt_1 ∧ … ∧ dt_n` of the
//! pulled-back form at one parameter point, with the orientation given by
//! the parameter order. Signs are never normalised.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{parse_with, Expr, VarNames};
use crate::geometry::{JetFrame, PlueckerVector};
use crate::linalg::{det, dot};

/// Below this Plücker norm a point is treated as a discriminant point.
pub const ZERO_NORM_EPS: f64 = 1e-12;

fn require_derivatives(pv: &PlueckerVector) -> Result<()> {
    if !pv.has_derivatives() {
        return Err(Error::Precondition(
            "Pluecker vector carries no derivatives".into(),
        ));
    }
    Ok(())
}

fn require_nonzero(pv: &PlueckerVector) -> Result<()> {
    if !(pv.norm >= ZERO_NORM_EPS) {
        return Err(Error::ZeroPlueckerVector { norm: pv.norm });
    }
    Ok(())
}

/// Overall sign of the canonical form in dimension `n`, `(-1)^{n(n-1)/2}`.
///
/// With it the curve case reproduces the tangent-winding integrand
/// `(ẏẍ − ẋÿ)/(ẋ² + ẏ²)` and the surface case equals Gaussian curvature
/// times the area density.
pub fn canonical_sign(n: usize) -> f64 {
    if (n * n.saturating_sub(1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Pullback of the canonical closed form
/// `± Σ (-1)^i p_i dp_0 ∧ … \widehat{dp_i} … ∧ dp_n / |p|^{n+1}`
/// (sign from [`canonical_sign`]).
///
/// The numerator is the determinant of the matrix whose first row is `p`
/// and whose row `j + 1` is `∂p/∂t_j`; expanding along the first row gives
/// exactly the alternating sum.
pub fn canonical_density(pv: &PlueckerVector) -> Result<f64> {
    let n = pv.intrinsic;
    if pv.len() != n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "canonical form needs n + 1 = {} Pluecker coordinates, got {}",
            n + 1,
            pv.len()
        )));
    }
    require_derivatives(pv)?;
    require_nonzero(pv)?;
    let size = n + 1;
    let mut m = Vec::with_capacity(size * size);
    m.extend_from_slice(&pv.p);
    for j in 0..n {
        m.extend(pv.dp.iter().map(|row| row[j]));
    }
    Ok(canonical_sign(n) * det(&m, size) / pv.norm.powi(size as i32))
}

/// Metric coefficients and determinant numerators of a surface in `R³`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// `det[x_{,11}; x_{,1}; x_{,2}]`
    pub d11: f64,
    /// `det[x_{,22}; x_{,1}; x_{,2}]`
    pub d22: f64,
    /// `det[x_{,12}; x_{,1}; x_{,2}]`
    pub d12: f64,
}

impl FundamentalForms {
    pub fn metric_det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }
}

fn det_rows(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    det(&[a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2]], 3)
}

pub fn gauss_bonnet_fundamentals(frame: &JetFrame) -> Result<FundamentalForms> {
    if frame.params() != 2 || frame.ambient_dim() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "fundamental forms need a surface in R^3, got {} parameters in R^{}",
            frame.params(),
            frame.ambient_dim()
        )));
    }
    let (x1, x2) = (frame.tangent(0), frame.tangent(1));
    Ok(FundamentalForms {
        e: dot(&x1, &x1),
        f: dot(&x1, &x2),
        g: dot(&x2, &x2),
        d11: det_rows(&frame.second_vector(0, 0), &x1, &x2),
        d22: det_rows(&frame.second_vector(1, 1), &x1, &x2),
        d12: det_rows(&frame.second_vector(0, 1), &x1, &x2),
    })
}

/// `(D11·D22 − D12²) / (EG − F²)^{3/2}`, i.e. Gaussian curvature times the
/// area density.
pub fn gauss_bonnet_density(ff: &FundamentalForms) -> Result<f64> {
    let g = ff.metric_det();
    if !(g > 0.0) {
        return Err(Error::DegenerateMetric { value: g });
    }
    Ok((ff.d11 * ff.d22 - ff.d12 * ff.d12) / (g * g.sqrt()))
}

/// The real 2-form on `R^{2N} − {0}` built from complex coordinates
/// `z_j = p_j + i p_{j+N}`, evaluated on `(∂/∂t_1, ∂/∂t_2)`.
///
/// `dp[c][a]` is the derivative of `p_c` along parameter `a`.
pub fn kaehler_kernel(p: &[f64], dp: &[[f64; 2]]) -> f64 {
    let nc = p.len() / 2;
    let wedge = |a: [f64; 2], b: [f64; 2]| a[0] * b[1] - a[1] * b[0];
    let form = |coef: [(usize, f64); 2]| -> [f64; 2] {
        let [(c0, w0), (c1, w1)] = coef;
        [w0 * dp[c0][0] + w1 * dp[c1][0], w0 * dp[c0][1] + w1 * dp[c1][1]]
    };
    let mut total = 0.0;
    for i in 0..nc {
        for j in 0..nc {
            let a = form([(i, p[i]), (i + nc, p[i + nc])]);
            let b = form([(j, p[j + nc]), (j + nc, -p[j])]);
            let c = form([(i, p[j]), (i + nc, p[j + nc])]);
            let d = form([(i, p[j + nc]), (i + nc, -p[j])]);
            total += wedge(a, b) - wedge(c, d);
        }
    }
    let r2 = dot(p, p);
    total / (r2 * r2)
}

/// Kähler density evaluated directly on an immersion `M² → R^{2N}`.
pub fn kaehler_density(frame: &JetFrame) -> Result<f64> {
    if frame.params() != 2 || !frame.ambient_dim().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "Kaehler density needs a surface in even dimension, got {} parameters in R^{}",
            frame.params(),
            frame.ambient_dim()
        )));
    }
    let x = frame.x();
    let r = dot(x, x).sqrt();
    if !(r >= ZERO_NORM_EPS) {
        return Err(Error::ZeroVector { norm: r });
    }
    let dp: Vec<[f64; 2]> = (0..x.len())
        .map(|i| [frame.jac(i, 0), frame.jac(i, 1)])
        .collect();
    Ok(kaehler_kernel(x, &dp))
}

/// Kähler density on a Plücker image whose first half holds real parts and
/// second half imaginary parts of complex minors.
pub fn kaehler_density_pluecker(pv: &PlueckerVector) -> Result<f64> {
    if pv.intrinsic != 2 || !pv.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "Kaehler density needs 2 parameters and an even number of coordinates, got {} and {}",
            pv.intrinsic,
            pv.len()
        )));
    }
    require_derivatives(pv)?;
    if !(pv.norm >= ZERO_NORM_EPS) {
        return Err(Error::ZeroVector { norm: pv.norm });
    }
    let dp: Vec<[f64; 2]> = pv.dp.iter().map(|row| [row[0], row[1]]).collect();
    Ok(kaehler_kernel(&pv.p, &dp))
}

/// One term `φ(p) dp_{I_1} ∧ … ∧ dp_{I_n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormTerm {
    pub phi: Expr,
    pub indices: Vec<usize>,
}

/// A form `Σ φ_{I_1…I_n}(p) dp_{I_1} ∧ … ∧ dp_{I_n} / |p|^d` on the space
/// of Plücker coordinates.
///
/// The denominator may use the norm over a subset of coordinates, which is
/// how the singular forms on projective charts are written.
#[derive(Debug, Clone, PartialEq)]
pub struct PlueckerFormSpec {
    pub components: usize,
    pub degree: usize,
    pub terms: Vec<FormTerm>,
    pub norm_subset: Option<Vec<usize>>,
    pub power: i32,
}

impl PlueckerFormSpec {
    /// The canonical form on `R^{n+1}`, with the sign of
    /// [`canonical_density`].
    pub fn canonical(n: usize) -> Self {
        let terms = (0..=n)
            .map(|i| {
                let v = Expr::Var(i);
                let positive = (i % 2 == 0) == (canonical_sign(n) > 0.0);
                FormTerm {
                    phi: if positive { v } else { Expr::Neg(Box::new(v)) },
                    indices: (0..=n).filter(|&j| j != i).collect(),
                }
            })
            .collect();
        PlueckerFormSpec {
            components: n + 1,
            degree: n,
            terms,
            norm_subset: None,
            power: n as i32 + 1,
        }
    }

    /// The projective chart form `ω_i = (p_b dp_a − p_a dp_b)/(p_a² + p_b²)`
    /// with `(a, b) = (i+1, i+2) mod 3`.
    pub fn projective(i: usize) -> Self {
        let (a, b) = projective_pair(i);
        PlueckerFormSpec {
            components: 3,
            degree: 1,
            terms: vec![
                FormTerm {
                    phi: Expr::Var(b),
                    indices: vec![a],
                },
                FormTerm {
                    phi: Expr::Neg(Box::new(Expr::Var(a))),
                    indices: vec![b],
                },
            ],
            norm_subset: Some(vec![a, b]),
            power: 2,
        }
    }

    /// Parse the line format
    ///
    /// ```text
    /// # comment
    /// phi(<expr in p_0 … p_{C-1}>) d[i] ^ d[j] ^ … / |p|^<d>
    /// phi(<expr>) d[i] / |p[a,b,…]|^<d>
    /// ```
    ///
    /// Indices are zero-based positions in the Plücker vector. All lines
    /// must share the wedge degree and the denominator.
    pub fn parse(text: &str, components: usize) -> Result<Self> {
        let mut spec: Option<PlueckerFormSpec> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Format {
                line: lineno + 1,
                message,
            };
            let (term, subset, power) = parse_term(line, components).map_err(err)?;
            match &mut spec {
                None => {
                    spec = Some(PlueckerFormSpec {
                        components,
                        degree: term.indices.len(),
                        terms: vec![term],
                        norm_subset: subset,
                        power,
                    })
                }
                Some(s) => {
                    if term.indices.len() != s.degree {
                        return Err(err(format!(
                            "term has degree {}, previous terms have {}",
                            term.indices.len(),
                            s.degree
                        )));
                    }
                    if subset != s.norm_subset || power != s.power {
                        return Err(err("all terms must share the denominator".into()));
                    }
                    s.terms.push(term);
                }
            }
        }
        let spec = spec.ok_or_else(|| Error::Format {
            line: 0,
            message: "form spec has no terms".into(),
        })?;
        spec.check_homogeneity()?;
        Ok(spec)
    }

    /// Check numerically that every `φ` is homogeneous of degree `d − n`.
    pub fn check_homogeneity(&self) -> Result<()> {
        let expected = self.power - self.degree as i32;
        let lambda: f64 = 1.7;
        for sample in 0..3 {
            let p: Vec<f64> = (0..self.components)
                .map(|i| 0.4 + (1.3 * i as f64 + 2.1 * sample as f64).sin())
                .collect();
            let scaled: Vec<f64> = p.iter().map(|v| v * lambda).collect();
            for term in &self.terms {
                let a = term.phi.eval(&scaled)?;
                let b = lambda.powi(expected) * term.phi.eval(&p)?;
                if (a - b).abs() > 1e-9 * (1.0 + a.abs().max(b.abs())) {
                    return Err(Error::Precondition(format!(
                        "numerator `{}` is not homogeneous of degree {expected}",
                        term.phi.display_with(&VarNames::pluecker())
                    )));
                }
            }
        }
        Ok(())
    }
}

fn parse_term(line: &str, components: usize) -> std::result::Result<(FormTerm, Option<Vec<usize>>, i32), String> {
    let rest = line
        .strip_prefix("phi(")
        .ok_or("term must start with `phi(`")?;
    let mut depth = 1usize;
    let close = rest
        .char_indices()
        .find(|&(_, c)| {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            depth == 0
        })
        .map(|(i, _)| i)
        .ok_or("unbalanced `phi(`")?;
    let phi = parse_with(&rest[..close], components, &VarNames::pluecker()).map_err(|e| e.to_string())?;
    let rest = &rest[close + 1..];
    let (wedge, denom) = rest.rsplit_once('/').ok_or("missing `/ |p|^d` denominator")?;

    let mut indices = Vec::new();
    for factor in wedge.split('^') {
        let inner = factor
            .trim()
            .strip_prefix("d[")
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| format!("expected `d[<index>]`, found `{}`", factor.trim()))?;
        let idx = parse_index(inner, components)?;
        indices.push(idx);
    }

    let denom = denom.trim();
    let body = denom.strip_prefix('|').ok_or("denominator must look like `|p|^d`")?;
    let (norm, power) = body.split_once("|^").ok_or("denominator must look like `|p|^d`")?;
    let power: i32 = power
        .trim()
        .parse()
        .map_err(|_| format!("bad exponent `{}`", power.trim()))?;
    let subset = match norm.trim() {
        "p" => None,
        other => {
            let list = other
                .strip_prefix("p[")
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| format!("bad norm `{other}`"))?;
            Some(
                list.split(',')
                    .map(|s| parse_index(s, components))
                    .collect::<std::result::Result<Vec<_>, _>>()?,
            )
        }
    };
    Ok((FormTerm { phi, indices }, subset, power))
}

fn parse_index(s: &str, components: usize) -> std::result::Result<usize, String> {
    let idx: usize = s
        .trim()
        .parse()
        .map_err(|_| format!("bad index `{}`", s.trim()))?;
    if idx >= components {
        return Err(format!("index {idx} out of range for {components} coordinates"));
    }
    Ok(idx)
}

impl fmt::Display for PlueckerFormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = VarNames::pluecker();
        let norm = match &self.norm_subset {
            None => "p".to_string(),
            Some(s) => format!(
                "p[{}]",
                s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            ),
        };
        for term in &self.terms {
            let wedge = term
                .indices
                .iter()
                .map(|i| format!("d[{i}]"))
                .collect::<Vec<_>>()
                .join(" ^ ");
            writeln!(
                f,
                "phi({}) {wedge} / |{norm}|^{}",
                term.phi.display_with(&names),
                self.power
            )?;
        }
        Ok(())
    }
}

/// Full pullback `Σ φ(p) det(∂p_{I_a}/∂t_b) / |p|^d`.
pub fn generic_pluecker_density(spec: &PlueckerFormSpec, pv: &PlueckerVector) -> Result<f64> {
    let n = spec.degree;
    if pv.intrinsic != n {
        return Err(Error::DimensionMismatch(format!(
            "form of degree {n} on a manifold of dimension {}",
            pv.intrinsic
        )));
    }
    require_derivatives(pv)?;
    let check = |i: usize| {
        if i >= pv.len() {
            Err(Error::IndexOutOfRange {
                index: i,
                len: pv.len(),
            })
        } else {
            Ok(i)
        }
    };
    let denom_sq: f64 = match &spec.norm_subset {
        None => pv.norm * pv.norm,
        Some(s) => s
            .iter()
            .map(|&i| check(i).map(|i| pv.p[i] * pv.p[i]))
            .sum::<Result<f64>>()?,
    };
    let denom_norm = denom_sq.sqrt();
    if !(denom_norm >= ZERO_NORM_EPS * pv.norm.max(1.0)) || !(pv.norm >= ZERO_NORM_EPS) {
        return Err(Error::ZeroPlueckerVector { norm: denom_norm });
    }
    let mut total = 0.0;
    let mut m = vec![0.0; n * n];
    for term in &spec.terms {
        for (a, &idx) in term.indices.iter().enumerate() {
            let idx = check(idx)?;
            for b in 0..n {
                m[a * n + b] = pv.dp[idx][b];
            }
        }
        let phi = term.phi.eval(&pv.p)?;
        if phi != 0.0 {
            total += phi * det(&m, n);
        }
    }
    Ok(total / denom_norm.powi(spec.power))
}

/// Weights `α` of the bundle `ω(α) = Σ α_i ω_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectiveWeights {
    pub alpha: [f64; 3],
}

impl Default for ProjectiveWeights {
    fn default() -> Self {
        ProjectiveWeights {
            alpha: [1.0, 0.0, 0.0],
        }
    }
}

/// Coordinates entering `ω_i`.
pub fn projective_pair(i: usize) -> (usize, usize) {
    ((i + 1) % 3, (i + 2) % 3)
}

/// Pullback of `ω_i = (p_b dp_a − p_a dp_b)/(p_a² + p_b²)` along the curve
/// direction of a projective-curve cone frame.
pub fn projective_density(i: usize, pv: &PlueckerVector) -> Result<f64> {
    if i > 2 || pv.len() != 3 || pv.intrinsic != 1 {
        return Err(Error::DimensionMismatch(format!(
            "projective forms need a curve in RP^2 and i <= 2, got i = {i}, {} coordinates, dimension {}",
            pv.len(),
            pv.intrinsic
        )));
    }
    require_derivatives(pv)?;
    let (a, b) = projective_pair(i);
    let (pa, pb) = (pv.p[a], pv.p[b]);
    let denom = pa * pa + pb * pb;
    if !(denom.sqrt() > ZERO_NORM_EPS * pv.norm.max(1.0)) {
        return Err(Error::SingularForm {
            form: i,
            denominator: denom,
        });
    }
    Ok((pb * pv.dp[a][0] - pa * pv.dp[b][0]) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{jacobian_frame, pluecker_derivatives, ImmersionChart};
    use crate::integrate::{DomainSpec, VarDomain};
    use std::f64::consts::PI;

    fn chart(n: usize, coords: &[&str]) -> ImmersionChart {
        let dom = DomainSpec::new(vec![VarDomain::periodic(0.0, 2.0 * PI); n]).unwrap();
        ImmersionChart::parse(n, coords, dom).unwrap()
    }

    fn pv_at(c: &ImmersionChart, t: &[f64]) -> PlueckerVector {
        pluecker_derivatives(&jacobian_frame(c, t).unwrap()).unwrap()
    }

    #[test]
    fn circle_canonical_density_is_minus_one() {
        let c = chart(1, &["cos(t1)", "sin(t1)"]);
        for k in 0..10 {
            let d = canonical_density(&pv_at(&c, &[k as f64 * 0.6])).unwrap();
            assert!((d + 1.0).abs() < 1e-15);
        }
        let c2 = chart(1, &["cos(2*t1)", "sin(2*t1)"]);
        assert!((canonical_density(&pv_at(&c2, &[0.3])).unwrap() + 2.0).abs() < 1e-14);
    }

    #[test]
    fn flat_plane() {
        let c = chart(2, &["t1", "t2", "0"]);
        let f = jacobian_frame(&c, &[0.1, 0.2]).unwrap();
        let ff = gauss_bonnet_fundamentals(&f).unwrap();
        assert_eq!((ff.e, ff.f, ff.g), (1.0, 0.0, 1.0));
        assert_eq!((ff.d11, ff.d22, ff.d12), (0.0, 0.0, 0.0));
        assert_eq!(gauss_bonnet_density(&ff).unwrap(), 0.0);
    }

    #[test]
    fn sphere_densities_are_area_density() {
        let c = chart(2, &["cos(t1)*sin(t2)", "sin(t1)*sin(t2)", "cos(t2)"]);
        for &(t1, t2) in &[(0.0, PI / 2.0), (0.7, 0.4), (2.0, 2.9)] {
            let f = jacobian_frame(&c, &[t1, t2]).unwrap();
            let ff = gauss_bonnet_fundamentals(&f).unwrap();
            let area: f64 = t2.sin();
            assert!((ff.metric_det() - area * area).abs() < 1e-14);
            assert!((gauss_bonnet_density(&ff).unwrap() - area).abs() < 1e-14);
            let pv = pluecker_derivatives(&f).unwrap();
            assert!((canonical_density(&pv).unwrap() - area).abs() < 1e-14);
        }
    }

    #[test]
    fn torus_outer_equator() {
        let c = chart(
            2,
            &[
                "(2 + cos(t2))*cos(t1)",
                "(2 + cos(t2))*sin(t1)",
                "sin(t2)",
            ],
        );
        for &t2 in &[0.0f64, 0.8, 2.5] {
            let f = jacobian_frame(&c, &[0.3, t2]).unwrap();
            let gb = gauss_bonnet_density(&gauss_bonnet_fundamentals(&f).unwrap()).unwrap();
            assert!((gb - t2.cos()).abs() < 1e-14, "t2 = {t2}: {gb}");
            let can = canonical_density(&pluecker_derivatives(&f).unwrap()).unwrap();
            assert!((can - gb).abs() < 1e-13);
        }
    }

    #[test]
    fn degenerate_inputs() {
        let ff = FundamentalForms {
            e: 1.0,
            f: 1.0,
            g: 1.0,
            d11: 0.0,
            d22: 0.0,
            d12: 0.0,
        };
        assert!(matches!(gauss_bonnet_density(&ff), Err(Error::DegenerateMetric { .. })));
        let cusp = chart(1, &["t1^2", "t1^3"]);
        assert!(matches!(
            canonical_density(&pv_at(&cusp, &[0.0])),
            Err(Error::ZeroPlueckerVector { .. })
        ));
    }

    #[test]
    fn single_complex_coordinate_kaehler_is_zero() {
        let frame = |t1: f64, t2: f64| {
            let (a, b) = (t1.cos() * t2.sin().exp(), t1.sin() + 2.0 * t2 * t2 + 3.0);
            JetFrame::from_parts(
                vec![t1, t2],
                vec![a, b],
                &[
                    vec![-t1.sin() * t2.sin().exp(), a * t2.cos()],
                    vec![t1.cos(), 4.0 * t2],
                ],
                &[vec![vec![0.0; 2]; 2], vec![vec![0.0; 2]; 2]],
            )
        };
        for &(t1, t2) in &[(0.1, 0.2), (1.3, -0.7), (2.0, 2.0)] {
            assert_eq!(kaehler_density(&frame(t1, t2)).unwrap(), 0.0);
        }
        // second complex coordinate identically zero
        let c = chart(2, &["(2 + cos(t2))*cos(t1)", "0", "(2 + cos(t2))*sin(t1)", "0"]);
        for &t in &[[0.1, 0.2], [1.3, -0.7]] {
            assert_eq!(kaehler_density(&jacobian_frame(&c, &t).unwrap()).unwrap(), 0.0);
        }
    }

    #[test]
    fn kaehler_rejects_origin_and_odd_dimension() {
        let c = chart(2, &["t1", "t2", "0", "0"]);
        assert!(matches!(
            kaehler_density(&jacobian_frame(&c, &[0.0, 0.0]).unwrap()),
            Err(Error::ZeroVector { .. })
        ));
        let c = chart(2, &["t1", "t2", "1"]);
        assert!(kaehler_density(&jacobian_frame(&c, &[0.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn form_spec_text_round_trip() {
        let text = "# canonical n = 1\nphi(p_0) d[1] / |p|^2\nphi(-p_1) d[0] / |p|^2\n";
        let spec = PlueckerFormSpec::parse(text, 2).unwrap();
        assert_eq!(spec, PlueckerFormSpec::canonical(1));
        let printed = spec.to_string();
        assert_eq!(PlueckerFormSpec::parse(&printed, 2).unwrap(), spec);
        let proj = PlueckerFormSpec::projective(0);
        assert_eq!(PlueckerFormSpec::parse(&proj.to_string(), 3).unwrap(), proj);
    }

    #[test]
    fn form_spec_errors() {
        let bad = [
            ("psi(p_0) d[1] / |p|^2", 2),
            ("phi(p_0) d[2] / |p|^2", 2),
            ("phi(p_0) d[1]", 2),
            ("phi(p_0 d[1] / |p|^2", 2),
            ("phi(p_0) d[1] / |p|^x", 2),
            ("phi(p_0) d[1] / |p|^2\nphi(p_1) d[0] ^ d[1] / |p|^2", 2),
            ("phi(p_0) d[1] / |p|^2\nphi(p_1) d[0] / |p|^3", 2),
            ("", 2),
        ];
        for (text, c) in bad {
            assert!(
                matches!(PlueckerFormSpec::parse(text, c), Err(Error::Format { .. })),
                "{text:?}"
            );
        }
        // numerator of the wrong degree
        assert!(matches!(
            PlueckerFormSpec::parse("phi(p_0^2) d[1] / |p|^2", 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn zero_numerator_gives_zero() {
        let spec = PlueckerFormSpec::parse("phi(0*p_0) d[1] / |p|^1", 2).unwrap();
        let c = chart(1, &["cos(t1)", "2*sin(t1)"]);
        assert_eq!(generic_pluecker_density(&spec, &pv_at(&c, &[0.4])).unwrap(), 0.0);
    }

    #[test]
    fn generic_density_reports_bad_indices() {
        let spec = PlueckerFormSpec::parse("phi(p_0) d[2] / |p|^2", 3).unwrap();
        let c = chart(1, &["cos(t1)", "sin(t1)"]);
        assert!(matches!(
            generic_pluecker_density(&spec, &pv_at(&c, &[0.4])),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
    }
}
