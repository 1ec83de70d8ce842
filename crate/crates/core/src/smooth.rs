//! Certified smooth invariants: chart → frame → Plücker vector → density →
//! integral → integer.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{
    canonical_density, gauss_bonnet_density, gauss_bonnet_fundamentals, generic_pluecker_density,
    kaehler_density, kaehler_density_pluecker, projective_density, PlueckerFormSpec,
    ProjectiveWeights,
};
use crate::geometry::{
    cone_frame, immersion_check, jacobian_frame, minor_indices, pluecker_derivatives, ConeChart,
    ImmersionChart, JetFrame, DEFAULT_IMMERSION_EPS,
};
use crate::integrate::{
    constant_for, integrate, DomainSpec, IntegralResult, Normalization, QuadratureSpec,
};

/// Quadrature, normalization and immersion tolerance shared by every
/// computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    pub quadrature: QuadratureSpec,
    pub normalization: Normalization,
    pub immersion_eps: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            quadrature: QuadratureSpec::default(),
            normalization: Normalization::default(),
            immersion_eps: DEFAULT_IMMERSION_EPS,
        }
    }
}

/// A parametrized input: an immersion or the cone over a projective chart.
#[derive(Debug, Clone)]
pub enum Source {
    Immersion(ImmersionChart),
    Cone(ConeChart),
}

impl Source {
    pub fn intrinsic_dim(&self) -> usize {
        match self {
            Source::Immersion(c) => c.intrinsic_dim(),
            Source::Cone(c) => c.intrinsic_dim(),
        }
    }

    /// Dimension of the space the Jacobian columns live in.
    pub fn column_dim(&self) -> usize {
        match self {
            Source::Immersion(c) => c.ambient_dim(),
            Source::Cone(c) => c.homogeneous_dim(),
        }
    }

    pub fn domain(&self) -> &DomainSpec {
        match self {
            Source::Immersion(c) => c.domain(),
            Source::Cone(c) => c.domain(),
        }
    }

    pub fn frame(&self, t: &[f64]) -> Result<JetFrame> {
        match self {
            Source::Immersion(c) => jacobian_frame(c, t),
            Source::Cone(c) => cone_frame(c, t),
        }
    }

    /// Number of Plücker coordinates.
    pub fn pluecker_len(&self) -> usize {
        let params = match self {
            Source::Immersion(c) => c.intrinsic_dim(),
            Source::Cone(c) => c.intrinsic_dim() + 1,
        };
        minor_indices(self.column_dim(), params).len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KaehlerMode {
    /// Evaluate on the immersion coordinates.
    Direct,
    /// Evaluate on the Plücker vector split into real and imaginary halves.
    Pluecker,
}

/// Which integrand to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityKind {
    Canonical,
    GaussBonnet,
    Kaehler(KaehlerMode),
    Projective(usize),
    Form(PlueckerFormSpec),
}

impl DensityKind {
    pub fn name(&self) -> String {
        match self {
            DensityKind::Canonical => "canonical".into(),
            DensityKind::GaussBonnet => "gauss_bonnet".into(),
            DensityKind::Kaehler(KaehlerMode::Direct) => "kaehler".into(),
            DensityKind::Kaehler(KaehlerMode::Pluecker) => "kaehler_pluecker".into(),
            DensityKind::Projective(i) => format!("projective_{i}"),
            DensityKind::Form(_) => "form".into(),
        }
    }
}

/// Density of `kind` at `t`, after the immersion check.
pub fn density_at(source: &Source, kind: &DensityKind, eps: f64, t: &[f64]) -> Result<f64> {
    let frame = source.frame(t)?;
    immersion_check(&frame, eps)?;
    match kind {
        DensityKind::Canonical => canonical_density(&pluecker_derivatives(&frame)?),
        DensityKind::GaussBonnet => gauss_bonnet_density(&gauss_bonnet_fundamentals(&frame)?),
        DensityKind::Kaehler(KaehlerMode::Direct) => kaehler_density(&frame),
        DensityKind::Kaehler(KaehlerMode::Pluecker) => {
            kaehler_density_pluecker(&pluecker_derivatives(&frame)?)
        }
        DensityKind::Projective(i) => projective_density(*i, &pluecker_derivatives(&frame)?),
        DensityKind::Form(spec) => generic_pluecker_density(spec, &pluecker_derivatives(&frame)?),
    }
}

/// Integrate a density over the source's domain without certification.
pub fn integrate_density(
    source: &Source,
    kind: &DensityKind,
    settings: &Settings,
) -> Result<crate::integrate::Quadrature> {
    let eps = settings.immersion_eps;
    integrate(
        |t| density_at(source, kind, eps, t),
        source.domain(),
        &settings.quadrature,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    Winding,
    GaussDegree,
    EulerChar,
    Kaehler,
    Projective,
    Form,
}

/// An auxiliary value computed along an independent path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub name: String,
    pub value: f64,
}

/// A conventionally signed or rescaled integer reported next to `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Alias {
    pub name: String,
    pub value: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    pub kind: InvariantKind,
    pub density: String,
    pub result: IntegralResult,
    pub cross_checks: Vec<CrossCheck>,
    pub aliases: Vec<Alias>,
}

impl InvariantReport {
    pub fn alias(&self, name: &str) -> Option<i64> {
        self.aliases.iter().find(|a| a.name == name).and_then(|a| a.value)
    }

    pub fn cross_check(&self, name: &str) -> Option<f64> {
        self.cross_checks.iter().find(|c| c.name == name).map(|c| c.value)
    }
}

fn require_periodic(dom: &DomainSpec, what: &str) -> Result<()> {
    if dom.all_periodic() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{what} needs a closed parametrization: every domain variable must be periodic"
        )))
    }
}

fn certified(
    source: &Source,
    kind: InvariantKind,
    density: DensityKind,
    constant: f64,
    settings: &Settings,
) -> Result<InvariantReport> {
    let q = integrate_density(source, &density, settings)?;
    Ok(InvariantReport {
        kind,
        density: density.name(),
        result: IntegralResult::from_quadrature(q, constant, settings.quadrature.tol_cert),
        cross_checks: Vec::new(),
        aliases: Vec::new(),
    })
}

/// Winding number of the tangent of a closed plane curve.
///
/// `k` follows the sign of the integrand, so the counterclockwise circle
/// gives `k = −1`; the alias `turning = −k` is the counterclockwise-positive
/// turning number.
pub fn winding_number(curve: &ImmersionChart, settings: &Settings) -> Result<InvariantReport> {
    if curve.intrinsic_dim() != 1 || curve.ambient_dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "winding number needs a curve in R^2, got dimension {} in R^{}",
            curve.intrinsic_dim(),
            curve.ambient_dim()
        )));
    }
    require_periodic(curve.domain(), "winding number")?;
    let source = Source::Immersion(curve.clone());
    let constant = constant_for(settings.normalization, 1);
    let mut report = certified(
        &source,
        InvariantKind::Winding,
        DensityKind::Canonical,
        constant,
        settings,
    )?;
    report.aliases.push(Alias {
        name: "turning".into(),
        value: report.result.k.map(|k| -k),
    });
    Ok(report)
}

/// Degree of the Gauss map of a hypersurface, measured against the
/// normalization constant of `S^n`. Surfaces also carry the independent
/// fundamental-form integral and `χ = 2k`.
pub fn gauss_degree(hyp: &ImmersionChart, settings: &Settings) -> Result<InvariantReport> {
    let n = hyp.intrinsic_dim();
    if hyp.ambient_dim() != n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "Gauss degree needs a hypersurface, got dimension {n} in R^{}",
            hyp.ambient_dim()
        )));
    }
    let source = Source::Immersion(hyp.clone());
    let constant = constant_for(settings.normalization, n);
    let mut report = certified(
        &source,
        InvariantKind::GaussDegree,
        DensityKind::Canonical,
        constant,
        settings,
    )?;
    if n == 2 {
        let gb = integrate_density(&source, &DensityKind::GaussBonnet, settings)?;
        report.cross_checks.push(CrossCheck {
            name: "gauss_bonnet".into(),
            value: gb.value,
        });
        report.cross_checks.push(CrossCheck {
            name: "dual_path_difference".into(),
            value: report.result.raw - gb.value,
        });
        report.aliases.push(Alias {
            name: "chi".into(),
            value: report.result.k.map(|k| 2 * k),
        });
    }
    Ok(report)
}

/// Euler characteristic of a closed surface in `R^3`: the total curvature
/// certified against `2π`, which must be an even integer.
pub fn euler_characteristic(
    surface: &ImmersionChart,
    settings: &Settings,
) -> Result<(i64, InvariantReport)> {
    if surface.intrinsic_dim() != 2 || surface.ambient_dim() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "Euler characteristic needs a surface in R^3, got dimension {} in R^{}",
            surface.intrinsic_dim(),
            surface.ambient_dim()
        )));
    }
    let degree = gauss_degree(surface, settings)?;
    let q = degree.result;
    let mut result = crate::integrate::certify(
        q.raw,
        2.0 * std::f64::consts::PI,
        settings.quadrature.tol_cert,
    );
    result.levels_used = q.levels_used;
    result.converged = q.converged;
    result.trace = q.trace;
    let chi = match result.k {
        Some(chi) if chi % 2 == 0 => chi,
        _ => {
            return Err(Error::CertificationFailed {
                normalized: result.normalized,
                residual: (result.normalized / 2.0 - (result.normalized / 2.0).round()).abs() * 2.0,
            })
        }
    };
    let report = InvariantReport {
        kind: InvariantKind::EulerChar,
        density: degree.density,
        result,
        cross_checks: degree.cross_checks,
        aliases: vec![Alias {
            name: "chi".into(),
            value: Some(chi),
        }],
    };
    Ok((chi, report))
}

/// Integral of the Kähler form over a closed surface in `R^{2N}`.
///
/// The raw value is the invariant; `k` against `2π` is filled in only when
/// `certify` is set.
pub fn kaehler_invariant(
    imm: &ImmersionChart,
    mode: KaehlerMode,
    certify: bool,
    settings: &Settings,
) -> Result<InvariantReport> {
    if imm.intrinsic_dim() != 2 || !imm.ambient_dim().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "Kaehler invariant needs a surface in even dimension, got dimension {} in R^{}",
            imm.intrinsic_dim(),
            imm.ambient_dim()
        )));
    }
    require_periodic(imm.domain(), "Kaehler invariant")?;
    let source = Source::Immersion(imm.clone());
    let mut report = certified(
        &source,
        InvariantKind::Kaehler,
        DensityKind::Kaehler(mode),
        2.0 * std::f64::consts::PI,
        settings,
    )?;
    if !certify {
        report.result.k = None;
    }
    Ok(report)
}

/// Reports for `ω_0, ω_1, ω_2` and the bundle total `Σ α_i · raw_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectiveReport {
    pub forms: Vec<InvariantReport>,
    pub weights: ProjectiveWeights,
    pub weighted_total: f64,
}

/// Integrals of the three projective forms along a closed curve given by a
/// cone chart, each certified against `2π`.
pub fn projective_invariants(
    cone: &ConeChart,
    weights: ProjectiveWeights,
    settings: &Settings,
) -> Result<ProjectiveReport> {
    if cone.intrinsic_dim() != 1 || cone.homogeneous_dim() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "projective invariants need a curve in RP^2, got dimension {} with {} homogeneous coordinates",
            cone.intrinsic_dim(),
            cone.homogeneous_dim()
        )));
    }
    require_periodic(cone.domain(), "projective invariants")?;
    let source = Source::Cone(cone.clone());
    let forms = (0..3)
        .map(|i| {
            certified(
                &source,
                InvariantKind::Projective,
                DensityKind::Projective(i),
                2.0 * std::f64::consts::PI,
                settings,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let weighted_total = forms
        .iter()
        .zip(weights.alpha)
        .map(|(r, a)| a * r.result.raw)
        .sum();
    Ok(ProjectiveReport {
        forms,
        weights,
        weighted_total,
    })
}

/// Integral of a user-supplied form on Plücker coordinates, certified
/// against the normalization constant of the intrinsic dimension.
pub fn form_invariant(
    source: &Source,
    spec: &PlueckerFormSpec,
    settings: &Settings,
) -> Result<InvariantReport> {
    let n = source.intrinsic_dim();
    if spec.components != source.pluecker_len() || spec.degree != n {
        return Err(Error::DimensionMismatch(format!(
            "form has {} components and degree {}, input has {} Pluecker coordinates and dimension {n}",
            spec.components,
            spec.degree,
            source.pluecker_len()
        )));
    }
    certified(
        source,
        InvariantKind::Form,
        DensityKind::Form(spec.clone()),
        constant_for(settings.normalization, n),
        settings,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::VarDomain;
    use std::f64::consts::PI;

    fn curve(x: &str, y: &str) -> ImmersionChart {
        let dom = DomainSpec::new(vec![VarDomain::periodic(0.0, 2.0 * PI)]).unwrap();
        ImmersionChart::parse(1, &[x, y], dom).unwrap()
    }

    fn sphere(r: f64) -> ImmersionChart {
        let dom = DomainSpec::new(vec![
            VarDomain::periodic(0.0, 2.0 * PI),
            VarDomain::open(0.0, PI),
        ])
        .unwrap();
        let (a, b, c) = (
            format!("{r}*cos(t1)*sin(t2)"),
            format!("{r}*sin(t1)*sin(t2)"),
            format!("{r}*cos(t2)"),
        );
        ImmersionChart::parse(2, &[&a, &b, &c], dom).unwrap()
    }

    #[test]
    fn circle_winding() {
        let r = winding_number(&curve("cos(t1)", "sin(t1)"), &Settings::default()).unwrap();
        assert_eq!(r.result.k, Some(-1));
        assert_eq!(r.alias("turning"), Some(1));
        assert!((r.result.raw + 2.0 * PI).abs() < 1e-12);
        let r = winding_number(&curve("cos(2*t1)", "sin(2*t1)"), &Settings::default()).unwrap();
        assert_eq!(r.result.k, Some(-2));
    }

    #[test]
    fn clockwise_circle_flips_sign() {
        let r = winding_number(&curve("cos(t1)", "-sin(t1)"), &Settings::default()).unwrap();
        assert_eq!(r.result.k, Some(1));
    }

    #[test]
    fn cusp_reports_location() {
        let dom = DomainSpec::new(vec![VarDomain::periodic(-1.0, 1.0)]).unwrap();
        let c = ImmersionChart::parse(1, &["t1^2", "t1^3"], dom).unwrap();
        let err = winding_number(&c, &Settings::default()).unwrap_err();
        assert_eq!(err.code(), "DegenerateJacobian");
        assert_eq!(err.location(), Some(&[0.0][..]));
    }

    #[test]
    fn open_curve_domain_is_rejected() {
        let dom = DomainSpec::new(vec![VarDomain::open(0.0, 1.0)]).unwrap();
        let c = ImmersionChart::parse(1, &["t1", "t1^2"], dom).unwrap();
        assert_eq!(winding_number(&c, &Settings::default()).unwrap_err().code(), "Precondition");
    }

    #[test]
    fn sphere_degree_and_euler() {
        let s = Settings::default();
        let r = gauss_degree(&sphere(1.0), &s).unwrap();
        assert_eq!(r.result.k, Some(1));
        assert!((r.result.raw - 4.0 * PI).abs() < 1e-7);
        assert!(r.cross_check("dual_path_difference").unwrap().abs() < 1e-7);
        assert_eq!(r.alias("chi"), Some(2));
        assert_eq!(euler_characteristic(&sphere(5.0), &s).unwrap().0, 2);
    }

    #[test]
    fn product_torus_kaehler_vanishes() {
        let dom = DomainSpec::new(vec![VarDomain::periodic(0.0, 2.0 * PI); 2]).unwrap();
        let c = ImmersionChart::parse(2, &["cos(t1)", "sin(t1)", "cos(t2)", "sin(t2)"], dom)
            .unwrap();
        let r = kaehler_invariant(&c, KaehlerMode::Direct, false, &Settings::default()).unwrap();
        assert!(r.result.raw.abs() < 1e-8);
        assert_eq!(r.result.k, None);
    }

    #[test]
    fn affine_circle_projective() {
        let dom = DomainSpec::new(vec![VarDomain::periodic(0.0, 2.0 * PI)]).unwrap();
        let cone = ConeChart::new(
            1,
            vec![
                None,
                Some(crate::expr::parse("cos(t1)", 1).unwrap()),
                Some(crate::expr::parse("sin(t1)", 1).unwrap()),
            ],
            dom,
        )
        .unwrap();
        let r = projective_invariants(&cone, ProjectiveWeights::default(), &Settings::default())
            .unwrap();
        assert!((r.forms[0].result.raw.abs() - 2.0 * PI).abs() < 1e-9);
        assert!(r.forms.iter().all(|f| f.result.k.is_some()));
        assert_eq!(r.weighted_total, r.forms[0].result.raw);
    }

    #[test]
    fn canonical_form_spec_matches_gauss_degree() {
        let s = Settings::default();
        let src = Source::Immersion(sphere(1.0));
        let r = form_invariant(&src, &PlueckerFormSpec::canonical(2), &s).unwrap();
        assert_eq!(r.result.k, Some(1));
        let wrong = PlueckerFormSpec::canonical(1);
        assert_eq!(form_invariant(&src, &wrong, &s).unwrap_err().code(), "DimensionMismatch");
    }
}
