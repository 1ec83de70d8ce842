//! Command-line front end: manifests and meshes in, JSON reports out.
//!
//! Manifest grammar (one directive per line, `#` starts a comment):
//!
//! ```text
//! manifest  := line*
//! line      := "kind:" ("curve" | "hypersurface" | "immersion" | "cone")
//!            | "n:" INT
//!            | "ambient:" INT
//!            | "x" INT "=" (EXPR | "@chart")
//!            | "domain:" "t" INT "in" "[" EXPR "," EXPR ")" ("periodic" | "open")
//!            | "grid:" INT | "levels:" INT | "tol_conv:" REAL | "tol_cert:" REAL
//!            | "form:" PATH
//! ```
//!
//! Coordinates are `x1 … xN` for immersions; cones use homogeneous slots
//! `x0 … xN`, exactly one of which is `@chart`. Domain bounds are constant
//! expressions, so `2*pi` is accepted. A `form:` path is resolved relative
//! to the manifest.
//!
//! Form-spec grammar (one term per line):
//!
//! ```text
//! term := "phi(" EXPR ")" "d[" INT "]" ("^" "d[" INT "]")* "/" NORM "^" INT
//! NORM := "|p|" | "|p[" INT ("," INT)* "]|"
//! ```
//!
//! with variables `p_0 … p_{C-1}` in the expressions.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::forms::{PlueckerFormSpec, ProjectiveWeights};
use crate::geometry::{ConeChart, ImmersionChart};
use crate::integrate::{
    rule_sum, DomainSpec, IntegralResult, LevelTrace, Normalization, VarDomain, VarKind,
};
use crate::polyhedral::{
    exterior_angle_2_detail, exterior_angle_3_detail, parse_json_mesh, parse_off,
    polygon_exterior_angles, star_angles, total_invariant_1, total_invariant_2,
    total_invariant_3, PolyhedralReport, SimplicialImmersion,
};
use crate::smooth::{
    density_at, euler_characteristic, form_invariant, gauss_degree, kaehler_invariant,
    projective_invariants, winding_number, DensityKind, InvariantReport, KaehlerMode, Settings,
    Source,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifestKind {
    Curve,
    Hypersurface,
    Immersion,
    Cone,
}

/// A parsed manifest. `coords[i] = None` marks the `@chart` slot of a cone.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub kind: ManifestKind,
    pub n: usize,
    pub ambient: usize,
    pub coords: Vec<Option<Expr>>,
    pub domain: DomainSpec,
    pub form: Option<PathBuf>,
    pub grid: Option<usize>,
    pub levels: Option<usize>,
    pub tol_conv: Option<f64>,
    pub tol_cert: Option<f64>,
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        message: message.into(),
    }
}

fn constant(text: &str, line: usize) -> Result<f64> {
    let e = parse(text.trim(), 0).map_err(|e| format_err(line, e.to_string()))?;
    e.eval(&[]).map_err(|e| format_err(line, e.to_string()))
}

fn parse_domain(rest: &str, line: usize) -> Result<(usize, VarDomain)> {
    let bad = |m: &str| format_err(line, format!("{m}; expected `t<j> in [a, b) periodic|open`"));
    let (var, range) = rest.trim().split_once(" in ").ok_or_else(|| bad("missing `in`"))?;
    let j: usize = var
        .trim()
        .strip_prefix('t')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| bad("invalid variable"))?;
    let range = range.trim();
    let open = range.find('[').ok_or_else(|| bad("missing `[`"))?;
    let close = range.rfind([')', ']']).ok_or_else(|| bad("missing `)`"))?;
    let kind = match range[close + 1..].trim() {
        "periodic" => VarKind::Periodic,
        "open" => VarKind::Open,
        other => return Err(bad(&format!("unknown variable kind {other:?}"))),
    };
    let (a, b) = range[open + 1..close]
        .split_once(',')
        .ok_or_else(|| bad("missing `,`"))?;
    let (a, b) = (constant(a, line)?, constant(b, line)?);
    Ok((j, VarDomain { a, b, kind }))
}

/// Parse manifest text; `base` resolves a relative `form:` path.
pub fn parse_manifest(text: &str, base: Option<&Path>) -> Result<Manifest> {
    let mut kind = None;
    let mut n = None;
    let mut ambient = None;
    let mut coord_lines: Vec<(usize, usize, String)> = Vec::new();
    let mut domains: Vec<(usize, usize, VarDomain)> = Vec::new();
    let mut form = None;
    let (mut grid, mut levels, mut tol_conv, mut tol_cert) = (None, None, None, None);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, value)) = content.split_once(':') {
            let value = value.trim();
            let int = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| format_err(line, format!("expected an integer, found {v:?}")))
            };
            let real = |v: &str| constant(v, line);
            match key.trim() {
                "kind" => {
                    kind = Some(match value {
                        "curve" => ManifestKind::Curve,
                        "hypersurface" => ManifestKind::Hypersurface,
                        "immersion" => ManifestKind::Immersion,
                        "cone" => ManifestKind::Cone,
                        other => return Err(format_err(line, format!("unknown kind {other:?}"))),
                    })
                }
                "n" => n = Some(int(value)?),
                "ambient" => ambient = Some(int(value)?),
                "domain" => {
                    let (j, d) = parse_domain(value, line)?;
                    domains.push((line, j, d));
                }
                "form" => form = Some(base.map_or_else(|| PathBuf::from(value), |b| b.join(value))),
                "grid" => grid = Some(int(value)?),
                "levels" => levels = Some(int(value)?),
                "tol_conv" => tol_conv = Some(real(value)?),
                "tol_cert" => tol_cert = Some(real(value)?),
                other => return Err(format_err(line, format!("unknown directive {other:?}"))),
            }
        } else if let Some((lhs, rhs)) = content.split_once('=') {
            let idx = lhs
                .trim()
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| format_err(line, format!("invalid coordinate name {:?}", lhs.trim())))?;
            coord_lines.push((line, idx, rhs.trim().to_string()));
        } else {
            return Err(format_err(line, format!("unrecognized line {content:?}")));
        }
    }
    let kind = kind.ok_or_else(|| format_err(0, "missing `kind:` line"))?;
    let n = n.ok_or_else(|| format_err(0, "missing `n:` line"))?;
    let ambient = ambient.ok_or_else(|| format_err(0, "missing `ambient:` line"))?;
    match kind {
        ManifestKind::Curve if n != 1 || ambient != 2 => {
            return Err(Error::DimensionMismatch(format!(
                "a curve manifest needs n = 1 and ambient = 2, got n = {n}, ambient = {ambient}"
            )))
        }
        ManifestKind::Hypersurface if ambient != n + 1 => {
            return Err(Error::DimensionMismatch(format!(
                "a hypersurface manifest needs ambient = n + 1, got n = {n}, ambient = {ambient}"
            )))
        }
        _ => {}
    }

    let (first, count) = if kind == ManifestKind::Cone { (0, ambient + 1) } else { (1, ambient) };
    if coord_lines.len() != count {
        return Err(Error::DimensionMismatch(format!(
            "expected {count} coordinates, found {}",
            coord_lines.len()
        )));
    }
    let mut coords: Vec<Option<Option<Expr>>> = vec![None; count];
    for (line, idx, rhs) in coord_lines {
        if idx < first || idx >= first + count {
            return Err(format_err(
                line,
                format!("coordinate x{idx} out of range x{first}..x{}", first + count - 1),
            ));
        }
        let slot = &mut coords[idx - first];
        if slot.is_some() {
            return Err(format_err(line, format!("duplicate coordinate x{idx}")));
        }
        *slot = Some(if rhs == "@chart" {
            if kind != ManifestKind::Cone {
                return Err(format_err(line, "`@chart` is only valid in cone manifests"));
            }
            None
        } else {
            Some(parse(&rhs, n).map_err(|e| format_err(line, e.to_string()))?)
        });
    }
    let coords: Vec<Option<Expr>> = coords.into_iter().map(|c| c.expect("all slots filled")).collect();

    let mut vars: Vec<Option<VarDomain>> = vec![None; n];
    for (line, j, d) in domains {
        if j == 0 || j > n {
            return Err(format_err(line, format!("domain variable t{j} out of range t1..t{n}")));
        }
        if vars[j - 1].replace(d).is_some() {
            return Err(format_err(line, format!("duplicate domain for t{j}")));
        }
    }
    if let Some(j) = vars.iter().position(Option::is_none) {
        return Err(format_err(0, format!("missing domain line for t{}", j + 1)));
    }
    let domain = DomainSpec::new(vars.into_iter().map(|v| v.expect("checked")).collect())?;
    Ok(Manifest {
        kind,
        n,
        ambient,
        coords,
        domain,
        form,
        grid,
        levels,
        tol_conv,
        tol_cert,
    })
}

pub fn load_manifest(path: &Path) -> Result<Manifest> {
    let text = std::fs::read_to_string(path)?;
    parse_manifest(&text, path.parent())
}

impl Manifest {
    pub fn immersion(&self) -> Result<ImmersionChart> {
        if self.kind == ManifestKind::Cone {
            return Err(Error::Precondition(
                "this command needs an immersion manifest, not a cone".into(),
            ));
        }
        let coords = self.coords.iter().map(|c| c.clone().expect("no chart slot")).collect();
        ImmersionChart::new(self.n, coords, self.domain.clone())
    }

    pub fn cone(&self) -> Result<ConeChart> {
        if self.kind != ManifestKind::Cone {
            return Err(Error::Precondition("this command needs a cone manifest".into()));
        }
        ConeChart::new(self.n, self.coords.clone(), self.domain.clone())
    }

    pub fn source(&self) -> Result<Source> {
        Ok(if self.kind == ManifestKind::Cone {
            Source::Cone(self.cone()?)
        } else {
            Source::Immersion(self.immersion()?)
        })
    }

    /// Integrand used by `density-dump` when none is requested.
    pub fn default_density(&self) -> DensityKind {
        match self.kind {
            ManifestKind::Cone => DensityKind::Projective(0),
            ManifestKind::Immersion if self.n == 2 && self.ambient.is_multiple_of(2) && self.ambient > 3 => {
                DensityKind::Kaehler(KaehlerMode::Direct)
            }
            _ => DensityKind::Canonical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormArg {
    /// Vol(S^n)
    Sphere,
    /// 2^n π
    #[value(name = "paper")]
    PowerOfTwoPi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Direct,
    Pluecker,
}

#[derive(Debug, Parser)]
#[command(name = "gaussmap", version, about = "Integer invariants of immersions and meshes")]
struct Cli {
    /// Convergence tolerance between refinement levels.
    #[arg(long, global = true)]
    tol_conv: Option<f64>,
    /// Certification tolerance on |normalized − k|.
    #[arg(long, global = true)]
    tol_cert: Option<f64>,
    /// Number of grid-doubling levels.
    #[arg(long, global = true)]
    max_levels: Option<usize>,
    /// Normalization constant: Vol(S^n) or 2^n π.
    #[arg(long, global = true, value_enum, default_value = "sphere")]
    norm: NormArg,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tangent winding number of a closed plane curve.
    Winding { manifest: PathBuf },
    /// Gauss-map degree of a hypersurface.
    GaussDegree { manifest: PathBuf },
    /// Euler characteristic of a closed surface in R^3.
    Euler { manifest: PathBuf },
    /// Integral of the Kaehler form over a surface in R^{2N}.
    Kaehler {
        manifest: PathBuf,
        /// Also certify the integral against 2π.
        #[arg(long)]
        certify: bool,
        #[arg(long, value_enum, default_value = "direct")]
        mode: ModeArg,
    },
    /// Projective forms ω_0, ω_1, ω_2 along a closed cone-chart curve.
    Projective {
        manifest: PathBuf,
        /// Bundle weights α_0,α_1,α_2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        alpha: Option<Vec<f64>>,
    },
    /// Integral of a user-supplied form on Plücker coordinates.
    Form {
        manifest: PathBuf,
        /// Form-spec file; defaults to the manifest's `form:` line.
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Total exterior angle of a polygon, surface or 3-complex mesh.
    MeshTotal {
        mesh: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Exterior angle and link curvatures at one vertex.
    MeshVertex {
        mesh: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Write the density at every node of one grid as CSV.
    DensityDump {
        manifest: PathBuf,
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
        /// canonical, gauss_bonnet, kaehler, kaehler_pluecker, projective_<i> or form.
        #[arg(long)]
        density: Option<String>,
        /// Form-spec file used with `--density form`.
        #[arg(long)]
        spec: Option<PathBuf>,
    },
}

/// Exit code and the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                };
            }
            let body = json!({"error": {"code": "Usage", "message": e.kind().to_string(), "location": null}});
            return Outcome {
                code: 2,
                stdout: format!("{body}\n"),
                stderr: text,
            };
        }
    };
    let pretty = cli.pretty;
    let render = |v: &Value| {
        if pretty {
            serde_json::to_string_pretty(v).expect("serializable")
        } else {
            v.to_string()
        }
    };
    match execute(&cli) {
        Ok(v) => Outcome {
            code: 0,
            stdout: render(&v) + "\n",
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 1,
            stdout: render(&error_json(&e)) + "\n",
            stderr: format!("error: {e}\n"),
        },
    }
}

/// `{"error": {"code", "message", "location"}}`.
pub fn error_json(e: &Error) -> Value {
    json!({"error": {"code": e.code(), "message": e.to_string(), "location": e.location()}})
}

fn settings(cli: &Cli, m: Option<&Manifest>) -> Result<Settings> {
    let mut s = Settings::default();
    if let Some(m) = m {
        if let Some(g) = m.grid {
            s.quadrature.initial_grid = g;
        }
        if let Some(l) = m.levels {
            s.quadrature.max_levels = l;
        }
        if let Some(t) = m.tol_conv {
            s.quadrature.tol_conv = t;
        }
        if let Some(t) = m.tol_cert {
            s.quadrature.tol_cert = t;
        }
    }
    if let Some(t) = cli.tol_conv {
        s.quadrature.tol_conv = t;
    }
    if let Some(t) = cli.tol_cert {
        s.quadrature.tol_cert = t;
    }
    if let Some(l) = cli.max_levels {
        s.quadrature.max_levels = l;
    }
    s.normalization = match cli.norm {
        NormArg::Sphere => Normalization::Sphere,
        NormArg::PowerOfTwoPi => Normalization::PowerOfTwoPi,
    };
    s.quadrature.validate()?;
    Ok(s)
}

fn trace_json(trace: &[LevelTrace]) -> Value {
    serde_json::to_value(trace).expect("serializable")
}

fn result_fields(r: &IntegralResult) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("raw".into(), json!(r.raw));
    m.insert("norm_constant".into(), json!(r.norm_constant));
    m.insert("normalized".into(), json!(r.normalized));
    m.insert("k".into(), json!(r.k));
    m.insert("residual".into(), json!(r.residual));
    m.insert("converged".into(), json!(r.converged));
    m.insert("levels_used".into(), json!(r.levels_used));
    m.insert("trace".into(), trace_json(&r.trace));
    m
}

fn report_json(command: &str, r: &InvariantReport, s: &Settings) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("kind".into(), serde_json::to_value(r.kind).expect("serializable"));
    m.insert("density".into(), json!(r.density));
    m.extend(result_fields(&r.result));
    let aliases: serde_json::Map<String, Value> =
        r.aliases.iter().map(|a| (a.name.clone(), json!(a.value))).collect();
    m.extend(aliases.clone());
    m.insert("aliases".into(), Value::Object(aliases));
    let checks: serde_json::Map<String, Value> =
        r.cross_checks.iter().map(|c| (c.name.clone(), json!(c.value))).collect();
    m.insert("cross_checks".into(), Value::Object(checks));
    m.insert("settings".into(), serde_json::to_value(s).expect("serializable"));
    m.insert("experimental".into(), json!(false));
    Value::Object(m)
}

fn poly_json(r: &PolyhedralReport) -> Value {
    let primary = &r.certifications[0].result;
    let certs: Vec<Value> = r
        .certifications
        .iter()
        .map(|c| {
            json!({
                "constant": c.constant_name,
                "norm_constant": c.result.norm_constant,
                "normalized": c.result.normalized,
                "k": c.result.k,
                "residual": c.result.residual,
            })
        })
        .collect();
    json!({
        "command": "mesh-total",
        "dim": r.dim,
        "total": r.total,
        "raw": r.total,
        "normalized": primary.normalized,
        "k": primary.k,
        "residual": primary.residual,
        "kappa": r.kappa,
        "chi": r.chi,
        "per_vertex": r.per_vertex,
        "certifications": certs,
        "cross_checks": {},
        "experimental": r.experimental,
    })
}

enum Mesh {
    Polygon(Vec<Vec<f64>>),
    Complex(SimplicialImmersion),
}

fn load_mesh(path: &Path, dim: Option<usize>) -> Result<Mesh> {
    let text = std::fs::read_to_string(path)?;
    let mesh = if text.trim_start().starts_with('{') {
        parse_json_mesh(&text)?
    } else {
        parse_off(&text)?
    };
    if let Some(d) = dim {
        if d != mesh.dim() {
            return Err(Error::DimensionMismatch(format!(
                "--dim {d} given but the mesh has dimension {}",
                mesh.dim()
            )));
        }
    }
    Ok(if mesh.dim() == 1 {
        Mesh::Polygon(mesh.polygon()?)
    } else {
        Mesh::Complex(mesh)
    })
}

fn parse_density(name: &str, spec: Option<PlueckerFormSpec>) -> Result<DensityKind> {
    Ok(match name {
        "canonical" => DensityKind::Canonical,
        "gauss_bonnet" => DensityKind::GaussBonnet,
        "kaehler" => DensityKind::Kaehler(KaehlerMode::Direct),
        "kaehler_pluecker" => DensityKind::Kaehler(KaehlerMode::Pluecker),
        "form" => DensityKind::Form(
            spec.ok_or_else(|| Error::Precondition("density `form` needs --spec".into()))?,
        ),
        other => match other.strip_prefix("projective_").and_then(|i| i.parse().ok()) {
            Some(i) if i < 3 => DensityKind::Projective(i),
            _ => return Err(Error::Precondition(format!("unknown density {other:?}"))),
        },
    })
}

fn load_spec(path: &Path, source: &Source) -> Result<PlueckerFormSpec> {
    let text = std::fs::read_to_string(path)?;
    PlueckerFormSpec::parse(&text, source.pluecker_len())
}

fn execute(cli: &Cli) -> Result<Value> {
    match &cli.command {
        Command::Winding { manifest } => {
            let m = load_manifest(manifest)?;
            let s = settings(cli, Some(&m))?;
            Ok(report_json("winding", &winding_number(&m.immersion()?, &s)?, &s))
        }
        Command::GaussDegree { manifest } => {
            let m = load_manifest(manifest)?;
            let s = settings(cli, Some(&m))?;
            Ok(report_json("gauss-degree", &gauss_degree(&m.immersion()?, &s)?, &s))
        }
        Command::Euler { manifest } => {
            let m = load_manifest(manifest)?;
            let s = settings(cli, Some(&m))?;
            let (_, r) = euler_characteristic(&m.immersion()?, &s)?;
            Ok(report_json("euler", &r, &s))
        }
        Command::Kaehler {
            manifest,
            certify,
            mode,
        } => {
            let m = load_manifest(manifest)?;
            let s = settings(cli, Some(&m))?;
            let mode = match mode {
                ModeArg::Direct => KaehlerMode::Direct,
                ModeArg::Pluecker => KaehlerMode::Pluecker,
            };
            Ok(report_json("kaehler", &kaehler_invariant(&m.immersion()?, mode, *certify, &s)?, &s))
        }
        Command::Projective { manifest, alpha } => {
            let m = load_manifest(manifest)?;
            let s = settings(cli, Some(&m))?;
            let weights = match alpha {
                None => ProjectiveWeights::default(),
                Some(a) if a.len() == 3 => ProjectiveWeights {
                    alpha: [a[0], a[1], a[2]],
                },
                Some(a) => {
                    return Err(Error::Precondition(format!(
                        "--alpha needs three weights, got {}",
                        a.len()
                    )))
                }
            };
            let r = projective_invariants(&m.cone()?, weights, &s)?;
            let forms: Vec<Value> = r
                .forms
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    let mut o = result_fields(&f.result);
                    o.insert("form".into(), json!(i));
                    Value::Object(o)
                })
                .collect();
            Ok(json!({
                "command": "projective",
                "kind": "projective",
                "forms": forms,
                "k": r.forms.iter().map(|f| f.result.k).collect::<Vec<_>>(),
                "weights": r.weights.alpha,
                "weighted_total": r.weighted_total,
                "cross_checks": {},
                "settings": s,
                "experimental": false,
            }))
        }
        Command::Form { manifest, spec } => {
            let m = load_manifest(manifest)?;
            let s = settings(cli, Some(&m))?;
            let source = m.source()?;
            let path = spec.clone().or_else(|| m.form.clone()).ok_or_else(|| {
                Error::Precondition("no form spec: pass --spec or add a `form:` line".into())
            })?;
            let spec = load_spec(&path, &source)?;
            let mut v = report_json("form", &form_invariant(&source, &spec, &s)?, &s);
            v["spec"] = json!(spec.to_string());
            Ok(v)
        }
        Command::MeshTotal { mesh, dim } => match load_mesh(mesh, *dim)? {
            Mesh::Polygon(p) => Ok(poly_json(&total_invariant_1(&p)?)),
            Mesh::Complex(c) if c.dim() == 2 => Ok(poly_json(&total_invariant_2(&c)?)),
            Mesh::Complex(c) => Ok(poly_json(&total_invariant_3(&c)?)),
        },
        Command::MeshVertex { mesh, vertex, dim } => {
            let v = *vertex;
            match load_mesh(mesh, *dim)? {
                Mesh::Polygon(p) => {
                    let angles = polygon_exterior_angles(&p)?;
                    let a = angles.get(v).ok_or(Error::IndexOutOfRange {
                        index: v,
                        len: angles.len(),
                    })?;
                    Ok(json!({"command": "mesh-vertex", "dim": 1, "vertex": v, "exterior_angle": a, "experimental": false}))
                }
                Mesh::Complex(c) if c.dim() == 2 => {
                    let e = exterior_angle_2_detail(&c, v)?;
                    let angles = star_angles(&c, v)?;
                    Ok(json!({
                        "command": "mesh-vertex",
                        "dim": 2,
                        "vertex": v,
                        "exterior_angle": e.value,
                        "via_link": e.via_link,
                        "link_curvatures": e.link_curvatures.iter().map(|(mu, k)| json!({"mu": mu, "k1": k})).collect::<Vec<_>>(),
                        "angles": angles,
                        "experimental": false,
                    }))
                }
                Mesh::Complex(c) => {
                    let e = exterior_angle_3_detail(&c, v)?;
                    Ok(json!({
                        "command": "mesh-vertex",
                        "dim": 3,
                        "vertex": v,
                        "exterior_angle": e.value,
                        "link_curvatures": e.link_curvatures.iter().map(|(mu, k)| json!({"mu": mu, "k2": k})).collect::<Vec<_>>(),
                        "experimental": true,
                    }))
                }
            }
        }
        Command::DensityDump {
            manifest,
            grid,
            out,
            density,
            spec,
        } => {
            let m = load_manifest(manifest)?;
            let s = settings(cli, Some(&m))?;
            let source = m.source()?;
            let spec = match spec.clone().or_else(|| m.form.clone()) {
                Some(p) if density.as_deref() == Some("form") => Some(load_spec(&p, &source)?),
                _ => None,
            };
            let kind = match density {
                Some(d) => parse_density(d, spec)?,
                None => m.default_density(),
            };
            let dump = density_dump(&source, &kind, s.immersion_eps, *grid)?;
            std::fs::write(out, &dump.csv)?;
            Ok(json!({
                "command": "density-dump",
                "density": kind.name(),
                "grid": grid,
                "rows": dump.rows,
                "out": out.display().to_string(),
                "rule_value": dump.rule_value,
                "cell_volume": m.domain.cell_volume(*grid),
                "settings": s,
                "experimental": false,
            }))
        }
    }
}

/// CSV text of a density on one grid plus the matching rule value.
pub struct DensityDump {
    pub csv: String,
    pub rows: usize,
    pub rule_value: f64,
}

/// Tabulate `kind` on the grid with `grid` points per variable, in the
/// node order used by the quadrature.
pub fn density_dump(source: &Source, kind: &DensityKind, eps: f64, grid: usize) -> Result<DensityDump> {
    let dom = source.domain();
    if grid == 0 {
        return Err(Error::Precondition("grid must be positive".into()));
    }
    let density = |t: &[f64]| density_at(source, kind, eps, t);
    let mut csv = String::new();
    let header: Vec<String> = (1..=dom.dim()).map(|j| format!("t{j}")).collect();
    writeln!(csv, "{},density", header.join(",")).expect("write to string");
    let count = dom.node_count(grid);
    for flat in 0..count {
        let t = dom.node(grid, flat);
        let d = density(&t).map_err(|e| match e {
            Error::DegenerateJacobian { .. } | Error::At { .. } => e,
            other => Error::At {
                location: t.clone(),
                source: Box::new(other),
            },
        })?;
        for x in &t {
            csv.push_str(&format_g17(*x));
            csv.push(',');
        }
        csv.push_str(&format_g17(d));
        csv.push('\n');
    }
    let rule_value = rule_sum(&density, dom, grid)?;
    Ok(DensityDump {
        csv,
        rows: count,
        rule_value,
    })
}

/// C `%.17g` formatting.
pub fn format_g17(x: f64) -> String {
    const P: i32 = 17;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if !(-4..P).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa.to_string()), exp.abs())
    } else {
        trim(format!("{:.*}", (P - 1 - exp) as usize, x))
    }
}
