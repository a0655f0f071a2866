//! JSON manifests describing an immersion into a flat metallic ambient space.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::calculus::{
    parse_expression, parse_scalar, ChartField, ExprContext, ExprError, ImmersionInstance, PolyVec,
};
use crate::linalg::{AmbientMetric, Matrix, Signature};
use crate::scalar::{MetallicParams, MetallicScalar};
use crate::structure::{build_structure, AmbientSpace, DiagTag, StructureError, StructureSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("malformed JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("{field}: {msg}")]
    Field { field: String, msg: String },
    #[error("{field}: {source} (at offset {})", source.position())]
    Expr { field: String, source: ExprError },
    #[error("{field}: unsupported: {msg}")]
    Unsupported { field: String, msg: String },
}

impl ManifestError {
    fn field(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Self::Field {
            field: field.into(),
            msg: msg.into(),
        }
    }

    pub fn is_unsupported(&self) -> bool {
        matches!(self, Self::Unsupported { .. })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    description: Option<String>,
    metallic: RawMetallic,
    ambient: RawAmbient,
    structure: RawStructure,
    #[serde(default)]
    constants: BTreeMap<String, String>,
    /// Pairs `(c, s)` that must satisfy `c² + s² = 1`.
    #[serde(default)]
    pythagorean: Vec<[String; 2]>,
    submanifold: RawSubmanifold,
    #[serde(default)]
    frames: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    screen_hint: Option<Vec<HintEntry>>,
    sample_points: Vec<Vec<String>>,
    #[serde(default)]
    checks: Vec<String>,
    #[serde(default)]
    claims: RawClaims,
    #[serde(default)]
    notes: Vec<Note>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetallic {
    p: i64,
    q: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAmbient {
    dim: usize,
    signature: Vec<i8>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStructure {
    #[serde(rename = "J", default)]
    j: Option<Vec<String>>,
    #[serde(rename = "J_matrix", default)]
    j_matrix: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubmanifold {
    chart_dim: usize,
    #[serde(default)]
    variables: Option<Vec<String>>,
    components: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClaims {
    #[serde(default)]
    class: Option<String>,
    #[serde(default)]
    structure_kind: Option<String>,
    /// Ambient vectors, possibly depending on the chart variables.
    #[serde(default)]
    radical: Option<Vec<Vec<String>>>,
    #[serde(default)]
    split_dims: Option<[usize; 3]>,
}

/// Screen hint entry: a named frame, a 1-based coordinate field index, or
/// explicit chart coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum HintEntry {
    Index(usize),
    Name(String),
    Coefficients(Vec<String>),
}

impl HintEntry {
    /// Command-line form: a frame name or a coordinate index.
    pub fn parse_flag(s: &str) -> Self {
        match s.trim().parse::<usize>() {
            Ok(i) => Self::Index(i),
            Err(_) => Self::Name(s.trim().to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Note {
    pub kind: String,
    pub text: String,
}

#[derive(Debug, Clone, Default)]
pub struct Claims {
    pub class: Option<String>,
    pub structure_kind: Option<String>,
    pub radical: Option<Vec<PolyVec>>,
    pub split_dims: Option<[usize; 3]>,
}

/// A fully validated manifest.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub name: String,
    pub description: Option<String>,
    /// Hex SHA-256 of the manifest bytes.
    pub hash: String,
    pub instance: ImmersionInstance,
    pub constants: BTreeMap<String, MetallicScalar>,
    pub hint: Option<Vec<HintEntry>>,
    pub checks: Vec<String>,
    pub claims: Claims,
    pub notes: Vec<Note>,
}

impl Manifest {
    /// Chart fields for hint entries, resolved against this manifest.
    pub fn resolve_hint(&self, entries: &[HintEntry]) -> Result<Vec<ChartField>, ManifestError> {
        resolve_hint(&self.instance, &self.context(), entries)
    }

    pub fn context(&self) -> ExprContext {
        ExprContext::new(self.instance.params(), self.instance.variables().to_vec())
            .with_constants(self.constants.clone())
    }
}

pub fn load_manifest(path: &Path) -> Result<Manifest, ManifestError> {
    let bytes = std::fs::read(path).map_err(|e| ManifestError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_manifest(&bytes)
}

pub fn manifest_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn parse_manifest(bytes: &[u8]) -> Result<Manifest, ManifestError> {
    let raw: RawManifest = serde_json::from_slice(bytes).map_err(|e| ManifestError::Json {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let hash = manifest_hash(bytes);

    let params = MetallicParams::new(raw.metallic.p, raw.metallic.q)
        .map_err(|e| ManifestError::field("metallic", e.to_string()))?;

    if raw.ambient.signature.len() != raw.ambient.dim {
        return Err(ManifestError::field(
            "ambient.signature",
            format!(
                "length {} does not match ambient.dim {}",
                raw.ambient.signature.len(),
                raw.ambient.dim
            ),
        ));
    }
    let signature = Signature::new(raw.ambient.signature.clone())
        .map_err(|e| ManifestError::field("ambient.signature", e.to_string()))?;
    let metric = AmbientMetric::new(signature);
    let n = raw.ambient.dim;

    let mut constants = BTreeMap::new();
    let builtin_ctx = ExprContext::new(params, Vec::new());
    for (name, src) in &raw.constants {
        let field = format!("constants.{name}");
        if crate::calculus::expr::BUILTINS.contains(&name.as_str()) {
            return Err(ManifestError::field(field, "shadows a builtin name"));
        }
        let v = parse_scalar(src, &builtin_ctx).map_err(|source| ManifestError::Expr {
            field: field.clone(),
            source,
        })?;
        constants.insert(name.clone(), v);
    }
    for (i, [c, s]) in raw.pythagorean.iter().enumerate() {
        let field = format!("pythagorean[{i}]");
        let get = |k: &String| {
            constants
                .get(k)
                .cloned()
                .ok_or_else(|| ManifestError::field(&field, format!("undeclared constant `{k}`")))
        };
        let (cv, sv) = (get(c)?, get(s)?);
        if !(cv.clone() * cv + sv.clone() * sv).is_one() {
            return Err(ManifestError::field(field, format!("{c}² + {s}² ≠ 1")));
        }
    }

    let m = raw.submanifold.chart_dim;
    let variables = match &raw.submanifold.variables {
        Some(v) => {
            if v.len() != m {
                return Err(ManifestError::field(
                    "submanifold.variables",
                    format!("{} names for chart_dim {m}", v.len()),
                ));
            }
            v.clone()
        }
        None => (1..=m).map(|i| format!("u{i}")).collect(),
    };
    for v in &variables {
        if constants.contains_key(v) || crate::calculus::expr::BUILTINS.contains(&v.as_str()) {
            return Err(ManifestError::field(
                "submanifold.variables",
                format!("`{v}` clashes with a constant or builtin"),
            ));
        }
    }
    let ctx = ExprContext::new(params, variables.clone()).with_constants(constants.clone());
    let expr = |field: String, src: &str| {
        parse_expression(src, &ctx).map_err(|source| ManifestError::Expr { field, source })
    };

    let spec = structure_spec(&raw.structure, n, params, &expr)?;
    let structure = build_structure(params, &spec, &metric).map_err(|e| structure_error("structure", e))?;
    let ambient = AmbientSpace::new(metric, structure).map_err(|e| structure_error("structure", e))?;

    if raw.submanifold.components.len() != n {
        return Err(ManifestError::field(
            "submanifold.components",
            format!("{} components for ambient.dim {n}", raw.submanifold.components.len()),
        ));
    }
    let phi = PolyVec::new(
        raw.submanifold
            .components
            .iter()
            .enumerate()
            .map(|(i, s)| expr(format!("submanifold.components[{i}]"), s))
            .collect::<Result<Vec<_>, _>>()?,
    );

    let mut frames = BTreeMap::new();
    for (name, coeffs) in &raw.frames {
        let field = format!("frames.{name}");
        if coeffs.len() != m {
            return Err(ManifestError::field(field, format!("{} coefficients for chart_dim {m}", coeffs.len())));
        }
        let f = coeffs
            .iter()
            .enumerate()
            .map(|(i, s)| expr(format!("{field}[{i}]"), s))
            .collect::<Result<Vec<_>, _>>()?;
        frames.insert(name.clone(), f);
    }

    if raw.sample_points.is_empty() {
        return Err(ManifestError::field("sample_points", "at least one sample point is required"));
    }
    let mut points = Vec::new();
    for (i, pt) in raw.sample_points.iter().enumerate() {
        let field = format!("sample_points[{i}]");
        if pt.len() != m {
            return Err(ManifestError::field(field, format!("{} coordinates for chart_dim {m}", pt.len())));
        }
        let coords = pt
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let v = parse_scalar(s, &builtin_ctx.clone().with_constants(constants.clone()))
                    .map_err(|source| ManifestError::Expr {
                        field: format!("{field}[{k}]"),
                        source,
                    })?;
                if !v.is_rational() {
                    return Err(ManifestError::field(format!("{field}[{k}]"), "sample coordinates must be rational"));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>, _>>()?;
        points.push(coords);
    }

    let instance = ImmersionInstance::new(ambient, variables, phi, frames, points)
        .map_err(|e| ManifestError::field("submanifold", e.to_string()))?;

    for (i, id) in raw.checks.iter().enumerate() {
        if id != "all" {
            crate::verifier::CheckId::parse(id)
                .map_err(|e| ManifestError::field(format!("checks[{i}]"), e.to_string()))?;
        }
    }

    let hint = match raw.screen_hint {
        Some(entries) => {
            resolve_hint(&instance, &ctx, &entries)?;
            Some(entries)
        }
        None => None,
    };

    let radical = match &raw.claims.radical {
        Some(vs) => Some(
            vs.iter()
                .enumerate()
                .map(|(i, v)| {
                    if v.len() != n {
                        return Err(ManifestError::field(
                            format!("claims.radical[{i}]"),
                            format!("{} entries for ambient.dim {n}", v.len()),
                        ));
                    }
                    v.iter()
                        .enumerate()
                        .map(|(k, s)| expr(format!("claims.radical[{i}][{k}]"), s))
                        .collect::<Result<Vec<_>, _>>()
                        .map(PolyVec::new)
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };

    Ok(Manifest {
        name: raw.name.unwrap_or_else(|| "unnamed".into()),
        description: raw.description,
        hash,
        instance,
        constants,
        hint,
        checks: raw.checks,
        claims: Claims {
            class: raw.claims.class,
            structure_kind: raw.claims.structure_kind,
            radical,
            split_dims: raw.claims.split_dims,
        },
        notes: raw.notes,
    })
}

fn structure_error(field: &str, e: StructureError) -> ManifestError {
    match e {
        StructureError::UnsupportedStructure(msg) => ManifestError::Unsupported {
            field: field.into(),
            msg,
        },
        other => ManifestError::field(field, other.to_string()),
    }
}

fn structure_spec(
    raw: &RawStructure,
    n: usize,
    params: MetallicParams,
    expr: &dyn Fn(String, &str) -> Result<crate::calculus::Poly, ManifestError>,
) -> Result<StructureSpec, ManifestError> {
    match (&raw.j, &raw.j_matrix) {
        (Some(_), Some(_)) => Err(ManifestError::field("structure", "give either J or J_matrix, not both")),
        (None, None) => Err(ManifestError::field("structure", "missing J or J_matrix")),
        (Some(tags), None) => {
            if tags.len() != n {
                return Err(ManifestError::field("structure.J", format!("{} entries for ambient.dim {n}", tags.len())));
            }
            tags.iter()
                .enumerate()
                .map(|(i, t)| {
                    DiagTag::parse(t).ok_or_else(|| {
                        ManifestError::field(format!("structure.J[{i}]"), format!("expected `sigma` or `p-sigma`, found `{t}`"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(StructureSpec::Diagonal)
        }
        (None, Some(rows)) => {
            if rows.len() != n {
                return Err(ManifestError::field("structure.J_matrix", format!("{} rows for ambient.dim {n}", rows.len())));
            }
            let mut out = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(ManifestError::field(
                        format!("structure.J_matrix[{i}]"),
                        format!("{} entries for ambient.dim {n}", row.len()),
                    ));
                }
                let mut r = Vec::new();
                for (k, s) in row.iter().enumerate() {
                    let field = format!("structure.J_matrix[{i}][{k}]");
                    let poly = expr(field.clone(), s)?;
                    let c = poly.as_constant().ok_or(ManifestError::Unsupported {
                        field,
                        msg: "J must be constant; non-constant structures are not parallel for the flat connection".into(),
                    })?;
                    r.push(c);
                }
                out.push(r);
            }
            let m = Matrix::from_rows(params, out).map_err(|e| ManifestError::field("structure.J_matrix", e.to_string()))?;
            Ok(StructureSpec::Matrix(m))
        }
    }
}

fn resolve_hint(
    inst: &ImmersionInstance,
    ctx: &ExprContext,
    entries: &[HintEntry],
) -> Result<Vec<ChartField>, ManifestError> {
    let m = inst.chart_dim();
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let field = format!("screen_hint[{i}]");
            match e {
                HintEntry::Index(k) => {
                    if *k == 0 || *k > m {
                        return Err(ManifestError::field(field, format!("coordinate index {k} outside 1..={m}")));
                    }
                    Ok(inst.coordinate_field(k - 1))
                }
                HintEntry::Name(name) => inst
                    .named_frames()
                    .get(name)
                    .cloned()
                    .ok_or_else(|| ManifestError::field(field, format!("unknown frame `{name}`"))),
                HintEntry::Coefficients(cs) => {
                    if cs.len() != m {
                        return Err(ManifestError::field(field, format!("{} coefficients for chart_dim {m}", cs.len())));
                    }
                    cs.iter()
                        .enumerate()
                        .map(|(k, s)| {
                            parse_expression(s, ctx).map_err(|source| ManifestError::Expr {
                                field: format!("{field}[{k}]"),
                                source,
                            })
                        })
                        .collect()
                }
            }
        })
        .collect()
}
