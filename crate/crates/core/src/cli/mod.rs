//! Manifest loading, command dispatch and report assembly.

pub mod manifest;
pub mod report;

use std::fmt;
use std::str::FromStr;

use crate::bundles::{analyze_point, PointAnalysis, ScreenChoice, StructureKind};
use crate::calculus::{ChartField, Evaluator, ScreenMode};
use crate::linalg::{format_vector, Subspace, Vector};
use crate::scalar::MetallicScalar;
use crate::structure::{tangent_splittings, SplitMode};
use crate::verifier::{CheckId, Verifier, Witness};
use crate::Error;

pub use manifest::{load_manifest, parse_manifest, HintEntry, Manifest, ManifestError, Note};
pub use report::{Bases, CheckRow, Classification, ManifestInfo, PointReport, Report, Status, ToolInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Classify,
    Verify,
    Frames,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Analyze => "analyze",
            Self::Classify => "classify",
            Self::Verify => "verify",
            Self::Frames => "frames",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "analyze" => Ok(Self::Analyze),
            "classify" => Ok(Self::Classify),
            "verify" => Ok(Self::Verify),
            "frames" => Ok(Self::Frames),
            other => Err(Error::Invalid(format!("unknown command `{other}`"))),
        }
    }
}

/// Screen selection requested on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HintOverride {
    /// Ignore any manifest hint and select the screen automatically.
    Automatic,
    Entries(Vec<HintEntry>),
}

impl HintOverride {
    /// `none`, or a comma-separated list of frame names and coordinate indices.
    pub fn parse(s: &str) -> Self {
        if s.trim() == "none" {
            Self::Automatic
        } else {
            Self::Entries(s.split(',').map(HintEntry::parse_flag).collect())
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub checks: Option<Vec<String>>,
    pub screen_hint: Option<HintOverride>,
}

/// Per-point analysis shared by every command.
struct Analysis {
    points: Vec<PointAnalysis>,
    hint: Option<Vec<ChartField>>,
    kind: StructureKind,
    classification: Classification,
    notes: Vec<Note>,
}

fn hint_fields(manifest: &Manifest, opts: &RunOptions) -> Result<Option<Vec<ChartField>>, Error> {
    let entries = match &opts.screen_hint {
        Some(HintOverride::Automatic) => None,
        Some(HintOverride::Entries(e)) => Some(e.clone()),
        None => manifest.hint.clone(),
    };
    Ok(match entries {
        Some(e) => Some(manifest.resolve_hint(&e)?),
        None => None,
    })
}

fn analyze(manifest: &Manifest, opts: &RunOptions) -> Result<Analysis, Error> {
    let inst = &manifest.instance;
    let hint = hint_fields(manifest, opts)?;
    let mut points = Vec::new();
    for pt in inst.sample_points() {
        let frame = inst.frame_at(pt);
        let hint_vectors: Option<Vec<Vector<MetallicScalar>>> = hint
            .as_ref()
            .map(|fs| fs.iter().map(|f| inst.push_forward(f).eval(pt)).collect());
        points.push(analyze_point(inst.ambient(), &frame, hint_vectors.as_deref())?);
    }
    let first = &points[0].decomposition;
    let dims = (first.m(), first.n(), first.r());
    if points
        .iter()
        .any(|p| (p.decomposition.m(), p.decomposition.n(), p.decomposition.r()) != dims)
    {
        return Err(Error::Unsupported("radical rank differs between sample points".into()));
    }
    let classification = Classification {
        class: first.class().label().into(),
        m: dims.0,
        n: dims.1,
        r: dims.2,
    };
    let mut notes = Vec::new();
    let kind = if points.iter().all(|p| p.kind == points[0].kind) {
        points[0].kind
    } else {
        notes.push(Note {
            kind: "structure".into(),
            text: "structure kind differs between sample points; treated as generic".into(),
        });
        StructureKind::Generic
    };
    if let Some(reason) = points.iter().find_map(|p| p.repair_failure.clone()) {
        if kind == StructureKind::Generic {
            notes.push(Note {
                kind: "screen".into(),
                text: format!("no invariant or screen semi-invariant screen found: {reason}"),
            });
        }
    }
    Ok(Analysis {
        points,
        hint,
        kind,
        classification,
        notes,
    })
}

fn basis(s: &Subspace<MetallicScalar>) -> report::Basis {
    s.basis().iter().map(|v| format_vector(v)).collect()
}

fn choice_label(c: ScreenChoice) -> &'static str {
    match c {
        ScreenChoice::Default => "default",
        ScreenChoice::Hint => "hint",
        ScreenChoice::Repaired => "repaired",
    }
}

fn point_report(manifest: &Manifest, idx: usize, a: &PointAnalysis, full: bool) -> PointReport {
    let space = manifest.instance.ambient();
    let d = &a.decomposition;
    let split = if a.semi_invariance.holds {
        crate::bundles::screen_split(space, d).ok()
    } else {
        None
    };
    PointReport {
        index: idx,
        point: format_vector(&manifest.instance.sample_points()[idx]),
        screen_choice: choice_label(d.choice()).into(),
        bases: Bases {
            tangent: basis(d.tangent()),
            radical: basis(d.radical()),
            screen: basis(d.screen()),
            ltr: basis(d.ltr()),
            coscreen: basis(d.coscreen()),
            l0: split.as_ref().map(|s| basis(&s.l0)),
            l1: split.as_ref().map(|s| basis(&s.l1)),
            l2: split.as_ref().map(|s| basis(&s.l2)),
            l: split.as_ref().map(|s| basis(&s.l)),
        },
        relations: d.relations(space.metric()),
        invariance: full.then(|| a.invariance.clone()),
        semi_invariance: full.then(|| a.semi_invariance.clone()),
    }
}

/// Check row that holds when `ok` holds at every point.
fn pointwise(id: &str, label: &str, a: &Analysis, ok: impl Fn(usize, &PointAnalysis) -> bool) -> CheckRow {
    let failing: Vec<Witness> = a
        .points
        .iter()
        .enumerate()
        .filter(|(i, p)| !ok(*i, p))
        .map(|(i, _)| Witness {
            name: format!("point {i}"),
            value: "fails".into(),
        })
        .collect();
    CheckRow::new(id, label, failing.is_empty(), failing)
}

fn claim_rows(manifest: &Manifest, a: &Analysis, all: bool) -> Vec<CheckRow> {
    let claims = &manifest.claims;
    let mut rows = Vec::new();
    if let Some(c) = &claims.class {
        rows.push(CheckRow::new(
            "claim:class",
            "claimed lightlike class",
            *c == a.classification.class,
            vec![Witness {
                name: "computed".into(),
                value: a.classification.class.clone(),
            }],
        ));
    }
    if !all {
        return rows;
    }
    if let Some(k) = &claims.structure_kind {
        rows.push(CheckRow::new(
            "claim:structure_kind",
            "claimed structure kind",
            k == a.kind.label(),
            vec![Witness {
                name: "computed".into(),
                value: a.kind.label().into(),
            }],
        ));
    }
    if let Some(vs) = &claims.radical {
        let inst = &manifest.instance;
        rows.push(pointwise("claim:radical", "claimed radical distribution", a, |idx, p| {
            let pt = &inst.sample_points()[idx];
            let claimed: Vec<_> = vs.iter().map(|v| v.eval(pt)).collect();
            let s = Subspace::span(inst.params(), inst.ambient().dim(), &claimed);
            s.dim() == claimed.len() && s.same_span(p.decomposition.radical())
        }));
    }
    if let Some(dims) = claims.split_dims {
        rows.push(pointwise("claim:split_dims", "claimed dimensions of L0, L1, L2", a, |_, p| {
            p.semi_invariance.dims == Some(dims)
        }));
    }
    rows
}

fn splitting_row(manifest: &Manifest, a: &Analysis, mode: SplitMode) -> CheckRow {
    let inst = &manifest.instance;
    let space = inst.ambient();
    let mut witnesses = Vec::new();
    for (idx, p) in a.points.iter().enumerate() {
        let d = &p.decomposition;
        let split = crate::bundles::screen_split(space, d).ok();
        let pt = &inst.sample_points()[idx];
        let mut vectors: Vec<(String, Vector<MetallicScalar>)> = inst
            .frame_at(pt)
            .into_iter()
            .enumerate()
            .map(|(k, v)| (format!("d/{}", inst.variables()[k]), v))
            .collect();
        for (name, f) in inst.named_frames() {
            vectors.push((name.clone(), inst.push_forward(f).eval(pt)));
        }
        for (name, u) in vectors {
            let ok = tangent_splittings(space, d, split.as_ref(), mode, &u)
                .map(|s| s.memberships_hold() && s.reconstructs(space, &u))
                .unwrap_or(false);
            if !ok {
                witnesses.push(Witness {
                    name: format!("point {idx}"),
                    value: format!("{name} does not split"),
                });
            }
        }
    }
    CheckRow::new(
        "tangent-splitting",
        "tangent vectors and their images split along the decomposition",
        witnesses.is_empty(),
        witnesses,
    )
}

fn analysis_rows(manifest: &Manifest, a: &Analysis) -> Vec<CheckRow> {
    let mut rows = vec![pointwise(
        "decomposition",
        "screen, radical, transversal and co-screen relations",
        a,
        |_, p| p.decomposition.relations(manifest.instance.ambient().metric()).all_hold(),
    )];
    match a.kind {
        StructureKind::Invariant => {
            rows.push(pointwise("invariance", "screen and radical are J-invariant", a, |_, p| {
                p.invariance.invariant
            }));
            rows.push(pointwise("ltr-invariance", "lightlike transversal bundle is J-invariant", a, |_, p| {
                p.invariance.ltr_invariant
            }));
            rows.push(pointwise("coscreen-invariance", "screen transversal bundle is J-invariant", a, |_, p| {
                p.invariance.coscreen_invariant
            }));
            rows.push(splitting_row(manifest, a, SplitMode::Invariant));
        }
        StructureKind::ScreenSemiInvariant => {
            rows.push(pointwise(
                "screen-semi-invariance",
                "J(Rad) and J(ltr) lie in the screen",
                a,
                |_, p| p.semi_invariance.holds,
            ));
            rows.push(pointwise("l0-invariance", "L0 is J-invariant", a, |_, p| {
                p.semi_invariance.l0_invariant == Some(true)
            }));
            rows.push(pointwise("l0-nondegenerate", "L0 is non-degenerate", a, |_, p| {
                p.semi_invariance.l0_nondegenerate == Some(true)
            }));
            rows.push(pointwise("l-invariance", "L is J-invariant", a, |_, p| {
                p.semi_invariance.l_invariant == Some(true)
            }));
            rows.push(pointwise("coscreen-invariance", "screen transversal bundle is J-invariant", a, |_, p| {
                p.semi_invariance.coscreen_invariant
            }));
            rows.push(splitting_row(manifest, a, SplitMode::ScreenSemiInvariant));
        }
        StructureKind::Generic => {}
    }
    rows
}

fn requested_checks(manifest: &Manifest, opts: &RunOptions, kind: StructureKind) -> Result<Vec<CheckId>, Error> {
    let ids = match &opts.checks {
        Some(ids) => ids.clone(),
        None if !manifest.checks.is_empty() => manifest.checks.clone(),
        None => vec!["all".into()],
    };
    let mut out = Vec::new();
    for id in ids {
        let expanded = if id.trim() == "all" {
            CheckId::applicable(kind)
        } else {
            vec![CheckId::parse(&id)?]
        };
        for c in expanded {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

fn screen_mode(a: &Analysis) -> ScreenMode {
    match &a.hint {
        Some(h) => ScreenMode::Hint(h.clone()),
        None if a.points.iter().all(|p| p.decomposition.choice() == ScreenChoice::Repaired) => ScreenMode::Repair,
        None => ScreenMode::Default,
    }
}

pub fn run(command: Command, manifest: &Manifest, opts: &RunOptions) -> Result<Report, Error> {
    let a = analyze(manifest, opts)?;
    let mut checks = Vec::new();
    let mut points = Vec::new();
    let mut structure_kind = Some(a.kind.label().to_string());
    match command {
        Command::Classify => {
            structure_kind = None;
            checks.extend(claim_rows(manifest, &a, false));
        }
        Command::Analyze => {
            points = a
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| point_report(manifest, i, p, true))
                .collect();
            checks.extend(analysis_rows(manifest, &a));
            checks.extend(claim_rows(manifest, &a, true));
        }
        Command::Frames => {
            points = a
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| point_report(manifest, i, p, false))
                .collect();
            checks.push(analysis_rows(manifest, &a).remove(0));
        }
        Command::Verify => {
            let ids = requested_checks(manifest, opts, a.kind)?;
            let ev = Evaluator::new(&manifest.instance, screen_mode(&a))?;
            let verifier = Verifier::new(&ev, a.kind);
            for id in ids {
                checks.push(CheckRow::from_theorem(verifier.run(id)?));
            }
        }
    }
    let mut notes = manifest.notes.clone();
    notes.extend(a.notes);
    let mut report = Report {
        tool: ToolInfo::default(),
        manifest: ManifestInfo {
            name: manifest.name.clone(),
            sha256: manifest.hash.clone(),
        },
        command: command.as_str().into(),
        classification: a.classification,
        structure_kind,
        points,
        checks,
        notes,
        status: Status::Pass,
    };
    report.status = Status::from_bool(!report.failed());
    Ok(report)
}
