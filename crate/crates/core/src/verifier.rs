//! Samplewise verification of the structure lemmas and the integrability,
//! metric-connection and foliation theorems.
//!
//! A distribution property (integrable, totally geodesic, metric) is tested
//! pointwise at each sample for a spanning set of fields; the theorem's
//! operator condition is evaluated exactly on the same fields. A theorem is
//! `consistent` when both truth values agree at every sample.

use serde::Serialize;
use thiserror::Error;

use crate::bundles::{Parts, StructureKind};
use crate::calculus::gauss_weingarten::{bundle_samples, defect_value, tangent_samples, NamedField};
use crate::calculus::{Bundle, CalculusError, ChartField, Evaluator, FieldExpr, ImmersionInstance, Part};
use crate::linalg::{format_vector, scale_vec, sub_vec, Subspace, Vector};
use crate::scalar::MetallicScalar;

pub const SAMPLE_SEED: u64 = 0x6d6c_6c5f_7365_6564;
const EXTRA_SAMPLES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifierError {
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("check requires a {required} submanifold, instance is {found}")]
    WrongStructureKind { required: &'static str, found: &'static str },
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    RadicalIntegrable,
    ScreenIntegrable,
    MetricConnection,
    RadicalGeodesic,
    ScreenGeodesic,
    InvariantPartIntegrable,
    SemiRadicalIntegrable,
    SemiScreenIntegrable,
    SemiMetricConnection,
    SemiRadicalGeodesic,
    SemiScreenGeodesic,
    InvariantLemma,
    SemiInvariantProposition,
    Identities,
}

impl CheckId {
    pub const ALL: [CheckId; 14] = [
        Self::RadicalIntegrable,
        Self::ScreenIntegrable,
        Self::MetricConnection,
        Self::RadicalGeodesic,
        Self::ScreenGeodesic,
        Self::InvariantPartIntegrable,
        Self::SemiRadicalIntegrable,
        Self::SemiScreenIntegrable,
        Self::SemiMetricConnection,
        Self::SemiRadicalGeodesic,
        Self::SemiScreenGeodesic,
        Self::InvariantLemma,
        Self::SemiInvariantProposition,
        Self::Identities,
    ];

    /// The command-line identifier.
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::RadicalIntegrable => "3.1",
            Self::ScreenIntegrable => "3.2",
            Self::MetricConnection => "3.3",
            Self::RadicalGeodesic => "3.4",
            Self::ScreenGeodesic => "3.5",
            Self::InvariantPartIntegrable => "4.1",
            Self::SemiRadicalIntegrable => "4.2",
            Self::SemiScreenIntegrable => "4.3",
            Self::SemiMetricConnection => "4.4",
            Self::SemiRadicalGeodesic => "4.5",
            Self::SemiScreenGeodesic => "4.6",
            Self::InvariantLemma => "lemma3.1",
            Self::SemiInvariantProposition => "prop4.3",
            Self::Identities => "identities",
        }
    }

    pub fn parse(s: &str) -> Result<Self, VerifierError> {
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| VerifierError::UnknownCheck(s.to_string()))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::RadicalIntegrable => "radical distribution integrable (invariant)",
            Self::ScreenIntegrable => "screen distribution integrable (invariant)",
            Self::MetricConnection => "induced connection is metric (invariant)",
            Self::RadicalGeodesic => "radical distribution totally geodesic (invariant)",
            Self::ScreenGeodesic => "screen distribution totally geodesic (invariant)",
            Self::InvariantPartIntegrable => "invariant distribution L integrable (screen semi-invariant)",
            Self::SemiRadicalIntegrable => "radical distribution integrable (screen semi-invariant)",
            Self::SemiScreenIntegrable => "screen distribution integrable (screen semi-invariant)",
            Self::SemiMetricConnection => "induced connection is metric (screen semi-invariant)",
            Self::SemiRadicalGeodesic => "radical distribution totally geodesic (screen semi-invariant)",
            Self::SemiScreenGeodesic => "screen distribution totally geodesic (screen semi-invariant)",
            Self::InvariantLemma => "J-decomposition of the induced objects (invariant)",
            Self::SemiInvariantProposition => "J-decomposition of the induced objects (screen semi-invariant)",
            Self::Identities => "Gauss-Weingarten duality identities",
        }
    }

    pub fn required_kind(&self) -> Option<StructureKind> {
        match self {
            Self::RadicalIntegrable
            | Self::ScreenIntegrable
            | Self::MetricConnection
            | Self::RadicalGeodesic
            | Self::ScreenGeodesic
            | Self::InvariantLemma => Some(StructureKind::Invariant),
            Self::Identities => None,
            _ => Some(StructureKind::ScreenSemiInvariant),
        }
    }

    pub fn is_theorem(&self) -> bool {
        !matches!(
            self,
            Self::InvariantLemma | Self::SemiInvariantProposition | Self::Identities
        )
    }

    /// Ids that apply to an instance of the given kind.
    pub fn applicable(kind: StructureKind) -> Vec<CheckId> {
        Self::ALL
            .iter()
            .copied()
            .filter(|c| c.required_kind().map_or(true, |k| k == kind))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleRow {
    pub point: usize,
    pub lhs_condition: bool,
    pub rhs_condition: bool,
    pub witnesses: Vec<Witness>,
}

/// One exactly evaluated equation instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationRow {
    pub label: String,
    pub point: usize,
    pub fields: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub id: String,
    pub label: String,
    pub verdict: Verdict,
    pub samplewise: bool,
    pub rows: Vec<SampleRow>,
    pub equations: Vec<EquationRow>,
    pub notes: Vec<String>,
}

impl TheoremReport {
    fn not_applicable(id: CheckId, kind: StructureKind) -> Self {
        let note = match id.required_kind() {
            Some(k) => format!("requires a {} instance; instance is {}", k.label(), kind.label()),
            None => String::new(),
        };
        Self {
            id: id.as_str().into(),
            label: id.label().into(),
            verdict: Verdict::NotApplicable,
            samplewise: id.is_theorem(),
            rows: Vec::new(),
            equations: Vec::new(),
            notes: vec![note],
        }
    }

    fn from_rows(id: CheckId, rows: Vec<SampleRow>, notes: Vec<String>) -> Self {
        let consistent = rows.iter().all(|r| r.lhs_condition == r.rhs_condition);
        Self {
            id: id.as_str().into(),
            label: id.label().into(),
            verdict: if consistent {
                Verdict::Consistent
            } else {
                Verdict::Inconsistent
            },
            samplewise: true,
            rows,
            equations: Vec::new(),
            notes,
        }
    }

    fn from_equations(id: CheckId, equations: Vec<EquationRow>, notes: Vec<String>) -> Self {
        let ok = equations.iter().all(|e| e.holds);
        Self {
            id: id.as_str().into(),
            label: id.label().into(),
            verdict: if ok {
                Verdict::Consistent
            } else {
                Verdict::Inconsistent
            },
            samplewise: false,
            rows: Vec::new(),
            equations,
            notes,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Inconsistent
    }
}

fn show(v: &[MetallicScalar]) -> String {
    format!("({})", format_vector(v).join(", "))
}

/// Tracks a universally quantified condition and its first counterexample.
struct Forall {
    name: &'static str,
    holds: bool,
    witness: Option<Witness>,
}

impl Forall {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            holds: true,
            witness: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok && self.holds {
            self.holds = false;
            self.witness = Some(Witness {
                name: format!("{} fails", self.name),
                value: detail(),
            });
        }
    }

    fn vec_eq(&mut self, what: &str, a: &[MetallicScalar], b: &[MetallicScalar]) {
        self.check(a == b, || format!("{what}: {} ≠ {}", show(a), show(b)));
    }

    fn into_witness(self) -> Witness {
        self.witness.unwrap_or(Witness {
            name: format!("{} holds", self.name),
            value: "all sampled fields".into(),
        })
    }
}

pub struct Verifier<'a> {
    ev: &'a Evaluator<'a>,
    kind: StructureKind,
    seed: u64,
    constant_samples: bool,
}

impl<'a> Verifier<'a> {
    pub fn new(ev: &'a Evaluator<'a>, kind: StructureKind) -> Self {
        Self {
            ev,
            kind,
            seed: SAMPLE_SEED,
            constant_samples: kind != StructureKind::Invariant,
        }
    }

    /// Overrides the coefficient type of the sampled combinations.
    pub fn with_constant_samples(mut self, constant: bool) -> Self {
        self.constant_samples = constant;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn p(&self) -> MetallicScalar {
        let params = self.ev.instance().params();
        params.int(params.p())
    }

    fn q(&self) -> MetallicScalar {
        let params = self.ev.instance().params();
        params.int(params.q())
    }

    fn d(&self, idx: usize, u: &FieldExpr, x: &FieldExpr) -> Result<Parts<MetallicScalar>, VerifierError> {
        Ok(self.ev.derivative_parts(idx, u, x)?)
    }

    /// Samples for non-tensorial conditions use constant coefficients.
    fn samples(&self, idx: usize, bundle: Bundle) -> Vec<NamedField> {
        bundle_samples(self.ev, bundle, idx, EXTRA_SAMPLES, self.seed ^ idx as u64, self.constant_samples)
    }

    fn l_samples(&self, idx: usize) -> Vec<NamedField> {
        let mut out = self.samples(idx, Bundle::L0);
        out.extend(self.samples(idx, Bundle::Radical));
        for i in 0..self.ev.basis_len(idx, Bundle::Radical) {
            out.push(NamedField::new(
                format!("J xi{}", i + 1),
                FieldExpr::basis(Bundle::Radical, i).apply_j(),
            ));
        }
        out
    }

    fn tangent(&self) -> Vec<NamedField> {
        tangent_samples(self.ev, EXTRA_SAMPLES, self.seed, self.constant_samples)
    }

    fn subspace(&self, idx: usize, bundle: Bundle) -> Subspace<MetallicScalar> {
        let decomp = self.ev.decomposition(idx);
        match bundle {
            Bundle::Screen => decomp.screen().clone(),
            Bundle::Radical => decomp.radical().clone(),
            Bundle::Ltr => decomp.ltr().clone(),
            Bundle::Coscreen => decomp.coscreen().clone(),
            Bundle::L0 => self
                .ev
                .split(idx)
                .map(|s| s.l0.clone())
                .unwrap_or_else(|| Subspace::zero(decomp.params(), decomp.ambient_dim())),
        }
    }

    /// Pairwise brackets `∇̄_X Y − ∇̄_Y X` lie in `target`.
    fn bracket_closed(
        &self,
        idx: usize,
        fields: &[NamedField],
        target: &Subspace<MetallicScalar>,
        name: &'static str,
    ) -> Result<Forall, VerifierError> {
        let mut all = Forall::new(name);
        for (i, x) in fields.iter().enumerate() {
            for y in &fields[i + 1..] {
                let b = sub_vec(
                    &self.ev.derivative(idx, &x.expr, &y.expr)?,
                    &self.ev.derivative(idx, &y.expr, &x.expr)?,
                );
                all.check(target.contains_vector(&b), || {
                    format!("[{}, {}] = {}", x.name, y.name, show(&b))
                });
            }
        }
        Ok(all)
    }

    /// `∇_X Y` (tangent part) lies in `target` for all ordered pairs.
    fn geodesic(
        &self,
        idx: usize,
        fields: &[NamedField],
        target: &Subspace<MetallicScalar>,
        name: &'static str,
    ) -> Result<Forall, VerifierError> {
        let mut all = Forall::new(name);
        for x in fields {
            for y in fields {
                let t = self.d(idx, &x.expr, &y.expr)?.tangent();
                all.check(target.contains_vector(&t), || {
                    format!("nabla_{} {} = {}", x.name, y.name, show(&t))
                });
            }
        }
        Ok(all)
    }

    fn metric_defect_zero(&self, idx: usize, tangent: &[NamedField]) -> Result<Forall, VerifierError> {
        let mut all = Forall::new("metric defect vanishes");
        for u in tangent {
            for (vi, v) in tangent.iter().enumerate() {
                for z in &tangent[vi..] {
                    let d = defect_value(self.ev, idx, &u.expr, &v.expr, &z.expr)?;
                    all.check(d.is_zero(), || {
                        format!("(nabla_{} g)({}, {}) = {}", u.name, v.name, z.name, d)
                    });
                }
            }
        }
        Ok(all)
    }

    fn row(idx: usize, lhs: Forall, rhs_parts: Vec<Forall>, rhs: bool) -> SampleRow {
        let lhs_condition = lhs.holds;
        let mut witnesses = vec![lhs.into_witness()];
        witnesses.extend(rhs_parts.into_iter().map(Forall::into_witness));
        SampleRow {
            point: idx,
            lhs_condition,
            rhs_condition: rhs,
            witnesses,
        }
    }

    pub fn run(&self, id: CheckId) -> Result<TheoremReport, VerifierError> {
        if let Some(k) = id.required_kind() {
            if k != self.kind {
                return Ok(TheoremReport::not_applicable(id, self.kind));
            }
        }
        match id {
            CheckId::RadicalIntegrable => self.radical_integrable(),
            CheckId::ScreenIntegrable => self.screen_integrable(),
            CheckId::MetricConnection => self.metric_connection(),
            CheckId::RadicalGeodesic => self.radical_geodesic(),
            CheckId::ScreenGeodesic => self.screen_geodesic(),
            CheckId::InvariantPartIntegrable => self.invariant_part_integrable(),
            CheckId::SemiRadicalIntegrable => self.semi_radical_integrable(),
            CheckId::SemiScreenIntegrable => self.semi_screen_integrable(),
            CheckId::SemiMetricConnection => self.semi_metric_connection(),
            CheckId::SemiRadicalGeodesic => self.semi_radical_geodesic(),
            CheckId::SemiScreenGeodesic => self.semi_screen_geodesic(),
            CheckId::InvariantLemma => self.invariant_lemma(),
            CheckId::SemiInvariantProposition => self.semi_invariant_proposition(),
            CheckId::Identities => self.identities(),
        }
    }

    /// `A*_ξ U = −(screen part of ∇̄_U ξ)`, for any radical-valued field `ξ`.
    fn shape_star(&self, idx: usize, xi: &FieldExpr, u: &FieldExpr) -> Result<Vector<MetallicScalar>, VerifierError> {
        Ok(neg(&self.d(idx, u, xi)?.screen))
    }

    fn radical_integrable(&self) -> Result<TheoremReport, VerifierError> {
        let p = self.p();
        let mut rows = Vec::new();
        for idx in 0..self.ev.point_count() {
            let rad = self.samples(idx, Bundle::Radical);
            let lhs = self.bracket_closed(idx, &rad, &self.subspace(idx, Bundle::Radical), "radical brackets stay radical")?;
            let mut cond_a = Forall::new("A*_{JX}Y = A*_{JY}X and A*_X Y = A*_Y X");
            let mut cond_b = Forall::new("A*_{JX}Y - A*_{JY}X = p(A*_X Y - A*_Y X)");
            for x in &rad {
                for y in &rad {
                    let jx = x.expr.clone().apply_j();
                    let jy = y.expr.clone().apply_j();
                    let a_jx_y = self.shape_star(idx, &jx, &y.expr)?;
                    let a_jy_x = self.shape_star(idx, &jy, &x.expr)?;
                    let a_x_y = self.shape_star(idx, &x.expr, &y.expr)?;
                    let a_y_x = self.shape_star(idx, &y.expr, &x.expr)?;
                    let pair = format!("X={}, Y={}", x.name, y.name);
                    cond_a.vec_eq(&pair, &a_jx_y, &a_jy_x);
                    cond_a.vec_eq(&pair, &a_x_y, &a_y_x);
                    cond_b.vec_eq(
                        &pair,
                        &sub_vec(&a_jx_y, &a_jy_x),
                        &scale_vec(&p, &sub_vec(&a_x_y, &a_y_x)),
                    );
                }
            }
            let rhs = cond_a.holds || cond_b.holds;
            rows.push(Self::row(idx, lhs, vec![cond_a, cond_b], rhs));
        }
        Ok(TheoremReport::from_rows(CheckId::RadicalIntegrable, rows, samplewise_note()))
    }

    /// `h*(U, X)`: radical part of `∇̄_U X` (screen-valued `X`).
    fn h_star(&self, idx: usize, u: &FieldExpr, x: &FieldExpr) -> Result<Vector<MetallicScalar>, VerifierError> {
        Ok(self.d(idx, u, x)?.radical)
    }

    fn screen_integrable(&self) -> Result<TheoremReport, VerifierError> {
        let p = self.p();
        let mut rows = Vec::new();
        for idx in 0..self.ev.point_count() {
            let scr = self.samples(idx, Bundle::Screen);
            let lhs = self.bracket_closed(idx, &scr, &self.subspace(idx, Bundle::Screen), "screen brackets stay in the screen")?;
            let mut cond_a = Forall::new("h* symmetric and self-adjoint");
            let mut cond_b = Forall::new("h*(U,JV) - h*(V,JU) = p(h*(U,V) - h*(V,U))");
            for u in &scr {
                for v in &scr {
                    let ju = u.expr.clone().apply_j();
                    let jv = v.expr.clone().apply_j();
                    let h_uv = self.h_star(idx, &u.expr, &v.expr)?;
                    let h_vu = self.h_star(idx, &v.expr, &u.expr)?;
                    let h_u_jv = self.h_star(idx, &u.expr, &jv)?;
                    let h_v_ju = self.h_star(idx, &v.expr, &ju)?;
                    let h_ju_v = self.h_star(idx, &ju, &v.expr)?;
                    let pair = format!("U={}, V={}", u.name, v.name);
                    cond_a.vec_eq(&format!("symmetry {pair}"), &h_uv, &h_vu);
                    cond_a.vec_eq(&format!("self-adjointness {pair}"), &h_u_jv, &h_ju_v);
                    cond_b.vec_eq(
                        &pair,
                        &sub_vec(&h_u_jv, &h_v_ju),
                        &scale_vec(&p, &sub_vec(&h_uv, &h_vu)),
                    );
                }
            }
            let rhs = cond_a.holds || cond_b.holds;
            rows.push(Self::row(idx, lhs, vec![cond_a, cond_b], rhs));
        }
        Ok(TheoremReport::from_rows(CheckId::ScreenIntegrable, rows, samplewise_note()))
    }

    fn metric_connection(&self) -> Result<TheoremReport, VerifierError> {
        let p = self.p();
        let tangent = self.tangent();
        let mut rows = Vec::new();
        for idx in 0..self.ev.point_count() {
            let lhs = self.metric_defect_zero(idx, &tangent)?;
            let mut cond = Forall::new("A*_{J xi}U = p A*_xi U");
            for xi in self.samples(idx, Bundle::Radical) {
                let jxi = xi.expr.clone().apply_j();
                for u in &tangent {
                    let a_j = self.shape_star(idx, &jxi, &u.expr)?;
                    let a = self.shape_star(idx, &xi.expr, &u.expr)?;
                    cond.vec_eq(&format!("xi={}, U={}", xi.name, u.name), &a_j, &scale_vec(&p, &a));
                }
            }
            let rhs = cond.holds;
            rows.push(Self::row(idx, lhs, vec![cond], rhs));
        }
        Ok(TheoremReport::from_rows(CheckId::MetricConnection, rows, samplewise_note()))
    }

    fn radical_geodesic(&self) -> Result<TheoremReport, VerifierError> {
        let p = self.p();
        let mut rows = Vec::new();
        for idx in 0..self.ev.point_count() {
            let rad = self.samples(idx, Bundle::Radical);
            let lhs = self.geodesic(idx, &rad, &self.subspace(idx, Bundle::Radical), "nabla_xi xi' stays radical")?;
            let mut cond = Forall::new("h^l(xi, JU) = p h^l(xi, U)");
            for xi in &rad {
                for u in self.samples(idx, Bundle::Screen) {
                    let ju = u.expr.clone().apply_j();
                    let a = self.d(idx, &xi.expr, &ju)?.ltr;
                    let b = self.d(idx, &xi.expr, &u.expr)?.ltr;
                    cond.vec_eq(&format!("xi={}, U={}", xi.name, u.name), &a, &scale_vec(&p, &b));
                }
            }
            let rhs = cond.holds;
            rows.push(Self::row(idx, lhs, vec![cond], rhs));
        }
        Ok(TheoremReport::from_rows(CheckId::RadicalGeodesic, rows, samplewise_note()))
    }

    fn screen_geodesic(&self) -> Result<TheoremReport, VerifierError> {
        let p = self.p();
        let mut rows = Vec::new();
        for idx in 0..self.ev.point_count() {
            let scr = self.samples(idx, Bundle::Screen);
            let lhs = self.geodesic(idx, &scr, &self.subspace(idx, Bundle::Screen), "nabla_U V stays in the screen")?;
            let mut cond = Forall::new("h*(U, JV) = p h*(U, V)");
            for u in &scr {
                for v in &scr {
                    let jv = v.expr.clone().apply_j();
                    let a = self.h_star(idx, &u.expr, &jv)?;
                    let b = self.h_star(idx, &u.expr, &v.expr)?;
                    cond.vec_eq(&format!("U={}, V={}", u.name, v.name), &a, &scale_vec(&p, &b));
                }
            }
            let rhs = cond.holds;
            rows.push(Self::row(idx, lhs, vec![cond], rhs));
        }
        Ok(TheoremReport::from_rows(CheckId::ScreenGeodesic, rows, samplewise_note()))
    }

    fn invariant_part_integrable(&self) -> Result<TheoremReport, VerifierError> {
        let (p, q) = (self.p(), self.q());
        let mut rows = Vec::new();
        for idx in 0..self.ev.point_count() {
            let l_fields = self.l_samples(idx);
            let l_space = self
                .ev
                .split(idx)
                .map(|s| s.l.clone())
                .ok_or_else(|| CalculusError::Unavailable("L".into()))?;
            let lhs = self.bracket_closed(idx, &l_fields, &l_space, "brackets stay in L")?;
            let mut cond = Forall::new("h^l(JW, JU) = p h^l(U, JW) + q h^l(U, W)");
            for u in &l_fields {
                for w in &l_fields {
                    let ju = u.expr.clone().apply_j();
                    let jw = w.expr.clone().apply_j();
                    let a = self.d(idx, &jw, &ju)?.ltr;
                    let b = self.d(idx, &u.expr, &jw)?.ltr;
                    let c = self.d(idx, &u.expr, &w.expr)?.ltr;
                    let rhs = crate::linalg::add_vec(&scale_vec(&p, &b), &scale_vec(&q, &c));
                    cond.vec_eq(&format!("U={}, W={}", u.name, w.name), &a, &rhs);
                }
            }
            let rhs = cond.holds;
            rows.push(Self::row(idx, lhs, vec![cond], rhs));
        }
        Ok(TheoremReport::from_rows(CheckId::InvariantPartIntegrable, rows, semi_notes(&[])))
    }

    /// `∇*_U X`: screen part of `∇̄_U X`.
    fn nabla_star(&self, idx: usize, u: &FieldExpr, x: &FieldExpr) -> Result<Vector<MetallicScalar>, VerifierError> {
        Ok(self.d(idx, u, x)?.screen)
    }

    fn semi_radical_integrable(&self) -> Result<TheoremReport, VerifierError> {
        let p = self.p();
        let space = self.ev.instance().ambient();
        let mut rows = Vec::new();
        for idx in 0..self.ev.point_count() {
            let rad = self.samples(idx, Bundle::Radical);
            let lhs = self.bracket_closed(idx, &rad, &self.subspace(idx, Bundle::Radical), "radical brackets stay radical")?;
            let mut cond_a = Forall::new("nabla*_U JW - nabla*_W JU = p(A*_U W - A*_W U)");
            let mut cond_b = Forall::new("J nabla*_U JW - J nabla*_W JU = p(nabla*_U JW - nabla*_W JU)");
            for u in &rad {
                for w in &rad {
                    let ju = u.expr.clone().apply_j();
                    let jw = w.expr.clone().apply_j();
                    let n_u_jw = self.nabla_star(idx, &u.expr, &jw)?;
                    let n_w_ju = self.nabla_star(idx, &w.expr, &ju)?;
                    // A*_U W: U in the radical slot, W the direction
                    let a_u_w = self.shape_star(idx, &u.expr, &w.expr)?;
                    let a_w_u = self.shape_star(idx, &w.expr, &u.expr)?;
                    let diff = sub_vec(&n_u_jw, &n_w_ju);
                    let pair = format!("U={}, W={}", u.name, w.name);
                    cond_a.vec_eq(&pair, &diff, &scale_vec(&p, &sub_vec(&a_u_w, &a_w_u)));
                    cond_b.vec_eq(
                        &pair,
                        &sub_vec(&space.j(&n_u_jw), &space.j(&n_w_ju)),
                        &scale_vec(&p, &diff),
                    );
                }
            }
            let rhs = cond_a.holds || cond_b.holds;
            rows.push(Self::row(idx, lhs, vec![cond_a, cond_b], rhs));
        }
        Ok(TheoremReport::from_rows(
            CheckId::SemiRadicalIntegrable,
            rows,
            semi_notes(&["J applied to screen-level derivatives acts on the ambient representative vectors"]),
        ))
    }

    fn semi_screen_integrable(&self) -> Result<TheoremReport, VerifierError> {
        let p = self.p();
        let mut rows = Vec::new();
        for idx in 0..self.ev.point_count() {
            let scr = self.samples(idx, Bundle::Screen);
            let lhs = self.bracket_closed(idx, &scr, &self.subspace(idx, Bundle::Screen), "screen brackets stay in the screen")?;
            let mut cond_a = Forall::new("nabla*_U JW - nabla*_W JU = p(nabla*_U W - nabla*_W U)");
            let mut cond_b = Forall::new("nabla*_U JW = nabla*_W JU");
            for u in &scr {
                for w in &scr {
                    let ju = u.expr.clone().apply_j();
                    let jw = w.expr.clone().apply_j();
                    let n_u_jw = self.nabla_star(idx, &u.expr, &jw)?;
                    let n_w_ju = self.nabla_star(idx, &w.expr, &ju)?;
                    let n_u_w = self.nabla_star(idx, &u.expr, &w.expr)?;
                    let n_w_u = self.nabla_star(idx, &w.expr, &u.expr)?;
                    let pair = format!("U={}, W={}", u.name, w.name);
                    cond_a.vec_eq(
                        &pair,
                        &sub_vec(&n_u_jw, &n_w_ju),
                        &scale_vec(&p, &sub_vec(&n_u_w, &n_w_u)),
                    );
                    cond_b.vec_eq(&pair, &n_u_jw, &n_w_ju);
                }
            }
            let rhs = cond_a.holds || cond_b.holds;
            rows.push(Self::row(idx, lhs, vec![cond_a, cond_b], rhs));
        }
        Ok(TheoremReport::from_rows(
            CheckId::SemiScreenIntegrable,
            rows,
            semi_notes(&["the distribution tested is the screen distribution, as in the statement"]),
        ))
    }

    fn semi_metric_connection(&self) -> Result<TheoremReport, VerifierError> {
        let (p, q) = (self.p(), self.q());
        let tangent = self.tangent();
        let mut rows = Vec::new();
        for idx in 0..self.ev.point_count() {
            let lhs = self.metric_defect_zero(idx, &tangent)?;
            let mut cond_a = Forall::new("nabla*_U J xi = -p A*_xi U");
            let mut cond_b = Forall::new("q A*_xi U = 0");
            for xi in self.samples(idx, Bundle::Radical) {
                let jxi = xi.expr.clone().apply_j();
                for u in &tangent {
                    let n = self.nabla_star(idx, &u.expr, &jxi)?;
                    let a = self.shape_star(idx, &xi.expr, &u.expr)?;
                    let pair = format!("xi={}, U={}", xi.name, u.name);
                    cond_a.vec_eq(&pair, &n, &scale_vec(&-p.clone(), &a));
                    let qa = scale_vec(&q, &a);
                    cond_b.check(qa.iter().all(MetallicScalar::is_zero), || {
                        format!("{pair}: q A*_xi U = {}", show(&qa))
                    });
                }
            }
            let rhs = cond_a.holds || cond_b.holds;
            rows.push(Self::row(idx, lhs, vec![cond_a, cond_b], rhs));
        }
        Ok(TheoremReport::from_rows(CheckId::SemiMetricConnection, rows, semi_notes(&[])))
    }

    fn semi_radical_geodesic(&self) -> Result<TheoremReport, VerifierError> {
        let p = self.p();
        let mut rows = Vec::new();
        for idx in 0..self.ev.point_count() {
            let rad = self.samples(idx, Bundle::Radical);
            let lhs = self.geodesic(idx, &rad, &self.subspace(idx, Bundle::Radical), "nabla_xi xi' stays radical")?;
            let mut cond = Forall::new("nabla*_xi JU = p nabla*_xi U");
            for xi in &rad {
                for u in self.samples(idx, Bundle::Screen) {
                    let ju = u.expr.clone().apply_j();
                    let a = self.nabla_star(idx, &xi.expr, &ju)?;
                    let b = self.nabla_star(idx, &xi.expr, &u.expr)?;
                    cond.vec_eq(&format!("xi={}, U={}", xi.name, u.name), &a, &scale_vec(&p, &b));
                }
            }
            let rhs = cond.holds;
            rows.push(Self::row(idx, lhs, vec![cond], rhs));
        }
        Ok(TheoremReport::from_rows(CheckId::SemiRadicalGeodesic, rows, semi_notes(&[])))
    }

    fn semi_screen_geodesic(&self) -> Result<TheoremReport, VerifierError> {
        let p = self.p();
        let mut rows = Vec::new();
        for idx in 0..self.ev.point_count() {
            let scr = self.samples(idx, Bundle::Screen);
            let lhs = self.geodesic(idx, &scr, &self.subspace(idx, Bundle::Screen), "nabla_U V stays in the screen")?;
            let mut cond = Forall::new("nabla*_U JV = p nabla*_U V");
            for u in &scr {
                for v in &scr {
                    let jv = v.expr.clone().apply_j();
                    let a = self.nabla_star(idx, &u.expr, &jv)?;
                    let b = self.nabla_star(idx, &u.expr, &v.expr)?;
                    cond.vec_eq(&format!("U={}, V={}", u.name, v.name), &a, &scale_vec(&p, &b));
                }
            }
            let rhs = cond.holds;
            rows.push(Self::row(idx, lhs, vec![cond], rhs));
        }
        Ok(TheoremReport::from_rows(CheckId::SemiScreenGeodesic, rows, semi_notes(&[])))
    }

    fn invariant_lemma(&self) -> Result<TheoremReport, VerifierError> {
        let space = self.ev.instance().ambient();
        let tangent = self.tangent();
        let mut eqs = Vec::new();
        for idx in 0..self.ev.point_count() {
            for u in &tangent {
                for v in &tangent {
                    let fields = format!("U={}, V={}", u.name, v.name);
                    let sv = v.expr.clone().project(Part::Screen).apply_j();
                    let lv = v.expr.clone().project(Part::Radical).apply_j();
                    let jv = v.expr.clone().apply_j();
                    let d_v = self.d(idx, &u.expr, &v.expr)?;
                    let d_sv = self.d(idx, &u.expr, &sv)?;
                    let d_lv = self.d(idx, &u.expr, &lv)?;
                    let d_jv = self.d(idx, &u.expr, &jv)?;
                    // S∇_U V = ∇*_U SV − A*_{LV} U
                    let s_nabla = space.j(&d_v.screen);
                    let rhs10 = crate::linalg::add_vec(&d_sv.screen, &d_lv.screen);
                    eqs.push(eq("screen part of J nabla_U V", idx, &fields, &s_nabla, &rhs10));
                    // L∇_U V = h*(U, SV) + ∇*ᵗ_U LV
                    let l_nabla = space.j(&d_v.radical);
                    let rhs11 = crate::linalg::add_vec(&d_sv.radical, &d_lv.radical);
                    eqs.push(eq("radical part of J nabla_U V", idx, &fields, &l_nabla, &rhs11));
                    eqs.push(eq("J h^l(U,V) = h^l(U,JV)", idx, &fields, &space.j(&d_v.ltr), &d_jv.ltr));
                    eqs.push(eq(
                        "J h^s(U,V) = h^s(U,JV)",
                        idx,
                        &fields,
                        &space.j(&d_v.coscreen),
                        &d_jv.coscreen,
                    ));
                    let j_nabla = space.j(&d_v.tangent());
                    let rhs14 = crate::linalg::add_vec(&rhs10, &rhs11);
                    eqs.push(eq("J nabla_U V reassembled", idx, &fields, &j_nabla, &rhs14));
                }
            }
        }
        Ok(TheoremReport::from_equations(
            CheckId::InvariantLemma,
            eqs,
            vec!["the radical connection term is taken along U in the reassembled equation".into()],
        ))
    }

    fn semi_invariant_proposition(&self) -> Result<TheoremReport, VerifierError> {
        let space = self.ev.instance().ambient();
        let tangent = self.tangent();
        let params = self.ev.instance().params();
        let mut eqs = Vec::new();
        for idx in 0..self.ev.point_count() {
            for u in &tangent {
                for v in &tangent {
                    let fields = format!("U={}, V={}", u.name, v.name);
                    let jv = v.expr.clone().apply_j();
                    let d_v = self.d(idx, &u.expr, &v.expr)?;
                    let d_jv = self.d(idx, &u.expr, &jv)?;
                    let lhs = space.j(&d_v.tangent());
                    let rhs = sub_vec(
                        &crate::linalg::add_vec(&d_jv.screen, &d_jv.radical),
                        &space.j(&d_v.ltr),
                    );
                    eqs.push(eq("J nabla_U V = nabla*_U JV + h*(U,JV) - J h^l(U,V)", idx, &fields, &lhs, &rhs));
                    let zero = vec![params.zero(); d_jv.ltr.len()];
                    eqs.push(eq("h^l(U,JV) = 0", idx, &fields, &d_jv.ltr, &zero));
                    eqs.push(eq(
                        "h^s(U,JV) = J h^s(U,V)",
                        idx,
                        &fields,
                        &d_jv.coscreen,
                        &space.j(&d_v.coscreen),
                    ));
                }
            }
        }
        Ok(TheoremReport::from_equations(
            CheckId::SemiInvariantProposition,
            eqs,
            vec!["sampled fields use constant coefficients; J V leaves TN in general, so h^l(U, JV) = 0 fails for fields whose L2 part varies".into()],
        ))
    }

    fn identities(&self) -> Result<TheoremReport, VerifierError> {
        let fields = self.tangent();
        let rows = crate::calculus::identity_suite(self.ev, &fields)?;
        let eqs = rows
            .into_iter()
            .map(|r| EquationRow {
                label: r.label.to_string(),
                point: r.point,
                fields: r.fields,
                lhs: r.lhs,
                rhs: r.rhs,
                holds: r.holds,
            })
            .collect();
        Ok(TheoremReport::from_equations(CheckId::Identities, eqs, Vec::new()))
    }
}

fn neg(v: &[MetallicScalar]) -> Vector<MetallicScalar> {
    v.iter().map(|x| -x.clone()).collect()
}

fn eq(label: &str, point: usize, fields: &str, lhs: &[MetallicScalar], rhs: &[MetallicScalar]) -> EquationRow {
    EquationRow {
        label: label.into(),
        point,
        fields: fields.into(),
        lhs: show(lhs),
        rhs: show(rhs),
        holds: lhs == rhs,
    }
}

fn samplewise_note() -> Vec<String> {
    vec!["samplewise: distribution properties are tested pointwise at the sample points".into()]
}

fn semi_notes(extra: &[&str]) -> Vec<String> {
    let mut out = samplewise_note();
    out.push("sampled fields use constant coefficients, since the conditions involve the screen connection and are not tensorial".into());
    out.extend(extra.iter().map(|s| s.to_string()));
    out
}

/// For every pair of chart fields, the bracket at each sample lies in the
/// span of the fields there.
pub fn integrable_at(inst: &ImmersionInstance, span_fields: &[ChartField]) -> Vec<bool> {
    let params = inst.params();
    let m = inst.chart_dim();
    inst.sample_points()
        .iter()
        .map(|pt| {
            let at = |f: &ChartField| -> Vector<MetallicScalar> { f.iter().map(|c| c.eval(pt)).collect() };
            let span = Subspace::span(params, m, &span_fields.iter().map(at).collect::<Vec<_>>());
            span_fields.iter().enumerate().all(|(i, x)| {
                span_fields[i + 1..]
                    .iter()
                    .all(|y| span.contains_vector(&at(&inst.lie_bracket(x, y))))
            })
        })
        .collect()
}
