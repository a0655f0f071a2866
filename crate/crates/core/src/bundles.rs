//! Radical, screen, lightlike transversal and screen transversal bundles at a
//! point, plus the invariance and screen semi-invariance tests built on them.
//!
//! Everything here is generic over [`FieldElement`] so that the same
//! construction run on jets gives exact first derivatives of the frames.

use serde::Serialize;
use thiserror::Error;

use crate::field::FieldElement;
use crate::linalg::{
    combine, gram, invert, is_zero_vec, orthogonal_within, pairing, scale_vec, solve, sub_vec,
    value_rank, zero_vector, LinalgError, Matrix, Subspace, Vector,
};
use crate::linalg::nullspace;
use crate::scalar::{MetallicParams, MetallicScalar};
use crate::structure::AmbientSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("tangent frame is linearly dependent")]
    DependentFrame,
    #[error("the induced metric is non-degenerate; the submanifold is not lightlike")]
    NotLightlike,
    #[error("invalid screen distribution: {0}")]
    InvalidScreen(String),
    #[error("screen repair failed: {0}")]
    RepairFailed(String),
    #[error("transversal construction failed: {0}")]
    Transversal(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LightlikeClass {
    #[serde(rename = "r-lightlike")]
    RLightlike,
    #[serde(rename = "co-isotropic")]
    CoIsotropic,
    #[serde(rename = "isotropic")]
    Isotropic,
    #[serde(rename = "totally-lightlike")]
    TotallyLightlike,
}

impl LightlikeClass {
    pub fn label(&self) -> &'static str {
        match self {
            Self::RLightlike => "r-lightlike",
            Self::CoIsotropic => "co-isotropic",
            Self::Isotropic => "isotropic",
            Self::TotallyLightlike => "totally-lightlike",
        }
    }
}

/// Class from tangent dimension `m`, codimension `n` and radical rank `r`.
pub fn classify(m: usize, n: usize, r: usize) -> Result<LightlikeClass, BundleError> {
    if r == 0 {
        return Err(BundleError::NotLightlike);
    }
    Ok(match (r == m, r == n) {
        (true, true) => LightlikeClass::TotallyLightlike,
        (true, false) => LightlikeClass::Isotropic,
        (false, true) => LightlikeClass::CoIsotropic,
        (false, false) => LightlikeClass::RLightlike,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScreenChoice {
    Default,
    Hint,
    Repaired,
}

#[derive(Debug, Clone)]
pub enum ScreenStrategy<T> {
    Default,
    Hint(Vec<Vector<T>>),
    Repair,
}

impl<T> ScreenStrategy<T> {
    pub fn choice(&self) -> ScreenChoice {
        match self {
            Self::Default => ScreenChoice::Default,
            Self::Hint(_) => ScreenChoice::Hint,
            Self::Repair => ScreenChoice::Repaired,
        }
    }
}

/// Components of an ambient vector in `S(TN) ⊕ Rad ⊕ ltr ⊕ S(TN⊥)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Parts<T> {
    pub screen: Vector<T>,
    pub radical: Vector<T>,
    pub ltr: Vector<T>,
    pub coscreen: Vector<T>,
}

impl<T: FieldElement> Parts<T> {
    pub fn tangent(&self) -> Vector<T> {
        crate::linalg::add_vec(&self.screen, &self.radical)
    }

    pub fn transversal(&self) -> Vector<T> {
        crate::linalg::add_vec(&self.ltr, &self.coscreen)
    }
}

#[derive(Debug, Clone)]
pub struct BundleDecomposition<T> {
    params: MetallicParams,
    m: usize,
    n: usize,
    class: LightlikeClass,
    choice: ScreenChoice,
    tangent: Subspace<T>,
    normal: Subspace<T>,
    radical: Subspace<T>,
    screen: Subspace<T>,
    ltr: Subspace<T>,
    coscreen: Subspace<T>,
    xi: Vec<Vector<T>>,
    transversal: Vec<Vector<T>>,
    union_inverse: Matrix<T>,
}

impl<T: FieldElement> BundleDecomposition<T> {
    pub fn params(&self) -> MetallicParams {
        self.params
    }

    /// Dimension of the submanifold.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Codimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.xi.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.m + self.n
    }

    pub fn class(&self) -> LightlikeClass {
        self.class
    }

    pub fn choice(&self) -> ScreenChoice {
        self.choice
    }

    pub fn tangent(&self) -> &Subspace<T> {
        &self.tangent
    }

    pub fn normal(&self) -> &Subspace<T> {
        &self.normal
    }

    pub fn radical(&self) -> &Subspace<T> {
        &self.radical
    }

    pub fn screen(&self) -> &Subspace<T> {
        &self.screen
    }

    pub fn ltr(&self) -> &Subspace<T> {
        &self.ltr
    }

    pub fn coscreen(&self) -> &Subspace<T> {
        &self.coscreen
    }

    /// Radical basis `ξ_i`.
    pub fn xi(&self) -> &[Vector<T>] {
        &self.xi
    }

    /// Lightlike transversal basis `N_i` with `ğ(N_i, ξ_j) = δ_ij`.
    pub fn transversal_basis(&self) -> &[Vector<T>] {
        &self.transversal
    }

    /// Union basis order: screen, radical, ltr, screen transversal.
    pub fn union_basis(&self) -> Vec<Vector<T>> {
        let mut all = self.screen.basis().to_vec();
        all.extend(self.xi.iter().cloned());
        all.extend(self.transversal.iter().cloned());
        all.extend(self.coscreen.basis().iter().cloned());
        all
    }

    pub fn resolve(&self, v: &[T]) -> Result<Parts<T>, BundleError> {
        if v.len() != self.ambient_dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: v.len(),
            }
            .into());
        }
        let coeffs = self.union_inverse.mul_vec(v)?;
        let d = self.ambient_dim();
        let ks = self.screen.dim();
        let r = self.r();
        let mut at = 0;
        let mut take = |basis: &[Vector<T>]| {
            let k = basis.len();
            let part = combine(self.params, d, &coeffs[at..at + k], basis);
            at += k;
            part
        };
        let screen = take(self.screen.basis());
        let radical = take(&self.xi);
        let ltr = take(&self.transversal);
        let coscreen = take(self.coscreen.basis());
        debug_assert_eq!(at, ks + 2 * r + self.coscreen.dim());
        Ok(Parts {
            screen,
            radical,
            ltr,
            coscreen,
        })
    }

    /// Relations of the canonical decomposition, checked exactly on values.
    pub fn relations(&self, metric: &crate::linalg::AmbientMetric) -> DecompositionRelations {
        let params = self.params;
        let d = self.ambient_dim();
        let r = self.r();
        let xi: Vec<Vector<MetallicScalar>> = self.xi.iter().map(|v| crate::linalg::values(v)).collect();
        let nn: Vec<Vector<MetallicScalar>> = self
            .transversal
            .iter()
            .map(|v| crate::linalg::values(v))
            .collect();
        let screen = self.screen.values();
        let coscreen = self.coscreen.values();
        let mut duality = true;
        let mut null_transversal = true;
        for i in 0..r {
            for j in 0..r {
                let expect = if i == j { params.one() } else { params.zero() };
                duality &= metric.inner(&nn[i], &xi[j]) == expect;
                null_transversal &= metric.inner(&nn[i], &nn[j]).is_zero();
            }
        }
        let orth = |a: &[Vector<MetallicScalar>], b: &[Vector<MetallicScalar>]| {
            pairing(params, metric, a, b).is_zero()
        };
        let ltr_orthogonal = orth(&nn, screen.basis()) && orth(&nn, coscreen.basis());
        let screens_orthogonal = orth(screen.basis(), coscreen.basis())
            && orth(screen.basis(), &xi)
            && orth(coscreen.basis(), &xi);
        let union = Subspace::span(params, d, &{
            let mut all = screen.basis().to_vec();
            all.extend(xi.iter().cloned());
            all.extend(nn.iter().cloned());
            all.extend(coscreen.basis().iter().cloned());
            all
        });
        DecompositionRelations {
            duality,
            null_transversal,
            ltr_orthogonal,
            screens_orthogonal,
            screen_nondegenerate: crate::linalg::is_nondegenerate(&screen, metric),
            coscreen_nondegenerate: crate::linalg::is_nondegenerate(&coscreen, metric),
            spans_ambient: union.dim() == d,
            dims: [screen.dim(), r, r, coscreen.dim()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionRelations {
    pub duality: bool,
    pub null_transversal: bool,
    pub ltr_orthogonal: bool,
    pub screens_orthogonal: bool,
    pub screen_nondegenerate: bool,
    pub coscreen_nondegenerate: bool,
    pub spans_ambient: bool,
    /// `[dim S(TN), dim Rad, dim ltr, dim S(TN⊥)]`.
    pub dims: [usize; 4],
}

impl DecompositionRelations {
    pub fn all_hold(&self) -> bool {
        self.duality
            && self.null_transversal
            && self.ltr_orthogonal
            && self.screens_orthogonal
            && self.screen_nondegenerate
            && self.coscreen_nondegenerate
            && self.spans_ambient
    }
}

/// Eigen-adapted candidates `P_σ v, P_conj v` that stay inside `within`,
/// followed by the vectors themselves.
fn candidates<T: FieldElement>(
    space: &AmbientSpace,
    vectors: &[Vector<T>],
    within: &Subspace<T>,
    eigen_first: bool,
) -> Vec<Vector<T>> {
    let mut out = Vec::new();
    if eigen_first {
        for v in vectors {
            for c in [space.project_sigma(v), space.project_conj(v)] {
                if within.contains_vector(&c) {
                    out.push(c);
                }
            }
        }
    }
    out.extend(vectors.iter().cloned());
    out
}

pub fn build_decomposition<T: FieldElement>(
    space: &AmbientSpace,
    frame: &[Vector<T>],
    strategy: &ScreenStrategy<T>,
) -> Result<BundleDecomposition<T>, BundleError> {
    let params = space.params();
    let d = space.dim();
    let metric = space.metric();
    let m = frame.len();
    if frame.iter().any(|v| v.len() != d) {
        return Err(LinalgError::DimensionMismatch {
            expected: d,
            found: frame.iter().map(|v| v.len()).find(|&l| l != d).unwrap_or(0),
        }
        .into());
    }
    if m == 0 || value_rank(frame) != m {
        return Err(BundleError::DependentFrame);
    }
    let n = d - m;
    let g = gram(params, metric, frame)?;
    let null = nullspace(&g)?;
    let r = null.len();
    let class = classify(m, n, r)?;
    let xi: Vec<Vector<T>> = null.iter().map(|c| combine(params, d, c, frame)).collect();
    let tangent = Subspace::new(params, d, frame.to_vec())?;
    let radical = Subspace::new(params, d, xi.clone())?;
    let full = Subspace::full(params, d);
    let normal = orthogonal_within(&tangent, metric, &full)?;
    let invariant_tn = space.is_invariant(&tangent);

    let normal_candidates = candidates(space, normal.basis(), &normal, invariant_tn);
    let coscreen_vectors = radical.greedy_complement(&normal_candidates, n - r);
    if coscreen_vectors.len() != n - r {
        return Err(BundleError::Transversal("screen transversal bundle has wrong rank".into()));
    }
    let coscreen = Subspace::new(params, d, coscreen_vectors)?;

    let screen_vectors = match strategy {
        ScreenStrategy::Default => default_screen(space, frame, &tangent, &radical, invariant_tn)?,
        ScreenStrategy::Hint(vectors) => {
            validate_screen(&tangent, &radical, vectors)?;
            vectors.clone()
        }
        ScreenStrategy::Repair => repair_screen(space, &tangent, &xi, &coscreen)?,
    };
    let screen = Subspace::new(params, d, screen_vectors)?;
    let transversal = build_transversal(space, &screen, &coscreen, &radical, &xi)?;
    let ltr = Subspace::new(params, d, transversal.clone())?;

    let mut union = screen.basis().to_vec();
    union.extend(xi.iter().cloned());
    union.extend(transversal.iter().cloned());
    union.extend(coscreen.basis().iter().cloned());
    let union_inverse = invert(&Matrix::from_columns(params, d, &union))
        .map_err(|_| BundleError::Transversal("bundles do not span the ambient space".into()))?;

    Ok(BundleDecomposition {
        params,
        m,
        n,
        class,
        choice: strategy.choice(),
        tangent,
        normal,
        radical,
        screen,
        ltr,
        coscreen,
        xi,
        transversal,
        union_inverse,
    })
}

fn default_screen<T: FieldElement>(
    space: &AmbientSpace,
    frame: &[Vector<T>],
    tangent: &Subspace<T>,
    radical: &Subspace<T>,
    invariant_tn: bool,
) -> Result<Vec<Vector<T>>, BundleError> {
    let target = tangent.dim() - radical.dim();
    let cands = candidates(space, frame, tangent, invariant_tn);
    let chosen = radical.greedy_complement(&cands, target);
    if chosen.len() != target {
        return Err(BundleError::InvalidScreen("no complement of the radical found".into()));
    }
    Ok(chosen)
}

fn validate_screen<T: FieldElement>(
    tangent: &Subspace<T>,
    radical: &Subspace<T>,
    vectors: &[Vector<T>],
) -> Result<(), BundleError> {
    let target = tangent.dim() - radical.dim();
    if vectors.len() != target {
        return Err(BundleError::InvalidScreen(format!(
            "expected {target} vectors, got {}",
            vectors.len()
        )));
    }
    if let Some(k) = vectors.iter().position(|v| !tangent.contains_vector(v)) {
        return Err(BundleError::InvalidScreen(format!("vector {k} is not tangent")));
    }
    let mut stacked = radical.basis().to_vec();
    stacked.extend(vectors.iter().cloned());
    if value_rank(&stacked) != tangent.dim() {
        return Err(BundleError::InvalidScreen(
            "vectors do not complement the radical".into(),
        ));
    }
    Ok(())
}

/// `N_i = W_i − ½ Σ_j ğ(W_i, W_j) ξ_j`, where `W_j` lies in a complement of
/// the radical inside `S(TN)^⊥ ∩ S(TN⊥)^⊥` and `ğ(ξ_i, W_j) = δ_ij`.
fn build_transversal<T: FieldElement>(
    space: &AmbientSpace,
    screen: &Subspace<T>,
    coscreen: &Subspace<T>,
    radical: &Subspace<T>,
    xi: &[Vector<T>],
) -> Result<Vec<Vector<T>>, BundleError> {
    let params = space.params();
    let d = space.dim();
    let metric = space.metric();
    let r = xi.len();
    let full = Subspace::full(params, d);
    let screen_perp = orthogonal_within(screen, metric, &full)?;
    let e = orthogonal_within(coscreen, metric, &screen_perp)?;
    if e.dim() != 2 * r {
        return Err(BundleError::Transversal(format!(
            "complementary bundle has dimension {}, expected {}",
            e.dim(),
            2 * r
        )));
    }
    let v = radical.greedy_complement(e.basis(), r);
    if v.len() != r {
        return Err(BundleError::Transversal("radical fills its complement".into()));
    }
    let p = pairing(params, metric, xi, &v);
    let c = invert(&p).map_err(|_| BundleError::Transversal("radical pairing is singular".into()))?;
    let w: Vec<Vector<T>> = (0..r)
        .map(|j| combine(params, d, &c.column(j), &v))
        .collect();
    let half = T::from_scalar(params.ratio(1, 2));
    Ok((0..r)
        .map(|i| {
            let mut ni = w[i].clone();
            for j in 0..r {
                let coef = half.clone() * metric.inner(&w[i], &w[j]);
                ni = sub_vec(&ni, &scale_vec(&coef, &xi[j]));
            }
            ni
        })
        .collect())
}

/// Screen for which `J(Rad)` and `J(ltr)` are tangent, built eigenspace by
/// eigenspace. Within the λ-eigenspace the transversal part `N^λ` is paired
/// against `P_λ ξ` with weight `c_λ`, where the weights make `ğ(N, ξ) = δ`
/// and `ğ(JN, ξ) = 0`. The screen is then `TN ∩ ltr^⊥`.
pub fn repair_screen<T: FieldElement>(
    space: &AmbientSpace,
    tangent: &Subspace<T>,
    xi: &[Vector<T>],
    coscreen: &Subspace<T>,
) -> Result<Vec<Vector<T>>, BundleError> {
    let params = space.params();
    let d = space.dim();
    let metric = space.metric();
    let r = xi.len();
    let root = params.int(2) * params.sigma() - params.int(params.p());
    let root_inv = root.inv().expect("2σ − p ≠ 0");
    let weights = [
        -(params.sigma_conj() * root_inv.clone()),
        params.sigma() * root_inv,
    ];
    let mut n_total: Vec<Vector<T>> = (0..r).map(|_| zero_vector(params, d)).collect();
    for (idx, weight) in weights.iter().enumerate() {
        let project = |v: &[T]| -> Vector<T> {
            if idx == 0 {
                space.project_sigma(v)
            } else {
                space.project_conj(v)
            }
        };
        let x: Vec<Vector<T>> = xi.iter().map(|v| project(v)).collect();
        let full_image: Vec<Vector<T>> = Subspace::<T>::full(params, d)
            .basis()
            .iter()
            .map(|v| project(v))
            .collect();
        let eigenspace = Subspace::span(params, d, &full_image);
        let co_proj: Vec<Vector<T>> = coscreen.basis().iter().map(|v| project(v)).collect();
        let co_span = Subspace::span(params, d, &co_proj);
        let c = orthogonal_within(&co_span, metric, &eigenspace)?;
        if value_rank(&x) != r {
            return Err(BundleError::RepairFailed(
                "radical projections onto an eigenspace are dependent".into(),
            ));
        }
        if x.iter().any(|v| !c.contains_vector(v)) {
            return Err(BundleError::RepairFailed(
                "radical projection is not orthogonal to the screen transversal bundle".into(),
            ));
        }
        if !gram(params, metric, &x)?.is_zero() {
            return Err(BundleError::RepairFailed(
                "radical projection onto an eigenspace is not isotropic".into(),
            ));
        }
        let p = pairing(params, metric, &x, c.basis());
        let w = T::from_scalar(weight.clone());
        let mut y = Vec::with_capacity(r);
        for j in 0..r {
            let mut rhs = zero_vector::<T>(params, r);
            rhs[j] = w.clone();
            let coeffs = solve(&p, &rhs).map_err(|_| {
                BundleError::RepairFailed("no transversal partner in an eigenspace".into())
            })?;
            y.push(combine(params, d, &coeffs, c.basis()));
        }
        let half_inv = T::from_scalar(
            (params.int(2) * weight.clone())
                .inv()
                .expect("eigen weights are nonzero"),
        );
        for i in 0..r {
            let mut ni = y[i].clone();
            for j in 0..r {
                let coef = half_inv.clone() * metric.inner(&y[i], &y[j]);
                ni = sub_vec(&ni, &scale_vec(&coef, &x[j]));
            }
            n_total[i] = crate::linalg::add_vec(&n_total[i], &ni);
        }
    }
    let ltr = Subspace::new(params, d, n_total)
        .map_err(|_| BundleError::RepairFailed("transversal candidates are dependent".into()))?;
    let screen = orthogonal_within(&ltr, metric, tangent)?;
    if screen.dim() + r != tangent.dim() {
        return Err(BundleError::RepairFailed("repaired screen has wrong rank".into()));
    }
    Ok(screen.into_basis())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureKind {
    Invariant,
    ScreenSemiInvariant,
    Generic,
}

impl StructureKind {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Invariant => "invariant",
            Self::ScreenSemiInvariant => "screen semi-invariant",
            Self::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub radical_invariant: bool,
    pub screen_invariant: bool,
    pub invariant: bool,
    /// Lightlike transversal bundle is invariant.
    pub ltr_invariant: bool,
    pub coscreen_invariant: bool,
}

pub fn invariance_report(
    space: &AmbientSpace,
    decomp: &BundleDecomposition<MetallicScalar>,
) -> InvarianceReport {
    let radical_invariant = space.is_invariant(decomp.radical());
    let screen_invariant = space.is_invariant(decomp.screen());
    InvarianceReport {
        radical_invariant,
        screen_invariant,
        invariant: radical_invariant && screen_invariant,
        ltr_invariant: space.is_invariant(decomp.ltr()),
        coscreen_invariant: space.is_invariant(decomp.coscreen()),
    }
}

/// `S(TN) = L₀ ⊥ (L₁ ⊕ L₂)` with `L₁ = J Rad`, `L₂ = J ltr`, and
/// `L = L₀ ⊥ Rad ⊥ L₁`.
#[derive(Debug, Clone)]
pub struct ScreenSplit<T> {
    pub l0: Subspace<T>,
    pub l1: Subspace<T>,
    pub l2: Subspace<T>,
    pub l: Subspace<T>,
}

pub fn screen_split<T: FieldElement>(
    space: &AmbientSpace,
    decomp: &BundleDecomposition<T>,
) -> Result<ScreenSplit<T>, BundleError> {
    let l1 = space.image_of(decomp.radical());
    let l2 = space.image_of(decomp.ltr());
    if !l1.values().is_subspace_of(&decomp.screen().values())
        || !l2.values().is_subspace_of(&decomp.screen().values())
    {
        return Err(BundleError::InvalidScreen(
            "screen does not contain J(Rad) and J(ltr)".into(),
        ));
    }
    let l12 = l1.sum(&l2);
    let l0 = orthogonal_within(&l12, space.metric(), decomp.screen())?;
    let l = l0.sum(decomp.radical()).sum(&l1);
    Ok(ScreenSplit { l0, l1, l2, l })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiInvariantReport {
    pub j_radical_in_screen: bool,
    pub j_ltr_in_screen: bool,
    pub holds: bool,
    /// `[dim L₀, dim L₁, dim L₂]` when the conditions hold.
    pub dims: Option<[usize; 3]>,
    pub l0_invariant: Option<bool>,
    pub l0_nondegenerate: Option<bool>,
    pub l_invariant: Option<bool>,
    pub coscreen_invariant: bool,
}

pub fn screen_semi_invariant_report(
    space: &AmbientSpace,
    decomp: &BundleDecomposition<MetallicScalar>,
) -> SemiInvariantReport {
    let screen = decomp.screen();
    let j_radical_in_screen = space.image_of(decomp.radical()).is_subspace_of(screen);
    let j_ltr_in_screen = space.image_of(decomp.ltr()).is_subspace_of(screen);
    let holds = j_radical_in_screen && j_ltr_in_screen;
    let split = if holds { screen_split(space, decomp).ok() } else { None };
    SemiInvariantReport {
        j_radical_in_screen,
        j_ltr_in_screen,
        holds,
        dims: split.as_ref().map(|s| [s.l0.dim(), s.l1.dim(), s.l2.dim()]),
        l0_invariant: split.as_ref().map(|s| space.is_invariant(&s.l0)),
        l0_nondegenerate: split
            .as_ref()
            .map(|s| crate::linalg::is_nondegenerate(&s.l0, space.metric())),
        l_invariant: split.as_ref().map(|s| space.is_invariant(&s.l)),
        coscreen_invariant: space.is_invariant(decomp.coscreen()),
    }
}

/// Outcome of choosing a screen and detecting the structure kind at a point.
#[derive(Debug, Clone)]
pub struct PointAnalysis {
    pub decomposition: BundleDecomposition<MetallicScalar>,
    pub kind: StructureKind,
    /// Why the repair was not used, when it was attempted and failed.
    pub repair_failure: Option<String>,
    pub invariance: InvarianceReport,
    pub semi_invariance: SemiInvariantReport,
}

/// Hint first; otherwise the default screen, tested for invariance and then
/// screen semi-invariance; otherwise the repaired screen; otherwise generic.
pub fn analyze_point(
    space: &AmbientSpace,
    frame: &[Vector<MetallicScalar>],
    hint: Option<&[Vector<MetallicScalar>]>,
) -> Result<PointAnalysis, BundleError> {
    let finish = |decomposition: BundleDecomposition<MetallicScalar>,
                  repair_failure: Option<String>|
     -> PointAnalysis {
        let invariance = invariance_report(space, &decomposition);
        let semi_invariance = screen_semi_invariant_report(space, &decomposition);
        let kind = if invariance.invariant {
            StructureKind::Invariant
        } else if semi_invariance.holds {
            StructureKind::ScreenSemiInvariant
        } else {
            StructureKind::Generic
        };
        PointAnalysis {
            decomposition,
            kind,
            repair_failure,
            invariance,
            semi_invariance,
        }
    };
    if let Some(h) = hint {
        let d = build_decomposition(space, frame, &ScreenStrategy::Hint(h.to_vec()))?;
        return Ok(finish(d, None));
    }
    let default = build_decomposition(space, frame, &ScreenStrategy::Default)?;
    let first = finish(default, None);
    if first.kind != StructureKind::Generic {
        return Ok(first);
    }
    match build_decomposition(space, frame, &ScreenStrategy::Repair) {
        Ok(repaired) => {
            let second = finish(repaired, None);
            if second.kind == StructureKind::ScreenSemiInvariant {
                Ok(second)
            } else {
                Ok(PointAnalysis {
                    repair_failure: Some("repaired screen is not screen semi-invariant".into()),
                    ..first
                })
            }
        }
        Err(e) => Ok(PointAnalysis {
            repair_failure: Some(e.to_string()),
            ..first
        }),
    }
}

/// True if the vector is zero on its value part.
pub fn value_is_zero<T: FieldElement>(v: &[T]) -> bool {
    is_zero_vec(&crate::linalg::values(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{AmbientMetric, Signature};
    use crate::structure::{build_structure, DiagTag, StructureSpec};

    fn space(params: MetallicParams, sig: &[i8], tags: Vec<DiagTag>) -> AmbientSpace {
        let metric = AmbientMetric::new(Signature::new(sig.to_vec()).unwrap());
        let s = build_structure(params, &StructureSpec::Diagonal(tags), &metric).unwrap();
        AmbientSpace::new(metric, s).unwrap()
    }

    fn v(params: MetallicParams, xs: &[(i64, i64)]) -> Vector<MetallicScalar> {
        xs.iter().map(|&(a, b)| params.ratio(a, b)).collect()
    }

    #[test]
    fn classification_table() {
        assert_eq!(classify(3, 2, 1).unwrap(), LightlikeClass::RLightlike);
        assert_eq!(classify(2, 1, 1).unwrap(), LightlikeClass::CoIsotropic);
        assert_eq!(classify(1, 2, 1).unwrap(), LightlikeClass::Isotropic);
        assert_eq!(classify(2, 2, 2).unwrap(), LightlikeClass::TotallyLightlike);
        assert_eq!(classify(3, 2, 0).unwrap_err(), BundleError::NotLightlike);
    }

    #[test]
    fn rotated_null_plane_decomposition() {
        use DiagTag::*;
        let f = MetallicParams::golden();
        let sp = space(f, &[-1, 1, 1, 1, 1], vec![Sigma, Sigma, Sigma, Conj, Conj]);
        // c = 3/5, s = 4/5
        let z1 = v(f, &[(0, 1), (-4, 5), (3, 5), (0, 1), (0, 1)]);
        let z2 = v(f, &[(0, 1), (0, 1), (0, 1), (1, 1), (0, 1)]);
        let z3 = v(f, &[(1, 1), (3, 5), (4, 5), (0, 1), (0, 1)]);
        let frame = vec![z1.clone(), z2.clone(), z3.clone()];
        let d = build_decomposition(&sp, &frame, &ScreenStrategy::Default).unwrap();
        assert_eq!(d.class(), LightlikeClass::RLightlike);
        assert_eq!(d.r(), 1);
        assert!(d.radical().same_span(&Subspace::new(f, 5, vec![z3]).unwrap()));
        assert!(d.screen().same_span(&Subspace::new(f, 5, vec![z1, z2]).unwrap()));
        let e5 = crate::linalg::basis_vector(f, 5, 4);
        assert!(d.coscreen().same_span(&Subspace::new(f, 5, vec![e5]).unwrap()));
        let n = v(f, &[(-1, 2), (3, 10), (2, 5), (0, 1), (0, 1)]);
        assert_eq!(d.transversal_basis()[0], n);
        assert!(d.relations(sp.metric()).all_hold());
        let inv = invariance_report(&sp, &d);
        assert!(inv.invariant && inv.ltr_invariant && inv.coscreen_invariant);
    }

    #[test]
    fn hyperplane_needs_repair() {
        use DiagTag::*;
        let f = MetallicParams::golden();
        let sp = space(f, &[-1, 1, -1, 1, 1], vec![Conj, Sigma, Sigma, Sigma, Conj]);
        let s = f.sigma();
        let o = f.one();
        let z = f.zero();
        let frame = vec![
            vec![o.clone(), z.clone(), z.clone(), z.clone(), o.clone()],
            vec![z.clone(), o.clone(), z.clone(), z.clone(), s.clone()],
            vec![z.clone(), z.clone(), o.clone(), z.clone(), s.clone()],
            vec![z.clone(), z.clone(), z.clone(), o.clone(), z.clone()],
        ];
        let a = analyze_point(&sp, &frame, None).unwrap();
        assert_eq!(a.kind, StructureKind::ScreenSemiInvariant);
        assert_eq!(a.decomposition.choice(), ScreenChoice::Repaired);
        assert_eq!(a.semi_invariance.dims, Some([1, 1, 1]));
        assert!(a.decomposition.relations(sp.metric()).all_hold());
        // JN is proportional to (−σ, 1, 1, 0, σ)
        let jn = sp.j(&a.decomposition.transversal_basis()[0]);
        let dir = vec![-s.clone(), o.clone(), o.clone(), z.clone(), s.clone()];
        assert!(Subspace::new(f, 5, vec![dir]).unwrap().contains_vector(&jn));
        let default = build_decomposition(&sp, &frame, &ScreenStrategy::Default).unwrap();
        assert!(!screen_semi_invariant_report(&sp, &default).holds);
    }
}
