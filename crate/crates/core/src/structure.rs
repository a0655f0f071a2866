//! The metallic operator `J` on the ambient space: validation, eigen
//! projectors, images of subspaces, and the tangent splittings induced by a
//! bundle decomposition.

use serde::Serialize;
use thiserror::Error;

use crate::bundles::{BundleDecomposition, ScreenSplit};
use crate::field::FieldElement;
use crate::linalg::{
    add_vec, is_zero_vec, lift, sub_vec, AmbientMetric, LinalgError, Matrix, Subspace, Vector,
};
use crate::scalar::{MetallicParams, MetallicScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("J² ≠ pJ + qI")]
    PolynomialViolation,
    #[error("J is not self-adjoint with respect to the ambient metric")]
    NotSelfAdjoint,
    #[error("structure has dimension {found}, ambient space has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),
    #[error("vector is not tangent to the submanifold")]
    NotTangent,
    #[error("requested splitting does not match the structure kind")]
    WrongMode,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Bundle(#[from] crate::bundles::BundleError),
}

/// Diagonal entry tag for pattern input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagTag {
    #[serde(rename = "sigma")]
    Sigma,
    #[serde(rename = "p-sigma")]
    Conj,
}

impl DiagTag {
    pub fn parse(s: &str) -> Option<Self> {
        match s.replace(' ', "").as_str() {
            "sigma" => Some(Self::Sigma),
            "p-sigma" => Some(Self::Conj),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum StructureSpec {
    Diagonal(Vec<DiagTag>),
    Matrix(Matrix<MetallicScalar>),
}

/// A constant metallic structure: `J² = pJ + qI` and `ğ(JU, V) = ğ(U, JV)`.
#[derive(Debug, Clone)]
pub struct MetallicStructure {
    params: MetallicParams,
    matrix: Matrix<MetallicScalar>,
}

impl MetallicStructure {
    pub fn params(&self) -> MetallicParams {
        self.params
    }

    pub fn matrix(&self) -> &Matrix<MetallicScalar> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply<T: FieldElement>(&self, v: &[T]) -> Vector<T> {
        self.matrix
            .lift::<T>()
            .mul_vec(v)
            .expect("vector has ambient dimension")
    }

    /// Inverse action `J⁻¹ = (J − pI)/q`.
    pub fn apply_inverse<T: FieldElement>(&self, v: &[T]) -> Vector<T> {
        let p = T::from_scalar(self.params.int(self.params.p()));
        let qinv = T::from_scalar(self.params.ratio(1, self.params.q()));
        let jv = self.apply(v);
        jv.iter()
            .zip(v)
            .map(|(a, b)| qinv.clone() * (a.clone() - p.clone() * b.clone()))
            .collect()
    }
}

pub fn build_structure(
    params: MetallicParams,
    spec: &StructureSpec,
    metric: &AmbientMetric,
) -> Result<MetallicStructure, StructureError> {
    let n = metric.dim();
    let matrix = match spec {
        StructureSpec::Diagonal(tags) => {
            let mut m = Matrix::zeros(params, tags.len(), tags.len());
            for (k, tag) in tags.iter().enumerate() {
                let entry = match tag {
                    DiagTag::Sigma => params.sigma(),
                    DiagTag::Conj => params.sigma_conj(),
                };
                m.set(k, k, entry);
            }
            m
        }
        StructureSpec::Matrix(m) => m.clone(),
    };
    if matrix.rows() != n || matrix.cols() != n {
        return Err(StructureError::DimensionMismatch {
            expected: n,
            found: matrix.rows().max(matrix.cols()),
        });
    }
    let p = params.int(params.p());
    let q = params.int(params.q());
    let j2 = matrix.mul(&matrix)?;
    let rhs = matrix
        .scale(&p)
        .add(&Matrix::identity(params, n).scale(&q));
    if !j2.sub(&rhs).is_zero() {
        return Err(StructureError::PolynomialViolation);
    }
    let g = metric.matrix(params);
    if !matrix.transpose().mul(&g)?.sub(&g.mul(&matrix)?).is_zero() {
        return Err(StructureError::NotSelfAdjoint);
    }
    Ok(MetallicStructure { params, matrix })
}

/// Ambient flat space with its metric and metallic structure.
#[derive(Debug, Clone)]
pub struct AmbientSpace {
    params: MetallicParams,
    metric: AmbientMetric,
    structure: MetallicStructure,
    projectors: (Matrix<MetallicScalar>, Matrix<MetallicScalar>),
}

impl AmbientSpace {
    pub fn new(metric: AmbientMetric, structure: MetallicStructure) -> Result<Self, StructureError> {
        if metric.dim() != structure.dim() {
            return Err(StructureError::DimensionMismatch {
                expected: metric.dim(),
                found: structure.dim(),
            });
        }
        let projectors = eigenprojectors(&structure);
        Ok(Self {
            params: structure.params(),
            metric,
            structure,
            projectors,
        })
    }

    pub fn params(&self) -> MetallicParams {
        self.params
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn metric(&self) -> &AmbientMetric {
        &self.metric
    }

    pub fn structure(&self) -> &MetallicStructure {
        &self.structure
    }

    pub fn j<T: FieldElement>(&self, v: &[T]) -> Vector<T> {
        self.structure.apply(v)
    }

    pub fn inner<T: FieldElement>(&self, u: &[T], v: &[T]) -> T {
        self.metric.inner(u, v)
    }

    /// Component in the `σ`-eigenspace.
    pub fn project_sigma<T: FieldElement>(&self, v: &[T]) -> Vector<T> {
        self.projectors.0.lift::<T>().mul_vec(v).expect("ambient vector")
    }

    /// Component in the `(p − σ)`-eigenspace.
    pub fn project_conj<T: FieldElement>(&self, v: &[T]) -> Vector<T> {
        self.projectors.1.lift::<T>().mul_vec(v).expect("ambient vector")
    }

    pub fn projectors(&self) -> (&Matrix<MetallicScalar>, &Matrix<MetallicScalar>) {
        (&self.projectors.0, &self.projectors.1)
    }

    /// `ğ(Ju, Jv) = p·ğ(u, Jv) + q·ğ(u, v)`.
    pub fn check_compat_identity(&self, u: &[MetallicScalar], v: &[MetallicScalar]) -> bool {
        let ju = self.j(u);
        let jv = self.j(v);
        let lhs = self.inner(&ju, &jv);
        let p = self.params.int(self.params.p());
        let q = self.params.int(self.params.q());
        let rhs = p * self.inner(u, &jv) + q * self.inner(u, v);
        lhs == rhs
    }

    pub fn image_of<T: FieldElement>(&self, s: &Subspace<T>) -> Subspace<T> {
        let images: Vec<Vector<T>> = s.basis().iter().map(|b| self.j(b)).collect();
        Subspace::new(s.params(), s.ambient_dim(), images).expect("J is invertible")
    }

    pub fn is_invariant<T: FieldElement>(&self, s: &Subspace<T>) -> bool {
        self.image_of(s).values().same_span(&s.values())
    }
}

/// `P_σ = (J − (p−σ)I)/(2σ − p)` and `P_conj = I − P_σ`.
pub fn eigenprojectors(
    structure: &MetallicStructure,
) -> (Matrix<MetallicScalar>, Matrix<MetallicScalar>) {
    let params = structure.params();
    let n = structure.dim();
    let id = Matrix::identity(params, n);
    let denom = params.int(2) * params.sigma() - params.int(params.p());
    let inv = denom.inv().expect("2σ − p = √disc ≠ 0");
    let p_sigma = structure
        .matrix()
        .sub(&id.scale(&params.sigma_conj()))
        .scale(&inv);
    let p_conj = id.sub(&p_sigma);
    (p_sigma, p_conj)
}

/// Splitting of a tangent vector and its image under `J`.
#[derive(Debug, Clone)]
pub enum SplitReport {
    /// `u = Tu + Qu` (screen + radical) and `Ju = Su + Lu`, `Su = J·Tu`, `Lu = J·Qu`.
    Invariant {
        t: Vector<MetallicScalar>,
        q: Vector<MetallicScalar>,
        s: Vector<MetallicScalar>,
        l: Vector<MetallicScalar>,
        s_in_screen: bool,
        l_in_radical: bool,
    },
    /// `u = Bu + Ru` (`L` + `L₂`) and `Ju = S₁u + R₁u`, `S₁u = J·Bu`, `R₁u = J·Ru`.
    ScreenSemiInvariant {
        b: Vector<MetallicScalar>,
        r: Vector<MetallicScalar>,
        s1: Vector<MetallicScalar>,
        r1: Vector<MetallicScalar>,
        s1_in_l: bool,
        /// `R₁u ∈ ltr`; false whenever `Ru ≠ 0`, since `J²N = pJN + qN`.
        r1_in_ltr: bool,
        /// `R₁u ∈ L₂ ⊕ ltr`, which always holds.
        r1_in_l2_plus_ltr: bool,
    },
}

impl SplitReport {
    /// Components re-sum to the input and `J` of the input.
    pub fn reconstructs(&self, space: &AmbientSpace, u: &[MetallicScalar]) -> bool {
        let ju = space.j(u);
        match self {
            Self::Invariant { t, q, s, l, .. } => add_vec(t, q) == u && add_vec(s, l) == ju,
            Self::ScreenSemiInvariant { b, r, s1, r1, .. } => {
                add_vec(b, r) == u && add_vec(s1, r1) == ju
            }
        }
    }

    pub fn memberships_hold(&self) -> bool {
        match self {
            Self::Invariant {
                s_in_screen,
                l_in_radical,
                ..
            } => *s_in_screen && *l_in_radical,
            Self::ScreenSemiInvariant {
                s1_in_l,
                r1_in_l2_plus_ltr,
                ..
            } => *s1_in_l && *r1_in_l2_plus_ltr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMode {
    Invariant,
    ScreenSemiInvariant,
}

pub fn tangent_splittings(
    space: &AmbientSpace,
    decomp: &BundleDecomposition<MetallicScalar>,
    split: Option<&ScreenSplit<MetallicScalar>>,
    mode: SplitMode,
    u: &[MetallicScalar],
) -> Result<SplitReport, StructureError> {
    if !decomp.tangent().contains_vector(u) {
        return Err(StructureError::NotTangent);
    }
    let params = space.params();
    let n = space.dim();
    match mode {
        SplitMode::Invariant => {
            if !(space.is_invariant(decomp.screen()) && space.is_invariant(decomp.radical())) {
                return Err(StructureError::WrongMode);
            }
            let parts = decomp.resolve(u)?;
            let (t, q) = (parts.screen, parts.radical);
            let s = space.j(&t);
            let l = space.j(&q);
            Ok(SplitReport::Invariant {
                s_in_screen: decomp.screen().contains_vector(&s),
                l_in_radical: decomp.radical().contains_vector(&l),
                t,
                q,
                s,
                l,
            })
        }
        SplitMode::ScreenSemiInvariant => {
            let split = split.ok_or(StructureError::WrongMode)?;
            let l_basis = split.l.basis();
            let mut cols: Vec<Vector<MetallicScalar>> = l_basis.to_vec();
            cols.extend(split.l2.basis().iter().cloned());
            let m = Matrix::from_columns(params, n, &cols);
            let coeffs = crate::linalg::solve(&m, u)?;
            let k = l_basis.len();
            let b = crate::linalg::combine(params, n, &coeffs[..k], l_basis);
            let r = sub_vec(u, &b);
            let s1 = space.j(&b);
            let r1 = space.j(&r);
            let l2_plus_ltr = split.l2.sum(decomp.ltr());
            Ok(SplitReport::ScreenSemiInvariant {
                s1_in_l: split.l.contains_vector(&s1),
                r1_in_ltr: decomp.ltr().contains_vector(&r1),
                r1_in_l2_plus_ltr: l2_plus_ltr.contains_vector(&r1) || is_zero_vec(&r1),
                b,
                r,
                s1,
                r1,
            })
        }
    }
}

/// Lifts a constant vector into any element type.
pub fn lift_vector<T: FieldElement>(v: &[MetallicScalar]) -> Vector<T> {
    lift(v)
}
