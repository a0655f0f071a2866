//! Exact vectors, matrices and subspaces over `Q(σ)` (or over jets of it),
//! with a diagonal semi-Riemannian metric on the ambient space.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::field::FieldElement;
use crate::scalar::{MetallicParams, MetallicScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("subspace is not contained in the enclosing subspace")]
    NotContained,
    #[error("signature must be a nonempty list of ±1 entries")]
    BadSignature,
    #[error("rank is not locally constant at this point")]
    UnstableRank,
}

pub type Vector<T> = Vec<T>;

pub fn zero_vector<T: FieldElement>(params: MetallicParams, n: usize) -> Vector<T> {
    vec![T::zero(params); n]
}

pub fn basis_vector<T: FieldElement>(params: MetallicParams, n: usize, k: usize) -> Vector<T> {
    let mut v = zero_vector(params, n);
    v[k] = T::one(params);
    v
}

pub fn add_vec<T: FieldElement>(u: &[T], v: &[T]) -> Vector<T> {
    u.iter().zip(v).map(|(a, b)| a.clone() + b.clone()).collect()
}

pub fn sub_vec<T: FieldElement>(u: &[T], v: &[T]) -> Vector<T> {
    u.iter().zip(v).map(|(a, b)| a.clone() - b.clone()).collect()
}

pub fn scale_vec<T: FieldElement>(c: &T, v: &[T]) -> Vector<T> {
    v.iter().map(|x| c.clone() * x.clone()).collect()
}

pub fn is_zero_vec<T: FieldElement>(v: &[T]) -> bool {
    v.iter().all(FieldElement::is_zero)
}

/// `Σ coeffs[i] · vectors[i]`; `n` is used when the list is empty.
pub fn combine<T: FieldElement>(
    params: MetallicParams,
    n: usize,
    coeffs: &[T],
    vectors: &[Vector<T>],
) -> Vector<T> {
    let mut acc = zero_vector(params, n);
    for (c, v) in coeffs.iter().zip(vectors) {
        acc = add_vec(&acc, &scale_vec(c, v));
    }
    acc
}

pub fn values<T: FieldElement>(v: &[T]) -> Vector<MetallicScalar> {
    v.iter().map(|x| x.value().clone()).collect()
}

pub fn lift<T: FieldElement>(v: &[MetallicScalar]) -> Vector<T> {
    v.iter().cloned().map(T::from_scalar).collect()
}

pub fn format_vector(v: &[MetallicScalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Diagonal signature of the ambient metric, one `±1` per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Signature {
    entries: Vec<i8>,
}

impl Signature {
    pub fn new(entries: Vec<i8>) -> Result<Self, LinalgError> {
        if entries.is_empty() || entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(LinalgError::BadSignature);
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Number of negative entries.
    pub fn index(&self) -> usize {
        self.entries.iter().filter(|&&e| e < 0).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbientMetric {
    signature: Signature,
}

impl AmbientMetric {
    pub fn new(signature: Signature) -> Self {
        Self { signature }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn dim(&self) -> usize {
        self.signature.dim()
    }

    /// `ğ(u, v) = Σ ε_k u_k v_k`.
    pub fn inner<T: FieldElement>(&self, u: &[T], v: &[T]) -> T {
        assert_eq!(u.len(), self.dim());
        assert_eq!(v.len(), self.dim());
        let params = u
            .first()
            .map(FieldElement::params)
            .expect("ambient dimension is positive");
        let mut acc = T::zero(params);
        for ((eps, a), b) in self.signature.entries.iter().zip(u).zip(v) {
            let t = a.clone() * b.clone();
            acc = if *eps > 0 { acc + t } else { acc - t };
        }
        acc
    }

    /// Lowers an index: the covector `ğ(v, ·)` as a plain vector.
    pub fn flat<T: FieldElement>(&self, v: &[T]) -> Vector<T> {
        self.signature
            .entries
            .iter()
            .zip(v)
            .map(|(eps, x)| if *eps > 0 { x.clone() } else { -x.clone() })
            .collect()
    }

    pub fn matrix(&self, params: MetallicParams) -> Matrix<MetallicScalar> {
        let n = self.dim();
        let mut m = Matrix::zeros(params, n, n);
        for (k, eps) in self.signature.entries.iter().enumerate() {
            m.set(k, k, params.int(i64::from(*eps)));
        }
        m
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    params: MetallicParams,
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: FieldElement> Matrix<T> {
    pub fn zeros(params: MetallicParams, rows: usize, cols: usize) -> Self {
        Self {
            params,
            rows,
            cols,
            data: vec![T::zero(params); rows * cols],
        }
    }

    pub fn identity(params: MetallicParams, n: usize) -> Self {
        let mut m = Self::zeros(params, n, n);
        for i in 0..n {
            m.set(i, i, T::one(params));
        }
        m
    }

    pub fn from_rows(params: MetallicParams, rows: Vec<Vector<T>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        let nrows = rows.len();
        Ok(Self {
            params,
            rows: nrows,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(params: MetallicParams, n: usize, cols: &[Vector<T>]) -> Self {
        let mut m = Self::zeros(params, n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn params(&self) -> MetallicParams {
        self.params
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.params, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.params, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::zero(self.params);
                for k in 0..self.cols {
                    acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vector<T>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = T::zero(self.params);
                for (k, x) in v.iter().enumerate() {
                    acc = acc + self.get(i, k).clone() * x.clone();
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Self { data, ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Self { data, ..self.clone() }
    }

    pub fn scale(&self, c: &T) -> Self {
        let data = self.data.iter().map(|x| c.clone() * x.clone()).collect();
        Self { data, ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn map_values(&self) -> Matrix<MetallicScalar> {
        Matrix {
            params: self.params,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.value().clone()).collect(),
        }
    }

    pub fn lift<U: FieldElement>(&self) -> Matrix<U> {
        Matrix {
            params: self.params,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| U::from_scalar(x.value().clone()))
                .collect(),
        }
    }
}

impl Matrix<MetallicScalar> {
    /// Row-major scalar literals, the report serialization.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.row_vectors().iter().map(|r| format_vector(r)).collect()
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.rows {
            list.entry(&&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        list.finish()
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref<T> {
    pub matrix: Matrix<T>,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination. The pivot in each column is the lowest-index
/// remaining row whose value part is nonzero; each pivot row is divided once
/// by its pivot, and every other row is cleared with multiply-subtract steps.
pub fn rref<T: FieldElement>(m: &Matrix<T>) -> Result<Rref<T>, LinalgError> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(pr) = (row..rows).find(|&r| a.get(r, col).is_unit()) else {
            continue;
        };
        if pr != row {
            for j in 0..cols {
                let tmp = a.get(pr, j).clone();
                a.set(pr, j, a.get(row, j).clone());
                a.set(row, j, tmp);
            }
        }
        let inv = a.get(row, col).try_inv().expect("unit pivot");
        for j in 0..cols {
            let v = inv.clone() * a.get(row, j).clone();
            a.set(row, j, v);
        }
        for i in 0..rows {
            if i == row || a.get(i, col).is_zero() {
                continue;
            }
            let factor = a.get(i, col).clone();
            for j in 0..cols {
                let v = a.get(i, j).clone() - factor.clone() * a.get(row, j).clone();
                a.set(i, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    for i in row..rows {
        for j in 0..cols {
            if !a.get(i, j).is_zero() {
                return Err(LinalgError::UnstableRank);
            }
        }
    }
    Ok(Rref { matrix: a, pivots })
}

pub fn rank<T: FieldElement>(m: &Matrix<T>) -> Result<usize, LinalgError> {
    Ok(rref(m)?.pivots.len())
}

/// Rank decided on value parts only; never fails.
pub fn value_rank<T: FieldElement>(vectors: &[Vector<T>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let Some(x) = first.first() else {
        return 0;
    };
    let params = x.params();
    let rows: Vec<Vector<MetallicScalar>> = vectors.iter().map(|v| values(v)).collect();
    let m = Matrix::from_rows(params, rows).expect("vectors share a length");
    rank(&m).expect("exact scalars have stable rank")
}

/// Basis of `{v : M v = 0}`.
pub fn nullspace<T: FieldElement>(m: &Matrix<T>) -> Result<Vec<Vector<T>>, LinalgError> {
    let r = rref(m)?;
    let params = m.params;
    let free = (0..m.cols).filter(|c| !r.pivots.contains(c));
    Ok(free
        .map(|f| {
            let mut v = zero_vector::<T>(params, m.cols);
            v[f] = T::one(params);
            for (i, &pc) in r.pivots.iter().enumerate() {
                v[pc] = -r.matrix.get(i, f).clone();
            }
            v
        })
        .collect())
}

/// Some exact solution of `M x = rhs` (free variables set to zero).
pub fn solve<T: FieldElement>(m: &Matrix<T>, rhs: &[T]) -> Result<Vector<T>, LinalgError> {
    if rhs.len() != m.rows {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows,
            found: rhs.len(),
        });
    }
    let params = m.params;
    let mut aug = Matrix::zeros(params, m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols, rhs[i].clone());
    }
    let r = match rref(&aug) {
        Ok(r) => r,
        Err(LinalgError::UnstableRank) => return Err(LinalgError::NoSolution),
        Err(e) => return Err(e),
    };
    if r.pivots.last() == Some(&m.cols) {
        return Err(LinalgError::NoSolution);
    }
    let mut x = zero_vector::<T>(params, m.cols);
    for (i, &pc) in r.pivots.iter().enumerate() {
        x[pc] = r.matrix.get(i, m.cols).clone();
    }
    Ok(x)
}

/// Gram matrix `G_ij = ğ(Z_i, Z_j)`.
pub fn gram<T: FieldElement>(
    params: MetallicParams,
    metric: &AmbientMetric,
    frame: &[Vector<T>],
) -> Result<Matrix<T>, LinalgError> {
    if let Some(bad) = frame.iter().find(|v| v.len() != metric.dim()) {
        return Err(LinalgError::DimensionMismatch {
            expected: metric.dim(),
            found: bad.len(),
        });
    }
    let k = frame.len();
    let mut g = Matrix::zeros(params, k, k);
    for i in 0..k {
        for j in i..k {
            let v = metric.inner(&frame[i], &frame[j]);
            g.set(i, j, v.clone());
            g.set(j, i, v);
        }
    }
    Ok(g)
}

/// Pairing matrix `P_ij = ğ(a_i, b_j)`.
pub fn pairing<T: FieldElement>(
    params: MetallicParams,
    metric: &AmbientMetric,
    a: &[Vector<T>],
    b: &[Vector<T>],
) -> Matrix<T> {
    let mut m = Matrix::zeros(params, a.len(), b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            m.set(i, j, metric.inner(x, y));
        }
    }
    m
}

/// Relation between two subspaces, decided by ranks of stacked bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceRelation {
    Equal,
    Contains,
    Contained,
    Intersect(usize),
    Disjoint,
}

/// A linear subspace of the ambient space, stored by an independent basis.
/// Subspaces compare by span, never by basis.
#[derive(Clone)]
pub struct Subspace<T> {
    params: MetallicParams,
    ambient_dim: usize,
    basis: Vec<Vector<T>>,
}

impl<T: FieldElement> Subspace<T> {
    pub fn new(
        params: MetallicParams,
        ambient_dim: usize,
        basis: Vec<Vector<T>>,
    ) -> Result<Self, LinalgError> {
        if let Some(bad) = basis.iter().find(|v| v.len() != ambient_dim) {
            return Err(LinalgError::DimensionMismatch {
                expected: ambient_dim,
                found: bad.len(),
            });
        }
        if value_rank(&basis) != basis.len() {
            return Err(LinalgError::DependentBasis);
        }
        Ok(Self {
            params,
            ambient_dim,
            basis,
        })
    }

    /// Span of arbitrary vectors; keeps the first independent ones in order.
    pub fn span(params: MetallicParams, ambient_dim: usize, vectors: &[Vector<T>]) -> Self {
        let mut basis: Vec<Vector<T>> = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), ambient_dim, "vector has wrong ambient dimension");
            basis.push(v.clone());
            if value_rank(&basis) < basis.len() {
                basis.pop();
            }
        }
        Self {
            params,
            ambient_dim,
            basis,
        }
    }

    pub fn zero(params: MetallicParams, ambient_dim: usize) -> Self {
        Self {
            params,
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(params: MetallicParams, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|k| basis_vector(params, ambient_dim, k))
            .collect();
        Self {
            params,
            ambient_dim,
            basis,
        }
    }

    pub fn params(&self) -> MetallicParams {
        self.params
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector<T>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vector<T>> {
        self.basis
    }

    pub fn values(&self) -> Subspace<MetallicScalar> {
        Subspace {
            params: self.params,
            ambient_dim: self.ambient_dim,
            basis: self.basis.iter().map(|v| values(v)).collect(),
        }
    }

    pub fn contains_vector(&self, v: &[T]) -> bool {
        let mut stacked = self.basis.clone();
        stacked.push(v.to_vec());
        value_rank(&stacked) == self.dim()
    }

    /// Coefficients of `v` in this basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[T]) -> Option<Vector<T>> {
        let m = Matrix::from_columns(self.params, self.ambient_dim, &self.basis);
        solve(&m, v).ok()
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::span(self.params, self.ambient_dim, &all)
    }

    pub fn intersection_dim(&self, other: &Self) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    pub fn relation(&self, other: &Self) -> Result<SubspaceRelation, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let inter = self.intersection_dim(other);
        let (a, b) = (self.dim(), other.dim());
        Ok(if inter == a && inter == b {
            SubspaceRelation::Equal
        } else if inter == b {
            SubspaceRelation::Contains
        } else if inter == a {
            SubspaceRelation::Contained
        } else if inter > 0 {
            SubspaceRelation::Intersect(inter)
        } else {
            SubspaceRelation::Disjoint
        })
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        matches!(
            self.relation(other),
            Ok(SubspaceRelation::Equal | SubspaceRelation::Contained)
        )
    }

    pub fn same_span(&self, other: &Self) -> bool {
        matches!(self.relation(other), Ok(SubspaceRelation::Equal))
    }

    /// Greedily extends `self` by candidates (in order) until `target_dim`
    /// is reached; returns only the chosen candidates.
    pub fn greedy_complement(&self, candidates: &[Vector<T>], target_dim: usize) -> Vec<Vector<T>> {
        let mut stacked = self.basis.clone();
        let mut chosen = Vec::new();
        for c in candidates {
            if chosen.len() == target_dim {
                break;
            }
            if is_zero_vec(&values(c)) {
                continue;
            }
            stacked.push(c.clone());
            if value_rank(&stacked) == stacked.len() {
                chosen.push(c.clone());
            } else {
                stacked.pop();
            }
        }
        chosen
    }
}

impl<T: fmt::Debug> fmt::Debug for Subspace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("ambient_dim", &self.ambient_dim)
            .field("basis", &self.basis)
            .finish()
    }
}

/// `{v ∈ within : ğ(v, s) = 0 for all s ∈ S}`, with `S ⊆ within` verified.
pub fn ortho_complement<T: FieldElement>(
    s: &Subspace<T>,
    metric: &AmbientMetric,
    within: &Subspace<T>,
) -> Result<Subspace<T>, LinalgError> {
    if !s.values().is_subspace_of(&within.values()) {
        return Err(LinalgError::NotContained);
    }
    orthogonal_within(s, metric, within)
}

/// Orthogonal complement of `s` inside `within`, without requiring containment.
pub fn orthogonal_within<T: FieldElement>(
    s: &Subspace<T>,
    metric: &AmbientMetric,
    within: &Subspace<T>,
) -> Result<Subspace<T>, LinalgError> {
    let params = within.params();
    let n = within.ambient_dim();
    if s.dim() == 0 {
        return Ok(within.clone());
    }
    let p = pairing(params, metric, s.basis(), within.basis());
    let coeffs = nullspace(&p)?;
    let vectors: Vec<Vector<T>> = coeffs
        .iter()
        .map(|c| combine(params, n, c, within.basis()))
        .collect();
    Subspace::new(params, n, vectors)
}

/// True iff the Gram matrix of a basis of `s` has full rank.
pub fn is_nondegenerate<T: FieldElement>(s: &Subspace<T>, metric: &AmbientMetric) -> bool {
    let values = s.values();
    let g = gram(s.params(), metric, values.basis()).expect("basis has ambient dimension");
    rank(&g).expect("exact rank") == s.dim()
}

/// Inverse of a square matrix with full value rank.
pub fn invert<T: FieldElement>(m: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows,
            found: m.cols,
        });
    }
    let n = m.rows;
    let params = m.params;
    let mut aug = Matrix::zeros(params, n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, T::one(params));
    }
    let r = rref(&aug)?;
    if n > 0 && (r.pivots.len() < n || r.pivots[n - 1] != n - 1) {
        return Err(LinalgError::NoSolution);
    }
    let mut inv = Matrix::zeros(params, n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, r.matrix.get(i, n + j).clone());
        }
    }
    Ok(inv)
}
