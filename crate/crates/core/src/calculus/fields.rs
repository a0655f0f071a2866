//! Vector fields along the submanifold, built from polynomial data and the
//! pointwise bundle construction, and their exact ambient derivatives.
//!
//! The flat derivative `∇̄_U X` at `u₀` is the `ε`-part of `X` evaluated at
//! the jet point `u₀ + ε·a`, where `a` are the chart coefficients of `U` at
//! `u₀`. Fields that depend on the decomposition (radical, transversal and
//! screen bases, projections) are rebuilt at the jet point, so their
//! derivatives come out exact.

use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use super::immersion::{ChartField, ImmersionInstance};
use super::poly::{Poly, PolyVec};
use super::CalculusError;
use crate::bundles::{build_decomposition, screen_split, BundleDecomposition, Parts, ScreenSplit, ScreenStrategy};
use crate::field::{FieldElement, Jet};
use crate::linalg::{add_vec, combine, scale_vec, zero_vector, Vector};
use crate::scalar::MetallicScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bundle {
    Screen,
    Radical,
    Ltr,
    Coscreen,
    /// Non-degenerate part of the screen orthogonal to `J Rad ⊕ J ltr`.
    L0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Screen,
    Radical,
    Ltr,
    Coscreen,
    Tangent,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldExpr {
    /// Tangent field `Σ a^i ∂/∂u_i`, pushed forward by the immersion.
    Chart(ChartField),
    /// Arbitrary polynomial ambient field along the chart.
    Ambient(PolyVec),
    /// The `k`-th stored basis vector of a bundle.
    Basis(Bundle, usize),
    Project(Part, Box<FieldExpr>),
    J(Box<FieldExpr>),
    Scale(Poly, Box<FieldExpr>),
    Sum(Vec<FieldExpr>),
}

impl FieldExpr {
    pub fn basis(bundle: Bundle, k: usize) -> Self {
        Self::Basis(bundle, k)
    }

    pub fn project(self, part: Part) -> Self {
        Self::Project(part, Box::new(self))
    }

    pub fn apply_j(self) -> Self {
        Self::J(Box::new(self))
    }

    pub fn scaled(self, f: Poly) -> Self {
        Self::Scale(f, Box::new(self))
    }

    /// Constant-coefficient combination `Σ c_k X_k` (chart dimension `nvars`).
    pub fn combination(nvars: usize, terms: &[(MetallicScalar, FieldExpr)]) -> Self {
        Self::Sum(
            terms
                .iter()
                .map(|(c, x)| x.clone().scaled(Poly::constant(c.params(), nvars, c.clone())))
                .collect(),
        )
    }
}

#[derive(Debug, Clone)]
pub enum ScreenMode {
    Default,
    /// Screen spanned by the given tangent fields.
    Hint(Vec<ChartField>),
    Repair,
}

/// Data at one (possibly jet-valued) point.
pub struct PointContext<T> {
    point: Vec<T>,
    frame: Vec<Vector<T>>,
    decomp: BundleDecomposition<T>,
    split: OnceCell<Option<ScreenSplit<T>>>,
}

impl<T: FieldElement> PointContext<T> {
    pub fn point(&self) -> &[T] {
        &self.point
    }

    pub fn frame(&self) -> &[Vector<T>] {
        &self.frame
    }

    pub fn decomposition(&self) -> &BundleDecomposition<T> {
        &self.decomp
    }
}

fn chart_at<T: FieldElement>(frame: &[Vector<T>], a: &[Poly], point: &[T], d: usize) -> Vector<T> {
    let params = frame[0][0].params();
    let coeffs: Vec<T> = a.iter().map(|p| p.eval(point)).collect();
    combine(params, d, &coeffs, frame)
}

fn build_context<T: FieldElement>(
    inst: &ImmersionInstance,
    mode: &ScreenMode,
    point: Vec<T>,
) -> Result<PointContext<T>, CalculusError> {
    let d = inst.ambient().dim();
    let frame = inst.frame_at(&point);
    let strategy = match mode {
        ScreenMode::Default => ScreenStrategy::Default,
        ScreenMode::Repair => ScreenStrategy::Repair,
        ScreenMode::Hint(fields) => ScreenStrategy::Hint(
            fields
                .iter()
                .map(|a| chart_at(&frame, a, &point, d))
                .collect(),
        ),
    };
    let decomp = build_decomposition(inst.ambient(), &frame, &strategy)?;
    Ok(PointContext {
        point,
        frame,
        decomp,
        split: OnceCell::new(),
    })
}

fn eval_in<T: FieldElement>(
    inst: &ImmersionInstance,
    ctx: &PointContext<T>,
    expr: &FieldExpr,
) -> Result<Vector<T>, CalculusError> {
    let space = inst.ambient();
    let d = space.dim();
    let params = inst.params();
    Ok(match expr {
        FieldExpr::Chart(a) => chart_at(&ctx.frame, a, &ctx.point, d),
        FieldExpr::Ambient(v) => v.eval(&ctx.point),
        FieldExpr::Basis(bundle, k) => {
            let decomp = &ctx.decomp;
            let basis: &[Vector<T>] = match bundle {
                Bundle::Screen => decomp.screen().basis(),
                Bundle::Radical => decomp.xi(),
                Bundle::Ltr => decomp.transversal_basis(),
                Bundle::Coscreen => decomp.coscreen().basis(),
                Bundle::L0 => {
                    let split = ctx
                        .split
                        .get_or_init(|| screen_split(space, decomp).ok())
                        .as_ref()
                        .ok_or_else(|| CalculusError::Unavailable("L0".into()))?;
                    split.l0.basis()
                }
            };
            basis
                .get(*k)
                .cloned()
                .ok_or_else(|| CalculusError::Unavailable(format!("{bundle:?}[{k}]")))?
        }
        FieldExpr::Project(part, x) => {
            let v = eval_in(inst, ctx, x)?;
            let parts = ctx.decomp.resolve(&v)?;
            match part {
                Part::Screen => parts.screen,
                Part::Radical => parts.radical,
                Part::Ltr => parts.ltr,
                Part::Coscreen => parts.coscreen,
                Part::Tangent => parts.tangent(),
            }
        }
        FieldExpr::J(x) => space.j(&eval_in(inst, ctx, x)?),
        FieldExpr::Scale(f, x) => scale_vec(&f.eval(&ctx.point), &eval_in(inst, ctx, x)?),
        FieldExpr::Sum(xs) => {
            let mut acc = zero_vector(params, d);
            for x in xs {
                acc = add_vec(&acc, &eval_in(inst, ctx, x)?);
            }
            acc
        }
    })
}

/// Evaluates fields and their derivatives at the instance's sample points.
pub struct Evaluator<'a> {
    inst: &'a ImmersionInstance,
    mode: ScreenMode,
    values: Vec<PointContext<MetallicScalar>>,
    jets: RefCell<HashMap<(usize, Vec<String>), Rc<PointContext<Jet>>>>,
    /// `(value, derivative)` per point, direction and field.
    along: RefCell<HashMap<(usize, Vec<String>, String), JetPair>>,
    directions: RefCell<HashMap<(usize, String), Vec<MetallicScalar>>>,
}

struct JetEntry {
    value: Vector<MetallicScalar>,
    deriv: Vector<MetallicScalar>,
    parts: OnceCell<Parts<MetallicScalar>>,
}

type JetPair = Rc<JetEntry>;

fn dir_key(dir: &[MetallicScalar]) -> Vec<String> {
    dir.iter().map(|c| c.to_string()).collect()
}

impl<'a> Evaluator<'a> {
    pub fn new(inst: &'a ImmersionInstance, mode: ScreenMode) -> Result<Self, CalculusError> {
        let values = inst
            .sample_points()
            .iter()
            .map(|p| build_context(inst, &mode, p.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            inst,
            mode,
            values,
            jets: RefCell::new(HashMap::new()),
            along: RefCell::new(HashMap::new()),
            directions: RefCell::new(HashMap::new()),
        })
    }

    pub fn instance(&self) -> &ImmersionInstance {
        self.inst
    }

    pub fn mode(&self) -> &ScreenMode {
        &self.mode
    }

    pub fn point_count(&self) -> usize {
        self.values.len()
    }

    pub fn context(&self, idx: usize) -> &PointContext<MetallicScalar> {
        &self.values[idx]
    }

    pub fn decomposition(&self, idx: usize) -> &BundleDecomposition<MetallicScalar> {
        &self.values[idx].decomp
    }

    pub fn split(&self, idx: usize) -> Option<&ScreenSplit<MetallicScalar>> {
        let ctx = &self.values[idx];
        ctx.split
            .get_or_init(|| screen_split(self.inst.ambient(), &ctx.decomp).ok())
            .as_ref()
    }

    pub fn value(&self, idx: usize, x: &FieldExpr) -> Result<Vector<MetallicScalar>, CalculusError> {
        eval_in(self.inst, &self.values[idx], x)
    }

    /// Chart coefficients of a tangent field at a sample point.
    pub fn direction(&self, idx: usize, u: &FieldExpr) -> Result<Vec<MetallicScalar>, CalculusError> {
        let point = &self.inst.sample_points()[idx];
        if let FieldExpr::Chart(a) = u {
            return Ok(a.iter().map(|c| c.eval(point)).collect());
        }
        let key = (idx, format!("{u:?}"));
        if let Some(d) = self.directions.borrow().get(&key) {
            return Ok(d.clone());
        }
        let v = self.value(idx, u)?;
        let d = self
            .inst
            .chart_coordinates(point, &v)
            .ok_or(CalculusError::NotTangent { point: idx })?;
        self.directions.borrow_mut().insert(key, d.clone());
        Ok(d)
    }

    fn jet_context(
        &self,
        idx: usize,
        dir: &[MetallicScalar],
    ) -> Result<Rc<PointContext<Jet>>, CalculusError> {
        let key = (idx, dir_key(dir));
        if let Some(ctx) = self.jets.borrow().get(&key) {
            return Ok(Rc::clone(ctx));
        }
        let point: Vec<Jet> = self.inst.sample_points()[idx]
            .iter()
            .zip(dir)
            .map(|(x, a)| Jet::new(x.clone(), a.clone()))
            .collect();
        let ctx = Rc::new(build_context(self.inst, &self.mode, point)?);
        self.jets.borrow_mut().insert(key, Rc::clone(&ctx));
        Ok(ctx)
    }

    /// Value and derivative of `X` along the chart direction `dir`.
    pub fn jet_along(
        &self,
        idx: usize,
        dir: &[MetallicScalar],
        x: &FieldExpr,
    ) -> Result<(Vector<MetallicScalar>, Vector<MetallicScalar>), CalculusError> {
        let pair = self.jet_pair(idx, dir, x)?;
        Ok((pair.value.clone(), pair.deriv.clone()))
    }

    fn jet_pair(&self, idx: usize, dir: &[MetallicScalar], x: &FieldExpr) -> Result<JetPair, CalculusError> {
        let key = (idx, dir_key(dir), format!("{x:?}"));
        if let Some(p) = self.along.borrow().get(&key) {
            return Ok(Rc::clone(p));
        }
        let ctx = self.jet_context(idx, dir)?;
        let v = eval_in(self.inst, &ctx, x)?;
        let (value, deriv) = v.into_iter().map(|j| (j.value, j.deriv)).unzip();
        let pair: JetPair = Rc::new(JetEntry {
            value,
            deriv,
            parts: OnceCell::new(),
        });
        self.along.borrow_mut().insert(key, Rc::clone(&pair));
        Ok(pair)
    }

    /// `∇̄_U X` at a sample point.
    pub fn derivative(
        &self,
        idx: usize,
        u: &FieldExpr,
        x: &FieldExpr,
    ) -> Result<Vector<MetallicScalar>, CalculusError> {
        let dir = self.direction(idx, u)?;
        Ok(self.jet_pair(idx, &dir, x)?.deriv.clone())
    }

    /// `∇̄_U X` split along `S(TN) ⊕ Rad ⊕ ltr ⊕ S(TN⊥)`.
    pub fn derivative_parts(
        &self,
        idx: usize,
        u: &FieldExpr,
        x: &FieldExpr,
    ) -> Result<Parts<MetallicScalar>, CalculusError> {
        let dir = self.direction(idx, u)?;
        let pair = self.jet_pair(idx, &dir, x)?;
        if let Some(p) = pair.parts.get() {
            return Ok(p.clone());
        }
        let p = self.decomposition(idx).resolve(&pair.deriv)?;
        Ok(pair.parts.get_or_init(|| p).clone())
    }

    /// `U(ğ(X, Y))` at a sample point.
    pub fn derivative_of_pairing(
        &self,
        idx: usize,
        u: &FieldExpr,
        x: &FieldExpr,
        y: &FieldExpr,
    ) -> Result<MetallicScalar, CalculusError> {
        let dir = self.direction(idx, u)?;
        let lift = |p: &JetPair| -> Vec<Jet> {
            p.value.iter().zip(&p.deriv).map(|(v, d)| Jet::new(v.clone(), d.clone())).collect()
        };
        let xv = lift(&self.jet_pair(idx, &dir, x)?);
        let yv = lift(&self.jet_pair(idx, &dir, y)?);
        Ok(self.inst.ambient().inner(&xv, &yv).deriv)
    }

    /// Number of stored basis vectors of a bundle at a sample point.
    pub fn basis_len(&self, idx: usize, bundle: Bundle) -> usize {
        let decomp = self.decomposition(idx);
        match bundle {
            Bundle::Screen => decomp.screen().dim(),
            Bundle::Radical => decomp.r(),
            Bundle::Ltr => decomp.r(),
            Bundle::Coscreen => decomp.coscreen().dim(),
            Bundle::L0 => self.split(idx).map_or(0, |s| s.l0.dim()),
        }
    }
}
