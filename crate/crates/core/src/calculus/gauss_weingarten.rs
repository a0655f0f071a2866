//! Induced objects from resolving ambient derivatives in
//! `S(TN) ⊕ Rad ⊕ ltr ⊕ S(TN⊥)`, and the identities they satisfy.
//!
//! For a tangent `V`: `∇̄_U V = ∇_U V + h^l(U,V) + h^s(U,V)`.
//! For `N ∈ ltr`: `∇̄_U N = −A_N U + ∇^l_U N + D^s(U,N)`.
//! For `W ∈ S(TN⊥)`: `∇̄_U W = −A_W U + D^l(U,W) + ∇^s_U W`.
//! On the screen: `∇_U P̄V = ∇*_U P̄V + h*(U,P̄V)` and
//! `∇_U ξ = −A*_ξ U + ∇*ᵗ_U ξ`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::fields::{Bundle, Evaluator, FieldExpr, Part};
use super::poly::Poly;
use super::CalculusError;
use crate::bundles::Parts;
use crate::linalg::{add_vec, format_vector, Vector};
use crate::scalar::MetallicScalar;

/// A field with a stable display name.
#[derive(Debug, Clone)]
pub struct NamedField {
    pub name: String,
    pub expr: FieldExpr,
}

impl NamedField {
    pub fn new(name: impl Into<String>, expr: FieldExpr) -> Self {
        Self {
            name: name.into(),
            expr,
        }
    }
}

/// Coordinate fields, named frames, and `extra` seeded combinations of the
/// coordinate fields with affine polynomial coefficients or, if `constant`,
/// rational constants.
pub fn tangent_samples(ev: &Evaluator<'_>, extra: usize, seed: u64, constant: bool) -> Vec<NamedField> {
    let inst = ev.instance();
    let params = inst.params();
    let m = inst.chart_dim();
    let mut out: Vec<NamedField> = (0..m)
        .map(|k| {
            NamedField::new(
                format!("d/d{}", inst.variables()[k]),
                FieldExpr::Chart(inst.coordinate_field(k)),
            )
        })
        .collect();
    for (name, field) in inst.named_frames() {
        out.push(NamedField::new(name.clone(), FieldExpr::Chart(field.clone())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small = |rng: &mut ChaCha8Rng| params.ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    for j in 0..extra {
        let coeffs: Vec<Poly> = (0..m)
            .map(|_| {
                let c0 = small(&mut rng);
                let lin: Vec<MetallicScalar> = (0..m).map(|_| small(&mut rng)).collect();
                if constant {
                    Poly::constant(params, m, c0)
                } else {
                    Poly::affine(params, c0, &lin)
                }
            })
            .collect();
        if coeffs.iter().all(Poly::is_zero) {
            continue;
        }
        out.push(NamedField::new(format!("mix{}", j + 1), FieldExpr::Chart(coeffs)));
    }
    out
}

/// A bundle's stored basis followed by `extra` seeded combinations of it,
/// with affine polynomial coefficients or, if `constant`, rational constants.
pub fn bundle_samples(
    ev: &Evaluator<'_>,
    bundle: Bundle,
    point: usize,
    extra: usize,
    seed: u64,
    constant: bool,
) -> Vec<NamedField> {
    let inst = ev.instance();
    let params = inst.params();
    let m = inst.chart_dim();
    let k = ev.basis_len(point, bundle);
    let tag = match bundle {
        Bundle::Screen => "screen",
        Bundle::Radical => "xi",
        Bundle::Ltr => "ltr",
        Bundle::Coscreen => "coscreen",
        Bundle::L0 => "l0",
    };
    let mut out: Vec<NamedField> = (0..k)
        .map(|i| NamedField::new(format!("{tag}{}", i + 1), FieldExpr::basis(bundle, i)))
        .collect();
    if k < 2 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for j in 0..extra {
        let mut small = || params.ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        let coeffs: Vec<Poly> = (0..k)
            .map(|_| {
                let c0 = small();
                if constant {
                    Poly::constant(params, m, c0)
                } else {
                    let lin: Vec<MetallicScalar> = (0..m).map(|_| small()).collect();
                    Poly::affine(params, c0, &lin)
                }
            })
            .collect();
        if coeffs.iter().all(Poly::is_zero) {
            continue;
        }
        let terms = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| FieldExpr::basis(bundle, i).scaled(c))
            .collect();
        out.push(NamedField::new(format!("{tag}-mix{}", j + 1), FieldExpr::Sum(terms)));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransversalParts {
    pub ambient: Vector<MetallicScalar>,
    /// `A_N U` or `A_W U`.
    pub shape: Vector<MetallicScalar>,
    /// `∇^l_U N` or `D^l(U, W)`.
    pub ltr: Vector<MetallicScalar>,
    /// `D^s(U, N)` or `∇^s_U W`.
    pub coscreen: Vector<MetallicScalar>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadicalParts {
    pub ambient: Vector<MetallicScalar>,
    /// `A*_ξ U`.
    pub shape_star: Vector<MetallicScalar>,
    /// `∇*ᵗ_U ξ`.
    pub connection: Vector<MetallicScalar>,
    /// `h^l(U,ξ) + h^s(U,ξ)`.
    pub transversal: Vector<MetallicScalar>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussWeingartenData {
    pub ambient: Vector<MetallicScalar>,
    pub nabla: Vector<MetallicScalar>,
    pub h_l: Vector<MetallicScalar>,
    pub h_s: Vector<MetallicScalar>,
    /// `∇̄_U P̄V`.
    pub ambient_screen: Vector<MetallicScalar>,
    pub nabla_star: Vector<MetallicScalar>,
    pub h_star: Vector<MetallicScalar>,
    /// `h^l(U,P̄V) + h^s(U,P̄V)`.
    pub screen_transversal: Vector<MetallicScalar>,
    pub ltr: Vec<TransversalParts>,
    pub coscreen: Vec<TransversalParts>,
    pub radical: Vec<RadicalParts>,
}

impl GaussWeingartenData {
    /// Each decomposition sums back to its ambient derivative.
    pub fn reassembles(&self) -> bool {
        let sum = |a: &[MetallicScalar], b: &[MetallicScalar], c: &[MetallicScalar]| {
            add_vec(&add_vec(a, b), c)
        };
        let tangent_ok = sum(&self.nabla, &self.h_l, &self.h_s) == self.ambient;
        let transversal_ok = self
            .ltr
            .iter()
            .chain(&self.coscreen)
            .all(|t| sum(&neg(&t.shape), &t.ltr, &t.coscreen) == t.ambient);
        let screen_ok =
            sum(&self.nabla_star, &self.h_star, &self.screen_transversal) == self.ambient_screen;
        let radical_ok = self
            .radical
            .iter()
            .all(|r| sum(&neg(&r.shape_star), &r.connection, &r.transversal) == r.ambient);
        tangent_ok && transversal_ok && screen_ok && radical_ok
    }
}

fn resolve(ev: &Evaluator<'_>, idx: usize, v: &[MetallicScalar]) -> Result<Parts<MetallicScalar>, CalculusError> {
    Ok(ev.decomposition(idx).resolve(v)?)
}

fn neg(v: &[MetallicScalar]) -> Vector<MetallicScalar> {
    v.iter().map(|x| -x.clone()).collect()
}

/// All induced objects for the pair `(U, V)` at a sample point, with every
/// stored transversal and radical basis field.
pub fn gauss_weingarten(
    ev: &Evaluator<'_>,
    idx: usize,
    u: &FieldExpr,
    v: &FieldExpr,
) -> Result<GaussWeingartenData, CalculusError> {
    let dir = ev.direction(idx, u)?;
    if ev.direction(idx, v).is_err() {
        return Err(CalculusError::NotTangent { point: idx });
    }
    let along = |x: &FieldExpr| -> Result<Vector<MetallicScalar>, CalculusError> {
        Ok(ev.jet_along(idx, &dir, x)?.1)
    };
    let ambient = along(v)?;
    let p = resolve(ev, idx, &ambient)?;
    let pv = v.clone().project(Part::Screen);
    let ambient_screen = along(&pv)?;
    let ps = resolve(ev, idx, &ambient_screen)?;
    let transversal = |bundle: Bundle| -> Result<Vec<TransversalParts>, CalculusError> {
        (0..ev.basis_len(idx, bundle))
            .map(|k| {
                let a = along(&FieldExpr::basis(bundle, k))?;
                let q = resolve(ev, idx, &a)?;
                Ok(TransversalParts {
                    shape: neg(&q.tangent()),
                    ltr: q.ltr,
                    coscreen: q.coscreen,
                    ambient: a,
                })
            })
            .collect()
    };
    let radical = (0..ev.basis_len(idx, Bundle::Radical))
        .map(|k| {
            let a = along(&FieldExpr::basis(Bundle::Radical, k))?;
            let q = resolve(ev, idx, &a)?;
            Ok(RadicalParts {
                transversal: q.transversal(),
                shape_star: neg(&q.screen),
                connection: q.radical,
                ambient: a,
            })
        })
        .collect::<Result<Vec<_>, CalculusError>>()?;
    Ok(GaussWeingartenData {
        nabla: p.tangent(),
        h_l: p.ltr,
        h_s: p.coscreen,
        ambient,
        screen_transversal: ps.transversal(),
        nabla_star: ps.screen,
        h_star: ps.radical,
        ambient_screen,
        ltr: transversal(Bundle::Ltr)?,
        coscreen: transversal(Bundle::Coscreen)?,
        radical,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityRow {
    pub label: &'static str,
    pub point: usize,
    pub fields: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

fn row(label: &'static str, point: usize, fields: String, lhs: MetallicScalar, rhs: MetallicScalar) -> IdentityRow {
    IdentityRow {
        label,
        point,
        fields,
        holds: lhs == rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

fn vec_row(
    label: &'static str,
    point: usize,
    fields: String,
    lhs: &[MetallicScalar],
    rhs: &[MetallicScalar],
) -> IdentityRow {
    IdentityRow {
        label,
        point,
        fields,
        holds: lhs == rhs,
        lhs: format!("({})", format_vector(lhs).join(", ")),
        rhs: format!("({})", format_vector(rhs).join(", ")),
    }
}

/// Precomputed derivatives at one sample point.
struct PointTables {
    values: Vec<Vector<MetallicScalar>>,
    screen_values: Vec<Vector<MetallicScalar>>,
    xi: Vec<Vector<MetallicScalar>>,
    ltr: Vec<Vector<MetallicScalar>>,
    coscreen: Vec<Vector<MetallicScalar>>,
    /// `[u][v]`: parts of `∇̄_U V`.
    d_tangent: Vec<Vec<Parts<MetallicScalar>>>,
    d_screen: Vec<Vec<Parts<MetallicScalar>>>,
    d_xi: Vec<Vec<Parts<MetallicScalar>>>,
    d_ltr: Vec<Vec<Parts<MetallicScalar>>>,
    d_coscreen: Vec<Vec<Parts<MetallicScalar>>>,
}

fn tables(ev: &Evaluator<'_>, idx: usize, fields: &[NamedField]) -> Result<PointTables, CalculusError> {
    let basis = |b: Bundle| -> Vec<FieldExpr> {
        (0..ev.basis_len(idx, b)).map(|k| FieldExpr::basis(b, k)).collect()
    };
    let tangent: Vec<FieldExpr> = fields.iter().map(|f| f.expr.clone()).collect();
    let screen: Vec<FieldExpr> = tangent.iter().map(|f| f.clone().project(Part::Screen)).collect();
    let (xi, ltr, coscreen) = (basis(Bundle::Radical), basis(Bundle::Ltr), basis(Bundle::Coscreen));
    let values_of = |xs: &[FieldExpr]| -> Result<Vec<Vector<MetallicScalar>>, CalculusError> {
        xs.iter().map(|x| ev.value(idx, x)).collect()
    };
    let mut t = PointTables {
        values: values_of(&tangent)?,
        screen_values: values_of(&screen)?,
        xi: values_of(&xi)?,
        ltr: values_of(&ltr)?,
        coscreen: values_of(&coscreen)?,
        d_tangent: Vec::new(),
        d_screen: Vec::new(),
        d_xi: Vec::new(),
        d_ltr: Vec::new(),
        d_coscreen: Vec::new(),
    };
    for u in &tangent {
        let dir = ev.direction(idx, u)?;
        let along = |xs: &[FieldExpr]| -> Result<Vec<Parts<MetallicScalar>>, CalculusError> {
            xs.iter()
                .map(|x| resolve(ev, idx, &ev.jet_along(idx, &dir, x)?.1))
                .collect()
        };
        t.d_tangent.push(along(&tangent)?);
        t.d_screen.push(along(&screen)?);
        t.d_xi.push(along(&xi)?);
        t.d_ltr.push(along(&ltr)?);
        t.d_coscreen.push(along(&coscreen)?);
    }
    Ok(t)
}

/// Evaluates the duality identities between the induced objects, the
/// vanishing of the radical self-pairing, the metric-defect formula, and the
/// metric compatibility of the screen connection, for every sampled field
/// combination at every sample point.
pub fn identity_suite(
    ev: &Evaluator<'_>,
    fields: &[NamedField],
) -> Result<Vec<IdentityRow>, CalculusError> {
    let space = ev.instance().ambient();
    let g = |a: &[MetallicScalar], b: &[MetallicScalar]| space.inner(a, b);
    let mut rows = Vec::new();
    for idx in 0..ev.point_count() {
        let t = tables(ev, idx, fields)?;
        let nf = fields.len();
        for u in 0..nf {
            let un = &fields[u].name;
            for v in 0..nf {
                let vn = &fields[v].name;
                let dv = &t.d_tangent[u][v];
                for (a, w) in t.coscreen.iter().enumerate() {
                    let dw = &t.d_coscreen[u][a];
                    let shape_w = neg(&dw.tangent());
                    rows.push(row(
                        "coscreen-shape-duality",
                        idx,
                        format!("U={un}, V={vn}, W=coscreen{}", a + 1),
                        g(&dv.coscreen, w) + g(&t.values[v], &dw.ltr),
                        g(&shape_w, &t.values[v]),
                    ));
                }
                let dpv = &t.d_screen[u][v];
                let pv = &t.screen_values[v];
                for (i, xi) in t.xi.iter().enumerate() {
                    let shape_star = neg(&t.d_xi[u][i].screen);
                    rows.push(row(
                        "radical-shape-duality",
                        idx,
                        format!("U={un}, V={vn}, xi{}", i + 1),
                        g(&dpv.ltr, xi),
                        g(&shape_star, pv),
                    ));
                }
                for (i, n) in t.ltr.iter().enumerate() {
                    let shape_n = neg(&t.d_ltr[u][i].tangent());
                    rows.push(row(
                        "screen-second-form-duality",
                        idx,
                        format!("U={un}, V={vn}, N{}", i + 1),
                        g(&dpv.radical, n),
                        g(&shape_n, pv),
                    ));
                }
                for z in v..nf {
                    let zn = &fields[z].name;
                    let dz = &t.d_tangent[u][z];
                    let directional = ev.derivative_of_pairing(idx, &fields[u].expr, &fields[v].expr, &fields[z].expr)?;
                    let defect = directional
                        - g(&dv.tangent(), &t.values[z])
                        - g(&t.values[v], &dz.tangent());
                    let formula = g(&dv.ltr, &t.values[z]) + g(&dz.ltr, &t.values[v]);
                    rows.push(row(
                        "metric-defect-formula",
                        idx,
                        format!("U={un}, V={vn}, Z={zn}"),
                        defect,
                        formula,
                    ));
                    let sv = fields[v].expr.clone().project(Part::Screen);
                    let sz = fields[z].expr.clone().project(Part::Screen);
                    let directional = ev.derivative_of_pairing(idx, &fields[u].expr, &sv, &sz)?;
                    let screen_defect = directional
                        - g(&t.d_screen[u][v].screen, &t.screen_values[z])
                        - g(&t.screen_values[v], &t.d_screen[u][z].screen);
                    rows.push(row(
                        "screen-metric-compatibility",
                        idx,
                        format!("U={un}, V={vn}, Z={zn}"),
                        screen_defect,
                        ev.instance().params().zero(),
                    ));
                }
            }
            for (i, n) in t.ltr.iter().enumerate() {
                let dn = &t.d_ltr[u][i];
                for (a, w) in t.coscreen.iter().enumerate() {
                    let shape_w = neg(&t.d_coscreen[u][a].tangent());
                    rows.push(row(
                        "coscreen-ltr-duality",
                        idx,
                        format!("U={un}, N{}, W=coscreen{}", i + 1, a + 1),
                        g(&dn.coscreen, w),
                        g(n, &shape_w),
                    ));
                }
            }
            for (i, xi) in t.xi.iter().enumerate() {
                rows.push(row(
                    "radical-self-pairing",
                    idx,
                    format!("U={un}, xi{}", i + 1),
                    g(&t.d_xi[u][i].ltr, xi),
                    ev.instance().params().zero(),
                ));
            }
        }
        for i in 0..t.xi.len() {
            let xi = FieldExpr::basis(Bundle::Radical, i);
            let d = ev.derivative_parts(idx, &xi, &xi)?;
            let shape_star = neg(&d.screen);
            let zero = vec![ev.instance().params().zero(); shape_star.len()];
            rows.push(vec_row(
                "radical-shape-annihilates-radical",
                idx,
                format!("xi{}", i + 1),
                &shape_star,
                &zero,
            ));
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectRow {
    pub point: usize,
    pub fields: String,
    /// `(∇_U g)(V, Z)`.
    pub defect: String,
    /// `(∇*_U g)(P̄V, P̄Z)`; always zero.
    pub screen_defect: String,
    pub defect_zero: bool,
    pub screen_defect_zero: bool,
}

/// `(∇_U g)(V, Z) = U(g(V,Z)) − g(∇_U V, Z) − g(V, ∇_U Z)`.
pub fn defect_value(
    ev: &Evaluator<'_>,
    idx: usize,
    u: &FieldExpr,
    v: &FieldExpr,
    z: &FieldExpr,
) -> Result<MetallicScalar, CalculusError> {
    let space = ev.instance().ambient();
    let dv = ev.derivative_parts(idx, u, v)?;
    let dz = ev.derivative_parts(idx, u, z)?;
    let vv = ev.value(idx, v)?;
    let zv = ev.value(idx, z)?;
    Ok(ev.derivative_of_pairing(idx, u, v, z)?
        - space.inner(&dv.tangent(), &zv)
        - space.inner(&vv, &dz.tangent()))
}

fn screen_defect_value(
    ev: &Evaluator<'_>,
    idx: usize,
    u: &FieldExpr,
    v: &FieldExpr,
    z: &FieldExpr,
) -> Result<MetallicScalar, CalculusError> {
    let space = ev.instance().ambient();
    let sv = v.clone().project(Part::Screen);
    let sz = z.clone().project(Part::Screen);
    let dv = ev.derivative_parts(idx, u, &sv)?;
    let dz = ev.derivative_parts(idx, u, &sz)?;
    let vv = ev.value(idx, &sv)?;
    let zv = ev.value(idx, &sz)?;
    Ok(ev.derivative_of_pairing(idx, u, &sv, &sz)?
        - space.inner(&dv.screen, &zv)
        - space.inner(&vv, &dz.screen))
}

pub fn metric_defect(ev: &Evaluator<'_>, fields: &[NamedField]) -> Result<Vec<DefectRow>, CalculusError> {
    let mut rows = Vec::new();
    for idx in 0..ev.point_count() {
        for u in fields {
            for (vi, v) in fields.iter().enumerate() {
                for z in &fields[vi..] {
                    let d = defect_value(ev, idx, &u.expr, &v.expr, &z.expr)?;
                    let s = screen_defect_value(ev, idx, &u.expr, &v.expr, &z.expr)?;
                    rows.push(DefectRow {
                        point: idx,
                        fields: format!("U={}, V={}, Z={}", u.name, v.name, z.name),
                        defect_zero: d.is_zero(),
                        screen_defect_zero: s.is_zero(),
                        defect: d.to_string(),
                        screen_defect: s.to_string(),
                    });
                }
            }
        }
    }
    Ok(rows)
}
