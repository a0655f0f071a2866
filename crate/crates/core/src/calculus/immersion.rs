use std::collections::BTreeMap;

use super::poly::{Poly, PolyVec};
use super::CalculusError;
use crate::field::FieldElement;
use crate::linalg::{solve, value_rank, Matrix, Vector};
use crate::scalar::{MetallicParams, MetallicScalar};
use crate::structure::AmbientSpace;

/// Tangent field `Σ a^i(u) ∂/∂u_i`, stored as its chart coefficients.
pub type ChartField = Vec<Poly>;

/// Polynomial immersion `Φ` of a chart into the flat ambient space.
#[derive(Debug, Clone)]
pub struct ImmersionInstance {
    m: usize,
    ambient: AmbientSpace,
    phi: PolyVec,
    jacobian: Vec<PolyVec>,
    variables: Vec<String>,
    named_frames: BTreeMap<String, ChartField>,
    sample_points: Vec<Vec<MetallicScalar>>,
}

impl ImmersionInstance {
    pub fn new(
        ambient: AmbientSpace,
        variables: Vec<String>,
        phi: PolyVec,
        named_frames: BTreeMap<String, ChartField>,
        sample_points: Vec<Vec<MetallicScalar>>,
    ) -> Result<Self, CalculusError> {
        let m = variables.len();
        if phi.len() != ambient.dim() {
            return Err(CalculusError::DimensionMismatch {
                expected: ambient.dim(),
                found: phi.len(),
            });
        }
        for field in named_frames.values() {
            if field.len() != m {
                return Err(CalculusError::DimensionMismatch {
                    expected: m,
                    found: field.len(),
                });
            }
        }
        for pt in &sample_points {
            if pt.len() != m {
                return Err(CalculusError::DimensionMismatch {
                    expected: m,
                    found: pt.len(),
                });
            }
        }
        let jacobian = (0..m).map(|k| phi.derivative(k)).collect();
        let inst = Self {
            m,
            ambient,
            phi,
            jacobian,
            variables,
            named_frames,
            sample_points,
        };
        for (idx, pt) in inst.sample_points.iter().enumerate() {
            if value_rank(&inst.frame_at(pt)) != m {
                return Err(CalculusError::RankDeficient {
                    point: idx,
                    expected: m,
                });
            }
        }
        Ok(inst)
    }

    pub fn params(&self) -> MetallicParams {
        self.ambient.params()
    }

    pub fn chart_dim(&self) -> usize {
        self.m
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn phi(&self) -> &PolyVec {
        &self.phi
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn named_frames(&self) -> &BTreeMap<String, ChartField> {
        &self.named_frames
    }

    pub fn sample_points(&self) -> &[Vec<MetallicScalar>] {
        &self.sample_points
    }

    /// `Z_i = ∂Φ/∂u_i`.
    pub fn jacobian_frame(&self) -> &[PolyVec] {
        &self.jacobian
    }

    pub fn coordinate_field(&self, k: usize) -> ChartField {
        let params = self.params();
        (0..self.m)
            .map(|i| {
                if i == k {
                    Poly::one(params, self.m)
                } else {
                    Poly::zero(params, self.m)
                }
            })
            .collect()
    }

    pub fn frame_at<T: FieldElement>(&self, point: &[T]) -> Vec<Vector<T>> {
        self.jacobian.iter().map(|z| z.eval(point)).collect()
    }

    /// Ambient field `Σ a^i Z_i`.
    pub fn push_forward(&self, x: &[Poly]) -> PolyVec {
        let params = self.params();
        let mut out = PolyVec::zero(params, self.m, self.ambient.dim());
        for (a, z) in x.iter().zip(&self.jacobian) {
            out = out.add(&z.mul_poly(a));
        }
        out
    }

    /// `(∇̄_X Y)^k = Σ_i a^i ∂Y^k/∂u_i` for the flat ambient connection.
    pub fn ambient_derivative(&self, x: &[Poly], y: &PolyVec) -> PolyVec {
        let params = self.params();
        let mut out = PolyVec::zero(params, self.m, y.len());
        for (i, a) in x.iter().enumerate() {
            out = out.add(&y.derivative(i).mul_poly(a));
        }
        out
    }

    /// `[X, Y]^k = X(Y^k) − Y(X^k)`.
    pub fn lie_bracket(&self, x: &[Poly], y: &[Poly]) -> ChartField {
        let params = self.params();
        (0..self.m)
            .map(|k| {
                let mut acc = Poly::zero(params, self.m);
                for i in 0..self.m {
                    acc = acc + x[i].clone() * y[k].derivative(i) - y[i].clone() * x[k].derivative(i);
                }
                acc
            })
            .collect()
    }

    /// Chart coefficients of an ambient vector at a point, if it is tangent.
    pub fn chart_coordinates(
        &self,
        point: &[MetallicScalar],
        v: &[MetallicScalar],
    ) -> Option<Vec<MetallicScalar>> {
        let frame = self.frame_at(point);
        let m = Matrix::from_columns(self.params(), self.ambient.dim(), &frame);
        solve(&m, v).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{AmbientMetric, Signature};
    use crate::structure::{build_structure, StructureSpec};

    fn cone() -> ImmersionInstance {
        let params = MetallicParams::golden();
        let metric = AmbientMetric::new(Signature::new(vec![-1, 1, 1]).unwrap());
        let j = Matrix::identity(params, 3).scale(&params.sigma());
        let s = build_structure(params, &StructureSpec::Matrix(j), &metric).unwrap();
        let space = AmbientSpace::new(metric, s).unwrap();
        let sv = Poly::var(params, 2, 0);
        let t = Poly::var(params, 2, 1);
        let one = Poly::one(params, 2);
        let phi = PolyVec::new(vec![
            sv.clone() * (t.clone() * t.clone() + one.clone()),
            sv.clone() * (t.clone() * t.clone() - one),
            (sv * t).scale(&params.int(2)),
        ]);
        ImmersionInstance::new(
            space,
            vec!["s".into(), "t".into()],
            phi,
            BTreeMap::new(),
            vec![vec![params.int(1), params.int(2)]],
        )
        .unwrap()
    }

    #[test]
    fn cone_jacobian_and_second_derivative() {
        let inst = cone();
        let params = inst.params();
        let frame = inst.frame_at(&[params.int(1), params.int(2)]);
        let v = |xs: &[i64]| xs.iter().map(|&x| params.int(x)).collect::<Vec<_>>();
        assert_eq!(frame[0], v(&[5, 3, 4]));
        assert_eq!(frame[1], v(&[4, 4, 2]));
        let ds = inst.coordinate_field(0);
        let z2 = inst.jacobian_frame()[1].clone();
        let d = inst.ambient_derivative(&ds, &z2);
        assert_eq!(d.eval(&[params.int(7), params.int(3)]), v(&[6, 6, 2]));
    }

    #[test]
    fn brackets() {
        let inst = cone();
        let params = inst.params();
        let d1 = inst.coordinate_field(0);
        let d2 = inst.coordinate_field(1);
        assert!(inst.lie_bracket(&d1, &d2).iter().all(Poly::is_zero));
        // [u₂∂₁, ∂₂] = −∂₁
        let x = vec![Poly::var(params, 2, 1), Poly::zero(params, 2)];
        let b = inst.lie_bracket(&x, &d2);
        assert_eq!(b[0], -Poly::one(params, 2));
        assert!(b[1].is_zero());
    }
}
