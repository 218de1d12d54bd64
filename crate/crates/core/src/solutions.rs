//! Explicit finite-dimensional solution families of the twistor equation
//! on the supported spaces.
//!
//! Each family is a [`SolutionFamily`]: a space, a labelled basis of spinor
//! fields, and a linear `instantiate` map from complex parameter vectors to
//! fields. The families are:
//!
//! * [`flat_family`] — `φ(x) = u + x·v` on flat space.
//! * [`cahen_wallach_parallel_family`] — parallel spinors on a plane-wave
//!   model: constants with values annihilated by the null direction `V`.
//! * [`mpm_family`] — the full twistor family on the conformally flat
//!   models `M±`, built from a transverse spinor quadruple `(w1,..,w4)` and
//!   the profile `f = sinh` (plus) or `f = sin` (minus).
//! * [`hypersurface_family`] — restrictions `φ = (u + x·v)|_F` of flat
//!   ambient solutions to a quadric; in odd dimension the parity
//!   constraint `u ∈ Δ+`, `v ∈ Δ-` applies.
//! * [`covering_family`] — pullbacks of the quadric solutions to covers of
//!   the pseudo-hyperbolic space through the cylinder chart
//!   `π(t, x) = (ρ cos t, ρ sin t, x)`, `ρ = sqrt(r² + |x|²)`.
//!
//! [`twistor_nullity`] is a rank probe: given any linear family of
//! candidate fields it computes the dimension of the subspace that
//! actually satisfies the twistor equation, by stacking residual
//! conditions at sample points.

use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::{tensor_with_u, CliffordModel, Signature};
use crate::linalg;
use crate::spaces::{CoverOrder, SpaceModel};
use crate::spinops::{twistor_residual, SpinorField};
use crate::{C64, CMatrix, CVector, Error, RVector, Result};

/// Which chart a family's fields are defined on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyChart {
    /// The space's own coordinate chart.
    Coordinate,
    /// Ambient coordinates of a quadric.
    Ambient,
    /// The cylinder chart `(t, x)` of a cover of the pseudo-hyperbolic
    /// space.
    Covering,
}

/// A linear combination of basis fields; exact analytic linearity.
pub struct CombinationField {
    fields: Vec<Arc<dyn SpinorField + Send + Sync>>,
    coeffs: Vec<C64>,
    value_dim: usize,
}

impl SpinorField for CombinationField {
    fn value(&self, p: &RVector) -> CVector {
        let mut acc = CVector::zeros(self.value_dim);
        for (f, c) in self.fields.iter().zip(&self.coeffs) {
            if c.norm_sqr() != 0.0 {
                acc += f.value(p) * *c;
            }
        }
        acc
    }
    fn partial(&self, p: &RVector, dir: usize) -> CVector {
        let mut acc = CVector::zeros(self.value_dim);
        for (f, c) in self.fields.iter().zip(&self.coeffs) {
            if c.norm_sqr() != 0.0 {
                acc += f.partial(p, dir) * *c;
            }
        }
        acc
    }
}

/// A finite-dimensional linear family of spinor fields on a space.
pub struct SolutionFamily {
    /// The space the fields live on.
    pub space: SpaceModel,
    /// Which chart the fields take their points in.
    pub chart: FamilyChart,
    /// Human-readable family name.
    pub label: String,
    /// Description of the parameter space.
    pub parameter_space: String,
    basis: Vec<Arc<dyn SpinorField + Send + Sync>>,
    value_dim: usize,
}

impl SolutionFamily {
    /// Assemble a family from explicit basis fields. The built-in
    /// constructors cover the standard model spaces; this is for bespoke
    /// subfamilies and ansatz spaces.
    pub fn custom(
        space: SpaceModel,
        chart: FamilyChart,
        label: String,
        parameter_space: String,
        basis: Vec<Arc<dyn SpinorField + Send + Sync>>,
        value_dim: usize,
    ) -> SolutionFamily {
        SolutionFamily { space, chart, label, parameter_space, basis, value_dim }
    }

    /// Number of complex parameters.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the spinor values.
    pub fn value_dim(&self) -> usize {
        self.value_dim
    }

    /// The `i`-th basis field.
    pub fn basis_field(&self, i: usize) -> &(dyn SpinorField + Send + Sync) {
        self.basis[i].as_ref()
    }

    /// Shared handle to the `i`-th basis field.
    pub fn basis_arc(&self, i: usize) -> Arc<dyn SpinorField + Send + Sync> {
        self.basis[i].clone()
    }

    /// Build the field with the given parameter vector (linear in the
    /// parameters by construction).
    pub fn instantiate(&self, params: &[C64]) -> Result<CombinationField> {
        if params.len() != self.basis.len() {
            return Err(Error::BadParameterCount {
                expected: self.basis.len(),
                got: params.len(),
            });
        }
        Ok(CombinationField {
            fields: self.basis.clone(),
            coeffs: params.to_vec(),
            value_dim: self.value_dim,
        })
    }

    /// Draw a random chart point appropriate for this family's chart.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> RVector {
        match self.chart {
            FamilyChart::Coordinate | FamilyChart::Ambient => self.space.sample_point(rng),
            FamilyChart::Covering => {
                let d = self.space.dim();
                RVector::from_iterator(d, (0..d).map(|_| rng.gen_range(-1.0..1.0)))
            }
        }
    }
}

/// Serialize a parameter vector as `[[re, im], ...]`.
pub fn params_to_json(params: &[C64]) -> serde_json::Value {
    serde_json::Value::Array(
        params
            .iter()
            .map(|c| serde_json::json!([c.re, c.im]))
            .collect(),
    )
}

/// Parse a parameter vector from `[[re, im], ...]`.
pub fn params_from_json(v: &serde_json::Value) -> Result<Vec<C64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidParameter("parameters must be an array".into()))?;
    arr.iter()
        .map(|e| {
            let pair = e
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::InvalidParameter("parameter entries are [re, im]".into()))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::InvalidParameter("non-numeric parameter".into()))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::InvalidParameter("non-numeric parameter".into()))?;
            Ok(Complex::new(re, im))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Concrete basis fields
// ---------------------------------------------------------------------------

/// Ambient-linear field `φ(x) = u + x·v` with exact partials `∂_a φ = e_a v`.
pub struct LinearAmbientField {
    model: Arc<CliffordModel>,
    pub u: CVector,
    pub v: CVector,
}

impl LinearAmbientField {
    pub fn new(model: Arc<CliffordModel>, u: CVector, v: CVector) -> LinearAmbientField {
        LinearAmbientField { model, u, v }
    }
}

impl SpinorField for LinearAmbientField {
    fn value(&self, p: &RVector) -> CVector {
        &self.u + self.model.vector_multiply(p.as_slice(), &self.v)
    }
    fn partial(&self, _p: &RVector, dir: usize) -> CVector {
        self.model.generator(dir) * &self.v
    }
}

/// Constant field with exact zero partials.
pub struct ConstantBasisField {
    pub value: CVector,
}

impl SpinorField for ConstantBasisField {
    fn value(&self, _p: &RVector) -> CVector {
        self.value.clone()
    }
    fn partial(&self, _p: &RVector, _dir: usize) -> CVector {
        CVector::zeros(self.value.len())
    }
}

/// Which conformally flat plane-wave model a family lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelSign {
    /// `λ = (1,...,1)`, profile `f = sinh`.
    Plus,
    /// `λ = (-1,...,-1)`, profile `f = sin`.
    Minus,
}

impl ModelSign {
    fn sign(self) -> f64 {
        match self {
            ModelSign::Plus => 1.0,
            ModelSign::Minus => -1.0,
        }
    }
}

/// Profile function pair `(f(s), f'(s))`; `f'' = ± f` exactly.
pub(crate) fn mpm_profile(sign: ModelSign, s: f64) -> (f64, f64) {
    match sign {
        ModelSign::Plus => (s.sinh(), s.cosh()),
        ModelSign::Minus => (s.sin(), s.cos()),
    }
}

/// Second derivative of the profile, `f'' = sign · f`.
pub(crate) fn mpm_profile_second(sign: ModelSign, s: f64) -> f64 {
    sign.sign() * mpm_profile(sign, s).0
}

/// One basis field of the twistor family on `M±`, parameterised by a
/// transverse spinor quadruple `(w1, w2, w3, w4)`:
///
/// ```text
/// φ = (-sign f'(s) w3 - f(s) w4 + x·w1) ⊗ u(+1)
///   + (-2t w1 + w2 + x·(f(s) w3 + f'(s) w4)) ⊗ u(-1)
/// ```
///
/// where `x·` is the transverse Clifford multiplication and the chart is
/// `(s, t, x_1, ..., x_{n-2})`.
pub struct MpmField {
    sub: Arc<CliffordModel>,
    sign: ModelSign,
    pub w1: CVector,
    pub w2: CVector,
    pub w3: CVector,
    pub w4: CVector,
}

impl MpmField {
    fn x_mul(&self, p: &RVector, w: &CVector) -> CVector {
        let nx = self.sub.signature().n;
        let x: Vec<f64> = (0..nx).map(|j| p[j + 2]).collect();
        self.sub.vector_multiply(&x, w)
    }

    fn parts(&self, p: &RVector) -> (CVector, CVector) {
        let (f, fp) = mpm_profile(self.sign, p[0]);
        let sgn = self.sign.sign();
        let top = &self.w3 * Complex::new(-sgn * fp, 0.0)
            + &self.w4 * Complex::new(-f, 0.0)
            + self.x_mul(p, &self.w1);
        let bottom = &self.w1 * Complex::new(-2.0 * p[1], 0.0)
            + &self.w2
            + self.x_mul(p, &(&self.w3 * Complex::new(f, 0.0) + &self.w4 * Complex::new(fp, 0.0)));
        (top, bottom)
    }
}

impl SpinorField for MpmField {
    fn value(&self, p: &RVector) -> CVector {
        let (top, bottom) = self.parts(p);
        tensor_with_u(&top, 1) + tensor_with_u(&bottom, -1)
    }

    fn partial(&self, p: &RVector, dir: usize) -> CVector {
        let (f, fp) = mpm_profile(self.sign, p[0]);
        let fpp = mpm_profile_second(self.sign, p[0]);
        match dir {
            0 => {
                // ∂s: top' = -sign f'' w3 - f' w4 = -f w3 - f' w4,
                //     bottom' = x·(f' w3 + f'' w4).
                let top = &self.w3 * Complex::new(-f, 0.0) + &self.w4 * Complex::new(-fp, 0.0);
                let bottom = self.x_mul(
                    p,
                    &(&self.w3 * Complex::new(fp, 0.0) + &self.w4 * Complex::new(fpp, 0.0)),
                );
                tensor_with_u(&top, 1) + tensor_with_u(&bottom, -1)
            }
            1 => tensor_with_u(&(&self.w1 * Complex::new(-2.0, 0.0)), -1),
            j => {
                let ej = self.sub.generator(j - 2);
                let top = ej * &self.w1;
                let bottom =
                    ej * (&self.w3 * Complex::new(f, 0.0) + &self.w4 * Complex::new(fp, 0.0));
                tensor_with_u(&top, 1) + tensor_with_u(&bottom, -1)
            }
        }
    }
}

/// The cylinder chart of covers of the pseudo-hyperbolic space:
/// `π(t, x) = (ρ cos t, ρ sin t, x)` with `ρ = sqrt(r² + |x|²)` lands on
/// the quadric `<y,y> = -r²` in `(n+1, 2)` ambient space.
pub fn covering_map(r: f64, p: &RVector) -> RVector {
    let t = p[0];
    let x = p.rows(1, p.len() - 1);
    let rho = (r * r + x.norm_squared()).sqrt();
    let mut out = RVector::zeros(p.len() + 1);
    out[0] = rho * t.cos();
    out[1] = rho * t.sin();
    for j in 0..x.len() {
        out[j + 2] = x[j];
    }
    out
}

/// Columns of the differential of [`covering_map`].
pub fn covering_differential(r: f64, p: &RVector) -> crate::RMatrix {
    let t = p[0];
    let x = p.rows(1, p.len() - 1);
    let rho = (r * r + x.norm_squared()).sqrt();
    let mut d = crate::RMatrix::zeros(p.len() + 1, p.len());
    d[(0, 0)] = -rho * t.sin();
    d[(1, 0)] = rho * t.cos();
    for j in 0..x.len() {
        d[(0, j + 1)] = x[j] / rho * t.cos();
        d[(1, j + 1)] = x[j] / rho * t.sin();
        d[(j + 2, j + 1)] = 1.0;
    }
    d
}

/// Pullback of an ambient-linear quadric solution through the cylinder
/// chart; partials use the chain rule exactly.
pub struct CoveringField {
    ambient: LinearAmbientField,
    r: f64,
}

impl CoveringField {
    /// The underlying field on the quadric.
    pub fn ambient_field(&self) -> &LinearAmbientField {
        &self.ambient
    }
}

impl SpinorField for CoveringField {
    fn value(&self, p: &RVector) -> CVector {
        self.ambient.value(&covering_map(self.r, p))
    }
    fn partial(&self, p: &RVector, dir: usize) -> CVector {
        let d = covering_differential(self.r, p);
        let col: Vec<f64> = (0..d.nrows()).map(|i| d[(i, dir)]).collect();
        // ∂_dir (u + π(y)·v) = (dπ e_dir) · v.
        self.ambient.model.vector_multiply(&col, &self.ambient.v)
    }
}

// ---------------------------------------------------------------------------
// Family constructors
// ---------------------------------------------------------------------------

/// All twistor spinors on flat space: `φ(x) = u + x·v`, dimension
/// `2 · 2^(n/2)`.
pub fn flat_family(sig: Signature) -> Result<SolutionFamily> {
    let space = SpaceModel::Flat { sig };
    space.validate()?;
    let model = Arc::new(CliffordModel::build(sig)?);
    let dim = model.dim();
    let mut basis: Vec<Arc<dyn SpinorField + Send + Sync>> = Vec::with_capacity(2 * dim);
    for idx in model.u_basis() {
        let u = model.u_vector(&idx);
        basis.push(Arc::new(LinearAmbientField {
            model: model.clone(),
            u,
            v: CVector::zeros(dim),
        }));
    }
    for idx in model.u_basis() {
        let v = model.u_vector(&idx);
        basis.push(Arc::new(LinearAmbientField {
            model: model.clone(),
            u: CVector::zeros(dim),
            v,
        }));
    }
    Ok(SolutionFamily {
        space,
        chart: FamilyChart::Coordinate,
        label: format!("flat({},{}) family u + x·v", sig.n, sig.k),
        parameter_space: "coefficients of u then v in the spinor basis; φ(x) = u + x·v".into(),
        basis,
        value_dim: dim,
    })
}

/// Parallel spinors on a plane-wave model: constants with values in the
/// half of the spinor module annihilated by the parallel null direction
/// `V`. Dimension `2^(n/2) / 2`.
pub fn cahen_wallach_parallel_family(lambda: &[f64]) -> Result<SolutionFamily> {
    let space = SpaceModel::CahenWallach { lambda: lambda.to_vec() };
    space.validate()?;
    let n = space.dim();
    let model = CliffordModel::new(n, 1)?;
    let sub = CliffordModel::new(n - 2, 0)?;
    let mut basis: Vec<Arc<dyn SpinorField + Send + Sync>> = Vec::new();
    for idx in sub.u_basis() {
        let w = sub.u_vector(&idx);
        basis.push(Arc::new(ConstantBasisField { value: tensor_with_u(&w, -1) }));
    }
    Ok(SolutionFamily {
        space,
        chart: FamilyChart::Coordinate,
        label: format!("plane-wave parallel family, λ = {lambda:?}"),
        parameter_space: "coefficients of w in the transverse spinor basis; φ = w ⊗ u(-1)".into(),
        basis,
        value_dim: model.dim(),
    })
}

/// The full twistor family on the conformally flat plane-wave models:
/// dimension `2 · 2^(n/2)`, parameterised by transverse quadruples
/// `(w1, w2, w3, w4)`.
pub fn mpm_family(n: usize, sign: ModelSign) -> Result<SolutionFamily> {
    let space = match sign {
        ModelSign::Plus => SpaceModel::MPlus { n },
        ModelSign::Minus => SpaceModel::MMinus { n },
    };
    space.validate()?;
    let model = CliffordModel::new(n, 1)?;
    let sub = Arc::new(CliffordModel::new(n - 2, 0)?);
    let q = sub.dim();
    let mut basis: Vec<Arc<dyn SpinorField + Send + Sync>> = Vec::with_capacity(4 * q);
    for slot in 0..4 {
        for idx in sub.u_basis() {
            let w = sub.u_vector(&idx);
            let zero = || CVector::zeros(q);
            let mut f = MpmField {
                sub: sub.clone(),
                sign,
                w1: zero(),
                w2: zero(),
                w3: zero(),
                w4: zero(),
            };
            match slot {
                0 => f.w1 = w,
                1 => f.w2 = w,
                2 => f.w3 = w,
                _ => f.w4 = w,
            }
            basis.push(Arc::new(f));
        }
    }
    Ok(SolutionFamily {
        space,
        chart: FamilyChart::Coordinate,
        label: format!(
            "conformally flat plane-wave family on {} (n = {n})",
            match sign {
                ModelSign::Plus => "m-plus",
                ModelSign::Minus => "m-minus",
            }
        ),
        parameter_space:
            "coefficients of (w1, w2, w3, w4) in the transverse spinor basis".into(),
        basis,
        value_dim: model.dim(),
    })
}

/// Twistor spinors on a quadric as restrictions of ambient flat solutions
/// `φ = (u + x·v)|_F`; in odd dimension `u` has positive and `v` negative
/// chirality. Dimension `2 · 2^(n/2)`.
pub fn hypersurface_family(space: &SpaceModel) -> Result<SolutionFamily> {
    space.validate()?;
    if !space.is_hypersurface() {
        return Err(Error::UnsupportedSpace {
            op: "hypersurface_family",
            kind: space.kind_name().to_string(),
        });
    }
    let model = Arc::new(CliffordModel::build(space.clifford_signature()?)?);
    let dim = model.dim();
    let n = space.dim();
    let mut basis: Vec<Arc<dyn SpinorField + Send + Sync>> = Vec::new();
    let (u_vectors, v_vectors): (Vec<CVector>, Vec<CVector>) = if n % 2 == 1 {
        let plus = model.chirality_basis(1)?;
        let minus = model.chirality_basis(-1)?;
        (
            plus.column_iter().map(|c| CVector::from_column_slice(c.as_slice())).collect(),
            minus.column_iter().map(|c| CVector::from_column_slice(c.as_slice())).collect(),
        )
    } else {
        let all: Vec<CVector> = model.u_basis().iter().map(|i| model.u_vector(i)).collect();
        (all.clone(), all)
    };
    for u in &u_vectors {
        basis.push(Arc::new(LinearAmbientField {
            model: model.clone(),
            u: u.clone(),
            v: CVector::zeros(dim),
        }));
    }
    for v in &v_vectors {
        basis.push(Arc::new(LinearAmbientField {
            model: model.clone(),
            u: CVector::zeros(dim),
            v: v.clone(),
        }));
    }
    Ok(SolutionFamily {
        space: space.clone(),
        chart: FamilyChart::Ambient,
        label: format!("{} family (u + x·v)|F, n = {n}", space.kind_name()),
        parameter_space: if n % 2 == 1 {
            "coefficients of u ∈ Δ+ then v ∈ Δ-; φ = (u + x·v)|F".into()
        } else {
            "coefficients of u then v in the ambient spinor basis; φ = (u + x·v)|F".into()
        },
        basis,
        value_dim: dim,
    })
}

/// Twistor spinors on covers of the pseudo-hyperbolic space: pullbacks of
/// the quadric family through the cylinder chart. The cover order is
/// recorded in the label; the basis is the same for every cover (all
/// pullbacks are `2π`-periodic in `t`), the difference lies in which spin
/// structures the quotient module can impose.
pub fn covering_family(order: CoverOrder, n: usize, r: f64) -> Result<SolutionFamily> {
    let space = SpaceModel::PseudoHyperbolic { n, r };
    let quadric = hypersurface_family(&space)?;
    let mut basis: Vec<Arc<dyn SpinorField + Send + Sync>> = Vec::new();
    let model = Arc::new(CliffordModel::build(space.clifford_signature()?)?);
    let dim = model.dim();
    // Rebuild the same (u, v) basis as the quadric family, wrapped in the
    // cylinder chart.
    let (u_vectors, v_vectors): (Vec<CVector>, Vec<CVector>) = if n % 2 == 1 {
        let plus = model.chirality_basis(1)?;
        let minus = model.chirality_basis(-1)?;
        (
            plus.column_iter().map(|c| CVector::from_column_slice(c.as_slice())).collect(),
            minus.column_iter().map(|c| CVector::from_column_slice(c.as_slice())).collect(),
        )
    } else {
        let all: Vec<CVector> = model.u_basis().iter().map(|i| model.u_vector(i)).collect();
        (all.clone(), all)
    };
    for u in &u_vectors {
        basis.push(Arc::new(CoveringField {
            ambient: LinearAmbientField {
                model: model.clone(),
                u: u.clone(),
                v: CVector::zeros(dim),
            },
            r,
        }));
    }
    for v in &v_vectors {
        basis.push(Arc::new(CoveringField {
            ambient: LinearAmbientField {
                model: model.clone(),
                u: CVector::zeros(dim),
                v: v.clone(),
            },
            r,
        }));
    }
    let order_label = match order {
        CoverOrder::Universal => "universal cover".to_string(),
        CoverOrder::Finite(m) => format!("{m}-fold cover"),
    };
    Ok(SolutionFamily {
        space,
        chart: FamilyChart::Covering,
        label: format!("{order_label} of the pseudo-hyperbolic quadric, n = {n}"),
        parameter_space: quadric.parameter_space.clone(),
        basis,
        value_dim: dim,
    })
}

/// A linear probe family `φ = u + Σ_a y_a w_a` with an independent spinor
/// parameter per chart coordinate; contains every twistor spinor whose
/// components are affine in the chart coordinates. Used with
/// [`twistor_nullity`] to measure the honest solution dimension.
pub fn coordinate_ansatz_family(space: &SpaceModel) -> Result<SolutionFamily> {
    space.validate()?;
    if space.is_hypersurface() {
        return Err(Error::UnsupportedSpace {
            op: "coordinate_ansatz_family",
            kind: space.kind_name().to_string(),
        });
    }
    let model = Arc::new(CliffordModel::build(space.clifford_signature()?)?);
    let dim = model.dim();
    let n = space.dim();
    struct CoordField {
        coord: Option<usize>,
        w: CVector,
    }
    impl SpinorField for CoordField {
        fn value(&self, p: &RVector) -> CVector {
            match self.coord {
                None => self.w.clone(),
                Some(a) => &self.w * Complex::new(p[a], 0.0),
            }
        }
        fn partial(&self, _p: &RVector, dir: usize) -> CVector {
            match self.coord {
                Some(a) if a == dir => self.w.clone(),
                _ => CVector::zeros(self.w.len()),
            }
        }
    }
    let mut basis: Vec<Arc<dyn SpinorField + Send + Sync>> = Vec::new();
    let vectors: Vec<CVector> = model.u_basis().iter().map(|i| model.u_vector(i)).collect();
    for w in &vectors {
        basis.push(Arc::new(CoordField { coord: None, w: w.clone() }));
    }
    for a in 0..n {
        for w in &vectors {
            basis.push(Arc::new(CoordField { coord: Some(a), w: w.clone() }));
        }
    }
    Ok(SolutionFamily {
        space: space.clone(),
        chart: FamilyChart::Coordinate,
        label: format!("coordinate-affine ansatz on {}", space.kind_name()),
        parameter_space: "coefficients of u then one spinor per coordinate".into(),
        basis,
        value_dim: dim,
    })
}

/// Dimension of the subspace of a linear family that satisfies the twistor
/// equation: residual conditions are stacked at random sample points and
/// the nullity is measured by singular values, with the threshold anchored
/// to the larger of the condition scale and the value scale of the basis
/// fields. Errors with [`Error::RankUnstable`] if adding more sample
/// points changes the answer.
pub fn twistor_nullity(family: &SolutionFamily, seed: u64) -> Result<usize> {
    if family.chart == FamilyChart::Covering {
        return Err(Error::UnsupportedSpace {
            op: "twistor_nullity",
            kind: "covering chart".to_string(),
        });
    }
    let model = CliffordModel::build(family.space.clifford_signature()?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base_points = 6;
    let extra_points = 3;
    let mut points: Vec<RVector> = (0..base_points + extra_points)
        .map(|_| family.sample_point(&mut rng))
        .collect();

    let nullity_for = |pts: &[RVector]| -> Result<usize> {
        let d = family.dimension();
        let n_dirs = family.space.dim();
        let vd = family.value_dim();
        let rows_per_point = n_dirs * vd;
        let mut cond = CMatrix::zeros(pts.len() * rows_per_point, d);
        let mut vals = CMatrix::zeros(pts.len() * vd, d);
        for (j, field) in family.basis.iter().enumerate() {
            for (pi, p) in pts.iter().enumerate() {
                let res = twistor_residual(&family.space, &model, field.as_ref(), p)?;
                for (di, rvec) in res.residuals.iter().enumerate() {
                    for (ci, z) in rvec.iter().enumerate() {
                        cond[(pi * rows_per_point + di * vd + ci, j)] = *z;
                    }
                }
                let v = field.value(p);
                for (ci, z) in v.iter().enumerate() {
                    vals[(pi * vd + ci, j)] = *z;
                }
            }
        }
        let scale = linalg::spectral_norm(&cond).max(linalg::spectral_norm(&vals));
        let rank = linalg::rank_with_threshold(&cond, 1e-8 * scale);
        Ok(d - rank)
    };

    let first = nullity_for(&points[..base_points])?;
    let second = nullity_for(&points)?;
    if first != second {
        return Err(Error::RankUnstable(format!(
            "nullity {first} with {base_points} points vs {second} with {} points",
            points.len()
        )));
    }
    points.clear();
    Ok(first)
}
