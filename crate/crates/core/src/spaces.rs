//! Coordinate models of the supported pseudo-Riemannian spaces.
//!
//! Supported kinds:
//!
//! * **Flat** pseudo-Euclidean space of signature `(n, k)`.
//! * **Lorentzian symmetric plane-wave models** ("Cahen–Wallach spaces"):
//!   coordinates `(s, t, x_1, ..., x_{n-2})` with metric
//!   `2 ds dt + (Σ λ_j x_j²) ds² + Σ dx_j²`. The profile `λ` has nonzero
//!   entries. The parallel null vector field is `V = ∂t`.
//! * **M-plus / M-minus**: the special profiles `λ = (1,...,1)` and
//!   `λ = (-1,...,-1)`; these are the conformally flat models.
//! * **Pseudo-sphere** `S^n_1(r)`: the quadric `<x,x> = r²` in flat
//!   `(n+1, 1)` space, a Lorentzian space of constant curvature `1/r²`.
//! * **Pseudo-hyperbolic space** `H^n_1(r)`: the quadric `<x,x> = -r²` in
//!   flat `(n+1, 2)` space, constant curvature `-1/r²`.
//!
//! Quadric models use ambient coordinates: points are ambient vectors on
//! the level set and tangent vectors are ambient vectors orthogonal to the
//! unit normal `η = x/r`.
//!
//! Besides exact metric, frame and curvature data, the module provides a
//! finite-difference [`curvature_oracle`] that recomputes the full Riemann
//! tensor from metric samples alone; tests use it to cross-check every
//! closed-form formula.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{Signature, MAX_DIM};
use crate::{Error, RMatrix, RVector, Result};

/// Number of covers of the compactified pseudo-hyperbolic space; used by
/// solution families on coverings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoverOrder {
    /// The universal (non-periodic) cover.
    Universal,
    /// The `m`-fold cover; `m = 1` is the quadric itself.
    Finite(u32),
}

/// A coordinate model of one of the supported spaces.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceModel {
    /// Flat pseudo-Euclidean space with `k` leading timelike directions.
    Flat { sig: Signature },
    /// Plane-wave model with profile `lambda` (all entries nonzero);
    /// manifold dimension is `lambda.len() + 2`.
    CahenWallach { lambda: Vec<f64> },
    /// The profile `λ = (1,...,1)` in dimension `n`.
    MPlus { n: usize },
    /// The profile `λ = (-1,...,-1)` in dimension `n`.
    MMinus { n: usize },
    /// Lorentzian quadric of curvature `+1/r²` in `(n+1, 1)` ambient space.
    PseudoSphere { n: usize, r: f64 },
    /// Lorentzian quadric of curvature `-1/r²` in `(n+1, 2)` ambient space.
    PseudoHyperbolic { n: usize, r: f64 },
}

impl SpaceModel {
    /// Validate model parameters.
    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceModel::Flat { sig } => {
                Signature::new(sig.n, sig.k)?;
                if sig.n < 2 {
                    return Err(Error::InvalidParameter(
                        "flat model needs dimension at least 2".into(),
                    ));
                }
            }
            SpaceModel::CahenWallach { lambda } => {
                if lambda.is_empty() {
                    return Err(Error::InvalidParameter("profile lambda is empty".into()));
                }
                if lambda.iter().any(|l| *l == 0.0 || !l.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "profile lambda entries must be finite and nonzero".into(),
                    ));
                }
                if lambda.len() + 2 > MAX_DIM {
                    return Err(Error::UnsupportedDimension {
                        n: lambda.len() + 2,
                        max: MAX_DIM,
                    });
                }
            }
            SpaceModel::MPlus { n } | SpaceModel::MMinus { n } => {
                if *n < 3 {
                    return Err(Error::InvalidParameter(
                        "plane-wave models need dimension at least 3".into(),
                    ));
                }
                if *n > MAX_DIM {
                    return Err(Error::UnsupportedDimension { n: *n, max: MAX_DIM });
                }
            }
            SpaceModel::PseudoSphere { n, r } | SpaceModel::PseudoHyperbolic { n, r } => {
                if *n < 2 {
                    return Err(Error::InvalidParameter(
                        "quadric models need dimension at least 2".into(),
                    ));
                }
                if *n + 1 > MAX_DIM {
                    return Err(Error::UnsupportedDimension { n: *n + 1, max: MAX_DIM });
                }
                if !(*r > 0.0) || !r.is_finite() {
                    return Err(Error::InvalidParameter("radius must be positive".into()));
                }
            }
        }
        Ok(())
    }

    /// Short kind name, also used in JSON.
    pub fn kind_name(&self) -> &'static str {
        match self {
            SpaceModel::Flat { .. } => "flat",
            SpaceModel::CahenWallach { .. } => "cahen-wallach",
            SpaceModel::MPlus { .. } => "m-plus",
            SpaceModel::MMinus { .. } => "m-minus",
            SpaceModel::PseudoSphere { .. } => "pseudo-sphere",
            SpaceModel::PseudoHyperbolic { .. } => "pseudo-hyperbolic",
        }
    }

    /// Manifold dimension `n`.
    pub fn dim(&self) -> usize {
        match self {
            SpaceModel::Flat { sig } => sig.n,
            SpaceModel::CahenWallach { lambda } => lambda.len() + 2,
            SpaceModel::MPlus { n } | SpaceModel::MMinus { n } => *n,
            SpaceModel::PseudoSphere { n, .. } | SpaceModel::PseudoHyperbolic { n, .. } => *n,
        }
    }

    /// Dimension of the coordinate chart points (ambient dimension for
    /// quadrics, `n` otherwise).
    pub fn chart_dim(&self) -> usize {
        match self {
            SpaceModel::PseudoSphere { n, .. } | SpaceModel::PseudoHyperbolic { n, .. } => n + 1,
            _ => self.dim(),
        }
    }

    /// Signature of the Clifford algebra acting on spinor values: the
    /// space's own signature, or the ambient one for quadrics.
    pub fn clifford_signature(&self) -> Result<Signature> {
        match self {
            SpaceModel::Flat { sig } => Ok(*sig),
            SpaceModel::CahenWallach { .. } | SpaceModel::MPlus { .. } | SpaceModel::MMinus { .. } => {
                Signature::new(self.dim(), 1)
            }
            SpaceModel::PseudoSphere { n, .. } => Signature::new(n + 1, 1),
            SpaceModel::PseudoHyperbolic { n, .. } => Signature::new(n + 1, 2),
        }
    }

    /// Whether this model is an ambient quadric.
    pub fn is_hypersurface(&self) -> bool {
        matches!(
            self,
            SpaceModel::PseudoSphere { .. } | SpaceModel::PseudoHyperbolic { .. }
        )
    }

    /// Profile `λ` for the plane-wave family, `None` otherwise.
    pub fn lambda(&self) -> Option<Vec<f64>> {
        match self {
            SpaceModel::CahenWallach { lambda } => Some(lambda.clone()),
            SpaceModel::MPlus { n } => Some(vec![1.0; n - 2]),
            SpaceModel::MMinus { n } => Some(vec![-1.0; n - 2]),
            _ => None,
        }
    }

    /// Sign of the constant sectional curvature for quadrics (`+1`/`-1`),
    /// `None` otherwise.
    pub fn kappa(&self) -> Option<f64> {
        match self {
            SpaceModel::PseudoSphere { .. } => Some(1.0),
            SpaceModel::PseudoHyperbolic { .. } => Some(-1.0),
            _ => None,
        }
    }

    /// Radius of a quadric model.
    pub fn radius(&self) -> Option<f64> {
        match self {
            SpaceModel::PseudoSphere { r, .. } | SpaceModel::PseudoHyperbolic { r, .. } => Some(*r),
            _ => None,
        }
    }

    /// Value of the ambient quadratic form on the quadric (`κ r²`).
    pub fn ambient_level(&self) -> Option<f64> {
        match self {
            SpaceModel::PseudoSphere { r, .. } => Some(r * r),
            SpaceModel::PseudoHyperbolic { r, .. } => Some(-r * r),
            _ => None,
        }
    }

    /// Signs of the ambient flat metric for quadrics.
    fn ambient_eps(&self) -> Option<Vec<f64>> {
        self.clifford_signature().ok().and_then(|sig| {
            if self.is_hypersurface() {
                Some(sig.eps_vec())
            } else {
                None
            }
        })
    }

    /// Coordinate metric at a chart point. For quadrics this is the
    /// (constant) ambient flat metric; tangent vectors are ambient vectors.
    pub fn metric_at(&self, p: &RVector) -> Result<RMatrix> {
        self.validate()?;
        let d = self.chart_dim();
        if p.len() != d {
            return Err(Error::InvalidParameter(format!(
                "chart point has {} coordinates, expected {d}",
                p.len()
            )));
        }
        match self {
            SpaceModel::Flat { sig } => Ok(RMatrix::from_diagonal(&RVector::from_vec(
                sig.eps_vec(),
            ))),
            SpaceModel::CahenWallach { .. } | SpaceModel::MPlus { .. } | SpaceModel::MMinus { .. } => {
                let lambda = self.lambda().unwrap();
                let n = self.dim();
                let mut g = RMatrix::zeros(n, n);
                let q: f64 = lambda
                    .iter()
                    .enumerate()
                    .map(|(j, l)| l * p[j + 2] * p[j + 2])
                    .sum();
                g[(0, 0)] = q;
                g[(0, 1)] = 1.0;
                g[(1, 0)] = 1.0;
                for j in 0..(n - 2) {
                    g[(j + 2, j + 2)] = 1.0;
                }
                Ok(g)
            }
            SpaceModel::PseudoSphere { .. } | SpaceModel::PseudoHyperbolic { .. } => {
                let eps = self.ambient_eps().unwrap();
                Ok(RMatrix::from_diagonal(&RVector::from_vec(eps)))
            }
        }
    }

    /// Inner product of two chart tangent vectors at `p`.
    pub fn inner(&self, x: &RVector, y: &RVector, p: &RVector) -> Result<f64> {
        let g = self.metric_at(p)?;
        Ok((x.transpose() * g * y)[(0, 0)])
    }

    /// Outward unit normal `η = x/r` of a quadric at an ambient point.
    pub fn normal_at(&self, p: &RVector) -> Result<RVector> {
        let r = self.radius().ok_or(Error::UnsupportedSpace {
            op: "normal_at",
            kind: self.kind_name().to_string(),
        })?;
        Ok(p / r)
    }

    /// How far a chart vector is from being tangent at `p`; zero for
    /// non-quadric models, `|<x, η>|` for quadrics.
    pub fn tangency_defect(&self, x: &RVector, p: &RVector) -> f64 {
        if !self.is_hypersurface() {
            return 0.0;
        }
        let eta = self.normal_at(p).unwrap();
        let eps = self.ambient_eps().unwrap();
        let mut acc = 0.0;
        for i in 0..x.len() {
            acc += eps[i] * x[i] * eta[i];
        }
        acc.abs()
    }

    /// Rescale an ambient point onto the quadric level set.
    pub fn project_to_level(&self, p: &RVector) -> Result<RVector> {
        let level = self.ambient_level().ok_or(Error::UnsupportedSpace {
            op: "project_to_level",
            kind: self.kind_name().to_string(),
        })?;
        let eps = self.ambient_eps().unwrap();
        let q: f64 = (0..p.len()).map(|i| eps[i] * p[i] * p[i]).sum();
        if q * level <= 0.0 {
            return Err(Error::InvalidParameter(
                "point cannot be scaled onto the quadric (wrong side of the null cone)".into(),
            ));
        }
        Ok(p * (level / q).sqrt())
    }

    /// Signs of the pseudo-orthonormal frame returned by [`Self::frame_at`],
    /// timelike directions first.
    pub fn frame_epsilons(&self) -> Vec<f64> {
        match self {
            SpaceModel::Flat { sig } => sig.eps_vec(),
            _ => {
                // Lorentzian frame: one timelike direction, listed first.
                let n = self.dim();
                let mut eps = vec![1.0; n];
                eps[0] = -1.0;
                eps
            }
        }
    }

    /// Pseudo-orthonormal tangent frame at `p`, one frame vector per
    /// column (in chart coordinates; ambient coordinates for quadrics).
    /// Timelike vectors come first, matching [`Self::frame_epsilons`].
    ///
    /// For plane-wave models the frame is the standard one adapted to the
    /// parallel null field `V = ∂t`: the first two columns are the null
    /// frame pair completed to a pseudo-orthonormal pair, the rest are the
    /// transverse coordinate directions.
    pub fn frame_at(&self, p: &RVector) -> Result<RMatrix> {
        self.validate()?;
        let d = self.chart_dim();
        if p.len() != d {
            return Err(Error::InvalidParameter(format!(
                "chart point has {} coordinates, expected {d}",
                p.len()
            )));
        }
        match self {
            SpaceModel::Flat { sig } => Ok(RMatrix::identity(sig.n, sig.n)),
            SpaceModel::CahenWallach { .. } | SpaceModel::MPlus { .. } | SpaceModel::MMinus { .. } => {
                let lambda = self.lambda().unwrap();
                let n = self.dim();
                let q: f64 = lambda
                    .iter()
                    .enumerate()
                    .map(|(j, l)| l * p[j + 2] * p[j + 2])
                    .sum();
                let mut f = RMatrix::zeros(n, n);
                // Timelike: a_base = ∂s - (q+1)/2 ∂t; spacelike partner
                // a_base' = ∂s - (q-1)/2 ∂t; then the transverse directions.
                f[(0, 0)] = 1.0;
                f[(1, 0)] = -0.5 * (q + 1.0);
                f[(0, 1)] = 1.0;
                f[(1, 1)] = -0.5 * (q - 1.0);
                for j in 0..(n - 2) {
                    f[(j + 2, j + 2)] = 1.0;
                }
                Ok(f)
            }
            SpaceModel::PseudoSphere { .. } | SpaceModel::PseudoHyperbolic { .. } => {
                self.quadric_frame(p)
            }
        }
    }

    /// Tangent frame on a quadric via sign-pivoted Gram–Schmidt on the
    /// projected ambient coordinate basis.
    fn quadric_frame(&self, p: &RVector) -> Result<RMatrix> {
        let n = self.dim();
        let eps = self.ambient_eps().unwrap();
        let inner = |a: &RVector, b: &RVector| -> f64 {
            (0..a.len()).map(|i| eps[i] * a[i] * b[i]).sum()
        };
        let eta = self.normal_at(p)?;
        let eta_sq = inner(&eta, &eta); // ±1 up to the point being on the quadric
        let mut cands: Vec<RVector> = (0..=n)
            .map(|i| {
                let mut e = RVector::zeros(n + 1);
                e[i] = 1.0;
                let coef = inner(&e, &eta) / eta_sq;
                e - &eta * coef
            })
            .collect();
        let mut frame: Vec<(f64, RVector)> = Vec::with_capacity(n);
        for _ in 0..n {
            // Pivot on the largest |<v,v>| among remaining candidates.
            let (best, best_sq) = cands
                .iter()
                .enumerate()
                .map(|(i, v)| (i, inner(v, v)))
                .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
                .unwrap();
            if best_sq.abs() < 1e-12 {
                return Err(Error::InvalidParameter(
                    "degenerate tangent frame (point too close to the null cone)".into(),
                ));
            }
            let v = cands.remove(best) / best_sq.abs().sqrt();
            let sign = best_sq.signum();
            for w in cands.iter_mut() {
                let c = inner(w, &v) * sign; // <w,v>/<v,v> with <v,v> = ±1
                *w -= &v * c;
            }
            frame.push((sign, v));
        }
        // Timelike first; the induced metric is Lorentzian so there is
        // exactly one timelike direction.
        frame.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        debug_assert_eq!(frame.iter().filter(|(s, _)| *s < 0.0).count(), 1);
        Ok(RMatrix::from_columns(
            &frame.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
        ))
    }

    /// Coefficients of a tangent vector in the frame of [`Self::frame_at`]:
    /// `x = Σ c_i f_i` with `c_i = eps_i <x, f_i>`.
    pub fn frame_coords(&self, x: &RVector, p: &RVector) -> Result<RVector> {
        let f = self.frame_at(p)?;
        let eps = self.frame_epsilons();
        let g = self.metric_at(p)?;
        let gx = g * x;
        let n = self.dim();
        let mut c = RVector::zeros(n);
        for i in 0..n {
            let fi = f.column(i);
            let dot: f64 = fi.iter().zip(gx.iter()).map(|(a, b)| a * b).sum();
            c[i] = eps[i] * dot;
        }
        Ok(c)
    }

    /// The parallel null direction `V = ∂t` of plane-wave models, in chart
    /// coordinates.
    pub fn v_vector(&self) -> Result<RVector> {
        match self {
            SpaceModel::CahenWallach { .. } | SpaceModel::MPlus { .. } | SpaceModel::MMinus { .. } => {
                let mut v = RVector::zeros(self.dim());
                v[1] = 1.0;
                Ok(v)
            }
            _ => Err(Error::UnsupportedSpace {
                op: "v_vector",
                kind: self.kind_name().to_string(),
            }),
        }
    }

    /// Trace constant `Λ0 = -Σ λ_j` of the plane-wave Ricci tensor.
    pub fn lambda_trace(&self) -> Result<f64> {
        self.lambda()
            .map(|l| -l.iter().sum::<f64>())
            .ok_or(Error::UnsupportedSpace {
                op: "lambda_trace",
                kind: self.kind_name().to_string(),
            })
    }

    /// Ricci endomorphism applied to a tangent vector on a plane-wave
    /// model: `Ric(X) = Λ0 g(X, V) V`.
    pub fn ricci(&self, x: &RVector, p: &RVector) -> Result<RVector> {
        let lam0 = self.lambda_trace()?;
        let v = self.v_vector()?;
        let coef = lam0 * self.inner(x, &v, p)?;
        Ok(v * coef)
    }

    /// Schouten endomorphism on a plane-wave model:
    /// `K(X) = -Λ0/(n-2) g(X, V) V`.
    pub fn schouten(&self, x: &RVector, p: &RVector) -> Result<RVector> {
        let lam0 = self.lambda_trace()?;
        let n = self.dim();
        let v = self.v_vector()?;
        let coef = -lam0 / (n as f64 - 2.0) * self.inner(x, &v, p)?;
        Ok(v * coef)
    }

    /// Whether the model is conformally flat. Defined for the plane-wave
    /// family: true exactly when all profile entries are equal.
    pub fn is_conformally_flat(&self) -> Result<bool> {
        let lambda = self.lambda().ok_or(Error::UnsupportedSpace {
            op: "is_conformally_flat",
            kind: self.kind_name().to_string(),
        })?;
        Ok(lambda.iter().all(|l| *l == lambda[0]))
    }

    /// Weyl curvature applied to the 2-plane `x ∧ y` on a plane-wave model,
    /// as a sum of terms `coefficient · (first ∧ second)` of 2-forms, where
    /// `(A ∧ B)_{cd} = A♭_c B♭_d - B♭_c A♭_d`. Terms with zero coefficient
    /// are dropped, so the conformally flat profiles return an empty list.
    ///
    /// In the frame of [`Self::frame_at`] the only nonzero images are
    /// `W(a ∧ a_j) = (λ_j + Λ0/(n-2)) (V ∧ a_j)` for `a` in the null-pair
    /// part of the frame.
    pub fn weyl_action(&self, x: &RVector, y: &RVector, p: &RVector) -> Result<Vec<WeylTerm>> {
        let lambda = self.lambda().ok_or(Error::UnsupportedSpace {
            op: "weyl_action",
            kind: self.kind_name().to_string(),
        })?;
        let _ = p;
        let n = self.dim();
        let lam0 = self.lambda_trace()?;
        let v = self.v_vector()?;
        let mut terms = Vec::new();
        for (j, lam_j) in lambda.iter().enumerate() {
            let coef_j = lam_j + lam0 / (n as f64 - 2.0);
            // Component of x∧y in the ∂s ∧ ∂x_j plane.
            let plane = x[0] * y[j + 2] - x[j + 2] * y[0];
            let c = coef_j * plane;
            if c.abs() > 0.0 {
                let mut aj = RVector::zeros(n);
                aj[j + 2] = 1.0;
                terms.push(WeylTerm {
                    coefficient: c,
                    first: v.clone(),
                    second: aj,
                });
            }
        }
        Ok(terms)
    }

    /// Assemble the 2-form matrix `Σ c (A♭ B♭ᵀ - B♭ A♭ᵀ)` of a Weyl image.
    pub fn weyl_form_matrix(&self, x: &RVector, y: &RVector, p: &RVector) -> Result<RMatrix> {
        let terms = self.weyl_action(x, y, p)?;
        let g = self.metric_at(p)?;
        let n = self.dim();
        let mut m = RMatrix::zeros(n, n);
        for t in &terms {
            let a = &g * &t.first;
            let b = &g * &t.second;
            m += (&a * b.transpose() - &b * a.transpose()) * t.coefficient;
        }
        Ok(m)
    }

    /// Draw a random chart point: coordinates uniform in `[-1, 1]` for
    /// coordinate models, a generic point on the level set for quadrics.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> RVector {
        match self {
            SpaceModel::PseudoSphere { .. } | SpaceModel::PseudoHyperbolic { .. } => {
                let level = self.ambient_level().unwrap();
                let eps = self.ambient_eps().unwrap();
                let d = self.chart_dim();
                loop {
                    let y = RVector::from_iterator(d, (0..d).map(|_| rng.gen_range(-1.0..1.0)));
                    let q: f64 = (0..d).map(|i| eps[i] * y[i] * y[i]).sum();
                    if q * level > 0.05 * level.abs() {
                        return y * (level / q).sqrt();
                    }
                }
            }
            _ => {
                let d = self.chart_dim();
                RVector::from_iterator(d, (0..d).map(|_| rng.gen_range(-1.0..1.0)))
            }
        }
    }
}

/// One summand `coefficient · (first ∧ second)` of a Weyl image; the
/// vectors are chart tangent vectors, lowered with the metric when the
/// 2-form matrix is assembled.
#[derive(Debug, Clone)]
pub struct WeylTerm {
    pub coefficient: f64,
    pub first: RVector,
    pub second: RVector,
}

// ---------------------------------------------------------------------------
// Finite-difference curvature oracle
// ---------------------------------------------------------------------------

/// Step for first derivatives of the metric.
const FD_STEP_1: f64 = 1e-5;
/// Step for second derivatives of the metric.
const FD_STEP_2: f64 = 1e-4;

/// Full curvature data recomputed from metric samples by finite
/// differences. For quadric models the computation runs in an internal
/// graph chart of dimension `n` around the base point; all components refer
/// to that chart's coordinate basis.
///
/// Index convention: `riemann[a][b][c][d]` stores
/// `R(∂a, ∂b, ∂c, ∂d) = g(R(∂a,∂b)∂c, ∂d)`, so `Ric_{bd} = g^{ae} R_{abde}`
/// and `sec(X,Y) = R(X,Y,Y,X) / (g(X,X)g(Y,Y) - g(X,Y)²)`.
#[derive(Debug, Clone)]
pub struct CurvatureOracle {
    /// Chart dimension `n`.
    pub dim: usize,
    /// Metric at the base point (chart coordinates).
    pub metric: RMatrix,
    /// Riemann components, flattened `((a·n + b)·n + c)·n + d`.
    pub riemann: Vec<f64>,
    /// Ricci tensor (0,2).
    pub ricci: RMatrix,
    /// Scalar curvature.
    pub scalar: f64,
    /// Weyl components, same layout as `riemann`.
    pub weyl: Vec<f64>,
}

impl CurvatureOracle {
    pub fn riemann_component(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.dim;
        self.riemann[((a * n + b) * n + c) * n + d]
    }

    pub fn weyl_component(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.dim;
        self.weyl[((a * n + b) * n + c) * n + d]
    }

    /// Largest Riemann component in absolute value.
    pub fn max_riemann(&self) -> f64 {
        self.riemann.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest Weyl component in absolute value.
    pub fn max_weyl(&self) -> f64 {
        self.weyl.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Sectional curvature of the plane spanned by chart vectors `x`, `y`.
    pub fn sectional(&self, x: &RVector, y: &RVector) -> f64 {
        let n = self.dim;
        let mut num = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        num += self.riemann_component(a, b, c, d) * x[a] * y[b] * y[c] * x[d];
                    }
                }
            }
        }
        let gxx = (x.transpose() * &self.metric * x)[(0, 0)];
        let gyy = (y.transpose() * &self.metric * y)[(0, 0)];
        let gxy = (x.transpose() * &self.metric * y)[(0, 0)];
        num / (gxx * gyy - gxy * gxy)
    }

    /// Contract the Weyl tensor with `x, y` in the first two slots,
    /// returning the 2-form matrix `M_{cd} = W(x, y, ∂c, ∂d)`.
    pub fn weyl_form(&self, x: &RVector, y: &RVector) -> RMatrix {
        let n = self.dim;
        let mut m = RMatrix::zeros(n, n);
        for c in 0..n {
            for d in 0..n {
                let mut acc = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        acc += self.weyl_component(a, b, c, d) * x[a] * y[b];
                    }
                }
                m[(c, d)] = acc;
            }
        }
        m
    }
}

/// Graph chart for a quadric: one ambient coordinate is solved for in
/// terms of the other `n`.
struct GraphChart {
    eps: Vec<f64>,
    level: f64,
    pivot: usize,
    pivot_sign: f64,
    others: Vec<usize>,
}

impl GraphChart {
    fn at_point(space: &SpaceModel, p: &RVector) -> GraphChart {
        let eps = space
            .ambient_eps()
            .expect("graph charts exist only on quadrics");
        let level = space.ambient_level().unwrap();
        // Pivot on the coordinate with the largest gradient of the
        // defining function, |2 eps_a p_a|.
        let pivot = (0..p.len())
            .max_by(|&a, &b| {
                (eps[a] * p[a]).abs().partial_cmp(&(eps[b] * p[b]).abs()).unwrap()
            })
            .unwrap();
        let others = (0..p.len()).filter(|i| *i != pivot).collect();
        GraphChart {
            eps,
            level,
            pivot,
            pivot_sign: p[pivot].signum(),
            others,
        }
    }

    fn chart_coords(&self, p: &RVector) -> RVector {
        RVector::from_iterator(self.others.len(), self.others.iter().map(|&i| p[i]))
    }

    fn height(&self, y: &RVector) -> f64 {
        let mut rest = 0.0;
        for (j, &i) in self.others.iter().enumerate() {
            rest += self.eps[i] * y[j] * y[j];
        }
        self.pivot_sign * ((self.level - rest) / self.eps[self.pivot]).sqrt()
    }

    fn metric(&self, y: &RVector) -> RMatrix {
        let n = self.others.len();
        let h = self.height(y);
        let ep = self.eps[self.pivot];
        // ∂h/∂y_j = -eps_j y_j / (eps_p h)
        let grad: Vec<f64> = self
            .others
            .iter()
            .enumerate()
            .map(|(j, &i)| -self.eps[i] * y[j] / (ep * h))
            .collect();
        let mut g = RMatrix::zeros(n, n);
        for j in 0..n {
            for l in 0..n {
                let mut val = ep * grad[j] * grad[l];
                if j == l {
                    val += self.eps[self.others[j]];
                }
                g[(j, l)] = val;
            }
        }
        g
    }
}

/// Recompute the full curvature tensor of a space at a point from metric
/// samples only, by finite differences. This is a diagnostic oracle: slow,
/// convention-pinning, and used by tests to validate every closed-form
/// curvature quantity.
pub fn curvature_oracle(space: &SpaceModel, p: &RVector) -> Result<CurvatureOracle> {
    space.validate()?;
    let (metric_fn, y0): (Box<dyn Fn(&RVector) -> RMatrix>, RVector) = if space.is_hypersurface() {
        let chart = GraphChart::at_point(space, p);
        let y = chart.chart_coords(p);
        (Box::new(move |y: &RVector| chart.metric(y)), y)
    } else {
        let sp = space.clone();
        (
            Box::new(move |y: &RVector| sp.metric_at(y).expect("validated model")),
            p.clone(),
        )
    };
    let n = y0.len();

    let shift = |a: usize, h: f64| -> RVector {
        let mut y = y0.clone();
        y[a] += h;
        y
    };
    let shift2 = |a: usize, ha: f64, b: usize, hb: f64| -> RVector {
        let mut y = y0.clone();
        y[a] += ha;
        y[b] += hb;
        y
    };

    let g0 = metric_fn(&y0);
    let ginv = g0.clone().try_inverse().ok_or_else(|| {
        Error::InvalidParameter("metric is singular at the base point".into())
    })?;

    // First derivatives dg[a][(b,c)] = ∂_a g_bc.
    let h1 = FD_STEP_1;
    let dg: Vec<RMatrix> = (0..n)
        .map(|a| (metric_fn(&shift(a, h1)) - metric_fn(&shift(a, -h1))) / (2.0 * h1))
        .collect();

    // Second derivatives ddg[a][b] = ∂_a ∂_b g.
    let h2 = FD_STEP_2;
    let mut ddg: Vec<Vec<RMatrix>> = vec![vec![RMatrix::zeros(n, n); n]; n];
    for a in 0..n {
        let plus = metric_fn(&shift(a, h2));
        let minus = metric_fn(&shift(a, -h2));
        ddg[a][a] = (plus + minus - &g0 * 2.0) / (h2 * h2);
    }
    for a in 0..n {
        for b in (a + 1)..n {
            let pp = metric_fn(&shift2(a, h2, b, h2));
            let pm = metric_fn(&shift2(a, h2, b, -h2));
            let mp = metric_fn(&shift2(a, -h2, b, h2));
            let mm = metric_fn(&shift2(a, -h2, b, -h2));
            let mixed = (pp - pm - mp + mm) / (4.0 * h2 * h2);
            ddg[a][b] = mixed.clone();
            ddg[b][a] = mixed;
        }
    }

    // Christoffel symbols Γ^e_{ab}.
    let mut gamma = vec![0.0; n * n * n];
    let gidx = |e: usize, a: usize, b: usize| (e * n + a) * n + b;
    for e in 0..n {
        for a in 0..n {
            for b in 0..n {
                let mut acc = 0.0;
                for cc in 0..n {
                    acc += ginv[(e, cc)]
                        * (dg[a][(cc, b)] + dg[b][(cc, a)] - dg[cc][(a, b)]);
                }
                gamma[gidx(e, a, b)] = 0.5 * acc;
            }
        }
    }

    // R(∂a,∂b,∂c,∂d) = ½(∂b∂d g_ac + ∂a∂c g_bd - ∂b∂c g_ad - ∂a∂d g_bc)
    //                 + g_ef (Γ^e_ac Γ^f_bd - Γ^e_ad Γ^f_bc).
    let mut riemann = vec![0.0; n * n * n * n];
    let ridx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let deriv = 0.5
                        * (ddg[b][d][(a, c)] + ddg[a][c][(b, d)]
                            - ddg[b][c][(a, d)]
                            - ddg[a][d][(b, c)]);
                    let mut quad = 0.0;
                    for e in 0..n {
                        for f in 0..n {
                            quad += g0[(e, f)]
                                * (gamma[gidx(e, a, c)] * gamma[gidx(f, b, d)]
                                    - gamma[gidx(e, a, d)] * gamma[gidx(f, b, c)]);
                        }
                    }
                    riemann[ridx(a, b, c, d)] = deriv + quad;
                }
            }
        }
    }

    // Ricci_{bd} = g^{ae} R_{abde}.
    let mut ricci = RMatrix::zeros(n, n);
    for b in 0..n {
        for d in 0..n {
            let mut acc = 0.0;
            for a in 0..n {
                for e in 0..n {
                    acc += ginv[(a, e)] * riemann[ridx(a, b, d, e)];
                }
            }
            ricci[(b, d)] = acc;
        }
    }
    let mut scalar = 0.0;
    for b in 0..n {
        for d in 0..n {
            scalar += ginv[(b, d)] * ricci[(b, d)];
        }
    }

    // Weyl = Riemann - Schouten ∧ g (Kulkarni–Nomizu), zero in dim < 4 by
    // the same formula.
    let mut weyl = riemann.clone();
    if n >= 3 {
        let p_tensor =
            (&ricci - &g0 * (scalar / (2.0 * (n as f64 - 1.0)))) / (n as f64 - 2.0);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let kn = g0[(a, d)] * p_tensor[(b, c)] + g0[(b, c)] * p_tensor[(a, d)]
                            - g0[(a, c)] * p_tensor[(b, d)]
                            - g0[(b, d)] * p_tensor[(a, c)];
                        weyl[ridx(a, b, c, d)] -= kn;
                    }
                }
            }
        }
    }

    Ok(CurvatureOracle {
        dim: n,
        metric: g0,
        riemann,
        ricci,
        scalar,
        weyl,
    })
}

// ---------------------------------------------------------------------------
// JSON representation
// ---------------------------------------------------------------------------

/// Flat JSON form of a [`SpaceModel`]:
/// `{"kind": "...", "n": ..., "k": ..., "lambda": [...], "r": ...}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

impl From<&SpaceModel> for SpaceSpec {
    fn from(m: &SpaceModel) -> SpaceSpec {
        let mut spec = SpaceSpec {
            kind: m.kind_name().to_string(),
            n: None,
            k: None,
            lambda: None,
            r: None,
        };
        match m {
            SpaceModel::Flat { sig } => {
                spec.n = Some(sig.n);
                spec.k = Some(sig.k);
            }
            SpaceModel::CahenWallach { lambda } => spec.lambda = Some(lambda.clone()),
            SpaceModel::MPlus { n } | SpaceModel::MMinus { n } => spec.n = Some(*n),
            SpaceModel::PseudoSphere { n, r } | SpaceModel::PseudoHyperbolic { n, r } => {
                spec.n = Some(*n);
                spec.r = Some(*r);
            }
        }
        spec
    }
}

impl TryFrom<&SpaceSpec> for SpaceModel {
    type Error = Error;

    fn try_from(s: &SpaceSpec) -> Result<SpaceModel> {
        let need_n = || {
            s.n.ok_or_else(|| Error::InvalidParameter(format!("kind `{}` needs `n`", s.kind)))
        };
        let model = match s.kind.as_str() {
            "flat" => SpaceModel::Flat {
                sig: Signature::new(need_n()?, s.k.unwrap_or(0))?,
            },
            "cahen-wallach" => SpaceModel::CahenWallach {
                lambda: s
                    .lambda
                    .clone()
                    .ok_or_else(|| Error::InvalidParameter("cahen-wallach needs `lambda`".into()))?,
            },
            "m-plus" => SpaceModel::MPlus { n: need_n()? },
            "m-minus" => SpaceModel::MMinus { n: need_n()? },
            "pseudo-sphere" => SpaceModel::PseudoSphere {
                n: need_n()?,
                r: s.r.unwrap_or(1.0),
            },
            "pseudo-hyperbolic" => SpaceModel::PseudoHyperbolic {
                n: need_n()?,
                r: s.r.unwrap_or(1.0),
            },
            other => {
                return Err(Error::InvalidParameter(format!("unknown space kind `{other}`")))
            }
        };
        model.validate()?;
        Ok(model)
    }
}

impl Serialize for SpaceModel {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        SpaceSpec::from(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SpaceModel {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let spec = SpaceSpec::deserialize(de)?;
        SpaceModel::try_from(&spec).map_err(serde::de::Error::custom)
    }
}
