//! Spin structures on quotients by discrete isometry groups, and the
//! dimension of the subspace of twistor spinors invariant under a lifted
//! group action.
//!
//! A quotient case is described by [`GeneratorSpec`]s: affine chart actions
//! together with a sign choosing one of the two spinor lifts of each
//! generator. Supported generator types:
//!
//! * plane-wave chart `(s, t, x)`: translations `(s,t,x) ↦ (s,t+α,x)`
//!   along the parallel null direction (lift `±Id`) and screw motions
//!   `(s,t,x) ↦ (s+β,t,(-1)^{m_j} x_j)` with `β = m_j π / sqrt(-λ_j)` for
//!   every `j` (commensurability), lifted to `±ω` with `ω` the product of
//!   the generators of the reflected directions;
//! * quadrics: the antipodal map `x ↦ -x`, lifted to `±ω` with `ω` the
//!   ambient volume element;
//! * cylinder chart of pseudo-hyperbolic covers: deck translations
//!   `t ↦ t + 2πm` (lift `±Id`) and the glide `t ↦ t + mπ, x ↦ -x` for odd
//!   `m` (lift `±ω`, ambient volume element).
//!
//! [`enumerate_spin_structures`] checks the geometric obstructions
//! (orientability; the lift of an involution must square to `+Id`) and
//! lists all sign assignments. [`invariant_dimension`] stacks the
//! invariance conditions `φ(γ·y) = L φ(y)` at random sample points over a
//! solution family and measures the null space; the singular value
//! threshold is anchored to the larger of the condition scale and the
//! value scale of the family (so identically satisfied conditions are
//! recognised as such), and the rank must be stable when more sample
//! points are added.

use std::f64::consts::PI;

use num_complex::Complex;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordModel;
use crate::linalg;
use crate::solutions::{
    cahen_wallach_parallel_family, covering_family, covering_differential, hypersurface_family,
    mpm_family, FamilyChart, ModelSign, SolutionFamily,
};
use crate::spaces::{CoverOrder, SpaceModel};
use crate::spinor_dim;
use crate::{C64, CMatrix, CVector, Error, RMatrix, RVector, Result};

/// Affine action of a group generator on chart points.
#[derive(Clone, Debug, PartialEq)]
pub enum PointAction {
    /// `(s, t, x) ↦ (s + shift_s, t + shift_t, ±x)` on a plane-wave chart.
    CwMap { shift_s: f64, shift_t: f64, flips: Vec<bool> },
    /// `x ↦ -x` on ambient quadric coordinates.
    AmbientNegation,
    /// `(t, x) ↦ (t + dt, ±x)` on the cylinder chart.
    DeckMap { dt: f64, flip_x: bool },
}

impl PointAction {
    /// Apply the action to a chart point.
    pub fn apply(&self, p: &RVector) -> RVector {
        match self {
            PointAction::CwMap { shift_s, shift_t, flips } => {
                let mut q = p.clone();
                q[0] += shift_s;
                q[1] += shift_t;
                for (j, f) in flips.iter().enumerate() {
                    if *f {
                        q[j + 2] = -q[j + 2];
                    }
                }
                q
            }
            PointAction::AmbientNegation => -p,
            PointAction::DeckMap { dt, flip_x } => {
                let mut q = p.clone();
                q[0] += dt;
                if *flip_x {
                    for j in 1..q.len() {
                        q[j] = -q[j];
                    }
                }
                q
            }
        }
    }

    /// The (constant) linear part of the action on chart vectors.
    pub fn linear_part(&self, chart_dim: usize) -> RMatrix {
        match self {
            PointAction::CwMap { flips, .. } => {
                let mut m = RMatrix::identity(chart_dim, chart_dim);
                for (j, f) in flips.iter().enumerate() {
                    if *f {
                        m[(j + 2, j + 2)] = -1.0;
                    }
                }
                m
            }
            PointAction::AmbientNegation => -RMatrix::identity(chart_dim, chart_dim),
            PointAction::DeckMap { flip_x, .. } => {
                let mut m = RMatrix::identity(chart_dim, chart_dim);
                if *flip_x {
                    for j in 1..chart_dim {
                        m[(j, j)] = -1.0;
                    }
                }
                m
            }
        }
    }
}

/// A generator of a discrete isometry group together with its spinor lift.
#[derive(Clone, Debug)]
pub struct GroupGenerator {
    /// Short description such as `+1`, `-omega`.
    pub lift_label: String,
    /// Chart action.
    pub action: PointAction,
    /// Spinor lift matrix.
    pub lift: CMatrix,
}

/// One spin structure on a quotient: the generators with chosen lifts.
#[derive(Clone, Debug)]
pub struct SpinStructureCase {
    /// Label, e.g. `(+1, -omega)`.
    pub label: String,
    pub generators: Vec<GroupGenerator>,
}

/// Serializable description of a generator (action plus lift sign).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    /// Plane-wave translation by `alpha` along the parallel null
    /// direction (the `t`-coordinate); lift `sign · Id`.
    CwTranslation {
        alpha: f64,
        #[serde(default = "default_sign")]
        sign: i8,
    },
    /// Plane-wave screw motion with winding numbers `m`; the shift is
    /// `β = m_j π / sqrt(-λ_j)` (must agree for all `j`), direction `x_j`
    /// is reflected when `m_j` is odd; lift `sign · ω`.
    CwScrew {
        m: Vec<u32>,
        #[serde(default = "default_sign")]
        sign: i8,
    },
    /// Antipodal map of a quadric; lift `sign · ω` (ambient volume).
    Antipodal {
        #[serde(default = "default_sign")]
        sign: i8,
    },
    /// Deck translation `t ↦ t + 2π·periods` of the cylinder chart; lift
    /// `sign · Id`.
    DeckTranslation {
        periods: u32,
        #[serde(default = "default_sign")]
        sign: i8,
    },
    /// Glide `t ↦ t + half_periods·π, x ↦ -x` (odd `half_periods`); lift
    /// `sign · ω` (ambient volume).
    DeckAntipodal {
        half_periods: u32,
        #[serde(default = "default_sign")]
        sign: i8,
    },
}

fn default_sign() -> i8 {
    1
}

impl GeneratorSpec {
    /// The lift sign of this spec.
    pub fn sign(&self) -> i8 {
        match self {
            GeneratorSpec::CwTranslation { sign, .. }
            | GeneratorSpec::CwScrew { sign, .. }
            | GeneratorSpec::Antipodal { sign }
            | GeneratorSpec::DeckTranslation { sign, .. }
            | GeneratorSpec::DeckAntipodal { sign, .. } => *sign,
        }
    }

    /// Copy of this spec with the lift sign replaced.
    pub fn with_sign(&self, s: i8) -> GeneratorSpec {
        let mut out = self.clone();
        match &mut out {
            GeneratorSpec::CwTranslation { sign, .. }
            | GeneratorSpec::CwScrew { sign, .. }
            | GeneratorSpec::Antipodal { sign }
            | GeneratorSpec::DeckTranslation { sign, .. }
            | GeneratorSpec::DeckAntipodal { sign, .. } => *sign = s,
        }
        out
    }

    /// Whether the lift is an identity-type (`±1`) or volume-type (`±omega`).
    fn lift_is_identity(&self) -> bool {
        match self {
            GeneratorSpec::CwTranslation { .. } | GeneratorSpec::DeckTranslation { .. } => true,
            GeneratorSpec::CwScrew { m, .. } => m.iter().all(|mi| mi % 2 == 0),
            _ => false,
        }
    }
}

fn sign_complex(sign: i8) -> C64 {
    Complex::new(sign as f64, 0.0)
}

fn lift_label(spec: &GeneratorSpec) -> String {
    let base = if spec.lift_is_identity() { "1" } else { "omega" };
    if spec.sign() >= 0 {
        format!("+{base}")
    } else {
        format!("-{base}")
    }
}

/// Build a concrete generator (action and lift matrix) for a space.
pub fn build_generator(
    space: &SpaceModel,
    model: &CliffordModel,
    spec: &GeneratorSpec,
) -> Result<GroupGenerator> {
    let n = space.dim();
    match spec {
        GeneratorSpec::CwTranslation { alpha, sign } => {
            let lambda = space.lambda().ok_or_else(|| {
                Error::InvalidGenerator("translation generators need a plane-wave space".into())
            })?;
            if !alpha.is_finite() || *alpha == 0.0 {
                return Err(Error::InvalidGenerator("translation needs nonzero alpha".into()));
            }
            Ok(GroupGenerator {
                lift_label: lift_label(spec),
                action: PointAction::CwMap {
                    shift_s: 0.0,
                    shift_t: *alpha,
                    flips: vec![false; lambda.len()],
                },
                lift: CMatrix::identity(model.dim(), model.dim()) * sign_complex(*sign),
            })
        }
        GeneratorSpec::CwScrew { m, sign } => {
            let lambda = space.lambda().ok_or_else(|| {
                Error::InvalidGenerator("screw generators need a plane-wave space".into())
            })?;
            if m.len() != lambda.len() {
                return Err(Error::InvalidGenerator(format!(
                    "screw winding vector has {} entries, profile has {}",
                    m.len(),
                    lambda.len()
                )));
            }
            if lambda.iter().any(|l| *l >= 0.0) {
                return Err(Error::InvalidGenerator(
                    "screw motions need all profile entries negative".into(),
                ));
            }
            if m.iter().any(|mi| *mi == 0) {
                return Err(Error::InvalidGenerator(
                    "screw winding numbers must be positive".into(),
                ));
            }
            let betas: Vec<f64> = m
                .iter()
                .zip(&lambda)
                .map(|(mi, l)| *mi as f64 * PI / (-l).sqrt())
                .collect();
            let beta = betas[0];
            if betas.iter().any(|b| (b - beta).abs() > 1e-9 * (1.0 + beta.abs())) {
                return Err(Error::InvalidGenerator(format!(
                    "incommensurable profile: shifts {betas:?} disagree"
                )));
            }
            let flips: Vec<bool> = m.iter().map(|mi| mi % 2 == 1).collect();
            let omega_indices: Vec<usize> = flips
                .iter()
                .enumerate()
                .filter(|(_, f)| **f)
                .map(|(j, _)| j + 2)
                .collect();
            Ok(GroupGenerator {
                lift_label: lift_label(spec),
                action: PointAction::CwMap { shift_s: beta, shift_t: 0.0, flips },
                lift: model.omega_element(&omega_indices) * sign_complex(*sign),
            })
        }
        GeneratorSpec::Antipodal { sign } => {
            if !space.is_hypersurface() {
                return Err(Error::InvalidGenerator(
                    "the antipodal generator needs a quadric space".into(),
                ));
            }
            let all: Vec<usize> = (0..n + 1).collect();
            Ok(GroupGenerator {
                lift_label: lift_label(spec),
                action: PointAction::AmbientNegation,
                lift: model.omega_element(&all) * sign_complex(*sign),
            })
        }
        GeneratorSpec::DeckTranslation { periods, sign } => {
            if !matches!(space, SpaceModel::PseudoHyperbolic { .. }) {
                return Err(Error::InvalidGenerator(
                    "deck translations live on covers of the pseudo-hyperbolic space".into(),
                ));
            }
            if *periods == 0 {
                return Err(Error::InvalidGenerator("deck translation needs periods >= 1".into()));
            }
            Ok(GroupGenerator {
                lift_label: lift_label(spec),
                action: PointAction::DeckMap { dt: 2.0 * PI * *periods as f64, flip_x: false },
                lift: CMatrix::identity(model.dim(), model.dim()) * sign_complex(*sign),
            })
        }
        GeneratorSpec::DeckAntipodal { half_periods, sign } => {
            if !matches!(space, SpaceModel::PseudoHyperbolic { .. }) {
                return Err(Error::InvalidGenerator(
                    "glide generators live on covers of the pseudo-hyperbolic space".into(),
                ));
            }
            if half_periods % 2 == 0 {
                return Err(Error::InvalidGenerator(
                    "the glide generator needs an odd number of half-periods".into(),
                ));
            }
            let all: Vec<usize> = (0..n + 1).collect();
            Ok(GroupGenerator {
                lift_label: lift_label(spec),
                action: PointAction::DeckMap { dt: PI * *half_periods as f64, flip_x: true },
                lift: model.omega_element(&all) * sign_complex(*sign),
            })
        }
    }
}

/// Check the geometric obstructions for a quotient described by generator
/// specs: orientability (reflection count even; antipodal-type quotients
/// only in odd dimension) and spin-structure existence (lifts of
/// involutive generators must square to `+Id`).
pub fn check_obstructions(space: &SpaceModel, specs: &[GeneratorSpec]) -> Result<()> {
    let model = CliffordModel::build(space.clifford_signature()?)?;
    let n = space.dim();
    for spec in specs {
        match spec {
            GeneratorSpec::CwScrew { m, .. } => {
                let odd = m.iter().filter(|mi| *mi % 2 == 1).count();
                if odd % 2 == 1 {
                    return Err(Error::NonOrientable(format!(
                        "screw motion reflects {odd} directions"
                    )));
                }
            }
            GeneratorSpec::Antipodal { .. } | GeneratorSpec::DeckAntipodal { .. } => {
                let flipped = match spec {
                    GeneratorSpec::Antipodal { .. } => n + 1,
                    _ => n - 1,
                };
                if flipped % 2 == 1 {
                    return Err(Error::NonOrientable(format!(
                        "point reflection in {flipped} directions reverses orientation"
                    )));
                }
                let all: Vec<usize> = (0..n + 1).collect();
                let omega = model.omega_element(&all);
                let sq = &omega * &omega;
                let id = CMatrix::identity(model.dim(), model.dim());
                if linalg::mat_inf_norm(&(&sq - &id)) > 1e-10 {
                    // ω² = -Id: no consistent lift of the involution.
                    debug_assert!(linalg::mat_inf_norm(&(sq + id)) < 1e-10);
                    return Err(Error::NoSpinStructure(
                        "the lift of the point reflection squares to -Id".into(),
                    ));
                }
            }
            _ => {}
        }
    }
    Ok(())
}

/// Enumerate the spin structures of a quotient: check obstructions, then
/// list every assignment of lift signs to the generators.
pub fn enumerate_spin_structures(
    space: &SpaceModel,
    specs: &[GeneratorSpec],
) -> Result<Vec<SpinStructureCase>> {
    check_obstructions(space, specs)?;
    let model = CliffordModel::build(space.clifford_signature()?)?;
    let count = 1usize << specs.len();
    let mut out = Vec::with_capacity(count);
    for bits in 0..count {
        let signed: Vec<GeneratorSpec> = specs
            .iter()
            .enumerate()
            .map(|(i, s)| s.with_sign(if (bits >> i) & 1 == 0 { 1 } else { -1 }))
            .collect();
        let gens: Vec<GroupGenerator> = signed
            .iter()
            .map(|s| build_generator(space, &model, s))
            .collect::<Result<_>>()?;
        let label = if gens.is_empty() {
            "(trivial)".to_string()
        } else {
            format!(
                "({})",
                gens.iter().map(|g| g.lift_label.clone()).collect::<Vec<_>>().join(", ")
            )
        };
        out.push(SpinStructureCase { label, generators: gens });
    }
    Ok(out)
}

/// Largest violation of the isometry property of a generator's chart
/// action over random sample points: compares `Lᵀ g(γp) L` with `g(p)`
/// where `L` is the linear part (and additionally checks that quadric
/// points stay on the level set).
pub fn pullback_metric_defect(
    family: &SolutionFamily,
    action: &PointAction,
    seed: u64,
    samples: usize,
) -> Result<f64> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let space = &family.space;
    let chart_metric = |p: &RVector| -> Result<RMatrix> {
        match family.chart {
            FamilyChart::Coordinate | FamilyChart::Ambient => space.metric_at(p),
            FamilyChart::Covering => {
                let r = space.radius().unwrap();
                let d = covering_differential(r, p);
                let amb = RMatrix::from_diagonal(&RVector::from_vec(
                    space.clifford_signature()?.eps_vec(),
                ));
                Ok(d.transpose() * amb * d)
            }
        }
    };
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let p = family.sample_point(&mut rng);
        let q = action.apply(&p);
        let dim = p.len();
        let l = action.linear_part(dim);
        let g_p = chart_metric(&p)?;
        let g_q = chart_metric(&q)?;
        let pulled = l.transpose() * g_q * &l;
        worst = worst.max((pulled - g_p).amax());
        if space.is_hypersurface() && family.chart == FamilyChart::Ambient {
            let level = space.ambient_level().unwrap();
            let eps = space.clifford_signature()?.eps_vec();
            let lv: f64 = (0..dim).map(|i| eps[i] * q[i] * q[i]).sum();
            worst = worst.max((lv - level).abs());
        }
    }
    Ok(worst)
}

/// Dimension of the subspace of a solution family invariant under all
/// generators of a spin structure case.
///
/// The conditions `φ(γ·y) - L φ(y) = 0` are stacked at `2·dim + 5` sample
/// points for every generator; the dimension is the null space measured
/// with a singular-value threshold anchored to
/// `1e-8 · max(condition scale, family value scale)`. Errors:
///
/// * [`Error::FamilyNotPreserved`] if some `L⁻¹ φ_j ∘ γ` is not in the
///   family's span (checked by least squares at the sample points);
/// * [`Error::RankUnstable`] if five extra sample points change the rank.
pub fn invariant_dimension(
    family: &SolutionFamily,
    case: &SpinStructureCase,
    seed: u64,
) -> Result<usize> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let d = family.dimension();
    let vd = family.value_dim();
    let base_pts = 2 * d + 5;
    let extra_pts = 5;
    let points: Vec<RVector> = (0..base_pts + extra_pts)
        .map(|_| family.sample_point(&mut rng))
        .collect();

    // Basis values at all sample points (also the threshold anchor).
    let value_stack = |pts: &[RVector]| -> CMatrix {
        let mut v = CMatrix::zeros(pts.len() * vd, d);
        for (pi, p) in pts.iter().enumerate() {
            for j in 0..d {
                let val = family.basis_field(j).value(p);
                for (ci, z) in val.iter().enumerate() {
                    v[(pi * vd + ci, j)] = *z;
                }
            }
        }
        v
    };

    // Stability: every transformed basis field must be representable in
    // the family.
    let vals_all = value_stack(&points);
    let sigma_vals = linalg::spectral_norm(&vals_all);
    for gen in &case.generators {
        let l_inv = gen.lift.clone().try_inverse().ok_or_else(|| {
            Error::InvalidGenerator("lift matrix is singular".into())
        })?;
        for j in 0..d {
            let mut rhs = CVector::zeros(points.len() * vd);
            for (pi, p) in points.iter().enumerate() {
                let moved = &l_inv * family.basis_field(j).value(&gen.action.apply(p));
                for (ci, z) in moved.iter().enumerate() {
                    rhs[pi * vd + ci] = *z;
                }
            }
            let coeffs = linalg::lstsq(&vals_all, &rhs, 1e-12 * sigma_vals.max(1.0));
            let resid = &vals_all * coeffs - &rhs;
            let rel = linalg::vec_inf_norm(&resid) / (1.0 + linalg::vec_inf_norm(&rhs));
            if rel > 1e-8 {
                return Err(Error::FamilyNotPreserved {
                    label: gen.lift_label.clone(),
                    residual: rel,
                });
            }
        }
    }

    let nullity_for = |pts: &[RVector]| -> usize {
        let rows = case.generators.len() * pts.len() * vd;
        let mut cond = CMatrix::zeros(rows.max(1), d);
        for (gi, gen) in case.generators.iter().enumerate() {
            for (pi, p) in pts.iter().enumerate() {
                let moved_pt = gen.action.apply(p);
                for j in 0..d {
                    let diff = family.basis_field(j).value(&moved_pt)
                        - &gen.lift * family.basis_field(j).value(p);
                    let row0 = (gi * pts.len() + pi) * vd;
                    for (ci, z) in diff.iter().enumerate() {
                        cond[(row0 + ci, j)] = *z;
                    }
                }
            }
        }
        let scale = linalg::spectral_norm(&cond).max(sigma_vals);
        let rank = linalg::rank_with_threshold(&cond, 1e-8 * scale);
        d - rank
    };

    if case.generators.is_empty() {
        return Ok(d);
    }
    let first = nullity_for(&points[..base_pts]);
    let second = nullity_for(&points);
    if first != second {
        return Err(Error::RankUnstable(format!(
            "invariant dimension {first} with {base_pts} points vs {second} with {} points",
            points.len()
        )));
    }
    Ok(first)
}

/// Normalised solution quantity: invariant dimension divided by the
/// spinor module dimension `2^(n/2)`, as an exact rational.
pub fn q_from_dimension(dim: usize, n: usize) -> Rational64 {
    Rational64::new(dim as i64, spinor_dim(n) as i64)
}

/// Invariant dimension of a case as an exact rational multiple of
/// `2^(n/2)`.
pub fn q_value(family: &SolutionFamily, case: &SpinStructureCase, seed: u64) -> Result<Rational64> {
    let dim = invariant_dimension(family, case, seed)?;
    Ok(q_from_dimension(dim, family.space.dim()))
}

/// Eigenspace dimensions of a product `ω` of an even number of generator
/// indices: `ω² = ±Id`, and the module splits into equal halves for the
/// eigenvalues `±1` (when `ω² = Id`) or `±i` (when `ω² = -Id`).
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaEigenspaces {
    /// The "positive" eigenvalue (`1` or `i`).
    pub eigenvalue: C64,
    pub plus_dim: usize,
    pub minus_dim: usize,
}

/// Compute the eigenspace dimensions of a generator product; errors if the
/// index count is odd (such products are not even-algebra elements).
pub fn omega_eigenspace_dims(model: &CliffordModel, indices: &[usize]) -> Result<OmegaEigenspaces> {
    if indices.len() % 2 != 0 {
        return Err(Error::OddIndexCount(indices.len()));
    }
    let omega = model.omega_element(indices);
    let dim = model.dim();
    let id = CMatrix::identity(dim, dim);
    let sq = &omega * &omega;
    let eigenvalue;
    let projector_plus;
    if linalg::mat_inf_norm(&(&sq - &id)) < 1e-10 {
        eigenvalue = Complex::new(1.0, 0.0);
        projector_plus = (&id + &omega) * Complex::new(0.5, 0.0);
    } else if linalg::mat_inf_norm(&(&sq + &id)) < 1e-10 {
        eigenvalue = Complex::new(0.0, 1.0);
        // P(+i) = (Id - i ω)/2.
        projector_plus = (&id - &omega * Complex::new(0.0, 1.0)) * Complex::new(0.5, 0.0);
    } else {
        return Err(Error::InvalidGenerator(
            "generator product does not square to ±Id".into(),
        ));
    }
    let trace: C64 = (0..dim).map(|i| projector_plus[(i, i)]).sum();
    let plus = trace.re.round() as usize;
    Ok(OmegaEigenspaces { eigenvalue, plus_dim: plus, minus_dim: dim - plus })
}

// ---------------------------------------------------------------------------
// Case catalog
// ---------------------------------------------------------------------------

/// Space entry of a catalog case. `kind` is one of `cahen-wallach`,
/// `m-plus`, `m-minus`, `pseudo-sphere`, `pseudo-hyperbolic`, `h-cover`
/// (cylinder-chart cover; `m` is the cover order, absent for the universal
/// cover).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogSpace {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
}

/// One row of the quotient catalog: a space, generator specs with signs,
/// and the expected normalised invariant dimension (`"none"` when the
/// quotient admits no spin structure at all).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogCase {
    pub label: String,
    pub space: CatalogSpace,
    pub generators: Vec<GeneratorSpec>,
    pub expected_q: String,
}

/// Outcome of running one catalog case.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseResult {
    pub label: String,
    pub n: usize,
    pub family_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    pub expected_q: String,
    pub pass: bool,
    pub note: String,
}

/// Build the solution family a catalog space refers to.
pub fn family_for_catalog_space(cs: &CatalogSpace) -> Result<SolutionFamily> {
    match cs.kind.as_str() {
        "cahen-wallach" => {
            let lambda = cs
                .lambda
                .clone()
                .ok_or_else(|| Error::InvalidParameter("cahen-wallach needs lambda".into()))?;
            cahen_wallach_parallel_family(&lambda)
        }
        "m-plus" => mpm_family(
            cs.n.ok_or_else(|| Error::InvalidParameter("m-plus needs n".into()))?,
            ModelSign::Plus,
        ),
        "m-minus" => mpm_family(
            cs.n.ok_or_else(|| Error::InvalidParameter("m-minus needs n".into()))?,
            ModelSign::Minus,
        ),
        "pseudo-sphere" => hypersurface_family(&SpaceModel::PseudoSphere {
            n: cs.n.ok_or_else(|| Error::InvalidParameter("pseudo-sphere needs n".into()))?,
            r: cs.r.unwrap_or(1.0),
        }),
        "pseudo-hyperbolic" => hypersurface_family(&SpaceModel::PseudoHyperbolic {
            n: cs.n.ok_or_else(|| Error::InvalidParameter("pseudo-hyperbolic needs n".into()))?,
            r: cs.r.unwrap_or(1.0),
        }),
        "h-cover" => {
            let order = match cs.m {
                None => CoverOrder::Universal,
                Some(m) => CoverOrder::Finite(m),
            };
            covering_family(
                order,
                cs.n.ok_or_else(|| Error::InvalidParameter("h-cover needs n".into()))?,
                cs.r.unwrap_or(1.0),
            )
        }
        other => Err(Error::InvalidParameter(format!("unknown catalog space `{other}`"))),
    }
}

/// Parse an expected-q string (`"3/2"`, `"2"`, `"0"`, or `"none"`).
pub fn parse_expected_q(s: &str) -> Option<Rational64> {
    if s == "none" {
        return None;
    }
    let mut parts = s.splitn(2, '/');
    let num: i64 = parts.next()?.trim().parse().ok()?;
    match parts.next() {
        None => Some(Rational64::from_integer(num)),
        Some(den) => Some(Rational64::new(num, den.trim().parse().ok()?)),
    }
}

/// Run one catalog case: build the family, check obstructions, impose the
/// signed lifts, and compare the invariant dimension against the expected
/// rational.
pub fn run_catalog_case(case: &CatalogCase, seed: u64) -> CaseResult {
    let fail_with = |note: String| CaseResult {
        label: case.label.clone(),
        n: 0,
        family_dim: 0,
        invariant_dim: None,
        q: None,
        expected_q: case.expected_q.clone(),
        pass: false,
        note,
    };
    let family = match family_for_catalog_space(&case.space) {
        Ok(f) => f,
        Err(e) => return fail_with(format!("family construction failed: {e}")),
    };
    let n = family.space.dim();
    let family_dim = family.dimension();

    match check_obstructions(&family.space, &case.generators) {
        Err(e @ (Error::NonOrientable(_) | Error::NoSpinStructure(_))) => {
            let pass = case.expected_q == "none";
            return CaseResult {
                label: case.label.clone(),
                n,
                family_dim,
                invariant_dim: None,
                q: None,
                expected_q: case.expected_q.clone(),
                pass,
                note: e.to_string(),
            };
        }
        Err(e) => return fail_with(format!("obstruction check failed: {e}")),
        Ok(()) => {}
    }

    let model = match CliffordModel::build(match family.space.clifford_signature() {
        Ok(s) => s,
        Err(e) => return fail_with(e.to_string()),
    }) {
        Ok(m) => m,
        Err(e) => return fail_with(e.to_string()),
    };
    let gens: Result<Vec<GroupGenerator>> = case
        .generators
        .iter()
        .map(|s| build_generator(&family.space, &model, s))
        .collect();
    let gens = match gens {
        Ok(g) => g,
        Err(e) => return fail_with(e.to_string()),
    };
    let label = if gens.is_empty() {
        "(trivial)".into()
    } else {
        format!(
            "({})",
            gens.iter().map(|g| g.lift_label.clone()).collect::<Vec<_>>().join(", ")
        )
    };
    let sc = SpinStructureCase { label, generators: gens };
    match invariant_dimension(&family, &sc, seed) {
        Ok(dim) => {
            let q = q_from_dimension(dim, n);
            let pass = parse_expected_q(&case.expected_q).map_or(false, |want| want == q);
            CaseResult {
                label: case.label.clone(),
                n,
                family_dim,
                invariant_dim: Some(dim),
                q: Some(q.to_string()),
                expected_q: case.expected_q.clone(),
                pass,
                note: sc.label,
            }
        }
        Err(e) => fail_with(format!("invariant dimension failed: {e}")),
    }
}

/// The built-in catalog of quotient cases with independently established
/// expected values.
pub fn builtin_catalog() -> Vec<CatalogCase> {
    let mut cases = Vec::new();
    let cw = |lambda: &[f64]| CatalogSpace {
        kind: "cahen-wallach".into(),
        n: None,
        lambda: Some(lambda.to_vec()),
        r: None,
        m: None,
    };
    let simple = |kind: &str, n: usize| CatalogSpace {
        kind: kind.into(),
        n: Some(n),
        lambda: None,
        r: None,
        m: None,
    };
    let sphere = |n: usize| CatalogSpace {
        kind: "pseudo-sphere".into(),
        n: Some(n),
        lambda: None,
        r: Some(1.0),
        m: None,
    };
    let cover = |n: usize, m: Option<u32>| CatalogSpace {
        kind: "h-cover".into(),
        n: Some(n),
        lambda: None,
        r: Some(1.0),
        m,
    };
    let mut push = |label: &str, space: CatalogSpace, gens: Vec<GeneratorSpec>, q: &str| {
        cases.push(CatalogCase {
            label: label.into(),
            space,
            generators: gens,
            expected_q: q.into(),
        });
    };

    // --- Plane-wave quotients over the parallel family -------------------
    push("cw(1,-2) simply connected", cw(&[1.0, -2.0]), vec![], "1/2");
    push(
        "cw(1,-2) / translation, lift +1",
        cw(&[1.0, -2.0]),
        vec![GeneratorSpec::CwTranslation { alpha: 1.37, sign: 1 }],
        "1/2",
    );
    push(
        "cw(1,-2) / translation, lift -1",
        cw(&[1.0, -2.0]),
        vec![GeneratorSpec::CwTranslation { alpha: 1.37, sign: -1 }],
        "0",
    );
    push(
        "cw(-1,-4) / screw m=(2,4), lift +1",
        cw(&[-1.0, -4.0]),
        vec![GeneratorSpec::CwScrew { m: vec![2, 4], sign: 1 }],
        "1/2",
    );
    push(
        "cw(-1,-4) / screw m=(2,4), lift -1",
        cw(&[-1.0, -4.0]),
        vec![GeneratorSpec::CwScrew { m: vec![2, 4], sign: -1 }],
        "0",
    );
    push(
        "cw(-1,-1,-4) / screw m=(1,1,2), lift +omega",
        cw(&[-1.0, -1.0, -4.0]),
        vec![GeneratorSpec::CwScrew { m: vec![1, 1, 2], sign: 1 }],
        "0",
    );
    push(
        "cw(-1,-1,-4) / screw m=(1,1,2), lift -omega",
        cw(&[-1.0, -1.0, -4.0]),
        vec![GeneratorSpec::CwScrew { m: vec![1, 1, 2], sign: -1 }],
        "0",
    );
    push(
        "cw(-1,-1,-1,-1,-4) / screw m=(1,1,1,1,2), lift +omega",
        cw(&[-1.0, -1.0, -1.0, -1.0, -4.0]),
        vec![GeneratorSpec::CwScrew { m: vec![1, 1, 1, 1, 2], sign: 1 }],
        "1/4",
    );
    push(
        "cw(-1,-1,-1,-1,-4) / screw m=(1,1,1,1,2), lift -omega",
        cw(&[-1.0, -1.0, -1.0, -1.0, -4.0]),
        vec![GeneratorSpec::CwScrew { m: vec![1, 1, 1, 1, 2], sign: -1 }],
        "1/4",
    );
    push(
        "cw(-1,-1,-1,-1,-4) / (translation, screw), lifts (+1, +omega)",
        cw(&[-1.0, -1.0, -1.0, -1.0, -4.0]),
        vec![
            GeneratorSpec::CwTranslation { alpha: 0.83, sign: 1 },
            GeneratorSpec::CwScrew { m: vec![1, 1, 1, 1, 2], sign: 1 },
        ],
        "1/4",
    );
    push(
        "cw(-1,-1,-1,-1,-4) / (translation, screw), lifts (-1, +omega)",
        cw(&[-1.0, -1.0, -1.0, -1.0, -4.0]),
        vec![
            GeneratorSpec::CwTranslation { alpha: 0.83, sign: -1 },
            GeneratorSpec::CwScrew { m: vec![1, 1, 1, 1, 2], sign: 1 },
        ],
        "0",
    );

    // --- Conformally flat plane-wave quotients over the full family ------
    push("m-plus n=4 simply connected", simple("m-plus", 4), vec![], "2");
    push("m-minus n=6 simply connected", simple("m-minus", 6), vec![], "2");
    push(
        "m-plus n=4 / translation, lift +1",
        simple("m-plus", 4),
        vec![GeneratorSpec::CwTranslation { alpha: 1.37, sign: 1 }],
        "3/2",
    );
    push(
        "m-plus n=4 / translation, lift -1",
        simple("m-plus", 4),
        vec![GeneratorSpec::CwTranslation { alpha: 1.37, sign: -1 }],
        "0",
    );
    push(
        "m-minus n=6 / screw m=(1,1,1,1), lift +omega",
        simple("m-minus", 6),
        vec![GeneratorSpec::CwScrew { m: vec![1, 1, 1, 1], sign: 1 }],
        "1",
    );
    push(
        "m-minus n=6 / screw m=(1,1,1,1), lift -omega",
        simple("m-minus", 6),
        vec![GeneratorSpec::CwScrew { m: vec![1, 1, 1, 1], sign: -1 }],
        "1",
    );
    push(
        "m-minus n=6 / (translation, screw m=1), lifts (+1, +omega)",
        simple("m-minus", 6),
        vec![
            GeneratorSpec::CwTranslation { alpha: 0.83, sign: 1 },
            GeneratorSpec::CwScrew { m: vec![1, 1, 1, 1], sign: 1 },
        ],
        "3/4",
    );
    push(
        "m-minus n=6 / (translation, screw m=1), lifts (+1, -omega)",
        simple("m-minus", 6),
        vec![
            GeneratorSpec::CwTranslation { alpha: 0.83, sign: 1 },
            GeneratorSpec::CwScrew { m: vec![1, 1, 1, 1], sign: -1 },
        ],
        "3/4",
    );
    push(
        "m-minus n=6 / (translation, screw m=1), lifts (-1, +omega)",
        simple("m-minus", 6),
        vec![
            GeneratorSpec::CwTranslation { alpha: 0.83, sign: -1 },
            GeneratorSpec::CwScrew { m: vec![1, 1, 1, 1], sign: 1 },
        ],
        "0",
    );
    push(
        "m-minus n=6 / (translation, screw m=2), lifts (+1, +1)",
        simple("m-minus", 6),
        vec![
            GeneratorSpec::CwTranslation { alpha: 0.83, sign: 1 },
            GeneratorSpec::CwScrew { m: vec![2, 2, 2, 2], sign: 1 },
        ],
        "3/2",
    );
    push(
        "m-minus n=6 / (translation, screw m=2), lifts (+1, -1)",
        simple("m-minus", 6),
        vec![
            GeneratorSpec::CwTranslation { alpha: 0.83, sign: 1 },
            GeneratorSpec::CwScrew { m: vec![2, 2, 2, 2], sign: -1 },
        ],
        "0",
    );
    push(
        "m-minus n=4 / screw m=(1,1), lift +omega",
        simple("m-minus", 4),
        vec![GeneratorSpec::CwScrew { m: vec![1, 1], sign: 1 }],
        "0",
    );
    push(
        "m-minus n=4 / screw m=(1,1), lift -omega",
        simple("m-minus", 4),
        vec![GeneratorSpec::CwScrew { m: vec![1, 1], sign: -1 }],
        "0",
    );

    // --- Quadrics and their quotients ------------------------------------
    push("sphere n=4 simply connected", sphere(4), vec![], "2");
    push("sphere n=5 simply connected", sphere(5), vec![], "2");
    push(
        "sphere n=4 / antipodal (non-orientable)",
        sphere(4),
        vec![GeneratorSpec::Antipodal { sign: 1 }],
        "none",
    );
    push(
        "sphere n=5 / antipodal, lift +omega",
        sphere(5),
        vec![GeneratorSpec::Antipodal { sign: 1 }],
        "1",
    );
    push(
        "sphere n=5 / antipodal, lift -omega",
        sphere(5),
        vec![GeneratorSpec::Antipodal { sign: -1 }],
        "1",
    );
    push(
        "sphere n=7 / antipodal (no spin structure)",
        sphere(7),
        vec![GeneratorSpec::Antipodal { sign: 1 }],
        "none",
    );
    push(
        "sphere n=9 / antipodal, lift +omega",
        sphere(9),
        vec![GeneratorSpec::Antipodal { sign: 1 }],
        "1",
    );
    push(
        "sphere n=9 / antipodal, lift -omega",
        sphere(9),
        vec![GeneratorSpec::Antipodal { sign: -1 }],
        "1",
    );

    // --- Covers of the pseudo-hyperbolic space ----------------------------
    push("hyperbolic n=4 universal cover", cover(4, None), vec![], "2");
    push("hyperbolic n=5 universal cover", cover(5, None), vec![], "2");
    push(
        "hyperbolic n=5 quadric (1-fold), periodic lift +1",
        cover(5, Some(1)),
        vec![GeneratorSpec::DeckTranslation { periods: 1, sign: 1 }],
        "2",
    );
    push(
        "hyperbolic n=5 quadric (1-fold), periodic lift -1",
        cover(5, Some(1)),
        vec![GeneratorSpec::DeckTranslation { periods: 1, sign: -1 }],
        "0",
    );
    push(
        "hyperbolic n=5 2-fold cover, lift +1",
        cover(5, Some(2)),
        vec![GeneratorSpec::DeckTranslation { periods: 2, sign: 1 }],
        "2",
    );
    push(
        "hyperbolic n=5 2-fold cover, lift -1",
        cover(5, Some(2)),
        vec![GeneratorSpec::DeckTranslation { periods: 2, sign: -1 }],
        "0",
    );
    for (n, q_plus) in [(3usize, "1"), (7, "1")] {
        for (st, sd, q) in [
            (1i8, 1i8, q_plus),
            (1, -1, q_plus),
            (-1, 1, "0"),
            (-1, -1, "0"),
        ] {
            push(
                &format!(
                    "hyperbolic n={n} quadric / glide, lifts ({}1, {}omega)",
                    if st > 0 { "+" } else { "-" },
                    if sd > 0 { "+" } else { "-" }
                ),
                cover(n, Some(1)),
                vec![
                    GeneratorSpec::DeckTranslation { periods: 1, sign: st },
                    GeneratorSpec::DeckAntipodal { half_periods: 1, sign: sd },
                ],
                q,
            );
        }
    }
    push(
        "hyperbolic n=5 quadric / glide (no spin structure)",
        cover(5, Some(1)),
        vec![
            GeneratorSpec::DeckTranslation { periods: 1, sign: 1 },
            GeneratorSpec::DeckAntipodal { half_periods: 1, sign: 1 },
        ],
        "none",
    );

    cases
}
