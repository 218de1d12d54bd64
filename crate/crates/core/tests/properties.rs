//! Randomized property tests: algebraic identities that must hold for
//! arbitrary parameters, points, and directions, not just the tuned
//! examples in the acceptance suite.

use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twistorlab::clifford::{CliffordModel, Signature};
use twistorlab::linalg::vec_inf_norm;
use twistorlab::solutions::{
    coordinate_ansatz_family, flat_family, hypersurface_family, mpm_family, ModelSign,
    SolutionFamily,
};
use twistorlab::spaces::SpaceModel;
use twistorlab::spinops::{
    dirac, intrinsic_clifford, spinor_derivative, spinor_derivative_koszul, twistor_residual,
};
use twistorlab::{C64, CVector, RMatrix, RVector};

fn to_params(raw: &[(f64, f64)]) -> Vec<C64> {
    raw.iter().map(|(re, im)| Complex::new(*re, *im)).collect()
}

fn seeded_point(family: &SolutionFamily, seed: u64) -> RVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    family.sample_point(&mut rng)
}

/// Dense matrix exponential by scaling and squaring.
fn mat_exp(a: &RMatrix) -> RMatrix {
    let n = a.nrows();
    let norm = a.amax();
    let scale = norm.log2().ceil().max(0.0) as i32 + 4;
    let b = a / 2f64.powi(scale);
    let mut term = RMatrix::identity(n, n);
    let mut sum = RMatrix::identity(n, n);
    for k in 1..24 {
        term = &term * &b / (k as f64);
        sum += &term;
    }
    let mut out = sum;
    for _ in 0..scale {
        out = &out * &out;
    }
    out
}

fn param_vec(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The twistor residual is complex-linear in the field.
    #[test]
    fn residual_is_linear_in_the_field(
        flat in any::<bool>(),
        raw_a in param_vec(16),
        raw_b in param_vec(16),
        (are, aim) in (-1.0..1.0f64, -1.0..1.0f64),
        (bre, bim) in (-1.0..1.0f64, -1.0..1.0f64),
        seed in any::<u64>(),
    ) {
        let family = if flat {
            flat_family(Signature::new(4, 1).unwrap()).unwrap()
        } else {
            mpm_family(4, ModelSign::Minus).unwrap()
        };
        let model = CliffordModel::build(family.space.clifford_signature().unwrap()).unwrap();
        let d = family.dimension();
        let pa = to_params(&raw_a[..d]);
        let pb = to_params(&raw_b[..d]);
        let a = Complex::new(are, aim);
        let b = Complex::new(bre, bim);
        let mixed: Vec<C64> = pa.iter().zip(&pb).map(|(x, y)| a * x + b * y).collect();
        let p = seeded_point(&family, seed);
        let ra = twistor_residual(&family.space, &model, &family.instantiate(&pa).unwrap(), &p).unwrap();
        let rb = twistor_residual(&family.space, &model, &family.instantiate(&pb).unwrap(), &p).unwrap();
        let rm = twistor_residual(&family.space, &model, &family.instantiate(&mixed).unwrap(), &p).unwrap();
        for i in 0..ra.residuals.len() {
            let lincomb = &ra.residuals[i] * a + &rb.residuals[i] * b;
            let defect = vec_inf_norm(&(&rm.residuals[i] - lincomb));
            prop_assert!(defect <= 1e-10, "linearity defect {defect:.3e} in direction {i}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The closed-form spinor derivative on plane-wave spaces agrees with
    /// the Koszul-formula oracle for arbitrary profiles and directions.
    #[test]
    fn closed_form_derivative_matches_koszul(
        lambda in prop::collection::vec(
            (0.3..3.0f64, any::<bool>()).prop_map(|(m, neg)| if neg { -m } else { m }),
            1..=4,
        ),
        raw in param_vec(64),
        dir in prop::collection::vec(-1.0..1.0f64, 6),
        seed in any::<u64>(),
    ) {
        let space = SpaceModel::CahenWallach { lambda: lambda.clone() };
        let n = space.dim();
        let model = CliffordModel::new(n, 1).unwrap();
        let family = coordinate_ansatz_family(&space).unwrap();
        let combo = family.instantiate(&to_params(&raw[..family.dimension()])).unwrap();
        let p = seeded_point(&family, seed);
        let x = RVector::from_iterator(n, dir.iter().take(n).copied());
        let closed = spinor_derivative(&space, &model, &combo, &x, &p).unwrap();
        let koszul = spinor_derivative_koszul(&space, &model, &combo, &x, &p).unwrap();
        let defect = vec_inf_norm(&(closed - koszul));
        prop_assert!(defect <= 1e-7, "derivative mismatch {defect:.3e} for λ={lambda:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Hand-written partial derivatives of the basis fields agree with
    /// central finite differences.
    #[test]
    fn analytic_partials_match_finite_differences(
        which in 0..6usize,
        basis_raw in 0..64usize,
        dir_raw in 0..8usize,
        seed in any::<u64>(),
    ) {
        let family = match which {
            0 => mpm_family(3, ModelSign::Plus).unwrap(),
            1 => mpm_family(5, ModelSign::Minus).unwrap(),
            2 => mpm_family(6, ModelSign::Plus).unwrap(),
            3 => hypersurface_family(&SpaceModel::PseudoSphere { n: 4, r: 1.3 }).unwrap(),
            4 => hypersurface_family(&SpaceModel::PseudoHyperbolic { n: 5, r: 0.8 }).unwrap(),
            _ => flat_family(Signature::new(5, 1).unwrap()).unwrap(),
        };
        let p = seeded_point(&family, seed);
        let field = family.basis_field(basis_raw % family.dimension());
        let dir = dir_raw % p.len();
        let analytic = field.partial(&p, dir);
        let h = 1e-5;
        let mut plus = p.clone();
        plus[dir] += h;
        let mut minus = p.clone();
        minus[dir] -= h;
        let fd = (field.value(&plus) - field.value(&minus)) / Complex::new(2.0 * h, 0.0);
        let defect = vec_inf_norm(&(analytic - fd));
        prop_assert!(defect <= 1e-5, "partial mismatch {defect:.3e} (family {which}, dir {dir})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// The Dirac operator does not depend on the choice of
    /// pseudo-orthonormal frame.
    #[test]
    fn dirac_is_frame_independent(
        which in 0..3usize,
        raw in param_vec(32),
        skew in prop::collection::vec(-0.3..0.3f64, 21),
        seed in any::<u64>(),
    ) {
        let family = match which {
            0 => flat_family(Signature::new(4, 1).unwrap()).unwrap(),
            1 => mpm_family(4, ModelSign::Plus).unwrap(),
            _ => hypersurface_family(&SpaceModel::PseudoSphere { n: 4, r: 1.0 }).unwrap(),
        };
        let space = family.space.clone();
        let model = CliffordModel::build(space.clifford_signature().unwrap()).unwrap();
        let combo = family.instantiate(&to_params(&raw[..family.dimension()])).unwrap();
        let p = seeded_point(&family, seed);
        let n = space.dim();
        let eps = space.frame_epsilons();
        let g_eps = RMatrix::from_diagonal(&RVector::from_vec(eps.clone()));

        let mut s = RMatrix::zeros(n, n);
        let mut it = skew.iter();
        for i in 0..n {
            for j in 0..i {
                let v = *it.next().unwrap();
                s[(i, j)] = v;
                s[(j, i)] = -v;
            }
        }
        let boost = mat_exp(&(&g_eps * s));
        prop_assert!((boost.transpose() * &g_eps * &boost - &g_eps).amax() < 1e-10);

        let frame = space.frame_at(&p).unwrap();
        let boosted = &frame * &boost;
        let mut d_boost = CVector::zeros(model.dim());
        for i in 0..n {
            let x = RVector::from_column_slice(boosted.column(i).as_slice());
            let grad = spinor_derivative(&space, &model, &combo, &x, &p).unwrap();
            let cx = intrinsic_clifford(&space, &model, &x, &p).unwrap();
            d_boost += cx * grad * Complex::new(eps[i], 0.0);
        }
        let d_plain = dirac(&space, &model, &combo, &p).unwrap();
        let defect = vec_inf_norm(&(d_boost - d_plain));
        prop_assert!(defect <= 1e-8, "frame dependence {defect:.3e} (family {which})");
    }
}
