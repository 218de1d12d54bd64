//! Explicit complex Clifford algebra representations.
//!
//! For a pseudo-Euclidean space of dimension `n` whose first `k` basis
//! vectors are timelike, the generators satisfy
//!
//! ```text
//! e_i e_j + e_j e_i = -2 eps_j delta_ij,   eps_j = -1 for timelike j
//! ```
//!
//! The representation acts on `C^(2^(n/2))` and is assembled from Kronecker
//! products of four 2x2 matrices `U`, `V`, `E`, `T`. Generator pairs
//! `(e_{2p-1}, e_{2p})` act on a single tensor slot through `U` and `V`,
//! with identity factors `E` to the left and `T` factors to the right; the
//! first pair acts on the last (least significant) slot. Timelike
//! generators carry an extra factor `i`, and for odd `n` the final
//! generator is `i * T ⊗ ... ⊗ T`.
//!
//! The module also provides the standard orthonormal spinor basis `u(δ)`
//! indexed by sign tuples, the volume element, chirality projectors for
//! even `n`, and products of generators used as lifts of point reflections.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::linalg::{kron_vec, mat_inf_norm};
use crate::{C64, CMatrix, CVector, Error, Result};

/// Largest supported vector-space dimension for generator construction.
pub const MAX_DIM: usize = 12;

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Pseudo-Euclidean signature: dimension `n` with `k` leading timelike
/// directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    /// Total dimension.
    pub n: usize,
    /// Number of timelike directions (these come first).
    pub k: usize,
}

impl Signature {
    /// Validated constructor; requires `1 <= n <= MAX_DIM` and `k <= n`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension { n, max: MAX_DIM });
        }
        if k > n {
            return Err(Error::InvalidParameter(format!(
                "signature ({n},{k}) has more timelike directions than dimensions"
            )));
        }
        Ok(Signature { n, k })
    }

    /// Sign `eps_i` of the i-th orthonormal direction (0-based): `-1`
    /// timelike, `+1` spacelike.
    pub fn eps(&self, i: usize) -> f64 {
        if i < self.k { -1.0 } else { 1.0 }
    }

    /// All signs as a vector.
    pub fn eps_vec(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.eps(i)).collect()
    }

    /// Number of tensor slots, `n/2` rounded down.
    pub fn half(&self) -> usize {
        self.n / 2
    }

    /// Dimension `2^(n/2)` of the spinor module.
    pub fn spinor_dim(&self) -> usize {
        1 << self.half()
    }
}

fn base_u() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)])
}

fn base_v() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

fn base_t() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

fn base_e() -> CMatrix {
    CMatrix::identity(2, 2)
}

fn kron_chain(factors: &[CMatrix]) -> CMatrix {
    let mut acc = CMatrix::from_element(1, 1, c(1.0, 0.0));
    for f in factors {
        acc = acc.kronecker(f);
    }
    acc
}

/// The 2-dimensional basis spinor `u(δ) = (1, -δ i)/sqrt(2)`, `δ = ±1`.
pub fn u2(delta: i8) -> CVector {
    let d = delta as f64;
    let s = 1.0 / 2.0_f64.sqrt();
    CVector::from_vec(vec![c(s, 0.0), c(0.0, -d * s)])
}

/// Tensor a spinor of the two-dimensions-lower module with `u(δ)` in the
/// last slot. This realises the standard identification of the spinor
/// module of a Lorentzian space with `(spinors of the transverse space) ⊗ C²`.
pub fn tensor_with_u(w: &CVector, delta: i8) -> CVector {
    kron_vec(w, &u2(delta))
}

/// Inverse of [`tensor_with_u`]: split `phi = phi1 ⊗ u(+1) + phi2 ⊗ u(-1)`
/// into `(phi1, phi2)`.
pub fn split_last_slot(phi: &CVector) -> (CVector, CVector) {
    assert!(phi.len() % 2 == 0, "spinor length must be even to split");
    let half = phi.len() / 2;
    let up = u2(1);
    let um = u2(-1);
    let mut p1 = CVector::zeros(half);
    let mut p2 = CVector::zeros(half);
    for i in 0..half {
        let b0 = phi[2 * i];
        let b1 = phi[2 * i + 1];
        p1[i] = up[0].conj() * b0 + up[1].conj() * b1;
        p2[i] = um[0].conj() * b0 + um[1].conj() * b1;
    }
    (p1, p2)
}

/// Index of a `u`-basis spinor: one sign per tensor slot, leftmost (most
/// significant) slot first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UBasisIndex {
    /// Signs `δ_s = ±1`, one per slot.
    pub deltas: Vec<i8>,
}

impl UBasisIndex {
    /// Product of all slot signs; for even `n` this is the chirality of the
    /// basis spinor.
    pub fn chirality(&self) -> i8 {
        self.deltas.iter().product()
    }
}

/// An explicit representation of the complex Clifford algebra of a given
/// signature on `C^(2^(n/2))`.
#[derive(Clone, Debug)]
pub struct CliffordModel {
    sig: Signature,
    gens: Vec<CMatrix>,
}

impl CliffordModel {
    /// Build the representation for a signature.
    pub fn build(sig: Signature) -> Result<Self> {
        // Re-validate so models can't be built from a hand-rolled struct
        // that skipped `Signature::new`.
        let sig = Signature::new(sig.n, sig.k)?;
        let m = sig.half();
        let mut gens = Vec::with_capacity(sig.n);
        for j in 1..=sig.n {
            let tau = if j <= sig.k { c(0.0, 1.0) } else { c(1.0, 0.0) };
            let mat = if j <= 2 * m {
                let pair = (j + 1) / 2; // 1-based slot pair
                let head = if j % 2 == 1 { base_u() } else { base_v() };
                let mut factors = Vec::with_capacity(m);
                for _ in 0..(m - pair) {
                    factors.push(base_e());
                }
                factors.push(head);
                for _ in 0..(pair - 1) {
                    factors.push(base_t());
                }
                kron_chain(&factors)
            } else {
                // Final generator in odd dimension.
                let factors: Vec<CMatrix> = (0..m).map(|_| base_t()).collect();
                kron_chain(&factors) * c(0.0, 1.0)
            };
            gens.push(mat * tau);
        }
        Ok(CliffordModel { sig, gens })
    }

    /// Convenience constructor from raw `(n, k)`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        Self::build(Signature::new(n, k)?)
    }

    /// The signature this model represents.
    pub fn signature(&self) -> Signature {
        self.sig
    }

    /// Spinor module dimension.
    pub fn dim(&self) -> usize {
        self.sig.spinor_dim()
    }

    /// The i-th generator matrix (0-based).
    pub fn generator(&self, i: usize) -> &CMatrix {
        &self.gens[i]
    }

    /// All generator matrices in order.
    pub fn generators(&self) -> &[CMatrix] {
        &self.gens
    }

    /// Matrix of Clifford multiplication by the vector with orthonormal
    /// coordinates `x`.
    pub fn vector_matrix(&self, x: &[f64]) -> CMatrix {
        assert_eq!(x.len(), self.sig.n, "coordinate count must match dimension");
        let d = self.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (xi, g) in x.iter().zip(&self.gens) {
            if *xi != 0.0 {
                acc += g * c(*xi, 0.0);
            }
        }
        acc
    }

    /// Clifford product `x · phi`.
    pub fn vector_multiply(&self, x: &[f64], phi: &CVector) -> CVector {
        assert_eq!(x.len(), self.sig.n, "coordinate count must match dimension");
        let mut acc = CVector::zeros(phi.len());
        for (xi, g) in x.iter().zip(&self.gens) {
            if *xi != 0.0 {
                acc += g * phi * c(*xi, 0.0);
            }
        }
        acc
    }

    /// Action of the 2-form `a ∧ b` on spinors, `(a b - b a)/2`.
    pub fn bivector_action(&self, a: &[f64], b: &[f64]) -> CMatrix {
        let ma = self.vector_matrix(a);
        let mb = self.vector_matrix(b);
        (&ma * &mb - &mb * &ma) * c(0.5, 0.0)
    }

    /// Ordered product `e_1 e_2 ... e_n` of all generators.
    pub fn volume_element(&self) -> CMatrix {
        let mut acc = CMatrix::identity(self.dim(), self.dim());
        for g in &self.gens {
            acc = acc * g;
        }
        acc
    }

    /// The scalar `i^(n/2 + k)` by which the volume element acts on
    /// positive-chirality basis spinors.
    pub fn chirality_scalar(&self) -> C64 {
        c(0.0, 1.0).powu((self.sig.half() + self.sig.k) as u32)
    }

    /// Chirality projectors `(P+, P-)` for even `n`: eigenprojectors of the
    /// volume element with eigenvalues `± i^(n/2+k)`.
    pub fn split_projectors(&self) -> Result<(CMatrix, CMatrix)> {
        if self.sig.n % 2 != 0 {
            return Err(Error::OddDimensionSplit { n: self.sig.n });
        }
        let d = self.dim();
        let id = CMatrix::identity(d, d);
        let vol = self.volume_element();
        let scale = self.chirality_scalar();
        let normalized = vol * (c(1.0, 0.0) / scale);
        let p_plus = (&id + &normalized) * c(0.5, 0.0);
        let p_minus = (&id - &normalized) * c(0.5, 0.0);
        Ok((p_plus, p_minus))
    }

    /// Ordered product of the generators with the given 0-based indices.
    /// Used for lifts of linear isometries that negate a subset of
    /// orthonormal directions.
    pub fn omega_element(&self, indices: &[usize]) -> CMatrix {
        let mut acc = CMatrix::identity(self.dim(), self.dim());
        for &i in indices {
            assert!(i < self.sig.n, "generator index {i} out of range");
            acc = acc * &self.gens[i];
        }
        acc
    }

    /// Largest deviation from the defining anticommutation relations,
    /// `max_ij | e_i e_j + e_j e_i + 2 eps_j delta_ij |`.
    pub fn relation_defect(&self) -> f64 {
        let d = self.dim();
        let id = CMatrix::identity(d, d);
        let mut worst = 0.0_f64;
        for i in 0..self.sig.n {
            for j in 0..self.sig.n {
                let anti = &self.gens[i] * &self.gens[j] + &self.gens[j] * &self.gens[i];
                let target = if i == j {
                    &id * c(-2.0 * self.sig.eps(j), 0.0)
                } else {
                    CMatrix::zeros(d, d)
                };
                worst = worst.max(mat_inf_norm(&(anti - target)));
            }
        }
        worst
    }

    /// Indices of the orthonormal `u`-basis, in lexicographic order starting
    /// from all-plus. The basis vector for each index is [`Self::u_vector`].
    pub fn u_basis(&self) -> Vec<UBasisIndex> {
        let m = self.sig.half();
        let count = 1usize << m;
        (0..count)
            .map(|b| {
                let deltas = (0..m)
                    .map(|s| if (b >> (m - 1 - s)) & 1 == 0 { 1 } else { -1 })
                    .collect();
                UBasisIndex { deltas }
            })
            .collect()
    }

    /// The basis spinor `u(δ) = u(δ_1) ⊗ ... ⊗ u(δ_m)` for a slot-sign index.
    pub fn u_vector(&self, idx: &UBasisIndex) -> CVector {
        assert_eq!(idx.deltas.len(), self.sig.half(), "slot count mismatch");
        let mut acc = CVector::from_vec(vec![c(1.0, 0.0)]);
        for &d in &idx.deltas {
            acc = kron_vec(&acc, &u2(d));
        }
        acc
    }

    /// Basis of the `±` chirality subspace as columns (even `n` only):
    /// the `u`-basis vectors whose slot signs multiply to `±1`.
    pub fn chirality_basis(&self, sign: i8) -> Result<CMatrix> {
        if self.sig.n % 2 != 0 {
            return Err(Error::OddDimensionSplit { n: self.sig.n });
        }
        let cols: Vec<CVector> = self
            .u_basis()
            .iter()
            .filter(|idx| idx.chirality() == sign)
            .map(|idx| self.u_vector(idx))
            .collect();
        Ok(CMatrix::from_columns(&cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hdot, vec_inf_norm};

    #[test]
    fn generators_in_dimension_two_are_u_and_v() {
        let model = CliffordModel::new(2, 0).unwrap();
        assert_eq!(model.generator(0), &base_u());
        assert_eq!(model.generator(1), &base_v());
    }

    #[test]
    fn third_generator_in_dimension_three_is_real_rotation() {
        let model = CliffordModel::new(3, 0).unwrap();
        let expected = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
        );
        assert!(mat_inf_norm(&(model.generator(2) - expected)) < 1e-15);
    }

    #[test]
    fn relations_hold_exactly_in_low_dimensions() {
        for n in 1..=6 {
            for k in 0..=n.min(2) {
                let model = CliffordModel::new(n, k).unwrap();
                assert!(
                    model.relation_defect() < 1e-14,
                    "relations violated for ({n},{k})"
                );
            }
        }
    }

    #[test]
    fn u_basis_is_orthonormal() {
        let model = CliffordModel::new(6, 1).unwrap();
        let basis = model.u_basis();
        assert_eq!(basis.len(), 8);
        for (i, bi) in basis.iter().enumerate() {
            let vi = model.u_vector(bi);
            for (j, bj) in basis.iter().enumerate() {
                let vj = model.u_vector(bj);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((hdot(&vi, &vj) - c(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn volume_element_acts_by_chirality_on_u_basis() {
        for (n, k) in [(4usize, 0usize), (4, 1), (6, 1), (8, 2)] {
            let model = CliffordModel::new(n, k).unwrap();
            let vol = model.volume_element();
            let scale = model.chirality_scalar();
            for idx in model.u_basis() {
                let v = model.u_vector(&idx);
                let got = &vol * &v;
                let want = &v * (scale * c(idx.chirality() as f64, 0.0));
                assert!(vec_inf_norm(&(got - want)) < 1e-13);
            }
        }
    }

    #[test]
    fn chirality_projectors_have_half_rank() {
        let model = CliffordModel::new(6, 1).unwrap();
        let (pp, pm) = model.split_projectors().unwrap();
        let tr_p: C64 = (0..8).map(|i| pp[(i, i)]).sum();
        let tr_m: C64 = (0..8).map(|i| pm[(i, i)]).sum();
        assert!((tr_p - c(4.0, 0.0)).norm() < 1e-12);
        assert!((tr_m - c(4.0, 0.0)).norm() < 1e-12);
        // Idempotent and complementary.
        assert!(mat_inf_norm(&(&pp * &pp - &pp)) < 1e-13);
        assert!(mat_inf_norm(&(&pp * &pm)) < 1e-13);
    }

    #[test]
    fn split_projectors_reject_odd_dimension() {
        let model = CliffordModel::new(5, 1).unwrap();
        assert!(matches!(
            model.split_projectors(),
            Err(Error::OddDimensionSplit { n: 5 })
        ));
    }

    #[test]
    fn base_actions_on_two_dimensional_spinors() {
        // e_1 = U sends u(d) to i u(-d); e_2 = V sends u(d) to d u(-d).
        let model = CliffordModel::new(2, 0).unwrap();
        for d in [1i8, -1] {
            let u = u2(d);
            let got1 = model.generator(0) * &u;
            let want1 = u2(-d) * c(0.0, 1.0);
            assert!(vec_inf_norm(&(got1 - want1)) < 1e-14);
            let got2 = model.generator(1) * &u;
            let want2 = u2(-d) * c(d as f64, 0.0);
            assert!(vec_inf_norm(&(got2 - want2)) < 1e-14);
        }
    }

    #[test]
    fn lorentzian_model_factors_through_transverse_model() {
        // e_{j+2} of the (n,1) model equals (transverse e_j) ⊗ T, including
        // the odd top generator.
        for n in [4usize, 5, 7] {
            let big = CliffordModel::new(n, 1).unwrap();
            let sub = CliffordModel::new(n - 2, 0).unwrap();
            let t = base_t();
            for j in 0..(n - 2) {
                let expected = sub.generator(j).kronecker(&t);
                assert!(
                    mat_inf_norm(&(big.generator(j + 2) - expected)) < 1e-14,
                    "factorisation fails for n={n}, j={j}"
                );
            }
        }
    }

    #[test]
    fn tensor_and_split_roundtrip() {
        let w = CVector::from_vec(vec![c(1.0, 2.0), c(-0.5, 0.25)]);
        let phi = tensor_with_u(&w, 1) + tensor_with_u(&(w.clone() * c(0.0, 1.0)), -1);
        let (p1, p2) = split_last_slot(&phi);
        assert!(vec_inf_norm(&(p1 - &w)) < 1e-14);
        assert!(vec_inf_norm(&(p2 - w * c(0.0, 1.0))) < 1e-14);
    }

    #[test]
    fn dimension_guard() {
        assert!(matches!(
            CliffordModel::new(13, 0),
            Err(Error::UnsupportedDimension { n: 13, .. })
        ));
        assert!(CliffordModel::new(12, 2).is_ok());
    }
}
