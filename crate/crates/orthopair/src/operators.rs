//! Module operators `T: Aⁿ → Aᵐ` and general ℂ-linear maps.
//!
//! A [`ModuleOperator`] is given by a coefficient array acting on the right,
//! `T(x)_j = Σᵢ xᵢ·C_{ij}`, so left A-linearity `T(a·x) = a·T(x)` holds by
//! construction. Composition, adjoints, norms, and inverses all reduce to
//! block matrices: for each algebra block `b` of size `k`, the coefficients
//! assemble into a complex `(n·k)×(m·k)` matrix acting on the rows of the
//! block coordinates, and the ℂ-matrix realization of the operator is a
//! direct sum of `k` copies of it.
//!
//! A [`GeneralLinearMap`] is an arbitrary complex matrix on the canonical
//! ℂ-coordinates of `Aⁿ`. It need not respect the module structure, which
//! makes it the right carrier for the locality test (`a·x = 0 ⟹ a·L(x) = 0`)
//! and for [`GeneralLinearMap::promote`], the reconstruction of a coefficient
//! array from generator images that certifies A-linearity.
//!
//! Every [`ModuleOperator`] here is adjointable: at finite dimension the
//! adjoint always exists ([`ModuleOperator::adjoint`] is total), so
//! non-adjointable module maps — possible on infinite-dimensional modules —
//! cannot be exhibited in this setting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::algebra::{
    haar_projection, haar_unitary, smallest_singular_value, spectral_norm, AlgebraElement, CMatrix,
    C64,
};
use crate::error::{Error, Result};
use crate::module::{ModuleElement, ModuleSpace};
use crate::subseed;

// ---------------------------------------------------------------------------
// module operators
// ---------------------------------------------------------------------------

/// An A-linear operator `Aⁿ → Aᵐ` given by right-acting coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleOperator {
    domain: ModuleSpace,
    codomain: ModuleSpace,
    /// Row-major `n×m`: `coeffs[i*m + j]` is `C_{ij}`.
    coeffs: Vec<AlgebraElement>,
}

impl ModuleOperator {
    pub fn from_coeffs(
        domain: ModuleSpace,
        codomain: ModuleSpace,
        coeffs: Vec<AlgebraElement>,
    ) -> Result<Self> {
        if domain.descriptor() != codomain.descriptor() {
            return Err(Error::InvalidOperand);
        }
        if coeffs.len() != domain.rank() * codomain.rank() {
            return Err(Error::InvalidOperand);
        }
        for c in &coeffs {
            if c.descriptor() != domain.descriptor() {
                return Err(Error::InvalidOperand);
            }
        }
        Ok(Self {
            domain,
            codomain,
            coeffs,
        })
    }

    pub fn identity(space: &ModuleSpace) -> Self {
        let n = space.rank();
        let mut coeffs = vec![AlgebraElement::zero(space.descriptor().clone()); n * n];
        for i in 0..n {
            coeffs[i * n + i] = AlgebraElement::identity(space.descriptor().clone());
        }
        Self {
            domain: space.clone(),
            codomain: space.clone(),
            coeffs,
        }
    }

    pub fn zero(domain: &ModuleSpace, codomain: &ModuleSpace) -> Result<Self> {
        let coeffs = vec![
            AlgebraElement::zero(domain.descriptor().clone());
            domain.rank() * codomain.rank()
        ];
        Self::from_coeffs(domain.clone(), codomain.clone(), coeffs)
    }

    /// Operator with independent Gaussian coefficient entries.
    pub fn random_gaussian<R: Rng + ?Sized>(
        domain: &ModuleSpace,
        codomain: &ModuleSpace,
        rng: &mut R,
    ) -> Result<Self> {
        let coeffs = (0..domain.rank() * codomain.rank())
            .map(|_| AlgebraElement::random_gaussian(domain.descriptor(), rng))
            .collect();
        Self::from_coeffs(domain.clone(), codomain.clone(), coeffs)
    }

    /// Random invertible operator with singular values in `[1/2, 2]` per
    /// block, so the condition number never exceeds 4.
    pub fn random_invertible<R: Rng + ?Sized>(space: &ModuleSpace, rng: &mut R) -> Self {
        let n = space.rank();
        let mats = space
            .descriptor()
            .block_sizes()
            .iter()
            .map(|&k| {
                let dim = n * k;
                let u = haar_unitary(dim, rng);
                let v = haar_unitary(dim, rng);
                let d = CMatrix::from_fn(dim, dim, |i, j| {
                    if i == j {
                        C64::new(0.5 + 1.5 * rng.gen::<f64>(), 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
                u * d * v.adjoint()
            })
            .collect::<Vec<_>>();
        Self::from_block_realizations(space, space, &mats).expect("consistent dims")
    }

    /// Unitary operator with Haar-distributed block realizations; satisfies
    /// `U*U = UU* = id` and preserves all inner products.
    pub fn random_unitary<R: Rng + ?Sized>(space: &ModuleSpace, rng: &mut R) -> Self {
        let n = space.rank();
        let mats = space
            .descriptor()
            .block_sizes()
            .iter()
            .map(|&k| haar_unitary(n * k, rng))
            .collect::<Vec<_>>();
        Self::from_block_realizations(space, space, &mats).expect("consistent dims")
    }

    pub fn domain(&self) -> &ModuleSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &ModuleSpace {
        &self.codomain
    }

    pub fn coeff(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.coeffs[i * self.codomain.rank() + j]
    }

    pub fn coeffs(&self) -> &[AlgebraElement] {
        &self.coeffs
    }

    /// `T(x)_j = Σᵢ xᵢ·C_{ij}`.
    pub fn apply(&self, x: &ModuleElement) -> Result<ModuleElement> {
        if x.space() != &self.domain {
            return Err(Error::SpaceMismatch);
        }
        let m = self.codomain.rank();
        let mut entries = Vec::with_capacity(m);
        for j in 0..m {
            let mut acc = AlgebraElement::zero(self.domain.descriptor().clone());
            for i in 0..self.domain.rank() {
                acc = acc.checked_add(&x.entry(i).checked_mul(self.coeff(i, j))?)?;
            }
            entries.push(acc);
        }
        ModuleElement::from_entries(self.codomain.clone(), entries)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.codomain != self.domain {
            return Err(Error::SpaceMismatch);
        }
        let n = other.domain.rank();
        let mid = self.domain.rank();
        let p = self.codomain.rank();
        let mut coeffs = Vec::with_capacity(n * p);
        for i in 0..n {
            for l in 0..p {
                let mut acc = AlgebraElement::zero(self.domain.descriptor().clone());
                for j in 0..mid {
                    acc = acc.checked_add(&other.coeff(i, j).checked_mul(self.coeff(j, l))?)?;
                }
                coeffs.push(acc);
            }
        }
        Self::from_coeffs(other.domain.clone(), self.codomain.clone(), coeffs)
    }

    /// The adjoint `T*` with `⟨T(x), y⟩ = ⟨x, T*(y)⟩`: coefficients
    /// `C*_{ji} = (C_{ij})*`.
    pub fn adjoint(&self) -> Self {
        let n = self.domain.rank();
        let m = self.codomain.rank();
        let mut coeffs = Vec::with_capacity(n * m);
        for j in 0..m {
            for i in 0..n {
                coeffs.push(self.coeff(i, j).adjoint());
            }
        }
        Self {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            coeffs,
        }
    }

    /// Per-block complex matrix acting on block-coordinate rows; the
    /// ℂ-realization of the operator is `k` copies of it per block `b`.
    pub fn block_realizations(&self) -> Vec<CMatrix> {
        let n = self.domain.rank();
        let m = self.codomain.rank();
        self.domain
            .descriptor()
            .block_sizes()
            .iter()
            .enumerate()
            .map(|(b, &k)| {
                CMatrix::from_fn(n * k, m * k, |row, col| {
                    let (i, s) = (row / k, row % k);
                    let (j, t) = (col / k, col % k);
                    self.coeff(i, j).block(b)[(s, t)]
                })
            })
            .collect()
    }

    pub fn from_block_realizations(
        domain: &ModuleSpace,
        codomain: &ModuleSpace,
        mats: &[CMatrix],
    ) -> Result<Self> {
        if domain.descriptor() != codomain.descriptor()
            || mats.len() != domain.descriptor().num_blocks()
        {
            return Err(Error::InvalidOperand);
        }
        let n = domain.rank();
        let m = codomain.rank();
        for (b, &k) in domain.descriptor().block_sizes().iter().enumerate() {
            if mats[b].nrows() != n * k || mats[b].ncols() != m * k {
                return Err(Error::InvalidOperand);
            }
        }
        let mut coeffs = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                let blocks = domain
                    .descriptor()
                    .block_sizes()
                    .iter()
                    .enumerate()
                    .map(|(b, &k)| CMatrix::from_fn(k, k, |s, t| mats[b][(i * k + s, j * k + t)]))
                    .collect();
                coeffs.push(AlgebraElement::from_blocks(
                    domain.descriptor().clone(),
                    blocks,
                )?);
            }
        }
        Self::from_coeffs(domain.clone(), codomain.clone(), coeffs)
    }

    /// Largest singular value of the ℂ-matrix realization.
    pub fn op_norm(&self) -> f64 {
        self.block_realizations()
            .iter()
            .map(spectral_norm)
            .fold(0.0, f64::max)
    }

    /// Smallest singular value of the ℂ-matrix realization.
    pub fn smin(&self) -> f64 {
        self.block_realizations()
            .iter()
            .map(smallest_singular_value)
            .fold(f64::INFINITY, f64::min)
    }

    /// Inverse of a square, well-conditioned operator.
    pub fn invert(&self) -> Result<Self> {
        if self.domain != self.codomain {
            return Err(Error::SpaceMismatch);
        }
        let norm = self.op_norm();
        let smin = self.smin();
        if smin < 1e-10 * norm || norm == 0.0 {
            return Err(Error::Singular { smin, norm });
        }
        let inv: Vec<CMatrix> = self
            .block_realizations()
            .into_iter()
            .map(|m| m.try_inverse().ok_or(Error::Singular { smin, norm }))
            .collect::<Result<_>>()?;
        Self::from_block_realizations(&self.domain, &self.codomain, &inv)
    }

    /// Multiply by a central element: `(γ·T)(x) = γ·T(x)`.
    pub fn scale_central(&self, gamma: &crate::algebra::CentralElement) -> Result<Self> {
        if gamma.descriptor() != self.domain.descriptor() {
            return Err(Error::InvalidOperand);
        }
        let g = gamma.embed();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| g.checked_mul(c).expect("same descriptor"))
            .collect();
        Ok(Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, z: C64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.scale(z)).collect();
        Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            coeffs,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::SpaceMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(b).expect("same descriptor"))
            .collect();
        Ok(Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Largest coefficient distance to another operator.
    pub fn coeff_distance(&self, other: &Self) -> Result<f64> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::SpaceMismatch);
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_sub(b).expect("same descriptor").norm())
            .fold(0.0, f64::max))
    }

    /// The same operator as a dense matrix on ℂ-coordinates.
    pub fn realize(&self) -> GeneralLinearMap {
        GeneralLinearMap::from_operator(self)
    }
}

// ---------------------------------------------------------------------------
// general linear maps
// ---------------------------------------------------------------------------

/// An arbitrary ℂ-linear map between the canonical coordinates of two module
/// spaces; not necessarily local or A-linear.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralLinearMap {
    domain: ModuleSpace,
    codomain: ModuleSpace,
    matrix: CMatrix,
}

/// Violation found by the locality sampler: a pair with `a·x = 0` but
/// `a·L(x) ≠ 0`.
#[derive(Clone, Debug)]
pub struct LocalityWitness {
    pub a: AlgebraElement,
    pub x: ModuleElement,
    pub violation: f64,
    pub bound: f64,
}

/// Result of sampling the locality (or A-linearity) predicate.
#[derive(Clone, Debug)]
pub struct SampledPredicate {
    pub holds: bool,
    pub trials: usize,
    pub witness: Option<LocalityWitness>,
}

impl GeneralLinearMap {
    pub fn from_matrix(
        domain: ModuleSpace,
        codomain: ModuleSpace,
        matrix: CMatrix,
    ) -> Result<Self> {
        if matrix.nrows() != codomain.complex_dim() || matrix.ncols() != domain.complex_dim() {
            return Err(Error::InvalidOperand);
        }
        Ok(Self {
            domain,
            codomain,
            matrix,
        })
    }

    /// Dense realization of a module operator: columns are the coordinates of
    /// the images of the canonical basis.
    pub fn from_operator(op: &ModuleOperator) -> Self {
        let basis = op.domain().canonical_basis();
        let mut matrix = CMatrix::zeros(op.codomain().complex_dim(), op.domain().complex_dim());
        for (p, b) in basis.iter().enumerate() {
            let img = op.apply(b).expect("basis in domain").to_coords();
            matrix.set_column(p, &img);
        }
        Self {
            domain: op.domain().clone(),
            codomain: op.codomain().clone(),
            matrix,
        }
    }

    pub fn domain(&self) -> &ModuleSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &ModuleSpace {
        &self.codomain
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &ModuleElement) -> Result<ModuleElement> {
        if x.space() != &self.domain {
            return Err(Error::SpaceMismatch);
        }
        let coords = &self.matrix * x.to_coords();
        ModuleElement::from_coords(&self.codomain, &coords)
    }

    pub fn op_norm(&self) -> f64 {
        spectral_norm(&self.matrix)
    }

    /// Reconstruct a coefficient array from the images of the generators and
    /// certify it reproduces the map on the whole canonical basis.
    ///
    /// The reconstruction exists exactly when the map is A-linear; otherwise
    /// the basis check fails with the worst-discrepancy element.
    pub fn promote(&self) -> Result<ModuleOperator> {
        let n = self.domain.rank();
        let m = self.codomain.rank();
        let mut coeffs = Vec::with_capacity(n * m);
        for g in self.domain.generators() {
            let img = self.apply(&g)?;
            for j in 0..m {
                coeffs.push(img.entry(j).clone());
            }
        }
        let candidate =
            ModuleOperator::from_coeffs(self.domain.clone(), self.codomain.clone(), coeffs)?;
        let scale = 1.0 + self.op_norm();
        let mut worst = (0usize, 0.0_f64);
        for (p, b) in self.domain.canonical_basis().iter().enumerate() {
            let got = candidate.apply(b)?;
            let want = self.apply(b)?;
            let d = got.checked_sub(&want)?.norm();
            if d > worst.1 {
                worst = (p, d);
            }
        }
        if worst.1 > 1e-9 * scale {
            return Err(Error::NotALinear {
                basis_index: worst.0,
                discrepancy: worst.1,
            });
        }
        Ok(candidate)
    }

    /// Sample the locality predicate `a·x = 0 ⟹ a·L(x) = 0`.
    ///
    /// Each trial forces a singular coefficient `a = b·(1 − p)` (`p` a random
    /// nonzero projection), projects a random `z` onto the kernel of
    /// left-multiplication by `a` via the pseudoinverse, confirms `a·x = 0`,
    /// and then measures `‖a·L(x)‖` against `tol·(1 + ‖a‖‖L(x)‖)`.
    pub fn is_local(&self, trials: usize, seed: u64) -> SampledPredicate {
        let desc = self.domain.descriptor().clone();
        let tol = 1e-9;
        for t in 0..trials {
            let mut rng = ChaCha12Rng::seed_from_u64(subseed(seed, "local-trial", t as u64));
            let b = AlgebraElement::random_gaussian(&desc, &mut rng);
            // nonzero projection: at least rank one in a chosen block
            let chosen = rng.gen_range(0..desc.num_blocks());
            let mut p = AlgebraElement::zero(desc.clone());
            for (bi, &k) in desc.block_sizes().iter().enumerate() {
                let lo = if bi == chosen { 1 } else { 0 };
                let rank = rng.gen_range(lo..=k);
                p.blocks_mut()[bi] = haar_projection(k, rank, &mut rng);
            }
            let one_minus_p = AlgebraElement::identity(desc.clone())
                .checked_sub(&p)
                .expect("same descriptor");
            let a = b.checked_mul(&one_minus_p).expect("same descriptor");
            // x = (1 − a⁺a)·z entrywise lies in the kernel of a·
            let kernel_proj = AlgebraElement::identity(desc.clone())
                .checked_sub(&a.pseudo_inverse().checked_mul(&a).expect("same descriptor"))
                .expect("same descriptor");
            let mut x = None;
            for _ in 0..8 {
                let z = self.domain.random_element(&mut rng);
                let cand = z.left_mul(&kernel_proj).expect("same descriptor");
                if cand.norm() > 1e-8 * (1.0 + z.norm()) {
                    x = Some(cand);
                    break;
                }
            }
            let Some(x) = x else { continue };
            let ax = x.left_mul(&a).expect("same descriptor");
            if ax.norm() > 1e-10 * (1.0 + a.norm() * x.norm()) {
                // kernel projection failed; not a valid sample
                continue;
            }
            let lx = match self.apply(&x) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let alx = lx.left_mul(&a).expect("same descriptor");
            let bound = tol * (1.0 + a.norm() * lx.norm());
            if alx.norm() > bound {
                return SampledPredicate {
                    holds: false,
                    trials: t + 1,
                    witness: Some(LocalityWitness {
                        a,
                        x,
                        violation: alx.norm(),
                        bound,
                    }),
                };
            }
        }
        SampledPredicate {
            holds: true,
            trials,
            witness: None,
        }
    }

    /// Sample the A-linearity identity `L(a·x) = a·L(x)` on random pairs.
    pub fn is_a_linear(&self, trials: usize, seed: u64) -> SampledPredicate {
        let desc = self.domain.descriptor().clone();
        let tol = 1e-9;
        for t in 0..trials {
            let mut rng = ChaCha12Rng::seed_from_u64(subseed(seed, "alinear-trial", t as u64));
            let a = AlgebraElement::random_gaussian(&desc, &mut rng);
            let x = self.domain.random_element(&mut rng);
            let lhs = match self.apply(&x.left_mul(&a).expect("same descriptor")) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let rhs = self
                .apply(&x)
                .expect("domain checked")
                .left_mul(&a)
                .expect("same descriptor");
            let diff = lhs.checked_sub(&rhs).expect("same space").norm();
            let bound = tol * (1.0 + a.norm()) * (1.0 + x.norm()) * (1.0 + self.op_norm());
            if diff > bound {
                return SampledPredicate {
                    holds: false,
                    trials: t + 1,
                    witness: Some(LocalityWitness {
                        a,
                        x,
                        violation: diff,
                        bound,
                    }),
                };
            }
        }
        SampledPredicate {
            holds: true,
            trials,
            witness: None,
        }
    }
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraDescriptor, CentralElement};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn space() -> ModuleSpace {
        ModuleSpace::new(AlgebraDescriptor::new(vec![3, 2]).unwrap(), 3).unwrap()
    }

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn identity_acts_as_identity() {
        let sp = space();
        let id = ModuleOperator::identity(&sp);
        let x = sp.random_element(&mut rng(1));
        let y = id.apply(&x).unwrap();
        assert!(y.checked_sub(&x).unwrap().norm() <= 1e-14 * (1.0 + x.norm()));
        assert!((id.op_norm() - 1.0).abs() <= 1e-12);
        assert!((id.smin() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn operators_are_module_linear() {
        let sp = space();
        let mut r = rng(2);
        let t = ModuleOperator::random_gaussian(&sp, &sp, &mut r).unwrap();
        for _ in 0..20 {
            let a = AlgebraElement::random_gaussian(sp.descriptor(), &mut r);
            let x = sp.random_element(&mut r);
            let lhs = t.apply(&x.left_mul(&a).unwrap()).unwrap();
            let rhs = t.apply(&x).unwrap().left_mul(&a).unwrap();
            let scale = (1.0 + a.norm()) * (1.0 + x.norm()) * (1.0 + t.op_norm());
            assert!(lhs.checked_sub(&rhs).unwrap().norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn composition_matches_pointwise_application() {
        let sp = space();
        let mut r = rng(3);
        let t = ModuleOperator::random_gaussian(&sp, &sp, &mut r).unwrap();
        let u = ModuleOperator::random_gaussian(&sp, &sp, &mut r).unwrap();
        let tu = t.compose(&u).unwrap();
        for _ in 0..50 {
            let x = sp.random_element(&mut r);
            let direct = tu.apply(&x).unwrap();
            let nested = t.apply(&u.apply(&x).unwrap()).unwrap();
            let scale = (1.0 + t.op_norm()) * (1.0 + u.op_norm()) * (1.0 + x.norm());
            assert!(direct.checked_sub(&nested).unwrap().norm() <= 1e-11 * scale);
        }
    }

    #[test]
    fn adjoint_identity_on_canonical_basis() {
        let sp = space();
        let mut r = rng(4);
        let t = ModuleOperator::random_gaussian(&sp, &sp, &mut r).unwrap();
        let ts = t.adjoint();
        assert_eq!(
            ModuleOperator::identity(&sp).adjoint(),
            ModuleOperator::identity(&sp)
        );
        // ⟨T(b_p), b_q⟩ = ⟨b_p, T*(b_q)⟩ over the full basis
        let basis = sp.canonical_basis();
        let t_imgs: Vec<_> = basis.iter().map(|b| t.apply(b).unwrap()).collect();
        let ts_imgs: Vec<_> = basis.iter().map(|b| ts.apply(b).unwrap()).collect();
        let scale = 1.0 + t.op_norm();
        for (p, bp) in basis.iter().enumerate() {
            for (q, bq) in basis.iter().enumerate() {
                let lhs = t_imgs[p].inner_product(bq).unwrap();
                let rhs = bp.inner_product(&ts_imgs[q]).unwrap();
                assert!(lhs.checked_sub(&rhs).unwrap().norm() <= 1e-12 * scale);
            }
        }
        // (T*)* = T coefficient-wise
        assert!(ts.adjoint().coeff_distance(&t).unwrap() <= 1e-13 * scale);
    }

    #[test]
    fn invert_produces_residual_inverse() {
        let sp = space();
        let mut r = rng(5);
        let id = ModuleOperator::identity(&sp);
        assert!(id.invert().unwrap().coeff_distance(&id).unwrap() <= 1e-12);

        let two = id.scale(C64::new(2.0, 0.0));
        let half = two.invert().unwrap();
        assert!(half.coeff_distance(&id.scale(C64::new(0.5, 0.0))).unwrap() <= 1e-12);

        for _ in 0..10 {
            let t = ModuleOperator::random_invertible(&sp, &mut r);
            let tinv = t.invert().unwrap();
            let prod = t.compose(&tinv).unwrap();
            assert!(prod.coeff_distance(&id).unwrap() <= 1e-10);
            let prod2 = tinv.compose(&t).unwrap();
            assert!(prod2.coeff_distance(&id).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn invert_rejects_singular_operators() {
        let sp = space();
        let z = ModuleOperator::zero(&sp, &sp).unwrap();
        assert!(matches!(z.invert(), Err(Error::Singular { .. })));
    }

    #[test]
    fn block_realization_round_trip() {
        let sp = space();
        let mut r = rng(6);
        let t = ModuleOperator::random_gaussian(&sp, &sp, &mut r).unwrap();
        let mats = t.block_realizations();
        let back = ModuleOperator::from_block_realizations(&sp, &sp, &mats).unwrap();
        assert!(back.coeff_distance(&t).unwrap() <= 1e-15);
    }

    #[test]
    fn op_norm_respects_adjoint_and_unitaries() {
        let sp = space();
        let mut r = rng(7);
        let t = ModuleOperator::random_gaussian(&sp, &sp, &mut r).unwrap();
        assert!((t.adjoint().op_norm() - t.op_norm()).abs() <= 1e-11 * (1.0 + t.op_norm()));
        let u = ModuleOperator::random_unitary(&sp, &mut r);
        let tu = t.compose(&u).unwrap();
        assert!((tu.op_norm() - t.op_norm()).abs() <= 1e-10 * (1.0 + t.op_norm()));
    }

    #[test]
    fn random_unitary_is_unitary_and_isometric() {
        let sp = space();
        let mut r = rng(8);
        let u = ModuleOperator::random_unitary(&sp, &mut r);
        let id = ModuleOperator::identity(&sp);
        assert!(
            u.adjoint()
                .compose(&u)
                .unwrap()
                .coeff_distance(&id)
                .unwrap()
                <= 1e-11
        );
        assert!(
            u.compose(&u.adjoint())
                .unwrap()
                .coeff_distance(&id)
                .unwrap()
                <= 1e-11
        );
        for _ in 0..50 {
            let x = sp.random_element(&mut r);
            let y = sp.random_element(&mut r);
            let before = x.inner_product(&y).unwrap();
            let after = u
                .apply(&x)
                .unwrap()
                .inner_product(&u.apply(&y).unwrap())
                .unwrap();
            let scale = (1.0 + x.norm()) * (1.0 + y.norm());
            assert!(after.checked_sub(&before).unwrap().norm() <= 1e-11 * scale);
        }
    }

    #[test]
    fn rank_one_module_unitary_comes_from_block_unitary() {
        let sp1 = ModuleSpace::new(AlgebraDescriptor::new(vec![3]).unwrap(), 1).unwrap();
        let u = ModuleOperator::random_unitary(&sp1, &mut rng(9));
        let id = ModuleOperator::identity(&sp1);
        assert!(
            u.adjoint()
                .compose(&u)
                .unwrap()
                .coeff_distance(&id)
                .unwrap()
                <= 1e-11
        );
    }

    #[test]
    fn seeded_operators_are_reproducible() {
        let sp = space();
        let u1 = ModuleOperator::random_unitary(&sp, &mut rng(42));
        let u2 = ModuleOperator::random_unitary(&sp, &mut rng(42));
        assert_eq!(u1, u2);
    }

    #[test]
    fn central_scaling_commutes_with_application() {
        let sp = space();
        let mut r = rng(10);
        let t = ModuleOperator::random_gaussian(&sp, &sp, &mut r).unwrap();
        let gamma = CentralElement::random_invertible(sp.descriptor(), &mut r);
        let gt = t.scale_central(&gamma).unwrap();
        let x = sp.random_element(&mut r);
        let lhs = gt.apply(&x).unwrap();
        let rhs = t.apply(&x).unwrap().left_mul(&gamma.embed()).unwrap();
        let scale = (1.0 + t.op_norm()) * (1.0 + x.norm()) * (1.0 + gamma.norm());
        assert!(lhs.checked_sub(&rhs).unwrap().norm() <= 1e-12 * scale);
    }

    #[test]
    fn promote_round_trips_module_operators() {
        let sp = space();
        let mut r = rng(11);
        let t = ModuleOperator::random_gaussian(&sp, &sp, &mut r).unwrap();
        let promoted = t.realize().promote().unwrap();
        assert!(promoted.coeff_distance(&t).unwrap() <= 1e-13 * (1.0 + t.op_norm()));

        // scalar multiples stay A-linear
        let lt = t.realize();
        let scaled = GeneralLinearMap::from_matrix(
            sp.clone(),
            sp.clone(),
            lt.matrix().map(|z| z * C64::new(0.0, 2.5)),
        )
        .unwrap();
        let promoted = scaled.promote().unwrap();
        assert!(
            promoted
                .coeff_distance(&t.scale(C64::new(0.0, 2.5)))
                .unwrap()
                <= 1e-12
        );
    }

    #[test]
    fn promote_rejects_block_mixing_permutation() {
        // swap one coordinate of block 0 with one of block 1
        let sp = space();
        let dim = sp.complex_dim();
        let mut m = CMatrix::identity(dim, dim);
        let (i, j) = (0usize, 9usize); // first entry of block 0, first of block 1
        m[(i, i)] = C64::new(0.0, 0.0);
        m[(j, j)] = C64::new(0.0, 0.0);
        m[(i, j)] = C64::new(1.0, 0.0);
        m[(j, i)] = C64::new(1.0, 0.0);
        let l = GeneralLinearMap::from_matrix(sp.clone(), sp, m).unwrap();
        assert!(matches!(l.promote(), Err(Error::NotALinear { .. })));
        let verdict = l.is_a_linear(100, 7);
        assert!(!verdict.holds);
        assert!(verdict.witness.is_some());
    }

    #[test]
    fn module_operators_are_local_and_a_linear() {
        let sp = space();
        let mut r = rng(12);
        for _ in 0..3 {
            let t = ModuleOperator::random_gaussian(&sp, &sp, &mut r).unwrap();
            let l = t.realize();
            assert!(l.is_local(100, 5).holds);
            assert!(l.is_a_linear(50, 6).holds);
        }
        // zero map is local
        let z = ModuleOperator::zero(&sp, &sp).unwrap().realize();
        assert!(z.is_local(50, 8).holds);
    }

    #[test]
    fn polarization_reconstructs_operator_pairings() {
        // polarize(v ↦ ⟨T(v), S(v)⟩, x, y) = ⟨T(x), S(y)⟩ for operator pairs
        let sp = space();
        let mut r = rng(20);
        let t = ModuleOperator::random_gaussian(&sp, &sp, &mut r).unwrap();
        let s = ModuleOperator::random_gaussian(&sp, &sp, &mut r).unwrap();
        for _ in 0..50 {
            let x = sp.random_element(&mut r);
            let y = sp.random_element(&mut r);
            let rec = crate::module::polarize(|v| t.apply(v)?.inner_product(&s.apply(v)?), &x, &y)
                .unwrap();
            let direct = t
                .apply(&x)
                .unwrap()
                .inner_product(&s.apply(&y).unwrap())
                .unwrap();
            let scale = (1.0 + t.op_norm() * s.op_norm()) * (1.0 + x.norm() + y.norm()).powi(2);
            assert!(rec.checked_sub(&direct).unwrap().norm() <= 1e-11 * scale);
        }
    }

    #[test]
    fn functional_times_vector_map_is_not_local() {
        // L(x) = φ(x)·v with a generic functional φ: kills no kernel
        let sp = space();
        let mut r = rng(13);
        let v = sp.random_element(&mut r).to_coords();
        let dim = sp.complex_dim();
        let phi = CMatrix::from_fn(1, dim, |_, _| crate::algebra::gaussian_complex(&mut r));
        let m = &v * phi;
        let l = GeneralLinearMap::from_matrix(sp.clone(), sp, m).unwrap();
        let verdict = l.is_local(100, 9);
        assert!(
            !verdict.holds,
            "rank-one functional map should fail locality"
        );
        let w = verdict.witness.unwrap();
        // witness re-verifies: a·x = 0 but a·L(x) is large
        let ax = w.x.left_mul(&w.a).unwrap();
        assert!(ax.norm() <= 1e-9 * (1.0 + w.a.norm() * w.x.norm()));
        assert!(w.violation > w.bound);
    }
}
