//! The free Hilbert module `E = Aⁿ` with its algebra-valued inner product.
//!
//! The inner product is `⟨x, y⟩ = Σᵢ xᵢ·yᵢ*`: linear and A-linear in the
//! first variable, conjugate-linear in the second, positive, and definite.
//! The module carries an algebra-valued absolute value `|x| = ⟨x, x⟩^{1/2}`
//! and the scalar norm `‖x‖ = ‖⟨x, x⟩‖^{1/2}`.
//!
//! Orthogonality `⟨x, y⟩ = 0` admits several equivalent reformulations in
//! terms of the absolute value — reflection equalities `|x − ay| = |x + ay|`
//! and dominance inequalities `|x| ≤ |x + ay|` — which
//! [`check_orthogonality_equivalences`] tests on sampled coefficients, with
//! [`orthogonality_witness`] producing the explicit violating coefficient
//! `a = ⟨x, y⟩` for non-orthogonal pairs.
//!
//! Compression by a minimal projection `e` maps `eE` onto an ordinary complex
//! Hilbert space with inner product `tr⟨·,·⟩`; on that subspace
//! `⟨x, y⟩ = tr(⟨x, y⟩)·e` and the two norms agree, which is the bridge that
//! lifts Hilbert-space arguments to the module.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::algebra::{AlgebraDescriptor, AlgebraElement, CMatrix, CVector, C64};
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// spaces and elements
// ---------------------------------------------------------------------------

/// The free module `Aⁿ` over a fixed algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpace {
    descriptor: AlgebraDescriptor,
    rank: usize,
}

impl ModuleSpace {
    pub fn new(descriptor: AlgebraDescriptor, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidDescriptor(
                "module rank must be positive".into(),
            ));
        }
        Ok(Self { descriptor, rank })
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Complex dimension of the space: `rank · Σ kᵢ²`.
    pub fn complex_dim(&self) -> usize {
        self.rank * self.descriptor.complex_dim()
    }

    /// Canonical ℂ-basis: a matrix unit in one slot, zero elsewhere.
    /// Ordered slot-major, then block, then row-major within the block.
    pub fn canonical_basis(&self) -> Vec<ModuleElement> {
        let mut out = Vec::with_capacity(self.complex_dim());
        for slot in 0..self.rank {
            for unit in self.descriptor.matrix_units() {
                let mut entries = vec![AlgebraElement::zero(self.descriptor.clone()); self.rank];
                entries[slot] = unit;
                out.push(ModuleElement {
                    space: self.clone(),
                    entries,
                });
            }
        }
        out
    }

    /// The generators `gᵢ = (0, …, 1_A, …, 0)`.
    pub fn generators(&self) -> Vec<ModuleElement> {
        (0..self.rank)
            .map(|slot| {
                let mut entries = vec![AlgebraElement::zero(self.descriptor.clone()); self.rank];
                entries[slot] = AlgebraElement::identity(self.descriptor.clone());
                ModuleElement {
                    space: self.clone(),
                    entries,
                }
            })
            .collect()
    }

    pub fn zero(&self) -> ModuleElement {
        ModuleElement {
            space: self.clone(),
            entries: vec![AlgebraElement::zero(self.descriptor.clone()); self.rank],
        }
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> ModuleElement {
        let entries = (0..self.rank)
            .map(|_| AlgebraElement::random_gaussian(&self.descriptor, rng))
            .collect();
        ModuleElement {
            space: self.clone(),
            entries,
        }
    }

    /// The module is full: inner products of canonical basis elements span the
    /// whole algebra as a complex vector space. Verified by an exact rank
    /// computation on the span.
    pub fn verify_fullness(&self) -> bool {
        let dim = self.descriptor.complex_dim();
        let units = self.descriptor.matrix_units();
        let sp1 = ModuleSpace::new(self.descriptor.clone(), 1).expect("rank 1");
        let mut gram = CMatrix::zeros(dim, dim);
        for p in &units {
            for q in &units {
                let xp = ModuleElement::from_entries(sp1.clone(), vec![p.clone()]).expect("rank 1");
                let xq = ModuleElement::from_entries(sp1.clone(), vec![q.clone()]).expect("rank 1");
                let prod = xp.inner_product(&xq).expect("same space");
                let v = vectorize_algebra(&prod);
                gram += &v * v.adjoint();
            }
        }
        let (vals, _) = crate::algebra::hermitian_eigen(&gram);
        let max = vals.iter().fold(0.0_f64, |a, &b| a.max(b));
        let rank = vals.iter().filter(|&&v| v > 1e-10 * max.max(1.0)).count();
        rank == dim
    }
}

pub(crate) fn vectorize_algebra(a: &AlgebraElement) -> CVector {
    let dim = a.descriptor().complex_dim();
    let mut v = CVector::zeros(dim);
    let mut idx = 0;
    for m in a.blocks() {
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                v[idx] = m[(r, c)];
                idx += 1;
            }
        }
    }
    v
}

/// An element of `Aⁿ`: one algebra element per slot.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleElement {
    space: ModuleSpace,
    entries: Vec<AlgebraElement>,
}

impl ModuleElement {
    pub fn from_entries(space: ModuleSpace, entries: Vec<AlgebraElement>) -> Result<Self> {
        if entries.len() != space.rank() {
            return Err(Error::SpaceMismatch);
        }
        for e in &entries {
            if e.descriptor() != space.descriptor() {
                return Err(Error::SpaceMismatch);
            }
        }
        Ok(Self { space, entries })
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }

    pub fn entry(&self, slot: usize) -> &AlgebraElement {
        &self.entries[slot]
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// `⟨x, y⟩ = Σᵢ xᵢ·yᵢ*` — A-linear in the first variable.
    pub fn inner_product(&self, other: &Self) -> Result<AlgebraElement> {
        self.same_space(other)?;
        let mut acc = AlgebraElement::zero(self.space.descriptor().clone());
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc = acc.checked_add(&a.checked_mul(&b.adjoint())?)?;
        }
        Ok(acc)
    }

    /// The algebra-valued absolute value `|x| = ⟨x, x⟩^{1/2}`.
    pub fn abs_value(&self) -> Result<AlgebraElement> {
        self.inner_product(self)?.psd_sqrt()
    }

    /// Scalar norm `‖x‖ = ‖⟨x, x⟩‖^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.inner_product(self).expect("same space").norm().sqrt()
    }

    /// Left action of the algebra: `(a·x)ᵢ = a·xᵢ`.
    pub fn left_mul(&self, a: &AlgebraElement) -> Result<Self> {
        if a.descriptor() != self.space.descriptor() {
            return Err(Error::InvalidOperand);
        }
        let entries = self
            .entries
            .iter()
            .map(|e| a.checked_mul(e).expect("descriptor checked"))
            .collect();
        Ok(Self {
            space: self.space.clone(),
            entries,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(b).expect("descriptor checked"))
            .collect();
        Ok(Self {
            space: self.space.clone(),
            entries,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_sub(b).expect("descriptor checked"))
            .collect();
        Ok(Self {
            space: self.space.clone(),
            entries,
        })
    }

    pub fn scale(&self, z: C64) -> Self {
        let entries = self.entries.iter().map(|e| e.scale(z)).collect();
        Self {
            space: self.space.clone(),
            entries,
        }
    }

    /// Plain orthogonality: `‖⟨x, y⟩‖ ≤ tol·(1 + ‖x‖‖y‖)`.
    pub fn is_orthogonal(&self, other: &Self, tol: f64) -> Result<bool> {
        let ip = self.inner_product(other)?;
        Ok(ip.norm() <= tol * (1.0 + self.norm() * other.norm()))
    }

    /// θ-orthogonality: `‖⟨x, y⟩‖ ≤ θ·‖x‖‖y‖`. The inequality is evaluated
    /// exactly on computed norms; only θ = 0 falls back to the tolerance form.
    pub fn is_theta_orthogonal(&self, other: &Self, theta: f64) -> Result<bool> {
        if !(0.0..1.0).contains(&theta) {
            return Err(Error::InvalidTheta(theta));
        }
        if theta == 0.0 {
            return self.is_orthogonal(other, crate::algebra::EQ_TOL);
        }
        let ip = self.inner_product(other)?;
        Ok(ip.norm() <= theta * self.norm() * other.norm())
    }

    /// Coordinates with respect to the canonical basis ordering of the space.
    pub fn to_coords(&self) -> CVector {
        let dim = self.space.complex_dim();
        let adim = self.space.descriptor().complex_dim();
        let mut v = CVector::zeros(dim);
        for (slot, e) in self.entries.iter().enumerate() {
            let sub = vectorize_algebra(e);
            for i in 0..adim {
                v[slot * adim + i] = sub[i];
            }
        }
        v
    }

    pub fn from_coords(space: &ModuleSpace, coords: &CVector) -> Result<Self> {
        if coords.len() != space.complex_dim() {
            return Err(Error::SpaceMismatch);
        }
        let mut entries = Vec::with_capacity(space.rank());
        let mut idx = 0;
        for _ in 0..space.rank() {
            let mut blocks = Vec::with_capacity(space.descriptor().num_blocks());
            for &k in space.descriptor().block_sizes() {
                let mut m = CMatrix::zeros(k, k);
                for r in 0..k {
                    for c in 0..k {
                        m[(r, c)] = coords[idx];
                        idx += 1;
                    }
                }
                blocks.push(m);
            }
            entries.push(AlgebraElement::from_blocks(
                space.descriptor().clone(),
                blocks,
            )?);
        }
        Ok(Self {
            space: space.clone(),
            entries,
        })
    }
}

// ---------------------------------------------------------------------------
// orthogonal complements and polarization
// ---------------------------------------------------------------------------

/// Remove from `z` its component along `x`:
/// `y = z − ⟨z, x⟩·⟨x, x⟩⁻¹·x`, so that `⟨y, x⟩ = 0`.
///
/// Requires `⟨x, x⟩` to be invertible; callers generating random pairs should
/// resample `x` on [`Error::SingularGram`].
pub fn orthogonalize(z: &ModuleElement, x: &ModuleElement) -> Result<ModuleElement> {
    if z.space() != x.space() {
        return Err(Error::SpaceMismatch);
    }
    let gram = x.inner_product(x)?;
    let gram_inv = gram.hermitian_inverse()?;
    let coeff = z.inner_product(x)?.checked_mul(&gram_inv)?;
    z.checked_sub(&x.left_mul(&coeff)?)
}

/// Reconstruct the off-diagonal values of a sesquilinear form from its
/// diagonal: returns `(1/4)·Σ_{k=0}^{3} iᵏ·q(x + iᵏ·y)`.
///
/// When `q(v) = ⟨T(v), S(v)⟩` for linear maps `T, S`, the result is
/// `⟨T(x), S(y)⟩`.
pub fn polarize<F>(mut q: F, x: &ModuleElement, y: &ModuleElement) -> Result<AlgebraElement>
where
    F: FnMut(&ModuleElement) -> Result<AlgebraElement>,
{
    if x.space() != y.space() {
        return Err(Error::SpaceMismatch);
    }
    let i = C64::new(0.0, 1.0);
    let mut acc = AlgebraElement::zero(x.space().descriptor().clone());
    let mut ik = C64::new(1.0, 0.0);
    for _ in 0..4 {
        let shifted = x.checked_add(&y.scale(ik))?;
        acc = acc.checked_add(&q(&shifted)?.scale(ik))?;
        ik *= i;
    }
    Ok(acc.scale(C64::new(0.25, 0.0)))
}

// ---------------------------------------------------------------------------
// compression along a minimal projection
// ---------------------------------------------------------------------------

/// The image of a module element in the Hilbert space `E_e = eE` attached to
/// a minimal projection `e = η⊗η`.
///
/// Coordinates are `(ηᴴ·xⱼ)` concatenated over the slots; the Hilbert inner
/// product on them equals `tr⟨ex, ey⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompressedVector {
    space: ModuleSpace,
    block: usize,
    eta: CVector,
    coords: CVector,
}

impl CompressedVector {
    pub fn block_index(&self) -> usize {
        self.block
    }

    pub fn coords(&self) -> &CVector {
        &self.coords
    }

    /// Hilbert norm of the compressed vector.
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Rebuild `ex` from the stored coordinates.
    pub fn decompress(&self) -> ModuleElement {
        let k = self.eta.len();
        let mut entries = Vec::with_capacity(self.space.rank());
        for slot in 0..self.space.rank() {
            let mut e = AlgebraElement::zero(self.space.descriptor().clone());
            let row = self.coords.rows(slot * k, k);
            let m = CMatrix::from_fn(k, k, |r, c| self.eta[r] * row[c]);
            e.blocks_mut()[self.block] = m;
            entries.push(e);
        }
        ModuleElement {
            space: self.space.clone(),
            entries,
        }
    }
}

/// Extract the defining unit vector of a minimal projection, with a canonical
/// phase (largest-modulus coordinate made real positive).
fn projection_unit_vector(e: &AlgebraElement) -> Result<(usize, CVector)> {
    let tol = 1e-9 * (1.0 + e.norm());
    let nonzero: Vec<usize> = e
        .blocks()
        .iter()
        .enumerate()
        .filter(|(_, m)| crate::algebra::spectral_norm(m) > tol)
        .map(|(i, _)| i)
        .collect();
    if nonzero.len() != 1 {
        return Err(Error::NotMinimalProjection(format!(
            "support spread over {} blocks",
            nonzero.len()
        )));
    }
    let b = nonzero[0];
    let m = e.block(b);
    if crate::algebra::spectral_norm(&(m * m - m)) > tol {
        return Err(Error::NotMinimalProjection("not idempotent".into()));
    }
    if crate::algebra::spectral_norm(&(m - m.adjoint())) > tol {
        return Err(Error::NotMinimalProjection("not self-adjoint".into()));
    }
    let tr: C64 = (0..m.nrows()).map(|i| m[(i, i)]).sum();
    if (tr - C64::new(1.0, 0.0)).norm() > tol {
        return Err(Error::NotMinimalProjection(format!(
            "rank {} ≠ 1",
            tr.re.round()
        )));
    }
    // any nonzero column of η·ηᴴ is a multiple of η
    let k = m.nrows();
    let (best_col, _) = (0..k)
        .map(|c| (c, (0..k).map(|r| m[(r, c)].norm_sqr()).sum::<f64>()))
        .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
        .expect("nonempty block");
    let mut eta = CVector::from_fn(k, |r, _| m[(r, best_col)]);
    let n = eta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    eta /= C64::new(n, 0.0);
    let (imax, _) = eta
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.norm_sqr()))
        .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
        .expect("nonempty");
    let phase = eta[imax] / eta[imax].norm();
    eta /= phase;
    Ok((b, eta))
}

/// Compress `x` into the Hilbert space attached to the minimal projection `e`.
pub fn compress(e: &AlgebraElement, x: &ModuleElement) -> Result<CompressedVector> {
    if e.descriptor() != x.space().descriptor() {
        return Err(Error::InvalidOperand);
    }
    let (block, eta) = projection_unit_vector(e)?;
    let k = eta.len();
    let mut coords = CVector::zeros(x.space().rank() * k);
    for (slot, entry) in x.entries().iter().enumerate() {
        let m = entry.block(block);
        for c in 0..k {
            // (ηᴴ·x_slot)_c
            coords[slot * k + c] = (0..k).map(|r| eta[r].conj() * m[(r, c)]).sum();
        }
    }
    Ok(CompressedVector {
        space: x.space().clone(),
        block,
        eta,
        coords,
    })
}

/// Scalar inner product on a compression: `[u, v] = Σ uₗ·v̄ₗ`, linear in the
/// first argument to match the module inner product. Equals `tr⟨ex, ey⟩`.
pub fn hilbert_inner(u: &CompressedVector, v: &CompressedVector) -> Result<C64> {
    if u.space != v.space || u.block != v.block {
        return Err(Error::SpaceMismatch);
    }
    Ok(u.coords
        .iter()
        .zip(v.coords.iter())
        .map(|(a, b)| a * b.conj())
        .sum())
}

// ---------------------------------------------------------------------------
// orthogonality equivalence toolkit
// ---------------------------------------------------------------------------

/// Fixed sampling grid for scalar coefficients: 32 points on circles of radius
/// `2ʲ`, `j ∈ {−2, …, 2}`.
pub fn scalar_grid() -> Vec<C64> {
    let mut grid = Vec::with_capacity(160);
    for j in -2i32..=2 {
        let r = 2f64.powi(j);
        for p in 0..32 {
            let phi = std::f64::consts::TAU * (p as f64) / 32.0;
            grid.push(C64::from_polar(r, phi));
        }
    }
    grid
}

/// Outcome of sampling the six orthogonality characterizations on one pair.
///
/// For orthogonal `x, y` all conditions hold:
/// 1. `⟨x, y⟩ = 0`
/// 2. `|x − λy| = |x + λy|` for every scalar λ
/// 3. `|x − ay| = |x + ay|` for every algebra element a
/// 4. `|x|² ≤ |x + λy|²`
/// 5. `|x|² ≤ |x + ay|²`
/// 6. `|x| ≤ |x + ay|`
///
/// Deviations record the worst violation observed per condition (for the
/// dominance conditions, how far the smallest eigenvalue of the difference
/// dips below zero).
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub deviations: [f64; 6],
    pub tolerance: f64,
    pub scalar_samples: usize,
    pub algebra_samples: usize,
}

impl EquivalenceReport {
    pub fn all_pass(&self) -> bool {
        self.deviations.iter().all(|&d| d <= self.tolerance)
    }

    pub fn condition_labels() -> [&'static str; 6] {
        [
            "inner_product_zero",
            "scalar_reflection_equality",
            "algebra_reflection_equality",
            "scalar_square_dominance",
            "algebra_square_dominance",
            "algebra_abs_dominance",
        ]
    }
}

fn psd_equality_gap(u: &AlgebraElement, v: &AlgebraElement) -> f64 {
    u.checked_sub(v).expect("same algebra").norm()
}

/// How far `h ⪰ 0` fails: `max(0, −λ_min(h))`.
fn psd_dominance_gap(h: &AlgebraElement) -> f64 {
    (-h.min_eigenvalue()).max(0.0)
}

/// Sample the six orthogonality characterizations for a pair `x, y`.
///
/// Scalars run over the fixed [`scalar_grid`]; algebra coefficients are
/// `sample_count` seeded Gaussian draws. For genuinely orthogonal pairs every
/// condition holds up to rounding; the report records the worst deviations.
pub fn check_orthogonality_equivalences(
    x: &ModuleElement,
    y: &ModuleElement,
    sample_count: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    if x.space() != y.space() {
        return Err(Error::SpaceMismatch);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let grid = scalar_grid();
    let xn = x.norm();
    let yn = y.norm();
    let mut dev = [0.0_f64; 6];

    dev[0] = x.inner_product(y)?.norm();

    let abs_x = x.abs_value()?;
    let abs_x_sq = x.inner_product(x)?;

    for &lambda in &grid {
        let plus = x.checked_add(&y.scale(lambda))?;
        let minus = x.checked_sub(&y.scale(lambda))?;
        dev[1] = dev[1].max(psd_equality_gap(&minus.abs_value()?, &plus.abs_value()?));
        let diff_sq = plus.inner_product(&plus)?.checked_sub(&abs_x_sq)?;
        dev[3] = dev[3].max(psd_dominance_gap(&diff_sq));
    }

    for _ in 0..sample_count {
        let a = AlgebraElement::random_gaussian(x.space().descriptor(), &mut rng);
        let ay = y.left_mul(&a)?;
        let plus = x.checked_add(&ay)?;
        let minus = x.checked_sub(&ay)?;
        dev[2] = dev[2].max(psd_equality_gap(&minus.abs_value()?, &plus.abs_value()?));
        let diff_sq = plus.inner_product(&plus)?.checked_sub(&abs_x_sq)?;
        dev[4] = dev[4].max(psd_dominance_gap(&diff_sq));
        let diff_abs = plus.abs_value()?.checked_sub(&abs_x)?;
        dev[5] = dev[5].max(psd_dominance_gap(&diff_abs));
    }

    // deviation scale: quadratic conditions grow like (‖x‖ + c·‖y‖)²
    let coeff_bound = 4.0 + 4.0 * (x.space().descriptor().complex_dim() as f64).sqrt();
    let scale = (xn + coeff_bound * yn).powi(2) + 1.0;
    Ok(EquivalenceReport {
        deviations: dev,
        tolerance: 1e-9 * scale,
        scalar_samples: grid.len(),
        algebra_samples: sample_count,
    })
}

/// The explicit witness coefficient `a = ⟨x, y⟩`.
///
/// It satisfies `|x + ay|² − |x − ay|² = 4·⟨x, y⟩⟨y, x⟩`, which is nonzero
/// exactly when `x` and `y` are not orthogonal — so the reflection equality of
/// condition 3 fails at this single coefficient.
pub fn orthogonality_witness(x: &ModuleElement, y: &ModuleElement) -> Result<AlgebraElement> {
    x.inner_product(y)
}

/// The gap `‖|x + ay|² − |x − ay|²‖` at the witness coefficient, together
/// with its closed form `4‖⟨x, y⟩‖²`.
pub fn witness_gap(x: &ModuleElement, y: &ModuleElement) -> Result<(f64, f64)> {
    let a = orthogonality_witness(x, y)?;
    let ay = y.left_mul(&a)?;
    let plus = x.checked_add(&ay)?;
    let minus = x.checked_sub(&ay)?;
    let gap = plus
        .inner_product(&plus)?
        .checked_sub(&minus.inner_product(&minus)?)?
        .norm();
    let closed_form = 4.0 * a.norm().powi(2);
    Ok((gap, closed_form))
}

/// Random element whose Gram `⟨x, x⟩` is invertible, resampling up to 16 times.
pub fn random_element_invertible_gram<R: Rng + ?Sized>(
    space: &ModuleSpace,
    rng: &mut R,
) -> Result<ModuleElement> {
    for _ in 0..16 {
        let x = space.random_element(rng);
        let gram = x.inner_product(&x)?;
        if gram.min_eigenvalue() > 1e-6 * (1.0 + gram.norm()) {
            return Ok(x);
        }
    }
    Err(Error::SingularGram {
        min_eigenvalue: 0.0,
    })
}

/// A seeded orthogonal pair `(x, y)` with `⟨x, y⟩ = 0` and both elements
/// nonzero, built by removing from a random `z` its component along `x`.
///
/// At rank one Gram–Schmidt degenerates (anything orthogonal to an element
/// with invertible Gram is zero), so that case dispatches to
/// [`rank_one_orthogonal_pair`].
pub fn random_orthogonal_pair<R: Rng + ?Sized>(
    space: &ModuleSpace,
    rng: &mut R,
) -> Result<(ModuleElement, ModuleElement)> {
    if space.rank() == 1 {
        return rank_one_orthogonal_pair(space, rng);
    }
    for _ in 0..16 {
        let x = random_element_invertible_gram(space, rng)?;
        let z = space.random_element(rng);
        let y = orthogonalize(&z, &x)?;
        if y.norm() > 1e-6 * z.norm() {
            return Ok((x, y));
        }
    }
    Err(Error::DegenerateSample { attempts: 16 })
}

/// Orthogonal pair in the rank-one module `A¹`, where `⟨x, y⟩ = x·y*` forces
/// complementary supports: `x = a·p` and `y = b·(1 − p)` for a projection `p`
/// that is proper in at least one block.
pub fn rank_one_orthogonal_pair<R: Rng + ?Sized>(
    space: &ModuleSpace,
    rng: &mut R,
) -> Result<(ModuleElement, ModuleElement)> {
    if space.rank() != 1 {
        return Err(Error::SpaceMismatch);
    }
    let desc = space.descriptor().clone();
    for _ in 0..32 {
        let mut p = AlgebraElement::zero(desc.clone());
        for (bi, &k) in desc.block_sizes().iter().enumerate() {
            let rank = rng.gen_range(0..=k);
            p.blocks_mut()[bi] = crate::algebra::haar_projection(k, rank, rng);
        }
        let q = AlgebraElement::identity(desc.clone()).checked_sub(&p)?;
        let a = AlgebraElement::random_gaussian(&desc, rng);
        let b = AlgebraElement::random_gaussian(&desc, rng);
        let x = ModuleElement::from_entries(space.clone(), vec![a.checked_mul(&p)?])?;
        let y = ModuleElement::from_entries(space.clone(), vec![b.checked_mul(&q)?])?;
        if x.norm() > 0.1 && y.norm() > 0.1 {
            return Ok((x, y));
        }
    }
    Err(Error::DegenerateSample { attempts: 32 })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{minimal_projection, HilbertVector};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn space() -> ModuleSpace {
        ModuleSpace::new(AlgebraDescriptor::new(vec![3, 2]).unwrap(), 3).unwrap()
    }

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn inner_product_zero_and_rank_one_cases() {
        let sp = space();
        let mut r = rng(1);
        let y = sp.random_element(&mut r);
        let zero = sp.zero();
        assert_eq!(zero.inner_product(&y).unwrap().norm(), 0.0);

        // at rank one ⟨(a), (b)⟩ = a·b*
        let sp1 = ModuleSpace::new(sp.descriptor().clone(), 1).unwrap();
        let a = AlgebraElement::random_gaussian(sp.descriptor(), &mut r);
        let b = AlgebraElement::random_gaussian(sp.descriptor(), &mut r);
        let xa = ModuleElement::from_entries(sp1.clone(), vec![a.clone()]).unwrap();
        let xb = ModuleElement::from_entries(sp1, vec![b.clone()]).unwrap();
        let ip = xa.inner_product(&xb).unwrap();
        let expected = a.checked_mul(&b.adjoint()).unwrap();
        assert!(ip.checked_sub(&expected).unwrap().norm() <= 1e-13 * (1.0 + expected.norm()));
    }

    #[test]
    fn inner_product_is_module_linear_in_first_argument() {
        let sp = space();
        let mut r = rng(2);
        for _ in 0..50 {
            let a = AlgebraElement::random_gaussian(sp.descriptor(), &mut r);
            let x = sp.random_element(&mut r);
            let y = sp.random_element(&mut r);
            let lhs = x.left_mul(&a).unwrap().inner_product(&y).unwrap();
            let rhs = a.checked_mul(&x.inner_product(&y).unwrap()).unwrap();
            let scale = (1.0 + a.norm()) * (1.0 + x.norm()) * (1.0 + y.norm());
            assert!(lhs.checked_sub(&rhs).unwrap().norm() <= 1e-13 * scale);
        }
    }

    #[test]
    fn inner_product_hermitian_symmetry_and_positivity() {
        let sp = space();
        let mut r = rng(3);
        for _ in 0..200 {
            let x = sp.random_element(&mut r);
            let y = sp.random_element(&mut r);
            let xy = x.inner_product(&y).unwrap();
            let yx = y.inner_product(&x).unwrap();
            assert!(xy.adjoint().checked_sub(&yx).unwrap().norm() <= 1e-12 * (1.0 + xy.norm()));
            let gram = x.inner_product(&x).unwrap();
            assert!(gram.min_eigenvalue() >= -1e-12 * x.norm().powi(2));
        }
    }

    #[test]
    fn space_mismatch_is_reported() {
        let sp = space();
        let other = ModuleSpace::new(sp.descriptor().clone(), 2).unwrap();
        let x = sp.zero();
        let y = other.zero();
        assert!(matches!(x.inner_product(&y), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn abs_value_and_norm() {
        let sp = space();
        let zero = sp.zero();
        assert_eq!(zero.abs_value().unwrap().norm(), 0.0);
        assert_eq!(zero.norm(), 0.0);

        let sp1 = ModuleSpace::new(sp.descriptor().clone(), 1).unwrap();
        let one = ModuleElement::from_entries(
            sp1,
            vec![AlgebraElement::identity(sp.descriptor().clone())],
        )
        .unwrap();
        assert!((one.abs_value().unwrap().norm() - 1.0).abs() <= 1e-12);
        assert!((one.norm() - 1.0).abs() <= 1e-12);

        let mut r = rng(4);
        for _ in 0..20 {
            let x = sp.random_element(&mut r);
            assert!((x.abs_value().unwrap().norm() - x.norm()).abs() <= 1e-10 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn canonical_generators_are_orthogonal() {
        let sp = space();
        let d = sp.descriptor().clone();
        let e1 = ModuleElement::from_entries(
            sp.clone(),
            vec![
                AlgebraElement::matrix_unit(d.clone(), 0, 0, 0).unwrap(),
                AlgebraElement::zero(d.clone()),
                AlgebraElement::zero(d.clone()),
            ],
        )
        .unwrap();
        let e2 = ModuleElement::from_entries(
            sp,
            vec![
                AlgebraElement::zero(d.clone()),
                AlgebraElement::matrix_unit(d.clone(), 0, 0, 0).unwrap(),
                AlgebraElement::zero(d),
            ],
        )
        .unwrap();
        assert!(e1.is_orthogonal(&e2, 1e-12).unwrap());
    }

    #[test]
    fn theta_orthogonality_thresholds() {
        let sp = space();
        let mut r = rng(5);
        let x = sp.random_element(&mut r);
        let y = sp.random_element(&mut r);
        let ratio = x.inner_product(&y).unwrap().norm() / (x.norm() * y.norm());
        assert!(ratio < 1.0, "Cauchy–Schwarz bound violated: {ratio}");
        if ratio + 0.05 < 1.0 {
            assert!(x.is_theta_orthogonal(&y, ratio + 0.05).unwrap());
        }
        if ratio > 0.05 {
            assert!(!x.is_theta_orthogonal(&y, ratio - 0.05).unwrap());
        }
        assert!(matches!(
            x.is_theta_orthogonal(&y, 1.0),
            Err(Error::InvalidTheta(_))
        ));
        assert!(matches!(
            x.is_theta_orthogonal(&y, -0.1),
            Err(Error::InvalidTheta(_))
        ));
    }

    #[test]
    fn cauchy_schwarz_holds_on_samples() {
        let sp = space();
        let mut r = rng(6);
        for _ in 0..100 {
            let x = sp.random_element(&mut r);
            let y = sp.random_element(&mut r);
            let lhs = x.inner_product(&y).unwrap().norm();
            let rhs = x.norm() * y.norm();
            assert!(lhs <= rhs * (1.0 + 1e-12));
        }
    }

    #[test]
    fn orthogonalize_constructs_orthogonal_pairs() {
        let sp = space();
        let mut r = rng(7);
        for _ in 0..50 {
            let (x, y) = random_orthogonal_pair(&sp, &mut r).unwrap();
            let ip = y.inner_product(&x).unwrap().norm();
            assert!(ip <= 1e-11 * (1.0 + y.norm() * x.norm()));
            let ip2 = x.inner_product(&y).unwrap().norm();
            assert!(ip2 <= 1e-11 * (1.0 + y.norm() * x.norm()));
        }
    }

    #[test]
    fn orthogonalize_fixed_points() {
        let sp = space();
        let mut r = rng(8);
        let x = random_element_invertible_gram(&sp, &mut r).unwrap();
        // z = x collapses to zero
        let y = orthogonalize(&x, &x).unwrap();
        assert!(y.norm() <= 1e-10 * x.norm());
        // an already-orthogonal z is unchanged
        let (x2, z) = random_orthogonal_pair(&sp, &mut r).unwrap();
        let y2 = orthogonalize(&z, &x2).unwrap();
        assert!(y2.checked_sub(&z).unwrap().norm() <= 1e-10 * (1.0 + z.norm()));
    }

    #[test]
    fn orthogonalize_rejects_singular_gram() {
        let sp = space();
        let z = sp.random_element(&mut rng(9));
        let x = sp.zero();
        assert!(matches!(
            orthogonalize(&z, &x),
            Err(Error::SingularGram { .. })
        ));
    }

    #[test]
    fn polarization_recovers_inner_product() {
        let sp = space();
        let mut r = rng(10);
        for _ in 0..50 {
            let x = sp.random_element(&mut r);
            let y = sp.random_element(&mut r);
            let rec = polarize(|v| v.inner_product(v), &x, &y).unwrap();
            let direct = x.inner_product(&y).unwrap();
            let scale = (1.0 + x.norm() + y.norm()).powi(2);
            assert!(rec.checked_sub(&direct).unwrap().norm() <= 1e-12 * scale);
        }
        // y = 0 gives 0
        let x = sp.random_element(&mut r);
        let rec = polarize(|v| v.inner_product(v), &x, &sp.zero()).unwrap();
        assert!(rec.norm() <= 1e-12 * (1.0 + x.norm()).powi(2));
    }

    #[test]
    fn fullness_is_witnessed_by_generators() {
        assert!(space().verify_fullness());
        let tiny = ModuleSpace::new(AlgebraDescriptor::new(vec![1]).unwrap(), 1).unwrap();
        assert!(tiny.verify_fullness());
    }

    #[test]
    fn coordinates_round_trip() {
        let sp = space();
        let mut r = rng(11);
        let x = sp.random_element(&mut r);
        let back = ModuleElement::from_coords(&sp, &x.to_coords()).unwrap();
        assert_eq!(x, back);
    }

    #[test]
    fn compression_round_trip_and_norms() {
        let sp = space();
        let mut r = rng(12);
        for block in 0..2 {
            for _ in 0..20 {
                let eta = HilbertVector::random_unit(sp.descriptor(), block, &mut r).unwrap();
                let e = minimal_projection(sp.descriptor(), block, Some(&eta)).unwrap();
                let x = sp.random_element(&mut r);
                let cx = compress(&e, &x).unwrap();
                let ex = x.left_mul(&e).unwrap();
                // decompression reproduces ex, recompression is the identity
                let dec = cx.decompress();
                assert!(dec.checked_sub(&ex).unwrap().norm() <= 1e-11 * (1.0 + ex.norm()));
                let cx2 = compress(&e, &dec).unwrap();
                assert!((cx2.coords() - cx.coords()).map(|z| z.norm()).max() <= 1e-11);
                // Hilbert norm equals module norm of ex
                assert!((cx.norm() - ex.norm()).abs() <= 1e-10 * (1.0 + ex.norm()));
            }
        }
    }

    #[test]
    fn compression_bridge_identities() {
        // On eE the algebra-valued product collapses to its trace times e.
        let sp = space();
        let mut r = rng(13);
        for block in 0..2 {
            for _ in 0..20 {
                let eta = HilbertVector::random_unit(sp.descriptor(), block, &mut r).unwrap();
                let e = minimal_projection(sp.descriptor(), block, Some(&eta)).unwrap();
                let x = sp.random_element(&mut r).left_mul(&e).unwrap();
                let y = sp.random_element(&mut r).left_mul(&e).unwrap();
                let ip = x.inner_product(&y).unwrap();
                let expected = e.scale(ip.trace());
                assert!(ip.checked_sub(&expected).unwrap().norm() <= 1e-11 * (1.0 + ip.norm()));
                // and the compressed inner product matches the trace
                let cx = compress(&e, &x).unwrap();
                let cy = compress(&e, &y).unwrap();
                let hi = hilbert_inner(&cx, &cy).unwrap();
                assert!((hi - ip.trace()).norm() <= 1e-11 * (1.0 + ip.norm()));
            }
        }
    }

    #[test]
    fn compression_scalar_block_is_identity_on_coordinates() {
        let sp = ModuleSpace::new(AlgebraDescriptor::new(vec![1]).unwrap(), 2).unwrap();
        let e = minimal_projection(sp.descriptor(), 0, None).unwrap();
        let x = sp.random_element(&mut rng(14));
        let cx = compress(&e, &x).unwrap();
        assert_eq!(cx.coords().len(), 2);
        for slot in 0..2 {
            assert!((cx.coords()[slot] - x.entry(slot).block(0)[(0, 0)]).norm() <= 1e-15);
        }
    }

    #[test]
    fn compress_rejects_non_minimal_projections() {
        let sp = space();
        let x = sp.random_element(&mut rng(15));
        let id = AlgebraElement::identity(sp.descriptor().clone());
        assert!(matches!(
            compress(&id, &x),
            Err(Error::NotMinimalProjection(_))
        ));
        let mut two_blocks = AlgebraElement::zero(sp.descriptor().clone());
        two_blocks.blocks_mut()[0][(0, 0)] = C64::new(1.0, 0.0);
        two_blocks.blocks_mut()[1][(0, 0)] = C64::new(1.0, 0.0);
        assert!(matches!(
            compress(&two_blocks, &x),
            Err(Error::NotMinimalProjection(_))
        ));
        let half = AlgebraElement::matrix_unit(sp.descriptor().clone(), 0, 0, 0)
            .unwrap()
            .scale(C64::new(0.5, 0.0));
        assert!(matches!(
            compress(&half, &x),
            Err(Error::NotMinimalProjection(_))
        ));
    }

    #[test]
    fn equivalences_hold_for_orthogonal_pairs() {
        let sp = space();
        let mut r = rng(16);
        let (x, y) = random_orthogonal_pair(&sp, &mut r).unwrap();
        let report = check_orthogonality_equivalences(&x, &y, 50, 1234).unwrap();
        assert!(report.all_pass(), "deviations {:?}", report.deviations);
    }

    #[test]
    fn witness_detects_non_orthogonality() {
        let sp = space();
        let mut r = rng(17);
        // x = y ≠ 0: gap is 4‖⟨x,x⟩‖² > 0
        let x = sp.random_element(&mut r);
        let (gap, closed) = witness_gap(&x, &x).unwrap();
        let expected = 4.0 * x.inner_product(&x).unwrap().norm().powi(2);
        assert!((gap - expected).abs() <= 1e-10 * expected);
        assert!((closed - expected).abs() <= 1e-10 * expected);
        assert!(gap > 0.0);

        // random non-orthogonal pairs: gap matches the closed form
        for _ in 0..50 {
            let x = sp.random_element(&mut r);
            let y = sp.random_element(&mut r);
            let (gap, closed) = witness_gap(&x, &y).unwrap();
            assert!((gap - closed).abs() <= 1e-10 * (1.0 + closed));
        }
    }

    #[test]
    fn dominance_conditions_fail_for_non_orthogonal_pairs() {
        // Converse direction: for x ⊥̸ y, coefficients a = −t·⟨x, y⟩ violate
        // the square-dominance condition for small t (the linear term
        // −2t·⟨x,y⟩⟨y,x⟩ dominates), and the absolute-value dominance fails
        // along the same ray.
        let sp = space();
        let mut r = rng(19);
        for _ in 0..20 {
            let x = sp.random_element(&mut r);
            let y = sp.random_element(&mut r);
            let ip = x.inner_product(&y).unwrap();
            if ip.norm() <= 1e-3 * (1.0 + x.norm() * y.norm()) {
                continue;
            }
            let abs_x = x.abs_value().unwrap();
            let abs_x_sq = x.inner_product(&x).unwrap();
            let mut square_violated = false;
            let mut abs_violated = false;
            for j in -6i32..=2 {
                let a = ip.scale(C64::new(-(2f64.powi(j)), 0.0));
                let shifted = x.checked_add(&y.left_mul(&a).unwrap()).unwrap();
                let tol = 1e-9 * (1.0 + x.norm() + a.norm() * y.norm()).powi(2);
                let sq_gap = shifted
                    .inner_product(&shifted)
                    .unwrap()
                    .checked_sub(&abs_x_sq)
                    .unwrap()
                    .min_eigenvalue();
                if sq_gap < -tol {
                    square_violated = true;
                }
                let abs_gap = shifted
                    .abs_value()
                    .unwrap()
                    .checked_sub(&abs_x)
                    .unwrap()
                    .min_eigenvalue();
                if abs_gap < -tol {
                    abs_violated = true;
                }
            }
            assert!(
                square_violated,
                "square dominance survived a non-orthogonal pair"
            );
            assert!(abs_violated, "abs dominance survived a non-orthogonal pair");
        }
    }

    #[test]
    fn naive_unsorted_eigenvalue_comparison_would_regress() {
        // Regression guard for the reflection-equality comparator: the two
        // absolute values agree as positive elements, not as raw matrices, so
        // a strict bitwise comparison is the mutation this protects against.
        let sp = space();
        let mut r = rng(18);
        let (x, y) = random_orthogonal_pair(&sp, &mut r).unwrap();
        let a = AlgebraElement::random_gaussian(sp.descriptor(), &mut r);
        let ay = y.left_mul(&a).unwrap();
        let plus = x.checked_add(&ay).unwrap().abs_value().unwrap();
        let minus = x.checked_sub(&ay).unwrap().abs_value().unwrap();
        assert!(psd_equality_gap(&minus, &plus) <= 1e-8 * (1.0 + plus.norm()).powi(2));
        assert_ne!(minus, plus);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn prop_sesquilinearity(seed in 0u64..1_000_000) {
            let sp = space();
            let mut r = ChaCha12Rng::seed_from_u64(seed);
            let a = AlgebraElement::random_gaussian(sp.descriptor(), &mut r);
            let x = sp.random_element(&mut r);
            let y = sp.random_element(&mut r);
            let z = sp.random_element(&mut r);
            let scale = (1.0 + a.norm()) * (1.0 + x.norm() + z.norm()) * (1.0 + y.norm());

            let additive = x.checked_add(&z).unwrap().inner_product(&y).unwrap();
            let split = x.inner_product(&y).unwrap()
                .checked_add(&z.inner_product(&y).unwrap()).unwrap();
            prop_assert!(additive.checked_sub(&split).unwrap().norm() <= 1e-12 * scale);

            let ax = x.left_mul(&a).unwrap().inner_product(&y).unwrap();
            let a_ip = a.checked_mul(&x.inner_product(&y).unwrap()).unwrap();
            prop_assert!(ax.checked_sub(&a_ip).unwrap().norm() <= 1e-12 * scale);
        }

        #[test]
        fn prop_gram_positive(seed in 0u64..1_000_000) {
            let sp = space();
            let mut r = ChaCha12Rng::seed_from_u64(seed);
            let x = sp.random_element(&mut r);
            let gram = x.inner_product(&x).unwrap();
            prop_assert!(gram.min_eigenvalue() >= -1e-12 * x.norm().powi(2));
        }
    }
}
