//! Arithmetic of finite-dimensional C*-algebras `A = ⊕ᵢ M_{kᵢ}(ℂ)`.
//!
//! Every finite-dimensional C*-algebra is a finite direct sum of full complex
//! matrix blocks, so an [`AlgebraDescriptor`] is just the ordered list of block
//! sizes. A single block realizes the algebra of all operators on a
//! finite-dimensional Hilbert space; several blocks give an algebra with a
//! nontrivial center, one complex scalar per block ([`CentralElement`]).
//! These algebras are unital, so they coincide with their multiplier
//! algebras and central multipliers are just central elements.
//!
//! The one numeric kernel used throughout is the Hermitian eigendecomposition:
//! operator norms come from eigenvalues of `a*a`, positive square roots and
//! pseudoinverses from eigenvalues of the (hermitized) input.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};

/// Complex double-precision scalar.
pub type C64 = Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = DMatrix<C64>;
/// Dense complex vector.
pub type CVector = DVector<C64>;

/// Absolute-plus-relative comparison tolerance used by default.
pub const EQ_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// numeric kernel
// ---------------------------------------------------------------------------

/// One standard normal sample via Box–Muller (keeps the dependency set lean
/// and the draws reproducible for any `Rng`).
pub(crate) fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Complex entry with standard Gaussian real and imaginary parts.
pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(standard_normal(rng), standard_normal(rng))
}

/// Dense matrix of independent standard complex Gaussian entries.
pub fn gaussian_complex_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

pub(crate) fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigendecomposition of a (hermitized) matrix: ascending real eigenvalues
/// and a unitary matrix of eigenvectors.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let se = hermitize(m).symmetric_eigen();
    (se.eigenvalues, se.eigenvectors)
}

/// Largest singular value, computed from the eigenvalues of `m*m`.
pub(crate) fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let (vals, _) = hermitian_eigen(&gram);
    vals.iter()
        .fold(0.0_f64, |acc, &v| acc.max(v))
        .max(0.0)
        .sqrt()
}

/// Smallest singular value, from the same Gram eigenvalues as [`spectral_norm`].
pub(crate) fn smallest_singular_value(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let (vals, _) = hermitian_eigen(&gram);
    vals.iter()
        .fold(f64::INFINITY, |acc, &v| acc.min(v))
        .max(0.0)
        .sqrt()
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// the R diagonal folded back into Q.
pub(crate) fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 1e-300 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random orthogonal projection of the given rank: conjugate a diagonal 0/1
/// matrix by a Haar unitary.
pub(crate) fn haar_projection<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> CMatrix {
    let rank = rank.min(dim);
    let u = haar_unitary(dim, rng);
    let d = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j && i < rank {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    &u * d * u.adjoint()
}

// ---------------------------------------------------------------------------
// descriptor
// ---------------------------------------------------------------------------

/// The algebra `A = M_{k₁}(ℂ) ⊕ … ⊕ M_{k_m}(ℂ)` as its list of block sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDescriptor {
    block_sizes: Vec<usize>,
}

impl AlgebraDescriptor {
    pub fn new(block_sizes: impl Into<Vec<usize>>) -> Result<Self> {
        let block_sizes = block_sizes.into();
        if block_sizes.is_empty() {
            return Err(Error::InvalidDescriptor("no blocks".into()));
        }
        if block_sizes.contains(&0) {
            return Err(Error::InvalidDescriptor("zero block size".into()));
        }
        Ok(Self { block_sizes })
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn num_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    /// Complex vector-space dimension `Σ kᵢ²`.
    pub fn complex_dim(&self) -> usize {
        self.block_sizes.iter().map(|k| k * k).sum()
    }

    /// All canonical matrix units, block by block in row-major order. These
    /// form a ℂ-basis of the algebra.
    pub fn matrix_units(&self) -> Vec<AlgebraElement> {
        let mut out = Vec::with_capacity(self.complex_dim());
        for (b, &k) in self.block_sizes.iter().enumerate() {
            for r in 0..k {
                for c in 0..k {
                    out.push(AlgebraElement::matrix_unit(self.clone(), b, r, c).expect("in range"));
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// algebra elements
// ---------------------------------------------------------------------------

/// A block-diagonal complex matrix: one `kᵢ×kᵢ` block per summand of the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    descriptor: AlgebraDescriptor,
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn from_blocks(descriptor: AlgebraDescriptor, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != descriptor.num_blocks() {
            return Err(Error::InvalidDescriptor(format!(
                "expected {} blocks, got {}",
                descriptor.num_blocks(),
                blocks.len()
            )));
        }
        for (b, m) in blocks.iter().enumerate() {
            let k = descriptor.block_sizes()[b];
            if m.nrows() != k || m.ncols() != k {
                return Err(Error::InvalidDescriptor(format!(
                    "block {b} is {}x{}, expected {k}x{k}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Self { descriptor, blocks })
    }

    pub fn zero(descriptor: AlgebraDescriptor) -> Self {
        let blocks = descriptor
            .block_sizes()
            .iter()
            .map(|&k| CMatrix::zeros(k, k))
            .collect();
        Self { descriptor, blocks }
    }

    pub fn identity(descriptor: AlgebraDescriptor) -> Self {
        let blocks = descriptor
            .block_sizes()
            .iter()
            .map(|&k| CMatrix::identity(k, k))
            .collect();
        Self { descriptor, blocks }
    }

    /// The canonical matrix unit `E_{row,col}` supported in one block.
    pub fn matrix_unit(
        descriptor: AlgebraDescriptor,
        block: usize,
        row: usize,
        col: usize,
    ) -> Result<Self> {
        let m = descriptor.num_blocks();
        if block >= m {
            return Err(Error::BlockOutOfRange {
                index: block,
                blocks: m,
            });
        }
        let k = descriptor.block_sizes()[block];
        if row >= k || col >= k {
            return Err(Error::InvalidDescriptor(format!(
                "entry ({row},{col}) outside {k}x{k} block"
            )));
        }
        let mut e = Self::zero(descriptor);
        e.blocks[block][(row, col)] = C64::new(1.0, 0.0);
        Ok(e)
    }

    /// Element with independent standard complex Gaussian entries.
    pub fn random_gaussian<R: Rng + ?Sized>(descriptor: &AlgebraDescriptor, rng: &mut R) -> Self {
        let blocks = descriptor
            .block_sizes()
            .iter()
            .map(|&k| CMatrix::from_fn(k, k, |_, _| gaussian_complex(rng)))
            .collect();
        Self {
            descriptor: descriptor.clone(),
            blocks,
        }
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub(crate) fn blocks_mut(&mut self) -> &mut [CMatrix] {
        &mut self.blocks
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.descriptor == other.descriptor {
            Ok(())
        } else {
            Err(Error::InvalidOperand)
        }
    }

    fn zip_blocks(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        self.same_algebra(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Self {
            descriptor: self.descriptor.clone(),
            blocks,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| a - b)
    }

    /// Blockwise matrix product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| a * b)
    }

    pub fn scale(&self, z: C64) -> Self {
        let blocks = self.blocks.iter().map(|m| m.map(|v| v * z)).collect();
        Self {
            descriptor: self.descriptor.clone(),
            blocks,
        }
    }

    /// Blockwise conjugate transpose — the involution of the algebra.
    pub fn adjoint(&self) -> Self {
        let blocks = self.blocks.iter().map(|m| m.adjoint()).collect();
        Self {
            descriptor: self.descriptor.clone(),
            blocks,
        }
    }

    /// C*-norm: the largest singular value over all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(spectral_norm).fold(0.0, f64::max)
    }

    /// Sum of the complex diagonal over all blocks.
    pub fn trace(&self) -> C64 {
        self.blocks
            .iter()
            .map(|m| (0..m.nrows()).map(|i| m[(i, i)]).sum::<C64>())
            .sum()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    /// Deviation from being Hermitian, as `‖a − a*‖`.
    pub fn hermitian_deviation(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| spectral_norm(&(m - m.adjoint())))
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of the hermitized element, blockwise, ascending within each block.
    pub fn hermitian_eigenvalues(&self) -> Vec<Vec<f64>> {
        self.blocks
            .iter()
            .map(|m| {
                let (vals, _) = hermitian_eigen(m);
                let mut v: Vec<f64> = vals.iter().copied().collect();
                v.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
                v
            })
            .collect()
    }

    /// Smallest eigenvalue of the hermitized element over all blocks.
    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues()
            .iter()
            .flat_map(|v| v.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// Positive square root of a Hermitian positive-semidefinite element.
    ///
    /// Eigenvalues in `[-tol_psd, 0)` are treated as rounding dust and clamped
    /// to zero; anything below `-tol_psd` is rejected.
    pub fn psd_sqrt(&self) -> Result<Self> {
        let scale = 1.0 + self.norm();
        let tol_herm = 1e-9 * scale;
        let tol_psd = 1e-9 * scale;
        let dev = self.hermitian_deviation();
        if dev > tol_herm {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for m in &self.blocks {
            let (vals, vecs) = hermitian_eigen(m);
            if let Some(&min) = vals
                .iter()
                .filter(|v| **v < -tol_psd)
                .min_by(|a, b| a.partial_cmp(b).expect("finite"))
            {
                return Err(Error::NotPositive {
                    min_eigenvalue: min,
                });
            }
            let d = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
                if i == j {
                    C64::new(vals[i].max(0.0).sqrt(), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            blocks.push(&vecs * d * vecs.adjoint());
        }
        Ok(Self {
            descriptor: self.descriptor.clone(),
            blocks,
        })
    }

    /// Inverse of a Hermitian element, via its eigendecomposition.
    pub fn hermitian_inverse(&self) -> Result<Self> {
        let scale = 1.0 + self.norm();
        let dev = self.hermitian_deviation();
        if dev > 1e-9 * scale {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        let mut min_abs = f64::INFINITY;
        for m in &self.blocks {
            let (vals, vecs) = hermitian_eigen(m);
            for v in vals.iter() {
                min_abs = min_abs.min(v.abs());
            }
            if vals.iter().any(|v| v.abs() <= 1e-12 * scale) {
                return Err(Error::SingularGram {
                    min_eigenvalue: min_abs,
                });
            }
            let d = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
                if i == j {
                    C64::new(1.0 / vals[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            blocks.push(&vecs * d * vecs.adjoint());
        }
        Ok(Self {
            descriptor: self.descriptor.clone(),
            blocks,
        })
    }

    /// Moore–Penrose pseudoinverse with singular-value cutoff `1e-10·σ_max`.
    /// Unlike the norms, this goes through an SVD: the cutoff classifies
    /// kernel directions, and squared eigenvalues of `a*a` only resolve
    /// singular values down to `√ε·σ_max`.
    pub fn pseudo_inverse(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|m| {
                let svd = m.clone().svd(true, true);
                let smax = svd.singular_values.iter().fold(0.0_f64, |a, &v| a.max(v));
                if smax <= 0.0 {
                    return CMatrix::zeros(m.nrows(), m.ncols());
                }
                let u = svd.u.as_ref().expect("u requested");
                let vt = svd.v_t.as_ref().expect("v_t requested");
                let k = svd.singular_values.len();
                let sig_pinv = CMatrix::from_fn(k, k, |i, j| {
                    let s = svd.singular_values[i];
                    if i == j && s > 1e-10 * smax {
                        C64::new(1.0 / s, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
                vt.adjoint() * sig_pinv * u.adjoint()
            })
            .collect();
        Self {
            descriptor: self.descriptor.clone(),
            blocks,
        }
    }

    /// First matrix unit that fails to commute with the element, if any.
    /// Commutation against every canonical matrix unit is a finite, exact test
    /// of centrality.
    pub fn centrality_violation(&self, tol: f64) -> Option<(usize, usize, usize)> {
        for (b, &k) in self.descriptor.block_sizes().iter().enumerate() {
            for r in 0..k {
                for c in 0..k {
                    let mut e = CMatrix::zeros(k, k);
                    e[(r, c)] = C64::new(1.0, 0.0);
                    let comm = &self.blocks[b] * &e - e * &self.blocks[b];
                    if spectral_norm(&comm) > tol {
                        return Some((b, r, c));
                    }
                }
            }
        }
        None
    }

    /// Whether the element commutes with the whole algebra.
    pub fn is_central(&self, tol: f64) -> bool {
        self.centrality_violation(tol).is_none()
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_add(rhs).expect("descriptor mismatch in +")
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_sub(rhs).expect("descriptor mismatch in -")
    }
}

impl std::ops::Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_mul(rhs).expect("descriptor mismatch in *")
    }
}

impl std::ops::Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(C64::new(-1.0, 0.0))
    }
}

// ---------------------------------------------------------------------------
// central elements
// ---------------------------------------------------------------------------

/// An element of the center `Z(A)`: one complex scalar per block.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralElement {
    descriptor: AlgebraDescriptor,
    scalars: Vec<C64>,
}

impl CentralElement {
    pub fn new(descriptor: AlgebraDescriptor, scalars: Vec<C64>) -> Result<Self> {
        if scalars.len() != descriptor.num_blocks() {
            return Err(Error::InvalidDescriptor(format!(
                "expected {} scalars, got {}",
                descriptor.num_blocks(),
                scalars.len()
            )));
        }
        Ok(Self {
            descriptor,
            scalars,
        })
    }

    pub fn zero(descriptor: AlgebraDescriptor) -> Self {
        let scalars = vec![C64::new(0.0, 0.0); descriptor.num_blocks()];
        Self {
            descriptor,
            scalars,
        }
    }

    pub fn one(descriptor: AlgebraDescriptor) -> Self {
        let scalars = vec![C64::new(1.0, 0.0); descriptor.num_blocks()];
        Self {
            descriptor,
            scalars,
        }
    }

    /// Random central element with all scalars bounded away from zero
    /// (moduli in `[0.5, 2]`, uniform phases).
    pub fn random_invertible<R: Rng + ?Sized>(descriptor: &AlgebraDescriptor, rng: &mut R) -> Self {
        let scalars = (0..descriptor.num_blocks())
            .map(|_| {
                let modulus = 0.5 + 1.5 * rng.gen::<f64>();
                let phase = std::f64::consts::TAU * rng.gen::<f64>();
                C64::from_polar(modulus, phase)
            })
            .collect();
        Self {
            descriptor: descriptor.clone(),
            scalars,
        }
    }

    /// Random central element with unimodular scalars.
    pub fn random_unimodular<R: Rng + ?Sized>(descriptor: &AlgebraDescriptor, rng: &mut R) -> Self {
        let scalars = (0..descriptor.num_blocks())
            .map(|_| C64::from_polar(1.0, std::f64::consts::TAU * rng.gen::<f64>()))
            .collect();
        Self {
            descriptor: descriptor.clone(),
            scalars,
        }
    }

    /// Random central element with real scalars of modulus in `[0.5, 2]`.
    pub fn random_real_invertible<R: Rng + ?Sized>(
        descriptor: &AlgebraDescriptor,
        rng: &mut R,
    ) -> Self {
        let scalars = (0..descriptor.num_blocks())
            .map(|_| {
                let modulus = 0.5 + 1.5 * rng.gen::<f64>();
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                C64::new(sign * modulus, 0.0)
            })
            .collect();
        Self {
            descriptor: descriptor.clone(),
            scalars,
        }
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn scalars(&self) -> &[C64] {
        &self.scalars
    }

    /// Embed as the block-diagonal element `(γ₁ I_{k₁}, …, γ_m I_{k_m})`.
    pub fn embed(&self) -> AlgebraElement {
        let blocks = self
            .descriptor
            .block_sizes()
            .iter()
            .zip(&self.scalars)
            .map(|(&k, &g)| CMatrix::identity(k, k).map(|v| v * g))
            .collect();
        AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            descriptor: self.descriptor.clone(),
            scalars: self.scalars.iter().map(|g| g.conj()).collect(),
        }
    }

    /// Principal square root per scalar.
    pub fn sqrt(&self) -> Self {
        Self {
            descriptor: self.descriptor.clone(),
            scalars: self.scalars.iter().map(|g| g.sqrt()).collect(),
        }
    }

    pub fn try_inverse(&self) -> Result<Self> {
        let mut scalars = Vec::with_capacity(self.scalars.len());
        for g in &self.scalars {
            if g.norm() <= 1e-14 {
                return Err(Error::Singular {
                    smin: g.norm(),
                    norm: self.norm(),
                });
            }
            scalars.push(C64::new(1.0, 0.0) / g);
        }
        Ok(Self {
            descriptor: self.descriptor.clone(),
            scalars,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.descriptor != other.descriptor {
            return Err(Error::InvalidOperand);
        }
        let scalars = self
            .scalars
            .iter()
            .zip(&other.scalars)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Self {
            descriptor: self.descriptor.clone(),
            scalars,
        })
    }

    pub fn norm(&self) -> f64 {
        self.scalars.iter().map(|g| g.norm()).fold(0.0, f64::max)
    }

    /// Largest pointwise distance to another central element.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.descriptor != other.descriptor {
            return Err(Error::InvalidOperand);
        }
        Ok(self
            .scalars
            .iter()
            .zip(&other.scalars)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

// ---------------------------------------------------------------------------
// Hilbert-space vectors and rank-one operators
// ---------------------------------------------------------------------------

/// A vector of the Hilbert space underlying one block; used to build rank-one
/// operators `η⊗ζ` inside that block.
#[derive(Clone, Debug, PartialEq)]
pub struct HilbertVector {
    descriptor: AlgebraDescriptor,
    block: usize,
    coords: CVector,
}

impl HilbertVector {
    pub fn new(descriptor: AlgebraDescriptor, block: usize, coords: Vec<C64>) -> Result<Self> {
        let m = descriptor.num_blocks();
        if block >= m {
            return Err(Error::BlockOutOfRange {
                index: block,
                blocks: m,
            });
        }
        let k = descriptor.block_sizes()[block];
        if coords.len() != k {
            return Err(Error::InvalidDescriptor(format!(
                "vector of length {} in a {k}-dimensional block",
                coords.len()
            )));
        }
        Ok(Self {
            descriptor,
            block,
            coords: CVector::from_vec(coords),
        })
    }

    /// Standard basis vector `e_index` of the block.
    pub fn standard_basis(
        descriptor: AlgebraDescriptor,
        block: usize,
        index: usize,
    ) -> Result<Self> {
        let k = *descriptor
            .block_sizes()
            .get(block)
            .ok_or(Error::BlockOutOfRange {
                index: block,
                blocks: descriptor.num_blocks(),
            })?;
        if index >= k {
            return Err(Error::InvalidDescriptor(format!(
                "index {index} outside block of size {k}"
            )));
        }
        let mut coords = vec![C64::new(0.0, 0.0); k];
        coords[index] = C64::new(1.0, 0.0);
        Self::new(descriptor, block, coords)
    }

    /// Haar-distributed unit vector: normalized complex Gaussian.
    pub fn random_unit<R: Rng + ?Sized>(
        descriptor: &AlgebraDescriptor,
        block: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let k = *descriptor
            .block_sizes()
            .get(block)
            .ok_or(Error::BlockOutOfRange {
                index: block,
                blocks: descriptor.num_blocks(),
            })?;
        loop {
            let coords: Vec<C64> = (0..k).map(|_| gaussian_complex(rng)).collect();
            let n = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n > 1e-8 {
                let coords = coords.into_iter().map(|z| z / n).collect();
                return Self::new(descriptor.clone(), block, coords);
            }
        }
    }

    pub fn block_index(&self) -> usize {
        self.block
    }

    pub fn coords(&self) -> &CVector {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 1e-300 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            descriptor: self.descriptor.clone(),
            block: self.block,
            coords: self.coords.map(|z| z / n),
        })
    }
}

/// The rank-one operator `η⊗ζ`, acting as `ξ ↦ [ξ, ζ]·η` inside its block and
/// zero elsewhere.
pub fn rank_one(eta: &HilbertVector, zeta: &HilbertVector) -> Result<AlgebraElement> {
    if eta.descriptor != zeta.descriptor {
        return Err(Error::InvalidOperand);
    }
    if eta.block != zeta.block {
        return Err(Error::BlockMismatch(eta.block, zeta.block));
    }
    let mut out = AlgebraElement::zero(eta.descriptor.clone());
    let k = eta.coords.len();
    let m = CMatrix::from_fn(k, k, |i, j| eta.coords[i] * zeta.coords[j].conj());
    out.blocks[eta.block] = m;
    Ok(out)
}

/// A minimal projection `η⊗η` supported in the given block. `None` picks the
/// canonical `E₁₁`; a vector is normalized first.
pub fn minimal_projection(
    descriptor: &AlgebraDescriptor,
    block: usize,
    eta: Option<&HilbertVector>,
) -> Result<AlgebraElement> {
    match eta {
        None => {
            let e = HilbertVector::standard_basis(descriptor.clone(), block, 0)?;
            rank_one(&e, &e)
        }
        Some(v) => {
            if v.block != block {
                return Err(Error::BlockMismatch(v.block, block));
            }
            let unit = v.normalized()?;
            rank_one(&unit, &unit)
        }
    }
}

/// A random symmetry `u = 2p − 1` for a random orthogonal projection `p` in
/// each block; satisfies `u = u*` and `u² = 1`.
pub fn random_symmetry<R: Rng + ?Sized>(
    descriptor: &AlgebraDescriptor,
    rng: &mut R,
) -> AlgebraElement {
    let blocks = descriptor
        .block_sizes()
        .iter()
        .map(|&k| {
            let rank = rng.gen_range(0..=k);
            let p = haar_projection(k, rank, rng);
            p.scale(2.0) - CMatrix::identity(k, k)
        })
        .collect();
    AlgebraElement {
        descriptor: descriptor.clone(),
        blocks,
    }
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
