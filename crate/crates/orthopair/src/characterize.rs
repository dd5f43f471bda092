//! Central-multiplier extraction and the preservation decision procedure.
//!
//! For an orthogonality-preserving pair `(T, S)` the identity
//! `⟨T(x), S(y)⟩ = γ·⟨x, y⟩` holds for a central element γ, one complex
//! scalar per block of the algebra. Extraction follows the compression
//! construction: for a minimal projection `e` the map `x ↦ tr⟨T(ex), S(ex)⟩`
//! is a scalar multiple `γ_e` of `tr⟨ex, ex⟩`, and all projections of one
//! block must agree on that scalar. The per-projection estimates are averaged
//! into γ and their spread is reported; disagreement beyond tolerance proves
//! the pair is not preserving.
//!
//! Because `(x, y) ↦ ⟨T(x), S(y)⟩ − γ⟨x, y⟩` is sesquilinear, it vanishes
//! everywhere iff it vanishes on all pairs of canonical basis elements, so
//! [`verify_characterization`] decides the identity by a finite enumeration.
//! [`decide_preserving`] combines both with a seeded witness search for the
//! refuting case and never converts a failed search into a verdict silently.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::algebra::{minimal_projection, CentralElement, HilbertVector, C64};
use crate::error::{Error, Result};
use crate::module::{random_orthogonal_pair, ModuleElement};
use crate::operators::ModuleOperator;
use crate::subseed;

/// Scale factor of the extraction and characterization tolerances.
pub const CHAR_TOL: f64 = 1e-8;
/// Ratio `‖⟨Tx, Sy⟩‖ / (‖Tx‖·‖Sy‖)` above which an orthogonal pair counts as
/// a preservation violation.
pub const WITNESS_RATIO: f64 = 1e-7;
/// Operator norm below which a map is treated as the zero map.
pub const ZERO_OP_TOL: f64 = 1e-12;

/// One scalar estimate `γ_e = tr⟨T(ex), S(ex)⟩ / tr⟨ex, ex⟩` at a minimal
/// projection.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionGamma {
    pub block: usize,
    /// `"canonical"` for `E₁₁`, `"random-i"` for the sampled projections.
    pub label: String,
    pub value: C64,
}

/// γ together with its per-projection diagnostics.
#[derive(Clone, Debug)]
pub struct GammaExtraction {
    pub gamma: CentralElement,
    pub per_projection: Vec<ProjectionGamma>,
    /// Largest within-block disagreement between projection estimates.
    pub spread: f64,
    pub tolerance: f64,
}

/// A certified characterization: γ, the basis-pair residual, and diagnostics.
#[derive(Clone, Debug)]
pub struct CharacterizationResult {
    pub gamma: CentralElement,
    /// `max_{p,q} ‖⟨T(b_p), S(b_q)⟩ − γ⟨b_p, b_q⟩‖` over canonical basis pairs.
    pub residual: f64,
    /// Residual threshold below which the pair is certified preserving.
    pub tolerance: f64,
    pub per_projection: Vec<ProjectionGamma>,
    /// Independent least-squares estimate of γ over the same basis pairs.
    pub lsq_gamma: CentralElement,
}

/// An orthogonal pair whose images fail orthogonality.
#[derive(Clone, Debug)]
pub struct Witness {
    pub x: ModuleElement,
    pub y: ModuleElement,
    /// `‖⟨x, y⟩‖` — re-verifiably tiny.
    pub orthogonality: f64,
    /// `‖⟨T(x), S(y)⟩‖` — re-verifiably above the threshold.
    pub violation: f64,
    pub threshold: f64,
}

/// Outcome of the preservation decision.
#[derive(Clone, Debug)]
pub enum Verdict {
    /// The pair satisfies `⟨T(x), S(y)⟩ = γ⟨x, y⟩` within tolerance.
    Preserving(CharacterizationResult),
    /// An explicit orthogonal pair with non-orthogonal images.
    NotPreserving(Witness),
    /// One of the maps is zero; the other is arbitrary and γ = 0.
    ZeroPair,
    /// Characterization failed but no witness was found within the budget.
    Inconclusive {
        residual: Option<f64>,
        attempts: usize,
    },
}

impl Verdict {
    pub fn is_preserving(&self) -> bool {
        matches!(self, Verdict::Preserving(_) | Verdict::ZeroPair)
    }
}

fn check_pair(t: &ModuleOperator, s: &ModuleOperator) -> Result<()> {
    if t.domain() != s.domain() || t.codomain() != s.codomain() {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

/// Tolerances used by the decision procedure; the defaults are the pinned
/// crate-wide values, the CLI `--tol` flag can override them.
#[derive(Clone, Copy, Debug)]
pub struct DecisionTolerances {
    /// Scale of the extraction-spread and residual tolerance.
    pub char_tol: f64,
    /// Violation ratio for the witness search.
    pub witness_ratio: f64,
}

impl Default for DecisionTolerances {
    fn default() -> Self {
        Self {
            char_tol: CHAR_TOL,
            witness_ratio: WITNESS_RATIO,
        }
    }
}

/// Extract γ from trace ratios at minimal projections.
///
/// Per block: the canonical projection `E₁₁` plus three random `η⊗η`. For
/// each projection a sample `x` with `‖ex‖ > 0.1·‖x‖` is drawn (resampling up
/// to 32 times), and the estimates must agree within the tolerance — their
/// mean is the block scalar.
pub fn extract_gamma(t: &ModuleOperator, s: &ModuleOperator, seed: u64) -> Result<GammaExtraction> {
    extract_gamma_scaled(t, s, seed, CHAR_TOL)
}

fn extract_gamma_scaled(
    t: &ModuleOperator,
    s: &ModuleOperator,
    seed: u64,
    char_tol: f64,
) -> Result<GammaExtraction> {
    check_pair(t, s)?;
    let space = t.domain().clone();
    let desc = space.descriptor().clone();
    let tolerance = char_tol * (1.0 + t.op_norm() * s.op_norm());

    let mut per_projection = Vec::new();
    let mut scalars = Vec::with_capacity(desc.num_blocks());
    let mut spread = 0.0_f64;

    for b in 0..desc.num_blocks() {
        let mut projections = vec![("canonical".to_string(), minimal_projection(&desc, b, None)?)];
        for i in 0..3 {
            let mut rng =
                ChaCha12Rng::seed_from_u64(subseed(seed, "projection", (b * 8 + i) as u64));
            let eta = HilbertVector::random_unit(&desc, b, &mut rng)?;
            projections.push((
                format!("random-{i}"),
                minimal_projection(&desc, b, Some(&eta))?,
            ));
        }

        let mut estimates = Vec::with_capacity(projections.len());
        for (pi, (label, e)) in projections.iter().enumerate() {
            let mut found = None;
            for attempt in 0..32u64 {
                let mut rng = ChaCha12Rng::seed_from_u64(subseed(
                    seed,
                    "sample",
                    ((b * 8 + pi) as u64) << 8 | attempt,
                ));
                let x = space.random_element(&mut rng);
                let ex = x.left_mul(e)?;
                if ex.norm() > 0.1 * x.norm() {
                    found = Some(ex);
                    break;
                }
            }
            let ex = found.ok_or(Error::DegenerateSample { attempts: 32 })?;
            let num = t.apply(&ex)?.inner_product(&s.apply(&ex)?)?.trace();
            let den = ex.inner_product(&ex)?.trace();
            let gamma_e = num / den;
            estimates.push(gamma_e);
            per_projection.push(ProjectionGamma {
                block: b,
                label: label.clone(),
                value: gamma_e,
            });
        }

        let mut block_spread = 0.0_f64;
        for i in 0..estimates.len() {
            for j in (i + 1)..estimates.len() {
                block_spread = block_spread.max((estimates[i] - estimates[j]).norm());
            }
        }
        if block_spread > tolerance {
            return Err(Error::InconsistentGamma {
                spread: block_spread,
                tolerance,
            });
        }
        spread = spread.max(block_spread);
        let mean = estimates.iter().sum::<C64>() / C64::new(estimates.len() as f64, 0.0);
        scalars.push(mean);
    }

    Ok(GammaExtraction {
        gamma: CentralElement::new(desc, scalars)?,
        per_projection,
        spread,
        tolerance,
    })
}

/// Maximal deviation `‖⟨T(b_p), S(b_q)⟩ − γ⟨b_p, b_q⟩‖` over all canonical
/// basis pairs of the domain. By sesquilinearity this is zero (up to float
/// tolerance) iff the characterization identity holds on the whole module.
pub fn verify_characterization(
    t: &ModuleOperator,
    s: &ModuleOperator,
    gamma: &CentralElement,
) -> Result<f64> {
    check_pair(t, s)?;
    if gamma.descriptor() != t.domain().descriptor() {
        return Err(Error::InvalidOperand);
    }
    let basis = t.domain().canonical_basis();
    let t_imgs: Vec<ModuleElement> = basis.iter().map(|b| t.apply(b)).collect::<Result<_>>()?;
    let s_imgs: Vec<ModuleElement> = basis.iter().map(|b| s.apply(b)).collect::<Result<_>>()?;
    let g = gamma.embed();
    let mut residual = 0.0_f64;
    for (p, bp) in basis.iter().enumerate() {
        for (q, bq) in basis.iter().enumerate() {
            let lhs = t_imgs[p].inner_product(&s_imgs[q])?;
            let rhs = g.checked_mul(&bp.inner_product(bq)?)?;
            residual = residual.max(lhs.checked_sub(&rhs)?.norm());
        }
    }
    Ok(residual)
}

/// Least-squares fit of γ over canonical basis pairs, blockwise in the
/// Frobenius inner product. Kept as an independent cross-check of the
/// trace-ratio extraction.
pub fn least_squares_gamma(t: &ModuleOperator, s: &ModuleOperator) -> Result<CentralElement> {
    check_pair(t, s)?;
    let desc = t.domain().descriptor().clone();
    let basis = t.domain().canonical_basis();
    let t_imgs: Vec<ModuleElement> = basis.iter().map(|b| t.apply(b)).collect::<Result<_>>()?;
    let s_imgs: Vec<ModuleElement> = basis.iter().map(|b| s.apply(b)).collect::<Result<_>>()?;
    let m = desc.num_blocks();
    let mut num = vec![C64::new(0.0, 0.0); m];
    let mut den = vec![0.0_f64; m];
    for (p, bp) in basis.iter().enumerate() {
        for (q, bq) in basis.iter().enumerate() {
            let target = t_imgs[p].inner_product(&s_imgs[q])?;
            let gram = bp.inner_product(bq)?;
            for b in 0..m {
                let gm = gram.block(b);
                let tm = target.block(b);
                for r in 0..gm.nrows() {
                    for c in 0..gm.ncols() {
                        num[b] += gm[(r, c)].conj() * tm[(r, c)];
                        den[b] += gm[(r, c)].norm_sqr();
                    }
                }
            }
        }
    }
    let scalars = num
        .into_iter()
        .zip(den)
        .map(|(n, d)| {
            if d > 0.0 {
                n / C64::new(d, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    CentralElement::new(desc, scalars)
}

/// Decide whether `(T, S)` preserves orthogonality.
///
/// Zero maps short-circuit to [`Verdict::ZeroPair`]. Otherwise γ is extracted
/// and the characterization residual computed; on failure a seeded search
/// over constructed orthogonal pairs looks for an explicit witness (512
/// attempts). A failed search is reported as [`Verdict::Inconclusive`].
pub fn decide_preserving(t: &ModuleOperator, s: &ModuleOperator, seed: u64) -> Result<Verdict> {
    decide_preserving_with(t, s, seed, &DecisionTolerances::default())
}

/// [`decide_preserving`] with explicit tolerances.
pub fn decide_preserving_with(
    t: &ModuleOperator,
    s: &ModuleOperator,
    seed: u64,
    tols: &DecisionTolerances,
) -> Result<Verdict> {
    check_pair(t, s)?;
    if t.op_norm() <= ZERO_OP_TOL || s.op_norm() <= ZERO_OP_TOL {
        return Ok(Verdict::ZeroPair);
    }

    let mut residual_seen = None;
    match extract_gamma_scaled(t, s, subseed(seed, "extract", 0), tols.char_tol) {
        Ok(extraction) => {
            let residual = verify_characterization(t, s, &extraction.gamma)?;
            if residual <= extraction.tolerance {
                let lsq_gamma = least_squares_gamma(t, s)?;
                return Ok(Verdict::Preserving(CharacterizationResult {
                    gamma: extraction.gamma,
                    residual,
                    tolerance: extraction.tolerance,
                    per_projection: extraction.per_projection,
                    lsq_gamma,
                }));
            }
            residual_seen = Some(residual);
        }
        Err(Error::InconsistentGamma { .. }) | Err(Error::DegenerateSample { .. }) => {}
        Err(other) => return Err(other),
    }

    let attempts = 512usize;
    let norm_scale = t.op_norm() * s.op_norm();
    for attempt in 0..attempts {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(seed, "witness", attempt as u64));
        let (x, y) = match random_orthogonal_pair(t.domain(), &mut rng) {
            Ok(pair) => pair,
            Err(Error::SingularGram { .. }) | Err(Error::DegenerateSample { .. }) => continue,
            Err(other) => return Err(other),
        };
        let tx = t.apply(&x)?;
        let sy = s.apply(&y)?;
        let denom = tx.norm() * sy.norm();
        if denom <= 1e-12 * (1.0 + norm_scale * x.norm() * y.norm()) {
            continue;
        }
        let violation = tx.inner_product(&sy)?.norm();
        let threshold = tols.witness_ratio * denom;
        if violation > threshold {
            let orthogonality = x.inner_product(&y)?.norm();
            return Ok(Verdict::NotPreserving(Witness {
                x,
                y,
                orthogonality,
                violation,
                threshold,
            }));
        }
    }
    Ok(Verdict::Inconclusive {
        residual: residual_seen,
        attempts,
    })
}

/// Compare the inner product `⟨x, y⟩₂ := ⟨G(x), y⟩` against the original one.
///
/// `G` must be a positive invertible operator (so `⟨·,·⟩₂` is an equivalent
/// inner product). The two products have the same orthogonality relation iff
/// `G` is a positive central multiple of the identity, decided by running the
/// preservation procedure on the pair `(G, id)`.
pub fn inner_product_comparison(g: &ModuleOperator, seed: u64) -> Result<Verdict> {
    if g.domain() != g.codomain() {
        return Err(Error::SpaceMismatch);
    }
    let herm_dev = g.adjoint().checked_sub(g)?.op_norm();
    if herm_dev > 1e-9 * (1.0 + g.op_norm()) {
        return Err(Error::NotPositive {
            min_eigenvalue: f64::NAN,
        });
    }
    let min_eig = g
        .block_realizations()
        .iter()
        .flat_map(|m| {
            let (vals, _) = crate::algebra::hermitian_eigen(m);
            vals.iter().copied().collect::<Vec<_>>()
        })
        .fold(f64::INFINITY, f64::min);
    if min_eig <= 1e-10 * (1.0 + g.op_norm()) {
        return Err(Error::NotPositive {
            min_eigenvalue: min_eig,
        });
    }
    decide_preserving(g, &ModuleOperator::identity(g.domain()), seed)
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraDescriptor, AlgebraElement};
    use crate::module::ModuleSpace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn space() -> ModuleSpace {
        ModuleSpace::new(AlgebraDescriptor::new(vec![3, 2]).unwrap(), 3).unwrap()
    }

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    /// Preserving pair with known constant: `T = γ·(S*)⁻¹` satisfies
    /// `⟨T(x), S(y)⟩ = γ⟨x, y⟩`.
    fn preserving_pair(
        sp: &ModuleSpace,
        seed: u64,
    ) -> (ModuleOperator, ModuleOperator, CentralElement) {
        let mut r = rng(seed);
        let s = ModuleOperator::random_invertible(sp, &mut r);
        let gamma = CentralElement::random_invertible(sp.descriptor(), &mut r);
        let t = s.adjoint().invert().unwrap().scale_central(&gamma).unwrap();
        (t, s, gamma)
    }

    #[test]
    fn identity_pair_has_unit_gamma() {
        let sp = space();
        let id = ModuleOperator::identity(&sp);
        let extraction = extract_gamma(&id, &id, 1).unwrap();
        let one = CentralElement::one(sp.descriptor().clone());
        assert!(extraction.gamma.distance(&one).unwrap() <= 1e-12);
        assert!(extraction.spread <= 1e-12);
        let residual = verify_characterization(&id, &id, &extraction.gamma).unwrap();
        assert!(residual <= 1e-12);
    }

    #[test]
    fn central_multiple_of_identity_is_recovered() {
        let sp = space();
        let mut r = rng(2);
        let gamma0 = CentralElement::random_invertible(sp.descriptor(), &mut r);
        let id = ModuleOperator::identity(&sp);
        let t = id.scale_central(&gamma0).unwrap();
        let extraction = extract_gamma(&t, &id, 3).unwrap();
        assert!(extraction.gamma.distance(&gamma0).unwrap() <= 1e-10 * (1.0 + gamma0.norm()));
    }

    #[test]
    fn unitary_conjugated_gamma_is_recovered() {
        let sp = space();
        let mut r = rng(4);
        for _ in 0..5 {
            let gamma0 = CentralElement::random_invertible(sp.descriptor(), &mut r);
            let u = ModuleOperator::random_unitary(&sp, &mut r);
            let t = u.scale_central(&gamma0).unwrap();
            let extraction = extract_gamma(&t, &u, 5).unwrap();
            assert!(extraction.gamma.distance(&gamma0).unwrap() <= 1e-9 * (1.0 + gamma0.norm()));
        }
    }

    #[test]
    fn constructed_preserving_pair_certifies() {
        let sp = space();
        for seed in 0..10u64 {
            let (t, s, gamma) = preserving_pair(&sp, seed);
            // cross-projection estimates agree tightly
            let extraction = extract_gamma(&t, &s, seed).unwrap();
            assert!(extraction.spread <= 1e-9 * (1.0 + t.op_norm() * s.op_norm()));
            let verdict = decide_preserving(&t, &s, seed).unwrap();
            match verdict {
                Verdict::Preserving(res) => {
                    let scale = 1.0 + gamma.norm();
                    assert!(
                        res.gamma.distance(&gamma).unwrap() <= 1e-9 * scale,
                        "gamma mismatch: {:?} vs {:?}",
                        res.gamma.scalars(),
                        gamma.scalars()
                    );
                    assert!(res.residual <= res.tolerance);
                    // least-squares cross-check agrees
                    assert!(res.lsq_gamma.distance(&res.gamma).unwrap() <= 1e-8 * scale);
                    // per-projection spread stayed inside tolerance
                    assert_eq!(res.per_projection.len(), 4 * sp.descriptor().num_blocks());
                    // γ is central by construction; tripwire
                    assert!(res.gamma.embed().is_central(1e-12));
                }
                other => panic!("expected preserving, got {other:?}"),
            }
        }
    }

    #[test]
    fn residual_detects_perturbed_gamma() {
        let sp = space();
        let (t, s, gamma) = preserving_pair(&sp, 11);
        let baseline = verify_characterization(&t, &s, &gamma).unwrap();
        assert!(baseline <= 1e-9 * (1.0 + t.op_norm() * s.op_norm()));

        let mut scalars = gamma.scalars().to_vec();
        scalars[0] += C64::new(0.1, 0.0);
        let perturbed = CentralElement::new(sp.descriptor().clone(), scalars).unwrap();
        let residual = verify_characterization(&t, &s, &perturbed).unwrap();
        // canonical basis pairs include ⟨b, b⟩ = E₁₁ of block 0, norm 1
        assert!(residual >= 0.09, "residual {residual}");
    }

    #[test]
    fn zero_pair_short_circuits() {
        let sp = space();
        let z = ModuleOperator::zero(&sp, &sp).unwrap();
        let t = ModuleOperator::random_gaussian(&sp, &sp, &mut rng(12)).unwrap();
        assert!(matches!(
            decide_preserving(&t, &z, 0).unwrap(),
            Verdict::ZeroPair
        ));
        assert!(matches!(
            decide_preserving(&z, &t, 0).unwrap(),
            Verdict::ZeroPair
        ));
        let residual =
            verify_characterization(&z, &z, &CentralElement::zero(sp.descriptor().clone()))
                .unwrap();
        assert!(residual == 0.0);
    }

    #[test]
    fn slot_swap_against_identity_is_refuted() {
        let sp = space();
        let d = sp.descriptor().clone();
        // swap the first two module slots
        let n = sp.rank();
        let mut coeffs = vec![AlgebraElement::zero(d.clone()); n * n];
        coeffs[1] = AlgebraElement::identity(d.clone());
        coeffs[n] = AlgebraElement::identity(d.clone());
        for i in 2..n {
            coeffs[i * n + i] = AlgebraElement::identity(d.clone());
        }
        let swap = ModuleOperator::from_coeffs(sp.clone(), sp.clone(), coeffs).unwrap();
        let id = ModuleOperator::identity(&sp);
        match decide_preserving(&id, &swap, 13).unwrap() {
            Verdict::NotPreserving(w) => {
                // the witness re-verifies
                assert!(w.orthogonality <= 1e-9 * (1.0 + w.x.norm() * w.y.norm()));
                let tx = id.apply(&w.x).unwrap();
                let sy = swap.apply(&w.y).unwrap();
                let violation = tx.inner_product(&sy).unwrap().norm();
                assert!((violation - w.violation).abs() <= 1e-12 * (1.0 + w.violation));
                assert!(violation > w.threshold);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn preserving_verdict_is_sound_on_fresh_pairs() {
        let sp = space();
        let (t, s, _) = preserving_pair(&sp, 14);
        let verdict = decide_preserving(&t, &s, 14).unwrap();
        let Verdict::Preserving(res) = verdict else {
            panic!("expected preserving")
        };
        let g = res.gamma.embed();
        let mut r = rng(15);
        let bound_scale = t.op_norm() * s.op_norm();
        for _ in 0..1000 {
            let x = sp.random_element(&mut r);
            let y = sp.random_element(&mut r);
            let lhs = t
                .apply(&x)
                .unwrap()
                .inner_product(&s.apply(&y).unwrap())
                .unwrap();
            let rhs = g.checked_mul(&x.inner_product(&y).unwrap()).unwrap();
            let err = lhs.checked_sub(&rhs).unwrap().norm();
            assert!(err <= 1e-8 * bound_scale * x.norm() * y.norm());
        }
    }

    #[test]
    fn single_block_gamma_is_one_scalar() {
        let sp = ModuleSpace::new(AlgebraDescriptor::new(vec![3]).unwrap(), 2).unwrap();
        let (t, s, gamma) = {
            let mut r = rng(16);
            let s = ModuleOperator::random_invertible(&sp, &mut r);
            let gamma = CentralElement::random_invertible(sp.descriptor(), &mut r);
            let t = s.adjoint().invert().unwrap().scale_central(&gamma).unwrap();
            (t, s, gamma)
        };
        let extraction = extract_gamma(&t, &s, 17).unwrap();
        assert_eq!(extraction.gamma.scalars().len(), 1);
        assert!(extraction.gamma.distance(&gamma).unwrap() <= 1e-9 * (1.0 + gamma.norm()));
    }

    #[test]
    fn multi_block_gamma_varies_per_block() {
        let sp = space();
        let d = sp.descriptor().clone();
        let gamma0 = CentralElement::new(d, vec![C64::new(2.0, 0.0), C64::new(0.0, -1.0)]).unwrap();
        let id = ModuleOperator::identity(&sp);
        let t = id.scale_central(&gamma0).unwrap();
        let extraction = extract_gamma(&t, &id, 18).unwrap();
        assert!((extraction.gamma.scalars()[0] - C64::new(2.0, 0.0)).norm() <= 1e-10);
        assert!((extraction.gamma.scalars()[1] - C64::new(0.0, -1.0)).norm() <= 1e-10);
    }

    #[test]
    fn inconsistent_pairs_are_detected_before_verification() {
        // a corrupted pair either trips the spread check or the residual
        let sp = space();
        let (t, s, _) = preserving_pair(&sp, 19);
        let mut coeffs = t.coeffs().to_vec();
        let twist = AlgebraElement::matrix_unit(sp.descriptor().clone(), 0, 0, 1)
            .unwrap()
            .scale(C64::new(0.75, 0.0));
        let bump = coeffs[0].checked_mul(&twist).unwrap();
        coeffs[0] = coeffs[0].checked_add(&bump).unwrap();
        let t_bad = ModuleOperator::from_coeffs(sp.clone(), sp.clone(), coeffs).unwrap();
        match decide_preserving(&t_bad, &s, 20).unwrap() {
            Verdict::NotPreserving(w) => {
                assert!(w.violation > w.threshold);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn comparison_accepts_central_scalings() {
        let sp = space();
        let id = ModuleOperator::identity(&sp);
        let two = id.scale(C64::new(2.0, 0.0));
        match inner_product_comparison(&two, 21).unwrap() {
            Verdict::Preserving(res) => {
                for g in res.gamma.scalars() {
                    assert!((g - C64::new(2.0, 0.0)).norm() <= 1e-10);
                }
            }
            other => panic!("expected preserving, got {other:?}"),
        }

        let gamma = CentralElement::new(
            sp.descriptor().clone(),
            vec![C64::new(1.0, 0.0), C64::new(3.0, 0.0)],
        )
        .unwrap();
        let g_op = id.scale_central(&gamma).unwrap();
        match inner_product_comparison(&g_op, 22).unwrap() {
            Verdict::Preserving(res) => {
                assert!(res.gamma.distance(&gamma).unwrap() <= 1e-10 * (1.0 + gamma.norm()));
            }
            other => panic!("expected preserving, got {other:?}"),
        }
    }

    #[test]
    fn comparison_rejects_non_central_positive_operators() {
        let sp = space();
        let d = sp.descriptor().clone();
        let id = ModuleOperator::identity(&sp);
        // id + 0.4·(N + N*) for a non-central nilpotent coefficient
        let n = AlgebraElement::matrix_unit(d.clone(), 0, 0, 1).unwrap();
        let sym = n
            .checked_add(&n.adjoint())
            .unwrap()
            .scale(C64::new(0.4, 0.0));
        let mut coeffs = id.coeffs().to_vec();
        coeffs[0] = coeffs[0].checked_add(&sym).unwrap();
        let g_op = ModuleOperator::from_coeffs(sp.clone(), sp.clone(), coeffs).unwrap();
        match inner_product_comparison(&g_op, 23).unwrap() {
            Verdict::NotPreserving(w) => assert!(w.violation > w.threshold),
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn comparison_rejects_non_positive_operators() {
        let sp = space();
        let id = ModuleOperator::identity(&sp);
        // not Hermitian
        let mut r = rng(24);
        let skew = ModuleOperator::random_gaussian(&sp, &sp, &mut r).unwrap();
        assert!(matches!(
            inner_product_comparison(&skew, 25),
            Err(Error::NotPositive { .. })
        ));
        // Hermitian but indefinite
        let neg = id.scale(C64::new(-1.0, 0.0));
        assert!(matches!(
            inner_product_comparison(&neg, 26),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn rectangular_pairs_between_different_ranks() {
        // T, S: A² → A³ with S an isometric inclusion and T = embed(γ)·S
        let desc = AlgebraDescriptor::new(vec![3, 2]).unwrap();
        let dom = ModuleSpace::new(desc.clone(), 2).unwrap();
        let cod = ModuleSpace::new(desc.clone(), 3).unwrap();
        let mut coeffs = vec![AlgebraElement::zero(desc.clone()); 2 * 3];
        coeffs[0] = AlgebraElement::identity(desc.clone());
        coeffs[3 + 1] = AlgebraElement::identity(desc.clone());
        let s = ModuleOperator::from_coeffs(dom.clone(), cod.clone(), coeffs).unwrap();

        // the inclusion is an isometry
        let mut r = rng(40);
        for _ in 0..10 {
            let x = dom.random_element(&mut r);
            let y = dom.random_element(&mut r);
            let before = x.inner_product(&y).unwrap();
            let after = s
                .apply(&x)
                .unwrap()
                .inner_product(&s.apply(&y).unwrap())
                .unwrap();
            assert!(after.checked_sub(&before).unwrap().norm() <= 1e-13 * (1.0 + before.norm()));
        }

        let gamma = CentralElement::random_invertible(&desc, &mut r);
        let t = s.scale_central(&gamma).unwrap();
        match decide_preserving(&t, &s, 41).unwrap() {
            Verdict::Preserving(res) => {
                assert!(res.gamma.distance(&gamma).unwrap() <= 1e-9 * (1.0 + gamma.norm()));
            }
            other => panic!("expected preserving, got {other:?}"),
        }

        // breaking the second column makes the pair refutable
        let mut bad = t.coeffs().to_vec();
        bad[3 + 1] = AlgebraElement::random_gaussian(&desc, &mut r);
        let t_bad = ModuleOperator::from_coeffs(dom, cod, bad).unwrap();
        match decide_preserving(&t_bad, &s, 42).unwrap() {
            Verdict::NotPreserving(w) => assert!(w.violation > w.threshold),
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn rank_one_module_pairs_decide_correctly() {
        // A¹ over the algebra itself: T, S are right multiplications by w, v,
        // and ⟨T(x), S(y)⟩ = x·(w·v*)·y*, so preservation means w·v* central.
        let sp1 = ModuleSpace::new(AlgebraDescriptor::new(vec![3, 2]).unwrap(), 1).unwrap();
        let mut r = rng(30);

        let s = ModuleOperator::random_invertible(&sp1, &mut r);
        let gamma = CentralElement::random_invertible(sp1.descriptor(), &mut r);
        let t = s.adjoint().invert().unwrap().scale_central(&gamma).unwrap();
        match decide_preserving(&t, &s, 31).unwrap() {
            Verdict::Preserving(res) => {
                assert!(res.gamma.distance(&gamma).unwrap() <= 1e-9 * (1.0 + gamma.norm()));
            }
            other => panic!("expected preserving, got {other:?}"),
        }

        // independent multiplications: w·v* is generically non-central, and
        // the refutation needs rank-one orthogonal pairs (complementary
        // supports) in the witness search
        let w = AlgebraElement::random_gaussian(sp1.descriptor(), &mut r);
        let v = AlgebraElement::random_gaussian(sp1.descriptor(), &mut r);
        let t = ModuleOperator::from_coeffs(sp1.clone(), sp1.clone(), vec![w]).unwrap();
        let s = ModuleOperator::from_coeffs(sp1.clone(), sp1.clone(), vec![v]).unwrap();
        match decide_preserving(&t, &s, 32).unwrap() {
            Verdict::NotPreserving(witness) => {
                assert!(witness.violation > witness.threshold);
                assert!(
                    witness.orthogonality <= 1e-9 * (1.0 + witness.x.norm() * witness.y.norm())
                );
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn extraction_is_deterministic_in_the_seed() {
        let sp = space();
        let (t, s, _) = preserving_pair(&sp, 27);
        let a = extract_gamma(&t, &s, 99).unwrap();
        let b = extract_gamma(&t, &s, 99).unwrap();
        assert_eq!(a.gamma.scalars(), b.gamma.scalars());
        assert_eq!(a.per_projection, b.per_projection);
    }
}
