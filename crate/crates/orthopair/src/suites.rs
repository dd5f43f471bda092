//! Executable property suites, one per verified statement about preserving pairs.
//!
//! Each suite constructs instances on both sides of the statement it checks —
//! preserving pairs built to satisfy the hypothesis, corrupted pairs built to
//! violate it — runs the checks at pinned tolerances, and returns a
//! [`SuiteReport`] with a serialized counterexample payload for every
//! failure. Reports are deterministic functions of the instance parameters
//! and the seed (wall time is kept out of the canonical serialization).

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::algebra::{random_symmetry, AlgebraDescriptor, AlgebraElement, CentralElement, C64};
use crate::characterize::{decide_preserving, extract_gamma, verify_characterization, Verdict};
use crate::error::{Error, Result};
use crate::io::{AlgebraElementDto, FailureDto, ModuleElementDto, SuiteReportDto};
use crate::module::{
    check_orthogonality_equivalences, random_element_invertible_gram, random_orthogonal_pair,
    rank_one_orthogonal_pair, scalar_grid, ModuleElement, ModuleSpace,
};
use crate::operators::ModuleOperator;
use crate::subseed;

// ---------------------------------------------------------------------------
// configuration and reports
// ---------------------------------------------------------------------------

/// Instance parameters shared by all suites.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub blocks: Vec<usize>,
    pub rank: usize,
    pub seed: u64,
    pub cases: usize,
    pub theta1: f64,
    pub theta2: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            blocks: vec![3, 2],
            rank: 3,
            seed: 42,
            cases: 100,
            theta1: 0.1,
            theta2: 0.1,
        }
    }
}

impl SuiteConfig {
    pub fn space(&self) -> Result<ModuleSpace> {
        ModuleSpace::new(AlgebraDescriptor::new(self.blocks.clone())?, self.rank)
    }
}

/// A failed check: what was measured, the pinned threshold, and the
/// serialized inputs needed to reproduce the measurement.
#[derive(Clone, Debug)]
pub struct Failure {
    pub case: String,
    pub measured: f64,
    pub threshold: f64,
    pub inputs: serde_json::Value,
}

/// Outcome of one suite run.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub cases_run: usize,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
    pub wall_ms: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_dto(&self, include_wall: bool) -> SuiteReportDto {
        SuiteReportDto {
            suite: self.suite.clone(),
            blocks: self.config.blocks.clone(),
            rank: self.config.rank,
            seed: self.config.seed,
            cases: self.cases_run,
            passed: self.passed(),
            failures: self
                .failures
                .iter()
                .map(|f| FailureDto {
                    case: f.case.clone(),
                    measured: f.measured,
                    threshold: f.threshold,
                    inputs: f.inputs.clone(),
                })
                .collect(),
            notes: self.notes.clone(),
            wall_ms: include_wall.then_some(self.wall_ms),
        }
    }
}

/// Check accumulator: counts cases and records failures with payloads.
struct Recorder {
    cases: usize,
    failures: Vec<Failure>,
    notes: Vec<String>,
}

impl Recorder {
    fn new() -> Self {
        Self {
            cases: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(
        &mut self,
        case: impl Into<String>,
        measured: f64,
        threshold: f64,
        inputs: impl FnOnce() -> serde_json::Value,
    ) {
        self.cases += 1;
        // NaN counts as a failure
        if measured.is_nan() || measured > threshold {
            self.failures.push(Failure {
                case: case.into(),
                measured,
                threshold,
                inputs: inputs(),
            });
        }
    }

    fn check_true(
        &mut self,
        case: impl Into<String>,
        ok: bool,
        inputs: impl FnOnce() -> serde_json::Value,
    ) {
        self.check(case, if ok { 0.0 } else { 1.0 }, 0.5, inputs);
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn finish(self, suite: &str, config: &SuiteConfig, started: Instant) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            config: config.clone(),
            cases_run: self.cases,
            failures: self.failures,
            notes: self.notes,
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

fn element_json(x: &ModuleElement) -> serde_json::Value {
    serde_json::to_value(ModuleElementDto::from_element(x)).expect("serializable")
}

fn algebra_json(a: &AlgebraElement) -> serde_json::Value {
    serde_json::to_value(AlgebraElementDto::from_element(a)).expect("serializable")
}

fn pair_json(x: &ModuleElement, y: &ModuleElement) -> serde_json::Value {
    serde_json::json!({ "x": element_json(x), "y": element_json(y) })
}

// ---------------------------------------------------------------------------
// instance generators
// ---------------------------------------------------------------------------

/// A preserving pair with known central constant: `T = γ·(S*)⁻¹` satisfies
/// `⟨T(x), S(y)⟩ = γ⟨x, y⟩` for invertible `S` and invertible central γ.
#[derive(Clone, Debug)]
pub struct PreservingPair {
    pub t: ModuleOperator,
    pub s: ModuleOperator,
    pub gamma: CentralElement,
}

pub fn preserving_pair<R: Rng + ?Sized>(space: &ModuleSpace, rng: &mut R) -> PreservingPair {
    let s = ModuleOperator::random_invertible(space, rng);
    let gamma = CentralElement::random_invertible(space.descriptor(), rng);
    let t = s
        .adjoint()
        .invert()
        .expect("generator keeps condition numbers small")
        .scale_central(&gamma)
        .expect("same algebra");
    PreservingPair { t, s, gamma }
}

/// A preserving pair corrupted so that preservation genuinely fails:
/// a non-central coefficient twist when some block has size ≥ 2, a
/// slot-mixing bump otherwise. Over a commutative algebra at rank one no
/// corrupted pair exists (every pair is a central multiple there), which is
/// reported as an error.
pub fn corrupted_pair<R: Rng + ?Sized>(
    space: &ModuleSpace,
    rng: &mut R,
) -> Result<(ModuleOperator, ModuleOperator)> {
    let PreservingPair { t, s, .. } = preserving_pair(space, rng);
    let desc = space.descriptor().clone();
    let mut coeffs = t.coeffs().to_vec();
    if let Some(block) = desc.block_sizes().iter().position(|&k| k >= 2) {
        let twist = AlgebraElement::matrix_unit(desc, block, 0, 1)?.scale(C64::new(0.75, 0.0));
        let bump = coeffs[0].checked_mul(&twist)?;
        coeffs[0] = coeffs[0].checked_add(&bump)?;
    } else if space.rank() >= 2 {
        // commutative algebra: mix slot 0 into slot 1
        let bump = coeffs[0].scale(C64::new(0.75, 0.0));
        coeffs[1] = coeffs[1].checked_add(&bump)?;
    } else {
        return Err(Error::InvalidDescriptor(
            "no non-preserving pairs exist over a commutative algebra at rank one".into(),
        ));
    }
    let t_bad = ModuleOperator::from_coeffs(space.clone(), space.clone(), coeffs)?;
    Ok((t_bad, s))
}

/// The stability budget `ε = θ₁θ₂ + θ₁(θ₂ + 1) + (θ₁ + 1)θ₂`.
pub fn epsilon_bound(theta1: f64, theta2: f64) -> f64 {
    theta1 * theta2 + theta1 * (theta2 + 1.0) + (theta1 + 1.0) * theta2
}

/// A preserving pair plus relative perturbations of both maps.
#[derive(Clone, Debug)]
pub struct PerturbedPair {
    pub t: ModuleOperator,
    pub s: ModuleOperator,
    pub t0: ModuleOperator,
    pub s0: ModuleOperator,
    pub gamma: CentralElement,
    pub theta1: f64,
    pub theta2: f64,
    pub epsilon: f64,
}

fn perturb_operator<R: Rng + ?Sized>(
    base: &ModuleOperator,
    theta: f64,
    rng: &mut R,
) -> ModuleOperator {
    // draw first so the rng stream does not depend on theta
    let space = base.domain().clone();
    let raw = ModuleOperator::random_gaussian(&space, &space, rng).expect("same space");
    if theta == 0.0 {
        return base.clone();
    }
    let sigma = raw.op_norm();
    let smin0 = base.smin();
    // ‖Δ‖ = θ·s₀/(1+θ) keeps ‖Δ‖ ≤ θ·smin(T₀+Δ), hence ‖Δx‖ ≤ θ‖Tx‖ for all x
    let mut scale = theta * smin0 / (sigma * (1.0 + theta));
    loop {
        let delta = raw.scale(C64::new(scale, 0.0));
        let perturbed = base.checked_add(&delta).expect("same space");
        if delta.op_norm() <= theta * perturbed.smin() {
            return perturbed;
        }
        scale *= 0.9;
    }
}

pub fn perturbed_pair<R: Rng + ?Sized>(
    space: &ModuleSpace,
    theta1: f64,
    theta2: f64,
    rng: &mut R,
) -> Result<PerturbedPair> {
    for (name, theta) in [("theta1", theta1), ("theta2", theta2)] {
        if !(0.0..1.0).contains(&theta) {
            let _ = name;
            return Err(Error::InvalidTheta(theta));
        }
    }
    let PreservingPair {
        t: t0,
        s: s0,
        gamma,
    } = preserving_pair(space, rng);
    let t = perturb_operator(&t0, theta1, rng);
    let s = perturb_operator(&s0, theta2, rng);
    Ok(PerturbedPair {
        t,
        s,
        t0,
        s0,
        gamma,
        theta1,
        theta2,
        epsilon: epsilon_bound(theta1, theta2),
    })
}

// ---------------------------------------------------------------------------
// individual suites
// ---------------------------------------------------------------------------

/// Orthogonality equivalences: the six characterizations hold for constructed
/// orthogonal pairs, the explicit witness coefficient refutes them for
/// non-orthogonal pairs, and a preserving pair transports the reflection
/// equality to its images. A single-block 2×2 instance additionally searches
/// the scalar grid for counterexamples to the scalar-only dominance
/// condition; that search is recorded as empirical only.
pub fn suite_equivalences(config: &SuiteConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let space = config.space()?;
    let mut rec = Recorder::new();

    // forward direction on constructed orthogonal pairs
    for case in 0..config.cases {
        let mut rng =
            ChaCha12Rng::seed_from_u64(subseed(config.seed, "equiv-forward", case as u64));
        let (x, y) = random_orthogonal_pair(&space, &mut rng)?;
        let report = check_orthogonality_equivalences(
            &x,
            &y,
            12,
            subseed(config.seed, "equiv-samples", case as u64),
        )?;
        let worst = report.deviations.iter().fold(0.0_f64, |a, &b| a.max(b));
        rec.check(format!("forward-{case}"), worst, report.tolerance, || {
            pair_json(&x, &y)
        });
    }

    // converse via the explicit witness coefficient
    for case in 0..config.cases {
        let mut rng =
            ChaCha12Rng::seed_from_u64(subseed(config.seed, "equiv-converse", case as u64));
        let x = space.random_element(&mut rng);
        let y = space.random_element(&mut rng);
        let (gap, closed_form) = crate::module::witness_gap(&x, &y)?;
        if closed_form <= 1e-6 * (1.0 + x.norm() * y.norm()).powi(2) {
            // accidentally orthogonal; nothing to refute
            continue;
        }
        rec.check(
            format!("witness-gap-{case}"),
            (gap - closed_form).abs(),
            1e-8 * closed_form,
            || pair_json(&x, &y),
        );
    }

    // a preserving pair transports reflection equalities to image pairs
    {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "equiv-pair", 0));
        let PreservingPair { t, s, .. } = preserving_pair(&space, &mut rng);
        for case in 0..20 {
            let (x, y) = random_orthogonal_pair(&space, &mut rng)?;
            let tx = t.apply(&x)?;
            let sy = s.apply(&y)?;
            let mut worst = 0.0_f64;
            for _ in 0..10 {
                let a = AlgebraElement::random_gaussian(space.descriptor(), &mut rng);
                let asy = sy.left_mul(&a)?;
                let plus = tx.checked_add(&asy)?.abs_value()?;
                let minus = tx.checked_sub(&asy)?.abs_value()?;
                worst = worst.max(plus.checked_sub(&minus)?.norm());
            }
            let scale = (1.0 + tx.norm() + 20.0 * sy.norm()).powi(2);
            rec.check(
                format!("image-reflection-{case}"),
                worst,
                1e-8 * scale,
                || pair_json(&x, &y),
            );
        }
    }

    // single-block 2×2 instance: scalar-only dominance, empirical grid search
    {
        let m2 = ModuleSpace::new(AlgebraDescriptor::new(vec![2])?, 1)?;
        let grid = scalar_grid();
        let mut found = 0usize;
        let mut tried = 0usize;
        for case in 0..config.cases.min(50) {
            let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "equiv-m2", case as u64));
            // orthogonal side: the scalar dominance condition must hold on the grid
            let (a, b) = rank_one_orthogonal_pair(&m2, &mut rng)?;
            let abs_a = a.abs_value()?;
            let mut worst = 0.0_f64;
            for &lambda in &grid {
                let shifted = a.checked_add(&b.scale(lambda))?.abs_value()?;
                let min_eig = shifted.checked_sub(&abs_a)?.min_eigenvalue();
                worst = worst.max((-min_eig).max(0.0));
            }
            let scale = (1.0 + a.norm() + 4.0 * b.norm()).powi(2);
            rec.check(format!("m2-orthogonal-{case}"), worst, 1e-9 * scale, || {
                pair_json(&a, &b)
            });

            // non-orthogonal side: search the same grid for a violation
            let x = m2.random_element(&mut rng);
            let y = m2.random_element(&mut rng);
            if x.inner_product(&y)?.norm() <= 1e-3 * (1.0 + x.norm() * y.norm()) {
                continue;
            }
            tried += 1;
            let abs_x = x.abs_value()?;
            let violated = grid.iter().any(|&lambda| {
                let shifted = x
                    .checked_add(&y.scale(lambda))
                    .and_then(|v| v.abs_value())
                    .and_then(|v| v.checked_sub(&abs_x));
                match shifted {
                    Ok(diff) => diff.min_eigenvalue() < -1e-6 * (1.0 + x.norm()).powi(2),
                    Err(_) => false,
                }
            });
            if violated {
                found += 1;
            }
        }
        rec.note(format!(
            "m2 scalar-dominance search is empirical only: grid violations found for {found}/{tried} non-orthogonal pairs; no claim beyond the fixed grid"
        ));
    }

    Ok(rec.finish("equivalences", config, started))
}

/// Pairing against the identity: a preserving `T` paired with `id` is a
/// central multiple of the identity, blockwise.
pub fn suite_identity_pairing(config: &SuiteConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let space = config.space()?;
    let mut rec = Recorder::new();
    let id = ModuleOperator::identity(&space);
    let basis = space.canonical_basis();

    // central multiples are recovered and satisfy T(b) = γ·b on the basis
    for case in 0..8u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "idpair", case));
        let gamma0 = CentralElement::random_invertible(space.descriptor(), &mut rng);
        let t = id.scale_central(&gamma0).expect("same algebra");
        match decide_preserving(&t, &id, subseed(config.seed, "idpair-decide", case))? {
            Verdict::Preserving(res) => {
                rec.check(
                    format!("gamma-recovery-{case}"),
                    res.gamma.distance(&gamma0)?,
                    1e-9 * (1.0 + gamma0.norm()),
                    || serde_json::json!({ "gamma": crate::io::central_to_dto(&gamma0) }),
                );
                let g = res.gamma.embed();
                let mut worst = 0.0_f64;
                for b in &basis {
                    let lhs = t.apply(b)?;
                    let rhs = b.left_mul(&g)?;
                    worst = worst.max(lhs.checked_sub(&rhs)?.norm());
                }
                rec.check(
                    format!("identity-law-{case}"),
                    worst,
                    1e-9 * (1.0 + gamma0.norm()),
                    || serde_json::json!({ "gamma": crate::io::central_to_dto(&gamma0) }),
                );
            }
            other => rec.check_true(
                format!("verdict-{case}"),
                other.is_preserving(),
                || serde_json::json!({ "verdict": format!("{other:?}") }),
            ),
        }
    }

    // distinct block scalars exhibit the center
    {
        let scalars: Vec<C64> = (0..space.descriptor().num_blocks())
            .map(|b| C64::new(1.0 + b as f64, 0.0))
            .collect();
        let gamma0 = CentralElement::new(space.descriptor().clone(), scalars).expect("count ok");
        let t = id.scale_central(&gamma0).expect("same algebra");
        match decide_preserving(&t, &id, subseed(config.seed, "idpair-blocks", 0))? {
            Verdict::Preserving(res) => {
                rec.check(
                    "blockwise-gamma",
                    res.gamma.distance(&gamma0)?,
                    1e-10,
                    || serde_json::json!({ "gamma": crate::io::central_to_dto(&gamma0) }),
                );
            }
            other => rec.check_true(
                "blockwise-verdict",
                other.is_preserving(),
                || serde_json::json!({ "verdict": format!("{other:?}") }),
            ),
        }
        rec.note("blockwise scalars differ across blocks; the recovered multiplier is genuinely central, not scalar".to_string());
    }

    // a non-central coefficient twist must be refuted
    {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "idpair-twist", 0));
        let (t_bad, _) = corrupted_pair(&space, &mut rng)?;
        let verdict =
            decide_preserving(&t_bad, &id, subseed(config.seed, "idpair-twist-decide", 0))?;
        rec.check_true(
            "non-central-twist-refuted",
            matches!(verdict, Verdict::NotPreserving(_)),
            || serde_json::json!({ "verdict": format!("{verdict:?}") }),
        );
    }

    Ok(rec.finish("identity_pairing", config, started))
}

/// Invertible pairs: `T = γ·(S*)⁻¹` satisfies the commutation identities
/// `S*T = TS* = γ·id` and `S = γ*·(T*)⁻¹`; for `T = S` the constant is
/// positive and `T` factors as `√γ` times a unitary.
pub fn suite_invertible_pair(config: &SuiteConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let space = config.space()?;
    let mut rec = Recorder::new();
    let id = ModuleOperator::identity(&space);

    for case in 0..5u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "invpair", case));
        let PreservingPair { t, s, gamma } = preserving_pair(&space, &mut rng);
        let scale = 1.0 + t.op_norm() * s.op_norm();

        let gid = id.scale_central(&gamma).expect("same algebra");
        let st = s.adjoint().compose(&t).expect("same space");
        rec.check(
            format!("s-adjoint-t-{case}"),
            st.coeff_distance(&gid)?,
            1e-9 * scale,
            || serde_json::json!({ "gamma": crate::io::central_to_dto(&gamma) }),
        );
        let ts = t.compose(&s.adjoint()).expect("same space");
        rec.check(
            format!("t-s-adjoint-{case}"),
            ts.coeff_distance(&gid)?,
            1e-9 * scale,
            || serde_json::json!({ "gamma": crate::io::central_to_dto(&gamma) }),
        );

        // S is determined by T: S = γ*·(T*)⁻¹
        let s_back = t
            .adjoint()
            .invert()?
            .scale_central(&gamma.conj())
            .expect("same algebra");
        rec.check(
            format!("s-from-t-{case}"),
            s_back.coeff_distance(&s)?,
            1e-9 * scale,
            || serde_json::json!({ "gamma": crate::io::central_to_dto(&gamma) }),
        );

        match decide_preserving(&t, &s, subseed(config.seed, "invpair-decide", case))? {
            Verdict::Preserving(res) => {
                rec.check(
                    format!("gamma-recovery-{case}"),
                    res.gamma.distance(&gamma)?,
                    1e-9 * (1.0 + gamma.norm()),
                    || serde_json::json!({ "gamma": crate::io::central_to_dto(&gamma) }),
                );
            }
            other => rec.check_true(
                format!("verdict-{case}"),
                other.is_preserving(),
                || serde_json::json!({ "verdict": format!("{other:?}") }),
            ),
        }
    }

    // self-paired branch: T = S forces a positive constant and a polar form
    for case in 0..5u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "invpair-self", case));
        let scalars: Vec<C64> = (0..space.descriptor().num_blocks())
            .map(|_| C64::new(0.5 + 1.5 * rng.gen::<f64>(), 0.0))
            .collect();
        let gamma0 = CentralElement::new(space.descriptor().clone(), scalars).expect("count ok");
        let u0 = ModuleOperator::random_unitary(&space, &mut rng);
        let t = u0.scale_central(&gamma0.sqrt()).expect("same algebra");

        let tt = t.compose(&t.adjoint()).expect("same space");
        let gid = id.scale_central(&gamma0).expect("same algebra");
        rec.check(
            format!("self-tt-adjoint-{case}"),
            tt.coeff_distance(&gid)?,
            1e-9 * (1.0 + gamma0.norm()),
            || serde_json::json!({ "gamma": crate::io::central_to_dto(&gamma0) }),
        );

        let extraction = extract_gamma(&t, &t, subseed(config.seed, "invpair-self-extract", case))?;
        let max_imag = extraction
            .gamma
            .scalars()
            .iter()
            .map(|g| g.im.abs())
            .fold(0.0, f64::max);
        rec.check(
            format!("self-gamma-imag-{case}"),
            max_imag,
            1e-10 * (1.0 + gamma0.norm()),
            || serde_json::json!({ "gamma": crate::io::central_to_dto(&extraction.gamma) }),
        );
        let min_real = extraction
            .gamma
            .scalars()
            .iter()
            .map(|g| g.re)
            .fold(f64::INFINITY, f64::min);
        rec.check_true(
            format!("self-gamma-positive-{case}"),
            min_real > 0.0,
            || serde_json::json!({ "gamma": crate::io::central_to_dto(&extraction.gamma) }),
        );

        // unitary factor U = (√γ)⁻¹·T
        let u = t
            .scale_central(&extraction.gamma.sqrt().try_inverse()?)
            .expect("same algebra");
        let uu = u.adjoint().compose(&u).expect("same space");
        rec.check(
            format!("self-unitary-factor-{case}"),
            uu.coeff_distance(&id)?,
            1e-9,
            || serde_json::json!({ "gamma": crate::io::central_to_dto(&extraction.gamma) }),
        );
    }

    // γ = 1 with unitary S collapses to T = S
    {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "invpair-unit", 0));
        let s = ModuleOperator::random_unitary(&space, &mut rng);
        let t = s.adjoint().invert()?;
        rec.check(
            "unit-gamma-t-equals-s",
            t.coeff_distance(&s)?,
            1e-10,
            || serde_json::json!({}),
        );
    }

    Ok(rec.finish("invertible_pair", config, started))
}

/// Isometry pairs: for unitaries, `U = γ·V` with a unimodular central γ is
/// the only preserving configuration; independent Haar pairs are refuted.
pub fn suite_isometry_pair(config: &SuiteConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let space = config.space()?;
    let mut rec = Recorder::new();

    for case in 0..5u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "isometry", case));
        let v = ModuleOperator::random_unitary(&space, &mut rng);
        let g = CentralElement::random_unimodular(space.descriptor(), &mut rng);
        let u = v.scale_central(&g).expect("same algebra");
        match decide_preserving(&u, &v, subseed(config.seed, "isometry-decide", case))? {
            Verdict::Preserving(res) => {
                rec.check(
                    format!("gamma-recovery-{case}"),
                    res.gamma.distance(&g)?,
                    1e-9,
                    || serde_json::json!({ "gamma": crate::io::central_to_dto(&g) }),
                );
                let unimodular_dev = res
                    .gamma
                    .scalars()
                    .iter()
                    .map(|z| (z.norm() - 1.0).abs())
                    .fold(0.0, f64::max);
                rec.check(
                    format!("gamma-unimodular-{case}"),
                    unimodular_dev,
                    1e-10,
                    || serde_json::json!({ "gamma": crate::io::central_to_dto(&res.gamma) }),
                );
            }
            other => rec.check_true(
                format!("verdict-{case}"),
                other.is_preserving(),
                || serde_json::json!({ "verdict": format!("{other:?}") }),
            ),
        }
    }

    // U = V gives γ = 1
    {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "isometry-id", 0));
        let v = ModuleOperator::random_unitary(&space, &mut rng);
        match decide_preserving(&v, &v, subseed(config.seed, "isometry-id-decide", 0))? {
            Verdict::Preserving(res) => {
                let one = CentralElement::one(space.descriptor().clone());
                rec.check("identity-gamma", res.gamma.distance(&one)?, 1e-10, || {
                    serde_json::json!({})
                });
            }
            other => rec.check_true(
                "identity-verdict",
                other.is_preserving(),
                || serde_json::json!({ "verdict": format!("{other:?}") }),
            ),
        }
    }

    // independent Haar pairs are not preserving
    for case in 0..3u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "isometry-indep", case));
        let u = ModuleOperator::random_unitary(&space, &mut rng);
        let v = ModuleOperator::random_unitary(&space, &mut rng);
        let verdict =
            decide_preserving(&u, &v, subseed(config.seed, "isometry-indep-decide", case))?;
        rec.check_true(
            format!("independent-refuted-{case}"),
            matches!(verdict, Verdict::NotPreserving(_)),
            || serde_json::json!({ "verdict": format!("{verdict:?}") }),
        );
    }

    rec.note(
        "surjective co-isometries on the same module leave no room for mutually orthogonal ranges; that branch of the alternative is unreachable here and is recorded, not asserted".to_string(),
    );

    Ok(rec.finish("isometry_pair", config, started))
}

/// Stability: perturbing both maps of a preserving pair by relative errors
/// `θ₁, θ₂` keeps images of orthogonal pairs θ-orthogonal at level
/// `ε = θ₁θ₂ + θ₁(θ₂ + 1) + (θ₁ + 1)θ₂`.
pub fn suite_perturbation(config: &SuiteConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let space = config.space()?;
    let mut rec = Recorder::new();
    let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "perturb-gen", 0));
    let pp = perturbed_pair(&space, config.theta1, config.theta2, &mut rng)?;
    let epsilon = pp.epsilon;

    // generator self-check: the relative-error hypotheses really hold
    let dt = pp.t.checked_sub(&pp.t0)?.op_norm();
    rec.check(
        "hypothesis-t",
        dt,
        config.theta1 * pp.t.smin() + 1e-12,
        || serde_json::json!({}),
    );
    let ds = pp.s.checked_sub(&pp.s0)?.op_norm();
    rec.check(
        "hypothesis-s",
        ds,
        config.theta2 * pp.s.smin() + 1e-12,
        || serde_json::json!({}),
    );

    let float_slack = 1e-9 * (1.0 + pp.t.op_norm() * pp.s.op_norm());
    let mut worst_ratio = 0.0_f64;
    for case in 0..200usize {
        let mut rng =
            ChaCha12Rng::seed_from_u64(subseed(config.seed, "perturb-pairs", case as u64));
        let (x, y) = random_orthogonal_pair(&space, &mut rng)?;
        let tx = pp.t.apply(&x)?;
        let sy = pp.s.apply(&y)?;
        let bound_scale = tx.norm() * sy.norm();
        let measured = tx.inner_product(&sy)?.norm();
        if bound_scale > 1e-12 {
            worst_ratio = worst_ratio.max(measured / bound_scale);
        }
        rec.check(
            format!("theta-orthogonal-{case}"),
            measured,
            epsilon * bound_scale + float_slack * x.norm() * y.norm(),
            || pair_json(&x, &y),
        );
    }

    rec.note(format!("epsilon = {:.4}", epsilon));
    rec.note(format!("worst measured ratio = {:.6e}", worst_ratio));

    Ok(rec.finish("perturbation", config, started))
}

/// Worst image-pairing ratio of the perturbation suite for one θ₁ (θ₂ and the
/// seed held fixed); exposed for the monotonicity regression.
pub fn perturbation_worst_ratio(config: &SuiteConfig) -> Result<f64> {
    let space = config.space()?;
    let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "perturb-gen", 0));
    let pp = perturbed_pair(&space, config.theta1, config.theta2, &mut rng)?;
    let mut worst = 0.0_f64;
    for case in 0..200usize {
        let mut rng =
            ChaCha12Rng::seed_from_u64(subseed(config.seed, "perturb-pairs", case as u64));
        let (x, y) = random_orthogonal_pair(&space, &mut rng)?;
        let tx = pp.t.apply(&x)?;
        let sy = pp.s.apply(&y)?;
        let denom = tx.norm() * sy.norm();
        if denom > 1e-12 {
            worst = worst.max(tx.inner_product(&sy)?.norm() / denom);
        }
    }
    Ok(worst)
}

/// Symmetry averaging at real rank zero: after normalizing `z` to unit Gram,
/// `z + uz ⊥ z − uz` for every symmetry `u`; preservation then forces the
/// raw pairing `⟨T(z), S(z)⟩` to commute with all symmetries, hence to be
/// central, and self-adjointness makes the extracted γ real.
pub fn suite_real_rank_zero(config: &SuiteConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let space = config.space()?;
    let mut rec = Recorder::new();
    let desc = space.descriptor().clone();

    let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "rrz-gen", 0));
    // preserving pair with self-adjoint diagonal pairing: real γ times a unitary
    let gamma_r = CentralElement::random_real_invertible(&desc, &mut rng);
    let s = ModuleOperator::random_unitary(&space, &mut rng);
    let t = s.scale_central(&gamma_r).expect("same algebra");

    // step 1: normalization to unit Gram
    let z_raw = random_element_invertible_gram(&space, &mut rng)?;
    let inv_abs = z_raw.abs_value()?.hermitian_inverse()?;
    let z = z_raw.left_mul(&inv_abs)?;
    let gram_dev = z
        .inner_product(&z)?
        .checked_sub(&AlgebraElement::identity(desc.clone()))?
        .norm();
    rec.check("normalization", gram_dev, 1e-10, || element_json(&z_raw));

    let g_raw = t.apply(&z)?.inner_product(&s.apply(&z)?)?;
    rec.check(
        "raw-pairing-self-adjoint",
        g_raw.hermitian_deviation(),
        1e-10 * (1.0 + g_raw.norm()),
        || algebra_json(&g_raw),
    );

    // trivial symmetries: the averaging identity is exactly zero
    for (label, sign) in [("plus-identity", 1.0), ("minus-identity", -1.0)] {
        let u = AlgebraElement::identity(desc.clone()).scale(C64::new(sign, 0.0));
        let expr = symmetry_average(&g_raw, &u)?;
        rec.check(
            format!("trivial-{label}"),
            expr.norm(),
            1e-12 * (1.0 + g_raw.norm()),
            || algebra_json(&u),
        );
    }

    // step 2/3: random symmetries
    for case in 0..20u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "rrz-symmetry", case));
        let u = random_symmetry(&desc, &mut rng);

        let uz = z.left_mul(&u)?;
        let plus = z.checked_add(&uz)?;
        let minus = z.checked_sub(&uz)?;
        rec.check(
            format!("split-orthogonal-{case}"),
            plus.inner_product(&minus)?.norm(),
            1e-11 * (1.0 + plus.norm() * minus.norm()),
            || algebra_json(&u),
        );

        // preservation carries the split across (T, S)
        let image_pairing = t.apply(&plus)?.inner_product(&s.apply(&minus)?)?;
        rec.check(
            format!("image-split-orthogonal-{case}"),
            image_pairing.norm(),
            1e-10 * (1.0 + t.op_norm() * s.op_norm()),
            || algebra_json(&u),
        );

        // ... which is exactly the averaging identity for the raw pairing
        let expr = symmetry_average(&g_raw, &u)?;
        rec.check(
            format!("averaging-identity-{case}"),
            expr.norm(),
            1e-10 * (1.0 + g_raw.norm()),
            || algebra_json(&u),
        );
    }

    // step 4: extracted γ is real, central, commutes with symmetries, and
    // characterizes the pair on the whole basis
    let extraction = extract_gamma(&t, &s, subseed(config.seed, "rrz-extract", 0))?;
    let embedded = extraction.gamma.embed();
    for case in 0..20u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "rrz-commute", case));
        let u = random_symmetry(&desc, &mut rng);
        let comm = embedded
            .checked_mul(&u)?
            .checked_sub(&u.checked_mul(&embedded)?)?;
        rec.check(
            format!("gamma-symmetry-commutes-{case}"),
            comm.norm(),
            1e-11 * (1.0 + embedded.norm()),
            || algebra_json(&u),
        );
    }
    let max_imag = extraction
        .gamma
        .scalars()
        .iter()
        .map(|g| g.im.abs())
        .fold(0.0, f64::max);
    rec.check(
        "gamma-self-adjoint",
        max_imag,
        1e-10 * (1.0 + extraction.gamma.norm()),
        || serde_json::json!({ "gamma": crate::io::central_to_dto(&extraction.gamma) }),
    );
    rec.check(
        "gamma-matches-construction",
        extraction.gamma.distance(&gamma_r)?,
        1e-9 * (1.0 + gamma_r.norm()),
        || serde_json::json!({ "gamma": crate::io::central_to_dto(&gamma_r) }),
    );
    let residual = verify_characterization(&t, &s, &extraction.gamma)?;
    rec.check(
        "characterization-residual",
        residual,
        extraction.tolerance,
        || serde_json::json!({ "gamma": crate::io::central_to_dto(&extraction.gamma) }),
    );

    rec.note("finite-dimensional algebras have real rank zero; symmetries span enough of the algebra to force centrality".to_string());

    Ok(rec.finish("real_rank_zero", config, started))
}

/// `γ + uγ − γu − uγu` for a symmetry `u`.
fn symmetry_average(gamma: &AlgebraElement, u: &AlgebraElement) -> Result<AlgebraElement> {
    gamma
        .checked_add(&u.checked_mul(gamma)?)?
        .checked_sub(&gamma.checked_mul(u)?)?
        .checked_sub(&u.checked_mul(gamma)?.checked_mul(u)?)
}

/// Local maps over a single-block algebra: module operators pass the
/// locality sampler and promote to coefficient form; a functional-times-
/// vector map is caught with a witness; and `p·T(x) = T(p·x)` holds for
/// projections.
pub fn suite_local_maps(config: &SuiteConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    // single-block hypothesis: use the largest block of the configured algebra
    let k = *config
        .blocks
        .iter()
        .max()
        .ok_or(Error::InvalidDescriptor("no blocks".into()))?;
    let space = ModuleSpace::new(AlgebraDescriptor::new(vec![k])?, config.rank)?;
    let mut rec = Recorder::new();
    rec.note(format!(
        "single-block instance M_{k} of rank {}; locality is a single-algebra statement",
        config.rank
    ));

    // a central multiple of the identity: local, promotable, γ recovered
    {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "local-central", 0));
        let gamma0 = CentralElement::random_invertible(space.descriptor(), &mut rng);
        let t = ModuleOperator::identity(&space)
            .scale_central(&gamma0)
            .expect("same algebra");
        let l = t.realize();
        let locality = l.is_local(100, subseed(config.seed, "local-central-trials", 0));
        rec.check_true(
            "central-map-local",
            locality.holds,
            || serde_json::json!({}),
        );
        match l.promote() {
            Ok(promoted) => {
                rec.check(
                    "central-map-promotes",
                    promoted.coeff_distance(&t)?,
                    1e-12,
                    || serde_json::json!({}),
                );
                let extraction = extract_gamma(
                    &promoted,
                    &ModuleOperator::identity(&space),
                    subseed(config.seed, "local-central-extract", 0),
                )?;
                rec.check(
                    "central-map-gamma",
                    extraction.gamma.distance(&gamma0)?,
                    1e-9 * (1.0 + gamma0.norm()),
                    || serde_json::json!({ "gamma": crate::io::central_to_dto(&gamma0) }),
                );
            }
            Err(e) => rec.check_true(
                "central-map-promotes",
                false,
                || serde_json::json!({ "error": e.to_string() }),
            ),
        }
    }

    // module operators are local and A-linear
    for case in 0..3u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "local-modop", case));
        let t = ModuleOperator::random_gaussian(&space, &space, &mut rng).expect("same space");
        let l = t.realize();
        rec.check_true(
            format!("module-operator-local-{case}"),
            l.is_local(100, subseed(config.seed, "local-modop-trials", case))
                .holds,
            || serde_json::json!({}),
        );
        rec.check_true(
            format!("module-operator-a-linear-{case}"),
            l.is_a_linear(50, subseed(config.seed, "local-modop-alinear", case))
                .holds,
            || serde_json::json!({}),
        );
    }

    // a functional-times-vector map is not local, with a verified witness
    {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "local-functional", 0));
        let v = space.random_element(&mut rng).to_coords();
        let dim = space.complex_dim();
        let phi = crate::algebra::CMatrix::from_fn(1, dim, |_, _| {
            crate::algebra::gaussian_complex(&mut rng)
        });
        let l = crate::operators::GeneralLinearMap::from_matrix(
            space.clone(),
            space.clone(),
            &v * phi,
        )?;
        let verdict = l.is_local(100, subseed(config.seed, "local-functional-trials", 0));
        match verdict.witness {
            Some(w) if !verdict.holds => {
                let ax = w.x.left_mul(&w.a)?;
                rec.check(
                    "functional-witness-kernel",
                    ax.norm(),
                    1e-9 * (1.0 + w.a.norm() * w.x.norm()),
                    || pair_json(&w.x, &w.x),
                );
                rec.check_true(
                    "functional-witness-violates",
                    w.violation > w.bound,
                    || serde_json::json!({ "violation": w.violation, "bound": w.bound }),
                );
            }
            _ => rec.check_true("functional-not-local", false, || serde_json::json!({})),
        }
    }

    // proof-step mirror: p·T(x) = T(p·x) for projections p
    {
        let mut rng = ChaCha12Rng::seed_from_u64(subseed(config.seed, "local-proj", 0));
        let t = ModuleOperator::random_gaussian(&space, &space, &mut rng).expect("same space");
        let mut worst = 0.0_f64;
        for _ in 0..50 {
            let rank = rng.gen_range(0..=k);
            let mut p = AlgebraElement::zero(space.descriptor().clone());
            p.blocks_mut()[0] = crate::algebra::haar_projection(k, rank, &mut rng);
            let x = space.random_element(&mut rng);
            let lhs = t.apply(&x)?.left_mul(&p)?;
            let rhs = t.apply(&x.left_mul(&p)?)?;
            let scale = (1.0 + t.op_norm()) * (1.0 + x.norm());
            worst = worst.max(lhs.checked_sub(&rhs)?.norm() / scale);
        }
        rec.check("projection-commutation", worst, 1e-12, || {
            serde_json::json!({})
        });
        rec.note("projections already commute with the action; at finite dimension locality on projections forces module linearity".to_string());
    }

    Ok(rec.finish("local_maps", config, started))
}

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

/// All suite names, in canonical order.
pub fn all_suite_names() -> &'static [&'static str] {
    &[
        "equivalences",
        "identity_pairing",
        "invertible_pair",
        "isometry_pair",
        "perturbation",
        "real_rank_zero",
        "local_maps",
    ]
}

/// Run one suite by name.
pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    match name {
        "equivalences" => suite_equivalences(config),
        "identity_pairing" => suite_identity_pairing(config),
        "invertible_pair" => suite_invertible_pair(config),
        "isometry_pair" => suite_isometry_pair(config),
        "perturbation" => suite_perturbation(config),
        "real_rank_zero" => suite_real_rank_zero(config),
        "local_maps" => suite_local_maps(config),
        other => Err(Error::UnknownSuite {
            name: other.to_string(),
            available: all_suite_names().join(", "),
        }),
    }
}

/// Run every suite in canonical order.
pub fn run_all(config: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    all_suite_names()
        .iter()
        .map(|name| run_suite(name, config))
        .collect()
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
