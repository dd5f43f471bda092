//! The decision procedure on all verdict kinds: a certified preserving pair,
//! a refuted corrupted pair with its explicit witness, the zero-map case,
//! and the comparison of two inner products.
//!
//! Run with `cargo run --example decide_verdicts`.

use orthopair::algebra::{AlgebraDescriptor, AlgebraElement, C64};
use orthopair::characterize::{decide_preserving, inner_product_comparison, Verdict};
use orthopair::module::ModuleSpace;
use orthopair::operators::ModuleOperator;
use orthopair::suites::{corrupted_pair, preserving_pair};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn describe(verdict: &Verdict) {
    match verdict {
        Verdict::Preserving(res) => {
            println!(
                "  preserving; residual {:.3e} ≤ tolerance {:.3e}",
                res.residual, res.tolerance
            );
            for (i, g) in res.gamma.scalars().iter().enumerate() {
                println!("    γ[{i}] = {:+.9} {:+.9}i", g.re, g.im);
            }
        }
        Verdict::NotPreserving(w) => {
            println!(
                "  not preserving; witness with ‖⟨x, y⟩‖ = {:.3e} but ‖⟨T(x), S(y)⟩‖ = {:.4} > {:.4e}",
                w.orthogonality, w.violation, w.threshold
            );
        }
        Verdict::ZeroPair => {
            println!("  zero pair: one map vanishes, the other is arbitrary, γ = 0")
        }
        Verdict::Inconclusive { residual, attempts } => {
            println!("  inconclusive after {attempts} attempts (residual {residual:?})")
        }
    }
}

fn main() -> orthopair::Result<()> {
    let space = ModuleSpace::new(AlgebraDescriptor::new(vec![3, 2])?, 3)?;

    println!("constructed preserving pair:");
    let mut rng = ChaCha12Rng::seed_from_u64(2);
    let pp = preserving_pair(&space, &mut rng);
    describe(&decide_preserving(&pp.t, &pp.s, 0)?);

    println!("\ncorrupted pair (non-central coefficient twist):");
    let (t_bad, s) = corrupted_pair(&space, &mut rng)?;
    describe(&decide_preserving(&t_bad, &s, 1)?);

    println!("\nzero map against a random operator:");
    let z = ModuleOperator::zero(&space, &space)?;
    let r = ModuleOperator::random_gaussian(&space, &space, &mut rng)?;
    describe(&decide_preserving(&z, &r, 2)?);

    println!("\ntwo inner products ⟨x, y⟩₂ := ⟨G(x), y⟩:");
    println!("G = 2·id (same orthogonality):");
    let two = ModuleOperator::identity(&space).scale(C64::new(2.0, 0.0));
    describe(&inner_product_comparison(&two, 3)?);

    println!("G = id + symmetrized non-central bump (different orthogonality):");
    let bump = AlgebraElement::matrix_unit(space.descriptor().clone(), 0, 0, 1)?;
    let sym = bump.checked_add(&bump.adjoint())?.scale(C64::new(0.4, 0.0));
    let id = ModuleOperator::identity(&space);
    let mut coeffs = id.coeffs().to_vec();
    coeffs[0] = coeffs[0].checked_add(&sym)?;
    let g = ModuleOperator::from_coeffs(space.clone(), space, coeffs)?;
    describe(&inner_product_comparison(&g, 4)?);
    Ok(())
}
