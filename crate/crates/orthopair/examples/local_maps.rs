//! Locality (`a·x = 0 ⟹ a·L(x) = 0`) versus module linearity: every
//! coefficient-array operator is local; a functional-times-vector map is not
//! and the sampler produces the violating pair; `promote` reconstructs the
//! coefficient array exactly when the map is module-linear.
//!
//! Run with `cargo run --example local_maps`.

use orthopair::algebra::{gaussian_complex_matrix, AlgebraDescriptor};
use orthopair::module::ModuleSpace;
use orthopair::operators::{GeneralLinearMap, ModuleOperator};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() -> orthopair::Result<()> {
    // single-block algebra: locality is a statement about one matrix algebra
    let space = ModuleSpace::new(AlgebraDescriptor::new(vec![3])?, 3)?;
    let mut rng = ChaCha12Rng::seed_from_u64(17);

    println!("module operator (coefficient array):");
    let t = ModuleOperator::random_gaussian(&space, &space, &mut rng)?;
    let l = t.realize();
    let local = l.is_local(100, 1);
    println!(
        "  local over {} kernel trials: {}",
        local.trials, local.holds
    );
    let alin = l.is_a_linear(50, 2);
    println!(
        "  module-linear over {} trials: {}",
        alin.trials, alin.holds
    );
    let promoted = l.promote()?;
    println!(
        "  promote() coefficient distance: {:.3e}",
        promoted.coeff_distance(&t)?
    );

    println!("\nfunctional-times-vector map L(x) = φ(x)·v:");
    let v = space.random_element(&mut rng).to_coords();
    let dim = space.complex_dim();
    let phi = gaussian_complex_matrix(1, dim, &mut rng);
    let bad = GeneralLinearMap::from_matrix(space.clone(), space.clone(), &v * phi)?;
    let verdict = bad.is_local(100, 3);
    println!(
        "  local: {} (found after {} trials)",
        verdict.holds, verdict.trials
    );
    if let Some(w) = verdict.witness {
        let ax = w.x.left_mul(&w.a)?;
        println!(
            "  witness: ‖a·x‖ = {:.3e} yet ‖a·L(x)‖ = {:.4} > bound {:.3e}",
            ax.norm(),
            w.violation,
            w.bound
        );
    }
    match bad.promote() {
        Err(e) => println!("  promote(): {e}"),
        Ok(_) => println!("  promote(): unexpectedly succeeded"),
    }
    Ok(())
}
