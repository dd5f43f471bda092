//! The self-paired branch: when `T` preserves orthogonality against itself,
//! the constant γ is positive and `T = √γ·U` for a unitary module operator.
//! Also shows the associated commutation identities `S*T = TS* = γ·id`.
//!
//! Run with `cargo run --example polar_form`.

use orthopair::algebra::{AlgebraDescriptor, CentralElement, C64};
use orthopair::characterize::extract_gamma;
use orthopair::module::ModuleSpace;
use orthopair::operators::ModuleOperator;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn main() -> orthopair::Result<()> {
    let space = ModuleSpace::new(AlgebraDescriptor::new(vec![3, 2])?, 3)?;
    let id = ModuleOperator::identity(&space);
    let mut rng = ChaCha12Rng::seed_from_u64(8);

    // hidden construction: T = √γ₀·U₀
    let scalars: Vec<C64> = (0..space.descriptor().num_blocks())
        .map(|_| C64::new(0.5 + 1.5 * rng.gen::<f64>(), 0.0))
        .collect();
    let gamma0 = CentralElement::new(space.descriptor().clone(), scalars)?;
    let u0 = ModuleOperator::random_unitary(&space, &mut rng);
    let t = u0.scale_central(&gamma0.sqrt())?;

    println!(
        "hidden γ₀ per block: {:?}",
        gamma0.scalars().iter().map(|g| g.re).collect::<Vec<_>>()
    );

    let extraction = extract_gamma(&t, &t, 11)?;
    println!("\nextracted γ from the pair (T, T):");
    for (i, g) in extraction.gamma.scalars().iter().enumerate() {
        println!(
            "  γ[{i}] = {:+.12} {:+.2e}i  (imaginary part is rounding)",
            g.re, g.im
        );
    }

    let tt = t.compose(&t.adjoint())?;
    let gid = id.scale_central(&extraction.gamma)?;
    println!("\n‖T·T* − γ·id‖  = {:.3e}", tt.coeff_distance(&gid)?);

    let u = t.scale_central(&extraction.gamma.sqrt().try_inverse()?)?;
    println!("U = (√γ)⁻¹·T:");
    println!(
        "  ‖U*U − id‖   = {:.3e}",
        u.adjoint().compose(&u)?.coeff_distance(&id)?
    );
    println!(
        "  ‖UU* − id‖   = {:.3e}",
        u.compose(&u.adjoint())?.coeff_distance(&id)?
    );
    println!(
        "  ‖U − U₀‖     = {:.3e}  (recovers the hidden unitary)",
        u.coeff_distance(&u0)?
    );
    Ok(())
}
