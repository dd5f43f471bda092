//! The algebra-valued inner product on the free module `Aⁿ`: axioms,
//! Cauchy–Schwarz, θ-orthogonality, and orthogonal complements.
//!
//! Run with `cargo run --example inner_products`.

use orthopair::algebra::{AlgebraDescriptor, AlgebraElement};
use orthopair::module::{orthogonalize, ModuleSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() -> orthopair::Result<()> {
    let space = ModuleSpace::new(AlgebraDescriptor::new(vec![3, 2])?, 3)?;
    println!(
        "module A³ over blocks {:?}; complex dimension {}",
        space.descriptor().block_sizes(),
        space.complex_dim()
    );
    println!("module is full: {}", space.verify_fullness());

    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let a = AlgebraElement::random_gaussian(space.descriptor(), &mut rng);
    let x = space.random_element(&mut rng);
    let y = space.random_element(&mut rng);

    println!("\naxioms on random elements:");
    let lin = x
        .left_mul(&a)?
        .inner_product(&y)?
        .checked_sub(&a.checked_mul(&x.inner_product(&y)?)?)?;
    println!("  ‖⟨ax, y⟩ − a⟨x, y⟩‖   = {:.3e}", lin.norm());
    let sym = x
        .inner_product(&y)?
        .adjoint()
        .checked_sub(&y.inner_product(&x)?)?;
    println!("  ‖⟨x, y⟩* − ⟨y, x⟩‖    = {:.3e}", sym.norm());
    println!(
        "  λ_min⟨x, x⟩           = {:.3e}  (≥ 0)",
        x.inner_product(&x)?.min_eigenvalue()
    );
    println!(
        "  ‖|x|‖ − ‖x‖           = {:.3e}",
        x.abs_value()?.norm() - x.norm()
    );

    println!("\nCauchy–Schwarz and θ-orthogonality:");
    let ratio = x.inner_product(&y)?.norm() / (x.norm() * y.norm());
    println!("  ‖⟨x, y⟩‖/(‖x‖‖y‖)     = {ratio:.6}");
    println!(
        "  θ-orthogonal at θ = ratio + 0.05? {}",
        x.is_theta_orthogonal(&y, (ratio + 0.05).min(0.999))?
    );
    if ratio > 0.05 {
        println!(
            "  θ-orthogonal at θ = ratio − 0.05? {}",
            x.is_theta_orthogonal(&y, ratio - 0.05)?
        );
    }

    println!("\northogonal complement:");
    let z = space.random_element(&mut rng);
    let w = orthogonalize(&z, &x)?;
    println!(
        "  y = z − ⟨z, x⟩⟨x, x⟩⁻¹x gives ‖⟨y, x⟩‖ = {:.3e}",
        w.inner_product(&x)?.norm()
    );
    println!(
        "  ‖y‖ = {:.4} (zero only if z was already parallel)",
        w.norm()
    );
    Ok(())
}
