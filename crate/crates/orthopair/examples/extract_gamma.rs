//! Build a preserving pair with a known central constant and recover it:
//! per-projection trace ratios, cross-projection consistency, the
//! least-squares cross-check, and the basis-pair residual.
//!
//! Run with `cargo run --example extract_gamma`.

use orthopair::algebra::{AlgebraDescriptor, CentralElement};
use orthopair::characterize::{extract_gamma, least_squares_gamma, verify_characterization};
use orthopair::module::ModuleSpace;
use orthopair::operators::ModuleOperator;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() -> orthopair::Result<()> {
    let space = ModuleSpace::new(AlgebraDescriptor::new(vec![3, 2])?, 3)?;
    let mut rng = ChaCha12Rng::seed_from_u64(33);

    // T = γ·(S*)⁻¹ pairs with S at constant γ: ⟨T(x), S(y)⟩ = γ⟨x, y⟩
    let s = ModuleOperator::random_invertible(&space, &mut rng);
    let gamma = CentralElement::random_invertible(space.descriptor(), &mut rng);
    let t = s.adjoint().invert()?.scale_central(&gamma)?;

    println!("ground truth γ per block:");
    for (i, g) in gamma.scalars().iter().enumerate() {
        println!("  γ[{i}] = {:+.12} {:+.12}i", g.re, g.im);
    }

    let extraction = extract_gamma(&t, &s, 7)?;
    println!("\nper-projection trace ratios:");
    for p in &extraction.per_projection {
        println!(
            "  block {} {:<10} γ_e = {:+.12} {:+.12}i",
            p.block, p.label, p.value.re, p.value.im
        );
    }
    println!(
        "  cross-projection spread = {:.3e} (tolerance {:.3e})",
        extraction.spread, extraction.tolerance
    );

    println!("\nextracted γ per block:");
    for (i, g) in extraction.gamma.scalars().iter().enumerate() {
        println!("  γ[{i}] = {:+.12} {:+.12}i", g.re, g.im);
    }
    println!(
        "  distance to ground truth = {:.3e}",
        extraction.gamma.distance(&gamma)?
    );

    let lsq = least_squares_gamma(&t, &s)?;
    println!(
        "  least-squares cross-check distance = {:.3e}",
        lsq.distance(&extraction.gamma)?
    );

    let residual = verify_characterization(&t, &s, &extraction.gamma)?;
    println!("\nbasis-pair residual max‖⟨T(b), S(b')⟩ − γ⟨b, b'⟩‖ = {residual:.3e}");
    Ok(())
}
