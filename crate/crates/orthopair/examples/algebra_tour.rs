//! Tour of the block-diagonal C*-algebra layer: involution, the C*-identity,
//! positive square roots, minimal projections, symmetries, and centrality.
//!
//! Run with `cargo run --example algebra_tour`.

use orthopair::algebra::{
    minimal_projection, random_symmetry, AlgebraDescriptor, AlgebraElement, CentralElement,
    HilbertVector, C64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() -> orthopair::Result<()> {
    // A = M₃(ℂ) ⊕ M₂(ℂ): two blocks, nontrivial center
    let desc = AlgebraDescriptor::new(vec![3, 2])?;
    println!(
        "algebra with blocks {:?}, complex dimension {}",
        desc.block_sizes(),
        desc.complex_dim()
    );

    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let a = AlgebraElement::random_gaussian(&desc, &mut rng);
    let b = AlgebraElement::random_gaussian(&desc, &mut rng);

    println!("\ninvolution:");
    println!(
        "  ‖(a*)* − a‖      = {:.3e}",
        a.adjoint().adjoint().checked_sub(&a)?.norm()
    );
    let anti = a
        .checked_mul(&b)?
        .adjoint()
        .checked_sub(&b.adjoint().checked_mul(&a.adjoint())?)?;
    println!("  ‖(ab)* − b*a*‖   = {:.3e}", anti.norm());
    let cstar = (a.adjoint().checked_mul(&a)?.norm() - a.norm().powi(2)).abs();
    println!("  |‖a*a‖ − ‖a‖²|   = {:.3e}  (C*-identity)", cstar);

    println!("\npositive square root:");
    let h = a.adjoint().checked_mul(&a)?;
    let s = h.psd_sqrt()?;
    println!(
        "  ‖s·s − a*a‖      = {:.3e} for s = (a*a)^(1/2)",
        s.checked_mul(&s)?.checked_sub(&h)?.norm()
    );

    println!("\nminimal projection e = η⊗η in block 0:");
    let eta = HilbertVector::random_unit(&desc, 0, &mut rng)?;
    let e = minimal_projection(&desc, 0, Some(&eta))?;
    println!(
        "  ‖e² − e‖          = {:.3e}",
        e.checked_mul(&e)?.checked_sub(&e)?.norm()
    );
    println!(
        "  ‖e − e*‖          = {:.3e}",
        e.checked_sub(&e.adjoint())?.norm()
    );
    println!("  tr e              = {:.12}", e.trace().re);
    // e·a·e collapses to a scalar multiple of e: the compression to ℂ
    let eae = e.checked_mul(&a)?.checked_mul(&e)?;
    let scalar = eae.trace();
    println!(
        "  ‖eae − (tr eae)e‖ = {:.3e}  (e·A·e = ℂ·e)",
        eae.checked_sub(&e.scale(scalar))?.norm()
    );

    println!("\nsymmetry u = 2p − 1:");
    let u = random_symmetry(&desc, &mut rng);
    println!(
        "  ‖u − u*‖          = {:.3e}",
        u.checked_sub(&u.adjoint())?.norm()
    );
    let id = AlgebraElement::identity(desc.clone());
    println!(
        "  ‖u² − 1‖          = {:.3e}",
        u.checked_mul(&u)?.checked_sub(&id)?.norm()
    );

    println!("\ncentrality:");
    let gamma = CentralElement::new(desc.clone(), vec![C64::new(2.0, 0.0), C64::new(0.0, -1.0)])?;
    println!(
        "  embed((2, −i)) central? {}",
        gamma.embed().is_central(1e-12)
    );
    let e12 = AlgebraElement::matrix_unit(desc, 0, 0, 1)?;
    match e12.centrality_violation(1e-12) {
        Some((block, r, c)) => {
            println!("  E₁₂ central? false — witness: matrix unit E_{{{r},{c}}} of block {block}")
        }
        None => println!("  E₁₂ central? unexpectedly yes"),
    }
    Ok(())
}
