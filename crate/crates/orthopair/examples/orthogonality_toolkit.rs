//! The six equivalent characterizations of orthogonality via the
//! algebra-valued absolute value, and the explicit witness coefficient
//! `a = ⟨x, y⟩` that refutes them for non-orthogonal pairs.
//!
//! Run with `cargo run --example orthogonality_toolkit`.

use orthopair::algebra::AlgebraDescriptor;
use orthopair::module::{
    check_orthogonality_equivalences, random_orthogonal_pair, witness_gap, EquivalenceReport,
    ModuleSpace,
};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() -> orthopair::Result<()> {
    let space = ModuleSpace::new(AlgebraDescriptor::new(vec![3, 2])?, 3)?;
    let mut rng = ChaCha12Rng::seed_from_u64(9);

    println!("orthogonal pair: all six conditions hold");
    let (x, y) = random_orthogonal_pair(&space, &mut rng)?;
    let report = check_orthogonality_equivalences(&x, &y, 50, 1234)?;
    for (label, dev) in EquivalenceReport::condition_labels()
        .iter()
        .zip(report.deviations)
    {
        println!("  {label:<28} worst deviation {dev:.3e}");
    }
    println!(
        "  all pass: {} (tolerance {:.3e}, {} scalar + {} algebra samples)",
        report.all_pass(),
        report.tolerance,
        report.scalar_samples,
        report.algebra_samples
    );

    println!("\nnon-orthogonal pair: the witness coefficient refutes equality");
    let u = space.random_element(&mut rng);
    let v = space.random_element(&mut rng);
    let (gap, closed_form) = witness_gap(&u, &v)?;
    println!("  ‖|x + ay|² − |x − ay|²‖ at a = ⟨x, y⟩ : {gap:.6}");
    println!("  closed form 4‖⟨x, y⟩‖²               : {closed_form:.6}");
    println!(
        "  relative agreement                    : {:.3e}",
        (gap - closed_form).abs() / closed_form
    );

    println!("\nself-pairing (x = y): the gap is 4‖⟨x, x⟩‖² > 0");
    let (gap, closed_form) = witness_gap(&u, &u)?;
    println!("  gap = {gap:.6}, closed form = {closed_form:.6}");
    Ok(())
}
