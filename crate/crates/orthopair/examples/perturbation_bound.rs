//! Stability of preservation: perturbing both maps of a preserving pair by
//! relative errors θ₁, θ₂ keeps images of orthogonal pairs θ-orthogonal at
//! level ε = θ₁θ₂ + θ₁(θ₂ + 1) + (θ₁ + 1)θ₂. The measured worst ratio grows
//! with θ but stays far below the budget.
//!
//! Run with `cargo run --example perturbation_bound`.

use orthopair::algebra::AlgebraDescriptor;
use orthopair::module::{random_orthogonal_pair, ModuleSpace};
use orthopair::suites::{epsilon_bound, perturbed_pair};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() -> orthopair::Result<()> {
    let space = ModuleSpace::new(AlgebraDescriptor::new(vec![3, 2])?, 3)?;

    println!(
        "{:>6} {:>6} {:>10} {:>14} {:>10}",
        "θ₁", "θ₂", "ε", "worst ratio", "margin"
    );
    for (theta1, theta2) in [(0.0, 0.0), (0.05, 0.05), (0.1, 0.1), (0.2, 0.0), (0.2, 0.2)] {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let pp = perturbed_pair(&space, theta1, theta2, &mut rng)?;
        let epsilon = epsilon_bound(theta1, theta2);

        let mut worst: f64 = 0.0;
        for case in 0..200u64 {
            let mut pr = ChaCha12Rng::seed_from_u64(orthopair::subseed(42, "pairs", case));
            let (x, y) = random_orthogonal_pair(&space, &mut pr)?;
            let tx = pp.t.apply(&x)?;
            let sy = pp.s.apply(&y)?;
            let denom = tx.norm() * sy.norm();
            if denom > 1e-12 {
                worst = worst.max(tx.inner_product(&sy)?.norm() / denom);
            }
        }
        let margin = if epsilon > 0.0 {
            format!("{:.1}x", epsilon / worst.max(1e-300))
        } else {
            "exact".into()
        };
        println!("{theta1:>6.2} {theta2:>6.2} {epsilon:>10.4} {worst:>14.3e} {margin:>10}");
    }
    Ok(())
}
