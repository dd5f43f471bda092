//! Compression along a minimal projection: `eE` is an ordinary Hilbert space
//! under `[x, y] = tr⟨x, y⟩`, with `⟨x, y⟩ = [x, y]·e` and equal norms on it.
//! This bridge is what lets Hilbert-space scalar arguments act on the module.
//!
//! Run with `cargo run --example compression_bridge`.

use orthopair::algebra::{minimal_projection, AlgebraDescriptor, HilbertVector};
use orthopair::module::{compress, hilbert_inner, ModuleSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() -> orthopair::Result<()> {
    let space = ModuleSpace::new(AlgebraDescriptor::new(vec![3, 2])?, 3)?;
    let mut rng = ChaCha12Rng::seed_from_u64(21);

    for block in 0..space.descriptor().num_blocks() {
        let eta = HilbertVector::random_unit(space.descriptor(), block, &mut rng)?;
        let e = minimal_projection(space.descriptor(), block, Some(&eta))?;
        let x = space.random_element(&mut rng).left_mul(&e)?;
        let y = space.random_element(&mut rng).left_mul(&e)?;

        let ip = x.inner_product(&y)?;
        let bridge = ip.checked_sub(&e.scale(ip.trace()))?.norm();

        let cx = compress(&e, &x)?;
        let cy = compress(&e, &y)?;
        let scalar = hilbert_inner(&cx, &cy)?;

        println!(
            "block {block} (size {}):",
            space.descriptor().block_sizes()[block]
        );
        println!("  ‖⟨ex, ey⟩ − tr(⟨ex, ey⟩)·e‖ = {bridge:.3e}");
        println!(
            "  tr⟨ex, ey⟩                  = {:.6} + {:.6}i",
            ip.trace().re,
            ip.trace().im
        );
        println!(
            "  [compressed x, compressed y] = {:.6} + {:.6}i",
            scalar.re, scalar.im
        );
        println!("  module norm ‖ex‖            = {:.6}", x.norm());
        println!("  Hilbert norm of compression = {:.6}", cx.norm());

        // decompression returns ex exactly
        let back = cx.decompress();
        println!(
            "  round-trip error            = {:.3e}",
            back.checked_sub(&x)?.norm()
        );
    }
    Ok(())
}
