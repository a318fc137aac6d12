//! Demonstrates the fourth-moment identity: summing |S(chi)|^4 over all
//! multiplicative characters equals (p-1) times the weighted count of
//! quadruples with x1 x2 = x3 x4 in the interval. With unit weights the
//! right side is a plain quadruple count, which is also compared to its
//! h^4/p main term.

use boxcong::sums::{acz_quadruple_count, fourth_moment, weighted_quadruple_sum, IntervalWeights};
use boxcong::FieldCtx;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let p = 101u64;
    let ctx = FieldCtx::new(p).unwrap();
    let (u, h) = (20u32, 30u32);

    // Unit weights: the identity specializes to an exact integer count.
    let ones = IntervalWeights::ones(&ctx, u, h).unwrap();
    let moment = fourth_moment(&ctx, &ones);
    let count = acz_quadruple_count(&ctx, u, h).unwrap();
    println!("p = {p}, interval start {u}, length {h}");
    println!("sum over characters of |S|^4 = {moment:.6}");
    println!("(p-1) * quadruple count      = {}", (p - 1) * count);
    println!("quadruple count              = {count}");
    println!("main term h^4/p              = {:.2}", (f64::from(h)).powi(4) / p as f64);

    // Random complex weights: the identity holds with a weighted sum on
    // the right side.
    // Weights live in the unit disk, so each component stays within 0.7.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let w: Vec<Complex64> = (0..h)
        .map(|_| Complex64::new(rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7)))
        .collect();
    let weighted = IntervalWeights::new(&ctx, u, h, w).unwrap();
    let lhs = fourth_moment(&ctx, &weighted);
    let rhs = (p - 1) as f64 * weighted_quadruple_sum(&ctx, &weighted).unwrap();
    println!("\nrandom weights (seed 42):");
    println!("  moment    = {lhs:.10}");
    println!("  (p-1)*sum = {rhs:.10}");
    println!("  relative gap = {:.3e}", (lhs - rhs).abs() / rhs.abs());
}
