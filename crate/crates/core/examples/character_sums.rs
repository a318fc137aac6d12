//! Evaluates exponential and mixed character sums over short intervals
//! and compares their sizes against the bounds the crate computes: the
//! trivial bound h, the Weyl-type bound for diagonal polynomials, and
//! the square-root bound for mixed sums with a squarefree argument.

use boxcong::bounds::{weil_mixed_bound, wooley_bound};
use boxcong::sums::{exp_sum, mixed_char_sum, PolyMod};
use boxcong::FieldCtx;

fn main() {
    let p = 1009u64;
    let ctx = FieldCtx::new(p).unwrap();

    // A complete linear sum misses only x = 0, so it comes to -1 rather
    // than the 0 a full residue system would give.
    let linear = PolyMod::new(&ctx, &[0, 1]);
    let full = exp_sum(&ctx, &linear, 0, ctx.p() - 1).unwrap();
    println!("complete linear sum over [1, {}] = {:.6} + {:.6} i", p - 1, full.re, full.im);

    // A short cubic sum: compare |S| against h and against the
    // Weyl-type bound for degree 3.
    let f = PolyMod::new(&ctx, &[3, 0, 0, 1]);
    let h = 100u32;
    let s = exp_sum(&ctx, &f, 200, h).unwrap();
    let weyl = wooley_bound(u64::from(h), p, 3).unwrap();
    println!("\ncubic sum over an interval of length {h}:");
    println!("  |S|          = {:.4}", s.norm());
    println!("  trivial h    = {h}");
    println!("  Weyl bound   = {weyl:.4}");

    // A mixed sum chi(G(x)) e_p(F(x)) with G squarefree of degree 2:
    // the square-root bound applies over the full interval.
    let g = PolyMod::new(&ctx, &[6, 5, 1]); // (x + 2)(x + 3), distinct roots
    let t = 17u32;
    let mixed = mixed_char_sum(&ctx, t, &g, &f, 0, ctx.p() - 1).unwrap();
    let weil = weil_mixed_bound(p);
    println!("\nmixed sum over the full interval [1, {}]:", p - 1);
    println!("  |S|               = {:.4}", mixed.norm());
    println!("  sqrt(p) ln p      = {weil:.4}");
    println!("  |S| within bound  = {}", mixed.norm() <= weil);
}
