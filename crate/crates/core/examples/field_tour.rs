//! Builds a small prime-field context and walks through the tables it
//! precomputes: the primitive root, discrete logarithms, and both
//! character families, ending with a numerical check of the two
//! orthogonality relations that everything else in the crate leans on.

use boxcong::FieldCtx;
use num_complex::Complex64;

fn main() {
    let p = 13u64;
    let ctx = FieldCtx::new(p).unwrap();
    println!("p = {p}, smallest primitive root g = {}", ctx.generator());
    println!("multiplicative group order = {}", ctx.group_order());

    println!("\ndiscrete logs to base {}:", ctx.generator());
    for x in 1..ctx.p() {
        print!("  ind({x}) = {}", ctx.dlog(x));
        if x % 4 == 0 {
            println!();
        }
    }
    println!();

    // chi_t(x) = exp(2 pi i t ind(x) / (p-1)); chi_t(0) = 0 for every t,
    // including the principal character t = 0.
    let t = 5u32;
    let x = 7u32;
    let chi = ctx.mult_char(t, x).unwrap();
    println!("\nchi_{t}({x}) = {:.6} + {:.6} i", chi.re, chi.im);
    println!(
        "chi_{t}(0) = {:?} (characters vanish at zero)",
        ctx.mult_char(t, 0).unwrap()
    );

    // Additive orthogonality: sum over z of e_p(c z) is p for c = 0 and
    // cancels otherwise.
    let mut worst_add: f64 = 0.0;
    for c in 0..ctx.p() {
        let total: Complex64 = (0..ctx.p())
            .map(|z| ctx.add_char(u64::from(c) * u64::from(z)))
            .sum();
        let expected = if c == 0 { f64::from(ctx.p()) } else { 0.0 };
        worst_add = worst_add.max((total.re - expected).abs().max(total.im.abs()));
    }
    println!("\nadditive orthogonality, worst deviation = {worst_add:.3e}");

    // Multiplicative orthogonality: sum over units x of chi_t(x) is p-1
    // for the principal character and cancels for every other t.
    let mut worst_mult: f64 = 0.0;
    for t in 0..ctx.group_order() {
        let total: Complex64 = (1..ctx.p())
            .map(|x| ctx.mult_char(t, x).unwrap())
            .sum();
        let expected = if t == 0 { f64::from(ctx.group_order()) } else { 0.0 };
        worst_mult = worst_mult.max((total.re - expected).abs().max(total.im.abs()));
    }
    println!("multiplicative orthogonality, worst deviation = {worst_mult:.3e}");
}
