//! Counts solutions of a product-plus-diagonal congruence system inside
//! a box two independent ways: direct enumeration and the spectral
//! route through character sums. Prints the spectral decomposition into
//! main term, nonprincipal contribution, and principal excess, and the
//! density the main term predicts.

use boxcong::counting::predicted_density;
use boxcong::{count_bruteforce, count_spectral, BoxSpec, FieldCtx, SystemSpec};

fn main() {
    // A small diagonal system with a known answer: x1 x2 x3 = 1 with
    // x1^3 + x2^3 + x3^3 = 3 over the full box mod 7 has 9 solutions.
    let ctx = FieldCtx::new(7).unwrap();
    let sys = SystemSpec::new(&ctx, 1, &[3], &[vec![1], vec![1], vec![1]], &[
        vec![3],
        vec![3],
        vec![3],
    ])
    .unwrap();
    let bx = BoxSpec::full(&ctx, 3).unwrap();
    println!(
        "mod 7 cubic system, full box: brute = {}, spectral = {}",
        count_bruteforce(&ctx, &sys, &bx).unwrap(),
        count_spectral(&ctx, &sys, &bx).unwrap().count
    );

    // A larger instance in a proper sub-box, counted both ways.
    let ctx = FieldCtx::new(31).unwrap();
    let sys = SystemSpec::new(
        &ctx,
        5,
        &[2],
        &[vec![1], vec![3], vec![1]],
        &[vec![3], vec![4], vec![5]],
    )
    .unwrap();
    let bx = BoxSpec::new(&ctx, vec![2, 7, 11], 12).unwrap();

    let brute = count_bruteforce(&ctx, &sys, &bx).unwrap();
    let res = count_spectral(&ctx, &sys, &bx).unwrap();
    println!("\nmod 31 instance, box sides 12:");
    println!("  brute force   = {brute}");
    println!("  spectral      = {}", res.count);
    println!("  main term     = {:.6}", res.main_term);
    println!("  nonprincipal  = {:.6} + {:.6} i", res.nonprincipal.re, res.nonprincipal.im);
    println!(
        "  princ. excess = {:.6} + {:.6} i",
        res.principal_excess.re, res.principal_excess.im
    );
    let total = res.main_term + res.nonprincipal.re + res.principal_excess.re;
    println!("  sum of parts  = {total:.6}");
    println!("  residual      = {:.3e}", res.residual);

    let dens = predicted_density(&sys, &bx);
    println!("\npredicted count for a random box of this size:");
    println!("  h^n / p^(s+1)     = {:.4}", dens.main_term);
    println!("  h^n / ((p-1)p^s)  = {:.4}", dens.separated_term);
}
