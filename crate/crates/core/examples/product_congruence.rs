//! Counts solutions of product congruences whose factors are not the
//! variables themselves: each variable enters through a form, either
//! the identity, a pure power x^m with gcd(m, p-1) = 1, or a general
//! polynomial. The dedicated product counter is compared against brute
//! force and against the spectral engine on the same system.

use boxcong::counting::ProductForm;
use boxcong::sums::PolyMod;
use boxcong::{count_bruteforce, count_product_only, count_spectral, BoxSpec, FieldCtx, SystemSpec};

fn main() {
    let p = 13u64;
    let ctx = FieldCtx::new(p).unwrap();

    // x^5 * y * G(z) = 3 over a box, with G(z) = z^2 + z + 1.
    let forms = vec![
        ProductForm::Power(5),
        ProductForm::Identity,
        ProductForm::Poly(PolyMod::new(&ctx, &[1, 1, 1])),
    ];
    let a = 3u64;
    let bx = BoxSpec::new(&ctx, vec![0, 2, 1], 10).unwrap();

    let direct = count_product_only(&ctx, a, &bx, &forms).unwrap();
    println!("product congruence x^5 y G(z) = {a} mod {p}, box sides 10:");
    println!("  product counter = {direct}");

    // The same system phrased through the general machinery: s = 0, so
    // the diagonal layer is empty and only the product constraint acts.
    let sys = SystemSpec::new(&ctx, a, &[], &[vec![], vec![], vec![]], &[
        vec![],
        vec![],
        vec![],
    ])
    .unwrap()
    .with_product_forms(&ctx, forms)
    .unwrap();
    let brute = count_bruteforce(&ctx, &sys, &bx).unwrap();
    let spectral = count_spectral(&ctx, &sys, &bx).unwrap();
    println!("  brute force     = {brute}");
    println!("  spectral        = {}", spectral.count);

    // Power forms with gcd(m, p-1) = 1 permute the units, so over the
    // full box the count matches the identity-form count exactly.
    let full = BoxSpec::full(&ctx, 2).unwrap();
    let twisted = count_product_only(&ctx, a, &full, &[ProductForm::Power(7), ProductForm::Identity])
        .unwrap();
    let plain =
        count_product_only(&ctx, a, &full, &[ProductForm::Identity, ProductForm::Identity])
            .unwrap();
    println!("\nfull box, x^7 y = {a} versus x y = {a}: {twisted} = {plain}");
}
