//! Exact counting of solutions to systems of a product congruence and
//! diagonal power congruences modulo a prime, inside axis-aligned boxes,
//! together with a lab for measuring classical character-sum and
//! exponential-sum bounds against exact data.
//!
//! The system under study, for an odd prime `p`, is
//!
//! ```text
//!     x_1 * x_2 * ... * x_n        == a    (mod p)
//!     sum_i c[i][j] * x_i^k[i][j]  == b[j] (mod p),   j = 1..s
//! ```
//!
//! with every coordinate confined to an interval `[u_i + 1, u_i + h]`
//! strictly inside `(0, p)`. Two counters are provided: plain enumeration
//! ([`counting::count_bruteforce`]) and a spectral counter
//! ([`counting::count_spectral`]) that rewrites the count through
//! character and exponential-sum orthogonality, replacing the `h^n` sweep
//! with products of one-dimensional sums. Both return identical integers;
//! the spectral route also reports a main-term / error-term decomposition.
//!
//! The [`bounds`] and [`sweep`] modules provide computable shapes of the
//! bounds of Chang, Wooley, and Ayyad-Cochrane-Zheng (and the Weil bound
//! for composite product forms), plus a seeded experiment runner that
//! compares exact quantities against those shapes and reports empirical
//! implied constants.
//!
//! ```
//! use boxcong::field::FieldCtx;
//! use boxcong::counting::{count_bruteforce, count_spectral, BoxSpec, SystemSpec};
//!
//! let ctx = FieldCtx::new(7).unwrap();
//! // x1*x2*x3 == 1, x1^3 + x2^3 + x3^3 == 3 (mod 7), full box.
//! let sys = SystemSpec::new(&ctx, 1, &[3], &[vec![1], vec![1], vec![1]],
//!                           &[vec![3], vec![3], vec![3]]).unwrap();
//! let bx = BoxSpec::full(&ctx, 3).unwrap();
//! let exact = count_bruteforce(&ctx, &sys, &bx).unwrap();
//! let spectral = count_spectral(&ctx, &sys, &bx).unwrap();
//! assert_eq!(exact, 9);
//! assert_eq!(spectral.count, 9);
//! ```
//!
//! The `examples/` directory of this crate walks through every major
//! capability; `cargo run --example count_box` is a good starting point.

pub mod bounds;
pub mod cli;
pub mod counting;
pub mod field;
pub mod sums;
pub mod sweep;
pub mod verify;

pub use counting::{count_bruteforce, count_product_only, count_spectral, BoxSpec, SystemSpec};
pub use field::FieldCtx;
