//! Character and exponential sums over intervals in a prime field.
//!
//! Everything here is an exact finite sum, evaluated term by term in
//! double precision: the pure exponential sum `sum e_p(F(x))`, the mixed
//! sum `sum chi_t(G(x)) e_p(F(x))`, the batch of weighted character sums
//! `S(t) = sum w(x) chi_t(x)` over every character at once, the fourth
//! moment `sum_t |S(t)|^4`, and the integer count of ordered quadruples
//! with `x1*x2 == x3*x4 (mod p)` in an interval. The quadruple count uses
//! integer arithmetic only, which makes it an independent witness for the
//! fourth-moment identity relating the two.
//!
//! Sums accumulate in ascending `x`; once an interval exceeds
//! [`COMPENSATED_THRESHOLD`] terms, compensated summation tracks the
//! rounding error. Batch sums default to the direct `O(p*h)` kernel; an
//! arbitrary-length inverse Fourier transform over the `p-1` discrete-log
//! positions is available as an opt-in ([`SumAlgorithm::Fft`]) and must
//! agree with the direct kernel to `1e-9 * h`.

use crate::field::{FieldCtx, FieldError};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;
use thiserror::Error;

/// Interval length above which compensated summation is switched on.
pub const COMPENSATED_THRESHOLD: u32 = 100_000;

/// Default cap on the number of ordered pairs `h^2` a quadruple count
/// may enumerate (roughly 400 MB of transient product values).
pub const DEFAULT_PAIR_CAP: u64 = 100_000_000;

/// Errors from interval sums.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SumError {
    /// The interval `[u+1, u+h]` leaves `[1, p-1]` or is empty.
    #[error("interval start {u} length {h} does not fit in [1, {}]", p - 1)]
    IntervalOutOfRange { u: u64, h: u64, p: u32 },
    /// A character index outside `0..=p-2`.
    #[error("character index {t} out of range 0..={max}")]
    IndexOutOfRange { t: u32, max: u32 },
    /// A weight with absolute value above 1.
    #[error("weight {index} has absolute value {norm}, above 1")]
    WeightOutOfRange { index: usize, norm: f64 },
    /// Weight vector length differs from the interval length.
    #[error("expected {expected} weights, got {got}")]
    WeightCountMismatch { expected: usize, got: usize },
    /// Work size above the configured cap.
    #[error("work size {need} exceeds cap {cap}")]
    SizeGuard { need: u64, cap: u64 },
    /// Errors propagated from the field context.
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Validates that `[u+1, u+h]` is a nonempty subinterval of `[1, p-1]`.
pub(crate) fn validate_interval(ctx: &FieldCtx, u: u32, h: u32) -> Result<(), SumError> {
    let p = ctx.p();
    if h == 0 || u as u64 + h as u64 > (p - 1) as u64 {
        return Err(SumError::IntervalOutOfRange {
            u: u as u64,
            h: h as u64,
            p,
        });
    }
    Ok(())
}

/// A polynomial over `Z/pZ`, coefficients stored reduced, index = degree.
///
/// The zero polynomial is `[0]`; trailing zero coefficients are trimmed
/// on construction so `degree` is the honest degree (0 for constants).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMod {
    coeffs: Vec<u32>,
}

impl PolyMod {
    /// Builds a polynomial from `u64` coefficients, reducing each mod `p`.
    pub fn new(ctx: &FieldCtx, coeffs: &[u64]) -> Self {
        let mut c: Vec<u32> = coeffs.iter().map(|&v| ctx.reduce(v)).collect();
        while c.len() > 1 && *c.last().unwrap() == 0 {
            c.pop();
        }
        if c.is_empty() {
            c.push(0);
        }
        PolyMod { coeffs: c }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        PolyMod { coeffs: vec![0] }
    }

    /// The constant polynomial `c`.
    pub fn constant(ctx: &FieldCtx, c: u64) -> Self {
        PolyMod {
            coeffs: vec![ctx.reduce(c)],
        }
    }

    /// The monomial `c * X^k`.
    pub fn monomial(ctx: &FieldCtx, c: u64, k: u32) -> Self {
        let c = ctx.reduce(c);
        if c == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![0u32; k as usize + 1];
        coeffs[k as usize] = c;
        PolyMod { coeffs }
    }

    /// The identity polynomial `X`.
    pub fn identity() -> Self {
        PolyMod { coeffs: vec![0, 1] }
    }

    /// Coefficients, ascending by degree, length `degree + 1`.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Degree, with constants (including zero) reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0]
    }

    /// Horner evaluation at the reduced residue `x`.
    #[inline]
    pub fn eval(&self, ctx: &FieldCtx, x: u32) -> u32 {
        let p = ctx.p() as u64;
        debug_assert!((x as u64) < p);
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            debug_assert!((c as u64) < p, "coefficient not reduced for this field");
            acc = (acc * x as u64 + c as u64) % p;
        }
        acc as u32
    }
}

/// Complex weights `w(u+1), ..., w(u+h)` on an interval inside `[1, p-1]`,
/// each of absolute value at most 1.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalWeights {
    u: u32,
    h: u32,
    w: Vec<Complex64>,
}

impl IntervalWeights {
    /// Builds weights after checking the interval and `|w| <= 1`.
    ///
    /// A slack of `1e-9` absorbs rounding from unit-modulus constructions
    /// such as `from_polar(1.0, theta)`.
    pub fn new(ctx: &FieldCtx, u: u32, h: u32, w: Vec<Complex64>) -> Result<Self, SumError> {
        validate_interval(ctx, u, h)?;
        if w.len() != h as usize {
            return Err(SumError::WeightCountMismatch {
                expected: h as usize,
                got: w.len(),
            });
        }
        for (index, z) in w.iter().enumerate() {
            let norm = z.norm();
            if !(norm <= 1.0 + 1e-9) {
                return Err(SumError::WeightOutOfRange { index, norm });
            }
        }
        Ok(IntervalWeights { u, h, w })
    }

    /// The constant weight 1 on `[u+1, u+h]`.
    pub fn ones(ctx: &FieldCtx, u: u32, h: u32) -> Result<Self, SumError> {
        let w = vec![Complex64::new(1.0, 0.0); h as usize];
        Self::new(ctx, u, h, w)
    }

    pub fn u(&self) -> u32 {
        self.u
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.w
    }

    /// `sum |w(x)|^2`, the right-hand side of the Parseval identity up to
    /// the factor `p - 1`.
    pub fn norm_sq(&self) -> f64 {
        self.w.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Compensated (error-tracking) scalar accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    #[inline]
    pub(crate) fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(self) -> f64 {
        self.sum
    }
}

/// Compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanComplex {
    re: Kahan,
    im: Kahan,
}

impl KahanComplex {
    #[inline]
    pub(crate) fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub(crate) fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Sums `terms` in the order given, compensated above the threshold.
fn sum_terms(h: u32, terms: impl Iterator<Item = Complex64>) -> Complex64 {
    if h > COMPENSATED_THRESHOLD {
        let mut acc = KahanComplex::default();
        for z in terms {
            acc.add(z);
        }
        acc.value()
    } else {
        let mut acc = Complex64::new(0.0, 0.0);
        for z in terms {
            acc += z;
        }
        acc
    }
}

/// The exponential sum `sum_{x=u+1}^{u+h} e_p(F(x))`.
pub fn exp_sum(ctx: &FieldCtx, f: &PolyMod, u: u32, h: u32) -> Result<Complex64, SumError> {
    validate_interval(ctx, u, h)?;
    Ok(sum_terms(
        h,
        (u + 1..=u + h).map(|x| ctx.add_char(f.eval(ctx, x) as u64)),
    ))
}

/// The mixed sum `sum_{x=u+1}^{u+h} chi_t(G(x)) e_p(F(x))`.
///
/// Points with `G(x) == 0 (mod p)` contribute zero through the
/// `chi(0) = 0` convention; they are never an error.
pub fn mixed_char_sum(
    ctx: &FieldCtx,
    t: u32,
    g: &PolyMod,
    f: &PolyMod,
    u: u32,
    h: u32,
) -> Result<Complex64, SumError> {
    validate_interval(ctx, u, h)?;
    let m = ctx.group_order();
    if t >= m {
        return Err(SumError::IndexOutOfRange { t, max: m - 1 });
    }
    let ind = ctx.ind_table();
    let mult_roots = ctx.mult_roots();
    Ok(sum_terms(
        h,
        (u + 1..=u + h).map(|x| {
            let gx = g.eval(ctx, x);
            if gx == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                let j = (t as u64 * ind[gx as usize] as u64 % m as u64) as usize;
                mult_roots[j] * ctx.add_char(f.eval(ctx, x) as u64)
            }
        }),
    ))
}

/// Choice of kernel for all-character batch sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumAlgorithm {
    /// Index-stepping direct evaluation, `O((p-1) * h)`. The reference.
    #[default]
    Direct,
    /// Scatter weights to discrete-log positions and apply an
    /// arbitrary-length inverse Fourier transform of size `p - 1`.
    Fft,
}

/// A reusable spectrum kernel: maps `(dlog, weight)` pairs to the vector
/// `[sum_pairs w * chi_t(arg)]` over every character index `t`.
///
/// Building one amortizes transform planning across many calls, which is
/// what the spectral counter needs (one call per phase vector).
pub(crate) struct SpectrumKernel {
    m: usize,
    fft: Option<Arc<dyn Fft<f64>>>,
}

impl SpectrumKernel {
    pub(crate) fn new(ctx: &FieldCtx, algo: SumAlgorithm) -> Self {
        let m = ctx.group_order() as usize;
        let fft = match algo {
            SumAlgorithm::Direct => None,
            SumAlgorithm::Fft => Some(FftPlanner::new().plan_fft_inverse(m)),
        };
        SpectrumKernel { m, fft }
    }

    /// Evaluates the spectrum of the given `(dlog, weight)` pairs.
    ///
    /// Entry `t` of the result is `sum w * exp(2*pi*i*t*d/(p-1))`; callers
    /// drop zero arguments (where the character vanishes) before calling.
    pub(crate) fn spectrum(&self, ctx: &FieldCtx, pairs: &[(u32, Complex64)]) -> Vec<Complex64> {
        match &self.fft {
            None => {
                let roots = ctx.mult_roots();
                let mut out = vec![Complex64::new(0.0, 0.0); self.m];
                for &(d, w) in pairs {
                    debug_assert!((d as usize) < self.m);
                    // chi_t(g^d) = roots[t*d mod m]; step the index by d
                    // with a conditional subtract instead of a modulo.
                    let d = d as usize;
                    let mut idx = 0usize;
                    for slot in out.iter_mut() {
                        *slot += w * roots[idx];
                        idx += d;
                        if idx >= self.m {
                            idx -= self.m;
                        }
                    }
                }
                out
            }
            Some(fft) => {
                let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
                for &(d, w) in pairs {
                    buf[d as usize] += w;
                }
                // The unnormalized inverse transform has the kernel
                // exp(+2*pi*i*t*d/m), exactly the character table.
                fft.process(&mut buf);
                buf
            }
        }
    }
}

/// All weighted character sums at once, with the default (direct) kernel:
/// entry `t` is `S(t) = sum_{x=u+1}^{u+h} w(x) chi_t(x)`.
pub fn batch_char_sums(ctx: &FieldCtx, wts: &IntervalWeights) -> Vec<Complex64> {
    batch_char_sums_with(ctx, wts, SumAlgorithm::Direct)
}

/// All weighted character sums at once, with an explicit kernel choice.
pub fn batch_char_sums_with(
    ctx: &FieldCtx,
    wts: &IntervalWeights,
    algo: SumAlgorithm,
) -> Vec<Complex64> {
    let ind = ctx.ind_table();
    let pairs: Vec<(u32, Complex64)> = wts
        .weights()
        .iter()
        .enumerate()
        .map(|(i, &w)| (ind[(wts.u() + 1 + i as u32) as usize], w))
        .collect();
    SpectrumKernel::new(ctx, algo).spectrum(ctx, &pairs)
}

/// The fourth moment `sum_t |S(t)|^4` of the weighted character sums.
pub fn fourth_moment(ctx: &FieldCtx, wts: &IntervalWeights) -> f64 {
    let sums = batch_char_sums(ctx, wts);
    let mut acc = Kahan::default();
    for s in sums {
        let q = s.norm_sqr();
        acc.add(q * q);
    }
    acc.value()
}

/// The number of ordered quadruples `(x1, x2, x3, x4)` in `[u+1, u+h]^4`
/// with `x1 * x2 == x3 * x4 (mod p)`, under the default pair cap.
pub fn acz_quadruple_count(ctx: &FieldCtx, u: u32, h: u32) -> Result<u64, SumError> {
    acz_quadruple_count_with_cap(ctx, u, h, DEFAULT_PAIR_CAP)
}

/// Quadruple count with an explicit cap on the `h^2` enumerated pairs.
///
/// Groups ordered pairs by their product value and sums the squared
/// multiplicities; integer arithmetic throughout, so the result is exact
/// and independent of every complex-valued code path.
pub fn acz_quadruple_count_with_cap(
    ctx: &FieldCtx,
    u: u32,
    h: u32,
    pair_cap: u64,
) -> Result<u64, SumError> {
    validate_interval(ctx, u, h)?;
    let need = h as u64 * h as u64;
    if need > pair_cap {
        return Err(SumError::SizeGuard {
            need,
            cap: pair_cap,
        });
    }
    let p = ctx.p() as u64;
    let mut products: Vec<u32> = Vec::with_capacity(need as usize);
    for x1 in u + 1..=u + h {
        for x2 in u + 1..=u + h {
            products.push((x1 as u64 * x2 as u64 % p) as u32);
        }
    }
    products.sort_unstable();
    let mut total = 0u64;
    let mut run = 0u64;
    let mut prev = u32::MAX;
    for v in products {
        if v == prev {
            run += 1;
        } else {
            total += run * run;
            run = 1;
            prev = v;
        }
    }
    Ok(total + run * run)
}

/// The weighted quadruple sum `sum_v |P(v)|^2` with
/// `P(v) = sum_{x1*x2 == v} w(x1) w(x2)`, pairs taken from the interval.
///
/// By orthogonality this equals `fourth_moment / (p - 1)`; it is computed
/// here without characters, in `O(h^2)` pair work, so the two sides make
/// an honest cross-check. For `w == 1` the value is the quadruple count.
pub fn weighted_quadruple_sum(ctx: &FieldCtx, wts: &IntervalWeights) -> Result<f64, SumError> {
    let h = wts.h();
    let need = h as u64 * h as u64;
    if need > DEFAULT_PAIR_CAP {
        return Err(SumError::SizeGuard {
            need,
            cap: DEFAULT_PAIR_CAP,
        });
    }
    let p = ctx.p() as u64;
    let u = wts.u();
    let w = wts.weights();
    let mut by_product = vec![Complex64::new(0.0, 0.0); p as usize];
    for (i, &wi) in w.iter().enumerate() {
        let x1 = (u + 1 + i as u32) as u64;
        for (j, &wj) in w.iter().enumerate() {
            let x2 = (u + 1 + j as u32) as u64;
            by_product[(x1 * x2 % p) as usize] += wi * wj;
        }
    }
    let mut acc = Kahan::default();
    for z in by_product {
        acc.add(z.norm_sqr());
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn random_weights(ctx: &FieldCtx, u: u32, h: u32, seed: u64) -> IntervalWeights {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = (0..h)
            .map(|_| {
                let r: f64 = rng.random_range(0.0..=1.0);
                let theta: f64 = rng.random_range(0.0..TAU);
                Complex64::from_polar(r, theta)
            })
            .collect();
        IntervalWeights::new(ctx, u, h, w).unwrap()
    }

    fn random_poly(ctx: &FieldCtx, deg: usize, rng: &mut ChaCha8Rng) -> PolyMod {
        let coeffs: Vec<u64> = (0..=deg)
            .map(|_| rng.random_range(0..ctx.p() as u64))
            .collect();
        PolyMod::new(ctx, &coeffs)
    }

    #[test]
    fn poly_construction_and_eval() {
        let ctx = FieldCtx::new(7).unwrap();
        let f = PolyMod::new(&ctx, &[10, 7, 15]); // 3 + 0x + 1x^2
        assert_eq!(f.coeffs(), &[3, 0, 1]);
        assert_eq!(f.degree(), 2);
        assert_eq!(f.eval(&ctx, 2), 0); // 3 + 4 = 7 == 0
        assert_eq!(f.eval(&ctx, 3), 5); // 3 + 9 = 12 == 5
        let z = PolyMod::new(&ctx, &[0, 0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), 0);
        let m = PolyMod::monomial(&ctx, 9, 3); // 2 X^3
        assert_eq!(m.coeffs(), &[0, 0, 0, 2]);
        assert_eq!(PolyMod::monomial(&ctx, 7, 5), PolyMod::zero());
        assert_eq!(PolyMod::identity().eval(&ctx, 5), 5);
    }

    #[test]
    fn weights_validation() {
        let ctx = FieldCtx::new(11).unwrap();
        assert!(IntervalWeights::ones(&ctx, 0, 10).is_ok());
        assert_eq!(
            IntervalWeights::ones(&ctx, 0, 11).unwrap_err(),
            SumError::IntervalOutOfRange { u: 0, h: 11, p: 11 }
        );
        assert_eq!(
            IntervalWeights::ones(&ctx, 8, 0).unwrap_err(),
            SumError::IntervalOutOfRange { u: 8, h: 0, p: 11 }
        );
        let bad = vec![Complex64::new(1.5, 0.0)];
        match IntervalWeights::new(&ctx, 0, 1, bad).unwrap_err() {
            SumError::WeightOutOfRange { index, .. } => assert_eq!(index, 0),
            other => panic!("expected WeightOutOfRange, got {other:?}"),
        }
        assert_eq!(
            IntervalWeights::new(&ctx, 0, 3, vec![Complex64::new(1.0, 0.0); 2]).unwrap_err(),
            SumError::WeightCountMismatch {
                expected: 3,
                got: 2
            }
        );
    }

    #[test]
    fn exp_sum_full_interval_linear_is_minus_one() {
        // The interval [1, p-1] misses only x = 0, whose term is 1, and
        // the complete sum over all residues vanishes; so the sum over
        // the interval is exactly -1 for every c != 0.
        let ctx = FieldCtx::new(13).unwrap();
        for c in 1..13u64 {
            let f = PolyMod::new(&ctx, &[0, c]);
            let s = exp_sum(&ctx, &f, 0, 12).unwrap();
            assert!(
                (s - Complex64::new(-1.0, 0.0)).norm() < 1e-12,
                "c = {c}: sum = {s}"
            );
        }
    }

    #[test]
    fn exp_sum_zero_polynomial_counts_terms() {
        let ctx = FieldCtx::new(101).unwrap();
        let s = exp_sum(&ctx, &PolyMod::zero(), 17, 40).unwrap();
        assert_abs_diff_eq!(s.re, 40.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn exp_sum_cubes_mod_7() {
        // Cubes of 1..6 mod 7 are 1,1,6,1,6,6, so the sum collapses to
        // 3*(e_7(1) + e_7(6)) = 6 cos(2*pi/7).
        let ctx = FieldCtx::new(7).unwrap();
        let f = PolyMod::monomial(&ctx, 1, 3);
        let s = exp_sum(&ctx, &f, 0, 6).unwrap();
        assert_abs_diff_eq!(s.re, 6.0 * (TAU / 7.0).cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn exp_sum_matches_direct_trig_oracle() {
        let ctx = FieldCtx::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = random_poly(&ctx, 4, &mut rng);
            let u = rng.random_range(0..50u32);
            let h = rng.random_range(1..=50u32);
            let s = exp_sum(&ctx, &f, u, h).unwrap();
            let mut oracle = Complex64::new(0.0, 0.0);
            for x in u + 1..=u + h {
                let fx = f.eval(&ctx, x) as f64;
                oracle += Complex64::from_polar(1.0, TAU * fx / 101.0);
            }
            assert!((s - oracle).norm() < 1e-11 * h as f64);
        }
    }

    #[test]
    fn interval_validation_is_shared() {
        let ctx = FieldCtx::new(11).unwrap();
        let err = exp_sum(&ctx, &PolyMod::zero(), 5, 6).unwrap_err();
        assert_eq!(err, SumError::IntervalOutOfRange { u: 5, h: 6, p: 11 });
        let err = mixed_char_sum(&ctx, 0, &PolyMod::identity(), &PolyMod::zero(), 0, 0)
            .unwrap_err();
        assert_eq!(err, SumError::IntervalOutOfRange { u: 0, h: 0, p: 11 });
        let err = acz_quadruple_count(&ctx, 9, 2).unwrap_err();
        assert_eq!(err, SumError::IntervalOutOfRange { u: 9, h: 2, p: 11 });
    }

    #[test]
    fn mixed_char_sum_orthogonality_over_full_interval() {
        let ctx = FieldCtx::new(13).unwrap();
        let g = PolyMod::identity();
        let f = PolyMod::zero();
        for t in 1..12u32 {
            let s = mixed_char_sum(&ctx, t, &g, &f, 0, 12).unwrap();
            assert!(s.norm() < 1e-12, "t = {t}");
        }
        let s = mixed_char_sum(&ctx, 0, &g, &f, 0, 12).unwrap();
        assert_abs_diff_eq!(s.re, 12.0, epsilon = 1e-12);
    }

    #[test]
    fn mixed_char_sum_direct_five_terms() {
        // p = 11, t = 5, G = X, F = X^2, x = 3..7. Base-2 discrete logs
        // mod 11: ind(3)=8, ind(4)=2, ind(5)=4, ind(6)=9, ind(7)=7.
        let ctx = FieldCtx::new(11).unwrap();
        assert_eq!(ctx.generator(), 2);
        let s = mixed_char_sum(
            &ctx,
            5,
            &PolyMod::identity(),
            &PolyMod::monomial(&ctx, 1, 2),
            2,
            5,
        )
        .unwrap();
        let mut oracle = Complex64::new(0.0, 0.0);
        for x in 3u32..=7 {
            let ind = [0u32, 0, 1, 8, 2, 4, 9, 7, 3, 6, 5][x as usize];
            let chi = Complex64::from_polar(1.0, TAU * (5 * ind % 10) as f64 / 10.0);
            let ep = Complex64::from_polar(1.0, TAU * ((x * x) % 11) as f64 / 11.0);
            oracle += chi * ep;
        }
        assert!((s - oracle).norm() < 1e-12);
    }

    #[test]
    fn mixed_char_sum_skips_zeros_of_g() {
        // G(X) = X - 3 vanishes at x = 3 inside the interval; that term
        // contributes zero rather than failing.
        let ctx = FieldCtx::new(11).unwrap();
        let g = PolyMod::new(&ctx, &[8, 1]); // X + 8 == X - 3
        let f = PolyMod::zero();
        let s = mixed_char_sum(&ctx, 0, &g, &f, 0, 6).unwrap();
        // Principal character: 1 at each of the 5 nonzero values of G.
        assert_abs_diff_eq!(s.re, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn mixed_char_sum_rejects_bad_character_index() {
        let ctx = FieldCtx::new(11).unwrap();
        let err =
            mixed_char_sum(&ctx, 10, &PolyMod::identity(), &PolyMod::zero(), 0, 5).unwrap_err();
        assert_eq!(err, SumError::IndexOutOfRange { t: 10, max: 9 });
    }

    #[test]
    fn batch_entries_match_per_character_oracle() {
        let ctx = FieldCtx::new(13).unwrap();
        let wts = random_weights(&ctx, 2, 9, 42);
        let batch = batch_char_sums(&ctx, &wts);
        assert_eq!(batch.len(), 12);
        for t in 0..12u32 {
            let mut oracle = Complex64::new(0.0, 0.0);
            for (i, &w) in wts.weights().iter().enumerate() {
                let x = wts.u() + 1 + i as u32;
                oracle += w * ctx.mult_char(t, x).unwrap();
            }
            assert!(
                (batch[t as usize] - oracle).norm() < 1e-12,
                "t = {t}: {} vs {}",
                batch[t as usize],
                oracle
            );
        }
    }

    #[test]
    fn batch_trivial_cases() {
        let ctx = FieldCtx::new(13).unwrap();
        let full = IntervalWeights::ones(&ctx, 0, 12).unwrap();
        let batch = batch_char_sums(&ctx, &full);
        assert_abs_diff_eq!(batch[0].re, 12.0, epsilon = 1e-10);
        for t in 1..12 {
            assert!(batch[t].norm() < 1e-10, "t = {t}");
        }
        let single = IntervalWeights::ones(&ctx, 0, 1).unwrap();
        for (t, s) in batch_char_sums(&ctx, &single).iter().enumerate() {
            assert!((s - Complex64::new(1.0, 0.0)).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn direct_and_fft_kernels_agree() {
        for p in [13u64, 101, 1009] {
            let ctx = FieldCtx::new(p).unwrap();
            let h = (p / 2) as u32;
            let wts = random_weights(&ctx, 3, h, 1000 + p);
            let direct = batch_char_sums_with(&ctx, &wts, SumAlgorithm::Direct);
            let fft = batch_char_sums_with(&ctx, &wts, SumAlgorithm::Fft);
            let tol = 1e-9 * h as f64;
            for t in 0..direct.len() {
                assert!(
                    (direct[t] - fft[t]).norm() < tol,
                    "p = {p}, t = {t}: {} vs {}",
                    direct[t],
                    fft[t]
                );
            }
        }
    }

    #[test]
    fn parseval_identity() {
        for p in [7u64, 13, 101, 1009] {
            let ctx = FieldCtx::new(p).unwrap();
            let h = ((p - 1) / 2) as u32;
            let wts = random_weights(&ctx, 1, h, 2000 + p);
            let batch = batch_char_sums(&ctx, &wts);
            let lhs: f64 = batch.iter().map(|s| s.norm_sqr()).sum();
            let rhs = (p - 1) as f64 * wts.norm_sq();
            assert!(
                (lhs - rhs).abs() <= 1e-8 * rhs.max(1.0),
                "p = {p}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn fourth_moment_trivial_cases() {
        let ctx = FieldCtx::new(13).unwrap();
        let full = IntervalWeights::ones(&ctx, 0, 12).unwrap();
        let m4 = fourth_moment(&ctx, &full);
        assert!((m4 - 12.0f64.powi(4)).abs() < 1e-6 * 12.0f64.powi(4));
        let zero =
            IntervalWeights::new(&ctx, 0, 5, vec![Complex64::new(0.0, 0.0); 5]).unwrap();
        assert_abs_diff_eq!(fourth_moment(&ctx, &zero), 0.0, epsilon = 1e-20);

        let ctx5 = FieldCtx::new(5).unwrap();
        let full5 = IntervalWeights::ones(&ctx5, 0, 4).unwrap();
        let m4 = fourth_moment(&ctx5, &full5);
        assert!((m4 - 256.0).abs() < 1e-6 * 256.0);
        assert_eq!(acz_quadruple_count(&ctx5, 0, 4).unwrap(), 64);
    }

    #[test]
    fn fourth_moment_identity_with_unit_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for p in [13u64, 101] {
            let ctx = FieldCtx::new(p).unwrap();
            for _ in 0..10 {
                let h = rng.random_range(1..p as u32);
                let u = rng.random_range(0..p as u32 - h);
                let wts = IntervalWeights::ones(&ctx, u, h).unwrap();
                let m4 = fourth_moment(&ctx, &wts);
                let count = acz_quadruple_count(&ctx, u, h).unwrap();
                let rhs = (p - 1) as f64 * count as f64;
                assert!(
                    (m4 - rhs).abs() <= 1e-6 * rhs,
                    "p = {p}, u = {u}, h = {h}: {m4} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn fourth_moment_identity_with_general_weights_brute_force() {
        // Brute force over h^4 quadruples for small h: the moment must be
        // (p-1) * sum over x1*x2 == x3*x4 of w1*w2*conj(w3*w4).
        let ctx = FieldCtx::new(13).unwrap();
        for seed in 0..5u64 {
            let wts = random_weights(&ctx, 1, 9, 300 + seed);
            let w = wts.weights();
            let xs: Vec<u32> = (2..=10).collect();
            let mut brute = Complex64::new(0.0, 0.0);
            for (i1, &x1) in xs.iter().enumerate() {
                for (i2, &x2) in xs.iter().enumerate() {
                    for (i3, &x3) in xs.iter().enumerate() {
                        for (i4, &x4) in xs.iter().enumerate() {
                            if (x1 * x2) % 13 == (x3 * x4) % 13 {
                                brute += w[i1] * w[i2] * (w[i3] * w[i4]).conj();
                            }
                        }
                    }
                }
            }
            assert!(brute.im.abs() < 1e-9);
            let rhs = 12.0 * brute.re;
            let m4 = fourth_moment(&ctx, &wts);
            assert!(
                (m4 - rhs).abs() <= 1e-6 * rhs.abs().max(1.0),
                "seed {seed}: {m4} vs {rhs}"
            );
            let quad = weighted_quadruple_sum(&ctx, &wts).unwrap();
            assert!((quad - brute.re).abs() <= 1e-9 * brute.re.abs().max(1.0));
        }
    }

    #[test]
    fn quadruple_count_known_values() {
        let ctx5 = FieldCtx::new(5).unwrap();
        assert_eq!(acz_quadruple_count(&ctx5, 0, 4).unwrap(), 64);
        assert_eq!(acz_quadruple_count(&ctx5, 2, 1).unwrap(), 1);

        // Brute force over 5^4 ordered quadruples fixes the value 73.
        let ctx11 = FieldCtx::new(11).unwrap();
        let mut brute = 0u64;
        for x1 in 3u64..=7 {
            for x2 in 3u64..=7 {
                for x3 in 3u64..=7 {
                    for x4 in 3u64..=7 {
                        if x1 * x2 % 11 == x3 * x4 % 11 {
                            brute += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(brute, 73);
        assert_eq!(acz_quadruple_count(&ctx11, 2, 5).unwrap(), 73);
    }

    #[test]
    fn quadruple_count_size_guard() {
        let ctx = FieldCtx::new(101).unwrap();
        let err = acz_quadruple_count_with_cap(&ctx, 0, 50, 100).unwrap_err();
        assert_eq!(
            err,
            SumError::SizeGuard {
                need: 2500,
                cap: 100
            }
        );
    }

    proptest! {
        #[test]
        fn trivial_bound_holds(seed in 0u64..200, u in 0u32..60, h in 1u32..40, t in 0u32..100) {
            let ctx = FieldCtx::new(101).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_poly(&ctx, 3, &mut rng);
            let f = random_poly(&ctx, 3, &mut rng);
            let s = mixed_char_sum(&ctx, t, &g, &f, u, h).unwrap();
            prop_assert!(s.norm() <= h as f64 + 1e-9);
            let e = exp_sum(&ctx, &f, u, h).unwrap();
            prop_assert!(e.norm() <= h as f64 + 1e-9);
        }

        #[test]
        fn quadruple_count_dominates_diagonal(u in 0u32..60, h in 1u32..40) {
            let ctx = FieldCtx::new(101).unwrap();
            let count = acz_quadruple_count(&ctx, u, h).unwrap();
            prop_assert!(count >= 2 * (h as u64) * (h as u64) - h as u64);
        }

        #[test]
        fn batch_matches_oracle_on_random_intervals(seed in 0u64..50) {
            let ctx = FieldCtx::new(31).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = rng.random_range(1..30u32);
            let u = rng.random_range(0..(30 - h + 1));
            let wts = random_weights(&ctx, u, h, seed ^ 0xABCD);
            let batch = batch_char_sums(&ctx, &wts);
            for t in 0..30u32 {
                let mut oracle = Complex64::new(0.0, 0.0);
                for (i, &w) in wts.weights().iter().enumerate() {
                    oracle += w * ctx.mult_char(t, u + 1 + i as u32).unwrap();
                }
                prop_assert!((batch[t as usize] - oracle).norm() < 1e-11);
            }
        }
    }
}
