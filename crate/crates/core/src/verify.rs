//! A named self-check battery over randomized small instances.
//!
//! Each check exercises one identity or oracle-equivalence contract the
//! rest of the crate relies on: character orthogonality, Parseval,
//! the fourth-moment identity, agreement of the two counting engines,
//! and the fixed known values. Checks never abort the battery; a check
//! that errors internally is reported as failed with the error text.
//! Everything is seed-deterministic, and an injectable table fault lets
//! callers confirm that a corrupted context is actually detected.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bounds;
use crate::counting::{
    count_bruteforce, count_product_only, count_spectral, BoxSpec, ProductForm, SystemSpec,
};
use crate::field::{FieldCtx, FieldError, TableFault};
use crate::sums::{
    acz_quadruple_count, batch_char_sums, batch_char_sums_with, exp_sum, fourth_moment,
    mixed_char_sum, weighted_quadruple_sum, IntervalWeights, PolyMod, SumAlgorithm,
};

/// Default number of randomized instances per randomized check.
pub const DEFAULT_BATTERY: u32 = 20;

/// Default primes for the identity checks.
pub const DEFAULT_PRIMES: [u64; 4] = [7, 13, 101, 1009];

/// Primes used for the oracle-equivalence batteries, kept small so the
/// brute-force side stays cheap.
const ORACLE_PRIMES: [u64; 5] = [7, 11, 13, 31, 97];

/// Ways a battery can be invalid before any check runs.
#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("verification battery size must be at least 1")]
    EmptyBattery,
    #[error("verification needs at least one prime")]
    NoPrimes,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// What to verify: battery volume, primes for the identity checks, the
/// seed, and an optional injected table fault.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyPlan {
    pub seed: u64,
    /// Randomized instances per randomized check.
    pub battery: u32,
    /// Primes the identity checks run over.
    pub primes: Vec<u64>,
    /// When set, every field context is corrupted in one table entry
    /// before the checks run; a healthy battery must then fail.
    pub fault: Option<TableFault>,
}

impl VerifyPlan {
    /// The default battery: 20 instances over primes 7, 13, 101, 1009.
    pub fn new(seed: u64) -> Self {
        VerifyPlan {
            seed,
            battery: DEFAULT_BATTERY,
            primes: DEFAULT_PRIMES.to_vec(),
            fault: None,
        }
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// One line: worst deviation and tolerance, or the error text.
    pub detail: String,
}

/// The finished battery.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub battery: u32,
    pub primes: Vec<u64>,
    /// Name of the injected fault, when one was requested.
    pub fault: Option<String>,
    pub checks: Vec<CheckResult>,
    /// True iff every check passed.
    pub passed: bool,
}

/// Runs the battery. Checks run in a fixed order, each drawing from its
/// own generator stream under the plan seed, so reports are identical
/// across runs and machines.
pub fn run_verify(plan: &VerifyPlan) -> Result<VerifyReport, VerifyError> {
    if plan.battery == 0 {
        return Err(VerifyError::EmptyBattery);
    }
    if plan.primes.is_empty() {
        return Err(VerifyError::NoPrimes);
    }
    let ctxs: Vec<FieldCtx> = plan
        .primes
        .iter()
        .map(|&p| build_ctx(p, plan.fault))
        .collect::<Result<_, _>>()?;
    let oracle_ctxs: Vec<FieldCtx> = ORACLE_PRIMES
        .iter()
        .map(|&p| build_ctx(p, plan.fault))
        .collect::<Result<_, _>>()?;

    let b = plan.battery;
    let seed = plan.seed;
    let checks = vec![
        outcome("add-orthogonality", add_orthogonality(&ctxs)),
        outcome("mult-orthogonality", mult_orthogonality(&ctxs)),
        outcome("parseval", parseval(&ctxs, b, seed)),
        outcome("kernel-agreement", kernel_agreement(&ctxs, seed)),
        outcome("fourth-moment-identity", fourth_moment_identity(&ctxs, b, seed)),
        outcome("known-values", known_values(plan.fault)),
        outcome("trivial-bounds", trivial_bounds(&ctxs, b, seed)),
        outcome(
            "count-oracle-equivalence",
            oracle_equivalence(&oracle_ctxs, b, seed),
        ),
        outcome(
            "decomposition-identity",
            decomposition_identity(&oracle_ctxs, b, seed),
        ),
        outcome(
            "product-form-oracle",
            product_form_oracle(&oracle_ctxs, b, seed),
        ),
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        seed: plan.seed,
        battery: plan.battery,
        primes: plan.primes.clone(),
        fault: plan.fault.map(|f| f.name().to_string()),
        checks,
        passed,
    })
}

fn build_ctx(p: u64, fault: Option<TableFault>) -> Result<FieldCtx, FieldError> {
    let mut ctx = FieldCtx::new(p)?;
    if let Some(f) = fault {
        ctx.inject_table_fault(f);
    }
    Ok(ctx)
}

fn outcome(name: &'static str, result: Result<(bool, String), String>) -> CheckResult {
    match result {
        Ok((passed, detail)) => CheckResult {
            name,
            passed,
            detail,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: format!("errored: {e}"),
        },
    }
}

fn err_text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn check_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn rand_weights(
    rng: &mut ChaCha8Rng,
    ctx: &FieldCtx,
    u: u32,
    h: u32,
) -> Result<IntervalWeights, String> {
    let w: Vec<Complex64> = (0..h)
        .map(|_| Complex64::new(rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7)))
        .collect();
    IntervalWeights::new(ctx, u, h, w).map_err(err_text)
}

/// Complete additive character sums: sum over all residues of e_p(c z)
/// vanishes for c != 0 and equals p for c = 0.
fn add_orthogonality(ctxs: &[FieldCtx]) -> Result<(bool, String), String> {
    const TOL: f64 = 1e-8;
    let mut worst = 0.0f64;
    for ctx in ctxs {
        let p = u64::from(ctx.p());
        for c in 0..p {
            let mut sum = Complex64::new(0.0, 0.0);
            for z in 0..p {
                sum += ctx.add_char(c * z);
            }
            let expected = if c == 0 { p as f64 } else { 0.0 };
            let dev = (sum - expected).norm() / p as f64;
            worst = worst.max(dev);
        }
    }
    Ok((
        worst < TOL,
        format!("max relative deviation {worst:.3e} (tolerance {TOL:.0e})"),
    ))
}

/// Complete multiplicative character sums, both directions: over x for
/// each character, and over characters for each x.
fn mult_orthogonality(ctxs: &[FieldCtx]) -> Result<(bool, String), String> {
    const TOL: f64 = 1e-8;
    let mut worst = 0.0f64;
    for ctx in ctxs {
        let p = ctx.p();
        let m = ctx.group_order();
        let mf = f64::from(m);
        let ones = IntervalWeights::ones(ctx, 0, m).map_err(err_text)?;
        let sums = batch_char_sums(ctx, &ones);
        for (t, s) in sums.iter().enumerate() {
            let expected = if t == 0 { mf } else { 0.0 };
            worst = worst.max((s - expected).norm() / mf);
        }
        for x in 1..p {
            let mut sum = Complex64::new(0.0, 0.0);
            for t in 0..m {
                sum += ctx.mult_char(t, x).map_err(err_text)?;
            }
            let expected = if x == 1 { mf } else { 0.0 };
            worst = worst.max((sum - expected).norm() / mf);
        }
    }
    Ok((
        worst < TOL,
        format!("max relative deviation {worst:.3e} (tolerance {TOL:.0e})"),
    ))
}

/// Sum over characters of |S(t)|^2 equals (p-1) times the weight norm.
fn parseval(ctxs: &[FieldCtx], battery: u32, seed: u64) -> Result<(bool, String), String> {
    const TOL: f64 = 1e-8;
    let mut rng = check_rng(seed, 1);
    let mut worst = 0.0f64;
    for i in 0..battery {
        let ctx = &ctxs[i as usize % ctxs.len()];
        let p = u64::from(ctx.p());
        let h = rng.random_range(1..=(p - 1).min(64)) as u32;
        let u = rng.random_range(0..=(p - 1 - u64::from(h))) as u32;
        let wts = rand_weights(&mut rng, ctx, u, h)?;
        let sums = batch_char_sums(ctx, &wts);
        let lhs: f64 = sums.iter().map(|s| s.norm_sqr()).sum();
        let rhs = (p - 1) as f64 * wts.norm_sq();
        if rhs > 0.0 {
            worst = worst.max((lhs - rhs).abs() / rhs);
        }
    }
    Ok((
        worst < TOL,
        format!("max relative deviation {worst:.3e} over {battery} weight vectors (tolerance {TOL:.0e})"),
    ))
}

/// The stepping kernel and the FFT kernel produce the same spectra.
fn kernel_agreement(ctxs: &[FieldCtx], seed: u64) -> Result<(bool, String), String> {
    let mut rng = check_rng(seed, 2);
    let mut worst_rel = 0.0f64;
    let mut passed = true;
    for ctx in ctxs {
        let p = u64::from(ctx.p());
        let h = (p - 1).min(80) as u32;
        let u = rng.random_range(0..=(p - 1 - u64::from(h))) as u32;
        let wts = rand_weights(&mut rng, ctx, u, h)?;
        let direct = batch_char_sums_with(ctx, &wts, SumAlgorithm::Direct);
        let fft = batch_char_sums_with(ctx, &wts, SumAlgorithm::Fft);
        let tol = 1e-9 * f64::from(h);
        let worst = direct
            .iter()
            .zip(&fft)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        passed &= worst <= tol;
        worst_rel = worst_rel.max(worst / f64::from(h));
    }
    Ok((
        passed,
        format!("max deviation {worst_rel:.3e} of the per-term tolerance 1e-9"),
    ))
}

/// The fourth moment equals (p-1) times the weighted quadruple sum, and
/// (p-1) times the quadruple count for unit weights.
fn fourth_moment_identity(
    ctxs: &[FieldCtx],
    battery: u32,
    seed: u64,
) -> Result<(bool, String), String> {
    const TOL: f64 = 1e-6;
    let mut rng = check_rng(seed, 3);
    let mut worst = 0.0f64;
    for i in 0..battery {
        let ctx = &ctxs[i as usize % ctxs.len()];
        let p = u64::from(ctx.p());
        let h = rng.random_range(1..=(p - 1).min(48)) as u32;
        let u = rng.random_range(0..=(p - 1 - u64::from(h))) as u32;

        let wts = rand_weights(&mut rng, ctx, u, h)?;
        let moment = fourth_moment(ctx, &wts);
        let quad = weighted_quadruple_sum(ctx, &wts).map_err(err_text)?;
        let rhs = (p - 1) as f64 * quad;
        let scale = rhs.abs().max(1.0);
        worst = worst.max((moment - rhs).abs() / scale);

        let ones = IntervalWeights::ones(ctx, u, h).map_err(err_text)?;
        let moment1 = fourth_moment(ctx, &ones);
        let count = acz_quadruple_count(ctx, u, h).map_err(err_text)? as f64;
        let rhs1 = (p - 1) as f64 * count;
        worst = worst.max((moment1 - rhs1).abs() / rhs1.max(1.0));
    }
    Ok((
        worst < TOL,
        format!("max relative deviation {worst:.3e} over {battery} instances (tolerance {TOL:.0e})"),
    ))
}

/// The fixed values every engine must reproduce exactly.
fn known_values(fault: Option<TableFault>) -> Result<(bool, String), String> {
    let mut failures: Vec<String> = Vec::new();

    let ctx7 = build_ctx(7, fault).map_err(err_text)?;
    let empty = vec![Vec::new(); 3];
    let sys = SystemSpec::new(&ctx7, 5, &[], &empty, &empty).map_err(err_text)?;
    let bx = BoxSpec::full(&ctx7, 3).map_err(err_text)?;
    match count_spectral(&ctx7, &sys, &bx) {
        Ok(res) if res.count == 36 => {}
        Ok(res) => failures.push(format!("product-only full box gave {}", res.count)),
        Err(e) => failures.push(format!("product-only full box errored: {e}")),
    }

    let sys = SystemSpec::new(
        &ctx7,
        1,
        &[3],
        &[vec![1], vec![1], vec![1]],
        &[vec![3], vec![3], vec![3]],
    )
    .map_err(err_text)?;
    match count_spectral(&ctx7, &sys, &bx) {
        Ok(res) if res.count == 9 => {}
        Ok(res) => failures.push(format!("cubic diagonal full box gave {}", res.count)),
        Err(e) => failures.push(format!("cubic diagonal full box errored: {e}")),
    }

    let ctx5 = build_ctx(5, fault).map_err(err_text)?;
    match acz_quadruple_count(&ctx5, 0, 4) {
        Ok(64) => {}
        Ok(c) => failures.push(format!("quadruple count (p=5) gave {c}")),
        Err(e) => failures.push(format!("quadruple count (p=5) errored: {e}")),
    }
    let ctx11 = build_ctx(11, fault).map_err(err_text)?;
    match acz_quadruple_count(&ctx11, 2, 5) {
        Ok(73) => {}
        Ok(c) => failures.push(format!("quadruple count (p=11) gave {c}")),
        Err(e) => failures.push(format!("quadruple count (p=11) errored: {e}")),
    }

    let ones = IntervalWeights::ones(&ctx5, 0, 4).map_err(err_text)?;
    let moment = fourth_moment(&ctx5, &ones);
    if (moment - 256.0).abs() > 1e-6 {
        failures.push(format!("full-group fourth moment gave {moment}"));
    }

    let eta = bounds::eta(0.25, 3).map_err(err_text)?;
    let eta_expected = 0.0625 / 108.0;
    if (eta - eta_expected).abs() > 1e-12 * eta_expected {
        failures.push(format!("eta(0.25, 3) gave {eta}"));
    }
    let wooley = bounds::wooley_bound(100, 1_000_000, 3).map_err(err_text)?;
    let wooley_expected = 100f64.powf(5.0 / 6.0) + 10.0 * 100f64.powf(0.5);
    if (wooley - wooley_expected).abs() > 1e-9 * wooley_expected {
        failures.push(format!("wooley_bound(100, 10^6, 3) gave {wooley}"));
    }

    if failures.is_empty() {
        Ok((true, "7 fixed values reproduced exactly".to_string()))
    } else {
        Ok((false, failures.join("; ")))
    }
}

/// Character and exponential sums never exceed the interval length.
fn trivial_bounds(ctxs: &[FieldCtx], battery: u32, seed: u64) -> Result<(bool, String), String> {
    let mut rng = check_rng(seed, 4);
    let mut worst = 0.0f64;
    for i in 0..battery {
        let ctx = &ctxs[i as usize % ctxs.len()];
        let p = u64::from(ctx.p());
        let m = ctx.group_order();
        let h = rng.random_range(1..=(p - 1).min(200)) as u32;
        let u = rng.random_range(0..=(p - 1 - u64::from(h))) as u32;
        let t = if m >= 2 { rng.random_range(1..m) } else { 0 };
        let f = PolyMod::new(
            ctx,
            &[
                rng.random_range(0..p),
                rng.random_range(0..p),
                rng.random_range(0..p),
                rng.random_range(1..p),
            ],
        );
        let g = if i % 2 == 0 {
            PolyMod::identity()
        } else {
            PolyMod::new(ctx, &[rng.random_range(0..p), rng.random_range(0..p), 1])
        };
        let mixed = mixed_char_sum(ctx, t, &g, &f, u, h).map_err(err_text)?;
        let plain = exp_sum(ctx, &f, u, h).map_err(err_text)?;
        worst = worst.max(mixed.norm() / f64::from(h));
        worst = worst.max(plain.norm() / f64::from(h));
    }
    Ok((
        worst <= 1.0 + 1e-12,
        format!("max |sum|/h = {worst:.6} over {battery} instances (must stay at or below 1)"),
    ))
}

fn rand_system(
    rng: &mut ChaCha8Rng,
    ctx: &FieldCtx,
    n: usize,
    s: usize,
    h: u32,
) -> Result<(SystemSpec, BoxSpec), String> {
    let p = u64::from(ctx.p());
    let a = rng.random_range(1..p);
    let b: Vec<u64> = (0..s).map(|_| rng.random_range(0..p)).collect();
    let c: Vec<Vec<u64>> = (0..n)
        .map(|_| (0..s).map(|_| rng.random_range(1..p)).collect())
        .collect();
    let k: Vec<Vec<u64>> = (0..n)
        .map(|_| {
            let mut pool: Vec<u64> = (3..=7).collect();
            for j in (1..pool.len()).rev() {
                pool.swap(j, rng.random_range(0..=j));
            }
            let mut picked = pool[..s].to_vec();
            picked.sort_unstable();
            picked
        })
        .collect();
    let u: Vec<u32> = (0..n)
        .map(|_| rng.random_range(0..=(p - 1 - u64::from(h))) as u32)
        .collect();
    let sys = SystemSpec::new(ctx, a, &b, &c, &k).map_err(err_text)?;
    let bx = BoxSpec::new(ctx, u, h).map_err(err_text)?;
    Ok((sys, bx))
}

/// The spectral counter and brute force agree exactly on random small
/// instances.
fn oracle_equivalence(
    ctxs: &[FieldCtx],
    battery: u32,
    seed: u64,
) -> Result<(bool, String), String> {
    let mut rng = check_rng(seed, 5);
    let mut worst_residual = 0.0f64;
    let mut mismatches = 0u32;
    for i in 0..battery {
        let ctx = &ctxs[i as usize % ctxs.len()];
        let p = u64::from(ctx.p());
        let n = rng.random_range(2..=4usize);
        let s_max = if p > 31 { 1 } else { 2 };
        let s = rng.random_range(0..=s_max);
        let h = rng.random_range(2..=(p - 1).min(6)) as u32;
        let (sys, bx) = rand_system(&mut rng, ctx, n, s, h)?;
        let brute = count_bruteforce(ctx, &sys, &bx).map_err(err_text)?;
        let spectral = count_spectral(ctx, &sys, &bx).map_err(err_text)?;
        if spectral.count != brute {
            mismatches += 1;
        }
        worst_residual = worst_residual.max(spectral.residual);
    }
    Ok((
        mismatches == 0,
        format!("{mismatches} mismatches over {battery} instances, max residual {worst_residual:.3e}"),
    ))
}

/// count = main + nonprincipal + principal excess, with a real total.
fn decomposition_identity(
    ctxs: &[FieldCtx],
    battery: u32,
    seed: u64,
) -> Result<(bool, String), String> {
    let mut rng = check_rng(seed, 6);
    let mut worst = 0.0f64;
    for i in 0..battery {
        let ctx = &ctxs[i as usize % ctxs.len()];
        let p = u64::from(ctx.p());
        let n = rng.random_range(2..=4usize);
        let s_max = if p > 31 { 1 } else { 2 };
        let s = rng.random_range(0..=s_max);
        let h = rng.random_range(2..=(p - 1).min(6)) as u32;
        let (sys, bx) = rand_system(&mut rng, ctx, n, s, h)?;
        let res = count_spectral(ctx, &sys, &bx).map_err(err_text)?;
        let total = res.main_term + res.nonprincipal.re + res.principal_excess.re;
        let tol = 1e-6 * (res.count as f64).max(1.0);
        let real_gap = (total - res.count as f64).abs() / tol;
        let imag_gap = (res.nonprincipal.im + res.principal_excess.im).abs() / tol;
        worst = worst.max(real_gap).max(imag_gap);
    }
    Ok((
        worst <= 1.0,
        format!("worst deviation at {worst:.3e} of tolerance over {battery} instances"),
    ))
}

/// The closed-form product-only counter agrees with brute force and the
/// full spectral counter for every product form.
fn product_form_oracle(
    ctxs: &[FieldCtx],
    battery: u32,
    seed: u64,
) -> Result<(bool, String), String> {
    let mut rng = check_rng(seed, 7);
    let small: Vec<&FieldCtx> = ctxs.iter().filter(|c| c.p() <= 13).collect();
    if small.is_empty() {
        return Err("no small primes available".to_string());
    }
    let mut mismatches = 0u32;
    for i in 0..battery {
        let ctx = small[i as usize % small.len()];
        let p = u64::from(ctx.p());
        let n = rng.random_range(2..=3usize);
        let h = rng.random_range(2..=5u64).min(p - 1) as u32;
        let a = rng.random_range(1..p);
        let forms: Vec<ProductForm> = (0..n)
            .map(|_| match rng.random_range(0..3u8) {
                0 => ProductForm::Identity,
                1 => {
                    let m = loop {
                        let m = rng.random_range(2..=30u64);
                        if gcd(m, p - 1) == 1 {
                            break m;
                        }
                    };
                    ProductForm::Power(m)
                }
                _ => {
                    let d = rng.random_range(1..=2usize);
                    let mut coeffs: Vec<u64> = (0..d).map(|_| rng.random_range(0..p)).collect();
                    coeffs.push(rng.random_range(1..p));
                    ProductForm::Poly(PolyMod::new(ctx, &coeffs))
                }
            })
            .collect();
        let u: Vec<u32> = (0..n)
            .map(|_| rng.random_range(0..=(p - 1 - u64::from(h))) as u32)
            .collect();
        let bx = BoxSpec::new(ctx, u, h).map_err(err_text)?;

        let direct = count_product_only(ctx, a, &bx, &forms).map_err(err_text)?;
        let empty = vec![Vec::new(); n];
        let sys = SystemSpec::new(ctx, a, &[], &empty, &empty)
            .map_err(err_text)?
            .with_product_forms(ctx, forms)
            .map_err(err_text)?;
        let brute = count_bruteforce(ctx, &sys, &bx).map_err(err_text)?;
        let spectral = count_spectral(ctx, &sys, &bx).map_err(err_text)?;
        if direct != brute || spectral.count != brute {
            mismatches += 1;
        }
    }
    Ok((
        mismatches == 0,
        format!("{mismatches} mismatches over {battery} instances"),
    ))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_battery_passes() {
        let report = run_verify(&VerifyPlan::new(1)).unwrap();
        for check in &report.checks {
            assert!(check.passed, "{} failed: {}", check.name, check.detail);
        }
        assert!(report.passed);
        assert_eq!(report.checks.len(), 10);
        let names: Vec<&str> = report.checks.iter().map(|c| c.name).collect();
        assert_eq!(
            names,
            [
                "add-orthogonality",
                "mult-orthogonality",
                "parseval",
                "kernel-agreement",
                "fourth-moment-identity",
                "known-values",
                "trivial-bounds",
                "count-oracle-equivalence",
                "decomposition-identity",
                "product-form-oracle",
            ]
        );
    }

    #[test]
    fn reports_are_seed_deterministic() {
        let mut plan = VerifyPlan::new(99);
        plan.battery = 6;
        plan.primes = vec![7, 13];
        let a = run_verify(&plan).unwrap();
        let b = run_verify(&plan).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_battery_is_rejected() {
        let mut plan = VerifyPlan::new(1);
        plan.battery = 0;
        assert!(matches!(run_verify(&plan), Err(VerifyError::EmptyBattery)));
    }

    #[test]
    fn empty_prime_list_is_rejected() {
        let mut plan = VerifyPlan::new(1);
        plan.primes = Vec::new();
        assert!(matches!(run_verify(&plan), Err(VerifyError::NoPrimes)));
    }

    #[test]
    fn composite_prime_is_rejected() {
        let mut plan = VerifyPlan::new(1);
        plan.primes = vec![7, 15];
        assert!(matches!(run_verify(&plan), Err(VerifyError::Field(_))));
    }

    fn run_with_fault(fault: TableFault) -> VerifyReport {
        let mut plan = VerifyPlan::new(5);
        plan.battery = 3;
        plan.primes = vec![7, 13];
        plan.fault = Some(fault);
        run_verify(&plan).unwrap()
    }

    fn check<'r>(report: &'r VerifyReport, name: &str) -> &'r CheckResult {
        report.checks.iter().find(|c| c.name == name).unwrap()
    }

    #[test]
    fn dlog_fault_is_detected_by_name() {
        let report = run_with_fault(TableFault::Dlog);
        assert!(!report.passed);
        assert!(!check(&report, "mult-orthogonality").passed);
        assert_eq!(report.fault.as_deref(), Some("dlog"));
    }

    #[test]
    fn add_root_fault_is_detected_by_name() {
        let report = run_with_fault(TableFault::AddRoot);
        assert!(!report.passed);
        assert!(!check(&report, "add-orthogonality").passed);
    }

    #[test]
    fn mult_root_fault_is_detected_by_name() {
        let report = run_with_fault(TableFault::MultRoot);
        assert!(!report.passed);
        assert!(!check(&report, "mult-orthogonality").passed);
    }

    #[test]
    fn fault_names_round_trip() {
        for f in [TableFault::Dlog, TableFault::AddRoot, TableFault::MultRoot] {
            assert_eq!(TableFault::parse(f.name()), Some(f));
        }
        assert_eq!(TableFault::parse("nothing"), None);
    }
}
