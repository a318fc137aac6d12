//! Exact counting of box points satisfying a product congruence and a
//! system of diagonal power congruences, two ways.
//!
//! The system, over an odd prime `p` with unit `a` and units `c[i][j]`:
//!
//! ```text
//!     G_1(x_1) * ... * G_n(x_n)     == a    (mod p)
//!     sum_i c[i][j] * x_i^k[i][j]   == b[j] (mod p),   j = 1..s
//!     u_i + 1 <= x_i <= u_i + h
//! ```
//!
//! with `G_i(X) = X` by default (plain product of the coordinates).
//!
//! [`count_bruteforce`] enumerates the `h^n` lattice points with
//! incremental product and diagonal-sum state. [`count_spectral`]
//! evaluates the same integer through orthogonality: averaging the
//! multiplicative characters detects the product congruence, averaging
//! additive characters over phase vectors detects each diagonal one,
//! and the box factorizes into one-dimensional weighted character sums
//!
//! ```text
//!     T_i(t; y) = sum_{x=u_i+1}^{u_i+h} chi_t(G_i(x)) e_p(sum_j y_j c[i][j] x^k[i][j]),
//! ```
//!
//! so the count is
//!
//! ```text
//!     (1/((p-1) p^s)) sum_{y in [0,p-1]^s} e_p(-sum_j y_j b[j])
//!                     sum_t chi_t(a^{-1}) prod_i T_i(t; y).
//! ```
//!
//! The spectral route also reports the decomposition of the count into
//! the main term `h^n/((p-1) p^s)`, the total non-principal-character
//! contribution, and the principal-character remainder; the two counters
//! must agree exactly, which is the backbone of the test suite.

use crate::field::{mod_pow, FieldCtx};
use crate::sums::{KahanComplex, PolyMod, SpectrumKernel, SumAlgorithm, SumError};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

/// Default cap on brute-force lattice evaluations `h^n`.
pub const DEFAULT_BRUTE_CAP: u128 = 1_000_000_000;

/// Default cap on the spectral cost estimate `p^s * (p-1) * n * h`.
pub const DEFAULT_COST_CAP: u128 = 10_000_000_000;

/// Counts above which a double-precision total can no longer certify an
/// exact integer (2^53).
const INT_EXACT_LIMIT: f64 = 9_007_199_254_740_992.0;

/// Phase vectors are processed in fixed-size chunks; partial sums are
/// folded in chunk order, so results do not depend on the worker count.
const PHASE_CHUNK: u64 = 64;

/// Errors from system construction and counting.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CountError {
    /// Mismatched or degenerate array shapes.
    #[error("bad system shape: {0}")]
    BadShape(String),
    /// The product target or a diagonal coefficient reduced to zero.
    #[error("{what} must be a unit mod {p}")]
    NotAUnit { what: String, p: u32 },
    /// A diagonal exponent of zero.
    #[error("exponent k[{i}][{j}] must be at least 1")]
    ZeroExponent { i: usize, j: usize },
    /// Strict mode requires `3 <= k[i][1] < ... < k[i][s]` per variable.
    #[error("exponents for variable {i} violate the ladder 3 <= k_1 < ... < k_s")]
    ExponentLadder { i: usize },
    /// A pure-power product form whose exponent shares a factor with `p-1`.
    #[error("power form X^{m} for variable {i} needs gcd(m, p-1) = 1")]
    PowerNotCoprime { i: usize, m: u64 },
    /// A box axis leaving `[1, p-1]`.
    #[error("box axis {i}: start {u} length {h} does not fit in [1, {}]", p - 1)]
    BoxOutOfRange { i: usize, u: u64, h: u64, p: u32 },
    /// System and box disagree on the number of variables.
    #[error("dimension mismatch: system has {sys} variables, box has {bx}")]
    DimensionMismatch { sys: usize, bx: usize },
    /// Brute-force enumeration size above the cap.
    #[error("enumeration size {need} exceeds cap {cap}")]
    SizeGuard { need: u128, cap: u128 },
    /// Spectral cost estimate above the cap.
    #[error("spectral cost estimate {need} exceeds cap {cap}")]
    CostGuard { need: u128, cap: u128 },
    /// The complex total refused to settle on an integer.
    #[error("count failed to certify: residual {residual:.3e} over tolerance {tolerance:.3e}")]
    PrecisionLoss { residual: f64, tolerance: f64 },
    /// Errors propagated from the sum layer.
    #[error(transparent)]
    Sum(#[from] SumError),
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The factor contributed by one variable to the product congruence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductForm {
    /// `G(X) = X`, the plain product of coordinates.
    Identity,
    /// `G(X) = X^m` with `gcd(m, p-1) = 1`, a bijective power.
    Power(u64),
    /// An arbitrary polynomial factor; may vanish inside the box, and
    /// such points simply never satisfy the product congruence.
    Poly(PolyMod),
}

impl ProductForm {
    /// Evaluates the form at a reduced residue.
    pub fn eval(&self, ctx: &FieldCtx, x: u32) -> u32 {
        match self {
            ProductForm::Identity => x,
            ProductForm::Power(m) => {
                // x != 0 on every box axis, so the exponent reduces
                // mod p-1; a reduced exponent of 0 means x^(p-1) = 1.
                let e = m % (ctx.p() as u64 - 1);
                if x == 0 {
                    0
                } else if e == 0 {
                    1
                } else {
                    mod_pow(x as u64, e, ctx.p() as u64) as u32
                }
            }
            ProductForm::Poly(f) => f.eval(ctx, x),
        }
    }

    fn validate(&self, ctx: &FieldCtx, i: usize) -> Result<(), CountError> {
        if let ProductForm::Power(m) = self {
            if gcd(*m, ctx.p() as u64 - 1) != 1 {
                return Err(CountError::PowerNotCoprime { i, m: *m });
            }
        }
        Ok(())
    }

    fn describe(&self) -> String {
        match self {
            ProductForm::Identity => "X".to_string(),
            ProductForm::Power(m) => format!("X^{m}"),
            ProductForm::Poly(f) => format!("polynomial of degree {}", f.degree()),
        }
    }
}

/// A validated instance of the congruence system.
///
/// Construction reduces all residues mod `p`, rejects non-unit `a` or
/// `c[i][j]`, and rejects shape mismatches. Exponent ladders
/// (`3 <= k_1 < ... < k_s` per variable) are enforced as an error by
/// [`SystemSpec::new_strict`] and recorded as a warning otherwise, as
/// are the out-of-regime cases `s = 0` and `n = 2`; the counters are
/// exact in every accepted case, only the error-bound guarantees need
/// the stricter hypotheses.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    p: u32,
    a: u32,
    b: Vec<u32>,
    c: Vec<Vec<u32>>,
    k: Vec<Vec<u64>>,
    forms: Vec<ProductForm>,
    warnings: Vec<String>,
}

impl SystemSpec {
    /// Builds a system, recording regime violations as warnings.
    pub fn new(
        ctx: &FieldCtx,
        a: u64,
        b: &[u64],
        c: &[Vec<u64>],
        k: &[Vec<u64>],
    ) -> Result<Self, CountError> {
        Self::build(ctx, a, b, c, k, false)
    }

    /// Builds a system, rejecting exponent-ladder violations outright.
    pub fn new_strict(
        ctx: &FieldCtx,
        a: u64,
        b: &[u64],
        c: &[Vec<u64>],
        k: &[Vec<u64>],
    ) -> Result<Self, CountError> {
        Self::build(ctx, a, b, c, k, true)
    }

    fn build(
        ctx: &FieldCtx,
        a: u64,
        b: &[u64],
        c: &[Vec<u64>],
        k: &[Vec<u64>],
        strict: bool,
    ) -> Result<Self, CountError> {
        let n = c.len();
        let s = b.len();
        if n < 2 {
            return Err(CountError::BadShape(format!(
                "need at least 2 variables, got {n}"
            )));
        }
        if k.len() != n {
            return Err(CountError::BadShape(format!(
                "coefficient rows ({n}) and exponent rows ({}) differ",
                k.len()
            )));
        }
        for i in 0..n {
            if c[i].len() != s || k[i].len() != s {
                return Err(CountError::BadShape(format!(
                    "variable {i}: expected {s} coefficients and exponents, got {} and {}",
                    c[i].len(),
                    k[i].len()
                )));
            }
        }
        let p = ctx.p();
        let a_red = ctx.reduce(a);
        if a_red == 0 {
            return Err(CountError::NotAUnit {
                what: "product target a".to_string(),
                p,
            });
        }
        let b_red: Vec<u32> = b.iter().map(|&v| ctx.reduce(v)).collect();
        let mut c_red = Vec::with_capacity(n);
        for (i, row) in c.iter().enumerate() {
            let mut out = Vec::with_capacity(s);
            for (j, &v) in row.iter().enumerate() {
                let r = ctx.reduce(v);
                if r == 0 {
                    return Err(CountError::NotAUnit {
                        what: format!("coefficient c[{i}][{j}]"),
                        p,
                    });
                }
                out.push(r);
            }
            c_red.push(out);
        }
        let mut warnings = Vec::new();
        for (i, row) in k.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e == 0 {
                    return Err(CountError::ZeroExponent { i, j });
                }
            }
            let ladder_ok =
                s == 0 || (row[0] >= 3 && row.windows(2).all(|w| w[0] < w[1]));
            if !ladder_ok {
                if strict {
                    return Err(CountError::ExponentLadder { i });
                }
                warnings.push(format!(
                    "variable {i}: exponents {row:?} violate the ladder 3 <= k_1 < ... < k_s; \
                     counts stay exact, error-bound guarantees do not apply"
                ));
            }
        }
        if s == 0 {
            warnings.push(
                "s = 0: no diagonal congruences; this is the product-only regime".to_string(),
            );
        }
        if n == 2 {
            warnings.push(
                "n = 2: accepted for testing; density guarantees need more variables".to_string(),
            );
        }
        Ok(SystemSpec {
            p,
            a: a_red,
            b: b_red,
            c: c_red,
            k: k.to_vec(),
            forms: vec![ProductForm::Identity; n],
            warnings,
        })
    }

    /// Replaces the per-variable product forms (default: all `X`).
    pub fn with_product_forms(
        mut self,
        ctx: &FieldCtx,
        forms: Vec<ProductForm>,
    ) -> Result<Self, CountError> {
        if forms.len() != self.n() {
            return Err(CountError::BadShape(format!(
                "expected {} product forms, got {}",
                self.n(),
                forms.len()
            )));
        }
        for (i, f) in forms.iter().enumerate() {
            f.validate(ctx, i)?;
        }
        self.forms = forms;
        Ok(self)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn s(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    pub fn c(&self) -> &[Vec<u32>] {
        &self.c
    }

    pub fn k(&self) -> &[Vec<u64>] {
        &self.k
    }

    pub fn forms(&self) -> &[ProductForm] {
        &self.forms
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Largest diagonal exponent, 0 when `s = 0`.
    pub fn max_exponent(&self) -> u64 {
        self.k.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Smallest diagonal exponent, 0 when `s = 0`.
    pub fn min_exponent(&self) -> u64 {
        self.k.iter().flatten().copied().min().unwrap_or(0)
    }
}

/// An axis-aligned box `[u_1+1, u_1+h] x ... x [u_n+1, u_n+h]` with a
/// common side length, every axis inside `[1, p-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxSpec {
    u: Vec<u32>,
    h: u32,
}

impl BoxSpec {
    pub fn new(ctx: &FieldCtx, u: Vec<u32>, h: u32) -> Result<Self, CountError> {
        if u.is_empty() {
            return Err(CountError::BadShape("box needs at least one axis".into()));
        }
        for (i, &ui) in u.iter().enumerate() {
            validate_axis(ctx, i, ui, h)?;
        }
        Ok(BoxSpec { u, h })
    }

    /// The full box `[1, p-1]^n`.
    pub fn full(ctx: &FieldCtx, n: usize) -> Result<Self, CountError> {
        Self::new(ctx, vec![0; n], ctx.p() - 1)
    }

    /// The cube `[u+1, u+h]^n` with one start shared by every axis.
    pub fn cube(ctx: &FieldCtx, n: usize, u: u32, h: u32) -> Result<Self, CountError> {
        Self::new(ctx, vec![u; n], h)
    }

    pub fn u(&self) -> &[u32] {
        &self.u
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }
}

fn validate_axis(ctx: &FieldCtx, i: usize, u: u32, h: u32) -> Result<(), CountError> {
    let p = ctx.p();
    if h == 0 || u as u64 + h as u64 > (p - 1) as u64 {
        return Err(CountError::BoxOutOfRange {
            i,
            u: u as u64,
            h: h as u64,
            p,
        });
    }
    Ok(())
}

/// Knobs for the counting engines. `Default` gives the production
/// settings: direct kernel, caps at [`DEFAULT_BRUTE_CAP`] and
/// [`DEFAULT_COST_CAP`], compensated summation only on retry.
#[derive(Debug, Clone)]
pub struct CountOptions {
    /// Kernel for the all-character spectra.
    pub algo: SumAlgorithm,
    /// Cap on brute-force evaluations `h^n`.
    pub brute_cap: u128,
    /// Cap on the spectral cost estimate `p^s * (p-1) * n * h`.
    pub cost_cap: u128,
    /// Start with compensated summation instead of reaching it on retry.
    pub compensated: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            algo: SumAlgorithm::Direct,
            brute_cap: DEFAULT_BRUTE_CAP,
            cost_cap: DEFAULT_COST_CAP,
            compensated: false,
        }
    }
}

/// The spectral counter's output: the exact count plus its decomposition.
///
/// The identity `count = main_term + nonprincipal + principal_excess`
/// holds up to `residual`. `nonprincipal` collects every character
/// `t != 0` over all phase vectors; `principal_excess` is the principal
/// character's total minus `main_term`, so it collects the `t = 0` terms
/// with nonzero phase plus (for polynomial product forms only) the
/// deficit from box points where a form vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    /// The certified integer count.
    pub count: u64,
    /// `h^n / ((p-1) p^s)`.
    pub main_term: f64,
    /// Total contribution of the non-principal characters.
    pub nonprincipal: Complex64,
    /// Principal-character contribution beyond the main term.
    pub principal_excess: Complex64,
    /// Distance from the pre-rounding complex total to `count`.
    pub residual: f64,
    /// Regime and degeneracy notes carried over from the system.
    pub warnings: Vec<String>,
}

/// The main-term predictions for a system and box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPrediction {
    /// `h^n / p^(s+1)`, the density heuristic.
    pub main_term: f64,
    /// `h^n / ((p-1) p^s)`, the exact coefficient the spectral counter
    /// separates; differs from `main_term` by the factor `p/(p-1)`.
    pub separated_term: f64,
}

/// Predicted solution counts from the box volume; exact arithmetic on
/// `h`, `p`, `n`, `s` only, no counting involved.
pub fn predicted_density(sys: &SystemSpec, bx: &BoxSpec) -> DensityPrediction {
    debug_assert_eq!(sys.n(), bx.n());
    let p = sys.p() as f64;
    let h = bx.h() as f64;
    let n = sys.n() as i32;
    let s = sys.s() as i32;
    DensityPrediction {
        main_term: h.powi(n) / p.powi(s + 1),
        separated_term: h.powi(n) / ((p - 1.0) * p.powi(s)),
    }
}

fn check_compat(ctx: &FieldCtx, sys: &SystemSpec, bx: &BoxSpec) -> Result<(), CountError> {
    if sys.p() != ctx.p() {
        return Err(CountError::BadShape(format!(
            "system was built for p = {}, context has p = {}",
            sys.p(),
            ctx.p()
        )));
    }
    if sys.n() != bx.n() {
        return Err(CountError::DimensionMismatch {
            sys: sys.n(),
            bx: bx.n(),
        });
    }
    for (i, &ui) in bx.u().iter().enumerate() {
        validate_axis(ctx, i, ui, bx.h())?;
    }
    Ok(())
}

/// Per-variable tables shared by both counters: the product-form value
/// and each diagonal term at every box point of that axis.
struct AxisTables {
    /// `gval[i][idx] = G_i(u_i + 1 + idx) mod p`.
    gval: Vec<Vec<u32>>,
    /// `diag[i][idx * s + j] = c[i][j] * x^k[i][j] mod p`.
    diag: Vec<Vec<u32>>,
    /// Box points per axis where the product form vanishes.
    zeros: Vec<usize>,
}

fn build_axis_tables(ctx: &FieldCtx, sys: &SystemSpec, bx: &BoxSpec) -> AxisTables {
    let p = ctx.p() as u64;
    let m = p - 1;
    let n = sys.n();
    let s = sys.s();
    let h = bx.h();
    let mut gval = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    let mut zeros = Vec::with_capacity(n);
    for i in 0..n {
        let mut gv = Vec::with_capacity(h as usize);
        let mut dg = Vec::with_capacity(h as usize * s);
        let mut z = 0usize;
        for idx in 0..h {
            let x = bx.u()[i] + 1 + idx;
            let g = sys.forms()[i].eval(ctx, x);
            if g == 0 {
                z += 1;
            }
            gv.push(g);
            for j in 0..s {
                // x != 0, so exponents reduce mod p-1; a reduced
                // exponent of 0 means x^(p-1) = 1.
                let e = sys.k()[i][j] % m;
                let xe = if e == 0 {
                    1
                } else {
                    mod_pow(x as u64, e, p)
                };
                dg.push((sys.c()[i][j] as u64 * xe % p) as u32);
            }
        }
        gval.push(gv);
        diag.push(dg);
        zeros.push(z);
    }
    AxisTables { gval, diag, zeros }
}

/// Exact count by enumeration under the default evaluation cap.
pub fn count_bruteforce(ctx: &FieldCtx, sys: &SystemSpec, bx: &BoxSpec) -> Result<u64, CountError> {
    count_bruteforce_with(ctx, sys, bx, &CountOptions::default())
}

/// Exact count by enumeration with explicit options (only `brute_cap`
/// is consulted).
///
/// Walks the box depth first, keeping the running product and the `s`
/// running diagonal sums; a vanishing product form prunes the subtree.
/// The outermost axis is split across workers, which cannot affect the
/// result: subtree counts are integers and addition commutes.
pub fn count_bruteforce_with(
    ctx: &FieldCtx,
    sys: &SystemSpec,
    bx: &BoxSpec,
    opts: &CountOptions,
) -> Result<u64, CountError> {
    check_compat(ctx, sys, bx)?;
    let h = bx.h();
    let n = sys.n();
    let need = (h as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if need > opts.brute_cap {
        return Err(CountError::SizeGuard {
            need,
            cap: opts.brute_cap,
        });
    }
    let tables = build_axis_tables(ctx, sys, bx);
    let p = ctx.p();
    let s = sys.s();

    struct Frame<'a> {
        p: u32,
        s: usize,
        h: u32,
        a: u32,
        b: &'a [u32],
        tables: &'a AxisTables,
        n: usize,
    }

    fn descend(fr: &Frame<'_>, depth: usize, prod: u32, sums: &mut [u32], out: &mut u64) {
        let gv = &fr.tables.gval[depth];
        let dg = &fr.tables.diag[depth];
        let last = depth + 1 == fr.n;
        for idx in 0..fr.h as usize {
            let g = gv[idx];
            if g == 0 {
                continue;
            }
            let newprod = (prod as u64 * g as u64 % fr.p as u64) as u32;
            for j in 0..fr.s {
                let v = sums[j] + dg[idx * fr.s + j];
                sums[j] = if v >= fr.p { v - fr.p } else { v };
            }
            if last {
                if newprod == fr.a && &sums[..] == fr.b {
                    *out += 1;
                }
            } else {
                descend(fr, depth + 1, newprod, sums, out);
            }
            for j in 0..fr.s {
                let d = dg[idx * fr.s + j];
                sums[j] = if sums[j] >= d {
                    sums[j] - d
                } else {
                    sums[j] + fr.p - d
                };
            }
        }
    }

    let frame = Frame {
        p,
        s,
        h,
        a: sys.a(),
        b: sys.b(),
        tables: &tables,
        n,
    };
    let total: u64 = (0..h as usize)
        .into_par_iter()
        .map(|idx0| {
            let g = tables.gval[0][idx0];
            if g == 0 {
                return 0u64;
            }
            let mut sums: Vec<u32> = (0..s).map(|j| tables.diag[0][idx0 * s + j]).collect();
            let mut out = 0u64;
            if n == 1 {
                if g == sys.a() && sums == sys.b() {
                    out = 1;
                }
            } else {
                descend(&frame, 1, g, &mut sums, &mut out);
            }
            out
        })
        .sum();
    Ok(total)
}

/// A plain or compensated complex accumulator, chosen at run time so the
/// retry path can flip to compensation without duplicating the engine.
enum Accum {
    Plain(Complex64),
    Comp(KahanComplex),
}

impl Accum {
    fn new(compensated: bool) -> Self {
        if compensated {
            Accum::Comp(KahanComplex::default())
        } else {
            Accum::Plain(Complex64::new(0.0, 0.0))
        }
    }

    #[inline]
    fn add(&mut self, z: Complex64) {
        match self {
            Accum::Plain(acc) => *acc += z,
            Accum::Comp(acc) => acc.add(z),
        }
    }

    fn value(&self) -> Complex64 {
        match self {
            Accum::Plain(acc) => *acc,
            Accum::Comp(acc) => acc.value(),
        }
    }
}

/// One full spectral pass; returns the unnormalized principal and
/// non-principal totals (still to be divided by `(p-1) p^s`).
fn spectral_pass(
    ctx: &FieldCtx,
    sys: &SystemSpec,
    bx: &BoxSpec,
    tables: &AxisTables,
    algo: SumAlgorithm,
    compensated: bool,
) -> (Complex64, Complex64) {
    let p = ctx.p() as u64;
    let m = (p - 1) as usize;
    let n = sys.n();
    let s = sys.s();
    let h = bx.h() as usize;
    let kernel = SpectrumKernel::new(ctx, algo);
    let ind = ctx.ind_table();
    let mult_roots = ctx.mult_roots();

    // chi_t(a^{-1}) for every t, indexed by t.
    let d_ainv = ctx.dlog(ctx.inv(sys.a())) as u64;
    let chi_ainv: Vec<Complex64> = (0..m)
        .map(|t| mult_roots[(t as u64 * d_ainv % (m as u64)) as usize])
        .collect();

    // Discrete logs of the product-form values, u32::MAX marking zeros.
    let dlogs: Vec<Vec<u32>> = tables
        .gval
        .iter()
        .map(|gv| {
            gv.iter()
                .map(|&g| if g == 0 { u32::MAX } else { ind[g as usize] })
                .collect()
        })
        .collect();

    let phase_count: u64 = (p as u128).pow(s as u32) as u64;
    let chunks = phase_count.div_ceil(PHASE_CHUNK);

    let partials: Vec<(Complex64, Complex64)> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut principal = Accum::new(compensated);
            let mut nonprincipal = Accum::new(compensated);
            let mut lam = vec![0u32; s];
            let mut pairs: Vec<(u32, Complex64)> = Vec::with_capacity(h);
            let mut prod: Vec<Complex64> = Vec::new();
            let start = ci * PHASE_CHUNK;
            let end = (start + PHASE_CHUNK).min(phase_count);
            for li in start..end {
                // Decode the phase vector in row-major order, last
                // coordinate fastest.
                let mut rest = li;
                for j in (0..s).rev() {
                    lam[j] = (rest % p) as u32;
                    rest /= p;
                }
                let mut first = true;
                for i in 0..n {
                    pairs.clear();
                    let dl = &dlogs[i];
                    let dg = &tables.diag[i];
                    for idx in 0..h {
                        let d = dl[idx];
                        if d == u32::MAX {
                            continue;
                        }
                        let mut phase = 0u64;
                        for (j, &l) in lam.iter().enumerate() {
                            phase = (phase + l as u64 * dg[idx * s + j] as u64) % p;
                        }
                        pairs.push((d, ctx.add_char(phase)));
                    }
                    let spectrum = kernel.spectrum(ctx, &pairs);
                    if first {
                        prod = spectrum;
                        first = false;
                    } else {
                        for (acc, v) in prod.iter_mut().zip(spectrum.iter()) {
                            *acc *= v;
                        }
                    }
                }
                // e_p(-sum_j lam_j b_j).
                let mut bdot = 0u64;
                for (j, &l) in lam.iter().enumerate() {
                    bdot = (bdot + l as u64 * sys.b()[j] as u64) % p;
                }
                // bdot < p, so p - bdot is the additive inverse (p maps
                // to the zero phase).
                let w = ctx.add_char(p - bdot);
                let mut inner = Accum::new(compensated);
                for t in 1..m {
                    inner.add(chi_ainv[t] * prod[t]);
                }
                principal.add(w * prod[0]);
                nonprincipal.add(w * inner.value());
            }
            (principal.value(), nonprincipal.value())
        })
        .collect();

    let mut principal = Accum::new(compensated);
    let mut nonprincipal = Accum::new(compensated);
    for (pr, np) in partials {
        principal.add(pr);
        nonprincipal.add(np);
    }
    (principal.value(), nonprincipal.value())
}

/// Rounds a complex total to a certified integer count, or reports how
/// far it was from one.
fn certify_integer(total: Complex64) -> Result<(u64, f64), (f64, f64)> {
    let rounded = total.re.round();
    let tolerance = 1e-6 * rounded.abs().max(1.0);
    let residual = (total - Complex64::new(rounded, 0.0)).norm();
    if residual < tolerance && rounded >= 0.0 && rounded <= INT_EXACT_LIMIT {
        Ok((rounded as u64, residual))
    } else {
        Err((residual, tolerance))
    }
}

/// Exact count through the orthogonality decomposition, with defaults.
pub fn count_spectral(
    ctx: &FieldCtx,
    sys: &SystemSpec,
    bx: &BoxSpec,
) -> Result<CountResult, CountError> {
    count_spectral_with(ctx, sys, bx, &CountOptions::default())
}

/// Exact count through the orthogonality decomposition.
///
/// Cost is `p^s * (p-1) * n * h` kernel operations, guarded by
/// `opts.cost_cap`. The complex total must land within
/// `1e-6 * max(1, count)` of an integer; on a miss the pass reruns once
/// with compensated summation, and a second miss is an error rather
/// than a silent rounding.
pub fn count_spectral_with(
    ctx: &FieldCtx,
    sys: &SystemSpec,
    bx: &BoxSpec,
    opts: &CountOptions,
) -> Result<CountResult, CountError> {
    check_compat(ctx, sys, bx)?;
    let p = ctx.p() as u128;
    let need = p
        .checked_pow(sys.s() as u32)
        .and_then(|v| v.checked_mul(p - 1))
        .and_then(|v| v.checked_mul(sys.n() as u128))
        .and_then(|v| v.checked_mul(bx.h() as u128))
        .unwrap_or(u128::MAX);
    if need > opts.cost_cap {
        return Err(CountError::CostGuard {
            need,
            cap: opts.cost_cap,
        });
    }
    let tables = build_axis_tables(ctx, sys, bx);
    let denom = (ctx.p() as f64 - 1.0) * (ctx.p() as f64).powi(sys.s() as i32);
    let main_term = (bx.h() as f64).powi(sys.n() as i32) / denom;

    let mut compensated = opts.compensated;
    loop {
        let (pr_raw, np_raw) = spectral_pass(ctx, sys, bx, &tables, opts.algo, compensated);
        let principal = pr_raw / denom;
        let nonprincipal = np_raw / denom;
        let total = principal + nonprincipal;
        match certify_integer(total) {
            Ok((count, residual)) => {
                let mut warnings = sys.warnings().to_vec();
                for (i, &z) in tables.zeros.iter().enumerate() {
                    if z > 0 {
                        warnings.push(format!(
                            "product form for variable {i} ({}) vanishes at {z} box points; \
                             the deficit is folded into principal_excess",
                            sys.forms()[i].describe()
                        ));
                    }
                }
                return Ok(CountResult {
                    count,
                    main_term,
                    nonprincipal,
                    principal_excess: principal - main_term,
                    residual,
                    warnings,
                });
            }
            Err((residual, tolerance)) => {
                if compensated {
                    return Err(CountError::PrecisionLoss {
                        residual,
                        tolerance,
                    });
                }
                compensated = true;
            }
        }
    }
}

/// Exact count for the product congruence alone (`s = 0`), any number
/// of variables, through the character decomposition
/// `(1/(p-1)) sum_t chi_t(a^{-1}) prod_i T_i(t)`.
pub fn count_product_only(
    ctx: &FieldCtx,
    a: u64,
    bx: &BoxSpec,
    forms: &[ProductForm],
) -> Result<u64, CountError> {
    count_product_only_with(ctx, a, bx, forms, &CountOptions::default())
}

/// Product-only count with explicit options.
pub fn count_product_only_with(
    ctx: &FieldCtx,
    a: u64,
    bx: &BoxSpec,
    forms: &[ProductForm],
    opts: &CountOptions,
) -> Result<u64, CountError> {
    let p = ctx.p();
    let a_red = ctx.reduce(a);
    if a_red == 0 {
        return Err(CountError::NotAUnit {
            what: "product target a".to_string(),
            p,
        });
    }
    if forms.len() != bx.n() {
        return Err(CountError::BadShape(format!(
            "expected {} product forms, got {}",
            bx.n(),
            forms.len()
        )));
    }
    for (i, f) in forms.iter().enumerate() {
        f.validate(ctx, i)?;
        validate_axis(ctx, i, bx.u()[i], bx.h())?;
    }
    let need = ((p - 1) as u128)
        .checked_mul(bx.n() as u128)
        .and_then(|v| v.checked_mul(bx.h() as u128))
        .unwrap_or(u128::MAX);
    if need > opts.cost_cap {
        return Err(CountError::CostGuard {
            need,
            cap: opts.cost_cap,
        });
    }

    let m = (p - 1) as usize;
    let kernel = SpectrumKernel::new(ctx, opts.algo);
    let ind = ctx.ind_table();
    let mult_roots = ctx.mult_roots();
    let d_ainv = ctx.dlog(ctx.inv(a_red)) as u64;

    let one = Complex64::new(1.0, 0.0);
    let mut prod: Vec<Complex64> = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        let pairs: Vec<(u32, Complex64)> = (0..bx.h())
            .filter_map(|idx| {
                let x = bx.u()[i] + 1 + idx;
                let g = f.eval(ctx, x);
                if g == 0 {
                    None
                } else {
                    Some((ind[g as usize], one))
                }
            })
            .collect();
        let spectrum = kernel.spectrum(ctx, &pairs);
        if i == 0 {
            prod = spectrum;
        } else {
            for (acc, v) in prod.iter_mut().zip(spectrum.iter()) {
                *acc *= v;
            }
        }
    }

    let mut compensated = opts.compensated;
    loop {
        let mut acc = Accum::new(compensated);
        for (t, value) in prod.iter().enumerate() {
            let chi = mult_roots[(t as u64 * d_ainv % (m as u64)) as usize];
            acc.add(chi * value);
        }
        let total = acc.value() / m as f64;
        match certify_integer(total) {
            Ok((count, _)) => return Ok(count),
            Err((residual, tolerance)) => {
                if compensated {
                    return Err(CountError::PrecisionLoss {
                        residual,
                        tolerance,
                    });
                }
                compensated = true;
            }
        }
    }
}
